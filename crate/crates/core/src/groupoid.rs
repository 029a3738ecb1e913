//! Weight-lattice points, arrows of the action groupoid `O_b ⋊ P` and the
//! standard alcoves of the `gl_n` weight lattice.
//!
//! The lattice `P = Z^n` acts on `h*_0 = C^n / C(1,…,1)` by translation. A
//! point of an orbit `O_b = b + P` is stored as the base `b` together with an
//! integer offset, canonicalised so that the last offset coordinate is zero.
//! Shifts of arrows are *not* reduced: `(a, ε_1 + ε_2)` and `(a, 0)` are
//! different arrows even though both are loops at `a` when `n = 2`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of the weight lattice `P = ⊕ Z ε_i`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeVector(coords)
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![0; rank])
    }

    /// The basis vector `ε_i` (zero-based index).
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        LatticeVector(v)
    }

    /// `Σ_{i ∈ indices} ε_i`.
    pub fn sum_of_units(rank: usize, indices: &[usize]) -> Self {
        let mut v = vec![0; rank];
        for &i in indices {
            v[i] += 1;
        }
        LatticeVector(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// True when the vector lies in `Z(1,…,1)`, i.e. acts trivially on `h*_0`.
    pub fn is_central(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    /// The index `i` if this vector is `ε_i`.
    pub fn as_unit(&self) -> Option<usize> {
        let mut found = None;
        for (i, &c) in self.0.iter().enumerate() {
            match c {
                0 => {}
                1 if found.is_none() => found = Some(i),
                _ => return None,
            }
        }
        found
    }

    /// Sum of the coordinates.
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    fn canonical(mut self) -> Self {
        if let Some(&last) = self.0.last() {
            for c in &mut self.0 {
                *c -= last;
            }
        }
        self
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }
}

/// Base point `b` of an orbit `O_b`. Compared bitwise, since bases are user
/// inputs rather than computed quantities.
#[derive(Clone)]
pub struct Base(Arc<[Complex64]>);

impl Base {
    pub fn zero(rank: usize) -> Self {
        Base(vec![Complex64::new(0.0, 0.0); rank].into())
    }

    pub fn new(coords: Vec<Complex64>) -> Self {
        Base(coords.into())
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    fn bits(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.0.iter().map(|c| (c.re.to_bits(), c.im.to_bits()))
    }
}

impl PartialEq for Base {
    fn eq(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.bits().eq(other.bits())
    }
}

impl Eq for Base {}

impl PartialOrd for Base {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Base {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| self.0.len().cmp(&other.0.len()))
    }
}

impl Hash for Base {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for b in self.bits() {
            b.hash(state);
        }
    }
}

impl fmt::Debug for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// A point `a = b + offset` of an orbit `O_b ⊂ h*_0`, stored in canonical
/// form (last offset coordinate zero).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightPoint {
    base: Base,
    offset: LatticeVector,
}

impl WeightPoint {
    pub fn new(base: Base, offset: LatticeVector) -> Self {
        assert_eq!(base.rank(), offset.rank(), "rank mismatch");
        WeightPoint {
            base,
            offset: offset.canonical(),
        }
    }

    /// A point of the integral orbit `O_0 = P`.
    pub fn integral(coords: &[i64]) -> Self {
        let offset = LatticeVector::new(coords.to_vec());
        WeightPoint::new(Base::zero(offset.rank()), offset)
    }

    pub fn rank(&self) -> usize {
        self.offset.rank()
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    /// Canonical integer offset from the base.
    pub fn offset(&self) -> &LatticeVector {
        &self.offset
    }

    /// Canonical integer coordinates, if the point lies in `O_0`.
    pub fn integer_coords(&self) -> Option<&[i64]> {
        self.base.is_zero().then(|| self.offset.coords())
    }

    /// Complex coordinates `b + offset` of the canonical representative.
    pub fn coords(&self) -> Vec<Complex64> {
        self.base
            .coords()
            .iter()
            .zip(self.offset.coords())
            .map(|(b, &o)| b + o as f64)
            .collect()
    }

    /// `a_i - a_j`.
    pub fn diff(&self, i: usize, j: usize) -> Complex64 {
        let b = self.base.coords();
        let o = self.offset.coords();
        (b[i] - b[j]) + (o[i] - o[j]) as f64
    }

    pub fn shifted(&self, mu: &LatticeVector) -> WeightPoint {
        WeightPoint::new(self.base.clone(), &self.offset + mu)
    }

    pub fn shifted_unit(&self, i: usize) -> WeightPoint {
        self.shifted(&LatticeVector::unit(self.rank(), i))
    }
}

impl fmt::Debug for WeightPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base.is_zero() {
            write!(f, "{}", self.offset)
        } else {
            write!(f, "{:?}+{}", self.base, self.offset)
        }
    }
}

impl fmt::Display for WeightPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// An arrow `(a, μ)` from `a` to `a + μ`.
///
/// Ordered by canonical source coordinates, then shift.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub source: WeightPoint,
    pub shift: LatticeVector,
}

impl Arrow {
    pub fn new(source: WeightPoint, shift: LatticeVector) -> Self {
        assert_eq!(source.rank(), shift.rank(), "rank mismatch");
        Arrow { source, shift }
    }

    pub fn identity(point: WeightPoint) -> Self {
        let rank = point.rank();
        Arrow::new(point, LatticeVector::zero(rank))
    }

    pub fn target(&self) -> WeightPoint {
        self.source.shifted(&self.shift)
    }

    pub fn is_identity(&self) -> bool {
        self.shift.is_zero()
    }

    /// True when source and target coincide in `h*_0`.
    pub fn is_loop(&self) -> bool {
        self.shift.is_central()
    }

    /// `later ∘ earlier`: defined when `later` starts where `earlier` ends.
    pub fn compose(later: &Arrow, earlier: &Arrow) -> Result<Arrow> {
        if later.source != earlier.target() {
            return Err(Error::NonComposable {
                later: later.to_string(),
                earlier: earlier.to_string(),
            });
        }
        Ok(Arrow::new(
            earlier.source.clone(),
            &earlier.shift + &later.shift,
        ))
    }

    pub fn inverse(&self) -> Arrow {
        Arrow::new(self.target(), -&self.shift)
    }
}

impl fmt::Debug for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {})", self.source, self.shift)
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlcoveKind {
    /// `P_+`: `a_1 ≥ … ≥ a_n`.
    Dominant,
    /// `P_{++}`: `a_1 > … > a_n`.
    RegularDominant,
    /// `P^r_+`: dominant with `a_1 - a_n ≤ r`.
    AffineDominant,
    /// `P^r_{++}`: regular dominant with `a_1 - a_n < r`.
    RegularAffineDominant,
}

impl AlcoveKind {
    pub fn is_finite(self) -> bool {
        matches!(
            self,
            AlcoveKind::AffineDominant | AlcoveKind::RegularAffineDominant
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlcoveSpec {
    pub rank: usize,
    pub level: i64,
    pub kind: AlcoveKind,
}

impl AlcoveSpec {
    /// The RSOS height set `P^r_{++}`.
    pub fn regular_affine(rank: usize, level: i64) -> Self {
        AlcoveSpec {
            rank,
            level,
            kind: AlcoveKind::RegularAffineDominant,
        }
    }

    pub fn affine(rank: usize, level: i64) -> Self {
        AlcoveSpec {
            rank,
            level,
            kind: AlcoveKind::AffineDominant,
        }
    }
}

/// Membership test on integer coordinates; every condition is invariant under
/// shifts by `(1,…,1)`, so any representative works.
pub fn contains_coords(a: &[i64], spec: &AlcoveSpec) -> bool {
    if a.len() != spec.rank || a.is_empty() {
        return false;
    }
    let strict = matches!(
        spec.kind,
        AlcoveKind::RegularDominant | AlcoveKind::RegularAffineDominant
    );
    let ordered = a
        .windows(2)
        .all(|w| if strict { w[0] > w[1] } else { w[0] >= w[1] });
    if !ordered {
        return false;
    }
    let spread = a[0] - a[a.len() - 1];
    match spec.kind {
        AlcoveKind::Dominant | AlcoveKind::RegularDominant => true,
        AlcoveKind::AffineDominant => spread <= spec.level,
        AlcoveKind::RegularAffineDominant => spread < spec.level,
    }
}

/// Points with non-zero base never lie in an alcove.
pub fn alcove_contains(a: &WeightPoint, spec: &AlcoveSpec) -> bool {
    a.integer_coords()
        .is_some_and(|coords| contains_coords(coords, spec))
}

/// All canonical points of a finite alcove in lexicographic order.
pub fn enumerate_alcove(spec: &AlcoveSpec) -> Result<Vec<WeightPoint>> {
    if !spec.kind.is_finite() {
        return Err(Error::InfiniteSet(format!("{:?}", spec.kind)));
    }
    let n = spec.rank;
    let mut out = Vec::new();
    if n == 0 || spec.level < 0 {
        return Ok(out);
    }
    // canonical representatives have a_n = 0, so every coordinate lies in [0, r]
    let mut coords = vec![0i64; n];
    fn rec(
        pos: usize,
        coords: &mut Vec<i64>,
        spec: &AlcoveSpec,
        out: &mut Vec<WeightPoint>,
    ) {
        let n = coords.len();
        if pos == n - 1 {
            coords[pos] = 0;
            if contains_coords(coords, spec) {
                out.push(WeightPoint::integral(coords));
            }
            return;
        }
        for c in 0..=spec.level {
            coords[pos] = c;
            rec(pos + 1, coords, spec, out);
        }
    }
    rec(0, &mut coords, spec, &mut out);
    Ok(out)
}

/// `ρ = (n-1, …, 1, 0)`.
pub fn rho(rank: usize) -> LatticeVector {
    LatticeVector::new((0..rank).rev().map(|c| c as i64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> LatticeVector {
        LatticeVector::unit(n, i)
    }

    #[test]
    fn compose_adds_shifts() {
        let a = WeightPoint::integral(&[3, 1, 0]);
        let first = Arrow::new(a.clone(), e(3, 0));
        let second = Arrow::new(WeightPoint::integral(&[4, 1, 0]), e(3, 1));
        let c = Arrow::compose(&second, &first).unwrap();
        assert_eq!(c.source, a);
        assert_eq!(c.shift, LatticeVector::new(vec![1, 1, 0]));
    }

    #[test]
    fn compose_rejects_gap() {
        let a = WeightPoint::integral(&[3, 1, 0]);
        let first = Arrow::new(a.clone(), e(3, 0));
        let wrong = Arrow::new(a, e(3, 1));
        assert!(matches!(
            Arrow::compose(&wrong, &first),
            Err(Error::NonComposable { .. })
        ));
    }

    #[test]
    fn unit_and_inverse_laws() {
        let g = Arrow::new(WeightPoint::integral(&[2, 1, 0]), e(3, 2));
        let id = Arrow::identity(g.source.clone());
        assert_eq!(Arrow::compose(&g, &id).unwrap(), g);
        let back = Arrow::compose(&g.inverse(), &g).unwrap();
        assert_eq!(back, id);
        assert_eq!(id.inverse(), id);
        assert_eq!(g.inverse().inverse(), g);
    }

    #[test]
    fn canonical_representative() {
        let p = WeightPoint::integral(&[5, 3, 2]);
        assert_eq!(p.offset().coords(), &[3, 1, 0]);
        assert_eq!(p, WeightPoint::integral(&[3, 1, 0]));
        // (1,1) acts trivially on points but not on arrows
        let u = LatticeVector::new(vec![1, 1]);
        let a = WeightPoint::integral(&[2, 0]);
        assert_eq!(a.shifted(&u), a);
        assert!(Arrow::new(a.clone(), u).is_loop());
        assert_ne!(
            Arrow::new(a.clone(), LatticeVector::new(vec![1, 1])),
            Arrow::identity(a)
        );
    }

    #[test]
    fn alcove_membership_n2() {
        let spec = AlcoveSpec::regular_affine(2, 5);
        for l in 0..=5 {
            let inside = alcove_contains(&WeightPoint::integral(&[l, 0]), &spec);
            assert_eq!(inside, (1..=4).contains(&l), "l = {l}");
        }
    }

    #[test]
    fn alcove_membership_n3() {
        assert!(alcove_contains(
            &WeightPoint::integral(&[2, 1, 0]),
            &AlcoveSpec::regular_affine(3, 5)
        ));
        let r4 = AlcoveSpec::regular_affine(3, 4);
        assert!(alcove_contains(&WeightPoint::integral(&[3, 1, 0]), &r4));
        assert!(alcove_contains(&WeightPoint::integral(&[3, 2, 0]), &r4));
        assert!(!alcove_contains(&WeightPoint::integral(&[4, 1, 0]), &r4));
    }

    #[test]
    fn non_integral_points_are_outside() {
        let b = Base::new(vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)]);
        let p = WeightPoint::new(b, LatticeVector::new(vec![2, 0]));
        assert!(!alcove_contains(&p, &AlcoveSpec::regular_affine(2, 5)));
    }

    #[test]
    fn enumerate_small_alcoves() {
        let a = enumerate_alcove(&AlcoveSpec::regular_affine(2, 5)).unwrap();
        let ls: Vec<i64> = a.iter().map(|p| p.offset().coords()[0]).collect();
        assert_eq!(ls, vec![1, 2, 3, 4]);
        assert_eq!(
            enumerate_alcove(&AlcoveSpec::regular_affine(2, 4))
                .unwrap()
                .len(),
            3
        );
        assert_eq!(
            enumerate_alcove(&AlcoveSpec::regular_affine(3, 5))
                .unwrap()
                .len(),
            6
        );
        let infinite = AlcoveSpec {
            rank: 2,
            level: 5,
            kind: AlcoveKind::Dominant,
        };
        assert!(matches!(
            enumerate_alcove(&infinite),
            Err(Error::InfiniteSet(_))
        ));
    }

    #[test]
    fn as_unit_detects_basis_vectors() {
        assert_eq!(e(3, 1).as_unit(), Some(1));
        assert_eq!(LatticeVector::new(vec![1, 1, 0]).as_unit(), None);
        assert_eq!(LatticeVector::zero(3).as_unit(), None);
        assert_eq!(LatticeVector::new(vec![0, -1, 0]).as_unit(), None);
    }
}
