//! SOS and RSOS vector representations, the R-matrix as a graded morphism,
//! Boltzmann weights and the star-triangle relation.
//!
//! Every tensor power of the vector representation has one-dimensional
//! components, so a basis of `V^{⊗L}` is the set of height paths of length `L`
//! (a start point and a sequence of unit steps). The path engine below applies
//! `Ř` to two adjacent steps at the height reached before them.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_complex::Complex64;

use crate::elliptic::EllipticParams;
use crate::error::{Error, Result};
use crate::graded::{
    associator, tensor_layout, tensor_morphism, tensor_space, CMatrix, Context, GradedMorphism,
    GradedSpace,
};
use crate::groupoid::{
    alcove_contains, enumerate_alcove, AlcoveSpec, Arrow, Base, LatticeVector, WeightPoint,
};

/// Components whose modulus exceeds this are not allowed to be dropped.
pub const RESTRICTION_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum VectorSpaceKind {
    /// Generic base `b`; graded spaces are materialised on the points
    /// `b + μ` with `|μ_i| ≤ window` (canonical representatives).
    Sos { base: Vec<Complex64>, window: i64 },
    /// Heights in the alcove `P^r_{++}`.
    Rsos { level: i64 },
}

/// A model: vector representation plus elliptic parameters.
#[derive(Clone, Debug)]
pub struct Model {
    kind: VectorSpaceKind,
    params: EllipticParams,
    ctx: Context,
    alcove: Option<AlcoveSpec>,
    points: Vec<WeightPoint>,
}

impl Model {
    pub fn new(kind: VectorSpaceKind, params: EllipticParams) -> Result<Self> {
        let n = params.rank();
        match &kind {
            VectorSpaceKind::Rsos { level } => {
                if params.level() != Some(*level) {
                    return Err(Error::InvalidParams(format!(
                        "RSOS level {level} requires gamma = 1/{level}, got {}",
                        params.gamma()
                    )));
                }
                let spec = AlcoveSpec::regular_affine(n, *level);
                let points = enumerate_alcove(&spec)?;
                Ok(Model {
                    ctx: Context::rsos(n, *level),
                    alcove: Some(spec),
                    points,
                    kind,
                    params,
                })
            }
            VectorSpaceKind::Sos { base, window } => {
                if base.len() != n {
                    return Err(Error::ShapeMismatch(format!(
                        "base of rank {} with parameters of rank {n}",
                        base.len()
                    )));
                }
                check_generic_base(base, &params)?;
                let base_pt = Base::new(base.clone());
                let points = window_points(&base_pt, *window);
                Ok(Model {
                    ctx: Context::sos(base_pt),
                    alcove: None,
                    points,
                    kind,
                    params,
                })
            }
        }
    }

    pub fn rsos(rank: usize, level: i64, tau: Complex64) -> Result<Self> {
        Self::new(
            VectorSpaceKind::Rsos { level },
            EllipticParams::rsos(rank, level, tau)?,
        )
    }

    pub fn sos(base: Vec<Complex64>, window: i64, params: EllipticParams) -> Result<Self> {
        Self::new(VectorSpaceKind::Sos { base, window }, params)
    }

    pub fn kind(&self) -> &VectorSpaceKind {
        &self.kind
    }

    pub fn params(&self) -> &EllipticParams {
        &self.params
    }

    pub fn rank(&self) -> usize {
        self.params.rank()
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    /// Alcove points (RSOS) or the materialised window (SOS), sorted.
    pub fn points(&self) -> &[WeightPoint] {
        &self.points
    }

    pub fn is_restricted(&self) -> bool {
        self.alcove.is_some()
    }

    /// Whether `p` is an allowed height.
    pub fn contains(&self, p: &WeightPoint) -> bool {
        match &self.alcove {
            Some(spec) => alcove_contains(p, spec),
            None => p.base() == &self.ctx.base,
        }
    }

    /// SOS points whose offset coordinates are bounded by `radius`; all
    /// alcove points in the RSOS case.
    pub fn core_points(&self, radius: i64) -> Vec<WeightPoint> {
        match self.kind {
            VectorSpaceKind::Rsos { .. } => self.points.clone(),
            VectorSpaceKind::Sos { .. } => window_points(&self.ctx.base, radius),
        }
    }

    /// The graded vector representation: `(a, ε_i)` with both ends allowed.
    pub fn vector_space(&self) -> GradedSpace {
        let n = self.rank();
        let mut dims = Vec::new();
        for a in &self.points {
            for i in 0..n {
                if self.contains(&a.shifted_unit(i)) {
                    dims.push((Arrow::new(a.clone(), LatticeVector::unit(n, i)), 1));
                }
            }
        }
        GradedSpace::new(self.ctx.clone(), dims)
    }

    pub fn flat_r(&self, z: Complex64, a: &WeightPoint) -> Result<CMatrix> {
        self.params.r_matrix(z, a)
    }

    /// `Ř(z)` as an endomorphism of `V ⊗ V`, read off from `Ř(z, a)` at the
    /// source of each component. Dropped components must vanish.
    pub fn restricted_r(&self, z: Complex64) -> Result<GradedMorphism> {
        let v = self.vector_space();
        let vv = Arc::new(tensor_space(&v, &v)?);
        let n = self.rank();
        let mut blocks = BTreeMap::new();
        let mut flat_cache: HashMap<WeightPoint, CMatrix> = HashMap::new();
        for (gamma, dim) in vv.arrows() {
            let layout = tensor_layout(&v, &v, gamma);
            if !flat_cache.contains_key(&gamma.source) {
                flat_cache.insert(gamma.source.clone(), self.flat_r(z, &gamma.source)?);
            }
            let flat = &flat_cache[&gamma.source];
            let pair = |s: &crate::graded::Summand| {
                (
                    s.first.shift.as_unit().expect("unit step"),
                    s.second.shift.as_unit().expect("unit step"),
                )
            };
            let mut block = CMatrix::zeros(dim, dim);
            for s in &layout {
                let (i, j) = pair(s);
                let col = n * i + j;
                for t in &layout {
                    let (k, l) = pair(t);
                    block[(t.offset, s.offset)] = flat[(n * k + l, col)];
                }
                if i != j {
                    let present = layout.iter().any(|t| pair(t) == (j, i));
                    let dropped = flat[(n * j + i, col)].norm();
                    let disallowed = !self.contains(&gamma.source.shifted_unit(j));
                    if !present && disallowed && dropped > RESTRICTION_TOLERANCE {
                        return Err(Error::RestrictionViolated {
                            point: gamma.source.to_string(),
                            component: format!("e_{}⊗e_{} → e_{}⊗e_{}", i + 1, j + 1, j + 1, i + 1),
                            modulus: dropped,
                        });
                    }
                }
            }
            blocks.insert(gamma.clone(), block);
        }
        GradedMorphism::new(vv.clone(), vv, blocks)
    }

    /// The face weight `𝒲(z; α, β, γ, δ)`: the component of `Ř(z)` from
    /// `V_α ⊗ V_β` to `V_γ ⊗ V_δ`, zero when a component is absent.
    pub fn boltzmann_weight(
        &self,
        z: Complex64,
        alpha: &Arrow,
        beta: &Arrow,
        gamma: &Arrow,
        delta: &Arrow,
    ) -> Result<Complex64> {
        let closes = alpha.source == gamma.source
            && alpha.target() == beta.source
            && gamma.target() == delta.source
            && beta.target() == delta.target();
        if !closes {
            return Err(Error::NonSquare(format!(
                "{alpha}, {beta}, {gamma}, {delta}"
            )));
        }
        let units = [alpha, beta, gamma, delta].map(|a| a.shift.as_unit());
        let [Some(j), Some(i), Some(k), Some(l)] = units else {
            return Ok(Complex64::new(0.0, 0.0));
        };
        let a = &alpha.source;
        let allowed = [a, &alpha.target(), &gamma.target(), &beta.target()]
            .iter()
            .all(|p| self.contains(p));
        if !allowed {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let n = self.rank();
        Ok(self.flat_r(z, a)?[(n * k + l, n * j + i)])
    }

    /// Largest forbidden component `e_j⊗e_i → e_i⊗e_j` of `Ř(z, a)` over all
    /// `a` with `a, a+ε_j, a+ε_i+ε_j` allowed and `a+ε_i` not, together with
    /// the number of such components.
    pub fn restriction_residual(&self, z: Complex64) -> Result<(f64, usize)> {
        let n = self.rank();
        let mut worst: f64 = 0.0;
        let mut count = 0;
        for a in &self.points {
            let mut flat = None;
            for i in 0..n {
                if self.contains(&a.shifted_unit(i)) {
                    continue;
                }
                for j in 0..n {
                    if i == j
                        || !self.contains(&a.shifted_unit(j))
                        || !self.contains(&a.shifted_unit(j).shifted_unit(i))
                    {
                        continue;
                    }
                    if flat.is_none() {
                        flat = Some(self.flat_r(z, a)?);
                    }
                    let m = flat.as_ref().expect("computed above");
                    worst = worst.max(m[(n * i + j, n * j + i)].norm());
                    count += 1;
                }
            }
        }
        Ok((worst, count))
    }

    /// Star-triangle relation on three-step height paths:
    /// `Ř₂₃(z−w) Ř₁₂(z) Ř₂₃(w) = Ř₁₂(w) Ř₂₃(z) Ř₁₂(z−w)`, each matrix element
    /// being a sum over internal heights of products of face weights.
    /// For SOS models the paths start at core points of radius `window`.
    pub fn star_triangle_residual(&self, z: Complex64, w: Complex64) -> Result<f64> {
        let space = PathSpace::new(self, &self.points, 3);
        let mut faces = FaceCache::new(self);
        let mut worst: f64 = 0.0;
        for p in 0..space.len() {
            let mut e = vec![Complex64::new(0.0, 0.0); space.len()];
            e[p] = Complex64::new(1.0, 0.0);
            let lhs = {
                let v = faces.apply(&space, w, 1, &e)?;
                let v = faces.apply(&space, z, 0, &v)?;
                faces.apply(&space, z - w, 1, &v)?
            };
            let rhs = {
                let v = faces.apply(&space, z - w, 0, &e)?;
                let v = faces.apply(&space, z, 1, &v)?;
                faces.apply(&space, w, 0, &v)?
            };
            for (x, y) in lhs.iter().zip(&rhs) {
                worst = worst.max((x - y).norm());
            }
        }
        Ok(worst)
    }

    /// The same relation on `V ⊗ V ⊗ V` built from graded morphisms and the
    /// associator. SOS comparisons are limited to sources of radius `core`
    /// so that window truncation does not interfere.
    pub fn graded_ybe_residual(&self, z: Complex64, w: Complex64, core: i64) -> Result<f64> {
        let v = Arc::new(self.vector_space());
        let id = GradedMorphism::identity(v.clone());
        let assoc = associator(&v, &v, &v)?;
        let assoc_inv = assoc.inverse()?;
        let r12 = |x: Complex64| -> Result<GradedMorphism> {
            let r = self.restricted_r(x)?;
            assoc.compose(&tensor_morphism(&r, &id)?)?.compose(&assoc_inv)
        };
        let r23 = |x: Complex64| -> Result<GradedMorphism> {
            tensor_morphism(&id, &self.restricted_r(x)?)
        };
        let lhs = r23(z - w)?.compose(&r12(z)?)?.compose(&r23(w)?)?;
        let rhs = r12(w)?.compose(&r23(z)?)?.compose(&r12(z - w)?)?;
        let core_pts: std::collections::BTreeSet<WeightPoint> =
            self.core_points(core).into_iter().collect();
        let mut worst: f64 = 0.0;
        for (gamma, _) in lhs.domain().arrows() {
            if !core_pts.contains(&gamma.source) {
                continue;
            }
            let d = lhs.block_or_zero(gamma) - rhs.block_or_zero(gamma);
            worst = worst.max(crate::graded::max_abs(&d));
        }
        Ok(worst)
    }

    /// CSV of all nonzero face weights at `z`:
    /// `a,in_steps,out_steps,weight_re,weight_im`, steps 1-based.
    pub fn boltzmann_csv(&self, z: Complex64) -> Result<String> {
        let n = self.rank();
        let mut out = String::from("a,in_steps,out_steps,weight_re,weight_im\n");
        for a in &self.points {
            let flat = self.flat_r(z, a)?;
            for i in 0..n {
                for j in 0..n {
                    if !self.path_allowed(a, &[i, j]) {
                        continue;
                    }
                    let mut outs = vec![(i, j)];
                    if i != j {
                        outs.push((j, i));
                    }
                    for (k, l) in outs {
                        if !self.path_allowed(a, &[k, l]) {
                            continue;
                        }
                        let wgt = flat[(n * k + l, n * i + j)];
                        out.push_str(&format!(
                            "{},{};{},{};{},{:.16e},{:.16e}\n",
                            crate::convolution::join(a.offset().coords()),
                            i + 1,
                            j + 1,
                            k + 1,
                            l + 1,
                            wgt.re,
                            wgt.im
                        ));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Whether every height along the path from `a` is allowed.
    pub fn path_allowed(&self, a: &WeightPoint, steps: &[usize]) -> bool {
        let mut p = a.clone();
        if !self.contains(&p) {
            return false;
        }
        for &s in steps {
            p = p.shifted_unit(s);
            if !self.contains(&p) {
                return false;
            }
        }
        true
    }
}

fn check_generic_base(base: &[Complex64], params: &EllipticParams) -> Result<()> {
    // b_i - b_j + Z must avoid the period lattice Z/γ + Zτ/γ.
    let Some(r) = params.level() else {
        return Ok(());
    };
    let period = params.tau() * r as f64;
    for i in 0..base.len() {
        for j in 0..base.len() {
            if i == j {
                continue;
            }
            let d = base[i] - base[j];
            let k = d.im / period.im;
            let rest = d - period * k.round();
            if (k - k.round()).abs() < 1e-9 && (rest.re - rest.re.round()).abs() < 1e-9 && rest.im.abs() < 1e-9 {
                return Err(Error::BaseOnSingularSet {
                    i: i + 1,
                    j: j + 1,
                    diff: d.to_string(),
                });
            }
        }
    }
    Ok(())
}

fn window_points(base: &Base, radius: i64) -> Vec<WeightPoint> {
    let n = base.rank();
    let mut out = Vec::new();
    let mut coords = vec![0i64; n];
    fn rec(k: usize, n: usize, radius: i64, coords: &mut Vec<i64>, base: &Base, out: &mut Vec<WeightPoint>) {
        if k + 1 == n {
            out.push(WeightPoint::new(base.clone(), LatticeVector::new(coords.clone())));
            return;
        }
        for c in -radius..=radius {
            coords[k] = c;
            rec(k + 1, n, radius, coords, base, out);
        }
    }
    rec(0, n, radius, &mut coords, base, &mut out);
    out.sort();
    out
}

/// A height path: start point and a sequence of unit steps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: WeightPoint,
    pub steps: Vec<usize>,
}

impl Path {
    /// The height after the first `k` steps.
    pub fn point_at(&self, k: usize) -> WeightPoint {
        let n = self.start.rank();
        let mut mu = vec![0i64; n];
        for &s in &self.steps[..k] {
            mu[s] += 1;
        }
        self.start.shifted(&LatticeVector::new(mu))
    }

    pub fn end(&self) -> WeightPoint {
        self.point_at(self.steps.len())
    }
}

/// The basis of `V^{⊗L}` over a set of start points, in (start, steps) order.
#[derive(Clone, Debug)]
pub struct PathSpace {
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
}

impl PathSpace {
    pub fn new(model: &Model, starts: &[WeightPoint], len: usize) -> Self {
        Self::filtered(model, starts, len, |_| true)
    }

    /// Closed paths: the end point equals the start point in `h*_0`.
    pub fn closed(model: &Model, starts: &[WeightPoint], len: usize) -> Self {
        Self::filtered(model, starts, len, |p| p.end() == p.start)
    }

    pub fn filtered(
        model: &Model,
        starts: &[WeightPoint],
        len: usize,
        keep: impl Fn(&Path) -> bool,
    ) -> Self {
        let n = model.rank();
        let mut paths = Vec::new();
        for a in starts {
            if !model.contains(a) {
                continue;
            }
            let mut steps = Vec::with_capacity(len);
            extend(model, n, len, a, a.clone(), &mut steps, &keep, &mut paths);
        }
        paths.sort();
        let index = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        PathSpace { paths, index }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    model: &Model,
    n: usize,
    len: usize,
    start: &WeightPoint,
    here: WeightPoint,
    steps: &mut Vec<usize>,
    keep: &impl Fn(&Path) -> bool,
    out: &mut Vec<Path>,
) {
    if steps.len() == len {
        let p = Path {
            start: start.clone(),
            steps: steps.clone(),
        };
        if keep(&p) {
            out.push(p);
        }
        return;
    }
    for i in 0..n {
        let next = here.shifted_unit(i);
        if model.contains(&next) {
            steps.push(i);
            extend(model, n, len, start, next, steps, keep, out);
            steps.pop();
        }
    }
}

/// Memoised `Ř(z, a)` evaluations for one computation.
pub struct FaceCache<'m> {
    model: &'m Model,
    cache: HashMap<(u64, u64, WeightPoint), CMatrix>,
}

impl<'m> FaceCache<'m> {
    pub fn new(model: &'m Model) -> Self {
        FaceCache {
            model,
            cache: HashMap::new(),
        }
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub fn flat(&mut self, z: Complex64, a: &WeightPoint) -> Result<&CMatrix> {
        let key = (z.re.to_bits(), z.im.to_bits(), a.clone());
        if !self.cache.contains_key(&key) {
            let m = self.model.flat_r(z, a)?;
            self.cache.insert(key.clone(), m);
        }
        Ok(&self.cache[&key])
    }

    /// Face weight at height `a` from steps `(i, j)` to steps `(k, l)`.
    pub fn face(&mut self, z: Complex64, a: &WeightPoint, from: (usize, usize), to: (usize, usize)) -> Result<Complex64> {
        let n = self.model.rank();
        Ok(self.flat(z, a)?[(n * to.0 + to.1, n * from.0 + from.1)])
    }

    /// Apply `Ř(z)` to steps `pos, pos+1` of every path.
    pub fn apply(&mut self, space: &PathSpace, z: Complex64, pos: usize, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(0.0, 0.0); space.len()];
        for (idx, path) in space.paths.iter().enumerate() {
            if v[idx] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let q = path.point_at(pos);
            let (i, j) = (path.steps[pos], path.steps[pos + 1]);
            let mut targets = vec![(i, j)];
            if i != j {
                targets.push((j, i));
            }
            for (k, l) in targets {
                let wgt = self.face(z, &q, (i, j), (k, l))?;
                let mut steps = path.steps.clone();
                steps[pos] = k;
                steps[pos + 1] = l;
                let image = Path {
                    start: path.start.clone(),
                    steps,
                };
                match space.index_of(&image) {
                    Some(t) => out[t] += wgt * v[idx],
                    None if wgt.norm() > RESTRICTION_TOLERANCE
                        && !self.model.path_allowed(&image.start, &image.steps) =>
                    {
                        return Err(Error::RestrictionViolated {
                            point: q.to_string(),
                            component: format!("e_{}⊗e_{} → e_{}⊗e_{}", i + 1, j + 1, k + 1, l + 1),
                            modulus: wgt.norm(),
                        });
                    }
                    None => {}
                }
            }
        }
        Ok(out)
    }
}
