//! Symmetric and exterior squares from the degenerate points `z = ±1`,
//! characters of symmetric and exterior powers, the `n = 2` fusion rules and
//! the joint eigenfunctions of the exterior-power characters.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::convolution::ConvolutionElement;
use crate::error::{Error, Result};
use crate::graded::{CMatrix, Context};
use crate::groupoid::{
    alcove_contains, contains_coords, enumerate_alcove, AlcoveSpec, Arrow, LatticeVector,
    WeightPoint,
};
use crate::rsos::Model;

/// Singular values below this fraction of the largest one count as zero.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// Which case of the kernel/image analysis a weight space falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FusionCase {
    /// `i = j`: one path, `Ř_reg(1)` vanishes.
    Diagonal,
    /// `i ≠ j`, both orders allowed: two paths.
    Generic,
    /// `i ≠ j`, only one order allowed: one path, `Ř(−1)` vanishes.
    Boundary,
}

/// Kernel/image data on the weight space `(V ⊗ V)_{(a, ε_i + ε_j)}`, `i ≤ j`.
#[derive(Clone, Debug)]
pub struct FusionSector {
    pub i: usize,
    pub j: usize,
    pub case: FusionCase,
    /// Allowed two-step paths, the basis of the weight space.
    pub paths: Vec<(usize, usize)>,
    /// Spanning vectors of `ker Ř_reg(1,a) = im Ř(−1,a)`.
    pub symmetric: Vec<DVector<Complex64>>,
    /// Spanning vectors of `im Ř_reg(1,a) = ker Ř(−1,a)`.
    pub antisymmetric: Vec<DVector<Complex64>>,
    /// `Ř_reg(1,a)` restricted to the weight space.
    pub r_reg1: CMatrix,
    /// `Ř(−1,a)` restricted to the weight space.
    pub r_minus1: CMatrix,
}

#[derive(Clone, Debug)]
pub struct FusionBases {
    pub a: WeightPoint,
    pub sectors: Vec<FusionSector>,
}

/// Spanning vectors of the kernels and images of `Ř_reg(1,a)` and `Ř(−1,a)`
/// on every nonzero weight space of `V ⊗ V` at `a`.
///
/// With `c_ij = [a_i−a_j+1][1]/[a_i−a_j]`, the antisymmetric vector of a
/// generic weight space is `c_ij e_i⊗e_j − c_ji e_j⊗e_i`; this is the image of
/// `Ř_reg(1,a)` and the kernel of `Ř(−1,a)`.
pub fn fusion_bases(model: &Model, a: &WeightPoint) -> Result<FusionBases> {
    let n = model.rank();
    let params = model.params();
    let reg = params.r_reg1(a)?;
    let minus = params.r_minus1(a)?;
    let one = Complex64::new(1.0, 0.0);
    let coords = a.coords();
    let c = |i: usize, j: usize| {
        let d = coords[i] - coords[j];
        params.bracket(d + one) * params.bracket(one) / params.bracket(d)
    };
    let mut sectors = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut paths = vec![(i, j)];
            if i != j {
                paths.push((j, i));
            }
            paths.retain(|&(x, y)| model.path_allowed(a, &[x, y]));
            if paths.is_empty() {
                continue;
            }
            let idx = |(x, y): (usize, usize)| n * x + y;
            let restrict = |m: &CMatrix| {
                CMatrix::from_fn(paths.len(), paths.len(), |r, s| m[(idx(paths[r]), idx(paths[s]))])
            };
            let (case, symmetric, antisymmetric) = match paths.len() {
                _ if i == j => (FusionCase::Diagonal, vec![DVector::from_element(1, one)], vec![]),
                2 => {
                    let sym = DVector::from_vec(vec![one, one]);
                    let anti = DVector::from_vec(vec![c(i, j), -c(j, i)]);
                    (FusionCase::Generic, vec![sym], vec![anti])
                }
                _ => (FusionCase::Boundary, vec![], vec![DVector::from_element(1, one)]),
            };
            sectors.push(FusionSector {
                i,
                j,
                case,
                r_reg1: restrict(&reg),
                r_minus1: restrict(&minus),
                paths,
                symmetric,
                antisymmetric,
            });
        }
    }
    Ok(FusionBases {
        a: a.clone(),
        sectors,
    })
}

fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

fn largest_singular_value(m: &CMatrix) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// Numerical rank with the relative singular-value threshold.
pub fn numeric_rank(m: &CMatrix) -> usize {
    numeric_rank_scaled(m, 0.0)
}

/// Numerical rank where the threshold is taken relative to
/// `max(σ_max(m), reference)`.
///
/// A weight-space block is a piece of a larger operator; passing that
/// operator's `σ_max` keeps a roundoff-sized 1×1 block from counting as rank 1.
pub fn numeric_rank_scaled(m: &CMatrix, reference: f64) -> usize {
    let sv = singular_values(m);
    let largest = sv.iter().copied().fold(reference, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_THRESHOLD * largest).count()
}

/// Outcome of the exactness checks at one weight space.
#[derive(Clone, Debug, Serialize)]
pub struct ExactnessCase {
    pub a: Vec<i64>,
    pub i: usize,
    pub j: usize,
    pub case: FusionCase,
    pub dim: usize,
    pub rank_reg1: usize,
    pub rank_minus1: usize,
    /// `max(‖Ř_reg(1) Ř(−1)‖, ‖Ř(−1) Ř_reg(1)‖)`, relative to the norms of the factors.
    pub containment_residual: f64,
    /// Largest residual of the listed spanning vectors in their kernels.
    pub basis_residual: f64,
    /// Whether the numbers of listed vectors equal the kernel dimensions.
    pub counts_match: bool,
}

impl ExactnessCase {
    pub fn passed(&self, tol: f64) -> bool {
        self.rank_reg1 + self.rank_minus1 == self.dim
            && self.counts_match
            && self.containment_residual < tol
            && self.basis_residual < tol
    }
}

fn rel(m: &CMatrix, scale: f64) -> f64 {
    crate::graded::max_abs(m) / scale.max(f64::MIN_POSITIVE)
}

/// Check `im Ř(−1,a) = ker Ř_reg(1,a)` and `im Ř_reg(1,a) = ker Ř(−1,a)` on
/// every weight space at every height.
pub fn verify_exactness(model: &Model) -> Result<Vec<ExactnessCase>> {
    let mut out = Vec::new();
    for a in model.points() {
        let reg_scale = largest_singular_value(&model.params().r_reg1(a)?);
        let minus_scale = largest_singular_value(&model.params().r_minus1(a)?);
        for s in fusion_bases(model, a)?.sectors {
            let (reg, minus) = (&s.r_reg1, &s.r_minus1);
            let scale = crate::graded::max_abs(reg).max(1.0) * crate::graded::max_abs(minus).max(1.0);
            let containment = rel(&(reg * minus), scale).max(rel(&(minus * reg), scale));
            let mut basis: f64 = 0.0;
            for v in &s.symmetric {
                basis = basis.max(vec_max(&(reg * v)) / crate::graded::max_abs(reg).max(1.0));
            }
            for v in &s.antisymmetric {
                basis = basis.max(vec_max(&(minus * v)) / crate::graded::max_abs(minus).max(1.0));
            }
            let dim = s.paths.len();
            let rank_reg1 = numeric_rank_scaled(reg, reg_scale);
            let rank_minus1 = numeric_rank_scaled(minus, minus_scale);
            let sym_rank = numeric_rank(&stack(&s.symmetric, dim));
            let anti_rank = numeric_rank(&stack(&s.antisymmetric, dim));
            out.push(ExactnessCase {
                a: a.offset().coords().to_vec(),
                i: s.i,
                j: s.j,
                case: s.case,
                dim,
                rank_reg1,
                rank_minus1,
                containment_residual: containment,
                basis_residual: basis,
                counts_match: sym_rank == s.symmetric.len()
                    && anti_rank == s.antisymmetric.len()
                    && s.symmetric.len() == dim - rank_reg1
                    && s.antisymmetric.len() == dim - rank_minus1,
            });
        }
    }
    Ok(out)
}

fn vec_max(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn stack(vs: &[DVector<Complex64>], dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, vs.len(), |r, c| vs[c][r])
}

/// The character of `ker Ř_reg(1)` read off from numerical ranks.
pub fn numeric_sym_square_character(model: &Model) -> Result<ConvolutionElement> {
    let n = model.rank();
    let mut terms = Vec::new();
    for a in model.points() {
        let scale = largest_singular_value(&model.params().r_reg1(a)?);
        for s in fusion_bases(model, a)?.sectors {
            let k = s.paths.len() - numeric_rank_scaled(&s.r_reg1, scale);
            let mu = LatticeVector::sum_of_units(n, &[s.i, s.j]);
            terms.push((Arrow::new(a.clone(), mu), k as i64));
        }
    }
    Ok(ConvolutionElement::from_terms(model.context().clone(), terms))
}

fn alcove(n: usize, r: i64) -> Result<(Context, Vec<WeightPoint>)> {
    let spec = AlcoveSpec::regular_affine(n, r);
    Ok((Context::rsos(n, r), enumerate_alcove(&spec)?))
}

fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `χ_A e_k(t_1, …, t_n) χ_A`.
pub fn exterior_character(k: usize, n: usize, r: i64) -> Result<ConvolutionElement> {
    if k > n {
        return Err(Error::OutOfRange(format!("k = {k} exceeds n = {n}")));
    }
    let (ctx, pts) = alcove(n, r)?;
    let mut out = ConvolutionElement::zero(ctx.clone());
    for set in index_subsets(n, k) {
        let mu = LatticeVector::sum_of_units(n, &set);
        out = out.add(&ConvolutionElement::restricted_shift(ctx.clone(), &pts, &mu))?;
    }
    Ok(out)
}

/// `Σ_i χ_{A∩(A−2ε_i)} t_i² + Σ_{i<j} χ_{A∩(A−ε_i)∩(A−ε_j)} t_i t_j`.
pub fn sym_square_character(n: usize, r: i64) -> Result<ConvolutionElement> {
    let (ctx, pts) = alcove(n, r)?;
    let spec = AlcoveSpec::regular_affine(n, r);
    let inside = |p: &WeightPoint| alcove_contains(p, &spec);
    let mut terms = Vec::new();
    for a in &pts {
        for i in 0..n {
            if inside(&a.shifted_unit(i).shifted_unit(i)) {
                terms.push((Arrow::new(a.clone(), LatticeVector::sum_of_units(n, &[i, i])), 1));
            }
            for j in (i + 1)..n {
                if inside(&a.shifted_unit(i)) && inside(&a.shifted_unit(j)) {
                    terms.push((Arrow::new(a.clone(), LatticeVector::sum_of_units(n, &[i, j])), 1));
                }
            }
        }
    }
    Ok(ConvolutionElement::from_terms(ctx, terms))
}

/// `L_p = Σ_{j=0}^{p} χ_{[j+1, r−p−1+j]} t_1^{p−j} t_2^j` for `n = 2`, in
/// coordinates `l = a_1 − a_2`.
pub fn sym_power_character_n2(p: i64, r: i64) -> Result<ConvolutionElement> {
    if p < 0 || p > r - 2 {
        return Err(Error::OutOfRange(format!("p = {p} outside 0..={}", r - 2)));
    }
    let ctx = Context::rsos(2, r);
    let mut terms = Vec::new();
    for j in 0..=p {
        for l in (j + 1)..=(r - p - 1 + j) {
            terms.push((
                Arrow::new(WeightPoint::integral(&[l, 0]), LatticeVector::new(vec![p - j, j])),
                1,
            ));
        }
    }
    Ok(ConvolutionElement::from_terms(ctx, terms))
}

/// `N_{pq}^s = 1` iff `|p−q| ≤ s ≤ min(p+q, 2r−4−p−q)` and `s ≡ p+q (mod 2)`.
pub fn fusion_coeff(p: i64, q: i64, s: i64, r: i64) -> Result<i64> {
    for (name, x) in [("p", p), ("q", q), ("s", s)] {
        if x < 0 || x > r - 2 {
            return Err(Error::OutOfRange(format!("{name} = {x} outside 0..={}", r - 2)));
        }
    }
    let ok = (p - q).abs() <= s && s <= (p + q).min(2 * r - 4 - p - q) && (p + q - s) % 2 == 0;
    Ok(i64::from(ok))
}

/// `Σ_s N_{pq}^s u^{(p+q−s)/2} L_s` with `u = t_1 t_2`.
pub fn fusion_rhs(p: i64, q: i64, r: i64) -> Result<ConvolutionElement> {
    let (ctx, pts) = alcove(2, r)?;
    let mut out = ConvolutionElement::zero(ctx.clone());
    for s in 0..=(r - 2) {
        if fusion_coeff(p, q, s, r)? == 0 {
            continue;
        }
        let k = (p + q - s) / 2;
        let u = ConvolutionElement::restricted_shift(ctx.clone(), &pts, &LatticeVector::new(vec![k, k]));
        out = out.add(&u.conv_mul(&sym_power_character_n2(s, r)?)?)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FusionReport {
    pub r: i64,
    pub checked: usize,
    pub mismatches: Vec<(i64, i64)>,
}

impl FusionReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare `L_p L_q` with the fusion-rule expansion for all `p, q`.
pub fn verify_fusion_rules(r: i64) -> Result<FusionReport> {
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for p in 0..=(r - 2) {
        let lp = sym_power_character_n2(p, r)?;
        for q in 0..=(r - 2) {
            let lhs = lp.conv_mul(&sym_power_character_n2(q, r)?)?;
            if lhs != fusion_rhs(p, q, r)? {
                mismatches.push((p, q));
            }
            checked += 1;
        }
    }
    Ok(FusionReport {
        r,
        checked,
        mismatches,
    })
}

/// `ψ_λ` sampled on the alcove.
#[derive(Clone, Debug)]
pub struct EigenFunction {
    pub lambda: WeightPoint,
    pub points: Vec<WeightPoint>,
    pub values: Vec<Complex64>,
}

/// `ψ_λ(a) = q^{−(1/n) Σa Σλ} det(q^{λ_i a_j})` with `q^{1/n} = e^{2πi/(rn)}`,
/// evaluated at an arbitrary integral point.
pub fn psi_value(lambda: &[i64], a: &[i64], r: i64) -> Complex64 {
    let n = lambda.len();
    let q = |x: f64| Complex64::from_polar(1.0, 2.0 * PI * x / r as f64);
    let m = CMatrix::from_fn(n, n, |i, j| q((lambda[i] * a[j]) as f64));
    let sa: i64 = a.iter().sum();
    let sl: i64 = lambda.iter().sum();
    q(-((sa * sl) as f64) / n as f64) * m.determinant()
}

pub fn psi(lambda: &WeightPoint, n: usize, r: i64) -> Result<EigenFunction> {
    let spec = AlcoveSpec::regular_affine(n, r);
    let coords = lambda
        .integer_coords()
        .filter(|c| contains_coords(c, &spec))
        .ok_or_else(|| Error::LambdaOutsideAlcove(lambda.to_string()))?;
    let points = enumerate_alcove(&spec)?;
    let values = points
        .iter()
        .map(|a| psi_value(coords, a.integer_coords().expect("integral"), r))
        .collect();
    Ok(EigenFunction {
        lambda: lambda.clone(),
        points,
        values,
    })
}

/// `e_k(x_1, …, x_n)`.
pub fn elementary_symmetric(k: usize, xs: &[Complex64]) -> Complex64 {
    let mut e = vec![Complex64::new(0.0, 0.0); k + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for &x in xs {
        for m in (1..=k).rev() {
            let prev = e[m - 1];
            e[m] += prev * x;
        }
    }
    e[k]
}

/// `e_k(q^{λ̄_1}, …, q^{λ̄_n})` with `λ̄_i = λ_i − (1/n) Σ λ_j`.
pub fn predicted_eigenvalue(k: usize, lambda: &[i64], r: i64) -> Complex64 {
    let n = lambda.len() as f64;
    let mean = lambda.iter().sum::<i64>() as f64 / n;
    let xs: Vec<Complex64> = lambda
        .iter()
        .map(|&l| Complex64::from_polar(1.0, 2.0 * PI * (l as f64 - mean) / r as f64))
        .collect();
    elementary_symmetric(k, &xs)
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumRow {
    pub lambda: Vec<i64>,
    pub eigenvalue: [f64; 2],
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub k: usize,
    pub n: usize,
    pub r: i64,
    pub rows: Vec<SpectrumRow>,
    pub max_residual: f64,
}

/// Apply the exterior-power character to each `ψ_λ` and compare with
/// `e_k(q^{λ̄}) ψ_λ` entrywise.
pub fn verify_spectrum(k: usize, n: usize, r: i64) -> Result<SpectrumReport> {
    let (_, pts) = alcove(n, r)?;
    let op = exterior_character(k, n, r)?.to_difference_operator(&pts)?;
    let mut rows = Vec::new();
    let mut max_residual: f64 = 0.0;
    for lambda in &pts {
        let f = psi(lambda, n, r)?;
        let coords = lambda.integer_coords().expect("integral");
        let ev = predicted_eigenvalue(k, coords, r);
        let image = op.apply(&f.values);
        let residual = image
            .iter()
            .zip(&f.values)
            .map(|(x, y)| (x - ev * y).norm())
            .fold(0.0, f64::max);
        max_residual = max_residual.max(residual);
        rows.push(SpectrumRow {
            lambda: coords.to_vec(),
            eigenvalue: [ev.re, ev.im],
            residual,
        });
    }
    Ok(SpectrumReport {
        k,
        n,
        r,
        rows,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fusion_coefficients() {
        assert_eq!(fusion_coeff(1, 1, 0, 5).unwrap(), 1);
        assert_eq!(fusion_coeff(1, 1, 2, 5).unwrap(), 1);
        assert_eq!(fusion_coeff(1, 1, 1, 5).unwrap(), 0);
        assert_eq!(fusion_coeff(2, 2, 3, 5).unwrap(), 0);
        assert_eq!(fusion_coeff(3, 3, 2, 5).unwrap(), 0);
        assert_eq!(fusion_coeff(3, 3, 0, 5).unwrap(), 1);
        for p in 0..=3 {
            for s in 0..=3 {
                assert_eq!(fusion_coeff(p, 0, s, 5).unwrap(), i64::from(p == s));
            }
        }
        assert!(matches!(fusion_coeff(4, 0, 0, 5), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn l2_squared_r5() {
        let l2 = sym_power_character_n2(2, 5).unwrap();
        assert_eq!(l2.conv_mul(&l2).unwrap(), fusion_rhs(2, 2, 5).unwrap());
        assert!(verify_fusion_rules(5).unwrap().passed());
    }

    #[test]
    fn l3_r5_support() {
        let l3 = sym_power_character_n2(3, 5).unwrap();
        assert_eq!(l3.support_len(), 4);
        for (l, shift) in [(1, [3, 0]), (2, [2, 1]), (3, [1, 2]), (4, [0, 3])] {
            let arrow = Arrow::new(WeightPoint::integral(&[l, 0]), LatticeVector::new(shift.to_vec()));
            assert_eq!(l3.coeff(&arrow), 1);
        }
    }

    #[test]
    fn bases_n2_interior_point() {
        let m = Model::rsos(2, 5, c(0.0, 0.8)).unwrap();
        let b = fusion_bases(&m, &WeightPoint::integral(&[2, 0])).unwrap();
        let sym: usize = b.sectors.iter().map(|s| s.symmetric.len()).sum();
        let anti: usize = b.sectors.iter().map(|s| s.antisymmetric.len()).sum();
        assert_eq!((sym, anti), (2, 1));
    }

    #[test]
    fn boundary_vector_at_l1() {
        let m = Model::rsos(2, 5, c(0.0, 0.8)).unwrap();
        let b = fusion_bases(&m, &WeightPoint::integral(&[1, 0])).unwrap();
        let boundary: Vec<_> = b.sectors.iter().filter(|s| s.case == FusionCase::Boundary).collect();
        assert_eq!(boundary.len(), 1);
        assert_eq!(boundary[0].paths, vec![(0, 1)]);
    }

    #[test]
    fn exactness_n3() {
        let m = Model::rsos(3, 5, c(0.0, 0.8)).unwrap();
        for case in verify_exactness(&m).unwrap() {
            assert!(case.passed(1e-8), "{case:?}");
        }
    }

    #[test]
    fn spectrum_n2_golden_ratio() {
        let rep = verify_spectrum(1, 2, 5).unwrap();
        assert!(rep.max_residual < 1e-10);
        let largest = rep.rows.iter().map(|r| r.eigenvalue[0]).fold(f64::MIN, f64::max);
        assert!((largest - 1.618_033_988_749_895).abs() < 1e-12);
    }

    #[test]
    fn psi_vanishes_on_walls() {
        let lambda = [3, 1, 0];
        assert!(psi_value(&lambda, &[2, 2, 0], 5).norm() < 1e-12);
        assert!(psi_value(&lambda, &[5, 2, 0], 5).norm() < 1e-12);
        assert!(matches!(
            psi(&WeightPoint::integral(&[5, 0]), 2, 5),
            Err(Error::LambdaOutsideAlcove(_))
        ));
    }
}
