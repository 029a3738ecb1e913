//! L-operators, partial traces, transfer matrices and torus partition functions.
//!
//! For a quantum space `W = V(u_1) ⊗ … ⊗ V(u_c)` the L-operator moves the
//! auxiliary step through the `c` steps of `W`; crossing `k` contributes the face
//! weight of `Ř(z + u_k)`. The transfer matrix is its trace over the auxiliary
//! factor, a difference operator `T(z)ψ(a) = Σ_i r_{ε_i}(a) ψ(a+ε_i)` acting on
//! the closed-row sectors `⊕_a W_{(a,κ)}`, `κ ∈ Z(1,…,1)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graded::{
    associator, max_abs, tensor_layout, tensor_morphism, tensor_space, CMatrix, GradedMorphism,
    GradedSpace,
};
use crate::groupoid::{Arrow, LatticeVector, WeightPoint};
use crate::rsos::{FaceCache, Model, Path, PathSpace, RESTRICTION_TOLERANCE};

/// Face budget of the brute-force partition function.
pub const ENUMERATION_BUDGET: usize = 16;
/// Largest state space the transfer-matrix route will build.
pub const STATE_BUDGET: usize = 4096;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The L-operator of `V(u_1) ⊗ … ⊗ V(u_c)`; the empty list is the trivial
/// representation.
#[derive(Clone, Debug, PartialEq)]
pub struct LOperator {
    eval_points: Vec<Complex64>,
}

impl LOperator {
    pub fn trivial() -> Self {
        LOperator {
            eval_points: Vec::new(),
        }
    }

    /// `L(z) = Ř(z + u)` on the vector representation with evaluation point `u`.
    pub fn vector(u: Complex64) -> Self {
        LOperator {
            eval_points: vec![u],
        }
    }

    pub fn chain(points: impl IntoIterator<Item = Complex64>) -> Self {
        LOperator {
            eval_points: points.into_iter().collect(),
        }
    }

    /// `L_{W⊗Z} = (id_W ⊗ L_Z)(L_W ⊗ id_Z)`.
    pub fn l_tensor(&self, other: &LOperator) -> LOperator {
        let mut eval_points = self.eval_points.clone();
        eval_points.extend_from_slice(&other.eval_points);
        LOperator { eval_points }
    }

    pub fn eval_points(&self) -> &[Complex64] {
        &self.eval_points
    }

    pub fn width(&self) -> usize {
        self.eval_points.len()
    }

    /// Apply `L(z)` to steps `pos, …, pos + c` of every path in `space`:
    /// the step at `pos` is the auxiliary one and ends up at `pos + c`.
    pub fn apply(
        &self,
        faces: &mut FaceCache<'_>,
        space: &PathSpace,
        z: Complex64,
        pos: usize,
        v: &[Complex64],
    ) -> Result<Vec<Complex64>> {
        let mut out = v.to_vec();
        for (k, u) in self.eval_points.iter().enumerate() {
            out = faces.apply(space, z + u, pos + k, &out)?;
        }
        Ok(out)
    }

    /// Residual of `(id_W ⊗ Ř(z−w)) L₁(z) L₂(w) = L₁(w) L₂(z) (Ř(z−w) ⊗ id_W)`
    /// on `V(z) ⊗ V(w) ⊗ W`, where `L₂` moves the second auxiliary step
    /// through `W` first.
    pub fn rll_residual(&self, model: &Model, z: Complex64, w: Complex64) -> Result<f64> {
        let c = self.width();
        let space = PathSpace::new(model, model.points(), c + 2);
        let mut faces = FaceCache::new(model);
        let mut worst: f64 = 0.0;
        for p in 0..space.len() {
            let mut e = vec![ZERO; space.len()];
            e[p] = ONE;
            let lhs = {
                let v = faces.apply(&space, z - w, 0, &e)?;
                let v = self.apply(&mut faces, &space, z, 1, &v)?;
                self.apply(&mut faces, &space, w, 0, &v)?
            };
            let rhs = {
                let v = self.apply(&mut faces, &space, w, 1, &e)?;
                let v = self.apply(&mut faces, &space, z, 0, &v)?;
                faces.apply(&space, z - w, c, &v)?
            };
            for (x, y) in lhs.iter().zip(&rhs) {
                worst = worst.max((x - y).norm());
            }
        }
        Ok(worst)
    }
}

/// A transfer matrix on closed-row states, stored by sparse columns.
#[derive(Clone, Debug)]
pub struct TransferOperator {
    z: Complex64,
    states: Vec<Path>,
    columns: Vec<Vec<(usize, Complex64)>>,
}

impl TransferOperator {
    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn states(&self) -> &[Path] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn dense(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for (col, entries) in self.columns.iter().enumerate() {
            for &(row, v) in entries {
                m[(row, col)] += v;
            }
        }
        m
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.dim()];
        for (col, entries) in self.columns.iter().enumerate() {
            if v[col] == ZERO {
                continue;
            }
            for &(row, x) in entries {
                out[row] += x * v[col];
            }
        }
        out
    }

    /// `tr T^m`.
    pub fn trace_power(&self, m: usize) -> Complex64 {
        let n = self.dim();
        let mut total = ZERO;
        for s in 0..n {
            let mut v = vec![ZERO; n];
            v[s] = ONE;
            for _ in 0..m {
                v = self.apply(&v);
            }
            total += v[s];
        }
        total
    }

    /// The coefficient block `r_{ε_i}(a)`: rows are states starting at `a`,
    /// columns states starting at `a + ε_i`.
    pub fn coefficient(&self, a: &WeightPoint, i: usize) -> (Vec<usize>, Vec<usize>, CMatrix) {
        let target = a.shifted_unit(i);
        let rows: Vec<usize> = (0..self.dim()).filter(|&s| &self.states[s].start == a).collect();
        let cols: Vec<usize> = (0..self.dim()).filter(|&s| self.states[s].start == target).collect();
        let dense = self.dense();
        let block = CMatrix::from_fn(rows.len(), cols.len(), |r, c| dense[(rows[r], cols[c])]);
        (rows, cols, block)
    }

    /// `‖T₁T₂ − T₂T₁‖_max` for operators on the same states.
    pub fn commutator_residual(&self, other: &TransferOperator) -> Result<f64> {
        if self.states != other.states {
            return Err(Error::ShapeMismatch("transfer matrices on different state spaces".into()));
        }
        let (a, b) = (self.dense(), other.dense());
        Ok(max_abs(&(&a * &b - &b * &a)))
    }
}

/// Closed rows of width `c` over the model's heights.
pub fn row_states(model: &Model, c: usize) -> Vec<Path> {
    PathSpace::closed(model, model.points(), c).paths().to_vec()
}

/// `T(z) = tr_{V} L_W(z)` assembled on closed-row states by following the
/// auxiliary step across the row.
pub fn transfer_matrix(model: &Model, l: &LOperator, z: Complex64) -> Result<TransferOperator> {
    let c = l.width();
    let states = row_states(model, c);
    if states.len() > STATE_BUDGET {
        return Err(Error::TooLarge {
            faces: states.len(),
            budget: STATE_BUDGET,
        });
    }
    let index: HashMap<&Path, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let n = model.rank();
    let mut faces = FaceCache::new(model);
    let mut columns = Vec::with_capacity(states.len());
    for old in &states {
        let mut entries: BTreeMap<usize, Complex64> = BTreeMap::new();
        for i in 0..n {
            let a = old.start.shifted(&-&LatticeVector::unit(n, i));
            if !model.contains(&a) {
                continue;
            }
            for (steps, j, weight) in cross_row(&mut faces, l, z, &a, i, &old.steps)? {
                if j != i {
                    continue;
                }
                let new = Path {
                    start: a.clone(),
                    steps,
                };
                if let Some(&row) = index.get(&new) {
                    *entries.entry(row).or_insert(ZERO) += weight;
                }
            }
        }
        columns.push(entries.into_iter().filter(|(_, v)| *v != ZERO).collect());
    }
    Ok(TransferOperator { z, states, columns })
}

/// All ways the auxiliary step `i` at `a` crosses the old row `old_steps`
/// (which starts at `a + ε_i`): returns (new row, outgoing auxiliary step, weight).
fn cross_row(
    faces: &mut FaceCache<'_>,
    l: &LOperator,
    z: Complex64,
    a: &WeightPoint,
    i: usize,
    old_steps: &[usize],
) -> Result<Vec<(Vec<usize>, usize, Complex64)>> {
    let model = faces.model();
    let mut branches = vec![(Vec::with_capacity(old_steps.len()), i, a.clone(), ONE)];
    for (k, &w) in old_steps.iter().enumerate() {
        let zk = z + l.eval_points()[k];
        let mut next = Vec::with_capacity(branches.len() * 2);
        for (steps, j, q, weight) in branches {
            let mut options = vec![(j, w)];
            if j != w {
                options.push((w, j));
            }
            for (new_step, new_aux) in options {
                let f = faces.face(zk, &q, (j, w), (new_step, new_aux))?;
                let q_next = q.shifted_unit(new_step);
                if !model.contains(&q_next) {
                    if f.norm() > RESTRICTION_TOLERANCE {
                        return Err(Error::RestrictionViolated {
                            point: q.to_string(),
                            component: format!("e_{}⊗e_{} → e_{}⊗e_{}", j + 1, w + 1, new_step + 1, new_aux + 1),
                            modulus: f.norm(),
                        });
                    }
                    continue;
                }
                if f == ZERO {
                    continue;
                }
                let mut s = steps.clone();
                s.push(new_step);
                next.push((s, new_aux, q_next, weight * f));
            }
        }
        branches = next;
    }
    Ok(branches.into_iter().map(|(s, j, _, w)| (s, j, w)).collect())
}

/// `tr T(z)^m` on the torus with `c = l.width()` columns and `m` rows.
pub fn partition_via_transfer(model: &Model, l: &LOperator, z: Complex64, m: usize) -> Result<Complex64> {
    let t = transfer_matrix(model, l, z)?;
    Ok(t.trace_power(m))
}

/// Brute-force torus partition function: sum over all height configurations
/// of the product of face weights. Rows are closed height paths; consecutive
/// rows differ by one unit step at every column.
pub fn partition_enumerate(model: &Model, l: &LOperator, z: Complex64, m: usize) -> Result<Complex64> {
    let c = l.width();
    if c * m > ENUMERATION_BUDGET {
        return Err(Error::TooLarge {
            faces: c * m,
            budget: ENUMERATION_BUDGET,
        });
    }
    let rows = row_states(model, c);
    if m == 0 {
        return Ok(Complex64::new(rows.len() as f64, 0.0));
    }
    let heights: Vec<Vec<WeightPoint>> = rows
        .iter()
        .map(|p| (0..=c).map(|k| p.point_at(k)).collect())
        .collect();
    let n = model.rank();
    // Weight of a new row `q` directly below an old row `p`.
    let pair_weight = |q: usize, p: usize| -> Result<Complex64> {
        let (hq, hp) = (&heights[q], &heights[p]);
        let mut vertical = Vec::with_capacity(c + 1);
        for k in 0..=c {
            match (0..n).find(|&j| hq[k].shifted_unit(j) == hp[k]) {
                Some(j) => vertical.push(j),
                None => return Ok(ZERO),
            }
        }
        let mut weight = ONE;
        for k in 0..c {
            let unit = |x: usize| LatticeVector::unit(n, x);
            let alpha = Arrow::new(hq[k].clone(), unit(vertical[k]));
            let beta = Arrow::new(hp[k].clone(), unit(rows[p].steps[k]));
            let gamma = Arrow::new(hq[k].clone(), unit(rows[q].steps[k]));
            let delta = Arrow::new(hq[k + 1].clone(), unit(vertical[k + 1]));
            weight *= model.boltzmann_weight(z + l.eval_points()[k], &alpha, &beta, &gamma, &delta)?;
            if weight == ZERO {
                break;
            }
        }
        Ok(weight)
    };
    let s = rows.len();
    let table: Vec<Vec<Complex64>> = (0..s)
        .into_par_iter()
        .map(|q| (0..s).map(|p| pair_weight(q, p)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let partial: Vec<Complex64> = (0..s)
        .into_par_iter()
        .map(|first| {
            let mut total = ZERO;
            cycle_sum(&table, first, first, 1, m, ONE, &mut total);
            total
        })
        .collect();
    Ok(partial.into_iter().fold(ZERO, |acc, x| acc + x))
}

fn cycle_sum(
    table: &[Vec<Complex64>],
    first: usize,
    current: usize,
    depth: usize,
    m: usize,
    weight: Complex64,
    total: &mut Complex64,
) {
    if depth == m {
        *total += weight * table[current][first];
        return;
    }
    for (next, &w) in table[current].iter().enumerate() {
        if w != ZERO {
            cycle_sum(table, first, next, depth + 1, m, weight * w, total);
        }
    }
}

/// Shape of a tensor power of the vector representation, for addressing
/// graded basis vectors by height-path labels.
#[derive(Clone, Debug)]
pub enum Shape {
    Unit,
    Vector,
    Tensor(Box<Shape>, Box<Shape>),
}

impl Shape {
    /// `((V ⊗ V) ⊗ V) ⊗ …` with `c` factors.
    pub fn left_power(c: usize) -> Shape {
        match c {
            0 => Shape::Unit,
            _ => (1..c).fold(Shape::Vector, |acc, _| {
                Shape::Tensor(Box::new(acc), Box::new(Shape::Vector))
            }),
        }
    }

    pub fn space(&self, model: &Model) -> Result<GradedSpace> {
        Ok(match self {
            Shape::Unit => GradedSpace::unit(model.context().clone(), model.points().iter().cloned()),
            Shape::Vector => model.vector_space(),
            Shape::Tensor(x, y) => tensor_space(&x.space(model)?, &y.space(model)?)?,
        })
    }

    /// Step sequences of the basis vectors of the component at `gamma`, in order.
    pub fn labels(&self, model: &Model, gamma: &Arrow) -> Result<Vec<Vec<usize>>> {
        Ok(match self {
            Shape::Unit => vec![Vec::new()],
            Shape::Vector => vec![vec![gamma.shift.as_unit().expect("unit step")]],
            Shape::Tensor(x, y) => {
                let (xs, ys) = (x.space(model)?, y.space(model)?);
                let mut out = Vec::new();
                for s in tensor_layout(&xs, &ys, gamma) {
                    let lx = x.labels(model, &s.first)?;
                    let ly = y.labels(model, &s.second)?;
                    for a in &lx {
                        for b in &ly {
                            out.push(a.iter().chain(b).copied().collect());
                        }
                    }
                }
                out
            }
        })
    }
}

/// `L_W(z)` as a graded morphism `V ⊗ W → W ⊗ V` with `W = ((V(u_1) ⊗ V(u_2)) ⊗ …)`.
pub fn l_operator_morphism(model: &Model, l: &LOperator, z: Complex64) -> Result<GradedMorphism> {
    if !model.is_restricted() {
        return Err(Error::InvalidParams(
            "graded L-operators are built for RSOS models only".into(),
        ));
    }
    let v = Arc::new(model.vector_space());
    let us = l.eval_points();
    if us.is_empty() {
        let unit = Shape::Unit.space(model)?;
        let dom = Arc::new(tensor_space(&v, &unit)?);
        let cod = Arc::new(tensor_space(&unit, &v)?);
        return GradedMorphism::identification(dom, cod);
    }
    let mut lw = model.restricted_r(z + us[0])?;
    let mut w = v.clone();
    let id_v = GradedMorphism::identity(v.clone());
    for u in &us[1..] {
        // (id_W ⊗ L_V)(L_W ⊗ id_V) with the associators made explicit.
        let step = tensor_morphism(&lw, &id_v)?;
        let pre = associator(&v, &w, &v)?.inverse()?;
        let mid = associator(&w, &v, &v)?;
        let inner = tensor_morphism(&GradedMorphism::identity(w.clone()), &model.restricted_r(z + u)?)?;
        let post = associator(&w, &v, &v)?.inverse()?;
        lw = post.compose(&inner)?.compose(&mid)?.compose(&step)?.compose(&pre)?;
        w = Arc::new(tensor_space(&w, &v)?);
    }
    Ok(lw)
}

/// A section of graded endomorphisms: for an arrow `α = (a, μ)` of the traced
/// space and a central shift `κ`, a map `W_{(a+μ, κ)} → W_{(a, κ)}`.
#[derive(Clone, Debug, Default)]
pub struct Section {
    pub blocks: BTreeMap<(Arrow, LatticeVector), CMatrix>,
}

impl Section {
    fn accumulate(&mut self, key: (Arrow, LatticeVector), block: CMatrix) {
        match self.blocks.get_mut(&key) {
            Some(b) => *b += block,
            None => {
                self.blocks.insert(key, block);
            }
        }
    }

    /// Composition as difference operators: `(S₁S₂)_{(a,μ+ν)} = Σ S₁_{(a,μ)} S₂_{(a+μ,ν)}`.
    pub fn product(&self, other: &Section) -> Result<Section> {
        let mut out = Section::default();
        for ((a1, k1), b1) in &self.blocks {
            for ((a2, k2), b2) in &other.blocks {
                if k1 != k2 || a2.source != a1.target() {
                    continue;
                }
                if b1.ncols() != b2.nrows() {
                    return Err(Error::ShapeMismatch("section blocks do not compose".into()));
                }
                let composed = Arrow::new(a1.source.clone(), &a1.shift + &a2.shift);
                out.accumulate((composed, k1.clone()), b1 * b2);
            }
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &Section) -> f64 {
        let keys: std::collections::BTreeSet<_> = self.blocks.keys().chain(other.blocks.keys()).collect();
        let mut worst: f64 = 0.0;
        for k in keys {
            let d = match (self.blocks.get(k), other.blocks.get(k)) {
                (Some(a), Some(b)) if a.shape() == b.shape() => max_abs(&(a - b)),
                (Some(a), Some(b)) => max_abs(a).max(max_abs(b)).max(f64::INFINITY),
                (Some(a), None) | (None, Some(a)) => max_abs(a),
                (None, None) => 0.0,
            };
            worst = worst.max(d);
        }
        worst
    }
}

/// Partial trace over `V` of `f: V ⊗ W → W ⊗ V`.
pub fn partial_trace(f: &GradedMorphism, v: &GradedSpace, w: &GradedSpace) -> Result<Section> {
    let dom = tensor_space(v, w)?;
    let cod = tensor_space(w, v)?;
    if **f.domain() != dom || **f.codomain() != cod {
        return Err(Error::ShapeMismatch(
            "partial trace needs a morphism V ⊗ W → W ⊗ V".into(),
        ));
    }
    let mut out = Section::default();
    for (alpha, d) in v.arrows() {
        let a = &alpha.source;
        let b = alpha.target();
        for beta in w.arrows_from(&b) {
            if !beta.shift.is_central() {
                continue;
            }
            let kappa = beta.shift.clone();
            let loop_a = Arrow::new(a.clone(), kappa.clone());
            let dw_a = w.dim(&loop_a);
            if dw_a == 0 {
                continue;
            }
            let dw_b = w.dim(beta);
            let delta = Arrow::new(a.clone(), &alpha.shift + &kappa);
            let s = tensor_layout(v, w, &delta)
                .into_iter()
                .find(|s| &s.first == alpha && &s.second == beta)
                .expect("summand of the domain");
            let t = tensor_layout(w, v, &delta)
                .into_iter()
                .find(|t| t.first == loop_a && t.second.shift == alpha.shift)
                .expect("summand of the codomain");
            let block = f.block_or_zero(&delta);
            let mut tr = CMatrix::zeros(dw_a, dw_b);
            for wo in 0..dw_a {
                for wi in 0..dw_b {
                    let mut acc = ZERO;
                    for i in 0..d {
                        acc += block[(t.offset + wo * d + i, s.offset + i * dw_b + wi)];
                    }
                    tr[(wo, wi)] = acc;
                }
            }
            out.accumulate((alpha.clone(), kappa), tr);
        }
    }
    Ok(out)
}

/// The graded-route transfer matrix, expressed on the same closed-row states
/// as [`transfer_matrix`].
pub fn transfer_matrix_graded(model: &Model, l: &LOperator, z: Complex64) -> Result<CMatrix> {
    let c = l.width();
    let shape = Shape::left_power(c);
    let w = shape.space(model)?;
    let v = model.vector_space();
    let section = partial_trace(&l_operator_morphism(model, l, z)?, &v, &w)?;
    let states = row_states(model, c);
    let index: HashMap<&Path, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut m = CMatrix::zeros(states.len(), states.len());
    for ((alpha, kappa), block) in &section.blocks {
        let rows = shape.labels(model, &Arrow::new(alpha.source.clone(), kappa.clone()))?;
        let cols = shape.labels(model, &Arrow::new(alpha.target(), kappa.clone()))?;
        for (ri, rl) in rows.iter().enumerate() {
            let rp = Path {
                start: alpha.source.clone(),
                steps: rl.clone(),
            };
            for (ci, cl) in cols.iter().enumerate() {
                let cp = Path {
                    start: alpha.target(),
                    steps: cl.clone(),
                };
                if let (Some(&r), Some(&c)) = (index.get(&rp), index.get(&cp)) {
                    m[(r, c)] += block[(ri, ci)];
                }
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::ConvolutionElement;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn state_space_dimension_c2_n2_r5() {
        let m = Model::rsos(2, 5, c(0.0, 0.9)).unwrap();
        let l = LOperator::chain([c(0.0, 0.0); 2]);
        assert_eq!(row_states(&m, 2).len(), 6);
        assert_eq!(partition_enumerate(&m, &l, c(0.3, 0.0), 0).unwrap(), c(6.0, 0.0));
        assert_eq!(partition_via_transfer(&m, &l, c(0.3, 0.0), 0).unwrap(), c(6.0, 0.0));
    }

    #[test]
    fn trivial_transfer_is_vector_character() {
        let m = Model::rsos(2, 5, c(0.0, 0.9)).unwrap();
        let t = transfer_matrix(&m, &LOperator::trivial(), c(0.3, 0.0)).unwrap();
        let ch = ConvolutionElement::character(&m.vector_space())
            .to_difference_operator(m.points())
            .unwrap()
            .to_complex_matrix();
        assert_eq!(t.dim(), 4);
        assert_eq!(t.dense(), ch);
    }

    #[test]
    fn single_site_transfer_weights() {
        // The trace over V of the trivial L-operator is the character of V.
        let m = Model::rsos(2, 5, c(0.0, 0.9)).unwrap();
        let v = m.vector_space();
        let unit = Shape::Unit.space(&m).unwrap();
        let l0 = l_operator_morphism(&m, &LOperator::trivial(), c(0.2, 0.0)).unwrap();
        let sec = partial_trace(&l0, &v, &unit).unwrap();
        let ch = ConvolutionElement::character(&v);
        assert_eq!(sec.blocks.len(), ch.support_len());
        for ((alpha, kappa), b) in &sec.blocks {
            assert!(kappa.is_zero());
            assert_eq!(b[(0, 0)], c(ch.coeff(alpha) as f64, 0.0));
        }
    }

    #[test]
    fn graded_and_path_routes_agree() {
        let m = Model::rsos(2, 5, c(0.0, 0.9)).unwrap();
        let l = LOperator::chain([c(0.0, 0.0), c(0.3, 0.0)]);
        let z = c(0.21, 0.05);
        let a = transfer_matrix(&m, &l, z).unwrap().dense();
        let b = transfer_matrix_graded(&m, &l, z).unwrap();
        assert!(max_abs(&a) > 0.1);
        assert!(max_abs(&(a - b)) < 1e-12);
    }

    #[test]
    fn partition_small_torus() {
        let m = Model::rsos(2, 4, c(0.0, 0.9)).unwrap();
        let l = LOperator::chain([c(0.0, 0.0); 2]);
        let z = c(0.3, 0.0);
        let a = partition_via_transfer(&m, &l, z, 2).unwrap();
        let b = partition_enumerate(&m, &l, z, 2).unwrap();
        assert!((a - b).norm() <= 1e-9 * b.norm());
        assert!(b.norm() > 0.0);
    }

    #[test]
    fn enumeration_budget() {
        let m = Model::rsos(2, 4, c(0.0, 0.9)).unwrap();
        let l = LOperator::chain([c(0.0, 0.0); 4]);
        assert!(matches!(
            partition_enumerate(&m, &l, c(0.3, 0.0), 5),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn rll_for_two_sites() {
        let m = Model::rsos(2, 5, c(0.0, 0.9)).unwrap();
        let l = LOperator::vector(c(0.0, 0.0)).l_tensor(&LOperator::vector(c(0.3, 0.0)));
        assert!(l.rll_residual(&m, c(0.41, 0.02), c(0.17, 0.11)).unwrap() < 1e-9);
    }
}
