//! Groupoid-graded vector spaces of finite type and their morphisms.
//!
//! A space assigns a dimension to finitely many arrows; a morphism assigns a
//! dense complex block to each arrow. Tensor products sum over factorisations
//! `γ = β ∘ α`, and the summands of every tensor block are laid out in one fixed
//! order (intermediate object, then the shift of `α`) so that R-matrices,
//! associators and partial traces all agree on coordinates.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::{Arrow, Base, LatticeVector, WeightPoint};

pub type CMatrix = DMatrix<Complex64>;

/// Default absolute tolerance for comparing morphisms.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// The groupoid a space is graded by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    pub rank: usize,
    pub base: Base,
    /// `Some(r)` for the full subgroupoid on the alcove `P^r_{++}`.
    pub level: Option<i64>,
}

impl Context {
    pub fn rsos(rank: usize, level: i64) -> Self {
        Context {
            rank,
            base: Base::zero(rank),
            level: Some(level),
        }
    }

    pub fn sos(base: Base) -> Self {
        Context {
            rank: base.rank(),
            base,
            level: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GradedSpace {
    ctx: Context,
    dims: BTreeMap<Arrow, usize>,
    by_source: BTreeMap<WeightPoint, Vec<Arrow>>,
}

impl PartialEq for GradedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.dims == other.dims
    }
}

/// One summand `X_first ⊗ Y_second` of a tensor block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub first: Arrow,
    pub second: Arrow,
    pub first_dim: usize,
    pub second_dim: usize,
    pub offset: usize,
}

impl Summand {
    pub fn dim(&self) -> usize {
        self.first_dim * self.second_dim
    }
}

impl GradedSpace {
    /// Zero-dimensional entries are dropped.
    pub fn new(ctx: Context, dims: impl IntoIterator<Item = (Arrow, usize)>) -> Self {
        let mut map = BTreeMap::new();
        for (arrow, d) in dims {
            assert_eq!(arrow.shift.rank(), ctx.rank, "rank mismatch");
            if d > 0 {
                *map.entry(arrow).or_insert(0) += d;
            }
        }
        Self::from_map(ctx, map)
    }

    fn from_map(ctx: Context, dims: BTreeMap<Arrow, usize>) -> Self {
        let mut by_source: BTreeMap<WeightPoint, Vec<Arrow>> = BTreeMap::new();
        for arrow in dims.keys() {
            by_source
                .entry(arrow.source.clone())
                .or_default()
                .push(arrow.clone());
        }
        GradedSpace {
            ctx,
            dims,
            by_source,
        }
    }

    /// The tensor unit, materialised on the given objects.
    pub fn unit(ctx: Context, objects: impl IntoIterator<Item = WeightPoint>) -> Self {
        let dims = objects.into_iter().map(|a| (Arrow::identity(a), 1));
        Self::new(ctx, dims)
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn dim(&self, arrow: &Arrow) -> usize {
        self.dims.get(arrow).copied().unwrap_or(0)
    }

    pub fn arrows(&self) -> impl Iterator<Item = (&Arrow, usize)> {
        self.dims.iter().map(|(a, &d)| (a, d))
    }

    pub fn arrows_from(&self, source: &WeightPoint) -> &[Arrow] {
        self.by_source.get(source).map_or(&[], Vec::as_slice)
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// Sources and targets of all arrows.
    pub fn objects(&self) -> BTreeSet<WeightPoint> {
        let mut out = BTreeSet::new();
        for arrow in self.dims.keys() {
            out.insert(arrow.source.clone());
            out.insert(arrow.target());
        }
        out
    }

    /// Keep only arrows whose source satisfies `keep`.
    pub fn restrict_sources(&self, keep: impl Fn(&WeightPoint) -> bool) -> Self {
        let dims = self
            .dims
            .iter()
            .filter(|(a, _)| keep(&a.source))
            .map(|(a, &d)| (a.clone(), d))
            .collect();
        Self::from_map(self.ctx.clone(), dims)
    }

    /// Direct sum.
    pub fn direct_sum(&self, other: &GradedSpace) -> Result<GradedSpace> {
        check_ctx(&self.ctx, &other.ctx)?;
        let mut dims = self.dims.clone();
        for (a, &d) in &other.dims {
            *dims.entry(a.clone()).or_insert(0) += d;
        }
        Ok(Self::from_map(self.ctx.clone(), dims))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let blocks: Vec<_> = self
            .dims
            .iter()
            .map(|(a, &d)| {
                serde_json::json!({
                    "source": a.source.offset().coords(),
                    "shift": a.shift.coords(),
                    "dim": d,
                })
            })
            .collect();
        serde_json::json!({
            "rank": self.ctx.rank,
            "level": self.ctx.level,
            "base": base_json(&self.ctx.base),
            "blocks": blocks,
        })
    }
}

fn base_json(base: &Base) -> Vec<[f64; 2]> {
    base.coords().iter().map(|c| [c.re, c.im]).collect()
}

fn check_ctx(a: &Context, b: &Context) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ContextMismatch)
    }
}

/// Summands of `(X ⊗ Y)_γ` in canonical order.
pub fn tensor_layout(x: &GradedSpace, y: &GradedSpace, gamma: &Arrow) -> Vec<Summand> {
    let mut pairs: Vec<(WeightPoint, Arrow, Arrow)> = Vec::new();
    for alpha in x.arrows_from(&gamma.source) {
        let mid = alpha.target();
        let beta = Arrow::new(mid.clone(), &gamma.shift - &alpha.shift);
        if y.dim(&beta) > 0 {
            pairs.push((mid, alpha.clone(), beta));
        }
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.shift.cmp(&b.1.shift)));
    let mut offset = 0;
    pairs
        .into_iter()
        .map(|(_, first, second)| {
            let first_dim = x.dim(&first);
            let second_dim = y.dim(&second);
            let s = Summand {
                first,
                second,
                first_dim,
                second_dim,
                offset,
            };
            offset += s.dim();
            s
        })
        .collect()
}

/// `(X ⊗ Y)_γ = ⊕_{β∘α=γ} X_α ⊗ Y_β`.
pub fn tensor_space(x: &GradedSpace, y: &GradedSpace) -> Result<GradedSpace> {
    check_ctx(&x.ctx, &y.ctx)?;
    let mut dims: BTreeMap<Arrow, usize> = BTreeMap::new();
    for (alpha, dx) in x.arrows() {
        for beta in y.arrows_from(&alpha.target()) {
            let gamma = Arrow::new(alpha.source.clone(), &alpha.shift + &beta.shift);
            *dims.entry(gamma).or_insert(0) += dx * y.dim(beta);
        }
    }
    Ok(GradedSpace::from_map(x.ctx.clone(), dims))
}

/// A family of blocks `f_γ: X_γ → Y_γ`. Missing blocks are zero.
#[derive(Clone, Debug)]
pub struct GradedMorphism {
    domain: Arc<GradedSpace>,
    codomain: Arc<GradedSpace>,
    blocks: BTreeMap<Arrow, CMatrix>,
}

impl GradedMorphism {
    pub fn new(
        domain: Arc<GradedSpace>,
        codomain: Arc<GradedSpace>,
        blocks: BTreeMap<Arrow, CMatrix>,
    ) -> Result<Self> {
        check_ctx(&domain.ctx, &codomain.ctx)?;
        let mut kept = BTreeMap::new();
        for (arrow, block) in blocks {
            let (rows, cols) = (codomain.dim(&arrow), domain.dim(&arrow));
            if block.shape() != (rows, cols) {
                return Err(Error::ShapeMismatch(format!(
                    "block at {arrow} has shape {:?}, expected ({rows}, {cols})",
                    block.shape()
                )));
            }
            if rows > 0 && cols > 0 {
                kept.insert(arrow, block);
            }
        }
        Ok(GradedMorphism {
            domain,
            codomain,
            blocks: kept,
        })
    }

    pub fn zero(domain: Arc<GradedSpace>, codomain: Arc<GradedSpace>) -> Result<Self> {
        Self::new(domain, codomain, BTreeMap::new())
    }

    pub fn identity(space: Arc<GradedSpace>) -> Self {
        let blocks = space
            .arrows()
            .map(|(a, d)| (a.clone(), CMatrix::identity(d, d)))
            .collect();
        GradedMorphism {
            domain: space.clone(),
            codomain: space,
            blocks,
        }
    }

    /// Blockwise identity between two spaces with equal dimensions.
    pub fn identification(domain: Arc<GradedSpace>, codomain: Arc<GradedSpace>) -> Result<Self> {
        if domain.dims != codomain.dims {
            return Err(Error::ShapeMismatch(
                "identification between spaces of different dimensions".into(),
            ));
        }
        let blocks = domain
            .arrows()
            .map(|(a, d)| (a.clone(), CMatrix::identity(d, d)))
            .collect();
        Self::new(domain, codomain, blocks)
    }

    pub fn domain(&self) -> &Arc<GradedSpace> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<GradedSpace> {
        &self.codomain
    }

    pub fn block(&self, arrow: &Arrow) -> Option<&CMatrix> {
        self.blocks.get(arrow)
    }

    /// The block at `arrow`, materialising zeros when absent.
    pub fn block_or_zero(&self, arrow: &Arrow) -> CMatrix {
        self.blocks.get(arrow).cloned().unwrap_or_else(|| {
            CMatrix::zeros(self.codomain.dim(arrow), self.domain.dim(arrow))
        })
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&Arrow, &CMatrix)> {
        self.blocks.iter()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMorphism) -> Result<GradedMorphism> {
        if *other.codomain != *self.domain {
            return Err(Error::ShapeMismatch(
                "codomain of the inner morphism differs from the domain of the outer one".into(),
            ));
        }
        let mut blocks = BTreeMap::new();
        for (arrow, g) in &other.blocks {
            if let Some(f) = self.blocks.get(arrow) {
                blocks.insert(arrow.clone(), f * g);
            }
        }
        Self::new(other.domain.clone(), self.codomain.clone(), blocks)
    }

    fn check_parallel(&self, other: &GradedMorphism) -> Result<()> {
        if *self.domain != *other.domain || *self.codomain != *other.codomain {
            return Err(Error::ShapeMismatch(
                "morphisms have different domains or codomains".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedMorphism) -> Result<GradedMorphism> {
        self.check_parallel(other)?;
        let mut blocks = self.blocks.clone();
        for (arrow, g) in &other.blocks {
            blocks
                .entry(arrow.clone())
                .and_modify(|b| *b += g)
                .or_insert_with(|| g.clone());
        }
        Self::new(self.domain.clone(), self.codomain.clone(), blocks)
    }

    pub fn scale(&self, factor: Complex64) -> GradedMorphism {
        let blocks = self
            .blocks
            .iter()
            .map(|(a, b)| (a.clone(), b * factor))
            .collect();
        GradedMorphism {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            blocks,
        }
    }

    /// Blockwise inverse; fails on singular blocks or unequal dimensions.
    pub fn inverse(&self) -> Result<GradedMorphism> {
        if self.domain.dims != self.codomain.dims {
            return Err(Error::ShapeMismatch("non-square morphism".into()));
        }
        let mut blocks = BTreeMap::new();
        for (arrow, d) in self.domain.arrows() {
            let inv = self
                .block_or_zero(arrow)
                .try_inverse()
                .ok_or_else(|| Error::ShapeMismatch(format!("singular block at {arrow} ({d}×{d})")))?;
            blocks.insert(arrow.clone(), inv);
        }
        Self::new(self.codomain.clone(), self.domain.clone(), blocks)
    }

    /// Max-norm of `self - other` over all blocks.
    pub fn max_abs_diff(&self, other: &GradedMorphism) -> Result<f64> {
        self.check_parallel(other)?;
        let arrows: BTreeSet<&Arrow> = self.blocks.keys().chain(other.blocks.keys()).collect();
        let mut worst: f64 = 0.0;
        for arrow in arrows {
            let diff = self.block_or_zero(arrow) - other.block_or_zero(arrow);
            worst = worst.max(max_abs(&diff));
        }
        Ok(worst)
    }

    pub fn approx_eq(&self, other: &GradedMorphism, tol: f64) -> Result<bool> {
        Ok(self.max_abs_diff(other)? <= tol)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let blocks: Vec<_> = self
            .blocks
            .iter()
            .map(|(a, b)| {
                let rows: Vec<Vec<[f64; 2]>> = (0..b.nrows())
                    .map(|i| (0..b.ncols()).map(|j| [b[(i, j)].re, b[(i, j)].im]).collect())
                    .collect();
                serde_json::json!({
                    "source": a.source.offset().coords(),
                    "shift": a.shift.coords(),
                    "block": rows,
                })
            })
            .collect();
        serde_json::json!({
            "rank": self.domain.ctx.rank,
            "level": self.domain.ctx.level,
            "base": base_json(&self.domain.ctx.base),
            "blocks": blocks,
        })
    }
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `f ⊗ g` with components `⊕_{β∘α=γ} f_α ⊗ g_β`.
pub fn tensor_morphism(f: &GradedMorphism, g: &GradedMorphism) -> Result<GradedMorphism> {
    let domain = Arc::new(tensor_space(&f.domain, &g.domain)?);
    let codomain = Arc::new(tensor_space(&f.codomain, &g.codomain)?);
    let mut blocks = BTreeMap::new();
    for (gamma, cols) in domain.arrows() {
        let rows = codomain.dim(gamma);
        if rows == 0 {
            continue;
        }
        let dom_layout = tensor_layout(&f.domain, &g.domain, gamma);
        let cod_layout = tensor_layout(&f.codomain, &g.codomain, gamma);
        let mut block = CMatrix::zeros(rows, cols);
        for s in &dom_layout {
            let Some(t) = cod_layout
                .iter()
                .find(|t| t.first == s.first && t.second == s.second)
            else {
                continue;
            };
            let (Some(fa), Some(gb)) = (f.block(&s.first), g.block(&s.second)) else {
                continue;
            };
            let k = fa.kronecker(gb);
            block
                .view_mut((t.offset, s.offset), (t.dim(), s.dim()))
                .copy_from(&k);
        }
        blocks.insert(gamma.clone(), block);
    }
    GradedMorphism::new(Arc::new(domain.as_ref().clone()), Arc::new(codomain.as_ref().clone()), blocks)
}

type Label = (Arrow, Arrow, Arrow, usize, usize, usize);

/// The associativity constraint `(U ⊗ V) ⊗ W → U ⊗ (V ⊗ W)`.
pub fn associator(u: &GradedSpace, v: &GradedSpace, w: &GradedSpace) -> Result<GradedMorphism> {
    let uv = tensor_space(u, v)?;
    let vw = tensor_space(v, w)?;
    let left = tensor_space(&uv, w)?;
    let right = tensor_space(u, &vw)?;
    let mut blocks = BTreeMap::new();
    for (delta, d) in left.arrows() {
        let mut right_pos: BTreeMap<Label, usize> = BTreeMap::new();
        for t1 in tensor_layout(u, &vw, delta) {
            for t2 in tensor_layout(v, w, &t1.second) {
                for iu in 0..t1.first_dim {
                    for iv in 0..t2.first_dim {
                        for iw in 0..t2.second_dim {
                            let pos = t1.offset
                                + iu * t1.second_dim
                                + t2.offset
                                + iv * t2.second_dim
                                + iw;
                            right_pos.insert(
                                (t1.first.clone(), t2.first.clone(), t2.second.clone(), iu, iv, iw),
                                pos,
                            );
                        }
                    }
                }
            }
        }
        let mut block = CMatrix::zeros(right.dim(delta), d);
        for s1 in tensor_layout(&uv, w, delta) {
            for s2 in tensor_layout(u, v, &s1.first) {
                for iu in 0..s2.first_dim {
                    for iv in 0..s2.second_dim {
                        for iw in 0..s1.second_dim {
                            let pos = s1.offset
                                + (s2.offset + iu * s2.second_dim + iv) * s1.second_dim
                                + iw;
                            let label =
                                (s2.first.clone(), s2.second.clone(), s1.second.clone(), iu, iv, iw);
                            let row = right_pos[&label];
                            block[(row, pos)] = Complex64::new(1.0, 0.0);
                        }
                    }
                }
            }
        }
        blocks.insert(delta.clone(), block);
    }
    GradedMorphism::new(Arc::new(left), Arc::new(right), blocks)
}

/// Left and right duality data for a graded space.
#[derive(Clone, Debug)]
pub struct DualityData {
    pub dual: Arc<GradedSpace>,
    pub unit: Arc<GradedSpace>,
    /// `1 → V ⊗ V^∨`.
    pub coevaluation: GradedMorphism,
    /// `V^∨ ⊗ V → 1`.
    pub evaluation: GradedMorphism,
    /// `1 → V^∨ ⊗ V`.
    pub right_coevaluation: GradedMorphism,
    /// `V ⊗ V^∨ → 1`.
    pub right_evaluation: GradedMorphism,
}

/// `(V^∨)_γ = (V_{γ^{-1}})^*` with the canonical (co)evaluation maps.
pub fn dual_space(v: &GradedSpace) -> Result<DualityData> {
    let dual = Arc::new(GradedSpace::new(
        v.ctx.clone(),
        v.arrows().map(|(a, d)| (a.inverse(), d)),
    ));
    let unit = Arc::new(GradedSpace::unit(v.ctx.clone(), v.objects()));
    let coevaluation = canonical_element(&unit, v, &dual, true)?;
    let evaluation = canonical_element(&unit, &dual, v, false)?;
    let right_coevaluation = canonical_element(&unit, &dual, v, true)?;
    let right_evaluation = canonical_element(&unit, v, &dual, false)?;
    Ok(DualityData {
        dual,
        unit,
        coevaluation,
        evaluation,
        right_coevaluation,
        right_evaluation,
    })
}

/// `Σ e_i ⊗ e_i^*` (as a map from the unit when `into`, as a pairing otherwise)
/// on the identity components of `X ⊗ Y`, where `Y_{α^{-1}}` is dual to `X_α`.
fn canonical_element(
    unit: &Arc<GradedSpace>,
    x: &GradedSpace,
    y: &GradedSpace,
    into: bool,
) -> Result<GradedMorphism> {
    let xy = Arc::new(tensor_space(x, y)?);
    let mut blocks = BTreeMap::new();
    for (id, _) in unit.arrows() {
        let dim = xy.dim(id);
        if dim == 0 {
            continue;
        }
        let mut vec = vec![Complex64::new(0.0, 0.0); dim];
        for s in tensor_layout(x, y, id) {
            debug_assert_eq!(s.second, s.first.inverse());
            for i in 0..s.first_dim {
                vec[s.offset + i * s.second_dim + i] = Complex64::new(1.0, 0.0);
            }
        }
        let block = if into {
            CMatrix::from_column_slice(dim, 1, &vec)
        } else {
            CMatrix::from_row_slice(1, dim, &vec)
        };
        blocks.insert(id.clone(), block);
    }
    if into {
        GradedMorphism::new(unit.clone(), xy, blocks)
    } else {
        GradedMorphism::new(xy, unit.clone(), blocks)
    }
}

impl DualityData {
    /// Residuals of the four zig-zag identities: two for the left dual, two for
    /// the right dual.
    pub fn zigzag_residuals(&self, v: &Arc<GradedSpace>) -> Result<[f64; 4]> {
        let dual = &self.dual;
        let unit = &self.unit;
        let id_v = GradedMorphism::identity(v.clone());
        let id_d = GradedMorphism::identity(dual.clone());

        // V → 1⊗V → (V⊗V^∨)⊗V → V⊗(V^∨⊗V) → V⊗1 → V
        let one_v = Arc::new(tensor_space(unit, v)?);
        let v_one = Arc::new(tensor_space(v, unit)?);
        let d_one = Arc::new(tensor_space(dual, unit)?);
        let one_d = Arc::new(tensor_space(unit, dual)?);

        let z1 = GradedMorphism::identification(v_one.clone(), v.clone())?
            .compose(&tensor_morphism(&id_v, &self.evaluation)?)?
            .compose(&associator(v, dual, v)?)?
            .compose(&tensor_morphism(&self.coevaluation, &id_v)?)?
            .compose(&GradedMorphism::identification(v.clone(), one_v.clone())?)?;

        // V^∨ → V^∨⊗1 → V^∨⊗(V⊗V^∨) → (V^∨⊗V)⊗V^∨ → 1⊗V^∨ → V^∨
        let z2 = GradedMorphism::identification(one_d.clone(), dual.clone())?
            .compose(&tensor_morphism(&self.evaluation, &id_d)?)?
            .compose(&associator(dual, v, dual)?.inverse()?)?
            .compose(&tensor_morphism(&id_d, &self.coevaluation)?)?
            .compose(&GradedMorphism::identification(dual.clone(), d_one.clone())?)?;

        // V → V⊗1 → V⊗(V^∨⊗V) → (V⊗V^∨)⊗V → 1⊗V → V
        let z3 = GradedMorphism::identification(one_v, v.clone())?
            .compose(&tensor_morphism(&self.right_evaluation, &id_v)?)?
            .compose(&associator(v, dual, v)?.inverse()?)?
            .compose(&tensor_morphism(&id_v, &self.right_coevaluation)?)?
            .compose(&GradedMorphism::identification(v.clone(), v_one)?)?;

        // V^∨ → 1⊗V^∨ → (V^∨⊗V)⊗V^∨ → V^∨⊗(V⊗V^∨) → V^∨⊗1 → V^∨
        let z4 = GradedMorphism::identification(d_one, dual.clone())?
            .compose(&tensor_morphism(&id_d, &self.right_evaluation)?)?
            .compose(&associator(dual, v, dual)?)?
            .compose(&tensor_morphism(&self.right_coevaluation, &id_d)?)?
            .compose(&GradedMorphism::identification(dual.clone(), one_d)?)?;

        Ok([
            z1.max_abs_diff(&id_v)?,
            z2.max_abs_diff(&id_d)?,
            z3.max_abs_diff(&id_v)?,
            z4.max_abs_diff(&id_d)?,
        ])
    }
}

/// Serialisable listing of a space, one entry per arrow.
#[derive(Debug, Serialize)]
pub struct ArrowDim {
    pub source: Vec<i64>,
    pub shift: Vec<i64>,
    pub dim: usize,
}

/// A path-graph style helper: arrows `(a, ε_i)` for the listed points.
pub fn unit_step_space(ctx: Context, points: &[WeightPoint], allowed: impl Fn(&WeightPoint) -> bool) -> GradedSpace {
    let n = ctx.rank;
    let mut dims = Vec::new();
    for a in points {
        for i in 0..n {
            let e = LatticeVector::unit(n, i);
            if allowed(a) && allowed(&a.shifted(&e)) {
                dims.push((Arrow::new(a.clone(), e), 1));
            }
        }
    }
    GradedSpace::new(ctx, dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{alcove_contains, enumerate_alcove, AlcoveSpec};

    fn rsos_v(n: usize, r: i64) -> Arc<GradedSpace> {
        let spec = AlcoveSpec::regular_affine(n, r);
        let pts = enumerate_alcove(&spec).unwrap();
        Arc::new(unit_step_space(Context::rsos(n, r), &pts, |p| {
            alcove_contains(p, &spec)
        }))
    }

    fn arrow(l: i64, shift: &[i64]) -> Arrow {
        Arrow::new(
            WeightPoint::integral(&[l, 0]),
            LatticeVector::new(shift.to_vec()),
        )
    }

    #[test]
    fn tensor_square_dimensions_n2_r5() {
        let v = rsos_v(2, 5);
        let vv = tensor_space(&v, &v).unwrap();
        assert_eq!(vv.dim(&arrow(1, &[2, 0])), 1);
        assert_eq!(vv.dim(&arrow(1, &[1, 1])), 1);
        assert_eq!(vv.dim(&arrow(2, &[1, 1])), 2);
        assert_eq!(vv.dim(&arrow(1, &[0, 2])), 0);
    }

    #[test]
    fn unit_is_neutral() {
        let v = rsos_v(2, 5);
        let unit = GradedSpace::unit(v.context().clone(), v.objects());
        assert_eq!(tensor_space(&v, &unit).unwrap(), *v);
        assert_eq!(tensor_space(&unit, &v).unwrap(), *v);
    }

    #[test]
    fn context_mismatch_is_reported() {
        let a = rsos_v(2, 5);
        let b = rsos_v(2, 4);
        assert!(matches!(tensor_space(&a, &b), Err(Error::ContextMismatch)));
    }

    #[test]
    fn dual_reverses_arrows() {
        let v = rsos_v(2, 5);
        let d = dual_space(&v).unwrap();
        let mut arrows: Vec<_> = d.dual.arrows().map(|(a, _)| a.clone()).collect();
        arrows.sort();
        assert_eq!(arrows.len(), 6);
        for a in &arrows {
            let i = (-&a.shift).as_unit().expect("shift is -e_i");
            let _ = i;
            assert_eq!(v.dim(&a.inverse()), 1);
        }
    }

    #[test]
    fn unit_dual_is_unit() {
        let v = rsos_v(2, 5);
        let unit = GradedSpace::unit(v.context().clone(), v.objects());
        let d = dual_space(&unit).unwrap();
        assert_eq!(*d.dual, unit);
    }

    #[test]
    fn zigzags_are_identities() {
        let v = rsos_v(3, 5);
        let d = dual_space(&v).unwrap();
        for r in d.zigzag_residuals(&v).unwrap() {
            assert!(r < 1e-12, "residual {r}");
        }
    }

    #[test]
    fn shape_mismatch_rejected() {
        let v = rsos_v(2, 5);
        let mut blocks = BTreeMap::new();
        blocks.insert(arrow(1, &[1, 0]), CMatrix::zeros(2, 1));
        assert!(matches!(
            GradedMorphism::new(v.clone(), v, blocks),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn kronecker_of_single_blocks() {
        let ctx = Context::rsos(2, 5);
        let a = arrow(1, &[1, 0]);
        let b = arrow(2, &[0, 1]);
        let x = Arc::new(GradedSpace::new(ctx.clone(), [(a.clone(), 2)]));
        let y = Arc::new(GradedSpace::new(ctx, [(b.clone(), 2)]));
        let fa = CMatrix::from_fn(2, 2, |i, j| Complex64::new((i + 2 * j) as f64, 1.0));
        let gb = CMatrix::from_fn(2, 2, |i, j| Complex64::new(1.0, (3 * i + j) as f64));
        let f = GradedMorphism::new(x.clone(), x, BTreeMap::from([(a.clone(), fa.clone())])).unwrap();
        let g = GradedMorphism::new(y.clone(), y, BTreeMap::from([(b, gb.clone())])).unwrap();
        let fg = tensor_morphism(&f, &g).unwrap();
        let gamma = arrow(1, &[1, 1]);
        assert_eq!(fg.block(&gamma).unwrap(), &fa.kronecker(&gb));
        assert_eq!(fg.blocks().count(), 1);
    }
}
