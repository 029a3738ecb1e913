//! The convolution ring of a groupoid and its realisation by difference operators.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graded::{CMatrix, Context, GradedSpace};
use crate::groupoid::{Arrow, LatticeVector, WeightPoint};

/// Coefficient types usable in the convolution ring.
pub trait Coefficient:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Coefficient for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// A finitely supported function on arrows. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvolutionElement<T = i64> {
    ctx: Context,
    coeffs: BTreeMap<Arrow, T>,
}

impl<T: Coefficient> ConvolutionElement<T> {
    pub fn zero(ctx: Context) -> Self {
        ConvolutionElement {
            ctx,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms(ctx: Context, terms: impl IntoIterator<Item = (Arrow, T)>) -> Self {
        let mut out = Self::zero(ctx);
        for (arrow, c) in terms {
            out.add_term(arrow, c);
        }
        out
    }

    /// The characteristic function of the identity arrows at `objects`.
    /// On a finite set of objects `A` this is the idempotent `χ_A`.
    pub fn indicator(ctx: Context, objects: impl IntoIterator<Item = WeightPoint>) -> Self {
        Self::from_terms(ctx, objects.into_iter().map(|a| (Arrow::identity(a), T::one())))
    }

    /// `χ_A t_μ χ_A`: coefficient one at `(a, μ)` whenever both ends lie in `points`.
    pub fn restricted_shift(ctx: Context, points: &[WeightPoint], mu: &LatticeVector) -> Self {
        let set: std::collections::BTreeSet<&WeightPoint> = points.iter().collect();
        Self::from_terms(
            ctx,
            points
                .iter()
                .filter(|a| set.contains(&a.shifted(mu)))
                .map(|a| (Arrow::new(a.clone(), mu.clone()), T::one())),
        )
    }

    pub fn add_term(&mut self, arrow: Arrow, c: T) {
        let entry = self.coeffs.entry(arrow);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn coeff(&self, arrow: &Arrow) -> T {
        self.coeffs.get(arrow).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Arrow, &T)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// `(x * y)(γ) = Σ_{β∘α=γ} x(α) y(β)`.
    pub fn conv_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut by_source: BTreeMap<&WeightPoint, Vec<(&Arrow, &T)>> = BTreeMap::new();
        for (b, c) in &other.coeffs {
            by_source.entry(&b.source).or_default().push((b, c));
        }
        let mut out = Self::zero(self.ctx.clone());
        for (alpha, x) in &self.coeffs {
            let target = alpha.target();
            let Some(betas) = by_source.get(&target) else {
                continue;
            };
            for (beta, y) in betas {
                let gamma = Arrow::new(alpha.source.clone(), &alpha.shift + &beta.shift);
                out.add_term(gamma, x.clone() * (*y).clone());
            }
        }
        Ok(out)
    }

    /// `σ(x)(γ) = x(γ^{-1})`.
    pub fn involution(&self) -> Self {
        Self::from_terms(
            self.ctx.clone(),
            self.coeffs.iter().map(|(a, c)| (a.inverse(), c.clone())),
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, c) in &other.coeffs {
            out.add_term(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-T::one()))
    }

    pub fn scale(&self, factor: T) -> Self {
        Self::from_terms(
            self.ctx.clone(),
            self.coeffs
                .iter()
                .map(|(a, c)| (a.clone(), c.clone() * factor.clone())),
        )
    }

    /// Realise the element as `Σ_μ x_μ t_μ` acting on functions on `points`.
    pub fn to_difference_operator(&self, points: &[WeightPoint]) -> Result<DifferenceOperator<T>> {
        let index: BTreeMap<&WeightPoint, usize> =
            points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut terms: BTreeMap<LatticeVector, Vec<T>> = BTreeMap::new();
        for (arrow, c) in &self.coeffs {
            let (Some(&i), true) = (
                index.get(&arrow.source),
                index.contains_key(&arrow.target()),
            ) else {
                return Err(Error::SupportOutsideAlcove(arrow.to_string()));
            };
            terms
                .entry(arrow.shift.clone())
                .or_insert_with(|| vec![T::zero(); points.len()])[i] = c.clone();
        }
        Ok(DifferenceOperator {
            points: points.to_vec(),
            terms,
        })
    }

    pub fn to_json(&self) -> serde_json::Value
    where
        T: Display,
    {
        let terms: Vec<_> = self
            .coeffs
            .iter()
            .map(|(a, c)| {
                let s = c.to_string();
                let coeff = s
                    .parse::<i64>()
                    .map(serde_json::Value::from)
                    .unwrap_or(serde_json::Value::String(s));
                serde_json::json!({
                    "source": a.source.offset().coords(),
                    "shift": a.shift.coords(),
                    "coeff": coeff,
                })
            })
            .collect();
        serde_json::json!({
            "rank": self.ctx.rank,
            "level": self.ctx.level,
            "terms": terms,
        })
    }

    /// CSV with columns `source,shift,coeff`; vector entries are `;`-separated.
    pub fn to_csv(&self) -> String
    where
        T: Display,
    {
        let mut out = String::from("source,shift,coeff\n");
        for (a, c) in &self.coeffs {
            out.push_str(&format!(
                "{},{},{}\n",
                join(a.source.offset().coords()),
                join(a.shift.coords()),
                c
            ));
        }
        out
    }
}

pub(crate) fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(";")
}

impl ConvolutionElement<i64> {
    /// `γ ↦ dim V_γ`.
    pub fn character(space: &GradedSpace) -> Self {
        Self::from_terms(
            space.context().clone(),
            space.arrows().map(|(a, d)| (a.clone(), d as i64)),
        )
    }

    pub fn to_rational(&self) -> ConvolutionElement<Rational64> {
        ConvolutionElement::from_terms(
            self.ctx.clone(),
            self.coeffs
                .iter()
                .map(|(a, &c)| (a.clone(), Rational64::from_integer(c))),
        )
    }
}

/// `Σ_μ f_μ t_μ` on functions over an ordered finite set of points, with
/// `(t_μ ψ)(a) = ψ(a + μ)` and values outside the set read as zero.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceOperator<T = i64> {
    points: Vec<WeightPoint>,
    terms: BTreeMap<LatticeVector, Vec<T>>,
}

impl<T: Coefficient> DifferenceOperator<T> {
    pub fn points(&self) -> &[WeightPoint] {
        &self.points
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &[T])> {
        self.terms.iter().map(|(m, v)| (m, v.as_slice()))
    }

    /// Dense matrix with `M[a][a+μ] = f_μ(a)`.
    pub fn matrix(&self) -> Vec<Vec<T>> {
        let n = self.points.len();
        let index: BTreeMap<&WeightPoint, usize> =
            self.points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut m = vec![vec![T::zero(); n]; n];
        for (mu, coeffs) in &self.terms {
            for (i, a) in self.points.iter().enumerate() {
                if coeffs[i].is_zero() {
                    continue;
                }
                if let Some(&j) = index.get(&a.shifted(mu)) {
                    m[i][j] = m[i][j].clone() + coeffs[i].clone();
                }
            }
        }
        m
    }

    pub fn to_complex_matrix(&self) -> CMatrix
    where
        T: ToPrimitive,
    {
        let m = self.matrix();
        let n = self.points.len();
        CMatrix::from_fn(n, n, |i, j| {
            Complex64::new(m[i][j].to_f64().expect("finite coefficient"), 0.0)
        })
    }

    /// `(Dψ)(a) = Σ_μ f_μ(a) ψ(a + μ)`.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64>
    where
        T: ToPrimitive,
    {
        let m = self.to_complex_matrix();
        let v = nalgebra::DVector::from_column_slice(psi);
        (m * v).iter().copied().collect()
    }

    /// CSV of the dense matrix, one row per line, with a header of column indices.
    pub fn matrix_csv(&self) -> String
    where
        T: Display,
    {
        let n = self.points.len();
        let mut out = String::from("row");
        for j in 0..n {
            out.push_str(&format!(",{j}"));
        }
        out.push('\n');
        for (i, row) in self.matrix().iter().enumerate() {
            out.push_str(&i.to_string());
            for c in row {
                out.push_str(&format!(",{c}"));
            }
            out.push('\n');
        }
        out
    }
}
