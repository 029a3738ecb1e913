//! Odd Jacobi theta function, the normalised bracket `[z]` and the elliptic
//! dynamical R-matrix `Ř(z, a)` on `C^n ⊗ C^n`.
//!
//! Basis of `C^n ⊗ C^n`: `e_i ⊗ e_j` has index `n·i + j` (zero based).

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graded::{max_abs, CMatrix};
use crate::groupoid::WeightPoint;

/// Minimum number of series terms on each side of zero.
pub const MIN_TRUNCATION: usize = 12;
/// Denominators with modulus below this are refused.
pub const DEFAULT_POLE_GUARD: f64 = 1e-8;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn tail_truncation(z: Complex64, tau: Complex64) -> usize {
    // e^{-π Im τ (N - |Im z|/Im τ)^2} < 1e-17
    let t = tau.im;
    let need = z.im.abs() / t + (17.0 * std::f64::consts::LN_10 / (PI * t)).sqrt();
    MIN_TRUNCATION.max(need.ceil() as usize + 1)
}

/// `θ(z, τ) = -Σ_k exp(iπ(k+½)²τ + 2πi(k+½)(z+½))`, summed over `-N-1 ≤ k ≤ N`.
pub fn theta_truncated(z: Complex64, tau: Complex64, n: usize) -> Complex64 {
    let n = n as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in (-n - 1)..=n {
        let h = k as f64 + 0.5;
        sum += (I * PI * h * h * tau + 2.0 * PI * I * h * (z + 0.5)).exp();
    }
    -sum
}

pub fn theta(z: Complex64, tau: Complex64) -> Result<Complex64> {
    if tau.im <= 0.0 {
        return Err(Error::InvalidTau(tau.im));
    }
    Ok(theta_truncated(z, tau, tail_truncation(z, tau)))
}

/// `θ'(0, τ)` from the term-wise differentiated series.
pub fn theta_prime_zero(tau: Complex64) -> Result<Complex64> {
    if tau.im <= 0.0 {
        return Err(Error::InvalidTau(tau.im));
    }
    let n = tail_truncation(Complex64::new(0.0, 0.0), tau) as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in (-n - 1)..=n {
        let h = k as f64 + 0.5;
        sum += 2.0 * PI * I * h * (I * PI * h * h * tau + PI * I * h).exp();
    }
    Ok(-sum)
}

/// Parameters of the bracket and R-matrix.
#[derive(Clone, Debug)]
pub struct EllipticParams {
    tau: Complex64,
    gamma: Complex64,
    rank: usize,
    pole_guard: f64,
    theta_prime0: Complex64,
}

impl EllipticParams {
    pub fn new(rank: usize, tau: Complex64, gamma: Complex64) -> Result<Self> {
        if tau.im <= 0.0 {
            return Err(Error::InvalidTau(tau.im));
        }
        if rank < 2 {
            return Err(Error::InvalidParams(format!("rank must be at least 2, got {rank}")));
        }
        // γ ∉ Z + τZ
        let k = gamma.im / tau.im;
        let m = gamma - tau * k.round();
        if (k - k.round()).abs() < 1e-12 && (m.re - m.re.round()).abs() < 1e-12 && m.im.abs() < 1e-12 {
            return Err(Error::InvalidParams(format!("gamma = {gamma} lies in Z + tau Z")));
        }
        Ok(EllipticParams {
            tau,
            gamma,
            rank,
            pole_guard: DEFAULT_POLE_GUARD,
            theta_prime0: theta_prime_zero(tau)?,
        })
    }

    /// RSOS parameters: `γ = 1/r` with an integer level `r > n`.
    pub fn rsos(rank: usize, level: i64, tau: Complex64) -> Result<Self> {
        if level <= rank as i64 {
            return Err(Error::InvalidParams(format!(
                "level r = {level} must exceed the rank n = {rank}"
            )));
        }
        Self::new(rank, tau, Complex64::new(1.0 / level as f64, 0.0))
    }

    pub fn with_pole_guard(mut self, guard: f64) -> Self {
        self.pole_guard = guard;
        self
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn pole_guard(&self) -> f64 {
        self.pole_guard
    }

    /// `r = 1/γ` when it is an integer.
    pub fn level(&self) -> Option<i64> {
        let r = 1.0 / self.gamma;
        (r.im.abs() < 1e-12 && (r.re - r.re.round()).abs() < 1e-9).then(|| r.re.round() as i64)
    }

    pub fn theta_prime0(&self) -> Complex64 {
        self.theta_prime0
    }

    /// `[z] = θ(γz, τ) / (γ θ'(0, τ))`.
    pub fn bracket(&self, z: Complex64) -> Complex64 {
        let gz = self.gamma * z;
        theta_truncated(gz, self.tau, tail_truncation(gz, self.tau)) / (self.gamma * self.theta_prime0)
    }

    fn guarded(&self, z: Complex64, what: impl FnOnce() -> String) -> Result<Complex64> {
        let v = self.bracket(z);
        if v.norm() < self.pole_guard {
            Err(Error::NearPole {
                what: what(),
                modulus: v.norm(),
            })
        } else {
            Ok(v)
        }
    }

    fn check_rank(&self, a: &[Complex64]) -> Result<()> {
        if a.len() == self.rank {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "point of rank {} used with parameters of rank {}",
                a.len(),
                self.rank
            )))
        }
    }

    /// `Ř(z, a)` for an arbitrary complex point `a`.
    pub fn r_matrix_at(&self, z: Complex64, a: &[Complex64]) -> Result<CMatrix> {
        self.check_rank(a)?;
        let n = self.rank;
        let one = Complex64::new(1.0, 0.0);
        let den_z = self.guarded(one - z, || format!("[1 - z] at z = {z}"))?;
        let bz = self.bracket(z);
        let b1 = self.bracket(one);
        let mut m = DMatrix::zeros(n * n, n * n);
        for i in 0..n {
            m[(n * i + i, n * i + i)] = one;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = a[i] - a[j];
                let den = self.guarded(d, || format!("[a_{} - a_{}] = [{d}]", i + 1, j + 1))? * den_z;
                m[(n * i + j, n * j + i)] = -self.bracket(d + one) * bz / den;
                m[(n * i + j, n * i + j)] = self.bracket(d + z) * b1 / den;
            }
        }
        Ok(m)
    }

    pub fn r_matrix(&self, z: Complex64, a: &WeightPoint) -> Result<CMatrix> {
        self.r_matrix_at(z, &a.coords())
    }

    /// `Ř_reg(1, a) = Σ_{i≠j} [a_ij+1][1]/[a_ij] (E_ij⊗E_ji − E_ii⊗E_jj)`.
    pub fn r_reg1_at(&self, a: &[Complex64]) -> Result<CMatrix> {
        self.check_rank(a)?;
        let n = self.rank;
        let one = Complex64::new(1.0, 0.0);
        let b1 = self.bracket(one);
        let mut m = DMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = a[i] - a[j];
                let c = self.bracket(d + one) * b1
                    / self.guarded(d, || format!("[a_{} - a_{}] = [{d}]", i + 1, j + 1))?;
                m[(n * i + j, n * j + i)] = c;
                m[(n * i + j, n * i + j)] = -c;
            }
        }
        Ok(m)
    }

    pub fn r_reg1(&self, a: &WeightPoint) -> Result<CMatrix> {
        self.r_reg1_at(&a.coords())
    }

    /// Numerical `lim_{z→1} (z−1) Ř(z, a)` by two rounds of Richardson
    /// extrapolation over `ε ∈ {1e−4, 1e−5, 1e−6}`.
    ///
    /// An independent check of the closed form [`Self::r_reg1_at`].
    pub fn residue_at_one(&self, a: &[Complex64]) -> Result<CMatrix> {
        let sample = |eps: f64| -> Result<CMatrix> {
            let z = Complex64::new(1.0 + eps, 0.0);
            // z − 1 is exact in floating point, so the prefactor matches the
            // argument actually fed to the brackets.
            Ok(self.r_matrix_at(z, a)? * (z - 1.0))
        };
        let step = |coarse: &CMatrix, fine: &CMatrix, ratio: f64| {
            (fine.map(|x| x * ratio) - coarse).map(|x| x / (ratio - 1.0))
        };
        let f = [sample(1e-4)?, sample(1e-5)?, sample(1e-6)?];
        let first = [step(&f[0], &f[1], 10.0), step(&f[1], &f[2], 10.0)];
        Ok(step(&first[0], &first[1], 100.0))
    }

    /// `max |residue − Ř_reg(1)| / max |Ř_reg(1)|`.
    pub fn residue_relative_error(&self, a: &[Complex64]) -> Result<f64> {
        let closed = self.r_reg1_at(a)?;
        let numeric = self.residue_at_one(a)?;
        Ok(max_abs(&(numeric - &closed)) / max_abs(&closed).max(f64::MIN_POSITIVE))
    }

    /// `Ř(-1, a)` in closed form:
    /// `Σ E_ii⊗E_ii + Σ_{i≠j} ([a_ij+1][1] E_ij⊗E_ji + [a_ij−1][1] E_ii⊗E_jj) / ([a_ij][2])`.
    pub fn r_minus1_at(&self, a: &[Complex64]) -> Result<CMatrix> {
        self.check_rank(a)?;
        let n = self.rank;
        let one = Complex64::new(1.0, 0.0);
        let b1 = self.bracket(one);
        let b2 = self.guarded(Complex64::new(2.0, 0.0), || "[2]".to_string())?;
        let mut m = DMatrix::zeros(n * n, n * n);
        for i in 0..n {
            m[(n * i + i, n * i + i)] = one;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = a[i] - a[j];
                let den = self.guarded(d, || format!("[a_{} - a_{}] = [{d}]", i + 1, j + 1))? * b2;
                m[(n * i + j, n * j + i)] = self.bracket(d + one) * b1 / den;
                m[(n * i + j, n * i + j)] = self.bracket(d - one) * b1 / den;
            }
        }
        Ok(m)
    }

    pub fn r_minus1(&self, a: &WeightPoint) -> Result<CMatrix> {
        self.r_minus1_at(&a.coords())
    }

    /// `‖Ř(z,a) Ř(−z,a) − Id‖_max`.
    pub fn unitarity_residual(&self, z: Complex64, a: &[Complex64]) -> Result<f64> {
        let p = self.r_matrix_at(z, a)? * self.r_matrix_at(-z, a)?;
        let n2 = self.rank * self.rank;
        Ok(max_abs(&(p - CMatrix::identity(n2, n2))))
    }

    /// `Σ_i E_ii ⊗ Ř(z, a + ε_i)` on `C^n ⊗ C^n ⊗ C^n`: the first factor's
    /// weight shifts the dynamical argument of the operator on factors two and three.
    pub fn r23_dynamical(&self, z: Complex64, a: &[Complex64]) -> Result<CMatrix> {
        let n = self.rank;
        let n2 = n * n;
        let mut m = DMatrix::zeros(n * n2, n * n2);
        for i in 0..n {
            let mut shifted = a.to_vec();
            shifted[i] += 1.0;
            let r = self.r_matrix_at(z, &shifted)?;
            m.view_mut((i * n2, i * n2), (n2, n2)).copy_from(&r);
        }
        Ok(m)
    }

    /// `Ř(z, a) ⊗ Id` on `C^n ⊗ C^n ⊗ C^n`.
    pub fn r12(&self, z: Complex64, a: &[Complex64]) -> Result<CMatrix> {
        let n = self.rank;
        Ok(self.r_matrix_at(z, a)?.kronecker(&CMatrix::identity(n, n)))
    }

    /// Max-norm residual of
    /// `Ř(z−w, a+h⁽¹⁾)⁽²³⁾ Ř(z,a)⁽¹²⁾ Ř(w, a+h⁽¹⁾)⁽²³⁾ = Ř(w,a)⁽¹²⁾ Ř(z, a+h⁽¹⁾)⁽²³⁾ Ř(z−w,a)⁽¹²⁾`.
    pub fn dynamical_ybe_residual(&self, z: Complex64, w: Complex64, a: &[Complex64]) -> Result<f64> {
        let lhs = self.r23_dynamical(z - w, a)? * self.r12(z, a)? * self.r23_dynamical(w, a)?;
        let rhs = self.r12(w, a)? * self.r23_dynamical(z, a)? * self.r12(z - w, a)?;
        Ok(max_abs(&(lhs - rhs)))
    }
}

/// Residuals of `θ(z+1) = −θ(z)` and `θ(z+τ) = −e^{−iπτ−2πiz} θ(z)`.
pub fn quasi_periodicity_residuals(z: Complex64, tau: Complex64) -> Result<(f64, f64)> {
    let t = theta(z, tau)?;
    let r1 = (theta(z + 1.0, tau)? + t).norm();
    let r2 = (theta(z + tau, tau)? + (-I * PI * tau - 2.0 * PI * I * z).exp() * t).norm();
    Ok((r1, r2))
}
