//! Command-line front end: verification suites with JSON reports and
//! deterministic computations.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::convolution::ConvolutionElement;
use crate::elliptic::{quasi_periodicity_residuals, theta, theta_truncated, EllipticParams};
use crate::error::{Error, Result};
use crate::fusion::{
    exterior_character, fusion_coeff, numeric_sym_square_character, sym_power_character_n2,
    sym_square_character, verify_exactness, verify_fusion_rules, verify_spectrum,
};
use crate::graded::tensor_space;
use crate::groupoid::{Arrow, LatticeVector};
use crate::rsos::Model;
use crate::transfer::{partition_enumerate, partition_via_transfer, row_states, transfer_matrix, LOperator};

#[derive(Debug, Parser)]
#[command(name = "rsos", version, about = "Elliptic RSOS models: verification suites and computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite and write a JSON report.
    Verify {
        /// theta, unitarity, dybe, star-triangle, restriction, exactness,
        /// transfer-commute, characters, fusion, spectrum, partition or all.
        suite: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compute an artifact.
    Compute {
        /// character, boltzmann-table, fusion-table, spectrum or partition.
        target: String,
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        extra: ComputeArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 5)]
    pub r: i64,
    /// Modular parameter as `re,im`.
    #[arg(long, default_value = "0,0.8", allow_hyphen_values = true)]
    pub tau: String,
    /// Override of γ for the SOS checks, as `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// SOS base point: comma-separated reals, or `;`-separated `re,im` pairs.
    #[arg(long, allow_hyphen_values = true)]
    pub base: Option<String>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Replace every per-case tolerance by this value.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Evaluate cases in parallel; results keep their sequential order.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    /// Exterior power for `character` and `spectrum`.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub cols: usize,
    #[arg(long, default_value_t = 2)]
    pub rows: usize,
    /// Spectral parameter as `re,im`.
    #[arg(long, default_value = "0.3,0", allow_hyphen_values = true)]
    pub z: String,
    /// Evaluation points of the row, `;`-separated `re,im` pairs (default all zero).
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| {
        p.parse::<f64>()
            .map_err(|_| Error::InvalidConfig(format!("cannot parse complex number {s:?}")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(Error::InvalidConfig(format!("expected re,im, got {s:?}"))),
    }
}

fn parse_complex_list(s: &str) -> Result<Vec<Complex64>> {
    if s.contains(';') {
        s.split(';').map(parse_complex).collect()
    } else {
        s.split(',').map(|x| parse_complex(x.trim())).collect()
    }
}

/// Validated run configuration.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub r: i64,
    #[serde(serialize_with = "ser_complex")]
    pub tau: Complex64,
    #[serde(serialize_with = "ser_opt_complex")]
    pub gamma_override: Option<Complex64>,
    #[serde(serialize_with = "ser_opt_complex_list")]
    pub base_b: Option<Vec<Complex64>>,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub format: Format,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub parallel: bool,
}

fn pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    pair(z).serialize(s)
}

fn ser_opt_complex<S: serde::Serializer>(z: &Option<Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    z.as_ref().map(pair).serialize(s)
}

fn ser_opt_complex_list<S: serde::Serializer>(
    z: &Option<Vec<Complex64>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    z.as_ref().map(|v| v.iter().map(pair).collect::<Vec<_>>()).serialize(s)
}

impl RunConfig {
    pub fn from_args(args: &CommonArgs) -> Result<Self> {
        let cfg = RunConfig {
            n: args.n,
            r: args.r,
            tau: parse_complex(&args.tau)?,
            gamma_override: args.gamma.as_deref().map(parse_complex).transpose()?,
            base_b: args.base.as_deref().map(parse_complex_list).transpose()?,
            seed: args.seed,
            tolerance: args.tolerance,
            format: args.format,
            output: args.output.clone(),
            parallel: args.parallel,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Defaults with the given rank and level.
    pub fn new(n: usize, r: i64) -> Self {
        RunConfig {
            n,
            r,
            tau: Complex64::new(0.0, 0.8),
            gamma_override: None,
            base_b: None,
            seed: 7,
            tolerance: None,
            format: Format::Json,
            output: None,
            parallel: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!("n = {} must be at least 2", self.n)));
        }
        if self.r <= self.n as i64 {
            return Err(Error::InvalidConfig(format!("r = {} must exceed n = {}", self.r, self.n)));
        }
        // Written so that NaN is rejected too.
        if self.tau.im.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InvalidConfig(format!("Im tau = {} must be positive", self.tau.im)));
        }
        if let Some(t) = self.tolerance {
            if t.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::InvalidConfig(format!("tolerance {t} must be positive")));
            }
        }
        if let Some(b) = &self.base_b {
            if b.len() != self.n {
                return Err(Error::InvalidConfig(format!("base has {} entries, expected {}", b.len(), self.n)));
            }
        }
        Ok(())
    }

    fn model(&self) -> Result<Model> {
        Model::rsos(self.n, self.r, self.tau)
    }

    fn params(&self) -> Result<EllipticParams> {
        EllipticParams::rsos(self.n, self.r, self.tau)
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

/// One checked quantity.
#[derive(Debug, Clone, Serialize)]
pub struct Case {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Case {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Case {
            name: name.into(),
            residual,
            tolerance,
            passed: residual.is_finite() && residual < tolerance,
        }
    }

    /// An exact check: residual 0 when it holds, 1 otherwise.
    pub fn exact(name: impl Into<String>, holds: bool) -> Self {
        Case::new(name, if holds { 0.0 } else { 1.0 }, 0.5)
    }

    fn retolerate(mut self, tol: Option<f64>) -> Self {
        if let Some(t) = tol {
            self.tolerance = t;
            self.passed = self.residual.is_finite() && self.residual < t;
        }
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub config: RunConfig,
    pub cases: Vec<Case>,
    pub max_residual: f64,
    pub passed: bool,
}

impl Report {
    fn new(suite: &str, config: &RunConfig, cases: Vec<Case>) -> Self {
        let cases: Vec<Case> = cases.into_iter().map(|c| c.retolerate(config.tolerance)).collect();
        Report {
            suite: suite.to_string(),
            config: config.clone(),
            max_residual: cases.iter().map(|c| c.residual).fold(0.0, f64::max),
            passed: cases.iter().all(|c| c.passed),
            cases,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Theta,
    Unitarity,
    Dybe,
    StarTriangle,
    Restriction,
    Exactness,
    TransferCommute,
    Characters,
    Fusion,
    Spectrum,
    Partition,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 11] = [
        Suite::Theta,
        Suite::Unitarity,
        Suite::Dybe,
        Suite::StarTriangle,
        Suite::Restriction,
        Suite::Exactness,
        Suite::TransferCommute,
        Suite::Characters,
        Suite::Fusion,
        Suite::Spectrum,
        Suite::Partition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theta => "theta",
            Suite::Unitarity => "unitarity",
            Suite::Dybe => "dybe",
            Suite::StarTriangle => "star-triangle",
            Suite::Restriction => "restriction",
            Suite::Exactness => "exactness",
            Suite::TransferCommute => "transfer-commute",
            Suite::Characters => "characters",
            Suite::Fusion => "fusion",
            Suite::Spectrum => "spectrum",
            Suite::Partition => "partition",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::INDIVIDUAL
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Character,
    BoltzmannTable,
    FusionTable,
    Spectrum,
    Partition,
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "character" => Target::Character,
            "boltzmann-table" => Target::BoltzmannTable,
            "fusion-table" => Target::FusionTable,
            "spectrum" => Target::Spectrum,
            "partition" => Target::Partition,
            _ => return Err(Error::UnknownTarget(s.to_string())),
        })
    }
}

/// Distance from `z` to the nearest point of `±1 + Λ`, `Λ = r(Z + τZ)`.
fn pole_distance(z: Complex64, r: f64, tau: Complex64) -> f64 {
    let mut best = f64::INFINITY;
    for s in [1.0, -1.0] {
        let w = (z - s) / r;
        let m = (w.im / tau.im).round();
        for dm in -1..=1 {
            let mm = m + dm as f64;
            let rest = w - tau * mm;
            let k = rest.re.round();
            best = best.min((rest - k).norm() * r);
        }
    }
    best
}

/// Seeded spectral points in `[0.1, 0.6] × [0, 0.2]i`, rejected when any
/// `z + shift` lies within `1e−3` of `±1 + Λ`.
pub fn random_spectral(rng: &mut ChaCha8Rng, r: i64, tau: Complex64, shifts: &[Complex64]) -> Complex64 {
    loop {
        let z = Complex64::new(rng.random_range(0.1..0.6), rng.random_range(0.0..0.2));
        let ok = std::iter::once(Complex64::new(0.0, 0.0))
            .chain(shifts.iter().copied())
            .all(|s| pole_distance(z + s, r as f64, tau) > 1e-3);
        if ok {
            return z;
        }
    }
}

/// Generic real dynamical variable with last coordinate 0: differences stay
/// away from `rZ` after shifts by up to two unit steps.
fn random_generic_point(rng: &mut ChaCha8Rng, n: usize, r: i64) -> Vec<Complex64> {
    let rf = r as f64;
    loop {
        let mut a: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.0..rf)).collect();
        a.push(0.0);
        let generic = (0..n).all(|i| {
            (0..n).all(|j| {
                i == j
                    || (-2..=2).all(|s| {
                        let d = a[i] - a[j] + s as f64;
                        (d - (d / rf).round() * rf).abs() > 0.05
                    })
            })
        });
        if generic {
            return a.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        }
    }
}

fn evaluate<T: Sync>(items: &[T], parallel: bool, f: impl Fn(usize, &T) -> Result<Case> + Sync) -> Result<Vec<Case>> {
    if parallel {
        items.par_iter().enumerate().map(|(i, x)| f(i, x)).collect()
    } else {
        items.iter().enumerate().map(|(i, x)| f(i, x)).collect()
    }
}

pub fn suite_theta(cfg: &RunConfig) -> Result<Vec<Case>> {
    let tau = cfg.tau;
    let params = cfg.params()?;
    let mut rng = cfg.rng(1);
    let zs: Vec<Complex64> = (0..50).map(|_| random_spectral(&mut rng, cfg.r, tau, &[])).collect();
    let mut cases = vec![Case::new("theta_zero", theta(Complex64::new(0.0, 0.0), tau)?.norm(), 1e-12)];
    let per_point = evaluate(&zs, cfg.parallel, |i, &z| {
        let t = theta(z, tau)?;
        let odd = (theta(-z, tau)? + t).norm();
        let (q1, q2) = quasi_periodicity_residuals(z, tau)?;
        let series = (theta_truncated(z, tau, 80) - t).norm();
        let worst = odd.max(q1).max(q2).max(series);
        Ok(Case::new(format!("theta[{i}]"), worst, 1e-12))
    })?;
    cases.extend(per_point);
    let h = 1e-5;
    let derivative = (params.bracket(Complex64::new(h, 0.0)) - params.bracket(Complex64::new(-h, 0.0))) / (2.0 * h);
    cases.push(Case::new("bracket_derivative", (derivative - 1.0).norm(), 1e-8));
    cases.push(Case::new(
        "bracket_zero_at_r",
        params.bracket(Complex64::new(cfg.r as f64, 0.0)).norm(),
        1e-12,
    ));
    cases.push(Case::new(
        "bracket_zero_at_r_tau",
        params.bracket(tau * cfg.r as f64).norm(),
        1e-12,
    ));
    Ok(cases)
}

pub fn suite_unitarity(cfg: &RunConfig) -> Result<Vec<Case>> {
    let params = cfg.params()?;
    let model = cfg.model()?;
    let mut rng = cfg.rng(2);
    let pts = model.points();
    let samples: Vec<(Complex64, Vec<Complex64>)> = (0..100)
        .map(|_| {
            let z = random_spectral(&mut rng, cfg.r, cfg.tau, &[]);
            (z, pts[rng.random_range(0..pts.len())].coords())
        })
        .collect();
    evaluate(&samples, cfg.parallel, |i, (z, a)| {
        Ok(Case::new(format!("unitarity[{i}]"), params.unitarity_residual(*z, a)?, 1e-9))
    })
}

fn default_base(n: usize) -> Option<Vec<Complex64>> {
    (n == 3).then(|| [0.29, 0.11, 0.0].map(|x| Complex64::new(x, 0.0)).to_vec())
}

pub fn suite_dybe(cfg: &RunConfig) -> Result<Vec<Case>> {
    let params = cfg.params()?;
    let mut rng = cfg.rng(3);
    let samples: Vec<_> = (0..20)
        .map(|_| {
            let z = random_spectral(&mut rng, cfg.r, cfg.tau, &[]);
            let w = random_spectral(&mut rng, cfg.r, cfg.tau, &[]);
            (z, w, random_generic_point(&mut rng, cfg.n, cfg.r))
        })
        .collect();
    let mut cases = evaluate(&samples, cfg.parallel, |i, (z, w, a)| {
        Ok(Case::new(format!("dybe[{i}]"), params.dynamical_ybe_residual(*z, *w, a)?, 1e-9))
    })?;
    if let Some(base) = cfg.base_b.clone().or_else(|| default_base(cfg.n)) {
        let gamma = cfg.gamma_override.unwrap_or(Complex64::new(1.0 / cfg.r as f64, 0.0));
        let sos = EllipticParams::new(cfg.n, cfg.tau, gamma)?;
        let samples: Vec<_> = (0..20)
            .map(|_| {
                let z = random_spectral(&mut rng, cfg.r, cfg.tau, &[]);
                let w = random_spectral(&mut rng, cfg.r, cfg.tau, &[]);
                let a: Vec<Complex64> = base
                    .iter()
                    .enumerate()
                    .map(|(i, b)| if i + 1 == cfg.n { *b } else { b + rng.random_range(-3..=3) as f64 })
                    .collect();
                (z, w, a)
            })
            .collect();
        cases.extend(evaluate(&samples, cfg.parallel, |i, (z, w, a)| {
            Ok(Case::new(format!("sos_dybe[{i}]"), sos.dynamical_ybe_residual(*z, *w, a)?, 1e-9))
        })?);
    }
    Ok(cases)
}

pub fn suite_star_triangle(cfg: &RunConfig) -> Result<Vec<Case>> {
    let model = cfg.model()?;
    let mut rng = cfg.rng(4);
    let samples: Vec<_> = (0..10)
        .map(|_| {
            let z = random_spectral(&mut rng, cfg.r, cfg.tau, &[]);
            let w = random_spectral(&mut rng, cfg.r, cfg.tau, &[]);
            (z, w)
        })
        .collect();
    evaluate(&samples, cfg.parallel, |i, (z, w)| {
        Ok(Case::new(format!("star_triangle[{i}]"), model.star_triangle_residual(*z, *w)?, 1e-9))
    })
}

pub fn suite_restriction(cfg: &RunConfig) -> Result<Vec<Case>> {
    let model = cfg.model()?;
    let mut rng = cfg.rng(5);
    let zs: Vec<Complex64> = (0..10).map(|_| random_spectral(&mut rng, cfg.r, cfg.tau, &[])).collect();
    evaluate(&zs, cfg.parallel, |i, &z| {
        let (worst, _) = model.restriction_residual(z)?;
        Ok(Case::new(format!("forbidden[{i}]"), worst, 1e-12))
    })
}

fn coords_label(a: &[i64]) -> String {
    crate::convolution::join(a)
}

pub fn suite_exactness(cfg: &RunConfig) -> Result<Vec<Case>> {
    let model = cfg.model()?;
    let tol = 1e-8;
    let mut cases: Vec<Case> = verify_exactness(&model)?
        .into_iter()
        .map(|c| {
            let name = format!("exact[{};{},{}]", coords_label(&c.a), c.i + 1, c.j + 1);
            let residual = c.containment_residual.max(c.basis_residual);
            let mut case = Case::new(name, residual, tol);
            case.passed = c.passed(tol);
            case
        })
        .collect();
    for a in model.points() {
        let err = model.params().residue_relative_error(&a.coords())?;
        let label = coords_label(a.integer_coords().unwrap_or(&[]));
        cases.push(Case::new(format!("residue[{label}]"), err, 1e-6));
    }
    Ok(cases)
}

pub fn suite_transfer_commute(cfg: &RunConfig) -> Result<Vec<Case>> {
    let model = cfg.model()?;
    let mut rng = cfg.rng(6);
    let rows: [&[f64]; 3] = [&[0.0, 0.3], &[0.0, 0.3, 0.7], &[0.0, 0.3, 0.7, 0.2]];
    let mut samples = Vec::new();
    for (row, us) in rows.iter().enumerate() {
        let shifts: Vec<Complex64> = us.iter().map(|&u| Complex64::new(u, 0.0)).collect();
        for _ in 0..5 {
            let z = random_spectral(&mut rng, cfg.r, cfg.tau, &shifts);
            let w = random_spectral(&mut rng, cfg.r, cfg.tau, &shifts);
            samples.push((row, shifts.clone(), z, w));
        }
    }
    evaluate(&samples, cfg.parallel, |i, (row, shifts, z, w)| {
        let l = LOperator::chain(shifts.iter().copied());
        let tz = transfer_matrix(&model, &l, *z)?;
        let tw = transfer_matrix(&model, &l, *w)?;
        let scale = crate::graded::max_abs(&tz.dense()).max(1.0) * crate::graded::max_abs(&tw.dense()).max(1.0);
        let residual = tz.commutator_residual(&tw)? / scale;
        Ok(Case::new(format!("commute[c={};{}]", row + 2, i % 5), residual, 1e-8))
    })
}

fn random_element(rng: &mut ChaCha8Rng, model: &Model) -> ConvolutionElement {
    let n = model.rank();
    let pts = model.points();
    let mut terms = Vec::new();
    for _ in 0..rng.random_range(1..=6) {
        let a = pts[rng.random_range(0..pts.len())].clone();
        let b = &pts[rng.random_range(0..pts.len())];
        let mut mu: Vec<i64> = (0..n)
            .map(|i| b.offset().coords()[i] - a.offset().coords()[i])
            .collect();
        // A random multiple of the central direction keeps the target fixed.
        let lift = rng.random_range(-1..=1);
        mu.iter_mut().for_each(|x| *x += lift);
        terms.push((Arrow::new(a, LatticeVector::new(mu)), rng.random_range(-3..=3)));
    }
    ConvolutionElement::from_terms(model.context().clone(), terms)
}

pub fn suite_characters(cfg: &RunConfig) -> Result<Vec<Case>> {
    let model = cfg.model()?;
    let (n, r) = (cfg.n, cfg.r);
    let v = model.vector_space();
    let ch_v = ConvolutionElement::character(&v);
    let vv = tensor_space(&v, &v)?;
    let vvv = tensor_space(&vv, &v)?;
    let ch_vv = ch_v.conv_mul(&ch_v)?;
    let lambda2 = exterior_character(2, n, r)?;
    let s2 = sym_square_character(n, r)?;
    let mut cases = vec![
        Case::exact("ch_tensor_vv", ConvolutionElement::character(&vv) == ch_vv),
        Case::exact("ch_tensor_vvv", ConvolutionElement::character(&vvv) == ch_vv.conv_mul(&ch_v)?),
        Case::exact("ch_v_is_exterior_1", ch_v == exterior_character(1, n, r)?),
        Case::exact("square_splits", ch_vv == lambda2.add(&s2)?),
        Case::exact("sym_square_numeric", numeric_sym_square_character(&model)? == s2),
    ];
    let ext: Vec<ConvolutionElement> = (0..=n).map(|k| exterior_character(k, n, r)).collect::<Result<_>>()?;
    for k in 1..n {
        for l in (k + 1)..n {
            let commute = ext[k].conv_mul(&ext[l])? == ext[l].conv_mul(&ext[k])?;
            cases.push(Case::exact(format!("exterior_commute[{k},{l}]"), commute));
        }
    }
    let mut rng = cfg.rng(7);
    let mut assoc = true;
    let mut anti = true;
    for _ in 0..100 {
        let x = random_element(&mut rng, &model);
        let y = random_element(&mut rng, &model);
        let z = random_element(&mut rng, &model);
        assoc &= x.conv_mul(&y)?.conv_mul(&z)? == x.conv_mul(&y.conv_mul(&z)?)?;
        anti &= x.conv_mul(&y)?.involution() == y.involution().conv_mul(&x.involution())?;
    }
    cases.push(Case::exact("associativity", assoc));
    cases.push(Case::exact("involution_antihomomorphism", anti));
    Ok(cases)
}

pub fn suite_fusion(cfg: &RunConfig) -> Result<Vec<Case>> {
    let r = cfg.r;
    let report = verify_fusion_rules(r)?;
    let mut cases = vec![Case::exact(format!("fusion_rules[r={r}]"), report.passed())];
    let top = r - 2;
    let mut symmetric = true;
    let mut coeff_assoc = true;
    for p in 0..=top {
        for q in 0..=top {
            for s in 0..=top {
                symmetric &= fusion_coeff(p, q, s, r)? == fusion_coeff(q, p, s, r)?;
                for v in 0..=top {
                    let mut lhs = 0;
                    let mut rhs = 0;
                    for t in 0..=top {
                        lhs += fusion_coeff(p, q, t, r)? * fusion_coeff(t, s, v, r)?;
                        rhs += fusion_coeff(q, s, t, r)? * fusion_coeff(p, t, v, r)?;
                    }
                    coeff_assoc &= lhs == rhs;
                }
            }
        }
    }
    cases.push(Case::exact("coefficients_symmetric", symmetric));
    cases.push(Case::exact("coefficients_associative", coeff_assoc));
    let ls: Vec<ConvolutionElement> = (0..=top).map(|p| sym_power_character_n2(p, r)).collect::<Result<_>>()?;
    let mut products = true;
    for x in &ls {
        for y in &ls {
            for z in &ls {
                products &= x.conv_mul(y)?.conv_mul(z)? == x.conv_mul(&y.conv_mul(z)?)?;
            }
        }
    }
    cases.push(Case::exact("products_associative", products));
    Ok(cases)
}

/// Eigenvalues of the `n = 2` path-adjacency matrix from a dense symmetric
/// eigensolver, sorted ascending.
pub fn dense_adjacency_spectrum(r: i64) -> Result<Vec<f64>> {
    let (pts, ch) = {
        let model = Model::rsos(2, r, Complex64::new(0.0, 1.0))?;
        (model.points().to_vec(), ConvolutionElement::character(&model.vector_space()))
    };
    let m = ch.to_difference_operator(&pts)?.to_complex_matrix().map(|x| x.re);
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

pub fn suite_spectrum(cfg: &RunConfig) -> Result<Vec<Case>> {
    let (n, r) = (cfg.n, cfg.r);
    let ks: Vec<usize> = (1..=n).collect();
    let reports = if cfg.parallel {
        ks.par_iter().map(|&k| verify_spectrum(k, n, r)).collect::<Result<Vec<_>>>()?
    } else {
        ks.iter().map(|&k| verify_spectrum(k, n, r)).collect::<Result<Vec<_>>>()?
    };
    let mut cases = Vec::new();
    for rep in reports {
        for row in &rep.rows {
            cases.push(Case::new(
                format!("eigen[k={};{}]", rep.k, coords_label(&row.lambda)),
                row.residual,
                1e-10,
            ));
        }
    }
    if n == 2 {
        let dense = dense_adjacency_spectrum(r)?;
        let mut closed: Vec<f64> = (1..r).map(|l| 2.0 * (PI * l as f64 / r as f64).cos()).collect();
        closed.sort_by(f64::total_cmp);
        let diff = dense.iter().zip(&closed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        cases.push(Case::new("dense_adjacency_spectrum", diff, 1e-10));
    }
    Ok(cases)
}

/// Evaluation points used for partition-function rows of width `c`.
pub fn partition_row(c: usize) -> LOperator {
    LOperator::chain((0..c).map(|k| Complex64::new(0.02 * k as f64, 0.0)))
}

pub fn suite_partition(cfg: &RunConfig) -> Result<Vec<Case>> {
    let model = cfg.model()?;
    let mut rng = cfg.rng(8);
    let mut samples = Vec::new();
    for c in 1..=12usize {
        for m in 1..=(12 / c) {
            let shifts: Vec<Complex64> = partition_row(c).eval_points().to_vec();
            samples.push((c, m, random_spectral(&mut rng, cfg.r, cfg.tau, &shifts)));
        }
    }
    let mut cases = evaluate(&samples, cfg.parallel, |_, &(c, m, z)| {
        let l = partition_row(c);
        let via = partition_via_transfer(&model, &l, z, m)?;
        let oracle = partition_enumerate(&model, &l, z, m)?;
        let rel = (via - oracle).norm() / oracle.norm().max(via.norm()).max(f64::MIN_POSITIVE);
        let rel = if via == oracle { 0.0 } else { rel };
        Ok(Case::new(format!("torus[{c}x{m}]"), rel, 1e-9))
    })?;
    for c in 1..=4usize {
        let l = partition_row(c);
        let count = partition_enumerate(&model, &l, Complex64::new(0.3, 0.0), 0)?;
        let states = row_states(&model, c).len() as f64;
        cases.push(Case::new(format!("states[c={c}]"), (count - states).norm(), 0.5));
    }
    Ok(cases)
}

pub fn run_verify(suite: Suite, cfg: &RunConfig) -> Result<Report> {
    let cases = match suite {
        Suite::Theta => suite_theta(cfg)?,
        Suite::Unitarity => suite_unitarity(cfg)?,
        Suite::Dybe => suite_dybe(cfg)?,
        Suite::StarTriangle => suite_star_triangle(cfg)?,
        Suite::Restriction => suite_restriction(cfg)?,
        Suite::Exactness => suite_exactness(cfg)?,
        Suite::TransferCommute => suite_transfer_commute(cfg)?,
        Suite::Characters => suite_characters(cfg)?,
        Suite::Fusion => suite_fusion(cfg)?,
        Suite::Spectrum => suite_spectrum(cfg)?,
        Suite::Partition => suite_partition(cfg)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::INDIVIDUAL {
                for mut c in run_verify(s, cfg)?.cases {
                    c.name = format!("{}/{}", s.name(), c.name);
                    all.push(c);
                }
            }
            all
        }
    };
    Ok(Report::new(suite.name(), cfg, cases))
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fusion_table_csv(r: i64) -> Result<String> {
    let mut out = String::from("p,q,s,N\n");
    for p in 0..=(r - 2) {
        for q in 0..=(r - 2) {
            for s in 0..=(r - 2) {
                out.push_str(&format!("{p},{q},{s},{}\n", fusion_coeff(p, q, s, r)?));
            }
        }
    }
    Ok(out)
}

pub fn spectrum_csv(k: usize, n: usize, r: i64) -> Result<String> {
    let rep = verify_spectrum(k, n, r)?;
    let mut out = String::from("lambda,eigenvalue_re,eigenvalue_im,residual\n");
    for row in rep.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            coords_label(&row.lambda),
            fmt(row.eigenvalue[0]),
            fmt(row.eigenvalue[1]),
            fmt(row.residual)
        ));
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct PartitionOutput {
    pub n: usize,
    pub r: i64,
    pub cols: usize,
    pub rows: usize,
    pub z: [f64; 2],
    pub value: [f64; 2],
    pub oracle_value: [f64; 2],
    pub rel_err: f64,
}

/// Produce the artifact text for a compute target.
pub fn run_compute(target: Target, cfg: &RunConfig, extra: &ComputeArgs) -> Result<String> {
    let json = |v: &serde_json::Value| -> Result<String> { Ok(serde_json::to_string_pretty(v)? + "\n") };
    match target {
        Target::Character => {
            let ch = match extra.k {
                Some(k) => exterior_character(k, cfg.n, cfg.r)?,
                None => ConvolutionElement::character(&cfg.model()?.vector_space()),
            };
            match cfg.format {
                Format::Csv => Ok(ch.to_csv()),
                Format::Json => json(&ch.to_json()),
            }
        }
        Target::BoltzmannTable => {
            let z = parse_complex(&extra.z)?;
            let csv = cfg.model()?.boltzmann_csv(z)?;
            match cfg.format {
                Format::Csv => Ok(csv),
                Format::Json => Err(Error::InvalidConfig("boltzmann-table is CSV only".into())),
            }
        }
        Target::FusionTable => match cfg.format {
            Format::Csv => fusion_table_csv(cfg.r),
            Format::Json => Err(Error::InvalidConfig("fusion-table is CSV only".into())),
        },
        Target::Spectrum => match cfg.format {
            Format::Csv => spectrum_csv(extra.k.unwrap_or(1), cfg.n, cfg.r),
            Format::Json => json(&serde_json::to_value(verify_spectrum(extra.k.unwrap_or(1), cfg.n, cfg.r)?)?),
        },
        Target::Partition => {
            let z = parse_complex(&extra.z)?;
            let l = match &extra.u {
                Some(u) => LOperator::chain(parse_complex_list(u)?),
                None => LOperator::chain(vec![Complex64::new(0.0, 0.0); extra.cols]),
            };
            if l.width() != extra.cols {
                return Err(Error::InvalidConfig(format!(
                    "{} evaluation points for {} columns",
                    l.width(),
                    extra.cols
                )));
            }
            let model = cfg.model()?;
            let value = partition_via_transfer(&model, &l, z, extra.rows)?;
            let oracle = partition_enumerate(&model, &l, z, extra.rows)?;
            let rel_err = if value == oracle {
                0.0
            } else {
                (value - oracle).norm() / oracle.norm().max(value.norm())
            };
            let out = PartitionOutput {
                n: cfg.n,
                r: cfg.r,
                cols: extra.cols,
                rows: extra.rows,
                z: pair(&z),
                value: pair(&value),
                oracle_value: pair(&oracle),
                rel_err,
            };
            json(&serde_json::to_value(out)?)
        }
    }
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Run the parsed command. Returns the process exit code: 0 on success, 1 when
/// a verification case fails.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify { suite, common } => {
            let suite: Suite = suite.parse()?;
            let cfg = RunConfig::from_args(&common)?;
            if cfg.format != Format::Json {
                return Err(Error::InvalidConfig("verification reports are JSON only".into()));
            }
            let report = run_verify(suite, &cfg)?;
            emit(&(serde_json::to_string_pretty(&report)? + "\n"), &cfg.output)?;
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Compute { target, common, extra } => {
            let target: Target = target.parse()?;
            let cfg = RunConfig::from_args(&common)?;
            emit(&run_compute(target, &cfg, &extra)?, &cfg.output)?;
            Ok(0)
        }
    }
}
