//! Seeded randomized certification of the algebraic identities and norm
//! inequalities. Each proposition runs over a reproducible random corpus and
//! reports its worst residual or ratio against a fixed threshold.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::checks::{monomial_bound_check, norm_equivalence_check, sup_equivalence_check, RATIO_SLACK};
use crate::error::{Error, Result};
use crate::fock::FockParams;
use crate::multi::MultiPolynomial;
use crate::quadrature::QuadratureGrid;
use crate::quaternion::{decompose, ImaginaryUnit, Quaternion};
use crate::series::SliceSeries;
use crate::slice::{extend, split};
use crate::sphere::default_sphere;
use crate::sup::{derivative_criterion, dilation_convergence, SupSampling, DERIVATIVE_SLACK};

pub const DEFAULT_CORPUS_SIZE: usize = 200;
pub const DEFAULT_MAX_DEGREE: usize = 12;

pub const STAR_TOL: f64 = 1e-10;
pub const SPLIT_TOL: f64 = 1e-14;
pub const REP_TOL: f64 = 1e-11;
/// Pointwise transfer bound `|f(x+yJ)| <= |f(x+yI)| + |f(x-yI)|`, relative slack.
pub const TRANSFER_SLACK: f64 = 1e-12;
/// Random points per corpus function in the pointwise propositions.
const POINTS_PER_FUNCTION: usize = 10;
/// Corpus functions used by the derivative criterion.
const DERIVATIVE_FUNCTIONS: usize = 50;
const DILATION_RADII: [f64; 3] = [0.5, 0.9, 0.99];

/// Uniform in `[-1, 1]^4`.
pub fn random_quaternion<R: Rng>(rng: &mut R) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(-1.0..=1.0),
    )
}

/// Uniform on the sphere of imaginary units, by rejection from the cube.
pub fn random_unit<R: Rng>(rng: &mut R) -> ImaginaryUnit {
    loop {
        let (x, y, z): (f64, f64, f64) = (
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        );
        let n2 = x * x + y * y + z * z;
        if n2 > 1e-4 && n2 <= 1.0 {
            return ImaginaryUnit::new(x, y, z).expect("nonzero");
        }
    }
}

/// Uniform in the open ball `|q| < radius`, by rejection.
pub fn random_in_ball<R: Rng>(rng: &mut R, radius: f64) -> Quaternion {
    loop {
        let q = random_quaternion(rng);
        if q.norm_sqr() < 1.0 {
            return q * radius;
        }
    }
}

/// A series of degree `0..=max_degree` with coefficients uniform in `[-1, 1]^4`.
pub fn random_series<R: Rng>(rng: &mut R, max_degree: usize) -> SliceSeries {
    let degree = rng.gen_range(0..=max_degree);
    SliceSeries::new((0..=degree).map(|_| random_quaternion(rng)).collect())
}

/// A pair `(I, J)` of orthogonal units: a random `I` and a random direction
/// in its orthogonal plane.
pub fn random_orthogonal_pair<R: Rng>(rng: &mut R) -> (ImaginaryUnit, ImaginaryUnit) {
    let i = random_unit(rng);
    let a = i.orthonormal_partner();
    let b = i.to_quaternion() * a.to_quaternion();
    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let (s, c) = t.sin_cos();
    let j = ImaginaryUnit::new(c * a.x() + s * b.x, c * a.y() + s * b.y, c * a.z() + s * b.z).expect("unit");
    (i, j)
}

/// Deterministic generator for one (proposition, instance) cell, independent
/// of evaluation order.
pub fn instance_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(index) << 20);
    rng
}

/// The seeded corpus of random polynomials.
pub fn corpus(seed: u64, size: usize, max_degree: usize) -> Vec<SliceSeries> {
    (0..size)
        .map(|k| random_series(&mut instance_rng(seed, 0, k as u64), max_degree))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

/// Outcome of one proposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionResult {
    pub name: &'static str,
    pub instances: usize,
    /// What `worst` measures.
    pub metric: &'static str,
    pub worst: f64,
    pub threshold: f64,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for PropositionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<22} {:>6}  {:<28} {:>12.4e}  (threshold {:.3e})  {}",
            self.name, self.instances, self.metric, self.worst, self.threshold, self.status
        )?;
        if !self.detail.is_empty() {
            write!(f, "  {}", self.detail)?;
        }
        Ok(())
    }
}

/// Settings for a verification run.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    pub corpus_size: usize,
    pub max_degree: usize,
    pub params: FockParams,
    pub grid: QuadratureGrid,
    pub sup: SupSampling,
    pub sphere: Vec<ImaginaryUnit>,
}

impl VerifyConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            corpus_size: DEFAULT_CORPUS_SIZE,
            max_degree: DEFAULT_MAX_DEGREE,
            params: FockParams::default(),
            grid: QuadratureGrid::with_defaults(1.0).expect("default grid"),
            sup: SupSampling::default(),
            sphere: default_sphere(),
        }
    }
}

/// A named proposition with a short selection key.
#[derive(Debug, Clone, Copy)]
pub struct Proposition {
    pub name: &'static str,
    pub key: &'static str,
    stream: u64,
    run: fn(&VerifyConfig, &[SliceSeries], u64) -> PropositionResult,
}

/// All propositions, sorted by name.
pub const PROPOSITIONS: [Proposition; 9] = [
    Proposition { name: "derivative-criterion", key: "derivative", stream: 1, run: run_derivative },
    Proposition { name: "dilation", key: "dilation", stream: 2, run: run_dilation },
    Proposition { name: "fock-inf-sandwich", key: "fock-inf", stream: 3, run: run_sup_sandwich },
    Proposition { name: "fock-p-sandwich", key: "fock-p", stream: 4, run: run_p_sandwich },
    Proposition { name: "monomial-bound", key: "monomial", stream: 5, run: run_monomial },
    Proposition { name: "representation", key: "rep", stream: 6, run: run_representation },
    Proposition { name: "slice-transfer", key: "transfer", stream: 7, run: run_transfer },
    Proposition { name: "splitting", key: "split", stream: 8, run: run_splitting },
    Proposition { name: "star-product", key: "star", stream: 9, run: run_star },
];

/// Resolves a selection list of names or keys. `None` selects everything.
pub fn select(props: Option<&[String]>) -> Result<Vec<Proposition>> {
    let Some(wanted) = props else {
        return Ok(PROPOSITIONS.to_vec());
    };
    for w in wanted {
        if !PROPOSITIONS.iter().any(|p| p.name == w || p.key == w) {
            let known: Vec<_> = PROPOSITIONS.iter().map(|p| p.key).collect();
            return Err(Error::InvalidParams(format!(
                "unknown proposition '{w}' (known: {})",
                known.join(", ")
            )));
        }
    }
    Ok(PROPOSITIONS
        .iter()
        .filter(|p| wanted.iter().any(|w| p.name == w || p.key == w))
        .copied()
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub corpus_size: usize,
    pub max_degree: usize,
    pub results: Vec<PropositionResult>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Pass)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "seed {}  corpus {} polynomials, degree <= {}",
            self.seed, self.corpus_size, self.max_degree
        )?;
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

pub fn run(config: &VerifyConfig, props: &[Proposition]) -> VerifyReport {
    let funcs = corpus(config.seed, config.corpus_size, config.max_degree);
    let results = props
        .iter()
        .map(|p| (p.run)(config, &funcs, p.stream))
        .collect();
    VerifyReport {
        seed: config.seed,
        corpus_size: config.corpus_size,
        max_degree: config.max_degree,
        results,
    }
}

/// Maps each corpus entry to `Ok(value)` in parallel and folds the worst
/// value in corpus order; the first error becomes the failure detail.
fn worst_of<F>(funcs: &[SliceSeries], measure: F) -> (f64, usize, Option<String>)
where
    F: Fn(usize, &SliceSeries) -> Result<(f64, usize)> + Sync,
{
    let out: Vec<Result<(f64, usize)>> = funcs
        .par_iter()
        .enumerate()
        .map(|(k, f)| measure(k, f))
        .collect();
    let mut worst = 0.0f64;
    let mut count = 0;
    for (k, r) in out.into_iter().enumerate() {
        match r {
            Ok((v, n)) => {
                worst = if v.is_nan() { f64::NAN } else { worst.max(v) };
                count += n;
            }
            Err(e) => return (worst, count, Some(format!("instance {k}: {e}"))),
        }
    }
    (worst, count, None)
}

fn finish(
    name: &'static str,
    metric: &'static str,
    threshold: f64,
    (worst, instances, error): (f64, usize, Option<String>),
    within: impl Fn(f64) -> bool,
) -> PropositionResult {
    let (status, detail) = match error {
        Some(e) => (Status::Fail, e),
        None if within(worst) => (Status::Pass, String::new()),
        None => (Status::Fail, String::new()),
    };
    PropositionResult {
        name,
        instances,
        metric,
        worst,
        threshold,
        status,
        detail,
    }
}

fn skip(name: &'static str, metric: &'static str, reason: String) -> PropositionResult {
    PropositionResult {
        name,
        instances: 0,
        metric,
        worst: f64::NAN,
        threshold: f64::NAN,
        status: Status::Skip,
        detail: reason,
    }
}

fn rel_residual(a: Quaternion, b: Quaternion) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale < 1e-300 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// `f*g(q) = f(q) g(f(q)^{-1} q f(q))` where `f(q) != 0`, and `f*g(q) = 0`
/// where `f(q) = 0`.
fn run_star(config: &VerifyConfig, funcs: &[SliceSeries], stream: u64) -> PropositionResult {
    let radius = config.params.radius;
    let res = worst_of(funcs, |k, f| {
        let mut rng = instance_rng(config.seed, stream, k as u64);
        let g = random_series(&mut rng, config.max_degree);
        let fg = f.star_mul(&g);
        let mut worst = 0.0f64;
        let mut n = 0;
        for _ in 0..POINTS_PER_FUNCTION {
            let q = random_in_ball(&mut rng, radius);
            if f.eval(q).norm() > 1e-6 {
                let rhs = f.eval(q) * g.eval(f.transform_point(q)?);
                worst = worst.max(rel_residual(fg.eval(q), rhs));
                n += 1;
            }
        }
        // Zero rule: shift f so that it vanishes at a random point.
        let q0 = random_in_ball(&mut rng, radius);
        let shifted = f - &SliceSeries::constant(f.eval(q0));
        worst = worst.max(shifted.star_mul(&g).eval(q0).norm());
        Ok((worst, n + 1))
    });
    finish("star-product", "max residual", STAR_TOL, res, |w| w <= STAR_TOL)
}

fn run_splitting(config: &VerifyConfig, funcs: &[SliceSeries], stream: u64) -> PropositionResult {
    let res = worst_of(funcs, |k, f| {
        let mut rng = instance_rng(config.seed, stream, k as u64);
        let (i, j) = random_orthogonal_pair(&mut rng);
        let (a, b) = split(f, i, j)?;
        let back = extend(&a, &b, j)?;
        Ok((back.max_coeff_diff(f), 1))
    });
    finish("splitting", "max coefficient error", SPLIT_TOL, res, |w| w <= SPLIT_TOL)
}

fn run_representation(config: &VerifyConfig, funcs: &[SliceSeries], stream: u64) -> PropositionResult {
    let radius = config.params.radius;
    let res = worst_of(funcs, |k, f| {
        let mut rng = instance_rng(config.seed, stream, k as u64);
        let mut worst = 0.0f64;
        for _ in 0..POINTS_PER_FUNCTION {
            let unit = random_unit(&mut rng);
            let q = random_in_ball(&mut rng, radius);
            worst = worst.max((f.rep_eval(unit, q) - f.eval(q)).norm());
        }
        Ok((worst, POINTS_PER_FUNCTION))
    });
    finish("representation", "max |rep_eval - eval|", REP_TOL, res, |w| w <= REP_TOL)
}

/// `|f(x + yJ)| <= |f(x + yI)| + |f(x - yI)|`.
fn run_transfer(config: &VerifyConfig, funcs: &[SliceSeries], stream: u64) -> PropositionResult {
    let radius = config.params.radius;
    let res = worst_of(funcs, |k, f| {
        let mut rng = instance_rng(config.seed, stream, k as u64);
        let mut worst = 0.0f64;
        for _ in 0..POINTS_PER_FUNCTION {
            let unit = random_unit(&mut rng);
            let q = random_in_ball(&mut rng, radius);
            let s = decompose(q);
            let lhs = f.eval(q).norm();
            let rhs = f.eval(unit.point(s.re, s.im)).norm() + f.eval(unit.point(s.re, -s.im)).norm();
            let ratio = if rhs > 0.0 { lhs / rhs } else if lhs == 0.0 { 0.0 } else { f64::INFINITY };
            worst = worst.max(ratio);
        }
        Ok((worst, POINTS_PER_FUNCTION))
    });
    let bound = 1.0 + TRANSFER_SLACK;
    finish("slice-transfer", "max lhs/rhs", bound, res, |w| w <= bound)
}

fn run_p_sandwich(config: &VerifyConfig, funcs: &[SliceSeries], _stream: u64) -> PropositionResult {
    let p = config.params.p;
    if !(p.is_finite() && p > 1.0) {
        return skip("fock-p-sandwich", "max ||f||^p/||f||_I^p", format!("requires finite p > 1, got p = {p}"));
    }
    let bound = 2f64.powf(p);
    let res = worst_of(funcs, |_, f| {
        let r = norm_equivalence_check(f, &config.params, &config.grid, &config.sphere)?;
        Ok((r.max_ratio.max(r.max_pair_ratio), 1))
    });
    finish("fock-p-sandwich", "max ||f||^p/||f||_I^p", bound, res, |w| w <= bound + RATIO_SLACK)
}

fn run_sup_sandwich(config: &VerifyConfig, funcs: &[SliceSeries], _stream: u64) -> PropositionResult {
    let res = worst_of(funcs, |_, f| {
        let r = sup_equivalence_check(f, &config.params, &config.sup)?;
        Ok((r.max_ratio, 1))
    });
    finish("fock-inf-sandwich", "max ||f||_inf/||f||_inf,I", 2.0, res, |w| w <= 2.0 + RATIO_SLACK)
}

fn run_monomial(config: &VerifyConfig, funcs: &[SliceSeries], _stream: u64) -> PropositionResult {
    let p = config.params.p;
    if !(p.is_finite() && p > 1.0) {
        return skip("monomial-bound", "max lhs/rhs", format!("requires finite p > 1, got p = {p}"));
    }
    let res = worst_of(funcs, |_, f| {
        let poly = MultiPolynomial::from(f);
        let mut worst = 0.0f64;
        let mut n = 0;
        for term in poly.terms() {
            let b = monomial_bound_check(term, &poly, &config.params, ImaginaryUnit::I, &config.sup)?;
            if b.vacuous {
                continue;
            }
            n += 1;
            if b.rhs > 0.0 {
                worst = worst.max(b.lhs / b.rhs);
            } else if b.lhs > 0.0 {
                worst = f64::INFINITY;
            }
        }
        Ok((worst, n))
    });
    let bound = 1.0 + RATIO_SLACK;
    finish("monomial-bound", "max lhs/rhs", bound, res, |w| w <= bound)
}

/// `||f_r - f||_inf` strictly decreasing along `r = 0.5, 0.9, 0.99`.
fn run_dilation(config: &VerifyConfig, funcs: &[SliceSeries], _stream: u64) -> PropositionResult {
    let res = worst_of(funcs, |_, f| {
        let d = dilation_convergence(f, &config.params, &DILATION_RADII, &config.sup)?;
        if d[0] == 0.0 {
            // Constants are fixed by dilation.
            return Ok((0.0, 1));
        }
        let worst = d.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
        Ok((worst, 1))
    });
    finish("dilation", "max successive ratio", 1.0, res, |w| w < 1.0)
}

/// `sup_f <= sup_f1 + sup_f2` for the weighted `t`-th derivatives.
fn run_derivative(config: &VerifyConfig, funcs: &[SliceSeries], _stream: u64) -> PropositionResult {
    let take = funcs.len().min(DERIVATIVE_FUNCTIONS);
    let res = worst_of(&funcs[..take], |_, f| {
        let mut worst = f64::NEG_INFINITY;
        for t in 1..=3 {
            let r = derivative_criterion(f, t, &config.params, &config.sup)?;
            worst = worst.max(r.sup_f - (r.sup_first + r.sup_second));
        }
        Ok((worst, 3))
    });
    finish("derivative-criterion", "max sup_f - (sup_1 + sup_2)", DERIVATIVE_SLACK, res, |w| {
        w <= DERIVATIVE_SLACK
    })
}
