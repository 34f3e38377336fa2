//! Numerical certification of the norm inequalities between slice norms and
//! full Fock norms, and of the coefficient bound for single monomials.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{fock_norm_p, FockParams};
use crate::multi::{MultiMonomial, MultiPolynomial};
use crate::quadrature::QuadratureGrid;
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::series::SliceSeries;
use crate::sup::{slice_sup_norm, sup_norm, SupSampling};

/// Slack on every ratio bound.
pub const RATIO_SLACK: f64 = 1e-9;

/// Worst ratios measured by [`norm_equivalence_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub p: f64,
    /// `||f||^p`, the largest slice value.
    pub fock_pow: f64,
    /// Smallest and largest `||f||^p / ||f||_I^p`; both lie in `[1, 2^p]`.
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Largest `||f||_J^p / ||f||_I^p` over all sampled pairs.
    pub max_pair_ratio: f64,
    pub sandwich_bound: f64,
    pub pair_bound: f64,
    pub slices: usize,
    pub degenerate: bool,
}

fn require_p_above_one(p: f64) -> Result<()> {
    if !p.is_finite() {
        return Err(Error::InvalidParams("the p-norm check needs finite p".into()));
    }
    if p <= 1.0 {
        return Err(Error::RequiresPAboveOne(p));
    }
    Ok(())
}

/// Checks `||f||_I^p <= ||f||^p <= 2^p ||f||_I^p` for every sampled `I` and
/// `||f||_J^p <= 2^{max(p,1)} ||f||_I^p` for every sampled pair.
pub fn norm_equivalence_check(
    f: &SliceSeries,
    params: &FockParams,
    grid: &QuadratureGrid,
    sphere: &[ImaginaryUnit],
) -> Result<EquivalenceReport> {
    let p = params.p;
    require_p_above_one(p)?;
    let report = fock_norm_p(f, params, grid, sphere)?;
    let pows: Vec<f64> = report.per_slice.iter().map(|s| s.value.powf(p)).collect();
    let fock_pow = report.value.powf(p);
    let sandwich_bound = 2f64.powf(p);
    let pair_bound = 2f64.powf(p.max(1.0));

    if fock_pow == 0.0 {
        return Ok(EquivalenceReport {
            p,
            fock_pow,
            min_ratio: 1.0,
            max_ratio: 1.0,
            max_pair_ratio: 1.0,
            sandwich_bound,
            pair_bound,
            slices: pows.len(),
            degenerate: true,
        });
    }

    let ratio = |num: f64, den: f64| if den > 0.0 { num / den } else { f64::INFINITY };
    let (mut min_ratio, mut max_ratio) = (f64::INFINITY, 0.0f64);
    for (s, &v) in report.per_slice.iter().zip(&pows) {
        let r = ratio(fock_pow, v);
        if r < 1.0 - RATIO_SLACK || r > sandwich_bound + RATIO_SLACK {
            return Err(Error::ViolationDetected {
                check: "slice sandwich",
                unit_i: s.unit,
                unit_j: None,
                ratio: r,
                bound: sandwich_bound,
            });
        }
        min_ratio = min_ratio.min(r);
        max_ratio = max_ratio.max(r);
    }

    let mut max_pair_ratio = 0.0f64;
    for (si, &vi) in report.per_slice.iter().zip(&pows) {
        for (sj, &vj) in report.per_slice.iter().zip(&pows) {
            let r = ratio(vj, vi);
            if r > pair_bound + RATIO_SLACK {
                return Err(Error::ViolationDetected {
                    check: "slice transfer",
                    unit_i: si.unit,
                    unit_j: Some(sj.unit),
                    ratio: r,
                    bound: pair_bound,
                });
            }
            max_pair_ratio = max_pair_ratio.max(r);
        }
    }

    Ok(EquivalenceReport {
        p,
        fock_pow,
        min_ratio,
        max_ratio,
        max_pair_ratio,
        sandwich_bound,
        pair_bound,
        slices: pows.len(),
        degenerate: false,
    })
}

/// Worst ratios for `||f||_{inf,I} <= ||f||_inf <= 2 ||f||_{inf,I}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupEquivalenceReport {
    pub sup: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub degenerate: bool,
}

pub fn sup_equivalence_check(
    f: &SliceSeries,
    params: &FockParams,
    sampling: &SupSampling,
) -> Result<SupEquivalenceReport> {
    let report = sup_norm(f, params, sampling)?;
    if report.value == 0.0 {
        return Ok(SupEquivalenceReport {
            sup: 0.0,
            min_ratio: 1.0,
            max_ratio: 1.0,
            degenerate: true,
        });
    }
    let (mut min_ratio, mut max_ratio) = (f64::INFINITY, 0.0f64);
    for s in &report.per_slice {
        let r = if s.value > 0.0 { report.value / s.value } else { f64::INFINITY };
        if r < 1.0 - RATIO_SLACK || r > 2.0 + RATIO_SLACK {
            return Err(Error::ViolationDetected {
                check: "sup sandwich",
                unit_i: s.unit,
                unit_j: None,
                ratio: r,
                bound: 2.0,
            });
        }
        min_ratio = min_ratio.min(r);
        max_ratio = max_ratio.max(r);
    }
    Ok(SupEquivalenceReport {
        sup: report.value,
        min_ratio,
        max_ratio,
        degenerate: false,
    })
}

/// Both sides of `||a_m z^m||_inf <= 2^{max(p,1)} prod_k sqrt(m_k/2) sup_{B_I} |f| e^{-alpha|z|^2/2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialBound {
    pub multi_index: Vec<u32>,
    pub lhs: f64,
    pub rhs: f64,
    pub factor: f64,
    /// Some `m_k = 0` makes the product vanish; such terms are skipped.
    pub vacuous: bool,
    pub pass: bool,
}

/// Closed-form `sup_{sum |z_k|^2 <= R^2} |a| prod |z_k|^{m_k} e^{-alpha |z|^2 / 2}`.
///
/// The unconstrained maximizer is `|z_k|^2 = m_k / alpha`; when that leaves
/// the ball the maximum sits on the sphere at `|z_k|^2 = R^2 m_k / |m|`.
pub fn monomial_sup(mono: &MultiMonomial, alpha: f64, radius: f64) -> f64 {
    let total: f64 = mono.multi_index.iter().map(|&m| m as f64).sum();
    if total == 0.0 {
        return mono.coeff.norm();
    }
    let scale = if total / alpha <= radius * radius {
        1.0 / alpha
    } else {
        radius * radius / total
    };
    let log: f64 = mono
        .multi_index
        .iter()
        .filter(|&&m| m > 0)
        .map(|&m| {
            let r2 = m as f64 * scale;
            0.5 * m as f64 * r2.ln() - 0.5 * alpha * r2
        })
        .sum();
    mono.coeff.norm() * log.exp()
}

/// Sampled `sup_{z in B_I^n} |f(z)| e^{-alpha |z|^2 / 2}` for several variables.
/// Grid sizes shrink with the dimension to keep the scan near 2e6 points; the
/// best grid points are then refined by compass search inside the ball.
pub fn multi_slice_sup(
    f: &MultiPolynomial,
    unit: ImaginaryUnit,
    params: &FockParams,
    radial: usize,
    angular: usize,
) -> Result<f64> {
    const SEEDS: usize = 8;
    let n = f.dim();
    let budget = 2.0e6f64.powf(1.0 / n as f64);
    let shrink = (budget / (radial * angular) as f64).sqrt().min(1.0);
    let nr = ((radial as f64 * shrink) as usize).max(2);
    let na = ((angular as f64 * shrink) as usize).max(1);
    let radii: Vec<f64> = (0..nr)
        .map(|k| params.radius * k as f64 / (nr - 1) as f64)
        .collect();
    let angles: Vec<Complex64> = (0..na)
        .map(|a| Complex64::from_polar(1.0, 2.0 * PI * a as f64 / na as f64))
        .collect();
    let weighted = |z: &[Complex64]| -> Result<f64> {
        let r2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        let q: Vec<Quaternion> = z.iter().map(|c| unit.point(c.re, c.im)).collect();
        Ok(f.eval_slice(unit, &q)?.norm() * (-0.5 * params.alpha * r2).exp())
    };

    // Keep the SEEDS largest grid values, best first.
    let mut seeds: Vec<(f64, Vec<Complex64>)> = Vec::with_capacity(SEEDS + 1);
    let mut ri = vec![0usize; n];
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    loop {
        let r2: f64 = ri.iter().map(|&i| radii[i] * radii[i]).sum();
        if r2 <= params.radius * params.radius * (1.0 + 1e-12) {
            let mut ai = vec![0usize; n];
            loop {
                for k in 0..n {
                    z[k] = angles[ai[k]] * radii[ri[k]];
                }
                let v = weighted(&z)?;
                if seeds.len() < SEEDS || v > seeds[seeds.len() - 1].0 {
                    let at = seeds.partition_point(|s| s.0 >= v);
                    seeds.insert(at, (v, z.clone()));
                    seeds.truncate(SEEDS);
                }
                if !advance(&mut ai, na) {
                    break;
                }
            }
        }
        if !advance(&mut ri, nr) {
            break;
        }
    }

    let step = params.radius / (nr - 1) as f64;
    let mut best = seeds.first().map_or(0.0, |s| s.0);
    for (v, z) in seeds {
        best = best.max(compass_search(&weighted, z, v, step, params.radius)?);
    }
    Ok(best)
}

/// Maximizes `g` over the real coordinates of `z` from a starting value `v`,
/// halving the step when no coordinate move improves and projecting radially
/// back into the ball of radius `radius`.
fn compass_search(
    g: &impl Fn(&[Complex64]) -> Result<f64>,
    mut z: Vec<Complex64>,
    mut v: f64,
    mut step: f64,
    radius: f64,
) -> Result<f64> {
    let project = |z: &mut [Complex64]| {
        let r = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if r > radius {
            z.iter_mut().for_each(|c| *c *= radius / r);
        }
    };
    while step > 1e-10 * radius.max(1.0) {
        let mut moved = false;
        for k in 0..2 * z.len() {
            for sign in [1.0, -1.0] {
                let mut trial = z.clone();
                let delta = if k % 2 == 0 {
                    Complex64::new(sign * step, 0.0)
                } else {
                    Complex64::new(0.0, sign * step)
                };
                trial[k / 2] += delta;
                project(&mut trial);
                let t = g(&trial)?;
                if t > v {
                    z = trial;
                    v = t;
                    moved = true;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    Ok(v)
}

fn advance(index: &mut [usize], base: usize) -> bool {
    for d in index.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Checks the coefficient bound for one term of `f` on the slice `C_I`.
pub fn monomial_bound_check(
    mono: &MultiMonomial,
    f: &MultiPolynomial,
    params: &FockParams,
    unit: ImaginaryUnit,
    sampling: &SupSampling,
) -> Result<MonomialBound> {
    params.validate()?;
    require_p_above_one(params.p)?;
    if mono.dim() != f.dim() {
        return Err(Error::InvalidParams(format!(
            "monomial has {} indices, polynomial has {} variables",
            mono.dim(),
            f.dim()
        )));
    }
    if !f.terms().iter().any(|t| t == mono) {
        return Err(Error::InvalidParams(format!(
            "monomial {:?} is not a term of the polynomial",
            mono.multi_index
        )));
    }
    let product: f64 = mono
        .multi_index
        .iter()
        .map(|&m| (m as f64 / 2.0).sqrt())
        .product();
    let factor = 2f64.powf(params.p.max(1.0)) * product;
    if mono.multi_index.iter().any(|&m| m == 0) {
        return Ok(MonomialBound {
            multi_index: mono.multi_index.clone(),
            lhs: monomial_sup(mono, params.alpha, params.radius),
            rhs: 0.0,
            factor: 0.0,
            vacuous: true,
            pass: true,
        });
    }

    let (lhs, sup_f) = if f.dim() == 1 {
        let n = mono.multi_index[0] as usize;
        let single = SupSampling {
            sphere: vec![unit],
            ..sampling.clone()
        };
        let lhs = sup_norm(&SliceSeries::monomial(n, mono.coeff), params, &single)?.value;
        let series = SliceSeries::new(
            {
                let degree = f.terms().iter().map(|t| t.multi_index[0] as usize).max().unwrap_or(0);
                let mut c = vec![Quaternion::ZERO; degree + 1];
                for t in f.terms() {
                    c[t.multi_index[0] as usize] += t.coeff;
                }
                c
            },
        );
        let sup_f = slice_sup_norm(&series, unit, params, sampling.radial, sampling.angular)?;
        (lhs, sup_f)
    } else {
        (
            monomial_sup(mono, params.alpha, params.radius),
            multi_slice_sup(f, unit, params, sampling.radial, sampling.angular)?,
        )
    };
    let rhs = factor * sup_f;
    Ok(MonomialBound {
        multi_index: mono.multi_index.clone(),
        lhs,
        rhs,
        factor,
        vacuous: false,
        pass: lhs <= rhs + RATIO_SLACK,
    })
}
