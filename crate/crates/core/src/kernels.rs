//! The slice-regular exponential kernel `e_*^{alpha q conj(w)}`, its
//! normalized form and atomic synthesis `sum_k w_{z_k}(q) a_k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::series::SliceSeries;

/// Kernel value with a bound on the dropped tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: Quaternion,
    pub tail_bound: f64,
}

/// `x^{N+1} / (N+1)! e^x`, the Lagrange bound on the exponential tail.
pub fn exp_tail_bound(x: f64, degree: usize) -> f64 {
    let log = (degree as f64 + 1.0) * x.ln() - ln_factorial(degree + 1) + x;
    if x == 0.0 {
        0.0
    } else {
        log.exp()
    }
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Coefficients `alpha^n conj(w)^n / n!`, `n = 0..=degree`.
fn kernel_coeffs(w: Quaternion, alpha: f64, degree: usize) -> Vec<Quaternion> {
    let step = w.conj() * alpha;
    let mut coeffs = Vec::with_capacity(degree + 1);
    let mut c = Quaternion::ONE;
    coeffs.push(c);
    for n in 1..=degree {
        c = c * step / n as f64;
        coeffs.push(c);
    }
    coeffs
}

/// The kernel `B_alpha(., w)` truncated at degree `N`, as a series in `q`.
pub fn kernel_series(w: Quaternion, alpha: f64, degree: usize) -> SliceSeries {
    SliceSeries::new(kernel_coeffs(w, alpha, degree))
}

/// `sum_{n=0}^{N} q^n alpha^n conj(w)^n / n!`.
pub fn star_exp_eval(q: Quaternion, w: Quaternion, alpha: f64, degree: usize) -> KernelValue {
    KernelValue {
        value: kernel_series(w, alpha, degree).eval(q),
        tail_bound: exp_tail_bound(alpha * q.norm() * w.norm(), degree),
    }
}

/// `w_{z_k}(q) = e_*^{alpha q conj(z_k)} e^{-alpha |z_k|^2 / 2}`.
pub fn normalized_kernel_eval(point: Quaternion, q: Quaternion, alpha: f64, degree: usize) -> KernelValue {
    let k = star_exp_eval(q, point, alpha, degree);
    let scale = (-0.5 * alpha * point.norm_sqr()).exp();
    KernelValue {
        value: k.value * scale,
        tail_bound: k.tail_bound * scale,
    }
}

/// Points `z_k`, coefficients `a_k` and truncation degree for a synthesis.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicData {
    pub points: Vec<Quaternion>,
    pub coeffs: Vec<Quaternion>,
    pub alpha: f64,
    pub trunc_degree: usize,
}

impl AtomicData {
    pub fn new(points: Vec<Quaternion>, coeffs: Vec<Quaternion>, alpha: f64, trunc_degree: usize) -> Result<Self> {
        if points.len() != coeffs.len() {
            return Err(Error::InvalidParams(format!(
                "{} points but {} coefficients",
                points.len(),
                coeffs.len()
            )));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParams(format!("alpha must be positive, got {alpha}")));
        }
        Ok(Self {
            points,
            coeffs,
            alpha,
            trunc_degree,
        })
    }
}

/// A synthesized function and a bound on `sup_{|q| <= R} |f - f_N|` for the
/// radius the bound was requested at.
#[derive(Debug, Clone, PartialEq)]
pub struct Synthesis {
    pub series: SliceSeries,
    pub tail_bound: f64,
}

fn on_slice(q: Quaternion, unit: ImaginaryUnit) -> bool {
    let im = q.im();
    let along = unit.to_quaternion() * im.dot(unit.to_quaternion());
    (im - along).norm() <= 1e-10
}

/// `sum_k w_{z_k}(q) a_k` as a degree-`N` series. Coefficient `n` is
/// `sum_k alpha^n conj(z_k)^n e^{-alpha |z_k|^2 / 2} a_k / n!`, reduced in point order.
pub fn atomic_synthesis(data: &AtomicData, unit: ImaginaryUnit) -> Result<SliceSeries> {
    if let Some(index) = data.points.iter().position(|&z| !on_slice(z, unit)) {
        return Err(Error::PointOffSlice { index });
    }
    let mut coeffs = vec![Quaternion::ZERO; data.trunc_degree + 1];
    for (&z, &a) in data.points.iter().zip(&data.coeffs) {
        let scale = (-0.5 * data.alpha * z.norm_sqr()).exp();
        for (c, k) in coeffs
            .iter_mut()
            .zip(kernel_coeffs(z, data.alpha, data.trunc_degree))
        {
            *c += k * scale * a;
        }
    }
    Ok(SliceSeries::new(coeffs))
}

/// [`atomic_synthesis`] together with the truncation tail bound on `|q| <= radius`.
pub fn atomic_synthesis_with_bound(data: &AtomicData, unit: ImaginaryUnit, radius: f64) -> Result<Synthesis> {
    let series = atomic_synthesis(data, unit)?;
    let tail_bound = data
        .points
        .iter()
        .zip(&data.coeffs)
        .map(|(z, a)| {
            let scale = (-0.5 * data.alpha * z.norm_sqr()).exp();
            exp_tail_bound(data.alpha * radius * z.norm(), data.trunc_degree) * scale * a.norm()
        })
        .sum();
    Ok(Synthesis { series, tail_bound })
}

/// Square lattice `{spacing (m + n I)} ∩ {|z| <= radius}` on `C_I`, ordered by
/// modulus, then by angle in `[0, 2 pi)`.
pub fn lattice_points(spacing: f64, unit: ImaginaryUnit, radius: f64) -> Result<Vec<Quaternion>> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::InvalidParams(format!("spacing must be positive, got {spacing}")));
    }
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParams(format!("radius must be nonnegative, got {radius}")));
    }
    let reach = (radius / spacing).floor() as i64;
    let mut cells: Vec<(i64, f64, i64, i64)> = Vec::new();
    for m in -reach..=reach {
        for n in -reach..=reach {
            let (x, y) = (spacing * m as f64, spacing * n as f64);
            if x * x + y * y <= radius * radius {
                let angle = (n as f64).atan2(m as f64).rem_euclid(std::f64::consts::TAU);
                cells.push((m * m + n * n, angle, m, n));
            }
        }
    }
    cells.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(cells
        .into_iter()
        .map(|(_, _, m, n)| unit.point(spacing * m as f64, spacing * n as f64))
        .collect())
}
