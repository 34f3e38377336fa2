//! Gaussian-weighted `L^p` norms and the inner product on slice disks.
//!
//! For a slice `C_I` and `0 < p < inf` the slice norm is
//!
//! ```text
//! ||f||_{alpha,I,p} = ( (alpha/pi)^n  int_{|z| <= R} |f(z) e^{-alpha |z|^2 / 2}|^p dA_I(z) )^{1/p}
//! ```
//!
//! with `dA_I = dx dy / pi`. The Fock norm takes the supremum over `I in S`,
//! approximated by the maximum over a finite sample of units.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{refine, rel_diff, GridSpec, QuadratureGrid, Refined};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::series::SliceSeries;
use crate::slice::SlicePair;

/// Parameters of a weighted norm. `p = inf` selects the sup-norm family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockParams {
    pub alpha: f64,
    pub p: f64,
    pub n: usize,
    pub radius: f64,
}

impl Default for FockParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            p: 2.0,
            n: 1,
            radius: 1.0,
        }
    }
}

impl FockParams {
    pub fn new(alpha: f64, p: f64, n: usize, radius: f64) -> Result<Self> {
        let params = Self { alpha, p, n, radius };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if !(self.p > 0.0) {
            return Err(Error::InvalidParams(format!(
                "p must be positive or inf, got {}",
                self.p
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidParams("dimension n must be positive".into()));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "radius must be positive, got {}",
                self.radius
            )));
        }
        Ok(())
    }

    pub fn with_p(self, p: f64) -> Self {
        Self { p, ..self }
    }

    pub fn with_radius(self, radius: f64) -> Self {
        Self { radius, ..self }
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        Self { alpha, ..self }
    }

    fn require_single_variable(&self) -> Result<()> {
        self.validate()?;
        if self.n != 1 {
            return Err(Error::InvalidParams(format!(
                "one-variable series need n = 1, got n = {}",
                self.n
            )));
        }
        Ok(())
    }

    fn require_finite_p(&self) -> Result<()> {
        if !self.p.is_finite() {
            return Err(Error::InvalidParams(
                "integral norms need finite p; use the sup norm for p = inf".into(),
            ));
        }
        Ok(())
    }

    /// `(alpha/pi)^n / pi^n`: the Gaussian prefactor times the `1/pi` of `dA_I`.
    fn measure_prefactor(&self) -> f64 {
        (self.alpha / PI / PI).powi(self.n as i32)
    }
}

/// Value on one slice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceValue {
    pub unit: ImaginaryUnit,
    pub value: f64,
}

/// How a reported value was discretized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub kind: String,
    pub radial: usize,
    pub angular: usize,
    pub radius: f64,
    pub sphere: usize,
}

/// Result of a norm computation over a sample of slices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub value: f64,
    pub per_slice: Vec<SliceValue>,
    pub grid: GridInfo,
    pub tail_bound: f64,
}

impl NormReport {
    pub(crate) fn from_slices(per_slice: Vec<SliceValue>, grid: GridInfo) -> Self {
        let value = per_slice.iter().map(|s| s.value).fold(0.0, f64::max);
        Self {
            value,
            per_slice,
            grid,
            tail_bound: 0.0,
        }
    }

    pub fn with_tail_bound(mut self, tail_bound: f64) -> Self {
        self.tail_bound = tail_bound;
        self
    }
}

/// `int |f|^p e^{-alpha p |z|^2 / 2} dx dy` on one grid.
fn raw_p_integral(pair: &SlicePair, alpha: f64, p: f64, grid: &QuadratureGrid) -> f64 {
    let angles = grid.angles();
    let dtheta = 2.0 * PI / grid.angular_count() as f64;
    let pow = modulus_power(p);
    let mut total = 0.0;
    for &(r, w) in grid.radial_nodes() {
        let mut ring = 0.0;
        for e in &angles {
            let z = e * r;
            let a = pair.first.eval(z);
            let b = pair.second.eval(z);
            ring += pow(a.norm_sqr() + b.norm_sqr());
        }
        total += ring * w * r * dtheta * (-0.5 * alpha * p * r * r).exp();
    }
    total
}

/// `m2 -> m2^{p/2}`, avoiding `powf` for integer `p`.
fn modulus_power(p: f64) -> Box<dyn Fn(f64) -> f64> {
    if p.fract() == 0.0 && p <= 64.0 {
        let k = p as i32;
        if k % 2 == 0 {
            Box::new(move |m2: f64| m2.powi(k / 2))
        } else {
            Box::new(move |m2: f64| m2.powi(k / 2) * m2.sqrt())
        }
    } else {
        let half_p = 0.5 * p;
        Box::new(move |m2: f64| m2.powf(half_p))
    }
}

/// Slice norm with the refinement trace.
pub fn slice_norm_p_refined(
    f: &SliceSeries,
    unit: ImaginaryUnit,
    params: &FockParams,
    grid: &QuadratureGrid,
) -> Result<Refined<f64>> {
    params.require_single_variable()?;
    params.require_finite_p()?;
    let grid = matched_grid(grid, params.radius)?;
    let pair = SlicePair::new(f, unit);
    let pre = params.measure_prefactor();
    refine(
        &grid,
        |g| (pre * raw_p_integral(&pair, params.alpha, params.p, g)).powf(1.0 / params.p),
        |a, b| rel_diff(*a, *b),
    )
}

/// `||f||_{F^p_{alpha,I}}` on the slice `C_I`.
pub fn slice_norm_p(
    f: &SliceSeries,
    unit: ImaginaryUnit,
    params: &FockParams,
    grid: &QuadratureGrid,
) -> Result<f64> {
    slice_norm_p_refined(f, unit, params, grid).map(|r| r.value)
}

/// The quadrature grid must cover the disk of the requested radius.
fn matched_grid(grid: &QuadratureGrid, radius: f64) -> Result<QuadratureGrid> {
    if grid.radius() == radius {
        Ok(grid.clone())
    } else {
        QuadratureGrid::new(grid.radial_nodes().len(), grid.angular_count(), radius)
    }
}

/// `||f||_{F^p_alpha}`: the largest slice norm over `sphere`.
pub fn fock_norm_p(
    f: &SliceSeries,
    params: &FockParams,
    grid: &QuadratureGrid,
    sphere: &[ImaginaryUnit],
) -> Result<NormReport> {
    if sphere.is_empty() {
        return Err(Error::InvalidParams("sphere sample is empty".into()));
    }
    let results: Vec<(SliceValue, GridSpec)> = sphere
        .par_iter()
        .map(|&unit| {
            slice_norm_p_refined(f, unit, params, grid)
                .map(|r| (SliceValue { unit, value: r.value }, r.grid))
        })
        .collect::<Result<_>>()?;
    let finest = results
        .iter()
        .map(|r| r.1)
        .max_by_key(|g| g.radial)
        .expect("sphere is nonempty");
    let per_slice = results.into_iter().map(|r| r.0).collect();
    Ok(NormReport::from_slices(
        per_slice,
        GridInfo {
            kind: "gauss-legendre x trapezoid".into(),
            radial: finest.radial,
            angular: finest.angular,
            radius: finest.radius,
            sphere: sphere.len(),
        },
    ))
}

#[derive(Debug, Clone, Copy, Default)]
struct Weighted {
    value: Quaternion,
    magnitude: f64,
}

impl std::ops::Add for Weighted {
    type Output = Weighted;
    fn add(self, o: Weighted) -> Weighted {
        Weighted {
            value: self.value + o.value,
            magnitude: self.magnitude + o.magnitude,
        }
    }
}

impl std::ops::Mul<f64> for Weighted {
    type Output = Weighted;
    fn mul(self, s: f64) -> Weighted {
        Weighted {
            value: self.value * s,
            magnitude: self.magnitude * s,
        }
    }
}

/// `<f, g>_alpha = int_{B_I} f(z) conj(g(z)) d lambda_{alpha,I}(z)`, computed
/// exactly as written; no sesquilinearity convention is imposed.
pub fn inner_product(
    f: &SliceSeries,
    g: &SliceSeries,
    unit: ImaginaryUnit,
    params: &FockParams,
    grid: &QuadratureGrid,
) -> Result<Quaternion> {
    params.require_single_variable()?;
    let grid = matched_grid(grid, params.radius)?;
    let pre = params.measure_prefactor();
    let alpha = params.alpha;
    let refined = refine(
        &grid,
        |gr| {
            let acc: Weighted = gr.integrate(|z: Complex64| {
                let q = unit.point(z.re, z.im);
                let (fv, gv) = (f.eval(q), g.eval(q));
                let weight = (-alpha * z.norm_sqr()).exp();
                Weighted {
                    value: fv * gv.conj() * weight,
                    magnitude: fv.norm() * gv.norm() * weight,
                }
            });
            acc * pre
        },
        |a, b| {
            let scale = a.magnitude.max(b.magnitude);
            if scale < 1e-300 {
                0.0
            } else {
                (a.value - b.value).norm() / scale
            }
        },
    )?;
    Ok(refined.value.value)
}
