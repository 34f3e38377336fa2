//! Polar quadrature on a slice disk: Gauss-Legendre in the radius times the
//! trapezoid rule in the angle.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_RADIAL: usize = 64;
pub const DEFAULT_ANGULAR: usize = 128;
pub const MAX_RADIAL: usize = 512;
pub const MAX_ANGULAR: usize = 1024;

/// Successive refinements agreeing to this relative tolerance stop the loop.
pub const REFINE_TOL: f64 = 1e-8;
/// Disagreement above this at the refinement cap is reported as an error.
pub const COARSE_TOL: f64 = 1e-6;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// three-term recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Radial Gauss-Legendre nodes on `[0, R]` and `angular_count` equispaced
/// angles on `[0, 2 pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    radial_nodes: Vec<(f64, f64)>,
    angular_count: usize,
    radius: f64,
}

/// Summary of a grid for reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radial: usize,
    pub angular: usize,
    pub radius: f64,
}

impl QuadratureGrid {
    pub fn new(radial: usize, angular: usize, radius: f64) -> Result<Self> {
        if radial == 0 || angular == 0 {
            return Err(Error::InvalidParams(
                "quadrature grid needs at least one radial and one angular node".into(),
            ));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "quadrature radius must be positive, got {radius}"
            )));
        }
        let half = 0.5 * radius;
        let radial_nodes = gauss_legendre(radial)
            .into_iter()
            .map(|(x, w)| (half * (x + 1.0), half * w))
            .collect();
        Ok(Self {
            radial_nodes,
            angular_count: angular,
            radius,
        })
    }

    pub fn with_defaults(radius: f64) -> Result<Self> {
        Self::new(DEFAULT_RADIAL, DEFAULT_ANGULAR, radius)
    }

    pub fn radial_nodes(&self) -> &[(f64, f64)] {
        &self.radial_nodes
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            radial: self.radial_nodes.len(),
            angular: self.angular_count,
            radius: self.radius,
        }
    }

    /// Same radius, both node counts doubled.
    pub fn doubled(&self) -> QuadratureGrid {
        QuadratureGrid::new(
            self.radial_nodes.len() * 2,
            self.angular_count * 2,
            self.radius,
        )
        .expect("doubling a valid grid stays valid")
    }

    pub fn at_cap(&self) -> bool {
        self.radial_nodes.len() * 2 > MAX_RADIAL || self.angular_count * 2 > MAX_ANGULAR
    }

    /// Unit complex numbers `e^{i theta_j}` of the angular rule.
    pub fn angles(&self) -> Vec<Complex64> {
        let step = 2.0 * PI / self.angular_count as f64;
        (0..self.angular_count)
            .map(|j| Complex64::from_polar(1.0, step * j as f64))
            .collect()
    }

    /// `sum_{nodes} w g(z)` approximating `int_{|z| <= R} g(z) dx dy`.
    /// Radial nodes are summed in order, angles innermost.
    pub fn integrate<T, G>(&self, mut g: G) -> T
    where
        T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        G: FnMut(Complex64) -> T,
    {
        let angles = self.angles();
        let dtheta = 2.0 * PI / self.angular_count as f64;
        let mut total = T::default();
        for &(r, w) in &self.radial_nodes {
            let mut ring = T::default();
            for e in &angles {
                ring = ring + g(e * r);
            }
            total = total + ring * (w * r * dtheta);
        }
        total
    }

    /// Total weight, `pi R^2` up to rounding.
    pub fn area(&self) -> f64 {
        self.integrate(|_| 1.0)
    }
}

/// Result of an auto-refined quadrature.
#[derive(Debug, Clone)]
pub struct Refined<T> {
    pub value: T,
    pub grid: GridSpec,
    pub trace: Vec<(GridSpec, f64)>,
}

/// Evaluates `compute` on `grid`, then on doubled grids until two successive
/// values agree to [`REFINE_TOL`] relative (per `distance`), or the node cap
/// is reached. At the cap a disagreement above [`COARSE_TOL`] is an error.
pub fn refine<T, C, D>(grid: &QuadratureGrid, mut compute: C, distance: D) -> Result<Refined<T>>
where
    C: FnMut(&QuadratureGrid) -> T,
    D: Fn(&T, &T) -> f64,
{
    let mut current = grid.clone();
    let mut previous = compute(&current);
    let mut trace = vec![(current.spec(), f64::NAN)];
    loop {
        if current.at_cap() {
            let last = trace.last().map(|t| t.1).unwrap_or(f64::NAN);
            if last.is_nan() || last <= COARSE_TOL {
                return Ok(Refined {
                    value: previous,
                    grid: current.spec(),
                    trace,
                });
            }
            return Err(Error::GridTooCoarse {
                trace: format_trace(&trace),
            });
        }
        let finer = current.doubled();
        let next = compute(&finer);
        let diff = distance(&previous, &next);
        trace.push((finer.spec(), diff));
        current = finer;
        previous = next;
        if diff <= REFINE_TOL {
            return Ok(Refined {
                value: previous,
                grid: current.spec(),
                trace,
            });
        }
    }
}

fn format_trace(trace: &[(GridSpec, f64)]) -> String {
    trace
        .iter()
        .map(|(g, d)| format!("{}x{}: rel diff {:e}", g.radial, g.angular, d))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Relative distance between two nonnegative reals; zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-300 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
