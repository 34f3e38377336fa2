#![allow(dead_code)]

use proptest::prelude::*;
use slice_fock::{ImaginaryUnit, Quaternion, SliceSeries};

pub fn quaternion() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-1.0f64..1.0).prop_map(|[w, x, y, z]| Quaternion::new(w, x, y, z))
}

pub fn unit() -> impl Strategy<Value = ImaginaryUnit> {
    prop::array::uniform3(-1.0f64..1.0)
        .prop_filter("away from zero", |v| v.iter().map(|c| c * c).sum::<f64>() > 1e-3)
        .prop_map(|[x, y, z]| ImaginaryUnit::new(x, y, z).unwrap())
}

/// A point of the open unit ball.
pub fn ball_point() -> impl Strategy<Value = Quaternion> {
    quaternion()
        .prop_filter("inside the ball", |q| q.norm_sqr() < 1.0)
}

pub fn series(max_degree: usize) -> impl Strategy<Value = SliceSeries> {
    prop::collection::vec(quaternion(), 1..=max_degree + 1).prop_map(SliceSeries::new)
}

/// Lower incomplete gamma `int_0^x t^{s-1} e^{-t} dt` by its power series
/// `x^s e^{-x} sum_n x^n / (s (s+1) ... (s+n))`.
pub fn lower_gamma(s: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut term = 1.0 / s;
    let mut sum = term;
    let mut n = 1.0;
    while term > sum * 1e-18 {
        term *= x / (s + n);
        sum += term;
        n += 1.0;
    }
    (s * x.ln() - x).exp() * sum
}

/// `int_{|z| <= R} |z|^{2k} e^{-alpha |z|^2} dx dy = pi gamma(k+1, alpha R^2) / alpha^{k+1}`.
pub fn gaussian_moment(k: f64, alpha: f64, radius: f64) -> f64 {
    std::f64::consts::PI * lower_gamma(k + 1.0, alpha * radius * radius) / alpha.powf(k + 1.0)
}

/// `||c q^k||` for the norm `((alpha/pi) int |f|^p e^{-alpha p |z|^2/2} dxdy/pi)^{1/p}`.
pub fn monomial_norm(k: usize, c: f64, alpha: f64, p: f64, radius: f64) -> f64 {
    // Substituting t = |z|^2 gives pi int_0^{R^2} t^{kp/2} e^{-alpha p t / 2} dt.
    let s = k as f64 * p / 2.0 + 1.0;
    let rate = alpha * p / 2.0;
    let integral = std::f64::consts::PI * lower_gamma(s, rate * radius * radius) / rate.powf(s);
    let pi = std::f64::consts::PI;
    c.abs() * (alpha / pi / pi * integral).powf(1.0 / p)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

pub fn quat_rel_err(a: Quaternion, b: Quaternion) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}
