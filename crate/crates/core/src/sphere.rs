//! Deterministic point sets on the sphere `S` of imaginary units.

use std::f64::consts::PI;

use crate::quaternion::ImaginaryUnit;

/// Number of Fibonacci points used when no count is given.
pub const DEFAULT_SPHERE_COUNT: usize = 64;

/// Fibonacci lattice with `count` points. `count == 1` returns `[i]`.
///
/// Point `k` sits at height `1 - (2k + 1) / count` along the `k` axis and
/// azimuth `k` times the golden angle. The set is not antipodally symmetric
/// in general.
pub fn sphere_sample(count: usize) -> Vec<ImaginaryUnit> {
    assert!(count >= 1, "sphere sample needs at least one point");
    if count == 1 {
        return vec![ImaginaryUnit::I];
    }
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    let n = count as f64;
    (0..count)
        .map(|k| {
            let h = 1.0 - (2.0 * k as f64 + 1.0) / n;
            let r = (1.0 - h * h).max(0.0).sqrt();
            let phi = golden_angle * k as f64;
            ImaginaryUnit::new(r * phi.cos(), r * phi.sin(), h).expect("lattice point is nonzero")
        })
        .collect()
}

/// The canonical units `i, j, k` followed by a Fibonacci lattice of `count` points.
pub fn sphere_with_axes(count: usize) -> Vec<ImaginaryUnit> {
    let mut units = vec![ImaginaryUnit::I, ImaginaryUnit::J, ImaginaryUnit::K];
    if count > 0 {
        units.extend(sphere_sample(count));
    }
    units
}

/// `i, j, k` plus the default 64-point lattice.
pub fn default_sphere() -> Vec<ImaginaryUnit> {
    sphere_with_axes(DEFAULT_SPHERE_COUNT)
}
