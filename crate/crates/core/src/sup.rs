//! Weighted supremum norms `sup |f(q)| e^{-alpha |q|^2 / 2}` and the
//! quantities derived from them: dilation distances, the little-space decay
//! profile and the derivative criterion.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockParams, GridInfo, NormReport, SliceValue};
use crate::quaternion::ImaginaryUnit;
use crate::series::SliceSeries;
use crate::slice::{split, SlicePair};
use crate::sphere::default_sphere;

pub const DEFAULT_SUP_RADIAL: usize = 64;
pub const DEFAULT_SUP_ANGULAR: usize = 128;
/// Candidates from the coarse grid that get local refinement.
const REFINE_CANDIDATES: usize = 3;
const REFINE_ROUNDS: usize = 3;
const GOLDEN_STEPS: usize = 48;
/// `M(rho)` at the last profile radius must fall below this for membership.
pub const LITTLE_SPACE_TOL: f64 = 1e-3;
/// Slack allowed in the split-sum inequality of the derivative criterion.
pub const DERIVATIVE_SLACK: f64 = 1e-9;

/// Discretization of `sup` over the ball: sampled units, Chebyshev-Lobatto
/// radii on `[0, R]` and equispaced angles.
#[derive(Debug, Clone, PartialEq)]
pub struct SupSampling {
    pub sphere: Vec<ImaginaryUnit>,
    pub radial: usize,
    pub angular: usize,
}

impl Default for SupSampling {
    fn default() -> Self {
        Self {
            sphere: default_sphere(),
            radial: DEFAULT_SUP_RADIAL,
            angular: DEFAULT_SUP_ANGULAR,
        }
    }
}

impl SupSampling {
    pub fn new(sphere: Vec<ImaginaryUnit>, radial: usize, angular: usize) -> Result<Self> {
        let s = Self {
            sphere,
            radial,
            angular,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if self.sphere.is_empty() {
            return Err(Error::InvalidParams("sphere sample is empty".into()));
        }
        if self.radial < 2 {
            return Err(Error::InvalidParams(format!(
                "need at least 2 radial samples, got {}",
                self.radial
            )));
        }
        if self.angular == 0 {
            return Err(Error::InvalidParams("need at least 1 angular sample".into()));
        }
        Ok(())
    }

    fn info(&self, radius: f64) -> GridInfo {
        GridInfo {
            kind: "chebyshev x trapezoid + golden-section".into(),
            radial: self.radial,
            angular: self.angular,
            radius,
            sphere: self.sphere.len(),
        }
    }
}

/// Chebyshev-Lobatto points on `[0, radius]`, both ends included.
fn lobatto_radii(radius: f64, count: usize) -> Vec<f64> {
    let m = (count - 1) as f64;
    (0..count)
        .map(|k| 0.5 * radius * (1.0 - (PI * k as f64 / m).cos()))
        .collect()
}

/// Maximizes `g` on `[a, b]`, endpoints included.
fn golden_max(g: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut best = (a, g(a));
    let fb = g(b);
    if fb > best.1 {
        best = (b, fb);
    }
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..GOLDEN_STEPS {
        if f1 > best.1 {
            best = (x1, f1);
        }
        if f2 > best.1 {
            best = (x2, f2);
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = g(x2);
        }
    }
    best
}

/// Maximum of `objective(z)` over the disk `|z| <= radius` in one slice: a
/// coarse polar scan followed by alternating golden-section refinement in
/// radius and angle around the best few cells.
pub fn maximize_on_disk(
    objective: impl Fn(Complex64) -> f64,
    radius: f64,
    radial: usize,
    angular: usize,
) -> f64 {
    let radii = lobatto_radii(radius, radial);
    let dtheta = 2.0 * PI / angular as f64;
    let mut scan: Vec<(f64, usize, usize)> = Vec::with_capacity(radial * angular);
    for (ri, &r) in radii.iter().enumerate() {
        for ai in 0..angular {
            let z = Complex64::from_polar(r, dtheta * ai as f64);
            scan.push((objective(z), ri, ai));
        }
    }
    // Stable ordering: by value, then by grid position.
    scan.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut best = scan.first().map(|s| s.0).unwrap_or(0.0);
    for &(_, ri, ai) in scan.iter().take(REFINE_CANDIDATES) {
        let r_lo = radii[ri.saturating_sub(1)];
        let r_hi = radii[(ri + 1).min(radial - 1)];
        let mut theta = dtheta * ai as f64;
        for _ in 0..REFINE_ROUNDS {
            let (r, v) = golden_max(&|s| objective(Complex64::from_polar(s, theta)), r_lo, r_hi);
            best = best.max(v);
            let (t_new, v) = golden_max(
                &|t| objective(Complex64::from_polar(r, t)),
                theta - dtheta,
                theta + dtheta,
            );
            theta = t_new;
            best = best.max(v);
        }
    }
    best
}

#[inline]
fn gaussian(alpha: f64, r2: f64) -> f64 {
    (-0.5 * alpha * r2).exp()
}

/// `||f||_{F_{inf,alpha,I}} = sup_{z in B_I} |Q_I[f](z)| e^{-alpha |z|^2 / 2}`.
pub fn slice_sup_norm(
    f: &SliceSeries,
    unit: ImaginaryUnit,
    params: &FockParams,
    radial: usize,
    angular: usize,
) -> Result<f64> {
    params.validate()?;
    if radial < 2 || angular == 0 {
        return Err(Error::InvalidParams(
            "sup sampling needs radial >= 2 and angular >= 1".into(),
        ));
    }
    let pair = SlicePair::new(f, unit);
    let alpha = params.alpha;
    Ok(maximize_on_disk(
        |z| pair.modulus(z) * gaussian(alpha, z.norm_sqr()),
        params.radius,
        radial,
        angular,
    ))
}

/// `||f||_{F_{inf,alpha}}`: the largest slice sup over the sampled units.
pub fn sup_norm(f: &SliceSeries, params: &FockParams, sampling: &SupSampling) -> Result<NormReport> {
    sampling.validate()?;
    params.validate()?;
    let per_slice: Vec<SliceValue> = sampling
        .sphere
        .par_iter()
        .map(|&unit| {
            slice_sup_norm(f, unit, params, sampling.radial, sampling.angular)
                .map(|value| SliceValue { unit, value })
        })
        .collect::<Result<_>>()?;
    Ok(NormReport::from_slices(per_slice, sampling.info(params.radius)))
}

/// `||f_r - f||_{F_{inf,alpha}}` for each `r` in a strictly increasing list in `(0, 1)`.
pub fn dilation_convergence(
    f: &SliceSeries,
    params: &FockParams,
    r_list: &[f64],
    sampling: &SupSampling,
) -> Result<Vec<f64>> {
    if r_list.is_empty() {
        return Err(Error::InvalidParams("r list is empty".into()));
    }
    if r_list.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParams("r list must be strictly increasing".into()));
    }
    if let Some(&r) = r_list.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::BadRadius(r));
    }
    r_list
        .iter()
        .map(|&r| {
            let diff = &f.dilate(r)? - f;
            sup_norm(&diff, params, sampling).map(|rep| rep.value)
        })
        .collect()
}

/// Weighted maximum modulus on circles of radius `rho`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LittleSpaceProfile {
    pub rho: Vec<f64>,
    pub values: Vec<f64>,
    /// Last three values are non-increasing.
    pub decreasing_tail: bool,
    /// Decreasing tail and final value below [`LITTLE_SPACE_TOL`].
    pub member: bool,
}

/// `M(rho) = max_{I, theta} |f(rho e^{I theta})| e^{-alpha rho^2 / 2}` for an
/// increasing list of radii in `(0, R)`.
pub fn little_space_profile(
    f: &SliceSeries,
    params: &FockParams,
    rho_list: &[f64],
    sampling: &SupSampling,
) -> Result<LittleSpaceProfile> {
    params.validate()?;
    sampling.validate()?;
    if rho_list.is_empty() {
        return Err(Error::InvalidParams("rho list is empty".into()));
    }
    if rho_list.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParams("rho list must be increasing".into()));
    }
    if let Some(&r) = rho_list.iter().find(|&&r| !(r > 0.0 && r < params.radius)) {
        return Err(Error::InvalidParams(format!(
            "rho = {r} is outside (0, {})",
            params.radius
        )));
    }
    let pairs: Vec<SlicePair> = sampling.sphere.iter().map(|&u| SlicePair::new(f, u)).collect();
    let dtheta = 2.0 * PI / sampling.angular as f64;
    let values: Vec<f64> = rho_list
        .iter()
        .map(|&rho| {
            let w = gaussian(params.alpha, rho * rho);
            pairs
                .iter()
                .flat_map(|pair| {
                    (0..sampling.angular)
                        .map(move |a| pair.modulus(Complex64::from_polar(rho, dtheta * a as f64)))
                })
                .fold(0.0, f64::max)
                * w
        })
        .collect();
    let tail = &values[values.len().saturating_sub(3)..];
    let decreasing_tail = tail.windows(2).all(|w| w[1] <= w[0]);
    let member = decreasing_tail && *values.last().expect("nonempty") < LITTLE_SPACE_TOL;
    Ok(LittleSpaceProfile {
        rho: rho_list.to_vec(),
        values,
        decreasing_tail,
        member,
    })
}

/// Sups of `|d^t g(z)| / (1 + |z|)^t e^{-alpha |z|^2 / 2}` for `f` and for
/// its two split components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    pub t: usize,
    pub unit: ImaginaryUnit,
    pub partner: ImaginaryUnit,
    pub sup_f: f64,
    pub sup_first: f64,
    pub sup_second: f64,
    /// `sup_f <= sup_first + sup_second + DERIVATIVE_SLACK`.
    pub holds: bool,
}

/// Derivative criterion on the ball, with the split components taken on
/// the slice of `i` and the partner `j`.
pub fn derivative_criterion(
    f: &SliceSeries,
    t: usize,
    params: &FockParams,
    sampling: &SupSampling,
) -> Result<DerivativeReport> {
    params.validate()?;
    sampling.validate()?;
    let df = f.derivative(t);
    let alpha = params.alpha;
    let weight = move |z: Complex64| {
        let r = z.norm();
        gaussian(alpha, r * r) / (1.0 + r).powi(t as i32)
    };
    let sup_f = sampling
        .sphere
        .par_iter()
        .map(|&u| {
            let pair = SlicePair::new(&df, u);
            maximize_on_disk(
                |z| pair.modulus(z) * weight(z),
                params.radius,
                sampling.radial,
                sampling.angular,
            )
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max);

    let unit = ImaginaryUnit::I;
    let partner = unit.orthonormal_partner();
    let (first, second) = split(f, unit, partner)?;
    let (d1, d2) = (first.derivative(t), second.derivative(t));
    let component_sup = |p: &crate::slice::ComplexSlicePolynomial| {
        maximize_on_disk(
            |z| p.eval(z).norm() * weight(z),
            params.radius,
            sampling.radial,
            sampling.angular,
        )
    };
    let sup_first = component_sup(&d1);
    let sup_second = component_sup(&d2);
    Ok(DerivativeReport {
        t,
        unit,
        partner,
        sup_f,
        sup_first,
        sup_second,
        holds: sup_f <= sup_first + sup_second + DERIVATIVE_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::Quaternion;

    fn small_sampling() -> SupSampling {
        SupSampling::new(crate::sphere::sphere_with_axes(8), 32, 64).unwrap()
    }

    #[test]
    fn constant_sup_is_modulus() {
        let c = Quaternion::new(0.3, -0.4, 1.2, 0.0);
        let r = sup_norm(&SliceSeries::constant(c), &FockParams::default(), &small_sampling()).unwrap();
        assert!((r.value - c.norm()).abs() < 1e-15);
    }

    #[test]
    fn identity_sup_at_boundary() {
        let f = SliceSeries::monomial(1, Quaternion::ONE);
        let r = sup_norm(&f, &FockParams::default(), &small_sampling()).unwrap();
        assert!((r.value - (-0.5f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn identity_sup_interior_for_large_alpha() {
        let f = SliceSeries::monomial(1, Quaternion::ONE);
        let params = FockParams::default().with_alpha(4.0);
        let r = sup_norm(&f, &params, &small_sampling()).unwrap();
        assert!((r.value - 0.5 * (-0.5f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, v) = golden_max(&|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0);
        assert!((x - 0.3).abs() < 1e-8);
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn lobatto_radii_include_endpoints() {
        let r = lobatto_radii(2.0, 5);
        assert_eq!(r[0], 0.0);
        assert!((r[4] - 2.0).abs() < 1e-15);
        assert!(r.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn slice_sup_of_one_is_one() {
        let f = SliceSeries::constant(Quaternion::ONE);
        let v = slice_sup_norm(&f, ImaginaryUnit::J, &FockParams::default(), 16, 16).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn dilation_of_constant_is_exact() {
        let f = SliceSeries::constant(Quaternion::new(0.5, 0.5, 0.5, 0.5));
        let d = dilation_convergence(&f, &FockParams::default(), &[0.5, 0.9], &small_sampling()).unwrap();
        assert_eq!(d, vec![0.0, 0.0]);
    }

    #[test]
    fn dilation_of_identity_is_linear_in_one_minus_r() {
        let f = SliceSeries::monomial(1, Quaternion::ONE);
        let rs = [0.5, 0.9, 0.99];
        let d = dilation_convergence(&f, &FockParams::default(), &rs, &small_sampling()).unwrap();
        for (r, v) in rs.iter().zip(d) {
            assert!((v - (1.0 - r) * (-0.5f64).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn dilation_list_is_validated() {
        let f = SliceSeries::constant(Quaternion::ONE);
        let s = small_sampling();
        let p = FockParams::default();
        assert!(dilation_convergence(&f, &p, &[], &s).is_err());
        assert!(dilation_convergence(&f, &p, &[0.5, 0.5], &s).is_err());
        assert!(matches!(
            dilation_convergence(&f, &p, &[0.5, 1.0], &s),
            Err(Error::BadRadius(_))
        ));
    }

    #[test]
    fn little_space_examples() {
        let one = SliceSeries::constant(Quaternion::ONE);
        let s = small_sampling();

        let params = FockParams::default().with_alpha(20.0).with_radius(3.0);
        let rho = [0.5, 1.0, 1.5, 2.0, 2.5, 2.9];
        let p = little_space_profile(&one, &params, &rho, &s).unwrap();
        for (r, v) in rho.iter().zip(&p.values) {
            assert!((v - (-10.0 * r * r).exp()).abs() < 1e-15);
        }
        assert!(p.decreasing_tail && p.member);

        let rho = [0.25, 0.5, 0.75, 0.999];
        let p = little_space_profile(&one, &FockParams::default(), &rho, &s).unwrap();
        assert!(p.decreasing_tail);
        assert!(!p.member);
        assert!((p.values[3] - (-0.5f64 * 0.999 * 0.999).exp()).abs() < 1e-15);

        let zero = SliceSeries::constant(Quaternion::ZERO);
        let p = little_space_profile(&zero, &FockParams::default(), &rho, &s).unwrap();
        assert!(p.values.iter().all(|&v| v == 0.0));
        assert!(p.member);
    }

    #[test]
    fn little_space_radii_must_lie_inside() {
        let one = SliceSeries::constant(Quaternion::ONE);
        let s = small_sampling();
        assert!(little_space_profile(&one, &FockParams::default(), &[0.5, 1.0], &s).is_err());
        assert!(little_space_profile(&one, &FockParams::default(), &[0.6, 0.5], &s).is_err());
    }

    #[test]
    fn derivative_criterion_t0_is_sup_norm() {
        let f = SliceSeries::new(vec![
            Quaternion::new(0.2, -0.1, 0.4, 0.3),
            Quaternion::new(-0.5, 0.3, 0.1, -0.6),
            Quaternion::new(0.7, 0.2, -0.3, 0.1),
        ]);
        let s = small_sampling();
        let rep = derivative_criterion(&f, 0, &FockParams::default(), &s).unwrap();
        let sup = sup_norm(&f, &FockParams::default(), &s).unwrap();
        assert!((rep.sup_f - sup.value).abs() <= 4.0 * f64::EPSILON * sup.value);
        assert!(rep.holds);
    }

    #[test]
    fn derivative_criterion_of_square() {
        // sup over [0,1] of 2r/(1+r) e^{-r^2/2}: stationary where r^3 + r^2 = 1.
        let mut r = 0.75f64;
        for _ in 0..60 {
            r -= (r * r * r + r * r - 1.0) / (3.0 * r * r + 2.0 * r);
        }
        let expected = 2.0 * r / (1.0 + r) * (-0.5 * r * r).exp();
        let f = SliceSeries::monomial(2, Quaternion::ONE);
        let rep = derivative_criterion(&f, 1, &FockParams::default(), &small_sampling()).unwrap();
        assert!((rep.sup_f - expected).abs() < 1e-12, "{} vs {expected}", rep.sup_f);
        assert!((rep.sup_first - expected).abs() < 1e-12);
        assert_eq!(rep.sup_second, 0.0);
        assert!(rep.holds);
    }
}
