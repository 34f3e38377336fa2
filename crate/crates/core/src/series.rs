//! Truncated slice-regular power series `f(q) = sum_n q^n a_n` with
//! quaternionic coefficients on the right, and the star-product algebra.

use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::quaternion::{decompose, ImaginaryUnit, Quaternion};

/// Below this modulus the symmetrization is treated as vanishing.
pub const SINGULAR_FLOOR: f64 = 1e-12;
/// Below this modulus `f(q)` is treated as zero in [`SliceSeries::transform_point`].
pub const ZERO_VALUE_FLOOR: f64 = 1e-12;

/// A polynomial `sum_{n=0}^{N} q^n a_n`, left slice-regular in `q`.
///
/// `nominal_radius` records the ball the series is meant to live on. It does
/// not restrict evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceSeries {
    coeffs: Vec<Quaternion>,
    nominal_radius: f64,
}

impl SliceSeries {
    /// An empty coefficient list is read as the zero function `[0]`.
    pub fn new(coeffs: Vec<Quaternion>) -> Self {
        let coeffs = if coeffs.is_empty() {
            vec![Quaternion::ZERO]
        } else {
            coeffs
        };
        Self {
            coeffs,
            nominal_radius: 1.0,
        }
    }

    pub fn with_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidParams(format!(
                "nominal radius must be positive, got {radius}"
            )));
        }
        self.nominal_radius = radius;
        Ok(self)
    }

    pub fn constant(c: Quaternion) -> Self {
        Self::new(vec![c])
    }

    /// `q^n c`.
    pub fn monomial(n: usize, c: Quaternion) -> Self {
        let mut coeffs = vec![Quaternion::ZERO; n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    pub fn nominal_radius(&self) -> f64 {
        self.nominal_radius
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// True when every coefficient is real.
    pub fn has_real_coeffs(&self) -> bool {
        self.coeffs.iter().all(|a| a.x == 0.0 && a.y == 0.0 && a.z == 0.0)
    }

    fn with_coeffs(&self, coeffs: Vec<Quaternion>) -> Self {
        Self {
            coeffs: if coeffs.is_empty() {
                vec![Quaternion::ZERO]
            } else {
                coeffs
            },
            nominal_radius: self.nominal_radius,
        }
    }

    /// Horner evaluation: `a_0 + q (a_1 + q (a_2 + ...))`.
    pub fn eval(&self, q: Quaternion) -> Quaternion {
        let mut it = self.coeffs.iter().rev();
        let mut acc = *it.next().expect("series is never empty");
        for &a in it {
            acc = a + q * acc;
        }
        acc
    }

    /// Regular product: `c_n = sum_{k=0}^{n} a_k b_{n-k}`, summed in increasing `k`.
    pub fn star_mul(&self, other: &SliceSeries) -> SliceSeries {
        let (a, b) = (&self.coeffs, &other.coeffs);
        let len = a.len() + b.len() - 1;
        let coeffs = (0..len)
            .map(|n| {
                let lo = n.saturating_sub(b.len() - 1);
                let hi = n.min(a.len() - 1);
                (lo..=hi).fold(Quaternion::ZERO, |acc, k| acc + a[k] * b[n - k])
            })
            .collect();
        SliceSeries {
            coeffs,
            nominal_radius: self.nominal_radius.min(other.nominal_radius),
        }
    }

    /// `f^c(q) = sum q^n conj(a_n)`.
    pub fn regular_conjugate(&self) -> SliceSeries {
        self.with_coeffs(self.coeffs.iter().map(|a| a.conj()).collect())
    }

    /// `f * f^c`. Its coefficients are real up to rounding.
    pub fn symmetrization(&self) -> SliceSeries {
        self.star_mul(&self.regular_conjugate())
    }

    /// The star-reciprocal at a point: `(f * f^c (q))^{-1} f^c(q)`.
    pub fn star_inverse_eval(&self, q: Quaternion) -> Result<Quaternion> {
        let s = self.symmetrization().eval(q);
        let modulus = s.norm();
        if modulus < SINGULAR_FLOOR {
            return Err(Error::SingularPoint { modulus });
        }
        Ok(s.inverse()? * self.regular_conjugate().eval(q))
    }

    /// `f(q)^{-1} q f(q)`, the point at which the right factor of a star
    /// product is evaluated. Lies on the same 2-sphere `x + y S` as `q`.
    pub fn transform_point(&self, q: Quaternion) -> Result<Quaternion> {
        let v = self.eval(q);
        let modulus = v.norm();
        if modulus < ZERO_VALUE_FLOOR {
            return Err(Error::ZeroValue { modulus });
        }
        Ok(v.inverse()? * q * v)
    }

    /// Value at `q` reconstructed from the two slice values `f(x + yI)` and
    /// `f(x - yI)`:
    /// `1/2 [(1 - I_q I) f(x + yI) + (1 + I_q I) f(x - yI)]`.
    pub fn rep_eval(&self, unit: ImaginaryUnit, q: Quaternion) -> Quaternion {
        let s = decompose(q);
        let iq_i = s.unit.to_quaternion() * unit.to_quaternion();
        let plus = self.eval(unit.point(s.re, s.im));
        let minus = self.eval(unit.point(s.re, -s.im));
        ((Quaternion::ONE - iq_i) * plus + (Quaternion::ONE + iq_i) * minus) * 0.5
    }

    /// `t`-th derivative in the real direction: `b_k = (k+t)!/k! a_{k+t}`.
    pub fn derivative(&self, t: usize) -> SliceSeries {
        if t == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(t)
            .map(|(n, &a)| {
                let k = n - t;
                let falling: f64 = (1..=t).map(|j| (k + j) as f64).product();
                a * falling
            })
            .collect();
        self.with_coeffs(coeffs)
    }

    /// `f_r(q) = f(rq)`, i.e. `a_k -> r^k a_k`, for `0 < r <= 1`.
    pub fn dilate(&self, r: f64) -> Result<SliceSeries> {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::BadRadius(r));
        }
        let mut scale = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let c = a * scale;
                scale *= r;
                c
            })
            .collect();
        Ok(self.with_coeffs(coeffs))
    }

    /// Drops every coefficient of index above `k`.
    pub fn truncate(&self, k: usize) -> SliceSeries {
        self.with_coeffs(self.coeffs.iter().take(k + 1).copied().collect())
    }

    /// `f(q) c`, multiplying every coefficient on the right.
    pub fn scale_right(&self, c: Quaternion) -> SliceSeries {
        self.with_coeffs(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// `sum_n |q|^n |a_n|` over the coefficients with index above `k`.
    pub fn tail_bound(&self, k: usize, modulus: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(k + 1)
            .map(|(n, a)| modulus.powi(n as i32) * a.norm())
            .sum()
    }

    /// Largest coefficientwise max-norm difference, padding with zeros.
    pub fn max_coeff_diff(&self, other: &SliceSeries) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|n| {
                let a = self.coeffs.get(n).copied().unwrap_or_default();
                let b = other.coeffs.get(n).copied().unwrap_or_default();
                a.max_abs_diff(b)
            })
            .fold(0.0, f64::max)
    }

    fn zip_with(&self, other: &SliceSeries, op: impl Fn(Quaternion, Quaternion) -> Quaternion) -> SliceSeries {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|n| {
                op(
                    self.coeffs.get(n).copied().unwrap_or_default(),
                    other.coeffs.get(n).copied().unwrap_or_default(),
                )
            })
            .collect();
        SliceSeries {
            coeffs,
            nominal_radius: self.nominal_radius.min(other.nominal_radius),
        }
    }
}

impl Add for &SliceSeries {
    type Output = SliceSeries;
    fn add(self, other: &SliceSeries) -> SliceSeries {
        self.zip_with(other, |a, b| a + b)
    }
}

impl Sub for &SliceSeries {
    type Output = SliceSeries;
    fn sub(self, other: &SliceSeries) -> SliceSeries {
        self.zip_with(other, |a, b| a - b)
    }
}
