//! Splitting a slice-regular series into two holomorphic `C_I`-valued
//! polynomials, `f_I(z) = F(z) + L(z) J`, and recombining them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::series::SliceSeries;

/// `|<I, J>|` at or above this is rejected as non-orthogonal.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// A holomorphic polynomial on the slice `C_I`, coefficients stored as
/// complex numbers `re + im I`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSlicePolynomial {
    pub unit: ImaginaryUnit,
    pub coeffs: Vec<Complex64>,
}

impl ComplexSlicePolynomial {
    pub fn new(unit: ImaginaryUnit, coeffs: Vec<Complex64>) -> Self {
        Self { unit, coeffs }
    }

    /// Complex Horner evaluation at `z = re + im I`.
    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Embeds `c = a + bi` as the quaternion `a + b I`.
    pub fn embed(&self, c: Complex64) -> Quaternion {
        self.unit.point(c.re, c.im)
    }

    pub fn derivative(&self, t: usize) -> ComplexSlicePolynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(t)
            .map(|(n, &c)| {
                let k = n - t;
                c * (1..=t).map(|j| (k + j) as f64).product::<f64>()
            })
            .collect();
        Self::new(self.unit, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }
}

fn check_orthogonal(i: ImaginaryUnit, j: ImaginaryUnit) -> Result<()> {
    let inner = i.dot(j);
    if inner.abs() >= ORTHOGONALITY_TOL {
        return Err(Error::NotOrthogonal { inner });
    }
    Ok(())
}

/// Decomposes `a = (c0 + c1 I) + (c2 + c3 I) J` by projecting onto the
/// orthonormal basis `{1, I, J, IJ}`.
fn split_coeff(a: Quaternion, i: Quaternion, j: Quaternion, ij: Quaternion) -> (Complex64, Complex64) {
    (
        Complex64::new(a.w, a.dot(i)),
        Complex64::new(a.dot(j), a.dot(ij)),
    )
}

/// `Q_I`: the splitting `f_I = F + L J` for orthogonal units `I`, `J`.
pub fn split(
    f: &SliceSeries,
    unit: ImaginaryUnit,
    partner: ImaginaryUnit,
) -> Result<(ComplexSlicePolynomial, ComplexSlicePolynomial)> {
    check_orthogonal(unit, partner)?;
    let (i, j) = (unit.to_quaternion(), partner.to_quaternion());
    let ij = i * j;
    let (first, second) = f
        .coeffs()
        .iter()
        .map(|&a| split_coeff(a, i, j, ij))
        .unzip();
    Ok((
        ComplexSlicePolynomial::new(unit, first),
        ComplexSlicePolynomial::new(unit, second),
    ))
}

/// `P_I`: recombines `a_n = a_{n,1} + a_{n,2} J` into a slice-regular series.
pub fn extend(
    first: &ComplexSlicePolynomial,
    second: &ComplexSlicePolynomial,
    partner: ImaginaryUnit,
) -> Result<SliceSeries> {
    if first.unit != second.unit {
        return Err(Error::UnitMismatch);
    }
    check_orthogonal(first.unit, partner)?;
    let j = partner.to_quaternion();
    let len = first.coeffs.len().max(second.coeffs.len());
    let zero = Complex64::new(0.0, 0.0);
    let coeffs = (0..len)
        .map(|n| {
            let a1 = first.embed(first.coeffs.get(n).copied().unwrap_or(zero));
            let a2 = second.embed(second.coeffs.get(n).copied().unwrap_or(zero));
            a1 + a2 * j
        })
        .collect();
    Ok(SliceSeries::new(coeffs))
}

/// The split pair for a slice with the canonical partner unit, used by the
/// norm routines: `|f(x + yI)|^2 = |F(z)|^2 + |L(z)|^2`.
#[derive(Debug, Clone)]
pub struct SlicePair {
    pub first: ComplexSlicePolynomial,
    pub second: ComplexSlicePolynomial,
}

impl SlicePair {
    pub fn new(f: &SliceSeries, unit: ImaginaryUnit) -> Self {
        let (first, second) =
            split(f, unit, unit.orthonormal_partner()).expect("canonical partner is orthogonal");
        Self { first, second }
    }

    /// `|f(x + yI)|` through the complex components.
    #[inline]
    pub fn modulus(&self, z: Complex64) -> f64 {
        let a = self.first.eval(z);
        let b = self.second.eval(z);
        (a.norm_sqr() + b.norm_sqr()).sqrt()
    }
}
