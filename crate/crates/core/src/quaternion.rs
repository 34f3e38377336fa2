//! Quaternion arithmetic, the sphere of imaginary units and slice coordinates.
//!
//! Every quaternion `q` can be written `q = x + y I_q` with `x, y` real,
//! `y >= 0` and `I_q` a purely imaginary unit. The set of all `x + y I` for a
//! fixed unit `I` is the complex plane `C_I` (a "slice").

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Moduli below this are treated as zero when an inverse is requested.
pub const INVERSE_FLOOR: f64 = 1e-300;

/// An element `w + x i + y j + z k` of the real division algebra H.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    #[inline]
    pub fn re(self) -> f64 {
        self.w
    }

    /// The imaginary part as a quaternion with zero real part.
    #[inline]
    pub fn im(self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    #[inline]
    pub fn conj(self) -> Quaternion {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean inner product in R^4.
    #[inline]
    pub fn dot(self, other: Quaternion) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// `q^{-1} = conj(q) / |q|^2`.
    pub fn inverse(self) -> Result<Quaternion> {
        let n2 = self.norm_sqr();
        if n2.sqrt() < INVERSE_FLOOR {
            return Err(Error::ZeroDivisor {
                modulus: n2.sqrt(),
            });
        }
        Ok(self.conj() / n2)
    }

    /// Conjugate, modulus and inverse in one call.
    pub fn conj_mod_inv(self) -> Result<(Quaternion, f64, Quaternion)> {
        Ok((self.conj(), self.norm(), self.inverse()?))
    }

    /// Integer power by repeated squaring.
    pub fn powi(self, n: u32) -> Quaternion {
        let mut base = self;
        let mut acc = Quaternion::ONE;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Max-norm distance, convenient for coefficientwise comparisons.
    pub fn max_abs_diff(self, other: Quaternion) -> f64 {
        let d = self - other;
        d.w.abs().max(d.x.abs()).max(d.y.abs()).max(d.z.abs())
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}, {}, {}]",
            self.w, self.x, self.y, self.z
        )
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product: `ij = k`, `jk = i`, `ki = j`, `i^2 = j^2 = k^2 = -1`.
impl Mul for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (self.w, self.x, self.y, self.z);
        let (a2, b2, c2, d2) = (o.w, o.x, o.y, o.z);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<It: Iterator<Item = Quaternion>>(iter: It) -> Quaternion {
        iter.fold(Quaternion::ZERO, Add::add)
    }
}

/// A purely imaginary quaternion of modulus one. Squares to `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct ImaginaryUnit {
    x: f64,
    y: f64,
    z: f64,
}

impl ImaginaryUnit {
    pub const I: ImaginaryUnit = ImaginaryUnit { x: 1.0, y: 0.0, z: 0.0 };
    pub const J: ImaginaryUnit = ImaginaryUnit { x: 0.0, y: 1.0, z: 0.0 };
    pub const K: ImaginaryUnit = ImaginaryUnit { x: 0.0, y: 0.0, z: 1.0 };

    /// Normalizes `(x, y, z)` onto the sphere. Fails on the zero vector.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !(n.is_finite() && n > 1e-150) {
            return Err(Error::InvalidParams(format!(
                "cannot normalize ({x}, {y}, {z}) to an imaginary unit"
            )));
        }
        Ok(Self {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    /// Unit along the imaginary part of `q`, if that part is nonzero.
    pub fn from_imaginary(q: Quaternion) -> Option<Self> {
        let n = (q.x * q.x + q.y * q.y + q.z * q.z).sqrt();
        (n > 0.0).then(|| Self {
            x: q.x / n,
            y: q.y / n,
            z: q.z / n,
        })
    }

    #[inline]
    pub fn x(self) -> f64 {
        self.x
    }
    #[inline]
    pub fn y(self) -> f64 {
        self.y
    }
    #[inline]
    pub fn z(self) -> f64 {
        self.z
    }

    #[inline]
    pub fn to_quaternion(self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    #[inline]
    pub fn dot(self, other: ImaginaryUnit) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// The point `re + im * I` of the slice `C_I`.
    #[inline]
    pub fn point(self, re: f64, im: f64) -> Quaternion {
        Quaternion::new(re, im * self.x, im * self.y, im * self.z)
    }

    /// A unit orthogonal to `self`.
    ///
    /// Gram-Schmidt of the first of `i, j, k` whose component along `self`
    /// is below 0.9 in magnitude, so `i -> j`, `j -> i` and
    /// `(i+j)/sqrt2 -> (i-j)/sqrt2`. At least one basis vector always
    /// qualifies because some component of a unit vector is at most 1/sqrt3.
    pub fn orthonormal_partner(self) -> ImaginaryUnit {
        let basis = [Self::I, Self::J, Self::K];
        let e = basis
            .into_iter()
            .find(|e| e.dot(self).abs() < 0.9)
            .expect("some component of a unit vector is below 1/sqrt(3)");
        let d = e.dot(self);
        ImaginaryUnit::new(e.x - d * self.x, e.y - d * self.y, e.z - d * self.z)
            .expect("residual is bounded away from zero")
    }
}

impl TryFrom<[f64; 3]> for ImaginaryUnit {
    type Error = Error;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        ImaginaryUnit::new(a[0], a[1], a[2])
    }
}

impl From<ImaginaryUnit> for [f64; 3] {
    fn from(u: ImaginaryUnit) -> Self {
        u.to_array()
    }
}

impl From<ImaginaryUnit> for Quaternion {
    fn from(u: ImaginaryUnit) -> Self {
        u.to_quaternion()
    }
}

/// `q = re + im * unit` with `im >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceCoords {
    pub re: f64,
    pub im: f64,
    pub unit: ImaginaryUnit,
}

impl SliceCoords {
    pub fn compose(self) -> Quaternion {
        self.unit.point(self.re, self.im)
    }
}

/// Splits `q` into real part, modulus of the imaginary part and its direction.
/// Real `q` gets the unit `i`.
pub fn decompose(q: Quaternion) -> SliceCoords {
    let im = (q.x * q.x + q.y * q.y + q.z * q.z).sqrt();
    let unit = ImaginaryUnit::from_imaginary(q).unwrap_or(ImaginaryUnit::I);
    SliceCoords { re: q.w, im, unit }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    #[test]
    fn basis_products() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(j * i, -k);
        assert_eq!(i * i, -Quaternion::ONE);
        assert_eq!(i * j * k, -Quaternion::ONE);
    }

    #[test]
    fn product_examples() {
        let q = Quaternion::new(0.3, -1.2, 2.5, 0.7);
        assert_eq!(q * Quaternion::ONE, q);
        let a = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        let b = Quaternion::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(a * b, Quaternion::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn conj_mod_inv_examples() {
        let (c, m, inv) = Quaternion::new(1.0, 1.0, 1.0, 1.0).conj_mod_inv().unwrap();
        assert_eq!(c, Quaternion::new(1.0, -1.0, -1.0, -1.0));
        assert_eq!(m, 2.0);
        assert!(close(inv, Quaternion::new(0.25, -0.25, -0.25, -0.25), 1e-16));

        let (c, m, inv) = Quaternion::I.conj_mod_inv().unwrap();
        assert_eq!(c, -Quaternion::I);
        assert_eq!(m, 1.0);
        assert_eq!(inv, -Quaternion::I);

        assert!(matches!(
            Quaternion::ZERO.conj_mod_inv(),
            Err(Error::ZeroDivisor { .. })
        ));
    }

    #[test]
    fn decompose_examples() {
        let s = decompose(Quaternion::new(3.0, 4.0, 0.0, 0.0));
        assert_eq!((s.re, s.im, s.unit), (3.0, 4.0, ImaginaryUnit::I));

        let s = decompose(Quaternion::real(5.0));
        assert_eq!((s.re, s.im, s.unit), (5.0, 0.0, ImaginaryUnit::I));

        let s = decompose(Quaternion::new(1.0, 1.0, 1.0, 1.0));
        let r3 = 3f64.sqrt();
        assert_eq!(s.re, 1.0);
        assert!((s.im - r3).abs() < 1e-15);
        for c in s.unit.to_array() {
            assert!((c - 1.0 / r3).abs() < 1e-15);
        }
    }

    #[test]
    fn negative_imaginary_direction_is_absorbed_into_unit() {
        let s = decompose(Quaternion::new(0.5, 0.0, -2.0, 0.0));
        assert_eq!(s.im, 2.0);
        assert_eq!(s.unit.to_array(), [0.0, -1.0, 0.0]);
    }

    #[test]
    fn partner_examples() {
        assert_eq!(ImaginaryUnit::I.orthonormal_partner(), ImaginaryUnit::J);
        assert_eq!(ImaginaryUnit::J.orthonormal_partner(), ImaginaryUnit::I);
        let s = 0.5f64.sqrt();
        let p = ImaginaryUnit::new(1.0, 1.0, 0.0).unwrap().orthonormal_partner();
        let want = [s, -s, 0.0];
        for (a, b) in p.to_array().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_squares_to_minus_one() {
        let u = ImaginaryUnit::new(0.3, -0.4, 1.2).unwrap().to_quaternion();
        assert!(close(u * u, -Quaternion::ONE, 1e-15));
    }

    #[test]
    fn zero_vector_is_not_a_unit() {
        assert!(ImaginaryUnit::new(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn json_shapes() {
        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(serde_json::to_string(&q).unwrap(), "[1.0,2.0,3.0,4.0]");
        let back: Quaternion = serde_json::from_str("[1,2,3,4]").unwrap();
        assert_eq!(back, q);
        let u: ImaginaryUnit = serde_json::from_str("[0,0,2]").unwrap();
        assert_eq!(u, ImaginaryUnit::K);
        assert_eq!(serde_json::to_string(&u).unwrap(), "[0.0,0.0,1.0]");
    }

    #[test]
    fn powi_matches_repeated_product() {
        let q = Quaternion::new(0.2, -0.4, 0.1, 0.7);
        let mut acc = Quaternion::ONE;
        for n in 0..9 {
            assert!(close(q.powi(n), acc, 1e-15));
            acc = acc * q;
        }
    }
}
