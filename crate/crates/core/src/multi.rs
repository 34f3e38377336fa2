//! Several-variable polynomials `sum_m q^m a_m`, evaluated on a single slice
//! `C_I^n` only.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::series::SliceSeries;

/// One term `z^m a_m` with `z^m = z_1^{m_1} ... z_n^{m_n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiMonomial {
    #[serde(rename = "m")]
    pub multi_index: Vec<u32>,
    #[serde(rename = "a")]
    pub coeff: Quaternion,
}

impl MultiMonomial {
    pub fn new(multi_index: Vec<u32>, coeff: Quaternion) -> Self {
        Self { multi_index, coeff }
    }

    pub fn dim(&self) -> usize {
        self.multi_index.len()
    }

    /// `|m| = m_1 + ... + m_n`.
    pub fn total_degree(&self) -> u32 {
        self.multi_index.iter().sum()
    }

    /// `(prod_k z_k^{m_k}) a_m` for `z` on one slice. The points of a slice
    /// commute, so the order of the product does not matter.
    pub fn eval_slice(&self, z: &[Quaternion]) -> Quaternion {
        debug_assert_eq!(z.len(), self.multi_index.len());
        self.multi_index
            .iter()
            .zip(z)
            .fold(Quaternion::ONE, |acc, (&m, &zk)| acc * zk.powi(m))
            * self.coeff
    }
}

/// A finite sum of [`MultiMonomial`] terms in `n` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPolynomial {
    dim: usize,
    terms: Vec<MultiMonomial>,
}

impl MultiPolynomial {
    pub fn new(dim: usize, terms: Vec<MultiMonomial>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParams("dimension must be positive".into()));
        }
        if let Some(t) = terms.iter().find(|t| t.dim() != dim) {
            return Err(Error::InvalidParams(format!(
                "monomial {:?} does not have {dim} indices",
                t.multi_index
            )));
        }
        Ok(Self { dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[MultiMonomial] {
        &self.terms
    }

    /// Evaluates at `z = (z_1, .., z_n)`, all coordinates in `C_I`.
    ///
    /// Fails if the coordinates do not share a slice: off-slice evaluation of
    /// several-variable series is not defined.
    pub fn eval_slice(&self, unit: ImaginaryUnit, z: &[Quaternion]) -> Result<Quaternion> {
        if z.len() != self.dim {
            return Err(Error::InvalidParams(format!(
                "expected {} coordinates, got {}",
                self.dim,
                z.len()
            )));
        }
        for (k, zk) in z.iter().enumerate() {
            let off = zk.im() - unit.to_quaternion() * zk.im().dot(unit.to_quaternion());
            if off.norm() > 1e-10 * (1.0 + zk.norm()) {
                return Err(Error::PointOffSlice { index: k });
            }
        }
        Ok(self.terms.iter().map(|t| t.eval_slice(z)).sum())
    }
}

impl From<&SliceSeries> for MultiPolynomial {
    fn from(f: &SliceSeries) -> Self {
        let terms = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, &a)| MultiMonomial::new(vec![n as u32], a))
            .collect();
        Self { dim: 1, terms }
    }
}
