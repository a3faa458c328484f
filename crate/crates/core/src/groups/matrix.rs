//! Diagonal order-p matrices as exponent vectors, and dense numeric unitaries.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::is_prime;
use crate::error::{Error, Result};
use crate::scalar::{ratio, Rational, UNITARY_TOLERANCE};

/// `diag(ω^{j_1}, .., ω^{j_n})` with `ω = e^{2πi/p}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVectorMatrix {
    exponents: Vec<u32>,
    modulus: u32,
}

impl ExponentVectorMatrix {
    pub fn new(exponents: Vec<i64>, modulus: u32) -> Result<Self> {
        if !is_prime(modulus as u64) {
            return Err(Error::param(format!("exponent modulus {modulus} is not prime")));
        }
        let p = modulus as i64;
        Ok(ExponentVectorMatrix {
            exponents: exponents.into_iter().map(|j| j.rem_euclid(p) as u32).collect(),
            modulus,
        })
    }

    pub fn identity(dimension: usize, modulus: u32) -> Result<Self> {
        ExponentVectorMatrix::new(vec![0; dimension], modulus)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn dimension(&self) -> usize {
        self.exponents.len()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus || self.dimension() != other.dimension() {
            return Err(Error::arg(format!(
                "exponent vectors differ in shape: (p={}, n={}) vs (p={}, n={})",
                self.modulus,
                self.dimension(),
                other.modulus,
                other.dimension()
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let p = self.modulus;
        Ok(ExponentVectorMatrix {
            exponents: self.exponents.iter().zip(&other.exponents).map(|(a, b)| (a + b) % p).collect(),
            modulus: p,
        })
    }

    pub fn inverse(&self) -> Self {
        let p = self.modulus;
        ExponentVectorMatrix {
            exponents: self.exponents.iter().map(|&a| (p - a) % p).collect(),
            modulus: p,
        }
    }

    /// `a^k` scales every exponent by `k` mod p.
    pub fn pow(&self, k: u64) -> Self {
        let p = self.modulus as u64;
        ExponentVectorMatrix {
            exponents: self.exponents.iter().map(|&a| ((a as u64 * (k % p)) % p) as u32).collect(),
            modulus: self.modulus,
        }
    }

    /// Rank-metric length `ρ(a, 1)`: the fraction of non-zero exponents.
    pub fn rank_length(&self) -> Rational {
        if self.exponents.is_empty() {
            return ratio(0, 1);
        }
        let nonzero = self.exponents.iter().filter(|&&j| j != 0).count();
        ratio(nonzero as i64, self.dimension() as i64)
    }

    /// The diagonal phases `2π j_k / p`.
    pub fn phases(&self) -> Vec<f64> {
        let p = self.modulus as f64;
        self.exponents.iter().map(|&j| 2.0 * PI * j as f64 / p).collect()
    }

    pub fn to_unitary(&self) -> NumericUnitary {
        NumericUnitary::from_phases(&self.phases())
    }

    /// Kronecker product with `I_k`: each block is a copy of `self`.
    pub fn tensor_identity(&self, k: usize) -> Self {
        ExponentVectorMatrix { exponents: self.exponents.repeat(k), modulus: self.modulus }
    }

    /// Block sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::arg("direct sum of exponent vectors with different moduli"));
        }
        let mut exponents = self.exponents.clone();
        exponents.extend_from_slice(&other.exponents);
        Ok(ExponentVectorMatrix { exponents, modulus: self.modulus })
    }
}

/// `ρ(a, b) = rk(a - b) / n`, which for diagonal matrices counts differing entries.
pub fn rank_distance(a: &ExponentVectorMatrix, b: &ExponentVectorMatrix) -> Result<Rational> {
    a.check_compatible(b)?;
    if a.dimension() == 0 {
        return Ok(ratio(0, 1));
    }
    let differing = a.exponents.iter().zip(&b.exponents).filter(|(x, y)| x != y).count();
    Ok(ratio(differing as i64, a.dimension() as i64))
}

/// A dense `n × n` unitary matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericUnitary {
    dimension: usize,
    entries: Vec<Complex64>,
}

impl NumericUnitary {
    /// Checks `U* U = I` entrywise within [`UNITARY_TOLERANCE`].
    pub fn new(dimension: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dimension * dimension {
            return Err(Error::arg(format!(
                "{} entries for a {dimension}x{dimension} matrix",
                entries.len()
            )));
        }
        let u = NumericUnitary { dimension, entries };
        let product = u.adjoint().mul_unchecked(&u);
        let err = product.max_deviation_from_identity();
        if err > UNITARY_TOLERANCE {
            return Err(Error::arg(format!("matrix is not unitary (max |U*U - I| = {err:e})")));
        }
        Ok(u)
    }

    pub fn identity(dimension: usize) -> Self {
        NumericUnitary::from_phases(&vec![0.0; dimension])
    }

    pub fn from_phases(phases: &[f64]) -> Self {
        let n = phases.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for (k, &phi) in phases.iter().enumerate() {
            entries[k * n + k] = Complex64::from_polar(1.0, phi);
        }
        NumericUnitary { dimension: n, entries }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dimension + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dimension;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        NumericUnitary { dimension: n, entries }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.dimension;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        NumericUnitary { dimension: n, entries }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dimension != other.dimension {
            return Err(Error::arg("dimension mismatch in unitary product"));
        }
        Ok(self.mul_unchecked(other))
    }

    fn max_deviation_from_identity(&self) -> f64 {
        let n = self.dimension;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.entries[i * n + j] - target).norm());
            }
        }
        worst
    }

    /// `I_k ⊗ U`: `k` diagonal copies.
    pub fn tensor_identity(&self, k: usize) -> Self {
        let blocks = vec![self.clone(); k];
        block_diagonal(&blocks)
    }

    /// Block sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        block_diagonal(&[self.clone(), other.clone()])
    }
}

fn block_diagonal(blocks: &[NumericUnitary]) -> NumericUnitary {
    let n: usize = blocks.iter().map(|b| b.dimension).sum();
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    let mut offset = 0;
    for b in blocks {
        for i in 0..b.dimension {
            for j in 0..b.dimension {
                entries[(offset + i) * n + offset + j] = b.entries[i * b.dimension + j];
            }
        }
        offset += b.dimension;
    }
    NumericUnitary { dimension: n, entries }
}

/// Normalized Hilbert–Schmidt distance `(Σ |a_ij - b_ij|²)^{1/2} / √n`.
///
/// The group metric on `U(n)` is half of this value.
pub fn hs_distance(a: &NumericUnitary, b: &NumericUnitary) -> Result<f64> {
    if a.dimension != b.dimension {
        return Err(Error::arg(format!(
            "dimension mismatch: {} vs {}",
            a.dimension, b.dimension
        )));
    }
    if a.dimension == 0 {
        return Ok(0.0);
    }
    let sum: f64 = a.entries.iter().zip(&b.entries).map(|(x, y)| (x - y).norm_sqr()).sum();
    Ok((sum / a.dimension as f64).sqrt())
}
