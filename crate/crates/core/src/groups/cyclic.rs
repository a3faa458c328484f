use std::sync::Arc;

use super::{is_prime, FiniteMetricGroup, GroupStructure, CARRIER_CAP};
use crate::error::{Error, Result};
use crate::scalar::{ratio, Rational};

/// An element of ℤ(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CyclicElement {
    residue: u64,
    modulus: u64,
}

impl CyclicElement {
    pub fn new(residue: i64, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::param(format!("modulus {modulus} < 2")));
        }
        Ok(CyclicElement { residue: residue.rem_euclid(modulus as i64) as u64, modulus })
    }

    pub fn residue(self) -> u64 {
        self.residue
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn add(self, other: CyclicElement) -> CyclicElement {
        assert_eq!(self.modulus, other.modulus);
        CyclicElement { residue: (self.residue + other.residue) % self.modulus, ..self }
    }

    pub fn neg(self) -> CyclicElement {
        CyclicElement { residue: (self.modulus - self.residue) % self.modulus, ..self }
    }
}

/// ℤ(m) written additively; element `k` has index `k`.
#[derive(Debug, Clone)]
pub struct CyclicStructure {
    modulus: usize,
}

impl CyclicStructure {
    pub fn new(modulus: usize) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::param("cyclic group of order 0"));
        }
        if modulus > CARRIER_CAP {
            return Err(Error::limit(format!(
                "cyclic carrier of order {modulus} exceeds cap {CARRIER_CAP}"
            )));
        }
        Ok(CyclicStructure { modulus })
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }
}

impl GroupStructure for CyclicStructure {
    fn order(&self) -> usize {
        self.modulus
    }

    fn identity(&self) -> usize {
        0
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        (a + b) % self.modulus
    }

    fn inv(&self, a: usize) -> usize {
        (self.modulus - a) % self.modulus
    }

    fn label(&self, a: usize) -> String {
        a.to_string()
    }

    fn parse_label(&self, text: &str) -> Option<usize> {
        let k: i64 = text.parse().ok()?;
        Some(k.rem_euclid(self.modulus as i64) as usize)
    }

    fn describe(&self) -> String {
        format!("Z({})", self.modulus)
    }
}

/// `l_Lee(a) = 2 min(a, p - a) / (p - 1)` on ℤ(p).
pub fn lee_length(a: u64, p: u64) -> Rational {
    let a = a % p;
    ratio(2 * a.min(p - a) as i64, (p - 1) as i64)
}

/// `(ℤ(p), d_Lee)` for a prime `p ≥ 3`.
pub fn make_cyclic_lee(p: u64) -> Result<FiniteMetricGroup> {
    if p < 3 || !is_prime(p) {
        return Err(Error::param(format!("Lee metric needs a prime p >= 3, got {p}")));
    }
    let structure = CyclicStructure::new(p as usize)?;
    Ok(FiniteMetricGroup::from_length_fn(
        format!("cyclic:p={p}:metric=lee"),
        Arc::new(structure),
        move |a| lee_length(a as u64, p),
    ))
}
