//! Dilution, replication and amalgamation of finite witnesses, and the
//! shift-amplification pipelines built from them.
//!
//! Blocks are contiguous: copy `i` of a degree-`n` witness occupies points
//! `i·n .. (i+1)·n`, and an amalgam places its second part after the first.

mod matrix;
mod perm;

pub use matrix::{
    block_dilute, block_sum, hyperlinear_prescribed_distance, linear_shift_amplify, tensor_replicate,
    MatrixImages, MatrixWitness,
};
pub use perm::{amalgamate, dilute, replicate, shift_amplify, shift_degrees, PermWitness, SCALE_CAP};

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational};

/// Replication factor and block sizes for a shift by `eps = a/b`.
///
/// With `θ′` of degree `m0` copied `r` times and `θ` of degree `n` filling
/// the rest, the `θ′` share `m/m′` equals `ε/(1+ε)` and `n` divides `m′ − m`.
/// Returns `(r, m, m′ − m)`.
pub(crate) fn shift_schedule(n: usize, m0: usize, eps: &Rational) -> Result<(usize, usize, usize)> {
    if !eps.is_positive() || *eps > Rational::from_integer(1.into()) {
        return Err(Error::param(format!("eps must lie in (0, 1], got {}", format_rational(eps))));
    }
    if n == 0 || m0 == 0 {
        return Err(Error::arg("shift amplification needs witnesses of positive degree"));
    }
    let too_big = || Error::limit(format!("eps = {} needs a replication factor above {SCALE_CAP}", format_rational(eps)));
    let a = eps.numer().to_u64().ok_or_else(too_big)?;
    let b = eps.denom().to_u64().ok_or_else(too_big)?;
    let an = a.checked_mul(n as u64).ok_or_else(too_big)?;
    let m0b = (m0 as u64).checked_mul(b).ok_or_else(too_big)?;
    let r = an / an.gcd(&m0b);
    if r > SCALE_CAP as u64 {
        return Err(too_big());
    }
    let m = r * m0 as u64;
    let rest = m * b / a;
    Ok((r as usize, m as usize, rest as usize))
}
