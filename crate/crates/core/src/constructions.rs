//! Derived metrics: the ε-shift, the ω-shift and the nested metric on ℤ(p^s).

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groups::{
    is_prime, lee_length, off_diagonal_floor, validate_normed_group, Axiom, CyclicStructure,
    FiniteMetricGroup, ValidationReport, Violation, CARRIER_CAP,
};
use crate::scalar::{format_rational, ratio, Rational, Scalar};

/// `d_ε(g, h) = (d(g, h) + ε) / (1 + ε)` off the diagonal, for `0 < ε ≤ 1`.
pub fn shift_metric<S: Scalar>(group: &FiniteMetricGroup<S>, eps: &Rational) -> Result<FiniteMetricGroup<S>> {
    if *eps <= Rational::zero() || *eps > Rational::one() {
        return Err(Error::param(format!("shift needs 0 < eps <= 1, got {}", format_rational(eps))));
    }
    let e = S::from_rational(eps);
    let scale = S::one() + e.clone();
    let identity = group.identity();
    let base = group.clone();
    Ok(FiniteMetricGroup::from_length_fn(
        format!("shift({},eps={})", group.name(), format_rational(eps)),
        Arc::clone(group.structure()),
        move |g| {
            if g == identity {
                S::zero()
            } else {
                (base.length(g) + e.clone()) / scale.clone()
            }
        },
    ))
}

/// `ε / (1 + ε)`, the off-diagonal floor of an ε-shift.
pub fn shift_floor(eps: &Rational) -> Rational {
    eps / (Rational::one() + eps)
}

/// `ε / (4 + 4ε)`, the off-diagonal floor of an ω-shift.
pub fn omega_shift_floor(eps: &Rational) -> Rational {
    eps / (Rational::from_integer(4.into()) * (Rational::one() + eps))
}

/// `d^ω_ε(g, h) = (d(g, h) + ε d_ω(g, h)) / (1 + ε)` off the diagonal.
///
/// `d_omega` must live on the same carrier, be bi-invariant, and keep every
/// non-identity element at distance at least 1/4 from the identity.
pub fn omega_shift_metric<S: Scalar>(
    base: &FiniteMetricGroup<S>,
    d_omega: &FiniteMetricGroup<S>,
    eps: &Rational,
) -> Result<FiniteMetricGroup<S>> {
    if *eps <= Rational::zero() {
        return Err(Error::param(format!("omega shift needs eps > 0, got {}", format_rational(eps))));
    }
    if base.structure().describe() != d_omega.structure().describe() || base.order() != d_omega.order() {
        return Err(Error::arg(format!(
            "omega metric lives on {}, base on {}",
            d_omega.structure().describe(),
            base.structure().describe()
        )));
    }
    let mut report = validate_normed_group(d_omega);
    let quarter = S::from_rational(&ratio(1, 4));
    for g in d_omega.elements().filter(|&g| g != d_omega.identity()) {
        let l = d_omega.length(g);
        if !quarter.approx_le(&l) {
            report.violation_count += 1;
            report.violations.push(Violation {
                axiom: Axiom::Range,
                witnesses: vec![d_omega.label(g)],
                detail: format!("d_omega(g, 1) = {} below the 1/4 floor", l.display()),
            });
            break;
        }
    }
    if !report.passed() {
        return Err(Error::Validation(Box::new(report)));
    }
    let e = S::from_rational(eps);
    let scale = S::one() + e.clone();
    let identity = base.identity();
    let (b, w) = (base.clone(), d_omega.clone());
    Ok(FiniteMetricGroup::from_length_fn(
        format!("omega-shift({},{},eps={})", base.name(), d_omega.name(), format_rational(eps)),
        Arc::clone(base.structure()),
        move |g| {
            if g == identity {
                S::zero()
            } else {
                (b.length(g) + e.clone() * w.length(g)) / scale.clone()
            }
        },
    ))
}

/// Nested metric on ℤ(p^s), `s ≥ 2`.
///
/// With `v` the p-adic valuation of `g₁ - g₂ ≠ 0`: `d = 1/2^v` when
/// `v ≤ s - 2`, and `d = l_Lee((g₁ - g₂)/p^{s-1}) / 2^{s-1}` when `v = s - 1`.
pub fn make_nested_cyclic(p: u64, s: u32) -> Result<FiniteMetricGroup> {
    if p < 3 || !is_prime(p) {
        return Err(Error::param(format!("nested metric needs a prime p >= 3, got {p}")));
    }
    if s < 2 {
        return Err(Error::param(format!("nested metric needs s >= 2, got {s}")));
    }
    let order = p
        .checked_pow(s)
        .filter(|&m| m as usize <= CARRIER_CAP)
        .ok_or_else(|| Error::param(format!("p^s = {p}^{s} exceeds the carrier cap {CARRIER_CAP}")))?;
    let top = p.pow(s - 1);
    let structure = CyclicStructure::new(order as usize)?;
    Ok(FiniteMetricGroup::from_length_fn(
        format!("nested:p={p}:s={s}"),
        Arc::new(structure),
        move |g| {
            let g = g as u64;
            if g == 0 {
                return Rational::zero();
            }
            let mut v = 0u32;
            let mut rest = g;
            while rest.is_multiple_of(p) {
                rest /= p;
                v += 1;
            }
            if v + 2 <= s {
                ratio(1, 1i64 << v)
            } else {
                lee_length(g / top, p) / Rational::from_integer((1i64 << (s - 1)).into())
            }
        },
    ))
}

/// Checks the off-diagonal floor of a metric group, returning the first offender.
pub fn check_floor<S: Scalar>(group: &FiniteMetricGroup<S>, floor: &S) -> std::result::Result<(), ValidationReport> {
    match off_diagonal_floor(group) {
        Some(min) if !floor.approx_le(&min) => {
            let mut report = validate_normed_group(group);
            report.violation_count += 1;
            report.violations.push(Violation {
                axiom: Axiom::Range,
                witnesses: Vec::new(),
                detail: format!("minimum off-diagonal distance {} below {}", min.display(), floor.display()),
            });
            Err(report)
        }
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_cyclic_lee, make_symmetric_hamming};
    use crate::scalar::int;
    use num_traits::Signed;

    fn s3() -> FiniteMetricGroup {
        make_symmetric_hamming(3).unwrap().metric_group().unwrap()
    }

    #[test]
    fn shift_of_two_thirds_at_half() {
        let g = shift_metric(&s3(), &ratio(1, 2)).unwrap();
        let t = g.parse_label("213").unwrap();
        assert_eq!(g.length(t), ratio(7, 9));
        assert_eq!(g.distance(t, t), Rational::zero());
    }

    #[test]
    fn shift_tends_to_base_metric() {
        let base = make_cyclic_lee(13).unwrap();
        let mut previous_gap: Option<Rational> = None;
        for k in 1..=20 {
            let eps = ratio(1, 1 << k);
            let shifted = shift_metric(&base, &eps).unwrap();
            let gap = (shifted.length(1) - base.length(1)).abs();
            assert!(gap <= eps);
            if let Some(prev) = previous_gap {
                assert!(gap < prev);
            }
            previous_gap = Some(gap);
        }
    }

    #[test]
    fn shift_rejects_bad_eps() {
        assert!(matches!(shift_metric(&s3(), &int(0)), Err(Error::InvalidParameter(_))));
        assert!(matches!(shift_metric(&s3(), &ratio(-1, 2)), Err(Error::InvalidParameter(_))));
        assert!(matches!(shift_metric(&s3(), &int(2)), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn shift_is_monotone_in_eps() {
        let base = make_cyclic_lee(13).unwrap();
        let small = shift_metric(&base, &ratio(1, 4)).unwrap();
        let large = shift_metric(&base, &ratio(1, 2)).unwrap();
        for g in 1..13 {
            if base.length(g) < int(1) {
                assert!(small.length(g) < large.length(g));
            }
        }
    }

    #[test]
    fn omega_shift_value_and_floor() {
        // d = 1/2 everywhere off the diagonal on Z(3), d_omega = 1/4.
        let z3 = Arc::new(CyclicStructure::new(3).unwrap());
        let half = FiniteMetricGroup::from_table("half", z3.clone(), vec![int(0), ratio(1, 2), ratio(1, 2)]);
        let quarter = FiniteMetricGroup::from_table("quarter", z3, vec![int(0), ratio(1, 4), ratio(1, 4)]);
        let w = omega_shift_metric(&half, &quarter, &int(1)).unwrap();
        assert_eq!(w.length(1), ratio(3, 8));
        assert_eq!(w.distance(2, 2), Rational::zero());
        assert!(w.length(1) >= omega_shift_floor(&int(1)));
        assert!(w.validate().passed());
    }

    #[test]
    fn omega_floor_violation() {
        let lee = make_cyclic_lee(13).unwrap();
        let err = omega_shift_metric(&lee, &lee, &int(1)).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn nested_values() {
        let g = make_nested_cyclic(3, 2).unwrap();
        assert_eq!(g.distance(1, 2), int(1));
        assert_eq!(g.distance(0, 3), ratio(1, 2));
        assert_eq!(g.distance(4, 4), Rational::zero());
        assert!(g.validate().passed());
    }

    #[test]
    fn nested_three_cubed_validates() {
        let g = make_nested_cyclic(3, 3).unwrap();
        assert_eq!(g.order(), 27);
        let report = g.validate();
        assert!(report.passed(), "{report}");
        assert!(report.exhaustive);
    }

    #[test]
    fn nested_rejects_parameters() {
        assert!(make_nested_cyclic(4, 2).is_err());
        assert!(make_nested_cyclic(3, 1).is_err());
        assert!(make_nested_cyclic(3, 40).is_err());
    }
}
