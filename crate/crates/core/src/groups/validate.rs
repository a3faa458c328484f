//! Exhaustive (or sampled) checks of the normed-group axioms.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{FiniteMetricGroup, GroupStructure, LengthFunction};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Pair checks run exhaustively up to this many pairs, then by sampling.
pub const EXHAUSTIVE_PAIR_CAP: usize = 4_000_000;

/// Triple checks on the metric itself run for carriers up to this order.
pub const TRIPLE_CHECK_ORDER: usize = 100;

const SAMPLED_PAIRS: usize = 200_000;
const WITNESSES_PER_AXIOM: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    IdentityZero,
    InverseSymmetric,
    Subadditive,
    PositiveOffIdentity,
    ConjugationInvariant,
    Range,
    MetricSymmetric,
    Triangle,
    LeftInvariant,
    RightInvariant,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Axiom::IdentityZero => "(i) l(1) = 0",
            Axiom::InverseSymmetric => "(ii) l(g) = l(g^-1)",
            Axiom::Subadditive => "(iii) l(gh) <= l(g) + l(h)",
            Axiom::PositiveOffIdentity => "(i') l(g) = 0 only at the identity",
            Axiom::ConjugationInvariant => "invariance l(h^-1 g h) = l(g)",
            Axiom::Range => "range 0 <= l <= 1",
            Axiom::MetricSymmetric => "metric symmetry d(g,h) = d(h,g)",
            Axiom::Triangle => "triangle inequality",
            Axiom::LeftInvariant => "left invariance d(kg,kh) = d(g,h)",
            Axiom::RightInvariant => "right invariance d(gk,hk) = d(g,h)",
        };
        f.write_str(text)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witnesses: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub group: String,
    pub exact: bool,
    pub exhaustive: bool,
    pub checks: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn new(group: &str, exact: bool) -> Self {
        ValidationReport {
            group: group.to_string(),
            exact,
            exhaustive: true,
            checks: 0,
            violation_count: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn violates(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    fn record(&mut self, axiom: Axiom, witnesses: Vec<String>, detail: String) {
        self.violation_count += 1;
        let recorded = self.violations.iter().filter(|v| v.axiom == axiom).count();
        if recorded < WITNESSES_PER_AXIOM {
            self.violations.push(Violation { axiom, witnesses, detail });
        }
    }

    fn check(&mut self, ok: bool, axiom: Axiom, witnesses: impl FnOnce() -> (Vec<String>, String)) {
        self.checks += 1;
        if !ok {
            let (w, detail) = witnesses();
            self.record(axiom, w, detail);
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "{}: all {} checks passed", self.group, self.checks);
        }
        write!(f, "{}: {} violation(s)", self.group, self.violation_count)?;
        for v in &self.violations {
            write!(f, "; {} at [{}] ({})", v.axiom, v.witnesses.join(", "), v.detail)?;
        }
        Ok(())
    }
}

fn pairs(order: usize) -> (bool, Vec<(usize, usize)>) {
    if order.saturating_mul(order) <= EXHAUSTIVE_PAIR_CAP {
        (true, Vec::new())
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let sample = (0..SAMPLED_PAIRS)
            .map(|_| (rng.gen_range(0..order), rng.gen_range(0..order)))
            .collect();
        (false, sample)
    }
}

fn for_each_pair(order: usize, mut f: impl FnMut(usize, usize)) -> bool {
    let (exhaustive, sample) = pairs(order);
    if exhaustive {
        for g in 0..order {
            for h in 0..order {
                f(g, h);
            }
        }
    } else {
        for (g, h) in sample {
            f(g, h);
        }
    }
    exhaustive
}

/// Checks (i), (ii), (iii), (i′), conjugation invariance and the range of
/// `length` on `structure`.
pub(crate) fn validate_structure_lengths<S: Scalar>(
    name: &str,
    structure: &dyn GroupStructure,
    length: &dyn Fn(usize) -> S,
) -> ValidationReport {
    let mut report = ValidationReport::new(name, S::EXACT);
    let order = structure.order();
    let e = structure.identity();
    let label = |g: usize| structure.label(g);
    let zero = S::zero();
    let one = S::one();

    let le = length(e);
    report.check(le.approx_eq(&zero), Axiom::IdentityZero, || {
        (vec![label(e)], format!("l = {}", le.display()))
    });
    let lengths: Vec<S> = (0..order).map(length).collect();
    for g in 0..order {
        let l = &lengths[g];
        report.check(zero.approx_le(l) && l.approx_le(&one), Axiom::Range, || {
            (vec![label(g)], format!("l = {}", l.display()))
        });
        if g != e {
            let positive = if S::EXACT { *l > zero } else { !l.approx_eq(&zero) };
            report.check(positive, Axiom::PositiveOffIdentity, || {
                (vec![label(g)], format!("l = {}", l.display()))
            });
        }
        let li = &lengths[structure.inv(g)];
        report.check(l.approx_eq(li), Axiom::InverseSymmetric, || {
            (vec![label(g)], format!("l(g) = {}, l(g^-1) = {}", l.display(), li.display()))
        });
    }
    let exhaustive = for_each_pair(order, |g, h| {
        let gh = structure.mul(g, h);
        let sum = lengths[g].clone() + lengths[h].clone();
        report.check(lengths[gh].approx_le(&sum), Axiom::Subadditive, || {
            (
                vec![label(g), label(h)],
                format!("l(gh) = {} > {}", lengths[gh].display(), sum.display()),
            )
        });
        let conj = structure.mul(structure.inv(h), structure.mul(g, h));
        report.check(lengths[conj].approx_eq(&lengths[g]), Axiom::ConjugationInvariant, || {
            (
                vec![label(g), label(h)],
                format!("l(h^-1 g h) = {}, l(g) = {}", lengths[conj].display(), lengths[g].display()),
            )
        });
    });
    report.exhaustive = exhaustive;
    if order <= TRIPLE_CHECK_ORDER {
        let dist = |g: usize, h: usize| lengths[structure.mul(g, structure.inv(h))].clone();
        check_metric_triples(&mut report, structure, &dist);
    }
    report
}

/// Direct checks of symmetry, the triangle inequality and bi-invariance of `dist`.
fn check_metric_triples<S: Scalar>(
    report: &mut ValidationReport,
    structure: &dyn GroupStructure,
    dist: &dyn Fn(usize, usize) -> S,
) {
    let order = structure.order();
    let label = |g: usize| structure.label(g);
    let table: Vec<Vec<S>> = (0..order).map(|g| (0..order).map(|h| dist(g, h)).collect()).collect();
    for g in 0..order {
        for h in 0..order {
            report.check(table[g][h].approx_eq(&table[h][g]), Axiom::MetricSymmetric, || {
                (vec![label(g), label(h)], String::new())
            });
            for k in 0..order {
                let via = table[g][h].clone() + table[h][k].clone();
                report.check(table[g][k].approx_le(&via), Axiom::Triangle, || {
                    (vec![label(g), label(h), label(k)], String::new())
                });
                let left = &table[structure.mul(k, g)][structure.mul(k, h)];
                report.check(left.approx_eq(&table[g][h]), Axiom::LeftInvariant, || {
                    (vec![label(g), label(h), label(k)], String::new())
                });
                let right = &table[structure.mul(g, k)][structure.mul(h, k)];
                report.check(right.approx_eq(&table[g][h]), Axiom::RightInvariant, || {
                    (vec![label(g), label(h), label(k)], String::new())
                });
            }
        }
    }
}

/// Validates the metric group: length axioms, invariance and (for small
/// carriers) the metric axioms over all triples.
pub fn validate_normed_group<S: Scalar>(group: &FiniteMetricGroup<S>) -> ValidationReport {
    validate_structure_lengths(group.name(), group.structure().as_ref(), &|g| group.length(g))
}

/// `d(g, h) = l(g h⁻¹)`, after checking that `length` is an invariant length function.
pub fn metric_from_length<S: Scalar>(
    name: impl Into<String>,
    structure: Arc<dyn GroupStructure>,
    length: LengthFunction<S>,
) -> Result<FiniteMetricGroup<S>> {
    let name = name.into();
    if length.len() != structure.order() {
        return Err(Error::arg(format!(
            "length function has {} values for a carrier of {}",
            length.len(),
            structure.order()
        )));
    }
    let report = validate_structure_lengths(&name, structure.as_ref(), &|g| length.get(g).clone());
    if !report.passed() {
        return Err(Error::Validation(Box::new(report)));
    }
    Ok(FiniteMetricGroup::from_table(name, structure, length.values().to_vec()))
}

/// `l(g) = d(g, 1)`, after checking that `dist` is bi-invariant and that the
/// resulting length function satisfies the axioms.
pub fn length_from_metric<S: Scalar>(
    name: &str,
    structure: &dyn GroupStructure,
    dist: impl Fn(usize, usize) -> S,
) -> Result<LengthFunction<S>> {
    let e = structure.identity();
    let order = structure.order();
    let values: Vec<S> = (0..order).map(|g| dist(g, e)).collect();
    let mut report = ValidationReport::new(name, S::EXACT);
    let label = |g: usize| structure.label(g);
    let exhaustive = for_each_pair(order, |g, h| {
        let d = dist(g, h);
        let right = &values[structure.mul(g, structure.inv(h))];
        report.check(d.approx_eq(right), Axiom::RightInvariant, || {
            (vec![label(g), label(h)], format!("d = {}, l(gh^-1) = {}", d.display(), right.display()))
        });
        let left = &values[structure.mul(structure.inv(h), g)];
        report.check(d.approx_eq(left), Axiom::LeftInvariant, || {
            (vec![label(g), label(h)], format!("d = {}, l(h^-1g) = {}", d.display(), left.display()))
        });
    });
    report.exhaustive = exhaustive;
    if order <= TRIPLE_CHECK_ORDER {
        check_metric_triples(&mut report, structure, &dist);
    }
    let lengths = validate_structure_lengths(name, structure, &|g| values[g].clone());
    report.checks += lengths.checks;
    for v in lengths.violations {
        report.violation_count += 1;
        report.violations.push(v);
    }
    report.violation_count = report.violation_count.max(report.violations.len() as u64);
    if !report.passed() {
        return Err(Error::Validation(Box::new(report)));
    }
    Ok(LengthFunction::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_cyclic_lee, make_symmetric_hamming, CyclicStructure};
    use crate::scalar::{int, ratio, Rational};

    #[test]
    fn lee_and_hamming_pass() {
        assert!(make_cyclic_lee(13).unwrap().validate().passed());
        let s4 = make_symmetric_hamming(4).unwrap().metric_group().unwrap();
        let report = s4.validate();
        assert!(report.passed(), "{report}");
        assert!(report.exhaustive);
    }

    #[test]
    fn asymmetric_length_fails_at_ii() {
        let z5 = Arc::new(CyclicStructure::new(5).unwrap());
        let values = vec![int(0), ratio(1, 2), int(1), int(1), int(1)];
        let err = metric_from_length("bad", z5, LengthFunction::new(values)).unwrap_err();
        match err {
            Error::Validation(report) => assert!(report.violates(Axiom::InverseSymmetric)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn vanishing_off_identity_names_i_prime() {
        let z3 = Arc::new(CyclicStructure::new(3).unwrap());
        let values = vec![int(0), int(0), int(0)];
        let err = metric_from_length("zero", z3, LengthFunction::new(values)).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("(i')"), "{text}");
    }

    #[test]
    fn lee_round_trip_through_metric() {
        let g = make_cyclic_lee(13).unwrap();
        let l = g.length_function();
        let rebuilt = metric_from_length("lee", Arc::clone(g.structure()), l.clone()).unwrap();
        assert_eq!(rebuilt.distance(3, 5), ratio(1, 3));
        let back = length_from_metric("lee", g.structure().as_ref(), |a, b| rebuilt.distance(a, b)).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn hamming_round_trip_on_s3() {
        let g = make_symmetric_hamming(3).unwrap().metric_group().unwrap();
        let l = length_from_metric("s3", g.structure().as_ref(), |a, b| g.distance(a, b)).unwrap();
        let rebuilt = metric_from_length("s3", Arc::clone(g.structure()), l).unwrap();
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(rebuilt.distance(a, b), g.distance(a, b));
            }
        }
    }

    #[test]
    fn non_invariant_metric_rejected() {
        // The discrete metric pulled back along a non-central relabelling of S_3.
        let g = make_symmetric_hamming(3).unwrap().metric_group().unwrap();
        let t = g.parse_label("213").unwrap();
        let dist = |a: usize, b: usize| -> Rational {
            if a == b {
                int(0)
            } else if a == t || b == t {
                ratio(1, 2)
            } else {
                int(1)
            }
        };
        assert!(length_from_metric("skew", g.structure().as_ref(), dist).is_err());
    }
}
