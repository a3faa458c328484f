use std::sync::Arc;

use super::perm::{factorial, lehmer_rank, lehmer_unrank};
use super::{FiniteMetricGroup, GroupStructure, Permutation, SYMMETRIC_DEGREE_CAP, TABLE_CAP};
use crate::error::{Error, Result};
use crate::scalar::{ratio, Rational};

/// `d_H(a, b) = 1 - |Fix(a⁻¹ b)| / n`.
pub fn hamming_distance(a: &Permutation, b: &Permutation) -> Result<Rational> {
    let moved = a.disagreements(b)?;
    if a.degree() == 0 {
        return Ok(ratio(0, 1));
    }
    Ok(ratio(moved as i64, a.degree() as i64))
}

/// S_n indexed by lexicographic rank; the identity has index 0.
#[derive(Debug, Clone)]
pub struct SymmetricStructure {
    degree: usize,
    order: usize,
    elements: Option<Arc<[Permutation]>>,
}

impl SymmetricStructure {
    pub fn new(degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::param("symmetric group of degree 0"));
        }
        if degree > SYMMETRIC_DEGREE_CAP {
            return Err(Error::limit(format!(
                "S_{degree} exceeds the carrier materialization cap (degree {SYMMETRIC_DEGREE_CAP})"
            )));
        }
        let order = factorial(degree).expect("degree is capped");
        let elements = (order <= TABLE_CAP)
            .then(|| (0..order).map(|r| lehmer_unrank(r, degree)).collect::<Vec<_>>().into());
        Ok(SymmetricStructure { degree, order, elements })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn element(&self, index: usize) -> Permutation {
        match &self.elements {
            Some(all) => all[index].clone(),
            None => lehmer_unrank(index, self.degree),
        }
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        (p.degree() == self.degree).then(|| lehmer_rank(p))
    }
}

impl GroupStructure for SymmetricStructure {
    fn order(&self) -> usize {
        self.order
    }

    fn identity(&self) -> usize {
        0
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        match &self.elements {
            Some(all) => lehmer_rank(&all[a].compose(&all[b])),
            None => lehmer_rank(&self.element(a).compose(&self.element(b))),
        }
    }

    fn inv(&self, a: usize) -> usize {
        lehmer_rank(&self.element(a).inverse())
    }

    fn label(&self, a: usize) -> String {
        self.element(a).one_line()
    }

    fn parse_label(&self, text: &str) -> Option<usize> {
        let p = Permutation::parse_one_line(text).ok()?;
        self.index_of(&p)
    }

    fn describe(&self) -> String {
        format!("S({})", self.degree)
    }
}

/// `(S_n, d_H)` with element-wise access at any degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetricHamming {
    degree: usize,
}

impl SymmetricHamming {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn length(&self, p: &Permutation) -> Result<Rational> {
        self.check(p)?;
        Ok(p.hamming_length())
    }

    pub fn distance(&self, a: &Permutation, b: &Permutation) -> Result<Rational> {
        self.check(a)?;
        hamming_distance(a, b)
    }

    pub fn is_materializable(&self) -> bool {
        self.degree <= SYMMETRIC_DEGREE_CAP
    }

    /// The materialized carrier; fails with a resource limit above degree 8.
    pub fn metric_group(&self) -> Result<FiniteMetricGroup> {
        let structure = Arc::new(SymmetricStructure::new(self.degree)?);
        let s = structure.clone();
        Ok(FiniteMetricGroup::from_length_fn(
            format!("symmetric:n={}:metric=hamming", self.degree),
            structure,
            move |g| s.element(g).hamming_length(),
        ))
    }

    fn check(&self, p: &Permutation) -> Result<()> {
        if p.degree() != self.degree {
            return Err(Error::arg(format!(
                "permutation of degree {} in S_{}",
                p.degree(),
                self.degree
            )));
        }
        Ok(())
    }
}

pub fn make_symmetric_hamming(n: usize) -> Result<SymmetricHamming> {
    if n == 0 {
        return Err(Error::param("symmetric group needs degree n >= 1"));
    }
    Ok(SymmetricHamming { degree: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational_zero};

    #[test]
    fn transposition_distance_in_s3() {
        let id = Permutation::identity(3);
        let t = Permutation::transposition(3, 0, 1).unwrap();
        assert_eq!(hamming_distance(&id, &id).unwrap(), rational_zero());
        assert_eq!(hamming_distance(&id, &t).unwrap(), ratio(2, 3));
    }

    #[test]
    fn two_disjoint_transpositions_in_s6() {
        let p = Permutation::new(vec![1, 0, 3, 2, 4, 5]).unwrap();
        assert_eq!(hamming_distance(&Permutation::identity(6), &p).unwrap(), ratio(2, 3));
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let r = hamming_distance(&Permutation::identity(3), &Permutation::identity(4));
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn powers_of_a_thirteen_cycle_are_at_distance_one() {
        let sigma = Permutation::cycle(13, &(0..13).collect::<Vec<_>>()).unwrap();
        for i in 0..13u64 {
            for j in 0..13u64 {
                if i != j {
                    let d = hamming_distance(&sigma.pow(i), &sigma.pow(j)).unwrap();
                    assert_eq!(d, int(1));
                }
            }
        }
    }

    #[test]
    fn degree_zero_rejected_and_large_degree_is_lazy() {
        assert!(matches!(make_symmetric_hamming(0), Err(Error::InvalidParameter(_))));
        let big = make_symmetric_hamming(13).unwrap();
        assert!(!big.is_materializable());
        assert!(matches!(big.metric_group(), Err(Error::ResourceLimit(_))));
        let id = Permutation::identity(13);
        assert_eq!(big.length(&id).unwrap(), rational_zero());
    }

    #[test]
    fn materialized_s3_matches_direct_hamming() {
        let g = make_symmetric_hamming(3).unwrap().metric_group().unwrap();
        assert_eq!(g.order(), 6);
        let s = SymmetricStructure::new(3).unwrap();
        for a in g.elements() {
            for b in g.elements() {
                let direct = hamming_distance(&s.element(a), &s.element(b)).unwrap();
                assert_eq!(g.distance(a, b), direct);
            }
        }
    }

    #[test]
    fn s8_is_materialized_lazily() {
        let g = make_symmetric_hamming(8).unwrap().metric_group().unwrap();
        assert_eq!(g.order(), 40_320);
        assert!(!g.is_memoized());
        let last = g.order() - 1;
        assert_eq!(g.label(last), "87654321");
        assert_eq!(g.mul(last, last), g.identity());
    }
}
