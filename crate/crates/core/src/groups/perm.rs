use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// A permutation of `{0, .., n-1}` stored as its image array.
///
/// Labels and files use one-based one-line notation; the in-memory form is
/// zero-based. `a.compose(&b)` applies `b` first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::arg(format!("{images:?} is not a bijection on 0..{n}")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let mut zero_based = Vec::with_capacity(images.len());
        for &x in images {
            if x == 0 {
                return Err(Error::arg("one-based image array contains 0"));
            }
            zero_based.push((x - 1) as u32);
        }
        Permutation::new(zero_based)
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(images.clone()).is_ok());
        Permutation { images }
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u32).collect() }
    }

    /// The cycle `points[0] -> points[1] -> .. -> points[0]` on `n` points.
    pub fn cycle(n: usize, points: &[usize]) -> Result<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for (i, &x) in points.iter().enumerate() {
            let next = points[(i + 1) % points.len()];
            if x >= n || next >= n {
                return Err(Error::arg(format!("cycle point out of range for degree {n}")));
            }
            images[x] = next as u32;
        }
        Permutation::new(images)
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        Permutation::cycle(n, &[a, b])
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self ∘ other`.
    ///
    /// Panics on a degree mismatch.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in compose");
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn pow(&self, k: u64) -> Permutation {
        let mut result = Permutation::identity(self.degree());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        result
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &x)| i as u32 == x).count()
    }

    pub fn moved_points(&self) -> usize {
        self.degree() - self.fixed_points()
    }

    /// Number of points where `self` and `other` disagree, i.e. `|supp(self⁻¹ other)|`.
    pub fn disagreements(&self, other: &Permutation) -> Result<usize> {
        if self.degree() != other.degree() {
            return Err(Error::arg(format!(
                "degree mismatch: {} vs {}",
                self.degree(),
                other.degree()
            )));
        }
        Ok(self.images.iter().zip(&other.images).filter(|(a, b)| a != b).count())
    }

    /// Normalized Hamming length `|supp| / n`.
    pub fn hamming_length(&self) -> Rational {
        if self.degree() == 0 {
            return crate::scalar::rational_zero();
        }
        crate::scalar::ratio(self.moved_points() as i64, self.degree() as i64)
    }

    /// One-based one-line notation: `213` for degree ≤ 9, `[2 1 3 ..]` otherwise.
    pub fn one_line(&self) -> String {
        if self.degree() <= 9 {
            self.images.iter().map(|&x| char::from(b'1' + x as u8)).collect()
        } else {
            let parts: Vec<String> = self.images.iter().map(|&x| (x + 1).to_string()).collect();
            format!("[{}]", parts.join(" "))
        }
    }

    pub fn parse_one_line(text: &str) -> Result<Permutation> {
        let text = text.trim();
        let images: Vec<usize> = if let Some(inner) = text.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| Error::arg(format!("unterminated permutation {text:?}")))?;
            inner
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| Error::arg(format!("bad image {s:?}"))))
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::arg(format!("bad permutation label {text:?}")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::from_one_based(&images)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.one_line())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.one_line())
    }
}

/// Lexicographic rank of a permutation among all permutations of its degree.
pub(crate) fn lehmer_rank(p: &Permutation) -> usize {
    let n = p.degree();
    let mut rank = 0usize;
    for i in 0..n {
        let smaller = p.images[i + 1..].iter().filter(|&&x| x < p.images[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

pub(crate) fn lehmer_unrank(mut rank: usize, n: usize) -> Permutation {
    let mut digits = vec![0usize; n];
    for i in (0..n).rev() {
        let base = n - i;
        digits[i] = rank % base;
        rank /= base;
    }
    let mut pool: Vec<u32> = (0..n as u32).collect();
    let images = digits.into_iter().map(|d| pool.remove(d)).collect();
    Permutation { images }
}

pub(crate) fn factorial(n: usize) -> Option<usize> {
    (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_perm(max_n: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_n).prop_flat_map(|n| {
            Just((0..n as u32).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|images| Permutation::new(images).unwrap())
        })
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3]).is_err());
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let a = Permutation::cycle(3, &[0, 1]).unwrap();
        let b = Permutation::cycle(3, &[1, 2]).unwrap();
        // b sends 1 -> 2, a fixes 2
        assert_eq!(a.compose(&b).apply(1), 2);
        assert_eq!(b.compose(&a).apply(0), 2);
    }

    #[test]
    fn rank_round_trip_small() {
        for n in 0..=5 {
            let total = factorial(n).unwrap();
            for r in 0..total {
                let p = lehmer_unrank(r, n);
                assert_eq!(lehmer_rank(&p), r);
            }
        }
        assert!(lehmer_unrank(0, 4).is_identity());
    }

    #[test]
    fn one_line_labels() {
        let p = Permutation::cycle(3, &[0, 1]).unwrap();
        assert_eq!(p.one_line(), "213");
        assert_eq!(Permutation::parse_one_line("213").unwrap(), p);
        let big = Permutation::cycle(10, &[0, 9]).unwrap();
        assert_eq!(Permutation::parse_one_line(&big.one_line()).unwrap(), big);
    }

    proptest! {
        #[test]
        fn inverse_cancels(p in arb_perm(12)) {
            prop_assert!(p.compose(&p.inverse()).is_identity());
            prop_assert!(p.inverse().compose(&p).is_identity());
        }

        #[test]
        fn composition_is_associative(
            (a, b, c) in (1usize..10).prop_flat_map(|n| {
                let one = Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle();
                (one.clone(), one.clone(), one)
            })
        ) {
            let (a, b, c) = (
                Permutation::new(a).unwrap(),
                Permutation::new(b).unwrap(),
                Permutation::new(c).unwrap(),
            );
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }

        #[test]
        fn rank_is_bijective(p in arb_perm(9)) {
            prop_assert_eq!(lehmer_unrank(lehmer_rank(&p), p.degree()), p);
        }
    }
}
