use num_traits::{One, Signed};
use serde::Serialize;

use super::defect::{Witness, TargetElement};
use super::instance::{ApproxInstance, TargetFamily};
use crate::error::{Error, Result};
use crate::groups::{is_prime, make_cyclic_lee, ExponentVectorMatrix, Permutation};
use crate::scalar::{ratio, Rational};

/// Largest degree for the cyclic enumeration.
pub const EXHAUSTIVE_DEGREE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CyclicFamily {
    Symmetric,
    Rank,
}

/// `max(|t − 2/(p−1)|, |1 − t|)`: the worst Lee mismatch of an equilateral
/// configuration at common distance `t`.
pub fn mismatch(p: u64, t: &Rational) -> Rational {
    let shortest = ratio(2, p as i64 - 1);
    let a = (t - shortest).abs();
    let b = (Rational::one() - t).abs();
    if a > b {
        a
    } else {
        b
    }
}

/// Best exact cyclic action `γ(g^m) = σ^m`, `σ^p = 1`, of degree `n`.
#[derive(Clone, Debug, Serialize)]
pub struct CyclicSolution {
    pub p: u64,
    pub n: usize,
    pub family: CyclicFamily,
    /// Points moved by σ (symmetric) or non-trivial eigenvalues (rank).
    pub moved: usize,
    #[serde(with = "crate::scalar::rational_string")]
    pub t: Rational,
    #[serde(with = "crate::scalar::rational_string")]
    pub defect: Rational,
    pub accepted: bool,
    pub candidates: usize,
}

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::param(format!("p must be a prime >= 3, got {p}")));
    }
    Ok(())
}

/// Enumerates every conjugacy class of order-dividing-`p` actions on `n`
/// points (symmetric: by fixed-point count; rank: by number of
/// non-trivial eigenvalues) and returns the one of least metric defect
/// against the Lee metric, ties going to the fewest moved points.
pub fn solve_exhaustive_cyclic(p: u64, n: usize, family: CyclicFamily, delta: &Rational) -> Result<CyclicSolution> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::param("degree must be positive"));
    }
    if n > EXHAUSTIVE_DEGREE_CAP {
        return Err(Error::limit(format!("degree {n} exceeds the enumeration cap {EXHAUSTIVE_DEGREE_CAP}")));
    }
    let step = match family {
        CyclicFamily::Symmetric => p as usize,
        CyclicFamily::Rank => 1,
    };
    let mut best: Option<(Rational, usize, Rational)> = None;
    let mut candidates = 0;
    for moved in (0..=n).step_by(step) {
        candidates += 1;
        let t = ratio(moved as i64, n as i64);
        let d = mismatch(p, &t);
        if best.as_ref().is_none_or(|(b, _, _)| d < *b) {
            best = Some((d, moved, t));
        }
    }
    let (defect, moved, t) = best.expect("moved = 0 is always feasible");
    let accepted = defect < *delta;
    Ok(CyclicSolution { p, n, family, moved, t, defect, accepted, candidates })
}

impl CyclicSolution {
    pub fn fixed(&self) -> usize {
        self.n - self.moved
    }

    /// `moved / p` disjoint `p`-cycles on the leading points.
    pub fn sigma(&self) -> Permutation {
        let p = self.p as usize;
        let mut images: Vec<u32> = (0..self.n as u32).collect();
        for block in 0..self.moved / p {
            for i in 0..p {
                images[block * p + i] = (block * p + (i + 1) % p) as u32;
            }
        }
        Permutation::new(images).expect("disjoint cycles")
    }

    /// `diag(ω, .., ω, 1, .., 1)` with `moved` copies of `ω`.
    pub fn exponent_vector(&self) -> ExponentVectorMatrix {
        let exps = (0..self.n).map(|i| i64::from(i < self.moved)).collect();
        ExponentVectorMatrix::new(exps, self.p as u32).expect("prime modulus")
    }

    /// The instance `(ℤ(p), d_Lee)` with full fragment into this family.
    pub fn instance(&self, delta: Rational) -> Result<ApproxInstance> {
        let target = match self.family {
            CyclicFamily::Symmetric => TargetFamily::Symmetric(self.n),
            CyclicFamily::Rank => TargetFamily::GlRank(self.n),
        };
        ApproxInstance::full(make_cyclic_lee(self.p)?, delta, target)
    }

    pub fn permutation_witness(&self, delta: Rational) -> Result<Witness<Permutation>> {
        let sigma = self.sigma();
        Witness::evaluate((0..self.p).map(|m| sigma.pow(m)).collect(), &self.instance(delta)?)
    }

    pub fn rank_witness(&self, delta: Rational) -> Result<Witness<ExponentVectorMatrix>> {
        let a = self.exponent_vector();
        Witness::evaluate((0..self.p).map(|m| a.pow(m)).collect(), &self.instance(delta)?)
    }
}

/// Metric defect of `m ↦ σ^m` against `(ℤ(p), d_Lee)`, computed pair by pair.
pub fn cyclic_witness_defect(sigma: &Permutation, p: u64) -> Result<Rational> {
    check_prime(p)?;
    if !sigma.pow(p).is_identity() {
        return Err(Error::arg(format!("sigma^{p} is not the identity")));
    }
    let z = make_cyclic_lee(p)?;
    let powers: Vec<Permutation> = (0..p).map(|m| sigma.pow(m)).collect();
    let mut worst = Rational::from_integer(0.into());
    for i in 0..p as usize {
        for j in i + 1..p as usize {
            let diff = (z.distance(i, j) - powers[i].distance(&powers[j])?).abs();
            if diff > worst {
                worst = diff;
            }
        }
    }
    Ok(worst)
}
