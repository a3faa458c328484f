//! Lower bounds on the best metric defect of `(ℤ(p), d_Lee)` in symmetric,
//! rank and Hilbert–Schmidt targets.

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::groups::{hamming_distance, is_prime, rank_distance, ExponentVectorMatrix, Permutation};
use crate::report::ReportNumber;
use crate::scalar::{format_rational, int, ratio, Rational};
use crate::solver::{mismatch, phase_distribution_optimize, phase_length, CyclicFamily, PhaseOptimum};

/// Numeric tolerance attached to Hilbert–Schmidt floors.
pub const HS_FLOAT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Symmetric,
    #[serde(rename = "gl-rank")]
    Rank,
    Hs,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Symmetric, Family::Rank, Family::Hs];

    pub fn parse_list(text: &str) -> Result<Vec<Family>> {
        match text {
            "all" => Ok(Self::ALL.to_vec()),
            "symmetric" => Ok(vec![Family::Symmetric]),
            "rank" | "gl-rank" => Ok(vec![Family::Rank]),
            "hs" | "unitary" => Ok(vec![Family::Hs]),
            other => Err(Error::arg(format!("family {other:?} is not symmetric, rank, hs or all"))),
        }
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::param(format!("p must be a prime >= 3, got {p}")));
    }
    Ok(())
}

/// Common Hamming distance `(n − c)/n` between distinct powers of an order-`p` permutation.
pub fn equilateral_check(sigma: &Permutation, p: u64) -> Result<Rational> {
    check_prime(p)?;
    if sigma.is_identity() || !sigma.pow(p).is_identity() {
        return Err(Error::arg(format!("sigma does not have order {p}")));
    }
    let n = sigma.degree();
    let t = ratio(sigma.moved_points() as i64, n as i64);
    let powers: Vec<Permutation> = (0..p).map(|m| sigma.pow(m)).collect();
    for i in 0..powers.len() {
        for j in i + 1..powers.len() {
            let d = hamming_distance(&powers[i], &powers[j])?;
            if d != t {
                return Err(Error::Evaluation(format!("d_H(sigma^{i}, sigma^{j}) = {} differs from {}", format_rational(&d), format_rational(&t))));
            }
        }
    }
    Ok(t)
}

/// Common rank distance `1 − μ₀` between distinct powers of a diagonal order-`p` matrix.
pub fn rank_equilateral_check(a: &ExponentVectorMatrix) -> Result<Rational> {
    let p = u64::from(a.modulus());
    let t = a.rank_length();
    if t.is_zero() {
        return Err(Error::arg("the identity has no non-trivial powers"));
    }
    let powers: Vec<ExponentVectorMatrix> = (0..p).map(|m| a.pow(m)).collect();
    for i in 0..powers.len() {
        for j in i + 1..powers.len() {
            if rank_distance(&powers[i], &powers[j])? != t {
                return Err(Error::Evaluation(format!("rank distance of powers {i}, {j} is not constant")));
            }
        }
    }
    Ok(t)
}

/// `(p − 3) / (2(p − 1))`.
pub fn exact_mismatch_floor(p: u64) -> Result<Rational> {
    check_prime(p)?;
    Ok(ratio(p as i64 - 3, 2 * (p as i64 - 1)))
}

/// Accounting constant of the transfer bound, `p² + 2p − 4`.
pub fn kappa(p: u64) -> u64 {
    p * p + 2 * p - 4
}

/// `max(0, floor − κ(p) δ)`: the least metric defect of any map on all of
/// `ℤ(p)` whose hom and identity defects are at most `δ`.
pub fn transfer_bound(p: u64, delta: &Rational, family: CyclicFamily) -> Result<Rational> {
    // Both families share the constant.
    let _ = family;
    if delta.is_negative() {
        return Err(Error::param("delta must be non-negative"));
    }
    let residual = exact_mismatch_floor(p)? - Rational::from_integer(kappa(p).into()) * delta;
    Ok(if residual.is_negative() { Rational::zero() } else { residual })
}

#[derive(Clone, Debug, Serialize)]
pub struct BreakpointValue {
    #[serde(with = "crate::scalar::rational_string")]
    pub t: Rational,
    #[serde(with = "crate::scalar::rational_string")]
    pub value: Rational,
}

/// The mismatch `φ(t) = max(|t − a|, |1 − t|)`, `a = 2/(p−1)`, is convex and
/// piecewise linear with breakpoints `a` and `(1 + a)/2`; its minimum over
/// `[0, 1]` is therefore the least value at `{0, a, (1 + a)/2, 1}`.
#[derive(Clone, Debug, Serialize)]
pub struct SymbolicProof {
    #[serde(with = "crate::scalar::rational_string")]
    pub shortest_lee_length: Rational,
    pub breakpoints: Vec<BreakpointValue>,
    #[serde(with = "crate::scalar::rational_string")]
    pub minimizer: Rational,
    #[serde(with = "crate::scalar::rational_string")]
    pub minimum: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationRow {
    pub n: usize,
    pub moved: usize,
    #[serde(with = "crate::scalar::rational_string")]
    pub t: Rational,
    #[serde(with = "crate::scalar::rational_string")]
    pub defect: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct FloorProof {
    pub family: CyclicFamily,
    pub p: u64,
    #[serde(with = "crate::scalar::rational_string")]
    pub floor: Rational,
    pub symbolic: SymbolicProof,
    pub n_max: usize,
    /// Best feasible common distance for each degree `1..=n_max`.
    pub enumeration: Vec<EnumerationRow>,
    #[serde(with = "crate::scalar::rational_string")]
    pub enumeration_minimum: Rational,
    /// Degrees at which the floor is attained exactly.
    pub attained_at: Vec<usize>,
}

fn symbolic_proof(p: u64) -> Result<SymbolicProof> {
    let floor = exact_mismatch_floor(p)?;
    let a = ratio(2, p as i64 - 1);
    let t_star = (Rational::one() + &a) / int(2);
    let mut breakpoints = Vec::new();
    for t in [Rational::zero(), a.clone(), t_star.clone(), Rational::one()] {
        let value = mismatch(p, &t);
        breakpoints.push(BreakpointValue { t, value });
    }
    let minimum = breakpoints.iter().map(|b| b.value.clone()).min().expect("four breakpoints");
    if minimum != floor || mismatch(p, &t_star) != floor {
        return Err(Error::Evaluation(format!("symbolic floor check failed at p = {p}")));
    }
    Ok(SymbolicProof { shortest_lee_length: a, breakpoints, minimizer: t_star, minimum })
}

/// The floor together with its symbolic check and the enumeration of every
/// feasible common distance for degrees up to `n_max`.
pub fn floor_proof(p: u64, family: CyclicFamily, n_max: usize) -> Result<FloorProof> {
    let floor = exact_mismatch_floor(p)?;
    let symbolic = symbolic_proof(p)?;
    if n_max == 0 {
        return Err(Error::param("n_max must be positive"));
    }
    let step = match family {
        CyclicFamily::Symmetric => p as usize,
        CyclicFamily::Rank => 1,
    };
    let mut enumeration = Vec::with_capacity(n_max);
    let mut attained_at = Vec::new();
    for n in 1..=n_max {
        let mut best: Option<EnumerationRow> = None;
        for moved in (0..=n).step_by(step) {
            let t = ratio(moved as i64, n as i64);
            let defect = mismatch(p, &t);
            if defect < floor {
                return Err(Error::Evaluation(format!(
                    "degree {n}, {moved} moved points: defect {} below the floor",
                    format_rational(&defect)
                )));
            }
            if best.as_ref().is_none_or(|b| defect < b.defect) {
                best = Some(EnumerationRow { n, moved, t, defect });
            }
        }
        let row = best.expect("moved = 0 is feasible");
        if row.defect == floor {
            attained_at.push(n);
        }
        enumeration.push(row);
    }
    let enumeration_minimum = enumeration.iter().map(|r| r.defect.clone()).min().expect("n_max >= 1");
    Ok(FloorProof { family, p, floor, symbolic, n_max, enumeration, enumeration_minimum, attained_at })
}

/// The Hilbert–Schmidt floor from the phase-distribution search.
pub fn hs_mismatch_floor(p: u64, resolution: u32, seed: u64) -> Result<PhaseOptimum> {
    phase_distribution_optimize(p, resolution, seed)
}

/// `(Σ_{j=1}^{h} ½d_HS(a^{j−1}, a^j), ½d_HS(a^h, 1))` with `h = (p−1)/2`; by
/// invariance the sum is `h · ½d_HS(a, 1)`.
pub fn endpoint_gap(p: u64, mu: &[f64]) -> (f64, f64) {
    let h = (p as usize - 1) / 2;
    (h as f64 * phase_length(p, mu, 1), phase_length(p, mu, h))
}

fn random_order_p_permutation(p: usize, max_n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let n = rng.gen_range(p..=max_n.max(p));
    let cycles = rng.gen_range(1..=n / p);
    let mut points: Vec<usize> = (0..n).collect();
    points.shuffle(rng);
    let mut images: Vec<u32> = (0..n as u32).collect();
    for c in 0..cycles {
        let block = &points[c * p..(c + 1) * p];
        for i in 0..p {
            images[block[i]] = block[(i + 1) % p] as u32;
        }
    }
    Permutation::new(images).expect("disjoint cycles")
}

fn random_exponent_vector(p: u32, rng: &mut ChaCha8Rng) -> ExponentVectorMatrix {
    let n = rng.gen_range(1..=40);
    let mut exps: Vec<i64> = (0..n).map(|_| rng.gen_range(0..i64::from(p))).collect();
    if exps.iter().all(|&e| e == 0) {
        exps[0] = 1;
    }
    ExponentVectorMatrix::new(exps, p).expect("prime modulus")
}

/// Checks the equilateral lemma on `samples` random order-`p` permutations of degree ≤ 60.
pub fn sample_equilateral(p: u64, samples: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let sigma = random_order_p_permutation(p as usize, 60, &mut rng);
        equilateral_check(&sigma, p)?;
    }
    Ok(samples)
}

/// Checks rank equilaterality on `samples` random exponent vectors.
pub fn sample_rank_equilateral(p: u64, samples: usize, seed: u64) -> Result<usize> {
    check_prime(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        rank_equilateral_check(&random_exponent_vector(p as u32, &mut rng))?;
    }
    Ok(samples)
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferData {
    pub kappa: u64,
    pub formula: String,
    pub fragment: String,
    #[serde(with = "crate::scalar::rational_string")]
    pub delta_max: Rational,
    pub samples: Vec<BreakpointValue>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub family: Family,
    pub p: u64,
    /// Degrees covered by the enumeration; absent when the floor holds in every dimension.
    pub n_range: Option<[usize; 2]>,
    pub floor: ReportNumber,
    pub method: String,
    pub obstruction: bool,
    pub proof_data: serde_json::Value,
    pub transfer: Option<TransferData>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateBundle {
    pub p: u64,
    pub obstruction: bool,
    pub certificates: Vec<Certificate>,
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub n_max: usize,
    pub delta_max: Rational,
    pub resolution: u32,
    pub seed: u64,
    pub samples: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { n_max: 200, delta_max: ratio(1, 100), resolution: 100, seed: 0, samples: 200 }
    }
}

fn transfer_data(p: u64, family: CyclicFamily, delta_max: &Rational) -> Result<TransferData> {
    let samples = (0..=10)
        .map(|i| {
            let t = delta_max * ratio(i, 10);
            transfer_bound(p, &t, family).map(|value| BreakpointValue { t, value })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransferData {
        kappa: kappa(p),
        formula: "max(0, floor - kappa * delta), kappa = p^2 + 2p - 4".into(),
        fragment: format!("all of Z({p})"),
        delta_max: delta_max.clone(),
        samples,
    })
}

fn exact_certificate(p: u64, family: Family, options: &CertifyOptions) -> Result<Certificate> {
    let cyclic = match family {
        Family::Symmetric => CyclicFamily::Symmetric,
        Family::Rank => CyclicFamily::Rank,
        Family::Hs => unreachable!("exact floors are symmetric or rank"),
    };
    let proof = floor_proof(p, cyclic, options.n_max)?;
    let (method, lemma) = match family {
        Family::Symmetric => (
            "equilateral powers: every order-p permutation has all distinct powers at Hamming distance (n-c)/n; \
             minimum of max(|t - 2/(p-1)|, |1 - t|) over t",
            json!({
                "statement": "d_H(sigma^i, sigma^j) = (n - c)/n for i != j mod p",
                "random_samples": sample_equilateral(p, options.samples, options.seed)?,
            }),
        ),
        _ => (
            "rank reduction: a diagonal order-p matrix has all distinct powers at rank distance 1 - mu_0; \
             minimum of max(|t - 2/(p-1)|, |1 - t|) over t",
            json!({
                "statement": "rho(a^i, a^j) = 1 - mu_0 for i != j mod p, where mu_0 is the share of eigenvalue 1",
                "random_samples": sample_rank_equilateral(p, options.samples, options.seed)?,
            }),
        ),
    };
    let obstruction = proof.floor.is_positive();
    Ok(Certificate {
        family,
        p,
        n_range: Some([1, options.n_max]),
        floor: ReportNumber::exact(&proof.floor),
        method: method.into(),
        obstruction,
        proof_data: json!({ "lemma": lemma, "proof": proof }),
        transfer: Some(transfer_data(p, cyclic, &options.delta_max)?),
    })
}

fn hs_certificate(p: u64, options: &CertifyOptions) -> Result<Certificate> {
    let opt = hs_mismatch_floor(p, options.resolution, options.seed)?;
    let (grid_sum, grid_end) = endpoint_gap(p, &opt.grid.mu);
    let (ref_sum, ref_end) = endpoint_gap(p, &opt.refined.mu);
    Ok(Certificate {
        family: Family::Hs,
        p,
        n_range: None,
        floor: ReportNumber::numeric(opt.grid_floor, HS_FLOAT_TOLERANCE),
        method: format!(
            "exact minimum over the simplex grid of resolution {} by branch and bound, \
             then pattern-search refinement",
            options.resolution
        ),
        obstruction: opt.grid_floor > 0.0,
        proof_data: json!({
            "optimum": opt,
            "endpoint_check": {
                "grid": { "sum": grid_sum, "endpoint": grid_end, "holds": grid_sum >= grid_end },
                "refined": { "sum": ref_sum, "endpoint": ref_end, "holds": ref_sum >= ref_end },
            },
        }),
        transfer: None,
    })
}

/// Bundles the requested floors for `p` into certificates.
pub fn certify(p: u64, families: &[Family], options: &CertifyOptions) -> Result<CertificateBundle> {
    check_prime(p)?;
    let certificates = families
        .iter()
        .map(|&f| match f {
            Family::Hs => hs_certificate(p, options),
            _ => exact_certificate(p, f, options),
        })
        .collect::<Result<Vec<_>>>()?;
    let obstruction = certificates.iter().all(|c| c.obstruction);
    Ok(CertificateBundle { p, obstruction, certificates })
}

/// All three families with default options and the given range parameters.
pub fn certify_not_sofic(p: u64, n_max: usize, delta_max: Rational) -> Result<CertificateBundle> {
    let options = CertifyOptions { n_max, delta_max, ..CertifyOptions::default() };
    certify(p, &Family::ALL, &options)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilateral_values() {
        let c13 = Permutation::cycle(13, &(0..13).collect::<Vec<_>>()).unwrap();
        assert_eq!(equilateral_check(&c13, 13).unwrap(), int(1));
        let half = Permutation::cycle(26, &(0..13).collect::<Vec<_>>()).unwrap();
        assert_eq!(equilateral_check(&half, 13).unwrap(), ratio(1, 2));
        assert!(matches!(equilateral_check(&Permutation::identity(13), 13), Err(Error::InvalidArgument(_))));
        assert!(equilateral_check(&Permutation::transposition(4, 0, 1).unwrap(), 13).is_err());
    }

    #[test]
    fn floors() {
        assert_eq!(exact_mismatch_floor(13).unwrap(), ratio(5, 12));
        assert_eq!(exact_mismatch_floor(5).unwrap(), ratio(1, 4));
        assert_eq!(exact_mismatch_floor(3).unwrap(), int(0));
        assert!(exact_mismatch_floor(9).is_err());
    }

    #[test]
    fn floor_proof_attains_at_156() {
        let proof = floor_proof(13, CyclicFamily::Symmetric, 200).unwrap();
        assert_eq!(proof.enumeration_minimum, ratio(5, 12));
        assert_eq!(proof.attained_at, vec![156]);
        let rank = floor_proof(13, CyclicFamily::Rank, 200).unwrap();
        assert_eq!(rank.enumeration_minimum, ratio(5, 12));
        assert_eq!(rank.attained_at[0], 12);
    }

    #[test]
    fn floor_inequality_on_fine_grid() {
        for p in [3u64, 5, 7, 13, 31] {
            let floor = exact_mismatch_floor(p).unwrap();
            let n = 10_000;
            for k in 0..=n {
                assert!(mismatch(p, &ratio(k, n)) >= floor);
            }
            let t_star = ratio(p as i64 + 1, 2 * (p as i64 - 1));
            assert_eq!(mismatch(p, &t_star), floor);
        }
    }

    #[test]
    fn transfer_bound_shape() {
        let f = CyclicFamily::Symmetric;
        assert_eq!(transfer_bound(13, &int(0), f).unwrap(), ratio(5, 12));
        assert_eq!(kappa(13), 191);
        assert_eq!(transfer_bound(13, &ratio(1, 1000), f).unwrap(), ratio(5, 12) - ratio(191, 1000));
        assert!(transfer_bound(13, &ratio(1, 2000), f).unwrap() >= transfer_bound(13, &ratio(1, 1000), f).unwrap());
        assert_eq!(transfer_bound(13, &ratio(1, 10), f).unwrap(), int(0));
        assert!(transfer_bound(13, &ratio(-1, 10), f).is_err());
    }

    #[test]
    fn certificate_flags() {
        let bundle = certify_not_sofic(5, 40, ratio(1, 100)).unwrap();
        assert!(bundle.obstruction);
        assert_eq!(bundle.certificates.len(), 3);
        assert_eq!(bundle.certificates[0].floor, ReportNumber::exact(&ratio(1, 4)));
        let degenerate = certify(3, &[Family::Symmetric, Family::Rank], &CertifyOptions::default()).unwrap();
        assert!(!degenerate.obstruction);
        assert_eq!(degenerate.certificates[0].floor, ReportNumber::exact(&int(0)));
    }

    #[test]
    fn endpoint_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let mut mu: Vec<f64> = (0..7).map(|_| rng.gen_range(0.0..1.0)).collect();
            let s: f64 = mu.iter().sum();
            mu.iter_mut().for_each(|x| *x /= s);
            let (sum, end) = endpoint_gap(13, &mu);
            assert!(sum + 1e-12 >= end);
        }
    }
}
