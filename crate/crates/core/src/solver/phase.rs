use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::is_prime;
use crate::parallel;

/// Slack on the pruning test so that rounding never discards a grid minimizer.
const PRUNE_SLACK: f64 = 1e-12;

/// Eigenvalue distribution of a diagonal order-`p` unitary, folded: entry `k`
/// (for `0 ≤ k ≤ (p−1)/2`) is the mass on `ω^k` and `ω^{−k}` together.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseDistribution {
    pub p: u64,
    pub mu: Vec<f64>,
}

impl PhaseDistribution {
    pub fn new(p: u64, mu: Vec<f64>) -> Result<Self> {
        check_prime(p)?;
        if mu.len() != half(p) + 1 {
            return Err(Error::param(format!("expected {} folded masses, got {}", half(p) + 1, mu.len())));
        }
        let total: f64 = mu.iter().sum();
        if mu.iter().any(|&x| x < 0.0) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::param("masses must be non-negative and sum to 1"));
        }
        Ok(PhaseDistribution { p, mu })
    }

    pub fn from_counts(p: u64, counts: &[u32], resolution: u32) -> Self {
        PhaseDistribution { p, mu: counts.iter().map(|&c| f64::from(c) / f64::from(resolution)).collect() }
    }

    /// Masses on `ω^0 .. ω^{p−1}`, splitting folded mass evenly.
    pub fn unfolded(&self) -> Vec<f64> {
        let p = self.p as usize;
        let mut out = vec![0.0; p];
        out[0] = self.mu[0];
        for k in 1..self.mu.len() {
            out[k] = self.mu[k] / 2.0;
            out[p - k] = self.mu[k] / 2.0;
        }
        out
    }

    pub fn objective(&self) -> f64 {
        phase_objective(self.p, &self.mu)
    }
}

fn half(p: u64) -> usize {
    (p as usize - 1) / 2
}

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::param(format!("p must be a prime >= 3, got {p}")));
    }
    Ok(())
}

fn weight(p: u64, k: usize, m: usize) -> f64 {
    2.0 * (1.0 - (2.0 * PI * (k * m) as f64 / p as f64).cos())
}

/// `½ d_HS(a^m, 1) = ½ √(Σ_k μ_k · 2(1 − cos(2πkm/p)))` for folded `μ`.
pub fn phase_length(p: u64, mu: &[f64], m: usize) -> f64 {
    let s: f64 = mu.iter().enumerate().map(|(k, &x)| x * weight(p, k, m)).sum();
    0.5 * s.max(0.0).sqrt()
}

/// `max_{1≤m≤(p−1)/2} |l_Lee(m) − ½ d_HS(a^m, 1)|`.
///
/// Both terms are symmetric under `m ↦ p − m`, so half the range suffices.
pub fn phase_objective(p: u64, mu: &[f64]) -> f64 {
    (1..=half(p))
        .map(|m| (2.0 * m as f64 / (p - 1) as f64 - phase_length(p, mu, m)).abs())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseOptimum {
    pub p: u64,
    pub resolution: u32,
    /// Grid minimizer in units of `1/resolution`.
    pub grid_counts: Vec<u32>,
    pub grid: PhaseDistribution,
    /// Exact minimum of the objective over the grid.
    pub grid_floor: f64,
    pub refined: PhaseDistribution,
    /// Objective after continuous refinement; never above `grid_floor`.
    pub refined_floor: f64,
    /// ℓ1 radius within which every distribution has a grid point.
    pub covering_radius: f64,
    /// Largest change of the objective across one covering radius.
    pub covering_term: f64,
    /// `max(0, grid_floor − covering_term)`, a lower bound on the true minimum.
    pub certified_lower_bound: f64,
    /// Search-tree nodes visited. Not serialized.
    #[serde(skip)]
    pub nodes: u64,
}

struct Grid {
    resolution: u32,
    lee: Vec<f64>,
    /// `w[k][m−1]`.
    w: Vec<Vec<f64>>,
    /// Suffix minima and maxima of `w` over `k ≥ j`.
    suffix_min: Vec<Vec<f64>>,
    suffix_max: Vec<Vec<f64>>,
    best: AtomicU64,
    nodes: AtomicU64,
}

struct Local {
    value: f64,
    counts: Vec<u32>,
}

fn better(a: (f64, &[u32]), b: (f64, &[u32])) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

impl Grid {
    fn new(p: u64, resolution: u32) -> Self {
        let h = half(p);
        let d = h + 1;
        let w: Vec<Vec<f64>> = (0..d).map(|k| (1..=h).map(|m| weight(p, k, m)).collect()).collect();
        let mut suffix_min = vec![vec![f64::INFINITY; h]; d + 1];
        let mut suffix_max = vec![vec![f64::NEG_INFINITY; h]; d + 1];
        for j in (0..d).rev() {
            for m in 0..h {
                suffix_min[j][m] = suffix_min[j + 1][m].min(w[j][m]);
                suffix_max[j][m] = suffix_max[j + 1][m].max(w[j][m]);
            }
        }
        Grid {
            resolution,
            lee: (1..=h).map(|m| 2.0 * m as f64 / (p - 1) as f64).collect(),
            w,
            suffix_min,
            suffix_max,
            best: AtomicU64::new(f64::INFINITY.to_bits()),
            nodes: AtomicU64::new(0),
        }
    }

    fn best(&self) -> f64 {
        f64::from_bits(self.best.load(Ordering::Relaxed))
    }

    fn offer(&self, value: f64) {
        let mut current = self.best.load(Ordering::Relaxed);
        while value < f64::from_bits(current) {
            match self.best.compare_exchange_weak(current, value.to_bits(), Ordering::Relaxed, Ordering::Relaxed) {
                Ok(_) => break,
                Err(actual) => current = actual,
            }
        }
    }

    fn value(&self, sums: &[f64]) -> f64 {
        let r = f64::from(self.resolution);
        self.lee
            .iter()
            .zip(sums)
            .map(|(&l, &s)| (l - 0.5 * (s / r).max(0.0).sqrt()).abs())
            .fold(0.0, f64::max)
    }

    /// Lower bound on the objective over all completions of a partial point.
    fn bound(&self, sums: &[f64], next: usize, remaining: u32) -> f64 {
        let r = f64::from(self.resolution);
        let rem = f64::from(remaining);
        let mut worst: f64 = 0.0;
        for m in 0..self.lee.len() {
            let lo = 0.5 * ((sums[m] + rem * self.suffix_min[next][m]) / r).max(0.0).sqrt();
            let hi = 0.5 * ((sums[m] + rem * self.suffix_max[next][m]) / r).max(0.0).sqrt();
            let l = self.lee[m];
            let gap = if l < lo {
                lo - l
            } else if l > hi {
                l - hi
            } else {
                0.0
            };
            worst = worst.max(gap);
        }
        worst
    }

    fn search(&self, j: usize, remaining: u32, sums: &mut Vec<f64>, counts: &mut Vec<u32>, local: &mut Local) {
        self.nodes.fetch_add(1, Ordering::Relaxed);
        let d = self.w.len();
        if j + 1 == d {
            counts[j] = remaining;
            for (s, w) in sums.iter_mut().zip(&self.w[j]) {
                *s += f64::from(remaining) * w;
            }
            let v = self.value(sums);
            if better((v, counts), (local.value, &local.counts)) {
                local.value = v;
                local.counts.clone_from(counts);
                self.offer(v);
            }
            for (s, w) in sums.iter_mut().zip(&self.w[j]) {
                *s -= f64::from(remaining) * w;
            }
            return;
        }
        let saved = sums.clone();
        for c in 0..=remaining {
            for (m, s) in sums.iter_mut().enumerate() {
                *s = saved[m] + f64::from(c) * self.w[j][m];
            }
            let rest = remaining - c;
            if self.bound(sums, j + 1, rest) > self.best().min(local.value) + PRUNE_SLACK {
                continue;
            }
            counts[j] = c;
            self.search(j + 1, rest, sums, counts, local);
        }
        sums.clone_from(&saved);
    }

    /// Exact grid minimum, ties to the lexicographically smallest counts.
    fn minimize(&self) -> (f64, Vec<u32>) {
        let d = self.w.len();
        let h = self.lee.len();
        let r = self.resolution;
        let results: Vec<Local> = parallel::pool().install(|| {
            (0..=r)
                .into_par_iter()
                .map(|c0| {
                    let mut local = Local { value: f64::INFINITY, counts: vec![u32::MAX; d] };
                    let mut counts = vec![0u32; d];
                    counts[0] = c0;
                    let mut sums: Vec<f64> = (0..h).map(|m| f64::from(c0) * self.w[0][m]).collect();
                    if d == 1 {
                        local.value = self.value(&sums);
                        local.counts = counts;
                    } else if self.bound(&sums, 1, r - c0) <= self.best() + PRUNE_SLACK {
                        self.search(1, r - c0, &mut sums, &mut counts, &mut local);
                    }
                    local
                })
                .collect()
        });
        let mut best = Local { value: f64::INFINITY, counts: vec![u32::MAX; d] };
        for l in results {
            if better((l.value, &l.counts), (best.value, &best.counts)) {
                best = l;
            }
        }
        (best.value, best.counts)
    }
}

/// Pattern search over pairwise mass transfers with a halving step.
fn refine(p: u64, start: &[f64], step: f64) -> (f64, Vec<f64>) {
    let d = start.len();
    let mut mu = start.to_vec();
    let mut current = phase_objective(p, &mu);
    let mut step = step;
    let mut evaluations = 0usize;
    while step > 1e-13 && evaluations < 2_000_000 {
        let mut improved = false;
        for i in 0..d {
            for j in 0..d {
                if i == j || mu[i] <= 0.0 {
                    continue;
                }
                let t = step.min(mu[i]);
                mu[i] -= t;
                mu[j] += t;
                evaluations += 1;
                let v = phase_objective(p, &mu);
                if v < current {
                    current = v;
                    improved = true;
                } else {
                    mu[i] += t;
                    mu[j] -= t;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    (current, mu)
}

fn random_simplex_point(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut x: Vec<f64> = (0..d).map(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln()).collect();
    let total: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= total);
    x
}

/// Minimizes the phase objective over the simplex.
///
/// The grid `{c / resolution}` is searched exhaustively by branch and bound,
/// so `grid_floor` is the exact grid minimum. The minimizer and a few seeded
/// random starts are then refined continuously.
pub fn phase_distribution_optimize(p: u64, resolution: u32, seed: u64) -> Result<PhaseOptimum> {
    check_prime(p)?;
    if resolution < 10 {
        return Err(Error::param(format!("grid resolution must be at least 10, got {resolution}")));
    }
    if p > 199 {
        return Err(Error::limit(format!("phase grid search supports p <= 199, got {p}")));
    }
    let grid = Grid::new(p, resolution);
    let (_, grid_counts) = grid.minimize();
    let d = grid_counts.len();
    let grid_mu = PhaseDistribution::from_counts(p, &grid_counts, resolution);
    let grid_floor = grid_mu.objective();

    let step = 1.0 / f64::from(resolution);
    let (mut refined_floor, mut refined_mu) = refine(p, &grid_mu.mu, step);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..4 {
        let start = random_simplex_point(d, &mut rng);
        let (v, mu) = refine(p, &start, 0.1);
        if v < refined_floor {
            refined_floor = v;
            refined_mu = mu;
        }
    }

    let covering_radius = d as f64 / f64::from(resolution);
    let covering_term = (covering_radius / 2.0).sqrt();
    Ok(PhaseOptimum {
        p,
        resolution,
        grid_counts,
        grid: grid_mu,
        grid_floor,
        refined: PhaseDistribution { p, mu: refined_mu },
        refined_floor,
        covering_radius,
        covering_term,
        certified_lower_bound: (grid_floor - covering_term).max(0.0),
        nodes: grid.nodes.load(Ordering::Relaxed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{hs_distance, ExponentVectorMatrix, NumericUnitary};

    fn brute_force(p: u64, r: u32) -> f64 {
        fn rec(p: u64, r: u32, j: usize, d: usize, rem: u32, counts: &mut Vec<u32>, best: &mut f64) {
            if j + 1 == d {
                counts[j] = rem;
                let mu = PhaseDistribution::from_counts(p, counts, r);
                *best = best.min(mu.objective());
                return;
            }
            for c in 0..=rem {
                counts[j] = c;
                rec(p, r, j + 1, d, rem - c, counts, best);
            }
        }
        let d = half(p) + 1;
        let mut best = f64::INFINITY;
        rec(p, r, 0, d, r, &mut vec![0; d], &mut best);
        best
    }

    #[test]
    fn p3_closed_form() {
        let opt = phase_distribution_optimize(3, 100, 0).unwrap();
        assert!((opt.grid_floor - (1.0 - 3f64.sqrt() / 2.0)).abs() < 1e-12);
        assert_eq!(opt.grid_counts, vec![0, 100]);
    }

    #[test]
    fn branch_and_bound_matches_brute_force() {
        for (p, r) in [(5, 40), (7, 30), (11, 16), (13, 12)] {
            let opt = phase_distribution_optimize(p, r, 0).unwrap();
            assert!((opt.grid_floor - brute_force(p, r)).abs() < 1e-14, "p={p} r={r}");
            assert!(opt.refined_floor <= opt.grid_floor);
        }
    }

    #[test]
    fn symmetric_in_m() {
        let mu = [0.1, 0.2, 0.3, 0.15, 0.05, 0.1, 0.1];
        for m in 1..13 {
            let direct: f64 = mu.iter().enumerate().map(|(k, &x)| x * weight(13, k, m)).sum();
            let mirrored: f64 = mu.iter().enumerate().map(|(k, &x)| x * weight(13, k, 13 - m)).sum();
            assert!((direct - mirrored).abs() < 1e-12);
        }
    }

    #[test]
    fn concentrated_mass_matches_closed_form() {
        let mut mu = vec![0.0; 7];
        mu[1] = 1.0;
        let expected = 2f64.sqrt() / 2.0 * (1.0 - (12.0 * PI / 13.0).cos()).sqrt();
        assert!((phase_length(13, &mu, 6) - expected).abs() < 1e-12);
    }

    #[test]
    fn phase_length_is_half_hs_distance() {
        let a = ExponentVectorMatrix::new(vec![0, 1, 12, 3, 3, 5, 0, 2, 11, 6], 13).unwrap();
        let mut counts = vec![0u32; 7];
        for &e in a.exponents() {
            counts[(e as usize).min(13 - e as usize)] += 1;
        }
        let mu = PhaseDistribution::from_counts(13, &counts, 10);
        for m in 1..13u64 {
            let hs = hs_distance(&a.pow(m).to_unitary(), &NumericUnitary::identity(10)).unwrap();
            assert!((0.5 * hs - phase_length(13, &mu.mu, m as usize)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(phase_distribution_optimize(9, 100, 0).is_err());
        assert!(phase_distribution_optimize(13, 5, 0).is_err());
        assert!(PhaseDistribution::new(5, vec![0.5, 0.6, 0.0]).is_err());
    }
}
