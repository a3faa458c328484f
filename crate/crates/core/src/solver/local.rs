use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::defect::{Outcome, Witness};
use super::instance::{ApproxInstance, Budget, Mode, TargetFamily};
use crate::error::{Error, Result};
use crate::groups::{is_prime, make_cyclic_lee, Permutation};
use crate::parallel;
use crate::scalar::Rational;

/// Restarts run in parallel in chunks of this size; the search only stops
/// between chunks, so results do not depend on the thread count.
const CHUNK: usize = 64;

/// Largest common denominator for the integer objective.
const SCALE_CAP: i64 = 1 << 40;

#[derive(Clone, Debug, Serialize)]
pub struct LocalSearchReport {
    #[serde(skip)]
    pub outcome: Outcome<Permutation>,
    pub seed: u64,
    pub budget: Budget,
    pub restarts_run: usize,
    /// Restart that produced the reported map.
    pub best_restart: usize,
}

/// Lexicographic objective: α violation, worst other component, total.
type Key = (i64, i64, i64);

/// The instance with every value rescaled to an integer over a common denominator.
struct Scaled {
    n: usize,
    m: usize,
    unit: i64,
    src: Vec<i64>,
    alpha: Option<Vec<i64>>,
    delta: i64,
    identity: Option<usize>,
    products: Vec<(usize, usize, usize)>,
    involving: Vec<Vec<usize>>,
}

fn to_scaled(r: &Rational, scale: &BigInt) -> i64 {
    (r.numer() * (scale / r.denom())).to_i64().expect("bounded by the scale cap")
}

impl Scaled {
    fn new(instance: &ApproxInstance) -> Result<Self> {
        let n = match instance.target() {
            TargetFamily::Symmetric(n) => n,
            other => return Err(Error::arg(format!("local search needs a symmetric target, got {other}"))),
        };
        let m = instance.fragment().len();
        let mut values: Vec<Rational> = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                values.push(instance.source_distance(i, j));
            }
        }
        let alpha_values = match instance.mode() {
            Mode::Metric => None,
            Mode::Alpha(a) => Some(a.values().to_vec()),
        };
        let mut scale = BigInt::from(n);
        for r in values.iter().chain(alpha_values.iter().flatten()).chain(std::iter::once(instance.delta())) {
            scale = scale.lcm(r.denom());
            if scale > BigInt::from(SCALE_CAP) {
                return Err(Error::limit("common denominator of the instance is too large for local search"));
            }
        }
        let unit = (&scale / BigInt::from(n)).to_i64().expect("bounded");
        let src = values.iter().map(|r| to_scaled(r, &scale)).collect();
        let alpha = alpha_values.map(|a| a.iter().map(|r| to_scaled(r, &scale)).collect());
        let mut involving = vec![Vec::new(); m];
        for (t, &(a, b, c)) in instance.products().iter().enumerate() {
            for idx in [a, b, c] {
                if !involving[idx].contains(&t) {
                    involving[idx].push(t);
                }
            }
        }
        Ok(Scaled {
            n,
            m,
            unit,
            src,
            alpha,
            delta: to_scaled(instance.delta(), &scale),
            identity: instance.identity_index(),
            products: instance.products().to_vec(),
            involving,
        })
    }

    fn accepts(&self, key: &Key) -> bool {
        key.0 == 0 && key.1 < self.delta
    }
}

fn disagreements(a: &[u32], b: &[u32]) -> i64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as i64
}

fn moved(a: &[u32]) -> i64 {
    a.iter().enumerate().filter(|&(i, &x)| i as u32 != x).count() as i64
}

/// `|{x : c(x) ≠ a(b(x))}|`.
fn product_mismatch(a: &[u32], b: &[u32], c: &[u32]) -> i64 {
    b.iter().zip(c).filter(|&(&bx, &cx)| a[bx as usize] != cx).count() as i64
}

struct State<'a> {
    sc: &'a Scaled,
    gamma: Vec<Vec<u32>>,
    metric: Vec<i64>,
    hom: Vec<i64>,
    identity: i64,
    alpha: Vec<i64>,
}

impl<'a> State<'a> {
    fn new(sc: &'a Scaled, gamma: Vec<Vec<u32>>) -> Self {
        let mut s = State {
            sc,
            gamma,
            metric: vec![0; sc.m * sc.m],
            hom: vec![0; sc.products.len()],
            identity: 0,
            alpha: vec![0; sc.m],
        };
        for i in 0..sc.m {
            s.refresh(i);
        }
        s
    }

    /// Recomputes every term that depends on `γ_i`.
    fn refresh(&mut self, i: usize) {
        let sc = self.sc;
        let gi = &self.gamma[i];
        for j in 0..sc.m {
            if j != i {
                let v = (sc.src[i * sc.m + j] - disagreements(gi, &self.gamma[j]) * sc.unit).abs();
                self.metric[i * sc.m + j] = v;
                self.metric[j * sc.m + i] = v;
            }
        }
        for &t in &sc.involving[i] {
            let (a, b, c) = sc.products[t];
            self.hom[t] = product_mismatch(&self.gamma[a], &self.gamma[b], &self.gamma[c]) * sc.unit;
        }
        let len = moved(gi) * sc.unit;
        if sc.identity == Some(i) {
            self.identity = len;
        }
        if let Some(alpha) = &sc.alpha {
            self.alpha[i] = (alpha[i] - len).max(0);
        }
    }

    fn key(&self) -> Key {
        let mut worst = self.identity;
        let mut total = self.identity;
        for &h in &self.hom {
            worst = worst.max(h);
            total += h;
        }
        let mut alpha_worst = 0;
        if self.sc.alpha.is_some() {
            for &a in &self.alpha {
                alpha_worst = alpha_worst.max(a);
                total += a;
            }
        } else {
            for i in 0..self.sc.m {
                for j in i + 1..self.sc.m {
                    let v = self.metric[i * self.sc.m + j];
                    worst = worst.max(v);
                    total += v;
                }
            }
        }
        (alpha_worst, worst, total)
    }
}

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut v: Vec<u32> = (0..n as u32).collect();
    v.shuffle(rng);
    v
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn run_restart(sc: &Scaled, steps: usize, seed: u64, restart: usize) -> (Key, Vec<Vec<u32>>) {
    let mut rng = restart_rng(seed, restart);
    let gamma = (0..sc.m).map(|_| random_perm(sc.n, &mut rng)).collect();
    let mut state = State::new(sc, gamma);
    let mut key = state.key();
    let mut best = (key, state.gamma.clone());
    if sc.n < 2 || sc.accepts(&key) {
        return best;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..sc.m);
        let a = rng.gen_range(0..sc.n);
        let mut b = rng.gen_range(0..sc.n - 1);
        if b >= a {
            b += 1;
        }
        let pre = rng.gen_bool(0.5);
        let old = state.gamma[i].clone();
        let g = &mut state.gamma[i];
        if pre {
            for x in g.iter_mut() {
                if *x == a as u32 {
                    *x = b as u32;
                } else if *x == b as u32 {
                    *x = a as u32;
                }
            }
        } else {
            g.swap(a, b);
        }
        state.refresh(i);
        let candidate = state.key();
        if candidate <= key {
            key = candidate;
            if key < best.0 {
                best = (key, state.gamma.clone());
                if sc.accepts(&key) {
                    break;
                }
            }
        } else {
            state.gamma[i] = old;
            state.refresh(i);
        }
    }
    best
}

/// Runs restarts in deterministic chunks and merges by `(key, restart)`.
fn chunked_search<F>(budget: Budget, accepts: impl Fn(&Key) -> bool + Sync, run: F) -> (Key, usize, Vec<Vec<u32>>, usize)
where
    F: Fn(usize) -> (Key, Vec<Vec<u32>>) + Sync,
{
    let mut best: Option<(Key, usize, Vec<Vec<u32>>)> = None;
    let mut run_count = 0;
    let mut start = 0;
    while start < budget.restarts {
        let end = (start + CHUNK).min(budget.restarts);
        let chunk: Vec<(Key, usize, Vec<Vec<u32>>)> = parallel::pool().install(|| {
            (start..end)
                .into_par_iter()
                .map(|r| {
                    let (k, g) = run(r);
                    (k, r, g)
                })
                .collect()
        });
        run_count = end;
        for (k, r, g) in chunk {
            if best.as_ref().is_none_or(|(bk, br, _)| (k, r) < (*bk, *br)) {
                best = Some((k, r, g));
            }
        }
        if best.as_ref().is_some_and(|(k, _, _)| accepts(k)) {
            break;
        }
        start = end;
    }
    let (k, r, g) = best.expect("at least one restart");
    (k, r, g, run_count)
}

fn finish(
    instance: &ApproxInstance,
    gamma: Vec<Vec<u32>>,
    seed: u64,
    budget: Budget,
    restarts_run: usize,
    best_restart: usize,
) -> Result<LocalSearchReport> {
    let perms = gamma.into_iter().map(Permutation::new).collect::<Result<Vec<_>>>()?;
    let witness = Witness::evaluate(perms, instance)?;
    Ok(LocalSearchReport { outcome: Outcome::classify(witness, instance), seed, budget, restarts_run, best_restart })
}

/// Random-restart hill climbing over maps `F → S_n`.
///
/// Each step pre- or post-composes one image with a random transposition and
/// keeps the change unless the objective gets worse. The objective is the
/// largest defect component, ties broken by the sum of all terms. Restart
/// `r` draws from stream `r` of a ChaCha8 generator seeded with `seed`.
pub fn solve_local_search(instance: &ApproxInstance, budget: Budget, seed: u64) -> Result<LocalSearchReport> {
    if budget.restarts == 0 {
        return Err(Error::param("budget needs at least one restart"));
    }
    let sc = Scaled::new(instance)?;
    let (_, best_restart, gamma, run) =
        chunked_search(budget, |k| sc.accepts(k), |r| run_restart(&sc, budget.steps, seed, r));
    finish(instance, gamma, seed, budget, run, best_restart)
}

fn powers(sigma: &[u32], p: usize) -> Vec<Vec<u32>> {
    let n = sigma.len();
    let mut out = vec![(0..n as u32).collect::<Vec<u32>>()];
    for _ in 1..p {
        let last = out.last().expect("non-empty");
        out.push(last.iter().map(|&x| sigma[x as usize]).collect());
    }
    out
}

fn run_powers_restart(sc: &Scaled, p: usize, steps: usize, seed: u64, restart: usize) -> (Key, Vec<Vec<u32>>) {
    let n = sc.n;
    let mut rng = restart_rng(seed, restart);
    let mut sigma: Vec<u32> = (0..n as u32).collect();
    let add_cycle = |sigma: &mut Vec<u32>, rng: &mut ChaCha8Rng| {
        let mut fixed: Vec<usize> = (0..n).filter(|&x| sigma[x] == x as u32).collect();
        if fixed.len() < p {
            return;
        }
        fixed.shuffle(rng);
        for i in 0..p {
            sigma[fixed[i]] = fixed[(i + 1) % p] as u32;
        }
    };
    for _ in 0..rng.gen_range(0..=n / p) {
        add_cycle(&mut sigma, &mut rng);
    }
    let evaluate = |sigma: &[u32]| State::new(sc, powers(sigma, p)).key();
    let mut key = evaluate(&sigma);
    let mut best = (key, sigma.clone());
    for _ in 0..steps {
        if sc.accepts(&best.0) {
            break;
        }
        let mut next = sigma.clone();
        match rng.gen_range(0..3) {
            0 if n >= 2 => {
                let a = rng.gen_range(0..n) as u32;
                let b = rng.gen_range(0..n) as u32;
                let swap = |x: u32| if x == a { b } else if x == b { a } else { x };
                let mut conj = vec![0u32; n];
                for x in 0..n as u32 {
                    conj[swap(x) as usize] = swap(next[x as usize]);
                }
                next = conj;
            }
            1 => add_cycle(&mut next, &mut rng),
            _ => {
                let moved: Vec<usize> = (0..n).filter(|&x| next[x] != x as u32).collect();
                if let Some(&start) = moved.get(rng.gen_range(0..moved.len().max(1))) {
                    let mut x = start;
                    loop {
                        let y = next[x] as usize;
                        next[x] = x as u32;
                        x = y;
                        if x == start {
                            break;
                        }
                    }
                }
            }
        }
        let candidate = evaluate(&next);
        if candidate <= key {
            key = candidate;
            sigma = next;
            if key < best.0 {
                best = (key, sigma.clone());
            }
        }
    }
    (best.0, powers(&best.1, p))
}

/// Local search restricted to exact cyclic actions `γ(g^m) = σ^m` with `σ^p = 1`
/// from `(ℤ(p), d_Lee)` into `S_n`. Moves conjugate σ by a transposition or add
/// or remove one `p`-cycle.
pub fn solve_local_search_powers(p: u64, n: usize, delta: Rational, budget: Budget, seed: u64) -> Result<LocalSearchReport> {
    if p < 3 || !is_prime(p) {
        return Err(Error::param(format!("p must be a prime >= 3, got {p}")));
    }
    if budget.restarts == 0 {
        return Err(Error::param("budget needs at least one restart"));
    }
    let instance = ApproxInstance::full(make_cyclic_lee(p)?, delta, TargetFamily::Symmetric(n))?;
    let sc = Scaled::new(&instance)?;
    let (_, best_restart, gamma, run) = chunked_search(
        budget,
        |k| sc.accepts(k),
        |r| run_powers_restart(&sc, p as usize, budget.steps, seed, r),
    );
    finish(&instance, gamma, seed, budget, run, best_restart)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_symmetric_hamming, Permutation};
    use crate::scalar::ratio;
    use crate::solver::{defect, solve_exhaustive_cyclic, CyclicFamily};
    use num_traits::Zero;

    fn s3_instance() -> ApproxInstance {
        let s3 = make_symmetric_hamming(3).unwrap().metric_group().unwrap();
        ApproxInstance::full(s3, ratio(1, 100), TargetFamily::Symmetric(3)).unwrap()
    }

    #[test]
    fn finds_exact_s3_witness() {
        for seed in [0, 1, 2, 17] {
            let report = solve_local_search(&s3_instance(), Budget::new(64, 2000), seed).unwrap();
            assert!(report.outcome.is_witness(), "seed {seed}");
            assert_eq!(report.outcome.defect().max_component(), Rational::zero());
        }
    }

    #[test]
    fn trivial_fragment() {
        let z5 = make_cyclic_lee(5).unwrap();
        let inst = ApproxInstance::new(z5, vec![0], ratio(1, 10), TargetFamily::Symmetric(4)).unwrap();
        let report = solve_local_search(&inst, Budget::new(4, 200), 3).unwrap();
        assert!(report.outcome.is_witness());
        assert_eq!(report.outcome.defect().max_component(), Rational::zero());
    }

    #[test]
    fn reported_defect_matches_verification() {
        let z7 = make_cyclic_lee(7).unwrap();
        let inst = ApproxInstance::full(z7, ratio(1, 10), TargetFamily::Symmetric(9)).unwrap();
        let report = solve_local_search(&inst, Budget::new(32, 300), 5).unwrap();
        let w = report.outcome.witness();
        assert_eq!(defect(&w.gamma, &inst).unwrap(), w.defect);
    }

    #[test]
    fn parallel_merge_matches_serial_scan() {
        let z5 = make_cyclic_lee(5).unwrap();
        let inst = ApproxInstance::full(z5, ratio(1, 10), TargetFamily::Symmetric(7)).unwrap();
        let budget = Budget::new(100, 200);
        let report = solve_local_search(&inst, budget, 11).unwrap();
        let sc = Scaled::new(&inst).unwrap();
        let mut serial: Option<(Key, usize, Vec<Vec<u32>>)> = None;
        for r in 0..budget.restarts {
            let (k, g) = run_restart(&sc, budget.steps, 11, r);
            if serial.as_ref().is_none_or(|(bk, _, _)| k < *bk) {
                serial = Some((k, r, g));
            }
        }
        let (_, r, g) = serial.unwrap();
        assert_eq!(report.best_restart, r);
        let perms: Vec<Permutation> = g.into_iter().map(|x| Permutation::new(x).unwrap()).collect();
        assert_eq!(report.outcome.witness().gamma, perms);
    }

    #[test]
    fn powers_variant_never_beats_exhaustive() {
        for n in [13, 20, 26, 30] {
            let best = solve_exhaustive_cyclic(13, n, CyclicFamily::Symmetric, &ratio(1, 2)).unwrap();
            let r = solve_local_search_powers(13, n, ratio(1, 2), Budget::new(16, 60), 4).unwrap();
            let found = r.outcome.defect();
            assert_eq!(found.hom, Rational::zero());
            assert!(found.max_component() >= best.defect);
        }
    }

    #[test]
    fn rejects_non_symmetric_targets() {
        let z5 = make_cyclic_lee(5).unwrap();
        let inst = ApproxInstance::full(z5, ratio(1, 10), TargetFamily::Unitary(4)).unwrap();
        assert!(solve_local_search(&inst, Budget::new(1, 1), 0).is_err());
    }
}
