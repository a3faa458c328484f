use super::defect::{Outcome, Witness};
use super::instance::{ApproxInstance, Budget, Mode, TargetFamily};
use super::local::solve_local_search;
use crate::error::{Error, Result};
use crate::groups::{regular_embedding, Permutation};

/// Searches for a map with small hom and identity defects whose image
/// lengths dominate `α`.
///
/// The regular representation, copied as often as it fits in `S_n` with the
/// leftover points fixed, is tried first; local search is the fallback.
pub fn solve_discrete(instance: &ApproxInstance, budget: Budget, seed: u64) -> Result<Outcome<Permutation>> {
    if !matches!(instance.mode(), Mode::Alpha(_)) {
        return Err(Error::param("solve_discrete needs an instance with an alpha map"));
    }
    let n = match instance.target() {
        TargetFamily::Symmetric(n) => n,
        other => return Err(Error::arg(format!("discrete search needs a symmetric target, got {other}"))),
    };
    let source = instance.source();
    let order = source.order();
    if order <= n {
        if let Ok(regular) = regular_embedding(source) {
            let copies = n / order;
            let gamma = instance
                .fragment()
                .iter()
                .map(|&g| {
                    let base = regular.image(g).images();
                    let mut images: Vec<u32> = (0..n as u32).collect();
                    for c in 0..copies {
                        for (x, &y) in base.iter().enumerate() {
                            images[c * order + x] = (c * order) as u32 + y;
                        }
                    }
                    Permutation::new(images)
                })
                .collect::<Result<Vec<_>>>()?;
            let outcome = Outcome::classify(Witness::evaluate(gamma, instance)?, instance);
            if outcome.is_witness() {
                return Ok(outcome);
            }
        }
    }
    Ok(solve_local_search(instance, budget, seed)?.outcome)
}
