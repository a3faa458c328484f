//! Fixtures shared by the benchmarks.

use soficlab_core::groups::{build_group, make_symmetric_hamming};
use soficlab_core::scalar::ratio;
use soficlab_core::solver::{ApproxInstance, TargetFamily};
use soficlab_core::FiniteMetricGroup;

pub fn symmetric(n: usize) -> FiniteMetricGroup {
    make_symmetric_hamming(n).and_then(|s| s.metric_group()).expect("small symmetric group")
}

/// `(S_3, d_H)` into `S_3`, full fragment, metric mode.
pub fn s3_self_instance() -> ApproxInstance {
    ApproxInstance::full(symmetric(3), ratio(1, 10), TargetFamily::Symmetric(3)).expect("valid instance")
}

/// `(ℤ(p), d_Lee)` into `S_n`, full fragment, metric mode.
pub fn cyclic_instance(p: u64, n: usize) -> ApproxInstance {
    let group = build_group(&format!("cyclic:p={p}:metric=lee")).expect("prime p");
    ApproxInstance::full(group, ratio(1, 2), TargetFamily::Symmetric(n)).expect("valid instance")
}
