//! Approximate-embedding instances, defects and witness search.

mod defect;
mod discrete;
mod exhaustive;
mod instance;
mod local;
mod phase;

pub use defect::{defect, Defect, Outcome, TargetElement, TargetKind, Witness};
pub use discrete::solve_discrete;
pub use exhaustive::{
    cyclic_witness_defect, mismatch, solve_exhaustive_cyclic, CyclicFamily, CyclicSolution,
    EXHAUSTIVE_DEGREE_CAP,
};
pub use instance::{AlphaMap, ApproxInstance, Budget, InstanceFile, Mode, TargetFamily};
pub use local::{solve_local_search, solve_local_search_powers, LocalSearchReport};
pub use phase::{
    phase_distribution_optimize, phase_length, phase_objective, PhaseDistribution, PhaseOptimum,
};
