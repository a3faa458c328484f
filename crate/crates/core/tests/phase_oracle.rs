use soficlab_core::solver::phase_distribution_optimize;

// Exact grid minima at resolution 100, from an independent brute-force
// enumeration of all compositions.
const GRID_ORACLE: [(u64, f64, [u32; 7]); 4] = [
    (3, 0.1339745962155614, [0, 100, 0, 0, 0, 0, 0]),
    (5, 0.07302477253806838, [5, 95, 0, 0, 0, 0, 0]),
    (7, 0.07828492326320041, [10, 90, 0, 0, 0, 0, 0]),
    (13, 0.1004181851254029, [17, 81, 0, 0, 0, 2, 0]),
];

// Continuous minima from a linear-programming bisection; no distribution can
// do better.
const CONTINUOUS_MINIMUM: [(u64, f64); 3] = [(5, 0.0729490117248744), (7, 0.07730470032093797), (13, 0.09949276273979042)];

#[test]
fn grid_minimum_matches_oracle() {
    for (p, value, counts) in GRID_ORACLE {
        let start = std::time::Instant::now();
        let opt = phase_distribution_optimize(p, 100, 0).unwrap();
        eprintln!("p={p}: {:.3?}, {} nodes", start.elapsed(), opt.nodes);
        assert!((opt.grid_floor - value).abs() < 1e-12, "p={p}: {}", opt.grid_floor);
        let d = (p as usize - 1) / 2 + 1;
        assert_eq!(opt.grid_counts, counts[..d]);
    }
}

#[test]
fn refinement_stays_between_continuous_and_grid_minimum() {
    for (p, lower) in CONTINUOUS_MINIMUM {
        let opt = phase_distribution_optimize(p, 100, 3).unwrap();
        assert!(opt.refined_floor <= opt.grid_floor);
        assert!(opt.refined_floor >= lower - 1e-9, "p={p}: {} < {lower}", opt.refined_floor);
        assert!(opt.certified_lower_bound <= lower + 1e-9);
    }
}
