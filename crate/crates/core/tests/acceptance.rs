//! Acceptance gate: one test per release criterion, each at its stated
//! tolerance, ending in a single pass/fail line.
//!
//! The cross-validation test prints per-instance diagnostics before its
//! verdict because its agreement clause is known to fail: many of the
//! random games admit several equilibria, and the two solvers are free
//! to return different ones. Both returned profiles still beat the
//! deviation oracle on every instance; see the test for details.

mod common;

use std::time::{Duration, Instant};

use common::{
    er_connected, fd_prime, fd_second, fixture_graphs, k6_minus_matching, standard_game,
    standard_game_with, ten_node, STANDARD_ALPHA, STANDARD_COST,
};
use netsec_core::critical::{check_assumption_large_n, critical_points, solve_z, X_MIN};
use netsec_core::lcp::{
    build_lcp, check_copositive, lcp_solve, lemke_solve, solution_residuals, LemkeStatus,
};
use netsec_core::network::Graph;
use netsec_core::statics::{compare_weighting, star_minimality_experiment, StaticsRegime};
use netsec_core::total_effort::{
    brd_solve, phi_upper_bound, verify_pne, BrdOptions, Externality, StrategyProfile,
};
use netsec_core::weighting::WeightingSpec;
use netsec_core::wl_bs::{best_shot_equilibria, verify_wl_bs};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn prelec(alpha: f64) -> WeightingSpec {
    WeightingSpec::prelec(alpha).unwrap()
}

/// Ten-node benchmark: both solvers reproduce the published equilibrium
/// (0.4095 on the leaves 1, 2, 3, 9, 10; 0.1442 on the hub 7; zero on
/// 4, 5, 6, 8) within 1e-3, the deviation oracle confirms it below
/// 1e-6, and the whole solve stays under a second.
#[test]
fn a01_ten_node_benchmark_equilibrium() {
    let game = standard_game(ten_node(), STANDARD_ALPHA, STANDARD_COST);
    let mut expected = vec![0.0; 10];
    for i in [1usize, 2, 3, 9, 10] {
        expected[i - 1] = 0.4095;
    }
    expected[6] = 0.1442;

    let started = Instant::now();
    let brd = brd_solve(&game, &BrdOptions::default()).unwrap();
    let lcp = lcp_solve(&game, 0).unwrap();
    let elapsed = started.elapsed();

    for (label, report) in [("brd", &brd), ("lcp", &lcp)] {
        for (i, (&got, &want)) in report
            .profile
            .values()
            .iter()
            .zip(&expected)
            .enumerate()
        {
            assert!(
                (got - want).abs() <= 1e-3,
                "FAIL: {label} node {} invests {got}, expected {want} within 1e-3",
                i + 1
            );
        }
        let (ok, violation, _) = verify_pne(&game, &report.profile, 1e-6).unwrap();
        assert!(
            ok && violation < 1e-6,
            "FAIL: {label} profile leaves a deviation gain of {violation:.3e}"
        );
    }
    assert!(
        elapsed < Duration::from_secs(1),
        "FAIL: solves took {elapsed:?}, budget is 1 s"
    );
    println!(
        "PASS: ten-node equilibrium reproduced by both solvers within 1e-3, \
         oracle gain < 1e-6, in {elapsed:?}"
    );
}

/// The full-investment threshold slope for curvature 0.6 comes out at
/// 0.8304 within 1e-4.
#[test]
fn a02_full_investment_threshold_slope() {
    let (z, w_prime_z) = solve_z(&prelec(0.6)).unwrap();
    assert!(
        (w_prime_z - 0.8304).abs() <= 1e-4,
        "FAIL: w'(z) = {w_prime_z}, expected 0.8304 within 1e-4 (z = {z})"
    );
    println!("PASS: w'(z) = {w_prime_z:.6} matches 0.8304 within 1e-4");
}

/// Interior equilibria on the six-node benchmarks hit the published
/// attack probabilities within 1e-4, and the density comparison labels
/// the sparse case higher-curvature-safer and the dense case
/// lower-curvature-safer.
#[test]
fn a03_interior_attack_probabilities_and_density_regimes() {
    let cases = [
        (Graph::cycle(6).unwrap(), 0.4, 0.8588),
        (Graph::cycle(6).unwrap(), 0.8, 0.6912),
        (k6_minus_matching(), 0.4, 0.9325),
        (k6_minus_matching(), 0.8, 0.9643),
    ];
    for (graph, alpha, want) in cases {
        let d = graph.extended_size(1);
        let game = standard_game(graph, alpha, 0.3);
        let report = interior_report(&game);
        for (i, &prob) in report.attack_probs.iter().enumerate() {
            assert!(
                (prob - want).abs() <= 1e-4,
                "FAIL: alpha={alpha} d={d}: node {} attack probability {prob}, \
                 expected {want} within 1e-4",
                i + 1
            );
        }
    }
    let sparse = compare_weighting(0.4, 0.8, 3, 0.3, 1.0).unwrap();
    assert_eq!(
        sparse.regime,
        StaticsRegime::HigherAlphaMoreSecure,
        "FAIL: d=3 regime came out as {:?}",
        sparse.regime
    );
    let dense = compare_weighting(0.4, 0.8, 5, 0.3, 1.0).unwrap();
    assert_eq!(
        dense.regime,
        StaticsRegime::LowerAlphaMoreSecure,
        "FAIL: d=5 regime came out as {:?}",
        dense.regime
    );
    println!(
        "PASS: interior attack probabilities 0.8588/0.6912/0.9325/0.9643 within 1e-4; \
         density regimes flip between d=3 and d=5"
    );
}

fn interior_report(game: &netsec_core::total_effort::GameSpec) -> netsec_core::total_effort::EquilibriumReport {
    netsec_core::total_effort::interior_solve(game)
        .unwrap()
        .expect("interior equilibrium exists on the benchmark graphs")
}

/// Weighting identities at the fixed point 1/e: value 1/e, slope alpha,
/// zero curvature, all within 1e-10 across the curvature grid.
#[test]
fn a04_weighting_identities_at_the_fixed_point() {
    for k in 2..=9 {
        let alpha = k as f64 / 10.0;
        let spec = prelec(alpha);
        let w = spec.eval(X_MIN).unwrap();
        let p = spec.prime(X_MIN).unwrap();
        let s = spec.second(X_MIN).unwrap();
        assert!(
            (w - X_MIN).abs() <= 1e-10,
            "FAIL: alpha={alpha}: w(1/e) = {w}, expected 1/e"
        );
        assert!(
            (p - alpha).abs() <= 1e-10,
            "FAIL: alpha={alpha}: w'(1/e) = {p}, expected {alpha}"
        );
        assert!(
            s.abs() <= 1e-10,
            "FAIL: alpha={alpha}: w''(1/e) = {s}, expected 0"
        );
    }
    println!("PASS: fixed-point identities hold within 1e-10 for alpha in 0.2..=0.9");
}

/// Analytic first and second derivatives agree with central finite
/// differences to relative error 1e-5 on a 99-point grid for five
/// curvature values.
#[test]
fn a05_derivative_consistency_on_grid() {
    let mut worst = 0.0f64;
    for alpha in [0.2, 0.4, 0.6, 0.8, 0.9] {
        let spec = prelec(alpha);
        for i in 1..=99 {
            let x = i as f64 / 100.0;
            let p = spec.prime(x).unwrap();
            let s = spec.second(x).unwrap();
            let rel_p = (fd_prime(&spec, x) - p).abs() / p.abs();
            let rel_s = (fd_second(&spec, x) - s).abs() / s.abs();
            for (rel, name, analytic) in [(rel_p, "w'", p), (rel_s, "w''", s)] {
                assert!(
                    rel <= 1e-5,
                    "FAIL: alpha={alpha} x={x}: {name} = {analytic} differs from the \
                     finite difference by relative {rel:.3e}"
                );
                worst = worst.max(rel);
            }
        }
    }
    println!("PASS: derivatives match finite differences; worst relative error {worst:.3e}");
}

/// Cross-validation on 50 random connected games: every profile from
/// either solver must beat the per-player deviation oracle (this holds),
/// and the two solvers' attack-probability vectors must agree within
/// 1e-5 (this fails: the games often have several equilibria and the
/// solvers land on different ones, so the test documents each instance
/// and then reports the honest verdict).
#[test]
fn a06_solver_cross_validation_on_random_ensemble() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA06);
    let spec = prelec(STANDARD_ALPHA);

    let mut oracle_failures = 0usize;
    let mut disagreements: Vec<(usize, f64)> = Vec::new();
    for idx in 0..50usize {
        let n = 4 + idx % 7;
        let graph = er_connected(&mut rng, n, 0.5);
        let edges = graph.edges().len();
        let game = standard_game(graph, STANDARD_ALPHA, STANDARD_COST);
        for i in 1..=game.n() {
            let d = game.graph().extended_size(i);
            let window = check_assumption_large_n(&spec, STANDARD_COST, 1.0, d).unwrap();
            assert!(
                window.holds,
                "instance {idx}: node {i} (d = {d}) falls outside the regularity window \
                 the ensemble is constructed to satisfy"
            );
        }

        let brd = brd_solve(&game, &BrdOptions::default()).unwrap();
        let lcp = lcp_solve(&game, 0).unwrap();
        let (brd_ok, brd_gain, _) = verify_pne(&game, &brd.profile, 1e-6).unwrap();
        let (lcp_ok, lcp_gain, _) = verify_pne(&game, &lcp.profile, 1e-6).unwrap();
        if !brd_ok || !lcp_ok {
            oracle_failures += 1;
        }
        let gap = brd
            .attack_probs
            .iter()
            .zip(&lcp.attack_probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        let verdict = if gap <= 1e-5 { "agree" } else { "DIFFER" };
        println!(
            "instance {idx:02}: n={n} m={edges:2} oracle gains {brd_gain:9.2e} / {lcp_gain:9.2e} \
             max|dp| = {gap:9.2e}  {verdict}"
        );
        if gap > 1e-5 {
            disagreements.push((idx, gap));
        }
    }

    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "FAIL: ensemble took {elapsed:?}, budget is 60 s"
    );
    assert_eq!(
        oracle_failures, 0,
        "FAIL: some returned profile leaves a deviation gain above 1e-6"
    );
    println!("PASS (oracle clause): all 100 profiles beat the deviation oracle at 1e-6 in {elapsed:?}");

    let worst = disagreements
        .iter()
        .map(|&(_, g)| g)
        .fold(0.0f64, f64::max);
    assert!(
        disagreements.is_empty(),
        "FAIL (agreement clause): the sweep solver and the pivoting solver returned \
         different equilibria on {} of 50 instances (worst attack-probability gap \
         {worst:.3e}). Every one of those profiles individually passes the deviation \
         oracle: the games admit multiple equilibria, so demanding vector agreement \
         between independent solvers is not satisfiable on this ensemble.",
        disagreements.len()
    );
    println!("PASS: both solvers agree within 1e-5 on all 50 instances");
}

/// Structural results at desk scale: the upper critical point rises and
/// the induced investment target falls with density; equilibrium average
/// attack probability respects the two-step upper-bound chain on every
/// fixture; and the star minimizes the critical-point sum over all
/// labeled trees on 4, 5, and 6 nodes.
#[test]
fn a07_structural_monotonicity_bounds_and_star_minimality() {
    let spec = prelec(STANDARD_ALPHA);
    let mut prev_x = f64::NAN;
    let mut prev_target = f64::INFINITY;
    for d in 2..=50usize {
        let cp = critical_points(&spec, d as f64 * STANDARD_COST).unwrap();
        let x = cp.x_upper.unwrap();
        let target = d as f64 * (1.0 - x);
        if d > 2 {
            assert!(x > prev_x, "FAIL: X({d}) = {x} did not rise above {prev_x}");
        }
        assert!(
            target < prev_target,
            "FAIL: d(1-X) rose from {prev_target} to {target} at d = {d}"
        );
        prev_x = x;
        prev_target = target;
    }

    for (name, graph) in fixture_graphs() {
        let game = standard_game(graph, STANDARD_ALPHA, STANDARD_COST);
        let report = brd_solve(&game, &BrdOptions::default()).unwrap();
        assert!(report.is_pne, "FAIL: no verified equilibrium on {name}");
        let bounds = phi_upper_bound(&game).unwrap();
        assert!(bounds.applicable, "FAIL: bound hypothesis fails on {name}");
        assert!(
            report.phi <= bounds.bound_sum + 1e-9,
            "FAIL: {name}: phi {} above averaged bound {}",
            report.phi,
            bounds.bound_sum
        );
        let avg = bounds.bound_avg.unwrap();
        assert!(
            bounds.bound_sum <= avg + 1e-9,
            "FAIL: {name}: averaged bound {} above density bound {avg}",
            bounds.bound_sum
        );
    }

    for n in [4usize, 5, 6] {
        let (ok, margin) = star_minimality_experiment(n, &spec, STANDARD_COST, 1.0).unwrap();
        assert!(
            ok && margin > 0.0,
            "FAIL: star minimality violated on {n}-node trees (margin {margin})"
        );
    }
    println!(
        "PASS: density monotonicity over d = 2..=50, bound chain on all fixtures, \
         star minimality over labeled trees on 4..=6 nodes"
    );
}

/// Complementarity-problem structure: the randomized copositivity check
/// passes with 10^4 samples on every built instance, and every solved
/// instance has complementarity residual below 1e-7.
#[test]
fn a08_lcp_copositivity_and_complementarity() {
    let mut games = Vec::new();
    for (name, graph) in fixture_graphs() {
        games.push((
            name.to_string(),
            standard_game(graph, STANDARD_ALPHA, STANDARD_COST),
        ));
    }
    games.push((
        "star5_folded".to_string(),
        standard_game(Graph::star(5).unwrap(), STANDARD_ALPHA, 0.25),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(0xA08);
    for k in 0..10usize {
        let n = 4 + k % 7;
        games.push((
            format!("random{k}"),
            standard_game(er_connected(&mut rng, n, 0.5), STANDARD_ALPHA, STANDARD_COST),
        ));
    }

    for (name, game) in &games {
        let inst = build_lcp(game).unwrap();
        let (copositive, min_quadform) = check_copositive(&inst.m, 10_000, 0xC0);
        assert!(
            copositive,
            "FAIL: {name}: quadratic form dipped to {min_quadform:.3e} on the nonnegative cone"
        );
        let sol = lemke_solve(&inst, 0);
        assert_eq!(
            sol.status,
            LemkeStatus::Solved,
            "FAIL: {name}: pivoting ended in {:?}",
            sol.status
        );
        let (_, _, residual) = solution_residuals(&inst, &sol);
        assert!(
            residual < 1e-7,
            "FAIL: {name}: complementarity residual {residual:.3e}"
        );
    }
    println!(
        "PASS: copositivity (10^4 samples) and complementarity residual < 1e-7 \
         on {} instances",
        games.len()
    );
}

/// Best-shot equilibria on the ten-node benchmark: the positive supports
/// are exactly the maximal independent sets, the two landmark sets among
/// them, and no all-zero profile appears.
#[test]
fn a09_best_shot_supports_match_independent_sets() {
    let game = standard_game_with(
        ten_node(),
        STANDARD_ALPHA,
        STANDARD_COST,
        Externality::BestShot,
    );
    let profiles = best_shot_equilibria(&game, 1024).unwrap();
    assert!(!profiles.is_empty(), "FAIL: no equilibria returned");

    let mut supports: Vec<Vec<usize>> = profiles
        .iter()
        .map(|p| {
            (1..=game.n())
                .filter(|&i| p.values()[i - 1] > 0.0)
                .collect()
        })
        .collect();
    for p in &profiles {
        assert!(
            p.values().iter().any(|&v| v > 0.0),
            "FAIL: an all-zero profile was returned"
        );
    }
    let mut mis = game.graph().maximal_independent_sets(1024).unwrap();
    for s in &mut mis {
        s.sort_unstable();
    }
    mis.sort();
    for s in &mut supports {
        s.sort_unstable();
    }
    supports.sort();
    assert_eq!(
        supports, mis,
        "FAIL: positive supports do not match the maximal-independent-set list"
    );
    for landmark in [vec![1usize, 2, 3, 7, 9, 10], vec![2usize, 3, 4, 8]] {
        assert!(
            supports.contains(&landmark),
            "FAIL: landmark support {landmark:?} missing"
        );
    }
    println!(
        "PASS: {} best-shot equilibria, supports equal the {} maximal independent sets, \
         landmarks present, none all-zero",
        profiles.len(),
        supports.len()
    );
}

/// Weakest-link band structure on the six-cycle at cost ratio 0.9:
/// every sampled common investment up to 1-X survives the deviation
/// oracle and every sampled point of the open band (1-X, 1-V) fails it.
#[test]
fn a10_weakest_link_band_structure() {
    let game = standard_game_with(
        Graph::cycle(6).unwrap(),
        STANDARD_ALPHA,
        0.9,
        Externality::WeakestLink,
    );
    let cp = critical_points(&prelec(STANDARD_ALPHA), 0.9).unwrap();
    let x_upper = cp.x_upper.unwrap();
    let v = cp.v.unwrap();
    let band_lo = 1.0 - x_upper;
    let band_hi = 1.0 - v;

    let mut inside = 0usize;
    for j in 0..=20 {
        let s = band_lo * j as f64 / 20.0;
        let profile = StrategyProfile::uniform(6, s).unwrap();
        let (ok, violation) = verify_wl_bs(&game, &profile, 1e-6).unwrap();
        assert!(
            ok,
            "FAIL: common investment {s} in [0, 1-X] leaves a gain of {violation:.3e}"
        );
        inside += 1;
    }

    let mut excluded = 0usize;
    for j in 1..=11 {
        let s = band_lo + (band_hi - band_lo) * j as f64 / 12.0;
        let profile = StrategyProfile::uniform(6, s).unwrap();
        let (ok, violation) = verify_wl_bs(&game, &profile, 1e-6).unwrap();
        assert!(
            !ok && violation > 1e-6,
            "FAIL: common investment {s} in the open band (1-X, 1-V) passed the oracle"
        );
        excluded += 1;
    }
    println!(
        "PASS: {inside} sampled equilibria in [0, 1-X] verified, {excluded} sampled \
         points in (1-X, 1-V) rejected"
    );
}
