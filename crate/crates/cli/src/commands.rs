//! The five subcommand bodies. Each returns `Ok` after writing its data,
//! or a [`CliError`] that the caller maps onto the exit-code contract:
//! 2 for configuration and flag problems, 3 for solver failures, 4 when
//! a profile was produced but failed verification.

use std::path::PathBuf;

use netsec_core::critical::{check_assumption_large_n, critical_points, solve_z, CriticalError};
use netsec_core::lcp::lcp_solve;
use netsec_core::statics::{compare_weighting, density_threshold, StaticsRegime};
use netsec_core::total_effort::{
    brd_solve, interior_solve, phi_upper_bound, BrdOptions, BrdOrder, Externality, GameSpec,
    NodeCase, PlayerParams,
};
use netsec_core::weighting::WeightingSpec;
use netsec_core::wl_bs::{best_shot_equilibria, weakest_link_equilibria};

use crate::config::GameConfigFile;
use crate::output::{
    case_str, emit, sig10, to_json, BestShotEquilibrium, BestShotOutput, CriticalPointsOutput,
    NodeWindow, TotalEffortOutput, WeakestLinkOutput,
};
use crate::{CliError, Format, Method};

/// Flags must describe a meaningful parameter set before any solving.
fn validate_positive(name: &str, value: f64) -> Result<(), CliError> {
    if !(value.is_finite() && value > 0.0) {
        return Err(CliError::Usage(format!(
            "--{name} must be positive and finite, got {value}"
        )));
    }
    Ok(())
}

fn validate_alpha(name: &str, alpha: f64) -> Result<(), CliError> {
    if !(alpha.is_finite() && alpha > 0.0 && alpha <= 1.0) {
        return Err(CliError::Usage(format!(
            "--{name} must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(())
}

fn solver<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Solver(e.to_string())
}

/// Critical-point analysis for one parameter set, as JSON on stdout.
pub fn cmd_critical_points(
    alpha: f64,
    c: f64,
    l: f64,
    d: usize,
) -> Result<(), CliError> {
    validate_alpha("alpha", alpha)?;
    validate_positive("c", c)?;
    validate_positive("L", l)?;
    if d < 1 {
        return Err(CliError::Usage(format!("--d must be at least 1, got {d}")));
    }
    let spec = WeightingSpec::prelec(alpha).map_err(|e| CliError::Usage(e.to_string()))?;
    let theta = d as f64 * c / l;
    let cp = critical_points(&spec, theta).map_err(solver)?;
    let (z, w_prime_z) = solve_z(&spec).map_err(solver)?;
    let window = match check_assumption_large_n(&spec, c, l, d) {
        Ok(report) => Some(report),
        Err(CriticalError::NotApplicable { .. }) => None,
        Err(e) => return Err(solver(e)),
    };
    let out = CriticalPointsOutput {
        report: "critical_points",
        alpha,
        c,
        l,
        d,
        theta,
        x_min: cp.x_min,
        v: cp.v,
        x: cp.x_upper,
        interior_exists: cp.interior_exists,
        tangency: cp.tangency,
        z,
        w_prime_z,
        assumption_large_n: window,
    };
    emit(&None, &to_json(&out)).map_err(CliError::Solver)
}

/// Per-node regularity windows for the embedded assumption report.
fn node_windows(game: &GameSpec) -> Result<Vec<NodeWindow>, CliError> {
    let mut windows = Vec::with_capacity(game.n());
    for i in 1..=game.n() {
        let d = game.graph().extended_size(i);
        let p = game.player(i);
        let window = match check_assumption_large_n(&p.weighting, p.cost, p.loss, d) {
            Ok(report) => Some(report),
            Err(CriticalError::NotApplicable { .. } | CriticalError::LinearWeighting) => None,
            Err(e) => return Err(solver(e)),
        };
        windows.push(NodeWindow { node: i, d, window });
    }
    Ok(windows)
}

/// Solves the configured game and writes the report.
pub fn cmd_solve(
    config: PathBuf,
    method: Method,
    seed: Option<u64>,
    max_sweeps: usize,
    format: Format,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let file = GameConfigFile::load(&config).map_err(CliError::Usage)?;
    let game = file.build_game().map_err(CliError::Usage)?;
    match game.externality() {
        Externality::TotalEffort => solve_total_effort(&game, method, seed, max_sweeps, format, out),
        Externality::WeakestLink => {
            if format == Format::Csv {
                return Err(CliError::Usage(
                    "weakest-link reports are interval sets; CSV output is only defined for \
                     total-effort reports"
                        .into(),
                ));
            }
            let set = weakest_link_equilibria(&game, 5).map_err(solver)?;
            let report = WeakestLinkOutput {
                report: "weakest_link",
                set,
            };
            emit(&out, &to_json(&report)).map_err(CliError::Solver)
        }
        Externality::BestShot => {
            if format == Format::Csv {
                return Err(CliError::Usage(
                    "best-shot reports are profile lists; CSV output is only defined for \
                     total-effort reports"
                        .into(),
                ));
            }
            let profiles = best_shot_equilibria(&game, 1024).map_err(solver)?;
            let equilibria = profiles
                .iter()
                .map(|p| BestShotEquilibrium {
                    support: (1..=game.n())
                        .filter(|&i| p.values()[i - 1] > 0.0)
                        .collect(),
                    investments: p.values().to_vec(),
                })
                .collect::<Vec<_>>();
            let report = BestShotOutput {
                report: "best_shot",
                count: equilibria.len(),
                equilibria,
            };
            emit(&out, &to_json(&report)).map_err(CliError::Solver)
        }
    }
}

fn solve_total_effort(
    game: &GameSpec,
    method: Method,
    seed: Option<u64>,
    max_sweeps: usize,
    format: Format,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let windows = node_windows(game)?;
    for w in &windows {
        if let Some(report) = &w.window {
            if !report.holds {
                log::warn!(
                    "node {} (d = {}): regularity window fails (gap {:.3e}); \
                     results are exploratory",
                    w.node,
                    w.d,
                    report.gap_xv
                );
            }
        }
    }

    let opts = BrdOptions {
        order: match seed {
            Some(s) => BrdOrder::Random { seed: s },
            None => BrdOrder::RoundRobin,
        },
        max_sweeps,
        ..BrdOptions::default()
    };
    let report = match method {
        Method::Brd => brd_solve(game, &opts).map_err(solver)?,
        Method::Lcp => lcp_solve(game, 0).map_err(solver)?,
        Method::Interior => interior_solve(game)
            .map_err(solver)?
            .ok_or_else(|| CliError::Solver("no interior equilibrium in bounds".into()))?,
        Method::Auto => {
            let first = brd_solve(game, &opts).map_err(solver)?;
            if first.is_pne {
                first
            } else {
                log::warn!("best-response dynamics did not verify; trying the pivoting solver");
                lcp_solve(game, 0).map_err(solver)?
            }
        }
    };

    let output = TotalEffortOutput::new(&report, windows);
    let text = match format {
        Format::Json => to_json(&output),
        Format::Csv => output.to_csv(),
    };
    emit(&out, &text).map_err(CliError::Solver)?;
    if !report.is_pne {
        return Err(CliError::Verification(format!(
            "profile written, but verification failed: largest deviation gain {:.3e} after {} iterations",
            report.max_violation, report.iterations
        )));
    }
    Ok(())
}

/// Inclusive `lo..hi` degree ranges, or a single value.
fn parse_d_range(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("--d-range expects `lo..hi` or a single value, got `{text}`"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok((lo, hi))
    } else {
        let d: usize = text.trim().parse().map_err(|_| bad())?;
        Ok((d, d))
    }
}

fn regime_str(regime: StaticsRegime) -> &'static str {
    match regime {
        StaticsRegime::LowerAlphaMoreSecure => "lower_alpha_more_secure",
        StaticsRegime::HigherAlphaMoreSecure => "higher_alpha_more_secure",
        StaticsRegime::Coincide => "coincide",
    }
}

/// Compares two curvatures over a density range, as CSV on stdout.
pub fn cmd_compare_weighting(
    alpha1: f64,
    alpha2: f64,
    c: f64,
    l: f64,
    d_range: String,
) -> Result<(), CliError> {
    validate_alpha("alpha1", alpha1)?;
    validate_alpha("alpha2", alpha2)?;
    if alpha1 >= alpha2 {
        return Err(CliError::Usage(format!(
            "--alpha1 must be below --alpha2, got {alpha1} and {alpha2}"
        )));
    }
    validate_positive("c", c)?;
    validate_positive("L", l)?;
    let (lo, hi) = parse_d_range(&d_range)?;

    let mut text = String::from("d,x1,x2,xbar,regime\n");
    for d in lo..=hi {
        let row = compare_weighting(alpha1, alpha2, d, c, l).map_err(|e| {
            CliError::Usage(format!("d = {d} is not comparable with these parameters: {e}"))
        })?;
        text.push_str(&format!(
            "{d},{},{},{},{}\n",
            sig10(row.x1),
            sig10(row.x2),
            sig10(row.xbar),
            regime_str(row.regime),
        ));
    }
    match density_threshold(alpha1, alpha2, c, l).map_err(solver)? {
        Some(d) => text.push_str(&format!("# density_threshold: {d}\n")),
        None => text.push_str("# density_threshold: none\n"),
    }
    emit(&None, &text).map_err(CliError::Solver)
}

/// `start:end:steps` with `steps` evenly spaced points, ends included.
fn parse_sweep_range(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = |msg: &str| CliError::Usage(format!("--range `{text}`: {msg}"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("expected `start:end:steps`"));
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad("bad start"))?;
    let end: f64 = parts[1].trim().parse().map_err(|_| bad("bad end"))?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad("bad step count"))?;
    if steps == 0 {
        return Err(bad("empty range: steps must be at least 1"));
    }
    if !(start.is_finite() && end.is_finite()) {
        return Err(bad("endpoints must be finite"));
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    Ok((0..steps)
        .map(|i| start + (end - start) * i as f64 / (steps - 1) as f64)
        .collect())
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Alpha,
    Cost,
    DAvg,
}

impl std::str::FromStr for SweepParam {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "alpha" => Ok(SweepParam::Alpha),
            "c" => Ok(SweepParam::Cost),
            "d_avg" => Ok(SweepParam::DAvg),
            other => Err(format!("unknown sweep parameter `{other}` (alpha, c, d_avg)")),
        }
    }
}

/// Builds the game at one sweep point.
fn sweep_game(
    file: &GameConfigFile,
    param: SweepParam,
    value: f64,
) -> Result<GameSpec, String> {
    match param {
        SweepParam::Alpha | SweepParam::Cost => {
            let base = file.build_game()?;
            let players = base
                .players()
                .iter()
                .map(|p| -> Result<PlayerParams, String> {
                    let mut q = *p;
                    match param {
                        SweepParam::Alpha => {
                            q.weighting =
                                WeightingSpec::prelec(value).map_err(|e| e.to_string())?;
                        }
                        SweepParam::Cost => q.cost = value,
                        SweepParam::DAvg => unreachable!(),
                    }
                    Ok(q)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let graph = base.graph().clone();
            GameSpec::new(graph, players, file.externality).map_err(|e| e.to_string())
        }
        SweepParam::DAvg => {
            let gen = file
                .graph
                .generate
                .as_ref()
                .filter(|g| g.kind == "k_regular")
                .ok_or_else(|| {
                    "d_avg sweeps need a `generate` graph of kind `k_regular`".to_string()
                })?;
            let n = gen.params.n;
            let rounded = value.round();
            if !(rounded.is_finite() && rounded >= 2.0 && rounded <= n as f64) {
                return Err(format!("d_avg {value} does not give a degree in 1..{n}"));
            }
            let k = rounded as usize - 1;
            let graph =
                netsec_core::network::Graph::k_regular(n, k).map_err(|e| e.to_string())?;
            let p = file
                .homogeneous()
                .ok_or_else(|| "d_avg sweeps need homogeneous players".to_string())?;
            let params = PlayerParams {
                cost: p.c,
                loss: p.l,
                weighting: WeightingSpec::prelec(p.alpha).map_err(|e| e.to_string())?,
            };
            GameSpec::new(graph, vec![params; n], file.externality).map_err(|e| e.to_string())
        }
    }
}

/// Case mix summary for one solved profile: the distinct node cases,
/// sorted, joined with `+`.
fn case_mix(cases: &[NodeCase]) -> String {
    let mut names: Vec<&str> = cases.iter().map(|&c| case_str(c)).collect();
    names.sort_unstable();
    names.dedup();
    names.join("+")
}

/// Sweeps one parameter across a range, solving at each point.
pub fn cmd_sweep(
    config: PathBuf,
    param: SweepParam,
    range: String,
    method: Method,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let file = GameConfigFile::load(&config).map_err(CliError::Usage)?;
    if file.externality != Externality::TotalEffort {
        return Err(CliError::Usage(
            "sweeps are defined for total-effort games".into(),
        ));
    }
    file.build_game().map_err(CliError::Usage)?;
    let values = parse_sweep_range(&range)?;

    let mut text = String::new();
    text.push_str("# columns: param_value (swept value), phi (equilibrium mean attack probability),\n");
    text.push_str("#   bound_sum ((1/n) sum of per-node upper critical points),\n");
    text.push_str("#   bound_avg (upper critical point at the average density; empty if undefined),\n");
    text.push_str("#   is_pne, cases (distinct node cases), status (ok, or error: reason)\n");
    text.push_str("param_value,phi,bound_sum,bound_avg,is_pne,cases,status\n");
    let mut succeeded = 0usize;
    for &value in &values {
        match sweep_point(&file, param, value, method) {
            Ok(row) => {
                succeeded += 1;
                text.push_str(&row);
            }
            Err(msg) => {
                let clean = msg.replace(',', ";");
                text.push_str(&format!("{},,,,,,error: {clean}\n", sig10(value)));
            }
        }
    }
    emit(&out, &text).map_err(CliError::Solver)?;
    if succeeded == 0 {
        return Err(CliError::Solver(format!(
            "all {} sweep points failed",
            values.len()
        )));
    }
    Ok(())
}

fn sweep_point(
    file: &GameConfigFile,
    param: SweepParam,
    value: f64,
    method: Method,
) -> Result<String, String> {
    let game = sweep_game(file, param, value)?;
    let report = match method {
        Method::Brd => brd_solve(&game, &BrdOptions::default()).map_err(|e| e.to_string())?,
        Method::Lcp => lcp_solve(&game, 0).map_err(|e| e.to_string())?,
        Method::Interior => interior_solve(&game)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| "no interior equilibrium in bounds".to_string())?,
        Method::Auto => {
            let first = brd_solve(&game, &BrdOptions::default()).map_err(|e| e.to_string())?;
            if first.is_pne {
                first
            } else {
                lcp_solve(&game, 0).map_err(|e| e.to_string())?
            }
        }
    };
    if !report.is_pne {
        return Err(format!(
            "no verified equilibrium (largest deviation gain {:.3e})",
            report.max_violation
        ));
    }
    let (bound_sum, bound_avg) = match phi_upper_bound(&game) {
        Ok(b) => (sig10(b.bound_sum), b.bound_avg.map(sig10).unwrap_or_default()),
        Err(_) => (String::new(), String::new()),
    };
    Ok(format!(
        "{},{},{bound_sum},{bound_avg},{},{},ok\n",
        sig10(value),
        sig10(report.phi),
        report.is_pne,
        case_mix(&report.per_node_case),
    ))
}

/// Tabulates the weighting (or its slope) for several curvatures, as CSV
/// on stdout: one `x` column, then one column per curvature.
pub fn cmd_curve(alphas: Vec<f64>, points: usize, deriv: bool) -> Result<(), CliError> {
    if alphas.is_empty() {
        return Err(CliError::Usage("give at least one --alpha".into()));
    }
    for &a in &alphas {
        validate_alpha("alpha", a)?;
    }
    if points < 2 {
        return Err(CliError::Usage(format!(
            "--points must be at least 2, got {points}"
        )));
    }
    let specs = alphas
        .iter()
        .map(|&a| WeightingSpec::prelec(a).map_err(|e| CliError::Usage(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;

    let mut text = String::from("x");
    for &a in &alphas {
        let tag = if deriv { "w_prime" } else { "w" };
        text.push_str(&format!(",{tag}_{a}"));
    }
    text.push('\n');
    for i in 1..=points {
        let x = i as f64 / (points + 1) as f64;
        text.push_str(&sig10(x));
        for spec in &specs {
            let y = if deriv {
                spec.prime(x).map_err(solver)?
            } else {
                spec.eval(x).map_err(solver)?
            };
            text.push_str(&format!(",{}", sig10(y)));
        }
        text.push('\n');
    }
    emit(&None, &text).map_err(CliError::Solver)
}
