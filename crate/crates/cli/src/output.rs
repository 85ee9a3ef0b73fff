//! Report shapes and formatting: JSON documents (one `report` tag per
//! shape, matching the shipped schema), CSV tables at 10 significant
//! digits, and the writer that sends data to stdout or a file.

use std::path::PathBuf;

use netsec_core::critical::AssumptionLargeNReport;
use netsec_core::total_effort::{EquilibriumReport, NodeCase, SolveMethod};
use netsec_core::wl_bs::WlEquilibriumSet;
use serde::Serialize;

/// Ten significant digits, scientific notation.
pub fn sig10(x: f64) -> String {
    format!("{x:.9e}")
}

/// Writes `data` to `out` when given, stdout otherwise.
pub fn emit(out: &Option<PathBuf>, data: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, data)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{data}");
            Ok(())
        }
    }
}

/// Serializes a report as pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    text
}

/// Critical-point analysis of one parameter set.
#[derive(Debug, Serialize)]
pub struct CriticalPointsOutput {
    pub report: &'static str,
    pub alpha: f64,
    pub c: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub d: usize,
    pub theta: f64,
    pub x_min: f64,
    pub v: Option<f64>,
    pub x: Option<f64>,
    pub interior_exists: bool,
    pub tangency: bool,
    pub z: f64,
    pub w_prime_z: f64,
    /// Regularity window report; null when no interior points exist.
    pub assumption_large_n: Option<AssumptionLargeNReport>,
}

/// Per-node regularity window entry embedded in solve reports.
#[derive(Debug, Serialize)]
pub struct NodeWindow {
    pub node: usize,
    pub d: usize,
    /// Null when the node has no interior critical points (full
    /// investment dominant), where the window conditions are moot.
    pub window: Option<AssumptionLargeNReport>,
}

/// Total-effort solve report.
#[derive(Debug, Serialize)]
pub struct TotalEffortOutput {
    pub report: &'static str,
    pub method: SolveMethod,
    pub is_pne: bool,
    pub investments: Vec<f64>,
    pub attack_probabilities: Vec<f64>,
    pub phi: f64,
    pub per_node_case: Vec<NodeCase>,
    pub max_violation: f64,
    pub iterations: usize,
    /// True when some node's regularity window fails: results are then
    /// exploratory, beyond what the equilibrium theory guarantees.
    pub outside_guarantees: bool,
    pub assumption_check: Vec<NodeWindow>,
}

impl TotalEffortOutput {
    pub fn new(report: &EquilibriumReport, windows: Vec<NodeWindow>) -> Self {
        let outside = windows
            .iter()
            .any(|w| w.window.as_ref().is_some_and(|r| !r.holds));
        TotalEffortOutput {
            report: "total_effort",
            method: report.method,
            is_pne: report.is_pne,
            investments: report.profile.values().to_vec(),
            attack_probabilities: report.attack_probs.clone(),
            phi: report.phi,
            per_node_case: report.per_node_case.clone(),
            max_violation: report.max_violation,
            iterations: report.iterations,
            outside_guarantees: outside,
            assumption_check: windows,
        }
    }

    /// CSV rendering: a commented summary, then one row per node.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("# report: total_effort\n");
        out.push_str(&format!("# method: {}\n", method_str(self.method)));
        out.push_str(&format!("# is_pne: {}\n", self.is_pne));
        out.push_str(&format!("# phi: {}\n", sig10(self.phi)));
        out.push_str(&format!("# max_violation: {}\n", sig10(self.max_violation)));
        out.push_str(&format!("# iterations: {}\n", self.iterations));
        out.push_str(&format!(
            "# outside_guarantees: {}\n",
            self.outside_guarantees
        ));
        out.push_str("node,investment,attack_probability,case\n");
        for i in 0..self.investments.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                i + 1,
                sig10(self.investments[i]),
                sig10(self.attack_probabilities[i]),
                case_str(self.per_node_case[i]),
            ));
        }
        out
    }
}

/// Weakest-link solve report: the common-investment equilibrium set.
#[derive(Debug, Serialize)]
pub struct WeakestLinkOutput {
    pub report: &'static str,
    #[serde(flatten)]
    pub set: WlEquilibriumSet,
}

/// Best-shot solve report: one equilibrium per maximal independent set.
#[derive(Debug, Serialize)]
pub struct BestShotOutput {
    pub report: &'static str,
    pub count: usize,
    pub equilibria: Vec<BestShotEquilibrium>,
}

#[derive(Debug, Serialize)]
pub struct BestShotEquilibrium {
    pub support: Vec<usize>,
    pub investments: Vec<f64>,
}

pub fn case_str(case: NodeCase) -> &'static str {
    match case {
        NodeCase::FullInvest => "full_invest",
        NodeCase::Interior => "interior",
        NodeCase::Zero => "zero",
    }
}

pub fn method_str(method: SolveMethod) -> &'static str {
    match method {
        SolveMethod::Brd => "brd",
        SolveMethod::Lcp => "lcp",
        SolveMethod::InteriorSolve => "interior_solve",
        SolveMethod::Analytic => "analytic",
    }
}

