//! Comparative statics: how equilibrium security responds to the
//! weighting curvature and to network structure.
//!
//! For two curvatures `alpha1 < alpha2` the crossing point `X_bar` of the
//! derivative curves splits parameter space: targets `d c / L` above
//! `w'(X_bar)` favor the lower curvature (its upper critical point is
//! smaller, so equilibrium attack probability is lower), targets below
//! favor the higher curvature. [`density_threshold`] finds the extended
//! neighborhood size where the regime flips, and the `sum_x` family
//! quantifies the structural side: among trees the star minimizes the
//! total of per-node critical points, and adding edges never lowers it.

use crate::critical::{self, CriticalError};
use crate::network::Graph;
use crate::total_effort::{Externality, GameError, GameSpec};
use crate::weighting::WeightingSpec;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest node count for the exhaustive tree experiment.
pub const TREE_EXPERIMENT_CAP: usize = 7;

/// Search ceiling for [`density_threshold`].
pub const DENSITY_SEARCH_CAP: usize = 1_000_000;

/// Errors from comparative-statics computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StaticsError {
    #[error("target ratio {theta} must exceed the larger curvature {alpha2}")]
    ThetaTooSmall { theta: f64, alpha2: f64 },
    #[error("players must share identical parameters")]
    Heterogeneous,
    #[error("node {node} has no interior critical point at target ratio {theta}")]
    UndefinedX { node: usize, theta: f64 },
    #[error("experiment supports 3..={cap} nodes, got {n}")]
    TooLarge { n: usize, cap: usize },
    #[error(transparent)]
    Critical(#[from] CriticalError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Graph(#[from] crate::network::GraphError),
}

/// Which curvature yields the more secure equilibrium at a given target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StaticsRegime {
    /// `d c / L > w'(X_bar)`: `X_bar < X1 < X2`, lower curvature safer.
    LowerAlphaMoreSecure,
    /// `d c / L < w'(X_bar)`: `X_bar > X1 > X2`, higher curvature safer.
    HigherAlphaMoreSecure,
    /// `d c / L = w'(X_bar)`: all three coincide.
    Coincide,
}

/// Outcome of a two-curvature comparison at one target ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparativeStaticsResult {
    pub alpha1: f64,
    pub alpha2: f64,
    pub d: usize,
    /// Target ratio `d c / L`.
    pub theta: f64,
    /// Crossing point of the two derivative curves on the upper branch.
    pub xbar: f64,
    /// Upper critical point under `alpha1`.
    pub x1: f64,
    /// Upper critical point under `alpha2`.
    pub x2: f64,
    pub regime: StaticsRegime,
}

/// Compares the upper critical points under two curvatures
/// `alpha1 < alpha2` at target ratio `theta = d c / L`, which must exceed
/// `alpha2` so both points exist. The regime follows from `theta` against
/// the derivative value at the crossing point.
pub fn compare_weighting(
    alpha1: f64,
    alpha2: f64,
    d: usize,
    c: f64,
    l: f64,
) -> Result<ComparativeStaticsResult, StaticsError> {
    if !(c.is_finite() && c > 0.0 && l.is_finite() && l > 0.0) {
        return Err(StaticsError::Critical(CriticalError::InvalidCostLoss { c, l }));
    }
    if d < 1 {
        return Err(StaticsError::Critical(CriticalError::InvalidDegree(d)));
    }
    let xbar = critical::solve_xbar(alpha1, alpha2)?;
    let theta = d as f64 * c / l;
    if theta <= alpha2 {
        return Err(StaticsError::ThetaTooSmall { theta, alpha2 });
    }
    let spec1 = WeightingSpec::prelec(alpha1).map_err(CriticalError::from)?;
    let spec2 = WeightingSpec::prelec(alpha2).map_err(CriticalError::from)?;
    let x1 = critical::critical_points(&spec1, theta)?
        .x_upper
        .expect("theta > alpha2 > alpha1");
    let x2 = critical::critical_points(&spec2, theta)?
        .x_upper
        .expect("theta > alpha2");
    let w_prime_at_xbar = spec1.prime(xbar).map_err(CriticalError::from)?;
    let regime = if theta > w_prime_at_xbar {
        StaticsRegime::LowerAlphaMoreSecure
    } else if theta < w_prime_at_xbar {
        StaticsRegime::HigherAlphaMoreSecure
    } else {
        StaticsRegime::Coincide
    };
    Ok(ComparativeStaticsResult {
        alpha1,
        alpha2,
        d,
        theta,
        xbar,
        x1,
        x2,
        regime,
    })
}

/// Smallest extended neighborhood size `d >= 2` whose target ratio
/// `d c / L` exceeds `w'(X_bar)`, i.e. where the comparison flips to
/// lower-curvature-safer. `None` when no `d` up to the search cap
/// qualifies.
pub fn density_threshold(
    alpha1: f64,
    alpha2: f64,
    c: f64,
    l: f64,
) -> Result<Option<usize>, StaticsError> {
    if !(c.is_finite() && c > 0.0 && l.is_finite() && l > 0.0) {
        return Err(StaticsError::Critical(CriticalError::InvalidCostLoss { c, l }));
    }
    let xbar = critical::solve_xbar(alpha1, alpha2)?;
    let spec1 = WeightingSpec::prelec(alpha1).map_err(CriticalError::from)?;
    let w_prime_at_xbar = spec1.prime(xbar).map_err(CriticalError::from)?;
    let ratio = c / l;
    for d in 2..=DENSITY_SEARCH_CAP {
        if d as f64 * ratio > w_prime_at_xbar {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Sum of upper critical points over the nodes, `sum_i X(d_i)`, for a
/// homogeneous game; errors when any node's target ratio leaves no
/// interior point.
pub fn sum_x(game: &GameSpec) -> Result<f64, StaticsError> {
    if !game.is_homogeneous() {
        return Err(StaticsError::Heterogeneous);
    }
    let p = game.player(1);
    let mut total = 0.0;
    for i in 1..=game.n() {
        let theta = game.theta(i);
        let cp = critical::critical_points(&p.weighting, theta)?;
        match cp.x_upper {
            Some(x) => total += x,
            None => return Err(StaticsError::UndefinedX { node: i, theta }),
        }
    }
    Ok(total)
}

fn sum_x_of_graph(
    graph: Graph,
    spec: &WeightingSpec,
    c: f64,
    l: f64,
) -> Result<f64, StaticsError> {
    let game = GameSpec::homogeneous(graph, *spec, c, l, Externality::TotalEffort)?;
    sum_x(&game)
}

/// Exhaustively checks that the star minimizes `sum_x` over all labeled
/// trees on `n` nodes, and that adding a leaf-to-leaf edge to the star
/// only increases the sum. Returns the pass flag and the smallest margin
/// `sum_x(tree) - sum_x(star)` over trees that are not stars themselves
/// (0 when every tree is a star, as for `n <= 3`).
pub fn star_minimality_experiment(
    n: usize,
    spec: &WeightingSpec,
    c: f64,
    l: f64,
) -> Result<(bool, f64), StaticsError> {
    if n < 3 {
        return Err(StaticsError::TooLarge { n, cap: TREE_EXPERIMENT_CAP });
    }
    if n > TREE_EXPERIMENT_CAP {
        return Err(StaticsError::TooLarge { n, cap: TREE_EXPERIMENT_CAP });
    }
    let star_sum = sum_x_of_graph(Graph::star(n)?, spec, c, l)?;
    let mut all_pass = true;
    let mut worst_gap = f64::INFINITY;
    for tree in Graph::enumerate_trees(n)? {
        let is_star = (1..=n).any(|center| tree.degree(center) == n - 1);
        let tree_sum = sum_x(&GameSpec::homogeneous(
            tree,
            *spec,
            c,
            l,
            Externality::TotalEffort,
        )?)?;
        if tree_sum < star_sum - 1e-12 {
            all_pass = false;
        }
        if !is_star {
            worst_gap = worst_gap.min(tree_sum - star_sum);
        }
    }
    if !worst_gap.is_finite() {
        worst_gap = 0.0;
    }
    // Densification spot check: putting any edge between two star leaves
    // must not lower the sum.
    for (u, v) in [(2, 3), (2, n), (n - 1, n)] {
        if u >= v || v > n {
            continue;
        }
        let star = Graph::star(n)?;
        let mut edges = star.edges().to_vec();
        edges.push((u, v));
        let denser = sum_x_of_graph(Graph::from_edges(Some(n), &edges)?, spec, c, l)?;
        if denser < star_sum - 1e-12 {
            all_pass = false;
        }
    }
    Ok((all_pass, worst_gap))
}
