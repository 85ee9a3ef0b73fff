//! The Total Effort security game and its equilibrium solvers.
//!
//! Player `i` perceives attack probability `w_i(1 - (s_i + sbar_i)/d_i)`
//! where `sbar_i` sums the neighbors' investments, and pays `c_i` per unit
//! invested against a loss `L_i`. Her best response aims the extended
//! neighborhood's total investment at `d_i (1 - X_i)`, clamped to `[0, 1]`,
//! where `X_i` is the upper critical point; when `d_i c_i / L_i` is at most
//! the minimum slope of `w_i`, investing fully is dominant.
//!
//! Equilibria are computed by sequential best-response sweeps
//! ([`brd_solve`]), by direct solution of the interior linear system
//! ([`interior_solve`]), or through the complementarity formulation in
//! [`crate::lcp`]. Every candidate profile is checked by a brute-force
//! per-player deviation oracle ([`verify_pne`]) independent of the theory
//! that produced it.

use crate::critical::{self, CriticalError};
use crate::network::Graph;
use crate::weighting::{WeightingError, WeightingSpec};
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Per-sweep convergence tolerance for best-response dynamics.
pub const DEFAULT_BRD_TOL: f64 = 1e-9;

/// Sweep cap for best-response dynamics.
pub const DEFAULT_MAX_SWEEPS: usize = 10_000;

/// Default utility-gain tolerance below which a profile counts as a PNE.
pub const DEFAULT_VERIFY_TOL: f64 = 1e-7;

/// Grid resolution of the brute-force deviation oracle.
pub const ORACLE_GRID: usize = 1001;

/// Errors from game construction and equilibrium computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("player count {players} does not match node count {nodes}")]
    PlayerCountMismatch { players: usize, nodes: usize },
    #[error("player {node}: cost and loss must be positive and finite, got c = {c}, L = {l}")]
    InvalidPlayer { node: usize, c: f64, l: f64 },
    #[error("operation supports only the {want:?} externality, game uses {got:?}")]
    WrongExternality { want: Externality, got: Externality },
    #[error("node id {id} out of range 1..={n}")]
    NodeOutOfRange { id: usize, n: usize },
    #[error("investment {value} at position {index} outside [0, 1]")]
    InvalidInvestment { index: usize, value: f64 },
    #[error("profile length {got} does not match node count {want}")]
    ProfileLength { got: usize, want: usize },
    #[error("neighbor sum {s_bar} outside [0, {max}]")]
    InvalidNeighborSum { s_bar: f64, max: f64 },
    #[error("node {node} has no interior critical point (theta = {theta}): full investment is dominant")]
    DominantPlayer { node: usize, theta: f64 },
    #[error("interior system is singular and inconsistent (least-squares residual {residual})")]
    SingularSystem { residual: f64 },
    #[error("operation requires identical player parameters across nodes")]
    Heterogeneous,
    #[error(transparent)]
    Critical(#[from] CriticalError),
    #[error(transparent)]
    Weighting(#[from] WeightingError),
}

/// How neighbors' investments combine into the effective protection level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Externality {
    /// Attack probability `1 - (average investment over the extended
    /// neighborhood)`.
    TotalEffort,
    /// Attack probability `1 - (minimum investment over the extended
    /// neighborhood)`.
    WeakestLink,
    /// Attack probability `1 - (maximum investment over the extended
    /// neighborhood)`.
    BestShot,
}

/// Cost, loss, and perception parameters of one player.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlayerParams {
    pub cost: f64,
    pub loss: f64,
    pub weighting: WeightingSpec,
}

/// A game: graph, per-player parameters, and the externality kind.
#[derive(Debug, Clone)]
pub struct GameSpec {
    graph: Graph,
    players: Vec<PlayerParams>,
    externality: Externality,
}

impl GameSpec {
    pub fn new(
        graph: Graph,
        players: Vec<PlayerParams>,
        externality: Externality,
    ) -> Result<Self, GameError> {
        if players.len() != graph.n() {
            return Err(GameError::PlayerCountMismatch {
                players: players.len(),
                nodes: graph.n(),
            });
        }
        for (idx, p) in players.iter().enumerate() {
            let ok = p.cost.is_finite() && p.cost > 0.0 && p.loss.is_finite() && p.loss > 0.0;
            if !ok {
                return Err(GameError::InvalidPlayer {
                    node: idx + 1,
                    c: p.cost,
                    l: p.loss,
                });
            }
        }
        Ok(GameSpec {
            graph,
            players,
            externality,
        })
    }

    /// A game where every player shares the same parameters.
    pub fn homogeneous(
        graph: Graph,
        weighting: WeightingSpec,
        cost: f64,
        loss: f64,
        externality: Externality,
    ) -> Result<Self, GameError> {
        let players = vec![
            PlayerParams {
                cost,
                loss,
                weighting,
            };
            graph.n()
        ];
        Self::new(graph, players, externality)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn players(&self) -> &[PlayerParams] {
        &self.players
    }

    /// Parameters of node `i` (1-based).
    pub fn player(&self, i: usize) -> &PlayerParams {
        &self.players[i - 1]
    }

    pub fn externality(&self) -> Externality {
        self.externality
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// The target ratio `d_i c_i / L_i` of node `i`.
    pub fn theta(&self, i: usize) -> f64 {
        let p = self.player(i);
        self.graph.extended_size(i) as f64 * p.cost / p.loss
    }

    pub fn is_homogeneous(&self) -> bool {
        self.players.windows(2).all(|w| w[0] == w[1])
    }

    fn require(&self, want: Externality) -> Result<(), GameError> {
        if self.externality != want {
            return Err(GameError::WrongExternality {
                want,
                got: self.externality,
            });
        }
        Ok(())
    }

    fn check_node(&self, i: usize) -> Result<(), GameError> {
        if i == 0 || i > self.n() {
            return Err(GameError::NodeOutOfRange {
                id: i,
                n: self.n(),
            });
        }
        Ok(())
    }
}

/// An investment vector with every component in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrategyProfile {
    s: Vec<f64>,
}

impl StrategyProfile {
    pub fn new(s: Vec<f64>) -> Result<Self, GameError> {
        for (index, &value) in s.iter().enumerate() {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(GameError::InvalidInvestment { index, value });
            }
        }
        Ok(StrategyProfile { s })
    }

    pub fn zeros(n: usize) -> Self {
        StrategyProfile { s: vec![0.0; n] }
    }

    pub fn ones(n: usize) -> Self {
        StrategyProfile { s: vec![1.0; n] }
    }

    pub fn uniform(n: usize, value: f64) -> Result<Self, GameError> {
        Self::new(vec![value; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.s
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }
}

/// Which branch of the equilibrium characterization a node sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeCase {
    FullInvest,
    Interior,
    Zero,
}

/// Which solver produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Brd,
    Lcp,
    InteriorSolve,
    Analytic,
}

/// A solved (or attempted) equilibrium with verification diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub profile: StrategyProfile,
    /// True (unweighted) attack probability at each node.
    pub attack_probs: Vec<f64>,
    /// Average attack probability over all nodes.
    pub phi: f64,
    pub is_pne: bool,
    pub per_node_case: Vec<NodeCase>,
    /// Largest utility gain any player can get by deviating, per the
    /// brute-force oracle.
    pub max_violation: f64,
    pub iterations: usize,
    pub method: SolveMethod,
}

/// Node processing order for best-response sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrdOrder {
    RoundRobin,
    /// Fresh random order every sweep, from a seeded generator.
    Random { seed: u64 },
}

/// Knobs for [`brd_solve`]. `start` defaults to the all-zeros profile.
#[derive(Debug, Clone)]
pub struct BrdOptions {
    pub order: BrdOrder,
    pub tol: f64,
    pub max_sweeps: usize,
    pub start: Option<StrategyProfile>,
}

impl Default for BrdOptions {
    fn default() -> Self {
        BrdOptions {
            order: BrdOrder::RoundRobin,
            tol: DEFAULT_BRD_TOL,
            max_sweeps: DEFAULT_MAX_SWEEPS,
            start: None,
        }
    }
}

/// Response regime of a node, precomputed once per solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum NodeKind {
    /// `theta <= alpha`: investing 1 is dominant.
    Dominant,
    /// Interior critical points exist; best responses aim the extended
    /// neighborhood at `target = d (1 - x)`.
    Interior { x: f64, target: f64 },
    /// Linear weighting: all-or-nothing responses by the ratio `theta`.
    RiskNeutral { theta: f64 },
}

pub(crate) fn node_kinds(game: &GameSpec) -> Result<Vec<NodeKind>, GameError> {
    (1..=game.n())
        .map(|i| {
            let p = game.player(i);
            let d = game.graph().extended_size(i) as f64;
            let theta = game.theta(i);
            if p.weighting.is_linear() {
                return Ok(NodeKind::RiskNeutral { theta });
            }
            let cp = critical::critical_points(&p.weighting, theta)?;
            if !cp.interior_exists {
                return Ok(NodeKind::Dominant);
            }
            let x = cp.x_upper.unwrap();
            Ok(NodeKind::Interior {
                x,
                target: d * (1.0 - x),
            })
        })
        .collect()
}

fn check_profile(game: &GameSpec, profile: &StrategyProfile) -> Result<(), GameError> {
    if profile.len() != game.n() {
        return Err(GameError::ProfileLength {
            got: profile.len(),
            want: game.n(),
        });
    }
    Ok(())
}

/// Sum of the neighbors' investments of node `i`.
fn neighbor_sum(game: &GameSpec, i: usize, s: &[f64]) -> f64 {
    game.graph().neighbors(i).iter().map(|&j| s[j - 1]).sum()
}

/// True attack probability at node `i` under the total-effort externality.
fn attack_prob(game: &GameSpec, i: usize, s: &[f64]) -> f64 {
    let d = game.graph().extended_size(i) as f64;
    let p = 1.0 - (s[i - 1] + neighbor_sum(game, i, s)) / d;
    p.clamp(0.0, 1.0)
}

/// True attack probabilities at every node (total effort).
pub fn attack_probabilities(
    game: &GameSpec,
    profile: &StrategyProfile,
) -> Result<Vec<f64>, GameError> {
    game.require(Externality::TotalEffort)?;
    check_profile(game, profile)?;
    Ok((1..=game.n())
        .map(|i| attack_prob(game, i, profile.values()))
        .collect())
}

/// Average true attack probability over all nodes (total effort).
pub fn phi(game: &GameSpec, profile: &StrategyProfile) -> Result<f64, GameError> {
    let probs = attack_probabilities(game, profile)?;
    Ok(probs.iter().sum::<f64>() / probs.len() as f64)
}

/// Expected utility of player `i`:
/// `-L_i w_i(attack probability) - c_i s_i`.
pub fn expected_utility(
    game: &GameSpec,
    i: usize,
    profile: &StrategyProfile,
) -> Result<f64, GameError> {
    game.require(Externality::TotalEffort)?;
    game.check_node(i)?;
    check_profile(game, profile)?;
    let p = game.player(i);
    let prob = attack_prob(game, i, profile.values());
    Ok(-p.loss * p.weighting.eval(prob)? - p.cost * profile.values()[i - 1])
}

fn utility_at(game: &GameSpec, i: usize, s: &mut [f64], own: f64) -> f64 {
    let p = game.player(i);
    let prev = s[i - 1];
    s[i - 1] = own;
    let prob = attack_prob(game, i, s);
    s[i - 1] = prev;
    -p.loss * p.weighting.eval(prob).unwrap() - p.cost * own
}

/// Best response of a single player with parameters `(spec, c, L)`,
/// extended neighborhood size `d`, and neighbor investment sum `s_bar`.
///
/// When an interior critical point exists this returns
/// `clamp(d (1 - X) - s_bar, 0, 1)`, the response on the interior branch
/// of the utility. That is the exact utility maximizer whenever the
/// reachable attack-probability window (of width `1/d`) cannot contain
/// both critical points, i.e. when `X - V > 1/d`; see
/// [`crate::critical::check_assumption_large_n`]. Outside that regime the
/// true optimum can jump to full investment, which [`verify_pne`] detects.
pub fn best_response(
    spec: &WeightingSpec,
    c: f64,
    l: f64,
    d: usize,
    s_bar: f64,
) -> Result<f64, GameError> {
    if !(c.is_finite() && c > 0.0 && l.is_finite() && l > 0.0) {
        return Err(GameError::InvalidPlayer { node: 0, c, l });
    }
    if d < 1 {
        return Err(GameError::Critical(CriticalError::InvalidDegree(d)));
    }
    let max = (d - 1) as f64;
    if !s_bar.is_finite() || s_bar < -1e-12 || s_bar > max + 1e-12 {
        return Err(GameError::InvalidNeighborSum { s_bar, max });
    }
    let theta = d as f64 * c / l;
    if spec.is_linear() {
        // Risk-neutral all-or-nothing response; at the exact tie every
        // investment is optimal and we return full investment.
        return Ok(if theta <= 1.0 { 1.0 } else { 0.0 });
    }
    let cp = critical::critical_points(spec, theta)?;
    if !cp.interior_exists {
        return Ok(1.0);
    }
    let target = d as f64 * (1.0 - cp.x_upper.unwrap());
    Ok((target - s_bar).clamp(0.0, 1.0))
}

fn response_for(kind: &NodeKind, s_bar: f64, current: f64) -> f64 {
    match kind {
        NodeKind::Dominant => 1.0,
        NodeKind::Interior { target, .. } => (target - s_bar).clamp(0.0, 1.0),
        NodeKind::RiskNeutral { theta } => {
            if *theta < 1.0 {
                1.0
            } else if *theta > 1.0 {
                0.0
            } else {
                // Any investment is a best response at the exact tie;
                // staying put keeps the dynamics stationary.
                current
            }
        }
    }
}

/// Runs sequential best-response sweeps until the largest per-sweep change
/// drops below `opts.tol`.
///
/// Players whose full investment is dominant are pinned at 1 before the
/// dynamics start. A run that exhausts `opts.max_sweeps` returns the last
/// profile with `is_pne = false` and `iterations = max_sweeps`.
pub fn brd_solve(game: &GameSpec, opts: &BrdOptions) -> Result<EquilibriumReport, GameError> {
    game.require(Externality::TotalEffort)?;
    let kinds = node_kinds(game)?;
    let mut s: Vec<f64> = match &opts.start {
        Some(p) => {
            check_profile(game, p)?;
            p.values().to_vec()
        }
        None => vec![0.0; game.n()],
    };
    for (idx, kind) in kinds.iter().enumerate() {
        if matches!(kind, NodeKind::Dominant) {
            s[idx] = 1.0;
        }
    }
    let mut rng = match opts.order {
        BrdOrder::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        BrdOrder::RoundRobin => None,
    };
    let mut order: Vec<usize> = (1..=game.n()).collect();
    let mut converged = None;
    for sweep in 1..=opts.max_sweeps {
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
        }
        let mut delta: f64 = 0.0;
        for &i in &order {
            let s_bar = neighbor_sum(game, i, &s);
            let next = response_for(&kinds[i - 1], s_bar, s[i - 1]);
            delta = delta.max((next - s[i - 1]).abs());
            s[i - 1] = next;
        }
        if delta < opts.tol {
            converged = Some(sweep);
            break;
        }
    }
    let profile = StrategyProfile::new(s)?;
    let (verified, max_violation, per_node_case) =
        verify_pne(game, &profile, DEFAULT_VERIFY_TOL)?;
    let attack_probs = attack_probabilities(game, &profile)?;
    let phi = attack_probs.iter().sum::<f64>() / attack_probs.len() as f64;
    Ok(EquilibriumReport {
        profile,
        attack_probs,
        phi,
        is_pne: converged.is_some() && verified,
        per_node_case,
        max_violation,
        iterations: converged.unwrap_or(opts.max_sweeps),
        method: SolveMethod::Brd,
    })
}

/// Solves the interior fixed-point system `(A + I) s = d o (1 - X)`.
///
/// Uses dense LU with partial pivoting; when the matrix is singular but the
/// system is consistent (as on some regular graphs), falls back to the
/// minimum-norm least-squares solution via SVD. Returns `Ok(None)` when the
/// algebraic solution leaves `[0, 1]^n`, i.e. no interior equilibrium
/// exists.
pub fn interior_solve(game: &GameSpec) -> Result<Option<EquilibriumReport>, GameError> {
    game.require(Externality::TotalEffort)?;
    let kinds = node_kinds(game)?;
    let n = game.n();
    let mut rhs = DVector::zeros(n);
    for (idx, kind) in kinds.iter().enumerate() {
        match kind {
            NodeKind::Interior { target, .. } => rhs[idx] = *target,
            _ => {
                return Err(GameError::DominantPlayer {
                    node: idx + 1,
                    theta: game.theta(idx + 1),
                })
            }
        }
    }
    let mut m = DMatrix::<f64>::identity(n, n);
    for &(u, v) in game.graph().edges() {
        m[(u - 1, v - 1)] = 1.0;
        m[(v - 1, u - 1)] = 1.0;
    }
    let residual_of = |s: &DVector<f64>| (&m * s - &rhs).amax();
    let lu_solution = m.clone().lu().solve(&rhs).filter(|s| {
        s.iter().all(|v| v.is_finite()) && residual_of(s) < 1e-8
    });
    let solution = match lu_solution {
        Some(s) => s,
        None => {
            let svd = m.clone().svd(true, true);
            let s = svd
                .solve(&rhs, 1e-10)
                .expect("SVD factors requested at construction");
            let residual = residual_of(&s);
            if residual > 1e-8 {
                return Err(GameError::SingularSystem { residual });
            }
            s
        }
    };
    const SLACK: f64 = 1e-9;
    if solution.iter().any(|&v| !(-SLACK..=1.0 + SLACK).contains(&v)) {
        return Ok(None);
    }
    let profile = StrategyProfile::new(solution.iter().map(|v| v.clamp(0.0, 1.0)).collect())?;
    let (is_pne, max_violation, per_node_case) = verify_pne(game, &profile, DEFAULT_VERIFY_TOL)?;
    let attack_probs = attack_probabilities(game, &profile)?;
    let phi = attack_probs.iter().sum::<f64>() / attack_probs.len() as f64;
    Ok(Some(EquilibriumReport {
        profile,
        attack_probs,
        phi,
        is_pne,
        per_node_case,
        max_violation,
        iterations: 0,
        method: SolveMethod::InteriorSolve,
    }))
}

/// Classifies each node against the three-branch equilibrium
/// characterization and runs the brute-force deviation oracle: a 1001-point
/// grid of candidate deviations per player, plus the analytic candidates
/// `{0, 1, target - s_bar}`. Returns `(is_pne, max_violation, cases)` with
/// `is_pne` iff the largest oracle gain stays below `tol`.
pub fn verify_pne(
    game: &GameSpec,
    profile: &StrategyProfile,
    tol: f64,
) -> Result<(bool, f64, Vec<NodeCase>), GameError> {
    game.require(Externality::TotalEffort)?;
    check_profile(game, profile)?;
    let kinds = node_kinds(game)?;
    let mut s = profile.values().to_vec();
    let mut max_violation: f64 = 0.0;
    let mut cases = Vec::with_capacity(game.n());
    const CASE_TOL: f64 = 1e-8;
    for i in 1..=game.n() {
        let s_bar = neighbor_sum(game, i, &s);
        let own = s[i - 1];
        let case = match &kinds[i - 1] {
            NodeKind::Interior { target, .. } => {
                if own >= 1.0 - CASE_TOL && 1.0 + s_bar <= target + CASE_TOL {
                    NodeCase::FullInvest
                } else if own <= CASE_TOL && s_bar >= target - CASE_TOL {
                    NodeCase::Zero
                } else if (own + s_bar - target).abs() <= CASE_TOL {
                    NodeCase::Interior
                } else if own >= 1.0 - CASE_TOL {
                    NodeCase::FullInvest
                } else if own <= CASE_TOL {
                    NodeCase::Zero
                } else {
                    NodeCase::Interior
                }
            }
            NodeKind::Dominant | NodeKind::RiskNeutral { .. } => {
                if own >= 1.0 - CASE_TOL {
                    NodeCase::FullInvest
                } else if own <= CASE_TOL {
                    NodeCase::Zero
                } else {
                    NodeCase::Interior
                }
            }
        };
        cases.push(case);

        let base = utility_at(game, i, &mut s, own);
        let mut best_gain: f64 = 0.0;
        let mut consider = |candidate: f64, s: &mut [f64]| {
            let gain = utility_at(game, i, s, candidate) - base;
            if gain > best_gain {
                best_gain = gain;
            }
        };
        for k in 0..ORACLE_GRID {
            consider(k as f64 / (ORACLE_GRID - 1) as f64, &mut s);
        }
        consider(1.0, &mut s);
        if let NodeKind::Interior { target, .. } = &kinds[i - 1] {
            consider((target - s_bar).clamp(0.0, 1.0), &mut s);
        }
        max_violation = max_violation.max(best_gain);
    }
    Ok((max_violation < tol, max_violation, cases))
}

/// Upper bounds on the average attack probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiBounds {
    /// `(1/n) sum_i X_i`: the per-node bound averaged over nodes.
    pub bound_sum: f64,
    /// `X(d_avg)` evaluated at the average extended neighborhood size;
    /// defined only for homogeneous players.
    pub bound_avg: Option<f64>,
    /// True when every node satisfies `1 - X_i < 1/d_i`, the hypothesis
    /// under which the per-node bound applies.
    pub applicable: bool,
}

/// Computes the attack-probability bounds; errors if any player lacks an
/// interior critical point.
pub fn phi_upper_bound(game: &GameSpec) -> Result<PhiBounds, GameError> {
    let kinds = node_kinds(game)?;
    let mut xs = Vec::with_capacity(game.n());
    for (idx, kind) in kinds.iter().enumerate() {
        match kind {
            NodeKind::Interior { x, .. } => xs.push(*x),
            _ => {
                return Err(GameError::DominantPlayer {
                    node: idx + 1,
                    theta: game.theta(idx + 1),
                })
            }
        }
    }
    let n = game.n() as f64;
    let bound_sum = xs.iter().sum::<f64>() / n;
    let applicable = (1..=game.n()).all(|i| {
        1.0 - xs[i - 1] < 1.0 / game.graph().extended_size(i) as f64
    });
    let bound_avg = if game.is_homogeneous() {
        let p = game.player(1);
        let d_avg = (1..=game.n())
            .map(|i| game.graph().extended_size(i) as f64)
            .sum::<f64>()
            / n;
        let cp = critical::critical_points(&p.weighting, d_avg * p.cost / p.loss)?;
        cp.x_upper
    } else {
        None
    };
    Ok(PhiBounds {
        bound_sum,
        bound_avg,
        applicable,
    })
}

/// Which condition makes full investment self-enforcing at a node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecureWitness {
    pub node: usize,
    /// Full investment is dominant outright.
    pub dominant: bool,
    /// `V >= 1/d` holds.
    pub v_large: bool,
    /// `w(1/d) > c/L` holds.
    pub w_large: bool,
    pub satisfied: bool,
}

/// Decides whether the all-ones profile is a PNE: every node must either
/// have full investment dominant, or satisfy `V_i >= 1/d_i` or
/// `w_i(1/d_i) > c_i/L_i`.
pub fn secure_pne_exists(game: &GameSpec) -> Result<(bool, Vec<SecureWitness>), GameError> {
    let kinds = node_kinds(game)?;
    let mut witnesses = Vec::with_capacity(game.n());
    for i in 1..=game.n() {
        let p = game.player(i);
        let d = game.graph().extended_size(i) as f64;
        let witness = match &kinds[i - 1] {
            NodeKind::Dominant => SecureWitness {
                node: i,
                dominant: true,
                v_large: false,
                w_large: false,
                satisfied: true,
            },
            NodeKind::RiskNeutral { theta } => SecureWitness {
                node: i,
                dominant: *theta <= 1.0,
                v_large: false,
                w_large: false,
                satisfied: *theta <= 1.0,
            },
            NodeKind::Interior { .. } => {
                let cp = critical::critical_points(&p.weighting, game.theta(i))?;
                let v = cp.v.unwrap();
                let v_large = v >= 1.0 / d;
                let w_large = p.weighting.eval(1.0 / d)? > p.cost / p.loss;
                SecureWitness {
                    node: i,
                    dominant: false,
                    v_large,
                    w_large,
                    satisfied: v_large || w_large,
                }
            }
        };
        witnesses.push(witness);
    }
    Ok((witnesses.iter().all(|w| w.satisfied), witnesses))
}

/// Best-response set of a player with linear weighting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiskNeutralBr {
    /// `d c / L < 1`: invest 1.
    Full,
    /// `d c / L > 1`: invest 0.
    Zero,
    /// `d c / L = 1`: every investment in `[0, 1]` is optimal.
    Any,
}

pub fn risk_neutral_best_response(c: f64, l: f64, d: usize) -> Result<RiskNeutralBr, GameError> {
    if !(c.is_finite() && c > 0.0 && l.is_finite() && l > 0.0) {
        return Err(GameError::InvalidPlayer { node: 0, c, l });
    }
    if d < 1 {
        return Err(GameError::Critical(CriticalError::InvalidDegree(d)));
    }
    let theta = d as f64 * c / l;
    Ok(if theta < 1.0 {
        RiskNeutralBr::Full
    } else if theta > 1.0 {
        RiskNeutralBr::Zero
    } else {
        RiskNeutralBr::Any
    })
}

/// For every ordered pair with `N_bar(i)` strictly contained in
/// `N_bar(j)`, checks the equilibrium ordering `s_i >= s_j` (to 1e-9).
/// Meaningful for verified PNE profiles of homogeneous games.
pub fn neighborhood_monotonicity_check(
    game: &GameSpec,
    profile: &StrategyProfile,
) -> Result<Vec<(usize, usize, bool)>, GameError> {
    check_profile(game, profile)?;
    let hoods: Vec<Vec<usize>> = (1..=game.n())
        .map(|i| game.graph().extended_neighborhood(i))
        .collect();
    let mut out = Vec::new();
    for i in 1..=game.n() {
        for j in 1..=game.n() {
            if i == j || hoods[i - 1].len() >= hoods[j - 1].len() {
                continue;
            }
            let nested = hoods[i - 1]
                .iter()
                .all(|u| hoods[j - 1].binary_search(u).is_ok());
            if nested {
                let ok = profile.values()[i - 1] >= profile.values()[j - 1] - 1e-9;
                out.push((i, j, ok));
            }
        }
    }
    Ok(out)
}
