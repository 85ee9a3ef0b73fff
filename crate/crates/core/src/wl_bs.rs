//! Equilibria of the Weakest Link and Best Shot games.
//!
//! Both characterizations reduce to the optimum of a player protecting
//! herself alone: invest fully when `c/L < w'(z)` (where `z` solves
//! `z w'(z) = w(z)`), otherwise invest `1 - X` with `w'(X) = c/L`.
//! Weakest Link equilibria are identical-investment profiles whose common
//! value avoids the band where the marginal value of protection runs
//! negative; Best Shot equilibria place the single-player optimum on a
//! maximal independent set and zero elsewhere. Every construction here is
//! double-checked by the grid deviation oracle in [`verify_wl_bs`].

use crate::critical::{self, CriticalError, ROOT_TOL};
use crate::network::GraphError;
use crate::total_effort::{Externality, GameError, GameSpec, StrategyProfile};
use crate::weighting::{WeightingError, WeightingSpec, OPEN_UNIT_MARGIN};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Utility-gain tolerance for the deviation oracle.
pub const DEFAULT_ORACLE_TOL: f64 = 1e-7;

/// Grid resolution of the deviation oracle.
pub const ORACLE_GRID: usize = 1001;

/// Errors from the Weakest Link / Best Shot characterizations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WlBsError {
    #[error("graph must be connected")]
    Disconnected,
    #[error("players must share identical parameters")]
    Heterogeneous,
    #[error("operation expects a {want:?} game, got {got:?}")]
    WrongExternality { want: Externality, got: Externality },
    #[error("linear weighting with c/L = {ratio} has a zero optimum; no investment profile to report")]
    UnsupportedLinearRegime { ratio: f64 },
    #[error("verification grid needs at least {min} samples, got {got}")]
    GridTooSmall { got: usize, min: usize },
    #[error("constructed profile failed its own oracle at s = {s} (gain {violation})")]
    SampleFailed { s: f64, violation: f64 },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<CriticalError> for WlBsError {
    fn from(e: CriticalError) -> Self {
        WlBsError::Game(GameError::Critical(e))
    }
}

impl From<WeightingError> for WlBsError {
    fn from(e: WeightingError) -> Self {
        WlBsError::Game(GameError::Weighting(e))
    }
}

/// Which branch the single-player optimum takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpRegime {
    /// `c/L < w'(z)`: full investment.
    FullInvest,
    /// `c/L >= w'(z)`: invest `1 - X`.
    Interior,
}

/// Optimal investment of a player protecting only herself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinglePlayerOptimum {
    pub s_star: f64,
    pub regime: SpRegime,
    /// `c/L` fell exactly on `w'(z)`: both branches give equal utility.
    pub tie: bool,
}

/// A range of common investments, with explicit endpoint openness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_inclusive: bool,
    pub hi_inclusive: bool,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_inclusive { x >= self.lo } else { x > self.lo };
        let below = if self.hi_inclusive { x <= self.hi } else { x < self.hi };
        above && below
    }
}

/// Parameter regime of the Weakest Link equilibrium set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WlRegime {
    /// `c/L <= alpha` (the minimum slope): every common investment works.
    AnyInvestment,
    /// `alpha < c/L < w'(z)`: a low band plus a band near full investment.
    TwoBands,
    /// `c/L >= w'(z)`: only the low band `[0, 1 - X]`.
    SingleBand,
}

/// The common-investment values whose identical profile is an equilibrium.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WlEquilibriumSet {
    pub intervals: Vec<Interval>,
    pub regime: WlRegime,
    /// Upper critical point `X` (absent when `c/L <= alpha`).
    pub x_upper: Option<f64>,
    /// Lower critical point `V` (absent when `c/L <= alpha`).
    pub v: Option<f64>,
    /// Attack-probability boundary of the near-1 band, when it exists:
    /// common investments in `(1 - epsilon_star, 1]` are equilibria.
    pub epsilon_star: Option<f64>,
}

fn homogeneous_params(game: &GameSpec) -> Result<(WeightingSpec, f64, f64), WlBsError> {
    if !game.is_homogeneous() {
        return Err(WlBsError::Heterogeneous);
    }
    let p = game.player(1);
    Ok((p.weighting, p.cost, p.loss))
}

/// Optimum of an isolated player: full investment when `c/L < w'(z)`,
/// otherwise `1 - X` with `w'(X) = c/L`. An exact tie `c/L = w'(z)` takes
/// the interior branch with the tie flag set (both give equal utility).
///
/// Linear weighting follows the risk-neutral rule: full investment when
/// `c/L < 1`; at or above 1 the optimum is zero investment and the
/// operation declines with [`WlBsError::UnsupportedLinearRegime`].
pub fn single_player_optimum(
    spec: &WeightingSpec,
    c: f64,
    l: f64,
) -> Result<SinglePlayerOptimum, WlBsError> {
    if !(c.is_finite() && c > 0.0 && l.is_finite() && l > 0.0) {
        return Err(WlBsError::Game(GameError::InvalidPlayer { node: 0, c, l }));
    }
    let ratio = c / l;
    if spec.is_linear() {
        if ratio < 1.0 {
            return Ok(SinglePlayerOptimum {
                s_star: 1.0,
                regime: SpRegime::FullInvest,
                tie: false,
            });
        }
        return Err(WlBsError::UnsupportedLinearRegime { ratio });
    }
    let (_, w_prime_z) = critical::solve_z(spec)?;
    if ratio < w_prime_z {
        return Ok(SinglePlayerOptimum {
            s_star: 1.0,
            regime: SpRegime::FullInvest,
            tie: false,
        });
    }
    let cp = critical::critical_points(spec, ratio)?;
    let x = cp.x_upper.expect("c/L >= w'(z) > alpha implies an interior point");
    Ok(SinglePlayerOptimum {
        s_star: 1.0 - x,
        regime: SpRegime::Interior,
        tie: ratio == w_prime_z,
    })
}

/// Attack probability seen by node `i` (1-based): one minus the min
/// (Weakest Link) or max (Best Shot) investment over the closed
/// neighborhood, with `own` substituted for the node's entry.
fn effective_prob(game: &GameSpec, i: usize, s: &[f64], own: f64) -> f64 {
    let fold = |acc: f64, v: f64| match game.externality() {
        Externality::WeakestLink => acc.min(v),
        Externality::BestShot => acc.max(v),
        Externality::TotalEffort => unreachable!("guarded by verify_wl_bs"),
    };
    let mut level = own;
    for &j in game.graph().neighbors(i) {
        level = fold(level, s[j - 1]);
    }
    (1.0 - level).clamp(0.0, 1.0)
}

fn utility(game: &GameSpec, i: usize, s: &[f64], own: f64) -> Result<f64, WlBsError> {
    let p = game.player(i);
    let prob = effective_prob(game, i, s, own);
    Ok(-p.loss * p.weighting.eval(prob)? - p.cost * own)
}

/// Brute-force equilibrium check for min/max externalities: every player
/// scans a 1001-point deviation grid plus the analytic candidates
/// (0, 1, the neighbors' extreme, and the single-player interior point).
/// Returns `(is_pne, max_violation)`.
pub fn verify_wl_bs(
    game: &GameSpec,
    profile: &StrategyProfile,
    tol: f64,
) -> Result<(bool, f64), WlBsError> {
    if game.externality() == Externality::TotalEffort {
        return Err(WlBsError::WrongExternality {
            want: Externality::WeakestLink,
            got: Externality::TotalEffort,
        });
    }
    if profile.len() != game.n() {
        return Err(WlBsError::Game(GameError::ProfileLength {
            got: profile.len(),
            want: game.n(),
        }));
    }
    let s = profile.values();
    let mut max_violation: f64 = 0.0;
    for i in 1..=game.n() {
        let p = game.player(i);
        let base = utility(game, i, s, s[i - 1])?;
        let mut candidates: Vec<f64> = (0..ORACLE_GRID)
            .map(|k| k as f64 / (ORACLE_GRID - 1) as f64)
            .collect();
        candidates.push(1.0);
        if let Some(&first) = game.graph().neighbors(i).first() {
            let mut extreme = s[first - 1];
            for &j in game.graph().neighbors(i) {
                extreme = match game.externality() {
                    Externality::WeakestLink => extreme.min(s[j - 1]),
                    _ => extreme.max(s[j - 1]),
                };
            }
            candidates.push(extreme);
        }
        if !p.weighting.is_linear() {
            let ratio = p.cost / p.loss;
            if let Some(alpha) = p.weighting.alpha() {
                if ratio > alpha {
                    let cp = critical::critical_points(&p.weighting, ratio)?;
                    if let Some(x) = cp.x_upper {
                        candidates.push(1.0 - x);
                    }
                }
            }
        }
        for candidate in candidates {
            let gain = utility(game, i, s, candidate)? - base;
            if gain > max_violation {
                max_violation = gain;
            }
        }
    }
    Ok((max_violation < tol, max_violation))
}

fn verify_common(game: &GameSpec, s: f64, tol: f64) -> Result<(), WlBsError> {
    let profile = StrategyProfile::uniform(game.n(), s)?;
    let (ok, violation) = verify_wl_bs(game, &profile, tol)?;
    if !ok {
        return Err(WlBsError::SampleFailed { s, violation });
    }
    Ok(())
}

/// The identical-investment equilibria of a connected homogeneous
/// Weakest Link game, as explicit intervals of the common value.
///
/// Regimes by `c/L` against the weighting's minimum slope `alpha` and the
/// full-investment threshold `w'(z)`:
/// - `c/L <= alpha`: every common investment is an equilibrium, `[0, 1]`.
/// - `alpha < c/L < w'(z)`: the low band `[0, 1 - X]` plus the near-full
///   band `(1 - epsilon_star, 1]`, where `epsilon_star` solves
///   `L (w(X) - w(e)) + c (e - X) = 0` (equal utility with the interior
///   optimum); investments in the open band `(1 - X, 1 - V)` and up to
///   `1 - epsilon_star` are not equilibria.
/// - `c/L >= w'(z)`: the low band `[0, 1 - X]` only.
///
/// `samples` points per returned interval (at least 2) are re-checked
/// with the deviation oracle before the set is returned.
pub fn weakest_link_equilibria(
    game: &GameSpec,
    samples: usize,
) -> Result<WlEquilibriumSet, WlBsError> {
    if game.externality() != Externality::WeakestLink {
        return Err(WlBsError::WrongExternality {
            want: Externality::WeakestLink,
            got: game.externality(),
        });
    }
    if !game.graph().is_connected() {
        return Err(WlBsError::Disconnected);
    }
    if samples < 2 {
        return Err(WlBsError::GridTooSmall { got: samples, min: 2 });
    }
    let (spec, c, l) = homogeneous_params(game)?;
    if spec.is_linear() {
        return Err(WlBsError::UnsupportedLinearRegime { ratio: c / l });
    }
    let ratio = c / l;
    let alpha = spec.alpha().expect("curved Prelec has an alpha");

    let set = if ratio <= alpha {
        WlEquilibriumSet {
            intervals: vec![Interval {
                lo: 0.0,
                hi: 1.0,
                lo_inclusive: true,
                hi_inclusive: true,
            }],
            regime: WlRegime::AnyInvestment,
            x_upper: None,
            v: None,
            epsilon_star: None,
        }
    } else {
        let cp = critical::critical_points(&spec, ratio)?;
        let x = cp.x_upper.expect("ratio > alpha implies an interior point");
        let v = cp.v.expect("ratio > alpha implies an interior point");
        let (_, w_prime_z) = critical::solve_z(&spec)?;
        let low = Interval {
            lo: 0.0,
            hi: 1.0 - x,
            lo_inclusive: true,
            hi_inclusive: true,
        };
        if ratio < w_prime_z {
            let w_x = spec.eval(x)?;
            let gap = |e: f64| l * (w_x - spec.eval(e).unwrap()) + c * (e - x);
            let epsilon_star = critical::solve_root_monotone(
                gap,
                OPEN_UNIT_MARGIN,
                v - OPEN_UNIT_MARGIN,
                ROOT_TOL,
            )?;
            WlEquilibriumSet {
                intervals: vec![
                    low,
                    Interval {
                        lo: 1.0 - epsilon_star,
                        hi: 1.0,
                        lo_inclusive: false,
                        hi_inclusive: true,
                    },
                ],
                regime: WlRegime::TwoBands,
                x_upper: Some(x),
                v: Some(v),
                epsilon_star: Some(epsilon_star),
            }
        } else {
            WlEquilibriumSet {
                intervals: vec![low],
                regime: WlRegime::SingleBand,
                x_upper: Some(x),
                v: Some(v),
                epsilon_star: None,
            }
        }
    };

    for interval in &set.intervals {
        let margin = 1e-9 * (interval.hi - interval.lo).max(1e-3);
        let lo = if interval.lo_inclusive { interval.lo } else { interval.lo + margin };
        let hi = if interval.hi_inclusive { interval.hi } else { interval.hi - margin };
        for k in 0..samples {
            let s = lo + (hi - lo) * k as f64 / (samples - 1) as f64;
            verify_common(game, s.clamp(0.0, 1.0), DEFAULT_ORACLE_TOL)?;
        }
    }
    Ok(set)
}

/// One equilibrium per maximal independent set: members invest the
/// single-player optimum, everyone else zero. At most `limit` profiles;
/// exact enumeration only, so `n` must be within the enumeration cap.
/// Every profile is re-checked by the deviation oracle before return.
pub fn best_shot_equilibria(
    game: &GameSpec,
    limit: usize,
) -> Result<Vec<StrategyProfile>, WlBsError> {
    if game.externality() != Externality::BestShot {
        return Err(WlBsError::WrongExternality {
            want: Externality::BestShot,
            got: game.externality(),
        });
    }
    let (spec, c, l) = homogeneous_params(game)?;
    if game.n() > crate::network::MIS_EXACT_CAP {
        return Err(WlBsError::Graph(GraphError::TooLarge {
            n: game.n(),
            cap: crate::network::MIS_EXACT_CAP,
        }));
    }
    let optimum = single_player_optimum(&spec, c, l)?;
    let sets = game.graph().maximal_independent_sets(limit)?;
    let mut profiles = Vec::with_capacity(sets.len());
    for set in sets {
        let mut s = vec![0.0; game.n()];
        for &node in &set {
            s[node - 1] = optimum.s_star;
        }
        let profile = StrategyProfile::new(s)?;
        let (ok, violation) = verify_wl_bs(game, &profile, DEFAULT_ORACLE_TOL)?;
        if !ok {
            return Err(WlBsError::SampleFailed {
                s: optimum.s_star,
                violation,
            });
        }
        profiles.push(profile);
    }
    Ok(profiles)
}
