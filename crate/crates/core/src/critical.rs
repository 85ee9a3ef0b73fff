//! Critical probabilities derived from a weighting function.
//!
//! For a Prelec weighting with `alpha < 1` and a target ratio
//! `theta = d c / L`, the equation `w'(x) = theta` has either no solution
//! (`theta <= alpha`, where investing fully is dominant) or exactly two:
//! `V` below `1/e` and `X` above it. `X` is the true attack probability an
//! interior best response aims at. Two more scalar points matter downstream:
//! `z`, the unique point above `1/e` where `w'(z) = w(z)/z` (the cost
//! threshold for an isolated player), and `xbar`, the unique crossing of the
//! derivatives of two Prelec weightings with different curvature (the
//! boundary between comparative-statics regimes).

use crate::weighting::{WeightingError, WeightingSpec, OPEN_UNIT_MARGIN};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Location of the minimum of `w'` for every Prelec weighting.
pub const X_MIN: f64 = 1.0 / std::f64::consts::E;

/// Default residual tolerance for scalar root solves.
pub const ROOT_TOL: f64 = 1e-10;

/// Iteration cap for the bracketed root-finder.
pub const MAX_ITERATIONS: usize = 200;

/// Errors from critical-point computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CriticalError {
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}")]
    NoBracket { lo: f64, hi: f64, flo: f64, fhi: f64 },
    #[error("function value at {x} is not finite")]
    NonFinite { x: f64 },
    #[error("residual {residual} above {tol} after {iterations} iterations")]
    NoConvergence {
        residual: f64,
        tol: f64,
        iterations: usize,
    },
    #[error("critical points require a curved Prelec weighting; linear weighting has constant slope 1")]
    LinearWeighting,
    #[error("theta must be positive and finite, got {0}")]
    InvalidTheta(f64),
    #[error("curvature parameters must satisfy 0 < alpha1 < alpha2 < 1, got {0} and {1}")]
    AlphaOrder(f64, f64),
    #[error("argument {0} outside [1/e, 1)")]
    OutsideUpperBranch(f64),
    #[error("interior critical points do not exist at theta = {theta}: full investment is dominant")]
    NotApplicable { theta: f64 },
    #[error("cost c and loss L must be positive and finite, got c = {c}, L = {l}")]
    InvalidCostLoss { c: f64, l: f64 },
    #[error("extended neighborhood size must be at least 1, got {0}")]
    InvalidDegree(usize),
    #[error(transparent)]
    Weighting(#[from] WeightingError),
}

/// The interior solutions of `w'(x) = theta`, when they exist.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoints {
    pub x_min: f64,
    /// Lower root `V < 1/e`, present iff `interior_exists`.
    pub v: Option<f64>,
    /// Upper root `X > 1/e`, present iff `interior_exists`.
    pub x_upper: Option<f64>,
    pub theta: f64,
    pub interior_exists: bool,
    /// True when `theta` equals the minimum slope exactly, so the roots
    /// degenerate to the single tangency point `1/e`.
    pub tangency: bool,
}

/// Per-condition breakdown of the large-neighborhood regularity check:
/// `X - V > 1/d`, `V < 1/d`, and `w(1/d) < c/L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionLargeNReport {
    pub holds: bool,
    /// `X - V - 1/d`; the first condition holds iff this is positive.
    pub gap_xv: f64,
    pub v_small: bool,
    pub w_at_inv_d: f64,
    pub w_bound_ok: bool,
    pub theta: f64,
}

/// Finds a root of `f` on `[lo, hi]` by bisection.
///
/// Requires a sign change between the endpoints. Stops when the bracket
/// width or the residual drops below `tol`.
pub fn solve_root_monotone<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64, CriticalError>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    let mut flo = f(lo);
    let fhi = f(hi);
    for (x, fx) in [(lo, flo), (hi, fhi)] {
        if !fx.is_finite() {
            return Err(CriticalError::NonFinite { x });
        }
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(CriticalError::NoBracket { lo, hi, flo, fhi });
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..MAX_ITERATIONS {
        mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if !fmid.is_finite() {
            return Err(CriticalError::NonFinite { x: mid });
        }
        if fmid == 0.0 || hi - lo < tol || fmid.abs() < tol {
            return Ok(mid);
        }
        if flo.signum() == fmid.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    let residual = f(mid).abs();
    Err(CriticalError::NoConvergence {
        residual,
        tol,
        iterations: MAX_ITERATIONS,
    })
}

fn require_curved(spec: &WeightingSpec) -> Result<f64, CriticalError> {
    match spec.alpha() {
        Some(alpha) if !spec.is_linear() => Ok(alpha),
        _ => Err(CriticalError::LinearWeighting),
    }
}

/// Solves `w'(x) = theta` for both interior roots.
///
/// Returns `interior_exists = false` when `theta <= alpha`, the regime
/// where full investment is every player's dominant strategy.
pub fn critical_points(
    spec: &WeightingSpec,
    theta: f64,
) -> Result<CriticalPoints, CriticalError> {
    let alpha = require_curved(spec)?;
    if !theta.is_finite() || theta <= 0.0 {
        return Err(CriticalError::InvalidTheta(theta));
    }
    if theta <= alpha {
        return Ok(CriticalPoints {
            x_min: X_MIN,
            v: None,
            x_upper: None,
            theta,
            interior_exists: false,
            tangency: theta == alpha,
        });
    }
    let f = |x: f64| spec.prime(x).unwrap() - theta;
    let v = solve_root_monotone(f, OPEN_UNIT_MARGIN, X_MIN - OPEN_UNIT_MARGIN, ROOT_TOL)?;
    let x_upper = solve_root_monotone(f, X_MIN + OPEN_UNIT_MARGIN, 1.0 - OPEN_UNIT_MARGIN, ROOT_TOL)?;
    Ok(CriticalPoints {
        x_min: X_MIN,
        v: Some(v),
        x_upper: Some(x_upper),
        theta,
        interior_exists: true,
        tangency: false,
    })
}

/// Solves `w'(z) = w(z)/z` for the unique `z > 1/e` and returns
/// `(z, w'(z))`. `w'(z)` is the cost-ratio threshold below which an
/// isolated player invests fully.
pub fn solve_z(spec: &WeightingSpec) -> Result<(f64, f64), CriticalError> {
    require_curved(spec)?;
    let f = |x: f64| x * spec.prime(x).unwrap() - spec.eval(x).unwrap();
    let z = solve_root_monotone(f, X_MIN + OPEN_UNIT_MARGIN, 1.0 - OPEN_UNIT_MARGIN, 1e-12)?;
    Ok((z, spec.prime(z)?))
}

/// The ratio `g(x) = (-ln x)^(a2-a1) * exp((-ln x)^a1 - (-ln x)^a2)` of two
/// Prelec derivatives. Strictly decreasing from `g(1/e) = 1` toward 0 as
/// `x` approaches 1.
pub fn g_eval(alpha1: f64, alpha2: f64, x: f64) -> Result<f64, CriticalError> {
    check_alpha_order(alpha1, alpha2)?;
    if !x.is_finite() || !(X_MIN..1.0).contains(&x) {
        return Err(CriticalError::OutsideUpperBranch(x));
    }
    let t = -x.ln();
    Ok(t.powf(alpha2 - alpha1) * (t.powf(alpha1) - t.powf(alpha2)).exp())
}

fn check_alpha_order(alpha1: f64, alpha2: f64) -> Result<(), CriticalError> {
    let ok = alpha1.is_finite()
        && alpha2.is_finite()
        && 0.0 < alpha1
        && alpha1 < alpha2
        && alpha2 < 1.0;
    if ok {
        Ok(())
    } else {
        Err(CriticalError::AlphaOrder(alpha1, alpha2))
    }
}

/// Solves for the unique `xbar > 1/e` where the derivatives of the two
/// Prelec weightings cross, i.e. `g(xbar) = alpha1/alpha2`.
pub fn solve_xbar(alpha1: f64, alpha2: f64) -> Result<f64, CriticalError> {
    check_alpha_order(alpha1, alpha2)?;
    let target = alpha1 / alpha2;
    solve_root_monotone(
        |x| g_eval(alpha1, alpha2, x).unwrap() - target,
        X_MIN + OPEN_UNIT_MARGIN,
        1.0 - OPEN_UNIT_MARGIN,
        1e-12,
    )
}

/// Evaluates the three large-neighborhood conditions for a player with
/// cost `c`, loss `l`, and extended neighborhood size `d`.
///
/// Errors with [`CriticalError::NotApplicable`] when `d c / L <= alpha`,
/// where no interior critical points exist and the conditions are moot.
pub fn check_assumption_large_n(
    spec: &WeightingSpec,
    c: f64,
    l: f64,
    d: usize,
) -> Result<AssumptionLargeNReport, CriticalError> {
    if !(c.is_finite() && c > 0.0 && l.is_finite() && l > 0.0) {
        return Err(CriticalError::InvalidCostLoss { c, l });
    }
    if d < 1 {
        return Err(CriticalError::InvalidDegree(d));
    }
    let theta = d as f64 * c / l;
    let cp = critical_points(spec, theta)?;
    if !cp.interior_exists {
        return Err(CriticalError::NotApplicable { theta });
    }
    let (v, x) = (cp.v.unwrap(), cp.x_upper.unwrap());
    let inv_d = 1.0 / d as f64;
    let gap_xv = x - v - inv_d;
    let v_small = v < inv_d;
    let w_at_inv_d = spec.eval(inv_d)?;
    let w_bound_ok = w_at_inv_d < c / l;
    Ok(AssumptionLargeNReport {
        holds: gap_xv > 0.0 && v_small && w_bound_ok,
        gap_xv,
        v_small,
        w_at_inv_d,
        w_bound_ok,
        theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prelec(alpha: f64) -> WeightingSpec {
        WeightingSpec::prelec(alpha).unwrap()
    }

    struct RootCase {
        alpha: f64,
        theta: f64,
        v: f64,
        x_upper: f64,
    }

    // Upper and lower roots of w'(x) = theta, frozen from a 40-digit
    // bisection oracle.
    const ROOT_CASES: &[RootCase] = &[
        RootCase { alpha: 0.6, theta: 0.9, v: 0.081154513062332206736, x_upper: 0.79524389285224631143 },
        RootCase { alpha: 0.6, theta: 1.8, v: 0.0200307359409338187, x_upper: 0.95289924607514432269 },
        RootCase { alpha: 0.6, theta: 2.25, v: 0.013462714896511841228, x_upper: 0.97116672533786161623 },
        RootCase { alpha: 0.4, theta: 0.9, v: 0.047984594400848842925, x_upper: 0.85884415739183049132 },
        RootCase { alpha: 0.8, theta: 0.9, v: 0.13700455838007593117, x_upper: 0.69117841779018487535 },
        RootCase { alpha: 0.4, theta: 1.5, v: 0.021430992108064812286, x_upper: 0.93252799310268407425 },
        RootCase { alpha: 0.8, theta: 1.5, v: 0.022028632910579130704, x_upper: 0.96428381162050028021 },
    ];

    #[test]
    fn root_finder_solves_linear_function() {
        let r = solve_root_monotone(|x| x - 0.5, 0.0, 1.0, 1e-12).unwrap();
        assert!((r - 0.5).abs() < 1e-12);
    }

    #[test]
    fn root_finder_rejects_bad_brackets() {
        assert!(matches!(
            solve_root_monotone(|x| x + 2.0, 0.0, 1.0, 1e-12),
            Err(CriticalError::NoBracket { .. })
        ));
        assert!(matches!(
            solve_root_monotone(|x| if x > 0.5 { f64::NAN } else { -1.0 }, 0.0, 1.0, 1e-12),
            Err(CriticalError::NonFinite { .. })
        ));
    }

    #[test]
    fn critical_points_match_frozen_roots() {
        for case in ROOT_CASES {
            let w = prelec(case.alpha);
            let cp = critical_points(&w, case.theta).unwrap();
            assert!(cp.interior_exists);
            let (v, x) = (cp.v.unwrap(), cp.x_upper.unwrap());
            assert!((v - case.v).abs() < 1e-9, "V alpha={} theta={}", case.alpha, case.theta);
            assert!((x - case.x_upper).abs() < 1e-9, "X alpha={} theta={}", case.alpha, case.theta);
            assert!(v < X_MIN && X_MIN < x);
            assert!((w.prime(v).unwrap() - case.theta).abs() < 1e-8);
            assert!((w.prime(x).unwrap() - case.theta).abs() < 1e-8);
        }
    }

    #[test]
    fn critical_points_dominant_regime() {
        let cp = critical_points(&prelec(0.6), 0.5).unwrap();
        assert!(!cp.interior_exists && cp.v.is_none() && cp.x_upper.is_none());
        assert!(!cp.tangency);
        let cp = critical_points(&prelec(0.6), 0.6).unwrap();
        assert!(!cp.interior_exists && cp.tangency);
    }

    #[test]
    fn critical_points_rejects_linear_and_bad_theta() {
        assert!(matches!(
            critical_points(&WeightingSpec::Identity, 0.9),
            Err(CriticalError::LinearWeighting)
        ));
        assert!(matches!(
            critical_points(&prelec(1.0), 0.9),
            Err(CriticalError::LinearWeighting)
        ));
        for theta in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                critical_points(&prelec(0.6), theta),
                Err(CriticalError::InvalidTheta(_))
            ));
        }
    }

    #[test]
    fn z_matches_frozen_values() {
        struct ZCase {
            alpha: f64,
            z: f64,
            wp_z: f64,
        }
        let cases = [
            ZCase { alpha: 0.4, z: 0.80480649501094768552, wp_z: 0.72200001884269995445 },
            ZCase { alpha: 0.6, z: 0.75664976008309633206, wp_z: 0.83035396884286166979 },
            ZCase { alpha: 0.8, z: 0.72059357275812810058, wp_z: 0.92134566340119324675 },
        ];
        for case in cases {
            let w = prelec(case.alpha);
            let (z, wp_z) = solve_z(&w).unwrap();
            assert!((z - case.z).abs() < 1e-9, "alpha={}", case.alpha);
            assert!((wp_z - case.wp_z).abs() < 1e-9, "alpha={}", case.alpha);
            assert!((z * w.prime(z).unwrap() - w.eval(z).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn slope_exceeds_chord_above_z() {
        let w = prelec(0.4);
        let (z, _) = solve_z(&w).unwrap();
        for k in 1..=20 {
            let x = z + (1.0 - 1e-6 - z) * k as f64 / 21.0;
            let slope = w.prime(x).unwrap();
            let chord = w.eval(x).unwrap() / x;
            assert!(slope > chord, "x={x}: slope {slope} <= chord {chord}");
        }
    }

    #[test]
    fn g_matches_frozen_values() {
        assert!((g_eval(0.4, 0.8, X_MIN).unwrap() - 1.0).abs() < 1e-12);
        assert!((g_eval(0.4, 0.8, 0.5).unwrap() - 0.97157626671096222237).abs() < 1e-14);
        assert!((g_eval(0.4, 0.8, 0.7).unwrap() - 0.82808340928466313527).abs() < 1e-14);
    }

    #[test]
    fn g_is_strictly_decreasing() {
        let mut prev = f64::INFINITY;
        for k in 0..=200 {
            let x = X_MIN + (1.0 - 1e-9 - X_MIN) * k as f64 / 200.0;
            let g = g_eval(0.4, 0.8, x).unwrap();
            assert!(g < prev, "g not decreasing at x={x}");
            prev = g;
        }
    }

    #[test]
    fn g_rejects_bad_arguments() {
        assert!(matches!(g_eval(0.8, 0.4, 0.5), Err(CriticalError::AlphaOrder(..))));
        assert!(matches!(g_eval(0.4, 0.4, 0.5), Err(CriticalError::AlphaOrder(..))));
        assert!(matches!(g_eval(0.4, 0.8, 0.2), Err(CriticalError::OutsideUpperBranch(_))));
        assert!(matches!(g_eval(0.4, 0.8, 1.0), Err(CriticalError::OutsideUpperBranch(_))));
    }

    #[test]
    fn xbar_matches_frozen_value_and_crossing() {
        let xbar = solve_xbar(0.4, 0.8).unwrap();
        assert!((xbar - 0.90725940608076318856).abs() < 1e-9);
        let (w1, w2) = (prelec(0.4), prelec(0.8));
        assert!((w1.prime(xbar).unwrap() - w2.prime(xbar).unwrap()).abs() < 1e-6);
        assert!(w1.prime(0.8).unwrap() < w2.prime(0.8).unwrap());
        assert!(w1.prime(0.95).unwrap() > w2.prime(0.95).unwrap());
    }

    #[test]
    fn assumption_report_examples() {
        let r = check_assumption_large_n(&prelec(0.6), 0.45, 1.0, 2).unwrap();
        assert!(r.holds && r.v_small && r.w_bound_ok);
        assert!((r.w_at_inv_d - 0.44816543873209731642).abs() < 1e-12);
        assert!((r.gap_xv - 0.21408937979).abs() < 1e-9);

        // With alpha = 0.4, c/L = 0.3 the third condition w(1/d) < c/L
        // fails at d = 3 (w(1/3) = 0.3540) and holds from d = 5 on.
        let r = check_assumption_large_n(&prelec(0.4), 0.3, 1.0, 3).unwrap();
        assert!(!r.holds && !r.w_bound_ok && r.v_small);
        assert!((r.w_at_inv_d - 0.3540434307173974959).abs() < 1e-12);
        let r = check_assumption_large_n(&prelec(0.4), 0.3, 1.0, 5).unwrap();
        assert!(r.holds);

        assert!(matches!(
            check_assumption_large_n(&prelec(0.6), 0.2, 1.0, 2),
            Err(CriticalError::NotApplicable { .. })
        ));
        assert!(matches!(
            check_assumption_large_n(&prelec(0.6), -0.1, 1.0, 2),
            Err(CriticalError::InvalidCostLoss { .. })
        ));
        assert!(matches!(
            check_assumption_large_n(&prelec(0.6), 0.45, 1.0, 0),
            Err(CriticalError::InvalidDegree(0))
        ));
    }

    #[test]
    fn target_investment_decreases_with_neighborhood_size() {
        for alpha in [0.4, 0.6, 0.8] {
            let w = prelec(alpha);
            let mut prev = f64::INFINITY;
            for d in 2..=50 {
                let theta = d as f64 * 0.45;
                let x = critical_points(&w, theta).unwrap().x_upper.unwrap();
                let target = d as f64 * (1.0 - x);
                assert!(target < prev, "alpha={alpha} d={d}");
                prev = target;
            }
        }
    }
}
