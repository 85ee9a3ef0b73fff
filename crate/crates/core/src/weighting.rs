//! Probability weighting functions and their first two derivatives.
//!
//! The Prelec family `w(x) = exp(-(-ln x)^alpha)` with `alpha` in `(0, 1)`
//! is inverse-S shaped: it overweights small probabilities, underweights
//! large ones, fixes `1/e`, and its derivative attains its minimum value
//! `alpha` there. `alpha = 1` and [`WeightingSpec::Identity`] both reduce to
//! the linear weighting `w(x) = x` of a risk-neutral player.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Probability below which `w'` blows up fast enough that root brackets
/// must stay strictly inside the unit interval.
pub const OPEN_UNIT_MARGIN: f64 = 1e-12;

/// Errors from weighting evaluation and shape validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightingError {
    #[error("Prelec alpha must lie in (0, 1], got {0}")]
    InvalidAlpha(f64),
    #[error("probability {0} is outside [0, 1]")]
    OutsideClosedUnit(f64),
    #[error("derivatives are defined only on the open interval (0, 1), got {0}")]
    OutsideOpenUnit(f64),
    #[error("shape check needs a grid of at least {min} points, got {got}")]
    GridTooSmall { got: usize, min: usize },
}

/// A probability weighting function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WeightingSpec {
    /// `w(x) = exp(-(-ln x)^alpha)` with `alpha` in `(0, 1]`.
    Prelec { alpha: f64 },
    /// Linear weighting `w(x) = x` (risk-neutral perception).
    Identity,
}

/// Shape diagnostics for a weighting function.
///
/// `unique_min` and `concave_convex_split` capture the inverse-S shape:
/// `w'` has a single interior minimum and `w''` changes sign exactly once,
/// from negative to positive. `ratio_bound_ok` checks `w''/w' < 1/(1-x)` on
/// `(x_min, 1)` and `prime_convex_ok` checks midpoint convexity of `w'`
/// there; both must hold for the equilibrium theory downstream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub x_min: f64,
    pub w_prime_min: f64,
    pub unique_min: bool,
    pub concave_convex_split: bool,
    pub endpoint_blowup: bool,
    pub ratio_bound_ok: bool,
    pub prime_convex_ok: bool,
}

/// `-ln x`, switching to a two-term series for `x > 1 - 1e-8` where the
/// direct logarithm loses precision to cancellation.
fn neg_ln(x: f64) -> f64 {
    let u = 1.0 - x;
    if u < 1e-8 {
        u + 0.5 * u * u
    } else {
        -x.ln()
    }
}

impl WeightingSpec {
    /// Builds a Prelec weighting, rejecting `alpha` outside `(0, 1]`.
    pub fn prelec(alpha: f64) -> Result<Self, WeightingError> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
            return Err(WeightingError::InvalidAlpha(alpha));
        }
        Ok(WeightingSpec::Prelec { alpha })
    }

    /// The curvature parameter, if this is a Prelec spec.
    pub fn alpha(&self) -> Option<f64> {
        match self {
            WeightingSpec::Prelec { alpha } => Some(*alpha),
            WeightingSpec::Identity => None,
        }
    }

    /// True when the weighting is the straight line `w(x) = x`, either as
    /// [`WeightingSpec::Identity`] or as Prelec with `alpha = 1`.
    pub fn is_linear(&self) -> bool {
        match self {
            WeightingSpec::Prelec { alpha } => *alpha == 1.0,
            WeightingSpec::Identity => true,
        }
    }

    /// `w(x)` on `[0, 1]`, with the endpoint values `w(0) = 0` and
    /// `w(1) = 1` taken by continuity.
    pub fn eval(&self, x: f64) -> Result<f64, WeightingError> {
        if !x.is_finite() || !(0.0..=1.0).contains(&x) {
            return Err(WeightingError::OutsideClosedUnit(x));
        }
        match self {
            WeightingSpec::Identity => Ok(x),
            WeightingSpec::Prelec { alpha } => {
                if x == 0.0 {
                    Ok(0.0)
                } else if x == 1.0 {
                    Ok(1.0)
                } else {
                    Ok((-neg_ln(x).powf(*alpha)).exp())
                }
            }
        }
    }

    /// `w'(x)` on the open interval `(0, 1)`.
    ///
    /// The endpoints are rejected: for Prelec `alpha < 1` the derivative
    /// diverges at both ends, so no finite value would be honest.
    pub fn prime(&self, x: f64) -> Result<f64, WeightingError> {
        if !x.is_finite() || x <= 0.0 || x >= 1.0 {
            return Err(WeightingError::OutsideOpenUnit(x));
        }
        match self {
            WeightingSpec::Identity => Ok(1.0),
            WeightingSpec::Prelec { alpha } => {
                let t = neg_ln(x);
                Ok((-t.powf(*alpha)).exp() * alpha / x * t.powf(alpha - 1.0))
            }
        }
    }

    /// `w''(x)` on the open interval `(0, 1)`.
    pub fn second(&self, x: f64) -> Result<f64, WeightingError> {
        if !x.is_finite() || x <= 0.0 || x >= 1.0 {
            return Err(WeightingError::OutsideOpenUnit(x));
        }
        match self {
            WeightingSpec::Identity => Ok(0.0),
            WeightingSpec::Prelec { alpha } => {
                let t = neg_ln(x);
                let prime = self.prime(x)?;
                Ok(prime / (x * t) * (1.0 - t + alpha * (t.powf(*alpha) - 1.0)))
            }
        }
    }

    /// Samples `w'` and `w''` on a uniform grid of `(0, 1)` and reports
    /// whether the shape assumptions the solvers rely on hold.
    pub fn check_shape(&self, grid_size: usize) -> Result<ShapeReport, WeightingError> {
        const MIN_GRID: usize = 100;
        if grid_size < MIN_GRID {
            return Err(WeightingError::GridTooSmall {
                got: grid_size,
                min: MIN_GRID,
            });
        }
        let xs: Vec<f64> = (1..=grid_size)
            .map(|k| k as f64 / (grid_size + 1) as f64)
            .collect();
        let seconds: Vec<f64> = xs.iter().map(|&x| self.second(x).unwrap()).collect();

        let mut neg_to_pos = 0usize;
        let mut pos_to_neg = 0usize;
        let mut crossing = None;
        for k in 1..seconds.len() {
            if seconds[k - 1] < 0.0 && seconds[k] > 0.0 {
                neg_to_pos += 1;
                crossing = Some((xs[k - 1], xs[k]));
            } else if seconds[k - 1] > 0.0 && seconds[k] < 0.0 {
                pos_to_neg += 1;
            }
        }
        let unique_min = neg_to_pos == 1 && pos_to_neg == 0;
        let concave_convex_split = unique_min;

        let x_min = match crossing {
            Some((mut lo, mut hi)) => {
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.second(lo).unwrap() * self.second(mid).unwrap() <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            }
            None => {
                // No curvature sign change: `w'` is flat (linear weighting),
                // so report the grid argmin of `w'` instead.
                let mut best = xs[0];
                let mut best_p = self.prime(xs[0]).unwrap();
                for &x in &xs {
                    let p = self.prime(x).unwrap();
                    if p < best_p {
                        best_p = p;
                        best = x;
                    }
                }
                best
            }
        };
        let w_prime_min = self.prime(x_min).unwrap();

        let endpoint_blowup = self.prime(1e-12).unwrap() > self.prime(1e-6).unwrap()
            && self.prime(1.0 - 1e-12).unwrap() > self.prime(1.0 - 1e-6).unwrap();

        let mut ratio_bound_ok = true;
        for (k, &x) in xs.iter().enumerate() {
            if x <= x_min {
                continue;
            }
            let bound = 1.0 / (1.0 - x);
            if seconds[k] / self.prime(x).unwrap() >= bound - 1e-12 {
                ratio_bound_ok = false;
            }
        }

        let mut prime_convex_ok = true;
        let right: Vec<f64> = xs.iter().copied().filter(|&x| x > x_min).collect();
        for win in right.windows(3) {
            let (a, b, c) = (win[0], win[1], win[2]);
            let mid = self.prime(b).unwrap();
            let avg = 0.5 * (self.prime(a).unwrap() + self.prime(c).unwrap());
            if mid > avg + 1e-12 * avg.abs().max(1.0) {
                prime_convex_ok = false;
            }
        }

        Ok(ShapeReport {
            x_min,
            w_prime_min,
            unique_min,
            concave_convex_split,
            endpoint_blowup,
            ratio_bound_ok,
            prime_convex_ok,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const X_MIN: f64 = 1.0 / std::f64::consts::E;

    fn prelec(alpha: f64) -> WeightingSpec {
        WeightingSpec::prelec(alpha).unwrap()
    }

    #[test]
    fn construction_rejects_bad_alpha() {
        for alpha in [0.0, -0.3, 1.0 + 1e-12, f64::NAN, f64::INFINITY] {
            assert!(WeightingSpec::prelec(alpha).is_err(), "alpha={alpha}");
        }
        assert!(WeightingSpec::prelec(1.0).is_ok());
        assert!(WeightingSpec::prelec(1e-6).is_ok());
    }

    #[test]
    fn eval_matches_frozen_value() {
        // exp(-(ln 2)^0.6) evaluated at 40-digit precision.
        let w = prelec(0.6);
        assert!((w.eval(0.5).unwrap() - 0.44816543873209731642).abs() < 1e-15);
    }

    #[test]
    fn eval_endpoints_and_domain() {
        let w = prelec(0.6);
        assert_eq!(w.eval(0.0).unwrap(), 0.0);
        assert_eq!(w.eval(1.0).unwrap(), 1.0);
        for x in [-1e-9, 1.0 + 1e-9, f64::NAN] {
            assert!(w.eval(x).is_err(), "x={x}");
        }
        for x in [0.0, 1.0, -0.1, 1.1] {
            assert!(w.prime(x).is_err(), "x={x}");
            assert!(w.second(x).is_err(), "x={x}");
        }
    }

    #[test]
    fn fixed_point_identities_at_one_over_e() {
        for k in 2..=9 {
            let alpha = k as f64 / 10.0;
            let w = prelec(alpha);
            assert!((w.eval(X_MIN).unwrap() - X_MIN).abs() < 1e-10, "alpha={alpha}");
            assert!((w.prime(X_MIN).unwrap() - alpha).abs() < 1e-10, "alpha={alpha}");
            assert!(w.second(X_MIN).unwrap().abs() < 1e-10, "alpha={alpha}");
        }
    }

    #[test]
    fn identity_is_exact() {
        let w = WeightingSpec::Identity;
        for x in [0.0, 0.25, 0.5, 1.0] {
            assert_eq!(w.eval(x).unwrap(), x);
        }
        assert_eq!(w.prime(0.3).unwrap(), 1.0);
        assert_eq!(w.second(0.3).unwrap(), 0.0);
        assert!(w.is_linear());
        assert!(prelec(1.0).is_linear());
        assert!(!prelec(0.999).is_linear());
    }

    #[test]
    fn prelec_alpha_one_behaves_linearly() {
        let w = prelec(1.0);
        for x in [0.05, 0.37, 0.93] {
            assert!((w.eval(x).unwrap() - x).abs() < 1e-14);
            assert!((w.prime(x).unwrap() - 1.0).abs() < 1e-14);
            assert!(w.second(x).unwrap().abs() < 1e-13);
        }
    }

    #[test]
    fn second_derivative_matches_frozen_value() {
        let w = prelec(0.4);
        let got = w.second(0.9).unwrap();
        assert!((got - 7.9153769976605582347).abs() / 7.9153769976605582347 < 1e-12);
    }

    #[test]
    fn prime_consistent_with_central_difference() {
        let h = 1e-7;
        for alpha in [0.2, 0.4, 0.6, 0.8, 0.95] {
            let w = prelec(alpha);
            for k in 1..=99 {
                let x = k as f64 / 100.0;
                let fd = (w.eval(x + h).unwrap() - w.eval(x - h).unwrap()) / (2.0 * h);
                let exact = w.prime(x).unwrap();
                assert!(
                    (fd - exact).abs() / exact.abs().max(1.0) < 1e-6,
                    "alpha={alpha} x={x}"
                );
            }
        }
    }

    #[test]
    fn second_consistent_with_central_difference_of_prime() {
        let h = 1e-6;
        for alpha in [0.2, 0.4, 0.6, 0.8, 0.95] {
            let w = prelec(alpha);
            for k in 1..=99 {
                let x = k as f64 / 100.0;
                let fd = (w.prime(x + h).unwrap() - w.prime(x - h).unwrap()) / (2.0 * h);
                let exact = w.second(x).unwrap();
                assert!(
                    (fd - exact).abs() / exact.abs().max(1.0) < 1e-5,
                    "alpha={alpha} x={x}"
                );
            }
        }
    }

    #[test]
    fn eval_is_monotone_near_one() {
        // Exercises the series branch of the internal logarithm.
        let w = prelec(0.6);
        let xs = [1.0 - 1e-7, 1.0 - 1e-9, 1.0 - 1e-11, 1.0 - 1e-13];
        for pair in xs.windows(2) {
            let (a, b) = (w.eval(pair[0]).unwrap(), w.eval(pair[1]).unwrap());
            assert!(a < b && b < 1.0, "w({}) = {a}, w({}) = {b}", pair[0], pair[1]);
        }
        assert!(w.prime(1.0 - 1e-12).unwrap().is_finite());
    }

    #[test]
    fn shape_report_prelec() {
        for alpha in [0.6, 0.95] {
            let r = prelec(alpha).check_shape(500).unwrap();
            assert!(r.unique_min, "alpha={alpha}");
            assert!((r.x_min - X_MIN).abs() < 1e-8, "alpha={alpha}");
            assert!((r.w_prime_min - alpha).abs() < 1e-8, "alpha={alpha}");
            assert!(r.concave_convex_split && r.endpoint_blowup, "alpha={alpha}");
            assert!(r.ratio_bound_ok && r.prime_convex_ok, "alpha={alpha}");
        }
    }

    #[test]
    fn shape_report_identity() {
        let r = WeightingSpec::Identity.check_shape(200).unwrap();
        assert!(!r.unique_min);
        assert!(!r.endpoint_blowup);
        assert!(r.ratio_bound_ok && r.prime_convex_ok);
        assert_eq!(r.w_prime_min, 1.0);
    }

    #[test]
    fn shape_check_rejects_tiny_grid() {
        assert!(matches!(
            prelec(0.6).check_shape(99),
            Err(WeightingError::GridTooSmall { .. })
        ));
    }
}
