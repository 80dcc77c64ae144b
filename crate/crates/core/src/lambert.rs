//! Real branches of the Lambert W function.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const INV_E: f64 = 1.0 / E;
const MAX_ITER: usize = 64;
const REL_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `W₀`, defined on `[−1/e, ∞)`, values `≥ −1`.
    Principal,
    /// `W₋₁`, defined on `[−1/e, 0)`, values `≤ −1`.
    Lower,
}

/// Solves `w·eʷ = x` on the requested real branch.
///
/// Halley iteration from a branch-point series near `−1/e`, a log
/// asymptotic for large or tiny arguments, and `ln(1 + x)` elsewhere.
pub fn lambert_w(branch: Branch, x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("Lambert W of NaN".into()));
    }
    // tolerate the rounding of −1/e itself
    let x = if x < -INV_E && x > -INV_E - 1e-16 { -INV_E } else { x };
    match branch {
        Branch::Principal => {
            if x < -INV_E {
                return Err(Error::Domain(format!("W0 needs x >= -1/e, got {x}")));
            }
            if x == 0.0 {
                return Ok(0.0);
            }
            if x.is_infinite() {
                return Ok(f64::INFINITY);
            }
        }
        Branch::Lower => {
            if !(-INV_E..0.0).contains(&x) {
                return Err(Error::Domain(format!("W-1 needs -1/e <= x < 0, got {x}")));
            }
        }
    }
    if x == -INV_E {
        return Ok(-1.0);
    }
    Ok(halley(x, initial_guess(branch, x)))
}

fn initial_guess(branch: Branch, x: f64) -> f64 {
    // p → 0 at the branch point
    let p2 = 2.0 * (E * x + 1.0);
    match branch {
        Branch::Principal => {
            if x < -0.25 {
                let p = p2.max(0.0).sqrt();
                -1.0 + p - p2 / 3.0 + 11.0 / 72.0 * p * p2
            } else if x < 3.0 {
                x.ln_1p() * (1.0 - x.ln_1p().ln_1p() / (2.0 + x.ln_1p()))
            } else {
                let l1 = x.ln();
                let l2 = l1.ln();
                l1 - l2 + l2 / l1
            }
        }
        Branch::Lower => {
            if x < -0.25 {
                let p = p2.max(0.0).sqrt();
                -1.0 - p - p2 / 3.0 - 11.0 / 72.0 * p * p2
            } else {
                let l1 = (-x).ln();
                let l2 = (-l1).ln();
                l1 - l2 + l2 / l1
            }
        }
    }
}

fn halley(x: f64, mut w: f64) -> f64 {
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let step = f / denom;
        w -= step;
        if step.abs() <= REL_TOL * (1.0 + w.abs()) {
            break;
        }
    }
    w
}

/// `W₀(eᴸ)` for large `L` without forming `eᴸ`: solves `w + ln w = L`.
pub fn lambert_w0_of_exp(log_x: f64) -> Result<f64> {
    if log_x.is_nan() {
        return Err(Error::Domain("Lambert W of NaN".into()));
    }
    if log_x < 600.0 {
        return lambert_w(Branch::Principal, log_x.exp());
    }
    let mut w = log_x - log_x.ln();
    for _ in 0..MAX_ITER {
        // Newton on g(w) = w + ln w − L
        let step = (w + w.ln() - log_x) / (1.0 + 1.0 / w);
        w -= step;
        if step.abs() <= REL_TOL * w.abs() {
            break;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: fixed-point iteration `w ← e^{-w}` for Ω = W₀(1).
    fn omega_fixed_point() -> f64 {
        let mut w = 0.5f64;
        for _ in 0..10_000 {
            let next = (-w).exp();
            if (next - w).abs() < 1e-16 {
                return next;
            }
            // averaged update converges much faster than the raw map
            w = 0.5 * (w + next);
        }
        w
    }

    #[test]
    fn identities() {
        assert_eq!(lambert_w(Branch::Principal, 0.0).unwrap(), 0.0);
        assert!((lambert_w(Branch::Principal, E).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(lambert_w(Branch::Principal, -INV_E).unwrap(), -1.0);
        assert_eq!(lambert_w(Branch::Lower, -INV_E).unwrap(), -1.0);
    }

    #[test]
    fn omega_constant() {
        let omega = omega_fixed_point();
        assert!((omega - 0.567_143_290_409_783_8).abs() < 1e-12);
        let w = lambert_w(Branch::Principal, 1.0).unwrap();
        assert!((w - omega).abs() < 1e-12);
    }

    #[test]
    fn lower_branch() {
        // W-1(-2 e^-2) = -2
        let x = -2.0 * (-2.0f64).exp();
        assert!((lambert_w(Branch::Lower, x).unwrap() + 2.0).abs() < 1e-12);
        let x = -1e-10;
        let w = lambert_w(Branch::Lower, x).unwrap();
        assert!(w < -1.0);
        assert!((w * w.exp() - x).abs() <= 1e-12 * x.abs());
        for k in 1..200 {
            let x = -INV_E * k as f64 / 200.0;
            let w = lambert_w(Branch::Lower, x).unwrap();
            assert!(w <= -1.0);
            assert!((w * w.exp() - x).abs() <= 1e-12 * x.abs(), "x={x} w={w}");
        }
    }

    #[test]
    fn principal_residual() {
        for x in [-0.367, -0.3, -0.1, 1e-8, 0.5, 2.9, 3.1, 100.0, 1e5, 1e100, 1e300] {
            let w = lambert_w(Branch::Principal, x).unwrap();
            assert!((w * w.exp() - x).abs() <= 1e-12 * x.abs(), "x={x} w={w}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(lambert_w(Branch::Principal, -0.5).is_err());
        assert!(lambert_w(Branch::Lower, 0.0).is_err());
        assert!(lambert_w(Branch::Lower, 1.0).is_err());
        assert!(lambert_w(Branch::Lower, -0.5).is_err());
        assert!(lambert_w(Branch::Principal, f64::NAN).is_err());
    }

    #[test]
    fn exp_argument_form() {
        for l in [0.5, 10.0, 300.0] {
            let direct = lambert_w(Branch::Principal, f64::exp(l)).unwrap();
            assert!((lambert_w0_of_exp(l).unwrap() - direct).abs() < 1e-12 * direct);
        }
        let l = 5000.0;
        let w = lambert_w0_of_exp(l).unwrap();
        assert!((w + w.ln() - l).abs() < 1e-10);
    }

    #[test]
    fn round_trip_grid() {
        for k in 0..1000 {
            let x = -0.99 * INV_E + (10.0 + 0.99 * INV_E) * k as f64 / 999.0;
            let w = lambert_w(Branch::Principal, x * x.exp()).unwrap();
            assert!((w - x).abs() <= 1e-10, "x={x} w={w}");
        }
    }
}
