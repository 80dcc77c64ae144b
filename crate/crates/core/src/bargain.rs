//! Two-armed exploration analysis: how much exploration is enough.
//!
//! For two arms with `μ1 > μ2` and horizon `T`, exploring the worse arm
//! `N_full = 8 ln T / Δ²` times shrinks the UCB radius to half the gap.
//! The lower bound on expected reward after `n` exploration pulls,
//!
//! ```text
//! G(n) = ((T − n)μ1 + nμ2)(1 − δ) + ((T − n)μ2 + nμ1)δ,   δ = exp(−nΔ²/8)
//! ```
//!
//! first matches the reward `G_full` of full exploration at the bargain point
//! `N_bargain`, the smallest root of
//!
//! ```text
//! f(n) = δ(n)·(2n − T) − n + N_full  =  (G(n) − G_full) / Δ.
//! ```
//!
//! The divisor `8` in the exponent of `δ` is configurable so the `16` variant
//! of the transcendental equation can be evaluated side by side.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambert::lambert_w0_of_exp;

pub const DEFAULT_EXPONENT_DIVISOR: f64 = 8.0;
/// Sign-change scan resolution, as a fraction of `N_full`.
pub const SCAN_STEPS: u32 = 1024;
pub const ROOT_TOL: f64 = 1e-9;
pub const ARGMAX_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoArmScenario {
    mu1: f64,
    mu2: f64,
    horizon: u64,
    exponent_divisor: f64,
}

impl TwoArmScenario {
    pub fn new(mu1: f64, mu2: f64, horizon: u64) -> Result<Self> {
        if !(mu1.is_finite() && mu2.is_finite()) {
            return Err(Error::Domain(format!("means must be finite, got {mu1}, {mu2}")));
        }
        if mu1 <= mu2 {
            return Err(Error::Domain(format!("requires mu1 > mu2, got mu1 = {mu1}, mu2 = {mu2}")));
        }
        if horizon < 2 {
            return Err(Error::Domain(format!("requires T >= 2, got {horizon}")));
        }
        Ok(Self { mu1, mu2, horizon, exponent_divisor: DEFAULT_EXPONENT_DIVISOR })
    }

    /// Replaces the `8` in `δ = exp(−nΔ²/8)`.
    pub fn with_exponent_divisor(mut self, divisor: f64) -> Result<Self> {
        if !(divisor.is_finite() && divisor > 0.0) {
            return Err(Error::Domain(format!("exponent divisor must be > 0, got {divisor}")));
        }
        self.exponent_divisor = divisor;
        Ok(self)
    }

    pub fn mu1(&self) -> f64 {
        self.mu1
    }

    pub fn mu2(&self) -> f64 {
        self.mu2
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn exponent_divisor(&self) -> f64 {
        self.exponent_divisor
    }

    pub fn delta(&self) -> f64 {
        self.mu1 - self.mu2
    }

    fn t(&self) -> f64 {
        self.horizon as f64
    }

    /// Probability bound of mistaking the worse arm for the best after `n2` pulls.
    pub fn mistake_probability(&self, n2: f64) -> f64 {
        let d = self.delta();
        (-n2 * d * d / self.exponent_divisor).exp()
    }

    fn check_n2(&self, n2: f64) -> Result<()> {
        if !(0.0..=self.t()).contains(&n2) {
            return Err(Error::Domain(format!("n2 = {n2} outside [0, {}]", self.horizon)));
        }
        Ok(())
    }

    /// `−n − δ(n)(T − 2n)`: `g_lower = T·μ1 + Δ·reduced(n)`, with far smaller
    /// magnitude than `g_lower` itself.
    fn reduced_objective(&self, n2: f64) -> f64 {
        -n2 - self.mistake_probability(n2) * (self.t() - 2.0 * n2)
    }
}

/// Exploration Full Point `8 ln T / Δ²`.
pub fn n_full(scenario: &TwoArmScenario) -> f64 {
    let d = scenario.delta();
    8.0 * scenario.t().ln() / (d * d)
}

/// Reward when exploring exactly `N_full` times and then committing correctly.
pub fn g_full(scenario: &TwoArmScenario) -> f64 {
    let nf = n_full(scenario);
    (scenario.t() - nf) * scenario.mu1 + nf * scenario.mu2
}

/// Lower bound on expected cumulative reward after `n2` exploration pulls.
pub fn g_lower(n2: f64, scenario: &TwoArmScenario) -> Result<f64> {
    scenario.check_n2(n2)?;
    let t = scenario.t();
    let (mu1, mu2) = (scenario.mu1, scenario.mu2);
    let delta = scenario.mistake_probability(n2);
    let correct = (t - n2) * mu1 + n2 * mu2;
    let mistaken = (t - n2) * mu2 + n2 * mu1;
    Ok(correct * (1.0 - delta) + mistaken * delta)
}

/// `f(n) = δ(n)(2n − T) − n + N_full`, which has the sign of `g_lower − g_full`.
pub fn bargain_residual(n2: f64, scenario: &TwoArmScenario) -> Result<f64> {
    scenario.check_n2(n2)?;
    Ok(residual_unchecked(n2, scenario))
}

fn residual_unchecked(n2: f64, scenario: &TwoArmScenario) -> f64 {
    scenario.mistake_probability(n2) * (2.0 * n2 - scenario.t()) - n2 + n_full(scenario)
}

fn ensure_feasible(scenario: &TwoArmScenario) -> Result<f64> {
    let nf = n_full(scenario);
    if nf >= scenario.t() {
        return Err(Error::Infeasible { n_full: nf, horizon: scenario.horizon });
    }
    Ok(nf)
}

/// Smallest root of [`bargain_residual`] in `(0, N_full]`.
///
/// Scans with step `N_full / 1024` for the first sign change, then bisects to
/// an absolute bracket width of `1e−9`.
pub fn solve_n_bargain(scenario: &TwoArmScenario) -> Result<f64> {
    let nf = ensure_feasible(scenario)?;
    let f = |x| residual_unchecked(x, scenario);
    let step = nf / SCAN_STEPS as f64;
    let mut lo = 0.0;
    let mut f_lo = f(lo);
    for i in 1..=SCAN_STEPS {
        let hi = if i == SCAN_STEPS { nf } else { step * i as f64 };
        let f_hi = f(hi);
        if f_hi == 0.0 {
            return Ok(hi);
        }
        if (f_lo < 0.0) != (f_hi < 0.0) {
            return Ok(bisect(f, lo, hi, f_lo));
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(Error::NoRoot { n_full: nf })
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let lo_negative = f_lo < 0.0;
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Maximizer of [`g_lower`] over `[0, N_full]` by golden-section search.
pub fn optimal_n2(scenario: &TwoArmScenario) -> Result<f64> {
    let nf = ensure_feasible(scenario)?;
    Ok(golden_section_max(|x| scenario.reduced_objective(x), 0.0, nf, ARGMAX_TOL))
}

fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Stationary point of `g_lower` from the Lambert-W closed form
/// `n* = 1/a + T/2 − W₀(½·e^{1 + aT/2}) / a` with `a = Δ²/divisor`.
pub fn optimal_n2_closed_form(scenario: &TwoArmScenario) -> Result<f64> {
    let d = scenario.delta();
    let a = d * d / scenario.exponent_divisor;
    let t = scenario.t();
    let w = lambert_w0_of_exp(0.5f64.ln() + 1.0 + a * t / 2.0)?;
    Ok(1.0 / a + t / 2.0 - w / a)
}

/// `γ = 1 / N_bargain`.
pub fn gamma_recommendation(scenario: &TwoArmScenario) -> Result<f64> {
    Ok(1.0 / solve_n_bargain(scenario)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BargainAnalysis {
    pub mu1: f64,
    pub mu2: f64,
    pub horizon: u64,
    pub delta: f64,
    pub exponent_divisor: f64,
    pub n_full: f64,
    pub n_bargain: f64,
    pub n2_star: f64,
    pub n2_star_closed_form: f64,
    pub g_full: f64,
    pub g_lower_at_bargain: f64,
    pub g_lower_at_n2_star: f64,
    pub g_lower_at_full: f64,
    pub residual_at_bargain: f64,
    pub gamma_recommended: f64,
}

/// Result of [`analyze`]; infeasible when `N_full ≥ T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum BargainOutcome {
    Feasible(BargainAnalysis),
    Infeasible { mu1: f64, mu2: f64, horizon: u64, n_full: f64, reason: String },
}

pub fn analyze(scenario: &TwoArmScenario) -> Result<BargainOutcome> {
    let nf = n_full(scenario);
    if nf >= scenario.t() {
        return Ok(BargainOutcome::Infeasible {
            mu1: scenario.mu1,
            mu2: scenario.mu2,
            horizon: scenario.horizon,
            n_full: nf,
            reason: "exploration budget exceeds horizon".into(),
        });
    }
    let n_bargain = solve_n_bargain(scenario)?;
    let n2_star = optimal_n2(scenario)?;
    Ok(BargainOutcome::Feasible(BargainAnalysis {
        mu1: scenario.mu1,
        mu2: scenario.mu2,
        horizon: scenario.horizon,
        delta: scenario.delta(),
        exponent_divisor: scenario.exponent_divisor,
        n_full: nf,
        n_bargain,
        n2_star,
        n2_star_closed_form: optimal_n2_closed_form(scenario)?,
        g_full: g_full(scenario),
        g_lower_at_bargain: g_lower(n_bargain, scenario)?,
        g_lower_at_n2_star: g_lower(n2_star, scenario)?,
        g_lower_at_full: g_lower(nf, scenario)?,
        residual_at_bargain: bargain_residual(n_bargain, scenario)?,
        gamma_recommended: 1.0 / n_bargain,
    }))
}

/// `(n2, g_lower(n2), g_full)` at `points` evenly spaced values in `[0, N_full]`.
pub fn g_lower_curve(scenario: &TwoArmScenario, points: usize) -> Result<Vec<(f64, f64, f64)>> {
    let nf = ensure_feasible(scenario)?;
    if points < 2 {
        return Err(Error::Domain("curve needs at least 2 points".into()));
    }
    let gf = g_full(scenario);
    (0..points)
        .map(|i| {
            let n2 = if i + 1 == points { nf } else { nf * i as f64 / (points - 1) as f64 };
            Ok((n2, g_lower(n2, scenario)?, gf))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Frozen from a 40-digit mpmath evaluation of the closed-form expressions
    // and a 200-step bisection (bargain) / derivative bisection (optimum).
    const NFULL_20K_01: f64 = 7922.790042028902;
    const GFULL_20K: f64 = 17207.72099579711;
    const GLOWER_4000: f64 = 17591.914463601097;
    const RESID_4000: f64 = 3841.934678039877;
    const NBARGAIN_20K: f64 = 758.186057720382;
    const NSTAR_20K: f64 = 2432.515250692366;
    const NBARGAIN_DIV16: f64 = 1561.129979117796;

    fn base() -> TwoArmScenario {
        TwoArmScenario::new(0.9, 0.8, 20_000).unwrap()
    }

    #[test]
    fn full_point() {
        assert!((n_full(&base()) - NFULL_20K_01).abs() < 1e-9);
        // Δ = 2√2 cancels the 8, leaving ln T
        let s = TwoArmScenario::new(2.0 * 2f64.sqrt(), 0.0, 3).unwrap();
        assert!((n_full(&s) - 3f64.ln()).abs() < 1e-12);
        let narrow = TwoArmScenario::new(0.8 + 0.1 / 2f64.sqrt(), 0.8, 20_000).unwrap();
        assert!((n_full(&narrow) / n_full(&base()) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn full_reward() {
        assert!((g_full(&base()) - GFULL_20K).abs() < 1e-9);
        assert!(g_full(&base()) < 20_000.0 * 0.9);
    }

    #[test]
    fn lower_bound_values() {
        let s = base();
        assert!((g_lower(0.0, &s).unwrap() - 20_000.0 * 0.8).abs() < 1e-9);
        assert!((g_lower(4000.0, &s).unwrap() - GLOWER_4000).abs() < 1e-9);
        assert!((s.mistake_probability(4000.0) - (-5f64).exp()).abs() < 1e-15);
        let certain = |n: f64| (20_000.0 - n) * 0.9 + n * 0.8;
        assert!((g_lower(19_999.0, &s).unwrap() - certain(19_999.0)).abs() < 1e-6);
        assert!(g_lower(-1.0, &s).is_err());
        assert!(g_lower(20_001.0, &s).is_err());
    }

    #[test]
    fn residual_values() {
        let s = base();
        assert!((bargain_residual(0.0, &s).unwrap() - (NFULL_20K_01 - 20_000.0)).abs() < 1e-9);
        assert!((bargain_residual(4000.0, &s).unwrap() - RESID_4000).abs() < 1e-8);
        for k in 0..=200 {
            let n = 100.0 * k as f64;
            let r = bargain_residual(n, &s).unwrap();
            let g = g_lower(n, &s).unwrap() - g_full(&s);
            assert!((r * s.delta() - g).abs() < 1e-6, "n={n}");
            if g.abs() > 1e-6 {
                assert_eq!(r > 0.0, g > 0.0);
            }
        }
    }

    #[test]
    fn bargain_point() {
        let s = base();
        let nb = solve_n_bargain(&s).unwrap();
        assert!((nb - NBARGAIN_20K).abs() < 1e-8, "{nb}");
        assert!(bargain_residual(nb, &s).unwrap().abs() <= 1e-6);
        assert!((g_lower(nb, &s).unwrap() - g_full(&s)).abs() <= 1e-6 * s.delta() * 10.0);
        assert!((gamma_recommendation(&s).unwrap() - 1.0 / NBARGAIN_20K).abs() < 1e-12);
    }

    #[test]
    fn bargain_point_divisor_16() {
        let s = base().with_exponent_divisor(16.0).unwrap();
        assert!((solve_n_bargain(&s).unwrap() - NBARGAIN_DIV16).abs() < 1e-7);
        assert!(base().with_exponent_divisor(0.0).is_err());
    }

    #[test]
    fn bargain_monotone_in_gap() {
        // T = 1e6 keeps every Δ in the grid feasible; oracle values frozen
        // from the same scan + bisection in 40-digit arithmetic.
        let expected =
            [(0.2, 1305.696521707748), (0.1, 3951.700829139744), (0.05, 10807.28819625322), (0.02, 26657.92845612832)];
        let mut prev = 0.0;
        for (gap, want) in expected {
            let s = TwoArmScenario::new(0.5 + gap, 0.5, 1_000_000).unwrap();
            let nb = solve_n_bargain(&s).unwrap();
            assert!((nb - want).abs() < 1e-6 * want, "gap {gap}: {nb}");
            assert!(nb > prev);
            assert!(nb < n_full(&s));
            prev = nb;
        }
    }

    #[test]
    fn optimum() {
        let s = base();
        let star = optimal_n2(&s).unwrap();
        assert!((star - NSTAR_20K).abs() < 1e-3, "{star}");
        assert!((optimal_n2_closed_form(&s).unwrap() - NSTAR_20K).abs() < 1e-7);
        let nb = solve_n_bargain(&s).unwrap();
        assert!(nb < star && star < n_full(&s));
        let g_star = g_lower(star, &s).unwrap();
        assert!(g_star >= g_full(&s));
        let nf = n_full(&s);
        for k in 0..1000 {
            let x = nf * k as f64 / 999.0;
            assert!(g_star >= g_lower(x, &s).unwrap() - 1e-9);
        }
    }

    #[test]
    fn two_sign_changes() {
        let s = base();
        let nf = n_full(&s);
        let mut changes = 0;
        let mut prev = bargain_residual(0.0, &s).unwrap();
        for k in 1..=100_000 {
            let x = (nf + 1.0) * k as f64 / 100_000.0;
            let v = bargain_residual(x, &s).unwrap();
            if (v < 0.0) != (prev < 0.0) {
                changes += 1;
            }
            prev = v;
        }
        assert_eq!(changes, 2);
    }

    #[test]
    fn depends_only_on_gap() {
        let a = base();
        let b = TwoArmScenario::new(0.95, 0.85, 20_000).unwrap();
        assert!((n_full(&a) - n_full(&b)).abs() < 1e-12 * n_full(&a) * 10.0);
        let (ga, gb) = (gamma_recommendation(&a).unwrap(), gamma_recommendation(&b).unwrap());
        assert!((ga - gb).abs() < 1e-9 * ga);
    }

    #[test]
    fn lower_bound_below_certainty() {
        // beyond T/2 the "mistaken" branch earns more than the certain one
        let s = base();
        for k in 0..=200 {
            let n = 50.0 * k as f64;
            let certain = (20_000.0 - n) * 0.9 + n * 0.8;
            assert!(g_lower(n, &s).unwrap() <= certain + 1e-9);
        }
    }

    #[test]
    fn infeasible_scenarios() {
        let s = TwoArmScenario::new(0.9, 0.88, 20_000).unwrap();
        assert!(n_full(&s) > 20_000.0);
        assert!(matches!(solve_n_bargain(&s), Err(Error::Infeasible { .. })));
        assert!(matches!(analyze(&s).unwrap(), BargainOutcome::Infeasible { .. }));
        assert!(TwoArmScenario::new(0.8, 0.9, 100).is_err());
        assert!(TwoArmScenario::new(0.8, 0.8, 100).is_err());
        assert!(TwoArmScenario::new(0.9, 0.8, 1).is_err());
    }

    #[test]
    fn analysis_record() {
        let BargainOutcome::Feasible(a) = analyze(&base()).unwrap() else {
            panic!("feasible expected");
        };
        assert!(0.0 < a.n_bargain && a.n_bargain < a.n2_star && a.n2_star < a.n_full);
        assert!(a.g_lower_at_n2_star >= a.g_full);
        assert!(a.residual_at_bargain.abs() <= 1e-6);
        assert_eq!(a.gamma_recommended, 1.0 / a.n_bargain);
    }

    #[test]
    fn curve_endpoints() {
        let curve = g_lower_curve(&base(), 101).unwrap();
        assert_eq!(curve.len(), 101);
        assert_eq!(curve[0].0, 0.0);
        assert_eq!(curve[100].0, n_full(&base()));
        assert!(g_lower_curve(&base(), 1).is_err());
    }
}
