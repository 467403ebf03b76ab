//! Working-point and squeezing-split optimization, plus the generic
//! parameter-sweep engine behind the figure presets.
//!
//! All searches are derivative-free (coarse grid plus golden-section
//! refinement): the objective has divergence walls at the signal zeros and
//! at the φ interval endpoints, where bracketing is far more robust than
//! gradients. Every routine is deterministic.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::InterferometerConfig;
use crate::error::{Error, Result};
use crate::sensitivity::{phase_sensitivity_noisy, SensitivityReport};

/// φ search interval: endpoints excluded because the slope vanishes there.
pub const PHI_LO: f64 = 0.01;
pub const PHI_HI: f64 = std::f64::consts::PI - 1e-6;
/// Coarse-scan resolution for the φ search.
pub const PHI_COARSE_POINTS: usize = 401;
/// Golden-section interval tolerance in φ.
pub const PHI_REFINE_TOL: f64 = 1e-10;

/// Golden-section minimization of `f` on `[lo, hi]`; deterministic, stops
/// when the bracket is shorter than `tol`. Returns `(x_min, f_min)`.
fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while hi - lo > tol && iterations < 200 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        iterations += 1;
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn delta_phi_at(alpha: f64, r1: f64, r2: f64, phi: f64, eta: f64) -> f64 {
    match InterferometerConfig::new(alpha, r1, r2, phi, eta) {
        Ok(cfg) => match phase_sensitivity_noisy(&cfg) {
            Ok(rep) => rep.delta_phi_detection,
            Err(_) => f64::INFINITY,
        },
        Err(_) => f64::INFINITY,
    }
}

/// Minimizes Δφ over φ ∈ (0.01, π − 1e-6): 401-point coarse scan (ties
/// broken toward smaller φ), then golden-section refinement of the
/// bracketing interval down to 1e-10 in φ.
pub fn optimal_phase(
    alpha: f64,
    r1: f64,
    r2: f64,
    eta: f64,
) -> Result<(f64, SensitivityReport)> {
    let n = PHI_COARSE_POINTS;
    let step = (PHI_HI - PHI_LO) / (n - 1) as f64;
    let mut best_i = usize::MAX;
    let mut best = f64::INFINITY;
    for i in 0..n {
        let phi = PHI_LO + step * i as f64;
        let v = delta_phi_at(alpha, r1, r2, phi, eta);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    if best_i == usize::MAX {
        return Err(Error::AllDiverged);
    }
    let lo = PHI_LO + step * best_i.saturating_sub(1) as f64;
    let hi = (PHI_LO + step * (best_i + 1) as f64).min(PHI_HI);
    let (phi_opt, _) = golden_section(
        |phi| delta_phi_at(alpha, r1, r2, phi, eta),
        lo,
        hi,
        PHI_REFINE_TOL,
    );
    let cfg = InterferometerConfig::new(alpha, r1, r2, phi_opt, eta)?;
    Ok((phi_opt, phase_sensitivity_noisy(&cfg)?))
}

/// Closed-form working point 2·arctan[(e^{2r} + e^{4r})^{1/4}], valid in
/// the equal-intensity regime α² ≈ sinh²r of the balanced configuration.
pub fn asymptotic_phase_opt(r: f64) -> f64 {
    2.0 * ((2.0 * r).exp() + (4.0 * r).exp()).powf(0.25).atan()
}

/// Joint minimization over (r₂, φ): coarse scan of r₂ over [0, r₁ + 3]
/// (step 0.05), a 0.01-step refinement pass around the best candidate, and
/// a final golden-section polish; φ is re-optimized at every r₂.
pub fn optimal_r2(alpha: f64, r1: f64, eta: f64) -> Result<(f64, f64, SensitivityReport)> {
    let hi = r1 + 3.0;
    let objective = |r2: f64| match optimal_phase(alpha, r1, r2, eta) {
        Ok((_, rep)) => rep.delta_phi_detection,
        Err(_) => f64::INFINITY,
    };
    let mut best_x = f64::NAN;
    let mut best = f64::INFINITY;
    let coarse = (hi / 0.05).ceil() as usize + 1;
    for i in 0..coarse {
        let r2 = (0.05 * i as f64).min(hi);
        let v = objective(r2);
        if v < best {
            best = v;
            best_x = r2;
        }
    }
    if !best.is_finite() {
        return Err(Error::AllDiverged);
    }
    let flo = (best_x - 0.06).max(0.0);
    let fhi = (best_x + 0.06).min(hi);
    let mut i = 0;
    loop {
        let r2 = flo + 0.01 * i as f64;
        if r2 > fhi {
            break;
        }
        let v = objective(r2);
        if v < best {
            best = v;
            best_x = r2;
        }
        i += 1;
    }
    let (r2_opt, _) = golden_section(
        objective,
        (best_x - 0.012).max(0.0),
        (best_x + 0.012).min(hi),
        1e-6,
    );
    let (phi_opt, report) = optimal_phase(alpha, r1, r2_opt, eta)?;
    Ok((r2_opt, phi_opt, report))
}

/// Splits a photon budget n̄ = α² + sinh²r between coherent amplitude and
/// squeezing so that the Fisher information α²e^{2r} + sinh²r is maximal:
/// bisection on r for the stationarity condition
/// α² = (e^{2r} − 1)·sinh2r / (2e^{2r}).
pub fn optimal_alpha_split(n_bar: f64) -> Result<(f64, f64)> {
    if n_bar.is_nan() || n_bar <= 0.0 || !n_bar.is_finite() {
        return Err(Error::InvalidParameter {
            name: "n_bar",
            value: n_bar,
            reason: "photon budget must be positive and finite",
        });
    }
    let stationary_alpha_sq =
        |r: f64| ((2.0 * r).exp() - 1.0) * (2.0 * r).sinh() / (2.0 * (2.0 * r).exp());
    let mut lo = 0.0f64;
    let mut hi = n_bar.sqrt().asinh();
    // f(r) = α²_stat(r) + sinh²r − n̄ is increasing; f(lo) < 0 ≤ f(hi).
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if stationary_alpha_sq(mid) + mid.sinh().powi(2) > n_bar {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let alpha_sq = n_bar - r.sinh().powi(2);
    Ok((alpha_sq.max(0.0).sqrt(), r))
}

/// Large-r₂ plateau of the scaled sensitivity for the α = √10 sweep:
/// value 5√(19 + cosh2r₁)/(20e^{r₁} + sinh r₁) at the working point
/// 2·arctan(3e^{r₁}). The constants are specific to α = √10.
pub fn plateau_sensitivity(r1: f64) -> (f64, f64) {
    let value = 5.0 * (19.0 + (2.0 * r1).cosh()).sqrt() / (20.0 * r1.exp() + r1.sinh());
    let phi = 2.0 * (3.0 * r1.exp()).atan();
    (value, phi)
}

/// Which configuration field a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Input squeezing; r₂ follows it unless the spec pins or optimizes r₂.
    R,
    R2,
    Phi,
    Alpha,
}

/// What gets re-optimized at every sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OptimizeOver {
    pub phi: bool,
    pub r2: bool,
}

/// A one-dimensional sweep request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    /// Template providing every field the sweep does not touch.
    pub fixed: InterferometerConfig,
    pub optimize_over: OptimizeOver,
    /// When sweeping `R` with this set, r₂ stays at `fixed.r2` instead of
    /// tracking r₁.
    pub pin_r2: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.lo.is_finite() || !self.hi.is_finite() || self.lo >= self.hi {
            return Err(Error::InvalidParameter {
                name: "range",
                value: self.lo,
                reason: "sweep range must satisfy lo < hi with finite bounds",
            });
        }
        if self.points < 2 {
            return Err(Error::TooFewPoints {
                need: 2,
                got: self.points,
            });
        }
        Ok(())
    }

    fn config_at(&self, x: f64) -> InterferometerConfig {
        let mut cfg = self.fixed;
        match self.variable {
            SweepVariable::R => {
                cfg.r1 = x;
                if !self.pin_r2 {
                    cfg.r2 = x;
                }
            }
            SweepVariable::R2 => cfg.r2 = x,
            SweepVariable::Phi => cfg.phi = x,
            SweepVariable::Alpha => cfg.alpha = x,
        }
        cfg
    }
}

/// One evaluated sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub report: SensitivityReport,
    pub phi_opt: Option<f64>,
    pub r2_opt: Option<f64>,
}

/// Evaluates a sweep; points are independent and run in parallel, merged
/// back in index order so the output is deterministic. Divergences are
/// carried in the per-point report, never dropped.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<CurvePoint>> {
    spec.validate()?;
    let step = (spec.hi - spec.lo) / (spec.points - 1) as f64;
    let xs: Vec<f64> = (0..spec.points)
        .map(|i| spec.lo + step * i as f64)
        .collect();
    xs.par_iter()
        .map(|&x| {
            let cfg = spec.config_at(x);
            if spec.optimize_over.r2 {
                let (r2_opt, phi_opt, report) = optimal_r2(cfg.alpha, cfg.r1, cfg.eta)?;
                Ok(CurvePoint {
                    x,
                    report,
                    phi_opt: Some(phi_opt),
                    r2_opt: Some(r2_opt),
                })
            } else if spec.optimize_over.phi {
                let (phi_opt, report) = optimal_phase(cfg.alpha, cfg.r1, cfg.r2, cfg.eta)?;
                Ok(CurvePoint {
                    x,
                    report,
                    phi_opt: Some(phi_opt),
                    r2_opt: None,
                })
            } else {
                let report = phase_sensitivity_noisy(&cfg)?;
                Ok(CurvePoint {
                    x,
                    report,
                    phi_opt: None,
                    r2_opt: None,
                })
            }
        })
        .collect()
}

/// Least-squares fit of r₂,opt = r₁ + δ over `(r1, r2_opt)` pairs; returns
/// (δ, rms residual).
pub fn fit_offset(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints {
            need: 3,
            got: points.len(),
        });
    }
    let delta =
        points.iter().map(|(r1, r2)| r2 - r1).sum::<f64>() / points.len() as f64;
    let rss = points
        .iter()
        .map(|(r1, r2)| (r2 - r1 - delta).powi(2))
        .sum::<f64>();
    Ok((delta, (rss / points.len() as f64).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const SQRT10: f64 = 3.162_277_660_168_379_5;

    #[test]
    fn golden_section_finds_parabola_minimum() {
        // location accuracy of a quadratic minimum is limited to ~√ε
        let (x, v) = golden_section(|x| (x - 1.3).powi(2) + 2.0, -4.0, 5.0, 1e-12);
        assert!((x - 1.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn optimal_phase_small_squeezing_stays_near_midfringe() {
        // φ_opt → π/2 as r → 0 for the balanced scheme.
        let (phi, _) = optimal_phase(SQRT10, 0.01, 0.01, 1.0).unwrap();
        assert!((phi - PI / 2.0).abs() < 0.011, "phi_opt = {phi}");
        // frozen: at r = 0.05 the offset is just above 0.05
        let (phi, _) = optimal_phase(SQRT10, 0.05, 0.05, 1.0).unwrap();
        assert!((phi - 1.620_981).abs() < 1e-3);
    }

    #[test]
    fn optimal_phase_is_locally_minimal() {
        for (alpha, r, eta) in [(SQRT10, 1.87, 1.0), (SQRT10, 1.0, 0.8), (2.0, 0.6, 0.9)] {
            let (phi, rep) = optimal_phase(alpha, r, r, eta).unwrap();
            for offset in [-1e-3, 1e-3] {
                let cfg = InterferometerConfig::new(alpha, r, r, phi + offset, eta).unwrap();
                let nearby = phase_sensitivity_noisy(&cfg).unwrap();
                assert!(nearby.delta_phi_detection >= rep.delta_phi_detection - 1e-12);
            }
        }
    }

    #[test]
    fn optimal_phase_matches_asymptotic_formula_at_equal_intensity() {
        let r = 2.0f64;
        let (phi, _) = optimal_phase(r.sinh(), r, r, 1.0).unwrap();
        assert!((phi - asymptotic_phase_opt(r)).abs() < 1e-2);
        assert!((phi - 2.873_804).abs() < 1e-4);
    }

    #[test]
    fn conventional_working_point_pinned_at_midfringe() {
        // r₂ = 0: φ_opt = π/2 for every detection efficiency.
        for eta in [1.0, 0.9, 0.8] {
            let (phi, _) = optimal_phase(SQRT10, 0.8, 0.0, eta).unwrap();
            assert!((phi - PI / 2.0).abs() < 5e-3, "eta={eta} phi={phi}");
        }
    }

    #[test]
    fn asymptotic_phase_opt_values() {
        assert!((asymptotic_phase_opt(2.0) - 2.873_760_101_378_823).abs() < 1e-12);
        assert!((asymptotic_phase_opt(0.0) - 2.0 * 2f64.powf(0.25).atan()).abs() < 1e-12);
        assert!(asymptotic_phase_opt(20.0) > PI - 1e-4); // → π
    }

    #[test]
    fn balanced_phase_opt_monotone_in_r() {
        let mut last = 0.0;
        for i in 0..30 {
            let r = 0.1 + 2.9 * i as f64 / 29.0;
            let (phi, _) = optimal_phase(SQRT10, r, r, 1.0).unwrap();
            assert!(phi >= last - 1e-9, "phi_opt not monotone at r={r}");
            last = phi;
        }
    }

    #[test]
    fn joint_optimum_prefers_stronger_output_squeezer() {
        let (r2_opt, _phi, rep) = optimal_r2(SQRT10, 2.0, 1.0).unwrap();
        assert!((r2_opt - 2.0 - 0.29).abs() < 0.05, "offset {}", r2_opt - 2.0);
        // beats the balanced configuration
        let (_, bal) = optimal_phase(SQRT10, 2.0, 2.0, 1.0).unwrap();
        assert!(rep.delta_phi_detection <= bal.delta_phi_detection + 1e-12);
    }

    #[test]
    fn joint_optimum_balanced_at_weak_squeezing() {
        let (r2_opt, _, _) = optimal_r2(SQRT10, 0.01, 1.0).unwrap();
        assert!((r2_opt - 0.01).abs() < 0.02);
        // under detection noise the optimum moves out even at r₁ → 0
        let (r2_opt, _, _) = optimal_r2(SQRT10, 0.01, 0.9).unwrap();
        assert!((r2_opt - 0.01 - 0.54).abs() < 0.05);
        let (r2_opt, _, _) = optimal_r2(SQRT10, 0.01, 0.8).unwrap();
        assert!((r2_opt - 0.01 - 0.89).abs() < 0.05);
    }

    #[test]
    fn alpha_split_satisfies_both_conditions() {
        for n_bar in [0.01, 1.0, 10.0, 100.0] {
            let (alpha, r) = optimal_alpha_split(n_bar).unwrap();
            assert!((alpha * alpha + r.sinh().powi(2) - n_bar).abs() < 1e-10);
            let stat = ((2.0 * r).exp() - 1.0) * (2.0 * r).sinh() / (2.0 * (2.0 * r).exp());
            assert!((alpha * alpha - stat).abs() < 1e-10);
        }
        // Heisenberg regime: α² ≈ sinh²r at large budget
        let (alpha, r) = optimal_alpha_split(100.0).unwrap();
        let ratio = alpha * alpha / r.sinh().powi(2);
        assert!((0.9..=1.1).contains(&ratio), "ratio {ratio}");
        assert!(optimal_alpha_split(0.0).is_err());
    }

    #[test]
    fn alpha_split_is_a_maximum_along_the_constraint() {
        let n_bar = 5.0;
        let (alpha, r) = optimal_alpha_split(n_bar).unwrap();
        let fisher = |a: f64, r: f64| a * a * (2.0 * r).exp() + r.sinh().powi(2);
        let best = fisher(alpha, r);
        for factor in [0.99, 1.01] {
            let r2 = r * factor;
            let a2 = (n_bar - r2.sinh().powi(2)).max(0.0).sqrt();
            assert!(fisher(a2, r2) <= best + 1e-9);
        }
    }

    #[test]
    fn plateau_values() {
        let (value, phi) = plateau_sensitivity(1.87);
        assert!((value - 0.238_065_987_081_464_9).abs() < 1e-12);
        assert!((phi - 3.038_933_799_603_676_3).abs() < 1e-12);
    }

    #[test]
    fn sweep_basics() {
        let fixed = InterferometerConfig::balanced(1.0, 0.5, PI / 2.0).unwrap();
        let spec = SweepSpec {
            variable: SweepVariable::Phi,
            lo: 0.1,
            hi: 3.0,
            points: 2,
            fixed,
            optimize_over: OptimizeOver::default(),
            pin_r2: false,
        };
        let pts = sweep(&spec).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].x, 0.1);
        assert_eq!(pts[1].x, 3.0);

        let bad = SweepSpec {
            points: 1,
            ..spec.clone()
        };
        assert!(sweep(&bad).is_err());
        let bad = SweepSpec {
            lo: 3.0,
            hi: 0.1,
            ..spec
        };
        assert!(sweep(&bad).is_err());
    }

    #[test]
    fn sweep_flags_divergences_as_points() {
        // conventional scheme through the equal-intensity point
        let alpha = SQRT10;
        let fixed = InterferometerConfig::new(alpha, 1.0, 0.0, PI / 2.0, 1.0).unwrap();
        let spec = SweepSpec {
            variable: SweepVariable::R,
            lo: alpha.asinh() - 0.1,
            hi: alpha.asinh() + 0.1,
            points: 21,
            fixed,
            optimize_over: OptimizeOver::default(),
            pin_r2: true,
        };
        let pts = sweep(&spec).unwrap();
        assert_eq!(pts.len(), 21);
        assert!(pts.iter().any(|p| p.report.diverged));
        assert!(pts.iter().any(|p| !p.report.diverged));
    }

    #[test]
    fn sweep_is_deterministic() {
        let fixed = InterferometerConfig::balanced(SQRT10, 1.0, PI / 2.0).unwrap();
        let spec = SweepSpec {
            variable: SweepVariable::R,
            lo: 0.0,
            hi: 3.0,
            points: 40,
            fixed,
            optimize_over: OptimizeOver {
                phi: true,
                r2: false,
            },
            pin_r2: false,
        };
        let a = sweep(&spec).unwrap();
        let b = sweep(&spec).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.report.delta_phi_detection, y.report.delta_phi_detection);
            assert_eq!(x.phi_opt, y.phi_opt);
        }
    }

    #[test]
    fn fit_offset_recovers_shift() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (1.0 + 0.1 * i as f64, 1.29 + 0.1 * i as f64)).collect();
        let (delta, resid) = fit_offset(&pts).unwrap();
        assert!((delta - 0.29).abs() < 1e-12);
        assert!(resid < 1e-12);
        assert!(fit_offset(&pts[..2]).is_err());
    }
}
