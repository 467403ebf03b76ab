//! Error-propagation phase sensitivity and the quantum Cramér-Rao bound.
//!
//! The detection-based sensitivity is Δφ = √Var(N₋) / |d⟨N₋⟩/dφ|; with
//! detection efficiency η < 1 the numerator gains the detection-noise term
//! (1−η)/η·⟨N₊⟩. The ultimate bound for the coherent ⊗ squeezed-vacuum
//! input is Δφ = 1/√(α²e^{2r₁} + sinh²r₁), independent of φ and of the
//! output squeezer.

use serde::{Deserialize, Serialize};

use crate::closed_form;
use crate::config::InterferometerConfig;
use crate::error::Result;

/// Relative divergence threshold on |d⟨N₋⟩/dφ|; dimensionally scaled so the
/// test stays meaningful near the signal zero of bright configurations.
pub fn divergence_threshold(alpha: f64) -> f64 {
    1e-12 * (alpha * alpha).max(1.0)
}

/// Sensitivity figures for one configuration. `delta_phi_detection` holds
/// `f64::INFINITY` exactly when `diverged` is set; serialized output maps
/// the sentinel to null rather than emitting a non-finite number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub delta_phi_detection: f64,
    pub delta_phi_bound: f64,
    /// √n̄ · Δφ (detection); values below 1 beat the shot-noise limit.
    pub scaled: f64,
    /// (Δφ)_bound / (Δφ)_detection, in (0, 1]; 0 when diverged.
    pub saturability: f64,
    /// α² + sinh²r₁, the input photon budget.
    pub n_bar: f64,
    pub config: InterferometerConfig,
    pub diverged: bool,
}

/// Analytic φ-derivative of ⟨N₋⟩:
/// (sinφ/2)·[α²(1 + e^{2r₂}) − sinh²(r₁−r₂) − ½(cosh2r₁ − cosh2r₂)].
pub fn dndiff_dphi(cfg: &InterferometerConfig) -> f64 {
    let a2 = cfg.alpha * cfg.alpha;
    (cfg.phi.sin() / 2.0)
        * (a2 * (1.0 + (2.0 * cfg.r2).exp())
            - (cfg.r1 - cfg.r2).sinh().powi(2)
            - 0.5 * ((2.0 * cfg.r1).cosh() - (2.0 * cfg.r2).cosh()))
}

/// Quantum Cramér-Rao sensitivity 1/√(α²e^{2r₁} + sinh²r₁). Depends only on
/// the input state; returns the infinity sentinel when no photons enter.
pub fn qcrb_bound(alpha: f64, r1: f64) -> f64 {
    let f = alpha * alpha * (2.0 * r1).exp() + r1.sinh().powi(2);
    if f <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / f.sqrt()
    }
}

fn build_report(cfg: &InterferometerConfig, eta: f64) -> SensitivityReport {
    let var = closed_form::variance_ndiff_unbalanced(cfg.alpha, cfg.r1, cfg.r2, cfg.phi);
    let nplus = closed_form::total_photons_unbalanced(cfg.alpha, cfg.r1, cfg.r2, cfg.phi);
    let slope = dndiff_dphi(cfg).abs();
    let bound = qcrb_bound(cfg.alpha, cfg.r1);
    let n_bar = cfg.n_bar();
    if slope < divergence_threshold(cfg.alpha) {
        return SensitivityReport {
            delta_phi_detection: f64::INFINITY,
            delta_phi_bound: bound,
            scaled: f64::INFINITY,
            saturability: 0.0,
            n_bar,
            config: *cfg,
            diverged: true,
        };
    }
    let numerator = var + (1.0 - eta) / eta * nplus;
    let delta = numerator.max(0.0).sqrt() / slope;
    SensitivityReport {
        delta_phi_detection: delta,
        delta_phi_bound: bound,
        scaled: n_bar.sqrt() * delta,
        saturability: if bound.is_finite() { bound / delta } else { 0.0 },
        n_bar,
        config: *cfg,
        diverged: false,
    }
}

/// Ideal photon-number-difference detection (η forced to 1).
pub fn phase_sensitivity(cfg: &InterferometerConfig) -> Result<SensitivityReport> {
    cfg.validate()?;
    Ok(build_report(cfg, 1.0))
}

/// Detection with efficiency `cfg.eta`; identical to [`phase_sensitivity`]
/// at η = 1.
pub fn phase_sensitivity_noisy(cfg: &InterferometerConfig) -> Result<SensitivityReport> {
    cfg.validate()?;
    Ok(build_report(cfg, cfg.eta))
}

/// √n̄ · Δφ for a report (infinite when diverged).
pub fn scaled_sensitivity(report: &SensitivityReport) -> f64 {
    report.n_bar.sqrt() * report.delta_phi_detection
}

/// Bound-to-detection ratio at this configuration; 0 when the detection
/// sensitivity diverges.
pub fn saturability(cfg: &InterferometerConfig) -> Result<f64> {
    Ok(phase_sensitivity_noisy(cfg)?.saturability)
}

/// Balanced-configuration closed form Δφ = 2·g·cosh r / (α(1 + e^{2r})).
/// Algebraically identical to the generic variance-over-slope ratio.
pub fn balanced_delta_phi_closed(alpha: f64, r: f64, phi: f64) -> f64 {
    2.0 * balanced_g(alpha, r, phi) * r.cosh() / (alpha * (1.0 + (2.0 * r).exp()))
}

/// The g-factor of the balanced closed form:
/// g² = 1 + (e^{2r}cos²(φ/2) − sin²(φ/2))²/(cosh²r sin²φ)
///        + sinh²2r cos⁴(φ/2)/(α² cosh²r sin²φ).
pub fn balanced_g(alpha: f64, r: f64, phi: f64) -> f64 {
    let s2 = (phi / 2.0).sin().powi(2);
    let c2 = (phi / 2.0).cos().powi(2);
    let denom = r.cosh().powi(2) * phi.sin().powi(2);
    (1.0 + ((2.0 * r).exp() * c2 - s2).powi(2) / denom
        + (2.0 * r).sinh().powi(2) * c2 * c2 / (alpha * alpha * denom))
        .sqrt()
}
