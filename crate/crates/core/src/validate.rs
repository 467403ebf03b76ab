//! Named validation checks: cross-path agreement, detection-noise
//! identities, bound tracking, optimizer claims, and output determinism.
//!
//! Each check returns a [`CheckResult`] instead of panicking so the CLI can
//! print a full pass/fail table; the `acceptance` test target asserts on
//! the same functions. Two checks (`caves_divergence_window` and the two
//! `*_alpha4` saturability figures) encode idealized large-squeezing limits
//! evaluated at finite parameters; they report the measured values and are
//! expected to fail honestly rather than being loosened.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use crate::closed_form;
use crate::config::InterferometerConfig;
use crate::error::Error;
use crate::fock::{self, FockSimulator};
use crate::gaussian::{self, Mode};
use crate::optimize::{self, fit_offset, optimal_phase, optimal_r2};
use crate::presets;
use crate::sensitivity::{self, phase_sensitivity_noisy};

pub const SQRT10: f64 = 3.162_277_660_168_379_5;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }
}

/// |a − b| scaled by max(1, |a|, |b|): a relative comparison that stays
/// meaningful when the quantity crosses zero.
fn scaled_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Tiny deterministic generator for the randomized identity checks.
struct XorShift64(u64);

impl XorShift64 {
    fn new(seed: u64) -> Self {
        Self(seed.max(1))
    }

    fn next_f64(&mut self) -> f64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        (x >> 11) as f64 / (1u64 << 53) as f64
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// The shared sweep grid: α × r₁ × r₂-variant × φ.
fn agreement_grid() -> Vec<InterferometerConfig> {
    let alphas = [0.5, 1.0, 2.0, SQRT10];
    let mut out = Vec::new();
    for alpha in alphas {
        for i in 0..10 {
            let r1 = 0.1 + (2.5 - 0.1) * i as f64 / 9.0;
            for r2 in [0.0, r1 / 2.0, r1, r1 + 0.5] {
                for j in 0..10 {
                    let phi = 0.1 + (PI - 0.2) * j as f64 / 9.0;
                    out.push(InterferometerConfig::new(alpha, r1, r2, phi, 1.0).unwrap());
                }
            }
        }
    }
    out
}

/// Closed-form moments versus the phase-space path on an arbitrary moment
/// provider; pulled out so a perturbed provider can be injected to prove
/// the check actually bites.
pub fn three_path_gaussian_check_with<F>(closed_moments: F) -> CheckResult
where
    F: Fn(&InterferometerConfig) -> (f64, f64, f64) + Sync,
{
    let grid = agreement_grid();
    let worst = grid
        .par_iter()
        .map(|cfg| {
            let (cm, cp, cv) = closed_moments(cfg);
            let g = gaussian::gaussian_photon_moments(&gaussian::ds_mzi_output(cfg).unwrap());
            scaled_err(cm, g.n_minus_mean)
                .max(scaled_err(cp, g.n_plus_mean))
                .max(scaled_err(cv, g.n_minus_var))
        })
        .reduce(|| 0.0, f64::max);
    CheckResult::new(
        "three_path_agreement(closed_form vs gaussian)",
        worst <= 1e-9,
        format!("max scaled deviation {worst:.3e} over {} points (tol 1e-9)", grid.len()),
    )
}

fn closed_provider(cfg: &InterferometerConfig) -> (f64, f64, f64) {
    let m = closed_form::moments(cfg);
    (m.n_minus_mean, m.n_plus_mean, m.n_minus_var)
}

/// Criterion 1: three-path moment agreement on the sweep grid, with the
/// Fock comparison run at cutoff 50 on the small-parameter sub-grid.
/// Oracle runs that trip the truncation guard are reported as refusals;
/// accepted runs must agree to 1e-6 absolute.
pub fn criterion_three_path() -> CheckResult {
    let started = Instant::now();
    let gauss = three_path_gaussian_check_with(closed_provider);

    let sim = match FockSimulator::new(50) {
        Ok(s) => s,
        Err(e) => return CheckResult::new("three_path_agreement", false, e.to_string()),
    };
    let sub: Vec<InterferometerConfig> = agreement_grid()
        .into_iter()
        .filter(|c| c.alpha <= 1.5 && c.r1 <= 1.0 && c.r2 <= 1.0)
        .collect();
    let results: Vec<(bool, f64)> = sub
        .par_iter()
        .map(|cfg| match sim.run(cfg) {
            Ok(state) => {
                let f = fock::photon_statistics(&state);
                let (cm, cp, cv) = closed_provider(cfg);
                let err = (cm - f.n_minus_mean)
                    .abs()
                    .max((cp - f.n_plus_mean).abs())
                    .max((cv - f.n_minus_var).abs());
                (true, err)
            }
            Err(Error::Truncation { .. }) => (false, 0.0),
            Err(_) => (false, f64::INFINITY),
        })
        .collect();
    let accepted = results.iter().filter(|(ok, _)| *ok).count();
    let refused = results.len() - accepted;
    let worst_fock = results
        .iter()
        .filter(|(ok, _)| *ok)
        .map(|(_, e)| *e)
        .fold(0.0f64, f64::max);
    let elapsed = started.elapsed().as_secs_f64();
    let passed = gauss.passed && worst_fock <= 1e-6 && accepted >= 150 && elapsed < 120.0;
    CheckResult::new(
        "three_path_agreement",
        passed,
        format!(
            "{}; fock cutoff 50: {accepted}/{} points within oracle validity, \
             max |err| {worst_fock:.3e} (tol 1e-6), {refused} refused by truncation guard; \
             runtime {elapsed:.1}s (limit 120s)",
            gauss.detail,
            results.len()
        ),
    )
}

/// Criterion 2a: conventional-scheme sensitivity exceeds 10³ × bound across
/// the window |r − arcsinh(√10)| < 0.01 at φ = π/2.
///
/// The divergence is real but narrower than the stated window: the ratio
/// crosses 10³ at |Δr| ≈ 0.0032, so samples near ±0.01 measure ≈ 320–800.
/// Kept as stated; the detail reports the measured window.
pub fn criterion_caves_divergence_window() -> CheckResult {
    let alpha = SQRT10;
    let r_star = alpha.asinh();
    let offsets = [-0.009, -0.006, -0.003, -0.001, 0.0, 0.001, 0.003, 0.006, 0.009];
    let mut min_ratio = f64::INFINITY;
    let mut details = String::new();
    for dr in offsets {
        let cfg = InterferometerConfig::conventional(alpha, r_star + dr, PI / 2.0).unwrap();
        let rep = phase_sensitivity_noisy(&cfg).unwrap();
        let ratio = if rep.diverged {
            f64::INFINITY
        } else {
            rep.delta_phi_detection / rep.delta_phi_bound
        };
        min_ratio = min_ratio.min(ratio);
        let _ = write!(details, "{dr:+.3}:{ratio:.0} ");
    }
    // Width at which the ratio actually crosses 10³ (bisection on |Δr|).
    let ratio_at = |dr: f64| {
        let cfg = InterferometerConfig::conventional(alpha, r_star + dr, PI / 2.0).unwrap();
        let rep = phase_sensitivity_noisy(&cfg).unwrap();
        if rep.diverged {
            f64::INFINITY
        } else {
            rep.delta_phi_detection / rep.delta_phi_bound
        }
    };
    let (mut lo, mut hi) = (1e-6, 0.02);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ratio_at(mid) > 1e3 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    CheckResult::new(
        "caves_divergence_window",
        min_ratio > 1e3,
        format!(
            "ratio Δφ/bound at offsets [{}]; min {min_ratio:.0} (required > 1000 across ±0.01); \
             measured half-width where ratio > 10³: {:.4}",
            details.trim_end(),
            0.5 * (lo + hi)
        ),
    )
}

/// Criterion 2b: the φ-optimized balanced scheme stays finite and within
/// 3% of the bound (saturability 0.98 ± 0.005) for all r ∈ [1.87, 3].
pub fn criterion_ds_tracks_bound() -> CheckResult {
    let alpha = SQRT10;
    let mut min_s = f64::INFINITY;
    let mut max_s = 0.0f64;
    let mut all_within = true;
    for i in 0..=12 {
        let r = 1.87 + (3.0 - 1.87) * i as f64 / 12.0;
        let (_, rep) = match optimal_phase(alpha, r, r, 1.0) {
            Ok(v) => v,
            Err(e) => return CheckResult::new("ds_tracks_bound", false, e.to_string()),
        };
        if rep.diverged || rep.delta_phi_detection > 1.03 * rep.delta_phi_bound {
            all_within = false;
        }
        min_s = min_s.min(rep.saturability);
        max_s = max_s.max(rep.saturability);
    }
    let s_in_band = min_s >= 0.975 && max_s <= 0.985;
    CheckResult::new(
        "ds_tracks_bound",
        all_within && s_in_band,
        format!(
            "saturability over r∈[1.87,3]: [{min_s:.6}, {max_s:.6}] \
             (required within 0.98±0.005 and Δφ ≤ 1.03×bound)"
        ),
    )
}

/// Criterion 3a: saturability above 0.99 at α = 4, r = 3, optimized φ.
///
/// The measured optimum is S ≈ 0.9847: the 0.99 figure comes from pinning
/// the g-factor at its φ → π limit g = 1, where 2α/√(1+4α²) = 0.9923; the
/// realized optimum carries g_opt = √(2√(1+1/(4α²)) − 1) > 1. Kept as
/// stated and expected to fail with the measured value.
pub fn criterion_saturability_alpha4() -> CheckResult {
    let (phi, rep) = match optimal_phase(4.0, 3.0, 3.0, 1.0) {
        Ok(v) => v,
        Err(e) => return CheckResult::new("saturability_alpha4", false, e.to_string()),
    };
    let ideal = 2.0 * 4.0 / (1.0 + 4.0 * 16.0f64).sqrt();
    CheckResult::new(
        "saturability_alpha4",
        rep.saturability > 0.99,
        format!(
            "S = {:.6} at φ_opt = {phi:.4} (required > 0.99; g→1 idealization gives {ideal:.4})",
            rep.saturability
        ),
    )
}

/// Criterion 3b: φ-optimized scaled sensitivity within 1% of 1/(2α) at
/// α = 4, r = 3.
///
/// 1/(2α) is the r → ∞ limit; at r = 3 the input photon budget still
/// carries α²/sinh²r ≈ 16%, inflating √n̄·Δφ by ≈ 8%. The limit is reached
/// to 1% only for r ≳ 4.8. Kept as stated and expected to fail.
pub fn criterion_scaled_minimum_alpha4() -> CheckResult {
    let (_, rep) = match optimal_phase(4.0, 3.0, 3.0, 1.0) {
        Ok(v) => v,
        Err(e) => return CheckResult::new("scaled_minimum_alpha4", false, e.to_string()),
    };
    let target = 1.0 / 8.0;
    let rel = (rep.scaled - target).abs() / target;
    // reference: the same quantity deep in the asymptotic regime
    let (_, deep) = optimal_phase(4.0, 6.0, 6.0, 1.0).unwrap();
    let deep_rel = (deep.scaled - target).abs() / target;
    CheckResult::new(
        "scaled_minimum_alpha4",
        rel <= 0.01,
        format!(
            "scaled minimum {:.6} vs 1/(2α) = {target:.6}: {:.2}% off at r=3 \
             (required ≤ 1%; same figure at r=6 is {:.2}% off)",
            rep.scaled,
            100.0 * rel,
            100.0 * deep_rel
        ),
    )
}

/// Criterion 4: binomial smearing reproduces
/// Var(Ñ₋) = η²Var(N₋) + η(1−η)⟨N₊⟩ and ⟨Ñ₋⟩ = η⟨N₋⟩ to 1e-10 on twenty
/// pseudo-random small configurations.
pub fn criterion_lossy_identity() -> CheckResult {
    let sim = match FockSimulator::new(40) {
        Ok(s) => s,
        Err(e) => return CheckResult::new("lossy_detection_identity", false, e.to_string()),
    };
    let mut rng = XorShift64::new(0x5EED_CAFE);
    let mut worst = 0.0f64;
    let mut tested = 0;
    while tested < 20 {
        let cfg = InterferometerConfig::new(
            rng.uniform(0.2, 1.2),
            rng.uniform(0.0, 0.8),
            rng.uniform(0.0, 0.8),
            rng.uniform(0.2, PI - 0.2),
            1.0,
        )
        .unwrap();
        let state = match sim.run(&cfg) {
            Ok(s) => s,
            Err(_) => continue, // outside the oracle's converged domain
        };
        tested += 1;
        let ideal = fock::photon_statistics(&state);
        for eta in [0.5, 0.8, 0.9] {
            let smeared = fock::lossy_statistics(&state, eta).unwrap();
            let mean_err = (smeared.n_minus_mean - eta * ideal.n_minus_mean).abs();
            let var_want = eta * eta * ideal.n_minus_var + eta * (1.0 - eta) * ideal.n_plus_mean;
            let var_err = (smeared.n_minus_var - var_want).abs();
            worst = worst.max(mean_err).max(var_err);
        }
    }
    CheckResult::new(
        "lossy_detection_identity",
        worst <= 1e-10,
        format!("max identity violation {worst:.3e} over 20 configs × η∈{{0.5,0.8,0.9}} (tol 1e-10)"),
    )
}

/// Criterion 5: detection-noise robustness. The gap between the η = 0.8
/// and η = 1 scaled sensitivities of the balanced scheme (each at its own
/// φ_opt) shrinks monotonically with r, while the conventional scheme at
/// η = 0.8 sits above shot noise from r ≈ 1.1 on (evaluated on the
/// criterion grid r ≥ 1.25).
pub fn criterion_robustness_trend() -> CheckResult {
    let alpha = SQRT10;
    let mut gaps = Vec::new();
    for r in [1.5, 2.0, 2.5, 3.0] {
        let (_, ideal) = optimal_phase(alpha, r, r, 1.0).unwrap();
        let (_, noisy) = optimal_phase(alpha, r, r, 0.8).unwrap();
        gaps.push(noisy.scaled - ideal.scaled);
    }
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
    let mut caves_ok = true;
    let mut caves_vals = Vec::new();
    for r in [1.25, 1.5, 2.0, 2.5, 3.0] {
        let cfg = InterferometerConfig::new(alpha, r, 0.0, PI / 2.0, 0.8).unwrap();
        let scaled = phase_sensitivity_noisy(&cfg).unwrap().scaled;
        caves_vals.push(scaled);
        if scaled.is_nan() || scaled <= 1.0 {
            caves_ok = false;
        }
    }
    CheckResult::new(
        "robustness_trend",
        monotone && caves_ok,
        format!(
            "balanced η-gap over r∈{{1.5,2,2.5,3}}: {:?} (monotone decreasing: {monotone}); \
             conventional η=0.8 scaled over r∈{{1.25..3}}: {:?} (all > 1: {caves_ok})",
            gaps.iter().map(|g| (g * 1e6).round() / 1e6).collect::<Vec<_>>(),
            caves_vals.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>()
        ),
    )
}

/// Criterion 6: fitted offsets δ = r₂,opt − r₁ match 0.29 / 0.80 / 1.06
/// (η = 1 / 0.9 / 0.8) over r₁ ∈ [1.2, 2.5], and the r₁ → 0 limits match
/// 0 / 0.54 / 0.89, all within ±0.05.
pub fn criterion_offset_fits() -> CheckResult {
    let started = Instant::now();
    let alpha = SQRT10;
    let cases = [(1.0, 0.29, 0.0), (0.9, 0.80, 0.54), (0.8, 1.06, 0.89)];
    let mut detail = String::new();
    let mut passed = true;
    for (eta, target, limit_target) in cases {
        let pts: Vec<(f64, f64)> = (0..14)
            .into_par_iter()
            .map(|i| {
                let r1 = 1.2 + 0.1 * i as f64;
                let (r2_opt, _, _) = optimal_r2(alpha, r1, eta).unwrap();
                (r1, r2_opt)
            })
            .collect();
        let (delta, resid) = fit_offset(&pts).unwrap();
        let (r2_small, _, _) = optimal_r2(alpha, 0.01, eta).unwrap();
        let limit = r2_small - 0.01;
        if (delta - target).abs() > 0.05 || (limit - limit_target).abs() > 0.05 {
            passed = false;
        }
        let _ = write!(
            detail,
            "η={eta}: δ={delta:.4} (target {target}±0.05, rms {resid:.4}), δ(r₁→0)={limit:.4} (target {limit_target}±0.05); "
        );
    }
    let elapsed = started.elapsed().as_secs_f64();
    if elapsed >= 600.0 {
        passed = false;
    }
    CheckResult::new(
        "offset_fits",
        passed,
        format!("{}runtime {elapsed:.1}s (limit 600s)", detail),
    )
}

/// Criterion 7: the numeric working point matches
/// 2·arctan[(e^{2r}+e^{4r})^{1/4}] within 1e-2 rad in the equal-intensity
/// regime, and the large-r₂ sweep reaches the plateau
/// 5√(19+cosh2r₁)/(20e^{r₁}+sinh r₁) within 2% at
/// φ_opt = 2·arctan(3e^{r₁}) within 0.02 rad, for every η.
pub fn criterion_asymptotic_and_plateau() -> CheckResult {
    let mut passed = true;
    let mut detail = String::new();
    for r in [1.5f64, 2.0, 2.5] {
        let (phi, _) = optimal_phase(r.sinh(), r, r, 1.0).unwrap();
        let asym = optimize::asymptotic_phase_opt(r);
        let err = (phi - asym).abs();
        if err > 1e-2 {
            passed = false;
        }
        let _ = write!(detail, "φ_opt(r={r})−asym = {err:.2e}; ");
    }
    let r1 = 1.87;
    let (plateau, phi_plateau) = optimize::plateau_sensitivity(r1);
    for eta in [1.0, 0.9, 0.8] {
        let (phi, rep) = optimal_phase(SQRT10, r1, r1 + 3.0, eta).unwrap();
        let rel = (rep.scaled - plateau).abs() / plateau;
        let phi_err = (phi - phi_plateau).abs();
        if rel > 0.02 || phi_err > 0.02 {
            passed = false;
        }
        let _ = write!(detail, "η={eta}: plateau off {:.2}%, φ off {phi_err:.4}; ", 100.0 * rel);
    }
    CheckResult::new("asymptotic_and_plateau", passed, detail.trim_end().into())
}

/// Criterion 8: the Fock-oracle Fisher information 4·Var(J_z) equals
/// α²e^{2r} + sinh²r within 1e-6 at three reference points.
pub fn criterion_qfi_convention() -> CheckResult {
    let sim = match FockSimulator::new(50) {
        Ok(s) => s,
        Err(e) => return CheckResult::new("qfi_convention", false, e.to_string()),
    };
    let mut worst = 0.0f64;
    for (alpha, r) in [(0.5, 0.3), (1.0, 0.5), (1.2, 0.8)] {
        let got = match sim.qfi(alpha, r) {
            Ok(v) => v,
            Err(e) => return CheckResult::new("qfi_convention", false, e.to_string()),
        };
        let want = alpha * alpha * (2.0 * r).exp() + r.sinh().powi(2);
        worst = worst.max((got - want).abs());
    }
    CheckResult::new(
        "qfi_convention",
        worst <= 1e-6,
        format!("max |4Var(J_z) − (α²e^{{2r}}+sinh²r)| = {worst:.3e} (tol 1e-6)"),
    )
}

/// Criterion 9: intensity/moment consistency. I_a − I_b = ⟨N₋⟩ and
/// (I_a − ½) + (I_b − ½) = ⟨N₊⟩ to 1e-10 across the sweep grid, equal
/// intensities for the conventional scheme at α² = sinh²r, and a brighter
/// mode b for the dual-squeezing scheme there.
pub fn criterion_wigner_intensity() -> CheckResult {
    let worst = agreement_grid()
        .par_iter()
        .map(|cfg| {
            let out = gaussian::ds_mzi_output(cfg).unwrap();
            let ia = gaussian::mode_intensity(&gaussian::mode_marginal(&out, Mode::A));
            let ib = gaussian::mode_intensity(&gaussian::mode_marginal(&out, Mode::B));
            let m = closed_form::moments(cfg);
            (ia - ib - m.n_minus_mean)
                .abs()
                .max((ia + ib - 1.0 - m.n_plus_mean).abs())
        })
        .reduce(|| 0.0, f64::max);
    let mut balance_ok = true;
    let mut imbalance_ok = true;
    for r in [0.5f64, 1.0, 1.8686] {
        let alpha = r.sinh();
        // working points up to mid-fringe; the mode-b surplus
        // α²(e^{2r}cos²(φ/2) − sin²(φ/2)) changes sign once
        // tan²(φ/2) outgrows e^{2r}
        for phi in [0.7, 1.2, PI / 2.0] {
            let conv =
                gaussian::ds_mzi_output(&InterferometerConfig::conventional(alpha, r, phi).unwrap())
                    .unwrap();
            let ia = gaussian::mode_intensity(&gaussian::mode_marginal(&conv, Mode::A));
            let ib = gaussian::mode_intensity(&gaussian::mode_marginal(&conv, Mode::B));
            if (ia - ib).abs() > 1e-10 {
                balance_ok = false;
            }
            let ds = gaussian::ds_mzi_output(&InterferometerConfig::balanced(alpha, r, phi).unwrap())
                .unwrap();
            let ia = gaussian::mode_intensity(&gaussian::mode_marginal(&ds, Mode::A));
            let ib = gaussian::mode_intensity(&gaussian::mode_marginal(&ds, Mode::B));
            if ib.is_nan() || ib <= ia {
                imbalance_ok = false;
            }
        }
    }
    CheckResult::new(
        "wigner_intensity_consistency",
        worst <= 1e-10 && balance_ok && imbalance_ok,
        format!(
            "max identity error {worst:.3e} (tol 1e-10); equal-intensity balance: {balance_ok}; \
             dual-squeezing imbalance I_b > I_a: {imbalance_ok}"
        ),
    )
}

/// Criterion 10: figure presets are bit-deterministic (two in-process
/// renders byte-compare equal). The CLI-level variant of this check lives
/// in the binary's test suite.
pub fn criterion_preset_determinism() -> CheckResult {
    for preset in [
        presets::Preset::Fig2,
        presets::Preset::Fig3,
        presets::Preset::Fig4a,
        presets::Preset::Fig4b,
        presets::Preset::Fig4c,
    ] {
        let a = match presets::run(preset) {
            Ok(t) => t.to_csv(),
            Err(e) => return CheckResult::new("preset_determinism", false, e.to_string()),
        };
        let b = presets::run(preset).unwrap().to_csv();
        if a != b {
            return CheckResult::new(
                "preset_determinism",
                false,
                format!("{} rendered differently across two runs", preset.name()),
            );
        }
    }
    CheckResult::new(
        "preset_determinism",
        true,
        "all five presets byte-identical across repeated renders".into(),
    )
}

/// The full acceptance set, in criterion order.
pub fn run_full() -> Vec<CheckResult> {
    vec![
        criterion_three_path(),
        criterion_caves_divergence_window(),
        criterion_ds_tracks_bound(),
        criterion_saturability_alpha4(),
        criterion_scaled_minimum_alpha4(),
        criterion_lossy_identity(),
        criterion_robustness_trend(),
        criterion_offset_fits(),
        criterion_asymptotic_and_plateau(),
        criterion_qfi_convention(),
        criterion_wigner_intensity(),
        criterion_preset_determinism(),
    ]
}

/// Fast subset for `validate --quick`: small grids only.
pub fn run_quick() -> Vec<CheckResult> {
    let mut out = Vec::new();

    // symplectic construction sanity
    let mut worst = gaussian::symplectic_beamsplitter().symplectic_defect();
    for r in [0.0, 0.7, 2.0] {
        worst = worst.max(gaussian::symplectic_squeezer(r).unwrap().symplectic_defect());
    }
    for phi in [0.0, 1.2, 2.9] {
        worst = worst.max(gaussian::symplectic_phase(phi).symplectic_defect());
    }
    out.push(CheckResult::new(
        "symplectic_elements",
        worst < 1e-12,
        format!("max ‖FΩFᵀ−Ω‖∞ = {worst:.3e} (tol 1e-12)"),
    ));

    // closed form vs gaussian on a small grid
    let mut worst = 0.0f64;
    for alpha in [0.5, 1.0, SQRT10] {
        for r1 in [0.0, 0.8, 1.87] {
            for r2 in [0.0, r1, r1 + 0.5] {
                for phi in [0.3, PI / 2.0, 2.8] {
                    let cfg = InterferometerConfig::new(alpha, r1, r2, phi, 1.0).unwrap();
                    let (cm, cp, cv) = closed_provider(&cfg);
                    let g = gaussian::gaussian_photon_moments(&gaussian::ds_mzi_output(&cfg).unwrap());
                    worst = worst
                        .max(scaled_err(cm, g.n_minus_mean))
                        .max(scaled_err(cp, g.n_plus_mean))
                        .max(scaled_err(cv, g.n_minus_var));
                }
            }
        }
    }
    out.push(CheckResult::new(
        "closed_vs_gaussian_small_grid",
        worst <= 1e-9,
        format!("max scaled deviation {worst:.3e} (tol 1e-9)"),
    ));

    // closed form vs Fock oracle at small parameters (points inside the
    // oracle's converged domain at cutoff 40)
    let sim = FockSimulator::new(40).unwrap();
    let mut worst = 0.0f64;
    for (alpha, r1, r2, phi) in [
        (1.0, 0.5, 0.5, PI / 2.0),
        (1.0, 0.6, 0.3, PI / 2.0),
        (0.6, 0.5, 0.7, 2.0),
        (0.8, 0.3, 0.6, 1.6),
        (1.2, 0.4, 0.0, 2.5),
    ] {
        let cfg = InterferometerConfig::new(alpha, r1, r2, phi, 1.0).unwrap();
        let f = fock::photon_statistics(&sim.run(&cfg).unwrap());
        let (cm, cp, cv) = closed_provider(&cfg);
        worst = worst
            .max((cm - f.n_minus_mean).abs())
            .max((cp - f.n_plus_mean).abs())
            .max((cv - f.n_minus_var).abs());
    }
    out.push(CheckResult::new(
        "closed_vs_fock_small_grid",
        worst <= 1e-6,
        format!("max |err| {worst:.3e} (tol 1e-6)"),
    ));

    // detection-noise identity on a few configs
    let mut worst = 0.0f64;
    for (alpha, r1, r2) in [(0.8, 0.4, 0.4), (1.0, 0.5, 0.2), (0.5, 0.6, 0.6)] {
        let cfg = InterferometerConfig::new(alpha, r1, r2, 1.3, 1.0).unwrap();
        let state = sim.run(&cfg).unwrap();
        let ideal = fock::photon_statistics(&state);
        for eta in [0.5, 0.9] {
            let s = fock::lossy_statistics(&state, eta).unwrap();
            let want = eta * eta * ideal.n_minus_var + eta * (1.0 - eta) * ideal.n_plus_mean;
            worst = worst.max((s.n_minus_var - want).abs());
        }
    }
    out.push(CheckResult::new(
        "lossy_identity_small",
        worst <= 1e-10,
        format!("max violation {worst:.3e} (tol 1e-10)"),
    ));

    // balanced closed-form sensitivity equals the generic ratio
    let mut worst = 0.0f64;
    for alpha in [0.5, 1.0, SQRT10] {
        for r in [0.1, 0.9, 2.0] {
            for phi in [0.4, PI / 2.0, 2.9] {
                let cfg = InterferometerConfig::balanced(alpha, r, phi).unwrap();
                let rep = phase_sensitivity_noisy(&cfg).unwrap();
                let cf = sensitivity::balanced_delta_phi_closed(alpha, r, phi);
                worst = worst.max((rep.delta_phi_detection - cf).abs() / cf);
            }
        }
    }
    out.push(CheckResult::new(
        "balanced_closed_form_sensitivity",
        worst <= 1e-10,
        format!("max relative deviation {worst:.3e} (tol 1e-10)"),
    ));

    // bound and split reference points
    let qcrb_ok = (sensitivity::qcrb_bound(SQRT10, 1.87) - 0.048_167_727_427_731_4).abs() < 1e-12;
    let (alpha, r) = optimize::optimal_alpha_split(100.0).unwrap();
    let split_ok = (alpha * alpha + r.sinh().powi(2) - 100.0).abs() < 1e-10;
    out.push(CheckResult::new(
        "bound_and_split_references",
        qcrb_ok && split_ok,
        format!("qcrb reference: {qcrb_ok}; photon-split residual ok: {split_ok}"),
    ));

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        for check in run_quick() {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
    }

    #[test]
    fn mutation_canary_names_closed_form() {
        // A sign flip in the variance must be caught by the cross-path
        // check, and the failure must point at the closed-form side.
        let perturbed = |cfg: &InterferometerConfig| {
            let m = closed_form::moments(cfg);
            let wrong_var = closed_form::variance_ndiff_balanced(cfg.alpha, cfg.r1, cfg.phi)
                - 2.0 * cfg.phi.sin().powi(2) * cfg.r1.cosh().powi(2) * cfg.alpha * cfg.alpha;
            (m.n_minus_mean, m.n_plus_mean, wrong_var)
        };
        let result = three_path_gaussian_check_with(perturbed);
        assert!(!result.passed, "perturbed moments must fail the check");
        assert!(result.name.contains("closed_form"));
    }

    #[test]
    fn scaled_err_behaves() {
        assert_eq!(scaled_err(0.0, 0.0), 0.0);
        assert!(scaled_err(1e-12, 0.0) < 1e-9); // absolute near zero
        assert!((scaled_err(2000.0, 2002.0) - 2.0 / 2002.0).abs() < 1e-12);
    }
}
