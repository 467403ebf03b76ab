//! Analytic photon-number moments of the DS-MZI output.
//!
//! The detected observable is N₋ = n_a − n_b; N₊ = n_a + n_b is the total
//! output photon number. For the input |α⟩_a ⊗ S(r₁)|0⟩_b propagated through
//! B, U(φ), B, S(r₂) (both beam splitters identical), the moments admit
//! closed forms in the interferometer parameters. The balanced case uses
//! the compact h-coefficients, the general case the k-coefficients of the
//! operator decomposition
//!
//! ```text
//! N∓ = k₁±K_z + k₂∓J_z + k₃∓K_{a,x} + k₄∓K_{b,x} + k₅±J_y + k₆∓K_y (−1)
//! ```
//!
//! over the SU(2) generators J and the one- and two-mode SU(1,1) generators
//! K, whose first and second moments on |α,0⟩ are elementary.

use serde::{Deserialize, Serialize};

use crate::config::InterferometerConfig;

/// Which computation path produced a [`MomentSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentPath {
    ClosedForm,
    Gaussian,
    Fock,
}

/// First two moments of the detected photon-number observables for one
/// configuration, tagged with the path that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    /// ⟨N₋⟩
    pub n_minus_mean: f64,
    /// ⟨N₊⟩
    pub n_plus_mean: f64,
    /// Var(N₋)
    pub n_minus_var: f64,
    /// d⟨N₋⟩/dφ, available only on paths that know the parameterization.
    pub dn_minus_dphi: Option<f64>,
    pub path: MomentPath,
}

/// Coefficients of the balanced (r₁ = r₂ = r) operator decomposition
/// N₋ = h₋J_z + h₁J_y + h₃(K_{b,x} − K_{a,x}),
/// N₊ = h₊K_z + h₂K_y + h₃(K_{b,x} + K_{a,x}) − 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalancedCoefficients {
    pub h_plus: f64,
    pub h_minus: f64,
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
}

/// The twelve coefficients of the general (r₁ ≠ r₂) decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnbalancedCoefficients {
    pub k1_plus: f64,
    pub k1_minus: f64,
    pub k2_plus: f64,
    pub k2_minus: f64,
    pub k3_plus: f64,
    pub k3_minus: f64,
    pub k4_plus: f64,
    pub k4_minus: f64,
    pub k5_plus: f64,
    pub k5_minus: f64,
    pub k6_plus: f64,
    pub k6_minus: f64,
}

/// ⟨N₋⟩ for the balanced DS-MZI:
/// α²(sin²(φ/2) − e^{2r}cos²(φ/2)).
pub fn expected_ndiff_balanced(alpha: f64, r: f64, phi: f64) -> f64 {
    let s2 = (phi / 2.0).sin().powi(2);
    let c2 = (phi / 2.0).cos().powi(2);
    alpha * alpha * (s2 - c2 * (2.0 * r).exp())
}

/// Var(N₋) for the balanced DS-MZI:
/// α²[(sin²(φ/2) − e^{2r}cos²(φ/2))² + sin²φ cosh²r] + cos⁴(φ/2) sinh²2r.
pub fn variance_ndiff_balanced(alpha: f64, r: f64, phi: f64) -> f64 {
    let s2 = (phi / 2.0).sin().powi(2);
    let c2 = (phi / 2.0).cos().powi(2);
    let a2 = alpha * alpha;
    a2 * ((s2 - c2 * (2.0 * r).exp()).powi(2) + phi.sin().powi(2) * r.cosh().powi(2))
        + c2 * c2 * (2.0 * r).sinh().powi(2)
}

/// ⟨N₊⟩ for the balanced DS-MZI:
/// α²(sin²(φ/2) + e^{2r}cos²(φ/2)) + cos²(φ/2)(cosh2r − 1).
pub fn total_photons_balanced(alpha: f64, r: f64, phi: f64) -> f64 {
    let s2 = (phi / 2.0).sin().powi(2);
    let c2 = (phi / 2.0).cos().powi(2);
    alpha * alpha * (s2 + c2 * (2.0 * r).exp()) + c2 * ((2.0 * r).cosh() - 1.0)
}

/// h-coefficients of the balanced decomposition:
/// h± = 2(sin²(φ/2) ± cos²(φ/2)cosh2r), h₁ = 2 sinφ cosh r,
/// h₂ = 2 sinφ sinh r, h₃ = 2 cos²(φ/2) sinh 2r.
pub fn balanced_coefficients(r: f64, phi: f64) -> BalancedCoefficients {
    let s2 = (phi / 2.0).sin().powi(2);
    let c2 = (phi / 2.0).cos().powi(2);
    BalancedCoefficients {
        h_plus: 2.0 * (s2 + c2 * (2.0 * r).cosh()),
        h_minus: 2.0 * (s2 - c2 * (2.0 * r).cosh()),
        h1: 2.0 * phi.sin() * r.cosh(),
        h2: 2.0 * phi.sin() * r.sinh(),
        h3: 2.0 * c2 * (2.0 * r).sinh(),
    }
}

/// ⟨N₋⟩ for the general DS-MZI:
/// α²(sin²(φ/2) − e^{2r₂}cos²(φ/2)) − sin²(φ/2) sinh²(r₁−r₂)
///   + ½cos²(φ/2)(cosh2r₁ − cosh2r₂).
pub fn expected_ndiff_unbalanced(alpha: f64, r1: f64, r2: f64, phi: f64) -> f64 {
    let s2 = (phi / 2.0).sin().powi(2);
    let c2 = (phi / 2.0).cos().powi(2);
    alpha * alpha * (s2 - c2 * (2.0 * r2).exp()) - s2 * (r1 - r2).sinh().powi(2)
        + 0.5 * c2 * ((2.0 * r1).cosh() - (2.0 * r2).cosh())
}

/// ⟨N₊⟩ for the general DS-MZI:
/// α²(sin²(φ/2) + e^{2r₂}cos²(φ/2)) + sin²(φ/2) sinh²(r₁−r₂)
///   + ½cos²(φ/2)(cosh2r₁ + cosh2r₂ − 2).
pub fn total_photons_unbalanced(alpha: f64, r1: f64, r2: f64, phi: f64) -> f64 {
    let s2 = (phi / 2.0).sin().powi(2);
    let c2 = (phi / 2.0).cos().powi(2);
    alpha * alpha * (s2 + c2 * (2.0 * r2).exp())
        + s2 * (r1 - r2).sinh().powi(2)
        + 0.5 * c2 * ((2.0 * r1).cosh() + (2.0 * r2).cosh() - 2.0)
}

/// k-coefficients of the general decomposition.
pub fn unbalanced_coefficients(r1: f64, r2: f64, phi: f64) -> UnbalancedCoefficients {
    let s2 = (phi / 2.0).sin().powi(2);
    let c2 = (phi / 2.0).cos().powi(2);
    let sp = phi.sin();
    let dr = r1 - r2;
    let (c1, c2r) = ((2.0 * r1).cosh(), (2.0 * r2).cosh());
    UnbalancedCoefficients {
        k1_plus: -2.0 * s2 * dr.sinh().powi(2) + c2 * (c1 - c2r),
        k1_minus: -2.0 * s2 * dr.sinh().powi(2) - c2 * (c1 - c2r),
        k2_plus: 2.0 * s2 * dr.cosh().powi(2) + c2 * (c1 + c2r),
        k2_minus: 2.0 * s2 * dr.cosh().powi(2) - c2 * (c1 + c2r),
        k3_plus: 2.0 * c2 * (2.0 * r2).sinh(),
        k3_minus: -2.0 * c2 * (2.0 * r2).sinh(),
        k4_plus: 2.0 * (c2 * (2.0 * r1).sinh() + s2 * (2.0 * dr).sinh()),
        k4_minus: 2.0 * (c2 * (2.0 * r1).sinh() - s2 * (2.0 * dr).sinh()),
        k5_plus: sp * (r1.cosh() + (2.0 * r2 - r1).cosh()),
        k5_minus: sp * (r1.cosh() - (2.0 * r2 - r1).cosh()),
        k6_plus: sp * (r1.sinh() + (2.0 * r2 - r1).sinh()),
        k6_minus: sp * (r1.sinh() - (2.0 * r2 - r1).sinh()),
    }
}

/// Var(N₋) for the general DS-MZI, evaluated through the operator
/// decomposition: with c_z…c_k the k-coefficients multiplying
/// (K_z, J_z, K_{a,x}, K_{b,x}, J_y, K_y), the second moments of the
/// generators on |α,0⟩ collapse the quadratic form to
///
/// ```text
/// Var(N₋) = (α²/4)[(c_z + c_j + c_a)² + (c_y − c_k)²]
///           + (c_a² + c_b²)/8 + c_k²/4.
/// ```
///
/// Reduces to the balanced variance at r₁ = r₂ and to
/// α²e^{−2r₁} + sinh²r₁ for the conventional scheme at φ = π/2.
pub fn variance_ndiff_unbalanced(alpha: f64, r1: f64, r2: f64, phi: f64) -> f64 {
    let k = unbalanced_coefficients(r1, r2, phi);
    let lin = k.k1_plus + k.k2_minus + k.k3_minus;
    let rot = k.k5_plus - k.k6_minus;
    let a2 = alpha * alpha;
    (a2 / 4.0) * (lin * lin + rot * rot)
        + (k.k3_minus * k.k3_minus + k.k4_minus * k.k4_minus) / 8.0
        + k.k6_minus * k.k6_minus / 4.0
}

/// All closed-form moments (and the analytic φ-derivative of ⟨N₋⟩) for a
/// configuration. Detection efficiency does not enter the ideal moments.
pub fn moments(cfg: &InterferometerConfig) -> MomentSet {
    MomentSet {
        n_minus_mean: expected_ndiff_unbalanced(cfg.alpha, cfg.r1, cfg.r2, cfg.phi),
        n_plus_mean: total_photons_unbalanced(cfg.alpha, cfg.r1, cfg.r2, cfg.phi),
        n_minus_var: variance_ndiff_unbalanced(cfg.alpha, cfg.r1, cfg.r2, cfg.phi),
        dn_minus_dphi: Some(crate::sensitivity::dndiff_dphi(cfg)),
        path: MomentPath::ClosedForm,
    }
}
