//! Phase-space representation of the DS-MZI.
//!
//! States are Gaussian and tracked by a 4×4 covariance matrix and a
//! length-4 mean vector over the quadratures (x_a, p_a, x_b, p_b), with the
//! vacuum normalized to unit variance (σ_vac = I) and coherent amplitude α
//! entering the mean as √2α. Optical elements are symplectic maps
//! σ → FσFᵀ, r̄ → Fr̄ + d with d = 0 throughout.
//!
//! The element matrices are fixed by the Heisenberg-picture mode relations
//! a → (a+b)/√2, b → (b−a)/√2 for the 50:50 beam splitter,
//! b → b cosh r + b† sinh r for the squeezer, and a → a e^{iφ/2},
//! b → b e^{−iφ/2} for the phase shifter; every moment derived here must
//! agree with the closed forms in [`crate::closed_form`].

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64;

use crate::closed_form::{MomentPath, MomentSet};
use crate::config::InterferometerConfig;
use crate::error::{Error, Result};

/// Quadrature ordering is (x_a, p_a, x_b, p_b) everywhere.
pub type QuadratureVector = Vector4<f64>;
pub type CovarianceMatrix = Matrix4<f64>;

/// Tolerance on the symplectic condition ‖FΩFᵀ − Ω‖∞.
pub const SYMPLECTIC_TOL: f64 = 1e-12;
/// Tolerance on covariance symmetry.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Eigenvalue slack for positive-definiteness checks.
pub const EIGEN_SLACK: f64 = 1e-10;

/// Output mode label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

/// The standard symplectic form Ω for two modes.
pub fn symplectic_form() -> Matrix4<f64> {
    let mut om = Matrix4::zeros();
    om[(0, 1)] = 1.0;
    om[(1, 0)] = -1.0;
    om[(2, 3)] = 1.0;
    om[(3, 2)] = -1.0;
    om
}

/// A linear phase-space map with F Ω Fᵀ = Ω. The displacement is carried
/// for completeness; all elements modeled here leave it zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    matrix: Matrix4<f64>,
    displacement: QuadratureVector,
}

impl SymplecticTransform {
    /// Wraps a matrix after verifying the symplectic condition.
    pub fn new(matrix: Matrix4<f64>) -> Result<Self> {
        let om = symplectic_form();
        let defect = (matrix * om * matrix.transpose() - om).abs().max();
        if !defect.is_finite() || defect > SYMPLECTIC_TOL {
            return Err(Error::NotSymplectic { defect });
        }
        Ok(Self {
            matrix,
            displacement: QuadratureVector::zeros(),
        })
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.matrix
    }

    pub fn displacement(&self) -> &QuadratureVector {
        &self.displacement
    }

    /// ‖FΩFᵀ − Ω‖∞, for diagnostics.
    pub fn symplectic_defect(&self) -> f64 {
        let om = symplectic_form();
        (self.matrix * om * self.matrix.transpose() - om).abs().max()
    }

    /// Composition: `self ∘ other` (other acts first).
    pub fn then_after(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix * other.matrix,
            displacement: self.matrix * other.displacement + self.displacement,
        }
    }
}

/// Single-mode squeezer on mode b: identity on mode a,
/// diag(e^r, e^{−r}) on the (x_b, p_b) quadratures.
pub fn symplectic_squeezer(r: f64) -> Result<SymplecticTransform> {
    if !r.is_finite() {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            reason: "squeezing parameter must be finite",
        });
    }
    let m = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, r.exp(), (-r).exp()));
    SymplecticTransform::new(m)
}

/// 50:50 beam splitter: x_a → (x_a + x_b)/√2, x_b → (x_b − x_a)/√2 and the
/// same on the p quadratures.
pub fn symplectic_beamsplitter() -> SymplecticTransform {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let m = Matrix4::new(
        s, 0.0, s, 0.0, //
        0.0, s, 0.0, s, //
        -s, 0.0, s, 0.0, //
        0.0, -s, 0.0, s,
    );
    SymplecticTransform::new(m).expect("fixed beam-splitter matrix is symplectic")
}

/// Phase shifter: rotation by +φ/2 on mode a and −φ/2 on mode b.
pub fn symplectic_phase(phi: f64) -> SymplecticTransform {
    let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
    let m = Matrix4::new(
        c, -s, 0.0, 0.0, //
        s, c, 0.0, 0.0, //
        0.0, 0.0, c, s, //
        0.0, 0.0, -s, c,
    );
    SymplecticTransform {
        matrix: m,
        displacement: QuadratureVector::zeros(),
    }
}

/// Two-mode Gaussian state: covariance (vacuum = identity) plus mean.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    cov: CovarianceMatrix,
    mean: QuadratureVector,
}

impl GaussianState {
    pub fn new(cov: CovarianceMatrix, mean: QuadratureVector) -> Result<Self> {
        let asym = (cov - cov.transpose()).abs().max();
        if !asym.is_finite() || asym > SYMMETRY_TOL {
            return Err(Error::Degenerate(format!(
                "covariance asymmetry {asym:.3e}"
            )));
        }
        if mean.iter().any(|m| !m.is_finite()) {
            return Err(Error::Degenerate("non-finite mean vector".into()));
        }
        let state = Self { cov, mean };
        let min_eig = state.min_cov_eigenvalue();
        if min_eig < -EIGEN_SLACK {
            return Err(Error::Degenerate(format!(
                "covariance eigenvalue {min_eig:.3e} below zero"
            )));
        }
        let unc = state.uncertainty_defect();
        if unc < -1e-9 {
            return Err(Error::Degenerate(format!(
                "uncertainty bound violated by {unc:.3e}"
            )));
        }
        Ok(state)
    }

    /// Two-mode vacuum.
    pub fn vacuum() -> Self {
        Self {
            cov: Matrix4::identity(),
            mean: QuadratureVector::zeros(),
        }
    }

    /// |α⟩_a ⊗ |0⟩_b with real amplitude: identity covariance, mean
    /// (√2α, 0, 0, 0).
    pub fn coherent_input(alpha: f64) -> Self {
        Self {
            cov: Matrix4::identity(),
            mean: Vector4::new(std::f64::consts::SQRT_2 * alpha, 0.0, 0.0, 0.0),
        }
    }

    pub fn cov(&self) -> &CovarianceMatrix {
        &self.cov
    }

    pub fn mean(&self) -> &QuadratureVector {
        &self.mean
    }

    /// Smallest eigenvalue of the (symmetrized) covariance.
    pub fn min_cov_eigenvalue(&self) -> f64 {
        let sym = (self.cov + self.cov.transpose()) * 0.5;
        sym.symmetric_eigenvalues().min()
    }

    /// Smallest eigenvalue of the Hermitian matrix σ + iΩ, evaluated via the
    /// real embedding [[σ, −Ω], [Ω, σ]]. Non-negative (up to roundoff) for
    /// every physical state.
    pub fn uncertainty_defect(&self) -> f64 {
        let om = symplectic_form();
        let mut big = nalgebra::SMatrix::<f64, 8, 8>::zeros();
        for i in 0..4 {
            for j in 0..4 {
                big[(i, j)] = self.cov[(i, j)];
                big[(i + 4, j + 4)] = self.cov[(i, j)];
                big[(i, j + 4)] = -om[(i, j)];
                big[(i + 4, j)] = om[(i, j)];
            }
        }
        big.symmetric_eigenvalues().min()
    }
}

/// σ → FσFᵀ, r̄ → Fr̄ + d.
pub fn evolve(state: &GaussianState, t: &SymplecticTransform) -> GaussianState {
    GaussianState {
        cov: t.matrix * state.cov * t.matrix.transpose(),
        mean: t.matrix * state.mean + t.displacement,
    }
}

/// Propagates |α,0⟩ through S₁(r₁), B, U(φ), B, S₂(r₂) and returns the
/// output state. Detection efficiency is not part of the lossless
/// phase-space evolution.
pub fn ds_mzi_output(cfg: &InterferometerConfig) -> Result<GaussianState> {
    cfg.validate()?;
    let s1 = symplectic_squeezer(cfg.r1)?;
    let s2 = symplectic_squeezer(cfg.r2)?;
    let bs = symplectic_beamsplitter();
    let u = symplectic_phase(cfg.phi);
    let mut state = evolve(&GaussianState::coherent_input(cfg.alpha), &s1);
    state = evolve(&state, &bs);
    state = evolve(&state, &u);
    state = evolve(&state, &bs);
    Ok(evolve(&state, &s2))
}

/// 2×2 covariance block and 2-entry mean of one output mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeMarginal {
    pub cov2: Matrix2<f64>,
    pub mean2: Vector2<f64>,
    pub mode: Mode,
}

pub fn mode_marginal(state: &GaussianState, mode: Mode) -> ModeMarginal {
    let o = match mode {
        Mode::A => 0,
        Mode::B => 2,
    };
    ModeMarginal {
        cov2: state.cov.fixed_view::<2, 2>(o, o).into_owned(),
        mean2: Vector2::new(state.mean[o], state.mean[o + 1]),
        mode,
    }
}

/// Gaussian phase-space density of a single-mode marginal at (x, p):
/// W = exp(−½ dᵀσ⁻¹d) / (2π√detσ). Normalized to 1 over the plane.
pub fn wigner_value(m: &ModeMarginal, x: f64, p: f64) -> Result<f64> {
    let det = m.cov2.determinant();
    if det.is_nan() || det <= 1e-300 {
        return Err(Error::Degenerate(format!(
            "marginal covariance determinant {det:.3e}"
        )));
    }
    let inv = m
        .cov2
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("marginal covariance not invertible".into()))?;
    let d = Vector2::new(x - m.mean2[0], p - m.mean2[1]);
    let q = (d.transpose() * inv * d)[(0, 0)];
    Ok((-0.5 * q).exp() / (2.0 * std::f64::consts::PI * det.sqrt()))
}

/// Output intensity of one mode, I = ¼ tr cov2 + ½ |mean2|², normalized so
/// that ⟨n⟩ = I − ½ (vacuum intensity ½, coherent state α² + ½). The
/// intensity difference I_a − I_b is the detected signal ⟨N₋⟩.
pub fn mode_intensity(m: &ModeMarginal) -> f64 {
    0.25 * m.cov2.trace() + 0.5 * m.mean2.norm_squared()
}

/// Photon-number moments straight from the covariance matrix and mean,
/// via the Gaussian (Wick) factorization of the quartic quadrature moments.
///
/// In terms of the centered ladder two-point functions
/// A_ij = ⟨Δc_iΔc_j⟩, B_ij = ⟨Δc_i†Δc_j⟩ and the displacements β_i,
///
/// ```text
/// ⟨n_i⟩ = |β_i|² + B_ii
/// Cov(n_i, n_j) = 2Re[β̄_iβ̄_jA_ij] + 2Re[β_iβ̄_jB_ij]
///                 + |A_ij|² + |B_ij|² + δ_ij(|β_i|² + B_ii)
/// ```
///
/// which is an evaluation path independent of the closed-form algebra.
pub fn gaussian_photon_moments(state: &GaussianState) -> MomentSet {
    // Physical (half) covariance: stored convention has vacuum = I.
    let v = state.cov * 0.5;
    let mean = state.mean;
    let beta = |i: usize| Complex64::new(mean[2 * i], mean[2 * i + 1]) / std::f64::consts::SQRT_2;
    let a_of = |i: usize, j: usize| {
        Complex64::new(
            0.5 * (v[(2 * i, 2 * j)] - v[(2 * i + 1, 2 * j + 1)]),
            0.5 * (v[(2 * i, 2 * j + 1)] + v[(2 * i + 1, 2 * j)]),
        )
    };
    let b_of = |i: usize, j: usize| {
        let mut b = Complex64::new(
            0.5 * (v[(2 * i, 2 * j)] + v[(2 * i + 1, 2 * j + 1)]),
            0.5 * (v[(2 * i, 2 * j + 1)] - v[(2 * i + 1, 2 * j)]),
        );
        if i == j {
            b -= 0.5;
        }
        b
    };
    let (ba, bb) = (beta(0), beta(1));
    let n_of = |i: usize, b: Complex64| b.norm_sqr() + b_of(i, i).re;
    let n_a = n_of(0, ba);
    let n_b = n_of(1, bb);
    let cov_n = |i: usize, j: usize, bi: Complex64, bj: Complex64| {
        let a = a_of(i, j);
        let b = b_of(i, j);
        let mut c = 2.0 * (bi.conj() * bj.conj() * a).re + 2.0 * (bi * bj.conj() * b).re
            + a.norm_sqr()
            + b.norm_sqr();
        if i == j {
            c += bi.norm_sqr() + b_of(i, i).re;
        }
        c
    };
    let var = cov_n(0, 0, ba, ba) + cov_n(1, 1, bb, bb) - 2.0 * cov_n(0, 1, ba, bb);
    MomentSet {
        n_minus_mean: n_a - n_b,
        n_plus_mean: n_a + n_b,
        n_minus_var: var,
        dn_minus_dphi: None,
        path: MomentPath::Gaussian,
    }
}
