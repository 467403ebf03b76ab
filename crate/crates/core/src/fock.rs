//! Truncated-Fock-space oracle: exact state evolution of the DS-MZI in a
//! finite two-mode photon-number basis.
//!
//! Everything here exists to verify the closed-form and phase-space paths
//! at small parameters, not to be fast at bright ones. Operators are built
//! by exponentiating the truncated generators (scaling-and-squaring), which
//! keeps them exactly unitary on the truncated space; truncation artifacts
//! therefore show up not as norm loss but as probability piling into the
//! top few Fock levels. A `GUARD`-level band at the top of each mode acts
//! as the leakage detector: a run refuses (rather than reporting corrupted
//! moments) when more than [`GUARD_OCCUPANCY_LIMIT`] of the probability
//! reaches the band at any stage. The threshold is calibrated so accepted
//! runs reproduce the closed forms to better than 1e-6 absolute at
//! cutoff 50.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::closed_form::{MomentPath, MomentSet};
use crate::config::InterferometerConfig;
use crate::error::{Error, Result};

/// Largest supported per-mode cutoff (joint dimension 61² = 3721).
pub const MAX_CUTOFF: usize = 60;
/// Fock levels at the top of each mode treated as the guard band.
pub const GUARD: usize = 10;
/// A run refuses when guard-band occupancy exceeds this at any stage.
pub const GUARD_OCCUPANCY_LIMIT: f64 = 1e-8;
/// Maximum tolerated probability lost when preparing the coherent input.
pub const COHERENT_TAIL_LIMIT: f64 = 1e-8;

/// Two-mode state |ψ⟩ = Σ amps[n_a, n_b] |n_a, n_b⟩ with 0 ≤ n ≤ cutoff.
#[derive(Debug, Clone)]
pub struct FockState {
    /// Row index n_a, column index n_b.
    pub amps: DMatrix<Complex64>,
    pub cutoff: usize,
    /// Largest truncation indicator seen while producing this state:
    /// probability clipped at preparation or guard-band occupancy.
    pub trunc_error: f64,
}

impl FockState {
    fn dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Probability currently sitting in the top [`GUARD`] levels of either
    /// mode.
    pub fn guard_occupancy(&self) -> f64 {
        let d = self.dim();
        let lo = d.saturating_sub(GUARD);
        let mut row = 0.0;
        let mut col = 0.0;
        for na in 0..d {
            for nb in 0..d {
                let p = self.amps[(na, nb)].norm_sqr();
                if na >= lo {
                    row += p;
                }
                if nb >= lo {
                    col += p;
                }
            }
        }
        row.max(col)
    }
}

/// |α⟩ on mode a (real amplitude), vacuum on mode b.
pub fn coherent_state(alpha: f64, cutoff: usize) -> Result<FockState> {
    if cutoff == 0 || cutoff > MAX_CUTOFF {
        return Err(Error::CutoffTooLarge {
            requested: cutoff,
            max: MAX_CUTOFF,
        });
    }
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must be finite and non-negative",
        });
    }
    let d = cutoff + 1;
    let mut amps = DMatrix::zeros(d, d);
    let mut c = (-alpha * alpha / 2.0).exp();
    let mut norm = 0.0;
    for n in 0..d {
        if n > 0 {
            c *= alpha / (n as f64).sqrt();
        }
        amps[(n, 0)] = Complex64::new(c, 0.0);
        norm += c * c;
    }
    let tail = (1.0 - norm).max(0.0);
    if tail > COHERENT_TAIL_LIMIT {
        return Err(Error::Truncation {
            leak: tail,
            limit: COHERENT_TAIL_LIMIT,
        });
    }
    Ok(FockState {
        amps,
        cutoff,
        trunc_error: tail,
    })
}

/// A Gaussian element on the truncated basis. Single-mode factors and the
/// total-photon block structure of the beam splitter are kept instead of
/// the full joint matrix.
#[derive(Debug, Clone)]
pub enum FockOperator {
    /// Acts on one mode only (squeezers).
    SingleMode {
        mode: crate::gaussian::Mode,
        matrix: DMatrix<Complex64>,
        label: &'static str,
    },
    /// Diagonal phase e^{iφ(n_a − n_b)/2}.
    PhaseDiagonal { phi: f64 },
    /// Photon-number conserving two-mode map; `blocks[n]` acts on the
    /// subspace with n_a + n_b = n (basis ordered by increasing n_a).
    TotalNumberBlocks {
        blocks: Vec<DMatrix<f64>>,
        label: &'static str,
    },
}

impl FockOperator {
    pub fn label(&self) -> &'static str {
        match self {
            FockOperator::SingleMode { label, .. } => label,
            FockOperator::PhaseDiagonal { .. } => "phase",
            FockOperator::TotalNumberBlocks { label, .. } => label,
        }
    }

    /// ‖U†U − I‖∞ over the stored factors.
    pub fn max_unitarity_defect(&self) -> f64 {
        match self {
            FockOperator::SingleMode { matrix, .. } => {
                let d = matrix.nrows();
                let prod = matrix.adjoint() * matrix;
                let mut worst = 0.0f64;
                for i in 0..d {
                    for j in 0..d {
                        let want = if i == j { 1.0 } else { 0.0 };
                        worst = worst.max((prod[(i, j)] - want).norm());
                    }
                }
                worst
            }
            FockOperator::PhaseDiagonal { .. } => 0.0,
            FockOperator::TotalNumberBlocks { blocks, .. } => {
                let mut worst = 0.0f64;
                for b in blocks {
                    let prod = b.transpose() * b;
                    let m = b.nrows();
                    for i in 0..m {
                        for j in 0..m {
                            let want = if i == j { 1.0 } else { 0.0 };
                            worst = worst.max((prod[(i, j)] - want).abs());
                        }
                    }
                }
                worst
            }
        }
    }

    pub fn apply(&self, state: &FockState) -> FockState {
        let d = state.cutoff + 1;
        let amps = match self {
            FockOperator::SingleMode { mode, matrix, .. } => match mode {
                crate::gaussian::Mode::A => matrix * &state.amps,
                crate::gaussian::Mode::B => &state.amps * matrix.transpose(),
            },
            FockOperator::PhaseDiagonal { phi } => {
                let mut out = state.amps.clone();
                for na in 0..d {
                    for nb in 0..d {
                        let theta = phi * (na as f64 - nb as f64) / 2.0;
                        out[(na, nb)] *= Complex64::from_polar(1.0, theta);
                    }
                }
                out
            }
            FockOperator::TotalNumberBlocks { blocks, .. } => {
                let mut out = DMatrix::zeros(d, d);
                for (total, block) in blocks.iter().enumerate() {
                    let lo = total.saturating_sub(d - 1);
                    let m = block.nrows();
                    let mut v = vec![Complex64::default(); m];
                    for (i, slot) in v.iter_mut().enumerate() {
                        *slot = state.amps[(lo + i, total - lo - i)];
                    }
                    for i in 0..m {
                        let mut acc = Complex64::default();
                        for (j, vj) in v.iter().enumerate() {
                            acc += block[(i, j)] * vj;
                        }
                        out[(lo + i, total - lo - i)] = acc;
                    }
                }
                out
            }
        };
        FockState {
            amps,
            cutoff: state.cutoff,
            trunc_error: state.trunc_error,
        }
    }
}

/// exp(M) by scaling-and-squaring with a Taylor kernel (our generators are
/// real and of modest norm, so this stays at machine precision).
fn matrix_exp(m: &DMatrix<f64>) -> DMatrix<f64> {
    let d = m.nrows();
    let one_norm = (0..d)
        .map(|j| (0..d).map(|i| m[(i, j)].abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let squarings = if one_norm > 0.5 {
        (one_norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m / 2f64.powi(squarings as i32);
    let mut sum = DMatrix::<f64>::identity(d, d);
    let mut term = DMatrix::<f64>::identity(d, d);
    for k in 1..=40 {
        term = (&term * &scaled) / k as f64;
        sum += &term;
        if term.abs().max() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff == 0 || cutoff > MAX_CUTOFF {
        return Err(Error::CutoffTooLarge {
            requested: cutoff,
            max: MAX_CUTOFF,
        });
    }
    Ok(())
}

/// Squeezer exp[r(b†² − b²)/2] on the requested mode; the Heisenberg action
/// is b → b cosh r + b† sinh r (x-quadrature variance grows as e^{2r}).
pub fn squeeze_operator(r: f64, mode: crate::gaussian::Mode, cutoff: usize) -> Result<FockOperator> {
    check_cutoff(cutoff)?;
    if !r.is_finite() || r.abs() > crate::config::MAX_SQUEEZING {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            reason: "squeezing parameter out of range",
        });
    }
    let d = cutoff + 1;
    // G[(n+2, n)] = r/2·√((n+1)(n+2)) from b†², minus the transpose from b².
    let mut gen = DMatrix::<f64>::zeros(d, d);
    for n in 0..d - 2 {
        let amp = 0.5 * r * (((n + 1) * (n + 2)) as f64).sqrt();
        gen[(n + 2, n)] = amp;
        gen[(n, n + 2)] = -amp;
    }
    let label = match mode {
        crate::gaussian::Mode::A => "squeeze(a)",
        crate::gaussian::Mode::B => "squeeze(b)",
    };
    Ok(FockOperator::SingleMode {
        mode,
        matrix: matrix_exp(&gen).map(|x| Complex64::new(x, 0.0)),
        label,
    })
}

/// 50:50 beam splitter exp[(π/4)(a†b − ab†)], block-diagonal in the total
/// photon number; Heisenberg action a → (a+b)/√2, b → (b−a)/√2.
pub fn beamsplitter_operator(cutoff: usize) -> Result<FockOperator> {
    check_cutoff(cutoff)?;
    let d = cutoff + 1;
    let mut blocks = Vec::with_capacity(2 * d - 1);
    for total in 0..(2 * d - 1) {
        let lo = total.saturating_sub(d - 1);
        let hi = total.min(d - 1);
        let m = hi - lo + 1;
        let mut gen = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            let na = lo + i;
            let nb = total - na;
            // a†b: (n_a, n_b) → (n_a+1, n_b−1)
            if nb >= 1 && na < cutoff {
                gen[(i + 1, i)] += (((na + 1) * nb) as f64).sqrt();
            }
            // −ab†: (n_a, n_b) → (n_a−1, n_b+1)
            if na >= 1 && nb < cutoff {
                gen[(i - 1, i)] -= ((na * (nb + 1)) as f64).sqrt();
            }
        }
        gen *= std::f64::consts::FRAC_PI_4;
        blocks.push(matrix_exp(&gen));
    }
    Ok(FockOperator::TotalNumberBlocks {
        blocks,
        label: "beamsplitter",
    })
}

/// Phase shifter exp[iφ(n_a − n_b)/2] (diagonal).
pub fn phase_operator(phi: f64, _cutoff: usize) -> FockOperator {
    FockOperator::PhaseDiagonal { phi }
}

/// Reusable oracle for one cutoff; the beam splitter (the expensive factor)
/// is built once.
pub struct FockSimulator {
    cutoff: usize,
    beamsplitter: FockOperator,
}

impl FockSimulator {
    pub fn new(cutoff: usize) -> Result<Self> {
        Ok(Self {
            cutoff,
            beamsplitter: beamsplitter_operator(cutoff)?,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Evolves |α,0⟩ through S₁, B, U(φ), B, S₂ and returns the output
    /// state, refusing if the guard band fills beyond
    /// [`GUARD_OCCUPANCY_LIMIT`] at any stage.
    pub fn run(&self, cfg: &InterferometerConfig) -> Result<FockState> {
        cfg.validate()?;
        let s1 = squeeze_operator(cfg.r1, crate::gaussian::Mode::B, self.cutoff)?;
        let s2 = squeeze_operator(cfg.r2, crate::gaussian::Mode::B, self.cutoff)?;
        let phase = phase_operator(cfg.phi, self.cutoff);
        let mut state = coherent_state(cfg.alpha, self.cutoff)?;
        let mut worst = state.trunc_error;
        for op in [&s1, &self.beamsplitter, &phase, &self.beamsplitter, &s2] {
            state = op.apply(&state);
            let leak = state.guard_occupancy();
            worst = worst.max(leak);
            if leak > GUARD_OCCUPANCY_LIMIT {
                return Err(Error::Truncation {
                    leak,
                    limit: GUARD_OCCUPANCY_LIMIT,
                });
            }
        }
        state.trunc_error = worst;
        Ok(state)
    }

    /// Quantum Fisher information 4·Var(J_z) with J_z = (n_a − n_b)/2,
    /// evaluated on the state right after the first beam splitter (where
    /// the phase generator acts).
    pub fn qfi(&self, alpha: f64, r1: f64) -> Result<f64> {
        let s1 = squeeze_operator(r1, crate::gaussian::Mode::B, self.cutoff)?;
        let state = self
            .beamsplitter
            .apply(&s1.apply(&coherent_state(alpha, self.cutoff)?));
        let leak = state.guard_occupancy();
        if leak > GUARD_OCCUPANCY_LIMIT {
            return Err(Error::Truncation {
                leak,
                limit: GUARD_OCCUPANCY_LIMIT,
            });
        }
        let d = state.cutoff + 1;
        let mut total = 0.0;
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for na in 0..d {
            for nb in 0..d {
                let p = state.amps[(na, nb)].norm_sqr();
                let jz = (na as f64 - nb as f64) / 2.0;
                total += p;
                m1 += p * jz;
                m2 += p * jz * jz;
            }
        }
        m1 /= total;
        m2 /= total;
        Ok(4.0 * (m2 - m1 * m1))
    }
}

/// One-shot convenience wrapper around [`FockSimulator::run`].
pub fn simulate_ds_mzi(cfg: &InterferometerConfig, cutoff: usize) -> Result<FockState> {
    FockSimulator::new(cutoff)?.run(cfg)
}

/// Exact moments of N∓ over the truncated joint distribution
/// P(n_a, n_b) = |⟨n_a, n_b|ψ⟩|².
pub fn photon_statistics(state: &FockState) -> MomentSet {
    let d = state.cutoff + 1;
    let mut total = 0.0;
    let (mut minus1, mut minus2, mut plus1) = (0.0, 0.0, 0.0);
    for na in 0..d {
        for nb in 0..d {
            let p = state.amps[(na, nb)].norm_sqr();
            let diff = na as f64 - nb as f64;
            total += p;
            minus1 += p * diff;
            minus2 += p * diff * diff;
            plus1 += p * (na + nb) as f64;
        }
    }
    minus1 /= total;
    minus2 /= total;
    plus1 /= total;
    MomentSet {
        n_minus_mean: minus1,
        n_plus_mean: plus1,
        n_minus_var: minus2 - minus1 * minus1,
        dn_minus_dphi: None,
        path: MomentPath::Fock,
    }
}

/// Binomial matrix B[m, n] = C(n, m) η^m (1−η)^{n−m} (lower triangular).
fn binomial_matrix(d: usize, eta: f64) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(d, d);
    for n in 0..d {
        let mut p = (1.0 - eta).powi(n as i32);
        for m in 0..=n {
            b[(m, n)] = p;
            if m < n {
                p *= (n - m) as f64 / (m + 1) as f64 * (eta / (1.0 - eta));
            }
        }
    }
    b
}

/// Detection statistics with efficiency η: each mode's photon number is
/// smeared by an exact binomial convolution of the joint distribution (no
/// sampling), then the difference moments are taken. Satisfies
/// ⟨Ñ₋⟩ = η⟨N₋⟩ and Var(Ñ₋) = η²Var(N₋) + η(1−η)⟨N₊⟩ identically.
pub fn lossy_statistics(state: &FockState, eta: f64) -> Result<MomentSet> {
    if !(eta > 0.0 && eta <= 1.0) || !eta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: eta,
            reason: "detection efficiency must lie in (0, 1]",
        });
    }
    if eta == 1.0 {
        return Ok(photon_statistics(state));
    }
    let d = state.cutoff + 1;
    let mut joint = DMatrix::<f64>::zeros(d, d);
    let mut total = 0.0;
    for na in 0..d {
        for nb in 0..d {
            let p = state.amps[(na, nb)].norm_sqr();
            joint[(na, nb)] = p;
            total += p;
        }
    }
    joint /= total;
    let b = binomial_matrix(d, eta);
    let smeared = &b * joint * b.transpose();
    let (mut m1, mut m2, mut p1) = (0.0, 0.0, 0.0);
    for ma in 0..d {
        for mb in 0..d {
            let p = smeared[(ma, mb)];
            let diff = ma as f64 - mb as f64;
            m1 += p * diff;
            m2 += p * diff * diff;
            p1 += p * (ma + mb) as f64;
        }
    }
    Ok(MomentSet {
        n_minus_mean: m1,
        n_plus_mean: p1,
        n_minus_var: m2 - m1 * m1,
        dn_minus_dphi: None,
        path: MomentPath::Fock,
    })
}

/// Convenience wrapper building a one-shot simulator for the QFI.
pub fn qfi(alpha: f64, r1: f64, cutoff: usize) -> Result<f64> {
    FockSimulator::new(cutoff)?.qfi(alpha, r1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form;
    use crate::gaussian::Mode;
    use std::f64::consts::PI;

    #[test]
    fn coherent_state_reference() {
        let st = coherent_state(0.0, 10).unwrap();
        assert_eq!(st.trunc_error, 0.0);
        assert!((st.amps[(0, 0)].re - 1.0).abs() < 1e-15);

        let st = coherent_state(1.0, 30).unwrap();
        let m = photon_statistics(&st);
        assert!((m.n_minus_mean - 1.0).abs() < 1e-10);
        assert!((m.n_minus_var - 1.0).abs() < 1e-10);

        let st = coherent_state(1.5, 40).unwrap();
        assert!(st.norm_sqr() >= 1.0 - 1e-12);

        // too small a cutoff is refused, not silently renormalized
        assert!(matches!(
            coherent_state(4.0, 12),
            Err(Error::Truncation { .. })
        ));
        assert!(coherent_state(1.0, 61).is_err());
    }

    #[test]
    fn squeeze_operator_reference() {
        let id = squeeze_operator(0.0, Mode::B, 20).unwrap();
        let vac = coherent_state(0.0, 20).unwrap();
        let out = id.apply(&vac);
        assert!((out.amps[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!(id.max_unitarity_defect() < 1e-12);

        let sq = squeeze_operator(0.5, Mode::B, 60).unwrap();
        assert!(sq.max_unitarity_defect() < 1e-12);
        let out = sq.apply(&vacuum(60));
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        let d = 61;
        let mut n_mean = 0.0;
        let mut n2 = 0.0;
        let mut odd = 0.0;
        for nb in 0..d {
            let p = out.amps[(0, nb)].norm_sqr();
            n_mean += p * nb as f64;
            n2 += p * (nb * nb) as f64;
            if nb % 2 == 1 {
                odd += p;
            }
        }
        assert!(odd < 1e-28, "squeezed vacuum must have even parity");
        assert!((n_mean - 0.5f64.sinh().powi(2)).abs() < 1e-10);
        assert!((n_mean - 0.271_540_317_407_621_9).abs() < 1e-10);
        let var = n2 - n_mean * n_mean;
        assert!((var - 0.5 * 1f64.sinh().powi(2)).abs() < 1e-9);
        assert!((var - 0.690_548_922_770_907_7).abs() < 1e-9);
        assert!(squeeze_operator(f64::NAN, Mode::B, 20).is_err());
    }

    fn vacuum(cutoff: usize) -> FockState {
        coherent_state(0.0, cutoff).unwrap()
    }

    #[test]
    fn beamsplitter_reference() {
        let bs = beamsplitter_operator(20).unwrap();
        assert!(bs.max_unitarity_defect() < 1e-12);
        // |1,0⟩ splits 50:50
        let mut st = vacuum(20);
        st.amps[(0, 0)] = Complex64::default();
        st.amps[(1, 0)] = Complex64::new(1.0, 0.0);
        let out = bs.apply(&st);
        let p10 = out.amps[(1, 0)].norm_sqr();
        let p01 = out.amps[(0, 1)].norm_sqr();
        assert!((p10 - 0.5).abs() < 1e-12 && (p01 - 0.5).abs() < 1e-12);
        // total photon number exactly conserved, block by block
        let mut off_block = 0.0f64;
        for na in 0..21 {
            for nb in 0..21 {
                if na + nb != 1 {
                    off_block += out.amps[(na, nb)].norm_sqr();
                }
            }
        }
        assert!(off_block < 1e-28);
    }

    #[test]
    fn mzi_sign_convention() {
        // Full passive MZI at φ = 0 swaps the modes: all light exits port b.
        let sim = FockSimulator::new(30).unwrap();
        let cfg = InterferometerConfig::new(1.0, 0.0, 0.0, 0.0, 1.0).unwrap();
        let m = photon_statistics(&sim.run(&cfg).unwrap());
        assert!((m.n_minus_mean + 1.0).abs() < 1e-10);
    }

    #[test]
    fn phase_operator_reference() {
        let ph = phase_operator(0.0, 10);
        let st = coherent_state(0.8, 10).unwrap();
        let out = ph.apply(&st);
        assert!((&out.amps - &st.amps).iter().all(|c| c.norm() < 1e-15));
        // half-angle convention: 2π puts e^{iπ} on |1,0⟩
        let ph = phase_operator(2.0 * PI, 10);
        let mut one = vacuum(10);
        one.amps[(0, 0)] = Complex64::default();
        one.amps[(1, 0)] = Complex64::new(1.0, 0.0);
        let out = ph.apply(&one);
        assert!((out.amps[(1, 0)] + Complex64::new(1.0, 0.0)).norm() < 1e-14);
        // diagonal ⇒ photon statistics untouched
        let ph = phase_operator(1.234, 10);
        let a = photon_statistics(&st);
        let b = photon_statistics(&ph.apply(&st));
        assert!((a.n_minus_mean - b.n_minus_mean).abs() < 1e-13);
        assert!((a.n_minus_var - b.n_minus_var).abs() < 1e-13);
    }

    #[test]
    fn simulate_matches_closed_forms() {
        let sim = FockSimulator::new(40).unwrap();
        let cfg = InterferometerConfig::balanced(1.0, 0.5, PI / 2.0).unwrap();
        let m = photon_statistics(&sim.run(&cfg).unwrap());
        assert!((m.n_minus_mean - closed_form::expected_ndiff_balanced(1.0, 0.5, PI / 2.0)).abs() < 1e-8);
        assert!((m.n_plus_mean - closed_form::total_photons_balanced(1.0, 0.5, PI / 2.0)).abs() < 1e-8);
        assert!((m.n_minus_var - closed_form::variance_ndiff_balanced(1.0, 0.5, PI / 2.0)).abs() < 1e-8);

        // plain MZI fringes
        for phi in [0.3, 1.1, 2.4] {
            let cfg = InterferometerConfig::new(1.2, 0.0, 0.0, phi, 1.0).unwrap();
            let m = photon_statistics(&sim.run(&cfg).unwrap());
            assert!((m.n_minus_mean + 1.44 * phi.cos()).abs() < 1e-9);
        }

        // α = 0, balanced, φ = π: the output squeezer undoes the input one
        // and the state returns to vacuum up to a global phase
        let cfg = InterferometerConfig::balanced(0.0, 0.5, PI).unwrap();
        let m = photon_statistics(&sim.run(&cfg).unwrap());
        assert!(m.n_minus_var.abs() < 1e-10);
        assert!(m.n_plus_mean.abs() < 1e-10);
    }

    #[test]
    fn simulate_refuses_when_truncation_bites() {
        // bright + strongly amplified: the guard band fills at cutoff 50
        let cfg = InterferometerConfig::balanced(1.0, 0.9, 0.1).unwrap();
        match simulate_ds_mzi(&cfg, 50) {
            Err(Error::Truncation { leak, .. }) => assert!(leak > GUARD_OCCUPANCY_LIMIT),
            other => panic!("expected truncation refusal, got {other:?}"),
        }
    }

    #[test]
    fn cutoff_doubling_is_stable_where_accepted() {
        // Points chosen inside the oracle's converged domain.
        for (alpha, r1, r2, phi) in [
            (0.6, 0.4, 0.4, 1.57),
            (0.8, 0.3, 0.3, 2.0),
            (1.0, 0.3, 0.15, 1.0),
            (1.0, 0.4, 0.0, 1.57),
        ] {
            let cfg = InterferometerConfig::new(alpha, r1, r2, phi, 1.0).unwrap();
            let a = photon_statistics(&simulate_ds_mzi(&cfg, 30).unwrap());
            let b = photon_statistics(&simulate_ds_mzi(&cfg, 60).unwrap());
            let change = (a.n_minus_mean - b.n_minus_mean)
                .abs()
                .max((a.n_plus_mean - b.n_plus_mean).abs())
                .max((a.n_minus_var - b.n_minus_var).abs());
            assert!(change < 1e-8, "doubling changed moments by {change:.2e}");
        }
    }

    #[test]
    fn lossy_statistics_reference() {
        let st = coherent_state(1.0, 30).unwrap();
        // η = 1 is exactly lossless
        let a = photon_statistics(&st);
        let b = lossy_statistics(&st, 1.0).unwrap();
        assert_eq!(a.n_minus_mean, b.n_minus_mean);
        // thinned Poisson keeps Poisson statistics at η⟨n⟩
        let c = lossy_statistics(&st, 0.5).unwrap();
        assert!((c.n_minus_mean - 0.5).abs() < 1e-10);
        assert!((c.n_minus_var - 0.5).abs() < 1e-10);
        assert!(lossy_statistics(&st, 0.0).is_err());
        assert!(lossy_statistics(&st, 1.2).is_err());
    }

    #[test]
    fn lossy_identity_on_ds_output() {
        let sim = FockSimulator::new(40).unwrap();
        let cfg = InterferometerConfig::balanced(1.0, 0.5, PI / 2.0).unwrap();
        let state = sim.run(&cfg).unwrap();
        let ideal = photon_statistics(&state);
        for eta in [0.5, 0.8, 0.9] {
            let smeared = lossy_statistics(&state, eta).unwrap();
            assert!((smeared.n_minus_mean - eta * ideal.n_minus_mean).abs() < 1e-12);
            let want = eta * eta * ideal.n_minus_var + eta * (1.0 - eta) * ideal.n_plus_mean;
            assert!((smeared.n_minus_var - want).abs() < 1e-10);
        }
    }

    #[test]
    fn qfi_reference_values() {
        let sim = FockSimulator::new(40).unwrap();
        assert!(sim.qfi(0.0, 0.0).unwrap().abs() < 1e-12);
        assert!((sim.qfi(1.0, 0.0).unwrap() - 1.0).abs() < 1e-10);
        let got = sim.qfi(1.0, 0.5).unwrap();
        let want = 1f64.exp() + 0.5f64.sinh().powi(2);
        assert!((got - want).abs() < 1e-8);
        assert!((got - 2.989_822_145_865).abs() < 1e-8);
    }
}
