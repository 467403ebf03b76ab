use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Squeezing parameters above this value overflow the hyperbolic closed
/// forms in double precision; operations refuse rather than lose digits.
pub const MAX_SQUEEZING: f64 = 20.0;

/// The five physical parameters of a DS-MZI run.
///
/// Mode a is fed a coherent state of real amplitude `alpha`; mode b starts
/// in vacuum and is squeezed by `r1` before the interferometer. `r2` is the
/// output squeezer applied to mode b before detection (`r2 = r1` is the
/// balanced configuration, `r2 = 0` the conventional squeezed-light scheme).
/// `phi` is the interferometer phase and `eta` the detection efficiency of
/// the (identical) photon counters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferometerConfig {
    pub alpha: f64,
    pub r1: f64,
    pub r2: f64,
    pub phi: f64,
    pub eta: f64,
}

impl InterferometerConfig {
    pub fn new(alpha: f64, r1: f64, r2: f64, phi: f64, eta: f64) -> Result<Self> {
        let cfg = Self {
            alpha,
            r1,
            r2,
            phi,
            eta,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Balanced configuration (`r2 = r1`) with ideal detection.
    pub fn balanced(alpha: f64, r: f64, phi: f64) -> Result<Self> {
        Self::new(alpha, r, r, phi, 1.0)
    }

    /// Conventional scheme: no output squeezer.
    pub fn conventional(alpha: f64, r1: f64, phi: f64) -> Result<Self> {
        Self::new(alpha, r1, 0.0, phi, 1.0)
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    /// Mean photon number of the input state, α² + sinh²r₁. Photons added
    /// by the output squeezer are detection-side and do not count as input
    /// resources.
    pub fn n_bar(&self) -> f64 {
        self.alpha * self.alpha + self.r1.sinh().powi(2)
    }

    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |name, v: f64, max: f64| {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be finite and non-negative",
                });
            }
            if v > max {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "exceeds the double-precision overflow guard",
                });
            }
            Ok(())
        };
        finite_nonneg("alpha", self.alpha, 1e6)?;
        finite_nonneg("r1", self.r1, MAX_SQUEEZING)?;
        finite_nonneg("r2", self.r2, MAX_SQUEEZING)?;
        if !self.phi.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phi",
                value: self.phi,
                reason: "must be finite",
            });
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) || !self.eta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "eta",
                value: self.eta,
                reason: "detection efficiency must lie in (0, 1]",
            });
        }
        Ok(())
    }
}
