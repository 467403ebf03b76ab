//! Simulation and optimization engine for the dual-squeezing Mach-Zehnder
//! interferometer (DS-MZI): a standard MZI with a squeezer on input mode b
//! and a second squeezer on one output mode before photon-number-difference
//! detection.
//!
//! Three independent computation paths are provided for the detected
//! moments ⟨N₋⟩, ⟨N₊⟩, Var(N₋):
//!
//! * [`closed_form`] — analytic formulas in the interferometer parameters,
//! * [`gaussian`] — phase-space propagation of the Gaussian state through
//!   the symplectic element chain, with photon moments recovered from the
//!   covariance matrix and mean vector,
//! * [`fock`] — brute-force evolution in a truncated two-mode Fock basis,
//!   used as the verification oracle at small parameters.
//!
//! On top of the moments, [`sensitivity`] evaluates the error-propagation
//! phase sensitivity (ideal and with detection loss) against the quantum
//! Cramér-Rao bound, and [`optimize`] locates optimal working points and
//! squeezing splits and generates the parameter sweeps behind the standard
//! figures of merit.

pub mod closed_form;
pub mod config;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod numfmt;
pub mod optimize;
pub mod presets;
pub mod sensitivity;
pub mod validate;

pub use closed_form::{MomentPath, MomentSet};
pub use config::InterferometerConfig;
pub use error::{Error, Result};
pub use sensitivity::SensitivityReport;
