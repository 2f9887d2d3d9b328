//! Heralded photon subtraction, addition and catalysis on two-mode squeezed
//! vacuum, and what the resulting states buy in a parity-detection
//! Mach-Zehnder interferometer.
//!
//! * [`genfunc`]: derivative extraction from exponentials of quadratic forms.
//! * [`model`]: operation taxonomy, derived parameters and the quadratic forms.
//! * [`analytics`]: heralding probability, Wigner function, moments, QFI,
//!   parity signal and phase sensitivity.
//! * [`fock`]: brute-force truncated Fock-space simulator used as an oracle.
//! * [`sweep`]: parameter grids, figure presets and table output.

pub mod analytics;
pub mod error;
pub mod fock;
pub mod genfunc;
pub mod model;
pub mod sweep;

pub use analytics::{MomentIndex, NgTmsv, PhaseSpacePoint, SensitivityReport};
pub use error::{Error, Result};
pub use model::{ModelParams, NgOperation, OperationKind};
