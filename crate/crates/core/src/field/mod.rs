//! Spectral reconstruction of the regular field part, the conserved energy,
//! pointwise field evaluation, and the regularized point-limit verification
//! harness.

pub mod filon;
pub mod pointval;
pub mod profile;

pub use filon::DotHistory;
pub use pointval::{Osc, SampledRadialProfile, TailTerm};
pub use profile::{assemble_psi_reg_hat, energy, psi_reg_hat_at, FieldError, RadialGrid, RegularPartProfile};
