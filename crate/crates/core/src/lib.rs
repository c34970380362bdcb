//! Dynamics of a 3D Dirac field coupled to a nonlinear oscillator at a single
//! point, reduced to a Volterra integro-differential equation for the point
//! amplitude.
//!
//! The crate is split along the stages of the reduction:
//!
//! * [`dirac`] — fixed-size 4-spinor arithmetic and the Dirac matrices,
//!   with symbol-level operations in Fourier space.
//! * [`specfun`] — the Bessel-type special functions that build the memory
//!   kernels: `J0`, `J1`, the cumulative integral of `J1(u)/u`, its tail,
//!   and `I0 - L0`.
//! * [`kernels`] — the closed-form scalar kernels of the amplitude equation:
//!   `mu(t)`, `J1(ms)/s`, the Bessel tail kernel, the coefficient `a(t)`,
//!   and the retarded kernel `gamma`.
//! * [`nonlinearity`] — separable polynomial oscillator potentials, their
//!   Wirtinger gradients, and the energy-radius Lipschitz cutoff.
//! * [`free_field`] — radial initial data and the free-field point trace
//!   `lambda(t)` by oscillatory radial quadrature.
//! * [`solver`] — product-integration time stepping and Picard iteration
//!   for the amplitude equation.
//! * [`field`] — spectral reconstruction of the regular field part, the
//!   conserved energy, and the regularized point-limit verification harness.
//!
//! The crate is `no_std` (with `alloc`); all floating-point math goes through
//! `libm` so results do not depend on the host libm.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dirac;
pub mod field;
pub mod free_field;
pub mod kernels;
pub mod nonlinearity;
pub mod quad;
pub mod solver;
pub mod specfun;

pub use dirac::{DiracRep, Spinor4};
pub use kernels::KernelSet;
