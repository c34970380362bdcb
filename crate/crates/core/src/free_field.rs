//! Radial initial data and the free-field point trace.
//!
//! Initial data is `f + zeta_0 g` with `f` given by a radial scalar Fourier
//! profile times a constant spinor. For such data the point trace
//! `lambda(t) = psi_f(0, t)` reduces to one-dimensional radial quadrature:
//! the `alpha.xi` part of the propagator integrates to zero by odd angular
//! symmetry, leaving
//!
//! `lambda(t) = (1/2pi^2) int_0^inf [cos(t w) I - i m sin(t w)/w beta]
//!              phi(r) r^2 dr . c`,   `w = sqrt(r^2 + m^2)`.
//!
//! The reduction is validated against a full 3D tensor-grid quadrature in the
//! tests.

use crate::dirac::{c, DiracRep, Spinor4};
use crate::quad::{cubic_interp, GaussLegendre};
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;

#[derive(Debug, Clone, PartialEq)]
pub enum FreeFieldError {
    /// The analytic tail bound could not be pushed below tolerance within
    /// the truncation cap.
    QuadratureNonConvergence { tail_bound: f64, tol: f64 },
    /// dt or t_end out of range.
    BadGrid,
}

impl core::fmt::Display for FreeFieldError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FreeFieldError::QuadratureNonConvergence { tail_bound, tol } => write!(
                f,
                "oscillatory tail bound {tail_bound:.3e} exceeds tolerance {tol:.3e}"
            ),
            FreeFieldError::BadGrid => write!(f, "table grid parameters must be positive"),
        }
    }
}

/// Scalar radial Fourier profile `phi(|xi|)` of the regular initial datum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialProfile {
    /// `A exp(-sigma^2 r^2 / 2)`.
    Gaussian { amplitude: f64, sigma: f64 },
}

impl RadialProfile {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            RadialProfile::Gaussian { amplitude, sigma } => {
                amplitude * (-0.5 * sigma * sigma * r * r).exp()
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            RadialProfile::Gaussian { amplitude, .. } => amplitude == 0.0,
        }
    }

    /// Radius beyond which `|A| int_R^inf r^2 |phi| dr` falls below `tol`.
    fn truncation_radius(&self, tol: f64) -> Result<f64, FreeFieldError> {
        match *self {
            RadialProfile::Gaussian { amplitude, sigma } => {
                if amplitude == 0.0 {
                    return Ok(1.0);
                }
                let s2 = sigma * sigma;
                let mut r = 2.0 / sigma;
                loop {
                    // int_R^inf r^2 e^{-s2 r^2/2} dr <= e^{-s2 R^2/2} (R/s2 + 1/(s2^2 R))
                    let bound = amplitude.abs()
                        * (-0.5 * s2 * r * r).exp()
                        * (r / s2 + 1.0 / (s2 * s2 * r));
                    if bound < tol {
                        return Ok(r);
                    }
                    if r > 500.0 {
                        return Err(FreeFieldError::QuadratureNonConvergence {
                            tail_bound: bound,
                            tol,
                        });
                    }
                    r += 1.0 / sigma;
                }
            }
        }
    }
}

/// `psi_0 = f + zeta_0 g` with radial `f`: Fourier profile, spinor direction,
/// point charge and mass. The `beta`-rotated direction is cached because the
/// trace formula uses it at every quadrature node.
#[derive(Debug, Clone)]
pub struct RadialInitialData {
    pub profile: RadialProfile,
    pub direction: Spinor4,
    pub zeta0: Spinor4,
    pub mass: f64,
    beta_direction: Spinor4,
}

impl RadialInitialData {
    pub fn new(profile: RadialProfile, direction: Spinor4, zeta0: Spinor4, mass: f64) -> Self {
        let rep = DiracRep::standard(mass);
        let beta_direction = rep.beta.mul_vec(&direction);
        RadialInitialData {
            profile,
            direction,
            zeta0,
            mass,
            beta_direction,
        }
    }

    /// `int_0^inf (r^2 + m^2)^p phi(r)^2 r^2 dr`; `p = 1` is the free-field
    /// energy density weight, `p = 2` the H^2 membership weight.
    pub fn weighted_profile_moment(&self, p: i32) -> f64 {
        let gl = GaussLegendre::new(24);
        let r_max = self.profile.truncation_radius(1e-16).unwrap_or(1.0);
        let m2 = self.mass * self.mass;
        let mut acc = 0.0;
        let mut a = 0.0f64;
        while a < r_max {
            let b = (a + 1.0).min(r_max);
            acc += gl.integrate(a, b, |r| {
                let phi = self.profile.eval(r);
                (r * r + m2).powi(p) * phi * phi * r * r
            });
            a = b;
        }
        acc
    }

    /// `f(0) = (1/2pi^2) int phi r^2 dr . c`.
    pub fn f_at_origin(&self) -> Spinor4 {
        let gl = GaussLegendre::new(24);
        let r_max = self.profile.truncation_radius(1e-16).unwrap_or(1.0);
        let mut acc = 0.0;
        let mut a = 0.0f64;
        while a < r_max {
            let b = (a + 1.0).min(r_max);
            acc += gl.integrate(a, b, |r| self.profile.eval(r) * r * r);
            a = b;
        }
        self.direction * (acc / (2.0 * PI * PI))
    }

    /// Upper bound for `|lambda(t)|`: `(1/2pi^2) int |phi| r^2 dr |c|`
    /// (both `|cos|` and `|m sin / w|` are bounded by one).
    pub fn trace_bound(&self) -> f64 {
        let gl = GaussLegendre::new(24);
        let r_max = self.profile.truncation_radius(1e-16).unwrap_or(1.0);
        let mut acc = 0.0;
        let mut a = 0.0f64;
        while a < r_max {
            let b = (a + 1.0).min(r_max);
            acc += gl.integrate(a, b, |r| self.profile.eval(r).abs() * r * r);
            a = b;
        }
        acc / (2.0 * PI * PI) * self.direction.norm()
    }
}

/// Free-field point trace `lambda(t) = psi_f(0, t)` by radial quadrature.
/// Half-period panels in the phase `t w(r)` keep the Gauss rule resolved for
/// any horizon; the truncation radius comes from the profile's tail bound.
pub fn lambda_of_t(data: &RadialInitialData, t: f64) -> Result<Spinor4, FreeFieldError> {
    if data.profile.is_zero() {
        return Ok(Spinor4::ZERO);
    }
    let r_max = data.profile.truncation_radius(1e-15)?;
    let gl = GaussLegendre::new(16);
    // Phase rate d(t w)/dr <= |t|; half-period panels capped at O(1).
    let width = (PI / (2.0 * (t.abs() + 1.0))).min(0.5);
    let m = data.mass;
    let mut i_cos = 0.0;
    let mut i_sin = 0.0;
    let mut a = 0.0f64;
    while a < r_max {
        let b = (a + width).min(r_max);
        i_cos += gl.integrate(a, b, |r| {
            let w = (r * r + m * m).sqrt();
            (t * w).cos() * data.profile.eval(r) * r * r
        });
        i_sin += gl.integrate(a, b, |r| {
            let w = (r * r + m * m).sqrt();
            (t * w).sin() / w * data.profile.eval(r) * r * r
        });
        a = b;
    }
    let scale = 1.0 / (2.0 * PI * PI);
    Ok(data.direction * (i_cos * scale) + data.beta_direction * c(0.0, -m * i_sin * scale))
}

/// Precomputed trace on a uniform grid with cubic off-grid interpolation.
#[derive(Debug, Clone)]
pub struct LambdaTable {
    pub dt: f64,
    values: Vec<Spinor4>,
}

impl LambdaTable {
    pub fn node(&self, i: usize) -> Spinor4 {
        self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.dt
    }

    pub fn eval(&self, t: f64) -> Spinor4 {
        cubic_interp(&self.values, self.dt, t)
    }
}

/// Tabulate `lambda` on `[0, t_end]` with spacing `dt` (plus a small guard
/// band so cubic interpolation stays centered near the end).
pub fn build_lambda_table(
    data: &RadialInitialData,
    t_end: f64,
    dt: f64,
) -> Result<LambdaTable, FreeFieldError> {
    if !(dt > 0.0 && t_end > 0.0) {
        return Err(FreeFieldError::BadGrid);
    }
    let n = (t_end / dt).ceil() as usize + 3;
    let mut values = Vec::with_capacity(n + 1);
    for i in 0..=n {
        values.push(lambda_of_t(data, i as f64 * dt)?);
    }
    Ok(LambdaTable { dt, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::DiracRep;
    use crate::quad::Accumulate;

    fn default_data() -> RadialInitialData {
        RadialInitialData::new(
            RadialProfile::Gaussian {
                amplitude: 1.0,
                sigma: 1.0,
            },
            Spinor4::basis(0),
            Spinor4::ZERO,
            1.0,
        )
    }

    #[test]
    fn trace_at_zero_is_f_origin() {
        let data = default_data();
        let lam0 = lambda_of_t(&data, 0.0).unwrap();
        let f0 = data.f_at_origin();
        assert!(lam0.max_component_dist(&f0) < 1e-14);
        // Frozen: (1/2pi^2) int r^2 e^{-r^2/2} dr = 0.06349363593424097.
        assert!((lam0.0[0].re - 0.063_493_635_934_240_97).abs() < 1e-13);
        assert_eq!(lam0.0[0].im, 0.0);
    }

    #[test]
    fn trace_at_one_matches_frozen_reference() {
        // Frozen from 1D quadrature (mpmath; the 3D oracle below agrees):
        // lambda_1(1) = -0.0173487680131237 - 0.0310222823286538 i.
        let data = default_data();
        let lam = lambda_of_t(&data, 1.0).unwrap();
        assert!((lam.0[0].re + 0.017_348_768_013_123_7).abs() < 1e-12);
        assert!((lam.0[0].im + 0.031_022_282_328_653_8).abs() < 1e-12);
        for j in 1..4 {
            assert_eq!(lam.0[j], c(0.0, 0.0));
        }
    }

    #[test]
    fn trace_matches_3d_tensor_grid_oracle() {
        // Full 3D quadrature of (2pi)^{-3} int exp(-i t D(xi)) phi(|xi|) c d^3xi
        // including the alpha.xi term, on a Gauss grid per axis. Confirms the
        // alpha part integrates to zero and validates the radial reduction.
        let data = default_data();
        let rep = DiracRep::standard(1.0);
        let t = 1.0;
        let gl = GaussLegendre::new(40);
        let l = 8.0;
        let mut nodes = Vec::new();
        gl.extend_mapped(-l, l, &mut nodes);
        let mut acc = Spinor4::ZERO;
        for &(x, wx) in &nodes {
            for &(y, wy) in &nodes {
                let mut inner = Spinor4::ZERO;
                for &(z, wz) in &nodes {
                    let r = (x * x + y * y + z * z).sqrt();
                    let phi = data.profile.eval(r);
                    if phi.abs() < 1e-300 {
                        continue;
                    }
                    let v = rep.apply_propagator([x, y, z], t, &data.direction);
                    inner = inner.add_scaled(wz * phi, v);
                }
                acc = acc.add_scaled(wx * wy, inner);
            }
        }
        let oracle = acc * (1.0 / (8.0 * PI * PI * PI));
        let got = lambda_of_t(&data, t).unwrap();
        assert!(
            got.max_component_dist(&oracle) < 1e-8,
            "radial {:?} vs 3d {:?}",
            got,
            oracle
        );
    }

    #[test]
    fn trace_is_bounded_and_continuous() {
        let data = default_data();
        let bound = data.trace_bound();
        // |lambda'| <= (1/2pi^2) int w |phi| r^2 dr |c|.
        let slope_bound = {
            let gl = GaussLegendre::new(24);
            let mut acc = 0.0;
            let mut a = 0.0f64;
            while a < 12.0 {
                let b = (a + 1.0).min(12.0);
                acc += gl.integrate(a, b, |r: f64| {
                    (r * r + 1.0).sqrt() * data.profile.eval(r) * r * r
                });
                a = b;
            }
            acc / (2.0 * PI * PI)
        };
        let mut prev = lambda_of_t(&data, 0.0).unwrap();
        for i in 1..200 {
            let t = i as f64 * 0.05;
            let cur = lambda_of_t(&data, t).unwrap();
            assert!(cur.norm() <= bound + 1e-12, "t = {t}");
            assert!(
                (cur - prev).norm() <= slope_bound * 0.05 * 1.01 + 1e-12,
                "t = {t}"
            );
            prev = cur;
        }
    }

    #[test]
    fn trace_time_reversal_conjugates() {
        // Real profile, c = e1: lambda(-t) = conj(lambda(t)) componentwise.
        let data = default_data();
        for &t in &[0.3, 1.0, 2.7] {
            let fwd = lambda_of_t(&data, t).unwrap();
            let bwd = lambda_of_t(&data, -t).unwrap();
            for j in 0..4 {
                assert!((bwd.0[j] - fwd.0[j].conj()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_profile_gives_zero_table() {
        let data = RadialInitialData::new(
            RadialProfile::Gaussian {
                amplitude: 0.0,
                sigma: 1.0,
            },
            Spinor4::basis(0),
            Spinor4::ZERO,
            1.0,
        );
        let table = build_lambda_table(&data, 2.0, 0.01).unwrap();
        for i in 0..table.len() {
            assert_eq!(table.node(i), Spinor4::ZERO);
        }
        assert_eq!(table.eval(0.777), Spinor4::ZERO);
    }

    #[test]
    fn table_nodes_exact_and_offgrid_accurate() {
        let data = default_data();
        let dt = 0.02;
        let table = build_lambda_table(&data, 1.0, dt).unwrap();
        // Grid nodes equal direct evaluation bit-exactly by construction.
        for i in (0..table.len()).step_by(7) {
            let direct = lambda_of_t(&data, i as f64 * dt).unwrap();
            assert_eq!(table.node(i), direct);
        }
        // Off-grid points reproduce direct quadrature within 1e-8.
        for &t in &[0.01, 0.31, 0.55, 0.99] {
            let direct = lambda_of_t(&data, t).unwrap();
            assert!(
                table.eval(t).max_component_dist(&direct) < 1e-8,
                "t = {t}: {:?} vs {:?}",
                table.eval(t),
                direct
            );
        }
    }

    #[test]
    fn h2_weighted_moment_is_finite() {
        let data = default_data();
        let m2 = data.weighted_profile_moment(2);
        assert!(m2.is_finite() && m2 > 0.0);
        // p = 1 moment appears in H(0): frozen (5/8) sqrt(pi).
        let m1 = data.weighted_profile_moment(1);
        assert!((m1 - 0.625 * PI.sqrt()).abs() < 1e-12);
    }
}
