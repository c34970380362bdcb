//! Regularized point values of radial spinor profiles.
//!
//! For a profile `Q(xi) = U(r) + (alpha.xi_hat) V(r)` the smoothed point
//! value at `|x| = rho` is
//!
//! `K^eps Q (x) = (1/2pi^2) int_0^inf r^2 w^{-2 eps} [ sinc(rho r) U(r)
//!                - i j1(rho r) (alpha.x_hat) V(r) ] dr`,
//!
//! with `j1` the spherical Bessel function (the vector part follows from the
//! angular integral `int xi_hat e^{-i xi.x} dOmega = -4 pi i j1(r rho) x_hat`).
//! The caller applies `alpha.x_hat` to the returned vector coefficient.
//!
//! The integrand decays too slowly for plain truncation, so the profile is
//! sampled once on a resolved core grid `[0, r_core]` (the expensive Filon
//! convolutions are reused across every `(rho, eps)` pair), and beyond the
//! core each supplied asymptotic tail term `coef * trig(t w) * w^{-k}` is
//! integrated by splitting the trigonometric products into exponentials
//! `e^{i(rho r +/- t w)}` and accelerating each half-period sum.

use crate::dirac::Spinor4;
use crate::quad::{exp_phase_tail, Accumulate, GaussLegendre, Phase, QuadError};
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
use num_traits::Float;

/// Time-oscillation factor carried by a tail term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Osc {
    None,
    Cos,
    Sin,
}

/// One term of a large-`r` profile expansion: `coef * trig(t w) * w^{-k}`
/// for the isotropic part, `coef * trig(t w) * r * w^{-k}` for the vector
/// part (gradient-type profiles scale with an extra `r`).
#[derive(Debug, Clone, Copy)]
pub struct TailTerm {
    pub coef: Spinor4,
    pub k: i32,
    pub osc: Osc,
}

/// A profile sampled on the core grid, with its asymptotic tail description.
/// Sampling is the expensive step; point values at different `(rho, eps)`
/// reuse the cached nodes.
#[derive(Debug, Clone)]
pub struct SampledRadialProfile {
    pub t_osc: f64,
    pub mass: f64,
    pub r_core: f64,
    nodes: Vec<(f64, f64)>,
    iso: Vec<Spinor4>,
    vec: Vec<Spinor4>,
    pub iso_tail: Vec<TailTerm>,
    pub vec_tail: Vec<TailTerm>,
}

impl SampledRadialProfile {
    /// Sample `f(r) -> (U(r), V(r))` on half-period panels over
    /// `[0, r_core]`.
    pub fn sample(
        t_osc: f64,
        mass: f64,
        r_core: f64,
        gl_order: usize,
        mut f: impl FnMut(f64) -> (Spinor4, Spinor4),
        iso_tail: Vec<TailTerm>,
        vec_tail: Vec<TailTerm>,
    ) -> Self {
        let gl = GaussLegendre::new(gl_order);
        let width = (PI / (t_osc + 2.0)).min(0.8);
        let mut nodes = Vec::new();
        let mut a = 0.0f64;
        while a < r_core {
            let b = (a + width).min(r_core);
            gl.extend_mapped(a, b, &mut nodes);
            a = b;
        }
        let mut iso = Vec::with_capacity(nodes.len());
        let mut vec = Vec::with_capacity(nodes.len());
        for &(r, _) in &nodes {
            let (u, v) = f(r);
            iso.push(u);
            vec.push(v);
        }
        SampledRadialProfile {
            t_osc,
            mass,
            r_core,
            nodes,
            iso,
            vec,
            iso_tail,
            vec_tail,
        }
    }

    /// Smoothed point value at radius `rho` with multiplier `w^{-2 eps}`.
    /// Returns the isotropic spinor and the coefficient of `alpha.x_hat`.
    pub fn point_value(&self, rho: f64, eps: f64) -> Result<(Spinor4, Spinor4), QuadError> {
        assert!(rho > 0.0, "point values at rho = 0 are limits, not samples");
        let m = self.mass;
        let mut iso_acc = Spinor4::ZERO;
        let mut vec_acc = Spinor4::ZERO;
        for (i, &(r, w)) in self.nodes.iter().enumerate() {
            let om2 = r * r + m * m;
            let damp = if eps == 0.0 { 1.0 } else { om2.powf(-eps) };
            let base = w * r * r * damp;
            iso_acc = iso_acc.add_scaled(base * sinc(rho * r), self.iso[i]);
            // -i j1 factor distributes onto the (complex) samples.
            let j = j1_spherical(rho * r);
            vec_acc = vec_acc + (self.vec[i] * Complex64::new(0.0, -base * j));
        }
        let tail = TailEvaluator {
            t: self.t_osc,
            mass: m,
            r0: self.r_core,
            rho,
            eps,
            gl: GaussLegendre::new(12),
        };
        for term in &self.iso_tail {
            iso_acc = iso_acc + (term.coef * tail.sinc_integral(term.k, term.osc)?);
        }
        for term in &self.vec_tail {
            vec_acc =
                vec_acc + (term.coef * (Complex64::new(0.0, -1.0) * tail.j1_integral(term.k, term.osc)?));
        }
        let scale = 1.0 / (2.0 * PI * PI);
        Ok((iso_acc * scale, vec_acc * scale))
    }
}

fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    }
}

/// Spherical Bessel `j1(z) = sin z / z^2 - cos z / z`, series below 0.5 to
/// avoid the `1/z` cancellation.
fn j1_spherical(z: f64) -> f64 {
    if z.abs() < 0.5 {
        let z2 = z * z;
        let z4 = z2 * z2;
        z * (1.0 / 3.0 - z2 / 30.0 + z4 / 840.0 - z4 * z2 / 45360.0 + z4 * z4 / 3991680.0)
    } else {
        z.sin() / (z * z) - z.cos() / z
    }
}

/// Accelerated tail integrals against the sinc / spherical-Bessel kernels.
struct TailEvaluator {
    t: f64,
    mass: f64,
    r0: f64,
    rho: f64,
    eps: f64,
    gl: GaussLegendre,
}

impl TailEvaluator {
    /// `E(a, b; p) = int_{r0}^inf r^p w^{-k-2eps} e^{i(a r + b w)} dr`.
    fn exp_component(&self, p: i32, k: i32, a: f64, b: f64) -> Result<Complex64, QuadError> {
        let m = self.mass;
        let kk = k as f64 + 2.0 * self.eps;
        let mut env = move |r: f64| r.powi(p) * (r * r + m * m).powf(-0.5 * kk);
        exp_phase_tail(
            &mut env,
            Phase {
                lin: a,
                omega_coef: b,
                mass: m,
            },
            self.r0,
            &self.gl,
            220,
        )
    }

    /// `int_{r0}^inf sinc(rho r) trig(t w) w^{-k-2eps} r^2 dr`.
    fn sinc_integral(&self, k: i32, osc: Osc) -> Result<f64, QuadError> {
        let (rho, t) = (self.rho, self.t);
        // (1/rho) int r w^{-k'} sin(rho r) trig(t w) dr
        let v = match osc {
            Osc::None => self.exp_component(1, k, rho, 0.0)?.im,
            Osc::Cos => {
                0.5 * (self.exp_component(1, k, rho, t)?.im
                    + self.exp_component(1, k, rho, -t)?.im)
            }
            Osc::Sin => {
                0.5 * (self.exp_component(1, k, rho, -t)?.re
                    - self.exp_component(1, k, rho, t)?.re)
            }
        };
        Ok(v / rho)
    }

    /// `int_{r0}^inf j1(rho r) trig(t w) w^{-k-2eps} r^3 dr` (the vector-part
    /// tails carry one extra power of `r`).
    fn j1_integral(&self, k: i32, osc: Osc) -> Result<f64, QuadError> {
        let (rho, t) = (self.rho, self.t);
        // j1(z) = sin z / z^2 - cos z / z with z = rho r.
        let sin_part = match osc {
            Osc::None => self.exp_component(1, k, rho, 0.0)?.im,
            Osc::Cos => {
                0.5 * (self.exp_component(1, k, rho, t)?.im
                    + self.exp_component(1, k, rho, -t)?.im)
            }
            Osc::Sin => {
                0.5 * (self.exp_component(1, k, rho, -t)?.re
                    - self.exp_component(1, k, rho, t)?.re)
            }
        };
        let cos_part = match osc {
            Osc::None => self.exp_component(2, k, rho, 0.0)?.re,
            Osc::Cos => {
                0.5 * (self.exp_component(2, k, rho, t)?.re
                    + self.exp_component(2, k, rho, -t)?.re)
            }
            Osc::Sin => {
                0.5 * (self.exp_component(2, k, rho, t)?.im
                    - self.exp_component(2, k, rho, -t)?.im)
            }
        };
        Ok(sin_part / (rho * rho) - cos_part / rho)
    }
}
