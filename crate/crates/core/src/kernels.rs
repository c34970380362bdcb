//! Closed-form scalar kernels of the amplitude equation and the field
//! formulas: the renormalized point value `mu(t)` of `g - gamma`, the memory
//! kernel `K1(s) = J1(ms)/s`, the Bessel tail kernel `T_m(s)`, the
//! initial-charge coefficient `a(t) = m t T_m(t) - J0(mt)`, the retarded
//! kernel `gamma(|x|, t)` and the Green function `g(|x|)`.
//!
//! The kernels enter O(N^2) convolution sums, so a `KernelSet` tabulates them
//! once on a uniform grid (the cumulative integral `G` is built incrementally
//! cell by cell) and interpolates with a sliding cubic stencil. Direct
//! evaluations stay available for tests and for arguments beyond the grid.

use crate::quad::{cubic_interp, integrate_adaptive, QuadError};
use crate::specfun::{bessel_j0, bessel_j1_over_x, SpecFun, SpecFunConfig};
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;

#[derive(Debug, Clone, PartialEq)]
pub enum KernelError {
    /// Pointwise evaluation at the singular point rho = 0 was requested.
    SingularPoint,
    Quad(QuadError),
}

impl core::fmt::Display for KernelError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            KernelError::SingularPoint => {
                write!(f, "kernel is singular at rho = 0; take limits instead")
            }
            KernelError::Quad(e) => write!(f, "kernel quadrature failed: {e}"),
        }
    }
}

/// Tabulated kernels sharing one mass and one uniform grid of spacing `h`
/// over `[0, t_max]`. Immutable after construction.
#[derive(Debug, Clone)]
pub struct KernelSet {
    pub mass: f64,
    pub h: f64,
    /// `G(m s_i)` accumulated cell by cell.
    g_cum: Vec<f64>,
    mu_vals: Vec<f64>,
    a_vals: Vec<f64>,
    k1_vals: Vec<f64>,
    tail_vals: Vec<f64>,
    specfun: SpecFun,
}

impl KernelSet {
    pub fn new(mass: f64, h: f64, t_max: f64, config: SpecFunConfig) -> Self {
        assert!(mass > 0.0 && h > 0.0 && t_max > 0.0);
        let specfun = SpecFun::new(config);
        let n = (t_max / h).ceil() as usize + 2;
        let mut g_cum = Vec::with_capacity(n + 1);
        g_cum.push(0.0);
        for i in 1..=n {
            let a = mass * (i - 1) as f64 * h;
            let b = mass * i as f64 * h;
            let inc = specfun.integrate_j1_over_u(a, b);
            let prev = *g_cum.last().unwrap();
            g_cum.push(prev + inc);
        }
        let mut mu_vals = Vec::with_capacity(n + 1);
        let mut a_vals = Vec::with_capacity(n + 1);
        let mut k1_vals = Vec::with_capacity(n + 1);
        let mut tail_vals = Vec::with_capacity(n + 1);
        for (i, &g) in g_cum.iter().enumerate() {
            let s = i as f64 * h;
            let tail = 1.0 - g;
            mu_vals.push(mass / (4.0 * PI) * (g - 1.0));
            a_vals.push(mass * s * tail - bessel_j0(mass * s));
            k1_vals.push(mass * bessel_j1_over_x(mass * s));
            tail_vals.push(tail);
        }
        KernelSet {
            mass,
            h,
            g_cum,
            mu_vals,
            a_vals,
            k1_vals,
            tail_vals,
            specfun,
        }
    }

    pub fn len(&self) -> usize {
        self.g_cum.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t_max(&self) -> f64 {
        (self.g_cum.len() - 1) as f64 * self.h
    }

    pub fn specfun(&self) -> &SpecFun {
        &self.specfun
    }

    // Node accessors: exact tabulated values for the product-quadrature sums.
    pub fn k1_node(&self, i: usize) -> f64 {
        self.k1_vals[i]
    }
    pub fn k1_slice(&self) -> &[f64] {
        &self.k1_vals
    }
    pub fn tail_slice(&self) -> &[f64] {
        &self.tail_vals
    }
    pub fn tail_node(&self, i: usize) -> f64 {
        self.tail_vals[i]
    }
    pub fn mu_node(&self, i: usize) -> f64 {
        self.mu_vals[i]
    }
    pub fn a_node(&self, i: usize) -> f64 {
        self.a_vals[i]
    }

    /// `mu(t) = (m/4pi) (G(mt) - 1)`; continuous, `mu(0) = -m/4pi`,
    /// `mu(t) -> 0` as `t -> infty`.
    pub fn mu(&self, t: f64) -> f64 {
        if t <= self.t_max() {
            cubic_interp(&self.mu_vals, self.h, t)
        } else {
            self.mu_direct(t)
        }
    }

    pub fn mu_direct(&self, t: f64) -> f64 {
        self.mass / (4.0 * PI) * (self.specfun.j1_over_u_cumulative(self.mass * t) - 1.0)
    }

    /// Memory kernel `K1(s) = J1(ms)/s`, continuously `m/2` at `s = 0`.
    pub fn memory_kernel_k1(&self, s: f64) -> f64 {
        if s <= self.t_max() {
            cubic_interp(&self.k1_vals, self.h, s)
        } else {
            self.k1_direct(s)
        }
    }

    pub fn k1_direct(&self, s: f64) -> f64 {
        self.mass * bessel_j1_over_x(self.mass * s)
    }

    /// Tail kernel `T_m(s) = int_{ms}^infty J1(u)/u du = 1 - G(ms)`.
    pub fn tail_kernel(&self, s: f64) -> f64 {
        if s <= self.t_max() {
            cubic_interp(&self.tail_vals, self.h, s)
        } else {
            self.tail_direct(s)
        }
    }

    pub fn tail_direct(&self, s: f64) -> f64 {
        self.specfun.j1_over_u_tail(self.mass * s)
    }

    /// `a(t) = m t T_m(t) - J0(mt)`; `a(0) = -1`, decays as `t -> infty`.
    pub fn a_coef(&self, t: f64) -> f64 {
        if t <= self.t_max() {
            cubic_interp(&self.a_vals, self.h, t)
        } else {
            self.a_direct(t)
        }
    }

    pub fn a_direct(&self, t: f64) -> f64 {
        self.mass * t * self.tail_direct(t) - bessel_j0(self.mass * t)
    }

    /// Green function of `-Laplace + m^2`: `g(rho) = e^{-m rho}/(4 pi rho)`.
    pub fn g_green(&self, rho: f64) -> Result<f64, KernelError> {
        if rho <= 0.0 {
            return Err(KernelError::SingularPoint);
        }
        Ok((-self.mass * rho).exp() / (4.0 * PI * rho))
    }

    /// Retarded kernel
    /// `gamma(rho, t) = theta(t - rho)/(4 pi rho)
    ///    - (m/4pi) int_0^t theta(s - rho) J1(m sqrt(s^2-rho^2))/sqrt(s^2-rho^2) ds`.
    /// The endpoint singularity is removed exactly by `u = sqrt(s^2 - rho^2)`:
    /// the integral becomes `int_0^U J1(mu)/sqrt(u^2+rho^2) du` with
    /// `U = sqrt(t^2 - rho^2)`.
    pub fn gamma_kernel(&self, rho: f64, t: f64) -> Result<f64, KernelError> {
        if rho <= 0.0 {
            return Err(KernelError::SingularPoint);
        }
        if t < rho {
            return Ok(0.0);
        }
        let u_max = ((t - rho) * (t + rho)).sqrt();
        let m = self.mass;
        let mut f = |u: f64| bessel_j1_over_x(m * u) * m * u / (u * u + rho * rho).sqrt();
        let integral =
            integrate_adaptive(&mut f, 0.0, u_max, 1e-13).map_err(KernelError::Quad)?;
        Ok(1.0 / (4.0 * PI * rho) - m / (4.0 * PI) * integral)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::aitken_limit;
    use std::vec::Vec;

    fn kernels() -> KernelSet {
        KernelSet::new(1.0, 2e-3, 12.0, SpecFunConfig::default())
    }

    #[test]
    fn grid_endpoints_and_limits() {
        let ks = kernels();
        assert!((ks.mu_node(0) + 1.0 / (4.0 * PI)).abs() < 1e-12);
        assert!((ks.k1_node(0) - 0.5).abs() < 1e-15);
        assert!((ks.a_node(0) + 1.0).abs() < 1e-12);
        assert_eq!(ks.tail_node(0), 1.0);
        // mu(t) -> 0: at mt = 200 within 5e-3/(4 pi); extrapolated with the
        // asymptotic tail within 1e-7.
        let ks_long = KernelSet::new(1.0, 0.05, 201.0, SpecFunConfig::default());
        assert!(ks_long.mu(200.0).abs() < 5e-3 / (4.0 * PI));
        let extrap = ks_long.mu(200.0) + 1.0 / (4.0 * PI) * crate::specfun::tail_asymptotic(200.0);
        assert!(extrap.abs() < 1e-7);
    }

    #[test]
    fn frozen_reference_values() {
        let ks = kernels();
        // mu(1), m=1: (G(1) - 1)/(4 pi); G(1) frozen from the quadrature
        // oracle in specfun.
        let want_mu = -0.041_405_763_972_982_04;
        assert!((ks.mu(1.0) - want_mu).abs() < 1e-12);
        // K1(1) = J1(1).
        assert!((ks.memory_kernel_k1(1.0) - 0.440_050_585_744_933_5).abs() < 1e-12);
        // a(1) = T(1) - J0(1).
        let want_a = -0.244_877_510_902_793_28;
        assert!((ks.a_coef(1.0) - want_a).abs() < 1e-11);
        // K1(s) * s = J1(ms).
        for &s in &[0.3, 1.7, 6.4] {
            assert!(
                (ks.k1_direct(s) * s - crate::specfun::bessel_j1(s)).abs() < 1e-15,
                "s = {s}"
            );
        }
    }

    #[test]
    fn a_coef_decays() {
        let ks = KernelSet::new(1.0, 0.05, 101.0, SpecFunConfig::default());
        // At mt = 100 both pieces are small: J0 ~ sqrt(2/(pi t)), and
        // mt*T(mt) ~ O(t^{-1/2}) as well; the oracle value comes from the
        // asymptotic-tail route.
        let direct = ks.a_direct(100.0);
        let oracle =
            100.0 * crate::specfun::tail_asymptotic(100.0) - crate::specfun::bessel_j0(100.0);
        assert!((direct - oracle).abs() < 1e-10);
        assert!(direct.abs() < 0.1);
    }

    #[test]
    fn interpolants_match_direct_evaluation() {
        let ks = kernels();
        // Off-grid points, all four tables.
        let mut worst = 0.0f64;
        for i in 0..300 {
            let t = 0.0123 + i as f64 * 0.0371;
            worst = worst.max((ks.mu(t) - ks.mu_direct(t)).abs());
            worst = worst.max((ks.memory_kernel_k1(t) - ks.k1_direct(t)).abs());
            worst = worst.max((ks.tail_kernel(t) - ks.tail_direct(t)).abs());
            worst = worst.max((ks.a_coef(t) - ks.a_direct(t)).abs());
        }
        assert!(worst < 1e-9, "worst interpolation error {worst}");
    }

    #[test]
    fn mu_derivative_matches_kernel() {
        // d mu/dt = (m/4pi) J1(mt)/t, checked by central differences.
        let ks = kernels();
        let h = 1e-5;
        let mut worst = 0.0f64;
        for i in 0..100 {
            let t = 0.1 + i as f64 * 0.099;
            let fd = (ks.mu_direct(t + h) - ks.mu_direct(t - h)) / (2.0 * h);
            let want = 1.0 / (4.0 * PI) * ks.k1_direct(t);
            worst = worst.max((fd - want).abs());
        }
        assert!(worst < 1e-7, "worst {worst}");
    }

    #[test]
    fn green_function_values() {
        let ks = kernels();
        assert!(ks.g_green(0.0).is_err());
        assert!((ks.g_green(1.0).unwrap() - (-1.0f64).exp() / (4.0 * PI)).abs() < 1e-16);
        // massless closed form is exercised through m -> small rho: rho*g -> 1/4pi.
        for &rho in &[1e-5, 1e-7] {
            assert!((rho * ks.g_green(rho).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-5);
        }
    }

    #[test]
    fn gamma_kernel_support_and_reference() {
        let ks = kernels();
        assert!(ks.gamma_kernel(0.0, 1.0).is_err());
        // Outside the light cone.
        assert_eq!(ks.gamma_kernel(0.5, 0.3).unwrap(), 0.0);
        // Just inside: the integral term vanishes continuously.
        let rho = 0.5;
        let just_inside = ks.gamma_kernel(rho, rho + 1e-8).unwrap();
        assert!((just_inside - 1.0 / (4.0 * PI * rho)).abs() < 1e-8);
        // Frozen reference at rho = 0.5, t = 2 (cosh-substitution oracle,
        // cross-checked with mpmath): 0.10964810359370865.
        let got = ks.gamma_kernel(0.5, 2.0).unwrap();
        assert!((got - 0.109_648_103_593_708_65).abs() < 1e-11, "got {got}");
    }

    #[test]
    fn g_minus_gamma_approaches_mu() {
        // lim_{rho->0} (g(rho) - gamma(rho, t)) = mu(t), with Richardson
        // extrapolation over rho = 1e-2, 1e-3, 1e-4.
        let ks = kernels();
        for &t in &[0.5, 1.0, 2.0] {
            let seq: Vec<f64> = [1e-2, 1e-3, 1e-4]
                .iter()
                .map(|&rho| ks.g_green(rho).unwrap() - ks.gamma_kernel(rho, t).unwrap())
                .collect();
            let (lim, _) = aitken_limit(&seq);
            assert!(
                (lim - ks.mu_direct(t)).abs() < 1e-5,
                "t = {t}: {} vs {}",
                lim,
                ks.mu_direct(t)
            );
        }
    }
}
