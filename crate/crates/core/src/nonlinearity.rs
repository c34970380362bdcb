//! The oscillator potential `U`, its Wirtinger gradient `F`, the coercivity
//! constants `(a, b)`, and the Lipschitz cutoff construction.
//!
//! Potentials are component-separable polynomials in `|zeta_j|^2`,
//! `U(zeta) = sum_j sum_k c_{j,k} |zeta_j|^{2k}`, which makes the force
//! `F_j = d U / d conj(zeta_j) = u_j'(|zeta_j|^2) zeta_j` closed-form and the
//! coercivity check finite. Components with no configured terms are inert
//! (`u_j = 0`, `F_j = 0`); the coercivity bound `U >= b |zeta|^2 - a` is
//! certified on the active components only, which is the subspace the
//! dynamics can reach for such data.
//!
//! The cutoff keeps `U` exact for `|zeta_j| <= Lambda`, bridges with a C^2
//! quintic Hermite segment on `[Lambda, Lambda + width]`, and continues with
//! the quadratic `b r^2 + const` beyond, so the modified force grows linearly
//! and is globally Lipschitz.

use crate::dirac::Spinor4;
use alloc::vec::Vec;
use num_traits::Float;

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialError {
    /// A component's highest-order coefficient is not positive.
    LeadingCoefficient { component: usize },
    /// The configured polynomial dips below `b |zeta|^2 - a` on the grid.
    CoercivityViolated { at_radius: f64 },
    /// `H0 + a < 0`: not an energy of admissible data.
    InvalidEnergy { h0: f64, a: f64 },
    /// The blended potential dips below the coercive parabola; widen the
    /// bridge.
    ConstructionFailure { component: usize, at_radius: f64 },
    /// A term with power k < 1 was supplied.
    InvalidPower { component: usize, power: usize },
}

impl core::fmt::Display for PotentialError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PotentialError::LeadingCoefficient { component } => write!(
                f,
                "leading coefficient of component {component} must be positive"
            ),
            PotentialError::CoercivityViolated { at_radius } => write!(
                f,
                "potential dips below b|zeta|^2 - a near |zeta_j| = {at_radius:.3}"
            ),
            PotentialError::InvalidEnergy { h0, a } => {
                write!(f, "H0 + a = {:.3e} < 0 is not an admissible energy", h0 + a)
            }
            PotentialError::ConstructionFailure {
                component,
                at_radius,
            } => write!(
                f,
                "cutoff bridge of component {component} dips below the coercive parabola near r = {at_radius:.3}; widen blend_width"
            ),
            PotentialError::InvalidPower { component, power } => {
                write!(f, "component {component}: power {power} < 1 not allowed")
            }
        }
    }
}

/// Component-separable polynomial potential with coercivity constants.
/// `coeffs[j][k-1]` multiplies `|zeta_j|^{2k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    pub coeffs: [Vec<f64>; 4],
    pub a: f64,
    pub b: f64,
}

impl PotentialSpec {
    /// Build from `(component, power, coefficient)` triples (1-based
    /// component index and power, matching the run-config format) plus the
    /// coercivity constants.
    pub fn from_triples(
        triples: &[(usize, usize, f64)],
        a: f64,
        b: f64,
    ) -> Result<Self, PotentialError> {
        assert!(b > 0.0, "coercivity constant b must be positive");
        let mut coeffs: [Vec<f64>; 4] = Default::default();
        for &(j, k, c) in triples {
            assert!((1..=4).contains(&j), "component index out of range");
            if k < 1 {
                return Err(PotentialError::InvalidPower {
                    component: j,
                    power: k,
                });
            }
            let comp = &mut coeffs[j - 1];
            if comp.len() < k {
                comp.resize(k, 0.0);
            }
            comp[k - 1] += c;
        }
        let spec = PotentialSpec { coeffs, a, b };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), PotentialError> {
        for (j, comp) in self.coeffs.iter().enumerate() {
            if let Some(&lead) = comp.last() {
                if lead <= 0.0 {
                    return Err(PotentialError::LeadingCoefficient { component: j + 1 });
                }
            }
        }
        self.check_coercivity()?;
        Ok(())
    }

    pub fn is_active(&self, j: usize) -> bool {
        !self.coeffs[j].is_empty()
    }

    /// Highest configured power over all components; 0 for the zero
    /// potential, 1 means globally Lipschitz already.
    pub fn max_power(&self) -> usize {
        self.coeffs.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    /// `u_j(rho)` with `rho = |zeta_j|^2`.
    pub fn radial_value(&self, j: usize, rho: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs[j].iter().rev() {
            acc = (acc + c) * rho;
        }
        acc
    }

    /// `u_j'(rho)`: the radial derivative with respect to `rho`.
    pub fn radial_slope(&self, j: usize, rho: f64) -> f64 {
        let mut acc = 0.0;
        for (k, &c) in self.coeffs[j].iter().enumerate().rev() {
            acc = acc * rho + (k + 1) as f64 * c;
        }
        acc
    }

    /// `u_j''(rho)`.
    pub fn radial_curvature(&self, j: usize, rho: f64) -> f64 {
        let mut acc = 0.0;
        for (k, &c) in self.coeffs[j].iter().enumerate().rev() {
            if k >= 1 {
                acc = acc * rho + ((k + 1) * k) as f64 * c;
            }
        }
        acc
    }

    /// `U(zeta)`; real, phase-invariant in every component.
    pub fn evaluate_u(&self, zeta: &Spinor4) -> f64 {
        let mut acc = 0.0;
        for j in 0..4 {
            acc += self.radial_value(j, zeta.0[j].norm_sqr());
        }
        acc
    }

    /// Wirtinger gradient `F_j(zeta_j) = sum_k k c_{j,k} |zeta_j|^{2(k-1)} zeta_j`.
    pub fn evaluate_f(&self, zeta: &Spinor4) -> Spinor4 {
        let mut out = Spinor4::ZERO;
        for j in 0..4 {
            let rho = zeta.0[j].norm_sqr();
            out.0[j] = zeta.0[j] * self.radial_slope(j, rho);
        }
        out
    }

    /// Certify `U(zeta) >= b |zeta|^2 - a` on a radial grid over the active
    /// components: the separable worst case is the sum of per-component
    /// minima of `u_j(rho) - b rho`.
    fn check_coercivity(&self) -> Result<(), PotentialError> {
        let span = 10.0 * self.coercivity_scale();
        let mut total_min = 0.0;
        let mut worst_r = 0.0;
        for j in 0..4 {
            if !self.is_active(j) {
                continue;
            }
            let mut comp_min = 0.0f64;
            for i in 0..=400 {
                let r = span * i as f64 / 400.0;
                let rho = r * r;
                let v = self.radial_value(j, rho) - self.b * rho;
                if v < comp_min {
                    comp_min = v;
                    worst_r = r;
                }
            }
            total_min += comp_min;
        }
        if total_min < -self.a - 1e-9 * (1.0 + self.a.abs()) {
            return Err(PotentialError::CoercivityViolated { at_radius: worst_r });
        }
        Ok(())
    }

    pub fn coercivity_scale(&self) -> f64 {
        1.0f64.max(((self.a.abs() + 1.0) / self.b).sqrt())
    }
}

/// `Lambda(psi_0) = sqrt((H0 + a)/b)`: the radius inside which the cutoff
/// potential coincides with the original and the bound `|zeta(t)| <= Lambda`
/// holds along solutions.
pub fn lambda_threshold(h0: f64, a: f64, b: f64) -> Result<f64, PotentialError> {
    assert!(b > 0.0);
    if h0 + a < 0.0 {
        return Err(PotentialError::InvalidEnergy { h0, a });
    }
    Ok(((h0 + a) / b).sqrt())
}

/// Quintic Hermite segment on `[0, w]` matching value and two derivatives at
/// both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Quintic {
    c: [f64; 6],
}

impl Quintic {
    fn fit(w: f64, p0: f64, m0: f64, s0: f64, p1: f64, m1: f64, s1: f64) -> Quintic {
        // c0..c2 from the left end; c3..c5 solve the right-end conditions.
        let c0 = p0;
        let c1 = m0;
        let c2 = 0.5 * s0;
        let w2 = w * w;
        let w3 = w2 * w;
        let w4 = w3 * w;
        let w5 = w4 * w;
        let r0 = p1 - (c0 + c1 * w + c2 * w2);
        let r1 = m1 - (c1 + 2.0 * c2 * w);
        let r2 = s1 - 2.0 * c2;
        // Solve [w^3 w^4 w^5; 3w^2 4w^3 5w^4; 6w 12w^2 20w^3] c345 = r.
        let c3 = (10.0 * r0 - 4.0 * r1 * w + 0.5 * r2 * w2) / w3;
        let c4 = (-15.0 * r0 + 7.0 * r1 * w - r2 * w2) / w4;
        let c5 = (6.0 * r0 - 3.0 * r1 * w + 0.5 * r2 * w2) / w5;
        Quintic {
            c: [c0, c1, c2, c3, c4, c5],
        }
    }

    fn value(&self, s: f64) -> f64 {
        let c = &self.c;
        ((((c[5] * s + c[4]) * s + c[3]) * s + c[2]) * s + c[1]) * s + c[0]
    }

    fn slope(&self, s: f64) -> f64 {
        let c = &self.c;
        (((5.0 * c[5] * s + 4.0 * c[4]) * s + 3.0 * c[3]) * s + 2.0 * c[2]) * s + c[1]
    }
}

/// Per-component shape of the modified radial profile in `r = |zeta_j|`.
#[derive(Debug, Clone, PartialEq)]
enum ComponentCutoff {
    /// Already Lipschitz (power <= 1 or inert component): never modified.
    Unmodified,
    /// Exact on `[0, lambda]`, quintic bridge, then `b r^2 + tail_const`.
    Bridged { bridge: Quintic, tail_const: f64 },
}

/// The modified potential / force: equal to the original inside the energy
/// radius, globally Lipschitz outside.
#[derive(Debug, Clone)]
pub struct CutoffPotential {
    pub base: PotentialSpec,
    /// Cutoff threshold; infinite for the unmodified pass-through.
    pub lambda: f64,
    lambda_sq: f64,
    pub blend_width: f64,
    components: [ComponentCutoff; 4],
    /// Per-component caps on `d U~/d rho` in the linear-growth region.
    pub tail_slopes: [f64; 4],
    /// Certified Lipschitz bound for the modified force (grid scan).
    pub lipschitz_bound: f64,
}

impl CutoffPotential {
    /// Pass-through wrapper: the force is never modified (used when
    /// comparing modified and unmodified dynamics, and for quadratic
    /// potentials where the cutoff is the identity transformation).
    pub fn unmodified(base: PotentialSpec) -> Self {
        let lip = unmodified_lipschitz(&base);
        let b = base.b;
        CutoffPotential {
            base,
            lambda: f64::INFINITY,
            lambda_sq: f64::INFINITY,
            blend_width: 0.0,
            components: [
                ComponentCutoff::Unmodified,
                ComponentCutoff::Unmodified,
                ComponentCutoff::Unmodified,
                ComponentCutoff::Unmodified,
            ],
            tail_slopes: [b; 4],
            lipschitz_bound: lip,
        }
    }

    /// Build the cutoff at threshold `lambda` with the given bridge width
    /// (`None` uses the default width `lambda`). Components that are already
    /// Lipschitz are left untouched; for the others the bridge targets the
    /// quadratic `q(r) = b r^2 + (u_j(lambda^2) - b lambda^2)`.
    pub fn build(
        base: PotentialSpec,
        lambda: f64,
        blend_width: Option<f64>,
    ) -> Result<Self, PotentialError> {
        assert!(lambda > 0.0, "cutoff threshold must be positive");
        let w = blend_width.unwrap_or(lambda).max(1e-6);
        let b = base.b;
        let mut components = [
            ComponentCutoff::Unmodified,
            ComponentCutoff::Unmodified,
            ComponentCutoff::Unmodified,
            ComponentCutoff::Unmodified,
        ];
        for j in 0..4 {
            if base.coeffs[j].len() <= 1 {
                // Linear force; the cutoff is the identity transformation.
                continue;
            }
            let r0 = lambda;
            let rho0 = r0 * r0;
            let p0 = base.radial_value(j, rho0);
            // d/dr u(r^2) = 2 r u'(rho); d^2/dr^2 = 2 u' + 4 r^2 u''.
            let m0 = 2.0 * r0 * base.radial_slope(j, rho0);
            let s0 =
                2.0 * base.radial_slope(j, rho0) + 4.0 * rho0 * base.radial_curvature(j, rho0);
            let tail_const = p0 - b * rho0;
            let r1 = lambda + w;
            let p1 = b * r1 * r1 + tail_const;
            let m1 = 2.0 * b * r1;
            let s1 = 2.0 * b;
            let bridge = Quintic::fit(w, p0, m0, s0, p1, m1, s1);
            components[j] = ComponentCutoff::Bridged { bridge, tail_const };
        }
        let mut cutoff = CutoffPotential {
            base,
            lambda,
            lambda_sq: lambda * lambda,
            blend_width: w,
            components,
            tail_slopes: [b; 4],
            lipschitz_bound: 0.0,
        };
        cutoff.lipschitz_bound = cutoff.scan_lipschitz();
        cutoff.check_coercivity()?;
        Ok(cutoff)
    }

    /// Modified radial profile as a function of `r = |zeta_j|`.
    fn radial_value_r(&self, j: usize, r: f64) -> f64 {
        match &self.components[j] {
            ComponentCutoff::Unmodified => self.base.radial_value(j, r * r),
            ComponentCutoff::Bridged { bridge, tail_const } => {
                if r <= self.lambda {
                    self.base.radial_value(j, r * r)
                } else if r < self.lambda + self.blend_width {
                    bridge.value(r - self.lambda)
                } else {
                    self.base.b * r * r + tail_const
                }
            }
        }
    }

    /// `d U~/d rho` evaluated at `r`; this scalar times `zeta_j` is the
    /// modified force component.
    fn rho_slope(&self, j: usize, r: f64) -> f64 {
        match &self.components[j] {
            ComponentCutoff::Unmodified => self.base.radial_slope(j, r * r),
            ComponentCutoff::Bridged { bridge, .. } => {
                if r <= self.lambda {
                    self.base.radial_slope(j, r * r)
                } else if r < self.lambda + self.blend_width {
                    // dU/drho = (dU/dr) / (2r); r > lambda > 0 here.
                    bridge.slope(r - self.lambda) / (2.0 * r)
                } else {
                    self.base.b
                }
            }
        }
    }

    /// Modified potential value.
    pub fn evaluate_u(&self, zeta: &Spinor4) -> f64 {
        let mut acc = 0.0;
        for j in 0..4 {
            let rho = zeta.0[j].norm_sqr();
            acc += if rho <= self.lambda_sq {
                self.base.radial_value(j, rho)
            } else {
                self.radial_value_r(j, rho.sqrt())
            };
        }
        acc
    }

    /// Modified force; identical (bitwise) to the plain force whenever every
    /// `|zeta_j| <= lambda`.
    pub fn evaluate_f(&self, zeta: &Spinor4) -> Spinor4 {
        let mut out = Spinor4::ZERO;
        for j in 0..4 {
            let rho = zeta.0[j].norm_sqr();
            out.0[j] = if rho <= self.lambda_sq {
                zeta.0[j] * self.base.radial_slope(j, rho)
            } else {
                zeta.0[j] * self.rho_slope(j, rho.sqrt())
            };
        }
        out
    }

    fn check_coercivity(&self) -> Result<(), PotentialError> {
        let span = 10.0
            * self
                .base
                .coercivity_scale()
                .max(self.lambda + self.blend_width);
        let mut total_min = 0.0;
        for j in 0..4 {
            if !self.base.is_active(j) {
                continue;
            }
            let mut comp_min = 0.0f64;
            let mut worst = 0.0;
            for i in 0..=800 {
                let r = span * i as f64 / 800.0;
                let v = self.radial_value_r(j, r) - self.base.b * r * r;
                if v < comp_min {
                    comp_min = v;
                    worst = r;
                }
            }
            if comp_min < -self.base.a - 1e-9 * (1.0 + self.base.a.abs()) {
                return Err(PotentialError::ConstructionFailure {
                    component: j + 1,
                    at_radius: worst,
                });
            }
            total_min += comp_min;
        }
        if total_min < -self.base.a - 1e-9 * (1.0 + self.base.a.abs()) {
            return Err(PotentialError::CoercivityViolated { at_radius: 0.0 });
        }
        Ok(())
    }

    /// Grid estimate of the Lipschitz constant of the per-component force
    /// map: the larger of the radial secant slope of `w(r) r` and the
    /// tangential slope `|w(r)|`, scanned out to the linear-growth region.
    fn scan_lipschitz(&self) -> f64 {
        if !self.lambda.is_finite() {
            return unmodified_lipschitz(&self.base);
        }
        let span = (self.lambda + 2.0 * self.blend_width).max(1.0) * 2.0;
        let n = 2000;
        let dr = span / n as f64;
        let mut worst = 0.0f64;
        for j in 0..4 {
            if !self.base.is_active(j) {
                continue;
            }
            let mut prev = 0.0;
            for i in 0..=n {
                let r = i as f64 * dr;
                let f = self.rho_slope(j, r) * r;
                if i > 0 {
                    worst = worst.max(((f - prev) / dr).abs());
                }
                worst = worst.max(self.rho_slope(j, r).abs());
                prev = f;
            }
            // Beyond the scan the slope is exactly b.
            worst = worst.max(self.base.b);
        }
        worst
    }
}

fn unmodified_lipschitz(spec: &PotentialSpec) -> f64 {
    if spec.max_power() <= 1 {
        let mut w = 0.0f64;
        for j in 0..4 {
            if spec.is_active(j) {
                w = w.max(spec.coeffs[j][0].abs());
            }
        }
        w
    } else {
        f64::INFINITY
    }
}

/// The quartic default-scenario potential
/// `U = |zeta_1|^2 + |zeta_1|^4` with `(a, b) = (0, 1)`.
pub fn default_quartic() -> PotentialSpec {
    PotentialSpec::from_triples(&[(1, 1, 1.0), (1, 2, 1.0)], 0.0, 1.0).unwrap()
}
