//! Complex 4-spinor arithmetic and the Dirac matrices, together with
//! symbol-level operations in Fourier space: the symbol `alpha.xi + m beta`,
//! its inverse, and the free propagator `exp(-i t D(xi))`.
//!
//! The representation is fixed to the standard Dirac-Pauli one,
//! `beta = diag(1, 1, -1, -1)` with the Pauli blocks off-diagonal in the
//! `alpha_k`. Everything downstream is representation-covariant (only norms,
//! Hermiticity and the anticommutation relations are used), but fixing a
//! representation keeps tests bit-reproducible.

use crate::quad::Accumulate;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use num_complex::Complex64;
use num_traits::Float;

pub type C64 = Complex64;

pub const fn c(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

/// A point of `C^4`: the value of the point amplitude, the free-field trace,
/// the oscillator force, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Spinor4(pub [C64; 4]);

impl Spinor4 {
    pub const ZERO: Spinor4 = Spinor4([c(0.0, 0.0); 4]);

    pub fn new(v: [C64; 4]) -> Self {
        Spinor4(v)
    }

    /// Standard basis vector `e_j`, `j = 0..4`.
    pub fn basis(j: usize) -> Self {
        let mut v = [c(0.0, 0.0); 4];
        v[j] = c(1.0, 0.0);
        Spinor4(v)
    }

    pub fn from_re_im(re: [f64; 4], im: [f64; 4]) -> Self {
        let mut v = [c(0.0, 0.0); 4];
        for j in 0..4 {
            v[j] = c(re[j], im[j]);
        }
        Spinor4(v)
    }

    /// Squared Euclidean norm, `sum_j |v_j|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian inner product `<self, other> = sum conj(self_j) other_j`.
    pub fn inner(&self, other: &Spinor4) -> C64 {
        let mut acc = c(0.0, 0.0);
        for j in 0..4 {
            acc += self.0[j].conj() * other.0[j];
        }
        acc
    }

    pub fn scale(&self, s: C64) -> Spinor4 {
        let mut v = self.0;
        for z in &mut v {
            *z *= s;
        }
        Spinor4(v)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest componentwise distance to `other`.
    pub fn max_component_dist(&self, other: &Spinor4) -> f64 {
        let mut m = 0.0f64;
        for j in 0..4 {
            m = m.max((self.0[j] - other.0[j]).norm());
        }
        m
    }
}

impl Add for Spinor4 {
    type Output = Spinor4;
    fn add(self, rhs: Spinor4) -> Spinor4 {
        let mut v = self.0;
        for j in 0..4 {
            v[j] += rhs.0[j];
        }
        Spinor4(v)
    }
}

impl AddAssign for Spinor4 {
    fn add_assign(&mut self, rhs: Spinor4) {
        for j in 0..4 {
            self.0[j] += rhs.0[j];
        }
    }
}

impl Sub for Spinor4 {
    type Output = Spinor4;
    fn sub(self, rhs: Spinor4) -> Spinor4 {
        let mut v = self.0;
        for j in 0..4 {
            v[j] -= rhs.0[j];
        }
        Spinor4(v)
    }
}

impl SubAssign for Spinor4 {
    fn sub_assign(&mut self, rhs: Spinor4) {
        for j in 0..4 {
            self.0[j] -= rhs.0[j];
        }
    }
}

impl Neg for Spinor4 {
    type Output = Spinor4;
    fn neg(self) -> Spinor4 {
        self.scale(c(-1.0, 0.0))
    }
}

impl Mul<f64> for Spinor4 {
    type Output = Spinor4;
    fn mul(self, s: f64) -> Spinor4 {
        self.scale(c(s, 0.0))
    }
}

impl Mul<C64> for Spinor4 {
    type Output = Spinor4;
    fn mul(self, s: C64) -> Spinor4 {
        self.scale(s)
    }
}

impl Accumulate for Spinor4 {
    fn zero() -> Self {
        Spinor4::ZERO
    }
    fn add_scaled(self, w: f64, v: Self) -> Self {
        let mut out = self.0;
        for j in 0..4 {
            out[j] += v.0[j] * w;
        }
        Spinor4(out)
    }
    fn abs_size(self) -> f64 {
        self.norm()
    }
}

/// Dense complex 4x4 matrix, used for the Dirac matrices themselves and for
/// symbol-level tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4(pub [[C64; 4]; 4]);

impl Matrix4 {
    pub const ZERO: Matrix4 = Matrix4([[c(0.0, 0.0); 4]; 4]);

    pub fn identity() -> Matrix4 {
        let mut m = Matrix4::ZERO;
        for j in 0..4 {
            m.0[j][j] = c(1.0, 0.0);
        }
        m
    }

    pub fn mul_vec(&self, v: &Spinor4) -> Spinor4 {
        let mut out = [c(0.0, 0.0); 4];
        for (row, o) in self.0.iter().zip(&mut out) {
            for (a, b) in row.iter().zip(&v.0) {
                *o += a * b;
            }
        }
        Spinor4(out)
    }

    pub fn mul_mat(&self, rhs: &Matrix4) -> Matrix4 {
        let mut out = Matrix4::ZERO;
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a != c(0.0, 0.0) {
                    for j in 0..4 {
                        out.0[i][j] += a * rhs.0[k][j];
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix4) -> Matrix4 {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Matrix4) -> Matrix4 {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Matrix4 {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] *= s;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Matrix4 {
        let mut out = Matrix4::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[j][i].conj();
            }
        }
        out
    }

    /// Largest entry magnitude; used in the anticommutation tests.
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for row in &self.0 {
            for z in row {
                m = m.max(z.norm());
            }
        }
        m
    }
}

/// The Dirac matrices in the standard representation plus the mass.
/// All four matrices are Hermitian and satisfy the Clifford relations
/// `alpha_j alpha_k + alpha_k alpha_j = 2 delta_jk`, `alpha_j beta + beta
/// alpha_j = 0`, `beta^2 = 1`.
#[derive(Debug, Clone)]
pub struct DiracRep {
    pub alpha: [Matrix4; 3],
    pub beta: Matrix4,
    pub mass: f64,
}

impl DiracRep {
    /// Standard Dirac-Pauli representation with the given mass (`m > 0`).
    pub fn standard(mass: f64) -> Self {
        assert!(mass > 0.0, "the massless limit is out of scope");
        let o = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        // alpha_k = offdiag(sigma_k, sigma_k)
        let a1 = Matrix4([
            [o, o, o, one],
            [o, o, one, o],
            [o, one, o, o],
            [one, o, o, o],
        ]);
        let a2 = Matrix4([
            [o, o, o, -i],
            [o, o, i, o],
            [o, -i, o, o],
            [i, o, o, o],
        ]);
        let a3 = Matrix4([
            [o, o, one, o],
            [o, o, o, -one],
            [one, o, o, o],
            [o, -one, o, o],
        ]);
        let beta = Matrix4([
            [one, o, o, o],
            [o, one, o, o],
            [o, o, -one, o],
            [o, o, o, -one],
        ]);
        DiracRep {
            alpha: [a1, a2, a3],
            beta,
            mass,
        }
    }

    /// `omega(xi) = sqrt(|xi|^2 + m^2)`, the relativistic dispersion.
    pub fn omega(&self, xi_sq: f64) -> f64 {
        (xi_sq + self.mass * self.mass).sqrt()
    }

    /// The Fourier symbol `D(xi) = alpha.xi + m beta` as a matrix.
    pub fn symbol(&self, xi: [f64; 3]) -> Matrix4 {
        let mut m = self.beta.scale(c(self.mass, 0.0));
        for k in 0..3 {
            m = m.add(&self.alpha[k].scale(c(xi[k], 0.0)));
        }
        m
    }

    /// `(alpha.xi + m beta) v`.
    pub fn apply_symbol(&self, xi: [f64; 3], v: &Spinor4) -> Spinor4 {
        let mut out = self.beta.mul_vec(v) * self.mass;
        for k in 0..3 {
            if xi[k] != 0.0 {
                out += self.alpha[k].mul_vec(v) * xi[k];
            }
        }
        out
    }

    /// `D(xi)^{-1} v = (alpha.xi + m beta) v / (|xi|^2 + m^2)`.
    pub fn apply_inverse_symbol(&self, xi: [f64; 3], v: &Spinor4) -> Spinor4 {
        let xi_sq = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        self.apply_symbol(xi, v) * (1.0 / (xi_sq + self.mass * self.mass))
    }

    /// Spectral flow `exp(-i t D(xi)) v = cos(t w) v - i sin(t w)/w D(xi) v`.
    /// Preserves the spinor norm.
    pub fn apply_propagator(&self, xi: [f64; 3], t: f64, v: &Spinor4) -> Spinor4 {
        let xi_sq = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        let w = self.omega(xi_sq);
        let dv = self.apply_symbol(xi, v);
        v.scale(c((t * w).cos(), 0.0)) + dv.scale(c(0.0, -(t * w).sin() / w))
    }
}
