//! Quadrature primitives shared across the crate: Gauss-Legendre rules with
//! runtime node generation, adaptive panel integration, uniform-grid cubic
//! interpolation, Aitken limit extraction, and accelerated evaluation of
//! oscillatory tail integrals with phases of the form `a*r + b*sqrt(r^2+m^2)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
use num_traits::Float;

/// Values that can be accumulated in a weighted sum. Implemented for `f64`,
/// `Complex64` and `Spinor4` so the same quadrature drivers serve scalar,
/// complex and spinor integrands.
pub trait Accumulate: Copy {
    fn zero() -> Self;
    /// `self + w * v`
    fn add_scaled(self, w: f64, v: Self) -> Self;
    /// Magnitude used for error control.
    fn abs_size(self) -> f64;
}

impl Accumulate for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add_scaled(self, w: f64, v: Self) -> Self {
        self + w * v
    }
    fn abs_size(self) -> f64 {
        self.abs()
    }
}

impl Accumulate for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add_scaled(self, w: f64, v: Self) -> Self {
        self + v * w
    }
    fn abs_size(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuadError {
    /// Adaptive refinement hit the depth limit before reaching the tolerance.
    NonConvergence { achieved: f64, requested: f64 },
    /// The oscillatory phase stopped being monotone inside the tail.
    PhaseNotMonotone { at: f64 },
}

impl core::fmt::Display for QuadError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            QuadError::NonConvergence {
                achieved,
                requested,
            } => write!(
                f,
                "quadrature did not converge: error {achieved:.3e} > tolerance {requested:.3e}"
            ),
            QuadError::PhaseNotMonotone { at } => {
                write!(f, "oscillatory phase not monotone near r = {at:.6e}")
            }
        }
    }
}

/// Gauss-Legendre rule on [-1, 1]. Nodes and weights are generated at
/// construction by Newton iteration on the Legendre recurrence, accurate to
/// machine precision for the orders used here (n <= 64).
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..(n + 1) / 2 {
            // Chebyshev-like initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_pd(n, x);
                dp = d;
                let dx = -p / d;
                x += dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate `f` over [a, b].
    pub fn integrate<T: Accumulate>(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> T) -> T {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc.add_scaled(w * half, f(mid + half * x));
        }
        acc
    }

    /// Map the rule onto [a, b] and push the (node, weight) pairs.
    pub fn extend_mapped(&self, a: f64, b: f64, out: &mut Vec<(f64, f64)>) {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            out.push((mid + half * x, w * half));
        }
    }
}

fn legendre_pd(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Adaptive integration by interval bisection, comparing an embedded pair of
/// Gauss rules per panel. Intended for smooth or mildly oscillatory
/// integrands on finite intervals.
pub fn integrate_adaptive<T: Accumulate>(
    f: &mut impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<T, QuadError> {
    let lo = GaussLegendre::new(12);
    let hi = GaussLegendre::new(25);
    let total = b - a;
    let mut acc = T::zero();
    let mut worst = 0.0f64;
    let mut stack = vec![(a, b, 0u32)];
    while let Some((a, b, depth)) = stack.pop() {
        let coarse = lo.integrate(a, b, &mut *f);
        let fine = hi.integrate(a, b, &mut *f);
        let err = fine.add_scaled(-1.0, coarse).abs_size();
        let local_tol = tol * ((b - a) / total).max(1e-3);
        if err <= local_tol || depth >= 48 {
            if err > local_tol {
                worst = worst.max(err);
            }
            acc = acc.add_scaled(1.0, fine);
        } else {
            let mid = 0.5 * (a + b);
            stack.push((a, mid, depth + 1));
            stack.push((mid, b, depth + 1));
        }
    }
    if worst > tol {
        return Err(QuadError::NonConvergence {
            achieved: worst,
            requested: tol,
        });
    }
    Ok(acc)
}

/// Cubic interpolation on a uniform grid by a sliding 4-point Lagrange
/// stencil (clamped at the ends). `values[i]` is the sample at `i * h`.
pub fn cubic_interp<T: Accumulate>(values: &[T], h: f64, x: f64) -> T {
    let n = values.len();
    assert!(n >= 2, "need at least two samples");
    if n < 4 {
        // Linear fallback for very short tables.
        let pos = (x / h).clamp(0.0, (n - 1) as f64);
        let i = (pos as usize).min(n - 2);
        let u = pos - i as f64;
        return T::zero()
            .add_scaled(1.0 - u, values[i])
            .add_scaled(u, values[i + 1]);
    }
    let pos = x / h;
    // Base index of the stencil {i0, i0+1, i0+2, i0+3}; interpolation cell is
    // [i0+1, i0+2] in the interior.
    let cell = (pos.floor() as isize).clamp(0, n as isize - 2) as usize;
    let i0 = cell.saturating_sub(1).min(n - 4);
    let u = pos - i0 as f64;
    let mut acc = T::zero();
    for j in 0..4 {
        let mut w = 1.0;
        for k in 0..4 {
            if k != j {
                w *= (u - k as f64) / (j as f64 - k as f64);
            }
        }
        acc = acc.add_scaled(w, values[i0 + j]);
    }
    acc
}

/// Limit of a convergent sequence by iterated Aitken extrapolation.
/// Returns the extrapolated limit and an error estimate taken from the last
/// correction. Robust to unknown (possibly mixed) convergence orders.
pub fn aitken_limit(seq: &[f64]) -> (f64, f64) {
    assert!(!seq.is_empty());
    if seq.len() == 1 {
        return (seq[0], f64::NAN);
    }
    if seq.len() == 2 {
        return (seq[1], (seq[1] - seq[0]).abs());
    }
    let mut cur: Vec<f64> = seq.to_vec();
    let mut best = *cur.last().unwrap();
    let mut est = (cur[cur.len() - 1] - cur[cur.len() - 2]).abs();
    while cur.len() >= 3 {
        let mut next = Vec::with_capacity(cur.len() - 2);
        for w in cur.windows(3) {
            let (x0, x1, x2) = (w[0], w[1], w[2]);
            let d2 = (x2 - x1) - (x1 - x0);
            if d2.abs() < 1e-300 {
                next.push(x2);
            } else {
                next.push(x2 - (x2 - x1) * (x2 - x1) / d2);
            }
        }
        let cand = *next.last().unwrap();
        let cand_est = (cand - best).abs();
        best = cand;
        est = cand_est;
        cur = next;
    }
    (best, est)
}

/// Phase of the form `lin * r + omega_coef * sqrt(r^2 + mass^2)`.
#[derive(Debug, Clone, Copy)]
pub struct Phase {
    pub lin: f64,
    pub omega_coef: f64,
    pub mass: f64,
}

impl Phase {
    pub fn eval(&self, r: f64) -> f64 {
        self.lin * r + self.omega_coef * (r * r + self.mass * self.mass).sqrt()
    }
    pub fn rate(&self, r: f64) -> f64 {
        self.lin + self.omega_coef * r / (r * r + self.mass * self.mass).sqrt()
    }
}

/// Tail integral `\int_{r0}^\infty env(r) e^{i phi(r)} dr` for a decaying
/// envelope and a monotone oscillatory phase. The integral is summed in
/// half-period segments; the segment partial sums alternate, and repeated
/// averaging (an Euler transform) extracts the limit.
pub fn exp_phase_tail(
    env: &mut impl FnMut(f64) -> f64,
    phase: Phase,
    r0: f64,
    gl: &GaussLegendre,
    max_segments: usize,
) -> Result<Complex64, QuadError> {
    let rate0 = phase.rate(r0);
    if rate0.abs() < 1e-9 {
        return Err(QuadError::PhaseNotMonotone { at: r0 });
    }
    let sign = rate0.signum();
    let mut partial = Vec::with_capacity(max_segments);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut a = r0;
    for _ in 0..max_segments {
        // Advance the phase by pi (Newton, the phase is smooth and monotone).
        let mut b = a + PI / phase.rate(a).abs().max(1e-12);
        for _ in 0..4 {
            let target = phase.eval(a) + sign * PI;
            let rate = phase.rate(b);
            if rate.abs() < 1e-12 || b <= a {
                return Err(QuadError::PhaseNotMonotone { at: b.max(a) });
            }
            b -= (phase.eval(b) - target) / rate;
        }
        if b <= a {
            return Err(QuadError::PhaseNotMonotone { at: a });
        }
        let seg = gl.integrate(a, b, |r| {
            let p = phase.eval(r);
            let e = env(r);
            Complex64::new(e * p.cos(), e * p.sin())
        });
        acc += seg;
        partial.push(acc);
        a = b;
        // Stop early once segments are negligible.
        if partial.len() >= 8 && seg.norm() < 1e-17 {
            break;
        }
    }
    Ok(euler_limit_complex(&partial))
}

fn euler_limit_complex(partial: &[Complex64]) -> Complex64 {
    let re: Vec<f64> = partial.iter().map(|z| z.re).collect();
    let im: Vec<f64> = partial.iter().map(|z| z.im).collect();
    Complex64::new(euler_limit(&re), euler_limit(&im))
}

/// Repeated-averaging limit of the partial sums of an alternating-type
/// sequence. Averages adjacent entries until one value remains, which for
/// alternating tails converges geometrically.
pub fn euler_limit(partial: &[f64]) -> f64 {
    assert!(!partial.is_empty());
    let mut cur: Vec<f64> = partial.to_vec();
    // Keep the tail of the triangle; early entries carry transient error.
    while cur.len() > 1 {
        for i in 0..cur.len() - 1 {
            cur[i] = 0.5 * (cur[i] + cur[i + 1]);
        }
        cur.pop();
    }
    cur[0]
}
