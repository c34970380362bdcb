//! Self-contained special functions feeding the memory kernels: the Bessel
//! functions `J0`, `J1`, the cumulative integral `G(x) = int_0^x J1(u)/u du`,
//! its tail `T(x) = int_x^infty J1(u)/u du = 1 - G(x)`, and the combined
//! modified Bessel / Struve difference `I0(x) - L0(x)`.
//!
//! `J0` uses the Cephes rational approximations (zeros factored out on
//! [0, 5], Hankel form with rational `P`, `Q` beyond); `J1` uses the fdlibm
//! rational kernels. Both are accurate to a few ulp in absolute terms, which
//! the finite-difference identities in the test suite require; a plain power
//! series crossed to the raw Hankel expansion at x = 12 loses five to six
//! digits in the crossover region and cannot pass them.

use crate::quad::{exp_phase_tail, GaussLegendre, Phase};
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI};
use num_traits::Float;

const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

// --- Cephes J0 ------------------------------------------------------------

const DR1: f64 = 5.783185962946784;
const DR2: f64 = 30.471262343662087;

static J0_RP: [f64; 4] = [
    -4.794432209782018e9,
    1.9561749194655657e12,
    -2.4924834436096772e14,
    9.708622510473064e15,
];
static J0_RQ: [f64; 8] = [
    4.99563147152651e2,
    1.737854016763747e5,
    4.844096583399621e7,
    1.1185553704535683e10,
    2.112775201154892e12,
    3.1051822985742256e14,
    3.1812195594320496e16,
    1.7108629408104315e18,
];
static J0_PP: [f64; 7] = [
    7.969367292973471e-4,
    8.283523921074408e-2,
    1.239533716464143,
    5.447250030587687,
    8.74716500199817,
    5.303240382353949,
    1.0,
];
static J0_PQ: [f64; 7] = [
    9.244088105588637e-4,
    8.562884743544745e-2,
    1.2535274390105895,
    5.470977403304171,
    8.761908832370695,
    5.306052882353947,
    1.0,
];
static J0_QP: [f64; 8] = [
    -1.1366383889846916e-2,
    -1.2825271867050931,
    -1.9553954425773597e1,
    -9.320601521237683e1,
    -1.7768116798048806e2,
    -1.4707750515495118e2,
    -5.141053267665993e1,
    -6.050143506007285,
];
static J0_QQ: [f64; 7] = [
    6.43178256118178e1,
    8.564300259769806e2,
    3.8824018360540163e3,
    7.240467741956525e3,
    5.930727011873169e3,
    2.0620933166032783e3,
    2.420057402402914e2,
];

fn polevl(x: f64, coef: &[f64]) -> f64 {
    let mut acc = coef[0];
    for &c in &coef[1..] {
        acc = acc * x + c;
    }
    acc
}

fn p1evl(x: f64, coef: &[f64]) -> f64 {
    let mut acc = x + coef[0];
    for &c in &coef[1..] {
        acc = acc * x + c;
    }
    acc
}

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= 5.0 {
        let z = x * x;
        if x < 1e-5 {
            return 1.0 - z / 4.0;
        }
        let p = (z - DR1) * (z - DR2);
        return p * polevl(z, &J0_RP) / p1evl(z, &J0_RQ);
    }
    let w = 5.0 / x;
    let q = 25.0 / (x * x);
    let p = polevl(q, &J0_PP) / polevl(q, &J0_PQ);
    let qq = polevl(q, &J0_QP) / p1evl(q, &J0_QQ);
    let xn = x - FRAC_PI_4;
    (p * xn.cos() - w * qq * xn.sin()) * SQRT_2_OVER_PI / x.sqrt()
}

// --- fdlibm J1 ------------------------------------------------------------

static J1_R0: [f64; 4] = [
    -6.25000000000000000000e-02,
    1.40705666955189706048e-03,
    -1.59955631084035597520e-05,
    4.96727999609584448412e-08,
];
static J1_S0: [f64; 5] = [
    1.91537599538363460805e-02,
    1.85946785588630915560e-04,
    1.17718464042623683263e-06,
    5.04636257076217042715e-09,
    1.23542274426137913908e-11,
];

static PR8: [f64; 6] = [
    0.0,
    1.17187499999988647970e-01,
    1.32394806593073575129e+01,
    4.12051854307378562225e+02,
    3.87474538913960532227e+03,
    7.91447954031891731574e+03,
];
static PS8: [f64; 5] = [
    1.14207370375678408436e+02,
    3.65093083420853463394e+03,
    3.69562060269033463555e+04,
    9.76027935934950801311e+04,
    3.08042720627888811578e+04,
];
static PR5: [f64; 6] = [
    1.31990519556243522749e-11,
    1.17187493190614097638e-01,
    6.80275127868432871736e+00,
    1.08308182990189109773e+02,
    5.17636139533199752805e+02,
    5.28715201363337541807e+02,
];
static PS5: [f64; 5] = [
    5.92805987221131331921e+01,
    9.91401418733614377743e+02,
    5.35326695291487976647e+03,
    7.84469031749551231769e+03,
    1.50404688810361062679e+03,
];
static PR3: [f64; 6] = [
    3.02503916137373618024e-09,
    1.17186865567253592491e-01,
    3.93297750033315640650e+00,
    3.51194035591636932736e+01,
    9.10550110750781271918e+01,
    4.85590685197364919645e+01,
];
static PS3: [f64; 5] = [
    3.47913095001251519989e+01,
    3.36762458747825746741e+02,
    1.04687139975775130551e+03,
    8.90811346398256432622e+02,
    1.03787932439639277504e+02,
];
static PR2: [f64; 6] = [
    1.07710830106873743082e-07,
    1.17176219462683348094e-01,
    2.36851496667608785174e+00,
    1.22426109148261232917e+01,
    1.76939711271687727390e+01,
    5.07352312588818499250e+00,
];
static PS2: [f64; 5] = [
    2.14364859363821409488e+01,
    1.25290227168402751090e+02,
    2.32276469057162813669e+02,
    1.17679373287147100768e+02,
    8.36463893371618283368e+00,
];

fn pone(x: f64) -> f64 {
    let (p, q): (&[f64; 6], &[f64; 5]) = if x >= 8.0 {
        (&PR8, &PS8)
    } else if x >= 4.5454 {
        (&PR5, &PS5)
    } else if x >= 2.857 {
        (&PR3, &PS3)
    } else {
        (&PR2, &PS2)
    };
    let z = 1.0 / (x * x);
    let r = p[0] + z * (p[1] + z * (p[2] + z * (p[3] + z * (p[4] + z * p[5]))));
    let s = 1.0 + z * (q[0] + z * (q[1] + z * (q[2] + z * (q[3] + z * q[4]))));
    1.0 + r / s
}

static QR8: [f64; 6] = [
    0.0,
    -1.02539062499992714161e-01,
    -1.62717534544589987888e+01,
    -7.59601722513950107896e+02,
    -1.18498066702429587167e+04,
    -4.84385124285750353010e+04,
];
static QS8: [f64; 6] = [
    1.61395369700722909556e+02,
    7.82538599923348465381e+03,
    1.33875336287249578163e+05,
    7.19657723683240939863e+05,
    6.66601232617776375264e+05,
    -2.94490264303834643215e+05,
];
static QR5: [f64; 6] = [
    -2.08979931141764104297e-11,
    -1.02539050241375426231e-01,
    -8.05644828123936029840e+00,
    -1.83669607474888380239e+02,
    -1.37319376065508163265e+03,
    -2.61244440453215656817e+03,
];
static QS5: [f64; 6] = [
    8.12765501384335777857e+01,
    1.99179873460485964642e+03,
    1.74684851924908907677e+04,
    4.98514270910352279316e+04,
    2.79480751638918118260e+04,
    -4.71918354795128470869e+03,
];
static QR3: [f64; 6] = [
    -5.07831226461766561369e-09,
    -1.02537829820837089745e-01,
    -4.61011581139473403113e+00,
    -5.78472216562783643212e+01,
    -2.28244540737631695038e+02,
    -2.19210128478909325622e+02,
];
static QS3: [f64; 6] = [
    4.76651550323729509273e+01,
    6.73865112676699709482e+02,
    3.38015286679526343505e+03,
    5.54772909720722782367e+03,
    1.90311919338810798763e+03,
    -1.35201191444307340817e+02,
];
static QR2: [f64; 6] = [
    -1.78381727510958865572e-07,
    -1.02517042607985553460e-01,
    -2.75220568278187460720e+00,
    -1.96636162643703720221e+01,
    -4.23253133372830490089e+01,
    -2.13719211703704061733e+01,
];
static QS2: [f64; 6] = [
    2.95333629060523854548e+01,
    2.52981549982190529136e+02,
    7.57502834868645436472e+02,
    7.39393205320467245656e+02,
    1.55949003336666123687e+02,
    -4.95949898822628210127e+00,
];

fn qone(x: f64) -> f64 {
    let (p, q): (&[f64; 6], &[f64; 6]) = if x >= 8.0 {
        (&QR8, &QS8)
    } else if x >= 4.5454 {
        (&QR5, &QS5)
    } else if x >= 2.857 {
        (&QR3, &QS3)
    } else {
        (&QR2, &QS2)
    };
    let z = 1.0 / (x * x);
    let r = p[0] + z * (p[1] + z * (p[2] + z * (p[3] + z * (p[4] + z * p[5]))));
    let s = 1.0 + z * (q[0] + z * (q[1] + z * (q[2] + z * (q[3] + z * (q[4] + z * q[5])))));
    (0.375 + r / s) / x
}

/// `J1(x)/x - 1/2` rational kernel on [0, 2); stable near zero.
fn j1_ratio_small(z: f64) -> f64 {
    let r = z * (J1_R0[0] + z * (J1_R0[1] + z * (J1_R0[2] + z * J1_R0[3])));
    let s = 1.0
        + z * (J1_S0[0] + z * (J1_S0[1] + z * (J1_S0[2] + z * (J1_S0[3] + z * J1_S0[4]))));
    r / s
}

/// Bessel function of the first kind, order one.
pub fn bessel_j1(x: f64) -> f64 {
    let sign = x < 0.0;
    let x = x.abs();
    let v = if x >= 2.0 {
        // sqrt(2/(pi x)) (pone cos(x - 3pi/4) - qone sin(x - 3pi/4)), with the
        // trig pair computed through cos(2x) to dodge cancellation.
        let s = x.sin();
        let c = x.cos();
        let mut cc = s - c;
        let mut ss = -s - c;
        let z = (2.0 * x).cos();
        if s * c > 0.0 {
            cc = z / ss;
        } else {
            ss = z / cc;
        }
        (pone(x) * cc - qone(x) * ss) / (PI * x).sqrt()
    } else {
        let z = x * x;
        (0.5 + j1_ratio_small(z)) * x
    };
    if sign {
        -v
    } else {
        v
    }
}

/// `J1(x)/x`, continuously extended by `1/2` at the origin.
pub fn bessel_j1_over_x(x: f64) -> f64 {
    let x = x.abs();
    if x < 2.0 {
        0.5 + j1_ratio_small(x * x)
    } else {
        bessel_j1(x) / x
    }
}

// --- cumulative / tail integrals of J1(u)/u -------------------------------

/// Accuracy and switch-point knobs for the integral evaluations.
#[derive(Debug, Clone, Copy)]
pub struct SpecFunConfig {
    /// Argument below which the rational small-argument kernel is used for
    /// `J1(u)/u` (the fdlibm split point).
    pub series_cutoff: f64,
    /// Absolute tolerance targeted by the quadratures.
    pub target_abs_tol: f64,
}

impl Default for SpecFunConfig {
    fn default() -> Self {
        SpecFunConfig {
            series_cutoff: 2.0,
            target_abs_tol: 1e-12,
        }
    }
}

impl SpecFunConfig {
    pub fn validate(&self) -> bool {
        self.series_cutoff > 0.0 && self.target_abs_tol > 0.0 && self.target_abs_tol <= 1e-6
    }
}

/// Integral evaluations built on the Bessel kernels. Construction allocates
/// the Gauss rules once; all methods are pure after that.
#[derive(Debug, Clone)]
pub struct SpecFun {
    pub config: SpecFunConfig,
    gl: GaussLegendre,
    gl_tail: GaussLegendre,
}

/// Below this argument the tail is computed as `1 - G(x)`; above it the
/// integration-by-parts asymptotic series is both cheaper and tighter.
const TAIL_SPLIT: f64 = 40.0;

impl SpecFun {
    pub fn new(config: SpecFunConfig) -> Self {
        SpecFun {
            config,
            gl: GaussLegendre::new(20),
            gl_tail: GaussLegendre::new(16),
        }
    }

    /// `int_a^b J1(u)/u du` by panels of fixed width (the integrand
    /// oscillates with period 2 pi; one-unit panels keep GL-20 at machine
    /// accuracy).
    pub fn integrate_j1_over_u(&self, a: f64, b: f64) -> f64 {
        debug_assert!(b >= a && a >= 0.0);
        let mut acc = 0.0;
        let mut x = a;
        while x < b {
            let next = (x + 1.0).min(b);
            acc += self.gl.integrate(x, next, bessel_j1_over_x);
            x = next;
        }
        acc
    }

    /// `G(x) = int_0^x J1(u)/u du`. Direct quadrature, O(x) work.
    pub fn j1_over_u_cumulative(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        self.integrate_j1_over_u(0.0, x)
    }

    /// `T(x) = int_x^infty J1(u)/u du`. For small arguments this is exactly
    /// `1 - G(x)` as computed (the normalization `T(0) = 1` is the identity
    /// `int_0^infty J1(u)/u du = 1`); for large arguments the asymptotic
    /// series avoids the O(x) sweep.
    pub fn j1_over_u_tail(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        if x < TAIL_SPLIT {
            1.0 - self.j1_over_u_cumulative(x)
        } else {
            tail_asymptotic(x)
        }
    }

    /// `I0(x) - L0(x)`, computed as one function: the Laplace-type integral
    /// `(2/pi) int_0^{pi/2} exp(-x sin v) dv` for moderate arguments, the
    /// all-positive asymptotic series beyond. Forming `I0` and `L0`
    /// separately would cancel catastrophically (both grow like `e^x`).
    pub fn i0_minus_struve_l0(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        if x >= TAIL_SPLIT {
            return i0l0_asymptotic(x);
        }
        // Geometric panels resolve the O(1/x) boundary layer at v = 0.
        let mut edges: Vec<f64> = alloc::vec![0.0];
        if x > 4.0 {
            let mut w = 1.0 / x;
            while w < PI / 2.0 {
                edges.push(w);
                w *= 2.0;
            }
        } else {
            edges.push(PI / 4.0);
        }
        edges.push(PI / 2.0);
        let mut acc = 0.0;
        for pair in edges.windows(2) {
            acc += self
                .gl
                .integrate(pair[0], pair[1], |v| (-x * v.sin()).exp());
        }
        acc * 2.0 / PI
    }

    /// Oscillatory cross-check route for `I0 - L0`:
    /// `int_0^infty sin(x r)/sqrt(r^2+1) dr = (pi/2) (I0(x) - L0(x))`,
    /// evaluated by half-period panel summation with averaging acceleration.
    pub fn i0_minus_struve_l0_oscillatory(&self, x: f64) -> f64 {
        assert!(x > 0.0);
        let head: f64 = {
            let mut acc = 0.0;
            let mut a = 0.0;
            let width = PI / x;
            while a < 30.0 {
                let b = (a + width).min(30.0);
                acc += self
                    .gl
                    .integrate(a, b, |r| (x * r).sin() / (r * r + 1.0).sqrt());
                a = b;
            }
            acc
        };
        let phase = Phase {
            lin: x,
            omega_coef: 0.0,
            mass: 1.0,
        };
        let mut env = |r: f64| 1.0 / (r * r + 1.0).sqrt();
        let tail = exp_phase_tail(&mut env, phase, 30.0, &self.gl_tail, 80)
            .expect("monotone phase")
            .im;
        (head + tail) * 2.0 / PI
    }
}

/// Asymptotic tail of `int_x^infty J1(u)/u du` by repeated integration by
/// parts: `T_n = J0/x^n + n J1/x^{n+1} - n(n+2) T_{n+2}`. Terms shrink until
/// roughly n ~ x; truncation at the smallest term leaves an error below the
/// first neglected one.
pub fn tail_asymptotic(x: f64) -> f64 {
    let j0 = bessel_j0(x);
    let j1 = bessel_j1(x);
    let mut acc = 0.0;
    let mut pref = 1.0;
    let mut n = 1.0f64;
    let mut last = f64::INFINITY;
    for _ in 0..24 {
        let term = pref * (j0 * x.powf(-n) + n * j1 * x.powf(-n - 1.0));
        let size = pref.abs() * (x.powf(-n) + n * x.powf(-n - 1.0));
        if size > last {
            break;
        }
        acc += term;
        last = size;
        pref *= -n * (n + 2.0);
        n += 2.0;
        if size < 1e-18 {
            break;
        }
    }
    acc
}

fn i0l0_asymptotic(x: f64) -> f64 {
    // (2/pi) sum_k ((2k-1)!!)^2 / x^{2k+1}, all terms positive.
    let mut acc = 0.0;
    let mut coef = 1.0f64;
    let mut pow = 1.0 / x;
    let inv_x2 = 1.0 / (x * x);
    let mut last = f64::INFINITY;
    for k in 0..30 {
        let term = coef * pow;
        if term > last {
            break;
        }
        acc += term;
        last = term;
        let odd = 2.0 * k as f64 + 1.0;
        coef *= odd * odd;
        pow *= inv_x2;
        if term < 1e-20 * acc {
            break;
        }
    }
    acc * 2.0 / PI
}
