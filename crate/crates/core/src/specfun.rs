//! Special-function kernel: log-gamma, Pochhammer symbols, the Gauss series
//! ₂F₁ with complex upper parameters, a ₃F₂ series, and the gamma-ratio
//! constants that connect the seed-solution bases at the two ends of
//! (0, π/2).
//!
//! All series are summed in ascending order with compensated accumulation.
//! A series whose upper parameter is a non-positive integer terminates and is
//! summed exactly as a polynomial.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pt::PTParams;

/// Relative size of the last series term at which summation stops.
pub const SERIES_TOL: f64 = 1e-15;
/// Maximum number of series terms before reporting non-convergence.
pub const MAX_TERMS: usize = 10_000;

/// Distance from an integer below which an upper parameter is treated as a
/// terminating (non-positive integer) parameter.
const INTEGER_SNAP: f64 = 1e-12;
/// Distance from a non-positive integer at which 1/Γ is taken to be zero.
const POLE_SNAP: f64 = 1e-11;

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
const LANCZOS_G_HALF: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    4.652_362_892_704_858e-5,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_64e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_23e-5,
];

fn ln_gamma_positive(x: f64) -> f64 {
    let t = x + LANCZOS_G_HALF;
    let head = (x + 0.5) * t.ln() - t;
    let mut y = x;
    let mut ser = LANCZOS_C0;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    head + (SQRT_2PI * ser / x).ln()
}

fn ln_gamma_complex_right(z: Complex64) -> Complex64 {
    let t = z + LANCZOS_G_HALF;
    let head = (z + 0.5) * t.ln() - t;
    let mut y = z;
    let mut ser = Complex64::new(LANCZOS_C0, 0.0);
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    head + (ser * SQRT_2PI / z).ln()
}

/// sin(πx) with argument reduction so that integers give exact zeros.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).floor();
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    (PI * r).sin()
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Natural log of |Γ(x)| together with the sign of Γ(x).
///
/// Negative non-integer arguments go through the reflection formula.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() || is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x > 0.0 {
        return Ok((ln_gamma_positive(x), 1.0));
    }
    let s = sin_pi(x);
    let ln_abs = (PI / s.abs()).ln() - ln_gamma_positive(1.0 - x);
    Ok((ln_abs, s.signum()))
}

/// ln Γ(x) for x > 0, ln |Γ(x)| for negative non-integer x.
pub fn ln_gamma(x: f64) -> Result<f64> {
    ln_gamma_signed(x).map(|(v, _)| v)
}

/// Γ(x) for real x; reflection-based for negative arguments.
pub fn gamma(x: f64) -> Result<f64> {
    let (ln_abs, sign) = ln_gamma_signed(x)?;
    Ok(sign * ln_abs.exp())
}

fn near_pole(z: Complex64) -> bool {
    z.im.abs() <= POLE_SNAP && z.re <= POLE_SNAP && (z.re - z.re.round()).abs() <= POLE_SNAP
}

/// Complex log-gamma (principal branch is not tracked; only exp() of the
/// result is meaningful).
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::Pole(z.re));
    }
    if z.re >= 0.5 {
        return Ok(ln_gamma_complex_right(z));
    }
    let s = (z * PI).sin();
    Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_complex_right(1.0 - z))
}

/// 1/Γ(z), entire; returns exactly zero at the poles of Γ.
pub fn rgamma_complex(z: Complex64) -> Complex64 {
    if near_pole(z) {
        return Complex64::new(0.0, 0.0);
    }
    match ln_gamma_complex(z) {
        Ok(l) => (-l).exp(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

/// Rising factorial (a)_m = a(a+1)…(a+m−1).
pub fn pochhammer(a: f64, m: usize) -> f64 {
    (0..m).fold(1.0, |acc, k| acc * (a + k as f64))
}

pub fn pochhammer_complex(a: Complex64, m: usize) -> Complex64 {
    (0..m).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (a + k as f64))
}

#[derive(Default)]
struct Compensated {
    sum: Complex64,
    carry: Complex64,
}

impl Compensated {
    fn add(&mut self, x: Complex64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

fn terminating_degree(a: Complex64) -> Option<usize> {
    if a.im.abs() > INTEGER_SNAP || a.re > INTEGER_SNAP {
        return None;
    }
    let r = a.re.round();
    ((a.re - r).abs() <= INTEGER_SNAP).then(|| (-r) as usize)
}

/// Generalized hypergeometric series with complex upper and real lower
/// parameters. Returns the sum and the sum of the term magnitudes.
fn hypergeometric_series(upper: &[Complex64], lower: &[f64], z: f64) -> Result<(Complex64, f64)> {
    if let Some(b) = lower
        .iter()
        .find(|b| is_nonpositive_integer(**b) || !b.is_finite())
    {
        return Err(Error::InvalidSeries(format!(
            "lower parameter {b} is a non-positive integer"
        )));
    }
    let degree = upper.iter().filter_map(|a| terminating_degree(*a)).min();
    let z_ok = match degree {
        Some(_) => (0.0..=1.0).contains(&z),
        None => (0.0..1.0).contains(&z),
    };
    if !z_ok {
        return Err(Error::InvalidSeries(format!(
            "argument z = {z} outside [0, 1)"
        )));
    }

    let guard = upper
        .iter()
        .map(|a| a.norm())
        .chain(lower.iter().map(|b| b.abs()))
        .fold(0.0_f64, f64::max)
        .ceil() as usize;

    let mut acc = Compensated::default();
    let mut term = Complex64::new(1.0, 0.0);
    acc.add(term);
    let mut magnitude = 1.0;
    let mut small_run = 0;
    let mut m = 0usize;
    loop {
        match degree {
            Some(n) if m == n => return Ok((acc.sum, magnitude)),
            None if m >= MAX_TERMS => {
                return Err(Error::NonConvergence {
                    terms: MAX_TERMS,
                    z,
                });
            }
            _ => {}
        }
        let k = m as f64;
        let mut ratio = Complex64::new(z / (k + 1.0), 0.0);
        for a in upper {
            ratio *= a + k;
        }
        for b in lower {
            ratio /= b + k;
        }
        term *= ratio;
        acc.add(term);
        magnitude += term.norm();
        m += 1;
        if degree.is_none() {
            if term.norm() == 0.0 {
                return Ok((acc.sum, magnitude));
            }
            if term.norm() <= SERIES_TOL * acc.sum.norm() && m > guard {
                small_run += 1;
                if small_run >= 2 {
                    return Ok((acc.sum, magnitude));
                }
            } else {
                small_run = 0;
            }
        }
    }
}

/// Parameters of the Gauss series ₂F₁(a, b; c; z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperParams2F1 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: f64,
    pub z: f64,
}

impl HyperParams2F1 {
    pub fn new(a: Complex64, b: Complex64, c: f64, z: f64) -> Self {
        Self { a, b, c, z }
    }

    pub fn real(a: f64, b: f64, c: f64, z: f64) -> Self {
        Self::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0), c, z)
    }
}

/// Gauss hypergeometric series on [0, 1).
pub fn gauss_2f1(p: &HyperParams2F1) -> Result<Complex64> {
    Ok(hypergeometric_series(&[p.a, p.b], &[p.c], p.z)?.0)
}

/// ₂F₁ together with Σ|terms|, which bounds the rounding error of the sum.
pub(crate) fn gauss_2f1_with_magnitude(p: &HyperParams2F1) -> Result<(Complex64, f64)> {
    hypergeometric_series(&[p.a, p.b], &[p.c], p.z)
}

/// d/dz ₂F₁(a, b; c; z) = (ab/c) ₂F₁(a+1, b+1; c+1; z).
pub fn gauss_2f1_derivative(p: &HyperParams2F1) -> Result<Complex64> {
    if is_nonpositive_integer(p.c) {
        return Err(Error::InvalidSeries(format!(
            "c = {} is a non-positive integer",
            p.c
        )));
    }
    let lead = p.a * p.b / p.c;
    if lead.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let shifted = HyperParams2F1::new(p.a + 1.0, p.b + 1.0, p.c + 1.0, p.z);
    Ok(lead * gauss_2f1(&shifted)?)
}

/// ₃F₂(a1, a2, a3; b1, b2; z) partial sums with the same contract as
/// [`gauss_2f1`].
pub fn f32_series(
    a1: Complex64,
    a2: Complex64,
    a3: Complex64,
    b1: f64,
    b2: f64,
    z: f64,
) -> Result<Complex64> {
    Ok(hypergeometric_series(&[a1, a2, a3], &[b1, b2], z)?.0)
}

/// ₃F₂ together with Σ|terms|.
pub(crate) fn f32_series_with_magnitude(
    upper: [Complex64; 3],
    lower: [f64; 2],
    z: f64,
) -> Result<(Complex64, f64)> {
    hypergeometric_series(&upper, &lower, z)
}

/// Gamma-ratio constants governing the seed solutions near x = π/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCoeffs {
    pub a_coef: f64,
    pub b_coef: f64,
}

/// Connection constants between the solution basis expanded around x = 0
/// and the mirrored basis expanded around x = π/2.
///
/// With `f_A`, `f_B` the regular and singular left solutions for (λ, ν) and
/// `g_A`, `g_B` the same functions for (ν, λ) evaluated at π/2 − x:
///
/// ```text
/// f_A = a1 g_A + a g_B
/// f_B = b1 g_A + b g_B
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Connection {
    pub a: Complex64,
    pub b: Complex64,
    pub a1: Complex64,
    pub b1: Complex64,
}

impl Connection {
    /// Right-basis coefficients of A f_A + B f_B.
    pub fn apply(&self, coeff_a: Complex64, coeff_b: Complex64) -> (Complex64, Complex64) {
        (
            coeff_a * self.a1 + coeff_b * self.b1,
            coeff_a * self.a + coeff_b * self.b,
        )
    }
}

pub(crate) fn half_root(epsilon: Complex64) -> Complex64 {
    (epsilon / 2.0).sqrt()
}

pub fn connection(params: &PTParams, epsilon: Complex64) -> Result<Connection> {
    let (lambda, nu, mu) = (params.lambda(), params.nu(), params.mu());
    let s = half_root(epsilon);
    let g_lp = gamma(lambda + 0.5)?;
    let g_nm = gamma(nu - 0.5)?;
    let g_3l = gamma(1.5 - lambda)?;
    let g_hn = gamma(0.5 - nu)?;
    let shift_b = Complex64::new((1.0 + nu - lambda) / 2.0, 0.0);
    let shift_a1 = Complex64::new((1.0 + lambda - nu) / 2.0, 0.0);
    let half_mu = Complex64::new(mu / 2.0, 0.0);
    let one_minus = Complex64::new(1.0 - mu / 2.0, 0.0);

    let a = g_lp * g_nm * rgamma_complex(half_mu + s) * rgamma_complex(half_mu - s);
    let b = g_3l * g_nm * rgamma_complex(shift_b + s) * rgamma_complex(shift_b - s);
    let a1 = g_lp * g_hn * rgamma_complex(shift_a1 + s) * rgamma_complex(shift_a1 - s);
    let b1 = g_3l * g_hn * rgamma_complex(one_minus + s) * rgamma_complex(one_minus - s);
    Ok(Connection { a, b, a1, b1 })
}

/// The constants a, b of the large-x behaviour u ~ (A a + B b) cos^{1−ν} x.
///
/// At a physical eigenvalue the denominator of `a` has a pole and `a_coef`
/// is returned as exactly zero.
pub fn ab_coefficients(params: &PTParams, epsilon: f64) -> Result<AsymptoticCoeffs> {
    let c = connection(params, Complex64::new(epsilon, 0.0))?;
    Ok(AsymptoticCoeffs {
        a_coef: c.a.re,
        b_coef: c.b.re,
    })
}
