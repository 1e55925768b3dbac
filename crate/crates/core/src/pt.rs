//! The trigonometric Pöschl-Teller system on (0, π/2):
//!
//! ```text
//! V(x) = (λ−1)λ / (2 sin²x) + (ν−1)ν / (2 cos²x),   E_n = (μ + 2n)² / 2,   μ = λ + ν
//! ```
//!
//! A solution of `−½u″ + Vu = εu` is written in the left basis
//!
//! ```text
//! f_A = sin^λ x cos^ν x ₂F₁(μ/2 + s, μ/2 − s; λ + ½; sin²x)
//! f_B = sin^{1−λ} x cos^ν x ₂F₁((1+ν−λ)/2 + s, (1+ν−λ)/2 − s; 3/2 − λ; sin²x)
//! ```
//!
//! with `s = √(ε/2)`, and in the mirrored right basis (the same functions for
//! (ν, λ) evaluated at π/2 − x). Each basis is used on the half of the
//! interval where its series argument stays below ½; the gamma-ratio
//! connection constants carry the coefficients from one side to the other.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::{
    self, gauss_2f1_derivative, gauss_2f1_with_magnitude, pochhammer, HyperParams2F1,
};

/// Evaluators accept x in [EVAL_GUARD, π/2 − EVAL_GUARD].
pub const EVAL_GUARD: f64 = 1e-6;
/// Distance below which an energy is considered equal to an eigenvalue.
pub const COLLISION_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

// rounding model used to place the switch between the two representations
const COEFF_REL_ERR: f64 = 1e-14;
const SUM_REL_ERR: f64 = 2.2e-16;
/// The switch point is searched where both series arguments are ≤ 0.9.
const SWITCH_MIN_Z: f64 = 0.1;
const SWITCH_SAMPLES: usize = 33;
/// Error ratio at π/4 above which the switch point moves.
const SWITCH_RATIO: f64 = 10.0;

pub(crate) fn check_guarded(x: f64) -> Result<()> {
    let slack = 1e-15;
    if !(EVAL_GUARD - slack..=FRAC_PI_2 - EVAL_GUARD + slack).contains(&x) {
        return Err(Error::Domain(x));
    }
    Ok(())
}

/// Something that can be sampled as a potential on (0, π/2).
pub trait Potential {
    fn potential(&self, x: f64) -> Result<f64>;
}

impl<F: Fn(f64) -> Result<f64>> Potential for F {
    fn potential(&self, x: f64) -> Result<f64> {
        self(x)
    }
}

/// A real wave function on (0, π/2).
pub trait WaveFunction {
    fn psi(&self, x: f64) -> Result<f64>;
}

impl<F: Fn(f64) -> Result<f64>> WaveFunction for F {
    fn psi(&self, x: f64) -> Result<f64> {
        self(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PTParams {
    lambda: f64,
    nu: f64,
    mu: f64,
}

impl PTParams {
    pub fn new(lambda: f64, nu: f64) -> Result<Self> {
        if !(lambda.is_finite() && nu.is_finite() && lambda > 1.0 && nu > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda and nu must exceed 1 (got lambda = {lambda}, nu = {nu})"
            )));
        }
        Ok(Self {
            lambda,
            nu,
            mu: lambda + nu,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Parameters of the mirrored potential V(π/2 − x).
    pub fn swapped(&self) -> PTParams {
        PTParams {
            lambda: self.nu,
            nu: self.lambda,
            mu: self.mu,
        }
    }

    pub fn potential_value(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x < FRAC_PI_2) {
            return Err(Error::Domain(x));
        }
        let (s, c) = x.sin_cos();
        Ok(self.singular_part(s, c))
    }

    fn singular_part(&self, s: f64, c: f64) -> f64 {
        (self.lambda - 1.0) * self.lambda / (2.0 * s * s)
            + (self.nu - 1.0) * self.nu / (2.0 * c * c)
    }

    pub fn eigen_energy(&self, n: usize) -> f64 {
        let k = self.mu + 2.0 * n as f64;
        k * k / 2.0
    }

    /// Index i with E_{i−1} < ε < E_i (E_{−1} = −∞).
    pub fn band_index(&self, epsilon: f64) -> Result<usize> {
        if !epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "energy {epsilon} is not finite"
            )));
        }
        let mut n = 0;
        loop {
            let e = self.eigen_energy(n);
            if (epsilon - e).abs() < COLLISION_TOL {
                return Err(Error::Collision {
                    energy: epsilon,
                    level: n,
                    eigenvalue: e,
                });
            }
            if epsilon < e {
                return Ok(n);
            }
            n += 1;
        }
    }

    /// Eigenvalue index n with |ε − E_n| < [`COLLISION_TOL`], if any.
    pub fn level_of(&self, epsilon: f64) -> Option<usize> {
        match self.band_index(epsilon) {
            Err(Error::Collision { level, .. }) => Some(level),
            _ => None,
        }
    }

    /// Band bounds (E_{i−1}, E_i) with E_{−1} = −∞.
    pub fn band(&self, i: usize) -> (f64, f64) {
        let lower = if i == 0 {
            f64::NEG_INFINITY
        } else {
            self.eigen_energy(i - 1)
        };
        (lower, self.eigen_energy(i))
    }
}

impl Potential for PTParams {
    fn potential(&self, x: f64) -> Result<f64> {
        self.potential_value(x)
    }
}

pub fn potential_value(params: &PTParams, x: f64) -> Result<f64> {
    params.potential_value(x)
}

pub fn eigen_energy(params: &PTParams, n: usize) -> f64 {
    params.eigen_energy(n)
}

/// Energy and coefficients selecting one solution of the Schrödinger
/// equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedSpec {
    epsilon: Complex64,
    coeff_a: Complex64,
    coeff_b: Complex64,
    q: Option<f64>,
    right: Option<(Complex64, Complex64)>,
    level: Option<(usize, Side)>,
    nodes: Option<usize>,
}

impl SeedSpec {
    pub fn new(epsilon: f64, coeff_a: f64, coeff_b: f64) -> Result<Self> {
        Self::complex(
            Complex64::new(epsilon, 0.0),
            Complex64::new(coeff_a, 0.0),
            Complex64::new(coeff_b, 0.0),
        )
    }

    pub fn complex(epsilon: Complex64, coeff_a: Complex64, coeff_b: Complex64) -> Result<Self> {
        if coeff_a == ZERO && coeff_b == ZERO {
            return Err(Error::InvalidParameter(
                "coefficients (A, B) are both zero".into(),
            ));
        }
        if !(epsilon.re.is_finite() && epsilon.im.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "energy {epsilon} is not finite"
            )));
        }
        Ok(Self {
            epsilon,
            coeff_a,
            coeff_b,
            q: None,
            right: None,
            level: None,
            nodes: None,
        })
    }

    /// The solution A = 1, B = 0, vanishing at x = 0.
    pub fn vanishing_left(epsilon: Complex64) -> Self {
        Self {
            epsilon,
            coeff_a: Complex64::new(1.0, 0.0),
            coeff_b: ZERO,
            q: None,
            right: None,
            level: None,
            nodes: None,
        }
    }

    /// Unnormalized bound state n, expanded around x = 0.
    pub fn physical(params: &PTParams, n: usize) -> Self {
        let e = params.eigen_energy(n);
        let c_right = physical_mirror_ratio(params, n);
        Self {
            epsilon: Complex64::new(e, 0.0),
            coeff_a: Complex64::new(1.0, 0.0),
            coeff_b: ZERO,
            q: None,
            right: Some((Complex64::new(c_right, 0.0), ZERO)),
            level: Some((n, Side::Left)),
            nodes: Some(n),
        }
    }

    pub fn epsilon(&self) -> Complex64 {
        self.epsilon
    }

    pub fn coeff_a(&self) -> Complex64 {
        self.coeff_a
    }

    pub fn coeff_b(&self) -> Complex64 {
        self.coeff_b
    }

    pub fn q(&self) -> Option<f64> {
        self.q
    }

    /// Bound-state index when the seed is an eigenfunction.
    pub fn level(&self) -> Option<usize> {
        self.level.map(|(n, _)| n)
    }

    /// Right-basis coefficients when they are known exactly.
    pub fn right_coefficients(&self) -> Option<(Complex64, Complex64)> {
        self.right
    }

    pub fn scaled(&self, k: f64) -> Self {
        let mut out = *self;
        out.coeff_a *= k;
        out.coeff_b *= k;
        out.right = self.right.map(|(c, d)| (c * k, d * k));
        out
    }
}

/// f_A^{λ,ν} = r · f_A^{ν,λ}(π/2 − x) at the eigenvalue E_n.
fn physical_mirror_ratio(params: &PTParams, n: usize) -> f64 {
    pochhammer(0.5 - params.nu - n as f64, n) / pochhammer(params.lambda + 0.5, n)
}

/// Gamma-ratio constants of the map (A, B) ↦ (Aα₁ + Bβ₁, Aα₂ + Bβ₂) that
/// re-expresses a solution in the basis of the mirrored potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorMap {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl MirrorMap {
    pub fn new(params: &PTParams, epsilon: f64) -> Result<Self> {
        let c = specfun::connection(params, Complex64::new(epsilon, 0.0))?;
        Ok(Self {
            alpha1: c.a1.re,
            alpha2: c.a.re,
            beta1: c.b1.re,
            beta2: c.b.re,
        })
    }

    pub fn apply(&self, coeff_a: f64, coeff_b: f64) -> (f64, f64) {
        (
            coeff_a * self.alpha1 + coeff_b * self.beta1,
            coeff_a * self.alpha2 + coeff_b * self.beta2,
        )
    }
}

/// The seed B = 1, A = −b/a + q.
pub fn seed_from_q(params: &PTParams, epsilon: f64, q: f64) -> Result<SeedSpec> {
    if !q.is_finite() {
        return Err(Error::InvalidParameter(format!("q = {q} is not finite")));
    }
    let eps = Complex64::new(epsilon, 0.0);
    let conn = specfun::connection(params, eps)?;
    if conn.a.re == 0.0 {
        return Err(Error::Pole(epsilon));
    }
    let a = -conn.b.re / conn.a.re + q;
    let coeff_a = Complex64::new(a, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let right = (
        coeff_a * conn.a1 + conn.b1,
        Complex64::new(q * conn.a.re, 0.0),
    );
    let nodes = params
        .band_index(epsilon)
        .ok()
        .map(|i| i + usize::from(q < 0.0));
    Ok(SeedSpec {
        epsilon: eps,
        coeff_a,
        coeff_b: one,
        q: Some(q),
        right: Some(right),
        level: None,
        nodes,
    })
}

/// Re-expresses `seed` for the mirrored parameters (ν, λ): the returned
/// solution evaluated at π/2 − x equals the original one at x.
pub fn mirror(seed: &SeedSpec, params: &PTParams) -> Result<(SeedSpec, PTParams)> {
    let right = match seed.right {
        Some(r) => r,
        None => specfun::connection(params, seed.epsilon)?.apply(seed.coeff_a, seed.coeff_b),
    };
    let out = SeedSpec {
        epsilon: seed.epsilon,
        coeff_a: right.0,
        coeff_b: right.1,
        q: None,
        right: Some((seed.coeff_a, seed.coeff_b)),
        level: seed.level.map(|(n, side)| (n, side.flip())),
        nodes: seed.nodes,
    };
    Ok((out, params.swapped()))
}

/// One basis branch: b = sin^p x cos^q x · φ(x), with φ′ = dφ/dx.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Factored {
    pub p: f64,
    pub q: f64,
    pub phi: Complex64,
    pub dphi: Complex64,
    pub sin: f64,
    pub cos: f64,
}

impl Factored {
    pub fn prefactor(&self) -> f64 {
        self.sin.powf(self.p) * self.cos.powf(self.q)
    }

    fn slope(&self) -> f64 {
        self.p * self.cos / self.sin - self.q * self.sin / self.cos
    }

    pub fn value(&self) -> (Complex64, Complex64) {
        let r = self.prefactor();
        (self.phi * r, (self.phi * self.slope() + self.dphi) * r)
    }

    fn mirrored(self) -> Factored {
        Factored {
            p: self.q,
            q: self.p,
            phi: self.phi,
            dphi: -self.dphi,
            sin: self.cos,
            cos: self.sin,
        }
    }

    fn conj(self) -> Factored {
        Factored {
            phi: self.phi.conj(),
            dphi: self.dphi.conj(),
            ..self
        }
    }
}

/// W(b₁, b₂) with the power-law slopes subtracted analytically, so that
/// the leading endpoint terms never cancel numerically.
fn branch_wronskian(b1: &Factored, b2: &Factored) -> Complex64 {
    let r = b1.prefactor() * b2.prefactor();
    let dslope = (b2.p - b1.p) * b1.cos / b1.sin - (b2.q - b1.q) * b1.sin / b1.cos;
    (b1.phi * b2.phi * dslope + b1.phi * b2.dphi - b2.phi * b1.dphi) * r
}

/// A solution at one point as a combination of at most two basis branches.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Expansion {
    terms: [Option<(Complex64, Factored)>; 2],
    /// estimated absolute rounding error of u
    err: f64,
}

impl Expansion {
    fn terms(&self) -> impl Iterator<Item = &(Complex64, Factored)> {
        self.terms.iter().flatten()
    }

    pub fn value(&self) -> (Complex64, Complex64) {
        self.terms().fold((ZERO, ZERO), |(u, du), (c, b)| {
            let (v, dv) = b.value();
            (u + c * v, du + c * dv)
        })
    }

    fn mirrored(self) -> Expansion {
        Expansion {
            terms: self.terms.map(|t| t.map(|(c, b)| (c, b.mirrored()))),
            ..self
        }
    }

    pub fn conj(&self) -> Expansion {
        Expansion {
            terms: self.terms.map(|t| t.map(|(c, b)| (c.conj(), b.conj()))),
            ..*self
        }
    }
}

/// Expansions of two solutions at x in a common representation, so that
/// their Wronskian is free of cancellation between the two bases.
pub(crate) fn paired_expansions(
    u1: &SchrodingerSolution,
    u2: &SchrodingerSolution,
    x: f64,
) -> Result<(Expansion, Expansion)> {
    let left = u1.switch().or(u2.switch()).map(|s| x <= s);
    Ok((u1.expansion_on(x, left)?, u2.expansion_on(x, left)?))
}

/// u₁u₂′ − u₂u₁′ expanded bilinearly over the basis branches.
pub(crate) fn wronskian(e1: &Expansion, e2: &Expansion) -> Complex64 {
    let mut w = ZERO;
    for (c1, b1) in e1.terms() {
        for (c2, b2) in e2.terms() {
            w += c1 * c2 * branch_wronskian(b1, b2);
        }
    }
    w
}

fn left_parts(
    params: &PTParams,
    s: Complex64,
    coeffs: (Complex64, Complex64),
    uncertainty: (f64, f64),
    level: Option<usize>,
    sin: f64,
    cos: f64,
) -> Result<Expansion> {
    let (lambda, nu, mu) = (params.lambda, params.nu, params.mu);
    let (ca, cb) = coeffs;
    let z = sin * sin;
    let two_sc = 2.0 * sin * cos;
    let mut err = 0.0;
    let mut error_of = |c: Complex64, dc: f64, magnitude: f64, b: &Factored| {
        err += b.prefactor() * magnitude * (dc + SUM_REL_ERR * c.norm());
    };
    let branch_a = if ca != ZERO {
        let (a, b) = match level {
            Some(n) => (
                Complex64::new(mu + n as f64, 0.0),
                Complex64::new(-(n as f64), 0.0),
            ),
            None => (mu / 2.0 + s, mu / 2.0 - s),
        };
        let p = HyperParams2F1::new(a, b, lambda + 0.5, z);
        let ((f, magnitude), fz) = (gauss_2f1_with_magnitude(&p)?, gauss_2f1_derivative(&p)?);
        let b = Factored {
            p: lambda,
            q: nu,
            phi: f,
            dphi: fz * two_sc,
            sin,
            cos,
        };
        error_of(ca, uncertainty.0, magnitude, &b);
        Some((ca, b))
    } else {
        None
    };
    let branch_b = if cb != ZERO {
        let h = (1.0 + nu - lambda) / 2.0;
        let p = HyperParams2F1::new(h + s, h - s, 1.5 - lambda, z);
        let ((f, magnitude), fz) = (gauss_2f1_with_magnitude(&p)?, gauss_2f1_derivative(&p)?);
        let b = Factored {
            p: 1.0 - lambda,
            q: nu,
            phi: f,
            dphi: fz * two_sc,
            sin,
            cos,
        };
        error_of(cb, uncertainty.1, magnitude, &b);
        Some((cb, b))
    } else {
        None
    };
    Ok(Expansion {
        terms: [branch_a, branch_b],
        err,
    })
}

type Coefficients = ((Complex64, Complex64), (f64, f64));

/// π/4 unless one representation is clearly worse there; then the point,
/// between sin²x = 0.1 and 0.9, where the two error estimates cross.
fn switch_point(params: &PTParams, s: Complex64, left: Coefficients, right: Coefficients) -> f64 {
    let swapped = params.swapped();
    let x_lo = SWITCH_MIN_Z.sqrt().asin();
    let x_hi = FRAC_PI_2 - x_lo;
    let estimate = |r: Result<Expansion>| r.map_or(f64::INFINITY, |e| e.err);
    let errors = |x: f64| {
        let (sin, cos) = x.sin_cos();
        (
            estimate(left_parts(params, s, left.0, left.1, None, sin, cos)),
            estimate(left_parts(&swapped, s, right.0, right.1, None, cos, sin)),
        )
    };
    let grid = |k: usize| x_lo + (x_hi - x_lo) * k as f64 / (SWITCH_SAMPLES - 1) as f64;
    let mid = SWITCH_SAMPLES / 2;
    let (e_left, e_right) = errors(FRAC_PI_4);
    if e_left > SWITCH_RATIO * e_right {
        (0..mid)
            .rev()
            .map(grid)
            .find(|&x| {
                let (l, r) = errors(x);
                l <= r
            })
            .unwrap_or(x_lo)
    } else if e_right > SWITCH_RATIO * e_left {
        (mid + 1..SWITCH_SAMPLES)
            .map(grid)
            .find(|&x| {
                let (l, r) = errors(x);
                r <= l
            })
            .unwrap_or(x_hi)
    } else {
        FRAC_PI_4
    }
}

#[derive(Debug, Clone, Copy)]
enum Repr {
    Terminating {
        side: Side,
        n: usize,
        coeff: Complex64,
    },
    General {
        left: (Complex64, Complex64),
        right: (Complex64, Complex64),
        left_err: (f64, f64),
        right_err: (f64, f64),
        // left representation for x ≤ switch
        switch: f64,
    },
}

/// A solution u of −½u″ + Vu = εu with pointwise (u, u′).
#[derive(Debug, Clone)]
pub struct SchrodingerSolution {
    params: PTParams,
    seed: SeedSpec,
    s: Complex64,
    repr: Repr,
    left_exponent: f64,
    right_exponent: f64,
    node_count: Option<usize>,
}

pub fn general_solution(params: &PTParams, seed: SeedSpec) -> Result<SchrodingerSolution> {
    let s = specfun::half_root(seed.epsilon);
    let (lambda, nu) = (params.lambda, params.nu);
    let repr = match seed.level {
        Some((n, Side::Left)) => Repr::Terminating {
            side: Side::Left,
            n,
            coeff: seed.coeff_a,
        },
        Some((n, Side::Right)) => {
            let coeff = seed.right.map_or(seed.coeff_a, |r| r.0);
            Repr::Terminating {
                side: Side::Right,
                n,
                coeff,
            }
        }
        None => {
            let left = (seed.coeff_a, seed.coeff_b);
            let left_err = (COEFF_REL_ERR * left.0.norm(), COEFF_REL_ERR * left.1.norm());
            let (right, right_err) = match seed.right {
                Some(r) => (r, (COEFF_REL_ERR * r.0.norm(), COEFF_REL_ERR * r.1.norm())),
                None => {
                    let c = specfun::connection(params, seed.epsilon)?;
                    let (ca, cb) = left;
                    let err = (
                        COEFF_REL_ERR * ((ca * c.a1).norm() + (cb * c.b1).norm()),
                        COEFF_REL_ERR * ((ca * c.a).norm() + (cb * c.b).norm()),
                    );
                    (c.apply(ca, cb), err)
                }
            };
            let switch = switch_point(params, s, (left, left_err), (right, right_err));
            Repr::General {
                left,
                right,
                left_err,
                right_err,
                switch,
            }
        }
    };
    let (left_exponent, right_exponent) = match repr {
        Repr::Terminating { .. } => (lambda, nu),
        Repr::General { left, right, .. } => (
            if left.1 == ZERO { lambda } else { 1.0 - lambda },
            if right.1 == ZERO { nu } else { 1.0 - nu },
        ),
    };
    let node_count = if seed.nodes.is_some() {
        seed.nodes
    } else if seed.epsilon.im == 0.0 {
        let e = seed.epsilon.re;
        let vanishing = match repr {
            Repr::General { left, right, .. } => left.1 == ZERO || right.1 == ZERO,
            Repr::Terminating { .. } => true,
        };
        if vanishing {
            params.level_of(e).or_else(|| params.band_index(e).ok())
        } else {
            None
        }
    } else {
        None
    };
    Ok(SchrodingerSolution {
        params: *params,
        seed,
        s,
        repr,
        left_exponent,
        right_exponent,
        node_count,
    })
}

/// Normalized bound state ψ_n, positive near x = 0.
pub fn eigenfunction(params: &PTParams, n: usize) -> Result<SchrodingerSolution> {
    let raw = general_solution(params, SeedSpec::physical(params, n))?;
    let norm2 = raw.norm_squared()?;
    general_solution(
        params,
        SeedSpec::physical(params, n).scaled(1.0 / norm2.sqrt()),
    )
}

impl SchrodingerSolution {
    pub fn params(&self) -> &PTParams {
        &self.params
    }

    pub fn seed(&self) -> &SeedSpec {
        &self.seed
    }

    pub fn epsilon(&self) -> Complex64 {
        self.seed.epsilon
    }

    /// Real part of the factorization energy.
    pub fn energy(&self) -> f64 {
        self.seed.epsilon.re
    }

    pub fn is_real(&self) -> bool {
        self.seed.epsilon.im == 0.0
    }

    /// Power of sin x as x → 0: λ or 1 − λ.
    pub fn left_exponent(&self) -> f64 {
        self.left_exponent
    }

    /// Power of cos x as x → π/2: ν or 1 − ν.
    pub fn right_exponent(&self) -> f64 {
        self.right_exponent
    }

    pub fn exponents(&self) -> (f64, f64) {
        (self.left_exponent, self.right_exponent)
    }

    /// True when u vanishes at both endpoints.
    pub fn is_physical(&self) -> bool {
        self.left_exponent > 0.0 && self.right_exponent > 0.0
    }

    /// Analytic node count, when known from the construction.
    pub fn node_count(&self) -> Option<usize> {
        self.node_count
    }

    pub(crate) fn expansion(&self, x: f64) -> Result<Expansion> {
        self.expansion_on(x, None)
    }

    fn switch(&self) -> Option<f64> {
        match self.repr {
            Repr::General { switch, .. } => Some(switch),
            Repr::Terminating { .. } => None,
        }
    }

    /// `left` forces the representation of a general solution.
    fn expansion_on(&self, x: f64, left: Option<bool>) -> Result<Expansion> {
        check_guarded(x)?;
        let (sin, cos) = x.sin_cos();
        let swapped = self.params.swapped();
        match self.repr {
            Repr::Terminating {
                side: Side::Left,
                n,
                coeff,
            } => left_parts(
                &self.params,
                self.s,
                (coeff, ZERO),
                (0.0, 0.0),
                Some(n),
                sin,
                cos,
            ),
            Repr::Terminating {
                side: Side::Right,
                n,
                coeff,
            } => Ok(left_parts(
                &swapped,
                self.s,
                (coeff, ZERO),
                (0.0, 0.0),
                Some(n),
                cos,
                sin,
            )?
            .mirrored()),
            Repr::General {
                left: l,
                right,
                left_err,
                right_err,
                switch,
            } => {
                if left.unwrap_or(x <= switch) {
                    left_parts(&self.params, self.s, l, left_err, None, sin, cos)
                } else {
                    Ok(left_parts(&swapped, self.s, right, right_err, None, cos, sin)?.mirrored())
                }
            }
        }
    }

    /// (u(x), u′(x)).
    pub fn eval_complex(&self, x: f64) -> Result<(Complex64, Complex64)> {
        Ok(self.expansion(x)?.value())
    }

    /// Real parts of (u(x), u′(x)).
    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let (u, du) = self.eval_complex(x)?;
        Ok((u.re, du.re))
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x)?.0)
    }

    /// u″ = 2(V − ε)u.
    pub fn second_derivative(&self, x: f64) -> Result<Complex64> {
        let (u, _) = self.eval_complex(x)?;
        Ok(u * 2.0 * (self.params.potential_value(x)? - self.seed.epsilon))
    }

    /// ∫₀^{π/2} |u|², or a divergence error when u is not square integrable.
    pub fn norm_squared(&self) -> Result<f64> {
        let g = |x: f64| Ok(self.eval_complex(x)?.0.norm_sqr());
        quad::integrate_open(&g, (2.0 * self.left_exponent, 2.0 * self.right_exponent))
    }

    /// The same function expressed for the mirrored parameters (ν, λ).
    pub fn mirrored(&self) -> Result<SchrodingerSolution> {
        let (seed, params) = mirror(&self.seed, &self.params)?;
        general_solution(&params, seed)
    }
}

impl WaveFunction for SchrodingerSolution {
    fn psi(&self, x: f64) -> Result<f64> {
        self.value(x)
    }
}

const NODE_END_SCAN: f64 = 0.01;

/// Interior zeros of a real solution, refined by bisection to 1e-12.
pub fn node_positions(sol: &SchrodingerSolution, grid_points: usize) -> Result<Vec<f64>> {
    if !sol.is_real() {
        return Err(Error::InvalidParameter(
            "node counting needs a real energy".into(),
        ));
    }
    if grid_points < 1000 {
        return Err(Error::InvalidParameter(format!(
            "node scan needs at least 1000 grid points (got {grid_points})"
        )));
    }
    let f = |x: f64| sol.value(x);
    scan_sign_changes(&f, grid_points)
}

pub(crate) fn scan_grid(grid_points: usize) -> Vec<f64> {
    let (lo, hi) = (EVAL_GUARD, FRAC_PI_2 - EVAL_GUARD);
    let mut xs = Vec::with_capacity(grid_points + 200);
    let mut t = EVAL_GUARD;
    let mut ends = Vec::new();
    while t < NODE_END_SCAN {
        ends.push(t);
        t *= 1.5;
    }
    xs.extend(ends.iter().copied());
    let (a, b) = (NODE_END_SCAN, FRAC_PI_2 - NODE_END_SCAN);
    for k in 0..grid_points {
        xs.push(a + (b - a) * k as f64 / (grid_points - 1) as f64);
    }
    xs.extend(ends.iter().rev().map(|t| FRAC_PI_2 - t));
    xs[0] = lo;
    *xs.last_mut().unwrap() = hi;
    xs
}

pub(crate) fn scan_sign_changes<F: Fn(f64) -> Result<f64>>(
    f: &F,
    grid_points: usize,
) -> Result<Vec<f64>> {
    let xs = scan_grid(grid_points);
    let vals = xs.iter().map(|&x| f(x)).collect::<Result<Vec<f64>>>()?;
    let mut nodes = Vec::new();
    for k in 0..xs.len() - 1 {
        let (v0, v1) = (vals[k], vals[k + 1]);
        if v0 == 0.0 && k > 0 {
            continue;
        }
        if v0 * v1 < 0.0 || (v1 == 0.0 && k + 2 < xs.len() && v0 * vals[k + 2] < 0.0) {
            nodes.push(bisect(f, xs[k], xs[k + 1], v0)?);
        }
    }
    for k in 1..xs.len() - 1 {
        let (l, m, r) = (vals[k - 1].abs(), vals[k].abs(), vals[k + 1].abs());
        let same_sign = vals[k - 1] * vals[k + 1] > 0.0 && vals[k] * vals[k - 1] >= 0.0;
        if same_sign && m <= l && m <= r && m < 1e-12 * l.max(r) {
            return Err(Error::Inconclusive(xs[k]));
        }
    }
    Ok(nodes)
}

fn bisect<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64> {
    while b - a > 1e-12 {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    Ok(0.5 * (a + b))
}

pub fn count_nodes(sol: &SchrodingerSolution, grid_points: usize) -> Result<usize> {
    Ok(node_positions(sol, grid_points)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(l: f64, n: f64) -> PTParams {
        PTParams::new(l, n).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    /// max over an interior grid of |−½u″ + Vu − εu| / (1 + (|ε| + |V|)·U),
    /// U = √(u² + u′²/k²) the local envelope; u″ by central differences of
    /// the analytic u′ with each stencil inside one representation
    fn schrodinger_residual(sol: &SchrodingerSolution, points: usize) -> f64 {
        let p = sol.params();
        let eps = sol.epsilon();
        let mut worst: f64 = 0.0;
        for k in 1..=points {
            let x = 0.01 + (FRAC_PI_2 - 0.02) * k as f64 / (points + 1) as f64;
            let side = sol.switch().map(|s| x <= s);
            let du = |t: f64| sol.expansion_on(t, side).unwrap().value().1;
            let h = (1e-3 * x.min(FRAC_PI_2 - x)).min(5e-4);
            let d2 = (du(x - 2.0 * h) - du(x - h) * 8.0 + du(x + h) * 8.0 - du(x + 2.0 * h))
                / (12.0 * h);
            let (u, du0) = sol.eval_complex(x).unwrap();
            let v = p.potential_value(x).unwrap();
            let r = (-d2 * 0.5 + u * v - u * eps).norm();
            let k2 = 2.0 * (eps - v).norm() + 1.0;
            let envelope = (u.norm_sqr() + du0.norm_sqr() / k2).sqrt();
            worst = worst.max(r / (1.0 + (eps.norm() + v.abs()) * envelope));
        }
        worst
    }

    #[test]
    fn representations_agree_at_switch() {
        let p = pt(6.761477243874101, 3.776282772656982);
        for (eps, a, b) in [
            (189.646, 0.0, -0.167),
            (19.0, 1.0, 0.0),
            (-46.0, 0.3, 1.0),
            (115.52, 0.2, -1.0),
        ] {
            let u = general_solution(&p, SeedSpec::new(eps, a, b).unwrap()).unwrap();
            let x = u.switch().unwrap();
            let (l, r) = (
                u.expansion_on(x, Some(true)).unwrap(),
                u.expansion_on(x, Some(false)).unwrap(),
            );
            let scale = l.err.max(r.err);
            assert!(
                (l.value().0 - r.value().0).norm() <= 10.0 * scale,
                "eps={eps}"
            );
        }
    }

    #[test]
    fn params_validation() {
        assert!(PTParams::new(1.0, 3.0).is_err());
        assert!(PTParams::new(3.0, 0.5).is_err());
        assert!(PTParams::new(f64::NAN, 3.0).is_err());
        assert_eq!(pt(3.0, 4.0).mu(), 7.0);
    }

    #[test]
    fn potential_examples() {
        let x = FRAC_PI_2 / 2.0;
        assert!(rel(pt(3.0, 4.0).potential_value(x).unwrap(), 18.0) < 1e-14);
        assert!(rel(pt(2.0, 2.0).potential_value(x).unwrap(), 4.0) < 1e-14);
        let want = 20.0 / (2.0 * 0.3f64.sin().powi(2)) + 56.0 / (2.0 * 0.3f64.cos().powi(2));
        assert!(rel(pt(5.0, 8.0).potential_value(0.3).unwrap(), want) < 1e-15);
        assert!(matches!(
            pt(3.0, 4.0).potential_value(0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            pt(3.0, 4.0).potential_value(FRAC_PI_2),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn eigen_energy_examples() {
        assert_eq!(pt(3.0, 4.0).eigen_energy(0), 24.5);
        assert_eq!(pt(5.0, 8.0).eigen_energy(2), 144.5);
        assert_eq!(pt(5.0, 8.0).eigen_energy(3), 180.5);
        assert_eq!(pt(5.0, 8.0).eigen_energy(0), 84.5);
    }

    #[test]
    fn band_lookup() {
        let p = pt(5.0, 8.0);
        assert_eq!(p.band_index(10.0).unwrap(), 0);
        assert_eq!(p.band_index(115.52).unwrap(), 2);
        assert_eq!(p.band_index(169.28).unwrap(), 3);
        assert!(matches!(
            p.band_index(144.5),
            Err(Error::Collision { level: 2, .. })
        ));
        assert_eq!(p.level_of(180.5), Some(3));
    }

    #[test]
    fn eigenfunction_normalized_with_nodes() {
        for (l, n) in [(3.0, 4.0), (5.0, 8.0), (2.5, 1.7)] {
            let p = pt(l, n);
            for k in 0..5 {
                let psi = eigenfunction(&p, k).unwrap();
                assert!((psi.norm_squared().unwrap() - 1.0).abs() < 1e-10);
                assert_eq!(count_nodes(&psi, 2000).unwrap(), k);
                assert_eq!(psi.node_count(), Some(k));
                assert!(psi.value(0.01).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn eigenfunction_normalization_closed_form() {
        // N² = 2(μ+2n)Γ(μ+n)(λ+½)_n / (n!(ν+½)_n Γ(λ+½)Γ(ν+½))
        for (l, nu, n) in [(3.0, 4.0, 0usize), (3.0, 4.0, 2), (5.0, 8.0, 3)] {
            let p = pt(l, nu);
            let mu = l + nu;
            let nf = n as f64;
            let ln_n2 = (2.0 * (mu + 2.0 * nf)).ln()
                + specfun::ln_gamma(mu + nf).unwrap()
                + pochhammer(l + 0.5, n).ln()
                - specfun::ln_gamma(nf + 1.0).unwrap()
                - pochhammer(nu + 0.5, n).ln()
                - specfun::ln_gamma(l + 0.5).unwrap()
                - specfun::ln_gamma(nu + 0.5).unwrap();
            let psi = eigenfunction(&p, n).unwrap();
            let x: f64 = 0.4;
            let (s, c) = x.sin_cos();
            let f = crate::specfun::gauss_2f1(&HyperParams2F1::real(-nf, mu + nf, l + 0.5, s * s))
                .unwrap()
                .re;
            let want = ln_n2.exp().sqrt() * s.powf(l) * c.powf(nu) * f;
            assert!(rel(psi.value(x).unwrap(), want) < 1e-10, "n={n}");
        }
    }

    #[test]
    fn eigenfunction_satisfies_equation() {
        let psi = eigenfunction(&pt(3.0, 4.0), 2).unwrap();
        assert!(schrodinger_residual(&psi, 400) < 1e-6);
    }

    #[test]
    fn general_solution_matches_reference() {
        // 30-digit mpmath values of f_A and f_B for λ=5, ν=8
        let p = pt(5.0, 8.0);
        let fa = general_solution(&p, SeedSpec::new(115.52, 1.0, 0.0).unwrap()).unwrap();
        let fb = general_solution(&p, SeedSpec::new(115.52, 0.0, 1.0).unwrap()).unwrap();
        let cases = [
            (0.3, 0.001_182_834_450_415_497_7, 438.105_869_931_530_2),
            (1.2, 0.003_825_575_642_951_986, 1_164.309_561_349_164_1),
            (1.5, 145.261_629_937_316_83, 41_296_988.579_212_97),
        ];
        for (x, a, b) in cases {
            assert!(rel(fa.value(x).unwrap(), a) < 1e-10, "f_A at {x}");
            assert!(rel(fb.value(x).unwrap(), b) < 1e-10, "f_B at {x}");
        }

        let eps = Complex64::new(176.344, 1.5);
        let one = Complex64::new(1.0, 0.0);
        let fa = general_solution(&p, SeedSpec::complex(eps, one, ZERO).unwrap()).unwrap();
        let fb = general_solution(&p, SeedSpec::complex(eps, ZERO, one).unwrap()).unwrap();
        let cases = [
            (
                0.3,
                Complex64::new(0.000_652_795_915_234_308_8, -0.000_010_174_742_115_782_696),
                Complex64::new(700.747_393_045_279, 0.220_637_117_006_745_5),
            ),
            (
                1.2,
                Complex64::new(-0.000_710_673_713_280_590_1, 0.000_163_392_084_775_564_36),
                Complex64::new(1_354.337_791_132_998_5, 110.841_872_252_142_18),
            ),
            (
                1.5,
                Complex64::new(-6.704_001_683_233_609, 2.784_293_348_195_062),
                Complex64::new(22_231_456.485_554_516, 724_926.912_421_790_2),
            ),
        ];
        for (x, a, b) in cases {
            let (ua, _) = fa.eval_complex(x).unwrap();
            let (ub, _) = fb.eval_complex(x).unwrap();
            assert!(
                (ua - a).norm() / a.norm() < 1e-9,
                "complex f_A at {x}: {ua}"
            );
            assert!(
                (ub - b).norm() / b.norm() < 1e-9,
                "complex f_B at {x}: {ub}"
            );
        }
    }

    #[test]
    fn general_solution_exponents() {
        let p = pt(3.0, 4.0);
        let a = general_solution(&p, SeedSpec::new(19.0, 1.0, 0.0).unwrap()).unwrap();
        assert_eq!(a.left_exponent(), 3.0);
        assert_eq!(a.right_exponent(), -3.0);
        let b = general_solution(&p, SeedSpec::new(19.0, 0.0, 1.0).unwrap()).unwrap();
        assert_eq!(b.left_exponent(), -2.0);
        let x = 1e-5;
        let ratio = b.value(x).unwrap() / x.sin().powf(-2.0);
        assert!((ratio - 1.0).abs() < 1e-8);
        let ratio = a.value(x).unwrap() / x.sin().powf(3.0);
        assert!((ratio - 1.0).abs() < 1e-8);
    }

    #[test]
    fn vanishing_seed_at_eigenvalue_is_bound_state() {
        let p = pt(3.0, 4.0);
        let e2 = p.eigen_energy(2);
        let u = general_solution(&p, SeedSpec::new(e2, 1.0, 0.0).unwrap()).unwrap();
        assert_eq!(u.right_exponent(), 4.0);
        let psi = eigenfunction(&p, 2).unwrap();
        let k = u.value(0.3).unwrap() / psi.value(0.3).unwrap();
        for x in [0.1, 0.7, 1.0, 1.4] {
            assert!(rel(u.value(x).unwrap(), k * psi.value(x).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn q_seed_node_examples() {
        let p = pt(3.0, 4.0);
        let up = general_solution(&p, seed_from_q(&p, 19.0, 1.0).unwrap()).unwrap();
        assert_eq!(count_nodes(&up, 2000).unwrap(), 0);
        let down = general_solution(&p, seed_from_q(&p, 19.0, -1.0).unwrap()).unwrap();
        assert_eq!(count_nodes(&down, 2000).unwrap(), 1);

        let p = pt(5.0, 8.0);
        let u = general_solution(&p, seed_from_q(&p, 115.52, -1.0).unwrap()).unwrap();
        assert_eq!(u.node_count(), Some(3));
        assert_eq!(count_nodes(&u, 2000).unwrap(), 3);
        assert!(matches!(seed_from_q(&p, 144.5, 1.0), Err(Error::Pole(_))));
    }

    #[test]
    fn q_seed_divergence_coefficient() {
        let p = pt(5.0, 8.0);
        let q = 0.7;
        let seed = seed_from_q(&p, 128.0, q).unwrap();
        let ab = specfun::ab_coefficients(&p, 128.0).unwrap();
        assert_eq!(seed.coeff_b(), Complex64::new(1.0, 0.0));
        assert!(rel(seed.coeff_a().re, -ab.b_coef / ab.a_coef + q) < 1e-14);
        let u = general_solution(&p, seed).unwrap();
        let t = 1e-4;
        let x = FRAC_PI_2 - t;
        let lead = u.value(x).unwrap() / t.sin().powf(1.0 - 8.0);
        assert!(rel(lead, q * ab.a_coef) < 1e-5);
    }

    #[test]
    fn residuals_of_constructed_solutions() {
        let p = pt(5.0, 8.0);
        let seeds = [
            seed_from_q(&p, 115.52, 1.0).unwrap(),
            seed_from_q(&p, 128.0, -1.0).unwrap(),
            SeedSpec::new(147.92, 1.0, 0.0).unwrap(),
            SeedSpec::new(-30.0, 0.4, 1.3).unwrap(),
            SeedSpec::complex(Complex64::new(176.344, 1.5), Complex64::new(1.0, 0.0), ZERO)
                .unwrap(),
        ];
        for seed in seeds {
            let u = general_solution(&p, seed).unwrap();
            let r = schrodinger_residual(&u, 2000);
            assert!(r < 1e-6, "residual {r} for {:?}", seed.epsilon());
        }
    }

    #[test]
    fn wronskian_is_constant() {
        let p = pt(5.0, 8.0);
        for eps in [19.0, 115.52, 300.0] {
            let u1 = general_solution(&p, SeedSpec::new(eps, 1.0, 0.0).unwrap()).unwrap();
            let u2 = general_solution(&p, SeedSpec::new(eps, 0.3, 1.0).unwrap()).unwrap();
            let w = |x: f64| {
                let (e1, e2) = paired_expansions(&u1, &u2, x).unwrap();
                wronskian(&e1, &e2).re
            };
            let w0 = w(0.5);
            for k in 1..200 {
                let x = 0.02 + 1.53 * k as f64 / 200.0;
                assert!(rel(w(x), w0) < 1e-8, "eps={eps} x={x} {} {}", w(x), w0);
            }
        }
    }

    #[test]
    fn mirror_examples() {
        let p = pt(3.0, 3.0);
        let seed = SeedSpec::new(10.0, 1.0, 0.0).unwrap();
        let (m, q) = mirror(&seed, &p).unwrap();
        let (back, q2) = mirror(&m, &q).unwrap();
        assert_eq!(q2, p);
        assert_eq!(back.coeff_a(), seed.coeff_a());
        assert_eq!(back.coeff_b(), seed.coeff_b());

        let p = pt(5.0, 8.0);
        let seed = seed_from_q(&p, 115.52, 1.0).unwrap();
        let u = general_solution(&p, seed).unwrap();
        let (ms, mp) = mirror(&seed, &p).unwrap();
        let v = general_solution(&mp, ms).unwrap();
        assert_eq!(v.left_exponent(), u.right_exponent());
        assert_eq!(v.right_exponent(), u.left_exponent());
        let scale = v.value(FRAC_PI_2 - 0.4).unwrap() / u.value(0.4).unwrap();
        for k in 0..50 {
            let x = 0.02 + 1.53 * k as f64 / 49.0;
            let got = v.value(FRAC_PI_2 - x).unwrap();
            let want = scale * u.value(x).unwrap();
            assert!(
                (got - want).abs() <= 1e-9 * want.abs().max(1e-3 * u.value(0.4).unwrap().abs())
            );
        }
    }

    #[test]
    fn mirror_map_is_an_involution() {
        // M(ν, λ) · M(λ, ν) = identity
        for (l, n, e) in [
            (3.0, 4.0, 19.0),
            (5.0, 8.0, 115.52),
            (3.0, 3.0, 10.0),
            (5.0, 8.0, -7.0),
        ] {
            let p = pt(l, n);
            let m1 = MirrorMap::new(&p, e).unwrap();
            let m2 = MirrorMap::new(&p.swapped(), e).unwrap();
            let (c, d) = m1.apply(0.3, 1.1);
            let (a, b) = m2.apply(c, d);
            let norm = |m: &MirrorMap| {
                [m.alpha1, m.alpha2, m.beta1, m.beta2]
                    .iter()
                    .fold(0.0f64, |acc, v| acc.max(v.abs()))
            };
            let tol = 1e-14 * (1.0 + norm(&m1) * norm(&m2));
            assert!(
                (a - 0.3).abs() < tol && (b - 1.1).abs() < tol,
                "{a} {b} tol {tol}"
            );
        }
    }

    #[test]
    fn mirrored_eigenfunction_is_the_mirrored_state() {
        let p = pt(5.0, 8.0);
        for n in 0..4 {
            let psi = eigenfunction(&p, n).unwrap();
            let m = psi.mirrored().unwrap();
            let other = eigenfunction(&p.swapped(), n).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            for x in [0.1, 0.6, 1.3] {
                assert!(rel(m.value(x).unwrap(), psi.value(FRAC_PI_2 - x).unwrap()) < 1e-12);
                assert!(rel(m.value(x).unwrap(), sign * other.value(x).unwrap()) < 1e-10);
            }
        }
    }

    #[test]
    fn vanishing_seed_node_count() {
        let p = pt(5.0, 8.0);
        for (e, want) in [(50.0, 0usize), (100.0, 1), (130.0, 2), (160.0, 3)] {
            let u = general_solution(&p, SeedSpec::new(e, 1.0, 0.0).unwrap()).unwrap();
            assert_eq!(u.node_count(), Some(want));
            assert_eq!(count_nodes(&u, 2000).unwrap(), want, "eps={e}");
        }
    }

    #[test]
    fn evaluator_guard() {
        let psi = eigenfunction(&pt(3.0, 4.0), 0).unwrap();
        assert!(matches!(psi.value(1e-7), Err(Error::Domain(_))));
        assert!(psi.value(EVAL_GUARD).is_ok());
        assert!(psi.value(FRAC_PI_2 - EVAL_GUARD).is_ok());
    }

    #[test]
    fn node_scan_rejects_touching_zero() {
        let x0 = scan_grid(1001)[500];
        let f = |x: f64| Ok((x - x0) * (x - x0));
        assert!(matches!(
            scan_sign_changes(&f, 1001),
            Err(Error::Inconclusive(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn node_rule(i in 0usize..4, frac in 0.05f64..0.95, q_abs in 0.2f64..5.0, up in any::<bool>(),
                     l in 2.2f64..6.0, n in 2.2f64..6.0) {
            let p = pt(l, n);
            let (lo, hi) = p.band(i);
            let lo = if lo.is_finite() { lo } else { hi - 60.0 };
            let eps = lo + frac * (hi - lo);
            let q = if up { q_abs } else { -q_abs };
            let u = general_solution(&p, seed_from_q(&p, eps, q).unwrap()).unwrap();
            let want = i + usize::from(!up);
            prop_assert_eq!(u.node_count(), Some(want));
            prop_assert_eq!(count_nodes(&u, 2000).unwrap(), want);
        }

        #[test]
        fn energies_increase_with_spacing(l in 1.01f64..10.0, n in 1.01f64..10.0, k in 0usize..30) {
            let p = pt(l, n);
            let gap = p.eigen_energy(k + 1) - p.eigen_energy(k);
            prop_assert!(gap > 0.0);
            let want = 2.0 * p.mu() + 4.0 * k as f64 + 2.0;
            prop_assert!((gap - want).abs() <= 1e-12 * want);
        }

        #[test]
        fn residual_of_random_seed(l in 2.0f64..10.0, n in 2.0f64..10.0, eps in -100.0f64..250.0,
                                   a in -2.0f64..2.0, b in -2.0f64..2.0) {
            prop_assume!(a.abs() + b.abs() > 0.1);
            prop_assume!(((l - 0.5) - (l - 0.5).round()).abs() > 1e-3);
            prop_assume!(((n - 0.5) - (n - 0.5).round()).abs() > 1e-3);
            let p = pt(l, n);
            let u = general_solution(&p, SeedSpec::new(eps, a, b).unwrap()).unwrap();
            prop_assert!(schrodinger_residual(&u, 2000) < 1e-6);
        }
    }
}
