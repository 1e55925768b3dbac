//! Second-order transformations built from a transformation function w:
//!
//! ```text
//! real pair      w = W(u₁, u₂),                 w′ = 2(ε₁ − ε₂)u₁u₂
//! complex        w = W(u, ū) / (2(ε − ε̄)),      w′ = |u|²
//! confluent      w = w₀ + ∫_{x₀}^x u²,           w′ = u²
//!
//! η = w′/w,   Ṽ = V − η′,   γ = η′/2 + η²/2 − 2V + d
//! ψ̃_n = ½(ψ_n″ − ηψ_n′ + γψ_n) / √|(E_n − ε₁)(E_n − ε₂)|
//! ```
//!
//! Near an endpoint w behaves as a power of sin x (or cos x); that power
//! fixes the new singular coefficient of Ṽ and decides which missing states
//! are normalizable.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::partner::{
    check_nodeless, MissingState, PartnerPotential, PredictedSpectrum, StateFunction,
};
use crate::pt::{
    eigenfunction, general_solution, paired_expansions, seed_from_q, wronskian, PTParams,
    Potential, SchrodingerSolution, SeedSpec, Side, COLLISION_TOL, EVAL_GUARD,
};
use crate::quad::{power_tail, CumulativeIntegral, Integrand};
use crate::specfun::{self, f32_series_with_magnitude, MAX_TERMS};

const NODELESS_POINTS: usize = 4000;
const NODELESS_FLOOR: f64 = 1e-13;
/// |w| below this multiple of |w′|·dist(x, ends) counts as a zero of w.
const SINGULAR_REL: f64 = 1e-14;
/// Relative size below which a confluent integration constant is zero.
const CONSTANT_SNAP: f64 = 1e-12;
/// Largest sin²x at which the confluent series is attempted.
const CLOSED_FORM_MAX_Z: f64 = 0.95;
/// Σ|terms| / |sum| of the double series above which the closed form gives up.
const CLOSED_FORM_MAX_CANCELLATION: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    Real,
    Complex,
    Confluent,
}

/// Factorization energies with d = ε₁ + ε₂ and c = ((ε₁ − ε₂)/2)².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationPair {
    eps1: Complex64,
    eps2: Complex64,
}

impl FactorizationPair {
    pub fn real(eps1: f64, eps2: f64) -> Result<Self> {
        if (eps1 - eps2).abs() < COLLISION_TOL {
            return Err(Error::InvalidParameter(format!(
                "real pair needs distinct energies (got {eps1}, {eps2})"
            )));
        }
        Ok(Self {
            eps1: eps1.into(),
            eps2: eps2.into(),
        })
    }

    pub fn complex(epsilon: Complex64) -> Result<Self> {
        if epsilon.im == 0.0 {
            return Err(Error::InvalidParameter(
                "complex pair needs Im(epsilon) != 0".into(),
            ));
        }
        Ok(Self {
            eps1: epsilon,
            eps2: epsilon.conj(),
        })
    }

    pub fn confluent(epsilon: f64) -> Self {
        Self {
            eps1: epsilon.into(),
            eps2: epsilon.into(),
        }
    }

    pub fn eps1(&self) -> Complex64 {
        self.eps1
    }

    pub fn eps2(&self) -> Complex64 {
        self.eps2
    }

    pub fn d(&self) -> f64 {
        (self.eps1 + self.eps2).re
    }

    pub fn c(&self) -> f64 {
        let h = (self.eps1 - self.eps2) / 2.0;
        (h * h).re
    }

    pub fn kind(&self) -> PairKind {
        if self.eps1 == self.eps2 {
            PairKind::Confluent
        } else if self.eps1.im != 0.0 {
            PairKind::Complex
        } else {
            PairKind::Real
        }
    }

    /// |(E − ε₁)(E − ε₂)|.
    fn gap_product(&self, e: f64) -> f64 {
        ((e - self.eps1) * (e - self.eps2)).norm()
    }
}

/// (W, W′, W″) of two real solutions at distinct energies.
#[derive(Debug, Clone)]
pub struct WronskianPair {
    u1: SchrodingerSolution,
    u2: SchrodingerSolution,
}

pub fn wronskian_pair(u1: &SchrodingerSolution, u2: &SchrodingerSolution) -> Result<WronskianPair> {
    if !(u1.is_real() && u2.is_real()) {
        return Err(Error::InvalidParameter(
            "real-pair seeds need real energies".into(),
        ));
    }
    if (u1.energy() - u2.energy()).abs() < COLLISION_TOL {
        return Err(Error::InvalidParameter(
            "real-pair seeds need distinct energies".into(),
        ));
    }
    Ok(WronskianPair {
        u1: u1.clone(),
        u2: u2.clone(),
    })
}

impl WronskianPair {
    pub fn eval(&self, x: f64) -> Result<(f64, f64, f64)> {
        let (e1, e2) = paired_expansions(&self.u1, &self.u2, x)?;
        let w = wronskian(&e1, &e2).re;
        let ((u1, du1), (u2, du2)) = (e1.value(), e2.value());
        let de = 2.0 * (self.u1.energy() - self.u2.energy());
        Ok((
            w,
            de * u1.re * u2.re,
            de * (du1.re * u2.re + u1.re * du2.re),
        ))
    }

    /// Exponents of W at x → 0 and x → π/2.
    pub fn exponents(&self) -> (f64, f64) {
        let (a, b) = (self.u1.exponents(), self.u2.exponents());
        (product_exponent(a.0, b.0), product_exponent(a.1, b.1))
    }
}

/// Power of W(f, g) when f ~ t^p and g ~ t^q.
fn product_exponent(p: f64, q: f64) -> f64 {
    if p == q {
        2.0 * p + 1.0
    } else {
        p + q - 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfluentMethod {
    Quadrature,
    /// Term-by-term ₃F₂ series for a seed regular at x = 0 anchored there.
    ClosedForm,
}

/// w(x) = w₀ + ∫_{x₀}^x u² for a real seed.
#[derive(Debug, Clone)]
pub struct ConfluentW {
    seed: SchrodingerSolution,
    w0: f64,
    x0: f64,
    integral: CumulativeIntegral,
    tails: (Option<f64>, Option<f64>),
    // w = k_left + ∫_0^x u²  and  w = k_right − ∫_x^{π/2} u²
    k_left: Option<f64>,
    k_right: Option<f64>,
    interior: f64,
    closed_scale: Option<f64>,
}

pub fn confluent_w(
    params: &PTParams,
    u: &SchrodingerSolution,
    w0: f64,
    x0: f64,
    method: ConfluentMethod,
) -> Result<ConfluentW> {
    if u.params() != params {
        return Err(Error::InvalidParameter(
            "seed belongs to different parameters".into(),
        ));
    }
    ConfluentW::new(u.clone(), w0, x0, method)
}

impl ConfluentW {
    fn new(seed: SchrodingerSolution, w0: f64, x0: f64, method: ConfluentMethod) -> Result<Self> {
        if !seed.is_real() {
            return Err(Error::InvalidParameter(
                "confluent seeds need a real energy".into(),
            ));
        }
        if !w0.is_finite() {
            return Err(Error::InvalidParameter(format!("w0 = {w0} is not finite")));
        }
        let (lo, hi) = (EVAL_GUARD, FRAC_PI_2 - EVAL_GUARD);
        if !(x0 == 0.0 || x0 == FRAC_PI_2 || (lo..=hi).contains(&x0)) {
            return Err(Error::Domain(x0));
        }
        let s = seed.clone();
        let f: Integrand = Arc::new(move |x| Ok(s.value(x)?.powi(2)));
        let integral = CumulativeIntegral::new(f, lo, hi)?;
        let (pl, pr) = seed.exponents();
        let tail = |p: f64, x: f64, endpoint: f64| -> Result<Option<f64>> {
            if 2.0 * p > -1.0 {
                Ok(Some(power_tail(
                    EVAL_GUARD,
                    seed.value(x)?.powi(2),
                    2.0 * p,
                    endpoint,
                )?))
            } else {
                Ok(None)
            }
        };
        let tails = (tail(pl, lo, 0.0)?, tail(pr, hi, FRAC_PI_2)?);
        let from_left = |x: f64| -> Result<Option<f64>> {
            let Some(t) = tails.0 else { return Ok(None) };
            Ok(if x == 0.0 {
                Some(0.0)
            } else if x == FRAC_PI_2 {
                tails.1.map(|r| t + integral.total() + r)
            } else {
                Some(t + integral.at(x)?)
            })
        };
        let from_right = |x: f64| -> Result<Option<f64>> {
            let Some(t) = tails.1 else { return Ok(None) };
            Ok(if x == FRAC_PI_2 {
                Some(0.0)
            } else if x == 0.0 {
                tails.0.map(|l| t + integral.total() + l)
            } else {
                Some(t + integral.from_right(x)?)
            })
        };
        let snap = |k: f64, anchor: f64| {
            if k.abs() <= CONSTANT_SNAP * w0.abs().max(anchor.abs()) {
                0.0
            } else {
                k
            }
        };
        let k_left = from_left(x0)?.map(|a| snap(w0 - a, a));
        let k_right = from_right(x0)?.map(|a| snap(w0 + a, a));
        let interior = if k_left.is_none() && k_right.is_none() {
            if x0 == 0.0 || x0 == FRAC_PI_2 {
                return Err(Error::Divergent {
                    endpoint: x0,
                    exponent: 2.0 * if x0 == 0.0 { pl } else { pr },
                });
            }
            w0 - integral.at(x0)?
        } else {
            0.0
        };
        let closed_scale = match method {
            ConfluentMethod::Quadrature => None,
            ConfluentMethod::ClosedForm => {
                let spec = seed.seed();
                if x0 != 0.0 || spec.coeff_b().norm() != 0.0 || spec.coeff_a().im != 0.0 {
                    return Err(Error::InvalidParameter(
                        "closed form needs a seed regular at 0 anchored at x0 = 0".into(),
                    ));
                }
                Some(spec.coeff_a().re.powi(2))
            }
        };
        Ok(Self {
            seed,
            w0,
            x0,
            integral,
            tails,
            k_left,
            k_right,
            interior,
            closed_scale,
        })
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn seed(&self) -> &SchrodingerSolution {
        &self.seed
    }

    /// Exponents of w at x → 0 and x → π/2.
    pub fn exponents(&self) -> (f64, f64) {
        let (pl, pr) = self.seed.exponents();
        let side = |tail: Option<f64>, k: Option<f64>, p: f64| match (tail, k) {
            (Some(_), Some(k)) if k != 0.0 => 0.0,
            (Some(_), None) => 0.0,
            _ => 2.0 * p + 1.0,
        };
        (
            side(self.tails.0, self.k_left, pl),
            side(self.tails.1, self.k_right, pr),
        )
    }

    fn quadrature_value(&self, x: f64) -> Result<f64> {
        let left = |k: f64| Ok(k + self.tails.0.unwrap_or(0.0) + self.integral.at(x)?);
        let right = |k: f64| Ok(k - self.tails.1.unwrap_or(0.0) - self.integral.from_right(x)?);
        match (self.k_left, self.k_right) {
            (Some(kl), Some(kr)) => {
                if x <= FRAC_PI_4 {
                    left(kl)
                } else {
                    right(kr)
                }
            }
            (Some(kl), None) => left(kl),
            (None, Some(kr)) => right(kr),
            (None, None) => Ok(self.interior + self.integral.at(x)?),
        }
    }

    fn closed_value(&self, x: f64, scale: f64) -> Result<f64> {
        let spec = self.seed.seed();
        Ok(self.w0
            + scale * closed_form_integral(self.seed.params(), spec.epsilon(), spec.level(), x)?)
    }

    /// (w(x), w′(x)).
    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let u = self.seed.value(x)?;
        let w = match self.closed_scale {
            Some(scale) if x.sin().powi(2) <= CLOSED_FORM_MAX_Z => {
                match self.closed_value(x, scale) {
                    Ok(w) => w,
                    Err(Error::NonConvergence { .. }) => self.quadrature_value(x)?,
                    Err(e) => return Err(e),
                }
            }
            _ => self.quadrature_value(x)?,
        };
        Ok((w, u * u))
    }

    /// A zero of w on (0, π/2), if w changes sign.
    fn sign_change(&self) -> Result<Option<f64>> {
        let xs = crate::partner::guarded_grid(NODELESS_POINTS);
        let mut prev = (xs[0], self.eval(xs[0])?.0);
        for &x in &xs[1..] {
            let v = self.eval(x)?.0;
            if v * prev.1 <= 0.0 {
                return Ok(Some(if v == 0.0 { x } else { prev.0 }));
            }
            prev = (x, v);
        }
        Ok(None)
    }
}

/// ∫_0^x f_A² for the seed A = 1, B = 0 as the series
/// Σ_m (a)_m (b)_m / ((λ+½)_m m! (2λ+2m+1)) sin^{2λ+2m+1}x
/// ₃F₂(c−a, c−b, λ+m+½; λ+½, λ+m+3/2; sin²x).
pub fn closed_form_integral(
    params: &PTParams,
    epsilon: Complex64,
    level: Option<usize>,
    x: f64,
) -> Result<f64> {
    let (lambda, mu) = (params.lambda(), params.mu());
    let sin = x.sin();
    let z = sin * sin;
    let (a, b) = match level {
        Some(n) => (Complex64::from(mu + n as f64), Complex64::from(-(n as f64))),
        None => {
            let s = specfun::half_root(epsilon);
            (mu / 2.0 + s, mu / 2.0 - s)
        }
    };
    let c = lambda + 0.5;
    let (ca, cb) = (c - a, c - b);
    let mut coeff = Complex64::from(1.0);
    let mut zm = 1.0;
    let mut sum = Complex64::from(0.0);
    let mut magnitude_sum = 0.0;
    let mut small = 0;
    let finish = |sum: Complex64, magnitude_sum: f64, m: usize| {
        if magnitude_sum > CLOSED_FORM_MAX_CANCELLATION * sum.norm() {
            return Err(Error::NonConvergence { terms: m, z });
        }
        Ok(sum.re * sin.powf(2.0 * lambda + 1.0))
    };
    for m in 0..MAX_TERMS {
        if coeff.norm() == 0.0 {
            return finish(sum, magnitude_sum, m);
        }
        let mf = m as f64;
        let (inner, magnitude) = f32_series_with_magnitude(
            [ca, cb, (lambda + mf + 0.5).into()],
            [c, lambda + mf + 1.5],
            z,
        )?;
        let weight = coeff * zm / (2.0 * lambda + 2.0 * mf + 1.0);
        let term = weight * inner;
        sum += term;
        magnitude_sum += weight.norm() * magnitude;
        if term.norm() <= 1e-17 * sum.norm() {
            small += 1;
            if small >= 2 {
                return finish(sum, magnitude_sum, m);
            }
        } else {
            small = 0;
        }
        coeff *= (a + mf) * (b + mf) / ((c + mf) * (mf + 1.0));
        zm *= z;
    }
    Err(Error::NonConvergence {
        terms: MAX_TERMS,
        z,
    })
}

#[derive(Debug, Clone)]
enum Source {
    Real(WronskianPair),
    Complex(SchrodingerSolution),
    Confluent(ConfluentW),
}

#[derive(Debug, Clone)]
pub struct SecondOrderTransform {
    params: PTParams,
    pair: FactorizationPair,
    source: Source,
    w_exponents: (f64, f64),
    new_exponents: (f64, f64),
    spectrum: PredictedSpectrum,
}

impl SecondOrderTransform {
    /// Real pair with seeds u₁ at ε₁ and u₂ at ε₂.
    pub fn real(
        params: &PTParams,
        u1: SchrodingerSolution,
        u2: SchrodingerSolution,
    ) -> Result<Self> {
        let pair = FactorizationPair::real(u1.energy(), u2.energy())?;
        let w = wronskian_pair(&u1, &u2)?;
        let w_exponents = w.exponents();
        let shift = |p1: f64, p2: f64, k: f64| sign_of(p1, k) + sign_of(p2, k);
        let new_exponents = (
            params.lambda() + shift(u1.left_exponent(), u2.left_exponent(), params.lambda()),
            params.nu() + shift(u1.right_exponent(), u2.right_exponent(), params.nu()),
        );
        // ε₁ ↔ u₂/W, ε₂ ↔ u₁/W
        let missing = [
            (
                u1.energy(),
                &u1,
                missing_exponents(u2.exponents(), w_exponents),
            ),
            (
                u2.energy(),
                &u2,
                missing_exponents(u1.exponents(), w_exponents),
            ),
        ];
        let spectrum = predict(params, missing.iter().map(|(e, u, m)| (*e, *u, *m)));
        Self::finish(
            *params,
            pair,
            Source::Real(w),
            w_exponents,
            new_exponents,
            spectrum,
        )
    }

    /// Complex pair (ε, ε̄) from one complex seed.
    pub fn complex(params: &PTParams, u: SchrodingerSolution) -> Result<Self> {
        let pair = FactorizationPair::complex(u.epsilon())?;
        let (pl, pr) = u.exponents();
        let w_exponents = (product_exponent(pl, pl), product_exponent(pr, pr));
        let new_exponents = (
            params.lambda() + 2.0 * sign_of(pl, params.lambda()),
            params.nu() + 2.0 * sign_of(pr, params.nu()),
        );
        let spectrum = PredictedSpectrum::unchanged(*params);
        Self::finish(
            *params,
            pair,
            Source::Complex(u),
            w_exponents,
            new_exponents,
            spectrum,
        )
    }

    /// Confluent pair from w = w₀ + ∫_{x₀}^x u².
    pub fn confluent(params: &PTParams, w: ConfluentW) -> Result<Self> {
        let u = w.seed().clone();
        let pair = FactorizationPair::confluent(u.energy());
        let w_exponents = w.exponents();
        let (pl, pr) = u.exponents();
        let shift = |k: f64, p: f64, base: f64| {
            if k == 0.0 {
                0.0
            } else {
                2.0 * sign_of(p, base)
            }
        };
        let new_exponents = (
            params.lambda() + shift(w_exponents.0, pl, params.lambda()),
            params.nu() + shift(w_exponents.1, pr, params.nu()),
        );
        let m = missing_exponents(u.exponents(), w_exponents);
        let spectrum = predict(params, std::iter::once((u.energy(), &u, m)));
        Self::finish(
            *params,
            pair,
            Source::Confluent(w),
            w_exponents,
            new_exponents,
            spectrum,
        )
    }

    fn finish(
        params: PTParams,
        pair: FactorizationPair,
        source: Source,
        w_exponents: (f64, f64),
        new_exponents: (f64, f64),
        spectrum: PredictedSpectrum,
    ) -> Result<Self> {
        if new_exponents.0 <= 1.0 || new_exponents.1 <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "partner exponents {new_exponents:?} must exceed 1"
            )));
        }
        let t = Self {
            params,
            pair,
            source,
            w_exponents,
            new_exponents,
            spectrum,
        };
        check_nodeless(|x| t.regular_factor(x), NODELESS_POINTS, NODELESS_FLOOR)?;
        Ok(t)
    }

    pub fn pair(&self) -> &FactorizationPair {
        &self.pair
    }

    pub fn kind(&self) -> PairKind {
        self.pair.kind()
    }

    /// Exponents (k₀, k₁) with w ~ sin^{k₀}x and w ~ cos^{k₁}x at the ends.
    pub fn w_exponents(&self) -> (f64, f64) {
        self.w_exponents
    }

    pub fn seeds(&self) -> Vec<&SchrodingerSolution> {
        match &self.source {
            Source::Real(w) => vec![&w.u1, &w.u2],
            Source::Complex(u) => vec![u],
            Source::Confluent(w) => vec![w.seed()],
        }
    }

    pub fn confluent_anchor(&self) -> Option<(f64, f64)> {
        match &self.source {
            Source::Confluent(w) => Some((w.w0(), w.x0())),
            _ => None,
        }
    }

    /// (w, w′, w″).
    pub fn w(&self, x: f64) -> Result<(f64, f64, f64)> {
        match &self.source {
            Source::Real(pair) => pair.eval(x),
            Source::Complex(u) => {
                let e = u.expansion(x)?;
                let eps = u.epsilon();
                let w = (wronskian(&e, &e.conj()) / (2.0 * (eps - eps.conj()))).re;
                let (v, dv) = e.value();
                Ok((w, v.norm_sqr(), 2.0 * (v.conj() * dv).re))
            }
            Source::Confluent(cw) => {
                let (w, dw) = cw.eval(x)?;
                let (u, du) = cw.seed().eval(x)?;
                Ok((w, dw, 2.0 * u * du))
            }
        }
    }

    /// w / (sin^{k₀}x cos^{k₁}x), bounded and nodeless for accepted transforms.
    pub fn regular_factor(&self, x: f64) -> Result<f64> {
        let (w, _, _) = self.w(x)?;
        let (s, c) = x.sin_cos();
        Ok(w / (s.powf(self.w_exponents.0) * c.powf(self.w_exponents.1)))
    }

    /// (η, η′).
    pub fn eta(&self, x: f64) -> Result<(f64, f64)> {
        let (w, dw, d2w) = self.w(x)?;
        let dist = x.min(FRAC_PI_2 - x);
        if w == 0.0 || w.abs() < SINGULAR_REL * dw.abs() * dist {
            return Err(Error::Singular(x));
        }
        let eta = dw / w;
        Ok((eta, d2w / w - eta * eta))
    }

    pub fn gamma(&self, x: f64) -> Result<f64> {
        let (eta, deta) = self.eta(x)?;
        Ok(deta / 2.0 + eta * eta / 2.0 - 2.0 * self.params.potential_value(x)? + self.pair.d())
    }

    fn missing_state_functions(&self) -> Vec<(f64, (f64, f64), crate::partner::Evaluator)> {
        let this = self.clone();
        match &self.source {
            Source::Real(w) => {
                let mk = |u: SchrodingerSolution| -> crate::partner::Evaluator {
                    let this = this.clone();
                    Arc::new(move |x| Ok(u.value(x)? / this.w(x)?.0))
                };
                vec![
                    (
                        w.u1.energy(),
                        missing_exponents(w.u2.exponents(), self.w_exponents),
                        mk(w.u2.clone()),
                    ),
                    (
                        w.u2.energy(),
                        missing_exponents(w.u1.exponents(), self.w_exponents),
                        mk(w.u1.clone()),
                    ),
                ]
            }
            Source::Complex(_) => Vec::new(),
            Source::Confluent(cw) => {
                let u = cw.seed().clone();
                let e = u.energy();
                let m = missing_exponents(u.exponents(), self.w_exponents);
                vec![(e, m, Arc::new(move |x| Ok(u.value(x)? / this.w(x)?.0)))]
            }
        }
    }
}

/// +1 when the seed exponent is the regular one, −1 otherwise.
fn sign_of(p: f64, regular: f64) -> f64 {
    if p == regular {
        1.0
    } else {
        -1.0
    }
}

fn missing_exponents(u: (f64, f64), w: (f64, f64)) -> (f64, f64) {
    (u.0 - w.0, u.1 - w.1)
}

/// Seeds at eigenvalues lose their level unless the matching missing state is
/// normalizable; other real energies gain a level exactly when it is.
fn predict<'a>(
    params: &PTParams,
    seeds: impl Iterator<Item = (f64, &'a SchrodingerSolution, (f64, f64))>,
) -> PredictedSpectrum {
    let mut created = Vec::new();
    let mut deleted = Vec::new();
    for (e, u, m) in seeds {
        let physical = m.0 > 0.0 && m.1 > 0.0;
        match params.level_of(e) {
            Some(n) if u.is_physical() => {
                if !physical {
                    deleted.push(n);
                }
            }
            Some(_) => {}
            None => {
                if physical {
                    created.push(e);
                }
            }
        }
    }
    PredictedSpectrum::new(*params, created, deleted)
}

impl Potential for SecondOrderTransform {
    fn potential(&self, x: f64) -> Result<f64> {
        self.partner_value(x)
    }
}

impl PartnerPotential for SecondOrderTransform {
    fn params(&self) -> &PTParams {
        &self.params
    }

    fn partner_value(&self, x: f64) -> Result<f64> {
        let (_, deta) = self.eta(x)?;
        Ok(self.params.potential_value(x)? - deta)
    }

    fn new_exponents(&self) -> (f64, f64) {
        self.new_exponents
    }

    fn predicted_spectrum(&self) -> &PredictedSpectrum {
        &self.spectrum
    }

    fn transformed_state(&self, n: usize) -> Result<StateFunction> {
        let e = self.params.eigen_energy(n);
        for eps in [self.pair.eps1, self.pair.eps2] {
            if (e - eps).norm() < COLLISION_TOL {
                return Err(Error::Degenerate(e));
            }
        }
        let psi = eigenfunction(&self.params, n)?;
        let norm = self.pair.gap_product(e).sqrt();
        let d = self.pair.d();
        let this = self.clone();
        // ψ″ = 2(V − E)ψ folded into γ: the potential cancels
        let eval = Arc::new(move |x: f64| {
            let (p, dp) = psi.eval(x)?;
            let (eta, deta) = this.eta(x)?;
            Ok(0.5 * ((deta / 2.0 + eta * eta / 2.0 + d - 2.0 * e) * p - eta * dp) / norm)
        });
        StateFunction::new(e, self.new_exponents, eval).normalized()
    }

    fn missing_states(&self) -> Result<Vec<MissingState>> {
        self.missing_state_functions()
            .into_iter()
            .map(|(e, exps, f)| {
                let state = StateFunction::new(e, exps, f);
                let physical = state.is_bounded_state();
                let state = if physical { state.normalized()? } else { state };
                Ok(MissingState { state, physical })
            })
            .collect()
    }
}

/// Ṽ(x) for an already constructed transform.
pub fn partner_value_second(t: &SecondOrderTransform, x: f64) -> Result<f64> {
    t.partner_value(x)
}

pub fn transform_eigenfunction_second(t: &SecondOrderTransform, n: usize) -> Result<StateFunction> {
    t.transformed_state(n)
}

/// Missing state with energy ε₁ (`which = 1`) or ε₂ (`which = 2`); the
/// confluent case has only `which = 1`.
pub fn missing_state(t: &SecondOrderTransform, which: usize) -> Result<MissingState> {
    let states = t.missing_states()?;
    which
        .checked_sub(1)
        .and_then(|k| states.into_iter().nth(k))
        .ok_or_else(|| Error::InvalidParameter(format!("no missing state number {which}")))
}

fn real_seed(params: &PTParams, epsilon: f64) -> Result<SchrodingerSolution> {
    general_solution(params, SeedSpec::vanishing_left(epsilon.into()))
}

/// Runs a left-side seed builder directly or at (ν, λ) followed by the mirror
/// map.
fn sided<F>(params: &PTParams, side: Side, build: F) -> Result<Vec<SchrodingerSolution>>
where
    F: Fn(&PTParams) -> Result<Vec<SchrodingerSolution>>,
{
    match side {
        Side::Left => build(params),
        Side::Right => build(&params.swapped())?
            .iter()
            .map(|u| u.mirrored())
            .collect(),
    }
}

fn real_from(
    params: &PTParams,
    mut seeds: Vec<SchrodingerSolution>,
) -> Result<SecondOrderTransform> {
    let u2 = seeds.pop().expect("two seeds");
    let u1 = seeds.pop().expect("two seeds");
    SecondOrderTransform::real(params, u1, u2)
}

fn same_band(params: &PTParams, eps1: f64, eps2: f64) -> Result<usize> {
    let i = params.band_index(eps1)?;
    if params.band_index(eps2)? != i {
        let (lower, upper) = params.band(i);
        return Err(Error::Band {
            energy: eps2,
            lower,
            upper,
        });
    }
    Ok(i)
}

fn in_band(params: &PTParams, epsilon: f64, i: usize) -> Result<()> {
    let (lower, upper) = params.band(i);
    if !(epsilon > lower + COLLISION_TOL && epsilon < upper - COLLISION_TOL) {
        return Err(Error::Band {
            energy: epsilon,
            lower,
            upper,
        });
    }
    Ok(())
}

fn require_positive_level(i: usize) -> Result<()> {
    if i == 0 {
        return Err(Error::InvalidParameter(
            "level index i must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Removes E_{i−1} and E_i using ψ_i and ψ_{i−1}.
pub fn delete_two(params: &PTParams, i: usize) -> Result<SecondOrderTransform> {
    require_positive_level(i)?;
    SecondOrderTransform::real(
        params,
        eigenfunction(params, i)?,
        eigenfunction(params, i - 1)?,
    )
}

/// Inserts ε₂ < ε₁ inside one band using q-seeds with q₁ > 0 and q₂ < 0.
pub fn create_two(
    params: &PTParams,
    eps1: f64,
    eps2: f64,
    q1: f64,
    q2: f64,
) -> Result<SecondOrderTransform> {
    if !(q1 > 0.0 && q2 < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need q1 > 0 and q2 < 0 (got {q1}, {q2})"
        )));
    }
    if !(eps2 < eps1) {
        return Err(Error::InvalidParameter(format!(
            "need eps2 < eps1 (got {eps1}, {eps2})"
        )));
    }
    same_band(params, eps1, eps2)?;
    let u1 = general_solution(params, seed_from_q(params, eps1, q1)?)?;
    let u2 = general_solution(params, seed_from_q(params, eps2, q2)?)?;
    SecondOrderTransform::real(params, u1, u2)
}

/// Two seeds in one band vanishing at x = 0 (left) or x = π/2 (right).
pub fn iso_two_real(
    params: &PTParams,
    eps1: f64,
    eps2: f64,
    side: Side,
) -> Result<SecondOrderTransform> {
    if (eps1 - eps2).abs() < COLLISION_TOL {
        return Err(Error::InvalidParameter(
            "iso_two_real needs distinct energies".into(),
        ));
    }
    same_band(params, eps1, eps2)?;
    let seeds = sided(params, side, |p| {
        Ok(vec![real_seed(p, eps1)?, real_seed(p, eps2)?])
    })?;
    real_from(params, seeds)
}

/// Inserts ε₁ using a q-seed (q₁ > 0) at ε₁ and a one-sided seed at
/// ε₂ < ε₁ in the same band.
pub fn create_one(
    params: &PTParams,
    eps1: f64,
    eps2: Option<f64>,
    q1: f64,
    side: Side,
) -> Result<SecondOrderTransform> {
    if !(q1 > 0.0) {
        return Err(Error::InvalidParameter(format!("need q1 > 0 (got {q1})")));
    }
    let i = params.band_index(eps1)?;
    let eps2 = eps2.unwrap_or_else(|| default_lower_energy(params, i, eps1));
    if !(eps2 < eps1) {
        return Err(Error::InvalidParameter(format!(
            "need eps2 < eps1 (got {eps1}, {eps2})"
        )));
    }
    same_band(params, eps1, eps2)?;
    let seeds = sided(params, side, |p| {
        Ok(vec![
            general_solution(p, seed_from_q(p, eps1, q1)?)?,
            real_seed(p, eps2)?,
        ])
    })?;
    real_from(params, seeds)
}

fn default_lower_energy(params: &PTParams, i: usize, eps1: f64) -> f64 {
    if i == 0 {
        eps1 - (params.eigen_energy(0) - eps1).max(1.0)
    } else {
        0.5 * (params.eigen_energy(i - 1) + eps1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// E_{i−1} moves up to a target in (E_{i−1}, E_i).
    Up,
    /// E_i moves down to a target in (E_{i−1}, E_i).
    Down,
}

/// Replaces E_{i−1} (up) or E_i (down) with `target`; `q` defaults to +1
/// (up) or −1 (down).
pub fn move_level(
    params: &PTParams,
    i: usize,
    target: f64,
    direction: Direction,
    q: Option<f64>,
) -> Result<SecondOrderTransform> {
    in_band(params, target, i)?;
    match direction {
        Direction::Up => {
            require_positive_level(i)?;
            let q = q.unwrap_or(1.0);
            if !(q > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "moving up needs q > 0 (got {q})"
                )));
            }
            let u1 = general_solution(params, seed_from_q(params, target, q)?)?;
            SecondOrderTransform::real(params, u1, eigenfunction(params, i - 1)?)
        }
        Direction::Down => {
            let q = q.unwrap_or(-1.0);
            if !(q < 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "moving down needs q < 0 (got {q})"
                )));
            }
            let u2 = general_solution(params, seed_from_q(params, target, q)?)?;
            SecondOrderTransform::real(params, eigenfunction(params, i)?, u2)
        }
    }
}

/// Removes E_{i−1} using ψ_{i−1} and a one-sided seed at ε₁ ∈ (E_{i−1}, E_i),
/// by default the band midpoint.
pub fn delete_one(
    params: &PTParams,
    i: usize,
    eps1: Option<f64>,
    side: Side,
) -> Result<SecondOrderTransform> {
    require_positive_level(i)?;
    let eps1 = eps1.unwrap_or_else(|| 0.5 * (params.eigen_energy(i - 1) + params.eigen_energy(i)));
    in_band(params, eps1, i)?;
    let seeds = sided(params, side, |p| {
        Ok(vec![real_seed(p, eps1)?, eigenfunction(p, i - 1)?])
    })?;
    real_from(params, seeds)
}

/// Complex ε with a seed vanishing at x = 0 (left) or x = π/2 (right).
pub fn iso_complex(
    params: &PTParams,
    epsilon: Complex64,
    side: Side,
) -> Result<SecondOrderTransform> {
    if epsilon.im == 0.0 || !epsilon.im.is_finite() || !epsilon.re.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need finite epsilon with Im != 0 (got {epsilon})"
        )));
    }
    let mut seeds = sided(params, side, |p| {
        Ok(vec![general_solution(
            p,
            SeedSpec::vanishing_left(epsilon),
        )?])
    })?;
    SecondOrderTransform::complex(params, seeds.pop().expect("one seed"))
}

fn confluent_sided(
    params: &PTParams,
    side: Side,
    seed: SchrodingerSolution,
    w0: f64,
    method: ConfluentMethod,
) -> Result<SecondOrderTransform> {
    let w = match side {
        Side::Left => ConfluentW::new(seed, w0, 0.0, method)?,
        Side::Right => ConfluentW::new(seed, -w0, FRAC_PI_2, ConfluentMethod::Quadrature)?,
    };
    SecondOrderTransform::confluent(params, w)
}

fn one_sided_seed(params: &PTParams, epsilon: f64, side: Side) -> Result<SchrodingerSolution> {
    Ok(sided(params, side, |p| Ok(vec![real_seed(p, epsilon)?]))?.remove(0))
}

/// Inserts ε ∉ {E_n} with a one-sided seed and w₀ > 0.
pub fn confluent_create(
    params: &PTParams,
    epsilon: f64,
    w0: f64,
    side: Side,
) -> Result<SecondOrderTransform> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need epsilon > 0 (got {epsilon})"
        )));
    }
    params.band_index(epsilon)?;
    if !(w0 > 0.0 && w0.is_finite()) {
        return Err(Error::InvalidParameter(format!("need w0 > 0 (got {w0})")));
    }
    let seed = one_sided_seed(params, epsilon, side)?;
    confluent_sided(params, side, seed, w0, ConfluentMethod::Quadrature)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConfluentIsoVariant {
    /// Seed vanishing at x = 0, w₀ = 0 at x₀ = 0.
    General,
    /// Seed vanishing at x = π/2, w₀ = 0 at x₀ = π/2.
    Mirrored,
    /// ε = E_i with the normalized ψ_i and w₀ ∉ [−1, 0] at x₀ = 0.
    Physical { w0: f64 },
}

pub fn confluent_iso(
    params: &PTParams,
    epsilon: f64,
    variant: ConfluentIsoVariant,
) -> Result<SecondOrderTransform> {
    match variant {
        ConfluentIsoVariant::General | ConfluentIsoVariant::Mirrored => {
            params.band_index(epsilon)?;
            let side = if variant == ConfluentIsoVariant::General {
                Side::Left
            } else {
                Side::Right
            };
            let seed = one_sided_seed(params, epsilon, side)?;
            confluent_sided(params, side, seed, 0.0, ConfluentMethod::Quadrature)
        }
        ConfluentIsoVariant::Physical { w0 } => {
            let i = params.level_of(epsilon).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "physical variant needs epsilon = E_i (got {epsilon})"
                ))
            })?;
            let w = ConfluentW::new(
                eigenfunction(params, i)?,
                w0,
                0.0,
                ConfluentMethod::Quadrature,
            )?;
            if (-1.0..=0.0).contains(&w0) {
                let x = match w.sign_change()? {
                    Some(x) => x,
                    None if w0 > -0.5 => 0.0,
                    None => FRAC_PI_2,
                };
                return Err(Error::NodeFound { x });
            }
            SecondOrderTransform::confluent(params, w)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeleteLimit {
    /// w₀ → 0: w = ∫_0^x ψ_i².
    ToZero,
    /// w₀ → −1: w = −∫_x^{π/2} ψ_i².
    ToMinusOne,
}

/// Removes E_i with the confluent seed ψ_i at the boundary of the forbidden
/// w₀ range.
pub fn confluent_delete(
    params: &PTParams,
    i: usize,
    limit: DeleteLimit,
) -> Result<SecondOrderTransform> {
    let x0 = match limit {
        DeleteLimit::ToZero => 0.0,
        DeleteLimit::ToMinusOne => FRAC_PI_2,
    };
    let w = ConfluentW::new(
        eigenfunction(params, i)?,
        0.0,
        x0,
        ConfluentMethod::Quadrature,
    )?;
    SecondOrderTransform::confluent(params, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p58() -> PTParams {
        PTParams::new(5.0, 8.0).unwrap()
    }

    fn coeffs(t: &SecondOrderTransform) -> (f64, f64) {
        t.endpoint_coefficients()
    }

    #[test]
    fn pair_classification() {
        let r = FactorizationPair::real(128.0, 115.52).unwrap();
        assert_eq!(r.kind(), PairKind::Real);
        assert!(r.c() > 0.0);
        assert!((r.d() - 243.52).abs() < 1e-12);
        let c = FactorizationPair::complex(Complex64::new(176.344, 1.5)).unwrap();
        assert_eq!(c.kind(), PairKind::Complex);
        assert!((c.c() + 2.25).abs() < 1e-12);
        assert!((c.d() - 352.688).abs() < 1e-12);
        let f = FactorizationPair::confluent(162.0);
        assert_eq!((f.kind(), f.c(), f.d()), (PairKind::Confluent, 0.0, 324.0));
        assert!(FactorizationPair::real(3.0, 3.0).is_err());
        assert!(FactorizationPair::complex(Complex64::new(3.0, 0.0)).is_err());
    }

    #[test]
    fn delete_two_bookkeeping() {
        let t = delete_two(&p58(), 3).unwrap();
        assert_eq!(t.new_exponents(), (7.0, 10.0));
        assert_eq!(coeffs(&t), (21.0, 45.0));
        assert_eq!(
            t.predicted_spectrum().energies(5),
            vec![84.5, 112.5, 220.5, 264.5, 312.5]
        );
        let m = t.missing_states().unwrap();
        assert_eq!(
            m.iter().map(|s| s.physical).collect::<Vec<_>>(),
            vec![false, false]
        );
    }

    #[test]
    fn wronskian_derivative_matches_product() {
        let (u1, u2) = (
            eigenfunction(&p58(), 3).unwrap(),
            eigenfunction(&p58(), 2).unwrap(),
        );
        let w = wronskian_pair(&u1, &u2).unwrap();
        let h = 1e-5;
        for k in 1..40 {
            let x = 0.04 * k as f64;
            let fd = (w.eval(x + h).unwrap().0 - w.eval(x - h).unwrap().0) / (2.0 * h);
            let (_, dw, _) = w.eval(x).unwrap();
            let exact = 2.0 * 36.0 * u1.value(x).unwrap() * u2.value(x).unwrap();
            assert!((dw - exact).abs() <= 1e-12 * (1.0 + exact.abs()));
            assert!(
                (fd - dw).abs() <= 1e-6 * (1.0 + dw.abs()),
                "x = {x}: {fd} vs {dw}"
            );
        }
    }

    #[test]
    fn create_two_bookkeeping() {
        let t = create_two(&p58(), 128.0, 115.52, 1.0, -1.0).unwrap();
        assert_eq!(t.new_exponents(), (3.0, 6.0));
        assert_eq!(coeffs(&t), (3.0, 15.0));
        assert_eq!(
            t.predicted_spectrum().energies(7),
            vec![84.5, 112.5, 115.52, 128.0, 144.5, 180.5, 220.5]
        );
        let m = t.missing_states().unwrap();
        assert!(m.iter().all(|s| s.physical));
    }

    #[test]
    fn create_two_validation() {
        let p = p58();
        assert!(matches!(
            create_two(&p, 128.0, 115.52, -1.0, 1.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            create_two(&p, 150.0, 115.52, 1.0, -1.0),
            Err(Error::Band { .. })
        ));
        assert!(matches!(
            create_two(&PTParams::new(3.0, 8.0).unwrap(), 128.0, 115.52, 1.0, -1.0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn flipped_q_signs_give_a_node() {
        let p = p58();
        let u1 = general_solution(&p, seed_from_q(&p, 128.0, -1.0).unwrap()).unwrap();
        let u2 = general_solution(&p, seed_from_q(&p, 115.52, 1.0).unwrap()).unwrap();
        assert!(matches!(
            SecondOrderTransform::real(&p, u1, u2),
            Err(Error::NodeFound { .. })
        ));
    }

    #[test]
    fn create_one_and_delete_one() {
        let c = create_one(&p58(), 128.0, None, 1.0, Side::Left).unwrap();
        assert_eq!(c.new_exponents(), (5.0, 6.0));
        assert_eq!(c.predicted_spectrum().created(), &[128.0]);
        let m = c.missing_states().unwrap();
        assert_eq!(
            m.iter().map(|s| s.physical).collect::<Vec<_>>(),
            vec![true, false]
        );
        let d = delete_one(&p58(), 3, None, Side::Left).unwrap();
        assert_eq!(d.new_exponents(), (7.0, 8.0));
        assert_eq!(
            d.predicted_spectrum().energies(4),
            vec![84.5, 112.5, 180.5, 220.5]
        );
    }

    #[test]
    fn move_level_both_directions() {
        let up = move_level(&p58(), 3, 169.28, Direction::Up, None).unwrap();
        assert_eq!(up.new_exponents(), (5.0, 8.0));
        assert_eq!(
            up.predicted_spectrum().energies(4),
            vec![84.5, 112.5, 169.28, 180.5]
        );
        let down = move_level(&p58(), 3, 169.28, Direction::Down, None).unwrap();
        assert_eq!(
            down.predicted_spectrum().energies(4),
            vec![84.5, 112.5, 144.5, 169.28]
        );
        assert!(matches!(
            move_level(&p58(), 3, 190.0, Direction::Up, None),
            Err(Error::Band { .. })
        ));
    }

    #[test]
    fn complex_w_is_increasing() {
        let t = iso_complex(&p58(), Complex64::new(176.344, 1.5), Side::Left).unwrap();
        assert_eq!(t.new_exponents(), (7.0, 6.0));
        let mut prev = f64::NEG_INFINITY;
        for k in 0..400 {
            let x = 0.01 + 1.55 * k as f64 / 400.0;
            let (w, dw, _) = t.w(x).unwrap();
            assert!(w > prev && dw > 0.0);
            prev = w;
        }
    }

    #[test]
    fn confluent_bookkeeping() {
        let c = confluent_create(&p58(), 147.92, 1.0, Side::Left).unwrap();
        assert_eq!(c.new_exponents(), (5.0, 6.0));
        assert_eq!(c.predicted_spectrum().created(), &[147.92]);
        let iso = confluent_iso(&p58(), 162.0, ConfluentIsoVariant::General).unwrap();
        assert_eq!(iso.new_exponents(), (7.0, 6.0));
        assert_eq!(
            iso.predicted_spectrum().energies(3),
            vec![84.5, 112.5, 144.5]
        );
        let del = confluent_delete(&p58(), 3, DeleteLimit::ToZero).unwrap();
        assert_eq!(del.new_exponents(), (7.0, 8.0));
        assert_eq!(
            del.predicted_spectrum().energies(4),
            vec![84.5, 112.5, 144.5, 220.5]
        );
        let del_r = confluent_delete(&p58(), 3, DeleteLimit::ToMinusOne).unwrap();
        assert_eq!(del_r.new_exponents(), (5.0, 10.0));
        assert_eq!(del_r.predicted_spectrum().deleted(), &[3]);
    }

    #[test]
    fn confluent_physical_variants() {
        let ok = confluent_iso(&p58(), 112.5, ConfluentIsoVariant::Physical { w0: 2.0 }).unwrap();
        assert_eq!(ok.new_exponents(), (5.0, 8.0));
        assert_eq!(
            ok.predicted_spectrum().energies(3),
            vec![84.5, 112.5, 144.5]
        );
        let neg = confluent_iso(&p58(), 112.5, ConfluentIsoVariant::Physical { w0: -2.0 }).unwrap();
        assert_eq!(neg.new_exponents(), (5.0, 8.0));
        for w0 in [-1.0, -0.5, 0.0] {
            let r = confluent_iso(&p58(), 112.5, ConfluentIsoVariant::Physical { w0 });
            assert!(
                matches!(r, Err(Error::NodeFound { .. })),
                "w0 = {w0}: {r:?}"
            );
        }
        match confluent_iso(&p58(), 112.5, ConfluentIsoVariant::Physical { w0: -0.5 }) {
            Err(Error::NodeFound { x }) => assert!(x > 0.2 && x < 1.4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn physical_seed_w_reaches_w0_plus_one() {
        let p = p58();
        let psi = eigenfunction(&p, 2).unwrap();
        let w = confluent_w(&p, &psi, 0.3, 0.0, ConfluentMethod::Quadrature).unwrap();
        let end = w.eval(FRAC_PI_2 - EVAL_GUARD).unwrap().0;
        assert!((end - 1.3).abs() < 1e-10, "{end}");
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let p = p58();
        let u = real_seed(&p, 147.92).unwrap();
        let q = confluent_w(&p, &u, 0.7, 0.0, ConfluentMethod::Quadrature).unwrap();
        let eps = Complex64::from(147.92);
        for k in 0..12 {
            let x = 0.1 + 0.1 * k as f64;
            let a = q.eval(x).unwrap().0;
            let b = 0.7 + closed_form_integral(&p, eps, None, x).unwrap();
            assert!(
                (a - b).abs() <= 1e-8 * a.abs().max(1.0),
                "x = {x}: {a} vs {b}"
            );
        }
        let c = confluent_w(&p, &u, 0.7, 0.0, ConfluentMethod::ClosedForm).unwrap();
        for x in [0.3, 1.0, 1.5] {
            let (a, b) = (q.eval(x).unwrap().0, c.eval(x).unwrap().0);
            assert!(
                (a - b).abs() <= 1e-8 * a.abs().max(1.0),
                "x = {x}: {a} vs {b}"
            );
        }
        let psi = eigenfunction(&p, 3).unwrap();
        let qp = confluent_w(&p, &psi, 0.0, 0.0, ConfluentMethod::Quadrature).unwrap();
        let scale = psi.seed().coeff_a().re.powi(2);
        for x in [0.2, 0.5, 0.7] {
            let a = qp.eval(x).unwrap().0;
            let b = scale * closed_form_integral(&p, psi.epsilon(), Some(3), x).unwrap();
            assert!((a - b).abs() <= 1e-10, "x = {x}: {a} vs {b}");
        }
        let cp = confluent_w(&p, &psi, 0.0, 0.0, ConfluentMethod::ClosedForm).unwrap();
        assert!((cp.eval(1.3).unwrap().0 - qp.eval(1.3).unwrap().0).abs() < 1e-10);
    }

    #[test]
    fn negative_w0_general_seed_has_node() {
        let p = p58();
        let u = real_seed(&p, 147.92).unwrap();
        let w = ConfluentW::new(u, -1.0, 0.0, ConfluentMethod::Quadrature).unwrap();
        assert!(matches!(
            SecondOrderTransform::confluent(&p, w),
            Err(Error::NodeFound { .. })
        ));
    }
}
