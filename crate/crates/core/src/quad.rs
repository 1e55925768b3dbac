//! Quadrature on (0, π/2): Gauss-Legendre panels on a grid graded toward the
//! endpoints, a cumulative integral built on the same panels, and an adaptive
//! Simpson rule.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::pt::EVAL_GUARD;

const GL_ORDER: usize = 20;
const GRADE_RATIO: f64 = 1.3;
const GRADE_END: f64 = 0.05;
const MIDDLE_STEP: f64 = 0.02;

/// Nodes and weights of the n-point Gauss-Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// 20-point Gauss-Legendre approximation of ∫_a^b f.
pub fn gl_panel<F: Fn(f64) -> Result<f64> + ?Sized>(f: &F, a: f64, b: f64) -> Result<f64> {
    let (nodes, weights) = gl20();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = 0.0;
    for (t, w) in nodes.iter().zip(weights) {
        sum += w * f(mid + half * t)?;
    }
    Ok(sum * half)
}

/// Panel breakpoints on [lo, hi] ⊂ (0, π/2): geometric toward each endpoint
/// of (0, π/2), uniform in the middle.
pub fn graded_breakpoints(lo: f64, hi: f64) -> Vec<f64> {
    let delta = lo.min(FRAC_PI_2 - hi).max(1e-12);
    let mut left = vec![delta];
    while *left.last().unwrap() * GRADE_RATIO < GRADE_END {
        let next = left.last().unwrap() * GRADE_RATIO;
        left.push(next);
    }
    let a = *left.last().unwrap();
    let b = FRAC_PI_2 - a;
    let steps = ((b - a) / MIDDLE_STEP).ceil().max(1.0) as usize;
    let mut all = left.clone();
    for k in 1..steps {
        all.push(a + (b - a) * k as f64 / steps as f64);
    }
    all.extend(left.iter().rev().map(|t| FRAC_PI_2 - t));

    let mut out = vec![lo];
    out.extend(all.into_iter().filter(|&t| t > lo && t < hi));
    out.push(hi);
    out
}

/// ∫_lo^hi f over graded Gauss-Legendre panels.
pub fn integrate_graded<F: Fn(f64) -> Result<f64> + ?Sized>(
    f: &F,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    let breaks = graded_breakpoints(lo, hi);
    breaks.windows(2).map(|w| gl_panel(f, w[0], w[1])).sum()
}

/// Contribution of ∫_0^δ g when g(t) ~ t^p near t = 0 and g(δ) is known.
pub fn power_tail(delta: f64, g_at_delta: f64, p: f64, endpoint: f64) -> Result<f64> {
    if p <= -1.0 {
        return Err(Error::Divergent {
            endpoint,
            exponent: p,
        });
    }
    Ok(delta * g_at_delta / (p + 1.0))
}

/// ∫_0^{π/2} g where g(t) ~ t^{p_left} near 0 and ~ (π/2 − t)^{p_right}
/// near π/2: graded panels on the guarded interval plus power-law tails.
pub fn integrate_open<F: Fn(f64) -> Result<f64> + ?Sized>(
    g: &F,
    exponents: (f64, f64),
) -> Result<f64> {
    let (lo, hi) = (EVAL_GUARD, FRAC_PI_2 - EVAL_GUARD);
    let body = integrate_graded(g, lo, hi)?;
    let left = power_tail(lo, g(lo)?, exponents.0, 0.0)?;
    let right = power_tail(lo, g(hi)?, exponents.1, FRAC_PI_2)?;
    Ok(body + left + right)
}

pub(crate) type Integrand = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// Running integral C(x) = ∫_lo^x f on a fixed graded panel set.
#[derive(Clone)]
pub struct CumulativeIntegral {
    f: Integrand,
    breaks: Vec<f64>,
    cumulative: Vec<f64>,
    from_right: Vec<f64>,
}

impl std::fmt::Debug for CumulativeIntegral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CumulativeIntegral")
            .field("panels", &(self.breaks.len() - 1))
            .field("total", &self.total())
            .finish()
    }
}

impl CumulativeIntegral {
    pub fn new(f: Integrand, lo: f64, hi: f64) -> Result<Self> {
        let breaks = graded_breakpoints(lo, hi);
        let panels = breaks
            .windows(2)
            .map(|w| gl_panel(f.as_ref(), w[0], w[1]))
            .collect::<Result<Vec<_>>>()?;
        let mut cumulative = vec![0.0; breaks.len()];
        for (k, p) in panels.iter().enumerate() {
            cumulative[k + 1] = cumulative[k] + p;
        }
        let mut from_right = vec![0.0; breaks.len()];
        for (k, p) in panels.iter().enumerate().rev() {
            from_right[k] = from_right[k + 1] + p;
        }
        Ok(Self {
            f,
            breaks,
            cumulative,
            from_right,
        })
    }

    pub fn lo(&self) -> f64 {
        self.breaks[0]
    }

    pub fn hi(&self) -> f64 {
        *self.breaks.last().unwrap()
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// ∫_lo^x f for x in [lo, hi].
    pub fn at(&self, x: f64) -> Result<f64> {
        if x <= self.lo() {
            return Ok(0.0);
        }
        if x >= self.hi() {
            return Ok(self.total());
        }
        let k = self.breaks.partition_point(|&b| b <= x) - 1;
        let start = self.breaks[k];
        if x == start {
            return Ok(self.cumulative[k]);
        }
        Ok(self.cumulative[k] + gl_panel(self.f.as_ref(), start, x)?)
    }

    /// ∫_x^hi f for x in [lo, hi], summed from the right to keep small
    /// values accurate near hi.
    pub fn from_right(&self, x: f64) -> Result<f64> {
        if x >= self.hi() {
            return Ok(0.0);
        }
        if x <= self.lo() {
            return Ok(self.total());
        }
        let k = self.breaks.partition_point(|&b| b < x);
        let end = self.breaks[k];
        let tail = self.from_right[k];
        if x == end {
            return Ok(tail);
        }
        Ok(tail + gl_panel(self.f.as_ref(), x, end)?)
    }
}

const SIMPSON_MAX_DEPTH: usize = 50;

/// Adaptive Simpson quadrature stopping when the Richardson-corrected
/// estimate satisfies the absolute or the relative tolerance.
pub fn adaptive_simpson<F: Fn(f64) -> Result<f64> + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    // seed with a coarse sweep so that oscillatory integrands are resolved
    let pieces = 64;
    let h = (b - a) / pieces as f64;
    let mut rough = 0.0;
    let mut segments = Vec::with_capacity(pieces);
    for k in 0..pieces {
        let (x0, x1) = (a + k as f64 * h, a + (k + 1) as f64 * h);
        let xm = 0.5 * (x0 + x1);
        let (f0, fm, f1) = (f(x0)?, f(xm)?, f(x1)?);
        let whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        rough += whole.abs();
        segments.push((x0, x1, f0, fm, f1, whole));
    }
    let tol = abs_tol.max(rel_tol * rough) / pieces as f64;
    let mut total = 0.0;
    for (x0, x1, f0, fm, f1, whole) in segments {
        total += simpson_step(f, x0, x1, f0, fm, f1, whole, tol, 0)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> Result<f64> + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth >= SIMPSON_MAX_DEPTH || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_weights_and_moments() {
        let (x, w) = gauss_legendre(GL_ORDER);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let m38: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(38)).sum();
        assert!((m38 - 2.0 / 39.0).abs() < 1e-14);
        let (x3, w3) = gauss_legendre(3);
        assert!((x3[2] - (0.6f64).sqrt()).abs() < 1e-15);
        assert!((w3[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn graded_rule_integrates_sin_squared() {
        let f = |x: f64| Ok(x.sin().powi(2));
        let v = integrate_graded(&f, 1e-6, FRAC_PI_2 - 1e-6).unwrap();
        let exact = PI / 4.0 - 1e-6;
        assert!((v - exact).abs() < 1e-14);
    }

    #[test]
    fn cumulative_matches_antiderivative() {
        let f: Integrand = Arc::new(|x: f64| Ok(x.cos()));
        let c = CumulativeIntegral::new(f, 1e-6, FRAC_PI_2 - 1e-6).unwrap();
        for x in [1e-6f64, 1e-4, 0.3, 0.7853, 1.2, 1.57] {
            let want = x.sin() - (1e-6f64).sin();
            assert!((c.at(x).unwrap() - want).abs() < 1e-14, "x={x}");
            let right = (FRAC_PI_2 - 1e-6).sin() - x.sin();
            assert!((c.from_right(x).unwrap() - right).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn tail_rejects_non_integrable_power() {
        assert!(power_tail(1e-6, 1.0, -1.0, 0.0).is_err());
        assert!((power_tail(0.5, 0.25, 2.0, 0.0).unwrap() - 0.5f64.powi(3) / 3.0).abs() < 1e-16);
    }

    #[test]
    fn simpson_examples() {
        let f = |x: f64| Ok(x.sin().powi(2));
        let v = adaptive_simpson(&f, 0.0, FRAC_PI_2, 1e-12, 1e-10).unwrap();
        assert!((v - PI / 4.0).abs() < 1e-12);
        let g = |x: f64| Ok((40.0 * x).cos());
        let v = adaptive_simpson(&g, 0.0, 1.0, 1e-12, 1e-10).unwrap();
        assert!((v - (40.0f64).sin() / 40.0).abs() < 1e-11);
    }
}
