//! Items shared by the first- and second-order transformations: predicted
//! spectra with provenance, evaluators for partner eigenstates, and the
//! [`PartnerPotential`] interface.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pt::{PTParams, Potential, WaveFunction, EVAL_GUARD};
use crate::quad;

/// Where a level of the partner spectrum comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    /// The eigenvalue E_n of the initial potential.
    Retained { n: usize },
    /// A factorization energy turned into a new eigenvalue.
    Created,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub energy: f64,
    pub provenance: Provenance,
}

/// The analytically predicted spectrum {E_n} minus deleted levels plus
/// created ones.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedSpectrum {
    params: PTParams,
    created: Vec<f64>,
    deleted: Vec<usize>,
}

impl PredictedSpectrum {
    pub fn new(params: PTParams, mut created: Vec<f64>, mut deleted: Vec<usize>) -> Self {
        created.sort_by(f64::total_cmp);
        deleted.sort_unstable();
        deleted.dedup();
        Self {
            params,
            created,
            deleted,
        }
    }

    pub fn unchanged(params: PTParams) -> Self {
        Self::new(params, Vec::new(), Vec::new())
    }

    pub fn created(&self) -> &[f64] {
        &self.created
    }

    /// Indices n of the removed eigenvalues E_n.
    pub fn deleted(&self) -> &[usize] {
        &self.deleted
    }

    pub fn deleted_energies(&self) -> Vec<f64> {
        self.deleted
            .iter()
            .map(|&n| self.params.eigen_energy(n))
            .collect()
    }

    /// The k lowest levels in increasing order.
    pub fn lowest(&self, k: usize) -> Vec<Level> {
        let mut out = Vec::with_capacity(k);
        let mut created = self.created.iter().peekable();
        let mut n = 0;
        while out.len() < k {
            if self.deleted.contains(&n) {
                n += 1;
                continue;
            }
            let e = self.params.eigen_energy(n);
            match created.peek() {
                Some(&&c) if c < e => {
                    out.push(Level {
                        energy: c,
                        provenance: Provenance::Created,
                    });
                    created.next();
                }
                _ => {
                    out.push(Level {
                        energy: e,
                        provenance: Provenance::Retained { n },
                    });
                    n += 1;
                }
            }
        }
        out
    }

    pub fn energies(&self, k: usize) -> Vec<f64> {
        self.lowest(k).iter().map(|l| l.energy).collect()
    }
}

pub(crate) type Evaluator = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// A real function on (0, π/2) behaving as sin^p x near 0 and cos^q x near
/// π/2, with (p, q) = `exponents`.
#[derive(Clone)]
pub struct StateFunction {
    energy: f64,
    exponents: (f64, f64),
    scale: f64,
    eval: Evaluator,
}

impl fmt::Debug for StateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateFunction")
            .field("energy", &self.energy)
            .field("exponents", &self.exponents)
            .field("scale", &self.scale)
            .finish()
    }
}

const SIGN_PROBE_POINTS: usize = 400;

impl StateFunction {
    pub(crate) fn new(energy: f64, exponents: (f64, f64), eval: Evaluator) -> Self {
        Self {
            energy,
            exponents,
            scale: 1.0,
            eval,
        }
    }

    /// Unit L² norm, positive near x = 0.
    pub(crate) fn normalized(mut self) -> Result<Self> {
        let norm2 = self.norm_squared()?;
        if !(norm2.is_finite() && norm2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "state at energy {} has norm² {norm2}",
                self.energy
            )));
        }
        self.scale /= norm2.sqrt();
        if self.leading_sign()? < 0.0 {
            self.scale = -self.scale;
        }
        Ok(self)
    }

    fn leading_sign(&self) -> Result<f64> {
        let (lo, hi) = (0.01, FRAC_PI_2 - 0.01);
        let samples = (0..SIGN_PROBE_POINTS)
            .map(|k| self.value(lo + (hi - lo) * k as f64 / (SIGN_PROBE_POINTS - 1) as f64))
            .collect::<Result<Vec<_>>>()?;
        let peak = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let first = samples
            .iter()
            .find(|v| v.abs() > 1e-3 * peak)
            .copied()
            .unwrap_or(1.0);
        Ok(first.signum())
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn exponents(&self) -> (f64, f64) {
        self.exponents
    }

    /// True when the function vanishes at both endpoints.
    pub fn is_bounded_state(&self) -> bool {
        self.exponents.0 > 0.0 && self.exponents.1 > 0.0
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        Ok(self.scale * (self.eval)(x)?)
    }

    pub fn norm_squared(&self) -> Result<f64> {
        let g = |x: f64| self.value(x).map(|v| v * v);
        quad::integrate_open(&g, (2.0 * self.exponents.0, 2.0 * self.exponents.1))
    }

    /// ∫ f g over (0, π/2).
    pub fn overlap(&self, other: &StateFunction) -> Result<f64> {
        let g = |x: f64| Ok(self.value(x)? * other.value(x)?);
        let p = (
            self.exponents.0 + other.exponents.0,
            self.exponents.1 + other.exponents.1,
        );
        quad::integrate_open(&g, p)
    }
}

impl WaveFunction for StateFunction {
    fn psi(&self, x: f64) -> Result<f64> {
        self.value(x)
    }
}

/// An eigenfunction of the partner Hamiltonian annihilated by the
/// intertwining operator.
#[derive(Debug, Clone)]
pub struct MissingState {
    pub state: StateFunction,
    /// True when it vanishes at both endpoints, decided from the exponents.
    pub physical: bool,
}

/// Ṽ(x) together with its analytic spectral bookkeeping.
pub trait PartnerPotential: Potential {
    fn params(&self) -> &PTParams;

    fn partner_value(&self, x: f64) -> Result<f64>;

    /// (λ̃, ν̃) with Ṽ ~ (λ̃−1)λ̃/(2 sin²x) and (ν̃−1)ν̃/(2 cos²x) at the ends.
    fn new_exponents(&self) -> (f64, f64);

    fn endpoint_coefficients(&self) -> (f64, f64) {
        let (l, n) = self.new_exponents();
        ((l - 1.0) * l / 2.0, (n - 1.0) * n / 2.0)
    }

    fn predicted_spectrum(&self) -> &PredictedSpectrum;

    /// Normalized image of the initial eigenfunction ψ_n.
    fn transformed_state(&self, n: usize) -> Result<StateFunction>;

    fn missing_states(&self) -> Result<Vec<MissingState>>;

    /// Normalized eigenfunctions of the k lowest predicted levels.
    fn eigenstates(&self, k: usize) -> Result<Vec<StateFunction>> {
        let missing = self.missing_states()?;
        let from_missing = |energy: f64| -> Result<StateFunction> {
            missing
                .iter()
                .find(|m| m.physical && m.state.energy == energy)
                .ok_or_else(|| Error::InvalidParameter(format!("no state for level {energy}")))?
                .state
                .clone()
                .normalized()
        };
        self.predicted_spectrum()
            .lowest(k)
            .into_iter()
            .map(|level| match level.provenance {
                Provenance::Retained { n } => match self.transformed_state(n) {
                    Err(Error::Degenerate(_)) => from_missing(level.energy),
                    other => other,
                },
                Provenance::Created => from_missing(level.energy),
            })
            .collect()
    }
}

pub fn exponent_from_coefficient(c: f64) -> f64 {
    0.5 + (0.25 + 2.0 * c).max(0.0).sqrt()
}

/// Grid used for nodelessness checks of transformation functions.
pub(crate) fn guarded_grid(points: usize) -> Vec<f64> {
    let (lo, hi) = (EVAL_GUARD, FRAC_PI_2 - EVAL_GUARD);
    (0..points)
        .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
        .collect()
}

const NODELESS_WINDOW: usize = 20;

/// Fails at the first sign change of `f` on the grid, or where |f| drops
/// below `rel_floor` times its largest value within ±20 grid points.
pub(crate) fn check_nodeless<F: Fn(f64) -> Result<f64>>(
    f: F,
    points: usize,
    rel_floor: f64,
) -> Result<()> {
    let xs = guarded_grid(points);
    let vals = xs.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    let sign = vals[0].signum();
    for (k, (x, v)) in xs.iter().zip(&vals).enumerate() {
        let window =
            &vals[k.saturating_sub(NODELESS_WINDOW)..(k + NODELESS_WINDOW + 1).min(vals.len())];
        let peak = window.iter().fold(0.0f64, |m, w| m.max(w.abs()));
        if !v.is_finite() || v.signum() != sign || v.abs() <= rel_floor * peak {
            return Err(Error::NodeFound { x: *x });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> PTParams {
        PTParams::new(5.0, 8.0).unwrap()
    }

    #[test]
    fn lowest_merges_created_and_skips_deleted() {
        let s = PredictedSpectrum::new(params(), vec![128.0, 115.52], vec![]);
        assert_eq!(s.energies(5), vec![84.5, 112.5, 115.52, 128.0, 144.5]);
        let d = PredictedSpectrum::new(params(), vec![], vec![3, 2]);
        assert_eq!(d.energies(5), vec![84.5, 112.5, 220.5, 264.5, 312.5]);
        assert_eq!(d.deleted_energies(), vec![144.5, 180.5]);
        assert_eq!(d.lowest(3)[2].provenance, Provenance::Retained { n: 4 });
    }

    #[test]
    fn created_below_ground() {
        let p = PTParams::new(3.0, 4.0).unwrap();
        let s = PredictedSpectrum::new(p, vec![19.0], vec![]);
        assert_eq!(s.energies(3), vec![19.0, 24.5, 40.5]);
        assert_eq!(s.lowest(1)[0].provenance, Provenance::Created);
    }

    #[test]
    fn coefficient_inversion() {
        for k in [1.5, 2.0, 3.0, 7.25] {
            let c = (k - 1.0) * k / 2.0;
            assert!((exponent_from_coefficient(c) - k).abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_and_sign() {
        let f: Evaluator = Arc::new(|x: f64| Ok(-3.0 * x.sin().powi(2) * x.cos().powi(2)));
        let s = StateFunction::new(1.0, (2.0, 2.0), f).normalized().unwrap();
        assert!((s.norm_squared().unwrap() - 1.0).abs() < 1e-12);
        assert!(s.value(0.3).unwrap() > 0.0);
    }

    #[test]
    fn nodeless_check_reports_position() {
        assert!(check_nodeless(|x: f64| Ok(1.0 + x), 4000, 1e-13).is_ok());
        match check_nodeless(|x: f64| Ok(x - 1.0), 4000, 1e-13) {
            Err(Error::NodeFound { x }) => assert!((x - 1.0).abs() < 1e-3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
