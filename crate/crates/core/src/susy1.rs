//! First-order transformations with a nodeless seed u at ε ≤ E_0:
//!
//! ```text
//! Ṽ = V − (ln u)″ = 2ε − V + α²,   α = u′/u
//! ψ̃_n = (−ψ_n′ + αψ_n) / √(2(E_n − ε)),   ψ̃_ε ∝ 1/u
//! ```

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::partner::{MissingState, PartnerPotential, PredictedSpectrum, StateFunction};
use crate::pt::{
    self, eigenfunction, general_solution, seed_from_q, PTParams, Potential, SchrodingerSolution,
    SeedSpec, Side, COLLISION_TOL,
};

const NODE_SCAN_POINTS: usize = 4000;
/// |u| below this multiple of |u′|·dist(x, ends) counts as a zero of u.
const SINGULAR_REL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct FirstOrderTransform {
    params: PTParams,
    seed: SchrodingerSolution,
    new_exponents: (f64, f64),
    spectrum: PredictedSpectrum,
}

impl FirstOrderTransform {
    /// Generic construction from a real seed; checks ε ≤ E_0 and that u is
    /// nodeless.
    pub fn new(params: &PTParams, seed: SchrodingerSolution) -> Result<Self> {
        if !seed.is_real() {
            return Err(Error::InvalidParameter(
                "first-order seeds need a real energy".into(),
            ));
        }
        let eps = seed.energy();
        let e0 = params.eigen_energy(0);
        let ground_seed = seed.seed().level() == Some(0);
        if !ground_seed && eps >= e0 - COLLISION_TOL {
            return Err(Error::Band {
                energy: eps,
                lower: f64::NEG_INFINITY,
                upper: e0,
            });
        }
        let nodes = pt::scan_sign_changes(&|x| seed.value(x), NODE_SCAN_POINTS)?;
        if let Some(&x) = nodes.first() {
            return Err(Error::NodeFound { x });
        }
        let (pl, pr) = seed.exponents();
        let shift = |p: f64, k: f64| if p == k { 1.0 } else { -1.0 };
        let new_exponents = (
            params.lambda() + shift(pl, params.lambda()),
            params.nu() + shift(pr, params.nu()),
        );
        if new_exponents.0 <= 1.0 || new_exponents.1 <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "partner exponents {new_exponents:?} must exceed 1"
            )));
        }
        let spectrum = if ground_seed {
            PredictedSpectrum::new(*params, Vec::new(), vec![0])
        } else if -pl > 0.0 && -pr > 0.0 {
            PredictedSpectrum::new(*params, vec![eps], Vec::new())
        } else {
            PredictedSpectrum::unchanged(*params)
        };
        Ok(Self {
            params: *params,
            seed,
            new_exponents,
            spectrum,
        })
    }

    pub fn seed(&self) -> &SchrodingerSolution {
        &self.seed
    }

    pub fn epsilon(&self) -> f64 {
        self.seed.energy()
    }

    fn seed_at(&self, x: f64) -> Result<(f64, f64)> {
        let (u, du) = self.seed.eval(x)?;
        let dist = x.min(FRAC_PI_2 - x);
        if u == 0.0 || u.abs() < SINGULAR_REL * du.abs() * dist {
            return Err(Error::Singular(x));
        }
        Ok((u, du))
    }

    /// Superpotential α = u′/u.
    pub fn alpha(&self, x: f64) -> Result<f64> {
        let (u, du) = self.seed_at(x)?;
        Ok(du / u)
    }
}

impl Potential for FirstOrderTransform {
    fn potential(&self, x: f64) -> Result<f64> {
        self.partner_value(x)
    }
}

impl PartnerPotential for FirstOrderTransform {
    fn params(&self) -> &PTParams {
        &self.params
    }

    fn partner_value(&self, x: f64) -> Result<f64> {
        let a = self.alpha(x)?;
        Ok(2.0 * self.epsilon() - self.params.potential_value(x)? + a * a)
    }

    fn new_exponents(&self) -> (f64, f64) {
        self.new_exponents
    }

    fn predicted_spectrum(&self) -> &PredictedSpectrum {
        &self.spectrum
    }

    fn transformed_state(&self, n: usize) -> Result<StateFunction> {
        let e = self.params.eigen_energy(n);
        let gap = e - self.epsilon();
        if gap.abs() < COLLISION_TOL {
            return Err(Error::Degenerate(e));
        }
        let psi = eigenfunction(&self.params, n)?;
        let this = self.clone();
        let norm = (2.0 * gap).sqrt();
        let eval = Arc::new(move |x: f64| {
            let (p, dp) = psi.eval(x)?;
            Ok((-dp + this.alpha(x)? * p) / norm)
        });
        StateFunction::new(e, self.new_exponents, eval).normalized()
    }

    fn missing_states(&self) -> Result<Vec<MissingState>> {
        let (pl, pr) = self.seed.exponents();
        let this = self.clone();
        let eval = Arc::new(move |x: f64| Ok(1.0 / this.seed_at(x)?.0));
        let state = StateFunction::new(self.epsilon(), (-pl, -pr), eval);
        let physical = state.is_bounded_state();
        let state = if physical { state.normalized()? } else { state };
        Ok(vec![MissingState { state, physical }])
    }
}

/// Ṽ(x) for an already constructed transform.
pub fn partner_value_first(t: &FirstOrderTransform, x: f64) -> Result<f64> {
    t.partner_value(x)
}

/// Seed ψ_0: Ṽ is the potential with (λ+1, ν+1) and E_0 disappears.
pub fn delete_ground(params: &PTParams) -> Result<FirstOrderTransform> {
    FirstOrderTransform::new(params, eigenfunction(params, 0)?)
}

/// Seed B = 1, A = −b/a + q with q > 0 below E_0; adds ε as the new ground
/// level.
pub fn create_ground(params: &PTParams, epsilon: f64, q: f64) -> Result<FirstOrderTransform> {
    if params.lambda() <= 2.0 || params.nu() <= 2.0 {
        return Err(Error::InvalidParameter(format!(
            "creating a ground level needs lambda, nu > 2 (got {}, {})",
            params.lambda(),
            params.nu()
        )));
    }
    check_below_ground(params, epsilon)?;
    if q <= 0.0 || !q.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "q must be positive (got {q})"
        )));
    }
    let seed = general_solution(params, seed_from_q(params, epsilon, q)?)?;
    FirstOrderTransform::new(params, seed)
}

/// Seed vanishing at x = 0 (left) or at x = π/2 (right); the spectrum is
/// unchanged.
pub fn isospectral_first(
    params: &PTParams,
    epsilon: f64,
    side: Side,
) -> Result<FirstOrderTransform> {
    check_below_ground(params, epsilon)?;
    let eps = Complex64::new(epsilon, 0.0);
    let seed = match side {
        Side::Left => general_solution(params, SeedSpec::vanishing_left(eps))?,
        Side::Right => {
            general_solution(&params.swapped(), SeedSpec::vanishing_left(eps))?.mirrored()?
        }
    };
    FirstOrderTransform::new(params, seed)
}

/// Normalized image of ψ_n under the transformation.
pub fn transform_eigenfunction_first(t: &FirstOrderTransform, n: usize) -> Result<StateFunction> {
    t.transformed_state(n)
}

fn check_below_ground(params: &PTParams, epsilon: f64) -> Result<()> {
    let e0 = params.eigen_energy(0);
    if !(epsilon < e0 - COLLISION_TOL) {
        return Err(Error::Band {
            energy: epsilon,
            lower: f64::NEG_INFINITY,
            upper: e0,
        });
    }
    Ok(())
}
