//! Brute-force checks that consume only sampled potentials and wave
//! functions: a finite-difference spectrum oracle, residual norms,
//! quadrature and spectrum comparison reports.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::partner::{Level, Provenance};
use crate::pt::{Potential, WaveFunction, EVAL_GUARD};
use crate::quad;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Number of grid intervals between the guard points.
    pub grid_points: usize,
    /// Dirichlet conditions are imposed at δ and π/2 − δ.
    pub guard_delta: f64,
    pub levels_requested: usize,
    /// Combine the N and 2N grids as (4E_{2N} − E_N)/3.
    pub richardson: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            grid_points: 4000,
            guard_delta: 1e-4,
            levels_requested: 6,
            richardson: true,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 500 {
            return Err(Error::InvalidParameter(format!(
                "grid_points = {} must be at least 500",
                self.grid_points
            )));
        }
        if !(self.guard_delta > 0.0 && self.guard_delta < 0.01) {
            return Err(Error::InvalidParameter(format!(
                "guard_delta = {} must lie in (0, 0.01)",
                self.guard_delta
            )));
        }
        if self.levels_requested == 0 {
            return Err(Error::InvalidParameter(
                "levels_requested must be positive".into(),
            ));
        }
        Ok(())
    }

    fn step(&self, intervals: usize) -> f64 {
        (FRAC_PI_2 - 2.0 * self.guard_delta) / intervals as f64
    }
}

fn sample<P: Potential + ?Sized>(potential: &P, x: f64) -> Result<f64> {
    let v = potential.potential(x)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(x))
    }
}

/// −½d²/dx² + V on the interior points of a uniform grid.
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

const STURM_PIVOT_GUARD: f64 = 1e-300;
const BISECTION_MAX_ITER: usize = 200;

impl Tridiagonal {
    fn new(v: &[f64], h: f64) -> Self {
        Self {
            diag: v.iter().map(|v| 1.0 / (h * h) + v).collect(),
            off: -0.5 / (h * h),
        }
    }

    /// Number of eigenvalues below `e`.
    fn sturm_count(&self, e: f64) -> usize {
        let off2 = self.off * self.off;
        let mut count = 0;
        let mut q = 1.0;
        for (i, d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - e } else { d - e - off2 / q };
            if q.abs() < STURM_PIVOT_GUARD {
                q = -STURM_PIVOT_GUARD;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().fold(f64::INFINITY, |m, d| m.min(d - r));
        let hi = self
            .diag
            .iter()
            .fold(f64::NEG_INFINITY, |m, d| m.max(d + r));
        (lo, hi)
    }

    /// The k-th eigenvalue (k = 0 lowest) by bisection.
    fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..BISECTION_MAX_ITER {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) || mid == lo || mid == hi {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector for an eigenvalue estimate by inverse iteration.
    fn eigenvector(&self, e: f64) -> Vec<f64> {
        let n = self.diag.len();
        let shift = e + 1e-10 * e.abs().max(1.0);
        let mut y = vec![1.0; n];
        for _ in 0..4 {
            y = self.solve_shifted(shift, &y);
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            y.iter_mut().for_each(|v| *v /= norm);
        }
        y
    }

    // Thomas algorithm for (T − σ)y = b.
    fn solve_shifted(&self, sigma: f64, b: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut pivot = self.diag[0] - sigma;
        c[0] = self.off / pivot;
        d[0] = b[0] / pivot;
        for i in 1..n {
            pivot = self.diag[i] - sigma - self.off * c[i - 1];
            if pivot.abs() < STURM_PIVOT_GUARD {
                pivot = STURM_PIVOT_GUARD;
            }
            c[i] = self.off / pivot;
            d[i] = (b[i] - self.off * d[i - 1]) / pivot;
        }
        let mut y = vec![0.0; n];
        y[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            y[i] = d[i] - c[i] * y[i + 1];
        }
        y
    }
}

/// V sampled at the interior points of the grid with `intervals` steps.
fn interior_samples<P: Potential + ?Sized>(
    potential: &P,
    cfg: &OracleConfig,
    intervals: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let h = cfg.step(intervals);
    let xs: Vec<f64> = (1..intervals)
        .map(|i| cfg.guard_delta + i as f64 * h)
        .collect();
    let vs = xs
        .iter()
        .map(|&x| sample(potential, x))
        .collect::<Result<Vec<_>>>()?;
    Ok((xs, vs))
}

/// Lowest `cfg.levels_requested` eigenvalues of −½d²/dx² + V with Dirichlet
/// ends at the guard points.
pub fn oracle_spectrum<P: Potential + ?Sized>(
    potential: &P,
    cfg: &OracleConfig,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    let n = cfg.grid_points;
    let k = cfg.levels_requested;
    if !cfg.richardson {
        let (_, v) = interior_samples(potential, cfg, n)?;
        let t = Tridiagonal::new(&v, cfg.step(n));
        return Ok((0..k).map(|j| t.eigenvalue(j)).collect());
    }
    // the coarse interior points are the odd-numbered fine ones
    let (_, fine) = interior_samples(potential, cfg, 2 * n)?;
    let coarse: Vec<f64> = fine.iter().skip(1).step_by(2).copied().collect();
    let t_fine = Tridiagonal::new(&fine, cfg.step(2 * n));
    let t_coarse = Tridiagonal::new(&coarse, cfg.step(n));
    Ok((0..k)
        .map(|j| (4.0 * t_fine.eigenvalue(j) - t_coarse.eigenvalue(j)) / 3.0)
        .collect())
}

/// An eigenvector of the discretized operator with its sign-change count.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleState {
    pub energy: f64,
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    pub nodes: usize,
}

/// Eigenpairs on the N grid, without extrapolation.
pub fn oracle_states<P: Potential + ?Sized>(
    potential: &P,
    cfg: &OracleConfig,
) -> Result<Vec<OracleState>> {
    cfg.validate()?;
    let n = cfg.grid_points;
    let (xs, v) = interior_samples(potential, cfg, n)?;
    let t = Tridiagonal::new(&v, cfg.step(n));
    Ok((0..cfg.levels_requested)
        .map(|j| {
            let energy = t.eigenvalue(j);
            let values = t.eigenvector(energy);
            let nodes = count_sign_changes(&values, 1e-8);
            OracleState {
                energy,
                xs: xs.clone(),
                values,
                nodes,
            }
        })
        .collect())
}

/// Sign changes of a sampled function, skipping samples below
/// `rel_floor` times the largest magnitude.
pub fn count_sign_changes(values: &[f64], rel_floor: f64) -> usize {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut last = 0.0;
    let mut changes = 0;
    for &v in values.iter().filter(|v| v.abs() > rel_floor * peak) {
        if last != 0.0 && v.signum() != last {
            changes += 1;
        }
        last = v.signum();
    }
    changes
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedLevel {
    pub predicted: Level,
    pub oracle: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub predicted: Vec<Level>,
    pub oracle: Vec<f64>,
    pub rel_tol: f64,
    pub matched: Vec<MatchedLevel>,
    pub unmatched_predicted: Vec<Level>,
    pub unmatched_oracle: Vec<f64>,
    /// Deleted energies confirmed absent from the oracle spectrum.
    pub absent_as_expected: Vec<f64>,
    /// Deleted energies that the oracle still finds.
    pub unexpectedly_present: Vec<f64>,
    pub verdict: Verdict,
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Greedy in-order matching of two ascending lists. Predicted levels above
/// the highest oracle level (plus tolerance) are outside the probed range.
pub fn compare_spectra(predicted: &[Level], oracle: &[f64], rel_tol: f64) -> SpectrumReport {
    let ceiling = oracle
        .last()
        .map_or(f64::NEG_INFINITY, |e| e + rel_tol * e.abs());
    let probed: Vec<Level> = predicted
        .iter()
        .copied()
        .filter(|l| l.energy <= ceiling)
        .collect();
    let (mut i, mut j) = (0, 0);
    let mut matched = Vec::new();
    let mut unmatched_predicted = Vec::new();
    let mut unmatched_oracle = Vec::new();
    while i < probed.len() && j < oracle.len() {
        let (p, o) = (probed[i], oracle[j]);
        let err = rel_diff(p.energy, o);
        if err <= rel_tol {
            matched.push(MatchedLevel {
                predicted: p,
                oracle: o,
                rel_error: err,
            });
            i += 1;
            j += 1;
        } else if p.energy < o {
            unmatched_predicted.push(p);
            i += 1;
        } else {
            unmatched_oracle.push(o);
            j += 1;
        }
    }
    unmatched_predicted.extend_from_slice(&probed[i..]);
    unmatched_oracle.extend_from_slice(&oracle[j..]);
    let verdict = if unmatched_predicted.is_empty() && unmatched_oracle.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    SpectrumReport {
        predicted: predicted.to_vec(),
        oracle: oracle.to_vec(),
        rel_tol,
        matched,
        unmatched_predicted,
        unmatched_oracle,
        absent_as_expected: Vec::new(),
        unexpectedly_present: Vec::new(),
        verdict,
    }
}

impl SpectrumReport {
    /// Records which deleted energies are absent from the oracle spectrum;
    /// any that is present fails the report.
    pub fn expect_absent(mut self, energies: &[f64]) -> Self {
        let ceiling = self.oracle.last().copied().unwrap_or(f64::NEG_INFINITY);
        for &e in energies
            .iter()
            .filter(|&&e| e <= ceiling * (1.0 + self.rel_tol))
        {
            if self.oracle.iter().any(|&o| rel_diff(e, o) <= self.rel_tol) {
                self.unexpectedly_present.push(e);
                self.verdict = Verdict::Fail;
            } else {
                self.absent_as_expected.push(e);
            }
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn max_rel_error(&self) -> f64 {
        self.matched.iter().fold(0.0, |m, l| m.max(l.rel_error))
    }
}

impl fmt::Display for SpectrumReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>14} {:>16} {:>10}  origin",
            "predicted", "oracle", "rel err"
        )?;
        for m in &self.matched {
            let origin = match m.predicted.provenance {
                Provenance::Retained { n } => format!("E_{n}"),
                Provenance::Created => "created".to_string(),
            };
            writeln!(
                f,
                "{:>14.8} {:>16.8} {:>10.2e}  {origin}",
                m.predicted.energy, m.oracle, m.rel_error
            )?;
        }
        for l in &self.unmatched_predicted {
            writeln!(f, "{:>14.8} {:>16} {:>10}  unmatched", l.energy, "-", "-")?;
        }
        for o in &self.unmatched_oracle {
            writeln!(f, "{:>14} {:>16.8} {:>10}  extra oracle level", "-", o, "-")?;
        }
        for e in &self.absent_as_expected {
            writeln!(f, "{e:>14.8} absent as expected")?;
        }
        for e in &self.unexpectedly_present {
            writeln!(f, "{e:>14.8} deleted but present")?;
        }
        write!(f, "verdict: {:?}", self.verdict)
    }
}

/// max |−½f″ + Vf − Ef| over the interior grid, divided by max |Ef|.
pub fn residual_norm<P, F>(potential: &P, f: &F, energy: f64, cfg: &OracleConfig) -> Result<f64>
where
    P: Potential + ?Sized,
    F: WaveFunction + ?Sized,
{
    cfg.validate()?;
    let n = cfg.grid_points;
    let h = cfg.step(n);
    let xs: Vec<f64> = (0..=n).map(|i| cfg.guard_delta + i as f64 * h).collect();
    let fs = xs.iter().map(|&x| f.psi(x)).collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for i in 2..n - 1 {
        let d2 = (-fs[i - 2] + 16.0 * fs[i - 1] - 30.0 * fs[i] + 16.0 * fs[i + 1] - fs[i + 2])
            / (12.0 * h * h);
        let v = sample(potential, xs[i])?;
        worst = worst.max((-0.5 * d2 + (v - energy) * fs[i]).abs());
    }
    let scale = fs.iter().fold(0.0f64, |m, v| m.max((energy * v).abs()));
    Ok(if scale > 0.0 { worst / scale } else { worst })
}

/// ∫ f^power over `interval` ⊂ [0, π/2], where f ~ sin^p x at 0 and
/// cos^q x at π/2 with (p, q) = `exponents`. Endpoints of the domain are
/// handled by a power-law tail below the evaluator guard.
pub fn quadrature<F: WaveFunction + ?Sized>(
    f: &F,
    power: u32,
    interval: (f64, f64),
    exponents: (f64, f64),
) -> Result<f64> {
    if !(power == 1 || power == 2) {
        return Err(Error::InvalidParameter(format!(
            "power {power} must be 1 or 2"
        )));
    }
    let (a, b) = interval;
    if !(0.0 <= a && a < b && b <= FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!(
            "interval ({a}, {b}) not inside [0, π/2]"
        )));
    }
    let g = |x: f64| f.psi(x).map(|v| v.powi(power as i32));
    let p = power as f64;
    let (lo, hi) = (a.max(EVAL_GUARD), b.min(FRAC_PI_2 - EVAL_GUARD));
    let mut total = 0.0;
    if a < EVAL_GUARD {
        total += quad::power_tail(EVAL_GUARD, g(lo)?, p * exponents.0, 0.0)?;
    }
    if b > FRAC_PI_2 - EVAL_GUARD {
        total += quad::power_tail(EVAL_GUARD, g(hi)?, p * exponents.1, FRAC_PI_2)?;
    }
    if hi > lo {
        total += quad::adaptive_simpson(&g, lo, hi, 1e-12, 1e-10)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt::{eigenfunction, PTParams};
    use std::f64::consts::PI;

    fn pt_potential(l: f64, n: f64) -> impl Fn(f64) -> Result<f64> {
        let p = PTParams::new(l, n).unwrap();
        move |x| p.potential_value(x)
    }

    fn levels(energies: &[f64]) -> Vec<Level> {
        energies
            .iter()
            .enumerate()
            .map(|(n, &energy)| Level {
                energy,
                provenance: Provenance::Retained { n },
            })
            .collect()
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::default().validate().is_ok());
        let small = OracleConfig {
            grid_points: 499,
            ..Default::default()
        };
        assert!(small.validate().is_err());
        let guard = OracleConfig {
            guard_delta: 0.01,
            ..Default::default()
        };
        assert!(guard.validate().is_err());
    }

    #[test]
    fn free_box() {
        let cfg = OracleConfig {
            levels_requested: 3,
            ..Default::default()
        };
        let e = oracle_spectrum(&|_x: f64| Ok(0.0), &cfg).unwrap();
        let width = FRAC_PI_2 - 2.0 * cfg.guard_delta;
        for (k, e) in e.iter().enumerate() {
            let exact = ((k + 1) as f64 * PI / width).powi(2) / 2.0;
            assert!(rel_diff(*e, exact) < 1e-8, "{e} vs {exact}");
        }
        // the shrunken box differs from 2k² only through the guard
        assert!(rel_diff(e[0], 2.0) < 1e-3);
    }

    #[test]
    fn base_spectra() {
        let cfg = OracleConfig {
            levels_requested: 4,
            ..Default::default()
        };
        let e = oracle_spectrum(&pt_potential(3.0, 4.0), &cfg).unwrap();
        for (got, want) in e.iter().zip([24.5, 40.5, 60.5, 84.5]) {
            assert!(rel_diff(*got, want) < 1e-6, "{got} vs {want}");
        }
        let e = oracle_spectrum(&pt_potential(5.0, 8.0), &cfg).unwrap();
        for (got, want) in e.iter().zip([84.5, 112.5, 144.5, 180.5]) {
            assert!(rel_diff(*got, want) < 1e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn second_order_convergence() {
        let v = pt_potential(3.0, 4.0);
        let run = |n| {
            let cfg = OracleConfig {
                grid_points: n,
                levels_requested: 3,
                richardson: false,
                ..Default::default()
            };
            oracle_spectrum(&v, &cfg).unwrap()
        };
        let (coarse, fine) = (run(1000), run(2000));
        for (k, want) in [24.5, 40.5, 60.5].iter().enumerate() {
            let ratio = (coarse[k] - want) / (fine[k] - want);
            assert!((3.5..=4.5).contains(&ratio), "level {k}: ratio {ratio}");
        }
    }

    #[test]
    fn oracle_eigenvectors_have_increasing_nodes() {
        let cfg = OracleConfig {
            levels_requested: 5,
            ..Default::default()
        };
        let states = oracle_states(&pt_potential(5.0, 8.0), &cfg).unwrap();
        for (k, s) in states.iter().enumerate() {
            assert_eq!(s.nodes, k);
        }
    }

    #[test]
    fn non_finite_sample_is_reported() {
        let cfg = OracleConfig::default();
        let bad = |x: f64| Ok(if x > 1.0 { f64::NAN } else { 0.0 });
        assert!(matches!(
            oracle_spectrum(&bad, &cfg),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn identical_spectra_pass() {
        let e = [24.5, 40.5, 60.5];
        let r = compare_spectra(&levels(&e), &e, 1e-4);
        assert!(r.passed());
        assert_eq!(r.matched.len(), 3);
        assert_eq!(r.max_rel_error(), 0.0);
    }

    #[test]
    fn missing_prediction_fails() {
        let r = compare_spectra(
            &levels(&[24.5, 60.5, 84.5]),
            &[24.5, 40.5, 60.5, 84.5],
            1e-4,
        );
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.unmatched_oracle, vec![40.5]);
        let r = compare_spectra(&levels(&[19.0, 24.5, 40.5]), &[24.5, 40.5], 1e-4);
        assert_eq!(r.unmatched_predicted.len(), 1);
        assert_eq!(r.unmatched_predicted[0].energy, 19.0);
    }

    #[test]
    fn levels_above_probe_are_ignored() {
        let r = compare_spectra(&levels(&[24.5, 40.5, 60.5, 84.5]), &[24.5, 40.5], 1e-4);
        assert!(r.passed());
    }

    #[test]
    fn expected_absent_levels() {
        let oracle = [84.5, 112.5, 220.5, 264.5];
        let predicted = levels(&[84.5, 112.5, 220.5, 264.5, 312.5]);
        let r = compare_spectra(&predicted, &oracle, 1e-4).expect_absent(&[144.5, 180.5]);
        assert!(r.passed());
        assert_eq!(r.absent_as_expected, vec![144.5, 180.5]);
        let r = compare_spectra(&predicted, &oracle, 1e-4).expect_absent(&[112.5]);
        assert!(!r.passed());
    }

    #[test]
    fn residual_of_exact_eigenpair() {
        let p = PTParams::new(3.0, 4.0).unwrap();
        let v = pt_potential(3.0, 4.0);
        let psi = eigenfunction(&p, 2).unwrap();
        let cfg = OracleConfig::default();
        let e = p.eigen_energy(2);
        assert!(residual_norm(&v, &psi, e, &cfg).unwrap() < 1e-5);
        let wrong = residual_norm(&v, &psi, e + 1.0, &cfg).unwrap();
        assert!(wrong > 1e-5 && (wrong * e - 1.0).abs() < 0.1, "{wrong}");
    }

    #[test]
    fn quadrature_examples() {
        let s = quadrature(&|x: f64| Ok(x.sin()), 2, (0.0, FRAC_PI_2), (1.0, 0.0)).unwrap();
        assert!((s - PI / 4.0).abs() < 1e-10);
        let p = PTParams::new(3.0, 4.0).unwrap();
        let psi = eigenfunction(&p, 0).unwrap();
        let n = quadrature(&psi, 2, (0.0, FRAC_PI_2), (3.0, 4.0)).unwrap();
        assert!((n - 1.0).abs() < 1e-9);
        let blow_up = |x: f64| Ok(x.cos().powf(-3.0));
        assert!(matches!(
            quadrature(&blow_up, 2, (0.5, FRAC_PI_2), (0.0, -3.0)),
            Err(Error::Divergent { .. })
        ));
        assert!(quadrature(&psi, 3, (0.0, 1.0), (3.0, 4.0)).is_err());
    }
}
