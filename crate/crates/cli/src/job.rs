use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use ptsusy_core::partner::{Level, PartnerPotential, PredictedSpectrum, Provenance};
use ptsusy_core::pt::{eigenfunction, PTParams, SchrodingerSolution, Side, WaveFunction};
use ptsusy_core::susy1::{create_ground, delete_ground, isospectral_first};
use ptsusy_core::susy2::{
    confluent_create, confluent_delete, confluent_iso, create_one, create_two, delete_one,
    delete_two, iso_complex, iso_two_real, move_level, ConfluentIsoVariant, DeleteLimit, Direction,
};
use ptsusy_core::verify::{
    compare_spectra, oracle_spectrum, residual_norm, OracleConfig, SpectrumReport,
};
use serde::Serialize;

use crate::config::{
    ConfluentVariantName, DirectionName, JobConfig, LimitName, SideName, Transform,
};
use crate::CliError;

pub const SPECTRUM_TOL: f64 = 1e-4;
pub const RESIDUAL_TOL: f64 = 1e-5;
/// The residual stencil runs on a grid this much finer than the oracle's.
pub const RESIDUAL_REFINEMENT: usize = 4;
const MAX_RESIDUAL_STATES: usize = 6;

fn core_err(e: ptsusy_core::Error) -> CliError {
    if e.is_validation() {
        CliError::Validation(format!("transform: {e}"))
    } else {
        CliError::Construction(e.to_string())
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn side(s: SideName) -> Side {
    match s {
        SideName::Left => Side::Left,
        SideName::Right => Side::Right,
    }
}

/// The potential a job works on: the initial one or a partner.
pub enum Partner {
    Original(PTParams, PredictedSpectrum),
    Transformed(Box<dyn PartnerPotential>),
}

pub enum State {
    Initial(Box<SchrodingerSolution>),
    Partner(ptsusy_core::partner::StateFunction),
}

impl WaveFunction for State {
    fn psi(&self, x: f64) -> ptsusy_core::Result<f64> {
        match self {
            State::Initial(u) => u.psi(x),
            State::Partner(s) => s.psi(x),
        }
    }
}

impl Partner {
    pub fn build(cfg: &JobConfig) -> Result<Self, CliError> {
        let p = PTParams::new(cfg.params.lambda, cfg.params.nu)
            .map_err(|e| CliError::Validation(format!("params: {e}")))?;
        let boxed = |r: ptsusy_core::Result<_>| -> Result<Box<dyn PartnerPotential>, CliError> {
            r.map_err(core_err)
        };
        let t: Box<dyn PartnerPotential> = match cfg.transform {
            Transform::None => return Ok(Partner::Original(p, PredictedSpectrum::unchanged(p))),
            Transform::DeleteGround => boxed(delete_ground(&p).map(|t| Box::new(t) as _))?,
            Transform::CreateGround { epsilon, q } => {
                boxed(create_ground(&p, epsilon, q).map(|t| Box::new(t) as _))?
            }
            Transform::IsospectralFirst { epsilon, side: s } => {
                boxed(isospectral_first(&p, epsilon, side(s)).map(|t| Box::new(t) as _))?
            }
            Transform::DeleteTwo { i } => boxed(delete_two(&p, i).map(|t| Box::new(t) as _))?,
            Transform::CreateTwo { eps1, eps2, q1, q2 } => {
                boxed(create_two(&p, eps1, eps2, q1, q2).map(|t| Box::new(t) as _))?
            }
            Transform::IsoTwoReal {
                eps1,
                eps2,
                side: s,
            } => boxed(iso_two_real(&p, eps1, eps2, side(s)).map(|t| Box::new(t) as _))?,
            Transform::CreateOne {
                eps1,
                eps2,
                q1,
                side: s,
            } => boxed(create_one(&p, eps1, eps2, q1, side(s)).map(|t| Box::new(t) as _))?,
            Transform::MoveLevel {
                i,
                target,
                direction,
                q,
            } => {
                let d = match direction {
                    DirectionName::Up => Direction::Up,
                    DirectionName::Down => Direction::Down,
                };
                boxed(move_level(&p, i, target, d, q).map(|t| Box::new(t) as _))?
            }
            Transform::DeleteOne { i, eps1, side: s } => {
                boxed(delete_one(&p, i, eps1, side(s)).map(|t| Box::new(t) as _))?
            }
            Transform::IsoComplex { re, im, side: s } => {
                boxed(iso_complex(&p, Complex64::new(re, im), side(s)).map(|t| Box::new(t) as _))?
            }
            Transform::ConfluentCreate {
                epsilon,
                w0,
                side: s,
            } => boxed(confluent_create(&p, epsilon, w0, side(s)).map(|t| Box::new(t) as _))?,
            Transform::ConfluentIso {
                epsilon,
                variant,
                w0,
            } => {
                let v = match (variant, w0) {
                    (ConfluentVariantName::General, None) => ConfluentIsoVariant::General,
                    (ConfluentVariantName::Mirrored, None) => ConfluentIsoVariant::Mirrored,
                    (ConfluentVariantName::Physical, Some(w0)) => {
                        ConfluentIsoVariant::Physical { w0 }
                    }
                    (ConfluentVariantName::Physical, None) => {
                        return Err(CliError::Validation(
                            "transform.w0: required for the physical variant".into(),
                        ))
                    }
                    (_, Some(_)) => {
                        return Err(CliError::Validation(
                            "transform.w0: only the physical variant takes w0".into(),
                        ))
                    }
                };
                boxed(confluent_iso(&p, epsilon, v).map(|t| Box::new(t) as _))?
            }
            Transform::ConfluentDelete { i, limit } => {
                let l = match limit {
                    LimitName::ToZero => DeleteLimit::ToZero,
                    LimitName::ToMinusOne => DeleteLimit::ToMinusOne,
                };
                boxed(confluent_delete(&p, i, l).map(|t| Box::new(t) as _))?
            }
        };
        Ok(Partner::Transformed(t))
    }

    pub fn params(&self) -> &PTParams {
        match self {
            Partner::Original(p, _) => p,
            Partner::Transformed(t) => t.params(),
        }
    }

    pub fn spectrum(&self) -> &PredictedSpectrum {
        match self {
            Partner::Original(_, s) => s,
            Partner::Transformed(t) => t.predicted_spectrum(),
        }
    }

    pub fn value(&self, x: f64) -> ptsusy_core::Result<f64> {
        match self {
            Partner::Original(p, _) => p.potential_value(x),
            Partner::Transformed(t) => t.partner_value(x),
        }
    }

    pub fn exponents(&self) -> (f64, f64) {
        match self {
            Partner::Original(p, _) => (p.lambda(), p.nu()),
            Partner::Transformed(t) => t.new_exponents(),
        }
    }

    pub fn endpoint_coefficients(&self) -> (f64, f64) {
        let (l, n) = self.exponents();
        ((l - 1.0) * l / 2.0, (n - 1.0) * n / 2.0)
    }

    pub fn eigenstates(&self, k: usize) -> Result<Vec<(f64, State)>, CliError> {
        match self {
            Partner::Original(p, _) => (0..k)
                .map(|n| {
                    Ok((
                        p.eigen_energy(n),
                        State::Initial(Box::new(eigenfunction(p, n).map_err(core_err)?)),
                    ))
                })
                .collect(),
            Partner::Transformed(t) => Ok(t
                .eigenstates(k)
                .map_err(core_err)?
                .into_iter()
                .map(|s| (s.energy(), State::Partner(s)))
                .collect()),
        }
    }
}

fn provenance_tag(p: Provenance) -> String {
    match p {
        Provenance::Retained { n } => format!("E_{n}"),
        Provenance::Created => "created".into(),
    }
}

#[derive(Serialize)]
struct LevelOut {
    energy: f64,
    provenance: String,
}

impl From<&Level> for LevelOut {
    fn from(l: &Level) -> Self {
        Self {
            energy: l.energy,
            provenance: provenance_tag(l.provenance),
        }
    }
}

#[derive(Serialize)]
struct SpectrumOut<'a> {
    case: &'a str,
    lambda: f64,
    nu: f64,
    transform: &'a Transform,
    levels: Vec<LevelOut>,
    created: Vec<f64>,
    deleted: Vec<f64>,
    new_exponents: (f64, f64),
    endpoint_coefficients: (f64, f64),
}

pub fn uniform_grid(samples: usize, (a, b): (f64, f64)) -> Vec<f64> {
    (0..samples)
        .map(|k| a + (b - a) * k as f64 / (samples - 1) as f64)
        .collect()
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn potential_csv(partner: &Partner, xs: &[f64]) -> Result<String, CliError> {
    let p = partner.params();
    let mut out = String::from("x,V,V_tilde\n");
    for &x in xs {
        let v = p.potential_value(x).map_err(core_err)?;
        let vt = partner.value(x).map_err(core_err)?;
        let _ = writeln!(out, "{},{},{}", num(x), num(v), num(vt));
    }
    Ok(out)
}

fn eigenfunction_csv(partner: &Partner, xs: &[f64], which: &[usize]) -> Result<String, CliError> {
    let k = which.iter().max().map_or(0, |m| m + 1);
    let states = partner.eigenstates(k)?;
    let mut out = String::from("x");
    for i in which {
        let _ = write!(out, ",psi_{i}");
    }
    out.push('\n');
    for &x in xs {
        out += &num(x);
        for &i in which {
            let v = states[i].1.psi(x).map_err(core_err)?;
            let _ = write!(out, ",{}", num(v));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn spectrum_json(
    cfg: &JobConfig,
    partner: &Partner,
    levels: usize,
) -> Result<String, CliError> {
    let s = partner.spectrum();
    let out = SpectrumOut {
        case: cfg.transform.name(),
        lambda: cfg.params.lambda,
        nu: cfg.params.nu,
        transform: &cfg.transform,
        levels: s.lowest(levels).iter().map(LevelOut::from).collect(),
        created: s.created().to_vec(),
        deleted: s.deleted_energies(),
        new_exponents: partner.exponents(),
        endpoint_coefficients: partner.endpoint_coefficients(),
    };
    Ok(serde_json::to_string_pretty(&out).expect("serializable") + "\n")
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))
}

/// Oracle settings from the config, then command-line overrides.
pub fn oracle_config(
    cfg: &JobConfig,
    levels: Option<usize>,
    grid: Option<usize>,
) -> Result<OracleConfig, CliError> {
    let o = &cfg.output.oracle;
    let base = OracleConfig::default();
    let oc = OracleConfig {
        grid_points: grid.or(o.grid_points).unwrap_or(base.grid_points),
        guard_delta: o.guard_delta.unwrap_or(base.guard_delta),
        levels_requested: levels
            .or(o.levels_requested)
            .unwrap_or(base.levels_requested),
        richardson: o.richardson.unwrap_or(base.richardson),
    };
    oc.validate()
        .map_err(|e| CliError::Validation(format!("output.oracle: {e}")))?;
    Ok(oc)
}

pub fn generate(cfg: &JobConfig, out: &Path) -> Result<(), CliError> {
    let partner = Partner::build(cfg)?;
    ensure_dir(out)?;
    let xs = uniform_grid(cfg.output.samples, cfg.output.x_range);
    write(&out.join("potential.csv"), &potential_csv(&partner, &xs)?)?;
    let levels = OracleConfig::default().levels_requested + 2;
    write(
        &out.join("spectrum.json"),
        &spectrum_json(cfg, &partner, levels)?,
    )?;
    if !cfg.output.eigenfunctions.is_empty() {
        let csv = eigenfunction_csv(&partner, &xs, &cfg.output.eigenfunctions)?;
        write(&out.join("eigenfunctions.csv"), &csv)?;
    }
    if cfg.output.verify {
        let report = run_verification(cfg, &partner, &oracle_config(cfg, None, None)?)?;
        write(&out.join("report.json"), &report.json())?;
        if !report.passed {
            return Err(CliError::VerificationFailed);
        }
    }
    Ok(())
}

pub fn verify(
    cfg: &JobConfig,
    out: &Path,
    levels: Option<usize>,
    grid: Option<usize>,
) -> Result<(), CliError> {
    let oc = oracle_config(cfg, levels, grid)?;
    let partner = Partner::build(cfg)?;
    ensure_dir(out)?;
    let report = run_verification(cfg, &partner, &oc)?;
    write(&out.join("report.json"), &report.json())?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::VerificationFailed)
    }
}

#[derive(Serialize)]
struct MatchOut {
    predicted: f64,
    provenance: String,
    oracle: f64,
    rel_error: f64,
}

#[derive(Serialize)]
struct ResidualOut {
    energy: f64,
    residual: f64,
    passed: bool,
}

#[derive(Serialize)]
pub struct VerificationReport {
    case: String,
    pub passed: bool,
    spectrum_passed: bool,
    rel_tol: f64,
    claimed: bool,
    oracle: Vec<f64>,
    matched: Vec<MatchOut>,
    unmatched_predicted: Vec<LevelOut>,
    unmatched_oracle: Vec<f64>,
    absent_as_expected: Vec<f64>,
    unexpectedly_present: Vec<f64>,
    residual_tol: f64,
    residual_grid_points: usize,
    residuals: Vec<ResidualOut>,
}

impl VerificationReport {
    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

/// Claimed energies take the provenance of the predicted level they equal.
fn claimed_levels(claimed: &[f64], predicted: &[Level]) -> Vec<Level> {
    claimed
        .iter()
        .map(|&energy| Level {
            energy,
            provenance: predicted
                .iter()
                .find(|l| (l.energy - energy).abs() <= 1e-12 * energy.abs().max(1.0))
                .map_or(Provenance::Created, |l| l.provenance),
        })
        .collect()
}

pub fn run_verification(
    cfg: &JobConfig,
    partner: &Partner,
    oc: &OracleConfig,
) -> Result<VerificationReport, CliError> {
    let oracle = match partner {
        Partner::Original(p, _) => oracle_spectrum(p, oc),
        Partner::Transformed(t) => oracle_spectrum(t.as_ref(), oc),
    }
    .map_err(core_err)?;
    let predicted = partner.spectrum().lowest(oc.levels_requested + 2);
    let levels = match &cfg.claimed_levels {
        Some(c) => claimed_levels(c, &predicted),
        None => predicted,
    };
    let report: SpectrumReport = compare_spectra(&levels, &oracle, SPECTRUM_TOL)
        .expect_absent(&partner.spectrum().deleted_energies());

    let residual_cfg = OracleConfig {
        grid_points: oc.grid_points * RESIDUAL_REFINEMENT,
        ..*oc
    };
    let mut residuals = Vec::new();
    for (energy, state) in partner.eigenstates(oc.levels_requested.min(MAX_RESIDUAL_STATES))? {
        let residual = match partner {
            Partner::Original(p, _) => residual_norm(p, &state, energy, &residual_cfg),
            Partner::Transformed(t) => residual_norm(t.as_ref(), &state, energy, &residual_cfg),
        }
        .map_err(core_err)?;
        residuals.push(ResidualOut {
            energy,
            residual,
            passed: residual <= RESIDUAL_TOL,
        });
    }
    let spectrum_passed = report.passed();
    Ok(VerificationReport {
        case: cfg.transform.name().into(),
        passed: spectrum_passed && residuals.iter().all(|r| r.passed),
        spectrum_passed,
        rel_tol: report.rel_tol,
        claimed: cfg.claimed_levels.is_some(),
        oracle: report.oracle,
        matched: report
            .matched
            .iter()
            .map(|m| MatchOut {
                predicted: m.predicted.energy,
                provenance: provenance_tag(m.predicted.provenance),
                oracle: m.oracle,
                rel_error: m.rel_error,
            })
            .collect(),
        unmatched_predicted: report
            .unmatched_predicted
            .iter()
            .map(LevelOut::from)
            .collect(),
        unmatched_oracle: report.unmatched_oracle,
        absent_as_expected: report.absent_as_expected,
        unexpectedly_present: report.unexpectedly_present,
        residual_tol: RESIDUAL_TOL,
        residual_grid_points: residual_cfg.grid_points,
        residuals,
    })
}
