use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub params: Params,
    pub transform: Transform,
    #[serde(default)]
    pub output: Output,
    /// Energies to verify instead of the analytic prediction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed_levels: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub lambda: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum SideName {
    #[default]
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum DirectionName {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ConfluentVariantName {
    General,
    Mirrored,
    Physical,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum LimitName {
    ToZero,
    ToMinusOne,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "case", rename_all = "snake_case", deny_unknown_fields)]
pub enum Transform {
    /// The initial potential itself.
    None,
    DeleteGround,
    CreateGround {
        epsilon: f64,
        q: f64,
    },
    IsospectralFirst {
        epsilon: f64,
        #[serde(default)]
        side: SideName,
    },
    DeleteTwo {
        i: usize,
    },
    CreateTwo {
        eps1: f64,
        eps2: f64,
        q1: f64,
        q2: f64,
    },
    IsoTwoReal {
        eps1: f64,
        eps2: f64,
        #[serde(default)]
        side: SideName,
    },
    CreateOne {
        eps1: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eps2: Option<f64>,
        q1: f64,
        #[serde(default)]
        side: SideName,
    },
    MoveLevel {
        i: usize,
        target: f64,
        direction: DirectionName,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<f64>,
    },
    DeleteOne {
        i: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eps1: Option<f64>,
        #[serde(default)]
        side: SideName,
    },
    IsoComplex {
        re: f64,
        im: f64,
        #[serde(default)]
        side: SideName,
    },
    ConfluentCreate {
        epsilon: f64,
        w0: f64,
        #[serde(default)]
        side: SideName,
    },
    ConfluentIso {
        epsilon: f64,
        variant: ConfluentVariantName,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        w0: Option<f64>,
    },
    ConfluentDelete {
        i: usize,
        limit: LimitName,
    },
}

impl Transform {
    pub fn name(&self) -> &'static str {
        match self {
            Transform::None => "none",
            Transform::DeleteGround => "delete_ground",
            Transform::CreateGround { .. } => "create_ground",
            Transform::IsospectralFirst { .. } => "isospectral_first",
            Transform::DeleteTwo { .. } => "delete_two",
            Transform::CreateTwo { .. } => "create_two",
            Transform::IsoTwoReal { .. } => "iso_two_real",
            Transform::CreateOne { .. } => "create_one",
            Transform::MoveLevel { .. } => "move_level",
            Transform::DeleteOne { .. } => "delete_one",
            Transform::IsoComplex { .. } => "iso_complex",
            Transform::ConfluentCreate { .. } => "confluent_create",
            Transform::ConfluentIso { .. } => "confluent_iso",
            Transform::ConfluentDelete { .. } => "confluent_delete",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Output {
    pub samples: usize,
    pub x_range: (f64, f64),
    /// Indices into the partner spectrum whose eigenfunctions are written.
    pub eigenfunctions: Vec<usize>,
    pub verify: bool,
    pub oracle: OracleOverrides,
}

impl Default for Output {
    fn default() -> Self {
        Self {
            samples: 1000,
            x_range: (0.02, FRAC_PI_2 - 0.02),
            eigenfunctions: Vec::new(),
            verify: true,
            oracle: OracleOverrides::default(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct OracleOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guard_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels_requested: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub richardson: Option<bool>,
}

fn invalid(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{path}: {msg}"))
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: JobConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            invalid(if path == "." { "config" } else { &path }, e.inner())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks that do not need a constructed transform; case preconditions
    /// are re-checked by the constructors.
    pub fn validate(&self) -> Result<(), CliError> {
        let finite = |path: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(invalid(path, format!("{v} is not finite")))
            }
        };
        finite("params.lambda", self.params.lambda)?;
        finite("params.nu", self.params.nu)?;
        let out = &self.output;
        if out.samples < 2 {
            return Err(invalid("output.samples", "need at least 2 samples"));
        }
        let (a, b) = out.x_range;
        if !(0.0 < a && a < b && b < FRAC_PI_2) {
            return Err(invalid(
                "output.x_range",
                format!("need 0 < a < b < π/2 (got [{a}, {b}])"),
            ));
        }
        if let Some(levels) = &self.claimed_levels {
            for (k, e) in levels.iter().enumerate() {
                finite(&format!("claimed_levels[{k}]"), *e)?;
            }
            if levels.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid("claimed_levels", "must be strictly increasing"));
            }
        }
        Ok(())
    }
}
