use std::path::Path;

use serde::Serialize;

use crate::config::{
    ConfluentVariantName, DirectionName, JobConfig, LimitName, Output, Params, SideName, Transform,
};
use crate::job::{potential_csv, uniform_grid, write, Partner};
use crate::CliError;

pub struct Dataset {
    pub name: &'static str,
    pub figure: u8,
    pub config: JobConfig,
}

fn job(lambda: f64, nu: f64, transform: Transform) -> JobConfig {
    JobConfig {
        params: Params { lambda, nu },
        transform,
        output: Output {
            verify: false,
            ..Output::default()
        },
        claimed_levels: None,
    }
}

/// One dataset per curve of the four figures.
pub fn datasets() -> Vec<Dataset> {
    let d = |name, figure, config| Dataset {
        name,
        figure,
        config,
    };
    vec![
        d(
            "fig1_delete_ground",
            1,
            job(3.0, 4.0, Transform::DeleteGround),
        ),
        d(
            "fig1_create_ground",
            1,
            job(
                3.0,
                4.0,
                Transform::CreateGround {
                    epsilon: 19.0,
                    q: 1.0,
                },
            ),
        ),
        d(
            "fig1_isospectral",
            1,
            job(
                3.0,
                4.0,
                Transform::IsospectralFirst {
                    epsilon: 19.0,
                    side: SideName::Left,
                },
            ),
        ),
        d(
            "fig2_delete_two",
            2,
            job(5.0, 8.0, Transform::DeleteTwo { i: 3 }),
        ),
        d(
            "fig2_create_two",
            2,
            job(
                5.0,
                8.0,
                Transform::CreateTwo {
                    eps1: 128.0,
                    eps2: 115.52,
                    q1: 1.0,
                    q2: -1.0,
                },
            ),
        ),
        d(
            "fig2_move_level",
            2,
            job(
                5.0,
                8.0,
                Transform::MoveLevel {
                    i: 3,
                    target: 169.28,
                    direction: DirectionName::Up,
                    q: None,
                },
            ),
        ),
        d(
            "fig3_complex",
            3,
            job(
                5.0,
                8.0,
                Transform::IsoComplex {
                    re: 176.344,
                    im: 1.5,
                    side: SideName::Left,
                },
            ),
        ),
        d(
            "fig4_confluent_create",
            4,
            job(
                5.0,
                8.0,
                Transform::ConfluentCreate {
                    epsilon: 147.92,
                    w0: 1.0,
                    side: SideName::Left,
                },
            ),
        ),
        d(
            "fig4_confluent_iso",
            4,
            job(
                5.0,
                8.0,
                Transform::ConfluentIso {
                    epsilon: 162.0,
                    variant: ConfluentVariantName::General,
                    w0: None,
                },
            ),
        ),
        d(
            "fig4_confluent_delete",
            4,
            job(
                5.0,
                8.0,
                Transform::ConfluentDelete {
                    i: 3,
                    limit: LimitName::ToZero,
                },
            ),
        ),
    ]
}

#[derive(Serialize)]
struct Entry<'a> {
    name: &'a str,
    figure: u8,
    file: String,
    config: &'a JobConfig,
    levels: Vec<f64>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    columns: [&'static str; 3],
    datasets: Vec<Entry<'a>>,
}

pub fn write_all(out: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    let sets = datasets();
    let mut entries = Vec::new();
    for set in &sets {
        let partner = Partner::build(&set.config)?;
        let xs = uniform_grid(set.config.output.samples, set.config.output.x_range);
        let file = format!("{}.csv", set.name);
        write(&out.join(&file), &potential_csv(&partner, &xs)?)?;
        entries.push(Entry {
            name: set.name,
            figure: set.figure,
            file,
            config: &set.config,
            levels: partner.spectrum().energies(6),
        });
    }
    let manifest = Manifest {
        columns: ["x", "V", "V_tilde"],
        datasets: entries,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("serializable") + "\n";
    write(&out.join("manifest.json"), &text)
}
