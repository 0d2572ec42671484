//! Subcommand implementations. Each command computes everything first and
//! only then writes its files, in a fixed order.

use std::fs;
use std::path::{Path, PathBuf};

use log::info;
use serde::Serialize;
use stirap_core::ode::Tolerances;
use stirap_core::protocol::{
    h_population_scan, log_log_slope, run_state_transfer_polarization, run_state_transfer_simple,
    simulate_emission, sweep_omega,
};
use stirap_core::pulse::{adiabaticity_check, closed_form_c, design_emission_schedule};
use stirap_core::{
    AdiabaticityReport, ChannelModel, PhysicalParams, PulseSchedule, QubitState, TransferOutcome,
};

use crate::config::{check_omegas, ExperimentConfig};
use crate::error::{CliError, CliResult};
use crate::output::{read_schedule, schedule_table, Table};

pub const POPULATION_HEADER: [&str; 7] =
    ["t", "P_g1", "P_g2_coherent", "P_h", "P_r", "Re_f", "Im_f"];

/// Files produced by one command, in the order they were written.
#[derive(Debug, Default)]
pub struct Written(pub Vec<PathBuf>);

enum Artifact {
    Csv(PathBuf, Table),
    Json(PathBuf, Vec<u8>),
}

fn json<T: Serialize>(path: PathBuf, value: &T) -> Artifact {
    Artifact::Json(path, crate::output::to_json_bytes(value))
}

fn flush(dir: &Path, artifacts: Vec<Artifact>) -> CliResult<Written> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Written::default();
    for artifact in artifacts {
        let path = match artifact {
            Artifact::Csv(path, table) => {
                table.write(&path)?;
                path
            }
            Artifact::Json(path, bytes) => {
                fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
                path
            }
        };
        info!("wrote {}", path.display());
        written.0.push(path);
    }
    Ok(written)
}

/// Ω in units of Γ, as used in file names: `2`, `2.5`, `40`.
fn omega_label(w: f64) -> String {
    format!("{w}")
}

fn design_schedule(
    config: &ExperimentConfig,
    params: &PhysicalParams,
) -> CliResult<(Table, PulseSchedule)> {
    let grid = params.grid(config.schedule.n_points)?;
    let (target, schedule) = design_emission_schedule(params, &grid, &config.inversion_options())?;
    let mut table = Table::new(&["t", "Re_f", "Im_f"]);
    for (t, f) in grid.times().into_iter().zip(target.values()) {
        table.push(vec![t, f.re, f.im]);
    }
    Ok((table, schedule))
}

/// Designs the emission schedule (or reloads one from `schedule_csv`) and
/// writes `schedule.csv`, `target.csv` (fresh designs only) and
/// `adiabaticity.json`.
pub fn design(
    config: &ExperimentConfig,
    dir: &Path,
    schedule_csv: Option<&Path>,
) -> CliResult<Written> {
    let params = config.physical_params();
    let mut artifacts = Vec::new();
    let schedule = match schedule_csv {
        Some(path) => read_schedule(path)?,
        None => {
            let (target, schedule) = design_schedule(config, &params)?;
            artifacts.push(Artifact::Csv(dir.join("target.csv"), target));
            schedule
        }
    };
    let report = adiabaticity_check(&schedule, &params, config.adiabaticity.threshold);
    artifacts.insert(
        0,
        Artifact::Csv(dir.join("schedule.csv"), schedule_table(&schedule)),
    );
    artifacts.push(json(dir.join("adiabaticity.json"), &report));
    flush(dir, artifacts)
}

#[derive(Debug, Serialize)]
struct Fig3Summary {
    omega_over_gamma: Vec<f64>,
    linf_distance: Vec<f64>,
    emission_probability: Vec<f64>,
    max_h_population: Vec<f64>,
    ideal_peak: f64,
    ideal_peak_time: f64,
    strictly_decreasing: bool,
}

/// One population trace per Ω plus the ideal adiabatic trace, and a summary
/// with the L∞ distance of each P_r(t) to the ideal one.
pub fn fig3(config: &ExperimentConfig, dir: &Path, omegas: &[f64]) -> CliResult<Written> {
    check_omegas("fig3 omega list", omegas)?;
    let base = config.physical_params();
    let (_, schedule) = design_schedule(config, &base)?;
    let grid = *schedule.grid();
    let times = grid.times();

    // dark state |D⟩ = cos θ|g₁⟩ − sin θ|r⟩ with amplitude c(t)
    let c = closed_form_c(&schedule, base.gamma);
    let mut ideal = Table::new(&POPULATION_HEADER);
    let mut ideal_pr = Vec::with_capacity(grid.len());
    for (k, &t) in times.iter().enumerate() {
        let (s, co) = schedule.theta()[k].sin_cos();
        let f = -c[k] * s;
        ideal_pr.push(f.norm_sqr());
        ideal.push(vec![
            t,
            (c[k] * co).norm_sqr(),
            0.0,
            0.0,
            f.norm_sqr(),
            f.re,
            f.im,
        ]);
    }
    let (peak_index, ideal_peak) = ideal_pr
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |m, (k, v)| if v > m.1 { (k, v) } else { m });

    let mut artifacts = Vec::new();
    let mut summary = Fig3Summary {
        omega_over_gamma: omegas.to_vec(),
        linf_distance: Vec::new(),
        emission_probability: Vec::new(),
        max_h_population: Vec::new(),
        ideal_peak,
        ideal_peak_time: times[peak_index],
        strictly_decreasing: false,
    };
    for &w in omegas {
        let params = base.with_omega(w * base.gamma);
        let run = simulate_emission(
            &params,
            &schedule.with_omega(params.omega)?,
            &Tolerances::default(),
        )?;
        let mut table = Table::new(&POPULATION_HEADER);
        let mut distance = 0.0_f64;
        for (k, state) in run.trajectory.states.iter().enumerate() {
            let [g1, g2, h, r] = state.populations();
            distance = distance.max((r - ideal_pr[k]).abs());
            table.push(vec![times[k], g1, g2, h, r, state.c_r.re, state.c_r.im]);
        }
        summary.linf_distance.push(distance);
        summary.emission_probability.push(run.emission_probability);
        summary
            .max_h_population
            .push(run.trajectory.max_population(stirap_core::state::H));
        artifacts.push(Artifact::Csv(
            dir.join(format!("fig3_omega_{}.csv", omega_label(w))),
            table,
        ));
    }
    summary.strictly_decreasing = summary.linf_distance.windows(2).all(|p| p[1] < p[0]);
    artifacts.push(Artifact::Csv(dir.join("fig3_ideal.csv"), ideal));
    artifacts.push(json(dir.join("fig3_summary.json"), &summary));
    flush(dir, artifacts)
}

#[derive(Debug, Serialize)]
struct Fig4Summary {
    omega_over_gamma: Vec<f64>,
    success_probability: Vec<f64>,
    strictly_increasing: bool,
    alpha_re: f64,
    alpha_im: f64,
    tau: f64,
}

/// Absorption success against Ω/Γ.
pub fn fig4(
    config: &ExperimentConfig,
    dir: &Path,
    omegas: &[f64],
    channel: &ChannelModel,
) -> CliResult<Written> {
    check_omegas("fig4 omega list", omegas)?;
    channel.validate()?;
    let params = config.physical_params();
    let rates: Vec<f64> = omegas.iter().map(|w| w * params.gamma).collect();
    let curve = sweep_omega(&rates, &params, channel, &config.chain_options())?;
    let success: Vec<f64> = curve.iter().map(|(_, s)| *s).collect();

    let mut table = Table::new(&["omega_over_gamma", "success_probability"]);
    for (&w, &s) in omegas.iter().zip(&success) {
        table.push(vec![w, s]);
    }
    let summary = Fig4Summary {
        omega_over_gamma: omegas.to_vec(),
        strictly_increasing: success.windows(2).all(|p| p[1] > p[0]),
        success_probability: success,
        alpha_re: channel.alpha.re,
        alpha_im: channel.alpha.im,
        tau: channel.tau,
    };
    flush(
        dir,
        vec![
            Artifact::Csv(dir.join("fig4.csv"), table),
            json(dir.join("fig4_summary.json"), &summary),
        ],
    )
}

#[derive(Debug, Serialize)]
struct HScanSummary {
    omega_over_gamma: Vec<f64>,
    max_h_population: Vec<f64>,
    /// Least-squares slope of ln max|c_h|² against ln Ω; null when a point
    /// is zero.
    log_log_slope: f64,
}

/// Peak |h⟩ population of the emitter against Ω/Γ.
pub fn hscan(config: &ExperimentConfig, dir: &Path, omegas: &[f64]) -> CliResult<Written> {
    check_omegas("hscan omega list", omegas)?;
    let params = config.physical_params();
    let rates: Vec<f64> = omegas.iter().map(|w| w * params.gamma).collect();
    let scan = h_population_scan(&rates, &params, &config.chain_options())?;
    let values: Vec<f64> = scan.iter().map(|(_, h)| *h).collect();
    let mut table = Table::new(&["omega_over_gamma", "max_h_population"]);
    for (&w, &h) in omegas.iter().zip(&values) {
        table.push(vec![w, h]);
    }
    let usable = scan.len() >= 2 && scan.iter().all(|(w, h)| *w > 0.0 && *h > 0.0);
    let summary = HScanSummary {
        omega_over_gamma: omegas.to_vec(),
        max_h_population: values,
        log_log_slope: if usable {
            log_log_slope(&scan)
        } else {
            f64::NAN
        },
    };
    flush(
        dir,
        vec![
            Artifact::Csv(dir.join("hscan.csv"), table),
            json(dir.join("hscan_summary.json"), &summary),
        ],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    Simple,
    Polarization,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::Simple => "simple",
            Protocol::Polarization => "polarization",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TransferReport {
    pub protocol: &'static str,
    #[serde(flatten)]
    pub outcome: TransferOutcome,
}

/// Runs one state transfer and writes `transfer_<protocol>.json`.
pub fn transfer(
    config: &ExperimentConfig,
    dir: &Path,
    protocol: Protocol,
    qubit: &QubitState,
    channel: &ChannelModel,
) -> CliResult<(TransferReport, Written)> {
    let qubit = QubitState::new(qubit.a, qubit.b)?;
    channel.validate()?;
    let params = config.physical_params();
    let opts = config.chain_options();
    let outcome = match protocol {
        Protocol::Simple => run_state_transfer_simple(&qubit, &params, channel, &opts)?,
        Protocol::Polarization => run_state_transfer_polarization(&qubit, &params, channel, &opts)?,
    };
    let report = TransferReport {
        protocol: protocol.name(),
        outcome,
    };
    let path = dir.join(format!("transfer_{}.json", protocol.name()));
    let written = flush(dir, vec![json(path, &report)])?;
    Ok((report, written))
}

/// Adiabaticity report of the designed schedule, or of a schedule CSV.
pub fn validate(
    config: &ExperimentConfig,
    schedule_csv: Option<&Path>,
    threshold: f64,
) -> CliResult<AdiabaticityReport> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(CliError::Config(format!(
            "threshold must be positive, got {threshold}"
        )));
    }
    let params = config.physical_params();
    let schedule = match schedule_csv {
        Some(path) => read_schedule(path)?,
        None => design_schedule(config, &params)?.1,
    };
    Ok(adiabaticity_check(&schedule, &params, threshold))
}
