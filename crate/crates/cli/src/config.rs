//! TOML experiment configuration. Every table and key is optional; missing
//! values fall back to the reference configuration (σΓ = 10,
//! Γ(t_max − t0) = 25, Δ₁ = Δ₂ = 0, Ω = 10Γ, 4001 grid points).

use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::Deserialize;
use stirap_core::ode::Tolerances;
use stirap_core::protocol::ChainOptions;
use stirap_core::{ChannelModel, InversionOptions, PhysicalParams, QubitState};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    pub gamma: f64,
    pub omega: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub sigma: f64,
    pub t0: f64,
    pub t_max: f64,
    pub t_end: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        let p = PhysicalParams::reference(10.0);
        Self {
            gamma: p.gamma,
            omega: p.omega,
            delta1: p.delta1,
            delta2: p.delta2,
            sigma: p.sigma,
            t0: p.t0,
            t_max: p.t_max,
            t_end: p.t_end,
        }
    }
}

impl From<&ParamsConfig> for PhysicalParams {
    fn from(c: &ParamsConfig) -> Self {
        PhysicalParams {
            gamma: c.gamma,
            omega: c.omega,
            delta1: c.delta1,
            delta2: c.delta2,
            sigma: c.sigma,
            t0: c.t0,
            t_max: c.t_max,
            t_end: c.t_end,
        }
    }
}

/// Complex numbers are written as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelConfig {
    pub alpha: [f64; 2],
    pub tau: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self {
            alpha: [1.0, 0.0],
            tau: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    Gaussian,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScheduleConfig {
    pub target: TargetKind,
    pub n_points: usize,
    pub denominator_floor: f64,
    pub unit_tolerance: f64,
    /// Delay of the receiver pulses relative to the mirrored schedule.
    pub receiver_shift: f64,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        let inv = InversionOptions::default();
        Self {
            target: TargetKind::Gaussian,
            n_points: stirap_core::params::DEFAULT_GRID_POINTS,
            denominator_floor: inv.denominator_floor,
            unit_tolerance: inv.unit_tolerance,
            receiver_shift: 0.0,
        }
    }
}

/// Ω values in units of Γ.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub fig3_omegas: Vec<f64>,
    pub fig4_omegas: Vec<f64>,
    pub hscan_omegas: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            fig3_omegas: vec![2.0, 5.0, 10.0],
            fig4_omegas: vec![2.0, 4.0, 6.0, 8.0, 10.0, 20.0, 40.0],
            hscan_omegas: vec![5.0, 10.0, 20.0, 40.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QubitConfig {
    pub a: [f64; 2],
    pub b: [f64; 2],
}

impl Default for QubitConfig {
    fn default() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            a: [h, 0.0],
            b: [h, 0.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AdiabaticityConfig {
    pub threshold: f64,
}

impl Default for AdiabaticityConfig {
    fn default() -> Self {
        Self { threshold: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub params: ParamsConfig,
    pub channel: ChannelConfig,
    pub schedule: ScheduleConfig,
    pub sweeps: SweepConfig,
    pub qubit: QubitConfig,
    pub adiabaticity: AdiabaticityConfig,
    pub output: OutputConfig,
    /// Reserved; every computation is deterministic.
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        let config: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Checks every invariant that does not need a simulation. Qubit
    /// normalization is checked by the commands that use the qubit.
    pub fn validate(&self) -> CliResult<()> {
        self.physical_params()
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        self.channel_model()
            .map_err(|e| CliError::Config(e.to_string()))?;
        let s = &self.schedule;
        if s.n_points < 2 {
            return Err(CliError::Config(format!(
                "schedule.n_points must be at least 2, got {}",
                s.n_points
            )));
        }
        if !(s.denominator_floor.is_finite() && s.denominator_floor >= 0.0) {
            return Err(CliError::Config(
                "schedule.denominator_floor must be >= 0".into(),
            ));
        }
        if !(s.unit_tolerance.is_finite() && s.unit_tolerance >= 0.0) {
            return Err(CliError::Config(
                "schedule.unit_tolerance must be >= 0".into(),
            ));
        }
        if !s.receiver_shift.is_finite() {
            return Err(CliError::Config(
                "schedule.receiver_shift must be finite".into(),
            ));
        }
        if !(self.adiabaticity.threshold.is_finite() && self.adiabaticity.threshold > 0.0) {
            return Err(CliError::Config(
                "adiabaticity.threshold must be positive".into(),
            ));
        }
        let sweeps = [
            ("fig3_omegas", &self.sweeps.fig3_omegas),
            ("fig4_omegas", &self.sweeps.fig4_omegas),
            ("hscan_omegas", &self.sweeps.hscan_omegas),
        ];
        for (name, list) in sweeps {
            check_omegas(name, list)?;
        }
        Ok(())
    }

    pub fn physical_params(&self) -> PhysicalParams {
        (&self.params).into()
    }

    pub fn channel_model(&self) -> stirap_core::Result<ChannelModel> {
        ChannelModel::new(
            C64::new(self.channel.alpha[0], self.channel.alpha[1]),
            self.channel.tau,
        )
    }

    pub fn qubit_state(&self) -> stirap_core::Result<QubitState> {
        let [ar, ai] = self.qubit.a;
        let [br, bi] = self.qubit.b;
        QubitState::new(C64::new(ar, ai), C64::new(br, bi))
    }

    pub fn inversion_options(&self) -> InversionOptions {
        InversionOptions {
            denominator_floor: self.schedule.denominator_floor,
            unit_tolerance: self.schedule.unit_tolerance,
        }
    }

    pub fn chain_options(&self) -> ChainOptions {
        ChainOptions {
            n_points: self.schedule.n_points,
            inversion: self.inversion_options(),
            receiver_shift: self.schedule.receiver_shift,
            tolerances: Tolerances::default(),
        }
    }
}

/// A sweep list must be non-empty with finite, non-negative entries.
pub fn check_omegas(name: &str, omegas: &[f64]) -> CliResult<()> {
    if omegas.is_empty() {
        return Err(CliError::Config(format!("{name} is empty")));
    }
    if let Some(bad) = omegas.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(CliError::Config(format!(
            "{name} contains invalid value {bad}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_the_reference_setup() {
        let c = ExperimentConfig::from_toml("").unwrap();
        assert_eq!(c.physical_params(), PhysicalParams::reference(10.0));
        assert_eq!(c.schedule.n_points, 4001);
        assert_eq!(c.sweeps.fig3_omegas, vec![2.0, 5.0, 10.0]);
        assert_eq!(c.channel_model().unwrap(), ChannelModel::ideal());
    }

    #[test]
    fn partial_tables_keep_other_defaults() {
        let c =
            ExperimentConfig::from_toml("[params]\nomega = 4.0\n[channel]\nalpha = [0.0, 0.5]\n")
                .unwrap();
        assert_eq!(c.params.omega, 4.0);
        assert_eq!(c.params.sigma, 10.0);
        assert_eq!(c.channel_model().unwrap().alpha, C64::new(0.0, 0.5));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentConfig::from_toml("[params]\nsigmaa = 1.0\n").is_err());
        assert!(ExperimentConfig::from_toml("colour = 1\n").is_err());
        assert!(ExperimentConfig::from_toml("[schedule]\ntarget = \"square\"\n").is_err());
    }

    #[test]
    fn invariants_are_enforced_on_load() {
        for bad in [
            "[params]\nsigma = 0.0\n",
            "[params]\nsigma = -1.0\n",
            "[params]\nt_max = 60.0\n",
            "[channel]\nalpha = [1.0, 0.5]\n",
            "[channel]\ntau = -1.0\n",
            "[schedule]\nn_points = 1\n",
            "[sweeps]\nfig3_omegas = []\n",
            "[adiabaticity]\nthreshold = 0.0\n",
        ] {
            let err = ExperimentConfig::from_toml(bad).unwrap_err();
            assert_eq!(err.exit_code(), 1, "{bad}");
        }
    }

    #[test]
    fn qubit_normalization_checked_on_use() {
        let c = ExperimentConfig::from_toml("[qubit]\na = [1.0, 0.0]\nb = [1.0, 0.0]\n").unwrap();
        assert!(c.qubit_state().is_err());
    }
}
