//! JSON experiment configuration: schema, defaults, validation.
//!
//! An empty document `{}` resolves to the reference setup: a 7-element FDA
//! at 10 GHz with a 2 kHz log increment, the receiver at
//! (150 km, 40 deg, 70 deg), array height 4.25 wavelengths, unit transmit
//! power, a 10 dB receiver SNR, and pi/4-QPSK. Every field can be
//! overridden individually; unknown fields are rejected with their path.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use fdadm_core::{
    db_to_linear, ArrayConfig, ChannelMode, Modulation, ObservationPoint, TransmitConfig,
    SPEED_OF_LIGHT,
};

use crate::CliError;

/// Schema version this build reads.
pub const SCHEMA_VERSION: u32 = 1;

fn default_schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub array: ArraySection,
    pub tx: TxSection,
    pub bob: PointSection,
    pub eves: EveSection,
    pub sweep: SweepSection,
    pub mode: ModeName,
    pub mc: McSection,
    /// Output directory for CSV files.
    pub output: PathBuf,
    /// Evaluation time in seconds; defaults to the wavefront arrival
    /// time `r_bob / c`.
    pub time_s: Option<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            schema_version: default_schema_version(),
            array: ArraySection::default(),
            tx: TxSection::default(),
            bob: PointSection::default(),
            eves: EveSection::default(),
            sweep: SweepSection::default(),
            mode: ModeName::TwoRay,
            mc: McSection::default(),
            output: PathBuf::from("out"),
            time_s: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArraySection {
    /// Element half-count N; the array has 2N+1 elements.
    pub n: u32,
    pub f0_hz: f64,
    pub delta_f_hz: f64,
    pub g: f64,
    /// Element spacing; default half the carrier wavelength.
    pub spacing_m: Option<f64>,
    /// Height above ground; default 4.25 carrier wavelengths.
    pub height_m: Option<f64>,
}

impl Default for ArraySection {
    fn default() -> Self {
        Self {
            n: 3,
            f0_hz: 10.0e9,
            delta_f_hz: 2.0e3,
            g: 1.0,
            spacing_m: None,
            height_m: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize, PartialEq, Eq)]
pub enum NoiseCalibration {
    /// `sigma^2 = Ps beta1^2 / gamma`: the receiver operating point stays
    /// fixed as the power split moves.
    #[serde(rename = "bob-snr")]
    BobSnr,
    /// `sigma^2 = Ps / gamma`.
    #[serde(rename = "total-power")]
    TotalPower,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct TxSection {
    pub ps: f64,
    pub beta1: f64,
    /// Receiver SNR in dB used to calibrate the noise floor.
    pub snr_db: f64,
    pub noise_calibration: NoiseCalibration,
    pub modulation: ModulationName,
}

impl Default for TxSection {
    fn default() -> Self {
        Self {
            ps: 1.0,
            beta1: 0.6,
            snr_db: 10.0,
            noise_calibration: NoiseCalibration::BobSnr,
            modulation: ModulationName::Pi4Qpsk,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize, PartialEq, Eq)]
pub enum ModulationName {
    #[serde(rename = "pi4-qpsk")]
    Pi4Qpsk,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize, PartialEq, Eq)]
pub enum ModeName {
    #[serde(rename = "two-ray")]
    TwoRay,
    #[serde(rename = "single-path")]
    SinglePath,
}

impl From<ModeName> for ChannelMode {
    fn from(m: ModeName) -> Self {
        match m {
            ModeName::TwoRay => ChannelMode::TwoRayMultipath,
            ModeName::SinglePath => ChannelMode::SinglePathLoS,
        }
    }
}

impl From<ChannelMode> for ModeName {
    fn from(m: ChannelMode) -> Self {
        match m {
            ChannelMode::TwoRayMultipath => ModeName::TwoRay,
            ChannelMode::SinglePathLoS => ModeName::SinglePath,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct PointSection {
    pub r_m: f64,
    pub theta_deg: f64,
    pub psi_deg: f64,
}

impl Default for PointSection {
    fn default() -> Self {
        Self {
            r_m: 150.0e3,
            theta_deg: 40.0,
            psi_deg: 70.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct EveSection {
    pub count: usize,
    pub r_range_m: [f64; 2],
    pub theta_range_deg: [f64; 2],
    pub psi_range_deg: [f64; 2],
    pub seed: u64,
}

impl Default for EveSection {
    fn default() -> Self {
        Self {
            count: 4,
            r_range_m: [50.0e3, 300.0e3],
            theta_range_deg: [0.0, 90.0],
            psi_range_deg: [0.0, 180.0],
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize, PartialEq, Eq, Hash)]
pub enum SweepVariable {
    /// Observation range, meters (BER sweeps).
    #[serde(rename = "r")]
    R,
    /// Observation elevation, degrees (BER sweeps).
    #[serde(rename = "theta")]
    Theta,
    /// Observation azimuth, degrees (BER sweeps).
    #[serde(rename = "psi")]
    Psi,
    /// Receiver SNR axis, dB (secrecy sweeps).
    #[serde(rename = "snr")]
    Snr,
    /// Probe eavesdropper range, meters (secrecy sweeps).
    #[serde(rename = "eve_r")]
    EveR,
    /// Probe eavesdropper elevation, degrees (secrecy sweeps).
    #[serde(rename = "eve_theta")]
    EveTheta,
    /// Probe eavesdropper azimuth, degrees (secrecy sweeps).
    #[serde(rename = "eve_psi")]
    EvePsi,
    /// Two-dimensional range x elevation probe grid (secrecy heatmaps).
    #[serde(rename = "eve_r_theta")]
    EveRTheta,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::R => "r",
            SweepVariable::Theta => "theta",
            SweepVariable::Psi => "psi",
            SweepVariable::Snr => "snr",
            SweepVariable::EveR => "eve_r",
            SweepVariable::EveTheta => "eve_theta",
            SweepVariable::EvePsi => "eve_psi",
            SweepVariable::EveRTheta => "eve_r_theta",
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    /// Explicit grid; overrides start/stop/points when present.
    pub grid: Option<Vec<f64>>,
    /// Second axis, required for the 2-D variable.
    pub second: Option<GridSection>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            variable: SweepVariable::Theta,
            start: 0.0,
            stop: 90.0,
            points: 181,
            grid: None,
            second: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default)]
    pub start: f64,
    #[serde(default)]
    pub stop: f64,
    #[serde(default)]
    pub points: usize,
    #[serde(default)]
    pub grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct McSection {
    /// Monte Carlo symbols per BER sweep point.
    pub symbols: u64,
    /// Master seed; every sweep point and symbol derives a substream.
    pub seed: u64,
    /// Weight redraws averaged per secrecy-rate evaluation.
    pub rate_draws: usize,
}

impl Default for McSection {
    fn default() -> Self {
        Self {
            symbols: 100_000,
            seed: 0,
            rate_draws: 8000,
        }
    }
}

/// A fully validated experiment: domain objects plus resolved grids.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub array: ArrayConfig,
    pub tx: TransmitConfig,
    pub bob: ObservationPoint,
    pub mode: ChannelMode,
    /// Evaluation time, seconds.
    pub time_s: f64,
    pub eves: EveSection,
    pub sweep_variable: SweepVariable,
    pub grid: Vec<f64>,
    pub second_grid: Option<Vec<f64>>,
    pub mc: McSection,
    pub output: PathBuf,
    /// The raw section the noise floor was derived from, kept for
    /// recalibration along SNR sweeps.
    pub tx_section: TxSection,
}

impl Experiment {
    /// Noise variance for a given receiver SNR under the configured
    /// calibration.
    pub fn noise_variance_for(&self, snr_db: f64) -> f64 {
        let snr = db_to_linear(snr_db);
        match self.tx_section.noise_calibration {
            NoiseCalibration::BobSnr => {
                TransmitConfig::noise_for_receiver_snr(self.tx_section.ps, self.tx_section.beta1, snr)
            }
            NoiseCalibration::TotalPower => {
                TransmitConfig::noise_for_total_power_snr(self.tx_section.ps, snr)
            }
        }
    }

    /// Rebuilds the transmit config at a different receiver SNR.
    pub fn tx_at_snr(&self, snr_db: f64) -> Result<TransmitConfig, CliError> {
        TransmitConfig::from_beta1(
            self.tx_section.ps,
            self.tx_section.beta1,
            Modulation::Pi4Qpsk,
            self.noise_variance_for(snr_db),
        )
        .map_err(|e| CliError::Config(format!("tx: {e}")))
    }
}

/// Loads and validates a config file; `None` resolves the built-in
/// defaults.
pub fn load_config(path: Option<&Path>) -> Result<ExperimentConfig, CliError> {
    match path {
        None => Ok(ExperimentConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::Io(format!("reading {}: {e}", p.display())))?;
            parse_config(&text)
        }
    }
}

/// Parses a JSON document, reporting the offending field path on error.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        CliError::Config(format!("config field `{}`: {}", e.path(), e.inner()))
    })?;
    if cfg.schema_version != SCHEMA_VERSION {
        return Err(CliError::Config(format!(
            "config field `schema_version`: version {} unsupported (this build reads {})",
            cfg.schema_version, SCHEMA_VERSION
        )));
    }
    Ok(cfg)
}

fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![start];
    }
    let mut grid: Vec<f64> = (0..points)
        .map(|i| start + (stop - start) * i as f64 / (points - 1) as f64)
        .collect();
    *grid.last_mut().unwrap() = stop;
    grid
}

fn strictly_monotone(grid: &[f64]) -> bool {
    grid.windows(2).all(|w| w[1] > w[0]) || grid.windows(2).all(|w| w[1] < w[0])
}

fn resolve_grid(
    what: &str,
    start: f64,
    stop: f64,
    points: usize,
    explicit: Option<&Vec<f64>>,
) -> Result<Vec<f64>, CliError> {
    let grid = match explicit {
        Some(g) => g.clone(),
        None => {
            if points == 0 {
                return Err(CliError::Config(format!(
                    "config field `{what}.points`: grid must be nonempty"
                )));
            }
            linspace(start, stop, points)
        }
    };
    if grid.is_empty() {
        return Err(CliError::Config(format!(
            "config field `{what}.grid`: grid must be nonempty"
        )));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Config(format!(
            "config field `{what}.grid`: grid values must be finite"
        )));
    }
    if grid.len() > 1 && !strictly_monotone(&grid) {
        return Err(CliError::Config(format!(
            "config field `{what}.grid`: grid must be strictly monotone"
        )));
    }
    Ok(grid)
}

impl ExperimentConfig {
    /// Validates every section and resolves domain objects.
    pub fn resolve(&self) -> Result<Experiment, CliError> {
        let spacing = self
            .array
            .spacing_m
            .unwrap_or(SPEED_OF_LIGHT / (2.0 * self.array.f0_hz));
        let height = self
            .array
            .height_m
            .unwrap_or(4.25 * SPEED_OF_LIGHT / self.array.f0_hz);
        let array = ArrayConfig::with_spacing(
            self.array.n,
            self.array.f0_hz,
            self.array.delta_f_hz,
            self.array.g,
            spacing,
            height,
        )
        .map_err(|e| CliError::Config(format!("array: {e}")))?;

        if !(self.tx.beta1 > 0.0 && self.tx.beta1 <= 1.0) {
            return Err(CliError::Config(format!(
                "config field `tx.beta1`: {} outside (0, 1]",
                self.tx.beta1
            )));
        }
        let noise = match self.tx.noise_calibration {
            NoiseCalibration::BobSnr => TransmitConfig::noise_for_receiver_snr(
                self.tx.ps,
                self.tx.beta1,
                db_to_linear(self.tx.snr_db),
            ),
            NoiseCalibration::TotalPower => {
                TransmitConfig::noise_for_total_power_snr(self.tx.ps, db_to_linear(self.tx.snr_db))
            }
        };
        let tx = TransmitConfig::from_beta1(self.tx.ps, self.tx.beta1, Modulation::Pi4Qpsk, noise)
            .map_err(|e| CliError::Config(format!("tx: {e}")))?;

        let bob = ObservationPoint::from_degrees(
            self.bob.r_m,
            self.bob.theta_deg,
            self.bob.psi_deg,
        )
        .map_err(|e| CliError::Config(format!("bob: {e}")))?;

        for (name, range) in [
            ("eves.r_range_m", self.eves.r_range_m),
            ("eves.theta_range_deg", self.eves.theta_range_deg),
            ("eves.psi_range_deg", self.eves.psi_range_deg),
        ] {
            if range[0] > range[1] || !range[0].is_finite() || !range[1].is_finite() {
                return Err(CliError::Config(format!(
                    "config field `{name}`: invalid range [{}, {}]",
                    range[0], range[1]
                )));
            }
        }

        let grid = resolve_grid(
            "sweep",
            self.sweep.start,
            self.sweep.stop,
            self.sweep.points,
            self.sweep.grid.as_ref(),
        )?;
        let second_grid = match (self.sweep.variable, &self.sweep.second) {
            (SweepVariable::EveRTheta, Some(sec)) => Some(resolve_grid(
                "sweep.second",
                sec.start,
                sec.stop,
                sec.points,
                sec.grid.as_ref(),
            )?),
            (SweepVariable::EveRTheta, None) => {
                return Err(CliError::Config(
                    "config field `sweep.second`: required for variable `eve_r_theta`".to_string(),
                ))
            }
            (_, Some(_)) => {
                return Err(CliError::Config(
                    "config field `sweep.second`: only valid with variable `eve_r_theta`"
                        .to_string(),
                ))
            }
            (_, None) => None,
        };

        if self.mc.symbols == 0 {
            return Err(CliError::Config(
                "config field `mc.symbols`: must be >= 1".to_string(),
            ));
        }
        if self.mc.rate_draws == 0 {
            return Err(CliError::Config(
                "config field `mc.rate_draws`: must be >= 1".to_string(),
            ));
        }

        let time_s = self.time_s.unwrap_or(bob.range_m() / SPEED_OF_LIGHT);
        if !time_s.is_finite() {
            return Err(CliError::Config(
                "config field `time_s`: must be finite".to_string(),
            ));
        }

        Ok(Experiment {
            array,
            tx,
            bob,
            mode: self.mode.into(),
            time_s,
            eves: self.eves.clone(),
            sweep_variable: self.sweep.variable,
            grid,
            second_grid,
            mc: self.mc.clone(),
            output: self.output.clone(),
            tx_section: self.tx.clone(),
        })
    }
}
