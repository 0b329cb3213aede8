//! Flat key-value scenario configuration. Keys carry their units; unknown
//! keys are rejected so typos fail loudly. Every key has a default matching
//! the canonical scenario, so an empty file is a valid config.

use serde::{Deserialize, Serialize};
use stapsim_core::{
    ArrayConfig, JammerKind, JammerModel, ModulationMode, Position3D, Scenario, SceneGeometry,
    TargetModel,
};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    // radar front end
    pub f0_ghz: f64,
    pub tx_elements: usize,
    pub subarrays: usize,
    pub rx_elements: usize,
    pub pulses: usize,
    pub element_spacing_mm: f64,
    pub pri_us: f64,
    pub pulse_width_us: f64,
    pub waveform_step_mhz: f64,
    // platform and scene
    pub radar_height_m: f64,
    pub platform_velocity_mps: f64,
    pub target_range_m: f64,
    pub target_azimuth_deg: f64,
    pub target_doppler: f64,
    // powers (per patch, dB over noise)
    pub cnr_db: f64,
    pub jnr_db: f64,
    // jammer
    pub jammer_kind: String,
    pub jammer_antennas: usize,
    pub jammer_offsets_khz: Vec<f64>,
    pub jammer_x_m: f64,
    pub jammer_y_m: f64,
    pub jammer_z_m: f64,
    /// d_j cos(theta_j) cos(phi_j) in millimeters.
    pub jammer_dj_cos_mm: f64,
    // sampling / numerics
    pub clutter_patches: usize,
    pub jamming_patches: usize,
    pub doppler_bins: usize,
    pub spatial_bins: usize,
    pub modulation_mode: String,
    pub seed: u64,
    pub trials: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            f0_ghz: 10.0,
            tx_elements: 8,
            subarrays: 4,
            rx_elements: 8,
            pulses: 8,
            element_spacing_mm: 15.0,
            pri_us: 100.0,
            pulse_width_us: 10.0,
            waveform_step_mhz: 10.0,
            radar_height_m: 2000.0,
            platform_velocity_mps: 75.0,
            target_range_m: 6000.0,
            target_azimuth_deg: 90.0,
            target_doppler: 0.25,
            cnr_db: 30.0,
            jnr_db: 10.0,
            jammer_kind: "SF".into(),
            jammer_antennas: 4,
            jammer_offsets_khz: vec![0.0, 0.1, 0.5, 1.0],
            jammer_x_m: 6000.0,
            jammer_y_m: 0.0,
            jammer_z_m: 0.0,
            jammer_dj_cos_mm: 2.16,
            clutter_patches: 361,
            jamming_patches: 181,
            doppler_bins: 128,
            spatial_bins: 128,
            modulation_mode: "exact".into(),
            seed: 20_240_601,
            trials: 100,
        }
    }
}

/// A config problem: reported with the offending key, exits with code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl ScenarioConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    pub fn from_str(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn jammer_kind(&self) -> Result<JammerKind, ConfigError> {
        match self.jammer_kind.to_ascii_uppercase().as_str() {
            "SF" => Ok(JammerKind::Sf),
            "AF" => Ok(JammerKind::Af),
            other => Err(ConfigError(format!(
                "jammer_kind: expected \"SF\" or \"AF\", got \"{other}\""
            ))),
        }
    }

    pub fn modulation_mode(&self) -> Result<ModulationMode, ConfigError> {
        match self.modulation_mode.as_str() {
            "exact" => Ok(ModulationMode::Exact),
            "proposition1" => Ok(ModulationMode::Proposition1),
            other => Err(ConfigError(format!(
                "modulation_mode: expected \"exact\" or \"proposition1\", got \"{other}\""
            ))),
        }
    }

    /// Scenario for one frequency offset; `offset_khz = None` drops the
    /// jammer entirely (the no-jamming baseline).
    pub fn scenario(&self, offset_khz: Option<f64>) -> Result<Scenario, ConfigError> {
        let array = ArrayConfig {
            carrier_hz: self.f0_ghz * 1e9,
            tx_elements: self.tx_elements,
            subarrays: self.subarrays,
            rx_elements: self.rx_elements,
            pulses: self.pulses,
            element_spacing_m: self.element_spacing_mm * 1e-3,
            pri_s: self.pri_us * 1e-6,
            platform_velocity_mps: self.platform_velocity_mps,
            waveform_step_hz: self.waveform_step_mhz * 1e6,
            pulse_width_s: self.pulse_width_us * 1e-6,
        };
        let geometry = SceneGeometry {
            radar_height: self.radar_height_m,
            jammer_position: Position3D::new(self.jammer_x_m, self.jammer_y_m, self.jammer_z_m),
            target_range: self.target_range_m,
            platform_velocity: self.platform_velocity_mps,
        };
        let jammer = match offset_khz {
            None => None,
            Some(khz) => Some(JammerModel {
                kind: self.jammer_kind()?,
                antennas: self.jammer_antennas,
                freq_offset_hz: khz * 1e3,
                power: 10f64.powf(self.jnr_db / 10.0),
                position: geometry.jammer_position,
                dj_cos_product_m: self.jammer_dj_cos_mm * 1e-3,
            }),
        };
        let scenario = Scenario {
            array,
            geometry,
            jammer,
            cnr_db: self.cnr_db,
            jnr_db: self.jnr_db,
            noise_power: 1.0,
            clutter_patches: self.clutter_patches,
            jamming_patches: self.jamming_patches,
            target: TargetModel {
                azimuth: self.target_azimuth_deg.to_radians(),
                elevation: 0.0,
                doppler: self.target_doppler,
                range_m: self.target_range_m,
                power: 1.0,
            },
            mode: self.modulation_mode()?,
        };
        scenario
            .validate()
            .map_err(|e| ConfigError(e.to_string()))?;
        Ok(scenario)
    }

    /// Short case label for file names: `pa` for a single subarray,
    /// `mimo<S>` otherwise.
    pub fn case_label(&self) -> String {
        if self.subarrays == 1 {
            "pa".into()
        } else {
            format!("mimo{}", self.subarrays)
        }
    }
}

/// File-name fragment for an offset: `nojam`, `0hz`, `500hz`, `4000hz`...
pub fn offset_label(offset_khz: Option<f64>) -> String {
    match offset_khz {
        None => "nojam".into(),
        Some(khz) => format!("{}hz", (khz * 1e3).round() as i64),
    }
}
