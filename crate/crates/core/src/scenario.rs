//! Canonical simulation scenario: one bundle of array, geometry, jammer and
//! power parameters with assembly helpers shared by the test suites and the
//! CLI frontends.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::arrays::ArrayConfig;
use crate::covariance::{
    clutter_covariance, clutter_snapshots, jamming_covariance, jamming_snapshots, total_covariance,
    ScatterPowers,
};
use crate::error::Result;
use crate::geometry::{jamming_trajectory, sample_rings, Position3D, SceneGeometry, ScattererRing};
use crate::jammer::{JammerKind, JammerModel, ModulationMode};
use crate::stap::{if_curve, IfCurve, TargetModel};

/// Full scenario description. Powers are per patch, in dB over the noise
/// floor; the noise power is the reference level for every dB figure.
#[derive(Clone, Copy, Debug)]
pub struct Scenario {
    pub array: ArrayConfig,
    pub geometry: SceneGeometry,
    pub jammer: Option<JammerModel>,
    /// Per-patch clutter power, dB over noise.
    pub cnr_db: f64,
    /// Per-patch jamming-scatterer power, dB over noise.
    pub jnr_db: f64,
    pub noise_power: f64,
    pub clutter_patches: usize,
    pub jamming_patches: usize,
    pub target: TargetModel,
    pub mode: ModulationMode,
}

impl Scenario {
    /// The canonical X-band side-looking scenario with the given number of
    /// transmit subarrays (1 = phased array, 4 = the subarrayed reference).
    pub fn reference(subarrays: usize) -> Self {
        Scenario {
            array: ArrayConfig {
                carrier_hz: 10.0e9,
                tx_elements: 8,
                subarrays,
                rx_elements: 8,
                pulses: 8,
                element_spacing_m: 0.015,
                pri_s: 100.0e-6,
                platform_velocity_mps: 75.0,
                waveform_step_hz: 10.0e6,
                pulse_width_s: 10.0e-6,
            },
            geometry: SceneGeometry {
                radar_height: 2000.0,
                jammer_position: Position3D::new(6000.0, 0.0, 0.0),
                target_range: 6000.0,
                platform_velocity: 75.0,
            },
            jammer: None,
            cnr_db: 30.0,
            jnr_db: 10.0,
            noise_power: 1.0,
            clutter_patches: 361,
            jamming_patches: 181,
            target: TargetModel {
                azimuth: std::f64::consts::FRAC_PI_2,
                elevation: 0.0,
                doppler: 0.25,
                range_m: 6000.0,
                power: 1.0,
            },
            mode: ModulationMode::Exact,
        }
    }

    /// Reference scenario with a scattered-wave FDA jammer attached.
    pub fn with_jammer(subarrays: usize, kind: JammerKind, freq_offset_hz: f64) -> Self {
        let mut s = Self::reference(subarrays);
        s.jammer = Some(JammerModel {
            kind,
            antennas: 4,
            freq_offset_hz,
            power: 10f64.powf(s.jnr_db / 10.0) * s.noise_power,
            position: s.geometry.jammer_position,
            dj_cos_product_m: 2.16e-3,
        });
        s
    }

    pub fn validate(&self) -> Result<()> {
        self.array.validate()?;
        self.geometry.validate()?;
        self.target.validate()?;
        if let Some(j) = &self.jammer {
            j.validate()?;
        }
        Ok(())
    }

    /// Cone cosine of the target look direction.
    pub fn u_target(&self) -> f64 {
        self.target.cone_cosine()
    }

    pub fn clutter_power(&self) -> f64 {
        self.noise_power * 10f64.powf(self.cnr_db / 10.0)
    }

    pub fn jamming_power(&self) -> f64 {
        self.noise_power * 10f64.powf(self.jnr_db / 10.0)
    }

    /// Sampled clutter and jamming rings.
    pub fn rings(&self) -> Result<(ScattererRing, ScattererRing)> {
        let traj = jamming_trajectory(&self.geometry)?;
        sample_rings(
            &self.geometry,
            &traj,
            self.clutter_patches,
            self.jamming_patches,
        )
    }

    pub fn clutter_cov(&self) -> Result<DMatrix<Complex64>> {
        let (ring, _) = self.rings()?;
        clutter_covariance(
            &self.array,
            &ring,
            self.u_target(),
            self.target.range_m,
            &ScatterPowers::uniform(ring.len(), self.clutter_power()),
        )
    }

    /// Jamming covariance; zero matrix when no jammer is attached.
    pub fn jamming_cov(&self) -> Result<DMatrix<Complex64>> {
        let n = self.array.snapshot_len();
        match &self.jammer {
            None => Ok(DMatrix::zeros(n, n)),
            Some(j) => {
                let (_, ring) = self.rings()?;
                jamming_covariance(
                    &self.array,
                    &ring,
                    self.u_target(),
                    self.target.range_m,
                    j,
                    &ScatterPowers::uniform(ring.len(), self.jamming_power()),
                    self.mode,
                )
            }
        }
    }

    /// R_u = clutter + jamming + noise.
    pub fn total_cov(&self) -> Result<DMatrix<Complex64>> {
        self.validate()?;
        let r_c = self.clutter_cov()?;
        let r_j = self.jamming_cov()?;
        total_covariance(&r_c, &r_j, self.noise_power)
    }

    /// IF sweep for this scenario's look direction.
    pub fn if_curve(&self, grid_size: usize) -> Result<IfCurve> {
        let r_u = self.total_cov()?;
        if_curve(
            &r_u,
            &self.array,
            self.u_target(),
            self.target.range_m,
            self.noise_power,
            grid_size,
        )
    }

    /// Unit-amplitude snapshot matrices (clutter, optional jamming) for the
    /// Monte Carlo path.
    pub fn snapshot_matrices(
        &self,
    ) -> Result<(DMatrix<Complex64>, Option<DMatrix<Complex64>>)> {
        let (c_ring, j_ring) = self.rings()?;
        let v_c = clutter_snapshots(&self.array, &c_ring, self.u_target(), self.target.range_m)?;
        let v_j = match &self.jammer {
            None => None,
            Some(j) => Some(jamming_snapshots(
                &self.array,
                &j_ring,
                self.u_target(),
                self.target.range_m,
                j,
                self.mode,
            )?),
        };
        Ok((v_c, v_j))
    }
}
