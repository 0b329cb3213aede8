//! FDA scattered-wave jammer model: the waveform-correlation integrals
//! Omega, the S x S modulation matrix Upsilon = Theta * D, the jammed
//! transmit steering, the Doppler-notch-shift law and the frequency-offset
//! design bounds.
//!
//! Omega entries are always computed twice — closed form (sum of shifted
//! sinc terms) and adaptive Gauss-Kronrod quadrature of the defining
//! integral — and cross-checked; a disagreement is an error, not a warning.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arrays::ArrayConfig;
use crate::error::{Error, Result};
use crate::geometry::{Position3D, SPEED_OF_LIGHT};
use crate::quad;

const PI: f64 = std::f64::consts::PI;

/// The two FDA jammer variants, distinguished by the phase reference of
/// their element-to-element frequency ramp.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum JammerKind {
    Sf,
    Af,
}

/// How the modulation matrix is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModulationMode {
    /// Toeplitz D filled with exact Omega integrals.
    Exact,
    /// Diagonal-dominance approximation D = P * T_p * I_S, valid when
    /// Delta_f >= 1/T_p >> Delta_f'.
    Proposition1,
}

/// FDA jammer parameters.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct JammerModel {
    pub kind: JammerKind,
    /// Jammer antennas P (>= 2).
    pub antennas: usize,
    /// Jammer frequency offset Delta_f' (Hz), >= 0.
    pub freq_offset_hz: f64,
    /// Jammer power xi_j^2 (linear, relative to noise).
    pub power: f64,
    pub position: Position3D,
    /// Combined jammer-geometry spacing term d_j * cos(theta_j) * cos(phi_j)
    /// in meters; enters only the AF variant.
    pub dj_cos_product_m: f64,
}

impl JammerModel {
    pub fn validate(&self) -> Result<()> {
        if self.antennas < 2 {
            return Err(Error::InvalidConfig {
                key: "antennas".into(),
                reason: "FDA jammer needs P >= 2".into(),
            });
        }
        if self.freq_offset_hz < 0.0 {
            return Err(Error::InvalidConfig {
                key: "freq_offset_hz".into(),
                reason: "must be >= 0".into(),
            });
        }
        if self.power < 0.0 {
            return Err(Error::InvalidConfig {
                key: "power".into(),
                reason: "must be >= 0".into(),
            });
        }
        Ok(())
    }

    /// Jammer-induced normalized range frequency
    /// `phi_R_hat = -Delta_f' * 2 R_t / c` (note the sign).
    pub fn range_frequency(&self, target_range_m: f64) -> f64 {
        -self.freq_offset_hz * 2.0 * target_range_m / SPEED_OF_LIGHT
    }

    /// Dimensionless jammer spatial frequency f0 * d_j cos cos / c.
    pub fn spatial_frequency(&self, cfg: &ArrayConfig) -> f64 {
        cfg.carrier_hz * self.dj_cos_product_m / SPEED_OF_LIGHT
    }

    /// Common phase argument chi of Theta and Omega: phi_R_hat for SF,
    /// phi_R_hat - phi_s^(J) for AF.
    fn chi(&self, cfg: &ArrayConfig, target_range_m: f64) -> f64 {
        let phi_r = self.range_frequency(target_range_m);
        match self.kind {
            JammerKind::Sf => phi_r,
            JammerKind::Af => phi_r - self.spatial_frequency(cfg),
        }
    }

    /// Scalar amplitude/phase factor Theta = (xi_j^2 / T_p) e^{-j pi (P-1) chi}.
    pub fn theta_factor(&self, cfg: &ArrayConfig, target_range_m: f64) -> Complex64 {
        let p = self.antennas as f64;
        Complex64::from_polar(
            self.power / cfg.pulse_width_s,
            -(p - 1.0) * PI * self.chi(cfg, target_range_m),
        )
    }

    fn omega_closed_form(&self, cfg: &ArrayConfig, target_range_m: f64, s: i64) -> Complex64 {
        let chi = self.chi(cfg, target_range_m);
        let tp = cfg.pulse_width_s;
        let p = self.antennas;
        let mut sum = Complex64::new(0.0, 0.0);
        for m in 0..p {
            let g = s as f64 * cfg.waveform_step_hz + m as f64 * self.freq_offset_hz;
            sum += Complex64::from_polar(sinc(g * tp), -2.0 * PI * m as f64 * chi);
        }
        Complex64::from_polar(tp, (p as f64 - 1.0) * PI * chi) * sum
    }

    fn omega_quadrature(&self, cfg: &ArrayConfig, target_range_m: f64, s: i64) -> Result<Complex64> {
        let chi = self.chi(cfg, target_range_m);
        let tp = cfg.pulse_width_s;
        let p = self.antennas;
        let pref = Complex64::from_polar(1.0, (p as f64 - 1.0) * PI * chi);
        let df = cfg.waveform_step_hz;
        let dfp = self.freq_offset_hz;
        let f = |t: f64| {
            let mut sum = Complex64::new(0.0, 0.0);
            for m in 0..p {
                let g = s as f64 * df + m as f64 * dfp;
                sum += Complex64::from_polar(1.0, 2.0 * PI * g * t - 2.0 * PI * m as f64 * chi);
            }
            pref * sum
        };
        let abs_floor = 1e-12 * p as f64 * tp;
        let (v, _) = quad::integrate(f, -0.5 * tp, 0.5 * tp, 1e-9, abs_floor, 20_000)?;
        Ok(v)
    }

    /// Exact waveform correlation Omega_s for waveform-index difference
    /// `s` in (-S, S), evaluated by closed form and verified against
    /// adaptive quadrature of the defining integral.
    pub fn omega_entry(&self, cfg: &ArrayConfig, target_range_m: f64, s: i64) -> Result<Complex64> {
        let closed = self.omega_closed_form(cfg, target_range_m, s);
        let numeric = self.omega_quadrature(cfg, target_range_m, s)?;
        let scale = (self.antennas as f64 * cfg.pulse_width_s).max(closed.norm());
        let rel_err = (closed - numeric).norm() / scale;
        let limit = 1e-6;
        if rel_err > limit {
            return Err(Error::OmegaCrossCheck { rel_err, limit });
        }
        Ok(closed)
    }

    /// Assemble the S x S modulation matrix Upsilon = Theta * D with
    /// Toeplitz D[a][b] = Omega_{b-a}.
    pub fn modulation_matrix(
        &self,
        cfg: &ArrayConfig,
        target_range_m: f64,
        mode: ModulationMode,
    ) -> Result<ModulationMatrix> {
        self.validate()?;
        let s_dim = cfg.subarrays;
        let theta = self.theta_factor(cfg, target_range_m);
        let d = match mode {
            ModulationMode::Proposition1 => DMatrix::from_diagonal_element(
                s_dim,
                s_dim,
                Complex64::new(self.antennas as f64 * cfg.pulse_width_s, 0.0),
            ),
            ModulationMode::Exact => {
                // One Omega per index difference, shared along diagonals.
                let mut by_diff = Vec::with_capacity(2 * s_dim - 1);
                for diff in -(s_dim as i64 - 1)..=(s_dim as i64 - 1) {
                    by_diff.push(self.omega_entry(cfg, target_range_m, diff)?);
                }
                DMatrix::from_fn(s_dim, s_dim, |a, b| {
                    by_diff[(b as i64 - a as i64 + s_dim as i64 - 1) as usize]
                })
            }
        };
        Ok(ModulationMatrix {
            theta,
            upsilon: d.map(|z| theta * z),
            d,
        })
    }

    /// Predicted Doppler displacement of the jamming ridge (and hence of
    /// the secondary filter notch), in normalized Doppler:
    /// SF: -(P-1) phi_R_hat / (2 beta); AF: +(P-1)(phi_s - phi_R_hat)/(2 beta).
    pub fn notch_shift(&self, cfg: &ArrayConfig, target_range_m: f64) -> f64 {
        let p = self.antennas as f64 - 1.0;
        -p * self.chi(cfg, target_range_m) / (2.0 * cfg.beta())
    }

    /// Jammed transmit steering: Upsilon applied to the subarray steering
    /// vector at cone cosine `u` for the cell at `target_range_m`.
    pub fn jammed_transmit_steering(
        &self,
        cfg: &ArrayConfig,
        target_range_m: f64,
        u: f64,
        mode: ModulationMode,
    ) -> Result<DVector<Complex64>> {
        let m = self.modulation_matrix(cfg, target_range_m, mode)?;
        let p = cfg.waveform_steering(u, cfg.range_frequency(target_range_m));
        Ok(&m.upsilon * p)
    }

    /// Design interval (lo, hi) in Hz for the frequency offset, by jamming
    /// purpose. `hi` is exclusive only for FalseTargets.
    pub fn frequency_offset_bounds(
        &self,
        cfg: &ArrayConfig,
        target_range_m: f64,
        purpose: JammingPurpose,
    ) -> (f64, f64) {
        let p = self.antennas as f64 - 1.0;
        let tp = cfg.pulse_width_s;
        match purpose {
            JammingPurpose::FalseTargets => (1.0 / (p * tp), cfg.waveform_step_hz / p),
            JammingPurpose::Deception => (0.0, 1.0 / (p * tp)),
            JammingPurpose::ScatteredWave => {
                let zeta_sf = cfg.beta() * SPEED_OF_LIGHT / (p * target_range_m);
                let zeta = match self.kind {
                    JammerKind::Sf => zeta_sf,
                    JammerKind::Af => {
                        zeta_sf
                            + cfg.beta() * cfg.carrier_hz * self.dj_cos_product_m
                                / (2.0 * target_range_m)
                    }
                };
                (0.0, zeta)
            }
        }
    }
}

/// Target of a frequency-offset design rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JammingPurpose {
    /// Resolvable false range targets.
    FalseTargets,
    /// Unresolvable (deceptive) displacement.
    Deception,
    /// Scattered-wave clutter-masking (the regime studied here); the bound
    /// is the periodicity threshold zeta.
    ScatteredWave,
}

/// Upsilon = Theta * D with the pieces kept separate for inspection.
#[derive(Clone, Debug)]
pub struct ModulationMatrix {
    pub upsilon: DMatrix<Complex64>,
    pub theta: Complex64,
    pub d: DMatrix<Complex64>,
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-9 {
        1.0 - (PI * x) * (PI * x) / 6.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}
