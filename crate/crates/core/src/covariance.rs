//! Snapshot matrices and covariance assembly for clutter and scattered-wave
//! jamming, plus eigen-spectrum and rank utilities.
//!
//! Jamming columns differ from clutter columns in two ways: the subarray
//! steering is modulated by Upsilon, and (for a subarrayed transmit) the
//! Doppler ramp carries the predicted ridge displacement of the jamming
//! scatterers. A single-subarray transmit sees only a scalar modulation, so
//! its jamming covariance is proportional to the clutter covariance.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::arrays::ArrayConfig;
use crate::error::{Error, Result};
use crate::geometry::ScattererRing;
use crate::jammer::{JammerModel, ModulationMode};

/// Per-patch powers |xi_i|^2 (the diagonal of Xi).
#[derive(Clone, Debug)]
pub struct ScatterPowers(pub Vec<f64>);

impl ScatterPowers {
    /// Uniform power on every patch.
    pub fn uniform(patches: usize, power: f64) -> Self {
        Self(vec![power; patches])
    }

    pub fn validate(&self, patches: usize) -> Result<()> {
        if self.0.len() != patches {
            return Err(Error::DimensionMismatch {
                context: format!("{} powers for {} patches", self.0.len(), patches),
            });
        }
        if self.0.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::InvalidConfig {
                key: "powers".into(),
                reason: "patch powers must be nonnegative".into(),
            });
        }
        Ok(())
    }
}

/// Unit-amplitude clutter snapshots, one column per ring patch.
pub fn clutter_snapshots(
    cfg: &ArrayConfig,
    ring: &ScattererRing,
    u_target: f64,
    target_range_m: f64,
) -> Result<DMatrix<Complex64>> {
    let phi_r = cfg.range_frequency(target_range_m);
    columns(cfg, ring, u_target, |u| {
        Ok((cfg.waveform_steering(u, phi_r), 0.0))
    })
}

/// Unit-amplitude jamming snapshots: Upsilon-modulated subarray steering
/// and, when S > 1, the Doppler ridge displaced by the notch-shift law.
pub fn jamming_snapshots(
    cfg: &ArrayConfig,
    ring: &ScattererRing,
    u_target: f64,
    target_range_m: f64,
    jam: &JammerModel,
    mode: ModulationMode,
) -> Result<DMatrix<Complex64>> {
    let modulation = jam.modulation_matrix(cfg, target_range_m, mode)?;
    let phi_r = cfg.range_frequency(target_range_m);
    let shift = if cfg.subarrays > 1 {
        jam.notch_shift(cfg, target_range_m)
    } else {
        0.0
    };
    columns(cfg, ring, u_target, |u| {
        Ok((&modulation.upsilon * cfg.waveform_steering(u, phi_r), shift))
    })
}

fn columns<F>(
    cfg: &ArrayConfig,
    ring: &ScattererRing,
    u_target: f64,
    waveform: F,
) -> Result<DMatrix<Complex64>>
where
    F: Fn(f64) -> Result<(DVector<Complex64>, f64)>,
{
    if ring.is_empty() {
        return Err(Error::EmptyRing);
    }
    let mut v = DMatrix::zeros(cfg.snapshot_len(), ring.len());
    for (i, point) in ring.points.iter().enumerate() {
        let u = point.cone_cosine();
        let (w, doppler_shift) = waveform(u)?;
        let snap = cfg.snapshot(u_target, u, cfg.clutter_doppler(u) + doppler_shift, &w)?;
        v.set_column(i, &snap);
    }
    Ok(v)
}

/// R = V Xi V^H for unit-amplitude snapshots V and per-patch powers Xi.
pub fn covariance_from_snapshots(
    v: &DMatrix<Complex64>,
    powers: &ScatterPowers,
) -> Result<DMatrix<Complex64>> {
    powers.validate(v.ncols())?;
    let mut w = v.clone();
    for (i, p) in powers.0.iter().enumerate() {
        let s = Complex64::new(p.sqrt(), 0.0);
        for z in w.column_mut(i).iter_mut() {
            *z *= s;
        }
    }
    let r = &w * w.adjoint();
    // enforce exact Hermitian symmetry against rounding
    Ok(hermitian_part(&r))
}

/// Clutter covariance of a sampled ring.
pub fn clutter_covariance(
    cfg: &ArrayConfig,
    ring: &ScattererRing,
    u_target: f64,
    target_range_m: f64,
    powers: &ScatterPowers,
) -> Result<DMatrix<Complex64>> {
    let v = clutter_snapshots(cfg, ring, u_target, target_range_m)?;
    covariance_from_snapshots(&v, powers)
}

/// Scattered-wave jamming covariance of a sampled ring.
pub fn jamming_covariance(
    cfg: &ArrayConfig,
    ring: &ScattererRing,
    u_target: f64,
    target_range_m: f64,
    jam: &JammerModel,
    powers: &ScatterPowers,
    mode: ModulationMode,
) -> Result<DMatrix<Complex64>> {
    let v = jamming_snapshots(cfg, ring, u_target, target_range_m, jam, mode)?;
    covariance_from_snapshots(&v, powers)
}

/// R_u = R_c + R_j + sigma_n^2 I.
pub fn total_covariance(
    r_c: &DMatrix<Complex64>,
    r_j: &DMatrix<Complex64>,
    noise_power: f64,
) -> Result<DMatrix<Complex64>> {
    if r_c.shape() != r_j.shape() || !r_c.is_square() {
        return Err(Error::DimensionMismatch {
            context: format!("clutter {:?} vs jamming {:?}", r_c.shape(), r_j.shape()),
        });
    }
    let mut r = r_c + r_j;
    for i in 0..r.nrows() {
        r[(i, i)] += Complex64::new(noise_power, 0.0);
    }
    Ok(r)
}

fn hermitian_part(r: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut h = DMatrix::zeros(r.nrows(), r.ncols());
    for i in 0..r.nrows() {
        for j in 0..r.ncols() {
            h[(i, j)] = 0.5 * (r[(i, j)] + r[(j, i)].conj());
        }
    }
    h
}

/// Maximum deviation from Hermitian symmetry, relative to the largest entry.
pub fn hermitian_asymmetry(r: &DMatrix<Complex64>) -> f64 {
    let scale = r.iter().map(|z| z.norm()).fold(0.0f64, f64::max).max(1e-300);
    let mut worst: f64 = 0.0;
    for i in 0..r.nrows() {
        for j in 0..r.ncols() {
            worst = worst.max((r[(i, j)] - r[(j, i)].conj()).norm());
        }
    }
    worst / scale
}

/// Real eigenvalues of a Hermitian matrix, descending.
pub fn eigen_spectrum(r: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let h = hermitian_part(r);
    let eig = h.symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenFailure);
    }
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(vals)
}

/// Eigen-spectrum in dB relative to the noise power, descending.
pub fn eigen_spectrum_db(r: &DMatrix<Complex64>, noise_power: f64) -> Result<Vec<f64>> {
    Ok(eigen_spectrum(r)?
        .into_iter()
        .map(|v| 10.0 * (v.max(1e-300) / noise_power).log10())
        .collect())
}

/// Count of eigenvalues above noise_power * 10^(threshold_db/10): the
/// effective clutter(-plus-jamming) rank.
pub fn clutter_rank(r: &DMatrix<Complex64>, noise_power: f64, threshold_db: f64) -> Result<usize> {
    let gate = noise_power * 10f64.powf(threshold_db / 10.0);
    Ok(eigen_spectrum(r)?.into_iter().filter(|v| *v > gate).count())
}
