//! Optimal space-time filtering: adaptive weights, improvement factor (IF),
//! IF-versus-Doppler curves, minimum-variance spatial-Doppler spectra and
//! the Monte Carlo IF experiment.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrays::ArrayConfig;
use crate::covariance::total_covariance;
use crate::error::{Error, Result};

/// Target hypothesis for filtering metrics.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TargetModel {
    /// Azimuth (rad).
    pub azimuth: f64,
    /// Elevation (rad).
    pub elevation: f64,
    /// Normalized Doppler in [-0.5, 0.5].
    pub doppler: f64,
    /// Range (m).
    pub range_m: f64,
    /// Amplitude power xi_t^2 (cancels out of the IF).
    pub power: f64,
}

impl TargetModel {
    pub fn cone_cosine(&self) -> f64 {
        self.azimuth.cos() * self.elevation.cos()
    }

    pub fn validate(&self) -> Result<()> {
        if self.doppler.abs() > 0.5 {
            return Err(Error::InvalidConfig {
                key: "doppler".into(),
                reason: "normalized Doppler must lie in [-0.5, 0.5]".into(),
            });
        }
        Ok(())
    }
}

/// IF sweep over a uniform normalized-Doppler grid.
#[derive(Clone, Debug)]
pub struct IfCurve {
    /// Grid points -0.5 + i/len, i = 0..len.
    pub doppler: Vec<f64>,
    /// IF in dB at each grid point.
    pub if_db: Vec<f64>,
}

impl IfCurve {
    pub fn grid(len: usize) -> Vec<f64> {
        (0..len).map(|i| -0.5 + i as f64 / len as f64).collect()
    }
}

fn chol(r_u: &DMatrix<Complex64>) -> Result<Cholesky<Complex64, Dyn>> {
    r_u.clone().cholesky().ok_or(Error::NotPositiveDefinite)
}

/// w = R_u^{-1} t / (t^H R_u^{-1} t): distortionless (w^H t = 1) minimum
/// variance weights.
pub fn optimal_weights(
    r_u: &DMatrix<Complex64>,
    steering: &DVector<Complex64>,
) -> Result<DVector<Complex64>> {
    if r_u.nrows() != steering.len() {
        return Err(Error::DimensionMismatch {
            context: format!("covariance {} vs steering {}", r_u.nrows(), steering.len()),
        });
    }
    let solved = chol(r_u)?.solve(steering);
    // t^H R^{-1} t is real positive for PD R
    let denom = Complex64::new(steering.dotc(&solved).re, 0.0);
    Ok(solved.map(|z| z / denom))
}

fn quad_form_inv(
    chol: &Cholesky<Complex64, Dyn>,
    v: &DVector<Complex64>,
) -> f64 {
    chol.solve(v).dotc(v).re
}

/// IF = sigma_n^2 * v^H R_u^{-1} v with unit-amplitude steering v, in dB.
pub fn improvement_factor(
    r_u: &DMatrix<Complex64>,
    steering: &DVector<Complex64>,
    noise_power: f64,
) -> Result<f64> {
    if r_u.nrows() != steering.len() {
        return Err(Error::DimensionMismatch {
            context: format!("covariance {} vs steering {}", r_u.nrows(), steering.len()),
        });
    }
    let c = chol(r_u)?;
    Ok(10.0 * (noise_power * quad_form_inv(&c, steering)).log10())
}

/// IF swept over `grid_size` normalized-Doppler bins at a fixed look
/// direction (cone cosine `u_target`) and range.
pub fn if_curve(
    r_u: &DMatrix<Complex64>,
    cfg: &ArrayConfig,
    u_target: f64,
    target_range_m: f64,
    noise_power: f64,
    grid_size: usize,
) -> Result<IfCurve> {
    let c = chol(r_u)?;
    let phi_r = cfg.range_frequency(target_range_m);
    let doppler = IfCurve::grid(grid_size);
    let if_db = doppler
        .par_iter()
        .map(|f| {
            let v = cfg.target_steering(u_target, *f, phi_r)?;
            Ok(10.0 * (noise_power * quad_form_inv(&c, &v)).log10())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(IfCurve { doppler, if_db })
}

/// Minimum-variance (Capon) spatial-Doppler spectrum on a uniform grid of
/// normalized spatial frequency x normalized Doppler, peak-normalized dB.
/// Scan vectors are unit-modulus phase ramps (no transmit taper) so ridge
/// locations are unbiased.
pub fn mvdr_spectrum(
    r: &DMatrix<Complex64>,
    cfg: &ArrayConfig,
    target_range_m: f64,
    spatial_bins: usize,
    doppler_bins: usize,
) -> Result<Vec<Vec<f64>>> {
    let c = chol(r)?;
    let phi_r = cfg.range_frequency(target_range_m);
    let spatial: Vec<f64> = (0..spatial_bins)
        .map(|i| -0.5 + i as f64 / spatial_bins as f64)
        .collect();
    let doppler: Vec<f64> = (0..doppler_bins)
        .map(|i| -0.5 + i as f64 / doppler_bins as f64)
        .collect();
    let mut grid: Vec<Vec<f64>> = spatial
        .par_iter()
        .map(|fs| {
            let u = fs / cfg.spacing_ratio();
            let a = cfg.receive_steering(u);
            let p = cfg.waveform_steering(u, phi_r);
            doppler
                .iter()
                .map(|f| {
                    let d = cfg.doppler_steering(*f);
                    let mut v = DVector::zeros(cfg.snapshot_len());
                    let (s_len, n_len) = (cfg.subarrays, cfg.rx_elements);
                    for k in 0..cfg.pulses {
                        for n in 0..n_len {
                            for s in 0..s_len {
                                v[(k * n_len + n) * s_len + s] = d[k] * a[n] * p[s];
                            }
                        }
                    }
                    10.0 * (1.0 / quad_form_inv(&c, &v)).log10()
                })
                .collect()
        })
        .collect();
    let peak = grid
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    for row in &mut grid {
        for v in row {
            *v -= peak;
        }
    }
    Ok(grid)
}

/// Monte Carlo IF: per trial, patch powers are |xi|^2 draws from complex
/// Gaussians with the given mean powers; the per-trial covariance feeds an
/// IF sweep. Trial t uses an RNG stream derived from (seed, t). Returns the
/// per-bin mean and standard deviation across trials, in dB.
#[allow(clippy::too_many_arguments)]
pub fn monte_carlo_if(
    cfg: &ArrayConfig,
    clutter_snapshots: &DMatrix<Complex64>,
    jamming_snapshots: Option<&DMatrix<Complex64>>,
    clutter_power: f64,
    jamming_power: f64,
    noise_power: f64,
    u_target: f64,
    target_range_m: f64,
    grid_size: usize,
    trials: usize,
    seed: u64,
) -> Result<(IfCurve, Vec<f64>)> {
    if trials == 0 {
        return Err(Error::InvalidConfig {
            key: "trials".into(),
            reason: "need at least one Monte Carlo trial".into(),
        });
    }
    let n = cfg.snapshot_len();
    let curves = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let mut r = DMatrix::<Complex64>::zeros(n, n);
            accumulate_sampled(&mut r, clutter_snapshots, clutter_power, &mut rng);
            if let Some(vj) = jamming_snapshots {
                accumulate_sampled(&mut r, vj, jamming_power, &mut rng);
            }
            let r_u = total_covariance(&r, &DMatrix::zeros(n, n), noise_power)?;
            if_curve(&r_u, cfg, u_target, target_range_m, noise_power, grid_size)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut mean = vec![0.0; grid_size];
    for c in &curves {
        for (m, v) in mean.iter_mut().zip(&c.if_db) {
            *m += v / trials as f64;
        }
    }
    let mut std = vec![0.0; grid_size];
    if trials > 1 {
        for c in &curves {
            for ((s, m), v) in std.iter_mut().zip(&mean).zip(&c.if_db) {
                *s += (v - m) * (v - m) / (trials as f64 - 1.0);
            }
        }
        for s in &mut std {
            *s = s.sqrt();
        }
    }
    Ok((
        IfCurve {
            doppler: IfCurve::grid(grid_size),
            if_db: mean,
        },
        std,
    ))
}

fn accumulate_sampled(
    r: &mut DMatrix<Complex64>,
    v: &DMatrix<Complex64>,
    mean_power: f64,
    rng: &mut ChaCha8Rng,
) {
    for i in 0..v.ncols() {
        // |xi|^2 of a complex Gaussian is exponential with the given mean
        let u: f64 = rng.gen();
        let p = -mean_power * (1.0 - u).ln();
        let col = v.column(i);
        // r += p * col col^H
        for a in 0..r.nrows() {
            for b in 0..r.ncols() {
                r[(a, b)] += Complex64::new(p, 0.0) * col[a] * col[b].conj();
            }
        }
    }
}

/// Locate the secondary notch of an IF curve: the deepest local minimum
/// more than 3 dB below the curve median, excluding the main-notch region
/// |doppler| <= `exclude`.
pub fn secondary_notch(curve: &IfCurve, exclude: f64) -> Option<(f64, f64)> {
    let mut sorted = curve.if_db.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sorted[sorted.len() / 2];
    let mut best: Option<(f64, f64)> = None;
    let n = curve.if_db.len();
    for i in 0..n {
        if curve.doppler[i].abs() <= exclude {
            continue;
        }
        let prev = curve.if_db[(i + n - 1) % n];
        let next = curve.if_db[(i + 1) % n];
        let v = curve.if_db[i];
        if v <= prev && v <= next && v < median - 3.0 {
            if best.map_or(true, |(_, d)| v < d) {
                best = Some((curve.doppler[i], v));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(subarrays: usize) -> ArrayConfig {
        ArrayConfig {
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
        }
    }

    fn noise(n: usize, p: f64) -> DMatrix<Complex64> {
        DMatrix::from_diagonal_element(n, n, Complex64::new(p, 0.0))
    }

    #[test]
    fn matched_filter_in_white_noise() {
        let c = cfg(1);
        let v = c.target_steering(0.0, 0.25, 400.0).unwrap();
        let r = noise(c.snapshot_len(), 2.0);
        let w = optimal_weights(&r, &v).unwrap();
        // w proportional to v and distortionless
        let dot = w.dotc(&v);
        assert_relative_eq!(dot.re, 1.0, max_relative = 1e-10);
        assert_relative_eq!(dot.im, 0.0, epsilon = 1e-12);
        let scale = w[0] / v[0];
        for (wi, vi) in w.iter().zip(v.iter()) {
            assert_relative_eq!((wi - scale * vi).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn weights_invariant_under_covariance_scaling() {
        let c = cfg(4);
        let v = c.target_steering(0.0, 0.25, 400.0).unwrap();
        let mut r = noise(c.snapshot_len(), 1.0);
        // add a PSD perturbation
        let p = c.target_steering(0.0, 0.1, 400.0).unwrap();
        for a in 0..r.nrows() {
            for b in 0..r.ncols() {
                r[(a, b)] += 0.3 * p[a] * p[b].conj();
            }
        }
        let w1 = optimal_weights(&r, &v).unwrap();
        let w2 = optimal_weights(&(r.map(|z| 7.5 * z)), &v).unwrap();
        for (a, b) in w1.iter().zip(w2.iter()) {
            assert_relative_eq!((a - b).norm(), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn noise_only_if_is_steering_norm() {
        let c = cfg(1);
        let v = c.target_steering(0.0, 0.25, 400.0).unwrap();
        let r = noise(c.snapshot_len(), 1.0);
        let if_db = improvement_factor(&r, &v, 1.0).unwrap();
        // B^2 N K = 8^2 * 8 * 8
        assert_relative_eq!(if_db, 10.0 * (8.0f64 * 8.0 * 8.0 * 8.0).log10(), max_relative = 1e-12);
        assert_relative_eq!(if_db, 36.12, max_relative = 1e-3);
    }

    #[test]
    fn if_homogeneous_in_joint_power_scaling() {
        let c = cfg(4);
        let v = c.target_steering(0.0, 0.25, 400.0).unwrap();
        let mut r = noise(c.snapshot_len(), 1.0);
        let p = c.target_steering(0.0, -0.2, 400.0).unwrap();
        for a in 0..r.nrows() {
            for b in 0..r.ncols() {
                r[(a, b)] += 5.0 * p[a] * p[b].conj();
            }
        }
        let base = improvement_factor(&r, &v, 1.0).unwrap();
        let scaled = improvement_factor(&(r.map(|z| 3.0 * z)), &v, 3.0).unwrap();
        assert_relative_eq!(base, scaled, max_relative = 1e-10);
    }

    #[test]
    fn if_bounded_by_noise_only() {
        let c = cfg(4);
        let v = c.target_steering(0.0, 0.25, 400.0).unwrap();
        let r0 = noise(c.snapshot_len(), 1.0);
        let top = improvement_factor(&r0, &v, 1.0).unwrap();
        let mut r = r0.clone();
        let p = c.target_steering(0.0, 0.25, 400.0).unwrap();
        for a in 0..r.nrows() {
            for b in 0..r.ncols() {
                r[(a, b)] += 2.0 * p[a] * p[b].conj();
            }
        }
        assert!(improvement_factor(&r, &v, 1.0).unwrap() <= top + 1e-9);
    }

    #[test]
    fn brute_force_oracle_small() {
        // S*N*K = 2*2*2: IF equals both the explicit-inverse quadratic form
        // and the weight-based output-SCNR ratio.
        let c = ArrayConfig {
            subarrays: 2,
            rx_elements: 2,
            pulses: 2,
            tx_elements: 4,
            ..cfg(4)
        };
        let v = c.target_steering(0.0, 0.25, 400.0).unwrap();
        let mut r = noise(c.snapshot_len(), 1.3);
        let p = c.target_steering(0.0, -0.1, 400.0).unwrap();
        for a in 0..r.nrows() {
            for b in 0..r.ncols() {
                r[(a, b)] += 2.0 * p[a] * p[b].conj();
            }
        }
        let if_db = improvement_factor(&r, &v, 1.3).unwrap();
        // explicit inverse route
        let inv = r.clone().try_inverse().unwrap();
        let q = (&inv * &v).dotc(&v).re;
        assert_relative_eq!(if_db, 10.0 * (1.3 * q).log10(), max_relative = 1e-8);
        // weight route: sigma^2 / (w^H R w) with distortionless w
        let w = optimal_weights(&r, &v).unwrap();
        let wrw = (&r * &w).dotc(&w).re;
        assert_relative_eq!(if_db, 10.0 * (1.3 / wrw).log10(), max_relative = 1e-8);
    }

    #[test]
    fn flat_spectrum_for_white_noise() {
        let c = cfg(4);
        let r = noise(c.snapshot_len(), 1.0);
        let g = mvdr_spectrum(&r, &c, 6000.0, 16, 16).unwrap();
        for row in &g {
            for v in row {
                assert!(v.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn monte_carlo_deterministic_and_zero_power() {
        let c = cfg(1);
        let v = c.target_steering(0.0, 0.0, 400.0).unwrap();
        let vm = DMatrix::from_columns(&[v.clone()]);
        let run = || {
            monte_carlo_if(&c, &vm, None, 100.0, 0.0, 1.0, 0.0, 6000.0, 32, 3, 42).unwrap()
        };
        let (a, sa) = run();
        let (b, sb) = run();
        assert_eq!(a.if_db, b.if_db);
        assert_eq!(sa, sb);
        // zero-power scatterers: noise-only IF everywhere
        let (z, _) = monte_carlo_if(&c, &vm, None, 0.0, 0.0, 1.0, 0.0, 6000.0, 16, 2, 1).unwrap();
        let r0 = noise(c.snapshot_len(), 1.0);
        let flat = if_curve(&r0, &c, 0.0, 6000.0, 1.0, 16).unwrap();
        for (x, y) in z.if_db.iter().zip(&flat.if_db) {
            assert_relative_eq!(x, y, max_relative = 1e-10);
        }
    }

    #[test]
    fn secondary_notch_detection() {
        let n = 128;
        let doppler = IfCurve::grid(n);
        let if_db: Vec<f64> = doppler
            .iter()
            .map(|f| {
                let main = -40.0 * (-(f / 0.02).powi(2)).exp();
                let second = -12.0 * (-((f - 0.24) / 0.02).powi(2)).exp();
                36.0 + main + second
            })
            .collect();
        let curve = IfCurve { doppler, if_db };
        let (loc, depth) = secondary_notch(&curve, 0.05).unwrap();
        assert!((loc - 0.24).abs() <= 1.0 / n as f64);
        assert!(depth < 30.0);
    }
}
