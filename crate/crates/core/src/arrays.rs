//! Array manifold: transmit subarray pattern, receive/Doppler/waveform
//! steering vectors and their Kronecker assembly into space-time snapshots.
//!
//! Vector ordering is pulse-major: flattened index `(k*N + n)*S + s` with
//! the waveform (subarray) index fastest. All spatial quantities are
//! expressed through the cone cosine `u = cos(azimuth) * cos(elevation)`.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SPEED_OF_LIGHT;

/// Radar front-end and timing parameters.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ArrayConfig {
    /// Carrier frequency f0 (Hz).
    pub carrier_hz: f64,
    /// Transmit elements M.
    pub tx_elements: usize,
    /// Transmit subarrays S (S = 1 is the phased-array mode; S = M the full
    /// MIMO mode). Must divide M.
    pub subarrays: usize,
    /// Receive elements N.
    pub rx_elements: usize,
    /// Coherent pulses K.
    pub pulses: usize,
    /// Element spacing d (m), shared by both apertures.
    pub element_spacing_m: f64,
    /// Pulse repetition interval T (s).
    pub pri_s: f64,
    /// Platform speed v_a (m/s).
    pub platform_velocity_mps: f64,
    /// Waveform frequency step Delta_f (Hz) between adjacent subarrays.
    pub waveform_step_hz: f64,
    /// Pulse width T_p (s).
    pub pulse_width_s: f64,
}

impl ArrayConfig {
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    /// Normalized spacing d / lambda0.
    pub fn spacing_ratio(&self) -> f64 {
        self.element_spacing_m / self.wavelength()
    }

    /// Clutter-ridge slope beta = 2 v_a T / d.
    pub fn beta(&self) -> f64 {
        2.0 * self.platform_velocity_mps * self.pri_s / self.element_spacing_m
    }

    /// Elements per subarray M_S.
    pub fn elements_per_subarray(&self) -> usize {
        self.tx_elements / self.subarrays
    }

    /// Space-time snapshot length S * N * K.
    pub fn snapshot_len(&self) -> usize {
        self.subarrays * self.rx_elements * self.pulses
    }

    /// Normalized range frequency phi_R = 2 R Delta_f / c for a given range.
    pub fn range_frequency(&self, range_m: f64) -> f64 {
        2.0 * range_m * self.waveform_step_hz / SPEED_OF_LIGHT
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("carrier_hz", self.carrier_hz),
            ("element_spacing_m", self.element_spacing_m),
            ("pri_s", self.pri_s),
            ("pulse_width_s", self.pulse_width_s),
        ];
        for (key, v) in positive {
            if !(v > 0.0) {
                return Err(Error::InvalidConfig {
                    key: key.into(),
                    reason: "must be > 0".into(),
                });
            }
        }
        if self.subarrays == 0 || self.tx_elements % self.subarrays != 0 {
            return Err(Error::InvalidConfig {
                key: "subarrays".into(),
                reason: format!("must divide tx_elements = {}", self.tx_elements),
            });
        }
        if self.rx_elements == 0 || self.pulses == 0 {
            return Err(Error::InvalidConfig {
                key: "rx_elements/pulses".into(),
                reason: "must be >= 1".into(),
            });
        }
        if self.pulse_width_s >= self.pri_s {
            return Err(Error::InvalidConfig {
                key: "pulse_width_s".into(),
                reason: "must be < pri_s".into(),
            });
        }
        // orthogonality regime assumed throughout the jamming analysis
        if self.waveform_step_hz * self.pulse_width_s < 1.0 {
            return Err(Error::InvalidConfig {
                key: "waveform_step_hz".into(),
                reason: "waveform step times pulse width must be >= 1".into(),
            });
        }
        Ok(())
    }
}

/// Periodic Dirichlet ratio sin(L*pi*x) / sin(pi*x), continued with its
/// limit L * (-1)^((L-1) n) at integer x = n via the cosine quotient.
pub fn dirichlet_kernel(order: usize, x: f64) -> f64 {
    let l = order as f64;
    let frac = x - x.round();
    if frac.abs() < 1e-9 {
        l * (l * std::f64::consts::PI * x).cos() / (std::f64::consts::PI * x).cos()
    } else {
        (l * std::f64::consts::PI * x).sin() / (std::f64::consts::PI * x).sin()
    }
}

fn phase_ramp(len: usize, step: f64, offset: f64) -> DVector<Complex64> {
    DVector::from_iterator(
        len,
        (0..len).map(|i| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (i as f64 * step + offset))),
    )
}

impl ArrayConfig {
    /// Coherent subarray gain toward cone cosine `u` for a beam steered to
    /// `u_t`: Dirichlet of order M (S = 1) or M_S (subarrayed transmit).
    pub fn transmit_pattern(&self, u_target: f64, u: f64) -> f64 {
        let order = if self.subarrays == 1 {
            self.tx_elements
        } else {
            self.elements_per_subarray()
        };
        dirichlet_kernel(order, self.spacing_ratio() * (u_target - u))
    }

    /// Receive steering: exp(j 2 pi n (d/lambda0) u), n = 0..N-1.
    pub fn receive_steering(&self, u: f64) -> DVector<Complex64> {
        phase_ramp(self.rx_elements, self.spacing_ratio() * u, 0.0)
    }

    /// Doppler steering at normalized Doppler frequency f_d in cycles per
    /// pulse: exp(j 2 pi k f_d), k = 0..K-1.
    pub fn doppler_steering(&self, doppler: f64) -> DVector<Complex64> {
        phase_ramp(self.pulses, doppler, 0.0)
    }

    /// Waveform (range-angle) steering across subarrays:
    /// exp(j 2 pi s ((d/lambda0) u - phi_R)), s = 0..S-1.
    pub fn waveform_steering(&self, u: f64, phi_range: f64) -> DVector<Complex64> {
        phase_ramp(self.subarrays, self.spacing_ratio() * u - phi_range, 0.0)
    }

    /// Normalized Doppler of a stationary scatterer at cone cosine `u`:
    /// the clutter ridge f_d = beta * (d/lambda0) * u. Computed as that
    /// exact product so the ridge relation holds to the last bit.
    pub fn clutter_doppler(&self, u: f64) -> f64 {
        self.beta() * self.spacing_ratio() * u
    }

    /// Deterministic space-time snapshot
    /// `B(u) * kron(doppler, kron(receive, waveform))` with an optional
    /// per-subarray modulation already folded into `waveform`.
    pub fn snapshot(
        &self,
        u_target: f64,
        u: f64,
        doppler: f64,
        waveform: &DVector<Complex64>,
    ) -> Result<DVector<Complex64>> {
        if waveform.len() != self.subarrays {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "waveform steering has {} entries, expected S = {}",
                    waveform.len(),
                    self.subarrays
                ),
            });
        }
        let gain = Complex64::new(self.transmit_pattern(u_target, u), 0.0);
        let d = self.doppler_steering(doppler);
        let a = self.receive_steering(u);
        let mut out = DVector::zeros(self.snapshot_len());
        let (s_len, n_len) = (self.subarrays, self.rx_elements);
        for k in 0..self.pulses {
            for n in 0..n_len {
                let dn = gain * d[k] * a[n];
                for s in 0..s_len {
                    out[(k * n_len + n) * s_len + s] = dn * waveform[s];
                }
            }
        }
        Ok(out)
    }

    /// Target (presumed) space-time steering vector at cone cosine `u` and
    /// normalized Doppler `doppler`, for the cell at range frequency
    /// `phi_range`.
    pub fn target_steering(
        &self,
        u: f64,
        doppler: f64,
        phi_range: f64,
    ) -> Result<DVector<Complex64>> {
        let w = self.waveform_steering(u, phi_range);
        self.snapshot(u, u, doppler, &w)
    }
}
