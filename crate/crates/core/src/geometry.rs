//! Detection-scene geometry: radar/jammer angles, the clutter iso-range
//! circle and the elliptical ground trajectory of scattered-wave jamming.
//!
//! The jamming scatterers lie on the intersection of the ground plane with
//! the spheroid whose foci are the radar and the jammer and whose major axis
//! equals the two-way propagation distance. The conic for that intersection
//! is derived directly from the defining relation
//! `dist(p, radar) + dist(p, jammer) = 2*R_t` by eliminating the square
//! roots; every sampled point is checked against that relation in tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Propagation speed used throughout (the round value keeps the normalized
/// range frequency of the reference scenario an exact integer).
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// Point in the global frame: radar at (0, 0, H), ground plane z = 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Position3D {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3D {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn distance(&self, other: &Position3D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Scene parameters tying the radar platform, the jammer and the cell under
/// test together. Angles and the focal distance are derived on demand so the
/// degenerate jammer-above-radar case stays representable.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SceneGeometry {
    /// Radar platform height H (m), > 0.
    pub radar_height: f64,
    pub jammer_position: Position3D,
    /// One-way target range R_t (m); the spheroid major axis is 2*R_t.
    pub target_range: f64,
    /// Platform speed along +X (m/s).
    pub platform_velocity: f64,
}

impl SceneGeometry {
    pub fn radar_position(&self) -> Position3D {
        Position3D::new(0.0, 0.0, self.radar_height)
    }

    /// Jammer azimuth and elevation seen from the radar's ground projection.
    pub fn jammer_angles(&self) -> Result<(f64, f64)> {
        jammer_angles(self.radar_height, self.jammer_position)
    }

    /// Distance between radar and jammer, i.e. the spheroid focal separation.
    pub fn focal_distance(&self) -> f64 {
        focal_distance(self.radar_position(), self.jammer_position)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radar_height > 0.0) {
            return Err(Error::InvalidConfig {
                key: "radar_height".into(),
                reason: "must be > 0".into(),
            });
        }
        if !(self.target_range > self.radar_height) {
            return Err(Error::InvalidConfig {
                key: "target_range".into(),
                reason: "must exceed radar height for the clutter ring to exist".into(),
            });
        }
        if self.focal_distance() >= 2.0 * self.target_range {
            return Err(Error::InvalidConfig {
                key: "jammer_position".into(),
                reason: "focal distance must be < 2*target_range (nondegenerate spheroid)".into(),
            });
        }
        Ok(())
    }
}

/// Azimuth `atan2(y_J, x_J)` and elevation `atan(H / sqrt(x_J^2 + y_J^2))`
/// of the jammer. Errors when the jammer sits on the radar's vertical axis.
pub fn jammer_angles(radar_height: f64, jammer: Position3D) -> Result<(f64, f64)> {
    let ground = (jammer.x * jammer.x + jammer.y * jammer.y).sqrt();
    if ground == 0.0 {
        return Err(Error::DegeneratePosition);
    }
    let azimuth = jammer.y.atan2(jammer.x);
    let elevation = (radar_height / ground).atan();
    Ok((azimuth, elevation))
}

/// Euclidean radar-jammer separation.
pub fn focal_distance(radar: Position3D, jammer: Position3D) -> f64 {
    radar.distance(&jammer)
}

/// General conic `Q1 x^2 + Q2 xy + Q3 y^2 + Q4 x + Q5 y + Q6 = 0` of the
/// jamming scatterer trajectory, plus its canonical center/axes/orientation.
///
/// Coefficients are normalized by `16 R_t^2` so the quadratic part is O(1).
#[derive(Clone, Copy, Debug)]
pub struct EllipseTrajectory {
    /// `[Q1, Q2, Q3, Q4, Q5, Q6]`.
    pub conic: [f64; 6],
    pub center: (f64, f64),
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Major-axis angle w.r.t. +X, radians.
    pub orientation: f64,
}

impl EllipseTrajectory {
    /// Conic value at (x, y); zero on the trajectory, negative inside.
    pub fn residual(&self, x: f64, y: f64) -> f64 {
        let [q1, q2, q3, q4, q5, q6] = self.conic;
        q1 * x * x + q2 * x * y + q3 * y * y + q4 * x + q5 * y + q6
    }

    fn encloses_origin(&self) -> bool {
        self.conic[5] < 0.0
    }
}

/// Ground trajectory of the jamming scatterers for a given scene.
///
/// Eliminating the radicals from `|p - p_R| + |p - p_J| = 2 R_t` on z = 0
/// gives, with `L = |p_J|^2 - H^2 - 2 x x_J - 2 y y_J`:
///
/// `16 R_t^2 [(x - x_J)^2 + (y - y_J)^2 + z_J^2] = (4 R_t^2 + L)^2`
///
/// which is quadratic in (x, y) since the quartic terms cancel. The spurious
/// branch from squaring would require `| |p-p_R| - |p-p_J| | = 2 R_t > R_f`,
/// impossible for a nondegenerate spheroid, so the conic locus is exact.
pub fn jamming_trajectory(geom: &SceneGeometry) -> Result<EllipseTrajectory> {
    geom.validate()?;
    let rt = geom.target_range;
    let h = geom.radar_height;
    let j = geom.jammer_position;
    let scale = 16.0 * rt * rt;

    let a = -2.0 * j.x;
    let b = -2.0 * j.y;
    let c0 = j.x * j.x + j.y * j.y + j.z * j.z - h * h;
    let s4 = 4.0 * rt * rt + c0;

    let q = [
        (scale - a * a) / scale,
        (-2.0 * a * b) / scale,
        (scale - b * b) / scale,
        (scale * (-2.0 * j.x) - 2.0 * a * s4) / scale,
        (scale * (-2.0 * j.y) - 2.0 * b * s4) / scale,
        (scale * (j.x * j.x + j.y * j.y + j.z * j.z) - s4 * s4) / scale,
    ];

    let det = 4.0 * q[0] * q[2] - q[1] * q[1];
    if !(q[0] > 0.0 && q[2] > 0.0 && det > 0.0) {
        return Err(Error::DegenerateConic);
    }

    // Center from the gradient of the quadratic form.
    let fx = (q[1] * q[4] - 2.0 * q[2] * q[3]) / det;
    let fy = (q[1] * q[3] - 2.0 * q[0] * q[4]) / det;
    let v0 = q[0] * fx * fx + q[1] * fx * fy + q[2] * fy * fy + q[3] * fx + q[4] * fy + q[5];
    if v0 >= 0.0 {
        // Positive-definite quadratic part with nonnegative minimum: the
        // spheroid never reaches the ground plane.
        return Err(Error::NoGroundIntersection);
    }

    // Eigen-rotation of the quadratic part [[Q1, Q2/2], [Q2/2, Q3]].
    let half_tr = 0.5 * (q[0] + q[2]);
    let disc = (0.5 * (q[0] - q[2])).hypot(0.5 * q[1]);
    let lam_minor = half_tr - disc; // along the major axis
    let lam_major = half_tr + disc;
    let semi_major = (-v0 / lam_minor).sqrt();
    let semi_minor = (-v0 / lam_major).sqrt();
    let orientation = if q[1] == 0.0 {
        if q[0] <= q[2] {
            0.0
        } else {
            std::f64::consts::FRAC_PI_2
        }
    } else {
        (lam_minor - q[0]).atan2(0.5 * q[1])
    };

    Ok(EllipseTrajectory {
        conic: q,
        center: (fx, fy),
        semi_major,
        semi_minor,
        orientation,
    })
}

/// Which trajectory a ring of scatterers belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingKind {
    Clutter,
    Jamming,
}

/// One ground scatterer with its direction angles seen from the radar.
/// The elevation convention is `cos(theta) = ground_range / slant_range`
/// for every scatterer.
#[derive(Clone, Copy, Debug)]
pub struct RingPoint {
    pub position: Position3D,
    /// Azimuth from the origin, radians.
    pub azimuth: f64,
    /// Elevation (depression) angle, radians.
    pub elevation: f64,
}

impl RingPoint {
    /// Direction cosine product `cos(azimuth) * cos(elevation)` that drives
    /// the spatial and Doppler frequencies.
    pub fn cone_cosine(&self) -> f64 {
        self.azimuth.cos() * self.elevation.cos()
    }
}

/// Ordered scatterer ring (azimuth increasing, then radius).
#[derive(Clone, Debug)]
pub struct ScattererRing {
    pub kind: RingKind,
    pub points: Vec<RingPoint>,
}

impl ScattererRing {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn ring_point(radar_height: f64, azimuth: f64, radius: f64) -> RingPoint {
    RingPoint {
        position: Position3D::new(radius * azimuth.cos(), radius * azimuth.sin(), 0.0),
        azimuth,
        elevation: radar_height.atan2(radius),
    }
}

/// Positive radii where the azimuth ray from the origin meets the conic.
fn ray_radii(traj: &EllipseTrajectory, azimuth: f64) -> Vec<f64> {
    let (s, c) = azimuth.sin_cos();
    let [q1, q2, q3, q4, q5, q6] = traj.conic;
    let a = q1 * c * c + q2 * c * s + q3 * s * s;
    let b = q4 * c + q5 * s;
    let disc = b * b - 4.0 * a * q6;
    if disc < 0.0 {
        return Vec::new();
    }
    // Citardauq-style split keeps both roots accurate.
    let sq = disc.sqrt();
    let qq = -0.5 * (b + b.signum() * sq);
    let (r1, r2) = if qq == 0.0 {
        (0.0, 0.0)
    } else {
        (qq / a, q6 / qq)
    };
    let mut out: Vec<f64> = [r1, r2].into_iter().filter(|r| *r > 0.0).collect();
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out.dedup_by(|x, y| (*x - *y).abs() < 1e-9 * y.abs());
    out
}

/// Azimuth window [phi_min, phi_max] of the jamming ring when the ellipse
/// does not enclose the origin, found by scan + bisection on the ray
/// discriminant.
fn azimuth_window(traj: &EllipseTrajectory) -> Result<(f64, f64)> {
    let center_az = traj.center.1.atan2(traj.center.0);
    let hits = |az: f64| !ray_radii(traj, az).is_empty();
    if !hits(center_az) {
        return Err(Error::EmptyRing);
    }
    let scan = 4096;
    let mut lo = -std::f64::consts::PI;
    let mut hi = std::f64::consts::PI;
    // Walk outward from the center azimuth to the first miss on each side.
    let step = std::f64::consts::PI / scan as f64;
    let mut found_lo = false;
    let mut found_hi = false;
    for i in 1..=scan {
        let off = i as f64 * step;
        if !found_hi && !hits(center_az + off) {
            let (mut a, mut b) = (center_az + off - step, center_az + off);
            for _ in 0..64 {
                let m = 0.5 * (a + b);
                if hits(m) {
                    a = m;
                } else {
                    b = m;
                }
            }
            hi = a;
            found_hi = true;
        }
        if !found_lo && !hits(center_az - off) {
            let (mut a, mut b) = (center_az - off + step, center_az - off);
            for _ in 0..64 {
                let m = 0.5 * (a + b);
                if hits(m) {
                    a = m;
                } else {
                    b = m;
                }
            }
            lo = a;
            found_lo = true;
        }
        if found_lo && found_hi {
            break;
        }
    }
    if !(found_lo && found_hi) {
        // Ellipse seen over the full circle despite a positive conic value
        // at the origin (numerically on the boundary); treat as enclosing.
        return Ok((0.0, 2.0 * std::f64::consts::PI));
    }
    Ok((lo, hi))
}

/// Sample the clutter circle and the jamming ellipse.
///
/// Clutter: `n_clutter` equal azimuth steps over [0, 2*pi) on the circle of
/// radius `sqrt(R_t^2 - H^2)`. Jamming: `n_jamming` equal azimuth steps over
/// the visible window (the full circle when the ellipse encloses the
/// origin); rays crossing the ellipse twice contribute both points.
pub fn sample_rings(
    geom: &SceneGeometry,
    traj: &EllipseTrajectory,
    n_clutter: usize,
    n_jamming: usize,
) -> Result<(ScattererRing, ScattererRing)> {
    geom.validate()?;
    let h = geom.radar_height;
    let rho = (geom.target_range * geom.target_range - h * h).sqrt();

    let clutter = ScattererRing {
        kind: RingKind::Clutter,
        points: (0..n_clutter)
            .map(|i| {
                let az = 2.0 * std::f64::consts::PI * i as f64 / n_clutter as f64;
                ring_point(h, az, rho)
            })
            .collect(),
    };

    let mut jam_points = Vec::with_capacity(n_jamming);
    if traj.encloses_origin() {
        for i in 0..n_jamming {
            let az = 2.0 * std::f64::consts::PI * i as f64 / n_jamming as f64;
            for r in ray_radii(traj, az) {
                jam_points.push(ring_point(h, az, r));
            }
        }
    } else {
        let (lo, hi) = azimuth_window(traj)?;
        for i in 0..n_jamming {
            let t = if n_jamming == 1 {
                0.5
            } else {
                i as f64 / (n_jamming - 1) as f64
            };
            let az = lo + t * (hi - lo);
            for r in ray_radii(traj, az) {
                jam_points.push(ring_point(h, az, r));
            }
        }
    }
    if jam_points.is_empty() {
        return Err(Error::EmptyRing);
    }
    jam_points.sort_by(|p, q| {
        (p.azimuth, p.position.x.hypot(p.position.y))
            .partial_cmp(&(q.azimuth, q.position.x.hypot(q.position.y)))
            .unwrap()
    });

    Ok((
        clutter,
        ScattererRing {
            kind: RingKind::Jamming,
            points: jam_points,
        },
    ))
}
