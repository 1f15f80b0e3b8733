//! Circular Keplerian two-body propagation of the constellation, plus the
//! geometric primitives the communication model needs: Earth-centered
//! inertial (ECI) positions for satellites and ground stations, pairwise
//! distances, and line-of-sight tests against a spherical Earth.
//!
//! Orbits are circular (eccentricity fixed at 0), so propagation reduces to
//! advancing the argument of latitude at the constant mean motion
//! `n = sqrt(μ/a³)` and rotating the in-plane position by inclination and
//! RAAN into ECI. No perturbations (J2, drag) are modeled.

use crate::constants::{MU_EARTH_KM3_S2, OMEGA_EARTH_RAD_S, R_EARTH_KM};
use thiserror::Error;

/// An Earth-centered inertial position in km.
pub type Vec3 = [f64; 3];

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors from constellation construction and geometry queries.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitalError {
    /// A ring protocol needs at least two satellites.
    #[error("constellation needs at least 2 satellites, got {0}")]
    TooFewSatellites(usize),
    /// Semi-major axis at or below the Earth surface.
    #[error("semi-major axis {0} km does not clear the Earth radius")]
    AxisBelowSurface(f64),
    /// Geodetic latitude outside [-90, 90] degrees.
    #[error("latitude {0} deg outside [-90, 90]")]
    LatitudeOutOfRange(f64),
    /// Distance requested between states at different times.
    #[error("timestamp mismatch: {0} s vs {1} s")]
    TimestampMismatch(f64, f64),
    /// Line-of-sight endpoint below the Earth surface.
    #[error("point at radius {0} km is inside the Earth")]
    PointInsideEarth(f64),
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// One circular orbit: geometry plus the in-plane phase at epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSpec {
    /// Semi-major axis in km (orbit radius, since eccentricity is 0).
    pub semi_major_axis_km: f64,
    /// Eccentricity; fixed at 0 for every orbit this module builds.
    pub eccentricity: f64,
    /// Inclination in degrees.
    pub inclination_deg: f64,
    /// Right ascension of the ascending node in degrees, in [0, 360).
    pub raan_deg: f64,
    /// Argument of latitude (in-plane phase from the ascending node) at
    /// epoch, in degrees, in [0, 360).
    pub arg_latitude_epoch_deg: f64,
    /// Epoch in seconds of simulation time.
    pub epoch_s: f64,
}

/// How the constellation spreads its satellites by the 360/n spacing angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacingMode {
    /// One satellite per plane: RAAN_i = i·360/n, equal in-plane phase.
    RaanSpaced,
    /// Single plane: equal RAAN, in-plane phase_i = i·360/n. This keeps a
    /// well-defined "next neighbor" ring at near-constant chord distance.
    InPlaneSpaced,
}

/// Geodetic ground-station location (spherical Earth).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStation {
    /// Latitude in degrees, [-90, 90].
    pub lat_deg: f64,
    /// Longitude in degrees.
    pub lon_deg: f64,
    /// Altitude above the surface in km.
    pub alt_km: f64,
}

/// Full constellation description.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstellationConfig {
    /// Number of satellites (≥ 2).
    pub n_sats: usize,
    /// Orbit altitude above the surface in km.
    pub altitude_km: f64,
    /// Inclination in degrees.
    pub inclination_deg: f64,
    /// Spacing interpretation for the 360/n angle.
    pub spacing_mode: SpacingMode,
    /// Ground station used by the server-aggregated protocol.
    pub ground_station: GroundStation,
    /// Optional server altitude in km. Below 1 km the server is treated as
    /// sitting at the ground station (rotating with the Earth); at larger
    /// values it flies an equatorial circular orbit at that altitude.
    pub geo_server_altitude_km: Option<f64>,
}

/// Propagated state of one satellite at a simulation time.
#[derive(Debug, Clone, PartialEq)]
pub struct SatelliteState {
    /// Index of the satellite in the constellation.
    pub sat_id: usize,
    /// ECI position in km.
    pub position_km: Vec3,
    /// ECI velocity in km/s.
    pub velocity_km_s: Vec3,
    /// Simulation time of this state in seconds.
    pub time_s: f64,
}

// ---------------------------------------------------------------------------
// Vector helpers
// ---------------------------------------------------------------------------

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Wrap an angle in degrees to [0, 360).
fn wrap_deg(x: f64) -> f64 {
    let w = x % 360.0;
    if w < 0.0 {
        w + 360.0
    } else {
        w
    }
}

// ---------------------------------------------------------------------------
// Constellation construction
// ---------------------------------------------------------------------------

/// Build the n orbits of a constellation with 360/n spacing.
///
/// In `RaanSpaced` mode satellite i gets RAAN = i·360/n with equal in-plane
/// phase; in `InPlaneSpaced` mode all satellites share one plane and
/// satellite i gets argument of latitude i·360/n.
pub fn build_constellation(config: &ConstellationConfig) -> Result<Vec<OrbitSpec>, OrbitalError> {
    if config.n_sats < 2 {
        return Err(OrbitalError::TooFewSatellites(config.n_sats));
    }
    let a = R_EARTH_KM + config.altitude_km;
    if a <= R_EARTH_KM {
        return Err(OrbitalError::AxisBelowSurface(a));
    }
    let spacing = 360.0 / config.n_sats as f64;
    let orbits = (0..config.n_sats)
        .map(|i| {
            let phase = wrap_deg(spacing * i as f64);
            let (raan, arg_lat) = match config.spacing_mode {
                SpacingMode::RaanSpaced => (phase, 0.0),
                SpacingMode::InPlaneSpaced => (0.0, phase),
            };
            OrbitSpec {
                semi_major_axis_km: a,
                eccentricity: 0.0,
                inclination_deg: wrap_deg(config.inclination_deg),
                raan_deg: raan,
                arg_latitude_epoch_deg: arg_lat,
                epoch_s: 0.0,
            }
        })
        .collect();
    Ok(orbits)
}

// ---------------------------------------------------------------------------
// Propagation
// ---------------------------------------------------------------------------

/// Orbital period of a circular orbit: T = 2π·sqrt(a³/μ).
pub fn orbital_period_s(semi_major_axis_km: f64) -> f64 {
    2.0 * std::f64::consts::PI * (semi_major_axis_km.powi(3) / MU_EARTH_KM3_S2).sqrt()
}

/// Propagate a circular orbit to simulation time `t`.
///
/// The argument of latitude advances at the constant mean motion
/// `n = sqrt(μ/a³)`; the in-plane position is then rotated by inclination and
/// RAAN into ECI. `sat_id` is set to 0 — callers tracking multiple
/// satellites assign ids (see [`propagate_constellation`]).
pub fn propagate(orbit: &OrbitSpec, t: f64) -> SatelliteState {
    debug_assert_eq!(orbit.eccentricity, 0.0, "only circular orbits are propagated");
    let a = orbit.semi_major_axis_km;
    let n_mean = (MU_EARTH_KM3_S2 / a.powi(3)).sqrt();
    let u = orbit.arg_latitude_epoch_deg.to_radians() + n_mean * (t - orbit.epoch_s);
    let (su, cu) = u.sin_cos();
    let (si, ci) = orbit.inclination_deg.to_radians().sin_cos();
    let (so, co) = orbit.raan_deg.to_radians().sin_cos();

    let position_km = [
        a * (co * cu - so * ci * su),
        a * (so * cu + co * ci * su),
        a * (si * su),
    ];
    let v = a * n_mean; // = sqrt(μ/a)
    let velocity_km_s = [
        v * (-co * su - so * ci * cu),
        v * (-so * su + co * ci * cu),
        v * (si * cu),
    ];
    SatelliteState {
        sat_id: 0,
        position_km,
        velocity_km_s,
        time_s: t,
    }
}

/// Propagate every orbit of a constellation to time `t`, assigning ids by
/// position in the slice.
pub fn propagate_constellation(orbits: &[OrbitSpec], t: f64) -> Vec<SatelliteState> {
    orbits
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let mut s = propagate(o, t);
            s.sat_id = i;
            s
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Geometry queries
// ---------------------------------------------------------------------------

/// Euclidean distance between two satellite states taken at the same time.
pub fn distance(a: &SatelliteState, b: &SatelliteState) -> Result<f64, OrbitalError> {
    if a.time_s != b.time_s {
        return Err(OrbitalError::TimestampMismatch(a.time_s, b.time_s));
    }
    Ok(distance_points(&a.position_km, &b.position_km))
}

/// Euclidean distance between two ECI points in km.
pub fn distance_points(a: &Vec3, b: &Vec3) -> f64 {
    norm(&sub(a, b))
}

/// ECI position of a geodetic point at simulation time `t`.
///
/// Spherical-Earth model: the point sits at radius R⊕ + alt and rotates about
/// +z at the sidereal rate, starting from its longitude at t = 0.
pub fn ground_station_eci(
    lat_deg: f64,
    lon_deg: f64,
    alt_km: f64,
    t: f64,
) -> Result<Vec3, OrbitalError> {
    if !(-90.0..=90.0).contains(&lat_deg) {
        return Err(OrbitalError::LatitudeOutOfRange(lat_deg));
    }
    let r = R_EARTH_KM + alt_km;
    let (slat, clat) = lat_deg.to_radians().sin_cos();
    let theta = lon_deg.to_radians() + OMEGA_EARTH_RAD_S * t;
    Ok([r * clat * theta.cos(), r * clat * theta.sin(), r * slat])
}

/// True iff the segment a–b keeps more than `grazing_margin_km` of clearance
/// above the Earth sphere.
///
/// Both endpoints must be at or above the surface. The test computes the
/// minimum distance from the Earth center to the closed segment and compares
/// it against R⊕ + margin.
pub fn line_of_sight(a: &Vec3, b: &Vec3, grazing_margin_km: f64) -> Result<bool, OrbitalError> {
    // A ground endpoint sits exactly on the sphere; allow a hair of slack so
    // alt = 0 stations are valid endpoints.
    for p in [a, b] {
        let r = norm(p);
        if r < R_EARTH_KM - 1e-9 {
            return Err(OrbitalError::PointInsideEarth(r));
        }
    }
    let d = sub(b, a);
    let dd = dot(&d, &d);
    let closest = if dd == 0.0 {
        norm(a)
    } else {
        let t = (-dot(a, &d) / dd).clamp(0.0, 1.0);
        let p = [a[0] + t * d[0], a[1] + t * d[1], a[2] + t * d[2]];
        norm(&p)
    };
    Ok(closest > R_EARTH_KM + grazing_margin_km)
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

/// Render satellite states as an ephemeris CSV:
/// `time_s,sat_id,x_km,y_km,z_km`.
pub fn ephemeris_csv(states: &[SatelliteState]) -> String {
    let mut out = String::from("time_s,sat_id,x_km,y_km,z_km\n");
    for s in states {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            s.time_s, s.sat_id, s.position_km[0], s.position_km[1], s.position_km[2]
        ));
    }
    out
}

/// Render pairwise distances as CSV: `time_s,sat_i,sat_j,dist_km`.
pub fn distances_csv(rows: &[(f64, usize, usize, f64)]) -> String {
    let mut out = String::from("time_s,sat_i,sat_j,dist_km\n");
    for (t, i, j, d) in rows {
        out.push_str(&format!("{},{},{},{}\n", t, i, j, d));
    }
    out
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
