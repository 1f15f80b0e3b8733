//! Physical constants shared by the orbital and link-budget models.
//!
//! Standard WGS-84 / EGM96 figures, fixed in one place so every module and
//! every test oracle agrees on the same numbers.

/// Earth gravitational parameter μ = GM⊕ in km³/s².
pub const MU_EARTH_KM3_S2: f64 = 398600.4418;

/// Mean equatorial Earth radius in km.
pub const R_EARTH_KM: f64 = 6_378.137;

/// Earth sidereal rotation rate in rad/s.
pub const OMEGA_EARTH_RAD_S: f64 = 7.292_115_9e-5;

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;
