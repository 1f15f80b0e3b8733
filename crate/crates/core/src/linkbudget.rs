//! RF link-budget math: free-space path loss, EIRP, C/N0, Eb/N0, and link
//! margin, plus the sweep/grid helpers behind margin-versus-distance and
//! margin-versus-bitrate analyses and the transmission-delay model used by
//! the federated protocols.
//!
//! All quantities are in decibel units. The receive chain uses the G/T
//! formulation: C/N0 = EIRP − FSPL − misc + G/T + 228.601, where 228.601 dB
//! is −10·log10 of the Boltzmann constant.

use crate::constants::SPEED_OF_LIGHT_M_S;
use thiserror::Error;

/// Boltzmann constant expressed for the C/N0 chain: −10·log10(k) in dB.
pub const BOLTZMANN_DB: f64 = 228.601;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors from link-budget evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinkBudgetError {
    /// A quantity that must be strictly positive was not.
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    /// A quantity that must be nonnegative was negative.
    #[error("{name} must be nonnegative, got {value}")]
    Negative { name: &'static str, value: f64 },
    /// A sweep or grid axis was empty.
    #[error("{0} axis is empty")]
    EmptyAxis(&'static str),
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// RF parameters of one link direction.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkSpec {
    /// Carrier frequency in Hz.
    pub frequency_hz: f64,
    /// Channel bandwidth in Hz. Carried for completeness; the Eb/N0 chain
    /// does not consume it.
    pub bandwidth_hz: f64,
    /// Data rate in bit/s.
    pub bitrate_bps: f64,
    /// Required Eb/N0 for reliable reception, in dB.
    pub required_ebn0_db: f64,
    /// Transmit HPA power in dBW.
    pub tx_power_dbw: f64,
    /// Transmit HPA output back-off in dB.
    pub tx_obo_db: f64,
    /// Transmit antenna gain in dBi.
    pub tx_gain_dbi: f64,
    /// Receiver figure of merit G/T in dB/K.
    pub rx_g_over_t_db_k: f64,
    /// Miscellaneous losses in dB (default 0).
    pub misc_losses_db: f64,
}

impl LinkSpec {
    /// Ground-to-satellite uplink preset: 2 GHz, 6 MHz, 10 Mbps, required
    /// Eb/N0 10 dB, 17 dBW HPA with 6 dB OBO, 60 dBi gain, G/T 10 dB/K.
    pub fn preset_l1() -> Self {
        LinkSpec {
            frequency_hz: 2.0e9,
            bandwidth_hz: 6.0e6,
            bitrate_bps: 10.0e6,
            required_ebn0_db: 10.0,
            tx_power_dbw: 17.0,
            tx_obo_db: 6.0,
            tx_gain_dbi: 60.0,
            rx_g_over_t_db_k: 10.0,
            misc_losses_db: 0.0,
        }
    }

    /// Satellite-to-ground downlink preset; same parameters as the uplink.
    pub fn preset_l2() -> Self {
        Self::preset_l1()
    }

    /// Inter-satellite link preset: 2.2 GHz carrier, 5 MHz bandwidth,
    /// otherwise identical to the up/downlink presets.
    pub fn preset_l3() -> Self {
        LinkSpec {
            frequency_hz: 2.2e9,
            bandwidth_hz: 5.0e6,
            ..Self::preset_l1()
        }
    }

    /// Look a preset up by its name (`l1`, `l2`, `l3`), case-insensitive.
    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "l1" => Some(Self::preset_l1()),
            "l2" => Some(Self::preset_l2()),
            "l3" => Some(Self::preset_l3()),
            _ => None,
        }
    }
}

/// Derived link-budget quantities for one (spec, distance) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudgetReport {
    /// Free-space path loss in dB.
    pub fspl_db: f64,
    /// Effective isotropic radiated power in dBW.
    pub eirp_dbw: f64,
    /// Carrier-to-noise-density ratio in dB-Hz.
    pub cn0_dbhz: f64,
    /// Energy-per-bit to noise-density ratio in dB.
    pub ebn0_db: f64,
    /// Link margin: achieved minus required Eb/N0, in dB.
    pub margin_db: f64,
}

// ---------------------------------------------------------------------------
// Budget chain
// ---------------------------------------------------------------------------

/// Free-space path loss 20·log10(4π·d·f/c) in dB, with d in km.
pub fn fspl(distance_km: f64, frequency_hz: f64) -> Result<f64, LinkBudgetError> {
    if distance_km <= 0.0 {
        return Err(LinkBudgetError::NonPositive {
            name: "distance_km",
            value: distance_km,
        });
    }
    if frequency_hz <= 0.0 {
        return Err(LinkBudgetError::NonPositive {
            name: "frequency_hz",
            value: frequency_hz,
        });
    }
    let d_m = distance_km * 1000.0;
    Ok(20.0 * (4.0 * std::f64::consts::PI * d_m * frequency_hz / SPEED_OF_LIGHT_M_S).log10())
}

/// Evaluate the full budget chain for a link at the given distance.
pub fn link_budget(spec: &LinkSpec, distance_km: f64) -> Result<LinkBudgetReport, LinkBudgetError> {
    if spec.bitrate_bps <= 0.0 {
        return Err(LinkBudgetError::NonPositive {
            name: "bitrate_bps",
            value: spec.bitrate_bps,
        });
    }
    let fspl_db = fspl(distance_km, spec.frequency_hz)?;
    let eirp_dbw = spec.tx_power_dbw - spec.tx_obo_db + spec.tx_gain_dbi;
    let cn0_dbhz = eirp_dbw - fspl_db - spec.misc_losses_db + spec.rx_g_over_t_db_k + BOLTZMANN_DB;
    let ebn0_db = cn0_dbhz - 10.0 * spec.bitrate_bps.log10();
    let margin_db = ebn0_db - spec.required_ebn0_db;
    Ok(LinkBudgetReport {
        fspl_db,
        eirp_dbw,
        cn0_dbhz,
        ebn0_db,
        margin_db,
    })
}

/// Margin at each bitrate, holding everything else fixed.
pub fn margin_vs_bitrate(
    spec: &LinkSpec,
    distance_km: f64,
    bitrates_bps: &[f64],
) -> Result<Vec<(f64, f64)>, LinkBudgetError> {
    if bitrates_bps.is_empty() {
        return Err(LinkBudgetError::EmptyAxis("bitrate"));
    }
    bitrates_bps
        .iter()
        .map(|&bitrate| {
            let point = LinkSpec {
                bitrate_bps: bitrate,
                ..spec.clone()
            };
            Ok((bitrate, link_budget(&point, distance_km)?.margin_db))
        })
        .collect()
}

/// Margin over a power × distance grid: `grid[i][j]` is the margin with
/// `tx_power_dbw = powers[i]` at `distances[j]`.
pub fn margin_grid(
    spec: &LinkSpec,
    powers_dbw: &[f64],
    distances_km: &[f64],
) -> Result<Vec<Vec<f64>>, LinkBudgetError> {
    if powers_dbw.is_empty() {
        return Err(LinkBudgetError::EmptyAxis("power"));
    }
    if distances_km.is_empty() {
        return Err(LinkBudgetError::EmptyAxis("distance"));
    }
    powers_dbw
        .iter()
        .map(|&p| {
            let row_spec = LinkSpec {
                tx_power_dbw: p,
                ..spec.clone()
            };
            distances_km
                .iter()
                .map(|&d| Ok(link_budget(&row_spec, d)?.margin_db))
                .collect()
        })
        .collect()
}

/// Time to deliver a payload: serialization (payload/bitrate) plus
/// propagation (distance/c). Zero payload or zero distance degenerate to the
/// remaining term.
pub fn transmission_delay(
    payload_bits: u64,
    bitrate_bps: f64,
    distance_km: f64,
) -> Result<f64, LinkBudgetError> {
    if bitrate_bps <= 0.0 {
        return Err(LinkBudgetError::NonPositive {
            name: "bitrate_bps",
            value: bitrate_bps,
        });
    }
    if distance_km < 0.0 {
        return Err(LinkBudgetError::Negative {
            name: "distance_km",
            value: distance_km,
        });
    }
    Ok(payload_bits as f64 / bitrate_bps + distance_km * 1000.0 / SPEED_OF_LIGHT_M_S)
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

/// Render budget reports as CSV:
/// `link_name,distance_km,fspl_db,eirp_dbw,cn0_dbhz,ebn0_db,margin_db`.
pub fn report_csv(rows: &[(String, f64, LinkBudgetReport)]) -> String {
    let mut out = String::from("link_name,distance_km,fspl_db,eirp_dbw,cn0_dbhz,ebn0_db,margin_db\n");
    for (name, d, r) in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            name, d, r.fspl_db, r.eirp_dbw, r.cn0_dbhz, r.ebn0_db, r.margin_db
        ));
    }
    out
}

/// Render a margin grid in long form: `power_dbw,distance_km,margin_db`.
pub fn grid_csv(powers_dbw: &[f64], distances_km: &[f64], grid: &[Vec<f64>]) -> String {
    let mut out = String::from("power_dbw,distance_km,margin_db\n");
    for (i, &p) in powers_dbw.iter().enumerate() {
        for (j, &d) in distances_km.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", p, d, grid[i][j]));
        }
    }
    out
}

/// Render a bitrate sweep as CSV: `bitrate_bps,margin_db`.
pub fn sweep_csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from("bitrate_bps,margin_db\n");
    for (b, m) in points {
        out.push_str(&format!("{},{}\n", b, m));
    }
    out
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
