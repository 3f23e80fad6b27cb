//! Drone platform throughput: sustained flow, arrestable front length and
//! the drone count needed for a given front.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SwarmError {
    #[error("invalid platform parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("critical flow must be > 0 to size a front, got {0}")]
    NonPositiveCriticalFlow(f64),
}

/// One ground platform and the drones it services.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlatformConfig {
    pub drones: u32,
    /// Liquid carried per sortie, L. Practical range 10–50 L.
    pub payload_l: f64,
    /// Full cycle: land, swap battery and payload, fly out, release, return. Minutes.
    pub cycle_min: f64,
    /// Minutes after ignition at which the first drones reach the fire.
    pub intervention_min: f64,
    /// Location in lattice coordinates `[row, col]`; may lie outside the grid.
    pub position: [f64; 2],
}

impl Default for PlatformConfig {
    fn default() -> Self {
        Self {
            drones: 120,
            payload_l: 20.0,
            cycle_min: 6.0,
            intervention_min: 15.0,
            position: [0.0, 0.0],
        }
    }
}

impl PlatformConfig {
    pub fn validate(&self) -> Result<(), SwarmError> {
        let bad = |field, reason: &str| {
            Err(SwarmError::InvalidParameter {
                field,
                reason: reason.to_string(),
            })
        };
        if self.drones < 1 {
            return bad("drones", "must be >= 1");
        }
        if !(self.payload_l.is_finite() && self.payload_l > 0.0) {
            return bad("payload_l", "must be > 0");
        }
        if !(self.cycle_min.is_finite() && self.cycle_min > 0.0) {
            return bad("cycle_min", "must be > 0");
        }
        if !(self.intervention_min.is_finite() && self.intervention_min >= 0.0) {
            return bad("intervention_min", "must be >= 0");
        }
        if !self.position.iter().all(|p| p.is_finite()) {
            return bad("position", "must be finite");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowReport {
    /// Discharges per drone per hour.
    pub discharges_per_drone_hour: f64,
    /// Discharges per platform per hour.
    pub discharges_per_hour: f64,
    /// Litres per hour across all platforms.
    pub litres_per_hour: f64,
    /// Sustained flow across all platforms, L min⁻¹.
    pub flow_l_min: f64,
    pub platforms: u32,
}

/// Sustained flow delivered by `platforms` identical platforms.
pub fn drone_flow(cfg: &PlatformConfig, platforms: u32) -> FlowReport {
    let per_drone = 60.0 / cfg.cycle_min;
    let per_platform = per_drone * f64::from(cfg.drones);
    let litres_per_hour = cfg.payload_l * per_platform * f64::from(platforms);
    FlowReport {
        discharges_per_drone_hour: per_drone,
        discharges_per_hour: per_platform,
        litres_per_hour,
        flow_l_min: litres_per_hour / 60.0,
        platforms,
    }
}

/// Metres of active front the platforms can hold at critical flow `cf`
/// (L min⁻¹ m⁻¹).
pub fn extinguishable_meters(cfg: &PlatformConfig, platforms: u32, cf: f64) -> Result<f64, SwarmError> {
    if cf.is_nan() || cf <= 0.0 {
        return Err(SwarmError::NonPositiveCriticalFlow(cf));
    }
    Ok(drone_flow(cfg, platforms).flow_l_min / cf)
}

/// Relative slack before a drone count rounds up. Critical flows are
/// usually quoted to four significant figures, and 4.286 for 60·30/(6·70)
/// should still give 60 drones rather than 61.
pub const DRONE_COUNT_TOLERANCE: f64 = 1e-4;

/// Flow needed to hold `meters` of front, L min⁻¹.
pub fn required_flow(meters: f64, cf: f64) -> f64 {
    meters * cf
}

/// Unrounded drone count for a front; see [`required_drones`].
pub fn required_drones_exact(meters: f64, cf: f64, payload_l: f64, cycle_min: f64) -> f64 {
    cf * cycle_min * meters / payload_l
}

/// Drones needed to hold `meters` of front, rounded up: a fractional
/// drone short of the requirement leaves part of the front uncovered.
pub fn required_drones(meters: f64, cf: f64, payload_l: f64, cycle_min: f64) -> u64 {
    let exact = required_drones_exact(meters, cf, payload_l, cycle_min);
    if exact <= 0.0 {
        return 0;
    }
    let nearest = exact.round();
    if (exact - nearest).abs() <= DRONE_COUNT_TOLERANCE * nearest.max(1.0) {
        nearest as u64
    } else {
        exact.ceil() as u64
    }
}
