//! Local spread-probability factors and the wind-dependent neighbourhood.

use serde::{Deserialize, Serialize};

/// Wind at or above this speed (km h⁻¹) adds a second ring of neighbours.
pub const SECOND_RING_KMH: f64 = 25.0;
/// Wind at or above this speed (km h⁻¹) adds a third ring.
pub const THIRD_RING_KMH: f64 = 35.0;

/// Wind factor. `theta` is the angle between the spread direction and the
/// direction the wind blows toward; `speed` is in whatever unit the
/// coefficients were fitted for (m s⁻¹ by default).
pub fn p_wind(theta: f64, speed: f64, c1: f64, c2: f64) -> f64 {
    (c1 * speed).exp() * (speed * c2 * (theta.cos() - 1.0)).exp()
}

/// Slope factor for spread from a cell at `source_elev` to one at
/// `target_elev`, `dist` metres apart centre to centre. Uphill spread
/// (target higher) is favoured when `a_s > 0`.
pub fn p_slope(target_elev: f64, source_elev: f64, dist: f64, a_s: f64) -> f64 {
    let theta_s = ((target_elev - source_elev) / dist).atan();
    (a_s * theta_s).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MoistureUnits {
    /// Stored fractions are scaled to percent before the exponential, the
    /// same convention as the rate-of-spread regression.
    #[default]
    Percent,
    /// Stored fractions enter the exponential as they are.
    Fraction,
}

/// Moisture damping `exp(-c_m M)` for a dead-fuel moisture stored as a
/// fraction.
pub fn p_moisture(moisture_fraction: f64, c_m: f64, units: MoistureUnits) -> f64 {
    let m = match units {
        MoistureUnits::Percent => moisture_fraction * 100.0,
        MoistureUnits::Fraction => moisture_fraction,
    };
    (-c_m * m).exp()
}

/// Product of all factors, clamped to a probability.
pub fn combine(p0: f64, p_veg: f64, p_den: f64, pw: f64, ps: f64, pm: f64) -> f64 {
    (p0 * (1.0 + p_veg) * (1.0 + p_den) * pw * ps * pm).clamp(0.0, 1.0)
}

/// Moore radius for a wind speed in km h⁻¹.
pub fn neighborhood_radius(wind_kmh: f64) -> i32 {
    if wind_kmh >= THIRD_RING_KMH {
        3
    } else if wind_kmh >= SECOND_RING_KMH {
        2
    } else {
        1
    }
}

/// `(d_row, d_col)` offsets of the Moore neighbourhood for a wind speed,
/// in row-major order, excluding the centre.
pub fn neighborhood(wind_kmh: f64) -> Vec<(i32, i32)> {
    let r = neighborhood_radius(wind_kmh);
    let mut out = Vec::with_capacity(((2 * r + 1) * (2 * r + 1) - 1) as usize);
    for dr in -r..=r {
        for dc in -r..=r {
            if dr != 0 || dc != 0 {
                out.push((dr, dc));
            }
        }
    }
    out
}

/// Cosine of the angle between the spread offset and the wind heading.
///
/// Rows grow southward and columns eastward; `wind_toward` is a compass
/// bearing in radians, clockwise from north.
pub fn cos_to_wind(d_row: i32, d_col: i32, wind_toward: f64) -> f64 {
    let east = f64::from(d_col);
    let north = -f64::from(d_row);
    (east * wind_toward.sin() + north * wind_toward.cos()) / east.hypot(north)
}
