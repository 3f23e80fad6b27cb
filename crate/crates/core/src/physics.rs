//! Critical water flow rate from fire-point theory.
//!
//! The chain runs from the fuel's critical mass burning rate (Spalding
//! B-number), through fireline intensity (either Byram's flame-length
//! relation or Fernandes' rate of spread for Mediterranean scrub), the
//! wind-tilted flame geometry and the surface heat balance, to the water
//! application rate that holds the surface below its fire point.
//!
//! Units are fixed per quantity and converted only inside this module:
//!
//! | quantity | unit |
//! |----------|------|
//! | heat flux | kW m⁻² |
//! | fireline intensity | kW m⁻¹ |
//! | wind (flame geometry) | m s⁻¹ |
//! | wind (rate of spread, public API) | km h⁻¹ |
//! | moisture (rate of spread) | percent |
//! | fuel load | t ha⁻¹ |

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Byram coefficient, kW m⁻¹ at 1 m of flame.
pub const BYRAM_COEFFICIENT: f64 = 259.833;
/// Byram exponent on flame length.
pub const BYRAM_EXPONENT: f64 = 2.174;
/// Flame angle below which the flame bathes the fuel ahead convectively.
pub const CONVECTIVE_ANGLE_DEG: f64 = 30.0;

const KMH_TO_MS: f64 = 1.0 / 3.6;
const FLAME_ANGLE_MAX_ITER: usize = 200;
const FLAME_ANGLE_LOWER_RAD: f64 = 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhysicsError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("missing input `{0}` for the selected intensity path")]
    MissingInput(&'static str),
    #[error("flame angle solve failed for wind {wind_ms} m/s, flame length {flame_length} m")]
    FlameAngleNonConvergence { wind_ms: f64, flame_length: f64 },
}

fn check(field: &'static str, ok: bool, reason: impl Into<String>) -> Result<(), PhysicsError> {
    if ok {
        Ok(())
    } else {
        Err(PhysicsError::InvalidParameter {
            field,
            reason: reason.into(),
        })
    }
}

fn positive(field: &'static str, v: f64) -> Result<(), PhysicsError> {
    check(field, v.is_finite() && v > 0.0, format!("must be > 0, got {v}"))
}

fn unit_fraction(field: &'static str, v: f64) -> Result<(), PhysicsError> {
    check(
        field,
        v.is_finite() && v > 0.0 && v <= 1.0,
        format!("must lie in (0, 1], got {v}"),
    )
}

/// Thermophysical constants of the fuel bed and its surroundings.
///
/// The default is the Mediterranean-scrub parameterisation. Two printed
/// values need unit repair: the convective coefficient is stored as
/// 0.020 kW m⁻² K⁻¹ (20 W m⁻² K⁻¹) and the Stefan–Boltzmann constant as
/// 5.67e-11 kW m⁻² K⁻⁴.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FuelModel {
    /// Effective heat of combustion, kJ kg⁻¹.
    pub heat_of_combustion: f64,
    /// Heat of gasification of the fuel, kJ kg⁻¹.
    pub heat_of_gasification: f64,
    /// Convective heat transfer coefficient, kW m⁻² K⁻¹.
    pub convective_coefficient: f64,
    /// Specific heat of air at constant pressure, kJ kg⁻¹ K⁻¹.
    pub air_specific_heat: f64,
    pub oxygen_mass_fraction: f64,
    /// Heat of combustion per unit mass of oxygen consumed, kJ kg⁻¹.
    pub oxygen_heat_of_combustion: f64,
    /// Fractional convective heat loss from the flame (φ).
    pub convective_loss_fraction: f64,
    pub water_efficiency: f64,
    /// Enthalpy change taking water at 283 K to vapour at 373 K, kJ kg⁻¹.
    pub water_enthalpy: f64,
    pub transmissivity: f64,
    /// Radiative share of the fireline intensity.
    pub radiative_fraction: f64,
    pub emissivity: f64,
    /// kW m⁻² K⁻⁴.
    pub stefan_boltzmann: f64,
    /// Fuel surface temperature, K.
    pub fuel_temperature: f64,
    /// Gas temperature, K.
    pub gas_temperature: f64,
    /// Ambient temperature, K.
    pub ambient_temperature: f64,
    /// Total fine-fuel load, t ha⁻¹.
    pub fuel_load: f64,
    /// m s⁻².
    pub gravity: f64,
}

impl Default for FuelModel {
    fn default() -> Self {
        Self {
            heat_of_combustion: 19500.0,
            heat_of_gasification: 1800.0,
            convective_coefficient: 0.020,
            air_specific_heat: 1.0,
            oxygen_mass_fraction: 0.233,
            oxygen_heat_of_combustion: 13480.0,
            convective_loss_fraction: 0.3,
            water_efficiency: 0.7,
            water_enthalpy: 2640.0,
            transmissivity: 1.0,
            radiative_fraction: 0.20,
            emissivity: 0.6,
            stefan_boltzmann: 5.67e-11,
            fuel_temperature: 693.0,
            gas_temperature: 800.0,
            ambient_temperature: 293.0,
            fuel_load: 15.0,
            gravity: 9.81,
        }
    }
}

impl FuelModel {
    pub fn validate(&self) -> Result<(), PhysicsError> {
        positive("heat_of_combustion", self.heat_of_combustion)?;
        positive("heat_of_gasification", self.heat_of_gasification)?;
        positive("convective_coefficient", self.convective_coefficient)?;
        positive("air_specific_heat", self.air_specific_heat)?;
        positive("oxygen_heat_of_combustion", self.oxygen_heat_of_combustion)?;
        positive("water_enthalpy", self.water_enthalpy)?;
        positive("stefan_boltzmann", self.stefan_boltzmann)?;
        positive("ambient_temperature", self.ambient_temperature)?;
        positive("fuel_load", self.fuel_load)?;
        positive("gravity", self.gravity)?;
        unit_fraction("oxygen_mass_fraction", self.oxygen_mass_fraction)?;
        unit_fraction("convective_loss_fraction", self.convective_loss_fraction)?;
        unit_fraction("water_efficiency", self.water_efficiency)?;
        unit_fraction("transmissivity", self.transmissivity)?;
        unit_fraction("radiative_fraction", self.radiative_fraction)?;
        unit_fraction("emissivity", self.emissivity)?;
        check(
            "fuel_temperature",
            self.fuel_temperature > self.ambient_temperature,
            "must exceed ambient_temperature",
        )?;
        check(
            "gas_temperature",
            self.gas_temperature > self.fuel_temperature,
            "must exceed fuel_temperature",
        )
    }
}

/// Weather and fire-geometry drivers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FireEnvironment {
    /// Mean horizontal wind at 2 m, km h⁻¹.
    pub wind_kmh: f64,
    /// Elevated dead-fuel moisture, percent.
    pub moisture_pct: f64,
    /// Depth of the active combustion zone, m.
    pub depth_m: f64,
    /// Prescribed flame length, m, for the flame-length path.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flame_length_m: Option<f64>,
}

impl Default for FireEnvironment {
    fn default() -> Self {
        Self {
            wind_kmh: 10.0,
            moisture_pct: 18.0,
            depth_m: 2.0,
            flame_length_m: None,
        }
    }
}

impl FireEnvironment {
    pub fn validate(&self) -> Result<(), PhysicsError> {
        check(
            "wind_kmh",
            self.wind_kmh.is_finite() && self.wind_kmh >= 0.0,
            "must be >= 0",
        )?;
        check(
            "moisture_pct",
            self.moisture_pct.is_finite() && self.moisture_pct >= 0.0,
            "must be >= 0",
        )?;
        positive("depth_m", self.depth_m)?;
        if let Some(lf) = self.flame_length_m {
            positive("flame_length_m", lf)?;
        }
        Ok(())
    }
}

/// Fernandes rate-of-spread regression coefficients for shrubland.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpreadParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Default for SpreadParams {
    fn default() -> Self {
        Self {
            a: 3.258,
            b: 0.958,
            c: 0.111,
        }
    }
}

/// How fireline intensity enters the balance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntensityPath {
    /// Intensity from a prescribed flame length (Byram); the combustion
    /// depth follows from a steady heat release rate per unit area.
    FlameLength,
    /// Intensity from wind and moisture through the rate of spread.
    RateOfSpread,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlameGeometry {
    /// Angle between the flame and the unburned fuel ahead, degrees.
    pub angle_deg: f64,
    /// Flame tip height, m.
    pub tip_height: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatFluxes {
    pub external_radiative: f64,
    pub external_convective: f64,
    pub loss_radiative: f64,
    pub loss_convective: f64,
}

/// Critical flow together with every intermediate of the balance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalFlowResult {
    /// kg m⁻² s⁻¹, clamped at zero.
    pub cf_area: f64,
    /// Raw balance before clamping, kg m⁻² s⁻¹.
    pub cf_area_unclamped: f64,
    /// L min⁻¹ per metre of front.
    pub cf_linear: f64,
    /// kg m⁻² s⁻¹.
    pub mass_burning_rate: f64,
    /// kW m⁻¹.
    pub intensity: f64,
    /// m.
    pub flame_length: f64,
    /// km h⁻¹; absent on the flame-length path.
    pub rate_of_spread: Option<f64>,
    pub flame: FlameGeometry,
    /// Combustion depth the linear rate was computed over, m.
    pub depth: f64,
    pub fluxes: HeatFluxes,
}

/// Critical mass burning rate at the fire point, kg m⁻² s⁻¹.
pub fn critical_mass_burning_rate(fuel: &FuelModel) -> f64 {
    let b_number = fuel.oxygen_mass_fraction * fuel.oxygen_heat_of_combustion
        / (fuel.convective_loss_fraction * fuel.heat_of_combustion);
    fuel.convective_coefficient / fuel.air_specific_heat * b_number.ln_1p()
}

/// Solves the wind-tilted flame for its angle and tip height.
///
/// Substituting `H_f = L_f sin A` leaves the single equation
/// `cos A / sqrt(sin A) = 1.22 U / sqrt(g L_f)`, whose left side falls
/// monotonically from +inf to 0 on (0, 90°]. It is bisected to the
/// resolution of f64.
pub fn flame_angle(wind_ms: f64, flame_length: f64, gravity: f64) -> Result<FlameGeometry, PhysicsError> {
    check(
        "wind_ms",
        wind_ms.is_finite() && wind_ms >= 0.0,
        format!("must be >= 0, got {wind_ms}"),
    )?;
    positive("flame_length", flame_length)?;
    positive("gravity", gravity)?;

    if wind_ms == 0.0 {
        return Ok(FlameGeometry {
            angle_deg: 90.0,
            tip_height: flame_length,
        });
    }

    let target = 1.22 * wind_ms / (gravity * flame_length).sqrt();
    let residual = |a: f64| a.cos() / a.sin().sqrt() - target;

    let mut lo = FLAME_ANGLE_LOWER_RAD;
    let mut hi = std::f64::consts::FRAC_PI_2;
    if residual(lo).is_nan() || residual(lo) <= 0.0 {
        return Err(PhysicsError::FlameAngleNonConvergence { wind_ms, flame_length });
    }
    for _ in 0..FLAME_ANGLE_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let angle = if residual(lo).abs() <= residual(hi).abs() {
        lo
    } else {
        hi
    };
    Ok(FlameGeometry {
        angle_deg: angle.to_degrees(),
        tip_height: flame_length * angle.sin(),
    })
}

/// Residuals of the two-equation flame system, in the equations' own units.
pub fn flame_angle_residuals(wind_ms: f64, flame_length: f64, gravity: f64, geom: &FlameGeometry) -> [f64; 2] {
    let a = geom.angle_deg.to_radians();
    let first = if geom.angle_deg == 90.0 {
        1.22 * (wind_ms * wind_ms / (gravity * geom.tip_height)).sqrt()
    } else {
        (std::f64::consts::FRAC_PI_2 - a).tan() - 1.22 * (wind_ms * wind_ms / (gravity * geom.tip_height)).sqrt()
    };
    [first, geom.tip_height - flame_length * a.sin()]
}

/// Byram: fireline intensity (kW m⁻¹) from flame length (m).
pub fn byram_intensity(flame_length: f64) -> f64 {
    BYRAM_COEFFICIENT * flame_length.powf(BYRAM_EXPONENT)
}

/// Inverse of [`byram_intensity`].
pub fn flame_length_from_intensity(intensity: f64) -> f64 {
    (intensity / BYRAM_COEFFICIENT).powf(BYRAM_EXPONENT.recip())
}

/// Fernandes rate of spread in km h⁻¹ from wind (km h⁻¹) and moisture (%).
pub fn rate_of_spread(wind_kmh: f64, moisture_pct: f64, p: &SpreadParams) -> f64 {
    0.06 * p.a * wind_kmh.powf(p.b) * (-p.c * moisture_pct).exp()
}

/// Fireline intensity (kW m⁻¹) from the rate of spread (km h⁻¹).
///
/// With the load in t ha⁻¹ (0.1 kg m⁻²) and the speed in km h⁻¹
/// (1/3.6 m s⁻¹) the unit factors collapse to 1/36.
pub fn intensity_from_spread(fuel: &FuelModel, ros_kmh: f64) -> f64 {
    fuel.heat_of_combustion * fuel.fuel_load * ros_kmh / 36.0
}

/// Radiative and convective heat flux onto the fuel ahead, kW m⁻².
pub fn external_heat_flux(
    fuel: &FuelModel,
    intensity: f64,
    flame_length: f64,
    depth: f64,
    angle_deg: f64,
) -> (f64, f64) {
    let radiative = fuel.radiative_fraction * intensity / (2.0 * flame_length + depth)
        * fuel.convective_loss_fraction
        * fuel.transmissivity;
    let convective = if angle_deg < CONVECTIVE_ANGLE_DEG {
        fuel.convective_coefficient * (fuel.gas_temperature - fuel.fuel_temperature)
    } else {
        0.0
    };
    (radiative, convective)
}

/// Radiative and convective losses from the fuel surface, kW m⁻².
pub fn surface_heat_loss(fuel: &FuelModel) -> (f64, f64) {
    let radiative =
        fuel.emissivity * fuel.stefan_boltzmann * (fuel.fuel_temperature.powi(4) - fuel.ambient_temperature.powi(4));
    let convective = fuel.convective_coefficient * (fuel.fuel_temperature - fuel.ambient_temperature);
    (radiative, convective)
}

/// Converts an areal rate (kg m⁻² s⁻¹) into litres per minute for one
/// metre of front, wetting the `depth × 1 m` combustion strip.
pub fn linear_from_area(cf_area: f64, depth: f64) -> f64 {
    cf_area * depth * 60.0
}

/// Critical water flow for the given fire, with the full breakdown.
///
/// On [`IntensityPath::FlameLength`] the environment's flame length and
/// `heat_release_per_area` (kW m⁻²) are required and the combustion depth
/// becomes `I / Ir`. On [`IntensityPath::RateOfSpread`] the depth is taken
/// from the environment.
pub fn critical_flow(
    fuel: &FuelModel,
    env: &FireEnvironment,
    spread: &SpreadParams,
    path: IntensityPath,
    heat_release_per_area: Option<f64>,
) -> Result<CriticalFlowResult, PhysicsError> {
    fuel.validate()?;
    env.validate()?;

    let (intensity, flame_length, depth, ros) = match path {
        IntensityPath::FlameLength => {
            let lf = env.flame_length_m.ok_or(PhysicsError::MissingInput("flame_length_m"))?;
            let ir = heat_release_per_area.ok_or(PhysicsError::MissingInput("heat_release_per_area"))?;
            positive("heat_release_per_area", ir)?;
            let i = byram_intensity(lf);
            (i, lf, i / ir, None)
        }
        IntensityPath::RateOfSpread => {
            let ros = rate_of_spread(env.wind_kmh, env.moisture_pct, spread);
            let i = intensity_from_spread(fuel, ros);
            (i, flame_length_from_intensity(i), env.depth_m, Some(ros))
        }
    };

    // A fire that does not spread has no flame to tilt.
    let flame = if flame_length > 0.0 {
        flame_angle(env.wind_kmh * KMH_TO_MS, flame_length, fuel.gravity)?
    } else {
        FlameGeometry {
            angle_deg: 90.0,
            tip_height: 0.0,
        }
    };

    let m_cr = critical_mass_burning_rate(fuel);
    let (q_e_rad, q_e_conv) = external_heat_flux(fuel, intensity, flame_length, depth, flame.angle_deg);
    let (q_l_rad, q_l_conv) = surface_heat_loss(fuel);

    let gain = (fuel.convective_loss_fraction * fuel.heat_of_combustion - fuel.heat_of_gasification) * m_cr
        + q_e_rad
        + q_e_conv;
    let raw = (gain - q_l_rad - q_l_conv) / (fuel.water_efficiency * fuel.water_enthalpy);
    let cf_area = raw.max(0.0);

    Ok(CriticalFlowResult {
        cf_area,
        cf_area_unclamped: raw,
        cf_linear: linear_from_area(cf_area, depth),
        mass_burning_rate: m_cr,
        intensity,
        flame_length,
        rate_of_spread: ros,
        flame,
        depth,
        fluxes: HeatFluxes {
            external_radiative: q_e_rad,
            external_convective: q_e_conv,
            loss_radiative: q_l_rad,
            loss_convective: q_l_conv,
        },
    })
}

/// Shorthand for the rate-of-spread path with default fuel and spread
/// coefficients.
pub fn critical_flow_default(
    wind_kmh: f64,
    moisture_pct: f64,
    depth_m: f64,
) -> Result<CriticalFlowResult, PhysicsError> {
    let env = FireEnvironment {
        wind_kmh,
        moisture_pct,
        depth_m,
        flame_length_m: None,
    };
    critical_flow(
        &FuelModel::default(),
        &env,
        &SpreadParams::default(),
        IntensityPath::RateOfSpread,
        None,
    )
}
