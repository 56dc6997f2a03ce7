//! Physical parameter sets. Field names in the serialized form follow the
//! usual control-engineering symbols (`J_m`, `K_tau`, `g_DOB`, ...).

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

fn positive(field: String, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be finite and > 0, got {v}")))
    }
}

fn non_negative(field: String, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be finite and >= 0, got {v}")))
    }
}

fn finite(field: String, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be finite, got {v}")))
    }
}

/// True motor: inertia, torque coefficient and friction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotorParams {
    /// Inertia, kg m^2.
    #[serde(rename = "J_m")]
    pub j_m: f64,
    /// Torque coefficient, Nm/A.
    #[serde(rename = "K_tau")]
    pub k_tau: f64,
    /// Viscous friction, Nm s/rad.
    #[serde(rename = "B", default)]
    pub b: f64,
    /// Coulomb friction level, Nm.
    #[serde(rename = "F_c", default)]
    pub f_c: f64,
}

impl MotorParams {
    pub fn new(j_m: f64, k_tau: f64) -> Self {
        Self { j_m, k_tau, b: 0.0, f_c: 0.0 }
    }

    pub fn validate(&self, prefix: &str) -> Result<()> {
        positive(format!("{prefix}.J_m"), self.j_m)?;
        positive(format!("{prefix}.K_tau"), self.k_tau)?;
        non_negative(format!("{prefix}.B"), self.b)?;
        non_negative(format!("{prefix}.F_c"), self.f_c)
    }
}

/// Nominal model used by the DOB and the outer loop.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NominalModel {
    #[serde(rename = "J_mn")]
    pub j_mn: f64,
    #[serde(rename = "K_tau_n")]
    pub k_tau_n: f64,
}

impl NominalModel {
    pub fn new(j_mn: f64, k_tau_n: f64) -> Self {
        Self { j_mn, k_tau_n }
    }

    pub fn validate(&self, prefix: &str) -> Result<()> {
        positive(format!("{prefix}.J_mn"), self.j_mn)?;
        positive(format!("{prefix}.K_tau_n"), self.k_tau_n)
    }

    /// `J_m - J_mn`
    pub fn inertia_variation(&self, plant: &MotorParams) -> f64 {
        plant.j_m - self.j_mn
    }

    /// `K_tau - K_tau_n`
    pub fn torque_coefficient_variation(&self, plant: &MotorParams) -> f64 {
        plant.k_tau - self.k_tau_n
    }
}

/// Identified model used inside the RTOB.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentifiedModel {
    #[serde(rename = "J_hat")]
    pub j_hat: f64,
    #[serde(rename = "K_tau_hat")]
    pub k_tau_hat: f64,
    #[serde(rename = "B_hat", default)]
    pub b_hat: f64,
    #[serde(rename = "F_c_hat", default)]
    pub f_c_hat: f64,
}

impl IdentifiedModel {
    pub fn new(j_hat: f64, k_tau_hat: f64) -> Self {
        Self { j_hat, k_tau_hat, b_hat: 0.0, f_c_hat: 0.0 }
    }

    /// Identification that matches the plant exactly, friction included.
    pub fn perfect(plant: &MotorParams) -> Self {
        Self {
            j_hat: plant.j_m,
            k_tau_hat: plant.k_tau,
            b_hat: plant.b,
            f_c_hat: plant.f_c,
        }
    }

    pub fn validate(&self, prefix: &str) -> Result<()> {
        positive(format!("{prefix}.J_hat"), self.j_hat)?;
        positive(format!("{prefix}.K_tau_hat"), self.k_tau_hat)?;
        non_negative(format!("{prefix}.B_hat"), self.b_hat)?;
        non_negative(format!("{prefix}.F_c_hat"), self.f_c_hat)
    }
}

/// Cut-off of the velocity measurement filter. `Infinite` selects the
/// ideal-measurement formulas; serialized as the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VelocityBandwidth {
    Finite(f64),
    Infinite,
}

impl VelocityBandwidth {
    pub fn finite(self) -> Option<f64> {
        match self {
            VelocityBandwidth::Finite(g) => Some(g),
            VelocityBandwidth::Infinite => None,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl Serialize for VelocityBandwidth {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            VelocityBandwidth::Finite(g) => s.serialize_f64(*g),
            VelocityBandwidth::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for VelocityBandwidth {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = VelocityBandwidth;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a positive number or the string \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                Ok(VelocityBandwidth::Finite(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(VelocityBandwidth::Finite(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(VelocityBandwidth::Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                if v == "inf" {
                    Ok(VelocityBandwidth::Infinite)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Observer and velocity-filter bandwidths, rad/s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverBandwidths {
    #[serde(rename = "g_DOB")]
    pub g_dob: f64,
    pub g_v: VelocityBandwidth,
    #[serde(rename = "g_RTOB")]
    pub g_rtob: f64,
}

impl ObserverBandwidths {
    pub fn new(g_dob: f64, g_v: VelocityBandwidth, g_rtob: f64) -> Self {
        Self { g_dob, g_v, g_rtob }
    }

    /// `kappa = g_v / g_DOB`, infinite in the ideal case.
    pub fn kappa(&self) -> f64 {
        self.g_v.as_f64() / self.g_dob
    }

    /// Largest finite bandwidth present, for the discretization guard.
    pub fn max_finite(&self) -> f64 {
        let g = self.g_dob.max(self.g_rtob);
        self.g_v.finite().map_or(g, |gv| g.max(gv))
    }

    pub fn validate(&self, prefix: &str) -> Result<()> {
        positive(format!("{prefix}.g_DOB"), self.g_dob)?;
        positive(format!("{prefix}.g_RTOB"), self.g_rtob)?;
        if let VelocityBandwidth::Finite(g) = self.g_v {
            positive(format!("{prefix}.g_v"), g)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContactMode {
    /// Spring-damper acts in both directions at all times.
    #[default]
    Bilateral,
    /// Acts only while penetrating, and only pushes.
    Unilateral,
}

/// Spring-damper environment `tau_load = D_env qdot + K_env (q - q_env)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Environment {
    #[serde(rename = "D_env")]
    pub d_env: f64,
    #[serde(rename = "K_env")]
    pub k_env: f64,
    #[serde(default)]
    pub q_env: f64,
    #[serde(default)]
    pub contact: ContactMode,
}

impl Environment {
    pub fn bilateral(d_env: f64, k_env: f64) -> Self {
        Self { d_env, k_env, q_env: 0.0, contact: ContactMode::Bilateral }
    }

    pub fn validate(&self, prefix: &str) -> Result<()> {
        non_negative(format!("{prefix}.D_env"), self.d_env)?;
        non_negative(format!("{prefix}.K_env"), self.k_env)?;
        finite(format!("{prefix}.q_env"), self.q_env)?;
        if self.d_env + self.k_env <= 0.0 {
            return Err(Error::invalid(
                format!("{prefix}.K_env"),
                "D_env + K_env must be > 0 for a force loop",
            ));
        }
        Ok(())
    }
}

/// Outer-loop gains: PD position gains and the force gain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OuterLoopGains {
    #[serde(rename = "K_P", default)]
    pub k_p: f64,
    #[serde(rename = "K_D", default)]
    pub k_d: f64,
    #[serde(rename = "C_f", default)]
    pub c_f: f64,
}

impl OuterLoopGains {
    pub fn new(k_p: f64, k_d: f64, c_f: f64) -> Self {
        Self { k_p, k_d, c_f }
    }

    pub fn validate_position(&self, prefix: &str) -> Result<()> {
        positive(format!("{prefix}.K_P"), self.k_p)?;
        positive(format!("{prefix}.K_D"), self.k_d)
    }

    pub fn validate_force(&self, prefix: &str) -> Result<()> {
        non_negative(format!("{prefix}.C_f"), self.c_f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn velocity_bandwidth_serde() {
        let inf: VelocityBandwidth = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(inf, VelocityBandwidth::Infinite);
        let g: VelocityBandwidth = serde_json::from_str("250").unwrap();
        assert_eq!(g, VelocityBandwidth::Finite(250.0));
        assert!(serde_json::from_str::<VelocityBandwidth>("\"Inf\"").is_err());
        assert_eq!(serde_json::to_string(&VelocityBandwidth::Infinite).unwrap(), "\"inf\"");
    }

    #[test]
    fn validation_names_field() {
        let err = MotorParams::new(0.0, 1.0).validate("plant").unwrap_err();
        assert!(matches!(err, Error::InvalidScenario { ref field, .. } if field == "plant.J_m"));
        let err = Environment::bilateral(0.0, 0.0).validate("env").unwrap_err();
        assert!(matches!(err, Error::InvalidScenario { ref field, .. } if field == "env.K_env"));
    }

    #[test]
    fn kappa_and_max_bandwidth() {
        let bw = ObserverBandwidths::new(100.0, VelocityBandwidth::Finite(400.0), 200.0);
        assert_eq!(bw.kappa(), 4.0);
        assert_eq!(bw.max_finite(), 400.0);
        let ideal = ObserverBandwidths::new(100.0, VelocityBandwidth::Infinite, 200.0);
        assert!(ideal.kappa().is_infinite());
        assert_eq!(ideal.max_finite(), 200.0);
    }
}
