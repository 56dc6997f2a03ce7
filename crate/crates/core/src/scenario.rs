//! Scenario description shared by the design checker, the simulator and
//! the command-line front end. Serialized as JSON; unknown keys are rejected.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{
    Environment, IdentifiedModel, MotorParams, NominalModel, ObserverBandwidths, OuterLoopGains,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Position,
    Force,
    Hybrid,
}

impl Mode {
    pub fn has_position_loop(self) -> bool {
        matches!(self, Mode::Position | Mode::Hybrid)
    }

    pub fn has_force_loop(self) -> bool {
        matches!(self, Mode::Force | Mode::Hybrid)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Position => "position",
            Mode::Force => "force",
            Mode::Hybrid => "hybrid",
        }
    }
}

/// Scalar time function with an analytic first derivative.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Signal {
    #[default]
    Zero,
    Constant {
        value: f64,
    },
    Step {
        at: f64,
        #[serde(default)]
        from: f64,
        to: f64,
    },
    /// `offset + amplitude sin(omega (t - start) + phase)` for `t >= start`,
    /// `offset + amplitude sin(phase)` before.
    Sine {
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        offset: f64,
        #[serde(default)]
        start: f64,
    },
    /// Piecewise constant: `value` of the last point with `t <= now`,
    /// zero before the first point.
    Piecewise {
        points: Vec<[f64; 2]>,
    },
}

impl Signal {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Signal::Zero => 0.0,
            Signal::Constant { value } => value,
            Signal::Step { at, from, to } => {
                if t >= at {
                    to
                } else {
                    from
                }
            }
            Signal::Sine { amplitude, omega, phase, offset, start } => {
                let tau = (t - start).max(0.0);
                offset + amplitude * (omega * tau + phase).sin()
            }
            Signal::Piecewise { ref points } => points
                .iter()
                .take_while(|p| p[0] <= t)
                .last()
                .map_or(0.0, |p| p[1]),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            Signal::Sine { amplitude, omega, phase, start, .. } if t >= start => {
                amplitude * omega * (omega * (t - start) + phase).cos()
            }
            _ => 0.0,
        }
    }

    fn validate(&self, field: &str) -> Result<()> {
        let ok = match self {
            Signal::Zero => true,
            Signal::Constant { value } => value.is_finite(),
            Signal::Step { at, from, to } => at.is_finite() && from.is_finite() && to.is_finite(),
            Signal::Sine { amplitude, omega, phase, offset, start } => [amplitude, omega, phase, offset, start]
                .iter()
                .all(|x| x.is_finite()),
            Signal::Piecewise { points } => {
                points.iter().all(|p| p[0].is_finite() && p[1].is_finite())
                    && points.windows(2).all(|w| w[0][0] < w[1][0])
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(field, "non-finite value or unsorted breakpoints"))
        }
    }
}

/// One breakpoint of the piecewise-constant compliance selection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoPoint {
    pub t: f64,
    pub rho: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    /// Sampling period, s.
    #[serde(rename = "T_s", default = "default_ts")]
    pub t_s: f64,
    /// Run length, s.
    pub duration: f64,
    /// Standard deviation of the velocity measurement noise, rad/s.
    #[serde(default)]
    pub noise_std: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub q0: f64,
    #[serde(default)]
    pub qdot0: f64,
}

fn default_ts() -> f64 {
    1e-4
}

impl SimConfig {
    pub fn new(t_s: f64, duration: f64) -> Self {
        Self { t_s, duration, noise_std: 0.0, seed: 0, q0: 0.0, qdot0: 0.0 }
    }

    /// Number of samples, `floor(duration / T_s) + 1`.
    pub fn samples(&self) -> usize {
        let ratio = self.duration / self.t_s;
        // Absorb representation error in ratios like 1.0 / 1e-4.
        let rounded = ratio.round();
        let steps = if (ratio - rounded).abs() <= 1e-9 * ratio.max(1.0) {
            rounded
        } else {
            ratio.floor()
        };
        steps as usize + 1
    }
}

/// Defaults for the frequency and gain sweeps of the analysis commands.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisDefaults {
    #[serde(default = "default_omega_lo")]
    pub omega_lo: f64,
    #[serde(default = "default_omega_hi")]
    pub omega_hi: f64,
    #[serde(default = "default_per_decade")]
    pub points_per_decade: usize,
    #[serde(default = "default_gain_lo")]
    pub gain_lo: f64,
    #[serde(default = "default_gain_hi")]
    pub gain_hi: f64,
    #[serde(default = "default_per_decade")]
    pub gains_per_decade: usize,
    #[serde(default = "default_xi_min")]
    pub xi_min: f64,
}

fn default_omega_lo() -> f64 {
    1.0
}
fn default_omega_hi() -> f64 {
    1e5
}
fn default_per_decade() -> usize {
    60
}
fn default_gain_lo() -> f64 {
    1e-2
}
fn default_gain_hi() -> f64 {
    1e4
}
fn default_xi_min() -> f64 {
    FRAC_1_SQRT_2
}

impl Default for AnalysisDefaults {
    fn default() -> Self {
        Self {
            omega_lo: default_omega_lo(),
            omega_hi: default_omega_hi(),
            points_per_decade: default_per_decade(),
            gain_lo: default_gain_lo(),
            gain_hi: default_gain_hi(),
            gains_per_decade: default_per_decade(),
            xi_min: default_xi_min(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub mode: Mode,
    pub plant: MotorParams,
    pub nominal: NominalModel,
    /// Model inside the RTOB; perfect identification of `plant` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identified: Option<IdentifiedModel>,
    pub bandwidths: ObserverBandwidths,
    pub gains: OuterLoopGains,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub env: Option<Environment>,
    /// Compliance selection; empty means 1 in position mode, 0 in force
    /// mode, and is rejected in hybrid mode.
    #[serde(default)]
    pub rho_schedule: Vec<RhoPoint>,
    #[serde(default)]
    pub position_ref: Signal,
    #[serde(default)]
    pub force_ref: Signal,
    /// Interactive torque acting on the joint, Nm.
    #[serde(default)]
    pub ext_disturbance: Signal,
    /// What the RTOB assumes the interactive torque to be.
    #[serde(default)]
    pub ext_disturbance_estimate: Signal,
    pub sim: SimConfig,
    #[serde(default)]
    pub analysis: AnalysisDefaults,
}

impl Scenario {
    /// Scenario with zero references and disturbances, no environment,
    /// perfect identification and default analysis settings.
    pub fn new(
        mode: Mode,
        plant: MotorParams,
        nominal: NominalModel,
        bandwidths: ObserverBandwidths,
        gains: OuterLoopGains,
        sim: SimConfig,
    ) -> Self {
        Self {
            name: None,
            mode,
            plant,
            nominal,
            identified: None,
            bandwidths,
            gains,
            env: None,
            rho_schedule: Vec::new(),
            position_ref: Signal::Zero,
            force_ref: Signal::Zero,
            ext_disturbance: Signal::Zero,
            ext_disturbance_estimate: Signal::Zero,
            sim,
            analysis: AnalysisDefaults::default(),
        }
    }

    pub fn identified(&self) -> IdentifiedModel {
        self.identified
            .unwrap_or_else(|| IdentifiedModel::perfect(&self.plant))
    }

    /// Environment, or the no-contact environment for pure position runs.
    pub fn env_or_free(&self) -> Environment {
        self.env.unwrap_or(Environment {
            d_env: 0.0,
            k_env: 0.0,
            q_env: 0.0,
            contact: Default::default(),
        })
    }

    pub fn rho_at(&self, t: f64) -> f64 {
        match self.rho_schedule.iter().take_while(|p| p.t <= t).last() {
            Some(p) => p.rho,
            None => match self.mode {
                Mode::Position => 1.0,
                Mode::Force => 0.0,
                Mode::Hybrid => self.rho_schedule.first().map_or(1.0, |p| p.rho),
            },
        }
    }

    /// Check every invariant, naming the first offending key.
    pub fn validate(&self) -> Result<()> {
        self.plant.validate("plant")?;
        self.nominal.validate("nominal")?;
        if let Some(id) = &self.identified {
            id.validate("identified")?;
        }
        self.bandwidths.validate("bandwidths")?;
        if self.mode.has_position_loop() {
            self.gains.validate_position("gains")?;
        }
        if self.mode.has_force_loop() {
            self.gains.validate_force("gains")?;
            match &self.env {
                Some(env) => env.validate("env")?,
                None => return Err(Error::invalid("env", "required in force and hybrid modes")),
            }
        } else if let Some(env) = &self.env {
            non_negative_env(env)?;
        }
        if self.mode == Mode::Hybrid && self.rho_schedule.is_empty() {
            return Err(Error::invalid("rho_schedule", "required in hybrid mode"));
        }
        for (i, p) in self.rho_schedule.iter().enumerate() {
            if !(0.0..=1.0).contains(&p.rho) {
                return Err(Error::invalid(format!("rho_schedule[{i}].rho"), "must lie in [0, 1]"));
            }
            if !p.t.is_finite() || (i > 0 && p.t <= self.rho_schedule[i - 1].t) {
                return Err(Error::invalid(format!("rho_schedule[{i}].t"), "times must be finite and increasing"));
            }
        }
        self.position_ref.validate("position_ref")?;
        self.force_ref.validate("force_ref")?;
        self.ext_disturbance.validate("ext_disturbance")?;
        self.ext_disturbance_estimate.validate("ext_disturbance_estimate")?;
        self.validate_sim()?;
        self.validate_analysis()
    }

    fn validate_sim(&self) -> Result<()> {
        let sim = &self.sim;
        if !(sim.t_s.is_finite() && sim.t_s > 0.0) {
            return Err(Error::invalid("sim.T_s", "must be finite and > 0"));
        }
        if !(sim.duration.is_finite() && sim.duration >= 10.0 * sim.t_s) {
            return Err(Error::invalid("sim.duration", "must be at least 10 T_s"));
        }
        if !(sim.noise_std.is_finite() && sim.noise_std >= 0.0) {
            return Err(Error::invalid("sim.noise_std", "must be finite and >= 0"));
        }
        if !(sim.q0.is_finite() && sim.qdot0.is_finite()) {
            return Err(Error::invalid("sim.q0", "initial state must be finite"));
        }
        let g_max = self.bandwidths.max_finite();
        if sim.t_s * g_max >= 0.5 {
            return Err(Error::invalid(
                "sim.T_s",
                format!("T_s * g_max = {} must be < 0.5 (g_max = {g_max} rad/s)", sim.t_s * g_max),
            ));
        }
        Ok(())
    }

    fn validate_analysis(&self) -> Result<()> {
        let a = &self.analysis;
        if !(a.omega_lo > 0.0 && a.omega_hi > a.omega_lo && a.omega_hi.is_finite()) {
            return Err(Error::invalid("analysis.omega_hi", "need 0 < omega_lo < omega_hi"));
        }
        if !(a.gain_lo > 0.0 && a.gain_hi > a.gain_lo && a.gain_hi.is_finite()) {
            return Err(Error::invalid("analysis.gain_hi", "need 0 < gain_lo < gain_hi"));
        }
        if a.points_per_decade == 0 {
            return Err(Error::invalid("analysis.points_per_decade", "must be >= 1"));
        }
        if a.gains_per_decade == 0 {
            return Err(Error::invalid("analysis.gains_per_decade", "must be >= 1"));
        }
        if !(a.xi_min.is_finite() && a.xi_min > 0.0) {
            return Err(Error::invalid("analysis.xi_min", "must be finite and > 0"));
        }
        Ok(())
    }
}

fn non_negative_env(env: &Environment) -> Result<()> {
    if env.d_env < 0.0 || env.k_env < 0.0 || !env.q_env.is_finite() {
        return Err(Error::invalid("env", "D_env, K_env must be >= 0"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signal_values() {
        let step = Signal::Step { at: 1.0, from: 0.0, to: 2.0 };
        assert_eq!(step.value(0.999), 0.0);
        assert_eq!(step.value(1.0), 2.0);
        let sine = Signal::Sine { amplitude: 2.0, omega: 3.0, phase: 0.0, offset: 1.0, start: 0.0 };
        assert!((sine.value(0.5) - (1.0 + 2.0 * 1.5_f64.sin())).abs() < 1e-15);
        assert!((sine.derivative(0.5) - 6.0 * 1.5_f64.cos()).abs() < 1e-15);
        let pw = Signal::Piecewise { points: vec![[0.0, 1.0], [5.0, 0.0], [10.0, 1.0]] };
        assert_eq!(pw.value(-1.0), 0.0);
        assert_eq!(pw.value(4.9), 1.0);
        assert_eq!(pw.value(7.0), 0.0);
        assert_eq!(pw.value(12.0), 1.0);
    }

    #[test]
    fn sample_count() {
        assert_eq!(SimConfig::new(1e-4, 1.0).samples(), 10_001);
        assert_eq!(SimConfig::new(1e-4, 3.0).samples(), 30_001);
        assert_eq!(SimConfig::new(0.3, 1.0).samples(), 4);
    }

    #[test]
    fn signal_json_shape() {
        let s: Signal = serde_json::from_str(r#"{"kind":"step","at":0.5,"to":1}"#).unwrap();
        assert_eq!(s, Signal::Step { at: 0.5, from: 0.0, to: 1.0 });
        assert!(serde_json::from_str::<Signal>(r#"{"kind":"step","at":0.5,"to":1,"x":2}"#).is_err());
    }
}
