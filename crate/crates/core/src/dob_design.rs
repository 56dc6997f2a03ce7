//! Design rules for DOB/RTOB loops and the aggregated design report.
//!
//! Rule ids and their margin units:
//!
//! | rule_id              | level    | margin                                   |
//! |----------------------|----------|------------------------------------------|
//! | `robustness`         | hard     | `g_v/(4 xi_min^2) - alpha g_DOB`, rad/s  |
//! | `bandwidth_ratio`    | advisory | `0.25 g_v - g_DOB`, rad/s                |
//! | `alpha_reference`    | info     | `alpha - 2`, dimensionless               |
//! | `position_stability` | hard     | Eq. margin (ideal) or `-max Re(pole)`    |
//! | `min_phase`          | hard     | `beta - alpha`, dimensionless            |
//! | `rtob_lead`          | advisory | `g_RTOB - g_DOB`, rad/s                  |
//!
//! `position_stability` reports `1 + g K_D/K_P + K_D/g + K_D^2/K_P - 1/alpha`
//! with ideal velocity measurement, and `-max Re` of the closed-loop poles
//! (rad/s) with a filtered one.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::Result;
use crate::format::sig9;
use crate::loop_models::{
    alpha_of, beta_of, build_position_loop, inner_second_order, rtob_phi,
};
use crate::params::{
    Environment, IdentifiedModel, MotorParams, NominalModel, ObserverBandwidths, OuterLoopGains,
    VelocityBandwidth,
};
use crate::poly_tf::{max_real_part, poly_roots, routh_verdict};
use crate::scenario::{Mode, Scenario};

/// Alpha the design guidelines single out as a good compromise.
pub const ALPHA_REFERENCE: f64 = 2.0;

/// Recommended upper bound on `g_DOB / g_v`.
pub const BANDWIDTH_RATIO_MAX: f64 = 0.25;

/// Relative slack so that exact-equality designs pass despite rounding.
const EQUALITY_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleId {
    Robustness,
    BandwidthRatio,
    AlphaReference,
    PositionStability,
    MinPhase,
    RtobLead,
}

impl RuleId {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::Robustness => "robustness",
            RuleId::BandwidthRatio => "bandwidth_ratio",
            RuleId::AlphaReference => "alpha_reference",
            RuleId::PositionStability => "position_stability",
            RuleId::MinPhase => "min_phase",
            RuleId::RtobLead => "rtob_lead",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Severity {
    /// Failure makes the design invalid.
    Hard,
    /// Failure is a warning.
    Advisory,
    /// Reported for reference only, never fails.
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RuleVerdict {
    pub rule_id: RuleId,
    pub severity: Severity,
    pub pass: bool,
    /// Positive when satisfied with room; sign agrees with `pass` for hard
    /// and advisory rules.
    pub margin: f64,
    pub detail: String,
}

impl RuleVerdict {
    pub fn status(&self) -> &'static str {
        match (self.severity, self.pass) {
            (Severity::Info, _) => "INFO",
            (_, true) => "PASS",
            (Severity::Hard, false) => "FAIL",
            (Severity::Advisory, false) => "WARN",
        }
    }
}

/// Robustness constraint: inner-loop damping `xi >= xi_min`, equivalently
/// `alpha g_DOB <= g_v / (4 xi_min^2)`; `g_v/2` for `xi_min = 1/sqrt(2)`.
pub fn check_robustness(alpha: f64, g_dob: f64, g_v: VelocityBandwidth, xi_min: f64) -> RuleVerdict {
    let rule_id = RuleId::Robustness;
    let severity = Severity::Hard;
    match g_v {
        VelocityBandwidth::Infinite => RuleVerdict {
            rule_id,
            severity,
            pass: true,
            margin: f64::INFINITY,
            detail: "ideal velocity measurement, constraint vacuous".into(),
        },
        VelocityBandwidth::Finite(g_v) => {
            let bound = g_v / (4.0 * xi_min * xi_min);
            let used = alpha * g_dob;
            let pass = used <= bound * (1.0 + EQUALITY_SLACK);
            let mut margin = bound - used;
            if pass && margin < 0.0 {
                margin = 0.0;
            }
            RuleVerdict {
                rule_id,
                severity,
                pass,
                margin,
                detail: format!("alpha*g_DOB = {} vs bound g_v/(4 xi_min^2) = {}", sig9(used), sig9(bound)),
            }
        }
    }
}

/// Position-loop stability: closed-form Routh condition with ideal velocity
/// measurement, Routh table of the filtered-velocity denominator otherwise.
pub fn check_position_stability(
    plant: &MotorParams,
    nominal: &NominalModel,
    bw: &ObserverBandwidths,
    gains: &OuterLoopGains,
) -> Result<RuleVerdict> {
    let alpha = alpha_of(plant, nominal);
    let rule_id = RuleId::PositionStability;
    let severity = Severity::Hard;
    Ok(match bw.g_v {
        VelocityBandwidth::Infinite => {
            let rhs = position_stability_bound(bw.g_dob, gains.k_p, gains.k_d);
            let margin = rhs - 1.0 / alpha;
            RuleVerdict {
                rule_id,
                severity,
                pass: margin > 0.0,
                margin,
                detail: format!("1/alpha = {} < {} required (alpha_min = {})", sig9(1.0 / alpha), sig9(rhs), sig9(1.0 / rhs)),
            }
        }
        VelocityBandwidth::Finite(_) => {
            let den = build_position_loop(plant, nominal, bw, gains).closed.den().clone();
            let verdict = routh_verdict(&den)?;
            let margin = -max_real_part(&poly_roots(&den)?);
            RuleVerdict {
                rule_id,
                severity,
                pass: verdict.is_stable(),
                margin,
                detail: format!("Routh: {:?}, {} sign change(s)", verdict.class, verdict.rhp_count),
            }
        }
    })
}

/// Right-hand side of the ideal-measurement stability condition
/// `1/alpha < 1 + g K_D/K_P + K_D/g + K_D^2/K_P`.
pub fn position_stability_bound(g_dob: f64, k_p: f64, k_d: f64) -> f64 {
    1.0 + g_dob * k_d / k_p + k_d / g_dob + k_d * k_d / k_p
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PhaseCharacter {
    Lead,
    Lag,
    Unity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Compensators {
    /// DOB acting as `alpha (s+g)/(s+alpha g)`.
    pub dob: PhaseCharacter,
    /// `(s + g_DOB)/(s + g_RTOB)` in the force loop.
    pub rtob: PhaseCharacter,
}

fn character(ratio_gt: bool, equal: bool) -> PhaseCharacter {
    if equal {
        PhaseCharacter::Unity
    } else if ratio_gt {
        PhaseCharacter::Lead
    } else {
        PhaseCharacter::Lag
    }
}

pub fn classify_compensators(alpha: f64, g_dob: f64, g_rtob: f64) -> Compensators {
    Compensators {
        dob: character(alpha > 1.0, alpha == 1.0),
        rtob: character(g_rtob > g_dob, g_rtob == g_dob),
    }
}

/// Positive real zero of the RTOB open loop, present iff the `s^2`
/// coefficient `J_m K_hat - J_hat K_tau` of the numerator factor is negative.
pub fn detect_rhp_zero(plant: &MotorParams, identified: &IdentifiedModel, env: &Environment) -> Option<f64> {
    let phi = rtob_phi(plant, identified, env);
    let (c0, c1, c2) = (phi.coeff(0), phi.coeff(1), phi.coeff(2));
    if c2 >= 0.0 {
        return None;
    }
    // c2 < 0 <= c0 gives one root of each sign; the stable form of the
    // quadratic formula picks the positive one as q / c2.
    let disc = c1 * c1 - 4.0 * c2 * c0;
    let q = -0.5 * (c1 + disc.sqrt());
    let zero = q / c2;
    (zero > 0.0).then_some(zero)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignReport {
    pub mode: Mode,
    pub verdicts: Vec<RuleVerdict>,
    pub alpha: f64,
    pub beta: f64,
    pub kappa: f64,
    pub w_n: f64,
    pub xi: f64,
    pub rhp_zero: Option<f64>,
    pub compensators: Compensators,
}

impl DesignReport {
    pub fn hard_failures(&self) -> impl Iterator<Item = &RuleVerdict> {
        self.verdicts
            .iter()
            .filter(|v| v.severity == Severity::Hard && !v.pass)
    }

    pub fn all_hard_pass(&self) -> bool {
        self.hard_failures().next().is_none()
    }

    pub fn verdict(&self, id: RuleId) -> Option<&RuleVerdict> {
        self.verdicts.iter().find(|v| v.rule_id == id)
    }

    /// Stable text form: `#` header lines with the derived scalars, then one
    /// `rule_id STATUS margin` line per verdict.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# mode {}", self.mode.as_str());
        for (k, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("kappa", self.kappa),
            ("w_n", self.w_n),
            ("xi", self.xi),
        ] {
            let _ = writeln!(out, "# {k} {}", sig9(v));
        }
        let _ = writeln!(
            out,
            "# rhp_zero {}",
            self.rhp_zero.map_or_else(|| "none".to_string(), sig9)
        );
        let _ = writeln!(
            out,
            "# compensators dob={:?} rtob={:?}",
            self.compensators.dob, self.compensators.rtob
        );
        for v in &self.verdicts {
            let _ = writeln!(out, "{} {} {}", v.rule_id, v.status(), sig9(v.margin));
        }
        out
    }
}

/// Run every rule that applies to the scenario's mode, in fixed order.
pub fn design_report(scenario: &Scenario) -> Result<DesignReport> {
    scenario.validate()?;
    let plant = &scenario.plant;
    let nominal = &scenario.nominal;
    let bw = &scenario.bandwidths;
    let identified = scenario.identified();
    let alpha = alpha_of(plant, nominal);
    let beta = beta_of(nominal, &identified);
    let kappa = bw.kappa();
    let (w_n, xi) = match bw.g_v {
        VelocityBandwidth::Finite(_) => {
            let so = inner_second_order(alpha, kappa, bw.g_dob);
            (so.w_n, so.xi)
        }
        VelocityBandwidth::Infinite => (f64::INFINITY, f64::INFINITY),
    };

    let mut verdicts = vec![check_robustness(alpha, bw.g_dob, bw.g_v, scenario.analysis.xi_min)];

    verdicts.push(match bw.g_v {
        VelocityBandwidth::Infinite => RuleVerdict {
            rule_id: RuleId::BandwidthRatio,
            severity: Severity::Advisory,
            pass: true,
            margin: f64::INFINITY,
            detail: "ideal velocity measurement".into(),
        },
        VelocityBandwidth::Finite(g_v) => {
            let bound = BANDWIDTH_RATIO_MAX * g_v;
            let margin = bound - bw.g_dob;
            RuleVerdict {
                rule_id: RuleId::BandwidthRatio,
                severity: Severity::Advisory,
                pass: bw.g_dob <= bound * (1.0 + EQUALITY_SLACK),
                margin: if margin < 0.0 && bw.g_dob <= bound * (1.0 + EQUALITY_SLACK) { 0.0 } else { margin },
                detail: format!("g_DOB = {} vs 0.25 g_v = {}", sig9(bw.g_dob), sig9(bound)),
            }
        }
    });

    verdicts.push(RuleVerdict {
        rule_id: RuleId::AlphaReference,
        severity: Severity::Info,
        pass: true,
        margin: alpha - ALPHA_REFERENCE,
        detail: format!("alpha = {} (reference {ALPHA_REFERENCE})", sig9(alpha)),
    });

    if scenario.mode.has_position_loop() {
        verdicts.push(check_position_stability(plant, nominal, bw, &scenario.gains)?);
    }

    let mut rhp_zero = None;
    if scenario.mode.has_force_loop() {
        let env = scenario.env_or_free();
        rhp_zero = detect_rhp_zero(plant, &identified, &env);
        verdicts.push(RuleVerdict {
            rule_id: RuleId::MinPhase,
            severity: Severity::Hard,
            pass: rhp_zero.is_none(),
            margin: beta - alpha,
            detail: match rhp_zero {
                Some(z) => format!("RHP zero at s = {} rad/s (alpha > beta)", sig9(z)),
                None => "minimum phase (beta >= alpha)".into(),
            },
        });
        let lead = bw.g_rtob - bw.g_dob;
        verdicts.push(RuleVerdict {
            rule_id: RuleId::RtobLead,
            severity: Severity::Advisory,
            pass: lead > 0.0,
            margin: lead,
            detail: format!(
                "(s+g_DOB)/(s+g_RTOB) acts as {:?}",
                classify_compensators(alpha, bw.g_dob, bw.g_rtob).rtob
            ),
        });
    }

    Ok(DesignReport {
        mode: scenario.mode,
        verdicts,
        alpha,
        beta,
        kappa,
        w_n,
        xi,
        rhp_zero,
        compensators: classify_compensators(alpha, bw.g_dob, bw.g_rtob),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn robustness_examples() {
        let g_v = VelocityBandwidth::Finite(250.0);
        let eq = check_robustness(2.0, 62.5, g_v, FRAC_1_SQRT_2);
        assert!(eq.pass);
        assert!(eq.margin.abs() < 1e-9);
        let fail = check_robustness(2.0, 125.0, g_v, FRAC_1_SQRT_2);
        assert!(!fail.pass);
        assert!((fail.margin + 125.0).abs() < 1e-9);
        let ideal = check_robustness(50.0, 1e4, VelocityBandwidth::Infinite, FRAC_1_SQRT_2);
        assert!(ideal.pass && ideal.margin.is_infinite());
    }

    #[test]
    fn raising_xi_min_tightens_bound() {
        let g_v = VelocityBandwidth::Finite(250.0);
        assert!(!check_robustness(2.0, 62.5, g_v, 0.9).pass);
    }

    #[test]
    fn position_stability_table1() {
        let nominal = NominalModel::new(0.1, 5.0);
        let bw = ObserverBandwidths::new(500.0, VelocityBandwidth::Infinite, 500.0);
        let gains = OuterLoopGains::new(900.0, 100.0, 0.0);
        let v = check_position_stability(&MotorParams::new(0.1, 5.0), &nominal, &bw, &gains).unwrap();
        assert!(v.pass);
        let rhs = position_stability_bound(500.0, 900.0, 100.0);
        assert!((rhs - 67.866_666_666_7).abs() < 1e-9);
        // alpha = 0.01 through J_m = 10 J_mn.
        let v = check_position_stability(&MotorParams::new(10.0, 5.0), &nominal, &bw, &gains).unwrap();
        assert!(!v.pass);
        assert!(v.margin < 0.0);
    }

    #[test]
    fn compensator_classes() {
        assert_eq!(classify_compensators(2.0, 1.0, 1.0).dob, PhaseCharacter::Lead);
        assert_eq!(classify_compensators(0.5, 1.0, 1.0).dob, PhaseCharacter::Lag);
        assert_eq!(classify_compensators(1.0, 500.0, 1000.0).rtob, PhaseCharacter::Lead);
        let unity = classify_compensators(1.0, 300.0, 300.0);
        assert_eq!((unity.dob, unity.rtob), (PhaseCharacter::Unity, PhaseCharacter::Unity));
    }

    #[test]
    fn rhp_zero_examples() {
        let plant = MotorParams::new(0.1, 5.0);
        let env = Environment::bilateral(10.0, 1000.0);
        assert_eq!(detect_rhp_zero(&plant, &IdentifiedModel::perfect(&plant), &env), None);
        // -0.25 s^2 + 50 s + 5000 = 0
        let z = detect_rhp_zero(&plant, &IdentifiedModel::new(0.15, 5.0), &env).unwrap();
        let expected = (50.0 + (2500.0_f64 + 5000.0).sqrt()) / 0.5;
        assert!((z - expected).abs() < 1e-9 * expected);
        assert!((z - 273.2).abs() < 0.1);
        assert_eq!(detect_rhp_zero(&plant, &IdentifiedModel::new(0.05, 5.0), &env), None);
    }
}
