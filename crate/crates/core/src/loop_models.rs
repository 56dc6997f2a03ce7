//! Transfer functions of the DOB inner loop, the PD position loop and the
//! RTOB force loop, built coefficient-exactly from parameter sets.
//!
//! The linear models assume no friction and ideal position measurement.
//! The RTOB loop also assumes ideal velocity measurement; only the DOB
//! and position loops have a filtered-velocity variant.

use crate::params::{
    Environment, IdentifiedModel, MotorParams, NominalModel, ObserverBandwidths, OuterLoopGains,
    VelocityBandwidth,
};
use crate::poly_tf::{Polynomial, RationalTF};

/// `alpha = J_mn K_tau / (J_m K_tau_n)`.
pub fn alpha_of(plant: &MotorParams, nominal: &NominalModel) -> f64 {
    nominal.j_mn * plant.k_tau / (plant.j_m * nominal.k_tau_n)
}

/// `beta = J_mn K_tau_hat / (J_hat K_tau_n)`; equals alpha under perfect
/// identification.
pub fn beta_of(nominal: &NominalModel, identified: &IdentifiedModel) -> f64 {
    nominal.j_mn * identified.k_tau_hat / (identified.j_hat * nominal.k_tau_n)
}

/// DOB inner open loop: `alpha g_DOB / s`, or
/// `alpha g_v g_DOB / (s (s + g_v))` with a filtered velocity.
pub fn build_l_dob(
    plant: &MotorParams,
    nominal: &NominalModel,
    bw: &ObserverBandwidths,
) -> RationalTF {
    let alpha = alpha_of(plant, nominal);
    match bw.g_v {
        VelocityBandwidth::Infinite => RationalTF::from_parts(
            Polynomial::constant(alpha * bw.g_dob),
            Polynomial::s(),
        ),
        VelocityBandwidth::Finite(g_v) => RationalTF::from_parts(
            Polynomial::constant(alpha * g_v * bw.g_dob),
            &Polynomial::s() * &Polynomial::linear(g_v),
        ),
    }
}

/// `(1/(1+L), L/(1+L))` over the shared denominator `den + num`.
pub fn sensitivity_pair(l: &RationalTF) -> (RationalTF, RationalTF) {
    let common = l.den() + l.num();
    (
        RationalTF::from_parts(l.den().clone(), common.clone()),
        RationalTF::from_parts(l.num().clone(), common),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct InnerSecondOrder {
    /// `s^2 + kappa g s + alpha kappa g^2`
    pub char_poly: Polynomial,
    /// Natural frequency, rad/s.
    pub w_n: f64,
    /// Damping ratio.
    pub xi: f64,
}

/// Characteristic polynomial of the filtered-velocity inner loop with
/// `g_v = kappa g_DOB`, and its natural frequency and damping.
pub fn inner_second_order(alpha: f64, kappa: f64, g_dob: f64) -> InnerSecondOrder {
    InnerSecondOrder {
        char_poly: Polynomial::new(vec![alpha * kappa * g_dob * g_dob, kappa * g_dob, 1.0]),
        w_n: (alpha * kappa).sqrt() * g_dob,
        xi: 0.5 * (kappa / alpha).sqrt(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositionLoop {
    /// Acceleration reference to acceleration.
    pub closed: RationalTF,
    /// Outer-loop open loop `L_PC`.
    pub open: RationalTF,
}

/// PD position control around the DOB inner loop.
///
/// Closed loop from acceleration reference to acceleration:
///
/// ```text
/// alpha (s+g_v)(s+g)(s^2 + K_D s + K_P)
/// -------------------------------------------------------------
/// s^2 (s^2 + g_v s + alpha g_v g) + alpha (s+g_v)(s+g)(K_D s + K_P)
/// ```
///
/// and in the ideal case (no `s+g_v` factors)
/// `s^2 (s + alpha g) + alpha (s+g)(K_D s + K_P)` below. The open loop
/// satisfies `1 + L_PC = closed.den / (s^3 (s+g_v))`.
pub fn build_position_loop(
    plant: &MotorParams,
    nominal: &NominalModel,
    bw: &ObserverBandwidths,
    gains: &OuterLoopGains,
) -> PositionLoop {
    let alpha = alpha_of(plant, nominal);
    let g = bw.g_dob;
    let s = Polynomial::s();
    let s2 = s.pow(2);
    let pd = Polynomial::new(vec![gains.k_p, gains.k_d]);
    let pd_plus_s2 = &pd + &s2;
    let s_plus_g = Polynomial::linear(g);

    match bw.g_v {
        VelocityBandwidth::Infinite => {
            let num = (&s_plus_g * &pd_plus_s2).scale(alpha);
            let den = &(&s2 * &Polynomial::linear(alpha * g)) + &(&s_plus_g * &pd).scale(alpha);
            let open_num = (&s2.scale(g) + &(&s_plus_g * &pd)).scale(alpha);
            PositionLoop {
                closed: RationalTF::from_parts(num, den),
                open: RationalTF::from_parts(open_num, s.pow(3)),
            }
        }
        VelocityBandwidth::Finite(g_v) => {
            let s_plus_gv = Polynomial::linear(g_v);
            let filters = &s_plus_gv * &s_plus_g;
            let num = (&filters * &pd_plus_s2).scale(alpha);
            let inner = Polynomial::new(vec![alpha * g_v * g, g_v, 1.0]);
            let den = &(&s2 * &inner) + &(&filters * &pd).scale(alpha);
            let open_num = (&s2.scale(g_v * g) + &(&filters * &pd)).scale(alpha);
            PositionLoop {
                closed: RationalTF::from_parts(num, den),
                open: RationalTF::from_parts(open_num, &s.pow(3) * &s_plus_gv),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RtobLoop {
    /// Force-loop open loop `L_RTOB`.
    pub open: RationalTF,
    /// `(J_m K_hat - J_hat K_tau) s^2 + K_hat D_env s + K_hat K_env`
    pub phi: Polynomial,
    /// Force reference to estimated load torque, `L / (1 + L)`.
    pub closed: RationalTF,
}

/// Contact-loaded inner loop `J_m s (s + alpha g_DOB) + D_env s + K_env`.
pub fn contact_inner_poly(plant: &MotorParams, alpha: f64, g_dob: f64, env: &Environment) -> Polynomial {
    Polynomial::new(vec![
        env.k_env,
        plant.j_m * alpha * g_dob + env.d_env,
        plant.j_m,
    ])
}

/// Numerator polynomial of the RTOB open loop in reduced form.
pub fn rtob_phi(plant: &MotorParams, identified: &IdentifiedModel, env: &Environment) -> Polynomial {
    let k_hat = identified.k_tau_hat;
    Polynomial::new(vec![
        k_hat * env.k_env,
        k_hat * env.d_env,
        plant.j_m * k_hat - identified.j_hat * plant.k_tau,
    ])
}

/// RTOB force loop with outer force gain `c_f`, acceleration command
/// `C_f (tau_ref - tau_load_hat)`:
///
/// ```text
///             C_f g_RTOB (J_mn / K_tau_n) (s + g_DOB) phi(s)
/// L_RTOB = -----------------------------------------------------------
///          s (J_m s (s + alpha g_DOB) + D_env s + K_env) (s + g_RTOB)
/// ```
pub fn build_rtob_loop(
    plant: &MotorParams,
    nominal: &NominalModel,
    identified: &IdentifiedModel,
    bw: &ObserverBandwidths,
    env: &Environment,
    c_f: f64,
) -> RtobLoop {
    let alpha = alpha_of(plant, nominal);
    let phi = rtob_phi(plant, identified, env);
    let gain = c_f * bw.g_rtob * nominal.j_mn / nominal.k_tau_n;
    let num = (&Polynomial::linear(bw.g_dob) * &phi).scale(gain);
    let den = &(&Polynomial::s() * &contact_inner_poly(plant, alpha, bw.g_dob, env))
        * &Polynomial::linear(bw.g_rtob);
    let open = RationalTF::from_parts(num, den);
    let closed = RationalTF::from_parts(open.num().clone(), open.characteristic(1.0));
    RtobLoop { open, phi, closed }
}
