//! Single-joint rigid plant with an optional spring-damper contact,
//! discretized exactly under a zero-order hold on the applied torque.

use nalgebra::{Matrix2, Matrix3, Vector2};

use crate::params::{ContactMode, Environment, MotorParams};

/// Exact one-step transition of `J qddot = tau - c qdot - k q` for a held
/// `tau`: `x+ = phi x + gamma tau / J`.
#[derive(Clone, Debug)]
struct Zoh {
    phi: Matrix2<f64>,
    gamma: Vector2<f64>,
}

impl Zoh {
    fn new(j: f64, stiffness: f64, damping: f64, t_s: f64) -> Self {
        #[rustfmt::skip]
        let m = Matrix3::new(
            0.0,            1.0,          0.0,
            -stiffness / j, -damping / j, 1.0,
            0.0,            0.0,          0.0,
        );
        let e = (m * t_s).exp();
        Self {
            phi: e.fixed_view::<2, 2>(0, 0).into_owned(),
            gamma: e.fixed_view::<2, 1>(0, 2).into_owned(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Plant {
    j: f64,
    k_tau: f64,
    coulomb: f64,
    env: Environment,
    free: Zoh,
    contact: Zoh,
    /// `(q, qdot)`
    x: Vector2<f64>,
}

impl Plant {
    pub fn new(motor: &MotorParams, env: &Environment, t_s: f64, q0: f64, qdot0: f64) -> Self {
        Self {
            j: motor.j_m,
            k_tau: motor.k_tau,
            coulomb: motor.f_c,
            env: *env,
            free: Zoh::new(motor.j_m, 0.0, motor.b, t_s),
            contact: Zoh::new(motor.j_m, env.k_env, motor.b + env.d_env, t_s),
            x: Vector2::new(q0, qdot0),
        }
    }

    pub fn position(&self) -> f64 {
        self.x[0]
    }

    pub fn velocity(&self) -> f64 {
        self.x[1]
    }

    fn spring_damper(&self) -> f64 {
        self.env.k_env * (self.x[0] - self.env.q_env) + self.env.d_env * self.x[1]
    }

    /// Whether the contact law is active for the coming interval.
    pub fn in_contact(&self) -> bool {
        match self.env.contact {
            ContactMode::Bilateral => true,
            ContactMode::Unilateral => self.x[0] >= self.env.q_env && self.spring_damper() >= 0.0,
        }
    }

    /// Environment torque at the current state.
    pub fn load_torque(&self) -> f64 {
        if self.in_contact() {
            self.spring_damper()
        } else {
            0.0
        }
    }

    /// Coulomb friction torque at the current state.
    pub fn coulomb_torque(&self) -> f64 {
        self.coulomb * sgn(self.x[1])
    }

    /// Advance one period with motor current `current` and interactive
    /// torque `tau_int` held constant. Contact mode and Coulomb friction are
    /// frozen at their values at the start of the period.
    pub fn step(&mut self, current: f64, tau_int: f64) {
        let mut tau = self.k_tau * current - self.coulomb_torque() - tau_int;
        let zoh = if self.in_contact() {
            tau += self.env.k_env * self.env.q_env;
            &self.contact
        } else {
            &self.free
        };
        self.x = zoh.phi * self.x + zoh.gamma * (tau / self.j);
    }

    /// `J qdot^2 / 2 + K_env (q - q_env)^2 / 2`
    pub fn energy(&self) -> f64 {
        let dq = self.x[0] - self.env.q_env;
        0.5 * self.j * self.x[1] * self.x[1] + 0.5 * self.env.k_env * dq * dq
    }
}

pub(crate) fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}
