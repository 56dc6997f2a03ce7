use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scenario::Scenario;

use super::filter::LowPass;
use super::plant::{sgn, Plant};

/// Magnitude beyond which a run is declared diverged.
pub const BLOWUP_LIMIT: f64 = 1e12;

/// Named columns of a [`SimTrace`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Channel {
    T,
    QM,
    QdotM,
    QdotMeas,
    IMDes,
    IMCmp,
    IM,
    TauDisHat,
    TauLoadTrue,
    TauLoadHat,
    QRef,
    TauRef,
}

impl Channel {
    pub const ALL: [Channel; 12] = [
        Channel::T,
        Channel::QM,
        Channel::QdotM,
        Channel::QdotMeas,
        Channel::IMDes,
        Channel::IMCmp,
        Channel::IM,
        Channel::TauDisHat,
        Channel::TauLoadTrue,
        Channel::TauLoadHat,
        Channel::QRef,
        Channel::TauRef,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Channel::T => "t",
            Channel::QM => "q_m",
            Channel::QdotM => "qdot_m",
            Channel::QdotMeas => "qdot_meas",
            Channel::IMDes => "i_m_des",
            Channel::IMCmp => "i_m_cmp",
            Channel::IM => "i_m",
            Channel::TauDisHat => "tau_dis_hat",
            Channel::TauLoadTrue => "tau_load_true",
            Channel::TauLoadHat => "tau_load_hat",
            Channel::QRef => "q_ref",
            Channel::TauRef => "tau_ref",
        }
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Channel::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown channel `{s}`")))
    }
}

/// Uniformly sampled simulation output; every column has the same length.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SimTrace {
    pub t_s: f64,
    pub t: Vec<f64>,
    pub q_m: Vec<f64>,
    pub qdot_m: Vec<f64>,
    pub qdot_meas: Vec<f64>,
    pub i_m_des: Vec<f64>,
    pub i_m_cmp: Vec<f64>,
    pub i_m: Vec<f64>,
    pub tau_dis_hat: Vec<f64>,
    pub tau_load_true: Vec<f64>,
    pub tau_load_hat: Vec<f64>,
    pub q_ref: Vec<f64>,
    pub tau_ref: Vec<f64>,
}

impl SimTrace {
    /// All-zero trace of `n` samples at period `t_s`.
    pub fn zeros(n: usize, t_s: f64) -> Self {
        let z = vec![0.0; n];
        Self {
            t_s,
            t: (0..n).map(|k| k as f64 * t_s).collect(),
            q_m: z.clone(),
            qdot_m: z.clone(),
            qdot_meas: z.clone(),
            i_m_des: z.clone(),
            i_m_cmp: z.clone(),
            i_m: z.clone(),
            tau_dis_hat: z.clone(),
            tau_load_true: z.clone(),
            tau_load_hat: z.clone(),
            q_ref: z.clone(),
            tau_ref: z,
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn column(&self, ch: Channel) -> &[f64] {
        match ch {
            Channel::T => &self.t,
            Channel::QM => &self.q_m,
            Channel::QdotM => &self.qdot_m,
            Channel::QdotMeas => &self.qdot_meas,
            Channel::IMDes => &self.i_m_des,
            Channel::IMCmp => &self.i_m_cmp,
            Channel::IM => &self.i_m,
            Channel::TauDisHat => &self.tau_dis_hat,
            Channel::TauLoadTrue => &self.tau_load_true,
            Channel::TauLoadHat => &self.tau_load_hat,
            Channel::QRef => &self.q_ref,
            Channel::TauRef => &self.tau_ref,
        }
    }

    pub fn column_mut(&mut self, ch: Channel) -> &mut Vec<f64> {
        match ch {
            Channel::T => &mut self.t,
            Channel::QM => &mut self.q_m,
            Channel::QdotM => &mut self.qdot_m,
            Channel::QdotMeas => &mut self.qdot_meas,
            Channel::IMDes => &mut self.i_m_des,
            Channel::IMCmp => &mut self.i_m_cmp,
            Channel::IM => &mut self.i_m,
            Channel::TauDisHat => &mut self.tau_dis_hat,
            Channel::TauLoadTrue => &mut self.tau_load_true,
            Channel::TauLoadHat => &mut self.tau_load_hat,
            Channel::QRef => &mut self.q_ref,
            Channel::TauRef => &mut self.tau_ref,
        }
    }

    fn with_capacity(n: usize, t_s: f64) -> Self {
        let v = || Vec::with_capacity(n);
        Self {
            t_s,
            t: v(),
            q_m: v(),
            qdot_m: v(),
            qdot_meas: v(),
            i_m_des: v(),
            i_m_cmp: v(),
            i_m: v(),
            tau_dis_hat: v(),
            tau_load_true: v(),
            tau_load_hat: v(),
            q_ref: v(),
            tau_ref: v(),
        }
    }
}

/// First-order filter that starts at rest on its first input.
struct Observer {
    lpf: LowPass,
    started: bool,
}

impl Observer {
    fn new(g: f64, t_s: f64) -> Self {
        Self { lpf: LowPass::new(g, t_s), started: false }
    }

    fn filter(&mut self, u: f64) -> f64 {
        if self.started {
            self.lpf.step(u)
        } else {
            self.started = true;
            self.lpf.reset(u);
            u
        }
    }
}

fn check(x: f64, step: usize, t: f64, state: &'static str) -> Result<()> {
    if x.is_finite() && x.abs() <= BLOWUP_LIMIT {
        Ok(())
    } else {
        Err(Error::NumericalBlowup { step, t, state })
    }
}

/// Run the scenario's control loop at its sampling period.
///
/// Per sample `k`: measure velocity (noise, then the `g_v` filter), update
/// the DOB and RTOB from the current applied during the previous period,
/// form the acceleration reference, and hold the resulting current over
/// the next period.
pub fn simulate(sc: &Scenario) -> Result<SimTrace> {
    sc.validate()?;
    let cfg = sc.sim;
    let t_s = cfg.t_s;
    let n = cfg.samples();
    let nominal = sc.nominal;
    let ident = sc.identified();
    let bw = sc.bandwidths;
    let gains = sc.gains;
    let env = sc.env_or_free();

    let mut plant = Plant::new(&sc.plant, &env, t_s, cfg.q0, cfg.qdot0);
    let mut vel_filter = bw.g_v.finite().map(|g| Observer::new(g, t_s));
    let mut dob = Observer::new(bw.g_dob, t_s);
    let mut rtob = Observer::new(bw.g_rtob, t_s);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let noise = (cfg.noise_std > 0.0)
        .then(|| Normal::new(0.0, cfg.noise_std).expect("validated noise_std"));

    let jg_dob = nominal.j_mn * bw.g_dob;
    let jg_rtob = ident.j_hat * bw.g_rtob;
    let mut tr = SimTrace::with_capacity(n, t_s);
    let mut i_prev = 0.0;

    for k in 0..n {
        let t = k as f64 * t_s;
        let (q, v) = (plant.position(), plant.velocity());

        let v_noisy = match &noise {
            Some(d) => v + d.sample(&mut rng),
            None => v,
        };
        let v_meas = match &mut vel_filter {
            Some(f) => f.filter(v_noisy),
            None => v_noisy,
        };

        let tau_dis_hat = dob.filter(nominal.k_tau_n * i_prev + jg_dob * v_meas) - jg_dob * v_meas;

        let tau_fric_hat = ident.b_hat * v_meas + ident.f_c_hat * sgn(v_meas);
        let tau_int_hat = sc.ext_disturbance_estimate.value(t);
        let tau_load_hat = rtob.filter(ident.k_tau_hat * i_prev + jg_rtob * v_meas - tau_fric_hat - tau_int_hat)
            - jg_rtob * v_meas;

        let q_ref = sc.position_ref.value(t);
        let tau_ref = sc.force_ref.value(t);
        let rho = sc.rho_at(t);
        let mut acc = 0.0;
        if rho > 0.0 {
            let qdot_ref = sc.position_ref.derivative(t);
            acc += rho * (gains.k_p * (q_ref - q) + gains.k_d * (qdot_ref - v_meas));
        }
        if rho < 1.0 {
            acc += (1.0 - rho) * gains.c_f * (tau_ref - tau_load_hat);
        }

        let i_des = nominal.j_mn / nominal.k_tau_n * acc;
        let i_cmp = tau_dis_hat / nominal.k_tau_n;
        let i_m = i_des + i_cmp;
        check(i_m, k, t, "i_m")?;

        tr.t.push(t);
        tr.q_m.push(q);
        tr.qdot_m.push(v);
        tr.qdot_meas.push(v_meas);
        tr.i_m_des.push(i_des);
        tr.i_m_cmp.push(i_cmp);
        tr.i_m.push(i_m);
        tr.tau_dis_hat.push(tau_dis_hat);
        tr.tau_load_true.push(plant.load_torque());
        tr.tau_load_hat.push(tau_load_hat);
        tr.q_ref.push(q_ref);
        tr.tau_ref.push(tau_ref);

        if k + 1 < n {
            plant.step(i_m, sc.ext_disturbance.value(t));
            let t_next = (k + 1) as f64 * t_s;
            check(plant.position(), k + 1, t_next, "q_m")?;
            check(plant.velocity(), k + 1, t_next, "qdot_m")?;
        }
        i_prev = i_m;
    }
    Ok(tr)
}
