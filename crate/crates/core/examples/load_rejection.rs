//! Position step followed by a load torque step, with velocity noise:
//! a faster disturbance observer shrinks the deviation the load causes.
//!
//!     cargo run --release --example load_rejection

use dobkit::params::{MotorParams, NominalModel, ObserverBandwidths, OuterLoopGains, VelocityBandwidth};
use dobkit::scenario::{Mode, Scenario, Signal, SimConfig};
use dobkit::timesim::{simulate, trace_metrics, Channel};

fn main() {
    for g_dob in [20.0, 100.0, 500.0] {
        let mut sc = Scenario::new(
            Mode::Position,
            MotorParams::new(0.05, 5.0),
            NominalModel::new(0.1, 5.0),
            ObserverBandwidths::new(g_dob, VelocityBandwidth::Finite(2000.0), 1000.0),
            OuterLoopGains::new(900.0, 100.0, 0.0),
            SimConfig { noise_std: 1e-3, seed: 3, ..SimConfig::new(1e-4, 2.0) },
        );
        sc.position_ref = Signal::Constant { value: 0.1 };
        sc.ext_disturbance = Signal::Step { at: 1.0, from: 0.0, to: 2.0 };

        let tr = simulate(&sc).unwrap();
        let after = tr.t.iter().position(|&t| t >= 1.0).unwrap();
        let peak = tr.q_m[after..].iter().fold(0.0_f64, |m, q| m.max((q - 0.1).abs()));
        let m = trace_metrics(&tr, Channel::QM, Channel::QRef).unwrap();
        println!(
            "g_DOB = {g_dob:5}  peak deviation after load = {peak:.2e} rad  final error = {:.1e} rad  load estimate = {:.3} Nm",
            m.ss_error,
            tr.tau_dis_hat[tr.len() - 1]
        );
    }
}
