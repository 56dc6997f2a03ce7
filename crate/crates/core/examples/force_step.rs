//! Force control step into a spring-damper environment: the estimated load
//! torque settles on the reference with no steady-state error.
//!
//!     cargo run --release --example force_step

use dobkit::params::{Environment, MotorParams, NominalModel, ObserverBandwidths, OuterLoopGains, VelocityBandwidth};
use dobkit::scenario::{Mode, Scenario, Signal, SimConfig};
use dobkit::timesim::{simulate, trace_metrics, Channel};

fn main() {
    let mut sc = Scenario::new(
        Mode::Force,
        MotorParams::new(0.1, 5.0),
        NominalModel::new(0.1, 5.0),
        ObserverBandwidths::new(500.0, VelocityBandwidth::Finite(2000.0), 1000.0),
        OuterLoopGains::new(0.0, 0.0, 5.0),
        SimConfig::new(1e-4, 3.0),
    );
    sc.env = Some(Environment::bilateral(10.0, 1000.0));
    sc.force_ref = Signal::Step { at: 0.0, from: 0.0, to: 1.0 };

    let tr = simulate(&sc).unwrap();
    for k in (0..tr.len()).step_by(2500) {
        println!(
            "t = {:5.3}  tau_ref = {:.3}  tau_load = {:.5}  tau_load_hat = {:.5}",
            tr.t[k], tr.tau_ref[k], tr.tau_load_true[k], tr.tau_load_hat[k]
        );
    }
    let m = trace_metrics(&tr, Channel::TauLoadHat, Channel::TauRef).unwrap();
    println!("{m:#?}");
}
