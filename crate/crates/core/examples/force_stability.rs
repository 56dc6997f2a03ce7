//! Force-loop stability under imperfect inertia identification: an
//! over-estimated inertia puts a zero in the right half plane and bounds the
//! force gain; an under-estimated one does not.
//!
//!     cargo run --example force_stability

use dobkit::analysis::{critical_gain, log_grid, root_locus};
use dobkit::dob_design::detect_rhp_zero;
use dobkit::loop_models::{beta_of, build_rtob_loop};
use dobkit::params::{Environment, IdentifiedModel, MotorParams, NominalModel, ObserverBandwidths, VelocityBandwidth};

fn main() {
    let plant = MotorParams::new(0.1, 5.0);
    let nominal = NominalModel::new(0.1, 5.0);
    let bw = ObserverBandwidths::new(500.0, VelocityBandwidth::Infinite, 1000.0);
    let env = Environment::bilateral(10.0, 1000.0);
    let gains = log_grid(1e-2, 1e4, 20).unwrap();

    for j_hat in [0.15, 0.1, 0.05] {
        let ident = IdentifiedModel::new(j_hat, plant.k_tau);
        let l = build_rtob_loop(&plant, &nominal, &ident, &bw, &env, 1.0).open;
        let locus = root_locus(&l, &gains).unwrap();
        let worst = locus.max_real().into_iter().fold(f64::NEG_INFINITY, f64::max);
        println!("J_hat = {j_hat}  beta = {:.3}", beta_of(&nominal, &ident));
        match detect_rhp_zero(&plant, &ident, &env) {
            Some(z) => println!("  RHP zero at s = {z:.3}"),
            None => println!("  minimum phase"),
        }
        match critical_gain(&l, gains[0], *gains.last().unwrap()) {
            Ok(k) => println!("  unstable beyond C_f = {k:.3}"),
            Err(_) => println!("  stable on the whole sweep (max Re = {worst:.2})"),
        }
    }
}
