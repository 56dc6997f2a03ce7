//! Root locus of the position loop over the inertia variation, and the
//! smallest stable alpha from the closed-form criterion.
//!
//!     cargo run --example position_root_locus

use dobkit::analysis::{log_grid, parametric_locus};
use dobkit::dob_design::position_stability_bound;
use dobkit::loop_models::build_position_loop;
use dobkit::params::{MotorParams, NominalModel, ObserverBandwidths, OuterLoopGains, VelocityBandwidth};

fn main() {
    let nominal = NominalModel::new(0.1, 5.0);
    let gains = OuterLoopGains::new(900.0, 100.0, 0.0);
    let bw = ObserverBandwidths::new(500.0, VelocityBandwidth::Infinite, 1000.0);

    let alpha_min = 1.0 / position_stability_bound(bw.g_dob, gains.k_p, gains.k_d);
    println!("closed-form stability bound: alpha > {alpha_min:.6}");

    let alphas = log_grid(1e-3, 10.0, 20).unwrap();
    let locus = parametric_locus(&alphas, |alpha| {
        let plant = MotorParams::new(nominal.j_mn / alpha, nominal.k_tau_n);
        build_position_loop(&plant, &nominal, &bw, &gains).closed.den().clone()
    })
    .unwrap();

    for (i, alpha) in locus.gains.iter().enumerate() {
        let poles: Vec<String> = locus.branches[i]
            .iter()
            .map(|p| format!("{:9.2}{:+9.2}j", p.re, p.im))
            .collect();
        println!(
            "alpha {alpha:8.4}  {}  {}",
            if locus.stable_mask[i] { "stable  " } else { "UNSTABLE" },
            poles.join("  ")
        );
    }
}
