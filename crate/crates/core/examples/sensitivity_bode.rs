//! Inner-loop co-sensitivity peaks as the inertia variation grows, with a
//! practical (finite g_v) and an ideal velocity measurement, and a Bode CSV
//! of one case on stdout.
//!
//!     cargo run --example sensitivity_bode > cosens.csv

use dobkit::analysis::{bode, sensitivity_peak};
use dobkit::cli::bode_csv;
use dobkit::loop_models::{build_l_dob, sensitivity_pair};
use dobkit::params::{MotorParams, NominalModel, ObserverBandwidths, VelocityBandwidth};

fn main() {
    let nominal = NominalModel::new(0.1, 5.0);
    let g_dob = 500.0;
    for g_v in [VelocityBandwidth::Finite(4.0 * g_dob), VelocityBandwidth::Infinite] {
        let bw = ObserverBandwidths::new(g_dob, g_v, 1000.0);
        for alpha in [1.0, 2.0, 4.0, 8.0] {
            let plant = MotorParams::new(nominal.j_mn / alpha, nominal.k_tau_n);
            let (_, cosens) = sensitivity_pair(&build_l_dob(&plant, &nominal, &bw));
            let p = sensitivity_peak(&cosens, (1.0, 1e5)).unwrap();
            eprintln!(
                "g_v = {:>6}  alpha = {alpha}  peak = {:.4} ({:+.2} dB) at {:.0} rad/s",
                g_v.as_f64(),
                p.peak,
                20.0 * p.peak.log10(),
                p.omega_star
            );
        }
    }

    let plant = MotorParams::new(0.025, 5.0);
    let bw = ObserverBandwidths::new(g_dob, VelocityBandwidth::Finite(2000.0), 1000.0);
    let (_, cosens) = sensitivity_pair(&build_l_dob(&plant, &nominal, &bw));
    print!("{}", bode_csv(&bode(&cosens, 1.0, 1e5, 40).unwrap()));
}
