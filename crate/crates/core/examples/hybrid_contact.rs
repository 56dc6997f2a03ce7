//! Hybrid position/force run from the shipped `tableI.json` scenario: hold a
//! position short of a wall, then switch to force control and press on it.
//!
//!     cargo run --release --example hybrid_contact

use std::path::Path;

use dobkit::cli::load_scenario;
use dobkit::timesim::simulate;

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/tableI.json");
    let sc = load_scenario(&path).unwrap();
    let tr = simulate(&sc).unwrap();
    println!("{:>6} {:>5} {:>9} {:>9} {:>9}", "t", "rho", "q_m", "tau_load", "tau_hat");
    for k in (0..tr.len()).step_by(500) {
        println!(
            "{:6.3} {:5.2} {:9.5} {:9.4} {:9.4}",
            tr.t[k],
            sc.rho_at(tr.t[k]),
            tr.q_m[k],
            tr.tau_load_true[k],
            tr.tau_load_hat[k]
        );
    }
}
