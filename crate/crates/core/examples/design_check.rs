//! Evaluate the design rules on the shipped `tableI.json` scenario, then push the
//! inertia variation past the robustness bound.
//!
//!     cargo run --example design_check

use std::path::Path;

use dobkit::cli::load_scenario;
use dobkit::dob_design::design_report;
use dobkit::params::MotorParams;

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/tableI.json");
    let mut sc = load_scenario(&path).expect("shipped scenario is valid");

    let report = design_report(&sc).unwrap();
    print!("{}", report.render());
    println!("all hard rules pass: {}\n", report.all_hard_pass());

    // Halving the plant inertia doubles alpha: alpha g_DOB = 2000 > g_v / 2.
    sc.plant = MotorParams { j_m: 0.025, ..sc.plant };
    let report = design_report(&sc).unwrap();
    print!("{}", report.render());
    for v in report.hard_failures() {
        println!("hard failure: {} ({})", v.rule_id, v.detail);
    }
}
