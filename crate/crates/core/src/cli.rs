//! Command-line front end. The `dobkit` binary is a thin wrapper around
//! [`run`].
//!
//! Exit codes: 0 success, 1 a hard design rule failed or the computation
//! itself failed (divergence, unsettled reference, degenerate loop), 2 usage
//! error (bad arguments, unreadable input, unwritable output), 3 invalid
//! scenario file.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{bode, log_grid, parametric_locus, root_locus, BodeGrid, RootLocusResult};
use crate::dob_design::design_report;
use crate::error::Error;
use crate::format::sig9;
use crate::loop_models::{build_l_dob, build_position_loop, build_rtob_loop, sensitivity_pair};
use crate::params::MotorParams;
use crate::poly_tf::RationalTF;
use crate::scenario::Scenario;
use crate::timesim::{simulate, trace_metrics, Channel, SimTrace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID_SCENARIO: i32 = 3;

pub const BODE_HEADER: &str = "omega_rad_s,mag_db,phase_deg";
pub const LOCUS_HEADER: &str = "gain,branch,re,im,stable";
pub const SIM_COLUMNS: [Channel; 10] = [
    Channel::T,
    Channel::QRef,
    Channel::QM,
    Channel::QdotM,
    Channel::QdotMeas,
    Channel::IM,
    Channel::TauDisHat,
    Channel::TauLoadTrue,
    Channel::TauLoadHat,
    Channel::TauRef,
];

#[derive(Parser, Debug)]
#[command(name = "dobkit", version, about = "DOB/RTOB motion control design, analysis and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate every design rule and print the report.
    Check { file: PathBuf },
    /// Frequency response of one loop transfer function.
    Bode {
        file: PathBuf,
        #[arg(long, value_enum)]
        tf: TfKind,
        /// Output CSV (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Closed-loop poles over a parameter sweep.
    Rootlocus {
        file: PathBuf,
        #[arg(long, value_enum)]
        sweep: SweepKind,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Time-domain simulation.
    Simulate {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Simulate and print step metrics of the controlled channels.
    Metrics { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TfKind {
    /// Inner-loop sensitivity `1 / (1 + L_DOB)`.
    InnerSens,
    /// Inner-loop co-sensitivity `L_DOB / (1 + L_DOB)`.
    InnerCosens,
    /// Outer position-loop co-sensitivity `L_PC / (1 + L_PC)`.
    OuterCosens,
    /// Position closed loop.
    PosClosed,
    /// RTOB force open loop at the scenario's `C_f`.
    RtobOpen,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    /// Inertia variation `alpha` in the position closed loop.
    Alpha,
    /// Force gain `C_f` in the RTOB loop.
    Cf,
}

/// Failure of one CLI invocation, already classified by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Scenario(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Scenario(_) => EXIT_INVALID_SCENARIO,
            CliError::Failed(_) => EXIT_FAILED,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Scenario(m) | CliError::Failed(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidScenario { .. } => CliError::Scenario(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

/// Parse `argv` (program name first), run the subcommand and return the
/// process exit code. Diagnostics go to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    match dispatch(cli.command, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("dobkit: {}", e.message());
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Check { file } => {
            let sc = load_scenario(&file)?;
            let report = design_report(&sc)?;
            emit(out, &report.render())?;
            Ok(if report.all_hard_pass() { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Bode { file, tf, output } => {
            let sc = load_scenario(&file)?;
            let h = select_tf(&sc, tf)?;
            let a = &sc.analysis;
            let grid = bode(&h, a.omega_lo, a.omega_hi, a.points_per_decade)?;
            write_output(output.as_deref(), out, &bode_csv(&grid))?;
            Ok(EXIT_OK)
        }
        Command::Rootlocus { file, sweep, output } => {
            let sc = load_scenario(&file)?;
            let rl = sweep_locus(&sc, sweep)?;
            write_output(output.as_deref(), out, &locus_csv(&rl))?;
            Ok(EXIT_OK)
        }
        Command::Simulate { file, output } => {
            let sc = load_scenario(&file)?;
            let tr = simulate(&sc)?;
            write_output(output.as_deref(), out, &sim_csv(&tr))?;
            Ok(EXIT_OK)
        }
        Command::Metrics { file } => {
            let sc = load_scenario(&file)?;
            let tr = simulate(&sc)?;
            let mut text = String::new();
            let mut settled = true;
            let mut pairs = Vec::new();
            if sc.mode.has_position_loop() {
                pairs.push((Channel::QM, Channel::QRef));
            }
            if sc.mode.has_force_loop() {
                pairs.push((Channel::TauLoadHat, Channel::TauRef));
            }
            for (ch, rf) in pairs {
                text.push_str(&format!("# channel {} reference {}\n", ch.name(), rf.name()));
                match trace_metrics(&tr, ch, rf) {
                    Ok(m) => {
                        for (k, v) in [
                            ("overshoot_pct", m.overshoot_pct),
                            ("settling_time_s", m.settling_time_s),
                            ("ss_error", m.ss_error),
                            ("rms_residual", m.rms_residual),
                        ] {
                            text.push_str(&format!("{k} {}\n", sig9(v)));
                        }
                    }
                    Err(e @ Error::NotSettled(_)) => {
                        settled = false;
                        text.push_str(&format!("# {e}\n"));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            emit(out, &text)?;
            Ok(if settled { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
}

fn write_output(path: Option<&Path>, stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match path {
        None => emit(stdout, text),
        Some(p) => fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
    }
}

/// Read, parse and validate a scenario file. Parse errors name the
/// offending key as a dotted path, e.g. `plant.J_m`.
pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let sc = parse_scenario(&text)?;
    sc.validate()?;
    Ok(sc)
}

/// Parse scenario JSON without validating it.
pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let msg = inner.to_string();
        let key = offending_key(&path, &msg);
        CliError::Scenario(format!("invalid scenario: `{key}`: {msg}"))
    })
}

/// Dotted path of the key a serde error is about. Missing and unknown
/// fields are reported by serde one level above the key itself.
fn offending_key(path: &str, msg: &str) -> String {
    let base = if path == "." { "" } else { path };
    let quoted = |prefix: &str| {
        msg.strip_prefix(prefix)
            .and_then(|rest| rest.split('`').next())
            .map(str::to_string)
    };
    match quoted("missing field `").or_else(|| quoted("unknown field `")) {
        Some(field) if base.is_empty() => field,
        Some(field) => format!("{base}.{field}"),
        None if base.is_empty() => "<document>".to_string(),
        None => base.to_string(),
    }
}

fn select_tf(sc: &Scenario, kind: TfKind) -> Result<RationalTF, CliError> {
    let l_dob = || build_l_dob(&sc.plant, &sc.nominal, &sc.bandwidths);
    let pos = || build_position_loop(&sc.plant, &sc.nominal, &sc.bandwidths, &sc.gains);
    Ok(match kind {
        TfKind::InnerSens => sensitivity_pair(&l_dob()).0,
        TfKind::InnerCosens => sensitivity_pair(&l_dob()).1,
        TfKind::OuterCosens => sensitivity_pair(&pos().open).1,
        TfKind::PosClosed => pos().closed,
        TfKind::RtobOpen => rtob_open(sc, sc.gains.c_f)?,
    })
}

fn rtob_open(sc: &Scenario, c_f: f64) -> Result<RationalTF, CliError> {
    let env = sc
        .env
        .ok_or_else(|| CliError::Scenario("invalid scenario: `env`: required for the force loop".into()))?;
    let rl = build_rtob_loop(&sc.plant, &sc.nominal, &sc.identified(), &sc.bandwidths, &env, c_f);
    if rl.open.num().is_zero() {
        return Err(CliError::Failed("force loop has a zero numerator for this environment".into()));
    }
    Ok(rl.open)
}

fn sweep_locus(sc: &Scenario, sweep: SweepKind) -> Result<RootLocusResult, CliError> {
    let a = &sc.analysis;
    let grid = log_grid(a.gain_lo, a.gain_hi, a.gains_per_decade)?;
    Ok(match sweep {
        SweepKind::Cf => root_locus(&rtob_open(sc, 1.0)?, &grid)?,
        SweepKind::Alpha => {
            let nominal = sc.nominal;
            let k_tau = sc.plant.k_tau;
            parametric_locus(&grid, |alpha| {
                // Plant inertia that yields this alpha.
                let plant = MotorParams { j_m: nominal.j_mn * k_tau / (alpha * nominal.k_tau_n), ..sc.plant };
                build_position_loop(&plant, &nominal, &sc.bandwidths, &sc.gains).closed.den().clone()
            })?
        }
    })
}

pub fn bode_csv(grid: &BodeGrid) -> String {
    let mut s = String::with_capacity(40 * (grid.len() + 1));
    s.push_str(BODE_HEADER);
    s.push('\n');
    for i in 0..grid.len() {
        s.push_str(&format!("{},{},{}\n", sig9(grid.omegas[i]), sig9(grid.mag_db[i]), sig9(grid.phase_deg[i])));
    }
    s
}

pub fn locus_csv(rl: &RootLocusResult) -> String {
    let mut s = String::new();
    s.push_str(LOCUS_HEADER);
    s.push('\n');
    for (i, poles) in rl.branches.iter().enumerate() {
        let stable = u8::from(rl.stable_mask[i]);
        for (k, p) in poles.iter().enumerate() {
            s.push_str(&format!("{},{k},{},{},{stable}\n", sig9(rl.gains[i]), sig9(p.re), sig9(p.im)));
        }
    }
    s
}

pub fn sim_header() -> String {
    SIM_COLUMNS.iter().map(|c| c.name()).collect::<Vec<_>>().join(",")
}

pub fn sim_csv(tr: &SimTrace) -> String {
    let cols: Vec<&[f64]> = SIM_COLUMNS.iter().map(|&c| tr.column(c)).collect();
    let mut s = String::with_capacity(160 * (tr.len() + 1));
    s.push_str(&sim_header());
    s.push('\n');
    for k in 0..tr.len() {
        for (j, c) in cols.iter().enumerate() {
            if j > 0 {
                s.push(',');
            }
            s.push_str(&sig9(c[k]));
        }
        s.push('\n');
    }
    s
}
