//! Command-line front end: `ecgame <command> [options]`.
//!
//! Exit status is 0 on success, 2 for invalid input or usage, and 3 when a
//! cross-check between closed forms and the LP fails.

pub mod instance;
mod locate;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::least_core::LeastCoreReport;
use crate::sesg::SesgInstance;
use crate::shares::{PartitionMode, PARTITION_MAX_USERS};
use instance::{read_instance, render_instance, Instance};
use report::{Method, Report};
use verify::Outcome;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ecgame", version, about = "Exact least-core analysis of energy sharing games")]
struct Cli {
    /// Machine-readable output on standard output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Partitions {
    Exact,
    Singletons,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural properties: superadditivity, monotonicity, convexity,
    /// veto/clan/big boss, balancedness.
    Props { file: PathBuf },
    /// Least-core value, bounds and certificates.
    Leastcore {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Largest and smallest aggregator payoff over the least core.
    Shares {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Partitions::Exact)]
        partitions: Partitions,
    },
    /// Properties, least core and shares together.
    Analyze { file: PathBuf },
    /// Random energy sharing instance with unit exchange gain.
    Gen {
        #[arg(long)]
        producers: usize,
        #[arg(long)]
        consumers: usize,
        #[arg(long, default_value_t = 10)]
        max_cap: i64,
        #[arg(long, default_value_t = 0)]
        max_fee: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the instance here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Cross-check every applicable closed form; exits 3 on a mismatch.
    Verify { file: PathBuf },
}

enum Failure {
    Invalid(String),
    Inconsistent(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Inconsistency(_) => Failure::Inconsistent(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    read_instance(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Invalid(format!("cannot write output: {e}")))
}

fn emit(out: &mut dyn Write, json: bool, report: &Report) -> Result<i32, Failure> {
    let text = if json { report.to_json() } else { report.to_string() };
    write_out(out, &text)?;
    Ok(EXIT_OK)
}

fn empty_report(inst: &Instance) -> Result<(Report, crate::Game), Failure> {
    let game = inst.game()?;
    let report = Report {
        instance: report::summary(inst, &game),
        properties: None,
        least_core: None,
        shares: None,
    };
    Ok((report, game))
}

fn partition_mode(p: Partitions) -> PartitionMode {
    match p {
        Partitions::Exact => PartitionMode::Exact,
        Partitions::Singletons => PartitionMode::Singletons,
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let json = cli.json;
    match cli.command {
        Command::Props { file } => {
            let inst = load(&file)?;
            let (mut report, game) = empty_report(&inst)?;
            report.properties = Some(report::properties_section(&inst, &game)?);
            emit(out, json, &report)
        }
        Command::Leastcore { file, method } => {
            let inst = load(&file)?;
            let (mut report, game) = empty_report(&inst)?;
            report.least_core = Some(report::least_core_section(&inst, &game, method)?.0);
            emit(out, json, &report)
        }
        Command::Shares { file, partitions } => {
            let inst = load(&file)?;
            let (mut report, game) = empty_report(&inst)?;
            if partitions == Partitions::Exact && game.n_users() > PARTITION_MAX_USERS {
                return Err(Failure::Invalid(format!(
                    "exact partition bound is limited to {PARTITION_MAX_USERS} users (got {}); use --partitions singletons",
                    game.n_users()
                )));
            }
            let lc = LeastCoreReport::analyze(&game, report::fee_free(&inst)?.as_ref().map(|(g, c)| (g, *c)))?;
            report.shares = Some(report::shares_section(&inst, &game, &lc, partition_mode(partitions))?);
            emit(out, json, &report)
        }
        Command::Analyze { file } => {
            let inst = load(&file)?;
            let (mut report, game) = empty_report(&inst)?;
            report.properties = Some(report::properties_section(&inst, &game)?);
            let (section, lc) = report::least_core_section(&inst, &game, Method::Both)?;
            report.least_core = Some(section);
            let mode = if game.n_users() <= PARTITION_MAX_USERS {
                PartitionMode::Exact
            } else {
                PartitionMode::Singletons
            };
            let lc = lc.expect("full analysis returns its report");
            report.shares = Some(report::shares_section(&inst, &game, &lc, mode)?);
            emit(out, json, &report)
        }
        Command::Gen {
            producers,
            consumers,
            max_cap,
            max_fee,
            seed,
            output,
        } => {
            if producers + consumers == 0 {
                return Err(Failure::Invalid("an instance needs at least one user".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = SesgInstance::random(&mut rng, producers, consumers, max_cap, max_fee)?;
            let text = render_instance(&Instance::Sesg(inst));
            match output {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display())))?,
                None => write_out(out, &text)?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify { file } => {
            let inst = load(&file)?;
            let checks = verify::verify(&inst)?;
            let failed = checks.iter().any(|c| c.failed());
            let text = if json {
                let mut s = serde_json::to_string_pretty(&checks).expect("checks serialize");
                s.push('\n');
                s
            } else {
                let mut s = String::new();
                for c in &checks {
                    match &c.outcome {
                        Outcome::Pass => s.push_str(&format!("pass  {}\n", c.name)),
                        Outcome::Fail(m) => s.push_str(&format!("FAIL  {}: {m}\n", c.name)),
                        Outcome::Skip(m) => s.push_str(&format!("skip  {}: {m}\n", c.name)),
                    }
                }
                let passed = checks.iter().filter(|c| c.outcome == Outcome::Pass).count();
                s.push_str(&format!("{passed} of {} checks passed\n", checks.len()));
                s
            };
            write_out(out, &text)?;
            Ok(if failed { EXIT_INCONSISTENT } else { EXIT_OK })
        }
    }
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let mut text = e.render().to_string();
            if e.use_stderr() && !text.contains("Usage:") {
                text.push_str(&format!("\n{}\n", Cli::command().render_usage()));
            }
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_INVALID
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(Failure::Invalid(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_INVALID
        }
        Err(Failure::Inconsistent(m)) => {
            let _ = writeln!(err, "cross-check failed: {m}");
            EXIT_INCONSISTENT
        }
    }
}
