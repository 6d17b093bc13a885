use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use taskshare::analysis::{
    appendix_closed_forms, deviation_search_with_cap, sevb_bound_argmax, standard_misreport_family, BoundScenario,
};
use taskshare::harness::{run_experiment, write_csv, DeadlinePolicy, ExperimentConfig, PmfStyle};
use taskshare::io::{parse_instance, parse_reports};
use taskshare::mechanisms::Evaluator;
use taskshare::table::{DEFAULT_PLAYER_CAP, MAX_PLAYERS};
use taskshare::{
    shapley_values, Error, Instance, MechanismKind, PlayerId, Rational, Realization, ReportProfile, Result,
    RewardVector,
};

/// Exact reward sharing for stochastic task-allocation games.
#[derive(Parser)]
#[command(name = "taskshare", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Instance JSON file.
    file: PathBuf,
    /// Reported distributions (JSON map from player id to pmf); missing
    /// players report truthfully.
    #[arg(long)]
    reports: Option<PathBuf>,
    /// Lift the default player limit (up to the hard maximum).
    #[arg(long)]
    allow_large: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Grand-coalition value and optimal assignment as JSON.
    Solve(Common),
    /// Every coalition value as `bitmask,value` CSV.
    Coalitions(Common),
    /// Per-player Shapley values as CSV.
    Shapley(Common),
    /// Rewards under one mechanism as CSV.
    Reward {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mechanism: MechanismKind,
        /// Realized durations of the assigned players, e.g. "1=1,3=2".
        #[arg(long, conflicts_with = "expected")]
        realization: Option<Realization>,
        /// Expected rewards against the true distributions.
        #[arg(long)]
        expected: bool,
    },
    /// Search the standard misreport family for a profitable deviation.
    Deviate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        player: PlayerId,
        #[arg(long)]
        mechanism: MechanismKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// SEVB total-reward bound factor and, with --k, the per-role rewards
    /// of the worst-case construction (p = 1).
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Random-instance campaign written as CSV.
    Experiment {
        /// Players per task, e.g. 4,4,4,4.
        #[arg(long, value_delimiter = ',', required = true)]
        groups: Vec<usize>,
        #[arg(long)]
        support: u32,
        #[arg(long)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `auto`, an integer, or `frac:<r>` of m·s.
        #[arg(long, default_value = "auto")]
        deadline: DeadlinePolicy,
        #[arg(long, value_delimiter = ',', default_value = "sevb,vcgev")]
        mechanisms: Vec<MechanismKind>,
        /// Equal mass on every duration instead of random weights.
        #[arg(long)]
        uniform_pmf: bool,
        #[arg(long)]
        allow_large: bool,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn cap(allow_large: bool) -> usize {
    if allow_large {
        MAX_PLAYERS
    } else {
        DEFAULT_PLAYER_CAP
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load(common: &Common) -> Result<(Instance, ReportProfile)> {
    let instance = parse_instance(&read(&common.file)?)?;
    let reports = match &common.reports {
        Some(path) => parse_reports(&read(path)?, &instance)?,
        None => ReportProfile::truthful(&instance),
    };
    Ok((instance, reports))
}

fn rewards_csv(out: &mut impl Write, header: &str, x: &RewardVector) -> Result<()> {
    writeln!(out, "player,{header},decimal")?;
    for (p, v) in x.iter() {
        writeln!(out, "{p},{v},{}", v.to_decimal(6))?;
    }
    Ok(())
}

fn print_json(out: &mut impl Write, value: &serde_json::Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("json value serializes"))?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Solve(common) => {
            let (instance, reports) = load(&common)?;
            let eval = Evaluator::with_cap(&instance, &reports, cap(common.allow_large))?;
            let value = eval.grand_value();
            print_json(
                &mut out,
                &json!({
                    "value": value,
                    "value_decimal": value.to_decimal(6),
                    "assignment": eval.grand_assignment(),
                }),
            )?;
        }
        Command::Coalitions(common) => {
            let (instance, reports) = load(&common)?;
            let eval = Evaluator::with_cap(&instance, &reports, cap(common.allow_large))?;
            let table = eval.table();
            writeln!(out, "bitmask,value")?;
            for mask in 0..=table.grand() {
                writeln!(out, "{mask},{}", table.value(mask))?;
            }
        }
        Command::Shapley(common) => {
            let (instance, reports) = load(&common)?;
            let limit = cap(common.allow_large);
            if instance.player_count() > limit {
                return Err(Error::CapExceeded { what: "instance", n: instance.player_count(), cap: limit });
            }
            rewards_csv(&mut out, "shapley", &shapley_values(&instance, &reports)?)?;
        }
        Command::Reward { common, mechanism, realization, expected } => {
            let (instance, reports) = load(&common)?;
            let eval = Evaluator::with_cap(&instance, &reports, cap(common.allow_large))?;
            let x = match (realization, expected) {
                (_, true) => eval.expected(mechanism)?,
                (Some(r), false) => eval.realized(mechanism, &r)?,
                (None, false) if mechanism == MechanismKind::Shapley => eval.expected(mechanism)?,
                (None, false) => {
                    return Err(Error::InvalidConfig("give --realization or --expected".into()));
                }
            };
            rewards_csv(&mut out, "reward", &x)?;
        }
        Command::Deviate { common, player, mechanism, seed, count } => {
            let (instance, reports) = load(&common)?;
            if common.reports.is_some() && reports != ReportProfile::truthful(&instance) {
                return Err(Error::InvalidConfig("deviate compares against truthful reports; drop --reports".into()));
            }
            let family = standard_misreport_family(&instance, player, seed, count)?;
            let report = deviation_search_with_cap(&instance, player, mechanism, &family, cap(common.allow_large))?;
            let mut value = serde_json::to_value(&report).expect("report serializes");
            value["profitable"] = json!(report.profitable());
            print_json(&mut out, &value)?;
        }
        Command::Bounds { n, m, k } => {
            let (argmax, factor) = sevb_bound_argmax(n, m)?;
            let mut value = json!({
                "n": n,
                "m": m,
                "argmax_k": argmax,
                "factor": factor,
                "factor_decimal": factor.to_decimal(6),
            });
            if let Some(k) = k {
                let scenario = BoundScenario::new(n, m, k, Rational::one(), Rational::zero())?;
                value["closed_forms"] =
                    serde_json::to_value(appendix_closed_forms(&scenario)?).expect("forms serialize");
            }
            print_json(&mut out, &value)?;
        }
        Command::Experiment {
            groups,
            support,
            instances,
            seed,
            deadline,
            mechanisms,
            uniform_pmf,
            allow_large,
            out: path,
        } => {
            let mut config = ExperimentConfig::new(groups, support, instances, seed);
            config.deadline = deadline;
            config.mechanisms = mechanisms;
            config.player_cap = cap(allow_large);
            if uniform_pmf {
                config.style = PmfStyle::Uniform;
            }
            let rows = run_experiment(&config)?;
            match path {
                Some(path) => write_csv(&rows, fs::File::create(path)?)?,
                None => write_csv(&rows, &mut out)?,
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
