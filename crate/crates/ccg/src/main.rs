use std::path::PathBuf;
use std::process::ExitCode;

use ccg::commands::{self, Context, Outcome, RiskArgs};
use ccg::{CliError, Format, Scenario, EXIT_CHECK_FAILED};
use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "ccg", version, about = "Solve contest competition games")]
struct Args {
    /// Scenario file (JSON)
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,

    /// Tolerance for designer utility ties
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Seed for Monte-Carlo checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Monte-Carlo trials per quantity
    #[arg(long, global = true, default_value_t = ccg_core::oracle::DEFAULT_TRIALS)]
    trials: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gamma profile of a contest, or of every contest in the scenario
    Gamma {
        /// Tullock parameter; "inf" for the all-pay auction
        #[arg(long)]
        tullock: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        reward: f64,
        #[arg(long)]
        n: Option<usize>,
        /// Contest as a JSON object
        #[arg(long)]
        contest: Option<String>,
    },
    /// Participation equilibrium, utilities and welfare per profile
    Solve {
        /// Contest names or indices, one per designer (default: every profile)
        #[arg(long)]
        profile: Option<String>,
    },
    /// Designer equilibria and, for MDU games, the support characterization
    Equilibria,
    /// Dominance verdict for every designer and contest
    Dominance,
    /// Pareto optimality of a profile (default: of every equilibrium)
    Pareto {
        #[arg(long)]
        profile: Option<String>,
    },
    /// Welfare per profile and the welfare optimality checks
    Welfare {
        #[arg(long)]
        profile: Option<String>,
    },
    /// Best Tullock response with risk-averse contestants (unit rewards)
    Risk {
        /// Parameters to evaluate (default: grid on [0, 2])
        #[arg(long, value_delimiter = ',')]
        tau: Option<Vec<f64>>,
        #[arg(long, default_value_t = 2.0)]
        opponent_tau: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long)]
        n: Option<usize>,
        /// identity, quartic or {"poly": [a0, a1, ...]} (default: the scenario's)
        #[arg(long)]
        risk: Option<String>,
        /// Print every grid point
        #[arg(long)]
        curve: bool,
    },
    /// Pure participation equilibria at a profile
    PureNe {
        #[arg(long)]
        profile: Option<String>,
    },
    /// Monte-Carlo check of the analytic utilities at a profile
    Oracle {
        #[arg(long)]
        profile: Option<String>,
    },
    /// Recompute a worked example ("all" for every one)
    Reproduce { id: String },
}

fn run(args: &Args) -> Result<Outcome, CliError> {
    let scenario = match &args.scenario {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            Some(Scenario::from_json(&text)?)
        }
        None => None,
    };
    let ctx = Context {
        scenario,
        tol: args.tol,
        seed: args.seed,
        trials: args.trials,
    };
    match &args.command {
        Command::Gamma {
            tullock,
            reward,
            n,
            contest,
        } => commands::gamma(&ctx, tullock.as_deref(), *reward, *n, contest.as_deref()),
        Command::Solve { profile } => commands::solve(&ctx, profile.as_deref()),
        Command::Equilibria => commands::equilibria(&ctx),
        Command::Dominance => commands::dominance(&ctx),
        Command::Pareto { profile } => commands::pareto(&ctx, profile.as_deref()),
        Command::Welfare { profile } => commands::welfare(&ctx, profile.as_deref()),
        Command::Risk {
            tau,
            opponent_tau,
            step,
            n,
            risk,
            curve,
        } => commands::risk(
            &ctx,
            &RiskArgs {
                taus: tau.as_deref(),
                opponent_tau: *opponent_tau,
                step: *step,
                n: *n,
                risk: risk.as_deref(),
                curve: *curve,
            },
        ),
        Command::PureNe { profile } => commands::pure_ne(&ctx, profile.as_deref()),
        Command::Oracle { profile } => commands::oracle(&ctx, profile.as_deref()),
        Command::Reproduce { id } => commands::reproduce(id),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(out) => {
            print!("{}", out.report.render(args.format));
            if out.failed {
                ExitCode::from(EXIT_CHECK_FAILED as u8)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
