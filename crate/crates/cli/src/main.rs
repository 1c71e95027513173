mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

const AFTER_HELP: &str = concat!(
    "Framework / algebra pairs:\n",
    "  classical -> boolean\n",
    "  lp        -> priest\n",
    "  dist      -> product | sproduct | ltn:p=<p> | ltnq:q=<q> | stl:r=<r>\n",
    "  sampler   -> lifted boolean connectives; aggregators product | sproduct | ltn:p=<p> | ltnq:q=<q>\n",
    "\n",
    "Exit codes: 0 success, 1 usage or evaluation error, 2 selftest failure."
);

#[derive(Debug, Parser)]
#[command(name = "nesy", version, about = "Evaluate first-order sentences under monadic neurosymbolic semantics")]
#[command(after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a closed formula and print its value.
    #[command(after_help = AFTER_HELP)]
    Eval(EvalArgs),
    /// Apply an interpretation transformation and write the result.
    Transform(TransformArgs),
    /// Weighted model count of a formula over the interpretation's network.
    Wmc(WmcArgs),
    /// Run the randomized law and oracle suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
struct Inputs {
    /// Signature file (JSON).
    #[arg(long, value_name = "PATH")]
    sig: PathBuf,
    /// Interpretation file (JSON).
    #[arg(long, value_name = "PATH")]
    interp: PathBuf,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct FormulaSource {
    /// Formula text.
    #[arg(long, value_name = "STR")]
    formula: Option<String>,
    /// File holding the formula text.
    #[arg(long, value_name = "PATH")]
    formula_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Output {
    /// Print one space-separated key=value line with 17 significant digits.
    #[arg(long)]
    machine: bool,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Monad: classical, lp, dist or sampler.
    #[arg(long, value_name = "KIND")]
    framework: String,
    /// Truth algebra, e.g. product, sproduct, ltn:p=2, stl:r=1.
    #[arg(long, value_name = "STR")]
    algebra: Option<String>,
    #[command(flatten)]
    formula: FormulaSource,
    /// Monte Carlo draws (sampler only, required there).
    #[arg(long, value_name = "N")]
    samples: Option<usize>,
    /// Random seed (sampler only, required there).
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    /// Draws per element for quantifiers nested under a bind (sampler only).
    #[arg(long, value_name = "N")]
    inner_samples: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TransformName {
    Argmax,
}

#[derive(Debug, Args)]
struct TransformArgs {
    /// Transformation to apply.
    #[arg(value_enum)]
    name: TransformName,
    #[command(flatten)]
    inputs: Inputs,
    /// Where to write the transformed interpretation.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct WmcArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[command(flatten)]
    formula: FormulaSource,
    /// Also print the brute-force enumeration value.
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScopeArg {
    Laws,
    All,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    /// Which suites to run.
    #[arg(value_enum, default_value = "laws")]
    scope: ScopeArg,
    /// Seed for the random instances.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run only suites whose name contains this string.
    #[arg(long, value_name = "STR")]
    only: Option<String>,
    /// Test hook: corrupt the distribution bind so the monad laws fail.
    #[arg(long, hide = true)]
    break_dist_bind: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Eval(a) => commands::eval(a),
        Command::Transform(a) => commands::transform(a),
        Command::Wmc(a) => commands::wmc(a),
        Command::Selftest(a) => commands::selftest(a),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg.lines().collect::<Vec<_>>().join("; "));
            ExitCode::from(1)
        }
    }
}
