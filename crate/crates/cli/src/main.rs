use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use formbound_cli::export::ALL_FIELDS;
use formbound_cli::{emit_pointwise_csv, load_scenario, midpoint_grid, run, CsvField, DirectionChoice, RunOptions};

#[derive(Parser)]
#[command(name = "certify", version, about = "Certify L^p bounds for pushforwards and pullbacks of differential forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (direction, k, p) certificate of a scenario file.
    Run {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = DirectionChoice::Both)]
        direction: DirectionChoice,
        /// Quadrature order m (the budget compares m with 2m).
        #[arg(long)]
        order: Option<usize>,
        /// Halton points per chart for sup estimates.
        #[arg(long)]
        samples: Option<usize>,
        /// JSON report path. Defaults to $CERTIFY_OUT_DIR/<name>.json, or stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write pointwise fields on a grid over the source chart.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Comma-separated CSV columns: alpha_i, beta_i, jacobian, pointwise_norm, factor_integrands.
        #[arg(long, value_delimiter = ',', value_parser = parse_field)]
        fields: Vec<CsvField>,
        /// Grid points per axis for the CSV export.
        #[arg(long, default_value_t = 16)]
        grid: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_field(s: &str) -> Result<CsvField, String> {
    s.parse()
}

fn main() -> ExitCode {
    let Command::Run { scenario, direction, order, samples, out, csv, fields, grid, seed } = Cli::parse().command;
    let scenario = match load_scenario(&scenario) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", scenario.display());
            return ExitCode::from(2);
        }
    };
    let report = run(&scenario, &RunOptions { direction, order, samples, seed });
    let out = out.or_else(|| {
        std::env::var_os(formbound_cli::OUT_DIR_ENV).map(|d| PathBuf::from(d).join(format!("{}.json", scenario.name())))
    });
    match &out {
        Some(path) => {
            if let Err(e) = report.write(path) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
        None => print!("{}", report.to_json()),
    }
    if let Some(path) = csv {
        let fields = if fields.is_empty() { ALL_FIELDS.to_vec() } else { fields };
        let points = midpoint_grid(scenario.phi.source(), grid.max(1));
        if let Err(e) = emit_pointwise_csv(&scenario, &fields, &points, &path) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    let s = report.summary;
    eprintln!("{}: {} certificates, {} passed, {} failed, {} errors", scenario.name(), s.total, s.passed, s.failed, s.errors);
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
