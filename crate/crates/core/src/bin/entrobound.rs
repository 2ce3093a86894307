use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use entrobound::harness::{
    builtin_discrimination_scenario, emit_report, load_scenario, run_campaign, verify_scenario,
    CampaignCheck, CampaignConfig, EnsembleKind, ReportFormat, RunReport,
};
use entrobound::measurement::Measurement;
use entrobound::naimark::{dilate, verify_dilation, DilationReport};
use entrobound::{Error, RenyiOrder};

const SEED_VAR: &str = "ENTROBOUND_SEED";

#[derive(Parser)]
#[command(
    name = "entrobound",
    version,
    about = "Rényi-entropy uncertainty bounds for quantum measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Report format: human or json.
    #[arg(long, default_value = "human", value_parser = parse_with::<ReportFormat>)]
    format: ReportFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check in a scenario file.
    Verify {
        scenario: PathBuf,
        /// Slack tolerance for all inequalities.
        #[arg(long)]
        tolerance: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Sample random instances and check the relations on each.
    Campaign(CampaignArgs),
    /// Build the Naimark dilation of one measurement of a scenario.
    Dilate {
        scenario: PathBuf,
        #[arg(long)]
        measurement: String,
        /// Measurement to extend alongside; defaults to the computational basis.
        #[arg(long)]
        companion: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Run the built-in two-state discrimination suite.
    PaperRegression {
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct CampaignArgs {
    /// JSON campaign config; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Dimension or inclusive range, e.g. `2` or `2..4`.
    #[arg(long, value_parser = parse_range)]
    dim: Option<[usize; 2]>,
    /// Outcome count or inclusive range.
    #[arg(long, value_parser = parse_range)]
    outcomes: Option<[usize; 2]>,
    /// Comma-separated families: pure-haar, mixed, rank-one-povm, general-povm, pvm.
    #[arg(long, value_delimiter = ',', value_parser = parse_with::<EnsembleKind>)]
    ensemble: Option<Vec<EnsembleKind>>,
    /// Comma-separated checks: pair, single, free-order, saturation, dilation, riesz.
    #[arg(long, value_delimiter = ',', value_parser = parse_with::<CampaignCheck>)]
    checks: Option<Vec<CampaignCheck>>,
    /// Orders for the conjugate-pair relations.
    #[arg(long, value_delimiter = ',', value_parser = parse_with::<RenyiOrder>)]
    orders: Option<Vec<RenyiOrder>>,
    /// Orders for the single-measurement relations.
    #[arg(long, value_delimiter = ',', value_parser = parse_with::<RenyiOrder>)]
    single_orders: Option<Vec<RenyiOrder>>,
    #[command(flatten)]
    output: Output,
}

fn parse_with<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> Result<[usize; 2], String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
    match s.split_once("..").or_else(|| s.split_once('-')) {
        Some((lo, hi)) => Ok([num(lo)?, num(hi.trim_start_matches('='))?]),
        None => {
            let v = num(s)?;
            Ok([v, v])
        }
    }
}

fn campaign_config(args: &CampaignArgs) -> Result<CampaignConfig, Error> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
        }
        None => CampaignConfig::default(),
    };
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if let Some(v) = args.trials {
        config.trials = v;
    }
    if let Some(v) = args.dim {
        config.dimensions = v;
    }
    if let Some(v) = args.outcomes {
        config.outcomes = v;
    }
    if let Some(v) = &args.ensemble {
        config.ensembles = v.clone();
    }
    if let Some(v) = &args.checks {
        config.checks = v.clone();
    }
    if let Some(v) = &args.orders {
        config.pair_orders = v.clone();
    }
    if let Some(v) = &args.single_orders {
        config.single_orders = v.clone();
    }
    if let Ok(seed) = std::env::var(SEED_VAR) {
        config.seed = seed
            .trim()
            .parse()
            .map_err(|e| Error::InvalidParameter(format!("{SEED_VAR}={seed:?}: {e}")))?;
    }
    Ok(config)
}

#[derive(Serialize)]
struct DilationOutput<'a> {
    measurement: &'a str,
    original_dim: usize,
    enlarged_dim: usize,
    projectors: Vec<Vec<Vec<[f64; 2]>>>,
    embedding_unitary: Vec<Vec<[f64; 2]>>,
    report: &'a DilationReport,
}

fn run_dilate(
    path: &PathBuf,
    name: &str,
    companion: Option<&str>,
    format: ReportFormat,
) -> Result<(String, bool), Error> {
    let scenario = load_scenario(path)?;
    let e = scenario.measurement(name)?;
    let g = match companion {
        Some(c) => scenario.measurement(c)?.clone(),
        None => Measurement::computational_basis(e.dim()),
    };
    let states: Vec<_> = scenario
        .states
        .iter()
        .flat_map(|s| s.value.pure_components())
        .collect();
    let dilation = dilate(e)?;
    let mut report = verify_dilation(&dilation, &g, &states)?;
    report.tolerance = scenario.tolerances.dilation;
    let out = DilationOutput {
        measurement: name,
        original_dim: dilation.original_dim(),
        enlarged_dim: dilation.enlarged_dim(),
        projectors: dilation
            .projectors()
            .elements()
            .iter()
            .map(|p| p.matrix().to_nested())
            .collect(),
        embedding_unitary: dilation.embedding_unitary().to_nested(),
        report: &report,
    };
    let text = match format {
        ReportFormat::Json => serde_json::to_string_pretty(&out).expect("serializable") + "\n",
        ReportFormat::Human => {
            let mut s = format!(
                "dilation of {name}: dimension {} -> {}, {} projectors\n",
                out.original_dim,
                out.enlarged_dim,
                dilation.projectors().outcome_count()
            );
            for (label, p) in e.labels().iter().zip(dilation.projectors().elements()) {
                s += &format!("{label}~ =\n{:?}\n", p.matrix());
            }
            s += &format!(
                "projector residual {:.3e}\ncompleteness residual {:.3e}\ncorner-block residual {:.3e}\n",
                report.projector_residual, report.completeness_residual, report.corner_block_residual
            );
            for (i, st) in report.states.iter().enumerate() {
                s += &format!(
                    "state {i}: max preservation residual {:.3e}; image-norm gaps {:?}\n",
                    st.max_residual(),
                    st.image_norm_gaps
                );
            }
            s += &format!(
                "verdict: {}\n",
                if report.passed() { "pass" } else { "FAIL" }
            );
            s
        }
    };
    Ok((text, report.passed()))
}

fn finish(report: &RunReport, format: ReportFormat) -> ExitCode {
    print!("{}", emit_report(report, format));
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify {
            scenario,
            tolerance,
            output,
        } => {
            load_scenario(&scenario).map(|s| finish(&verify_scenario(&s, tolerance), output.format))
        }
        Command::Campaign(args) => campaign_config(&args)
            .and_then(|c| run_campaign(&c))
            .map(|r| finish(&r, args.output.format)),
        Command::Dilate {
            scenario,
            measurement,
            companion,
            output,
        } => run_dilate(&scenario, &measurement, companion.as_deref(), output.format).map(
            |(text, ok)| {
                print!("{text}");
                if ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            },
        ),
        Command::PaperRegression { output } => Ok(finish(
            &verify_scenario(&builtin_discrimination_scenario(), None),
            output.format,
        )),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
