use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dirrho::exact::{exact_rho_many, IntegratorMethod};
use dirrho::io::{
    estimate_dataset, ingest_csv, write_data_csv, ColumnSelector, CsvOptions, ExactReport, OutputFormat,
    OutputSpec, DEFAULT_PRECISION,
};
use dirrho::seed::stream;
use dirrho::simulation::{run_decomposition_table, run_plan, Preset, ReplicationPlan, DEFAULT_REPLICATES};
use dirrho::{all_directions, CopulaFamily, CopulaModel, Direction, Error, IntegratorConfig, Result, TiePolicy};

/// Directional rho-coefficients of multivariate dependence.
#[derive(Parser)]
#[command(name = "dirrho", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate directional coefficients from a CSV of raw observations.
    Estimate(EstimateArgs),
    /// Population coefficients of a copula model.
    Exact(ExactArgs),
    /// Replicated estimates against population values.
    Simulate(SimulateArgs),
    /// Draw a synthetic sample from a copula model as CSV.
    Sample(SampleArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// csv, json or table.
    #[arg(long, default_value = "table", value_parser = parse_format)]
    format: OutputFormat,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Decimal places in csv and table output.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
}

impl OutputArgs {
    fn spec(&self) -> Result<OutputSpec> {
        OutputSpec::new(self.format, self.output.clone(), self.precision)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Ties {
    Stable,
    Random,
}

#[derive(Args)]
struct EstimateArgs {
    file: PathBuf,
    /// The first line holds data, not column names.
    #[arg(long)]
    no_header: bool,
    #[arg(long, default_value = ",")]
    delimiter: char,
    /// Columns to use, by name or 1-based position, comma separated.
    #[arg(long, value_delimiter = ',')]
    columns: Option<Vec<String>>,
    /// Direction as `-++` or `(-1,1,1)`; repeat for several. Default: all 2^d.
    #[arg(long = "direction", short = 'a', allow_hyphen_values = true)]
    directions: Vec<String>,
    /// Estimate all directions even above 16 columns.
    #[arg(long)]
    allow_large: bool,
    #[arg(long, value_enum, default_value = "stable")]
    ties: Ties,
    /// Seed for random tie-breaking.
    #[arg(long, env = "DIRRHO_SEED", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Quadrature,
    MonteCarlo,
}

#[derive(Args)]
struct ExactArgs {
    /// Model spec, e.g. `clayton:theta=1.0:d=3` or `fgm:lambda=0.6:d=3`.
    model: String,
    /// Direction as `-++` or `(-1,1,1)`; repeat for several.
    #[arg(long = "direction", short = 'a', allow_hyphen_values = true, conflicts_with = "all")]
    directions: Vec<String>,
    /// Every direction (the default when none is given).
    #[arg(long)]
    all: bool,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    /// Gauss-Legendre nodes per dimension.
    #[arg(long)]
    nodes: Option<usize>,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    /// Fail when the estimated integration error exceeds this.
    #[arg(long)]
    target_error: Option<f64>,
    #[arg(long, env = "DIRRHO_SEED", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SimulateArgs {
    /// table1, table2, table3 or table4.
    #[arg(long, conflicts_with_all = ["family", "dim", "params", "sizes", "directions"])]
    preset: Option<String>,
    #[arg(long, value_parser = parse_family)]
    family: Option<CopulaFamily>,
    #[arg(long)]
    dim: Option<usize>,
    /// Parameter grid, comma separated.
    #[arg(long, value_delimiter = ',')]
    params: Vec<f64>,
    /// Sample sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Direction as `-++` or `(-1,1,1)`; repeat for several.
    #[arg(long = "direction", short = 'a', allow_hyphen_values = true)]
    directions: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    reps: usize,
    #[arg(long, env = "DIRRHO_SEED", default_value_t = 0)]
    seed: u64,
    /// Also run the decomposed estimator on every replicate.
    #[arg(long)]
    decomposed: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SampleArgs {
    /// Model spec, e.g. `clayton:theta=1.0:d=3`.
    model: String,
    /// Number of rows.
    #[arg(long, short)]
    n: usize,
    #[arg(long, env = "DIRRHO_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn parse_format(s: &str) -> std::result::Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_family(s: &str) -> std::result::Result<CopulaFamily, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_directions(raw: &[String]) -> Result<Vec<Direction>> {
    raw.iter().map(|s| s.parse()).collect()
}

fn render(
    out: &OutputArgs,
    csv: impl FnOnce(usize) -> Result<String>,
    json: impl FnOnce() -> Result<String>,
    text: impl FnOnce(usize) -> String,
) -> Result<()> {
    let spec = out.spec()?;
    let p = spec.precision();
    let mut content = match spec.format {
        OutputFormat::Csv => csv(p)?,
        OutputFormat::Json => json()?,
        OutputFormat::Table => text(p),
    };
    if !content.ends_with('\n') {
        content.push('\n');
    }
    spec.emit(&content)
}

fn estimate(args: EstimateArgs) -> Result<()> {
    let delimiter = u8::try_from(args.delimiter)
        .map_err(|_| Error::Parameter("delimiter must be a single-byte character".into()))?;
    let columns = args
        .columns
        .map(|cols| cols.iter().map(|c| c.parse::<ColumnSelector>()).collect::<Result<Vec<_>>>())
        .transpose()?;
    let options = CsvOptions {
        header: !args.no_header,
        delimiter,
        columns,
    };
    let dataset = ingest_csv(&args.file, &options)?;
    let directions = parse_directions(&args.directions)?;
    let policy = match args.ties {
        Ties::Stable => TiePolicy::Stable,
        Ties::Random => TiePolicy::Random { seed: args.seed },
    };
    let report = estimate_dataset(
        &dataset,
        (!directions.is_empty()).then_some(directions.as_slice()),
        policy,
        args.allow_large,
    )?;
    if args.out.format == OutputFormat::Csv {
        for note in report.notes(args.out.precision) {
            eprintln!("{note}");
        }
    } else if report.tie_count > 0 && args.out.format == OutputFormat::Json {
        eprintln!("warning: {} ties broken while ranking", report.tie_count);
    }
    render(&args.out, |p| report.to_csv(p), || report.to_json(), |p| report.to_text(p))
}

fn exact(args: ExactArgs) -> Result<()> {
    let model: CopulaModel = args.model.parse()?;
    let directions = if args.directions.is_empty() {
        all_directions(model.dim())?
    } else {
        parse_directions(&args.directions)?
    };
    let cfg = IntegratorConfig {
        method: match args.method {
            MethodArg::Auto => IntegratorMethod::Auto,
            MethodArg::Quadrature => IntegratorMethod::GaussLegendre,
            MethodArg::MonteCarlo => IntegratorMethod::MonteCarlo,
        },
        nodes_per_dim: args.nodes,
        sample_count: args.samples,
        seed: args.seed,
        target_error: args.target_error,
    };
    let coefficients = exact_rho_many(&model, &directions, &cfg)?;
    let report = ExactReport::new(model, coefficients);
    render(&args.out, |p| report.to_csv(p), || report.to_json(), |p| report.to_text(p))
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let (plan, table) = match &args.preset {
        Some(name) => {
            let preset: Preset = name.parse()?;
            (preset.plan(args.seed), preset.is_decomposition_table())
        }
        None => {
            let family = args
                .family
                .ok_or_else(|| Error::Plan("give --preset or --family".into()))?;
            let directions = parse_directions(&args.directions)?;
            let dim = match (args.dim, directions.first()) {
                (Some(d), _) => d,
                (None, Some(a)) => a.dim(),
                (None, None) => return Err(Error::Plan("give --dim or --direction".into())),
            };
            let directions = if directions.is_empty() { all_directions(dim)? } else { directions };
            let sizes = if args.sizes.is_empty() { vec![20, 50, 100, 500] } else { args.sizes.clone() };
            let plan = ReplicationPlan::new(family, dim, args.params.clone(), sizes, directions, args.seed);
            (plan, false)
        }
    };
    let decomposed = plan.decomposed || args.decomposed;
    let plan = plan.with_replicates(args.reps).with_decomposed(decomposed);
    if table {
        let t = run_decomposition_table(&plan)?;
        render(&args.out, |p| t.to_csv(p), || t.to_json(), |p| t.to_text(p))
    } else {
        let r = run_plan(&plan)?;
        render(&args.out, |p| r.to_csv(p), || r.to_json(), |p| r.to_text(p))
    }
}

fn sample(args: SampleArgs) -> Result<()> {
    let model: CopulaModel = args.model.parse()?;
    let data = model.sample(args.n, &mut stream(args.seed, &[]))?;
    match args.output {
        Some(path) => write_data_csv(&data, std::fs::File::create(path)?),
        None => write_data_csv(&data, std::io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Estimate(a) => estimate(a),
        Command::Exact(a) => exact(a),
        Command::Simulate(a) => simulate(a),
        Command::Sample(a) => sample(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
