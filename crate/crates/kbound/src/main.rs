//! `kbound` — certified spectral upper bounds on the k-independence number.

use clap::{Args, Parser, Subcommand};
use kbound::formats::GraphFormat;
use kbound::poly::{parse_field_poly, PolySpec};
use kbound::report::OutputFormat;
use kbound::runner::{
    run, CliError, CommandKind, DiagSpec, ExactQuantity, MethodSel, RunConfig, EXIT_INPUT,
};
use kbound_core::bounds::Tolerances;
use kbound_core::exact;
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "kbound",
    version,
    about = "Certified spectral and algebraic upper bounds on the k-independence number"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute bounds on one graph.
    Bound(BoundArgs),
    /// Run the exact oracles on one graph.
    Exact(ExactArgs),
    /// Compute bounds and the exact value, reporting the gap.
    Compare(BoundArgs),
    /// Map `compare` over a multi-graph graph6 file and append summary
    /// statistics.
    Batch(BatchArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Graph file (graph6, edge list, or DIMACS).
    input: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long)]
    format: Option<String>,
    /// Distance radius k.
    #[arg(short, long)]
    k: usize,
    /// Output format.
    #[arg(long, default_value = "table")]
    output: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// PSD tolerance (relative); KBOUND_TOL overrides the default.
    #[arg(long)]
    psd_tol: Option<f64>,
    /// Eigenvalue clustering tolerance (absolute).
    #[arg(long)]
    cluster_tol: Option<f64>,
    /// Node budget for the exact oracles.
    #[arg(long, default_value_t = exact::DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated methods: framework,eigenpoly,optlp,ratio,minor,
    /// laplacian,minrank,theta,walkratio,chik,chikprime.
    #[arg(long, required = true)]
    methods: String,
    /// Polynomial: preset (xk, xk+xk-1, lmin, cheb), expression (x2+x,
    /// x3+ax2+bx), or comma coefficients lowest degree first.
    #[arg(long, default_value = "xk")]
    poly: String,
    /// Named parameter binding for --poly, e.g. --param a=1.5 (repeatable).
    #[arg(long, value_name = "NAME=VALUE")]
    param: Vec<String>,
    /// Prime field characteristic for minrank.
    #[arg(long, default_value_t = 2)]
    field: u64,
    /// Diagonal for minrank: "ones" or comma-separated field elements.
    #[arg(long, default_value = "ones")]
    diag: String,
    /// Field polynomial for minrank (integer coefficients).
    #[arg(long, default_value = "x")]
    minrank_poly: String,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which oracle to run.
    #[arg(long, default_value = "alpha")]
    quantity: String,
}

#[derive(Args)]
struct BatchArgs {
    #[command(flatten)]
    bound: BoundArgs,
    /// Worker pool size (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
}

fn tolerances(common: &CommonArgs) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    if let Ok(env) = std::env::var("KBOUND_TOL") {
        tol.psd = env
            .parse()
            .map_err(|_| CliError::input(format!("KBOUND_TOL='{env}' is not a number")))?;
    }
    if let Some(psd) = common.psd_tol {
        tol.psd = psd;
    }
    if let Some(cluster) = common.cluster_tol {
        tol.cluster = cluster;
    }
    Ok(tol)
}

fn parse_format(common: &CommonArgs) -> Result<Option<GraphFormat>, CliError> {
    common
        .format
        .as_deref()
        .map(|name| {
            GraphFormat::from_name(name)
                .ok_or_else(|| CliError::input(format!("unknown format '{name}'")))
        })
        .transpose()
}

fn parse_params(specs: &[String]) -> Result<HashMap<char, f64>, CliError> {
    let mut params = HashMap::new();
    for spec in specs {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| CliError::input(format!("--param '{spec}' is not NAME=VALUE")))?;
        let mut chars = name.trim().chars();
        let (Some(c), None) = (chars.next(), chars.next()) else {
            return Err(CliError::input(format!(
                "parameter name '{name}' must be a single letter"
            )));
        };
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::input(format!("parameter value '{value}' is not a number")))?;
        params.insert(c, v);
    }
    Ok(params)
}

fn parse_diag(spec: &str) -> Result<DiagSpec, CliError> {
    if spec == "ones" {
        return Ok(DiagSpec::Ones);
    }
    let values = spec
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| CliError::input(format!("bad diagonal entry '{}'", t.trim())))
        })
        .collect::<Result<Vec<u64>, CliError>>()?;
    Ok(DiagSpec::Values(values))
}

fn build_config(
    command: CommandKind,
    args: &BoundArgs,
    jobs: Option<usize>,
) -> Result<RunConfig, CliError> {
    if args.common.k == 0 {
        return Err(CliError::input("k must be at least 1".into()));
    }
    Ok(RunConfig {
        command,
        input: args.common.input.clone(),
        format: parse_format(&args.common)?,
        k: args.common.k,
        methods: MethodSel::parse_list(&args.methods).map_err(CliError::input)?,
        poly: PolySpec::parse(&args.poly).map_err(CliError::input)?,
        params: parse_params(&args.param)?,
        field: args.field,
        diag: parse_diag(&args.diag)?,
        field_poly: parse_field_poly(&args.minrank_poly).map_err(CliError::input)?,
        tol: tolerances(&args.common)?,
        budget: args.common.budget,
        quantity: ExactQuantity::Alpha,
        output: output_format(&args.common)?,
        out: args.common.out.clone(),
        jobs,
    })
}

fn output_format(common: &CommonArgs) -> Result<OutputFormat, CliError> {
    OutputFormat::from_name(&common.output)
        .ok_or_else(|| CliError::input(format!("unknown output format '{}'", common.output)))
}

fn exact_config(args: &ExactArgs) -> Result<RunConfig, CliError> {
    if args.common.k == 0 {
        return Err(CliError::input("k must be at least 1".into()));
    }
    let quantity = match args.quantity.as_str() {
        "alpha" => ExactQuantity::Alpha,
        "chi" => ExactQuantity::Chi,
        "both" => ExactQuantity::Both,
        other => {
            return Err(CliError::input(format!(
                "unknown quantity '{other}' (alpha|chi|both)"
            )))
        }
    };
    Ok(RunConfig {
        command: CommandKind::Exact,
        input: args.common.input.clone(),
        format: parse_format(&args.common)?,
        k: args.common.k,
        methods: Vec::new(),
        poly: PolySpec::Preset("xk".into()),
        params: HashMap::new(),
        field: 2,
        diag: DiagSpec::Ones,
        field_poly: vec![0, 1],
        tol: tolerances(&args.common)?,
        budget: args.common.budget,
        quantity,
        output: output_format(&args.common)?,
        out: args.common.out.clone(),
        jobs: None,
    })
}

fn execute() -> Result<(), CliError> {
    let cli = Cli::parse();
    let config = match &cli.command {
        Command::Bound(args) => build_config(CommandKind::Bound, args, None)?,
        Command::Compare(args) => build_config(CommandKind::Compare, args, None)?,
        Command::Batch(args) => build_config(CommandKind::Batch, &args.bound, args.jobs)?,
        Command::Exact(args) => exact_config(args)?,
    };
    match &config.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            let mut writer = BufWriter::new(file);
            run(&config, &mut writer)?;
            writer
                .flush()
                .map_err(|e| CliError::input(format!("write failed: {e}")))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            run(&config, &mut lock)
        }
    }
}

fn main() -> ExitCode {
    match execute() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = serde_json::json!({ "error": &e });
            eprintln!("{record}");
            let code = u8::try_from(e.code).unwrap_or(EXIT_INPUT as u8);
            ExitCode::from(code)
        }
    }
}
