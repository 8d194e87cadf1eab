use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use xychain::oracle::{equivalence_check, CheckOptions};
use xychain::sweep::{emit, write_csv, write_trace_csv};
use xychain::{
    linspace, max_concurrence_trace, run, sample_field, Boundary, ChainSpec, Config, DisorderSpec,
    Regime, SigmaConvention, SweepResult, SweepSpec,
};

/// Pairwise concurrence of the isotropic XY chain.
#[derive(Parser, Debug)]
#[command(name = "xychain", version, about)]
struct Cli {
    /// Worker threads for the disorder average (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Clean chain in its ground state.
    Uniform(SweepArgs),
    /// Clean chain at temperature --kt.
    Thermal(SweepArgs),
    /// Random fields in the ground state, averaged over --samples realizations.
    Random(SweepArgs),
    /// Maximum of C(r) over h for a family of sweeps in `a` or `kT`.
    Maxtrace(TraceArgs),
    /// Compare the free-fermion pipeline with exact diagonalization.
    #[command(hide = true)]
    OracleCheck(OracleArgs),
    /// Print the field of one disorder sample.
    #[command(hide = true)]
    DumpFields(DumpArgs),
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    /// TOML file with [chain], [disorder] and [sweep]; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n_sites: Option<usize>,
    #[arg(long)]
    coupling: Option<f64>,
    #[arg(long, value_enum)]
    boundary: Option<BoundaryArg>,
    #[arg(long)]
    kt: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    sigma_convention: Option<ConventionArg>,
    #[arg(long, allow_negative_numbers = true)]
    h_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    h_max: Option<f64>,
    #[arg(long)]
    h_steps: Option<usize>,
    /// Explicit comma-separated grid, instead of --h-min/--h-max/--h-steps.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with_all = ["h_min", "h_max", "h_steps"])]
    h_list: Option<Vec<f64>>,
    #[arg(long)]
    r_max: Option<usize>,
    /// Clean regimes: use the finite chain instead of the infinite-chain limit.
    #[arg(long)]
    finite_chain: bool,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a matplotlib script next to --out.
    #[arg(long, requires = "out")]
    emit_plot_script: bool,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Control parameter varied across the family.
    #[arg(long, value_enum)]
    over: Control,
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    /// Separation whose maximum is traced.
    #[arg(long, default_value_t = 3)]
    r: usize,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, default_value_t = 216)]
    instances: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Args, Debug)]
struct DumpArgs {
    #[arg(long, default_value_t = 100)]
    n_sites: usize,
    #[arg(long)]
    q: f64,
    #[arg(long)]
    a: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    sample_index: u64,
    #[arg(long, value_enum, default_value_t = ConventionArg::Literal)]
    sigma_convention: ConventionArg,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum BoundaryArg {
    Periodic,
    Open,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ConventionArg {
    Literal,
    Prose,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum Control {
    A,
    Kt,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Periodic => Boundary::Periodic,
            BoundaryArg::Open => Boundary::Open,
        }
    }
}

impl From<ConventionArg> for SigmaConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Literal => SigmaConvention::Literal,
            ConventionArg::Prose => SigmaConvention::Prose,
        }
    }
}

const DEFAULT_SITES: usize = 100;
const DEFAULT_SAMPLES: u64 = 1000;

/// Builds the configuration for `regime` from an optional file plus flags.
fn build_config(args: &SweepArgs, regime: Regime) -> anyhow::Result<Config> {
    let mut config = match &args.config {
        Some(path) => {
            Config::from_file(path).with_context(|| format!("reading {}", path.display()))?
        }
        None => Config {
            chain: ChainSpec::new(DEFAULT_SITES),
            disorder: None,
            // 40 points never land on h = 1 exactly.
            sweep: SweepSpec::new(regime, linspace(0.0, 2.0, 40)),
        },
    };
    config.sweep.regime = regime;

    let chain = &mut config.chain;
    if let Some(n) = args.n_sites {
        chain.n_sites = n;
    }
    if let Some(j) = args.coupling {
        chain.coupling = j;
    }
    if let Some(b) = args.boundary {
        chain.boundary = b.into();
    }
    if let Some(kt) = args.kt {
        chain.temperature = kt;
    }
    if regime != Regime::UniformFiniteT && args.kt.is_none() {
        chain.temperature = 0.0;
    }

    if regime == Regime::RandomZeroT {
        let d = config
            .disorder
            .get_or_insert_with(|| DisorderSpec::new(1.0, 0.0, DEFAULT_SAMPLES, 0));
        if let Some(q) = args.q {
            d.q = q;
        }
        if let Some(a) = args.a {
            d.scale_a = a;
        }
        if let Some(n) = args.samples {
            d.n_samples = n;
        }
        if let Some(seed) = args.seed {
            d.master_seed = seed;
        }
        if let Some(c) = args.sigma_convention {
            d.sigma_convention = c.into();
        }
    } else if args.q.is_some()
        || args.a.is_some()
        || args.samples.is_some()
        || args.seed.is_some()
        || args.sigma_convention.is_some()
    {
        bail!("--q, --a, --samples, --seed and --sigma-convention apply to the random regime only");
    }

    let sweep = &mut config.sweep;
    if let Some(list) = &args.h_list {
        sweep.h_grid = list.clone();
    } else if args.h_min.is_some() || args.h_max.is_some() || args.h_steps.is_some() {
        let (lo, hi) = match (sweep.h_grid.first(), sweep.h_grid.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (0.0, 2.0),
        };
        let steps = args.h_steps.unwrap_or(sweep.h_grid.len().max(2));
        sweep.h_grid = linspace(args.h_min.unwrap_or(lo), args.h_max.unwrap_or(hi), steps);
    }
    if let Some(r) = args.r_max {
        sweep.r_max = r;
    }
    if args.finite_chain {
        sweep.finite_chain = true;
    }
    Ok(config.validate()?)
}

fn write_result(result: &SweepResult, args: &SweepArgs) -> anyhow::Result<()> {
    match &args.out {
        Some(path) => {
            emit(result, path, args.emit_plot_script)?;
            eprintln!("wrote {} rows to {}", result.rows.len(), path.display());
        }
        None => write_csv(result, std::io::stdout().lock())?,
    }
    Ok(())
}

fn sweep(args: &SweepArgs, regime: Regime) -> anyhow::Result<()> {
    let config = build_config(args, regime)?;
    let result = run(&config)?;
    if result.parity_fixups > 0 {
        eprintln!(
            "note: {} ground states needed a parity fix-up",
            result.parity_fixups
        );
    }
    write_result(&result, args)
}

fn maxtrace(args: &TraceArgs) -> anyhow::Result<()> {
    let mut results = Vec::with_capacity(args.values.len());
    for &value in &args.values {
        let mut member = args.sweep.clone();
        let regime = match args.over {
            Control::A => {
                member.a = Some(value);
                Regime::RandomZeroT
            }
            Control::Kt if value == 0.0 => {
                member.kt = None;
                Regime::UniformZeroT
            }
            Control::Kt => {
                member.kt = Some(value);
                Regime::UniformFiniteT
            }
        };
        let config = build_config(&member, regime)?;
        if args.r > config.sweep.r_max {
            bail!("--r {} exceeds r_max {}", args.r, config.sweep.r_max);
        }
        eprintln!("{:?} = {value}", args.over);
        results.push((value, run(&config)?));
    }
    let family: Vec<(f64, &SweepResult)> = results.iter().map(|(v, r)| (*v, r)).collect();
    let trace = max_concurrence_trace(&family, args.r)?;
    match &args.sweep.out {
        Some(path) => write_trace_csv(&trace, std::fs::File::create(path)?)?,
        None => write_trace_csv(&trace, std::io::stdout().lock())?,
    }
    Ok(())
}

fn oracle_check(args: &OracleArgs) -> anyhow::Result<bool> {
    let opts = CheckOptions {
        instances: args.instances,
        seed: args.seed,
        ..CheckOptions::default()
    };
    let report = equivalence_check(&opts)?;
    let pairs: usize = report.instances.iter().map(|i| i.pairs).sum();
    println!("instances            {}", report.instances.len());
    println!("pairs                {pairs}");
    println!("resampled            {}", report.resampled);
    println!(
        "max |dC|             {:.3e}",
        report.max_concurrence_error()
    );
    println!("max |d correlator|   {:.3e}", report.max_correlator_error());
    println!("max |d E0|           {:.3e}", report.max_energy_error());
    let ok = report.max_concurrence_error() <= args.tolerance
        && report.max_energy_error() <= args.tolerance;
    println!("{}", if ok { "agree" } else { "DISAGREE" });
    Ok(ok)
}

fn dump_fields(args: &DumpArgs) -> anyhow::Result<()> {
    let mut disorder = DisorderSpec::new(args.q, args.a, u64::MAX, args.seed);
    disorder.sigma_convention = args.sigma_convention.into();
    disorder.validate()?;
    let field = sample_field(&disorder, args.n_sites, args.sample_index)?;
    let mut out = std::io::stdout().lock();
    for (j, h) in field.values.iter().enumerate() {
        writeln!(out, "{j}\t{h}")?;
    }
    Ok(())
}

fn configure_threads(threads: Option<usize>) -> anyhow::Result<()> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads(cli.threads).and_then(|()| match &cli.command {
        Command::Uniform(args) => sweep(args, Regime::UniformZeroT).map(|()| true),
        Command::Thermal(args) => sweep(args, Regime::UniformFiniteT).map(|()| true),
        Command::Random(args) => sweep(args, Regime::RandomZeroT).map(|()| true),
        Command::Maxtrace(args) => maxtrace(args).map(|()| true),
        Command::OracleCheck(args) => oracle_check(args),
        Command::DumpFields(args) => dump_fields(args).map(|()| true),
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
