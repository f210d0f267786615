use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use combfilter::distance::{distance, ConvergenceParams, DistanceConfig, Metric};
use combfilter::experiment::{self, Algorithm, ExperimentParams, Suite};
use combfilter::filter::language_subset;
use combfilter::generators::{gen_annulus_single, gen_annulus_two_robot, gen_lcorridor, CorridorSpec};
use combfilter::io::{export_dot, read_filter, serialize_filter, write_filter};
use combfilter::rational::{format_decimal, parse_decimal, Rational};
use combfilter::reduce::GlobalParams;
use combfilter::{EditCosts, Filter};

/// Thread count for parallel work; defaults to one per core.
const THREADS_ENV: &str = "COMBFILTER_THREADS";

#[derive(Parser)]
#[command(name = "combfilter", version, about = "Distances between combinatorial filters and improper filter reduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a filter document and report problems.
    Validate { file: PathBuf },
    /// Print the colors a filter emits on an observation string.
    Run {
        file: PathBuf,
        /// Comma-separated observations.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        obs: Vec<String>,
    },
    /// Worst-case normalized distance from the first filter to the second.
    Distance {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        dist: DistanceArgs,
    },
    /// Reduce a filter to at most K states.
    Reduce {
        file: PathBuf,
        #[arg(long, default_value = "greedy")]
        algo: Algorithm,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        dist: DistanceArgs,
        #[command(flatten)]
        global: GlobalArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Generate a benchmark filter.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Print a filter in Graphviz DOT format.
    ExportDot {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a benchmark sweep and write one CSV row per cell.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct DistanceArgs {
    #[arg(long, default_value = "hamming")]
    metric: Metric,
    /// Convergence threshold, as a decimal or a fraction.
    #[arg(long, default_value = "0.035", value_parser = parse_epsilon)]
    eps: Rational,
    /// Edit costs as insert,delete,substitute.
    #[arg(long, default_value = "1,1,1")]
    costs: EditCosts,
    /// Longest string length to examine before giving up on convergence.
    #[arg(long, default_value_t = 1000)]
    k_max: usize,
}

impl DistanceArgs {
    fn config(&self) -> Result<DistanceConfig> {
        Ok(DistanceConfig {
            metric: self.metric,
            costs: self.costs,
            params: ConvergenceParams::new(self.eps, self.k_max)?,
        })
    }
}

#[derive(Args)]
struct GlobalArgs {
    /// Voting iterations for the global algorithm.
    #[arg(long, default_value_t = 400)]
    r: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Coloring restarts for the global algorithm.
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    /// Local search moves per coloring restart.
    #[arg(long, default_value_t = 5000)]
    local_moves: usize,
}

impl GlobalArgs {
    fn params(&self) -> GlobalParams {
        GlobalParams {
            iterations: self.r,
            seed: self.seed,
            restarts: self.restarts,
            local_moves: self.local_moves,
        }
    }
}

#[derive(Subcommand)]
enum Family {
    /// One robot in an annulus of N regions.
    Annulus1 {
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Two indistinguishable robots in an annulus of N regions.
    Annulus2 {
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sensorless robot in a corridor with one corner.
    Lcorridor {
        #[arg(long)]
        length: usize,
        /// Corner cell; defaults to the middle of the corridor.
        #[arg(long)]
        corner: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    suite: Suite,
    /// Region counts for the annulus suite, e.g. 3..9 or 3,5,7.
    #[arg(long, value_parser = parse_list)]
    n_values: Option<List>,
    /// Robots per annulus instance.
    #[arg(long, default_value_t = 1)]
    robots: usize,
    /// Region count for the annulus2 suite.
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Corridor length for the lcorridor suite.
    #[arg(long, default_value_t = 8)]
    length: usize,
    #[arg(long)]
    corner: Option<usize>,
    /// Target sizes, e.g. 2..10; defaults to 2 for annulus, 2..10 otherwise.
    #[arg(long, value_parser = parse_list)]
    ks: Option<List>,
    #[arg(long, value_delimiter = ',', default_value = "greedy,global")]
    algos: Vec<Algorithm>,
    #[arg(long, value_delimiter = ',', default_value = "hamming,edit")]
    metrics: Vec<Metric>,
    #[arg(long, default_value = "0.035", value_parser = parse_epsilon)]
    eps: Rational,
    #[arg(long, default_value = "1,1,1")]
    costs: EditCosts,
    #[arg(long, default_value_t = 1000)]
    k_max: usize,
    #[command(flatten)]
    global: GlobalArgs,
    /// CSV destination; `-` for standard output.
    #[arg(long)]
    out: PathBuf,
}

fn parse_epsilon(text: &str) -> Result<Rational, String> {
    parse_decimal(text).map_err(|e| e.to_string())
}

#[derive(Debug, Clone)]
struct List(Vec<usize>);

/// `a..b` (inclusive), `a..=b`, or a comma-separated list.
fn parse_list(text: &str) -> Result<List, String> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("`{s}` is not a non-negative integer"))
    };
    if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty range {text}"));
        }
        return Ok(List((a..=b).collect()));
    }
    text.split(',').map(num).collect::<Result<_, _>>().map(List)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("{THREADS_ENV} must be a positive integer, got `{value}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Validate { file } => validate(&file),
        Command::Run { file, obs } => {
            let f = read_filter(&file)?;
            match f.run(&obs) {
                Ok(colors) => {
                    let colors: Vec<String> = colors.iter().map(u32::to_string).collect();
                    println!("{}", colors.join(","));
                    Ok(())
                }
                Err(e) => bail!("`{}` at position {} is not accepted", obs[e.index], e.index),
            }
        }
        Command::Distance { first, second, dist } => {
            let (f1, f2) = (read_filter(&first)?, read_filter(&second)?);
            let config = dist.config()?;
            if !language_subset(&f1, &f2) {
                eprintln!(
                    "warning: {} accepts strings {} does not; the value only covers shared strings",
                    first.display(),
                    second.display()
                );
            }
            let r = distance(&f1, &f2, &config);
            println!("distance: {} ({})", format_decimal(&r.value, 6), r.value);
            println!("metric: {}", config.metric);
            println!("attained at length: {}", r.k_at_max);
            println!("lengths examined: {}", r.k_reached);
            println!("converged: {}", r.converged);
            Ok(())
        }
        Command::Reduce {
            file,
            algo,
            k,
            dist,
            global,
            output,
        } => {
            let f = read_filter(&file)?;
            let config = dist.config()?;
            let r = experiment::reduce(&f, k, algo, &config, &global.params())?;
            write_filter(&output, &r.filter)?;
            println!("states: {} -> {}", f.len(), r.filter.len());
            println!("distance: {} ({})", format_decimal(&r.distance.value, 6), r.distance.value);
            println!("converged: {}", r.distance.converged);
            if let Some(it) = r.best_iteration {
                println!("best iteration: {it} of {}", r.iterations);
            }
            Ok(())
        }
        Command::Gen { family } => {
            let (f, output) = match family {
                Family::Annulus1 { n, output } => (gen_annulus_single(n)?, output),
                Family::Annulus2 { n, output } => (gen_annulus_two_robot(n)?, output),
                Family::Lcorridor {
                    length,
                    corner,
                    output,
                } => (
                    gen_lcorridor(CorridorSpec {
                        length,
                        corner_at: corner.unwrap_or(length / 2),
                    })?,
                    output,
                ),
            };
            emit_filter(&f, output.as_deref())
        }
        Command::ExportDot { file, output } => {
            let dot = export_dot(&read_filter(&file)?);
            match output {
                Some(path) => std::fs::write(&path, dot)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{dot}"),
            }
            Ok(())
        }
        Command::Experiment(args) => run_experiment(args),
    }
}

fn validate(file: &Path) -> Result<()> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let f = combfilter::io::parse_filter(&text).with_context(|| format!("{}", file.display()))?;
    for w in f.validate().warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "ok: {} states, {} edges, {} observations",
        f.len(),
        f.edge_count(),
        f.observation_space().len()
    );
    Ok(())
}

fn emit_filter(f: &Filter, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => {
            write_filter(path, f)?;
            eprintln!("wrote {} states to {}", f.len(), path.display());
        }
        None => print!("{}", serialize_filter(f)),
    }
    Ok(())
}

fn run_experiment(args: ExperimentArgs) -> Result<()> {
    let mut p = ExperimentParams::for_suite(args.suite);
    if let Some(n_values) = args.n_values {
        p.n_values = n_values.0;
    }
    if let Some(ks) = args.ks {
        p.ks = ks.0;
    }
    p.robots = args.robots;
    p.n = args.n;
    p.length = args.length;
    p.corner_at = args.corner;
    p.algorithms = args.algos;
    p.metrics = args.metrics;
    p.costs = args.costs;
    p.convergence = ConvergenceParams::new(args.eps, args.k_max)?;
    p.global = args.global.params();

    let rows = if args.out == Path::new("-") {
        experiment::run_experiment(&p, io::stdout().lock())?
    } else {
        let file = File::create(&args.out)
            .with_context(|| format!("creating {}", args.out.display()))?;
        let mut w = BufWriter::new(file);
        let rows = experiment::run_experiment(&p, &mut w)?;
        w.flush()?;
        rows
    };
    eprintln!("{} rows", rows.len());
    Ok(())
}
