//! `tenrank`: rank lower bounds and rank detection for dense tensors.
//!
//! Exit codes: 0 success, 1 usage error, 2 parse/format error, 3 numerical
//! failure.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tenrank::{
    all_n_ranks, balanced_split, detection_trial, max_detectable_rank, rank_lower_bound,
    synth_tensor, write_rmax_csv, Distribution, ModeSplit, RankReport, RankSampling,
    SplitStrategy, TensorFile, TrialOutcome,
};

const EXIT_USAGE: u8 = 1;
const EXIT_FORMAT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "tenrank",
    version,
    about = "Tensor rank lower bounds via the maximally square unfolding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a random tensor of known constructed rank.
    Synth {
        /// Dimensions, e.g. 4,4,4
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Constructed rank (number of rank-1 terms).
        #[arg(long)]
        rank: usize,
        /// RNG seed; the generator name and seed are echoed in the file.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Factor entry distribution.
        #[arg(long, value_enum, default_value_t = Dist::Gaussian)]
        distribution: Dist,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower-bound the rank of a tensor file and test for detection.
    Detect {
        file: PathBuf,
        /// Rank cutoff; overrides the TENRANK_TOL environment variable and
        /// the default max(rows,cols)*eps*sigma_max policy.
        #[arg(long)]
        tol: Option<f64>,
        /// Emit the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Like detect, reporting the bound without the verdict emphasis.
    Bound {
        file: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Show the maximally square mode bipartition for a dimension list.
    Split {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Strategy::Exact)]
        strategy: Strategy,
    },
    /// Maximum detectable rank for a dimension list.
    Rmax {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
    },
    /// Emit the detectability table (N, I, R_max) as CSV.
    Figure {
        #[arg(long)]
        imax: usize,
        #[arg(long)]
        nmax: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diagnostic sweep: rank of every contiguous unfolding.
    Nranks {
        file: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Monte Carlo detection harness over random known-rank tensors.
    Mc {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Worker threads; per-trial RNG streams keep output identical for
        /// any thread count.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Print only the summary line.
        #[arg(long)]
        quiet: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Dist {
    Gaussian,
    Uniform,
}

impl From<Dist> for Distribution {
    fn from(d: Dist) -> Self {
        match d {
            Dist::Gaussian => Distribution::Gaussian,
            Dist::Uniform => Distribution::Uniform,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Exact,
    SumDp,
}

impl From<Strategy> for SplitStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::Exact => SplitStrategy::Exact,
            Strategy::SumDp => SplitStrategy::SumDp,
        }
    }
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: EXIT_USAGE,
        }
    }

    fn format(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: EXIT_FORMAT,
        }
    }
}

impl From<tenrank::Error> for CliError {
    fn from(e: tenrank::Error) -> Self {
        let code = match &e {
            tenrank::Error::Parse { .. } | tenrank::Error::ValueCount { .. } => EXIT_FORMAT,
            tenrank::Error::SvdFailed { .. } => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        };
        Self {
            message: e.to_string(),
            code,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::format(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Synth {
            dims,
            rank,
            seed,
            distribution,
            out,
        } => cmd_synth(&dims, rank, seed, distribution.into(), out.as_deref()),
        Command::Detect { file, tol, json } => cmd_detect(&file, tol, json, true),
        Command::Bound { file, tol, json } => cmd_detect(&file, tol, json, false),
        Command::Split { dims, strategy } => cmd_split(&dims, strategy.into()),
        Command::Rmax { dims } => cmd_rmax(&dims),
        Command::Figure { imax, nmax, out } => cmd_figure(imax, nmax, out.as_deref()),
        Command::Nranks { file, tol } => cmd_nranks(&file, tol),
        Command::Mc {
            trials,
            seed,
            threads,
            quiet,
        } => cmd_mc(trials, seed, threads, quiet),
    }
}

/// Flag beats the TENRANK_TOL environment variable, which beats the
/// built-in policy.
fn resolve_tol(flag: Option<f64>) -> Result<Option<f64>, CliError> {
    let tol = match flag {
        Some(t) => Some(t),
        None => match std::env::var("TENRANK_TOL") {
            Ok(raw) => Some(raw.parse::<f64>().map_err(|_| {
                CliError::usage(format!("TENRANK_TOL is not a number: '{raw}'"))
            })?),
            Err(_) => None,
        },
    };
    if let Some(t) = tol {
        if !(t > 0.0) || !t.is_finite() {
            return Err(CliError::usage(format!(
                "tolerance must be a positive finite number, got {t}"
            )));
        }
    }
    Ok(tol)
}

fn read_tensor(path: &Path) -> Result<TensorFile, CliError> {
    let file = fs::File::open(path)
        .map_err(|e| CliError::format(format!("{}: {e}", path.display())))?;
    Ok(TensorFile::parse(BufReader::new(file))?)
}

fn format_modes(modes: &[usize]) -> String {
    let mut s = String::from("{");
    for (i, m) in modes.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{m}");
    }
    s.push('}');
    s
}

fn format_dims(dims: &[usize]) -> String {
    dims.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn describe_split(split: &ModeSplit) -> String {
    format!(
        "s1 = {}  s2 = {}  ({} x {})",
        format_modes(&split.s1),
        format_modes(&split.s2),
        split.rows,
        split.cols
    )
}

fn cmd_synth(
    dims: &[usize],
    rank: usize,
    seed: u64,
    dist: Distribution,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let (tensor, model) = synth_tensor(dims, rank, seed, dist)?;
    let metadata = vec![
        ("generator".to_string(), tenrank::synth::GENERATOR.to_string()),
        ("seed".to_string(), seed.to_string()),
        ("rank".to_string(), model.rank().to_string()),
        ("distribution".to_string(), dist.name().to_string()),
    ];
    let tf = TensorFile::with_metadata(tensor, metadata);
    match out {
        Some(path) => {
            let mut file = fs::File::create(path)?;
            tf.write(&mut file)?;
            println!(
                "wrote {}: dims {}, rank {rank}, seed {seed}, {} entries",
                path.display(),
                format_dims(dims),
                tf.tensor.len()
            );
        }
        None => {
            let stdout = io::stdout();
            tf.write(stdout.lock())?;
        }
    }
    Ok(())
}

fn print_report(report: &RankReport, verdict: bool) {
    if let Some(split) = &report.split {
        println!("split        {}", describe_split(split));
    }
    println!(
        "unfolding    {} x {}",
        report.unfolding_shape.0, report.unfolding_shape.1
    );
    println!("r_max        {}", report.r_max);
    println!("tolerance    {:e}", report.tolerance_used);
    let sigmas = report
        .singular_values
        .iter()
        .map(|s| format!("{s:.6e}"))
        .collect::<Vec<_>>()
        .join(" ");
    println!("sigma        {sigmas}");
    println!("lower bound  {}", report.lower_bound);
    if verdict {
        match report.detected_rank {
            Some(r) => println!("verdict      rank detected, R = {r}"),
            None => println!(
                "verdict      not detected (unfolding full rank); search from R >= {}",
                report.lower_bound
            ),
        }
    }
}

fn cmd_detect(path: &Path, tol: Option<f64>, json: bool, verdict: bool) -> Result<(), CliError> {
    let tol = resolve_tol(tol)?;
    let tf = read_tensor(path)?;
    let report = rank_lower_bound(&tf.tensor, tol)?;
    if json {
        println!(
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        );
    } else {
        println!("dims         {}", format_dims(tf.tensor.dims()));
        print_report(&report, verdict);
    }
    Ok(())
}

fn cmd_split(dims: &[usize], strategy: SplitStrategy) -> Result<(), CliError> {
    let split = balanced_split(dims, strategy)?;
    println!("dims         {}", format_dims(dims));
    println!(
        "strategy     {}",
        match strategy {
            SplitStrategy::Exact => "exact",
            SplitStrategy::SumDp => "sum-dp",
        }
    );
    println!("s1           {}", format_modes(&split.s1));
    println!("s2           {}", format_modes(&split.s2));
    println!("shape        {} x {}", split.rows, split.cols);
    println!("min product  {}", split.min_product());
    Ok(())
}

fn cmd_rmax(dims: &[usize]) -> Result<(), CliError> {
    let (r_max, split) = max_detectable_rank(dims)?;
    println!("dims   {}", format_dims(dims));
    println!("r_max  {r_max}");
    println!("split  {}", describe_split(&split));
    Ok(())
}

fn cmd_figure(imax: usize, nmax: usize, out: Option<&Path>) -> Result<(), CliError> {
    if imax < 2 || nmax < 2 {
        return Err(CliError::usage("figure requires --imax >= 2 and --nmax >= 2"));
    }
    match out {
        Some(path) => {
            let mut file = fs::File::create(path)?;
            write_rmax_csv(&mut file, imax, nmax)?;
        }
        None => {
            let stdout = io::stdout();
            write_rmax_csv(stdout.lock(), imax, nmax)?;
        }
    }
    Ok(())
}

fn cmd_nranks(path: &Path, tol: Option<f64>) -> Result<(), CliError> {
    let tol = resolve_tol(tol)?;
    let tf = read_tensor(path)?;
    let sweep = all_n_ranks(&tf.tensor, tol)?;
    println!("n  rows  cols  rank");
    let mut best = 0usize;
    for (n, rr) in &sweep {
        let rows: usize = tf.tensor.dims()[..*n].iter().product();
        let cols: usize = tf.tensor.dims()[*n..].iter().product();
        println!("{n}  {rows}  {cols}  {}", rr.rank);
        best = best.max(rr.rank);
    }
    println!("max rank {best} (lower bound on the tensor rank)");
    Ok(())
}

fn mc_line(t: &TrialOutcome) -> String {
    format!(
        "{:>5}  dims {:<12} R {:>3}  r_max {:>3}  bound {:>3}  detected {}  ok {}",
        t.trial,
        format_dims(&t.dims),
        t.constructed_rank,
        t.r_max,
        t.lower_bound,
        if t.detected { "yes" } else { "no " },
        if t.detected_exact { "yes" } else { "no" }
    )
}

fn cmd_mc(trials: u64, seed: u64, threads: usize, quiet: bool) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::usage("--trials must be at least 1"));
    }
    let threads = threads.clamp(1, 64);
    let mut outcomes: Vec<TrialOutcome> = Vec::with_capacity(trials as usize);
    if threads == 1 {
        for trial in 0..trials {
            outcomes.push(detection_trial(seed, trial, RankSampling::UniformToMax)?);
        }
    } else {
        let chunks = std::thread::scope(|scope| {
            let workers: Vec<_> = (0..threads)
                .map(|w| {
                    scope.spawn(move || {
                        (w as u64..trials)
                            .step_by(threads)
                            .map(|trial| detection_trial(seed, trial, RankSampling::UniformToMax))
                            .collect::<Result<Vec<_>, _>>()
                    })
                })
                .collect();
            workers
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect::<Result<Vec<_>, _>>()
        })?;
        outcomes = chunks.into_iter().flatten().collect();
        outcomes.sort_by_key(|t| t.trial);
    }

    let mut stdout = io::stdout().lock();
    if !quiet {
        for t in &outcomes {
            writeln!(stdout, "{}", mc_line(t))?;
        }
    }
    let sound = outcomes.iter().filter(|t| t.sound).count();
    let exact = outcomes.iter().filter(|t| t.detected_exact).count();
    let detected = outcomes.iter().filter(|t| t.detected).count();
    writeln!(
        stdout,
        "summary  trials {trials}  seed {seed}  detected {detected}  detected_exact {exact}  sound {sound}"
    )?;
    Ok(())
}
