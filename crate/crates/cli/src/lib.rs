//! Argument parsing and dispatch for the `qd` tools.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use qdict::eval::{self, ErrorMix, GroundTruth, SimConfig};
use qdict::hash::{FINGERPRINT_MIX, FINGERPRINT_SEED, LEVEL_MIX};
use qdict::inspect::{index_stats, random_canonical_kmers};
use qdict::linker::{run_linker, QuerySet, DEFAULT_THRESHOLD};
use qdict::mphf::DEFAULT_SEED;
use qdict::{count_solid, counter, read_file_of_files, CounterIndex, IndexParams, LinkParams, LinkerIndex, Window};

pub fn long_version() -> &'static str {
    static TEXT: std::sync::OnceLock<String> = std::sync::OnceLock::new();
    TEXT.get_or_init(|| format!(
        "{}\nlevel mixer: {:#018x} {:#018x}\nfingerprint mixer: {:#018x} {:#018x}\nfingerprint seed: {:#018x}\ndefault seed: {:#018x}",
        env!("CARGO_PKG_VERSION"),
        LEVEL_MIX[0],
        LEVEL_MIX[1],
        FINGERPRINT_MIX[0],
        FINGERPRINT_MIX[1],
        FINGERPRINT_SEED,
        DEFAULT_SEED
    ))
}

fn parse_gamma(s: &str) -> Result<f64, String> {
    let g: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if g >= 1.0 && g.is_finite() {
        Ok(g)
    } else {
        Err(format!("gamma must be >= 1.0, got {s}"))
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    match s.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    }
    .map_err(|e| format!("{e}"))
}

#[derive(Parser, Debug)]
#[command(name = "qd", version, long_version = long_version(), about = "Quasi-dictionary read tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Estimate each query read's abundance in the bank.
    Counter(CounterArgs),
    /// Report bank reads sharing k-mers with each query read.
    Linker(LinkerArgs),
    /// Simulate spot-based long reads and their ground truth.
    Sim(SimArgs),
    /// Score linker output against a ground truth.
    Score(ScoreArgs),
    /// Build an index and report size, false-positive rate and timings.
    Stats(StatsArgs),
}

#[derive(Args, Debug, Clone)]
pub struct IndexArgs {
    /// k-mer length
    #[arg(short = 'k', default_value_t = 31, value_parser = clap::value_parser!(u32).range(1..=31))]
    pub k: u32,
    /// Solidity threshold
    #[arg(short = 't', default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=255))]
    pub t: u32,
    /// Fingerprint width in bits
    #[arg(short = 'f', default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=64))]
    pub f: u32,
    /// MPHF expansion factor
    #[arg(long, default_value_t = 2.0, value_parser = parse_gamma)]
    pub gamma: f64,
    #[arg(long, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    pub seed: u64,
    #[command(flatten)]
    pub threads: ThreadArgs,
}

impl IndexArgs {
    pub fn params(&self) -> IndexParams {
        IndexParams {
            k: self.k as usize,
            t: self.t,
            f: self.f,
            gamma: self.gamma,
            seed: self.seed,
        }
    }
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ThreadArgs {
    /// Worker threads (default: all cores)
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
}

impl ThreadArgs {
    fn install<T: Send>(&self, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.threads {
            builder = builder.num_threads(n as usize);
        }
        builder.build()?.install(f)
    }
}

#[derive(Parser, Debug)]
#[command(name = "src-counter", version, long_version = long_version())]
pub struct CounterArgs {
    /// Bank read set (FASTA or FASTQ)
    #[arg(short = 'b')]
    pub bank: PathBuf,
    /// File listing query read sets, one per line
    #[arg(short = 'q')]
    pub queries: PathBuf,
    #[arg(short = 'o')]
    pub out: PathBuf,
    #[command(flatten)]
    pub index: IndexArgs,
}

#[derive(Parser, Debug)]
#[command(name = "src-linker", version, long_version = long_version())]
pub struct LinkerArgs {
    #[arg(short = 'b')]
    pub bank: PathBuf,
    #[arg(short = 'q')]
    pub queries: PathBuf,
    #[arg(short = 'o')]
    pub out: PathBuf,
    /// Minimum number of covered positions to report a target
    #[arg(short = 's', default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: usize,
    /// Score the best window of this size instead of the whole read
    #[arg(short = 'w')]
    pub window: Option<usize>,
    #[command(flatten)]
    pub index: IndexArgs,
}

#[derive(Parser, Debug)]
#[command(name = "qd-sim", version, long_version = long_version())]
pub struct SimArgs {
    #[arg(long = "genome-len", default_value_t = 10_000_000)]
    pub genome_len: usize,
    #[arg(long, default_value_t = 20)]
    pub spots: usize,
    #[arg(long = "read-len", default_value_t = 2000)]
    pub read_len: usize,
    #[arg(long = "reads-per-spot", default_value_t = 50)]
    pub reads_per_spot: usize,
    #[arg(long = "error-rate", default_value_t = 0.12)]
    pub error_rate: f64,
    /// Minimum gap between spots
    #[arg(long, default_value_t = 500)]
    pub gap: usize,
    /// Apply substitutions only
    #[arg(long)]
    pub substitutions_only: bool,
    #[arg(long, default_value_t = 1, value_parser = parse_seed)]
    pub seed: u64,
    #[arg(short = 'o')]
    pub out: PathBuf,
    #[arg(long)]
    pub truth: PathBuf,
    #[command(flatten)]
    pub threads: ThreadArgs,
}

#[derive(Parser, Debug)]
#[command(name = "qd-score", version, long_version = long_version())]
pub struct ScoreArgs {
    /// Linker output
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub truth: PathBuf,
}

#[derive(Parser, Debug)]
#[command(name = "qd-stats")]
pub struct StatsArgs {
    /// Index the solid k-mers of this read set
    #[arg(short = 'b', conflicts_with = "random_keys", required_unless_present = "random_keys")]
    pub bank: Option<PathBuf>,
    /// Index this many random canonical k-mers instead of a bank
    #[arg(long)]
    pub random_keys: Option<usize>,
    /// Number of non-indexed probe k-mers
    #[arg(long, default_value_t = 1_000_000)]
    pub probes: usize,
    /// Write the serialized index here
    #[arg(short = 'o')]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub index: IndexArgs,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (a.canonicalize(), b.canonicalize()) {
        (Ok(x), Ok(y)) => x == y,
        _ => a == b,
    }
}

pub fn run_counter(args: &CounterArgs) -> Result<()> {
    args.index.threads.install(|| {
        let queries = read_file_of_files(&args.queries)?;
        let index = CounterIndex::build(args.bank.as_path(), &args.index.params())?;
        let mut out = create(&args.out)?;
        counter::run_counter(&index, &queries, &mut out)?;
        out.flush()?;
        Ok(())
    })
}

pub fn run_linker_cmd(args: &LinkerArgs) -> Result<()> {
    let params = args.index.params();
    if let Some(w) = args.window {
        anyhow::ensure!(w >= params.k, "window size {w} is smaller than k={}", params.k);
    }
    args.index.threads.install(|| {
        let queries = read_file_of_files(&args.queries)?;
        let index = LinkerIndex::build(args.bank.as_path(), &params)?;
        let sets: Vec<QuerySet<'_, Path>> = queries
            .iter()
            .map(|q| QuerySet {
                reads: q.as_path(),
                is_bank: same_file(q, &args.bank),
            })
            .collect();
        let link = LinkParams {
            threshold: args.threshold,
            window: args.window.map_or(Window::WholeRead, Window::Size),
        };
        let mut out = create(&args.out)?;
        run_linker(&index, &sets, &link, &mut out)?;
        out.flush()?;
        Ok(())
    })
}

pub fn run_sim(args: &SimArgs) -> Result<()> {
    let cfg = SimConfig {
        genome_length: args.genome_len,
        n_spots: args.spots,
        read_length: args.read_len,
        reads_per_spot: args.reads_per_spot,
        error_rate: args.error_rate,
        error_mix: if args.substitutions_only {
            ErrorMix::SUBSTITUTIONS_ONLY
        } else {
            ErrorMix::UNIFORM
        },
        spot_min_gap: args.gap,
        seed: args.seed,
    };
    args.threads.install(|| {
        let sim = eval::simulate(&cfg)?;
        sim.save(&args.out, &args.truth)?;
        Ok(())
    })
}

/// `recall precision f_measure` as percentages.
pub fn run_score(args: &ScoreArgs) -> Result<String> {
    let f = File::open(&args.pred).with_context(|| format!("cannot open {}", args.pred.display()))?;
    let predicted = eval::parse_linker_output(BufReader::new(f))?;
    let truth = GroundTruth::load(&args.truth)?;
    let s = eval::score(&predicted, &truth)?;
    if predicted.is_empty() {
        eprintln!("warning: empty prediction set, precision reported as 100%");
    }
    Ok(format!(
        "{:.2} {:.2} {:.2}",
        100.0 * s.recall,
        100.0 * s.precision,
        100.0 * s.f_measure
    ))
}

pub fn run_stats(args: &StatsArgs) -> Result<String> {
    let params = args.index.params();
    params.validate()?;
    args.index.threads.install(|| {
        let keys = match (&args.bank, args.random_keys) {
            (Some(bank), _) => count_solid(bank.as_path(), params.k, params.t)?.codes(),
            (None, Some(n)) => {
                let mut keys = random_canonical_kmers(n, params.k, params.seed, &[])?;
                keys.sort_unstable();
                keys
            }
            (None, None) => unreachable!("clap requires one key source"),
        };
        let probes = random_canonical_kmers(args.probes, params.k, params.seed ^ 0x5052_4f42, &keys)?;
        let (qd, stats) = index_stats(&keys, &params.qd_params(), &probes)?;
        if let Some(out) = &args.out {
            let mut w = create(out)?;
            qd.write_to(&mut w)?;
            w.flush()?;
        }
        Ok(stats.to_string())
    })
}

pub fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Counter(a) => run_counter(&a),
        Command::Linker(a) => run_linker_cmd(&a),
        Command::Sim(a) => run_sim(&a),
        Command::Score(a) => {
            println!("{}", run_score(&a)?);
            Ok(())
        }
        Command::Stats(a) => {
            println!("{}", run_stats(&a)?);
            Ok(())
        }
    }
}

/// Prints a one-line diagnostic and exits non-zero on error.
pub fn exit_on_error(res: Result<()>) {
    if let Err(e) = res {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
