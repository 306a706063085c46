use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use succinct_bp::bench::{self, BenchSpec, Mode};
use succinct_bp::generate::{generate, Shape};
use succinct_bp::space::SpaceReport;
use succinct_bp::{persist, Config, ParenBitvector, SuccinctTree};

mod query;

#[derive(Parser)]
#[command(name = "bptool", version, about = "Build, query and benchmark succinct balanced-parentheses trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic tree as a parenthesis file.
    Generate {
        /// uniform, path, star, caterpillar or binary.
        #[arg(long, default_value = "uniform")]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
        /// Write the bit-packed binary form instead of text.
        #[arg(long)]
        packed: bool,
    },
    /// Build an index from a parenthesis file and save it.
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        index: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Answer one query, e.g. `query --index t.idx close 3`.
    Query {
        #[arg(long)]
        index: PathBuf,
        op: String,
        #[arg(allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Print space usage per component.
    Stats {
        #[arg(long)]
        index: PathBuf,
    },
    /// Run a benchmark and emit CSV rows.
    Bench {
        #[arg(long)]
        index: PathBuf,
        /// traversal, rmq or op-latency.
        #[arg(long, default_value = "traversal")]
        mode: String,
        /// Descent probabilities, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.25, 0.5])]
        p: Vec<f64>,
        #[arg(long, default_value_t = 200_000)]
        sample_min: usize,
        #[arg(long, default_value_t = 200_000)]
        pairs: usize,
        #[arg(long, default_value_t = 100)]
        percentiles: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ConfigArgs {
    /// Bucket width in parentheses.
    #[arg(long, default_value_t = succinct_bp::config::MAX_BUCKET)]
    beta: usize,
    /// rmM-tree block size.
    #[arg(long, default_value_t = 1024)]
    block: usize,
    /// Lookup chunk width, 8 or 16.
    #[arg(long, default_value_t = 16)]
    chunk: u32,
    /// Skip the min-count fields (disables mincount, minselect, degree, child, childrank).
    #[arg(long)]
    no_counts: bool,
}

impl ConfigArgs {
    fn config(&self) -> Result<Config> {
        let mut c = Config::new(self.beta, self.block, self.chunk)?;
        c.store_counts = !self.no_counts;
        Ok(c)
    }
}

/// Accepts parenthesis text or the packed binary form.
fn read_sequence(path: &Path) -> Result<ParenBitvector> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let is_text = bytes.iter().all(|b| matches!(b, b'(' | b')') || b.is_ascii_whitespace());
    let bits = if is_text {
        ParenBitvector::from_parens(std::str::from_utf8(&bytes)?)?
    } else {
        ParenBitvector::from_packed(&bytes)?
    };
    Ok(bits)
}

fn load(path: &Path) -> Result<SuccinctTree> {
    persist::load_file(path).with_context(|| format!("loading index {}", path.display()))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate { kind, n, seed, output, packed } => {
            let bits = generate(kind.parse::<Shape>()?, n, seed)?;
            if packed {
                fs::write(&output, bits.to_packed())?;
            } else {
                let mut w = BufWriter::new(fs::File::create(&output)?);
                w.write_all(bits.to_parens().as_bytes())?;
                w.write_all(b"\n")?;
                w.flush()?;
            }
        }
        Command::Build { input, index, config } => {
            let bits = read_sequence(&input)?;
            let t0 = Instant::now();
            let tree = SuccinctTree::build(bits, config.config()?)?;
            let elapsed = t0.elapsed();
            persist::save_file(&tree, &index)?;
            eprintln!("{} nodes, {} buckets, built in {:.3}s", tree.nodes(), tree.bucket_count(), elapsed.as_secs_f64());
        }
        Command::Query { index, op, args } => {
            println!("{}", query::run(&load(&index)?, &op, &args)?);
        }
        Command::Stats { index } => {
            let tree = load(&index)?;
            let c = tree.config();
            println!("nodes {}  beta {}  block {}  chunk {}  counts {}", tree.nodes(), c.bucket, c.block, c.chunk, c.store_counts);
            println!("{}", SpaceReport::of(&tree));
        }
        Command::Bench { index, mode, p, sample_min, pairs, percentiles, seed, csv } => {
            let tree = load(&index)?;
            let spec = BenchSpec { mode: mode.parse::<Mode>()?, ps: p, sample_min, pairs, seed, percentiles };
            let rows = bench::run(&tree, &spec)?;
            match csv {
                Some(path) => bench::write_csv(&rows, BufWriter::new(fs::File::create(path)?))?,
                None => bench::write_csv(&rows, io::stdout().lock())?,
            }
        }
    }
    Ok(())
}
