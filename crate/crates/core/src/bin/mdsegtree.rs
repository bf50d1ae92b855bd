use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mdsegtree::bench::{
    self, fit_curve, read_csv, run_bench, series, verify, Backend, Metric, MetricSelection, OpKind,
    VerifySpec, WorkloadSpec,
};
use mdsegtree::Error;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "mdsegtree",
    version,
    about = "Benchmark and verify multidimensional segment trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the seeded complexity sweep and write CSV records.
    Bench {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=3))]
        dim: u8,
        #[arg(long, value_delimiter = ',', default_values_t = bench::DEFAULT_SIZES)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        updates: usize,
        #[arg(long, default_value_t = 100)]
        queries_per_update: usize,
        #[arg(long, default_value_t = bench::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value = "float", value_parser = ["rational", "float"])]
        backend: String,
        #[arg(long, default_value = "both", value_parser = ["time", "steps", "both"])]
        metric: String,
        #[arg(long, default_value_t = -100, allow_negative_numbers = true)]
        value_min: i64,
        #[arg(long, default_value_t = 100, allow_negative_numbers = true)]
        value_max: i64,
        /// Largest node store allowed, in MiB.
        #[arg(long, default_value_t = (bench::DEFAULT_MEMORY_CAP >> 20) as u64)]
        mem_cap_mb: u64,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay random scripts against the dense oracle (exact arithmetic).
    Verify {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=3))]
        dim: u8,
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3, 5, 8, 16, 32])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5000)]
        ops: usize,
        #[arg(long, default_value_t = bench::DEFAULT_SEED)]
        seed: u64,
    },
    /// Fit c·(log2 n)^d to every series of a bench CSV.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
        dim: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Resource(_) => EXIT_RESOURCE,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Bench {
            dim,
            sizes,
            updates,
            queries_per_update,
            seed,
            backend,
            metric,
            value_min,
            value_max,
            mem_cap_mb,
            out,
        } => {
            let spec = WorkloadSpec {
                dim: dim as usize,
                sizes,
                updates,
                queries_per_update,
                seed,
                value_range: (value_min, value_max),
                backend: backend.parse::<Backend>()?,
                metrics: metric.parse::<MetricSelection>()?,
                memory_cap: usize::try_from(mem_cap_mb.saturating_mul(1 << 20))
                    .unwrap_or(usize::MAX),
            };
            let records = run_bench(&spec)?;
            match out {
                Some(path) => {
                    let f = File::create(&path)
                        .map_err(|e| Error::Resource(format!("{}: {e}", path.display())))?;
                    bench::write_csv(&records, f)?;
                }
                None => bench::write_csv(&records, io::stdout().lock())?,
            }
            Ok(0)
        }
        Command::Verify {
            dim,
            sizes,
            ops,
            seed,
        } => {
            let spec = VerifySpec {
                dim: dim as usize,
                sizes,
                ops,
                seed,
                ..VerifySpec::default()
            };
            let report = verify(&spec)?;
            println!("{report}");
            Ok(if report.passed() {
                0
            } else {
                EXIT_VERIFY_FAILED
            })
        }
        Command::Fit { input, dim } => {
            let f = File::open(&input)
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", input.display())))?;
            let records = read_csv(BufReader::new(f))?;
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "op,metric,c,r_squared").ok();
            let mut fitted = 0;
            for op in [OpKind::Update, OpKind::Query] {
                for metric in [Metric::TimeNs, Metric::VisitedNodes] {
                    let s = series(&records, op, metric);
                    if s.is_empty() {
                        continue;
                    }
                    let fit = fit_curve(&s, dim)?;
                    let op = if op == OpKind::Update {
                        "update"
                    } else {
                        "query"
                    };
                    let metric = if metric == Metric::TimeNs {
                        "time_ns"
                    } else {
                        "visited_nodes"
                    };
                    writeln!(stdout, "{op},{metric},{},{}", fit.c, fit.r_squared).ok();
                    fitted += 1;
                }
            }
            if fitted == 0 {
                return Err(Error::InvalidArgument("no records to fit".into()));
            }
            Ok(0)
        }
    }
}
