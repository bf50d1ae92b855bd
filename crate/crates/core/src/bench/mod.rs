//! Complexity experiment harness: seeded random workloads, per-operation
//! wall time and visited-node counts, CSV records and a `c·log^d n` fit.
//!
//! Each sweep entry builds a fresh `n × … × n` tree and runs `updates` random
//! updates, each followed by `queries_per_update` random queries. Wall time
//! is noisy; the visited-node count is the hardware-independent metric.

mod fit;
mod verify;
mod workload;

use std::fmt;
use std::io;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use fit::{fit_curve, FitResult, MIN_FIT_SIZES};
pub use verify::{verify, verify_script, Divergence, VerifyReport, VerifySpec, MAX_VERIFY_SIZE};
pub use workload::{mixed_script, ScriptOp, Workload};

use crate::common::RangeSum;
use crate::error::{invalid, Error, Result};
use crate::numeric::{Rational, Scalar};
use crate::{Tree1D, Tree2D, TreeND};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Rational,
    Float,
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Backend::Rational),
            "float" => Ok(Backend::Float),
            _ => Err(invalid(format!(
                "unknown backend {s:?} (expected rational|float)"
            ))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Rational => Rational::BACKEND,
            Backend::Float => f64::BACKEND,
        })
    }
}

/// Which metrics `run_bench` records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricSelection {
    Time,
    Steps,
    Both,
}

impl MetricSelection {
    fn includes(self, m: Metric) -> bool {
        matches!(
            (self, m),
            (MetricSelection::Both, _)
                | (MetricSelection::Time, Metric::TimeNs)
                | (MetricSelection::Steps, Metric::VisitedNodes)
        )
    }
}

impl FromStr for MetricSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "time" => Ok(MetricSelection::Time),
            "steps" => Ok(MetricSelection::Steps),
            "both" => Ok(MetricSelection::Both),
            _ => Err(invalid(format!(
                "unknown metric {s:?} (expected time|steps|both)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpKind {
    Update,
    Query,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    TimeNs,
    VisitedNodes,
}

/// One CSV row: `n,op,metric,mean,std,samples`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub n: usize,
    pub op: OpKind,
    pub metric: Metric,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkloadSpec {
    pub dim: usize,
    pub sizes: Vec<usize>,
    pub updates: usize,
    pub queries_per_update: usize,
    pub seed: u64,
    pub value_range: (i64, i64),
    pub backend: Backend,
    pub metrics: MetricSelection,
    /// Refuse sweeps whose largest tree would exceed this many bytes.
    pub memory_cap: usize,
}

pub const DEFAULT_SIZES: [usize; 7] = [16, 32, 64, 128, 256, 512, 1024];
pub const DEFAULT_SEED: u64 = 0x5EED;
pub const DEFAULT_MEMORY_CAP: usize = 2 << 30;

impl Default for WorkloadSpec {
    fn default() -> Self {
        WorkloadSpec {
            dim: 2,
            sizes: DEFAULT_SIZES.to_vec(),
            updates: 100,
            queries_per_update: 100,
            seed: DEFAULT_SEED,
            value_range: (-100, 100),
            backend: Backend::Float,
            metrics: MetricSelection::Both,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }
}

impl WorkloadSpec {
    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(invalid(format!("dim must be 1, 2 or 3, got {}", self.dim)));
        }
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(invalid("sizes must be a nonempty list of positive extents"));
        }
        if self.updates == 0 || self.queries_per_update == 0 {
            return Err(invalid("update and query counts must be at least 1"));
        }
        if self.value_range.0 > self.value_range.1 {
            return Err(invalid(format!("empty value range {:?}", self.value_range)));
        }
        Ok(())
    }

    /// Bytes the node store for a sweep entry of size `n` needs.
    pub fn memory_estimate(&self, n: usize) -> usize {
        match self.backend {
            Backend::Rational => estimate::<Rational>(self.dim, n),
            Backend::Float => estimate::<f64>(self.dim, n),
        }
    }

    fn check_memory(&self) -> Result<()> {
        for &n in &self.sizes {
            let bytes = self.memory_estimate(n);
            if bytes > self.memory_cap {
                return Err(Error::Resource(format!(
                    "size {n} needs {bytes} bytes of node storage, cap is {}",
                    self.memory_cap
                )));
            }
        }
        Ok(())
    }
}

fn estimate<S: Scalar>(dim: usize, n: usize) -> usize {
    match dim {
        1 => Tree1D::<S>::memory_estimate(n),
        2 => Tree2D::<S>::memory_estimate(n, n),
        _ => TreeND::<S>::memory_estimate(&vec![n; dim]),
    }
}

/// Runs the sweep and returns records ordered by size, then op
/// (update, query), then metric (time_ns, visited_nodes).
pub fn run_bench(spec: &WorkloadSpec) -> Result<Vec<BenchRecord>> {
    spec.validate()?;
    spec.check_memory()?;
    let mut out = Vec::new();
    for &n in &spec.sizes {
        let samples = match spec.backend {
            Backend::Rational => run_size::<Rational>(spec, n)?,
            Backend::Float => run_size::<f64>(spec, n)?,
        };
        out.extend(samples.into_records(n, spec.metrics));
    }
    Ok(out)
}

#[derive(Default)]
struct Samples {
    update_ns: Vec<f64>,
    update_visits: Vec<f64>,
    query_ns: Vec<f64>,
    query_visits: Vec<f64>,
}

impl Samples {
    fn into_records(self, n: usize, sel: MetricSelection) -> Vec<BenchRecord> {
        let series = [
            (OpKind::Update, Metric::TimeNs, self.update_ns),
            (OpKind::Update, Metric::VisitedNodes, self.update_visits),
            (OpKind::Query, Metric::TimeNs, self.query_ns),
            (OpKind::Query, Metric::VisitedNodes, self.query_visits),
        ];
        series
            .into_iter()
            .filter(|(_, metric, _)| sel.includes(*metric))
            .map(|(op, metric, xs)| {
                let (mean, std) = mean_std(&xs);
                BenchRecord {
                    n,
                    op,
                    metric,
                    mean,
                    std,
                    samples: xs.len(),
                }
            })
            .collect()
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let len = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / len;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / len;
    (mean, var.sqrt())
}

fn run_size<S: Scalar>(spec: &WorkloadSpec, n: usize) -> Result<Samples> {
    let dims = vec![n; spec.dim];
    match spec.dim {
        1 => drive(Tree1D::<S>::new(n)?, &dims, spec),
        2 => drive(Tree2D::<S>::new(n, n)?, &dims, spec),
        _ => drive(TreeND::<S>::new(&dims)?, &dims, spec),
    }
}

fn drive<S: Scalar, T: RangeSum<S>>(
    mut tree: T,
    dims: &[usize],
    spec: &WorkloadSpec,
) -> Result<Samples> {
    let mut w = Workload::new(spec.seed, dims[0] as u64);
    let mut s = Samples::default();
    for _ in 0..spec.updates {
        let b = w.random_box(dims);
        let c = S::from_i64(w.random_value(spec.value_range));
        tree.reset_visits();
        let start = Instant::now();
        tree.update_box(&b, c)?;
        s.update_ns.push(start.elapsed().as_nanos() as f64);
        s.update_visits.push(tree.visits().0 as f64);
        for _ in 0..spec.queries_per_update {
            let b = w.random_box(dims);
            tree.reset_visits();
            let start = Instant::now();
            std::hint::black_box(tree.query_box(&b)?);
            s.query_ns.push(start.elapsed().as_nanos() as f64);
            s.query_visits.push(tree.visits().1 as f64);
        }
    }
    Ok(s)
}

pub const CSV_HEADER: &str = "n,op,metric,mean,std,samples";

pub fn write_csv<W: io::Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    // header comes from the field order of BenchRecord
    for r in records {
        w.serialize(r).map_err(csv_err)?;
    }
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(',')).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Resource(e.to_string()))?;
    Ok(())
}

pub fn to_csv_string(records: &[BenchRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<BenchRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr
        .headers()
        .map_err(csv_err)?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != CSV_HEADER {
        return Err(invalid(format!(
            "unexpected CSV header {header:?}, expected {CSV_HEADER:?}"
        )));
    }
    rdr.deserialize().map(|r| r.map_err(csv_err)).collect()
}

fn csv_err(e: csv::Error) -> Error {
    invalid(format!("csv: {e}"))
}

/// Records of one `(op, metric)` series, in input order.
pub fn series(records: &[BenchRecord], op: OpKind, metric: Metric) -> Vec<BenchRecord> {
    records
        .iter()
        .filter(|r| r.op == op && r.metric == metric)
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> WorkloadSpec {
        WorkloadSpec {
            sizes: vec![16],
            updates: 2,
            queries_per_update: 2,
            seed,
            metrics: MetricSelection::Steps,
            ..WorkloadSpec::default()
        }
    }

    #[test]
    fn seeded_runs_are_identical() {
        let a = to_csv_string(&run_bench(&small(7)).unwrap());
        let b = to_csv_string(&run_bench(&small(7)).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with(CSV_HEADER));
    }

    #[test]
    fn sample_counts() {
        let spec = WorkloadSpec {
            sizes: vec![8, 12],
            updates: 3,
            queries_per_update: 5,
            ..small(1)
        };
        let recs = run_bench(&WorkloadSpec {
            metrics: MetricSelection::Both,
            ..spec
        })
        .unwrap();
        assert_eq!(recs.len(), 8);
        for r in &recs {
            let expect = match r.op {
                OpKind::Update => 3,
                OpKind::Query => 15,
            };
            assert_eq!(r.samples, expect);
        }
        assert_eq!(
            recs.iter()
                .take(4)
                .map(|r| (r.op, r.metric))
                .collect::<Vec<_>>(),
            vec![
                (OpKind::Update, Metric::TimeNs),
                (OpKind::Update, Metric::VisitedNodes),
                (OpKind::Query, Metric::TimeNs),
                (OpKind::Query, Metric::VisitedNodes),
            ]
        );
    }

    #[test]
    fn backends_visit_identically() {
        for dim in 1..=3 {
            let spec = WorkloadSpec {
                dim,
                sizes: vec![8, 13],
                ..small(3)
            };
            let f = run_bench(&spec).unwrap();
            let q = run_bench(&WorkloadSpec {
                backend: Backend::Rational,
                ..spec
            })
            .unwrap();
            assert_eq!(f, q);
        }
    }

    #[test]
    fn memory_cap_is_checked_first() {
        let spec = WorkloadSpec {
            sizes: vec![16, 1 << 20],
            ..small(1)
        };
        assert!(matches!(run_bench(&spec), Err(Error::Resource(_))));
    }

    #[test]
    fn invalid_specs() {
        for bad in [
            WorkloadSpec { dim: 4, ..small(1) },
            WorkloadSpec {
                sizes: vec![],
                ..small(1)
            },
            WorkloadSpec {
                sizes: vec![0],
                ..small(1)
            },
            WorkloadSpec {
                updates: 0,
                ..small(1)
            },
            WorkloadSpec {
                value_range: (3, 2),
                ..small(1)
            },
        ] {
            assert!(
                matches!(run_bench(&bad), Err(Error::InvalidArgument(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn csv_round_trip() {
        let recs = run_bench(&WorkloadSpec {
            metrics: MetricSelection::Both,
            ..small(4)
        })
        .unwrap();
        let text = to_csv_string(&recs);
        assert_eq!(text.lines().next(), Some(CSV_HEADER));
        assert!(text.contains(",update,visited_nodes,"));
        assert_eq!(read_csv(text.as_bytes()).unwrap(), recs);
        assert_eq!(to_csv_string(&[]).trim(), CSV_HEADER);
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn parse_options() {
        assert_eq!("float".parse::<Backend>().unwrap(), Backend::Float);
        assert_eq!(Backend::Rational.to_string(), "rational");
        assert!("double".parse::<Backend>().is_err());
        assert_eq!(
            "steps".parse::<MetricSelection>().unwrap(),
            MetricSelection::Steps
        );
        assert!("all".parse::<MetricSelection>().is_err());
    }
}
