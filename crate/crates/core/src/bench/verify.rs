use std::fmt;
use std::ops::RangeInclusive;

use crate::bench::{ScriptOp, Workload};
use crate::common::RangeSum;
use crate::error::{invalid, Result};
use crate::numeric::{Rational, Scalar};
use crate::oracle::DenseGrid;
use crate::{Tree1D, Tree2D, TreeND};

/// Largest extent `verify` accepts per dimension (the oracle is O(n^d) per op).
pub const MAX_VERIFY_SIZE: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySpec {
    pub dim: usize,
    pub sizes: Vec<usize>,
    pub ops: usize,
    pub seed: u64,
    pub value_range: (i64, i64),
}

impl Default for VerifySpec {
    fn default() -> Self {
        VerifySpec {
            dim: 2,
            sizes: vec![1, 2, 3, 5, 8, 16, 32],
            ops: 5000,
            seed: super::DEFAULT_SEED,
            value_range: (-100, 100),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Divergence {
    pub n: usize,
    pub op_index: usize,
    pub bounds: Vec<RangeInclusive<usize>>,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub queries_checked: usize,
    pub divergence: Option<Divergence>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.divergence.is_none()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.divergence {
            None => write!(
                f,
                "PASS: {} queries matched the oracle",
                self.queries_checked
            ),
            Some(d) => write!(
                f,
                "FAIL: n={} op #{} box {:?}: expected {}, got {} ({} queries matched before)",
                d.n, d.op_index, d.bounds, d.expected, d.actual, self.queries_checked
            ),
        }
    }
}

/// Replays `script` on `tree` and on a fresh oracle; stops at the first query
/// where they disagree.
pub fn verify_script<S: Scalar, T: RangeSum<S>>(
    tree: &mut T,
    script: &[ScriptOp],
) -> Result<VerifyReport> {
    let dims = tree.dims();
    let n = dims[0];
    let mut oracle = DenseGrid::<S>::new(&dims)?;
    let mut checked = 0;
    for (i, op) in script.iter().enumerate() {
        match op {
            ScriptOp::Update(b, c) => {
                let c = S::from_i64(*c);
                tree.update_box(b, c)?;
                oracle.update(b, c)?;
            }
            ScriptOp::Query(b) => {
                let expected = oracle.query(b)?;
                let actual = tree.query_box(b)?;
                if expected != actual {
                    return Ok(VerifyReport {
                        queries_checked: checked,
                        divergence: Some(Divergence {
                            n,
                            op_index: i,
                            bounds: b.clone(),
                            expected: expected.to_string(),
                            actual: actual.to_string(),
                        }),
                    });
                }
                checked += 1;
            }
        }
    }
    Ok(VerifyReport {
        queries_checked: checked,
        divergence: None,
    })
}

/// Oracle-equivalence run over every size in the spec, exact backend.
pub fn verify(spec: &VerifySpec) -> Result<VerifyReport> {
    if !(1..=3).contains(&spec.dim) {
        return Err(invalid(format!("dim must be 1, 2 or 3, got {}", spec.dim)));
    }
    if spec.sizes.is_empty() || spec.sizes.iter().any(|&n| n == 0 || n > MAX_VERIFY_SIZE) {
        return Err(invalid(format!(
            "verify sizes must be in 1..={MAX_VERIFY_SIZE}, got {:?}",
            spec.sizes
        )));
    }
    if spec.value_range.0 > spec.value_range.1 {
        return Err(invalid(format!("empty value range {:?}", spec.value_range)));
    }
    let mut total = 0;
    for &n in &spec.sizes {
        let dims = vec![n; spec.dim];
        let script =
            Workload::new(spec.seed, n as u64).mixed_script(&dims, spec.ops, spec.value_range);
        let report = match spec.dim {
            1 => verify_script(&mut Tree1D::<Rational>::new(n)?, &script)?,
            2 => verify_script(&mut Tree2D::<Rational>::new(n, n)?, &script)?,
            _ => verify_script(&mut TreeND::<Rational>::new(&dims)?, &script)?,
        };
        total += report.queries_checked;
        if !report.passed() {
            return Ok(VerifyReport {
                queries_checked: total,
                ..report
            });
        }
    }
    Ok(VerifyReport {
        queries_checked: total,
        divergence: None,
    })
}
