use std::collections::BTreeSet;

use crate::bench::BenchRecord;
use crate::error::{invalid, Result};

pub const MIN_FIT_SIZES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    /// Coefficient of `c * (log2 n)^d`.
    pub c: f64,
    /// Coefficient of determination, clamped to `[0, 1]`.
    pub r_squared: f64,
}

/// Least-squares fit of `mean ≈ c * (log2 n)^d` through the origin.
///
/// All records must belong to one series (same op and metric). R² is
/// `1 - SS_res / SS_tot` against the sample mean, clamped to `[0, 1]`; a
/// series with zero variance gets R² = 0 unless it is fitted exactly.
pub fn fit_curve(records: &[BenchRecord], d: u32) -> Result<FitResult> {
    if let Some(first) = records.first() {
        if records
            .iter()
            .any(|r| r.op != first.op || r.metric != first.metric)
        {
            return Err(invalid(
                "fit_curve needs records from a single op/metric series",
            ));
        }
    }
    let sizes: BTreeSet<usize> = records.iter().map(|r| r.n).collect();
    if sizes.len() < MIN_FIT_SIZES {
        return Err(invalid(format!(
            "need at least {MIN_FIT_SIZES} distinct sizes to fit, got {}",
            sizes.len()
        )));
    }
    if sizes.contains(&0) {
        return Err(invalid("size 0 has no logarithm"));
    }
    let points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| ((r.n as f64).log2().powi(d as i32), r.mean))
        .collect();
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    if sxx == 0.0 {
        return Err(invalid("all sizes have log2 n = 0"));
    }
    let c = sxy / sxx;
    let mean_y = points.iter().map(|(_, y)| y).sum::<f64>() / points.len() as f64;
    let ss_res: f64 = points.iter().map(|(x, y)| (y - c * x).powi(2)).sum();
    let ss_tot: f64 = points.iter().map(|(_, y)| (y - mean_y).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    Ok(FitResult { c, r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{Metric, OpKind};

    fn rec(n: usize, mean: f64) -> BenchRecord {
        BenchRecord {
            n,
            op: OpKind::Query,
            metric: Metric::VisitedNodes,
            mean,
            std: 0.0,
            samples: 1,
        }
    }

    #[test]
    fn exact_log_squared() {
        let recs: Vec<_> = [16, 32, 64, 128, 256, 512, 1024]
            .iter()
            .map(|&n| rec(n, 3.0 * (n as f64).log2().powi(2)))
            .collect();
        let fit = fit_curve(&recs, 2).unwrap();
        assert!((fit.c - 3.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_series_fits_poorly() {
        let recs: Vec<_> = [16, 64, 256, 1024].iter().map(|&n| rec(n, 50.0)).collect();
        let fit = fit_curve(&recs, 2).unwrap();
        assert!(fit.r_squared <= 0.05, "{fit:?}");
    }

    #[test]
    fn exact_cubic() {
        let recs: Vec<_> = [4, 8, 16, 32]
            .iter()
            .map(|&n| rec(n, 0.5 * (n as f64).log2().powi(3)))
            .collect();
        let fit = fit_curve(&recs, 3).unwrap();
        assert!((fit.c - 0.5).abs() < 1e-12 && fit.r_squared > 0.999_999);
    }

    #[test]
    fn too_few_sizes() {
        let recs: Vec<_> = [16, 32, 64, 64].iter().map(|&n| rec(n, 1.0)).collect();
        assert!(fit_curve(&recs, 2).is_err());
        assert!(fit_curve(&[], 2).is_err());
    }

    #[test]
    fn mixed_series_rejected() {
        let mut recs: Vec<_> = [16, 32, 64, 128].iter().map(|&n| rec(n, 1.0)).collect();
        recs[0].op = OpKind::Update;
        assert!(fit_curve(&recs, 2).is_err());
    }
}
