use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{invalid, Result};
use crate::numeric::Scalar;

/// Uniform interface over every tree (and the dense oracle) so that harnesses
/// can drive them with the same scripts. Boxes carry one inclusive range per
/// dimension.
pub trait RangeSum<S: Scalar> {
    fn dims(&self) -> Vec<usize>;

    fn update_box(&mut self, bounds: &[RangeInclusive<usize>], c: S) -> Result<()>;

    fn query_box(&self, bounds: &[RangeInclusive<usize>]) -> Result<S>;

    /// Visited node bodies since the last reset, as `(update, query)`.
    fn visits(&self) -> (u64, u64) {
        (0, 0)
    }

    fn reset_visits(&self) {}
}

/// Smallest power of two `>= n` (1 for `n == 0`).
pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

pub(crate) fn check_range(
    range: &RangeInclusive<usize>,
    len: usize,
    axis: &str,
) -> Result<(usize, usize)> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo > hi {
        return Err(invalid(format!("inverted {axis} range {lo}..={hi}")));
    }
    if hi >= len {
        return Err(invalid(format!(
            "{axis} range {lo}..={hi} out of bounds for extent {len}"
        )));
    }
    Ok((lo, hi))
}

pub(crate) fn check_dims(
    bounds: &[RangeInclusive<usize>],
    dims: &[usize],
) -> Result<Vec<(usize, usize)>> {
    if bounds.len() != dims.len() {
        return Err(invalid(format!(
            "box has {} ranges but the structure has {} dimensions",
            bounds.len(),
            dims.len()
        )));
    }
    bounds
        .iter()
        .zip(dims)
        .enumerate()
        .map(|(k, (r, &len))| check_range(r, len, &format!("dimension {k}")))
        .collect()
}

#[inline]
pub(crate) fn width(lo: usize, hi: usize) -> u64 {
    (hi - lo + 1) as u64
}

/// Saturating counter of node-body executions. Atomic so that read-only
/// queries can count through `&self` while the tree stays `Sync`.
#[derive(Debug, Default)]
pub(crate) struct VisitCounter(AtomicU64);

impl VisitCounter {
    pub(crate) fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }

    pub(crate) fn add(&self, n: u64) {
        let _ = self
            .0
            .fetch_update(Ordering::Relaxed, Ordering::Relaxed, |v| {
                Some(v.saturating_add(n))
            });
    }

    pub(crate) fn reset(&self) {
        self.0.store(0, Ordering::Relaxed);
    }
}

impl Clone for VisitCounter {
    fn clone(&self) -> Self {
        VisitCounter(AtomicU64::new(self.get()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::reversed_empty_ranges)]
    fn range_checks() {
        assert_eq!(check_range(&(1..=3), 4, "x").unwrap(), (1, 3));
        assert!(check_range(&(2..=1), 4, "x").is_err());
        assert!(check_range(&(0..=4), 4, "x").is_err());
    }

    #[test]
    fn counter_saturates() {
        let c = VisitCounter::default();
        c.add(u64::MAX - 1);
        c.add(5);
        assert_eq!(c.get(), u64::MAX);
        c.reset();
        assert_eq!(c.get(), 0);
    }

    #[test]
    fn pow2() {
        assert_eq!(next_pow2(1), 1);
        assert_eq!(next_pow2(5), 8);
        assert_eq!(next_pow2(900), 1024);
    }
}
