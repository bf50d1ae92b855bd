//! Dense-array reference: literal nested loops over every cell.

use std::ops::RangeInclusive;

use crate::common::{check_dims, RangeSum};
use crate::error::{invalid, Result};
use crate::numeric::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseGrid<S> {
    dims: Vec<usize>,
    cells: Vec<S>,
}

impl<S: Scalar> DenseGrid<S> {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(invalid(format!(
                "grid extents must be nonempty and positive, got {dims:?}"
            )));
        }
        Ok(DenseGrid {
            dims: dims.to_vec(),
            cells: vec![S::zero(); dims.iter().product()],
        })
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(invalid("ragged rows"));
        }
        let mut g = Self::new(&[rows.len(), m])?;
        g.cells = rows.iter().flatten().copied().collect();
        Ok(g)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Row-major cells (last dimension fastest).
    pub fn cells(&self) -> &[S] {
        &self.cells
    }

    pub fn get(&self, at: &[usize]) -> Result<S> {
        let bounds: Vec<_> = at.iter().map(|&i| i..=i).collect();
        let b = check_dims(&bounds, &self.dims)?;
        let idx = b
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&(i, _), &e)| acc * e + i);
        Ok(self.cells[idx])
    }

    /// Calls `f` on the flat index of every cell inside the box.
    fn for_each_index(
        &self,
        b: &[(usize, usize)],
        mut f: impl FnMut(usize) -> Result<()>,
    ) -> Result<()> {
        let mut at: Vec<usize> = b.iter().map(|&(lo, _)| lo).collect();
        loop {
            let idx = at
                .iter()
                .zip(&self.dims)
                .fold(0, |acc, (&i, &e)| acc * e + i);
            f(idx)?;
            // odometer increment, last dimension fastest
            let mut k = at.len();
            loop {
                if k == 0 {
                    return Ok(());
                }
                k -= 1;
                if at[k] < b[k].1 {
                    at[k] += 1;
                    break;
                }
                at[k] = b[k].0;
            }
        }
    }

    pub fn update(&mut self, bounds: &[RangeInclusive<usize>], c: S) -> Result<()> {
        let b = check_dims(bounds, &self.dims)?;
        let mut cells = std::mem::take(&mut self.cells);
        let res = self.for_each_index(&b, |i| {
            cells[i] = cells[i].checked_add(c)?;
            Ok(())
        });
        self.cells = cells;
        res
    }

    pub fn query(&self, bounds: &[RangeInclusive<usize>]) -> Result<S> {
        let b = check_dims(bounds, &self.dims)?;
        let mut sum = S::zero();
        self.for_each_index(&b, |i| {
            sum = sum.checked_add(self.cells[i])?;
            Ok(())
        })?;
        Ok(sum)
    }
}

impl<S: Scalar> RangeSum<S> for DenseGrid<S> {
    fn dims(&self) -> Vec<usize> {
        self.dims.clone()
    }

    fn update_box(&mut self, bounds: &[RangeInclusive<usize>], c: S) -> Result<()> {
        self.update(bounds, c)
    }

    fn query_box(&self, bounds: &[RangeInclusive<usize>]) -> Result<S> {
        self.query(bounds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Rational;
    use proptest::prelude::*;

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn full_box_update() {
        let mut g = DenseGrid::<Rational>::new(&[3, 4]).unwrap();
        g.update(&[0..=2, 0..=3], r(5)).unwrap();
        assert!(g.cells().iter().all(|&v| v == r(5)));
    }

    #[test]
    fn overlapping_updates() {
        let mut g = DenseGrid::<Rational>::new(&[4, 4]).unwrap();
        g.update(&[0..=2, 0..=2], r(2)).unwrap();
        g.update(&[1..=3, 1..=3], r(3)).unwrap();
        assert_eq!(g.get(&[1, 2]).unwrap(), r(5));
        assert_eq!(g.get(&[0, 0]).unwrap(), r(2));
        assert_eq!(g.get(&[3, 3]).unwrap(), r(3));
    }

    #[test]
    fn row_update() {
        let mut g = DenseGrid::<Rational>::new(&[2, 2]).unwrap();
        g.update(&[0..=0, 0..=1], r(3)).unwrap();
        assert_eq!(g.cells(), &[r(3), r(3), r(0), r(0)]);
    }

    #[test]
    fn queries() {
        let g = DenseGrid::<Rational>::new(&[3, 3, 3]).unwrap();
        assert_eq!(g.query(&[0..=2, 0..=2, 0..=2]).unwrap(), r(0));
        let ones = DenseGrid::from_rows(&vec![vec![r(1); 5]; 4]).unwrap();
        assert_eq!(ones.query(&[1..=2, 0..=3]).unwrap(), r(8));
        let g = DenseGrid::from_rows(&[vec![r(1), r(2)], vec![r(3), r(4)]]).unwrap();
        assert_eq!(g.query(&[0..=1, 0..=1]).unwrap(), r(10));
    }

    #[test]
    fn errors() {
        assert!(DenseGrid::<f64>::new(&[]).is_err());
        assert!(DenseGrid::<f64>::new(&[2, 0]).is_err());
        let mut g = DenseGrid::<f64>::new(&[2, 2]).unwrap();
        assert!(g.update(&[0..=2, 0..=0], 1.0).is_err());
        assert!(g.query(&[0..=0]).is_err());
        assert!(DenseGrid::from_rows(&[vec![1.0], vec![]]).is_err());
    }

    proptest! {
        #[test]
        fn partition_sums_to_whole(vals in proptest::collection::vec(-50i64..50, 24),
                                   split_x in 0usize..3, split_y in 0usize..7) {
            let rows: Vec<Vec<Rational>> = vals.chunks(6).map(|c| c.iter().map(|&v| r(v)).collect()).collect();
            let g = DenseGrid::from_rows(&rows).unwrap();
            let whole = g.query(&[0..=3, 0..=5]).unwrap();
            let (sx, sy) = (split_x, split_y.min(4));
            let parts = [
                g.query(&[0..=sx, 0..=sy]).unwrap(),
                g.query(&[0..=sx, sy + 1..=5]).unwrap(),
                g.query(&[sx + 1..=3, 0..=sy]).unwrap(),
                g.query(&[sx + 1..=3, sy + 1..=5]).unwrap(),
            ];
            let total = parts.iter().try_fold(Rational::ZERO, |a, &b| a.checked_add(b)).unwrap();
            prop_assert_eq!(whole, total);
        }
    }
}
