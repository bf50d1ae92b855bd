//! Classic one-dimensional segment tree with lazy range-add.
//!
//! Nodes live in a heap-indexed array (root at 1, children `2i` and `2i+1`).
//! Updates never push pending increments down: a fully covered node absorbs
//! the increment into its own `value` and `lazy`, and ancestors recompute
//! `value = left + right + lazy * width` on the way back. Queries carry the
//! sum of ancestor lazies as an accumulator, so they never write.

use std::ops::RangeInclusive;

use crate::common::{check_dims, check_range, next_pow2, width, RangeSum, VisitCounter};
use crate::error::{invalid, Result};
use crate::numeric::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node1D<S> {
    pub value: S,
    pub lazy: S,
}

#[derive(Debug, Clone)]
pub struct Tree1D<S> {
    n: usize,
    nodes: Vec<Node1D<S>>,
    visits: VisitCounter,
}

impl<S: Scalar> Tree1D<S> {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("tree length must be at least 1"));
        }
        let zero = Node1D {
            value: S::zero(),
            lazy: S::zero(),
        };
        Ok(Tree1D {
            n,
            nodes: vec![zero; 2 * next_pow2(n)],
            visits: VisitCounter::default(),
        })
    }

    /// Bytes the node store of a tree over `n` elements would occupy.
    pub fn memory_estimate(n: usize) -> usize {
        2 * next_pow2(n) * std::mem::size_of::<Node1D<S>>()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[Node1D<S>] {
        &self.nodes
    }

    pub fn visits(&self) -> u64 {
        self.visits.get()
    }

    pub fn reset_visits(&self) {
        self.visits.reset();
    }

    /// Adds `c` to every element in `range`.
    pub fn update(&mut self, range: RangeInclusive<usize>, c: S) -> Result<()> {
        let (l, r) = check_range(&range, self.n, "index")?;
        let mut visited = 0;
        let res = self.update_rec(1, 0, self.n - 1, l, r, c, &mut visited);
        self.visits.add(visited);
        res
    }

    #[allow(clippy::too_many_arguments)]
    fn update_rec(
        &mut self,
        node: usize,
        lo: usize,
        hi: usize,
        l: usize,
        r: usize,
        c: S,
        visited: &mut u64,
    ) -> Result<()> {
        *visited += 1;
        if r < lo || hi < l {
            return Ok(());
        }
        let w = width(lo, hi);
        if l <= lo && hi <= r {
            let n = &mut self.nodes[node];
            n.value = n.value.checked_add(c.mul_count(w)?)?;
            n.lazy = n.lazy.checked_add(c)?;
            return Ok(());
        }
        let mid = (lo + hi) / 2;
        self.update_rec(2 * node, lo, mid, l, r, c, visited)?;
        self.update_rec(2 * node + 1, mid + 1, hi, l, r, c, visited)?;
        let pending = self.nodes[node].lazy.mul_count(w)?;
        self.nodes[node].value = self.nodes[2 * node]
            .value
            .checked_add(self.nodes[2 * node + 1].value)?
            .checked_add(pending)?;
        Ok(())
    }

    /// Sum of the elements in `range`.
    pub fn query(&self, range: RangeInclusive<usize>) -> Result<S> {
        let (l, r) = check_range(&range, self.n, "index")?;
        let mut visited = 0;
        let res = self.query_rec(1, 0, self.n - 1, l, r, S::zero(), &mut visited);
        self.visits.add(visited);
        res
    }

    #[allow(clippy::too_many_arguments)]
    fn query_rec(
        &self,
        node: usize,
        lo: usize,
        hi: usize,
        l: usize,
        r: usize,
        lazy: S,
        visited: &mut u64,
    ) -> Result<S> {
        *visited += 1;
        if r < lo || hi < l {
            return Ok(S::zero());
        }
        let n = &self.nodes[node];
        if l <= lo && hi <= r {
            return n.value.checked_add(lazy.mul_count(width(lo, hi))?);
        }
        let lazy = lazy.checked_add(n.lazy)?;
        let mid = (lo + hi) / 2;
        self.query_rec(2 * node, lo, mid, l, r, lazy, visited)?
            .checked_add(self.query_rec(2 * node + 1, mid + 1, hi, l, r, lazy, visited)?)
    }
}

impl<S: Scalar> RangeSum<S> for Tree1D<S> {
    fn dims(&self) -> Vec<usize> {
        vec![self.n]
    }

    fn update_box(&mut self, bounds: &[RangeInclusive<usize>], c: S) -> Result<()> {
        let b = check_dims(bounds, &[self.n])?;
        self.update(b[0].0..=b[0].1, c)
    }

    fn query_box(&self, bounds: &[RangeInclusive<usize>]) -> Result<S> {
        let b = check_dims(bounds, &[self.n])?;
        self.query(b[0].0..=b[0].1)
    }

    // A 1D tree has a single counter; it is reported on both sides.
    fn visits(&self) -> (u64, u64) {
        let v = self.visits();
        (v, v)
    }

    fn reset_visits(&self) {
        Tree1D::reset_visits(self);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Rational;
    use crate::Error;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn zero_initialized() {
        let t = Tree1D::<Rational>::new(6).unwrap();
        assert_eq!(t.query(0..=5).unwrap(), r(0));
    }

    #[test]
    fn single_leaf() {
        let mut t = Tree1D::<Rational>::new(1).unwrap();
        t.update(0..=0, r(7)).unwrap();
        assert_eq!(t.query(0..=0).unwrap(), r(7));
    }

    #[test]
    fn uniform_update() {
        let mut t = Tree1D::<Rational>::new(5).unwrap();
        t.update(0..=4, r(3)).unwrap();
        assert_eq!(t.query(1..=3).unwrap(), r(9));
    }

    #[test]
    fn two_elements() {
        let mut t = Tree1D::<Rational>::new(8).unwrap();
        t.update(3..=4, r(1)).unwrap();
        assert_eq!(t.query(0..=7).unwrap(), r(2));
    }

    #[test]
    fn cancellation() {
        let mut t = Tree1D::<Rational>::new(8).unwrap();
        t.update(0..=7, r(-2)).unwrap();
        t.update(0..=7, r(2)).unwrap();
        assert_eq!(t.query(2..=5).unwrap(), r(0));
    }

    #[test]
    fn full_range_update_scales_with_width() {
        let mut t = Tree1D::<f64>::new(13).unwrap();
        t.update(0..=12, 2.5).unwrap();
        assert_eq!(t.query(3..=9).unwrap(), 7.0 * 2.5);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            Tree1D::<f64>::new(0),
            Err(Error::InvalidArgument(_))
        ));
        let mut t = Tree1D::<f64>::new(4).unwrap();
        assert!(t.update(2..=4, 1.0).is_err());
        #[allow(clippy::reversed_empty_ranges)]
        let inverted = 3..=1;
        assert!(t.update(inverted.clone(), 1.0).is_err());
        assert!(t.query(inverted).is_err());
        assert!(t.query(0..=4).is_err());
    }

    #[test]
    fn random_script_matches_dense_array() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 16;
        let mut t = Tree1D::<Rational>::new(n).unwrap();
        let mut dense = vec![0i64; n];
        for _ in 0..200 {
            let (mut a, mut b) = (rng.random_range(0..n), rng.random_range(0..n));
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            if rng.random_bool(0.5) {
                let c = rng.random_range(-100..=100);
                t.update(a..=b, r(c)).unwrap();
                dense[a..=b].iter_mut().for_each(|v| *v += c);
            } else {
                assert_eq!(t.query(a..=b).unwrap(), r(dense[a..=b].iter().sum()));
            }
        }
    }

    #[test]
    fn node_store_bound() {
        for n in [1, 2, 3, 5, 100, 1000, 4096] {
            let t = Tree1D::<f64>::new(n).unwrap();
            assert!(t.nodes().len() <= 2 * next_pow2(n));
        }
    }

    #[test]
    fn visits_are_logarithmic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1usize, 2, 3, 7, 64, 100, 1000, 4096] {
            let mut t = Tree1D::<f64>::new(n).unwrap();
            let bound = 4 * (n.next_power_of_two().trailing_zeros() as u64 + 1);
            for _ in 0..500 {
                let (mut a, mut b) = (rng.random_range(0..n), rng.random_range(0..n));
                if a > b {
                    std::mem::swap(&mut a, &mut b);
                }
                t.reset_visits();
                t.update(a..=b, 1.0).unwrap();
                assert!(t.visits() <= bound, "update n={n} visits={}", t.visits());
                t.reset_visits();
                t.query(a..=b).unwrap();
                assert!(t.visits() <= bound, "query n={n} visits={}", t.visits());
            }
        }
    }

    #[test]
    fn query_is_read_only() {
        let mut t = Tree1D::<Rational>::new(9).unwrap();
        t.update(2..=6, r(4)).unwrap();
        let before = t.nodes().to_vec();
        for a in 0..9 {
            for b in a..9 {
                t.query(a..=b).unwrap();
            }
        }
        assert_eq!(before, t.nodes());
    }
}
