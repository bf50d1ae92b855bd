//! Two-dimensional range-add / range-sum segment tree.
//!
//! An outer tree splits the x-axis; every outer node owns a complete inner
//! tree over the y-axis. Each inner node carries two (value, lazy) channels:
//!
//! * **global** holds *intended* updates: mass from updates whose x-range
//!   covers the owning outer node entirely. Such mass is uniform along x
//!   within the node, so it may be diluted proportionally.
//! * **local** holds *dispersed* updates: at an outer node the update only
//!   partially overlaps, the increment is scaled by
//!   `trimmed_width / node_width` and spread over the whole node. The total
//!   is right but its distribution along x is not, so it is only read when a
//!   query covers the outer node completely.
//!
//! A query reads both channels (undiluted) at outer nodes it fully covers
//! and only the global channel, diluted by the covered x-fraction, at the
//! outer nodes it partially overlaps on the way down.
//!
//! Storage is one contiguous block indexed by `(outer slot, inner slot)`,
//! allocated at construction. Neither updates nor queries push lazies
//! downward; queries take `&self` and never write node data.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::common::{check_dims, check_range, next_pow2, width, RangeSum, VisitCounter};
use crate::error::{invalid, Result};
use crate::numeric::{ratio, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel<S> {
    pub value: S,
    pub lazy: S,
}

impl<S: Scalar> Channel<S> {
    pub fn zero() -> Self {
        Channel {
            value: S::zero(),
            lazy: S::zero(),
        }
    }

    /// Adds `c` to every cell of a node spanning `size` cells.
    #[inline]
    fn apply(&mut self, c: S, size: u64) -> Result<()> {
        self.value = self.value.checked_add(c.mul_count(size)?)?;
        self.lazy = self.lazy.checked_add(c)?;
        Ok(())
    }

    #[inline]
    fn recompute(&mut self, left: &Self, right: &Self, size: u64) -> Result<()> {
        self.value = left
            .value
            .checked_add(right.value)?
            .checked_add(self.lazy.mul_count(size)?)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerNode<S> {
    pub global: Channel<S>,
    pub local: Channel<S>,
}

/// Visited node bodies since the last reset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counters {
    pub update_visits: u64,
    pub query_visits: u64,
}

#[derive(Debug, Clone, Copy)]
struct Span {
    lo: usize,
    hi: usize,
}

impl Span {
    #[inline]
    fn covers(self, lo: usize, hi: usize) -> bool {
        self.lo <= lo && hi <= self.hi
    }

    #[inline]
    fn disjoint(self, lo: usize, hi: usize) -> bool {
        self.hi < lo || hi < self.lo
    }

    #[inline]
    fn trim(self, lo: usize, hi: usize) -> Span {
        Span {
            lo: self.lo.max(lo),
            hi: self.hi.min(hi),
        }
    }

    #[inline]
    fn width(self) -> u64 {
        width(self.lo, self.hi)
    }
}

/// Outer-node context threaded through the inner recursion.
#[derive(Clone, Copy)]
struct OuterCtx {
    base: usize,
    x1: usize,
    x2: usize,
    /// Update/query x-range, already trimmed for dispersed/partial passes.
    xs: Span,
    ys: Span,
}

impl OuterCtx {
    #[inline]
    fn complete(&self) -> bool {
        self.xs.covers(self.x1, self.x2)
    }

    #[inline]
    fn size(&self, y1: usize, y2: usize) -> u64 {
        width(self.x1, self.x2) * width(y1, y2)
    }
}

#[derive(Debug, Clone)]
pub struct Tree2D<S> {
    n: usize,
    m: usize,
    inner_slots: usize,
    nodes: Vec<InnerNode<S>>,
    update_visits: VisitCounter,
    query_visits: VisitCounter,
    dilute: bool,
}

impl<S: Scalar> Tree2D<S> {
    /// Zero-initialized `n × m` tree (`n` rows along x, `m` columns along y).
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(invalid(format!(
                "grid dimensions must be positive, got {n}x{m}"
            )));
        }
        let outer_slots = 2 * next_pow2(n);
        let inner_slots = 2 * next_pow2(m);
        let zero = InnerNode {
            global: Channel::zero(),
            local: Channel::zero(),
        };
        Ok(Tree2D {
            n,
            m,
            inner_slots,
            nodes: vec![zero; outer_slots * inner_slots],
            update_visits: VisitCounter::default(),
            query_visits: VisitCounter::default(),
            dilute: true,
        })
    }

    /// Inner-node count `new(n, m)` allocates.
    pub fn node_count_for(n: usize, m: usize) -> usize {
        4 * next_pow2(n) * next_pow2(m)
    }

    pub fn memory_estimate(n: usize, m: usize) -> usize {
        Self::node_count_for(n, m) * std::mem::size_of::<InnerNode<S>>()
    }

    /// Builds a tree holding `rows[x][y]`, loading each cell as a point update.
    pub fn from_array(rows: &[Vec<S>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err(invalid("array must be nonempty"));
        }
        if let Some(x) = rows.iter().position(|r| r.len() != m) {
            return Err(invalid(format!(
                "ragged array: row {x} has {} cells, expected {m}",
                rows[x].len()
            )));
        }
        let mut tree = Self::new(n, m)?;
        for (x, row) in rows.iter().enumerate() {
            for (y, &v) in row.iter().enumerate() {
                if !v.is_zero() {
                    tree.update(x..=x, y..=y, v)?;
                }
            }
        }
        tree.reset_counters();
        Ok(tree)
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    /// Flattened inner-node store, `outer_slot * inner_slots + inner_slot`.
    pub fn inner_nodes(&self) -> &[InnerNode<S>] {
        &self.nodes
    }

    pub fn counters(&self) -> Counters {
        Counters {
            update_visits: self.update_visits.get(),
            query_visits: self.query_visits.get(),
        }
    }

    pub fn reset_counters(&self) {
        self.update_visits.reset();
        self.query_visits.reset();
    }

    #[cfg(test)]
    pub(crate) fn disable_dilution(&mut self) {
        self.dilute = false;
    }

    /// Adds `c` to every cell in `xs × ys`.
    pub fn update(
        &mut self,
        xs: RangeInclusive<usize>,
        ys: RangeInclusive<usize>,
        c: S,
    ) -> Result<()> {
        let (x1, x2) = check_range(&xs, self.n, "x")?;
        let (y1, y2) = check_range(&ys, self.m, "y")?;
        let mut visited = 0;
        let res = self.update_by_x(
            1,
            0,
            self.n - 1,
            Span { lo: x1, hi: x2 },
            Span { lo: y1, hi: y2 },
            c,
            &mut visited,
        );
        self.update_visits.add(visited);
        res
    }

    #[allow(clippy::too_many_arguments)]
    fn update_by_x(
        &mut self,
        node: usize,
        x1: usize,
        x2: usize,
        xs: Span,
        ys: Span,
        c: S,
        visited: &mut u64,
    ) -> Result<()> {
        *visited += 1;
        let base = node * self.inner_slots;
        if xs.covers(x1, x2) {
            // intended update
            let ctx = OuterCtx {
                base,
                x1,
                x2,
                xs,
                ys,
            };
            return self.update_by_y(&ctx, 1, 0, self.m - 1, c, visited);
        }
        if xs.disjoint(x1, x2) {
            return Ok(());
        }
        let mid = (x1 + x2) / 2;
        self.update_by_x(2 * node, x1, mid, xs, ys, c, visited)?;
        self.update_by_x(2 * node + 1, mid + 1, x2, xs, ys, c, visited)?;
        // dispersed update with the trimmed range and scaled constant
        let trimmed = xs.trim(x1, x2);
        let scaled = c.scale(ratio(trimmed.width(), width(x1, x2))?)?;
        let ctx = OuterCtx {
            base,
            x1,
            x2,
            xs: trimmed,
            ys,
        };
        self.update_by_y(&ctx, 1, 0, self.m - 1, scaled, visited)
    }

    fn update_by_y(
        &mut self,
        ctx: &OuterCtx,
        node: usize,
        y1: usize,
        y2: usize,
        c: S,
        visited: &mut u64,
    ) -> Result<()> {
        *visited += 1;
        let idx = ctx.base + node;
        if ctx.ys.covers(y1, y2) {
            let size = ctx.size(y1, y2);
            let n = &mut self.nodes[idx];
            return if ctx.complete() {
                n.global.apply(c, size)
            } else {
                n.local.apply(c, size)
            };
        }
        if ctx.ys.disjoint(y1, y2) {
            return Ok(());
        }
        let mid = (y1 + y2) / 2;
        self.update_by_y(ctx, 2 * node, y1, mid, c, visited)?;
        self.update_by_y(ctx, 2 * node + 1, mid + 1, y2, c, visited)?;
        let size = ctx.size(y1, y2);
        let left = self.nodes[ctx.base + 2 * node];
        let right = self.nodes[ctx.base + 2 * node + 1];
        let n = &mut self.nodes[idx];
        n.local.recompute(&left.local, &right.local, size)?;
        n.global.recompute(&left.global, &right.global, size)
    }

    /// Sum of the cells in `xs × ys`.
    pub fn query(&self, xs: RangeInclusive<usize>, ys: RangeInclusive<usize>) -> Result<S> {
        let (x1, x2) = check_range(&xs, self.n, "x")?;
        let (y1, y2) = check_range(&ys, self.m, "y")?;
        let mut visited = 0;
        let res = self.query_by_x(
            1,
            0,
            self.n - 1,
            Span { lo: x1, hi: x2 },
            Span { lo: y1, hi: y2 },
            &mut visited,
        );
        self.query_visits.add(visited);
        res
    }

    pub fn point_query(&self, x: usize, y: usize) -> Result<S> {
        self.query(x..=x, y..=y)
    }

    fn query_by_x(
        &self,
        node: usize,
        x1: usize,
        x2: usize,
        xs: Span,
        ys: Span,
        visited: &mut u64,
    ) -> Result<S> {
        *visited += 1;
        let base = node * self.inner_slots;
        if xs.covers(x1, x2) {
            let ctx = OuterCtx {
                base,
                x1,
                x2,
                xs,
                ys,
            };
            return self.query_by_y(&ctx, 1, 0, self.m - 1, S::zero(), visited);
        }
        if xs.disjoint(x1, x2) {
            return Ok(S::zero());
        }
        let mid = (x1 + x2) / 2;
        let ctx = OuterCtx {
            base,
            x1,
            x2,
            xs: xs.trim(x1, x2),
            ys,
        };
        let partial = self.query_by_y(&ctx, 1, 0, self.m - 1, S::zero(), visited)?;
        let left = self.query_by_x(2 * node, x1, mid, xs, ys, visited)?;
        let right = self.query_by_x(2 * node + 1, mid + 1, x2, xs, ys, visited)?;
        partial.checked_add(left)?.checked_add(right)
    }

    fn query_by_y(
        &self,
        ctx: &OuterCtx,
        node: usize,
        y1: usize,
        y2: usize,
        lazy: S,
        visited: &mut u64,
    ) -> Result<S> {
        *visited += 1;
        let n = &self.nodes[ctx.base + node];
        let complete = ctx.complete();
        if ctx.ys.covers(y1, y2) {
            return if complete {
                n.local
                    .value
                    .checked_add(n.global.value)?
                    .checked_add(lazy.mul_count(ctx.size(y1, y2))?)
            } else {
                let trimmed = ctx.xs.width();
                let global = if self.dilute {
                    n.global
                        .value
                        .scale(ratio(trimmed, width(ctx.x1, ctx.x2))?)?
                } else {
                    n.global.value
                };
                global.checked_add(lazy.mul_count(trimmed * width(y1, y2))?)
            };
        }
        if ctx.ys.disjoint(y1, y2) {
            return Ok(S::zero());
        }
        let mut lazy = lazy.checked_add(n.global.lazy)?;
        if complete {
            lazy = lazy.checked_add(n.local.lazy)?;
        }
        let mid = (y1 + y2) / 2;
        self.query_by_y(ctx, 2 * node, y1, mid, lazy, visited)?
            .checked_add(self.query_by_y(ctx, 2 * node + 1, mid + 1, y2, lazy, visited)?)
    }

    /// Every cell value, `grid[x][y]`, via point queries.
    pub fn to_dense(&self) -> Result<Vec<Vec<S>>> {
        (0..self.n)
            .map(|x| (0..self.m).map(|y| self.point_query(x, y)).collect())
            .collect()
    }

    pub fn snapshot(&self) -> Result<Snapshot> {
        let cells = self
            .to_dense()?
            .into_iter()
            .flatten()
            .map(Scalar::to_json)
            .collect();
        Ok(Snapshot {
            version: SNAPSHOT_VERSION,
            n: self.n,
            m: self.m,
            cells,
        })
    }
}

pub const SNAPSHOT_VERSION: u32 = 1;

/// JSON export of a tree's cell values, row-major. Float cells are JSON
/// numbers; exact cells are strings `"p/q"` (or `"p"` for integers).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub version: u32,
    pub n: usize,
    pub m: usize,
    pub cells: Vec<Value>,
}

impl Snapshot {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("snapshot serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let snap: Snapshot =
            serde_json::from_str(s).map_err(|e| invalid(format!("bad snapshot: {e}")))?;
        if snap.version != SNAPSHOT_VERSION {
            return Err(invalid(format!(
                "unsupported snapshot version {}",
                snap.version
            )));
        }
        if snap.cells.len() != snap.n * snap.m {
            return Err(invalid(format!(
                "snapshot has {} cells, expected {}x{}",
                snap.cells.len(),
                snap.n,
                snap.m
            )));
        }
        Ok(snap)
    }

    pub fn grid<S: Scalar>(&self) -> Result<Vec<Vec<S>>> {
        self.cells
            .chunks(self.m.max(1))
            .map(|row| row.iter().map(S::from_json).collect())
            .collect()
    }

    pub fn to_tree<S: Scalar>(&self) -> Result<Tree2D<S>> {
        Tree2D::from_array(&self.grid()?)
    }
}

impl<S: Scalar> RangeSum<S> for Tree2D<S> {
    fn dims(&self) -> Vec<usize> {
        vec![self.n, self.m]
    }

    fn update_box(&mut self, bounds: &[RangeInclusive<usize>], c: S) -> Result<()> {
        let b = check_dims(bounds, &[self.n, self.m])?;
        self.update(b[0].0..=b[0].1, b[1].0..=b[1].1, c)
    }

    fn query_box(&self, bounds: &[RangeInclusive<usize>]) -> Result<S> {
        let b = check_dims(bounds, &[self.n, self.m])?;
        self.query(b[0].0..=b[0].1, b[1].0..=b[1].1)
    }

    fn visits(&self) -> (u64, u64) {
        let c = self.counters();
        (c.update_visits, c.query_visits)
    }

    fn reset_visits(&self) {
        self.reset_counters();
    }
}
