//! d-dimensional range-add / range-sum tree (1 ≤ d ≤ 4).
//!
//! Dimensions `0..d-1` are *outer* dimensions: each node of a dimension-k
//! tree owns a complete dimension-(k+1) tree. All mass lives in the
//! innermost trees, where every node holds one (value, lazy) channel per
//! [`ChannelMask`] — a subset of the outer dimensions.
//!
//! Bit k of a mask is set when the update that wrote into the channel
//! covered the enclosing node along outer dimension k (the mass is uniform
//! along k there), and clear when it was dispersed along k (scaled by
//! `trimmed_width_k / node_width_k` and spread over the node). With d = 2,
//! mask `1` is the global channel and mask `0` the local channel of
//! [`Tree2D`](crate::Tree2D).
//!
//! A query classifies each outer dimension as complete or partial along its
//! path. A channel is admissible iff its mask has every partial dimension's
//! bit set; admissible values are diluted by the product of
//! `trimmed_width_k / node_width_k` over the partial dimensions, and
//! admissible lazies are accumulated on the way down the innermost tree.
//!
//! This channel layout is one concrete realization of the dimension-by-
//! dimension induction; the d = 2 case coincides with `Tree2D`, and the
//! d = 3 case is checked against the dense oracle.

use std::ops::RangeInclusive;

use crate::common::{check_dims, next_pow2, width, RangeSum, VisitCounter};
use crate::error::{invalid, Result};
use crate::numeric::{ratio, Scalar};
use crate::segtree2d::Channel;

pub const MAX_DIMS: usize = 4;

/// Subset of outer dimensions, bit k set ⇔ covered along dimension k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChannelMask(pub u8);

impl ChannelMask {
    pub fn is_covered(self, dim: usize) -> bool {
        self.0 & (1 << dim) != 0
    }

    /// A channel may contribute to a query whose partial dimensions are
    /// `partial` only if it is covered along all of them.
    pub fn admissible(self, partial: ChannelMask) -> bool {
        self.0 & partial.0 == partial.0
    }
}

#[derive(Debug, Clone)]
pub struct TreeND<S> {
    dims: Vec<usize>,
    slots: Vec<usize>,
    channels: usize,
    nodes: Vec<Channel<S>>,
    update_visits: VisitCounter,
    query_visits: VisitCounter,
}

#[derive(Clone, Copy)]
struct Frame {
    /// Flattened slot index of the enclosing outer nodes.
    prefix: usize,
    /// Product of the enclosing outer node widths.
    node_cells: u64,
    /// Product of the trimmed widths (queries only).
    trim_cells: u64,
    mask: u8,
}

impl<S: Scalar> TreeND<S> {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() || dims.len() > MAX_DIMS {
            return Err(invalid(format!(
                "dimension count must be in 1..={MAX_DIMS}, got {}",
                dims.len()
            )));
        }
        if let Some(k) = dims.iter().position(|&e| e == 0) {
            return Err(invalid(format!("extent of dimension {k} is zero")));
        }
        let slots: Vec<usize> = dims.iter().map(|&e| 2 * next_pow2(e)).collect();
        let channels = 1 << (dims.len() - 1);
        let node_count = Self::node_count_for(dims);
        Ok(TreeND {
            dims: dims.to_vec(),
            slots,
            channels,
            nodes: vec![Channel::zero(); node_count * channels],
            update_visits: VisitCounter::default(),
            query_visits: VisitCounter::default(),
        })
    }

    /// Innermost node count for `dims`: `Π 2·nextpow2(dims[k])`.
    pub fn node_count_for(dims: &[usize]) -> usize {
        dims.iter().map(|&e| 2 * next_pow2(e)).product()
    }

    pub fn memory_estimate(dims: &[usize]) -> usize {
        let channels = 1usize << dims.len().saturating_sub(1);
        Self::node_count_for(dims) * channels * std::mem::size_of::<Channel<S>>()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn channel_count(&self) -> usize {
        self.channels
    }

    /// Flattened channel store: `node_index * channel_count + mask`.
    pub fn channels(&self) -> &[Channel<S>] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len() / self.channels
    }

    pub fn visits(&self) -> (u64, u64) {
        (self.update_visits.get(), self.query_visits.get())
    }

    pub fn reset_visits(&self) {
        self.update_visits.reset();
        self.query_visits.reset();
    }

    fn last(&self) -> usize {
        self.dims.len() - 1
    }

    /// Adds `c` to every cell of the box.
    pub fn update(&mut self, bounds: &[RangeInclusive<usize>], c: S) -> Result<()> {
        let b = check_dims(bounds, &self.dims)?;
        let mut visited = 0;
        let top = Frame {
            prefix: 0,
            node_cells: 1,
            trim_cells: 1,
            mask: 0,
        };
        let res = self.update_level(0, top, &b, c, &mut visited);
        self.update_visits.add(visited);
        res
    }

    fn update_level(
        &mut self,
        k: usize,
        frame: Frame,
        b: &[(usize, usize)],
        c: S,
        visited: &mut u64,
    ) -> Result<()> {
        if k == self.last() {
            self.update_inner(1, 0, self.dims[k] - 1, frame, b[k], c, visited)
        } else {
            self.update_outer(k, 1, 0, self.dims[k] - 1, frame, b, c, visited)
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn update_outer(
        &mut self,
        k: usize,
        node: usize,
        lo: usize,
        hi: usize,
        frame: Frame,
        b: &[(usize, usize)],
        c: S,
        visited: &mut u64,
    ) -> Result<()> {
        *visited += 1;
        let (a, z) = b[k];
        if z < lo || hi < a {
            return Ok(());
        }
        let w = width(lo, hi);
        let inner = Frame {
            prefix: frame.prefix * self.slots[k] + node,
            node_cells: frame.node_cells * w,
            ..frame
        };
        if a <= lo && hi <= z {
            let covered = Frame {
                mask: frame.mask | (1 << k),
                ..inner
            };
            return self.update_level(k + 1, covered, b, c, visited);
        }
        let mid = (lo + hi) / 2;
        self.update_outer(k, 2 * node, lo, mid, frame, b, c, visited)?;
        self.update_outer(k, 2 * node + 1, mid + 1, hi, frame, b, c, visited)?;
        let trimmed = width(a.max(lo), z.min(hi));
        let scaled = c.scale(ratio(trimmed, w)?)?;
        self.update_level(k + 1, inner, b, scaled, visited)
    }

    #[allow(clippy::too_many_arguments)]
    fn update_inner(
        &mut self,
        node: usize,
        lo: usize,
        hi: usize,
        frame: Frame,
        (a, z): (usize, usize),
        c: S,
        visited: &mut u64,
    ) -> Result<()> {
        *visited += 1;
        if z < lo || hi < a {
            return Ok(());
        }
        let size = frame.node_cells * width(lo, hi);
        let row = frame.prefix * self.slots[self.last()];
        let ch = frame.mask as usize;
        let idx = (row + node) * self.channels + ch;
        if a <= lo && hi <= z {
            let n = &mut self.nodes[idx];
            n.value = n.value.checked_add(c.mul_count(size)?)?;
            n.lazy = n.lazy.checked_add(c)?;
            return Ok(());
        }
        let mid = (lo + hi) / 2;
        self.update_inner(2 * node, lo, mid, frame, (a, z), c, visited)?;
        self.update_inner(2 * node + 1, mid + 1, hi, frame, (a, z), c, visited)?;
        let left = self.nodes[(row + 2 * node) * self.channels + ch].value;
        let right = self.nodes[(row + 2 * node + 1) * self.channels + ch].value;
        let n = &mut self.nodes[idx];
        n.value = left
            .checked_add(right)?
            .checked_add(n.lazy.mul_count(size)?)?;
        Ok(())
    }

    /// Sum over the box.
    pub fn query(&self, bounds: &[RangeInclusive<usize>]) -> Result<S> {
        let b = check_dims(bounds, &self.dims)?;
        let mut visited = 0;
        let top = Frame {
            prefix: 0,
            node_cells: 1,
            trim_cells: 1,
            mask: 0,
        };
        let res = self.query_level(0, top, &b, &mut visited);
        self.query_visits.add(visited);
        res
    }

    fn query_level(
        &self,
        k: usize,
        frame: Frame,
        b: &[(usize, usize)],
        visited: &mut u64,
    ) -> Result<S> {
        if k == self.last() {
            self.query_inner(1, 0, self.dims[k] - 1, frame, b[k], S::zero(), visited)
        } else {
            self.query_outer(k, 1, 0, self.dims[k] - 1, frame, b, visited)
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn query_outer(
        &self,
        k: usize,
        node: usize,
        lo: usize,
        hi: usize,
        frame: Frame,
        b: &[(usize, usize)],
        visited: &mut u64,
    ) -> Result<S> {
        *visited += 1;
        let (a, z) = b[k];
        if z < lo || hi < a {
            return Ok(S::zero());
        }
        let w = width(lo, hi);
        let prefix = frame.prefix * self.slots[k] + node;
        if a <= lo && hi <= z {
            let complete = Frame {
                prefix,
                node_cells: frame.node_cells * w,
                trim_cells: frame.trim_cells * w,
                mask: frame.mask,
            };
            return self.query_level(k + 1, complete, b, visited);
        }
        let partial = Frame {
            prefix,
            node_cells: frame.node_cells * w,
            trim_cells: frame.trim_cells * width(a.max(lo), z.min(hi)),
            mask: frame.mask | (1 << k),
        };
        let here = self.query_level(k + 1, partial, b, visited)?;
        let mid = (lo + hi) / 2;
        let left = self.query_outer(k, 2 * node, lo, mid, frame, b, visited)?;
        let right = self.query_outer(k, 2 * node + 1, mid + 1, hi, frame, b, visited)?;
        here.checked_add(left)?.checked_add(right)
    }

    #[allow(clippy::too_many_arguments)]
    fn query_inner(
        &self,
        node: usize,
        lo: usize,
        hi: usize,
        frame: Frame,
        (a, z): (usize, usize),
        lazy: S,
        visited: &mut u64,
    ) -> Result<S> {
        *visited += 1;
        if z < lo || hi < a {
            return Ok(S::zero());
        }
        let base = (frame.prefix * self.slots[self.last()] + node) * self.channels;
        let partial = ChannelMask(frame.mask);
        let admissible = self.nodes[base..base + self.channels]
            .iter()
            .enumerate()
            .filter(|(ch, _)| ChannelMask(*ch as u8).admissible(partial));
        if a <= lo && hi <= z {
            let mut value = S::zero();
            for (_, n) in admissible {
                value = value.checked_add(n.value)?;
            }
            if frame.mask != 0 {
                value = value.scale(ratio(frame.trim_cells, frame.node_cells)?)?;
            }
            return value.checked_add(lazy.mul_count(frame.trim_cells * width(lo, hi))?);
        }
        let mut lazy = lazy;
        for (_, n) in admissible {
            lazy = lazy.checked_add(n.lazy)?;
        }
        let mid = (lo + hi) / 2;
        self.query_inner(2 * node, lo, mid, frame, (a, z), lazy, visited)?
            .checked_add(self.query_inner(
                2 * node + 1,
                mid + 1,
                hi,
                frame,
                (a, z),
                lazy,
                visited,
            )?)
    }
}

impl<S: Scalar> RangeSum<S> for TreeND<S> {
    fn dims(&self) -> Vec<usize> {
        self.dims.clone()
    }

    fn update_box(&mut self, bounds: &[RangeInclusive<usize>], c: S) -> Result<()> {
        self.update(bounds, c)
    }

    fn query_box(&self, bounds: &[RangeInclusive<usize>]) -> Result<S> {
        self.query(bounds)
    }

    fn visits(&self) -> (u64, u64) {
        TreeND::visits(self)
    }

    fn reset_visits(&self) {
        TreeND::reset_visits(self);
    }
}
