//! Multidimensional segment trees supporting range-add updates and
//! range-sum queries in `O(log^d n)` per operation.
//!
//! * [`Tree1D`]: classic lazy segment tree.
//! * [`Tree2D`]: outer x-tree of inner y-trees with global/local channels,
//!   intended/dispersed updates and partial/complete queries.
//! * [`TreeND`]: the same scheme for up to four dimensions.
//! * [`DenseGrid`]: brute-force reference used by the test suites.
//!
//! Trees are generic over a [`Scalar`] backend: `f64` for speed or
//! [`Rational`] for exact results.
//!
//! ```
//! use mdsegtree::{Rational, Tree2D};
//!
//! let mut t = Tree2D::<Rational>::new(4, 4)?;
//! t.update(1..=2, 1..=2, Rational::from(5))?;
//! assert_eq!(t.query(2..=3, 0..=1)?, Rational::from(5));
//! # Ok::<(), mdsegtree::Error>(())
//! ```

pub mod bench;
mod common;
mod error;
pub mod numeric;
pub mod oracle;
pub mod segtree1d;
pub mod segtree2d;
pub mod segtreend;

pub use common::{next_pow2, RangeSum};
pub use error::{Error, Result};
pub use numeric::{ratio, Ratio, Rational, Scalar};
pub use oracle::DenseGrid;
pub use segtree1d::{Node1D, Tree1D};
pub use segtree2d::{Channel, Counters, InnerNode, Snapshot, Tree2D};
pub use segtreend::{ChannelMask, TreeND, MAX_DIMS};
