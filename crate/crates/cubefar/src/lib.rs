//! Exact intrinsic geometry of the boundary of the 3-cube and the 4-cube.
//!
//! The crate computes geodesic distances on ∂I⁴ from 26 unfolded images of
//! the source point, the farthest-point map as an exact argmax over Voronoi
//! corners, orbits of `ι∘f`, source and star unfoldings, and the intrinsic
//! radius and diameter. An independent brute-force unfolding oracle checks
//! the distance formula and the farthest points.
//!
//! ```
//! use cubefar::{cube::DeltaPoint, exact::rat, farthest::farthest_fundamental};
//!
//! let p = DeltaPoint::new(rat(2, 5), rat(1, 3), rat(1, 4)).unwrap();
//! let f = farthest_fundamental(&p).unwrap();
//! assert_eq!(f.points[0].point.to_string(), "57/88,39/56,3/4,1");
//! ```

pub mod audit;
pub mod cells;
pub mod corners;
pub mod cube;
pub mod dynamics;
pub mod exact;
pub mod export;
pub mod farthest;
pub mod metrics;
pub mod oracle;
pub mod region;
pub mod walls;

pub use exact::{QPoint, Rat};

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("point is not on the cube boundary: {0}")]
    NotOnBoundary(String),
    #[error("point is outside the domain: {0}")]
    OutOfDomain(String),
    #[error("facets {0} and {1} are not adjacent")]
    NotAdjacent(String, String),
    #[error("invalid unfolding sequence: {0}")]
    InvalidSequence(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

/// The guide, compiled so that its code blocks run as doctests.
pub mod guide {
    #[doc = include_str!("../../../book/src/intro.md")]
    pub mod intro {}
    #[doc = include_str!("../../../book/src/exact.md")]
    pub mod exact {}
    #[doc = include_str!("../../../book/src/unfolding.md")]
    pub mod unfolding {}
    #[doc = include_str!("../../../book/src/regions.md")]
    pub mod regions {}
    #[doc = include_str!("../../../book/src/farthest.md")]
    pub mod farthest {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    pub mod dynamics {}
    #[doc = include_str!("../../../book/src/unfoldings.md")]
    pub mod unfoldings {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    pub mod metrics {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    pub mod oracle {}
}
