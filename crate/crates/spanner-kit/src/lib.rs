//! Cone-based geometric spanners over planar point sets.
//!
//! The crate builds Yao, Θ, half-Θ6 and the bounded-degree subgraphs G12 and
//! G9, measures exact spanning ratios, runs local routing with potential
//! accounting, and regenerates the lower-bound instances.

pub mod analysis;
pub mod build;
pub mod error;
pub mod generate;
pub mod geom;
pub mod io;
pub mod routing;
pub mod svg;

pub use error::{Result, SpannerError};
pub use geom::{CanonicalTriangle, ConeIndex, ConeSystem, Point, PointSet};
pub use build::{GraphKind, SpannerGraph};
