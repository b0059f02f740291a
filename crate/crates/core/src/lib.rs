//! Lattice point discrepancy laboratory.
//!
//! Planar convex domains with their gauge and support function, exact
//! lattice counts and mean-square discrepancy, annulus lattice
//! combinatorics, the smoothed Farey polygon, and distinct-value counting
//! for norms in higher dimensions.

pub mod annulus;
pub mod constructions;
pub mod counting;
pub mod distance;
pub mod error;
pub mod geometry;
pub mod numeric;

pub use error::{LdlError, Result};
pub use geometry::{parse_domain, parse_domain_with_c0, ConvexDomain, DomainKind};
pub use numeric::{LatticePoint, Vec2};
