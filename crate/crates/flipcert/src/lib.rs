//! Exact-arithmetic toolkit for point configurations, triangulations, and
//! geometric bistellar flips in low dimension, together with a certificate
//! engine that verifies flip-connectivity lower bounds for two built-in
//! 5-dimensional configurations (50 and 26 points).
//!
//! Everything in the decision path is exact: coordinates are arbitrary
//! precision rationals, volumes are determinant sums, and intersection tests
//! are decided by rational linear programming. No floating point is used
//! anywhere.
//!
//! The crate is organized as:
//!
//! * [`exactgeom`]: rational linear algebra and polytope primitives (affine
//!   rank and kernels, facet enumeration, face and beyond-face tests, lattice
//!   indices).
//! * [`triangulation`]: triangulations as geometric simplicial complexes;
//!   validity checking, links, restrictions, staircase prisms.
//! * [`flips`]: circuits and geometric bistellar flips: detection,
//!   application, exhaustive enumeration.
//! * [`orientation`]: locally acyclic orientations of 2-skeleta and their
//!   bijection with triangulations of prism complexes.
//! * [`constructions`]: generators for the built-in objects: the 24-cell and
//!   cross-polytope, their oriented skeleta, the 50- and 26-point
//!   configurations, reference triangulations, symmetry groups.
//! * [`certify`]: the certificate pipeline producing machine-readable
//!   reports with component lower bounds.
//! * [`explore`]: flip-graph breadth-first search and brute-force
//!   triangulation enumeration at desk scale.

pub mod certify;
pub mod constructions;
pub mod exactgeom;
pub mod explore;
pub mod flips;
mod lp;
pub mod orientation;
pub mod triangulation;
mod zz;

pub use exactgeom::{GeomError, PointConfiguration, Rational};
pub use triangulation::{Simplex, Triangulation, TriangulationError};

