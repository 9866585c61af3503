//! Exact algebra behind the superstring Lie 2-supergroup and the 2-brane Lie
//! 3-supergroup: division algebras, spinor identities, Lie superalgebra
//! cohomology, slim L∞-superalgebras, and symbolic integration of cocycles to
//! (super)group cocycles.

pub mod cohomology;
pub mod division_algebra;
pub mod integration;
pub mod linalg;
pub mod linfty;
pub mod poly;
pub mod ring;
pub mod spacetime;
pub mod suites;
pub mod superalgebra;
pub mod supergeometry;

pub use ring::{q, qi, Ring, Q};
