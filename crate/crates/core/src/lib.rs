//! Exact computer algebra for the splitting calculus on affine space over
//! prime fields: sparse polynomial arithmetic over `F_p` and `Z`, weight
//! orders and Groebner degenerations, the trace near-splitting and
//! compatibility tests, brute-force point counting and its congruences,
//! geometric vertex decomposition, posets of compatibly split ideals, and
//! the matrix Schubert / Kazhdan-Lusztig example families.

pub mod counting;
pub mod error;
pub mod fixtures;
pub mod groebner;
pub mod gvd;
pub mod klvariety;
pub mod monorder;
pub mod polyring;
pub mod schubert;
pub mod splitposet;
pub mod splitting;

pub use error::{Error, Result};
pub use polyring::{FieldElem, Monomial, Poly, Ring, VarScheme};
