//! Normal vectors, swap operators, symmetry orbits and the boundary
//! condition tests that sort vectors into categories.

mod classify;
mod swap;
mod vector;

pub use classify::{
    check_boundary_conditions, classify_vector, passing_pairs, FirstPlace, Role, VectorCategory,
};
pub use swap::{orbit, SwapOperator, Swappable};
pub use vector::{inner, NormalVector};
