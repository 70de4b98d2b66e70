//! Computational verification toolkit for regular dessins d'enfants with
//! dicyclic automorphism group `G_n` of order `4n`.
//!
//! - [`group`]: normal forms, conjugacy classes, subgroups and automorphisms.
//! - [`covering`]: Riemann–Hurwitz, fixed points, quotients, triangular census.
//! - [`perm`], [`monodromy`]: permutation monodromy, bipartite graphs, DOT.
//! - [`cover_triples`]: exponent triples of cyclic covers of the sphere.
//! - [`real_forms`]: NEC genera, hyperbolic genus search, pseudo-real surfaces.
//! - [`curves`]: numeric checks of explicit curve models and their maps.
//! - [`genus_search`]: strong and pure symmetric genus by exhaustive search.

pub mod cover_triples;
pub mod covering;
pub mod curves;
pub mod error;
pub mod genus_search;
pub mod group;
pub mod monodromy;
pub mod perm;
pub mod real_forms;

pub use error::{Error, Result};
pub use group::{DicyclicGroup, GroupElement};
