//! Classification of small acyclic digraphs up to Bott equivalence.
//!
//! Two acyclic digraphs are Bott equivalent when one can be turned into an
//! isomorphic copy of the other by local complementations and slides; the
//! equivalence classes correspond to diffeomorphism classes of real Bott
//! manifolds. This crate provides the digraph operations, the matching
//! matrix operations over Z2, the class invariants (level sequence, rank,
//! cut-ranks, sibling profile, odd height), and a census engine that
//! enumerates all isomorphism classes of DAGs for a given vertex count and
//! partitions them into Bott classes.
//!
//! The census runs data-parallel on rayon by default; building with
//! `--no-default-features` swaps in a sequential fallback with identical
//! output.

pub mod canon;
pub mod classify;
pub mod digraph;
pub mod error;
pub mod gf2;
pub mod invariants;
pub mod random;
pub mod record;

pub use canon::{CanonicalForm, Code};
pub use classify::{
    are_bott_equivalent, bott_neighbors, classify, enumerate_dags, orbit, CensusConfig,
    CensusFilter, ClassCensus, OrbitResult,
};
pub use digraph::{Digraph, Permutation, N_MAX};
pub use error::{Error, Result};
pub use gf2::{adjacency_matrix, characteristic_matrix, GF2Matrix, IndexSet};
pub use invariants::{
    cut_rank, fingerprint, is_orientable, is_symplectic, levels, odd_height, sibling_groups,
    Fingerprint, LevelStructure, OddHeight, SiblingProfile,
};
pub use record::{format_record, parse_record};
