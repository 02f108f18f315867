//! Exact finite-scale computational category theory for causal models.
//!
//! The crate is organised in layers:
//!
//! * [`fincat`]: finite categories, functors, natural transformations,
//!   free categories, Yoneda and universal-arrow checks.
//! * [`simplex`]: the simplex category Δ and truncated simplicial sets,
//!   with boundaries, horns and horn-filler search.
//! * [`nerve`]: the nerve of a finite category and its full faithfulness.
//! * [`causal`]: causal DAGs, interventions, imsets and Markov equivalence.
//! * [`elements`]: set-valued instances, categories of elements, lifting
//!   problems and Kan-extension data migration.
//! * [`homology`]: normalized chain complexes, Smith normal form and
//!   homology profiles of classifying spaces.

pub mod causal;
pub mod corpus;
pub mod elements;
pub mod fincat;
pub mod homology;
pub mod library;
pub mod nerve;
pub mod simplex;
