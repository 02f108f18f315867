//! Set-valued instances over a schema, the category of elements, lifting
//! problems and Kan-extension data migration.

mod grothendieck;
mod instance;
mod lifting;
mod migration;
pub mod patterns;


use thiserror::Error;

use crate::fincat::{CategoryError, FunctorError};

pub use grothendieck::{
    category_of_elements, check_opfibration_fibers, verify_pullback_square, ElementsCategory, Fiber, FiberReport,
    PullbackSquareReport,
};
pub use instance::{do_bind, instance_on, Instance, RawInstance, SchemaSpec};
pub use lifting::{
    check_lifting_property, commuting_tops, enumerate_squares, has_lift, solve_lifting, LiftingProblem, LiftingSide,
    LiftingVerdict,
};
pub use migration::{
    check_adjunction, comma_over, comma_under, migrate_left_kan, migrate_pullback, migrate_right_kan,
    AdjunctionReport, CommaCategory, LeftKan, RightKan,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementsError {
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("unknown morphism {0:?}")]
    UnknownMorphism(String),
    #[error("row {row} appears twice in the table of {object:?}")]
    DuplicateRow { object: String, row: u64 },
    #[error("action of {morphism:?} mentions row {row}, which is not in its source or target table")]
    DanglingRow { morphism: String, row: u64 },
    #[error("missing action for {morphism:?}{}", .row.map(|r| format!(" on row {r}")).unwrap_or_default())]
    MissingAction { morphism: String, row: Option<u64> },
    #[error("action of {g}∘{f} differs from action({g})∘action({f}) at row {row}")]
    NonFunctorial { g: String, f: String, row: u64 },
    #[error("row {row} is not in the table of {object:?}")]
    UnknownRow { object: String, row: u64 },
    #[error("lifting square does not commute")]
    NonCommutingSquare,
    #[error("instance is not the pullback of the target instance along the functor")]
    NotPullbackInstance,
    #[error("invalid schema: {0}")]
    Schema(String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
}
