//! Exact and floating-point (b,c)-core-EP inverses.

pub mod monoid;

pub use monoid::{Element, ExtKind, FiniteStarMonoid, GreenKind, MonoidError, Side, Universe};
pub mod search;

pub use search::{IndexSetReport, InverseKind, InverseResult, InverseStatus, SearchError};

pub mod matrix;
pub use matrix::{ComplexMatrix, CoreEpSolution, MatrixError, RankProfile, Tolerances};

pub mod checker;
pub use checker::{CheckStatus, Counterexample, Ledger, SweepConfig, TheoremCheck};
