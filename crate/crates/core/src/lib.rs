//! Outcome computation and analysis for finite vector subtraction games under normal play.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] holds rulesets, positions and classification.
//! * [`oracle`] computes ground-truth outcomes by dynamic programming on bit-packed boards.
//! * [`verify`] checks translation lemmas against computed boards.
//! * [`closed_form`] decides outcomes of one- and two-move games in time linear in the bit length.
//! * [`periodicity`] certifies eventual periods of sequences, rows, columns and rational lines.
//! * [`automaton`] runs coloring schemes that paint P-positions from seed cells.
//! * [`segmentation`] estimates boundaries, verifies segmentations and tests N-percolation.
//! * [`io`] and [`bench`] cover serialization and the latency harness.

pub mod automaton;
pub mod bench;
pub mod closed_form;
pub mod error;
pub mod io;
pub mod model;
pub mod oracle;
mod par;
pub mod periodicity;
pub mod segmentation;
pub mod verify;

pub use error::{Error, Result};
pub use model::{MoveVector, Outcome, Position, Ruleset, RulesetClass};
pub use oracle::{compute_dd, compute_grid, compute_sequence, Budget, OutcomeGrid, OutcomeSequence};
pub use verify::VerificationReport;
