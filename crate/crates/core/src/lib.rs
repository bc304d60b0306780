//! Exact analysis of empirical measurement tables over finite measurement covers.
//!
//! The crate decides No-Signalling for a table of outcome probabilities, builds
//! canonical hidden-variable realizations of it (nonnegative, and signed with a
//! product form over hidden states and contexts), and checks the Lambda- and
//! Parameter-Independence conditions on hidden-variable models. Every number is an
//! exact rational; there is no floating point on any analysis path.
//!
//! Module map:
//!
//! * [`exactmath`]: rationals, dense matrices, Gauss-Jordan solving and rank, and an
//!   exact two-phase simplex.
//! * [`scenario`]: measurement covers, sections, global assignments, partial contexts.
//! * [`models`]: empirical, signed canonical, and general hidden-variable models.
//! * [`analysis`]: the checks and constructions that operate on those models.
//! * [`generators`]: Bell scenarios, the PR box, the triangle cover, and seeded
//!   random corpora.

pub mod analysis;
pub mod error;
pub mod exactmath;
pub mod generators;
pub mod models;
pub mod scenario;

pub use error::{Error, Result};
pub use exactmath::{Matrix, Rational};
pub use models::{EmpiricalModel, GeneralHvModel, SchvModel, SignedDist};
pub use scenario::{AtomicEvent, GlobalAssignment, Scenario, Section, Violation};
