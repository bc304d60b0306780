use crate::exactmath::Rational;
use crate::scenario::Violation;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("unknown {kind} label {label:?}")]
    UnknownLabel { kind: &'static str, label: String },

    #[error("duplicate {kind} label {label:?}")]
    DuplicateLabel { kind: &'static str, label: String },

    #[error("invalid scenario: {}", join_violations(.0))]
    InvalidScenario(Vec<Violation>),

    /// Enumerating the global assignments would exceed the configured cap.
    #[error("enumeration of {required} global assignments exceeds the cap of {cap}")]
    EnumerationCap { required: u128, cap: usize },

    #[error("measurement {measurement:?} is not in the section's domain")]
    NotInDomain { measurement: String },

    #[error("measurement set {0:?} is not contained in any context")]
    NotPartialContext(Vec<String>),

    #[error("total mass is {total}, expected 1")]
    MassNotOne { total: Rational },

    #[error("negative weight {weight} at index {index}")]
    NegativeWeight { index: usize, weight: Rational },

    #[error("context {context:?} has zero total mass")]
    ZeroContextMass { context: String },

    #[error("conditional given hidden value {lambda:?} is undefined: its marginal mass is 0")]
    ConditionalUndefined { lambda: String },

    #[error("models are defined over different scenarios")]
    ScenarioMismatch,

    #[error("boundary data is missing a value for section {0}")]
    MissingBoundaryValue(String),

    #[error("unsupported scenario: {0}")]
    UnsupportedScenario(String),

    #[error("unknown generator {name:?}; registered generators: {}", .registered.join(", "))]
    UnknownGenerator {
        name: String,
        registered: Vec<&'static str>,
    },

    #[error("invalid generator parameter {name:?}: {reason}")]
    GeneratorParameter { name: String, reason: String },
}

fn join_violations(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}
