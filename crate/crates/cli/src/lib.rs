//! File formats, reports, and command implementations behind the `nosig` binary.

pub mod commands;
pub mod format;
pub mod report;
