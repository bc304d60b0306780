//! Report documents: a human table by default, a JSON document under
//! `--format machine`.

use crate::format::{scenario_to_doc, to_canonical_json};
use nosig_core::Scenario;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Human,
    Machine,
}

/// Outcome of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: Vec<String>,
    pub scenario_digest: Option<String>,
    pub result: Value,
    pub exit_status: i32,
    /// Body of the human rendering, without the header lines.
    pub human: String,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Machine => to_canonical_json(&json!({
                "command": self.command.join(" "),
                "scenario_digest": self.scenario_digest,
                "result": self.result,
                "exit_status": self.exit_status,
            })),
            Format::Human => {
                let mut out = format!("command: {}\n", self.command.join(" "));
                if let Some(d) = &self.scenario_digest {
                    out.push_str(&format!("scenario: {d}\n"));
                }
                out.push_str(&self.human);
                if !self.human.ends_with('\n') {
                    out.push('\n');
                }
                out.push_str(&format!("exit status: {}\n", self.exit_status));
                out
            }
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// Digest of the scenario's canonical document.
pub fn scenario_digest(scenario: &Scenario) -> String {
    sha256_hex(to_canonical_json(&scenario_to_doc(scenario)).as_bytes())
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        format!("  {}\n", padded.join("  ").trim_end())
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}
