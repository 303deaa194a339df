//! Machine-readable report types shared by the CLI and the printers.
//!
//! Everything here serializes to JSON with exact values only: ranks and
//! orders as integers, operator entries and annihilators as text in the
//! same syntax the parser accepts.  Timings live outside `results` so two
//! runs on the same input produce identical result fields.

use serde::{Deserialize, Serialize};

use crate::homology::{DualityReport, ExtReport, Resolution, Verdict};
use crate::ops::OpMatrix;

pub const SCHEMA_VERSION: u32 = 1;

pub fn engine_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// FNV-1a digest of the canonical input text, hex-encoded.  Deterministic
/// and cheap; used to tie a report back to its input.
pub fn digest(input: &str) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in input.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    /// entry text in operator syntax, row-major
    pub entries: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &OpMatrix) -> MatrixJson {
        MatrixJson {
            rows: m.rows,
            cols: m.cols,
            entries: (0..m.rows)
                .map(|i| (0..m.cols).map(|j| m.at(i, j).to_string()).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemJson {
    pub name: String,
    pub vars: Vec<String>,
    pub params: Vec<String>,
    pub unknowns: Vec<String>,
    pub matrix: MatrixJson,
    pub note: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceStep {
    pub rank: usize,
    pub order: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResolveJson {
    pub ranks: Vec<usize>,
    pub steps: Vec<SequenceStep>,
    pub terminated: bool,
    pub euler: Option<i64>,
}

impl ResolveJson {
    pub fn from_resolution(r: &Resolution, leading_rank: usize, euler: Option<i64>) -> ResolveJson {
        let ranks = {
            let mut v = vec![leading_rank];
            v.extend(r.ranks());
            v
        };
        let steps = r
            .steps
            .iter()
            .map(|s| SequenceStep {
                rank: s.rows,
                order: s.order().unwrap_or(0),
            })
            .collect();
        ResolveJson {
            ranks,
            steps,
            terminated: r.terminated,
            euler,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TorsionJson {
    pub row: Vec<String>,
    pub annihilator: Option<String>,
    pub searched_degree: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamTestJson {
    pub parametrizable: bool,
    pub parametrization: MatrixJson,
    pub recomputed_system: MatrixJson,
    pub torsion: Vec<TorsionJson>,
}

impl ParamTestJson {
    pub fn from_report(r: &DualityReport) -> ParamTestJson {
        ParamTestJson {
            parametrizable: matches!(r.verdict, Verdict::Parametrizable),
            parametrization: MatrixJson::from_matrix(&r.parametrization),
            recomputed_system: MatrixJson::from_matrix(&r.cc_back),
            torsion: r
                .torsion
                .iter()
                .map(|t| TorsionJson {
                    row: t.row.iter().map(|e| e.to_string()).collect(),
                    annihilator: t.annihilator.as_ref().map(|a| a.to_string()),
                    searched_degree: t.searched_degree,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtJson {
    pub index: usize,
    pub is_zero: bool,
    pub witness: Option<Vec<String>>,
}

impl ExtJson {
    pub fn from_report(r: &ExtReport) -> ExtJson {
        ExtJson {
            index: r.index,
            is_zero: r.is_zero,
            witness: r
                .witness
                .as_ref()
                .map(|w| w.iter().map(|e| e.to_string()).collect()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpencerJson {
    pub n: usize,
    pub symbol_dims: Vec<usize>,
    pub delta_ranks: Vec<usize>,
    pub cohomology: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionJson {
    pub index: usize,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BudgetJson {
    pub max_degree: u32,
    pub max_basis: usize,
    pub max_steps: usize,
}

/// Top-level report envelope.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub engine_version: String,
    pub command: String,
    pub input_digest: String,
    pub budget: BudgetJson,
    pub results: serde_json::Value,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn new(
        command: &str,
        input: &str,
        budget: BudgetJson,
        results: serde_json::Value,
        elapsed_ms: u128,
    ) -> Report {
        Report {
            schema: SCHEMA_VERSION,
            engine_version: engine_version().to_string(),
            command: command.to_string(),
            input_digest: digest(input),
            budget,
            results,
            elapsed_ms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest("abc"), digest("abc"));
        assert_ne!(digest("abc"), digest("abd"));
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = Report::new(
            "cc",
            "vars x; unknowns u; system s { eq: d[x]u; }",
            BudgetJson {
                max_degree: 12,
                max_basis: 10_000,
                max_steps: 8,
            },
            serde_json::json!({"rows": 0}),
            3,
        );
        let s = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back.command, "cc");
        assert_eq!(back.input_digest, r.input_digest);
        assert_eq!(back.schema, SCHEMA_VERSION);
    }
}
