//! JSON documents printed by the command-line tool.
//!
//! Field order is fixed by the struct definitions and every list is built in
//! a deterministic order, so identical inputs give byte-identical output.
//! Wall-clock timings are only present when explicitly requested.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bounds::{check_necessary_conditions, matrix_excess, ConditionViolation, BoundTerm, K6Bounds};
use crate::diagnostics::{claim_suite, DiagnosticsReport};
use crate::matrix::{ColourMatrix, Line};
use crate::search::{Achromatic, Certificate, SearchOutcome, SearchResult};

/// Bad pairs listed in a verify report; the total is always given.
pub const BAD_PAIR_CAP: usize = 20;

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("sha256:{:x}", Sha256::digest(bytes))
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report types serialise");
    s.push('\n');
    s
}

fn matrix_rows(m: &ColourMatrix) -> Vec<String> {
    m.token_rows().iter().map(|r| r.join(" ")).collect()
}

#[derive(Debug, Serialize)]
pub struct ViolationDoc {
    pub line: &'static str,
    /// 1-based.
    pub index: usize,
    pub colour: String,
    /// 1-based positions along the line.
    pub positions: [usize; 2],
    pub message: String,
}

#[derive(Debug, Serialize)]
pub struct ExcessDoc {
    pub min_frequency: usize,
    pub matrix_excess: i64,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum DiagnosticsDoc {
    Report(DiagnosticsReport),
    Unavailable { error: String },
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub input_digest: String,
    pub p: usize,
    pub q: usize,
    pub colours: usize,
    pub proper: bool,
    pub violation: Option<ViolationDoc>,
    pub complete: bool,
    pub bad_pair_count: usize,
    pub bad_pairs: Vec<[String; 2]>,
    pub member: bool,
    pub excess: ExcessDoc,
    pub condition_violations: Vec<ConditionViolation>,
    pub diagnostics: Option<DiagnosticsDoc>,
}

impl VerifyReport {
    pub fn new(m: &ColourMatrix, input: &[u8], diagnose: bool) -> Self {
        let violation = m.first_proper_violation().map(|v| {
            let (kind, index) = match v.line {
                Line::Row(i) => ("row", i),
                Line::Column(j) => ("column", j),
            };
            let colour = m.token(v.colour).to_string();
            ViolationDoc {
                line: kind,
                index: index + 1,
                message: format!("{} repeats colour {colour:?}", v.line),
                colour,
                positions: [v.positions.0 + 1, v.positions.1 + 1],
            }
        });
        let completeness = m.completeness();
        let bad_pairs = completeness
            .bad_pairs
            .iter()
            .take(BAD_PAIR_CAP)
            .map(|&(a, b)| [m.token(a).to_string(), m.token(b).to_string()])
            .collect();
        let exc = matrix_excess(m);
        let proper = violation.is_none();
        let complete = completeness.is_complete();
        let diagnostics = (diagnose && m.rows() == 6).then(|| match claim_suite(m) {
            Ok(r) => DiagnosticsDoc::Report(r),
            Err(e) => DiagnosticsDoc::Unavailable {
                error: e.to_string(),
            },
        });
        VerifyReport {
            command: "verify",
            input_digest: sha256_hex(input),
            p: m.rows(),
            q: m.cols(),
            colours: m.colour_count(),
            proper,
            violation,
            complete,
            bad_pair_count: completeness.bad_pairs.len(),
            bad_pairs,
            member: proper && complete,
            excess: ExcessDoc {
                min_frequency: exc.min_frequency,
                matrix_excess: exc.matrix_excess,
            },
            condition_violations: check_necessary_conditions(m),
            diagnostics,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ConstructReport {
    pub command: &'static str,
    pub p: usize,
    pub q: usize,
    pub colours: usize,
    pub member: bool,
    pub output: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct BoundsReport {
    pub command: &'static str,
    pub p: usize,
    pub q: usize,
    pub general_upper_bound: u64,
    pub terms: Vec<BoundTerm>,
    pub k6: Option<K6Bounds>,
}

#[derive(Debug, Serialize)]
pub struct SearchReport {
    pub command: &'static str,
    pub mode: &'static str,
    pub p: usize,
    pub q: usize,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub outcome: SearchOutcome,
    pub nodes_expanded: u64,
    pub achromatic_number: Option<usize>,
    pub certificate: Option<Certificate>,
    pub witness: Option<Vec<String>>,
    pub witness_file: Option<String>,
    pub error: Option<String>,
    pub elapsed_ms: Option<u128>,
}

impl SearchReport {
    pub fn from_result(mode: &'static str, p: usize, q: usize, k: usize, seed: Option<u64>, r: &SearchResult) -> Self {
        SearchReport {
            command: "search",
            mode,
            p,
            q,
            k: Some(k),
            seed,
            outcome: r.outcome,
            nodes_expanded: r.nodes_expanded,
            achromatic_number: None,
            certificate: None,
            witness: r.witness.as_ref().map(matrix_rows),
            witness_file: None,
            error: None,
            elapsed_ms: None,
        }
    }

    pub fn from_achromatic(p: usize, q: usize, a: &Achromatic) -> Self {
        SearchReport {
            command: "search",
            mode: "exact",
            p,
            q,
            k: None,
            seed: None,
            outcome: SearchOutcome::Found,
            nodes_expanded: a.nodes_expanded,
            achromatic_number: Some(a.value),
            certificate: Some(a.certificate.clone()),
            witness: Some(matrix_rows(&a.witness)),
            witness_file: None,
            error: None,
            elapsed_ms: None,
        }
    }

    pub fn budget_exhausted(p: usize, q: usize, nodes: u64, error: String) -> Self {
        SearchReport {
            command: "search",
            mode: "exact",
            p,
            q,
            k: None,
            seed: None,
            outcome: SearchOutcome::BudgetExhausted,
            nodes_expanded: nodes,
            achromatic_number: None,
            certificate: None,
            witness: None,
            witness_file: None,
            error: Some(error),
            elapsed_ms: None,
        }
    }
}
