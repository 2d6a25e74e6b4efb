//! JSON derivation files.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "domain_hash": "<sha-256 hex>",
//!   "steps": [
//!     {"judgment": "{a} [] {a}", "rule": "ax1", "premises": []},
//!     {"judgment": "{a} c {a}", "rule": "rule4", "premises": [0], "branch": 1}
//!   ]
//! }
//! ```
//!
//! Judgments use the DSL surface syntax. Premises are 0-based step
//! indices; `rule5`/`rule11` list the two premises in order. `branch`
//! appears exactly on `rule4`/`rule12`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Derivation, Justification, ProofStep};
use crate::parser::{parse_triple, ParseError};

pub const DERIVATION_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed derivation file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported derivation format version {0}")]
    Version(u32),
    #[error("step {step}: bad judgment: {error}")]
    Judgment { step: usize, error: ParseError },
    #[error("step {step}: unknown rule `{rule}`")]
    UnknownRule { step: usize, rule: String },
    #[error("step {step}: wrong number of premises for `{rule}`")]
    Arity { step: usize, rule: String },
    #[error("step {step}: `{rule}` needs a branch index")]
    MissingBranch { step: usize, rule: String },
    #[error("step {step}: `{rule}` takes no branch index")]
    UnexpectedBranch { step: usize, rule: String },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDerivation {
    format_version: u32,
    domain_hash: String,
    steps: Vec<RawStep>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    judgment: String,
    rule: String,
    premises: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    branch: Option<usize>,
}

fn raw(d: &Derivation) -> RawDerivation {
    RawDerivation {
        format_version: DERIVATION_FORMAT_VERSION,
        domain_hash: d.domain_hash.clone(),
        steps: d
            .steps
            .iter()
            .map(|s| RawStep {
                judgment: s.judgment.to_string(),
                rule: s.justification.name().to_string(),
                premises: s.justification.premises(),
                branch: match s.justification {
                    Justification::Rule4 { branch, .. } | Justification::Rule12 { branch, .. } => {
                        Some(branch)
                    }
                    _ => None,
                },
            })
            .collect(),
    }
}

/// Pretty-printed JSON, one key per line, trailing newline.
pub fn derivation_to_json(d: &Derivation) -> String {
    let mut s = serde_json::to_string_pretty(&raw(d)).expect("serializable");
    s.push('\n');
    s
}

/// Compact single-line JSON, as embedded in graph files.
pub(crate) fn derivation_to_value(d: &Derivation) -> serde_json::Value {
    serde_json::to_value(raw(d)).expect("serializable")
}

pub(crate) fn derivation_from_value(v: serde_json::Value) -> Result<Derivation, FormatError> {
    convert(serde_json::from_value(v)?)
}

pub fn derivation_from_json(text: &str) -> Result<Derivation, FormatError> {
    convert(serde_json::from_str(text)?)
}

fn convert(raw: RawDerivation) -> Result<Derivation, FormatError> {
    if raw.format_version != DERIVATION_FORMAT_VERSION {
        return Err(FormatError::Version(raw.format_version));
    }
    let mut steps = Vec::with_capacity(raw.steps.len());
    for (step, s) in raw.steps.into_iter().enumerate() {
        let judgment =
            parse_triple(&s.judgment).map_err(|error| FormatError::Judgment { step, error })?;
        let ps = &s.premises;
        let arity = |n: usize| -> Result<(), FormatError> {
            if ps.len() == n {
                Ok(())
            } else {
                Err(FormatError::Arity {
                    step,
                    rule: s.rule.clone(),
                })
            }
        };
        let branched = matches!(s.rule.as_str(), "rule4" | "rule12");
        match (branched, s.branch) {
            (true, None) => {
                return Err(FormatError::MissingBranch { step, rule: s.rule });
            }
            (false, Some(_)) => {
                return Err(FormatError::UnexpectedBranch { step, rule: s.rule });
            }
            _ => {}
        }
        let justification = match s.rule.as_str() {
            "ax1" => arity(0).map(|_| Justification::Ax1)?,
            "ax2" => arity(0).map(|_| Justification::Ax2)?,
            "ax7" => arity(0).map(|_| Justification::Ax7)?,
            "rule3" => Justification::Rule3 {
                premises: ps.clone(),
            },
            "rule10" => Justification::Rule10 {
                premises: ps.clone(),
            },
            "rule4" => arity(1).map(|_| Justification::Rule4 {
                branch: s.branch.unwrap_or_default(),
                premise: ps[0],
            })?,
            "rule12" => arity(1).map(|_| Justification::Rule12 {
                branch: s.branch.unwrap_or_default(),
                premise: ps[0],
            })?,
            "rule5" => arity(2).map(|_| Justification::Rule5 {
                first: ps[0],
                second: ps[1],
            })?,
            "rule11" => arity(2).map(|_| Justification::Rule11 {
                first: ps[0],
                second: ps[1],
            })?,
            "rule6" => arity(1).map(|_| Justification::Rule6 { premise: ps[0] })?,
            "rule8" => arity(1).map(|_| Justification::Rule8 { premise: ps[0] })?,
            "rule9" => arity(1).map(|_| Justification::Rule9 { premise: ps[0] })?,
            _ => return Err(FormatError::UnknownRule { step, rule: s.rule }),
        };
        steps.push(ProofStep::new(judgment, justification));
    }
    Ok(Derivation {
        domain_hash: raw.domain_hash,
        steps,
    })
}
