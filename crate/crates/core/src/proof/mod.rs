//! Derivations in the Knows / Knows-Whether proof calculus: proof
//! objects, a step-by-step checker, a structure-directed prover, and the
//! JSON derivation format.

mod checker;
mod format;
mod judgment;
mod prover;

use std::fmt;

pub use checker::{check_derivation, justify_step, sensing_completions, CheckError, StepError};
pub use format::{
    derivation_from_json, derivation_to_json, FormatError, DERIVATION_FORMAT_VERSION,
};
pub(crate) use format::{derivation_from_value, derivation_to_value};
pub use judgment::Judgment;
pub use prover::{derive_knows, derive_kw, ProveError, Prover};

/// How a step follows: an axiom instance or a rule citing earlier steps
/// by 0-based index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Justification {
    /// `{X} [] {X}`
    Ax1,
    /// `{X} a {Res0(a, X)}`, `a` non-sensing.
    Ax2,
    /// Sensing action: one premise per consistent completion of `X`.
    Rule3 {
        premises: Vec<usize>,
    },
    /// Case: the chosen branch's guard holds in `X`.
    Rule4 {
        branch: usize,
        premise: usize,
    },
    /// Composition.
    Rule5 {
        first: usize,
        second: usize,
    },
    /// Consequence: strengthen the precondition, weaken the postcondition.
    Rule6 {
        premise: usize,
    },
    /// `{X} a {KW f}` for `a determines f`.
    Ax7,
    /// `{X} c {{p}}` gives `{X} c {KW p}`.
    Rule8 {
        premise: usize,
    },
    /// `{X} c {KW p}` gives `{X} c {KW ~p}`.
    Rule9 {
        premise: usize,
    },
    Rule10 {
        premises: Vec<usize>,
    },
    Rule11 {
        first: usize,
        second: usize,
    },
    Rule12 {
        branch: usize,
        premise: usize,
    },
}

impl Justification {
    pub fn premises(&self) -> Vec<usize> {
        use Justification::*;
        match self {
            Ax1 | Ax2 | Ax7 => vec![],
            Rule3 { premises } | Rule10 { premises } => premises.clone(),
            Rule4 { premise, .. }
            | Rule6 { premise }
            | Rule8 { premise }
            | Rule9 { premise }
            | Rule12 { premise, .. } => vec![*premise],
            Rule5 { first, second } | Rule11 { first, second } => vec![*first, *second],
        }
    }

    /// Rule name as used in the derivation file format.
    pub fn name(&self) -> &'static str {
        use Justification::*;
        match self {
            Ax1 => "ax1",
            Ax2 => "ax2",
            Rule3 { .. } => "rule3",
            Rule4 { .. } => "rule4",
            Rule5 { .. } => "rule5",
            Rule6 { .. } => "rule6",
            Ax7 => "ax7",
            Rule8 { .. } => "rule8",
            Rule9 { .. } => "rule9",
            Rule10 { .. } => "rule10",
            Rule11 { .. } => "rule11",
            Rule12 { .. } => "rule12",
        }
    }

    /// True for the axioms and rules that only concern Knows-Whether.
    pub fn is_kw_rule(&self) -> bool {
        use Justification::*;
        matches!(
            self,
            Ax7 | Rule8 { .. } | Rule9 { .. } | Rule10 { .. } | Rule11 { .. } | Rule12 { .. }
        )
    }

    pub(crate) fn shifted(&self, offset: usize) -> Justification {
        self.renumbered(|p| p + offset)
    }

    pub(crate) fn renumbered(&self, f: impl Fn(usize) -> usize) -> Justification {
        use Justification::*;
        match self {
            Ax1 => Ax1,
            Ax2 => Ax2,
            Ax7 => Ax7,
            Rule3 { premises } => Rule3 {
                premises: premises.iter().map(|&p| f(p)).collect(),
            },
            Rule10 { premises } => Rule10 {
                premises: premises.iter().map(|&p| f(p)).collect(),
            },
            Rule4 { branch, premise } => Rule4 {
                branch: *branch,
                premise: f(*premise),
            },
            Rule12 { branch, premise } => Rule12 {
                branch: *branch,
                premise: f(*premise),
            },
            Rule5 { first, second } => Rule5 {
                first: f(*first),
                second: f(*second),
            },
            Rule11 { first, second } => Rule11 {
                first: f(*first),
                second: f(*second),
            },
            Rule6 { premise } => Rule6 {
                premise: f(*premise),
            },
            Rule8 { premise } => Rule8 {
                premise: f(*premise),
            },
            Rule9 { premise } => Rule9 {
                premise: f(*premise),
            },
        }
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        let ps = self.premises();
        if !ps.is_empty() {
            let ps: Vec<_> = ps.iter().map(|p| p.to_string()).collect();
            write!(f, " from {}", ps.join(", "))?;
        }
        if let Justification::Rule4 { branch, .. } | Justification::Rule12 { branch, .. } = self {
            write!(f, " (branch {branch})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProofStep {
    pub judgment: Judgment,
    pub justification: Justification,
}

impl ProofStep {
    pub fn new(judgment: Judgment, justification: Justification) -> Self {
        ProofStep {
            judgment,
            justification,
        }
    }
}

/// A proof sequence for one domain; the last step is the theorem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub domain_hash: String,
    pub steps: Vec<ProofStep>,
}

impl Derivation {
    pub fn conclusion(&self) -> Option<&Judgment> {
        self.steps.last().map(|s| &s.judgment)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The steps that step `index` depends on, renumbered, ending with
    /// step `index` itself.
    pub fn subderivation(&self, index: usize) -> Derivation {
        let mut needed = vec![false; index + 1];
        needed[index] = true;
        for i in (0..=index).rev() {
            if needed[i] {
                for p in self.steps[i].justification.premises() {
                    if p < i {
                        needed[p] = true;
                    }
                }
            }
        }
        let mut renumber = vec![usize::MAX; index + 1];
        let mut steps = Vec::new();
        for i in (0..=index).filter(|&i| needed[i]) {
            renumber[i] = steps.len();
            let s = &self.steps[i];
            let j = s
                .justification
                .renumbered(|p| renumber.get(p).copied().unwrap_or(p));
            steps.push(ProofStep::new(s.judgment.clone(), j));
        }
        Derivation {
            domain_hash: self.domain_hash.clone(),
            steps,
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "({i}) {}    [{}]", s.judgment, s.justification)?;
        }
        Ok(())
    }
}
