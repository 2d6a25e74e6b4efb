//! Propositions and validated domain descriptions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::literal::{FluentLiteral, LiteralSet, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Proposition {
    /// `initially p`
    Initially(FluentLiteral),
    /// `a causes p if p1, ..., pn`
    Effect {
        action: Symbol,
        effect: FluentLiteral,
        precond: LiteralSet,
    },
    /// `executable a if p1, ..., pn`
    Executable { action: Symbol, precond: LiteralSet },
    /// `a determines f`
    Determines { action: Symbol, fluent: Symbol },
}

impl Proposition {
    pub fn action(&self) -> Option<&Symbol> {
        match self {
            Proposition::Initially(_) => None,
            Proposition::Effect { action, .. }
            | Proposition::Executable { action, .. }
            | Proposition::Determines { action, .. } => Some(action),
        }
    }

    fn fluents(&self) -> Vec<Symbol> {
        match self {
            Proposition::Initially(p) => vec![p.fluent.clone()],
            Proposition::Effect {
                effect, precond, ..
            } => std::iter::once(effect.fluent.clone())
                .chain(precond.fln())
                .collect(),
            Proposition::Executable { precond, .. } => precond.fln().into_iter().collect(),
            Proposition::Determines { fluent, .. } => vec![fluent.clone()],
        }
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn tail(f: &mut fmt::Formatter<'_>, precond: &LiteralSet) -> fmt::Result {
            if !precond.is_empty() {
                f.write_str(" if ")?;
                for (i, p) in precond.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
            }
            f.write_str(".")
        }
        match self {
            Proposition::Initially(p) => write!(f, "initially {p}."),
            Proposition::Effect {
                action,
                effect,
                precond,
            } => {
                write!(f, "{action} causes {effect}")?;
                tail(f, precond)
            }
            Proposition::Executable { action, precond } => {
                write!(f, "executable {action}")?;
                tail(f, precond)
            }
            Proposition::Determines { action, fluent } => {
                write!(f, "{action} determines {fluent}.")
            }
        }
    }
}

/// One reason a bag of propositions is not a domain description.
///
/// Indices are 0-based positions in the proposition list; messages
/// number propositions from 1.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("contradictory initial-knowledge propositions #{} `{}` and #{} `{}`", .first + 1, .props.0, .second + 1, .props.1)]
    ContradictoryInitially {
        first: usize,
        second: usize,
        props: (Proposition, Proposition),
    },
    #[error("contradictory effect propositions #{} `{}` and #{} `{}`", .first + 1, .props.0, .second + 1, .props.1)]
    ContradictoryEffects {
        first: usize,
        second: usize,
        props: (Proposition, Proposition),
    },
    #[error("action `{action}` is both sensing (#{} `{}`) and non-sensing (#{} `{}`)", .sensing + 1, .props.0, .non_sensing + 1, .props.1)]
    SensingNonSensingOverlap {
        action: Symbol,
        sensing: usize,
        non_sensing: usize,
        props: (Proposition, Proposition),
    },
    #[error("inconsistent precondition in #{} `{prop}`", .index + 1)]
    InconsistentPrecondition { index: usize, prop: Proposition },
}

/// A validated domain description with per-action indexes.
#[derive(Clone, Debug)]
pub struct DomainDescription {
    propositions: Vec<Proposition>,
    sensing: BTreeSet<Symbol>,
    non_sensing: BTreeSet<Symbol>,
    effects: BTreeMap<Symbol, Vec<(FluentLiteral, LiteralSet)>>,
    executability: BTreeMap<Symbol, Vec<LiteralSet>>,
    knowledge: BTreeMap<Symbol, BTreeSet<Symbol>>,
    initial: LiteralSet,
    fluents: BTreeSet<Symbol>,
    hash: String,
}

impl PartialEq for DomainDescription {
    fn eq(&self, other: &Self) -> bool {
        self.propositions == other.propositions
    }
}

impl Eq for DomainDescription {}

/// Checks the domain-description conditions and builds the indexes.
///
/// Every violated condition is reported, each naming the propositions
/// involved by position.
pub fn validate_domain(props: Vec<Proposition>) -> Result<DomainDescription, Vec<DomainError>> {
    let mut errors = Vec::new();

    for (i, p) in props.iter().enumerate() {
        if let Proposition::Effect { precond, .. } | Proposition::Executable { precond, .. } = p {
            if !precond.is_consistent() {
                errors.push(DomainError::InconsistentPrecondition {
                    index: i,
                    prop: p.clone(),
                });
            }
        }
    }

    for (i, p) in props.iter().enumerate() {
        for (j, q) in props.iter().enumerate().skip(i + 1) {
            match (p, q) {
                (Proposition::Initially(a), Proposition::Initially(b)) if *a == b.negate() => {
                    errors.push(DomainError::ContradictoryInitially {
                        first: i,
                        second: j,
                        props: (p.clone(), q.clone()),
                    });
                }
                (
                    Proposition::Effect {
                        action: a1,
                        effect: e1,
                        precond: p1,
                    },
                    Proposition::Effect {
                        action: a2,
                        effect: e2,
                        precond: p2,
                    },
                ) if a1 == a2 && *e1 == e2.negate() => {
                    // Contradictory iff {p1..pn} and {~q1..~qm} are disjoint.
                    let neg_q = p2.negated();
                    if p1.iter().all(|l| !neg_q.contains(l)) {
                        errors.push(DomainError::ContradictoryEffects {
                            first: i,
                            second: j,
                            props: (p.clone(), q.clone()),
                        });
                    }
                }
                _ => {}
            }
        }
    }

    let mut first_sensing: BTreeMap<Symbol, usize> = BTreeMap::new();
    let mut first_effect: BTreeMap<Symbol, usize> = BTreeMap::new();
    for (i, p) in props.iter().enumerate() {
        match p {
            Proposition::Determines { action, .. } => {
                first_sensing.entry(action.clone()).or_insert(i);
            }
            Proposition::Effect { action, .. } => {
                first_effect.entry(action.clone()).or_insert(i);
            }
            _ => {}
        }
    }
    for (action, &s) in &first_sensing {
        if let Some(&e) = first_effect.get(action) {
            errors.push(DomainError::SensingNonSensingOverlap {
                action: action.clone(),
                sensing: s,
                non_sensing: e,
                props: (props[s].clone(), props[e].clone()),
            });
        }
    }

    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(DomainDescription::index(props))
}

impl DomainDescription {
    fn index(propositions: Vec<Proposition>) -> Self {
        let mut sensing = BTreeSet::new();
        let mut non_sensing = BTreeSet::new();
        let mut effects: BTreeMap<Symbol, Vec<_>> = BTreeMap::new();
        let mut executability: BTreeMap<Symbol, Vec<_>> = BTreeMap::new();
        let mut knowledge: BTreeMap<Symbol, BTreeSet<Symbol>> = BTreeMap::new();
        let mut initial = LiteralSet::new();
        let mut fluents = BTreeSet::new();

        for p in &propositions {
            fluents.extend(p.fluents());
            match p {
                Proposition::Initially(l) => {
                    initial.insert(l.clone());
                }
                Proposition::Effect {
                    action,
                    effect,
                    precond,
                } => {
                    effects
                        .entry(action.clone())
                        .or_default()
                        .push((effect.clone(), precond.clone()));
                }
                Proposition::Executable { action, precond } => {
                    executability
                        .entry(action.clone())
                        .or_default()
                        .push(precond.clone());
                }
                Proposition::Determines { action, fluent } => {
                    knowledge
                        .entry(action.clone())
                        .or_default()
                        .insert(fluent.clone());
                }
            }
        }
        for p in &propositions {
            if let Some(a) = p.action() {
                if knowledge.contains_key(a) {
                    sensing.insert(a.clone());
                } else {
                    non_sensing.insert(a.clone());
                }
            }
        }

        let hash = hash_propositions(&propositions);
        DomainDescription {
            hash,
            propositions,
            sensing,
            non_sensing,
            effects,
            executability,
            knowledge,
            initial,
            fluents,
        }
    }

    pub fn propositions(&self) -> &[Proposition] {
        &self.propositions
    }

    pub fn sensing_actions(&self) -> &BTreeSet<Symbol> {
        &self.sensing
    }

    pub fn non_sensing_actions(&self) -> &BTreeSet<Symbol> {
        &self.non_sensing
    }

    pub fn actions(&self) -> impl Iterator<Item = &Symbol> + '_ {
        self.sensing.iter().chain(self.non_sensing.iter())
    }

    pub fn has_action(&self, a: &Symbol) -> bool {
        self.sensing.contains(a) || self.non_sensing.contains(a)
    }

    pub fn is_sensing(&self, a: &Symbol) -> bool {
        self.sensing.contains(a)
    }

    pub fn is_non_sensing(&self, a: &Symbol) -> bool {
        self.non_sensing.contains(a)
    }

    /// `(effect, precondition)` pairs of every ef-proposition for `a`.
    pub fn effects_of(&self, a: &Symbol) -> &[(FluentLiteral, LiteralSet)] {
        self.effects.get(a).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Ex-precondition sets of every ex-proposition for `a`.
    pub fn executability_of(&self, a: &Symbol) -> &[LiteralSet] {
        self.executability.get(a).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `K(a)`: fluents sensed by `a`. Empty for non-sensing actions.
    pub fn knowledge_of(&self, a: &Symbol) -> BTreeSet<Symbol> {
        self.knowledge.get(a).cloned().unwrap_or_default()
    }

    pub fn knowledge_map(&self) -> &BTreeMap<Symbol, BTreeSet<Symbol>> {
        &self.knowledge
    }

    /// Literals `p` with `initially p` in the domain.
    pub fn initial_set(&self) -> &LiteralSet {
        &self.initial
    }

    pub fn fluents(&self) -> &BTreeSet<Symbol> {
        &self.fluents
    }

    /// The same domain with every initial-knowledge proposition removed.
    pub fn without_initial(&self) -> DomainDescription {
        DomainDescription::index(
            self.propositions
                .iter()
                .filter(|p| !matches!(p, Proposition::Initially(_)))
                .cloned()
                .collect(),
        )
    }

    /// SHA-256 over the sorted, deduplicated action propositions.
    ///
    /// Initial-knowledge propositions do not affect the transition
    /// function and are left out, so derivations stay valid across
    /// domains that differ only in what is initially known.
    pub fn domain_hash(&self) -> String {
        self.hash.clone()
    }
}

fn hash_propositions(props: &[Proposition]) -> String {
    let lines: BTreeSet<String> = props
        .iter()
        .filter(|p| !matches!(p, Proposition::Initially(_)))
        .map(|p| p.to_string())
        .collect();
    let mut hasher = Sha256::new();
    for line in lines {
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}
