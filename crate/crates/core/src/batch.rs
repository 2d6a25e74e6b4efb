//! Many independent proofs or checks against one domain.
//!
//! Each function returns one result per input, in input order, whatever
//! the strategy.

use crate::domain::DomainDescription;
use crate::par::{self, Strategy};
use crate::proof::{check_derivation, CheckError, Derivation, Judgment, ProveError, Prover};
use crate::semantics::{entails_knows, entails_kwhether, SemanticsError};

pub fn prove_all(
    d: &DomainDescription,
    goals: &[Judgment],
    strategy: Strategy,
) -> Vec<Result<Derivation, ProveError>> {
    // Subgoals inside one proof stay sequential; the batch is the unit of work.
    let prover = Prover::with_strategy(d, Strategy::Sequential);
    par::map(strategy, goals, |j| match j {
        Judgment::Knows { pre, plan, post } => prover.derive_knows(pre, plan, post),
        Judgment::Kw { pre, plan, literal } => prover.derive_kw(pre, plan, literal),
    })
}

pub fn entails_all(
    d: &DomainDescription,
    goals: &[Judgment],
    strategy: Strategy,
) -> Vec<Result<bool, SemanticsError>> {
    par::map(strategy, goals, |j| match j {
        Judgment::Knows { pre, plan, post } => entails_knows(d, pre, plan, post),
        Judgment::Kw { pre, plan, literal } => entails_kwhether(d, pre, plan, literal),
    })
}

pub fn check_all(
    d: &DomainDescription,
    derivations: &[Derivation],
    strategy: Strategy,
) -> Vec<Result<(), CheckError>> {
    par::map(strategy, derivations, |deriv| check_derivation(d, deriv))
}
