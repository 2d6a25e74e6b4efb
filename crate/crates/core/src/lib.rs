//! Plan verification for the action language A_K under the
//! 0-approximation: a domain and plan parser, the transition semantics,
//! a checker and prover for Knows / Knows-Whether triples, and a proof
//! graph that answers plan-existence queries from stored proofs.

pub mod batch;
pub mod cli;
pub mod domain;
pub mod literal;
pub mod par;
pub mod parser;
pub mod plan;
pub mod plandb;
pub mod proof;
pub mod semantics;

pub use domain::{validate_domain, DomainDescription, DomainError, Proposition};
pub use literal::{FluentLiteral, LiteralSet, Symbol};
pub use par::Strategy;
pub use plan::{normalize_plan, Branch, ConditionalPlan, Query};
pub use plandb::{LoadMode, ProofGraph};
pub use proof::{Derivation, Judgment, Justification, ProofStep};
pub use semantics::{AState, StateOutcome, Truth, Witness};
