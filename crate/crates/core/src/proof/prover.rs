//! Proof search by recursion on the structure of a normalized plan.
//!
//! Each case mirrors one way a valid triple can be established: the
//! empty plan by `ax1`, a leading non-sensing action by `ax2` and
//! composition, a leading sensing action by one subproof per sensing
//! completion, a leading case plan through the unique branch whose guard
//! holds. The tree is built first, then flattened in post-order with
//! repeated judgments shared.

use std::collections::HashMap;

use thiserror::Error;

use super::checker::sensing_completions;
use super::{Derivation, Judgment, Justification, ProofStep};
use crate::domain::DomainDescription;
use crate::literal::{FluentLiteral, LiteralSet, Symbol};
use crate::par::{self, Strategy};
use crate::plan::{normalize_plan, ConditionalPlan};
use crate::semantics::{knows_witness, kwhether_witness, res0, AState, SemanticsError, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProveError {
    #[error("not derivable: {0}")]
    NotDerivable(Witness),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    /// Proof search failed on a triple that the semantics accepts.
    #[error("proof search failed on a valid judgment: {0}")]
    Incomplete(Judgment),
}

enum Rule {
    Ax1,
    Ax2,
    Ax7,
    Rule3(Vec<Tree>),
    Rule4(usize, Box<Tree>),
    Rule5(Box<Tree>, Box<Tree>),
    Rule6(Box<Tree>),
    Rule8(Box<Tree>),
    Rule9(Box<Tree>),
    Rule10(Vec<Tree>),
    Rule11(Box<Tree>, Box<Tree>),
    Rule12(usize, Box<Tree>),
}

struct Tree {
    judgment: Judgment,
    rule: Rule,
}

impl Tree {
    fn new(judgment: Judgment, rule: Rule) -> Self {
        Tree { judgment, rule }
    }
}

/// Internal search outcome: `Stuck` means no proof along the canonical
/// route; the caller turns it into a semantic counterexample.
enum Fail {
    Stuck,
    Hard(SemanticsError),
}

type Search = Result<Tree, Fail>;

pub struct Prover<'d> {
    domain: &'d DomainDescription,
    strategy: Strategy,
}

impl<'d> Prover<'d> {
    pub fn new(domain: &'d DomainDescription) -> Self {
        Prover {
            domain,
            strategy: Strategy::default(),
        }
    }

    pub fn with_strategy(domain: &'d DomainDescription, strategy: Strategy) -> Self {
        Prover { domain, strategy }
    }

    /// A derivation of `{x} c {y}`.
    pub fn derive_knows(
        &self,
        x: &LiteralSet,
        c: &ConditionalPlan,
        y: &LiteralSet,
    ) -> Result<Derivation, ProveError> {
        let c = normalize_plan(c);
        check_set(x)?;
        check_set(y)?;
        match self.knows(x, &c, y) {
            Ok(tree) => Ok(self.linearize(tree)),
            Err(Fail::Hard(e)) => Err(e.into()),
            Err(Fail::Stuck) => match knows_witness(self.domain, x, &c, y)? {
                Some(w) => Err(ProveError::NotDerivable(w)),
                None => Err(ProveError::Incomplete(Judgment::knows(
                    x.clone(),
                    c,
                    y.clone(),
                ))),
            },
        }
    }

    /// A derivation of `{x} c {KW p}`.
    pub fn derive_kw(
        &self,
        x: &LiteralSet,
        c: &ConditionalPlan,
        p: &FluentLiteral,
    ) -> Result<Derivation, ProveError> {
        let c = normalize_plan(c);
        check_set(x)?;
        match self.kw(x, &c, p) {
            Ok(tree) => Ok(self.linearize(tree)),
            Err(Fail::Hard(e)) => Err(e.into()),
            Err(Fail::Stuck) => match kwhether_witness(self.domain, x, &c, p)? {
                Some(w) => Err(ProveError::NotDerivable(w)),
                None => Err(ProveError::Incomplete(Judgment::kw(
                    x.clone(),
                    c,
                    p.clone(),
                ))),
            },
        }
    }

    /// A literal set makes a precondition true exactly when it contains it.
    fn executable(&self, a: &Symbol, x: &LiteralSet) -> bool {
        self.domain
            .executability_of(a)
            .iter()
            .any(|pre| pre.is_subset(x))
    }

    fn ax2(&self, a: &Symbol, x: &LiteralSet) -> Tree {
        let state = AState::from_literals(x).expect("consistent");
        let r = res0(a, &state, self.domain).expect("non-sensing and executable");
        Tree::new(
            Judgment::knows(x.clone(), ConditionalPlan::Act(a.clone()), r.to_literals()),
            Rule::Ax2,
        )
    }

    /// Weakens the postcondition of a Knows tree to `y` if needed.
    fn weaken(tree: Tree, y: &LiteralSet) -> Search {
        let Judgment::Knows { pre, plan, post } = &tree.judgment else {
            unreachable!("weaken on a KW judgment")
        };
        if post == y {
            return Ok(tree);
        }
        if !y.is_subset(post) {
            return Err(Fail::Stuck);
        }
        let j = Judgment::knows(pre.clone(), plan.clone(), y.clone());
        Ok(Tree::new(j, Rule::Rule6(Box::new(tree))))
    }

    /// Index of the unique branch whose guard holds in `x`.
    fn pick_branch(&self, c: &ConditionalPlan, x: &LiteralSet) -> Result<usize, Fail> {
        let ConditionalPlan::Case(bs) = c else {
            unreachable!()
        };
        let live: Vec<usize> = (0..bs.len())
            .filter(|&i| bs[i].guard.is_subset(x))
            .collect();
        match live.len() {
            0 => Err(Fail::Stuck),
            1 => Ok(live[0]),
            _ => Err(Fail::Hard(SemanticsError::MultipleGuardsTrue {
                state: AState::from_literals(x).expect("consistent"),
                guards: live.iter().map(|&i| bs[i].guard.clone()).collect(),
            })),
        }
    }

    fn subproofs<F>(&self, xs: &[LiteralSet], f: F) -> Result<Vec<Tree>, Fail>
    where
        F: Fn(&LiteralSet) -> Search + Sync + Send,
    {
        let results = par::map(self.strategy, xs, f);
        let mut out = Vec::with_capacity(results.len());
        let mut first_err = None;
        for r in results {
            match r {
                Ok(t) => out.push(t),
                Err(Fail::Hard(e)) => return Err(Fail::Hard(e)),
                Err(Fail::Stuck) => first_err = first_err.or(Some(Fail::Stuck)),
            }
        }
        match first_err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    fn knows(&self, x: &LiteralSet, c: &ConditionalPlan, y: &LiteralSet) -> Search {
        let d = self.domain;
        let here = || Judgment::knows(x.clone(), c.clone(), y.clone());
        let Some((first, rest)) = c.split_first() else {
            let ax1 = Tree::new(
                Judgment::knows(x.clone(), ConditionalPlan::Empty, x.clone()),
                Rule::Ax1,
            );
            return Self::weaken(ax1, y);
        };
        match first {
            ConditionalPlan::Act(a) if d.is_sensing(a) => {
                if !self.executable(a, x) {
                    return Err(Fail::Stuck);
                }
                let completions = sensing_completions(x, a, d).expect("sensing action");
                let subs = self.subproofs(&completions, |xi| self.knows(xi, &rest, y))?;
                Ok(Tree::new(here(), Rule::Rule3(subs)))
            }
            ConditionalPlan::Act(a) if d.is_non_sensing(a) => {
                if !self.executable(a, x) {
                    return Err(Fail::Stuck);
                }
                let ax2 = self.ax2(a, x);
                if rest.is_empty() {
                    return Self::weaken(ax2, y);
                }
                let Judgment::Knows { post: r, .. } = &ax2.judgment else {
                    unreachable!()
                };
                let sub = self.knows(&r.clone(), &rest, y)?;
                Ok(Tree::new(here(), Rule::Rule5(Box::new(ax2), Box::new(sub))))
            }
            ConditionalPlan::Act(_) => Err(Fail::Stuck),
            ConditionalPlan::Case(bs) => {
                let i = self.pick_branch(first, x)?;
                let body = normalize_plan(&ConditionalPlan::seq(bs[i].body.clone(), rest));
                let sub = self.knows(x, &body, y)?;
                Ok(Tree::new(here(), Rule::Rule4(i, Box::new(sub))))
            }
            _ => unreachable!("split_first yields an action or a case plan"),
        }
    }

    /// `{x} c {KW p}` from a Knows proof of `{x} c {{p}}` or `{x} c {{~p}}`.
    fn kw_from_known(
        &self,
        x: &LiteralSet,
        c: &ConditionalPlan,
        p: &FluentLiteral,
        known: &LiteralSet,
    ) -> Search {
        let q = if known.contains(p) {
            p.clone()
        } else if known.contains(&p.negate()) {
            p.negate()
        } else {
            return Err(Fail::Stuck);
        };
        let k = self.knows(x, c, &LiteralSet::singleton(q.clone()))?;
        let r8 = Tree::new(
            Judgment::kw(x.clone(), c.clone(), q.clone()),
            Rule::Rule8(Box::new(k)),
        );
        if q == *p {
            Ok(r8)
        } else {
            Ok(Tree::new(
                Judgment::kw(x.clone(), c.clone(), p.clone()),
                Rule::Rule9(Box::new(r8)),
            ))
        }
    }

    fn kw(&self, x: &LiteralSet, c: &ConditionalPlan, p: &FluentLiteral) -> Search {
        let d = self.domain;
        let here = || Judgment::kw(x.clone(), c.clone(), p.clone());
        let Some((first, rest)) = c.split_first() else {
            return self.kw_from_known(x, c, p, x);
        };
        match first {
            ConditionalPlan::Act(a) if d.is_sensing(a) && rest.is_empty() => {
                if !self.executable(a, x) {
                    return Err(Fail::Stuck);
                }
                if x.contains(p) || x.contains(&p.negate()) {
                    return self.kw_from_known(x, c, p, x);
                }
                if !d.knowledge_of(a).contains(&p.fluent) {
                    return Err(Fail::Stuck);
                }
                let pos = FluentLiteral::pos(p.fluent.clone());
                let ax7 = Tree::new(Judgment::kw(x.clone(), c.clone(), pos), Rule::Ax7);
                if p.positive {
                    Ok(ax7)
                } else {
                    Ok(Tree::new(here(), Rule::Rule9(Box::new(ax7))))
                }
            }
            ConditionalPlan::Act(a) if d.is_sensing(a) => {
                if !self.executable(a, x) {
                    return Err(Fail::Stuck);
                }
                let completions = sensing_completions(x, a, d).expect("sensing action");
                let subs = self.subproofs(&completions, |xi| self.kw(xi, &rest, p))?;
                Ok(Tree::new(here(), Rule::Rule10(subs)))
            }
            ConditionalPlan::Act(a) if d.is_non_sensing(a) => {
                if !self.executable(a, x) {
                    return Err(Fail::Stuck);
                }
                let ax2 = self.ax2(a, x);
                let Judgment::Knows { post: r, .. } = &ax2.judgment else {
                    unreachable!()
                };
                if rest.is_empty() {
                    let r = r.clone();
                    return self.kw_from_known(x, c, p, &r);
                }
                let sub = self.kw(&r.clone(), &rest, p)?;
                Ok(Tree::new(
                    here(),
                    Rule::Rule11(Box::new(ax2), Box::new(sub)),
                ))
            }
            ConditionalPlan::Act(_) => Err(Fail::Stuck),
            ConditionalPlan::Case(bs) => {
                let i = self.pick_branch(first, x)?;
                let body = normalize_plan(&ConditionalPlan::seq(bs[i].body.clone(), rest));
                let sub = self.kw(x, &body, p)?;
                Ok(Tree::new(here(), Rule::Rule12(i, Box::new(sub))))
            }
            _ => unreachable!("split_first yields an action or a case plan"),
        }
    }

    fn linearize(&self, tree: Tree) -> Derivation {
        let mut steps = Vec::new();
        let mut seen = HashMap::new();
        emit(tree, &mut steps, &mut seen);
        Derivation {
            domain_hash: self.domain.domain_hash(),
            steps,
        }
    }
}

fn emit(tree: Tree, steps: &mut Vec<ProofStep>, seen: &mut HashMap<Judgment, usize>) -> usize {
    if let Some(&i) = seen.get(&tree.judgment) {
        return i;
    }
    let mut go = |t: Tree| emit(t, steps, seen);
    let justification = match tree.rule {
        Rule::Ax1 => Justification::Ax1,
        Rule::Ax2 => Justification::Ax2,
        Rule::Ax7 => Justification::Ax7,
        Rule::Rule3(ts) => Justification::Rule3 {
            premises: ts.into_iter().map(&mut go).collect(),
        },
        Rule::Rule10(ts) => Justification::Rule10 {
            premises: ts.into_iter().map(&mut go).collect(),
        },
        Rule::Rule4(branch, t) => Justification::Rule4 {
            branch,
            premise: go(*t),
        },
        Rule::Rule12(branch, t) => Justification::Rule12 {
            branch,
            premise: go(*t),
        },
        Rule::Rule5(a, b) => {
            let first = go(*a);
            Justification::Rule5 {
                first,
                second: go(*b),
            }
        }
        Rule::Rule11(a, b) => {
            let first = go(*a);
            Justification::Rule11 {
                first,
                second: go(*b),
            }
        }
        Rule::Rule6(t) => Justification::Rule6 { premise: go(*t) },
        Rule::Rule8(t) => Justification::Rule8 { premise: go(*t) },
        Rule::Rule9(t) => Justification::Rule9 { premise: go(*t) },
    };
    let idx = steps.len();
    seen.insert(tree.judgment.clone(), idx);
    steps.push(ProofStep::new(tree.judgment, justification));
    idx
}

fn check_set(x: &LiteralSet) -> Result<(), SemanticsError> {
    AState::from_literals(x).map(|_| ())
}

pub fn derive_knows(
    d: &DomainDescription,
    x: &LiteralSet,
    c: &ConditionalPlan,
    y: &LiteralSet,
) -> Result<Derivation, ProveError> {
    Prover::new(d).derive_knows(x, c, y)
}

pub fn derive_kw(
    d: &DomainDescription,
    x: &LiteralSet,
    c: &ConditionalPlan,
    p: &FluentLiteral,
) -> Result<Derivation, ProveError> {
    Prover::new(d).derive_kw(x, c, p)
}
