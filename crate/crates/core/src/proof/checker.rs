use thiserror::Error;

use super::{Derivation, Judgment, Justification, ProofStep};
use crate::domain::DomainDescription;
use crate::literal::{FluentLiteral, LiteralSet, Symbol};
use crate::plan::{normalize_plan, ConditionalPlan};
use crate::semantics::{executable0, res0, AState};

/// Why a single step is not a valid axiom instance or rule application.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("premise {premise} does not precede step {step}")]
    DanglingPremise { premise: usize, step: usize },
    #[error("inconsistent literal set {0}")]
    InconsistentSet(LiteralSet),
    #[error("plan `{0}` is not in normal form")]
    NotNormalized(ConditionalPlan),
    #[error("{rule} concludes a {expected} judgment")]
    WrongJudgmentKind {
        rule: &'static str,
        expected: &'static str,
    },
    #[error("premise {premise} must be a {expected} judgment")]
    WrongPremiseKind {
        premise: usize,
        expected: &'static str,
    },
    #[error("{rule} needs a plan of the form {expected}, got `{found}`")]
    WrongPlanShape {
        rule: &'static str,
        expected: &'static str,
        found: ConditionalPlan,
    },
    #[error("action `{0}` does not occur in the domain")]
    UnknownAction(Symbol),
    #[error("action `{0}` is not a sensing action")]
    NotSensing(Symbol),
    #[error("action `{0}` is not a non-sensing action")]
    NotNonSensing(Symbol),
    #[error("action `{action}` is not 0-executable in {pre}")]
    NotExecutable { action: Symbol, pre: LiteralSet },
    #[error("postcondition must be {expected}, found {found}")]
    WrongResult {
        expected: LiteralSet,
        found: LiteralSet,
    },
    #[error("precondition and postcondition of an empty plan differ")]
    EmptyPlanMismatch,
    #[error("sensing completions not covered by premises: {}", fmt_sets(.missing))]
    MissingSensingBranch { missing: Vec<LiteralSet> },
    #[error("premise {premise} with precondition {pre} is not a sensing completion")]
    ExtraSensingBranch { premise: usize, pre: LiteralSet },
    #[error("case branch {branch} does not exist")]
    NoSuchBranch { branch: usize },
    #[error("guard {guard} of branch {branch} is not contained in {pre}")]
    GuardNotSatisfied {
        branch: usize,
        guard: LiteralSet,
        pre: LiteralSet,
    },
    #[error("premise {premise} does not match: expected {expected}, found {found}")]
    PremiseMismatch {
        premise: usize,
        expected: String,
        found: Judgment,
    },
    #[error("intermediate sets differ: {left} vs {right}")]
    CompositionMismatch { left: LiteralSet, right: LiteralSet },
    #[error("composed plan `{composed}` differs from `{found}`")]
    CompositionPlan {
        composed: ConditionalPlan,
        found: ConditionalPlan,
    },
    #[error("consequence needs {premise_pre} ⊆ {pre} and {post} ⊆ {premise_post}")]
    NotAConsequence {
        premise_pre: LiteralSet,
        pre: LiteralSet,
        post: LiteralSet,
        premise_post: LiteralSet,
    },
    #[error("`{action} determines {literal}` is not in the domain")]
    NotDetermined {
        action: Symbol,
        literal: FluentLiteral,
    },
}

fn fmt_sets(sets: &[LiteralSet]) -> String {
    sets.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("derivation is for domain {found}, expected {expected}")]
    DomainMismatch { expected: String, found: String },
    #[error("derivation has no steps")]
    Empty,
    #[error("step {index}: {error}")]
    BadStep { index: usize, error: StepError },
}

/// Accepts iff the domain hash matches and every step is justified by
/// the steps before it.
pub fn check_derivation(d: &DomainDescription, derivation: &Derivation) -> Result<(), CheckError> {
    let expected = d.domain_hash();
    if derivation.domain_hash != expected {
        return Err(CheckError::DomainMismatch {
            expected,
            found: derivation.domain_hash.clone(),
        });
    }
    if derivation.steps.is_empty() {
        return Err(CheckError::Empty);
    }
    let mut context: Vec<Judgment> = Vec::with_capacity(derivation.steps.len());
    for (index, step) in derivation.steps.iter().enumerate() {
        justify_step(d, step, &context).map_err(|error| CheckError::BadStep { index, error })?;
        context.push(step.judgment.clone());
    }
    Ok(())
}

/// `X ∪ X'` for every `X'` with `fln(X') = K(a)` and `X ∪ X'` consistent.
///
/// Ordered by the sensed fluents in name order, the positive literal
/// enumerated before the negative one.
pub fn sensing_completions(
    x: &LiteralSet,
    a: &Symbol,
    d: &DomainDescription,
) -> Result<Vec<LiteralSet>, StepError> {
    if !d.has_action(a) {
        return Err(StepError::UnknownAction(a.clone()));
    }
    if !d.is_sensing(a) {
        return Err(StepError::NotSensing(a.clone()));
    }
    let mut partial = vec![x.clone()];
    for f in d.knowledge_of(a) {
        let mut next = Vec::with_capacity(partial.len() * 2);
        for base in &partial {
            for lit in [FluentLiteral::pos(f.clone()), FluentLiteral::neg(f.clone())] {
                if base.contains(&lit.negate()) {
                    continue;
                }
                let mut s = base.clone();
                s.insert(lit);
                next.push(s);
            }
        }
        partial = next;
    }
    Ok(partial)
}

fn premise(ctx: &[Judgment], premise: usize, step: usize) -> Result<&Judgment, StepError> {
    ctx.get(premise)
        .ok_or(StepError::DanglingPremise { premise, step })
}

fn consistent(x: &LiteralSet) -> Result<(), StepError> {
    if x.is_consistent() {
        Ok(())
    } else {
        Err(StepError::InconsistentSet(x.clone()))
    }
}

fn state_of(x: &LiteralSet) -> AState {
    AState::from_literals(x).expect("checked consistent")
}

fn require_executable(a: &Symbol, x: &LiteralSet, d: &DomainDescription) -> Result<(), StepError> {
    match executable0(a, &state_of(x), d) {
        Ok(true) => Ok(()),
        Ok(false) => Err(StepError::NotExecutable {
            action: a.clone(),
            pre: x.clone(),
        }),
        Err(_) => Err(StepError::UnknownAction(a.clone())),
    }
}

fn require_sensing(a: &Symbol, d: &DomainDescription) -> Result<(), StepError> {
    if !d.has_action(a) {
        Err(StepError::UnknownAction(a.clone()))
    } else if !d.is_sensing(a) {
        Err(StepError::NotSensing(a.clone()))
    } else {
        Ok(())
    }
}

/// The parts of a judgment the rules look at. `Goal` is either a literal
/// set or a KW literal and must match exactly between premise and
/// conclusion.
#[derive(PartialEq)]
enum Goal<'j> {
    Set(&'j LiteralSet),
    Kw(&'j FluentLiteral),
}

fn parts(j: &Judgment) -> (&LiteralSet, &ConditionalPlan, Goal<'_>) {
    match j {
        Judgment::Knows { pre, plan, post } => (pre, plan, Goal::Set(post)),
        Judgment::Kw { pre, plan, literal } => (pre, plan, Goal::Kw(literal)),
    }
}

fn same_kind(a: &Judgment, b: &Judgment) -> bool {
    a.is_kw() == b.is_kw()
}

fn kind_name(kw: bool) -> &'static str {
    if kw {
        "KW"
    } else {
        "Knows"
    }
}

/// Checks one step against the judgments of the steps before it.
///
/// `context[i]` is the judgment of step `i`; the step being checked is
/// number `context.len()`.
pub fn justify_step(
    d: &DomainDescription,
    step: &ProofStep,
    context: &[Judgment],
) -> Result<(), StepError> {
    use Justification::*;
    let here = context.len();
    let j = &step.judgment;
    let rule = step.justification.name();

    let (pre, plan, goal) = parts(j);
    consistent(pre)?;
    if let Goal::Set(post) = goal {
        consistent(post)?;
    }
    if !plan.is_normalized() {
        return Err(StepError::NotNormalized(plan.clone()));
    }
    for p in step.justification.premises() {
        premise(context, p, here)?;
    }

    let expect_kind = |kw: bool| -> Result<(), StepError> {
        if j.is_kw() == kw {
            Ok(())
        } else {
            Err(StepError::WrongJudgmentKind {
                rule,
                expected: kind_name(kw),
            })
        }
    };

    match &step.justification {
        Ax1 => {
            expect_kind(false)?;
            if !plan.is_empty() {
                return Err(StepError::WrongPlanShape {
                    rule,
                    expected: "[]",
                    found: plan.clone(),
                });
            }
            match goal {
                Goal::Set(post) if post == pre => Ok(()),
                _ => Err(StepError::EmptyPlanMismatch),
            }
        }
        Ax2 => {
            expect_kind(false)?;
            let ConditionalPlan::Act(a) = plan else {
                return Err(StepError::WrongPlanShape {
                    rule,
                    expected: "a single action",
                    found: plan.clone(),
                });
            };
            if !d.has_action(a) {
                return Err(StepError::UnknownAction(a.clone()));
            }
            if !d.is_non_sensing(a) {
                return Err(StepError::NotNonSensing(a.clone()));
            }
            require_executable(a, pre, d)?;
            let expected = res0(a, &state_of(pre), d)
                .expect("non-sensing and executable")
                .to_literals();
            match goal {
                Goal::Set(post) if *post == expected => Ok(()),
                Goal::Set(post) => Err(StepError::WrongResult {
                    expected,
                    found: post.clone(),
                }),
                Goal::Kw(_) => unreachable!(),
            }
        }
        Rule3 { premises } | Rule10 { premises } => {
            expect_kind(matches!(step.justification, Rule10 { .. }))?;
            let (first, rest) = plan
                .split_first()
                .ok_or_else(|| StepError::WrongPlanShape {
                    rule,
                    expected: "a; c with a sensing",
                    found: plan.clone(),
                })?;
            let ConditionalPlan::Act(a) = first else {
                return Err(StepError::WrongPlanShape {
                    rule,
                    expected: "a; c with a sensing",
                    found: plan.clone(),
                });
            };
            require_sensing(a, d)?;
            require_executable(a, pre, d)?;
            let completions = sensing_completions(pre, a, d)?;
            let mut covered = vec![false; completions.len()];
            for &p in premises {
                let pj = &context[p];
                if !same_kind(pj, j) {
                    return Err(StepError::WrongPremiseKind {
                        premise: p,
                        expected: kind_name(j.is_kw()),
                    });
                }
                let (ppre, pplan, pgoal) = parts(pj);
                if *pplan != rest || pgoal != goal {
                    return Err(StepError::PremiseMismatch {
                        premise: p,
                        expected: format!("{{X ∪ X'}} {rest} {}", goal_text(&goal)),
                        found: pj.clone(),
                    });
                }
                match completions.iter().position(|c| c == ppre) {
                    Some(i) => covered[i] = true,
                    None => {
                        return Err(StepError::ExtraSensingBranch {
                            premise: p,
                            pre: ppre.clone(),
                        })
                    }
                }
            }
            let missing: Vec<LiteralSet> = completions
                .into_iter()
                .zip(covered)
                .filter(|(_, c)| !c)
                .map(|(s, _)| s)
                .collect();
            if missing.is_empty() {
                Ok(())
            } else {
                Err(StepError::MissingSensingBranch { missing })
            }
        }
        Rule4 { branch, premise } | Rule12 { branch, premise } => {
            expect_kind(matches!(step.justification, Rule12 { .. }))?;
            let shape_err = || StepError::WrongPlanShape {
                rule,
                expected: "c; c' with c a case plan",
                found: plan.clone(),
            };
            let (first, rest) = plan.split_first().ok_or_else(shape_err)?;
            let ConditionalPlan::Case(branches) = first else {
                return Err(shape_err());
            };
            let b = branches
                .get(*branch)
                .ok_or(StepError::NoSuchBranch { branch: *branch })?;
            if !b.guard.is_subset(pre) {
                return Err(StepError::GuardNotSatisfied {
                    branch: *branch,
                    guard: b.guard.clone(),
                    pre: pre.clone(),
                });
            }
            let body_plan = normalize_plan(&ConditionalPlan::seq(b.body.clone(), rest));
            let pj = &context[*premise];
            let (ppre, pplan, pgoal) = parts(pj);
            if !same_kind(pj, j) || ppre != pre || *pplan != body_plan || pgoal != goal {
                return Err(StepError::PremiseMismatch {
                    premise: *premise,
                    expected: format!("{pre} {body_plan} {}", goal_text(&goal)),
                    found: pj.clone(),
                });
            }
            Ok(())
        }
        Rule5 { first, second } | Rule11 { first, second } => {
            let kw = matches!(step.justification, Rule11 { .. });
            expect_kind(kw)?;
            let p1 = &context[*first];
            let p2 = &context[*second];
            let Judgment::Knows {
                pre: pre1,
                plan: plan1,
                post: mid1,
            } = p1
            else {
                return Err(StepError::WrongPremiseKind {
                    premise: *first,
                    expected: "Knows",
                });
            };
            if !same_kind(p2, j) {
                return Err(StepError::WrongPremiseKind {
                    premise: *second,
                    expected: kind_name(kw),
                });
            }
            let (mid2, plan2, goal2) = parts(p2);
            if pre1 != pre {
                return Err(StepError::PremiseMismatch {
                    premise: *first,
                    expected: format!("{pre} c1 {{Y'}}"),
                    found: p1.clone(),
                });
            }
            if mid1 != mid2 {
                return Err(StepError::CompositionMismatch {
                    left: mid1.clone(),
                    right: mid2.clone(),
                });
            }
            if goal2 != goal {
                return Err(StepError::PremiseMismatch {
                    premise: *second,
                    expected: format!("{{Y'}} c2 {}", goal_text(&goal)),
                    found: p2.clone(),
                });
            }
            let composed = normalize_plan(&ConditionalPlan::seq(plan1.clone(), plan2.clone()));
            if composed != *plan {
                return Err(StepError::CompositionPlan {
                    composed,
                    found: plan.clone(),
                });
            }
            Ok(())
        }
        Rule6 { premise } => {
            expect_kind(false)?;
            let pj = &context[*premise];
            let Judgment::Knows {
                pre: ppre,
                plan: pplan,
                post: ppost,
            } = pj
            else {
                return Err(StepError::WrongPremiseKind {
                    premise: *premise,
                    expected: "Knows",
                });
            };
            let Goal::Set(post) = goal else {
                unreachable!()
            };
            if pplan != plan {
                return Err(StepError::PremiseMismatch {
                    premise: *premise,
                    expected: format!("{{X'}} {plan} {{Y'}}"),
                    found: pj.clone(),
                });
            }
            if !ppre.is_subset(pre) || !post.is_subset(ppost) {
                return Err(StepError::NotAConsequence {
                    premise_pre: ppre.clone(),
                    pre: pre.clone(),
                    post: post.clone(),
                    premise_post: ppost.clone(),
                });
            }
            Ok(())
        }
        Ax7 => {
            expect_kind(true)?;
            let ConditionalPlan::Act(a) = plan else {
                return Err(StepError::WrongPlanShape {
                    rule,
                    expected: "a single sensing action",
                    found: plan.clone(),
                });
            };
            require_sensing(a, d)?;
            require_executable(a, pre, d)?;
            let Goal::Kw(p) = goal else { unreachable!() };
            if !p.positive || !d.knowledge_of(a).contains(&p.fluent) {
                return Err(StepError::NotDetermined {
                    action: a.clone(),
                    literal: p.clone(),
                });
            }
            Ok(())
        }
        Rule8 { premise } => {
            expect_kind(true)?;
            let Goal::Kw(p) = goal else { unreachable!() };
            let expected =
                Judgment::knows(pre.clone(), plan.clone(), LiteralSet::singleton(p.clone()));
            if context[*premise] != expected {
                return Err(StepError::PremiseMismatch {
                    premise: *premise,
                    expected: expected.to_string(),
                    found: context[*premise].clone(),
                });
            }
            Ok(())
        }
        Rule9 { premise } => {
            expect_kind(true)?;
            let Goal::Kw(p) = goal else { unreachable!() };
            let expected = Judgment::kw(pre.clone(), plan.clone(), p.negate());
            if context[*premise] != expected {
                return Err(StepError::PremiseMismatch {
                    premise: *premise,
                    expected: expected.to_string(),
                    found: context[*premise].clone(),
                });
            }
            Ok(())
        }
    }
}

fn goal_text(goal: &Goal<'_>) -> String {
    match goal {
        Goal::Set(s) => s.to_string(),
        Goal::Kw(p) => format!("{{KW {p}}}"),
    }
}
