//! Conditional plans and queries.

use std::fmt;

use crate::literal::{FluentLiteral, LiteralSet, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Branch {
    pub guard: LiteralSet,
    pub body: ConditionalPlan,
}

/// A conditional plan.
///
/// Guards of a `Case` are expected to be mutually exclusive. That is a
/// semantic condition and is only checked when a plan is evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionalPlan {
    Empty,
    Act(Symbol),
    Seq(Box<ConditionalPlan>, Box<ConditionalPlan>),
    Case(Vec<Branch>),
}

impl ConditionalPlan {
    pub fn act(a: impl Into<Symbol>) -> Self {
        ConditionalPlan::Act(a.into())
    }

    pub fn seq(first: ConditionalPlan, rest: ConditionalPlan) -> Self {
        ConditionalPlan::Seq(Box::new(first), Box::new(rest))
    }

    /// Right-associated sequence of `items`; `Empty` for no items.
    pub fn sequence(items: impl IntoIterator<Item = ConditionalPlan>) -> Self {
        let items: Vec<_> = items.into_iter().collect();
        let mut it = items.into_iter().rev();
        match it.next() {
            None => ConditionalPlan::Empty,
            Some(last) => it.fold(last, |acc, p| ConditionalPlan::seq(p, acc)),
        }
    }

    pub fn case(branches: impl IntoIterator<Item = (LiteralSet, ConditionalPlan)>) -> Self {
        ConditionalPlan::Case(
            branches
                .into_iter()
                .map(|(guard, body)| Branch { guard, body })
                .collect(),
        )
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ConditionalPlan::Empty)
    }

    /// Splits a normalized plan into its first item and the remainder.
    ///
    /// `a` is read as `a;[]`. Returns `None` for the empty plan.
    pub fn split_first(&self) -> Option<(&ConditionalPlan, ConditionalPlan)> {
        match self {
            ConditionalPlan::Empty => None,
            ConditionalPlan::Seq(first, rest) => Some((first, (**rest).clone())),
            other => Some((other, ConditionalPlan::Empty)),
        }
    }

    /// True if the plan is already in normal form.
    pub fn is_normalized(&self) -> bool {
        fn item_ok(p: &ConditionalPlan) -> bool {
            match p {
                ConditionalPlan::Act(_) => true,
                ConditionalPlan::Case(bs) => bs.iter().all(|b| b.body.is_normalized()),
                _ => false,
            }
        }
        match self {
            ConditionalPlan::Empty => true,
            ConditionalPlan::Seq(first, rest) => {
                item_ok(first) && !rest.is_empty() && rest.is_normalized()
            }
            other => item_ok(other),
        }
    }

    /// Depth of nesting; `Empty` and actions have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            ConditionalPlan::Empty | ConditionalPlan::Act(_) => 0,
            ConditionalPlan::Seq(a, b) => 1 + a.depth().max(b.depth()),
            ConditionalPlan::Case(bs) => 1 + bs.iter().map(|b| b.body.depth()).max().unwrap_or(0),
        }
    }

    /// Every action name mentioned anywhere in the plan.
    pub fn actions(&self) -> Vec<&Symbol> {
        let mut out = Vec::new();
        fn walk<'a>(p: &'a ConditionalPlan, out: &mut Vec<&'a Symbol>) {
            match p {
                ConditionalPlan::Empty => {}
                ConditionalPlan::Act(a) => out.push(a),
                ConditionalPlan::Seq(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                ConditionalPlan::Case(bs) => bs.iter().for_each(|b| walk(&b.body, out)),
            }
        }
        walk(self, &mut out);
        out
    }

    fn collect_items(&self, out: &mut Vec<ConditionalPlan>) {
        match self {
            ConditionalPlan::Empty => {}
            ConditionalPlan::Act(_) => out.push(self.clone()),
            ConditionalPlan::Seq(a, b) => {
                a.collect_items(out);
                b.collect_items(out);
            }
            ConditionalPlan::Case(bs) => out.push(ConditionalPlan::Case(
                bs.iter()
                    .map(|b| Branch {
                        guard: b.guard.clone(),
                        body: normalize_plan(&b.body),
                    })
                    .collect(),
            )),
        }
    }
}

/// Drops `Empty` from sequences and right-associates `Seq`, recursively
/// inside case bodies.
pub fn normalize_plan(c: &ConditionalPlan) -> ConditionalPlan {
    let mut items = Vec::new();
    c.collect_items(&mut items);
    ConditionalPlan::sequence(items)
}

impl fmt::Display for ConditionalPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionalPlan::Empty => f.write_str("[]"),
            ConditionalPlan::Act(a) => write!(f, "{a}"),
            ConditionalPlan::Seq(a, b) => write!(f, "{a}; {b}"),
            ConditionalPlan::Case(bs) => {
                f.write_str("case")?;
                for b in bs {
                    f.write_str(" ")?;
                    for (i, p) in b.guard.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{p}")?;
                    }
                    write!(f, " -> {}.", b.body)?;
                }
                f.write_str(" endcase")
            }
        }
    }
}

/// `knows Y after c` or `kwhether p after c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Query {
    Knows {
        goal: LiteralSet,
        plan: ConditionalPlan,
    },
    Kwhether {
        literal: FluentLiteral,
        plan: ConditionalPlan,
    },
}

impl Query {
    pub fn plan(&self) -> &ConditionalPlan {
        match self {
            Query::Knows { plan, .. } | Query::Kwhether { plan, .. } => plan,
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Knows { goal, plan } => {
                f.write_str("knows ")?;
                for (i, p) in goal.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, " after {plan}.")
            }
            Query::Kwhether { literal, plan } => write!(f, "kwhether {literal} after {plan}."),
        }
    }
}
