use std::fmt;

use crate::literal::{FluentLiteral, LiteralSet};
use crate::plan::ConditionalPlan;

/// `{X} c {Y}` or `{X} c {KW p}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Judgment {
    Knows {
        pre: LiteralSet,
        plan: ConditionalPlan,
        post: LiteralSet,
    },
    Kw {
        pre: LiteralSet,
        plan: ConditionalPlan,
        literal: FluentLiteral,
    },
}

impl Judgment {
    pub fn knows(pre: LiteralSet, plan: ConditionalPlan, post: LiteralSet) -> Self {
        Judgment::Knows { pre, plan, post }
    }

    pub fn kw(pre: LiteralSet, plan: ConditionalPlan, literal: FluentLiteral) -> Self {
        Judgment::Kw { pre, plan, literal }
    }

    pub fn pre(&self) -> &LiteralSet {
        match self {
            Judgment::Knows { pre, .. } | Judgment::Kw { pre, .. } => pre,
        }
    }

    pub fn plan(&self) -> &ConditionalPlan {
        match self {
            Judgment::Knows { plan, .. } | Judgment::Kw { plan, .. } => plan,
        }
    }

    pub fn is_kw(&self) -> bool {
        matches!(self, Judgment::Kw { .. })
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Judgment::Knows { pre, plan, post } => write!(f, "{pre} {plan} {post}"),
            Judgment::Kw { pre, plan, literal } => write!(f, "{pre} {plan} {{KW {literal}}}"),
        }
    }
}
