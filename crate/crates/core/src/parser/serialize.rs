use crate::domain::Proposition;
use crate::plan::{ConditionalPlan, Query};
use crate::proof::Judgment;

/// One proposition per line, in the given order.
pub fn serialize_domain(props: &[Proposition]) -> String {
    let mut out = String::new();
    for p in props {
        out.push_str(&p.to_string());
        out.push('\n');
    }
    out
}

pub fn serialize_plan(plan: &ConditionalPlan) -> String {
    plan.to_string()
}

pub fn serialize_triple(j: &Judgment) -> String {
    j.to_string()
}

pub fn serialize_query(q: &Query) -> String {
    q.to_string()
}
