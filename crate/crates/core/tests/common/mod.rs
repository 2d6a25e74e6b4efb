//! Generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use ak_core::domain::{validate_domain, DomainDescription, Proposition};
use ak_core::literal::{FluentLiteral, LiteralSet, Symbol};
use ak_core::plan::{Branch, ConditionalPlan, Query};
use ak_core::semantics::{phi0_hat, AState, StateOutcome};
use ak_core::Judgment;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub const BOMB: &str = include_str!("../fixtures/bomb.ak");

pub fn bomb() -> DomainDescription {
    domain_from(BOMB)
}

pub fn domain_from(text: &str) -> DomainDescription {
    validate_domain(ak_core::parser::parse_domain(text).unwrap()).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn fluent_names(n: usize) -> Vec<Symbol> {
    (0..n).map(|i| Symbol::new(&format!("f{i}"))).collect()
}

pub fn lit(f: &Symbol, positive: bool) -> FluentLiteral {
    if positive {
        FluentLiteral::pos(f.clone())
    } else {
        FluentLiteral::neg(f.clone())
    }
}

/// A consistent set: each fluent absent with probability `1 - density`,
/// otherwise positive or negative with equal chance.
pub fn random_set(rng: &mut StdRng, fluents: &[Symbol], density: f64) -> LiteralSet {
    let mut out = LiteralSet::new();
    for f in fluents {
        if rng.gen_bool(density) {
            out.insert(lit(f, rng.gen_bool(0.5)));
        }
    }
    out
}

/// A consistent nonempty-or-empty set of at most `max` literals.
pub fn random_small_set(rng: &mut StdRng, fluents: &[Symbol], max: usize) -> LiteralSet {
    let n = rng.gen_range(0..=max.min(fluents.len()));
    fluents
        .choose_multiple(rng, n)
        .map(|f| lit(f, rng.gen_bool(0.5)))
        .collect()
}

pub struct DomainShape {
    pub fluents: usize,
    pub actions: usize,
    pub max_effects: usize,
    pub sensing_ratio: f64,
    pub initially: bool,
}

impl Default for DomainShape {
    fn default() -> Self {
        DomainShape {
            fluents: 4,
            actions: 3,
            max_effects: 2,
            sensing_ratio: 0.35,
            initially: true,
        }
    }
}

fn random_action(
    rng: &mut StdRng,
    a: &Symbol,
    fluents: &[Symbol],
    shape: &DomainShape,
) -> Vec<Proposition> {
    let mut props = Vec::new();
    if rng.gen_bool(shape.sensing_ratio) {
        let k = rng.gen_range(1..=2.min(fluents.len()));
        for f in fluents.choose_multiple(rng, k) {
            props.push(Proposition::Determines {
                action: a.clone(),
                fluent: f.clone(),
            });
        }
    } else {
        for _ in 0..rng.gen_range(0..=shape.max_effects) {
            let f = fluents.choose(rng).unwrap();
            props.push(Proposition::Effect {
                action: a.clone(),
                effect: lit(f, rng.gen_bool(0.5)),
                precond: random_small_set(rng, fluents, 2),
            });
        }
    }
    // Usually executable somewhere; occasionally only through an empty set
    // of ex-propositions, which makes the action never executable.
    let ex = if rng.gen_bool(0.05) {
        0
    } else {
        rng.gen_range(1..=2)
    };
    for i in 0..ex {
        let precond = if i == 0 && rng.gen_bool(0.5) {
            LiteralSet::new()
        } else {
            random_small_set(rng, fluents, 1)
        };
        props.push(Proposition::Executable {
            action: a.clone(),
            precond,
        });
    }
    if props.is_empty() {
        props.push(Proposition::Executable {
            action: a.clone(),
            precond: LiteralSet::new(),
        });
    }
    props
}

/// A random valid domain over fluents `f0..` and actions `a0..`.
pub fn random_domain(rng: &mut StdRng, shape: &DomainShape) -> DomainDescription {
    let fluents = fluent_names(shape.fluents);
    loop {
        let mut props = Vec::new();
        if shape.initially && rng.gen_bool(0.3) {
            for p in random_small_set(rng, &fluents, 2).iter() {
                props.push(Proposition::Initially(p.clone()));
            }
        }
        for i in 0..shape.actions {
            let a = Symbol::new(&format!("a{i}"));
            props.extend(random_action(rng, &a, &fluents, shape));
        }
        if let Ok(d) = validate_domain(props) {
            return d;
        }
    }
}

/// All fluents the domain mentions, padded with `f0..` up to `n`.
pub fn domain_fluents(d: &DomainDescription, n: usize) -> Vec<Symbol> {
    let mut fs: BTreeSet<Symbol> = d.fluents().clone();
    fs.extend(fluent_names(n));
    fs.into_iter().collect()
}

/// Case plan guards: distinct full assignments over one or two fluents,
/// so no two guards can hold together.
pub fn random_guards(rng: &mut StdRng, fluents: &[Symbol]) -> Vec<LiteralSet> {
    let k = rng.gen_range(1..=2.min(fluents.len()));
    let fs: Vec<Symbol> = fluents.choose_multiple(rng, k).cloned().collect();
    let mut all: Vec<LiteralSet> = (0..1u32 << k)
        .map(|mask| {
            fs.iter()
                .enumerate()
                .map(|(i, f)| lit(f, mask & (1 << i) == 0))
                .collect()
        })
        .collect();
    all.shuffle(rng);
    let n = rng.gen_range(1..=all.len());
    all.truncate(n);
    all
}

/// A random plan of nesting depth at most `depth`.
pub fn random_plan(
    rng: &mut StdRng,
    actions: &[Symbol],
    fluents: &[Symbol],
    depth: usize,
) -> ConditionalPlan {
    let roll: f64 = rng.gen();
    if depth == 0 || roll < 0.35 {
        return if rng.gen_bool(0.1) {
            ConditionalPlan::Empty
        } else {
            ConditionalPlan::Act(actions.choose(rng).unwrap().clone())
        };
    }
    if roll < 0.75 {
        let a = random_plan(rng, actions, fluents, depth - 1);
        let b = random_plan(rng, actions, fluents, depth - 1);
        ConditionalPlan::seq(a, b)
    } else {
        let guards = random_guards(rng, fluents);
        ConditionalPlan::Case(
            guards
                .into_iter()
                .map(|guard| Branch {
                    guard,
                    body: random_plan(rng, actions, fluents, depth - 1),
                })
                .collect(),
        )
    }
}

pub fn actions_of(d: &DomainDescription) -> Vec<Symbol> {
    d.actions().cloned().collect()
}

/// Every a-state over `fluents` (3^n of them).
pub fn all_states(fluents: &[Symbol]) -> Vec<AState> {
    let mut out = vec![LiteralSet::new()];
    for f in fluents {
        let mut next = Vec::with_capacity(out.len() * 3);
        for s in &out {
            next.push(s.clone());
            for pos in [true, false] {
                let mut t = s.clone();
                t.insert(lit(f, pos));
                next.push(t);
            }
        }
        out = next;
    }
    out.iter()
        .map(|x| AState::from_literals(x).unwrap())
        .collect()
}

/// A random state extending `s`.
pub fn extend_state(rng: &mut StdRng, s: &AState, fluents: &[Symbol]) -> AState {
    let mut x = s.to_literals();
    for f in fluents {
        if !s.is_known(f) && rng.gen_bool(0.4) {
            x.insert(lit(f, rng.gen_bool(0.5)));
        }
    }
    AState::from_literals(&x).unwrap()
}

/// A goal that often holds: literals common to every reachable state,
/// randomly thinned, sometimes with one random literal added.
pub fn plausible_goal(
    rng: &mut StdRng,
    d: &DomainDescription,
    x: &LiteralSet,
    c: &ConditionalPlan,
    fluents: &[Symbol],
) -> LiteralSet {
    let start = AState::from_literals(x).unwrap();
    let mut y = match phi0_hat(c, &start, d) {
        Ok(StateOutcome::States(ss)) if !ss.is_empty() => {
            let mut it = ss.iter().map(|s| s.to_literals());
            let first = it.next().unwrap();
            it.fold(first, |acc, s| {
                acc.iter().filter(|p| s.contains(p)).cloned().collect()
            })
        }
        _ => LiteralSet::new(),
    };
    y = y.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
    if rng.gen_bool(0.25) {
        let f = fluents.choose(rng).unwrap();
        let p = lit(f, rng.gen_bool(0.5));
        if !y.contains(&p.negate()) {
            y.insert(p);
        }
    }
    y
}

/// A random Knows or KW judgment for `d`.
pub fn random_judgment(
    rng: &mut StdRng,
    d: &DomainDescription,
    fluents: &[Symbol],
    depth: usize,
) -> Judgment {
    let actions = actions_of(d);
    let c = ak_core::normalize_plan(&random_plan(rng, &actions, fluents, depth));
    let x = random_set(rng, fluents, 0.5);
    if rng.gen_bool(0.6) {
        let y = plausible_goal(rng, d, &x, &c, fluents);
        Judgment::knows(x, c, y)
    } else {
        let f = fluents.choose(rng).unwrap();
        Judgment::kw(x, c, lit(f, rng.gen_bool(0.5)))
    }
}

pub fn random_query(
    rng: &mut StdRng,
    d: &DomainDescription,
    fluents: &[Symbol],
    depth: usize,
) -> Query {
    let actions = actions_of(d);
    let plan = ak_core::normalize_plan(&random_plan(rng, &actions, fluents, depth));
    if rng.gen_bool(0.5) {
        let mut goal = random_small_set(rng, fluents, 3);
        if goal.is_empty() {
            goal.insert(lit(fluents.choose(rng).unwrap(), rng.gen_bool(0.5)));
        }
        Query::Knows { goal, plan }
    } else {
        let f = fluents.choose(rng).unwrap();
        Query::Kwhether {
            literal: lit(f, rng.gen_bool(0.5)),
            plan,
        }
    }
}

const FUZZ_WORDS: &[&str] = &[
    "causes",
    "if",
    "executable",
    "determines",
    "initially",
    "case",
    "endcase",
    "knows",
    "kwhether",
    "after",
    "KW",
    "[]",
    "[",
    "]",
    "{",
    "}",
    "~",
    ",",
    ".",
    ";",
    "->",
    "-",
    ">",
    "f",
    "g",
    "alarm_off",
    "a1",
    "Bad",
    "1x",
    "//",
    "\n",
    " ",
    "\t",
    "é",
    "\u{0}",
    "{}",
    "~~",
    "..",
    "_x",
];

/// Token soup, raw bytes, or a mutated valid text.
pub fn fuzz_input(rng: &mut StdRng, seeds: &[&str]) -> String {
    match rng.gen_range(0..3) {
        0 => {
            let n = rng.gen_range(0..40);
            let mut s = String::new();
            for _ in 0..n {
                s.push_str(FUZZ_WORDS.choose(rng).unwrap());
                if rng.gen_bool(0.5) {
                    s.push(' ');
                }
            }
            s
        }
        1 => {
            let n = rng.gen_range(0..60);
            (0..n)
                .map(|_| char::from_u32(rng.gen_range(0..0x250)).unwrap_or('?'))
                .collect()
        }
        _ => {
            let mut chars: Vec<char> = seeds.choose(rng).unwrap().chars().collect();
            for _ in 0..rng.gen_range(1..6) {
                let op = rng.gen_range(0..3);
                if chars.is_empty() || op == 0 {
                    let at = rng.gen_range(0..=chars.len());
                    let w = FUZZ_WORDS.choose(rng).unwrap();
                    for (k, c) in w.chars().enumerate() {
                        chars.insert(at + k, c);
                    }
                } else if op == 1 {
                    let at = rng.gen_range(0..chars.len());
                    chars.remove(at);
                } else {
                    let at = rng.gen_range(0..chars.len());
                    let len = rng.gen_range(0..=(chars.len() - at));
                    chars.drain(at..at + len);
                }
            }
            chars.into_iter().collect()
        }
    }
}
