//! The 0-approximation: a-states, the transition function over single
//! actions and its extension to conditional plans, and entailment of
//! knowledge queries.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::domain::DomainDescription;
use crate::literal::{FluentLiteral, LiteralSet, Symbol};
use crate::plan::{ConditionalPlan, Query};

/// Three-valued reading of a literal in an a-state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    /// True or unknown.
    pub fn possibly_true(self) -> bool {
        self != Truth::False
    }
}

/// A pair `(T, F)` of disjoint sets of fluents known true and known false.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AState {
    true_set: BTreeSet<Symbol>,
    false_set: BTreeSet<Symbol>,
}

impl AState {
    pub fn new(
        true_set: BTreeSet<Symbol>,
        false_set: BTreeSet<Symbol>,
    ) -> Result<Self, SemanticsError> {
        if let Some(f) = true_set.intersection(&false_set).next() {
            return Err(SemanticsError::Overlap(f.clone()));
        }
        Ok(AState {
            true_set,
            false_set,
        })
    }

    /// The a-state with nothing known.
    pub fn empty() -> Self {
        AState::default()
    }

    /// `(T_X, F_X)` for a consistent literal set.
    pub fn from_literals(x: &LiteralSet) -> Result<Self, SemanticsError> {
        if !x.is_consistent() {
            return Err(SemanticsError::InconsistentSet(x.clone()));
        }
        let mut s = AState::empty();
        for p in x {
            if p.positive {
                s.true_set.insert(p.fluent.clone());
            } else {
                s.false_set.insert(p.fluent.clone());
            }
        }
        Ok(s)
    }

    /// `T ∪ ~F`.
    pub fn to_literals(&self) -> LiteralSet {
        self.true_set
            .iter()
            .map(|f| FluentLiteral::pos(f.clone()))
            .chain(self.false_set.iter().map(|f| FluentLiteral::neg(f.clone())))
            .collect()
    }

    pub fn true_set(&self) -> &BTreeSet<Symbol> {
        &self.true_set
    }

    pub fn false_set(&self) -> &BTreeSet<Symbol> {
        &self.false_set
    }

    pub fn is_known(&self, f: &Symbol) -> bool {
        self.true_set.contains(f) || self.false_set.contains(f)
    }

    pub fn truth(&self, p: &FluentLiteral) -> Truth {
        let (yes, no) = if p.positive {
            (&self.true_set, &self.false_set)
        } else {
            (&self.false_set, &self.true_set)
        };
        if yes.contains(&p.fluent) {
            Truth::True
        } else if no.contains(&p.fluent) {
            Truth::False
        } else {
            Truth::Unknown
        }
    }

    /// Every literal of `x` is true.
    pub fn holds(&self, x: &LiteralSet) -> bool {
        x.iter().all(|p| self.truth(p) == Truth::True)
    }

    /// Every literal of `x` is possibly true.
    pub fn possibly_holds(&self, x: &LiteralSet) -> bool {
        x.iter().all(|p| self.truth(p).possibly_true())
    }
}

impl fmt::Display for AState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_literals(), f)
    }
}

impl fmt::Debug for AState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_literals(), f)
    }
}

pub fn truth(p: &FluentLiteral, sigma: &AState) -> Truth {
    sigma.truth(p)
}

/// The extension order: `T1 ⊆ T2` and `F1 ⊆ F2`.
pub fn leq(s1: &AState, s2: &AState) -> bool {
    s1.true_set.is_subset(&s2.true_set) && s1.false_set.is_subset(&s2.false_set)
}

/// Every state of `sigma2` extends some state of `sigma1`.
pub fn set_leq<'a, 'b>(
    sigma1: impl IntoIterator<Item = &'a AState> + Clone,
    sigma2: impl IntoIterator<Item = &'b AState>,
) -> bool {
    sigma2
        .into_iter()
        .all(|d| sigma1.clone().into_iter().any(|s| leq(s, d)))
}

/// Result of running an action or plan: failure, or the reachable states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StateOutcome {
    Bottom,
    States(BTreeSet<AState>),
}

impl StateOutcome {
    pub fn single(s: AState) -> Self {
        StateOutcome::States(BTreeSet::from([s]))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, StateOutcome::Bottom)
    }

    pub fn states(&self) -> Option<&BTreeSet<AState>> {
        match self {
            StateOutcome::Bottom => None,
            StateOutcome::States(s) => Some(s),
        }
    }
}

impl fmt::Display for StateOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateOutcome::Bottom => f.write_str("BOTTOM"),
            StateOutcome::States(states) => {
                for (i, s) in states.iter().enumerate() {
                    if i > 0 {
                        f.write_str("\n")?;
                    }
                    write!(f, "{s}")?;
                }
                Ok(())
            }
        }
    }
}

/// `e+`, `e-`, `F+`, `F-` of a non-sensing action in a state.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EffectSets {
    pub e_plus: BTreeSet<Symbol>,
    pub e_minus: BTreeSet<Symbol>,
    pub f_plus: BTreeSet<Symbol>,
    pub f_minus: BTreeSet<Symbol>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("action `{0}` does not occur in the domain")]
    UnknownAction(Symbol),
    #[error("action `{0}` is not a non-sensing action")]
    NotNonSensing(Symbol),
    #[error("action `{action}` is not 0-executable in {state}")]
    NotExecutable { action: Symbol, state: AState },
    #[error("more than one case guard is true in {state}: {}", fmt_guards(.guards))]
    MultipleGuardsTrue {
        state: AState,
        guards: Vec<LiteralSet>,
    },
    #[error("inconsistent literal set {0}")]
    InconsistentSet(LiteralSet),
    #[error("fluent `{0}` is both true and false")]
    Overlap(Symbol),
}

fn fmt_guards(gs: &[LiteralSet]) -> String {
    gs.iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Some ex-proposition for `a` has all its ex-preconditions true in `sigma`.
pub fn executable0(
    a: &Symbol,
    sigma: &AState,
    d: &DomainDescription,
) -> Result<bool, SemanticsError> {
    if !d.has_action(a) {
        return Err(SemanticsError::UnknownAction(a.clone()));
    }
    Ok(d.executability_of(a).iter().any(|pre| sigma.holds(pre)))
}

pub fn effect_sets(
    a: &Symbol,
    sigma: &AState,
    d: &DomainDescription,
) -> Result<EffectSets, SemanticsError> {
    if !d.has_action(a) {
        return Err(SemanticsError::UnknownAction(a.clone()));
    }
    if !d.is_non_sensing(a) {
        return Err(SemanticsError::NotNonSensing(a.clone()));
    }
    let mut sets = EffectSets::default();
    for (effect, pre) in d.effects_of(a) {
        let (sure, maybe) = if effect.positive {
            (&mut sets.e_plus, &mut sets.f_plus)
        } else {
            (&mut sets.e_minus, &mut sets.f_minus)
        };
        if sigma.holds(pre) {
            sure.insert(effect.fluent.clone());
        }
        if sigma.possibly_holds(pre) {
            maybe.insert(effect.fluent.clone());
        }
    }
    Ok(sets)
}

/// `((T ∪ e+) \ F-, (F ∪ e-) \ F+)` for a non-sensing action executable
/// in `sigma`.
pub fn res0(a: &Symbol, sigma: &AState, d: &DomainDescription) -> Result<AState, SemanticsError> {
    let sets = effect_sets(a, sigma, d)?;
    if !executable0(a, sigma, d)? {
        return Err(SemanticsError::NotExecutable {
            action: a.clone(),
            state: sigma.clone(),
        });
    }
    let true_set: BTreeSet<Symbol> = sigma
        .true_set
        .union(&sets.e_plus)
        .filter(|f| !sets.f_minus.contains(*f))
        .cloned()
        .collect();
    let false_set: BTreeSet<Symbol> = sigma
        .false_set
        .union(&sets.e_minus)
        .filter(|f| !sets.f_plus.contains(*f))
        .cloned()
        .collect();
    assert!(
        true_set.is_disjoint(&false_set),
        "Res0({a}, {sigma}) produced overlapping true and false sets"
    );
    Ok(AState {
        true_set,
        false_set,
    })
}

/// The 0-transition function on a single action.
///
/// Actions that do not occur in the domain have no ex-proposition and so
/// are never executable.
pub fn phi0(a: &Symbol, sigma: &AState, d: &DomainDescription) -> StateOutcome {
    match executable0(a, sigma, d) {
        Ok(true) => {}
        _ => return StateOutcome::Bottom,
    }
    if d.is_non_sensing(a) {
        return match res0(a, sigma, d) {
            Ok(s) => StateOutcome::single(s),
            Err(_) => StateOutcome::Bottom,
        };
    }
    let unknown: Vec<Symbol> = d
        .knowledge_of(a)
        .into_iter()
        .filter(|f| !sigma.is_known(f))
        .collect();
    let mut out = BTreeSet::new();
    for mask in 0u64..(1u64 << unknown.len()) {
        let mut s = sigma.clone();
        for (i, f) in unknown.iter().enumerate() {
            if mask & (1 << i) != 0 {
                s.true_set.insert(f.clone());
            } else {
                s.false_set.insert(f.clone());
            }
        }
        out.insert(s);
    }
    StateOutcome::States(out)
}

/// The extended transition function over conditional plans.
pub fn phi0_hat(
    c: &ConditionalPlan,
    sigma: &AState,
    d: &DomainDescription,
) -> Result<StateOutcome, SemanticsError> {
    Evaluator::new(d, c).run(sigma)
}

/// `phi0_hat` lifted to an outcome; `Bottom` stays `Bottom`.
pub fn phi0_hat_outcome(
    c: &ConditionalPlan,
    sigma: &StateOutcome,
    d: &DomainDescription,
) -> Result<StateOutcome, SemanticsError> {
    match sigma {
        StateOutcome::Bottom => Ok(StateOutcome::Bottom),
        StateOutcome::States(states) => phi0_hat_set(c, states, d),
    }
}

/// Union of `phi0_hat(c, s)` over every `s` in the set.
pub fn phi0_hat_set<'a>(
    c: &ConditionalPlan,
    sigmas: impl IntoIterator<Item = &'a AState>,
    d: &DomainDescription,
) -> Result<StateOutcome, SemanticsError> {
    let mut eval = Evaluator::new(d, c);
    let mut out = BTreeSet::new();
    for s in sigmas {
        match eval.run(s)? {
            StateOutcome::Bottom => return Ok(StateOutcome::Bottom),
            StateOutcome::States(ss) => out.extend(ss),
        }
    }
    Ok(StateOutcome::States(out))
}

enum Node<'p> {
    Empty,
    Act(&'p Symbol),
    Seq(usize, usize),
    Case(Vec<(&'p LiteralSet, usize)>),
}

/// Plan evaluation memoized on `(plan node, state)` for the lifetime of
/// one evaluator.
struct Evaluator<'d, 'p> {
    domain: &'d DomainDescription,
    nodes: Vec<Node<'p>>,
    root: usize,
    memo: HashMap<(usize, AState), StateOutcome>,
}

impl<'d, 'p> Evaluator<'d, 'p> {
    fn new(domain: &'d DomainDescription, plan: &'p ConditionalPlan) -> Self {
        let mut nodes = Vec::new();
        let root = Self::compile(plan, &mut nodes);
        Evaluator {
            domain,
            nodes,
            root,
            memo: HashMap::new(),
        }
    }

    fn compile(plan: &'p ConditionalPlan, nodes: &mut Vec<Node<'p>>) -> usize {
        let node = match plan {
            ConditionalPlan::Empty => Node::Empty,
            ConditionalPlan::Act(a) => Node::Act(a),
            ConditionalPlan::Seq(x, y) => {
                let x = Self::compile(x, nodes);
                let y = Self::compile(y, nodes);
                Node::Seq(x, y)
            }
            ConditionalPlan::Case(bs) => Node::Case(
                bs.iter()
                    .map(|b| (&b.guard, Self::compile(&b.body, nodes)))
                    .collect(),
            ),
        };
        nodes.push(node);
        nodes.len() - 1
    }

    fn run(&mut self, sigma: &AState) -> Result<StateOutcome, SemanticsError> {
        self.eval(self.root, sigma)
    }

    fn eval(&mut self, node: usize, sigma: &AState) -> Result<StateOutcome, SemanticsError> {
        let key = (node, sigma.clone());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let out = match &self.nodes[node] {
            Node::Empty => StateOutcome::single(sigma.clone()),
            Node::Act(a) => phi0(a, sigma, self.domain),
            Node::Case(branches) => {
                let live: Vec<_> = branches
                    .iter()
                    .filter(|(g, _)| sigma.holds(g))
                    .map(|(g, body)| ((*g).clone(), *body))
                    .collect();
                match live.len() {
                    0 => StateOutcome::Bottom,
                    1 => self.eval(live[0].1, sigma)?,
                    _ => {
                        return Err(SemanticsError::MultipleGuardsTrue {
                            state: sigma.clone(),
                            guards: live.into_iter().map(|(g, _)| g).collect(),
                        })
                    }
                }
            }
            &Node::Seq(x, y) => match self.eval(x, sigma)? {
                StateOutcome::Bottom => StateOutcome::Bottom,
                StateOutcome::States(mid) => {
                    let mut out = BTreeSet::new();
                    let mut failed = false;
                    for s in &mid {
                        match self.eval(y, s)? {
                            StateOutcome::Bottom => {
                                failed = true;
                                break;
                            }
                            StateOutcome::States(ss) => out.extend(ss),
                        }
                    }
                    if failed {
                        StateOutcome::Bottom
                    } else {
                        StateOutcome::States(out)
                    }
                }
            },
        };
        self.memo.insert(key, out.clone());
        Ok(out)
    }
}

/// `(T_D, F_D)`, read off the initial-knowledge propositions.
pub fn least_initial(d: &DomainDescription) -> AState {
    AState::from_literals(d.initial_set()).expect("validated domains have a consistent initial set")
}

/// Why a triple or query does not hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Execution fails in `state` at `step` (an action that is not
    /// 0-executable, or a case plan with no true guard).
    NotExecutable {
        state: AState,
        step: ConditionalPlan,
    },
    /// A reachable state in which `missing` is not known to be true.
    GoalNotKnown { state: AState, missing: LiteralSet },
    /// A reachable state in which the literal is unknown.
    Undetermined {
        state: AState,
        literal: FluentLiteral,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::NotExecutable { state, step } => {
                write!(f, "plan fails in state {state} at `{step}`")
            }
            Witness::GoalNotKnown { state, missing } => {
                write!(f, "reachable state {state} does not know {missing}")
            }
            Witness::Undetermined { state, literal } => {
                write!(f, "reachable state {state} leaves `{literal}` unknown")
            }
        }
    }
}

fn find_bottom(
    c: &ConditionalPlan,
    sigma: &AState,
    d: &DomainDescription,
) -> Result<Option<Witness>, SemanticsError> {
    match c {
        ConditionalPlan::Empty => Ok(None),
        ConditionalPlan::Act(_) => Ok(if phi0_hat(c, sigma, d)?.is_bottom() {
            Some(Witness::NotExecutable {
                state: sigma.clone(),
                step: c.clone(),
            })
        } else {
            None
        }),
        ConditionalPlan::Case(bs) => {
            let live: Vec<_> = bs.iter().filter(|b| sigma.holds(&b.guard)).collect();
            match live.len() {
                0 => Ok(Some(Witness::NotExecutable {
                    state: sigma.clone(),
                    step: c.clone(),
                })),
                1 => find_bottom(&live[0].body, sigma, d),
                _ => Err(SemanticsError::MultipleGuardsTrue {
                    state: sigma.clone(),
                    guards: live.iter().map(|b| b.guard.clone()).collect(),
                }),
            }
        }
        ConditionalPlan::Seq(x, y) => {
            if let Some(w) = find_bottom(x, sigma, d)? {
                return Ok(Some(w));
            }
            if let StateOutcome::States(mid) = phi0_hat(x, sigma, d)? {
                for s in &mid {
                    if let Some(w) = find_bottom(y, s, d)? {
                        return Ok(Some(w));
                    }
                }
            }
            Ok(None)
        }
    }
}

fn outcome_from(
    x: &LiteralSet,
    c: &ConditionalPlan,
    d: &DomainDescription,
) -> Result<(AState, StateOutcome), SemanticsError> {
    let start = AState::from_literals(x)?;
    let out = phi0_hat(c, &start, d)?;
    Ok((start, out))
}

/// Counterexample to `{X} c {Y}`, or `None` if the triple holds.
///
/// Execution starts from `(T_X, F_X)` alone; initial-knowledge
/// propositions of `d` play no part in triples.
pub fn knows_witness(
    d: &DomainDescription,
    x: &LiteralSet,
    c: &ConditionalPlan,
    y: &LiteralSet,
) -> Result<Option<Witness>, SemanticsError> {
    let (start, out) = outcome_from(x, c, d)?;
    match out {
        StateOutcome::Bottom => find_bottom(c, &start, d),
        StateOutcome::States(states) => Ok(states.into_iter().find_map(|s| {
            let missing: LiteralSet = y
                .iter()
                .filter(|p| s.truth(p) != Truth::True)
                .cloned()
                .collect();
            (!missing.is_empty()).then_some(Witness::GoalNotKnown { state: s, missing })
        })),
    }
}

/// Counterexample to `{X} c {KW p}`, or `None` if it holds.
pub fn kwhether_witness(
    d: &DomainDescription,
    x: &LiteralSet,
    c: &ConditionalPlan,
    p: &FluentLiteral,
) -> Result<Option<Witness>, SemanticsError> {
    let (start, out) = outcome_from(x, c, d)?;
    match out {
        StateOutcome::Bottom => find_bottom(c, &start, d),
        StateOutcome::States(states) => Ok(states.into_iter().find_map(|s| {
            (!s.is_known(&p.fluent)).then(|| Witness::Undetermined {
                state: s,
                literal: p.clone(),
            })
        })),
    }
}

/// `{X} c {Y}`: the plan never fails from `(T_X, F_X)` and every
/// reachable state makes `Y` true.
pub fn entails_knows(
    d: &DomainDescription,
    x: &LiteralSet,
    c: &ConditionalPlan,
    y: &LiteralSet,
) -> Result<bool, SemanticsError> {
    let (_, out) = outcome_from(x, c, d)?;
    Ok(match out {
        StateOutcome::Bottom => false,
        StateOutcome::States(states) => states.iter().all(|s| s.holds(y)),
    })
}

/// `{X} c {KW p}`: the plan never fails and `p` is known (either way) in
/// every reachable state.
pub fn entails_kwhether(
    d: &DomainDescription,
    x: &LiteralSet,
    c: &ConditionalPlan,
    p: &FluentLiteral,
) -> Result<bool, SemanticsError> {
    let (_, out) = outcome_from(x, c, d)?;
    Ok(match out {
        StateOutcome::Bottom => false,
        StateOutcome::States(states) => states.iter().all(|s| s.is_known(&p.fluent)),
    })
}

/// Evaluates a query against the least initial a-state of `d`, extended
/// with `extra` initial knowledge.
pub fn query_witness(
    d: &DomainDescription,
    extra: &LiteralSet,
    q: &Query,
) -> Result<Option<Witness>, SemanticsError> {
    let x = d.initial_set().union(extra);
    match q {
        Query::Knows { goal, plan } => knows_witness(d, &x, plan, goal),
        Query::Kwhether { literal, plan } => kwhether_witness(d, &x, plan, literal),
    }
}
