//! Fluent symbols, signed literals and canonical literal sets.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// An interned-ish name for a fluent or an action.
///
/// Cloning is a reference-count bump, so symbols can be shared freely
/// between states, plans and judgments.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True if `name` matches `[a-z][a-zA-Z0-9_]*`.
    pub fn is_valid_name(name: &str) -> bool {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_lowercase() => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// A fluent `f` or its negation `~f`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FluentLiteral {
    pub fluent: Symbol,
    pub positive: bool,
}

impl FluentLiteral {
    pub fn pos(fluent: impl Into<Symbol>) -> Self {
        FluentLiteral {
            fluent: fluent.into(),
            positive: true,
        }
    }

    pub fn neg(fluent: impl Into<Symbol>) -> Self {
        FluentLiteral {
            fluent: fluent.into(),
            positive: false,
        }
    }

    /// Flips the sign. Negating twice gives back the original literal.
    pub fn negate(&self) -> Self {
        FluentLiteral {
            fluent: self.fluent.clone(),
            positive: !self.positive,
        }
    }

    /// The underlying fluent name.
    pub fn fln(&self) -> &Symbol {
        &self.fluent
    }
}

// Canonical order: by fluent name, positive before negative.
impl Ord for FluentLiteral {
    fn cmp(&self, other: &Self) -> Ordering {
        self.fluent
            .cmp(&other.fluent)
            .then_with(|| other.positive.cmp(&self.positive))
    }
}

impl PartialOrd for FluentLiteral {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FluentLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.fluent)
        } else {
            write!(f, "~{}", self.fluent)
        }
    }
}

impl fmt::Debug for FluentLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Free-function form of [`FluentLiteral::negate`].
pub fn negate(p: &FluentLiteral) -> FluentLiteral {
    p.negate()
}

/// A finite set of literals kept in canonical order.
///
/// Consistent sets (no literal together with its negation) double as
/// a-states throughout the proof system.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiteralSet(BTreeSet<FluentLiteral>);

impl LiteralSet {
    pub fn new() -> Self {
        LiteralSet(BTreeSet::new())
    }

    pub fn singleton(p: FluentLiteral) -> Self {
        let mut s = LiteralSet::new();
        s.insert(p);
        s
    }

    pub fn insert(&mut self, p: FluentLiteral) -> bool {
        self.0.insert(p)
    }

    pub fn contains(&self, p: &FluentLiteral) -> bool {
        self.0.contains(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &FluentLiteral> + '_ {
        self.0.iter()
    }

    /// No literal occurs together with its negation.
    pub fn is_consistent(&self) -> bool {
        // Canonical order puts f directly before ~f.
        self.0
            .iter()
            .zip(self.0.iter().skip(1))
            .all(|(a, b)| a.fluent != b.fluent)
    }

    /// Pairs `(f, ~f)` that make the set inconsistent.
    pub fn conflicts(&self) -> Vec<Symbol> {
        self.0
            .iter()
            .zip(self.0.iter().skip(1))
            .filter(|(a, b)| a.fluent == b.fluent)
            .map(|(a, _)| a.fluent.clone())
            .collect()
    }

    pub fn is_subset(&self, other: &LiteralSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &LiteralSet) -> LiteralSet {
        LiteralSet(self.0.union(&other.0).cloned().collect())
    }

    /// `~X`: every literal negated.
    pub fn negated(&self) -> LiteralSet {
        self.0.iter().map(FluentLiteral::negate).collect()
    }

    /// Fluent names occurring in the set, signs stripped.
    pub fn fln(&self) -> BTreeSet<Symbol> {
        self.0.iter().map(|p| p.fluent.clone()).collect()
    }
}

/// Free-function form of [`LiteralSet::fln`].
pub fn fln(x: &LiteralSet) -> BTreeSet<Symbol> {
    x.fln()
}

impl FromIterator<FluentLiteral> for LiteralSet {
    fn from_iter<I: IntoIterator<Item = FluentLiteral>>(iter: I) -> Self {
        LiteralSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a LiteralSet {
    type Item = &'a FluentLiteral;
    type IntoIter = std::collections::btree_set::Iter<'a, FluentLiteral>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl Extend<FluentLiteral> for LiteralSet {
    fn extend<I: IntoIterator<Item = FluentLiteral>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl fmt::Display for LiteralSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for LiteralSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
