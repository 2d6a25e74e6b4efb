//! Text syntax for domains (`.ak`), plans (`.plan`) and triples or
//! queries (`.q`), with the matching serializers.
//!
//! ```text
//! domain    := statement*
//! statement := "initially" literal "."
//!            | "executable" ident ["if" literals] "."
//!            | ident "causes" literal ["if" literals] "."
//!            | ident "determines" ident "."
//! plan      := item (";" item)*
//! item      := "[" "]" | ident | "case" branch+ "endcase"
//! branch    := literals "->" plan "."
//! triple    := set plan "{" (literals? | "KW" literal) "}"
//! query     := "knows" literals "after" plan "." | "kwhether" literal "after" plan "."
//! set       := "{" [literals] "}"
//! literals  := literal ("," literal)*
//! literal   := ["~"] ident
//! ident     := [a-z][a-zA-Z0-9_]*
//! ```
//!
//! `//` starts a comment running to the end of the line.

mod lexer;
mod serialize;

use std::fmt;

use thiserror::Error;

use crate::domain::Proposition;
use crate::literal::{FluentLiteral, LiteralSet, Symbol};
use crate::plan::{normalize_plan, Branch, ConditionalPlan, Query};
use crate::proof::Judgment;

use lexer::{tokenize, Tok, Token};
pub use serialize::{serialize_domain, serialize_plan, serialize_query, serialize_triple};

/// 1-based position of a parse error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    BadIdentifier(String),
    Expected { expected: String, found: String },
    UnknownKeyword(String),
    EmptyPrecondition,
    EmptyCase,
    EmptyGuard,
    InconsistentGuard(LiteralSet),
    InconsistentSet(LiteralSet),
    NegatedSensedFluent,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::BadIdentifier(s) => {
                write!(f, "`{s}` is not a valid name (expected [a-z][a-zA-Z0-9_]*)")
            }
            ParseErrorKind::Expected { expected, found } => {
                write!(f, "expected {expected}, found {found}")
            }
            ParseErrorKind::UnknownKeyword(s) => {
                write!(
                    f,
                    "unknown keyword `{s}` (expected `causes` or `determines`)"
                )
            }
            ParseErrorKind::EmptyPrecondition => f.write_str("empty precondition list after `if`"),
            ParseErrorKind::EmptyCase => f.write_str("case plan without branches"),
            ParseErrorKind::EmptyGuard => f.write_str("case guard must contain a literal"),
            ParseErrorKind::InconsistentGuard(s) => write!(f, "inconsistent case guard {s}"),
            ParseErrorKind::InconsistentSet(s) => write!(f, "inconsistent literal set {s}"),
            ParseErrorKind::NegatedSensedFluent => {
                f.write_str("`determines` takes a fluent name, not a negated literal")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, span: SourceSpan) -> Self {
        ParseError { kind, span }
    }
}

/// Contents of a `.q` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryFile {
    Triple(Judgment),
    Query(Query),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, expected: &str) -> ParseError {
        ParseError::new(
            ParseErrorKind::Expected {
                expected: expected.to_string(),
                found: self.peek().describe(),
            },
            self.span(),
        )
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.error_here(expected))
        }
    }

    fn ident(&mut self, what: &str) -> Result<Symbol, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Symbol::new(&s))
            }
            _ => Err(self.error_here(what)),
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        self.expect(Tok::Eof, "end of input").map(|_| ())
    }

    fn literal(&mut self) -> Result<FluentLiteral, ParseError> {
        let positive = if *self.peek() == Tok::Tilde {
            self.bump();
            false
        } else {
            true
        };
        let fluent = self.ident("a fluent literal")?;
        Ok(FluentLiteral { fluent, positive })
    }

    fn starts_literal(&self) -> bool {
        matches!(self.peek(), Tok::Tilde | Tok::Ident(_))
    }

    fn literal_list(&mut self) -> Result<LiteralSet, ParseError> {
        let mut set = LiteralSet::new();
        set.insert(self.literal()?);
        while *self.peek() == Tok::Comma {
            self.bump();
            set.insert(self.literal()?);
        }
        Ok(set)
    }

    /// `{ [literals] }`, required to be consistent.
    fn braced_set(&mut self) -> Result<LiteralSet, ParseError> {
        let open = self.expect(Tok::LBrace, "`{`")?.span;
        let set = if *self.peek() == Tok::RBrace {
            LiteralSet::new()
        } else {
            self.literal_list()?
        };
        let close = self.expect(Tok::RBrace, "`,` or `}`")?.span;
        if !set.is_consistent() {
            return Err(ParseError::new(
                ParseErrorKind::InconsistentSet(set),
                span_between(open, close),
            ));
        }
        Ok(set)
    }

    fn precondition(&mut self) -> Result<LiteralSet, ParseError> {
        if *self.peek() != Tok::If {
            return Ok(LiteralSet::new());
        }
        self.bump();
        if !self.starts_literal() {
            return Err(ParseError::new(
                ParseErrorKind::EmptyPrecondition,
                self.span(),
            ));
        }
        self.literal_list()
    }

    fn statement(&mut self) -> Result<Proposition, ParseError> {
        let prop = match self.peek().clone() {
            Tok::Initially => {
                self.bump();
                Proposition::Initially(self.literal()?)
            }
            Tok::Executable => {
                self.bump();
                let action = self.ident("an action name")?;
                let precond = self.precondition()?;
                Proposition::Executable { action, precond }
            }
            Tok::Ident(_) => {
                let action = self.ident("an action name")?;
                match self.peek().clone() {
                    Tok::Causes => {
                        self.bump();
                        let effect = self.literal()?;
                        let precond = self.precondition()?;
                        Proposition::Effect {
                            action,
                            effect,
                            precond,
                        }
                    }
                    Tok::Determines => {
                        self.bump();
                        if *self.peek() == Tok::Tilde {
                            return Err(ParseError::new(
                                ParseErrorKind::NegatedSensedFluent,
                                self.span(),
                            ));
                        }
                        let fluent = self.ident("a fluent name")?;
                        Proposition::Determines { action, fluent }
                    }
                    Tok::Ident(word) => {
                        return Err(ParseError::new(
                            ParseErrorKind::UnknownKeyword(word),
                            self.span(),
                        ));
                    }
                    _ => return Err(self.error_here("`causes` or `determines`")),
                }
            }
            _ => return Err(self.error_here("a proposition")),
        };
        self.expect(Tok::Dot, "`.` ending the proposition")?;
        Ok(prop)
    }

    /// Skips past the next top-level `.` after an error.
    fn recover(&mut self) {
        while !matches!(self.peek(), Tok::Dot | Tok::Eof) {
            self.bump();
        }
        if *self.peek() == Tok::Dot {
            self.bump();
        }
    }

    fn plan(&mut self) -> Result<ConditionalPlan, ParseError> {
        let mut items = vec![self.item()?];
        while *self.peek() == Tok::Semi {
            self.bump();
            items.push(self.item()?);
        }
        Ok(ConditionalPlan::sequence(items))
    }

    fn item(&mut self) -> Result<ConditionalPlan, ParseError> {
        match self.peek().clone() {
            Tok::LBracket => {
                self.bump();
                self.expect(Tok::RBracket, "`]`")?;
                Ok(ConditionalPlan::Empty)
            }
            Tok::Ident(a) => {
                self.bump();
                Ok(ConditionalPlan::Act(Symbol::new(&a)))
            }
            Tok::Case => {
                let case_span = self.bump().span;
                let mut branches = Vec::new();
                while *self.peek() != Tok::Endcase {
                    branches.push(self.branch()?);
                }
                self.bump();
                if branches.is_empty() {
                    return Err(ParseError::new(ParseErrorKind::EmptyCase, case_span));
                }
                Ok(ConditionalPlan::Case(branches))
            }
            _ => Err(self.error_here("a plan (`[]`, an action, or `case`)")),
        }
    }

    fn branch(&mut self) -> Result<Branch, ParseError> {
        let start = self.span();
        if *self.peek() == Tok::Arrow {
            return Err(ParseError::new(ParseErrorKind::EmptyGuard, start));
        }
        if !self.starts_literal() {
            return Err(self.error_here("a case guard or `endcase`"));
        }
        let guard = self.literal_list()?;
        let arrow = self.expect(Tok::Arrow, "`->`")?.span;
        if !guard.is_consistent() {
            return Err(ParseError::new(
                ParseErrorKind::InconsistentGuard(guard),
                span_between(start, arrow),
            ));
        }
        let body = self.plan()?;
        self.expect(Tok::Dot, "`.` ending the case branch")?;
        Ok(Branch { guard, body })
    }

    fn triple(&mut self) -> Result<Judgment, ParseError> {
        let pre = self.braced_set()?;
        let plan = normalize_plan(&self.plan()?);
        if *self.peek() == Tok::LBrace && *self.peek_at(1) == Tok::Kw {
            self.bump();
            self.bump();
            let literal = self.literal()?;
            self.expect(Tok::RBrace, "`}`")?;
            return Ok(Judgment::Kw { pre, plan, literal });
        }
        let post = self.braced_set()?;
        Ok(Judgment::Knows { pre, plan, post })
    }

    fn query(&mut self) -> Result<Query, ParseError> {
        let q = match self.peek() {
            Tok::Knows => {
                self.bump();
                let start = self.span();
                let goal = self.literal_list()?;
                if !goal.is_consistent() {
                    return Err(ParseError::new(
                        ParseErrorKind::InconsistentSet(goal),
                        start,
                    ));
                }
                self.expect(Tok::After, "`after`")?;
                let plan = normalize_plan(&self.plan()?);
                Query::Knows { goal, plan }
            }
            Tok::Kwhether => {
                self.bump();
                let literal = self.literal()?;
                self.expect(Tok::After, "`after`")?;
                let plan = normalize_plan(&self.plan()?);
                Query::Kwhether { literal, plan }
            }
            _ => return Err(self.error_here("`knows` or `kwhether`")),
        };
        self.expect(Tok::Dot, "`.` ending the query")?;
        Ok(q)
    }
}

fn span_between(a: SourceSpan, b: SourceSpan) -> SourceSpan {
    if a.line == b.line && b.column >= a.column {
        SourceSpan {
            length: b.column + b.length - a.column,
            ..a
        }
    } else {
        a
    }
}

/// Parses a domain file into its propositions, one per `.`-terminated
/// statement. Parsing continues after an error so every bad statement
/// is reported.
pub fn parse_domain(text: &str) -> Result<Vec<Proposition>, Vec<ParseError>> {
    let mut p = Parser::new(text).map_err(|e| vec![e])?;
    let mut props = Vec::new();
    let mut errors = Vec::new();
    while *p.peek() != Tok::Eof {
        match p.statement() {
            Ok(prop) => props.push(prop),
            Err(e) => {
                errors.push(e);
                p.recover();
            }
        }
    }
    if errors.is_empty() {
        Ok(props)
    } else {
        Err(errors)
    }
}

/// Parses a plan; the result is normalized.
pub fn parse_plan(text: &str) -> Result<ConditionalPlan, ParseError> {
    let mut p = Parser::new(text)?;
    let plan = p.plan()?;
    p.expect_end()?;
    Ok(normalize_plan(&plan))
}

/// Parses `{X} c {Y}` or `{X} c {KW p}`.
pub fn parse_triple(text: &str) -> Result<Judgment, ParseError> {
    let mut p = Parser::new(text)?;
    let j = p.triple()?;
    p.expect_end()?;
    Ok(j)
}

/// Parses `knows ... after c.` or `kwhether p after c.`.
pub fn parse_query(text: &str) -> Result<Query, ParseError> {
    let mut p = Parser::new(text)?;
    let q = p.query()?;
    p.expect_end()?;
    Ok(q)
}

/// A `.q` file holds either a triple or a query.
pub fn parse_query_file(text: &str) -> Result<QueryFile, ParseError> {
    let mut p = Parser::new(text)?;
    let out = if *p.peek() == Tok::LBrace {
        QueryFile::Triple(p.triple()?)
    } else {
        QueryFile::Query(p.query()?)
    };
    p.expect_end()?;
    Ok(out)
}

/// Comma-separated literals, optionally wrapped in braces; must be
/// consistent. An empty string is the empty set.
pub fn parse_literals(text: &str) -> Result<LiteralSet, ParseError> {
    let mut p = Parser::new(text)?;
    let set = if *p.peek() == Tok::LBrace {
        p.braced_set()?
    } else if *p.peek() == Tok::Eof {
        LiteralSet::new()
    } else {
        let start = p.span();
        let set = p.literal_list()?;
        if !set.is_consistent() {
            return Err(ParseError::new(ParseErrorKind::InconsistentSet(set), start));
        }
        set
    };
    p.expect_end()?;
    Ok(set)
}

pub fn parse_literal(text: &str) -> Result<FluentLiteral, ParseError> {
    let mut p = Parser::new(text)?;
    let l = p.literal()?;
    p.expect_end()?;
    Ok(l)
}
