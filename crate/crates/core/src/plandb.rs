//! A persistent graph of proved triples for off-line planning.
//!
//! Each edge `X --c--> Y` carries a checked derivation of `{X} c {Y}`.
//! A query searches for a chain of edges from a start set to a goal:
//! an edge is usable at `S` when its precondition is a subset of `S`, and
//! the walk continues from the edge's postcondition exactly. The answer
//! comes with a derivation stitched from the stored ones.
//!
//! On disk a graph is JSON lines: a header
//! `{"format_version": 1, "domain_hash": ...}` followed by one record
//! `{"pre", "plan", "post", "derivation"}` per edge, in insertion order.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::DomainDescription;
use crate::literal::LiteralSet;
use crate::parser::{parse_literals, parse_plan};
use crate::plan::{normalize_plan, ConditionalPlan};
use crate::proof::{
    check_derivation, derivation_from_value, derivation_to_value, CheckError, Derivation, Judgment,
    Justification, ProofStep,
};

pub const GRAPH_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("domain mismatch: graph is for {expected}, got {found}")]
    DomainMismatch { expected: String, found: String },
    #[error("derivation rejected: {0}")]
    RejectedDerivation(Box<CheckError>),
    #[error("derivation concludes {found}, expected {expected}")]
    ConclusionMismatch { expected: Judgment, found: String },
    #[error("only Knows triples can be stored, got {0}")]
    NotKnows(Judgment),
    #[error("edge {edge}: derivation rejected: {error}")]
    RejectedEdge { edge: usize, error: Box<CheckError> },
    #[error("corrupt graph file at line {line}: {reason}")]
    CorruptFile { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub pre: LiteralSet,
    pub plan: ConditionalPlan,
    pub post: LiteralSet,
    pub derivation: Derivation,
}

impl Edge {
    pub fn judgment(&self) -> Judgment {
        Judgment::knows(self.pre.clone(), self.plan.clone(), self.post.clone())
    }
}

/// Whether [`ProofGraph::load`] re-checks every stored derivation.
#[derive(Clone, Copy)]
pub enum LoadMode<'d> {
    Validate(&'d DomainDescription),
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub validated: bool,
}

#[derive(Clone, Debug)]
pub struct ProofGraph {
    domain_hash: String,
    edges: Vec<Edge>,
    index: HashMap<(LiteralSet, ConditionalPlan, LiteralSet), usize>,
    validated: bool,
}

impl PartialEq for ProofGraph {
    fn eq(&self, other: &Self) -> bool {
        self.domain_hash == other.domain_hash && self.edges == other.edges
    }
}

impl Eq for ProofGraph {}

/// A chain of edges reaching the goal, with its derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathAnswer {
    pub plan: ConditionalPlan,
    pub edges: Vec<usize>,
    pub derivation: Derivation,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    format_version: u32,
    domain_hash: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    pre: String,
    plan: String,
    post: String,
    derivation: serde_json::Value,
}

impl ProofGraph {
    pub fn new(d: &DomainDescription) -> Self {
        ProofGraph {
            domain_hash: d.domain_hash(),
            edges: Vec::new(),
            index: HashMap::new(),
            validated: true,
        }
    }

    pub fn domain_hash(&self) -> &str {
        &self.domain_hash
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn nodes(&self) -> BTreeSet<&LiteralSet> {
        self.edges.iter().flat_map(|e| [&e.pre, &e.post]).collect()
    }

    /// False if the graph was loaded without re-checking derivations.
    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            nodes: self.nodes().len(),
            edges: self.edges.len(),
            validated: self.validated,
        }
    }

    pub fn check_domain(&self, d: &DomainDescription) -> Result<(), GraphError> {
        let found = d.domain_hash();
        if found == self.domain_hash {
            Ok(())
        } else {
            Err(GraphError::DomainMismatch {
                expected: self.domain_hash.clone(),
                found,
            })
        }
    }

    /// Stores `j` after checking `deriv` proves it. Returns the edge id;
    /// inserting a triple already present returns the existing id.
    pub fn add_triple(
        &mut self,
        d: &DomainDescription,
        j: &Judgment,
        deriv: Derivation,
    ) -> Result<usize, GraphError> {
        self.check_domain(d)?;
        let Judgment::Knows { pre, plan, post } = j else {
            return Err(GraphError::NotKnows(j.clone()));
        };
        if deriv.conclusion() != Some(j) {
            return Err(GraphError::ConclusionMismatch {
                expected: j.clone(),
                found: deriv
                    .conclusion()
                    .map_or_else(|| "nothing".into(), |c| c.to_string()),
            });
        }
        check_derivation(d, &deriv).map_err(|e| match e {
            CheckError::DomainMismatch { expected, found } => {
                GraphError::DomainMismatch { expected, found }
            }
            e => GraphError::RejectedDerivation(Box::new(e)),
        })?;
        Ok(self.insert(Edge {
            pre: pre.clone(),
            plan: plan.clone(),
            post: post.clone(),
            derivation: deriv,
        }))
    }

    fn insert(&mut self, edge: Edge) -> usize {
        let key = (edge.pre.clone(), edge.plan.clone(), edge.post.clone());
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.edges.len();
        self.index.insert(key, id);
        self.edges.push(edge);
        id
    }

    /// Breadth-first search for at most `max_len` edges leading from
    /// `start` to a set containing `goal`. `None` if there is no such path.
    pub fn query_path(
        &self,
        start: &LiteralSet,
        goal: &LiteralSet,
        max_len: usize,
    ) -> Option<PathAnswer> {
        if goal.is_subset(start) {
            return Some(self.stitch(start, goal, &[]));
        }
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        order.sort_by(|&a, &b| {
            let (ea, eb) = (&self.edges[a], &self.edges[b]);
            (&ea.pre, &ea.plan, &ea.post).cmp(&(&eb.pre, &eb.plan, &eb.post))
        });

        let mut visited: HashSet<&LiteralSet> = HashSet::from([start]);
        let mut queue: VecDeque<(&LiteralSet, Vec<usize>)> = VecDeque::from([(start, vec![])]);
        while let Some((s, path)) = queue.pop_front() {
            if path.len() >= max_len {
                continue;
            }
            for &id in &order {
                let e = &self.edges[id];
                if !e.pre.is_subset(s) || !visited.insert(&e.post) {
                    continue;
                }
                let mut next = path.clone();
                next.push(id);
                if goal.is_subset(&e.post) {
                    return Some(self.stitch(start, goal, &next));
                }
                queue.push_back((&e.post, next));
            }
        }
        None
    }

    fn stitch(&self, start: &LiteralSet, goal: &LiteralSet, path: &[usize]) -> PathAnswer {
        let mut steps: Vec<ProofStep> = Vec::new();
        let push = |steps: &mut Vec<ProofStep>, j: Judgment, r: Justification| {
            steps.push(ProofStep::new(j, r));
            steps.len() - 1
        };

        let (mut acc, mut plan, mut post) = if path.is_empty() {
            let j = Judgment::knows(start.clone(), ConditionalPlan::Empty, start.clone());
            (
                push(&mut steps, j, Justification::Ax1),
                ConditionalPlan::Empty,
                start.clone(),
            )
        } else {
            (usize::MAX, ConditionalPlan::Empty, start.clone())
        };

        for (k, &id) in path.iter().enumerate() {
            let e = &self.edges[id];
            let offset = steps.len();
            for s in &e.derivation.steps {
                steps.push(ProofStep::new(
                    s.judgment.clone(),
                    s.justification.shifted(offset),
                ));
            }
            let mut here = steps.len() - 1;
            if e.pre != post {
                let j = Judgment::knows(post.clone(), e.plan.clone(), e.post.clone());
                here = push(&mut steps, j, Justification::Rule6 { premise: here });
            }
            if k == 0 {
                acc = here;
                plan = e.plan.clone();
            } else {
                plan = normalize_plan(&ConditionalPlan::seq(plan, e.plan.clone()));
                let j = Judgment::knows(start.clone(), plan.clone(), e.post.clone());
                acc = push(
                    &mut steps,
                    j,
                    Justification::Rule5 {
                        first: acc,
                        second: here,
                    },
                );
            }
            post = e.post.clone();
        }

        if post != *goal {
            let j = Judgment::knows(start.clone(), plan.clone(), goal.clone());
            push(&mut steps, j, Justification::Rule6 { premise: acc });
        }
        PathAnswer {
            plan,
            edges: path.to_vec(),
            derivation: Derivation {
                domain_hash: self.domain_hash.clone(),
                steps,
            },
        }
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&Header {
            format_version: GRAPH_FORMAT_VERSION,
            domain_hash: self.domain_hash.clone(),
        })
        .expect("serializable");
        out.push('\n');
        for e in &self.edges {
            let rec = EdgeRecord {
                pre: e.pre.to_string(),
                plan: e.plan.to_string(),
                post: e.post.to_string(),
                derivation: derivation_to_value(&e.derivation),
            };
            out.push_str(&serde_json::to_string(&rec).expect("serializable"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str, mode: LoadMode<'_>) -> Result<ProofGraph, GraphError> {
        let corrupt = |line: usize, reason: String| GraphError::CorruptFile { line, reason };
        if !text.ends_with('\n') {
            let line = text.lines().count().max(1);
            return Err(corrupt(line, "missing final newline (truncated?)".into()));
        }
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, first) = lines
            .next()
            .ok_or_else(|| corrupt(1, "empty file".into()))?;
        let header: Header = serde_json::from_str(first).map_err(|e| corrupt(1, e.to_string()))?;
        if header.format_version != GRAPH_FORMAT_VERSION {
            return Err(corrupt(
                1,
                format!("unsupported format version {}", header.format_version),
            ));
        }
        if let LoadMode::Validate(d) = mode {
            if d.domain_hash() != header.domain_hash {
                return Err(GraphError::DomainMismatch {
                    expected: header.domain_hash,
                    found: d.domain_hash(),
                });
            }
        }
        let mut g = ProofGraph {
            domain_hash: header.domain_hash,
            edges: Vec::new(),
            index: HashMap::new(),
            validated: matches!(mode, LoadMode::Validate(_)),
        };
        for (line, text) in lines {
            let rec: EdgeRecord =
                serde_json::from_str(text).map_err(|e| corrupt(line, e.to_string()))?;
            let pre = parse_literals(&rec.pre).map_err(|e| corrupt(line, format!("pre: {e}")))?;
            let plan = parse_plan(&rec.plan).map_err(|e| corrupt(line, format!("plan: {e}")))?;
            let post =
                parse_literals(&rec.post).map_err(|e| corrupt(line, format!("post: {e}")))?;
            let derivation =
                derivation_from_value(rec.derivation).map_err(|e| corrupt(line, e.to_string()))?;
            let edge = Edge {
                pre,
                plan,
                post,
                derivation,
            };
            let id = g.edges.len();
            if derivation_conclusion_differs(&edge) {
                return Err(corrupt(
                    line,
                    "derivation does not conclude the edge's triple".into(),
                ));
            }
            if let LoadMode::Validate(d) = mode {
                check_derivation(d, &edge.derivation).map_err(|e| GraphError::RejectedEdge {
                    edge: id,
                    error: Box::new(e),
                })?;
            }
            if g.insert(edge) != id {
                return Err(corrupt(line, "duplicate edge".into()));
            }
        }
        Ok(g)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), GraphError> {
        std::fs::write(path, self.to_jsonl())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>, mode: LoadMode<'_>) -> Result<ProofGraph, GraphError> {
        let bytes = std::fs::read(path)?;
        let text = String::from_utf8(bytes).map_err(|e| GraphError::CorruptFile {
            line: 0,
            reason: e.to_string(),
        })?;
        Self::from_jsonl(&text, mode)
    }
}

fn derivation_conclusion_differs(e: &Edge) -> bool {
    e.derivation.conclusion() != Some(&e.judgment())
}

impl fmt::Display for GraphStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "nodes: {}\nedges: {}", self.nodes, self.edges)?;
        if !self.validated {
            write!(f, "\nderivations not re-checked on load")?;
        }
        Ok(())
    }
}
