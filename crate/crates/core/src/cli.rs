//! The `ak` command line.
//!
//! Exit status: 0 when the property holds or the command succeeds, 1 when
//! it fails (not entailed, not derivable, no path, execution fails), 2 on
//! usage or parse errors, 3 on domain validation errors, domain
//! mismatches and overlapping case guards.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::domain::{validate_domain, DomainDescription};
use crate::literal::LiteralSet;
use crate::parser::{
    parse_domain, parse_literal, parse_literals, parse_plan, parse_query_file, ParseError,
    QueryFile,
};
use crate::plan::ConditionalPlan;
use crate::plandb::{GraphError, LoadMode, ProofGraph};
use crate::proof::{
    check_derivation, derivation_from_json, derivation_to_json, CheckError, Derivation, Judgment,
    ProveError, Prover,
};
use crate::semantics::{
    knows_witness, kwhether_witness, phi0_hat, AState, SemanticsError, StateOutcome,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Parser)]
#[command(
    name = "ak",
    version,
    about = "Check, prove and plan with A_K domains under the 0-approximation"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Colored labels in text reports.
    #[arg(long, value_enum, env = "AK_COLOR", default_value_t = ColorMode::Auto, global = true, hide = true)]
    color: ColorMode,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ColorMode {
    Auto,
    Never,
}

#[derive(clap::Args)]
struct Goal {
    /// File holding a triple `{X} c {Y}` / `{X} c {KW p}` or a query
    /// `knows ... after c.` / `kwhether p after c.`
    triple: Option<PathBuf>,
    /// Plan file, used with --goal or --kw instead of a triple file.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Literals known initially, added to the domain's initial knowledge.
    #[arg(long, default_value = "")]
    init: String,
    /// Goal literals that must be known after the plan.
    #[arg(long, conflicts_with = "kw")]
    goal: Option<String>,
    /// Literal whose value must be known after the plan.
    #[arg(long)]
    kw: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a domain; print the action classification.
    Validate { domain: PathBuf },
    /// Run a plan from the initial state and print the reachable states.
    Exec {
        domain: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        #[arg(long, default_value = "")]
        init: String,
    },
    /// Decide a triple or query semantically.
    Verify {
        domain: PathBuf,
        #[command(flatten)]
        goal: Goal,
        /// Print a counterexample state when the property fails.
        #[arg(long)]
        witness: bool,
    },
    /// Build a derivation for a triple or query.
    Prove {
        domain: PathBuf,
        #[command(flatten)]
        goal: Goal,
        /// Write the derivation here as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a JSON derivation against a domain.
    Check {
        domain: PathBuf,
        derivation: PathBuf,
    },
    /// Proof graph operations.
    Db {
        #[command(subcommand)]
        command: DbCommand,
    },
}

#[derive(Subcommand)]
enum DbCommand {
    /// Add a proved triple to a graph file, creating it if needed.
    Add {
        graph: PathBuf,
        domain: PathBuf,
        #[command(flatten)]
        goal: Goal,
        /// Derivation to store; proved on the fly when omitted.
        #[arg(long)]
        derivation: Option<PathBuf>,
        /// Also add every Knows triple proved along the way.
        #[arg(long)]
        subproofs: bool,
    },
    /// Search the graph for a plan from --init to --goal.
    Query {
        graph: PathBuf,
        domain: PathBuf,
        #[arg(long, default_value = "")]
        init: String,
        #[arg(long)]
        goal: String,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Write the stitched derivation here as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Node and edge counts. Derivations are re-checked when a domain is given.
    Stats {
        graph: PathBuf,
        domain: Option<PathBuf>,
    },
}

/// A failed command: exit code plus message for stderr.
struct Exit {
    code: i32,
    message: String,
}

impl Exit {
    fn new(code: i32, message: impl Display) -> Self {
        Exit {
            code,
            message: message.to_string(),
        }
    }
}

type Outcome = Result<i32, Exit>;

struct Ctx<'w> {
    out: &'w mut dyn Write,
    format: Format,
    color: bool,
}

impl Ctx<'_> {
    fn text(&mut self, s: impl Display) {
        if self.format == Format::Text {
            let _ = writeln!(self.out, "{}", s.to_string().trim_end());
        }
    }

    fn json(&mut self, v: Value) {
        if self.format == Format::Json {
            let _ = writeln!(
                self.out,
                "{}",
                serde_json::to_string_pretty(&v).expect("serializable")
            );
        }
    }

    fn label(&self, ok: bool, s: &str) -> String {
        match (self.color, ok) {
            (false, _) => s.to_string(),
            (true, true) => format!("\x1b[32m{s}\x1b[0m"),
            (true, false) => format!("\x1b[31m{s}\x1b[0m"),
        }
    }
}

/// Runs the command line `args` (program name first), writing reports to
/// `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let color = cli.color == ColorMode::Auto && std::io::stdout().is_terminal();
    let mut ctx = Ctx {
        out,
        format: cli.format,
        color,
    };
    let result = match cli.command {
        Command::Validate { domain } => cmd_validate(&mut ctx, &domain),
        Command::Exec { domain, plan, init } => cmd_exec(&mut ctx, &domain, &plan, &init),
        Command::Verify {
            domain,
            goal,
            witness,
        } => cmd_verify(&mut ctx, &domain, &goal, witness),
        Command::Prove { domain, goal, out } => cmd_prove(&mut ctx, &domain, &goal, out.as_deref()),
        Command::Check { domain, derivation } => cmd_check(&mut ctx, &domain, &derivation),
        Command::Db { command } => match command {
            DbCommand::Add {
                graph,
                domain,
                goal,
                derivation,
                subproofs,
            } => cmd_db_add(
                &mut ctx,
                &graph,
                &domain,
                &goal,
                derivation.as_deref(),
                subproofs,
            ),
            DbCommand::Query {
                graph,
                domain,
                init,
                goal,
                max_len,
                out,
            } => cmd_db_query(
                &mut ctx,
                &graph,
                &domain,
                &init,
                &goal,
                max_len,
                out.as_deref(),
            ),
            DbCommand::Stats { graph, domain } => cmd_db_stats(&mut ctx, &graph, domain.as_deref()),
        },
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn read(path: &Path) -> Result<String, Exit> {
    std::fs::read_to_string(path)
        .map_err(|e| Exit::new(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Exit> {
    std::fs::write(path, text)
        .map_err(|e| Exit::new(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn parse_err(path: &Path, e: &ParseError) -> String {
    format!("{}:{e}", path.display())
}

fn load_domain(path: &Path) -> Result<DomainDescription, Exit> {
    let text = read(path)?;
    let props = parse_domain(&text).map_err(|errs| {
        let lines: Vec<String> = errs.iter().map(|e| parse_err(path, e)).collect();
        Exit::new(EXIT_USAGE, lines.join("\n"))
    })?;
    validate_domain(props).map_err(|errs| {
        let lines: Vec<String> = errs
            .iter()
            .map(|e| format!("{}: {e}", path.display()))
            .collect();
        Exit::new(EXIT_INVALID, lines.join("\n"))
    })
}

fn literals_arg(flag: &str, text: &str) -> Result<LiteralSet, Exit> {
    parse_literals(text).map_err(|e| Exit::new(EXIT_USAGE, format!("--{flag}: {e}")))
}

fn load_plan(path: &Path) -> Result<ConditionalPlan, Exit> {
    let text = read(path)?;
    parse_plan(&text).map_err(|e| Exit::new(EXIT_USAGE, parse_err(path, &e)))
}

/// Initial knowledge of `d` plus `--init`.
fn initial(d: &DomainDescription, init: &str) -> Result<LiteralSet, Exit> {
    let x = d.initial_set().union(&literals_arg("init", init)?);
    if !x.is_consistent() {
        return Err(Exit::new(
            EXIT_INVALID,
            format!("--init contradicts the domain's initial knowledge: {x}"),
        ));
    }
    Ok(x)
}

/// The judgment named by a triple file or by `--plan` with `--goal`/`--kw`.
fn resolve_goal(d: &DomainDescription, g: &Goal) -> Result<Judgment, Exit> {
    match (&g.triple, &g.plan) {
        (Some(_), Some(_)) => Err(Exit::new(
            EXIT_USAGE,
            "give either a triple file or --plan, not both",
        )),
        (None, None) => Err(Exit::new(EXIT_USAGE, "missing triple file or --plan")),
        (Some(path), None) => {
            if g.goal.is_some() || g.kw.is_some() {
                return Err(Exit::new(
                    EXIT_USAGE,
                    "--goal and --kw go with --plan, not a triple file",
                ));
            }
            let text = read(path)?;
            match parse_query_file(&text).map_err(|e| Exit::new(EXIT_USAGE, parse_err(path, &e)))? {
                QueryFile::Triple(j) => Ok(j),
                QueryFile::Query(q) => {
                    let x = initial(d, &g.init)?;
                    Ok(match q {
                        crate::plan::Query::Knows { goal, plan } => Judgment::knows(x, plan, goal),
                        crate::plan::Query::Kwhether { literal, plan } => {
                            Judgment::kw(x, plan, literal)
                        }
                    })
                }
            }
        }
        (None, Some(path)) => {
            let plan = load_plan(path)?;
            let x = initial(d, &g.init)?;
            match (&g.goal, &g.kw) {
                (Some(y), None) => Ok(Judgment::knows(x, plan, literals_arg("goal", y)?)),
                (None, Some(p)) => {
                    let p = parse_literal(p)
                        .map_err(|e| Exit::new(EXIT_USAGE, format!("--kw: {e}")))?;
                    Ok(Judgment::kw(x, plan, p))
                }
                _ => Err(Exit::new(EXIT_USAGE, "--plan needs --goal or --kw")),
            }
        }
    }
}

fn semantics_exit(e: SemanticsError) -> Exit {
    match e {
        SemanticsError::InconsistentSet(_) | SemanticsError::Overlap(_) => Exit::new(EXIT_USAGE, e),
        _ => Exit::new(EXIT_INVALID, e),
    }
}

fn cmd_validate(ctx: &mut Ctx<'_>, path: &Path) -> Outcome {
    let d = load_domain(path)?;
    let names = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>();
    let sensing = names(&mut d.sensing_actions().iter().map(|a| a.to_string()));
    let non_sensing = names(&mut d.non_sensing_actions().iter().map(|a| a.to_string()));
    let fluents = names(&mut d.fluents().iter().map(|a| a.to_string()));
    let mut text = format!(
        "{}: {} propositions, {} fluents\nsensing: {}\nnon-sensing: {}",
        ctx.label(true, "valid"),
        d.propositions().len(),
        fluents.len(),
        sensing.join(", "),
        non_sensing.join(", ")
    );
    let mut knowledge = serde_json::Map::new();
    for (a, ks) in d.knowledge_map() {
        let ks: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
        text.push_str(&format!("\nK({a}) = {{{}}}", ks.join(", ")));
        knowledge.insert(a.to_string(), json!(ks));
    }
    if !d.initial_set().is_empty() {
        text.push_str(&format!("\ninitially: {}", d.initial_set()));
    }
    ctx.text(text);
    ctx.json(json!({
        "valid": true,
        "propositions": d.propositions().len(),
        "fluents": fluents,
        "sensing": sensing,
        "non_sensing": non_sensing,
        "knowledge": knowledge,
        "initially": d.initial_set().to_string(),
        "domain_hash": d.domain_hash(),
    }));
    Ok(EXIT_OK)
}

fn cmd_exec(ctx: &mut Ctx<'_>, domain: &Path, plan: &Path, init: &str) -> Outcome {
    let d = load_domain(domain)?;
    let c = load_plan(plan)?;
    let x = initial(&d, init)?;
    let start = AState::from_literals(&x).map_err(semantics_exit)?;
    let outcome = phi0_hat(&c, &start, &d).map_err(semantics_exit)?;
    ctx.text(&outcome);
    match &outcome {
        StateOutcome::Bottom => {
            ctx.json(json!({ "bottom": true, "states": [] }));
            Ok(EXIT_FAIL)
        }
        StateOutcome::States(ss) => {
            let states: Vec<String> = ss.iter().map(|s| s.to_string()).collect();
            ctx.json(json!({ "bottom": false, "states": states }));
            Ok(EXIT_OK)
        }
    }
}

fn cmd_verify(ctx: &mut Ctx<'_>, domain: &Path, goal: &Goal, show_witness: bool) -> Outcome {
    let d = load_domain(domain)?;
    let j = resolve_goal(&d, goal)?;
    let witness = match &j {
        Judgment::Knows { pre, plan, post } => knows_witness(&d, pre, plan, post),
        Judgment::Kw { pre, plan, literal } => kwhether_witness(&d, pre, plan, literal),
    }
    .map_err(semantics_exit)?;
    let holds = witness.is_none();
    let mut text = format!(
        "{} {j}",
        ctx.label(holds, if holds { "holds:" } else { "fails:" })
    );
    if show_witness {
        if let Some(w) = &witness {
            text.push_str(&format!("\nwitness: {w}"));
        }
    }
    ctx.text(text);
    ctx.json(json!({
        "judgment": j.to_string(),
        "holds": holds,
        "witness": witness.as_ref().filter(|_| show_witness).map(|w| w.to_string()),
    }));
    Ok(if holds { EXIT_OK } else { EXIT_FAIL })
}

fn prove(d: &DomainDescription, j: &Judgment) -> Result<Derivation, ProveError> {
    let prover = Prover::new(d);
    match j {
        Judgment::Knows { pre, plan, post } => prover.derive_knows(pre, plan, post),
        Judgment::Kw { pre, plan, literal } => prover.derive_kw(pre, plan, literal),
    }
}

fn prove_exit(e: ProveError) -> Exit {
    match e {
        ProveError::NotDerivable(w) => Exit::new(EXIT_FAIL, format!("not derivable: {w}")),
        ProveError::Semantics(e) => semantics_exit(e),
        e @ ProveError::Incomplete(_) => Exit::new(EXIT_FAIL, e),
    }
}

fn cmd_prove(ctx: &mut Ctx<'_>, domain: &Path, goal: &Goal, out: Option<&Path>) -> Outcome {
    let d = load_domain(domain)?;
    let j = resolve_goal(&d, goal)?;
    let deriv = prove(&d, &j).map_err(prove_exit)?;
    let json_text = derivation_to_json(&deriv);
    match out {
        Some(path) => {
            write_file(path, &json_text)?;
            ctx.text(format!(
                "{} steps written to {}",
                deriv.len(),
                path.display()
            ));
            ctx.json(json!({ "judgment": j.to_string(), "steps": deriv.len(), "out": path.display().to_string() }));
        }
        None => {
            ctx.text(&deriv);
            if ctx.format == Format::Json {
                let _ = write!(ctx.out, "{json_text}");
            }
        }
    }
    Ok(EXIT_OK)
}

fn load_derivation(path: &Path) -> Result<Derivation, Exit> {
    let text = read(path)?;
    derivation_from_json(&text)
        .map_err(|e| Exit::new(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn cmd_check(ctx: &mut Ctx<'_>, domain: &Path, derivation: &Path) -> Outcome {
    let d = load_domain(domain)?;
    let deriv = load_derivation(derivation)?;
    match check_derivation(&d, &deriv) {
        Ok(()) => {
            let concl = deriv.conclusion().expect("nonempty").to_string();
            ctx.text(format!(
                "{} {} steps, proves {concl}",
                ctx.label(true, "accepted:"),
                deriv.len()
            ));
            ctx.json(json!({ "accepted": true, "steps": deriv.len(), "conclusion": concl }));
            Ok(EXIT_OK)
        }
        Err(e @ CheckError::DomainMismatch { .. }) => Err(Exit::new(EXIT_INVALID, e)),
        Err(e) => {
            ctx.text(format!("{} {e}", ctx.label(false, "rejected:")));
            let index = match &e {
                CheckError::BadStep { index, .. } => Some(*index),
                _ => None,
            };
            ctx.json(json!({ "accepted": false, "step": index, "error": e.to_string() }));
            Ok(EXIT_FAIL)
        }
    }
}

fn graph_exit(e: GraphError) -> Exit {
    match e {
        GraphError::DomainMismatch { .. } => Exit::new(EXIT_INVALID, e),
        GraphError::CorruptFile { .. } | GraphError::Io(_) => Exit::new(EXIT_USAGE, e),
        _ => Exit::new(EXIT_FAIL, e),
    }
}

fn load_graph(path: &Path, d: &DomainDescription) -> Result<ProofGraph, Exit> {
    ProofGraph::load(path, LoadMode::Validate(d)).map_err(graph_exit)
}

fn cmd_db_add(
    ctx: &mut Ctx<'_>,
    graph: &Path,
    domain: &Path,
    goal: &Goal,
    derivation: Option<&Path>,
    subproofs: bool,
) -> Outcome {
    let d = load_domain(domain)?;
    let mut g = if graph.exists() {
        load_graph(graph, &d)?
    } else {
        ProofGraph::new(&d)
    };
    let j = resolve_goal(&d, goal)?;
    let deriv = match derivation {
        Some(path) => load_derivation(path)?,
        None => prove(&d, &j).map_err(prove_exit)?,
    };
    let before = g.edges().len();
    if subproofs {
        check_derivation(&d, &deriv)
            .map_err(|e| graph_exit(GraphError::RejectedDerivation(Box::new(e))))?;
        for (i, step) in deriv.steps.iter().enumerate() {
            if !step.judgment.is_kw() && step.judgment != j {
                g.add_triple(&d, &step.judgment, deriv.subderivation(i))
                    .map_err(graph_exit)?;
            }
        }
    }
    let id = g.add_triple(&d, &j, deriv).map_err(graph_exit)?;
    g.save(graph).map_err(graph_exit)?;
    let added = g.edges().len() - before;
    ctx.text(format!(
        "edge {id}: {j}\n{added} new edges, {} total",
        g.edges().len()
    ));
    ctx.json(
        json!({ "edge": id, "judgment": j.to_string(), "added": added, "edges": g.edges().len() }),
    );
    Ok(EXIT_OK)
}

fn cmd_db_query(
    ctx: &mut Ctx<'_>,
    graph: &Path,
    domain: &Path,
    init: &str,
    goal: &str,
    max_len: usize,
    out: Option<&Path>,
) -> Outcome {
    let d = load_domain(domain)?;
    let g = load_graph(graph, &d)?;
    let start = initial(&d, init)?;
    let goal = literals_arg("goal", goal)?;
    let Some(ans) = g.query_path(&start, &goal, max_len) else {
        ctx.text(format!(
            "{} {start} -> {goal} within {max_len} edges",
            ctx.label(false, "no path:")
        ));
        ctx.json(json!({ "found": false }));
        return Ok(EXIT_FAIL);
    };
    if let Some(path) = out {
        write_file(path, &derivation_to_json(&ans.derivation))?;
    }
    ctx.text(&ans.plan);
    ctx.json(json!({
        "found": true,
        "plan": ans.plan.to_string(),
        "edges": ans.edges,
        "steps": ans.derivation.len(),
    }));
    Ok(EXIT_OK)
}

fn cmd_db_stats(ctx: &mut Ctx<'_>, graph: &Path, domain: Option<&Path>) -> Outcome {
    let g = match domain {
        Some(p) => load_graph(graph, &load_domain(p)?)?,
        None => ProofGraph::load(graph, LoadMode::Skip).map_err(graph_exit)?,
    };
    let stats = g.stats();
    ctx.text(&stats);
    ctx.json(json!({ "domain_hash": g.domain_hash(), "nodes": stats.nodes, "edges": stats.edges, "validated": stats.validated }));
    Ok(EXIT_OK)
}
