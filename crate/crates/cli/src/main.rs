//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on a type error or failing suite, 2 on a
//! syntax or input error, 3 when a reduction graph exceeds its node budget.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ieta::canon::canonical;
use ieta::oracle::{run_suite, GenConfig, Suite, SuiteReport};
use ieta::reduce::{Explorer, ReduceError, ReductionGraph};
use ieta::syntax::{parse_unit, print_term, Payload};
use ieta::term::tidy_binders;
use ieta::{eq_class, infer, Term};

/// Default node budget for reduction graphs, overridden by this variable.
const BUDGET_VAR: &str = "IETA_NODE_BUDGET";
const DEFAULT_BUDGET: usize = 10_000;

#[derive(Parser)]
#[command(name = "ieta", version, about = "Typed lambda calculus with pairs modulo type isomorphisms")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Source file; standard input when absent or `-`.
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical type of a term, or the canonical form of a type.
    Check(Input),
    /// Print the normal form.
    Normalize(Input),
    /// Print every step of the normalisation.
    Trace(Input),
    /// List the members of the equivalence class.
    Eqclass(Input),
    /// List the classes reachable in one step.
    Reducts(Input),
    /// Emit the reduction graph.
    Graph {
        #[command(flatten)]
        input: Input,
        /// Graph format when `--json` is not given.
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
    /// Property suites.
    Props {
        #[command(subcommand)]
        action: Props,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Props {
    /// Run one suite.
    Run {
        /// type-equiv, type-measure, term-measure, typing, subject-reduction,
        /// normalisation, product-shape or consistency.
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_type_size: Option<usize>,
        #[arg(long)]
        max_term_size: Option<usize>,
        /// Number of random open terms.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// List the suites.
    List,
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn syntax(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            kind: "syntax",
            message: message.into(),
        }
    }

    fn typing(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            kind: "type",
            message: message.into(),
        }
    }
}

impl From<ReduceError> for Failure {
    fn from(e: ReduceError) -> Failure {
        match e {
            ReduceError::IllTyped(e) => Failure::typing(e.to_string()),
            ReduceError::BudgetExceeded { .. } => Failure {
                code: 3,
                kind: "budget",
                message: format!("{e}; raise {BUDGET_VAR} to explore further"),
            },
            ReduceError::Cycle { .. } => Failure {
                code: 1,
                kind: "cycle",
                message: e.to_string(),
            },
        }
    }
}

/// What a command prints: text for people, a JSON value otherwise.
struct Output {
    text: String,
    json: Value,
    code: u8,
}

fn ok(text: String, json: Value) -> Result<Output, Failure> {
    Ok(Output { text, json, code: 0 })
}

fn read_input(input: &Input) -> Result<Payload, Failure> {
    let text = match &input.file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| Failure::syntax(format!("cannot read {}: {e}", p.display())))?,
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::syntax(format!("cannot read standard input: {e}")))?;
            s
        }
    };
    parse_unit(&text)
        .map(|unit| unit.payload)
        .map_err(|e| Failure::syntax(e.to_string()))
}

fn read_term(input: &Input) -> Result<Term, Failure> {
    match read_input(input)? {
        Payload::Term(r) => {
            infer(&r).map_err(|e| Failure::typing(e.to_string()))?;
            Ok(r)
        }
        Payload::Type(_) => Err(Failure::syntax("expected a term, found a type")),
    }
}

/// Display form of a class: its canonical form with tidy binder names.
fn show(r: &Term) -> String {
    print_term(&tidy_binders(r))
}

fn node_budget() -> Result<usize, Failure> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::syntax(format!("{BUDGET_VAR} must be a number, got `{v}`"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn check(input: &Input) -> Result<Output, Failure> {
    match read_input(input)? {
        Payload::Type(t) => {
            let c = t.canonicalize();
            ok(c.to_string(), json!({ "type": c.to_string() }))
        }
        Payload::Term(r) => {
            let ty = infer(&r).map_err(|e| Failure::typing(e.to_string()))?;
            ok(ty.to_string(), json!({ "term": show(&r), "type": ty.to_string() }))
        }
    }
}

fn normalize(input: &Input) -> Result<Output, Failure> {
    let r = read_term(input)?;
    let nf = Explorer::new().normalize(&r)?.normal_form;
    let text = show(&nf);
    ok(text.clone(), json!({ "normal_form": text }))
}

fn trace(input: &Input) -> Result<Output, Failure> {
    let r = read_term(input)?;
    let n = Explorer::new().normalize(&r)?;
    let mut text = show(&canonical(&r));
    let mut steps = Vec::new();
    for step in &n.trace {
        let term = show(&step.to);
        let _ = write!(text, "\n{}\t{term}", step.label);
        steps.push(json!({ "rule": step.label.to_string(), "term": term }));
    }
    ok(text, Value::Array(steps))
}

fn eqclass(input: &Input) -> Result<Output, Failure> {
    let r = read_term(input)?;
    let members: Vec<String> = eq_class(&r).members().map(print_term).collect();
    ok(members.join("\n"), json!(members))
}

fn reducts(input: &Input) -> Result<Output, Failure> {
    let r = read_term(input)?;
    let mut steps: Vec<(String, String)> = Explorer::new()
        .reducts_modulo(&r)?
        .iter()
        .map(|s| (s.label.to_string(), show(&s.representative)))
        .collect();
    steps.sort_by(|a, b| a.1.cmp(&b.1));
    let text = steps
        .iter()
        .map(|(rule, term)| format!("{rule}\t{term}"))
        .collect::<Vec<_>>()
        .join("\n");
    let json = steps
        .iter()
        .map(|(rule, term)| json!({ "rule": rule, "term": term }))
        .collect();
    ok(text, Value::Array(json))
}

fn graph_json(g: &ReductionGraph) -> Value {
    json!({
        "nodes": g.nodes.iter().enumerate()
            .map(|(id, t)| json!({ "id": id, "term": show(t) }))
            .collect::<Vec<_>>(),
        "edges": g.edges.iter()
            .map(|e| json!({ "from": e.from, "to": e.to, "rule": e.label.to_string() }))
            .collect::<Vec<_>>(),
    })
}

fn graph_dot(g: &ReductionGraph) -> String {
    let mut out = String::from("digraph reductions {\n");
    for (id, t) in g.nodes.iter().enumerate() {
        let _ = writeln!(out, "  n{id} [label={:?}];", show(t));
    }
    for e in &g.edges {
        let _ = writeln!(out, "  n{} -> n{} [label={:?}];", e.from, e.to, e.label.to_string());
    }
    out.push('}');
    out
}

fn graph(input: &Input, format: GraphFormat) -> Result<Output, Failure> {
    let r = read_term(input)?;
    let g = Explorer::new().reduction_graph(&r, node_budget()?)?;
    let json = graph_json(&g);
    let text = match format {
        GraphFormat::Dot => graph_dot(&g),
        GraphFormat::Json => serde_json::to_string_pretty(&json).expect("serialisable"),
    };
    ok(text, json)
}

fn report_text(report: &SuiteReport) -> String {
    let mut text = format!(
        "{}: {} cases, {} failures",
        report.suite,
        report.cases,
        report.failures.len()
    );
    for f in &report.failures {
        let _ = write!(text, "\n  {}: {}", f.clause, f.counterexample);
    }
    text
}

fn props(action: &Props) -> Result<Output, Failure> {
    match action {
        Props::List => {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            ok(names.join("\n"), json!(names))
        }
        Props::Run {
            suite,
            seed,
            max_type_size,
            max_term_size,
            samples,
        } => {
            let suite: Suite = suite.parse().map_err(|e: ieta::oracle::suites::UnknownSuite| {
                Failure::syntax(e.to_string())
            })?;
            let defaults = GenConfig::default();
            let cfg = GenConfig {
                seed: seed.unwrap_or(defaults.seed),
                max_type_size: max_type_size.unwrap_or(defaults.max_type_size),
                max_term_size: max_term_size.unwrap_or(defaults.max_term_size),
                sample_count: samples.unwrap_or(defaults.sample_count),
                node_budget: node_budget()?,
                ..defaults
            };
            if cfg.max_type_size == 0 || cfg.max_term_size == 0 {
                return Err(Failure::syntax("sizes must be positive"));
            }
            let report = run_suite(suite, &cfg);
            Ok(Output {
                text: report_text(&report),
                json: serde_json::to_value(&report).expect("serialisable"),
                code: if report.passed() { 0 } else { 1 },
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(i) => check(i),
        Command::Normalize(i) => normalize(i),
        Command::Trace(i) => trace(i),
        Command::Eqclass(i) => eqclass(i),
        Command::Reducts(i) => reducts(i),
        Command::Graph { input, format } => graph(input, *format),
        Command::Props { action } => props(action),
    };
    match result {
        Ok(out) => {
            if cli.json {
                println!("{}", out.json);
            } else if !out.text.is_empty() {
                println!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            if cli.json {
                println!("{}", json!({ "error": f.kind, "message": f.message }));
            } else {
                eprintln!("{} error: {}", f.kind, f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
