//! Command-line interface.
//!
//! Six subcommands: `gen` prints a graph's edge list, `table` and
//! `estimate` expose the closed forms, the degree-sum identity, exact
//! enumeration, and Monte Carlo estimation, `simulate` runs the
//! centralized or classical engine, `dist-sim` runs the message-passing
//! engine, and `verify` replays a trace and reports everything it can
//! contradict. Every command is deterministic for fixed arguments: reruns
//! produce byte-identical output, file writes go through a temp file and
//! rename, and nothing reads the clock.
//!
//! Exit codes: 0 success (and clean verification), 1 a verification that
//! found violations, 2 any other failure.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use serde::Serialize;

use crate::analytics::{
    self, degree_sum_expected, expected_rounds_projection, format_rational, format_significant,
    monte_carlo, ClosedForm, Estimate, StatValue, Statistic,
};
use crate::graph::{generate, Graph, GraphClass, GraphClassSpec};
use crate::orientation::{enumerate_exact, ExactStats, ENUMERATION_EDGE_CAP};
use crate::rgm::{default_max_rounds, simulate_central};
use crate::trace::{DelayDist, DelaySpec, EngineKind, Trace, WorkloadConfig};
use crate::verifier::{classical_linear_order_rgm, verify_classical_trace, verify_orientation_trace};
use crate::{distsim, Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "sinklock",
    version,
    about = "Randomized acyclic-orientation resource granting: exact sink statistics, simulators, and trace verification"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a conflict graph and print its edge list
    Gen(GenArgs),
    /// Closed-form sink statistics for a graph class across sizes
    Table(TableArgs),
    /// Estimate sink statistics and compare against exact values
    Estimate(EstimateArgs),
    /// Run the centralized round engine (or the classical engine)
    Simulate(SimulateArgs),
    /// Run the message-passing engine
    DistSim(DistSimArgs),
    /// Replay a trace and check everything it claims
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClassName {
    Path,
    Star,
    Tree,
    Cycle,
    Complete,
    Bounded,
    Gnp,
    PowerLaw,
}

/// Where the graph comes from: a class generator or an edge-list file.
#[derive(Args, Clone, Debug)]
struct GraphSource {
    /// Graph class to generate
    #[arg(long, value_enum)]
    class: Option<ClassName>,
    /// Vertex count (with --class)
    #[arg(long, short = 'n')]
    n: Option<usize>,
    /// Edge probability (gnp only)
    #[arg(long)]
    p: Option<f64>,
    /// Degree bound (bounded only)
    #[arg(long)]
    k: Option<u32>,
    /// Power-law exponent, at least 2 (power-law only)
    #[arg(long)]
    a: Option<f64>,
    /// Seed for randomized graph generation
    #[arg(long, default_value_t = 0)]
    gen_seed: u64,
    /// Read the graph from an edge-list file instead of generating one
    #[arg(long, conflicts_with_all = ["class", "n", "p", "k", "a", "gen_seed"])]
    graph: Option<PathBuf>,
}

impl GraphSource {
    fn class(&self) -> Result<GraphClass> {
        let name = self
            .class
            .ok_or_else(|| Error::InvalidParameter("pass --class or --graph".into()))?;
        let stray = |flag: &str, allowed: ClassName| -> Result<()> {
            if name == allowed {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "--{flag} only applies to --class {}",
                    match allowed {
                        ClassName::Gnp => "gnp",
                        ClassName::Bounded => "bounded",
                        _ => "power-law",
                    }
                )))
            }
        };
        if self.p.is_some() {
            stray("p", ClassName::Gnp)?;
        }
        if self.k.is_some() {
            stray("k", ClassName::Bounded)?;
        }
        if self.a.is_some() {
            stray("a", ClassName::PowerLaw)?;
        }
        let missing = |flag: &str| Error::InvalidParameter(format!("--class needs --{flag}"));
        Ok(match name {
            ClassName::Path => GraphClass::Path,
            ClassName::Star => GraphClass::Star,
            ClassName::Tree => GraphClass::Tree,
            ClassName::Cycle => GraphClass::Cycle,
            ClassName::Complete => GraphClass::Complete,
            ClassName::Bounded => GraphClass::BoundedDegree {
                k: self.k.ok_or_else(|| missing("k"))?,
            },
            ClassName::Gnp => GraphClass::Gnp {
                p: self.p.ok_or_else(|| missing("p"))?,
            },
            ClassName::PowerLaw => GraphClass::PowerLaw {
                a: self.a.ok_or_else(|| missing("a"))?,
            },
        })
    }

    fn class_spec(&self) -> Result<Option<GraphClassSpec>> {
        if self.graph.is_some() {
            return Ok(None);
        }
        let n = self
            .n
            .ok_or_else(|| Error::InvalidParameter("pass --n with --class".into()))?;
        Ok(Some(GraphClassSpec::new(self.class()?, n, self.gen_seed)))
    }

    fn resolve(&self) -> Result<(Graph, Option<GraphClassSpec>)> {
        if let Some(path) = &self.graph {
            let text = std::fs::read_to_string(path)?;
            return Ok((Graph::from_edge_list(&text)?, None));
        }
        let spec = self.class_spec()?.expect("class path");
        Ok((generate(&spec)?, Some(spec)))
    }
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Write the edge list here instead of stdout
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Graph class
    #[arg(long, value_enum)]
    class: ClassName,
    /// First vertex count
    #[arg(long)]
    n_from: usize,
    /// Last vertex count, inclusive
    #[arg(long)]
    n_to: usize,
    /// Edge probability (gnp only)
    #[arg(long)]
    p: Option<f64>,
    /// Degree bound (bounded only)
    #[arg(long)]
    k: Option<u32>,
    /// Power-law exponent (power-law only)
    #[arg(long)]
    a: Option<f64>,
    /// Add Monte Carlo columns with this many trials per row
    #[arg(long)]
    trials: Option<u64>,
    /// Coin seed for the Monte Carlo columns
    #[arg(long, env = "SINKLOCK_SEED", default_value_t = 0)]
    seed: u64,
    /// Seed for randomized graph generation (Monte Carlo rows)
    #[arg(long, default_value_t = 0)]
    gen_seed: u64,
    /// Emit JSON instead of the text table
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StatName {
    ExpectedSinks,
    ProbPositive,
}

impl From<StatName> for Statistic {
    fn from(s: StatName) -> Statistic {
        match s {
            StatName::ExpectedSinks => Statistic::ExpectedSinks,
            StatName::ProbPositive => Statistic::ProbPositive,
        }
    }
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Statistic to estimate
    #[arg(long, value_enum, default_value = "expected-sinks")]
    statistic: StatName,
    /// Monte Carlo trials
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Coin seed
    #[arg(long, env = "SINKLOCK_SEED", default_value_t = 0)]
    seed: u64,
    /// Emit the JSON report on stdout
    #[arg(long)]
    json: bool,
    /// Also write the JSON report here
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EngineName {
    Central,
    Classical,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Engine to run
    #[arg(long, value_enum, default_value = "central")]
    engine: EngineName,
    /// Coin seed (central) or grant-choice seed (classical)
    #[arg(long, env = "SINKLOCK_SEED", default_value_t = 0)]
    seed: u64,
    /// Round cap; default is ten times the vertex count
    #[arg(long)]
    max_rounds: Option<u64>,
    /// Explicit workload JSON for the classical engine (defaults to the
    /// graph's edge workload)
    #[arg(long)]
    workload: Option<PathBuf>,
    /// Write the trace here ("-" for stdout)
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DistSimArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Coin seed
    #[arg(long, env = "SINKLOCK_SEED", default_value_t = 0)]
    seed: u64,
    /// Round cap; default is ten times the vertex count
    #[arg(long)]
    max_rounds: Option<u64>,
    /// Delivery delay law: zero, fixed:TICKS, or uniform:MIN..MAX
    #[arg(long, default_value = "zero", value_parser = parse_delay)]
    delay: DelayDist,
    /// Seed of the delay draws
    #[arg(long, default_value_t = 0)]
    delay_seed: u64,
    /// Write the trace here ("-" for stdout)
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Trace file to check
    trace: PathBuf,
    /// Emit the JSON report instead of text
    #[arg(long)]
    json: bool,
}

fn parse_delay(s: &str) -> std::result::Result<DelayDist, String> {
    if s == "zero" {
        return Ok(DelayDist::Zero);
    }
    if let Some(v) = s.strip_prefix("fixed:") {
        let value = v.parse().map_err(|e| format!("fixed delay: {e}"))?;
        return Ok(DelayDist::Fixed { value });
    }
    if let Some(range) = s.strip_prefix("uniform:") {
        let (lo, hi) = range
            .split_once("..")
            .ok_or_else(|| "uniform delay needs MIN..MAX".to_string())?;
        let min = lo.parse().map_err(|e| format!("uniform min: {e}"))?;
        let max = hi.parse().map_err(|e| format!("uniform max: {e}"))?;
        if min > max {
            return Err(format!("uniform delay needs min <= max, got {min} > {max}"));
        }
        return Ok(DelayDist::Uniform { min, max });
    }
    Err(format!("unknown delay law {s:?}; use zero, fixed:TICKS, or uniform:MIN..MAX"))
}

/// Writes through a sibling temp file and an atomic rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn write_out(out: &Option<PathBuf>, bytes: &[u8]) -> Result<bool> {
    match out {
        None => Ok(false),
        Some(p) if p.as_os_str() == "-" => {
            std::io::stdout().write_all(bytes)?;
            Ok(false)
        }
        Some(p) => {
            write_atomic(p, bytes)?;
            Ok(true)
        }
    }
}

/// How a graph came to be, echoed into every report.
#[derive(Serialize, Debug)]
struct GraphDescriptor {
    n: usize,
    m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    class_spec: Option<GraphClassSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<String>,
}

impl GraphDescriptor {
    fn new(graph: &Graph, spec: &Option<GraphClassSpec>, file: &Option<PathBuf>) -> GraphDescriptor {
        GraphDescriptor {
            n: graph.vertex_count(),
            m: graph.edge_count(),
            class_spec: *spec,
            source: file.as_ref().map(|p| p.display().to_string()),
        }
    }

    fn describe(&self) -> String {
        match (&self.class_spec, &self.source) {
            (Some(spec), _) => format!(
                "{} n={} m={} gen_seed={}",
                class_label(&spec.class),
                self.n,
                self.m,
                spec.seed
            ),
            (None, Some(path)) => format!("{path} n={} m={}", self.n, self.m),
            (None, None) => format!("n={} m={}", self.n, self.m),
        }
    }
}

fn class_label(class: &GraphClass) -> String {
    match class {
        GraphClass::Path => "path".into(),
        GraphClass::Star => "star".into(),
        GraphClass::Tree => "tree".into(),
        GraphClass::Cycle => "cycle".into(),
        GraphClass::Complete => "complete".into(),
        GraphClass::BoundedDegree { k } => format!("bounded(k={k})"),
        GraphClass::Gnp { p } => format!("gnp(p={p})"),
        GraphClass::PowerLaw { a } => format!("power-law(a={a})"),
    }
}

/// A closed form flattened for reports: relation symbol, decimal value, and
/// the exact rational when there is one.
#[derive(Serialize, Debug)]
struct FormOut {
    relation: String,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rational: Option<String>,
}

impl FormOut {
    fn new(form: &ClosedForm) -> FormOut {
        FormOut {
            relation: form.relation.symbol().to_string(),
            value: form.value.to_f64(),
            rational: match &form.value {
                StatValue::Rational(r) => Some(format_rational(r)),
                StatValue::Real(_) => None,
            },
        }
    }

    fn display(&self) -> String {
        match &self.rational {
            Some(r) => format!("{} {} ({})", self.relation, r, format_significant(self.value, 12)),
            None => format!("{} {}", self.relation, format_significant(self.value, 12)),
        }
    }
}

/// Closed form, or None when the class has none for this statistic.
fn form_or_none(r: Result<ClosedForm>) -> Result<Option<FormOut>> {
    match r {
        Ok(form) => Ok(Some(FormOut::new(&form))),
        Err(Error::NoClosedForm(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Table(args) => run_table(args),
        Command::Estimate(args) => run_estimate(args),
        Command::Simulate(args) => run_simulate(args),
        Command::DistSim(args) => run_dist_sim(args),
        Command::Verify(args) => run_verify(args),
    }
}

fn run_gen(args: GenArgs) -> Result<bool> {
    let (graph, _) = args.source.resolve()?;
    let text = graph.to_edge_list();
    if !write_out(&args.out, text.as_bytes())? && args.out.is_none() {
        print!("{text}");
    }
    Ok(true)
}

#[derive(Serialize, Debug)]
struct TableRow {
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_sinks: Option<FormOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prob_positive: Option<FormOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_rounds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_expected_sinks: Option<Estimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_prob_positive: Option<Estimate>,
}

#[derive(Serialize, Debug)]
struct TableReport {
    class: String,
    n_from: usize,
    n_to: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<u64>,
    seed: u64,
    gen_seed: u64,
    rows: Vec<TableRow>,
}

fn run_table(args: TableArgs) -> Result<bool> {
    let source = GraphSource {
        class: Some(args.class),
        n: Some(args.n_from),
        p: args.p,
        k: args.k,
        a: args.a,
        gen_seed: args.gen_seed,
        graph: None,
    };
    let class = source.class()?;
    if args.n_from > args.n_to {
        return Err(Error::InvalidParameter(format!(
            "--n-from {} exceeds --n-to {}",
            args.n_from, args.n_to
        )));
    }
    let mut rows = Vec::new();
    for n in args.n_from..=args.n_to {
        GraphClassSpec::new(class, n, args.gen_seed).validate()?;
        let expected_sinks = form_or_none(analytics::expected_sinks_closed_form(&class, n))?;
        let prob_positive = form_or_none(analytics::prob_positive_closed_form(&class, n))?;
        let expected_rounds = match expected_rounds_projection(&class, n) {
            Ok(r) => Some(r),
            Err(Error::NoClosedForm(_)) => None,
            Err(e) => return Err(e),
        };
        let (mc_expected_sinks, mc_prob_positive) = match args.trials {
            Some(trials) => {
                let g = generate(&GraphClassSpec::new(class, n, args.gen_seed))?;
                (
                    Some(monte_carlo(&g, Statistic::ExpectedSinks, trials, args.seed)?),
                    Some(monte_carlo(&g, Statistic::ProbPositive, trials, args.seed)?),
                )
            }
            None => (None, None),
        };
        rows.push(TableRow {
            n,
            expected_sinks,
            prob_positive,
            expected_rounds,
            mc_expected_sinks,
            mc_prob_positive,
        });
    }
    let report = TableReport {
        class: class_label(&class),
        n_from: args.n_from,
        n_to: args.n_to,
        trials: args.trials,
        seed: args.seed,
        gen_seed: args.gen_seed,
        rows,
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(true);
    }
    println!("class: {}", report.class);
    let show = |f: &Option<FormOut>| f.as_ref().map_or("none".to_string(), FormOut::display);
    for row in &report.rows {
        let mut line = format!(
            "n={}\texpected_sinks {}\tprob_positive {}",
            row.n,
            show(&row.expected_sinks),
            show(&row.prob_positive)
        );
        if let Some(r) = row.expected_rounds {
            line.push_str(&format!("\texpected_rounds {}", format_significant(r, 6)));
        }
        if let Some(mc) = &row.mc_expected_sinks {
            line.push_str(&format!(
                "\tmc {} se {}",
                format_significant(mc.point, 6),
                format_significant(mc.std_error, 3)
            ));
        }
        println!("{line}");
    }
    Ok(true)
}

#[derive(Serialize, Debug)]
struct ExactOut {
    rational: String,
    value: f64,
    orientations: String,
}

impl ExactOut {
    fn new(stats: &ExactStats, statistic: Statistic) -> ExactOut {
        let r = match statistic {
            Statistic::ExpectedSinks => &stats.expected_sinks,
            Statistic::ProbPositive => &stats.prob_positive,
        };
        ExactOut {
            rational: format_rational(r),
            value: r.to_f64().unwrap_or(f64::NAN),
            orientations: stats.orientation_count.to_string(),
        }
    }
}

#[derive(Serialize, Debug)]
struct EstimateReport {
    graph: GraphDescriptor,
    statistic: Statistic,
    trials: u64,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<FormOut>,
    /// Exact value by the degree-sum identity (expected sinks only); valid
    /// for any graph.
    #[serde(skip_serializing_if = "Option::is_none")]
    degree_sum: Option<String>,
    /// Exact value by orientation enumeration (small graphs only).
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<ExactOut>,
    estimate: Estimate,
    /// Standardized distance to the closed form, when it is an equality.
    #[serde(skip_serializing_if = "Option::is_none")]
    z_score: Option<f64>,
}

fn run_estimate(args: EstimateArgs) -> Result<bool> {
    let (graph, spec) = args.source.resolve()?;
    let statistic: Statistic = args.statistic.into();
    let estimate = monte_carlo(&graph, statistic, args.trials, args.seed)?;
    let closed_form = match &spec {
        Some(spec) => {
            let r = match statistic {
                Statistic::ExpectedSinks => {
                    analytics::expected_sinks_closed_form(&spec.class, spec.n)
                }
                Statistic::ProbPositive => {
                    analytics::prob_positive_closed_form(&spec.class, spec.n)
                }
            };
            form_or_none(r)?
        }
        None => None,
    };
    let degree_sum = match statistic {
        Statistic::ExpectedSinks => Some(format_rational(&degree_sum_expected(&graph))),
        Statistic::ProbPositive => None,
    };
    let exact = if graph.edge_count() <= ENUMERATION_EDGE_CAP {
        Some(ExactOut::new(&enumerate_exact(&graph)?, statistic))
    } else {
        None
    };
    let z_score = closed_form.as_ref().and_then(|f| {
        (f.relation == "=" && estimate.std_error > 0.0)
            .then(|| (estimate.point - f.value) / estimate.std_error)
    });
    let report = EstimateReport {
        graph: GraphDescriptor::new(&graph, &spec, &args.source.graph),
        statistic,
        trials: args.trials,
        seed: args.seed,
        closed_form,
        degree_sum,
        exact,
        estimate,
        z_score,
    };
    let json = serde_json::to_string_pretty(&report)?;
    if args.out.is_some() {
        write_out(&args.out, format!("{json}\n").as_bytes())?;
    }
    if args.json {
        println!("{json}");
        return Ok(true);
    }
    println!("graph: {}", report.graph.describe());
    println!("statistic: {}", report.statistic.name());
    match &report.closed_form {
        Some(f) => println!("closed form: {}", f.display()),
        None => println!("closed form: none"),
    }
    if let Some(d) = &report.degree_sum {
        println!("degree-sum exact: {d}");
    }
    if let Some(e) = &report.exact {
        println!(
            "enumeration exact: {} ({}) over {} orientations",
            e.rational,
            format_significant(e.value, 12),
            e.orientations
        );
    }
    println!(
        "estimate: {} se {} trials {} seed {}",
        format_significant(report.estimate.point, 12),
        format_significant(report.estimate.std_error, 6),
        report.trials,
        report.seed
    );
    if let Some(z) = report.z_score {
        println!("z-score vs closed form: {}", format_significant(z, 3));
    }
    Ok(true)
}

fn load_workload(path: &Path) -> Result<WorkloadConfig> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn run_simulate(args: SimulateArgs) -> Result<bool> {
    match args.engine {
        EngineName::Central => {
            let (graph, spec) = args.source.resolve()?;
            if args.workload.is_some() {
                return Err(Error::InvalidParameter(
                    "--workload only applies to --engine classical".into(),
                ));
            }
            let max_rounds = args
                .max_rounds
                .unwrap_or_else(|| default_max_rounds(graph.vertex_count()));
            let run = simulate_central(&graph, args.seed, max_rounds, spec);
            let jsonl = run.trace.to_jsonl()?;
            let wrote = write_out(&args.out, jsonl.as_bytes())?;
            println!("engine: central");
            println!(
                "graph: {}",
                GraphDescriptor::new(&graph, &spec, &args.source.graph).describe()
            );
            println!("seed: {}", args.seed);
            println!("completed: {} rounds: {}", run.completed, run.rounds_used);
            let per_round: Vec<String> = run
                .trace
                .grants_by_round()
                .iter()
                .map(|(r, g)| format!("{r}:{}", g.len()))
                .collect();
            println!("grants per round: {}", per_round.join(" "));
            if wrote {
                println!("trace: {}", args.out.as_ref().unwrap().display());
            }
            Ok(true)
        }
        EngineName::Classical => {
            let workload = match &args.workload {
                Some(path) => load_workload(path)?,
                None => {
                    let (graph, _) = args.source.resolve()?;
                    crate::rgm::ResourceModel::from_graph(&graph).to_workload()
                }
            };
            if args.max_rounds.is_some() {
                return Err(Error::InvalidParameter(
                    "--max-rounds only applies to round engines".into(),
                ));
            }
            let run = classical_linear_order_rgm(&workload, args.seed)?;
            let jsonl = run.trace.to_jsonl()?;
            let wrote = write_out(&args.out, jsonl.as_bytes())?;
            println!("engine: classical");
            println!(
                "workload: {} processes, {} classes",
                workload.requests.len(),
                workload.capacities.len()
            );
            println!("seed: {}", args.seed);
            println!("completed: {} steps: {}", run.completed, run.steps_used);
            if wrote {
                println!("trace: {}", args.out.as_ref().unwrap().display());
            }
            Ok(true)
        }
    }
}

fn run_dist_sim(args: DistSimArgs) -> Result<bool> {
    let (graph, spec) = args.source.resolve()?;
    let max_rounds = args
        .max_rounds
        .unwrap_or_else(|| default_max_rounds(graph.vertex_count()));
    let delay = DelaySpec {
        dist: args.delay,
        seed: args.delay_seed,
    };
    let run = distsim::simulate_dist(&graph, args.seed, max_rounds, &delay, spec)?;
    let jsonl = run.trace.to_jsonl()?;
    let wrote = write_out(&args.out, jsonl.as_bytes())?;
    println!("engine: dist");
    println!(
        "graph: {}",
        GraphDescriptor::new(&graph, &spec, &args.source.graph).describe()
    );
    println!("seed: {}", args.seed);
    println!("completed: {} rounds: {}", run.completed, run.rounds_used);
    println!(
        "messages: {} coins, {} acks, {} leaves ({} total), last delivery at tick {}",
        run.messages.coins,
        run.messages.acks,
        run.messages.leaves,
        run.messages.total(),
        run.end_time
    );
    if wrote {
        println!("trace: {}", args.out.as_ref().unwrap().display());
    }
    Ok(true)
}

#[derive(Serialize, Debug)]
#[serde(untagged)]
enum VerifyReport {
    Orientation(crate::verifier::OrientationReport),
    Classical(crate::verifier::ClassicalReport),
}

fn run_verify(args: VerifyArgs) -> Result<bool> {
    let text = std::fs::read_to_string(&args.trace)?;
    let trace = Trace::from_jsonl(&text)?;
    let engine = trace.header.engine;
    let (report, clean) = match engine {
        EngineKind::Central | EngineKind::Dist => {
            let report = verify_orientation_trace(&trace)?;
            let clean = report.is_clean();
            (VerifyReport::Orientation(report), clean)
        }
        EngineKind::Classical => {
            let report = verify_classical_trace(&trace)?;
            let clean = report.is_clean();
            (VerifyReport::Classical(report), clean)
        }
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(clean);
    }
    match &report {
        VerifyReport::Orientation(r) => {
            println!("engine: {}", if engine == EngineKind::Central { "central" } else { "dist" });
            println!("rounds: {} completed: {}", r.rounds, r.completed);
            println!("structural violations: {}", r.structural.len());
            for v in &r.structural {
                println!("  {v:?}");
            }
            match &r.driven_by {
                Some(d) => {
                    println!("grant violations: {}", d.grant_violations.len());
                    for v in &d.grant_violations {
                        println!("  {v:?}");
                    }
                    println!("capacity violations: {}", d.capacity_violations.len());
                    for v in &d.capacity_violations {
                        println!("  {v:?}");
                    }
                }
                None => println!("driven-by: skipped (incomplete or structurally broken run)"),
            }
            match &r.acyclicity {
                Some(a) => println!(
                    "priority digraph: {}",
                    if a.is_acyclic() { "acyclic".to_string() } else { format!("{a:?}") }
                ),
                None => println!("priority digraph: skipped"),
            }
        }
        VerifyReport::Classical(r) => {
            println!("engine: classical");
            println!("steps: {} completed: {}", r.steps, r.completed);
            println!("grant violations: {}", r.driven_by.grant_violations.len());
            for v in &r.driven_by.grant_violations {
                println!("  {v:?}");
            }
            println!("capacity violations: {}", r.driven_by.capacity_violations.len());
            for v in &r.driven_by.capacity_violations {
                println!("  {v:?}");
            }
            println!("snapshots acyclic: {}", r.snapshots_acyclic);
        }
    }
    println!("verdict: {}", if clean { "clean" } else { "violations found" });
    Ok(clean)
}
