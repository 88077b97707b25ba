//! `netbone`: backbones of weighted networks from the command line.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use netbone::baselines::{disparity_filter, disparity_filter_top_e, high_salience_skeleton, percolation_backbone, SalienceOptions};
use netbone::graph::{read_edge_list, Backbone, ParseOptions, WeightedGraph};
use netbone::metrics::{jaccard_similarity, summarize, BackboneMetrics, ReachabilityOptions};
use netbone::objective::{description_length, ObjectiveSpec, Scope, WeightModel};
use netbone::percolation::{backbone_percolation_study, parse_grid, CurveOptions, ThresholdOptions};
use netbone::report::BackboneReport;
use netbone::solver::{empty_description_lengths, inverse_compression_ratio, solve, SolveOptions, Sweep, Traces};
use netbone::synth::{dirichlet_multinomial_weights, planted_instance, random_regular_directed};

#[derive(Parser)]
#[command(name = "netbone", version, about = "Backbones of weighted networks")]
struct Cli {
    /// Worker threads for parallel steps (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract a backbone from an edge list.
    Backbone(BackboneArgs),
    /// Measure backbones against their graph and against each other.
    Compare(CompareArgs),
    /// Generate a synthetic network.
    Synth {
        #[command(subcommand)]
        kind: SynthKind,
    },
    /// Giant-cluster curves and percolation thresholds of a graph and its backbones.
    Percolation(PercolationArgs),
    /// Time backbone methods on an input graph or on synthetic instances.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Edge list with one `src dst weight` triple per line.
    input: PathBuf,
    /// Treat `a b` and `b a` as the same edge.
    #[arg(long)]
    undirected: bool,
    /// Round weights to the nearest integer before anything else.
    #[arg(long)]
    round_weights: bool,
}

impl GraphArgs {
    fn load(&self) -> Result<WeightedGraph, CliError> {
        load_graph(&self.input, !self.undirected, self.round_weights)
    }
}

fn load_graph(path: &Path, directed: bool, round: bool) -> Result<WeightedGraph, CliError> {
    let mut options = if directed { ParseOptions::directed() } else { ParseOptions::undirected() };
    if round {
        options = options.rounding();
    }
    read_edge_list(path, options).map_err(|e| CliError::Run(format!("{}: {e}", path.display())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    MdlGlobal,
    MdlLocal,
    DisparityAlpha,
    DisparityTope,
    Hss,
    Percolation,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScopeArg {
    Global,
    Local,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Scope {
        match s {
            ScopeArg::Global => Scope::Global,
            ScopeArg::Local => Scope::Local,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SweepArg {
    Full,
    Half,
}

/// Settings shared by every way of running a method.
#[derive(Args, Clone)]
struct MethodArgs {
    /// Weight model of the MDL methods: micro, canonical-geometric,
    /// canonical-poisson or canonical-exponential.
    #[arg(long, default_value = "micro")]
    objective: String,
    /// Rate of the Poisson and exponential models.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Prefix sizes scanned by the MDL methods.
    #[arg(long, value_enum, default_value = "full")]
    sweep: SweepArg,
    /// Significance level of disparity-alpha.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Edge count of disparity-tope (default: size of the mdl-local backbone).
    #[arg(long)]
    e_target: Option<usize>,
    /// Seed of any random sampling (HSS root sampling).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl MethodArgs {
    fn model(&self) -> Result<WeightModel, CliError> {
        let model = WeightModel::from_str(&self.objective).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(match model {
            WeightModel::Poisson { .. } => WeightModel::Poisson { lambda: self.lambda },
            WeightModel::Exponential { .. } => WeightModel::Exponential { lambda: self.lambda },
            m => m,
        })
    }

    fn sweep(&self) -> Sweep {
        match self.sweep {
            SweepArg::Full => Sweep::Full,
            SweepArg::Half => Sweep::Half,
        }
    }
}

/// The backbone of one method plus its report.
struct MethodRun {
    backbone: Backbone,
    report: BackboneReport,
    traces: Traces,
}

fn run_method(g: &WeightedGraph, method: Method, args: &MethodArgs, keep_traces: bool) -> Result<MethodRun, CliError> {
    let name = method.to_string();
    let mdl = |scope: Scope, keep_local_traces: bool| -> Result<_, CliError> {
        let spec = ObjectiveSpec::new(scope, args.model()?)?;
        Ok(solve(g, spec, SolveOptions { sweep: args.sweep(), keep_local_traces })?)
    };
    let run = match method {
        Method::MdlGlobal | Method::MdlLocal => {
            let scope = if method == Method::MdlGlobal { Scope::Global } else { Scope::Local };
            let result = mdl(scope, keep_traces)?;
            let sweep = match args.sweep {
                SweepArg::Full => "full",
                SweepArg::Half => "half",
            };
            let report = BackboneReport::from_result(&name, g, &result).with_parameter("sweep", sweep);
            MethodRun { backbone: result.backbone, report, traces: result.traces }
        }
        Method::DisparityAlpha => {
            let backbone = disparity_filter(g, args.alpha)?;
            let report = BackboneReport::new(&name, g, &backbone).with_parameter("alpha", args.alpha);
            MethodRun { backbone, report, traces: Traces::None }
        }
        Method::DisparityTope => {
            let (target, source) = match args.e_target {
                Some(n) => (n, "flag"),
                None => (mdl(Scope::Local, false)?.backbone.edge_count(), "mdl-local"),
            };
            let backbone = disparity_filter_top_e(g, target)?;
            let report = BackboneReport::new(&name, g, &backbone)
                .with_parameter("e_target", target)
                .with_parameter("e_target_source", source);
            MethodRun { backbone, report, traces: Traces::None }
        }
        Method::Hss => {
            let options = SalienceOptions { seed: args.seed, ..SalienceOptions::default() };
            let (backbone, table) = high_salience_skeleton(g, &options)?;
            let report = BackboneReport::new(&name, g, &backbone)
                .with_parameter("threshold", options.threshold)
                .with_parameter("trees_sampled", table.trees_sampled)
                .with_parameter("seed", args.seed);
            MethodRun { backbone, report, traces: Traces::None }
        }
        Method::Percolation => {
            let backbone = percolation_backbone(g);
            let report = BackboneReport::new(&name, g, &backbone);
            MethodRun { backbone, report, traces: Traces::None }
        }
    };
    Ok(run)
}

#[derive(Args)]
struct BackboneArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum)]
    method: Method,
    #[command(flatten)]
    method_args: MethodArgs,
    /// Write PREFIX.tsv (backbone edges) and PREFIX.json (report) instead
    /// of printing the report; mdl-local also writes PREFIX.trace.json.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct NodeTrace<'a> {
    node: &'a str,
    argmin: usize,
    values: &'a [f64],
}

fn cmd_backbone(args: BackboneArgs) -> Result<(), CliError> {
    let g = args.graph.load()?;
    let keep = args.output.is_some() && args.method == Method::MdlLocal;
    let run = run_method(&g, args.method, &args.method_args, keep)?;
    let report = run
        .report
        .with_parameter("undirected", args.graph.undirected)
        .with_parameter("round_weights", args.graph.round_weights);
    let Some(prefix) = args.output else {
        return write_output(None, &to_json(&report)?);
    };
    write_output(Some(&with_suffix(&prefix, "tsv")), &run.backbone.to_edge_list_string(&g))?;
    write_output(Some(&with_suffix(&prefix, "json")), &to_json(&report)?)?;
    if let Traces::Local(traces) = &run.traces {
        // Traces follow the nodes of the directed view.
        let rows: Vec<NodeTrace> = traces
            .iter()
            .enumerate()
            .map(|(v, t)| NodeTrace { node: g.label(v as u32), argmin: t.argmin, values: &t.values })
            .collect();
        write_output(Some(&with_suffix(&prefix, "trace.json")), &to_json(&rows)?)?;
    }
    Ok(())
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Backbone edge lists; every edge must exist in the graph.
    #[arg(long, num_args = 1.., required = true)]
    backbones: Vec<PathBuf>,
    /// Also report the inverse compression ratio under this scope.
    #[arg(long, value_enum)]
    eta: Option<ScopeArg>,
    /// Weight model used for --eta.
    #[arg(long, default_value = "micro")]
    objective: String,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Reachability is measured on a random sample of this many nodes in
    /// larger graphs.
    #[arg(long, default_value_t = 10_000)]
    reach_sample: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON table here instead of printing it.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct CompareRow {
    label: String,
    #[serde(flatten)]
    metrics: BackboneMetrics,
}

fn file_label(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn cmd_compare(args: CompareArgs) -> Result<(), CliError> {
    let g = args.graph.load()?;
    let eta_spec = match args.eta {
        Some(scope) => {
            let method = MethodArgs {
                objective: args.objective.clone(),
                lambda: args.lambda,
                sweep: SweepArg::Full,
                alpha: 0.05,
                e_target: None,
                seed: 0,
            };
            Some(ObjectiveSpec::new(scope.into(), method.model()?)?)
        }
        None => None,
    };
    let reach = ReachabilityOptions { sample_cap: args.reach_sample, seed: args.seed };
    let mut labels = Vec::new();
    let mut backbones = Vec::new();
    for path in &args.backbones {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Run(format!("{}: {e}", path.display())))?;
        let bb = Backbone::from_edge_list(&g, &text).map_err(|e| CliError::Run(format!("{}: {e}", path.display())))?;
        labels.push(file_label(path));
        backbones.push(bb);
    }
    let mut rows = Vec::new();
    for (label, bb) in labels.iter().zip(&backbones) {
        let eta = match eta_spec {
            Some(spec) => {
                let (global, local) = empty_description_lengths(&g, spec.model)?;
                Some(inverse_compression_ratio(description_length(&g, bb, spec)?, global, local)?)
            }
            None => None,
        };
        rows.push(CompareRow { label: label.clone(), metrics: summarize(&g, bb, eta, &reach) });
    }
    let mut doc = json!({ "graph": { "E": g.num_edges(), "W": g.total_weight() }, "rows": rows, "seed": args.seed });
    if backbones.len() >= 2 {
        let matrix: Vec<Vec<f64>> = backbones
            .iter()
            .map(|a| backbones.iter().map(|b| jaccard_similarity(a, b)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;
        doc["jaccard"] = json!({ "labels": labels, "matrix": matrix });
    }
    write_output(args.output.as_deref(), &to_json(&doc)?)
}

#[derive(Subcommand)]
enum SynthKind {
    /// k-regular directed graph with a planted backbone of heavier edges.
    Planted {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Ratio of backbone to non-backbone geometric rates, in (0, 1].
        #[arg(long)]
        gamma: f64,
        #[arg(long, value_enum, default_value = "global")]
        scope: ScopeArg,
        #[command(flatten)]
        out: SynthOutput,
    },
    /// k-regular directed graph with Dirichlet-multinomial weights.
    Dm {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Total weight, at least N k.
        #[arg(long = "W")]
        w: u64,
        /// Strength homogeneity (concentration across nodes).
        #[arg(long, default_value_t = 0.1)]
        hstr: f64,
        /// Neighborhood homogeneity (concentration within out-neighborhoods).
        #[arg(long, default_value_t = 0.1)]
        hneig: f64,
        #[command(flatten)]
        out: SynthOutput,
    },
    /// Unit-weight k-regular directed graph.
    Regular {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: SynthOutput,
    },
}

#[derive(Args)]
struct SynthOutput {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Files written are PREFIX.tsv, PREFIX.params.json and, for planted
    /// instances, PREFIX.planted.tsv (default prefix: the generator name).
    #[arg(long)]
    output: Option<PathBuf>,
}

fn cmd_synth(kind: SynthKind) -> Result<(), CliError> {
    // Generator errors are all about parameter ranges.
    let usage = |e: netbone::Error| CliError::Usage(e.to_string());
    let (name, graph, planted, params, out) = match kind {
        SynthKind::Planted { n, k, gamma, scope, out } => {
            let inst = planted_instance(n, k, gamma, scope.into(), out.seed).map_err(usage)?;
            let params = json!({ "params": inst.params, "draws": inst.draws, "planted_edges": inst.planted.edge_count() });
            ("planted", inst.graph, Some(inst.planted), params, out)
        }
        SynthKind::Dm { n, k, w, hstr, hneig, out } => {
            let inst = dirichlet_multinomial_weights(n, k, w, hstr, hneig, out.seed).map_err(usage)?;
            ("dm", inst.graph, None, json!({ "params": inst.params }), out)
        }
        SynthKind::Regular { n, k, out } => {
            let graph = random_regular_directed(n, k, out.seed).map_err(usage)?;
            ("regular", graph, None, json!({ "params": { "n": n, "k": k, "seed": out.seed } }), out)
        }
    };
    let prefix = out.output.unwrap_or_else(|| PathBuf::from(name));
    let mut params = params;
    params["generator"] = json!(name);
    params["E"] = json!(graph.num_edges());
    params["W"] = json!(graph.total_weight());
    write_output(Some(&with_suffix(&prefix, "tsv")), &graph.to_edge_list_string())?;
    write_output(Some(&with_suffix(&prefix, "params.json")), &to_json(&params)?)?;
    if let Some(bb) = planted {
        write_output(Some(&with_suffix(&prefix, "planted.tsv")), &bb.to_edge_list_string(&graph))?;
    }
    Ok(())
}

#[derive(Args)]
struct PercolationArgs {
    /// Undirected edge list.
    input: PathBuf,
    /// Declare the input directed. Directed graphs are rejected.
    #[arg(long)]
    directed: bool,
    #[arg(long)]
    round_weights: bool,
    /// Transmission probabilities: lin:a:b:n, log:a:b:n or a single value.
    #[arg(long, default_value = "log:1e-6:1:50")]
    pgrid: String,
    /// Backbone edge lists of the same graph.
    #[arg(long, num_args = 1..)]
    backbones: Vec<PathBuf>,
    /// Start each grid point from the previous point's solution.
    #[arg(long)]
    warm_start: bool,
    /// Extra random starts per grid point to detect multiple stable solutions.
    #[arg(long, default_value_t = 0)]
    restarts: usize,
    /// The threshold search stops when the eigenvalue is this close to 1.
    #[arg(long, default_value_t = 1e-7)]
    tolerance: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON study here instead of printing it.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn cmd_percolation(args: PercolationArgs) -> Result<(), CliError> {
    let g = load_graph(&args.input, args.directed, args.round_weights)?;
    let grid = parse_grid(&args.pgrid).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut backbones = Vec::new();
    for path in &args.backbones {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Run(format!("{}: {e}", path.display())))?;
        let bb = Backbone::from_edge_list(&g, &text).map_err(|e| CliError::Run(format!("{}: {e}", path.display())))?;
        backbones.push((file_label(path), bb));
    }
    let options = CurveOptions {
        threshold: ThresholdOptions { tolerance: args.tolerance, ..ThresholdOptions::default() },
        warm_start: args.warm_start,
        restarts: args.restarts,
        seed: args.seed,
        ..CurveOptions::default()
    };
    let study = backbone_percolation_study(&g, &backbones, &grid, &options)?;
    write_output(args.output.as_deref(), &to_json(&study)?)
}

#[derive(Args)]
struct BenchArgs {
    /// Graph to time; without it, Dirichlet-multinomial instances are generated.
    input: Option<PathBuf>,
    #[arg(long)]
    undirected: bool,
    #[arg(long)]
    round_weights: bool,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "mdl-global,mdl-local,disparity-alpha,percolation")]
    methods: Vec<Method>,
    /// Node counts of the generated instances.
    #[arg(long, value_delimiter = ',', default_value = "1000,10000")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Total weight per node of the generated instances.
    #[arg(long, default_value_t = 1000)]
    weight_per_node: u64,
    #[arg(long, default_value_t = 0.1)]
    hstr: f64,
    #[arg(long, default_value_t = 0.1)]
    hneig: f64,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[command(flatten)]
    method_args: MethodArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct Timing {
    method: Method,
    nodes: usize,
    edges: usize,
    backbone_edges: usize,
    min_seconds: f64,
    mean_seconds: f64,
}

/// Least-squares slope of `log(seconds)` against `log(nodes)`.
fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.max(1e-12).ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = logs.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    (var > 0.0).then(|| cov / var)
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    if args.repeats == 0 {
        return Err(CliError::Usage("--repeats must be at least 1".into()));
    }
    let graphs: Vec<WeightedGraph> = match &args.input {
        Some(path) => vec![load_graph(path, !args.undirected, args.round_weights)?],
        None => args
            .sizes
            .iter()
            .map(|&n| {
                dirichlet_multinomial_weights(n, args.k, args.weight_per_node * n as u64, args.hstr, args.hneig, args.method_args.seed)
                    .map(|inst| inst.graph)
                    .map_err(|e| CliError::Usage(e.to_string()))
            })
            .collect::<Result<_, _>>()?,
    };
    let mut timings = Vec::new();
    for g in &graphs {
        for &method in &args.methods {
            let mut seconds = Vec::with_capacity(args.repeats);
            let mut kept = 0;
            for _ in 0..args.repeats {
                let start = Instant::now();
                kept = run_method(g, method, &args.method_args, false)?.backbone.edge_count();
                seconds.push(start.elapsed().as_secs_f64());
            }
            timings.push(Timing {
                method,
                nodes: g.num_nodes(),
                edges: g.num_edges(),
                backbone_edges: kept,
                min_seconds: seconds.iter().copied().fold(f64::INFINITY, f64::min),
                mean_seconds: seconds.iter().sum::<f64>() / seconds.len() as f64,
            });
        }
    }
    let slopes: serde_json::Map<String, Value> = args
        .methods
        .iter()
        .map(|m| {
            let points: Vec<(f64, f64)> =
                timings.iter().filter(|t| t.method == *m).map(|t| (t.nodes as f64, t.min_seconds)).collect();
            (m.to_string(), json!(log_log_slope(&points)))
        })
        .collect();
    let doc = json!({
        "threads": rayon::current_num_threads(),
        "repeats": args.repeats,
        "seed": args.method_args.seed,
        "timings": timings,
        "log_log_slopes": slopes,
    });
    write_output(args.output.as_deref(), &to_json(&doc)?)
}

#[derive(Debug)]
enum CliError {
    /// Bad flags or parameter values (exit status 2).
    Usage(String),
    /// Input, domain or numerical failures (exit status 1).
    Run(String),
}

impl From<netbone::Error> for CliError {
    fn from(e: netbone::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Run(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Run(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Run(e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Run(e.to_string()))?;
    }
    match cli.command {
        Command::Backbone(args) => cmd_backbone(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Synth { kind } => cmd_synth(kind),
        Command::Percolation(args) => cmd_percolation(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("netbone: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Run(message)) => {
            eprintln!("netbone: {message}");
            ExitCode::from(1)
        }
    }
}
