//! Command implementations behind the `dist` binary.

use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use distinguish::families::{self, connected_graphs};
use distinguish::{
    build_decomposition_tree_with, oracle_automorphisms, oracle_counts, parse_graph, Analysis, AnalysisOptions,
    Context, Format, Graph, TreeAnalysis, TriconnectOptions, DEFAULT_AUT_CAP,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(name = "dist", version, about = "Count distinguishing labelings of graphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Input format.
    #[arg(long, value_enum, default_value_t = InputFormat::Edgelist, global = true)]
    pub format: InputFormat,
    /// Human-readable text instead of JSON.
    #[arg(long, global = true)]
    pub plain: bool,
    /// Cap on the automorphisms listed for a single component.
    #[arg(long = "cap-aut", default_value_t = DEFAULT_AUT_CAP, global = true)]
    pub cap_aut: usize,
    /// Worker threads; 1 evaluates the tree sequentially.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for split orders and for relabeling generated bench graphs.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Edgelist,
    Graph6,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    All,
    Planar,
    Trees,
    Cycles,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchFamily {
    Wheel,
    Sp,
    Pendant,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// L(G,k), D(G,k) and |Aut(G)|.
    Compute {
        file: PathBuf,
        #[arg(long)]
        k: u64,
    },
    /// The distinguishing number D(G).
    Number { file: PathBuf },
    /// D(G,k) as a polynomial in k.
    Poly { file: PathBuf },
    /// The decomposition tree as JSON.
    Tree { file: PathBuf },
    /// Automorphisms in cycle notation, or group orders per component for large graphs.
    Aut { file: PathBuf },
    /// Compare the pipeline with brute force on small graphs.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 3)]
        max_k: u64,
        #[arg(long, value_enum, default_value_t = Family::All)]
        family: Family,
        /// Random graphs per size above seven vertices.
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Time the pipeline on generated families.
    Bench {
        #[arg(long, value_enum, default_value_t = BenchFamily::All)]
        family: BenchFamily,
        #[arg(long, value_delimiter = ',', default_value = "100,200,500,1000,2000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        k: u64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] distinguish::Error),
    #[error("verification failed: {0} mismatches")]
    Mismatch(usize, Value),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use distinguish::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Core(E::Parse(_)) => 2,
            CliError::Core(E::Invariant(_)) => 3,
            CliError::Core(_) => 1,
            CliError::Mismatch(..) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "parse",
            3 => "invariant",
            4 => "verification",
            _ => "usage",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "error": { "kind": self.kind(), "message": self.to_string() } });
        if let CliError::Mismatch(_, details) = self {
            v["error"]["report"] = details.clone();
        }
        v
    }
}

/// Result of one command: JSON plus a plain-text rendering.
#[derive(Debug)]
pub struct Report {
    pub json: Value,
    pub text: String,
}

impl Report {
    pub fn render(&self, plain: bool) -> String {
        if plain {
            self.text.clone()
        } else {
            serde_json::to_string_pretty(&self.json).expect("JSON values serialize")
        }
    }
}

fn read_input(path: &Path, format: InputFormat) -> Result<(Graph, String), CliError> {
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(io)?
    };
    let fmt = match format {
        InputFormat::Edgelist => Format::EdgeList,
        InputFormat::Graph6 => Format::Graph6,
    };
    let g = parse_graph(&text, fmt).map_err(distinguish::Error::from)?;
    Ok((g, path.display().to_string()))
}

fn options(global: &GlobalOpts) -> AnalysisOptions {
    AnalysisOptions {
        aut_cap: global.cap_aut,
        triconnect: TriconnectOptions { seed: global.seed },
        parallel: global.jobs != Some(1),
        ..AnalysisOptions::default()
    }
}

fn elapsed_ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let g = &cli.global;
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Compute { file, k } => cmd_compute(file, *k, g)?,
        Command::Number { file } => cmd_number(file, g)?,
        Command::Poly { file } => cmd_poly(file, g)?,
        Command::Tree { file } => cmd_tree(file, g)?,
        Command::Aut { file } => cmd_aut(file, g)?,
        Command::Verify { max_n, max_k, family, samples } => cmd_verify(*max_n, *max_k, *family, *samples, g)?,
        Command::Bench { family, sizes, k } => cmd_bench(*family, sizes, *k, g)?,
    };
    report.json["timing_ms"] = json!(elapsed_ms(start));
    Ok(report)
}

pub fn cmd_compute(file: &Path, k: u64, g: &GlobalOpts) -> Result<Report, CliError> {
    let (graph, input) = read_input(file, g.format)?;
    let r = Analysis::with_options(&graph, options(g))?.count(k)?;
    let json = json!({
        "command": "compute",
        "input": input,
        "n": graph.n(),
        "m": graph.m(),
        "k": k,
        "L": r.l.to_string(),
        "D": r.d.to_string(),
        "aut": r.aut.to_string(),
    });
    let text = format!("L(G,{k}) = {}\nD(G,{k}) = {}\n|Aut(G)| = {}\n", r.l, r.d, r.aut);
    Ok(Report { json, text })
}

pub fn cmd_number(file: &Path, g: &GlobalOpts) -> Result<Report, CliError> {
    let (graph, input) = read_input(file, g.format)?;
    let d = Analysis::with_options(&graph, options(g))?.distinguishing_number()?;
    let json = json!({ "command": "number", "input": input, "n": graph.n(), "D_number": d });
    Ok(Report { json, text: format!("D(G) = {d}\n") })
}

pub fn cmd_poly(file: &Path, g: &GlobalOpts) -> Result<Report, CliError> {
    let (graph, input) = read_input(file, g.format)?;
    let analysis = Analysis::with_options(&graph, options(g))?;
    let p = analysis.polynomial()?;
    let json = json!({
        "command": "poly",
        "input": input,
        "n": graph.n(),
        "degree": p.degree(),
        "coefficients": p.to_strings(),
        "aut": analysis.aut_order().to_string(),
    });
    Ok(Report { json, text: format!("D(G,k) = {p}\n") })
}

pub fn cmd_tree(file: &Path, g: &GlobalOpts) -> Result<Report, CliError> {
    let (graph, input) = read_input(file, g.format)?;
    if !graph.is_connected() {
        return Err(distinguish::Error::Disconnected.into());
    }
    let tree = build_decomposition_tree_with(&graph, TriconnectOptions { seed: g.seed })?;
    let dump = tree.to_dump();
    let mut text = String::new();
    for node in &tree.nodes {
        let indent = "  ".repeat(node.depth);
        let label = match &node.payload {
            distinguish::NodePayload::Cut(a) => format!("C {}", graph.name(*a)),
            distinguish::NodePayload::Pair(x, y) => format!("S {} {}", graph.name(*x), graph.name(*y)),
            distinguish::NodePayload::Component(c) => format!("T {:?} {}", c.kind, c.graph),
        };
        let _ = writeln!(text, "{indent}{label}");
    }
    let json = json!({
        "command": "tree",
        "input": input,
        "tree": serde_json::to_value(&dump).expect("tree dump serializes"),
    });
    Ok(Report { json, text })
}

pub fn cmd_aut(file: &Path, g: &GlobalOpts) -> Result<Report, CliError> {
    let (graph, input) = read_input(file, g.format)?;
    if graph.n() <= distinguish::oracle::ORACLE_MAX_N {
        let auts = oracle_automorphisms(&graph, &[])?;
        let cycles: Vec<String> = auts.iter().map(|p| p.cycle_notation(|v| graph.name(v))).collect();
        let json = json!({
            "command": "aut",
            "input": input,
            "source": "oracle",
            "order": auts.len(),
            "automorphisms": cycles,
        });
        let text = format!("|Aut(G)| = {}\n{}\n", auts.len(), cycles.join("\n"));
        return Ok(Report { json, text });
    }
    let analysis = Analysis::with_options(&graph, options(g))?;
    let mut parts = Vec::new();
    let mut text = format!("|Aut(G)| = {}\n", analysis.aut_order());
    for (t, m) in analysis.parts() {
        let groups = t.group_summaries();
        for s in &groups {
            let _ = writeln!(text, "node {} ({:?}): order {} {:?} via {:?}", s.node, s.star, s.order, s.case, s.engine);
        }
        parts.push(json!({ "copies": m, "aut": t.aut_order().to_string(), "components": groups }));
    }
    let json = json!({
        "command": "aut",
        "input": input,
        "source": "components",
        "order": analysis.aut_order().to_string(),
        "parts": parts,
    });
    Ok(Report { json, text })
}

fn family_graphs(max_n: usize, family: Family, samples: usize, seed: u64) -> Vec<Graph> {
    let keep = |g: &Graph| match family {
        Family::All => true,
        Family::Planar => families::is_planar(g),
        Family::Trees => families::is_tree(g),
        Family::Cycles => families::is_cycle(g),
    };
    let mut out: Vec<Graph> = (1..=max_n.min(7)).flat_map(connected_graphs).filter(|g| keep(g)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 8..=max_n {
        match family {
            Family::Cycles => out.push(families::cycle(n)),
            Family::Trees => out.extend((0..samples).map(|_| families::random_tree(n, &mut rng))),
            _ => {
                let mut taken = 0;
                while taken < samples {
                    let g = families::random_connected(n, 0.3, &mut rng);
                    if keep(&g) {
                        out.push(g);
                        taken += 1;
                    }
                }
            }
        }
    }
    out
}

pub fn cmd_verify(
    max_n: usize,
    max_k: u64,
    family: Family,
    samples: usize,
    g: &GlobalOpts,
) -> Result<Report, CliError> {
    if max_n > distinguish::oracle::ORACLE_MAX_N {
        return Err(CliError::Usage(format!("--max-n is limited to {}", distinguish::oracle::ORACLE_MAX_N)));
    }
    let graphs = family_graphs(max_n, family, samples, g.seed.unwrap_or(0));
    let opts = options(g);
    let mut checks = 0usize;
    let mut skipped = 0usize;
    let mut mismatches = Vec::new();
    for graph in &graphs {
        let analysis = TreeAnalysis::with_options(graph, opts)?;
        for k in 1..=max_k {
            let oracle = match oracle_counts(graph, k, Context::Plain) {
                Ok(o) => o,
                Err(distinguish::Error::CapExceeded { .. }) => {
                    skipped += 1;
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            let got = analysis.count(k)?;
            checks += 1;
            if got.d != oracle.d || got.aut != oracle.aut_order.into() {
                mismatches.push(json!({
                    "graph6": graph.to_graph6(),
                    "k": k,
                    "D": got.d.to_string(),
                    "oracle_D": oracle.d.to_string(),
                    "aut": got.aut.to_string(),
                    "oracle_aut": oracle.aut_order,
                }));
            }
        }
    }
    let family_name = format!("{family:?}").to_lowercase();
    let json = json!({
        "command": "verify",
        "family": family_name,
        "max_n": max_n,
        "max_k": max_k,
        "graphs": graphs.len(),
        "checks": checks,
        "skipped": skipped,
        "mismatches": mismatches,
        "passed": mismatches.is_empty(),
    });
    if !mismatches.is_empty() {
        return Err(CliError::Mismatch(mismatches.len(), json));
    }
    let text =
        format!("verified {} graphs ({checks} checks, {skipped} over the oracle cap): all match\n", graphs.len());
    Ok(Report { json, text })
}

pub fn cmd_bench(family: BenchFamily, sizes: &[usize], k: u64, g: &GlobalOpts) -> Result<Report, CliError> {
    let mut runs = Vec::new();
    let mut text = String::new();
    let fams: &[BenchFamily] = match family {
        BenchFamily::All => &[BenchFamily::Wheel, BenchFamily::Sp, BenchFamily::Pendant],
        f => std::slice::from_ref(match f {
            BenchFamily::Wheel => &BenchFamily::Wheel,
            BenchFamily::Sp => &BenchFamily::Sp,
            _ => &BenchFamily::Pendant,
        }),
    };
    for &fam in fams {
        for &n in sizes {
            let (name, graph) = match fam {
                BenchFamily::Wheel => ("wheel", families::wheel(n.max(4))),
                BenchFamily::Sp => ("sp", families::sp_chain_with_n(n)),
                _ => ("pendant", families::pendant_cycle((n / 2).max(3), &[1])),
            };
            let graph = match g.seed {
                Some(seed) => families::shuffled(&graph, &mut ChaCha8Rng::seed_from_u64(seed)),
                None => graph,
            };
            let t = Instant::now();
            let r = Analysis::with_options(&graph, options(g))?.count(k)?;
            let ms = elapsed_ms(t);
            let _ = writeln!(
                text,
                "{name:8} n={:6} k={k}: {ms:10.3} ms, D has {} digits",
                graph.n(),
                r.d.to_string().len()
            );
            runs.push(json!({
                "family": name,
                "n": graph.n(),
                "m": graph.m(),
                "k": k,
                "ms": ms,
                "D_digits": r.d.to_string().len(),
                "aut": r.aut.to_string(),
            }));
        }
    }
    Ok(Report { json: json!({ "command": "bench", "runs": runs }), text })
}
