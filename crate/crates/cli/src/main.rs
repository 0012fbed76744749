use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ctw_core::brambles::{self, Bramble};
use ctw_core::connectify::{run_construction, run_construction_checked, widths_across_roots};
use ctw_core::cycles::{self, cyclomatic_number};
use ctw_core::decomp::{self, Decomposition};
use ctw_core::families;
use ctw_core::graph::parse_edge_list_bytes;
use ctw_core::io;
use ctw_core::pipeline::{run_pipeline, run_pipeline_with_seed, PipelineOptions};
use ctw_core::solver::{self, ExactConfig};
use ctw_core::{Cycle, Graph};

mod report;

#[derive(Parser)]
#[command(name = "ctw", version, about = "Connected tree-decompositions from stable ones")]
struct Cli {
    /// Seed for randomized generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one of the built-in graph families as an edge list.
    Generate {
        family: Family,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Edge probability for `random`.
        #[arg(long, default_value_t = 0.2)]
        density: f64,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also write the family's explicit decomposition, where there is one.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Also write the family's bramble, where there is one.
        #[arg(long)]
        bramble: Option<PathBuf>,
    },
    /// Tree-width: exact for small kernels, or min-fill with --heuristic.
    Tw {
        graph: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Least ℓ such that cycles of length at most ℓ span the cycle space.
    Ell {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = EllMethod::Basis)]
        method: EllMethod,
    },
    /// Make every side of every tree edge connected.
    Stabilize {
        graph: PathBuf,
        decomposition: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run the construction on a rooted stable decomposition.
    Connectify {
        graph: PathBuf,
        decomposition: PathBuf,
        /// Override the root stored in the decomposition.
        #[arg(long)]
        root: Option<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Re-validate everything after every path addition.
        #[arg(long)]
        check: bool,
        /// Report the output width for every choice of root.
        #[arg(long)]
        all_roots: bool,
    },
    /// Tree-width → stabilize → construction, checking the width bound.
    Pipeline {
        graph: PathBuf,
        /// Start from this decomposition instead of solving.
        #[arg(long)]
        decomposition: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        check: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check a decomposition against a graph.
    Verify {
        graph: PathBuf,
        decomposition: PathBuf,
        #[arg(long)]
        connected: bool,
        #[arg(long)]
        stable: bool,
    },
    /// Bramble checks and (connected) order.
    Bramble {
        graph: PathBuf,
        bramble: PathBuf,
        #[arg(long, value_enum, default_value_t = BrambleMode::Check)]
        mode: BrambleMode,
        #[arg(long, default_value_t = brambles::DEFAULT_ORDER_LIMIT)]
        limit: usize,
    },
    /// Summary of the graph's invariants.
    Report {
        graph: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Bramble used as a certificate for the connected bramble number.
        #[arg(long)]
        bramble: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Graphviz rendering of a decomposition, optionally with a trace overlay.
    ExportDot {
        graph: PathBuf,
        decomposition: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args, Clone, Copy)]
struct SolverArgs {
    #[arg(long)]
    heuristic: bool,
    /// Kernel size limit of the exact solver.
    #[arg(long, default_value_t = solver::DEFAULT_EXACT_LIMIT)]
    limit: usize,
}

impl SolverArgs {
    fn exact(&self) -> ExactConfig {
        ExactConfig {
            max_kernel_vertices: self.limit,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cycle,
    Complete,
    SubdividedComplete,
    SubdividedGrid,
    Duality,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EllMethod {
    Enumerate,
    Basis,
}

#[derive(Clone, Copy, ValueEnum)]
enum BrambleMode {
    Check,
    Order,
    ConnectedOrder,
    Bound,
}

/// A failed check; printed as JSON and mapped to exit code 1.
#[derive(Debug)]
struct Violation(serde_json::Value);

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for Violation {}

fn violation(value: serde_json::Value) -> anyhow::Error {
    Violation(value).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => match e.downcast_ref::<Violation>() {
            Some(v) => {
                println!("{}", serde_json::to_string_pretty(&v.0).unwrap_or_default());
                ExitCode::from(1)
            }
            None => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        fs::read(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    parse_edge_list_bytes(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_decomposition(g: &Graph, path: &Path) -> Result<Decomposition> {
    let text = String::from_utf8(read_input(path)?)?;
    io::decomposition_from_json(g, &text).with_context(|| format!("loading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate {
            family,
            n,
            k,
            density,
            out,
            witness,
            bramble,
        } => generate(family, n, k, density, cli.seed, out, witness, bramble),
        Command::Tw { graph, solver, out } => {
            let g = read_graph(&graph)?;
            let d = if solver.heuristic {
                let d = solver::minfill_decomposition(&g);
                println!("width={} heuristic", d.width());
                d
            } else {
                let (k, d) = solver::exact_treewidth_with(&g, &solver.exact())
                    .context("exact solver failed; pass --heuristic for an upper bound")?;
                println!("tw={k} exact");
                d
            };
            if let Some(p) = out {
                write_file(&p, &io::decomposition_to_json(&g, &d))?;
            }
            Ok(())
        }
        Command::Ell { graph, method } => {
            let g = read_graph(&graph)?;
            if cyclomatic_number(&g) == 0 {
                bail!("no cycle: ell undefined");
            }
            let ell = match method {
                EllMethod::Enumerate => cycles::ell(&g)?,
                EllMethod::Basis => cycles::ell_via_min_basis(&g)?,
            };
            println!("ell={ell}");
            Ok(())
        }
        Command::Stabilize {
            graph,
            decomposition,
            out,
        } => {
            let g = read_graph(&graph)?;
            let d = read_decomposition(&g, &decomposition)?;
            let s = solver::stabilize(&g, &d)?;
            eprintln!("width {} -> {}, {} nodes", d.width(), s.width(), s.len());
            emit(out.as_deref(), &io::decomposition_to_json(&g, &s))
        }
        Command::Connectify {
            graph,
            decomposition,
            root,
            out,
            trace,
            check,
            all_roots,
        } => {
            let g = read_graph(&graph)?;
            let mut d = read_decomposition(&g, &decomposition)?;
            if let Some(r) = root {
                d = d.rerooted(r)?;
            } else if d.root().is_none() {
                d = d.rerooted(0)?;
            }
            if all_roots {
                for (r, w) in widths_across_roots(&g, &d)? {
                    eprintln!("root={r} width={w}");
                }
            }
            let result = if check {
                run_construction_checked(&g, &d)?
            } else {
                run_construction(&g, &d)?
            };
            eprintln!(
                "additions={} width {} -> {}",
                result.trace.len(),
                d.width(),
                result.decomposition.width()
            );
            if let Some(p) = trace {
                write_file(&p, &io::trace_to_json(&g, &result.trace))?;
            }
            emit(out.as_deref(), &io::decomposition_to_json(&g, &result.decomposition))
        }
        Command::Pipeline {
            graph,
            decomposition,
            solver,
            out,
            trace,
            check,
            json,
        } => {
            let g = read_graph(&graph)?;
            let options = PipelineOptions {
                heuristic: solver.heuristic,
                exact: solver.exact(),
                check_each_step: check,
            };
            let report = match decomposition {
                Some(p) => run_pipeline_with_seed(&g, &read_decomposition(&g, &p)?, &options)?,
                None => run_pipeline(&g, &options)
                    .context("pipeline failed; pass --heuristic if the exact solver gave up")?,
            };
            if let Some(p) = out {
                write_file(&p, &io::decomposition_to_json(&g, &report.decomposition))?;
            }
            if let Some(p) = trace {
                write_file(&p, &io::trace_to_json(&g, &report.trace))?;
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("{}", report.summary_line());
            }
            if !report.ok {
                return Err(violation(json!({ "violations": report.violations })));
            }
            Ok(())
        }
        Command::Verify {
            graph,
            decomposition,
            connected,
            stable,
        } => verify(&graph, &decomposition, connected, stable),
        Command::Bramble {
            graph,
            bramble,
            mode,
            limit,
        } => {
            let g = read_graph(&graph)?;
            let text = String::from_utf8(read_input(&bramble)?)?;
            let b = io::bramble_from_json(&g, &text)?;
            bramble_command(&g, &b, mode, limit)
        }
        Command::Report {
            graph,
            solver,
            bramble,
            json,
        } => {
            let g = read_graph(&graph)?;
            let b = match bramble {
                Some(p) => Some(io::bramble_from_json(&g, &String::from_utf8(read_input(&p)?)?)?),
                None => None,
            };
            let r = report::build(&g, solver.heuristic, &solver.exact(), b.as_ref())?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                print!("{}", report::lines(&r));
            }
            Ok(())
        }
        Command::ExportDot {
            graph,
            decomposition,
            trace,
            out,
        } => {
            let g = read_graph(&graph)?;
            let d = read_decomposition(&g, &decomposition)?;
            let t = match trace {
                Some(p) => Some(io::trace_from_json(&g, &String::from_utf8(read_input(&p)?)?)?),
                None => None,
            };
            emit(out.as_deref(), &io::decomposition_to_dot(&g, &d, t.as_deref()))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn generate(
    family: Family,
    n: usize,
    k: usize,
    density: f64,
    seed: u64,
    out: Option<PathBuf>,
    witness: Option<PathBuf>,
    bramble: Option<PathBuf>,
) -> Result<()> {
    use rand::SeedableRng;
    let g = match family {
        Family::Cycle => families::cycle_graph(n)?,
        Family::Complete => families::complete_graph(n)?,
        Family::SubdividedComplete => families::subdivided_complete(n, k)?,
        Family::SubdividedGrid => families::subdivided_grid(n)?,
        Family::Duality => families::duality_graph(n)?,
        Family::Random => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            families::random_connected(n, density, &mut rng)
        }
    };
    if let Some(p) = witness {
        let d = match family {
            Family::SubdividedComplete => families::subdivided_complete_witness(n, k)?,
            Family::Duality => families::duality_witness(n)?.decomposition,
            Family::Complete => Decomposition::single_bag(&g, g.all_vertices()),
            _ => bail!("this family has no explicit decomposition"),
        };
        write_file(&p, &io::decomposition_to_json(&g, &d))?;
    }
    if let Some(p) = bramble {
        let b = match family {
            Family::Cycle => {
                let c = Cycle::new(&g, g.vertices().collect())?;
                brambles::cycle_arc_bramble(&g, &c, n / 2)
            }
            Family::SubdividedGrid => {
                let c = families::subdivided_grid_boundary(&g, n)?;
                brambles::cycle_arc_bramble(&g, &c, c.len() / 2)
            }
            Family::Duality => families::duality_b2(&g, n)?,
            _ => bail!("this family has no built-in bramble"),
        };
        write_file(&p, &io::bramble_to_json(&g, &b))?;
    }
    emit(out.as_deref(), &g.to_edge_list())
}

fn verify(graph: &Path, decomposition: &Path, connected: bool, stable: bool) -> Result<()> {
    let g = read_graph(graph)?;
    let d = read_decomposition(&g, decomposition)?;
    let report = decomp::validate(&g, &d)?;
    let mut problems = Vec::new();
    if !report.t1_ok {
        problems.push(json!({ "axiom": "vertex cover", "uncovered": report.uncovered_vertices.iter().map(|&v| g.label(v)).collect::<Vec<_>>() }));
    }
    if !report.t2_ok {
        problems.push(json!({ "axiom": "edge cover", "uncovered": report.uncovered_edges.iter().map(|&(a, b)| [g.label(a), g.label(b)]).collect::<Vec<_>>() }));
    }
    if !report.t3_ok {
        problems.push(json!({ "axiom": "subtree", "vertices": report.split_vertices.iter().map(|(v, _)| g.label(*v)).collect::<Vec<_>>() }));
    }
    if connected {
        if let Some(t) = decomp::disconnected_bag(&g, &d)? {
            problems.push(json!({ "property": "connected", "node": t }));
        }
    }
    if stable && report.is_valid() {
        if let Some(v) = decomp::stability_violation(&g, &d)? {
            problems.push(json!({ "property": "stable", "edge": [v.edge.0, v.edge.1], "side": v.side }));
        }
    }
    if !problems.is_empty() {
        return Err(violation(json!({ "valid": report.is_valid(), "problems": problems })));
    }
    println!("valid width={} nodes={}", d.width(), d.len());
    Ok(())
}

fn bramble_command(g: &Graph, b: &Bramble, mode: BrambleMode, limit: usize) -> Result<()> {
    if let Some(v) = brambles::check_bramble(g, b) {
        let detail = match v {
            brambles::BrambleViolation::Disconnected(i) => json!({ "disconnected_element": i }),
            brambles::BrambleViolation::NotTouching(i, j) => json!({ "not_touching": [i, j] }),
        };
        return Err(violation(json!({ "bramble": false, "violation": detail })));
    }
    match mode {
        BrambleMode::Check => println!("bramble elements={}", b.len()),
        BrambleMode::Order => {
            let (k, w) = brambles::order_with(g, b, limit)?;
            println!("order={k} witness={}", g.set_labels(&w).join(","));
        }
        BrambleMode::ConnectedOrder => {
            let (k, w) = brambles::connected_order_with(g, b, limit)?;
            println!("connected_order={k} witness={}", g.set_labels(&w).join(","));
        }
        BrambleMode::Bound => {
            let r = brambles::check_connected_order_bound(g, b)?;
            println!(
                "connected_order={} tw={} ell={} bound={} {}",
                r.connected_order,
                r.tw,
                r.ell,
                r.bound,
                if r.holds { "OK" } else { "VIOLATION" }
            );
            if !r.holds {
                return Err(violation(serde_json::to_value(&r)?));
            }
        }
    }
    Ok(())
}
