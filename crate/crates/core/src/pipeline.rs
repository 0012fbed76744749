//! End-to-end run: tree-width seed → stabilize → connected construction, per
//! component, with the width bound `w·(ℓ−2)` checked at the end.

use serde::Serialize;

use crate::connectify::{run_construction, run_construction_checked, PathAddition};
use crate::cycles::{cyclomatic_number, ell_via_min_basis};
use crate::decomp::{is_connected_decomposition, is_stable, validate, Decomposition};
use crate::error::{Error, Result};
use crate::graph::{components, Graph};
use crate::solver::{exact_treewidth_with, minfill_decomposition, stabilize, ExactConfig};
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    /// Seed with min-fill instead of the exact solver.
    pub heuristic: bool,
    pub exact: ExactConfig,
    /// Re-validate validity, stability and bookkeeping after every addition.
    pub check_each_step: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub vertices: usize,
    pub seed_width: usize,
    pub ell: Option<usize>,
    pub bound: Option<usize>,
    pub achieved: usize,
    pub additions: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    /// Width of the seed decomposition; the tree-width when `tw_exact`.
    pub tw: usize,
    pub tw_exact: bool,
    pub ell: Option<usize>,
    pub bound: Option<usize>,
    pub achieved: usize,
    pub ok: bool,
    pub violations: Vec<String>,
    pub components: Vec<ComponentReport>,
    #[serde(skip)]
    pub decomposition: Decomposition,
    #[serde(skip)]
    pub trace: Vec<PathAddition>,
}

impl PipelineReport {
    pub fn summary_line(&self) -> String {
        let opt = |v: Option<usize>| v.map_or("none".to_string(), |x| x.to_string());
        format!(
            "tw={} ell={} bound={} achieved={} {}",
            self.tw,
            opt(self.ell),
            opt(self.bound),
            self.achieved,
            if self.ok { "OK" } else { "VIOLATION" }
        )
    }
}

struct Part {
    report: ComponentReport,
    decomposition: Decomposition,
    trace: Vec<PathAddition>,
    violations: Vec<String>,
}

fn seed(g: &Graph, options: &PipelineOptions) -> Result<(usize, Decomposition)> {
    if options.heuristic {
        let d = minfill_decomposition(g);
        Ok((d.width(), d))
    } else {
        exact_treewidth_with(g, &options.exact)
    }
}

/// Processes one connected graph from a seed decomposition.
fn run_connected(g: &Graph, seed: Decomposition, options: &PipelineOptions) -> Result<Part> {
    let seed_width = seed.width();
    // stabilize renumbers nodes, so a given root survives only on stable seeds
    let rooted = match seed.root() {
        Some(r) if is_stable(g, &seed)? => seed.rerooted(r)?,
        _ => stabilize(g, &seed)?.rerooted(0)?,
    };
    let out = if options.check_each_step {
        run_construction_checked(g, &rooted)?
    } else {
        run_construction(g, &rooted)?
    };
    let achieved = out.decomposition.width();
    let mut violations = Vec::new();
    if !validate(g, &out.decomposition)?.is_valid() {
        violations.push("output decomposition is invalid".into());
    }
    if !is_connected_decomposition(g, &out.decomposition)? {
        violations.push("output decomposition has a disconnected bag".into());
    }
    for s in out.stats.iter().filter(|s| !s.within_bound()) {
        violations.push(format!(
            "node {} grew to {} > m·(|V_t|−1)+1 = {}",
            s.node,
            s.final_size,
            s.bound()
        ));
    }
    for s in out.stats.iter().filter(|s| s.additions + 1 > s.original_size.max(1)) {
        violations.push(format!("node {} received {} additions", s.node, s.additions));
    }
    let (ell, bound) = if cyclomatic_number(g) > 0 {
        let ell = ell_via_min_basis(g)?;
        let bound = seed_width * (ell - 2);
        if achieved > bound {
            violations.push(format!("achieved width {achieved} exceeds bound {bound}"));
        }
        if let Some(p) = out.trace.iter().find(|p| p.path.len() + 1 > ell) {
            violations.push(format!(
                "admissible path with {} vertices exceeds ℓ−1 = {}",
                p.path.len(),
                ell - 1
            ));
        }
        (Some(ell), Some(bound))
    } else {
        if achieved > seed_width {
            violations.push(format!(
                "forest output width {achieved} exceeds seed width {seed_width}"
            ));
        }
        (None, None)
    };
    Ok(Part {
        report: ComponentReport {
            vertices: g.n(),
            seed_width,
            ell,
            bound,
            achieved,
            additions: out.trace.len(),
        },
        decomposition: out.decomposition,
        trace: out.trace,
        violations,
    })
}

/// Runs the pipeline from scratch. Disconnected graphs are handled per
/// component; the component decompositions are joined by tree edges.
pub fn run_pipeline(g: &Graph, options: &PipelineOptions) -> Result<PipelineReport> {
    let comps = components(g, &g.all_vertices());
    if comps.len() <= 1 {
        let (_, d) = seed(g, options)?;
        return assemble(g, vec![(g.all_vertices(), run_connected(g, d, options)?)], options);
    }
    let mut parts = Vec::new();
    for comp in comps {
        let (h, _) = g.induced(&comp);
        let (_, d) = seed(&h, options)?;
        parts.push((comp, run_connected(&h, d, options)?));
    }
    assemble(g, parts, options)
}

/// Runs the pipeline from a given decomposition of a connected graph. A
/// stable seed is used as is, keeping its root; otherwise it is stabilized
/// first and rooted at node 0.
pub fn run_pipeline_with_seed(
    g: &Graph,
    seed: &Decomposition,
    options: &PipelineOptions,
) -> Result<PipelineReport> {
    seed.check_graph(g)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if !validate(g, seed)?.is_valid() {
        return Err(Error::Precondition("seed decomposition is invalid".into()));
    }
    let part = run_connected(g, seed.clone(), options)?;
    let mut report = assemble(g, vec![(g.all_vertices(), part)], options)?;
    report.tw_exact = false;
    Ok(report)
}

fn assemble(
    g: &Graph,
    parts: Vec<(VertexSet, Part)>,
    options: &PipelineOptions,
) -> Result<PipelineReport> {
    let single = parts.len() == 1;
    let mut bags = Vec::new();
    let mut edges = Vec::new();
    let mut trace = Vec::new();
    let mut violations = Vec::new();
    let mut reports = Vec::new();
    let mut roots = Vec::new();
    for (comp, part) in parts {
        let offset = bags.len();
        let map: Vec<usize> = comp.to_vec();
        let lift = |v: usize| if single { v } else { map[v] };
        let d = &part.decomposition;
        for t in d.nodes() {
            bags.push(g.vertex_set(d.bag(t).iter().map(lift)));
        }
        for (a, b) in d.tree_edges() {
            edges.push((a + offset, b + offset));
        }
        roots.push(offset + d.root().unwrap_or(0));
        for r in &part.trace {
            trace.push(PathAddition {
                node: r.node + offset,
                path: r.path.iter().map(|&v| lift(v)).collect(),
                child: r.child.map(|c| c + offset),
                ..r.clone()
            });
        }
        violations.extend(part.violations);
        reports.push(part.report);
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    let decomposition = if bags.is_empty() {
        Decomposition::single_bag(g, g.empty_set())
    } else {
        Decomposition::new(g, bags, &edges)?.rerooted(roots[0])?
    };
    let tw = reports.iter().map(|r| r.seed_width).max().unwrap_or(0);
    let achieved = decomposition.width();
    let per_part = reports.iter().map(|r| r.achieved).max().unwrap_or(0);
    if achieved != per_part {
        violations.push(format!(
            "joined width {achieved} differs from component maximum {per_part}"
        ));
    }
    if !validate(g, &decomposition)?.is_valid() {
        violations.push("joined decomposition is invalid".into());
    }
    let ell = reports.iter().filter_map(|r| r.ell).max();
    let bound = ell.map(|l| tw * (l - 2));
    if let Some(b) = bound {
        if achieved > b {
            violations.push(format!("achieved width {achieved} exceeds bound {b}"));
        }
    }
    Ok(PipelineReport {
        tw,
        tw_exact: !options.heuristic,
        ell,
        bound,
        achieved,
        ok: violations.is_empty(),
        violations,
        components: reports,
        decomposition,
        trace,
    })
}
