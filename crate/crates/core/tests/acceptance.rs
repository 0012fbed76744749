//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Tolerances are exact integers throughout; time budgets are
//! listed next to each criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ctw_core::brambles::{
    check_bramble, check_connected_order_bound, connected_order, cycle_arc_bramble, is_bramble,
    touches, wctw_exact_small, Bramble,
};
use ctw_core::connectify::run_construction_checked;
use ctw_core::cycles::{cyclomatic_number, ell, ell_via_min_basis, ell_with_certificate, is_geodesic_cycle};
use ctw_core::decomp::{is_connected_decomposition, is_stable, validate};
use ctw_core::families::*;
use ctw_core::graph::{enumerate_connected_sets, is_connected_set};
use ctw_core::pipeline::{run_pipeline, run_pipeline_with_seed, PipelineOptions};
use ctw_core::solver::{exact_treewidth, minfill_decomposition, stabilize};
use ctw_core::{Cycle, Decomposition, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn run(id: u32, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    let result = match result {
        Ok(_) if elapsed > budget => Err(format!("took {elapsed:.2?}, budget {budget:?}")),
        other => other,
    };
    match &result {
        Ok(detail) => println!("[PASS] {id}. {name}: {detail} ({elapsed:.2?})"),
        Err(why) => println!("[FAIL] {id}. {name}: {why} ({elapsed:.2?})"),
    }
    result.is_ok()
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn subdivided_complete_family() -> Outcome {
    let mut widths = Vec::new();
    for n in 3..=5 {
        for k in 1..=2 {
            let g = e(subdivided_complete(n, k))?;
            let (tw, _) = e(exact_treewidth(&g))?;
            ensure!(tw == n - 1, "({n},{k}): tw {tw} != {}", n - 1);
            let l = e(ell(&g))?;
            ensure!(l == 3 * (k + 1), "({n},{k}): ell {l} != {}", 3 * (k + 1));
            let w = e(subdivided_complete_witness(n, k))?;
            ensure!(e(validate(&g, &w))?.is_valid(), "({n},{k}): witness invalid");
            ensure!(e(is_connected_decomposition(&g, &w))?, "({n},{k}): witness disconnected");
            let r = subdivided_complete_width(n, k);
            ensure!(w.width() == r, "({n},{k}): witness width {} != r = {r}", w.width());
            let report = e(run_pipeline(&g, &PipelineOptions::default()))?;
            let cap = (n - 1) * (3 * k + 1);
            ensure!(report.ok, "({n},{k}): {:?}", report.violations);
            ensure!(report.achieved <= cap, "({n},{k}): achieved {} > {cap}", report.achieved);
            widths.push(format!("({n},{k}):{}/{r}", report.achieved));
        }
    }
    Ok(format!("achieved/witness widths {}", widths.join(" ")))
}

fn c6_golden_trace() -> Outcome {
    let g = e(cycle_graph(6))?;
    let bags = [&["1", "2", "6"][..], &["2", "5", "6"], &["2", "3", "5"], &["3", "4", "5"]]
        .iter()
        .map(|b| g.labelled_set(b))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let d = e(e(Decomposition::new(&g, bags, &[(0, 1), (1, 2), (2, 3)]))?.rerooted(0))?;
    let report = e(run_pipeline_with_seed(&g, &d, &PipelineOptions::default()))?;
    ensure!(report.trace.len() == 1, "{} additions", report.trace.len());
    let path: Vec<&str> = report.trace[0].path.iter().map(|&v| g.label(v)).collect();
    ensure!(path == ["2", "3", "4", "5"], "path {path:?}");
    let final_bags: Vec<Vec<String>> = report.decomposition.bags().iter().map(|b| g.set_labels(b)).collect();
    let expected = [
        vec!["1", "2", "6"],
        vec!["2", "3", "4", "5", "6"],
        vec!["2", "3", "4", "5"],
        vec!["3", "4", "5"],
    ];
    ensure!(final_bags == expected, "bags {final_bags:?}");
    ensure!(report.achieved == 4 && report.bound == Some(8), "{}", report.summary_line());
    Ok(report.summary_line())
}

fn invariant_suite() -> Outcome {
    let corpus = common::random_corpus(120, 12, 2024);
    let mut additions = 0;
    let mut max_ratio = (0, 1);
    for (idx, g) in corpus.iter().enumerate() {
        let (tw, exact) = e(exact_treewidth(g))?;
        // min-fill seeds are wider and produce many more additions
        for (kind, d) in [("exact", exact), ("min-fill", minfill_decomposition(g))] {
            let w0 = d.width();
            let s = e(stabilize(g, &d))?;
            ensure!(s.width() <= w0, "graph {idx} ({kind}): stabilize widened");
            for root in s.nodes() {
                let out = e(run_construction_checked(g, &e(s.rerooted(root))?))
                    .map_err(|m| format!("graph {idx} ({kind}, root {root}): {m}"))?;
                additions += out.trace.len();
                for st in &out.stats {
                    ensure!(st.within_bound(), "graph {idx} ({kind}, root {root}): node {} size {} > {}", st.node, st.final_size, st.bound());
                    ensure!(st.additions < st.original_size.max(1), "graph {idx} ({kind}, root {root}): node {} additions {}", st.node, st.additions);
                }
                let w = out.decomposition.width();
                if cyclomatic_number(g) > 0 {
                    let l = e(ell(g))?;
                    for p in &out.trace {
                        ensure!(p.path.len() < l, "graph {idx} ({kind}, root {root}): path with {} vertices, ell {l}", p.path.len());
                    }
                    ensure!(w <= w0 * (l - 2), "graph {idx} ({kind}, root {root}): width {w} > {w0}·({l}−2)");
                    if kind == "exact" && w * max_ratio.1 > max_ratio.0 * tw * (l - 2) {
                        max_ratio = (w, tw * (l - 2));
                    }
                } else {
                    ensure!(w == w0, "graph {idx} ({kind}, root {root}): forest width changed");
                }
            }
        }
    }
    Ok(format!(
        "{} graphs × 2 seeds × every root, {additions} additions checked step by step, worst width/tw·(ℓ−2) {}/{}",
        corpus.len(),
        max_ratio.0,
        max_ratio.1
    ))
}

fn ell_equivalence() -> Outcome {
    let mut corpus = common::random_corpus(120, 12, 2024);
    corpus.push(e(cycle_graph(6))?);
    corpus.push(e(complete_graph(4))?);
    corpus.push(e(subdivided_complete(4, 1))?);
    corpus.push(e(subdivided_grid(3))?);
    let mut checked = 0;
    for (idx, g) in corpus.iter().enumerate() {
        if cyclomatic_number(g) == 0 {
            ensure!(ell(g).is_err() && ell_via_min_basis(g).is_err(), "graph {idx}: forest accepted");
            continue;
        }
        let cert = e(ell_with_certificate(g))?;
        let fast = e(ell_via_min_basis(g))?;
        ensure!(cert.ell == fast, "graph {idx}: ell {} vs basis {fast}", cert.ell);
        ensure!(cert.basis.rank() == cert.cyclomatic, "graph {idx}: rank at ell not full");
        ensure!(cert.rank_below < cert.cyclomatic, "graph {idx}: rank already full below ell");
        checked += 1;
    }
    Ok(format!("{checked} graphs with cycles, zero mismatches"))
}

fn full_cycle(g: &Graph) -> Result<Cycle, String> {
    e(Cycle::new(g, g.vertices().collect()))
}

fn bramble_suite() -> Outcome {
    let mut corpus: Vec<(Graph, Bramble)> = Vec::new();
    for m in 4..=8 {
        let g = e(cycle_graph(m))?;
        let b = cycle_arc_bramble(&g, &full_cycle(&g)?, m / 2);
        ensure!(is_bramble(&g, &b), "C{m}: arcs are not a bramble");
        let (co, _) = e(connected_order(&g, &b))?;
        ensure!(co == m.div_ceil(2) + 1, "C{m}: connected order {co}");
        corpus.push((g, b));
    }
    let k4 = e(complete_graph(4))?;
    let singletons = Bramble::new(k4.vertices().map(|v| k4.vertex_set([v])).collect());
    corpus.push((k4.clone(), singletons.clone()));
    let sc = e(subdivided_complete(3, 1))?;
    // the triangle a_1 a_2 a_3 through its subdivision vertices
    let mut seq = e(branch_path(&sc, 1, 1, 2))?;
    seq.extend(&e(branch_path(&sc, 1, 2, 3))?[1..]);
    let back = e(branch_path(&sc, 1, 3, 1))?;
    seq.extend(&back[1..back.len() - 1]);
    let sc_cycle = e(Cycle::new(&sc, seq))?;
    let sc_arcs = cycle_arc_bramble(&sc, &sc_cycle, 3);
    corpus.push((sc.clone(), sc_arcs.clone()));

    for (g, b) in &corpus {
        let r = e(check_connected_order_bound(g, b))?;
        ensure!(r.holds, "order bound fails: {r:?}");
    }

    let c4 = e(cycle_graph(4))?;
    let c6 = e(cycle_graph(6))?;
    let chain_cases = [
        ("C4", c4.clone(), cycle_arc_bramble(&c4, &full_cycle(&c4)?, 2)),
        ("C6", c6.clone(), cycle_arc_bramble(&c6, &full_cycle(&c6)?, 3)),
        ("K4", k4.clone(), singletons),
        ("subdivided K3", sc, sc_arcs),
    ];
    let mut chain = Vec::new();
    for (name, g, b) in chain_cases {
        let (co, _) = e(connected_order(&g, &b))?;
        let wctw = e(wctw_exact_small(&g))?;
        let ctw = common::brute_force_ctw(&g);
        ensure!(co - 1 <= wctw && wctw <= ctw, "{name}: {} ≤ {wctw} ≤ {ctw} fails", co - 1);
        chain.push(format!("{name}: {}≤{wctw}≤{ctw}", co - 1));
    }
    Ok(format!("{} brambles within bound; {}", corpus.len(), chain.join(", ")))
}

fn subdivided_lower_bound() -> Outcome {
    let (n, k) = (4, 1);
    let r = subdivided_complete_width(n, k);
    let g = e(subdivided_complete(n, k))?;
    ensure!(g.n() == 10 && r == 5, "unexpected instance");
    let comps: Vec<_> = enumerate_connected_sets(&g, r)
        .map(|x| branch_component(&g, n, &x).ok_or_else(|| format!("no C(X) for {:?}", g.set_labels(&x))))
        .collect::<Result<_, _>>()?;
    let mut pairs = 0usize;
    for (i, a) in comps.iter().enumerate() {
        for b in &comps[i..] {
            ensure!(touches(&g, a, b), "components do not touch");
            pairs += 1;
        }
    }
    Ok(format!("{} connected sets, {pairs} pairs, zero failures", comps.len()))
}

fn duality_checks() -> Outcome {
    let n = 4;
    let g = e(duality_graph(n))?;
    ensure!((g.n(), g.m()) == (7018, 7402), "counts {} / {}", g.n(), g.m());
    let w = e(duality_witness(n))?;
    let d = &w.decomposition;
    ensure!(e(validate(&g, d))?.is_valid(), "witness invalid");
    let mut largest = 0;
    for (t, name) in w.names.iter().enumerate() {
        let sup = &w.supersets[t];
        ensure!(d.bag(t).is_subset(sup), "{name}: bag not inside superset");
        ensure!(is_connected_set(&g, sup), "{name}: superset disconnected");
        ensure!(sup.len() <= 5 * n + 3, "{name}: superset of size {}", sup.len());
        if name.starts_with('s') && name.ends_with("_0") {
            ensure!(sup.len() == 5 * n + 2, "{name}: superset of size {}", sup.len());
        }
        largest = largest.max(sup.len());
    }
    let b2 = e(duality_b2(&g, n))?;
    ensure!(b2.len() == 12 * n + 2, "|B2| = {}", b2.len());
    if let Some(v) = check_bramble(&g, &b2) {
        return Err(format!("B2 violation {v:?}"));
    }
    let b1: Vec<_> = duality_b1(&g, n).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure!(b1.len() == 24 * n * n, "|B1| = {}", b1.len());
    ensure!(b1.iter().all(|x| is_connected_set(&g, x)), "B1 element disconnected");
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..1000 {
        let (i, j) = (rng.gen_range(0..b1.len()), rng.gen_range(0..b1.len()));
        ensure!(touches(&g, &b1[i], &b1[j]), "B1 elements {i}, {j} do not touch");
    }
    let c_prime = e(duality_cycle(&g, n))?;
    for j in 1..=2 * n {
        let (h, map) = e(duality_without_x0(&g, j))?;
        let seq: Vec<usize> = c_prime.vertices().iter().map(|&v| map[v].expect("C′ avoids P0")).collect();
        let c = e(Cycle::new(&h, seq))?;
        ensure!(is_geodesic_cycle(&h, &c), "C′ not geodesic without x0_{j}");
    }
    Ok(format!(
        "7018/7402, {} nodes, supersets ≤ {largest}, B2 {} segments, B1 {} elements (1000 pairs), C′ geodesic ×{} (ctw ≥ 6n not machine-checked)",
        d.len(),
        b2.len(),
        b1.len(),
        2 * n
    ))
}

fn grid_corollary() -> Outcome {
    let g = e(subdivided_grid(4))?;
    let c = e(subdivided_grid_boundary(&g, 4))?;
    ensure!(c.len() == 12, "boundary length {}", c.len());
    ensure!(is_geodesic_cycle(&g, &c), "boundary not geodesic");
    let l = e(ell(&g))?;
    ensure!(l <= 8, "ell {l} > 8");
    let (tw, _) = e(exact_treewidth(&g))?;
    ensure!(tw * l >= c.len(), "tw {tw} < 12/{l}");
    Ok(format!("k=12 ell={l} tw={tw}"))
}

fn stabilize_contract() -> Outcome {
    let corpus = common::random_corpus(100, 12, 77);
    for (idx, g) in corpus.iter().enumerate() {
        let d = minfill_decomposition(g);
        let s = e(stabilize(g, &d))?;
        ensure!(e(validate(g, &s))?.is_valid(), "graph {idx}: invalid");
        ensure!(e(is_stable(g, &s))?, "graph {idx}: not stable");
        ensure!(s.width() <= d.width(), "graph {idx}: width grew");
        let (tw, opt) = e(exact_treewidth(g))?;
        let so = e(stabilize(g, &opt))?;
        ensure!(e(is_stable(g, &so))? && so.width() == tw, "graph {idx}: no stable width-tw result");
    }
    Ok(format!("{} graphs, zero violations", corpus.len()))
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        run(1, "subdivided complete graphs", secs(10), subdivided_complete_family),
        run(2, "C6 golden trace", secs(10), c6_golden_trace),
        run(3, "construction invariants", secs(120), invariant_suite),
        run(4, "ell oracle equivalence", secs(120), ell_equivalence),
        run(5, "bramble suite", secs(60), bramble_suite),
        run(6, "subdivided K4 lower-bound ingredient", secs(60), subdivided_lower_bound),
        run(7, "duality counterexample properties", secs(300), duality_checks),
        run(8, "geodesic cycle bound on subdivided grid", secs(60), grid_corollary),
        run(9, "stabilize contract", secs(60), stabilize_contract),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
