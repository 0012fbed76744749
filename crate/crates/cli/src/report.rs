use anyhow::Result;
use serde::Serialize;

use ctw_core::brambles::{self, Bramble};
use ctw_core::cycles::{self, cyclomatic_number, enumerate_cycles_upto, is_geodesic_cycle};
use ctw_core::graph::components;
use ctw_core::solver::{self, ExactConfig};
use ctw_core::Graph;

/// Largest graph for which cycles are enumerated to find the longest
/// geodesic one.
const GEODESIC_SCAN_LIMIT: usize = 16;

#[derive(Debug, Serialize)]
pub struct Report {
    pub n: usize,
    pub m: usize,
    pub components: usize,
    pub tw: usize,
    pub tw_exact: bool,
    pub ell: Option<usize>,
    pub girth: Option<usize>,
    pub longest_geodesic_cycle: Option<usize>,
    /// `tw·(ℓ−2)`, or `tw` for forests.
    pub ctw_bound: usize,
    /// `tw·⌊ℓ/2⌋`.
    pub wctw_bound: Option<usize>,
    pub wctw_upper: Option<usize>,
    /// `tw·⌊ℓ/2⌋ + 1`.
    pub connected_order_bound: Option<usize>,
    pub bramble_connected_order: Option<usize>,
    /// `2(c−1)(c−2)` for the certified `c ≤ cbn`; equals the ctw bound when
    /// the bramble attains `cbn`.
    pub ctw_bound_via_cbn: Option<usize>,
    pub note: Option<String>,
}

pub fn build(g: &Graph, heuristic: bool, exact: &ExactConfig, bramble: Option<&Bramble>) -> Result<Report> {
    let (tw, tw_exact) = if heuristic {
        (solver::minfill_decomposition(g).width(), false)
    } else {
        match solver::exact_treewidth_with(g, exact) {
            Ok((k, _)) => (k, true),
            Err(_) => (solver::minfill_decomposition(g).width(), false),
        }
    };
    let has_cycle = cyclomatic_number(g) > 0;
    let ell = if has_cycle { Some(cycles::ell_via_min_basis(g)?) } else { None };
    let longest_geodesic_cycle = (g.n() <= GEODESIC_SCAN_LIMIT && has_cycle)
        .then(|| {
            enumerate_cycles_upto(g, g.n())
                .filter(|c| is_geodesic_cycle(g, c))
                .map(|c| c.len())
                .max()
        })
        .flatten();
    let wctw_upper = if has_cycle && tw_exact && g.is_connected() {
        brambles::wctw_upper(g).ok().map(|u| u.value)
    } else {
        None
    };
    let bramble_connected_order = match bramble {
        Some(b) => Some(brambles::connected_order(g, b)?.0),
        None => None,
    };
    Ok(Report {
        n: g.n(),
        m: g.m(),
        components: components(g, &g.all_vertices()).len(),
        tw,
        tw_exact,
        ell,
        girth: cycles::girth(g),
        longest_geodesic_cycle,
        ctw_bound: ell.map_or(tw, |l| tw * (l - 2)),
        wctw_bound: ell.map(|l| tw * (l / 2)),
        wctw_upper,
        connected_order_bound: ell.map(|l| tw * (l / 2) + 1),
        bramble_connected_order,
        ctw_bound_via_cbn: bramble_connected_order
            .filter(|&c| c >= 2)
            .map(|c| 2 * (c - 1) * (c - 2)),
        note: (!has_cycle).then(|| "no cycle: ell undefined; ctw = tw <= 1".to_string()),
    })
}

/// `key=value` lines carrying the same fields as the JSON form.
pub fn lines(r: &Report) -> String {
    let value = serde_json::to_value(r).expect("report serializes");
    let mut out = String::new();
    if let serde_json::Value::Object(map) = value {
        for (k, v) in map {
            let text = match v {
                serde_json::Value::Null => "none".to_string(),
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            };
            out.push_str(&format!("{k}={text}\n"));
        }
    }
    out
}
