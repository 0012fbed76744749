//! Brambles, their (connected) order, and weak connected tree-width.

use itertools::Itertools;
use serde::Serialize;

use crate::connectify::ConstructionState;
use crate::cycles::{cyclomatic_number, ell_via_min_basis};
use crate::decomp::{validate, Decomposition};
use crate::error::{Error, Result};
use crate::graph::{enumerate_connected_sets, is_connected_set, Cycle, Graph};
use crate::solver::{exact_treewidth, stabilize};
use crate::vertex_set::VertexSet;

/// Default vertex limit for the brute-force order computations.
pub const DEFAULT_ORDER_LIMIT: usize = 16;

/// A family of vertex sets; see [`check_bramble`] for the defining
/// conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bramble {
    elements: Vec<VertexSet>,
}

impl Bramble {
    pub fn new(elements: Vec<VertexSet>) -> Self {
        Bramble { elements }
    }

    pub fn from_labels<S: AsRef<str>>(g: &Graph, elements: &[Vec<S>]) -> Result<Self> {
        elements
            .iter()
            .map(|e| g.labelled_set(e))
            .collect::<Result<_>>()
            .map(Bramble::new)
    }

    pub fn elements(&self) -> &[VertexSet] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// True when `set` meets every element.
    pub fn is_hit_by(&self, set: &VertexSet) -> bool {
        self.elements.iter().all(|e| e.meets(set))
    }

    fn support(&self, g: &Graph) -> VertexSet {
        let mut s = g.empty_set();
        for e in &self.elements {
            s.union_with(e);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BrambleViolation {
    Disconnected(usize),
    NotTouching(usize, usize),
}

/// Two sets touch when they intersect or some edge joins them.
pub fn touches(g: &Graph, x: &VertexSet, y: &VertexSet) -> bool {
    x.meets(y) || x.iter().any(|v| g.neighbors(v).iter().any(|&w| y.contains(w)))
}

/// First element that is empty or disconnected, or first pair that does not
/// touch.
pub fn check_bramble(g: &Graph, b: &Bramble) -> Option<BrambleViolation> {
    let es = b.elements();
    if let Some(i) = es.iter().position(|e| !is_connected_set(g, e)) {
        return Some(BrambleViolation::Disconnected(i));
    }
    (0..es.len())
        .tuple_combinations()
        .find(|&(i, j)| !touches(g, &es[i], &es[j]))
        .map(|(i, j)| BrambleViolation::NotTouching(i, j))
}

pub fn is_bramble(g: &Graph, b: &Bramble) -> bool {
    check_bramble(g, b).is_none()
}

/// Minimum size of a connected set meeting every element, with a witness.
pub fn connected_order(g: &Graph, b: &Bramble) -> Result<(usize, VertexSet)> {
    connected_order_with(g, b, DEFAULT_ORDER_LIMIT)
}

pub fn connected_order_with(g: &Graph, b: &Bramble, limit: usize) -> Result<(usize, VertexSet)> {
    if b.is_empty() {
        return Ok((0, g.empty_set()));
    }
    if g.n() > limit {
        return Err(Error::SizeLimit {
            what: "connected order vertices",
            size: g.n(),
            limit,
        });
    }
    enumerate_connected_sets(g, g.n())
        .find(|s| b.is_hit_by(s))
        .map(|s| (s.len(), s))
        .ok_or_else(|| Error::NotABramble("no connected set meets every element".into()))
}

/// Minimum size of any set meeting every element, with a witness.
pub fn order(g: &Graph, b: &Bramble) -> Result<(usize, VertexSet)> {
    order_with(g, b, DEFAULT_ORDER_LIMIT)
}

pub fn order_with(g: &Graph, b: &Bramble, limit: usize) -> Result<(usize, VertexSet)> {
    let support = b.support(g).to_vec();
    if support.len() > limit {
        return Err(Error::SizeLimit {
            what: "bramble support vertices",
            size: support.len(),
            limit,
        });
    }
    for size in 0..=support.len() {
        for combo in support.iter().copied().combinations(size) {
            let set = g.vertex_set(combo);
            if b.is_hit_by(&set) {
                return Ok((size, set));
            }
        }
    }
    unreachable!("the support meets every non-empty element")
}

/// A node whose bag meets every element of the bramble.
pub fn covering_part(g: &Graph, d: &Decomposition, b: &Bramble) -> Result<usize> {
    d.check_graph(g)?;
    d.nodes()
        .find(|&t| b.is_hit_by(d.bag(t)))
        .ok_or_else(|| {
            let detail = if !validate(g, d).map(|r| r.is_valid()).unwrap_or(false) {
                "the decomposition is invalid"
            } else if !is_bramble(g, b) {
                "the family is not a bramble"
            } else {
                "no covering part found"
            };
            Error::Precondition(detail.into())
        })
}

/// All arcs of `len` consecutive vertices along a cycle.
pub fn cycle_arc_bramble(g: &Graph, c: &Cycle, len: usize) -> Bramble {
    let vs = c.vertices();
    let m = vs.len();
    let len = len.clamp(1, m);
    let count = if len == m { 1 } else { m };
    Bramble::new(
        (0..count)
            .map(|i| g.vertex_set((0..len).map(|d| vs[(i + d) % m])))
            .collect(),
    )
}

/// Upper bound on weak connected tree-width from connected supersets of
/// each bag of a stable minimum-width decomposition.
#[derive(Clone, Debug)]
pub struct WctwUpper {
    pub value: usize,
    pub tw: usize,
    pub ell: usize,
    pub decomposition: Decomposition,
    /// Connected superset `U_t ⊇ V_t` for every node.
    pub supersets: Vec<VertexSet>,
}

/// For every node `t`, roots the decomposition at `t` and runs only the root
/// step of the construction; the resulting root bag is connected, and every
/// path it used has length at most `⌊ℓ/2⌋`.
pub fn wctw_upper(g: &Graph) -> Result<WctwUpper> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if cyclomatic_number(g) == 0 {
        return Err(Error::NoCycle);
    }
    let ell = ell_via_min_basis(g)?;
    let (tw, d) = exact_treewidth(g)?;
    let d = stabilize(g, &d)?;
    let half = ell / 2;
    let mut supersets = Vec::with_capacity(d.len());
    for t in d.nodes() {
        let mut state = ConstructionState::new(g, &d.rerooted(t)?)?;
        state.process_node(t)?;
        let u = state.working().bag(t).clone();
        if let Some(p) = state.trace().iter().find(|p| p.len() > half) {
            return Err(Error::InternalInvariant(format!(
                "root path of length {} exceeds ⌊ℓ/2⌋ = {half}",
                p.len()
            )));
        }
        let bound = half * d.bag(t).len().saturating_sub(1) + 1;
        if u.len() > bound {
            return Err(Error::InternalInvariant(format!(
                "root bag grew to {} > {bound}",
                u.len()
            )));
        }
        supersets.push(u);
    }
    let value = supersets.iter().map(VertexSet::len).max().unwrap_or(1) - 1;
    Ok(WctwUpper {
        value,
        tw,
        ell,
        decomposition: d,
        supersets,
    })
}

/// Default vertex limit for [`wctw_exact_small`].
pub const DEFAULT_WCTW_LIMIT: usize = 12;

/// Exact weak connected tree-width of a small graph.
///
/// Refining any decomposition to a minimal triangulation only shrinks bags,
/// and the cost of a bag (smallest connected superset) is monotone, so an
/// optimal decomposition comes from an elimination ordering; those are
/// searched by a subset recursion. The search is skipped when the given
/// brambles already match the upper bound.
pub fn wctw_exact_small(g: &Graph) -> Result<usize> {
    wctw_exact_small_with(g, &[], DEFAULT_WCTW_LIMIT)
}

pub fn wctw_exact_small_with(g: &Graph, brambles: &[Bramble], limit: usize) -> Result<usize> {
    let n = g.n();
    if n > limit.min(20) {
        return Err(Error::SizeLimit {
            what: "weak connected tree-width vertices",
            size: n,
            limit,
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if cyclomatic_number(g) == 0 {
        return Err(Error::NoCycle);
    }
    let upper = wctw_upper(g)?;
    let mut lower = upper.tw;
    for b in brambles {
        let (co, _) = connected_order(g, b)?;
        lower = lower.max(co.saturating_sub(1));
    }
    if lower == upper.value {
        return Ok(lower);
    }

    let full = (1usize << n) - 1;
    let masks: Vec<usize> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | (1 << u)))
        .collect();
    // smallest connected superset of every subset
    let mut csup = vec![usize::MAX; 1 << n];
    for s in enumerate_connected_sets(g, n) {
        let mask = s.iter().fold(0, |m, v| m | (1 << v));
        csup[mask] = s.len();
    }
    csup[0] = 0;
    for mask in (0..full).rev() {
        for v in 0..n {
            if mask & (1 << v) == 0 {
                csup[mask] = csup[mask].min(csup[mask | (1 << v)]);
            }
        }
    }
    // best[S]: least possible max cost when S is eliminated first
    let mut best = vec![usize::MAX; 1 << n];
    best[0] = 0;
    for set in 1..=full {
        let mut value = usize::MAX;
        let mut bits = set;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = set & !(1 << v);
            if best[rest] >= value {
                continue;
            }
            let bag = higher_neighbors(&masks, rest, v) | (1 << v);
            value = value.min(best[rest].max(csup[bag] - 1));
        }
        best[set] = value;
    }
    let exact = best[full];
    if exact < lower || exact > upper.value {
        return Err(Error::InternalInvariant(format!(
            "exact value {exact} outside [{lower}, {}]",
            upper.value
        )));
    }
    Ok(exact)
}

fn higher_neighbors(masks: &[usize], eliminated: usize, v: usize) -> usize {
    let mut comp = 1 << v;
    let mut reach = masks[v];
    loop {
        let grow = reach & eliminated & !comp;
        if grow == 0 {
            break;
        }
        comp |= grow;
        let mut bits = grow;
        while bits != 0 {
            let u = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            reach |= masks[u];
        }
    }
    reach & !eliminated & !(1 << v)
}

/// Outcome of the check `connected order ≤ tw·⌊ℓ/2⌋ + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectedOrderReport {
    pub connected_order: usize,
    pub tw: usize,
    pub ell: usize,
    pub bound: usize,
    pub holds: bool,
}

pub fn check_connected_order_bound(g: &Graph, b: &Bramble) -> Result<ConnectedOrderReport> {
    if cyclomatic_number(g) == 0 {
        return Err(Error::NoCycle);
    }
    let (co, _) = connected_order(g, b)?;
    let (tw, _) = exact_treewidth(g)?;
    let ell = ell_via_min_basis(g)?;
    let bound = tw * (ell / 2) + 1;
    Ok(ConnectedOrderReport {
        connected_order: co,
        tw,
        ell,
        bound,
        holds: co <= bound,
    })
}
