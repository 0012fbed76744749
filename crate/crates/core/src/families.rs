//! Generators for the example graphs, their explicit decompositions and
//! brambles. Labels are stable strings so fixtures and traces diff cleanly.

use rand::Rng;

use crate::brambles::Bramble;
use crate::decomp::Decomposition;
use crate::error::{Error, Result};
use crate::graph::{components, Cycle, Graph, GraphBuilder};
use crate::vertex_set::VertexSet;

fn path_labels(from: &str, to: &str, internal: impl Iterator<Item = String>) -> Vec<String> {
    let mut out = vec![from.to_string()];
    out.extend(internal);
    out.push(to.to_string());
    out
}

fn add_labelled_path(b: &mut GraphBuilder, labels: &[String]) -> Result<()> {
    let ids: Vec<usize> = labels.iter().map(|l| b.add_vertex(l)).collect();
    b.add_path(&ids)
}

fn ids(g: &Graph, labels: &[String]) -> Result<Vec<usize>> {
    labels.iter().map(|l| g.vertex_or_err(l)).collect()
}

/// `C_m` on labels `1..=m`.
pub fn cycle_graph(m: usize) -> Result<Graph> {
    if m < 3 {
        return Err(Error::Precondition(format!("cycle needs m >= 3, got {m}")));
    }
    let mut b = GraphBuilder::new();
    let labels: Vec<String> = (1..=m).chain([1]).map(|i| i.to_string()).collect();
    add_labelled_path(&mut b, &labels)?;
    Ok(b.build())
}

/// `K_m` on labels `1..=m`.
pub fn complete_graph(m: usize) -> Result<Graph> {
    if m < 1 {
        return Err(Error::Precondition("complete graph needs m >= 1".into()));
    }
    let mut b = GraphBuilder::new();
    for i in 1..=m {
        b.add_vertex(&i.to_string());
    }
    for i in 1..=m {
        for j in i + 1..=m {
            b.add_labelled_edge(&i.to_string(), &j.to_string())?;
        }
    }
    Ok(b.build())
}

/// Random spanning tree plus each remaining pair independently with
/// probability `density`.
pub fn random_connected<R: Rng>(n: usize, density: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    let p = density.clamp(0.0, 1.0);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("edges are in range and loop-free")
}

// ---------------------------------------------------------------------------
// Subdivided complete graphs

fn branch(i: usize) -> String {
    format!("a_{i}")
}

/// `K_n` with every edge subdivided by `k` new vertices. Branch vertices are
/// `a_1..a_n`; the path between `a_i` and `a_j` (`i < j`) runs through
/// `s_i_j_1..s_i_j_k` starting next to `a_i`.
pub fn subdivided_complete(n: usize, k: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::Precondition(format!("need n >= 3, got {n}")));
    }
    let mut b = GraphBuilder::new();
    for i in 1..=n {
        b.add_vertex(&branch(i));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            add_labelled_path(&mut b, &branch_path_labels(k, i, j))?;
        }
    }
    Ok(b.build())
}

fn branch_path_labels(k: usize, i: usize, j: usize) -> Vec<String> {
    let (lo, hi) = (i.min(j), i.max(j));
    let mut p = path_labels(
        &branch(lo),
        &branch(hi),
        (1..=k).map(|m| format!("s_{lo}_{hi}_{m}")),
    );
    if i > j {
        p.reverse();
    }
    p
}

/// Vertex ids of the path from `a_i` to `a_j`.
pub fn branch_path(g: &Graph, k: usize, i: usize, j: usize) -> Result<Vec<usize>> {
    ids(g, &branch_path_labels(k, i, j))
}

/// `(n−1)(k+1) − ⌊(k+1)/2⌋`, the connected tree-width of the subdivided
/// complete graph.
pub fn subdivided_complete_width(n: usize, k: usize) -> usize {
    (n - 1) * (k + 1) - k.div_ceil(2)
}

/// Connected decomposition of width [`subdivided_complete_width`].
///
/// With `a = a_1`, `b = a_2`: a star rooted at `s` (node 0) with leaves `t`
/// (node 1) and one leaf per path between two other branch vertices. `V_s`
/// holds every path from `b` to the other branch vertices plus the
/// `⌈(k+1)/2⌉` vertices of the `b`–`a` path following `b`; `V_t` mirrors it
/// from `a`.
pub fn subdivided_complete_witness(n: usize, k: usize) -> Result<Decomposition> {
    let g = subdivided_complete(n, k)?;
    let (a, b) = (1, 2);
    let half = (k + 1).div_ceil(2);
    let hub = |x: usize, y: usize| -> Result<VertexSet> {
        let mut bag = g.empty_set();
        for c in 3..=n {
            for v in branch_path(&g, k, x, c)? {
                bag.insert(v);
            }
        }
        let towards = branch_path(&g, k, x, y)?;
        bag.insert(towards[0]);
        for &v in &towards[1..=half] {
            bag.insert(v);
        }
        Ok(bag)
    };
    let mut bags = vec![hub(b, a)?, hub(a, b)?];
    let mut edges = vec![(0, 1)];
    for c in 3..=n {
        for d in c + 1..=n {
            edges.push((0, bags.len()));
            bags.push(g.vertex_set(branch_path(&g, k, c, d)?));
        }
    }
    Decomposition::new(&g, bags, &edges)?.rerooted(0)
}

/// The component of `G − X` containing every branch vertex outside `X`, or
/// `None` if `X` contains all of them or they are split.
pub fn branch_component(g: &Graph, n: usize, x: &VertexSet) -> Option<VertexSet> {
    let rest = g.all_vertices().difference(x);
    let outside: Vec<usize> = (1..=n)
        .map(|i| g.vertex(&branch(i)).expect("branch vertex"))
        .filter(|&v| !x.contains(v))
        .collect();
    let first = *outside.first()?;
    let comp = components(g, &rest).into_iter().find(|c| c.contains(first))?;
    outside.iter().all(|&v| comp.contains(v)).then_some(comp)
}

// ---------------------------------------------------------------------------
// Subdivided grids

/// `n × n` grid `g_r_c` whose interior edges are subdivided once, by
/// `h_r_c` (between columns `c` and `c+1`) or `v_r_c` (rows `r` and `r+1`).
pub fn subdivided_grid(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::Precondition(format!("need n >= 2, got {n}")));
    }
    let cell = |r: usize, c: usize| format!("g_{r}_{c}");
    let mut b = GraphBuilder::new();
    for r in 1..=n {
        for c in 1..=n {
            b.add_vertex(&cell(r, c));
        }
    }
    for r in 1..=n {
        for c in 1..=n {
            if c < n {
                let on_boundary = r == 1 || r == n;
                let mid = (!on_boundary).then(|| format!("h_{r}_{c}"));
                add_labelled_path(&mut b, &path_labels(&cell(r, c), &cell(r, c + 1), mid.into_iter()))?;
            }
            if r < n {
                let on_boundary = c == 1 || c == n;
                let mid = (!on_boundary).then(|| format!("v_{r}_{c}"));
                add_labelled_path(&mut b, &path_labels(&cell(r, c), &cell(r + 1, c), mid.into_iter()))?;
            }
        }
    }
    Ok(b.build())
}

/// The boundary cycle of [`subdivided_grid`], of length `4(n−1)`.
pub fn subdivided_grid_boundary(g: &Graph, n: usize) -> Result<Cycle> {
    let mut labels = Vec::new();
    for c in 1..n {
        labels.push(format!("g_1_{c}"));
    }
    for r in 1..n {
        labels.push(format!("g_{r}_{n}"));
    }
    for c in (2..=n).rev() {
        labels.push(format!("g_{n}_{c}"));
    }
    for r in (2..=n).rev() {
        labels.push(format!("g_{r}_1"));
    }
    Cycle::new(g, ids(g, &labels)?)
}

// ---------------------------------------------------------------------------
// The duality counterexample

fn x(i: usize, j: usize) -> String {
    format!("x{i}_{j}")
}

fn y(k: usize) -> String {
    format!("y_{k}")
}

fn c(idx: usize) -> String {
    format!("c_{idx}")
}

/// Length of the connection from `x^i_j` to `y_k`.
fn connection_len(n: usize, j: usize, k: usize) -> usize {
    if k == n + j {
        n
    } else {
        5 * n
    }
}

fn connection_labels(n: usize, i: usize, j: usize, k: usize) -> Vec<String> {
    let len = connection_len(n, j, k);
    path_labels(&x(i, j), &y(k), (1..len).map(|m| format!("p{i}_{j}_{k}_{m}")))
}

/// Three paths `x^i_1..x^i_{2n}` and a path `y_1..y_{4n}`, joined pairwise
/// by internally disjoint paths of length `5n` (length `n` when `k = n+j`),
/// plus a cycle `c_0..c_{16n+1}` whose antipodal vertices `a = c_0` and
/// `b = c_{8n+1}` attach to the path ends.
pub fn duality_graph(n: usize) -> Result<Graph> {
    if n < 4 {
        return Err(Error::Precondition(format!("need n >= 4, got {n}")));
    }
    let mut b = GraphBuilder::new();
    for i in 0..3 {
        let p: Vec<String> = (1..=2 * n).map(|j| x(i, j)).collect();
        add_labelled_path(&mut b, &p)?;
    }
    let q: Vec<String> = (1..=4 * n).map(y).collect();
    add_labelled_path(&mut b, &q)?;
    let len_c = 16 * n + 2;
    let cyc: Vec<String> = (0..len_c).chain([0]).map(c).collect();
    add_labelled_path(&mut b, &cyc)?;
    for i in 0..3 {
        for j in 1..=2 * n {
            for k in 1..=4 * n {
                add_labelled_path(&mut b, &connection_labels(n, i, j, k))?;
            }
        }
    }
    let (a, bb) = (c(0), c(8 * n + 1));
    b.add_labelled_edge(&a, &x(0, 1))?;
    b.add_labelled_edge(&a, &y(1))?;
    b.add_labelled_edge(&bb, &x(0, 2 * n))?;
    b.add_labelled_edge(&bb, &y(4 * n))?;
    Ok(b.build())
}

/// Vertex ids of the connection from `x^i_j` to `y_k`.
pub fn duality_connection(g: &Graph, n: usize, i: usize, j: usize, k: usize) -> Result<Vec<usize>> {
    ids(g, &connection_labels(n, i, j, k))
}

/// Decomposition of the duality graph together with a connected superset of
/// every bag.
#[derive(Clone, Debug)]
pub struct DualityWitness {
    pub decomposition: Decomposition,
    pub supersets: Vec<VertexSet>,
    pub names: Vec<String>,
}

/// Root `t0` with bag `Q ∪ {a, b}`; for each `i` a path `t^i_1..t^i_{2n−1}`
/// with bags `V_{t0} ∪ {x^i_j, x^i_{j+1}}` and one leaf per connection; and
/// for each arc `S^j` of `C − {a, b}` a path `s^j_0 s^j_1` where `s^j_0`
/// holds `a`, `b` and the `3n` arc vertices nearest `a`, and `s^j_1` holds
/// `b` and its `5n+1` nearest arc vertices. The two arc bags share the
/// vertex at distance `3n` from `a`.
pub fn duality_witness(n: usize) -> Result<DualityWitness> {
    let g = duality_graph(n)?;
    let v = |l: String| g.vertex_or_err(&l);
    let (a, b) = (v(c(0))?, v(c(8 * n + 1))?);
    let mut root = g.vertex_set((1..=4 * n).map(|k| v(y(k))).collect::<Result<Vec<_>>>()?);
    root.insert(a);
    root.insert(b);

    let mut bags = vec![root.clone()];
    let mut supersets = vec![root.clone()];
    let mut names = vec!["t0".to_string()];
    let mut edges = Vec::new();
    let leaf = |bags: &mut Vec<VertexSet>,
                    supersets: &mut Vec<VertexSet>,
                    names: &mut Vec<String>,
                    edges: &mut Vec<(usize, usize)>,
                    parent: usize,
                    i: usize,
                    j: usize,
                    k: usize|
     -> Result<()> {
        let p = g.vertex_set(duality_connection(&g, n, i, j, k)?);
        edges.push((parent, bags.len()));
        names.push(format!("P{i}_{j}_{k}"));
        supersets.push(p.clone());
        bags.push(p);
        Ok(())
    };
    for i in 0..3 {
        let mut parent = 0;
        for j in 1..2 * n {
            let mut bag = root.clone();
            bag.insert(v(x(i, j))?);
            bag.insert(v(x(i, j + 1))?);
            let mut sup = bag.clone();
            for u in duality_connection(&g, n, i, j, n + j)? {
                sup.insert(u);
            }
            let node = bags.len();
            edges.push((parent, node));
            names.push(format!("t{i}_{j}"));
            bags.push(bag);
            supersets.push(sup);
            for k in 1..=4 * n {
                leaf(&mut bags, &mut supersets, &mut names, &mut edges, node, i, j, k)?;
            }
            if j == 2 * n - 1 {
                for k in 1..=4 * n {
                    leaf(&mut bags, &mut supersets, &mut names, &mut edges, node, i, j + 1, k)?;
                }
            }
            parent = node;
        }
    }
    // arcs listed from a towards b
    let arcs: [Vec<usize>; 2] = [
        (1..=8 * n).map(|i| v(c(i))).collect::<Result<_>>()?,
        (8 * n + 2..=16 * n + 1).rev().map(|i| v(c(i))).collect::<Result<_>>()?,
    ];
    let p0: Vec<usize> = (1..=2 * n).map(|j| v(x(0, j))).collect::<Result<_>>()?;
    for (j, arc) in arcs.iter().enumerate() {
        let mut near_a = g.vertex_set(arc[..3 * n].iter().copied());
        near_a.insert(a);
        near_a.insert(b);
        let mut sup = near_a.clone();
        for &u in &p0 {
            sup.insert(u);
        }
        let s0 = bags.len();
        edges.push((0, s0));
        names.push(format!("s{}_0", j + 1));
        bags.push(near_a);
        supersets.push(sup);

        let mut near_b = g.vertex_set(arc[3 * n - 1..].iter().copied());
        near_b.insert(b);
        edges.push((s0, bags.len()));
        names.push(format!("s{}_1", j + 1));
        supersets.push(near_b.clone());
        bags.push(near_b);
    }
    let decomposition = Decomposition::new(&g, bags, &edges)?.rerooted(0)?;
    Ok(DualityWitness {
        decomposition,
        supersets,
        names,
    })
}

/// The cycle `C′` of length `12n+2`: `a`, the first arc of `C`, `b`, then
/// `Q` back to `a`.
pub fn duality_cycle(g: &Graph, n: usize) -> Result<Cycle> {
    let mut labels: Vec<String> = (0..=8 * n + 1).map(c).collect();
    labels.extend((1..=4 * n).rev().map(y));
    Cycle::new(g, ids(g, &labels)?)
}

/// All segments of `C′` of length `6n+1`, i.e. `6n+2` consecutive vertices.
pub fn duality_b2(g: &Graph, n: usize) -> Result<Bramble> {
    let cyc = duality_cycle(g, n)?;
    let vs = cyc.vertices();
    let m = vs.len();
    Ok(Bramble::new(
        (0..m)
            .map(|s| g.vertex_set((0..6 * n + 2).map(|d| vs[(s + d) % m])))
            .collect(),
    ))
}

/// `B^i_{j,k}`: every connection from `x^i_j` to `Q`, with all ends on `Q`
/// except `y_k` removed.
pub fn duality_b1_element(g: &Graph, n: usize, i: usize, j: usize, k: usize) -> Result<VertexSet> {
    let mut set = g.empty_set();
    for kk in 1..=4 * n {
        let p = duality_connection(g, n, i, j, kk)?;
        let keep_end = kk == k;
        for (pos, &u) in p.iter().enumerate() {
            if pos + 1 < p.len() || keep_end {
                set.insert(u);
            }
        }
    }
    Ok(set)
}

/// Index triples `(i, j, k)` of the `24n²` elements of `𝓑₁`.
pub fn duality_b1_indices(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..3).flat_map(move |i| {
        (1..=2 * n).flat_map(move |j| (1..=4 * n).map(move |k| (i, j, k)))
    })
}

/// `𝓑₁`, one element at a time.
pub fn duality_b1<'g>(g: &'g Graph, n: usize) -> impl Iterator<Item = Result<VertexSet>> + 'g {
    duality_b1_indices(n).map(move |(i, j, k)| duality_b1_element(g, n, i, j, k))
}

/// `G − x^0_j`, with the vertex map into the smaller graph.
pub fn duality_without_x0(g: &Graph, j: usize) -> Result<(Graph, Vec<Option<usize>>)> {
    let mut keep = g.all_vertices();
    keep.remove(g.vertex_or_err(&x(0, j))?);
    Ok(g.induced(&keep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{is_connected_decomposition, validate};
    use crate::graph::is_connected_set;

    #[test]
    fn basic_families() {
        let c6 = cycle_graph(6).unwrap();
        assert_eq!((c6.n(), c6.m()), (6, 6));
        assert!(c6.vertices().all(|v| c6.degree(v) == 2));
        let k4 = complete_graph(4).unwrap();
        assert_eq!((k4.n(), k4.m()), (4, 6));
        assert_eq!(cycle_graph(3).unwrap().fingerprint(), complete_graph(3).unwrap().fingerprint());
        assert!(cycle_graph(2).is_err());
    }

    #[test]
    fn subdivided_complete_counts() {
        let g = subdivided_complete(3, 1).unwrap();
        assert_eq!((g.n(), g.m()), (6, 6));
        assert!(g.vertices().all(|v| g.degree(v) == 2));
        let g = subdivided_complete(4, 1).unwrap();
        assert_eq!((g.n(), g.m()), (10, 12));
        let k4 = subdivided_complete(4, 0).unwrap();
        assert_eq!((k4.n(), k4.m()), (4, 6));
        assert_eq!(branch_path(&g, 1, 2, 1).unwrap().len(), 3);
    }

    #[test]
    fn subdivided_complete_witness_widths() {
        for (n, k) in [(3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 2), (5, 1), (5, 2)] {
            let g = subdivided_complete(n, k).unwrap();
            let d = subdivided_complete_witness(n, k).unwrap();
            assert!(validate(&g, &d).unwrap().is_valid(), "({n},{k})");
            assert!(is_connected_decomposition(&g, &d).unwrap());
            assert_eq!(d.width(), subdivided_complete_width(n, k), "({n},{k})");
        }
        assert_eq!(subdivided_complete_witness(3, 1).unwrap().len(), 2);
        assert_eq!(subdivided_complete_width(4, 2), 8);
    }

    #[test]
    fn branch_component_examples() {
        let g = subdivided_complete(4, 1).unwrap();
        let x = g.labelled_set(&["a_1", "s_1_2_1"]).unwrap();
        let comp = branch_component(&g, 4, &x).unwrap();
        assert!(comp.contains(g.vertex("a_2").unwrap()));
        assert!(!comp.contains(g.vertex("a_1").unwrap()));
        let all = g.labelled_set(&["a_1", "a_2", "a_3", "a_4"]).unwrap();
        assert!(branch_component(&g, 4, &all).is_none());
    }

    #[test]
    fn subdivided_grid_shapes() {
        let g = subdivided_grid(2).unwrap();
        assert_eq!((g.n(), g.m()), (4, 4));
        let g = subdivided_grid(3).unwrap();
        assert_eq!(g.n(), 13);
        assert_eq!(g.m(), 16);
        let g = subdivided_grid(4).unwrap();
        let c = subdivided_grid_boundary(&g, 4).unwrap();
        assert_eq!(c.len(), 12);
    }

    #[test]
    fn duality_counts() {
        let g = duality_graph(4).unwrap();
        assert_eq!((g.n(), g.m()), (7018, 7402));
        assert_eq!(g.degree(g.vertex("c_0").unwrap()), 4);
        assert!(g.is_connected());
        for j in 1..=8 {
            let short = (1..=16)
                .filter(|&k| duality_connection(&g, 4, 1, j, k).unwrap().len() == 5)
                .collect::<Vec<_>>();
            assert_eq!(short, [4 + j]);
        }
        assert!(duality_graph(3).is_err());
    }

    #[test]
    fn duality_witness_shape() {
        let n = 4;
        let g = duality_graph(n).unwrap();
        let w = duality_witness(n).unwrap();
        let d = &w.decomposition;
        assert!(validate(&g, d).unwrap().is_valid());
        assert_eq!(d.bag(0).len(), 4 * n + 2);
        for (t, name) in w.names.iter().enumerate() {
            let (bag, sup) = (d.bag(t), &w.supersets[t]);
            assert!(bag.is_subset(sup));
            assert!(is_connected_set(&g, sup), "{name}");
            assert!(sup.len() <= 5 * n + 3, "{name}");
            if name.starts_with('t') && name != "t0" {
                assert_eq!((bag.len(), sup.len()), (4 * n + 4, 5 * n + 3));
            }
            if name.ends_with("_0") && name.starts_with('s') {
                assert_eq!((bag.len(), sup.len()), (3 * n + 2, 5 * n + 2));
            }
        }
    }

    #[test]
    fn duality_brambles_small_checks() {
        let n = 4;
        let g = duality_graph(n).unwrap();
        let b2 = duality_b2(&g, n).unwrap();
        assert_eq!(b2.len(), 12 * n + 2);
        assert!(b2.elements().iter().all(|e| e.len() == 6 * n + 2));
        assert_eq!(duality_cycle(&g, n).unwrap().len(), 12 * n + 2);
        assert_eq!(duality_b1_indices(n).count(), 24 * n * n);
        let e = duality_b1_element(&g, n, 0, 1, 3).unwrap();
        assert!(is_connected_set(&g, &e));
        assert!(e.contains(g.vertex("y_3").unwrap()));
        assert!(!e.contains(g.vertex("y_4").unwrap()));
    }
}
