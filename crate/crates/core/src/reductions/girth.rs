//! Shortest cycles through an edge or a node, and s–t shortest paths, in
//! terms of each other. Weights must be nonnegative; INF means no cycle or
//! no path. Unweighted graphs have every weight 1, so the weight-based
//! corrections below reduce to the familiar ±1 and ±2.

use super::Ctx;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::iomachine::{sat_add, Word, INF};

fn edge_of(g: &Graph, e: usize) -> Result<crate::graph::Edge> {
    g.edge(e).ok_or_else(|| Error::Argument(format!("no edge {e} (graph has {})", g.m())))
}

fn check_node(g: &Graph, v: usize) -> Result<()> {
    if v >= g.n() {
        return Err(Error::Argument(format!("node {v} outside 0..{}", g.n())));
    }
    Ok(())
}

/// Subtract a correction unless the value is infinite.
fn minus(x: Word, c: Word) -> Word {
    if x >= INF {
        INF
    } else {
        x - c
    }
}

/// Copy of g with the edges rejected by `keep` left out.
fn filtered(g: &Graph, keep: impl Fn(usize, &crate::graph::Edge) -> bool) -> Graph {
    let mut h = Graph::new(g.n(), g.is_directed(), g.is_weighted());
    for (i, e) in g.edges().iter().enumerate() {
        if keep(i, e) {
            h.add_edge(e.u, e.v, e.w).expect("nodes in range");
        }
    }
    h.set_weighted(g.is_weighted());
    h
}

/// Shortest cycle through edge e = (u, v): delete e and close the shortest
/// v ⇝ u path with e.
pub fn girth_edge_via_stsp(
    cx: &mut Ctx,
    g: &Graph,
    e: usize,
    solver: &mut impl FnMut(&Graph, usize, usize) -> Result<Word>,
) -> Result<Word> {
    girth_edge_via_stsp_with(cx, g, e, 0, solver)
}

/// [`girth_edge_via_stsp`] with `delta` added to the correction.
pub fn girth_edge_via_stsp_with(
    cx: &mut Ctx,
    g: &Graph,
    e: usize,
    delta: Word,
    solver: &mut impl FnMut(&Graph, usize, usize) -> Result<Word>,
) -> Result<Word> {
    let edge = edge_of(g, e)?;
    if edge.u == edge.v {
        return Ok(edge.w);
    }
    let h = g.without_edge(e);
    cx.graph_target(3 * g.m(), &h)?;
    let d = cx.call(|| solver(&h, edge.v, edge.u))?;
    Ok(minus(sat_add(d, edge.w), -delta))
}

/// s–t distance from one girth-through-edge call: add e′ = (t, s) of
/// weight 1 and subtract it from the shortest cycle through e′. In an
/// undirected graph existing s–t edges would close a shorter cycle with
/// e′, so they are removed first and compared at the end.
pub fn stsp_via_girth_edge(
    cx: &mut Ctx,
    g: &Graph,
    s: usize,
    t: usize,
    solver: &mut impl FnMut(&Graph, usize) -> Result<Word>,
) -> Result<Word> {
    check_node(g, s)?;
    check_node(g, t)?;
    if s == t {
        return Ok(0);
    }
    let joins = |e: &crate::graph::Edge| {
        if g.is_directed() {
            e.u == t && e.v == s
        } else {
            (e.u == s && e.v == t) || (e.u == t && e.v == s)
        }
    };
    let direct = if g.is_directed() {
        INF
    } else {
        g.edges().iter().filter(|e| joins(e)).map(|e| e.w).min().unwrap_or(INF)
    };
    let mut h = filtered(g, |_, e| !joins(e));
    h.add_edge(t, s, 1)?;
    h.set_weighted(g.is_weighted());
    let idx = h.m() - 1;
    cx.graph_target(3 * g.m(), &h)?;
    let c = cx.call(|| solver(&h, idx))?;
    Ok(minus(c, 1).min(direct))
}

/// s–t distance from one girth-through-vertex call on a new node v′ wired
/// t → v′ → s with weight-1 edges.
pub fn stsp_via_girth_vertex(
    cx: &mut Ctx,
    g: &Graph,
    s: usize,
    t: usize,
    solver: &mut impl FnMut(&Graph, usize) -> Result<Word>,
) -> Result<Word> {
    stsp_via_girth_vertex_with(cx, g, s, t, 0, solver)
}

/// [`stsp_via_girth_vertex`] with `delta` added to the correction.
pub fn stsp_via_girth_vertex_with(
    cx: &mut Ctx,
    g: &Graph,
    s: usize,
    t: usize,
    delta: Word,
    solver: &mut impl FnMut(&Graph, usize) -> Result<Word>,
) -> Result<Word> {
    check_node(g, s)?;
    check_node(g, t)?;
    if s == t {
        return Ok(0);
    }
    let mut h = g.clone();
    let v = h.add_node();
    h.add_edge(t, v, 1)?;
    h.add_edge(v, s, 1)?;
    h.set_weighted(g.is_weighted());
    cx.graph_target(3 * g.m(), &h)?;
    let c = cx.call(|| solver(&h, v))?;
    Ok(minus(c, 2 + delta))
}

/// Shortest cycle through edge (u, v) of weight w: subdivide it as
/// u –w– v′ –1– v and ask for the shortest cycle through v′.
pub fn girth_edge_via_girth_vertex(
    cx: &mut Ctx,
    g: &Graph,
    e: usize,
    solver: &mut impl FnMut(&Graph, usize) -> Result<Word>,
) -> Result<Word> {
    let edge = edge_of(g, e)?;
    if edge.u == edge.v {
        return Ok(edge.w);
    }
    let mut h = g.without_edge(e);
    let mid = h.add_node();
    h.add_edge(edge.u, mid, edge.w)?;
    h.add_edge(mid, edge.v, 1)?;
    h.set_weighted(g.is_weighted());
    cx.graph_target(3 * g.m(), &h)?;
    let c = cx.call(|| solver(&h, mid))?;
    Ok(minus(c, 1))
}

/// Split v of a directed graph: v keeps its incoming arcs and a new node
/// v_out takes the outgoing ones (a self-loop becomes v_out → v).
fn split_directed(g: &Graph, v: usize) -> Result<(Graph, usize)> {
    if !g.is_directed() {
        return Err(Error::Argument("expected a directed graph".into()));
    }
    check_node(g, v)?;
    let mut h = Graph::new(g.n() + 1, true, g.is_weighted());
    let out = g.n();
    for e in g.edges() {
        let u = if e.u == v { out } else { e.u };
        h.add_edge(u, e.v, e.w)?;
    }
    h.set_weighted(g.is_weighted());
    Ok((h, out))
}

/// Shortest directed cycle through v: split v, join the halves by
/// e′ = v → v_out of weight 1, and subtract e′ from the cycle through it.
pub fn girth_vertex_via_girth_edge_directed(
    cx: &mut Ctx,
    g: &Graph,
    v: usize,
    solver: &mut impl FnMut(&Graph, usize) -> Result<Word>,
) -> Result<Word> {
    let (mut h, out) = split_directed(g, v)?;
    h.add_edge(v, out, 1)?;
    h.set_weighted(g.is_weighted());
    let idx = h.m() - 1;
    cx.graph_target(3 * g.m(), &h)?;
    let c = cx.call(|| solver(&h, idx))?;
    Ok(minus(c, 1))
}

/// Shortest directed cycle through v as the v_out ⇝ v distance after the
/// split. The path uses exactly the cycle's arcs, so no correction applies.
pub fn girth_vertex_via_stsp_directed(
    cx: &mut Ctx,
    g: &Graph,
    v: usize,
    solver: &mut impl FnMut(&Graph, usize, usize) -> Result<Word>,
) -> Result<Word> {
    let (h, out) = split_directed(g, v)?;
    cx.graph_target(3 * g.m(), &h)?;
    cx.call(|| solver(&h, out, v))
}

/// Edges at v other than self-loops, in input order, plus the lightest loop.
fn incident(g: &Graph, v: usize) -> Result<(Vec<usize>, Word)> {
    if g.is_directed() {
        return Err(Error::Argument("expected an undirected graph".into()));
    }
    check_node(g, v)?;
    let mut inc = Vec::new();
    let mut loops = INF;
    for (i, e) in g.edges().iter().enumerate() {
        if e.u == v && e.v == v {
            loops = loops.min(e.w);
        } else if e.u == v || e.v == v {
            inc.push(i);
        }
    }
    Ok((inc, loops))
}

fn log2_ceil(d: usize) -> usize {
    (usize::BITS - (d - 1).leading_zeros()) as usize
}

/// G′_i: v's incident edge number k moves to a new node v_{i,1} when bit i
/// of k is set and stays at v otherwise.
fn split_by_bit(g: &Graph, v: usize, inc: &[usize], bit: usize) -> (Graph, usize) {
    let mut h = Graph::new(g.n() + 1, false, g.is_weighted());
    let other = g.n();
    let mut k = 0;
    for (i, e) in g.edges().iter().enumerate() {
        let (mut a, mut b) = (e.u, e.v);
        if k < inc.len() && inc[k] == i {
            if (k >> bit) & 1 == 1 {
                if a == v {
                    a = other;
                } else {
                    b = other;
                }
            }
            k += 1;
        }
        h.add_edge(a, b, e.w).expect("nodes in range");
    }
    h.set_weighted(g.is_weighted());
    (h, other)
}

/// Shortest undirected cycle through v from ⌈log₂ deg v⌉ s–t calls. Every
/// two incident edges differ in some bit of their numbers, so some split
/// puts them on opposite halves, and the halves' distance is then the
/// cycle length itself.
pub fn girth_vertex_via_stsp_undirected(
    cx: &mut Ctx,
    g: &Graph,
    v: usize,
    solver: &mut impl FnMut(&Graph, usize, usize) -> Result<Word>,
) -> Result<Word> {
    let (inc, mut best) = incident(g, v)?;
    if inc.len() < 2 {
        return Ok(best);
    }
    for bit in 0..log2_ceil(inc.len()) {
        let (h, other) = split_by_bit(g, v, &inc, bit);
        cx.graph_target(3 * g.m(), &h)?;
        best = best.min(cx.call(|| solver(&h, v, other))?);
    }
    Ok(best)
}

/// As [`girth_vertex_via_stsp_undirected`], joining the halves with a
/// weight-1 edge and asking for the shortest cycle through it.
pub fn girth_vertex_via_girth_edge_undirected(
    cx: &mut Ctx,
    g: &Graph,
    v: usize,
    solver: &mut impl FnMut(&Graph, usize) -> Result<Word>,
) -> Result<Word> {
    let (inc, mut best) = incident(g, v)?;
    if inc.len() < 2 {
        return Ok(best);
    }
    for bit in 0..log2_ceil(inc.len()) {
        let (mut h, other) = split_by_bit(g, v, &inc, bit);
        h.add_edge(v, other, 1).expect("nodes in range");
        h.set_weighted(g.is_weighted());
        let idx = h.m() - 1;
        cx.graph_target(3 * g.m(), &h)?;
        best = best.min(minus(cx.call(|| solver(&h, idx))?, 1));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gnp, gnp_weighted};
    use crate::oracles::{girth_through_edge_brute, girth_through_vertex_brute, stsp_brute};

    fn stsp(g: &Graph, s: usize, t: usize) -> Result<Word> {
        stsp_brute(g, s, t)
    }

    fn ge(g: &Graph, e: usize) -> Result<Word> {
        girth_through_edge_brute(g, e)
    }

    fn gv(g: &Graph, v: usize) -> Result<Word> {
        girth_through_vertex_brute(g, v)
    }

    fn check_all(g: &Graph) {
        let cx = &mut Ctx::new();
        for e in 0..g.m() {
            let want = ge(g, e).unwrap();
            assert_eq!(girth_edge_via_stsp(cx, g, e, &mut stsp).unwrap(), want, "edge {e} via stsp");
            assert_eq!(girth_edge_via_girth_vertex(cx, g, e, &mut gv).unwrap(), want, "edge {e} via vertex");
        }
        for v in 0..g.n() {
            let want = gv(g, v).unwrap();
            if g.is_directed() {
                assert_eq!(girth_vertex_via_girth_edge_directed(cx, g, v, &mut ge).unwrap(), want, "node {v}");
                assert_eq!(girth_vertex_via_stsp_directed(cx, g, v, &mut stsp).unwrap(), want, "node {v}");
            } else {
                assert_eq!(girth_vertex_via_stsp_undirected(cx, g, v, &mut stsp).unwrap(), want, "node {v}");
                assert_eq!(girth_vertex_via_girth_edge_undirected(cx, g, v, &mut ge).unwrap(), want, "node {v}");
            }
        }
        for s in 0..g.n() {
            for t in 0..g.n() {
                let want = stsp_brute(g, s, t).unwrap();
                assert_eq!(stsp_via_girth_edge(cx, g, s, t, &mut ge).unwrap(), want, "{s}->{t} via edge");
                assert_eq!(stsp_via_girth_vertex(cx, g, s, t, &mut gv).unwrap(), want, "{s}->{t} via vertex");
            }
        }
    }

    #[test]
    fn examples() {
        let c5 = Graph::cycle(5);
        assert_eq!(girth_edge_via_stsp(&mut Ctx::new(), &c5, 0, &mut stsp).unwrap(), 5);
        assert_eq!(girth_edge_via_stsp(&mut Ctx::new(), &Graph::path(4), 1, &mut stsp).unwrap(), INF);
        assert_eq!(girth_vertex_via_stsp_undirected(&mut Ctx::new(), &Graph::cycle(4), 2, &mut stsp).unwrap(), 4);
        let bowtie = Graph::from_pairs(5, false, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(girth_vertex_via_stsp_undirected(&mut Ctx::new(), &bowtie, 0, &mut stsp).unwrap(), 3);
    }

    #[test]
    fn random_graphs_agree_with_oracles() {
        for seed in 0..40 {
            check_all(&gnp(9, 0.25, true, seed));
            check_all(&gnp(9, 0.3, false, seed));
        }
        for seed in 0..15 {
            check_all(&gnp_weighted(8, 0.3, seed % 2 == 0, 1, 9, seed));
        }
    }

    #[test]
    fn call_budget_is_log_degree() {
        let g = Graph::star(10);
        let mut cx = Ctx::new();
        girth_vertex_via_stsp_undirected(&mut cx, &g, 0, &mut stsp).unwrap();
        assert_eq!(cx.calls(), 4);
    }
}
