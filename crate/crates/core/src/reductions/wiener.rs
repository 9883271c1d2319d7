//! Distance sums between node subsets from whole-graph Wiener indices.
//!
//! Wiener solvers here sum δ(u, v) over ordered pairs with v reachable from
//! u. On strongly connected graphs that is the usual Wiener index; the
//! directed constructions below rely on unreachable pairs contributing 0.

use std::collections::HashSet;

use super::Ctx;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::iomachine::{Word, INF};
use crate::oracles;

/// Reference Wiener solver under the reachable-pairs convention.
pub fn wiener_reachable(g: &Graph) -> Result<Word> {
    let d = oracles::distances(g)?;
    Ok(d.iter().flatten().filter(|&&x| x < INF).sum())
}

fn with_pendants(g: &Graph, xs: &[usize], ts: &[usize]) -> Graph {
    let mut h = g.clone();
    for &x in xs {
        let p = h.add_node();
        h.add_edge(p, x, 1).expect("node exists");
    }
    for &t in ts {
        let p = h.add_node();
        h.add_edge(t, p, 1).expect("node exists");
    }
    h.set_weighted(g.is_weighted());
    h
}

fn check_nodes(g: &Graph, xs: &[usize], ts: &[usize]) -> Result<()> {
    match xs.iter().chain(ts).find(|&&v| v >= g.n()) {
        Some(v) => Err(Error::Argument(format!("node {v} outside 0..{}", g.n()))),
        None => Ok(()),
    }
}

/// Σ_{x∈X} Σ_{t∈T} δ(x, t) from four Wiener calls. Pendant copies x′ of X
/// and t′ of T are added; inclusion–exclusion over G+X′+T′, G+X′, G+T′ and G
/// leaves only the pairs (x′, t′), whose distance is δ(x, t) + 2. Undirected
/// pairs are counted in both orders. Directed inputs get one-way pendants
/// x′→x and t→t′, so only x′ to t′ survives.
pub fn wiener_subset_sum(
    cx: &mut Ctx,
    g: &Graph,
    xs: &[usize],
    ts: &[usize],
    solver: &mut impl FnMut(&Graph) -> Result<Word>,
) -> Result<Word> {
    check_nodes(g, xs, ts)?;
    if !g.is_strongly_connected() {
        return Err(Error::Unsupported("graph is not connected".into()));
    }
    wiener_subset_sum_with(cx, g, xs, ts, 2, solver)
}

/// [`wiener_subset_sum`] without the connectivity check and with the
/// per-pair pendant constant as a parameter (the correct value is 2). Every
/// x must reach every t.
pub fn wiener_subset_sum_with(
    cx: &mut Ctx,
    g: &Graph,
    xs: &[usize],
    ts: &[usize],
    pendant: Word,
    solver: &mut impl FnMut(&Graph) -> Result<Word>,
) -> Result<Word> {
    check_nodes(g, xs, ts)?;
    let graphs = [with_pendants(g, xs, ts), with_pendants(g, xs, &[]), with_pendants(g, &[], ts), g.clone()];
    let mut w = [0 as Word; 4];
    for (slot, h) in w.iter_mut().zip(&graphs) {
        cx.graph_target(3 * g.m() + xs.len() + ts.len(), h)?;
        *slot = cx.call(|| solver(h))?;
    }
    if w.iter().any(|&x| x >= INF) {
        return Err(Error::Unsupported("Wiener solver reported an unreachable pair".into()));
    }
    let combined = w[0] - w[1] - w[2] + w[3];
    let pairs = (xs.len() * ts.len()) as Word;
    Ok(if g.is_directed() { combined } else { combined / 2 } - pendant * pairs)
}

/// Layered copy of g: layers 0..=k, arcs u_L→v_{L+1} for every arc (u, v)
/// and v_L→v_{L+1}, plus hubs s_L (L < k) entered from all of layer L,
/// leaving to all of layer L+1, and chained s_L→s_{L+1}. From layer 0 to
/// layer k the distance is k when δ ≤ k and k + 1 otherwise.
fn layered(g: &Graph, k: usize) -> Graph {
    let n = g.n();
    let node = |layer: usize, v: usize| layer * n + v;
    let hub = |layer: usize| (k + 1) * n + layer;
    let mut pairs = Vec::new();
    let arcs = g.arcs();
    for l in 0..k {
        for v in 0..n {
            pairs.push((node(l, v), node(l + 1, v)));
            pairs.push((node(l, v), hub(l)));
            pairs.push((hub(l), node(l + 1, v)));
        }
        for e in &arcs {
            pairs.push((node(l, e.u), node(l + 1, e.v)));
        }
        if l + 1 < k {
            pairs.push((hub(l), hub(l + 1)));
        }
    }
    Graph::from_pairs((k + 1) * n + k, true, &pairs).expect("nodes in range")
}

/// Σ_{x∈X} Σ_{t∈T} max{min{δ(x, t), k+1}, k} for an unweighted graph.
pub fn wiener_clamped_sum(
    cx: &mut Ctx,
    g: &Graph,
    xs: &[usize],
    ts: &[usize],
    k: usize,
    solver: &mut impl FnMut(&Graph) -> Result<Word>,
) -> Result<Word> {
    if k < 1 {
        return Err(Error::Argument("clamp parameter k must be at least 1".into()));
    }
    if g.is_weighted() {
        return Err(Error::Argument("clamped sums need an unweighted graph".into()));
    }
    check_nodes(g, xs, ts)?;
    let h = layered(g, k);
    let top = k * g.n();
    let ts_top: Vec<usize> = ts.iter().map(|&t| top + t).collect();
    wiener_subset_sum_with(cx, &h, xs, &ts_top, 2, solver)
}

/// #{(x, t) : δ(x, t) ≥ j}, unreachable pairs included.
fn at_least(
    cx: &mut Ctx,
    g: &Graph,
    xs: &[usize],
    ts: &[usize],
    j: usize,
    solver: &mut impl FnMut(&Graph) -> Result<Word>,
) -> Result<Word> {
    let pairs = (xs.len() * ts.len()) as Word;
    match j {
        0 => Ok(pairs),
        1 => {
            let tset: HashSet<usize> = ts.iter().copied().collect();
            Ok(pairs - xs.iter().filter(|x| tset.contains(x)).count() as Word)
        }
        _ => Ok(wiener_clamped_sum(cx, g, xs, ts, j - 1, solver)? - (j as Word - 1) * pairs),
    }
}

/// (#{δ = k}, #{δ ≥ k}) over X × T. X and T are sets.
pub fn count_pairs_at_distance(
    cx: &mut Ctx,
    g: &Graph,
    xs: &[usize],
    ts: &[usize],
    k: usize,
    solver: &mut impl FnMut(&Graph) -> Result<Word>,
) -> Result<(Word, Word)> {
    if k < 1 {
        return Err(Error::Argument("distance k must be at least 1".into()));
    }
    check_nodes(g, xs, ts)?;
    let ge = at_least(cx, g, xs, ts, k, solver)?;
    let above = at_least(cx, g, xs, ts, k + 1, solver)?;
    Ok((ge - above, ge))
}

/// min{diameter, k} by binary search on the number of pairs at distance ≥ j.
pub fn clamped_diameter_via_wiener(
    cx: &mut Ctx,
    g: &Graph,
    k: usize,
    solver: &mut impl FnMut(&Graph) -> Result<Word>,
) -> Result<Word> {
    if k < 1 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    let all: Vec<usize> = (0..g.n()).collect();
    if at_least(cx, g, &all, &all, 1, solver)? == 0 {
        return Ok(0);
    }
    let (mut lo, mut hi) = (1, k);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if at_least(cx, g, &all, &all, mid, solver)? > 0 {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo as Word)
}

/// Ordered pairs at each distance 1..=k.
pub fn distance_histogram_via_wiener(
    cx: &mut Ctx,
    g: &Graph,
    k: usize,
    solver: &mut impl FnMut(&Graph) -> Result<Word>,
) -> Result<Vec<u64>> {
    let all: Vec<usize> = (0..g.n()).collect();
    let mut prev = at_least(cx, g, &all, &all, 1, solver)?;
    let mut out = Vec::with_capacity(k);
    for j in 2..=k + 1 {
        let cur = at_least(cx, g, &all, &all, j, solver)?;
        out.push((prev - cur) as u64);
        prev = cur;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{connected_graph, gnp, rng};
    use crate::oracles::{bfs_all, distance_histogram, subset_distance_sum};
    use rand::Rng;

    fn subset(r: &mut impl Rng, n: usize) -> Vec<usize> {
        let s: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.4)).collect();
        if s.is_empty() {
            vec![0]
        } else {
            s
        }
    }

    #[test]
    fn examples() {
        let w = &mut wiener_reachable;
        assert_eq!(wiener_reachable(&Graph::complete(3)).unwrap(), 6);
        assert_eq!(wiener_subset_sum(&mut Ctx::new(), &Graph::complete(3), &[0], &[1], w).unwrap(), 1);
        assert_eq!(wiener_subset_sum(&mut Ctx::new(), &Graph::path(3), &[0], &[2], w).unwrap(), 2);
        assert_eq!(wiener_clamped_sum(&mut Ctx::new(), &Graph::path(3), &[0], &[2], 1, w).unwrap(), 2);
        let all: Vec<usize> = (0..3).collect();
        assert_eq!(wiener_clamped_sum(&mut Ctx::new(), &Graph::complete(3), &all, &all, 3, w).unwrap(), 27);
        let all4: Vec<usize> = (0..4).collect();
        assert_eq!(count_pairs_at_distance(&mut Ctx::new(), &Graph::path(4), &all4, &all4, 3, w).unwrap(), (2, 2));
        assert_eq!(count_pairs_at_distance(&mut Ctx::new(), &Graph::complete(3), &all, &all, 2, w).unwrap(), (0, 0));
        assert_eq!(clamped_diameter_via_wiener(&mut Ctx::new(), &Graph::cycle(6), 5, w).unwrap(), 3);
        assert_eq!(clamped_diameter_via_wiener(&mut Ctx::new(), &Graph::complete(4), 3, w).unwrap(), 1);
        assert_eq!(distance_histogram_via_wiener(&mut Ctx::new(), &Graph::path(5), 2, w).unwrap(), vec![8, 6]);
    }

    #[test]
    fn four_calls_and_disconnected_rejected() {
        let mut cx = Ctx::new();
        wiener_subset_sum(&mut cx, &Graph::cycle(5), &[0, 1], &[3], &mut wiener_reachable).unwrap();
        assert_eq!(cx.calls(), 4);
        let g = Graph::from_pairs(4, false, &[(0, 1), (2, 3)]).unwrap();
        let r = wiener_subset_sum(&mut Ctx::new(), &g, &[0], &[3], &mut wiener_reachable);
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn random_subset_sums() {
        let mut r = rng(5);
        for seed in 0..40 {
            let g = connected_graph(12, 0.15, seed);
            let (xs, ts) = (subset(&mut r, 12), subset(&mut r, 12));
            let got = wiener_subset_sum(&mut Ctx::new(), &g, &xs, &ts, &mut wiener_reachable).unwrap();
            assert_eq!(got, subset_distance_sum(&g, &xs, &ts).unwrap());
            let dg = g.to_directed();
            let got = wiener_subset_sum(&mut Ctx::new(), &dg, &xs, &ts, &mut wiener_reachable).unwrap();
            assert_eq!(got, subset_distance_sum(&dg, &xs, &ts).unwrap());
        }
    }

    #[test]
    fn random_clamped_and_histograms() {
        let mut r = rng(6);
        for seed in 0..30 {
            let g = gnp(10, 0.25, seed % 2 == 0, seed);
            let d = bfs_all(&g);
            let (xs, ts) = (subset(&mut r, 10), subset(&mut r, 10));
            let k = r.gen_range(1..=3);
            let want: Word = xs.iter().flat_map(|&x| ts.iter().map(move |&t| (x, t))).map(|(x, t)| d[x][t].min(k as Word + 1).max(k as Word)).sum();
            assert_eq!(wiener_clamped_sum(&mut Ctx::new(), &g, &xs, &ts, k, &mut wiener_reachable).unwrap(), want);
        }
        for seed in 0..10 {
            let g = gnp(12, 0.2, false, 100 + seed);
            let got = distance_histogram_via_wiener(&mut Ctx::new(), &g, 5, &mut wiener_reachable).unwrap();
            assert_eq!(got, distance_histogram(&g, 5));
        }
    }
}
