//! Radius 3 versus 4 with a single median call.

use serde::{Deserialize, Serialize};

use super::Ctx;
use crate::algos::{distance_counts_oblivious, radius_classify, DistClass};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracles::bfs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Radius3v4 {
    AtMostTwo,
    Three,
    FourPlus,
}

impl std::fmt::Display for Radius3v4 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Radius3v4::AtMostTwo => "≤2",
            Radius3v4::Three => "3",
            Radius3v4::FourPlus => "4+",
        })
    }
}

struct Gadget {
    graph: Graph,
    n: usize,
}

impl Gadget {
    fn layer(&self, l: usize, v: usize) -> usize {
        l * self.n + v
    }
}

/// Node sums of distance in the gadget differ between V1 nodes only through
/// their distances to V4:
///
/// - V1..V4 are copies of G with v_l–u_{l+1} for u = v or u ~ v, and x_l
///   adjacent to all of V_l and V_{l+1}. From v_1, u_4 is at 3 if δ(v, u) ≤ 3
///   and at 4 otherwise.
/// - y_1..y_10 are adjacent to all of V1, each with a private set of 10n
///   leaves, which pulls the median into V1.
/// - z1 (adjacent to V1) leads to z2 and a set A of 2n nodes.
/// - Each t_j has 2^j private leaves and each t′_j none; z3 joins V1 to all
///   t_j and z4 joins V1 to all t′_j. Node v_1 is adjacent to t_j or t′_j
///   by bit j of c(v) = K − |N[v]| − |N²[v]|, which cancels the variation of
///   v_1's sums over V2 and V3.
fn gadget(g: &Graph, counts: &[[u64; 3]]) -> Gadget {
    let n = g.n();
    let mut gd = Gadget { graph: Graph::undirected(0), n };
    let mut next = 4 * n;
    let mut fresh = |k: usize| {
        let s = next;
        next += k;
        s
    };
    let x = fresh(3);
    let y = fresh(10);
    let s_sets = fresh(10 * 10 * n);
    let z = fresh(4);
    let a_set = fresh(2 * n);
    let deficit: Vec<u64> = counts.iter().map(|c| c[1] + c[2]).collect();
    let k_max = deficit.iter().copied().max().unwrap_or(0);
    let bits = (u64::BITS - k_max.leading_zeros()).max(1) as usize;
    let t = fresh(bits);
    let t_prime = fresh(bits);
    let leaves: Vec<usize> = (0..bits).map(|j| fresh(1 << j)).collect();

    let mut pairs = Vec::new();
    let arcs = g.arcs();
    for l in 0..3 {
        for v in 0..n {
            pairs.push((gd.layer(l, v), gd.layer(l + 1, v)));
            pairs.push((x + l, gd.layer(l, v)));
            pairs.push((x + l, gd.layer(l + 1, v)));
        }
        for e in &arcs {
            pairs.push((gd.layer(l, e.u), gd.layer(l + 1, e.v)));
        }
    }
    for v in 0..n {
        let v1 = gd.layer(0, v);
        for i in 0..10 {
            pairs.push((y + i, v1));
        }
        for zi in 0..4 {
            if zi != 1 {
                pairs.push((z + zi, v1));
            }
        }
        let c = k_max - deficit[v];
        for j in 0..bits {
            pairs.push((v1, if (c >> j) & 1 == 1 { t + j } else { t_prime + j }));
        }
    }
    for i in 0..10 {
        for s in 0..10 * n {
            pairs.push((y + i, s_sets + i * 10 * n + s));
        }
    }
    pairs.push((z, z + 1));
    for a in 0..2 * n {
        pairs.push((z + 1, a_set + a));
    }
    for j in 0..bits {
        pairs.push((z + 2, t + j));
        pairs.push((z + 3, t_prime + j));
        for leaf in 0..1 << j {
            pairs.push((t + j, leaves[j] + leaf));
        }
    }
    gd.graph = Graph::from_pairs(next, false, &pairs).expect("nodes in range");
    gd
}

/// Distinguish radius ≤ 2, exactly 3, and at least 4 for an undirected
/// unweighted graph. Radius ≤ 2 is settled from the distance counts; else
/// the median of the gadget lies in V1 and has distance sum 3n to V4 iff
/// some node has eccentricity 3.
pub fn radius3v4_via_median(
    cx: &mut Ctx,
    g: &Graph,
    solver: &mut impl FnMut(&Graph) -> Result<usize>,
) -> Result<Radius3v4> {
    if g.is_directed() || g.is_weighted() || !g.is_simple() {
        return Err(Error::Format { line: 0, msg: "expected a simple undirected unweighted graph".into() });
    }
    let n = g.n();
    if n == 0 {
        return Ok(Radius3v4::AtMostTwo);
    }
    let counts = cx.with_machine(|m| distance_counts_oblivious(m, g))?;
    if radius_classify(&counts) != DistClass::AtLeastThree {
        return Ok(Radius3v4::AtMostTwo);
    }
    let gd = gadget(g, &counts);
    cx.graph_target(3 * g.m(), &gd.graph)?;
    let med = cx.call(|| solver(&gd.graph))?;
    if med >= gd.graph.n() {
        return Err(Error::Argument(format!("median solver returned node {med} of {}", gd.graph.n())));
    }
    let d = bfs(&gd.graph, med);
    let to_v4: i64 = (0..n).map(|v| d[gd.layer(3, v)]).sum();
    Ok(if to_v4 == 3 * n as i64 { Radius3v4::Three } else { Radius3v4::FourPlus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::connected_graph;
    use crate::oracles::{median, radius};

    fn run(g: &Graph) -> Radius3v4 {
        radius3v4_via_median(&mut Ctx::new(), g, &mut |h| median(h)).unwrap()
    }

    fn expected(g: &Graph) -> Radius3v4 {
        match radius(g).unwrap() {
            0..=2 => Radius3v4::AtMostTwo,
            3 => Radius3v4::Three,
            _ => Radius3v4::FourPlus,
        }
    }

    #[test]
    fn examples() {
        assert_eq!(run(&Graph::star(5)), Radius3v4::AtMostTwo);
        assert_eq!(run(&Graph::cycle(7)), Radius3v4::Three);
        assert_eq!(run(&Graph::cycle(9)), Radius3v4::FourPlus);
    }

    #[test]
    fn paths_and_sparse_graphs() {
        for n in 1..12 {
            assert_eq!(run(&Graph::path(n)), expected(&Graph::path(n)), "path {n}");
        }
        for seed in 0..30 {
            let g = connected_graph(12, 0.05, seed);
            assert_eq!(run(&g), expected(&g), "seed {seed}");
        }
    }
}
