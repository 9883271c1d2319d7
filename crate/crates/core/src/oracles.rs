//! Plain in-memory reference solvers. Nothing here touches the simulator; these
//! are the ground truth for tests and for `verify`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instances::{Matrix, ThreeSumInstance, TriangleInstance, TriangleTarget, VectorSets};
use crate::iomachine::{sat_add, Word, INF};

/// Largest side accepted by the cubic brute-force oracles.
pub const CUBIC_CAP: usize = 64;

fn cap(what: &str, n: usize) -> Result<()> {
    if n > CUBIC_CAP {
        Err(Error::SizeCap(format!("{what}: size {n} exceeds {CUBIC_CAP}")))
    } else {
        Ok(())
    }
}

// ---- distances ----------------------------------------------------------------

/// Hop distances from `s`, INF when unreachable.
pub fn bfs(g: &Graph, s: usize) -> Vec<Word> {
    bfs_adj(&g.adjacency(), s)
}

fn bfs_adj(adj: &[Vec<(usize, Word)>], s: usize) -> Vec<Word> {
    let mut d = vec![INF; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &(v, _) in &adj[u] {
            if d[v] == INF {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    d
}

/// Hop distances between all pairs, ignoring weights.
pub fn bfs_all(g: &Graph) -> Vec<Vec<Word>> {
    let adj = g.adjacency();
    (0..g.n()).map(|s| bfs_adj(&adj, s)).collect()
}

fn dijkstra_adj(adj: &[Vec<(usize, Word)>], s: usize) -> Vec<Word> {
    let mut d = vec![INF; adj.len()];
    d[s] = 0;
    let mut pq = BinaryHeap::from([Reverse((0, s))]);
    while let Some(Reverse((du, u))) = pq.pop() {
        if du > d[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = sat_add(du, w);
            if nd < d[v] {
                d[v] = nd;
                pq.push(Reverse((nd, v)));
            }
        }
    }
    d
}

pub fn dijkstra(g: &Graph, s: usize) -> Result<Vec<Word>> {
    if g.edges().iter().any(|e| e.w < 0) {
        return Err(Error::Precondition("dijkstra needs non-negative weights".into()));
    }
    Ok(dijkstra_adj(&g.adjacency(), s))
}

pub fn dijkstra_all(g: &Graph) -> Result<Vec<Vec<Word>>> {
    if g.edges().iter().any(|e| e.w < 0) {
        return Err(Error::Precondition("dijkstra needs non-negative weights".into()));
    }
    let adj = g.adjacency();
    Ok((0..g.n()).map(|s| dijkstra_adj(&adj, s)).collect())
}

/// Floyd–Warshall; works with negative weights and reports negative cycles.
pub fn floyd_warshall(g: &Graph) -> Result<Vec<Vec<Word>>> {
    let n = g.n();
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for e in g.arcs() {
        if e.w < d[e.u][e.v] {
            d[e.u][e.v] = e.w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] >= INF {
                continue;
            }
            for j in 0..n {
                let c = sat_add(d[i][k], d[k][j]);
                if c < d[i][j] {
                    d[i][j] = c;
                }
            }
        }
    }
    if let Some(i) = (0..n).find(|&i| d[i][i] < 0) {
        return Err(Error::NegativeCycle(i));
    }
    Ok(d)
}

/// All-pairs distances using whichever method the weights allow.
pub fn distances(g: &Graph) -> Result<Vec<Vec<Word>>> {
    if !g.is_weighted() {
        Ok(bfs_all(g))
    } else if g.edges().iter().all(|e| e.w >= 0) {
        dijkstra_all(g)
    } else {
        floyd_warshall(g)
    }
}

/// s–t distance (INF if unreachable).
pub fn stsp_brute(g: &Graph, s: usize, t: usize) -> Result<Word> {
    if s >= g.n() || t >= g.n() {
        return Err(Error::Argument(format!("node outside 0..{}", g.n())));
    }
    if !g.is_weighted() {
        return Ok(bfs(g, s)[t]);
    }
    if g.edges().iter().all(|e| e.w >= 0) {
        return Ok(dijkstra(g, s)?[t]);
    }
    Ok(floyd_warshall(g)?[s][t])
}

pub fn eccentricities(g: &Graph) -> Result<Vec<Word>> {
    Ok(distances(g)?.iter().map(|r| r.iter().copied().max().unwrap_or(0)).collect())
}

/// Max eccentricity (INF when some pair is unreachable; 0 for n ≤ 1).
pub fn diameter(g: &Graph) -> Result<Word> {
    Ok(eccentricities(g)?.into_iter().max().unwrap_or(0))
}

pub fn radius(g: &Graph) -> Result<Word> {
    Ok(eccentricities(g)?.into_iter().min().unwrap_or(0))
}

/// Node minimizing the sum of distances to all others (smallest id on ties).
pub fn median(g: &Graph) -> Result<usize> {
    let d = distances(g)?;
    let sums: Vec<Word> = d.iter().map(|r| r.iter().fold(0, |a, &x| sat_add(a, x))).collect();
    Ok((0..g.n()).min_by_key(|&i| (sums[i], i)).unwrap_or(0))
}

/// Sum of distances over ordered pairs (INF if some pair is unreachable).
pub fn wiener(g: &Graph) -> Result<Word> {
    let d = distances(g)?;
    Ok(d.iter().flatten().fold(0, |a, &x| sat_add(a, x)))
}

/// Σ_{x∈X} Σ_{t∈T} δ(x, t).
pub fn subset_distance_sum(g: &Graph, xs: &[usize], ts: &[usize]) -> Result<Word> {
    let d = distances(g)?;
    let mut s = 0;
    for &x in xs {
        for &t in ts {
            s = sat_add(s, d[x][t]);
        }
    }
    Ok(s)
}

/// Counts of ordered pairs (u≠v) at each hop distance 1..=k.
pub fn distance_histogram(g: &Graph, k: usize) -> Vec<u64> {
    let mut h = vec![0; k];
    for row in bfs_all(g) {
        for d in row {
            if d >= 1 && d <= k as Word {
                h[d as usize - 1] += 1;
            }
        }
    }
    h
}

/// Per node: number of nodes within 0, 1 and 2 hops.
pub fn within_counts(g: &Graph) -> Vec<[u64; 3]> {
    bfs_all(g)
        .iter()
        .map(|r| {
            let mut c = [0; 3];
            for &d in r {
                for (j, slot) in c.iter_mut().enumerate() {
                    if d <= j as Word {
                        *slot += 1;
                    }
                }
            }
            c
        })
        .collect()
}

// ---- cycles -------------------------------------------------------------------

fn dist_excluding(g: &Graph, skip_edge: Option<usize>, skip_node: Option<usize>, s: usize) -> Result<Vec<Word>> {
    let mut h = Graph::new(g.n(), g.is_directed(), g.is_weighted());
    for (i, e) in g.edges().iter().enumerate() {
        if Some(i) == skip_edge || Some(e.u) == skip_node || Some(e.v) == skip_node {
            continue;
        }
        h.add_edge(e.u, e.v, e.w)?;
    }
    h.set_weighted(g.is_weighted());
    if h.edges().iter().all(|e| e.w >= 0) {
        Ok(dijkstra_adj(&h.adjacency(), s))
    } else {
        Ok(floyd_warshall(&h)?[s].clone())
    }
}

/// Shortest cycle that uses edge `e` (INF if none).
pub fn girth_through_edge_brute(g: &Graph, e: usize) -> Result<Word> {
    let edge = g.edge(e).ok_or_else(|| Error::Argument(format!("no edge {e}")))?;
    if edge.u == edge.v {
        return Ok(edge.w);
    }
    let d = dist_excluding(g, Some(e), None, edge.v)?;
    Ok(sat_add(edge.w, d[edge.u]))
}

/// Shortest cycle through node `v` (INF if none). Undirected cycles must use
/// two distinct edges at `v`.
pub fn girth_through_vertex_brute(g: &Graph, v: usize) -> Result<Word> {
    if v >= g.n() {
        return Err(Error::Argument(format!("no node {v}")));
    }
    let mut best = INF;
    for e in g.edges() {
        if e.u == v && e.v == v {
            best = best.min(e.w);
        }
    }
    if g.is_directed() {
        for e in g.edges() {
            if e.u == v && e.v != v {
                // shortest a→v path; the first return to v closes the cycle
                let back = dist_excluding(g, None, None, e.v)?[v];
                best = best.min(sat_add(e.w, back));
            }
        }
        return Ok(best);
    }
    let inc: Vec<(usize, Word)> = g
        .edges()
        .iter()
        .filter(|e| (e.u == v) != (e.v == v))
        .map(|e| (if e.u == v { e.v } else { e.u }, e.w))
        .collect();
    for i in 0..inc.len() {
        let d = dist_excluding(g, None, Some(v), inc[i].0)?;
        for (j, &(b, wb)) in inc.iter().enumerate() {
            if i != j {
                best = best.min(sat_add(sat_add(inc[i].1, wb), d[b]));
            }
        }
    }
    Ok(best)
}

/// Shortest cycle anywhere (INF for forests / DAGs).
pub fn girth_brute(g: &Graph) -> Result<Word> {
    let mut best = INF;
    for e in 0..g.m() {
        best = best.min(girth_through_edge_brute(g, e)?);
    }
    Ok(best)
}

// ---- vectors ------------------------------------------------------------------

fn dot(a: &[Word], b: &[Word]) -> Word {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn ov_brute(inst: &VectorSets) -> bool {
    inst.u.iter().any(|a| inst.v.iter().any(|b| dot(a, b) == 0))
}

/// Some a in A with a·b > 0 for every b in B.
pub fn hs_brute(inst: &VectorSets) -> bool {
    inst.u.iter().any(|a| inst.v.iter().all(|b| dot(a, b) > 0))
}

// ---- 3SUM ---------------------------------------------------------------------

pub fn three_sum_brute(inst: &ThreeSumInstance) -> Result<bool> {
    cap("three_sum_brute", inst.a.len().max(inst.b.len()).max(inst.c.len()))?;
    Ok(inst.a.iter().any(|&a| {
        inst.b.iter().any(|&b| inst.c.iter().any(|&c| a as i128 + b as i128 + c as i128 == 0))
    }))
}

/// Quadratic RAM 3SUM via a hash set on C; no size cap.
pub fn three_sum_ram(inst: &ThreeSumInstance) -> bool {
    let cs: HashSet<i128> = inst.c.iter().map(|&c| c as i128).collect();
    inst.a.iter().any(|&a| inst.b.iter().any(|&b| cs.contains(&-(a as i128 + b as i128))))
}

/// ∃ i, j with i + j < n and A[i] + A[j] + A[i+j] = 0.
pub fn conv3sum_brute(a: &[Word]) -> bool {
    let n = a.len();
    (0..n).any(|i| (0..n - i).any(|j| a[i] as i128 + a[j] as i128 + a[i + j] as i128 == 0))
}

/// ∃ s, t with s + t < n and A[s] + B[t] + C[s+t] = 0.
pub fn conv3sum3_brute(a: &[Word], b: &[Word], c: &[Word]) -> bool {
    let n = a.len().min(b.len()).min(c.len());
    (0..n).any(|s| (0..n - s).any(|t| a[s] as i128 + b[t] as i128 + c[s + t] as i128 == 0))
}

/// Cyclic form: ∃ i, j with A[i] + B[j] + C[(i+j) mod n] = 0. Kept for
/// comparison only; the reductions use the non-wrapping form.
pub fn conv3sum_cyclic_brute(a: &[Word], b: &[Word], c: &[Word]) -> bool {
    let n = a.len();
    if n == 0 || b.len() != n || c.len() != n {
        return false;
    }
    (0..n).any(|i| (0..n).any(|j| a[i] as i128 + b[j] as i128 + c[(i + j) % n] as i128 == 0))
}

// ---- triangles and (min,+) ----------------------------------------------------

pub fn triangle_brute(inst: &TriangleInstance, target: TriangleTarget) -> Result<bool> {
    let (nx, ny, nz) = inst.sizes();
    cap("triangle_brute", nx.max(ny).max(nz))?;
    for x in 0..nx {
        for y in 0..ny {
            let a = inst.xy.get(x, y);
            if a >= INF {
                continue;
            }
            for z in 0..nz {
                let (b, c) = (inst.yz.get(y, z), inst.zx.get(z, x));
                if b >= INF || c >= INF {
                    continue;
                }
                let s = a as i128 + b as i128 + c as i128;
                let hit = match target {
                    TriangleTarget::Zero => s == 0,
                    TriangleTarget::Negative => s < 0,
                };
                if hit {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Triangle detection in a general graph: three distinct nodes u, v, w with
/// all three edges present (either direction for undirected graphs; the
/// directed cycle u→v→w→u otherwise).
pub fn graph_triangle_brute(g: &Graph, target: TriangleTarget) -> Result<bool> {
    let n = g.n();
    cap("graph_triangle_brute", n)?;
    let mut w = vec![vec![INF; n]; n];
    for e in g.arcs() {
        if e.u != e.v {
            w[e.u][e.v] = w[e.u][e.v].min(e.w);
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a == b || w[a][b] >= INF {
                continue;
            }
            for c in 0..n {
                if c == a || c == b || w[b][c] >= INF || w[c][a] >= INF {
                    continue;
                }
                let s = w[a][b] as i128 + w[b][c] as i128 + w[c][a] as i128;
                if (target == TriangleTarget::Zero && s == 0) || (target == TriangleTarget::Negative && s < 0) {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// (min,+) product with the smallest minimizing index as witness. Entries with
/// no finite term are INF with witness 0.
pub fn minplus_brute(a: &Matrix, b: &Matrix) -> Result<(Matrix, Matrix)> {
    if a.cols != b.rows {
        return Err(Error::Shape(format!("{}x{} · {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    cap("minplus_brute", a.rows.max(a.cols).max(b.cols))?;
    Ok(minplus_ram(a, b))
}

/// Uncapped cubic (min,+) product.
pub fn minplus_ram(a: &Matrix, b: &Matrix) -> (Matrix, Matrix) {
    let mut v = Matrix::filled(a.rows, b.cols, INF);
    let mut s = Matrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..b.cols {
            let (mut best, mut arg) = (INF, 0);
            for j in 0..a.cols {
                let c = sat_add(a.get(i, j), b.get(j, k));
                if c < best {
                    best = c;
                    arg = j;
                }
            }
            v.set(i, k, best);
            s.set(i, k, arg as Word);
        }
    }
    (v, s)
}

pub fn matmul_ram(a: &Matrix, b: &Matrix) -> Matrix {
    let mut c = Matrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let x = a.get(i, j);
            for k in 0..b.cols {
                c.data[i * b.cols + k] += x * b.get(j, k);
            }
        }
    }
    c
}

/// Weighted adjacency matrix: 0 diagonal, INF for non-edges.
pub fn adjacency_matrix(g: &Graph) -> Matrix {
    let mut d = Matrix::minplus_identity(g.n());
    for e in g.arcs() {
        if e.u != e.v && e.w < d.get(e.u, e.v) {
            d.set(e.u, e.v, e.w);
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_examples() {
        assert_eq!(wiener(&Graph::complete(3)).unwrap(), 6);
        assert_eq!(median(&Graph::path(3)).unwrap(), 1);
        let c5 = Graph::cycle(5);
        assert_eq!(diameter(&c5).unwrap(), 2);
        assert_eq!(radius(&c5).unwrap(), 2);
    }

    #[test]
    fn brute_examples() {
        let ov = VectorSets::from_bits(&[&[1, 0]], &[&[0, 1]]).unwrap();
        assert!(ov_brute(&ov));
        for v in 0..4 {
            assert_eq!(girth_through_vertex_brute(&Graph::cycle(4), v).unwrap(), 4);
        }
        let a = Matrix::from_rows(&[vec![3]]).unwrap();
        let b = Matrix::from_rows(&[vec![4]]).unwrap();
        assert_eq!(minplus_brute(&a, &b).unwrap().0.data, vec![7]);
    }

    #[test]
    fn self_consistency() {
        let g = Graph::from_pairs(6, false, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let d = bfs_all(&g);
        let ecc = eccentricities(&g).unwrap();
        assert_eq!(diameter(&g).unwrap(), *ecc.iter().max().unwrap());
        assert_eq!(radius(&g).unwrap(), *ecc.iter().min().unwrap());
        assert_eq!(wiener(&g).unwrap(), d.iter().flatten().sum::<Word>());
        let mut w = g.clone();
        w.set_weighted(true);
        assert_eq!(dijkstra_all(&w).unwrap(), d);
    }

    #[test]
    fn girth_cases() {
        let mut g = Graph::from_pairs(5, false, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(girth_through_vertex_brute(&g, 0).unwrap(), 3);
        assert_eq!(girth_through_edge_brute(&g, 0).unwrap(), 3);
        assert_eq!(girth_through_vertex_brute(&Graph::path(4), 1).unwrap(), INF);
        g.add_edge(3, 4, 1).unwrap();
        assert_eq!(girth_through_edge_brute(&g, 4).unwrap(), 2);
        let d = Graph::from_pairs(3, true, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(girth_through_vertex_brute(&d, 1).unwrap(), 3);
    }

    #[test]
    fn negative_cycle_rejected() {
        let g = Graph::from_weighted(2, true, &[(0, 1, 1), (1, 0, -2)]).unwrap();
        assert_eq!(floyd_warshall(&g), Err(Error::NegativeCycle(0)));
    }

    #[test]
    fn caps() {
        let big = ThreeSumInstance { a: vec![0; 65], b: vec![0], c: vec![0] };
        assert!(matches!(three_sum_brute(&big), Err(Error::SizeCap(_))));
        assert!(three_sum_ram(&big));
    }
}
