//! Negative triangles, three-layer shortest paths and (min,+) products in
//! terms of one another.

use serde::{Deserialize, Serialize};

use super::wiener::wiener_subset_sum_with;
use super::Ctx;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instances::{Matrix, TriangleInstance};
use crate::iomachine::{sat_add, Word, INF};

/// Three copies of a graph's weighted adjacency as a tripartite instance:
/// a triangle (x, y, z) of the instance is the cycle x → y → z → x of the
/// graph (both orientations for undirected graphs). Missing edges and the
/// diagonal are INF.
pub fn tripartite_from_graph(g: &Graph) -> TriangleInstance {
    let n = g.n();
    let mut adj = Matrix::filled(n, n, INF);
    for e in g.arcs() {
        if e.u != e.v && e.w < adj.get(e.u, e.v) {
            adj.set(e.u, e.v, e.w);
        }
    }
    TriangleInstance { xy: adj.clone(), yz: adj.clone(), zx: adj }
}

fn square_side(inst: &TriangleInstance) -> Result<usize> {
    let (a, b, c) = inst.sizes();
    if a != b || b != c {
        return Err(Error::Shape(format!("expected equal parts, got {a}, {b}, {c}")));
    }
    Ok(a)
}

/// Negative triangle from one subset Wiener sum (four Wiener calls). Parts
/// A, B, C and a copy A′ of A; edges a–b, b–c and c–a′ carry the original
/// weight plus 5W, a hub joins everything at 15W, a–a′ costs 15W and a–v′
/// (v ≠ a) costs 12W. Then δ(a, a′) = 15W + min(0, lightest triangle at a)
/// and δ(a, v′) = 12W, so the A × A′ sum drops below n(12n + 3)W exactly when
/// a negative triangle exists.
pub fn negtriangle_via_wiener(
    cx: &mut Ctx,
    inst: &TriangleInstance,
    solver: &mut impl FnMut(&Graph) -> Result<Word>,
) -> Result<bool> {
    let n = square_side(inst)?;
    if n == 0 {
        return Ok(false);
    }
    let w = inst.max_weight();
    let (a, b, c, a2, hub) = (0, n, 2 * n, 3 * n, 4 * n);
    let mut g = Graph::new(4 * n + 1, false, true);
    for i in 0..n {
        for j in 0..n {
            let add = |g: &mut Graph, u, v, x: Word| {
                if x < INF {
                    g.add_edge(u, v, x + 5 * w).expect("nodes in range");
                }
            };
            add(&mut g, a + i, b + j, inst.xy.get(i, j));
            add(&mut g, b + i, c + j, inst.yz.get(i, j));
            add(&mut g, c + i, a2 + j, inst.zx.get(i, j));
            g.add_edge(a + i, a2 + j, if i == j { 15 * w } else { 12 * w })?;
        }
    }
    for v in 0..4 * n {
        g.add_edge(hub, v, 15 * w)?;
    }
    g.set_weighted(true);
    cx.charge_stream(3 * n * n, 0)?;
    let xs: Vec<usize> = (a..a + n).collect();
    let ts: Vec<usize> = (a2..a2 + n).collect();
    let sum = wiener_subset_sum_with(cx, &g, &xs, &ts, 2, solver)?;
    let n_w = n as Word;
    Ok(sum < n_w * (12 * n_w + 3) * w)
}

/// Negative triangle from one APSP call on the layered digraph
/// I → J → K → I′ with every weight raised by 7m (m the largest |weight|):
/// δ(i, i′) is the lightest triangle at i plus 21m.
pub fn negtriangle_via_apsp(
    cx: &mut Ctx,
    inst: &TriangleInstance,
    solver: &mut impl FnMut(&Graph) -> Result<Vec<Vec<Word>>>,
) -> Result<bool> {
    let (ni, nj, nk) = inst.sizes();
    let m = inst.max_weight();
    let (j0, k0, i2) = (ni, ni + nj, ni + nj + nk);
    let mut g = Graph::new(2 * ni + nj + nk, true, true);
    let mut add = |u, v, x: Word| {
        if x < INF {
            g.add_edge(u, v, x + 7 * m).expect("nodes in range");
        }
    };
    for i in 0..ni {
        for j in 0..nj {
            add(i, j0 + j, inst.xy.get(i, j));
        }
    }
    for j in 0..nj {
        for k in 0..nk {
            add(j0 + j, k0 + k, inst.yz.get(j, k));
        }
    }
    for k in 0..nk {
        for i in 0..ni {
            add(k0 + k, i2 + i, inst.zx.get(k, i));
        }
    }
    g.set_weighted(true);
    cx.graph_target(3 * (ni * nj + nj * nk + nk * ni), &g)?;
    let d = cx.call(|| solver(&g))?;
    Ok((0..ni).any(|i| d[i][i2 + i] < 21 * m))
}

/// Lightest triangle through each (i, k) of a three-layer graph: entry
/// (i, k) of `values` is min over j of w(i, j) + w(j, k) + w(k, i), with the
/// smallest minimizing j in `witness` (0 when the value is INF).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeLayer {
    pub values: Matrix,
    pub witness: Matrix,
}

pub fn three_layer_oracle(inst: &TriangleInstance) -> Result<ThreeLayer> {
    let (ni, nj, nk) = inst.sizes();
    let mut values = Matrix::filled(ni, nk, INF);
    let mut witness = Matrix::zeros(ni, nk);
    for i in 0..ni {
        for k in 0..nk {
            let mut best = (INF, 0);
            for j in 0..nj {
                let s = sat_add(inst.xy.get(i, j), inst.yz.get(j, k));
                if s < best.0 {
                    best = (s, j);
                }
            }
            let v = sat_add(best.0, inst.zx.get(k, i));
            if v < INF {
                values.set(i, k, v);
                witness.set(i, k, best.1 as Word);
            }
        }
    }
    Ok(ThreeLayer { values, witness })
}

fn sub_matrix(a: &Matrix, rows: &[usize], cols: &[usize]) -> Matrix {
    let mut out = Matrix::zeros(rows.len(), cols.len());
    for (r, &i) in rows.iter().enumerate() {
        for (c, &j) in cols.iter().enumerate() {
            out.set(r, c, a.get(i, j));
        }
    }
    out
}

/// Subinstance on parts (is, js, ks) with closing weights from `close`.
fn sub_instance(inst: &TriangleInstance, close: &Matrix, is: &[usize], js: &[usize], ks: &[usize]) -> TriangleInstance {
    TriangleInstance { xy: sub_matrix(&inst.xy, is, js), yz: sub_matrix(&inst.yz, js, ks), zx: sub_matrix(close, ks, is) }
}

/// Narrow a yes-instance to one (i, k) pair that lies on a negative
/// triangle, halving I and then K.
fn find_pair(
    cx: &mut Ctx,
    inst: &TriangleInstance,
    close: &Matrix,
    is: &[usize],
    js: &[usize],
    ks: &[usize],
    solver: &mut impl FnMut(&TriangleInstance) -> Result<bool>,
) -> Result<(usize, usize)> {
    let (mut is, mut ks) = (is.to_vec(), ks.to_vec());
    while is.len() > 1 {
        let half = is.len() / 2;
        let sub = sub_instance(inst, close, &is[..half], js, &ks);
        if cx.call(|| solver(&sub))? {
            is.truncate(half);
        } else {
            is.drain(..half);
        }
    }
    while ks.len() > 1 {
        let half = ks.len() / 2;
        let sub = sub_instance(inst, close, &is, js, &ks[..half]);
        if cx.call(|| solver(&sub))? {
            ks.truncate(half);
        } else {
            ks.drain(..half);
        }
    }
    Ok((is[0], ks[0]))
}

fn groups(n: usize, size: usize) -> Vec<Vec<usize>> {
    (0..n).collect::<Vec<_>>().chunks(size.max(1)).map(|c| c.to_vec()).collect()
}

/// Three-layer shortest paths with a negative-triangle detector. Every pair
/// (i, k) binary-searches its value t = min_j w(i, j) + w(j, k) in parallel:
/// in each round the closing edge k → i gets weight −θ_ik, so a negative
/// triangle through (i, k) means t < θ_ik. A round runs the detector on
/// every triple of groups of about n^{1/3} nodes, extracting pairs one at a
/// time and switching their closing edge off once found. Witnesses are then
/// located by binary search over prefixes of J.
pub fn three_layer_apsp_via_negtriangle(
    cx: &mut Ctx,
    inst: &TriangleInstance,
    solver: &mut impl FnMut(&TriangleInstance) -> Result<bool>,
) -> Result<ThreeLayer> {
    let (ni, nj, nk) = inst.sizes();
    let finite = |m: &Matrix| m.data.iter().filter(|&&x| x < INF).map(|x| x.abs()).max().unwrap_or(0);
    let w = finite(&inst.xy).max(finite(&inst.yz)).max(1);
    let side = |n: usize| (n as f64).cbrt().ceil() as usize;
    let (gi, gj, gk) = (groups(ni, side(ni)), groups(nj, side(nj)), groups(nk, side(nk)));
    cx.charge_stream(ni * nj + nj * nk, ni * nk)?;

    // pred(θ) = "t < θ"; pred(lo) is false, pred(hi) is true or hi is the
    // sentinel 2W + 2 that stands for "no finite j"
    let mut lo = Matrix::filled(ni, nk, -2 * w);
    let mut hi = Matrix::filled(ni, nk, 2 * w + 2);
    loop {
        let mut close = Matrix::filled(nk, ni, INF);
        let mut active = 0;
        for i in 0..ni {
            for k in 0..nk {
                if hi.get(i, k) - lo.get(i, k) > 1 {
                    close.set(k, i, -((lo.get(i, k) + hi.get(i, k)).div_euclid(2)));
                    active += 1;
                }
            }
        }
        if active == 0 {
            break;
        }
        let mut yes = vec![vec![false; nk]; ni];
        for is in &gi {
            for js in &gj {
                for ks in &gk {
                    loop {
                        let sub = sub_instance(inst, &close, is, js, ks);
                        cx.target("triangle", is.len().max(js.len()).max(ks.len()), 0);
                        if !cx.call(|| solver(&sub))? {
                            break;
                        }
                        let (i, k) = find_pair(cx, inst, &close, is, js, ks, solver)?;
                        yes[i][k] = true;
                        close.set(k, i, INF);
                    }
                }
            }
        }
        for i in 0..ni {
            for k in 0..nk {
                if hi.get(i, k) - lo.get(i, k) > 1 {
                    let mid = (lo.get(i, k) + hi.get(i, k)).div_euclid(2);
                    if yes[i][k] {
                        hi.set(i, k, mid);
                    } else {
                        lo.set(i, k, mid);
                    }
                }
            }
        }
    }

    let mut values = Matrix::filled(ni, nk, INF);
    let mut witness = Matrix::zeros(ni, nk);
    let js: Vec<usize> = (0..nj).collect();
    for i in 0..ni {
        for k in 0..nk {
            if hi.get(i, k) == 2 * w + 2 {
                continue;
            }
            let t = hi.get(i, k) - 1;
            let v = sat_add(t, inst.zx.get(k, i));
            if v >= INF {
                continue;
            }
            // smallest prefix of J holding a j with w(i, j) + w(j, k) ≤ t
            let mut close = Matrix::filled(nk, ni, INF);
            close.set(k, i, -(t + 1));
            let (mut a, mut b) = (1, nj);
            while a < b {
                let mid = (a + b) / 2;
                let sub = sub_instance(inst, &close, &[i], &js[..mid], &[k]);
                if cx.call(|| solver(&sub))? {
                    b = mid;
                } else {
                    a = mid + 1;
                }
            }
            values.set(i, k, v);
            witness.set(i, k, (a - 1) as Word);
        }
    }
    Ok(ThreeLayer { values, witness })
}

/// (min,+) product from one three-layer call with zero closing weights.
pub fn minplus_via_three_layer_apsp(
    cx: &mut Ctx,
    a: &Matrix,
    b: &Matrix,
    solver: &mut impl FnMut(&TriangleInstance) -> Result<ThreeLayer>,
) -> Result<(Matrix, Matrix)> {
    if a.cols != b.rows {
        return Err(Error::Shape(format!("{}x{} · {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    let inst = TriangleInstance::new(a.clone(), b.clone(), Matrix::zeros(b.cols, a.rows))?;
    cx.target("three-layer", a.rows.max(a.cols).max(b.cols), a.data.len() + b.data.len());
    cx.charge_stream(a.data.len() + b.data.len(), a.data.len() + b.data.len() + b.cols * a.rows)?;
    let r = cx.call(|| solver(&inst))?;
    Ok((r.values, r.witness))
}

/// Negative triangle from O(log W) zero-triangle calls. With
/// x₀ = x + W, y₀ = y + W, t₀ = 2W − z the question is x₀ + y₀ < t₀. Write
/// X_i = ⌊x₀/2^i⌋ and so on. If T_i − X_i − Y_i ≥ 2 at some level i ≥ 1, or
/// ≥ 1 at level 0, the inequality holds; conversely the highest such level
/// has difference at most 3, since one level down the difference at most
/// doubles plus one. Each candidate difference d is one zero-triangle
/// call with closing weight d − T_i.
pub fn negtriangle_via_zero_triangle(
    cx: &mut Ctx,
    inst: &TriangleInstance,
    solver: &mut impl FnMut(&TriangleInstance) -> Result<bool>,
) -> Result<bool> {
    let w = inst.max_weight();
    let levels = (Word::BITS - (4 * w).leading_zeros()) as usize;
    let shift = |m: &Matrix, f: &dyn Fn(Word) -> Word| Matrix {
        rows: m.rows,
        cols: m.cols,
        data: m.data.iter().map(|&x| if x >= INF { INF } else { f(x) }).collect(),
    };
    for i in 0..=levels {
        let xy = shift(&inst.xy, &|x| (x + w) >> i);
        let yz = shift(&inst.yz, &|y| (y + w) >> i);
        let diffs: &[Word] = if i == 0 { &[1, 2, 3] } else { &[2, 3] };
        for &d in diffs {
            let zx = shift(&inst.zx, &|z| d - ((2 * w - z) >> i));
            let sub = TriangleInstance { xy: xy.clone(), yz: yz.clone(), zx };
            cx.target("triangle", inst.xy.rows, 3 * inst.xy.data.len());
            cx.charge_stream(3 * inst.xy.data.len(), 3 * inst.xy.data.len())?;
            if cx.call(|| solver(&sub))? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{random_matrix, random_tripartite, TrianglePlant};
    use crate::instances::TriangleTarget;
    use crate::oracles::{distances, minplus_brute, triangle_brute};
    use crate::reductions::wiener_reachable;

    fn neg(t: &TriangleInstance) -> Result<bool> {
        triangle_brute(t, TriangleTarget::Negative)
    }

    fn zero(t: &TriangleInstance) -> Result<bool> {
        triangle_brute(t, TriangleTarget::Zero)
    }

    #[test]
    fn examples() {
        let yes = TriangleInstance::single(1, 2, -4);
        let no = TriangleInstance::single(1, 2, 3);
        assert!(negtriangle_via_wiener(&mut Ctx::new(), &yes, &mut wiener_reachable).unwrap());
        assert!(!negtriangle_via_wiener(&mut Ctx::new(), &TriangleInstance::single(1, 1, 1), &mut wiener_reachable).unwrap());
        assert!(negtriangle_via_apsp(&mut Ctx::new(), &yes, &mut distances).unwrap());
        assert!(!negtriangle_via_apsp(&mut Ctx::new(), &no, &mut distances).unwrap());
        assert!(negtriangle_via_zero_triangle(&mut Ctx::new(), &TriangleInstance::single(0, 0, -1), &mut zero).unwrap());
        assert!(!negtriangle_via_zero_triangle(&mut Ctx::new(), &TriangleInstance::single(0, 0, 0), &mut zero).unwrap());

        let r = three_layer_apsp_via_negtriangle(&mut Ctx::new(), &TriangleInstance::single(2, 3, 0), &mut neg).unwrap();
        assert_eq!(r.values.data, vec![5]);
        let a = Matrix::from_rows(&[vec![0]]).unwrap();
        let b = Matrix::from_rows(&[vec![5]]).unwrap();
        let mut tl = |t: &TriangleInstance| three_layer_apsp_via_negtriangle(&mut Ctx::new(), t, &mut neg);
        assert_eq!(minplus_via_three_layer_apsp(&mut Ctx::new(), &a, &b, &mut tl).unwrap().0.data, vec![5]);
        let b = random_matrix(4, 4, -5, 5, 1);
        let id = Matrix::minplus_identity(4);
        assert_eq!(minplus_via_three_layer_apsp(&mut Ctx::new(), &id, &b, &mut tl).unwrap().0, b);
    }

    #[test]
    fn every_single_triangle_in_range() {
        for x in -4..=4 {
            for y in -4..=4 {
                for z in -4..=4 {
                    let t = TriangleInstance::single(x, y, z);
                    let want = x + y + z < 0;
                    assert_eq!(negtriangle_via_zero_triangle(&mut Ctx::new(), &t, &mut zero).unwrap(), want, "{x} {y} {z}");
                    assert_eq!(negtriangle_via_apsp(&mut Ctx::new(), &t, &mut distances).unwrap(), want);
                    assert_eq!(negtriangle_via_wiener(&mut Ctx::new(), &t, &mut wiener_reachable).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn random_instances() {
        for seed in 0..100 {
            let plant = [TrianglePlant::Random, TrianglePlant::NoNegative, TrianglePlant::Negative][seed as usize % 3];
            let t = random_tripartite(6, 10, plant, seed).unwrap();
            let want = neg(&t).unwrap();
            assert_eq!(negtriangle_via_apsp(&mut Ctx::new(), &t, &mut distances).unwrap(), want);
            assert_eq!(negtriangle_via_zero_triangle(&mut Ctx::new(), &t, &mut zero).unwrap(), want);
            if seed < 40 {
                let t = random_tripartite(5, 10, plant, seed).unwrap();
                let want = neg(&t).unwrap();
                assert_eq!(negtriangle_via_wiener(&mut Ctx::new(), &t, &mut wiener_reachable).unwrap(), want);
            }
        }
    }

    #[test]
    fn three_layer_matches_oracle() {
        for seed in 0..20 {
            let mut t = random_tripartite(8, 8, TrianglePlant::Random, seed).unwrap();
            if seed % 4 == 0 {
                t.xy.set(1, 2, INF);
                for j in 0..8 {
                    t.yz.set(j, 3, INF);
                }
            }
            let got = three_layer_apsp_via_negtriangle(&mut Ctx::new(), &t, &mut neg).unwrap();
            assert_eq!(got, three_layer_oracle(&t).unwrap(), "seed {seed}");
        }
        for seed in 0..10 {
            let (a, b) = (random_matrix(6, 6, -9, 9, seed), random_matrix(6, 6, -9, 9, seed + 50));
            let mut tl = |t: &TriangleInstance| three_layer_apsp_via_negtriangle(&mut Ctx::new(), t, &mut neg);
            assert_eq!(minplus_via_three_layer_apsp(&mut Ctx::new(), &a, &b, &mut tl).unwrap(), minplus_brute(&a, &b).unwrap());
        }
    }
}
