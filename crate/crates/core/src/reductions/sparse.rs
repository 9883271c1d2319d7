//! Orthogonal vectors and hitting set as questions about a sparse graph.

use super::Ctx;
use crate::algos::Diam2v3;
use crate::error::Result;
use crate::graph::Graph;
use crate::instances::VectorSets;
use crate::iomachine::Word;

/// The graph built from two vector lists, with the node numbering.
///
/// Nodes a_i (one per vector of U), b_i (one per vector of V), d_j (one per
/// coordinate), and two hubs: y_a adjacent to every a_i and d_j, y_b adjacent
/// to every b_i and d_j. Edge a_i–d_j iff U_i[j] = 1, b_i–d_j iff V_i[j] = 1.
#[derive(Clone, Debug)]
pub struct VectorGraph {
    pub graph: Graph,
    pub nu: usize,
    pub nv: usize,
    pub d: usize,
}

impl VectorGraph {
    pub fn a(&self, i: usize) -> usize {
        i
    }

    pub fn b(&self, i: usize) -> usize {
        self.nu + i
    }

    pub fn coord(&self, j: usize) -> usize {
        self.nu + self.nv + j
    }

    pub fn ya(&self) -> usize {
        self.nu + self.nv + self.d
    }

    pub fn yb(&self) -> usize {
        self.ya() + 1
    }
}

pub fn vector_graph(inst: &VectorSets) -> VectorGraph {
    let (nu, nv, d) = (inst.u.len(), inst.v.len(), inst.d);
    let mut vg = VectorGraph { graph: Graph::undirected(nu + nv + d + 2), nu, nv, d };
    let mut pairs = Vec::new();
    for i in 0..nu {
        pairs.push((vg.ya(), vg.a(i)));
    }
    for i in 0..nv {
        pairs.push((vg.yb(), vg.b(i)));
    }
    for j in 0..d {
        pairs.push((vg.ya(), vg.coord(j)));
        pairs.push((vg.yb(), vg.coord(j)));
    }
    for (i, x) in inst.u.iter().enumerate() {
        pairs.extend(x.iter().enumerate().filter(|(_, &bit)| bit == 1).map(|(j, _)| (vg.a(i), vg.coord(j))));
    }
    for (i, x) in inst.v.iter().enumerate() {
        pairs.extend(x.iter().enumerate().filter(|(_, &bit)| bit == 1).map(|(j, _)| (vg.b(i), vg.coord(j))));
    }
    vg.graph = Graph::from_pairs(vg.graph.n(), false, &pairs).expect("nodes in range");
    vg
}

fn is_zero(x: &[Word]) -> bool {
    x.iter().all(|&b| b == 0)
}

/// OV by one diameter call: a_i and b_k are at distance 2 iff they share a
/// coordinate, and every other pair is within 2, so an orthogonal pair
/// exists iff the diameter exceeds 2. An all-zero vector answers directly.
pub fn ov_to_sparse_diameter(
    cx: &mut Ctx,
    inst: &VectorSets,
    solver: &mut impl FnMut(&Graph) -> Result<Diam2v3>,
) -> Result<bool> {
    if inst.u.is_empty() || inst.v.is_empty() {
        return Ok(false);
    }
    if inst.u.iter().chain(&inst.v).any(|x| is_zero(x)) {
        return Ok(true);
    }
    let vg = vector_graph(inst);
    cx.graph_target((inst.u.len() + inst.v.len()) * inst.d, &vg.graph)?;
    Ok(cx.call(|| solver(&vg.graph))? == Diam2v3::MoreThanTwo)
}

/// Hitting set on the same graph. The hub y_a always has eccentricity 2,
/// so the plain radius says nothing; the solver instead reports the
/// smallest eccentricity among the given candidate centers, and the answer
/// is whether some a_i has eccentricity at most 2.
pub fn hs_to_sparse_radius(
    cx: &mut Ctx,
    inst: &VectorSets,
    solver: &mut impl FnMut(&Graph, &[usize]) -> Result<Word>,
) -> Result<bool> {
    if inst.u.is_empty() {
        return Ok(false);
    }
    if inst.v.is_empty() {
        return Ok(true);
    }
    let vg = vector_graph(inst);
    cx.graph_target((inst.u.len() + inst.v.len()) * inst.d, &vg.graph)?;
    let centers: Vec<usize> = (0..vg.nu).map(|i| vg.a(i)).collect();
    Ok(cx.call(|| solver(&vg.graph, &centers))? <= 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_vectors;
    use crate::oracles::{bfs, diameter, hs_brute, ov_brute};

    fn diam(g: &Graph) -> Result<Diam2v3> {
        Ok(match diameter(g)? {
            0 | 1 => Diam2v3::One,
            2 => Diam2v3::Two,
            _ => Diam2v3::MoreThanTwo,
        })
    }

    fn min_ecc(g: &Graph, c: &[usize]) -> Result<Word> {
        Ok(c.iter().map(|&v| bfs(g, v).into_iter().max().unwrap()).min().unwrap())
    }

    #[test]
    fn examples() {
        let orth = VectorSets::from_bits(&[&[1, 0]], &[&[0, 1]]).unwrap();
        let same = VectorSets::from_bits(&[&[1, 0]], &[&[1, 0]]).unwrap();
        assert!(ov_to_sparse_diameter(&mut Ctx::new(), &orth, &mut diam).unwrap());
        assert!(!ov_to_sparse_diameter(&mut Ctx::new(), &same, &mut diam).unwrap());
        let vg = vector_graph(&orth);
        assert_eq!(bfs(&vg.graph, vg.a(0))[vg.b(0)], 3);

        let hit = VectorSets::from_bits(&[&[1, 1]], &[&[1, 0], &[0, 1]]).unwrap();
        assert!(hs_to_sparse_radius(&mut Ctx::new(), &hit, &mut min_ecc).unwrap());
        assert!(!hs_to_sparse_radius(&mut Ctx::new(), &orth, &mut min_ecc).unwrap());
    }

    #[test]
    fn random_agree_with_brute() {
        for seed in 0..100 {
            let inst = random_vectors(16, 6, 0.4, seed).unwrap();
            let mut cx = Ctx::new();
            assert_eq!(ov_to_sparse_diameter(&mut cx, &inst, &mut diam).unwrap(), ov_brute(&inst), "seed {seed}");
            assert!(cx.calls() <= 1);
            let inst = random_vectors(16, 6, 0.7, seed).unwrap();
            assert_eq!(hs_to_sparse_radius(&mut Ctx::new(), &inst, &mut min_ecc).unwrap(), hs_brute(&inst), "seed {seed}");
        }
    }
}
