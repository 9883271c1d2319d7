use serde::{Deserialize, Serialize};

use super::sort::ext_sort;
use super::stream::{Reader, Writer};
use super::DiskArray;
use crate::error::Result;
use crate::graph::{Edge, Graph};
use crate::iomachine::{Machine, Region, Word};

/// CSR adjacency on disk: `offsets[u]..offsets[u+1]` indexes `adj` (and
/// `weights`, when present).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphLayout {
    pub n: usize,
    /// Stored arcs; an undirected edge contributes two.
    pub m: usize,
    pub directed: bool,
    pub weighted: bool,
    pub sorted: bool,
    pub offsets: Region,
    pub adj: Region,
    pub weights: Option<Region>,
}

impl GraphLayout {
    pub fn host_offsets(&self, m: &Machine) -> Vec<Word> {
        m.host_region(self.offsets)
    }

    pub fn host_adj(&self, m: &Machine) -> Vec<Word> {
        m.host_region(self.adj)
    }

    /// All stored arcs in layout order.
    pub fn host_arcs(&self, m: &Machine) -> Vec<Edge> {
        let off = self.host_offsets(m);
        let adj = self.host_adj(m);
        let w = self.weights.map(|r| m.host_region(r));
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for i in off[u] as usize..off[u + 1] as usize {
                let wt = w.as_ref().map_or(1, |w| w[i]);
                out.push(Edge { u, v: adj[i] as usize, w: wt });
            }
        }
        out
    }
}

/// Lay out `g` as CSR. Arcs are grouped by source with a stable external sort,
/// so each list keeps input order unless `sorted` asks for ascending targets.
pub fn build_graph_layout(m: &mut Machine, g: &Graph, sorted: bool) -> Result<GraphLayout> {
    let input: Vec<Word> = g.edges().iter().flat_map(|e| [e.u as Word, e.v as Word, e.w]).collect();
    let src = DiskArray::place(m, &input, 3);
    let arcs_len = if g.is_directed() { g.m() } else { 2 * g.m() };
    let arcs = DiskArray::alloc(m, arcs_len, 3);
    {
        let mut r = Reader::over(src.region);
        let mut w = Writer::over(arcs.region);
        let mut rec = [0; 3];
        for _ in 0..src.len {
            r.fill(m, &mut rec)?;
            w.push_all(m, &rec)?;
            if !g.is_directed() {
                w.push_all(m, &[rec[1], rec[0], rec[2]])?;
            }
        }
        r.close(m)?;
        w.close(m)?;
    }
    csr_from_arcs(m, &arcs, g.n(), g.is_directed(), g.is_weighted(), sorted)
}

/// Rebuild `g` with every adjacency list ascending.
pub fn sort_adjacency_lists(m: &mut Machine, g: &GraphLayout) -> Result<GraphLayout> {
    if g.sorted {
        return Ok(*g);
    }
    let arcs = DiskArray::alloc(m, g.m, 3);
    let mut ro = Reader::over(g.offsets);
    let mut ra = Reader::over(g.adj);
    let mut rw = g.weights.map(Reader::over);
    let mut w = Writer::over(arcs.region);
    let mut lo = ro.next(m)?;
    for u in 0..g.n {
        let hi = ro.next(m)?;
        for _ in lo..hi {
            let v = ra.next(m)?;
            let wt = match rw.as_mut() {
                Some(r) => r.next(m)?,
                None => 1,
            };
            w.push_all(m, &[u as Word, v, wt])?;
        }
        lo = hi;
    }
    ro.close(m)?;
    ra.close(m)?;
    if let Some(r) = rw.as_mut() {
        r.close(m)?;
    }
    w.close(m)?;
    csr_from_arcs(m, &arcs, g.n, g.directed, g.weighted, true)
}

fn csr_from_arcs(
    m: &mut Machine,
    arcs: &DiskArray,
    n: usize,
    directed: bool,
    weighted: bool,
    sorted: bool,
) -> Result<GraphLayout> {
    let by_src = if sorted {
        ext_sort(m, arcs, |r| (r[0], r[1]))?
    } else {
        ext_sort(m, arcs, |r| r[0])?
    };
    let offsets = m.alloc(n + 1);
    let adj = m.alloc(arcs.len);
    let weights = weighted.then(|| m.alloc(arcs.len));

    let mut r = Reader::over(by_src.region);
    let mut wo = Writer::over(offsets);
    let mut wa = Writer::over(adj);
    let mut ww = weights.map(Writer::over);
    let mut next_node = 0usize;
    let mut rec = [0; 3];
    for i in 0..arcs.len {
        r.fill(m, &mut rec)?;
        let u = rec[0] as usize;
        while next_node <= u {
            wo.push(m, i as Word)?;
            next_node += 1;
        }
        wa.push(m, rec[1])?;
        if let Some(w) = ww.as_mut() {
            w.push(m, rec[2])?;
        }
    }
    while next_node <= n {
        wo.push(m, arcs.len as Word)?;
        next_node += 1;
    }
    r.close(m)?;
    wo.close(m)?;
    wa.close(m)?;
    if let Some(w) = ww.as_mut() {
        w.close(m)?;
    }
    Ok(GraphLayout { n, m: arcs.len, directed, weighted, sorted, offsets, adj, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iomachine::MachineConfig;

    #[test]
    fn triangle_csr() {
        let mut m = Machine::new(MachineConfig::explicit(64, 4).unwrap());
        let l = build_graph_layout(&mut m, &Graph::complete(3), true).unwrap();
        assert_eq!(l.host_offsets(&m), vec![0, 2, 4, 6]);
        assert_eq!(l.host_adj(&m), vec![1, 2, 0, 2, 0, 1]);
        assert_eq!(m.resident_lines(), 0);
    }

    #[test]
    fn empty_graph() {
        let mut m = Machine::new(MachineConfig::lru(64, 4).unwrap());
        let l = build_graph_layout(&mut m, &Graph::undirected(3), false).unwrap();
        assert_eq!(l.host_offsets(&m), vec![0, 0, 0, 0]);
    }

    #[test]
    fn resort_keeps_weights() {
        let mut m = Machine::new(MachineConfig::explicit(64, 4).unwrap());
        let g = Graph::from_weighted(3, true, &[(0, 2, 5), (0, 1, 7), (2, 0, -1)]).unwrap();
        let l = build_graph_layout(&mut m, &g, false).unwrap();
        assert_eq!(l.host_adj(&m), vec![2, 1, 0]);
        let s = sort_adjacency_lists(&mut m, &l).unwrap();
        assert_eq!(s.host_adj(&m), vec![1, 2, 0]);
        let arcs = s.host_arcs(&m);
        assert_eq!(arcs[0], Edge { u: 0, v: 1, w: 7 });
    }
}
