//! Instance transformations between problems. Each reduction builds target
//! instances, hands them to a caller-supplied solver and interprets the
//! answers. A [`Ctx`] counts solver calls, records target sizes and, when
//! given a machine configuration, replays the construction on the simulator
//! to measure its own misses.
//!
//! Solvers are plain closures returning `Result`. They are expected to be
//! pure functions of their instance.

mod conv3sum;
mod girth;
mod negtri;
mod radius_median;
mod sparse;
mod wiener;

pub use conv3sum::{conv3sum_to_3sum, conv3sum_to_zero_triangle};
pub use girth::{
    girth_edge_via_girth_vertex, girth_edge_via_stsp, girth_vertex_via_girth_edge_directed,
    girth_vertex_via_girth_edge_undirected, girth_vertex_via_stsp_directed, girth_vertex_via_stsp_undirected,
    stsp_via_girth_edge, stsp_via_girth_vertex,
};
pub use negtri::{
    minplus_via_three_layer_apsp, negtriangle_via_apsp, negtriangle_via_wiener, negtriangle_via_zero_triangle,
    three_layer_apsp_via_negtriangle, three_layer_oracle, tripartite_from_graph, ThreeLayer,
};
pub use radius_median::{radius3v4_via_median, Radius3v4};
pub use sparse::{hs_to_sparse_radius, ov_to_sparse_diameter, vector_graph, VectorGraph};
pub use wiener::{
    clamped_diameter_via_wiener, count_pairs_at_distance, distance_histogram_via_wiener, wiener_clamped_sum,
    wiener_reachable, wiener_subset_sum,
};

/// Variants with deliberately wrong correction constants, used as negative
/// controls for `verify`.
pub mod broken {
    pub use super::girth::{girth_edge_via_stsp_with, stsp_via_girth_vertex_with};
    pub use super::wiener::wiener_subset_sum_with;
}

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::extprims::{build_graph_layout, Reader, Writer};
use crate::graph::Graph;
use crate::iomachine::{Machine, MachineConfig, Mode};

/// Size of one target instance handed to a solver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetInfo {
    pub kind: String,
    /// Nodes for graphs, side length for matrices and lists.
    pub nodes: usize,
    /// Edges for graphs, total entries otherwise.
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub reduction: String,
    pub source_digest: String,
    pub targets: Vec<TargetInfo>,
    pub solver_calls: usize,
    pub answer: String,
    /// Misses of the construction alone; solver cost is not included.
    pub construction_misses: u64,
}

/// Bookkeeping shared by all reductions.
#[derive(Default)]
pub struct Ctx {
    machine: Option<Machine>,
    calls: usize,
    targets: Vec<TargetInfo>,
    misses: u64,
}

impl Ctx {
    /// Count calls and targets only.
    pub fn new() -> Self {
        Self::default()
    }

    /// Also charge the construction on an LRU machine with this geometry.
    pub fn measured(cfg: MachineConfig) -> Self {
        Ctx { machine: Some(Machine::new(cfg.with_mode(Mode::Lru))), ..Self::default() }
    }

    pub fn calls(&self) -> usize {
        self.calls
    }

    pub fn targets(&self) -> &[TargetInfo] {
        &self.targets
    }

    pub fn construction_misses(&self) -> u64 {
        self.misses
    }

    pub fn report(&self, reduction: &str, source_digest: String, answer: impl std::fmt::Display) -> ReductionReport {
        ReductionReport {
            reduction: reduction.to_string(),
            source_digest,
            targets: self.targets.clone(),
            solver_calls: self.calls,
            answer: answer.to_string(),
            construction_misses: self.misses,
        }
    }

    pub(crate) fn call<T>(&mut self, f: impl FnOnce() -> Result<T>) -> Result<T> {
        self.calls += 1;
        f()
    }

    pub(crate) fn target(&mut self, kind: &str, nodes: usize, size: usize) {
        self.targets.push(TargetInfo { kind: kind.to_string(), nodes, size });
    }

    fn charge(&mut self, f: impl FnOnce(&mut Machine) -> Result<()>) -> Result<()> {
        let Some(m) = self.machine.as_mut() else {
            return Ok(());
        };
        let mark = m.mark();
        let before = m.stats();
        f(m)?;
        m.flush();
        self.misses += (m.stats() - before).misses;
        m.release(mark);
        Ok(())
    }

    /// Run part of the construction that needs the simulator itself. Without
    /// a configured machine a scratch one is used and its misses are dropped.
    pub(crate) fn with_machine<T>(&mut self, f: impl FnOnce(&mut Machine) -> Result<T>) -> Result<T> {
        match self.machine.as_mut() {
            Some(m) => {
                let mark = m.mark();
                let before = m.stats();
                let out = f(m)?;
                m.flush();
                self.misses += (m.stats() - before).misses;
                m.release(mark);
                Ok(out)
            }
            None => f(&mut Machine::new(MachineConfig::lru(1024, 16)?)),
        }
    }

    /// One pass reading `input` words and writing `output` words.
    pub(crate) fn charge_stream(&mut self, input: usize, output: usize) -> Result<()> {
        self.charge(|m| {
            let src = m.alloc(input);
            let dst = m.alloc(output);
            let (mut r, mut w) = (Reader::over(src), Writer::over(dst));
            while !r.is_done() {
                r.next(m)?;
            }
            for _ in 0..output {
                w.push(m, 0)?;
            }
            r.close(m)?;
            w.close(m)
        })
    }

    /// Write a graph's edges and sort them into adjacency lists.
    pub(crate) fn charge_graph(&mut self, source_words: usize, g: &Graph) -> Result<()> {
        self.charge_stream(source_words, 3 * g.m())?;
        self.charge(|m| build_graph_layout(m, g, true).map(|_| ()))
    }

    pub(crate) fn graph_target(&mut self, source_words: usize, g: &Graph) -> Result<()> {
        self.target("graph", g.n(), g.m());
        self.charge_graph(source_words, g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_charge_is_linear() {
        let mut cx = Ctx::measured(MachineConfig::lru(64, 8).unwrap());
        cx.charge_stream(80, 16).unwrap();
        assert_eq!(cx.construction_misses(), 12);
        let mut quiet = Ctx::new();
        quiet.charge_stream(80, 16).unwrap();
        assert_eq!(quiet.construction_misses(), 0);
    }
}
