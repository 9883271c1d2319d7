//! Soundness checks. Each reduction runs with solver handles and its
//! interpreted answer is compared with the source problem's oracle, over
//! randomized families and, where the space is small enough, every instance
//! up to a few nodes.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algos::{apsp_repeated_squaring, diameter_2v3_cache_aware, three_sum_baseline, zero_triangle_blocked, Diam2v3};
use crate::error::{Error, Result};
use crate::formats::{digest_json, Instance};
use crate::gen::{self, TrianglePlant};
use crate::graph::Graph;
use crate::instances::{Matrix, ThreeSumInstance, TriangleInstance, TriangleTarget, VectorSets};
use crate::iomachine::{Machine, MachineConfig, Mode, Word, INF};
use crate::oracles;
use crate::reductions::{self as red, broken, Ctx, Radius3v4};

#[derive(Clone, Copy, Debug)]
pub struct ReductionSpec {
    pub name: &'static str,
    pub about: &'static str,
    /// Instance kind of the source problem.
    pub source: &'static str,
    /// Deliberately wrong variant kept as a negative control.
    pub control: bool,
}

const fn spec(name: &'static str, about: &'static str, source: &'static str) -> ReductionSpec {
    ReductionSpec { name, about, source, control: false }
}

const fn control(name: &'static str, about: &'static str, source: &'static str) -> ReductionSpec {
    ReductionSpec { name, about, source, control: true }
}

pub const REDUCTIONS: &[ReductionSpec] = &[
    spec("conv3sum_to_3sum", "convolution 3SUM to 3SUM by index encoding", "conv3sum"),
    spec("conv3sum_to_zero_triangle", "three-list convolution 3SUM to zero triangle, sqrt(n) + 1 calls", "conv3sum3"),
    spec("ov_to_sparse_diameter", "orthogonal vectors to diameter 2 vs 3 on a sparse graph", "vectors"),
    spec("hs_to_sparse_radius", "hitting set to radius 2 vs 3 on a sparse graph", "vectors"),
    spec("wiener_subset_sum", "sum of distances over X x T from four Wiener calls", "graph"),
    spec("wiener_clamped_sum", "distance sums clamped to [k, k+1] through a layered graph", "graph"),
    spec("count_pairs_at_distance", "pairs at distance exactly k and at least k from clamped sums", "graph"),
    spec("clamped_diameter_via_wiener", "min(diameter, k) by binary search on clamped sums", "graph"),
    spec("distance_histogram_via_wiener", "pairs at each distance 1..k from clamped sums", "graph"),
    spec("radius3v4_via_median", "radius at most 2, 3, or 4+ from one median call", "graph"),
    spec("negtriangle_via_wiener", "negative triangle from one subset Wiener sum", "triangle"),
    spec("negtriangle_via_apsp", "negative triangle from one APSP call on a layered digraph", "triangle"),
    spec("three_layer_apsp_via_negtriangle", "lightest triangle per pair by parallel binary search", "triangle"),
    spec("minplus_via_three_layer_apsp", "(min,+) product from one three-layer call", "matrix-pair"),
    spec("negtriangle_via_zero_triangle", "negative triangle from O(log W) zero-triangle calls on bit prefixes", "triangle"),
    spec("girth_edge_via_stsp", "shortest cycle through an edge from one s-t distance", "graph"),
    spec("stsp_via_girth_edge", "s-t distance from the shortest cycle through an added edge", "graph"),
    spec("stsp_via_girth_vertex", "s-t distance from the shortest cycle through an added node", "graph"),
    spec("girth_edge_via_girth_vertex", "shortest cycle through an edge by subdividing it", "graph"),
    spec("girth_vertex_via_girth_edge_directed", "shortest cycle through a node by splitting it (directed)", "graph"),
    spec("girth_vertex_via_stsp_directed", "shortest cycle through a node as an out-to-in distance (directed)", "graph"),
    spec("girth_vertex_via_stsp_undirected", "shortest cycle through a node from log(degree) split distances", "graph"),
    spec("girth_vertex_via_girth_edge_undirected", "shortest cycle through a node from log(degree) girth calls", "graph"),
    control("broken_girth_edge_via_stsp", "girth through an edge with the correction off by +1", "graph"),
    control("broken_stsp_via_girth_vertex", "s-t distance with the correction off by -1", "graph"),
    control("broken_wiener_subset_sum", "subset Wiener sum with pendant length 1 instead of 2", "graph"),
];

pub fn find_reduction(name: &str) -> Result<&'static ReductionSpec> {
    REDUCTIONS
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| Error::Argument(format!("unknown reduction `{name}`")))
}

/// Extra arguments of a reduction. Missing ones take the defaults of
/// [`Params::resolved`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xs: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ts: Option<Vec<usize>>,
}

struct Resolved {
    edge: usize,
    node: usize,
    s: usize,
    t: usize,
    k: usize,
    xs: Vec<usize>,
    ts: Vec<usize>,
}

impl Params {
    /// Edge 0, node 0, s = 0, t = n − 1, k = 2, X = T = all nodes.
    fn resolved(&self, n: usize) -> Resolved {
        let all: Vec<usize> = (0..n).collect();
        Resolved {
            edge: self.edge.unwrap_or(0),
            node: self.node.unwrap_or(0),
            s: self.s.unwrap_or(0),
            t: self.t.unwrap_or(n.saturating_sub(1)),
            k: self.k.unwrap_or(2),
            xs: self.xs.clone().unwrap_or_else(|| all.clone()),
            ts: self.ts.clone().unwrap_or(all),
        }
    }
}

/// Where solver handles come from. `Algo` uses the simulated I/O algorithms
/// where one exists for the target problem and the oracle elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solvers {
    Oracle,
    Algo { m: usize, b: usize },
}

fn on_machine<T>(mode: Mode, m: usize, b: usize, f: impl FnOnce(&mut Machine) -> Result<T>) -> Result<T> {
    f(&mut Machine::new(MachineConfig::new(m, b, mode)?))
}

fn word(x: Word) -> String {
    if x >= INF {
        "inf".into()
    } else {
        x.to_string()
    }
}

fn wrong_source(name: &str, inst: &Instance) -> Error {
    Error::Argument(format!("{name} cannot take a {} instance", inst.kind()))
}

fn graph_of<'a>(name: &str, inst: &'a Instance) -> Result<&'a Graph> {
    match inst {
        Instance::Graph(g) => Ok(g),
        _ => Err(wrong_source(name, inst)),
    }
}

fn vectors_of<'a>(name: &str, inst: &'a Instance) -> Result<&'a VectorSets> {
    match inst {
        Instance::Vectors(v) => Ok(v),
        _ => Err(wrong_source(name, inst)),
    }
}

/// Triangle sources may also be graphs, read as three copies of the node set.
fn triangle_of(name: &str, inst: &Instance) -> Result<TriangleInstance> {
    match inst {
        Instance::Triangle(t) => Ok(t.clone()),
        Instance::Graph(g) => Ok(red::tripartite_from_graph(g)),
        _ => Err(wrong_source(name, inst)),
    }
}

fn diameter_class(g: &Graph) -> Result<Diam2v3> {
    Ok(match oracles::diameter(g)? {
        0 | 1 => Diam2v3::One,
        2 => Diam2v3::Two,
        _ => Diam2v3::MoreThanTwo,
    })
}

fn min_ecc(g: &Graph, cands: &[usize]) -> Result<Word> {
    let ecc = oracles::eccentricities(g)?;
    Ok(cands.iter().map(|&c| ecc[c]).min().unwrap_or(INF))
}

type Apsp = Box<dyn FnMut(&Graph) -> Result<Vec<Vec<Word>>>>;
type TriSolver = Box<dyn FnMut(&TriangleInstance) -> Result<bool>>;

fn triangle_solver(solvers: Solvers, target: TriangleTarget) -> TriSolver {
    match solvers {
        Solvers::Oracle => Box::new(move |t| oracles::triangle_brute(t, target)),
        Solvers::Algo { m, b } => {
            Box::new(move |t| on_machine(Mode::Explicit, m, b, |mm| zero_triangle_blocked(mm, t, target)))
        }
    }
}

fn apsp_solver(solvers: Solvers) -> Apsp {
    match solvers {
        Solvers::Oracle => Box::new(oracles::distances),
        Solvers::Algo { m, b } => Box::new(move |g| {
            let r = on_machine(Mode::Explicit, m, b, |mm| apsp_repeated_squaring(mm, g))?;
            Ok(r.dist.to_rows())
        }),
    }
}

/// Run reduction `name` on a source instance and render its answer.
pub fn run_reduction(cx: &mut Ctx, name: &str, inst: &Instance, params: &Params, solvers: Solvers) -> Result<String> {
    find_reduction(name)?;
    let stsp = &mut |g: &Graph, s: usize, t: usize| oracles::stsp_brute(g, s, t);
    let gedge = &mut |g: &Graph, e: usize| oracles::girth_through_edge_brute(g, e);
    let gvert = &mut |g: &Graph, v: usize| oracles::girth_through_vertex_brute(g, v);
    let wiener = &mut red::wiener_reachable;
    Ok(match name {
        "conv3sum_to_3sum" => {
            let Instance::Conv3sum { a } = inst else { return Err(wrong_source(name, inst)) };
            let mut solver: Box<dyn FnMut(&ThreeSumInstance) -> Result<bool>> = match solvers {
                Solvers::Oracle => Box::new(|t| Ok(oracles::three_sum_ram(t))),
                Solvers::Algo { m, b } => Box::new(move |t| on_machine(Mode::Explicit, m, b, |mm| three_sum_baseline(mm, t))),
            };
            red::conv3sum_to_3sum(cx, a, &mut solver)?.to_string()
        }
        "conv3sum_to_zero_triangle" => {
            let Instance::Conv3sum3 { a, b, c } = inst else { return Err(wrong_source(name, inst)) };
            let mut solver = triangle_solver(solvers, TriangleTarget::Zero);
            red::conv3sum_to_zero_triangle(cx, a, b, c, &mut solver)?.to_string()
        }
        "ov_to_sparse_diameter" => {
            let v = vectors_of(name, inst)?;
            let mut solver: Box<dyn FnMut(&Graph) -> Result<Diam2v3>> = match solvers {
                Solvers::Oracle => Box::new(diameter_class),
                Solvers::Algo { m, b } => Box::new(move |g| on_machine(Mode::Explicit, m, b, |mm| diameter_2v3_cache_aware(mm, g))),
            };
            red::ov_to_sparse_diameter(cx, v, &mut solver)?.to_string()
        }
        "hs_to_sparse_radius" => red::hs_to_sparse_radius(cx, vectors_of(name, inst)?, &mut min_ecc)?.to_string(),
        "wiener_subset_sum" | "broken_wiener_subset_sum" => {
            let g = graph_of(name, inst)?;
            let p = params.resolved(g.n());
            if name.starts_with("broken") {
                word(broken::wiener_subset_sum_with(cx, g, &p.xs, &p.ts, 1, wiener)?)
            } else {
                word(red::wiener_subset_sum(cx, g, &p.xs, &p.ts, wiener)?)
            }
        }
        "wiener_clamped_sum" => {
            let g = graph_of(name, inst)?;
            let p = params.resolved(g.n());
            word(red::wiener_clamped_sum(cx, g, &p.xs, &p.ts, p.k, wiener)?)
        }
        "count_pairs_at_distance" => {
            let g = graph_of(name, inst)?;
            let p = params.resolved(g.n());
            let (eq, ge) = red::count_pairs_at_distance(cx, g, &p.xs, &p.ts, p.k, wiener)?;
            format!("{eq} {ge}")
        }
        "clamped_diameter_via_wiener" => {
            let g = graph_of(name, inst)?;
            word(red::clamped_diameter_via_wiener(cx, g, params.resolved(g.n()).k, wiener)?)
        }
        "distance_histogram_via_wiener" => {
            let g = graph_of(name, inst)?;
            format!("{:?}", red::distance_histogram_via_wiener(cx, g, params.resolved(g.n()).k, wiener)?)
        }
        "radius3v4_via_median" => red::radius3v4_via_median(cx, graph_of(name, inst)?, &mut oracles::median)?.to_string(),
        "negtriangle_via_wiener" => red::negtriangle_via_wiener(cx, &triangle_of(name, inst)?, wiener)?.to_string(),
        "negtriangle_via_apsp" => {
            red::negtriangle_via_apsp(cx, &triangle_of(name, inst)?, &mut apsp_solver(solvers))?.to_string()
        }
        "three_layer_apsp_via_negtriangle" => {
            let mut solver = triangle_solver(solvers, TriangleTarget::Negative);
            digest_json(&red::three_layer_apsp_via_negtriangle(cx, &triangle_of(name, inst)?, &mut solver)?)
        }
        "minplus_via_three_layer_apsp" => {
            let Instance::MatrixPair { a, b } = inst else { return Err(wrong_source(name, inst)) };
            let mut inner = |t: &TriangleInstance| {
                let mut neg = triangle_solver(solvers, TriangleTarget::Negative);
                match solvers {
                    Solvers::Oracle => red::three_layer_oracle(t),
                    Solvers::Algo { .. } => red::three_layer_apsp_via_negtriangle(&mut Ctx::new(), t, &mut neg),
                }
            };
            digest_json(&red::minplus_via_three_layer_apsp(cx, a, b, &mut inner)?)
        }
        "negtriangle_via_zero_triangle" => {
            let mut solver = triangle_solver(solvers, TriangleTarget::Zero);
            red::negtriangle_via_zero_triangle(cx, &triangle_of(name, inst)?, &mut solver)?.to_string()
        }
        _ => {
            let g = graph_of(name, inst)?;
            let p = params.resolved(g.n());
            word(match name {
                "girth_edge_via_stsp" => red::girth_edge_via_stsp(cx, g, p.edge, stsp)?,
                "broken_girth_edge_via_stsp" => broken::girth_edge_via_stsp_with(cx, g, p.edge, 1, stsp)?,
                "stsp_via_girth_edge" => red::stsp_via_girth_edge(cx, g, p.s, p.t, gedge)?,
                "stsp_via_girth_vertex" => red::stsp_via_girth_vertex(cx, g, p.s, p.t, gvert)?,
                "broken_stsp_via_girth_vertex" => broken::stsp_via_girth_vertex_with(cx, g, p.s, p.t, 1, gvert)?,
                "girth_edge_via_girth_vertex" => red::girth_edge_via_girth_vertex(cx, g, p.edge, gvert)?,
                "girth_vertex_via_girth_edge_directed" => red::girth_vertex_via_girth_edge_directed(cx, g, p.node, gedge)?,
                "girth_vertex_via_stsp_directed" => red::girth_vertex_via_stsp_directed(cx, g, p.node, stsp)?,
                "girth_vertex_via_stsp_undirected" => red::girth_vertex_via_stsp_undirected(cx, g, p.node, stsp)?,
                "girth_vertex_via_girth_edge_undirected" => {
                    red::girth_vertex_via_girth_edge_undirected(cx, g, p.node, gedge)?
                }
                _ => unreachable!("registered reduction without a runner"),
            })
        }
    })
}

/// The source problem's answer, rendered like [`run_reduction`]'s.
pub fn expected_answer(name: &str, inst: &Instance, params: &Params) -> Result<String> {
    find_reduction(name)?;
    let name = name.strip_prefix("broken_").unwrap_or(name);
    let neg = |inst: &Instance| -> Result<bool> {
        match inst {
            Instance::Graph(g) => oracles::graph_triangle_brute(g, TriangleTarget::Negative),
            _ => oracles::triangle_brute(&triangle_of(name, inst)?, TriangleTarget::Negative),
        }
    };
    Ok(match name {
        "conv3sum_to_3sum" => {
            let Instance::Conv3sum { a } = inst else { return Err(wrong_source(name, inst)) };
            oracles::conv3sum_brute(a).to_string()
        }
        "conv3sum_to_zero_triangle" => {
            let Instance::Conv3sum3 { a, b, c } = inst else { return Err(wrong_source(name, inst)) };
            oracles::conv3sum3_brute(a, b, c).to_string()
        }
        "ov_to_sparse_diameter" => oracles::ov_brute(vectors_of(name, inst)?).to_string(),
        "hs_to_sparse_radius" => oracles::hs_brute(vectors_of(name, inst)?).to_string(),
        "radius3v4_via_median" => {
            let g = graph_of(name, inst)?;
            match oracles::radius(g)? {
                0..=2 => Radius3v4::AtMostTwo,
                3 => Radius3v4::Three,
                _ => Radius3v4::FourPlus,
            }
            .to_string()
        }
        "negtriangle_via_wiener" | "negtriangle_via_apsp" | "negtriangle_via_zero_triangle" => neg(inst)?.to_string(),
        "three_layer_apsp_via_negtriangle" => digest_json(&red::three_layer_oracle(&triangle_of(name, inst)?)?),
        "minplus_via_three_layer_apsp" => {
            let Instance::MatrixPair { a, b } = inst else { return Err(wrong_source(name, inst)) };
            digest_json(&oracles::minplus_brute(a, b)?)
        }
        _ => {
            let g = graph_of(name, inst)?;
            let p = params.resolved(g.n());
            let dist = || oracles::distances(g);
            match name {
                "wiener_subset_sum" => word(oracles::subset_distance_sum(g, &p.xs, &p.ts)?),
                "wiener_clamped_sum" => {
                    let d = dist()?;
                    let k = p.k as Word;
                    let mut s = 0;
                    for &x in &p.xs {
                        for &t in &p.ts {
                            s += d[x][t].min(k + 1).max(k);
                        }
                    }
                    word(s)
                }
                "count_pairs_at_distance" => {
                    let d = dist()?;
                    let k = p.k as Word;
                    let pairs = p.xs.iter().flat_map(|&x| p.ts.iter().map(move |&t| (x, t)));
                    let eq = pairs.clone().filter(|&(x, t)| d[x][t] == k).count();
                    let ge = pairs.filter(|&(x, t)| d[x][t] >= k).count();
                    format!("{eq} {ge}")
                }
                "clamped_diameter_via_wiener" => word(oracles::diameter(g)?.min(p.k as Word)),
                "distance_histogram_via_wiener" => format!("{:?}", oracles::distance_histogram(g, p.k)),
                "girth_edge_via_stsp" | "girth_edge_via_girth_vertex" => word(oracles::girth_through_edge_brute(g, p.edge)?),
                "stsp_via_girth_edge" | "stsp_via_girth_vertex" => word(oracles::stsp_brute(g, p.s, p.t)?),
                _ => word(oracles::girth_through_vertex_brute(g, p.node)?),
            }
        }
    })
}

// ---- instance families --------------------------------------------------------

/// One source instance with its arguments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub instance: Instance,
    #[serde(default)]
    pub params: Params,
}

fn case(instance: Instance, params: Params) -> Case {
    Case { instance, params }
}

fn subset(r: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut s: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.5)).collect();
    if s.is_empty() && n > 0 {
        s.push(r.gen_range(0..n));
    }
    s
}

fn reweighted(g: &Graph, r: &mut ChaCha8Rng, lo: Word, hi: Word) -> Graph {
    let mut h = Graph::new(g.n(), g.is_directed(), true);
    for e in g.edges() {
        h.add_edge(e.u, e.v, r.gen_range(lo..=hi)).expect("nodes in range");
    }
    h.set_weighted(true);
    h
}

/// A directed cycle through all nodes in random order plus random arcs.
fn strongly_connected(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = gen::rng(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut r);
    let mut g = gen::gnp(n, p, true, seed ^ 0x5bd1);
    for i in 0..if n > 1 { n } else { 0 } {
        g.add_edge(order[i], order[(i + 1) % n], 1).expect("nodes in range");
    }
    g
}

fn some_graph(r: &mut ChaCha8Rng, n: usize, directed: bool, weighted: bool, seed: u64) -> Graph {
    let p = r.gen_range(0.1..0.35);
    let mut g = gen::gnp(n, p, directed, seed);
    if g.m() == 0 && n > 1 {
        g.add_edge(0, 1, 1).expect("nodes in range");
    }
    if weighted {
        g = reweighted(&g, r, 1, 9);
    }
    g
}

fn with_holes(m: &mut Matrix, r: &mut ChaCha8Rng, p: f64) {
    for x in m.data.iter_mut() {
        if r.gen_bool(p) {
            *x = INF;
        }
    }
}

fn bits(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

fn directed_only(name: &str) -> bool {
    name.ends_with("_directed")
}

fn undirected_only(name: &str) -> bool {
    name.ends_with("_undirected")
}

/// A random case of size about `n`.
pub fn random_case(name: &str, n: usize, seed: u64) -> Result<Case> {
    find_reduction(name)?;
    let base = name.strip_prefix("broken_").unwrap_or(name);
    let mut r = gen::rng(seed);
    let pick = seed % 3;
    let n = n.max(2);
    let none = Params::default();
    Ok(match base {
        "conv3sum_to_3sum" => {
            let range = 2 * n as Word;
            let mut a: Vec<Word> = (0..n).map(|_| r.gen_range(-range..=range)).collect();
            if pick == 0 {
                let i = r.gen_range(0..n);
                let j = r.gen_range(0..n - i);
                a[i + j] = -(a[i] + a[j]);
            }
            case(Instance::Conv3sum { a }, none)
        }
        "conv3sum_to_zero_triangle" => {
            let range = 2 * n as Word;
            let mut lists: Vec<Vec<Word>> = (0..3).map(|_| (0..n).map(|_| r.gen_range(-range..=range)).collect()).collect();
            if pick == 0 {
                let s = r.gen_range(0..n);
                let t = r.gen_range(0..n - s);
                lists[2][s + t] = -(lists[0][s] + lists[1][t]);
            }
            let (c, b, a) = (lists.pop().unwrap(), lists.pop().unwrap(), lists.pop().unwrap());
            case(Instance::Conv3sum3 { a, b, c }, none)
        }
        "ov_to_sparse_diameter" => {
            let d = 2 * bits(n) + 2;
            let v = match pick {
                0 => gen::planted_orthogonal_pair(n, d, 0.5, seed)?,
                1 => gen::no_orthogonal_pair(n, d, 0.6, seed)?,
                _ => gen::random_vectors(n, d, 0.5, seed)?,
            };
            case(Instance::Vectors(v), none)
        }
        "hs_to_sparse_radius" => {
            let d = bits(n) + 3;
            let v = match pick {
                0 => gen::hs_without_hit(n, d, 0.6, seed)?,
                1 => gen::random_vectors(n, d, 0.85, seed)?,
                _ => gen::random_vectors(n, d, 0.6, seed)?,
            };
            case(Instance::Vectors(v), none)
        }
        "wiener_subset_sum" => {
            let g = match pick {
                0 => gen::connected_graph(n, 0.15, seed),
                1 => reweighted(&gen::connected_graph(n, 0.15, seed), &mut r, 1, 9),
                _ => strongly_connected(n, 0.15, seed),
            };
            let p = Params { xs: Some(subset(&mut r, n)), ts: Some(subset(&mut r, n)), ..none };
            case(Instance::Graph(g), p)
        }
        "wiener_clamped_sum" | "count_pairs_at_distance" => {
            let g = some_graph(&mut r, n, pick == 1, false, seed);
            let p = Params { k: Some(r.gen_range(1..=4)), xs: Some(subset(&mut r, n)), ts: Some(subset(&mut r, n)), ..none };
            case(Instance::Graph(g), p)
        }
        "clamped_diameter_via_wiener" | "distance_histogram_via_wiener" => {
            let g = some_graph(&mut r, n, pick == 1, false, seed);
            case(Instance::Graph(g), Params { k: Some(r.gen_range(1..=5)), ..none })
        }
        "radius3v4_via_median" => {
            let g = match seed % 4 {
                0 => Graph::path(n),
                1 => Graph::cycle(n.max(3)),
                2 => gen::connected_graph(n, 0.03, seed),
                _ => gen::connected_graph(n, 0.12, seed),
            };
            case(Instance::Graph(g), none)
        }
        "negtriangle_via_wiener" | "negtriangle_via_apsp" | "negtriangle_via_zero_triangle" => {
            let plant = [TrianglePlant::Negative, TrianglePlant::NoNegative, TrianglePlant::Random][pick as usize];
            let mut t = gen::random_tripartite(n, 3 * n as Word, plant, seed)?;
            if plant == TrianglePlant::Random {
                with_holes(&mut t.xy, &mut r, 0.2);
            }
            case(Instance::Triangle(t), none)
        }
        "three_layer_apsp_via_negtriangle" => {
            let mut t = gen::random_tripartite(n, 2 * n as Word, TrianglePlant::Random, seed)?;
            if pick != 0 {
                with_holes(&mut t.xy, &mut r, 0.15);
                with_holes(&mut t.zx, &mut r, 0.15);
            }
            case(Instance::Triangle(t), none)
        }
        "minplus_via_three_layer_apsp" => {
            let w = 3 * n as Word;
            let mut a = gen::random_matrix(n, n, -w, w, seed);
            let b = gen::random_matrix(n, n, -w, w, seed ^ 0x77);
            if pick != 0 {
                with_holes(&mut a, &mut r, 0.2);
            }
            case(Instance::MatrixPair { a, b }, none)
        }
        _ => {
            let directed = if directed_only(base) {
                true
            } else if undirected_only(base) {
                false
            } else {
                pick != 1
            };
            let g = some_graph(&mut r, n, directed, seed % 4 == 3, seed);
            let p = Params {
                edge: Some(r.gen_range(0..g.m())),
                node: Some(r.gen_range(0..n)),
                s: Some(r.gen_range(0..n)),
                t: Some(r.gen_range(0..n)),
                ..none
            };
            case(Instance::Graph(g), p)
        }
    })
}

/// Every graph on `n` labeled nodes without loops or parallel edges.
pub fn all_graphs(n: usize, directed: bool) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| if directed { u != v } else { u < v })
        .collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let chosen: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
            Graph::from_pairs(n, directed, &chosen).expect("nodes in range")
        })
        .collect()
}

/// Complete graph on `n` nodes with every assignment of weights from
/// `weights` or absence to its edges.
fn weighted_cliques(n: usize, weights: &[Word]) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let choices = weights.len() + 1;
    let total = choices.pow(pairs.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut g = Graph::new(n, false, true);
            for &(u, v) in &pairs {
                let c = code % choices;
                code /= choices;
                if c > 0 {
                    g.add_edge(u, v, weights[c - 1]).expect("nodes in range");
                }
            }
            g.set_weighted(true);
            g
        })
        .collect()
}

fn small_lists(max_len: usize, values: &[Word]) -> Vec<Vec<Word>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let next: Vec<Vec<Word>> = frontier
            .iter()
            .flat_map(|l: &Vec<Word>| {
                values.iter().map(move |&x| {
                    let mut l = l.clone();
                    l.push(x);
                    l
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn graphs_up_to(max_n: usize, directed: bool) -> impl Iterator<Item = Graph> {
    (1..=max_n).flat_map(move |n| all_graphs(n, directed))
}

/// Every small instance the reduction accepts: graphs on up to 5 nodes
/// (4 when directed), triangles with weights in [−4, 4] on three nodes and
/// [−2, 2] on four, vector sets of dimension 3 with up to two vectors a
/// side, and short lists. Empty when no exhaustive suite applies.
pub fn exhaustive_cases(name: &str) -> Result<Vec<Case>> {
    find_reduction(name)?;
    let base = name.strip_prefix("broken_").unwrap_or(name);
    let none = Params::default();
    let graph_cases = |gs: Vec<Graph>, per: &dyn Fn(&Graph) -> Vec<Params>| -> Vec<Case> {
        gs.into_iter()
            .flat_map(|g| per(&g).into_iter().map(move |p| case(Instance::Graph(g.clone()), p)))
            .collect()
    };
    let subsets = |n: usize| -> Vec<(Vec<usize>, Vec<usize>)> {
        let all: Vec<usize> = (0..n).collect();
        let evens: Vec<usize> = (0..n).step_by(2).collect();
        let odds: Vec<usize> = (1..n).step_by(2).collect();
        let mut out = vec![(all.clone(), all.clone()), (vec![0], all)];
        if !odds.is_empty() {
            out.push((evens, odds));
        }
        out
    };
    let both = || graphs_up_to(5, false).chain(graphs_up_to(4, true));
    Ok(match base {
        "conv3sum_to_3sum" => small_lists(4, &[-2, -1, 0, 1, 2])
            .into_iter()
            .map(|a| case(Instance::Conv3sum { a }, none.clone()))
            .collect(),
        "conv3sum_to_zero_triangle" => {
            let mut out = Vec::new();
            for len in 1..=3usize {
                let lists: Vec<Vec<Word>> = small_lists(len, &[-1, 0, 1]).into_iter().filter(|l| l.len() == len).collect();
                for a in &lists {
                    for b in &lists {
                        for c in &lists {
                            out.push(case(Instance::Conv3sum3 { a: a.clone(), b: b.clone(), c: c.clone() }, none.clone()));
                        }
                    }
                }
            }
            out
        }
        "ov_to_sparse_diameter" | "hs_to_sparse_radius" => {
            let vecs: Vec<Vec<Word>> = (0..8).map(|m| (0..3).map(|j| (m >> j) & 1).collect()).collect();
            let mut lists: Vec<Vec<Vec<Word>>> = vec![vec![]];
            lists.extend(vecs.iter().map(|v| vec![v.clone()]));
            for a in &vecs {
                for b in &vecs {
                    lists.push(vec![a.clone(), b.clone()]);
                }
            }
            let mut out = Vec::new();
            for u in &lists {
                for v in &lists {
                    out.push(case(Instance::Vectors(VectorSets { d: 3, u: u.clone(), v: v.clone() }), none.clone()));
                }
            }
            out
        }
        "wiener_subset_sum" => {
            let gs = both().filter(|g| g.is_strongly_connected()).collect();
            graph_cases(gs, &|g| {
                subsets(g.n()).into_iter().map(|(x, t)| Params { xs: Some(x), ts: Some(t), ..Params::default() }).collect()
            })
        }
        "wiener_clamped_sum" | "count_pairs_at_distance" => graph_cases(both().collect(), &|g| {
            let mut ps = Vec::new();
            for (x, t) in subsets(g.n()) {
                for k in 1..=3 {
                    ps.push(Params { k: Some(k), xs: Some(x.clone()), ts: Some(t.clone()), ..Params::default() });
                }
            }
            ps
        }),
        "clamped_diameter_via_wiener" | "distance_histogram_via_wiener" => {
            graph_cases(both().collect(), &|_| (1..=4).map(|k| Params { k: Some(k), ..Params::default() }).collect())
        }
        "radius3v4_via_median" => {
            let gs = graphs_up_to(5, false).filter(|g| g.is_strongly_connected()).collect();
            graph_cases(gs, &|_| vec![Params::default()])
        }
        "negtriangle_via_wiener" => weighted_cliques(3, &(-4..=4).collect::<Vec<_>>())
            .into_iter()
            .map(|g| case(Instance::Graph(g), none.clone()))
            .collect(),
        "negtriangle_via_apsp" | "negtriangle_via_zero_triangle" => weighted_cliques(3, &(-4..=4).collect::<Vec<_>>())
            .into_iter()
            .chain(weighted_cliques(4, &[-2, -1, 0, 1, 2]))
            .map(|g| case(Instance::Graph(g), none.clone()))
            .collect(),
        "three_layer_apsp_via_negtriangle" | "minplus_via_three_layer_apsp" => Vec::new(),
        _ => {
            let gs: Vec<Graph> = if directed_only(base) {
                graphs_up_to(4, true).collect()
            } else if undirected_only(base) {
                graphs_up_to(5, false).collect()
            } else {
                both().collect()
            };
            let by_edge = base.starts_with("girth_edge");
            let by_pair = base.starts_with("stsp");
            graph_cases(gs, &|g| {
                if by_edge {
                    (0..g.m()).map(|e| Params { edge: Some(e), ..Params::default() }).collect()
                } else if by_pair {
                    (0..g.n())
                        .flat_map(|s| (0..g.n()).map(move |t| Params { s: Some(s), t: Some(t), ..Params::default() }))
                        .collect()
                } else {
                    (0..g.n()).map(|v| Params { node: Some(v), ..Params::default() }).collect()
                }
            })
        }
    })
}

// ---- driver -------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub case: Case,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub reduction: String,
    pub randomized: usize,
    pub exhaustive: usize,
    pub max_calls: usize,
    pub mean_calls: f64,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

struct Checked {
    calls: usize,
    mismatch: Option<Counterexample>,
}

fn check(name: &str, c: &Case) -> Checked {
    let mut cx = Ctx::new();
    let got = run_reduction(&mut cx, name, &c.instance, &c.params, Solvers::Oracle).unwrap_or_else(|e| format!("error: {e}"));
    let expected = expected_answer(name, &c.instance, &c.params).unwrap_or_else(|e| format!("error: {e}"));
    let mismatch = (got != expected).then(|| Counterexample { case: c.clone(), expected, got });
    Checked { calls: cx.calls(), mismatch }
}

/// Check `trials` random cases at each size, then the exhaustive suite if
/// asked. The reported counterexample is the first in generation order.
pub fn verify(name: &str, sizes: &[usize], trials: usize, seed: u64, exhaustive: bool) -> Result<VerifyReport> {
    find_reduction(name)?;
    let mut cases = Vec::new();
    for (si, &n) in sizes.iter().enumerate() {
        for t in 0..trials {
            let s = seed.wrapping_mul(0x9e37_79b9).wrapping_add((si * 100_003 + t) as u64);
            cases.push(random_case(name, n, s)?);
        }
    }
    let randomized = cases.len();
    if exhaustive {
        cases.extend(exhaustive_cases(name)?);
    }
    let results: Vec<Checked> = cases.par_iter().map(|c| check(name, c)).collect();
    let total: usize = results.iter().map(|r| r.calls).sum();
    let max_calls = results.iter().map(|r| r.calls).max().unwrap_or(0);
    let counterexample = results.into_iter().find_map(|r| r.mismatch);
    Ok(VerifyReport {
        reduction: name.to_string(),
        randomized,
        exhaustive: cases.len() - randomized,
        max_calls,
        mean_calls: if cases.is_empty() { 0.0 } else { total as f64 / cases.len() as f64 },
        passed: counterexample.is_none(),
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_reduction_passes_a_short_suite() {
        for r in REDUCTIONS.iter().filter(|r| !r.control) {
            let rep = verify(r.name, &[5, 8], 8, 1, false).unwrap();
            assert!(rep.passed, "{}: {:?}", r.name, rep.counterexample);
        }
    }

    #[test]
    fn controls_are_caught() {
        for r in REDUCTIONS.iter().filter(|r| r.control) {
            let rep = verify(r.name, &[6], 20, 1, false).unwrap();
            assert!(!rep.passed, "{}", r.name);
            let json = serde_json::to_string(&rep.counterexample).unwrap();
            let back: Option<Counterexample> = serde_json::from_str(&json).unwrap();
            assert_eq!(back, rep.counterexample);
        }
    }

    #[test]
    fn graph_enumeration_counts() {
        assert_eq!(all_graphs(4, false).len(), 64);
        assert_eq!(all_graphs(3, true).len(), 64);
        assert_eq!(weighted_cliques(3, &[0, 1]).len(), 27);
    }
}
