//! Seeded instance generators. Planted instances are checked against the
//! oracles before they are returned.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instances::{Matrix, ThreeSumInstance, TriangleInstance, VectorSets};
use crate::iomachine::Word;
use crate::oracles;

/// Above this many nodes planted graphs are checked structurally instead of
/// by all-pairs BFS.
const ORACLE_CHECK_MAX: usize = 2048;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn max_edges(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Simple undirected graph with exactly `m` distinct edges chosen uniformly.
pub fn random_sparse_graph(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let mut r = rng(seed);
    random_edges(&mut r, n, m, &HashSet::new()).and_then(|e| Graph::from_pairs(n, false, &e))
}

/// `m` new unordered pairs avoiding `taken`.
fn random_edges(r: &mut ChaCha8Rng, n: usize, m: usize, taken: &HashSet<(usize, usize)>) -> Result<Vec<(usize, usize)>> {
    if m + taken.len() > max_edges(n) {
        return Err(Error::Argument(format!("{m} edges do not fit on {n} nodes")));
    }
    if 2 * (m + taken.len()) > max_edges(n) {
        let mut all: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|p| !taken.contains(p))
            .collect();
        all.shuffle(r);
        all.truncate(m);
        return Ok(all);
    }
    let mut seen = taken.clone();
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        let p = (u.min(v), u.max(v));
        if u != v && seen.insert(p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// G(n, p); undirected graphs get each unordered pair once, directed graphs
/// each ordered pair.
pub fn gnp(n: usize, p: f64, directed: bool, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut g = Graph::new(n, directed, false);
    for u in 0..n {
        for v in 0..n {
            if u != v && (directed || u < v) && r.gen_bool(p) {
                g.add_edge(u, v, 1).unwrap();
            }
        }
    }
    g
}

/// G(n, p) with weights drawn from `lo..=hi`.
pub fn gnp_weighted(n: usize, p: f64, directed: bool, lo: Word, hi: Word, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut g = Graph::new(n, directed, true);
    for u in 0..n {
        for v in 0..n {
            if u != v && (directed || u < v) && r.gen_bool(p) {
                g.add_edge(u, v, r.gen_range(lo..=hi)).unwrap();
            }
        }
    }
    g.set_weighted(true);
    g
}

/// Connected undirected graph: a random spanning tree plus G(n, p) edges.
pub fn connected_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut seen = HashSet::new();
    let mut pairs = Vec::new();
    for v in 1..n {
        let u = r.gen_range(0..v);
        seen.insert((u, v));
        pairs.push((u, v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !seen.contains(&(u, v)) && r.gen_bool(p) {
                pairs.push((u, v));
            }
        }
    }
    Graph::from_pairs(n, false, &pairs).unwrap()
}

/// Diameter exactly 2: node 0 is adjacent to everyone, plus `extra` random
/// edges among the rest. Needs n ≥ 3 and at least one missing pair.
pub fn planted_diameter_2(n: usize, extra: usize, seed: u64) -> Result<Graph> {
    if n < 3 || extra >= max_edges(n - 1) {
        return Err(Error::Argument(format!("diameter 2 needs n >= 3 and a missing pair (n={n}, extra={extra})")));
    }
    let mut r = rng(seed);
    let mut pairs: Vec<_> = (1..n).map(|v| (0, v)).collect();
    let rest = random_edges(&mut r, n - 1, extra, &HashSet::new())?;
    pairs.extend(rest.into_iter().map(|(u, v)| (u + 1, v + 1)));
    let g = Graph::from_pairs(n, false, &pairs)?;
    if n <= ORACLE_CHECK_MAX && oracles::diameter(&g)? != 2 {
        return Err(Error::Precondition("planted graph does not have diameter 2".into()));
    }
    Ok(g)
}

/// Diameter at least 3: a hub graph on n−2 nodes with two pendants hung
/// from distinct non-hub nodes.
pub fn planted_diameter_3plus(n: usize, extra: usize, seed: u64) -> Result<Graph> {
    if n < 5 {
        return Err(Error::Argument(format!("diameter 3+ needs n >= 5 (n={n})")));
    }
    let base = planted_diameter_2(n - 2, extra, seed)?;
    let mut r = rng(seed ^ 0x9e37_79b9);
    let a = r.gen_range(1..n - 2);
    let mut b = r.gen_range(1..n - 3);
    if b >= a {
        b += 1;
    }
    let mut g = base;
    let pa = g.add_node();
    let pb = g.add_node();
    g.add_edge(a, pa, 1)?;
    g.add_edge(b, pb, 1)?;
    if n <= ORACLE_CHECK_MAX && oracles::diameter(&g)? < 3 {
        return Err(Error::Precondition("planted graph has diameter below 3".into()));
    }
    Ok(g)
}

fn bits(r: &mut ChaCha8Rng, d: usize, density: f64) -> Vec<Word> {
    (0..d).map(|_| r.gen_bool(density) as Word).collect()
}

fn check_density(density: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Argument(format!("density {density} outside [0, 1]")));
    }
    Ok(())
}

/// Two lists of `n` random 0/1 vectors.
pub fn random_vectors(n: usize, d: usize, density: f64, seed: u64) -> Result<VectorSets> {
    check_density(density)?;
    let mut r = rng(seed);
    let u = (0..n).map(|_| bits(&mut r, d, density)).collect();
    let v = (0..n).map(|_| bits(&mut r, d, density)).collect();
    VectorSets::new(u, v)
}

/// Random vectors where every vector has coordinate 0 set, so no pair is
/// orthogonal.
pub fn no_orthogonal_pair(n: usize, d: usize, density: f64, seed: u64) -> Result<VectorSets> {
    if d == 0 {
        return Err(Error::Argument("need d >= 1".into()));
    }
    let mut inst = random_vectors(n, d, density, seed)?;
    for x in inst.u.iter_mut().chain(inst.v.iter_mut()) {
        x[0] = 1;
    }
    Ok(inst)
}

/// Random vectors with one orthogonal pair planted at random positions.
/// Every vector keeps at least one set coordinate.
pub fn planted_orthogonal_pair(n: usize, d: usize, density: f64, seed: u64) -> Result<VectorSets> {
    if n == 0 || d < 2 {
        return Err(Error::Argument("need n >= 1 and d >= 2".into()));
    }
    let mut inst = random_vectors(n, d, density, seed)?;
    let mut r = rng(seed.wrapping_add(1));
    let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
    let split = r.gen_range(1..d);
    for k in 0..d {
        inst.u[i][k] = (k < split && inst.u[i][k] == 1) as Word;
        inst.v[j][k] = (k >= split && inst.v[j][k] == 1) as Word;
    }
    inst.u[i][0] = 1;
    inst.v[j][d - 1] = 1;
    for x in inst.u.iter_mut().chain(inst.v.iter_mut()) {
        if x.iter().all(|&b| b == 0) {
            let k = r.gen_range(0..d);
            x[k] = 1;
        }
    }
    if n * n * d <= 1 << 24 && !oracles::ov_brute(&inst) {
        return Err(Error::Precondition("planted pair is not orthogonal".into()));
    }
    Ok(inst)
}

/// Hitting-set instance with no solution: B contains the zero vector, so
/// every algorithm has to examine all of A.
pub fn hs_without_hit(n: usize, d: usize, density: f64, seed: u64) -> Result<VectorSets> {
    let mut inst = random_vectors(n, d, density, seed)?;
    if n > 0 {
        let k = rng(seed.wrapping_add(2)).gen_range(0..n);
        inst.v[k].iter_mut().for_each(|b| *b = 0);
    }
    Ok(inst)
}

/// What a generator should plant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Plant {
    /// Plain random instance.
    Random,
    /// Guarantee a solution.
    Yes,
    /// Guarantee no solution.
    No,
}

impl std::str::FromStr for Plant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Plant::Random),
            "yes" | "planted" => Ok(Plant::Yes),
            "no" | "none" => Ok(Plant::No),
            _ => Err(Error::Argument(format!("unknown plant `{s}` (random|yes|no)"))),
        }
    }
}

/// Three lists of `n` values in `-range..=range`. `Plant::No` resamples until
/// no triple sums to zero and gives up after 1000 tries.
pub fn random_3sum(n: usize, range: Word, plant: Plant, seed: u64) -> Result<ThreeSumInstance> {
    if range < 0 {
        return Err(Error::Argument("negative range".into()));
    }
    let mut r = rng(seed);
    let draw = |r: &mut ChaCha8Rng| -> Vec<Word> { (0..n).map(|_| r.gen_range(-range..=range)).collect() };
    match plant {
        Plant::Random => Ok(ThreeSumInstance { a: draw(&mut r), b: draw(&mut r), c: draw(&mut r) }),
        Plant::Yes => {
            if n == 0 {
                return Err(Error::Argument("cannot plant in empty lists".into()));
            }
            let mut inst = ThreeSumInstance { a: draw(&mut r), b: draw(&mut r), c: draw(&mut r) };
            let (i, j, k) = (r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..n));
            inst.c[k] = -(inst.a[i] + inst.b[j]);
            Ok(inst)
        }
        Plant::No => {
            for _ in 0..1000 {
                let inst = ThreeSumInstance { a: draw(&mut r), b: draw(&mut r), c: draw(&mut r) };
                if !oracles::three_sum_ram(&inst) {
                    return Ok(inst);
                }
            }
            Err(Error::Argument(format!("no zero-free 3SUM instance found for n={n}, range={range}")))
        }
    }
}

/// Which triangle property a tripartite generator plants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrianglePlant {
    Random,
    Zero,
    Negative,
    /// All weights odd, so no triangle sums to zero.
    NoZero,
    /// All weights nonnegative.
    NoNegative,
}

impl std::str::FromStr for TrianglePlant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(TrianglePlant::Random),
            "zero" => Ok(TrianglePlant::Zero),
            "negative" => Ok(TrianglePlant::Negative),
            "no-zero" => Ok(TrianglePlant::NoZero),
            "no-negative" => Ok(TrianglePlant::NoNegative),
            _ => Err(Error::Argument(format!("unknown plant `{s}` (random|zero|negative|no-zero|no-negative)"))),
        }
    }
}

/// Complete tripartite instance with `n` nodes per part and weights in
/// `-w..=w`. A planted zero or negative triangle may use a closing weight
/// up to 2w in magnitude.
pub fn random_tripartite(n: usize, w: Word, plant: TrianglePlant, seed: u64) -> Result<TriangleInstance> {
    if w < 1 {
        return Err(Error::Argument("weight bound must be >= 1".into()));
    }
    let mut r = rng(seed);
    let weight = |r: &mut ChaCha8Rng| -> Word {
        match plant {
            TrianglePlant::NoZero => {
                let v = r.gen_range(-w..=w);
                if v % 2 == 0 {
                    if v < w { v + 1 } else { v - 1 }
                } else {
                    v
                }
            }
            TrianglePlant::NoNegative => r.gen_range(0..=w),
            _ => r.gen_range(-w..=w),
        }
    };
    let mat = |r: &mut ChaCha8Rng| Matrix { rows: n, cols: n, data: (0..n * n).map(|_| weight(r)).collect() };
    let mut inst = TriangleInstance::new(mat(&mut r), mat(&mut r), mat(&mut r))?;
    if matches!(plant, TrianglePlant::Zero | TrianglePlant::Negative) {
        if n == 0 {
            return Err(Error::Argument("cannot plant in an empty instance".into()));
        }
        let (x, y, z) = (r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..n));
        let s = inst.xy.get(x, y) + inst.yz.get(y, z);
        let close = if plant == TrianglePlant::Zero { -s } else { -s - r.gen_range(1..=w) };
        inst.zx.set(z, x, close);
    }
    Ok(inst)
}

pub fn random_matrix(rows: usize, cols: usize, lo: Word, hi: Word, seed: u64) -> Matrix {
    let mut r = rng(seed);
    Matrix { rows, cols, data: (0..rows * cols).map(|_| r.gen_range(lo..=hi)).collect() }
}

pub fn random_words(n: usize, lo: Word, hi: Word, seed: u64) -> Vec<Word> {
    let mut r = rng(seed);
    (0..n).map(|_| r.gen_range(lo..=hi)).collect()
}
