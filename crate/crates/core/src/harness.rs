//! Algorithms addressable by name, their oracle counterparts and the
//! instance families used to exercise and benchmark them.

use serde::{Deserialize, Serialize};

use crate::algos::{
    apsp_repeated_squaring, diameter_2v3_cache_aware, diameter_classify, distance_counts_oblivious, exact_counts,
    hitting_set_blocked, minplus_blocked, mm_recursive, ov_recursive, radius_classify, three_sum_baseline,
    zero_triangle_blocked, MmScheme,
};
use crate::error::{Error, Result};
use crate::extprims::{ext_sort_words, scan_fold, DiskArray};
use crate::formats::{digest_json, Instance};
use crate::gen::{self, Plant, TrianglePlant};
use crate::graph::Graph;
use crate::instances::{Matrix, TriangleTarget, VectorSets};
use crate::iomachine::{Machine, MachineConfig, Mode, Stats, Word};
use crate::oracles;
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Answer {
    Bool(bool),
    Int(Word),
    Class(String),
    Words(Vec<Word>),
    Matrices(Vec<Matrix>),
    Counts(Vec<[u64; 3]>),
}

impl Answer {
    /// Short digest of the canonical JSON form.
    pub fn digest(&self) -> String {
        digest_json(self)[..16].to_string()
    }
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Answer::Bool(b) => write!(f, "{b}"),
            Answer::Int(x) => write!(f, "{x}"),
            Answer::Class(c) => f.write_str(c),
            Answer::Words(w) => write!(f, "{} words, digest {}", w.len(), self.digest()),
            Answer::Matrices(ms) => {
                let shapes: Vec<String> = ms.iter().map(|m| format!("{}x{}", m.rows, m.cols)).collect();
                write!(f, "matrices [{}], digest {}", shapes.join(", "), self.digest())
            }
            Answer::Counts(c) => write!(f, "{} rows, digest {}", c.len(), self.digest()),
        }
    }
}

/// Growth of the cheapest exact oracle, which bounds the sizes worth
/// checking against it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleCost {
    Linear,
    Quadratic,
    Cubic,
}

#[derive(Clone, Copy, Debug)]
pub struct AlgoSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub input: &'static str,
    pub mode: Mode,
    pub oracle: OracleCost,
}

pub const ALGORITHMS: &[AlgoSpec] = &[
    AlgoSpec { name: "scan", about: "sum of a word array in one pass", input: "words", mode: Mode::Lru, oracle: OracleCost::Linear },
    AlgoSpec { name: "ext_sort", about: "multiway external merge sort", input: "words", mode: Mode::Explicit, oracle: OracleCost::Linear },
    AlgoSpec { name: "ov_recursive", about: "orthogonal vectors by cache-oblivious halving", input: "vectors", mode: Mode::Lru, oracle: OracleCost::Quadratic },
    AlgoSpec { name: "hitting_set_blocked", about: "hitting set by memory-sized blocks", input: "vectors", mode: Mode::Explicit, oracle: OracleCost::Quadratic },
    AlgoSpec { name: "three_sum_baseline", about: "3SUM by sorting and two-pointer sweeps", input: "three-sum", mode: Mode::Explicit, oracle: OracleCost::Quadratic },
    AlgoSpec { name: "zero_triangle_blocked", about: "zero-weight triangle by tiles of side sqrt(M)", input: "triangle", mode: Mode::Explicit, oracle: OracleCost::Cubic },
    AlgoSpec { name: "negative_triangle_blocked", about: "negative triangle by tiles of side sqrt(M)", input: "triangle", mode: Mode::Explicit, oracle: OracleCost::Cubic },
    AlgoSpec { name: "minplus_blocked", about: "(min,+) product with witnesses, tiled", input: "matrix-pair", mode: Mode::Explicit, oracle: OracleCost::Cubic },
    AlgoSpec { name: "apsp_repeated_squaring", about: "all-pairs shortest paths by (min,+) squaring", input: "graph", mode: Mode::Explicit, oracle: OracleCost::Cubic },
    AlgoSpec { name: "mm_classical", about: "recursive integer product, eight subproducts", input: "matrix-pair", mode: Mode::Lru, oracle: OracleCost::Cubic },
    AlgoSpec { name: "mm_strassen", about: "recursive integer product, seven subproducts", input: "matrix-pair", mode: Mode::Lru, oracle: OracleCost::Cubic },
    AlgoSpec { name: "distance_counts", about: "per-node counts within distance 0, 1, 2 (cache-oblivious)", input: "graph", mode: Mode::Lru, oracle: OracleCost::Quadratic },
    AlgoSpec { name: "diameter_2v3", about: "diameter 1, 2 or more from the distance counts", input: "graph", mode: Mode::Lru, oracle: OracleCost::Quadratic },
    AlgoSpec { name: "radius_2v3", about: "radius 1, 2 or at least 3 from the distance counts", input: "graph", mode: Mode::Lru, oracle: OracleCost::Quadratic },
    AlgoSpec { name: "diameter_2v3_cache_aware", about: "diameter 1, 2 or more on sparse graphs by edge blocks", input: "graph", mode: Mode::Explicit, oracle: OracleCost::Quadratic },
];

pub fn find_algo(name: &str) -> Result<&'static AlgoSpec> {
    ALGORITHMS
        .iter()
        .find(|a| a.name == name)
        .ok_or_else(|| Error::Argument(format!("unknown algorithm `{name}`")))
}

fn wrong_kind(spec: &AlgoSpec, inst: &Instance) -> Error {
    Error::Argument(format!("{} expects a {} instance, got {}", spec.name, spec.input, inst.kind()))
}

fn class_of_diameter(d: Word) -> String {
    match d {
        0 | 1 => "1".into(),
        2 => "2".into(),
        _ => ">2".into(),
    }
}

fn class_of_radius(r: Word) -> String {
    match r {
        0 | 1 => "1".into(),
        2 => "2".into(),
        _ => "≥3".into(),
    }
}

/// Run `name` on the machine. The instance is placed without charge.
pub fn run_algo(m: &mut Machine, name: &str, inst: &Instance) -> Result<Answer> {
    let spec = find_algo(name)?;
    let bad = || wrong_kind(spec, inst);
    Ok(match (name, inst) {
        ("scan", Instance::Words { a }) => {
            let arr = DiskArray::place(m, a, 1);
            Answer::Int(scan_fold(m, &arr, 0 as Word, |s, r| s.wrapping_add(r[0]))?)
        }
        ("ext_sort", Instance::Words { a }) => {
            let arr = DiskArray::place(m, a, 1);
            let out = ext_sort_words(m, &arr)?;
            Answer::Words(out.host_read(m))
        }
        ("ov_recursive", Instance::Vectors(v)) => Answer::Bool(ov_recursive(m, v)?),
        ("hitting_set_blocked", Instance::Vectors(v)) => Answer::Bool(hitting_set_blocked(m, v)?),
        ("three_sum_baseline", Instance::ThreeSum(t)) => Answer::Bool(three_sum_baseline(m, t)?),
        ("zero_triangle_blocked", Instance::Triangle(t)) => {
            Answer::Bool(zero_triangle_blocked(m, t, TriangleTarget::Zero)?)
        }
        ("negative_triangle_blocked", Instance::Triangle(t)) => {
            Answer::Bool(zero_triangle_blocked(m, t, TriangleTarget::Negative)?)
        }
        ("minplus_blocked", Instance::MatrixPair { a, b }) => {
            let (v, s) = minplus_blocked(m, a, b)?;
            Answer::Matrices(vec![v, s])
        }
        ("apsp_repeated_squaring", Instance::Graph(g)) => Answer::Matrices(vec![apsp_repeated_squaring(m, g)?.dist]),
        ("mm_classical", Instance::MatrixPair { a, b }) => {
            Answer::Matrices(vec![mm_recursive(m, a, b, MmScheme::Classical8)?])
        }
        ("mm_strassen", Instance::MatrixPair { a, b }) => {
            Answer::Matrices(vec![mm_recursive(m, a, b, MmScheme::Strassen7)?])
        }
        ("distance_counts", Instance::Graph(g)) => Answer::Counts(distance_counts_oblivious(m, g)?),
        ("diameter_2v3", Instance::Graph(g)) => {
            let t = distance_counts_oblivious(m, g)?;
            Answer::Class(diameter_class_text(diameter_classify(&exact_counts(&t))))
        }
        ("radius_2v3", Instance::Graph(g)) => {
            let t = distance_counts_oblivious(m, g)?;
            Answer::Class(radius_classify(&t).to_string())
        }
        ("diameter_2v3_cache_aware", Instance::Graph(g)) => Answer::Class(diameter_2v3_cache_aware(m, g)?.to_string()),
        _ => return Err(bad()),
    })
}

fn diameter_class_text(c: crate::algos::DistClass) -> String {
    use crate::algos::DistClass;
    match c {
        DistClass::One => "1".into(),
        DistClass::Two => "2".into(),
        DistClass::AtLeastThree => ">2".into(),
    }
}

/// The RAM reference answer for `name`.
pub fn run_oracle(name: &str, inst: &Instance) -> Result<Answer> {
    let spec = find_algo(name)?;
    let bad = || wrong_kind(spec, inst);
    Ok(match (name, inst) {
        ("scan", Instance::Words { a }) => Answer::Int(a.iter().fold(0 as Word, |s, &x| s.wrapping_add(x))),
        ("ext_sort", Instance::Words { a }) => {
            let mut a = a.clone();
            a.sort_unstable();
            Answer::Words(a)
        }
        ("ov_recursive", Instance::Vectors(v)) => Answer::Bool(oracles::ov_brute(v)),
        ("hitting_set_blocked", Instance::Vectors(v)) => Answer::Bool(oracles::hs_brute(v)),
        ("three_sum_baseline", Instance::ThreeSum(t)) => Answer::Bool(oracles::three_sum_ram(t)),
        ("zero_triangle_blocked", Instance::Triangle(t)) => Answer::Bool(oracles::triangle_brute(t, TriangleTarget::Zero)?),
        ("negative_triangle_blocked", Instance::Triangle(t)) => {
            Answer::Bool(oracles::triangle_brute(t, TriangleTarget::Negative)?)
        }
        ("minplus_blocked", Instance::MatrixPair { a, b }) => {
            let (v, s) = oracles::minplus_brute(a, b)?;
            Answer::Matrices(vec![v, s])
        }
        ("apsp_repeated_squaring", Instance::Graph(g)) => {
            Answer::Matrices(vec![Matrix::from_rows(&oracles::distances(g)?)?])
        }
        ("mm_classical" | "mm_strassen", Instance::MatrixPair { a, b }) => Answer::Matrices(vec![oracles::matmul_ram(a, b)]),
        ("distance_counts", Instance::Graph(g)) => Answer::Counts(oracles::within_counts(g)),
        ("diameter_2v3" | "diameter_2v3_cache_aware", Instance::Graph(g)) => Answer::Class(class_of_diameter(oracles::diameter(g)?)),
        ("radius_2v3", Instance::Graph(g)) => Answer::Class(class_of_radius(oracles::radius(g)?)),
        _ => return Err(bad()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measurement {
    pub answer: Answer,
    pub stats: Stats,
    pub trace_hash: u64,
}

/// Run on a fresh machine and flush at the end, so the counts are those of
/// a cold cache including final writebacks. `mode` defaults to the
/// algorithm's own.
pub fn measure(name: &str, m: usize, b: usize, mode: Option<Mode>, inst: &Instance) -> Result<Measurement> {
    let spec = find_algo(name)?;
    let cfg = MachineConfig::new(m, b, mode.unwrap_or(spec.mode))?;
    let mut mach = Machine::new(cfg);
    let answer = run_algo(&mut mach, name, inst)?;
    mach.flush();
    Ok(Measurement { answer, stats: mach.stats(), trace_hash: mach.trace_hash() })
}

fn bits(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

/// A random instance of size `n` for `name`. Families mix yes and no cases
/// by seed so that oracle comparisons see both answers.
pub fn random_instance(name: &str, n: usize, seed: u64) -> Result<Instance> {
    let spec = find_algo(name)?;
    let pick = seed % 3;
    Ok(match spec.input {
        "words" => {
            let mut r = gen::rng(seed);
            Instance::Words { a: (0..n).map(|_| r.gen_range(-1_000_000..=1_000_000)).collect() }
        }
        "vectors" => {
            let d = 2 * bits(n) + 2;
            Instance::Vectors(match (name, pick) {
                ("ov_recursive", 0) => gen::planted_orthogonal_pair(n, d, 0.5, seed)?,
                ("hitting_set_blocked", 0) => gen::hs_without_hit(n, d, 0.5, seed)?,
                (_, 1) => gen::random_vectors(n, d, 0.5, seed)?,
                _ => vector_mix(n, d, seed)?,
            })
        }
        "three-sum" => {
            let plant = [Plant::Yes, Plant::No, Plant::Random][pick as usize];
            // zero-free lists need a range well above n^3 to be found by resampling
            let range = if plant == Plant::No { no_3sum_range(n) } else { (n * n) as Word + 10 };
            Instance::ThreeSum(gen::random_3sum(n, range, plant, seed)?)
        }
        "triangle" => {
            let plant = match (name, pick) {
                ("zero_triangle_blocked", 0) => TrianglePlant::Zero,
                ("zero_triangle_blocked", 1) => TrianglePlant::NoZero,
                (_, 0) => TrianglePlant::Negative,
                (_, 1) => TrianglePlant::NoNegative,
                _ => TrianglePlant::Random,
            };
            Instance::Triangle(gen::random_tripartite(n, 4 * n as Word + 8, plant, seed)?)
        }
        "matrix-pair" => {
            let w = if name.starts_with("mm_") { 9 } else { 50 };
            Instance::MatrixPair { a: gen::random_matrix(n, n, -w, w, seed), b: gen::random_matrix(n, n, -w, w, seed ^ 0x9e37) }
        }
        "graph" => Instance::Graph(match name {
            "apsp_repeated_squaring" => gen::gnp_weighted(n, (4.0 / n.max(1) as f64).min(1.0), true, 1, 20, seed),
            "distance_counts" => gen::gnp(n, (3.0 / n.max(1) as f64).min(1.0), false, seed),
            _ => diameter_family(n, pick, seed)?,
        }),
        other => return Err(Error::Argument(format!("no generator for {other}"))),
    })
}

/// Dimension used for vector inputs in benchmarks, held fixed so that miss
/// counts scale with n alone.
pub const BENCH_DIM: usize = 16;

/// Inputs that defeat every early exit: no orthogonal pair, no hitting
/// vector, no planted triple or triangle, diameter-2 graphs with about
/// four edges per node. Used for scaling measurements.
pub fn bench_instance(name: &str, n: usize, seed: u64) -> Result<Instance> {
    let spec = find_algo(name)?;
    Ok(match spec.input {
        "vectors" => Instance::Vectors(match name {
            "hitting_set_blocked" => gen::hs_without_hit(n, BENCH_DIM, 0.5, seed)?,
            _ => gen::no_orthogonal_pair(n, BENCH_DIM, 0.5, seed)?,
        }),
        "three-sum" => Instance::ThreeSum(gen::random_3sum(n, no_3sum_range(n), Plant::No, seed)?),
        "triangle" => {
            let plant = if name == "zero_triangle_blocked" { TrianglePlant::NoZero } else { TrianglePlant::NoNegative };
            Instance::Triangle(gen::random_tripartite(n, 4 * n as Word + 8, plant, seed)?)
        }
        "graph" if name.starts_with("diameter_2v3") || name == "radius_2v3" => {
            if n < 4 {
                return random_instance(name, n, seed);
            }
            Instance::Graph(gen::planted_diameter_2(n, (3 * n + 1).min(max_extra(n)), seed)?)
        }
        _ => return random_instance(name, n, seed),
    })
}

fn no_3sum_range(n: usize) -> Word {
    8 * (n as Word).pow(3) + 10
}

fn max_extra(n: usize) -> usize {
    (n - 1) * (n - 2) / 2 - 1
}

/// Vectors whose orthogonal or hitting pairs are neither guaranteed nor
/// excluded.
fn vector_mix(n: usize, d: usize, seed: u64) -> Result<VectorSets> {
    gen::random_vectors(n, d, 0.6, seed)
}

fn diameter_family(n: usize, pick: u64, seed: u64) -> Result<Graph> {
    if n < 5 {
        return Ok(gen::gnp(n, 0.5, false, seed));
    }
    match pick {
        0 => gen::planted_diameter_2(n, n.min(max_extra(n)), seed),
        1 => gen::planted_diameter_3plus(n, n.min(max_extra(n - 2)), seed),
        _ => Ok(gen::connected_graph(n, 3.0 / n as f64, seed)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_algorithm_matches_its_oracle_on_small_inputs() {
        for spec in ALGORITHMS {
            for seed in 0..6 {
                let n = 12;
                let inst = random_instance(spec.name, n, seed).unwrap();
                let got = measure(spec.name, 256, 8, None, &inst).unwrap();
                assert_eq!(got.answer, run_oracle(spec.name, &inst).unwrap(), "{} seed {seed}", spec.name);
                assert!(got.stats.misses > 0, "{}", spec.name);
            }
        }
    }

    #[test]
    fn bench_instances_take_the_slow_path() {
        for spec in ALGORITHMS {
            let inst = bench_instance(spec.name, 20, 3).unwrap();
            let got = measure(spec.name, 256, 8, None, &inst).unwrap();
            assert_eq!(got.answer, run_oracle(spec.name, &inst).unwrap(), "{}", spec.name);
            if matches!(spec.input, "vectors" | "three-sum" | "triangle") {
                assert_eq!(got.answer, Answer::Bool(false), "{}", spec.name);
            }
        }
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let inst = Instance::Words { a: vec![1, 2] };
        assert!(matches!(run_oracle("ov_recursive", &inst), Err(Error::Argument(_))));
        assert!(find_algo("nope").is_err());
    }
}
