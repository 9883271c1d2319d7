//! Instance files. Every instance kind has a JSON form tagged by `kind`;
//! graphs may also be given as a plain edge list:
//!
//! ```text
//! # comment
//! graph 4 undirected
//! 0 1
//! 1 2 5
//! ```
//!
//! A third column on any edge line makes the graph weighted.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{format_err, Error, Result};
use crate::graph::Graph;
use crate::instances::{Matrix, ThreeSumInstance, TriangleInstance, VectorSets};
use crate::iomachine::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Instance {
    Graph(Graph),
    Vectors(VectorSets),
    ThreeSum(ThreeSumInstance),
    /// One list; asks for A[i] + A[j] + A[i+j] = 0.
    Conv3sum { a: Vec<Word> },
    /// Three lists; asks for A[s] + B[t] + C[s+t] = 0.
    Conv3sum3 { a: Vec<Word>, b: Vec<Word>, c: Vec<Word> },
    Triangle(TriangleInstance),
    MatrixPair { a: Matrix, b: Matrix },
    /// Plain words, input to scans and sorts.
    Words { a: Vec<Word> },
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Graph(_) => "graph",
            Instance::Vectors(_) => "vectors",
            Instance::ThreeSum(_) => "three-sum",
            Instance::Conv3sum { .. } => "conv3sum",
            Instance::Conv3sum3 { .. } => "conv3sum3",
            Instance::Triangle(_) => "triangle",
            Instance::MatrixPair { .. } => "matrix-pair",
            Instance::Words { .. } => "words",
        }
    }

    /// Check invariants that deserialization alone does not enforce.
    pub fn validate(&self) -> Result<()> {
        match self {
            Instance::Graph(g) => rebuild(g).map(|_| ()),
            Instance::Vectors(v) => v.check(),
            Instance::Triangle(t) => {
                for m in [&t.xy, &t.yz, &t.zx] {
                    if m.data.len() != m.rows * m.cols {
                        return Err(Error::Shape(format!("{}x{} matrix with {} entries", m.rows, m.cols, m.data.len())));
                    }
                }
                TriangleInstance::new(t.xy.clone(), t.yz.clone(), t.zx.clone()).map(|_| ())
            }
            Instance::MatrixPair { a, b } => {
                for m in [a, b] {
                    if m.data.len() != m.rows * m.cols {
                        return Err(Error::Shape(format!("{}x{} matrix with {} entries", m.rows, m.cols, m.data.len())));
                    }
                }
                Ok(())
            }
            Instance::Conv3sum3 { a, b, c } if a.len() != b.len() || b.len() != c.len() => {
                Err(Error::Shape(format!("lists of lengths {}, {}, {}", a.len(), b.len(), c.len())))
            }
            _ => Ok(()),
        }
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        digest_json(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instances always serialize")
    }
}

pub fn digest_json<T: Serialize>(v: &T) -> String {
    let bytes = serde_json::to_vec(v).expect("value serializes");
    hex::encode(Sha256::digest(bytes))
}

fn rebuild(g: &Graph) -> Result<Graph> {
    let mut h = Graph::new(g.n(), g.is_directed(), g.is_weighted());
    for e in g.edges() {
        h.add_edge(e.u, e.v, e.w)?;
    }
    h.set_weighted(g.is_weighted());
    Ok(h)
}

/// Parse either JSON or an edge list, choosing by the first non-blank
/// character.
pub fn parse_instance(text: &str) -> Result<Instance> {
    if text.trim_start().starts_with('{') {
        let inst: Instance = serde_json::from_str(text).map_err(|e| format_err(e.line(), e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    } else {
        parse_edge_list(text).map(Instance::Graph)
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut g: Option<Graph> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        let Some(graph) = g.as_mut() else {
            if fields[0] != "graph" || !(2..=3).contains(&fields.len()) {
                return Err(format_err(line, "expected header `graph <n> [directed|undirected]`"));
            }
            let n = fields[1].parse().map_err(|_| format_err(line, format!("bad node count `{}`", fields[1])))?;
            let directed = match fields.get(2) {
                None | Some(&"undirected") => false,
                Some(&"directed") => true,
                Some(other) => return Err(format_err(line, format!("unknown orientation `{other}`"))),
            };
            g = Some(Graph::new(n, directed, false));
            continue;
        };
        if !(2..=3).contains(&fields.len()) {
            return Err(format_err(line, "expected `u v [w]`"));
        }
        let node = |s: &str| -> Result<usize> {
            let v: usize = s.parse().map_err(|_| format_err(line, format!("bad node id `{s}`")))?;
            if v >= graph.n() {
                return Err(format_err(line, format!("node {v} out of range 0..{}", graph.n())));
            }
            Ok(v)
        };
        let (u, v) = (node(fields[0])?, node(fields[1])?);
        let w = match fields.get(2) {
            Some(s) => {
                graph.set_weighted(true);
                s.parse().map_err(|_| format_err(line, format!("bad weight `{s}`")))?
            }
            None => 1,
        };
        graph.add_edge(u, v, w)?;
    }
    g.ok_or_else(|| format_err(0, "empty input"))
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut s = format!("graph {} {}\n", g.n(), if g.is_directed() { "directed" } else { "undirected" });
    for e in g.edges() {
        if g.is_weighted() {
            s.push_str(&format!("{} {} {}\n", e.u, e.v, e.w));
        } else {
            s.push_str(&format!("{} {}\n", e.u, e.v));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::from_weighted(3, true, &[(0, 1, 4), (1, 2, -2)]).unwrap();
        assert_eq!(parse_edge_list(&to_edge_list(&g)).unwrap(), g);
        let h = parse_edge_list("# a path\ngraph 3\n0 1\n1 2\n").unwrap();
        assert_eq!(h, Graph::path(3));
    }

    #[test]
    fn edge_list_errors_carry_lines() {
        assert_eq!(parse_edge_list("graph 2\n0 5\n"), Err(Error::Format { line: 2, msg: "node 5 out of range 0..2".into() }));
        assert!(matches!(parse_edge_list("0 1\n"), Err(Error::Format { line: 1, .. })));
        assert!(parse_edge_list("").is_err());
    }

    #[test]
    fn json_round_trip_and_digest() {
        let inst = Instance::Conv3sum { a: vec![1, -2, 3] };
        let back = parse_instance(&inst.to_json()).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.digest(), inst.digest());
        assert_ne!(inst.digest(), Instance::Conv3sum { a: vec![1, -2, 4] }.digest());
        let g = Instance::Graph(Graph::cycle(4));
        assert_eq!(parse_instance(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn json_graph_is_validated() {
        let bad = r#"{"kind":"graph","n":2,"directed":false,"weighted":false,"edges":[{"u":0,"v":3,"w":1}]}"#;
        assert!(parse_instance(bad).is_err());
    }
}
