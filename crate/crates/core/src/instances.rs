//! Problem instances: matrices, vector sets, 3SUM lists, tripartite triangle
//! instances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iomachine::{Word, INF};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Word>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, 0)
    }

    pub fn filled(rows: usize, cols: usize, v: Word) -> Self {
        Matrix { rows, cols, data: vec![v; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<Word>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Self::zeros(n, n);
        for i in 0..n {
            a.set(i, i, 1);
        }
        a
    }

    /// Neutral element of the (min,+) product: 0 on the diagonal, INF elsewhere.
    pub fn minplus_identity(n: usize) -> Self {
        let mut a = Self::filled(n, n, INF);
        for i in 0..n {
            a.set(i, i, 0);
        }
        a
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Word {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Word) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Word] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn to_rows(&self) -> Vec<Vec<Word>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Two lists of 0/1 vectors of common dimension `d`, one bit per word.
/// Serves both orthogonal-vectors (`u`, `v`) and hitting-set (`a` = `u`,
/// `b` = `v`) instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorSets {
    pub d: usize,
    pub u: Vec<Vec<Word>>,
    pub v: Vec<Vec<Word>>,
}

pub type OvInstance = VectorSets;
pub type HsInstance = VectorSets;

impl VectorSets {
    pub fn new(u: Vec<Vec<Word>>, v: Vec<Vec<Word>>) -> Result<Self> {
        let d = u.first().or(v.first()).map_or(0, |x| x.len());
        for (k, x) in u.iter().chain(v.iter()).enumerate() {
            if x.len() != d {
                return Err(Error::Format { line: k + 1, msg: format!("vector of dimension {} (expected {d})", x.len()) });
            }
            if x.iter().any(|&b| b != 0 && b != 1) {
                return Err(Error::Format { line: k + 1, msg: "vector entries must be 0 or 1".into() });
            }
        }
        Ok(VectorSets { d, u, v })
    }

    pub fn from_bits(u: &[&[u8]], v: &[&[u8]]) -> Result<Self> {
        let conv = |s: &[&[u8]]| s.iter().map(|x| x.iter().map(|&b| b as Word).collect()).collect();
        Self::new(conv(u), conv(v))
    }

    pub fn check(&self) -> Result<()> {
        Self::new(self.u.clone(), self.v.clone()).map(|_| ())
    }

    /// Flattened `n*d` words, one vector after another.
    pub fn flat_u(&self) -> Vec<Word> {
        self.u.concat()
    }

    pub fn flat_v(&self) -> Vec<Word> {
        self.v.concat()
    }

    /// Pack each vector into 64-bit words (bit `j` of word `j/64`). Only used
    /// for compact storage; algorithms read one bit per word.
    pub fn packed(x: &[Word]) -> Vec<u64> {
        let mut out = vec![0u64; x.len().div_ceil(64)];
        for (j, &b) in x.iter().enumerate() {
            if b != 0 {
                out[j / 64] |= 1 << (j % 64);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeSumInstance {
    pub a: Vec<Word>,
    pub b: Vec<Word>,
    pub c: Vec<Word>,
}

/// Complete tripartite graph on X, Y, Z given by the three weight matrices.
/// `INF` marks an absent edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleInstance {
    /// |X| × |Y|
    pub xy: Matrix,
    /// |Y| × |Z|
    pub yz: Matrix,
    /// |Z| × |X|
    pub zx: Matrix,
}

impl TriangleInstance {
    pub fn new(xy: Matrix, yz: Matrix, zx: Matrix) -> Result<Self> {
        if xy.cols != yz.rows || yz.cols != zx.rows || zx.cols != xy.rows {
            return Err(Error::Shape(format!(
                "triangle parts {}x{}, {}x{}, {}x{} do not chain",
                xy.rows, xy.cols, yz.rows, yz.cols, zx.rows, zx.cols
            )));
        }
        Ok(TriangleInstance { xy, yz, zx })
    }

    pub fn single(wxy: Word, wyz: Word, wzx: Word) -> Self {
        let one = |w| Matrix { rows: 1, cols: 1, data: vec![w] };
        TriangleInstance { xy: one(wxy), yz: one(wyz), zx: one(wzx) }
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.xy.rows, self.yz.rows, self.zx.rows)
    }

    /// Largest finite |weight| (at least 1).
    pub fn max_weight(&self) -> Word {
        [&self.xy, &self.yz, &self.zx]
            .iter()
            .flat_map(|m| m.data.iter())
            .filter(|&&w| w < INF)
            .map(|w| w.abs())
            .max()
            .unwrap_or(0)
            .max(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriangleTarget {
    Zero,
    Negative,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_dims_checked() {
        assert!(VectorSets::from_bits(&[&[1, 0]], &[&[0, 1, 1]]).is_err());
        assert!(VectorSets::from_bits(&[&[1, 0]], &[&[0, 1]]).is_ok());
        assert_eq!(VectorSets::packed(&[1, 0, 1]), vec![5]);
    }

    #[test]
    fn triangle_shapes() {
        let a = Matrix::zeros(2, 3);
        let b = Matrix::zeros(3, 4);
        let c = Matrix::zeros(4, 2);
        assert!(TriangleInstance::new(a.clone(), b.clone(), c).is_ok());
        assert!(TriangleInstance::new(a, b, Matrix::zeros(2, 2)).is_err());
    }
}
