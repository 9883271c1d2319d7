//! Recursive integer matrix multiplication on a Z-order layout.
//!
//! Matrices are padded to a power-of-two side N ≥ 4 and stored as 4×4
//! row-major blocks in Morton order, so quadrant q of a side-s submatrix at
//! `base` starts at `base + q·(s/2)²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::Matrix;
use crate::iomachine::{Machine, Mode, Word};

const LEAF: usize = 4;
const CHUNK: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MmScheme {
    Classical8,
    Strassen7,
}

impl std::str::FromStr for MmScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical-8" | "classical" => Ok(MmScheme::Classical8),
            "strassen-7" | "strassen" => Ok(MmScheme::Strassen7),
            _ => Err(Error::Argument(format!("unknown scheme `{s}`"))),
        }
    }
}

impl std::fmt::Display for MmScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MmScheme::Classical8 => "classical-8",
            MmScheme::Strassen7 => "strassen-7",
        })
    }
}

#[cfg(test)]
/// Offset of element (i, j) inside a Morton-ordered square.
fn morton_offset(i: usize, j: usize) -> usize {
    let (bi, bj) = (i / LEAF, j / LEAF);
    let mut z = 0;
    for bit in 0..usize::BITS / 2 {
        z |= ((bj >> bit) & 1) << (2 * bit);
        z |= ((bi >> bit) & 1) << (2 * bit + 1);
    }
    z * LEAF * LEAF + (i % LEAF) * LEAF + j % LEAF
}

/// Copy a row-major `n`×`n` matrix into a zero-padded Morton square of side
/// `big`, visiting leaf blocks in Z order.
fn to_morton(m: &mut Machine, src: usize, n: usize, dst: usize, big: usize) -> Result<()> {
    let blocks = (big / LEAF) * (big / LEAF);
    let mut blk = [0 as Word; LEAF * LEAF];
    for z in 0..blocks {
        let (i0, j0) = unmorton(z);
        blk.fill(0);
        for r in 0..LEAF {
            let (i, w) = (i0 + r, LEAF.min(n.saturating_sub(j0)));
            if i < n && w > 0 {
                m.read_into(src + i * n + j0, &mut blk[r * LEAF..r * LEAF + w])?;
            }
        }
        m.write_from(dst + z * LEAF * LEAF, &blk)?;
    }
    Ok(())
}

fn from_morton(m: &mut Machine, src: usize, big: usize, dst: usize, n: usize) -> Result<()> {
    let blocks = (big / LEAF) * (big / LEAF);
    let mut blk = [0 as Word; LEAF * LEAF];
    for z in 0..blocks {
        let (i0, j0) = unmorton(z);
        if i0 >= n || j0 >= n {
            continue;
        }
        m.read_into(src + z * LEAF * LEAF, &mut blk)?;
        for r in 0..LEAF.min(n - i0) {
            let w = LEAF.min(n - j0);
            m.write_from(dst + (i0 + r) * n + j0, &blk[r * LEAF..r * LEAF + w])?;
        }
    }
    Ok(())
}

/// Top-left element of leaf block number `z`.
fn unmorton(z: usize) -> (usize, usize) {
    let (mut bi, mut bj) = (0, 0);
    for bit in 0..usize::BITS / 2 {
        bj |= ((z >> (2 * bit)) & 1) << bit;
        bi |= ((z >> (2 * bit + 1)) & 1) << bit;
    }
    (bi * LEAF, bj * LEAF)
}

/// dst = Σ sign·src over `len` words.
fn combine(m: &mut Machine, dst: usize, srcs: &[(usize, Word)], len: usize) -> Result<()> {
    let mut acc = [0 as Word; CHUNK];
    let mut tmp = [0 as Word; CHUNK];
    for off in (0..len).step_by(CHUNK) {
        let k = CHUNK.min(len - off);
        acc[..k].fill(0);
        for &(s, sign) in srcs {
            m.read_into(s + off, &mut tmp[..k])?;
            for (a, t) in acc[..k].iter_mut().zip(&tmp[..k]) {
                *a += sign * t;
            }
        }
        m.write_from(dst + off, &acc[..k])?;
    }
    Ok(())
}

fn leaf_mul_add(m: &mut Machine, a: usize, b: usize, c: usize) -> Result<()> {
    const S: usize = LEAF * LEAF;
    let (mut x, mut y, mut z) = ([0 as Word; S], [0 as Word; S], [0 as Word; S]);
    m.read_into(a, &mut x)?;
    m.read_into(b, &mut y)?;
    m.read_into(c, &mut z)?;
    for i in 0..LEAF {
        for j in 0..LEAF {
            let v = x[i * LEAF + j];
            for k in 0..LEAF {
                z[i * LEAF + k] += v * y[j * LEAF + k];
            }
        }
    }
    m.write_from(c, &z)
}

/// c += a·b, all side-`s` Morton squares.
fn classical(m: &mut Machine, a: usize, b: usize, c: usize, s: usize) -> Result<()> {
    if s == LEAF {
        return leaf_mul_add(m, a, b, c);
    }
    let q = (s / 2) * (s / 2);
    let (a, b, c) = ([a, a + q, a + 2 * q, a + 3 * q], [b, b + q, b + 2 * q, b + 3 * q], [c, c + q, c + 2 * q, c + 3 * q]);
    for (ci, ai, bi) in [(0, 0, 0), (0, 1, 2), (1, 0, 1), (1, 1, 3), (2, 2, 0), (2, 3, 2), (3, 2, 1), (3, 3, 3)] {
        classical(m, a[ai], b[bi], c[ci], s / 2)?;
    }
    Ok(())
}

type Terms = &'static [(usize, Word)];

/// The seven products as (A terms, B terms, C updates) over quadrants
/// 0=11, 1=12, 2=21, 3=22.
const STRASSEN: [(Terms, Terms, Terms); 7] = [
    (&[(0, 1), (3, 1)], &[(0, 1), (3, 1)], &[(0, 1), (3, 1)]),
    (&[(2, 1), (3, 1)], &[(0, 1)], &[(2, 1), (3, -1)]),
    (&[(0, 1)], &[(1, 1), (3, -1)], &[(1, 1), (3, 1)]),
    (&[(3, 1)], &[(2, 1), (0, -1)], &[(0, 1), (2, 1)]),
    (&[(0, 1), (1, 1)], &[(3, 1)], &[(0, -1), (1, 1)]),
    (&[(2, 1), (0, -1)], &[(0, 1), (1, 1)], &[(3, 1)]),
    (&[(1, 1), (3, -1)], &[(2, 1), (3, 1)], &[(0, 1)]),
];

/// c += a·b with seven recursive products per level. The three temporaries
/// of a level are released before returning.
fn strassen(m: &mut Machine, a: usize, b: usize, c: usize, s: usize) -> Result<()> {
    if s == LEAF {
        return leaf_mul_add(m, a, b, c);
    }
    let h = s / 2;
    let q = h * h;
    let quad = |base: usize, i: usize| base + i * q;
    let mark = m.mark();
    let ts = m.alloc(q).base;
    let tt = m.alloc(q).base;
    let tp = m.alloc(q).base;
    let mut buf = Vec::with_capacity(2);
    for (at, bt, ct) in STRASSEN {
        let lhs = if at.len() == 1 && at[0].1 == 1 {
            quad(a, at[0].0)
        } else {
            buf.clear();
            buf.extend(at.iter().map(|&(i, sg)| (quad(a, i), sg)));
            combine(m, ts, &buf, q)?;
            ts
        };
        let rhs = if bt.len() == 1 && bt[0].1 == 1 {
            quad(b, bt[0].0)
        } else {
            buf.clear();
            buf.extend(bt.iter().map(|&(i, sg)| (quad(b, i), sg)));
            combine(m, tt, &buf, q)?;
            tt
        };
        combine(m, tp, &[], q)?;
        strassen(m, lhs, rhs, tp, h)?;
        for &(ci, sg) in ct {
            let dst = quad(c, ci);
            combine(m, dst, &[(dst, 1), (tp, sg)], q)?;
        }
    }
    m.release(mark);
    Ok(())
}

/// Exact integer product of two square matrices. Cache-oblivious: the access
/// sequence depends only on n and the scheme.
pub fn mm_recursive(m: &mut Machine, a: &Matrix, b: &Matrix, scheme: MmScheme) -> Result<Matrix> {
    if m.mode() != Mode::Lru {
        return Err(Error::Mode("lru"));
    }
    if !a.is_square() || !b.is_square() || a.rows != b.rows {
        return Err(Error::Shape(format!("{}x{} · {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    let n = a.rows;
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let big = n.next_power_of_two().max(LEAF);
    let ra = m.place(&a.data).base;
    let rb = m.place(&b.data).base;
    let za = m.alloc(big * big).base;
    let zb = m.alloc(big * big).base;
    let zc = m.alloc(big * big).base;
    to_morton(m, ra, n, za, big)?;
    to_morton(m, rb, n, zb, big)?;
    combine(m, zc, &[], big * big)?;
    match scheme {
        MmScheme::Classical8 => classical(m, za, zb, zc, big)?,
        MmScheme::Strassen7 => strassen(m, za, zb, zc, big)?,
    }
    let out = m.alloc(n * n);
    from_morton(m, zc, big, out.base, n)?;
    Ok(Matrix { rows: n, cols: n, data: m.host_region(out) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iomachine::MachineConfig;
    use crate::oracles::matmul_ram;
    use rand::{Rng, SeedableRng};

    fn lru() -> Machine {
        Machine::new(MachineConfig::lru(64, 4).unwrap())
    }

    fn rnd(n: usize, seed: u64) -> Matrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Matrix { rows: n, cols: n, data: (0..n * n).map(|_| rng.gen_range(-9..=9)).collect() }
    }

    #[test]
    fn morton_round_trip() {
        for z in 0..64 {
            let (i, j) = unmorton(z);
            assert_eq!(morton_offset(i, j), z * 16);
        }
    }

    #[test]
    fn hand_example() {
        let a = Matrix::from_rows(&[vec![1, 2], vec![3, 4]]).unwrap();
        let b = Matrix::from_rows(&[vec![5, 6], vec![7, 8]]).unwrap();
        for s in [MmScheme::Classical8, MmScheme::Strassen7] {
            let c = mm_recursive(&mut lru(), &a, &b, s).unwrap();
            assert_eq!(c.to_rows(), vec![vec![19, 22], vec![43, 50]]);
        }
    }

    #[test]
    fn identity_and_schemes_agree() {
        let a = rnd(8, 1);
        assert_eq!(mm_recursive(&mut lru(), &Matrix::identity(8), &a, MmScheme::Classical8).unwrap(), a);
        for n in [5, 16, 19] {
            let (a, b) = (rnd(n, 2), rnd(n, 3));
            let x = mm_recursive(&mut lru(), &a, &b, MmScheme::Classical8).unwrap();
            let y = mm_recursive(&mut lru(), &a, &b, MmScheme::Strassen7).unwrap();
            assert_eq!(x, y);
            assert_eq!(x, matmul_ram(&a, &b));
        }
    }

    #[test]
    fn trace_independent_of_cache() {
        let (a, b) = (rnd(16, 4), rnd(16, 5));
        let mut h = Vec::new();
        for (mm, bb) in [(64, 4), (1024, 32)] {
            let mut m = Machine::new(MachineConfig::lru(mm, bb).unwrap());
            mm_recursive(&mut m, &a, &b, MmScheme::Strassen7).unwrap();
            h.push(m.trace_hash());
        }
        assert_eq!(h[0], h[1]);
    }
}
