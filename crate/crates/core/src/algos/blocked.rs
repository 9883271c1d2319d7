//! Explicit-mode kernels that work on square tiles held in cache.

use crate::error::{Error, Result};
use crate::extprims::{tile_matrix, untile_matrix, DiskMatrix, MatrixLayout, Pin};
use crate::graph::Graph;
use crate::instances::{Matrix, TriangleInstance, TriangleTarget};
use crate::iomachine::{sat_add, Machine, Mode, Word, INF};
use crate::oracles::adjacency_matrix;

/// Largest tile side t ≤ ⌊√(M/3)⌋ such that `k` line-aligned t×t tiles fit
/// in the cache at once.
pub fn tile_side(m: &Machine, k: usize) -> Result<usize> {
    let (mm, b) = (m.m(), m.b());
    let lines = mm / b;
    let mut t = ((mm / 3) as f64).sqrt() as usize;
    while (t + 1) * (t + 1) <= mm / 3 {
        t += 1;
    }
    while t > 0 && k * (t * t).div_ceil(b) > lines {
        t -= 1;
    }
    if t == 0 {
        return Err(Error::Config(format!("M={mm}, B={b} cannot hold {k} tiles of side 1")));
    }
    Ok(t)
}

fn explicit(m: &Machine) -> Result<()> {
    if m.mode() != Mode::Explicit {
        return Err(Error::Mode("explicit"));
    }
    Ok(())
}

fn tile_t(a: &DiskMatrix) -> usize {
    match a.layout {
        MatrixLayout::Tiled { t, .. } => t,
        MatrixLayout::RowMajor => 0,
    }
}

/// Pin one tile and copy it out of the (now resident) lines.
fn load_tile(m: &mut Machine, a: &DiskMatrix, ti: usize, tj: usize, pin: &mut Pin, buf: &mut Vec<Word>) -> Result<()> {
    let t = tile_t(a);
    let base = a.tile_base(ti, tj);
    pin.range(m, base, t * t)?;
    buf.resize(t * t, 0);
    m.read_into(base, buf)
}

/// Zero (or negative) weight triangle in a tripartite graph, blocked into
/// tiles of the three weight matrices.
pub fn zero_triangle_blocked(m: &mut Machine, inst: &TriangleInstance, target: TriangleTarget) -> Result<bool> {
    explicit(m)?;
    let (nx, ny, nz) = inst.sizes();
    if nx == 0 || ny == 0 || nz == 0 {
        return Ok(false);
    }
    let t = tile_side(m, 3)?.min(nx.max(ny).max(nz));
    let xy = DiskMatrix::place(m, &inst.xy);
    let yz = DiskMatrix::place(m, &inst.yz);
    let zx = DiskMatrix::place(m, &inst.zx);
    let xy = tile_matrix(m, &xy, t)?;
    let yz = tile_matrix(m, &yz, t)?;
    let zx = tile_matrix(m, &zx, t)?;

    let hit = |s: i128| match target {
        TriangleTarget::Zero => s == 0,
        TriangleTarget::Negative => s < 0,
    };
    let (mut bxy, mut byz, mut bzx) = (Vec::new(), Vec::new(), Vec::new());
    for bi in 0..nx.div_ceil(t) {
        let xs = t.min(nx - bi * t);
        for bj in 0..ny.div_ceil(t) {
            let ys = t.min(ny - bj * t);
            let mut pin_xy = Pin::new();
            load_tile(m, &xy, bi, bj, &mut pin_xy, &mut bxy)?;
            for bk in 0..nz.div_ceil(t) {
                let zs = t.min(nz - bk * t);
                let mut pin = Pin::new();
                load_tile(m, &yz, bj, bk, &mut pin, &mut byz)?;
                load_tile(m, &zx, bk, bi, &mut pin, &mut bzx)?;
                let mut found = false;
                'scan: for x in 0..xs {
                    for y in 0..ys {
                        let a = bxy[x * t + y];
                        if a >= INF {
                            continue;
                        }
                        for z in 0..zs {
                            let (b, c) = (byz[y * t + z], bzx[z * t + x]);
                            if b < INF && c < INF && hit(a as i128 + b as i128 + c as i128) {
                                found = true;
                                break 'scan;
                            }
                        }
                    }
                }
                pin.unpin(m)?;
                if found {
                    pin_xy.unpin(m)?;
                    return Ok(true);
                }
            }
            pin_xy.unpin(m)?;
        }
    }
    Ok(false)
}

/// (min,+) product of two tiled matrices with the same tile side. Returns the
/// value and witness matrices, both tiled.
pub fn minplus_tiled(m: &mut Machine, a: &DiskMatrix, b: &DiskMatrix) -> Result<(DiskMatrix, DiskMatrix)> {
    explicit(m)?;
    let t = tile_t(a);
    if t == 0 || tile_t(b) != t {
        return Err(Error::Shape("minplus_tiled needs two matrices tiled with one side".into()));
    }
    if a.cols != b.rows {
        return Err(Error::Shape(format!("{}x{} · {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    let (p, q, r) = (a.rows, a.cols, b.cols);
    let v = DiskMatrix::alloc_tiled(m, p, r, t);
    let s = DiskMatrix::alloc_tiled(m, p, r, t);
    let (mut ba, mut bb) = (Vec::new(), Vec::new());
    let mut vb = vec![INF; t * t];
    let mut sb = vec![0; t * t];
    for bi in 0..p.div_ceil(t) {
        let is = t.min(p - bi * t);
        for bk in 0..r.div_ceil(t) {
            let ks = t.min(r - bk * t);
            let mut pin_out = Pin::new();
            pin_out.range(m, v.tile_base(bi, bk), t * t)?;
            pin_out.range(m, s.tile_base(bi, bk), t * t)?;
            vb.fill(INF);
            sb.fill(0);
            for bj in 0..q.div_ceil(t) {
                let js = t.min(q - bj * t);
                let mut pin = Pin::new();
                load_tile(m, a, bi, bj, &mut pin, &mut ba)?;
                load_tile(m, b, bj, bk, &mut pin, &mut bb)?;
                for i in 0..is {
                    for j in 0..js {
                        let x = ba[i * t + j];
                        if x >= INF {
                            continue;
                        }
                        let w = (bj * t + j) as Word;
                        for k in 0..ks {
                            let c = sat_add(x, bb[j * t + k]);
                            if c < vb[i * t + k] {
                                vb[i * t + k] = c;
                                sb[i * t + k] = w;
                            }
                        }
                    }
                }
                pin.unpin(m)?;
            }
            m.write_from(v.tile_base(bi, bk), &vb)?;
            m.write_from(s.tile_base(bi, bk), &sb)?;
            pin_out.unpin(m)?;
        }
    }
    Ok((v, s))
}

/// (min,+) product of row-major inputs; converts to tiles and back.
pub fn minplus_blocked(m: &mut Machine, a: &Matrix, b: &Matrix) -> Result<(Matrix, Matrix)> {
    explicit(m)?;
    if a.cols != b.rows {
        return Err(Error::Shape(format!("{}x{} · {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    if a.rows == 0 || b.cols == 0 {
        return Ok((Matrix::zeros(a.rows, b.cols), Matrix::zeros(a.rows, b.cols)));
    }
    if a.cols == 0 {
        return Ok((Matrix::filled(a.rows, b.cols, INF), Matrix::zeros(a.rows, b.cols)));
    }
    let t = tile_side(m, 4)?.min(a.rows.max(a.cols).max(b.cols));
    let da = DiskMatrix::place(m, a);
    let db = DiskMatrix::place(m, b);
    let ta = tile_matrix(m, &da, t)?;
    let tb = tile_matrix(m, &db, t)?;
    let (v, s) = minplus_tiled(m, &ta, &tb)?;
    let v = untile_matrix(m, &v)?;
    let s = untile_matrix(m, &s)?;
    Ok((v.host_matrix(m), s.host_matrix(m)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApspResult {
    pub dist: Matrix,
    pub squarings: usize,
}

/// Number of squarings that turn one-hop distances into (n-1)-hop distances.
pub fn squarings_needed(n: usize) -> usize {
    if n <= 2 {
        return 0;
    }
    (usize::BITS - (n - 2).leading_zeros()) as usize
}

/// All-pairs shortest paths by repeatedly squaring the adjacency matrix in
/// the (min,+) semiring. Assumes no negative cycles.
pub fn apsp_repeated_squaring(m: &mut Machine, g: &Graph) -> Result<ApspResult> {
    explicit(m)?;
    let n = g.n();
    let adj = adjacency_matrix(g);
    let squarings = squarings_needed(n);
    if n <= 1 {
        return Ok(ApspResult { dist: adj, squarings });
    }
    let t = tile_side(m, 4)?.min(n);
    let d0 = DiskMatrix::place(m, &adj);
    let mut d = tile_matrix(m, &d0, t)?;
    for _ in 0..squarings {
        d = minplus_tiled(m, &d, &d)?.0;
    }
    let out = untile_matrix(m, &d)?;
    Ok(ApspResult { dist: out.host_matrix(m), squarings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iomachine::MachineConfig;
    use crate::oracles::{minplus_ram, triangle_brute};

    fn mach(mm: usize, b: usize) -> Machine {
        Machine::new(MachineConfig::explicit(mm, b).unwrap())
    }

    #[test]
    fn tile_sides() {
        assert_eq!(tile_side(&mach(48, 4), 3).unwrap(), 4);
        assert_eq!(tile_side(&mach(300, 10), 4).unwrap(), 8);
        assert!(tile_side(&mach(4, 4), 3).is_err());
    }

    #[test]
    fn squaring_counts() {
        let got: Vec<_> = (0..10).map(squarings_needed).collect();
        assert_eq!(got, [0, 0, 0, 1, 2, 2, 3, 3, 3, 3]);
    }

    #[test]
    fn triangle_examples() {
        let mut m = mach(64, 4);
        assert!(zero_triangle_blocked(&mut m, &TriangleInstance::single(1, 2, -3), TriangleTarget::Zero).unwrap());
        let ones = TriangleInstance::single(1, 1, 1);
        assert!(!zero_triangle_blocked(&mut m, &ones, TriangleTarget::Zero).unwrap());
        assert!(!zero_triangle_blocked(&mut m, &ones, TriangleTarget::Negative).unwrap());
    }

    #[test]
    fn ragged_triangle_matches_brute() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut rnd = |r: usize, c: usize| {
            let data = (0..r * c).map(|_| rng.gen_range(-20..=20)).collect();
            Matrix { rows: r, cols: c, data }
        };
        for _ in 0..20 {
            let inst = TriangleInstance::new(rnd(7, 5), rnd(5, 9), rnd(9, 7)).unwrap();
            for target in [TriangleTarget::Zero, TriangleTarget::Negative] {
                let mut m = mach(48, 4);
                assert_eq!(
                    zero_triangle_blocked(&mut m, &inst, target).unwrap(),
                    triangle_brute(&inst, target).unwrap()
                );
                assert_eq!(m.resident_lines(), 0);
            }
        }
    }

    #[test]
    fn minplus_examples() {
        let mut m = mach(64, 4);
        let (v, s) = minplus_blocked(&mut m, &Matrix::filled(1, 1, 0), &Matrix::filled(1, 1, 5)).unwrap();
        assert_eq!((v.data, s.data), (vec![5], vec![0]));
        let b = Matrix::from_rows(&[vec![3, -1, 4], vec![1, 5, -9], vec![2, 6, 5]]).unwrap();
        let (v, _) = minplus_blocked(&mut m, &Matrix::minplus_identity(3), &b).unwrap();
        assert_eq!(v, b);
    }

    #[test]
    fn minplus_ties_and_infinity() {
        let a = Matrix::from_rows(&[vec![1, 0, INF], vec![INF, INF, INF]]).unwrap();
        let b = Matrix::from_rows(&[vec![0, INF], vec![1, INF], vec![0, 0]]).unwrap();
        let mut m = mach(48, 4);
        assert_eq!(minplus_blocked(&mut m, &a, &b).unwrap(), minplus_ram(&a, &b));
    }

    #[test]
    fn apsp_path() {
        let mut m = mach(64, 4);
        let r = apsp_repeated_squaring(&mut m, &Graph::path(3)).unwrap();
        assert_eq!(r.dist.get(0, 2), 2);
        let r = apsp_repeated_squaring(&mut m, &Graph::undirected(1)).unwrap();
        assert_eq!(r.dist.data, vec![0]);
    }
}
