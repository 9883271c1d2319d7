use serde::{Deserialize, Serialize};

use super::stream::{Reader, Writer};
use crate::error::{Error, Result};
use crate::instances::Matrix;
use crate::iomachine::{Machine, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixLayout {
    RowMajor,
    /// `t`×`t` tiles in row-major tile order, each tile row-major inside and
    /// starting on a line boundary (`stride` words apart). Edge tiles keep the
    /// full footprint.
    Tiled { t: usize, stride: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskMatrix {
    pub rows: usize,
    pub cols: usize,
    pub layout: MatrixLayout,
    pub region: Region,
}

impl DiskMatrix {
    pub fn alloc_row_major(m: &mut Machine, rows: usize, cols: usize) -> Self {
        let region = m.alloc(rows * cols);
        DiskMatrix { rows, cols, layout: MatrixLayout::RowMajor, region }
    }

    pub fn alloc_tiled(m: &mut Machine, rows: usize, cols: usize, t: usize) -> Self {
        let stride = (t * t).div_ceil(m.b()) * m.b();
        let tiles = rows.div_ceil(t) * cols.div_ceil(t);
        let region = m.alloc(tiles * stride);
        DiskMatrix { rows, cols, layout: MatrixLayout::Tiled { t, stride }, region }
    }

    /// Row-major placement without charge.
    pub fn place(m: &mut Machine, a: &Matrix) -> Self {
        let region = m.place(&a.data);
        DiskMatrix { rows: a.rows, cols: a.cols, layout: MatrixLayout::RowMajor, region }
    }

    pub fn addr(&self, i: usize, j: usize) -> usize {
        match self.layout {
            MatrixLayout::RowMajor => self.region.base + i * self.cols + j,
            MatrixLayout::Tiled { t, stride } => {
                let tile = (i / t) * self.cols.div_ceil(t) + j / t;
                self.region.base + tile * stride + (i % t) * t + j % t
            }
        }
    }

    /// Base address of tile (ti, tj). Tiled layout only.
    pub fn tile_base(&self, ti: usize, tj: usize) -> usize {
        match self.layout {
            MatrixLayout::Tiled { t, stride } => {
                self.region.base + (ti * self.cols.div_ceil(t) + tj) * stride
            }
            MatrixLayout::RowMajor => panic!("tile_base on row-major matrix"),
        }
    }

    pub fn host_matrix(&self, m: &Machine) -> Matrix {
        let mut out = Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, m.host_get(self.addr(i, j)));
            }
        }
        out
    }
}

/// Copy a row-major matrix into `t`×`t` tiles. Each tile is filled front to
/// back while the matching row segments are streamed.
pub fn tile_matrix(m: &mut Machine, a: &DiskMatrix, t: usize) -> Result<DiskMatrix> {
    if a.layout != MatrixLayout::RowMajor {
        return Err(Error::Shape("tile_matrix expects a row-major matrix".into()));
    }
    if t == 0 || (t > a.rows.max(a.cols) && a.rows.max(a.cols) > 0) {
        return Err(Error::Argument(format!("tile side {t} outside 1..={}", a.rows.max(a.cols))));
    }
    let out = DiskMatrix::alloc_tiled(m, a.rows, a.cols, t);
    let mut buf = vec![0; t];
    for ti in 0..a.rows.div_ceil(t) {
        for tj in 0..a.cols.div_ceil(t) {
            let mut w = Writer::new(out.tile_base(ti, tj), t * t);
            let width = t.min(a.cols - tj * t);
            for r in 0..t.min(a.rows - ti * t) {
                let mut rd = Reader::new(a.addr(ti * t + r, tj * t), width);
                rd.fill(m, &mut buf[..width])?;
                rd.close(m)?;
                // ragged edge tiles are zero-padded on the right
                buf[width..].fill(0);
                w.push_all(m, &buf)?;
            }
            w.close(m)?;
        }
    }
    Ok(out)
}

/// Inverse of [`tile_matrix`].
pub fn untile_matrix(m: &mut Machine, a: &DiskMatrix) -> Result<DiskMatrix> {
    let MatrixLayout::Tiled { t, .. } = a.layout else {
        return Err(Error::Shape("untile_matrix expects a tiled matrix".into()));
    };
    let out = DiskMatrix::alloc_row_major(m, a.rows, a.cols);
    let mut w = Writer::over(out.region);
    let mut buf = vec![0; t];
    for i in 0..a.rows {
        for tj in 0..a.cols.div_ceil(t) {
            let width = t.min(a.cols - tj * t);
            let mut rd = Reader::new(a.addr(i, tj * t), width);
            rd.fill(m, &mut buf[..width])?;
            rd.close(m)?;
            w.push_all(m, &buf[..width])?;
        }
    }
    w.close(m)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iomachine::MachineConfig;

    fn sample(n: usize, k: usize) -> Matrix {
        let mut a = Matrix::zeros(n, k);
        for i in 0..n {
            for j in 0..k {
                a.set(i, j, (i * 31 + j * 7) as i64 - 40);
            }
        }
        a
    }

    #[test]
    fn round_trip_ragged() {
        for cfg in [MachineConfig::explicit(64, 4).unwrap(), MachineConfig::lru(64, 4).unwrap()] {
            let mut m = Machine::new(cfg);
            let a = sample(7, 5);
            let d = DiskMatrix::place(&mut m, &a);
            for t in 1..=7 {
                let tiled = tile_matrix(&mut m, &d, t).unwrap();
                assert_eq!(tiled.host_matrix(&m), a);
                let back = untile_matrix(&mut m, &tiled).unwrap();
                assert_eq!(m.host_region(back.region), a.data);
            }
            if cfg.mode == crate::iomachine::Mode::Explicit {
                assert_eq!(m.resident_lines(), 0);
            }
        }
    }

    #[test]
    fn one_tile_one_miss() {
        let mut m = Machine::new(MachineConfig::lru(64, 16).unwrap());
        let d = DiskMatrix::place(&mut m, &sample(8, 8));
        let tiled = tile_matrix(&mut m, &d, 4).unwrap();
        m.flush();
        m.reset_stats();
        let base = tiled.tile_base(1, 0);
        m.read_vec(base, 16).unwrap();
        assert_eq!(m.stats().misses, 1);
    }
}
