//! Scans, multiway merge sort, and on-disk layouts for graphs and matrices.

mod layout;
mod matrix;
mod sort;
mod stream;

pub use layout::{build_graph_layout, sort_adjacency_lists, GraphLayout};
pub use matrix::{tile_matrix, untile_matrix, DiskMatrix, MatrixLayout};
pub use sort::{binary_merge_sort, ext_sort, ext_sort_words};
pub use stream::{Pin, Reader, Writer};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::iomachine::{Machine, Region, Word};

/// `len` fixed-width records stored contiguously from `region.base`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskArray {
    pub region: Region,
    pub len: usize,
    pub width: usize,
}

impl DiskArray {
    pub fn alloc(m: &mut Machine, len: usize, width: usize) -> Self {
        let region = m.alloc(len * width);
        DiskArray { region, len, width }
    }

    /// Place host data without charging (input setup).
    pub fn place(m: &mut Machine, data: &[Word], width: usize) -> Self {
        assert!(width > 0 && data.len().is_multiple_of(width));
        let region = m.place(data);
        DiskArray { region, len: data.len() / width, width }
    }

    pub fn words(&self) -> usize {
        self.len * self.width
    }

    pub fn base(&self) -> usize {
        self.region.base
    }

    pub fn record_addr(&self, i: usize) -> usize {
        self.region.base + i * self.width
    }

    pub fn host_read(&self, m: &Machine) -> Vec<Word> {
        m.host_read(self.region.base, self.words())
    }
}

/// One pass mapping every record through `f` into a fresh array of
/// `out_width`-word records.
pub fn scan_map(
    m: &mut Machine,
    a: &DiskArray,
    out_width: usize,
    mut f: impl FnMut(&[Word], &mut [Word]),
) -> Result<DiskArray> {
    let out = DiskArray::alloc(m, a.len, out_width);
    let mut r = Reader::over(a.region);
    let mut w = Writer::over(out.region);
    let mut rec = vec![0; a.width];
    let mut res = vec![0; out_width];
    for _ in 0..a.len {
        r.fill(m, &mut rec)?;
        f(&rec, &mut res);
        w.push_all(m, &res)?;
    }
    r.close(m)?;
    w.close(m)?;
    Ok(out)
}

/// Fold over all records in address order.
pub fn scan_fold<T>(
    m: &mut Machine,
    a: &DiskArray,
    init: T,
    mut f: impl FnMut(T, &[Word]) -> T,
) -> Result<T> {
    let mut r = Reader::over(a.region);
    let mut rec = vec![0; a.width];
    let mut acc = init;
    for _ in 0..a.len {
        r.fill(m, &mut rec)?;
        acc = f(acc, &rec);
    }
    r.close(m)?;
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iomachine::MachineConfig;

    #[test]
    fn negate_small() {
        for cfg in [MachineConfig::lru(64, 4).unwrap(), MachineConfig::explicit(64, 4).unwrap()] {
            let mut m = Machine::new(cfg);
            let a = DiskArray::place(&mut m, &[1, -2, 3], 1);
            m.reset_stats();
            let out = scan_map(&mut m, &a, 1, |x, y| y[0] = -x[0]).unwrap();
            assert_eq!(out.host_read(&m), vec![-1, 2, -3]);
            assert!(m.stats().misses <= 2 + 2);
        }
    }

    #[test]
    fn scan_1024_words() {
        let mut m = Machine::new(MachineConfig::lru(256, 16).unwrap());
        let data: Vec<Word> = (0..1024).collect();
        let a = DiskArray::place(&mut m, &data, 1);
        m.reset_stats();
        let out = scan_map(&mut m, &a, 1, |x, y| y[0] = x[0]).unwrap();
        assert!(m.stats().misses <= 130);
        assert_eq!(out.host_read(&m), data);
    }

    #[test]
    fn fold_sums() {
        let mut m = Machine::new(MachineConfig::explicit(32, 8).unwrap());
        let a = DiskArray::place(&mut m, &[1, 2, 3, 4, 5, 6], 2);
        let s = scan_fold(&mut m, &a, 0, |acc, r| acc + r[0] * r[1]).unwrap();
        assert_eq!(s, 2 + 12 + 30);
        assert_eq!(m.resident_lines(), 0);
    }
}
