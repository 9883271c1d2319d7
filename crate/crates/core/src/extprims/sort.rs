use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::stream::{Pin, Reader, Writer};
use super::DiskArray;
use crate::error::{Error, Result};
use crate::iomachine::{Machine, Word};

/// Stable multiway merge sort of fixed-width records.
///
/// Runs of up to `M - 2B` words are sorted in cache, then merged `M/B - 1` at a
/// time until one run is left. The input array is left untouched.
pub fn ext_sort<K: Ord>(
    m: &mut Machine,
    a: &DiskArray,
    key: impl Fn(&[Word]) -> K,
) -> Result<DiskArray> {
    let (mm, b) = (m.m(), m.b());
    if mm < 3 * b {
        return Err(Error::Config(format!("sorting needs M >= 3B (M={mm}, B={b})")));
    }
    let w = a.width;
    let run_recs = (mm - 2 * b) / w;
    if run_recs == 0 {
        return Err(Error::Config(format!("record width {w} does not fit in M - 2B")));
    }
    let fan_in = mm / b - 1;
    let n = a.len;
    let mut src = DiskArray::alloc(m, n, w);
    if n == 0 {
        return Ok(src);
    }

    // run formation
    let mut runs = Vec::new();
    let mut out = Writer::over(src.region);
    let mut start = 0;
    while start < n {
        let cnt = run_recs.min(n - start);
        let mut pin = Pin::new();
        pin.range(m, a.record_addr(start), cnt * w)?;
        let buf = m.read_vec(a.record_addr(start), cnt * w)?;
        let mut order: Vec<usize> = (0..cnt).collect();
        order.sort_by_key(|&i| key(&buf[i * w..(i + 1) * w]));
        for i in order {
            out.push_all(m, &buf[i * w..(i + 1) * w])?;
        }
        pin.unpin(m)?;
        runs.push((start, cnt));
        start += cnt;
    }
    out.close(m)?;
    if runs.len() == 1 {
        return Ok(src);
    }

    let mut dst = DiskArray::alloc(m, n, w);
    while runs.len() > 1 {
        let mut next_runs = Vec::with_capacity(runs.len().div_ceil(fan_in));
        let mut out = Writer::over(dst.region);
        for group in runs.chunks(fan_in) {
            let mut readers: Vec<(Reader, usize)> = group
                .iter()
                .map(|&(s, c)| (Reader::new(src.record_addr(s), c * w), c))
                .collect();
            let mut heads: Vec<Vec<Word>> = vec![vec![0; w]; group.len()];
            let mut heap = BinaryHeap::with_capacity(group.len());
            for (i, (r, left)) in readers.iter_mut().enumerate() {
                r.fill(m, &mut heads[i])?;
                *left -= 1;
                heap.push(Reverse((key(&heads[i]), i)));
            }
            while let Some(Reverse((_, i))) = heap.pop() {
                out.push_all(m, &heads[i])?;
                let (r, left) = &mut readers[i];
                if *left > 0 {
                    r.fill(m, &mut heads[i])?;
                    *left -= 1;
                    heap.push(Reverse((key(&heads[i]), i)));
                } else {
                    r.close(m)?;
                }
            }
            let total: usize = group.iter().map(|g| g.1).sum();
            next_runs.push((group[0].0, total));
        }
        out.close(m)?;
        runs = next_runs;
        std::mem::swap(&mut src, &mut dst);
    }
    Ok(src)
}

/// Sort single words ascending.
pub fn ext_sort_words(m: &mut Machine, a: &DiskArray) -> Result<DiskArray> {
    ext_sort(m, a, |r| r[0])
}

/// Bottom-up two-way merge sort that never looks at M or B, so its access
/// sequence depends only on the input. Stable.
pub fn binary_merge_sort<K: Ord>(
    m: &mut Machine,
    a: &DiskArray,
    key: impl Fn(&[Word]) -> K,
) -> Result<DiskArray> {
    let (n, w) = (a.len, a.width);
    let mut src = DiskArray::alloc(m, n, w);
    let mut copy = Writer::over(src.region);
    let mut rd = Reader::over(a.region);
    let mut rec = vec![0; w];
    for _ in 0..n {
        rd.fill(m, &mut rec)?;
        copy.push_all(m, &rec)?;
    }
    rd.close(m)?;
    copy.close(m)?;
    if n <= 1 {
        return Ok(src);
    }
    let mut dst = DiskArray::alloc(m, n, w);
    let (mut x, mut y) = (vec![0; w], vec![0; w]);
    let mut run = 1;
    while run < n {
        let mut out = Writer::over(dst.region);
        for lo in (0..n).step_by(2 * run) {
            let mid = (lo + run).min(n);
            let hi = (lo + 2 * run).min(n);
            let mut left = Reader::new(src.record_addr(lo), (mid - lo) * w);
            let mut right = Reader::new(src.record_addr(mid), (hi - mid) * w);
            let (mut nl, mut nr) = (mid - lo, hi - mid);
            if nl > 0 {
                left.fill(m, &mut x)?;
            }
            if nr > 0 {
                right.fill(m, &mut y)?;
            }
            while nl > 0 || nr > 0 {
                if nr == 0 || (nl > 0 && key(&x) <= key(&y)) {
                    out.push_all(m, &x)?;
                    nl -= 1;
                    if nl > 0 {
                        left.fill(m, &mut x)?;
                    }
                } else {
                    out.push_all(m, &y)?;
                    nr -= 1;
                    if nr > 0 {
                        right.fill(m, &mut y)?;
                    }
                }
            }
            left.close(m)?;
            right.close(m)?;
        }
        out.close(m)?;
        std::mem::swap(&mut src, &mut dst);
        run *= 2;
    }
    Ok(src)
}
