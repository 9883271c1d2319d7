//! Deciding whether a sparse undirected graph has diameter 1, 2 or more,
//! with explicit transfers.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extprims::{ext_sort, DiskArray, Pin, Reader, Writer};
use crate::graph::Graph;
use crate::iomachine::{Machine, Mode, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Diam2v3 {
    One,
    Two,
    MoreThanTwo,
}

impl std::fmt::Display for Diam2v3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Diam2v3::One => "1",
            Diam2v3::Two => "2",
            Diam2v3::MoreThanTwo => ">2",
        })
    }
}

pub(crate) fn check_simple_undirected(g: &Graph) -> Result<()> {
    if g.is_directed() || g.is_weighted() {
        return Err(Error::Format { line: 0, msg: "expected an undirected unweighted graph".into() });
    }
    Ok(())
}

/// Writes the records (v, v) for every node and (u, v), (v, u) for every
/// edge, reading the edge list in one pass.
pub(crate) fn closed_pairs(m: &mut Machine, g: &Graph) -> Result<DiskArray> {
    let flat: Vec<Word> = g.edges().iter().flat_map(|e| [e.u as Word, e.v as Word]).collect();
    let edges = DiskArray::place(m, &flat, 2);
    let out = DiskArray::alloc(m, g.n() + 2 * g.m(), 2);
    let mut w = Writer::over(out.region);
    for v in 0..g.n() as Word {
        w.push_all(m, &[v, v])?;
    }
    let mut r = Reader::over(edges.region);
    let mut e = [0; 2];
    for _ in 0..edges.len {
        r.fill(m, &mut e)?;
        w.push_all(m, &[e[0], e[1], e[1], e[0]])?;
    }
    r.close(m)?;
    w.close(m)?;
    Ok(out)
}

/// Sorted (node, neighbor) records with duplicates removed, as per-node
/// lengths. Needs a second pass over the sorted records to copy elements.
fn list_lengths(m: &mut Machine, sorted: &DiskArray, n: usize) -> Result<DiskArray> {
    let lens = DiskArray::alloc(m, n, 1);
    let mut w = Writer::over(lens.region);
    let mut r = Reader::over(sorted.region);
    let mut rec = [0; 2];
    let mut prev = [-1, -1];
    let (mut cur, mut cnt) = (0, 0);
    for _ in 0..sorted.len {
        r.fill(m, &mut rec)?;
        if rec == prev {
            continue;
        }
        prev = rec;
        while cur < rec[0] {
            w.push(m, cnt)?;
            cnt = 0;
            cur += 1;
        }
        cnt += 1;
    }
    while (cur as usize) < n {
        w.push(m, cnt)?;
        cnt = 0;
        cur += 1;
    }
    r.close(m)?;
    w.close(m)?;
    Ok(lens)
}

fn intersects(a: &[Word], b: &[Word]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => return true,
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    false
}

/// Lists packed in a block: entries are `[id, len, elems..]`.
fn parse_block(words: &[Word]) -> Vec<&[Word]> {
    let mut out = Vec::new();
    let mut p = 0;
    while p < words.len() {
        let len = words[p + 1] as usize;
        out.push(&words[p + 2..p + 2 + len]);
        p += 2 + len;
    }
    out
}

/// Diameter 1, 2 or more than 2 of a simple undirected graph. With
/// S_v = adj(v) ∪ {v}, the diameter is at most 2 iff every two closed
/// neighborhoods meet. Lists of at most M/4 words (header included) are
/// packed into blocks of M/4 words and compared block against block; longer
/// lists are streamed.
pub fn diameter_2v3_cache_aware(m: &mut Machine, g: &Graph) -> Result<Diam2v3> {
    check_simple_undirected(g)?;
    if m.mode() != Mode::Explicit {
        return Err(Error::Mode("explicit"));
    }
    let (mm, b) = (m.m(), m.b());
    if mm < 16 * b {
        return Err(Error::Config(format!("diameter needs M >= 16B (M={mm}, B={b})")));
    }
    let n = g.n();
    if n <= 1 {
        return Ok(Diam2v3::One);
    }
    let quarter = mm / 4;

    let pairs = closed_pairs(m, g)?;
    let sorted = ext_sort(m, &pairs, |r| (r[0], r[1]))?;
    let lens = list_lengths(m, &sorted, n)?;

    // split into short and long lists; block and list boundaries are small
    // bookkeeping kept outside the simulated memory
    let cap = sorted.len + 2 * n;
    let short = m.alloc(cap);
    let long = m.alloc(cap);
    let (mut ws, mut wl) = (Writer::over(short), Writer::over(long));
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut longs: Vec<(usize, usize)> = Vec::new();
    let mut rs = Reader::over(sorted.region);
    let mut rl = Reader::over(lens.region);
    let mut arcs = 0usize;
    let (mut rec, mut prev) = ([0; 2], [-1, -1]);
    for v in 0..n {
        let len = rl.next(m)? as usize;
        arcs += len - 1;
        let is_short = 2 + len <= quarter;
        if is_short {
            let start = ws.pos();
            match blocks.last_mut() {
                Some((s, e)) if *e == start && start + 2 + len - *s <= quarter => *e += 2 + len,
                _ => blocks.push((start, start + 2 + len)),
            }
            ws.push_all(m, &[v as Word, len as Word])?;
        } else {
            longs.push((wl.pos() + 2, len));
            wl.push_all(m, &[v as Word, len as Word])?;
        }
        let mut left = len;
        while left > 0 {
            rs.fill(m, &mut rec)?;
            if rec == prev {
                continue;
            }
            prev = rec;
            left -= 1;
            if is_short {
                ws.push(m, rec[1])?;
            } else {
                wl.push(m, rec[1])?;
            }
        }
    }
    rs.close(m)?;
    rl.close(m)?;
    ws.close(m)?;
    wl.close(m)?;
    if arcs == n * (n - 1) {
        return Ok(Diam2v3::One);
    }

    // long against long: merge two streams
    for i in 0..longs.len() {
        for j in i + 1..longs.len() {
            let (mut ra, mut rb) = (Reader::new(longs[i].0, longs[i].1), Reader::new(longs[j].0, longs[j].1));
            let (mut x, mut y) = (ra.next(m)?, rb.next(m)?);
            let meet = loop {
                if x == y {
                    break true;
                }
                if x < y {
                    if ra.is_done() {
                        break false;
                    }
                    x = ra.next(m)?;
                } else {
                    if rb.is_done() {
                        break false;
                    }
                    y = rb.next(m)?;
                }
            };
            ra.close(m)?;
            rb.close(m)?;
            if !meet {
                return Ok(Diam2v3::MoreThanTwo);
            }
        }
    }

    // long against short: hold a block and its hit flags, stream each long list
    let scratch = m.alloc(quarter);
    for &(s, e) in &blocks {
        let mut pin = Pin::new();
        pin.range(m, s, e - s)?;
        let words = m.read_vec(s, e - s)?;
        let lists = parse_block(&words);
        let mut index: HashMap<Word, Vec<usize>> = HashMap::new();
        for (i, l) in lists.iter().enumerate() {
            for &x in *l {
                index.entry(x).or_default().push(i);
            }
        }
        let q = lists.len();
        pin.range(m, scratch.base, q)?;
        for &(ls, ll) in &longs {
            let mut flags = vec![0; q];
            m.write_from(scratch.base, &flags)?;
            let mut r = Reader::new(ls, ll);
            for _ in 0..ll {
                let x = r.next(m)?;
                for &i in index.get(&x).into_iter().flatten() {
                    if flags[i] == 0 {
                        flags[i] = 1;
                        m.write(scratch.base + i, 1)?;
                    }
                }
            }
            r.close(m)?;
            if m.read_vec(scratch.base, q)?.contains(&0) {
                pin.unpin(m)?;
                return Ok(Diam2v3::MoreThanTwo);
            }
        }
        pin.unpin(m)?;
    }

    // short against short: every pair of blocks held together
    for a in 0..blocks.len() {
        let mut pin_a = Pin::new();
        let (sa, ea) = blocks[a];
        pin_a.range(m, sa, ea - sa)?;
        let wa = m.read_vec(sa, ea - sa)?;
        let la = parse_block(&wa);
        for i in 0..la.len() {
            for j in i + 1..la.len() {
                if !intersects(la[i], la[j]) {
                    pin_a.unpin(m)?;
                    return Ok(Diam2v3::MoreThanTwo);
                }
            }
        }
        for &(sb, eb) in &blocks[a + 1..] {
            let mut pin_b = Pin::new();
            pin_b.range(m, sb, eb - sb)?;
            let wb = m.read_vec(sb, eb - sb)?;
            let lb = parse_block(&wb);
            let apart = la.iter().any(|x| lb.iter().any(|y| !intersects(x, y)));
            pin_b.unpin(m)?;
            if apart {
                pin_a.unpin(m)?;
                return Ok(Diam2v3::MoreThanTwo);
            }
        }
        pin_a.unpin(m)?;
    }
    Ok(Diam2v3::Two)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iomachine::MachineConfig;

    fn run(g: &Graph, mm: usize, b: usize) -> Diam2v3 {
        let mut m = Machine::new(MachineConfig::explicit(mm, b).unwrap());
        let r = diameter_2v3_cache_aware(&mut m, g).unwrap();
        assert_eq!(m.resident_lines(), 0);
        r
    }

    #[test]
    fn examples() {
        assert_eq!(run(&Graph::complete(3), 64, 4), Diam2v3::One);
        assert_eq!(run(&Graph::star(4), 64, 4), Diam2v3::Two);
        assert_eq!(run(&Graph::path(4), 64, 4), Diam2v3::MoreThanTwo);
    }

    #[test]
    fn long_lists_are_streamed() {
        // a star with 40 leaves has one list far longer than M/4
        assert_eq!(run(&Graph::star(41), 64, 4), Diam2v3::Two);
        let mut g = Graph::star(41);
        g.add_node();
        g.add_edge(40, 41, 1).unwrap();
        assert_eq!(run(&g, 64, 4), Diam2v3::MoreThanTwo);
    }

    #[test]
    fn rejects_directed() {
        let mut m = Machine::new(MachineConfig::explicit(64, 4).unwrap());
        assert!(matches!(diameter_2v3_cache_aware(&mut m, &Graph::directed(3)), Err(Error::Format { .. })));
    }
}
