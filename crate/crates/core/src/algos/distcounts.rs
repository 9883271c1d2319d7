//! Counting nodes within distance 0, 1 and 2 of every node without knowing
//! M or B.
//!
//! Layout: one list per node in id order, each `[id, dist_two, close_flag,
//! len, sorted closed neighborhood..]`, plus an array of list start
//! addresses (n + 1 entries). Two nodes are within distance 2 iff their
//! closed neighborhoods meet, so the recursion compares every pair of lists
//! once and bumps both `dist_two` counters on a meeting.

use serde::{Deserialize, Serialize};

use super::diameter::{check_simple_undirected, closed_pairs};
use crate::error::{Error, Result};
use crate::extprims::{binary_merge_sort, DiskArray, Reader, Writer};
use crate::graph::Graph;
use crate::iomachine::{Machine, Mode, Word};

const HDR: usize = 4;
const DIST_TWO: usize = 1;
const CLOSE: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistClass {
    One,
    Two,
    AtLeastThree,
}

impl std::fmt::Display for DistClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DistClass::One => "1",
            DistClass::Two => "2",
            DistClass::AtLeastThree => "≥3",
        })
    }
}

/// Distance tables: `t[i][j]` nodes within distance j of i, and `s[i]` the
/// exact counts at distance 0, 1, 2 and 3 or more.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceCounts {
    pub t: Vec<[u64; 3]>,
    pub s: Vec<[u64; 4]>,
}

impl DistanceCounts {
    pub fn from_t(t: Vec<[u64; 3]>) -> Self {
        let s = exact_counts(&t);
        DistanceCounts { t, s }
    }
}

pub fn exact_counts(t: &[[u64; 3]]) -> Vec<[u64; 4]> {
    let n = t.len() as u64;
    t.iter().map(|r| [r[0], r[1] - r[0], r[2] - r[1], n - r[2]]).collect()
}

pub fn diameter_classify(s: &[[u64; 4]]) -> DistClass {
    if s.iter().any(|r| r[3] > 0) {
        DistClass::AtLeastThree
    } else if s.iter().any(|r| r[2] > 0) {
        DistClass::Two
    } else {
        DistClass::One
    }
}

pub fn radius_classify(t: &[[u64; 3]]) -> DistClass {
    let n = t.len() as u64;
    if t.iter().any(|r| r[1] == n) {
        DistClass::One
    } else if t.iter().any(|r| r[2] == n) {
        DistClass::Two
    } else {
        DistClass::AtLeastThree
    }
}

#[derive(Clone, Copy, Debug)]
enum Span {
    /// Whole lists `l0..l1`, at least two of them.
    Lists(usize, usize),
    /// Elements `s..e` of list `l`.
    Part(usize, usize, usize),
}

struct Layout {
    starts: usize,
}

impl Layout {
    fn start(&self, m: &mut Machine, l: usize) -> Result<usize> {
        Ok(m.read(self.starts + l)? as usize)
    }

    fn len(&self, m: &mut Machine, l: usize) -> Result<usize> {
        Ok(self.start(m, l + 1)? - self.start(m, l)? - HDR)
    }

    fn normalize(&self, m: &mut Machine, s: Span) -> Result<Span> {
        Ok(match s {
            Span::Lists(l0, l1) if l1 - l0 == 1 => Span::Part(l0, 0, self.len(m, l0)?),
            other => other,
        })
    }

    fn size(&self, m: &mut Machine, s: Span) -> Result<usize> {
        Ok(match s {
            Span::Lists(l0, l1) => self.start(m, l1)? - self.start(m, l0)?,
            Span::Part(_, s, e) => e - s,
        })
    }

    /// Cut a multi-list span at the list boundary at or left of its word
    /// midpoint, keeping both halves non-empty.
    fn split(&self, m: &mut Machine, l0: usize, l1: usize) -> Result<(Span, Span)> {
        let target = (self.start(m, l0)? + self.start(m, l1)?) / 2;
        let (mut lo, mut hi) = (l0 + 1, l1 - 1);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if self.start(m, mid)? <= target {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        Ok((Span::Lists(l0, lo), Span::Lists(lo, l1)))
    }

    fn bump(&self, m: &mut Machine, l: usize, field: usize, by: Word) -> Result<()> {
        let a = self.start(m, l)? + field;
        let v = m.read(a)?;
        m.write(a, v + by)
    }

    fn meet(&self, m: &mut Machine, a: (usize, usize, usize), b: (usize, usize, usize)) -> Result<bool> {
        let (pa, pb) = (self.start(m, a.0)? + HDR, self.start(m, b.0)? + HDR);
        let (mut i, mut j) = (a.1, b.1);
        if i >= a.2 || j >= b.2 {
            return Ok(false);
        }
        let (mut x, mut y) = (m.read(pa + i)?, m.read(pb + j)?);
        loop {
            if x == y {
                return Ok(true);
            }
            if x < y {
                i += 1;
                if i == a.2 {
                    return Ok(false);
                }
                x = m.read(pa + i)?;
            } else {
                j += 1;
                if j == b.2 {
                    return Ok(false);
                }
                y = m.read(pb + j)?;
            }
        }
    }

    /// All unordered pairs of distinct lists inside `x`.
    fn diag(&self, m: &mut Machine, x: Span) -> Result<()> {
        if let Span::Lists(l0, l1) = self.normalize(m, x)? {
            let (x1, x2) = self.split(m, l0, l1)?;
            self.diag(m, x1)?;
            self.pair(m, x1, x2)?;
            self.diag(m, x2)?;
        }
        Ok(())
    }

    /// All pairs with one list in `a` and the other in `b` (disjoint).
    fn pair(&self, m: &mut Machine, a: Span, b: Span) -> Result<()> {
        let (a, b) = (self.normalize(m, a)?, self.normalize(m, b)?);
        match (a, b) {
            (Span::Part(la, s, e), Span::Part(lb, t, f)) => {
                if la != lb && self.meet(m, (la, s, e), (lb, t, f))? {
                    self.bump(m, la, DIST_TWO, 1)?;
                    self.bump(m, lb, DIST_TWO, 1)?;
                }
                Ok(())
            }
            (Span::Part(la, ..), Span::Lists(l0, l1)) => {
                self.against(m, a, b)?;
                // collect the flags left by the one-list recursion
                for l in l0..l1 {
                    let f = self.start(m, l)? + CLOSE;
                    if m.read(f)? != 0 {
                        m.write(f, 0)?;
                        if l != la {
                            self.bump(m, l, DIST_TWO, 1)?;
                            self.bump(m, la, DIST_TWO, 1)?;
                        }
                    }
                }
                Ok(())
            }
            (Span::Lists(..), Span::Part(..)) => self.pair(m, b, a),
            (Span::Lists(a0, a1), Span::Lists(b0, b1)) => {
                let (a1s, a2s) = self.split(m, a0, a1)?;
                let (b1s, b2s) = self.split(m, b0, b1)?;
                self.pair(m, a1s, b1s)?;
                self.pair(m, a1s, b2s)?;
                self.pair(m, a2s, b1s)?;
                self.pair(m, a2s, b2s)
            }
        }
    }

    /// One list (or a piece of it) against several whole lists: sets the
    /// close flag on every list in `b` that meets `a`.
    fn against(&self, m: &mut Machine, a: Span, b: Span) -> Result<()> {
        let Span::Part(la, s, e) = a else { unreachable!() };
        match self.normalize(m, b)? {
            Span::Part(lb, t, f) => {
                if self.meet(m, (la, s, e), (lb, t, f))? {
                    let fl = self.start(m, lb)? + CLOSE;
                    m.write(fl, 1)?;
                }
                Ok(())
            }
            Span::Lists(l0, l1) => {
                if e - s >= 2 && 2 * (e - s) > self.size(m, b)? {
                    let mid = s + (e - s) / 2;
                    self.against(m, Span::Part(la, s, mid), b)?;
                    self.against(m, Span::Part(la, mid, e), b)
                } else {
                    let (b1, b2) = self.split(m, l0, l1)?;
                    self.against(m, a, b1)?;
                    self.against(m, a, b2)
                }
            }
        }
    }
}

/// Build the annotated layout: closed-neighborhood pairs sorted by a binary
/// merge sort, then one pass for the start addresses and one for the lists.
fn build_layout(m: &mut Machine, g: &Graph) -> Result<(usize, usize)> {
    let n = g.n();
    let pairs = closed_pairs(m, g)?;
    let sorted = binary_merge_sort(m, &pairs, |r| (r[0], r[1]))?;

    let starts = DiskArray::alloc(m, n + 1, 1);
    let mut ws = Writer::over(starts.region);
    let layout = m.alloc(HDR * n + sorted.len);
    let mut r = Reader::over(sorted.region);
    let (mut rec, mut prev) = ([0; 2], [-1, -1]);
    let (mut cur, mut pos) = (0usize, layout.base);
    ws.push(m, pos as Word)?;
    for _ in 0..sorted.len {
        r.fill(m, &mut rec)?;
        if rec == prev {
            continue;
        }
        prev = rec;
        while cur < rec[0] as usize {
            pos += HDR;
            cur += 1;
            ws.push(m, pos as Word)?;
        }
        pos += 1;
    }
    while cur < n {
        pos += HDR;
        cur += 1;
        ws.push(m, pos as Word)?;
    }
    r.close(m)?;
    ws.close(m)?;

    let mut rs = Reader::over(starts.region);
    let mut r = Reader::over(sorted.region);
    let mut w = Writer::new(layout.base, layout.len);
    prev = [-1, -1];
    let mut s0 = rs.next(m)?;
    for v in 0..n {
        let s1 = rs.next(m)?;
        let len = (s1 - s0) as usize - HDR;
        w.push_all(m, &[v as Word, 0, 0, len as Word])?;
        let mut left = len;
        while left > 0 {
            r.fill(m, &mut rec)?;
            if rec == prev {
                continue;
            }
            prev = rec;
            w.push(m, rec[1])?;
            left -= 1;
        }
        s0 = s1;
    }
    rs.close(m)?;
    r.close(m)?;
    w.close(m)?;
    Ok((starts.base(), layout.base))
}

/// `T[i] = [1, 1 + deg(i), |{u : d(i,u) ≤ 2}|]` for a simple undirected
/// graph. Never reads M or B.
pub fn distance_counts_oblivious(m: &mut Machine, g: &Graph) -> Result<Vec<[u64; 3]>> {
    check_simple_undirected(g)?;
    if m.mode() != Mode::Lru {
        return Err(Error::Mode("lru"));
    }
    let n = g.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let (starts, _) = build_layout(m, g)?;
    let lay = Layout { starts };
    lay.diag(m, Span::Lists(0, n))?;

    let mut out = Vec::with_capacity(n);
    for v in 0..n {
        let h = lay.start(m, v)?;
        let mut hdr = [0; HDR];
        m.read_into(h, &mut hdr)?;
        out.push([1, hdr[3] as u64, 1 + hdr[DIST_TWO] as u64]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iomachine::MachineConfig;
    use crate::oracles::within_counts;

    fn counts(g: &Graph) -> Vec<[u64; 3]> {
        let mut m = Machine::new(MachineConfig::lru(64, 4).unwrap());
        distance_counts_oblivious(&mut m, g).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(counts(&Graph::complete(3)), vec![[1, 3, 3]; 3]);
        assert_eq!(counts(&Graph::path(3)), vec![[1, 2, 3], [1, 3, 3], [1, 2, 3]]);
    }

    #[test]
    fn classify_examples() {
        let k3 = DistanceCounts::from_t(counts(&Graph::complete(3)));
        assert_eq!((diameter_classify(&k3.s), radius_classify(&k3.t)), (DistClass::One, DistClass::One));
        let star = DistanceCounts::from_t(counts(&Graph::star(4)));
        assert_eq!((diameter_classify(&star.s), radius_classify(&star.t)), (DistClass::Two, DistClass::One));
        let c7 = DistanceCounts::from_t(counts(&Graph::cycle(7)));
        assert_eq!(
            (diameter_classify(&c7.s), radius_classify(&c7.t)),
            (DistClass::AtLeastThree, DistClass::AtLeastThree)
        );
    }

    #[test]
    fn star_with_long_center_list() {
        let mut g = Graph::star(30);
        g.add_edge(3, 4, 1).unwrap();
        g.add_edge(3, 4, 1).unwrap();
        assert_eq!(counts(&g), within_counts(&g));
    }

    #[test]
    fn oblivious_trace() {
        let g = Graph::cycle(20);
        let mut h = Vec::new();
        for (mm, b) in [(32, 4), (1024, 32)] {
            let mut m = Machine::new(MachineConfig::lru(mm, b).unwrap());
            distance_counts_oblivious(&mut m, &g).unwrap();
            h.push(m.trace_hash());
        }
        assert_eq!(h[0], h[1]);
    }
}
