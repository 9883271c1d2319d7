//! Simulated two-level memory: a word-addressed disk plus a cache of `M` words
//! held as `M/B` aligned lines. Only residency is tracked; word values always
//! live on the disk, so cached computation is free and misses depend on the
//! address trace alone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Word = i64;

/// Sentinel for "no path" / "absent edge". Anything at or above it is infinite.
pub const INF: Word = 1 << 60;

/// Addition that keeps `INF` absorbing and never overflows.
#[inline]
pub fn sat_add(a: Word, b: Word) -> Word {
    if a >= INF || b >= INF {
        INF
    } else {
        let s = a + b;
        if s >= INF {
            INF
        } else {
            s
        }
    }
}

/// Narrow a wide intermediate to a word, rejecting values that would collide
/// with the sentinel range.
pub fn checked_word(v: i128) -> Result<Word> {
    if v.unsigned_abs() >= INF as u128 {
        Err(Error::TooLarge(format!("value {v} exceeds word range")))
    } else {
        Ok(v as Word)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// The algorithm issues `load_line`/`evict_line` itself.
    Explicit,
    /// Misses load lines automatically and evict the least recently used one.
    Lru,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit" => Ok(Mode::Explicit),
            "lru" | "automatic-lru" => Ok(Mode::Lru),
            _ => Err(Error::Argument(format!("unknown mode `{s}`"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Explicit => "explicit",
            Mode::Lru => "lru",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MachineConfig {
    pub m: usize,
    pub b: usize,
    pub mode: Mode,
}

impl MachineConfig {
    pub fn new(m: usize, b: usize, mode: Mode) -> Result<Self> {
        if b == 0 {
            return Err(Error::Config("B must be at least 1".into()));
        }
        if m < b {
            return Err(Error::Config(format!("M={m} is smaller than B={b}")));
        }
        if !m.is_multiple_of(b) {
            return Err(Error::Config(format!("M={m} is not a multiple of B={b}")));
        }
        if m / b >= u32::MAX as usize {
            return Err(Error::Config("too many cache lines".into()));
        }
        Ok(MachineConfig { m, b, mode })
    }

    pub fn lru(m: usize, b: usize) -> Result<Self> {
        Self::new(m, b, Mode::Lru)
    }

    pub fn explicit(m: usize, b: usize) -> Result<Self> {
        Self::new(m, b, Mode::Explicit)
    }

    /// Number of cache lines.
    pub fn lines(&self) -> usize {
        self.m / self.b
    }

    pub fn with_mode(self, mode: Mode) -> Self {
        MachineConfig { mode, ..self }
    }

    /// Whether M >= B^2. Recorded, never enforced.
    pub fn tall_cache(&self) -> bool {
        self.m >= self.b.saturating_mul(self.b)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub misses: u64,
    pub writebacks: u64,
    pub logical_accesses: u64,
}

impl std::ops::Sub for Stats {
    type Output = Stats;
    fn sub(self, o: Stats) -> Stats {
        Stats {
            misses: self.misses - o.misses,
            writebacks: self.writebacks - o.writebacks,
            logical_accesses: self.logical_accesses - o.logical_accesses,
        }
    }
}

impl std::ops::AddAssign for Stats {
    fn add_assign(&mut self, o: Stats) {
        self.misses += o.misses;
        self.writebacks += o.writebacks;
        self.logical_accesses += o.logical_accesses;
    }
}

/// A contiguous run of disk words handed out by [`Machine::alloc`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub base: usize,
    pub len: usize,
}

impl Region {
    pub fn end(&self) -> usize {
        self.base + self.len
    }

    pub fn at(&self, i: usize) -> usize {
        debug_assert!(i < self.len);
        self.base + i
    }

    pub fn sub(&self, off: usize, len: usize) -> Region {
        debug_assert!(off + len <= self.len);
        Region { base: self.base + off, len }
    }
}

/// Allocation watermark for stack-style release.
#[derive(Clone, Copy, Debug)]
pub struct Mark {
    top: usize,
    regions: usize,
}

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy)]
struct Slot {
    line: usize,
    prev: u32,
    next: u32,
    dirty: bool,
}

#[derive(Clone, Copy)]
struct RegionEntry {
    base: usize,
    len: usize,
    ordinal: u64,
}

const OP_READ: u64 = 1;
const OP_WRITE: u64 = 2;

pub struct Machine {
    cfg: MachineConfig,
    disk: Vec<Word>,
    top: usize,
    slot_of: Vec<u32>,
    slots: Vec<Slot>,
    free: Vec<u32>,
    head: u32,
    tail: u32,
    resident: usize,
    stats: Stats,
    trace: u64,
    regions: Vec<RegionEntry>,
    next_ordinal: u64,
    last_region: usize,
}

impl Machine {
    pub fn new(cfg: MachineConfig) -> Self {
        let lines = cfg.lines();
        Machine {
            cfg,
            disk: Vec::new(),
            top: 0,
            slot_of: Vec::new(),
            slots: Vec::with_capacity(lines),
            free: Vec::new(),
            head: NONE,
            tail: NONE,
            resident: 0,
            stats: Stats::default(),
            trace: TRACE_SEED,
            regions: Vec::new(),
            next_ordinal: 0,
            last_region: 0,
        }
    }

    pub fn config(&self) -> MachineConfig {
        self.cfg
    }

    pub fn b(&self) -> usize {
        self.cfg.b
    }

    pub fn m(&self) -> usize {
        self.cfg.m
    }

    pub fn mode(&self) -> Mode {
        self.cfg.mode
    }

    pub fn disk_size(&self) -> usize {
        self.disk.len()
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    /// Zero the counters and the trace hash. Cache contents are kept.
    pub fn reset_stats(&mut self) {
        self.stats = Stats::default();
        self.trace = TRACE_SEED;
    }

    /// Hash of the logical access sequence since the last reset. Addresses
    /// enter the hash as (allocation ordinal, offset), so it does not depend
    /// on line alignment.
    pub fn trace_hash(&self) -> u64 {
        self.trace
    }

    pub fn resident_lines(&self) -> usize {
        self.resident
    }

    pub fn is_resident(&self, line: usize) -> bool {
        line < self.slot_of.len() && self.slot_of[line] != NONE
    }

    pub fn line_of(&self, addr: usize) -> usize {
        addr / self.cfg.b
    }

    // ---- allocation -------------------------------------------------------

    /// Fresh line-aligned region of `n` words.
    pub fn alloc(&mut self, n: usize) -> Region {
        let b = self.cfg.b;
        let base = self.top.div_ceil(b) * b;
        let top = base.checked_add(n).expect("disk address overflow");
        self.top = top;
        let need = top.div_ceil(b) * b;
        if need > self.disk.len() {
            self.disk.resize(need, 0);
            self.slot_of.resize(need / b, NONE);
        }
        if n > 0 {
            self.regions.push(RegionEntry { base, len: n, ordinal: self.next_ordinal });
        }
        self.next_ordinal += 1;
        Region { base, len: n }
    }

    /// Allocate and fill without charging any cost (input placement).
    pub fn place(&mut self, data: &[Word]) -> Region {
        let r = self.alloc(data.len());
        self.disk[r.base..r.end()].copy_from_slice(data);
        r
    }

    pub fn mark(&self) -> Mark {
        Mark { top: self.top, regions: self.regions.len() }
    }

    /// Release everything allocated after `mark`. Reused space keeps stale
    /// contents, and resident lines stay resident.
    pub fn release(&mut self, mark: Mark) {
        self.top = mark.top;
        self.regions.truncate(mark.regions);
        self.last_region = 0;
    }

    // ---- uncharged host access ----------------------------------------------

    pub fn host_read(&self, base: usize, len: usize) -> Vec<Word> {
        self.disk[base..base + len].to_vec()
    }

    pub fn host_region(&self, r: Region) -> Vec<Word> {
        self.host_read(r.base, r.len)
    }

    pub fn host_get(&self, addr: usize) -> Word {
        self.disk[addr]
    }

    pub fn host_write(&mut self, base: usize, data: &[Word]) {
        self.disk[base..base + data.len()].copy_from_slice(data);
    }

    // ---- charged access -----------------------------------------------------

    #[inline]
    pub fn read(&mut self, addr: usize) -> Result<Word> {
        self.check(addr, 1)?;
        self.touch(addr / self.cfg.b, false)?;
        self.stats.logical_accesses += 1;
        self.record(OP_READ, addr, 1);
        Ok(self.disk[addr])
    }

    #[inline]
    pub fn write(&mut self, addr: usize, value: Word) -> Result<()> {
        self.check(addr, 1)?;
        self.touch(addr / self.cfg.b, true)?;
        self.stats.logical_accesses += 1;
        self.record(OP_WRITE, addr, 1);
        self.disk[addr] = value;
        Ok(())
    }

    /// Read `out.len()` consecutive words. Same cost as reading them one by one.
    pub fn read_into(&mut self, base: usize, out: &mut [Word]) -> Result<()> {
        let len = out.len();
        if len == 0 {
            return Ok(());
        }
        self.check(base, len)?;
        self.touch_span(base, len, false)?;
        self.stats.logical_accesses += len as u64;
        self.record(OP_READ, base, len);
        out.copy_from_slice(&self.disk[base..base + len]);
        Ok(())
    }

    pub fn read_vec(&mut self, base: usize, len: usize) -> Result<Vec<Word>> {
        let mut v = vec![0; len];
        self.read_into(base, &mut v)?;
        Ok(v)
    }

    pub fn write_from(&mut self, base: usize, data: &[Word]) -> Result<()> {
        let len = data.len();
        if len == 0 {
            return Ok(());
        }
        self.check(base, len)?;
        self.touch_span(base, len, true)?;
        self.stats.logical_accesses += len as u64;
        self.record(OP_WRITE, base, len);
        self.disk[base..base + len].copy_from_slice(data);
        Ok(())
    }

    // ---- explicit transfers -------------------------------------------------

    /// Bring a line into the cache. Loading a resident line is a no-op.
    pub fn load_line(&mut self, line: usize) -> Result<()> {
        if self.cfg.mode != Mode::Explicit {
            return Err(Error::Mode("explicit"));
        }
        if line >= self.slot_of.len() {
            return Err(Error::Bounds { addr: line * self.cfg.b, size: self.disk.len() });
        }
        if self.slot_of[line] != NONE {
            return Ok(());
        }
        if self.resident == self.cfg.lines() {
            return Err(Error::Capacity { lines: self.resident });
        }
        self.insert(line, false);
        Ok(())
    }

    pub fn evict_line(&mut self, line: usize) -> Result<()> {
        if self.cfg.mode != Mode::Explicit {
            return Err(Error::Mode("explicit"));
        }
        if !self.is_resident(line) {
            return Err(Error::Fault { line });
        }
        self.drop_slot(self.slot_of[line]);
        Ok(())
    }

    /// Load every line overlapping `[base, base+len)`.
    pub fn load_range(&mut self, base: usize, len: usize) -> Result<()> {
        if len == 0 {
            return Ok(());
        }
        let b = self.cfg.b;
        for line in base / b..=(base + len - 1) / b {
            self.load_line(line)?;
        }
        Ok(())
    }

    /// Evict the resident lines overlapping `[base, base+len)`.
    pub fn evict_range(&mut self, base: usize, len: usize) -> Result<()> {
        if len == 0 {
            return Ok(());
        }
        let b = self.cfg.b;
        for line in base / b..=(base + len - 1) / b {
            if self.is_resident(line) {
                self.evict_line(line)?;
            }
        }
        Ok(())
    }

    /// Lines needed to hold `[base, base+len)`.
    pub fn span_lines(&self, base: usize, len: usize) -> usize {
        if len == 0 {
            0
        } else {
            (base + len - 1) / self.cfg.b - base / self.cfg.b + 1
        }
    }

    /// Write back dirty lines and empty the cache.
    pub fn flush(&mut self) {
        while self.head != NONE {
            self.drop_slot(self.head);
        }
    }

    // ---- internals ----------------------------------------------------------

    #[inline]
    fn check(&self, addr: usize, len: usize) -> Result<()> {
        match addr.checked_add(len) {
            Some(end) if end <= self.disk.len() => Ok(()),
            _ => Err(Error::Bounds { addr: addr.saturating_add(len - 1), size: self.disk.len() }),
        }
    }

    #[inline]
    fn touch_span(&mut self, base: usize, len: usize, write: bool) -> Result<()> {
        let b = self.cfg.b;
        let first = base / b;
        let last = (base + len - 1) / b;
        if self.cfg.mode == Mode::Explicit {
            for line in first..=last {
                if self.slot_of[line] == NONE {
                    return Err(Error::Fault { line });
                }
            }
        }
        for line in first..=last {
            self.touch(line, write)?;
        }
        Ok(())
    }

    #[inline]
    fn touch(&mut self, line: usize, write: bool) -> Result<()> {
        let s = self.slot_of[line];
        if s != NONE {
            if s != self.head && self.cfg.mode == Mode::Lru {
                self.unlink(s);
                self.push_front(s);
            }
            if write {
                self.slots[s as usize].dirty = true;
            }
            return Ok(());
        }
        if self.cfg.mode == Mode::Explicit {
            return Err(Error::Fault { line });
        }
        if self.resident == self.cfg.lines() {
            self.drop_slot(self.tail);
        }
        self.insert(line, write);
        Ok(())
    }

    fn insert(&mut self, line: usize, dirty: bool) {
        let slot = Slot { line, prev: NONE, next: NONE, dirty };
        let s = match self.free.pop() {
            Some(s) => {
                self.slots[s as usize] = slot;
                s
            }
            None => {
                self.slots.push(slot);
                (self.slots.len() - 1) as u32
            }
        };
        self.push_front(s);
        self.slot_of[line] = s;
        self.resident += 1;
        self.stats.misses += 1;
    }

    fn drop_slot(&mut self, s: u32) {
        let slot = self.slots[s as usize];
        if slot.dirty {
            self.stats.writebacks += 1;
        }
        self.unlink(s);
        self.slot_of[slot.line] = NONE;
        self.free.push(s);
        self.resident -= 1;
    }

    #[inline]
    fn unlink(&mut self, s: u32) {
        let Slot { prev, next, .. } = self.slots[s as usize];
        if prev != NONE {
            self.slots[prev as usize].next = next;
        } else {
            self.head = next;
        }
        if next != NONE {
            self.slots[next as usize].prev = prev;
        } else {
            self.tail = prev;
        }
    }

    #[inline]
    fn push_front(&mut self, s: u32) {
        let old = self.head;
        {
            let slot = &mut self.slots[s as usize];
            slot.prev = NONE;
            slot.next = old;
        }
        if old != NONE {
            self.slots[old as usize].prev = s;
        } else {
            self.tail = s;
        }
        self.head = s;
    }

    #[inline]
    fn record(&mut self, op: u64, addr: usize, len: usize) {
        let (ord, off) = self.locate(addr);
        let mut h = self.trace;
        for v in [op ^ (ord << 2), off as u64, len as u64] {
            h ^= v;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        self.trace = h;
    }

    #[inline]
    fn locate(&mut self, addr: usize) -> (u64, usize) {
        if let Some(r) = self.regions.get(self.last_region) {
            if addr >= r.base && addr < r.base + r.len {
                return (r.ordinal, addr - r.base);
            }
        }
        let idx = self.regions.partition_point(|r| r.base <= addr);
        if idx > 0 {
            let r = self.regions[idx - 1];
            if addr < r.base + r.len {
                self.last_region = idx - 1;
                return (r.ordinal, addr - r.base);
            }
        }
        (u64::MAX >> 2, addr)
    }
}

const TRACE_SEED: u64 = 0xcbf2_9ce4_8422_2325;

#[cfg(test)]
mod tests {
    use super::*;

    fn lru(m: usize, b: usize) -> Machine {
        Machine::new(MachineConfig::lru(m, b).unwrap())
    }

    #[test]
    fn config_invariants() {
        assert!(MachineConfig::lru(32, 0).is_err());
        assert!(MachineConfig::lru(8, 16).is_err());
        assert!(MachineConfig::lru(40, 16).is_err());
        assert_eq!(MachineConfig::lru(64, 16).unwrap().lines(), 4);
    }

    #[test]
    fn one_line_read() {
        let mut m = lru(64, 16);
        let r = m.alloc(16);
        for i in 0..16 {
            m.read(r.at(i)).unwrap();
        }
        assert_eq!(m.stats().misses, 1);
    }

    #[test]
    fn sequential_scan_misses() {
        let mut m = lru(64, 16);
        let r = m.alloc(1024);
        for i in 0..1024 {
            m.read(r.at(i)).unwrap();
        }
        assert_eq!(m.stats().misses, 64);
        assert_eq!(m.stats().logical_accesses, 1024);
    }

    #[test]
    fn lru_three_lines_two_slots() {
        let mut m = lru(32, 16);
        m.alloc(48);
        for line in [0, 1, 2, 0] {
            m.read(line * 16).unwrap();
        }
        assert_eq!(m.stats().misses, 4);
    }

    #[test]
    fn write_read_round_trip() {
        let mut m = lru(32, 16);
        let r = m.alloc(16);
        m.write(r.at(3), -7).unwrap();
        assert_eq!(m.read(r.at(3)).unwrap(), -7);
        assert_eq!(m.stats().misses, 1);
    }

    #[test]
    fn distinct_cold_writes() {
        let mut m = lru(64, 16);
        m.alloc(16 * 3);
        for k in 0..3 {
            m.write(k * 16, 1).unwrap();
        }
        assert_eq!(m.stats().misses, 3);
    }

    #[test]
    fn dirty_eviction_writes_back() {
        let mut m = lru(32, 16);
        m.alloc(48);
        m.write(0, 1).unwrap();
        m.write(16, 1).unwrap();
        assert_eq!(m.stats().writebacks, 0);
        m.read(32).unwrap();
        assert_eq!(m.stats().writebacks, 1);
    }

    #[test]
    fn explicit_load_evict() {
        let mut m = Machine::new(MachineConfig::explicit(32, 16).unwrap());
        m.alloc(48);
        assert_eq!(m.read(0), Err(Error::Fault { line: 0 }));
        m.load_line(0).unwrap();
        m.load_line(1).unwrap();
        assert_eq!(m.load_line(2), Err(Error::Capacity { lines: 2 }));
        m.evict_line(0).unwrap();
        m.load_line(2).unwrap();
        assert_eq!(m.stats().misses, 3);
        assert_eq!(m.evict_line(0), Err(Error::Fault { line: 0 }));
        m.write(16, 5).unwrap();
        m.evict_line(1).unwrap();
        assert_eq!(m.stats().writebacks, 1);
    }

    #[test]
    fn explicit_ops_rejected_in_lru() {
        let mut m = lru(32, 16);
        m.alloc(16);
        assert_eq!(m.load_line(0), Err(Error::Mode("explicit")));
    }

    #[test]
    fn bounds() {
        let mut m = lru(32, 16);
        m.alloc(10);
        assert!(matches!(m.read(16), Err(Error::Bounds { .. })));
    }

    #[test]
    fn aligned_allocation() {
        let mut m = lru(32, 16);
        assert_eq!(m.alloc(10).base, 0);
        assert_eq!(m.alloc(16).base, 16);
        let z = m.alloc(0);
        assert_eq!(z.len, 0);
        assert_eq!(m.alloc(16).base, 32);
    }

    #[test]
    fn reset_and_flush() {
        let mut m = lru(32, 16);
        m.alloc(32);
        m.write(0, 1).unwrap();
        m.reset_stats();
        assert_eq!(m.stats(), Stats::default());
        m.flush();
        assert_eq!(m.stats().writebacks, 1);
        m.flush();
        assert_eq!(m.stats().writebacks, 1);
        assert_eq!(m.resident_lines(), 0);
    }

    #[test]
    fn flush_gives_cold_start() {
        let scan = |m: &mut Machine, r: Region| {
            let before = m.stats().misses;
            for i in 0..r.len {
                m.read(r.at(i)).unwrap();
            }
            m.stats().misses - before
        };
        let mut fresh = lru(64, 8);
        let r = fresh.alloc(200);
        let a = scan(&mut fresh, r);
        fresh.flush();
        let b = scan(&mut fresh, r);
        assert_eq!(a, b);
        assert_eq!(a, 25);
    }

    #[test]
    fn trace_hash_ignores_alignment() {
        let run = |b: usize| {
            let mut m = lru(64, b);
            let x = m.alloc(5);
            let y = m.alloc(7);
            m.write(x.at(4), 1).unwrap();
            m.read(y.at(6)).unwrap();
            m.trace_hash()
        };
        assert_eq!(run(4), run(8));
    }

    #[test]
    fn sat_add_absorbs() {
        assert_eq!(sat_add(INF, -5), INF);
        assert_eq!(sat_add(3, 4), 7);
        assert_eq!(sat_add(INF - 1, 10), INF);
    }
}
