//! Sequential readers and writers that work in either cache mode.
//!
//! In explicit mode a stream keeps at most one line of its own resident: it
//! loads the line under its cursor if nobody else has, and evicts it when the
//! cursor moves on. Streams that happen to share a line cooperate by checking
//! residency on every word.

use crate::error::{Error, Result};
use crate::iomachine::{Machine, Mode, Region, Word};

#[derive(Debug, Default)]
struct Owner(Option<usize>);

impl Owner {
    #[inline]
    fn ensure(&mut self, m: &mut Machine, addr: usize) -> Result<()> {
        if m.mode() != Mode::Explicit {
            return Ok(());
        }
        let line = addr / m.b();
        if self.0 != Some(line) {
            self.release(m)?;
        }
        if !m.is_resident(line) {
            m.load_line(line)?;
            self.0 = Some(line);
        }
        Ok(())
    }

    fn release(&mut self, m: &mut Machine) -> Result<()> {
        if let Some(o) = self.0.take() {
            if m.mode() == Mode::Explicit && m.is_resident(o) {
                m.evict_line(o)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct Reader {
    pos: usize,
    end: usize,
    owner: Owner,
}

impl Reader {
    pub fn new(base: usize, len: usize) -> Self {
        Reader { pos: base, end: base + len, owner: Owner::default() }
    }

    pub fn over(r: Region) -> Self {
        Self::new(r.base, r.len)
    }

    pub fn remaining(&self) -> usize {
        self.end - self.pos
    }

    pub fn is_done(&self) -> bool {
        self.pos >= self.end
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn next(&mut self, m: &mut Machine) -> Result<Word> {
        if self.pos >= self.end {
            return Err(Error::Bounds { addr: self.pos, size: self.end });
        }
        self.owner.ensure(m, self.pos)?;
        let v = m.read(self.pos)?;
        self.pos += 1;
        Ok(v)
    }

    /// Read `out.len()` consecutive words.
    pub fn fill(&mut self, m: &mut Machine, out: &mut [Word]) -> Result<()> {
        if m.mode() == Mode::Lru {
            if self.remaining() < out.len() {
                return Err(Error::Bounds { addr: self.end, size: self.end });
            }
            m.read_into(self.pos, out)?;
            self.pos += out.len();
            return Ok(());
        }
        for slot in out.iter_mut() {
            *slot = self.next(m)?;
        }
        Ok(())
    }

    /// Advance without reading.
    pub fn skip(&mut self, k: usize) {
        self.pos = (self.pos + k).min(self.end);
    }

    /// Evict the line this stream loaded, if it is still resident.
    pub fn close(&mut self, m: &mut Machine) -> Result<()> {
        self.owner.release(m)
    }
}

#[derive(Debug)]
pub struct Writer {
    pos: usize,
    end: usize,
    owner: Owner,
}

impl Writer {
    pub fn new(base: usize, len: usize) -> Self {
        Writer { pos: base, end: base + len, owner: Owner::default() }
    }

    pub fn over(r: Region) -> Self {
        Self::new(r.base, r.len)
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn written_from(&self, base: usize) -> usize {
        self.pos - base
    }

    pub fn push(&mut self, m: &mut Machine, v: Word) -> Result<()> {
        if self.pos >= self.end {
            return Err(Error::Bounds { addr: self.pos, size: self.end });
        }
        self.owner.ensure(m, self.pos)?;
        m.write(self.pos, v)?;
        self.pos += 1;
        Ok(())
    }

    pub fn push_all(&mut self, m: &mut Machine, vs: &[Word]) -> Result<()> {
        if m.mode() == Mode::Lru {
            if self.end - self.pos < vs.len() {
                return Err(Error::Bounds { addr: self.end, size: self.end });
            }
            m.write_from(self.pos, vs)?;
            self.pos += vs.len();
            return Ok(());
        }
        for &v in vs {
            self.push(m, v)?;
        }
        Ok(())
    }

    pub fn close(&mut self, m: &mut Machine) -> Result<()> {
        self.owner.release(m)
    }
}

/// Lines brought in by [`Pin::range`], evicted again by [`Pin::unpin`].
/// Lines that were already resident are left alone.
#[derive(Debug, Default)]
pub struct Pin {
    lines: Vec<usize>,
}

impl Pin {
    pub fn new() -> Self {
        Pin::default()
    }

    /// Make `[base, base+len)` resident. No-op in LRU mode.
    pub fn range(&mut self, m: &mut Machine, base: usize, len: usize) -> Result<()> {
        if m.mode() != Mode::Explicit || len == 0 {
            return Ok(());
        }
        let b = m.b();
        for line in base / b..=(base + len - 1) / b {
            if !m.is_resident(line) {
                m.load_line(line)?;
                self.lines.push(line);
            }
        }
        Ok(())
    }

    pub fn unpin(&mut self, m: &mut Machine) -> Result<()> {
        for line in self.lines.drain(..) {
            if m.is_resident(line) {
                m.evict_line(line)?;
            }
        }
        Ok(())
    }

    pub fn count(&self) -> usize {
        self.lines.len()
    }
}
