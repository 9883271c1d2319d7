use crate::error::{Error, Result};
use crate::instances::VectorSets;
use crate::iomachine::{Machine, Mode, Region, Word};

/// Orthogonal vectors by recursive halving of both lists. Never looks at M or
/// B; meant for the LRU cache.
pub fn ov_recursive(m: &mut Machine, inst: &VectorSets) -> Result<bool> {
    if m.mode() != Mode::Lru {
        return Err(Error::Mode("lru"));
    }
    inst.check()?;
    let d = inst.d;
    let u = m.place(&inst.flat_u());
    let v = m.place(&inst.flat_v());
    let (nu, nv) = (inst.u.len(), inst.v.len());
    if nu == 0 || nv == 0 {
        return Ok(false);
    }
    if d == 0 {
        return Ok(true);
    }
    let mut ctx = Ctx { u, v, d, bu: vec![0; d], bv: vec![0; d] };
    ctx.solve(m, 0, nu, 0, nv)
}

struct Ctx {
    u: Region,
    v: Region,
    d: usize,
    bu: Vec<Word>,
    bv: Vec<Word>,
}

impl Ctx {
    fn solve(&mut self, m: &mut Machine, u0: usize, u1: usize, v0: usize, v1: usize) -> Result<bool> {
        let (su, sv) = (u1 - u0, v1 - v0);
        if su == 1 && sv == 1 {
            m.read_into(self.u.base + u0 * self.d, &mut self.bu)?;
            m.read_into(self.v.base + v0 * self.d, &mut self.bv)?;
            return Ok(self.bu.iter().zip(&self.bv).all(|(a, b)| a * b == 0));
        }
        let (um, vm) = (u0 + su / 2, v0 + sv / 2);
        let us: &[(usize, usize)] = if su > 1 { &[(u0, um), (um, u1)] } else { &[(u0, u1)] };
        let vs: &[(usize, usize)] = if sv > 1 { &[(v0, vm), (vm, v1)] } else { &[(v0, v1)] };
        for &(a0, a1) in us {
            for &(b0, b1) in vs {
                if self.solve(m, a0, a1, b0, b1)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}
