use crate::error::{Error, Result};
use crate::extprims::Pin;
use crate::instances::VectorSets;
use crate::iomachine::{Machine, Mode};

fn span(words: usize, b: usize) -> usize {
    words.div_ceil(b) + 1
}

/// Hitting set with explicit transfers: an A-block and its "missed some b"
/// flags share half the cache, B-blocks stream through the other half.
pub fn hitting_set_blocked(m: &mut Machine, inst: &VectorSets) -> Result<bool> {
    if m.mode() != Mode::Explicit {
        return Err(Error::Mode("explicit"));
    }
    inst.check()?;
    let (d, b) = (inst.d.max(1), m.b());
    let lines = m.m() / b;
    let half = lines / 2;
    let fits_a = |a: usize| span(a * d, b) + span(a, b) <= half;
    let fits_b = |k: usize| span(k * d, b) <= lines - half;
    if !fits_a(1) || !fits_b(1) {
        return Err(Error::Config(format!("M={} too small for d={} with B={b}", m.m(), inst.d)));
    }
    let mut a_blk = 1;
    while fits_a(a_blk + 1) {
        a_blk += 1;
    }
    let mut b_blk = 1;
    while fits_b(b_blk + 1) {
        b_blk += 1;
    }

    let (na, nb) = (inst.u.len(), inst.v.len());
    let ra = m.place(&inst.flat_u());
    let rb = m.place(&inst.flat_v());
    let flags = m.alloc(na);
    let d = inst.d;

    for a0 in (0..na).step_by(a_blk) {
        let ac = a_blk.min(na - a0);
        let mut pin_a = Pin::new();
        pin_a.range(m, ra.base + a0 * d, ac * d)?;
        pin_a.range(m, flags.base + a0, ac)?;
        let avecs = m.read_vec(ra.base + a0 * d, ac * d)?;
        let mut missed = vec![0; ac];
        m.write_from(flags.base + a0, &missed)?;
        for b0 in (0..nb).step_by(b_blk) {
            let bc = b_blk.min(nb - b0);
            let mut pin_b = Pin::new();
            pin_b.range(m, rb.base + b0 * d, bc * d)?;
            let bvecs = m.read_vec(rb.base + b0 * d, bc * d)?;
            for (i, flag) in missed.iter_mut().enumerate() {
                if *flag != 0 {
                    continue;
                }
                let a = &avecs[i * d..(i + 1) * d];
                if bvecs.chunks(d.max(1)).take(bc).any(|bv| a.iter().zip(bv).all(|(x, y)| x * y == 0)) {
                    *flag = 1;
                    m.write(flags.base + a0 + i, 1)?;
                }
            }
            pin_b.unpin(m)?;
        }
        let hit = m.read_vec(flags.base + a0, ac)?.contains(&0);
        pin_a.unpin(m)?;
        if hit {
            return Ok(true);
        }
    }
    Ok(false)
}
