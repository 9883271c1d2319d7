use crate::error::Result;
use crate::extprims::{ext_sort, DiskArray, Reader};
use crate::instances::ThreeSumInstance;
use crate::iomachine::Machine;

/// Sort B ascending and C descending, then one two-pointer sweep over both
/// per element of A.
pub fn three_sum_baseline(m: &mut Machine, inst: &ThreeSumInstance) -> Result<bool> {
    let a = DiskArray::place(m, &inst.a, 1);
    let b = DiskArray::place(m, &inst.b, 1);
    let c = DiskArray::place(m, &inst.c, 1);
    if a.len == 0 || b.len == 0 || c.len == 0 {
        return Ok(false);
    }
    let b = ext_sort(m, &b, |r| r[0])?;
    let c = ext_sort(m, &c, |r| std::cmp::Reverse(r[0]))?;
    let mut ra = Reader::over(a.region);
    for _ in 0..a.len {
        let target = -(ra.next(m)? as i128);
        let mut rb = Reader::over(b.region);
        let mut rc = Reader::over(c.region);
        let mut x = rb.next(m)? as i128;
        let mut y = rc.next(m)? as i128;
        let found = loop {
            let s = x + y;
            if s == target {
                break true;
            }
            if s < target {
                if rb.is_done() {
                    break false;
                }
                x = rb.next(m)? as i128;
            } else {
                if rc.is_done() {
                    break false;
                }
                y = rc.next(m)? as i128;
            }
        };
        rb.close(m)?;
        rc.close(m)?;
        if found {
            ra.close(m)?;
            return Ok(true);
        }
    }
    ra.close(m)?;
    Ok(false)
}
