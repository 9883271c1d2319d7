//! Convolution 3SUM into plain 3SUM and into zero-weight triangle.

use super::Ctx;
use crate::error::Result;
use crate::instances::{Matrix, ThreeSumInstance, TriangleInstance};
use crate::iomachine::{checked_word, Word};

/// ∃ i, j with i + j < n and A[i] + A[j] + A[i+j] = 0, by one 3SUM call.
/// Values are tagged with their index scaled by 10Ŵ (Ŵ = max|A| + 1), so a
/// zero sum forces the third index to be i + j.
pub fn conv3sum_to_3sum(
    cx: &mut Ctx,
    a: &[Word],
    solver: &mut impl FnMut(&ThreeSumInstance) -> Result<bool>,
) -> Result<bool> {
    let w_hat = a.iter().map(|x| x.unsigned_abs() as i128).max().unwrap_or(0) + 1;
    let scale = 10 * w_hat;
    let mut inst = ThreeSumInstance { a: Vec::with_capacity(a.len()), b: Vec::with_capacity(a.len()), c: Vec::with_capacity(a.len()) };
    for (i, &x) in a.iter().enumerate() {
        let tag = scale * i as i128;
        inst.a.push(checked_word(tag + x as i128)?);
        inst.b.push(checked_word(tag + x as i128)?);
        inst.c.push(checked_word(-tag + x as i128)?);
    }
    cx.target("three-sum", a.len(), 3 * a.len());
    cx.charge_stream(a.len(), 3 * a.len())?;
    cx.call(|| solver(&inst))
}

/// ∃ s, t with s + t < n and A[s] + B[t] + C[s+t] = 0, by r + 1 zero-triangle
/// calls on r × r × r instances, r = ⌈√n⌉.
///
/// With s = p·r + a, instance i has edges XY[p][a] = A[p·r + a],
/// YZ[a][q] = B[i·r + q − a] and ZX[q][p] = C[(p + i)·r + q], so a triangle
/// (p, a, q) pairs s with t = i·r + q − a and s + t = (p + i)·r + q. Indices
/// outside 0..n get a weight too large to be part of a zero sum.
pub fn conv3sum_to_zero_triangle(
    cx: &mut Ctx,
    a: &[Word],
    b: &[Word],
    c: &[Word],
    solver: &mut impl FnMut(&TriangleInstance) -> Result<bool>,
) -> Result<bool> {
    let n = a.len().min(b.len()).min(c.len());
    if n == 0 {
        return Ok(false);
    }
    let r = (1..).find(|r| r * r >= n).unwrap();
    let big_val = a[..n].iter().chain(&b[..n]).chain(&c[..n]).map(|x| x.unsigned_abs() as i128).max().unwrap_or(0);
    let big = checked_word(3 * big_val + 1)?;
    let at = |list: &[Word], idx: i64| -> Word {
        if idx >= 0 && (idx as usize) < n {
            list[idx as usize]
        } else {
            big
        }
    };
    let r_i = r as i64;
    for i in 0..=r_i {
        let mut xy = Matrix::zeros(r, r);
        let mut yz = Matrix::zeros(r, r);
        let mut zx = Matrix::zeros(r, r);
        for p in 0..r_i {
            for off in 0..r_i {
                xy.set(p as usize, off as usize, at(a, p * r_i + off));
                yz.set(p as usize, off as usize, at(b, i * r_i + off - p));
                zx.set(p as usize, off as usize, at(c, (off + i) * r_i + p));
            }
        }
        let inst = TriangleInstance::new(xy, yz, zx)?;
        cx.target("triangle", r, 3 * r * r);
        cx.charge_stream(3 * n, 3 * r * r)?;
        if cx.call(|| solver(&inst))? {
            return Ok(true);
        }
    }
    Ok(false)
}
