//! Counting roots of a separable polynomial by residue refinement.

use super::field::LocalElement;
use super::PadicError;

/// `p(y + delta)` by repeated synthetic division; coefficients constant
/// first.
fn shift(p: &[LocalElement], delta: &LocalElement) -> Vec<LocalElement> {
    let mut c = p.to_vec();
    let n = c.len() - 1;
    for i in 0..n {
        for j in (i..n).rev() {
            c[j] = c[j].add(&delta.mul(&c[j + 1]));
        }
    }
    c
}

/// Smallest valuation, rounded up, of the roots with valuation at least `k`
/// when the `k`-residual polynomial has top index `top`, or `None` if some
/// coefficient is unknown.
fn next_level(vals: &[Option<u32>], top: usize, k: u32) -> Option<u32> {
    let vt = vals[top]? as i64;
    let mut best: Option<(i64, i64)> = None;
    for (j, v) in vals.iter().enumerate().take(top) {
        let v = (*v)? as i64;
        let (num, den) = (v - vt, (top - j) as i64);
        if best.is_none_or(|(bn, bd)| num * bd < bn * den) {
            best = Some((num, den));
        }
    }
    let (num, den) = best?;
    Some(((num + den - 1).div_euclid(den)).max(k as i64) as u32)
}

/// Number of roots `y` with `v(y) >= k0` of a separable polynomial
/// (coefficients constant first, all in one field).
pub fn count_roots_from(poly: &[LocalElement], k0: u32) -> Result<usize, PadicError> {
    let field = poly[0].field().clone();
    let res = field.residue_field();
    let cap = field.precision();
    let mut stack = vec![(poly.to_vec(), k0)];
    let mut count = 0;
    while let Some((t, mut k)) = stack.pop() {
        let vals: Vec<Option<u32>> = t.iter().map(|x| x.valuation()).collect();
        let residual = loop {
            if k >= cap {
                return Err(PadicError::PrecisionExhausted("root refinement ran past known digits".into()));
            }
            let mut w = u32::MAX;
            let mut unknown_floor = u32::MAX;
            for (j, tj) in t.iter().enumerate() {
                match vals[j] {
                    Some(v) => w = w.min(v + k * j as u32),
                    None => unknown_floor = unknown_floor.min(tj.precision() + k * j as u32),
                }
            }
            if w == u32::MAX || unknown_floor <= w {
                return Err(PadicError::PrecisionExhausted("cannot certify residual polynomial".into()));
            }
            let top = (0..t.len()).rev().find(|&j| vals[j].map(|v| v + k * j as u32) == Some(w)).unwrap();
            if top >= 2 {
                if let Some(next) = next_level(&vals, top, k) {
                    if next > k {
                        k = next;
                        continue;
                    }
                }
            }
            let mut r = vec![0u64; top + 1];
            for (j, slot) in r.iter_mut().enumerate() {
                if vals[j].map(|v| v + k * j as u32) == Some(w) {
                    *slot = t[j].lead().unwrap().1;
                }
            }
            break r;
        };
        match residual.len() - 1 {
            0 => {}
            1 => count += 1,
            _ => {
                for c in res.roots(&residual) {
                    let child = if c == 0 { t.clone() } else { shift(&t, &field.lift(c).mul_pi(k)) };
                    stack.push((child, k + 1));
                }
            }
        }
    }
    Ok(count)
}

/// Number of roots in the valuation ring.
pub fn count_integral_roots(poly: &[LocalElement]) -> Result<usize, PadicError> {
    count_roots_from(poly, 0)
}

/// `p(x) / (x - a)` for a root `a`, constant first.
pub(crate) fn deflate(p: &[LocalElement], a: &LocalElement) -> Vec<LocalElement> {
    let n = p.len() - 1;
    let mut q = vec![a.field().zero(); n];
    let mut acc = p[n].clone();
    for j in (0..n).rev() {
        q[j] = acc.clone();
        acc = p[j].add(&a.mul(&acc));
    }
    q
}
