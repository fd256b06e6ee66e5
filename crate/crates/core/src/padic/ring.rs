//! Raw arithmetic on truncated integer rings.
//!
//! The bottom level is `Z_2[x]/(m(x))` with coefficients reduced modulo
//! `2^128`, where `m` lifts the residue field's modulus with 0/1 digits.
//! Every further level adjoins a root of an Eisenstein polynomial over the
//! level below. Raw values are flat coefficient vectors; precision tracking
//! happens one layer up.

use std::sync::Arc;

use crate::residue::{Fq, ResidueField};

pub(crate) type Raw = Vec<u128>;

#[derive(Debug)]
pub(crate) struct Ring {
    /// Number of `u128` words per element.
    pub dim: usize,
    /// Absolute ramification index.
    pub e: u32,
    pub res: Arc<ResidueField>,
    pub kind: Kind,
}

#[derive(Debug)]
pub(crate) enum Kind {
    /// `x^f = -sum low[i] x^i`.
    Unramified { low: Vec<u128> },
    Eisenstein(Eis),
}

#[derive(Debug)]
pub(crate) struct Eis {
    pub base: Arc<Ring>,
    pub n: usize,
    /// `c_0..c_{n-1}` with `pi^n + sum c_i pi^i = 0`.
    pub poly: Vec<Raw>,
    /// `pi_base / pi`.
    pub pib_over_pi: Raw,
    /// Residue of `pi_base / pi^n`.
    pub ratio: Fq,
}

impl Ring {
    pub fn unramified(res: Arc<ResidueField>) -> Ring {
        let f = res.f() as usize;
        let low = (0..f).map(|i| ((res.modulus() >> i) & 1) as u128).collect();
        Ring { dim: f, e: 1, res, kind: Kind::Unramified { low } }
    }

    /// Adjoins a root of `X^n + sum c_i X^i`. The caller guarantees the
    /// Eisenstein conditions.
    pub fn eisenstein(base: Arc<Ring>, poly: Vec<Raw>) -> Ring {
        let n = poly.len();
        assert!(n >= 2, "Eisenstein step of degree {n}");
        let bd = base.dim;
        // c_0 = pi_base * w
        let w = base.div_pi(&poly[0]);
        let w_inv = base.inv_unit(&w, 128 * base.e);
        let neg_w_inv = base.neg(&w_inv);
        let mut pib_over_pi = vec![0u128; n * bd];
        pib_over_pi[(n - 1) * bd..].copy_from_slice(&neg_w_inv);
        for i in 1..n {
            let t = base.mul(&neg_w_inv, &poly[i]);
            pib_over_pi[(i - 1) * bd..i * bd].copy_from_slice(&t);
        }
        let ratio = base.res.inv(base.residue(&w));
        Ring {
            dim: n * bd,
            e: base.e * n as u32,
            res: base.res.clone(),
            kind: Kind::Eisenstein(Eis { base, n, poly, pib_over_pi, ratio }),
        }
    }

    pub fn zero(&self) -> Raw {
        vec![0; self.dim]
    }

    pub fn from_int(&self, x: i128) -> Raw {
        let mut r = self.zero();
        r[0] = x as u128;
        r
    }

    /// Lift of a residue using 0/1 digits in the polynomial basis.
    pub fn lift(&self, r: Fq) -> Raw {
        let mut out = self.zero();
        let f = self.res.f() as usize;
        for (i, w) in out.iter_mut().take(f).enumerate() {
            *w = ((r >> i) & 1) as u128;
        }
        out
    }

    pub fn uniformizer(&self) -> Raw {
        match &self.kind {
            Kind::Unramified { .. } => self.from_int(2),
            Kind::Eisenstein(eis) => {
                let mut r = self.zero();
                r[eis.base.dim] = 1;
                r
            }
        }
    }

    pub fn add(&self, a: &[u128], b: &[u128]) -> Raw {
        a.iter().zip(b).map(|(x, y)| x.wrapping_add(*y)).collect()
    }

    pub fn sub(&self, a: &[u128], b: &[u128]) -> Raw {
        a.iter().zip(b).map(|(x, y)| x.wrapping_sub(*y)).collect()
    }

    pub fn neg(&self, a: &[u128]) -> Raw {
        a.iter().map(|x| x.wrapping_neg()).collect()
    }

    pub fn add_assign(&self, a: &mut [u128], b: &[u128]) {
        for (x, y) in a.iter_mut().zip(b) {
            *x = x.wrapping_add(*y);
        }
    }

    pub fn sub_assign(&self, a: &mut [u128], b: &[u128]) {
        for (x, y) in a.iter_mut().zip(b) {
            *x = x.wrapping_sub(*y);
        }
    }

    pub fn mul(&self, a: &[u128], b: &[u128]) -> Raw {
        match &self.kind {
            Kind::Unramified { low } => {
                let f = low.len();
                if f == 1 {
                    return vec![a[0].wrapping_mul(b[0])];
                }
                let mut prod = vec![0u128; 2 * f - 1];
                for i in 0..f {
                    if a[i] == 0 {
                        continue;
                    }
                    for j in 0..f {
                        prod[i + j] = prod[i + j].wrapping_add(a[i].wrapping_mul(b[j]));
                    }
                }
                for k in (f..2 * f - 1).rev() {
                    let t = prod[k];
                    if t == 0 {
                        continue;
                    }
                    for (i, &l) in low.iter().enumerate() {
                        if l != 0 {
                            prod[k - f + i] = prod[k - f + i].wrapping_sub(t.wrapping_mul(l));
                        }
                    }
                }
                prod.truncate(f);
                prod
            }
            Kind::Eisenstein(eis) => {
                let (n, bd, base) = (eis.n, eis.base.dim, &eis.base);
                let mut prod: Vec<Raw> = vec![base.zero(); 2 * n - 1];
                for i in 0..n {
                    let ai = &a[i * bd..(i + 1) * bd];
                    if ai.iter().all(|&x| x == 0) {
                        continue;
                    }
                    for j in 0..n {
                        let bj = &b[j * bd..(j + 1) * bd];
                        if bj.iter().all(|&x| x == 0) {
                            continue;
                        }
                        let t = base.mul(ai, bj);
                        base.add_assign(&mut prod[i + j], &t);
                    }
                }
                for k in (n..2 * n - 1).rev() {
                    if prod[k].iter().all(|&x| x == 0) {
                        continue;
                    }
                    let t = std::mem::take(&mut prod[k]);
                    for i in 0..n {
                        let s = base.mul(&t, &eis.poly[i]);
                        base.sub_assign(&mut prod[k - n + i], &s);
                    }
                }
                let mut out = Vec::with_capacity(self.dim);
                for c in prod.into_iter().take(n) {
                    out.extend_from_slice(&c);
                }
                out
            }
        }
    }

    /// Multiplies by an element of the level directly below.
    pub fn scale(&self, a: &[u128], b: &[u128]) -> Raw {
        match &self.kind {
            Kind::Unramified { .. } => self.mul(a, b),
            Kind::Eisenstein(eis) => {
                let bd = eis.base.dim;
                let mut out = Vec::with_capacity(self.dim);
                for i in 0..eis.n {
                    out.extend_from_slice(&eis.base.mul(&a[i * bd..(i + 1) * bd], b));
                }
                out
            }
        }
    }

    /// Embeds an element of the level directly below.
    pub fn embed(&self, b: &[u128]) -> Raw {
        let mut out = self.zero();
        out[..b.len()].copy_from_slice(b);
        out
    }

    /// Valuation, or `cap` if it is at least `cap`.
    pub fn val(&self, a: &[u128], cap: u32) -> u32 {
        match &self.kind {
            Kind::Unramified { .. } => a.iter().map(|w| w.trailing_zeros()).min().unwrap_or(128).min(cap),
            Kind::Eisenstein(eis) => {
                let (n, bd) = (eis.n as u32, eis.base.dim);
                let mut best = cap;
                for i in 0..eis.n {
                    let i32_ = i as u32;
                    if i32_ >= best {
                        break;
                    }
                    let cap_b = (best - i32_).div_ceil(n);
                    let vb = eis.base.val(&a[i * bd..(i + 1) * bd], cap_b);
                    best = best.min(n * vb + i32_);
                }
                best
            }
        }
    }

    pub fn residue(&self, a: &[u128]) -> Fq {
        match &self.kind {
            Kind::Unramified { .. } => a.iter().enumerate().fold(0, |acc, (i, w)| acc | (((w & 1) as u64) << i)),
            Kind::Eisenstein(eis) => eis.base.residue(&a[..eis.base.dim]),
        }
    }

    /// Residue of `a / pi^v` where `v` is the exact valuation of `a`.
    pub fn lead(&self, a: &[u128], v: u32) -> Fq {
        match &self.kind {
            Kind::Unramified { .. } => {
                a.iter().enumerate().fold(0, |acc, (i, w)| acc | ((((w >> v) & 1) as u64) << i))
            }
            Kind::Eisenstein(eis) => {
                let n = eis.n as u32;
                let (i, vb) = ((v % n) as usize, v / n);
                let bd = eis.base.dim;
                let l = eis.base.lead(&a[i * bd..(i + 1) * bd], vb);
                self.res.mul(l, self.res.pow(eis.ratio, vb as u64))
            }
        }
    }

    /// Exact division by the uniformizer of an element of positive valuation.
    pub fn div_pi(&self, a: &[u128]) -> Raw {
        match &self.kind {
            Kind::Unramified { .. } => a.iter().map(|&w| ((w as i128) >> 1) as u128).collect(),
            Kind::Eisenstein(eis) => {
                let bd = eis.base.dim;
                let c0 = eis.base.div_pi(&a[..bd]);
                let mut out = self.scale(&eis.pib_over_pi, &c0);
                for i in 1..eis.n {
                    let dst = &mut out[(i - 1) * bd..i * bd];
                    eis.base.add_assign(dst, &a[i * bd..(i + 1) * bd]);
                }
                out
            }
        }
    }

    pub fn mul_pi(&self, a: &[u128]) -> Raw {
        match &self.kind {
            Kind::Unramified { .. } => a.iter().map(|w| w << 1).collect(),
            Kind::Eisenstein(eis) => {
                let (n, bd) = (eis.n, eis.base.dim);
                let top = &a[(n - 1) * bd..];
                let mut out = self.zero();
                out[bd..].copy_from_slice(&a[..(n - 1) * bd]);
                for i in 0..n {
                    let s = eis.base.mul(top, &eis.poly[i]);
                    eis.base.sub_assign(&mut out[i * bd..(i + 1) * bd], &s);
                }
                out
            }
        }
    }

    pub fn mul_pi_pow(&self, a: &[u128], k: u32) -> Raw {
        let mut out = a.to_vec();
        for _ in 0..k {
            out = self.mul_pi(&out);
        }
        out
    }

    /// Inverse of a unit, correct modulo `pi^digits`.
    pub fn inv_unit(&self, a: &[u128], digits: u32) -> Raw {
        let r = self.residue(a);
        assert!(r != 0, "inverse of a non-unit");
        let mut y = self.lift(self.res.inv(r));
        let two = self.from_int(2);
        let mut k = 1;
        while k < digits {
            let ay = self.mul(a, &y);
            y = self.mul(&y, &self.sub(&two, &ay));
            k *= 2;
        }
        y
    }

    /// Evaluates `sum c_i x^i`.
    pub fn eis(&self) -> Option<&Eis> {
        match &self.kind {
            Kind::Eisenstein(e) => Some(e),
            Kind::Unramified { .. } => None,
        }
    }
}
