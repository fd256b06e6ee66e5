//! Arithmetic in `F_{2^f}` and the residue-level counts.
//!
//! Elements are bit vectors: bit `i` is the coefficient of `x^i` in the
//! polynomial basis modulo the field's defining polynomial.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResidueError {
    #[error("leading coefficient is zero")]
    DegenerateLeadingCoefficient,
}

/// Element of a [`ResidueField`].
pub type Fq = u64;

#[derive(Debug, Clone)]
pub struct ResidueField {
    f: u32,
    /// Defining polynomial including the leading `x^f` bit.
    modulus: u64,
    /// Discrete log and exponential tables for small fields.
    logs: Option<(Vec<u32>, Vec<Fq>)>,
}

impl PartialEq for ResidueField {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f && self.modulus == other.modulus
    }
}

impl Eq for ResidueField {}

fn clmul_mod(a: u64, b: u64, modulus: u64, f: u32) -> u64 {
    let mut acc: u128 = 0;
    let mut b = b;
    let mut i = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= (a as u128) << i;
        }
        b >>= 1;
        i += 1;
    }
    for k in (f as usize..128).rev() {
        if acc >> k & 1 == 1 {
            acc ^= (modulus as u128) << (k - f as usize);
        }
    }
    acc as u64
}

fn poly_mod(mut a: u64, m: u64) -> u64 {
    let dm = 63 - m.leading_zeros();
    while a != 0 && 63 - a.leading_zeros() >= dm {
        a ^= m << (63 - a.leading_zeros() - dm);
    }
    a
}

fn is_irreducible(poly: u64, f: u32) -> bool {
    // trial division by every polynomial of degree 1..=f/2
    (1..=f / 2).all(|d| (1u64 << d..1u64 << (d + 1)).all(|t| poly_mod(poly, t) != 0))
}

impl ResidueField {
    /// `F_{2^f}` defined by the lexicographically least irreducible
    /// polynomial of degree `f`.
    pub fn new(f: u32) -> ResidueField {
        assert!((1..=32).contains(&f), "residue degree {f} out of range");
        let modulus = (1u64 << f..1u64 << (f + 1))
            .find(|&m| is_irreducible(m, f))
            .expect("an irreducible polynomial exists in every degree");
        let mut k = ResidueField { f, modulus, logs: None };
        if f <= 12 {
            k.logs = Some(k.tables());
        }
        k
    }

    fn tables(&self) -> (Vec<u32>, Vec<Fq>) {
        let q = self.q();
        let slow = |a, b| clmul_mod(a, b, self.modulus, self.f);
        let order = |g: Fq| {
            let mut x = g;
            let mut n = 1;
            while x != 1 {
                x = slow(x, g);
                n += 1;
            }
            n
        };
        let g = if q == 2 { 1 } else { (2..q).find(|&g| order(g) == q - 1).expect("cyclic unit group") };
        let mut exp = vec![0; q as usize - 1];
        let mut log = vec![0; q as usize];
        let mut x = 1;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = slow(x, g);
        }
        (log, exp)
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u64 {
        1u64 << self.f
    }

    /// Bits of the defining polynomial, leading term included.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        0..self.q()
    }

    pub fn units(&self) -> impl Iterator<Item = Fq> {
        1..self.q()
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        a ^ b
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if self.f == 1 {
            a & b
        } else if let Some((log, exp)) = &self.logs {
            if a == 0 || b == 0 {
                return 0;
            }
            let n = exp.len();
            exp[(log[a as usize] as usize + log[b as usize] as usize) % n]
        } else {
            clmul_mod(a, b, self.modulus, self.f)
        }
    }

    pub fn pow(&self, a: Fq, mut k: u64) -> Fq {
        if let Some((log, exp)) = &self.logs {
            if a == 0 {
                return if k == 0 { 1 } else { 0 };
            }
            let n = exp.len() as u64;
            return exp[((log[a as usize] as u64 * (k % n)) % n) as usize];
        }
        let mut base = a;
        let mut acc = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: Fq) -> Fq {
        assert!(a != 0, "inverse of zero");
        self.pow(a, self.q() - 2)
    }

    pub fn div(&self, a: Fq, b: Fq) -> Fq {
        self.mul(a, self.inv(b))
    }

    /// The unique square root.
    pub fn sqrt(&self, a: Fq) -> Fq {
        self.pow(a, self.q() / 2)
    }

    /// Absolute trace to `F_2`.
    pub fn trace(&self, x: Fq) -> u8 {
        let mut t = x;
        let mut acc = x;
        for _ in 1..self.f {
            t = self.mul(t, t);
            acc ^= t;
        }
        debug_assert!(acc <= 1);
        acc as u8
    }

    /// Some element of trace one.
    pub fn trace_one(&self) -> Fq {
        self.units().find(|&x| self.trace(x) == 1).expect("trace is surjective")
    }

    /// Roots of `sum c_i y^i` in the field, by exhaustion.
    pub fn roots(&self, coeffs: &[Fq]) -> Vec<Fq> {
        self.elements()
            .filter(|&y| coeffs.iter().rev().fold(0, |acc, &c| self.mul(acc, y) ^ c) == 0)
            .collect()
    }
}

/// Number of roots of `alpha y^2 + beta y + gamma` in the field.
pub fn quad_root_count(k: &ResidueField, alpha: Fq, beta: Fq, gamma: Fq) -> Result<u8, ResidueError> {
    if alpha == 0 {
        return Err(ResidueError::DegenerateLeadingCoefficient);
    }
    if beta == 0 {
        return Ok(1);
    }
    let t = k.div(k.mul(alpha, gamma), k.mul(beta, beta));
    Ok(if k.trace(t) == 0 { 2 } else { 0 })
}

/// Size of the image of `c -> lambda c + mu c^3` on residues, given whether
/// `lambda` has the same valuation as `mu`.
pub fn cubic_image_size(lambda_unit: bool, f: u32) -> u64 {
    let q = 1i64 << f;
    let sign = if f.is_multiple_of(2) { 1 } else { -1 };
    let size = if lambda_unit { (2 * q + sign) / 3 } else { (q + 1 + sign) / (2 + sign) };
    size as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn moduli() {
        assert_eq!(ResidueField::new(1).modulus(), 0b10);
        assert_eq!(ResidueField::new(2).modulus(), 0b111);
        assert_eq!(ResidueField::new(3).modulus(), 0b1011);
        assert_eq!(ResidueField::new(4).modulus(), 0b10011);
    }

    #[test]
    fn field_axioms_small() {
        for f in 1..=5 {
            let k = ResidueField::new(f);
            for a in k.units() {
                assert_eq!(k.mul(a, k.inv(a)), 1);
                assert_eq!(k.mul(k.sqrt(a), k.sqrt(a)), a);
            }
            let frob: HashSet<_> = k.elements().map(|x| k.mul(x, x)).collect();
            assert_eq!(frob.len() as u64, k.q());
        }
    }

    #[test]
    fn trace_examples() {
        assert_eq!(ResidueField::new(1).trace(1), 1);
        let f4 = ResidueField::new(2);
        assert_eq!(f4.trace(0b10), 1);
        assert_eq!(f4.trace(1), 0);
    }

    #[test]
    fn trace_linear_and_frobenius_invariant() {
        for f in 1..=6 {
            let k = ResidueField::new(f);
            let mut ones = 0;
            for a in k.elements() {
                assert_eq!(k.trace(k.mul(a, a)), k.trace(a));
                ones += k.trace(a) as u64;
                for b in k.elements().step_by(3) {
                    assert_eq!(k.trace(a ^ b), k.trace(a) ^ k.trace(b));
                }
            }
            assert_eq!(ones, k.q() / 2);
        }
    }

    #[test]
    fn quad_examples() {
        let k = ResidueField::new(1);
        assert_eq!(quad_root_count(&k, 1, 0, 1).unwrap(), 1);
        assert_eq!(quad_root_count(&k, 1, 1, 1).unwrap(), 0);
        assert_eq!(quad_root_count(&k, 1, 1, 0).unwrap(), 2);
        assert_eq!(quad_root_count(&k, 0, 1, 0), Err(ResidueError::DegenerateLeadingCoefficient));
    }

    #[test]
    fn cubic_examples() {
        assert_eq!(cubic_image_size(true, 1), 1);
        assert_eq!(cubic_image_size(false, 1), 2);
        assert_eq!(cubic_image_size(true, 2), 3);
    }
}
