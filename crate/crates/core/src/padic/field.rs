//! Local fields and their truncated elements.

use std::fmt;
use std::sync::Arc;

use super::ring::{Raw, Ring};
use super::PadicError;
use crate::residue::{Fq, ResidueField};

/// A finite extension of `Q_2` given as a tower of Eisenstein steps over an
/// unramified field. Cheap to clone.
#[derive(Clone)]
pub struct LocalField {
    inner: Arc<Inner>,
}

struct Inner {
    ring: Arc<Ring>,
    precision: u32,
    base: Option<LocalField>,
    label: String,
}

impl fmt::Debug for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalField({}, e={}, f={}, N={})", self.inner.label, self.e(), self.f(), self.precision())
    }
}

impl LocalField {
    fn from_ring(ring: Arc<Ring>, base: Option<LocalField>, label: String, precision: Option<u32>) -> LocalField {
        let precision = precision.unwrap_or(16 * ring.e + 16);
        LocalField { inner: Arc::new(Inner { ring, precision, base, label }) }
    }

    /// The unramified extension of `Q_2` of degree `f`.
    pub fn unramified(f: u32) -> LocalField {
        let ring = Ring::unramified(Arc::new(ResidueField::new(f)));
        let label = if f == 1 { "Q2".to_string() } else { format!("U{f}") };
        LocalField::from_ring(Arc::new(ring), None, label, None)
    }

    pub fn q2() -> LocalField {
        LocalField::unramified(1)
    }

    /// Adjoins a root of the Eisenstein polynomial `X^n + sum coeffs[i] X^i`
    /// (constant term first) over `base`.
    pub fn eisenstein_over(base: &LocalField, coeffs: &[LocalElement]) -> Result<LocalField, PadicError> {
        let n = coeffs.len();
        if n < 2 {
            return Err(PadicError::NotEisenstein(format!("degree {n} step")));
        }
        for (i, c) in coeffs.iter().enumerate() {
            base.check(c);
            match c.valuation() {
                Some(1) => {}
                Some(v) if i > 0 && v >= 1 => {}
                None if i > 0 => {}
                v => {
                    return Err(PadicError::NotEisenstein(format!("coefficient {i} has valuation {v:?}")));
                }
            }
        }
        let ring = Ring::eisenstein(base.inner.ring.clone(), coeffs.iter().map(|c| c.raw.clone()).collect());
        let precision = n as u32 * base.precision();
        let label = format!("{}[pi{}]", base.inner.label, n);
        Ok(LocalField::from_ring(Arc::new(ring), Some(base.clone()), label, Some(precision)))
    }

    /// Same field with a different working precision. Elements of the two
    /// handles cannot be mixed.
    pub fn with_precision(&self, precision: u32) -> Result<LocalField, PadicError> {
        if precision > self.max_precision() || precision == 0 {
            return Err(PadicError::PrecisionExhausted(format!(
                "precision {precision} outside 1..={}",
                self.max_precision()
            )));
        }
        let base = match &self.inner.base {
            Some(b) => Some(b.with_precision(precision.div_ceil(self.relative_degree()).max(1))?),
            None => None,
        };
        Ok(LocalField {
            inner: Arc::new(Inner {
                ring: self.inner.ring.clone(),
                precision,
                base,
                label: self.inner.label.clone(),
            }),
        })
    }

    /// Doubles the precision, failing past the representable limit.
    pub fn doubled(&self) -> Result<LocalField, PadicError> {
        self.with_precision(2 * self.precision())
    }

    pub(crate) fn ring(&self) -> &Arc<Ring> {
        &self.inner.ring
    }

    pub fn same(&self, other: &LocalField) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    fn check(&self, x: &LocalElement) {
        assert!(self.same(&x.field), "element of {:?} used in {:?}", x.field, self);
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    /// Absolute ramification index.
    pub fn e(&self) -> u32 {
        self.inner.ring.e
    }

    pub fn f(&self) -> u32 {
        self.inner.ring.res.f()
    }

    pub fn q(&self) -> u64 {
        self.inner.ring.res.q()
    }

    pub fn precision(&self) -> u32 {
        self.inner.precision
    }

    /// Largest precision the word-level representation supports.
    pub fn max_precision(&self) -> u32 {
        64 * self.e()
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.inner.ring.res
    }

    /// The field this one was built over, if any.
    pub fn base(&self) -> Option<&LocalField> {
        self.inner.base.as_ref()
    }

    /// Degree over [`base`](Self::base), or 1.
    pub fn relative_degree(&self) -> u32 {
        self.inner.ring.eis().map_or(1, |e| e.n as u32)
    }

    pub(crate) fn wrap(&self, raw: Raw, prec: u32) -> LocalElement {
        LocalElement { field: self.clone(), raw, prec: prec.min(self.precision()) }
    }

    pub fn int(&self, x: i64) -> LocalElement {
        self.wrap(self.inner.ring.from_int(x as i128), self.precision())
    }

    pub fn zero(&self) -> LocalElement {
        self.int(0)
    }

    pub fn one(&self) -> LocalElement {
        self.int(1)
    }

    pub fn uniformizer(&self) -> LocalElement {
        self.wrap(self.inner.ring.uniformizer(), self.precision())
    }

    /// The 0/1-digit lift of a residue.
    pub fn lift(&self, r: Fq) -> LocalElement {
        self.wrap(self.inner.ring.lift(r), self.precision())
    }

    /// Element of the power basis `1, z, .., z^(f-1)` of the unramified part,
    /// where `z` lifts the residue field's generator.
    pub fn from_unramified_coords(&self, coords: &[i64]) -> LocalElement {
        let f = self.f() as usize;
        let mut raw = self.inner.ring.zero();
        for (i, &c) in coords.iter().enumerate().take(f) {
            raw[i] = c as i128 as u128;
        }
        self.wrap(raw, self.precision())
    }

    /// Image of an element of the base field.
    pub fn embed(&self, x: &LocalElement) -> LocalElement {
        let base = self.base().expect("field has no base");
        base.check(x);
        let n = self.relative_degree();
        let prec = x.prec.saturating_mul(n);
        self.wrap(self.inner.ring.embed(&x.raw), prec)
    }

    /// `sum coeffs[i] pi^i` with coefficients in the base field.
    pub fn from_coeffs(&self, coeffs: &[LocalElement]) -> LocalElement {
        let base = self.base().expect("field has no base");
        let n = self.relative_degree() as usize;
        assert_eq!(coeffs.len(), n);
        let mut raw = Vec::with_capacity(self.inner.ring.dim);
        let mut prec = self.precision();
        for (i, c) in coeffs.iter().enumerate() {
            base.check(c);
            raw.extend_from_slice(&c.raw);
            prec = prec.min(c.prec.saturating_mul(n as u32) + i as u32);
        }
        self.wrap(raw, prec)
    }
}

/// A truncated element: exact modulo `pi^prec`.
#[derive(Clone)]
pub struct LocalElement {
    field: LocalField,
    raw: Raw,
    prec: u32,
}

impl fmt::Debug for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: Vec<String> = self.digits().iter().take(16).map(|d| d.to_string()).collect();
        write!(f, "[{} ..; prec {}]", digits.join(" "), self.prec)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
    Inv,
}

/// Dispatches one of the four basic operations; `b` is ignored by the
/// unary ones.
pub fn arith(op: ArithOp, a: &LocalElement, b: &LocalElement) -> Result<LocalElement, PadicError> {
    match op {
        ArithOp::Add => Ok(a.add(b)),
        ArithOp::Mul => Ok(a.mul(b)),
        ArithOp::Neg => Ok(a.neg()),
        ArithOp::Inv => a.inv(),
    }
}

impl LocalElement {
    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    fn ring(&self) -> &Ring {
        &self.field.inner.ring
    }

    fn same_parent(&self, other: &LocalElement) {
        self.field.check(other);
    }

    /// Valuation, or `None` when the element is zero to known precision.
    pub fn valuation(&self) -> Option<u32> {
        let v = self.ring().val(&self.raw, self.prec);
        (v < self.prec).then_some(v)
    }

    /// Valuation capped at the known precision.
    pub fn valuation_capped(&self) -> u32 {
        self.ring().val(&self.raw, self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Residue class; requires positive precision.
    pub fn residue(&self) -> Fq {
        if self.prec == 0 {
            0
        } else {
            self.ring().residue(&self.raw)
        }
    }

    /// `(v, residue of x / pi^v)`, or `None` for zero.
    pub fn lead(&self) -> Option<(u32, Fq)> {
        let v = self.valuation()?;
        Some((v, self.ring().lead(&self.raw, v)))
    }

    pub fn add(&self, other: &LocalElement) -> LocalElement {
        self.same_parent(other);
        self.field.wrap(self.ring().add(&self.raw, &other.raw), self.prec.min(other.prec))
    }

    pub fn sub(&self, other: &LocalElement) -> LocalElement {
        self.same_parent(other);
        self.field.wrap(self.ring().sub(&self.raw, &other.raw), self.prec.min(other.prec))
    }

    pub fn neg(&self) -> LocalElement {
        self.field.wrap(self.ring().neg(&self.raw), self.prec)
    }

    pub fn mul(&self, other: &LocalElement) -> LocalElement {
        self.same_parent(other);
        let va = self.valuation_capped();
        let vb = other.valuation_capped();
        let prec = (self.prec + vb).min(other.prec + va);
        self.field.wrap(self.ring().mul(&self.raw, &other.raw), prec)
    }

    pub fn square(&self) -> LocalElement {
        self.mul(self)
    }

    pub fn pow(&self, k: u64) -> LocalElement {
        let mut acc = self.field.one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            k >>= 1;
        }
        acc
    }

    pub fn mul_int(&self, k: i64) -> LocalElement {
        self.mul(&self.field.int(k))
    }

    /// Inverse of a unit.
    pub fn inv(&self) -> Result<LocalElement, PadicError> {
        match self.valuation() {
            None => Err(PadicError::PrecisionExhausted("inverse of an element that is zero to known precision".into())),
            Some(0) => Ok(self.field.wrap(self.ring().inv_unit(&self.raw, self.prec), self.prec)),
            Some(v) => Err(PadicError::DivisionByNonUnit(v)),
        }
    }

    pub fn div(&self, other: &LocalElement) -> Result<LocalElement, PadicError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Division by `pi^k`; needs `v >= k`.
    pub fn div_pi(&self, k: u32) -> Result<LocalElement, PadicError> {
        if self.valuation_capped() < k {
            return Err(PadicError::DivisionByNonUnit(self.valuation_capped()));
        }
        if self.prec < k {
            return Err(PadicError::PrecisionExhausted("division by pi beyond known digits".into()));
        }
        let mut raw = self.raw.clone();
        for _ in 0..k {
            raw = self.ring().div_pi(&raw);
        }
        Ok(self.field.wrap(raw, self.prec - k))
    }

    pub fn mul_pi(&self, k: u32) -> LocalElement {
        self.field.wrap(self.ring().mul_pi_pow(&self.raw, k), self.prec.saturating_add(k))
    }

    /// `(pi^-v x, v)` for nonzero `x`.
    pub fn split_unit(&self) -> Result<(LocalElement, u32), PadicError> {
        let v = self
            .valuation()
            .ok_or_else(|| PadicError::PrecisionExhausted("valuation of an element that is zero to known precision".into()))?;
        Ok((self.div_pi(v)?, v))
    }

    /// True when `self == other` modulo `pi^k`; `None` when `k` exceeds the
    /// known precision of the difference.
    pub fn congruent(&self, other: &LocalElement, k: u32) -> Option<bool> {
        let d = self.sub(other);
        match d.valuation() {
            Some(v) => Some(v >= k),
            None => (k <= d.prec).then_some(true),
        }
    }

    /// Digits in base `pi` with 0/1 lifts as the digit set, up to the known
    /// precision.
    pub fn digits(&self) -> Vec<Fq> {
        let ring = self.ring();
        let mut x = self.raw.clone();
        let mut out = Vec::with_capacity(self.prec as usize);
        for _ in 0..self.prec {
            let r = ring.residue(&x);
            out.push(r);
            let t = ring.sub(&x, &ring.lift(r));
            x = ring.div_pi(&t);
        }
        out
    }

    /// Coordinates over the base field in the basis `1, pi, .., pi^(n-1)`.
    pub fn coefficients(&self) -> Vec<LocalElement> {
        let base = self.field.base().expect("field has no base");
        let n = self.field.relative_degree() as usize;
        let bd = base.ring().dim;
        (0..n)
            .map(|i| {
                let prec = (self.prec.saturating_sub(i as u32)).div_ceil(n as u32);
                base.wrap(self.raw[i * bd..(i + 1) * bd].to_vec(), prec)
            })
            .collect()
    }

    /// Reads the stored digits as exact in `target`, a re-precisioned handle
    /// of the same field.
    pub fn promote(&self, target: &LocalField) -> LocalElement {
        assert!(Arc::ptr_eq(self.field.ring(), target.ring()), "promote across different fields");
        target.wrap(self.raw.clone(), target.precision())
    }

    /// Same value with at most `prec` known digits.
    pub fn truncate(&self, prec: u32) -> LocalElement {
        self.field.wrap(self.raw.clone(), self.prec.min(prec))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&LocalElement> for &LocalElement {
            type Output = LocalElement;
            fn $m(self, rhs: &LocalElement) -> LocalElement {
                self.$f(rhs)
            }
        }
        impl std::ops::$tr<LocalElement> for LocalElement {
            type Output = LocalElement;
            fn $m(self, rhs: LocalElement) -> LocalElement {
                (&self).$f(&rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl std::ops::Neg for &LocalElement {
    type Output = LocalElement;
    fn neg(self) -> LocalElement {
        LocalElement::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let k = LocalField::q2();
        let two = k.one() + k.one();
        assert_eq!(two.digits()[..3], [0, 1, 0]);
        let three = k.int(3);
        let p = three.inv().unwrap().mul(&three);
        assert!(p.congruent(&k.one(), k.precision()).unwrap());
        assert_eq!(p.precision(), k.precision());
        assert_eq!((&two + &two).valuation(), Some(2));
        assert!(matches!(two.inv(), Err(PadicError::DivisionByNonUnit(1))));
        assert!(arith(ArithOp::Inv, &k.zero(), &k.zero()).is_err());
    }

    #[test]
    fn precision_rules() {
        let k = LocalField::q2();
        let a = k.int(5).truncate(10);
        let b = k.int(12);
        assert_eq!(a.add(&b).precision(), 10);
        assert_eq!(a.mul(&b).precision(), 12);
        assert_eq!(b.div_pi(2).unwrap().precision(), k.precision() - 2);
    }

    #[test]
    fn valuation_is_first_nonzero_digit() {
        let q2 = LocalField::q2();
        let k = LocalField::eisenstein_over(&q2, &[q2.int(-2), q2.zero()]).unwrap();
        for x in [6i64, 12, 40, 7, -8] {
            let y = k.int(x).mul(&k.uniformizer());
            let v = y.valuation().unwrap();
            let d = y.digits();
            assert_eq!(d.iter().position(|&c| c != 0), Some(v as usize));
        }
    }

    #[test]
    fn coefficients_roundtrip() {
        let q2 = LocalField::q2();
        let k = LocalField::eisenstein_over(&q2, &[q2.int(-2), q2.zero()]).unwrap();
        let x = k.from_coeffs(&[q2.int(3), q2.int(5)]);
        let c = x.coefficients();
        assert!(c[0].congruent(&q2.int(3), 20).unwrap());
        assert!(c[1].congruent(&q2.int(5), 20).unwrap());
        assert!(k.embed(&q2.int(7)).congruent(&k.int(7), 40).unwrap());
    }
}
