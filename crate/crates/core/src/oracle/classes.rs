//! Residue classes of Eisenstein quartics and exact measures of
//! class-constant predicates.

use num_bigint::BigInt;
use rayon::prelude::*;

use super::OracleError;
use crate::exact::{qpow, Q};
use crate::padic::{EisensteinQuartic, LocalElement, LocalField, PadicError};

/// Polynomials whose coefficient `a_i` is fixed modulo `pi^c[i]`. The
/// representative has zero digits from `c[i]` on. Measure `q^-(sum c)`.
#[derive(Clone, Debug)]
pub struct CoeffClass {
    pub c: [u32; 4],
    reps: [LocalElement; 4],
}

impl CoeffClass {
    /// The `q - 1` classes with `c = (2, 1, 1, 1)`; together they cover all
    /// Eisenstein quartics.
    pub fn roots(k: &LocalField) -> Vec<CoeffClass> {
        k.residue_field()
            .units()
            .map(|r| CoeffClass { c: [2, 1, 1, 1], reps: [k.lift(r).mul_pi(1), k.zero(), k.zero(), k.zero()] })
            .collect()
    }

    /// All classes with every coefficient known to `c >= 2` digits.
    pub fn uniform(k: &LocalField, c: u32) -> Vec<CoeffClass> {
        assert!(c >= 2);
        let mut out = CoeffClass::roots(k);
        for i in 0..4 {
            while out[0].c[i] < c {
                out = out.iter().flat_map(|x| x.refine(i)).collect();
            }
        }
        out
    }

    /// The `q` subclasses fixing one more digit of `a_i`.
    pub fn refine(&self, i: usize) -> Vec<CoeffClass> {
        let k = self.reps[0].field();
        k.residue_field()
            .elements()
            .map(|r| {
                let mut next = self.clone();
                next.reps[i] = self.reps[i].add(&k.lift(r).mul_pi(self.c[i]));
                next.c[i] += 1;
                next
            })
            .collect()
    }

    pub fn quartic(&self) -> EisensteinQuartic {
        EisensteinQuartic::new(self.reps.clone()).expect("class representatives are Eisenstein")
    }

    pub fn weight(&self) -> u32 {
        self.c.iter().sum()
    }

    /// `(v, exact)`: the valuation of `a_i` if fixed by the class, else the
    /// lower bound `c[i]`.
    pub fn val(&self, i: usize) -> (u32, bool) {
        match self.reps[i].valuation() {
            Some(v) if v < self.c[i] => (v, true),
            _ => (self.c[i], false),
        }
    }

    pub fn rep(&self, i: usize) -> &LocalElement {
        &self.reps[i]
    }
}

/// Exact measure of `{f : pred(f)}`, evaluating the predicate once per class
/// with all coefficients known to `c` digits. Every `stride`-th class is
/// refined one digit further in each coefficient and must keep its verdict.
pub fn measure_set<P>(k: &LocalField, pred: P, c: u32) -> Result<Q, OracleError>
where
    P: Fn(&EisensteinQuartic) -> Result<bool, PadicError> + Sync,
{
    let classes = CoeffClass::uniform(k, c);
    let stride = (classes.len() / 16).max(1);
    let hits: Vec<bool> = classes
        .par_iter()
        .enumerate()
        .map(|(n, cl)| -> Result<bool, OracleError> {
            let v = pred(&cl.quartic())?;
            if n % stride == 0 {
                let mut fine = vec![cl.clone()];
                for i in 0..4 {
                    fine = fine.iter().flat_map(|x| x.refine(i)).collect();
                }
                for sub in fine {
                    if pred(&sub.quartic())? != v {
                        return Err(OracleError::ClassInstability(format!("verdict changes below class {:?}", cl.c)));
                    }
                }
            }
            Ok(v)
        })
        .collect::<Result<_, _>>()?;
    let n = hits.iter().filter(|&&h| h).count();
    Ok(Q::from_integer(BigInt::from(n)) * qpow(k.q(), -4 * c as i64))
}

fn elements_mod(k: &LocalField, lo: u32, n: u32, exact: bool) -> Vec<LocalElement> {
    let res = k.residue_field();
    let mut out = vec![k.zero()];
    for j in lo..n {
        out = out
            .iter()
            .flat_map(|x| {
                res.elements()
                    .filter(move |&r| !(exact && j == lo && r == 0))
                    .map(move |r| x.add(&k.lift(r).mul_pi(j)))
            })
            .collect();
    }
    out
}

/// Measure of triples with `v(x0) = 1`, `v(x1) = a + b`, `v(x2) >= b` and
/// `x1 + u x2 x0^a + u^3 x0^(a+b) = 0 mod p^(a+b+1)` for some digit `u`, by
/// enumeration modulo `p^(a+b+1)`.
pub fn cubic_congruence_measure(k: &LocalField, a: u32, b: u32) -> Result<Q, OracleError> {
    let n = a + b + 1;
    let x0s = elements_mod(k, 1, n, true);
    let x1s = elements_mod(k, a + b, n, true);
    let x2s = elements_mod(k, b, n, false);
    let us: Vec<LocalElement> = k.residue_field().elements().map(|r| k.lift(r)).collect();
    let zero = k.zero();
    let hits: usize = x0s
        .par_iter()
        .map(|x0| {
            let p_a = x0.pow(a as u64);
            let p_ab = x0.pow((a + b) as u64);
            let mut hits = 0usize;
            for x1 in &x1s {
                for x2 in &x2s {
                    let t = x2.mul(&p_a);
                    if us.iter().any(|u| {
                        x1.add(&u.mul(&t)).add(&u.pow(3).mul(&p_ab)).congruent(&zero, n) == Some(true)
                    }) {
                        hits += 1;
                    }
                }
            }
            hits
        })
        .sum();
    Ok(Q::from_integer(BigInt::from(hits)) * qpow(k.q(), -3 * n as i64))
}
