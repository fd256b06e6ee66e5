//! Counting extensions by measuring sets of Eisenstein polynomials.
//!
//! Classes are refined one digit at a time until the discriminant exponent is
//! fixed by the class and a Krasner-type certificate shows every member
//! generates the same field as the representative. With `t_j` the Taylor
//! coefficients of `f` at its root `pi`, the other roots lie within
//! `D = max_j (m - v(t_j)) / (j - 1)` of `pi`, and perturbing the
//! coefficients by `delta_i` in `p^(c_i)` moves `f(pi + y)` by a polynomial
//! with `y^j`-coefficient of valuation at least
//! `H_j = min_{i >= j} 4 c_i + i - j` (in units of the stem field). When
//! `H_0 > m + D`, `H_1 > m`, `H_2 + D >= m` and `H_3 + 2D >= m`, the
//! perturbed polynomial has a root closer to `pi` than any conjugate.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;

use super::classes::CoeffClass;
use super::OracleError;
use crate::exact::{as_natural, int, qpow, render, Q};
use crate::padic::{EisensteinQuartic, LocalField};
use crate::params::{aut_order, GroupTag};

#[derive(Debug)]
pub(crate) enum Step {
    Discard,
    Refine(usize),
    Certified(u32),
}

/// Decides what to do with a class: drop it (exponent above `m_max`), split
/// one coefficient, or accept it with discriminant exponent `m`.
pub(crate) fn step(class: &CoeffClass, e: u32, m_max: u32) -> Step {
    let (v1, x1) = class.val(1);
    let (v2, x2) = class.val(2);
    let (v3, x3) = class.val(3);
    let terms = [(4 * v1, x1, 1), (4 * v2 + 4 * e + 1, x2, 2), (4 * v3 + 2, x3, 3), (8 * e + 3, true, 0)];
    let lower = terms.iter().map(|t| t.0).min().unwrap();
    if lower > m_max {
        return Step::Discard;
    }
    let m = terms.iter().filter(|t| t.1).map(|t| t.0).min().unwrap();
    if let Some(t) = terms.iter().filter(|t| !t.1 && t.0 < m).min_by_key(|t| t.0) {
        return Step::Refine(t.2);
    }
    if m > m_max {
        return Step::Discard;
    }
    // valuations of the representative itself; zero coefficients count as
    // far beyond every bound
    let rv = |i: usize| class.rep(i).valuation().unwrap_or(8 * e + 8);
    let vt2 = (4 * e + 2).min(4 * rv(3) + 1).min(4 * rv(2));
    let vt3 = (4 * e + 1).min(4 * rv(3));
    // six times the root distance bound
    let d6 = (6 * (m as i64 - vt2 as i64)).max(3 * (m as i64 - vt3 as i64)).max(2 * m as i64);
    let h = |j: usize| (j..4).map(|i| 4 * class.c[i] as i64 + i as i64 - j as i64).min().unwrap();
    let arg = |j: usize| (j..4).min_by_key(|&i| 4 * class.c[i] as i64 + i as i64).unwrap();
    let m = m as i64;
    if 6 * h(0) <= 6 * m + d6 {
        return Step::Refine(arg(0));
    }
    if h(1) <= m {
        return Step::Refine(arg(1));
    }
    if 6 * h(2) + d6 < 6 * m {
        return Step::Refine(arg(2));
    }
    if 6 * h(3) + 2 * d6 < 6 * m {
        return Step::Refine(3);
    }
    Step::Certified(m as u32)
}

/// A certified class: every member generates the same field, with
/// discriminant exponent `m` and closure group `group`.
#[derive(Clone, Debug)]
pub struct CertifiedClass {
    pub class: CoeffClass,
    pub m: u32,
    pub group: GroupTag,
}

#[derive(Default, Clone, Debug)]
struct Tally {
    /// `(m, G) -> weight -> number of classes`.
    weights: BTreeMap<(u32, GroupTag), BTreeMap<u32, u64>>,
    max_c: BTreeMap<(u32, GroupTag), u32>,
    classes: u64,
}

impl Tally {
    fn add(&mut self, cert: &CertifiedClass) {
        let key = (cert.m, cert.group);
        *self.weights.entry(key).or_default().entry(cert.class.weight()).or_default() += 1;
        let c = self.max_c.entry(key).or_default();
        *c = (*c).max(*cert.class.c.iter().max().unwrap());
        self.classes += 1;
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (key, w) in other.weights {
            let slot = self.weights.entry(key).or_default();
            for (k, n) in w {
                *slot.entry(k).or_default() += n;
            }
        }
        for (key, c) in other.max_c {
            let slot = self.max_c.entry(key).or_default();
            *slot = (*slot).max(c);
        }
        self.classes += other.classes;
        self
    }
}

fn certify(class: CoeffClass, m: u32) -> Result<CertifiedClass, OracleError> {
    let (m2, group) = class.quartic().classify()?;
    assert_eq!(m, m2, "class exponent disagrees with the representative");
    Ok(CertifiedClass { class, m, group })
}

fn walk(
    k: &LocalField,
    m_max: u32,
    root: CoeffClass,
    sink: &mut dyn FnMut(CertifiedClass) -> Result<(), OracleError>,
) -> Result<(), OracleError> {
    let mut stack = vec![root];
    while let Some(cl) = stack.pop() {
        match step(&cl, k.e(), m_max) {
            Step::Discard => {}
            Step::Refine(i) => stack.extend(cl.refine(i)),
            Step::Certified(m) => sink(certify(cl, m)?)?,
        }
    }
    Ok(())
}

/// Splits the root classes until there are enough independent subtrees.
fn frontier(k: &LocalField, m_max: u32, target: usize) -> Result<(Vec<CoeffClass>, Vec<CertifiedClass>), OracleError> {
    let mut open = CoeffClass::roots(k);
    let mut done = Vec::new();
    while !open.is_empty() && open.len() < target {
        let mut next = Vec::new();
        for cl in open {
            match step(&cl, k.e(), m_max) {
                Step::Discard => {}
                Step::Refine(i) => next.extend(cl.refine(i)),
                Step::Certified(m) => done.push(certify(cl, m)?),
            }
        }
        open = next;
    }
    Ok((open, done))
}

/// Visits every certified class with exponent at most `m_max`.
pub fn certified_classes(k: &LocalField, m_max: u32) -> Result<Vec<CertifiedClass>, OracleError> {
    let (open, mut done) = frontier(k, m_max, 256)?;
    let parts: Vec<Vec<CertifiedClass>> = open
        .into_par_iter()
        .map(|root| {
            let mut out = Vec::new();
            walk(k, m_max, root, &mut |c| {
                out.push(c);
                Ok(())
            })?;
            Ok(out)
        })
        .collect::<Result<_, OracleError>>()?;
    done.extend(parts.into_iter().flatten());
    Ok(done)
}

#[derive(Clone, Debug)]
pub struct DensityResult {
    pub measures: BTreeMap<(u32, GroupTag), Q>,
    pub counts: BTreeMap<(u32, GroupTag), BigUint>,
    /// Largest coefficient truncation used per row.
    pub precision: BTreeMap<(u32, GroupTag), u32>,
    pub classes: u64,
}

/// `aut(G) q^(m+2) mu / (q - 1)`.
pub fn measure_to_count(q: u64, m: u32, g: GroupTag, mu: &Q) -> Result<BigUint, OracleError> {
    let v = mu * int(aut_order(g) as i64) * qpow(q, m as i64 + 2) / Q::from_integer(BigInt::from(q - 1));
    as_natural(&v).ok_or_else(|| OracleError::NonIntegralCount {
        what: format!("m={m} {g}"),
        value: render(&v),
    })
}

/// Counts per `(m, G)` for `m <= m_max` from the measures of certified
/// classes.
pub fn density_counts(k: &LocalField, m_max: u32) -> Result<DensityResult, OracleError> {
    let (open, done) = frontier(k, m_max, 256)?;
    let mut tally = Tally::default();
    for c in &done {
        tally.add(c);
    }
    let tally = open
        .into_par_iter()
        .map(|root| {
            let mut t = Tally::default();
            walk(k, m_max, root, &mut |c| {
                t.add(&c);
                Ok(())
            })?;
            Ok::<_, OracleError>(t)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?
        .merge(tally);
    let q = k.q();
    let mut measures = BTreeMap::new();
    let mut counts = BTreeMap::new();
    for (key, w) in &tally.weights {
        let mu = w.iter().fold(int(0), |acc, (&wt, &n)| acc + int(n as i64) * qpow(q, -(wt as i64)));
        counts.insert(*key, measure_to_count(q, key.0, key.1, &mu)?);
        measures.insert(*key, mu);
    }
    Ok(DensityResult { measures, counts, precision: tally.max_c, classes: tally.classes })
}

/// Classes of the given quartic at the precision where it certifies.
pub fn class_of(f: &EisensteinQuartic, m_max: u32) -> Option<CoeffClass> {
    let k = f.field();
    let mut cl = CoeffClass::roots(k).into_iter().find(|c| c.rep(0).congruent(f.coeff(0), 2) == Some(true))?;
    loop {
        match step(&cl, k.e(), m_max) {
            Step::Discard => return None,
            Step::Certified(_) => return Some(cl),
            Step::Refine(i) => {
                cl = cl
                    .refine(i)
                    .into_iter()
                    .find(|c| c.rep(i).congruent(f.coeff(i), c.c[i]) == Some(true))
                    .expect("some digit matches");
            }
        }
    }
}
