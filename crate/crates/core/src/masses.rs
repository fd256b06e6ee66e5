//! Masses `sum 1/(#Aut(L/K) q^m)` per closure group, as exact rationals.

use std::collections::BTreeMap;
use std::io;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::counts::{count, count_tow, FormulaError};
use crate::exact::{floor_div, ind, int, qpow, render, Q};
use crate::params::{aut_order, FieldParams, GroupTag, MinusOneClass};

fn qp(p: &FieldParams, k: i64) -> Q {
    qpow(p.q, k)
}

fn qv(p: &FieldParams) -> Q {
    int(p.q as i64)
}

fn half() -> Q {
    Q::new(BigInt::one(), BigInt::from(2))
}

fn ed(p: &FieldParams) -> (i64, i64, i64) {
    let e = p.e as i64;
    (e, p.d_minus_one as i64, floor_div(e, 2))
}

pub fn c4_mass_q1(p: &FieldParams) -> Q {
    let (_, _, h) = ed(p);
    let q = qv(p);
    half() * (&q - int(1)) * (int(1) - qp(p, -7 * h)) / (qp(p, 7) - int(1))
}

pub fn c4_mass_q2(p: &FieldParams) -> Q {
    let (e, _, h) = ed(p);
    half() * qp(p, -3 * e - 3) * (int(1) - qp(p, -h))
}

pub fn c4_mass_q3(p: &FieldParams) -> Q {
    let (e, d, h) = ed(p);
    let q = qv(p);
    ind(d < e) * (&q - int(1)) * (qp(p, -5 * h - e - 1) - qp(p, 5 * d / 2 - 6 * e - 1)) / (qp(p, 5) - int(1))
}

pub fn c4_mass_q4(p: &FieldParams) -> Q {
    let (e, d, _) = ed(p);
    half() * ind(d >= 2) * qp(p, -6 * e + 5 * d / 2 - 6) * (qv(p) - int(2))
}

pub fn c4_mass_q5(p: &FieldParams) -> Q {
    let (e, d, _) = ed(p);
    let q = qv(p);
    half() * ind(d >= 4) * (&q - int(1)) * (qp(p, 5 * d / 2 - 6 * e - 6) - qp(p, -6 * e - 1)) / (qp(p, 5) - int(1))
}

pub fn c4_mass_q6(p: &FieldParams) -> Q {
    let (e, _, h) = ed(p);
    if e < 2 {
        return Q::zero();
    }
    let q = qv(p);
    let poly = qp(p, 6) + qp(p, 4) + qp(p, 3) + &q + int(1);
    let inner = &q * (qp(p, 7 * h - 7) - int(1)) * poly / (qp(p, 7) - int(1))
        + int(1)
        + ind(e % 2 == 1) * (qp(p, -2) + qp(p, -3));
    half() * (&q - int(1)) * qp(p, -7 * h - 1) * inner
}

pub fn c4_mass_q7(p: &FieldParams) -> Q {
    let (e, _, _) = ed(p);
    let q = qv(p);
    -ind(e >= 2) * half() * (&q - int(1)) * (&q + int(1)) * (qp(p, -7) - qp(p, -3 * e - 1)) / (qp(p, 3) - int(1))
}

pub fn c4_mass_q8(p: &FieldParams) -> Q {
    let (e, _, h) = ed(p);
    -half() * qp(p, -3 * e - 2) * (int(1) - qp(p, -h))
}

pub fn c4_mass_q9(p: &FieldParams) -> Q {
    let (e, _, _) = ed(p);
    match p.minus_one_class {
        MinusOneClass::Square => qp(p, -6 * e - 3),
        MinusOneClass::RamifiedQuadratic => half() * qp(p, -6 * e - 3),
        MinusOneClass::UnramifiedQuadratic => Q::zero(),
    }
}

/// The nine C4 quantities in order.
pub fn c4_mass_terms(p: &FieldParams) -> [Q; 9] {
    [
        c4_mass_q1(p),
        c4_mass_q2(p),
        c4_mass_q3(p),
        c4_mass_q4(p),
        c4_mass_q5(p),
        c4_mass_q6(p),
        c4_mass_q7(p),
        c4_mass_q8(p),
        c4_mass_q9(p),
    ]
}

fn v4_mass(p: &FieldParams) -> Q {
    let (e, _, _) = ed(p);
    let q = qv(p);
    let a = qp(p, -4 * e - 3) * (qp(p, 4 * e) - int(1)) / (qp(p, 4) - int(1))
        * (int(3) * qp(p, 3) + qp(p, 2) + &q + int(3));
    let b = int(3) * qp(p, -3 * e - 3) * (qp(p, 3 * e) - int(1)) / (qp(p, 3) - int(1)) * (qp(p, 2) + int(1));
    (&q - int(1)) / int(6) * (a - b)
}

/// `(1/4) sum_m q^-m #Tow_m` in closed form.
pub fn tower_mass_closed(p: &FieldParams) -> Q {
    let e = p.e as i64;
    let q = qv(p);
    (qp(p, -3 * e - 3) + qp(p, -3 * e - 1) + qp(p, -2)) / (&q * &q + &q + int(1))
}

pub fn mass_closed_form(p: &FieldParams, g: GroupTag) -> Result<Q, FormulaError> {
    p.validate()?;
    let e = p.e as i64;
    let q = qv(p);
    Ok(match g {
        GroupTag::S4 if p.f.is_multiple_of(2) => Q::zero(),
        GroupTag::S4 => {
            (qp(p, 3) + int(1)) / (qp(p, 3) + qp(p, 2) + &q + int(1)) * (qp(p, -3) - qp(p, -4 * e - 3))
        }
        GroupTag::A4 if p.f.is_multiple_of(2) => {
            (&q - int(1)) / int(3) * (qp(p, 4 * e) - int(1)) / (qp(p, 4) - int(1))
                * qp(p, -4 * e - 3)
                * (int(3) * qp(p, 3) + qp(p, 2) + &q + int(3))
        }
        GroupTag::A4 => (qp(p, -2) - qp(p, -4 * e - 2)) / (int(3) * (qp(p, 2) + int(1))),
        GroupTag::V4 => v4_mass(p),
        GroupTag::C4 => c4_mass_terms(p).into_iter().sum(),
        GroupTag::D4 => {
            let c4: Q = c4_mass_terms(p).into_iter().sum();
            tower_mass_closed(p) - c4 - int(3) * v4_mass(p)
        }
    })
}

/// Sums the counts over the full support `m <= 8e+3`.
pub fn mass_from_counts(p: &FieldParams, g: GroupTag) -> Result<Q, FormulaError> {
    let aut = int(aut_order(g) as i64);
    let mut total = Q::zero();
    for m in 0..=p.m_max() {
        let c = count(p, m, g)?;
        if !c.is_zero() {
            total += Q::from_integer(BigInt::from(c)) / (&aut * qp(p, m));
        }
    }
    Ok(total)
}

/// `(1/4) sum_m q^-m #Tow_m`, checked against its closed form.
pub fn tower_mass_sum(p: &FieldParams) -> Result<Q, FormulaError> {
    let mut total = Q::zero();
    for m in 0..=p.m_max() {
        total += Q::from_integer(BigInt::from(count_tow(p, m)?)) / (int(4) * qp(p, m));
    }
    let closed = tower_mass_closed(p);
    if total != closed {
        return Err(FormulaError::FormulationMismatch {
            what: "tower mass".into(),
            left: total.to_string(),
            right: closed.to_string(),
        });
    }
    Ok(total)
}

/// Total mass over all five groups; must be `q^-3`.
pub fn serre_total(p: &FieldParams) -> Result<Q, FormulaError> {
    let mut total = Q::zero();
    for g in GroupTag::ALL {
        total += mass_closed_form(p, g)?;
    }
    let residual = &total - qp(p, -3);
    if !residual.is_zero() {
        return Err(FormulaError::SerreIdentityViolation { residual: render(&residual) });
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MassTable {
    pub params: FieldParams,
    pub per_group: BTreeMap<GroupTag, Q>,
    pub total: Q,
}

impl MassTable {
    pub fn closed_form(p: &FieldParams) -> Result<MassTable, FormulaError> {
        let mut per_group = BTreeMap::new();
        for g in GroupTag::ALL {
            per_group.insert(g, mass_closed_form(p, g)?);
        }
        let total = per_group.values().sum();
        Ok(MassTable { params: *p, per_group, total })
    }

    pub fn to_json(&self) -> Value {
        let mut masses = Map::new();
        for (g, m) in &self.per_group {
            masses.insert(g.to_string(), Value::String(render(m)));
        }
        json!({ "params": self.params, "masses": masses, "total": render(&self.total) })
    }

    /// Columns `group,mass`, with a final `total` row.
    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["group", "mass"])?;
        for (g, m) in &self.per_group {
            w.write_record([g.to_string(), render(m)])?;
        }
        w.write_record(["total".to_string(), render(&self.total)])?;
        w.flush()?;
        Ok(())
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        for (g, m) in &self.per_group {
            s.push_str(&format!("{:<6} {}\n", g, render(m)));
        }
        s.push_str(&format!("{:<6} {}\n", "total", render(&self.total)));
        s
    }
}
