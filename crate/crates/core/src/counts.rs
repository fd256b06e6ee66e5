//! Closed-form counts of totally ramified quartic extensions by
//! discriminant valuation `m` and closure group.
//!
//! Every expression is evaluated in exact rationals and only then checked
//! to be a non-negative integer.

use std::collections::BTreeMap;
use std::io;

use num_bigint::BigUint;
use num_traits::Zero;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::exact::{as_natural, ceil_div, floor_div, ind, int, qpow, Q};
use crate::params::{FieldParams, GroupTag, MinusOneClass, ParamsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("{what} is not a non-negative integer: {value}")]
    NonIntegralCount { what: String, value: String },
    #[error("{what}: {left} != {right}")]
    FormulationMismatch { what: String, left: String, right: String },
    #[error("Serre total misses q^-3 by {residual}")]
    SerreIdentityViolation { residual: String },
    #[error(transparent)]
    Params(#[from] ParamsError),
}

fn natural(what: impl FnOnce() -> String, r: Q) -> Result<BigUint, FormulaError> {
    as_natural(&r).ok_or_else(|| FormulaError::NonIntegralCount { what: what(), value: r.to_string() })
}

fn agree(what: impl FnOnce() -> String, left: &Q, right: &Q) -> Result<(), FormulaError> {
    if left == right {
        Ok(())
    } else {
        Err(FormulaError::FormulationMismatch { what: what(), left: left.to_string(), right: right.to_string() })
    }
}

fn even(m: i64) -> bool {
    m % 2 == 0
}

struct P {
    e: i64,
    f: u32,
    q: u64,
    d: i64,
    cls: MinusOneClass,
}

impl P {
    fn of(p: &FieldParams) -> Result<P, FormulaError> {
        p.validate()?;
        Ok(P { e: p.e as i64, f: p.f, q: p.q, d: p.d_minus_one as i64, cls: p.minus_one_class })
    }
    fn qq(&self) -> Q {
        int(self.q as i64)
    }
    fn pw(&self, k: i64) -> Q {
        qpow(self.q, k)
    }
}

fn one_aut_q(p: &P, m: i64) -> Q {
    if !(even(m) && 4 <= m && m <= 6 * p.e + 2) {
        return Q::zero();
    }
    let q = p.qq();
    let bump = ind(m % 6 == 0) * (int(1) - int(2) * &q) / (int(3) * &q);
    p.pw(floor_div(m, 3) - 1) * (&q - int(1)) * (int(1) + bump)
}

fn s4_q(p: &P, m: i64) -> Q {
    if p.f.is_multiple_of(2) || !(even(m) && m % 6 != 0 && 4 <= m && m <= 6 * p.e + 2) {
        return Q::zero();
    }
    p.pw(floor_div(m, 3) - 1) * (p.qq() - int(1))
}

fn a4_q(p: &P, m: i64) -> Q {
    let q = p.qq();
    let third = |p: &P| p.pw(floor_div(m, 3) - 2) * (&q * &q - int(1)) / int(3);
    if p.f.is_multiple_of(2) {
        if !(even(m) && 4 <= m && m <= 6 * p.e + 2) {
            return Q::zero();
        }
        if m % 3 == 0 {
            third(p)
        } else {
            p.pw(floor_div(m, 3) - 1) * (&q - int(1))
        }
    } else if m % 6 == 0 && 6 <= m && m <= 6 * p.e {
        third(p)
    } else {
        Q::zero()
    }
}

fn v4_q(p: &P, m: i64) -> Q {
    if !(even(m) && 6 <= m && m <= 6 * p.e + 2) {
        return Q::zero();
    }
    let q = p.qq();
    let inner = p.pw(-floor_div(m, 6)) * (int(1) + ind(m % 3 == 0) * (&q - int(2)) / int(3))
        - ind(m <= 4 * p.e + 2) * p.pw(-floor_div(m - 2, 4));
    int(2) * (&q - int(1)) * p.pw((m - 4) / 2) * inner
}

fn n_ext_q(p: &P, m1: i64) -> Q {
    let (e, d) = (p.e, p.d);
    if even(m1) && 2 <= m1 && m1 <= 2 * e {
        (int(1) + ind(m1 <= 2 * e - d))
            * p.pw(m1 / 2 - 1)
            * (p.qq() - int(1) - ind(m1 == 2 * e - d + 2))
    } else if m1 == 2 * e + 1 {
        match p.cls {
            MinusOneClass::Square => int(2) * p.pw(e),
            MinusOneClass::RamifiedQuadratic => p.pw(e),
            MinusOneClass::UnramifiedQuadratic => Q::zero(),
        }
    } else {
        Q::zero()
    }
}

fn n_c4_q(p: &P, m1: i64, m2: i64) -> Q {
    let e = p.e;
    if even(m1) && 2 <= m1 && m1 <= e {
        if m2 == 3 * m1 - 2 {
            p.pw(m1 - 1)
        } else if 3 * m1 <= m2 && m2 <= 4 * e - m1 && even(m2) {
            p.pw(floor_div(m1 + m2, 4)) - p.pw(floor_div(m1 + m2 - 2, 4))
        } else if m2 == 4 * e - m1 + 2 {
            p.pw(e)
        } else {
            Q::zero()
        }
    } else if m1 == 2 * e + 1 || (even(m1) && e < m1 && m1 <= 2 * e) {
        if m2 == m1 + 2 * e {
            int(2) * p.pw(e)
        } else {
            Q::zero()
        }
    } else {
        Q::zero()
    }
}

fn c4_top_q(p: &P) -> Q {
    let e = p.e;
    match p.cls {
        MinusOneClass::Square => int(4) * p.pw(2 * e),
        MinusOneClass::RamifiedQuadratic => int(2) * p.pw(2 * e),
        MinusOneClass::UnramifiedQuadratic => Q::zero(),
    }
}

fn c4_explicit_q(p: &P, m: i64) -> Q {
    let (e, d) = (p.e, p.d);
    if m == 8 * e + 3 {
        return c4_top_q(p);
    }
    if !(even(m) && 8 <= m && m <= 8 * e) {
        return Q::zero();
    }
    let q = p.qq();
    let qm1 = &q - int(1);
    let mut total = Q::zero();
    if 8 <= m && m <= 5 * e - 2 && m.rem_euclid(5) == 3 {
        total += int(2) * p.pw((3 * m - 14) / 10) * &qm1;
    }
    if 4 * e + 4 <= m && m <= 5 * e + 2 {
        total += int(2) * p.pw(m / 2 - e - 2) * &qm1;
    }
    if 5 * e + 3 <= m && m <= 8 * e && (m - 2 * e).rem_euclid(3) == 0 {
        total += int(2)
            * p.pw((m + 4 * e) / 6 - 1)
            * (int(1) + ind(m <= 8 * e - 3 * d))
            * (&qm1 - ind(m == 8 * e - 3 * d + 6));
    }
    if 10 <= m && m <= 5 * e {
        let hi = p.pw(floor_div(3 * m, 10) - 1);
        let lo = p.pw(ceil_div(m + 2, 4).max(m / 2 - e) - 2);
        total += int(2) * &qm1 * (hi - lo);
    }
    total
}

/// `N_ext` at a rational argument `num/den`; zero off the integers.
fn n_ext_at(p: &P, num: i64, den: i64) -> Q {
    if num % den != 0 {
        Q::zero()
    } else {
        n_ext_q(p, num / den)
    }
}

fn c4_via_ext_q(p: &P, m: i64) -> Q {
    let e = p.e;
    if m == 8 * e + 3 {
        return c4_top_q(p);
    }
    if !even(m) {
        return Q::zero();
    }
    let q = p.qq();
    let mut total = Q::zero();
    if 8 <= m && m <= 5 * e - 2 && (m - 3) % 5 == 0 {
        total += p.pw((m - 3) / 5) * n_ext_at(p, m + 2, 5);
    }
    let lo = 2.max(m - 4 * e);
    let hi = floor_div(m, 5).min(e);
    for m1 in lo..=hi {
        if (m1 - m).rem_euclid(4) == 0 {
            total += p.pw((m - m1) / 4 - 1) * (&q - int(1)) * n_ext_q(p, m1);
        }
    }
    if 4 * e + 4 <= m && m <= 5 * e + 2 {
        total += p.pw(e) * n_ext_q(p, m - 4 * e - 2);
    }
    if 5 * e + 3 <= m && m <= 8 * e {
        total += int(2) * p.pw(e) * n_ext_at(p, m - 2 * e, 3);
    }
    total
}

/// Third route: sum over the quadratic subfield's discriminant of
/// `N_ext(m1) * N^{C4}(m1, m - 2 m1)`.
fn c4_layered_q(p: &P, m: i64) -> Q {
    (2..=2 * p.e + 1).map(|m1| n_ext_q(p, m1) * n_c4_q(p, m1, m - 2 * m1)).sum()
}

fn tow_q(p: &P, m: i64) -> Q {
    let e = p.e;
    let q = p.qq();
    if even(m) && 6 <= m && m <= 8 * e + 2 {
        let inner = ind(m >= 4 * e + 4) * p.pw(-e)
            + ind(m <= 8 * e)
                * (p.pw(0.min(e + 1 - ceil_div(m, 4))) - p.pw(-(floor_div(m - 2, 4).min(e))));
        int(4) * (&q - int(1)) * p.pw(m / 2 - 2) * inner
    } else if m.rem_euclid(4) == 1 && 4 * e + 5 <= m && m <= 8 * e + 1 {
        int(4) * (&q - int(1)) * p.pw(e + (m - 1) / 4 - 1)
    } else if m == 8 * e + 3 {
        int(4) * p.pw(3 * e)
    } else {
        Q::zero()
    }
}

fn d4_explicit_q(p: &P, m: i64) -> Q {
    let e = p.e;
    let q = p.qq();
    let half = |x: Q| x / int(2);
    if even(m) && 6 <= m && m <= 8 * e + 2 {
        let inner = ind(m >= 4 * e + 4) * p.pw(-e)
            + ind(m <= 8 * e)
                * (p.pw(0.min(e + 1 - ceil_div(m, 4))) - p.pw(-(floor_div(m - 2, 4).min(e))));
        int(2) * (&q - int(1)) * p.pw(m / 2 - 2) * inner
            - half(c4_explicit_q(p, m))
            - half(int(3) * v4_q(p, m))
    } else if m.rem_euclid(4) == 1 && 4 * e + 5 <= m && m <= 8 * e + 1 {
        int(2) * (&q - int(1)) * p.pw(e + (m - 1) / 4 - 1)
            - half(c4_explicit_q(p, m))
            - half(int(3) * v4_q(p, m))
    } else if m == 8 * e + 3 {
        int(2) * p.pw(3 * e) - half(c4_explicit_q(p, m))
    } else {
        Q::zero()
    }
}

fn quad_ext_q(p: &P, m1: i64) -> Q {
    let e = p.e;
    if even(m1) && 2 <= m1 && m1 <= 2 * e {
        int(2) * (p.qq() - int(1)) * p.pw(m1 / 2 - 1)
    } else if m1 == 2 * e + 1 {
        int(2) * p.pw(e)
    } else {
        Q::zero()
    }
}

macro_rules! label {
    ($name:expr, $p:expr, $($arg:expr),*) => {
        || format!("{}({}{})", $name, describe($p), [$(format!(", {}", $arg)),*].concat())
    };
}

fn describe(p: &FieldParams) -> String {
    format!("e={} f={} d={} {}", p.e, p.f, p.d_minus_one, p.minus_one_class)
}

/// Fields with a single automorphism: `#S4 + #A4`.
pub fn count_one_aut(params: &FieldParams, m: i64) -> Result<BigUint, FormulaError> {
    let p = P::of(params)?;
    natural(label!("count_one_aut", params, m), one_aut_q(&p, m))
}

pub fn count_s4(params: &FieldParams, m: i64) -> Result<BigUint, FormulaError> {
    let p = P::of(params)?;
    natural(label!("count_s4", params, m), s4_q(&p, m))
}

pub fn count_a4(params: &FieldParams, m: i64) -> Result<BigUint, FormulaError> {
    let p = P::of(params)?;
    natural(label!("count_a4", params, m), a4_q(&p, m))
}

pub fn count_v4(params: &FieldParams, m: i64) -> Result<BigUint, FormulaError> {
    let p = P::of(params)?;
    natural(label!("count_v4", params, m), v4_q(&p, m))
}

/// Number of C4-extendable ramified quadratic extensions with discriminant exponent `m1`.
pub fn n_ext(params: &FieldParams, m1: i64) -> Result<BigUint, FormulaError> {
    let p = P::of(params)?;
    natural(label!("n_ext", params, m1), n_ext_q(&p, m1))
}

/// Number of quadratic `L/E` with `v_E(d_{L/E}) = m2` making `L/K` cyclic,
/// for any fixed C4-extendable `E` with `v_K(d_{E/K}) = m1`.
pub fn n_c4(params: &FieldParams, m1: i64, m2: i64) -> Result<BigUint, FormulaError> {
    let p = P::of(params)?;
    natural(label!("n_c4", params, m1, m2), n_c4_q(&p, m1, m2))
}

/// The C4 count in its explicit form.
pub fn count_c4_explicit(params: &FieldParams, m: i64) -> Result<BigUint, FormulaError> {
    let p = P::of(params)?;
    natural(label!("count_c4_explicit", params, m), c4_explicit_q(&p, m))
}

/// The C4 count assembled from `N_ext`.
pub fn count_c4_via_ext(params: &FieldParams, m: i64) -> Result<BigUint, FormulaError> {
    let p = P::of(params)?;
    natural(label!("count_c4_via_ext", params, m), c4_via_ext_q(&p, m))
}

/// The C4 count as `sum_{m1} N_ext(m1) N^{C4}(m1, m - 2 m1)`.
pub fn count_c4_layered(params: &FieldParams, m: i64) -> Result<BigUint, FormulaError> {
    let p = P::of(params)?;
    natural(label!("count_c4_layered", params, m), c4_layered_q(&p, m))
}

/// Both C4 forms, checked against each other.
pub fn count_c4(params: &FieldParams, m: i64) -> Result<BigUint, FormulaError> {
    let p = P::of(params)?;
    let thm = c4_explicit_q(&p, m);
    agree(label!("count_c4 forms", params, m), &thm, &c4_via_ext_q(&p, m))?;
    natural(label!("count_c4", params, m), thm)
}

/// Pairs `(E, L)` of quadratic steps with `v_K(d_{L/K}) = m`.
pub fn count_tow(params: &FieldParams, m: i64) -> Result<BigUint, FormulaError> {
    let p = P::of(params)?;
    natural(label!("count_tow", params, m), tow_q(&p, m))
}

/// The D4 count, checked against the tower identity.
pub fn count_d4(params: &FieldParams, m: i64) -> Result<BigUint, FormulaError> {
    let p = P::of(params)?;
    let thm = d4_explicit_q(&p, m);
    let via_tow = (tow_q(&p, m) - c4_via_ext_q(&p, m) - int(3) * v4_q(&p, m)) / int(2);
    agree(label!("count_d4 forms", params, m), &thm, &via_tow)?;
    natural(label!("count_d4", params, m), thm)
}

/// Totally ramified quadratic extensions with discriminant exponent `m1`.
pub fn count_quad_ext(params: &FieldParams, m1: i64) -> Result<BigUint, FormulaError> {
    let p = P::of(params)?;
    natural(label!("count_quad_ext", params, m1), quad_ext_q(&p, m1))
}

pub fn count(params: &FieldParams, m: i64, g: GroupTag) -> Result<BigUint, FormulaError> {
    match g {
        GroupTag::S4 => count_s4(params, m),
        GroupTag::A4 => count_a4(params, m),
        GroupTag::V4 => count_v4(params, m),
        GroupTag::C4 => count_c4(params, m),
        GroupTag::D4 => count_d4(params, m),
    }
}

/// Exact counts over a range of `m` and a set of groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub params: FieldParams,
    pub rows: BTreeMap<(i64, GroupTag), BigUint>,
}

pub const CSV_HEADER: [&str; 8] = ["e", "f", "q", "d_minus_one", "minus_one_class", "m", "group", "count"];

impl CountTable {
    /// Evaluates every `(m, g)` with `m_min <= m <= m_max`. Zero rows are
    /// kept only when `include_zero` is set.
    pub fn build(
        params: &FieldParams,
        m_min: i64,
        m_max: i64,
        groups: &[GroupTag],
        include_zero: bool,
    ) -> Result<CountTable, FormulaError> {
        params.validate()?;
        let mut rows = BTreeMap::new();
        for m in m_min..=m_max {
            for &g in groups {
                let c = count(params, m, g)?;
                if include_zero || !c.is_zero() {
                    rows.insert((m, g), c);
                }
            }
        }
        Ok(CountTable { params: *params, rows })
    }

    pub fn get(&self, m: i64, g: GroupTag) -> BigUint {
        self.rows.get(&(m, g)).cloned().unwrap_or_default()
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        let p = &self.params;
        for ((m, g), c) in &self.rows {
            w.write_record([
                p.e.to_string(),
                p.f.to_string(),
                p.q.to_string(),
                p.d_minus_one.to_string(),
                p.minus_one_class.to_string(),
                m.to_string(),
                g.to_string(),
                c.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads back what [`write_csv`](Self::write_csv) produced.
    pub fn read_csv<R: io::Read>(input: R) -> Result<CountTable, String> {
        let mut r = csv::Reader::from_reader(input);
        let mut params = None;
        let mut rows = BTreeMap::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| e.to_string())?;
            let field = |k: usize| rec.get(k).ok_or_else(|| format!("row {}: missing column {}", i + 2, CSV_HEADER[k]));
            let num = |k: usize| -> Result<u64, String> {
                field(k)?.parse().map_err(|_| format!("row {}: bad {}", i + 2, CSV_HEADER[k]))
            };
            let p = FieldParams {
                e: num(0)? as u32,
                f: num(1)? as u32,
                q: num(2)?,
                d_minus_one: num(3)? as u32,
                minus_one_class: field(4)?.parse().map_err(|e: ParamsError| e.to_string())?,
            };
            if *params.get_or_insert(p) != p {
                return Err(format!("row {}: parameters change mid-table", i + 2));
            }
            let m: i64 = field(5)?.parse().map_err(|_| format!("row {}: bad m", i + 2))?;
            let g: GroupTag = field(6)?.parse().map_err(|e: ParamsError| e.to_string())?;
            let c: BigUint = field(7)?.parse().map_err(|_| format!("row {}: bad count", i + 2))?;
            rows.insert((m, g), c);
        }
        let params = params.ok_or("empty table")?;
        Ok(CountTable { params, rows })
    }

    /// `{"params": {...}, "counts": {"<m>": {"<group>": "<count>"}}}`.
    pub fn to_json(&self) -> Value {
        let mut by_m: BTreeMap<i64, Map<String, Value>> = BTreeMap::new();
        for ((m, g), c) in &self.rows {
            by_m.entry(*m).or_default().insert(g.to_string(), Value::String(c.to_string()));
        }
        let mut counts = Map::new();
        for (m, groups) in by_m {
            counts.insert(m.to_string(), Value::Object(groups));
        }
        json!({ "params": self.params, "counts": counts })
    }

    pub fn from_json(v: &Value) -> Result<CountTable, String> {
        let params: FieldParams =
            serde_json::from_value(v.get("params").cloned().ok_or("missing params")?).map_err(|e| e.to_string())?;
        let counts = v.get("counts").and_then(Value::as_object).ok_or("missing counts")?;
        let mut rows = BTreeMap::new();
        for (m, groups) in counts {
            let m: i64 = m.parse().map_err(|_| format!("bad m {m:?}"))?;
            for (g, c) in groups.as_object().ok_or("counts entry is not an object")? {
                let g: GroupTag = g.parse().map_err(|e: ParamsError| e.to_string())?;
                let c: BigUint = c.as_str().and_then(|s| s.parse().ok()).ok_or("count is not a decimal string")?;
                rows.insert((m, g), c);
            }
        }
        Ok(CountTable { params, rows })
    }

    /// Fixed-width text rendering.
    pub fn to_table(&self) -> String {
        let mut s = format!("{:>4}  {:<5} {:>12}\n", "m", "group", "count");
        for ((m, g), c) in &self.rows {
            s.push_str(&format!("{:>4}  {:<5} {:>12}\n", m, g, c));
        }
        s
    }
}
