//! Abstract base-field parameters.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// How `K(sqrt(-1))/K` behaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MinusOneClass {
    #[serde(rename = "square")]
    Square,
    #[serde(rename = "ramified")]
    RamifiedQuadratic,
    #[serde(rename = "unramified")]
    UnramifiedQuadratic,
}

impl MinusOneClass {
    pub const ALL: [MinusOneClass; 3] = [
        MinusOneClass::Square,
        MinusOneClass::RamifiedQuadratic,
        MinusOneClass::UnramifiedQuadratic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MinusOneClass::Square => "square",
            MinusOneClass::RamifiedQuadratic => "ramified",
            MinusOneClass::UnramifiedQuadratic => "unramified",
        }
    }
}

impl fmt::Display for MinusOneClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for MinusOneClass {
    type Err = ParamsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "square" => Ok(MinusOneClass::Square),
            "ramified" => Ok(MinusOneClass::RamifiedQuadratic),
            "unramified" => Ok(MinusOneClass::UnramifiedQuadratic),
            other => Err(ParamsError::InvalidParams(format!(
                "unknown minus_one_class {other:?}"
            ))),
        }
    }
}

/// Galois closure group of a quartic extension. The derived order is the
/// table order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupTag {
    S4,
    A4,
    V4,
    C4,
    D4,
}

impl GroupTag {
    pub const ALL: [GroupTag; 5] = [GroupTag::S4, GroupTag::A4, GroupTag::V4, GroupTag::C4, GroupTag::D4];

    pub fn as_str(self) -> &'static str {
        match self {
            GroupTag::S4 => "S4",
            GroupTag::A4 => "A4",
            GroupTag::V4 => "V4",
            GroupTag::C4 => "C4",
            GroupTag::D4 => "D4",
        }
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for GroupTag {
    type Err = ParamsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GroupTag::ALL
            .into_iter()
            .find(|g| g.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| ParamsError::InvalidParams(format!("unknown group {s:?}")))
    }
}

/// Size of `Aut(L/K)` for a quartic `L` with the given closure group.
pub fn aut_order(g: GroupTag) -> u32 {
    match g {
        GroupTag::S4 | GroupTag::A4 => 1,
        GroupTag::D4 => 2,
        GroupTag::C4 | GroupTag::V4 => 4,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// The tuple every closed form depends on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldParams {
    pub e: u32,
    pub f: u32,
    pub q: u64,
    pub d_minus_one: u32,
    pub minus_one_class: MinusOneClass,
}

impl FieldParams {
    /// Builds and validates, filling in `q = 2^f`.
    pub fn new(e: u32, f: u32, d_minus_one: u32, minus_one_class: MinusOneClass) -> Result<Self, ParamsError> {
        if f == 0 || f > 62 {
            return Err(ParamsError::InvalidParams(format!("f = {f} must lie in 1..=62")));
        }
        let p = FieldParams { e, f, q: 1u64 << f, d_minus_one, minus_one_class };
        p.validate()?;
        Ok(p)
    }

    /// Parameters of the 2-adic numbers.
    pub fn q2() -> Self {
        FieldParams { e: 1, f: 1, q: 2, d_minus_one: 2, minus_one_class: MinusOneClass::RamifiedQuadratic }
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let bad = |msg: String| Err(ParamsError::InvalidParams(msg));
        if self.e == 0 {
            return bad("e must be positive".into());
        }
        if self.f == 0 || self.f > 62 {
            return bad(format!("f = {} must lie in 1..=62", self.f));
        }
        if self.q != 1u64 << self.f {
            return bad(format!("q = {} but 2^f = {}", self.q, 1u64 << self.f));
        }
        let d = self.d_minus_one;
        if !d.is_multiple_of(2) {
            return bad(format!("d_minus_one = {d} is odd"));
        }
        let cap = 2 * self.e.div_ceil(2);
        if d > cap {
            return bad(format!("d_minus_one = {d} exceeds 2*ceil(e/2) = {cap}"));
        }
        match self.minus_one_class {
            MinusOneClass::Square | MinusOneClass::UnramifiedQuadratic if d != 0 => {
                bad(format!("d_minus_one = {d} but -1 class is {}", self.minus_one_class))
            }
            MinusOneClass::RamifiedQuadratic if d < 2 || d > 2 * self.e => {
                bad(format!("ramified -1 class needs 2 <= d_minus_one <= 2e, got {d}"))
            }
            _ => Ok(()),
        }
    }

    /// Every valid tuple with `e <= e_max`, `f <= f_max` whose trichotomy is
    /// compatible with `e`: when `e` is odd, `-1 = 1 - 2` with `v(2)` odd, so
    /// `K(sqrt(-1))/K` is ramified.
    pub fn sweep(e_max: u32, f_max: u32) -> Vec<FieldParams> {
        let mut out = Vec::new();
        for f in 1..=f_max {
            for e in 1..=e_max {
                if e % 2 == 0 {
                    out.push(FieldParams::new(e, f, 0, MinusOneClass::Square).unwrap());
                    out.push(FieldParams::new(e, f, 0, MinusOneClass::UnramifiedQuadratic).unwrap());
                }
                let mut d = 2;
                while d <= 2 * e.div_ceil(2) {
                    out.push(FieldParams::new(e, f, d, MinusOneClass::RamifiedQuadratic).unwrap());
                    d += 2;
                }
            }
        }
        out
    }

    /// Largest discriminant valuation any quartic can have.
    pub fn m_max(&self) -> i64 {
        8 * self.e as i64 + 3
    }
}
