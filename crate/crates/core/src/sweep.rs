//! Identity checks over parameter sweeps.
//!
//! These run on abstract tuples only. A tuple passing every check is a formal
//! result: nothing here says a 2-adic field with those parameters exists.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::counts::{
    count, count_a4, count_c4, count_c4_via_ext, count_c4_layered, count_c4_explicit, count_d4, count_one_aut,
    count_s4, count_tow, count_v4, FormulaError,
};
use crate::masses::{mass_closed_form, mass_from_counts, serre_total, tower_mass_sum};
use crate::params::{FieldParams, GroupTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Serre,
    MassSum,
    TowerIdentity,
    C4Dual,
    A4Total,
    Support,
}

impl Check {
    pub const ALL: [Check; 6] =
        [Check::Serre, Check::MassSum, Check::TowerIdentity, Check::C4Dual, Check::A4Total, Check::Support];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::Serre => "serre",
            Check::MassSum => "mass-sum",
            Check::TowerIdentity => "tower-identity",
            Check::C4Dual => "c4-dual",
            Check::A4Total => "a4-total",
            Check::Support => "support",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Check {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Check::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| format!("unknown check {s:?}"))
    }
}

fn mismatch(what: String, left: impl ToString, right: impl ToString) -> FormulaError {
    FormulaError::FormulationMismatch { what, left: left.to_string(), right: right.to_string() }
}

/// Smallest and largest `m` at which the group can occur.
fn support(p: &FieldParams, g: GroupTag) -> (i64, i64) {
    let e = p.e as i64;
    match g {
        GroupTag::S4 => (4, 6 * e + 2),
        GroupTag::A4 if p.f.is_multiple_of(2) => (4, 6 * e + 2),
        GroupTag::A4 => (6, 6 * e),
        GroupTag::V4 => (6, 6 * e + 2),
        GroupTag::C4 => (8, 8 * e + 3),
        GroupTag::D4 => (6, 8 * e + 3),
    }
}

/// Runs one identity on one tuple.
pub fn check(p: &FieldParams, which: Check) -> Result<(), FormulaError> {
    let top = p.m_max();
    match which {
        Check::Serre => serre_total(p).map(|_| ()),
        Check::MassSum => {
            for g in GroupTag::ALL {
                let (closed, summed) = (mass_closed_form(p, g)?, mass_from_counts(p, g)?);
                if closed != summed {
                    return Err(mismatch(format!("{g} mass"), closed, summed));
                }
            }
            Ok(())
        }
        Check::TowerIdentity => {
            for m in 0..=top {
                let lhs = count_c4(p, m)? + BigUint::from(2u8) * count_d4(p, m)? + BigUint::from(3u8) * count_v4(p, m)?;
                let rhs = count_tow(p, m)?;
                if lhs != rhs {
                    return Err(mismatch(format!("tower identity at m={m}"), lhs, rhs));
                }
            }
            tower_mass_sum(p).map(|_| ())
        }
        Check::C4Dual => {
            for m in 0..=top {
                let thm = count_c4_explicit(p, m)?;
                for other in [count_c4_via_ext(p, m)?, count_c4_layered(p, m)?] {
                    if thm != other {
                        return Err(mismatch(format!("C4 forms at m={m}"), thm, other));
                    }
                }
            }
            Ok(())
        }
        Check::A4Total => {
            if p.f % 2 == 1 {
                let mut total = BigUint::zero();
                for m in 0..=top {
                    total += count_a4(p, m)?;
                }
                let want = (BigUint::from(p.q).pow(2 * p.e) - BigUint::one()) / BigUint::from(3u8);
                if total != want {
                    return Err(mismatch("A4 total".into(), total, want));
                }
            } else {
                for m in 0..=top {
                    let s4 = count_s4(p, m)?;
                    if !s4.is_zero() {
                        return Err(mismatch(format!("S4 at m={m} with f even"), s4, 0));
                    }
                    let (one, a4) = (count_one_aut(p, m)?, count_a4(p, m)?);
                    if one != a4 {
                        return Err(mismatch(format!("one-aut vs A4 at m={m}"), one, a4));
                    }
                }
            }
            Ok(())
        }
        Check::Support => {
            for g in GroupTag::ALL {
                let (lo, hi) = support(p, g);
                for m in (0..=8 * p.e as i64 + 8).filter(|m| *m < lo || *m > hi) {
                    let c = count(p, m, g)?;
                    if !c.is_zero() {
                        return Err(mismatch(format!("{g} outside support at m={m}"), c, 0));
                    }
                }
            }
            Ok(())
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepFailure {
    pub params: FieldParams,
    pub check: Check,
    pub error: FormulaError,
}

#[derive(Clone, Debug)]
pub struct SweepSummary {
    pub tuples: usize,
    pub checks: Vec<Check>,
    pub failures: Vec<SweepFailure>,
}

/// Runs every check on every tuple of [`FieldParams::sweep`].
pub fn run_sweep(e_max: u32, f_max: u32, checks: &[Check]) -> SweepSummary {
    let tuples = FieldParams::sweep(e_max, f_max);
    let mut failures: Vec<SweepFailure> = tuples
        .par_iter()
        .flat_map_iter(|p| {
            checks.iter().filter_map(move |&c| {
                check(p, c).err().map(|error| SweepFailure { params: *p, check: c, error })
            })
        })
        .collect();
    failures.sort_by_key(|f| (f.params.f, f.params.e, f.params.d_minus_one, f.params.minus_one_class, f.check));
    SweepSummary { tuples: tuples.len(), checks: checks.to_vec(), failures }
}
