//! Counting V4, C4 and D4 quartics as towers of ramified quadratic steps.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;

use super::OracleError;
use crate::padic::{classify_tower, hecke_disc, square_class_reps, HeckeDisc, LocalField, QuadExt};
use crate::params::GroupTag;

#[derive(Clone, Debug, Default)]
pub struct TowerResult {
    /// Pairs `(E, L)` of subfields per `(m, G)` before fibre division.
    pub pairs: BTreeMap<(u32, GroupTag), u64>,
    pub counts: BTreeMap<(u32, GroupTag), BigUint>,
}

impl TowerResult {
    pub fn pairs_at(&self, m: u32) -> u64 {
        self.pairs.iter().filter(|(k, _)| k.0 == m).map(|(_, n)| n).sum()
    }
}

/// Number of towers over each quartic field of the given group.
pub fn fibre_size(g: GroupTag) -> u64 {
    match g {
        GroupTag::C4 => 1,
        GroupTag::D4 => 2,
        GroupTag::V4 => 3,
        _ => unreachable!("towers only give 2-groups"),
    }
}

pub fn tower_counts(k: &LocalField) -> Result<TowerResult, OracleError> {
    let reps = square_class_reps(k)?;
    let per_d: Vec<BTreeMap<(u32, GroupTag), u64>> = reps
        .par_iter()
        .map(|d| -> Result<_, OracleError> {
            let mut pairs = BTreeMap::new();
            let HeckeDisc::Ramified(m1) = hecke_disc(d)? else { return Ok(pairs) };
            let ext = QuadExt::new(d)?;
            let big = ext.field()?;
            for alpha in square_class_reps(big)? {
                let HeckeDisc::Ramified(m2) = hecke_disc(&alpha)? else { continue };
                let g = classify_tower(&ext, &alpha)?;
                *pairs.entry((2 * m1 + m2, g)).or_default() += 1;
            }
            Ok(pairs)
        })
        .collect::<Result<_, _>>()?;
    let mut out = TowerResult::default();
    for p in per_d {
        for (key, n) in p {
            *out.pairs.entry(key).or_default() += n;
        }
    }
    for (&(m, g), &n) in &out.pairs {
        let f = fibre_size(g);
        if n % f != 0 {
            return Err(OracleError::NonIntegralCount { what: format!("m={m} {g} pairs"), value: format!("{n}/{f}") });
        }
        out.counts.insert((m, g), BigUint::from(n / f));
    }
    Ok(out)
}
