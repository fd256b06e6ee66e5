//! Counting isomorphism classes directly: certified class representatives
//! are grouped by whether one has a root in the other's stem field.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::density::certified_classes;
use super::OracleError;
use crate::padic::{EisensteinQuartic, LocalElement, LocalField, PadicError};
use crate::params::GroupTag;

/// Largest number of certified classes the grouping will handle.
pub const DEFAULT_BUDGET: usize = 20_000;

/// Whether `g` has a root in the stem field of `f`.
pub fn same_stem(f: &EisensteinQuartic, g: &EisensteinQuartic) -> Result<bool, PadicError> {
    let l = f.stem_field()?;
    let mut poly: Vec<LocalElement> = (0..4).map(|i| l.embed(g.coeff(i))).collect();
    poly.push(l.one());
    Ok(crate::padic::count_integral_roots(&poly)? > 0)
}

pub fn dedup_counts(k: &LocalField, m_max: u32, budget: usize) -> Result<BTreeMap<(u32, GroupTag), BigUint>, OracleError> {
    let certified = certified_classes(k, m_max)?;
    if certified.len() > budget {
        return Err(OracleError::BudgetExceeded(format!("{} classes, budget {budget}", certified.len())));
    }
    let mut fields: BTreeMap<(u32, GroupTag), Vec<EisensteinQuartic>> = BTreeMap::new();
    for c in certified {
        let g = c.class.quartic();
        let seen = fields.entry((c.m, c.group)).or_default();
        let mut found = false;
        for f in seen.iter() {
            if same_stem(f, &g)? {
                found = true;
                break;
            }
        }
        if !found {
            seen.push(g);
        }
    }
    Ok(fields.into_iter().map(|(key, v)| (key, BigUint::from(v.len()))).collect())
}
