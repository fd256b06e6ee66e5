//! Field spec files and parameter derivation.
//!
//! ```json
//! {"f": 1, "eisenstein": [[0], [-2]]}
//! ```
//!
//! `eisenstein` lists the non-leading coefficients of the defining
//! polynomial of `K/U`, highest degree first and constant last. Each
//! coefficient is an integer vector in the power basis `1, z, .., z^(f-1)`
//! of the unramified field `U` of degree `f`. An empty or absent list means
//! `K = U`; `{"f": 1, "e": 1}` is accepted for the same thing.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::field::LocalField;
use super::squares::{hecke_disc, HeckeDisc};
use super::PadicError;
use crate::params::{FieldParams, MinusOneClass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub f: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    #[serde(default)]
    pub eisenstein: Vec<Vec<i64>>,
}

impl FieldSpec {
    pub fn q2() -> FieldSpec {
        FieldSpec::unramified(1)
    }

    pub fn unramified(f: u32) -> FieldSpec {
        FieldSpec { f, e: None, eisenstein: Vec::new() }
    }

    /// Eisenstein over `Q2` from integer coefficients, highest degree first.
    pub fn over_q2(coeffs: &[i64]) -> FieldSpec {
        FieldSpec { f: 1, e: None, eisenstein: coeffs.iter().map(|&c| vec![c]).collect() }
    }

    pub fn parse(text: &str) -> Result<FieldSpec, PadicError> {
        let spec: FieldSpec = serde_json::from_str(text).map_err(|e| PadicError::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<FieldSpec, PadicError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PadicError::InvalidSpec(format!("{}: {e}", path.display())))?;
        FieldSpec::parse(&text)
    }

    pub fn e(&self) -> u32 {
        self.eisenstein.len().max(1) as u32
    }

    pub fn validate(&self) -> Result<(), PadicError> {
        let bad = |m: String| Err(PadicError::InvalidSpec(m));
        if self.f == 0 || self.f > 8 {
            return bad(format!("f = {} outside 1..=8", self.f));
        }
        if self.eisenstein.len() == 1 {
            return bad("a degree-1 Eisenstein step adds nothing; omit it".into());
        }
        if let Some(e) = self.e {
            if e != self.e() {
                return bad(format!("e = {e} but {} Eisenstein coefficients", self.eisenstein.len()));
            }
        }
        if self.eisenstein.iter().any(|c| c.len() > self.f as usize) {
            return bad(format!("coefficient longer than f = {}", self.f));
        }
        if self.e() > 16 {
            return bad(format!("e = {} too large", self.e()));
        }
        Ok(())
    }

    /// Hex SHA-256 of the normalized JSON.
    pub fn hash(&self) -> String {
        let norm = FieldSpec {
            f: self.f,
            e: None,
            eisenstein: self
                .eisenstein
                .iter()
                .map(|c| {
                    let mut c = c.clone();
                    while c.last() == Some(&0) {
                        c.pop();
                    }
                    c
                })
                .collect(),
        };
        let text = serde_json::to_string(&norm).expect("spec serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    /// Short human-readable name, e.g. `x^2-2 over Q2`.
    pub fn describe(&self) -> String {
        let base = if self.f == 1 { "Q2".to_string() } else { format!("U{}", self.f) };
        if self.eisenstein.is_empty() {
            return base;
        }
        let n = self.eisenstein.len();
        let mut s = format!("x^{n}");
        for (i, c) in self.eisenstein.iter().enumerate() {
            let deg = n - 1 - i;
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let coeff = if c.len() == 1 {
                let v = c[0];
                let sign = if v < 0 { "-" } else { "+" };
                let mag = v.unsigned_abs();
                if mag == 1 && deg > 0 {
                    sign.to_string()
                } else {
                    format!("{sign}{mag}")
                }
            } else {
                format!("+({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            };
            s += &match deg {
                0 => coeff,
                1 => format!("{coeff}x"),
                d => format!("{coeff}x^{d}"),
            };
        }
        format!("{s} over {base}")
    }

    /// The field at its default precision `16e + 16`.
    pub fn build(&self) -> Result<LocalField, PadicError> {
        self.validate()?;
        let u = LocalField::unramified(self.f);
        if self.eisenstein.is_empty() {
            return Ok(u);
        }
        let coeffs: Vec<_> = self.eisenstein.iter().rev().map(|c| u.from_unramified_coords(c)).collect();
        let k = LocalField::eisenstein_over(&u, &coeffs)?;
        k.with_precision(16 * k.e() + 16)
    }
}

/// `(e, f, q, d(-1), class of -1)` of a concrete field.
pub fn derive_params(k: &LocalField) -> Result<FieldParams, PadicError> {
    let (d, class) = match hecke_disc(&k.int(-1))? {
        HeckeDisc::Trivial => (0, MinusOneClass::Square),
        HeckeDisc::Unramified => (0, MinusOneClass::UnramifiedQuadratic),
        HeckeDisc::Ramified(d) => (d, MinusOneClass::RamifiedQuadratic),
    };
    FieldParams::new(k.e(), k.f(), d, class).map_err(|e| PadicError::InvalidSpec(e.to_string()))
}
