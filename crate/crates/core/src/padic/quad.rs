//! Quadratic extensions `E = K(sqrt(d))`.

use super::field::{LocalElement, LocalField};
use super::squares::{reduce_unit, square_class};
use super::PadicError;
use crate::params::GroupTag;

/// `x + y sqrt(d)`.
#[derive(Clone, Debug)]
pub struct QuadElem {
    pub x: LocalElement,
    pub y: LocalElement,
}

#[derive(Clone, Debug)]
pub struct QuadExt {
    base: LocalField,
    d: LocalElement,
    model: Option<Model>,
}

#[derive(Clone, Debug)]
struct Model {
    field: LocalField,
    /// `w^2 + b w + c = 0` for the uniformizer `w`.
    b: LocalElement,
    c: LocalElement,
    sqrt_d: LocalElement,
}

impl QuadExt {
    /// Fails with [`PadicError::Square`] when `d` is a square.
    pub fn new(d: &LocalElement) -> Result<QuadExt, PadicError> {
        let k = d.field().clone();
        let (u, v) = d.split_unit()?;
        let t = v / 2;
        let pi = k.uniformizer();
        let model = if v % 2 == 1 {
            let d1 = u.mul(&pi);
            let b = k.zero();
            let c = d1.neg();
            let big = LocalField::eisenstein_over(&k, &[c.clone(), b.clone()])?;
            let sqrt_d = big.embed(&pi.pow(t as u64)).mul(&big.uniformizer());
            Some(Model { field: big, b, c, sqrt_d })
        } else {
            let red = reduce_unit(&u)?;
            match red.first_odd {
                None if red.coords == 0 => return Err(PadicError::Square),
                None => None,
                Some((j, x, s_inv)) => {
                    let kk = (j - 1) / 2;
                    let b = k.int(2).div_pi(kk)?;
                    let c = k.one().sub(&x).div_pi(2 * kk)?;
                    let big = LocalField::eisenstein_over(&k, &[c.clone(), b.clone()])?;
                    let sqrt_x = big.one().add(&big.embed(&pi.pow(kk as u64)).mul(&big.uniformizer()));
                    let scale = pi.pow(t as u64).mul(&s_inv.inv()?);
                    let sqrt_d = sqrt_x.mul(&big.embed(&scale));
                    Some(Model { field: big, b, c, sqrt_d })
                }
            }
        };
        Ok(QuadExt { base: k, d: d.clone(), model })
    }

    pub fn base(&self) -> &LocalField {
        &self.base
    }

    pub fn d(&self) -> &LocalElement {
        &self.d
    }

    pub fn is_ramified(&self) -> bool {
        self.model.is_some()
    }

    fn model(&self) -> Result<&Model, PadicError> {
        self.model.as_ref().ok_or(PadicError::NotRamified)
    }

    /// `E` as an Eisenstein extension of the base.
    pub fn field(&self) -> Result<&LocalField, PadicError> {
        Ok(&self.model()?.field)
    }

    /// `sqrt(d)` inside [`field`](Self::field).
    pub fn sqrt_d(&self) -> Result<&LocalElement, PadicError> {
        Ok(&self.model()?.sqrt_d)
    }

    /// `x^2 - d y^2`.
    pub fn norm(&self, z: &QuadElem) -> LocalElement {
        z.x.square().sub(&self.d.mul(&z.y.square()))
    }

    pub fn embed(&self, z: &QuadElem) -> Result<LocalElement, PadicError> {
        let m = self.model()?;
        Ok(m.field.embed(&z.x).add(&m.field.embed(&z.y).mul(&m.sqrt_d)))
    }

    /// Norm of an element of [`field`](Self::field).
    pub fn norm_e(&self, a: &LocalElement) -> LocalElement {
        let m = self.model.as_ref().expect("norm_e needs a ramified extension");
        let c = a.coefficients();
        // N(c0 + c1 w) = c0^2 - b c0 c1 + c c1^2
        c[0].square().sub(&m.b.mul(&c[0]).mul(&c[1])).add(&m.c.mul(&c[1].square()))
    }
}

/// Closure group of `E(sqrt(alpha))/K` for `alpha` in `E = K(sqrt(d))`,
/// from the square class of its norm.
pub fn classify_tower(ext: &QuadExt, alpha: &LocalElement) -> Result<GroupTag, PadicError> {
    classify_norm(ext, &ext.norm_e(alpha))
}

/// As [`classify_tower`] with `alpha = x + y sqrt(d)`.
pub fn classify_tower_pair(ext: &QuadExt, alpha: &QuadElem) -> Result<GroupTag, PadicError> {
    classify_norm(ext, &ext.norm(alpha))
}

fn classify_norm(ext: &QuadExt, n: &LocalElement) -> Result<GroupTag, PadicError> {
    let c = square_class(n)?;
    Ok(if c == 0 {
        GroupTag::V4
    } else if c == square_class(&ext.d)? {
        GroupTag::C4
    } else {
        GroupTag::D4
    })
}
