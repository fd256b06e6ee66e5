//! Eisenstein quartics: discriminants, valuation patterns, automorphisms and
//! closure groups.

use num_traits::Zero;

use super::field::{LocalElement, LocalField};
use super::roots::{count_roots_from, deflate};
use super::squares::is_square;
use super::PadicError;
use crate::exact::{frac, Q};
use crate::params::GroupTag;

/// `x^4 + a3 x^3 + a2 x^2 + a1 x + a0`.
#[derive(Clone, Debug)]
pub struct EisensteinQuartic {
    a: [LocalElement; 4],
}

impl EisensteinQuartic {
    /// Coefficients constant first.
    pub fn new(a: [LocalElement; 4]) -> Result<EisensteinQuartic, PadicError> {
        let k = a[0].field();
        for x in &a[1..] {
            assert!(k.same(x.field()), "coefficients over different fields");
        }
        if a[0].valuation() != Some(1) {
            return Err(PadicError::NotEisenstein(format!("v(a0) = {:?}", a[0].valuation())));
        }
        for (i, x) in a.iter().enumerate().skip(1) {
            if x.valuation() == Some(0) {
                return Err(PadicError::NotEisenstein(format!("a{i} is a unit")));
            }
        }
        Ok(EisensteinQuartic { a })
    }

    /// Integer coefficients `[a0, a1, a2, a3]`.
    pub fn from_ints(k: &LocalField, a: [i64; 4]) -> Result<EisensteinQuartic, PadicError> {
        EisensteinQuartic::new(a.map(|x| k.int(x)))
    }

    pub fn field(&self) -> &LocalField {
        self.a[0].field()
    }

    pub fn coeff(&self, i: usize) -> &LocalElement {
        &self.a[i]
    }

    /// The same polynomial over a re-precisioned handle of its field, with
    /// coefficients taken as exact.
    pub fn promote(&self, k: &LocalField) -> EisensteinQuartic {
        EisensteinQuartic { a: self.a.clone().map(|x| x.promote(k)) }
    }

    pub fn discriminant(&self) -> LocalElement {
        let [e, d, c, b] = &self.a;
        let one = self.field().one();
        let o = &one;
        let terms: [(i64, [&LocalElement; 6]); 16] = {
            [
                (256, [e, e, e, o, o, o]),
                (-192, [b, d, e, e, o, o]),
                (-128, [c, c, e, e, o, o]),
                (144, [c, d, d, e, o, o]),
                (-27, [d, d, d, d, o, o]),
                (144, [b, b, c, e, e, o]),
                (-6, [b, b, d, d, e, o]),
                (-80, [b, c, c, d, e, o]),
                (18, [b, c, d, d, d, o]),
                (16, [c, c, c, c, e, o]),
                (-4, [c, c, c, d, d, o]),
                (-27, [b, b, b, b, e, e]),
                (18, [b, b, b, c, d, e]),
                (-4, [b, b, b, d, d, d]),
                (-4, [b, b, c, c, c, e]),
                (1, [b, b, c, c, d, d]),
            ]
        };
        let k = self.field();
        terms.iter().fold(k.zero(), |acc, (n, xs)| {
            let prod = xs.iter().skip(1).fold(xs[0].clone(), |p, x| p.mul(x));
            acc.add(&prod.mul_int(*n))
        })
    }

    fn val_floor(&self, i: usize) -> u32 {
        self.a[i].valuation_capped()
    }

    /// `v_L(f'(pi))` read off termwise; the four terms have distinct
    /// valuations mod 4, so the minimum is exact.
    pub fn ore_valuation(&self) -> Result<u32, PadicError> {
        let e = self.field().e();
        if self.a.iter().any(|x| x.valuation().is_none() && x.precision() < 2 * e + 1) {
            return Err(PadicError::PrecisionExhausted("coefficients too coarse for the discriminant".into()));
        }
        Ok([4 * self.val_floor(1), 4 * self.val_floor(2) + 4 * e + 1, 4 * self.val_floor(3) + 2, 8 * e + 3]
            .into_iter()
            .min()
            .unwrap())
    }

    /// `v_K(disc f)`, equal to the discriminant exponent of the stem field.
    pub fn disc_valuation(&self) -> Result<u32, PadicError> {
        let m = self
            .discriminant()
            .valuation()
            .ok_or_else(|| PadicError::PrecisionExhausted("discriminant vanishes to known precision".into()))?;
        let ore = self.ore_valuation()?;
        assert_eq!(m, ore, "discriminant valuation disagrees with the different");
        assert!(m <= 8 * self.field().e() + 3);
        Ok(m)
    }

    /// The valuation pattern containing every one-automorphism quartic of
    /// discriminant exponent `m`.
    pub fn in_tm(&self, m: u32) -> bool {
        let e = self.field().e();
        if m % 2 == 1 || m < 4 || m > 6 * e + 2 {
            return false;
        }
        let v1 = self.val_floor(1);
        let v2 = self.val_floor(2);
        let v3 = self.val_floor(3);
        let exact = |i: usize, v: u32| self.a[i].valuation() == Some(v);
        if m.is_multiple_of(4) {
            exact(1, m / 4) && 6 * v2 >= m && v3 >= m / 4
        } else {
            4 * v1 >= m + 2 && 6 * v2 >= m && exact(3, (m - 2) / 4)
        }
    }

    /// Whether the stem field has trivial automorphism group, decided from
    /// the coefficients alone.
    pub fn is_one_aut(&self) -> Result<bool, PadicError> {
        let m = self.disc_valuation()?;
        if !self.in_tm(m) {
            return Ok(false);
        }
        if m % 3 != 0 {
            return Ok(true);
        }
        let k = self.field();
        let lead = if m % 4 == 0 { &self.a[1] } else { &self.a[3] };
        let t1 = self.a[2].mul(&self.a[0].pow((m / 12) as u64));
        let t3 = self.a[0].pow((m / 4) as u64);
        let modulus = m / 4 + 1;
        for r in k.residue_field().elements() {
            let u = k.lift(r);
            let s = lead.add(&u.mul(&t1)).add(&u.pow(3).mul(&t3));
            match s.congruent(&k.zero(), modulus) {
                Some(true) => return Ok(false),
                Some(false) => {}
                None => return Err(PadicError::PrecisionExhausted("congruence beyond known digits".into())),
            }
        }
        Ok(true)
    }

    /// The stem field `K[x]/(f)`.
    pub fn stem_field(&self) -> Result<LocalField, PadicError> {
        LocalField::eisenstein_over(self.field(), &self.a)
    }

    /// Number of roots of `f` in its stem field, i.e. `#Aut(L/K)`.
    pub fn count_roots_in_stem(&self) -> Result<usize, PadicError> {
        let l = self.stem_field()?;
        let mut poly: Vec<LocalElement> = self.a.iter().map(|x| l.embed(x)).collect();
        poly.push(l.one());
        // the other roots sit at positive distance from pi
        let r = 1 + count_roots_from(&deflate(&poly, &l.uniformizer()), 1)?;
        assert!(matches!(r, 1 | 2 | 4), "{r} roots of a quartic in its stem field");
        Ok(r)
    }

    /// `(m, G)` at the field's working precision.
    pub fn classify_once(&self) -> Result<(u32, GroupTag), PadicError> {
        let m = self.disc_valuation()?;
        let r = self.count_roots_in_stem()?;
        debug_assert_eq!(r == 1, self.is_one_aut()?, "automorphism count disagrees with the congruence test");
        let g = match r {
            1 | 4 => {
                let sq = is_square(&self.discriminant())?;
                match (r, sq) {
                    (1, true) => GroupTag::A4,
                    (1, false) => GroupTag::S4,
                    (_, true) => GroupTag::V4,
                    (_, false) => GroupTag::C4,
                }
            }
            _ => GroupTag::D4,
        };
        Ok((m, g))
    }

    /// `(m, G)`, doubling precision on exhaustion.
    pub fn classify(&self) -> Result<(u32, GroupTag), PadicError> {
        super::with_retry(self.field(), |k| {
            if k.same(self.field()) {
                self.classify_once()
            } else {
                self.promote(k).classify_once()
            }
        })
    }

    pub fn newton_polygon(&self) -> NewtonPolygon {
        let mut pts: Vec<(u32, u32)> =
            self.a.iter().enumerate().filter_map(|(i, x)| x.valuation().map(|v| (i as u32, v))).collect();
        pts.push((4, 0));
        NewtonPolygon::lower_hull(&pts)
    }
}

/// Lower convex hull of `(i, v(a_i))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(u32, u32)>,
}

impl NewtonPolygon {
    pub fn lower_hull(points: &[(u32, u32)]) -> NewtonPolygon {
        let mut hull: Vec<(u32, u32)> = Vec::new();
        for &p in points {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                let cross = (b.0 as i64 - a.0 as i64) * (p.1 as i64 - a.1 as i64)
                    - (b.1 as i64 - a.1 as i64) * (p.0 as i64 - a.0 as i64);
                if cross <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        NewtonPolygon { vertices: hull }
    }

    pub fn slopes(&self) -> Vec<Q> {
        self.vertices
            .windows(2)
            .map(|w| frac(w[1].1 as i64 - w[0].1 as i64, w[1].0 as i64 - w[0].0 as i64))
            .collect()
    }

    pub fn is_single_segment(&self) -> bool {
        self.vertices.len() == 2
    }

    pub fn total_length(&self) -> Q {
        match (self.vertices.first(), self.vertices.last()) {
            (Some(a), Some(b)) => Q::from_integer((b.0 - a.0).into()),
            _ => Q::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2() -> LocalField {
        LocalField::q2()
    }

    #[test]
    fn disc_examples() {
        let k = q2();
        let f = EisensteinQuartic::from_ints(&k, [2, 2, 0, 0]).unwrap();
        assert!(f.discriminant().congruent(&k.int(1616), 30).unwrap());
        assert_eq!(f.disc_valuation().unwrap(), 4);
        assert_eq!(EisensteinQuartic::from_ints(&k, [2, 0, 0, 0]).unwrap().disc_valuation().unwrap(), 11);
        assert_eq!(EisensteinQuartic::from_ints(&k, [2, 0, -4, 0]).unwrap().disc_valuation().unwrap(), 11);
    }

    #[test]
    fn tm_and_one_aut() {
        let k = q2();
        let f = EisensteinQuartic::from_ints(&k, [2, 2, 0, 0]).unwrap();
        assert!(f.in_tm(4));
        assert!(!f.in_tm(6));
        assert!(f.is_one_aut().unwrap());
        let g = EisensteinQuartic::from_ints(&k, [2, 0, 0, 2]).unwrap();
        assert!(g.in_tm(6));
        assert!(!g.is_one_aut().unwrap());
        let h = EisensteinQuartic::from_ints(&k, [2, 0, 2, 2]).unwrap();
        assert!(h.is_one_aut().unwrap());
    }

    #[test]
    fn worked_witnesses() {
        let k = q2();
        let cases = [
            ([2, 2, 0, 0], (4, GroupTag::S4)),
            ([2, 0, 2, 2], (6, GroupTag::A4)),
            ([2, 4, 6, 4], (8, GroupTag::V4)),
            ([2, 0, -4, 0], (11, GroupTag::C4)),
            ([2, 0, 0, 0], (11, GroupTag::D4)),
            ([2, 0, 2, 0], (9, GroupTag::D4)),
        ];
        for (a, want) in cases {
            let f = EisensteinQuartic::from_ints(&k, a).unwrap();
            assert_eq!(f.classify().unwrap(), want, "{a:?}");
        }
        assert_eq!(EisensteinQuartic::from_ints(&k, [2, 0, 2, 0]).unwrap().count_roots_in_stem().unwrap(), 2);
        assert_eq!(EisensteinQuartic::from_ints(&k, [2, 0, -4, 0]).unwrap().count_roots_in_stem().unwrap(), 4);
    }

    #[test]
    fn newton_polygon_is_one_segment() {
        let k = q2();
        let f = EisensteinQuartic::from_ints(&k, [2, 4, 0, 8]).unwrap();
        let np = f.newton_polygon();
        assert!(np.is_single_segment());
        assert_eq!(np.slopes(), vec![frac(-1, 4)]);
    }

    #[test]
    fn not_eisenstein() {
        let k = q2();
        assert!(EisensteinQuartic::from_ints(&k, [4, 2, 0, 0]).is_err());
        assert!(EisensteinQuartic::from_ints(&k, [2, 1, 0, 0]).is_err());
    }
}
