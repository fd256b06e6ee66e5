//! Square classes, Hecke discriminants and the Hilbert symbol.
//!
//! A unit is reduced greedily: even-level defects `1 + c pi^j` are removed
//! by squares, odd-level ones by the fixed basis elements `1 + z^k pi^j`,
//! and what is left at level `2e` is either a square or the unramified class.
//! The basis coordinates of an element form a bit vector:
//!
//! * bit 0: parity of the valuation;
//! * bit `1 + f (j-1)/2 + k`: basis element `1 + z^k pi^j` for odd `j < 2e`;
//! * bit `1 + e f`: the unramified class `1 + 4 t` with `Tr(t) = 1`.

use super::field::{LocalElement, LocalField};
use super::quad::QuadExt;
use super::PadicError;

/// Discriminant exponent of `K(sqrt(alpha))/K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeckeDisc {
    Trivial,
    Unramified,
    Ramified(u32),
}

pub(crate) struct Reduction {
    /// Unit-part coordinates, already shifted past the valuation bit.
    pub coords: u64,
    /// First odd defect level `j` with the reduced unit `x` and `s` such that
    /// the input equals `x / s^2` at that point.
    pub first_odd: Option<(u32, LocalElement, LocalElement)>,
}

pub(crate) fn unr_bit(k: &LocalField) -> u64 {
    1u64 << (1 + k.e() * k.f())
}

fn basis_bits(k: &LocalField) -> u32 {
    k.e() * k.f() + 2
}

fn lead_of_four(k: &LocalField) -> u64 {
    k.int(4).lead().expect("4 is nonzero").1
}

pub(crate) fn reduce_unit(u: &LocalElement) -> Result<Reduction, PadicError> {
    let k = u.field().clone();
    let res = k.residue_field();
    let e = k.e();
    let f = k.f();
    if u.precision() < 2 * e + 1 {
        return Err(PadicError::PrecisionExhausted(format!(
            "square test needs {} digits, have {}",
            2 * e + 1,
            u.precision()
        )));
    }
    assert!(u.is_unit(), "reduce_unit on a non-unit");
    let one = k.one();
    let mut x = u.clone();
    let mut s_inv = k.one();
    let r = x.residue();
    if r != 1 {
        let l = k.lift(res.inv(res.sqrt(r)));
        x = x.mul(&l.square());
        s_inv = l;
    }
    let mut coords = 0u64;
    let mut first_odd = None;
    loop {
        let t = x.sub(&one);
        let Some((v, c)) = t.lead() else { break };
        if v >= 2 * e {
            if v == 2 * e {
                let beta = res.div(c, lead_of_four(&k));
                if res.trace(beta) == 1 {
                    coords |= unr_bit(&k);
                }
            }
            break;
        }
        if v % 2 == 0 {
            let y = one.add(&k.lift(res.sqrt(c)).mul_pi(v / 2));
            let yi = y.inv()?;
            x = x.mul(&yi.square());
            s_inv = s_inv.mul(&yi);
        } else {
            if first_odd.is_none() {
                first_odd = Some((v, x.clone(), s_inv.clone()));
            }
            for bit in 0..f {
                if c >> bit & 1 == 1 {
                    let b = one.add(&k.lift(1 << bit).mul_pi(v));
                    x = x.mul(&b.inv()?);
                    coords |= 1u64 << (1 + f * (v - 1) / 2 + bit);
                }
            }
        }
    }
    if x.precision() < 2 * e + 1 {
        return Err(PadicError::PrecisionExhausted("square test lost precision".into()));
    }
    Ok(Reduction { coords, first_odd })
}

/// Coordinates of the square class of a nonzero element.
pub fn square_class(a: &LocalElement) -> Result<u64, PadicError> {
    let (u, v) = a.split_unit()?;
    Ok(reduce_unit(&u)?.coords | (v as u64 & 1))
}

pub fn is_square(a: &LocalElement) -> Result<bool, PadicError> {
    Ok(square_class(a)? == 0)
}

/// Discriminant exponent of `K(sqrt(alpha))/K` by Hecke's criterion.
pub fn hecke_disc(alpha: &LocalElement) -> Result<HeckeDisc, PadicError> {
    let k = alpha.field();
    let (u, v) = alpha.split_unit()?;
    if v % 2 == 1 {
        return Ok(HeckeDisc::Ramified(2 * k.e() + 1));
    }
    let red = reduce_unit(&u)?;
    Ok(match red.first_odd {
        Some((j, _, _)) => HeckeDisc::Ramified(2 * k.e() + 1 - j),
        None if red.coords != 0 => HeckeDisc::Unramified,
        None => HeckeDisc::Trivial,
    })
}

/// The basis elements of `K^x / K^x2` in coordinate order.
pub fn square_class_basis(k: &LocalField) -> Vec<LocalElement> {
    let (e, f) = (k.e(), k.f());
    let one = k.one();
    let mut out = vec![k.uniformizer()];
    for j in (1..2 * e).step_by(2) {
        for bit in 0..f {
            out.push(one.add(&k.lift(1 << bit).mul_pi(j)));
        }
    }
    let t = k.residue_field().trace_one();
    out.push(one.add(&k.lift(t).mul(&k.int(4))));
    out
}

/// One representative per square class, indexed by coordinates.
pub fn square_class_reps(k: &LocalField) -> Result<Vec<LocalElement>, PadicError> {
    let bits = basis_bits(k);
    if bits > 20 {
        return Err(PadicError::BudgetExceeded(format!("2^{bits} square classes")));
    }
    let basis = square_class_basis(k);
    let mut reps: Vec<LocalElement> = Vec::with_capacity(1 << bits);
    reps.push(k.one());
    for (i, b) in basis.iter().enumerate() {
        let half = reps.len();
        debug_assert_eq!(half, 1 << i);
        for j in 0..half {
            let r = reps[j].mul(b);
            reps.push(r);
        }
    }
    Ok(reps)
}

fn in_span(gens: &[u64], target: u64) -> bool {
    let mut basis: Vec<u64> = Vec::new();
    for &g in gens {
        let mut x = g;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let mut t = target;
    for &b in &basis {
        t = t.min(t ^ b);
    }
    t == 0
}

/// `+1` when `b` is a norm from `K(sqrt(a))`, else `-1`.
pub fn hilbert_symbol(a: &LocalElement, b: &LocalElement) -> Result<i8, PadicError> {
    let k = a.field();
    let ca = square_class(a)?;
    let cb = square_class(b)?;
    let sign = |norm: bool| if norm { 1 } else { -1 };
    if ca == 0 || cb == 0 {
        return Ok(1);
    }
    let unr = unr_bit(k);
    if ca == unr {
        return Ok(sign(cb & 1 == 0));
    }
    if cb == unr {
        return Ok(sign(ca & 1 == 0));
    }
    let ext = QuadExt::new(a)?;
    let big = ext.field()?;
    let mut gens = Vec::new();
    for g in square_class_basis(big) {
        gens.push(square_class(&ext.norm_e(&g))?);
    }
    Ok(sign(in_span(&gens, cb)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2() -> LocalField {
        LocalField::q2()
    }

    #[test]
    fn squares_in_q2() {
        let k = q2();
        assert!(is_square(&k.int(17)).unwrap());
        assert!(!is_square(&k.int(5)).unwrap());
        assert!(!is_square(&k.int(2)).unwrap());
        assert!(is_square(&k.int(4 * 9)).unwrap());
        // exhaustive: odd n is a square iff n = 1 mod 8
        for n in (1..200).step_by(2) {
            assert_eq!(is_square(&k.int(n)).unwrap(), n % 8 == 1, "{n}");
            assert_eq!(is_square(&k.int(-n)).unwrap(), (-n).rem_euclid(8) == 1, "{}", -n);
        }
    }

    #[test]
    fn hecke_in_q2() {
        let k = q2();
        assert_eq!(hecke_disc(&k.int(3)).unwrap(), HeckeDisc::Ramified(2));
        assert_eq!(hecke_disc(&k.int(-1)).unwrap(), HeckeDisc::Ramified(2));
        assert_eq!(hecke_disc(&k.int(5)).unwrap(), HeckeDisc::Unramified);
        assert_eq!(hecke_disc(&k.int(2)).unwrap(), HeckeDisc::Ramified(3));
        assert_eq!(hecke_disc(&k.int(-10)).unwrap(), HeckeDisc::Ramified(3));
        assert_eq!(hecke_disc(&k.int(17)).unwrap(), HeckeDisc::Trivial);
    }

    #[test]
    fn reps_of_q2() {
        let k = q2();
        let reps = square_class_reps(&k).unwrap();
        assert_eq!(reps.len(), 8);
        for (i, r) in reps.iter().enumerate() {
            assert_eq!(square_class(r).unwrap(), i as u64);
        }
        // classical representatives land in distinct classes
        let mut seen: Vec<u64> = [1, -1, 2, -2, 5, -5, 10, -10].iter().map(|&n| square_class(&k.int(n)).unwrap()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 8);
        assert_eq!(square_class(&k.int(5)).unwrap(), unr_bit(&k));
    }

    fn serre_hilbert(a: i64, b: i64) -> i8 {
        // (a, b)_2 with a = 2^alpha u, b = 2^beta v
        let split = |x: i64| {
            let v = x.trailing_zeros() as i64;
            (v, x >> v)
        };
        let (al, u) = split(a);
        let (be, v) = split(b);
        let eps = |x: i64| ((x - 1) / 2).rem_euclid(2);
        let omega = |x: i64| ((x * x - 1) / 8).rem_euclid(2);
        let s = eps(u) * eps(v) + al * omega(v) + be * omega(u);
        if s % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn hilbert_matches_closed_form_on_q2() {
        let k = q2();
        let vals = [1i64, -1, 2, -2, 3, -3, 5, -5, 6, -6, 10, -10, 7, 14, 12];
        for &a in &vals {
            for &b in &vals {
                assert_eq!(hilbert_symbol(&k.int(a), &k.int(b)).unwrap(), serre_hilbert(a, b), "({a},{b})");
            }
        }
        assert_eq!(hilbert_symbol(&k.int(2), &k.int(-1)).unwrap(), 1);
        assert_eq!(hilbert_symbol(&k.int(-1), &k.int(-1)).unwrap(), -1);
    }

    #[test]
    fn sixteen_classes_for_small_bases() {
        let u2 = LocalField::unramified(2);
        assert_eq!(square_class_reps(&u2).unwrap().len(), 16);
        for (i, r) in square_class_reps(&u2).unwrap().iter().enumerate() {
            assert_eq!(square_class(r).unwrap(), i as u64);
        }
    }
}
