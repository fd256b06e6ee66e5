use std::sync::OnceLock;

use num_bigint::BigUint;
use proptest::prelude::*;

use quartic_mass::counts::{count, CountTable};
use quartic_mass::padic::{
    hecke_disc, hilbert_symbol, is_square, square_class, EisensteinQuartic, FieldSpec, HeckeDisc, LocalElement,
    LocalField, NewtonPolygon,
};
use quartic_mass::residue::{cubic_image_size, quad_root_count, ResidueField};
use quartic_mass::{FieldParams, GroupTag, MinusOneClass};

fn q2() -> &'static LocalField {
    static K: OnceLock<LocalField> = OnceLock::new();
    K.get_or_init(LocalField::q2)
}

fn u2() -> &'static LocalField {
    static K: OnceLock<LocalField> = OnceLock::new();
    K.get_or_init(|| LocalField::unramified(2))
}

fn sqrt2() -> &'static LocalField {
    static K: OnceLock<LocalField> = OnceLock::new();
    K.get_or_init(|| FieldSpec::over_q2(&[0, -2]).build().unwrap())
}

fn fields() -> [&'static LocalField; 3] {
    [q2(), u2(), sqrt2()]
}

/// An element `pi^v * (sum of digit lifts)` with `n` random digits.
fn element(k: &LocalField, v: u32, digits: &[u64]) -> LocalElement {
    let res = k.residue_field();
    let mut x = k.zero();
    for (j, d) in digits.iter().enumerate() {
        x = x.add(&k.lift(d % res.q()).mul_pi(j as u32));
    }
    x.mul_pi(v)
}

fn unit(k: &LocalField, digits: &[u64]) -> LocalElement {
    let q = k.residue_field().q();
    let mut d = digits.to_vec();
    d[0] = 1 + d[0] % (q - 1);
    element(k, 0, &d)
}

fn agree(a: &LocalElement, b: &LocalElement) -> bool {
    a.congruent(b, a.precision().min(b.precision())) == Some(true)
}

fn naive_mul(a: u64, b: u64, modulus: u64, f: u32) -> u64 {
    let mut r = 0u64;
    for i in 0..f {
        if b >> i & 1 == 1 {
            r ^= a << i;
        }
    }
    for i in (f..2 * f).rev() {
        if r >> i & 1 == 1 {
            r ^= modulus << (i - f);
        }
    }
    r
}

fn digits() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(any::<u64>(), 1..8)
}

#[test]
fn quad_root_count_matches_exhaustion() {
    for f in 1..=4 {
        let k = ResidueField::new(f);
        for a in k.units() {
            for b in k.elements() {
                for c in k.elements() {
                    let n = k.roots(&[c, b, a]).len() as u8;
                    assert_eq!(quad_root_count(&k, a, b, c).unwrap(), n, "f={f} {a} {b} {c}");
                }
            }
        }
    }
}

#[test]
fn cubic_image_size_matches_exhaustion() {
    for f in 1..=4 {
        let k = ResidueField::new(f);
        for lambda in k.elements() {
            for mu in k.units() {
                let image: std::collections::BTreeSet<_> =
                    k.elements().map(|c| k.mul(lambda, c) ^ k.mul(mu, k.pow(c, 3))).collect();
                assert_eq!(cubic_image_size(lambda != 0, f), image.len() as u64, "f={f} lambda={lambda} mu={mu}");
            }
        }
    }
}

#[test]
fn hilbert_symbol_is_symmetric_and_bimultiplicative_on_reps() {
    for k in [q2(), sqrt2()] {
        let reps = quartic_mass::padic::square_class_reps(k).unwrap();
        for a in &reps {
            for b in &reps {
                let h = hilbert_symbol(a, b).unwrap();
                assert_eq!(h, hilbert_symbol(b, a).unwrap());
                for c in reps.iter().step_by(3) {
                    let left = hilbert_symbol(&a.mul(c), b).unwrap();
                    assert_eq!(left, h * hilbert_symbol(c, b).unwrap());
                }
            }
            assert_eq!(hilbert_symbol(a, &a.neg()).unwrap(), 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residue_tables_agree_with_carryless_product(f in 1u32..=12, a in any::<u64>(), b in any::<u64>()) {
        let k = ResidueField::new(f);
        let (a, b) = (a % k.q(), b % k.q());
        prop_assert_eq!(k.mul(a, b), naive_mul(a, b, k.modulus(), f));
        if a != 0 {
            prop_assert_eq!(k.pow(a, k.q() - 1), 1);
        }
    }

    #[test]
    fn ring_axioms(which in 0usize..3, x in digits(), y in digits(), z in digits()) {
        let k = fields()[which];
        let (a, b, c) = (element(k, 0, &x), element(k, 1, &y), element(k, 0, &z));
        prop_assert!(agree(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c))));
        prop_assert!(agree(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))));
        prop_assert!(agree(&a.add(&b).sub(&b), &a));
        prop_assert!(agree(&a.mul(&b), &b.mul(&a)));
    }

    #[test]
    fn valuation_is_additive(which in 0usize..3, v in 0u32..6, w in 0u32..6, x in digits(), y in digits()) {
        let k = fields()[which];
        let (a, b) = (unit(k, &x).mul_pi(v), unit(k, &y).mul_pi(w));
        prop_assert_eq!(a.mul(&b).valuation(), Some(v + w));
        let u = unit(k, &y);
        prop_assert!(agree(&a.mul(&u).div(&u).unwrap(), &a));
        prop_assert_eq!(a.mul(&b).div_pi(w).unwrap().valuation(), Some(v));
    }

    #[test]
    fn unit_inverse(which in 0usize..3, x in digits()) {
        let k = fields()[which];
        let u = unit(k, &x);
        prop_assert_eq!(u.mul(&u.inv().unwrap()).congruent(&k.one(), k.precision() - 1), Some(true));
    }

    #[test]
    fn square_classes_are_a_homomorphism(which in 0usize..3, v in 0u32..4, w in 0u32..4, x in digits(), y in digits()) {
        let k = fields()[which];
        let (a, b) = (unit(k, &x).mul_pi(v), unit(k, &y).mul_pi(w));
        prop_assert_eq!(square_class(&a.mul(&b)).unwrap(), square_class(&a).unwrap() ^ square_class(&b).unwrap());
        prop_assert_eq!(square_class(&a.mul(&b.square())).unwrap(), square_class(&a).unwrap());
        prop_assert!(is_square(&a.square()).unwrap());
    }

    #[test]
    fn hilbert_symbol_properties(which in 0usize..3, x in digits(), y in digits(), z in digits(), v in 0u32..2) {
        let k = fields()[which];
        let (a, b, c) = (unit(k, &x).mul_pi(v), unit(k, &y), unit(k, &z).mul_pi(1));
        let ab = hilbert_symbol(&a, &b).unwrap();
        prop_assert_eq!(ab, hilbert_symbol(&b, &a).unwrap());
        prop_assert_eq!(hilbert_symbol(&a, &b.mul(&c)).unwrap(), ab * hilbert_symbol(&a, &c).unwrap());
        prop_assert_eq!(hilbert_symbol(&a, &a.square()).unwrap(), 1);
    }

    #[test]
    fn hecke_disc_is_a_class_invariant(which in 0usize..3, x in digits(), y in digits(), v in 0u32..2) {
        let k = fields()[which];
        let (a, s) = (unit(k, &x).mul_pi(v), unit(k, &y));
        let d = hecke_disc(&a).unwrap();
        prop_assert_eq!(hecke_disc(&a.mul(&s.square())).unwrap(), d);
        if v == 1 {
            prop_assert_eq!(d, HeckeDisc::Ramified(2 * k.e() + 1));
        }
    }

    #[test]
    fn eisenstein_newton_polygon(a0 in digits(), a1 in digits(), a2 in digits(), a3 in digits()) {
        let k = q2();
        let f = EisensteinQuartic::new([
            unit(k, &a0).mul_pi(1),
            element(k, 1, &a1),
            element(k, 1, &a2),
            element(k, 1, &a3),
        ]).unwrap();
        let np = f.newton_polygon();
        prop_assert!(np.is_single_segment());
        prop_assert_eq!(np.slopes(), vec![quartic_mass::exact::frac(-1, 4)]);
        prop_assert_eq!(np.total_length(), quartic_mass::exact::int(4));
    }

    #[test]
    fn lower_hull_slopes_increase(pts in prop::collection::vec(0u32..20, 2..8)) {
        let points: Vec<(u32, u32)> = pts.iter().enumerate().map(|(i, &v)| (i as u32, v)).collect();
        let np = NewtonPolygon::lower_hull(&points);
        let s = np.slopes();
        prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(np.total_length(), quartic_mass::exact::int(pts.len() as i64 - 1));
    }

    #[test]
    fn classification_ignores_precision(a0 in 0u64..64, a1 in 0u64..64, a2 in 0u64..64, a3 in 0u64..64) {
        let k = q2();
        let coeffs = [2 * (2 * a0 as i64 + 1), 2 * a1 as i64, 2 * a2 as i64, 2 * a3 as i64];
        let f = EisensteinQuartic::from_ints(k, coeffs).unwrap();
        let big = k.doubled().unwrap();
        let g = EisensteinQuartic::from_ints(&big, coeffs).unwrap();
        let (m, grp) = f.classify().unwrap();
        prop_assert_eq!((m, grp), g.classify().unwrap());
        prop_assert!((4..=11).contains(&m));
        prop_assert_eq!(m, f.ore_valuation().unwrap());
        prop_assert_eq!(f.count_roots_in_stem().unwrap() == 1, f.is_one_aut().unwrap());
        prop_assert!(count(&FieldParams::q2(), m as i64, grp).unwrap() > BigUint::from(0u8));
    }

    #[test]
    fn count_tables_round_trip(idx in 0usize..1040, lo in 0i64..20, span in 0i64..40) {
        let all = FieldParams::sweep(20, 8);
        let p = all[idx % all.len()];
        let t = CountTable::build(&p, lo, lo + span, &GroupTag::ALL, true).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        prop_assert_eq!(&CountTable::read_csv(buf.as_slice()).unwrap(), &t);
        prop_assert_eq!(&CountTable::from_json(&t.to_json()).unwrap(), &t);
    }

    #[test]
    fn params_validation(e in 1u32..30, f in 1u32..10, d in 0u32..40, c in 0usize..3) {
        let cls = MinusOneClass::ALL[c];
        let ok = FieldParams::new(e, f, d, cls).is_ok();
        let cap = 2 * e.div_ceil(2);
        let want = d % 2 == 0 && d <= cap && match cls {
            MinusOneClass::RamifiedQuadratic => d >= 2,
            _ => d == 0,
        };
        prop_assert_eq!(ok, want);
    }
}
