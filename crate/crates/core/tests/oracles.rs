use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;

use quartic_mass::counts::{count, count_tow};
use quartic_mass::exact::{frac, int, qpow, Q};
use quartic_mass::oracle::{
    certified_classes, class_of, cubic_congruence_measure, dedup_counts, density_counts, measure_set, same_stem,
    tower_counts, verify, CoeffClass, Method, Status, VerifyOptions,
};
use quartic_mass::padic::{derive_params, EisensteinQuartic, FieldSpec, LocalField};
use quartic_mass::{FieldParams, GroupTag};

fn ceil_2m_3(m: i64) -> i64 {
    (2 * m + 2) / 3
}

fn t_m_measure(q: u64, m: i64) -> Q {
    qpow(q, -ceil_2m_3(m) - 3) * int(q as i64 - 1) * int(q as i64 - 1)
}

fn one_aut_measure(q: u64, m: i64) -> Q {
    let qq = int(q as i64);
    let bump = if m % 6 == 0 { (int(1) - int(2) * &qq) / (int(3) * &qq) } else { Q::zero() };
    t_m_measure(q, m) * (int(1) + bump)
}

#[test]
fn t_m_and_one_aut_measures_on_q2() {
    let k = LocalField::q2();
    for m in [4u32, 6, 8] {
        let c = m / 4 + 2;
        let tm = measure_set(&k, |f| Ok(f.in_tm(m)), c).unwrap();
        assert_eq!(tm, t_m_measure(2, m as i64), "T_{m}");
        let one = measure_set(&k, |f| Ok(f.disc_valuation()? == m && f.is_one_aut()?), c).unwrap();
        assert_eq!(one, one_aut_measure(2, m as i64), "P_{m}");
    }
}

#[test]
fn t_m_measure_over_f4() {
    let k = LocalField::unramified(2);
    let tm = measure_set(&k, |f| Ok(f.in_tm(4)), 3).unwrap();
    assert_eq!(tm, t_m_measure(4, 4));
}

#[test]
fn cubic_congruence_density() {
    for f in [1, 2] {
        let k = LocalField::unramified(f);
        let q = k.q() as i64;
        for (a, b) in [(1u32, 1u32), (1, 2), (2, 2)] {
            let want = frac(1, 3) * qpow(q as u64, -(a as i64) - 2 * b as i64 - 4) * int(q - 1) * int(q - 1) * int(2 * q - 1);
            assert_eq!(cubic_congruence_measure(&k, a, b).unwrap(), want, "f={f} a={a} b={b}");
        }
    }
}

#[test]
fn tower_pairs_match_tow_counts() {
    let k = LocalField::q2();
    let t = tower_counts(&k).unwrap();
    assert_eq!(t.pairs_at(11), 32);
    let p = FieldParams::q2();
    for m in 0..=12 {
        assert_eq!(BigUint::from(t.pairs_at(m)), count_tow(&p, m as i64).unwrap(), "m={m}");
    }
}

#[test]
fn tower_oracle_over_quadratic_base() {
    let k = FieldSpec::over_q2(&[0, 2]).build().unwrap();
    let p = derive_params(&k).unwrap();
    let t = tower_counts(&k).unwrap();
    for m in 0..=(8 * p.e + 3) {
        for g in [GroupTag::V4, GroupTag::C4, GroupTag::D4] {
            let got = t.counts.get(&(m, g)).cloned().unwrap_or_default();
            assert_eq!(got, count(&p, m as i64, g).unwrap(), "m={m} {g}");
        }
        assert_eq!(BigUint::from(t.pairs_at(m)), count_tow(&p, m as i64).unwrap());
    }
}

#[test]
fn density_matches_formulas_on_q2() {
    let k = LocalField::q2();
    let r = density_counts(&k, 11).unwrap();
    let p = FieldParams::q2();
    for m in 0..=11u32 {
        for g in GroupTag::ALL {
            let got = r.counts.get(&(m, g)).cloned().unwrap_or_default();
            assert_eq!(got, count(&p, m as i64, g).unwrap(), "m={m} {g}");
        }
    }
    let total: Q = r.measures.values().sum();
    assert_eq!(total, frac(1, 32), "all Eisenstein quartics over Q2 have measure (q-1) q^-5");
}

#[test]
fn f4_density_has_five_a4_at_six() {
    let spec = FieldSpec::unramified(2);
    let report = verify(&spec, 8, &BTreeSet::from([Method::Density]), &VerifyOptions::default()).unwrap();
    assert!(report.pass());
    let row = report.rows.iter().find(|r| r.m == 6 && r.group == GroupTag::A4).unwrap();
    assert_eq!(row.oracle, BigUint::from(5u8));
}

#[test]
fn dedup_small() {
    let k = LocalField::q2();
    let d = dedup_counts(&k, 6, 20_000).unwrap();
    let p = FieldParams::q2();
    for m in 0..=6u32 {
        for g in GroupTag::ALL {
            let got = d.get(&(m, g)).cloned().unwrap_or_default();
            assert_eq!(got, count(&p, m as i64, g).unwrap(), "m={m} {g}");
        }
    }
    assert!(dedup_counts(&k, 11, 3).unwrap_err().is_resource());
}

#[test]
fn distinct_witnesses_are_distinct_fields() {
    let k = LocalField::q2();
    let d4 = EisensteinQuartic::from_ints(&k, [2, 0, 0, 0]).unwrap();
    let c4 = EisensteinQuartic::from_ints(&k, [2, 0, -4, 0]).unwrap();
    assert!(!same_stem(&d4, &c4).unwrap());
    assert!(same_stem(&d4, &d4).unwrap());
    let twin = EisensteinQuartic::from_ints(&k, [2, 0, 0, 16]).unwrap();
    assert!(same_stem(&d4, &twin).unwrap());
}

#[test]
fn refining_a_certified_class_keeps_its_verdict() {
    let k = LocalField::q2();
    let classes = certified_classes(&k, 11).unwrap();
    for cc in classes.iter().step_by(7) {
        for i in 0..4 {
            for sub in cc.class.refine(i) {
                let q = sub.quartic();
                assert_eq!(q.classify().unwrap(), (cc.m, cc.group), "class {:?}", cc.class.c);
            }
        }
    }
}

#[test]
fn class_lookup_finds_the_covering_class() {
    let k = LocalField::q2();
    let f = EisensteinQuartic::from_ints(&k, [2, 2, 0, 0]).unwrap();
    let cl: CoeffClass = class_of(&f, 11).unwrap();
    assert_eq!(cl.quartic().classify().unwrap(), (4, GroupTag::S4));
    let big = EisensteinQuartic::from_ints(&k, [2, 0, 0, 0]).unwrap();
    assert!(class_of(&big, 8).is_none());
}

#[test]
fn verify_report_rows() {
    let spec = FieldSpec::q2();
    let methods = BTreeSet::from([Method::Density, Method::Tower]);
    let report = verify(&spec, 11, &methods, &VerifyOptions::default()).unwrap();
    assert!(report.pass());
    assert_eq!(report.rows.iter().filter(|r| r.method == Method::Density).count(), 10);
    assert!(report
        .rows
        .iter()
        .filter(|r| r.method == Method::Tower)
        .all(|r| matches!(r.group, GroupTag::V4 | GroupTag::C4 | GroupTag::D4)));
    assert!(report.rows.iter().all(|r| r.status == Status::Pass));
    let json = report.to_json();
    assert_eq!(json["pass"], true);
    assert_eq!(json["params"]["d_minus_one"], 2);
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = FieldSpec::q2();
    let opts = VerifyOptions { cache: Some(dir.path().to_path_buf()), dedup_budget: None };
    let methods = BTreeSet::from([Method::Tower]);
    let first = verify(&spec, 11, &methods, &opts).unwrap();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = verify(&spec, 11, &methods, &opts).unwrap();
    assert_eq!(first.rows, second.rows);
}
