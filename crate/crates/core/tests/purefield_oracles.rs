use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use puremono::arith::{count_irreducibles, nu_stable, padic_valuation};
use puremono::fppoly::{binomial_mod_p, factor, PrimeField};
use puremono::ore::{ore_split, primes_of_degree};
use puremono::polygon::{phi_expand, principal_polygon};
use puremono::purefield::{
    analyze, binomial_discriminant, binomial_irreducible, closed_form_polygon, construct_generator,
    corollary_checks, recheck_witness, theorem_general_test, AnalyzeOptions, Family, Outcome,
    WitnessSource,
};
use puremono::IntPoly;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Instances with `p` odd, `p` not dividing `u m`, and `x^n - m` irreducible.
fn closed_form_instance() -> impl Strategy<Value = (u64, u32, u64, i64)> {
    (prop::sample::select(vec![3u64, 5, 7]), 1u32..=3, 1u64..=6, -50i64..=50)
        .prop_filter("p must not divide u m, |m| >= 2", |&(p, _, u, m)| {
            u % p != 0 && m % p as i64 != 0 && m.abs() >= 2
        })
        .prop_filter("keep degrees modest", |&(p, r, u, _)| u * p.pow(r) <= 700)
        .prop_filter("irreducible", |&(p, r, u, m)| {
            binomial_irreducible(u * p.pow(r), &big(m)).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn closed_form_hull_matches_direct_polygon((p, r, u, m) in closed_form_instance()) {
        let n = u * p.pow(r);
        let m = big(m);
        let fbar = binomial_mod_p(p, u as usize, &m).unwrap();
        let f = IntPoly::binomial(n as usize, &m);
        for (phi_bar, _) in factor(&fbar, 0).unwrap().iter() {
            let phi = IntPoly::lift(phi_bar);
            let data = closed_form_polygon(n, &m, p, &phi).unwrap();
            let direct = principal_polygon(&phi_expand(&f, &phi).unwrap(), p).unwrap();
            prop_assert_eq!(
                &data.polygon().vertices, &direct.vertices,
                "n={} m={} p={} phi={} phi|T={}", n, m, p, phi, data.phi_divides_t
            );
            // A0 is the zeroth phi-adic coefficient
            prop_assert_eq!(&data.a0, &f.div_rem_monic(&phi).unwrap().1);
            if let Some(h) = &data.h {
                let q = p.pow(r) as u32;
                let base = &IntPoly::constant(m.clone()) + &data.t.scale(&big(p as i64));
                let rhs = &base.pow(q) - &IntPoly::constant(m.pow(q));
                prop_assert_eq!(h.scale(&BigInt::from(p).pow(r + 1)), rhs);
            }
        }
    }
}

#[test]
fn closed_form_proof_shapes() {
    // nu >= r + 1: vertices (0, nu0), (1, r), (p, r-1), ..., (p^r, 0)
    let m = big(82); // nu_3(82^2 - 1) = 4
    let data = closed_form_polygon(27, &m, 3, &IntPoly::from_i64s(&[-1, 1])).unwrap();
    let v: Vec<_> = data.polygon().vertices.iter().map(|p| (p.x, p.y)).collect();
    assert_eq!(v[1..], [(1, 3), (3, 2), (9, 1), (27, 0)]);
    assert_eq!(data.polygon().sides.len(), 4);
    // r >= nu: nu sides ending (p^(r-nu+1), nu-1), ..., (p^r, 0)
    let m = big(2); // nu_3(3) = 1
    let data = closed_form_polygon(27, &m, 3, &IntPoly::from_i64s(&[1, 1])).unwrap();
    let v: Vec<_> = data.polygon().vertices.iter().map(|p| (p.x, p.y)).collect();
    assert_eq!(v, vec![(0, 1), (27, 0)]);
}

#[test]
fn closed_form_rejects_bad_input() {
    let phi = IntPoly::from_i64s(&[-1, 1]);
    assert!(closed_form_polygon(9, &big(7), 2, &phi).is_err());
    assert!(closed_form_polygon(10, &big(7), 3, &phi).is_err());
    assert!(closed_form_polygon(9, &big(6), 3, &phi).is_err());
    // x - 2 does not divide x - 7 mod 3
    assert!(closed_form_polygon(9, &big(7), 3, &IntPoly::from_i64s(&[-2, 1])).is_err());
}

#[test]
fn general_test_firings_are_confirmed_by_splitting() {
    let opts = AnalyzeOptions::default();
    let mut fired = 0;
    for n in 3u64..=50 {
        for m in -60i64..=60 {
            if m.abs() < 2 || !binomial_irreducible(n, &big(m)).unwrap() {
                continue;
            }
            let Some(v) = theorem_general_test(n, &big(m), &opts).unwrap().fired().cloned() else {
                continue;
            };
            fired += 1;
            let w = v.witness().unwrap();
            let WitnessSource::BinomialCount { multiplier, binomial_factors, .. } = w.source else {
                panic!("counting witness expected");
            };
            let split = ore_split(&IntPoly::binomial(n as usize, &big(m)), w.p, 0).unwrap();
            assert!(split.exact, "n={n} m={m} p={}", w.p);
            let l = primes_of_degree(&split, w.d as u64).unwrap();
            assert!(l >= multiplier as u64 * binomial_factors, "n={n} m={m}");
            assert!(recheck_witness(n, &big(m), w, &opts).unwrap());
        }
    }
    assert!(fired > 10, "only {fired} firings");
}

#[test]
fn x27_minus_82_has_four_degree_one_primes_above_3() {
    let split = ore_split(&IntPoly::binomial(27, &big(82)), 3, 0).unwrap();
    assert!(split.exact);
    assert!(primes_of_degree(&split, 1).unwrap() >= 4);
    assert!(count_irreducibles(3, 1).unwrap() == 3u32.into());
}

#[test]
fn generator_soundness() {
    let cases: &[(u64, i64, u64)] = &[
        (6, 30, 5),
        (4, 6, 3),
        (4, 10, 3),
        (6, 6, 5),
        (6, -6, 7),
        (10, 10, 3),
        (9, 21, 2),
        (12, 66, 5),
        (5, 5, 2),
        (8, 14, 3),
    ];
    for &(n, a, u) in cases {
        let v = construct_generator(n, &big(a), u, 0).unwrap();
        let Outcome::Monogenic(c) = &v.outcome else { panic!() };
        let g = IntPoly::binomial(n as usize, &big(a));
        for q in puremono::arith::factorize(&big(a), 0).unwrap().small_primes() {
            assert_eq!(ore_split(&g, q, 0).unwrap().index_valuation.value, 0);
        }
        let disc = binomial_discriminant(n, &big(a)).unwrap();
        assert_eq!(disc.abs(), BigInt::from(n).pow(n as u32) * big(a).abs().pow(n as u32 - 1));
        assert_eq!(disc, g.discriminant());
        // u t - n s = 1 and theta^n = a
        assert_eq!(u * c.t - n * c.s, 1);
        // alpha itself has index valuation (n-1)(u-1)/2 at every p | a
        let f = IntPoly::binomial(n as usize, &big(a).pow(u as u32));
        let p = puremono::arith::factorize(&big(a), 0).unwrap().small_primes()[0];
        let split = ore_split(&f, p, 0).unwrap();
        assert_eq!(split.index_valuation.value, c.alpha_index_bound);
        assert!(c.alpha_index_bound >= 2 || (n - 1) * (u - 1) / 2 < 2);
        // analyze detects the same decomposition
        let w = analyze(n, &big(a).pow(u as u32), &AnalyzeOptions::default()).unwrap();
        assert!(w.is_monogenic(), "n={n} a={a} u={u}");
    }
}

#[test]
fn corollary_families() {
    let opts = AnalyzeOptions::default();
    // five-seven, second clause: r >= 5, m^4 = 1 mod 5^6
    let m = big(5).pow(6) + 1;
    let rep = corollary_checks(Family::FiveSeven, 5, 1, &m, &opts).unwrap();
    assert!(rep.clauses[1] && rep.theorem_fires && rep.agreement);
    // five-eleven, second clause: r >= 6
    let rep = corollary_checks(Family::FiveEleven, 6, 1, &m, &opts).unwrap();
    assert!(rep.clauses[1] && rep.theorem_fires && rep.agreement);
    // three-eleven, first clause: s >= 11, m^10 = 1 mod 11^12
    let m = big(11).pow(12) + 1;
    let rep = corollary_checks(Family::ThreeEleven, 1, 11, &m, &opts).unwrap();
    assert!(rep.clauses[0] && rep.theorem_fires && rep.agreement);
    // hypothesis false: no claim either way
    let rep = corollary_checks(Family::FiveSeven, 1, 1, &big(2), &opts).unwrap();
    assert!(!rep.hypothesis && rep.agreement);
    // every clause-2 instance with nu_3 >= 4 and r >= 3 agrees
    let m = big(80); // 80^2 - 1 = 6399 = 81 * 79
    assert!(nu_stable(3, &m, 64).unwrap().lower_bound() >= 4);
    let rep = corollary_checks(Family::ThreeEleven, 3, 1, &m, &opts).unwrap();
    assert!(rep.clauses[1] && rep.theorem_fires && rep.agreement);
}

#[test]
fn nu_feeds_the_multiplier() {
    let n = 5 * 7u64.pow(7);
    let m = big(7).pow(8) - 1;
    let v = theorem_general_test(n, &m, &AnalyzeOptions::default()).unwrap();
    let w = v.fired().unwrap().witness().unwrap();
    let WitnessSource::BinomialCount { nu, multiplier, r, u, .. } = w.source else { panic!() };
    assert_eq!(nu.lower_bound(), 8);
    assert_eq!((multiplier, r, u), (8, 7, 5));
    assert_eq!(padic_valuation(7, &(m.pow(6) - 1u32)).unwrap(), 8);
    let field = PrimeField::new(7).unwrap();
    assert_eq!(field.modulus(), 7);
}
