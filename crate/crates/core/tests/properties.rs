use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use puremono::arith::{bezout_positive, count_irreducibles, factorize, is_prime_u64, nu_stable, NuValue};
use puremono::fppoly::{
    binomial_mod_p, count_degree_d_factors, factor, is_irreducible, FpPoly, PrimeField,
};
use puremono::ore::{common_index_divisor_of, ore_split, primes_of_degree};
use puremono::polygon::{phi_expand, principal_polygon, residual_polynomial};
use puremono::IntPoly;

const PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

fn monic_poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-30i64..=30, 2..=8).prop_map(|mut c| {
        c.push(1);
        IntPoly::from_i64s(&c)
    })
}

fn direct_valuation(p: u64, v: &BigInt) -> u32 {
    let mut v = v.abs();
    let p = BigInt::from(p);
    let mut k = 0;
    while (&v % &p).is_zero() {
        v /= &p;
        k += 1;
    }
    k
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    #[test]
    fn reconstruction(f in monic_poly(), phi in monic_poly()) {
        let exp = phi_expand(&f, &phi).unwrap();
        prop_assert_eq!(exp.reconstruct(), f);
        let dphi = phi.degree().unwrap();
        prop_assert!(exp.parts().iter().all(|a| a.degree().unwrap_or(0) < dphi));
    }

    #[test]
    fn polygon_laws(f in monic_poly(), p in prop::sample::select(PRIMES.to_vec())) {
        let field = PrimeField::new(p).unwrap();
        let fbar = f.reduce_mod(field);
        for (phi_bar, mult) in factor(&fbar, 1).unwrap().iter() {
            let phi = IntPoly::lift(phi_bar);
            let exp = phi_expand(&f, &phi).unwrap();
            if exp.parts()[0].is_zero() {
                continue; // phi divides f over Z
            }
            let poly = principal_polygon(&exp, p).unwrap();
            // length law
            prop_assert_eq!(poly.length() as usize, *mult);
            for side in &poly.sides {
                prop_assert!(side.length > 0 && side.height > 0);
                prop_assert_eq!(side.degree * side.ramification, side.length);
                // hull dominance, exact integer comparison
                for pt in &poly.cloud {
                    if pt.x >= side.start.x && pt.x <= side.end.x {
                        prop_assert!(side.vertical_offset(*pt) >= 0);
                    }
                }
                // endpoint law
                let res = residual_polynomial(&exp, side, p).unwrap();
                let c = res.coefficients();
                prop_assert!(!c[0].is_zero() && !c.last().unwrap().is_zero());
                prop_assert_eq!(res.degree() as i64, side.degree);
            }
            // slopes strictly increase
            for w in poly.sides.windows(2) {
                prop_assert!(w[0].slope() < w[1].slope());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn nu_stable_matches_direct_power(p in prop::sample::select(vec![3u64, 5, 7, 11, 13]), m in -5000i64..5000) {
        prop_assume!(m % p as i64 != 0);
        let m = BigInt::from(m);
        let direct = direct_valuation(p, &(m.pow((p - 1) as u32) - 1u32));
        prop_assert_eq!(nu_stable(p, &m, 64).unwrap(), NuValue::Exact { value: direct });
        let capped = nu_stable(p, &m, 1).unwrap();
        prop_assert_eq!(capped.lower_bound(), direct.min(1));
    }

    #[test]
    fn factorization_reconstructs(n in prop_oneof![1i64..10_000_000, -10_000_000i64..-1]) {
        let f = factorize(&BigInt::from(n), 3).unwrap();
        prop_assert_eq!(f.product(), BigInt::from(n));
        let primes: Vec<u64> = f.small_primes();
        prop_assert!(primes.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(primes.iter().all(|&p| is_prime_u64(p)));
    }

    #[test]
    fn bezout_solution(u in 1u64..5000, n in 1u64..5000) {
        match bezout_positive(u, n) {
            Ok((t, s)) => {
                prop_assert_eq!(u as i128 * t as i128 - n as i128 * s as i128, 1);
                prop_assert!(t >= 1 && t <= n);
            }
            Err(_) => prop_assert!(num_integer::gcd(u, n) != 1),
        }
    }

    #[test]
    fn root_count_matches_factorization(
        p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]),
        u in 1usize..40,
        m in -100i64..100,
        d in 1u32..6,
    ) {
        let m = BigInt::from(m);
        let f = binomial_mod_p(p, u, &m).unwrap();
        let expected = factor(&f, 0).unwrap().iter().filter(|(g, _)| g.degree() == Some(d as usize)).count();
        prop_assert_eq!(count_degree_d_factors(p, d, u as u64, &m).unwrap(), expected as u64);
    }

    #[test]
    fn fp_factorization(p in prop::sample::select(PRIMES.to_vec()), c in prop::collection::vec(0i64..100, 1..12), seed in 0u64..1000) {
        let field = PrimeField::new(p).unwrap();
        let f = FpPoly::from_i64s(field, &c);
        prop_assume!(!f.is_zero());
        let fac = factor(&f, seed).unwrap();
        prop_assert_eq!(fac.product(&field), f.monic());
        prop_assert!(fac.iter().all(|(g, _)| is_irreducible(g) && g.is_monic()));
        prop_assert_eq!(factor(&f, seed + 1).unwrap(), fac);
    }

    #[test]
    fn ore_identities(f in monic_poly(), p in prop::sample::select(PRIMES.to_vec())) {
        // irreducible over Q is not needed for the local identities checked here,
        // but a repeated factor over Z would break them
        let df = f.derivative();
        prop_assume!(!f.resultant(&df).is_zero());
        let split = match ore_split(&f, p, 5) {
            Ok(s) => s,
            // a lifted factor divides f over Z: f is reducible, outside the contract
            Err(puremono::Error::Precondition(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let again = ore_split(&f, p, 5).unwrap();
        prop_assert_eq!(&split, &again);
        if split.exact {
            prop_assert_eq!(split.degree_sum(), f.degree().unwrap() as u64);
            prop_assert!(split.slots.iter().all(|s| s.multiplicity == 1));
            if common_index_divisor_of(&split).unwrap().is_some() {
                prop_assert!(split.index_valuation.value >= 1);
            }
        }
        let disc = f.discriminant();
        if !(disc.clone() % BigInt::from(p)).is_zero() {
            // unramified: e = 1 everywhere, f's are the factor degrees
            prop_assert!(split.exact);
            let mut fs: Vec<u64> = split.slots.iter().map(|s| s.f).collect();
            let mut degs: Vec<u64> = factor(&f.reduce_mod(PrimeField::new(p).unwrap()), 0).unwrap()
                .iter().map(|(g, _)| g.degree().unwrap() as u64).collect();
            fs.sort();
            degs.sort();
            prop_assert!(split.slots.iter().all(|s| s.e == 1));
            prop_assert_eq!(fs, degs);
            prop_assert_eq!(split.index_valuation.value, 0);
        }
    }
}

#[test]
fn necklace_counts_match_enumeration() {
    for p in [2u64, 3, 5] {
        let field = PrimeField::new(p).unwrap();
        for d in 1u32..=4 {
            if p.pow(d) > 700 {
                continue;
            }
            let mut count = 0u64;
            for code in 0..p.pow(d) {
                let mut c: Vec<i64> = (0..d).map(|i| ((code / p.pow(i)) % p) as i64).collect();
                c.push(1);
                if is_irreducible(&FpPoly::from_i64s(field, &c)) {
                    count += 1;
                }
            }
            assert_eq!(count_irreducibles(p, d).unwrap(), BigUint::from(count), "p={p} d={d}");
        }
    }
    assert_eq!(count_irreducibles(7, 1).unwrap(), BigUint::from(7u32));
    assert_eq!(count_irreducibles(2, 4).unwrap(), BigUint::from(3u32));
    assert_eq!(count_irreducibles(3, 2).unwrap(), BigUint::from(3u32));
}

#[test]
fn large_factorizations() {
    // (2^61 - 1) * (2^31 - 1) exercises rho and the probable-prime path
    let a = BigInt::from((1u64 << 61) - 1);
    let b = BigInt::from((1u64 << 31) - 1);
    let f = factorize(&(&a * &b), 11).unwrap();
    assert_eq!(f.factors().len(), 2);
    assert_eq!(f.product(), &a * &b);
    let f = factorize(&BigInt::from(5_764_801), 0).unwrap();
    assert_eq!(f.factors(), &[(BigUint::from(7u32), 8)]);
    let c = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64) * BigInt::from(1_000_037u64);
    let f = factorize(&c, 2).unwrap();
    assert_eq!(f.small_primes(), vec![1_000_003, 1_000_033, 1_000_037]);
    assert!(f.value().to_u64().is_some());
    assert!(BigInt::one() < c);
}

#[test]
fn example_split_values() {
    let f = IntPoly::binomial(4, &BigInt::from(17));
    let split = ore_split(&f, 2, 0).unwrap();
    assert_eq!(primes_of_degree(&split, 1).unwrap(), 3);
    let g = IntPoly::binomial(3, &BigInt::from(2));
    let split = ore_split(&g, 7, 0).unwrap();
    // 2 is not a cube mod 7: x^3 - 2 is irreducible there
    assert!(split.exact && split.slots.len() == 1 && split.slots[0].f == 3);
}
