//! Integer number theory: valuations, factorization, Bezout pairs and the
//! count of monic irreducible polynomials over a prime field.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Error, Result};

/// Trial division bound for [`factorize`].
pub const TRIAL_DIVISION_BOUND: u32 = 1_000_000;

/// Default precision cap for [`nu_stable`].
pub const DEFAULT_NU_CAP: u32 = 64;

static SMALL_PRIMES: Lazy<Vec<u32>> = Lazy::new(|| sieve(TRIAL_DIVISION_BOUND));

fn sieve(bound: u32) -> Vec<u32> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Largest `k` with `p^k | m`.
pub fn padic_valuation(p: u64, m: &BigInt) -> Result<u32> {
    if p < 2 {
        return Err(Error::NotPrime(p.to_string()));
    }
    if m.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    Ok(valuation_nonzero(p, m.magnitude()))
}

pub(crate) fn valuation_nonzero(p: u64, m: &BigUint) -> u32 {
    debug_assert!(!m.is_zero());
    // Cheap path for the frequent case of single-limb values.
    if let Some(mut v) = m.to_u64() {
        let mut k = 0;
        while v % p == 0 {
            v /= p;
            k += 1;
        }
        return k;
    }
    let p_big = BigUint::from(p);
    let mut k = 0;
    let mut cur = m.clone();
    loop {
        let (q, r) = cur.div_rem(&p_big);
        if !r.is_zero() {
            return k;
        }
        cur = q;
        k += 1;
    }
}

pub(crate) fn valuation_u64(p: u64, mut v: u64) -> u32 {
    debug_assert!(v != 0 && p >= 2);
    let mut k = 0;
    while v.is_multiple_of(p) {
        v /= p;
        k += 1;
    }
    k
}

/// Result of [`nu_stable`]: either the exact valuation or the statement that
/// it exceeds the requested cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NuValue {
    Exact { value: u32 },
    CapExceeded { cap: u32 },
}

impl NuValue {
    /// A value that never exceeds the true valuation.
    pub fn lower_bound(&self) -> u32 {
        match *self {
            NuValue::Exact { value } => value,
            NuValue::CapExceeded { cap } => cap,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NuValue::Exact { .. })
    }
}

/// `nu_p(m^(p-1) - 1)` for an odd prime `p` not dividing `m`.
///
/// Works modulo `p^(cap+1)` so `m^(p-1)` is never formed in full.
pub fn nu_stable(p: u64, m: &BigInt, cap: u32) -> Result<NuValue> {
    if p == 2 {
        return Err(Error::Precondition("nu_stable needs an odd prime".into()));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if cap == 0 {
        return Err(Error::OutOfRange("cap must be positive".into()));
    }
    let p_big = BigUint::from(p);
    if (m.magnitude() % &p_big).is_zero() {
        return Err(Error::Precondition(format!("{p} divides {m}")));
    }
    let modulus = p_big.pow(cap + 1);
    let base = m.mod_floor(&BigInt::from_biguint(Sign::Plus, modulus.clone()));
    let base = base.magnitude();
    let power = base.modpow(&BigUint::from(p - 1), &modulus);
    // power - 1 taken in [0, modulus)
    let diff = if power.is_zero() {
        &modulus - 1u32
    } else {
        power - 1u32
    };
    if diff.is_zero() {
        return Ok(NuValue::CapExceeded { cap });
    }
    let v = valuation_nonzero(p, &diff);
    if v > cap {
        Ok(NuValue::CapExceeded { cap })
    } else {
        Ok(NuValue::Exact { value: v })
    }
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin on arbitrary precision integers.
///
/// The twelve fixed prime bases make the answer deterministic below
/// 3.3 * 10^24; larger inputs additionally get eight seeded random bases.
pub fn is_probable_prime(n: &BigUint, seed: u64) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let strong = |a: &BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n_minus_1 {
                return true;
            }
        }
        false
    };
    for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if !strong(&BigUint::from(a)) {
            return false;
        }
    }
    let bound: BigUint = "3317044064679887385961981".parse().expect("constant");
    if n >= &bound {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_5eed);
        let two = BigUint::from(2u32);
        for _ in 0..8 {
            let a = rng.gen_biguint_range(&two, &n_minus_1);
            if !strong(&a) {
                return false;
            }
        }
    }
    true
}

/// Factorization of a nonzero integer; primes ascending, sign kept in `value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntFactorization {
    value: BigInt,
    factors: Vec<(BigUint, u32)>,
}

impl IntFactorization {
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Prime divisors that fit in a machine word.
    pub fn small_primes(&self) -> Vec<u64> {
        self.factors.iter().filter_map(|(p, _)| p.to_u64()).collect()
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Recomputes `sign * prod p^e`.
    pub fn product(&self) -> BigInt {
        let magnitude = self
            .factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        if self.value.is_negative() {
            -BigInt::from(magnitude)
        } else {
            BigInt::from(magnitude)
        }
    }
}

/// Complete factorization of `n != 0`.
///
/// Trial division below [`TRIAL_DIVISION_BOUND`], then Pollard-Brent rho whose
/// random choices are drawn from `seed`, with every cofactor primality checked.
pub fn factorize(n: &BigInt, seed: u64) -> Result<IntFactorization> {
    if n.is_zero() {
        return Err(Error::Precondition("cannot factor zero".into()));
    }
    let mut rest = n.magnitude().clone();
    let mut found: BTreeMap<BigUint, u32> = BTreeMap::new();
    for &p in SMALL_PRIMES.iter() {
        let p_big = BigUint::from(p);
        if &p_big * &p_big > rest {
            break;
        }
        let mut k = 0;
        loop {
            let (q, r) = rest.div_rem(&p_big);
            if !r.is_zero() {
                break;
            }
            rest = q;
            k += 1;
        }
        if k > 0 {
            found.insert(p_big, k);
        }
    }
    if !rest.is_one() {
        let bound = BigUint::from(TRIAL_DIVISION_BOUND);
        if rest < &bound * &bound {
            *found.entry(rest).or_insert(0) += 1;
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            split_large(rest, &mut rng, seed, &mut found);
        }
    }
    Ok(IntFactorization {
        value: n.clone(),
        factors: found.into_iter().collect(),
    })
}

fn split_large(n: BigUint, rng: &mut ChaCha8Rng, seed: u64, out: &mut BTreeMap<BigUint, u32>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n, seed) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    // perfect powers defeat rho, peel them first
    for k in (2..=n.bits() as u32).rev() {
        let root = n.nth_root(k);
        if root.pow(k) == n && root > BigUint::one() {
            let mut sub = BTreeMap::new();
            split_large(root, rng, seed, &mut sub);
            for (p, e) in sub {
                *out.entry(p).or_insert(0) += e * k;
            }
            return;
        }
    }
    let d = loop {
        if let Some(d) = brent_rho(&n, rng) {
            break d;
        }
    };
    let other = &n / &d;
    split_large(d, rng, seed, out);
    split_large(other, rng, seed, out);
}

fn brent_rho(n: &BigUint, rng: &mut ChaCha8Rng) -> Option<BigUint> {
    let one = BigUint::one();
    let c = rng.gen_biguint_below(n);
    let mut y = rng.gen_biguint_below(n);
    let m = 128usize;
    let step = |v: &BigUint| (v * v + &c) % n;
    let mut g = one.clone();
    let mut r = 1usize;
    let mut q = one.clone();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = step(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        if r > 1 << 24 {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = step(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n || g.is_zero() {
        None
    } else {
        Some(g)
    }
}

/// True iff no prime divides `a` twice. Needs `|a| >= 2`.
pub fn is_squarefree(a: &BigInt) -> Result<bool> {
    if a.magnitude() <= &BigUint::one() {
        return Err(Error::OutOfRange(format!("is_squarefree needs |a| >= 2, got {a}")));
    }
    Ok(factorize(a, 0)?.is_squarefree())
}

/// The solution of `u*t - n*s = 1` with `1 <= t <= n` minimal.
pub fn bezout_positive(u: u64, n: u64) -> Result<(u64, u64)> {
    if u == 0 || n == 0 {
        return Err(Error::OutOfRange("bezout_positive needs positive arguments".into()));
    }
    if u.gcd(&n) != 1 {
        return Err(Error::NotCoprime(u, n));
    }
    let ext = (u as i128).extended_gcd(&(n as i128));
    // ext.x * u + ext.y * n = 1, so t = x mod n
    let n_i = n as i128;
    let mut t = ext.x.rem_euclid(n_i);
    if t == 0 {
        t = n_i;
    }
    let s = (u as i128 * t - 1) / n_i;
    Ok((t as u64, s as u64))
}

pub(crate) fn mobius(n: u64) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Big integers travel as decimal strings in JSON.
pub fn serialize_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn serialize_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Number of monic irreducible polynomials of degree `d` over `F_p`.
pub fn count_irreducibles(p: u64, d: u32) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::OutOfRange("degree must be positive".into()));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let base = BigInt::from(p);
    let mut sum = BigInt::zero();
    for e in divisors(d as u64) {
        match mobius(d as u64 / e) {
            0 => {}
            mu => sum += BigInt::from(mu) * base.pow(e as u32),
        }
    }
    let (q, r) = sum.div_rem(&BigInt::from(d));
    debug_assert!(r.is_zero());
    Ok(q.to_biguint().expect("necklace count is positive"))
}

/// Integer `k`-th root of `m` when `m` is an exact `k`-th power.
pub fn exact_root(m: &BigInt, k: u32) -> Option<BigInt> {
    if k == 0 {
        return None;
    }
    if m.is_negative() && k.is_multiple_of(2) {
        return None;
    }
    let root = m.magnitude().nth_root(k);
    if root.pow(k) != *m.magnitude() {
        return None;
    }
    let root = BigInt::from(root);
    Some(if m.is_negative() { -root } else { root })
}
