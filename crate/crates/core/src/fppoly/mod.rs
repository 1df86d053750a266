//! Polynomial arithmetic and factorization over `F_p` and `F_p[x]/(phi)`.

mod factor;
mod field;
mod poly;

pub use factor::{
    distinct_degree, equal_degree, factor, is_irreducible, is_separable,
    squarefree_decomposition, FactorMultiset,
};
pub use field::{ExtField, FiniteField, FpPoly, FqElement, PrimeField, MAX_MODULUS};
pub use poly::Poly;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{divisors, is_prime_u64, mobius, valuation_u64};
use crate::{Error, Result};

/// `x^u - m` reduced modulo `p`.
pub fn binomial_mod_p(p: u64, u: usize, m: &BigInt) -> Result<FpPoly> {
    let field = PrimeField::new(p)?;
    let m_red = m.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits");
    let mut coeffs = vec![0u64; u + 1];
    coeffs[u] = 1;
    coeffs[0] = field.sub(&coeffs[0], &m_red);
    Ok(FpPoly::new(field, coeffs))
}

/// Number of distinct monic irreducible degree-`d` factors of `x^u - m` in `F_p[x]`.
///
/// Counted from the roots of `x^u = m` in each `F_(p^e)`, `e | d`, then Mobius
/// inversion, so `x^u - m` is never expanded; `u` may be huge.
pub fn count_degree_d_factors(p: u64, d: u32, u: u64, m: &BigInt) -> Result<u64> {
    if d == 0 || u == 0 {
        return Err(Error::OutOfRange("degree and exponent must be positive".into()));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let a = m.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits");
    if a == 0 {
        // x^u has the single distinct factor x
        return Ok(u64::from(d == 1));
    }
    // distinct factors of x^u - a equal those of x^w - a, since Frobenius fixes a
    let w = u / p.pow(valuation_u64(p, u));
    let mut total = BigInt::zero();
    for e in divisors(d as u64) {
        let mu = mobius(d as u64 / e);
        if mu != 0 {
            total += BigInt::from(mu) * BigInt::from(roots_in_extension(p, e as u32, w, a));
        }
    }
    let (q, r) = total.div_rem(&BigInt::from(d));
    debug_assert!(r.is_zero());
    q.to_u64()
        .ok_or_else(|| Error::OutOfRange("factor count overflow".into()))
}

/// Number of solutions of `x^w = a` in `F_(p^e)`, for `a` a nonzero residue.
fn roots_in_extension(p: u64, e: u32, w: u64, a: u64) -> BigUint {
    let group = BigUint::from(p).pow(e) - 1u32;
    let g = group.gcd(&BigUint::from(w));
    // a lies in F_p^*, so its order divides p - 1 and the exponent can be reduced
    let exp = (&group / &g) % BigUint::from(p - 1);
    if BigUint::from(a).modpow(&exp, &BigUint::from(p)).is_one() {
        g
    } else {
        BigUint::zero()
    }
}
