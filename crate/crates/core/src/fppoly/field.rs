use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;

use super::poly::Poly;
use crate::arith::is_prime_u64;
use crate::{Error, Result};

/// Largest modulus accepted for prime fields; keeps products inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

/// A finite field given by an explicit context value.
pub trait FiniteField: Clone + fmt::Debug + PartialEq + Eq + Hash + Ord {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Ord;

    fn characteristic(&self) -> u64;
    /// Degree over the prime field.
    fn extension_degree(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn embed_u64(&self, v: u64) -> Self::Elem;
    fn random(&self, rng: &mut dyn rand::RngCore) -> Self::Elem;
    /// Formats an element for human-readable output.
    fn render(&self, a: &Self::Elem) -> String;

    fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.extension_degree())
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// The unique `b` with `b^p = a`.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        let k = self.extension_degree();
        if k == 1 {
            return a.clone();
        }
        let e = BigUint::from(self.characteristic()).pow(k - 1);
        self.pow(a, &e)
    }
}

/// `F_p` for a prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS {
            return Err(Error::OutOfRange(format!("modulus {p} exceeds 2^31")));
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
}

impl FiniteField for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn extension_degree(&self) -> u32 {
        1
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero in F_{}", self.p);
        let e = BigUint::from(self.p - 2);
        self.pow(a, &e)
    }
    fn embed_u64(&self, v: u64) -> u64 {
        v % self.p
    }
    fn random(&self, rng: &mut dyn rand::RngCore) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
    fn pow(&self, a: &u64, e: &BigUint) -> u64 {
        let mut acc = 1 % self.p;
        let mut base = *a % self.p;
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
        }
        acc
    }
}

/// Polynomials over `F_p`.
pub type FpPoly = Poly<PrimeField>;

/// `F_p[x]/(phi)` for a monic irreducible `phi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtField {
    modulus: Arc<FpPoly>,
}

impl ExtField {
    /// Irreducibility of `phi` is checked.
    pub fn new(phi: FpPoly) -> Result<Self> {
        if !phi.is_monic() || phi.degree().unwrap_or(0) < 1 {
            return Err(Error::Precondition(format!(
                "extension modulus {phi} must be monic of positive degree"
            )));
        }
        if !super::factor::is_irreducible(&phi) {
            return Err(Error::Precondition(format!("{phi} is reducible")));
        }
        Ok(ExtField {
            modulus: Arc::new(phi),
        })
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    pub fn base_field(&self) -> PrimeField {
        *self.modulus.field()
    }

    pub fn element(&self, rep: &FpPoly) -> FpPoly {
        rep.rem(&self.modulus).expect("modulus is nonzero")
    }
}

impl FiniteField for ExtField {
    type Elem = FpPoly;

    fn characteristic(&self) -> u64 {
        self.base_field().modulus()
    }
    fn extension_degree(&self) -> u32 {
        self.modulus.degree().unwrap_or(0) as u32
    }
    fn zero(&self) -> FpPoly {
        FpPoly::zero(self.base_field())
    }
    fn one(&self) -> FpPoly {
        FpPoly::one(self.base_field())
    }
    fn is_zero(&self, a: &FpPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        a + b
    }
    fn sub(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        a - b
    }
    fn neg(&self, a: &FpPoly) -> FpPoly {
        -a
    }
    fn mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        (a * b).rem(&self.modulus).expect("modulus is nonzero")
    }
    fn inv(&self, a: &FpPoly) -> FpPoly {
        assert!(!a.is_zero(), "inverse of zero in extension field");
        let (g, s, _) = a.ext_gcd(&self.modulus).expect("same base field");
        debug_assert!(g.is_one());
        s.rem(&self.modulus).expect("modulus is nonzero")
    }
    fn embed_u64(&self, v: u64) -> FpPoly {
        let f = self.base_field();
        FpPoly::constant(f, f.embed_u64(v))
    }
    fn random(&self, rng: &mut dyn rand::RngCore) -> FpPoly {
        let f = self.base_field();
        let coeffs = (0..self.extension_degree()).map(|_| f.random(rng)).collect();
        FpPoly::new(f, coeffs)
    }
    fn render(&self, a: &FpPoly) -> String {
        a.to_string()
    }
}

/// An element of `F_phi` paired with its base polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqElement {
    pub base: FpPoly,
    pub rep: FpPoly,
}

impl FqElement {
    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base.degree() == Some(1) {
            write!(f, "{}", self.rep)
        } else {
            write!(f, "[{}]", self.rep)
        }
    }
}
