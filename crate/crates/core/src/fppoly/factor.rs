//! Squarefree decomposition, distinct-degree splitting and Cantor-Zassenhaus
//! equal-degree splitting over any [`FiniteField`].

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::FiniteField;
use super::poly::Poly;
use crate::{Error, Result};

/// Monic irreducible factors with multiplicities, sorted by degree then
/// coefficients so the result does not depend on the splitting seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorMultiset<F: FiniteField> {
    factors: Vec<(Poly<F>, usize)>,
}

impl<F: FiniteField> FactorMultiset<F> {
    pub fn factors(&self) -> &[(Poly<F>, usize)] {
        &self.factors
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Poly<F>, usize)> {
        self.factors.iter()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Product of `factor^multiplicity`, which is the monic input.
    pub fn product(&self, field: &F) -> Poly<F> {
        self.factors
            .iter()
            .fold(Poly::one(field.clone()), |acc, (f, e)| &acc * &f.pow(*e as u32))
    }

    pub fn multiplicity_of(&self, g: &Poly<F>) -> usize {
        self.factors
            .iter()
            .find(|(f, _)| f == g)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }
}

fn sort_key<F: FiniteField>(p: &Poly<F>) -> (usize, Vec<F::Elem>) {
    let mut c = p.coeffs().to_vec();
    c.reverse();
    (p.degree().unwrap_or(0), c)
}

/// Complete factorization of a nonzero polynomial.
pub fn factor<F: FiniteField>(f: &Poly<F>, seed: u64) -> Result<FactorMultiset<F>> {
    if f.is_zero() {
        return Err(Error::Precondition("cannot factor the zero polynomial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(&f.monic())? {
        for (g, d) in distinct_degree(&part)? {
            for h in equal_degree(&g, d, &mut rng)? {
                out.push((h, mult));
            }
        }
    }
    out.sort_by_key(|a| sort_key(&a.0));
    Ok(FactorMultiset { factors: out })
}

/// `(g_i, i)` with pairwise coprime squarefree `g_i` and `f = prod g_i^i` (monic `f`).
pub fn squarefree_decomposition<F: FiniteField>(f: &Poly<F>) -> Result<Vec<(Poly<F>, usize)>> {
    let field = f.field().clone();
    let p = field.characteristic() as usize;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    let df = f.derivative();
    if df.is_zero() {
        // f = g(x)^p
        for (g, m) in squarefree_decomposition(&f.pth_root())? {
            out.push((g, m * p));
        }
        return Ok(out);
    }
    let mut c = f.gcd(&df)?;
    let mut w = f.exact_div(&c)?;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let z = w.exact_div(&y)?;
        if z.degree().unwrap_or(0) > 0 {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w)?;
    }
    if c.degree().unwrap_or(0) > 0 {
        for (g, m) in squarefree_decomposition(&c.monic().pth_root())? {
            out.push((g, m * p));
        }
    }
    Ok(out)
}

/// Splits a monic squarefree polynomial into products of equal-degree irreducibles.
pub fn distinct_degree<F: FiniteField>(f: &Poly<F>) -> Result<Vec<(Poly<F>, usize)>> {
    let field = f.field().clone();
    let q = field.order();
    let x = Poly::x(field.clone());
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest)?;
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(&q, &rest)?;
        let g = (&h - &x).gcd(&rest)?;
        if !g.is_one() {
            rest = rest.exact_div(&g)?;
            h = h.rem(&rest)?;
            out.push((g, d));
        }
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest.monic(), deg));
        }
    }
    Ok(out)
}

/// Splits a monic squarefree product of degree-`d` irreducibles.
pub fn equal_degree<F: FiniteField>(
    f: &Poly<F>,
    d: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Poly<F>>> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == d {
        return Ok(vec![f.monic()]);
    }
    let field = f.field().clone();
    let p = field.characteristic();
    let k = field.extension_degree() as usize;
    let one = Poly::one(field.clone());
    loop {
        let coeffs = (0..n).map(|_| field.random(rng)).collect();
        let a = Poly::new(field.clone(), coeffs);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // absolute trace to F_2 of a in F_f
            let mut t = a.rem(f)?;
            let mut acc = t.clone();
            for _ in 1..k * d {
                t = (&t * &t).rem(f)?;
                acc = &acc + &t;
            }
            acc
        } else {
            let e = (field.order().pow(d as u32) - BigUint::one()) / 2u32;
            &a.pow_mod(&e, f)? - &one
        };
        let g = b.gcd(f)?;
        let deg = g.degree().unwrap_or(0);
        if deg > 0 && deg < n {
            let other = f.exact_div(&g)?;
            let mut out = equal_degree(&g, d, rng)?;
            out.extend(equal_degree(&other.monic(), d, rng)?);
            return Ok(out);
        }
    }
}

/// Rabin-style irreducibility test.
pub fn is_irreducible<F: FiniteField>(f: &Poly<F>) -> bool {
    let Some(n) = f.degree() else {
        return false;
    };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let f = f.monic();
    match distinct_degree(&f) {
        Ok(parts) => {
            parts.len() == 1
                && parts[0].1 == n
                && squarefree_decomposition(&f).is_ok_and(|s| s.len() == 1 && s[0].1 == 1)
        }
        Err(_) => false,
    }
}

/// `gcd(f, f') = 1`.
pub fn is_separable<F: FiniteField>(f: &Poly<F>) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::Precondition("separability of the zero polynomial".into()));
    }
    Ok(f.gcd(&f.derivative())?.is_one())
}
