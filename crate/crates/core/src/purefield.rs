//! Binomial-specific machinery for `x^n - m`: irreducibility, the closed-form
//! principal polygon, the counting criterion for non-monogenity, the
//! three parametric families, the generator construction for `x^n - a^u` and
//! the analysis pipeline.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{
    bezout_positive, count_irreducibles, factorize, nu_stable, padic_valuation, serialize_bigint,
    valuation_u64, IntFactorization, NuValue, DEFAULT_NU_CAP,
};
use crate::fppoly::{binomial_mod_p, count_degree_d_factors, is_irreducible, PrimeField};
use crate::intpoly::IntPoly;
use crate::ore::{common_index_divisor_of, ore_split, primes_of_degree};
use crate::polygon::{Point, PrincipalPolygon};
use crate::{Error, Result};

pub const PROVENANCE_GENERATOR: &str = "power-integral-basis construction for x^n - a^u";
pub const PROVENANCE_COUNTING: &str = "binomial common-index criterion";
pub const PROVENANCE_SPLITTING: &str = "Ore splitting common index divisor";
pub const PROVENANCE_NONE: &str = "no criterion applies";

/// Largest `n` for which `analyze` falls back to a full prime splitting.
pub const DEFAULT_SPLIT_BUDGET: u64 = 64;

/// Largest degree for which the closed-form data carries `H` and `V` in full;
/// above it only `R = H mod phi` is computed, by exponentiation modulo `phi`.
pub const CLOSED_FORM_FULL_DEGREE: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub seed: u64,
    pub nu_cap: u32,
    /// Splitting fallback is attempted only for `n <= split_budget`.
    pub split_budget: u64,
    /// Extra ceiling on the residue degrees scanned by the counting criterion.
    pub max_scan_degree: Option<u32>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            seed: 0,
            nu_cap: DEFAULT_NU_CAP,
            split_budget: DEFAULT_SPLIT_BUDGET,
            max_scan_degree: None,
        }
    }
}

/// Validated pure field `Q(m^(1/n))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureFieldSpec {
    pub n: u64,
    pub m: BigInt,
    pub n_factors: IntFactorization,
    pub m_factors: IntFactorization,
}

impl PureFieldSpec {
    pub fn new(n: u64, m: BigInt, seed: u64) -> Result<Self> {
        if !binomial_irreducible(n, &m)? {
            return Err(Error::Reducible { n, m: m.to_string() });
        }
        Ok(PureFieldSpec {
            n,
            n_factors: factorize(&BigInt::from(n), seed)?,
            m_factors: factorize(&m, seed)?,
            m,
        })
    }

    pub fn polynomial(&self) -> IntPoly {
        IntPoly::binomial(self.n as usize, &self.m)
    }
}

fn check_binomial_args(n: u64, m: &BigInt) -> Result<()> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("degree must be at least 2, got {n}")));
    }
    if m.magnitude() < &BigUint::from(2u32) {
        return Err(Error::OutOfRange(format!("|m| must be at least 2, got {m}")));
    }
    Ok(())
}

/// Capelli: `x^n - m` is irreducible iff `m` is no `q`-th power for a prime
/// `q | n` and, when `4 | n`, `m != -4k^4`.
pub fn binomial_irreducible(n: u64, m: &BigInt) -> Result<bool> {
    check_binomial_args(n, m)?;
    for q in factorize(&BigInt::from(n), 0)?.small_primes() {
        if crate::arith::exact_root(m, q as u32).is_some() {
            return Ok(false);
        }
    }
    if n.is_multiple_of(4) && m.is_negative() {
        let (quarter, rem) = (-m).div_rem(&BigInt::from(4));
        if rem.is_zero() && crate::arith::exact_root(&quarter, 4).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Signed discriminant of `x^n - a`: `(-1)^(n(n-1)/2 + n-1) n^n a^(n-1)`.
pub fn binomial_discriminant(n: u64, a: &BigInt) -> Result<BigInt> {
    if n < 2 || a.is_zero() {
        return Err(Error::OutOfRange("discriminant needs n >= 2 and a != 0".into()));
    }
    let k = u32::try_from(n).map_err(|_| Error::OutOfRange(format!("degree {n} too large")))?;
    let magnitude = BigInt::from(n).pow(k) * a.pow(k - 1);
    let parity = (n * (n - 1) / 2 + n - 1) % 2;
    Ok(if parity == 1 { -magnitude } else { magnitude })
}

/// Data behind the closed-form principal polygon of `x^n - m` at an odd `p | n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedFormData {
    pub p: u64,
    pub r: u32,
    pub u: u64,
    pub phi: IntPoly,
    #[serde(rename = "U")]
    pub u_poly: IntPoly,
    #[serde(rename = "T")]
    pub t: IntPoly,
    /// Present only for degrees up to [`CLOSED_FORM_FULL_DEGREE`].
    #[serde(rename = "H")]
    pub h: Option<IntPoly>,
    #[serde(rename = "V")]
    pub v: Option<IntPoly>,
    #[serde(rename = "R")]
    pub r_poly: IntPoly,
    #[serde(rename = "A0")]
    pub a0: IntPoly,
    pub nu0: u32,
    pub points: Vec<Point>,
    /// Whether `phi` divides `T` mod `p`. The point set is derived assuming it
    /// does not; the flag is kept so callers can see when that fails.
    pub phi_divides_t: bool,
}

impl ClosedFormData {
    pub fn polygon(&self) -> PrincipalPolygon {
        PrincipalPolygon::from_points(&self.points)
    }
}

/// Closed form of the principal polygon of `x^n - m` with respect to a lift
/// `phi` of an irreducible factor of `x^u - m` mod `p`, `n = u p^r`.
pub fn closed_form_polygon(n: u64, m: &BigInt, p: u64, phi: &IntPoly) -> Result<ClosedFormData> {
    check_binomial_args(n, m)?;
    if p == 2 {
        return Err(Error::Precondition("closed form needs an odd prime".into()));
    }
    let field = PrimeField::new(p)?;
    let r = valuation_u64(p, n);
    if r == 0 {
        return Err(Error::Precondition(format!("{p} does not divide {n}")));
    }
    if padic_valuation(p, m)? > 0 {
        return Err(Error::Precondition(format!("{p} divides {m}")));
    }
    if !phi.is_monic() {
        return Err(Error::NotMonic(phi.to_string()));
    }
    let q = p.pow(r);
    let u = n / q;
    let phi_bar = phi.reduce_mod(field);
    if !is_irreducible(&phi_bar) {
        return Err(Error::Precondition(format!("{phi} is not irreducible modulo {p}")));
    }
    let (u_bar, rem) = binomial_mod_p(p, u as usize, m)?.div_rem(&phi_bar)?;
    if !rem.is_zero() {
        return Err(Error::Precondition(format!("{phi} does not divide x^{u} - {m} modulo {p}")));
    }
    let p_big = BigInt::from(p);
    let u_poly = IntPoly::lift(&u_bar);
    let t = (&IntPoly::binomial(u as usize, m) - &(phi * &u_poly)).exact_div_scalar(&p_big)?;
    let phi_divides_t = t.reduce_mod(field).rem(&phi_bar)?.is_zero();

    let (h, v, r_poly) = if n <= CLOSED_FORM_FULL_DEGREE {
        let h = expand_h(&t, m, p, r);
        let (v, r_poly) = h.div_rem_monic(phi)?;
        (Some(h), Some(v), r_poly)
    } else {
        // p^(r+1) R = (m + pT)^q - m^q mod phi
        let base = &IntPoly::constant(m.clone()) + &t.scale(&p_big);
        let w = pow_mod_monic(&base, q, phi)?;
        let w = &w - &IntPoly::constant(m.pow(q as u32));
        (None, None, w.exact_div_scalar(&p_big.pow(r + 1))?)
    };
    let a0 = &r_poly.scale(&p_big.pow(r + 1)) + &IntPoly::constant(m.pow(q as u32) - m);
    let nu0 = a0.valuation(p).ok_or_else(|| {
        Error::Precondition(format!("{phi} divides x^{n} - {m} over the integers"))
    })?;
    let mut points = vec![Point::new(0, nu0 as i64)];
    points.extend((0..=r).map(|j| Point::new(p.pow(j) as i64, (r - j) as i64)));
    Ok(ClosedFormData {
        p,
        r,
        u,
        phi: phi.clone(),
        u_poly,
        t,
        h,
        v,
        r_poly,
        a0,
        nu0,
        points,
        phi_divides_t,
    })
}

/// `H = m^(q-1) T + p^-(r+1) sum_{j<=q-2} C(q, j) m^j (pT)^(q-j)` with `q = p^r`.
fn expand_h(t: &IntPoly, m: &BigInt, p: u64, r: u32) -> IntPoly {
    let q = p.pow(r);
    let p_big = BigInt::from(p);
    let pt = t.scale(&p_big);
    let mut sum = IntPoly::zero();
    let mut pt_pow = pt.pow(2); // (pT)^(q-j) for j = q-2
    let mut binom = BigInt::from(q) * BigInt::from(q - 1) / 2; // C(q, q-2)
    let mut j = q - 2;
    loop {
        sum = &sum + &pt_pow.scale(&(&binom * m.pow(j as u32)));
        if j == 0 {
            break;
        }
        // C(q, j-1) = C(q, j) * j / (q - j + 1)
        binom = binom * BigInt::from(j) / BigInt::from(q - j + 1);
        pt_pow = &pt_pow * &pt;
        j -= 1;
    }
    let tail = sum
        .exact_div_scalar(&p_big.pow(r + 1))
        .expect("each term carries p^(r+1)");
    &t.scale(&m.pow((q - 1) as u32)) + &tail
}

fn pow_mod_monic(base: &IntPoly, mut e: u64, modulus: &IntPoly) -> Result<IntPoly> {
    let mut acc = IntPoly::one();
    let mut b = base.div_rem_monic(modulus)?.1;
    while e > 0 {
        if e & 1 == 1 {
            acc = (&acc * &b).div_rem_monic(modulus)?.1;
        }
        b = (&b * &b).div_rem_monic(modulus)?.1;
        e >>= 1;
    }
    Ok(acc)
}

/// Where a non-monogenity witness comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessSource {
    /// `min(r+1, nu) * N_p(d, u, m) > N_p(d)`.
    BinomialCount {
        r: u32,
        u: u64,
        nu: NuValue,
        multiplier: u32,
        binomial_factors: u64,
    },
    /// `L_p(d) > N_p(d)` read off an exact prime splitting.
    PrimeSplitting,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonMonogenityWitness {
    pub p: u64,
    pub d: u32,
    /// Left side of the strict inequality.
    pub lhs: u128,
    /// `N_p(d)`.
    pub rhs: u128,
    pub source: WitnessSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorCertificate {
    #[serde(serialize_with = "serialize_bigint")]
    pub a: BigInt,
    pub u: u64,
    pub t: u64,
    pub s: u64,
    /// Minimal polynomial `x^n - a` of `theta = alpha^t / a^s`.
    pub g: IntPoly,
    pub theta: String,
    /// `(q, nu_q(index of G))` for every prime `q | a`; all zero.
    pub checked_primes: Vec<(String, u64)>,
    #[serde(serialize_with = "serialize_bigint")]
    pub discriminant: BigInt,
    /// `(n-1)(u-1)/2`, a lower bound for `nu_p` of the index of `alpha` at any `p | a`.
    pub alpha_index_bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    NotMonogenic(NonMonogenityWitness),
    Monogenic(GeneratorCertificate),
    Inconclusive { notes: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonogenityVerdict {
    pub n: u64,
    #[serde(serialize_with = "serialize_bigint")]
    pub m: BigInt,
    pub provenance: String,
    #[serde(flatten)]
    pub outcome: Outcome,
}

impl MonogenityVerdict {
    pub fn is_not_monogenic(&self) -> bool {
        matches!(self.outcome, Outcome::NotMonogenic(_))
    }

    pub fn is_monogenic(&self) -> bool {
        matches!(self.outcome, Outcome::Monogenic(_))
    }

    pub fn witness(&self) -> Option<&NonMonogenityWitness> {
        match &self.outcome {
            Outcome::NotMonogenic(w) => Some(w),
            _ => None,
        }
    }
}

/// Result of the counting criterion; `NoFire` is not a monogenity claim.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)] // built once per call
pub enum GeneralTest {
    Fired(MonogenityVerdict),
    NoFire { notes: Vec<String> },
}

impl GeneralTest {
    pub fn fired(&self) -> Option<&MonogenityVerdict> {
        match self {
            GeneralTest::Fired(v) => Some(v),
            GeneralTest::NoFire { .. } => None,
        }
    }
}

/// Whether no degree beyond `d` can satisfy `k * N_p(d,u,m) > N_p(d)`.
///
/// `d N_p(d) >= p^d - 2 p^(d/2)` and `N_p(d,u,m) <= u/d`, so once
/// `p^d >= 2ku` and `p^(d/2) >= 4` the inequality fails for this and all
/// larger `d`.
fn scan_exhausted(p: u64, d: u32, k: u32, u: u64) -> bool {
    let pd = BigUint::from(p).pow(d);
    pd >= BigUint::from(2 * k as u64) * BigUint::from(u) && pd >= BigUint::from(16u32)
}

/// The counting criterion over every odd prime `p | n` with `p` not dividing `m`.
pub fn theorem_general_test(n: u64, m: &BigInt, opts: &AnalyzeOptions) -> Result<GeneralTest> {
    if !binomial_irreducible(n, m)? {
        return Err(Error::Reducible { n, m: m.to_string() });
    }
    let mut notes = Vec::new();
    for p in factorize(&BigInt::from(n), opts.seed)?.small_primes() {
        if p == 2 {
            continue;
        }
        if padic_valuation(p, m)? > 0 {
            notes.push(format!("p = {p} divides m; criterion not applicable"));
            continue;
        }
        if let Some(w) = counting_witness_at(n, m, p, opts)? {
            return Ok(GeneralTest::Fired(MonogenityVerdict {
                n,
                m: m.clone(),
                provenance: PROVENANCE_COUNTING.into(),
                outcome: Outcome::NotMonogenic(w),
            }));
        }
        notes.push(format!("p = {p}: inequality fails for every residue degree"));
    }
    if notes.is_empty() {
        notes.push("no odd prime divides n".into());
    }
    Ok(GeneralTest::NoFire { notes })
}

/// Smallest residue degree at which the counting inequality holds at `p`.
pub fn counting_witness_at(
    n: u64,
    m: &BigInt,
    p: u64,
    opts: &AnalyzeOptions,
) -> Result<Option<NonMonogenityWitness>> {
    let r = valuation_u64(p, n);
    let u = n / p.pow(r);
    let nu = nu_stable(p, m, opts.nu_cap)?;
    let k = (r + 1).min(nu.lower_bound());
    let mut d = 1u32;
    loop {
        if d as u64 > u || opts.max_scan_degree.is_some_and(|b| d > b) {
            return Ok(None);
        }
        let c = count_degree_d_factors(p, d, u, m)?;
        if c > 0 {
            let lhs = k as u128 * c as u128;
            let rhs = count_irreducibles(p, d)?;
            if BigUint::from(lhs) > rhs {
                return Ok(Some(NonMonogenityWitness {
                    p,
                    d,
                    lhs,
                    rhs: rhs.to_u128().expect("below lhs"),
                    source: WitnessSource::BinomialCount {
                        r,
                        u,
                        nu,
                        multiplier: k,
                        binomial_factors: c,
                    },
                }));
            }
        }
        if scan_exhausted(p, d, k, u) {
            return Ok(None);
        }
        d += 1;
    }
}

/// Recomputes a witness from scratch; true iff every number matches.
pub fn recheck_witness(n: u64, m: &BigInt, w: &NonMonogenityWitness, opts: &AnalyzeOptions) -> Result<bool> {
    let rhs = count_irreducibles(w.p, w.d)?;
    if rhs != BigUint::from(w.rhs) || w.lhs <= w.rhs {
        return Ok(false);
    }
    match &w.source {
        WitnessSource::BinomialCount {
            r,
            u,
            nu,
            multiplier,
            binomial_factors,
        } => {
            let r2 = valuation_u64(w.p, n);
            let u2 = n / w.p.pow(r2);
            let nu2 = nu_stable(w.p, m, opts.nu_cap)?;
            let k2 = (r2 + 1).min(nu2.lower_bound());
            let c2 = count_degree_d_factors(w.p, w.d, u2, m)?;
            Ok(r2 == *r
                && u2 == *u
                && nu2 == *nu
                && k2 == *multiplier
                && c2 == *binomial_factors
                && k2 as u128 * c2 as u128 == w.lhs)
        }
        WitnessSource::PrimeSplitting => {
            let split = ore_split(&IntPoly::binomial(n as usize, m), w.p, opts.seed)?;
            Ok(primes_of_degree(&split, w.d as u64)? as u128 == w.lhs)
        }
    }
}

/// The three parametric families `x^(p1^r p2^s) - m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    #[serde(rename = "5-7")]
    FiveSeven,
    #[serde(rename = "3-11")]
    ThreeEleven,
    #[serde(rename = "5-11")]
    FiveEleven,
}

impl Family {
    pub fn primes(self) -> (u64, u64) {
        match self {
            Family::FiveSeven => (5, 7),
            Family::ThreeEleven => (3, 11),
            Family::FiveEleven => (5, 11),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::FiveSeven => "5-7",
            Family::ThreeEleven => "3-11",
            Family::FiveEleven => "5-11",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "5-7" => Ok(Family::FiveSeven),
            "3-11" => Ok(Family::ThreeEleven),
            "5-11" => Ok(Family::FiveEleven),
            _ => Err(Error::Parse(format!("unknown family {s}; expected 5-7, 3-11 or 5-11"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub family: Family,
    pub r: u32,
    pub s: u32,
    pub n: u64,
    #[serde(serialize_with = "serialize_bigint")]
    pub m: BigInt,
    /// Each clause's hypothesis, evaluated as stated.
    pub clauses: [bool; 2],
    pub hypothesis: bool,
    pub theorem_fires: bool,
    pub theorem: Option<MonogenityVerdict>,
    /// False exactly when the hypothesis holds but the counting criterion does not fire.
    pub agreement: bool,
    pub note: Option<String>,
}

fn congruent_one(m: &BigInt, e: u32, modulus: u64, k: u32) -> bool {
    let md = BigInt::from(modulus).pow(k);
    m.modpow(&BigInt::from(e), &md).mod_floor(&md).is_one()
}

pub fn corollary_checks(
    family: Family,
    r: u32,
    s: u32,
    m: &BigInt,
    opts: &AnalyzeOptions,
) -> Result<CorollaryReport> {
    let (p1, p2) = family.primes();
    let n = p1
        .checked_pow(r)
        .and_then(|a| p2.checked_pow(s).and_then(|b| a.checked_mul(b)))
        .ok_or_else(|| Error::OutOfRange(format!("{p1}^{r} * {p2}^{s} overflows")))?;
    let clauses = match family {
        Family::FiveSeven => [
            r >= 1 && s >= 7 && congruent_one(m, 6, 7, 8),
            r >= 5 && s >= 1 && congruent_one(m, 4, 5, 6),
        ],
        // the first clause's congruence is read as m^10 = 1 mod 11^12
        Family::ThreeEleven => [
            r >= 1 && s >= 11 && congruent_one(m, 10, 11, 12),
            r >= 2 && s >= 1 && congruent_one(m, 2, 3, 3),
        ],
        Family::FiveEleven => [
            r >= 1 && s >= 2 && (m + 1u32).mod_floor(&BigInt::from(11)).is_zero() && congruent_one(m, 10, 11, 3),
            r >= 6 && s >= 1 && congruent_one(m, 4, 5, 6),
        ],
    };
    let hypothesis = clauses[0] || clauses[1];
    let theorem = theorem_general_test(n, m, opts)?.fired().cloned();
    let theorem_fires = theorem.is_some();
    let agreement = !hypothesis || theorem_fires;
    let note = if !agreement {
        Some(format!(
            "family {} hypothesis holds but min(r+1, nu) * N_p(d, u, m) > N_p(d) fails at every prime and degree",
            family.label()
        ))
    } else if theorem_fires && !hypothesis {
        Some("counting criterion fires outside the family hypothesis".into())
    } else {
        None
    };
    Ok(CorollaryReport {
        family,
        r,
        s,
        n,
        m: m.clone(),
        clauses,
        hypothesis,
        theorem_fires,
        theorem,
        agreement,
        note,
    })
}

/// `x^n - a^u` with `u >= 2`, `gcd(u, n) = 1`, `a` squarefree and every prime
/// of `n` dividing `a`: `theta = alpha^t / a^s` generates the ring of integers.
pub fn construct_generator(n: u64, a: &BigInt, u: u64, seed: u64) -> Result<MonogenityVerdict> {
    if u < 2 {
        return Err(Error::Precondition("u >= 2 required".into()));
    }
    if n < 2 {
        return Err(Error::Precondition("n >= 2 required".into()));
    }
    if u.gcd(&n) != 1 {
        return Err(Error::Precondition(format!("gcd(u, n) = 1 required, got gcd({u}, {n}) = {}", u.gcd(&n))));
    }
    if a.magnitude() < &BigUint::from(2u32) {
        return Err(Error::Precondition("|a| >= 2 required".into()));
    }
    let a_fac = factorize(a, seed)?;
    if !a_fac.is_squarefree() {
        return Err(Error::Precondition(format!("a = {a} must be squarefree")));
    }
    let n_fac = factorize(&BigInt::from(n), seed)?;
    if let Some(q) = n_fac.primes().find(|q| a_fac.exponent_of(q) == 0) {
        return Err(Error::Precondition(format!("prime divisors of n must divide a; {q} does not")));
    }
    let u32_exp = u32::try_from(u).map_err(|_| Error::OutOfRange(format!("u = {u} too large")))?;
    let m = a.pow(u32_exp);
    let (t, s) = bezout_positive(u, n)?;
    let g = IntPoly::binomial(n as usize, a);
    let mut checked = Vec::new();
    for q in a_fac.small_primes() {
        let split = ore_split(&g, q, seed)?;
        if !split.exact || split.index_valuation.value != 0 {
            return Err(Error::Precondition(format!(
                "index of x^{n} - {a} is divisible by {q}; generator check failed"
            )));
        }
        checked.push((q.to_string(), split.index_valuation.value));
    }
    if a_fac.primes().any(|q| q.to_u64().is_none()) {
        return Err(Error::OutOfRange("prime divisors of a must fit in 64 bits".into()));
    }
    Ok(MonogenityVerdict {
        n,
        m,
        provenance: PROVENANCE_GENERATOR.into(),
        outcome: Outcome::Monogenic(GeneratorCertificate {
            a: a.clone(),
            u,
            t,
            s,
            g,
            theta: format!("alpha^{t} / ({a})^{s}"),
            checked_primes: checked,
            discriminant: binomial_discriminant(n, a)?,
            alpha_index_bound: (n - 1) * (u - 1) / 2,
        }),
    })
}

/// `(a, u)` with `m = a^u`, `a` squarefree, when the generator hypotheses hold.
pub fn generator_decomposition(n: u64, m_fac: &IntFactorization, n_fac: &IntFactorization) -> Option<(BigInt, u64)> {
    let exps: Vec<u32> = m_fac.factors().iter().map(|&(_, e)| e).collect();
    let u = *exps.first()?;
    if u < 2 || exps.iter().any(|&e| e != u) {
        return None;
    }
    let rad = m_fac.primes().fold(BigUint::one(), |acc, p| acc * p);
    let a = if m_fac.value().is_negative() {
        if u % 2 == 0 {
            return None;
        }
        -BigInt::from(rad)
    } else {
        BigInt::from(rad)
    };
    let u = u as u64;
    if u.gcd(&n) != 1 || n_fac.primes().any(|q| m_fac.exponent_of(q) == 0) {
        return None;
    }
    Some((a, u))
}

pub fn analyze(n: u64, m: &BigInt, opts: &AnalyzeOptions) -> Result<MonogenityVerdict> {
    let spec = PureFieldSpec::new(n, m.clone(), opts.seed)?;
    if let Some((a, u)) = generator_decomposition(n, &spec.m_factors, &spec.n_factors) {
        return construct_generator(n, &a, u, opts.seed);
    }
    let mut notes = match theorem_general_test(n, m, opts)? {
        GeneralTest::Fired(v) => return Ok(v),
        GeneralTest::NoFire { notes } => notes,
    };
    if n <= opts.split_budget {
        let mut primes: Vec<u64> = spec.n_factors.small_primes();
        primes.extend(spec.m_factors.small_primes());
        primes.sort_unstable();
        primes.dedup();
        let f = spec.polynomial();
        for p in primes {
            if p >= n {
                // a common index divisor is smaller than the degree
                continue;
            }
            let split = ore_split(&f, p, opts.seed)?;
            if !split.exact {
                notes.push(format!(
                    "p = {p}: not p-regular; index valuation >= {}",
                    split.index_valuation.value
                ));
                continue;
            }
            if let Some(w) = common_index_divisor_of(&split)? {
                return Ok(MonogenityVerdict {
                    n,
                    m: m.clone(),
                    provenance: PROVENANCE_SPLITTING.into(),
                    outcome: Outcome::NotMonogenic(NonMonogenityWitness {
                        p,
                        d: w.d as u32,
                        lhs: w.primes as u128,
                        rhs: w.irreducibles.to_u128().expect("below lhs"),
                        source: WitnessSource::PrimeSplitting,
                    }),
                });
            }
            notes.push(format!("p = {p}: not a common index divisor"));
        }
    } else {
        notes.push(format!("n = {n} exceeds the splitting budget {}", opts.split_budget));
    }
    Ok(MonogenityVerdict {
        n,
        m: m.clone(),
        provenance: PROVENANCE_NONE.into(),
        outcome: Outcome::Inconclusive { notes },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn irreducibility() {
        assert!(binomial_irreducible(4, &big(17)).unwrap());
        assert!(!binomial_irreducible(4, &big(-4)).unwrap());
        assert!(!binomial_irreducible(6, &big(64)).unwrap());
        assert!(!binomial_irreducible(3, &big(-8)).unwrap());
        assert!(binomial_irreducible(4, &big(-8)).unwrap());
        assert!(!binomial_irreducible(8, &big(-324)).unwrap()); // -4 * 3^4
        assert!(binomial_irreducible(3, &big(4)).unwrap());
        assert!(binomial_irreducible(2, &big(1)).is_err());
    }

    #[test]
    fn discriminants() {
        assert_eq!(binomial_discriminant(2, &big(5)).unwrap(), big(20));
        assert_eq!(binomial_discriminant(3, &big(2)).unwrap(), big(-108));
        assert_eq!(
            binomial_discriminant(6, &big(30)).unwrap(),
            big(6).pow(6) * big(30).pow(5)
        );
        for (n, a) in [(2u64, 5i64), (3, 2), (4, 6), (5, -3), (6, 30), (7, 10)] {
            let f = IntPoly::binomial(n as usize, &big(a));
            assert_eq!(binomial_discriminant(n, &big(a)).unwrap(), f.discriminant());
        }
    }

    #[test]
    fn general_test_examples() {
        let opts = AnalyzeOptions::default();
        let v = theorem_general_test(27, &big(82), &opts).unwrap();
        let w = v.fired().unwrap().witness().unwrap().clone();
        assert_eq!((w.p, w.d, w.lhs, w.rhs), (3, 1, 4, 3));
        assert!(recheck_witness(27, &big(82), &w, &opts).unwrap());

        let n = 5 * 7u64.pow(7);
        let m = big(7).pow(8) - 1;
        let v = theorem_general_test(n, &m, &opts).unwrap();
        let w = v.fired().unwrap().witness().unwrap().clone();
        assert_eq!((w.p, w.d, w.lhs, w.rhs), (7, 1, 8, 7));

        assert!(theorem_general_test(9, &big(5), &opts).unwrap().fired().is_none());
        assert!(matches!(theorem_general_test(6, &big(64), &opts), Err(Error::Reducible { .. })));
    }

    #[test]
    fn generator_examples() {
        let v = construct_generator(6, &big(30), 5, 0).unwrap();
        let Outcome::Monogenic(c) = &v.outcome else { panic!() };
        assert_eq!((c.t, c.s), (5, 4));
        assert_eq!(c.g.to_string(), "x^6 - 30");
        assert_eq!(c.alpha_index_bound, 10);
        assert_eq!(v.m, big(30).pow(5));

        let v = construct_generator(4, &big(6), 3, 0).unwrap();
        let Outcome::Monogenic(c) = &v.outcome else { panic!() };
        assert_eq!((c.t, c.s, c.alpha_index_bound), (3, 2, 3));
        assert_eq!(c.checked_primes, vec![("2".into(), 0), ("3".into(), 0)]);

        let err = construct_generator(6, &big(30), 1, 0).unwrap_err();
        assert!(err.to_string().contains("u >= 2 required"));
        assert!(construct_generator(6, &big(12), 5, 0).is_err());
        assert!(construct_generator(6, &big(10), 5, 0).is_err());
        assert!(construct_generator(6, &big(30), 3, 0).is_err());
    }

    #[test]
    fn analyze_examples() {
        let opts = AnalyzeOptions::default();
        let v = analyze(6, &big(30).pow(5), &opts).unwrap();
        assert!(v.is_monogenic());
        assert_eq!(v.provenance, PROVENANCE_GENERATOR);

        let v = analyze(4, &big(17), &opts).unwrap();
        let w = v.witness().unwrap();
        assert_eq!((w.p, w.d, w.lhs, w.rhs), (2, 1, 3, 2));
        assert_eq!(v.provenance, PROVENANCE_SPLITTING);
        assert!(recheck_witness(4, &big(17), w, &opts).unwrap());

        let v = analyze(3, &big(2), &opts).unwrap();
        assert!(matches!(v.outcome, Outcome::Inconclusive { .. }));
        assert!(analyze(4, &big(-4), &opts).is_err());
    }

    #[test]
    fn verdict_json_shape() {
        let v = analyze(27, &big(82), &AnalyzeOptions::default()).unwrap();
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["status"], "not_monogenic");
        assert_eq!(j["m"], "82");
        assert_eq!(j["provenance"], PROVENANCE_COUNTING);
        assert_eq!(j["source"]["kind"], "binomial_count");
        assert_eq!(j["source"]["nu"]["value"], 4);
    }

    #[test]
    fn closed_form_x9_minus_7() {
        let phi = IntPoly::from_i64s(&[-1, 1]);
        let data = closed_form_polygon(9, &big(7), 3, &phi).unwrap();
        assert_eq!((data.r, data.u), (2, 1));
        // p^(r+1) H = (m + pT)^(p^r) - m^(p^r)
        let lhs = data.h.as_ref().unwrap().scale(&big(27));
        let base = &IntPoly::constant(big(7)) + &data.t.scale(&big(3));
        let rhs = &base.pow(9) - &IntPoly::constant(big(7).pow(9));
        assert_eq!(lhs, rhs);
        let f = IntPoly::binomial(9, &big(7));
        let direct = crate::polygon::principal_polygon(&crate::polygon::phi_expand(&f, &phi).unwrap(), 3).unwrap();
        assert_eq!(data.polygon().vertices, direct.vertices);
    }

    #[test]
    fn corollaries() {
        let opts = AnalyzeOptions::default();
        let rep = corollary_checks(Family::FiveSeven, 1, 7, &(big(7).pow(8) - 1), &opts).unwrap();
        assert!(rep.clauses[0] && rep.theorem_fires && rep.agreement);

        let rep = corollary_checks(Family::FiveEleven, 1, 2, &big(1330), &opts).unwrap();
        assert!(rep.clauses[0] && rep.theorem_fires && rep.agreement);
        let w = rep.theorem.as_ref().unwrap().witness().unwrap();
        assert_eq!(w.p, 11);
        let WitnessSource::BinomialCount { binomial_factors, .. } = w.source else { panic!() };
        assert_eq!(binomial_factors, 5);

        // m^2 = 1 mod 27 but not mod 81: hypothesis holds, criterion cannot fire
        let rep = corollary_checks(Family::ThreeEleven, 2, 1, &big(26), &opts).unwrap();
        assert!(rep.clauses[1] && rep.hypothesis);
        assert!(!rep.theorem_fires && !rep.agreement);
        assert!(rep.note.is_some());
    }
}
