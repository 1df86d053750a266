//! Canonical number systems in base `theta`, a root of a monic `G`: the
//! coefficient-chain criterion, digit encoding by backward division, decoding,
//! and exhaustive checks over boxes of elements.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::intpoly::IntPoly;
use crate::purefield::construct_generator;
use crate::{Error, Result};

/// Largest accepted `|c_0|`; digits are machine integers.
pub const MAX_NORM: i64 = 1 << 40;

/// Number of non-terminating elements kept in a [`BoxReport`].
pub const FAILURE_SAMPLE: usize = 16;

/// Budget on digit strings enumerated when probing signed-digit redundancy.
pub const SIGNED_ENUMERATION_BUDGET: u64 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DigitMode {
    /// `{0, ..., b-1}`, least nonnegative residue.
    Standard,
    /// `{-(b-1), ..., b-1}`, balanced residue in `(-b/2, b/2]`.
    Signed,
}

impl std::str::FromStr for DigitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(DigitMode::Standard),
            "signed" => Ok(DigitMode::Signed),
            _ => Err(Error::Parse(format!("unknown digit mode {s}; expected standard or signed"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CnsBasis {
    pub g: IntPoly,
    pub norm_bound: i64,
    pub digit_mode: DigitMode,
    #[serde(skip)]
    c: Vec<BigInt>,
}

impl CnsBasis {
    /// `g` monic of degree `>= 1` with `|c_0| >= 2`. Irreducibility is not checked.
    pub fn new(g: IntPoly, digit_mode: DigitMode) -> Result<Self> {
        if !g.is_monic() || g.degree().unwrap_or(0) == 0 {
            return Err(Error::NotMonic(g.to_string()));
        }
        let c0 = g.coeff(0);
        let b = c0
            .abs()
            .to_i64()
            .filter(|&b| b <= MAX_NORM)
            .ok_or_else(|| Error::OutOfRange(format!("|c0| = {} exceeds {MAX_NORM}", c0.abs())))?;
        if b < 2 {
            return Err(Error::Precondition(format!("|c0| = {b}; a digit base needs |c0| >= 2")));
        }
        let n = g.degree().unwrap();
        let c = (0..n).map(|i| g.coeff(i)).collect();
        Ok(CnsBasis {
            g,
            norm_bound: b,
            digit_mode,
            c,
        })
    }

    pub fn degree(&self) -> usize {
        self.c.len()
    }

    pub fn digit_range(&self) -> (i64, i64) {
        match self.digit_mode {
            DigitMode::Standard => (0, self.norm_bound - 1),
            DigitMode::Signed => (-(self.norm_bound - 1), self.norm_bound - 1),
        }
    }

    fn choose_digit(&self, z0: &BigInt) -> i64 {
        let b = self.norm_bound;
        let r = z0.mod_floor(&BigInt::from(b)).to_i64().expect("residue below b");
        match self.digit_mode {
            DigitMode::Standard => r,
            DigitMode::Signed if 2 * r > b => r - b,
            DigitMode::Signed => r,
        }
    }

    fn times_theta(&self, z: &Element) -> Element {
        let n = self.degree();
        let top = z.coords[n - 1].clone();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let shifted = if i == 0 { BigInt::zero() } else { z.coords[i - 1].clone() };
            out.push(shifted - &top * &self.c[i]);
        }
        Element { coords: out }
    }
}

/// Coordinates over `1, theta, ..., theta^(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub coords: Vec<BigInt>,
}

impl Element {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Element { coords }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Element {
            coords: c.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        Element {
            coords: vec![BigInt::zero(); n],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coords.len()))?;
        for c in &self.coords {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

impl std::fmt::Display for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Digits `a_0, a_1, ...`, least significant first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigitExpansion {
    pub digits: Vec<i64>,
    pub terminated: bool,
    /// A state seen twice; present only when a cycle was found.
    pub cycle_witness: Option<Element>,
}

/// Chain `1 <= a_(n-1) <= ... <= a_0`, `a_0 >= 2` and `|N(theta)| = |a_0| > 2`.
pub fn kovacs_hypothesis(g: &IntPoly) -> Result<bool> {
    if !g.is_monic() || g.degree().unwrap_or(0) == 0 {
        return Err(Error::NotMonic(g.to_string()));
    }
    let n = g.degree().unwrap();
    let coeffs: Vec<BigInt> = (0..n).map(|i| g.coeff(i)).collect();
    let two = BigInt::from(2);
    let chain = coeffs[n - 1] >= BigInt::from(1) && coeffs.windows(2).all(|w| w[1] <= w[0]);
    Ok(chain && coeffs[0] >= two && coeffs[0].abs() > two)
}

/// Default cap `10 (radius + 1) n log2(b) + 64`.
pub fn default_step_cap(basis: &CnsBasis, radius: u64) -> u64 {
    let log2b = 64 - (basis.norm_bound as u64).leading_zeros() as u64;
    10 * (radius + 1) * basis.degree() as u64 * log2b + 64
}

pub fn encode(basis: &CnsBasis, z: &Element, step_cap: u64) -> Result<DigitExpansion> {
    if step_cap == 0 {
        return Err(Error::OutOfRange("step cap must be positive".into()));
    }
    let n = basis.degree();
    if z.coords.len() != n {
        return Err(Error::Precondition(format!(
            "element has {} coordinates, basis degree is {n}",
            z.coords.len()
        )));
    }
    if z.is_zero() {
        return Ok(DigitExpansion {
            digits: vec![0],
            terminated: true,
            cycle_witness: None,
        });
    }
    let c0 = &basis.c[0];
    let mut state = z.clone();
    let mut seen = HashSet::new();
    let mut digits = Vec::new();
    for _ in 0..step_cap {
        if state.is_zero() {
            return Ok(DigitExpansion {
                digits,
                terminated: true,
                cycle_witness: None,
            });
        }
        if !seen.insert(state.clone()) {
            return Ok(DigitExpansion {
                digits,
                terminated: false,
                cycle_witness: Some(state),
            });
        }
        let d = basis.choose_digit(&state.coords[0]);
        let q = (&state.coords[0] - d) / c0;
        let mut next = Vec::with_capacity(n);
        for i in 1..n {
            next.push(&state.coords[i] - &basis.c[i] * &q);
        }
        next.push(-q);
        digits.push(d);
        state = Element { coords: next };
    }
    let terminated = state.is_zero();
    Ok(DigitExpansion {
        digits,
        terminated,
        cycle_witness: None,
    })
}

pub fn decode(basis: &CnsBasis, digits: &[i64]) -> Result<Element> {
    let (lo, hi) = basis.digit_range();
    let n = basis.degree();
    let mut acc = Element::zero(n);
    for &d in digits.iter().rev() {
        if d < lo || d > hi {
            return Err(Error::InvalidDigit { digit: d, low: lo, high: hi });
        }
        acc = basis.times_theta(&acc);
        acc.coords[0] += d;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxReport {
    pub digit_mode: DigitMode,
    pub radius: u64,
    pub step_cap: u64,
    pub total: u64,
    pub terminated: u64,
    pub non_terminated: u64,
    /// Elements that revisited a state; the rest hit the step cap.
    pub cycles: u64,
    pub max_digits: usize,
    /// Distinct elements sharing a digit string; nonzero means decoding is broken.
    pub collisions: u64,
    /// The first [`FAILURE_SAMPLE`] non-terminating elements in box order.
    pub failures: Vec<Element>,
    /// Signed mode only.
    pub redundancy: Option<RedundancyReport>,
}

/// Elements of the box reached by more than one digit string of bounded length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RedundancyReport {
    pub max_length: usize,
    pub strings_enumerated: u64,
    pub elements_with_multiple_expansions: u64,
}

fn box_element(n: usize, radius: u64, mut index: u64) -> Element {
    let width = 2 * radius + 1;
    let coords = (0..n)
        .map(|_| {
            let c = (index % width) as i64 - radius as i64;
            index /= width;
            BigInt::from(c)
        })
        .collect();
    Element { coords }
}

/// Runs [`encode`] on every element with coordinates in `[-radius, radius]`.
pub fn verify_box(basis: &CnsBasis, radius: u64, step_cap: u64) -> Result<BoxReport> {
    let n = basis.degree();
    let width = 2 * radius + 1;
    let total = (width as u128).pow(n as u32);
    if total > 50_000_000 {
        return Err(Error::OutOfRange(format!("box of {total} elements is too large")));
    }
    let total = total as u64;
    let results: Vec<(Element, DigitExpansion)> = (0..total)
        .into_par_iter()
        .map(|i| {
            let z = box_element(n, radius, i);
            let exp = encode(basis, &z, step_cap)?;
            Ok((z, exp))
        })
        .collect::<Result<_>>()?;

    let mut by_digits: HashMap<&[i64], usize> = HashMap::new();
    let mut report = BoxReport {
        digit_mode: basis.digit_mode,
        radius,
        step_cap,
        total,
        terminated: 0,
        non_terminated: 0,
        cycles: 0,
        max_digits: 0,
        collisions: 0,
        failures: Vec::new(),
        redundancy: None,
    };
    for (z, exp) in &results {
        if exp.terminated {
            report.terminated += 1;
            report.max_digits = report.max_digits.max(exp.digits.len());
            *by_digits.entry(exp.digits.as_slice()).or_default() += 1;
        } else {
            report.non_terminated += 1;
            if exp.cycle_witness.is_some() {
                report.cycles += 1;
            }
            if report.failures.len() < FAILURE_SAMPLE {
                report.failures.push(z.clone());
            }
        }
    }
    report.collisions = by_digits.values().filter(|&&c| c > 1).map(|&c| c as u64 - 1).sum();
    if basis.digit_mode == DigitMode::Signed {
        report.redundancy = Some(signed_redundancy(basis, radius)?);
    }
    Ok(report)
}

/// Enumerates every signed digit string with nonzero last digit up to the
/// longest length fitting [`SIGNED_ENUMERATION_BUDGET`] and counts box
/// elements hit more than once.
fn signed_redundancy(basis: &CnsBasis, radius: u64) -> Result<RedundancyReport> {
    let (lo, hi) = basis.digit_range();
    let alphabet = (hi - lo + 1) as u64;
    let mut max_length = 0usize;
    let mut strings = 0u64;
    loop {
        // strings of length L with nonzero last digit: (alphabet - 1) alphabet^(L-1)
        let next = alphabet
            .checked_pow(max_length as u32)
            .and_then(|a| a.checked_mul(alphabet - 1));
        match next {
            Some(k) if strings + k <= SIGNED_ENUMERATION_BUDGET => {
                strings += k;
                max_length += 1;
            }
            _ => break,
        }
    }
    let r = BigInt::from(radius);
    let in_box = |z: &Element| z.coords.iter().all(|c| c.abs() <= r);
    let mut hits: HashMap<Element, u32> = HashMap::new();
    let mut digits: Vec<i64> = Vec::new();
    for len in 1..=max_length {
        digits.clear();
        digits.resize(len, lo);
        loop {
            if digits[len - 1] != 0 {
                let z = decode(basis, &digits)?;
                if in_box(&z) {
                    *hits.entry(z).or_default() += 1;
                }
            }
            // odometer increment
            let mut i = 0;
            while i < len && digits[i] == hi {
                digits[i] = lo;
                i += 1;
            }
            if i == len {
                break;
            }
            digits[i] += 1;
        }
    }
    Ok(RedundancyReport {
        max_length,
        strings_enumerated: strings,
        elements_with_multiple_expansions: hits.values().filter(|&&c| c > 1).count() as u64,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CnsBridge {
    pub basis: IntPoly,
    pub norm_bound: i64,
    pub kovacs: bool,
    pub standard: BoxReport,
    pub signed: BoxReport,
    pub notes: Vec<String>,
}

/// Base `theta` with minimal polynomial `x^n - a` from the generator
/// construction, checked on a box in both digit modes.
pub fn cns_from_monogenic(n: u64, a: &BigInt, u: u64, radius: u64, seed: u64) -> Result<CnsBridge> {
    construct_generator(n, a, u, seed)?;
    let g = IntPoly::binomial(n as usize, a);
    let kovacs = kovacs_hypothesis(&g)?;
    let standard_basis = CnsBasis::new(g.clone(), DigitMode::Standard)?;
    let signed_basis = CnsBasis::new(g.clone(), DigitMode::Signed)?;
    let cap = default_step_cap(&standard_basis, radius);
    let standard = verify_box(&standard_basis, radius, cap)?;
    let signed = verify_box(&signed_basis, radius, cap)?;
    let mut notes = Vec::new();
    if !kovacs {
        notes.push(format!(
            "{g} fails the coefficient chain 1 <= a_(n-1) <= ... <= a_0; the chain criterion gives no conclusion"
        ));
    }
    if standard.non_terminated > 0 {
        notes.push(format!(
            "standard digits leave {} of {} box elements unrepresented",
            standard.non_terminated, standard.total
        ));
    }
    Ok(CnsBridge {
        norm_bound: standard_basis.norm_bound,
        basis: g,
        kovacs,
        standard,
        signed,
        notes,
    })
}
