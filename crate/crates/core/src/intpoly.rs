//! Dense polynomials with arbitrary precision integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::valuation_nonzero;
use crate::fppoly::{FpPoly, PrimeField};
use crate::{Error, Result};

/// Integer polynomial, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        while p.coeffs.last().is_some_and(|c| c.is_zero()) {
            p.coeffs.pop();
        }
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn one() -> Self {
        IntPoly::from_i64s(&[1])
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// `x^n - m`
    pub fn binomial(n: usize, m: &BigInt) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        coeffs[0] -= m;
        IntPoly::new(coeffs)
    }

    /// Lift of an `F_p` polynomial with coefficients in `[0, p)`.
    pub fn lift(f: &FpPoly) -> Self {
        IntPoly::new(f.coeffs().iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides every coefficient by `c`, failing if any division is inexact.
    pub fn exact_div_scalar(&self, c: &BigInt) -> Result<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return Err(Error::Precondition(format!("{c} does not divide {self}")));
            }
            out.push(q);
        }
        Ok(IntPoly::new(out))
    }

    pub fn derivative(&self) -> Self {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = IntPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Division by a monic polynomial over `Z`.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        if !divisor.is_monic() {
            return Err(Error::NotMonic(divisor.to_string()));
        }
        let dd = divisor.degree().expect("monic is nonzero");
        let Some(nd) = self.degree() else {
            return Ok((IntPoly::zero(), IntPoly::zero()));
        };
        if nd < dd {
            return Ok((IntPoly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = std::mem::take(&mut rem[i + dd]);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs[..dd].iter().enumerate() {
                if !dc.is_zero() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((IntPoly::new(quot), IntPoly::new(rem)))
    }

    /// Minimum `p`-adic valuation of the coefficients; `None` for zero.
    pub fn valuation(&self, p: u64) -> Option<u32> {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| valuation_nonzero(p, c.magnitude()))
            .min()
    }

    pub fn reduce_mod(&self, field: PrimeField) -> FpPoly {
        let p = BigInt::from(field.modulus());
        FpPoly::new(
            field,
            self.coeffs
                .iter()
                .map(|c| c.mod_floor(&p).to_u64().expect("residue fits"))
                .collect(),
        )
    }

    /// Resultant via fraction-free elimination on the Sylvester matrix.
    pub fn resultant(&self, other: &IntPoly) -> BigInt {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return BigInt::zero();
        };
        if m == 0 && n == 0 {
            return BigInt::one();
        }
        let size = m + n;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for row in 0..n {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                mat[row][row + j] = c.clone();
            }
        }
        for row in 0..m {
            for (j, c) in other.coeffs.iter().rev().enumerate() {
                mat[n + row][row + j] = c.clone();
            }
        }
        bareiss_determinant(mat)
    }

    /// `(-1)^(n(n-1)/2) * Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let Some(n) = self.degree() else {
            return BigInt::zero();
        };
        let res = self.resultant(&self.derivative());
        let lc = self.leading().expect("nonzero");
        let d = res / lc;
        if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
            -d
        } else {
            d
        }
    }
}

fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        IntPoly::new(out)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts `c_k x^k +- ... +- c_0`; `*` between coefficient and `x` is optional.
impl FromStr for IntPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms: Vec<(usize, BigInt)> = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let mut negative = false;
            if chars[i] == '+' || chars[i] == '-' {
                negative = chars[i] == '-';
                i += 1;
            } else if !terms.is_empty() {
                return Err(Error::Parse(format!("expected sign at position {i} in {s:?}")));
            }
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let has_coeff = !digits.is_empty();
            let mut coeff = if has_coeff {
                digits
                    .parse::<BigUint>()
                    .map(BigInt::from)
                    .map_err(|e| Error::Parse(e.to_string()))?
            } else {
                BigInt::one()
            };
            if i < chars.len() && chars[i] == '*' {
                if !has_coeff {
                    return Err(Error::Parse(format!("dangling '*' in {s:?}")));
                }
                i += 1;
                if i >= chars.len() || chars[i] != 'x' {
                    return Err(Error::Parse(format!("expected x after '*' in {s:?}")));
                }
            }
            let mut exp = 0usize;
            if i < chars.len() && chars[i] == 'x' {
                i += 1;
                exp = 1;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let digits: String = chars[start..i].iter().collect();
                    exp = digits
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
                }
            } else if !has_coeff {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            if negative {
                coeff = -coeff;
            }
            terms.push((exp, coeff));
        }
        let deg = terms.iter().map(|&(e, _)| e).max().unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for (e, c) in terms {
            coeffs[e] += c;
        }
        Ok(IntPoly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("x^4-17"), IntPoly::from_i64s(&[-17, 0, 0, 0, 1]));
        assert_eq!(p("x^2 + 2x + 2"), IntPoly::from_i64s(&[2, 2, 1]));
        assert_eq!(p("-x^3 + 2*x - 1"), IntPoly::from_i64s(&[-1, 2, 0, -1]));
        assert_eq!(p("5"), IntPoly::from_i64s(&[5]));
        assert_eq!(p("x - x"), IntPoly::zero());
        assert_eq!(p("x^6-30").to_string(), "x^6 - 30");
        assert_eq!(IntPoly::from_i64s(&[-1, 2, 0, -1]).to_string(), "-x^3 + 2x - 1");
        assert_eq!(IntPoly::zero().to_string(), "0");
        for bad in ["", "x^", "2**x", "x y", "++x", "3x2x"] {
            assert!(bad.parse::<IntPoly>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn monic_division() {
        let f = p("x^4 - 17");
        let (q, r) = f.div_rem_monic(&p("x - 1")).unwrap();
        assert_eq!(r, IntPoly::from_i64s(&[-16]));
        assert_eq!(&(&q * &p("x - 1")) + &r, f);
        assert!(f.div_rem_monic(&p("2x - 1")).is_err());
    }

    #[test]
    fn resultant_and_discriminant() {
        assert_eq!(p("x^3 - 2").discriminant(), BigInt::from(-108));
        assert_eq!(p("x^2 - 5").discriminant(), BigInt::from(20));
        assert_eq!(p("x^2 + x + 1").discriminant(), BigInt::from(-3));
        // Res(x - 2, x^2 + 1) = 5
        assert_eq!(p("x - 2").resultant(&p("x^2 + 1")), BigInt::from(5));
        assert_eq!(p("x^2 - 1").resultant(&p("x - 1")), BigInt::zero());
    }

    #[test]
    fn valuations() {
        assert_eq!(p("12x + 18").valuation(3), Some(1));
        assert_eq!(p("12x + 18").valuation(2), Some(1));
        assert_eq!(IntPoly::zero().valuation(2), None);
    }
}
