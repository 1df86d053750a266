//! Prime splitting from principal polygons and residual polynomials, index
//! valuations, p-regularity and common index divisors.

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::arith::count_irreducibles;
use crate::fppoly::{factor, ExtField, Poly, PrimeField};
use crate::intpoly::IntPoly;
use crate::polygon::{phi_expand, polygon_index, principal_polygon, residual_polynomial};
use crate::{Error, Result};

/// One prime ideal candidate above `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorSlot {
    pub phi: IntPoly,
    /// `None` when `phi` divides `F` mod `p` exactly once and no polygon is needed.
    pub side_index: Option<usize>,
    #[serde(serialize_with = "render_residual")]
    pub residual_factor: Option<Poly<ExtField>>,
    pub e: u64,
    pub f: u64,
    pub multiplicity: usize,
    /// False when the side's residual polynomial is not separable; the slot is
    /// then only a factor of the residual, not an ideal.
    pub certain: bool,
}

fn render_residual<S: Serializer>(r: &Option<Poly<ExtField>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(p) => s.serialize_some(&p.to_string_var("y")),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexValuation {
    pub value: u64,
    /// `true`: equality; `false`: lower bound only.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeSplit {
    pub p: u64,
    pub exact: bool,
    pub index_valuation: IndexValuation,
    pub slots: Vec<FactorSlot>,
}

impl PrimeSplit {
    /// `sum e * f` over certain slots.
    pub fn degree_sum(&self) -> u64 {
        self.slots.iter().filter(|s| s.certain).map(|s| s.e * s.f).sum()
    }
}

pub fn ore_split(f: &IntPoly, p: u64, seed: u64) -> Result<PrimeSplit> {
    if !f.is_monic() {
        return Err(Error::NotMonic(f.to_string()));
    }
    let field = PrimeField::new(p)?;
    let fbar = f.reduce_mod(field);
    let mut slots = Vec::new();
    let mut index = 0u64;
    let mut exact = true;
    for (phi_bar, mult) in factor(&fbar, seed)?.iter() {
        let phi = IntPoly::lift(phi_bar);
        let deg_phi = phi_bar.degree().unwrap_or(0) as u64;
        if *mult == 1 {
            // one side of length 1: e = 1, residual of degree 1, no index contribution
            slots.push(FactorSlot {
                phi,
                side_index: None,
                residual_factor: None,
                e: 1,
                f: deg_phi,
                multiplicity: 1,
                certain: true,
            });
            continue;
        }
        let exp = phi_expand(f, &phi)?;
        let poly = principal_polygon(&exp, p)?;
        index += polygon_index(&poly, deg_phi);
        for (k, side) in poly.sides.iter().enumerate() {
            let residual = residual_polynomial(&exp, side, p)?;
            let parts = factor(&residual.poly, seed)?;
            let separable = parts.is_squarefree();
            exact &= separable;
            for (psi, n) in parts.iter() {
                slots.push(FactorSlot {
                    phi: phi.clone(),
                    side_index: Some(k),
                    residual_factor: Some(psi.clone()),
                    e: side.ramification as u64,
                    f: deg_phi * psi.degree().unwrap_or(0) as u64,
                    multiplicity: *n,
                    certain: separable,
                });
            }
        }
    }
    Ok(PrimeSplit {
        p,
        exact,
        index_valuation: IndexValuation {
            value: index,
            exact,
        },
        slots,
    })
}

pub fn is_p_regular(f: &IntPoly, p: u64, seed: u64) -> Result<bool> {
    Ok(ore_split(f, p, seed)?.exact)
}

/// `L_p(d)`: number of prime ideals above `p` of residue degree `d`.
pub fn primes_of_degree(split: &PrimeSplit, d: u64) -> Result<u64> {
    if !split.exact {
        return Err(Error::NotRegular);
    }
    Ok(split.slots.iter().filter(|s| s.f == d).count() as u64)
}

/// Smallest `d` with `L_p(d) > N_p(d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexDivisorWitness {
    pub p: u64,
    pub d: u64,
    pub primes: u64,
    #[serde(serialize_with = "crate::arith::serialize_biguint")]
    pub irreducibles: BigUint,
}

pub fn common_index_divisor(f: &IntPoly, p: u64, seed: u64) -> Result<Option<IndexDivisorWitness>> {
    let split = ore_split(f, p, seed)?;
    common_index_divisor_of(&split)
}

pub fn common_index_divisor_of(split: &PrimeSplit) -> Result<Option<IndexDivisorWitness>> {
    let mut degrees: Vec<u64> = split.slots.iter().map(|s| s.f).collect();
    degrees.sort_unstable();
    degrees.dedup();
    for d in degrees {
        let l = primes_of_degree(split, d)?;
        let n = count_irreducibles(split.p, d as u32)?;
        if BigUint::from(l) > n {
            return Ok(Some(IndexDivisorWitness {
                p: split.p,
                d,
                primes: l,
                irreducibles: n,
            }));
        }
    }
    Ok(None)
}
