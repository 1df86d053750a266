//! phi-adic developments, principal Newton polygons, residual polynomials and
//! the polygon index.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::fppoly::{is_irreducible, ExtField, FiniteField, FpPoly, FqElement, Poly, PrimeField};
use crate::intpoly::IntPoly;
use crate::{Error, Result};

/// `F = sum a_j * phi^j` with `deg a_j < deg phi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiExpansion {
    base: IntPoly,
    parts: Vec<IntPoly>,
}

impl PhiExpansion {
    pub fn base(&self) -> &IntPoly {
        &self.base
    }

    pub fn parts(&self) -> &[IntPoly] {
        &self.parts
    }

    /// Rebuilds `sum a_j * phi^j` by Horner's rule.
    pub fn reconstruct(&self) -> IntPoly {
        self.parts
            .iter()
            .rev()
            .fold(IntPoly::zero(), |acc, a| &(&acc * &self.base) + a)
    }
}

/// Repeated exact division by the monic `phi`.
pub fn phi_expand(f: &IntPoly, phi: &IntPoly) -> Result<PhiExpansion> {
    if !phi.is_monic() {
        return Err(Error::NotMonic(phi.to_string()));
    }
    if phi.degree() == Some(0) {
        return Err(Error::Precondition("phi must have positive degree".into()));
    }
    if *phi == IntPoly::from_i64s(&[0, 1]) {
        return Ok(PhiExpansion {
            base: phi.clone(),
            parts: f.coeffs().iter().map(|c| IntPoly::constant(c.clone())).collect(),
        });
    }
    let mut parts = Vec::new();
    let mut rest = f.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem_monic(phi)?;
        parts.push(r);
        rest = q;
    }
    Ok(PhiExpansion {
        base: phi.clone(),
        parts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }
}

/// A side of a principal polygon, from `start` (left) down to `end` (right).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Side {
    pub start: Point,
    pub end: Point,
    pub length: i64,
    pub height: i64,
    pub degree: i64,
    pub ramification: i64,
}

impl Side {
    pub fn new(start: Point, end: Point) -> Self {
        let length = end.x - start.x;
        let height = start.y - end.y;
        let degree = length.gcd(&height);
        Side {
            start,
            end,
            length,
            height,
            degree,
            ramification: length / degree,
        }
    }

    /// Exact slope `-height / length` in lowest terms.
    pub fn slope(&self) -> Ratio<i64> {
        Ratio::new(-self.height, self.length)
    }

    /// Whether the lattice point `(x, y)` lies on the supporting line.
    pub fn on_line(&self, pt: Point) -> bool {
        // (y - ys) * l == -(x - s) * h
        (pt.y - self.start.y) as i128 * self.length as i128
            == -((pt.x - self.start.x) as i128) * self.height as i128
    }

    /// Exact comparison of a point against the supporting line: >0 above, 0 on, <0 below.
    pub fn vertical_offset(&self, pt: Point) -> i128 {
        (pt.y - self.start.y) as i128 * self.length as i128
            + (pt.x - self.start.x) as i128 * self.height as i128
    }
}

/// Negative-slope part of the lower convex hull of the phi-adic cloud.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrincipalPolygon {
    pub vertices: Vec<Point>,
    pub sides: Vec<Side>,
    pub cloud: Vec<Point>,
}

impl PrincipalPolygon {
    /// Builds the principal part from an arbitrary point set.
    pub fn from_points(points: &[Point]) -> Self {
        let mut cloud = points.to_vec();
        cloud.sort();
        cloud.dedup_by_key(|p| p.x);
        let hull = lower_hull(&cloud);
        let mut vertices = Vec::new();
        let mut sides = Vec::new();
        if let Some(&first) = hull.first() {
            vertices.push(first);
            for w in hull.windows(2) {
                if w[1].y >= w[0].y {
                    break;
                }
                sides.push(Side::new(w[0], w[1]));
                vertices.push(w[1]);
            }
        }
        if sides.is_empty() {
            vertices.clear();
        }
        PrincipalPolygon {
            vertices,
            sides,
            cloud,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    pub fn length(&self) -> i64 {
        self.sides.iter().map(|s| s.length).sum()
    }

    pub fn render_model(&self) -> RenderModel {
        RenderModel {
            vertices: self.vertices.clone(),
            cloud: self.cloud.clone(),
            sides: self
                .sides
                .iter()
                .enumerate()
                .map(|(i, s)| LabeledSide {
                    label: format!("S{}", i + 1),
                    start: s.start,
                    end: s.end,
                    slope: s.slope().to_string(),
                })
                .collect(),
        }
    }
}

/// Vertex list plus side labels, for renderers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderModel {
    pub vertices: Vec<Point>,
    pub cloud: Vec<Point>,
    pub sides: Vec<LabeledSide>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledSide {
    pub label: String,
    pub start: Point,
    pub end: Point,
    pub slope: String,
}

/// Lower convex hull of points sorted by strictly increasing `x`; collinear
/// interior points are dropped.
pub fn lower_hull(points: &[Point]) -> Vec<Point> {
    let mut hull: Vec<Point> = Vec::with_capacity(points.len());
    for &pt in points {
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            let cross = (a.x - o.x) as i128 * (pt.y - o.y) as i128
                - (a.y - o.y) as i128 * (pt.x - o.x) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull
}

/// Cloud `{(j, v_p(a_j)) : a_j != 0}` and its principal polygon.
pub fn principal_polygon(exp: &PhiExpansion, p: u64) -> Result<PrincipalPolygon> {
    let field = PrimeField::new(p)?;
    let phi_bar = exp.base.reduce_mod(field);
    if !is_irreducible(&phi_bar) {
        return Err(Error::Precondition(format!(
            "{} is not irreducible modulo {p}",
            exp.base
        )));
    }
    if exp.parts.first().is_none_or(|a| a.is_zero()) {
        return Err(Error::Precondition(format!(
            "{} divides the polynomial over Z",
            exp.base
        )));
    }
    let cloud: Vec<Point> = exp
        .parts
        .iter()
        .enumerate()
        .filter_map(|(j, a)| a.valuation(p).map(|v| Point::new(j as i64, v as i64)))
        .collect();
    Ok(PrincipalPolygon::from_points(&cloud))
}

/// `deg_phi` times the number of lattice points with `x >= 1`, `y >= 1` on or
/// under the polygon.
pub fn polygon_index(poly: &PrincipalPolygon, deg_phi: u64) -> u64 {
    let mut count: u64 = 0;
    for side in &poly.sides {
        // integer abscissae in (start.x, end.x], never x = 0
        for x in (side.start.x + 1).max(1)..=side.end.x {
            let dx = (x - side.start.x) as i128;
            // floor(ys - h*dx/l) = ys - ceil(h*dx/l)
            let drop = Integer::div_ceil(&(side.height as i128 * dx), &(side.length as i128));
            let y = side.start.y as i128 - drop;
            if y > 0 {
                count += y as u64;
            }
        }
    }
    count * deg_phi
}

/// Residual polynomial of a side over `F_phi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualPolynomial {
    pub field: ExtField,
    pub side: Side,
    pub poly: Poly<ExtField>,
}

impl ResidualPolynomial {
    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    /// `c_s, c_(s+e), ..., c_(s+de)` as field elements.
    pub fn coefficients(&self) -> Vec<FqElement> {
        (0..=self.side.degree as usize)
            .map(|k| FqElement {
                base: self.field.modulus().clone(),
                rep: self.poly.coeff(k),
            })
            .collect()
    }

    pub fn to_string_var(&self) -> String {
        self.poly.to_string_var("y")
    }
}

pub fn residual_polynomial(exp: &PhiExpansion, side: &Side, p: u64) -> Result<ResidualPolynomial> {
    let prime = PrimeField::new(p)?;
    let field = ExtField::new(exp.base.reduce_mod(prime))?;
    let p_big = BigInt::from(p);
    let e = side.ramification;
    let mut coeffs = Vec::with_capacity(side.degree as usize + 1);
    for k in 0..=side.degree {
        let i = side.start.x + k * e;
        let a = exp.parts.get(i as usize).filter(|a| !a.is_zero());
        let c = match a {
            Some(a) => {
                let v = a.valuation(p).expect("nonzero part") as i64;
                if side.on_line(Point::new(i, v)) {
                    let unit = a.exact_div_scalar(&p_big.pow(v as u32))?;
                    field.element(&unit.reduce_mod(prime))
                } else {
                    field.zero()
                }
            }
            None => field.zero(),
        };
        coeffs.push(c);
    }
    let poly = Poly::new(field.clone(), coeffs);
    Ok(ResidualPolynomial {
        field,
        side: *side,
        poly,
    })
}

/// Reduction of `phi` modulo `p`, used for lifting conventions.
pub fn reduce_phi(phi: &IntPoly, p: u64) -> Result<FpPoly> {
    Ok(phi.reduce_mod(PrimeField::new(p)?))
}
