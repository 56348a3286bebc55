//! Weighted polynomials in `x, y` for the curve `f = x^p - y^q`.
//!
//! `x` has weight `q` and `y` has weight `p`, so `f` is homogeneous of weight
//! `pq`. The Euler field `E = q x ∂_x + p y ∂_y` acts on a weight-`w`
//! polynomial by `w`, and `V = q y^{q-1} ∂_x + p x^{p-1} ∂_y` raises weight by
//! `w0 = pq - p - q`.
//!
//! Inside a weight space `O_w` monomials are always listed by decreasing
//! `x`-exponent: `x^{a+cp} y^b, x^{a+(c-1)p} y^{b+q}, ..., x^a y^{b+cq}`.
//! Every matrix in the crate uses this order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{qi, Q};

/// Default weight truncation bound.
pub const DEFAULT_WMAX: i64 = 300;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CurveParams {
    p: i64,
    q: i64,
}

impl CurveParams {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p <= 0 || q <= 0 || p >= q || p.gcd(&q) != 1 {
            return Err(Error::InvalidCurve { p, q });
        }
        Ok(CurveParams { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn pq(&self) -> i64 {
        self.p * self.q
    }

    /// Weight of `V`: `pq - p - q`.
    pub fn w0(&self) -> i64 {
        self.p * self.q - self.p - self.q
    }

    pub fn weight(&self, m: Monomial) -> i64 {
        i64::from(m.x) * self.q + i64::from(m.y) * self.p
    }

    /// `f = x^p - y^q`.
    pub fn f(&self) -> WeightedPolynomial {
        let mut f = WeightedPolynomial::monomial(Monomial::new(self.p as u32, 0), Q::one());
        f.add_term(Monomial::new(0, self.q as u32), -Q::one());
        f
    }
}

/// `x^x y^y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial { x: self.x + other.x, y: self.y + other.y }
    }

    /// `"1"`, `"x"`, `"x^2*y^3"`, ...
    pub fn label(&self) -> String {
        let part = |v: &str, e: u32| match e {
            0 => None,
            1 => Some(String::from(v)),
            _ => Some(format!("{v}^{e}")),
        };
        let parts: Vec<String> = [part("x", self.x), part("y", self.y)].into_iter().flatten().collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// The unique `w = a q + b p + c pq` with `0 <= a < p`, `0 <= b < q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightIndex {
    pub w: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl WeightIndex {
    /// Whether `O_w` carries a cokernel representative `f^c x^a y^b`.
    pub fn has_cokernel(&self, params: &CurveParams) -> bool {
        self.a <= params.p - 2 && self.b <= params.q - 2 && self.c >= 0
    }
}

pub fn weight_decompose(w: i64, params: &CurveParams) -> WeightIndex {
    let (p, q) = (params.p, params.q);
    // a q ≡ w (mod p); q is invertible mod p.
    let a = (0..p).find(|a| (w - a * q).mod_floor(&p) == 0).expect("gcd(p, q) = 1");
    let r = (w - a * q) / p;
    let b = r.mod_floor(&q);
    let c = (r - b) / q;
    WeightIndex { w, a, b, c }
}

/// Monomial basis of `O_w` in decreasing `x`-exponent order; empty when `c < 0`.
pub fn weight_basis(w: i64, params: &CurveParams) -> Vec<Monomial> {
    let WeightIndex { a, b, c, .. } = weight_decompose(w, params);
    if c < 0 {
        return Vec::new();
    }
    (0..=c)
        .map(|i| Monomial::new((a + (c - i) * params.p) as u32, (b + i * params.q) as u32))
        .collect()
}

pub fn weight_dim(w: i64, params: &CurveParams) -> usize {
    let c = weight_decompose(w, params).c;
    (c.max(-1) + 1) as usize
}

/// Sparse polynomial with exact coefficients; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightedPolynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl WeightedPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(Monomial::new(1, 0), Q::one())
    }

    pub fn y() -> Self {
        Self::monomial(Monomial::new(0, 1), Q::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: Monomial) -> Q {
        self.terms.get(&m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(Monomial::ONE)
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        WeightedPolynomial { terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `Some(w)` if every term has weight `w`; `None` for mixed weights.
    /// The zero polynomial is homogeneous of every weight and returns `None`.
    pub fn homogeneous_weight(&self, params: &CurveParams) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| params.weight(*m));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, w: i64, params: &CurveParams) -> bool {
        self.terms.keys().all(|m| params.weight(*m) == w)
    }

    pub fn max_weight(&self, params: &CurveParams) -> Option<i64> {
        self.terms.keys().map(|m| params.weight(*m)).max()
    }

    /// Splits into weight-homogeneous components, ascending by weight.
    pub fn weight_components(&self, params: &CurveParams) -> BTreeMap<i64, WeightedPolynomial> {
        let mut out: BTreeMap<i64, WeightedPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(params.weight(*m)).or_default().add_term(*m, c.clone());
        }
        out
    }

    pub fn partial_x(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.x > 0 {
                out.add_term(Monomial::new(m.x - 1, m.y), c * qi(i64::from(m.x)));
            }
        }
        out
    }

    pub fn partial_y(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.y > 0 {
                out.add_term(Monomial::new(m.x, m.y - 1), c * qi(i64::from(m.y)));
            }
        }
        out
    }

    /// Human-readable sum such as `"x^2 - y^5"`.
    pub fn label(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        // Descending x-exponent, matching weight-space order.
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coef = crate::rational::to_string(&abs);
            if *m == Monomial::ONE {
                out.push_str(&coef);
            } else if abs.is_one() {
                out.push_str(&m.label());
            } else {
                out.push_str(&format!("{coef}*{}", m.label()));
            }
        }
        out
    }
}

impl fmt::Display for WeightedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Add for &WeightedPolynomial {
    type Output = WeightedPolynomial;
    fn add(self, rhs: &WeightedPolynomial) -> WeightedPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &WeightedPolynomial {
    type Output = WeightedPolynomial;
    fn sub(self, rhs: &WeightedPolynomial) -> WeightedPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Neg for &WeightedPolynomial {
    type Output = WeightedPolynomial;
    fn neg(self) -> WeightedPolynomial {
        WeightedPolynomial { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

impl Mul for &WeightedPolynomial {
    type Output = WeightedPolynomial;
    fn mul(self, rhs: &WeightedPolynomial) -> WeightedPolynomial {
        let mut out = WeightedPolynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(*m2), c1 * c2);
            }
        }
        out
    }
}

#[allow(non_snake_case)]
pub fn apply_E(g: &WeightedPolynomial, params: &CurveParams) -> WeightedPolynomial {
    let mut out = WeightedPolynomial::zero();
    for (m, c) in g.terms() {
        out.add_term(*m, c * qi(params.weight(*m)));
    }
    out
}

#[allow(non_snake_case)]
pub fn apply_V(g: &WeightedPolynomial, params: &CurveParams) -> WeightedPolynomial {
    let (p, q) = (params.p, params.q);
    let dx = &WeightedPolynomial::monomial(Monomial::new(0, (q - 1) as u32), qi(q)) * &g.partial_x();
    let dy = &WeightedPolynomial::monomial(Monomial::new((p - 1) as u32, 0), qi(p)) * &g.partial_y();
    &dx + &dy
}

/// Coordinates of a weight-`w` polynomial in the basis of `O_w`.
pub fn coords_in_weight(g: &WeightedPolynomial, w: i64, params: &CurveParams) -> Result<Vec<Q>> {
    let basis = weight_basis(w, params);
    let mut coords = vec![Q::zero(); basis.len()];
    for (m, c) in g.terms() {
        let idx = basis.iter().position(|b| b == m).ok_or_else(|| {
            Error::NotInSpan(format!("{} is not a monomial of weight {w}", m.label()))
        })?;
        coords[idx] = c.clone();
    }
    Ok(coords)
}

pub fn from_weight_coords(coords: &[Q], w: i64, params: &CurveParams) -> WeightedPolynomial {
    let mut out = WeightedPolynomial::zero();
    for (m, c) in weight_basis(w, params).into_iter().zip(coords) {
        out.add_term(m, c.clone());
    }
    out
}

/// Matrix of `V : O_w -> O_{w + w0}` in the weight-space bases.
pub fn v_matrix(w: i64, params: &CurveParams) -> Matrix {
    let src = weight_basis(w, params);
    let target = w + params.w0();
    let rows = weight_dim(target, params);
    let cols: Vec<Vec<Q>> = src
        .iter()
        .map(|m| {
            let image = apply_V(&WeightedPolynomial::monomial(*m, Q::one()), params);
            coords_in_weight(&image, target, params).expect("V raises weight by w0")
        })
        .collect();
    Matrix::from_columns(rows, &cols).expect("consistent shapes")
}

/// Basis of `ker V ∩ O_w`: `[f^{w/pq}]` when `pq | w`, otherwise empty.
pub fn kernel_v(w: i64, params: &CurveParams) -> Result<Vec<WeightedPolynomial>> {
    if w < 0 {
        return Err(Error::WeightOutOfRange { weight: w, reason: "kernel of V needs w >= 0" });
    }
    if w % params.pq() == 0 {
        Ok(vec![params.f().pow((w / params.pq()) as u32)])
    } else {
        Ok(Vec::new())
    }
}

/// The cokernel representative `f^c x^a y^b` of `V : O_{w-w0} -> O_w`, if any.
pub fn cokernel_rep(w: i64, params: &CurveParams) -> Option<WeightedPolynomial> {
    let idx = weight_decompose(w, params);
    idx.has_cokernel(params).then(|| {
        let xy = WeightedPolynomial::monomial(Monomial::new(idx.a as u32, idx.b as u32), Q::one());
        &params.f().pow(idx.c as u32) * &xy
    })
}

pub fn cokernel_v_basis(w: i64, params: &CurveParams) -> Result<Vec<WeightedPolynomial>> {
    if w < 0 {
        return Err(Error::WeightOutOfRange { weight: w, reason: "cokernel of V needs w >= 0" });
    }
    Ok(cokernel_rep(w, params).into_iter().collect())
}

/// The square matrix of `(λ, g) ↦ λ f^c x^a y^b + V(g)` from `C ⊕ O_{w-w0}` to `O_w`.
pub fn matrix_m(w: i64, params: &CurveParams) -> Result<Matrix> {
    let rep = cokernel_rep(w, params).ok_or(Error::WeightOutOfRange {
        weight: w,
        reason: "no cokernel representative at this weight",
    })?;
    let first = coords_in_weight(&rep, w, params)?;
    let v = v_matrix(w - params.w0(), params);
    let first = Matrix::from_columns(first.len(), &[first])?;
    let m = first.hstack(&v)?;
    debug_assert!(m.is_square());
    Ok(m)
}

pub fn matrix_m_determinant(w: i64, params: &CurveParams) -> Result<Q> {
    matrix_m(w, params)?.determinant()
}

/// Splits a weight-`w` polynomial as `λ · rep + V(u)` with `u ∈ O_{w-w0}`.
///
/// `λ` is `None` when `O_w` has no cokernel representative. When `V` has a
/// kernel on `O_{w-w0}` the returned `u` has its free coordinate set to zero.
pub fn split_modulo_image(
    g: &WeightedPolynomial,
    w: i64,
    params: &CurveParams,
) -> Result<(Option<Q>, WeightedPolynomial)> {
    let coords = coords_in_weight(g, w, params)?;
    let src_w = w - params.w0();
    match cokernel_rep(w, params) {
        Some(_) => {
            let sol = matrix_m(w, params)?
                .solve(&coords)
                .ok_or_else(|| Error::Invalid("M matrix is singular".into()))?;
            Ok((Some(sol[0].clone()), from_weight_coords(&sol[1..], src_w, params)))
        }
        None => {
            let sol = v_matrix(src_w, params).solve(&coords).ok_or_else(|| {
                Error::NotInSpan(format!("weight {w} component is not in the image of V"))
            })?;
            Ok((None, from_weight_coords(&sol, src_w, params)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: i64, q: i64) -> CurveParams {
        CurveParams::new(p, q).unwrap()
    }

    #[test]
    fn rejects_bad_curves() {
        assert!(CurveParams::new(2, 4).is_err());
        assert!(CurveParams::new(5, 3).is_err());
        assert!(CurveParams::new(0, 3).is_err());
        assert_eq!(params(2, 5).w0(), 3);
    }

    #[test]
    fn decompositions() {
        let pr = params(2, 5);
        assert_eq!(weight_decompose(7, &pr), WeightIndex { w: 7, a: 1, b: 1, c: 0 });
        assert_eq!(weight_decompose(0, &pr), WeightIndex { w: 0, a: 0, b: 0, c: 0 });
        assert_eq!(weight_decompose(3, &pr), WeightIndex { w: 3, a: 1, b: 4, c: -1 });
        assert_eq!(weight_decompose(0, &params(3, 7)).c, 0);
        assert_eq!(weight_decompose(-1, &pr).c, -1);
    }

    #[test]
    fn bases() {
        let pr = params(2, 5);
        assert_eq!(weight_basis(7, &pr), vec![Monomial::new(1, 1)]);
        assert_eq!(weight_basis(10, &pr), vec![Monomial::new(2, 0), Monomial::new(0, 5)]);
        assert!(weight_basis(3, &pr).is_empty());
    }

    #[test]
    fn euler_and_v() {
        let pr = params(2, 5);
        let xy = WeightedPolynomial::monomial(Monomial::new(1, 1), Q::one());
        assert_eq!(apply_E(&xy, &pr), xy.scale(&qi(7)));
        assert!(apply_E(&WeightedPolynomial::one(), &pr).is_zero());
        let f = pr.f();
        assert_eq!(apply_E(&f, &pr), f.scale(&qi(10)));
        assert!(apply_V(&f, &pr).is_zero());
        assert_eq!(
            apply_V(&WeightedPolynomial::x(), &pr),
            WeightedPolynomial::monomial(Monomial::new(0, 4), qi(5))
        );
        assert_eq!(apply_V(&WeightedPolynomial::y(), &pr), WeightedPolynomial::x().scale(&qi(2)));
    }

    #[test]
    fn kernel_and_cokernel() {
        let pr = params(2, 5);
        assert_eq!(kernel_v(10, &pr).unwrap(), vec![pr.f()]);
        assert!(kernel_v(7, &pr).unwrap().is_empty());
        assert_eq!(kernel_v(0, &pr).unwrap(), vec![WeightedPolynomial::one()]);
        assert!(kernel_v(-1, &pr).is_err());

        assert_eq!(cokernel_v_basis(2, &pr).unwrap(), vec![WeightedPolynomial::y()]);
        let y2 = WeightedPolynomial::monomial(Monomial::new(0, 2), Q::one());
        assert_eq!(cokernel_v_basis(14, &pr).unwrap(), vec![&pr.f() * &y2]);
        assert!(cokernel_v_basis(5, &pr).unwrap().is_empty());
    }

    #[test]
    fn m_determinants() {
        let pr = params(2, 5);
        assert_eq!(matrix_m_determinant(2, &pr).unwrap(), Q::one());
        assert!(matrix_m_determinant(12, &pr).unwrap() > Q::zero());
        assert!(matrix_m_determinant(22, &pr).unwrap() > Q::zero());
        assert!(matrix_m_determinant(5, &pr).is_err());
    }

    #[test]
    fn split_reconstructs() {
        let pr = params(2, 5);
        // weight 14: x^2 y^2 and y^7
        let g = &WeightedPolynomial::monomial(Monomial::new(2, 2), qi(3))
            + &WeightedPolynomial::monomial(Monomial::new(0, 7), qi(-4));
        let (lambda, u) = split_modulo_image(&g, 14, &pr).unwrap();
        let rep = cokernel_rep(14, &pr).unwrap();
        let rebuilt = &rep.scale(&lambda.unwrap()) + &apply_V(&u, &pr);
        assert_eq!(rebuilt, g);
    }

    #[test]
    fn labels() {
        let pr = params(2, 5);
        assert_eq!(pr.f().label(), "x^2 - y^5");
        assert_eq!(Monomial::new(1, 3).label(), "x*y^3");
        assert_eq!(WeightedPolynomial::zero().label(), "0");
    }
}
