//! Polynomials and rational functions in free parameters, for exact family checks.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::rational::{to_string, Q};

/// Polynomial in `nvars` parameters; keys are exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl ParamPoly {
    pub fn zero(nvars: usize) -> Self {
        ParamPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Q::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Q) -> ParamPoly {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn neg(&self) -> ParamPoly {
        self.scale(&-Q::one())
    }

    pub fn sub(&self, other: &ParamPoly) -> ParamPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> ParamPoly {
        let mut acc = Self::constant(self.nvars, Q::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        let mut total = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            total += t;
        }
        total
    }

    pub fn label(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut s = to_string(c);
                for (name, &k) in names.iter().zip(e) {
                    match k {
                        0 => {}
                        1 => s = format!("{s}*{name}"),
                        _ => s = format!("{s}*{name}^{k}"),
                    }
                }
                s
            })
            .collect();
        parts.join(" + ")
    }
}

/// `num / den` without cancellation; zero iff `num` is the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFun {
    pub num: ParamPoly,
    pub den: ParamPoly,
}

impl RatFun {
    pub fn from_poly(p: ParamPoly) -> Self {
        let n = p.nvars();
        RatFun { num: p, den: ParamPoly::constant(n, Q::one()) }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::from_poly(ParamPoly::constant(nvars, c))
    }

    pub fn var(nvars: usize, k: usize) -> Self {
        Self::from_poly(ParamPoly::var(nvars, k))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        if self.den == other.den {
            return RatFun { num: self.num.add(&other.num), den: self.den.clone() };
        }
        RatFun {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        RatFun { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }
    }

    pub fn scale(&self, s: &Q) -> RatFun {
        RatFun { num: self.num.scale(s), den: self.den.clone() }
    }

    /// `None` when dividing by the zero function.
    pub fn div(&self, other: &RatFun) -> Option<RatFun> {
        if other.is_zero() {
            return None;
        }
        Some(RatFun { num: self.num.mul(&other.den), den: self.den.mul(&other.num) })
    }

    /// `None` at poles.
    pub fn eval(&self, point: &[Q]) -> Option<Q> {
        let d = self.den.eval(point);
        (!d.is_zero()).then(|| self.num.eval(point) / d)
    }
}
