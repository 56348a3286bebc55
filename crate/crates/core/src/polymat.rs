//! Square matrices with weighted-polynomial entries.
//!
//! Gauge elements of `Aut(S)` and connection coefficients are stored this
//! way: entry `(i, j)` of an `L_S`-eigenvalue-0 matrix is homogeneous of
//! weight `s_j - s_i + shift`, with `shift = 0` for `Aut(S)` and `U_0^0` and
//! `shift = w0` for `U_0^1`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::error::{Error, Result};
use crate::liecore::{LieMatrix, SemisimpleData};
use crate::linalg::Matrix;
use crate::rational::{factorial, Q};
use crate::wpoly::{apply_V, CurveParams, WeightedPolynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<WeightedPolynomial>,
}

impl PolyMatrix {
    pub fn zeros(n: usize) -> Self {
        PolyMatrix { n, entries: vec![WeightedPolynomial::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = WeightedPolynomial::one();
        }
        m
    }

    pub fn from_matrix(m: &LieMatrix) -> Self {
        let n = m.rows();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[i * n + j] = WeightedPolynomial::constant(m[(i, j)].clone());
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &WeightedPolynomial {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: WeightedPolynomial) {
        self.entries[i * self.n + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &WeightedPolynomial) {
        let idx = i * self.n + j;
        self.entries[idx] = &self.entries[idx] + v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    fn check_shape(&self, other: &PolyMatrix) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(alloc::format!("{} vs {}", self.n, other.n)))
        }
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.check_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(PolyMatrix { n: self.n, entries })
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.check_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(PolyMatrix { n: self.n, entries })
    }

    pub fn scale(&self, s: &Q) -> PolyMatrix {
        PolyMatrix { n: self.n, entries: self.entries.iter().map(|e| e.scale(s)).collect() }
    }

    pub fn neg(&self) -> PolyMatrix {
        self.scale(&-Q::one())
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.check_shape(other)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Entrywise `V`.
    pub fn apply_v(&self, params: &CurveParams) -> PolyMatrix {
        PolyMatrix { n: self.n, entries: self.entries.iter().map(|e| apply_V(e, params)).collect() }
    }

    /// Evaluation at `x = y = 0`.
    pub fn constant_term(&self) -> LieMatrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] = self.get(i, j).constant_term();
            }
        }
        m
    }

    pub fn max_weight(&self, params: &CurveParams) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.max_weight(params)).max()
    }

    /// Every entry `(i, j)` is homogeneous of weight `s_j - s_i + shift`.
    pub fn is_eigen_zero(&self, s: &SemisimpleData, params: &CurveParams, shift: i64) -> bool {
        s.pairs().all(|(i, j)| {
            let e = self.get(i, j);
            if e.is_zero() {
                return true;
            }
            let w = &s.diag()[j] - &s.diag()[i] + Q::from_integer(shift.into());
            w.is_integer() && e.is_homogeneous_of(crate::rational::as_i64(&w).unwrap_or(-1), params)
        })
    }

    /// `exp(X)` for nilpotent `X`; fails after `n` powers if `X^n != 0`.
    pub fn exp_nilpotent(&self) -> Result<PolyMatrix> {
        let mut out = Self::identity(self.n);
        let mut power = Self::identity(self.n);
        for k in 1..=self.n as u32 {
            power = power.mul(self)?;
            if power.is_zero() {
                return Ok(out);
            }
            out = out.add(&power.scale(&(Q::one() / factorial(k))))?;
        }
        Err(Error::NotNilpotent)
    }

    /// Inverse of `g = g(0) (1 + M)` with `M` nilpotent.
    pub fn inverse_unipotent_over_constant(&self) -> Result<PolyMatrix> {
        let g0 = self.constant_term();
        let g0_inv = g0.inverse()?;
        let g0_inv_p = PolyMatrix::from_matrix(&g0_inv);
        let m = g0_inv_p.mul(self)?.sub(&Self::identity(self.n))?;
        // (1 + M)^{-1} = Σ (-M)^k
        let neg_m = m.neg();
        let mut sum = Self::identity(self.n);
        let mut power = Self::identity(self.n);
        for _ in 0..=self.n {
            power = power.mul(&neg_m)?;
            if power.is_zero() {
                return sum.mul(&g0_inv_p);
            }
            sum = sum.add(&power)?;
        }
        Err(Error::NotNilpotent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liecore::elementary;
    use crate::rational::qi;
    use crate::wpoly::Monomial;

    #[test]
    fn inverse_round_trip() {
        let pr = CurveParams::new(2, 5).unwrap();
        let mut g = PolyMatrix::from_matrix(&Matrix::from_diagonal(&[qi(2), qi(3), qi(5)]));
        g.set(1, 2, pr.f());
        g.set(0, 2, WeightedPolynomial::monomial(Monomial::new(1, 3), qi(7)));
        let inv = g.inverse_unipotent_over_constant().unwrap();
        assert_eq!(g.mul(&inv).unwrap(), PolyMatrix::identity(3));
        assert_eq!(inv.mul(&g).unwrap(), PolyMatrix::identity(3));
    }

    #[test]
    fn exp_of_strict_upper() {
        let mut x = PolyMatrix::zeros(3);
        x.set(0, 1, WeightedPolynomial::y());
        x.set(1, 2, WeightedPolynomial::x());
        let e = x.exp_nilpotent().unwrap();
        assert_eq!(e.get(0, 2), &(&WeightedPolynomial::x() * &WeightedPolynomial::y()).scale(&crate::rational::q(1, 2)));
        let back = x.neg().exp_nilpotent().unwrap();
        assert_eq!(e.mul(&back).unwrap(), PolyMatrix::identity(3));
        assert!(PolyMatrix::from_matrix(&elementary(2, 0, 0)).exp_nilpotent().is_err());
    }
}
