//! `gl_n` data attached to a rational diagonal semisimple element `S`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{factorial, qi, Q};
use crate::wpoly::CurveParams;

/// Elements of `gl_n` are plain exact matrices.
pub type LieMatrix = Matrix;

/// Diagonal `S = diag(s_1, ..., s_n)`; indices are 0-based internally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemisimpleData {
    diag: Vec<Q>,
}

impl SemisimpleData {
    pub fn new(diag: Vec<Q>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Invalid("S must have at least one diagonal entry".into()));
        }
        Ok(SemisimpleData { diag })
    }

    pub fn from_integers(diag: &[i64]) -> Result<Self> {
        Self::new(diag.iter().map(|&d| qi(d)).collect())
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[Q] {
        &self.diag
    }

    /// `ad_S` eigenvalue of `E_ij`.
    pub fn eigenvalue(&self, i: usize, j: usize) -> Q {
        &self.diag[i] - &self.diag[j]
    }

    pub fn matrix(&self) -> LieMatrix {
        Matrix::from_diagonal(&self.diag)
    }

    /// Distinct eigenvalues of `ad_S`, ascending.
    pub fn ad_eigenvalues(&self) -> Vec<Q> {
        let set: BTreeSet<Q> = self.pairs().map(|(i, j)| self.eigenvalue(i, j)).collect();
        set.into_iter().collect()
    }

    /// All `(i, j)` in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
    }

    /// Every positive integer eigenvalue of `ad_S` exceeds `w0`.
    pub fn is_large_enough(&self, params: &CurveParams) -> bool {
        let w0 = qi(params.w0());
        self.ad_eigenvalues()
            .into_iter()
            .filter(|l| l.is_integer() && *l > Q::zero())
            .all(|l| l > w0)
    }
}

pub fn elementary(n: usize, i: usize, j: usize) -> LieMatrix {
    let mut m = Matrix::zeros(n, n);
    m[(i, j)] = Q::one();
    m
}

pub fn bracket(x: &LieMatrix, y: &LieMatrix) -> Result<LieMatrix> {
    x.commutator(y)
}

/// Trace form `k(X, Y) = tr(XY)`.
pub fn trace_form(x: &LieMatrix, y: &LieMatrix) -> Result<Q> {
    Ok(x.mul(y)?.trace())
}

/// Index pairs `(i, j)` with `s_i - s_j = λ`, row-major.
pub fn ad_eigenspace(s: &SemisimpleData, lambda: &Q) -> Vec<(usize, usize)> {
    s.pairs().filter(|&(i, j)| s.eigenvalue(i, j) == *lambda).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportPattern {
    n: usize,
    allowed: BTreeSet<(usize, usize)>,
}

impl SupportPattern {
    pub fn new(n: usize, allowed: impl IntoIterator<Item = (usize, usize)>) -> Self {
        SupportPattern { n, allowed: allowed.into_iter().collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.allowed.contains(&(i, j))
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.allowed.iter()
    }

    /// Dimension of the spanned subspace of `gl_n`.
    pub fn dim(&self) -> usize {
        self.allowed.len()
    }

    /// `(i,j), (j,k)` allowed implies `(i,k)` allowed.
    pub fn is_closed(&self) -> bool {
        self.allowed.iter().all(|&(i, j)| {
            self.allowed
                .range((j, 0)..(j + 1, 0))
                .all(|&(_, k)| self.allowed.contains(&(i, k)))
        })
    }

    pub fn check(&self, x: &LieMatrix) -> Result<()> {
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                if !x[(i, j)].is_zero() && !self.contains(i, j) {
                    return Err(Error::SupportViolation { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    /// Connected blocks of a symmetric pattern such as the centralizer.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut seen = alloc::vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut block = Vec::new();
            let mut stack = alloc::vec![start];
            seen[start] = true;
            while let Some(i) = stack.pop() {
                block.push(i);
                for j in 0..self.n {
                    if !seen[j] && (self.contains(i, j) || self.contains(j, i)) {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            block.sort_unstable();
            out.push(block);
        }
        out
    }
}

/// `G_S`: `(i, j)` allowed iff `s_i = s_j`.
pub fn centralizer_pattern(s: &SemisimpleData) -> SupportPattern {
    SupportPattern::new(s.n(), s.pairs().filter(|&(i, j)| s.diag[i] == s.diag[j]))
}

/// `P_S`: `(i, j)` allowed iff `s_j - s_i ∈ pq·Z_{≥0}`.
pub fn parabolic_pattern(s: &SemisimpleData, params: &CurveParams) -> SupportPattern {
    let pq = qi(params.pq());
    SupportPattern::new(
        s.n(),
        s.pairs().filter(|&(i, j)| {
            let k = (&s.diag[j] - &s.diag[i]) / &pq;
            k.is_integer() && k >= Q::zero()
        }),
    )
}

/// `dχ`: keep only the entries with `s_i = s_j`.
pub fn levi_projection(x: &LieMatrix, s: &SemisimpleData, params: &CurveParams) -> Result<LieMatrix> {
    parabolic_pattern(s, params).check(x)?;
    let mut out = x.clone();
    for (i, j) in s.pairs() {
        if s.diag[i] != s.diag[j] {
            out[(i, j)] = Q::zero();
        }
    }
    Ok(out)
}

/// Ranks of `N, N^2, ..., N^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanType {
    pub ranks: Vec<usize>,
}

impl JordanType {
    /// Sizes of the Jordan blocks, descending.
    pub fn block_sizes(&self) -> Vec<usize> {
        let n = self.ranks.len();
        // r_0 = n; number of blocks of size >= k is r_{k-1} - r_k.
        let r = |k: usize| if k == 0 { n } else { self.ranks[k - 1] };
        let mut sizes = Vec::new();
        for k in (1..=n).rev() {
            let at_least_k = r(k - 1) - r(k);
            let at_least_k1 = if k < n { r(k) - r(k + 1) } else { 0 };
            for _ in 0..(at_least_k - at_least_k1) {
                sizes.push(k);
            }
        }
        sizes
    }
}

pub fn jordan_type(x: &LieMatrix) -> Result<JordanType> {
    let n = x.rows();
    let mut ranks = Vec::with_capacity(n);
    let mut power = x.clone();
    for k in 0..n {
        if k > 0 {
            power = power.mul(x)?;
        }
        ranks.push(power.rank());
    }
    if ranks.last().copied().unwrap_or(0) != 0 {
        return Err(Error::NotNilpotent);
    }
    Ok(JordanType { ranks })
}

/// Whether `n` lies in the adjoint orbit of `n0` under the block group of `pattern`.
pub fn orbit_member(n: &LieMatrix, n0: &LieMatrix, pattern: &SupportPattern) -> Result<bool> {
    pattern.check(n)?;
    pattern.check(n0)?;
    for block in pattern.blocks() {
        let a = n.select(&block, &block);
        let b = n0.select(&block, &block);
        if jordan_type(&a)? != jordan_type(&b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `exp(X)` as a finite series for nilpotent `X`.
pub fn exp_nilpotent(x: &LieMatrix) -> Result<LieMatrix> {
    let n = x.rows();
    let mut out = Matrix::identity(n);
    let mut power = Matrix::identity(n);
    for k in 1..=n as u32 {
        power = power.mul(x)?;
        if power.is_zero() {
            return Ok(out);
        }
        out = out.add(&power.scale(&(Q::one() / factorial(k))))?;
    }
    if power.is_zero() {
        Ok(out)
    } else {
        Err(Error::NotNilpotent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn s0111() -> SemisimpleData {
        SemisimpleData::from_integers(&[0, 1, 11]).unwrap()
    }

    #[test]
    fn eigenspaces() {
        let s = s0111();
        assert_eq!(ad_eigenspace(&s, &qi(1)), [(1, 0)]);
        assert_eq!(ad_eigenspace(&s, &qi(-11)), [(0, 2)]);
        assert_eq!(ad_eigenspace(&s, &qi(0)), [(0, 0), (1, 1), (2, 2)]);
        assert!(ad_eigenspace(&s, &qi(4)).is_empty());
    }

    #[test]
    fn patterns() {
        let pr = CurveParams::new(2, 5).unwrap();
        let s = s0111();
        assert_eq!(centralizer_pattern(&s).dim(), 3);
        let p = parabolic_pattern(&s, &pr);
        assert_eq!(p.dim(), 4);
        assert!(p.contains(1, 2) && !p.contains(2, 1));
        assert!(p.is_closed());

        let borel = parabolic_pattern(&SemisimpleData::from_integers(&[10, 20, 30]).unwrap(), &pr);
        assert_eq!(borel.dim(), 6);
        assert!((0..3).all(|i| (i..3).all(|j| borel.contains(i, j))));

        let rep = centralizer_pattern(&SemisimpleData::from_integers(&[0, 0, 5]).unwrap());
        assert_eq!(rep.blocks(), [alloc::vec![0, 1], alloc::vec![2]]);
    }

    #[test]
    fn levi() {
        let pr = CurveParams::new(2, 5).unwrap();
        let s = s0111();
        assert!(levi_projection(&elementary(3, 1, 2), &s, &pr).unwrap().is_zero());
        let d = Matrix::from_diagonal(&[qi(1), qi(2), qi(3)]);
        assert_eq!(levi_projection(&d, &s, &pr).unwrap(), d);
        assert!(levi_projection(&elementary(3, 2, 1), &s, &pr).is_err());
    }

    #[test]
    fn orbits() {
        let full = SupportPattern::new(2, [(0, 0), (0, 1), (1, 0), (1, 1)]);
        let e12 = elementary(2, 0, 1);
        assert!(orbit_member(&e12, &e12.scale(&qi(2)), &full).unwrap());
        assert!(!orbit_member(&Matrix::zeros(2, 2), &e12, &full).unwrap());
        assert!(orbit_member(&Matrix::identity(2), &Matrix::identity(2), &full).is_err());
        let jt = jordan_type(&elementary(3, 0, 1)).unwrap();
        assert_eq!(jt.block_sizes(), [2, 1]);
    }

    #[test]
    fn exponentials() {
        assert_eq!(exp_nilpotent(&Matrix::zeros(2, 2)).unwrap(), Matrix::identity(2));
        let e12 = elementary(2, 0, 1);
        assert_eq!(exp_nilpotent(&e12).unwrap(), Matrix::identity(2).add(&e12).unwrap());
        let x = elementary(3, 0, 1).add(&elementary(3, 1, 2)).unwrap();
        let expected = Matrix::identity(3)
            .add(&x)
            .unwrap()
            .add(&x.mul(&x).unwrap().scale(&q(1, 2)))
            .unwrap();
        let ex = exp_nilpotent(&x).unwrap();
        assert_eq!(ex, expected);
        assert_eq!(ex.mul(&exp_nilpotent(&x.neg()).unwrap()).unwrap(), Matrix::identity(3));
        assert!(exp_nilpotent(&Matrix::identity(2)).is_err());
    }

    #[test]
    fn large_enough() {
        let pr = CurveParams::new(2, 5).unwrap();
        assert!(!s0111().is_large_enough(&pr));
        assert!(SemisimpleData::from_integers(&[0, 10]).unwrap().is_large_enough(&pr));
    }
}
