//! Contractions of finite based complexes and the homological perturbation lemma.
//!
//! Convention: `δh + hδ = id - ab`, `ba = id`, with side conditions
//! `ha = 0`, `bh = 0`, `hh = 0`. For a perturbation `π` of the big
//! differential the transferred data are
//!
//! ```text
//! a' = Σ (-hπ)^m a        b' = Σ b (-πh)^m
//! h' = Σ (-hπ)^m h        δ'_small = δ_small + Σ b (-πh)^m π a
//! ```

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::logdgla::{Basis, ComplexSlice, Dgla, DglaElement, U0Cohomology, U0Complex};
use crate::rational::Q;

/// `diff[k]` maps degree `k` to degree `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub dims: Vec<usize>,
    pub diff: Vec<Matrix>,
}

impl Complex {
    pub fn new(dims: Vec<usize>, diff: Vec<Matrix>) -> Result<Self> {
        if diff.len() + 1 != dims.len() {
            return Err(Error::ShapeMismatch("need one differential per adjacent degree pair".into()));
        }
        for (k, m) in diff.iter().enumerate() {
            if m.cols() != dims[k] || m.rows() != dims[k + 1] {
                return Err(Error::ShapeMismatch(format!("differential out of degree {k}")));
            }
        }
        Ok(Complex { dims, diff })
    }

    pub fn zero_differential(dims: Vec<usize>) -> Self {
        let diff = dims.windows(2).map(|w| Matrix::zeros(w[1], w[0])).collect();
        Complex { dims, diff }
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    /// `dim H^k`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        (0..self.dims.len())
            .map(|k| {
                let out_rank = if k < self.diff.len() { self.diff[k].rank() } else { 0 };
                let in_rank = if k > 0 { self.diff[k - 1].rank() } else { 0 };
                self.dims[k] - out_rank - in_rank
            })
            .collect()
    }

    fn d(&self, k: usize) -> Option<&Matrix> {
        self.diff.get(k)
    }
}

/// `a[k]: small_k -> big_k`, `b[k]: big_k -> small_k`, `h[k]: big_{k+1} -> big_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub small: Complex,
    pub big: Complex,
    pub a: Vec<Matrix>,
    pub b: Vec<Matrix>,
    pub h: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub degree: usize,
    pub holds: bool,
    /// First basis vector on which the identity fails.
    pub witness: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContractionReport {
    pub checks: Vec<IdentityCheck>,
}

impl ContractionReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    fn push(&mut self, name: &str, degree: usize, lhs: &Matrix, rhs: &Matrix) {
        let witness = lhs.first_differing_column(rhs);
        self.checks.push(IdentityCheck { name: name.into(), degree, holds: witness.is_none(), witness });
    }
}

impl Contraction {
    pub fn new(small: Complex, big: Complex, a: Vec<Matrix>, b: Vec<Matrix>, h: Vec<Matrix>) -> Result<Self> {
        let c = Contraction { small, big, a, b, h };
        c.check_shapes()?;
        Ok(c)
    }

    fn check_shapes(&self) -> Result<()> {
        let n = self.big.dims.len();
        if self.small.dims.len() != n || self.a.len() != n || self.b.len() != n || self.h.len() + 1 != n {
            return Err(Error::ShapeMismatch("contraction degree ranges differ".into()));
        }
        for k in 0..n {
            let (s, g) = (self.small.dims[k], self.big.dims[k]);
            if self.a[k].rows() != g || self.a[k].cols() != s || self.b[k].rows() != s || self.b[k].cols() != g {
                return Err(Error::ShapeMismatch(format!("a or b in degree {k}")));
            }
            if k + 1 < n && (self.h[k].rows() != g || self.h[k].cols() != self.big.dims[k + 1]) {
                return Err(Error::ShapeMismatch(format!("h out of degree {}", k + 1)));
            }
        }
        Ok(())
    }

    /// Small complex equal to the big one, `a = b = id`, `h = 0`.
    pub fn identity(big: Complex) -> Self {
        let a: Vec<Matrix> = big.dims.iter().map(|&d| Matrix::identity(d)).collect();
        let h = big.dims.windows(2).map(|w| Matrix::zeros(w[0], w[1])).collect();
        Contraction { small: big.clone(), big, b: a.clone(), a, h }
    }

    /// `[δ, h]` on big degree `k`.
    fn delta_h(&self, k: usize) -> Result<Matrix> {
        let g = self.big.dims[k];
        let mut out = Matrix::zeros(g, g);
        if k > 0 {
            out = out.add(&self.big.diff[k - 1].mul(&self.h[k - 1])?)?;
        }
        if let Some(d) = self.big.d(k) {
            out = out.add(&self.h[k].mul(d)?)?;
        }
        Ok(out)
    }

    pub fn verify(&self) -> Result<ContractionReport> {
        self.check_shapes()?;
        let mut r = ContractionReport::default();
        for k in 0..self.big.dims.len() {
            let (s, g) = (self.small.dims[k], self.big.dims[k]);
            r.push("b a = id", k, &self.b[k].mul(&self.a[k])?, &Matrix::identity(s));
            let id_minus_ab = Matrix::identity(g).sub(&self.a[k].mul(&self.b[k])?)?;
            r.push("[delta, h] = id - a b", k, &self.delta_h(k)?, &id_minus_ab);
            if k > 0 {
                r.push("h a = 0", k, &self.h[k - 1].mul(&self.a[k])?, &Matrix::zeros(self.big.dims[k - 1], s));
            }
            if k + 1 < self.big.dims.len() {
                let gn = self.big.dims[k + 1];
                r.push("b h = 0", k + 1, &self.b[k].mul(&self.h[k])?, &Matrix::zeros(s, gn));
                if k + 2 < self.big.dims.len() {
                    let hh = self.h[k].mul(&self.h[k + 1])?;
                    r.push("h h = 0", k + 2, &hh, &Matrix::zeros(g, self.big.dims[k + 2]));
                }
                r.push(
                    "a chain map",
                    k,
                    &self.big.diff[k].mul(&self.a[k])?,
                    &self.a[k + 1].mul(&self.small.diff[k])?,
                );
                r.push(
                    "b chain map",
                    k,
                    &self.b[k + 1].mul(&self.big.diff[k])?,
                    &self.small.diff[k].mul(&self.b[k])?,
                );
            }
        }
        Ok(r)
    }

    /// Exponents certifying `(h π)^m = 0` on every big degree.
    pub fn nilpotence_certificate(&self, pert: &[Matrix]) -> Result<Vec<usize>> {
        self.check_perturbation(pert)?;
        let mut out = Vec::new();
        for k in 0..self.big.dims.len() {
            let g = self.big.dims[k];
            let hp = if k < pert.len() { self.h[k].mul(&pert[k])? } else { Matrix::zeros(g, g) };
            let bound = g + 1;
            match hp.nilpotency_index(bound)? {
                Some(m) => out.push(m),
                None => return Err(Error::PerturbationNotNilpotent { bound }),
            }
        }
        Ok(out)
    }

    fn check_perturbation(&self, pert: &[Matrix]) -> Result<()> {
        if pert.len() != self.big.diff.len() {
            return Err(Error::ShapeMismatch("perturbation needs one map per differential".into()));
        }
        for (k, p) in pert.iter().enumerate() {
            if p.rows() != self.big.dims[k + 1] || p.cols() != self.big.dims[k] {
                return Err(Error::ShapeMismatch(format!("perturbation out of degree {k}")));
            }
        }
        Ok(())
    }

    /// Transfers the contraction along `δ_big -> δ_big + pert`.
    pub fn perturb(&self, pert: &[Matrix]) -> Result<Contraction> {
        let cert = self.nilpotence_certificate(pert)?;
        let n = self.big.dims.len();
        // K_k = Σ (-h π)^m on degree k; J_k = Σ (-π h)^m on degree k.
        let mut kk = Vec::with_capacity(n);
        let mut jj = Vec::with_capacity(n);
        for k in 0..n {
            let g = self.big.dims[k];
            let hp = if k < pert.len() { self.h[k].mul(&pert[k])?.neg() } else { Matrix::zeros(g, g) };
            kk.push(geometric_series(&hp, cert[k])?);
            let ph = if k > 0 { pert[k - 1].mul(&self.h[k - 1])?.neg() } else { Matrix::zeros(g, g) };
            // π h and h π share their nonzero nilpotency index up to one step
            jj.push(geometric_series(&ph, cert[k.saturating_sub(1)] + 1)?);
        }
        let a: Vec<Matrix> = (0..n).map(|k| kk[k].mul(&self.a[k])).collect::<Result<_>>()?;
        let b: Vec<Matrix> = (0..n).map(|k| self.b[k].mul(&jj[k])).collect::<Result<_>>()?;
        let h: Vec<Matrix> = (0..n - 1).map(|k| kk[k].mul(&self.h[k])).collect::<Result<_>>()?;
        let mut small_diff = Vec::with_capacity(n - 1);
        let mut big_diff = Vec::with_capacity(n - 1);
        for k in 0..n - 1 {
            let corr = self.b[k + 1].mul(&jj[k + 1])?.mul(&pert[k])?.mul(&self.a[k])?;
            small_diff.push(self.small.diff[k].add(&corr)?);
            big_diff.push(self.big.diff[k].add(&pert[k])?);
        }
        Contraction::new(
            Complex::new(self.small.dims.clone(), small_diff)?,
            Complex::new(self.big.dims.clone(), big_diff)?,
            a,
            b,
            h,
        )
    }
}

/// `Σ_{m < terms} x^m`, checking that `x^terms = 0`.
fn geometric_series(x: &Matrix, terms: usize) -> Result<Matrix> {
    let mut sum = Matrix::identity(x.rows());
    let mut power = Matrix::identity(x.rows());
    for _ in 1..terms {
        power = power.mul(x)?;
        if power.is_zero() {
            return Ok(sum);
        }
        sum = sum.add(&power)?;
    }
    if power.mul(x)?.is_zero() {
        Ok(sum)
    } else {
        Err(Error::PerturbationNotNilpotent { bound: terms })
    }
}

/// The slice of the splitting `L = L_0 ⊕ ⊕_{u≠0} L_u`: identity on the
/// 0-slice, `small = 0` and `h = ι_E / u` elsewhere.
pub fn slice_contraction(slice: &ComplexSlice) -> Result<Contraction> {
    let dims = slice.dims().to_vec();
    let big = Complex::new(dims.clone(), slice.delta.to_vec())?;
    if slice.u.is_zero() {
        return Ok(Contraction::identity(big));
    }
    let small = Complex::zero_differential(vec![0; dims.len()]);
    let a = dims.iter().map(|&d| Matrix::zeros(d, 0)).collect();
    let b = dims.iter().map(|&d| Matrix::zeros(0, d)).collect();
    let h = (0..dims.len() - 1).map(|k| slice.homotopy(k)).collect();
    Contraction::new(small, big, a, b, h)
}

/// Matrices of `ad_w` on a slice, degree `k -> k + 1`, for `w` of degree 1 and eigenvalue 0.
pub fn ad_on_slice(dgla: &Dgla, slice: &ComplexSlice, w: &DglaElement) -> Result<Vec<Matrix>> {
    (0..2)
        .map(|k| slice.bases[k].try_operator(&slice.bases[k + 1], &|x| dgla.bracket(w, x)))
        .collect()
}

/// The contraction of `U_0` onto `H^•(U_0)` with zero small differential.
#[derive(Clone, Debug)]
pub struct U0Contraction {
    pub complex: U0Complex,
    pub cohomology: U0Cohomology,
    pub contraction: Contraction,
    /// Indices into `U_0^0` of the unit vectors spanning the complement of `H^0`.
    pub complement: Vec<usize>,
}

pub fn u0_contraction(dgla: &Dgla) -> Result<U0Contraction> {
    let complex = dgla.u0_complex()?;
    let cohomology = dgla.cohomology_u0()?;
    let (n0, n1) = (complex.basis0.len(), complex.basis1.len());
    let h0 = coords_of(&complex.basis0, &cohomology.h0)?;
    let h1 = coords_of(&complex.basis1, &cohomology.h1)?;
    let (k0, k1) = (h0.len(), h1.len());

    // Complement of H^0: non-pivot unit vectors; each H^0 vector lives in one
    // (weight, ij) block so the pivots and the complement are weight-homogeneous.
    let complement = linalg::complement_coordinates(n0, &h0);
    let comp_cols: Vec<Vec<Q>> = complement.iter().map(|&i| linalg::unit(n0, i)).collect();
    let image_cols: Vec<Vec<Q>> =
        comp_cols.iter().map(|v| complex.delta.mul_vec(v)).collect::<Result<_>>()?;

    let t0 = columns(n0, h0.iter().chain(&comp_cols))?;
    let t1 = columns(n1, h1.iter().chain(&image_cols))?;
    if !t0.is_square() || !t1.is_square() {
        return Err(Error::Invalid("cohomology bases do not split U_0".into()));
    }
    let t0_inv = t0.inverse()?;
    let t1_inv = t1.inverse()?;
    let rows = |m: &Matrix, r: core::ops::Range<usize>| m.select(&r.collect::<Vec<_>>(), &(0..m.cols()).collect::<Vec<_>>());
    let b0 = rows(&t0_inv, 0..k0);
    let b1 = rows(&t1_inv, 0..k1);
    let comp = columns(n0, comp_cols.iter())?;
    let h = comp.mul(&rows(&t1_inv, k1..n1))?;

    let a0 = columns(n0, h0.iter())?;
    let a1 = columns(n1, h1.iter())?;
    let contraction = Contraction::new(
        Complex::zero_differential(vec![k0, k1]),
        Complex::new(vec![n0, n1], vec![complex.delta.clone()])?,
        vec![a0, a1],
        vec![b0, b1],
        vec![h],
    )?;
    Ok(U0Contraction { complex, cohomology, contraction, complement })
}

fn coords_of(basis: &Basis, elems: &[DglaElement]) -> Result<Vec<Vec<Q>>> {
    elems.iter().map(|e| basis.coords(e)).collect()
}

fn columns<'a>(rows: usize, cols: impl Iterator<Item = &'a Vec<Q>>) -> Result<Matrix> {
    let cols: Vec<Vec<Q>> = cols.cloned().collect();
    if cols.is_empty() {
        return Ok(Matrix::zeros(rows, 0));
    }
    Matrix::from_columns(rows, &cols)
}

/// `ad_γ` on `U_0` for `γ ∈ U_0^1`: the map `U_0^0 -> U_0^1`.
pub fn ad_on_u0(dgla: &Dgla, complex: &U0Complex, gamma: &DglaElement) -> Result<Matrix> {
    complex.basis0.try_operator(&complex.basis1, &|x| dgla.bracket(gamma, x))
}

/// Replaces `h` with zero, for exercising the failure path.
pub fn with_zero_homotopy(c: &Contraction) -> Contraction {
    let mut out = c.clone();
    for h in &mut out.h {
        *h = Matrix::zeros(h.rows(), h.cols());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liecore::SemisimpleData;
    use crate::rational::qi;
    use crate::wpoly::CurveParams;

    fn dgla(p: i64, q: i64, s: &[i64]) -> Dgla {
        Dgla::new(CurveParams::new(p, q).unwrap(), SemisimpleData::from_integers(s).unwrap())
    }

    #[test]
    fn slice_contractions_verify() {
        let g = dgla(2, 5, &[0, 1, 11]);
        for u in g.eigenvalues_up_to(10) {
            let c = slice_contraction(&g.slice(&u, 300).unwrap()).unwrap();
            assert!(c.verify().unwrap().all_pass(), "slice {u}");
        }
    }

    #[test]
    fn zero_homotopy_is_caught() {
        let g = dgla(2, 5, &[0, 1, 11]);
        let sl = g.slice(&qi(7), 300).unwrap();
        assert!(sl.dims()[1] > 0);
        let bad = with_zero_homotopy(&slice_contraction(&sl).unwrap());
        let report = bad.verify().unwrap();
        assert!(report.failures().any(|c| c.name == "[delta, h] = id - a b"));
    }

    #[test]
    fn u0_contraction_verifies() {
        for (p, q, s) in [(2, 5, vec![0, 1, 11]), (2, 3, vec![0, 5]), (2, 5, vec![10, 20, 30]), (2, 3, vec![0])] {
            let g = dgla(p, q, &s);
            let u = u0_contraction(&g).unwrap();
            assert!(u.contraction.verify().unwrap().all_pass(), "{p} {q} {s:?}");
        }
    }

    #[test]
    fn handmade_perturbation() {
        // big: C^2 -> C^2 with δ = [[1,0],[0,0]]; small: C -> C, zero differential
        let d = Matrix::from_rows(vec![vec![qi(1), qi(0)], vec![qi(0), qi(0)]]).unwrap();
        let big = Complex::new(vec![2, 2], vec![d]).unwrap();
        let small = Complex::zero_differential(vec![1, 1]);
        let a0 = Matrix::from_columns(2, &[vec![qi(0), qi(1)]]).unwrap();
        let b0 = Matrix::from_rows(vec![vec![qi(0), qi(1)]]).unwrap();
        let h = Matrix::from_rows(vec![vec![qi(1), qi(0)], vec![qi(0), qi(0)]]).unwrap();
        let c = Contraction::new(small, big, vec![a0.clone(), a0], vec![b0.clone(), b0], vec![h]).unwrap();
        assert!(c.verify().unwrap().all_pass());
        let pert = Matrix::from_rows(vec![vec![qi(0), qi(3)], vec![qi(0), qi(0)]]).unwrap();
        let c2 = c.perturb(&[pert]).unwrap();
        assert!(c2.verify().unwrap().all_pass());
        let zero = Matrix::zeros(2, 2);
        assert_eq!(c.perturb(&[zero]).unwrap().a, c.a);
    }

    #[test]
    fn non_nilpotent_is_rejected() {
        let d = Matrix::zeros(1, 1);
        let big = Complex::new(vec![1, 1], vec![d]).unwrap();
        let c = Contraction::new(
            Complex::zero_differential(vec![0, 0]),
            big,
            vec![Matrix::zeros(1, 0), Matrix::zeros(1, 0)],
            vec![Matrix::zeros(0, 1), Matrix::zeros(0, 1)],
            vec![Matrix::identity(1)],
        )
        .unwrap();
        assert!(matches!(c.perturb(&[Matrix::identity(1)]), Err(Error::PerturbationNotNilpotent { .. })));
    }
}
