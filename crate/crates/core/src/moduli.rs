//! The finite moduli model `W(A)` and its gauge theory.
//!
//! A point is `Cβ + Nα0` with `C ∈ U_0^1` and `N ∈ U_0^0`, stored as
//! coordinate vectors in the `U_0` bases. Its curvature is the `β∧α0`
//! coefficient `V(N) + [C, N] ∈ U_0^1`; the Maurer–Cartan locus is where it
//! vanishes. Gauge elements are polynomial matrices `g` of `L_S`-eigenvalue 0
//! acting by `(C, N) ↦ (gCg⁻¹ - V(g)g⁻¹, gNg⁻¹)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hpt::{self, u0_contraction, U0Contraction};
use crate::liecore::{
    centralizer_pattern, jordan_type, orbit_member, parabolic_pattern, LieMatrix, SemisimpleData,
    SupportPattern,
};
use crate::linalg::{self, Matrix};
use crate::logdgla::{Basis, ComplexSlice, Dgla, DglaElement, Form, Term};
use crate::param::RatFun;
use crate::polymat::PolyMatrix;
use crate::rational::Q;
use crate::wpoly::{CurveParams, WeightedPolynomial, DEFAULT_WMAX};

/// `U_0`, its cohomology and the contraction between them.
#[derive(Clone, Debug)]
pub struct FiniteModel {
    pub dgla: Dgla,
    pub u0: U0Contraction,
    pub wmax: i64,
}

/// `Cβ + Nα0` in the `U_0^1` and `U_0^0` bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub c: Vec<Q>,
    pub n: Vec<Q>,
}

impl FiniteModel {
    pub fn new(params: CurveParams, s: SemisimpleData) -> Result<Self> {
        Self::with_wmax(params, s, DEFAULT_WMAX)
    }

    pub fn with_wmax(params: CurveParams, s: SemisimpleData, wmax: i64) -> Result<Self> {
        let dgla = Dgla::new(params, s);
        let bound = dgla.u0_weight_bound();
        if bound > wmax {
            return Err(Error::TruncationOverflow { weight: bound, max: wmax });
        }
        let u0 = u0_contraction(&dgla)?;
        Ok(FiniteModel { dgla, u0, wmax })
    }

    pub fn params(&self) -> &CurveParams {
        &self.dgla.params
    }

    pub fn s(&self) -> &SemisimpleData {
        &self.dgla.s
    }

    pub fn n(&self) -> usize {
        self.dgla.n()
    }

    pub fn basis0(&self) -> &Basis {
        &self.u0.complex.basis0
    }

    pub fn basis1(&self) -> &Basis {
        &self.u0.complex.basis1
    }

    pub fn zero_connection(&self) -> Connection {
        Connection { c: vec![Q::zero(); self.basis1().len()], n: vec![Q::zero(); self.basis0().len()] }
    }

    pub fn check_connection(&self, w: &Connection) -> Result<()> {
        if w.c.len() != self.basis1().len() || w.n.len() != self.basis0().len() {
            return Err(Error::ShapeMismatch(format!(
                "connection needs {} C and {} N coordinates",
                self.basis1().len(),
                self.basis0().len()
            )));
        }
        Ok(())
    }

    pub fn to_polymat(&self, basis: &Basis, coords: &[Q]) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(self.n());
        for (t, c) in basis.terms().iter().zip(coords) {
            if !c.is_zero() {
                m.add_to(t.i, t.j, &WeightedPolynomial::monomial(t.mono, c.clone()));
            }
        }
        m
    }

    pub fn from_polymat(&self, basis: &Basis, m: &PolyMatrix, form: Form) -> Result<Vec<Q>> {
        let mut e = DglaElement::zero();
        for i in 0..self.n() {
            for j in 0..self.n() {
                e = e.add(&DglaElement::from_poly(m.get(i, j), i, j, form));
            }
        }
        basis.coords(&e)
    }

    /// `Cβ + Nα0` as a degree-1 dgla element.
    pub fn to_element(&self, w: &Connection) -> DglaElement {
        let c = self.basis1().element(&w.c);
        let mut n = DglaElement::zero();
        for (t, x) in self.basis0().terms().iter().zip(&w.n) {
            n.add_term(Term { form: Form::Alpha0, ..*t }, x.clone());
        }
        c.add(&n)
    }

    pub fn weight(&self, t: &Term) -> i64 {
        self.params().weight(t.mono)
    }

    /// `V(N) + [C, N]` in `U_0^1` coordinates.
    pub fn curvature(&self, w: &Connection) -> Result<Vec<Q>> {
        self.check_connection(w)?;
        let c = self.to_polymat(self.basis1(), &w.c);
        let n = self.to_polymat(self.basis0(), &w.n);
        let f = n.apply_v(self.params()).add(&c.commutator(&n)?)?;
        self.from_polymat(self.basis1(), &f, Form::Beta)
    }

    /// `F = Lin·N + Σ_k C_k Bil_k·N`.
    pub fn curvature_structure(&self) -> Result<CurvatureStructure> {
        let (m0, m1) = (self.basis0().len(), self.basis1().len());
        let lin = self.u0.complex.delta.clone();
        let mut bil = Vec::with_capacity(m1);
        for k in 0..m1 {
            let ck = self.to_polymat(self.basis1(), &linalg::unit(m1, k));
            let cols = (0..m0)
                .map(|l| {
                    let nl = self.to_polymat(self.basis0(), &linalg::unit(m0, l));
                    self.from_polymat(self.basis1(), &ck.commutator(&nl)?, Form::Beta)
                })
                .collect::<Result<Vec<_>>>()?;
            bil.push(if cols.is_empty() { Matrix::zeros(m1, 0) } else { Matrix::from_columns(m1, &cols)? });
        }
        Ok(CurvatureStructure { lin, bil })
    }

    /// `N(0)`.
    pub fn residue(&self, w: &Connection) -> Result<LieMatrix> {
        self.check_connection(w)?;
        Ok(self.to_polymat(self.basis0(), &w.n).constant_term())
    }

    /// `N(0) ∈ G_S ∗ N0`.
    pub fn in_wa(&self, w: &Connection, rd: &ResidueDatum) -> Result<bool> {
        let res = self.residue(w)?;
        orbit_member(&res, &rd.n0, &centralizer_pattern(self.s()))
    }

    pub fn mc_verify(&self, w: &Connection) -> Result<McReport> {
        let residual = self.curvature(w)?;
        let is_mc = linalg::vec_is_zero(&residual);
        Ok(McReport { labels: self.basis1().labels(), residual, is_mc })
    }

    pub fn mc_family_verify(&self, family: &Family) -> Result<FamilyReport> {
        family.check(self)?;
        let st = self.curvature_structure()?;
        let m1 = self.basis1().len();
        let zero = RatFun::constant(family.nvars, Q::zero());
        let mut residuals = vec![zero; m1];
        for (r, res) in residuals.iter_mut().enumerate() {
            for (l, nl) in family.n.iter().enumerate() {
                let a = &st.lin[(r, l)];
                if !a.is_zero() {
                    *res = res.add(&nl.scale(a));
                }
                for (k, ck) in family.c.iter().enumerate() {
                    let b = &st.bil[k][(r, l)];
                    if !b.is_zero() {
                        *res = res.add(&ck.mul(nl).scale(b));
                    }
                }
            }
        }
        let holds = residuals.iter().all(RatFun::is_zero);
        Ok(FamilyReport { labels: self.basis1().labels(), residuals, holds })
    }

    /// `g ∗ (C, N)` for a polynomial gauge matrix of eigenvalue 0.
    pub fn gauge_act(&self, g: &PolyMatrix, w: &Connection) -> Result<Connection> {
        self.check_connection(w)?;
        if !g.is_eigen_zero(self.s(), self.params(), 0) {
            return Err(Error::Invalid("gauge element is not in Aut(S)".into()));
        }
        if let Some(mw) = g.max_weight(self.params()) {
            if mw > self.wmax {
                return Err(Error::TruncationOverflow { weight: mw, max: self.wmax });
            }
        }
        let g_inv = g.inverse_unipotent_over_constant()?;
        let c = self.to_polymat(self.basis1(), &w.c);
        let n = self.to_polymat(self.basis0(), &w.n);
        let c2 = g.mul(&c)?.mul(&g_inv)?.sub(&g.apply_v(self.params()).mul(&g_inv)?)?;
        let n2 = g.mul(&n)?.mul(&g_inv)?;
        Ok(Connection {
            c: self.from_polymat(self.basis1(), &c2, Form::Beta)?,
            n: self.from_polymat(self.basis0(), &n2, Form::One)?,
        })
    }

    /// Projection of `U_0^1` onto `Im δ` along `H^1`.
    pub fn image_part(&self, gamma: &[Q]) -> Result<Vec<Q>> {
        let c = &self.u0.contraction;
        let ab = c.a[1].mul_vec(&c.b[1].mul_vec(gamma)?)?;
        Ok(linalg::vec_sub(gamma, &ab))
    }

    pub fn is_large_enough(&self) -> bool {
        self.s().is_large_enough(self.params())
    }

    /// Gauges `γ ∈ U_0^1` into `H^1(U_0)`.
    ///
    /// First sweeps weights upward, killing the lowest non-`H^1` weight with
    /// `u = h(γ_{w'})`. If a step lowers that weight again (possible when `S`
    /// is not large enough) it switches to Newton steps on the linearized
    /// action `u ↦ π([u, γ] - V(u))` over the positive-weight complement.
    pub fn normalize_to_h1(&self, gamma: &[Q]) -> Result<Normalized> {
        let mut w = Connection { c: gamma.to_vec(), n: vec![Q::zero(); self.basis0().len()] };
        self.check_connection(&w)?;
        let mut word = GaugeWord::identity(self.n());
        let mut last_weight = i64::MIN;
        let mut sweeping = true;
        let max_steps = 4 * (self.basis1().len() + 2);
        for _ in 0..max_steps {
            let pi = self.image_part(&w.c)?;
            let Some(lowest) = self.lowest_weight(&pi) else {
                return Ok(Normalized { h1_coords: self.u0.contraction.b[1].mul_vec(&w.c)?, gamma: w.c, word });
            };
            if lowest <= last_weight {
                sweeping = false;
            }
            last_weight = lowest;
            let u = if sweeping {
                let part: Vec<Q> = pi
                    .iter()
                    .zip(self.basis1().terms())
                    .map(|(x, t)| if self.weight(t) == lowest { x.clone() } else { Q::zero() })
                    .collect();
                self.u0.contraction.h[0].mul_vec(&part)?
            } else {
                self.newton_step(&w.c, &pi)?
            };
            let g = self.to_polymat(self.basis0(), &u).exp_nilpotent()?;
            w = self.gauge_act(&g, &w)?;
            word.factors.push(u);
        }
        Err(Error::NormalizationObstructed(format!("no convergence after {max_steps} steps")))
    }

    fn lowest_weight(&self, v: &[Q]) -> Option<i64> {
        v.iter().zip(self.basis1().terms()).filter(|(x, _)| !x.is_zero()).map(|(_, t)| self.weight(t)).min()
    }

    fn newton_step(&self, gamma: &[Q], pi: &[Q]) -> Result<Vec<Q>> {
        let m0 = self.basis0().len();
        let unknowns: Vec<usize> = self
            .u0
            .complement
            .iter()
            .copied()
            .filter(|&k| self.weight(&self.basis0().terms()[k]) > 0)
            .collect();
        let c = self.to_polymat(self.basis1(), gamma);
        let cols = unknowns
            .iter()
            .map(|&k| {
                let u = self.to_polymat(self.basis0(), &linalg::unit(m0, k));
                let lin = u.commutator(&c)?.sub(&u.apply_v(self.params()))?;
                self.image_part(&self.from_polymat(self.basis1(), &lin, Form::Beta)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let rhs: Vec<Q> = pi.iter().map(|x| -x.clone()).collect();
        let sol = linalg::coordinates_in(self.basis1().len(), &cols, &rhs).ok_or_else(|| {
            Error::NormalizationObstructed("linearized gauge action does not reach the image of V".into())
        })?;
        let mut u = vec![Q::zero(); m0];
        for (k, x) in unknowns.iter().zip(sol) {
            u[*k] = x;
        }
        Ok(u)
    }

    /// `Q(A)` data: `H^1`, `P_S`, the Levi kernel and `F_S(C, N) = [C, N]`.
    pub fn qa_data(&self, rd: &ResidueDatum) -> Result<QaData> {
        let h0 = &self.u0.cohomology.h0;
        let h1 = &self.u0.cohomology.h1;
        let nilradical: Vec<String> = h0
            .iter()
            .filter(|e| e.terms().all(|(t, _)| self.weight(t) > 0))
            .map(|e| e.terms().next().map(|(t, _)| format!("f^{}*E{}{}", self.weight(t) / self.params().pq(), t.i + 1, t.j + 1)).unwrap_or_default())
            .collect();
        let b1 = &self.u0.contraction.b[1];
        let mut fs = Vec::with_capacity(h1.len());
        for c in h1 {
            let cm = self.to_polymat(self.basis1(), &self.basis1().coords(c)?);
            let cols = h0
                .iter()
                .map(|nn| {
                    let nm = self.to_polymat(self.basis0(), &self.basis0().coords(nn)?);
                    let br = self.from_polymat(self.basis1(), &cm.commutator(&nm)?, Form::Beta)?;
                    b1.mul_vec(&br)
                })
                .collect::<Result<Vec<_>>>()?;
            fs.push(if cols.is_empty() { Matrix::zeros(h1.len(), 0) } else { Matrix::from_columns(h1.len(), &cols)? });
        }
        Ok(QaData {
            h1_labels: h1.iter().map(DglaElement::label).collect(),
            h0_labels: h0.iter().map(DglaElement::label).collect(),
            parabolic: parabolic_pattern(self.s(), self.params()),
            nilradical,
            orbit_jordan_type: jordan_type(&rd.n0)?.block_sizes(),
            fs,
        })
    }

    /// Products `C_ij C_ji` over pairs whose `U_0^1` blocks are one-dimensional.
    pub fn pair_products(&self, c: &[Q]) -> Vec<(String, Q)> {
        let terms = self.basis1().terms();
        let mut out = Vec::new();
        for (k, t) in terms.iter().enumerate() {
            if t.i >= t.j || terms.iter().filter(|o| o.i == t.i && o.j == t.j).count() != 1 {
                continue;
            }
            let partner: Vec<usize> =
                (0..terms.len()).filter(|&l| terms[l].i == t.j && terms[l].j == t.i).collect();
            if let [l] = partner[..] {
                out.push((format!("C{}{}*C{}{}", t.j + 1, t.i + 1, t.i + 1, t.j + 1), &c[k] * &c[l]));
            }
        }
        out
    }

    fn slice0(&self) -> Result<ComplexSlice> {
        self.dgla.slice(&Q::zero(), self.dgla.u0_weight_bound())
    }

    /// Tangent complex of `[W(A)/Aut(S)]` at an MC point.
    pub fn tangent_complex(&self, w: &Connection) -> Result<TangentComplexData> {
        if !self.mc_verify(w)?.is_mc {
            return Err(Error::NotMaurerCartan);
        }
        let slice = self.slice0()?;
        let elem = self.to_element(w);
        let ad = hpt::ad_on_slice(&self.dgla, &slice, &elem)?;
        let d0 = slice.delta[0].add(&ad[0])?;
        let d1 = slice.delta[1].add(&ad[1])?;
        let res = self.residue(w)?;
        let r = residue_tangent(&slice.bases[1], &res, |i, j| self.s().diag()[i] == self.s().diag()[j])?;
        let t1 = t1_subspace(&slice.bases[1], &r, |t| self.weight(t) == 0)?;
        Ok(TangentComplexData {
            labels: [slice.bases[0].labels_with_form(), slice.bases[1].labels_with_form(), slice.bases[2].labels_with_form()],
            d0,
            d1,
            t1,
        })
    }

    pub fn tangent_cohomology_dims(&self, w: &Connection) -> Result<(usize, usize, usize)> {
        let t = self.tangent_complex(w)?;
        Ok(t.cohomology_dims())
    }

    /// The `Q(A)` tangent complex at `(0, N)`, embedded in the `W(A)` one.
    pub fn q_tangent_inclusion(&self, n: &[Q]) -> Result<QuasiIsoCheck> {
        let w = Connection { c: vec![Q::zero(); self.basis1().len()], n: n.to_vec() };
        let tw = self.tangent_complex(&w)?;
        let slice = self.slice0()?;
        let b = &slice.bases;
        let h0 = &self.u0.cohomology.h0;
        let h1 = &self.u0.cohomology.h1;
        let embed = |basis: &Basis, e: &DglaElement, form: Form| {
            let mut moved = DglaElement::zero();
            for (t, c) in e.terms() {
                moved.add_term(Term { form, ..*t }, c.clone());
            }
            basis.coords(&moved)
        };
        let i0: Vec<Vec<Q>> = h0.iter().map(|e| embed(&b[0], e, Form::One)).collect::<Result<_>>()?;
        let mut i1: Vec<Vec<Q>> = h1.iter().map(|e| embed(&b[1], e, Form::Beta)).collect::<Result<_>>()?;
        for e in h0.iter().filter(|e| e.terms().all(|(t, _)| self.weight(t) > 0)) {
            i1.push(embed(&b[1], e, Form::Alpha0)?);
        }
        // weight-0 part of H^0 is g_S; keep its intersection with the residue tangent space
        let res = self.residue(&w)?;
        let r = residue_tangent(&b[1], &res, |i, j| self.s().diag()[i] == self.s().diag()[j])?;
        i1.extend(r);
        let i2: Vec<Vec<Q>> = h1.iter().map(|e| embed(&b[2], e, Form::Alpha0Beta)).collect::<Result<_>>()?;

        let dims = [b[0].len(), b[1].len(), b[2].len()];
        let sub = [cols(dims[0], &i0)?, cols(dims[1], &i1)?, cols(dims[2], &i2)?];
        let amb = [Matrix::identity(dims[0]), tw.t1.clone(), Matrix::identity(dims[2])];
        let diffs = [&tw.d0, &tw.d1];
        let closed = (0..2).all(|k| contains(&sub[k + 1], &diffs[k].mul(&sub[k]).unwrap()));
        let q_dims = subcomplex_dims(&diffs, &sub)?;
        let w_dims = subcomplex_dims(&diffs, &amb)?;
        let mut injective = true;
        for k in 0..3 {
            let z_q = cycles(&diffs, &sub, k)?;
            let b_w = boundaries(&diffs, &amb, k)?;
            let r_bw = b_w.rank();
            let joint = if z_q.cols() == 0 { r_bw } else { b_w.hstack(&z_q)?.rank() };
            injective &= joint - r_bw == q_dims[k];
        }
        Ok(QuasiIsoCheck { q_dims, w_dims, subcomplex_closed: closed, injective_on_cohomology: injective })
    }

    /// Cohomology of the `u ≠ 0` slices of the full complex at `w`, with
    /// the residue condition `Im ad_{S + N(0)}` on constant `α0` terms.
    pub fn big_model_slice_dims(&self, w: &Connection, max_weight: i64) -> Result<Vec<(Q, [usize; 3])>> {
        if !self.mc_verify(w)?.is_mc {
            return Err(Error::NotMaurerCartan);
        }
        let elem = self.to_element(w);
        let a = self.s().matrix().add(&self.residue(w)?)?;
        let mut out = Vec::new();
        for u in self.dgla.eigenvalues_up_to(max_weight) {
            if u.is_zero() {
                continue;
            }
            let slice = self.dgla.slice(&u, self.wmax)?;
            let ad = hpt::ad_on_slice(&self.dgla, &slice, &elem)?;
            let d0 = slice.delta[0].add(&ad[0])?;
            let d1 = slice.delta[1].add(&ad[1])?;
            let r = residue_tangent(&slice.bases[1], &a, |_, _| true)?;
            let t1 = t1_subspace(&slice.bases[1], &r, |t| self.weight(t) == 0)?;
            let t = TangentComplexData { labels: Default::default(), d0, d1, t1 };
            let (h0, h1, h2) = t.cohomology_dims();
            out.push((u, [h0, h1, h2]));
        }
        Ok(out)
    }
}

/// One `L_S`-eigenvalue slice of the full contraction, perturbed by `ad_w`.
#[derive(Clone, Debug)]
pub struct SlicePerturbation {
    pub u: Q,
    pub perturbed: hpt::Contraction,
    pub report: hpt::ContractionReport,
    pub a_unchanged: bool,
    pub b_unchanged: bool,
    /// `h'` kills the `U` part and lands in it.
    pub h_respects_splitting: bool,
}

impl FiniteModel {
    /// Perturbs the slice contractions with eigenvalue up to `max_eigen` by `ad_w`.
    pub fn perturb_slices(&self, w: &Connection, max_eigen: i64) -> Result<Vec<SlicePerturbation>> {
        if !self.mc_verify(w)?.is_mc {
            return Err(Error::NotMaurerCartan);
        }
        let elem = self.to_element(w);
        let mut out = Vec::new();
        for u in self.dgla.eigenvalues_up_to(max_eigen) {
            let slice = self.dgla.slice(&u, self.wmax)?;
            let c = hpt::slice_contraction(&slice)?;
            let ad = hpt::ad_on_slice(&self.dgla, &slice, &elem)?;
            let perturbed = c.perturb(&ad)?;
            let report = perturbed.verify()?;
            let mut h_ok = true;
            for (k, h) in perturbed.h.iter().enumerate() {
                // P projects onto I: h' (1 - P) = 0 and P h' = 0
                let p_hi = &slice.proj[k + 1];
                let id_hi = Matrix::identity(p_hi.rows());
                h_ok &= h.mul(&id_hi.sub(p_hi)?)?.is_zero();
                h_ok &= slice.proj[k].mul(h)?.is_zero();
            }
            out.push(SlicePerturbation {
                a_unchanged: perturbed.a == c.a,
                b_unchanged: perturbed.b == c.b,
                h_respects_splitting: h_ok,
                u,
                perturbed,
                report,
            });
        }
        Ok(out)
    }

    /// `U_0` contraction perturbed by `ad_γ` for `γ ∈ U_0^1`.
    pub fn perturb_u0(&self, gamma: &[Q]) -> Result<hpt::Contraction> {
        let el = self.basis1().element(gamma);
        let ad = hpt::ad_on_u0(&self.dgla, &self.u0.complex, &el)?;
        self.u0.contraction.perturb(&[ad])
    }
}

/// `α0`-coordinates of a basis of `Im(ad_A)` restricted to the `(i, j)` with `keep(i, j)`.
fn residue_tangent(basis1: &Basis, a: &LieMatrix, keep: impl Fn(usize, usize) -> bool) -> Result<Vec<Vec<Q>>> {
    let n = a.rows();
    let mut out: Vec<Vec<Q>> = Vec::new();
    let dim = basis1.len();
    for i in 0..n {
        for j in 0..n {
            if !keep(i, j) {
                continue;
            }
            let e = crate::liecore::elementary(n, i, j);
            let img = a.commutator(&e)?;
            let mut el = DglaElement::zero();
            for r in 0..n {
                for c in 0..n {
                    if !img[(r, c)].is_zero() {
                        let t = Term::new(crate::wpoly::Monomial::ONE, r, c, Form::Alpha0);
                        if basis1.index(&t).is_none() {
                            // lands outside this slice: not a constraint here
                            continue;
                        }
                        el.add_term(t, img[(r, c)].clone());
                    }
                }
            }
            let v = basis1.coords(&el)?;
            if !linalg::vec_is_zero(&v) {
                let mut trial = out.clone();
                trial.push(v.clone());
                if linalg::span_rank(dim, &trial) > out.len() {
                    out.push(v);
                }
            }
        }
    }
    Ok(out)
}

/// Degree-1 tangent subspace: all terms except constant `α0` ones, plus `r`.
fn t1_subspace(basis1: &Basis, r: &[Vec<Q>], is_const: impl Fn(&Term) -> bool) -> Result<Matrix> {
    let dim = basis1.len();
    let mut v: Vec<Vec<Q>> = Vec::new();
    for (k, t) in basis1.terms().iter().enumerate() {
        if !(t.form == Form::Alpha0 && is_const(t)) {
            v.push(linalg::unit(dim, k));
        }
    }
    v.extend(r.iter().cloned());
    cols(dim, &v)
}

fn cols(rows: usize, v: &[Vec<Q>]) -> Result<Matrix> {
    if v.is_empty() {
        Ok(Matrix::zeros(rows, 0))
    } else {
        Matrix::from_columns(rows, v)
    }
}

fn contains(space: &Matrix, vectors: &Matrix) -> bool {
    if vectors.cols() == 0 {
        return true;
    }
    if space.cols() == 0 {
        return vectors.is_zero();
    }
    space.hstack(vectors).map(|m| m.rank() == space.rank()).unwrap_or(false)
}

/// Cohomology dims of the subcomplex spanned by the columns of `sub[k]`.
fn subcomplex_dims(diffs: &[&Matrix; 2], sub: &[Matrix; 3]) -> Result<[usize; 3]> {
    let r0 = diffs[0].mul(&sub[0])?.rank();
    let r1 = diffs[1].mul(&sub[1])?.rank();
    let d = [sub[0].rank(), sub[1].rank(), sub[2].rank()];
    Ok([d[0] - r0, d[1] - r0 - r1, d[2] - r1])
}

fn cycles(diffs: &[&Matrix; 2], sub: &[Matrix; 3], k: usize) -> Result<Matrix> {
    if k == 2 {
        return Ok(sub[2].clone());
    }
    let null = diffs[k].mul(&sub[k])?.nullspace();
    let v: Vec<Vec<Q>> = null.iter().map(|z| sub[k].mul_vec(z)).collect::<Result<_>>()?;
    cols(sub[k].rows(), &v)
}

fn boundaries(diffs: &[&Matrix; 2], sub: &[Matrix; 3], k: usize) -> Result<Matrix> {
    if k == 0 {
        return Ok(Matrix::zeros(sub[0].rows(), 0));
    }
    diffs[k - 1].mul(&sub[k - 1])
}

/// `F = lin·N + Σ_k C_k bil[k]·N`, both in `U_0` coordinates.
#[derive(Clone, Debug)]
pub struct CurvatureStructure {
    pub lin: Matrix,
    pub bil: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McReport {
    pub labels: Vec<String>,
    pub residual: Vec<Q>,
    pub is_mc: bool,
}

/// Coordinates of `C` and `N` as rational functions of `nvars` parameters.
#[derive(Clone, Debug)]
pub struct Family {
    pub nvars: usize,
    pub names: Vec<String>,
    pub c: Vec<RatFun>,
    pub n: Vec<RatFun>,
}

impl Family {
    fn check(&self, m: &FiniteModel) -> Result<()> {
        if self.c.len() != m.basis1().len() || self.n.len() != m.basis0().len() {
            return Err(Error::MalformedFamily(format!(
                "expected {} C and {} N coordinates",
                m.basis1().len(),
                m.basis0().len()
            )));
        }
        if self.names.len() != self.nvars {
            return Err(Error::MalformedFamily("parameter names do not match their count".into()));
        }
        if self.c.iter().chain(&self.n).any(|f| f.den.is_zero()) {
            return Err(Error::MalformedFamily("zero denominator".into()));
        }
        Ok(())
    }

    /// The point at given parameter values; `None` at poles.
    pub fn at(&self, point: &[Q]) -> Option<Connection> {
        let c = self.c.iter().map(|f| f.eval(point)).collect::<Option<Vec<_>>>()?;
        let n = self.n.iter().map(|f| f.eval(point)).collect::<Option<Vec<_>>>()?;
        Some(Connection { c, n })
    }
}

#[derive(Clone, Debug)]
pub struct FamilyReport {
    pub labels: Vec<String>,
    pub residuals: Vec<RatFun>,
    pub holds: bool,
}

/// `A = S + N0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueDatum {
    pub s: SemisimpleData,
    pub n0: LieMatrix,
}

impl ResidueDatum {
    pub fn new(s: SemisimpleData, n0: LieMatrix) -> Result<Self> {
        if n0.rows() != s.n() || n0.cols() != s.n() {
            return Err(Error::ShapeMismatch("N0 must be n x n".into()));
        }
        centralizer_pattern(&s).check(&n0)?;
        jordan_type(&n0)?;
        Ok(ResidueDatum { s, n0 })
    }

    pub fn semisimple(s: SemisimpleData) -> Self {
        let n = s.n();
        ResidueDatum { s, n0: Matrix::zeros(n, n) }
    }

    pub fn a(&self) -> Result<LieMatrix> {
        self.s.matrix().add(&self.n0)
    }
}

/// `e^{u_k} ⋯ e^{u_1} · g0`, with `g0 ∈ G_S` and each `u_k` of positive weight in `U_0^0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeWord {
    pub g0: LieMatrix,
    pub factors: Vec<Vec<Q>>,
}

impl GaugeWord {
    pub fn identity(n: usize) -> Self {
        GaugeWord { g0: Matrix::identity(n), factors: Vec::new() }
    }

    pub fn validate(&self, m: &FiniteModel) -> Result<()> {
        centralizer_pattern(m.s()).check(&self.g0)?;
        if self.g0.determinant()?.is_zero() {
            return Err(Error::Invalid("g0 is singular".into()));
        }
        for u in &self.factors {
            if u.len() != m.basis0().len() {
                return Err(Error::ShapeMismatch("gauge factor length".into()));
            }
            for (x, t) in u.iter().zip(m.basis0().terms()) {
                if !x.is_zero() && m.weight(t) == 0 {
                    return Err(Error::Invalid("gauge factors must have positive weight".into()));
                }
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, m: &FiniteModel) -> Result<PolyMatrix> {
        self.validate(m)?;
        let mut g = PolyMatrix::from_matrix(&self.g0);
        for u in &self.factors {
            g = m.to_polymat(m.basis0(), u).exp_nilpotent()?.mul(&g)?;
        }
        Ok(g)
    }

    pub fn act(&self, m: &FiniteModel, w: &Connection) -> Result<Connection> {
        m.gauge_act(&self.evaluate(m)?, w)
    }
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub gamma: Vec<Q>,
    /// Coordinates of `gamma` in the `H^1(U_0)` basis.
    pub h1_coords: Vec<Q>,
    pub word: GaugeWord,
}

#[derive(Clone, Debug)]
pub struct QaData {
    pub h1_labels: Vec<String>,
    pub h0_labels: Vec<String>,
    pub parabolic: SupportPattern,
    /// `H^0` basis vectors of positive weight: the kernel of `dχ`.
    pub nilradical: Vec<String>,
    pub orbit_jordan_type: Vec<usize>,
    /// `fs[k]` is `N ↦ b([C_k, N])` from `H^0` to `H^1`.
    pub fs: Vec<Matrix>,
}

/// `T^0 --d0--> T^1 --d1--> T^2` with `T^1` the column span of `t1` inside the slice.
#[derive(Clone, Debug)]
pub struct TangentComplexData {
    pub labels: [Vec<String>; 3],
    pub d0: Matrix,
    pub d1: Matrix,
    pub t1: Matrix,
}

impl TangentComplexData {
    pub fn composite_is_zero(&self) -> bool {
        self.d1.mul(&self.d0).map(|m| m.is_zero()).unwrap_or(false)
    }

    pub fn cohomology_dims(&self) -> (usize, usize, usize) {
        let dim0 = self.d0.cols();
        let dim2 = self.d1.rows();
        let t1 = self.t1.rank();
        let r0 = self.d0.rank();
        let r1 = self.d1.mul(&self.t1).map(|m| m.rank()).unwrap_or(0);
        (dim0 - r0, t1 - r0 - r1, dim2 - r1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsoCheck {
    pub q_dims: [usize; 3],
    pub w_dims: [usize; 3],
    pub subcomplex_closed: bool,
    pub injective_on_cohomology: bool,
}

impl QuasiIsoCheck {
    pub fn holds(&self) -> bool {
        self.subcomplex_closed && self.injective_on_cohomology && self.q_dims == self.w_dims
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use num_traits::One;

    fn extra() -> FiniteModel {
        FiniteModel::new(CurveParams::new(2, 5).unwrap(), SemisimpleData::from_integers(&[0, 1, 11]).unwrap()).unwrap()
    }

    #[test]
    fn zero_and_pure_c_are_flat() {
        let m = extra();
        assert!(m.mc_verify(&m.zero_connection()).unwrap().is_mc);
        let mut w = m.zero_connection();
        w.c = (1..=5).map(qi).collect();
        assert!(m.mc_verify(&w).unwrap().is_mc);
    }

    #[test]
    fn curvature_of_h0_is_zero() {
        let m = extra();
        let mut w = m.zero_connection();
        // x^2 - y^5 on E23
        w.n[3] = qi(1);
        w.n[4] = qi(-1);
        w.c = vec![qi(3), qi(0), qi(0), qi(0), qi(0)];
        assert!(m.mc_verify(&w).unwrap().is_mc);
        assert!(m.residue(&w).unwrap().is_zero());
        assert!(m.in_wa(&w, &ResidueDatum::semisimple(m.s().clone())).unwrap());
    }

    #[test]
    fn normalization_of_exact_term() {
        let m = FiniteModel::new(CurveParams::new(2, 3).unwrap(), SemisimpleData::from_integers(&[0, 5]).unwrap()).unwrap();
        let st = m.normalize_to_h1(&vec![Q::one(); m.basis1().len()]).unwrap();
        assert!(linalg::vec_is_zero(&m.image_part(&st.gamma).unwrap()));
        let again = m.normalize_to_h1(&st.gamma).unwrap();
        assert_eq!(again.gamma, st.gamma);
        assert!(again.word.factors.is_empty());
    }

    fn c(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| qi(x)).collect()
    }

    /// M_b at parameters (t, n) with free C23, C13¹, C13².
    fn mb_point(m: &FiniteModel, t: Q, n: Q, free: [Q; 3]) -> Connection {
        let [c23, c131, c132] = free;
        let (n1, n2, n13) = (n.clone(), &n * qi(11), -(qi(2) * &t * &n));
        let w = Connection {
            c: vec![qi(110) / &t, t, c23, c131, c132],
            n: vec![qi(0), qi(0), qi(0), &n1 + &n2, &n2 - &n1, n13],
        };
        m.check_connection(&w).unwrap();
        w
    }

    #[test]
    fn extra_component_residuals() {
        let m = extra();
        // R3 = 20 N23² + C21 N13, R4 = 6 N13 + C12 (N23¹+N23²), R5 = 5 N13 + C12 (N23²-N23¹)
        let (c21, c12, a, b, n13) = (qi(3), qi(7), qi(2), qi(5), qi(-4));
        let w = Connection { c: vec![c21.clone(), c12.clone(), qi(1), qi(1), qi(1)], n: vec![qi(0), qi(0), qi(0), a.clone(), b.clone(), n13.clone()] };
        let (n1, n2) = ((&a - &b) / qi(2), (&a + &b) / qi(2));
        let r = m.curvature(&w).unwrap();
        assert_eq!(r[0], qi(0));
        assert_eq!(r[1], qi(0));
        assert_eq!(r[2], qi(20) * &n2 + &c21 * &n13);
        assert_eq!(r[3], qi(6) * &n13 + &c12 * (&n1 + &n2));
        assert_eq!(r[4], qi(5) * &n13 + &c12 * (&n2 - &n1));
    }

    #[test]
    fn mb_points_are_flat_and_perturb_cleanly() {
        let m = extra();
        let w = mb_point(&m, qi(5), qi(1), [qi(2), qi(-1), qi(3)]);
        assert!(m.mc_verify(&w).unwrap().is_mc);
        for sp in m.perturb_slices(&w, 12).unwrap() {
            assert!(sp.report.all_pass(), "slice {}", sp.u);
            assert!(sp.a_unchanged && sp.b_unchanged && sp.h_respects_splitting);
        }
    }

    #[test]
    fn gauge_action_matches_closed_form() {
        let m = extra();
        let w = mb_point(&m, qi(5), qi(1), [qi(2), qi(-1), qi(3)]);
        let (u, v, ww, lam, a, b) = (qi(2), qi(3), qi(5), qi(7), qi(-1), qi(4));
        let mut g = PolyMatrix::from_matrix(&Matrix::from_diagonal(&[u.clone(), v.clone(), ww.clone()]));
        g.set(0, 2, WeightedPolynomial::monomial(crate::wpoly::Monomial::new(1, 3), lam.clone()));
        let mut e23 = WeightedPolynomial::monomial(crate::wpoly::Monomial::new(2, 0), a.clone());
        e23.add_term(crate::wpoly::Monomial::new(0, 5), b.clone());
        g.set(1, 2, e23);
        let out = m.gauge_act(&g, &w).unwrap();
        let cc = &w.c;
        let expect = vec![
            &v / &u * &cc[0],
            &u / &v * &cc[1],
            &v / &ww * &cc[2] - &lam * &v / (&u * &ww) * &cc[0] - qi(10) * (&a + &b) / &ww,
            &u / &ww * &cc[3] - &a * &u / (&v * &ww) * &cc[1] - qi(6) * &lam / &ww,
            &u / &ww * &cc[4] - &b * &u / (&v * &ww) * &cc[1] - qi(5) * &lam / &ww,
        ];
        assert_eq!(out.c, expect);
        assert!(m.mc_verify(&out).unwrap().is_mc);
        assert_eq!(&out.c[0] * &out.c[1], &cc[0] * &cc[1]);
    }

    #[test]
    fn normalization_obstructed_on_special_locus() {
        let m = extra();
        let ok = m.normalize_to_h1(&c(&[2, 3, 1, 1, 1])).unwrap();
        assert!(linalg::vec_is_zero(&m.image_part(&ok.gamma).unwrap()));
        assert_eq!(&ok.gamma[0] * &ok.gamma[1], qi(6));
        assert!(matches!(m.normalize_to_h1(&c(&[10, 11, 1, 1, 1])), Err(Error::NormalizationObstructed(_))));
    }

    #[test]
    fn q_model_matches_w_model() {
        let m = extra();
        let mut n = vec![Q::zero(); m.basis0().len()];
        n[3] = qi(1);
        n[4] = qi(-1);
        let chk = m.q_tangent_inclusion(&n).unwrap();
        assert!(chk.holds(), "{chk:?}");
    }

    #[test]
    fn u0_perturbation_needs_large_s() {
        let small = extra();
        let gamma = c(&[1, 1, 0, 0, 0]);
        assert!(matches!(small.perturb_u0(&gamma), Err(Error::PerturbationNotNilpotent { .. })));
        let large = FiniteModel::new(CurveParams::new(2, 5).unwrap(), SemisimpleData::from_integers(&[0, 6, 13]).unwrap()).unwrap();
        assert!(large.is_large_enough());
        let gamma = large.u0.contraction.a[1].mul_vec(&c(&[1, 2])).unwrap();
        assert!(large.perturb_u0(&gamma).unwrap().verify().unwrap().all_pass());
    }

    #[test]
    fn trivial_tangent() {
        let m = FiniteModel::new(CurveParams::new(2, 3).unwrap(), SemisimpleData::from_integers(&[0]).unwrap()).unwrap();
        assert_eq!(m.tangent_cohomology_dims(&m.zero_connection()).unwrap(), (1, 0, 0));
    }
}
