//! The logarithmic de Rham dgla `Ω•(log D) ⊗ gl_n` for `D = {x^p = y^q}`.
//!
//! A basis element is `x^m y^n E_ij ω` with `ω ∈ {1, α0, β, α0∧β}`; the
//! degree-2 form is always stored as `α0∧β`. The operator
//! `L_S = [ι_E, δ_S]` acts on a basis element by
//! `mq + np + ℓ(ω) + s_i - s_j`, where `ℓ` is `0` on `1, α0` and `-w0` on
//! `β, α0∧β`. Each eigenvalue slice is finite.
//!
//! Basis order inside a slice degree: form (`α0` before `β`), then weight,
//! then the weight-space monomial order, then `(i, j)` row-major.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::liecore::SemisimpleData;
use crate::linalg::{self, Matrix};
use crate::rational::{as_i64, qi, Q};
use crate::wpoly::{
    apply_E, apply_V, cokernel_rep, weight_basis, weight_decompose, CurveParams, Monomial,
    WeightedPolynomial,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Form {
    One,
    Alpha0,
    Beta,
    Alpha0Beta,
}

impl Form {
    pub const ALL: [Form; 4] = [Form::One, Form::Alpha0, Form::Beta, Form::Alpha0Beta];

    pub fn degree(self) -> u8 {
        match self {
            Form::One => 0,
            Form::Alpha0 | Form::Beta => 1,
            Form::Alpha0Beta => 2,
        }
    }

    /// `L_E` eigenvalue of the bare form.
    pub fn le_eigenvalue(self, params: &CurveParams) -> i64 {
        match self {
            Form::One | Form::Alpha0 => 0,
            Form::Beta | Form::Alpha0Beta => -params.w0(),
        }
    }

    pub fn of_degree(k: u8) -> &'static [Form] {
        match k {
            0 => &[Form::One],
            1 => &[Form::Alpha0, Form::Beta],
            2 => &[Form::Alpha0Beta],
            _ => &[],
        }
    }

    /// `self ∧ other` as `(sign, form)`, `None` when it vanishes.
    pub fn wedge(self, other: Form) -> Result<Option<(i64, Form)>> {
        use Form::*;
        let deg = self.degree() + other.degree();
        if deg > 2 {
            return Err(Error::DegreeOverflow { degree: deg });
        }
        Ok(match (self, other) {
            (One, w) | (w, One) => Some((1, w)),
            (Alpha0, Beta) => Some((1, Alpha0Beta)),
            (Beta, Alpha0) => Some((-1, Alpha0Beta)),
            _ => None,
        })
    }

    /// `ι_E` on the bare form.
    pub fn iota_e(self) -> Option<Form> {
        match self {
            Form::Alpha0 => Some(Form::One),
            Form::Alpha0Beta => Some(Form::Beta),
            _ => None,
        }
    }

    /// Forms in the image of `P = α0 ∧ ι_E`.
    pub fn is_i_part(self) -> bool {
        matches!(self, Form::Alpha0 | Form::Alpha0Beta)
    }

    pub fn label(self) -> &'static str {
        match self {
            Form::One => "1",
            Form::Alpha0 => "a0",
            Form::Beta => "b",
            Form::Alpha0Beta => "a0b",
        }
    }
}

/// `x^m y^n E_ij ω`, indices 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub form: Form,
    pub mono: Monomial,
    pub i: usize,
    pub j: usize,
}

impl Term {
    pub fn new(mono: Monomial, i: usize, j: usize, form: Form) -> Self {
        Term { form, mono, i, j }
    }

    /// `"x^2*y^2*E13"`, 1-based matrix indices, form omitted.
    pub fn label(&self) -> String {
        let e = if self.i < 9 && self.j < 9 {
            format!("E{}{}", self.i + 1, self.j + 1)
        } else {
            format!("E{}_{}", self.i + 1, self.j + 1)
        };
        if self.mono == Monomial::ONE {
            e
        } else {
            format!("{}*{e}", self.mono.label())
        }
    }

    pub fn label_with_form(&self) -> String {
        match self.form {
            Form::One => self.label(),
            f => format!("{}*{}", self.label(), f.label()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label_with_form())
    }
}

/// Parses a matrix-unit label such as `"E23"` or `"E10_2"` into 0-based indices.
pub fn parse_unit(s: &str) -> Option<(usize, usize)> {
    let rest = s.strip_prefix('E')?;
    let (i, j) = match rest.split_once('_') {
        Some((i, j)) => (i.parse::<usize>().ok()?, j.parse::<usize>().ok()?),
        None if rest.len() == 2 => {
            let b = rest.as_bytes();
            ((b[0] as char).to_digit(10)? as usize, (b[1] as char).to_digit(10)? as usize)
        }
        None => return None,
    };
    (i >= 1 && j >= 1).then(|| (i - 1, j - 1))
}

/// Parses `"x^2*y^2*E13"` (form omitted) into monomial and 0-based indices.
pub fn parse_label(s: &str) -> Option<(Monomial, usize, usize)> {
    let mut mono = Monomial::ONE;
    let mut unit = None;
    for part in s.split('*').map(str::trim) {
        if part.starts_with('E') {
            if unit.is_some() {
                return None;
            }
            unit = Some(parse_unit(part)?);
        } else {
            let (var, exp) = match part.split_once('^') {
                Some((v, e)) => (v, e.parse::<u32>().ok()?),
                None => (part, 1),
            };
            match var {
                "x" => mono.x += exp,
                "y" => mono.y += exp,
                "1" if exp == 1 => {}
                _ => return None,
            }
        }
    }
    let (i, j) = unit?;
    Some((mono, i, j))
}

/// Finite combination of basis terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DglaElement {
    terms: BTreeMap<Term, Q>,
}

impl DglaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(t: Term, c: Q) -> Self {
        let mut e = Self::zero();
        e.add_term(t, c);
        e
    }

    /// `g · E_ij · ω`.
    pub fn from_poly(g: &WeightedPolynomial, i: usize, j: usize, form: Form) -> Self {
        let mut e = Self::zero();
        for (m, c) in g.terms() {
            e.add_term(Term::new(*m, i, j, form), c.clone());
        }
        e
    }

    pub fn add_term(&mut self, t: Term, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(t).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &Term) -> Q {
        self.terms.get(t).cloned().unwrap_or_else(Q::zero)
    }

    /// Common degree of all terms; `None` for zero or mixed degree.
    pub fn degree(&self) -> Option<u8> {
        let mut it = self.terms.keys().map(|t| t.form.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &DglaElement) -> DglaElement {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(*t, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DglaElement) -> DglaElement {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> DglaElement {
        if s.is_zero() {
            return Self::zero();
        }
        DglaElement { terms: self.terms.iter().map(|(t, c)| (*t, c * s)).collect() }
    }

    /// Polynomial coefficient of `E_ij ω`.
    pub fn component(&self, i: usize, j: usize, form: Form) -> WeightedPolynomial {
        let mut g = WeightedPolynomial::zero();
        for (t, c) in &self.terms {
            if t.i == i && t.j == j && t.form == form {
                g.add_term(t.mono, c.clone());
            }
        }
        g
    }

    /// Keeps the terms whose form satisfies `keep`.
    pub fn filter_forms(&self, keep: impl Fn(Form) -> bool) -> DglaElement {
        DglaElement {
            terms: self.terms.iter().filter(|(t, _)| keep(t.form)).map(|(t, c)| (*t, c.clone())).collect(),
        }
    }

    pub fn label(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| format!("({})*{}", crate::rational::to_string(c), t.label_with_form()))
            .collect();
        parts.join(" + ")
    }
}

/// Curve, `S` and the operators of the dgla.
#[derive(Clone, Debug)]
pub struct Dgla {
    pub params: CurveParams,
    pub s: SemisimpleData,
}

impl Dgla {
    pub fn new(params: CurveParams, s: SemisimpleData) -> Self {
        Dgla { params, s }
    }

    pub fn n(&self) -> usize {
        self.s.n()
    }

    /// `L_S` eigenvalue of a basis term.
    pub fn eigenvalue(&self, t: &Term) -> Q {
        qi(self.params.weight(t.mono) + t.form.le_eigenvalue(&self.params)) + self.s.eigenvalue(t.i, t.j)
    }

    /// Splits by `L_S` eigenvalue.
    pub fn eigen_components(&self, x: &DglaElement) -> BTreeMap<Q, DglaElement> {
        let mut out: BTreeMap<Q, DglaElement> = BTreeMap::new();
        for (t, c) in x.terms() {
            out.entry(self.eigenvalue(t)).or_default().add_term(*t, c.clone());
        }
        out
    }

    /// The Lie algebroid differential.
    pub fn d(&self, x: &DglaElement) -> DglaElement {
        let w0 = qi(self.params.w0());
        let mut out = DglaElement::zero();
        for (t, c) in x.terms() {
            let g = WeightedPolynomial::monomial(t.mono, c.clone());
            match t.form {
                Form::One => {
                    out = out.add(&DglaElement::from_poly(&apply_E(&g, &self.params), t.i, t.j, Form::Alpha0));
                    out = out.add(&DglaElement::from_poly(&apply_V(&g, &self.params), t.i, t.j, Form::Beta));
                }
                Form::Alpha0 => {
                    let v = apply_V(&g, &self.params).scale(&-Q::one());
                    out = out.add(&DglaElement::from_poly(&v, t.i, t.j, Form::Alpha0Beta));
                }
                Form::Beta => {
                    let e = &apply_E(&g, &self.params) - &g.scale(&w0);
                    out = out.add(&DglaElement::from_poly(&e, t.i, t.j, Form::Alpha0Beta));
                }
                Form::Alpha0Beta => {}
            }
        }
        out
    }

    /// `ad_S`, diagonal on basis terms.
    pub fn ad_s(&self, x: &DglaElement) -> DglaElement {
        let mut out = DglaElement::zero();
        for (t, c) in x.terms() {
            out.add_term(*t, c * self.s.eigenvalue(t.i, t.j));
        }
        out
    }

    /// `α0 ∧ ad_S`.
    pub fn alpha0_ad_s(&self, x: &DglaElement) -> DglaElement {
        let mut out = DglaElement::zero();
        for (t, c) in x.terms() {
            let target = match t.form {
                Form::One => Form::Alpha0,
                Form::Beta => Form::Alpha0Beta,
                _ => continue,
            };
            out.add_term(Term { form: target, ..*t }, c * self.s.eigenvalue(t.i, t.j));
        }
        out
    }

    /// `δ_S = d + α0 ∧ ad_S`.
    pub fn delta_s(&self, x: &DglaElement) -> DglaElement {
        self.d(x).add(&self.alpha0_ad_s(x))
    }

    pub fn iota_e(&self, x: &DglaElement) -> DglaElement {
        let mut out = DglaElement::zero();
        for (t, c) in x.terms() {
            if let Some(form) = t.form.iota_e() {
                out.add_term(Term { form, ..*t }, c.clone());
            }
        }
        out
    }

    pub fn lie_le(&self, x: &DglaElement) -> DglaElement {
        let mut out = DglaElement::zero();
        for (t, c) in x.terms() {
            out.add_term(*t, c * qi(self.params.weight(t.mono) + t.form.le_eigenvalue(&self.params)));
        }
        out
    }

    pub fn lie_ls(&self, x: &DglaElement) -> DglaElement {
        let mut out = DglaElement::zero();
        for (t, c) in x.terms() {
            out.add_term(*t, c * self.eigenvalue(t));
        }
        out
    }

    /// `P = α0 ∧ ι_E`: keeps the `α0` and `α0∧β` terms.
    pub fn projector_p(&self, x: &DglaElement) -> DglaElement {
        x.filter_forms(Form::is_i_part)
    }

    /// `[a ω1 X, b ω2 Y] = ab (ω1∧ω2) [X, Y]`.
    pub fn bracket(&self, x: &DglaElement, y: &DglaElement) -> Result<DglaElement> {
        let mut out = DglaElement::zero();
        for (t1, c1) in x.terms() {
            for (t2, c2) in y.terms() {
                let Some((sign, form)) = t1.form.wedge(t2.form)? else { continue };
                let mono = t1.mono.mul(t2.mono);
                let coef = c1 * c2 * qi(sign);
                // [E_ij, E_kl] = δ_jk E_il - δ_li E_kj
                if t1.j == t2.i {
                    out.add_term(Term::new(mono, t1.i, t2.j, form), coef.clone());
                }
                if t2.j == t1.i {
                    out.add_term(Term::new(mono, t2.i, t1.j, form), -coef);
                }
            }
        }
        Ok(out)
    }

    /// `h = ι_E / u` on each eigenvalue-`u` component with `u ≠ 0`.
    pub fn homotopy_h(&self, x: &DglaElement) -> DglaElement {
        let mut out = DglaElement::zero();
        for (u, part) in self.eigen_components(x) {
            if !u.is_zero() {
                out = out.add(&self.iota_e(&part).scale(&(Q::one() / u)));
            }
        }
        out
    }

    /// Basis terms of one degree in the `u`-eigenspace, in slice order.
    pub fn slice_basis(&self, u: &Q, degree: u8, wmax: i64) -> Result<Vec<Term>> {
        let mut keyed = Vec::new();
        for &form in Form::of_degree(degree) {
            for (i, j) in self.s.pairs() {
                let w = u - qi(form.le_eigenvalue(&self.params)) - self.s.eigenvalue(i, j);
                let Some(w) = as_i64(&w) else { continue };
                if w < 0 {
                    continue;
                }
                if w > wmax {
                    return Err(Error::TruncationOverflow { weight: w, max: wmax });
                }
                for (k, mono) in weight_basis(w, &self.params).into_iter().enumerate() {
                    keyed.push(((form, w, k, i, j), Term::new(mono, i, j, form)));
                }
            }
        }
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(keyed.into_iter().map(|(_, t)| t).collect())
    }

    pub fn slice(&self, u: &Q, wmax: i64) -> Result<ComplexSlice> {
        let bases = [
            Basis::new(self.slice_basis(u, 0, wmax)?),
            Basis::new(self.slice_basis(u, 1, wmax)?),
            Basis::new(self.slice_basis(u, 2, wmax)?),
        ];
        let up = |k: usize, f: &dyn Fn(&DglaElement) -> DglaElement| bases[k].operator(&bases[k + 1], f);
        let down = |k: usize, f: &dyn Fn(&DglaElement) -> DglaElement| bases[k + 1].operator(&bases[k], f);
        let same = |k: usize, f: &dyn Fn(&DglaElement) -> DglaElement| bases[k].operator(&bases[k], f);
        let delta = [up(0, &|x| self.delta_s(x))?, up(1, &|x| self.delta_s(x))?];
        let d = [up(0, &|x| self.d(x))?, up(1, &|x| self.d(x))?];
        let alpha0_ad = [up(0, &|x| self.alpha0_ad_s(x))?, up(1, &|x| self.alpha0_ad_s(x))?];
        let iota = [down(0, &|x| self.iota_e(x))?, down(1, &|x| self.iota_e(x))?];
        let proj = [
            same(0, &|x| self.projector_p(x))?,
            same(1, &|x| self.projector_p(x))?,
            same(2, &|x| self.projector_p(x))?,
        ];
        let ad_s = [
            same(0, &|x| self.ad_s(x))?,
            same(1, &|x| self.ad_s(x))?,
            same(2, &|x| self.ad_s(x))?,
        ];
        Ok(ComplexSlice { u: u.clone(), bases, delta, d, alpha0_ad, iota, proj, ad_s })
    }

    /// Eigenvalues `u` whose slice has a nonzero term of weight at most `wmax`.
    pub fn eigenvalues_up_to(&self, wmax: i64) -> Vec<Q> {
        let mut set = alloc::collections::BTreeSet::new();
        for w in 0..=wmax {
            if weight_basis(w, &self.params).is_empty() {
                continue;
            }
            for &form in &Form::ALL {
                for lambda in self.s.ad_eigenvalues() {
                    set.insert(qi(w + form.le_eigenvalue(&self.params)) + lambda);
                }
            }
        }
        set.into_iter().collect()
    }

    /// The finite dgla `U_0`: degree 0 and the `β` terms of degree 1 in the 0-slice.
    pub fn u0_complex(&self) -> Result<U0Complex> {
        let zero = Q::zero();
        let wmax = self.u0_weight_bound();
        let basis0 = Basis::new(self.slice_basis(&zero, 0, wmax)?);
        let basis1 = Basis::new(
            self.slice_basis(&zero, 1, wmax)?.into_iter().filter(|t| t.form == Form::Beta).collect(),
        );
        // On U_0 the α0 component of δ_S is L_S = 0, so δ_S = V ⊗ id.
        let delta = basis0.operator(&basis1, &|x| self.delta_s(x).filter_forms(|f| f == Form::Beta))?;
        Ok(U0Complex { basis0, basis1, delta })
    }

    /// Largest weight occurring in `U_0`.
    pub fn u0_weight_bound(&self) -> i64 {
        let max_lambda = self
            .s
            .ad_eigenvalues()
            .into_iter()
            .filter_map(|l| as_i64(&l))
            .map(|l| l.abs())
            .max()
            .unwrap_or(0);
        max_lambda + self.params.w0()
    }

    /// `H^0(U_0) = ⊕_c f^c g_{-c pq}` and `H^1(U_0) = ⊕ f^c x^a y^b g_{w0 - w} β`.
    pub fn cohomology_u0(&self) -> Result<U0Cohomology> {
        let u0 = self.u0_complex()?;
        let pq = qi(self.params.pq());
        let f = self.params.f();
        let mut h0 = Vec::new();
        for (i, j) in self.s.pairs() {
            let c = (&self.s.diag()[j] - &self.s.diag()[i]) / &pq;
            if let Some(c) = as_i64(&c).filter(|c| *c >= 0) {
                h0.push(DglaElement::from_poly(&f.pow(c as u32), i, j, Form::One));
            }
        }
        let mut h1 = Vec::new();
        for t in u0.basis1.terms() {
            // one representative per (weight, ij) with a cokernel
            let w = self.params.weight(t.mono);
            if weight_basis(w, &self.params)[0] != t.mono {
                continue;
            }
            if let Some(rep) = cokernel_rep(w, &self.params) {
                h1.push(DglaElement::from_poly(&rep, t.i, t.j, Form::Beta));
            }
        }
        sort_by_basis(&mut h0, &u0.basis0);
        sort_by_basis(&mut h1, &u0.basis1);
        Ok(U0Cohomology { h0, h1 })
    }
}

fn sort_by_basis(v: &mut [DglaElement], basis: &Basis) {
    let key = |e: &DglaElement| {
        e.terms().map(|(t, _)| basis.index(t).unwrap_or(usize::MAX)).min().unwrap_or(usize::MAX)
    };
    v.sort_by_key(key);
}

/// Ordered list of terms with reverse lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    terms: Vec<Term>,
    index: BTreeMap<Term, usize>,
}

impl Basis {
    pub fn new(terms: Vec<Term>) -> Self {
        let index = terms.iter().enumerate().map(|(k, t)| (*t, k)).collect();
        Basis { terms, index }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn index(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn labels(&self) -> Vec<String> {
        self.terms.iter().map(Term::label).collect()
    }

    pub fn labels_with_form(&self) -> Vec<String> {
        self.terms.iter().map(Term::label_with_form).collect()
    }

    pub fn coords(&self, x: &DglaElement) -> Result<Vec<Q>> {
        let mut v = vec![Q::zero(); self.len()];
        for (t, c) in x.terms() {
            let k = self.index(t).ok_or_else(|| Error::NotInSpan(t.label_with_form()))?;
            v[k] = c.clone();
        }
        Ok(v)
    }

    pub fn element(&self, coords: &[Q]) -> DglaElement {
        let mut e = DglaElement::zero();
        for (t, c) in self.terms.iter().zip(coords) {
            e.add_term(*t, c.clone());
        }
        e
    }

    pub fn basis_element(&self, k: usize) -> DglaElement {
        DglaElement::term(self.terms[k], Q::one())
    }

    /// Matrix of `f` from `self` to `target`.
    pub fn operator(&self, target: &Basis, f: &dyn Fn(&DglaElement) -> DglaElement) -> Result<Matrix> {
        let cols = (0..self.len())
            .map(|k| target.coords(&f(&self.basis_element(k))))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(target.len(), &cols)
    }

    /// Like [`Basis::operator`] for fallible maps.
    pub fn try_operator(
        &self,
        target: &Basis,
        f: &dyn Fn(&DglaElement) -> Result<DglaElement>,
    ) -> Result<Matrix> {
        let cols = (0..self.len())
            .map(|k| target.coords(&f(&self.basis_element(k))?))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(target.len(), &cols)
    }
}

/// One `L_S`-eigenspace with its operators as matrices.
///
/// `delta[k]`, `d[k]`, `alpha0_ad[k]` map degree `k` to `k + 1`; `iota[k]`
/// maps degree `k + 1` to `k`.
#[derive(Clone, Debug)]
pub struct ComplexSlice {
    pub u: Q,
    pub bases: [Basis; 3],
    pub delta: [Matrix; 2],
    pub d: [Matrix; 2],
    pub alpha0_ad: [Matrix; 2],
    pub iota: [Matrix; 2],
    pub proj: [Matrix; 3],
    pub ad_s: [Matrix; 3],
}

impl ComplexSlice {
    pub fn dims(&self) -> [usize; 3] {
        [self.bases[0].len(), self.bases[1].len(), self.bases[2].len()]
    }

    /// `h_k : degree k+1 -> degree k`, equal to `ι_E / u` off the 0-slice.
    pub fn homotopy(&self, k: usize) -> Matrix {
        if self.u.is_zero() {
            Matrix::zeros(self.bases[k].len(), self.bases[k + 1].len())
        } else {
            self.iota[k].scale(&(Q::one() / &self.u))
        }
    }

    /// `[ι_E, X]` on degree `k`, for a degree-raising `X` given per degree.
    fn anticommutator_with_iota(&self, x: &[Matrix; 2], k: usize) -> Result<Matrix> {
        let dim = self.bases[k].len();
        let mut out = Matrix::zeros(dim, dim);
        if k < 2 {
            out = out.add(&self.iota[k].mul(&x[k])?)?;
        }
        if k > 0 {
            out = out.add(&x[k - 1].mul(&self.iota[k - 1])?)?;
        }
        Ok(out)
    }

    /// Exact operator identities on this slice, as `(name, holds)`.
    pub fn identity_checks(&self) -> Result<Vec<(&'static str, bool)>> {
        let mut out = Vec::new();
        let id = |k: usize| Matrix::identity(self.bases[k].len());
        out.push(("delta_S^2 = 0", self.delta[1].mul(&self.delta[0])?.is_zero()));
        out.push(("d^2 = 0", self.d[1].mul(&self.d[0])?.is_zero()));
        out.push(("iota_E^2 = 0", self.iota[0].mul(&self.iota[1])?.is_zero()));
        let mut p_ok = true;
        let mut ls_ok = true;
        let mut ad_ok = true;
        for k in 0..3 {
            p_ok &= self.proj[k].mul(&self.proj[k])? == self.proj[k];
            ls_ok &= self.anticommutator_with_iota(&self.delta, k)? == id(k).scale(&self.u);
            ad_ok &= self.anticommutator_with_iota(&self.alpha0_ad, k)? == self.ad_s[k];
        }
        out.push(("P^2 = P", p_ok));
        out.push(("[iota_E, delta_S] = u id", ls_ok));
        out.push(("[iota_E, alpha0 ad_S] = ad_S", ad_ok));
        Ok(out)
    }
}

/// `U_0^0 --V--> U_0^1`.
#[derive(Clone, Debug)]
pub struct U0Complex {
    pub basis0: Basis,
    pub basis1: Basis,
    pub delta: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct U0Cohomology {
    pub h0: Vec<DglaElement>,
    pub h1: Vec<DglaElement>,
}

impl U0Complex {
    /// `(dim ker δ, dim coker δ)` by direct rank computation.
    pub fn cohomology_dims(&self) -> (usize, usize) {
        let r = self.delta.rank();
        (self.basis0.len() - r, self.basis1.len() - r)
    }

    /// Checks that `h0` spans `ker δ` and `h1` spans a complement of `Im δ`.
    pub fn check_cohomology(&self, h: &U0Cohomology) -> Result<bool> {
        let (k, c) = self.cohomology_dims();
        if h.h0.len() != k || h.h1.len() != c {
            return Ok(false);
        }
        let h0 = h.h0.iter().map(|e| self.basis0.coords(e)).collect::<Result<Vec<_>>>()?;
        for v in &h0 {
            if !linalg::vec_is_zero(&self.delta.mul_vec(v)?) {
                return Ok(false);
            }
        }
        if linalg::span_rank(self.basis0.len(), &h0) != k {
            return Ok(false);
        }
        let mut cols: Vec<Vec<Q>> = (0..self.delta.cols()).map(|j| self.delta.column(j)).collect();
        for e in &h.h1 {
            cols.push(self.basis1.coords(e)?);
        }
        Ok(linalg::span_rank(self.basis1.len(), &cols) == self.basis1.len())
    }
}

/// Weight, `a`, `b`, `c` of a term's monomial, handy for reports.
pub fn term_weight_index(t: &Term, params: &CurveParams) -> crate::wpoly::WeightIndex {
    weight_decompose(params.weight(t.mono), params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn extra() -> Dgla {
        Dgla::new(CurveParams::new(2, 5).unwrap(), SemisimpleData::from_integers(&[0, 1, 11]).unwrap())
    }

    fn t(x: u32, y: u32, i: usize, j: usize, form: Form) -> Term {
        Term::new(Monomial::new(x, y), i, j, form)
    }

    #[test]
    fn differential_formulas() {
        let g = extra();
        let x_e21 = DglaElement::term(t(1, 0, 1, 0, Form::One), Q::one());
        let dx = g.delta_s(&x_e21);
        assert_eq!(dx.coeff(&t(1, 0, 1, 0, Form::Alpha0)), qi(6));
        assert_eq!(dx.coeff(&t(0, 4, 1, 0, Form::Beta)), qi(5));

        let y_a0 = DglaElement::term(t(0, 1, 0, 0, Form::Alpha0), Q::one());
        assert_eq!(g.d(&y_a0), DglaElement::term(t(1, 0, 0, 0, Form::Alpha0Beta), qi(-2)));
        let y_b = DglaElement::term(t(0, 1, 0, 0, Form::Beta), Q::one());
        assert_eq!(g.d(&y_b), DglaElement::term(t(0, 1, 0, 0, Form::Alpha0Beta), qi(-1)));
    }

    #[test]
    fn bracket_signs() {
        let g = extra();
        let xb = DglaElement::term(t(0, 0, 0, 1, Form::Beta), Q::one());
        let ya = DglaElement::term(t(0, 0, 1, 0, Form::Alpha0), Q::one());
        let br = g.bracket(&xb, &ya).unwrap();
        // [E12, E21] = E11 - E22, times β∧α0 = -α0∧β
        assert_eq!(br.coeff(&t(0, 0, 0, 0, Form::Alpha0Beta)), qi(-1));
        assert_eq!(br.coeff(&t(0, 0, 1, 1, Form::Alpha0Beta)), qi(1));
        let top = DglaElement::term(t(0, 0, 0, 0, Form::Alpha0Beta), Q::one());
        assert!(matches!(g.bracket(&top, &ya), Err(Error::DegreeOverflow { degree: 3 })));
    }

    #[test]
    fn extra_component_u0() {
        let g = extra();
        let u0 = g.u0_complex().unwrap();
        assert_eq!(u0.basis0.labels(), ["E11", "E22", "E33", "x^2*E23", "y^5*E23", "x*y^3*E13"]);
        assert_eq!(u0.basis1.labels(), ["y*E21", "y^2*E12", "x*y^4*E23", "x^2*y^2*E13", "y^7*E13"]);
        let h = g.cohomology_u0().unwrap();
        assert_eq!(h.h0.len(), 4);
        assert_eq!(h.h0[3], DglaElement::from_poly(&g.params.f(), 1, 2, Form::One));
        assert!(u0.check_cohomology(&h).unwrap());
        assert_eq!(h.h1.len(), 3);
    }

    #[test]
    fn homotopy_on_terms() {
        let g = extra();
        let a = DglaElement::term(t(1, 0, 1, 0, Form::Alpha0), Q::one());
        assert_eq!(g.homotopy_h(&a), DglaElement::term(t(1, 0, 1, 0, Form::One), crate::rational::q(1, 6)));
        let b = DglaElement::term(t(1, 0, 1, 0, Form::Beta), Q::one());
        assert!(g.homotopy_h(&b).is_zero());
    }

    #[test]
    fn slice_identities() {
        let g = extra();
        for u in g.eigenvalues_up_to(12) {
            let sl = g.slice(&u, 300).unwrap();
            for (name, ok) in sl.identity_checks().unwrap() {
                assert!(ok, "{name} fails on slice {u}");
            }
        }
    }

    #[test]
    fn labels_round_trip() {
        for s in ["y*E21", "x^2*y^2*E13", "E11", "x*y^3*E13"] {
            let (m, i, j) = parse_label(s).unwrap();
            assert_eq!(Term::new(m, i, j, Form::One).label(), s);
        }
        assert!(parse_label("x*z*E11").is_none());
        assert!(parse_label("x*E01").is_none());
    }
}
