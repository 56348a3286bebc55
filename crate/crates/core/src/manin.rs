//! The shifted Manin triple around `H^•(U_0)`.
//!
//! `L = b ⊕ (K ⊕ hPart)[-1] ⊕ b⁻[-2]` is built on explicit generators
//! `f^c x^a y^b E_ij`, with `c` any integer and `x^a y^b` in the Jacobi
//! quotient `C[x,y]/(x^{p-1}, y^{q-1})`. Every axiom is checked exhaustively
//! on basis triples through sparse structure constants.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::liecore::SemisimpleData;
use crate::linalg::{self, Matrix};
use crate::logdgla::Form;
use crate::moduli::FiniteModel;
use crate::polymat::PolyMatrix;
use crate::rational::{as_i64, qi, Q};
use crate::wpoly::{CurveParams, Monomial, WeightedPolynomial};

/// `I(x^a y^b, x^a' y^b')` with scaling constant 1.
pub fn intersection_form(params: &CurveParams, a: u32, b: u32, a2: u32, b2: u32) -> Result<Q> {
    let (p, q) = (params.p() as u32, params.q() as u32);
    for (x, y) in [(a, b), (a2, b2)] {
        if x + 2 > p || y + 2 > q {
            return Err(Error::OutOfJacobiRange { a: x, b: y });
        }
    }
    if a + a2 + 2 != p || b + b2 + 2 != q {
        return Ok(Q::zero());
    }
    let den = i64::from(a) * params.q() + i64::from(b) * params.p() - params.w0();
    Ok(Q::one() / qi(den))
}

/// Monomials `x^a y^b`, `a ≤ p-2`, `b ≤ q-2`, and the intersection matrix.
#[derive(Clone, Debug)]
pub struct JacobiQuotient {
    pub monomials: Vec<Monomial>,
    pub form: Matrix,
}

impl JacobiQuotient {
    pub fn new(params: &CurveParams) -> Result<Self> {
        let mut monomials = Vec::new();
        for a in 0..=(params.p() - 2) as u32 {
            for b in 0..=(params.q() - 2) as u32 {
                monomials.push(Monomial::new(a, b));
            }
        }
        let n = monomials.len();
        let mut form = Matrix::zeros(n, n);
        for (r, m1) in monomials.iter().enumerate() {
            for (c, m2) in monomials.iter().enumerate() {
                form[(r, c)] = intersection_form(params, m1.x, m1.y, m2.x, m2.y)?;
            }
        }
        Ok(JacobiQuotient { monomials, form })
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.form.transpose() == self.form.neg()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.form.rank() == self.dim()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Summand {
    /// `b`: `c ≥ 0`, degree 0.
    B,
    /// `K`, degree 1.
    K,
    /// `hPart`, the `c = 0` copy of `K`, degree 1.
    H,
    /// `b⁻`: `c ≤ 0`, degree 2.
    U,
}

impl Summand {
    pub fn degree(self) -> u8 {
        match self {
            Summand::B => 0,
            Summand::K | Summand::H => 1,
            Summand::U => 2,
        }
    }
}

/// `f^c x^a y^b E_ij` in one summand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Gen {
    pub summand: Summand,
    pub c: i64,
    pub mono: Monomial,
    pub i: usize,
    pub j: usize,
}

impl Gen {
    pub fn label(&self) -> String {
        let tag = match self.summand {
            Summand::B => "b",
            Summand::K => "K",
            Summand::H => "hPart",
            Summand::U => "b-",
        };
        let mut s = String::new();
        if self.c != 0 {
            s.push_str(&format!("f^{}*", self.c));
        }
        if self.mono != Monomial::ONE {
            s.push_str(&self.mono.label());
            s.push('*');
        }
        format!("{tag}:{s}E{}{}", self.i + 1, self.j + 1)
    }
}

type Sparse = Vec<(usize, Q)>;

/// A graded Lie algebra on a finite homogeneous basis with an invariant pairing.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    pub labels: Vec<String>,
    pub degrees: Vec<u8>,
    table: Vec<Vec<Sparse>>,
    pub gram: Matrix,
}

fn sign(k: u32) -> Q {
    if k % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

fn push(acc: &mut BTreeMap<usize, Q>, k: usize, v: Q) {
    let e = acc.entry(k).or_insert_with(Q::zero);
    *e += v;
    if e.is_zero() {
        acc.remove(&k);
    }
}

impl GradedAlgebra {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn bracket_basis(&self, x: usize, y: usize) -> &[(usize, Q)] {
        &self.table[x][y]
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                for (k, v) in &self.table[i][j] {
                    out[*k] += a * b * v;
                }
            }
        }
        out
    }

    fn bracket_sparse(&self, x: usize, y: &[(usize, Q)]) -> BTreeMap<usize, Q> {
        let mut acc = BTreeMap::new();
        for (j, b) in y {
            for (k, v) in &self.table[x][*j] {
                push(&mut acc, *k, b * v);
            }
        }
        acc
    }

    fn bracket_left_sparse(&self, x: &[(usize, Q)], y: usize) -> BTreeMap<usize, Q> {
        let mut acc = BTreeMap::new();
        for (i, a) in x {
            for (k, v) in &self.table[*i][y] {
                push(&mut acc, *k, a * v);
            }
        }
        acc
    }

    pub fn pairing(&self, x: &[Q], y: &[Q]) -> Q {
        let gy = self.gram.mul_vec(y).unwrap_or_default();
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    fn deg_sign(&self, x: usize, y: usize) -> Q {
        sign(u32::from(self.degrees[x]) * u32::from(self.degrees[y]))
    }

    fn label_triple(&self, t: &[usize]) -> String {
        t.iter().map(|&k| self.labels[k].as_str()).collect::<Vec<_>>().join(", ")
    }

    /// `[x, y] = -(-1)^{|x||y|} [y, x]` and degrees add.
    pub fn check_antisymmetry(&self) -> Option<String> {
        for x in 0..self.dim() {
            for y in 0..self.dim() {
                let s = -self.deg_sign(x, y);
                let mut lhs: BTreeMap<usize, Q> = self.table[x][y].iter().cloned().collect();
                for (k, v) in &self.table[y][x] {
                    push(&mut lhs, *k, -(&s * v));
                }
                let degree_ok = self.table[x][y].iter().all(|(k, _)| self.degrees[*k] == self.degrees[x] + self.degrees[y]);
                if !lhs.is_empty() || !degree_ok {
                    return Some(self.label_triple(&[x, y]));
                }
            }
        }
        None
    }

    /// `[x, [y, z]] = [[x, y], z] + (-1)^{|x||y|} [y, [x, z]]`.
    pub fn check_jacobi(&self) -> Option<String> {
        let n = self.dim();
        for x in 0..n {
            for y in 0..n {
                let xy = &self.table[x][y];
                for z in 0..n {
                    let mut acc = self.bracket_sparse(x, &self.table[y][z]);
                    for (k, v) in self.bracket_left_sparse(xy, z) {
                        push(&mut acc, k, -v);
                    }
                    let s = self.deg_sign(x, y);
                    for (k, v) in self.bracket_sparse(y, &self.table[x][z]) {
                        push(&mut acc, k, -(&s * v));
                    }
                    if !acc.is_empty() {
                        return Some(self.label_triple(&[x, y, z]));
                    }
                }
            }
        }
        None
    }

    /// `B(x, y) = (-1)^{|x||y|} B(y, x)`.
    pub fn check_graded_symmetry(&self) -> Option<String> {
        for x in 0..self.dim() {
            for y in 0..self.dim() {
                if self.gram[(x, y)] != &self.deg_sign(x, y) * &self.gram[(y, x)] {
                    return Some(self.label_triple(&[x, y]));
                }
            }
        }
        None
    }

    /// `B([x, y], z) = B(x, [y, z])`.
    pub fn check_invariance(&self) -> Option<String> {
        let n = self.dim();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs: Q = self.table[x][y].iter().map(|(k, v)| v * &self.gram[(*k, z)]).sum();
                    let rhs: Q = self.table[y][z].iter().map(|(k, v)| v * &self.gram[(x, *k)]).sum();
                    if lhs != rhs {
                        return Some(self.label_triple(&[x, y, z]));
                    }
                }
            }
        }
        None
    }

    /// Degrees of nonzero pairings, deduplicated.
    pub fn pairing_degrees(&self) -> Vec<u8> {
        let mut out: Vec<u8> = Vec::new();
        for x in 0..self.dim() {
            for y in 0..self.dim() {
                let d = self.degrees[x] + self.degrees[y];
                if !self.gram[(x, y)].is_zero() && !out.contains(&d) {
                    out.push(d);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.rank() == self.dim()
    }

    /// Brackets of spanning vectors stay in the span.
    pub fn is_closed(&self, sub: &[Vec<Q>]) -> bool {
        self.brackets_into(sub, sub, sub)
    }

    /// `[a, b] ⊂ target` for all spanning vectors.
    pub fn brackets_into(&self, a: &[Vec<Q>], b: &[Vec<Q>], target: &[Vec<Q>]) -> bool {
        let r = linalg::span_rank(self.dim(), target);
        for x in a {
            for y in b {
                let z = self.bracket(x, y);
                if linalg::vec_is_zero(&z) {
                    continue;
                }
                let mut t = target.to_vec();
                t.push(z);
                if linalg::span_rank(self.dim(), &t) != r {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_isotropic(&self, sub: &[Vec<Q>]) -> bool {
        sub.iter().all(|x| sub.iter().all(|y| self.pairing(x, y).is_zero()))
    }

    /// `{x : B(x, s) = 0 for all s ∈ sub}`.
    pub fn perp(&self, sub: &[Vec<Q>]) -> Vec<Vec<Q>> {
        if sub.is_empty() {
            return (0..self.dim()).map(|k| linalg::unit(self.dim(), k)).collect();
        }
        let rows: Vec<Vec<Q>> = sub.iter().map(|s| self.gram.mul_vec(s).unwrap_or_default()).collect();
        Matrix::from_rows(rows).map(|m| m.nullspace()).unwrap_or_default()
    }

    pub fn contains(&self, outer: &[Vec<Q>], inner: &[Vec<Q>]) -> bool {
        let r = linalg::span_rank(self.dim(), outer);
        let mut all = outer.to_vec();
        all.extend(inner.iter().cloned());
        linalg::span_rank(self.dim(), &all) == r
    }

    /// `C[ε] ⊗ self` with `|ε| = 1`, `[fy, gz] = (-1)^{|y||g|} fg [y, z]` and
    /// `B(fy, gz) = (-1)^{|y||g|} tr(fg) B(y, z)`. Basis: plain copy, then `ε` copy.
    pub fn epsilon_extension(&self) -> GradedAlgebra {
        let n = self.dim();
        let mut labels = self.labels.clone();
        labels.extend(self.labels.iter().map(|l| format!("eps*{l}")));
        let mut degrees = self.degrees.clone();
        degrees.extend(self.degrees.iter().map(|d| d + 1));
        let mut table = vec![vec![Vec::new(); 2 * n]; 2 * n];
        let mut gram = Matrix::zeros(2 * n, 2 * n);
        for y in 0..n {
            for z in 0..n {
                for (fe, ge) in [(0usize, 0usize), (1, 0), (0, 1)] {
                    let s = sign(u32::from(self.degrees[y]) * ge as u32);
                    let shift = (fe + ge) * n;
                    table[y + fe * n][z + ge * n] =
                        self.table[y][z].iter().map(|(k, v)| (k + shift, &s * v)).collect();
                    if fe + ge == 1 {
                        gram[(y + fe * n, z + ge * n)] = &s * &self.gram[(y, z)];
                    }
                }
            }
        }
        GradedAlgebra { labels, degrees, table, gram }
    }
}

/// All the pieces of `L` for one `(p, q, S)`.
#[derive(Clone, Debug)]
pub struct ManinTriple {
    pub params: CurveParams,
    pub s: SemisimpleData,
    pub jacobi: JacobiQuotient,
    pub gens: Vec<Gen>,
    index: BTreeMap<Gen, usize>,
    pub algebra: GradedAlgebra,
}

/// `c` with `s_i - s_j = target - c·pq`, if integral.
fn level(s: &SemisimpleData, params: &CurveParams, i: usize, j: usize, target: i64) -> Option<i64> {
    let t = qi(target) - s.eigenvalue(i, j);
    let c = t / qi(params.pq());
    c.is_integer().then(|| as_i64(&c)).flatten()
}

/// `[E_ij, E_kl] = δ_jk E_il - δ_li E_kj`.
fn elementary_bracket(i: usize, j: usize, k: usize, l: usize) -> Vec<(usize, usize, Q)> {
    let mut out = Vec::new();
    if j == k {
        out.push((i, l, Q::one()));
    }
    if l == i {
        out.push((k, j, -Q::one()));
    }
    if out.len() == 2 && out[0].0 == out[1].0 && out[0].1 == out[1].1 {
        out.clear();
    }
    out
}

impl ManinTriple {
    pub fn build(params: CurveParams, s: SemisimpleData) -> Result<Self> {
        let jacobi = JacobiQuotient::new(&params)?;
        let n = s.n();
        let mut gens = Vec::new();
        let mut cpart: Vec<(i64, usize, usize)> = Vec::new();
        for (i, j) in s.pairs() {
            if let Some(c) = level(&s, &params, i, j, 0) {
                cpart.push((c, i, j));
            }
        }
        for &(c, i, j) in &cpart {
            if c >= 0 {
                gens.push(Gen { summand: Summand::B, c, mono: Monomial::ONE, i, j });
            }
        }
        let mut kpart = Vec::new();
        for m in &jacobi.monomials {
            for (i, j) in s.pairs() {
                if let Some(c) = level(&s, &params, i, j, params.w0() - params.weight(*m)) {
                    kpart.push(Gen { summand: Summand::K, c, mono: *m, i, j });
                }
            }
        }
        kpart.sort_by_key(|g| (core::cmp::Reverse(g.c), g.mono, g.i, g.j));
        gens.extend(kpart.iter().cloned());
        gens.extend(kpart.iter().filter(|g| g.c == 0).map(|g| Gen { summand: Summand::H, ..*g }));
        for &(c, i, j) in &cpart {
            if c <= 0 {
                gens.push(Gen { summand: Summand::U, c, mono: Monomial::ONE, i, j });
            }
        }
        debug_assert!(gens.iter().all(|g| g.i < n && g.j < n));
        let index: BTreeMap<Gen, usize> = gens.iter().enumerate().map(|(k, g)| (*g, k)).collect();
        let mut t = ManinTriple {
            params,
            s,
            jacobi,
            gens,
            index,
            algebra: GradedAlgebra { labels: Vec::new(), degrees: Vec::new(), table: Vec::new(), gram: Matrix::zeros(0, 0) },
        };
        t.algebra = t.structure()?;
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn count(&self, summand: Summand) -> usize {
        self.gens.iter().filter(|g| g.summand == summand).count()
    }

    fn idx(&self, g: Gen) -> Result<usize> {
        self.index.get(&g).copied().ok_or_else(|| Error::NotInSpan(g.label()))
    }

    fn i_form(&self, m1: Monomial, m2: Monomial) -> Q {
        intersection_form(&self.params, m1.x, m1.y, m2.x, m2.y).unwrap_or_else(|_| Q::zero())
    }

    /// Bracket of two generators before grading by summand.
    fn raw(&self, g1: &Gen, g2: &Gen, summand: Summand, mono: Monomial, scale: &Q) -> Result<Sparse> {
        let mut out = Vec::new();
        for (i, j, v) in elementary_bracket(g1.i, g1.j, g2.i, g2.j) {
            let g = Gen { summand, c: g1.c + g2.c, mono, i, j };
            out.push((self.idx(g)?, v * scale));
        }
        Ok(out)
    }

    /// `[g1, g2]` for generators with `g1` not after `g2` in summand order.
    fn bracket_gens(&self, g1: &Gen, g2: &Gen) -> Result<Sparse> {
        use Summand::*;
        let one = Q::one();
        match (g1.summand, g2.summand) {
            (B, B) => self.raw(g1, g2, B, Monomial::ONE, &one),
            (B, K) => self.raw(g1, g2, K, g2.mono, &one),
            (B, H) if g1.c == 0 => self.raw(g1, g2, H, g2.mono, &one),
            (B, U) if g1.c + g2.c <= 0 => self.raw(g1, g2, U, Monomial::ONE, &one),
            // μ: ω projected to c ≤ 0
            (K, K) if g1.c + g2.c <= 0 => {
                let i = self.i_form(g1.mono, g2.mono);
                if i.is_zero() { Ok(Vec::new()) } else { self.raw(g1, g2, U, Monomial::ONE, &i) }
            }
            (H, H) => {
                let i = self.i_form(g1.mono, g2.mono);
                if i.is_zero() { Ok(Vec::new()) } else { self.raw(g1, g2, U, Monomial::ONE, &-i) }
            }
            _ => Ok(Vec::new()),
        }
    }

    /// `B` on generators.
    fn pair_gens(&self, g1: &Gen, g2: &Gen) -> Q {
        use Summand::*;
        let k = if g1.j == g2.i && g1.i == g2.j && g1.c + g2.c == 0 { Q::one() } else { Q::zero() };
        if k.is_zero() {
            return k;
        }
        match (g1.summand, g2.summand) {
            (B, U) | (U, B) => k,
            (K, K) => self.i_form(g1.mono, g2.mono),
            (H, H) => -self.i_form(g1.mono, g2.mono),
            _ => Q::zero(),
        }
    }

    fn structure(&self) -> Result<GradedAlgebra> {
        let n = self.dim();
        let degrees: Vec<u8> = self.gens.iter().map(|g| g.summand.degree()).collect();
        let mut table = vec![vec![Vec::new(); n]; n];
        let mut gram = Matrix::zeros(n, n);
        for x in 0..n {
            for y in 0..n {
                let (g1, g2) = (&self.gens[x], &self.gens[y]);
                gram[(x, y)] = self.pair_gens(g1, g2);
                if g1.summand <= g2.summand {
                    table[x][y] = self.bracket_gens(g1, g2)?;
                } else {
                    let s = -sign(u32::from(degrees[x]) * u32::from(degrees[y]));
                    table[x][y] = self.bracket_gens(g2, g1)?.into_iter().map(|(k, v)| (k, &s * v)).collect();
                }
            }
        }
        Ok(GradedAlgebra { labels: self.gens.iter().map(Gen::label).collect(), degrees, table, gram })
    }

    fn unit(&self, g: Gen) -> Vec<Q> {
        linalg::unit(self.dim(), self.index[&g])
    }

    fn with(&self, g: &Gen, summand: Summand) -> Vec<Q> {
        self.unit(Gen { summand, ..*g })
    }

    /// `p₊` via `(b, n, h) ↦ (b, n + h, h, 0)`.
    pub fn p_plus(&self) -> Vec<Vec<Q>> {
        let mut out = Vec::new();
        for g in &self.gens {
            match g.summand {
                Summand::B => out.push(self.unit(*g)),
                Summand::K if g.c > 0 => out.push(self.unit(*g)),
                Summand::H => out.push(linalg::vec_add(&self.with(g, Summand::K), &self.unit(*g))),
                _ => {}
            }
        }
        out
    }

    /// `p₋` via `(n, h, u) ↦ (0, n + h, -h, u)`.
    pub fn p_minus(&self) -> Vec<Vec<Q>> {
        let mut out = Vec::new();
        for g in &self.gens {
            match g.summand {
                Summand::U => out.push(self.unit(*g)),
                Summand::K if g.c < 0 => out.push(self.unit(*g)),
                Summand::H => out.push(linalg::vec_sub(&self.with(g, Summand::K), &self.unit(*g))),
                _ => {}
            }
        }
        out
    }

    /// `ω(k1, k2) = f^{c1+c2} I(m1, m2) [X1, X2]` as `(c, i, j) -> coefficient`.
    pub fn omega(&self, k1: &Gen, k2: &Gen) -> BTreeMap<(i64, usize, usize), Q> {
        let mut out = BTreeMap::new();
        let i = self.i_form(k1.mono, k2.mono);
        if i.is_zero() {
            return out;
        }
        for (a, b, v) in elementary_bracket(k1.i, k1.j, k2.i, k2.j) {
            *out.entry((k1.c + k2.c, a, b)).or_insert_with(Q::zero) += v * &i;
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// `ω([z, k1], k2) + ω(k1, [z, k2]) = [z, ω(k1, k2)]` for `z` in `c`.
    pub fn check_omega_equivariance(&self) -> Option<String> {
        let cgens: Vec<(i64, usize, usize)> = self
            .s
            .pairs()
            .filter_map(|(i, j)| level(&self.s, &self.params, i, j, 0).map(|c| (c, i, j)))
            .collect();
        let ks: Vec<&Gen> = self.gens.iter().filter(|g| g.summand == Summand::K).collect();
        for &(zc, zi, zj) in &cgens {
            let act = |k: &Gen| -> Vec<(Gen, Q)> {
                elementary_bracket(zi, zj, k.i, k.j)
                    .into_iter()
                    .map(|(i, j, v)| (Gen { c: k.c + zc, i, j, ..*k }, v))
                    .collect()
            };
            for k1 in &ks {
                for k2 in &ks {
                    let mut lhs: BTreeMap<(i64, usize, usize), Q> = BTreeMap::new();
                    for (g, v) in act(k1) {
                        for (key, w) in self.omega(&g, k2) {
                            *lhs.entry(key).or_insert_with(Q::zero) += &v * w;
                        }
                    }
                    for (g, v) in act(k2) {
                        for (key, w) in self.omega(k1, &g) {
                            *lhs.entry(key).or_insert_with(Q::zero) += &v * w;
                        }
                    }
                    for ((c, i, j), w) in self.omega(k1, k2) {
                        for (a, b, v) in elementary_bracket(zi, zj, i, j) {
                            *lhs.entry((c + zc, a, b)).or_insert_with(Q::zero) -= v * &w;
                        }
                    }
                    if lhs.values().any(|v| !v.is_zero()) {
                        return Some(format!("z = f^{zc}*E{}{}, {}, {}", zi + 1, zj + 1, k1.label(), k2.label()));
                    }
                }
            }
        }
        None
    }

    /// `K` with `c ≥ 0` mapped into `H^1(U_0)` coordinates.
    fn k_to_h1(&self, model: &FiniteModel, g: &Gen) -> Result<Vec<Q>> {
        let mut m = PolyMatrix::zeros(self.s.n());
        let poly = &self.params.f().pow(g.c as u32) * &WeightedPolynomial::monomial(g.mono, Q::one());
        m.set(g.i, g.j, poly);
        let coords = model.from_polymat(model.basis1(), &m, Form::Beta)?;
        model.u0.contraction.b[1].mul_vec(&coords)
    }

    /// `n₊ ⊕ hPart ≅ H^1(U_0)`, `b = H^0(U_0)`, and the `b`-action on
    /// `n₊ ⊕ hPart` matches the induced bracket on `H^•(U_0)`.
    pub fn check_cohomology_match(&self) -> Result<Option<String>> {
        let model = FiniteModel::new(self.params, self.s.clone())?;
        let h1 = model.u0.cohomology.h1.len();
        let h0 = model.u0.cohomology.h0.len();
        let kplus: Vec<&Gen> = self.gens.iter().filter(|g| g.summand == Summand::K && g.c >= 0).collect();
        if kplus.len() != h1 || self.count(Summand::B) != h0 {
            return Ok(Some(format!("dims: K>=0 {} vs H^1 {h1}, b {} vs H^0 {h0}", kplus.len(), self.count(Summand::B))));
        }
        let images: Vec<Vec<Q>> = kplus.iter().map(|g| self.k_to_h1(&model, g)).collect::<Result<_>>()?;
        if linalg::span_rank(h1, &images) != h1 {
            return Ok(Some("K>=0 does not map onto H^1(U_0)".into()));
        }
        for b in self.gens.iter().filter(|g| g.summand == Summand::B) {
            let mut bm = PolyMatrix::zeros(self.s.n());
            bm.set(b.i, b.j, self.params.f().pow(b.c as u32));
            for k in &kplus {
                let mut km = PolyMatrix::zeros(self.s.n());
                km.set(k.i, k.j, &self.params.f().pow(k.c as u32) * &WeightedPolynomial::monomial(k.mono, Q::one()));
                let via_u0 = model.u0.contraction.b[1].mul_vec(&model.from_polymat(model.basis1(), &bm.commutator(&km)?, Form::Beta)?)?;
                let mut via_l = vec![Q::zero(); h1];
                for (idx, v) in self.algebra.bracket_basis(self.index[b], self.index[*k]) {
                    let g = &self.gens[*idx];
                    via_l = linalg::vec_add(&via_l, &linalg::vec_scale(&self.k_to_h1(&model, g)?, v));
                }
                if via_u0 != via_l {
                    return Ok(Some(format!("{}, {}", b.label(), k.label())));
                }
            }
        }
        Ok(None)
    }

    /// `M = (b ⊕ p₊¹ ⊕ b_{>0}ε ⊕ p₊¹ε) ⊕ C[ε] ⊗ p₋` inside `C[ε] ⊗ L`, with
    /// `p₊¹` the degree-1 part of `p₊`. Returns (tangent subalgebra, `M`).
    pub fn coisotropic_data(&self) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
        let n = self.dim();
        let lift = |v: &Vec<Q>, eps: bool| {
            let mut out = vec![Q::zero(); 2 * n];
            let off = if eps { n } else { 0 };
            for (k, x) in v.iter().enumerate() {
                out[k + off] = x.clone();
            }
            out
        };
        let mut tangent = Vec::new();
        for v in self.p_plus() {
            let k = v.iter().position(|x| !x.is_zero()).unwrap_or(0);
            let g = &self.gens[k];
            tangent.push(lift(&v, false));
            if g.summand != Summand::B || g.c > 0 {
                tangent.push(lift(&v, true));
            }
        }
        let mut m = tangent.clone();
        for v in self.p_minus() {
            m.push(lift(&v, false));
            m.push(lift(&v, true));
        }
        (tangent, m)
    }

    /// `g_0` inside `b⁻`, unshifted copy in `C[ε] ⊗ L`.
    pub fn g0_in_bminus(&self) -> Vec<Vec<Q>> {
        let n = self.dim();
        self.gens
            .iter()
            .enumerate()
            .filter(|(_, g)| g.summand == Summand::U && g.c == 0)
            .map(|(k, _)| linalg::unit(2 * n, k))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: String,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ManinReport {
    pub sizes: BTreeMap<String, usize>,
    pub checks: Vec<AxiomCheck>,
}

impl ManinReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    fn flag(&mut self, name: &str, holds: bool) {
        self.checks.push(AxiomCheck { name: name.into(), holds, witness: None });
    }

    fn witness(&mut self, name: &str, w: Option<String>) {
        self.checks.push(AxiomCheck { name: name.into(), holds: w.is_none(), witness: w });
    }
}

/// Builds `L` and checks every axiom of the two Manin triples.
pub fn verify_manin(params: CurveParams, s: SemisimpleData) -> Result<ManinReport> {
    let t = ManinTriple::build(params, s)?;
    let l = &t.algebra;
    let mut r = ManinReport::default();
    for (name, su) in [("b", Summand::B), ("K", Summand::K), ("hPart", Summand::H), ("b-", Summand::U)] {
        r.sizes.insert(name.into(), t.count(su));
    }
    r.sizes.insert("L".into(), t.dim());
    r.sizes.insert("jacobi quotient".into(), t.jacobi.dim());

    let expected = ((params.p() - 1) * (params.q() - 1)) as usize;
    r.flag("jacobi quotient has dimension (p-1)(q-1)", t.jacobi.dim() == expected);
    r.flag("intersection form antisymmetric", t.jacobi.is_antisymmetric());
    r.flag("intersection form nondegenerate", t.jacobi.is_nondegenerate());
    r.witness("omega equivariant under c", t.check_omega_equivariance());
    r.witness("L graded antisymmetric", l.check_antisymmetry());
    r.witness("L graded Jacobi", l.check_jacobi());
    r.witness("B graded symmetric", l.check_graded_symmetry());
    r.flag("B nondegenerate", l.is_nondegenerate());
    r.witness("B invariant", l.check_invariance());
    r.flag("B has degree -2", l.pairing_degrees().iter().all(|&d| d == 2));

    let (pp, pm) = (t.p_plus(), t.p_minus());
    r.flag("p+ closed under bracket", l.is_closed(&pp));
    r.flag("p- closed under bracket", l.is_closed(&pm));
    r.flag("p+ isotropic", l.is_isotropic(&pp));
    r.flag("p- isotropic", l.is_isotropic(&pm));
    let mut both = pp.clone();
    both.extend(pm.iter().cloned());
    r.flag("p+ and p- complementary", pp.len() + pm.len() == t.dim() && linalg::span_rank(t.dim(), &both) == t.dim());
    r.witness("p+ matches cohomology of U_0", t.check_cohomology_match()?);

    let e = l.epsilon_extension();
    let n = t.dim();
    let lift_all = |sub: &[Vec<Q>]| -> Vec<Vec<Q>> {
        let mut out = Vec::new();
        for v in sub {
            for off in [0, n] {
                let mut w = vec![Q::zero(); 2 * n];
                for (k, x) in v.iter().enumerate() {
                    w[k + off] = x.clone();
                }
                out.push(w);
            }
        }
        out
    };
    let (epp, epm) = (lift_all(&pp), lift_all(&pm));
    r.flag("eps-extension pairing has degree -3", e.pairing_degrees().iter().all(|&d| d == 3));
    r.witness("eps-extension graded antisymmetric", e.check_antisymmetry());
    r.witness("eps-extension graded Jacobi", e.check_jacobi());
    r.witness("eps-extension B graded symmetric", e.check_graded_symmetry());
    r.flag("eps-extension B nondegenerate", e.is_nondegenerate());
    r.witness("eps-extension B invariant", e.check_invariance());
    r.flag("eps p+ and eps p- closed", e.is_closed(&epp) && e.is_closed(&epm));
    r.flag("eps p+ and eps p- Lagrangian", e.is_isotropic(&epp) && e.is_isotropic(&epm) && epp.len() == n && epm.len() == n);

    let (tangent, m) = t.coisotropic_data();
    let mperp = e.perp(&m);
    r.flag("tangent subalgebra closed", e.is_closed(&tangent));
    r.flag("M closed under bracket", e.is_closed(&m));
    r.flag("M coisotropic", e.contains(&m, &mperp));
    r.flag("M perp isotropic", e.is_isotropic(&mperp));
    r.flag("M perp ideal in M", e.brackets_into(&m, &mperp, &mperp));
    let g0 = t.g0_in_bminus();
    r.flag("M perp equals g_0 in b-", mperp.len() == g0.len() && e.contains(&g0, &mperp));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn intersection_values() {
        let pr = CurveParams::new(2, 5).unwrap();
        assert_eq!(intersection_form(&pr, 0, 0, 0, 3).unwrap(), q(-1, 3));
        assert_eq!(intersection_form(&pr, 0, 3, 0, 0).unwrap(), q(1, 3));
        assert!(matches!(intersection_form(&pr, 1, 0, 0, 0), Err(Error::OutOfJacobiRange { .. })));
        let jq = JacobiQuotient::new(&CurveParams::new(3, 7).unwrap()).unwrap();
        assert_eq!(jq.dim(), 12);
        assert!(jq.is_antisymmetric() && jq.is_nondegenerate());
    }

    #[test]
    fn extra_component_sizes() {
        let t = ManinTriple::build(CurveParams::new(2, 5).unwrap(), SemisimpleData::from_integers(&[0, 1, 11]).unwrap()).unwrap();
        assert_eq!((t.count(Summand::B), t.count(Summand::K), t.count(Summand::U), t.dim()), (4, 4, 4, 14));
    }

    #[test]
    fn trivial_s_has_empty_k() {
        let t = ManinTriple::build(CurveParams::new(2, 3).unwrap(), SemisimpleData::from_integers(&[0, 0]).unwrap()).unwrap();
        assert_eq!(t.count(Summand::K), 0);
        assert_eq!(t.count(Summand::B), 4);
    }

    #[test]
    fn small_instances_pass() {
        for (p, qq, s) in [(2, 3, vec![0, 1]), (2, 3, vec![0, 6]), (2, 5, vec![0, 1, 11])] {
            let r = verify_manin(CurveParams::new(p, qq).unwrap(), SemisimpleData::from_integers(&s).unwrap()).unwrap();
            let bad: Vec<_> = r.checks.iter().filter(|c| !c.holds).collect();
            assert!(bad.is_empty(), "({p},{qq}) {s:?}: {bad:?}");
        }
    }
}
