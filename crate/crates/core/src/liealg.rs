//! Real semisimple Lie algebra models with Cartan involution, Killing form and
//! restricted root space decomposition.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, add_scaled, is_positive_definite, unit, Mat, Subspace};
use crate::rootsys::{
    build_root_system, chevalley_constants, chevalley_index, chevalley_table, neg, root_label, Root, RootKind,
    RootSystem,
};
use crate::scalar::{fmt_q, parse_q, q, Scalar, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    /// `G₂ᶜ/G₂`
    G2cG2,
    /// `SL₃(ℂ)/SU₃`
    Sl3cSu3,
    /// `SO⁰(2, n+2)/SO(2)SO(n+2)`
    So2Np2 { n: usize },
}

impl Preset {
    pub fn tag(&self) -> &'static str {
        match self {
            Preset::G2cG2 => "g2c-g2",
            Preset::Sl3cSu3 => "sl3c-su3",
            Preset::So2Np2 { .. } => "so-2-np2",
        }
    }

    pub fn parse(tag: &str, n: Option<usize>) -> Result<Preset> {
        match tag {
            "g2c-g2" => Ok(Preset::G2cG2),
            "sl3c-su3" => Ok(Preset::Sl3cSu3),
            "so-2-np2" => {
                let n = n.ok_or_else(|| Error::InvalidArgument("so-2-np2 needs n".into()))?;
                if n < 1 {
                    return Err(Error::InvalidArgument("so-2-np2 needs n >= 1".into()));
                }
                Ok(Preset::So2Np2 { n })
            }
            other => Err(Error::InvalidArgument(format!("unknown preset {other}"))),
        }
    }

    pub fn n(&self) -> Option<usize> {
        match self {
            Preset::So2Np2 { n } => Some(*n),
            _ => None,
        }
    }

    pub fn root_kind(&self) -> RootKind {
        match self {
            Preset::G2cG2 => RootKind::G2,
            Preset::Sl3cSu3 => RootKind::A2,
            Preset::So2Np2 { .. } => RootKind::B2,
        }
    }

    pub fn is_complex(&self) -> bool {
        !matches!(self, Preset::So2Np2 { .. })
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::So2Np2 { n } => write!(f, "{}(n={})", self.tag(), n),
            _ => f.write_str(self.tag()),
        }
    }
}

/// Matrices realizing the basis in a defining representation; complex
/// entries are split into real and imaginary parts.
#[derive(Clone, Debug)]
pub struct MatrixRealization {
    pub size: usize,
    pub re: Vec<Mat<Q>>,
    pub im: Vec<Mat<Q>>,
}

type Sparse = Vec<(usize, Q)>;

#[derive(Clone, Debug)]
pub struct LieAlgebraModel {
    pub preset: Preset,
    pub dim: usize,
    pub labels: Vec<String>,
    structure: Vec<Vec<Sparse>>,
    pub theta: Mat<Q>,
    pub killing: Mat<Q>,
    pub inner: Mat<Q>,
    pub k: Subspace,
    pub p: Subspace,
    pub a: Subspace,
    /// Ordered basis `H₁, H₂` of `𝔞`.
    pub a_basis: Vec<Vec<Q>>,
    /// `simple_root_values[i][k] = αᵢ(H_k)`.
    pub simple_root_values: Vec<Vec<Q>>,
    pub complex_j: Option<Mat<Q>>,
    pub root_system: RootSystem,
    pub realization: Option<MatrixRealization>,
    pub datum: RestrictedRootDatum,
}

#[derive(Clone, Debug)]
pub struct RestrictedRootDatum {
    /// Same order as `RootSystem::all_roots`.
    pub roots: Vec<Root>,
    /// `values[r][k] = α_r(H_k)`.
    pub values: Vec<Vec<Q>>,
    pub root_spaces: Vec<Subspace>,
    pub multiplicities: Vec<usize>,
    pub g0: Subspace,
    pub k0: Subspace,
    /// `H_α ∈ 𝔞` with `⟨H_α, H⟩ = α(H)`.
    pub root_vectors: Vec<Vec<Q>>,
    /// `Hʲ ∈ 𝔞` with `α_k(Hʲ) = δ_{jk}`.
    pub dual_vectors: Vec<Vec<Q>>,
}

impl RestrictedRootDatum {
    pub fn index(&self, r: &[i64]) -> Result<usize> {
        self.roots.iter().position(|x| x == r).ok_or_else(|| Error::NotARoot(root_label(r)))
    }

    pub fn space(&self, r: &[i64]) -> &Subspace {
        &self.root_spaces[self.index(r).expect("root")]
    }

    pub fn multiplicity(&self, r: &[i64]) -> usize {
        self.multiplicities[self.index(r).expect("root")]
    }

    pub fn root_vector(&self, r: &[i64]) -> &[Q] {
        &self.root_vectors[self.index(r).expect("root")]
    }
}

fn sparse_push(v: &mut Sparse, idx: usize, c: Q) {
    if c.is_zero() {
        return;
    }
    if let Some(e) = v.iter_mut().find(|e| e.0 == idx) {
        e.1 += c;
    } else {
        v.push((idx, c));
    }
    v.retain(|e| !e.1.is_zero());
    v.sort_by_key(|e| e.0);
}

struct Raw {
    labels: Vec<String>,
    structure: Vec<Vec<Sparse>>,
    theta: Mat<Q>,
    a_basis: Vec<Vec<Q>>,
    simple_root_values: Vec<Vec<Q>>,
    complex_j: Option<Mat<Q>>,
    realization: Option<MatrixRealization>,
}

pub fn build_model(preset: Preset) -> Result<LieAlgebraModel> {
    let rs = build_root_system(preset.root_kind());
    let raw = match preset {
        Preset::So2Np2 { n } => {
            if n < 1 {
                return Err(Error::InvalidArgument("so-2-np2 needs n >= 1".into()));
            }
            build_orthogonal(n)
        }
        _ => build_complex(&rs),
    };
    let dim = raw.labels.len();
    let mut model = LieAlgebraModel {
        preset,
        dim,
        labels: raw.labels,
        structure: raw.structure,
        theta: raw.theta,
        killing: Mat::zeros(dim, dim),
        inner: Mat::zeros(dim, dim),
        k: Subspace::zero(dim),
        p: Subspace::zero(dim),
        a: Subspace::zero(dim),
        a_basis: raw.a_basis,
        simple_root_values: raw.simple_root_values,
        complex_j: raw.complex_j,
        root_system: rs,
        realization: raw.realization,
        datum: RestrictedRootDatum {
            roots: Vec::new(),
            values: Vec::new(),
            root_spaces: Vec::new(),
            multiplicities: Vec::new(),
            g0: Subspace::zero(dim),
            k0: Subspace::zero(dim),
            root_vectors: Vec::new(),
            dual_vectors: Vec::new(),
        },
    };
    let id = Mat::<Q>::identity(dim);
    model.k = Subspace::span(dim, &model.theta.sub(&id).kernel());
    model.p = Subspace::span(dim, &model.theta.add(&id).kernel());
    model.a = Subspace::span(dim, &model.a_basis);
    model.killing = model.compute_killing();
    model.inner = model.killing.mul(&model.theta).scale(&q(-1));
    if !is_positive_definite(&model.inner) {
        return Err(Error::Invariant("-B(X, θY) is not positive definite".into()));
    }
    model.datum = restricted_root_decomposition(&model)?;
    Ok(model)
}

fn build_complex(rs: &RootSystem) -> Raw {
    let consts = chevalley_constants(rs);
    let table = chevalley_table(rs, &consts);
    let m = rs.rank + rs.all_roots.len();
    let dim = 2 * m;
    let mut labels = Vec::with_capacity(dim);
    for b in 0..m {
        let base = if b < rs.rank { format!("h{}", b + 1) } else { format!("x[{}]", root_label(&rs.all_roots[b - rs.rank])) };
        labels.push(base.clone());
        labels.push(format!("i*{base}"));
    }
    let mut structure = vec![vec![Vec::new(); dim]; dim];
    for a in 0..m {
        for b in 0..m {
            for &(c, coef) in &table[a][b] {
                for s in 0..2 {
                    for t in 0..2 {
                        // (iˢ x_a)(iᵗ x_b) = i^{s+t} [x_a, x_b]
                        let (idx, sign) = match s + t {
                            0 => (2 * c, 1),
                            1 => (2 * c + 1, 1),
                            _ => (2 * c, -1),
                        };
                        sparse_push(&mut structure[2 * a + s][2 * b + t], idx, q(sign * coef));
                    }
                }
            }
        }
    }
    // θ(z x_α) = −z̄ x_{−α}, θ(z h) = −z̄ h
    let mut theta = Mat::zeros(dim, dim);
    for b in 0..m {
        let target = if b < rs.rank { b } else { chevalley_index(rs, &neg(&rs.all_roots[b - rs.rank])) };
        theta.set(2 * target, 2 * b, q(-1));
        theta.set(2 * target + 1, 2 * b + 1, q(1));
    }
    let mut j = Mat::zeros(dim, dim);
    for b in 0..m {
        j.set(2 * b + 1, 2 * b, q(1));
        j.set(2 * b, 2 * b + 1, q(-1));
    }
    let a_basis = (0..rs.rank).map(|k| unit(dim, 2 * k)).collect();
    let simple_root_values =
        (0..rs.rank).map(|i| (0..rs.rank).map(|k| q(rs.cartan_matrix[i][k])).collect()).collect();
    let realization = (rs.kind == RootKind::A2).then(|| sl3_realization(rs, &consts));
    Raw { labels, structure, theta, a_basis, simple_root_values, complex_j: Some(j), realization }
}

type CMat = Vec<Vec<(Q, Q)>>;

fn cmat_zero(n: usize) -> CMat {
    vec![vec![(Q::zero(), Q::zero()); n]; n]
}

fn cmat_commutator(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    let mut out = cmat_zero(n);
    for i in 0..n {
        for j in 0..n {
            let (mut re, mut im) = (Q::zero(), Q::zero());
            for k in 0..n {
                let (ar, ai) = &a[i][k];
                let (br, bi) = &b[k][j];
                re += ar * br - ai * bi;
                im += ar * bi + ai * br;
                let (br, bi) = &b[i][k];
                let (ar, ai) = &a[k][j];
                re -= br * ar - bi * ai;
                im -= br * ai + bi * ar;
            }
            out[i][j] = (re, im);
        }
    }
    out
}

/// Chevalley basis of `𝔰𝔩₃(ℂ)` as 3×3 matrices, propagated from the simple
/// root vectors with the same structure constants as the abstract model.
fn sl3_realization(rs: &RootSystem, consts: &crate::rootsys::ChevalleyConstants) -> MatrixRealization {
    let unit_mat = |i: usize, j: usize| {
        let mut m = cmat_zero(3);
        m[i][j] = (Q::one(), Q::zero());
        m
    };
    let diff = |i: usize, j: usize| {
        let mut m = cmat_zero(3);
        m[i][i] = (Q::one(), Q::zero());
        m[j][j] = (q(-1), Q::zero());
        m
    };
    let mut mats: BTreeMap<Root, CMat> = BTreeMap::new();
    mats.insert(vec![1, 0], unit_mat(0, 1));
    mats.insert(vec![0, 1], unit_mat(1, 2));
    mats.insert(vec![-1, 0], unit_mat(1, 0));
    mats.insert(vec![0, -1], unit_mat(2, 1));
    while mats.len() < rs.all_roots.len() {
        let known: Vec<(Root, CMat)> = mats.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        for (a, ma) in &known {
            for (b, mb) in &known {
                let s = crate::rootsys::add(a, b);
                if !rs.is_root(&s) || mats.contains_key(&s) {
                    continue;
                }
                let nab = q(consts.get(a, b));
                let c = cmat_commutator(ma, mb);
                let scaled = c.into_iter().map(|row| row.into_iter().map(|(r, i)| (r / &nab, i / &nab)).collect()).collect();
                mats.insert(s, scaled);
            }
        }
    }
    let mut chevalley: Vec<CMat> = vec![diff(0, 1), diff(1, 2)];
    for r in &rs.all_roots {
        chevalley.push(mats[r].clone());
    }
    let mut re = Vec::new();
    let mut im = Vec::new();
    let to_mat = |m: &CMat, part: usize| {
        let rows: Vec<Vec<Q>> =
            m.iter().map(|row| row.iter().map(|(r, i)| if part == 0 { r.clone() } else { i.clone() }).collect()).collect();
        Mat::from_rows(&rows, 3)
    };
    for m in &chevalley {
        re.push(to_mat(m, 0));
        im.push(to_mat(m, 1));
        // i·M
        re.push(to_mat(m, 1).scale(&q(-1)));
        im.push(to_mat(m, 0));
    }
    MatrixRealization { size: 3, re, im }
}

fn build_orthogonal(n: usize) -> Raw {
    let size = n + 4;
    let timelike = |i: usize| i < 2;
    let mut pairs = Vec::new();
    for a in 0..size {
        for b in a + 1..size {
            pairs.push((a, b));
        }
    }
    let dim = pairs.len();
    let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut labels = Vec::with_capacity(dim);
    let mut mats = Vec::with_capacity(dim);
    let mut theta = Mat::zeros(dim, dim);
    for (i, &(a, b)) in pairs.iter().enumerate() {
        let compact = timelike(a) == timelike(b);
        let mut m = vec![vec![0i64; size]; size];
        m[a][b] = 1;
        m[b][a] = if compact { -1 } else { 1 };
        mats.push(m);
        labels.push(format!("{}[{},{}]", if compact { "K" } else { "P" }, a, b));
        theta.set(i, i, q(if compact { 1 } else { -1 }));
    }
    let mut structure = vec![vec![Vec::new(); dim]; dim];
    for x in 0..dim {
        for y in 0..dim {
            let c = int_commutator(&mats[x], &mats[y]);
            for (&(a, b), &idx) in &index {
                if c[a][b] != 0 {
                    structure[x][y].push((idx, q(c[a][b])));
                }
            }
            structure[x][y].sort_by_key(|e| e.0);
        }
    }
    let a_basis = vec![unit(dim, index[&(0, 2)]), unit(dim, index[&(1, 3)])];
    // α₁ = ε₁ − ε₂ (long), α₂ = ε₂ (short)
    let simple_root_values = vec![vec![q(1), q(-1)], vec![q(0), q(1)]];
    let to_q = |m: &Vec<Vec<i64>>| {
        let rows: Vec<Vec<Q>> = m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Mat::from_rows(&rows, size)
    };
    let realization = MatrixRealization {
        size,
        re: mats.iter().map(to_q).collect(),
        im: mats.iter().map(|_| Mat::zeros(size, size)).collect(),
    };
    Raw { labels, structure, theta, a_basis, simple_root_values, complex_j: None, realization: Some(realization) }
}

fn int_commutator(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = (0..n).map(|k| a[i][k] * b[k][j] - b[i][k] * a[k][j]).sum();
        }
    }
    out
}

impl LieAlgebraModel {
    /// Nonzero structure constants `[e_a, e_b] = Σ c e_i`.
    pub fn structure_constants(&self, a: usize, b: usize) -> &[(usize, Q)] {
        &self.structure[a][b]
    }

    pub fn bracket<F: Scalar>(&self, x: &[F], y: &[F]) -> Vec<F> {
        assert_eq!(x.len(), self.dim, "bracket: left argument has wrong length");
        assert_eq!(y.len(), self.dim, "bracket: right argument has wrong length");
        let mut out = vec![F::zero(); self.dim];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let prod = xa.clone() * yb.clone();
                for (c, coef) in &self.structure[a][b] {
                    out[*c] = out[*c].clone() + prod.clone() * F::from_rational(coef);
                }
            }
        }
        out
    }

    pub fn try_bracket(&self, x: &[Q], y: &[Q]) -> Result<Vec<Q>> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
            }
        }
        Ok(self.bracket(x, y))
    }

    /// Matrix of `ad X` acting on column vectors.
    pub fn ad<F: Scalar>(&self, x: &[F]) -> Mat<F> {
        let mut m = Mat::<F>::zeros(self.dim, self.dim);
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for b in 0..self.dim {
                for (c, coef) in &self.structure[a][b] {
                    let v = m.get(*c, b).clone() + xa.clone() * F::from_rational(coef);
                    m.set(*c, b, v);
                }
            }
        }
        m
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Q> {
        unit(self.dim, i)
    }

    fn compute_killing(&self) -> Mat<Q> {
        // B(e_a, e_b) = Σ_{c,d} C_{ac}^d C_{bd}^c
        let n = self.dim;
        let mut k = Mat::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let mut s = Q::zero();
                for c in 0..n {
                    for (d, x) in &self.structure[a][c] {
                        for (e, y) in &self.structure[b][*d] {
                            if *e == c {
                                s += x * y;
                            }
                        }
                    }
                }
                k.set(a, b, s.clone());
                k.set(b, a, s);
            }
        }
        k
    }

    pub fn inner_product<F: Scalar>(&self, x: &[F], y: &[F]) -> F {
        linalg::bilinear(&self.inner.lift(), x, y)
    }

    pub fn theta_apply<F: Scalar>(&self, x: &[F]) -> Vec<F> {
        self.theta.lift::<F>().mul_vec(x)
    }

    pub fn theta_space<F: Scalar>(&self, s: &Subspace<F>) -> Subspace<F> {
        s.image(&self.theta.lift())
    }

    /// `π_𝔭(s)`, the image under `(1 − θ)/2`.
    pub fn project_p<F: Scalar>(&self, s: &Subspace<F>) -> Subspace<F> {
        let id = Mat::<Q>::identity(self.dim);
        s.image(&id.sub(&self.theta).lift())
    }

    pub fn project_k<F: Scalar>(&self, s: &Subspace<F>) -> Subspace<F> {
        let id = Mat::<Q>::identity(self.dim);
        s.image(&id.add(&self.theta).lift())
    }

    /// Span of all brackets `[u, v]`.
    pub fn bracket_spaces<F: Scalar>(&self, u: &Subspace<F>, v: &Subspace<F>) -> Subspace<F> {
        let mut vs = Vec::new();
        for x in u.basis() {
            for y in v.basis() {
                vs.push(self.bracket(x, y));
            }
        }
        Subspace::span(self.dim, &vs)
    }

    pub fn is_subalgebra<F: Scalar>(&self, s: &Subspace<F>) -> bool {
        let b = s.basis();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                if !s.contains_vector(&self.bracket(&b[i], &b[j])) {
                    return false;
                }
            }
        }
        true
    }

    pub fn has_complex_structure(&self) -> bool {
        self.complex_j.is_some()
    }

    /// `H'_α = 2/⟨α,α⟩ · H_α`.
    pub fn coroot(&self, alpha: &[i64]) -> Result<Vec<Q>> {
        let i = self.datum.index(alpha)?;
        let h = &self.datum.root_vectors[i];
        let len = self.inner_product(h, h);
        Ok(linalg::scaled(&(q(2) / len), h))
    }

    /// `α(H)` for `H ∈ 𝔞`.
    pub fn root_value(&self, alpha: &[i64], h: &[Q]) -> Result<Q> {
        let i = self.datum.index(alpha)?;
        Ok(self.inner_product(&self.datum.root_vectors[i], h))
    }

    /// Length of `α` in the form induced on `𝔞*`.
    pub fn root_norm2(&self, alpha: &[i64]) -> Result<Q> {
        let i = self.datum.index(alpha)?;
        let h = &self.datum.root_vectors[i];
        Ok(self.inner_product(h, h))
    }

    /// Distinct frequencies `k ≥ 0` with `(ad Z)² = −k²` on its eigenspaces, for `Z ∈ 𝔨`.
    pub fn rotation_frequencies(&self, z: &[Q]) -> Result<Vec<Q>> {
        if !self.k.contains_vector(z) {
            return Err(Error::InvalidArgument("Z must lie in k".into()));
        }
        let d = self.ad(z);
        let spec = linalg::rational_spectrum(&d.mul(&d))
            .ok_or_else(|| Error::InvalidArgument("(ad Z)^2 has irrational spectrum".into()))?;
        let mut out = Vec::new();
        for (mu, _) in spec {
            let k = crate::scalar::rational_sqrt(&-mu).ok_or_else(|| Error::InvalidArgument("irrational frequency".into()))?;
            out.push(k);
        }
        out.sort();
        Ok(out)
    }

    /// `Ad(exp tZ)` for `Z ∈ 𝔨` with integral frequencies, at the angle with
    /// `cos t = c`, `sin t = s`. Exact whenever `(c, s)` is a rational point
    /// of the unit circle.
    pub fn compact_rotation(&self, z: &[Q], c: &Q, s: &Q) -> Result<Mat<Q>> {
        if c * c + s * s != Q::one() {
            return Err(Error::InvalidArgument("(c, s) must lie on the unit circle".into()));
        }
        let ks = self.rotation_frequencies(z)?;
        if ks.iter().any(|k| !k.is_integer()) {
            return Err(Error::InvalidArgument("frequencies of Z are not integral".into()));
        }
        let d = self.ad(z);
        let d2 = d.mul(&d);
        let id = Mat::identity(self.dim);
        let mut out = Mat::zeros(self.dim, self.dim);
        let (mut t_prev, mut t_cur) = (Q::one(), c.clone());
        let (mut u_prev, mut u_cur) = (Q::zero(), Q::one());
        let top = ks.last().map(|k| k.to_integer()).unwrap_or_default();
        let mut cheb = vec![(Q::one(), Q::zero())];
        let mut k = num_bigint::BigInt::from(1);
        while k <= top {
            cheb.push((t_cur.clone(), u_cur.clone()));
            let t_next = q(2) * c * &t_cur - &t_prev;
            let u_next = q(2) * c * &u_cur - &u_prev;
            (t_prev, t_cur, u_prev, u_cur) = (t_cur, t_next, u_cur, u_next);
            k += 1;
        }
        for k in &ks {
            let mut e = id.clone();
            for l in ks.iter().filter(|l| *l != k) {
                let l2 = l * l;
                e = e.mul(&d2.add(&id.scale(&l2))).scale(&(Q::one() / (&l2 - k * k)));
            }
            let idx: usize = k.to_integer().try_into().map_err(|_| Error::InvalidArgument("frequency too large".into()))?;
            let (tk, uk) = &cheb[idx];
            out = out.add(&e.scale(tk));
            if !k.is_zero() {
                out = out.add(&d.mul(&e).scale(&(s * uk / k)));
            }
        }
        Ok(out)
    }

    pub fn jacobi_defect(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim;
        for a in 0..n {
            for b in a + 1..n {
                let ab = self.bracket_basis_vec(a, b);
                for c in b + 1..n {
                    let bc = self.bracket_basis_vec(b, c);
                    let ca = self.bracket_basis_vec(c, a);
                    let mut total = vec![Q::zero(); n];
                    self.accumulate_bracket_with_basis(&mut total, &ab, c);
                    self.accumulate_bracket_with_basis(&mut total, &bc, a);
                    self.accumulate_bracket_with_basis(&mut total, &ca, b);
                    if !linalg::is_zero_vec(&total) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    fn bracket_basis_vec(&self, a: usize, b: usize) -> Vec<(usize, Q)> {
        self.structure[a][b].clone()
    }

    fn accumulate_bracket_with_basis(&self, out: &mut [Q], x: &[(usize, Q)], c: usize) {
        for (i, xi) in x {
            for (d, coef) in &self.structure[*i][c] {
                out[*d] += xi * coef;
            }
        }
    }

    pub fn antisymmetry_defect(&self) -> Option<(usize, usize)> {
        for a in 0..self.dim {
            for b in 0..self.dim {
                let mut s: Vec<(usize, Q)> = self.structure[a][b].clone();
                for (c, v) in &self.structure[b][a] {
                    sparse_push(&mut s, *c, v.clone());
                }
                if !s.is_empty() {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// First basis pair with `θ[X,Y] ≠ [θX,θY]`.
    pub fn theta_automorphism_defect(&self) -> Option<(usize, usize)> {
        if !self.theta.mul(&self.theta).sub(&Mat::identity(self.dim)).is_zero() {
            return Some((usize::MAX, usize::MAX));
        }
        let cols: Vec<Vec<Q>> = (0..self.dim).map(|i| self.theta.col(i)).collect();
        for a in 0..self.dim {
            for b in a + 1..self.dim {
                let lhs = self.theta.mul_vec(&self.bracket(&self.basis_vector(a), &self.basis_vector(b)));
                let rhs = self.bracket(&cols[a], &cols[b]);
                if lhs != rhs {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// First basis element `X` with `⟨ad(X)Y, Z⟩ ≠ −⟨Y, ad(θX)Z⟩` for some basis `Y, Z`.
    pub fn ad_invariance_defect(&self) -> Option<usize> {
        for a in 0..self.dim {
            let x = self.basis_vector(a);
            let lhs = self.ad(&x).transpose().mul(&self.inner);
            let rhs = self.inner.mul(&self.ad(&self.theta.mul_vec(&x))).scale(&q(-1));
            if lhs != rhs {
                return Some(a);
            }
        }
        None
    }

    /// `[𝔨,𝔨] ⊂ 𝔨`, `[𝔨,𝔭] ⊂ 𝔭`, `[𝔭,𝔭] ⊂ 𝔨`, `𝔤 = 𝔨 ⊕ 𝔭`.
    pub fn cartan_decomposition_holds(&self) -> bool {
        self.k.dim() + self.p.dim() == self.dim
            && self.k.contains(&self.bracket_spaces(&self.k, &self.k))
            && self.p.contains(&self.bracket_spaces(&self.k, &self.p))
            && self.k.contains(&self.bracket_spaces(&self.p, &self.p))
    }

    /// Killing form negative definite on `𝔨` and positive definite on `𝔭`.
    pub fn killing_signature_holds(&self) -> bool {
        let restrict = |s: &Subspace, sign: i64| {
            let b = s.basis();
            let mut m = Mat::zeros(b.len(), b.len());
            for i in 0..b.len() {
                for j in 0..b.len() {
                    m.set(i, j, linalg::bilinear(&self.killing, &b[i], &b[j]) * q(sign));
                }
            }
            is_positive_definite(&m)
        };
        restrict(&self.k, -1) && restrict(&self.p, 1)
    }

    /// Killing form negative definite on the given subspace.
    pub fn is_compact_subspace(&self, s: &Subspace) -> bool {
        let b = s.basis();
        let mut m = Mat::zeros(b.len(), b.len());
        for i in 0..b.len() {
            for j in 0..b.len() {
                m.set(i, j, -linalg::bilinear(&self.killing, &b[i], &b[j]));
            }
        }
        is_positive_definite(&m)
    }

    pub fn a_is_maximal_abelian_in_p(&self) -> bool {
        let abelian = self.bracket_spaces(&self.a, &self.a).is_zero();
        let centralizer_in_p = self.p.intersect(&self.datum.g0);
        abelian && self.p.contains(&self.a) && centralizer_in_p == self.a
    }

    /// `J` commutes with every `ad X` and preserves every root space.
    pub fn complex_structure_holds(&self) -> bool {
        let Some(j) = &self.complex_j else {
            return true;
        };
        if !j.mul(j).add(&Mat::identity(self.dim)).is_zero() {
            return false;
        }
        for a in 0..self.dim {
            let ad = self.ad(&self.basis_vector(a));
            if j.mul(&ad) != ad.mul(j) {
                return false;
            }
        }
        self.datum.root_spaces.iter().all(|s| s.image(j) == *s)
    }

    /// Document form of the model: labels, sparse bracket tensor, θ.
    pub fn to_document(&self) -> ModelDocument {
        let mut bracket = Vec::new();
        for a in 0..self.dim {
            for b in a + 1..self.dim {
                for (c, v) in &self.structure[a][b] {
                    bracket.push((a, b, *c, fmt_q(v)));
                }
            }
        }
        let mut theta = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = self.theta.get(i, j);
                if !v.is_zero() {
                    theta.push((i, j, fmt_q(v)));
                }
            }
        }
        ModelDocument {
            schema_version: 1,
            preset: self.preset.tag().to_string(),
            n: self.preset.n(),
            dim: self.dim,
            labels: self.labels.clone(),
            bracket,
            theta,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("serializable")
    }

    /// Rebuilds the preset named in the document and checks that the stored
    /// tensor and involution agree with it.
    pub fn from_document(doc: &ModelDocument) -> Result<LieAlgebraModel> {
        if doc.schema_version != 1 {
            return Err(Error::Parse(format!("unsupported schema version {}", doc.schema_version)));
        }
        let model = build_model(Preset::parse(&doc.preset, doc.n)?)?;
        if doc.dim != model.dim || doc.labels != model.labels {
            return Err(Error::Parse("basis does not match preset".into()));
        }
        let mut structure = vec![vec![Vec::new(); model.dim]; model.dim];
        for (a, b, c, v) in &doc.bracket {
            let v = parse_q(v).ok_or_else(|| Error::Parse(format!("bad rational {v}")))?;
            if *a >= model.dim || *b >= model.dim || *c >= model.dim {
                return Err(Error::Parse("bracket index out of range".into()));
            }
            sparse_push(&mut structure[*a][*b], *c, v.clone());
            sparse_push(&mut structure[*b][*a], *c, -v);
        }
        if structure != model.structure {
            return Err(Error::Parse("bracket tensor does not match preset".into()));
        }
        let mut theta = Mat::zeros(model.dim, model.dim);
        for (i, j, v) in &doc.theta {
            let v = parse_q(v).ok_or_else(|| Error::Parse(format!("bad rational {v}")))?;
            if *i >= model.dim || *j >= model.dim {
                return Err(Error::Parse("theta index out of range".into()));
            }
            theta.set(*i, *j, v);
        }
        if theta != model.theta {
            return Err(Error::Parse("theta does not match preset".into()));
        }
        Ok(model)
    }

    pub fn from_json(s: &str) -> Result<LieAlgebraModel> {
        let doc: ModelDocument = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_document(&doc)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ModelDocument {
    pub schema_version: u32,
    pub preset: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    pub dim: usize,
    pub labels: Vec<String>,
    /// `(a, b, c, coefficient)` with `a < b`: `[e_a, e_b]` has coefficient on `e_c`.
    pub bracket: Vec<(usize, usize, usize, String)>,
    /// Nonzero entries `(row, col, value)`.
    pub theta: Vec<(usize, usize, String)>,
}

/// Simultaneous eigenspace decomposition of `ad 𝔞`.
pub fn restricted_root_decomposition(model: &LieAlgebraModel) -> Result<RestrictedRootDatum> {
    let dim = model.dim;
    let rs = &model.root_system;
    let rank = rs.rank;
    let ads: Vec<Mat<Q>> = model.a_basis.iter().map(|h| model.ad(h)).collect();
    let stacked = |values: &[Q]| {
        let mut m = Mat::zeros(rank * dim, dim);
        for (k, ad) in ads.iter().enumerate() {
            for i in 0..dim {
                for j in 0..dim {
                    let mut v = ad.get(i, j).clone();
                    if i == j {
                        v -= &values[k];
                    }
                    m.set(k * dim + i, j, v);
                }
            }
        }
        m
    };
    let mut values = Vec::new();
    let mut root_spaces = Vec::new();
    let mut multiplicities = Vec::new();
    for r in &rs.all_roots {
        let v: Vec<Q> = (0..rank)
            .map(|k| (0..rank).fold(Q::zero(), |acc, i| acc + q(r[i]) * &model.simple_root_values[i][k]))
            .collect();
        let space = Subspace::span(dim, &stacked(&v).kernel());
        if space.is_zero() {
            return Err(Error::Invariant(format!("root {} has trivial root space", root_label(r))));
        }
        multiplicities.push(space.dim());
        root_spaces.push(space);
        values.push(v);
    }
    let g0 = Subspace::span(dim, &stacked(&vec![Q::zero(); rank]).kernel());
    let total: usize = multiplicities.iter().sum::<usize>() + g0.dim();
    if total != dim {
        return Err(Error::Invariant(format!("root spaces and g0 span {total} of {dim} dimensions")));
    }
    let k0 = g0.intersect(&model.k);
    if g0 != k0.sum(&model.a) {
        return Err(Error::Invariant("g0 is not k0 + a".into()));
    }
    for (i, r) in rs.all_roots.iter().enumerate() {
        let ni = rs.root_index(&neg(r)).unwrap();
        if multiplicities[i] != multiplicities[ni] || model.theta_space(&root_spaces[i]) != root_spaces[ni] {
            return Err(Error::Invariant(format!("θ does not swap g_α and g_-α for {}", root_label(r))));
        }
    }
    // Gram matrix of the a-basis
    let gram = Mat::from_rows(
        &model
            .a_basis
            .iter()
            .map(|x| model.a_basis.iter().map(|y| linalg::bilinear(&model.inner, x, y)).collect())
            .collect::<Vec<_>>(),
        rank,
    );
    let combine = |c: &[Q]| {
        let mut out = vec![Q::zero(); dim];
        for (ck, h) in c.iter().zip(&model.a_basis) {
            add_scaled(&mut out, ck, h);
        }
        out
    };
    let root_vectors = values
        .iter()
        .map(|v| combine(&gram.solve(v).expect("Gram matrix of a is invertible")))
        .collect();
    let sv = Mat::from_rows(&model.simple_root_values, rank);
    let dual_vectors = (0..rank)
        .map(|j| combine(&sv.solve(&unit(rank, j)).expect("simple roots are independent on a")))
        .collect();
    Ok(RestrictedRootDatum {
        roots: rs.all_roots.clone(),
        values,
        root_spaces,
        multiplicities,
        g0,
        k0,
        root_vectors,
        dual_vectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        let g2 = build_model(Preset::G2cG2).unwrap();
        assert_eq!((g2.dim, g2.p.dim()), (28, 14));
        let sl3 = build_model(Preset::Sl3cSu3).unwrap();
        assert_eq!((sl3.dim, sl3.p.dim()), (16, 8));
        for n in 1..=3 {
            let so = build_model(Preset::So2Np2 { n }).unwrap();
            assert_eq!(so.p.dim(), 2 * n + 4);
        }
        assert!(build_model(Preset::So2Np2 { n: 0 }).is_err());
    }

    #[test]
    fn multiplicities() {
        let g2 = build_model(Preset::G2cG2).unwrap();
        assert!(g2.datum.multiplicities.iter().all(|&m| m == 2));
        assert_eq!(g2.datum.k0.dim(), 2);
        let so = build_model(Preset::So2Np2 { n: 3 }).unwrap();
        assert_eq!(so.datum.multiplicity(&[1, 0]), 1);
        assert_eq!(so.datum.multiplicity(&[1, 2]), 1);
        assert_eq!(so.datum.multiplicity(&[0, 1]), 3);
        assert_eq!(so.datum.multiplicity(&[1, 1]), 3);
    }

    #[test]
    fn coroot_pairs_to_two() {
        let g2 = build_model(Preset::G2cG2).unwrap();
        for r in &g2.root_system.all_roots {
            let h = g2.coroot(r).unwrap();
            assert_eq!(g2.root_value(r, &h).unwrap(), q(2));
        }
    }

    #[test]
    fn dual_vectors() {
        let so = build_model(Preset::So2Np2 { n: 1 }).unwrap();
        for j in 0..2 {
            for k in 0..2 {
                let v = so.root_value(&so.root_system.simple_roots[k], &so.datum.dual_vectors[j]).unwrap();
                assert_eq!(v, if j == k { q(1) } else { q(0) });
            }
        }
    }

    #[test]
    fn structural_identities() {
        for preset in [Preset::G2cG2, Preset::Sl3cSu3, Preset::So2Np2 { n: 2 }] {
            let m = build_model(preset).unwrap();
            assert_eq!(m.antisymmetry_defect(), None);
            assert_eq!(m.jacobi_defect(), None);
            assert_eq!(m.theta_automorphism_defect(), None);
            assert_eq!(m.ad_invariance_defect(), None);
            assert!(m.cartan_decomposition_holds());
            assert!(m.killing_signature_holds());
            assert!(m.a_is_maximal_abelian_in_p());
            assert!(m.complex_structure_holds());
        }
    }

    #[test]
    fn json_round_trip() {
        let m = build_model(Preset::So2Np2 { n: 1 }).unwrap();
        let s = m.to_json();
        let back = LieAlgebraModel::from_json(&s).unwrap();
        assert_eq!(back.to_json(), s);
        let tampered = s.replacen("\"1\"", "\"2\"", 1);
        assert!(LieAlgebraModel::from_json(&tampered).is_err());
    }
}
