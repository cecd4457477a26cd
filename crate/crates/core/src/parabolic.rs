//! Maximal parabolic subalgebras `𝔮ⱼ` and their Chevalley and Langlands pieces.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::LieAlgebraModel;
use crate::linalg::{self, Mat, Subspace};
use crate::rootsys::{is_positive, neg, root_label, Root};
use crate::scalar::{q, Q};

#[derive(Clone, Debug)]
pub struct ParabolicDecomposition {
    pub model: Arc<LieAlgebraModel>,
    /// One-based index of the removed simple root.
    pub j: usize,
    /// Zero-based indices of the simple roots in `Φⱼ`.
    pub phi: Vec<usize>,
    pub sigma_j: Vec<Root>,
    pub sigma_j_positive: Vec<Root>,
    pub lj: Subspace,
    pub nj: Subspace,
    pub aj: Subspace,
    pub a_upper_j: Subspace,
    pub mj: Subspace,
    pub gj: Subspace,
    pub zj: Subspace,
    pub kj: Subspace,
    pub bj: Subspace,
    pub qj: Subspace,
    /// `ν ↦ 𝔫ⱼᵛ`
    pub gradation: BTreeMap<usize, Subspace>,
    pub h_upper_j: Vec<Q>,
    /// `𝔨_α = 𝔨 ∩ (𝔤_{−α} ⊕ 𝔤_α)` for every positive root.
    pub k_alpha: BTreeMap<Root, Subspace>,
}

/// Parabolic subalgebra `𝔤₀ ⊕ (root spaces of Σ_Φ) ⊕ (positive roots outside Σ_Φ)`
/// attached to a set of simple root indices.
pub fn parabolic_subalgebra(model: &LieAlgebraModel, phi: &[usize]) -> Subspace {
    let mut parts = vec![model.datum.g0.clone()];
    for (i, r) in model.datum.roots.iter().enumerate() {
        if in_span(r, phi) || is_positive(r) {
            parts.push(model.datum.root_spaces[i].clone());
        }
    }
    Subspace::sum_all(model.dim, &parts)
}

fn in_span(r: &[i64], phi: &[usize]) -> bool {
    r.iter().enumerate().all(|(i, &c)| c == 0 || phi.contains(&i))
}

pub fn parabolic_decomposition(model: Arc<LieAlgebraModel>, j: usize) -> Result<ParabolicDecomposition> {
    let rank = model.root_system.rank;
    if j < 1 || j > rank {
        return Err(Error::InvalidArgument(format!("j must lie in 1..={rank}, got {j}")));
    }
    let ji = j - 1;
    let dim = model.dim;
    let d = &model.datum;
    let phi: Vec<usize> = (0..rank).filter(|&i| i != ji).collect();
    let sigma_j: Vec<Root> = d.roots.iter().filter(|r| r[ji] == 0).cloned().collect();
    let sigma_j_positive: Vec<Root> = sigma_j.iter().filter(|r| is_positive(r)).cloned().collect();

    let mut l_parts = vec![d.g0.clone()];
    let mut gradation: BTreeMap<usize, Vec<Subspace>> = BTreeMap::new();
    for (i, r) in d.roots.iter().enumerate() {
        if r[ji] == 0 {
            l_parts.push(d.root_spaces[i].clone());
        } else if r[ji] > 0 {
            gradation.entry(r[ji] as usize).or_default().push(d.root_spaces[i].clone());
        }
    }
    let gradation: BTreeMap<usize, Subspace> =
        gradation.into_iter().map(|(nu, parts)| (nu, Subspace::sum_all(dim, &parts))).collect();
    let lj = Subspace::sum_all(dim, &l_parts);
    let nj = Subspace::sum_all(dim, gradation.values());

    // 𝔞ⱼ = ∩_{α ∈ Φⱼ} ker α inside 𝔞
    let mut constraint = Mat::zeros(phi.len(), rank);
    for (row, &i) in phi.iter().enumerate() {
        for k in 0..rank {
            constraint.set(row, k, model.simple_root_values[i][k].clone());
        }
    }
    let aj_vectors: Vec<Vec<Q>> = constraint
        .kernel()
        .into_iter()
        .map(|c| {
            let mut v = vec![Q::zero(); dim];
            for (ck, h) in c.iter().zip(&model.a_basis) {
                linalg::add_scaled(&mut v, ck, h);
            }
            v
        })
        .collect();
    let aj = Subspace::span(dim, &aj_vectors);
    let a_upper_j = model.a.orth_complement(&aj, &model.inner);
    let mj = lj.orth_complement(&aj, &model.inner);
    let gj = model.bracket_spaces(&mj, &mj);
    let zj = mj.orth_complement(&gj, &model.inner);
    let kj = lj.intersect(&model.k);
    let bj = mj.intersect(&model.p);
    let qj = lj.sum(&nj);
    let mut k_alpha = BTreeMap::new();
    for r in model.root_system.positive_roots.iter() {
        let pair = d.space(r).sum(d.space(&neg(r)));
        k_alpha.insert(r.clone(), pair.intersect(&model.k));
    }
    let pd = ParabolicDecomposition {
        h_upper_j: d.dual_vectors[ji].clone(),
        model,
        j,
        phi,
        sigma_j,
        sigma_j_positive,
        lj,
        nj,
        aj,
        a_upper_j,
        mj,
        gj,
        zj,
        kj,
        bj,
        qj,
        gradation,
        k_alpha,
    };
    pd.verify()?;
    Ok(pd)
}

/// A failed instance of `[H, X] = ν αⱼ(H) X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradationDefect {
    pub nu: usize,
    pub h_index: usize,
    pub x_index: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecompositionSummary {
    pub preset: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub j: usize,
    pub dim_g: usize,
    pub dim_l: usize,
    pub dim_n: usize,
    pub dim_a_j: usize,
    pub dim_a_upper_j: usize,
    pub dim_m: usize,
    pub dim_g_j: usize,
    pub dim_z: usize,
    pub dim_k_j: usize,
    pub dim_b: usize,
    pub dim_q: usize,
    pub gradation: BTreeMap<usize, usize>,
    pub sigma_j_positive: Vec<String>,
}

impl ParabolicDecomposition {
    fn ji(&self) -> usize {
        self.j - 1
    }

    pub fn top_level(&self) -> usize {
        self.gradation.keys().copied().max().unwrap_or(0)
    }

    /// `𝔫ⱼᵛ`, zero beyond the top level.
    pub fn level(&self, nu: usize) -> Subspace {
        self.gradation.get(&nu).cloned().unwrap_or_else(|| Subspace::zero(self.model.dim))
    }

    /// `𝔫¹ⱼ`
    pub fn n1(&self) -> Subspace {
        self.level(1)
    }

    /// `𝔫 = ⊕_{α > 0} 𝔤_α`
    pub fn n_full(&self) -> Subspace {
        let d = &self.model.datum;
        let parts: Vec<Subspace> = self.model.root_system.positive_roots.iter().map(|r| d.space(r).clone()).collect();
        Subspace::sum_all(self.model.dim, &parts)
    }

    /// `𝔮_{j,l} = 𝔤ⱼ ∩ 𝔮_{Λ∖{αⱼ,αₗ}}`.
    pub fn q_jl(&self, l: usize) -> Result<Subspace> {
        let rank = self.model.root_system.rank;
        if l < 1 || l > rank || l == self.j {
            return Err(Error::InvalidArgument(format!("l must differ from j and lie in 1..={rank}")));
        }
        let phi: Vec<usize> = (0..rank).filter(|&i| i != self.ji() && i != l - 1).collect();
        Ok(self.gj.intersect(&parabolic_subalgebra(&self.model, &phi)))
    }

    /// `Σⱼ` Weyl group acting on `all_roots` indices; identity first.
    pub fn weyl_group(&self) -> Vec<Vec<usize>> {
        self.model.root_system.weyl_group(&self.phi)
    }

    /// Verifies `[H,X] = ν αⱼ(H) X` on bases of `𝔞ⱼ` and every `𝔫ⱼᵛ`.
    pub fn gradation_check(&self) -> std::result::Result<Vec<(usize, usize)>, GradationDefect> {
        let model = &self.model;
        let alpha_j = &model.root_system.simple_roots[self.ji()];
        let mut out = Vec::new();
        for (&nu, space) in &self.gradation {
            for (hi, h) in self.aj.basis().iter().enumerate() {
                let scale = q(nu as i64) * model.root_value(alpha_j, h).expect("simple root");
                for (xi, x) in space.basis().iter().enumerate() {
                    if model.bracket(h, x) != linalg::scaled(&scale, x) {
                        return Err(GradationDefect { nu, h_index: hi, x_index: xi });
                    }
                }
            }
            out.push((nu, space.dim()));
        }
        Ok(out)
    }

    /// `(𝔤ⱼ ∩ 𝔨ⱼ, 𝔟ⱼ, dim 𝔟ⱼ)`
    pub fn boundary_component_data(&self) -> (Subspace, Subspace, usize) {
        (self.gj.intersect(&self.kj), self.bj.clone(), self.bj.dim())
    }

    /// Checks every structural identity of the decomposition.
    pub fn verify(&self) -> Result<()> {
        let m = &self.model;
        let dim = m.dim;
        let fail = |what: &str| Err(Error::Invariant(format!("{} j={}: {what}", m.preset, self.j)));
        if self.lj.dim() + self.nj.dim() != self.qj.dim() {
            return fail("q is not l + n");
        }
        if self.mj.dim() + self.aj.dim() + self.nj.dim() != self.qj.dim()
            || Subspace::sum_all(dim, [&self.mj, &self.aj, &self.nj]) != self.qj
        {
            return fail("q is not m + a_j + n");
        }
        if !self.nj.contains(&m.bracket_spaces(&self.lj, &self.nj)) {
            return fail("[l, n] not in n");
        }
        if !self.nj.contains(&m.bracket_spaces(&self.kj, &self.nj)) {
            return fail("[k_j, n] not in n");
        }
        if self.aj.dim() != 1 || self.aj.dim() + self.a_upper_j.dim() != m.a.dim() {
            return fail("a does not split as a_j + a^j with dim a_j = 1");
        }
        if !m.datum.k0.contains(&self.zj) || !m.bracket_spaces(&self.zj, &self.gj).is_zero() {
            return fail("z_j not a central part of m_j inside k0");
        }
        let (gk, b, _) = self.boundary_component_data();
        if gk.dim() + b.dim() != self.gj.dim() || !self.gj.contains(&b) {
            return fail("g_j is not (g_j ∩ k_j) + b_j");
        }
        if m.theta_space(&self.kj) != self.kj {
            return fail("k_j not θ-stable");
        }
        let mut kparts = vec![m.datum.k0.clone()];
        for r in &self.sigma_j_positive {
            let ka = &self.k_alpha[r];
            if ka.dim() != m.datum.multiplicity(r) {
                return fail("dim k_α differs from the multiplicity");
            }
            kparts.push(ka.clone());
        }
        if Subspace::sum_all(dim, &kparts) != self.kj {
            return fail("k_j is not k0 + sum of k_α");
        }
        let top = self.top_level();
        for (&mu, x) in &self.gradation {
            for (&nu, y) in &self.gradation {
                if !self.level(mu + nu).contains(&m.bracket_spaces(x, y)) {
                    return fail("gradation not compatible with the bracket");
                }
            }
        }
        // nilpotency: lower central series vanishes by depth top + 1
        let mut term = self.nj.clone();
        for _ in 0..top {
            term = m.bracket_spaces(&self.nj, &term);
        }
        if !term.is_zero() {
            return fail("n_j not nilpotent");
        }
        if !self.bj.contains(&self.a_upper_j) {
            return fail("a^j not in b_j");
        }
        let centralizer = crate::nilcons::centralizer(m, &self.bj, &self.a_upper_j);
        if centralizer != self.a_upper_j {
            return fail("a^j not maximal abelian in b_j");
        }
        if self.gradation_check().is_err() {
            return fail("gradation eigenvalue identity");
        }
        Ok(())
    }

    pub fn summary(&self) -> DecompositionSummary {
        DecompositionSummary {
            preset: self.model.preset.tag().to_string(),
            n: self.model.preset.n(),
            j: self.j,
            dim_g: self.model.dim,
            dim_l: self.lj.dim(),
            dim_n: self.nj.dim(),
            dim_a_j: self.aj.dim(),
            dim_a_upper_j: self.a_upper_j.dim(),
            dim_m: self.mj.dim(),
            dim_g_j: self.gj.dim(),
            dim_z: self.zj.dim(),
            dim_k_j: self.kj.dim(),
            dim_b: self.bj.dim(),
            dim_q: self.qj.dim(),
            gradation: self.gradation.iter().map(|(k, v)| (*k, v.dim())).collect(),
            sigma_j_positive: self.sigma_j_positive.iter().map(|r| root_label(r)).collect(),
        }
    }

    /// A generator of `𝔨_α` for a root of multiplicity one.
    pub fn k_alpha_generator(&self, alpha: &[i64]) -> Option<Vec<Q>> {
        let s = self.k_alpha.get(alpha)?;
        (s.dim() == 1).then(|| s.basis()[0].clone())
    }

    /// Distinguished basis `eᵢ⊗f_s` of `𝔫¹₂ ≅ ℝ²⊗ℝⁿ` for the Grassmannian
    /// family: `e₁⊗f_s` spans the part of `𝔤_{α₂}` supported on the spacelike
    /// direction `s`, and `e₂⊗f_s = [T, e₁⊗f_s]` with `T` spanning `𝔨_{α₁}`.
    /// Returns `[e₁⊗f₁, …, e₁⊗fₙ, e₂⊗f₁, …, e₂⊗fₙ]`.
    pub fn tensor_basis(&self) -> Result<Vec<Vec<Q>>> {
        let n = match self.model.preset.n() {
            Some(n) if self.j == 2 => n,
            _ => return Err(Error::InvalidArgument("tensor basis exists only for so-2-np2 with j = 2".into())),
        };
        let m = &self.model;
        let t = self.k_alpha_generator(&[1, 0]).ok_or_else(|| Error::Invariant("k_α1 is not a line".into()))?;
        let g_a2 = m.datum.space(&[0, 1]);
        let mut e1 = Vec::with_capacity(n);
        for s in 4..n + 4 {
            let support: Vec<Vec<Q>> = (0..m.dim)
                .filter(|&i| label_mentions(&m.labels[i], s))
                .map(|i| m.basis_vector(i))
                .collect();
            let piece = g_a2.intersect(&Subspace::span(m.dim, &support));
            if piece.dim() != 1 {
                return Err(Error::Invariant("g_α2 does not split along spacelike directions".into()));
            }
            e1.push(piece.basis()[0].clone());
        }
        let e2: Vec<Vec<Q>> = e1.iter().map(|x| m.bracket(&t, x)).collect();
        Ok(e1.into_iter().chain(e2).collect())
    }

    /// `ξ`: the `𝔨₁`-invariant line of `𝔫₁` in the Grassmannian family.
    pub fn xi(&self) -> Result<Vec<Q>> {
        if self.model.preset.n().is_none() || self.j != 1 {
            return Err(Error::InvalidArgument("ξ exists only for so-2-np2 with j = 1".into()));
        }
        let c = crate::nilcons::centralizer(&self.model, &self.nj, &self.kj);
        if c.dim() != 1 {
            return Err(Error::Invariant(format!("k_1-invariants of n_1 have dimension {}", c.dim())));
        }
        Ok(c.basis()[0].clone())
    }
}

fn label_mentions(label: &str, s: usize) -> bool {
    let inner = label.trim_start_matches(['K', 'P']).trim_matches(['[', ']']);
    inner.split(',').any(|x| x.parse::<usize>() == Ok(s))
}
