//! Lie algebras of the cohomogeneity one actions and exact orbit dimensions
//! at points `exp(X)·o` with `X` nilpotent.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::LieAlgebraModel;
use crate::linalg::{self, Mat, Subspace};
use crate::nilcons::{n_jv, normalizer_unchecked};
use crate::parabolic::ParabolicDecomposition;
use crate::rootsys::root_label;
use crate::scalar::{q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ConstructionTag {
    FoliationA,
    FoliationN { j: usize },
    CanonicalExtension { j: usize, label: String },
    NilpotentConstruction { j: usize, dim_v: usize },
}

#[derive(Clone, Debug)]
pub struct ActionSpec {
    pub h: Subspace,
    pub tag: ConstructionTag,
    pub base_orbit_dim: usize,
    pub sampled_orbit_dims: Vec<(String, usize)>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ActionRecord {
    pub tag: ConstructionTag,
    pub dim_h: usize,
    pub base_orbit_dim: usize,
    pub sampled_orbit_dims: Vec<(String, usize)>,
}

impl ActionSpec {
    fn new(model: &LieAlgebraModel, h: Subspace, tag: ConstructionTag) -> Result<ActionSpec> {
        if !model.is_subalgebra(&h) {
            return Err(Error::NotSubalgebra(format!("{tag:?}")));
        }
        let base_orbit_dim = model.project_p(&h).dim();
        Ok(ActionSpec { h, tag, base_orbit_dim, sampled_orbit_dims: Vec::new() })
    }

    pub fn record(&self) -> ActionRecord {
        ActionRecord {
            tag: self.tag.clone(),
            dim_h: self.h.dim(),
            base_orbit_dim: self.base_orbit_dim,
            sampled_orbit_dims: self.sampled_orbit_dims.clone(),
        }
    }

    /// Runs [`cohomogeneity_estimate`] and stores the probe table.
    pub fn probe(&mut self, model: &LieAlgebraModel, probes: &[Vec<Q>]) -> Result<CohomogeneityEstimate> {
        let est = cohomogeneity_estimate(model, &self.h, probes)?;
        self.sampled_orbit_dims = est.probe_dims.iter().enumerate().map(|(i, d)| (format!("probe {i}"), *d)).collect();
        Ok(est)
    }
}

fn positive_nilradical(model: &LieAlgebraModel) -> Subspace {
    let d = &model.datum;
    let parts: Vec<Subspace> = model.root_system.positive_roots.iter().map(|r| d.space(r).clone()).collect();
    Subspace::sum_all(model.dim, &parts)
}

/// `𝔥_ℓ = (𝔞 ⊖ ℓ) ⊕ 𝔫`
pub fn foliation_algebra_a(model: &LieAlgebraModel, ell: &[Q]) -> Result<ActionSpec> {
    if linalg::is_zero_vec(ell) || !model.a.contains_vector(ell) {
        return Err(Error::InvalidArgument("ℓ must be a line in a".into()));
    }
    let line = Subspace::span(model.dim, &[ell.to_vec()]);
    let h = model.a.orth_complement(&line, &model.inner).sum(&positive_nilradical(model));
    ActionSpec::new(model, h, ConstructionTag::FoliationA)
}

/// `𝔥ⱼ = 𝔞 ⊕ (𝔫 ⊖ ℓⱼ)`
pub fn foliation_algebra_n(model: &LieAlgebraModel, j: usize, ell: &[Q]) -> Result<ActionSpec> {
    let rank = model.root_system.rank;
    if j < 1 || j > rank {
        return Err(Error::InvalidArgument(format!("j must lie in 1..={rank}")));
    }
    let simple = &model.root_system.simple_roots[j - 1];
    if linalg::is_zero_vec(ell) || !model.datum.space(simple).contains_vector(ell) {
        return Err(Error::InvalidArgument(format!("ℓ must be a line in g_{}", root_label(simple))));
    }
    let line = Subspace::span(model.dim, &[ell.to_vec()]);
    let h = model.a.sum(&positive_nilradical(model).orth_complement(&line, &model.inner));
    ActionSpec::new(model, h, ConstructionTag::FoliationN { j })
}

/// `𝔥 = hPhi ⊕ 𝔞ⱼ ⊕ 𝔫ⱼ` for a subalgebra `hPhi ⊆ 𝔪ⱼ`.
pub fn canonical_extension(pd: &ParabolicDecomposition, h_phi: &Subspace, label: &str) -> Result<ActionSpec> {
    let m = &pd.model;
    if !pd.mj.contains(h_phi) || !m.is_subalgebra(h_phi) {
        return Err(Error::NotSubalgebra("hPhi must be a subalgebra of m_j".into()));
    }
    let h = Subspace::sum_all(m.dim, [h_phi, &pd.aj, &pd.nj]);
    ActionSpec::new(m, h, ConstructionTag::CanonicalExtension { j: pd.j, label: label.to_string() })
}

/// `𝔥_{j,𝔳} = N_{𝔩ⱼ}(𝔫_{j,𝔳}) ⊕ 𝔫_{j,𝔳}`
pub fn nilpotent_construction_action(pd: &ParabolicDecomposition, v: &Subspace) -> Result<ActionSpec> {
    let m = &pd.model;
    if !pd.n1().contains(v) {
        return Err(Error::InvalidArgument("v is not inside the first gradation level".into()));
    }
    let njv = n_jv(pd, v);
    let h = normalizer_unchecked(m, &pd.lj, &njv).sum(&njv);
    ActionSpec::new(m, h, ConstructionTag::NilpotentConstruction { j: pd.j, dim_v: v.dim() })
}

/// The simple root `αₗ` spanning `Σⱼ⁺` in rank two.
fn other_simple(pd: &ParabolicDecomposition) -> Result<Vec<i64>> {
    match pd.sigma_j_positive.as_slice() {
        [r] => Ok(r.clone()),
        _ => Err(Error::InvalidArgument("boundary component is not of rank one".into())),
    }
}

/// `hPhi = 𝔤ⱼ ∩ 𝔨ⱼ`; the isotropy algebra of `Bⱼ` (point singular orbit).
pub fn boundary_isotropy(pd: &ParabolicDecomposition) -> Subspace {
    pd.gj.intersect(&pd.kj)
}

/// `hPhi = ℝ iH_{αₗ} ⊕ 𝔞ʲ` (geodesic singular orbit in `Bⱼ ≅ ℝH³`).
pub fn boundary_geodesic_algebra(pd: &ParabolicDecomposition) -> Result<Subspace> {
    let m = &pd.model;
    let j = m.complex_j.as_ref().ok_or_else(|| Error::InvalidArgument("model has no complex structure".into()))?;
    let l = other_simple(pd)?;
    let ih = j.mul_vec(m.datum.root_vector(&l));
    Ok(Subspace::span(m.dim, &[ih]).sum(&pd.a_upper_j))
}

/// `𝔴 = ℝH_{α₂} ⊕ (first k−1 basis vectors of 𝔤_{α₂})`, or `0` for `k = 0`.
pub fn standard_w(pd: &ParabolicDecomposition, k: usize) -> Result<Subspace> {
    let m = &pd.model;
    let g = m.datum.space(&[0, 1]);
    if k > g.dim() {
        return Err(Error::InvalidArgument(format!("k must be at most {}", g.dim())));
    }
    if k == 0 {
        return Ok(Subspace::zero(m.dim));
    }
    let mut vs = vec![m.datum.root_vector(&[0, 1]).to_vec()];
    vs.extend(g.basis()[..k - 1].iter().cloned());
    Ok(Subspace::span(m.dim, &vs))
}

/// `𝔥^Λ_{1,k} = N_{𝔨₁}(𝔴) ⊕ (𝔞 ⊖ ℝH_{α₂}) ⊕ (𝔫 ⊖ 𝔤_{α₂}) ⊕ 𝔴`.
pub fn grassmannian_extension_family(pd: &ParabolicDecomposition, k: usize, w: &Subspace) -> Result<ActionSpec> {
    let m = &pd.model;
    let n = m.preset.n().ok_or_else(|| Error::InvalidArgument("Grassmannian family needs so-2-np2".into()))?;
    if pd.j != 1 {
        return Err(Error::InvalidArgument("Grassmannian family lives over j = 1".into()));
    }
    if k >= n + 1 || w.dim() != k {
        return Err(Error::InvalidArgument(format!("w must have dimension k = {k} < n + 1")));
    }
    let h_a2 = m.datum.root_vector(&[0, 1]).to_vec();
    let allowed = Subspace::span(m.dim, &[h_a2.clone()]).sum(m.datum.space(&[0, 1]));
    if !allowed.contains(w) || (k >= 1 && !w.contains_vector(&h_a2)) {
        return Err(Error::InvalidArgument("w must lie in R H_a2 + g_a2 and contain H_a2".into()));
    }
    let nk = normalizer_unchecked(m, &pd.kj, w);
    let line = Subspace::span(m.dim, &[h_a2]);
    let a_part = m.a.orth_complement(&line, &m.inner);
    let n_part = positive_nilradical(m).orth_complement(m.datum.space(&[0, 1]), &m.inner);
    let h = Subspace::sum_all(m.dim, [&nk, &a_part, &n_part, w]);
    ActionSpec::new(m, h, ConstructionTag::CanonicalExtension { j: 1, label: format!("H^Λ_{{1,{k}}}") })
}

/// `e^{ad X}` for nilpotent `ad X`.
pub fn exp_ad(model: &LieAlgebraModel, x: &[Q]) -> Result<Mat<Q>> {
    let ad = model.ad(x);
    let mut out = Mat::identity(model.dim);
    let mut term = Mat::identity(model.dim);
    for k in 1..=model.dim {
        term = term.mul(&ad).scale(&(Q::from_integer(1.into()) / q(k as i64)));
        if term.is_zero() {
            return Ok(out);
        }
        out = out.add(&term);
    }
    Err(Error::InvalidArgument("ad X is not nilpotent".into()))
}

/// `dim π_𝔭(e^{−ad X} 𝔥)`: the orbit dimension of `H` through `exp(X)·o`.
pub fn orbit_dimension_at(model: &LieAlgebraModel, h: &Subspace, x: &[Q]) -> Result<usize> {
    let neg: Vec<Q> = x.iter().map(|c| -c.clone()).collect();
    let e = exp_ad(model, &neg)?;
    Ok(model.project_p(&h.image(&e)).dim())
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CohomogeneityEstimate {
    /// `dim M − max orbit dimension`; an upper bound for the cohomogeneity.
    pub value: usize,
    pub base_orbit_dim: usize,
    pub max_orbit_dim: usize,
    /// Index of the first probe reaching the maximum, `None` for the base point.
    pub witness: Option<usize>,
    pub probe_dims: Vec<usize>,
}

pub fn cohomogeneity_estimate(model: &LieAlgebraModel, h: &Subspace, probes: &[Vec<Q>]) -> Result<CohomogeneityEstimate> {
    let base = model.project_p(h).dim();
    let dims: Vec<usize> =
        probes.par_iter().map(|x| orbit_dimension_at(model, h, x)).collect::<Result<Vec<_>>>()?;
    let mut max = base;
    let mut witness = None;
    for (i, &d) in dims.iter().enumerate() {
        if d > max {
            max = d;
            witness = Some(i);
        }
    }
    Ok(CohomogeneityEstimate {
        value: model.p.dim() - max,
        base_orbit_dim: base,
        max_orbit_dim: max,
        witness,
        probe_dims: dims,
    })
}

/// Seeded random elements of `𝔫` with small integer coordinates.
pub fn default_probes(model: &LieAlgebraModel, count: usize, seed: u64) -> Vec<Vec<Q>> {
    let n = positive_nilradical(model);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let coeffs: Vec<Q> = (0..n.dim()).map(|_| q(rng.gen_range(-3..=3))).collect();
        if coeffs.iter().all(|c| c.is_zero()) {
            continue;
        }
        out.push(n.combine(&coeffs));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{build_model, Preset};
    use crate::parabolic::parabolic_decomposition;
    use std::sync::Arc;

    #[test]
    fn foliations_have_codimension_one() {
        let m = build_model(Preset::Sl3cSu3).unwrap();
        let h = foliation_algebra_a(&m, &m.a_basis[0]).unwrap();
        assert_eq!(h.base_orbit_dim, 7);
        let ell = m.datum.space(&[1, 0]).basis()[0].clone();
        assert_eq!(foliation_algebra_n(&m, 1, &ell).unwrap().base_orbit_dim, 7);
        assert!(foliation_algebra_a(&m, &ell).is_err());
    }

    #[test]
    fn g2_canonical_extensions() {
        let m = Arc::new(build_model(Preset::G2cG2).unwrap());
        for j in 1..=2 {
            let pd = parabolic_decomposition(m.clone(), j).unwrap();
            let h0 = canonical_extension(&pd, &boundary_isotropy(&pd), "H^Λ_{j,0}").unwrap();
            assert_eq!(h0.base_orbit_dim, 11);
            let h1 = canonical_extension(&pd, &boundary_geodesic_algebra(&pd).unwrap(), "H^Λ_{j,1}").unwrap();
            assert_eq!(h1.base_orbit_dim, 12);
        }
    }

    #[test]
    fn exp_rejects_non_nilpotent() {
        let m = build_model(Preset::So2Np2 { n: 1 }).unwrap();
        assert!(exp_ad(&m, &m.a_basis[0]).is_err());
        assert_eq!(orbit_dimension_at(&m, &m.a, &vec![Q::zero(); m.dim]).unwrap(), 2);
    }
}
