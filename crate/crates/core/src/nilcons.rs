//! The nilpotent construction: normalizers, transitivity verdicts, Kähler
//! angles and the `𝒱ₗ` membership test.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::{LieAlgebraModel, Preset};
use crate::linalg::{Mat, Subspace};
use crate::parabolic::ParabolicDecomposition;
use crate::rootsys::{neg, root_label};
use crate::scalar::{qf, rational_sqrt, square_free_decomposition, RealQuadratic, Scalar, Q};

/// `{X ∈ s : [X, v] ⊆ v}`. Fails if `s` is not closed under the bracket.
pub fn normalizer<F: Scalar>(model: &LieAlgebraModel, s: &Subspace<F>, v: &Subspace<F>) -> Result<Subspace<F>> {
    if !model.is_subalgebra(s) {
        return Err(Error::NotSubalgebra("normalizer ambient".into()));
    }
    Ok(normalizer_unchecked(model, s, v))
}

/// [`normalizer`] without the subalgebra check on `s`.
pub fn normalizer_unchecked<F: Scalar>(model: &LieAlgebraModel, s: &Subspace<F>, v: &Subspace<F>) -> Subspace<F> {
    let dim = model.dim;
    if s.is_zero() {
        return Subspace::zero(dim);
    }
    // functionals vanishing on v
    let annihilator = Mat::from_rows(v.basis(), dim).kernel();
    if annihilator.is_empty() || v.is_zero() {
        return s.clone();
    }
    let images: Vec<Vec<Vec<F>>> =
        s.basis().iter().map(|x| v.basis().iter().map(|y| model.bracket(x, y)).collect()).collect();
    let rows = v.dim() * annihilator.len();
    let mut m = Mat::zeros(rows, s.dim());
    for (a, per_x) in images.iter().enumerate() {
        for (i, img) in per_x.iter().enumerate() {
            for (r, f) in annihilator.iter().enumerate() {
                m.set(i * annihilator.len() + r, a, crate::linalg::dot(f, img));
            }
        }
    }
    let vectors: Vec<Vec<F>> = m.kernel().into_iter().map(|c| s.combine(&c)).collect();
    Subspace::span(dim, &vectors)
}

/// `{X ∈ s : [X, v] = 0}`.
pub fn centralizer<F: Scalar>(model: &LieAlgebraModel, s: &Subspace<F>, v: &Subspace<F>) -> Subspace<F> {
    let dim = model.dim;
    if v.is_zero() {
        return s.clone();
    }
    let mut m = Mat::zeros(v.dim() * dim, s.dim());
    for (a, x) in s.basis().iter().enumerate() {
        for (i, y) in v.basis().iter().enumerate() {
            for (c, val) in model.bracket(x, y).into_iter().enumerate() {
                m.set(i * dim + c, a, val);
            }
        }
    }
    let vectors: Vec<Vec<F>> = m.kernel().into_iter().map(|c| s.combine(&c)).collect();
    Subspace::span(dim, &vectors)
}

/// `𝔫_{j,𝔳} = 𝔫ⱼ ⊖ 𝔳`.
pub fn n_jv<F: Scalar>(pd: &ParabolicDecomposition, v: &Subspace<F>) -> Subspace<F> {
    pd.nj.lift::<F>().orth_complement(v, &pd.model.inner.lift())
}

fn check_inside_n1<F: Scalar>(pd: &ParabolicDecomposition, v: &Subspace<F>) -> Result<()> {
    if v.ambient() != pd.model.dim {
        return Err(Error::DimensionMismatch { expected: pd.model.dim, got: v.ambient() });
    }
    if !pd.n1().lift::<F>().contains(v) {
        return Err(Error::InvalidArgument("v is not contained in the first gradation level".into()));
    }
    Ok(())
}

/// `N_{𝔩ⱼ}(𝔫_{j,𝔳}) = θ N_{𝔩ⱼ}(𝔳)`.
pub fn theta_duality_check<F: Scalar>(pd: &ParabolicDecomposition, v: &Subspace<F>) -> bool {
    let m = &pd.model;
    let l = pd.lj.lift::<F>();
    let lhs = normalizer_unchecked(m, &l, &n_jv(pd, v));
    let rhs = m.theta_space(&normalizer_unchecked(m, &l, v));
    lhs == rhs
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Verdict {
    Transitive,
    NotTransitive,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Evidence {
    /// `dim π_𝔟(s) < dim 𝔟ⱼ`
    #[serde(rename_all = "camelCase")]
    DimensionDeficit { projected_dim: usize, required_dim: usize },
    /// `s` is θ-stable, hence reductive, and its orbit `exp(s ∩ 𝔭)·o` misses part of `Bⱼ`.
    #[serde(rename_all = "camelCase")]
    ThetaStableObstruction { dim_s: usize, dim_s_cap_p: usize, required_dim: usize },
    /// `s` is θ-stable and `s ∩ 𝔭 ⊇ 𝔟ⱼ`, so its orbit is all of `Bⱼ`.
    #[serde(rename_all = "camelCase")]
    ThetaStableReductive { dim_s: usize },
    /// `s` contains a conjugate of the Iwasawa algebra `𝔞ʲ ⊕ (𝔫 ∩ 𝔤ⱼ)`.
    #[serde(rename_all = "camelCase")]
    IwasawaContainment { roots: Vec<String>, theta_applied: bool },
    #[serde(rename_all = "camelCase")]
    SamplingRecord { probes: usize, samples: usize, seed: u64, min_rank: usize, required_rank: usize, witness: Option<Vec<String>> },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitivityVerdict {
    pub value: Verdict,
    pub evidence: Evidence,
}

impl TransitivityVerdict {
    pub fn is_transitive(&self) -> bool {
        self.value == Verdict::Transitive
    }
}

fn render<F: Scalar>(v: &[F]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Infinitesimal transitivity of `N_{𝔨ⱼ}(𝔳)` on the unit sphere of `𝔳`.
pub fn sphere_transitivity<F: Scalar>(
    pd: &ParabolicDecomposition,
    v: &Subspace<F>,
    samples: usize,
    seed: u64,
) -> Result<TransitivityVerdict> {
    if v.dim() < 2 {
        return Err(Error::InvalidArgument("sphere transitivity needs dim v >= 2".into()));
    }
    let m = &pd.model;
    let nk = normalizer_unchecked(m, &pd.kj.lift::<F>(), v);
    let mut probes: Vec<Vec<F>> = v.basis().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while probes.len() < v.dim() + samples {
        let coeffs: Vec<F> = (0..v.dim())
            .map(|_| F::from_rational(&qf(rng.gen_range(-6..=6), rng.gen_range(1..=5))))
            .collect();
        if coeffs.iter().all(|c| c.is_zero()) {
            continue;
        }
        probes.push(v.combine(&coeffs));
    }
    let required = v.dim() - 1;
    let mut min_rank = usize::MAX;
    let mut witness = None;
    for w in &probes {
        let images: Vec<Vec<F>> = nk.basis().iter().map(|x| m.bracket(x, w)).collect();
        let rank = Subspace::span(m.dim, &images).dim();
        if rank < min_rank {
            min_rank = rank;
        }
        if rank < required && witness.is_none() {
            witness = Some(render(w));
        }
    }
    let evidence = Evidence::SamplingRecord {
        probes: probes.len(),
        samples,
        seed,
        min_rank,
        required_rank: required,
        witness: witness.clone(),
    };
    let value = if witness.is_some() { Verdict::NotTransitive } else { Verdict::Transitive };
    Ok(TransitivityVerdict { value, evidence })
}

/// Transitivity of the connected subgroup of `Mⱼ` with Lie algebra `s` on `Bⱼ`.
pub fn boundary_verdict_for<F: Scalar>(pd: &ParabolicDecomposition, s: &Subspace<F>) -> TransitivityVerdict {
    let m = &pd.model;
    let gram = m.inner.lift::<F>();
    let b = pd.bj.lift::<F>();
    let required = b.dim();
    if m.theta_space(s) == *s {
        let cap = s.intersect(&m.p.lift());
        return if cap.contains(&b) {
            TransitivityVerdict {
                value: Verdict::Transitive,
                evidence: Evidence::ThetaStableReductive { dim_s: s.dim() },
            }
        } else {
            TransitivityVerdict {
                value: Verdict::NotTransitive,
                evidence: Evidence::ThetaStableObstruction { dim_s: s.dim(), dim_s_cap_p: cap.dim(), required_dim: required },
            }
        };
    }
    let projected = b.project_subspace(s, &gram).dim();
    if projected < required {
        return TransitivityVerdict {
            value: Verdict::NotTransitive,
            evidence: Evidence::DimensionDeficit { projected_dim: projected, required_dim: required },
        };
    }
    let d = &m.datum;
    let theta_s = m.theta_space(s);
    for w in pd.weyl_group() {
        let images: Vec<_> = pd
            .sigma_j_positive
            .iter()
            .map(|r| d.roots[w[d.index(r).expect("root")]].clone())
            .collect();
        let mut parts = vec![pd.a_upper_j.clone()];
        parts.extend(images.iter().map(|r| d.space(r).clone()));
        let target = Subspace::sum_all(m.dim, &parts).lift::<F>();
        for (space, theta_applied) in [(s, false), (&theta_s, true)] {
            if space.contains(&target) {
                let roots = images.iter().map(|r| if theta_applied { root_label(&neg(r)) } else { root_label(r) }).collect();
                return TransitivityVerdict {
                    value: Verdict::Transitive,
                    evidence: Evidence::IwasawaContainment { roots, theta_applied },
                };
            }
        }
    }
    TransitivityVerdict {
        value: Verdict::Unknown,
        evidence: Evidence::Inconclusive { reason: "no refutation and no Iwasawa witness".into() },
    }
}

/// Condition (i): `N⁰_{Mⱼ}(𝔫_{j,𝔳})` acts transitively on `Bⱼ`.
pub fn boundary_transitivity<F: Scalar>(pd: &ParabolicDecomposition, v: &Subspace<F>) -> TransitivityVerdict {
    let s = normalizer_unchecked(&pd.model, &pd.mj.lift::<F>(), &n_jv(pd, v));
    boundary_verdict_for(pd, &s)
}

/// `N_{𝔪ⱼ}(𝔳) ⊆ 𝔮_{j,l} ⊕ 𝔷ⱼ`.
pub fn vl_membership<F: Scalar>(pd: &ParabolicDecomposition, l: usize, v: &Subspace<F>) -> Result<bool> {
    let target = pd.q_jl(l)?.sum(&pd.zj).lift::<F>();
    let nm = normalizer_unchecked(&pd.model, &pd.mj.lift::<F>(), v);
    Ok(target.contains(&nm))
}

/// Condition (i) restricted to `𝒱ₗ`: evaluated on `θ N_{𝔮_{j,l} ⊕ 𝔷ⱼ}(𝔳)`.
pub fn vl_restricted_verdict<F: Scalar>(pd: &ParabolicDecomposition, l: usize, v: &Subspace<F>) -> Result<TransitivityVerdict> {
    let ambient = pd.q_jl(l)?.sum(&pd.zj).lift::<F>();
    let s = pd.model.theta_space(&normalizer_unchecked(&pd.model, &ambient, v));
    Ok(boundary_verdict_for(pd, &s))
}

/// `(π₁(τ), π₂(τ), τ = π₁(τ) ⊕ π₂(τ))` for the splitting `𝔪ⱼ = 𝔤ⱼ ⊕ 𝔷ⱼ`.
pub fn splitting_check(pd: &ParabolicDecomposition, tau: &Subspace) -> Result<(Subspace, Subspace, bool)> {
    let m = &pd.model;
    if !pd.mj.contains(tau) {
        return Err(Error::InvalidArgument("tau is not inside m_j".into()));
    }
    if !m.is_subalgebra(tau) {
        return Err(Error::NotSubalgebra("tau".into()));
    }
    let p1 = pd.gj.project_subspace(tau, &m.inner);
    let p2 = pd.zj.project_subspace(tau, &m.inner);
    let direct = tau.contains(&p1) && tau.contains(&p2);
    Ok((p1, p2, direct))
}

/// `cos²φ` of a real 2-plane in a complex module: `ω(v₁,v₂)² / det Gram`, `ω(x,y) = ⟨Jx, y⟩`.
pub fn kahler_angle<F: Scalar>(model: &LieAlgebraModel, v: &Subspace<F>) -> Result<F> {
    let j = model.complex_j.as_ref().ok_or_else(|| Error::InvalidArgument("model has no complex structure".into()))?;
    if v.dim() != 2 {
        return Err(Error::InvalidArgument("Kähler angle needs a 2-plane".into()));
    }
    let (x, y) = (&v.basis()[0], &v.basis()[1]);
    let jx = j.lift::<F>().mul_vec(x);
    let omega = model.inner_product(&jx, y);
    let gram_det = model.inner_product(x, x) * model.inner_product(y, y) - model.inner_product(x, y) * model.inner_product(x, y);
    Ok(omega.clone() * omega / gram_det)
}

/// The 2-plane `span{e₁, J(e₁ + τ e₂)}` of Kähler angle `φ` with `cos²φ = cos2`, where
/// `e₁, e₂` are the real Chevalley vectors of the two root spaces of `𝔫¹ⱼ`. The
/// tangent may be irrational; the plane then lives over `ℚ(√d)`.
pub fn kahler_plane(pd: &ParabolicDecomposition, cos2: &Q) -> Result<Subspace<RealQuadratic>> {
    let m = &pd.model;
    let j = m.complex_j.as_ref().ok_or_else(|| Error::InvalidArgument("model has no complex structure".into()))?;
    if *cos2 < Q::zero() || *cos2 > Q::one() {
        return Err(Error::InvalidArgument("cos² must lie in [0, 1]".into()));
    }
    let d = &m.datum;
    let roots: Vec<_> = d.roots.iter().filter(|r| r[pd.j - 1] == 1 && crate::rootsys::is_positive(r)).collect();
    if roots.len() != 2 {
        return Err(Error::InvalidArgument("first gradation level is not complex two-dimensional".into()));
    }
    let e1 = d.space(roots[0]).basis()[0].clone();
    let e2 = d.space(roots[1]).basis()[0].clone();
    let lift = |v: &[Q]| v.iter().map(RealQuadratic::from_rational).collect::<Vec<_>>();
    let jl = j.lift::<RealQuadratic>();
    let second: Vec<RealQuadratic> = if cos2.is_zero() {
        jl.mul_vec(&lift(&e2))
    } else {
        let n1 = m.inner_product(&e1, &e1);
        let n2 = m.inner_product(&e2, &e2);
        let tau2 = n1 * (Q::one() - cos2) / (cos2 * n2);
        let tau = if let Some(r) = rational_sqrt(&tau2) {
            RealQuadratic::rational(r)
        } else {
            let (r, rad) = square_free_decomposition(&tau2).expect("positive");
            RealQuadratic::new(Q::zero(), r, rad)
        };
        let mixed: Vec<RealQuadratic> =
            lift(&e1).into_iter().zip(lift(&e2)).map(|(a, b)| a + tau.clone() * b).collect();
        jl.mul_vec(&mixed)
    };
    Ok(Subspace::span(m.dim, &[lift(&e1), second]))
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SubspaceRecord {
    pub dim: usize,
    pub basis: Vec<Vec<String>>,
}

impl SubspaceRecord {
    pub fn of<F: Scalar>(s: &Subspace<F>) -> Self {
        SubspaceRecord { dim: s.dim(), basis: s.basis().iter().map(|v| render(v)).collect() }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NilConsReport {
    pub preset: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub j: usize,
    pub v: SubspaceRecord,
    pub n_jv: SubspaceRecord,
    pub normalizer_mj: SubspaceRecord,
    pub normalizer_kj: SubspaceRecord,
    pub theta_duality: bool,
    pub condition_i: TransitivityVerdict,
    pub condition_ii: TransitivityVerdict,
    pub vl_membership: BTreeMap<usize, bool>,
    /// Condition (i) under the assumption `𝔳 ∈ 𝒱ₗ`.
    pub vl_restricted_condition_i: BTreeMap<usize, TransitivityVerdict>,
    pub singular_orbit_dim: usize,
    pub singular_orbit_codim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hint: Option<String>,
    pub samples: usize,
    pub seed: u64,
}

impl NilConsReport {
    /// Transitive only if both conditions are; any refutation dominates `Unknown`.
    pub fn outcome(&self) -> Verdict {
        let vs = [self.condition_i.value, self.condition_ii.value];
        if vs.contains(&Verdict::NotTransitive) {
            Verdict::NotTransitive
        } else if vs.contains(&Verdict::Unknown) {
            Verdict::Unknown
        } else {
            Verdict::Transitive
        }
    }
}

pub fn nilpotent_construction_check<F: Scalar>(
    pd: &ParabolicDecomposition,
    v: &Subspace<F>,
    samples: usize,
    seed: u64,
) -> Result<NilConsReport> {
    check_inside_n1(pd, v)?;
    if v.dim() < 2 {
        return Err(Error::InvalidArgument("v must have dimension at least 2".into()));
    }
    let m = &pd.model;
    let njv = n_jv(pd, v);
    if !m.is_subalgebra(&njv) {
        return Err(Error::Invariant("n_j ⊖ v is not a subalgebra".into()));
    }
    let normalizer_mj = normalizer_unchecked(m, &pd.mj.lift::<F>(), &njv);
    let normalizer_kj = normalizer_unchecked(m, &pd.kj.lift::<F>(), v);
    let condition_i = boundary_verdict_for(pd, &normalizer_mj);
    let condition_ii = sphere_transitivity(pd, v, samples, seed)?;
    let mut vl = BTreeMap::new();
    let mut vl_restricted = BTreeMap::new();
    for l in 1..=m.root_system.rank {
        if l != pd.j {
            vl.insert(l, vl_membership(pd, l, v)?);
            vl_restricted.insert(l, vl_restricted_verdict(pd, l, v)?);
        }
    }
    let h = normalizer_unchecked(m, &pd.lj.lift::<F>(), &njv).sum(&njv);
    let singular = m.project_p(&h).dim();
    let mut report = NilConsReport {
        preset: m.preset.tag().to_string(),
        n: m.preset.n(),
        j: pd.j,
        v: SubspaceRecord::of(v),
        n_jv: SubspaceRecord::of(&njv),
        normalizer_mj: SubspaceRecord::of(&normalizer_mj),
        normalizer_kj: SubspaceRecord::of(&normalizer_kj),
        theta_duality: theta_duality_check(pd, v),
        condition_i,
        condition_ii,
        vl_membership: vl,
        vl_restricted_condition_i: vl_restricted,
        singular_orbit_dim: singular,
        singular_orbit_codim: m.p.dim() - singular,
        hint: None,
        samples,
        seed,
    };
    if report.outcome() == Verdict::Transitive {
        report.hint = hint(pd, v);
    }
    Ok(report)
}

fn hint<F: Scalar>(pd: &ParabolicDecomposition, v: &Subspace<F>) -> Option<String> {
    let m = &pd.model;
    let d = &m.datum;
    if *v == pd.n1().lift() {
        return Some(format!("H_{{{},v}} with v = n^1_{}", pd.j, pd.j));
    }
    match m.preset {
        Preset::G2cG2 if pd.j == 2 => {
            let matches = [[3, 1], [0, 1]].iter().any(|r| *v == d.space(r).lift());
            matches.then(|| "orbit-equivalent to H^Λ_{1,1}".to_string())
        }
        Preset::G2cG2 | Preset::Sl3cSu3 if pd.j == 1 => {
            let j = m.complex_j.as_ref()?.lift::<F>();
            (v.dim() == 2 && v.image(&j) == *v).then(|| "orbit-equivalent to H^Λ_{2,1}".to_string())
        }
        Preset::So2Np2 { .. } if pd.j == 2 => {
            if d.space(&[0, 1]).lift().contains(v) {
                Some(format!("orbit-equivalent to H^Λ_{{1,{}}}", v.dim()))
            } else if v.dim() == 2 {
                Some("orbit-equivalent to SO^0_{2,n+1}".to_string())
            } else {
                None
            }
        }
        _ => None,
    }
}
