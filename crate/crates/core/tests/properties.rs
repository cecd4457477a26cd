use std::sync::Arc;

use num_traits::Zero;
use proptest::prelude::*;

mod common;
use common::{bareiss_rank, cached, random_subspace};

use nilcons_core::liealg::{LieAlgebraModel, Preset};
use nilcons_core::linalg::{Mat, Subspace};
use nilcons_core::nilcons::{boundary_transitivity, n_jv, normalizer_unchecked, theta_duality_check, Evidence, Verdict};
use nilcons_core::orbits::{self, ActionSpec};
use nilcons_core::parabolic::{parabolic_decomposition, ParabolicDecomposition};
use nilcons_core::scalar::{q, qf, Q};

const PRESETS: [Preset; 5] =
    [Preset::G2cG2, Preset::Sl3cSu3, Preset::So2Np2 { n: 1 }, Preset::So2Np2 { n: 2 }, Preset::So2Np2 { n: 3 }];

fn pd(p: Preset, j: usize) -> ParabolicDecomposition {
    parabolic_decomposition(cached(p), j).unwrap()
}

#[test]
fn n_jv_is_a_subalgebra_for_random_subspaces() {
    for p in PRESETS {
        for j in 1..=2 {
            let pd = pd(p, j);
            let n1 = pd.n1();
            for seed in 0..100 {
                let v = random_subspace(&n1, n1.dim(), seed);
                assert!(pd.model.is_subalgebra(&n_jv(&pd, &v)), "{p} j={j} seed={seed}");
            }
        }
    }
}

#[test]
fn theta_duality_on_regression_subspaces() {
    for p in PRESETS {
        for j in 1..=2 {
            let pd = pd(p, j);
            let m = &pd.model;
            let mut cases = vec![pd.n1()];
            for r in &m.root_system.positive_roots {
                let s = m.datum.space(r);
                if pd.n1().contains(s) {
                    cases.push(s.clone());
                }
            }
            if let (Preset::So2Np2 { n }, 2) = (p, j) {
                let t = pd.tensor_basis().unwrap();
                cases.push(Subspace::span(m.dim, &[t[0].clone(), t[n].clone()]));
            }
            for v in cases {
                assert!(theta_duality_check(&pd, &v), "{p} j={j}");
            }
        }
    }
}

#[test]
fn model_invariants() {
    for p in PRESETS {
        let m = cached(p);
        let total: usize = m.datum.multiplicities.iter().sum::<usize>() + m.datum.g0.dim();
        assert_eq!(total, m.dim);
        if let Some(j) = &m.complex_j {
            for s in &m.datum.root_spaces {
                assert_eq!(&s.image(j), s);
            }
        }
    }
}

/// Exact rotations `Ad(exp tZ)` for basis elements `Z` of `𝔨ⱼ` with integral
/// frequencies, at `cos t = 3/5`.
fn rotations(pd: &ParabolicDecomposition) -> Vec<Mat<Q>> {
    let m = &pd.model;
    pd.kj.basis().iter().filter_map(|z| m.compact_rotation(z, &qf(3, 5), &qf(4, 5)).ok()).collect()
}

#[test]
fn rotations_are_isometric_automorphisms() {
    for p in [Preset::G2cG2, Preset::So2Np2 { n: 2 }] {
        for j in 1..=2 {
            let pd = pd(p, j);
            let m = &pd.model;
            let rots = rotations(&pd);
            assert!(!rots.is_empty(), "{p} j={j}");
            for r in &rots {
                assert_eq!(r.transpose().mul(&m.inner).mul(r), m.inner);
                for a in (0..m.dim).step_by(3) {
                    for b in (1..m.dim).step_by(4) {
                        let lhs = r.mul_vec(&m.bracket(&m.basis_vector(a), &m.basis_vector(b)));
                        let rhs = m.bracket(&r.mul_vec(&m.basis_vector(a)), &r.mul_vec(&m.basis_vector(b)));
                        assert_eq!(lhs, rhs);
                    }
                }
                assert_eq!(pd.kj.image(r), pd.kj);
                assert_eq!(pd.n1().image(r), pd.n1());
            }
        }
    }
}

#[test]
fn rotation_rejects_bad_input() {
    let m = cached(Preset::So2Np2 { n: 1 });
    let z = m.k.basis()[0].clone();
    assert!(m.compact_rotation(&z, &qf(1, 2), &qf(1, 2)).is_err());
    assert!(m.compact_rotation(&m.a_basis[0], &qf(3, 5), &qf(4, 5)).is_err());
    let id = m.compact_rotation(&z, &q(1), &q(0)).unwrap();
    assert_eq!(id, Mat::identity(m.dim));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normalizers_are_conjugation_equivariant(pi in 0usize..4, j in 1usize..=2, seed in any::<u64>()) {
        let p = [Preset::G2cG2, Preset::Sl3cSu3, Preset::So2Np2 { n: 1 }, Preset::So2Np2 { n: 2 }][pi];
        let pd = pd(p, j);
        let m = &pd.model;
        let v = random_subspace(&pd.n1(), 3, seed);
        for r in rotations(&pd) {
            let rv = v.image(&r);
            for ambient in [&pd.mj, &pd.kj] {
                let lhs = normalizer_unchecked(m, ambient, &rv);
                let rhs = normalizer_unchecked(m, ambient, &v).image(&r);
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn dimension_deficits_are_sound(pi in 0usize..4, j in 1usize..=2, seed in any::<u64>()) {
        let p = [Preset::G2cG2, Preset::Sl3cSu3, Preset::So2Np2 { n: 2 }, Preset::So2Np2 { n: 3 }][pi];
        let pd = pd(p, j);
        let m = &pd.model;
        let v = random_subspace(&pd.n1(), 4, seed);
        prop_assume!(v.dim() >= 2);
        let verdict = boundary_transitivity(&pd, &v);
        if let Evidence::DimensionDeficit { projected_dim, required_dim } = verdict.evidence {
            prop_assert_eq!(verdict.value, Verdict::NotTransitive);
            let s = normalizer_unchecked(m, &pd.mj, &n_jv(&pd, &v));
            let gram: Vec<Vec<Q>> = s
                .basis()
                .iter()
                .map(|x| pd.bj.basis().iter().map(|b| m.inner_product(x, b)).collect())
                .collect();
            let r = if gram.is_empty() { 0 } else { bareiss_rank(&gram) };
            prop_assert_eq!(r, projected_dim);
            prop_assert!(r < required_dim);
            prop_assert_eq!(required_dim, pd.bj.dim());
        }
    }
}

fn catalogue_specs() -> Vec<(Arc<LieAlgebraModel>, ActionSpec, bool)> {
    let mut out = Vec::new();
    for p in [Preset::G2cG2, Preset::Sl3cSu3] {
        let pd1 = pd(p, 1);
        let m = pd1.model.clone();
        out.push((m.clone(), orbits::canonical_extension(&pd1, &orbits::boundary_isotropy(&pd1), "0").unwrap(), false));
        let geo = orbits::boundary_geodesic_algebra(&pd1).unwrap();
        out.push((m.clone(), orbits::canonical_extension(&pd1, &geo, "1").unwrap(), false));
        out.push((m.clone(), orbits::foliation_algebra_a(&m, &m.a_basis[1]).unwrap(), true));
        let ell = m.datum.space(&[0, 1]).basis()[1].clone();
        out.push((m.clone(), orbits::foliation_algebra_n(&m, 2, &ell).unwrap(), true));
    }
    let p1 = pd(Preset::So2Np2 { n: 2 }, 1);
    for k in 0..2 {
        let w = orbits::standard_w(&p1, k).unwrap();
        out.push((p1.model.clone(), orbits::grassmannian_extension_family(&p1, k, &w).unwrap(), false));
    }
    let p2 = pd(Preset::So2Np2 { n: 2 }, 2);
    out.push((p2.model.clone(), orbits::canonical_extension(&p2, &p2.k_alpha[&vec![1, 0]], "2").unwrap(), false));
    out
}

#[test]
fn foliations_are_regular_and_extensions_singular_at_the_base_point() {
    for (m, spec, foliation) in catalogue_specs() {
        assert!(m.is_subalgebra(&spec.h));
        let probes = orbits::default_probes(&m, 16, 0);
        let dims: Vec<usize> = probes.iter().map(|x| orbits::orbit_dimension_at(&m, &spec.h, x).unwrap()).collect();
        if foliation {
            assert_eq!(spec.base_orbit_dim, m.p.dim() - 1);
            assert!(dims.iter().all(|&d| d == m.p.dim() - 1), "{:?}", spec.tag);
        } else {
            assert!(dims.iter().all(|&d| d >= spec.base_orbit_dim), "{:?}", spec.tag);
            assert!(spec.base_orbit_dim < m.p.dim() - 1);
        }
    }
}

/// `log U = Σ (−1)^{k+1} (U − 1)^k / k` for unipotent `U`.
fn log_unipotent(u: &Mat<Q>) -> Mat<Q> {
    let n = u.nrows();
    let nil = u.sub(&Mat::identity(n));
    let mut power = nil.clone();
    let mut out = Mat::zeros(n, n);
    for k in 1..=n {
        if power.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { q(1) } else { q(-1) };
        out = out.add(&power.scale(&(sign / q(k as i64))));
        power = power.mul(&nil);
    }
    out
}

/// The `X ∈ s` with `ad X = target`, if any.
fn ad_preimage(m: &LieAlgebraModel, s: &Subspace, target: &Mat<Q>) -> Option<Vec<Q>> {
    let cols: Vec<Vec<Q>> = s.basis().iter().map(|b| m.ad(b).to_rows().concat()).collect();
    let sys = Mat::from_cols(&cols, m.dim * m.dim);
    sys.solve(&target.to_rows().concat()).map(|c| s.combine(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn orbit_dimension_is_ad_equivariant(which in 0usize..9, sy in any::<u64>(), sx in any::<u64>()) {
        let specs = catalogue_specs();
        let (m, spec, _) = &specs[which % specs.len()];
        let y = probe_at(m, sy);
        let x = probe_at(m, sx);
        let ey = orbits::exp_ad(m, &y).unwrap();
        let ex = orbits::exp_ad(m, &x).unwrap();
        let n_all = Subspace::sum_all(m.dim, m.root_system.positive_roots.iter().map(|r| m.datum.space(r)));
        let x2 = ad_preimage(m, &n_all, &log_unipotent(&ey.mul(&ex))).expect("BCH element in n");
        let moved = spec.h.image(&ey);
        prop_assert_eq!(
            orbits::orbit_dimension_at(m, &moved, &x2).unwrap(),
            orbits::orbit_dimension_at(m, &spec.h, &x).unwrap()
        );
    }
}

fn probe_at(m: &LieAlgebraModel, seed: u64) -> Vec<Q> {
    let p = orbits::default_probes(m, 1, seed);
    let x = p[0].clone();
    assert!(!x.iter().all(|c| c.is_zero()));
    x
}
