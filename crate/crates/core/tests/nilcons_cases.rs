use std::sync::Arc;

use nilcons_core::liealg::{build_model, Preset};
use nilcons_core::linalg::Subspace;
use nilcons_core::nilcons::*;
use nilcons_core::parabolic::{parabolic_decomposition, ParabolicDecomposition};
use nilcons_core::scalar::{q, qf, Q};

fn pd(preset: Preset, j: usize) -> ParabolicDecomposition {
    parabolic_decomposition(Arc::new(build_model(preset).unwrap()), j).unwrap()
}

fn root_space(p: &ParabolicDecomposition, r: &[i64]) -> Subspace {
    p.model.datum.space(r).clone()
}

#[test]
fn g2_first_level_complex_line_passes() {
    let p = pd(Preset::G2cG2, 1);
    let v = root_space(&p, &[1, 0]);
    let r = nilpotent_construction_check(&p, &v, 32, 0).unwrap();
    assert_eq!(r.condition_i.value, Verdict::Transitive, "{:?}", r.condition_i);
    assert_eq!(r.condition_ii.value, Verdict::Transitive);
    assert_eq!(r.hint.as_deref(), Some("orbit-equivalent to H^Λ_{2,1}"));
}

#[test]
fn g2_second_level_highest_line_passes() {
    let p = pd(Preset::G2cG2, 2);
    let v = root_space(&p, &[3, 1]);
    let r = nilpotent_construction_check(&p, &v, 32, 0).unwrap();
    assert_eq!(r.outcome(), Verdict::Transitive, "{:?} {:?}", r.condition_i, r.condition_ii);
    assert_eq!(r.vl_membership[&1], true);
    assert_eq!(r.hint.as_deref(), Some("orbit-equivalent to H^Λ_{1,1}"));
    let ambient = p.q_jl(1).unwrap().sum(&p.zj);
    assert_eq!(normalizer(&p.model, &ambient, &v).unwrap(), ambient);
}

#[test]
fn g2_second_level_other_lines() {
    let p = pd(Preset::G2cG2, 2);
    for (k, r) in [[0i64, 1], [1, 1], [2, 1]].iter().enumerate() {
        let v = root_space(&p, r);
        let rep = nilpotent_construction_check(&p, &v, 32, 0).unwrap();
        println!("e{k}: I={:?} II={:?} vl={:?} restricted={:?}", rep.condition_i.value, rep.condition_ii.value, rep.vl_membership, rep.vl_restricted_condition_i[&1].value);
        assert_eq!(rep.vl_restricted_condition_i[&1].value, Verdict::NotTransitive);
    }
}

#[test]
fn g2_kahler_family() {
    let p = pd(Preset::G2cG2, 1);
    for c in [qf(3, 4), qf(1, 2), qf(1, 4), q(0)] {
        let v = kahler_plane(&p, &c).unwrap();
        let njv = n_jv(&p, &v);
        let s = normalizer(&p.model, &p.gj.lift(), &njv).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(p.model.project_p(&s).dim(), 2);
        assert_eq!(boundary_transitivity(&p, &v).value, Verdict::NotTransitive);
    }
}

#[test]
fn grassmannian_cases() {
    for n in 1..=3 {
        let p2 = pd(Preset::So2Np2 { n }, 2);
        let t = p2.tensor_basis().unwrap();
        let v = Subspace::span(p2.model.dim, &[t[0].clone(), t[n].clone()]);
        let r = nilpotent_construction_check(&p2, &v, 32, 0).unwrap();
        assert_eq!(r.outcome(), Verdict::Transitive, "n={n} {:?} {:?}", r.condition_i, r.condition_ii);
        assert_eq!(r.singular_orbit_codim, 2);
        let p1 = pd(Preset::So2Np2 { n }, 1);
        let xi = Subspace::span(p1.model.dim, &[p1.xi().unwrap()]);
        let perp = p1.nj.orth_complement(&xi, &p1.model.inner);
        let v: Subspace<Q> = Subspace::span(p1.model.dim, &perp.basis()[..2]);
        let r = nilpotent_construction_check(&p1, &v, 32, 0).unwrap();
        println!("n={n} B2 j=1: {:?} {:?}", r.condition_i, r.condition_ii);
        assert_eq!(r.outcome(), Verdict::NotTransitive);
    }
}
