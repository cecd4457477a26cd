//! Independent oracles: fraction-free ranks, reflection-closure root sets,
//! defining-representation commutators and hand-rolled exponentials.

use std::collections::BTreeSet;
use std::sync::Arc;

mod common;
use common::bareiss_rank;

use num_traits::Zero;
use proptest::prelude::*;

use nilcons_core::liealg::{build_model, LieAlgebraModel, Preset};
use nilcons_core::linalg::{Mat, Subspace};
use nilcons_core::nilcons::{centralizer, normalizer, theta_duality_check, splitting_check};
use nilcons_core::orbits;
use nilcons_core::parabolic::parabolic_decomposition;
use nilcons_core::rootsys::{build_root_system, chevalley_constants, RootKind};
use nilcons_core::scalar::{q, qf, Q};

fn model(p: Preset) -> Arc<LieAlgebraModel> {
    Arc::new(build_model(p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_matches_bareiss(rows in prop::collection::vec(prop::collection::vec((-4i64..=4, 1i64..=3), 5), 1..7)) {
        let rows: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&(a, b)| qf(a, b)).collect()).collect();
        let m = Mat::from_rows(&rows, 5);
        prop_assert_eq!(m.rank(), bareiss_rank(&rows));
        let ker = m.kernel();
        prop_assert_eq!(ker.len(), 5 - m.rank());
        for v in ker {
            prop_assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }
}

/// Roots as simple-root coefficients, generated by closing the simple roots
/// under the reflections `s_i(β) = β − ⟨β, αᵢ^∨⟩ αᵢ` read off the Cartan matrix.
fn reflection_closure(cartan: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let r = cartan.len();
    let mut roots: BTreeSet<Vec<i64>> = (0..r).map(|i| (0..r).map(|k| i64::from(k == i)).collect()).collect();
    loop {
        let mut grown = roots.clone();
        for b in &roots {
            for i in 0..r {
                let pairing: i64 = (0..r).map(|k| b[k] * cartan[k][i]).sum();
                let mut img = b.clone();
                img[i] -= pairing;
                grown.insert(img);
            }
        }
        if grown.len() == roots.len() {
            return roots;
        }
        roots = grown;
    }
}

#[test]
fn root_sets_and_strings_match_brute_force() {
    let cartans = [
        (RootKind::A1, vec![vec![2]], 2),
        (RootKind::A2, vec![vec![2, -1], vec![-1, 2]], 6),
        (RootKind::B2, vec![vec![2, -2], vec![-1, 2]], 8),
        (RootKind::G2, vec![vec![2, -1], vec![-3, 2]], 12),
    ];
    for (kind, cartan, count) in cartans {
        let rs = build_root_system(kind);
        let oracle = reflection_closure(&cartan);
        let ours: BTreeSet<Vec<i64>> = rs.all_roots.iter().cloned().collect();
        assert_eq!(ours, oracle, "{kind}");
        assert_eq!(ours.len(), count);
        for a in &oracle {
            for b in &oracle {
                if a == b || a.iter().zip(b).all(|(x, y)| *x == -*y) {
                    continue;
                }
                let step = |k: i64| -> Vec<i64> { b.iter().zip(a).map(|(y, x)| y + k * x).collect() };
                let p = (1..).take_while(|&k| oracle.contains(&step(-k))).count();
                let qq = (1..).take_while(|&k| oracle.contains(&step(k))).count();
                assert_eq!(rs.root_string(a, b).unwrap(), (p, qq), "{kind} {a:?} {b:?}");
            }
        }
    }
    let a2 = build_root_system(RootKind::A2);
    assert_eq!(a2.root_string(&[1, 0], &[0, 1]).unwrap(), (0, 1));
    let g2 = build_root_system(RootKind::G2);
    assert_eq!(g2.root_string(&[1, 0], &[0, 1]).unwrap(), (0, 3));
}

#[test]
fn structure_constant_magnitudes() {
    let a2 = build_root_system(RootKind::A2);
    assert_eq!(chevalley_constants(&a2).get(&[1, 0], &[0, 1]).abs(), 1);
    let g2 = build_root_system(RootKind::G2);
    assert_eq!(chevalley_constants(&g2).get(&[1, 0], &[1, 1]).abs(), 2);
}

/// `so(2, n+2)` in its defining representation, built from scratch.
fn so_basis(n: usize) -> Vec<Vec<Vec<i64>>> {
    let size = n + 4;
    let mut out = Vec::new();
    for a in 0..size {
        for b in a + 1..size {
            let mut m = vec![vec![0i64; size]; size];
            let same = (a < 2) == (b < 2);
            m[a][b] = 1;
            m[b][a] = if same { -1 } else { 1 };
            out.push(m);
        }
    }
    out
}

fn imul(x: &[Vec<i64>], y: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let s = x.len();
    (0..s).map(|i| (0..s).map(|k| (0..s).map(|j| x[i][j] * y[j][k]).sum()).collect()).collect()
}

#[test]
fn so_brackets_are_matrix_commutators() {
    for n in 1..=3 {
        let m = model(Preset::So2Np2 { n });
        let basis = so_basis(n);
        assert_eq!(basis.len(), m.dim);
        let flat: Vec<Vec<Q>> = basis.iter().map(|b| b.iter().flatten().map(|&x| q(x)).collect()).collect();
        let coords = Mat::from_cols(&flat, (n + 4) * (n + 4));
        for a in 0..m.dim {
            for b in 0..m.dim {
                let ab = imul(&basis[a], &basis[b]);
                let ba = imul(&basis[b], &basis[a]);
                let comm: Vec<Q> = ab.iter().flatten().zip(ba.iter().flatten()).map(|(x, y)| q(x - y)).collect();
                let want = coords.solve(&comm).expect("commutator stays in so(2,n+2)");
                assert_eq!(m.bracket(&m.basis_vector(a), &m.basis_vector(b)), want, "n={n} ({a},{b})");
            }
        }
        let trace = |x: &[Vec<i64>], y: &[Vec<i64>]| -> i64 { (0..n + 4).map(|i| imul(x, y)[i][i]).sum() };
        for a in 0..m.dim {
            for b in 0..m.dim {
                let want = q((n as i64 + 2) * trace(&basis[a], &basis[b]));
                assert_eq!(m.killing.get(a, b), &want, "Killing n={n} ({a},{b})");
            }
        }
    }
}

#[test]
fn cartan_elements_act_by_root_values() {
    for p in [Preset::G2cG2, Preset::Sl3cSu3, Preset::So2Np2 { n: 2 }] {
        let m = model(p);
        for h in &m.a_basis {
            for (r, space) in m.datum.roots.iter().zip(&m.datum.root_spaces) {
                let val = m.root_value(r, h).unwrap();
                for x in space.basis() {
                    let want: Vec<Q> = x.iter().map(|c| c * &val).collect();
                    assert_eq!(m.bracket(h, x), want);
                }
            }
        }
    }
}

#[test]
fn coroot_eigenvalues_on_gradation_pieces() {
    let m = model(Preset::G2cG2);
    let h = m.coroot(&[1, 0]).unwrap();
    let pd1 = parabolic_decomposition(m.clone(), 1).unwrap();
    for x in pd1.level(2).basis() {
        assert_eq!(m.bracket(&h, x), x.clone());
    }
    let pd2 = parabolic_decomposition(m.clone(), 2).unwrap();
    let mut seen = BTreeSet::new();
    for (k, val) in [(0i64, -3i64), (1, -1), (2, 1), (3, 3)] {
        for x in m.datum.space(&[k, 1]).basis() {
            assert!(pd2.n1().contains_vector(x));
            assert_eq!(m.bracket(&h, x), x.iter().map(|c| c * q(val)).collect::<Vec<_>>());
            seen.insert(val);
        }
    }
    assert_eq!(seen.len(), 4);
}

#[test]
fn gradation_by_direct_eigen_solve() {
    let m = model(Preset::So2Np2 { n: 3 });
    let pd = parabolic_decomposition(m.clone(), 1).unwrap();
    let h = &pd.model.datum.dual_vectors[0];
    let ad = m.ad(h);
    for nu in 1..=pd.top_level() {
        let shifted = ad.sub(&Mat::identity(m.dim).scale(&q(nu as i64)));
        let eig = Subspace::span(m.dim, &shifted.kernel());
        assert_eq!(eig, pd.level(nu), "level {nu}");
    }
}

#[test]
fn centralizer_of_root_space_in_a_is_the_kernel() {
    let m = model(Preset::G2cG2);
    for r in &m.root_system.positive_roots {
        let z = centralizer(&m, &m.a, m.datum.space(r));
        let hr = m.datum.root_vector(r);
        let ker: Vec<Vec<Q>> = m.a_basis.iter().filter(|h| m.inner_product(h, hr).is_zero()).cloned().collect();
        let kernel = if ker.is_empty() {
            let (h1, h2) = (&m.a_basis[0], &m.a_basis[1]);
            let (v1, v2) = (m.inner_product(h1, hr), m.inner_product(h2, hr));
            Subspace::span(m.dim, &[h1.iter().zip(h2).map(|(x, y)| x * &v2 - y * &v1).collect()])
        } else {
            Subspace::span(m.dim, &ker)
        };
        assert_eq!(z, kernel);
        assert_eq!(z.dim(), 1);
    }
}

#[test]
fn theta_duality_by_two_normalizer_solves() {
    let m = model(Preset::G2cG2);
    let pd = parabolic_decomposition(m.clone(), 1).unwrap();
    let v = m.datum.space(&[1, 0]).clone();
    let njv = pd.nj.orth_complement(&v, &m.inner);
    let left = normalizer(&m, &pd.lj, &njv).unwrap();
    let right = m.theta_space(&normalizer_in(&m, &pd.lj, &v));
    assert_eq!(left, right);
    assert!(theta_duality_check(&pd, &v));

    let m = model(Preset::So2Np2 { n: 2 });
    let pd = parabolic_decomposition(m.clone(), 2).unwrap();
    let t = pd.tensor_basis().unwrap();
    let v = Subspace::span(m.dim, &[t[0].clone(), t[2].clone()]);
    assert!(theta_duality_check(&pd, &v));
}

/// Normalizer by brute force: `X ∈ s` with `[X, v] ⊆ v`, solved coordinate-wise.
fn normalizer_in(m: &LieAlgebraModel, s: &Subspace, v: &Subspace) -> Subspace {
    let comp = Subspace::full(m.dim).orth_complement(v, &m.inner);
    let mut rows = Vec::new();
    for b in v.basis() {
        for c in comp.basis() {
            let row: Vec<Q> = s.basis().iter().map(|x| m.inner_product(&m.bracket(x, b), c)).collect();
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return s.clone();
    }
    let ker = Mat::from_rows(&rows, s.dim()).kernel();
    Subspace::span(m.dim, &ker.iter().map(|k| s.combine(k)).collect::<Vec<_>>())
}

#[test]
fn splitting_of_q21_plus_z2() {
    let m = model(Preset::G2cG2);
    let pd = parabolic_decomposition(m.clone(), 2).unwrap();
    let tau = pd.q_jl(1).unwrap().sum(&pd.zj);
    let (p1, p2, direct) = splitting_check(&pd, &tau).unwrap();
    assert!(direct);
    assert_eq!(p1.sum(&p2), tau);
    assert_eq!(p2, pd.zj);
}

/// `Σ (−ad X)^k / k!` evaluated independently of the library exponential.
fn exp_neg_ad(m: &LieAlgebraModel, x: &[Q]) -> Mat<Q> {
    let mut cols = Vec::new();
    for i in 0..m.dim {
        let mut term = m.basis_vector(i);
        let mut acc = term.clone();
        for k in 1.. {
            term = m.bracket(x, &term).iter().map(|c| -c / q(k)).collect();
            if term.iter().all(|c| c.is_zero()) {
                break;
            }
            acc = acc.iter().zip(&term).map(|(a, b)| a + b).collect();
        }
        cols.push(acc);
    }
    Mat::from_cols(&cols, m.dim)
}

fn oracle_orbit_dim(m: &LieAlgebraModel, h: &Subspace, x: &[Q]) -> usize {
    let e = exp_neg_ad(m, x);
    let rows: Vec<Vec<Q>> = h.basis().iter().map(|b| m.p.project(&e.mul_vec(b), &m.inner)).collect();
    bareiss_rank(&rows)
}

#[test]
fn principal_orbits_through_generic_points() {
    let m = model(Preset::G2cG2);
    let pd = parabolic_decomposition(m.clone(), 1).unwrap();
    let act = orbits::nilpotent_construction_action(&pd, &pd.n1()).unwrap();
    let v = pd.n1();
    let x = v.combine(&[q(1), q(-2), q(3), q(1)]);
    assert_eq!(oracle_orbit_dim(&m, &act.h, &x), 13);
    assert_eq!(orbits::orbit_dimension_at(&m, &act.h, &x).unwrap(), 13);

    let m = model(Preset::So2Np2 { n: 2 });
    let pd = parabolic_decomposition(m.clone(), 2).unwrap();
    let act = orbits::canonical_extension(&pd, &pd.k_alpha[&vec![1, 0]], "H^Λ_2").unwrap();
    let x = m.datum.space(&[1, 0]).basis()[0].clone();
    assert_eq!(oracle_orbit_dim(&m, &act.h, &x), 7);
    assert_eq!(orbits::orbit_dimension_at(&m, &act.h, &x).unwrap(), 7);
}

#[test]
fn cohomogeneity_examples() {
    let m = model(Preset::G2cG2);
    let full = Subspace::full(m.dim);
    let probes = orbits::default_probes(&m, 4, 0);
    assert_eq!(orbits::cohomogeneity_estimate(&m, &full, &probes).unwrap().value, 0);
    let pd = parabolic_decomposition(m.clone(), 1).unwrap();
    let act = orbits::canonical_extension(&pd, &orbits::boundary_isotropy(&pd), "H^Λ_{1,0}").unwrap();
    let n1_probes: Vec<Vec<Q>> = pd.nj.basis().to_vec();
    let est = orbits::cohomogeneity_estimate(&m, &act.h, &n1_probes).unwrap();
    assert_eq!(m.p.dim() - est.base_orbit_dim, 3);
    let full_n = orbits::cohomogeneity_estimate(&m, &act.h, &orbits::default_probes(&m, 16, 0)).unwrap();
    assert_eq!(full_n.value, 1);
    for x in orbits::default_probes(&m, 3, 5) {
        assert_eq!(oracle_orbit_dim(&m, &act.h, &x), orbits::orbit_dimension_at(&m, &act.h, &x).unwrap());
    }
}
