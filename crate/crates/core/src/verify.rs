//! The acceptance suite: every named structural, root-theoretic and orbit
//! claim, evaluated exactly and collected into a serializable report.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::liealg::{build_model, LieAlgebraModel, Preset};
use crate::linalg::{self, Mat, Subspace};
use crate::nilcons::{
    boundary_transitivity, kahler_plane, n_jv, nilpotent_construction_check, normalizer_unchecked, vl_membership,
    Verdict,
};
use crate::orbits::{self, ActionSpec};
use crate::parabolic::{parabolic_decomposition, ParabolicDecomposition};
use crate::rootsys::{self, root_label, RootKind};
use crate::scalar::{fmt_q, q, qf, Q};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub g2: bool,
    pub sl3: bool,
    /// `n` values for the structural and root-data checks.
    pub so_ns: Vec<usize>,
    /// `n` values for the Grassmannian orbit checks.
    pub grassmannian_ns: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub probes: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            g2: true,
            sl3: true,
            so_ns: (1..=6).collect(),
            grassmannian_ns: vec![1, 2, 3, 6],
            samples: 32,
            seed: 0,
            probes: 16,
        }
    }
}

impl VerifyOptions {
    /// Restricts the suite to one preset.
    pub fn only(preset: Preset) -> Self {
        let base = VerifyOptions::default();
        match preset {
            Preset::G2cG2 => VerifyOptions { sl3: false, so_ns: vec![], grassmannian_ns: vec![], ..base },
            Preset::Sl3cSu3 => VerifyOptions { g2: false, so_ns: vec![], grassmannian_ns: vec![], ..base },
            Preset::So2Np2 { n } => VerifyOptions { g2: false, sl3: false, so_ns: vec![n], grassmannian_ns: vec![n], ..base },
        }
    }

    fn presets(&self) -> Vec<Preset> {
        let mut out = Vec::new();
        if self.g2 {
            out.push(Preset::G2cG2);
        }
        if self.sl3 {
            out.push(Preset::Sl3cSu3);
        }
        out.extend(self.so_ns.iter().map(|&n| Preset::So2Np2 { n }));
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub case: String,
    pub ok: bool,
    pub detail: String,
}

fn check(case: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
    Check { case: case.into(), ok, detail: detail.into() }
}

fn failed(case: impl Into<String>, e: impl std::fmt::Display) -> Check {
    check(case, false, format!("error: {e}"))
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: String,
    pub title: String,
    pub status: Status,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub schema_version: u32,
    pub seed: u64,
    pub samples: usize,
    pub probes: usize,
    pub criteria: Vec<CriterionResult>,
    pub all_passed: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.criteria {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            s.push_str(&format!("{tag} {} {}\n", c.id, c.title));
            for ch in c.checks.iter().filter(|ch| !ch.ok) {
                s.push_str(&format!("    failed: {}: {}\n", ch.case, ch.detail));
            }
        }
        s.push_str(if self.all_passed { "all criteria pass\n" } else { "some criteria fail\n" });
        s
    }
}

struct Context {
    opts: VerifyOptions,
    models: BTreeMap<String, Arc<LieAlgebraModel>>,
    errors: Vec<Check>,
}

fn key(p: Preset) -> String {
    match p.n() {
        Some(n) => format!("{}(n={n})", p.tag()),
        None => p.tag().to_string(),
    }
}

impl Context {
    fn new(opts: VerifyOptions) -> Context {
        let mut presets = opts.presets();
        for &n in &opts.grassmannian_ns {
            if !opts.so_ns.contains(&n) {
                presets.push(Preset::So2Np2 { n });
            }
        }
        let built: Vec<(Preset, Result<LieAlgebraModel>)> = presets.par_iter().map(|&p| (p, build_model(p))).collect();
        let mut models = BTreeMap::new();
        let mut errors = Vec::new();
        for (p, r) in built {
            match r {
                Ok(m) => {
                    models.insert(key(p), Arc::new(m));
                }
                Err(e) => errors.push(failed(key(p), e)),
            }
        }
        Context { opts, models, errors }
    }

    fn model(&self, p: Preset) -> Option<Arc<LieAlgebraModel>> {
        self.models.get(&key(p)).cloned()
    }

    fn pd(&self, p: Preset, j: usize) -> Result<ParabolicDecomposition> {
        let m = self.model(p).ok_or_else(|| crate::Error::InvalidArgument(format!("model {} unavailable", key(p))))?;
        parabolic_decomposition(m, j)
    }
}

fn criterion(id: &str, title: &str, checks: Vec<Check>) -> CriterionResult {
    let status = if checks.is_empty() {
        Status::Skip
    } else if checks.iter().all(|c| c.ok) {
        Status::Pass
    } else {
        Status::Fail
    };
    CriterionResult { id: id.into(), title: title.into(), status, checks }
}

/// `[𝔤_α, 𝔤_β] ⊆ 𝔤_{α+β}` for all `α, β ∈ Σ ∪ {0}`.
fn root_space_closure(m: &LieAlgebraModel) -> Option<String> {
    let d = &m.datum;
    let rank = m.root_system.rank;
    let mut spaces: Vec<(Vec<i64>, &Subspace)> = d.roots.iter().cloned().zip(d.root_spaces.iter()).collect();
    spaces.push((vec![0; rank], &d.g0));
    for (a, sa) in &spaces {
        for (b, sb) in &spaces {
            let sum = rootsys::add(a, b);
            let br = m.bracket_spaces(sa, sb);
            let ok = if sum.iter().all(|&c| c == 0) {
                d.g0.contains(&br)
            } else if let Ok(i) = d.index(&sum) {
                d.root_spaces[i].contains(&br)
            } else {
                br.is_zero()
            };
            if !ok {
                return Some(format!("[g_{}, g_{}]", root_label(a), root_label(b)));
            }
        }
    }
    None
}

fn ac1(ctx: &Context) -> Vec<Check> {
    ctx.models
        .par_iter()
        .map(|(name, m)| {
            let mut bad = Vec::new();
            if let Some(t) = m.antisymmetry_defect() {
                bad.push(format!("antisymmetry at {t:?}"));
            }
            if let Some(t) = m.jacobi_defect() {
                bad.push(format!("Jacobi at {t:?}"));
            }
            if let Some(t) = m.theta_automorphism_defect() {
                bad.push(format!("theta at {t:?}"));
            }
            if let Some(t) = m.ad_invariance_defect() {
                bad.push(format!("ad-invariance at {t}"));
            }
            if let Some(t) = root_space_closure(m) {
                bad.push(format!("root-space closure at {t}"));
            }
            let ok = bad.is_empty();
            check(name.clone(), ok, if ok { format!("dim {}", m.dim) } else { bad.join("; ") })
        })
        .collect()
}

fn ac2(ctx: &Context) -> Vec<Check> {
    let mut out = Vec::new();
    for (name, m) in &ctx.models {
        let rs = &m.root_system;
        let listed: Vec<String> = rs.positive_roots.iter().map(|r| root_label(r)).collect();
        let expected: Vec<(&str, usize)> = match (rs.kind, m.preset.n()) {
            (RootKind::G2, _) => vec![("a1", 2), ("a2", 2), ("a1+a2", 2), ("2a1+a2", 2), ("3a1+a2", 2), ("3a1+2a2", 2)],
            (RootKind::A2, _) => vec![("a1", 2), ("a2", 2), ("a1+a2", 2)],
            (RootKind::B2, Some(n)) => vec![("a1", 1), ("a2", n), ("a1+a2", n), ("a1+2a2", 1)],
            _ => vec![],
        };
        let mut ok = listed.len() == expected.len();
        for (label, mult) in &expected {
            let found = rs.positive_roots.iter().find(|r| root_label(r) == *label);
            ok &= found.is_some_and(|r| m.datum.multiplicity(r) == *mult);
        }
        let got: Vec<String> = rs.positive_roots.iter().map(|r| format!("{}:{}", root_label(r), m.datum.multiplicity(r))).collect();
        out.push(check(name.clone(), ok, got.join(" ")));
    }
    out
}

fn ac3(ctx: &Context) -> Vec<Check> {
    let mut out = Vec::new();
    for (name, m) in &ctx.models {
        for j in 1..=m.root_system.rank {
            let case = format!("{name} j={j}");
            match parabolic_decomposition(m.clone(), j) {
                Ok(pd) => match pd.gradation_check() {
                    Ok(levels) => {
                        let s: Vec<String> = levels.iter().map(|(nu, d)| format!("{nu}:{d}")).collect();
                        out.push(check(case, true, s.join(" ")))
                    }
                    Err(d) => out.push(check(case, false, format!("{d:?}"))),
                },
                Err(e) => out.push(failed(case, e)),
            }
        }
    }
    out
}

/// Matrix of `ad X` restricted to an invariant subspace, in its basis.
fn restricted_ad(m: &LieAlgebraModel, x: &[Q], s: &Subspace) -> Option<Mat<Q>> {
    let cols: Option<Vec<Vec<Q>>> = s.basis().iter().map(|b| s.coordinates(&m.bracket(x, b))).collect();
    cols.map(|c| Mat::from_cols(&c, s.dim()))
}

fn ac4(ctx: &Context) -> Vec<Check> {
    if !ctx.opts.g2 {
        return vec![];
    }
    let run = || -> Result<Check> {
        let pd = ctx.pd(Preset::G2cG2, 2)?;
        let h = pd.model.coroot(&[1, 0])?;
        let Some(mat) = restricted_ad(&pd.model, &h, &pd.n1()) else {
            return Ok(check("g2c-g2 j=2", false, "n^1_2 is not ad(H')-invariant"));
        };
        let Some(spec) = linalg::rational_spectrum(&mat) else {
            return Ok(check("g2c-g2 j=2", false, "spectrum is not rational"));
        };
        let values: Vec<Q> = spec.iter().map(|(v, _)| v.clone()).collect();
        let ok = values == vec![q(-3), q(-1), q(1), q(3)];
        let shown: Vec<String> = spec.iter().map(|(v, k)| format!("{}^{k}", fmt_q(v))).collect();
        Ok(check("g2c-g2 j=2", ok, shown.join(" ")))
    };
    vec![run().unwrap_or_else(|e| failed("g2c-g2 j=2", e))]
}

fn ac5(ctx: &Context) -> Vec<Check> {
    if !ctx.opts.g2 {
        return vec![];
    }
    let pd = match ctx.pd(Preset::G2cG2, 1) {
        Ok(p) => p,
        Err(e) => return vec![failed("g2c-g2 j=1", e)],
    };
    [qf(3, 4), qf(1, 2), qf(1, 4), q(0)]
        .iter()
        .map(|c| {
            let case = format!("cos2={}", fmt_q(c));
            match kahler_plane(&pd, c) {
                Ok(v) => {
                    let s = normalizer_unchecked(&pd.model, &pd.gj.lift(), &n_jv(&pd, &v));
                    let proj = pd.model.project_p(&s).dim();
                    let verdict = boundary_transitivity(&pd, &v).value;
                    let ok = s.dim() == 3 && proj == 2 && verdict == Verdict::NotTransitive;
                    check(case, ok, format!("dim N = {}, dim pi_p = {proj}, condition (i) {verdict:?}", s.dim()))
                }
                Err(e) => failed(case, e),
            }
        })
        .collect()
}

fn verdict_check(case: String, got: Verdict, want: Verdict, extra: String) -> Check {
    check(case, got == want, format!("{got:?}{extra}"))
}

/// Seeded random 2-planes inside `s`.
fn random_planes(s: &Subspace, count: usize, seed: u64) -> Vec<Subspace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let mut vs = Vec::new();
        for _ in 0..2 {
            let c: Vec<Q> = (0..s.dim()).map(|_| q(rng.gen_range(-4..=4))).collect();
            vs.push(s.combine(&c));
        }
        let plane = Subspace::span(s.ambient(), &vs);
        if plane.dim() == 2 {
            out.push(plane);
        }
    }
    out
}

fn ac6(ctx: &Context) -> Vec<Check> {
    let (samples, seed) = (ctx.opts.samples, ctx.opts.seed);
    let mut out = Vec::new();
    if ctx.opts.g2 {
        match ctx.pd(Preset::G2cG2, 1) {
            Ok(pd) => {
                match nilpotent_construction_check(&pd, &pd.n1(), samples, seed) {
                    Ok(r) => out.push(check(
                        "g2 j=1 v=n^1_1",
                        r.outcome() == Verdict::Transitive && r.singular_orbit_dim == 10,
                        format!("{:?}, singular orbit dim {}", r.outcome(), r.singular_orbit_dim),
                    )),
                    Err(e) => out.push(failed("g2 j=1 v=n^1_1", e)),
                }
                let v = pd.model.datum.space(&[1, 0]).clone();
                match nilpotent_construction_check(&pd, &v, samples, seed) {
                    Ok(r) => out.push(verdict_check("g2 j=1 v=g_a1".into(), r.outcome(), Verdict::Transitive, String::new())),
                    Err(e) => out.push(failed("g2 j=1 v=g_a1", e)),
                }
            }
            Err(e) => out.push(failed("g2 j=1", e)),
        }
        match ctx.pd(Preset::G2cG2, 2) {
            Ok(pd) => {
                for (k, r) in [[0i64, 1], [1, 1], [2, 1], [3, 1]].iter().enumerate() {
                    let v = pd.model.datum.space(r).clone();
                    let case = format!("g2 j=2 v=Ce_{k}");
                    match nilpotent_construction_check(&pd, &v, samples, seed) {
                        Ok(rep) if k == 3 => {
                            let ok = rep.outcome() == Verdict::Transitive && rep.vl_membership[&1];
                            out.push(check(case, ok, format!("{:?}, in V_1 {}", rep.outcome(), rep.vl_membership[&1])))
                        }
                        Ok(rep) => {
                            let got = rep.vl_restricted_condition_i[&1].value;
                            out.push(verdict_check(case, got, Verdict::NotTransitive, " on V_1".into()))
                        }
                        Err(e) => out.push(failed(case, e)),
                    }
                }
            }
            Err(e) => out.push(failed("g2 j=2", e)),
        }
    }
    for &n in &ctx.opts.so_ns {
        match ctx.pd(Preset::So2Np2 { n }, 1) {
            Ok(pd) => {
                let planes = pd.xi().map(|xi| {
                    let line = Subspace::span(pd.model.dim, &[xi]);
                    random_planes(&pd.nj.orth_complement(&line, &pd.model.inner), 3, seed)
                });
                match planes {
                    Ok(planes) => {
                        for (i, v) in planes.iter().enumerate() {
                            let case = format!("b2 n={n} j=1 plane {i} in xi-perp");
                            match nilpotent_construction_check(&pd, v, samples, seed) {
                                Ok(r) => out.push(verdict_check(case, r.outcome(), Verdict::NotTransitive, String::new())),
                                Err(e) => out.push(failed(case, e)),
                            }
                        }
                    }
                    Err(e) => out.push(failed(format!("b2 n={n} j=1"), e)),
                }
            }
            Err(e) => out.push(failed(format!("b2 n={n} j=1"), e)),
        }
        let case = format!("b2 n={n} j=2 v=span(e1f1,e2f1)");
        let r = ctx.pd(Preset::So2Np2 { n }, 2).and_then(|pd| {
            let t = pd.tensor_basis()?;
            let v = Subspace::span(pd.model.dim, &[t[0].clone(), t[n].clone()]);
            nilpotent_construction_check(&pd, &v, samples, seed)
        });
        match r {
            Ok(r) => out.push(check(
                case,
                r.outcome() == Verdict::Transitive && r.singular_orbit_codim == 2,
                format!("{:?}, codim {}", r.outcome(), r.singular_orbit_codim),
            )),
            Err(e) => out.push(failed(case, e)),
        }
    }
    out
}

/// A cohomogeneity one action with its expected singular orbit codimension.
pub struct NamedAction {
    pub name: String,
    pub model: Arc<LieAlgebraModel>,
    pub spec: ActionSpec,
    pub expected_codim: usize,
}

type Built = Result<(Arc<LieAlgebraModel>, ActionSpec)>;

fn on_pd(ctx: &Context, preset: Preset, j: usize, f: impl Fn(&ParabolicDecomposition) -> Result<ActionSpec>) -> Built {
    let pd = ctx.pd(preset, j)?;
    Ok((pd.model.clone(), f(&pd)?))
}

fn known_actions(ctx: &Context) -> (Vec<NamedAction>, Vec<Check>) {
    let mut acts = Vec::new();
    let mut errs = Vec::new();
    let mut push = |name: String, r: Built, expected_codim: usize| match r {
        Ok((model, spec)) => acts.push(NamedAction { name, model, spec, expected_codim }),
        Err(e) => errs.push(failed(name, e)),
    };
    let mut complex = Vec::new();
    if ctx.opts.g2 {
        complex.push((Preset::G2cG2, "g2", 14, 11));
    }
    if ctx.opts.sl3 {
        complex.push((Preset::Sl3cSu3, "sl3", 8, 5));
    }
    for (preset, short, dim_p, point_dim) in complex {
        for j in 1..=2 {
            let r = on_pd(ctx, preset, j, |pd| orbits::canonical_extension(pd, &orbits::boundary_isotropy(pd), "H^Λ_{j,0}"));
            push(format!("{short} H^Λ_{{{j},0}}"), r, dim_p - point_dim);
            let r = on_pd(ctx, preset, j, |pd| {
                orbits::canonical_extension(pd, &orbits::boundary_geodesic_algebra(pd)?, "H^Λ_{j,1}")
            });
            push(format!("{short} H^Λ_{{{j},1}}"), r, dim_p - point_dim - 1);
        }
        if preset == Preset::G2cG2 {
            let r = on_pd(ctx, preset, 1, |pd| orbits::nilpotent_construction_action(pd, &pd.n1()));
            push("g2 H_{1,v}, v = n^1_1".into(), r, dim_p - 10);
        }
    }
    for &n in &ctx.opts.grassmannian_ns {
        let preset = Preset::So2Np2 { n };
        for k in 0..n {
            let r = on_pd(ctx, preset, 1, |pd| orbits::grassmannian_extension_family(pd, k, &orbits::standard_w(pd, k)?));
            push(format!("b2 n={n} H^Λ_{{1,{k}}}"), r, n - k + 1);
        }
        let r = on_pd(ctx, preset, 2, |pd| {
            let k1 = pd.k_alpha.get(&vec![1, 0]).cloned().unwrap_or_else(|| Subspace::zero(pd.model.dim));
            orbits::canonical_extension(pd, &k1, "H^Λ_2")
        });
        push(format!("b2 n={n} H^Λ_2"), r, 2);
        let r = on_pd(ctx, preset, 2, |pd| {
            let t = pd.tensor_basis()?;
            orbits::nilpotent_construction_action(pd, &Subspace::span(pd.model.dim, &[t[0].clone(), t[n].clone()]))
        });
        push(format!("b2 n={n} H_{{2,v}}, v = span(e1f1,e2f1)"), r, 2);
    }
    (acts, errs)
}

fn foliations(ctx: &Context) -> (Vec<NamedAction>, Vec<Check>) {
    let mut acts = Vec::new();
    let mut errs = Vec::new();
    for (name, m) in &ctx.models {
        let mut cands: Vec<(String, Result<ActionSpec>)> = Vec::new();
        for (i, h) in m.a_basis.iter().enumerate() {
            cands.push((format!("{name} H_l, l = R H_{}", i + 1), orbits::foliation_algebra_a(m, h)));
        }
        for j in 1..=m.root_system.rank {
            let simple = &m.root_system.simple_roots[j - 1];
            let ell = m.datum.space(simple).basis()[0].clone();
            cands.push((format!("{name} H_{j}"), orbits::foliation_algebra_n(m, j, &ell)));
        }
        for (n, r) in cands {
            match r {
                Ok(spec) => acts.push(NamedAction { name: n, model: m.clone(), spec, expected_codim: 1 }),
                Err(e) => errs.push(failed(n, e)),
            }
        }
    }
    (acts, errs)
}

fn ac7(acts: &[NamedAction], errs: &[Check]) -> Vec<Check> {
    let mut out = errs.to_vec();
    for a in acts {
        let codim = a.model.p.dim() - a.spec.base_orbit_dim;
        out.push(check(
            a.name.clone(),
            codim == a.expected_codim,
            format!("orbit dim {}, codim {codim}, expected codim {}", a.spec.base_orbit_dim, a.expected_codim),
        ));
    }
    out
}

fn estimate_json(a: &NamedAction, probes: usize, seed: u64) -> Result<String> {
    let p = orbits::default_probes(&a.model, probes, seed);
    let est = orbits::cohomogeneity_estimate(&a.model, &a.spec.h, &p)?;
    Ok(serde_json::to_string(&est).expect("estimate serializes"))
}

fn ac8(ctx: &Context, acts: &[NamedAction], errs: &[Check]) -> Vec<Check> {
    let (probes, seed) = (ctx.opts.probes, ctx.opts.seed);
    let mut out = errs.to_vec();
    out.extend(acts.par_iter().map(|a| {
        let p = orbits::default_probes(&a.model, probes, seed);
        match orbits::cohomogeneity_estimate(&a.model, &a.spec.h, &p) {
            Ok(est) => {
                let witness = est.witness.map_or("base point".to_string(), |w| format!("probe {w}"));
                check(
                    a.name.clone(),
                    est.value == 1,
                    format!("cohomogeneity <= {} (base orbit {}, max {} at {witness})", est.value, est.base_orbit_dim, est.max_orbit_dim),
                )
            }
            Err(e) => failed(a.name.clone(), e),
        }
    }).collect::<Vec<_>>());
    out
}

fn ac9(ctx: &Context) -> Vec<Check> {
    let mut out = Vec::new();
    if ctx.opts.g2 {
        let r = ctx.pd(Preset::G2cG2, 2).and_then(|pd| vl_membership(&pd, 1, pd.model.datum.space(&[3, 1])));
        match r {
            Ok(b) => out.push(check("g2 j=2 g_3a1+a2 in V_1", b, format!("{b}"))),
            Err(e) => out.push(failed("g2 j=2 g_3a1+a2 in V_1", e)),
        }
    }
    for (name, m) in &ctx.models {
        let rank = m.root_system.rank;
        for j in 1..=rank {
            for l in (1..=rank).filter(|&l| l != j) {
                let case = format!("{name} n^1_{j} not in V_{l}");
                match parabolic_decomposition(m.clone(), j).and_then(|pd| vl_membership(&pd, l, &pd.n1())) {
                    Ok(b) => out.push(check(case, !b, format!("member {b}"))),
                    Err(e) => out.push(failed(case, e)),
                }
            }
        }
    }
    out
}

type Complex = (Mat<Q>, Mat<Q>);

fn cmul(x: &Complex, y: &Complex) -> Complex {
    (x.0.mul(&y.0).sub(&x.1.mul(&y.1)), x.0.mul(&y.1).add(&x.1.mul(&y.0)))
}

fn realization_defect(m: &LieAlgebraModel) -> Option<Option<(usize, usize)>> {
    let r = m.realization.as_ref()?;
    let elems: Vec<Complex> = r.re.iter().cloned().zip(r.im.iter().cloned()).collect();
    let realize = |v: &[Q]| -> Complex {
        let mut acc = (Mat::zeros(r.size, r.size), Mat::zeros(r.size, r.size));
        for (c, e) in v.iter().zip(&elems) {
            acc = (acc.0.add(&e.0.scale(c)), acc.1.add(&e.1.scale(c)));
        }
        acc
    };
    for a in 0..m.dim {
        for b in 0..m.dim {
            let ab = cmul(&elems[a], &elems[b]);
            let ba = cmul(&elems[b], &elems[a]);
            let comm = (ab.0.sub(&ba.0), ab.1.sub(&ba.1));
            let br = realize(&m.bracket(&m.basis_vector(a), &m.basis_vector(b)));
            if comm != br {
                return Some(Some((a, b)));
            }
        }
    }
    Some(None)
}

fn ac10(ctx: &Context) -> Vec<Check> {
    let targets: Vec<(&String, &Arc<LieAlgebraModel>)> =
        ctx.models.iter().filter(|(_, m)| m.preset.root_kind() != RootKind::G2).collect();
    targets
        .par_iter()
        .map(|(name, m)| match realization_defect(m) {
            None => check((*name).clone(), false, "no matrix realization"),
            Some(None) => check((*name).clone(), true, format!("{} basis pairs", m.dim * m.dim)),
            Some(Some(t)) => check((*name).clone(), false, format!("mismatch at {t:?}")),
        })
        .collect()
}

fn ac11(ctx: &Context, acts: &[NamedAction]) -> Vec<Check> {
    let first = serde_json::to_string(&ac6(ctx)).expect("checks serialize");
    let second = serde_json::to_string(&ac6(ctx)).expect("checks serialize");
    let mut out = vec![check("nilpotent construction reports", first == second, format!("{} bytes", first.len()))];
    if let Some(a) = acts.first() {
        let runs: Vec<Result<String>> = (0..2).map(|_| estimate_json(a, ctx.opts.probes, ctx.opts.seed)).collect();
        match (&runs[0], &runs[1]) {
            (Ok(x), Ok(y)) => out.push(check(format!("probe table for {}", a.name), x == y, format!("{} bytes", x.len()))),
            (Err(e), _) | (_, Err(e)) => out.push(failed(a.name.clone(), e)),
        }
    }
    out
}

pub fn run_suite(opts: VerifyOptions) -> SuiteReport {
    let ctx = Context::new(opts);
    let (acts, act_errs) = known_actions(&ctx);
    let (fols, fol_errs) = foliations(&ctx);
    let all_acts: Vec<NamedAction> = acts.into_iter().chain(fols).collect();
    let all_errs = [act_errs, fol_errs].concat();
    let criteria = vec![
        criterion("AC1", "structural identities", [ctx.errors.clone(), ac1(&ctx)].concat()),
        criterion("AC2", "restricted roots and multiplicities", ac2(&ctx)),
        criterion("AC3", "gradation brackets", ac3(&ctx)),
        criterion("AC4", "spectrum of ad(H'_a1) on n^1_2", ac4(&ctx)),
        criterion("AC5", "Kähler family in n^1_1", ac5(&ctx)),
        criterion("AC6", "nilpotent construction verdicts", ac6(&ctx)),
        criterion("AC7", "singular orbit dimensions", ac7(&all_acts, &all_errs)),
        criterion("AC8", "cohomogeneity one", ac8(&ctx, &all_acts, &all_errs)),
        criterion("AC9", "V_l membership", ac9(&ctx)),
        criterion("AC10", "matrix realization oracle", ac10(&ctx)),
        criterion("AC11", "determinism", ac11(&ctx, &all_acts)),
    ];
    let all_passed = criteria.iter().all(|c| c.status != Status::Fail);
    SuiteReport {
        schema_version: 1,
        seed: ctx.opts.seed,
        samples: ctx.opts.samples,
        probes: ctx.opts.probes,
        criteria,
        all_passed,
    }
}
