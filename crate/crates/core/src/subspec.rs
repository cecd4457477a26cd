//! Textual subspace descriptions.
//!
//! * `full`: the first gradation level `𝔫¹ⱼ`
//! * `root:<label>`: a restricted root space, e.g. `root:3a1+a2`
//! * `kahler:<c>`: the real 2-plane in `𝔫¹₁` of `g2c-g2` with `cos²φ = c`
//! * `rows:[[..],[..]]`: rational coordinate rows in the model basis
//! * `tensor:e1f1,e2f1`: tensor vectors `eᵢ⊗f_s` in `𝔫¹₂` of `so-2-np2`

use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::nilcons::{kahler_plane, nilpotent_construction_check, NilConsReport};
use crate::parabolic::ParabolicDecomposition;
use crate::rootsys::parse_root_label;
use crate::scalar::{parse_q, RealQuadratic, Q};

#[derive(Clone, Debug)]
pub enum ResolvedSubspace {
    Rational(Subspace),
    Quadratic(Subspace<RealQuadratic>),
}

impl ResolvedSubspace {
    pub fn dim(&self) -> usize {
        match self {
            ResolvedSubspace::Rational(s) => s.dim(),
            ResolvedSubspace::Quadratic(s) => s.dim(),
        }
    }

    pub fn check(&self, pd: &ParabolicDecomposition, samples: usize, seed: u64) -> Result<NilConsReport> {
        match self {
            ResolvedSubspace::Rational(s) => nilpotent_construction_check(pd, s, samples, seed),
            ResolvedSubspace::Quadratic(s) => nilpotent_construction_check(pd, s, samples, seed),
        }
    }
}

fn parse_rows(text: &str, width: usize) -> Result<Vec<Vec<Q>>> {
    let body = text.trim();
    let body = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')).unwrap_or(body);
    let mut rows = Vec::new();
    for chunk in body.split(']') {
        let chunk = chunk.trim().trim_start_matches(',').trim().trim_start_matches('[');
        if chunk.trim().is_empty() {
            continue;
        }
        let row: Option<Vec<Q>> = chunk
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| parse_q(t.trim_matches('"')))
            .collect();
        let row = row.ok_or_else(|| Error::Parse(format!("bad rational in row [{chunk}]")))?;
        if row.len() != width {
            return Err(Error::DimensionMismatch { expected: width, got: row.len() });
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("rows: needs at least one row".into()));
    }
    Ok(rows)
}

fn parse_tensor(pd: &ParabolicDecomposition, text: &str) -> Result<Subspace> {
    let basis = pd.tensor_basis()?;
    let n = basis.len() / 2;
    let mut vs = Vec::new();
    for tok in text.split(',').map(str::trim) {
        let bad = || Error::Parse(format!("bad tensor token '{tok}', expected e<i>f<s>"));
        let rest = tok.strip_prefix('e').ok_or_else(bad)?;
        let (i, s) = rest.split_once('f').ok_or_else(bad)?;
        let i: usize = i.parse().map_err(|_| bad())?;
        let s: usize = s.parse().map_err(|_| bad())?;
        if !(1..=2).contains(&i) || !(1..=n).contains(&s) {
            return Err(Error::InvalidArgument(format!("{tok} out of range (i in 1..=2, s in 1..={n})")));
        }
        vs.push(basis[(i - 1) * n + s - 1].clone());
    }
    Ok(Subspace::span(pd.model.dim, &vs))
}

pub fn resolve_subspace(pd: &ParabolicDecomposition, text: &str) -> Result<ResolvedSubspace> {
    let text = text.trim();
    let m = &pd.model;
    if text == "full" {
        return Ok(ResolvedSubspace::Rational(pd.n1()));
    }
    let (kind, arg) = text.split_once(':').ok_or_else(|| Error::Parse(format!("unknown subspace '{text}'")))?;
    match kind {
        "root" => {
            let r = parse_root_label(arg, m.root_system.rank)?;
            let i = m.datum.index(&r)?;
            Ok(ResolvedSubspace::Rational(m.datum.root_spaces[i].clone()))
        }
        "kahler" => {
            let c = parse_q(arg).ok_or_else(|| Error::Parse(format!("bad rational '{arg}'")))?;
            Ok(ResolvedSubspace::Quadratic(kahler_plane(pd, &c)?))
        }
        "rows" => Ok(ResolvedSubspace::Rational(Subspace::span(m.dim, &parse_rows(arg, m.dim)?))),
        "tensor" => Ok(ResolvedSubspace::Rational(parse_tensor(pd, arg)?)),
        _ => Err(Error::Parse(format!("unknown subspace kind '{kind}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{build_model, Preset};
    use crate::parabolic::parabolic_decomposition;
    use std::sync::Arc;

    #[test]
    fn parses_every_form() {
        let pd = parabolic_decomposition(Arc::new(build_model(Preset::So2Np2 { n: 2 }).unwrap()), 2).unwrap();
        assert_eq!(resolve_subspace(&pd, "full").unwrap().dim(), 4);
        assert_eq!(resolve_subspace(&pd, "root:a1+a2").unwrap().dim(), 2);
        assert_eq!(resolve_subspace(&pd, "tensor:e1f1,e2f1").unwrap().dim(), 2);
        let row = |i: usize| (0..pd.model.dim).map(|k| if k == i { "1" } else { "0" }).collect::<Vec<_>>().join(",");
        let text = format!("rows:[[{}],[{}]]", row(0), row(1));
        assert_eq!(resolve_subspace(&pd, &text).unwrap().dim(), 2);
        for bad in ["nope", "root:a3", "rows:[[1,2]]", "tensor:e3f1", "kahler:1/2", "rows:[[x]]"] {
            assert!(resolve_subspace(&pd, bad).is_err(), "{bad}");
        }
    }
}
