//! Reduced root systems of rank at most two and Chevalley structure constants.
//!
//! Roots are stored as integer coefficient vectors over the simple roots,
//! together with the Gram matrix of the simple roots. Inner products are
//! therefore rational even for A₂ and G₂, which have no rational Euclidean
//! realization in the plane.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{q, Q};

/// Coefficients of a root in the basis of simple roots.
pub type Root = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RootKind {
    A1,
    A2,
    B2,
    G2,
}

impl fmt::Display for RootKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RootKind::A1 => "A1",
            RootKind::A2 => "A2",
            RootKind::B2 => "B2",
            RootKind::G2 => "G2",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub kind: RootKind,
    pub rank: usize,
    /// Gram matrix `(αᵢ, αⱼ)` of the simple roots; short roots have squared length 2.
    pub gram: Mat<Q>,
    pub simple_roots: Vec<Root>,
    /// Positive roots first (in order), then their negatives in the same order.
    pub all_roots: Vec<Root>,
    pub positive_roots: Vec<Root>,
    pub cartan_matrix: Vec<Vec<i64>>,
}

pub fn build_root_system(kind: RootKind) -> RootSystem {
    let gram_entries: Vec<Vec<i64>> = match kind {
        RootKind::A1 => vec![vec![2]],
        RootKind::A2 => vec![vec![2, -1], vec![-1, 2]],
        // α₁ long
        RootKind::B2 => vec![vec![4, -2], vec![-2, 2]],
        // α₁ short
        RootKind::G2 => vec![vec![2, -3], vec![-3, 6]],
    };
    let rank = gram_entries.len();
    let rows: Vec<Vec<Q>> = gram_entries.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    let gram = Mat::from_rows(&rows, rank);
    let cartan_matrix = (0..rank)
        .map(|i| (0..rank).map(|j| 2 * gram_entries[i][j] / gram_entries[j][j]).collect())
        .collect();
    let simple_roots: Vec<Root> = (0..rank)
        .map(|i| {
            let mut r = vec![0; rank];
            r[i] = 1;
            r
        })
        .collect();
    let mut rs = RootSystem {
        kind,
        rank,
        gram,
        simple_roots: simple_roots.clone(),
        all_roots: Vec::new(),
        positive_roots: Vec::new(),
        cartan_matrix,
    };
    // closure under simple reflections
    let mut seen: BTreeSet<Root> = simple_roots.iter().cloned().collect();
    let mut frontier = simple_roots;
    while let Some(r) = frontier.pop() {
        for i in 0..rank {
            let s = rs.reflect(i, &r);
            if seen.insert(s.clone()) {
                frontier.push(s);
            }
        }
    }
    let mut positive: Vec<Root> = seen.into_iter().filter(|r| r.iter().all(|&c| c >= 0)).collect();
    positive.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));
    rs.all_roots = positive.iter().cloned().chain(positive.iter().map(|r| neg(r))).collect();
    rs.positive_roots = positive;
    rs
}

pub fn height(r: &[i64]) -> i64 {
    r.iter().sum()
}

pub fn neg(r: &[i64]) -> Root {
    r.iter().map(|c| -c).collect()
}

pub fn add(a: &[i64], b: &[i64]) -> Root {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn is_positive(r: &[i64]) -> bool {
    r.iter().all(|&c| c >= 0) && r.iter().any(|&c| c > 0)
}

impl RootSystem {
    pub fn inner(&self, a: &[i64], b: &[i64]) -> Q {
        let mut s = Q::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += self.gram.get(i, j) * q(a[i] * b[j]);
            }
        }
        s
    }

    pub fn norm2(&self, a: &[i64]) -> Q {
        self.inner(a, a)
    }

    /// `⟨a, b^∨⟩ = 2(a,b)/(b,b)`; integral for roots.
    pub fn cartan_integer(&self, a: &[i64], b: &[i64]) -> i64 {
        let v = q(2) * self.inner(a, b) / self.norm2(b);
        assert!(v.is_integer(), "non-integral Cartan integer");
        v.to_integer().try_into().expect("small Cartan integer")
    }

    pub fn reflect(&self, i: usize, r: &[i64]) -> Root {
        let c = self.cartan_integer(r, &self.simple_roots[i]);
        let mut out = r.to_vec();
        out[i] -= c;
        out
    }

    pub fn is_root(&self, r: &[i64]) -> bool {
        self.all_roots.iter().any(|x| x == r)
    }

    pub fn root_index(&self, r: &[i64]) -> Option<usize> {
        self.all_roots.iter().position(|x| x == r)
    }

    pub fn positive_index(&self, r: &[i64]) -> Option<usize> {
        self.positive_roots.iter().position(|x| x == r)
    }

    /// `(p, q)` with `p` maximal such that `β − pα ∈ Σ` and `q` maximal such that `β + qα ∈ Σ`.
    pub fn root_string(&self, alpha: &[i64], beta: &[i64]) -> Result<(usize, usize)> {
        if !self.is_root(alpha) || !self.is_root(beta) {
            return Err(Error::NotARoot(format!("{} or {}", root_label(alpha), root_label(beta))));
        }
        if alpha == beta || neg(alpha) == beta {
            return Err(Error::InvalidArgument("root string needs α ≠ ±β".into()));
        }
        let walk = |sign: i64| {
            let mut k = 0usize;
            loop {
                let next: Root = beta.iter().zip(alpha).map(|(b, a)| b + sign * (k as i64 + 1) * a).collect();
                if !self.is_root(&next) {
                    return k;
                }
                k += 1;
            }
        };
        Ok((walk(-1), walk(1)))
    }

    /// Long/short squared length ratio (1 for simply laced systems).
    pub fn length_ratio(&self) -> Q {
        let lens: Vec<Q> = self.positive_roots.iter().map(|r| self.norm2(r)).collect();
        let max = lens.iter().max().unwrap().clone();
        let min = lens.iter().min().unwrap().clone();
        max / min
    }

    /// Coroot `α^∨` in the basis of simple coroots; integral.
    pub fn coroot_coefficients(&self, a: &[i64]) -> Vec<i64> {
        let n = self.norm2(a);
        (0..self.rank)
            .map(|i| {
                let c = q(a[i]) * self.gram.get(i, i) / &n;
                assert!(c.is_integer());
                c.to_integer().try_into().unwrap()
            })
            .collect()
    }

    /// Permutations of `all_roots` induced by the Weyl group generated by the
    /// simple reflections with indices in `generators`. The identity comes first.
    pub fn weyl_group(&self, generators: &[usize]) -> Vec<Vec<usize>> {
        let n = self.all_roots.len();
        let identity: Vec<usize> = (0..n).collect();
        let gens: Vec<Vec<usize>> = generators
            .iter()
            .map(|&i| {
                self.all_roots
                    .iter()
                    .map(|r| self.root_index(&self.reflect(i, r)).expect("reflection permutes roots"))
                    .collect()
            })
            .collect();
        let mut seen = BTreeSet::new();
        seen.insert(identity.clone());
        let mut out = vec![identity.clone()];
        let mut frontier = vec![identity];
        while let Some(w) = frontier.pop() {
            for g in &gens {
                let composed: Vec<usize> = w.iter().map(|&k| g[k]).collect();
                if seen.insert(composed.clone()) {
                    out.push(composed.clone());
                    frontier.push(composed);
                }
            }
        }
        out
    }
}

/// Human-readable label such as `3a1+2a2` or `-a1-a2`.
pub fn root_label(r: &[i64]) -> String {
    let mut s = String::new();
    for (i, &c) in r.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if c < 0 {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        if c.abs() != 1 {
            s.push_str(&c.abs().to_string());
        }
        s.push_str(&format!("a{}", i + 1));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// Parses labels like `3a1+a2`, `-a1`, `2α1+α2`.
pub fn parse_root_label(label: &str, rank: usize) -> Result<Root> {
    let cleaned: String = label.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('α', "a");
    if cleaned.is_empty() {
        return Err(Error::Parse("empty root label".into()));
    }
    let mut root = vec![0i64; rank];
    let mut rest = cleaned.as_str();
    let mut first = true;
    while !rest.is_empty() {
        let mut sign = 1;
        if let Some(r) = rest.strip_prefix('+') {
            if first {
                return Err(Error::Parse(format!("bad root label {label}")));
            }
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        } else if !first {
            return Err(Error::Parse(format!("bad root label {label}")));
        }
        first = false;
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        rest = &rest[digits.len()..];
        let coeff: i64 = if digits.is_empty() { 1 } else { digits.parse().map_err(|_| Error::Parse(label.into()))? };
        rest = rest.strip_prefix('a').ok_or_else(|| Error::Parse(format!("bad root label {label}")))?;
        let idx: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        rest = &rest[idx.len()..];
        let i: usize = idx.parse().map_err(|_| Error::Parse(format!("bad root label {label}")))?;
        if i == 0 || i > rank {
            return Err(Error::Parse(format!("simple root index {i} out of range")));
        }
        root[i - 1] += sign * coeff;
    }
    Ok(root)
}

#[derive(Clone, Debug)]
pub struct ChevalleyConstants {
    /// `N_{α,β}` for every pair with `α + β` a root.
    pub pairs: BTreeMap<(Root, Root), i64>,
    /// `(p, q)` root strings for every pair with `α ≠ ±β`.
    pub root_strings: BTreeMap<(Root, Root), (usize, usize)>,
}

impl ChevalleyConstants {
    pub fn get(&self, a: &[i64], b: &[i64]) -> i64 {
        self.pairs.get(&(a.to_vec(), b.to_vec())).copied().unwrap_or(0)
    }
}

/// Sparse bracket table of the Chevalley basis `h₁,…,h_r, x_α (α ∈ all_roots)`.
/// Entry `[a][b]` lists `(c, coefficient)` with `[e_a, e_b] = Σ coefficient · e_c`.
pub type ChevalleyTable = Vec<Vec<Vec<(usize, i64)>>>;

pub fn chevalley_constants(rs: &RootSystem) -> ChevalleyConstants {
    let mut root_strings = BTreeMap::new();
    for a in &rs.all_roots {
        for b in &rs.all_roots {
            if a != b && *a != neg(b) {
                root_strings.insert((a.clone(), b.clone()), rs.root_string(a, b).unwrap());
            }
        }
    }
    // special pairs: 0 < α < β in the positive order, α + β a root
    let mut special: Vec<(usize, usize)> = Vec::new();
    for (i, a) in rs.positive_roots.iter().enumerate() {
        for (j, b) in rs.positive_roots.iter().enumerate().skip(i + 1) {
            if rs.is_root(&add(a, b)) {
                special.push((i, j));
            }
        }
    }
    // the extraspecial pair of each sum has the smallest α
    let mut extraspecial = BTreeSet::new();
    let mut seen_sums = BTreeSet::new();
    for &(i, j) in &special {
        let s = add(&rs.positive_roots[i], &rs.positive_roots[j]);
        if seen_sums.insert(s) {
            extraspecial.insert((i, j));
        }
    }
    let free: Vec<(usize, usize)> = special.iter().copied().filter(|p| !extraspecial.contains(p)).collect();
    for mask in 0u32..(1 << free.len()) {
        let mut signs = BTreeMap::new();
        for p in &extraspecial {
            signs.insert(*p, 1i64);
        }
        for (k, p) in free.iter().enumerate() {
            signs.insert(*p, if mask & (1 << k) != 0 { -1 } else { 1 });
        }
        let Some(pairs) = derive_all(rs, &signs, &root_strings) else {
            continue;
        };
        let consts = ChevalleyConstants { pairs, root_strings: root_strings.clone() };
        if jacobi_defect(rs, &chevalley_table(rs, &consts)).is_none() {
            return consts;
        }
    }
    panic!("no Jacobi-consistent sign assignment for {}", rs.kind);
}

fn derive_all(
    rs: &RootSystem,
    signs: &BTreeMap<(usize, usize), i64>,
    strings: &BTreeMap<(Root, Root), (usize, usize)>,
) -> Option<BTreeMap<(Root, Root), i64>> {
    let mut out = BTreeMap::new();
    for a in &rs.all_roots {
        for b in &rs.all_roots {
            if a == b || *a == neg(b) || !rs.is_root(&add(a, b)) {
                continue;
            }
            let v = structure_constant(rs, signs, strings, a, b)?;
            out.insert((a.clone(), b.clone()), v);
        }
    }
    Some(out)
}

fn structure_constant(
    rs: &RootSystem,
    signs: &BTreeMap<(usize, usize), i64>,
    strings: &BTreeMap<(Root, Root), (usize, usize)>,
    a: &[i64],
    b: &[i64],
) -> Option<i64> {
    let (pa, pb) = (is_positive(a), is_positive(b));
    if pa && pb {
        let i = rs.positive_index(a)?;
        let j = rs.positive_index(b)?;
        if i < j {
            let p = strings[&(a.to_vec(), b.to_vec())].0 as i64;
            return Some(signs[&(i, j)] * (p + 1));
        }
        return structure_constant(rs, signs, strings, b, a).map(|v| -v);
    }
    if !pa && !pb {
        return structure_constant(rs, signs, strings, &neg(a), &neg(b)).map(|v| -v);
    }
    // mixed signs: rotate within the zero-sum triple (a, b, c) to the same-sign pair
    let c = neg(&add(a, b));
    let (nc, na, nb) = (rs.norm2(&c), rs.norm2(a), rs.norm2(b));
    let value = if is_positive(&c) == pa {
        // N_{a,b}/(c,c) = N_{c,a}/(b,b)
        nc / nb * q(structure_constant(rs, signs, strings, &c, a)?)
    } else {
        // N_{a,b}/(c,c) = N_{b,c}/(a,a)
        nc / na * q(structure_constant(rs, signs, strings, b, &c)?)
    };
    if !value.is_integer() {
        return None;
    }
    value.to_integer().try_into().ok()
}

/// Index of `x_α` in the Chevalley basis.
pub fn chevalley_index(rs: &RootSystem, r: &[i64]) -> usize {
    rs.rank + rs.root_index(r).expect("root")
}

pub fn chevalley_table(rs: &RootSystem, consts: &ChevalleyConstants) -> ChevalleyTable {
    let r = rs.rank;
    let n = r + rs.all_roots.len();
    let mut table = vec![vec![Vec::new(); n]; n];
    for (ai, a) in rs.all_roots.iter().enumerate() {
        let xa = r + ai;
        for i in 0..r {
            let c = rs.cartan_integer(a, &rs.simple_roots[i]);
            if c != 0 {
                table[i][xa].push((xa, c));
                table[xa][i].push((xa, -c));
            }
        }
        for (bi, b) in rs.all_roots.iter().enumerate() {
            let xb = r + bi;
            if *b == neg(a) {
                for (i, &c) in rs.coroot_coefficients(a).iter().enumerate() {
                    if c != 0 {
                        table[xa][xb].push((i, c));
                    }
                }
            } else if let Some(si) = rs.root_index(&add(a, b)) {
                let nab = consts.get(a, b);
                if nab != 0 {
                    table[xa][xb].push((r + si, nab));
                }
            }
        }
    }
    table
}

/// First basis triple violating Jacobi, if any.
pub fn jacobi_defect(rs: &RootSystem, table: &ChevalleyTable) -> Option<(usize, usize, usize)> {
    let n = rs.rank + rs.all_roots.len();
    let bracket_vec = |v: &BTreeMap<usize, i64>, b: usize| {
        let mut out: BTreeMap<usize, i64> = BTreeMap::new();
        for (&k, &c) in v {
            for &(t, d) in &table[k][b] {
                *out.entry(t).or_default() += c * d;
            }
        }
        out
    };
    let single = |a: usize| {
        let mut m = BTreeMap::new();
        m.insert(a, 1i64);
        m
    };
    for a in 0..n {
        for b in 0..n {
            let ab = bracket_vec(&single(a), b);
            for c in 0..n {
                // [[a,b],c] + [[b,c],a] + [[c,a],b]
                let mut total: BTreeMap<usize, i64> = BTreeMap::new();
                for (k, v) in bracket_vec(&ab, c) {
                    *total.entry(k).or_default() += v;
                }
                for (k, v) in bracket_vec(&bracket_vec(&single(b), c), a) {
                    *total.entry(k).or_default() += v;
                }
                for (k, v) in bracket_vec(&bracket_vec(&single(c), a), b) {
                    *total.entry(k).or_default() += v;
                }
                if total.values().any(|&v| v != 0) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts_and_ordering() {
        let g2 = build_root_system(RootKind::G2);
        let labels: Vec<String> = g2.positive_roots.iter().map(|r| root_label(r)).collect();
        assert_eq!(labels, ["a1", "a2", "a1+a2", "2a1+a2", "3a1+a2", "3a1+2a2"]);
        assert_eq!(build_root_system(RootKind::A2).all_roots.len(), 6);
        assert_eq!(build_root_system(RootKind::B2).all_roots.len(), 8);
        assert_eq!(build_root_system(RootKind::A1).all_roots.len(), 2);
        assert_eq!(g2.length_ratio(), q(3));
        assert_eq!(build_root_system(RootKind::B2).length_ratio(), q(2));
    }

    #[test]
    fn labels_round_trip() {
        for l in ["a1", "-a2", "3a1+2a2", "-2a1-a2"] {
            assert_eq!(root_label(&parse_root_label(l, 2).unwrap()), l);
        }
        assert_eq!(parse_root_label("3α1+α2", 2).unwrap(), vec![3, 1]);
        assert!(parse_root_label("a3", 2).is_err());
        assert!(parse_root_label("+a1", 2).is_err());
        assert!(parse_root_label("b1", 2).is_err());
    }

    #[test]
    fn weyl_group_orders() {
        let g2 = build_root_system(RootKind::G2);
        assert_eq!(g2.weyl_group(&[0, 1]).len(), 12);
        assert_eq!(g2.weyl_group(&[0]).len(), 2);
        assert_eq!(build_root_system(RootKind::B2).weyl_group(&[0, 1]).len(), 8);
        assert_eq!(build_root_system(RootKind::A2).weyl_group(&[0, 1]).len(), 6);
    }

    #[test]
    fn g2_constants_consistent() {
        let g2 = build_root_system(RootKind::G2);
        let c = chevalley_constants(&g2);
        assert_eq!(c.get(&[1, 0], &[1, 1]).abs(), 2);
        assert_eq!(c.get(&[1, 0], &[2, 1]).abs(), 3);
        assert_eq!(c.get(&[1, 0], &[0, 1]), 1);
        assert!(jacobi_defect(&g2, &chevalley_table(&g2, &c)).is_none());
    }
}
