//! Exact dense linear algebra: row reduction, kernels, subspaces.
//!
//! All rank decisions are made by exact Gauss-Jordan elimination over the
//! scalar field, so there are no tolerances anywhere in the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Scalar, Q};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Builds a matrix from row vectors. An empty list gives a `0 × cols` matrix.
    pub fn from_rows(rows: &[Vec<F>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Mat { rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<F>], rows: usize) -> Self {
        Self::from_rows(cols, rows).transpose()
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn add(&self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F) -> Mat<F> {
        let data = self.data.iter().map(|a| a.clone() * c.clone()).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Mat<F>, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = F::one() / self.get(r, c).clone();
            for j in c..cols {
                let v = self.get(r, j).clone() * inv.clone();
                self.set(r, j, v);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let rv = self.get(r, j);
                    if rv.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j).clone() - f.clone() * rv.clone();
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `A x = b`, returning one solution if the system is consistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat<F>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// True iff the symmetric matrix is positive definite (all pivots of an
    /// unpivoted elimination are positive). Only meaningful over ordered fields,
    /// so it is provided for rationals only via [`is_positive_definite`].
    fn leading_pivots(&self) -> Option<Vec<F>> {
        let n = self.rows;
        let mut m = self.clone();
        let mut pivots = Vec::with_capacity(n);
        for k in 0..n {
            let p = m.get(k, k).clone();
            if p.is_zero() {
                return None;
            }
            for i in k + 1..n {
                let f = m.get(i, k).clone() / p.clone();
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = m.get(i, j).clone() - f.clone() * m.get(k, j).clone();
                    m.set(i, j, v);
                }
            }
            pivots.push(p);
        }
        Some(pivots)
    }

    pub fn lift<G: Scalar>(&self) -> Mat<G>
    where
        F: AsRational,
    {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| G::from_rational(x.as_rational())).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Mat<F> {
        let mut out = Mat::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

/// Scalars that are literally rationals (used to lift model data into an extension field).
pub trait AsRational {
    fn as_rational(&self) -> &Q;
}

impl AsRational for Q {
    fn as_rational(&self) -> &Q {
        self
    }
}

pub fn is_positive_definite(m: &Mat<Q>) -> bool {
    m.nrows() == m.ncols() && m.leading_pivots().is_some_and(|p| p.iter().all(|x| x.is_positive()))
}

pub fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            acc + x.clone() * y.clone()
        }
    })
}

pub fn add_scaled<F: Scalar>(acc: &mut [F], c: &F, v: &[F]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = a.clone() + c.clone() * x.clone();
        }
    }
}

pub fn scaled<F: Scalar>(c: &F, v: &[F]) -> Vec<F> {
    v.iter().map(|x| c.clone() * x.clone()).collect()
}

pub fn sub_vec<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn is_zero_vec<F: Scalar>(v: &[F]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn unit<F: Scalar>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

pub fn lift_vec<F: Scalar>(v: &[Q]) -> Vec<F> {
    v.iter().map(F::from_rational).collect()
}

/// `xᵀ G y` for a symmetric bilinear form `G`.
pub fn bilinear<F: Scalar>(g: &Mat<F>, x: &[F], y: &[F]) -> F {
    dot(x, &g.mul_vec(y))
}

/// A linear subspace of `F^n`, stored as a reduced row echelon basis so that
/// equal subspaces have identical representations.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F = Q> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Scalar> Subspace<F> {
    pub fn span(ambient: usize, vectors: &[Vec<F>]) -> Self {
        let m = Mat::from_rows(vectors, ambient);
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { ambient, basis, pivots }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let basis: Vec<Vec<F>> = (0..ambient).map(|i| unit(ambient, i)).collect();
        Subspace { ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is not in the subspace.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        assert_eq!(v.len(), self.ambient, "vector has wrong length");
        let coords: Vec<F> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (c, b) in coords.iter().zip(&self.basis) {
            add_scaled(&mut rest, &-c.clone(), b);
        }
        is_zero_vec(&rest).then_some(coords)
    }

    pub fn contains_vector(&self, v: &[F]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains(&self, other: &Subspace<F>) -> bool {
        other.basis.iter().all(|v| self.contains_vector(v))
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &vs)
    }

    pub fn sum_all<'a>(ambient: usize, parts: impl IntoIterator<Item = &'a Subspace<F>>) -> Subspace<F> {
        let mut vs = Vec::new();
        for p in parts {
            vs.extend(p.basis.iter().cloned());
        }
        Subspace::span(ambient, &vs)
    }

    pub fn intersect(&self, other: &Subspace<F>) -> Subspace<F> {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        // Σ a_i u_i − Σ b_j w_j = 0
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|w| w.iter().map(|x| -x.clone()).collect()));
        let m = Mat::from_cols(&cols, self.ambient);
        let vectors: Vec<Vec<F>> = m
            .kernel()
            .into_iter()
            .map(|k| {
                let mut v = vec![F::zero(); self.ambient];
                for (c, u) in k.iter().zip(&self.basis) {
                    add_scaled(&mut v, c, u);
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, &vectors)
    }

    /// Image under a linear map given as a matrix acting on column vectors.
    pub fn image(&self, map: &Mat<F>) -> Subspace<F> {
        let vs: Vec<Vec<F>> = self.basis.iter().map(|v| map.mul_vec(v)).collect();
        Subspace::span(map.nrows(), &vs)
    }

    /// `self ⊖ inner`: vectors of `self` orthogonal to `inner` under the form `gram`.
    pub fn orth_complement(&self, inner: &Subspace<F>, gram: &Mat<F>) -> Subspace<F> {
        if inner.is_zero() {
            return self.clone();
        }
        let gv: Vec<Vec<F>> = inner.basis.iter().map(|v| gram.mul_vec(v)).collect();
        let mut m = Mat::zeros(gv.len(), self.dim());
        for (i, g) in gv.iter().enumerate() {
            for (j, w) in self.basis.iter().enumerate() {
                m.set(i, j, dot(w, g));
            }
        }
        let vectors: Vec<Vec<F>> = m.kernel().into_iter().map(|k| self.combine(&k)).collect();
        Subspace::span(self.ambient, &vectors)
    }

    /// Orthogonal projection of `x` onto the subspace under `gram`.
    pub fn project(&self, x: &[F], gram: &Mat<F>) -> Vec<F> {
        if self.is_zero() {
            return vec![F::zero(); self.ambient];
        }
        let gb: Vec<Vec<F>> = self.basis.iter().map(|v| gram.mul_vec(v)).collect();
        let n = self.dim();
        let mut g = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g.set(i, j, dot(&self.basis[i], &gb[j]));
            }
        }
        let rhs: Vec<F> = gb.iter().map(|v| dot(v, x)).collect();
        let c = g.solve(&rhs).expect("form must be nondegenerate on the subspace");
        self.combine(&c)
    }

    /// Orthogonal projection of a whole subspace.
    pub fn project_subspace(&self, other: &Subspace<F>, gram: &Mat<F>) -> Subspace<F> {
        let vs: Vec<Vec<F>> = other.basis.iter().map(|v| self.project(v, gram)).collect();
        Subspace::span(self.ambient, &vs)
    }

    pub fn combine(&self, coeffs: &[F]) -> Vec<F> {
        let mut v = vec![F::zero(); self.ambient];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            add_scaled(&mut v, c, b);
        }
        v
    }

    pub fn lift<G: Scalar>(&self) -> Subspace<G>
    where
        F: AsRational,
    {
        Subspace {
            ambient: self.ambient,
            basis: self.basis.iter().map(|v| v.iter().map(|x| G::from_rational(x.as_rational())).collect()).collect(),
            pivots: self.pivots.clone(),
        }
    }
}

/// Characteristic polynomial `det(xI − A)` by Faddeev-LeVerrier, coefficients
/// from the constant term upward (monic, degree `n`).
pub fn characteristic_polynomial(a: &Mat<Q>) -> Vec<Q> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut m = Mat::<Q>::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = a.mul(&m);
        for i in 0..n {
            let v = next.get(i, i).clone() + coeffs[n - k + 1].clone();
            next.set(i, i, v);
        }
        m = next;
        let t = a.mul(&m).trace();
        coeffs[n - k] = -t / Q::from_integer(BigInt::from(k));
    }
    coeffs
}

/// Rational roots of a polynomial with rational coefficients (lowest degree
/// first), with multiplicities.
pub fn rational_roots(poly: &[Q]) -> Vec<(Q, usize)> {
    let mut p: Vec<Q> = poly.to_vec();
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    let mut roots = Vec::new();
    let zero_mult = p.iter().take_while(|c| c.is_zero()).count();
    if zero_mult > 0 {
        roots.push((Q::zero(), zero_mult));
        p.drain(..zero_mult);
    }
    if p.len() <= 1 {
        return roots;
    }
    // clear denominators
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
    let a0 = ints[0].abs();
    let an = ints.last().unwrap().abs();
    let mut candidates = Vec::new();
    for num in divisors(&a0) {
        for den in divisors(&an) {
            let r = Q::new(num.clone(), den.clone());
            candidates.push(r.clone());
            candidates.push(-r);
        }
    }
    candidates.sort();
    candidates.dedup();
    for r in candidates {
        let mut mult = 0;
        while p.len() > 1 && eval_poly(&p, &r).is_zero() {
            p = deflate(&p, &r);
            mult += 1;
        }
        if mult > 0 {
            roots.push((r, mult));
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    roots
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n: u64 = n.try_into().expect("coefficient too large for rational root search");
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out
}

fn eval_poly(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

/// Divides by `(x − r)`, assuming `r` is a root.
fn deflate(p: &[Q], r: &Q) -> Vec<Q> {
    let n = p.len() - 1;
    let mut out = vec![Q::zero(); n];
    let mut carry = Q::zero();
    for i in (0..=n).rev() {
        let c = &p[i] + &carry * r;
        if i > 0 {
            out[i - 1] = c.clone();
        }
        carry = c;
    }
    out
}

/// Eigenvalues of a matrix that is diagonalizable over `Q`, with the
/// dimensions of the eigenspaces. Returns `None` if the characteristic
/// polynomial does not split over `Q` or the matrix is not diagonalizable.
pub fn rational_spectrum(a: &Mat<Q>) -> Option<Vec<(Q, usize)>> {
    let n = a.nrows();
    if n == 0 {
        return Some(Vec::new());
    }
    let roots = rational_roots(&characteristic_polynomial(a));
    let total: usize = roots.iter().map(|r| r.1).sum();
    if total != n {
        return None;
    }
    let mut out = Vec::new();
    for (lambda, mult) in roots {
        let shifted = a.sub(&Mat::identity(n).scale(&lambda));
        let geo = n - shifted.rank();
        if geo != mult {
            return None;
        }
        out.push((lambda, mult));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qf};

    fn m(rows: &[&[i64]]) -> Mat<Q> {
        let cols = rows[0].len();
        let rs: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Mat::from_rows(&rs, cols)
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(is_zero_vec(&a.mul_vec(&k[0])));
    }

    #[test]
    fn subspace_ops() {
        let u = Subspace::span(3, &[vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]);
        let w = Subspace::span(3, &[vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]]);
        let i = u.intersect(&w);
        assert_eq!(i, Subspace::span(3, &[vec![q(0), q(5), q(0)]]));
        assert_eq!(u.sum(&w).dim(), 3);
        let g = Mat::identity(3);
        let c = Subspace::<Q>::full(3).orth_complement(&u, &g);
        assert_eq!(c, Subspace::span(3, &[vec![q(0), q(0), q(1)]]));
        assert_eq!(u.project(&[q(1), q(2), q(3)], &g), vec![q(1), q(2), q(0)]);
    }

    #[test]
    fn spectrum_of_diagonalizable() {
        let a = m(&[&[2, 1], &[1, 2]]);
        let s = rational_spectrum(&a).unwrap();
        assert_eq!(s, vec![(q(1), 1), (q(3), 1)]);
        let nil = m(&[&[0, 1], &[0, 0]]);
        assert!(rational_spectrum(&nil).is_none());
        let rot = m(&[&[0, -1], &[1, 0]]);
        assert!(rational_spectrum(&rot).is_none());
        let half = Mat::from_rows(&[vec![qf(1, 2), q(0)], vec![q(0), qf(-3, 2)]], 2);
        assert_eq!(rational_spectrum(&half).unwrap(), vec![(qf(-3, 2), 1), (qf(1, 2), 1)]);
    }

    #[test]
    fn positive_definite() {
        assert!(is_positive_definite(&m(&[&[2, 1], &[1, 2]])));
        assert!(!is_positive_definite(&m(&[&[1, 2], &[2, 1]])));
    }
}
