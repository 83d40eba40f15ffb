//! Square matrices over an arbitrary commutative ring, division-free
//! characteristic polynomials (Berkowitz), and exact linear algebra over
//! finite fields.

use std::sync::Arc;

use crate::field::{Elem, FqField};
use crate::ring::Ring;

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Mat<R> {
    n: usize,
    data: Vec<R>,
}

impl<R: Ring> Mat<R> {
    pub fn from_rows(rows: Vec<Vec<R>>) -> Mat<R> {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Mat {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn zero(n: usize, sample: &R) -> Mat<R> {
        Mat {
            n,
            data: vec![sample.zero_like(); n * n],
        }
    }

    pub fn identity(n: usize, sample: &R) -> Mat<R> {
        let mut m = Mat::zero(n, sample);
        for i in 0..n {
            *m.at_mut(i, i) = sample.one_like();
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.n + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut R {
        &mut self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn sample(&self) -> &R {
        &self.data[0]
    }

    pub fn add(&self, rhs: &Mat<R>) -> Mat<R> {
        assert_eq!(self.n, rhs.n);
        Mat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Mat<R>) -> Mat<R> {
        assert_eq!(self.n, rhs.n);
        Mat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Mat<R> {
        Mat {
            n: self.n,
            data: self.data.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn mul(&self, rhs: &Mat<R>) -> Mat<R> {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let z = self.data[0].zero_like();
        let mut out = vec![z; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = out[i * n + j].add(&a.mul(rhs.at(k, j)));
                }
            }
        }
        Mat { n, data: out }
    }

    pub fn scale(&self, c: &R) -> Mat<R> {
        Mat {
            n: self.n,
            data: self.data.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Mat<R> {
        let mut r = Mat::identity(self.n, &self.data[0]);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    pub fn trace(&self) -> R {
        let mut t = self.data[0].zero_like();
        for i in 0..self.n {
            t = t.add(self.at(i, i));
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        let one = self.data[0].one_like();
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    if *self.at(i, j) != one {
                        return false;
                    }
                } else if !self.at(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_scalar(&self) -> bool {
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && !self.at(i, j).is_zero() {
                    return false;
                }
                if i > 0 && i == j && self.at(i, j) != self.at(0, 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Characteristic polynomial `det(X*Id - M)` by the Berkowitz algorithm:
    /// division-free, valid over any commutative ring. Coefficients returned
    /// constant term first; the leading coefficient is 1.
    pub fn charpoly(&self) -> Vec<R> {
        let n = self.n;
        let zero = self.data[0].zero_like();
        let one = self.data[0].one_like();
        // c: leading-first coefficient vector of char(M_r), starting with [1].
        let mut c = vec![one.clone()];
        for r in 1..=n {
            // M_r = [[A, col],[row, a]] with A the (r-1)x(r-1) leading block.
            let a = self.at(r - 1, r - 1).clone();
            // toeplitz column t_0..t_r
            let mut t = Vec::with_capacity(r + 1);
            t.push(one.clone());
            t.push(a.neg());
            if r >= 2 {
                // iteratively v = A^k * col, k = 0..r-2
                let mut v: Vec<R> = (0..r - 1).map(|i| self.at(i, r - 1).clone()).collect();
                for _k in 2..=r {
                    // t_k = -(row . v)
                    let mut dot = zero.clone();
                    for (j, x) in v.iter().enumerate() {
                        dot = dot.add(&self.at(r - 1, j).mul(x));
                    }
                    t.push(dot.neg());
                    // v = A * v
                    let mut nv = vec![zero.clone(); r - 1];
                    for i in 0..r - 1 {
                        for j in 0..r - 1 {
                            nv[i] = nv[i].add(&self.at(i, j).mul(&v[j]));
                        }
                    }
                    v = nv;
                }
            }
            // c_new[i] = sum_j t_{i-j} c[j]
            let mut cn = vec![zero.clone(); r + 1];
            for (i, cni) in cn.iter_mut().enumerate() {
                for (j, cj) in c.iter().enumerate() {
                    if i >= j && i - j <= r {
                        *cni = cni.add(&t[i - j].mul(cj));
                    }
                }
            }
            c = cn;
        }
        c.reverse();
        c
    }

    /// Determinant via the charpoly constant term.
    pub fn det(&self) -> R {
        let cp = self.charpoly();
        let c0 = cp[0].clone();
        if self.n % 2 == 0 {
            c0
        } else {
            c0.neg()
        }
    }

    /// Inverse by Gauss-Jordan with unit pivots. Works over fields and over
    /// local rings (where an invertible matrix always offers a unit pivot).
    pub fn inverse(&self) -> Option<Mat<R>> {
        let n = self.n;
        let mut a = self.clone();
        let mut b = Mat::identity(n, &self.data[0]);
        for col in 0..n {
            let pivot_row = (col..n).find_map(|r| a.at(r, col).try_inv().map(|inv| (r, inv)))?;
            let (r, pinv) = pivot_row;
            for j in 0..n {
                a.data.swap(col * n + j, r * n + j);
                b.data.swap(col * n + j, r * n + j);
            }
            for j in 0..n {
                *a.at_mut(col, j) = a.at(col, j).mul(&pinv);
                *b.at_mut(col, j) = b.at(col, j).mul(&pinv);
            }
            for i in 0..n {
                if i == col || a.at(i, col).is_zero() {
                    continue;
                }
                let f = a.at(i, col).clone();
                for j in 0..n {
                    let x = a.at(col, j).mul(&f);
                    *a.at_mut(i, j) = a.at(i, j).sub(&x);
                    let y = b.at(col, j).mul(&f);
                    *b.at_mut(i, j) = b.at(i, j).sub(&y);
                }
            }
        }
        Some(b)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Mat<S> {
        Mat {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }
}

/// Canonical byte encodings, used for hashing in group closures.
pub trait ByteEncode {
    fn encode_into(&self, out: &mut Vec<u8>);
}

impl ByteEncode for Elem {
    fn encode_into(&self, out: &mut Vec<u8>) {
        self.encode(out);
    }
}

impl<R: ByteEncode> Mat<R> {
    /// Row-major encoding of all entries.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for e in &self.data {
            e.encode_into(&mut out);
        }
        out
    }
}

/// Incremental row space over a finite field, kept in reduced echelon form.
/// Used for kernels, spans, ring-generation closures and submodule lattices.
#[derive(Clone, Debug)]
pub struct RowSpace {
    #[allow(dead_code)]
    field: Arc<FqField>,
    cols: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(field: &Arc<FqField>, cols: usize) -> RowSpace {
        RowSpace {
            field: field.clone(),
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    fn reduce(&self, v: &mut [Elem]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for j in p..self.cols {
                v[j] = v[j].sub(&f.mul(&row[j]));
            }
        }
    }

    /// Insert a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, mut v: Vec<Elem>) -> bool {
        assert_eq!(v.len(), self.cols);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().unwrap();
        for c in v.iter_mut() {
            *c = c.mul(&inv);
        }
        // back-substitute into existing rows
        for (row, &rp) in self.rows.iter_mut().zip(&self.pivots) {
            debug_assert!(rp != p);
            if !row[p].is_zero() {
                let f = row[p].clone();
                for j in 0..self.cols {
                    row[j] = row[j].sub(&f.mul(&v[j]));
                }
            }
        }
        let pos = self
            .pivots
            .iter()
            .position(|&q| q > p)
            .unwrap_or(self.rows.len());
        self.rows.insert(pos, v);
        self.pivots.insert(pos, p);
        true
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|c| c.is_zero())
    }

    /// Structural equality of spans (both are in reduced echelon form).
    pub fn same_space(&self, other: &RowSpace) -> bool {
        self.pivots == other.pivots && self.rows == other.rows
    }
}

/// Solve `M x = b` over a field, where `rows` are the rows of `M`
/// (dimensions `rows.len() x cols`). Returns one solution if any.
pub fn solve(field: &Arc<FqField>, rows: &[Vec<Elem>], b: &[Elem]) -> Option<Vec<Elem>> {
    let m = rows.len();
    assert_eq!(b.len(), m);
    let cols = if m == 0 { 0 } else { rows[0].len() };
    // augmented elimination
    let mut a: Vec<Vec<Elem>> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut prow = 0usize;
    for col in 0..cols {
        let Some(r) = (prow..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(prow, r);
        let inv = a[prow][col].inv().unwrap();
        for j in col..=cols {
            a[prow][j] = a[prow][j].mul(&inv);
        }
        for i in 0..m {
            if i != prow && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..=cols {
                    let x = a[prow][j].mul(&f);
                    a[i][j] = a[i][j].sub(&x);
                }
            }
        }
        pivots.push((prow, col));
        prow += 1;
        if prow == m {
            break;
        }
    }
    // consistency
    for row in a.iter().skip(prow) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![field.zero(); cols];
    for &(r, c) in &pivots {
        x[c] = a[r][cols].clone();
    }
    Some(x)
}

/// Basis of the null space of `M` (rows given), i.e. solutions of `M x = 0`.
pub fn null_space(field: &Arc<FqField>, rows: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let m = rows.len();
    if m == 0 {
        return Vec::new();
    }
    let cols = rows[0].len();
    let mut a = rows.to_vec();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut prow = 0usize;
    for col in 0..cols {
        let Some(r) = (prow..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(prow, r);
        let inv = a[prow][col].inv().unwrap();
        for j in col..cols {
            a[prow][j] = a[prow][j].mul(&inv);
        }
        for i in 0..m {
            if i != prow && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..cols {
                    let x = a[prow][j].mul(&f);
                    a[i][j] = a[i][j].sub(&x);
                }
            }
        }
        pivot_col_of_row.push(col);
        prow += 1;
        if prow == m {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![field.zero(); cols];
        v[fc] = field.one();
        for (r, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = a[r][fc].neg();
        }
        basis.push(v);
    }
    basis
}
