//! Dense exact matrices: Gaussian elimination over the fields, Smith normal
//! form over the integers, and cokernels over every shipped ring.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalars::{FieldScalar, GaussianRational, LocalizedInt, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (r, c): (usize, usize)) -> &S {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from row vectors; all rows must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<S>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| S::from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn column_vector(v: Vec<S>) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn row(&self, r: usize) -> Vec<S> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].star())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let v = out[(i, j)].clone() + a.clone() * b.clone();
                        out[(i, j)] = v;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(S::zero(), |acc, c| acc + self[(r, c)].clone() * v[c].clone())
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() + other[(r, c)].clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() - other[(r, c)].clone()
        })
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| s.clone() * self[(r, c)].clone())
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let (r0, c0) = (rows.start, cols.start);
        Self::from_fn(rows.len(), cols.len(), |r, c| self[(r0 + r, c0 + c)].clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)].clone();
            }
        }
    }

    pub fn hstack(blocks: &[Self]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut c0 = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            out.set_block(0, c0, b);
            c0 += b.cols;
        }
        out
    }

    pub fn vstack(cols: usize, blocks: &[Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut r0 = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            out.set_block(r0, 0, b);
            r0 += b.rows;
        }
        out
    }

    pub fn block_diagonal(blocks: &[Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn to_field(&self) -> Matrix<S::Field> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Scalar::to_field).collect(),
        }
    }

    pub fn from_field(m: &Matrix<S::Field>) -> Option<Self> {
        let data = m.data.iter().map(S::from_field).collect::<Option<Vec<_>>>()?;
        Some(Matrix {
            rows: m.rows,
            cols: m.cols,
            data,
        })
    }

    /// Inverse over the ring itself (not merely over its fraction field).
    pub fn ring_inverse(&self) -> Option<Self> {
        let inv = self.to_field().inverse()?;
        Self::from_field(&inv)
    }

    /// A random matrix invertible over every ring: a product of elementary
    /// transvections with small integer multipliers and a signed permutation.
    pub fn random_unimodular<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut m = Self::identity(n);
        if n == 0 {
            return m;
        }
        for _ in 0..3 * n {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i == j {
                continue;
            }
            let k = S::from_i64(rng.gen_range(-2..=2));
            for c in 0..n {
                let v = m[(i, c)].clone() + k.clone() * m[(j, c)].clone();
                m[(i, c)] = v;
            }
        }
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            for c in 0..n {
                m.data.swap(i * n + c, j * n + c);
            }
        }
        if rng.gen_bool(0.5) {
            for c in 0..n {
                m[(0, c)] = -m[(0, c)].clone();
            }
        }
        m
    }
}

/// Reduced row echelon form together with its pivot columns.
pub struct Echelon<F> {
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: FieldScalar> Matrix<F> {
    pub fn rref(&self) -> Echelon<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].inv().expect("nonzero pivot");
            for c in col..m.cols {
                let v = m[(row, c)].clone() * inv.clone();
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for c in col..m.cols {
                        let v = m[(r, c)].clone() - factor.clone() * m[(row, c)].clone();
                        m[(r, c)] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = Self::hstack(&[self.clone(), Self::identity(n)]);
        let e = aug.rref();
        if e.pivots.len() < n || e.pivots[n - 1] >= n {
            return None;
        }
        Some(e.reduced.submatrix(0..n, n..2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Basis of the null space, as the columns of the returned matrix.
    pub fn kernel(&self) -> Self {
        let e = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        let mut k = Self::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k[(f, j)] = F::one();
            for (i, &p) in e.pivots.iter().enumerate() {
                k[(p, j)] = -e.reduced[(i, f)].clone();
            }
        }
        k
    }

    /// Basis of the column space, chosen among the original columns.
    pub fn column_space(&self) -> Self {
        let e = self.rref();
        Self::from_fn(self.rows, e.pivots.len(), |r, j| self[(r, e.pivots[j])].clone())
    }

    /// Some `x` with `self · x = b`, if one exists.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        assert_eq!(self.rows, b.rows);
        let aug = Self::hstack(&[self.clone(), b.clone()]);
        let e = aug.rref();
        if e.pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, b.cols);
        for (i, &p) in e.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = e.reduced[(i, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }
}

/// `u · a · v = diag(d)` with `u`, `v` unimodular and `d[i] | d[i+1]`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub u: Matrix<BigInt>,
    pub v: Matrix<BigInt>,
}

pub fn smith_normal_form(a: &Matrix<BigInt>) -> Smith {
    let (n, m) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = Matrix::<BigInt>::identity(n);
    let mut v = Matrix::<BigInt>::identity(m);
    let mut t = 0;
    while t < n.min(m) {
        let Some((pr, pc)) = min_abs_entry(&d, t) else {
            break;
        };
        row_swap(&mut d, &mut u, t, pr);
        col_swap(&mut d, &mut v, t, pc);
        loop {
            let mut dirty = false;
            for r in t + 1..n {
                if d[(r, t)].is_zero() {
                    continue;
                }
                let q = d[(r, t)].div_floor(&d[(t, t)]);
                row_axpy(&mut d, &mut u, r, t, &q);
                if !d[(r, t)].is_zero() {
                    row_swap(&mut d, &mut u, t, r);
                    dirty = true;
                }
            }
            for c in t + 1..m {
                if d[(t, c)].is_zero() {
                    continue;
                }
                let q = d[(t, c)].div_floor(&d[(t, t)]);
                col_axpy(&mut d, &mut v, c, t, &q);
                if !d[(t, c)].is_zero() {
                    col_swap(&mut d, &mut v, t, c);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide the remaining block
            let bad = (t + 1..n)
                .flat_map(|r| (t + 1..m).map(move |c| (r, c)))
                .find(|&(r, c)| !d[(r, c)].is_multiple_of(&d[(t, t)]));
            match bad {
                Some((r, _)) => row_axpy(&mut d, &mut u, t, r, &-BigInt::one()),
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            for c in 0..m {
                d[(t, c)] = -d[(t, c)].clone();
            }
            for c in 0..n {
                u[(t, c)] = -u[(t, c)].clone();
            }
        }
        t += 1;
    }
    let diagonal = (0..n.min(m)).map(|i| d[(i, i)].clone()).collect();
    Smith { diagonal, u, v }
}

fn min_abs_entry(d: &Matrix<BigInt>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..d.rows {
        for c in t..d.cols {
            if d[(r, c)].is_zero() {
                continue;
            }
            if best.is_none_or(|(br, bc)| d[(r, c)].abs() < d[(br, bc)].abs()) {
                best = Some((r, c));
            }
        }
    }
    best
}

fn row_swap(d: &mut Matrix<BigInt>, u: &mut Matrix<BigInt>, a: usize, b: usize) {
    d.swap_rows_any(a, b);
    u.swap_rows_any(a, b);
}

fn col_swap(d: &mut Matrix<BigInt>, v: &mut Matrix<BigInt>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in 0..d.rows {
        d.data.swap(r * d.cols + a, r * d.cols + b);
    }
    for r in 0..v.rows {
        v.data.swap(r * v.cols + a, r * v.cols + b);
    }
}

/// row[target] -= q · row[source]
fn row_axpy(d: &mut Matrix<BigInt>, u: &mut Matrix<BigInt>, target: usize, source: usize, q: &BigInt) {
    for c in 0..d.cols {
        let s = d[(source, c)].clone();
        d[(target, c)] -= q * s;
    }
    for c in 0..u.cols {
        let s = u[(source, c)].clone();
        u[(target, c)] -= q * s;
    }
}

/// col[target] -= q · col[source]
fn col_axpy(d: &mut Matrix<BigInt>, v: &mut Matrix<BigInt>, target: usize, source: usize, q: &BigInt) {
    for r in 0..d.rows {
        let s = d[(r, source)].clone();
        d[(r, target)] -= q * s;
    }
    for r in 0..v.rows {
        let s = v[(r, source)].clone();
        v[(r, target)] -= q * s;
    }
}

impl<S> Matrix<S> {
    fn swap_rows_any(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }
}

/// `R^n / image(d)` for an `n × m` relation matrix `d`.
///
/// The quotient is `⊕ R/(torsion[i]) ⊕ R^free_rank`; `projection` has one row
/// per summand (torsion summands first) and sends a generator vector to its
/// coordinates in the quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient<S: Scalar> {
    pub free_rank: usize,
    pub torsion: Vec<S>,
    pub projection: Matrix<S>,
}

impl<S: Scalar> Quotient<S> {
    pub fn summands(&self) -> usize {
        self.free_rank + self.torsion.len()
    }
}

/// Rings over which cokernels of finite matrices can be computed exactly.
pub trait Cokernel: Scalar {
    fn cokernel(d: &Matrix<Self>) -> Quotient<Self>;
}

fn field_cokernel<F: FieldScalar>(d: &Matrix<F>) -> Quotient<F> {
    // rows of the left kernel cut out exactly the column span of d
    let left = d.transpose().kernel().transpose();
    Quotient {
        free_rank: left.rows(),
        torsion: Vec::new(),
        projection: left,
    }
}

impl Cokernel for BigRational {
    fn cokernel(d: &Matrix<Self>) -> Quotient<Self> {
        field_cokernel(d)
    }
}

impl Cokernel for GaussianRational {
    fn cokernel(d: &Matrix<Self>) -> Quotient<Self> {
        field_cokernel(d)
    }
}

fn smith_cokernel(d: &Matrix<BigInt>, is_unit: impl Fn(&BigInt) -> bool) -> (Vec<usize>, usize, Smith) {
    let smith = smith_normal_form(d);
    let n = d.rows();
    let mut torsion_rows = Vec::new();
    let mut free_from = smith.diagonal.len().min(n);
    for (i, s) in smith.diagonal.iter().enumerate() {
        if s.is_zero() {
            free_from = i;
            break;
        }
        if !is_unit(s) {
            torsion_rows.push(i);
        }
    }
    (torsion_rows, free_from, smith)
}

impl Cokernel for BigInt {
    fn cokernel(d: &Matrix<Self>) -> Quotient<Self> {
        let (torsion_rows, free_from, smith) = smith_cokernel(d, |s| s.is_one());
        let n = d.rows();
        let rows: Vec<usize> = torsion_rows.iter().copied().chain(free_from..n).collect();
        let projection = Matrix::from_fn(rows.len(), n, |r, c| smith.u[(rows[r], c)].clone());
        Quotient {
            free_rank: n - free_from,
            torsion: torsion_rows.iter().map(|&i| smith.diagonal[i].clone()).collect(),
            projection,
        }
    }
}

impl<const P: u64> Cokernel for LocalizedInt<P> {
    fn cokernel(d: &Matrix<Self>) -> Quotient<Self> {
        // p is a unit: clear denominators, work over Z, then drop p-power factors
        let shift = d.entries().iter().map(LocalizedInt::exponent).max().unwrap_or(0);
        let p = BigInt::from(P);
        let scaled = Matrix::from_fn(d.rows(), d.cols(), |r, c| {
            let x = &d[(r, c)];
            x.numerator() * num_traits::pow(p.clone(), (shift - x.exponent()) as usize)
        });
        let strip = |s: &BigInt| {
            let mut s = s.abs();
            while !s.is_zero() && s.is_multiple_of(&p) {
                s /= &p;
            }
            s
        };
        let (torsion_rows, free_from, smith) = smith_cokernel(&scaled, |s| strip(s).is_one());
        let n = d.rows();
        let rows: Vec<usize> = torsion_rows.iter().copied().chain(free_from..n).collect();
        let projection = Matrix::from_fn(rows.len(), n, |r, c| {
            LocalizedInt::new(smith.u[(rows[r], c)].clone(), 0)
        });
        Quotient {
            free_rank: n - free_from,
            torsion: torsion_rows
                .iter()
                .map(|&i| LocalizedInt::new(strip(&smith.diagonal[i]), 0))
                .collect(),
            projection,
        }
    }
}
