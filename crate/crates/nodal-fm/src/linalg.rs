//! Exact linear algebra over the rationals.
//!
//! Everything here is exact: a [`Matrix`] holds [`Q`] entries and all rank
//! and kernel computations are plain Gaussian elimination without any
//! floating point. Large sparse homogeneous systems (such as the
//! intertwiner equations `S X = X' S`) go through [`SparseEchelon`].

use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::cmp::Reverse;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub type Q = BigRational;

/// Shorthand for an integer rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`. Panics on a zero denominator.
pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
}

/// Dense row-major matrix with rational entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_rows(v).expect("ragged literal")
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Q>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
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

    pub fn data(&self) -> &[Q] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Q) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: usize) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m.data[r * m.cols + j] * &inv;
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let sub = &f * &m.data[r * m.cols + j];
                    if !sub.is_zero() {
                        m.data[i * m.cols + j] -= sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right kernel `{v : A v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Q::zero(); self.cols];
            v[f] = Q::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, f)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `A x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Q]) -> Result<Option<Vec<Q>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Dimension("right-hand side length".into()));
        }
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Q::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && !self.det().is_zero()
    }

    /// Fraction-free (Bareiss) elimination on the matrix with each row scaled to integers.
    pub fn det(&self) -> Q {
        assert!(self.is_square());
        let n = self.rows;
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
                scale *= &l;
                row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
            })
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                m.swap(p, c);
                sign = -sign;
            }
            for i in c + 1..n {
                for j in c + 1..n {
                    let v = (&m[c][c] * &m[i][j] - &m[i][c] * &m[c][j]) / &prev;
                    m[i][j] = v;
                }
            }
            prev = m[c][c].clone();
        }
        Q::new(sign * prev, scale)
    }

    /// Characteristic polynomial `det(tI - A)`, coefficients from the constant term up.
    pub fn charpoly(&self) -> Vec<Q> {
        assert!(self.is_square());
        let n = self.rows;
        // Faddeev-LeVerrier; exact in characteristic zero.
        let mut coeffs = vec![Q::zero(); n + 1];
        coeffs[n] = Q::one();
        let mut mk = Matrix::zeros(n, n);
        for k in 1..=n {
            let mut next = self * &mk;
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            mk = next;
            let am = self * &mk;
            coeffs[n - k] = -am.trace() / q(k as i64);
        }
        coeffs
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix product dimensions")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&q(-1))
    }
}

/// Rank of the column span of a list of vectors of equal length.
pub fn span_rank(len: usize, vectors: &[Vec<Q>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(len, vectors).rank()
}

/// A basis (as a subset-free echelon set) of the span of the given vectors.
pub fn span_basis(len: usize, vectors: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_columns(len, vectors).transpose().rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Incremental row echelon form for sparse homogeneous systems.
///
/// Rows are reduced against every earlier pivot on insertion, so row `i`
/// only ever mentions pivots created after it. The leading column of a new
/// row is its smallest remaining column index, which lets callers control
/// which coordinates become pivots by choosing the numbering.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    nvars: usize,
    rows: Vec<Vec<(usize, Q)>>,
    pivot_of: HashMap<usize, usize>,
    pivot_cols: Vec<usize>,
}

impl SparseEchelon {
    pub fn new(nvars: usize) -> Self {
        SparseEchelon { nvars, ..Default::default() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of.contains_key(&col)
    }

    fn reduce(&self, row: impl IntoIterator<Item = (usize, Q)>) -> BTreeMap<usize, Q> {
        let mut work: BTreeMap<usize, Q> = BTreeMap::new();
        for (c, v) in row {
            if v.is_zero() {
                continue;
            }
            let e = work.entry(c).or_insert_with(Q::zero);
            *e += v;
            if e.is_zero() {
                work.remove(&c);
            }
        }
        let mut heap: BinaryHeap<Reverse<usize>> =
            work.keys().filter_map(|c| self.pivot_of.get(c)).map(|&r| Reverse(r)).collect();
        while let Some(Reverse(r)) = heap.pop() {
            let pc = self.pivot_cols[r];
            let Some(f) = work.remove(&pc) else { continue };
            for (c, v) in &self.rows[r] {
                if *c == pc {
                    continue;
                }
                let e = work.entry(*c).or_insert_with(Q::zero);
                let was_zero = e.is_zero();
                *e -= &f * v;
                if e.is_zero() {
                    work.remove(c);
                } else if was_zero {
                    if let Some(&r2) = self.pivot_of.get(c) {
                        heap.push(Reverse(r2));
                    }
                }
            }
        }
        work
    }

    /// Inserts a row; returns `true` when it raised the rank.
    pub fn insert(&mut self, row: impl IntoIterator<Item = (usize, Q)>) -> bool {
        let work = self.reduce(row);
        let Some((&lead, lv)) = work.iter().next() else {
            return false;
        };
        let inv = lv.recip();
        let normalized: Vec<(usize, Q)> = work.iter().map(|(&c, v)| (c, v * &inv)).collect();
        self.pivot_of.insert(lead, self.rows.len());
        self.pivot_cols.push(lead);
        self.rows.push(normalized);
        true
    }

    /// The remainder of a vector after reduction; it has no pivot coordinates.
    pub fn normal_form(&self, row: impl IntoIterator<Item = (usize, Q)>) -> BTreeMap<usize, Q> {
        self.reduce(row)
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.nvars).filter(|c| !self.pivot_of.contains_key(c)).collect()
    }

    /// A basis of the solution space of the homogeneous system, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        let free = self.free_columns();
        let mut out = Vec::with_capacity(free.len());
        for &f in &free {
            let mut x = vec![Q::zero(); self.nvars];
            x[f] = Q::one();
            for r in (0..self.rows.len()).rev() {
                let pc = self.pivot_cols[r];
                let mut acc = Q::zero();
                for (c, v) in &self.rows[r] {
                    if *c != pc && !x[*c].is_zero() {
                        acc += v * &x[*c];
                    }
                }
                x[pc] = -acc;
            }
            out.push(x);
        }
        out
    }
}

/// Basis of `{S : S X = X' S, S Y = Y' S}` where `X, Y` are `n x n` and `X', Y'` are `n' x n'`.
///
/// Each basis element is an `n' x n` matrix. The unknowns are the entries of
/// `S` in row-major order and every equation is sparse when the inputs are.
pub fn intertwiner_space(
    x: &Matrix,
    y: &Matrix,
    xp: &Matrix,
    yp: &Matrix,
) -> Result<Vec<Matrix>, LinalgError> {
    let n = x.rows();
    let np = xp.rows();
    for (m, d, name) in [(x, n, "X"), (y, n, "Y"), (xp, np, "X'"), (yp, np, "Y'")] {
        if m.rows() != d || m.cols() != d {
            return Err(LinalgError::Dimension(format!("{name} must be square of size {d}")));
        }
    }
    let var = |i: usize, k: usize| i * n + k;
    let mut sys = SparseEchelon::new(n * np);
    for (a, ap) in [(x, xp), (y, yp)] {
        let col_nz: Vec<Vec<(usize, &Q)>> = (0..n)
            .map(|j| (0..n).filter(|&k| !a[(k, j)].is_zero()).map(|k| (k, &a[(k, j)])).collect())
            .collect();
        let row_nz: Vec<Vec<(usize, &Q)>> = (0..np)
            .map(|i| (0..np).filter(|&k| !ap[(i, k)].is_zero()).map(|k| (k, &ap[(i, k)])).collect())
            .collect();
        for i in 0..np {
            for j in 0..n {
                let mut eq: Vec<(usize, Q)> = Vec::new();
                for &(k, v) in &col_nz[j] {
                    eq.push((var(i, k), v.clone()));
                }
                for &(k, v) in &row_nz[i] {
                    eq.push((var(k, j), -v.clone()));
                }
                if !eq.is_empty() {
                    sys.insert(eq);
                }
            }
        }
    }
    Ok(sys
        .kernel_basis()
        .into_iter()
        .map(|v| Matrix::from_flat(np, n, v).expect("kernel vector length"))
        .collect())
}

/// Sampling policy for [`random_invertible_element`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    /// Coefficients are drawn from `{-bound..=bound} \ {0}`.
    pub bound: i64,
    pub retries: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { bound: 10, retries: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sampled {
    Found(Matrix),
    NotFound,
}

/// Random combinations of `basis` until one is invertible.
pub fn random_invertible_element<R: Rng + ?Sized>(
    basis: &[Matrix],
    cfg: SampleConfig,
    rng: &mut R,
) -> Sampled {
    let Some(first) = basis.first() else {
        return Sampled::NotFound;
    };
    if !first.is_square() {
        return Sampled::NotFound;
    }
    for _ in 0..cfg.retries.max(1) {
        let s = random_combination(basis, cfg.bound, rng);
        if s.is_invertible() {
            return Sampled::Found(s);
        }
    }
    Sampled::NotFound
}

/// `sum c_i B_i` with each `c_i` uniform in `{-bound..=bound} \ {0}`.
pub fn random_combination<R: Rng + ?Sized>(basis: &[Matrix], bound: i64, rng: &mut R) -> Matrix {
    let bound = bound.max(1);
    let mut acc = Matrix::zeros(basis[0].rows(), basis[0].cols());
    for b in basis {
        let mut c = rng.gen_range(1..=2 * bound);
        if c > bound {
            c = bound - c;
        }
        let c = q(c);
        for (a, v) in acc.data.iter_mut().zip(&b.data) {
            if !v.is_zero() {
                *a += &c * v;
            }
        }
    }
    acc
}

/// True if every entry is an integer of absolute value at most `bound`.
pub fn entries_bounded(m: &Matrix, bound: i64) -> bool {
    m.data().iter().all(|x| x.is_integer() && x.abs() <= q(bound))
}
