//! Exact integer linear algebra: dense matrices, Smith normal form, integer
//! kernels and row-style Hermite normal form for comparing lattices.

use std::ops::{Index, IndexMut};

use serde_json::Value;

use crate::graph::int_to_json;
use crate::{Error, Result, Scalar};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from its rows. An empty list gives the 0×0 matrix.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(cols, rows)
    }

    /// Like [`from_rows`](Self::from_rows) but with an explicit column count,
    /// so matrices with no rows keep their width.
    pub fn from_rows_with_cols(cols: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { left: self.cols, right: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = a.clone() * other[(k, c)].clone();
                    out[(r, c)] = out[(r, c)].clone() + prod;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch { left: self.cols, right: x.len() });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(x).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self[(r, c)].is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<T> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { left: self.rows, right: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !a[(r, k)].is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Ok(T::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                    a[(i, j)] = v / prev.clone();
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(if n == 0 { T::one() } else { sign * a[(n - 1, n - 1)].clone() })
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array((0..self.rows).map(|r| Value::Array(self.row(r).iter().map(int_to_json).collect())).collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row `dst` += c · row `src`
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &T) {
        for k in 0..self.cols {
            let v = self[(src, k)].clone() * c.clone();
            self[(dst, k)] = self[(dst, k)].clone() + v;
        }
    }

    /// column `dst` += c · column `src`
    fn add_col_multiple(&mut self, dst: usize, src: usize, c: &T) {
        for k in 0..self.rows {
            let v = self[(k, src)].clone() * c.clone();
            self[(k, dst)] = self[(k, dst)].clone() + v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            self[(r, c)] = -self[(r, c)].clone();
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (r, c): (usize, usize)) -> &T {
        assert!(r < self.rows && c < self.cols, "matrix index out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        assert!(r < self.rows && c < self.cols, "matrix index out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

/// `U·M·V = S` with `S` diagonal, `d_1 | d_2 | …`, and `U`, `V` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm<T> {
    pub s: Matrix<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: Scalar> SmithForm<T> {
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.s.rows().min(self.s.cols())).map(|k| self.s[(k, k)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// Re-checks every defining property against the input matrix.
    pub fn verify(&self, m: &Matrix<T>) -> bool {
        let product = self.u.mul(m).and_then(|um| um.mul(&self.v));
        let d = self.diagonal();
        let chain = d.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { (w[1].clone() % w[0].clone()).is_zero() });
        let unimodular = |x: &Matrix<T>| x.determinant().is_ok_and(|det| det.abs().is_one());
        product.is_ok_and(|p| p == self.s)
            && self.s.is_diagonal()
            && d.iter().all(|x| !x.is_negative())
            && chain
            && unimodular(&self.u)
            && unimodular(&self.v)
    }
}

/// Smith normal form with minimal-absolute-value pivoting.
pub fn smith_normal_form<T: Scalar>(m: &Matrix<T>) -> SmithForm<T> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = min_abs_entry(&s, (t..rows).flat_map(|r| (t..cols).map(move |c| (r, c)))) else {
            break;
        };
        s.swap_rows(t, pr);
        u.swap_rows(t, pr);
        s.swap_cols(t, pc);
        v.swap_cols(t, pc);

        loop {
            let line = (t..rows).map(|r| (r, t)).chain((t + 1..cols).map(|c| (t, c)));
            let (pr, pc) = min_abs_entry(&s, line).expect("the pivot is nonzero");
            s.swap_rows(t, pr);
            u.swap_rows(t, pr);
            s.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let p = s[(t, t)].clone();
            let mut clean = true;
            for r in t + 1..rows {
                let q = s[(r, t)].div_floor(&p);
                if !q.is_zero() {
                    s.add_row_multiple(r, t, &-q.clone());
                    u.add_row_multiple(r, t, &-q);
                }
                clean &= s[(r, t)].is_zero();
            }
            for c in t + 1..cols {
                let q = s[(t, c)].div_floor(&p);
                if !q.is_zero() {
                    s.add_col_multiple(c, t, &-q.clone());
                    v.add_col_multiple(c, t, &-q);
                }
                clean &= s[(t, c)].is_zero();
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !(s[(r, c)].clone() % p.clone()).is_zero()));
            match bad_row {
                Some(r) => {
                    s.add_row_multiple(t, r, &T::one());
                    u.add_row_multiple(t, r, &T::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }

    let form = SmithForm { s, u, v };
    assert!(form.verify(m), "Smith normal form failed re-verification");
    form
}

fn min_abs_entry<T: Scalar>(s: &Matrix<T>, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
    cells.filter(|&(r, c)| !s[(r, c)].is_zero()).min_by(|&a, &b| s[a].abs().cmp(&s[b].abs()))
}

/// A basis of `{x ∈ Z^cols : M·x = 0}`: the columns of `V` past the rank.
pub fn integer_kernel<T: Scalar>(m: &Matrix<T>) -> LatticeBasis<T> {
    let form = smith_normal_form(m);
    let vectors: Vec<Vec<T>> = (form.rank()..m.cols()).map(|c| form.v.column(c)).collect();
    for x in &vectors {
        assert!(m.mul_vec(x).is_ok_and(|y| y.iter().all(T::is_zero)), "kernel vector failed re-verification");
    }
    LatticeBasis { dim: m.cols(), vectors }
}

/// Row-style Hermite normal form of the span of `vectors`: nonzero rows
/// only, pivot columns strictly increasing, pivots positive, and entries
/// above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form<T: Scalar>(dim: usize, vectors: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::LengthMismatch { expected: dim, found: bad.len() });
    }
    let mut rows: Vec<Vec<T>> = vectors.to_vec();
    let mut top = 0;
    for col in 0..dim {
        loop {
            let pick = (top..rows.len()).filter(|&r| !rows[r][col].is_zero()).min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(p) = pick else { break };
            rows.swap(top, p);
            let mut done = true;
            for r in top + 1..rows.len() {
                let q = rows[r][col].div_floor(&rows[top][col]);
                if !q.is_zero() {
                    sub_multiple(&mut rows, r, top, &q);
                }
                done &= rows[r][col].is_zero();
            }
            if done {
                break;
            }
        }
        if top >= rows.len() || rows[top][col].is_zero() {
            continue;
        }
        if rows[top][col].is_negative() {
            rows[top].iter_mut().for_each(|x| *x = -x.clone());
        }
        for r in 0..top {
            let q = rows[r][col].div_floor(&rows[top][col]);
            if !q.is_zero() {
                sub_multiple(&mut rows, r, top, &q);
            }
        }
        top += 1;
    }
    rows.truncate(top);
    Ok(rows)
}

fn sub_multiple<T: Scalar>(rows: &mut [Vec<T>], dst: usize, src: usize, q: &T) {
    for k in 0..rows[dst].len() {
        let v = rows[src][k].clone() * q.clone();
        rows[dst][k] = rows[dst][k].clone() - v;
    }
}

/// A list of linearly independent integer vectors of a common dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis<T> {
    dim: usize,
    vectors: Vec<Vec<T>>,
}

impl<T: Scalar> LatticeBasis<T> {
    /// Rejects vectors of the wrong length and dependent families.
    pub fn new(dim: usize, vectors: Vec<Vec<T>>) -> Result<Self> {
        if hermite_normal_form(dim, &vectors)?.len() != vectors.len() {
            return Err(Error::InvalidArgument("lattice basis vectors are linearly dependent".into()));
        }
        Ok(LatticeBasis { dim, vectors })
    }

    /// The Hermite normal form basis of the span of arbitrary generators.
    pub fn from_generators(dim: usize, generators: &[Vec<T>]) -> Result<Self> {
        Ok(LatticeBasis { dim, vectors: hermite_normal_form(dim, generators)? })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<T>] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<Vec<T>> {
        self.vectors
    }

    /// The canonical basis of the same lattice.
    pub fn hnf(&self) -> Self {
        Self::from_generators(self.dim, &self.vectors).expect("lengths were checked on construction")
    }

    /// Membership test by reduction against the Hermite normal form.
    pub fn contains(&self, x: &[T]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::LengthMismatch { expected: self.dim, found: x.len() });
        }
        let mut x = x.to_vec();
        for row in self.hnf().vectors {
            let pc = row.iter().position(|e| !e.is_zero()).expect("HNF rows are nonzero");
            if x[..pc].iter().any(|e| !e.is_zero()) {
                return Ok(false);
            }
            if !(x[pc].clone() % row[pc].clone()).is_zero() {
                return Ok(false);
            }
            let q = x[pc].clone() / row[pc].clone();
            for (a, b) in x.iter_mut().zip(&row) {
                *a = a.clone() - q.clone() * b.clone();
            }
        }
        Ok(x.iter().all(T::is_zero))
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array(self.vectors.iter().map(|v| Value::Array(v.iter().map(int_to_json).collect())).collect())
    }
}

/// Whether two bases span the same lattice.
pub fn lattice_equal<T: Scalar>(a: &LatticeBasis<T>, b: &LatticeBasis<T>) -> Result<bool> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { left: a.dim, right: b.dim });
    }
    Ok(a.hnf() == b.hnf())
}
