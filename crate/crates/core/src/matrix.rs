//! Dense exact matrices over a [`Field`] and the elimination routines built on them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::subspace::Subspace;

/// Column vectors are plain coordinate vectors.
pub type Vector = Vec<Scalar>;

pub fn zero_vector(field: Field, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn unit_vector(field: Field, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, n);
    v[i] = field.one();
    v
}

pub fn vec_add(u: &[Scalar], v: &[Scalar]) -> Vector {
    u.iter().zip(v).map(|(&a, &b)| a + b).collect()
}

pub fn vec_sub(u: &[Scalar], v: &[Scalar]) -> Vector {
    u.iter().zip(v).map(|(&a, &b)| a - b).collect()
}

pub fn vec_scale(c: Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|&a| c * a).collect()
}

pub fn vec_conj(v: &[Scalar]) -> Vector {
    v.iter().map(|a| a.conj()).collect()
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(|a| a.is_zero())
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn scalar(c: Scalar, n: usize) -> Self {
        let mut m = Self::zeros(c.field(), n, n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    pub fn diagonal(field: Field, diag: &[Scalar]) -> Self {
        let mut m = Self::zeros(field, diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field, rows, cols, data }
    }

    pub fn from_rows(field: Field, rows: &[Vector]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { field, rows: r, cols: c, data: rows.concat() }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: Field, rows: usize, cols: &[Vector]) -> Self {
        assert!(cols.iter().all(|c| c.len() == rows), "column length mismatch");
        Self::from_fn(field, rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Self {
        let rows: Vec<Vector> = rows.iter().map(|r| r.iter().map(|&x| field.int(x)).collect()).collect();
        Self::from_rows(field, &rows)
    }

    pub fn field(&self) -> Field {
        self.field
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

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == if i == j { self.field.one() } else { self.field.zero() }))
    }

    pub fn transpose(&self) -> Matrix {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise conjugation.
    pub fn conj(&self) -> Matrix {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.conj()).collect() }
    }

    /// `conj(M)ᵀ`.
    pub fn conj_transpose(&self) -> Matrix {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: Scalar) -> Matrix {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| c * x).collect() }
    }

    pub fn add_diagonal(&mut self, c: Scalar) {
        for i in 0..self.rows.min(self.cols) {
            self[(i, i)] += c;
        }
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).fold(self.field.zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        &(self * other) - &(other * self)
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        Self::from_fn(self.field, rows.len(), cols.len(), |i, j| self[(rows.start + i, cols.start + j)])
    }

    pub fn block_diag(field: Field, blocks: &[Matrix]) -> Matrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(field, r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self[(i, j)] } else { other[(i, j - self.cols)] }
        })
    }

    /// Entries written over the prime field: `deg` coordinates per entry, row-major.
    pub fn prime_coordinates(&self) -> Vector {
        let base = self.field.base();
        let deg = self.field.deg() as usize;
        let mut out = Vec::with_capacity(self.data.len() * deg);
        for x in &self.data {
            let (a, b) = x.coords();
            out.push(base.int(a as i64));
            if deg == 2 {
                out.push(base.int(b as i64));
            }
        }
        out
    }

    /// Inverse of [`Matrix::prime_coordinates`].
    pub fn from_prime_coordinates(field: Field, rows: usize, cols: usize, coords: &[Scalar]) -> Matrix {
        let deg = field.deg() as usize;
        assert_eq!(coords.len(), rows * cols * deg);
        let data = coords
            .chunks(deg)
            .map(|c| {
                let b = if deg == 2 { c[1].coords().0 as i64 } else { 0 };
                field.elem(c[0].coords().0 as i64, b)
            })
            .collect();
        Matrix { field, rows, cols, data }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(p, r);
            let inv = m[(r, c)].inv().unwrap();
            for j in c..m.cols {
                m[(r, j)] *= inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)];
                    for j in c..m.cols {
                        let t = m[(r, j)];
                        m[(i, j)] -= f * t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `{x : Mx = 0}`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vectors: Vec<Vector> = free
            .iter()
            .map(|&fc| {
                let mut v = zero_vector(self.field, self.cols);
                v[fc] = self.field.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, fc)];
                }
                v
            })
            .collect();
        Subspace::span(self.field, self.cols, &vectors)
    }

    /// Column space.
    pub fn image(&self) -> Subspace {
        Subspace::span(self.field, self.rows, &self.columns())
    }

    /// One solution of `Mx = b`.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vector> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!("rhs has length {}, expected {}", b.len(), self.rows)));
        }
        let aug = Self::from_fn(self.field, self.rows, self.cols + 1, |i, j| if j < self.cols { self[(i, j)] } else { b[i] });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::Inconsistent);
        }
        let mut x = zero_vector(self.field, self.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)];
        }
        Ok(x)
    }

    /// Solves `M X = B` column by column.
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Matrix> {
        let cols = b.columns().iter().map(|c| self.solve(c)).collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(self.field, self.cols, &cols))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = self.hstack(&Matrix::identity(self.field, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(0..n, n..2 * n))
    }

    pub fn try_inverse(&self) -> Result<Matrix> {
        self.inverse().ok_or(Error::Singular)
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else { return self.field.zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)];
            det *= piv;
            let inv = piv.inv().unwrap();
            for i in c + 1..n {
                let f = m[(i, c)] * inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let t = m[(c, j)];
                    m[(i, j)] -= f * t;
                }
            }
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix sum dimension mismatch");
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(&a, &b)| a + b).collect() }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix difference dimension mismatch");
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(&a, &b)| a - b).collect() }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| -a).collect() }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    out.data[i * o.cols + j] += a * o[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for Matrix {
    type Output = Matrix;
    fn add(self, o: Matrix) -> Matrix {
        &self + &o
    }
}

impl Sub for Matrix {
    type Output = Matrix;
    fn sub(self, o: Matrix) -> Matrix {
        &self - &o
    }
}

impl Mul for Matrix {
    type Output = Matrix;
    fn mul(self, o: Matrix) -> Matrix {
        &self * &o
    }
}

impl Neg for Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn kernel_examples() {
        let k = f3();
        assert_eq!(Matrix::identity(k, 3).kernel().dim(), 0);
        let n = Matrix::from_ints(k, &[&[0, 1], &[0, 0]]);
        assert_eq!(n.kernel(), Subspace::span(k, 2, &[unit_vector(k, 2, 0)]));
    }

    #[test]
    fn solve_examples() {
        let k = f3();
        let d = Matrix::diagonal(k, &[k.int(1), k.int(2)]);
        assert_eq!(d.solve(&[k.int(1), k.int(1)]).unwrap(), vec![k.int(1), k.int(2)]);
        let z = Matrix::from_ints(k, &[&[1, 0], &[0, 0]]);
        assert_eq!(z.solve(&[k.int(0), k.int(1)]), Err(Error::Inconsistent));
    }

    #[test]
    fn rank_nullity() {
        let k = Field::prime(5).unwrap();
        let m = Matrix::from_ints(k, &[&[1, 2, 3, 4], &[2, 4, 1, 3], &[3, 1, 4, 2]]);
        assert_eq!(m.rank() + m.kernel().dim(), 4);
        for v in m.kernel().basis() {
            assert!(is_zero_vector(&m.mul_vec(&v)));
        }
    }

    #[test]
    fn inverse_and_det() {
        let k = Field::prime(7).unwrap();
        let m = Matrix::from_ints(k, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        // 2(12−1) − 1(4−0) = 18 ≡ 4
        assert_eq!(m.det(), k.int(4));
        let sing = Matrix::from_ints(k, &[&[1, 2], &[2, 4]]);
        assert!(sing.inverse().is_none());
        assert!(sing.det().is_zero());
    }
}
