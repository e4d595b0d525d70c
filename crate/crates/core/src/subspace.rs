//! Subspaces of `K^n`, stored by their reduced row echelon basis so that
//! equality is a syntactic comparison.

use crate::field::{Field, Scalar};
use crate::matrix::{Matrix, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    /// Rows are the basis, in reduced echelon form, without zero rows.
    echelon: Matrix,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace { field, ambient, echelon: Matrix::zeros(field, 0, ambient) }
    }

    pub fn whole(field: Field, ambient: usize) -> Self {
        Subspace { field, ambient, echelon: Matrix::identity(field, ambient) }
    }

    pub fn span(field: Field, ambient: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, ambient);
        }
        let (r, pivots) = Matrix::from_rows(field, vectors).rref();
        let echelon = r.submatrix(0..pivots.len(), 0..ambient);
        Subspace { field, ambient, echelon }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.echelon.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.echelon.to_rows()
    }

    /// `ambient × dim` matrix whose columns are the echelon basis.
    pub fn basis_matrix(&self) -> Matrix {
        self.echelon.transpose()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut rows = self.basis();
        rows.push(v.to_vec());
        Matrix::from_rows(self.field, &rows).rank() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        self.sum(other).dim() == self.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis();
        rows.extend(other.basis());
        Subspace::span(self.field, self.ambient, &rows)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.field, self.ambient);
        }
        let (a, b) = (self.basis(), other.basis());
        // Σ x_i a_i − Σ y_j b_j = 0
        let mut cols = a.clone();
        cols.extend(b.iter().map(|v| v.iter().map(|&c| -c).collect::<Vector>()));
        let m = Matrix::from_columns(self.field, self.ambient, &cols);
        let vectors: Vec<Vector> = m
            .kernel()
            .basis()
            .iter()
            .map(|coef| {
                (0..self.ambient)
                    .map(|k| a.iter().zip(coef).fold(self.field.zero(), |acc, (v, &c)| acc + c * v[k]))
                    .collect()
            })
            .collect();
        Subspace::span(self.field, self.ambient, &vectors)
    }

    /// Image under a linear map `K^ambient → K^m`.
    pub fn map(&self, m: &Matrix) -> Subspace {
        let images: Vec<Vector> = self.basis().iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(self.field, m.rows(), &images)
    }

    pub fn is_invariant(&self, m: &Matrix) -> bool {
        self.basis().iter().all(|v| self.contains(&m.mul_vec(v)))
    }

    /// Unit vectors completing the echelon basis to a basis of the ambient space.
    pub fn complement_basis(&self) -> Vec<Vector> {
        let mut span = self.clone();
        let mut out = Vec::new();
        for i in 0..self.ambient {
            let e = crate::matrix::unit_vector(self.field, self.ambient, i);
            if !span.contains(&e) {
                span = span.sum(&Subspace::span(self.field, self.ambient, std::slice::from_ref(&e)));
                out.push(e);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::unit_vector;

    #[test]
    fn equality_is_syntactic() {
        let k = Field::prime(5).unwrap();
        let a = Subspace::span(k, 3, &[vec![k.int(1), k.int(1), k.int(0)], vec![k.int(0), k.int(1), k.int(0)]]);
        let b = Subspace::span(k, 3, &[unit_vector(k, 3, 0), unit_vector(k, 3, 1)]);
        assert_eq!(a, b);
    }

    #[test]
    fn intersection_and_sum() {
        let k = Field::prime(3).unwrap();
        let a = Subspace::span(k, 3, &[unit_vector(k, 3, 0), unit_vector(k, 3, 1)]);
        let b = Subspace::span(k, 3, &[unit_vector(k, 3, 1), unit_vector(k, 3, 2)]);
        assert_eq!(a.intersect(&b), Subspace::span(k, 3, &[unit_vector(k, 3, 1)]));
        assert_eq!(a.sum(&b), Subspace::whole(k, 3));
        assert!(a.contains_subspace(&a.intersect(&b)));
    }
}
