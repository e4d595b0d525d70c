//! Elements `(T, δ)` of the extended group.
//!
//! `T` is stored as a matrix `M` and a flag: with the flag set, `T` acts by
//! `v ↦ M·conj(v)`. The flag is set exactly for `δ = −1` on hermitian spaces,
//! where a form-reversing map has to be semilinear.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::{vec_conj, vec_scale, Matrix, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistedElement {
    pub matrix: Matrix,
    pub delta: i8,
    pub conj: bool,
}

impl TwistedElement {
    pub fn new(matrix: Matrix, delta: i8, conj: bool) -> Result<Self> {
        if delta != 1 && delta != -1 {
            return Err(Error::Precondition(format!("delta must be ±1, got {delta}")));
        }
        if !matrix.is_square() || matrix.inverse().is_none() {
            return Err(Error::Singular);
        }
        Ok(TwistedElement { matrix, delta, conj })
    }

    pub fn identity(field: Field, n: usize) -> Self {
        TwistedElement { matrix: Matrix::identity(field, n), delta: 1, conj: false }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    /// `T v`.
    pub fn apply(&self, v: &[Scalar]) -> Vector {
        if self.conj {
            self.matrix.mul_vec(&vec_conj(v))
        } else {
            self.matrix.mul_vec(v)
        }
    }

    /// `T X T⁻¹`.
    pub fn conjugate(&self, x: &Matrix) -> Matrix {
        let inner = if self.conj { x.conj() } else { x.clone() };
        &(&self.matrix * &inner) * &self.matrix.inverse().expect("twisted element is invertible")
    }

    /// `δ T A T⁻¹`.
    pub fn act_on_algebra(&self, a: &Matrix) -> Matrix {
        let c = self.conjugate(a);
        if self.delta == 1 { c } else { -c }
    }

    /// `δ T v`.
    pub fn act_on_vector(&self, v: &[Scalar]) -> Vector {
        let w = self.apply(v);
        if self.delta == 1 { w } else { vec_scale(-self.field().one(), &w) }
    }

    /// `T g^δ T⁻¹`.
    pub fn act_on_group(&self, g: &Matrix) -> Matrix {
        if self.delta == 1 {
            self.conjugate(g)
        } else {
            self.conjugate(&g.inverse().expect("group element is invertible"))
        }
    }

    pub fn compose(&self, other: &TwistedElement) -> TwistedElement {
        let m2 = if self.conj { other.matrix.conj() } else { other.matrix.clone() };
        TwistedElement {
            matrix: &self.matrix * &m2,
            delta: self.delta * other.delta,
            conj: self.conj ^ other.conj,
        }
    }

    pub fn inverse(&self) -> TwistedElement {
        let inv = self.matrix.inverse().expect("twisted element is invertible");
        TwistedElement { matrix: if self.conj { inv.conj() } else { inv }, delta: self.delta, conj: self.conj }
    }

    pub fn det(&self) -> Scalar {
        self.matrix.det()
    }

    /// The character `χ(T, δ) = δ`.
    pub fn chi(&self) -> i8 {
        self.delta
    }
}
