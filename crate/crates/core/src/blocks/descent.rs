//! Symplectic operators with `A² = −c` viewed as unitary data over
//! `m = F[T]/(T² + c)`, with `T` acting as `A`.

use crate::canonical::char_poly;
use crate::error::{Error, Result};
use crate::factor::factor;
use crate::field::{Field, Scalar};
use crate::form::{FormKind, FormSpace, GroupKind};
use crate::matrix::{unit_vector, Matrix, Vector};
use crate::poly::Poly;
use crate::subspace::Subspace;

#[derive(Clone, Debug)]
pub struct Descent {
    pub factor: Poly,
    /// `m`, realised as `F_{p²}`; the involution `T ↦ −T` is conjugation.
    pub ext: Field,
    /// The image of `T` in `ext`.
    pub tau: Scalar,
    /// `b_1, …, b_k` with `b_i, Ab_i` an `F`-basis.
    pub ext_basis: Vec<Vector>,
    /// `(V_m, aS)` with `a = τ`.
    pub hermitian: FormSpace,
    source: FormSpace,
    a: Matrix,
    /// Columns `b_1, Ab_1, b_2, Ab_2, …`.
    frame: Matrix,
}

fn lift(ext: Field, x: Scalar) -> Scalar {
    ext.int(x.coords().0 as i64)
}

pub fn descend_to_unitary(space: &FormSpace, a: &Matrix) -> Result<Descent> {
    if space.kind() != FormKind::Symplectic {
        return Err(Error::Precondition("descent needs a symplectic space".into()));
    }
    space.require_lie_algebra(a)?;
    let k = space.field();
    let n = space.dim();
    let fac = factor(&char_poly(a)?)?;
    if fac.factors.len() != 1 {
        return Err(Error::Precondition("characteristic polynomial is not a power of one irreducible".into()));
    }
    let f = fac.factors[0].0.clone();
    let deg = f.degree().unwrap_or(0);
    if deg % 2 == 1 {
        return Err(Error::Precondition("descent requires even-degree f".into()));
    }
    if deg != 2 {
        return Err(Error::Unsupported("descent is implemented for quadratic f".into()));
    }
    if !f.eval_matrix(a).is_zero() {
        return Err(Error::Precondition("A is not annihilated by f".into()));
    }
    if !f.coeff(1).is_zero() {
        return Err(Error::Precondition("f* ≠ ±f".into()));
    }
    // f = x² + c with −c a non-square; τ = αω with α² r = −c
    let c = f.coeff(0);
    let ext = Field::quadratic(k.p())?;
    let r = k.int(ext.nonresidue_of_prime() as i64);
    let alpha = (-c / r).sqrt().ok_or_else(|| Error::Internal("−c/r has no square root".into()))?;
    let tau = lift(ext, alpha) * ext.omega().unwrap();

    let mut ext_basis = Vec::new();
    let mut cols: Vec<Vector> = Vec::new();
    for i in 0..n {
        let e = unit_vector(k, n, i);
        if Subspace::span(k, n, &cols).contains(&e) {
            continue;
        }
        cols.push(e.clone());
        cols.push(a.mul_vec(&e));
        ext_basis.push(e);
    }
    let frame = Matrix::from_columns(k, n, &cols);

    // <h(A)v, v'> = ℓ(S(v,v')h) with ℓ the trace: S = <v,v'>/2 − <Av,v'>/(2c)·τ
    let two = k.int(2);
    let s = |v: &Vector, w: &Vector| {
        let s0 = space.pair(v, w) / two;
        let s1 = -space.pair(&a.mul_vec(v), w) / (two * c);
        lift(ext, s0) + lift(ext, s1) * tau
    };
    let m = ext_basis.len();
    let gram = Matrix::from_fn(ext, m, m, |i, j| tau * s(&ext_basis[i], &ext_basis[j]));
    let hermitian = FormSpace::new(GroupKind::U, gram)?;
    Ok(Descent { factor: f, ext, tau, ext_basis, hermitian, source: space.clone(), a: a.clone(), frame })
}

impl Descent {
    pub fn source(&self) -> &FormSpace {
        &self.source
    }

    /// Coordinates over `m` of a vector of `V`.
    pub fn to_ext_vector(&self, v: &[Scalar]) -> Result<Vector> {
        let c = self.frame.solve(v)?;
        Ok(c.chunks(2).map(|p| lift(self.ext, p[0]) + lift(self.ext, p[1]) * self.tau).collect())
    }

    pub fn from_ext_vector(&self, y: &[Scalar]) -> Vector {
        let k = self.source.field();
        let alpha = self.tau * self.ext.omega().unwrap().inv().unwrap();
        let coords: Vector = y
            .iter()
            .flat_map(|&z| {
                // z = x + s·τ with x, s in F
                let (x, b) = z.coords();
                let s = k.int(b as i64) / k.int(alpha.coords().0 as i64);
                [k.int(x as i64), s]
            })
            .collect();
        self.frame.mul_vec(&coords)
    }

    /// The `m`-linear avatar of an `F`-linear map commuting with `A`.
    pub fn to_ext(&self, x: &Matrix) -> Result<Matrix> {
        if x * &self.a != &self.a * x {
            return Err(Error::Precondition("map does not commute with A".into()));
        }
        let cols = self.ext_basis.iter().map(|b| self.to_ext_vector(&x.mul_vec(b))).collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(self.ext, self.ext_basis.len(), &cols))
    }

    pub fn from_ext(&self, y: &Matrix) -> Matrix {
        let k = self.source.field();
        let n = self.source.dim();
        let images: Vec<Vector> = (0..n)
            .map(|i| {
                let e = unit_vector(k, n, i);
                let coords = self.to_ext_vector(&e).expect("frame is a basis");
                self.from_ext_vector(&y.mul_vec(&coords))
            })
            .collect();
        Matrix::from_columns(k, n, &images)
    }

    /// `X` commutes with `A` and preserves the form iff its avatar is unitary.
    pub fn correspondence_holds(&self, x: &Matrix) -> bool {
        let commutes = x * &self.a == &self.a * x;
        let left = commutes && self.source.in_group(x);
        let right = commutes && self.to_ext(x).map(|y| self.hermitian.in_group(&y)).unwrap_or(false);
        left == right
    }
}
