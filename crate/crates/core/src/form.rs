//! Spaces with a non-degenerate symmetric, hermitian or symplectic form.
//!
//! The pairing is `<u, v> = uᵀ B conj(v)`: linear in the first slot and
//! conjugate-linear in the second.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::{unit_vector, vec_add, vec_conj, vec_scale, zero_vector, Matrix, Vector};
use crate::subspace::Subspace;
use crate::twisted::TwistedElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormKind {
    Symmetric,
    Hermitian,
    Symplectic,
}

impl FormKind {
    /// `ε` with `<v, u> = ε conj(<u, v>)`.
    pub fn epsilon(self) -> i64 {
        match self {
            FormKind::Symplectic => -1,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FormKind::Symmetric => "symmetric",
            FormKind::Hermitian => "hermitian",
            FormKind::Symplectic => "symplectic",
        }
    }
}

impl FromStr for FormKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(FormKind::Symmetric),
            "hermitian" => Ok(FormKind::Hermitian),
            "symplectic" => Ok(FormKind::Symplectic),
            _ => Err(Error::InvalidForm(format!("unknown form kind {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    O,
    SO,
    U,
    Sp,
}

impl GroupKind {
    pub fn form_kind(self) -> FormKind {
        match self {
            GroupKind::O | GroupKind::SO => FormKind::Symmetric,
            GroupKind::U => FormKind::Hermitian,
            GroupKind::Sp => FormKind::Symplectic,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupKind::O => "O",
            GroupKind::SO => "SO",
            GroupKind::U => "U",
            GroupKind::Sp => "Sp",
        }
    }

    /// Lower-case Lie algebra name as used on the command line.
    pub fn algebra_name(self) -> &'static str {
        match self {
            GroupKind::O => "o",
            GroupKind::SO => "so",
            GroupKind::U => "u",
            GroupKind::Sp => "sp",
        }
    }

    pub fn from_algebra_name(s: &str) -> Result<Self> {
        match s {
            "o" => Ok(GroupKind::O),
            "so" => Ok(GroupKind::SO),
            "u" => Ok(GroupKind::U),
            "sp" => Ok(GroupKind::Sp),
            _ => Err(Error::InvalidForm(format!("unknown algebra kind {s:?}"))),
        }
    }
}

impl FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "O" => Ok(GroupKind::O),
            "SO" => Ok(GroupKind::SO),
            "U" => Ok(GroupKind::U),
            "Sp" => Ok(GroupKind::Sp),
            _ => Err(Error::InvalidForm(format!("unknown group kind {s:?}"))),
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FormSpace {
    group: GroupKind,
    gram: Matrix,
    gram_inv: Matrix,
}

impl fmt::Debug for FormSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormSpace({} over {}, B = {:?})", self.group, self.field(), self.gram)
    }
}

/// Symmetry check for a candidate Gram matrix of the given kind.
pub fn gram_has_kind(gram: &Matrix, kind: FormKind) -> bool {
    match kind {
        FormKind::Symmetric => gram.transpose() == *gram,
        FormKind::Hermitian => gram.conj_transpose() == *gram,
        FormKind::Symplectic => gram.transpose() == -gram,
    }
}

impl FormSpace {
    pub fn new(group: GroupKind, gram: Matrix) -> Result<Self> {
        let field = gram.field();
        let kind = group.form_kind();
        if !gram.is_square() {
            return Err(Error::InvalidForm("Gram matrix is not square".into()));
        }
        match (kind, field.deg()) {
            (FormKind::Hermitian, 2) | (FormKind::Symmetric, 1) | (FormKind::Symplectic, 1) => {}
            (FormKind::Hermitian, _) => {
                return Err(Error::InvalidForm("hermitian forms need a quadratic extension".into()))
            }
            _ => return Err(Error::InvalidForm(format!("{} forms need a prime field", kind.name()))),
        }
        if !gram_has_kind(&gram, kind) {
            return Err(Error::InvalidForm(format!("Gram matrix is not {}", kind.name())));
        }
        let gram_inv = gram.inverse().ok_or_else(|| Error::InvalidForm("Gram matrix is degenerate".into()))?;
        Ok(FormSpace { group, gram, gram_inv })
    }

    /// Identity Gram for O/SO/U, `diag(J, …, J)` with `J = [[0,1],[−1,0]]` for Sp.
    pub fn standard(group: GroupKind, field: Field, n: usize) -> Result<Self> {
        let gram = match group {
            GroupKind::Sp => {
                if n % 2 == 1 {
                    return Err(Error::InvalidForm("symplectic spaces have even dimension".into()));
                }
                let j = Matrix::from_ints(field, &[&[0, 1], &[-1, 0]]);
                Matrix::block_diag(field, &vec![j; n / 2])
            }
            _ => Matrix::identity(field, n),
        };
        FormSpace::new(group, gram)
    }

    pub fn field(&self) -> Field {
        self.gram.field()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn kind(&self) -> FormKind {
        self.group.form_kind()
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Same form, different group label (O ↔ SO).
    pub fn with_group(&self, group: GroupKind) -> Result<Self> {
        FormSpace::new(group, self.gram.clone())
    }

    pub fn pair(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let n = self.dim();
        assert!(u.len() == n && v.len() == n, "pairing dimension mismatch");
        let mut acc = self.field().zero();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                acc += u[i] * self.gram[(i, j)] * v[j].conj();
            }
        }
        acc
    }

    pub fn checked_pair(&self, u: &[Scalar], v: &[Scalar]) -> Result<Scalar> {
        if u.len() != self.dim() || v.len() != self.dim() {
            return Err(Error::Dimension(format!("vectors of length {} and {} in dimension {}", u.len(), v.len(), self.dim())));
        }
        Ok(self.pair(u, v))
    }

    /// `G_ij = <b_i, b_j>`.
    pub fn gram_of(&self, basis: &[Vector]) -> Matrix {
        Matrix::from_fn(self.field(), basis.len(), basis.len(), |i, j| self.pair(&basis[i], &basis[j]))
    }

    /// `A*` with `<Au, v> = <u, A*v>`.
    pub fn adjoint(&self, a: &Matrix) -> Matrix {
        (&(&self.gram_inv * &a.transpose()) * &self.gram).conj()
    }

    pub fn in_lie_algebra(&self, a: &Matrix) -> bool {
        a.rows() == self.dim() && a.is_square() && self.adjoint(a) == -a
    }

    pub fn require_lie_algebra(&self, a: &Matrix) -> Result<()> {
        if a.rows() != self.dim() || !a.is_square() {
            return Err(Error::Dimension(format!("operator is {}×{}, space has dimension {}", a.rows(), a.cols(), self.dim())));
        }
        if self.in_lie_algebra(a) { Ok(()) } else { Err(Error::NotInLieAlgebra) }
    }

    /// A basis of `g(V)` as a vector space over the prime field.
    pub fn lie_algebra_basis(&self) -> Vec<Matrix> {
        let k = self.field();
        let n = self.dim();
        let scalars: Vec<Scalar> = std::iter::once(k.one()).chain(k.omega()).collect();
        let gens: Vec<Matrix> = (0..n * n)
            .flat_map(|idx| {
                scalars.iter().map(move |&c| {
                    let mut m = Matrix::zeros(k, n, n);
                    m[(idx / n, idx % n)] = c;
                    m
                })
            })
            .collect();
        let cols: Vec<Vector> = gens.iter().map(|x| (&self.adjoint(x) + x).prime_coordinates()).collect();
        let rows = n * n * k.deg() as usize;
        let ker = Matrix::from_columns(k.base(), rows, &cols).kernel();
        ker.basis()
            .iter()
            .map(|c| {
                gens.iter().zip(c).fold(Matrix::zeros(k, n, n), |acc, (g, &t)| {
                    if t.is_zero() { acc } else { &acc + &g.scale(k.int(t.coords().0 as i64)) }
                })
            })
            .collect()
    }

    pub fn in_group(&self, g: &Matrix) -> bool {
        if g.rows() != self.dim() || !g.is_square() {
            return false;
        }
        if !(&self.adjoint(g) * g).is_identity() {
            return false;
        }
        self.group != GroupKind::SO || g.det().is_one()
    }

    /// Determinant demanded of `T` in SO: `δ^{⌊(n+1)/2⌋}`.
    pub fn so_det_target(&self, delta: i8) -> Scalar {
        let k = self.dim().div_ceil(2);
        if delta == -1 && k % 2 == 1 { -self.field().one() } else { self.field().one() }
    }

    pub fn in_twisted(&self, t: &TwistedElement) -> bool {
        let n = self.dim();
        if t.dim() != n || t.matrix.field() != self.field() || (t.delta != 1 && t.delta != -1) {
            return false;
        }
        let needs_conj = t.delta == -1 && self.kind() == FormKind::Hermitian;
        if t.conj != needs_conj || t.matrix.inverse().is_none() {
            return false;
        }
        let k = self.field();
        let images: Vec<Vector> = (0..n).map(|i| t.apply(&unit_vector(k, n, i))).collect();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.pair(&images[i], &images[j]);
                let rhs = if t.delta == 1 { self.gram[(i, j)] } else { self.gram[(j, i)] };
                if lhs != rhs {
                    return false;
                }
            }
        }
        self.group != GroupKind::SO || t.det() == self.so_det_target(t.delta)
    }

    /// `φ_v : u ↦ <u, v> v`.
    pub fn phi(&self, v: &[Scalar]) -> Matrix {
        self.phi2(v, v)
    }

    /// `φ_{u,w} : x ↦ <x, w> u`.
    pub fn phi2(&self, u: &[Scalar], w: &[Scalar]) -> Matrix {
        let bw = self.gram.mul_vec(&vec_conj(w));
        Matrix::from_fn(self.field(), self.dim(), self.dim(), |i, j| u[i] * bw[j])
    }

    /// `{w : <u, w> = 0 for all u ∈ U}`.
    pub fn orthogonal_complement(&self, u: &Subspace) -> Subspace {
        if u.is_zero() {
            return Subspace::whole(self.field(), self.dim());
        }
        let rows: Vec<Vector> = u.basis().iter().map(|b| vec_conj(&self.gram.transpose().mul_vec(b))).collect();
        Matrix::from_rows(self.field(), &rows).kernel()
    }

    pub fn is_nondegenerate_on(&self, basis: &[Vector]) -> bool {
        self.gram_of(basis).inverse().is_some()
    }

    /// First non-isotropic vector of the subspace spanned by `basis`, searched
    /// in the order `b_i`, then `b_i + b_j`, then `b_i + ω b_j`.
    pub fn nonisotropic_vector(&self, basis: &[Vector]) -> Result<Vector> {
        if self.kind() == FormKind::Symplectic {
            return Err(Error::AllIsotropic);
        }
        let coords = first_nonisotropic(&self.gram_of(basis)).ok_or(Error::AllIsotropic)?;
        Ok(combine(self.field(), self.dim(), basis, &coords))
    }

    /// Orthogonal basis (columns of the result) of a symmetric or hermitian space.
    pub fn orthogonal_basis(&self) -> Result<Matrix> {
        let cols = orthogonal_basis_of(&self.gram)?;
        Ok(Matrix::from_columns(self.field(), self.dim(), &cols))
    }

    /// `Q` with `Qᵀ B conj(Q)` equal to the normal form of the kind:
    /// `diag(1, …, 1, c)` for symmetric, `I` for hermitian, `diag(J, …)` for symplectic.
    pub fn normal_basis(&self) -> Result<(Matrix, Matrix)> {
        normal_basis_of(&self.gram, self.kind())
    }

    /// Whether `det B` is a square (symmetric forms only).
    pub fn discriminant_is_square(&self) -> bool {
        self.gram.det().is_square_in_prime_field()
    }

    /// The element `(T, −1)` behind `σ(g) = T g⁻¹ T⁻¹`.
    pub fn sigma_builder(&self) -> Result<TwistedElement> {
        let k = self.field();
        let n = self.dim();
        let t = match self.group {
            GroupKind::O => TwistedElement { matrix: Matrix::identity(k, n), delta: -1, conj: false },
            GroupKind::SO => {
                let p = self.orthogonal_basis()?;
                let negatives = n.div_ceil(2) % 2;
                let d: Vec<Scalar> = (0..n).map(|i| if i < negatives { -k.one() } else { k.one() }).collect();
                let m = &(&p * &Matrix::diagonal(k, &d)) * &p.inverse().unwrap();
                TwistedElement { matrix: m, delta: -1, conj: false }
            }
            GroupKind::U => {
                let p = self.orthogonal_basis()?;
                let m = &p * &p.inverse().unwrap().conj();
                TwistedElement { matrix: m, delta: -1, conj: true }
            }
            GroupKind::Sp => return Err(Error::Unsupported("sigma is defined for O, SO and U only".into())),
        };
        debug_assert!(self.in_twisted(&t));
        Ok(t)
    }

    /// An isometry `P : S1 → S2`, i.e. `B₁ = Pᵀ B₂ conj(P)`, if one exists.
    pub fn form_isometry(s1: &FormSpace, s2: &FormSpace) -> Result<Option<Matrix>> {
        if s1.field() != s2.field() || s1.kind() != s2.kind() {
            return Err(Error::InvalidForm("form isometry needs the same field and kind".into()));
        }
        if s1.dim() != s2.dim() {
            return Ok(None);
        }
        let (q1, n1) = s1.normal_basis()?;
        let (q2, n2) = s2.normal_basis()?;
        if n1 != n2 {
            return Ok(None);
        }
        Ok(Some(&q2 * &q1.inverse().unwrap()))
    }
}

fn combine(field: Field, n: usize, basis: &[Vector], coords: &[Scalar]) -> Vector {
    basis.iter().zip(coords).fold(zero_vector(field, n), |acc, (b, &c)| vec_add(&acc, &vec_scale(c, b)))
}

fn gram_pair(gram: &Matrix, u: &[Scalar], v: &[Scalar]) -> Scalar {
    let n = gram.rows();
    let mut acc = gram.field().zero();
    for i in 0..n {
        for j in 0..n {
            acc += u[i] * gram[(i, j)] * v[j].conj();
        }
    }
    acc
}

/// Coordinates of the first non-isotropic vector for the sesquilinear form
/// with Gram matrix `gram`, in the documented enumeration order.
pub fn first_nonisotropic(gram: &Matrix) -> Option<Vector> {
    let k = gram.field();
    let n = gram.rows();
    for i in 0..n {
        if !gram[(i, i)].is_zero() {
            return Some(unit_vector(k, n, i));
        }
    }
    let mut twists = vec![k.one()];
    twists.extend(k.omega());
    for &t in &twists {
        for i in 0..n {
            for j in i + 1..n {
                let mut v = unit_vector(k, n, i);
                v[j] = t;
                if !gram_pair(gram, &v, &v).is_zero() {
                    return Some(v);
                }
            }
        }
    }
    None
}

fn orthogonal_basis_of(gram: &Matrix) -> Result<Vec<Vector>> {
    let k = gram.field();
    let n = gram.rows();
    let mut out: Vec<Vector> = Vec::new();
    let mut rest: Vec<Vector> = (0..n).map(|i| unit_vector(k, n, i)).collect();
    while !rest.is_empty() {
        let g = Matrix::from_fn(k, rest.len(), rest.len(), |i, j| gram_pair(gram, &rest[i], &rest[j]));
        let c = first_nonisotropic(&g).ok_or(Error::AllIsotropic)?;
        let v = combine(k, n, &rest, &c);
        // rest ∩ v^⊥
        let row: Vector = rest.iter().map(|b| gram_pair(gram, b, &v)).collect();
        let ker = Matrix::from_rows(k, &[row]).kernel();
        rest = ker.basis().iter().map(|c| combine(k, n, &rest, c)).collect();
        out.push(v);
    }
    Ok(out)
}

fn normal_basis_of(gram: &Matrix, kind: FormKind) -> Result<(Matrix, Matrix)> {
    let k = gram.field();
    let n = gram.rows();
    let cols: Vec<Vector> = match kind {
        FormKind::Symplectic => {
            let mut out = Vec::new();
            let mut rest: Vec<Vector> = (0..n).map(|i| unit_vector(k, n, i)).collect();
            while !rest.is_empty() {
                let e = rest[0].clone();
                let (fi, c) = rest
                    .iter()
                    .enumerate()
                    .map(|(i, b)| (i, gram_pair(gram, &e, b)))
                    .find(|(_, c)| !c.is_zero())
                    .ok_or_else(|| Error::InvalidForm("degenerate symplectic form".into()))?;
                let f = vec_scale(c.inv().unwrap(), &rest[fi]);
                let rows: Vec<Vector> = vec![
                    rest.iter().map(|b| gram_pair(gram, b, &e)).collect(),
                    rest.iter().map(|b| gram_pair(gram, b, &f)).collect(),
                ];
                let ker = Matrix::from_rows(k, &rows).kernel();
                rest = ker.basis().iter().map(|c| combine(k, n, &rest, c)).collect();
                out.push(e);
                out.push(f);
            }
            out
        }
        FormKind::Hermitian => orthogonal_basis_of(gram)?
            .into_iter()
            .map(|v| {
                let d = gram_pair(gram, &v, &v);
                // N(a) = d, then <v/a, v/a> = 1
                let a = k.nonzero_elements().find(|a| a.norm() == d).expect("norm map is onto");
                vec_scale(a.inv().unwrap(), &v)
            })
            .collect(),
        FormKind::Symmetric => {
            let r = k.int(k.nonresidue_of_prime() as i64);
            let mut ones = Vec::new();
            let mut rs = Vec::new();
            for v in orthogonal_basis_of(gram)? {
                let d = gram_pair(gram, &v, &v);
                if d.is_square_in_prime_field() {
                    ones.push(vec_scale(d.sqrt().unwrap().inv().unwrap(), &v));
                } else {
                    rs.push(vec_scale((d / r).sqrt().unwrap().inv().unwrap(), &v));
                }
            }
            if rs.len() >= 2 {
                // x² + y² = 1/r
                let target = r.inv().unwrap();
                let (x, y) = k
                    .elements()
                    .flat_map(|x| k.elements().map(move |y| (x, y)))
                    .find(|&(x, y)| x * x + y * y == target)
                    .expect("every element is a sum of two squares");
                while rs.len() >= 2 {
                    let w = rs.pop().unwrap();
                    let u = rs.pop().unwrap();
                    ones.push(vec_add(&vec_scale(x, &u), &vec_scale(y, &w)));
                    ones.push(vec_add(&vec_scale(-y, &u), &vec_scale(x, &w)));
                }
            }
            ones.extend(rs);
            ones
        }
    };
    let q = Matrix::from_columns(k, n, &cols);
    let normal = &(&q.transpose() * gram) * &q.conj();
    Ok((q, normal))
}
