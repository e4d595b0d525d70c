//! Characteristic and minimal polynomials, generalized eigenspaces, and the
//! rational canonical form with an explicit change of basis.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::factor::factor;
use crate::field::Field;
use crate::matrix::{Matrix, Vector};
use crate::poly::Poly;
use crate::subspace::Subspace;

fn require_square(a: &Matrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::Dimension(format!("{}×{} matrix is not square", a.rows(), a.cols())))
    }
}

/// `det(xI − A)` via reduction to Hessenberg form.
pub fn char_poly(a: &Matrix) -> Result<Poly> {
    require_square(a)?;
    let field = a.field();
    let n = a.rows();
    let mut h = a.clone();
    for m in 1..n.saturating_sub(1) {
        let col = m - 1;
        let Some(p) = (m..n).find(|&i| !h[(i, col)].is_zero()) else { continue };
        if p != m {
            h.swap_rows(p, m);
            for j in 0..n {
                let t = h[(j, p)];
                h[(j, p)] = h[(j, m)];
                h[(j, m)] = t;
            }
        }
        let inv = h[(m, col)].inv().unwrap();
        for i in m + 1..n {
            let u = h[(i, col)] * inv;
            if u.is_zero() {
                continue;
            }
            for j in 0..n {
                let t = h[(m, j)];
                h[(i, j)] -= u * t;
            }
            for j in 0..n {
                let t = h[(j, i)];
                h[(j, m)] += u * t;
            }
        }
    }
    let x = Poly::x(field);
    let mut p: Vec<Poly> = vec![Poly::one(field)];
    for k in 1..=n {
        let mut pk = &(&x - &Poly::constant(h[(k - 1, k - 1)])) * &p[k - 1];
        let mut t = field.one();
        for i in 1..k {
            t *= h[(k - i, k - i - 1)];
            pk = &pk - &p[k - i - 1].scale(t * h[(k - i - 1, k - 1)]);
        }
        p.push(pk);
    }
    Ok(p.pop().unwrap())
}

/// `v, Av, …, A^{len−1}v`.
pub fn krylov(a: &Matrix, v: &[crate::field::Scalar], len: usize) -> Vec<Vector> {
    let mut out = Vec::with_capacity(len);
    let mut cur = v.to_vec();
    for _ in 0..len {
        let next = a.mul_vec(&cur);
        out.push(cur);
        cur = next;
    }
    out
}

/// Monic generator of `{p : p(A)v = 0}`.
pub fn local_min_poly(a: &Matrix, v: &[crate::field::Scalar]) -> Poly {
    let field = a.field();
    let n = a.rows();
    let mut cols: Vec<Vector> = Vec::new();
    let mut cur = v.to_vec();
    for k in 0..=n {
        if !cols.is_empty() || k > 0 {
            let m = Matrix::from_columns(field, n, &cols);
            if let Ok(c) = m.solve(&cur) {
                let mut coeffs: Vec<_> = c.iter().map(|&x| -x).collect();
                coeffs.push(field.one());
                return Poly::new(field, coeffs);
            }
        } else if crate::matrix::is_zero_vector(&cur) {
            return Poly::one(field);
        }
        let next = a.mul_vec(&cur);
        cols.push(cur);
        cur = next;
    }
    unreachable!("Krylov sequence must become dependent within n steps")
}

pub fn min_poly(a: &Matrix) -> Result<Poly> {
    require_square(a)?;
    let field = a.field();
    let n = a.rows();
    Ok((0..n).fold(Poly::one(field), |acc, i| {
        acc.lcm(&local_min_poly(a, &crate::matrix::unit_vector(field, n, i)))
    }))
}

pub fn is_regular(a: &Matrix) -> Result<bool> {
    Ok(min_poly(a)? == char_poly(a)?)
}

/// Companion matrix acting on `v, Av, …`: `A b_i = b_{i+1}`, last column `−c`.
pub fn companion(f: &Poly) -> Matrix {
    let field = f.field();
    let k = f.degree().expect("companion of the zero polynomial");
    let f = f.monic();
    let mut m = Matrix::zeros(field, k, k);
    for i in 0..k {
        if i + 1 < k {
            m[(i + 1, i)] = field.one();
        }
        m[(i, k - 1)] = -f.coeff(i);
    }
    m
}

/// `f(A)^e` generalized eigenspace for each monic irreducible factor `f`.
pub fn generalized_eigenspaces(a: &Matrix) -> Result<BTreeMap<Poly, Subspace>> {
    let fz = factor(&char_poly(a)?)?;
    Ok(fz
        .factors
        .into_iter()
        .map(|(f, e)| {
            let ker = f.eval_matrix(a).pow(e as u64).kernel();
            (f, ker)
        })
        .collect())
}

/// Generators of a cyclic decomposition of the `f`-primary part of `A`.
///
/// At each level `k` the chosen vectors lift an `L`-basis of
/// `ker N^k / (ker N^{k−1} + N ker N^{k+1})`, where `N = f(A)` and
/// `L = K[x]/f`; each generator spans a cyclic subspace with annihilator `f^k`.
pub fn primary_generators(a: &Matrix, f: &Poly, exponent: usize) -> Vec<(Vector, usize)> {
    let field = a.field();
    let n = a.rows();
    let deg = f.degree().unwrap();
    let nmat = f.eval_matrix(a);
    let mut kernels = vec![Subspace::zero(field, n)];
    let mut power = Matrix::identity(field, n);
    for _ in 0..=exponent {
        power = &power * &nmat;
        kernels.push(power.kernel());
    }
    let mut out = Vec::new();
    for k in (1..=exponent).rev() {
        let denom = kernels[k - 1].sum(&kernels[k + 1].map(&nmat));
        let mut span = denom;
        for c in kernels[k].basis() {
            if span.contains(&c) {
                continue;
            }
            let orbit = krylov(a, &c, deg);
            span = span.sum(&Subspace::span(field, n, &orbit));
            out.push((c, k));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompanionBlock {
    pub factor: Poly,
    pub exponent: usize,
}

impl CompanionBlock {
    pub fn poly(&self) -> Poly {
        self.factor.pow(self.exponent as u64)
    }

    pub fn dim(&self) -> usize {
        self.factor.degree().unwrap() * self.exponent
    }
}

#[derive(Clone, Debug)]
pub struct RationalCanonicalForm {
    /// Sorted by factor, then exponent.
    pub blocks: Vec<CompanionBlock>,
    /// One cyclic generator per block.
    pub generators: Vec<Vector>,
    /// `P` with `P A P⁻¹` equal to [`Self::canonical_matrix`].
    pub change_of_basis: Matrix,
}

impl RationalCanonicalForm {
    pub fn canonical_matrix(&self, field: Field) -> Matrix {
        let blocks: Vec<Matrix> = self.blocks.iter().map(|b| companion(&b.poly())).collect();
        Matrix::block_diag(field, &blocks)
    }
}

pub fn rational_canonical_form(a: &Matrix) -> Result<RationalCanonicalForm> {
    require_square(a)?;
    let field = a.field();
    let n = a.rows();
    let fz = factor(&char_poly(a)?)?;
    let mut pieces: Vec<(CompanionBlock, Vector)> = Vec::new();
    for (f, e) in &fz.factors {
        for (g, k) in primary_generators(a, f, *e) {
            pieces.push((CompanionBlock { factor: f.clone(), exponent: k }, g));
        }
    }
    pieces.sort_by(|x, y| x.0.cmp(&y.0));
    let mut cols = Vec::with_capacity(n);
    for (b, g) in &pieces {
        cols.extend(krylov(a, g, b.dim()));
    }
    let basis = Matrix::from_columns(field, n, &cols);
    let change_of_basis = basis
        .inverse()
        .ok_or_else(|| Error::Internal("cyclic generators are not independent".into()))?;
    let (blocks, generators) = pieces.into_iter().unzip();
    Ok(RationalCanonicalForm { blocks, generators, change_of_basis })
}

/// Some `P` with `P A P⁻¹ = C`, or `None` when `A` and `C` are not similar.
pub fn similarity_witness(a: &Matrix, c: &Matrix) -> Result<Option<Matrix>> {
    require_square(a)?;
    require_square(c)?;
    if a.rows() != c.rows() {
        return Err(Error::Dimension(format!("sizes {} and {} differ", a.rows(), c.rows())));
    }
    let ra = rational_canonical_form(a)?;
    let rc = rational_canonical_form(c)?;
    if ra.blocks != rc.blocks {
        return Ok(None);
    }
    let pc_inv = rc.change_of_basis.inverse().unwrap();
    Ok(Some(&pc_inv * &ra.change_of_basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::unit_vector;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn char_poly_examples() {
        let k = f3();
        assert_eq!(char_poly(&Matrix::zeros(k, 2, 2)).unwrap(), Poly::from_ints(k, &[0, 0, 1]));
        assert_eq!(char_poly(&Matrix::identity(k, 2)).unwrap(), Poly::from_ints(k, &[1, 1, 1]));
        let a = Matrix::from_ints(k, &[&[0, 1], &[-1, 0]]);
        assert_eq!(char_poly(&a).unwrap(), Poly::from_ints(k, &[1, 0, 1]));
        assert!(char_poly(&Matrix::zeros(k, 2, 3)).is_err());
    }

    #[test]
    fn min_poly_examples() {
        let k = f3();
        assert_eq!(min_poly(&Matrix::identity(k, 3)).unwrap(), Poly::from_ints(k, &[-1, 1]));
        let n = Matrix::from_ints(k, &[&[0, 1], &[0, 0]]);
        assert_eq!(min_poly(&n).unwrap(), Poly::from_ints(k, &[0, 0, 1]));
        let d = Matrix::diagonal(k, &[k.int(1), k.int(2)]);
        assert_eq!(min_poly(&d).unwrap(), Poly::from_ints(k, &[2, 0, 1]));
        assert_eq!(min_poly(&Matrix::zeros(k, 2, 2)).unwrap(), Poly::x(k));
    }

    #[test]
    fn rcf_examples() {
        let k = f3();
        let r = rational_canonical_form(&Matrix::zeros(k, 2, 2)).unwrap();
        assert_eq!(r.blocks, vec![CompanionBlock { factor: Poly::x(k), exponent: 1 }; 2]);
        let a = Matrix::from_ints(k, &[&[0, 1], &[-1, 0]]);
        let r = rational_canonical_form(&a).unwrap();
        assert_eq!(r.blocks, vec![CompanionBlock { factor: Poly::from_ints(k, &[1, 0, 1]), exponent: 1 }]);
        let d = Matrix::diagonal(k, &[k.int(1), k.int(1), k.int(2)]);
        let r = rational_canonical_form(&d).unwrap();
        let lin = |c| CompanionBlock { factor: Poly::from_ints(k, &[c, 1]), exponent: 1 };
        // x − 2 = x + 1 sorts before x − 1 = x + 2
        assert_eq!(r.blocks, vec![lin(1), lin(2), lin(2)]);
        let p = &r.change_of_basis;
        assert_eq!(&(p * &d) * &p.inverse().unwrap(), r.canonical_matrix(k));
    }

    #[test]
    fn similarity_examples() {
        let k = f3();
        let a = Matrix::from_ints(k, &[&[0, 1], &[0, 0]]);
        let p = similarity_witness(&a, &a.transpose()).unwrap().unwrap();
        assert_eq!(&(&p * &a) * &p.inverse().unwrap(), a.transpose());
        assert!(similarity_witness(&Matrix::zeros(k, 2, 2), &Matrix::identity(k, 2)).unwrap().is_none());
        assert!(similarity_witness(&a, &Matrix::zeros(k, 3, 3)).is_err());
    }

    #[test]
    fn eigenspace_examples() {
        let k = f3();
        let d = Matrix::diagonal(k, &[k.int(1), k.int(2)]);
        let es = generalized_eigenspaces(&d).unwrap();
        assert_eq!(es[&Poly::from_ints(k, &[-1, 1])], Subspace::span(k, 2, &[unit_vector(k, 2, 0)]));
        assert_eq!(es[&Poly::from_ints(k, &[-2, 1])], Subspace::span(k, 2, &[unit_vector(k, 2, 1)]));
        let n = Matrix::from_ints(k, &[&[0, 1], &[0, 0]]);
        assert_eq!(generalized_eigenspaces(&n).unwrap()[&Poly::x(k)], Subspace::whole(k, 2));
        let c = companion(&Poly::from_ints(k, &[1, 0, 1]));
        let m = Matrix::block_diag(k, &[c, Matrix::identity(k, 1)]);
        let es = generalized_eigenspaces(&m).unwrap();
        assert_eq!(
            es[&Poly::from_ints(k, &[1, 0, 1])],
            Subspace::span(k, 3, &[unit_vector(k, 3, 0), unit_vector(k, 3, 1)])
        );
        assert_eq!(es[&Poly::from_ints(k, &[-1, 1])], Subspace::span(k, 3, &[unit_vector(k, 3, 2)]));
    }
}
