use crate::canonical::{char_poly, krylov};
use crate::error::{Error, Result};
use crate::factor::factor;
use crate::form::FormSpace;
use crate::matrix::{Matrix, Vector};
use crate::poly::Poly;
use crate::subspace::Subspace;

use super::Piece;

/// A non-degenerate invariant summand on which every companion block of
/// `A` is a copy of `f^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousSummand {
    pub subspace: Subspace,
    pub f: Poly,
    pub d: usize,
}

pub(crate) fn exponent_of(piece: &Piece, f: &Poly) -> Result<usize> {
    let fz = factor(&char_poly(&piece.a)?)?;
    match fz.factors.as_slice() {
        [(g, e)] if g == f => Ok(*e),
        [] => Ok(0),
        _ => Err(Error::Precondition(format!("characteristic polynomial is not a power of {f}"))),
    }
}

/// `f(A)^j V = ker f(A)^{d−j}` for `0 ≤ j ≤ d`.
pub(crate) fn is_homogeneous(piece: &Piece, f: &Poly, d: usize) -> bool {
    let n = f.eval_matrix(&piece.a);
    (0..=d).all(|j| n.pow(j as u64).image() == n.pow((d - j) as u64).kernel())
}

/// Peels off homogeneous summands, smallest block size first.
pub(crate) fn stage2_piece(mut piece: Piece, f: &Poly) -> Result<Vec<(Piece, usize)>> {
    let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
    let mut out = Vec::new();
    while piece.dim() > 0 {
        let k = piece.field();
        let n = f.eval_matrix(&piece.a);
        let nv = n.image();
        let mut kernels = vec![Subspace::zero(k, piece.dim())];
        let mut power = Matrix::identity(k, piece.dim());
        let m = loop {
            power = &power * &n;
            let ker = power.kernel();
            let i = kernels.len();
            let escapes = !nv.contains_subspace(&ker);
            kernels.push(ker);
            if escapes {
                break i;
            }
            if i > piece.dim() {
                return Err(Error::Internal("no kernel escapes f(A)V".into()));
            }
        };
        let next = (&power * &n).kernel();
        // lifts of an L-basis of V_m / f(A) V_{m+1}
        let mut span = next.map(&n);
        let mut cyclic: Vec<Vector> = Vec::new();
        for c in kernels[m].basis() {
            if span.contains(&c) {
                continue;
            }
            span = span.sum(&Subspace::span(k, piece.dim(), &krylov(&piece.a, &c, deg)));
            cyclic.extend(krylov(&piece.a, &c, deg * m));
        }
        let u = Subspace::span(k, piece.dim(), &cyclic);
        if u.dim() != cyclic.len() || piece.gram_of(&u.basis()).inverse().is_none() {
            return Err(Error::Internal("homogeneous summand is degenerate".into()));
        }
        let rest = piece.perp(&u.basis());
        out.push((piece.sub(&u.basis()), m));
        piece = piece.sub(&rest.basis());
    }
    Ok(out)
}

pub fn stage2_homogeneous(
    space: &FormSpace,
    a: &Matrix,
    summand: &Subspace,
    f: &Poly,
) -> Result<Vec<HomogeneousSummand>> {
    space.require_lie_algebra(a)?;
    if f.star().monic() != *f {
        return Err(Error::Precondition(format!("{f} is not self-dual")));
    }
    let piece = Piece::from_subspace(space, a, summand)?;
    exponent_of(&piece, f)?;
    Ok(stage2_piece(piece, f)?
        .into_iter()
        .map(|(p, d)| HomogeneousSummand { subspace: p.subspace(), f: f.clone(), d })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::form::GroupKind;

    #[test]
    fn distinct_sizes_are_separated() {
        let k = Field::prime(3).unwrap();
        // sp4 = (d = 2 cyclic block) ⊥ (A = 0 on a hyperbolic plane)
        let j = Matrix::from_ints(k, &[&[0, 1], &[-1, 0]]);
        let s = FormSpace::new(GroupKind::Sp, Matrix::block_diag(k, &[j.clone(), j])).unwrap();
        let a = Matrix::block_diag(k, &[Matrix::from_ints(k, &[&[0, 1], &[0, 0]]), Matrix::zeros(k, 2, 2)]);
        assert!(s.in_lie_algebra(&a));
        let hs = stage2_homogeneous(&s, &a, &Subspace::whole(k, 4), &Poly::x(k)).unwrap();
        let mut sizes: Vec<(usize, usize)> = hs.iter().map(|h| (h.d, h.subspace.dim())).collect();
        sizes.sort();
        assert_eq!(sizes, vec![(1, 2), (2, 2)]);
    }

    #[test]
    fn homogeneous_input_is_kept_whole() {
        let k = Field::prime(3).unwrap();
        let o = FormSpace::standard(GroupKind::O, k, 3).unwrap();
        let hs = stage2_homogeneous(&o, &Matrix::zeros(k, 3, 3), &Subspace::whole(k, 3), &Poly::x(k)).unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!((hs[0].d, hs[0].subspace.dim()), (1, 3));
    }
}
