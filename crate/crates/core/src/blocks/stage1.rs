use crate::canonical::{char_poly, krylov, primary_generators};
use crate::error::{Error, Result};
use crate::factor::factor;
use crate::form::FormSpace;
use crate::matrix::{Matrix, Vector};
use crate::poly::Poly;
use crate::subspace::Subspace;

use super::{BlockVariant, Piece, SimpleBlock};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SummandTag {
    /// `V_f ⊕ V_g` with `g = f*` up to a unit and `g ≠ f`.
    SplitPair { f: Poly, dual: Poly },
    /// `V_f` with `f* = ±f`.
    TypeB { f: Poly },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage1Summand {
    pub subspace: Subspace,
    pub tag: SummandTag,
}

/// Groups generalized eigenspaces into pairwise orthogonal, non-degenerate summands.
pub fn stage1_eigensplit(space: &FormSpace, a: &Matrix) -> Result<Vec<Stage1Summand>> {
    space.require_lie_algebra(a)?;
    let fz = factor(&char_poly(a)?)?;
    let eig = |f: &Poly, e: usize| f.eval_matrix(a).pow(e as u64).kernel();
    let mut out = Vec::new();
    for (f, e) in &fz.factors {
        let dual = f.star().monic();
        if dual == *f {
            out.push(Stage1Summand { subspace: eig(f, *e), tag: SummandTag::TypeB { f: f.clone() } });
        } else if f < &dual {
            let (_, e2) = fz
                .factors
                .iter()
                .find(|(g, _)| *g == dual)
                .ok_or_else(|| Error::Internal(format!("{dual} missing from the characteristic polynomial")))?;
            let subspace = eig(f, *e).sum(&eig(&dual, *e2));
            out.push(Stage1Summand { subspace, tag: SummandTag::SplitPair { f: f.clone(), dual } });
        }
    }
    Ok(out)
}

/// Splits a `SplitPair` summand into simple split blocks `Z ⊕ Z*`, one for
/// each cyclic summand `Z` of `V_f`.
pub fn split_blocks(space: &FormSpace, a: &Matrix, summand: &Stage1Summand) -> Result<Vec<SimpleBlock>> {
    let SummandTag::SplitPair { f, dual } = &summand.tag else {
        return Err(Error::Precondition("summand is not a split pair".into()));
    };
    let piece = Piece::from_subspace(space, a, &summand.subspace)?;
    let k = piece.field();
    let m = piece.dim();
    let vf = f.eval_matrix(&piece.a).pow(m as u64).kernel().basis();
    let vg = dual.eval_matrix(&piece.a).pow(m as u64).kernel().basis();
    if vf.len() != vg.len() || vf.len() + vg.len() != m {
        return Err(Error::Internal("split pair halves have unequal dimension".into()));
    }
    let half = piece.sub(&vf);
    let e = vf.len() / f.degree().unwrap();
    let to_local = |v: &Vector| Matrix::from_columns(k, m, &vf).mul_vec(v);

    let mut zs: Vec<(usize, Vec<Vector>)> = Vec::new();
    for (c, exp) in primary_generators(&half.a, f, e) {
        let chain = krylov(&half.a, &c, f.degree().unwrap() * exp);
        zs.push((exp, chain.iter().map(to_local).collect()));
    }
    let z_all: Vec<Vector> = zs.iter().flat_map(|(_, z)| z.iter().cloned()).collect();
    // pairing[i][l] = <z_i, w_l>; the dual vector for z_i is conj(P⁻¹ e_i) in w-coordinates
    let pairing = Matrix::from_fn(k, m / 2, m / 2, |i, l| piece.pair(&z_all[i], &vg[l]));
    let inv = pairing.inverse().ok_or_else(|| Error::Internal("split pair is not dually paired".into()))?.conj();
    let w_mat = Matrix::from_columns(k, m, &vg);
    let mut out = Vec::new();
    let mut offset = 0;
    for (exp, z) in zs {
        let duals: Vec<Vector> = (offset..offset + z.len()).map(|i| w_mat.mul_vec(&inv.col(i))).collect();
        offset += z.len();
        let mut basis = z;
        basis.extend(duals);
        out.push(piece.block(BlockVariant::Split, f.clone(), exp, &basis));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::form::GroupKind;

    #[test]
    fn examples() {
        let k = Field::prime(3).unwrap();
        let h = FormSpace::new(GroupKind::O, Matrix::from_ints(k, &[&[0, 1], &[1, 0]])).unwrap();
        let s = stage1_eigensplit(&h, &Matrix::from_ints(k, &[&[1, 0], &[0, -1]])).unwrap();
        assert_eq!(s.len(), 1);
        assert!(matches!(s[0].tag, SummandTag::SplitPair { .. }));
        assert_eq!(s[0].subspace.dim(), 2);

        let sp = FormSpace::standard(GroupKind::Sp, k, 2).unwrap();
        let s = stage1_eigensplit(&sp, &Matrix::from_ints(k, &[&[0, 1], &[0, 0]])).unwrap();
        assert_eq!(s, vec![Stage1Summand { subspace: Subspace::whole(k, 2), tag: SummandTag::TypeB { f: Poly::x(k) } }]);

        let s = stage1_eigensplit(&sp, &Matrix::zeros(k, 2, 2)).unwrap();
        assert_eq!(s.len(), 1);
        assert!(matches!(s[0].tag, SummandTag::TypeB { .. }));
    }
}
