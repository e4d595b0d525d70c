use crate::canonical::krylov;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::form::{first_nonisotropic, FormSpace, GroupKind};
use crate::matrix::{vec_add, vec_scale, zero_vector, Matrix, Vector};
use crate::poly::Poly;

use super::stage2::{exponent_of, is_homogeneous, HomogeneousSummand};
use super::{BlockVariant, Piece, SimpleBlock};

/// Nilpotent homogeneous pieces whose induced form on `V/AV` is alternating.
pub(crate) fn is_skew(group: GroupKind, f: &Poly, d: usize) -> bool {
    f.degree() == Some(1) && f.coeff(0).is_zero() && match group {
        GroupKind::O | GroupKind::SO => d.is_multiple_of(2),
        GroupKind::Sp => d % 2 == 1,
        GroupKind::U => false,
    }
}

fn combine(piece: &Piece, vs: &[Vector], coords: &[Scalar]) -> Vector {
    vs.iter().zip(coords).fold(zero_vector(piece.field(), piece.dim()), |acc, (v, &c)| vec_add(&acc, &vec_scale(c, v)))
}

fn pow_apply(piece: &Piece, v: &[Scalar], k: usize) -> Vector {
    (0..k).fold(v.to_vec(), |acc, _| piece.a.mul_vec(&acc))
}

pub(crate) fn stage3_piece(group: GroupKind, mut piece: Piece, f: &Poly, d: usize) -> Result<Vec<SimpleBlock>> {
    let skew = is_skew(group, f, d);
    let x = Poly::x(piece.field());
    let h = if group == GroupKind::Sp && *f != x { &x * &f.pow(d as u64 - 1) } else { f.pow(d as u64 - 1) };
    let len = f.degree().unwrap() * d;
    let mut out = Vec::new();
    while piece.dim() > 0 {
        let n = f.eval_matrix(&piece.a);
        let reps = n.image().complement_basis();
        let block_vectors = if skew {
            let (e, w) = nilpotent_pair(&piece, &reps, d)?;
            let mut vs = krylov(&piece.a, &e, d);
            vs.extend(krylov(&piece.a, &w, d));
            let variant = if group == GroupKind::Sp { BlockVariant::OddNilpotentSp } else { BlockVariant::EvenNilpotentO };
            out.push(piece.block(variant, f.clone(), d, &vs));
            vs
        } else {
            let ha = h.eval_matrix(&piece.a);
            let induced = Matrix::from_fn(piece.field(), reps.len(), reps.len(), |i, j| {
                piece.pair(&ha.mul_vec(&reps[i]), &reps[j])
            });
            let coords = first_nonisotropic(&induced)
                .ok_or_else(|| Error::Internal("induced form has no non-isotropic vector".into()))?;
            let v = combine(&piece, &reps, &coords);
            let vs = krylov(&piece.a, &v, len);
            if piece.gram_of(&vs).inverse().is_none() {
                return Err(Error::Internal("cyclic span is degenerate".into()));
            }
            out.push(piece.block(BlockVariant::NonSplit, f.clone(), d, &vs));
            vs
        };
        let rest = piece.perp(&block_vectors);
        piece = piece.sub(&rest.basis());
    }
    Ok(out)
}

/// Adds multiples of `A^{m−1} v_b` to `v_a` until `<A^j v_a, v_a> = 0` for all `j`.
fn clear_self_pairing(piece: &Piece, va: &mut Vector, vb: &[Scalar], d: usize) -> Result<()> {
    for _ in 0..=d {
        let Some(m) = (1..=d).find(|&m| !piece.pair(&pow_apply(piece, va, d - m), va).is_zero()) else {
            return Ok(());
        };
        let shift = pow_apply(piece, vb, m - 1);
        let c = piece.pair(&pow_apply(piece, va, d - m), va);
        let s1 = piece.pair(&pow_apply(piece, va, d - m), &shift);
        let s2 = piece.pair(&pow_apply(piece, &shift, d - m), va);
        let s3 = piece.pair(&pow_apply(piece, &shift, d - m), &shift);
        let lin = s1 + s2;
        if !s3.is_zero() || lin.is_zero() {
            return Err(Error::Internal(format!("lift correction at m = {m} is not solvable")));
        }
        *va = vec_add(va, &vec_scale(-c / lin, &shift));
    }
    Err(Error::Internal("lift correction did not terminate".into()))
}

/// `(e, f)` spanning a nilpotent pair block with the canonical Gram pattern.
fn nilpotent_pair(piece: &Piece, reps: &[Vector], d: usize) -> Result<(Vector, Vector)> {
    let k = piece.field();
    let top = |v: &[Scalar]| pow_apply(piece, v, d - 1);
    let mut v1 = reps[0].clone();
    let (j, h1j) = reps
        .iter()
        .enumerate()
        .map(|(j, c)| (j, piece.pair(&top(&v1), c)))
        .find(|(_, h)| !h.is_zero())
        .ok_or_else(|| Error::Internal("induced alternating form is degenerate".into()))?;
    let mut v2 = vec_scale(h1j.conj().inv().unwrap(), &reps[j]);
    clear_self_pairing(piece, &mut v1, &v2, d)?;
    clear_self_pairing(piece, &mut v2, &v1, d)?;
    // w = Σ y_j A^j v2 with <A^k v1, w> = δ_{k, d−1}
    let chain1 = krylov(&piece.a, &v1, d);
    let chain2 = krylov(&piece.a, &v2, d);
    let m = Matrix::from_fn(k, d, d, |r, c| piece.pair(&chain1[r], &chain2[c]));
    let mut rhs = zero_vector(k, d);
    rhs[d - 1] = k.one();
    let y: Vector = m.solve(&rhs)?.iter().map(|c| c.conj()).collect();
    let w = combine(piece, &chain2, &y);
    let chain_w = krylov(&piece.a, &w, d);
    for (i, ei) in chain1.iter().enumerate() {
        for jj in 0..d {
            let expect = if i + jj == d - 1 {
                if jj % 2 == 0 { k.one() } else { -k.one() }
            } else {
                k.zero()
            };
            if piece.pair(ei, &chain_w[jj]) != expect
                || !piece.pair(ei, &chain1[jj]).is_zero()
                || !piece.pair(&chain_w[i], &chain_w[jj]).is_zero()
            {
                return Err(Error::Internal("nilpotent pair misses the canonical Gram pattern".into()));
            }
        }
    }
    Ok((v1, w))
}

/// Simple blocks of a homogeneous summand.
pub fn stage3_simple(space: &FormSpace, a: &crate::matrix::Matrix, summand: &HomogeneousSummand) -> Result<Vec<SimpleBlock>> {
    space.require_lie_algebra(a)?;
    let piece = Piece::from_subspace(space, a, &summand.subspace)?;
    exponent_of(&piece, &summand.f)?;
    if !is_homogeneous(&piece, &summand.f, summand.d) {
        return Err(Error::Precondition("summand is not homogeneous".into()));
    }
    stage3_piece(space.group(), piece, &summand.f, summand.d)
}
