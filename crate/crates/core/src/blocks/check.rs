//! Structural checks for each block variant.

use crate::canonical::{char_poly, companion, min_poly};
use crate::error::{Error, Result};
use crate::factor::is_irreducible;
use crate::form::{FormSpace, GroupKind};
use crate::matrix::Matrix;
use crate::poly::Poly;

use super::{BlockVariant, SimpleBlock};

fn fail(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}

fn is_minimal_regular(op: &Matrix, f: &Poly, d: usize) -> Result<bool> {
    let target = f.pow(d as u64);
    Ok(char_poly(op)? == target && min_poly(op)? == target)
}

pub fn check_block(space: &FormSpace, a: &Matrix, b: &SimpleBlock) -> Result<()> {
    let k = space.field();
    let n = space.dim();
    let m = b.dim();
    if m == 0 || b.operator.rows() != m || b.gram.rows() != m || b.basis.iter().any(|v| v.len() != n) {
        return Err(fail("block data has inconsistent sizes"));
    }
    let basis = b.basis_matrix();
    if basis.rank() != m {
        return Err(fail("block basis is dependent"));
    }
    if a * &basis != &basis * &b.operator {
        return Err(fail("operator does not match A on the basis"));
    }
    if space.gram_of(&b.basis) != b.gram {
        return Err(fail("Gram does not match the form on the basis"));
    }
    if !is_irreducible(&b.f) || !b.f.is_monic() || b.d == 0 {
        return Err(fail("f is not monic irreducible"));
    }
    let x = Poly::x(k);
    let self_dual = b.f.star().monic() == b.f;
    match b.variant {
        BlockVariant::Split => {
            if m % 2 == 1 {
                return Err(fail("split block of odd dimension"));
            }
            let h = m / 2;
            let g = &b.gram;
            if !g.submatrix(0..h, 0..h).is_zero() || !g.submatrix(h..m, h..m).is_zero() {
                return Err(fail("split halves are not isotropic"));
            }
            let op = &b.operator;
            if !op.submatrix(0..h, h..m).is_zero() || !op.submatrix(h..m, 0..h).is_zero() {
                return Err(fail("operator mixes the split halves"));
            }
            if !is_minimal_regular(&op.submatrix(0..h, 0..h), &b.f, b.d)? {
                return Err(fail("A' is not minimal regular with the recorded f^d"));
            }
            if self_dual {
                return Err(fail("split block with f* = ±f"));
            }
        }
        BlockVariant::NonSplit => {
            if !is_minimal_regular(&b.operator, &b.f, b.d)? {
                return Err(fail("non-split block is not minimal regular"));
            }
            if !self_dual {
                return Err(fail("non-split block with f* ≠ ±f"));
            }
            if b.f == x {
                let excluded = match space.group() {
                    GroupKind::O | GroupKind::SO => b.d.is_multiple_of(2),
                    GroupKind::Sp => b.d % 2 == 1,
                    GroupKind::U => false,
                };
                if excluded {
                    return Err(fail("nilpotent non-split block of excluded parity"));
                }
            }
        }
        BlockVariant::EvenNilpotentO | BlockVariant::OddNilpotentSp => {
            let (ok_group, ok_parity) = if b.variant == BlockVariant::EvenNilpotentO {
                (matches!(space.group(), GroupKind::O | GroupKind::SO), b.d.is_multiple_of(2))
            } else {
                (space.group() == GroupKind::Sp, b.d % 2 == 1)
            };
            if !ok_group || !ok_parity || b.f != x || m != 2 * b.d {
                return Err(fail("nilpotent pair block of the wrong kind, parity or size"));
            }
            let shift = companion(&x.pow(b.d as u64));
            if b.operator != Matrix::block_diag(k, &[shift.clone(), shift]) {
                return Err(fail("basis is not e, Ae, …, f, Af, …"));
            }
            let expected = canonical_pair_gram(space, b.d);
            if b.gram != expected {
                return Err(fail("Gram misses the canonical pattern"));
            }
        }
    }
    let local = &b.gram;
    let adj = (&(&local.inverse().ok_or_else(|| fail("block form is degenerate"))? * &b.operator.transpose()) * local).conj();
    if adj != -&b.operator {
        return Err(fail("block operator is not skew-adjoint"));
    }
    Ok(())
}

/// `<A^i e, A^j f> = (−1)^j δ_{i+j, d−1}`, all other pairings zero except by symmetry.
pub fn canonical_pair_gram(space: &FormSpace, d: usize) -> Matrix {
    let k = space.field();
    let eps = k.int(space.kind().epsilon());
    let mut g = Matrix::zeros(k, 2 * d, 2 * d);
    for i in 0..d {
        let j = d - 1 - i;
        let v = if j.is_multiple_of(2) { k.one() } else { -k.one() };
        g[(i, d + j)] = v;
        g[(d + j, i)] = eps * v.conj();
    }
    g
}
