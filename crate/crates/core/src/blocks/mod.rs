//! Orthogonal decomposition of `A ∈ g(V)` into simple blocks.
//!
//! Three stages: separate generalized eigenspaces into split pairs and
//! self-dual summands, cut each self-dual summand into homogeneous pieces
//! (all companion blocks of one size), then peel simple blocks off each
//! homogeneous piece.

mod check;
mod descent;
mod stage1;
mod stage2;
mod stage3;

use std::collections::BTreeMap;
use std::fmt;

pub use check::{canonical_pair_gram, check_block};
pub use descent::{descend_to_unitary, Descent};
pub use stage1::{split_blocks, stage1_eigensplit, Stage1Summand, SummandTag};
pub use stage2::{stage2_homogeneous, HomogeneousSummand};
pub use stage3::stage3_simple;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::form::{FormKind, FormSpace, GroupKind};
use crate::matrix::{Matrix, Vector};
use crate::poly::Poly;
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockVariant {
    Split,
    NonSplit,
    EvenNilpotentO,
    OddNilpotentSp,
}

impl BlockVariant {
    pub fn name(self) -> &'static str {
        match self {
            BlockVariant::Split => "Split",
            BlockVariant::NonSplit => "NonSplit",
            BlockVariant::EvenNilpotentO => "EvenNilpotentO",
            BlockVariant::OddNilpotentSp => "OddNilpotentSp",
        }
    }
}

impl fmt::Display for BlockVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One simple orthogonal summand.
///
/// For `Split` the basis is a cyclic basis of `V'` followed by the dual
/// basis of `V'*`, and `f^d` is the characteristic polynomial of `A' = A|V'`.
/// For the nilpotent pair variants the basis is `e, …, A^{d−1}e, f, …, A^{d−1}f`.
/// Otherwise it is the cyclic basis `v, Av, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleBlock {
    pub variant: BlockVariant,
    pub f: Poly,
    pub d: usize,
    pub basis: Vec<Vector>,
    pub operator: Matrix,
    pub gram: Matrix,
}

impl SimpleBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_matrix(&self) -> Matrix {
        let n = self.basis.first().map_or(0, |v| v.len());
        Matrix::from_columns(self.operator.field(), n, &self.basis)
    }

    pub fn span(&self) -> Subspace {
        let n = self.basis.first().map_or(0, |v| v.len());
        Subspace::span(self.operator.field(), n, &self.basis)
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub blocks: Vec<SimpleBlock>,
    /// `M`: the block bases as columns.
    pub basis: Matrix,
    /// `P = M⁻¹`, so `P A P⁻¹` is block diagonal.
    pub change_of_basis: Matrix,
}

/// Conjugation-invariant summary of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockSignature {
    pub variant: BlockVariant,
    pub f: Poly,
    pub d: usize,
    pub count: usize,
    /// Discriminant square class of the form on all blocks of this type
    /// (symmetric forms only).
    pub discriminant_square: Option<bool>,
}

impl Decomposition {
    pub fn empty(field: Field) -> Self {
        Decomposition { blocks: Vec::new(), basis: Matrix::zeros(field, 0, 0), change_of_basis: Matrix::zeros(field, 0, 0) }
    }

    pub fn from_blocks(field: Field, n: usize, blocks: Vec<SimpleBlock>) -> Result<Self> {
        let cols: Vec<Vector> = blocks.iter().flat_map(|b| b.basis.iter().cloned()).collect();
        if cols.len() != n {
            return Err(Error::Internal(format!("blocks span {} of {} dimensions", cols.len(), n)));
        }
        let basis = Matrix::from_columns(field, n, &cols);
        let change_of_basis =
            basis.inverse().ok_or_else(|| Error::Internal("block bases are not independent".into()))?;
        Ok(Decomposition { blocks, basis, change_of_basis })
    }

    pub fn block_operator(&self) -> Matrix {
        let ops: Vec<Matrix> = self.blocks.iter().map(|b| b.operator.clone()).collect();
        Matrix::block_diag(self.basis.field(), &ops)
    }

    pub fn block_gram(&self) -> Matrix {
        let grams: Vec<Matrix> = self.blocks.iter().map(|b| b.gram.clone()).collect();
        Matrix::block_diag(self.basis.field(), &grams)
    }

    /// Every block passes its checker, blocks are pairwise orthogonal and
    /// the block data reassembles to `(A, B)` exactly.
    pub fn verify(&self, space: &FormSpace, a: &Matrix) -> Result<()> {
        for (i, b) in self.blocks.iter().enumerate() {
            check_block(space, a, b).map_err(|e| Error::Internal(format!("block {i}: {e}")))?;
        }
        let m = &self.basis;
        if !(&self.change_of_basis * m).is_identity() {
            return Err(Error::Internal("change of basis is not M⁻¹".into()));
        }
        if &(&self.change_of_basis * a) * m != self.block_operator() {
            return Err(Error::Internal("operator does not reassemble".into()));
        }
        if &(&m.transpose() * space.gram()) * &m.conj() != self.block_gram() {
            return Err(Error::Internal("blocks are not pairwise orthogonal".into()));
        }
        Ok(())
    }

    pub fn signature(&self, space: &FormSpace) -> Vec<BlockSignature> {
        let mut groups: BTreeMap<(BlockVariant, Poly, usize), Vec<&SimpleBlock>> = BTreeMap::new();
        for b in &self.blocks {
            groups.entry((b.variant, b.f.clone(), b.d)).or_default().push(b);
        }
        groups
            .into_iter()
            .map(|((variant, f, d), bs)| {
                let discriminant_square = (space.kind() == FormKind::Symmetric).then(|| {
                    bs.iter().fold(space.field().one(), |acc, b| acc * b.gram.det()).is_square_in_prime_field()
                });
                BlockSignature { variant, f, d, count: bs.len(), discriminant_square }
            })
            .collect()
    }
}

/// An `A`-invariant subspace in coordinates of its own basis.
#[derive(Clone, Debug)]
pub(crate) struct Piece {
    /// Ambient coordinates of the basis, as columns.
    pub basis: Matrix,
    pub a: Matrix,
    pub gram: Matrix,
}

impl Piece {
    pub fn whole(space: &FormSpace, a: &Matrix) -> Piece {
        Piece { basis: Matrix::identity(space.field(), space.dim()), a: a.clone(), gram: space.gram().clone() }
    }

    pub fn from_subspace(space: &FormSpace, a: &Matrix, s: &Subspace) -> Result<Piece> {
        if !s.is_invariant(a) {
            return Err(Error::Precondition("summand is not A-invariant".into()));
        }
        let p = Piece::whole(space, a).sub(&s.basis());
        if p.gram.inverse().is_none() {
            return Err(Error::Precondition("form is degenerate on the summand".into()));
        }
        Ok(p)
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    /// Restriction to the invariant subspace spanned by `cols` (local coordinates).
    pub fn sub(&self, cols: &[Vector]) -> Piece {
        let k = self.field();
        let c = Matrix::from_columns(k, self.dim(), cols);
        let a = c.solve_matrix(&(&self.a * &c)).expect("subspace is invariant");
        let gram = &(&c.transpose() * &self.gram) * &c.conj();
        Piece { basis: &self.basis * &c, a, gram }
    }

    pub fn pair(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let n = self.dim();
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

    pub fn gram_of(&self, vs: &[Vector]) -> Matrix {
        Matrix::from_fn(self.field(), vs.len(), vs.len(), |i, j| self.pair(&vs[i], &vs[j]))
    }

    /// `{w : <s, w> = 0 for all s ∈ vs}`.
    pub fn perp(&self, vs: &[Vector]) -> Subspace {
        if vs.is_empty() {
            return Subspace::whole(self.field(), self.dim());
        }
        let gt = self.gram.transpose();
        let rows: Vec<Vector> = vs.iter().map(|s| crate::matrix::vec_conj(&gt.mul_vec(s))).collect();
        Matrix::from_rows(self.field(), &rows).kernel()
    }

    pub fn ambient(&self, v: &[Scalar]) -> Vector {
        self.basis.mul_vec(v)
    }

    pub fn subspace(&self) -> Subspace {
        Subspace::span(self.field(), self.basis.rows(), &self.basis.columns())
    }

    /// Local vectors `vs` spanning an invariant subspace, turned into a block.
    pub fn block(&self, variant: BlockVariant, f: Poly, d: usize, vs: &[Vector]) -> SimpleBlock {
        let c = Matrix::from_columns(self.field(), self.dim(), vs);
        let operator = c.solve_matrix(&(&self.a * &c)).expect("block is invariant");
        SimpleBlock {
            variant,
            f,
            d,
            basis: vs.iter().map(|v| self.ambient(v)).collect(),
            operator,
            gram: self.gram_of(vs),
        }
    }
}

/// The full pipeline.
/// The block as a form space in its own right (SO blocks use O).
pub fn block_support_space(space: &FormSpace, b: &SimpleBlock) -> Result<FormSpace> {
    let group = if space.group() == GroupKind::SO { GroupKind::O } else { space.group() };
    FormSpace::new(group, b.gram.clone())
}

pub fn classify(space: &FormSpace, a: &Matrix) -> Result<Decomposition> {
    space.require_lie_algebra(a)?;
    let k = space.field();
    let n = space.dim();
    if n == 0 {
        return Ok(Decomposition::empty(k));
    }
    let mut blocks = Vec::new();
    for summand in stage1_eigensplit(space, a)? {
        match &summand.tag {
            SummandTag::SplitPair { .. } => blocks.extend(split_blocks(space, a, &summand)?),
            SummandTag::TypeB { f } => {
                for h in stage2_homogeneous(space, a, &summand.subspace, f)? {
                    blocks.extend(stage3_simple(space, a, &h)?);
                }
            }
        }
    }
    let dec = Decomposition::from_blocks(k, n, blocks)?;
    dec.verify(space, a)?;
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::GroupKind;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn classify_examples() {
        let k = f3();
        let h = FormSpace::new(GroupKind::O, Matrix::from_ints(k, &[&[0, 1], &[1, 0]])).unwrap();
        let a = Matrix::from_ints(k, &[&[1, 0], &[0, -1]]);
        let d = classify(&h, &a).unwrap();
        assert_eq!(d.blocks.len(), 1);
        assert_eq!((d.blocks[0].variant, d.blocks[0].dim()), (BlockVariant::Split, 2));

        let s = FormSpace::standard(GroupKind::Sp, k, 2).unwrap();
        let n = Matrix::from_ints(k, &[&[0, 1], &[0, 0]]);
        let d = classify(&s, &n).unwrap();
        assert_eq!(d.blocks.len(), 1);
        assert_eq!((d.blocks[0].variant, d.blocks[0].d), (BlockVariant::NonSplit, 2));
        assert_eq!(d.blocks[0].f, Poly::x(k));

        let o = FormSpace::standard(GroupKind::O, k, 2).unwrap();
        let d = classify(&o, &Matrix::zeros(k, 2, 2)).unwrap();
        assert_eq!(d.blocks.len(), 2);
        assert!(d.blocks.iter().all(|b| b.variant == BlockVariant::NonSplit && b.d == 1));

        let d = classify(&s, &Matrix::zeros(k, 2, 2)).unwrap();
        assert_eq!(d.blocks.len(), 1);
        assert_eq!(d.blocks[0].variant, BlockVariant::OddNilpotentSp);
        assert_eq!(d.blocks[0].gram, Matrix::from_ints(k, &[&[0, 1], &[-1, 0]]));
    }

    #[test]
    fn empty_space() {
        let k = f3();
        let s = FormSpace::standard(GroupKind::O, k, 0).unwrap();
        let d = classify(&s, &Matrix::zeros(k, 0, 0)).unwrap();
        assert!(d.blocks.is_empty());
    }

    #[test]
    fn rejects_operators_outside_the_algebra() {
        let k = f3();
        let o = FormSpace::standard(GroupKind::O, k, 2).unwrap();
        assert_eq!(classify(&o, &Matrix::identity(k, 2)).unwrap_err(), Error::NotInLieAlgebra);
    }
}
