//! Twisted elements `(T, −1)` fixing a given `A ∈ g`: `TAT⁻¹ = −A` and
//! `<Tu, Tv> = <v, u>`.

use crate::blocks::{classify, BlockVariant, SimpleBlock};
use crate::canonical::similarity_witness;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::form::{FormKind, FormSpace, GroupKind};
use crate::matrix::Matrix;
use crate::twisted::TwistedElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockWitness {
    pub index: usize,
    /// Block-local matrix, acting semilinearly in the unitary case.
    pub matrix: Matrix,
    pub det: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessChecks {
    pub reverses_operator: bool,
    pub twisting_law: bool,
    pub determinant: bool,
}

impl WitnessChecks {
    pub fn all(&self) -> bool {
        self.reverses_operator && self.twisting_law && self.determinant
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub element: TwistedElement,
    pub per_block: Vec<BlockWitness>,
    pub checks: WitnessChecks,
}

fn malformed(msg: &str) -> Error {
    Error::Precondition(format!("malformed block: {msg}"))
}

fn alternating(k: crate::field::Field, signs: impl Iterator<Item = bool>) -> Matrix {
    let diag: Vec<Scalar> = signs.map(|neg| if neg { -k.one() } else { k.one() }).collect();
    Matrix::diagonal(k, &diag)
}

/// The block-level witness, in the coordinates of `b.basis`.
pub fn witness_block(space: &FormSpace, b: &SimpleBlock) -> Result<Matrix> {
    let k = space.field();
    let m = b.dim();
    let conj = space.kind() == FormKind::Hermitian;
    let c = |x: &Matrix| if conj { x.conj() } else { x.clone() };
    if m == 0 || b.operator.rows() != m || b.gram.rows() != m {
        return Err(malformed("inconsistent sizes"));
    }
    let t = match b.variant {
        // basis A^i e
        BlockVariant::NonSplit => alternating(k, (0..m).map(|i| i % 2 == 1)),
        // basis A^i e, then A^i f
        BlockVariant::EvenNilpotentO | BlockVariant::OddNilpotentSp => {
            if m != 2 * b.d {
                return Err(malformed("pair block must have dimension 2d"));
            }
            alternating(k, (0..m).map(|i| if i < b.d { i % 2 == 1 } else { (i - b.d).is_multiple_of(2) }))
        }
        BlockVariant::Split => {
            if m % 2 == 1 {
                return Err(malformed("split block of odd dimension"));
            }
            let h = m / 2;
            let a1 = b.operator.submatrix(0..h, 0..h);
            let a2 = b.operator.submatrix(h..m, h..m);
            let p = b.gram.submatrix(0..h, h..m);
            // X⁻¹ A′ X = −c(A″)
            let s = similarity_witness(&a1, &-&c(&a2))?.ok_or_else(|| malformed("halves are not dual"))?;
            let x = s.inverse().ok_or(Error::Singular)?;
            // Xᵀ P c(Y) = Pᵀ
            let cy = (&x.transpose() * &p).solve_matrix(&p.transpose())?;
            let y = c(&cy);
            let mut t = Matrix::zeros(k, m, m);
            for i in 0..h {
                for j in 0..h {
                    t[(i, h + j)] = x[(i, j)];
                    t[(h + i, j)] = y[(i, j)];
                }
            }
            t
        }
    };
    let t_inv = t.inverse().ok_or_else(|| malformed("witness is singular"))?;
    if &(&t * &c(&b.operator)) * &t_inv != -&b.operator {
        return Err(malformed("witness does not reverse the operator"));
    }
    if &(&t.transpose() * &b.gram) * &c(&t) != b.gram.transpose() {
        return Err(malformed("witness does not reverse the form"));
    }
    Ok(t)
}

/// Direct sum of the block witnesses, with the sign fixed for SO.
pub fn witness_global(space: &FormSpace, a: &Matrix) -> Result<WitnessReport> {
    let k = space.field();
    let n = space.dim();
    let conj = space.kind() == FormKind::Hermitian;
    let dec = classify(space, a)?;
    let mut per_block = Vec::with_capacity(dec.blocks.len());
    for (index, b) in dec.blocks.iter().enumerate() {
        let matrix = witness_block(space, b)?;
        per_block.push(BlockWitness { index, det: matrix.det(), matrix });
    }
    if space.group() == GroupKind::SO {
        let det = per_block.iter().fold(k.one(), |acc, w| acc * w.det);
        if det != space.so_det_target(-1) {
            let odd = per_block
                .iter_mut()
                .find(|w| w.matrix.rows() % 2 == 1)
                .ok_or_else(|| Error::Internal("no odd-dimensional block to fix the determinant".into()))?;
            odd.matrix = -&odd.matrix;
            odd.det = -odd.det;
        }
    }
    let local = Matrix::block_diag(k, &per_block.iter().map(|w| w.matrix.clone()).collect::<Vec<_>>());
    let m = &dec.basis;
    let cm = if conj { m.conj() } else { m.clone() };
    let matrix = if n == 0 { local } else { &(m * &local) * &cm.inverse().ok_or(Error::Singular)? };
    let element = TwistedElement::new(matrix, -1, conj)?;
    let checks = WitnessChecks {
        reverses_operator: element.conjugate(a) == -a,
        // the SO determinant is checked separately
        twisting_law: space.with_group(base_group(space.group()))?.in_twisted(&element),
        determinant: space.group() != GroupKind::SO || element.det() == space.so_det_target(-1),
    };
    if !checks.all() {
        return Err(Error::Internal("global witness fails its checks".into()));
    }
    Ok(WitnessReport { element, per_block, checks })
}

fn base_group(g: GroupKind) -> GroupKind {
    if g == GroupKind::SO { GroupKind::O } else { g }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn examples() {
        let k = Field::prime(3).unwrap();
        let so1 = FormSpace::standard(GroupKind::SO, k, 1).unwrap();
        let r = witness_global(&so1, &Matrix::zeros(k, 1, 1)).unwrap();
        assert_eq!(r.element.matrix, Matrix::scalar(-k.one(), 1));
        let o1 = so1.with_group(GroupKind::O).unwrap();
        assert_eq!(witness_global(&o1, &Matrix::zeros(k, 1, 1)).unwrap().element.matrix, Matrix::identity(k, 1));

        let sp = FormSpace::standard(GroupKind::Sp, k, 2).unwrap();
        let a = Matrix::from_ints(k, &[&[0, 1], &[0, 0]]);
        let r = witness_global(&sp, &a).unwrap();
        // diag(1, −1) in the block basis e, Ae
        assert_eq!(r.per_block[0].matrix, Matrix::from_ints(k, &[&[1, 0], &[0, -1]]));
        assert_eq!(r.element.conjugate(&a), -&a);

        let h = FormSpace::new(GroupKind::O, Matrix::from_ints(k, &[&[0, 1], &[1, 0]])).unwrap();
        let r = witness_global(&h, &Matrix::from_ints(k, &[&[1, 0], &[0, -1]])).unwrap();
        assert_eq!(r.element.matrix, Matrix::from_ints(k, &[&[0, 1], &[1, 0]]));
        assert_eq!(r.element.det(), -k.one());
    }

    #[test]
    fn pair_block_patterns() {
        let k = Field::prime(3).unwrap();
        let sp = FormSpace::standard(GroupKind::Sp, k, 2).unwrap();
        let dec = classify(&sp, &Matrix::zeros(k, 2, 2)).unwrap();
        let t = witness_block(&sp, &dec.blocks[0]).unwrap();
        assert_eq!(t, Matrix::from_ints(k, &[&[1, 0], &[0, -1]]));
        let g = &dec.blocks[0].gram;
        let pair = |u: usize, v: usize| g[(u, v)];
        // <Te, Tf> = −<e, f> = <f, e>
        assert_eq!(t[(0, 0)] * t[(1, 1)] * pair(0, 1), pair(1, 0));
    }
}
