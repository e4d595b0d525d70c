//! Cayley transforms between `G_{(±1)}` and `g₀`.

use crate::error::{Error, Result};
use crate::form::FormSpace;
use crate::matrix::Matrix;

/// Which eigenvalue the group side avoids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CayleySign {
    /// `C₁(g) = (I + g)(I − g)⁻¹`, defined when 1 is not an eigenvalue.
    Plus,
    /// `C₋₁(g) = (I − g)(I + g)⁻¹`, defined when −1 is not an eigenvalue.
    Minus,
}

fn shifted(m: &Matrix, c: i64) -> Matrix {
    let mut out = m.clone();
    out.add_diagonal(m.field().int(c));
    out
}

pub fn has_eigenvalue(m: &Matrix, c: i64) -> bool {
    shifted(m, -c).det().is_zero()
}

/// Group element to Lie algebra element.
pub fn cayley(space: &FormSpace, g: &Matrix, sign: CayleySign) -> Result<Matrix> {
    if !space.in_group(g) {
        return Err(Error::Precondition("argument is not in the group".into()));
    }
    let i_plus = shifted(g, 1);
    let i_minus = -&shifted(g, -1);
    match sign {
        CayleySign::Plus => {
            let inv = i_minus.inverse().ok_or_else(|| Error::Precondition("1 is an eigenvalue".into()))?;
            Ok(&i_plus * &inv)
        }
        CayleySign::Minus => {
            let inv = i_plus.inverse().ok_or_else(|| Error::Precondition("-1 is an eigenvalue".into()))?;
            Ok(&i_minus * &inv)
        }
    }
}

/// Lie algebra element without eigenvalues ±1 back to the group.
pub fn cayley_inv(space: &FormSpace, b: &Matrix, sign: CayleySign) -> Result<Matrix> {
    space.require_lie_algebra(b)?;
    if has_eigenvalue(b, 1) || has_eigenvalue(b, -1) {
        return Err(Error::Precondition("±1 is an eigenvalue".into()));
    }
    let b_minus = shifted(b, -1);
    let b_plus = shifted(b, 1);
    let inv = b_plus.inverse().unwrap();
    let g = match sign {
        CayleySign::Plus => &b_minus * &inv,
        CayleySign::Minus => &(-&b_minus) * &inv,
    };
    // in odd dimension C₁ lands in O ∖ SO
    if !space.in_group(&g) {
        return Err(Error::Precondition("Cayley image has determinant −1; use the other sign".into()));
    }
    Ok(g)
}

/// Whether `cayley_inv` with this sign lands in the group of `space`.
pub fn sign_available(space: &FormSpace, sign: CayleySign) -> bool {
    !(space.group() == crate::form::GroupKind::SO && sign == CayleySign::Plus && space.dim() % 2 == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::form::GroupKind;

    #[test]
    fn examples() {
        let k = Field::prime(3).unwrap();
        let o = FormSpace::standard(GroupKind::O, k, 2).unwrap();
        let minus = Matrix::scalar(-k.one(), 2);
        assert!(cayley(&o, &minus, CayleySign::Plus).unwrap().is_zero());
        assert_eq!(cayley_inv(&o, &Matrix::zeros(k, 2, 2), CayleySign::Plus).unwrap(), minus);
        assert!(cayley(&o, &Matrix::identity(k, 2), CayleySign::Plus).is_err());

        let sp = FormSpace::standard(GroupKind::Sp, k, 2).unwrap();
        let b = Matrix::from_ints(k, &[&[0, 1], &[0, 0]]);
        let g = cayley_inv(&sp, &b, CayleySign::Plus).unwrap();
        assert_eq!(g, Matrix::from_ints(k, &[&[2, 2], &[0, 2]]));
        assert!(sp.in_group(&g) && !has_eigenvalue(&g, 1));
        assert_eq!(cayley(&sp, &g, CayleySign::Plus).unwrap(), b);
        let h = cayley_inv(&sp, &b, CayleySign::Minus).unwrap();
        assert_eq!(cayley(&sp, &h, CayleySign::Minus).unwrap(), b);
    }
}
