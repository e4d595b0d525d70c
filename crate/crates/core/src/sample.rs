//! Seeded random instances: scalars, vectors, Lie algebra and group elements,
//! twisted elements and congruent forms.

use std::sync::OnceLock;

use rand::Rng;

use crate::error::Result;
use crate::field::{Field, Scalar};
use crate::form::{FormKind, FormSpace, GroupKind};
use crate::matrix::{Matrix, Vector};
use crate::twisted::TwistedElement;
use crate::witness::witness_global;

pub fn scalar(k: Field, rng: &mut impl Rng) -> Scalar {
    k.from_index(rng.gen_range(0..k.order()))
}

pub fn nonzero_scalar(k: Field, rng: &mut impl Rng) -> Scalar {
    k.from_index(rng.gen_range(1..k.order()))
}

pub fn prime_scalar(k: Field, rng: &mut impl Rng) -> Scalar {
    k.int(rng.gen_range(0..k.p()) as i64)
}

pub fn vector(k: Field, n: usize, rng: &mut impl Rng) -> Vector {
    (0..n).map(|_| scalar(k, rng)).collect()
}

pub fn matrix(k: Field, rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    Matrix::from_fn(k, rows, cols, |_, _| scalar(k, rng))
}

pub fn invertible(k: Field, n: usize, rng: &mut impl Rng) -> Matrix {
    loop {
        let m = matrix(k, n, n, rng);
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Samples a form space and its Lie algebra and group.
#[derive(Clone, Debug)]
pub struct Sampler {
    space: FormSpace,
    basis: Vec<Matrix>,
    reverser: OnceLock<TwistedElement>,
}

impl Sampler {
    pub fn new(space: &FormSpace) -> Result<Self> {
        Ok(Sampler { space: space.clone(), basis: space.lie_algebra_basis(), reverser: OnceLock::new() })
    }

    /// A fixed `(T, −1)`: the witness for `A = 0`.
    pub fn reverser(&self) -> &TwistedElement {
        self.reverser.get_or_init(|| {
            let zero = Matrix::zeros(self.space.field(), self.space.dim(), self.space.dim());
            witness_global(&self.space, &zero).expect("A = 0 always has a witness").element
        })
    }

    pub fn space(&self) -> &FormSpace {
        &self.space
    }

    pub fn lie_dim(&self) -> usize {
        self.basis.len()
    }

    /// Uniform element of `g`.
    pub fn lie(&self, rng: &mut impl Rng) -> Matrix {
        let k = self.space.field();
        let n = self.space.dim();
        self.basis.iter().fold(Matrix::zeros(k, n, n), |acc, b| &acc + &b.scale(prime_scalar(k, rng)))
    }

    pub fn vector(&self, rng: &mut impl Rng) -> Vector {
        vector(self.space.field(), self.space.dim(), rng)
    }

    fn nonisotropic(&self, rng: &mut impl Rng) -> Option<(Vector, Scalar)> {
        (0..256).find_map(|_| {
            let v = self.vector(rng);
            let s = self.space.pair(&v, &v);
            (!s.is_zero()).then_some((v, s))
        })
    }

    /// Reflection (O), quasi-reflection (U) or transvection (Sp).
    fn generator(&self, rng: &mut impl Rng) -> Matrix {
        let k = self.space.field();
        let n = self.space.dim();
        let id = Matrix::identity(k, n);
        match self.space.kind() {
            FormKind::Symplectic => {
                let v = self.vector(rng);
                &id + &self.space.phi(&v).scale(nonzero_scalar(k, rng))
            }
            FormKind::Symmetric => match self.nonisotropic(rng) {
                Some((v, s)) => &id - &self.space.phi(&v).scale(k.int(2) / s),
                None => id,
            },
            FormKind::Hermitian => match self.nonisotropic(rng) {
                Some((v, s)) => {
                    let zeta = loop {
                        let z = nonzero_scalar(k, rng);
                        if z.norm().is_one() {
                            break z;
                        }
                    };
                    &id - &self.space.phi(&v).scale((k.one() - zeta) / s)
                }
                None => id,
            },
        }
    }

    /// Product of random generators; lands in SO when the group is SO.
    pub fn group(&self, rng: &mut impl Rng) -> Matrix {
        let k = self.space.field();
        let n = self.space.dim();
        let len = 2 * n + 2;
        let mut g = (0..len).fold(Matrix::identity(k, n), |acc, _| &acc * &self.generator(rng));
        if self.space.group() == GroupKind::SO && !g.det().is_one() {
            if let Some((v, s)) = self.nonisotropic(rng) {
                let r = &Matrix::identity(k, n) - &self.space.phi(&v).scale(k.int(2) / s);
                g = &g * &r;
            }
        }
        g
    }

    pub fn twisted(&self, rng: &mut impl Rng, delta: i8) -> TwistedElement {
        let g = self.group(rng);
        let plain = TwistedElement { matrix: g, delta: 1, conj: false };
        if delta == 1 { plain } else { plain.compose(self.reverser()) }
    }
}

/// A random Gram congruent to a diagonal (or standard symplectic) one.
pub fn form_space(group: GroupKind, k: Field, n: usize, rng: &mut impl Rng) -> Result<FormSpace> {
    let base = match group.form_kind() {
        FormKind::Symplectic => FormSpace::standard(group, k, n)?.gram().clone(),
        _ => Matrix::diagonal(k, &(0..n).map(|_| k.int(rng.gen_range(1..k.p()) as i64)).collect::<Vec<_>>()),
    };
    let p = invertible(k, n, rng);
    FormSpace::new(group, &(&p.transpose() * &base) * &p.conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_land_in_their_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (group, k, n) in [
            (GroupKind::O, Field::prime(3).unwrap(), 3),
            (GroupKind::SO, Field::prime(5).unwrap(), 4),
            (GroupKind::U, Field::quadratic(3).unwrap(), 2),
            (GroupKind::Sp, Field::prime(3).unwrap(), 4),
        ] {
            let space = form_space(group, k, n, &mut rng).unwrap();
            let s = Sampler::new(&space).unwrap();
            for _ in 0..10 {
                assert!(space.in_lie_algebra(&s.lie(&mut rng)));
                assert!(space.in_group(&s.group(&mut rng)));
                assert!(space.in_twisted(&s.twisted(&mut rng, -1)));
            }
        }
    }
}
