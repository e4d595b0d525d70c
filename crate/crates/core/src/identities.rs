//! The automorphisms `ν_λ`, `μ_λ`, `ρ_g`, the sets `R_A` and `Q_A`, the
//! rank-one perturbation criterion and the first two coefficient identities.

use crate::blocks::{BlockVariant, SimpleBlock};
use crate::canonical::char_poly;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::form::{FormKind, FormSpace, GroupKind};
use crate::matrix::{Matrix, Vector};
use crate::poly::Poly;
use crate::subspace::Subspace;

/// `ν_λ(A, v) = (A + λφ_v, v)`; unitary and symplectic algebras only.
pub fn nu(space: &FormSpace, a: &Matrix, v: &[Scalar], lambda: Scalar) -> Result<(Matrix, Vector)> {
    match space.group() {
        GroupKind::O | GroupKind::SO => return Err(Error::Precondition("use mu".into())),
        GroupKind::U if lambda.conj() != -lambda => {
            return Err(Error::Precondition("λ must satisfy conj(λ) = −λ".into()))
        }
        _ => {}
    }
    Ok((a + &space.phi(v).scale(lambda), v.to_vec()))
}

/// `μ_λ(A, v) = (A + λAφ_v + λφ_vA, v)`; orthogonal algebras only.
pub fn mu(space: &FormSpace, a: &Matrix, v: &[Scalar], lambda: Scalar) -> Result<(Matrix, Vector)> {
    if space.kind() != FormKind::Symmetric {
        return Err(Error::Precondition("mu is defined for orthogonal algebras".into()));
    }
    let phi = space.phi(v);
    let corr = &(a * &phi) + &(&phi * a);
    Ok((a + &corr.scale(lambda), v.to_vec()))
}

/// Checks the two conditions making `ρ_g` an automorphism of the fibre of `A`.
pub fn rho_admissible(a: &Matrix, g: &Poly) -> Result<()> {
    let f = char_poly(a)?;
    if !g.gcd(&f).is_one() {
        return Err(Error::Precondition("g is not coprime to the characteristic polynomial".into()));
    }
    if !(&g.star() - g).rem(&f).is_zero() {
        return Err(Error::Precondition("g* is not congruent to g modulo the characteristic polynomial".into()));
    }
    Ok(())
}

/// `ρ_g(A, v) = (A, g(A)v)`.
pub fn rho(a: &Matrix, v: &[Scalar], g: &Poly) -> Result<(Matrix, Vector)> {
    rho_admissible(a, g)?;
    Ok((a.clone(), g.eval_matrix(a).mul_vec(v)))
}

/// The polynomial `g⁻¹ mod ch(A)` defining the inverse of `ρ_g`.
pub fn rho_inverse(a: &Matrix, g: &Poly) -> Result<Poly> {
    rho_admissible(a, g)?;
    g.inverse_mod(&char_poly(a)?)
}

/// `<A^k v, v> = 0` for `k = 0, …, n − 1` (Cayley–Hamilton covers the rest).
pub fn in_r(space: &FormSpace, a: &Matrix, v: &[Scalar]) -> bool {
    let mut w = v.to_vec();
    for _ in 0..space.dim().max(1) {
        if !space.pair(&w, v).is_zero() {
            return false;
        }
        w = a.mul_vec(&w);
    }
    true
}

/// `[A, g(V)]` as a subspace over the prime field.
#[derive(Clone, Debug)]
pub struct BracketImage {
    space: FormSpace,
    a: Matrix,
    image: Subspace,
}

impl BracketImage {
    pub fn new(space: &FormSpace, a: &Matrix) -> Self {
        let cols: Vec<Vector> =
            space.lie_algebra_basis().iter().map(|x| a.commutator(x).prime_coordinates()).collect();
        let k = space.field();
        let len = space.dim() * space.dim() * k.deg() as usize;
        let image = Subspace::span(k.base(), len, &cols);
        BracketImage { space: space.clone(), a: a.clone(), image }
    }

    pub fn contains(&self, x: &Matrix) -> bool {
        self.image.contains(&x.prime_coordinates())
    }

    /// The element whose membership defines `Q_A`: `Aφ_v + φ_vA` for
    /// orthogonal algebras, `ωφ_v` for unitary ones (so that it lies in `u`),
    /// `φ_v` for symplectic ones.
    pub fn q_target(&self, v: &[Scalar]) -> Matrix {
        let phi = self.space.phi(v);
        match self.space.kind() {
            FormKind::Symmetric => &(&self.a * &phi) + &(&phi * &self.a),
            FormKind::Hermitian => phi.scale(self.space.field().omega().unwrap()),
            FormKind::Symplectic => phi,
        }
    }

    pub fn in_q(&self, v: &[Scalar]) -> bool {
        self.contains(&self.q_target(v))
    }
}

pub fn in_q(space: &FormSpace, a: &Matrix, v: &[Scalar]) -> bool {
    BracketImage::new(space, a).in_q(v)
}

/// The four conditions of the rank-one perturbation criterion for
/// `A + λ v⊗φ`, where `φ(u) = Σ φ_i u_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PerturbationVerdict {
    /// `φ A^k v = 0` for all `k`.
    pub cond_annihilation: bool,
    /// `ch(A + λ v⊗φ) = ch(A)` with `λ` an indeterminate.
    pub cond_formal_all_lambda: bool,
    /// Some `λ ≠ 0` in the prime field leaves `ch` unchanged.
    pub cond_some_nonzero_lambda: bool,
    /// The coefficient of `λ` in `ch(A + λ v⊗φ)` vanishes.
    pub cond_derivative: bool,
}

impl PerturbationVerdict {
    pub fn consistent(&self) -> bool {
        self.cond_annihilation == self.cond_formal_all_lambda
            && self.cond_annihilation == self.cond_derivative
            && (!self.cond_annihilation || self.cond_some_nonzero_lambda)
    }
}

/// Division-free characteristic polynomial (Berkowitz) of a matrix whose
/// entries are polynomials in an auxiliary variable. Returns the
/// coefficients of `det(xI − M)` from `x^n` down to `x^0`.
pub fn berkowitz(m: &[Vec<Poly>]) -> Vec<Poly> {
    let n = m.len();
    let field = m.first().and_then(|r| r.first()).map(|p| p.field());
    let Some(field) = field else { return vec![] };
    let mut c: Vec<Poly> = vec![Poly::one(field)];
    for r in 0..n {
        let a = &m[r][r];
        // column: 1, −a, −R S, −R A S, …, −R A^{r−1} S
        let mut col = vec![Poly::one(field), -a];
        let mut s: Vec<Poly> = (0..r).map(|i| m[i][r].clone()).collect();
        for _ in 0..r {
            let rs = (0..r).fold(Poly::zero(field), |acc, j| &acc + &(&m[r][j] * &s[j]));
            col.push(-&rs);
            s = (0..r).map(|i| (0..r).fold(Poly::zero(field), |acc, j| &acc + &(&m[i][j] * &s[j]))).collect();
        }
        let next: Vec<Poly> = (0..r + 2)
            .map(|i| (0..=i.min(r)).fold(Poly::zero(field), |acc, j| &acc + &(&col[i - j] * &c[j])))
            .collect();
        c = next;
    }
    c
}

pub fn perturbation_verdict(a: &Matrix, v: &[Scalar], phi: &[Scalar]) -> Result<PerturbationVerdict> {
    let k = a.field();
    let n = a.rows();
    let apply_phi = |w: &[Scalar]| phi.iter().zip(w).fold(k.zero(), |acc, (&p, &x)| acc + p * x);
    let mut w = v.to_vec();
    let mut cond_annihilation = true;
    for _ in 0..n {
        if !apply_phi(&w).is_zero() {
            cond_annihilation = false;
            break;
        }
        w = a.mul_vec(&w);
    }
    let ch = char_poly(a)?;
    let formal: Vec<Vec<Poly>> =
        (0..n).map(|i| (0..n).map(|j| Poly::new(k, vec![a[(i, j)], v[i] * phi[j]])).collect()).collect();
    let coeffs = berkowitz(&formal);
    // coeffs[i] multiplies x^{n−i}
    let cond_formal_all_lambda = (0..=n).all(|i| coeffs[i] == Poly::constant(ch.coeff(n - i)));
    let cond_derivative = coeffs.iter().all(|c| c.coeff(1).is_zero());
    let rank_one = Matrix::from_fn(k, n, n, |i, j| v[i] * phi[j]);
    let cond_some_nonzero_lambda = k
        .base()
        .nonzero_elements()
        .map(|l| k.int(l.coords().0 as i64))
        .any(|l| char_poly(&(a + &rank_one.scale(l))).map(|c| c == ch).unwrap_or(false));
    Ok(PerturbationVerdict { cond_annihilation, cond_formal_all_lambda, cond_some_nonzero_lambda, cond_derivative })
}

/// `c_i` with `ch(A) = x^n + c_1 x^{n−1} + c_2 x^{n−2} + …`.
pub fn char_coefficient(a: &Matrix, i: usize) -> Result<Scalar> {
    let n = a.rows();
    let ch = char_poly(a)?;
    Ok(if i <= n { ch.coeff(n - i) } else { a.field().zero() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoefficientReport {
    pub c1_perturbed: Scalar,
    pub c1_predicted: Scalar,
    pub c2_perturbed: Scalar,
    pub c2_predicted: Scalar,
}

impl CoefficientReport {
    pub fn holds(&self) -> bool {
        self.c1_perturbed == self.c1_predicted && self.c2_perturbed == self.c2_predicted
    }
}

/// `c₁(A + λφ_v) = c₁(A) − λ<v,v>` and
/// `c₂(A + λφ_v) = c₂(A) − λc₁(A)<v,v> − λ<Av,v>`.
pub fn coefficient_identities(space: &FormSpace, a: &Matrix, v: &[Scalar], lambda: Scalar) -> Result<CoefficientReport> {
    let b = a + &space.phi(v).scale(lambda);
    let vv = space.pair(v, v);
    let avv = space.pair(&a.mul_vec(v), v);
    let c1 = char_coefficient(a, 1)?;
    let c2 = char_coefficient(a, 2)?;
    Ok(CoefficientReport {
        c1_perturbed: char_coefficient(&b, 1)?,
        c1_predicted: c1 - lambda * vv,
        c2_perturbed: char_coefficient(&b, 2)?,
        c2_predicted: c2 - lambda * c1 * vv - lambda * avv,
    })
}

/// The subspace of the block (in block coordinates) that contains every
/// `v` with `v ∈ Q_A` for the block operator.
pub fn block_support(group: GroupKind, b: &SimpleBlock) -> Result<Subspace> {
    let a = &b.operator;
    let x = Poly::x(a.field());
    let power_image = |k: usize| a.pow(k as u64).image();
    let is_o = matches!(group, GroupKind::O | GroupKind::SO);
    match b.variant {
        BlockVariant::Split => Err(Error::Precondition("split blocks have no support computation".into())),
        BlockVariant::NonSplit if is_o && b.f == x => {
            if b.d.is_multiple_of(2) {
                return Err(Error::Precondition("malformed block: even nilpotent non-split block in o".into()));
            }
            Ok(power_image((b.d - 1) / 2))
        }
        BlockVariant::NonSplit => Ok(b.f.eval_matrix(a).pow((b.d / 2) as u64).kernel()),
        BlockVariant::EvenNilpotentO => Ok(power_image(b.d / 2)),
        BlockVariant::OddNilpotentSp => Ok(power_image(b.d.div_ceil(2))),
    }
}
