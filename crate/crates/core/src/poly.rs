//! Dense univariate polynomials over a [`Field`], lowest degree first.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_ints(field: Field, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.int(c)).collect())
    }

    pub fn zero(field: Field) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(c.field(), vec![c])
    }

    pub fn x(field: Field) -> Self {
        Self::monomial(field.one(), 1)
    }

    pub fn monomial(c: Scalar, k: usize) -> Self {
        let mut v = vec![c.field().zero(); k + 1];
        v[k] = c;
        Self::new(c.field(), v)
    }

    /// `x − a`.
    pub fn linear(a: Scalar) -> Self {
        Self::new(a.field(), vec![-a, a.field().one()])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).copied().unwrap_or(self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().copied().unwrap_or(self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv().unwrap();
        self.scale(inv)
    }

    pub fn scale(&self, c: Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn eval(&self, x: Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, &c| acc * x + c)
    }

    /// `p(A)` by Horner's rule.
    pub fn eval_matrix(&self, a: &Matrix) -> Matrix {
        let n = a.rows();
        let mut acc = Matrix::zeros(self.field, n, n);
        for &c in self.coeffs.iter().rev() {
            acc = &acc * a;
            acc.add_diagonal(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = self.field;
        Poly::new(
            f,
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * f.int(i as i64)).collect(),
        )
    }

    /// Coefficientwise conjugation.
    pub fn conj(&self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// `f*(x) = Σ (−1)^i conj(a_i) x^i`.
    pub fn star(&self) -> Poly {
        Poly::new(
            self.field,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 0 { c.conj() } else { -c.conj() })
                .collect(),
        )
    }

    /// `f†(x) = Σ conj(a_{n−i}) x^i`.
    pub fn dagger(&self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }

    /// True when `f* = ±f`.
    pub fn is_star_symmetric(&self) -> bool {
        let s = self.star();
        s == *self || s == -self
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = self.field;
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(f), self.clone());
        }
        let inv = d.lead().inv().unwrap();
        let mut quo = vec![f.zero(); rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = rem[k + dd] * inv;
            quo[k] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= c * dc;
            }
        }
        rem.truncate(dd);
        (Poly::new(f, quo), Poly::new(f, rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lead().inv().unwrap();
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        (self * other).exact_div(&self.gcd(other)).monic()
    }

    /// `g⁻¹ mod f`, the unique inverse of degree below `deg f`.
    pub fn inverse_mod(&self, modulus: &Poly) -> Result<Poly> {
        if modulus.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (g, s, _) = self.rem(modulus).ext_gcd(modulus);
        if !g.is_one() {
            return Err(Error::NotInvertible);
        }
        Ok(s.rem(modulus))
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn pow_mod(&self, mut e: u128, modulus: &Poly) -> Poly {
        let mut acc = Poly::one(self.field).rem(modulus);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(modulus);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(modulus);
            }
        }
        acc
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coef = if c.is_prime() { c.to_string() } else { format!("({c})") };
            match i {
                0 => write!(f, "{coef}")?,
                1 if c.is_one() => write!(f, "x")?,
                1 => write!(f, "{coef}x")?,
                _ if c.is_one() => write!(f, "x^{i}")?,
                _ => write!(f, "{coef}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(self.field, (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(self.field, (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(self.field, out)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn star_examples() {
        let k = f3();
        assert_eq!(Poly::from_ints(k, &[1, 1, 1]).star(), Poly::from_ints(k, &[1, 2, 1]));
        assert_eq!(Poly::from_ints(k, &[1, 0, 1]).star(), Poly::from_ints(k, &[1, 0, 1]));
        let gf9 = Field::quadratic(3).unwrap();
        let w = gf9.omega().unwrap();
        let f = Poly::new(gf9, vec![w, gf9.one()]);
        assert_eq!(f.star(), Poly::new(gf9, vec![-w, -gf9.one()]));
    }

    #[test]
    fn dagger_examples() {
        let k = f3();
        assert_eq!(Poly::from_ints(k, &[1, 1, 1]).dagger(), Poly::from_ints(k, &[1, 1, 1]));
        // x − 1: coefficients (−1, 1) reversed to (1, −1), i.e. −x + 1
        let d = Poly::from_ints(k, &[-1, 1]).dagger();
        assert_eq!(d, Poly::from_ints(k, &[1, 2]));
        // second route: x^n conj(f)(1/x)
        let f = Poly::from_ints(k, &[-1, 1]);
        let inv_x = k.int(2).inv().unwrap();
        assert_eq!(d.eval(k.int(2)), f.eval(inv_x) * k.int(2));
        assert_eq!(Poly::one(k).dagger(), Poly::one(k));
    }

    #[test]
    fn inverse_mod_examples() {
        let k = f3();
        let f = Poly::from_ints(k, &[1, 0, 1]);
        assert_eq!(Poly::one(k).inverse_mod(&f).unwrap(), Poly::one(k));
        assert_eq!(Poly::x(k).inverse_mod(&f).unwrap(), Poly::from_ints(k, &[0, 2]));
        let x2 = Poly::from_ints(k, &[0, 0, 1]);
        assert_eq!(Poly::x(k).inverse_mod(&x2), Err(Error::NotInvertible));
    }

    #[test]
    fn div_rem_reconstructs() {
        let k = Field::prime(7).unwrap();
        let a = Poly::from_ints(k, &[3, 0, 5, 1, 6]);
        let b = Poly::from_ints(k, &[1, 2, 3]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn matrix_evaluation() {
        let k = f3();
        let a = Matrix::from_ints(k, &[&[0, 1], &[2, 0]]);
        // A = [[0,1],[-1,0]] satisfies x^2 + 1
        assert!(Poly::from_ints(k, &[1, 0, 1]).eval_matrix(&a).is_zero());
    }

    #[test]
    fn display() {
        let k = f3();
        assert_eq!(Poly::from_ints(k, &[1, 2, 1]).to_string(), "x^2 + 2x + 1");
    }
}
