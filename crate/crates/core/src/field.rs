//! Prime fields `F_p` and their quadratic extensions `F_p[ω]/(ω² − r)`.
//!
//! `r` is the least positive quadratic non-residue mod `p`, so the
//! representation of `F_{p²}` is fixed once `p` is known. Conjugation is
//! `a + bω ↦ a − bω`, which coincides with the Frobenius `x ↦ x^p`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// An exact finite field of odd characteristic and degree 1 or 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u32,
    deg: u8,
    nonresidue: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn least_nonresidue(p: u32) -> u32 {
    (2..p)
        .find(|&r| pow_mod(r as u64, (p as u64 - 1) / 2, p as u64) == p as u64 - 1)
        .expect("every odd prime has a non-residue")
}

impl Field {
    /// `F_p` (`deg = 1`) or `F_{p²}` (`deg = 2`).
    pub fn new(p: u32, deg: u8) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidField("characteristic 2 is not supported".into()));
        }
        if !is_prime(p) || p > 46_337 {
            return Err(Error::InvalidField(format!("{p} is not a supported odd prime")));
        }
        match deg {
            1 => Ok(Field { p, deg, nonresidue: 0 }),
            2 => Ok(Field { p, deg, nonresidue: least_nonresidue(p) }),
            _ => Err(Error::InvalidField(format!("extension degree {deg} is not 1 or 2"))),
        }
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn quadratic(p: u32) -> Result<Self> {
        Self::new(p, 2)
    }

    /// Interprets `q` as a field order: a prime or the square of a prime.
    pub fn from_order(q: u32) -> Result<Self> {
        if is_prime(q) {
            return Self::prime(q);
        }
        let root = (q as f64).sqrt().round() as u32;
        if root * root == q && is_prime(root) {
            return Self::quadratic(root);
        }
        Err(Error::InvalidField(format!("{q} is not p or p² for an odd prime p")))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn deg(&self) -> u8 {
        self.deg
    }

    /// The non-residue `r = ω²`, present only for the quadratic extension.
    pub fn nonresidue(&self) -> Option<u32> {
        (self.deg == 2).then_some(self.nonresidue)
    }

    /// Least positive quadratic non-residue mod `p`, for either degree.
    pub fn nonresidue_of_prime(&self) -> u32 {
        least_nonresidue(self.p)
    }

    /// Number of elements.
    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.deg as u32)
    }

    /// The same prime with degree 1.
    pub fn base(&self) -> Field {
        Field { p: self.p, deg: 1, nonresidue: 0 }
    }

    pub fn zero(&self) -> Scalar {
        Scalar { a: 0, b: 0, field: *self }
    }

    pub fn one(&self) -> Scalar {
        Scalar { a: 1, b: 0, field: *self }
    }

    pub fn int(&self, n: i64) -> Scalar {
        let p = self.p as i64;
        Scalar { a: n.rem_euclid(p) as u32, b: 0, field: *self }
    }

    /// `a + bω`; `b` must vanish over the prime field.
    pub fn elem(&self, a: i64, b: i64) -> Scalar {
        let p = self.p as i64;
        let b = b.rem_euclid(p) as u32;
        assert!(self.deg == 2 || b == 0, "ω-coordinate given for a prime field");
        Scalar { a: a.rem_euclid(p) as u32, b, field: *self }
    }

    /// The trace-zero generator `ω` with `ω² = r` and `conj(ω) = −ω`.
    pub fn omega(&self) -> Option<Scalar> {
        (self.deg == 2).then_some(Scalar { a: 0, b: 1, field: *self })
    }

    /// Index in `[0, q)`, `a + b·p`. Element order everywhere in the crate.
    pub fn index_of(&self, x: Scalar) -> u64 {
        x.a as u64 + x.b as u64 * self.p as u64
    }

    pub fn from_index(&self, idx: u64) -> Scalar {
        let p = self.p as u64;
        debug_assert!(idx < self.order());
        Scalar { a: (idx % p) as u32, b: (idx / p) as u32, field: *self }
    }

    /// All field elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    /// The elements of the fixed field `F_p`.
    pub fn prime_elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        (0..self.p).map(move |a| Scalar { a, b: 0, field: *self })
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        self.elements().skip(1)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.deg == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "GF({})", self.order())
        }
    }
}

/// An element `a + bω` of a [`Field`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: u32,
    b: u32,
    field: Field,
}

impl Scalar {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coords(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_one(&self) -> bool {
        self.a == 1 && self.b == 0
    }

    /// True when the element lies in the fixed field `F_p`.
    pub fn is_prime(&self) -> bool {
        self.b == 0
    }

    pub fn conj(self) -> Scalar {
        let p = self.field.p;
        Scalar { a: self.a, b: (p - self.b) % p, field: self.field }
    }

    /// `x · conj(x)`, an element of `F_p`.
    pub fn norm(self) -> Scalar {
        self * self.conj()
    }

    pub fn inv(self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let f = self.field;
        let p = f.p as u64;
        // (a + bω)^{-1} = (a − bω)/(a² − r b²)
        let n = (self.a as u64 * self.a as u64 + p * p
            - (f.nonresidue as u64 * (self.b as u64 * self.b as u64 % p)) % p)
            % p;
        let ninv = pow_mod(n, p - 2, p);
        let a = self.a as u64 * ninv % p;
        let b = (p - self.b as u64) % p * ninv % p;
        Some(Scalar { a: a as u32, b: b as u32, field: f })
    }

    pub fn pow(self, mut e: u64) -> Scalar {
        let mut acc = self.field.one();
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    /// Square test in `F_p` (Euler's criterion). Only meaningful for prime-field elements.
    pub fn is_square_in_prime_field(&self) -> bool {
        debug_assert!(self.is_prime());
        if self.a == 0 {
            return true;
        }
        let p = self.field.p as u64;
        pow_mod(self.a as u64, (p - 1) / 2, p) == 1
    }

    /// A square root inside the same field, if one exists (brute force; fields are small).
    pub fn sqrt(&self) -> Option<Scalar> {
        self.field.elements().find(|&y| y * y == *self)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => write!(f, "ω"),
            (0, b) => write!(f, "{b}ω"),
            (a, 1) => write!(f, "{a}+ω"),
            (a, b) => write!(f, "{a}+{b}ω"),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.b, self.a).cmp(&(other.b, other.a))
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        debug_assert_eq!(self.field, o.field);
        let p = self.field.p;
        Scalar { a: (self.a + o.a) % p, b: (self.b + o.b) % p, field: self.field }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        debug_assert_eq!(self.field, o.field);
        let p = self.field.p;
        Scalar { a: (self.a + p - o.a) % p, b: (self.b + p - o.b) % p, field: self.field }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let p = self.field.p;
        Scalar { a: (p - self.a) % p, b: (p - self.b) % p, field: self.field }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        debug_assert_eq!(self.field, o.field);
        let p = self.field.p as u64;
        let (a, b, c, d) = (self.a as u64, self.b as u64, o.a as u64, o.b as u64);
        if b == 0 && d == 0 {
            return Scalar { a: (a * c % p) as u32, b: 0, field: self.field };
        }
        let r = self.field.nonresidue as u64;
        let re = (a * c + (b * d % p) * r) % p;
        let im = (a * d + b * c) % p;
        Scalar { a: re as u32, b: im as u32, field: self.field }
    }
}

impl Div for Scalar {
    type Output = Scalar;
    /// Panics on division by zero.
    fn div(self, o: Scalar) -> Scalar {
        self * o.inv().expect("division by zero in finite field")
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self = *self + o;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, o: Scalar) {
        *self = *self - o;
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, o: Scalar) {
        *self = *self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_even_and_composite() {
        assert!(Field::prime(2).is_err());
        assert!(Field::prime(9).is_err());
        assert!(Field::quadratic(2).is_err());
        assert!(Field::new(3, 3).is_err());
    }

    #[test]
    fn nonresidues() {
        assert_eq!(Field::quadratic(3).unwrap().nonresidue(), Some(2));
        assert_eq!(Field::quadratic(5).unwrap().nonresidue(), Some(2));
        assert_eq!(Field::quadratic(7).unwrap().nonresidue(), Some(3));
        assert_eq!(Field::prime(7).unwrap().nonresidue(), None);
    }

    #[test]
    fn from_order() {
        assert_eq!(Field::from_order(9).unwrap(), Field::quadratic(3).unwrap());
        assert_eq!(Field::from_order(5).unwrap(), Field::prime(5).unwrap());
        assert!(Field::from_order(27).is_err());
    }

    #[test]
    fn conj_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.int(2).conj(), f3.int(2));
        let gf9 = Field::quadratic(3).unwrap();
        let x = gf9.elem(1, 1);
        assert_eq!(x.conj(), gf9.elem(1, 2));
        // Frobenius agrees with conjugation
        assert_eq!(x.pow(3), gf9.elem(1, 2));
    }

    #[test]
    fn frobenius_is_conjugation_everywhere() {
        for p in [3, 5, 7, 11] {
            let k = Field::quadratic(p).unwrap();
            for x in k.elements() {
                assert_eq!(x.pow(p as u64), x.conj());
                assert_eq!(x.conj().conj(), x);
                if x.is_prime() {
                    assert_eq!(x.conj(), x);
                } else {
                    assert_ne!(x.conj(), x);
                }
            }
        }
    }

    #[test]
    fn field_axioms_gf25() {
        let k = Field::quadratic(5).unwrap();
        for x in k.elements() {
            if let Some(i) = x.inv() {
                assert!((x * i).is_one());
            }
            for y in k.elements() {
                assert_eq!((x * y).conj(), x.conj() * y.conj());
                assert_eq!((x + y).conj(), x.conj() + y.conj());
                assert_eq!(x * y, y * x);
            }
        }
    }

    #[test]
    fn omega_squares_to_nonresidue() {
        let k = Field::quadratic(7).unwrap();
        let w = k.omega().unwrap();
        assert_eq!(w * w, k.int(3));
        assert_eq!(w.conj(), -w);
    }
}
