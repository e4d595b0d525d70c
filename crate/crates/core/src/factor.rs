//! Factorization over `F_q`: square-free split, distinct-degree split, then
//! Cantor–Zassenhaus equal-degree splitting driven by a seeded ChaCha stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::Poly;

/// `f = unit · Π factorᵉ` with monic irreducible factors in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Scalar,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit), |acc, (f, e)| &acc * &f.pow(*e as u64))
    }
}

pub fn factor(f: &Poly) -> Result<Factorization> {
    factor_seeded(f, 0)
}

/// The output does not depend on `seed`; only the running time does.
pub fn factor_seeded(f: &Poly, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let unit = f.lead();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (sqf, mult) in squarefree(&f.monic()) {
        for (g, d) in distinct_degree(&sqf) {
            for h in equal_degree(&g, d, &mut rng) {
                factors.push((h, mult));
            }
        }
    }
    factors.sort();
    Ok(Factorization { unit, factors })
}

pub fn is_irreducible(f: &Poly) -> bool {
    match f.degree() {
        None | Some(0) => false,
        Some(1) => true,
        Some(_) => factor(f).map(|fz| fz.factors.len() == 1 && fz.factors[0].1 == 1).unwrap_or(false),
    }
}

/// p-th root of a polynomial whose exponents are all multiples of p.
fn pth_root(f: &Poly) -> Poly {
    let field = f.field();
    let p = field.p() as usize;
    let e = field.order() / field.p() as u64;
    let coeffs = f.coeffs().iter().step_by(p).map(|c| c.pow(e)).collect();
    Poly::new(field, coeffs)
}

/// Monic square-free parts with multiplicities.
fn squarefree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let mut out = Vec::new();
    if f.degree() == Some(0) {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y);
        if fac.degree().unwrap_or(0) > 0 {
            out.push((fac.monic(), i));
        }
        w = y;
        c = c.exact_div(&w);
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        let root = pth_root(&c.monic());
        let p = field.p() as usize;
        for (g, m) in squarefree(&root) {
            out.push((g, m * p));
        }
    }
    out
}

/// Groups the irreducible factors of a square-free monic `f` by degree.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let q = field.order() as u128;
    let x = Poly::x(field);
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut h = x.rem(&g);
    let mut i = 1;
    while g.degree().unwrap_or(0) >= 2 * i {
        h = h.pow_mod(q, &g);
        let d = g.gcd(&(&h - &x));
        if !d.is_one() {
            g = g.exact_div(&d);
            h = h.rem(&g);
            out.push((d, i));
        }
        i += 1;
    }
    if g.degree().unwrap_or(0) > 0 {
        let d = g.degree().unwrap();
        out.push((g, d));
    }
    out
}

fn random_poly(field: Field, below: usize, rng: &mut ChaCha8Rng) -> Poly {
    let q = field.order();
    Poly::new(field, (0..below).map(|_| field.from_index(rng.gen_range(0..q))).collect())
}

/// Splits a product of distinct monic irreducibles of common degree `d`.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.degree().unwrap();
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field();
    let q = field.order() as u128;
    loop {
        let a = random_poly(field, n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        // a^{(q^d − 1)/2} = (Π_{i<d} a^{q^i})^{(q−1)/2}
        let mut conj = a.rem(f);
        let mut norm = conj.clone();
        for _ in 1..d {
            conj = conj.pow_mod(q, f);
            norm = (&norm * &conj).rem(f);
        }
        let b = norm.pow_mod((q - 1) / 2, f);
        let g = f.gcd(&(&b - &Poly::one(field)));
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.exact_div(&g), d, rng));
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let k = Field::prime(3).unwrap();
        let fz = factor(&Poly::from_ints(k, &[1, 0, 1])).unwrap();
        assert_eq!(fz.factors, vec![(Poly::from_ints(k, &[1, 0, 1]), 1)]);
        let fz = factor(&Poly::from_ints(k, &[-1, 0, 1])).unwrap();
        assert_eq!(
            fz.factors,
            vec![(Poly::from_ints(k, &[1, 1]), 1), (Poly::from_ints(k, &[2, 1]), 1)]
        );
        let k5 = Field::prime(5).unwrap();
        let fz = factor(&Poly::from_ints(k5, &[0, 0, 0, 0, 1])).unwrap();
        assert_eq!(fz.factors, vec![(Poly::x(k5), 4)]);
        assert_eq!(factor(&Poly::zero(k)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn inseparable_powers() {
        let k = Field::prime(3).unwrap();
        // (x+1)^3 (x^2+1)^2 x
        let f = &(&Poly::from_ints(k, &[1, 1]).pow(3) * &Poly::from_ints(k, &[1, 0, 1]).pow(2))
            * &Poly::x(k);
        let fz = factor(&f.scale(k.int(2))).unwrap();
        assert_eq!(fz.unit, k.int(2));
        assert_eq!(
            fz.factors,
            vec![
                (Poly::x(k), 1),
                (Poly::from_ints(k, &[1, 1]), 3),
                (Poly::from_ints(k, &[1, 0, 1]), 2)
            ]
        );
    }

    #[test]
    fn over_quadratic_extension() {
        let k = Field::quadratic(3).unwrap();
        // x^2 + 1 splits over GF(9)
        let fz = factor(&Poly::from_ints(k, &[1, 0, 1])).unwrap();
        assert_eq!(fz.factors.len(), 2);
        assert_eq!(fz.expand(), Poly::from_ints(k, &[1, 0, 1]));
        // x^9 − x is the product of all linear factors
        let mut c = vec![k.zero(); 10];
        c[9] = k.one();
        c[1] = -k.one();
        let fz = factor(&Poly::new(k, c)).unwrap();
        assert_eq!(fz.factors.len(), 9);
    }

    #[test]
    fn seed_independent() {
        let k = Field::prime(7).unwrap();
        let f = Poly::from_ints(k, &[3, 1, 4, 1, 5, 2, 6, 1]);
        let a = factor_seeded(&f, 1).unwrap();
        let b = factor_seeded(&f, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.expand(), f);
    }
}
