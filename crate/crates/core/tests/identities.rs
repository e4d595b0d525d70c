use clforms::canonical::char_poly;
use clforms::identities::{berkowitz, char_coefficient, perturbation_verdict};
use clforms::sample;
use clforms::verify::instance_rng;
use clforms::{Field, Matrix, Poly};
use proptest::prelude::*;

fn constant_entries(m: &Matrix) -> Vec<Vec<Poly>> {
    m.to_rows().iter().map(|r| r.iter().map(|&x| Poly::constant(x)).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn berkowitz_agrees_with_char_poly(seed in any::<u64>(), n in 1usize..6, q in prop::sample::select(vec![3u32, 5, 7, 9, 25])) {
        let k = Field::from_order(q).unwrap();
        let a = sample::matrix(k, n, n, &mut instance_rng(seed, 0));
        let coeffs = berkowitz(&constant_entries(&a));
        let ch = char_poly(&a).unwrap();
        for (i, c) in coeffs.iter().enumerate() {
            prop_assert_eq!(c.coeff(0), ch.coeff(n - i));
        }
        // c₁ = −tr A
        prop_assert_eq!(char_coefficient(&a, 1).unwrap(), -a.trace());
    }

    #[test]
    fn perturbation_verdicts_are_consistent(seed in any::<u64>(), n in 1usize..4) {
        let k = Field::prime(5).unwrap();
        let mut rng = instance_rng(seed, 1);
        let a = sample::matrix(k, n, n, &mut rng);
        let v = sample::vector(k, n, &mut rng);
        let phi = sample::vector(k, n, &mut rng);
        prop_assert!(perturbation_verdict(&a, &v, &phi).unwrap().consistent());
    }
}

/// det(xI − A − λvφ) for 2×2 over F_3 by the closed formula
/// x² − (tr A + λφv)x + det(A + λvφ).
#[test]
fn two_by_two_perturbation_matches_closed_form() {
    let k = Field::prime(3).unwrap();
    let a = Matrix::from_ints(k, &[&[1, 2], &[0, 1]]);
    let v = [k.int(1), k.int(1)];
    let phi = [k.int(2), k.int(0)];
    for lambda in k.elements() {
        let p = Matrix::from_fn(k, 2, 2, |i, j| a[(i, j)] + lambda * v[i] * phi[j]);
        let ch = char_poly(&p).unwrap();
        assert_eq!(ch.coeff(1), -p.trace());
        assert_eq!(ch.coeff(0), p[(0, 0)] * p[(1, 1)] - p[(0, 1)] * p[(1, 0)]);
    }
}
