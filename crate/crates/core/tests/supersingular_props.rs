use hecke_core::arith::primes_up_to;
use hecke_core::number_field::NumberFieldSpec;
use hecke_core::supersingular::{enumerate_locus, hecke_matrix, ModularPolynomialLibrary};
use num_bigint::BigUint;
use num_rational::Ratio;
use proptest::prelude::*;

fn primes() -> Vec<u64> {
    primes_up_to(1500).into_iter().filter(|&p| p >= 5).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn point_count_congruence(p in prop::sample::select(primes())) {
        let locus = enumerate_locus(p).unwrap();
        let eps = match p % 12 { 1 => 0, 5 | 7 => 1, _ => 2 };
        prop_assert_eq!(locus.len() as u64, (p - 1) / 12 + eps);
        let w3 = locus.weights().iter().filter(|&&w| w == 3).count() as u64;
        let w2 = locus.weights().iter().filter(|&&w| w == 2).count() as u64;
        // j = 0 is supersingular iff p = 2 mod 3, j = 1728 iff p = 3 mod 4
        prop_assert_eq!(w3, (p % 3 == 2) as u64);
        prop_assert_eq!(w2, (p % 4 == 3) as u64);
        prop_assert_eq!(locus.total_mass(), Ratio::new(p - 1, 24));
    }

    #[test]
    fn hecke_structure(p in prop::sample::select(primes()), i in 0usize..6, j in 0usize..6) {
        let lib = ModularPolynomialLibrary::builtin().unwrap();
        let levels = lib.levels();
        let (a, b) = (levels[i], levels[j]);
        prop_assume!(a != p && b != p);
        let locus = enumerate_locus(p).unwrap();
        let s = hecke_matrix(&locus, lib.get(a).unwrap()).unwrap();
        let t = hecke_matrix(&locus, lib.get(b).unwrap()).unwrap();
        for m in [&s, &t] {
            prop_assert!(m.row_sums().iter().all(|&x| x == m.level() + 1));
            prop_assert!(m.is_weighted_symmetric(locus.weights()));
            prop_assert!(m.preserves_mass(locus.weights()));
        }
        prop_assert_eq!(s.mul(&t).unwrap(), t.mul(&s).unwrap());
    }

    #[test]
    fn quadratic_splitting_matches_euler(d in prop::sample::select(vec![2i64, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17]), ell in prop::sample::select(primes_up_to(400))) {
        let field = NumberFieldSpec::from_i64s(&[-d, 0, 1]).unwrap();
        prop_assume!(ell != 2 && d % ell as i64 != 0);
        let s = field.splitting_data(ell).unwrap();
        let euler = BigUint::from(d as u64 % ell).modpow(&BigUint::from((ell - 1) / 2), &BigUint::from(ell));
        let split = euler == BigUint::from(1u32);
        prop_assert_eq!(s.residue_degrees.len(), if split { 2 } else { 1 });
        prop_assert_eq!(s.residue_degrees.iter().sum::<u32>(), 2);
        let product = s.cardinalities.iter().fold(BigUint::from(1u32), |acc, q| acc * q);
        prop_assert_eq!(product, BigUint::from(ell).pow(2));
    }
}
