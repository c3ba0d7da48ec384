use hecke_core::equidist::{apply_normalized, error_norms, mass_average, run_squarefree_experiment, spectrum, StratumFunction};
use hecke_core::number_field::NumberFieldSpec;
use hecke_core::satake::{degree_global, norm_global, GlobalOperatorSpec};
use hecke_core::supersingular::{enumerate_locus, hecke_matrix, ModularPolynomialLibrary};
use proptest::prelude::*;

const PRIMES: [u64; 6] = [101, 211, 389, 503, 1009, 1201];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn projection_and_contraction(p in prop::sample::select(PRIMES.to_vec()), li in 0usize..6, seed in any::<u64>()) {
        let lib = ModularPolynomialLibrary::builtin().unwrap();
        let ell = lib.levels()[li];
        let locus = enumerate_locus(p).unwrap();
        let t = hecke_matrix(&locus, lib.get(ell).unwrap()).unwrap();
        prop_assert!(spectrum(&locus, &t).unwrap().within_bound(1e-9));

        let v = StratumFunction::random_unit(&locus, seed);
        let avg = mass_average(&locus, &v).unwrap();
        let (idem, _) = error_norms(&locus, &mass_average(&locus, &avg).unwrap(), &avg).unwrap();
        prop_assert!(idem <= 1e-12);

        let tv = apply_normalized(&locus, &t, &v).unwrap();
        let (fixed, _) = error_norms(&locus, &mass_average(&locus, &tv).unwrap(), &avg).unwrap();
        prop_assert!(fixed <= 1e-12);

        let factor = 2.0 * (ell as f64).sqrt() / (ell as f64 + 1.0);
        let (_, before) = error_norms(&locus, &v, &avg).unwrap();
        let (_, after) = error_norms(&locus, &tv, &avg).unwrap();
        prop_assert!(after <= factor * before * (1.0 + 1e-9));
    }
}

#[test]
fn bound_column_matches_satake() {
    let lib = ModularPolynomialLibrary::builtin().unwrap();
    let locus = enumerate_locus(211).unwrap();
    let v = StratumFunction::random_unit(&locus, 5);
    let rep = run_squarefree_experiment(&locus, &[2, 3, 5, 7, 11, 13], &v, "random", &lib).unwrap();
    for row in &rep.rows {
        let spec = GlobalOperatorSpec::new(2, 1, row.m, NumberFieldSpec::rationals()).unwrap();
        let deg = degree_global(&spec).unwrap();
        let exact = norm_global(&spec).unwrap().to_f64() / deg.to_string().parse::<f64>().unwrap();
        assert_eq!(deg.to_string(), row.degree);
        assert!((exact - row.bound).abs() <= 1e-12 * exact, "m={}", row.m);
    }
}
