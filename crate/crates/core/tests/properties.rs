use num_complex::Complex64;
use proptest::prelude::*;

use bohr_harmonic::dirichlet::families::random;
use bohr_harmonic::dirichlet::{hinf_norm, hq_norm, DirichletPolynomial, HinfConfig};
use bohr_harmonic::io;
use bohr_harmonic::torus::{norm, Quadrature};
use bohr_harmonic::DEFAULT_BUDGET;

fn poly() -> impl Strategy<Value = DirichletPolynomial> {
    prop::collection::vec((1u64..60, -2.0f64..2.0, -2.0f64..2.0), 1..12).prop_filter_map("nonzero", |terms| {
        let f = DirichletPolynomial::new(terms.into_iter().map(|(n, re, im)| (n, Complex64::new(re, im)))).ok()?;
        (!f.is_empty()).then_some(f)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn norm_chain(n in 2u64..80, seed in 0u64..10_000) {
        let f = random(n, seed).unwrap();
        let quad = Quadrature::even_exact();
        let h2 = hq_norm(&f, 2.0, &quad).unwrap().value;
        let h4 = hq_norm(&f, 4.0, &quad).unwrap().value;
        let cfg = HinfConfig { samples: 4097, ascent: false, ..HinfConfig::default() };
        let sup = hinf_norm(&f, &cfg).unwrap();
        prop_assert!((h2 * h2 - f.coeff_l2_sq()).abs() <= 1e-12 * f.coeff_l2_sq());
        prop_assert!(h2 <= h4 * (1.0 + 1e-12));
        prop_assert!(h4 <= sup.certified_upper() * (1.0 + 1e-12));
        prop_assert!(sup.best_lower() <= sup.certified_upper());
        prop_assert!(sup.certified_upper() <= f.coeff_l1() * (1.0 + 1e-12));
    }

    #[test]
    fn even_exact_paths_agree(f in poly()) {
        let quad = Quadrature::even_exact();
        let a = hq_norm(&f, 4.0, &quad).unwrap().value;
        let b = norm(&f.bohr_lift().unwrap(), 4.0, &quad).unwrap().value;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn multiplication_commutes_exactly(f in poly(), g in poly()) {
        prop_assert_eq!(f.mul(&g, DEFAULT_BUDGET).unwrap(), g.mul(&f, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn dirichlet_documents_round_trip(f in poly()) {
        let text = io::dirichlet_to_string(&f);
        prop_assert_eq!(io::dirichlet_from_str(&text).unwrap(), f);
    }
}
