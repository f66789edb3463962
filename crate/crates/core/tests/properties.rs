use gtkit::complexfield::gamma::{double_power, gamma, gamma_c};
use gtkit::schemes::DoubleIndex;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use std::f64::consts::PI;

fn close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn euler_reflection(re in -4.0f64..4.0, im in 0.05f64..3.0) {
        let z = C::new(re, im);
        let lhs = gamma(z) * gamma(1.0 - z);
        prop_assert!(close(lhs, PI / (PI * z).sin(), 1e-11));
    }

    #[test]
    fn gamma_c_unit_shifts(m in -6i64..6, off in 0.05f64..0.95, beta in -4.0f64..4.0) {
        let mu = DoubleIndex::lattice(m, off, beta);
        let g = gamma_c(mu).unwrap();
        let up = gamma_c(DoubleIndex::new(mu.hol + 1.0, mu.anti)).unwrap();
        let upbar = gamma_c(DoubleIndex::new(mu.hol, mu.anti + 1.0)).unwrap();
        prop_assert!(close(up, mu.hol * g, 1e-11));
        prop_assert!(close(upbar, -mu.anti * g, 1e-11));
    }

    #[test]
    fn double_power_is_multiplicative(
        m in -5i64..5, off in -1.0f64..1.0, beta in -2.0f64..2.0,
        r1 in 0.2f64..3.0, t1 in -3.1f64..3.1, r2 in 0.2f64..3.0, t2 in -3.1f64..3.1,
    ) {
        let a = DoubleIndex::lattice(m, off, beta);
        let (z, w) = (C::from_polar(r1, t1), C::from_polar(r2, t2));
        let lhs = double_power(z * w, a).unwrap();
        let rhs = double_power(z, a).unwrap() * double_power(w, a).unwrap();
        prop_assert!(close(lhs, rhs, 1e-11));
    }
}
