//! Property checks of the scalar kernels.

mod common;

use beta_integrals::special::{c64, kummer_1f1, log_gamma, principal_ln, principal_power, ComplexScalar};
use common::{kummer_bound_ratio, kummer_transform_deviation, log_distance};
use proptest::prelude::*;

#[test]
fn gamma_recurrence_on_grid() {
    let worst = common::gamma_recurrence_worst();
    assert!(worst <= 1e-12, "worst relative deviation {worst:e}");
}

#[test]
fn gamma_duplication_on_grid() {
    let worst = common::gamma_duplication_worst();
    assert!(worst <= 1e-12, "worst relative deviation {worst:e}");
}

#[test]
fn bessel_k_matches_basset_integral() {
    let worst = common::basset_worst();
    assert!(worst <= 1e-8, "worst relative gap {worst:e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gamma_recurrence(re in 0.01f64..10.0, im in -20.0f64..20.0) {
        let z = c64(re, im);
        let d = log_distance(log_gamma(z + 1.0).unwrap(), log_gamma(z).unwrap() + principal_ln(z));
        prop_assert!(d <= 1e-12, "z = {z}, deviation {d:e}");
    }

    #[test]
    fn power_exponents_add(
        r in 0.05f64..20.0,
        theta in -3.1f64..3.1,
        e1 in (-3.0f64..3.0, -3.0f64..3.0),
        e2 in (-3.0f64..3.0, -3.0f64..3.0),
    ) {
        let b = ComplexScalar::from_polar(r, theta);
        let (e1, e2) = (c64(e1.0, e1.1), c64(e2.0, e2.1));
        let joint = principal_power(b, e1 + e2).unwrap();
        let split = principal_power(b, e1).unwrap() * principal_power(b, e2).unwrap();
        prop_assert!((joint - split).norm() <= 1e-12 * joint.norm(), "{joint} vs {split}");
    }

    #[test]
    fn kummer_transform_real(a in 0.05f64..8.0, gap in 0.05f64..8.0, x in -40.0f64..40.0) {
        // c > a > 0 keeps 1F1 positive on the real line.
        let dev = kummer_transform_deviation(c64(a, 0.0), c64(a + gap, 0.0), c64(x, 0.0));
        prop_assert!(dev <= 1e-9, "deviation {dev:e}");
    }

    #[test]
    fn kummer_transform_complex(
        a in (0.1f64..5.0, -2.0f64..2.0),
        c in (0.5f64..6.0, -2.0f64..2.0),
        z in (-25.0f64..25.0, -25.0f64..25.0),
    ) {
        let (a, c, z) = (c64(a.0, a.1), c64(c.0, c.1), c64(z.0, z.1));
        // Relative accuracy is meaningless next to a zero of 1F1.
        prop_assume!(kummer_1f1(a, c, z).unwrap().norm() > 1e-3 * z.re.max(0.0).exp());
        let dev = kummer_transform_deviation(a, c, z);
        prop_assert!(dev <= 1e-9, "deviation {dev:e}");
    }

    #[test]
    fn kummer_exponential_bound(g1 in 0.01f64..10.0, gap in 0.0f64..10.0, x in 0.0f64..45.0) {
        let f = kummer_1f1(c64(g1, 0.0), c64(g1 + gap, 0.0), c64(x, 0.0)).unwrap();
        prop_assert!(f.im == 0.0 || f.im.abs() <= 1e-15 * f.re.abs());
        // Equality holds at g1 = g2, so allow rounding in the last bits.
        let ratio = kummer_bound_ratio(g1, g1 + gap, x);
        prop_assert!(ratio <= 1.0 + 8.0 * f64::EPSILON, "1F1/e^x = {ratio}");
    }
}
