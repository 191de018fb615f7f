use ccva_core::cds::{attach_stress_segment, bootstrap_flat_hazard, par_spread};
use ccva_core::sigmoid::slowest_uniform_curve;
use ccva_core::{CdsQuote, DiscountCurve, HazardCurve};
use proptest::prelude::*;

proptest! {
    #[test]
    fn bootstrap_round_trip(
        maturity in 0.5f64..30.0,
        spread in 0.0f64..0.2,
        recovery in 0.0f64..0.9,
    ) {
        let q = CdsQuote::new(maturity, spread, recovery).unwrap();
        let h = bootstrap_flat_hazard(&q).unwrap();
        let s = par_spread(&h, &DiscountCurve::flat(0.0), q.maturity, q.recovery).unwrap();
        prop_assert!((s - spread).abs() <= 1e-10 * spread.max(1e-300) || (s - spread).abs() < 1e-18,
            "{} vs {}", s, spread);
    }

    #[test]
    fn higher_hazard_after_t_widens_longer_spreads(
        base in 0.001f64..0.1,
        bump in 0.001f64..0.3,
        t in 1.0f64..20.0,
        extra in 0.25f64..30.0,
    ) {
        let low = HazardCurve::flat(base).unwrap();
        let high = HazardCurve::new(vec![(0.0, base), (t, base), (t + 1.0, base + bump)]).unwrap();
        let d = DiscountCurve::flat(0.02);
        let m = t + extra;
        prop_assert!(par_spread(&high, &d, m, 0.4).unwrap() > par_spread(&low, &d, m, 0.4).unwrap());
        // identical up to t
        let a = par_spread(&high, &d, t, 0.4).unwrap();
        let b = par_spread(&low, &d, t, 0.4).unwrap();
        prop_assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn long_spreads_saturate_on_the_eighty_year_ramp() {
    let q = CdsQuote::new(10.0, 0.01, 0.4).unwrap();
    let ramp = slowest_uniform_curve(10.0, q.flat_hazard().unwrap(), 80.0, 0.25).unwrap();
    let h = attach_stress_segment(&q, &ramp).unwrap();
    let d = DiscountCurve::default();
    let s70 = par_spread(&h, &d, 70.0, 0.4).unwrap();
    let s80 = par_spread(&h, &d, 80.0, 0.4).unwrap();
    assert!(1e4 * (s80 - s70).abs() < 1.0, "{s70} {s80}");
}
