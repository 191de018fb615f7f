use ccva_core::sigmoid::{build_endpoint_curve, build_transient_curve, slowest_uniform_curve};
use ccva_core::{CdsQuote, DiscountCurve, SigmoidParams};
use proptest::prelude::*;

mod common;

prop_compose! {
    fn valid_params()(
        t_start in 1.0f64..15.0,
        h_start in 0.0f64..0.05,
        extra in 0.0f64..0.5,
        gap_lo in 0.0f64..30.0,
        width in 0.0f64..40.0,
        gap_hi in 0.01f64..30.0,
        build_up in 0.0f64..0.49,
    ) -> SigmoidParams {
        let mid = t_start + gap_lo + width / 2.0;
        SigmoidParams {
            transient: false,
            t_start,
            h_start,
            mid,
            width,
            build_up,
            t_end: mid + width / 2.0 + gap_hi,
            h_max: h_start + extra,
        }
    }
}

proptest! {
    #[test]
    fn endpoint_hazards_non_decreasing(p in valid_params()) {
        let c = build_endpoint_curve(&p).unwrap();
        let pts = c.points();
        for w in pts.windows(2) {
            prop_assert!(w[1].hazard >= w[0].hazard);
            prop_assert!(w[1].time >= w[0].time);
        }
        for pt in pts {
            prop_assert!(pt.hazard >= p.h_start && pt.hazard <= p.h_max);
        }
        prop_assert_eq!(pts.last().unwrap().hazard, p.h_max);
        prop_assert_eq!(c.curve().hazard_at(p.t_end), p.h_max);
    }

    #[test]
    fn endpoint_slopes_never_steepen_at_the_end(p in valid_params()) {
        let c = build_endpoint_curve(&p).unwrap();
        let pts = c.points();
        let n = pts.len();
        let slope = |a: usize, b: usize| {
            let dt = pts[b].time - pts[a].time;
            let dh = pts[b].hazard - pts[a].hazard;
            if dt > 0.0 { dh / dt } else if dh > 0.0 { f64::INFINITY } else { 0.0 }
        };
        if n == 4 {
            prop_assert!(slope(2, 3) <= slope(1, 2));
        } else {
            prop_assert_eq!(n, 3);
            prop_assert_eq!(pts[2].label, 4);
        }
    }

    #[test]
    fn build_then_query_start(p in valid_params()) {
        prop_assume!(p.mid - p.width / 2.0 > p.t_start);
        let c = build_endpoint_curve(&p).unwrap();
        prop_assert_eq!(c.curve().hazard_at(p.t_start), p.h_start);
        prop_assert_eq!(c.points()[0].time, p.t_start);
        let t = SigmoidParams { transient: true, ..p };
        let c = build_transient_curve(&t).unwrap();
        prop_assert_eq!(c.curve().hazard_at(p.t_start), p.h_start);
    }

    #[test]
    fn transient_is_symmetric(p in valid_params()) {
        let p = SigmoidParams { transient: true, ..p };
        let c = build_transient_curve(&p).unwrap();
        let pts = c.points();
        let level = |label: u8| pts.iter().find(|x| x.label == label).unwrap().hazard;
        prop_assert_eq!(level(2), level(3));
        prop_assert_eq!(level(4), level(1));
        prop_assert_eq!(level(5), p.h_max);
        if p.width > 0.0 {
            prop_assert_eq!(c.curve().hazard_at(p.mid), p.h_max);
        }
    }
}

#[test]
fn slowest_uniform_to_forty_years_matches_oracle() {
    let lvl = 0.01 / 0.6;
    let ramp = slowest_uniform_curve(10.0, lvl, 40.0, 0.25).unwrap();
    let q = CdsQuote::new(10.0, 0.01, 0.4).unwrap();
    let curve = ccva_core::cds::attach_stress_segment(&q, &ramp).unwrap();
    let nodes = [(0.0, lvl), (10.0, lvl), (40.0, 0.25)];
    let oracle = (-common::cumulative_hazard(&nodes, 20.0, 100_000)).exp();
    assert!((curve.survival(20.0) - oracle).abs() < 1e-12);
    // and the CDS leg integrals agree with a brute-force sum
    let d = DiscountCurve::flat(0.02);
    let s = ccva_core::cds::par_spread(&curve, &d, 20.0, 0.4).unwrap();
    let s_oracle = common::par_spread(&nodes, 0.02, 20.0, 0.4, 200_000);
    assert!((s - s_oracle).abs() / s_oracle < 1e-8, "{s} {s_oracle}");
}
