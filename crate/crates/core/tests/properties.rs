use gic_core::bounds::{all_bounds, tin_sum_rate};
use gic_core::gaussmi::{assemble_joint, mi_det, mi_mmse, vars, NoisyObservationSet, Receiver};
use gic_core::regime::{asym_condition, construct_genie, find_rhos};
use gic_core::{make_symmetric, ChannelParams};
use proptest::prelude::*;

proptest! {
    #[test]
    fn lower_never_exceeds_upper(p in 0.1f64..100.0, h in -2.0f64..2.0) {
        let c = make_symmetric(p, h).unwrap();
        let b = all_bounds(&c).unwrap();
        if let Some(u) = b.min_upper() {
            prop_assert!(b.max_lower(false).bits() <= u.bits() + 1e-9);
        }
    }

    #[test]
    fn tin_is_symmetric_under_user_swap(p1 in 0.1f64..100.0, p2 in 0.1f64..100.0, h12 in -2.0f64..2.0, h21 in -2.0f64..2.0) {
        let c = ChannelParams::new(p1, p2, h12, h21).unwrap();
        let a = tin_sum_rate(&c).bits();
        let b = tin_sum_rate(&c.swapped()).bits();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        prop_assert_eq!(asym_condition(&c), asym_condition(&c.swapped()));
    }

    #[test]
    fn certificate_exists_iff_condition(p1 in 0.1f64..100.0, p2 in 0.1f64..100.0, h12 in -0.6f64..0.6, h21 in -0.6f64..0.6) {
        let c = ChannelParams::new(p1, p2, h12, h21).unwrap();
        prop_assert_eq!(find_rhos(&c).is_some(), asym_condition(&c));
        if h12 != 0.0 && h21 != 0.0 {
            prop_assert_eq!(construct_genie(&c).is_some(), asym_condition(&c));
        }
    }

    #[test]
    fn receiver_paths_agree_for_constructed_genies(p in 0.1f64..100.0, frac in 0.01f64..1.0) {
        // Scale h into the regime: h (1 + h² p) <= 1/2 holds for h <= the root.
        let mut h = 0.5;
        while h * (1.0 + h * h * p) > 0.5 { h *= 0.99; }
        let c = make_symmetric(p, h * frac).unwrap();
        let g = construct_genie(&c).unwrap();
        let joint = assemble_joint(&c, Some(&g)).unwrap();
        for rx in [Receiver::One, Receiver::Two] {
            let (x, y, s) = rx.names();
            let det = mi_det(&joint, x, &[y, s]).unwrap().bits();
            let obs = NoisyObservationSet::for_receiver(&c, Some(&g), rx).unwrap();
            let mmse = mi_mmse(&obs).unwrap().bits();
            prop_assert!((det - mmse).abs() <= 1e-9);
        }
        let without = mi_det(&joint, vars::X1, &[vars::Y1]).unwrap().bits();
        let with = mi_det(&joint, vars::X1, &[vars::Y1, vars::S1]).unwrap().bits();
        prop_assert!((with - without).abs() <= 1e-9);
    }
}
