use num_rational::Ratio;
use proptest::prelude::*;
use vsg_core::automaton::{Bound, SegmentSpec};
use vsg_core::model::parse_ruleset;
use vsg_core::segmentation::{estimate_boundaries, n_percolates, verify_segmentation};
use vsg_core::{compute_grid, OutcomeGrid};

fn r(n: i64, d: i64) -> Ratio<i64> {
    Ratio::new(n, d)
}

/// Checkerboard below `q*y = p*x`, every third column above it.
fn two_band(n: usize, p: i64, q: i64) -> OutcomeGrid {
    OutcomeGrid::from_fn(n, n, |x, y| if q * y as i64 <= p * x as i64 { (x + y) % 2 == 0 } else { x % 3 == 0 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn four_connected_percolation_implies_eight(
        w in 16usize..48,
        h in 16usize..48,
        density in 0.3f64..0.9,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = OutcomeGrid::from_fn(w, h, |_, _| rng.random_bool(1.0 - density));
        let quadrant = SegmentSpec::default();
        let four = n_percolates(&g, &quadrant, 4).unwrap();
        let eight = n_percolates(&g, &quadrant, 8).unwrap();
        prop_assert!(!four.percolates || eight.percolates);
        prop_assert!(eight.reached >= four.reached);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn estimated_slope_is_scale_equivariant(i in 0usize..5) {
        let (p, q) = [(1, 2), (1, 1), (2, 1), (3, 4), (4, 3)][i];
        let small = estimate_boundaries(&two_band(128, p, q), 20).unwrap();
        let large = estimate_boundaries(&two_band(256, p, q), 20).unwrap();
        prop_assert_eq!(small[0].slope, r(p, q));
        prop_assert_eq!(large[0].slope, small[0].slope);
    }
}

#[test]
fn certified_segmentation_survives_a_larger_board() {
    let s = parse_ruleset("2,6;6,2;3,3").unwrap();
    let lines = [Bound::new(r(11, 16), r(0, 1)), Bound::new(r(1, 1), r(0, 1)), Bound::new(r(16, 11), r(0, 1))];
    let small = verify_segmentation(&compute_grid(&s, 300, 300).unwrap(), &lines).unwrap();
    assert!(small.pass);
    let large = verify_segmentation(&compute_grid(&s, 600, 600).unwrap(), &lines).unwrap();
    assert!(large.pass, "{large:?}");
    assert_eq!(large.k, small.k);
}

#[test]
fn failing_segmentation_is_not_forced_by_growth() {
    // No tested line triple certifies every wedge here; growth must still respect pass(300) => pass(600).
    let s = parse_ruleset("2,6;3,3;6,1").unwrap();
    let lines = [Bound::new(r(1, 3), r(0, 1)), Bound::new(r(1, 1), r(0, 1)), Bound::new(r(3, 1), r(0, 1))];
    let small = verify_segmentation(&compute_grid(&s, 300, 300).unwrap(), &lines);
    let large = verify_segmentation(&compute_grid(&s, 600, 600).unwrap(), &lines);
    if let (Ok(small), Ok(large)) = (small, large) {
        assert!(!small.pass || large.pass);
    }
}
