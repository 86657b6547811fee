use proptest::prelude::*;
use vsg_core::closed_form::{
    solve_additive_three_1d, solve_one_move_1d, solve_one_move_2d, solve_two_move_1d, solve_two_move_2d, solve_two_move_dd, twin_lift,
};
use vsg_core::{compute_dd, compute_grid, compute_sequence, Position, Ruleset};

fn mv(max: u64) -> impl Strategy<Value = (u64, u64)> {
    (0..=max, 0..=max).prop_filter("nonzero", |&(a, b)| a + b > 0)
}

fn two_moves(max: u64) -> impl Strategy<Value = Ruleset> {
    (mv(max), mv(max)).prop_filter("distinct", |(a, b)| a != b).prop_map(|(a, b)| Ruleset::from_pairs(&[a, b]).unwrap())
}

fn two_moves_dd(d: usize, max: u64) -> impl Strategy<Value = Ruleset> {
    let v = prop::collection::vec(0..=max, d).prop_filter("nonzero", |v| v.iter().any(|&c| c > 0));
    (v.clone(), v).prop_filter("distinct", |(a, b)| a != b).prop_map(|(a, b)| Ruleset::from_vecs([a, b]).unwrap())
}

proptest! {
    #[test]
    fn two_move_matches_oracle(s in two_moves(12)) {
        let g = compute_grid(&s, 90, 90).unwrap();
        for y in 0..90u64 {
            for x in 0..90u64 {
                prop_assert_eq!(solve_two_move_2d(&s, x, y).unwrap().is_p(), g.get(x as usize, y as usize), "({}, {})", x, y);
            }
        }
    }

    #[test]
    fn translation_invariance(s in two_moves(1 << 20), x in any::<u32>(), y in any::<u32>(), k in 1u64..1000) {
        let p = s.pairs();
        let (dx, dy) = (k * (p[0].0 + p[1].0), k * (p[0].1 + p[1].1));
        let (x, y) = (x as u64, y as u64);
        prop_assert_eq!(solve_two_move_2d(&s, x, y).unwrap(), solve_two_move_2d(&s, x + dx, y + dy).unwrap());
        let dd = |a: u64, b: u64| solve_two_move_dd(&s, &Position(vec![a, b])).unwrap();
        prop_assert_eq!(dd(x, y), dd(x + dx, y + dy));
        prop_assert_eq!(dd(x, y), solve_two_move_2d(&s, x, y).unwrap());
    }

    #[test]
    fn dd_matches_oracle(s in (1usize..=4).prop_flat_map(|d| two_moves_dd(d, 4))) {
        let d = s.dimension();
        let side = if d == 4 { 8 } else { 12 };
        let g = compute_dd(&s, &vec![side; d]).unwrap();
        for (pos, is_p) in g.iter() {
            prop_assert_eq!(solve_two_move_dd(&s, &Position(pos.clone())).unwrap().is_p(), is_p, "{:?}", pos);
        }
    }

    #[test]
    fn one_move_period(a in 0u64..1000, b in 0u64..1000, x in any::<u32>(), y in any::<u32>()) {
        prop_assume!(a + b > 0);
        let (x, y) = (x as u64, y as u64);
        prop_assert_eq!(solve_one_move_2d(a, b, x, y).unwrap(), solve_one_move_2d(a, b, x + 2 * a, y + 2 * b).unwrap());
    }

    #[test]
    fn one_move_matches_oracle(a in 0u64..8, b in 0u64..8) {
        prop_assume!(a + b > 0);
        let g = compute_grid(&Ruleset::from_pairs(&[(a, b)]).unwrap(), 40, 40).unwrap();
        for y in 0..40 {
            for x in 0..40 {
                prop_assert_eq!(solve_one_move_2d(a, b, x as u64, y as u64).unwrap().is_p(), g.get(x, y));
            }
        }
    }

    #[test]
    fn two_move_1d_matches_sequence(a in 1u64..20, b in 1u64..20) {
        prop_assume!(a < b);
        let seq = compute_sequence(&Ruleset::from_vecs([vec![a], vec![b]]).unwrap(), 300).unwrap();
        for x in 0..300 {
            prop_assert_eq!(solve_two_move_1d(a, b, x as u64).unwrap().is_p(), seq.bits()[x]);
        }
    }

    #[test]
    fn additive_three_1d_matches_sequence(b in 2u64..30, f in 0.0f64..1.0) {
        let a = b.div_ceil(2) + ((b - b.div_ceil(2)) as f64 * f) as u64;
        prop_assume!(a < b);
        let seq = compute_sequence(&Ruleset::from_vecs([vec![a], vec![b], vec![a + b]]).unwrap(), 400).unwrap();
        for x in 0..400 {
            prop_assert_eq!(solve_additive_three_1d(a, b, x as u64).unwrap().is_p(), seq.bits()[x]);
        }
    }

    #[test]
    fn twin_lift_matches_oracle(s in 1u64..10) {
        let g = compute_grid(&Ruleset::from_pairs(&[(s, s)]).unwrap(), 64, 64).unwrap();
        for y in 0..64u64 {
            for x in 0..64u64 {
                let lifted = twin_lift(|v| solve_one_move_1d(s, v).unwrap(), x, y);
                prop_assert_eq!(lifted.is_p(), g.get(x as usize, y as usize));
            }
        }
    }
}
