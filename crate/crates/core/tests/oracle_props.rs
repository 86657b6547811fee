use proptest::prelude::*;
use vsg_core::oracle::{compute_grid_with, GridOptions, Strategy as Exec};
use vsg_core::{compute_grid, compute_sequence, Ruleset};

fn ruleset_2d(max: u64, k: usize) -> impl Strategy<Value = Ruleset> {
    prop::collection::vec((0..=max, 0..=max).prop_filter("nonzero", |&(a, b)| a + b > 0), 1..=k)
        .prop_map(|m| Ruleset::from_pairs(&m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exchange_property(s in ruleset_2d(70, 4), w in 1usize..150, h in 1usize..60) {
        let g = compute_grid(&s, w, h).unwrap();
        for y in 0..h {
            for x in 0..w {
                let options: Vec<bool> = s
                    .pairs()
                    .into_iter()
                    .filter(|&(a, b)| x as u64 >= a && y as u64 >= b)
                    .map(|(a, b)| g.get(x - a as usize, y - b as usize))
                    .collect();
                prop_assert_eq!(g.get(x, y), !options.contains(&true), "({}, {})", x, y);
            }
        }
    }

    #[test]
    fn deterministic_across_strategies(s in ruleset_2d(80, 5), w in 1usize..300, h in 1usize..300) {
        let seq = compute_grid_with(&s, w, h, &GridOptions { strategy: Exec::Sequential, ..Default::default() }).unwrap();
        let par = compute_grid_with(&s, w, h, &GridOptions { strategy: Exec::Parallel, ..Default::default() }).unwrap();
        prop_assert_eq!(&seq, &par);
        prop_assert_eq!(&seq, &compute_grid(&s, w, h).unwrap());
    }

    #[test]
    fn restriction_coherence(s in ruleset_2d(20, 4), w in 1usize..130, h in 1usize..80, fw in 0.0f64..1.0, fh in 0.0f64..1.0) {
        let big = compute_grid(&s, w, h).unwrap();
        let (sw, sh) = (((w as f64 * fw) as usize).max(1), ((h as f64 * fh) as usize).max(1));
        prop_assert_eq!(big.restrict(sw, sh), compute_grid(&s, sw, sh).unwrap());
    }

    #[test]
    fn horizontal_rulesets_match_sequences(moves in prop::collection::vec(1u64..90, 1..5), w in 1usize..200) {
        let s2 = Ruleset::from_pairs(&moves.iter().map(|&m| (m, 0)).collect::<Vec<_>>()).unwrap();
        let s1 = Ruleset::from_vecs(moves.iter().map(|&m| vec![m])).unwrap();
        let g = compute_grid(&s2, w, 5).unwrap();
        let seq = compute_sequence(&s1, w).unwrap();
        for y in 0..5 {
            prop_assert_eq!(g.row(y), seq.bits().to_vec());
        }
    }
}
