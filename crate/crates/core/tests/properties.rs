use eulerlab_core::eulercocycle::{floor_cocycle, integral_euler_cocycle, Alpha};
use eulerlab_core::extensions::{BaseGroup, FiniteGroupTable, TwoCocycle};
use eulerlab_core::ivanovturaev::{
    eul_chunk, it_invariance_check, nonzero_sign_patterns, smillie_sign_patterns, t_value,
    VectorTuple,
};
use eulerlab_core::lifts::translation_number;
use eulerlab_core::quasimorphism::{bar_coboundary, OddSequence, Quasimorphism};
use eulerlab_core::simplicialvolume::{l1_norm, Chain2};
use eulerlab_core::words::{ball, ball_size, reduce_word};
use eulerlab_core::{CircleMap, Lift};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn pl_strategy() -> impl Strategy<Value = Lift> {
    (2usize..6, any::<u64>()).prop_map(|(k, seed)| {
        // deterministic increasing breakpoints from the seed
        let mut s = seed | 1;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        let off = next();
        let mut xs: Vec<f64> = (0..k).map(|_| next()).collect();
        let mut ys: Vec<f64> = (0..k).map(|_| off + next()).collect();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        xs.dedup();
        ys.dedup();
        let n = xs.len().min(ys.len());
        Lift::pl(xs[..n].iter().copied().zip(ys[..n].iter().copied()).collect(), 0).unwrap()
    })
}

fn vec_strategy(dim: usize, count: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, dim), count)
}

fn tuple(vs: &[Vec<f64>]) -> VectorTuple {
    VectorTuple::from_vectors(vs.iter().map(|v| DVector::from_column_slice(v)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotation_enclosures_contain_the_angle(a in -5.0f64..5.0) {
        let e = translation_number(&Lift::rotation(a), 1e-9).unwrap();
        prop_assert!(e.contains(a));
    }

    #[test]
    fn integral_cocycle_takes_values_zero_one(f in pl_strategy(), g in pl_strategy(), x0 in 0.0f64..1.0) {
        let c = integral_euler_cocycle(&CircleMap::new(&f), &CircleMap::new(&g), x0).unwrap();
        prop_assert!(c == 0 || c == 1);
    }

    #[test]
    fn ball_words_are_reduced(rank in 1u32..4, radius in 0usize..4) {
        let words = ball(rank, radius).unwrap();
        prop_assert_eq!(words.len() as u128, ball_size(rank, radius));
        for w in &words {
            prop_assert!(w.len() <= radius);
            prop_assert!(w.letters().windows(2).all(|p| p[0] != -p[1]));
        }
    }

    #[test]
    fn rolli_coboundary_bounded(a in prop::collection::vec(-4i32..5, 0..8), b in prop::collection::vec(-4i32..5, 0..8)) {
        let clean = |v: &[i32]| v.iter().copied().filter(|&x| x != 0 && x.abs() <= 2).collect::<Vec<_>>();
        let f = Quasimorphism::rolli(OddSequence::unit_sign());
        let g1 = reduce_word(2, &clean(&a)).unwrap();
        let g2 = reduce_word(2, &clean(&b)).unwrap();
        prop_assert!(bar_coboundary(&f, &g1, &g2).abs() <= 3.0 * OddSequence::unit_sign().bound());
    }

    #[test]
    fn floor_cocycle_is_zero_or_one(p in -50i64..50, q in 1u64..20, n in -100i64..100, m in -100i64..100) {
        let c = floor_cocycle(Alpha::Rational { p, q }, n, m);
        prop_assert!(c == 0 || c == 1);
    }

    #[test]
    fn swapping_vectors_flips_t(vs in vec_strategy(2, 3)) {
        let v = tuple(&vs);
        let mut w = vs.clone();
        w.swap(0, 2);
        prop_assert_eq!(t_value(&tuple(&w)), -t_value(&v));
    }

    #[test]
    fn smillie_matches_exhaustion(vs in vec_strategy(3, 4)) {
        let v = tuple(&vs);
        if let Ok((i1, i2)) = smillie_sign_patterns(&v) {
            let mut brute = nonzero_sign_patterns(&v);
            brute.sort();
            let mut pair = vec![i1, i2];
            pair.sort();
            prop_assert_eq!(brute, pair);
        }
    }

    #[test]
    fn t_is_invariant_under_positive_diagonals(vs in vec_strategy(2, 3), a in 0.1f64..5.0, b in 0.1f64..5.0) {
        let v = tuple(&vs);
        let g = DMatrix::from_row_slice(2, 2, &[a, 0.0, 0.0, b]);
        if v.is_generic() && v.transform(&g).is_generic() {
            prop_assert!(it_invariance_check(&g, &v).unwrap());
        }
    }

    #[test]
    fn l1_is_sum_of_absolute_values(cs in prop::collection::vec(-10.0f64..10.0, 0..12)) {
        let chain = Chain2::new(cs.iter().enumerate().map(|(i, &c)| (c, i)).collect());
        let expected: f64 = cs.iter().map(|c| c.abs()).sum();
        prop_assert!((l1_norm(&chain) - expected).abs() <= 1e-12);
    }

    #[test]
    fn coboundaries_keep_cocycles(m in 2usize..8, c in -3i64..4, u in prop::collection::vec(-5i64..6, 8)) {
        let base = BaseGroup::Finite(FiniteGroupTable::cyclic(m).unwrap());
        let mi = m as i64;
        let phi = TwoCocycle::from_fn(base, |g, h| c * ((g + h >= mi) as i64));
        prop_assert_eq!(phi.add_coboundary(|g| u[g as usize]).residual(), 0);
    }
}

#[test]
fn discarded_fraction_shrinks_with_eps() {
    let gs = vec![
        DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]),
        DMatrix::identity(2, 2),
        DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]),
    ];
    let discarded: Vec<u64> = [1e-1, 1e-3, 1e-6, 1e-12]
        .iter()
        .map(|&eps| eul_chunk(&gs, 3, 0, 4096, eps).unwrap().discarded)
        .collect();
    assert!(discarded.windows(2).all(|w| w[1] <= w[0]), "{discarded:?}");
    assert!(discarded[0] > 0);
    assert_eq!(discarded[3], 0);
}
