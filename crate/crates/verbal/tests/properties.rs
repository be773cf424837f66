//! Property tests for the algebraic invariants the library relies on.

use proptest::prelude::*;

use verbal::counting::additivity_audit;
use verbal::{
    audit_pair_bounds, count_occurrences, exceptional_indices, family_pattern, family_qm,
    naive_count_occurrences, witness, CountingQM, Letter, Mode, SplitMix64, Word, WordMap,
};

fn letter(rank: u8) -> impl Strategy<Value = Letter> {
    (0..rank, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv))
}

/// Raw, not necessarily reduced, letter sequences.
fn raw_letters(rank: u8, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(letter(rank), 0..=max_len)
}

/// Freely reduced words, built by reducing raw sequences.
fn word(rank: u8, max_len: usize) -> impl Strategy<Value = Word> {
    raw_letters(rank, max_len).prop_map(move |ls| Word::from_letters(rank, ls))
}

proptest! {
    #[test]
    fn reduction_is_idempotent_and_shrinking(raw in raw_letters(2, 40)) {
        let once = Word::from_letters(2, raw.clone());
        let twice = Word::from_letters(2, once.letters().iter().copied());
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.len() <= raw.len());
    }

    #[test]
    fn inverse_concatenation_cancels(x in word(2, 30)) {
        prop_assert!(x.mul(&x.inverse()).is_identity());
        prop_assert!(x.inverse().mul(&x).is_identity());
    }

    #[test]
    fn inverse_is_an_involution(x in word(3, 30)) {
        prop_assert_eq!(x.inverse().inverse(), x.clone());
        prop_assert_eq!(x.inverse().len(), x.len());
    }

    #[test]
    fn multiplication_is_associative(x in word(2, 20), y in word(2, 20), z in word(2, 20)) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }

    #[test]
    fn product_length_is_subadditive(x in word(2, 20), y in word(2, 20)) {
        prop_assert!(x.mul(&y).len() <= x.len() + y.len());
    }

    #[test]
    fn cyclic_reduction_restores_the_word(x in word(2, 30)) {
        let split = x.cyclic_reduce();
        prop_assert!(split.core().is_cyclically_reduced());
        prop_assert_eq!(split.original(), x);
    }

    #[test]
    fn gromov_product_matches_the_metric_formula(x in word(2, 25), y in word(2, 25)) {
        let gp = x.gromov_product(&y);
        let dist = x.inverse().mul(&y).len();
        prop_assert_eq!(2 * gp, x.len() + y.len() - dist);
        prop_assert!(gp <= x.len().min(y.len()));
    }

    #[test]
    fn gromov_products_locate_a_tripod_center(
        x in word(2, 20),
        y in word(2, 20),
        z in word(2, 20),
    ) {
        // in a tree the two smallest of the three products agree
        let mut products = [
            x.gromov_product(&y),
            y.gromov_product(&z),
            x.gromov_product(&z),
        ];
        products.sort_unstable();
        prop_assert_eq!(products[0], products[1]);
    }

    #[test]
    fn display_round_trips(x in word(4, 30)) {
        prop_assert_eq!(Word::parse(&x.to_string(), 4).unwrap(), x);
    }

    #[test]
    fn kmp_and_naive_counts_agree(
        pattern in word(2, 6).prop_filter("non-empty", |p| !p.is_empty()),
        subject in word(2, 40),
    ) {
        prop_assert_eq!(
            count_occurrences(&pattern, &subject, Mode::Linear).unwrap(),
            naive_count_occurrences(&pattern, &subject, Mode::Linear)
        );
        let core = subject.cyclic_reduce().into_core();
        if pattern.is_cyclically_reduced() {
            prop_assert_eq!(
                count_occurrences(&pattern, &core, Mode::Cyclic).unwrap(),
                naive_count_occurrences(&pattern, &core, Mode::Cyclic)
            );
        }
    }

    #[test]
    fn qm_is_antisymmetric(x in word(2, 30), i in 1u32..6) {
        let linear = family_qm(i);
        prop_assert_eq!(linear.value(&x.inverse()), -linear.value(&x));
        let cyclic = CountingQM::new(family_pattern(i), Mode::Cyclic).unwrap();
        prop_assert_eq!(cyclic.value(&x.inverse()), -cyclic.value(&x));
    }

    #[test]
    fn cyclic_mode_is_a_conjugacy_invariant(x in word(2, 25), g in word(2, 15), i in 1u32..5) {
        let cyclic = CountingQM::new(family_pattern(i), Mode::Cyclic).unwrap();
        prop_assert_eq!(cyclic.value(&x.conjugate(&g)), cyclic.value(&x));
    }

    #[test]
    fn bicombing_is_left_invariant(
        x in word(2, 15),
        y in word(2, 15),
        z in word(2, 15),
        i in 1u32..5,
    ) {
        let q = family_qm(i);
        prop_assert_eq!(q.bicombing(&z.mul(&x), &z.mul(&y)), q.bicombing(&x, &y));
    }

    #[test]
    fn family_defect_stays_within_three(x in word(2, 20), y in word(2, 20), i in 1u32..8) {
        let q = family_qm(i);
        let defect = q.value(&x.mul(&y)) - q.value(&x) - q.value(&y);
        prop_assert!(defect.abs() <= 3);
    }

    #[test]
    fn at_most_three_exceptional_indices(y in word(2, 12), z in word(2, 12)) {
        prop_assert!(exceptional_indices(&y, &z, 60).len() <= 3);
    }

    #[test]
    fn additivity_audit_is_consistent(y in word(2, 10), z in word(2, 10)) {
        let audit = additivity_audit(&y, &z, 20);
        prop_assert_eq!(audit.exceptional(), exceptional_indices(&y, &z, 20));
        for row in &audit.rows {
            prop_assert_eq!(row.delta(), row.h_yz - row.h_y - row.h_z);
        }
    }

    #[test]
    fn pair_bound_audit_holds(
        base_x in word(2, 10),
        base_y in word(2, 10),
        base_z in word(2, 10),
        off_x in word(2, 6),
        off_y in word(2, 6),
        off_z in word(2, 6),
    ) {
        let x_p = base_x.mul(&off_x);
        let y_p = base_y.mul(&off_y);
        let z_p = base_z.mul(&off_z);
        let audit = audit_pair_bounds((&base_x, &x_p), (&base_y, &y_p), (&base_z, &z_p), 40);
        prop_assert!(audit.all_ok(), "counts {:?} with L = {}", (
            audit.nonzero_single, audit.nonzero_pair, audit.nonzero_triple
        ), audit.max_pair_distance);
    }

    #[test]
    fn substituting_one_generator_exposes_the_exponent_sum(
        seed in any::<u64>(),
        len in 1usize..8,
    ) {
        let map = SplitMix64::new(seed).random_word_map(3, len);
        let data = map.exponent_data();
        let a = Word::parse("a", 2).unwrap();
        let args = vec![a.clone(); map.arity()];
        let total: i64 = data.exponent_sums.iter().sum();
        prop_assert_eq!(map.substitute(&args).unwrap(), a.pow(total));
    }

    #[test]
    fn bezout_arguments_realize_the_degree_power(
        seed in any::<u64>(),
        len in 1usize..8,
        g in word(2, 8),
    ) {
        let map = SplitMix64::new(seed).random_word_map(3, len);
        let data = map.exponent_data();
        prop_assume!(data.degree >= 1);
        let args = map.power_as_verbal_value(&g).unwrap();
        prop_assert_eq!(map.substitute(&args).unwrap(), g.pow(data.degree as i64));
    }

    #[test]
    fn divisibility_outside_a_bounded_index_set(
        seed in any::<u64>(),
        len in 2usize..6,
        arg_len in 0usize..5,
    ) {
        let mut rng = SplitMix64::new(seed);
        let map = rng.random_word_map(2, len);
        let data = map.exponent_data();
        prop_assume!(data.degree >= 2);
        let args: Vec<Word> =
            (0..map.arity()).map(|_| rng.random_reduced_word(2, arg_len)).collect();
        let value = map.substitute(&args).unwrap();
        let d = data.degree as i64;
        let bad = (1..=40u32).filter(|&i| family_qm(i).value(&value) % d != 0).count();
        prop_assert!(bad as u64 <= 3 * (map.len() as u64 - 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn witness_profile_for_random_small_k(k in 1u32..7, d in 2u64..4) {
        let map = WordMap::parse(&format!("x1^{d}")).unwrap();
        let h = witness(&map, k).unwrap();
        for i in 1..=k {
            prop_assert_eq!(family_qm(i).value(&h), 1);
        }
        for i in (k + 1)..=(k + 10) {
            prop_assert_eq!(family_qm(i).value(&h), 0);
        }
    }
}
