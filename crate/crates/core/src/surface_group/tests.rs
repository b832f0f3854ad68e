use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;

fn w(s: &str) -> SurfaceWord {
    s.parse().unwrap()
}

fn arb_word(max_len: usize) -> impl Strategy<Value = SurfaceWord> {
    prop::collection::vec((0u8..4, any::<bool>()), 0..=max_len)
        .prop_map(|v| SurfaceWord::new(v.into_iter().map(|(i, inv)| Letter::new(i, inv).unwrap())))
}

#[test]
fn free_reduction_examples() {
    assert!(w("Aa").is_empty());
    assert_eq!(w("ABbC"), w("AC"));
    assert_eq!(w("ABbC").to_string(), "AC");
    let c = commutator(&w("A"), &w("B"));
    assert_eq!(c.to_string(), "ABab");
    assert_eq!(c.len(), 4);
    assert!("AxB".parse::<SurfaceWord>().is_err());
}

#[test]
fn conjugation_examples() {
    let a = w("A");
    assert_eq!(a.conjugate(&SurfaceWord::identity()), a);
    assert_eq!(a.conjugate(&w("B")).to_string(), "bAB");
}

#[test]
fn abelianization_examples() {
    assert_eq!(commutator(&w("A"), &w("B")).abelianize(), [0, 0, 0, 0]);
    assert_eq!(w("BC").abelianize(), [0, 1, 1, 0]);
    assert_eq!(w("CA").abelianize(), [1, 0, 1, 0]);
}

#[test]
fn hall_witt_examples() {
    let e = SurfaceWord::identity();
    assert!(hall_witt_check(&e, &e, &e));
    assert!(hall_witt_check(&w("A"), &w("B"), &w("C")));
}

#[test]
fn four_curve_relation_and_its_steps() {
    assert!(lemma34_identity());
    assert!(lemma34_expansion_step());
    assert!(lemma34_absorption_step());
    let (lhs, rhs) = lemma34_sides();
    assert_eq!(lhs, rhs);
    assert_eq!(lhs.to_string(), "ABCacb");
}

#[test]
fn dehn_examples() {
    assert!(dehn_is_trivial(&SurfaceWord::relator()));
    assert!(dehn_is_trivial(&SurfaceWord::relator().inverse()));
    assert!(!dehn_is_trivial(&w("A")));
    assert!(dehn_is_trivial(&SurfaceWord::identity()));
    // [a₂,b₂] = [a₁,b₁]⁻¹ in the surface group.
    let lhs = commutator(&w("C"), &w("D"));
    let rhs = commutator(&w("A"), &w("B")).inverse();
    assert!(dehn_is_trivial(&lhs.mul(&rhs.inverse())));
    assert!(!dehn_is_trivial(&commutator(&w("A"), &w("C"))));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let g = SurfaceWord::random(&mut rng, 10);
        assert!(dehn_is_trivial(&SurfaceWord::relator().conjugate(&g.inverse())), "g = {g}");
    }
}

#[test]
fn dehn_matches_free_triviality_on_short_words() {
    let letters: Vec<Letter> = (0..4).flat_map(|i| [false, true].map(|inv| Letter::new(i, inv).unwrap())).collect();
    let mut words: Vec<Vec<Letter>> = vec![vec![]];
    for _ in 0..3 {
        let next: Vec<Vec<Letter>> =
            words.iter().flat_map(|p| letters.iter().map(move |&l| [p.clone(), vec![l]].concat())).collect();
        for raw in &next {
            let reduced = free_reduce(raw);
            assert_eq!(dehn_is_trivial(&reduced), reduced.is_empty());
        }
        words = next;
    }
}

#[test]
fn table_examples() {
    let e = SurfaceWord::identity();
    let s3 = splitting_from_scc(&e, &w("A"), &w("B")).unwrap();
    let expected3 = HomologySplitting::new([[1, 0, 0, 0], [0, 1, 0, 0]], [[0, 0, 1, 0], [0, 0, 0, 1]]);
    assert!(splittings_equal(&s3, &expected3));
    let s1 = splitting_from_scc(&e, &w("A"), &w("BC")).unwrap();
    let expected1 = HomologySplitting::new([[1, 0, 0, 0], [0, 1, 1, 0]], [[0, 0, 1, 0], [1, 0, 0, 1]]);
    assert!(splittings_equal(&s1, &expected1));
    let s2 = splitting_from_scc(&w("bab"), &w("b"), &w("CA")).unwrap();
    let expected2 = HomologySplitting::new([[0, -1, 0, 0], [1, 0, 1, 0]], [[0, 0, 1, 0], [0, -1, 0, 1]]);
    assert!(splittings_equal(&s2, &expected2));
    assert!(splittings_equal(&s1, &s1));
    assert!(splittings_equal(&s1, &s1.swapped()));
    assert!(!splittings_equal(&s1, &s2));
}

#[test]
fn figure2_reproduces() {
    let report = figure2_verify().unwrap();
    assert_eq!(report.rows.len(), 4);
    assert!(report.pairwise_distinct && report.relation_holds);
    for r in &report.rows {
        assert!(r.matches && r.null_homologous && r.invariants_hold);
        r.computed.check_invariants().unwrap();
    }
}

#[test]
fn splitting_errors() {
    let e = SurfaceWord::identity();
    assert!(matches!(splitting_from_scc(&e, &w("A"), &w("AA")), Err(Error::DegenerateInput(_))));
    assert!(matches!(splitting_from_scc(&e, &w("A"), &w("C")), Err(Error::NotSplitting(_))));
    // Saturation repairs a non-primitive span.
    let doubled = splitting_from_scc(&e, &w("AA"), &w("B")).unwrap();
    assert_eq!(doubled, splitting_from_scc(&e, &w("A"), &w("B")).unwrap());
}

#[test]
fn bad_splittings_fail_invariants() {
    let not_orthogonal = HomologySplitting::new([[1, 0, 0, 0], [0, 1, 0, 0]], [[0, 0, 1, 0], [1, 0, 0, 1]]);
    assert!(not_orthogonal.check_invariants().is_err());
    let not_saturated = HomologySplitting::new([[2, 0, 0, 0], [0, 1, 0, 0]], [[0, 0, 1, 0], [0, 0, 0, 1]]);
    assert!(not_saturated.check_invariants().is_err());
}

#[test]
fn complement_is_an_involution_on_table_splittings() {
    for r in figure2_rows() {
        let s = splitting_from_scc(&r.conjugator(), &r.u, &r.v).unwrap();
        let plus: Vec<Vec<i64>> = s.v_plus.iter().map(|x| x.to_vec()).collect();
        let minus: Vec<Vec<i64>> = s.v_minus.iter().map(|x| x.to_vec()).collect();
        assert_eq!(symplectic_complement(&minus), crate::lattice::hermite_normal_form(&plus));
        assert_eq!(symplectic_complement(&plus), crate::lattice::hermite_normal_form(&minus));
    }
}

#[test]
fn serde_round_trip() {
    let x = w("ABabCDcd");
    let json = serde_json::to_string(&x).unwrap();
    assert_eq!(json, "\"ABabCDcd\"");
    assert_eq!(serde_json::from_str::<SurfaceWord>(&json).unwrap(), x);
    assert!(serde_json::from_str::<SurfaceWord>("\"Q\"").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, rng_algorithm: prop::test_runner::RngAlgorithm::ChaCha, ..ProptestConfig::default() })]

    #[test]
    fn hall_witt_holds(x in arb_word(8), y in arb_word(8), z in arb_word(8)) {
        prop_assert!(hall_witt_check(&x, &y, &z));
    }

    #[test]
    fn abelianization_is_conjugation_invariant(x in arb_word(12), g in arb_word(12)) {
        prop_assert_eq!(x.conjugate(&g).abelianize(), x.abelianize());
    }

    #[test]
    fn free_reduction_is_idempotent(x in arb_word(16)) {
        prop_assert_eq!(free_reduce(x.letters()), x.clone());
        prop_assert!(x.mul(&x.inverse()).is_empty());
    }

    #[test]
    fn dehn_triviality_implies_null_homologous(x in arb_word(16)) {
        if dehn_is_trivial(&x) {
            prop_assert_eq!(x.abelianize(), [0; 4]);
        }
    }

    #[test]
    fn products_of_relator_conjugates_are_trivial(g in arb_word(6), h in arb_word(6)) {
        let r = SurfaceWord::relator();
        let x = r.conjugate(&g).mul(&r.inverse().conjugate(&h));
        prop_assert!(dehn_is_trivial(&x));
    }

    #[test]
    fn splitting_ignores_the_conjugator(c in arb_word(10), row in 0usize..4) {
        let r = &figure2_rows()[row];
        let plain = splitting_from_scc(&SurfaceWord::identity(), &r.u, &r.v).unwrap();
        let conj = splitting_from_scc(&c, &r.u, &r.v).unwrap();
        prop_assert_eq!(plain, conj);
    }
}
