mod common;

use leamr_core::eval::{coverage, credit, exact_match_prf, jaccard, partial_match_prf, span_f1, Item, Layer, Prf};
use leamr_core::{align_instance, AlignmentSet, Span};
use proptest::prelude::*;
use std::collections::BTreeSet;

const LAYERS: [(Layer, &str); 5] = [
    (Layer::Subgraphs, "subgraphs"),
    (Layer::Duplicates, "duplicates"),
    (Layer::Relations, "relations"),
    (Layer::Reentrancies, "reentrancies"),
    (Layer::ReentranciesUnlabeled, "unlabeled"),
];

fn close(a: Prf, b: (f64, f64, f64)) -> bool {
    (a.precision - b.0).abs() <= 1e-12 && (a.recall - b.1).abs() <= 1e-12 && (a.f1 - b.2).abs() <= 1e-12
}

#[test]
fn partial_credit_example() {
    let gold = Item {
        tokens: BTreeSet::from([3]),
        parts: ["a", "b"].map(String::from).into(),
        kind: None,
    };
    let pred = Item {
        parts: ["a"].map(String::from).into(),
        ..gold.clone()
    };
    assert_eq!(credit(&gold, &pred), 0.5);
    assert_eq!(credit(&gold, &gold), 1.0);
    assert_eq!(jaccard::<u8>(&BTreeSet::new(), &BTreeSet::new()), 1.0);
}

#[test]
fn identical_sets_score_100_in_every_layer() {
    let corpus = common::corpus();
    let params = &common::trained().params;
    let sets: Vec<AlignmentSet> = corpus
        .iter()
        .map(|i| align_instance(i, params).to_alignment_set(i))
        .collect();
    for (layer, _) in LAYERS {
        for prf in [
            exact_match_prf(&sets, &sets, layer).unwrap(),
            partial_match_prf(&sets, &sets, layer).unwrap(),
        ] {
            assert_eq!((prf.precision, prf.recall, prf.f1), (100.0, 100.0, 100.0), "{layer:?}");
        }
    }
    assert_eq!(span_f1(&sets, &sets).unwrap(), 100.0);
}

#[test]
fn empty_prediction_scores_zero() {
    let (gold, _) = common::random_corpus(7, 20);
    let pred: Vec<AlignmentSet> = gold
        .iter()
        .map(|g| AlignmentSet::empty(g.id.clone(), g.spans.clone()))
        .collect();
    let prf = exact_match_prf(&gold, &pred, Layer::Subgraphs).unwrap();
    assert_eq!((prf.precision, prf.recall, prf.f1), (0.0, 0.0, 0.0));
}

#[test]
fn id_mismatch_is_an_error() {
    let (gold, mut pred) = common::random_corpus(3, 4);
    pred[1].id = "other".into();
    assert!(exact_match_prf(&gold, &pred, Layer::Subgraphs).is_err());
    assert!(partial_match_prf(&gold, &pred, Layer::Relations).is_err());
}

#[test]
fn dropping_one_relation_costs_one_gold_item() {
    let corpus = common::corpus();
    let inst = common::instance(corpus, "fig2");
    let gold = align_instance(inst, &common::trained().params).to_alignment_set(inst);
    let k = gold.relations.len();
    assert!(k > 1);
    let mut pred = gold.clone();
    let when = pred
        .relations
        .iter()
        .position(|r| r.edges.iter().any(|e| e.1 == ":time"))
        .expect(":time relation");
    pred.relations.remove(when);
    let prf = exact_match_prf(&[gold], &[pred], Layer::Relations).unwrap();
    assert!((prf.recall - 100.0 * (k - 1) as f64 / k as f64).abs() < 1e-12);
    assert_eq!(prf.precision, 100.0);
}

#[test]
fn metric_oracle_on_random_sets() {
    let (gold, pred) = common::random_corpus(2024, 1000);
    for (layer, name) in LAYERS {
        let partial = partial_match_prf(&gold, &pred, layer).unwrap();
        let exact = exact_match_prf(&gold, &pred, layer).unwrap();
        assert!(
            close(partial, common::naive_prf(&gold, &pred, name, true)),
            "{name} partial"
        );
        assert!(
            close(exact, common::naive_prf(&gold, &pred, name, false)),
            "{name} exact"
        );
    }
}

#[test]
fn shuffled_pairs_score_below_identical() {
    let corpus = common::corpus();
    let params = &common::trained().params;
    let sets: Vec<AlignmentSet> = corpus
        .iter()
        .map(|i| align_instance(i, params).to_alignment_set(i))
        .collect();
    let mut shuffled = sets.clone();
    let n = shuffled.len();
    for k in 0..n {
        shuffled[k].spans = sets[(k + 1) % n].spans.clone();
    }
    assert!(span_f1(&sets, &shuffled).unwrap() < span_f1(&sets, &sets).unwrap());
}

#[test]
fn split_entity_counts_against_both_sides() {
    let gold = AlignmentSet::empty("x", vec![Span::new(0, 1), Span::new(1, 3)]);
    let pred = AlignmentSet::empty("x", vec![Span::new(0, 1), Span::new(1, 2), Span::new(2, 3)]);
    let f = span_f1(&[gold], &[pred]).unwrap();
    let p = 100.0 / 3.0;
    let r = 50.0;
    assert!((f - 2.0 * p * r / (p + r)).abs() < 1e-9);
}

#[test]
fn coverage_of_pipeline_and_empty_sets() {
    let corpus = common::corpus();
    let params = &common::trained().params;
    for inst in corpus {
        let set = align_instance(inst, params).to_alignment_set(inst);
        assert_eq!(coverage(&set, &inst.amr, Layer::Subgraphs), 100.0, "{}", inst.id());
        assert_eq!(coverage(&set, &inst.amr, Layer::Relations), 100.0, "{}", inst.id());
        let empty = AlignmentSet::empty(inst.id(), inst.spans.clone());
        assert_eq!(coverage(&empty, &inst.amr, Layer::Subgraphs), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn partial_dominates_exact_and_swapping_flips(seed in any::<u64>()) {
        let (gold, pred) = common::random_corpus(seed, 5);
        for (layer, _) in LAYERS {
            let exact = exact_match_prf(&gold, &pred, layer).unwrap();
            let partial = partial_match_prf(&gold, &pred, layer).unwrap();
            prop_assert!(partial.f1 + 1e-9 >= exact.f1);
            prop_assert!(partial.precision + 1e-9 >= exact.precision);
            prop_assert!(partial.recall + 1e-9 >= exact.recall);
            for prf in [exact, partial] {
                prop_assert!((0.0..=100.0).contains(&prf.precision));
                prop_assert!((0.0..=100.0).contains(&prf.recall));
                prop_assert!((0.0..=100.0).contains(&prf.f1));
            }
            let swapped = partial_match_prf(&pred, &gold, layer).unwrap();
            prop_assert!((swapped.precision - partial.recall).abs() < 1e-9);
            prop_assert!((swapped.recall - partial.precision).abs() < 1e-9);
            let swapped = exact_match_prf(&pred, &gold, layer).unwrap();
            prop_assert!((swapped.precision - exact.recall).abs() < 1e-9);
        }
    }

    #[test]
    fn credits_lie_in_unit_interval(seed in any::<u64>()) {
        let (gold, pred) = common::random_corpus(seed, 1);
        for (layer, _) in LAYERS {
            let gi = leamr_core::eval::layer_items(&gold[0], layer);
            let pi = leamr_core::eval::layer_items(&pred[0], layer);
            for g in &gi {
                for p in &pi {
                    let c = credit(g, p);
                    prop_assert!((0.0..=1.0).contains(&c));
                    prop_assert_eq!(c, credit(p, g));
                }
            }
        }
    }
}
