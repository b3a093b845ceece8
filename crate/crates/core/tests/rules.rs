mod common;

use leamr_core::rules::{identify_primary_edges, prealign_relations, prealign_subgraphs};
use leamr_core::{rules_only, NodeId, Provenance};
use std::collections::BTreeSet;

fn span_of(inst: &leamr_core::Instance, text: &str) -> usize {
    (0..inst.span_count())
        .find(|&s| inst.span_text(s) == text)
        .unwrap_or_else(|| panic!("no span {text}"))
}

#[test]
fn fig2_rule_alignments() {
    let inst = common::instance(common::corpus(), "fig2");
    let amr = &inst.amr;
    let state = rules_only(inst);
    let ny = span_of(inst, "New York");
    let unit: BTreeSet<NodeId> = amr
        .node_ids()
        .filter(|&n| ["c", "n"].contains(&amr.node(n).name.as_str()) || amr.node(n).is_constant())
        .collect();
    let at_ny = state.subgraphs_at(ny);
    assert_eq!(at_ny.len(), 1);
    assert_eq!(at_ny[0].nodes, unit);
    assert!(at_ny[0].closed && at_ny[0].provenance.is_rule());
    for (name, word) in [("w", "want"), ("v", "visit"), ("g", "graduate"), ("m", "Most")] {
        assert_eq!(
            state.node_span(amr.find(name).unwrap()),
            Some(span_of(inst, word)),
            "{name}"
        );
    }
    // lemma "student" does not match concept "person", so statistics must decide
    let students = span_of(inst, "students");
    assert!(!state.span_is_aligned(students));
    assert!(!state.is_aligned(amr.find("p").unwrap()));
}

#[test]
fn rule_passes_are_idempotent() {
    for inst in common::corpus() {
        let mut state = prealign_subgraphs(inst);
        assert_eq!(state, prealign_subgraphs(inst), "{}", inst.id());
        prealign_relations(&mut state, inst);
        let once = state.clone();
        prealign_relations(&mut state, inst);
        assert_eq!(state, once, "{}", inst.id());
        identify_primary_edges(&mut state, inst);
        let once = state.clone();
        identify_primary_edges(&mut state, inst);
        assert_eq!(state, once, "{}", inst.id());
    }
}

#[test]
fn every_rule_alignment_names_its_rule() {
    for inst in common::corpus() {
        let state = rules_only(inst);
        for span in 0..state.span_count() {
            for g in state.subgraphs_at(span) {
                assert!(
                    matches!(g.provenance, Provenance::Rule(name) if !name.is_empty()),
                    "{}",
                    inst.id()
                );
            }
            for &e in state.relations_at(span) {
                assert!(
                    state.relation_provenance(e).is_some_and(Provenance::is_rule),
                    "{}",
                    inst.id()
                );
            }
        }
        common::check_invariants(inst, &state, false).unwrap_or_else(|m| panic!("{}: {m}", inst.id()));
    }
}

#[test]
fn rule_coverage_on_fixture() {
    let corpus = common::corpus();
    let (mut nodes, mut edges, mut total_nodes, mut total_edges) = (0, 0, 0, 0);
    for inst in corpus {
        let (n, e) = common::covered(inst, &rules_only(inst));
        nodes += n;
        edges += e;
        total_nodes += inst.amr.node_count();
        total_edges += inst.amr.edge_count();
    }
    let node_pct = 100.0 * nodes as f64 / total_nodes as f64;
    let edge_pct = 100.0 * edges as f64 / total_edges as f64;
    eprintln!(
        "rule coverage on {}: nodes {node_pct:.1}%, edges {edge_pct:.1}%",
        common::corpus_label()
    );
    assert!(node_pct >= 70.0, "{node_pct}");
}
