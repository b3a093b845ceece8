//! Brute-force scoring used to check the greedy decoder.

use std::collections::{BTreeMap, BTreeSet};

use leamr_core::decode::{align_subgraphs, legal_candidates_subgraph, Slot, SubgraphCandidate};
use leamr_core::model::{CooccurrenceStats, Scorer, Skellam};
use leamr_core::rules::prealign_subgraphs;
use leamr_core::{AlignmentState, Hyperparams, Instance, ModelParams, MweLexicon, NodeId, Provenance};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Global subgraph-layer score summed over every span from scratch.
pub fn global_score(scorer: &Scorer<'_>, state: &AlignmentState) -> f64 {
    let lambda_dup = scorer.params.hyperparams.lambda_dup.ln();
    let mut total = 0.0;
    for span in 0..state.span_count() {
        let subs: Vec<_> = state
            .subgraphs_at(span)
            .iter()
            .filter(|g| !g.nodes.is_empty())
            .collect();
        if subs.is_empty() {
            total += scorer.null_score(span);
            continue;
        }
        for (k, g) in subs.iter().enumerate() {
            if k > 0 {
                total += lambda_dup;
            }
            total += scorer.score_subgraph(state, span, &g.nodes);
        }
    }
    total
}

pub fn apply(state: &mut AlignmentState, cand: SubgraphCandidate) {
    let index = match cand.slot {
        Slot::Extend(i) => Some(i),
        Slot::New => None,
    };
    state.insert_node(cand.node, cand.span, index, Provenance::Statistical);
}

const WORDS: &[(&str, &str)] = &[
    ("boy", "boy"),
    ("wants", "want"),
    ("see", "see"),
    ("big", "big"),
    ("house", "house"),
    ("city", "city"),
    ("quickly", "quick"),
    ("the", "the"),
    ("blue", "blue"),
    ("ate", "eat"),
];

pub fn synthetic_pair(rng: &mut impl Rng, k: usize) -> Instance {
    let g = loop {
        let text = super::random_penman(rng, 4);
        let g = super::parse(&format!("syn{k}"), &text);
        if g.node_count() <= 4 {
            break g;
        }
    };
    let len = rng.random_range(1..=4);
    let toks: Vec<String> = (0..len)
        .map(|_| {
            let (w, l) = WORDS.choose(rng).unwrap();
            format!("{w}/{l}/NN")
        })
        .collect();
    let sent = super::sentence(&format!("syn{k}"), &toks.join(" "));
    Instance::new(g, sent, &MweLexicon::new())
}

pub fn synthetic_params(rng: &mut impl Rng, corpus: &[Instance]) -> ModelParams {
    let mut params = ModelParams::new(Hyperparams::default(), CooccurrenceStats::collect(corpus));
    for (_, lemma) in WORDS {
        let row = params.tables.subgraph.entry(lemma.to_string()).or_default();
        for concept in ["boy", "want-01", "house", "big", "city", "see-01"] {
            if rng.random_bool(0.3) {
                row.insert(concept.to_string(), rng.random_range(0.01..0.9));
            }
        }
    }
    params.skellam.subgraph = Skellam::new(rng.random_range(0.2..3.0), rng.random_range(0.2..3.0)).unwrap();
    params
}

/// Rebuilds `state` with some nodes moved to new single-node subgraphs.
pub fn reassign(inst: &Instance, state: &AlignmentState, moves: &BTreeMap<NodeId, usize>) -> AlignmentState {
    let mut out = AlignmentState::for_instance(inst);
    for span in 0..state.span_count() {
        for g in state.subgraphs_at(span) {
            let kept: BTreeSet<NodeId> = g.nodes.iter().copied().filter(|n| !moves.contains_key(n)).collect();
            if !kept.is_empty() {
                out.add_subgraph(span, kept, g.provenance, g.closed);
            }
        }
    }
    for (&n, &span) in moves {
        out.insert_node(n, span, None, Provenance::Statistical);
    }
    out
}

/// Replays the greedy trace on `pairs` random sentences. Each committed
/// delta must equal the change in global score and beat every alternative.
/// Returns the number of steps checked.
pub fn check_greedy_trace(pairs: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let corpus: Vec<Instance> = (0..pairs).map(|k| synthetic_pair(&mut rng, k)).collect();
    let params = synthetic_params(&mut rng, &corpus);
    let mut steps = 0;
    for inst in &corpus {
        let scorer = Scorer::new(inst, &params);
        let start = prealign_subgraphs(inst);
        let mut decoded = start.clone();
        let trace = align_subgraphs(&scorer, &mut decoded);
        let mut state = start;
        for step in &trace {
            let before = global_score(&scorer, &state);
            let mut best = f64::NEG_INFINITY;
            let unaligned: Vec<NodeId> = state.unaligned_nodes().collect();
            for node in unaligned {
                for cand in legal_candidates_subgraph(&scorer, &state, node) {
                    let mut trial = state.clone();
                    apply(&mut trial, cand);
                    best = best.max(global_score(&scorer, &trial) - before);
                }
            }
            apply(&mut state, step.candidate);
            let after = global_score(&scorer, &state);
            if (step.delta - (after - before)).abs() >= 1e-9 {
                return Err(format!(
                    "{}: delta {} but global change {}",
                    inst.id(),
                    step.delta,
                    after - before
                ));
            }
            if step.delta < best - 1e-9 {
                return Err(format!(
                    "{}: committed {} but {} was available",
                    inst.id(),
                    step.delta,
                    best
                ));
            }
            steps += 1;
        }
        if state != decoded || !state.all_nodes_aligned() {
            return Err(format!("{}: replay differs from decoder output", inst.id()));
        }
    }
    Ok(steps)
}

/// Two nodes for a word occurring twice: the decoder and brute force over
/// all four placements must both put each node on its own token, in order.
pub fn check_repeated_word(inst: &Instance, params: &ModelParams, lemma: &str, names: [&str; 2]) -> Result<(), String> {
    let scorer = Scorer::new(inst, params);
    let mut decoded = prealign_subgraphs(inst);
    let [v, v2] = names.map(|n| inst.amr.find(n).unwrap());
    if decoded.is_aligned(v) || decoded.is_aligned(v2) {
        return Err("rules already aligned the repeated word".into());
    }
    align_subgraphs(&scorer, &mut decoded);
    let tokens: Vec<usize> = (0..inst.span_count()).filter(|&s| inst.lemmas[s] == lemma).collect();
    let [first, second] = tokens[..] else {
        return Err(format!("expected two `{lemma}` spans"));
    };
    let mut best = None;
    for a in [first, second] {
        for b in [first, second] {
            let trial = reassign(inst, &decoded, &BTreeMap::from([(v, a), (v2, b)]));
            let score = global_score(&scorer, &trial);
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, (a, b)));
            }
        }
    }
    let (_, brute) = best.unwrap();
    let greedy = (decoded.node_span(v), decoded.node_span(v2));
    if brute != (first, second) {
        return Err(format!("brute force chose {brute:?}"));
    }
    if greedy != (Some(first), Some(second)) {
        return Err(format!("decoder chose {greedy:?}"));
    }
    Ok(())
}
