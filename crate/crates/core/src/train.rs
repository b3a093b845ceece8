//! Phase-by-phase hard EM.

use std::collections::BTreeMap;

use log::{info, warn};
use rayon::prelude::*;

use crate::alignment::ReentrancyType;
use crate::corpus::Instance;
use crate::decode::{align_reentrancies, align_relations, align_subgraphs};
use crate::error::{Error, Result};
use crate::model::{
    reentrancy_key, relation_label, subgraph_label, AlignTable, CooccurrenceStats, Hyperparams, ModelParams, Phase,
    Scorer, Skellam,
};
use crate::rules::{identify_primary_edges, prealign_relations, prealign_subgraphs};
use crate::state::AlignmentState;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub hyperparams: Hyperparams,
    pub max_iterations: usize,
    /// Phases whose parameters are re-estimated; the others keep defaults.
    pub phases: Vec<Phase>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            hyperparams: Hyperparams::default(),
            max_iterations: 10,
            phases: Phase::ALL.to_vec(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        self.hyperparams.validate().map_err(Error::Config)?;
        if self.max_iterations == 0 {
            return Err(Error::Config("max iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-iteration diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationLog {
    pub phase: Phase,
    pub iteration: usize,
    /// Sentences whose alignments differ from the previous iteration.
    pub changed: usize,
    /// Corpus sum of the phase's layer score under the decoding parameters.
    pub log_score: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub params: ModelParams,
    pub log: Vec<IterationLog>,
    /// Final training-set alignments.
    pub states: Vec<AlignmentState>,
}

type Counts = BTreeMap<String, BTreeMap<String, u64>>;

/// Smoothed relative frequencies: (c + a) / (c(s) + a (K_s + 1)).
pub fn estimate_table(counts: &Counts, alpha: f64) -> AlignTable {
    counts
        .iter()
        .map(|(lemma, row)| {
            let total: u64 = row.values().sum();
            let denom = total as f64 + alpha * (row.len() as f64 + 1.0);
            let probs = row
                .iter()
                .map(|(label, &c)| (label.clone(), (c as f64 + alpha) / denom))
                .collect();
            (lemma.clone(), probs)
        })
        .collect()
}

/// Like [`estimate_table`], but occurrences of a lemma left unaligned also
/// count towards its denominator, so each row keeps mass for the null outcome.
pub fn estimate_table_with_null(counts: &Counts, unaligned: &BTreeMap<String, u64>, alpha: f64) -> AlignTable {
    counts
        .iter()
        .map(|(lemma, row)| {
            let total: u64 = row.values().sum::<u64>() + unaligned.get(lemma).copied().unwrap_or(0);
            let denom = total as f64 + alpha * (row.len() as f64 + 1.0);
            let probs = row
                .iter()
                .map(|(label, &c)| (label.clone(), (c as f64 + alpha) / denom))
                .collect();
            (lemma.clone(), probs)
        })
        .collect()
}

fn bump(counts: &mut Counts, lemma: &str, label: String) {
    *counts.entry(lemma.to_string()).or_default().entry(label).or_insert(0) += 1;
}

fn m_step_subgraph(corpus: &[Instance], states: &[AlignmentState], params: &mut ModelParams) {
    let mut counts = Counts::new();
    let mut unaligned: BTreeMap<String, u64> = BTreeMap::new();
    let mut dists = Vec::new();
    for (inst, state) in corpus.iter().zip(states) {
        let amr = &inst.amr;
        for span in 0..state.span_count() {
            if !state.span_is_aligned(span) {
                *unaligned.entry(inst.lemmas[span].clone()).or_insert(0) += 1;
            }
            for g in state.subgraphs_at(span).iter().filter(|g| !g.nodes.is_empty()) {
                bump(&mut counts, &inst.lemmas[span], subgraph_label(amr, &g.nodes));
                dists.extend(
                    amr.neighbors(&g.nodes)
                        .into_iter()
                        .filter_map(|n| state.node_span(n))
                        .map(|s| s as i64 - span as i64),
                );
            }
        }
    }
    params.tables.subgraph = estimate_table_with_null(&counts, &unaligned, params.hyperparams.smoothing);
    params.skellam.subgraph = Skellam::estimate(&dists);
}

fn m_step_relation(corpus: &[Instance], states: &[AlignmentState], params: &mut ModelParams) {
    let mut counts = Counts::new();
    let (mut parents, mut children) = (Vec::new(), Vec::new());
    for (inst, state) in corpus.iter().zip(states) {
        let amr = &inst.amr;
        for span in 0..state.span_count() {
            let edges = state.relations_at(span);
            if edges.is_empty() {
                continue;
            }
            let label = relation_label(amr, state, span, edges);
            bump(&mut counts, &inst.lemmas[span], label);
            for &e in edges {
                let edge = amr.edge(e);
                parents.extend(state.node_span(edge.parent).map(|s| s as i64 - span as i64));
                children.extend(state.node_span(edge.child).map(|s| s as i64 - span as i64));
            }
        }
    }
    params.tables.relation = estimate_table(&counts, params.hyperparams.smoothing);
    params.skellam.relation_parent = Skellam::estimate(&parents);
    params.skellam.relation_child = Skellam::estimate(&children);
}

fn m_step_reentrancy(corpus: &[Instance], states: &[AlignmentState], params: &mut ModelParams) {
    let mut counts = Counts::new();
    let (mut parents, mut children) = (Vec::new(), Vec::new());
    for (inst, state) in corpus.iter().zip(states) {
        let amr = &inst.amr;
        for (&e, &(span, kind)) in state.reentrancies() {
            if kind == ReentrancyType::Primary {
                continue;
            }
            let edge = amr.edge(e);
            bump(
                &mut counts,
                &inst.lemmas[span],
                reentrancy_key(edge.role.as_str(), kind),
            );
            parents.extend(state.node_span(edge.parent).map(|s| s as i64 - span as i64));
            children.extend(state.node_span(edge.child).map(|s| s as i64 - span as i64));
        }
    }
    params.tables.reentrancy = estimate_table(&counts, params.hyperparams.smoothing);
    params.skellam.reentrancy_parent = Skellam::estimate(&parents);
    params.skellam.reentrancy_child = Skellam::estimate(&children);
}

fn decode_phase(
    phase: Phase,
    corpus: &[Instance],
    base: &[AlignmentState],
    params: &ModelParams,
) -> (Vec<AlignmentState>, f64) {
    let results: Vec<(AlignmentState, f64)> = corpus
        .par_iter()
        .zip(base.par_iter())
        .map(|(inst, start)| {
            let scorer = Scorer::new(inst, params);
            let mut state = start.clone();
            let score = match phase {
                Phase::Subgraph => {
                    align_subgraphs(&scorer, &mut state);
                    scorer.subgraph_layer_score(&state)
                }
                Phase::Relation => {
                    align_relations(&scorer, &mut state);
                    scorer.relation_layer_score(&state)
                }
                Phase::Reentrancy => align_reentrancies(&scorer, &mut state).iter().map(|s| s.score).sum(),
            };
            (state, score)
        })
        .collect();
    let total = results.iter().map(|(_, s)| s).sum();
    (results.into_iter().map(|(s, _)| s).collect(), total)
}

fn m_step(phase: Phase, corpus: &[Instance], states: &[AlignmentState], params: &mut ModelParams) {
    match phase {
        Phase::Subgraph => m_step_subgraph(corpus, states, params),
        Phase::Relation => m_step_relation(corpus, states, params),
        Phase::Reentrancy => m_step_reentrancy(corpus, states, params),
    }
}

/// Trains every configured phase in order, starting from rule alignments.
pub fn train(corpus: &[Instance], config: &TrainConfig) -> Result<TrainOutcome> {
    config.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let stats = CooccurrenceStats::collect(corpus);
    let mut params = ModelParams::new(config.hyperparams.clone(), stats);
    let mut log = Vec::new();
    let mut base: Vec<AlignmentState> = corpus.par_iter().map(prealign_subgraphs).collect();
    let mut states = Vec::new();
    for phase in Phase::ALL {
        if phase == Phase::Relation {
            for (inst, state) in corpus.iter().zip(base.iter_mut()) {
                prealign_relations(state, inst);
            }
        } else if phase == Phase::Reentrancy {
            for (inst, state) in corpus.iter().zip(base.iter_mut()) {
                identify_primary_edges(state, inst);
            }
        }
        let trained = config.phases.contains(&phase);
        let rounds = if trained { config.max_iterations } else { 1 };
        let mut previous: Option<Vec<AlignmentState>> = None;
        for iteration in 1..=rounds {
            let (decoded, log_score) = decode_phase(phase, corpus, &base, &params);
            let changed = previous.as_ref().map_or(decoded.len(), |prev| {
                prev.iter().zip(&decoded).filter(|(a, b)| a != b).count()
            });
            if trained {
                m_step(phase, corpus, &decoded, &mut params);
            }
            info!("{phase} iteration {iteration}: {changed} sentences changed, log-score {log_score:.4}");
            if let Some(last) = log.last().filter(|l: &&IterationLog| l.phase == phase) {
                if log_score < last.log_score {
                    warn!(
                        "{phase} log-score decreased from {:.4} to {log_score:.4}",
                        last.log_score
                    );
                }
            }
            log.push(IterationLog {
                phase,
                iteration,
                changed,
                log_score,
            });
            let converged = previous.is_some() && changed == 0;
            previous = Some(decoded);
            if converged {
                break;
            }
        }
        states = previous.expect("at least one iteration");
        base = states.clone();
        if trained {
            params.trained_phases.push(phase);
        }
    }
    Ok(TrainOutcome { params, log, states })
}
