//! Sentence-level co-occurrence counts between span lemmas and graph pieces.
//!
//! These are collected once from the training pairs, independent of any
//! alignment, and back the factorized backoff, the inductive bias and the
//! null-alignment frequency ranks.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::amr::AmrGraph;
use crate::corpus::Instance;

type Counts = BTreeMap<String, u64>;
type PairCounts = BTreeMap<String, BTreeMap<String, u64>>;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CooccurrenceStats {
    pub sentences: u64,
    /// Sentences containing each span lemma.
    pub lemma_sentences: Counts,
    /// Sentences whose graph contains each concept.
    pub concept_sentences: Counts,
    /// lemma -> concept -> sentences containing both.
    pub concept_lemma: PairCounts,
    /// lemma -> `parent role child` -> sentences containing both.
    pub triple_lemma: PairCounts,
    /// lemma -> role -> sentences containing both.
    pub role_lemma: PairCounts,
    /// Frequency rank of span lemmas by token count, 1 for the most frequent.
    pub lemma_rank: BTreeMap<String, u32>,
}

pub fn triple_key(parent: &str, role: &str, child: &str) -> String {
    format!("{parent} {role} {child}")
}

fn graph_pieces(amr: &AmrGraph) -> (BTreeSet<String>, BTreeSet<String>, BTreeSet<String>) {
    let concepts = amr.nodes().iter().map(|n| n.label().to_string()).collect();
    let triples = amr
        .edges()
        .iter()
        .map(|e| triple_key(amr.label(e.parent), e.role.as_str(), amr.label(e.child)))
        .collect();
    let roles = amr.edges().iter().map(|e| e.role.base().to_string()).collect();
    (concepts, triples, roles)
}

fn bump(map: &mut Counts, key: &str) {
    *map.entry(key.to_string()).or_insert(0) += 1;
}

fn bump_pair(map: &mut PairCounts, a: &str, b: &str) {
    *map.entry(a.to_string()).or_default().entry(b.to_string()).or_insert(0) += 1;
}

fn get_pair(map: &PairCounts, a: &str, b: &str) -> u64 {
    map.get(a).and_then(|m| m.get(b)).copied().unwrap_or(0)
}

impl CooccurrenceStats {
    pub fn collect(corpus: &[Instance]) -> Self {
        let mut stats = CooccurrenceStats {
            sentences: corpus.len() as u64,
            ..Default::default()
        };
        let mut token_freq: HashMap<&str, u64> = HashMap::new();
        for inst in corpus {
            for lemma in &inst.lemmas {
                *token_freq.entry(lemma).or_insert(0) += 1;
            }
            let lemmas: BTreeSet<&str> = inst.lemmas.iter().map(String::as_str).collect();
            let (concepts, triples, roles) = graph_pieces(&inst.amr);
            for c in &concepts {
                bump(&mut stats.concept_sentences, c);
            }
            for &l in &lemmas {
                bump(&mut stats.lemma_sentences, l);
                for c in &concepts {
                    bump_pair(&mut stats.concept_lemma, l, c);
                }
                for t in &triples {
                    bump_pair(&mut stats.triple_lemma, l, t);
                }
                for r in &roles {
                    bump_pair(&mut stats.role_lemma, l, r);
                }
            }
        }
        let mut ranked: Vec<(&str, u64)> = token_freq.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        stats.lemma_rank = ranked
            .into_iter()
            .enumerate()
            .map(|(i, (l, _))| (l.to_string(), i as u32 + 1))
            .collect();
        stats
    }

    pub fn lemma_count(&self, lemma: &str) -> u64 {
        self.lemma_sentences.get(lemma).copied().unwrap_or(0)
    }

    pub fn concept_count(&self, concept: &str) -> u64 {
        self.concept_sentences.get(concept).copied().unwrap_or(0)
    }

    pub fn pair_count(&self, concept: &str, lemma: &str) -> u64 {
        get_pair(&self.concept_lemma, lemma, concept)
    }

    /// p̂(concept | lemma)
    pub fn p_concept(&self, concept: &str, lemma: &str) -> f64 {
        ratio(self.pair_count(concept, lemma), self.lemma_count(lemma))
    }

    /// p̂(role, child | parent, lemma)
    pub fn p_triple(&self, parent: &str, role: &str, child: &str, lemma: &str) -> f64 {
        ratio(
            get_pair(&self.triple_lemma, lemma, &triple_key(parent, role, child)),
            self.pair_count(parent, lemma),
        )
    }

    /// p̂(role | lemma), roles compared by their forward base.
    pub fn p_role(&self, role: &str, lemma: &str) -> f64 {
        ratio(get_pair(&self.role_lemma, lemma, role), self.lemma_count(lemma))
    }

    /// Add-one smoothed PMI; 0 for pairs never seen together.
    pub fn pmi(&self, concept: &str, lemma: &str) -> f64 {
        let joint = self.pair_count(concept, lemma);
        if joint == 0 {
            return 0.0;
        }
        let n = self.sentences as f64 + 1.0;
        ((joint as f64 + 1.0) * n
            / ((self.concept_count(concept) as f64 + 1.0) * (self.lemma_count(lemma) as f64 + 1.0)))
            .ln()
    }

    /// Rank by training token frequency; unseen lemmas rank after all seen ones.
    pub fn rank(&self, lemma: &str) -> u32 {
        self.lemma_rank
            .get(lemma)
            .copied()
            .unwrap_or(self.lemma_rank.len() as u32 + 1)
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}
