//! Scoring predicted alignments against gold alignments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::alignment::{AlignmentSet, EdgeTriple, ReentrancyType};
use crate::amr::AmrGraph;
use crate::error::{Error, Result};
use crate::sentence::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layer {
    Subgraphs,
    Duplicates,
    Relations,
    Reentrancies,
    ReentranciesUnlabeled,
}

impl Layer {
    pub const ALL: [Layer; 5] = [
        Layer::Subgraphs,
        Layer::Duplicates,
        Layer::Relations,
        Layer::Reentrancies,
        Layer::ReentranciesUnlabeled,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Layer::Subgraphs => "subgraphs",
            Layer::Duplicates => "duplicates",
            Layer::Relations => "relations",
            Layer::Reentrancies => "reentrancies (labeled)",
            Layer::ReentranciesUnlabeled => "reentrancies (unlabeled)",
        }
    }
}

impl FromStr for Layer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "subgraphs" | "subgraph" => Ok(Layer::Subgraphs),
            "duplicates" | "duplicate" => Ok(Layer::Duplicates),
            "relations" | "relation" => Ok(Layer::Relations),
            "reentrancies" | "reentrancy" | "reentrancies-labeled" => Ok(Layer::Reentrancies),
            "reentrancies-unlabeled" => Ok(Layer::ReentranciesUnlabeled),
            other => Err(format!("unknown layer `{other}`")),
        }
    }
}

/// One alignment flattened to sets: tokens, components and an optional type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Item {
    pub tokens: BTreeSet<usize>,
    pub parts: BTreeSet<String>,
    pub kind: Option<ReentrancyType>,
}

fn tokens_of(spans: &[Span], span: usize) -> BTreeSet<usize> {
    spans.get(span).map(|s| s.tokens().collect()).unwrap_or_default()
}

fn edge_key(e: &EdgeTriple) -> String {
    e.to_string()
}

/// Restricts relation items to a subtype.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    /// The span also carries a subgraph.
    ArgumentStructure,
    SingleRelation,
}

pub fn layer_items(set: &AlignmentSet, layer: Layer) -> Vec<Item> {
    let spans = &set.spans;
    match layer {
        Layer::Subgraphs | Layer::Duplicates => {
            let entries = if layer == Layer::Subgraphs {
                &set.subgraphs
            } else {
                &set.duplicates
            };
            entries
                .iter()
                .map(|e| Item {
                    tokens: tokens_of(spans, e.span),
                    parts: e.nodes.iter().cloned().collect(),
                    kind: None,
                })
                .collect()
        }
        Layer::Relations => set
            .relations
            .iter()
            .map(|r| Item {
                tokens: tokens_of(spans, r.span),
                parts: r.edges.iter().map(edge_key).collect(),
                kind: None,
            })
            .collect(),
        Layer::Reentrancies | Layer::ReentranciesUnlabeled => set
            .reentrancies
            .iter()
            .map(|r| Item {
                tokens: tokens_of(spans, r.span),
                parts: BTreeSet::from([edge_key(&r.edge)]),
                kind: (layer == Layer::Reentrancies).then_some(r.kind),
            })
            .collect(),
    }
}

pub fn relation_items(set: &AlignmentSet, kind: RelationKind) -> Vec<Item> {
    let with_subgraph: BTreeSet<usize> = set.subgraphs.iter().chain(&set.duplicates).map(|e| e.span).collect();
    set.relations
        .iter()
        .filter(|r| (kind == RelationKind::ArgumentStructure) == with_subgraph.contains(&r.span))
        .map(|r| Item {
            tokens: tokens_of(&set.spans, r.span),
            parts: r.edges.iter().map(edge_key).collect(),
            kind: None,
        })
        .collect()
}

fn reentrancy_items_of_type(set: &AlignmentSet, kind: ReentrancyType) -> Vec<Item> {
    layer_items(set, Layer::Reentrancies)
        .into_iter()
        .filter(|i| i.kind == Some(kind))
        .collect()
}

pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

/// Partial credit between two items; zero when types disagree.
pub fn credit(a: &Item, b: &Item) -> f64 {
    if a.kind != b.kind {
        return 0.0;
    }
    jaccard(&a.parts, &b.parts) * jaccard(&a.tokens, &b.tokens)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    /// From summed credits, as percentages. Two empty sides agree fully;
    /// one empty side scores zero.
    pub fn from_credits(pred_credit: f64, pred_total: usize, gold_credit: f64, gold_total: usize) -> Self {
        let both_empty = pred_total == 0 && gold_total == 0;
        let ratio = |credit: f64, total: usize| match total {
            0 if both_empty => 100.0,
            0 => 0.0,
            n => 100.0 * credit / n as f64,
        };
        let p = ratio(pred_credit, pred_total);
        let r = ratio(gold_credit, gold_total);
        let f1 = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
        Prf {
            precision: p,
            recall: r,
            f1,
        }
    }
}

/// Gold and predicted items for one sentence.
pub type ItemPair = (Vec<Item>, Vec<Item>);

fn best_credit(item: &Item, others: &[Item]) -> f64 {
    others.iter().map(|o| credit(item, o)).fold(0.0, f64::max)
}

pub fn exact_prf(pairs: &[ItemPair]) -> Prf {
    let (mut gc, mut gt, mut pc, mut pt) = (0usize, 0, 0usize, 0);
    for (gold, pred) in pairs {
        gt += gold.len();
        pt += pred.len();
        gc += gold.iter().filter(|g| pred.contains(g)).count();
        pc += pred.iter().filter(|p| gold.contains(p)).count();
    }
    Prf::from_credits(pc as f64, pt, gc as f64, gt)
}

pub fn partial_prf(pairs: &[ItemPair]) -> Prf {
    let (mut gc, mut gt, mut pc, mut pt) = (0.0, 0, 0.0, 0);
    for (gold, pred) in pairs {
        gt += gold.len();
        pt += pred.len();
        gc += gold.iter().map(|g| best_credit(g, pred)).sum::<f64>();
        pc += pred.iter().map(|p| best_credit(p, gold)).sum::<f64>();
    }
    Prf::from_credits(pc, pt, gc, gt)
}

/// Ids present in only one of the two files, gold-only first.
pub fn mismatched_ids(gold: &[AlignmentSet], pred: &[AlignmentSet]) -> Vec<String> {
    let pred_ids: BTreeSet<&str> = pred.iter().map(|p| p.id.as_str()).collect();
    let gold_ids: BTreeSet<&str> = gold.iter().map(|g| g.id.as_str()).collect();
    let mut out: Vec<String> = gold_ids.difference(&pred_ids).map(|s| s.to_string()).collect();
    out.extend(pred_ids.difference(&gold_ids).map(|s| s.to_string()));
    out
}

fn pair_sets<'a>(
    gold: &'a [AlignmentSet],
    pred: &'a [AlignmentSet],
) -> Result<Vec<(&'a AlignmentSet, &'a AlignmentSet)>> {
    let mismatched = mismatched_ids(gold, pred);
    if !mismatched.is_empty() {
        return Err(Error::IdMismatch(mismatched.join(", ")));
    }
    let by_id: BTreeMap<&str, &AlignmentSet> = pred.iter().map(|p| (p.id.as_str(), p)).collect();
    Ok(gold.iter().map(|g| (g, by_id[g.id.as_str()])).collect())
}

pub fn exact_match_prf(gold: &[AlignmentSet], pred: &[AlignmentSet], layer: Layer) -> Result<Prf> {
    let pairs = pair_sets(gold, pred)?;
    Ok(exact_prf(&items_for(&pairs, |s| layer_items(s, layer))))
}

pub fn partial_match_prf(gold: &[AlignmentSet], pred: &[AlignmentSet], layer: Layer) -> Result<Prf> {
    let pairs = pair_sets(gold, pred)?;
    Ok(partial_prf(&items_for(&pairs, |s| layer_items(s, layer))))
}

fn items_for(pairs: &[(&AlignmentSet, &AlignmentSet)], f: impl Fn(&AlignmentSet) -> Vec<Item>) -> Vec<ItemPair> {
    pairs.iter().map(|(g, p)| (f(g), f(p))).collect()
}

fn span_set_f1(pairs: &[(BTreeSet<Span>, BTreeSet<Span>)]) -> f64 {
    let (mut hit, mut gt, mut pt) = (0usize, 0usize, 0usize);
    for (g, p) in pairs {
        hit += g.intersection(p).count();
        gt += g.len();
        pt += p.len();
    }
    Prf::from_credits(hit as f64, pt, hit as f64, gt).f1
}

/// F1 over exact segmentation spans, singletons included.
pub fn span_f1(gold: &[AlignmentSet], pred: &[AlignmentSet]) -> Result<f64> {
    let pairs = pair_sets(gold, pred)?;
    Ok(span_set_f1(
        &pairs
            .iter()
            .map(|(g, p)| (g.spans.iter().copied().collect(), p.spans.iter().copied().collect()))
            .collect::<Vec<_>>(),
    ))
}

fn layer_spans(set: &AlignmentSet, layer: Layer) -> BTreeSet<Span> {
    let idx: Vec<usize> = match layer {
        Layer::Subgraphs => set.subgraphs.iter().map(|e| e.span).collect(),
        Layer::Duplicates => set.duplicates.iter().map(|e| e.span).collect(),
        Layer::Relations => set.relations.iter().map(|e| e.span).collect(),
        Layer::Reentrancies | Layer::ReentranciesUnlabeled => set.reentrancies.iter().map(|e| e.span).collect(),
    };
    idx.into_iter().filter_map(|i| set.spans.get(i).copied()).collect()
}

/// Percentage of relevant graph components aligned in a layer.
pub fn coverage(pred: &AlignmentSet, amr: &AmrGraph, layer: Layer) -> f64 {
    let pct = |hit: usize, total: usize| {
        if total == 0 {
            100.0
        } else {
            100.0 * hit as f64 / total as f64
        }
    };
    match layer {
        Layer::Subgraphs | Layer::Duplicates => {
            let names: BTreeSet<&str> = amr.nodes().iter().map(|n| n.name.as_str()).collect();
            let hit: BTreeSet<&str> = pred
                .subgraphs
                .iter()
                .chain(&pred.duplicates)
                .flat_map(|e| e.nodes.iter().map(String::as_str))
                .filter(|n| names.contains(n))
                .collect();
            pct(hit.len(), names.len())
        }
        Layer::Relations => {
            let all: BTreeSet<String> = amr.edge_ids().map(|e| amr.edge_string(e)).collect();
            let hit: BTreeSet<String> = pred
                .subgraphs
                .iter()
                .chain(&pred.duplicates)
                .flat_map(|e| e.edges.iter())
                .chain(pred.relations.iter().flat_map(|r| r.edges.iter()))
                .map(edge_key)
                .filter(|k| all.contains(k))
                .collect();
            pct(hit.len(), all.len())
        }
        Layer::Reentrancies | Layer::ReentranciesUnlabeled => {
            let all: BTreeSet<String> = amr
                .reentrant_nodes()
                .into_iter()
                .flat_map(|(_, es)| es)
                .map(|e| amr.edge_string(e))
                .collect();
            let hit: BTreeSet<String> = pred
                .reentrancies
                .iter()
                .map(|r| edge_key(&r.edge))
                .filter(|k| all.contains(k))
                .collect();
            pct(hit.len(), all.len())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerReport {
    pub layer: String,
    pub exact: Prf,
    pub partial: Prf,
    pub span_f1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<f64>,
    /// Number of gold alignments (the exact-recall denominator).
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub sentences: usize,
    /// Segmentation F1 with singleton spans counted.
    pub span_f1: f64,
    pub layers: Vec<LayerReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub breakdown: Vec<LayerReport>,
}

fn report_rows(
    name: String,
    items: Vec<ItemPair>,
    spans: Vec<(BTreeSet<Span>, BTreeSet<Span>)>,
    coverage: Option<f64>,
) -> LayerReport {
    LayerReport {
        layer: name,
        exact: exact_prf(&items),
        partial: partial_prf(&items),
        span_f1: span_set_f1(&spans),
        coverage,
        n: items.iter().map(|(g, _)| g.len()).sum(),
    }
}

/// Full report. `amrs` enables coverage; `breakdown` adds per-subtype rows
/// for relations and reentrancies.
pub fn evaluate(
    gold: &[AlignmentSet],
    pred: &[AlignmentSet],
    amrs: Option<&[AmrGraph]>,
    layers: &[Layer],
    breakdown: bool,
) -> Result<EvalReport> {
    let pairs = pair_sets(gold, pred)?;
    let graphs: Option<BTreeMap<&str, &AmrGraph>> = amrs.map(|a| a.iter().map(|g| (g.id(), g)).collect());
    let mut report = EvalReport {
        sentences: pairs.len(),
        span_f1: span_f1(gold, pred)?,
        layers: Vec::new(),
        breakdown: Vec::new(),
    };
    for &layer in layers {
        let items = items_for(&pairs, |s| layer_items(s, layer));
        let spans = pairs
            .iter()
            .map(|(g, p)| (layer_spans(g, layer), layer_spans(p, layer)))
            .collect();
        let cov = graphs.as_ref().map(|gs| {
            let vals: Vec<f64> = pairs
                .iter()
                .filter_map(|(_, p)| gs.get(p.id.as_str()).map(|g| coverage(p, g, layer)))
                .collect();
            if vals.is_empty() {
                0.0
            } else {
                vals.iter().sum::<f64>() / vals.len() as f64
            }
        });
        report
            .layers
            .push(report_rows(layer.name().to_string(), items, spans, cov));
        if !breakdown {
            continue;
        }
        if layer == Layer::Relations {
            for (kind, name) in [
                (RelationKind::SingleRelation, "relations: single relations"),
                (RelationKind::ArgumentStructure, "relations: argument structures"),
            ] {
                let items = items_for(&pairs, |s| relation_items(s, kind));
                report.breakdown.push(report_rows(name.into(), items, Vec::new(), None));
            }
        }
        if layer == Layer::Reentrancies {
            for kind in ReentrancyType::ALL {
                let items = items_for(&pairs, |s| reentrancy_items_of_type(s, kind));
                report
                    .breakdown
                    .push(report_rows(format!("reentrancies: {kind}"), items, Vec::new(), None));
            }
        }
    }
    Ok(report)
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "sentences: {}   span F1 (singletons counted): {:.2}",
            self.sentences, self.span_f1
        )?;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<40} {:>7} {:>7} {:>7} | {:>7} {:>7} {:>7} | {:>7} | {:>8} | {:>6}",
            "layer", "P", "R", "F1", "P", "R", "F1", "spans", "coverage", "N"
        );
        let _ = writeln!(out, "{:<40} {:^23} | {:^23} |", "", "exact", "partial");
        for row in self.layers.iter().chain(&self.breakdown) {
            let cov = row.coverage.map_or("-".to_string(), |c| format!("{c:.1}"));
            let _ = writeln!(
                out,
                "{:<40} {:>7.2} {:>7.2} {:>7.2} | {:>7.2} {:>7.2} {:>7.2} | {:>7.2} | {:>8} | {:>6}",
                row.layer,
                row.exact.precision,
                row.exact.recall,
                row.exact.f1,
                row.partial.precision,
                row.partial.recall,
                row.partial.f1,
                row.span_f1,
                cov,
                row.n
            );
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn item(tokens: &[usize], parts: &[&str]) -> Item {
        Item {
            tokens: tokens.iter().copied().collect(),
            parts: parts.iter().map(|s| s.to_string()).collect(),
            kind: None,
        }
    }

    #[test]
    fn jaccard_credit() {
        let g = item(&[0], &["a", "b"]);
        let p = item(&[0], &["a"]);
        assert_eq!(credit(&g, &p), 0.5);
        assert_eq!(credit(&g, &g), 1.0);
    }

    #[test]
    fn empty_prediction() {
        let prf = exact_prf(&[(vec![item(&[0], &["a"])], vec![])]);
        assert_eq!(prf, Prf::default());
    }

    #[test]
    fn f1_is_harmonic_mean() {
        let prf = Prf::from_credits(1.0, 2, 1.0, 4);
        assert!((prf.f1 - 2.0 * 50.0 * 25.0 / 75.0).abs() < 1e-12);
    }
}
