//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::OnceLock;

use leamr_core::alignment::{EdgeTriple, ReentrancyEntry, RelationEntry, SubgraphEntry};
use leamr_core::amr::{read_corpus, NodeKind};
use leamr_core::corpus::join_corpus;
use leamr_core::sentence::{load_annotations, NerSpan};
use leamr_core::{
    AlignmentSet, AlignmentState, AmrGraph, AnnotatedSentence, Instance, MweLexicon, ReentrancyType, Span, TrainConfig,
    TrainOutcome,
};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod oracle;

pub const AMR_ENV: &str = "LEAMR_LPP_AMR";
pub const ANNO_ENV: &str = "LEAMR_LPP_ANNO";

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

/// Corpus files: the environment override when both variables are set,
/// otherwise the bundled fixture.
pub fn corpus_paths() -> (PathBuf, PathBuf) {
    match (std::env::var_os(AMR_ENV), std::env::var_os(ANNO_ENV)) {
        (Some(a), Some(b)) => (a.into(), b.into()),
        _ => (data_dir().join("fixture.amr"), data_dir().join("fixture.jsonl")),
    }
}

pub fn corpus_label() -> String {
    let (amr, _) = corpus_paths();
    amr.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn graphs() -> Vec<AmrGraph> {
    read_corpus(corpus_paths().0).expect("corpus AMR file parses")
}

/// Built-in multiword list plus compounds harvested from the graphs.
pub fn lexicon(graphs: &[AmrGraph]) -> MweLexicon {
    let mut lex = MweLexicon::builtin();
    lex.extend(&MweLexicon::harvest(graphs));
    lex
}

pub fn load() -> Vec<Instance> {
    let (amr, anno) = corpus_paths();
    let graphs = read_corpus(&amr).expect("corpus AMR file parses");
    let lex = lexicon(&graphs);
    let sentences = load_annotations(&anno).expect("annotations load");
    let joined = join_corpus(graphs, sentences, &lex);
    assert!(
        joined.missing.is_empty(),
        "graphs without annotations: {:?}",
        joined.missing
    );
    joined.instances
}

pub fn corpus() -> &'static [Instance] {
    static CORPUS: OnceLock<Vec<Instance>> = OnceLock::new();
    CORPUS.get_or_init(load)
}

pub fn trained() -> &'static TrainOutcome {
    static MODEL: OnceLock<TrainOutcome> = OnceLock::new();
    MODEL.get_or_init(|| leamr_core::train(corpus(), &TrainConfig::default()).expect("training succeeds"))
}

pub fn instance<'a>(corpus: &'a [Instance], id: &str) -> &'a Instance {
    corpus
        .iter()
        .find(|i| i.id() == id)
        .unwrap_or_else(|| panic!("no instance {id}"))
}

/// Builds a sentence from `word/lemma/POS` tokens.
pub fn sentence(id: &str, text: &str) -> AnnotatedSentence {
    let (mut tokens, mut lemmas, mut pos) = (Vec::new(), Vec::new(), Vec::new());
    for tok in text.split_whitespace() {
        let parts: Vec<&str> = tok.rsplitn(3, '/').collect();
        let [tag, lemma, word] = parts[..] else {
            panic!("bad token {tok}")
        };
        tokens.push(word.to_string());
        lemmas.push(lemma.to_string());
        pos.push(tag.to_string());
    }
    AnnotatedSentence {
        id: id.into(),
        tokens,
        lemmas,
        pos,
        ner_spans: Vec::new(),
        coref_chains: Vec::new(),
    }
}

pub fn ner(start: usize, end: usize, label: &str) -> NerSpan {
    NerSpan {
        span: Span::new(start, end),
        label: label.into(),
    }
}

pub fn parse(id: &str, penman: &str) -> AmrGraph {
    let text = format!("# ::id {id}\n{penman}\n");
    leamr_core::amr::parse_corpus(&text).expect("valid PENMAN").remove(0)
}

// ----- random graphs -----

const CONCEPTS: &[&str] = &[
    "want-01",
    "go-02",
    "boy",
    "girl",
    "see-01",
    "and",
    "city",
    "name",
    "person",
    "big",
    "house",
    "eat-01",
    "have-degree-91",
    "date-entity",
    "thing",
    "say-01",
];
const ROLES: &[&str] = &[
    ":ARG0",
    ":ARG1",
    ":ARG2",
    ":mod",
    ":time",
    ":location",
    ":op1",
    ":op2",
    ":ARG0-of",
    ":ARG1-of",
    ":domain",
    ":consist-of",
    ":quant",
    ":poss",
];

/// Random PENMAN text with reentrancies, inverse roles and constants.
pub fn random_penman(rng: &mut impl Rng, max_nodes: usize) -> String {
    let mut vars = Vec::new();
    let mut out = String::new();
    let budget = rng.random_range(1..=max_nodes);
    grow(rng, &mut vars, budget, 0, &mut out);
    out
}

fn grow(rng: &mut impl Rng, vars: &mut Vec<String>, budget: usize, depth: usize, out: &mut String) {
    let var = format!("v{}", vars.len());
    vars.push(var.clone());
    out.push_str(&format!("({var} / {}", CONCEPTS.choose(rng).unwrap()));
    let children = if depth > 4 { 0 } else { rng.random_range(0..=3) };
    for _ in 0..children {
        let role = *ROLES.choose(rng).unwrap();
        out.push_str(&format!("\n{}{role} ", "  ".repeat(depth + 1)));
        match rng.random_range(0..10) {
            0 | 1 if vars.len() > 1 => {
                let target = vars.choose(rng).unwrap().clone();
                out.push_str(&target);
            }
            2 => out.push_str(&rng.random_range(1..2000).to_string()),
            3 => out.push('-'),
            4 => out.push_str(&format!("\"Str {}\"", rng.random_range(0..9))),
            _ if vars.len() < budget => grow(rng, vars, budget, depth + 1, out),
            _ => out.push_str("imperative"),
        }
    }
    out.push(')');
}

/// Graph as a set of labelled triples keyed by variable names, an oracle
/// independent of the canonical hashing in the library.
pub fn triples(g: &AmrGraph) -> BTreeSet<(String, String, String)> {
    let mut out = BTreeSet::new();
    let describe = |n| {
        let node = g.node(n);
        match &node.kind {
            NodeKind::Variable { .. } => node.name.clone(),
            NodeKind::Constant { literal, quoted } => format!("{}{literal}", if *quoted { "\"" } else { "'" }),
        }
    };
    for n in g.node_ids() {
        if let NodeKind::Variable { concept } = &g.node(n).kind {
            out.insert((g.node(n).name.clone(), ":instance".into(), concept.clone()));
        }
    }
    for e in g.edges() {
        let (p, role, c) = e.normalized();
        let constant_owner = if g.node(c).is_constant() {
            g.node(p).name.clone()
        } else {
            String::new()
        };
        out.insert((
            describe(p),
            role.to_string(),
            format!("{}{constant_owner}", describe(c)),
        ));
    }
    out.insert(("root".into(), ":top".into(), g.node(g.root()).name.clone()));
    out
}

// ----- random alignment sets for the metric oracle -----

fn random_edge(rng: &mut impl Rng) -> EdgeTriple {
    let nodes = ["a", "b", "c", "d"];
    let roles = [":ARG0", ":ARG1", ":mod"];
    EdgeTriple(
        nodes.choose(rng).unwrap().to_string(),
        roles.choose(rng).unwrap().to_string(),
        nodes.choose(rng).unwrap().to_string(),
    )
}

fn random_subset<T: Clone>(rng: &mut impl Rng, pool: &[T], max: usize) -> Vec<T> {
    let k = rng.random_range(1..=max.min(pool.len()));
    pool.choose_multiple(rng, k).cloned().collect()
}

/// A small random set over a shared 4-token segmentation.
pub fn random_set(rng: &mut impl Rng, id: &str, spans: &[Span]) -> AlignmentSet {
    let nodes: Vec<String> = ["a", "b", "c", "d", "e"].iter().map(|s| s.to_string()).collect();
    let mut set = AlignmentSet::empty(id, spans.to_vec());
    let n = spans.len();
    for _ in 0..rng.random_range(0..4) {
        set.subgraphs.push(SubgraphEntry {
            span: rng.random_range(0..n),
            nodes: random_subset(rng, &nodes, 3),
            edges: Vec::new(),
            provenance: None,
        });
    }
    for _ in 0..rng.random_range(0..3) {
        set.duplicates.push(SubgraphEntry {
            span: rng.random_range(0..n),
            nodes: random_subset(rng, &nodes, 2),
            edges: Vec::new(),
            provenance: None,
        });
    }
    for _ in 0..rng.random_range(0..4) {
        let k = rng.random_range(1..=3);
        set.relations.push(RelationEntry {
            span: rng.random_range(0..n),
            edges: (0..k).map(|_| random_edge(rng)).collect(),
            provenance: None,
        });
    }
    for _ in 0..rng.random_range(0..3) {
        set.reentrancies.push(ReentrancyEntry {
            span: rng.random_range(0..n),
            edge: random_edge(rng),
            kind: *ReentrancyType::ALL[..4].choose(rng).unwrap(),
        });
    }
    set
}

/// Paired gold and predicted random sets over shared segmentations.
pub fn random_corpus(seed: u64, size: usize) -> (Vec<AlignmentSet>, Vec<AlignmentSet>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut gold, mut pred) = (Vec::new(), Vec::new());
    for k in 0..size {
        let spans = random_spans(&mut rng);
        let id = format!("s{k}");
        gold.push(random_set(&mut rng, &id, &spans));
        pred.push(random_set(&mut rng, &id, &spans));
    }
    (gold, pred)
}

pub fn random_spans(rng: &mut impl Rng) -> Vec<Span> {
    let mut spans = Vec::new();
    let mut start = 0;
    while spans.len() < 4 {
        let len = rng.random_range(1..=2);
        spans.push(Span::new(start, start + len));
        start += len;
    }
    spans
}

// ----- brute-force metric oracle -----

/// (tokens, components, type) for each alignment of a layer.
pub type NaiveItem = (Vec<usize>, Vec<String>, String);

pub fn naive_items(set: &AlignmentSet, layer: &str) -> Vec<NaiveItem> {
    let toks = |span: usize| -> Vec<usize> { (set.spans[span].start..set.spans[span].end).collect() };
    let show = |e: &EdgeTriple| format!("{} {} {}", e.0, e.1, e.2);
    match layer {
        "subgraphs" => set
            .subgraphs
            .iter()
            .map(|s| (toks(s.span), s.nodes.clone(), String::new()))
            .collect(),
        "duplicates" => set
            .duplicates
            .iter()
            .map(|s| (toks(s.span), s.nodes.clone(), String::new()))
            .collect(),
        "relations" => set
            .relations
            .iter()
            .map(|r| (toks(r.span), r.edges.iter().map(show).collect(), String::new()))
            .collect(),
        "reentrancies" => set
            .reentrancies
            .iter()
            .map(|r| (toks(r.span), vec![show(&r.edge)], r.kind.to_string()))
            .collect(),
        _ => set
            .reentrancies
            .iter()
            .map(|r| (toks(r.span), vec![show(&r.edge)], String::new()))
            .collect(),
    }
}

fn naive_jaccard<T: PartialEq>(a: &[T], b: &[T]) -> f64 {
    let mut ua: Vec<&T> = Vec::new();
    for x in a.iter().chain(b) {
        if !ua.contains(&x) {
            ua.push(x);
        }
    }
    if ua.is_empty() {
        return 1.0;
    }
    let inter = ua.iter().filter(|x| a.contains(x) && b.contains(x)).count();
    inter as f64 / ua.len() as f64
}

fn naive_credit(a: &NaiveItem, b: &NaiveItem) -> f64 {
    if a.2 != b.2 {
        0.0
    } else {
        naive_jaccard(&a.1, &b.1) * naive_jaccard(&a.0, &b.0)
    }
}

fn same_item(a: &NaiveItem, b: &NaiveItem) -> bool {
    let sorted = |v: &Vec<String>| {
        let mut v = v.clone();
        v.sort();
        v.dedup();
        v
    };
    a.0 == b.0 && sorted(&a.1) == sorted(&b.1) && a.2 == b.2
}

/// Precision, recall and F1 in percent from the definition.
pub fn naive_prf(gold: &[AlignmentSet], pred: &[AlignmentSet], layer: &str, partial: bool) -> (f64, f64, f64) {
    let (mut gc, mut gt, mut pc, mut pt) = (0.0, 0usize, 0.0, 0usize);
    for g in gold {
        let p = pred.iter().find(|p| p.id == g.id).expect("ids match");
        let gi = naive_items(g, layer);
        let pi = naive_items(p, layer);
        gt += gi.len();
        pt += pi.len();
        for x in &gi {
            let mut best: f64 = 0.0;
            for y in &pi {
                let c = if partial {
                    naive_credit(x, y)
                } else if same_item(x, y) {
                    1.0
                } else {
                    0.0
                };
                best = best.max(c);
            }
            gc += best;
        }
        for y in &pi {
            let mut best: f64 = 0.0;
            for x in &gi {
                let c = if partial {
                    naive_credit(y, x)
                } else if same_item(y, x) {
                    1.0
                } else {
                    0.0
                };
                best = best.max(c);
            }
            pc += best;
        }
    }
    let pr = if pt == 0 {
        if gt == 0 {
            100.0
        } else {
            0.0
        }
    } else {
        100.0 * pc / pt as f64
    };
    let rc = if gt == 0 {
        if pt == 0 {
            100.0
        } else {
            0.0
        }
    } else {
        100.0 * gc / gt as f64
    };
    let f = if pr + rc == 0.0 { 0.0 } else { 2.0 * pr * rc / (pr + rc) };
    (pr, rc, f)
}

// ----- structural invariants -----

/// Checks the layer invariants of a decoded state directly from its parts.
pub fn check_invariants(inst: &Instance, state: &AlignmentState, complete: bool) -> Result<(), String> {
    let amr = &inst.amr;
    let mut owner: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for span in 0..state.span_count() {
        for (k, sub) in state.subgraphs_at(span).iter().enumerate() {
            if sub.nodes.is_empty() {
                continue;
            }
            if !amr.is_legal_subgraph(&sub.nodes) {
                return Err(format!("{}: illegal subgraph on span {span}", inst.id()));
            }
            for n in &sub.nodes {
                if owner.insert(n.index(), (span, k)).is_some() {
                    return Err(format!("{}: node {} aligned twice", inst.id(), amr.node(*n).name));
                }
            }
        }
    }
    if complete && owner.len() != amr.node_count() {
        return Err(format!(
            "{}: {} of {} nodes aligned",
            inst.id(),
            owner.len(),
            amr.node_count()
        ));
    }
    for e in amr.edge_ids() {
        let edge = amr.edge(e);
        let internal = matches!(
            (owner.get(&edge.parent.index()), owner.get(&edge.child.index())),
            (Some(a), Some(b)) if a == b
        );
        let relation_spans = (0..state.span_count())
            .filter(|&s| state.relations_at(s).contains(&e))
            .count();
        if internal && relation_spans > 0 {
            return Err(format!(
                "{}: internal edge {} also in relations",
                inst.id(),
                amr.edge_string(e)
            ));
        }
        if relation_spans > 1 {
            return Err(format!(
                "{}: edge {} aligned to {relation_spans} spans",
                inst.id(),
                amr.edge_string(e)
            ));
        }
        if complete && !internal && relation_spans == 0 {
            return Err(format!("{}: edge {} unaligned", inst.id(), amr.edge_string(e)));
        }
    }
    // duplicates need a same-concept counterpart on another slot
    for span in 0..state.span_count() {
        let subs: Vec<_> = state
            .subgraphs_at(span)
            .iter()
            .filter(|g| !g.nodes.is_empty())
            .collect();
        for g in subs.iter().skip(1) {
            let labels: BTreeSet<&str> = g.nodes.iter().map(|&n| amr.label(n)).collect();
            let twin = amr
                .node_ids()
                .any(|m| !g.nodes.contains(&m) && labels.contains(amr.label(m)));
            if !twin {
                return Err(format!("{}: duplicate on span {span} has no counterpart", inst.id()));
            }
        }
    }
    if complete {
        for (node, incoming) in amr.reentrant_nodes() {
            let primary = state.primary_edge(node);
            if primary.is_none() {
                return Err(format!(
                    "{}: reentrant node {} has no primary edge",
                    inst.id(),
                    amr.node(node).name
                ));
            }
            for e in incoming {
                let typed = state.reentrancy(e);
                if Some(e) == primary {
                    if typed.is_some_and(|(_, k)| k != ReentrancyType::Primary) {
                        return Err(format!("{}: primary edge typed", inst.id()));
                    }
                } else if !typed.is_some_and(|(_, k)| k != ReentrancyType::Primary) {
                    return Err(format!("{}: reentrant edge {} untyped", inst.id(), amr.edge_string(e)));
                }
            }
        }
    }
    Ok(())
}

/// Node and edge counts covered by a state.
pub fn covered(inst: &Instance, state: &AlignmentState) -> (usize, usize) {
    let amr = &inst.amr;
    let nodes = amr.node_ids().filter(|&n| state.is_aligned(n)).count();
    let edges = amr
        .edge_ids()
        .filter(|&e| state.is_internal(amr, e) || state.relation_span(e).is_some())
        .count();
    (nodes, edges)
}
