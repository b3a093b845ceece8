//! Subgraph pre-alignment: string matching, English rules and graph
//! expansion.

use std::collections::{BTreeMap, BTreeSet};

use crate::amr::{concept_stem, AmrGraph, NodeId};
use crate::corpus::Instance;
use crate::state::{AlignmentState, Provenance};

use super::english;

/// Working context shared by all subgraph rules.
pub(crate) struct RuleCtx<'a> {
    pub inst: &'a Instance,
    pub state: AlignmentState,
}

impl<'a> RuleCtx<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        RuleCtx {
            inst,
            state: AlignmentState::for_instance(inst),
        }
    }

    pub fn amr(&self) -> &'a AmrGraph {
        &self.inst.amr
    }

    pub fn free_spans(&self) -> Vec<usize> {
        (0..self.inst.span_count())
            .filter(|&s| !self.state.span_is_aligned(s))
            .collect()
    }

    pub fn free_nodes(&self) -> Vec<NodeId> {
        self.state.unaligned_nodes().collect()
    }

    pub fn span_lower(&self, span: usize) -> String {
        self.inst.span_text(span).to_lowercase()
    }

    pub fn span_tokens_lower(&self, span: usize) -> Vec<String> {
        self.inst.sentence.tokens[self.inst.spans[span].tokens()]
            .iter()
            .map(|t| t.to_lowercase())
            .collect()
    }

    /// Aligns `nodes` (grown to whole entity units) to a free span.
    pub fn align(&mut self, span: usize, nodes: BTreeSet<NodeId>, rule: &'static str) -> bool {
        if self.state.span_is_aligned(span) || nodes.is_empty() {
            return false;
        }
        if nodes.iter().any(|&n| self.state.is_aligned(n)) {
            return false;
        }
        let amr = self.amr();
        let mut grown = nodes.clone();
        let mut closed = false;
        for &n in &nodes {
            if let Some(unit) = entity_unit(amr, n) {
                closed = true;
                grown.extend(unit.into_iter().filter(|&m| !self.state.is_aligned(m)));
            }
        }
        let chosen = if amr.is_legal_subgraph(&grown) {
            grown
        } else if amr.is_legal_subgraph(&nodes) {
            closed = false;
            nodes
        } else {
            return false;
        };
        self.state.add_subgraph(span, chosen, Provenance::Rule(rule), closed);
        true
    }

    /// Aligns every pair in which the span matches only that node and the
    /// node only that span.
    pub fn align_unique<F>(&mut self, spans: &[usize], nodes: &[NodeId], rule: &'static str, matches: F) -> usize
    where
        F: Fn(&Self, usize, NodeId) -> bool,
    {
        let pairs = unique_pairs(spans, nodes, |s, n| matches(self, s, n));
        pairs
            .into_iter()
            .filter(|&(s, n)| self.align(s, BTreeSet::from([n]), rule))
            .count()
    }
}

/// Pairs `(s, n)` where `s` matches exactly `n` and `n` exactly `s`.
pub(crate) fn unique_pairs<F>(spans: &[usize], nodes: &[NodeId], matches: F) -> Vec<(usize, NodeId)>
where
    F: Fn(usize, NodeId) -> bool,
{
    let mut by_span: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
    let mut by_node: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
    for &s in spans {
        for &n in nodes {
            if matches(s, n) {
                by_span.entry(s).or_default().push(n);
                by_node.entry(n).or_default().push(s);
            }
        }
    }
    by_span
        .into_iter()
        .filter_map(|(s, ns)| {
            let [n] = ns[..] else { return None };
            (by_node[&n].len() == 1).then_some((s, n))
        })
        .collect()
}

/// The notational unit a node belongs to: named entities, dates,
/// quantities and `:value` entities.
pub fn entity_unit(amr: &AmrGraph, n: NodeId) -> Option<BTreeSet<NodeId>> {
    let label = amr.label(n);
    if amr.node(n).is_constant() {
        let parent = amr.incoming(n).first().map(|&e| amr.edge(e).parent)?;
        let plabel = amr.label(parent);
        if plabel == "name" || plabel == "date-entity" || is_quantity(plabel) || is_value_entity(amr, parent) {
            return entity_unit(amr, parent);
        }
        return None;
    }
    if label == "name" {
        let mut unit: BTreeSet<NodeId> = BTreeSet::from([n]);
        unit.extend(terminal_constants(amr, n));
        for &e in amr.incoming(n) {
            let edge = amr.edge(e);
            if edge.role.as_str() == ":name" {
                unit.insert(edge.parent);
                for &w in amr.outgoing(edge.parent) {
                    let we = amr.edge(w);
                    if we.role.as_str() == ":wiki" && amr.node(we.child).is_constant() {
                        unit.insert(we.child);
                    }
                }
                break;
            }
        }
        return Some(unit);
    }
    if let Some(name) = amr.child_by_role(n, ":name") {
        if amr.label(name) == "name" {
            return entity_unit(amr, name);
        }
    }
    if label == "date-entity" {
        let mut unit = BTreeSet::from([n]);
        unit.extend(
            amr.outgoing(n)
                .iter()
                .map(|&e| amr.edge(e).child)
                .filter(|&c| amr.is_terminal(c)),
        );
        return Some(unit);
    }
    if is_quantity(label) {
        let mut unit = BTreeSet::from([n]);
        for &e in amr.outgoing(n) {
            let edge = amr.edge(e);
            if matches!(edge.role.as_str(), ":quant" | ":unit") && amr.is_terminal(edge.child) {
                unit.insert(edge.child);
            }
        }
        return Some(unit);
    }
    if is_value_entity(amr, n) {
        let mut unit = BTreeSet::from([n]);
        unit.extend(
            amr.outgoing(n)
                .iter()
                .map(|&e| amr.edge(e))
                .filter(|e| e.role.as_str() == ":value" && amr.is_terminal(e.child))
                .map(|e| e.child),
        );
        return Some(unit);
    }
    for &e in amr.incoming(n) {
        let edge = amr.edge(e);
        // concept-valued date attributes such as `:weekday monday`
        if amr.label(edge.parent) == "date-entity" && amr.is_terminal(n) {
            return entity_unit(amr, edge.parent);
        }
    }
    // unit nodes of a quantity
    for &e in amr.incoming(n) {
        let edge = amr.edge(e);
        if edge.role.as_str() == ":unit" && is_quantity(amr.label(edge.parent)) && amr.is_terminal(n) {
            return entity_unit(amr, edge.parent);
        }
    }
    None
}

fn terminal_constants(amr: &AmrGraph, n: NodeId) -> impl Iterator<Item = NodeId> + '_ {
    amr.outgoing(n)
        .iter()
        .map(move |&e| amr.edge(e).child)
        .filter(move |&c| amr.node(c).is_constant())
}

fn is_quantity(label: &str) -> bool {
    label.ends_with("-quantity")
}

fn is_value_entity(amr: &AmrGraph, n: NodeId) -> bool {
    let label = amr.label(n);
    label.ends_with("-entity")
        && label != "date-entity"
        && amr.outgoing(n).iter().any(|&e| amr.edge(e).role.as_str() == ":value")
}

/// Parses a plain numeral such as `1943`, `2.5` or `1,000`.
pub(crate) fn parse_numeral(text: &str) -> Option<f64> {
    let cleaned: String = text.chars().filter(|&c| c != ',').collect();
    if cleaned.is_empty() || !cleaned.chars().any(|c| c.is_ascii_digit()) {
        return None;
    }
    cleaned.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Numeric constants whose parent is a date entity are left to the date rule.
fn is_date_attribute(amr: &AmrGraph, n: NodeId) -> bool {
    amr.incoming(n)
        .iter()
        .any(|&e| amr.label(amr.edge(e).parent) == "date-entity")
}

fn name_string(amr: &AmrGraph, n: NodeId) -> Option<String> {
    amr.name_tokens(n).map(|t| t.join(" "))
}

/// Runs every subgraph rule in order.
pub fn prealign_subgraphs(inst: &Instance) -> AlignmentState {
    let mut ctx = RuleCtx::new(inst);
    exact_token(&mut ctx);
    exact_lemma(&mut ctx);
    prefix_names(&mut ctx);
    prefix_lemmas(&mut ctx);
    english::apply(&mut ctx);
    negated_words(&mut ctx);
    expand_morphology(&mut ctx);
    ctx.state
}

fn exact_token(ctx: &mut RuleCtx<'_>) {
    let amr = ctx.amr();
    let targets: Vec<NodeId> = ctx
        .free_nodes()
        .into_iter()
        .filter(|&n| {
            amr.label(n) == "name"
                || (amr.node(n).is_constant() && parse_numeral(amr.label(n)).is_some() && !is_date_attribute(amr, n))
        })
        .collect();
    let spans = ctx.free_spans();
    ctx.align_unique(&spans, &targets, "exact-token", |ctx, s, n| {
        let amr = ctx.amr();
        let text = ctx.inst.span_text(s);
        match name_string(amr, n) {
            Some(name) => name == text || name.to_lowercase() == text.to_lowercase(),
            None => match (parse_numeral(amr.label(n)), parse_numeral(&text)) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            },
        }
    });
}

fn exact_lemma(ctx: &mut RuleCtx<'_>) {
    let amr = ctx.amr();
    let targets: Vec<NodeId> = ctx
        .free_nodes()
        .into_iter()
        .filter(|&n| !amr.node(n).is_constant() && amr.label(n) != "name")
        .collect();
    let spans = ctx.free_spans();
    ctx.align_unique(&spans, &targets, "exact-lemma", |ctx, s, n| {
        concept_stem(ctx.amr().label(n)) == ctx.inst.lemmas[s]
    });
}

fn prefix(s: &str, k: usize) -> Option<&str> {
    let (idx, _) = s.char_indices().nth(k - 1)?;
    let end = idx + s[idx..].chars().next().map_or(0, char::len_utf8);
    Some(&s[..end])
}

fn prefix_match(a: &str, b: &str, k: usize) -> bool {
    matches!((prefix(a, k), prefix(b, k)), (Some(x), Some(y)) if x == y)
}

fn is_word(s: &str) -> bool {
    s.chars().any(char::is_alphabetic)
}

fn prefix_names(ctx: &mut RuleCtx<'_>) {
    for k in [6, 5, 4] {
        let amr = ctx.amr();
        let targets: Vec<NodeId> = ctx
            .free_nodes()
            .into_iter()
            .filter(|&n| amr.label(n) == "name")
            .collect();
        let spans = ctx.free_spans();
        ctx.align_unique(&spans, &targets, "prefix-token", |ctx, s, n| {
            let text = ctx.span_lower(s);
            is_word(&text) && name_string(ctx.amr(), n).is_some_and(|name| prefix_match(&text, &name.to_lowercase(), k))
        });
    }
}

fn prefix_lemmas(ctx: &mut RuleCtx<'_>) {
    for k in [6, 5, 4] {
        let amr = ctx.amr();
        let targets: Vec<NodeId> = ctx
            .free_nodes()
            .into_iter()
            .filter(|&n| !amr.node(n).is_constant() && amr.label(n) != "name")
            .collect();
        let spans = ctx.free_spans();
        ctx.align_unique(&spans, &targets, "prefix-lemma", |ctx, s, n| {
            let lemma = &ctx.inst.lemmas[s];
            is_word(lemma) && prefix_match(lemma, concept_stem(ctx.amr().label(n)), k)
        });
    }
}

/// `unhappy` -> `(happy-01 :polarity -)` when the stem matches one concept.
fn negated_words(ctx: &mut RuleCtx<'_>) {
    let amr = ctx.amr();
    let targets: Vec<NodeId> = ctx
        .free_nodes()
        .into_iter()
        .filter(|&n| !amr.node(n).is_constant() && polarity_child(amr, n).next().is_some())
        .collect();
    let spans = ctx.free_spans();
    let pairs = unique_pairs(&spans, &targets, |s, n| {
        let text = ctx.span_lower(s);
        is_word(&text) && has_negative_prefix(&text, amr.label(n))
    });
    for (span, n) in pairs {
        let mut nodes = BTreeSet::from([n]);
        nodes.extend(polarity_child(amr, n).filter(|&m| !ctx.state.is_aligned(m)));
        ctx.align(span, nodes, "negated-word");
    }
}

const ROLE_FRAMES: &[&str] = &["have-rel-role-91", "have-org-role-91"];

/// For a role noun aligned as the `:ARG2` of a role frame, the frame and the
/// person holding the role.
fn role_frame(amr: &AmrGraph, n: NodeId) -> Option<[NodeId; 2]> {
    let e = amr
        .incoming(n)
        .iter()
        .map(|&e| amr.edge(e))
        .find(|e| e.role.as_str() == ":ARG2" && ROLE_FRAMES.contains(&amr.label(e.parent)))?;
    let frame = e.parent;
    let holder = amr
        .incoming(frame)
        .iter()
        .map(|&e| amr.edge(e))
        .find(|e| e.role.as_str() == ":ARG0-of" && matches!(amr.label(e.parent), "person" | "organization"))?;
    Some([frame, holder.parent])
}

const COMPARATIVE_IRREGULAR: &[&str] = &["better", "worse", "more", "less", "further", "farther"];
const SUPERLATIVE_IRREGULAR: &[&str] = &["best", "worst", "most", "least", "furthest", "farthest"];

/// Adds neighbours signalled by the morphology of an aligned span.
fn expand_morphology(ctx: &mut RuleCtx<'_>) {
    let amr = ctx.amr();
    for span in 0..ctx.inst.span_count() {
        if ctx.state.subgraphs_at(span).len() != 1 || ctx.state.subgraphs_at(span)[0].closed {
            continue;
        }
        let text = ctx.span_lower(span);
        let lemma = ctx.inst.lemmas[span].clone();
        let pos = ctx.inst.span_pos(span).to_string();
        let nodes: Vec<NodeId> = ctx.state.subgraphs_at(span)[0].nodes.iter().copied().collect();
        let mut add = BTreeSet::new();
        for &n in &nodes {
            // role nouns carry their role frame
            if let Some(frame) = role_frame(amr, n) {
                if frame.iter().all(|&m| !ctx.state.is_aligned(m)) {
                    add.extend(frame);
                }
            }
            // comparatives and superlatives
            let comparative = pos == "JJR"
                || pos == "RBR"
                || COMPARATIVE_IRREGULAR.contains(&text.as_str())
                || (text.ends_with("er") && !lemma.ends_with("er"));
            let superlative = pos == "JJS"
                || pos == "RBS"
                || SUPERLATIVE_IRREGULAR.contains(&text.as_str())
                || (text.ends_with("est") && !lemma.ends_with("est"));
            if comparative || superlative {
                let degrees: &[&str] = if superlative {
                    &["most", "least"]
                } else {
                    &["more", "less", "too"]
                };
                for &e in amr.incoming(n) {
                    let h = amr.edge(e).parent;
                    if !matches!(amr.label(h), "have-degree-91" | "have-quant-91") || ctx.state.is_aligned(h) {
                        continue;
                    }
                    let degree = amr
                        .outgoing(h)
                        .iter()
                        .map(|&d| amr.edge(d).child)
                        .find(|&m| degrees.contains(&amr.label(m)) && !ctx.state.is_aligned(m));
                    if let Some(m) = degree {
                        add.insert(h);
                        add.insert(m);
                    }
                }
            }
            // negative prefixes
            if has_negative_prefix(&text, amr.label(n)) {
                add.extend(polarity_child(amr, n).filter(|&m| !ctx.state.is_aligned(m)));
            }
            // -able / -ible
            if (text.ends_with("able") || text.ends_with("ible")) && !concept_stem(amr.label(n)).ends_with("ble") {
                add.extend(
                    amr.incoming(n)
                        .iter()
                        .map(|&e| amr.edge(e))
                        .filter(|e| e.role.as_str() == ":ARG1" && amr.label(e.parent) == "possible-01")
                        .map(|e| e.parent)
                        .filter(|&p| !ctx.state.is_aligned(p)),
                );
            }
            // agentive -er / -or / -ist
            let stem = concept_stem(amr.label(n));
            let agentive = ["er", "or", "ist", "ant", "ent"]
                .iter()
                .any(|suf| lemma.ends_with(suf) && !stem.ends_with(suf));
            if agentive && !amr.node(n).is_constant() {
                for &e in amr.incoming(n) {
                    let edge = amr.edge(e);
                    if matches!(edge.role.as_str(), ":ARG0-of" | ":ARG1-of")
                        && matches!(amr.label(edge.parent), "person" | "thing")
                        && !ctx.state.is_aligned(edge.parent)
                    {
                        add.insert(edge.parent);
                        break;
                    }
                }
                for &e in amr.outgoing(n) {
                    let edge = amr.edge(e);
                    if edge.role.as_str() == ":ARG0"
                        && amr.label(edge.child) == "person"
                        && amr.is_terminal(edge.child)
                        && amr.incoming(edge.child).len() == 1
                        && !ctx.state.is_aligned(edge.child)
                    {
                        add.insert(edge.child);
                        break;
                    }
                }
            }
        }
        if add.is_empty() {
            continue;
        }
        let mut grown: BTreeSet<NodeId> = nodes.iter().copied().collect();
        grown.extend(add.iter().copied());
        if amr.is_legal_subgraph(&grown) {
            ctx.state.extend_subgraph(span, 0, &add);
        }
    }
}

fn polarity_child(amr: &AmrGraph, n: NodeId) -> impl Iterator<Item = NodeId> + '_ {
    amr.outgoing(n)
        .iter()
        .map(move |&e| amr.edge(e))
        .filter(move |e| e.role.as_str() == ":polarity" && amr.label(e.child) == "-")
        .map(|e| e.child)
}

const NEGATIVE_PREFIXES: &[&str] = &["un", "in", "im", "il", "ir", "non", "dis"];

fn has_negative_prefix(text: &str, concept: &str) -> bool {
    let stem = concept_stem(concept);
    NEGATIVE_PREFIXES.iter().any(|p| {
        text.strip_prefix(p).is_some_and(|rest| {
            let rest = rest.trim_start_matches('-');
            rest.len() >= 3 && !stem.starts_with(p) && prefix_match(rest, stem, 4.min(stem.len()).max(3))
        })
    })
}
