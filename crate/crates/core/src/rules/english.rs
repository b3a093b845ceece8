//! Hand-written English rules for constructions with many surface forms.

use std::collections::BTreeSet;

use crate::amr::{AmrGraph, NodeId};

use super::subgraph::{entity_unit, parse_numeral, unique_pairs, RuleCtx};

const MONTHS: [&str; 12] = [
    "january",
    "february",
    "march",
    "april",
    "may",
    "june",
    "july",
    "august",
    "september",
    "october",
    "november",
    "december",
];

const DECADE_WORDS: [(&str, u32); 8] = [
    ("twenties", 20),
    ("thirties", 30),
    ("forties", 40),
    ("fifties", 50),
    ("sixties", 60),
    ("seventies", 70),
    ("eighties", 80),
    ("nineties", 90),
];

const CURRENCIES: [(&str, &str); 6] = [
    ("$", "dollar"),
    ("us$", "dollar"),
    ("€", "euro"),
    ("£", "pound"),
    ("¥", "yen"),
    ("₹", "rupee"),
];

/// Concept, surface triggers (lemmas or lowercased text, hyphen-joined).
const LEXICAL: &[(&str, &[&str])] = &[
    (
        "and",
        &[
            "and",
            "&",
            "plus",
            "also",
            "additionally",
            "moreover",
            "furthermore",
            "as-well",
            "as-well-as",
            "too",
        ],
    ),
    (
        "cause-01",
        &[
            "because",
            "because-of",
            "since",
            "so",
            "thus",
            "therefore",
            "hence",
            "due-to",
            "consequently",
            "why",
        ],
    ),
    (
        "amr-unknown",
        &["who", "what", "when", "where", "why", "how", "which", "whom", "whose"],
    ),
    ("amr-unknown", &["?"]),
    (
        "person",
        &[
            "people",
            "someone",
            "somebody",
            "anyone",
            "anybody",
            "everyone",
            "everybody",
            "one",
            "whoever",
        ],
    ),
    (
        "rate-entity-91",
        &[
            "daily", "weekly", "monthly", "yearly", "annually", "hourly", "per", "each", "every", "a",
        ],
    ),
    (
        "include-91",
        &["out-of", "include", "including", "among", "of", "one-of"],
    ),
    ("instead-of-91", &["instead", "instead-of", "rather", "rather-than"]),
    ("have-03", &["have", "'s", "with", "got", "own"]),
    ("mean-01", &[":", ",", "mean", "namely", "i.e.", "that-is"]),
    // further frequent concepts with varied surface forms
    (
        "contrast-01",
        &["but", "however", "yet", "whereas", "although", "though"],
    ),
    (
        "have-concession-91",
        &["although", "though", "even-though", "despite", "nevertheless"],
    ),
    ("have-condition-91", &["if", "unless", "provided"]),
    ("possible-01", &["can", "could", "may", "might", "able"]),
    ("obligate-01", &["must", "should", "have-to", "need", "ought"]),
    ("recommend-01", &["should", "ought"]),
    ("i", &["me", "my", "mine", "myself"]),
    ("we", &["us", "our", "ours", "ourselves"]),
    ("you", &["your", "yours", "yourself", "yourselves"]),
    ("he", &["him", "his", "himself"]),
    ("she", &["her", "hers", "herself"]),
    ("they", &["them", "their", "theirs", "themselves"]),
    ("it", &["its", "itself"]),
    ("interrogative", &["?"]),
    ("expressive", &["!"]),
];

const POLARITY_TRIGGERS: &[&str] = &[
    "not", "n't", "no", "none", "never", "nothing", "nobody", "nowhere", "neither", "nor", "without", "non", "cannot",
];

const SENTENCE_PUNCT: &[&str] = &[".", ";", ":", "!", "?", "--"];

const US_ALIASES: &[&str] = &[
    "us",
    "u.s.",
    "usa",
    "u.s.a.",
    "america",
    "american",
    "americans",
    "united-states",
];

pub(crate) fn apply(ctx: &mut RuleCtx<'_>) {
    dates(ctx);
    numbers(ctx);
    currencies(ctx);
    lexical(ctx, "and", |a, n| a.label(n) == "and", LEXICAL[0].1, false);
    multi_sentence(ctx);
    polarity(ctx);
    for &(concept, triggers) in &LEXICAL[1..] {
        let rule = rule_name(concept);
        if concept == "rate-entity-91" {
            rates(ctx, triggers);
            continue;
        }
        lexical(ctx, rule, |a, n| a.label(n) == concept, triggers, false);
        if concept == "person" {
            // ordered as listed: the United States rule follows person
            united_states(ctx);
        }
        if concept == "mean-01" {
            how(ctx);
            as_as(ctx);
        }
    }
}

fn rule_name(concept: &str) -> &'static str {
    match concept {
        "cause-01" => "english-cause",
        "amr-unknown" => "english-unknown",
        "person" => "english-person",
        "rate-entity-91" => "english-rate",
        "include-91" => "english-include",
        "instead-of-91" => "english-instead",
        "have-03" => "english-have",
        "mean-01" => "english-mean",
        "contrast-01" => "english-contrast",
        "have-concession-91" => "english-concession",
        "have-condition-91" => "english-condition",
        "possible-01" => "english-possible",
        "obligate-01" => "english-obligate",
        "recommend-01" => "english-recommend",
        "interrogative" | "expressive" => "english-mode",
        _ => "english-pronoun",
    }
}

/// Hyphen-joined lowercase surface of a span.
fn surface_key(ctx: &RuleCtx<'_>, span: usize) -> String {
    ctx.span_tokens_lower(span).join("-")
}

fn span_triggers(ctx: &RuleCtx<'_>, span: usize, triggers: &[&str]) -> bool {
    let lemma = ctx.inst.lemmas[span].as_str();
    let surface = surface_key(ctx, span);
    triggers.contains(&lemma) || triggers.contains(&surface.as_str())
}

fn lexical(
    ctx: &mut RuleCtx<'_>,
    rule: &'static str,
    node_pred: impl Fn(&AmrGraph, NodeId) -> bool,
    triggers: &[&str],
    skip_last: bool,
) {
    let amr = ctx.amr();
    let targets: Vec<NodeId> = ctx.free_nodes().into_iter().filter(|&n| node_pred(amr, n)).collect();
    if targets.is_empty() {
        return;
    }
    let last = ctx.inst.span_count().saturating_sub(1);
    let spans: Vec<usize> = ctx
        .free_spans()
        .into_iter()
        .filter(|&s| !(skip_last && s == last))
        .collect();
    ctx.align_unique(&spans, &targets, rule, |ctx, s, _| span_triggers(ctx, s, triggers));
}

/// `every day` -> `(rate-entity-91 :ARG3 (temporal-quantity :quant 1 :unit day))`:
/// any trigger token matches, and the period joins when the span names it.
fn rates(ctx: &mut RuleCtx<'_>, triggers: &[&str]) {
    let amr = ctx.amr();
    let targets: Vec<NodeId> = ctx
        .free_nodes()
        .into_iter()
        .filter(|&n| amr.label(n) == "rate-entity-91")
        .collect();
    if targets.is_empty() {
        return;
    }
    let spans = ctx.free_spans();
    let pairs = unique_pairs(&spans, &targets, |s, _| {
        span_triggers(ctx, s, triggers) || ctx.span_tokens_lower(s).iter().any(|t| triggers.contains(&t.as_str()))
    });
    for (span, r) in pairs {
        let lemmas: Vec<String> = ctx.inst.sentence.lemmas[ctx.inst.spans[span].tokens()]
            .iter()
            .map(|l| l.to_lowercase())
            .collect();
        let mut nodes = BTreeSet::from([r]);
        for &e in amr.outgoing(r) {
            let edge = amr.edge(e);
            if !matches!(edge.role.as_str(), ":ARG3" | ":ARG4") {
                continue;
            }
            let period = amr.child_by_role(edge.child, ":unit").unwrap_or(edge.child);
            if lemmas.iter().any(|l| l == amr.label(period)) && !ctx.state.is_aligned(edge.child) {
                nodes.insert(edge.child);
                if let Some(unit) = entity_unit(amr, edge.child) {
                    nodes.extend(unit.into_iter().filter(|&m| !ctx.state.is_aligned(m)));
                }
            }
        }
        ctx.align(span, nodes, "english-rate");
    }
}

fn multi_sentence(ctx: &mut RuleCtx<'_>) {
    lexical(
        ctx,
        "english-multi-sentence",
        |a, n| a.label(n) == "multi-sentence",
        SENTENCE_PUNCT,
        true,
    );
}

fn polarity(ctx: &mut RuleCtx<'_>) {
    lexical(
        ctx,
        "english-polarity",
        |a, n| {
            a.label(n) == "-"
                && a.node(n).is_constant()
                && a.incoming(n).iter().any(|&e| a.edge(e).role.as_str() == ":polarity")
        },
        POLARITY_TRIGGERS,
        false,
    );
}

fn united_states(ctx: &mut RuleCtx<'_>) {
    lexical(
        ctx,
        "english-united-states",
        |a, n| a.name_tokens(n).is_some_and(|t| t == ["United", "States"]),
        US_ALIASES,
        false,
    );
}

fn how(ctx: &mut RuleCtx<'_>) {
    lexical(
        ctx,
        "english-how",
        |a, n| {
            let label = a.label(n);
            let roles = a.incoming(n).iter().map(|&e| a.edge(e).role.as_str());
            (label == "thing" && roles.clone().any(|r| r == ":manner"))
                || (label == "so" && roles.clone().any(|r| r == ":degree"))
        },
        &["how"],
        false,
    );
}

/// `as ... as` aligns its first `as` to a unique `equal` node.
fn as_as(ctx: &mut RuleCtx<'_>) {
    let amr = ctx.amr();
    let targets: Vec<NodeId> = ctx
        .free_nodes()
        .into_iter()
        .filter(|&n| amr.label(n) == "equal")
        .collect();
    let [target] = targets[..] else { return };
    let all_as: Vec<usize> = (0..ctx.inst.span_count())
        .filter(|&s| ctx.span_lower(s) == "as")
        .collect();
    if all_as.len() >= 2 && !ctx.state.span_is_aligned(all_as[0]) {
        // the degree frame comes along: `as tall as` -> (have-degree-91 :ARG3 equal)
        let mut nodes = BTreeSet::from([target]);
        nodes.extend(
            amr.incoming(target)
                .iter()
                .map(|&e| amr.edge(e))
                .filter(|e| e.role.as_str() == ":ARG3" && amr.label(e.parent) == "have-degree-91")
                .map(|e| e.parent)
                .filter(|&h| !ctx.state.is_aligned(h)),
        );
        ctx.align(all_as[0], nodes, "english-as-as");
    }
}

fn currencies(ctx: &mut RuleCtx<'_>) {
    let amr = ctx.amr();
    let targets: Vec<NodeId> = ctx
        .free_nodes()
        .into_iter()
        .filter(|&n| CURRENCIES.iter().any(|&(_, c)| c == amr.label(n)))
        .collect();
    let spans = ctx.free_spans();
    ctx.align_unique(&spans, &targets, "english-currency", |ctx, s, n| {
        let text = ctx.span_lower(s);
        CURRENCIES
            .iter()
            .any(|&(sym, c)| sym == text && c == ctx.amr().label(n))
    });
}

/// Value of a spelled-out number up to a million.
pub fn parse_number_words(text: &str) -> Option<f64> {
    const UNITS: [&str; 20] = [
        "zero",
        "one",
        "two",
        "three",
        "four",
        "five",
        "six",
        "seven",
        "eight",
        "nine",
        "ten",
        "eleven",
        "twelve",
        "thirteen",
        "fourteen",
        "fifteen",
        "sixteen",
        "seventeen",
        "eighteen",
        "nineteen",
    ];
    const TENS: [&str; 10] = [
        "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety",
    ];
    let lower = text.to_lowercase();
    let words: Vec<&str> = lower
        .split(|c: char| c.is_whitespace() || c == '-')
        .filter(|w| !w.is_empty() && *w != "and")
        .collect();
    if words.is_empty() {
        return None;
    }
    let mut total = 0u64;
    let mut current = 0u64;
    for w in words {
        if let Some(i) = UNITS.iter().position(|&u| u == w) {
            current += i as u64;
        } else if let Some(i) = TENS.iter().position(|&t| !t.is_empty() && t == w) {
            current += 10 * i as u64;
        } else if w == "hundred" {
            current = current.max(1) * 100;
        } else if w == "thousand" {
            total += current.max(1) * 1_000;
            current = 0;
        } else if w == "million" {
            total = (total + current.max(1)) * 1_000_000;
            current = 0;
        } else if w == "dozen" {
            current = current.max(1) * 12;
        } else {
            return None;
        }
    }
    let value = total + current;
    (value <= 1_000_000).then_some(value as f64)
}

fn token_value(tok: &str) -> Option<f64> {
    let times = match tok {
        "once" => Some(1.0),
        "twice" => Some(2.0),
        "thrice" => Some(3.0),
        _ => None,
    };
    times.or_else(|| parse_numeral(tok)).or_else(|| parse_number_words(tok))
}

fn numbers(ctx: &mut RuleCtx<'_>) {
    let amr = ctx.amr();
    let targets: Vec<NodeId> = ctx
        .free_nodes()
        .into_iter()
        .filter(|&n| {
            amr.node(n).is_constant()
                && parse_numeral(amr.label(n)).is_some()
                && !amr
                    .incoming(n)
                    .iter()
                    .any(|&e| amr.label(amr.edge(e).parent) == "date-entity")
        })
        .collect();
    let spans = ctx.free_spans();
    ctx.align_unique(&spans, &targets, "english-number", |ctx, s, n| {
        let want = parse_numeral(ctx.amr().label(n));
        let text = ctx.inst.span_text(s);
        token_value(&text) == want || ctx.span_tokens_lower(s).iter().any(|t| token_value(t) == want)
    });
}

fn date_attr(amr: &AmrGraph, d: NodeId, role: &str) -> Option<String> {
    amr.child_by_role(d, role).map(|c| amr.label(c).to_string())
}

fn decade_of(token: &str) -> Option<u32> {
    if let Some(&(_, v)) = DECADE_WORDS.iter().find(|(w, _)| *w == token) {
        return Some(1900 + v);
    }
    let digits = token.strip_suffix('s')?.trim_start_matches('\'');
    let v: u32 = digits.parse().ok()?;
    match digits.len() {
        4 if v.is_multiple_of(10) => Some(v),
        2 if v.is_multiple_of(10) => Some(1900 + v),
        _ => None,
    }
}

fn month_of(token: &str) -> Option<u32> {
    let t = token.trim_end_matches('.');
    if t.len() < 3 {
        return None;
    }
    MONTHS
        .iter()
        .position(|m| *m == t || (t.len() >= 3 && m.starts_with(t) && (t.len() == 3 || t == "sept")))
        .map(|i| i as u32 + 1)
}

/// How well a span matches a date entity; lower is better.
fn date_match(ctx: &RuleCtx<'_>, d: NodeId, span: usize) -> Option<u8> {
    let amr = ctx.amr();
    let year = date_attr(amr, d, ":year");
    let month = date_attr(amr, d, ":month").and_then(|m| m.parse::<u32>().ok());
    let day = date_attr(amr, d, ":day");
    let decade = date_attr(amr, d, ":decade").and_then(|v| v.parse::<u32>().ok());
    let weekday = date_attr(amr, d, ":weekday");
    let season = date_attr(amr, d, ":season");
    let dayperiod = date_attr(amr, d, ":dayperiod");
    let mut best: Option<u8> = None;
    let mut consider = |score: u8| best = Some(best.map_or(score, |b: u8| b.min(score)));
    for (ti, tok) in ctx.span_tokens_lower(span).iter().enumerate() {
        let lemma = &ctx.inst.sentence.lemmas[ctx.inst.spans[span].start + ti].to_lowercase();
        // numeric dates such as 1943-06-05 or 6/5/1943
        let parts: Vec<&str> = tok.split(['-', '/']).collect();
        if parts.len() >= 2
            && parts
                .iter()
                .all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_digit()))
        {
            let nums: Vec<&str> = parts.iter().map(|p| p.trim_start_matches('0')).collect();
            let has = |v: &Option<String>| v.as_deref().is_some_and(|v| nums.contains(&v));
            let has_month = month.is_some_and(|m| nums.contains(&m.to_string().as_str()));
            if (has(&year) || year.is_none()) && (has_month || month.is_none()) && (has(&day) || day.is_none()) {
                consider(0);
            }
        }
        if month.is_some() && month_of(tok) == month {
            consider(1);
        }
        if decade.is_some() && decade_of(tok) == decade {
            consider(2);
        }
        if year.as_deref() == Some(tok.as_str()) {
            consider(3);
        }
        if let Some(day) = &day {
            let stripped = tok.trim_end_matches(|c: char| c.is_ascii_alphabetic());
            if stripped == day && (stripped.len() < tok.len() || tok == day) {
                consider(4);
            }
        }
        for (attr, score) in [(&weekday, 5), (&season, 6), (&dayperiod, 6)] {
            if attr.as_deref().is_some_and(|a| a == lemma || a == tok) {
                consider(score);
            }
        }
    }
    best
}

fn dates(ctx: &mut RuleCtx<'_>) {
    let amr = ctx.amr();
    let entities: Vec<NodeId> = ctx
        .free_nodes()
        .into_iter()
        .filter(|&n| amr.label(n) == "date-entity")
        .collect();
    if entities.is_empty() {
        return;
    }
    let spans = ctx.free_spans();
    let matches: Vec<Vec<(usize, u8)>> = entities
        .iter()
        .map(|&d| {
            spans
                .iter()
                .filter_map(|&s| date_match(ctx, d, s).map(|q| (s, q)))
                .collect()
        })
        .collect();
    for (i, &d) in entities.iter().enumerate() {
        // spans claimed by no other date entity, best quality first
        let mut own: Vec<(usize, u8)> = matches[i]
            .iter()
            .copied()
            .filter(|&(s, _)| {
                matches
                    .iter()
                    .enumerate()
                    .all(|(j, m)| j == i || m.iter().all(|&(t, _)| t != s))
            })
            .collect();
        own.sort_by_key(|&(s, q)| (q, s));
        let Some(&(_, best)) = own.first() else { continue };
        if own.iter().filter(|&&(_, q)| q == best).count() > 1 {
            continue;
        }
        ctx.align(own[0].0, BTreeSet::from([d]), "english-date");
    }
}
