//! Reading and writing PENMAN notation.
//!
//! Parsing happens in two passes. The first builds a syntax tree and collects
//! variable definitions; the second walks that tree in source order, merging
//! repeated variable mentions into one node and turning the remaining bare
//! symbols into constant nodes.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use super::graph::{AmrGraph, Edge, Node, NodeId, NodeKind, Role};
use crate::error::{PenmanError, PenmanErrorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Slash,
    Role(String),
    Symbol(String),
    Quoted(String),
}

fn error(kind: PenmanErrorKind, pos: Pos) -> PenmanError {
    PenmanError {
        kind,
        line: pos.line,
        column: pos.column,
    }
}

/// Splits off `# ::key value` metadata lines. Returns the metadata and the
/// body with comment lines blanked out, so positions stay meaningful.
fn split_metadata(text: &str) -> (Vec<(String, String)>, String) {
    let mut meta = Vec::new();
    let mut body = String::with_capacity(text.len());
    for line in text.lines() {
        let trimmed = line.trim_start();
        if let Some(comment) = trimmed.strip_prefix('#') {
            for field in comment.split("::").skip(1) {
                let field = field.trim();
                if field.is_empty() {
                    continue;
                }
                let (key, value) = field.split_once(char::is_whitespace).unwrap_or((field, ""));
                meta.push((key.to_string(), value.trim().to_string()));
            }
            body.push('\n');
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    (meta, body)
}

fn lex(body: &str) -> Result<Vec<(Tok, Pos)>, PenmanError> {
    let mut out = Vec::new();
    let mut chars = body.chars().peekable();
    let mut line = 1;
    let mut column = 1;
    let is_delim = |c: char| c.is_whitespace() || c == '(' || c == ')';

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
            }
            '(' => {
                chars.next();
                column += 1;
                out.push((Tok::Open, pos));
            }
            ')' => {
                chars.next();
                column += 1;
                out.push((Tok::Close, pos));
            }
            '/' => {
                chars.next();
                column += 1;
                out.push((Tok::Slash, pos));
            }
            '"' => {
                chars.next();
                column += 1;
                let mut s = String::new();
                let mut closed = false;
                while let Some(c) = chars.next() {
                    column += 1;
                    match c {
                        '\\' => {
                            if let Some(escaped) = chars.next() {
                                column += 1;
                                s.push(escaped);
                            }
                        }
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\n' => {
                            line += 1;
                            column = 1;
                            s.push(c);
                        }
                        _ => s.push(c),
                    }
                }
                if !closed {
                    return Err(error(PenmanErrorKind::Unexpected("unterminated string".into()), pos));
                }
                skip_alignment_marker(&mut chars, &mut column, is_delim);
                out.push((Tok::Quoted(s), pos));
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if is_delim(c) || (c == '/' && !s.is_empty() && !s.starts_with(':')) {
                        break;
                    }
                    s.push(c);
                    chars.next();
                    column += 1;
                }
                let s = strip_alignment(&s).to_string();
                if let Some(role) = s.strip_prefix(':') {
                    if role.is_empty() {
                        return Err(error(PenmanErrorKind::Unexpected("empty role label".into()), pos));
                    }
                    out.push((Tok::Role(s), pos));
                } else {
                    out.push((Tok::Symbol(s), pos));
                }
            }
        }
    }
    Ok(out)
}

/// Drops surface alignment markers such as `~e.4` or `~3`.
fn strip_alignment(s: &str) -> &str {
    match s.find('~') {
        Some(i) if i > 0 => {
            let rest = &s[i + 1..];
            let rest = rest.strip_prefix("e.").unwrap_or(rest);
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit() || b == b',') {
                &s[..i]
            } else {
                s
            }
        }
        _ => s,
    }
}

fn skip_alignment_marker(
    chars: &mut std::iter::Peekable<std::str::Chars<'_>>,
    column: &mut usize,
    is_delim: impl Fn(char) -> bool,
) {
    if chars.peek() == Some(&'~') {
        while let Some(&c) = chars.peek() {
            if is_delim(c) {
                break;
            }
            chars.next();
            *column += 1;
        }
    }
}

#[derive(Debug)]
struct AstNode {
    var: String,
    concept: String,
    pos: Pos,
    children: Vec<(String, AstValue)>,
}

#[derive(Debug)]
enum AstValue {
    Node(AstNode),
    Symbol(String, Pos),
    Quoted(String),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn node(&mut self) -> Result<AstNode, PenmanError> {
        let open = self.pos();
        match self.next() {
            Some((Tok::Open, _)) => {}
            Some((_, p)) => return Err(error(PenmanErrorKind::Unexpected("expected `(`".into()), p)),
            None => return Err(error(PenmanErrorKind::UnbalancedParens, open)),
        }
        let var = match self.next() {
            Some((Tok::Symbol(s), _)) => s,
            Some((_, p)) => return Err(error(PenmanErrorKind::Unexpected("expected a variable".into()), p)),
            None => return Err(error(PenmanErrorKind::UnbalancedParens, open)),
        };
        match self.next() {
            Some((Tok::Slash, _)) => {}
            Some((_, p)) => {
                return Err(error(
                    PenmanErrorKind::Unexpected(format!("expected `/` after variable `{var}`")),
                    p,
                ))
            }
            None => return Err(error(PenmanErrorKind::UnbalancedParens, open)),
        }
        let concept = match self.next() {
            Some((Tok::Symbol(s), _)) | Some((Tok::Quoted(s), _)) => s,
            Some((_, p)) => {
                return Err(error(
                    PenmanErrorKind::Unexpected(format!("missing concept for `{var}`")),
                    p,
                ))
            }
            None => return Err(error(PenmanErrorKind::UnbalancedParens, open)),
        };
        let mut children = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Close) => {
                    self.next();
                    break;
                }
                Some(Tok::Role(_)) => {
                    let Some((Tok::Role(role), role_pos)) = self.next() else {
                        unreachable!()
                    };
                    let value = match self.peek() {
                        Some(Tok::Open) => AstValue::Node(self.node()?),
                        Some(Tok::Symbol(_)) => {
                            let Some((Tok::Symbol(s), p)) = self.next() else {
                                unreachable!()
                            };
                            AstValue::Symbol(s, p)
                        }
                        Some(Tok::Quoted(_)) => {
                            let Some((Tok::Quoted(s), _)) = self.next() else {
                                unreachable!()
                            };
                            AstValue::Quoted(s)
                        }
                        None => return Err(error(PenmanErrorKind::UnbalancedParens, open)),
                        Some(_) => {
                            return Err(error(
                                PenmanErrorKind::Unexpected(format!("role `{role}` has no value")),
                                role_pos,
                            ))
                        }
                    };
                    children.push((role, value));
                }
                None => return Err(error(PenmanErrorKind::UnbalancedParens, open)),
                Some(_) => {
                    let p = self.pos();
                    return Err(error(PenmanErrorKind::Unexpected("expected a role or `)`".into()), p));
                }
            }
        }
        Ok(AstNode {
            var,
            concept,
            pos: open,
            children,
        })
    }
}

/// Symbols shaped like AMR variables (`x`, `p2`) are never read as constants.
fn looks_like_variable(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase()) && chars.all(|c| c.is_ascii_digit())
}

fn collect_definitions<'a>(node: &'a AstNode, defs: &mut HashMap<&'a str, &'a str>) -> Result<(), PenmanError> {
    if defs.insert(&node.var, &node.concept).is_some() {
        return Err(error(PenmanErrorKind::DuplicateConcept(node.var.clone()), node.pos));
    }
    for (_, value) in &node.children {
        if let AstValue::Node(child) = value {
            collect_definitions(child, defs)?;
        }
    }
    Ok(())
}

struct Builder<'a> {
    defs: HashMap<&'a str, &'a str>,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    ids: HashMap<String, NodeId>,
}

impl<'a> Builder<'a> {
    fn variable(&mut self, var: &str) -> NodeId {
        if let Some(&id) = self.ids.get(var) {
            return id;
        }
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(Node {
            name: var.to_string(),
            kind: NodeKind::Variable {
                concept: self.defs[var].to_string(),
            },
        });
        self.ids.insert(var.to_string(), id);
        id
    }

    fn constant(&mut self, parent: &str, ordinal: usize, literal: String, quoted: bool) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        let mut name = format!("{parent}.{ordinal}");
        while self.ids.contains_key(&name) {
            name.push('\'');
        }
        self.ids.insert(name.clone(), id);
        self.nodes.push(Node {
            name,
            kind: NodeKind::Constant { literal, quoted },
        });
        id
    }

    fn walk(&mut self, node: &AstNode) -> Result<NodeId, PenmanError> {
        let id = self.variable(&node.var);
        let mut constants = 0;
        for (role, value) in &node.children {
            let child = match value {
                AstValue::Node(child) => {
                    // Edge order is source order, so reserve the edge slot
                    // before descending.
                    let slot = self.edges.len();
                    self.edges.push(Edge {
                        parent: id,
                        role: Role::new(role.clone()),
                        child: id,
                    });
                    let child_id = self.walk(child)?;
                    self.edges[slot].child = child_id;
                    continue;
                }
                AstValue::Symbol(s, pos) => {
                    if self.defs.contains_key(s.as_str()) {
                        self.variable(s)
                    } else if looks_like_variable(s) {
                        return Err(error(PenmanErrorKind::DanglingVariable(s.clone()), *pos));
                    } else {
                        constants += 1;
                        self.constant(&node.var, constants, s.clone(), false)
                    }
                }
                AstValue::Quoted(s) => {
                    constants += 1;
                    self.constant(&node.var, constants, s.clone(), true)
                }
            };
            self.edges.push(Edge {
                parent: id,
                role: Role::new(role.clone()),
                child,
            });
        }
        Ok(id)
    }
}

/// Parses one PENMAN graph, optionally preceded by `# ::key value` lines.
/// The graph id comes from `::id` when present.
pub fn parse_penman(text: &str) -> Result<AmrGraph, PenmanError> {
    let (meta, body) = split_metadata(text);
    let toks = lex(&body)?;
    let end = Pos {
        line: body.lines().count().max(1),
        column: body.lines().last().map_or(1, |l| l.chars().count() + 1),
    };
    if toks.is_empty() {
        return Err(error(PenmanErrorKind::EmptyInput, Pos { line: 1, column: 1 }));
    }
    let mut parser = Parser { toks, at: 0, end };
    let ast = parser.node()?;
    if let Some((tok, pos)) = parser.next() {
        let kind = if tok == Tok::Close {
            PenmanErrorKind::UnbalancedParens
        } else {
            PenmanErrorKind::Unexpected("trailing content after the graph".into())
        };
        return Err(error(kind, pos));
    }

    let mut defs = HashMap::new();
    collect_definitions(&ast, &mut defs)?;
    let mut builder = Builder {
        defs,
        nodes: Vec::new(),
        edges: Vec::new(),
        ids: HashMap::new(),
    };
    let root = builder.walk(&ast)?;
    let id = meta
        .iter()
        .find(|(k, _)| k == "id")
        .map(|(_, v)| v.clone())
        .unwrap_or_default();
    Ok(AmrGraph::from_parts(id, meta, builder.nodes, builder.edges, root))
}

fn write_literal(out: &mut String, node: &Node) {
    match &node.kind {
        NodeKind::Constant { literal, quoted: true } => {
            out.push('"');
            for c in literal.chars() {
                if c == '"' || c == '\\' {
                    out.push('\\');
                }
                out.push(c);
            }
            out.push('"');
        }
        NodeKind::Constant { literal, .. } => out.push_str(literal),
        NodeKind::Variable { .. } => out.push_str(&node.name),
    }
}

/// Writes the graph in indented PENMAN. Each variable's concept is printed at
/// its first depth-first occurrence.
pub fn serialize_penman(graph: &AmrGraph) -> String {
    let mut out = String::new();
    let mut printed = HashSet::new();
    write_node(graph, graph.root(), 0, &mut printed, &mut out);
    out
}

fn write_node(graph: &AmrGraph, id: NodeId, depth: usize, printed: &mut HashSet<NodeId>, out: &mut String) {
    printed.insert(id);
    let node = graph.node(id);
    let _ = write!(out, "({} / {}", node.name, node.label());
    for &e in graph.outgoing(id) {
        let edge = graph.edge(e);
        out.push('\n');
        out.extend(std::iter::repeat_n(' ', 4 * (depth + 1)));
        let _ = write!(out, "{} ", edge.role);
        let child = graph.node(edge.child);
        if child.is_constant() {
            write_literal(out, child);
        } else if graph.tree_edge(edge.child) == Some(e) && !printed.contains(&edge.child) {
            write_node(graph, edge.child, depth + 1, printed, out);
        } else {
            out.push_str(&child.name);
        }
    }
    out.push(')');
}

/// Writes `# ::key value` metadata lines followed by the graph.
pub fn serialize_with_metadata(graph: &AmrGraph) -> String {
    let mut out = String::new();
    for (k, v) in graph.metadata() {
        let _ = writeln!(out, "# ::{k} {v}");
    }
    out.push_str(&serialize_penman(graph));
    out.push('\n');
    out
}
