//! Pattern output formats.
//!
//! The graph serialization is JSON with a fixed field order and scores
//! rounded to six decimals, so identical inputs give identical bytes.

use std::fmt::Write as _;

use serde::Serialize;

use crate::pattern::NarrativePattern;
use crate::vocabulary::{EntityType, Vocabulary};

pub const SCHEMA_VERSION: u32 = 1;

pub fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

#[derive(Debug, Serialize)]
pub struct NodeView<'a> {
    pub id: &'a str,
    #[serde(rename = "type")]
    pub entity_type: EntityType,
    pub name: &'a str,
    pub is_searched: bool,
}

#[derive(Debug, Serialize)]
pub struct EdgeView<'a> {
    pub subject: &'a str,
    pub predicate: &'a str,
    pub object: &'a str,
    pub fscore: f64,
    pub supporting_doc_count: usize,
}

#[derive(Debug, Serialize)]
pub struct PatternView<'a> {
    pub schema_version: u32,
    pub searched_entities: Vec<&'a str>,
    pub retrieved_doc_count: usize,
    pub nodes: Vec<NodeView<'a>>,
    pub edges: Vec<EdgeView<'a>>,
}

impl<'a> PatternView<'a> {
    pub fn new(p: &'a NarrativePattern) -> Self {
        PatternView {
            schema_version: SCHEMA_VERSION,
            searched_entities: p.searched_entities.iter().map(String::as_str).collect(),
            retrieved_doc_count: p.retrieved_doc_count,
            nodes: p
                .nodes
                .iter()
                .map(|n| NodeView {
                    id: &n.id,
                    entity_type: n.entity_type,
                    name: &n.name,
                    is_searched: n.is_searched,
                })
                .collect(),
            edges: p
                .edges
                .iter()
                .map(|e| EdgeView {
                    subject: &e.edge.subject,
                    predicate: &e.edge.predicate,
                    object: &e.edge.object,
                    fscore: round6(e.fscore),
                    supporting_doc_count: e.supporting_docs.len(),
                })
                .collect(),
        }
    }
}

pub fn pattern_to_json(p: &NarrativePattern) -> String {
    serde_json::to_string(&PatternView::new(p)).expect("pattern serializes")
}

/// Human-readable ranked edge table.
pub fn pattern_to_text(p: &NarrativePattern, vocab: &Vocabulary) -> String {
    fn display<'a>(vocab: &'a Vocabulary, id: &'a str) -> &'a str {
        vocab.get(id).map_or(id, |e| e.preferred_name.as_str())
    }
    let name = |id| display(vocab, id);
    let mut out = String::new();
    let _ = writeln!(out, "searched entities ({}):", p.searched_entities.len());
    for id in &p.searched_entities {
        let _ = writeln!(out, "  {id}  {}", name(id));
    }
    let _ = writeln!(out, "retrieved documents: {}", p.retrieved_doc_count);
    if p.edges.is_empty() {
        let _ = writeln!(out, "no edges");
        return out;
    }
    let _ = writeln!(out, "{:>4}  {:>10}  {:>5}  edge", "rank", "fscore", "docs");
    for (i, e) in p.edges.iter().enumerate() {
        let _ = writeln!(
            out,
            "{:>4}  {:>10.6}  {:>5}  {} [{}] -{}- {} [{}]",
            i + 1,
            e.fscore,
            e.supporting_docs.len(),
            name(&e.edge.subject),
            e.edge.subject,
            e.edge.predicate,
            name(&e.edge.object),
            e.edge.object,
        );
    }
    out
}
