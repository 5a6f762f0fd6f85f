//! Per-document statement graphs.
//!
//! Every document keeps its own small graph; graphs are never merged, so
//! each statement stays attached to the context it was extracted from.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

/// Predicate emitted for sentence co-occurrence. Symmetric.
pub const ASSOCIATED: &str = "associated";

pub fn is_symmetric(predicate: &str) -> bool {
    predicate == ASSOCIATED
}

/// Canonical identity of an interaction across documents.
///
/// Endpoints of symmetric predicates are stored in lexicographic order, so
/// a pair never yields two keys. Field order drives the derived `Ord`,
/// which is the ranking tie-break.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey {
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

impl EdgeKey {
    pub fn new(
        subject: impl Into<String>,
        predicate: impl Into<String>,
        object: impl Into<String>,
    ) -> Self {
        let (mut subject, predicate, mut object) =
            (subject.into(), predicate.into(), object.into());
        if is_symmetric(&predicate) && object < subject {
            std::mem::swap(&mut subject, &mut object);
        }
        EdgeKey {
            subject,
            predicate,
            object,
        }
    }

    pub fn touches(&self, entity: &str) -> bool {
        self.subject == entity || self.object == entity
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.subject, self.predicate, self.object)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtractionMethod {
    Cooccurrence,
    Imported,
}

/// A linked occurrence of an entity in a document's text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityMention {
    pub entity_id: String,
    pub sentence_idx: usize,
    /// Half-open character offsets into the title + body text.
    pub char_span: Range<usize>,
    pub surface: String,
}

/// One extracted (subject, predicate, object) assertion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Statement {
    pub subject_id: String,
    pub predicate: String,
    pub object_id: String,
    pub sentence_idx: usize,
    pub confidence: f64,
    pub method: ExtractionMethod,
}

impl Statement {
    pub fn key(&self) -> EdgeKey {
        EdgeKey::new(&self.subject_id, &self.predicate, &self.object_id)
    }
}

/// Aggregate of all extractions of one edge within one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeStats {
    pub freq: u32,
    pub max_confidence: f64,
    /// Method of the extraction that supplied `max_confidence`.
    pub method: ExtractionMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentGraph {
    pub doc_id: String,
    pub source: String,
    pub num_sentences: usize,
    pub num_statement_extractions: usize,
    #[serde(with = "edge_list")]
    pub edges: BTreeMap<EdgeKey, EdgeStats>,
    pub mentions: Vec<EntityMention>,
    /// First and last sentence index of every entity in the document.
    pub entity_first_last: BTreeMap<String, (usize, usize)>,
}

impl DocumentGraph {
    /// Aggregates statements into canonical edges and records the sentence
    /// span of every entity. Statement endpoints count as occurrences at the
    /// statement's sentence, so every edge endpoint has a span even when an
    /// imported statement has no matching mention.
    pub fn build(
        doc_id: impl Into<String>,
        source: impl Into<String>,
        num_sentences: usize,
        mentions: Vec<EntityMention>,
        statements: &[Statement],
    ) -> Self {
        let mut first_last: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        let mut see = |entity: &str, s: usize| {
            first_last
                .entry(entity.to_owned())
                .and_modify(|(lo, hi)| {
                    *lo = (*lo).min(s);
                    *hi = (*hi).max(s);
                })
                .or_insert((s, s));
        };
        for m in &mentions {
            see(&m.entity_id, m.sentence_idx);
        }

        let mut edges: BTreeMap<EdgeKey, EdgeStats> = BTreeMap::new();
        for st in statements {
            see(&st.subject_id, st.sentence_idx);
            see(&st.object_id, st.sentence_idx);
            edges
                .entry(st.key())
                .and_modify(|e| {
                    e.freq += 1;
                    if st.confidence > e.max_confidence {
                        e.max_confidence = st.confidence;
                        e.method = st.method;
                    }
                })
                .or_insert(EdgeStats {
                    freq: 1,
                    max_confidence: st.confidence,
                    method: st.method,
                });
        }

        DocumentGraph {
            doc_id: doc_id.into(),
            source: source.into(),
            num_sentences,
            num_statement_extractions: statements.len(),
            edges,
            mentions,
            entity_first_last: first_last,
        }
    }

    pub fn contains_entity(&self, entity: &str) -> bool {
        self.entity_first_last.contains_key(entity)
    }

    /// Checks the structural invariants; returns the first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        let total: u64 = self.edges.values().map(|e| e.freq as u64).sum();
        if total != self.num_statement_extractions as u64 {
            return Err(format!(
                "edge frequencies sum to {total}, expected {}",
                self.num_statement_extractions
            ));
        }
        for (key, stats) in &self.edges {
            if key.subject == key.object {
                return Err(format!("self-loop {key}"));
            }
            if is_symmetric(&key.predicate) && key.subject > key.object {
                return Err(format!("non-canonical symmetric edge {key}"));
            }
            for end in [&key.subject, &key.object] {
                if !self.entity_first_last.contains_key(end.as_str()) {
                    return Err(format!("edge endpoint {end} has no sentence span"));
                }
            }
            if stats.freq == 0 || !(stats.max_confidence > 0.0 && stats.max_confidence <= 1.0) {
                return Err(format!("invalid stats on {key}"));
            }
        }
        for (entity, &(first, last)) in &self.entity_first_last {
            if first > last || last >= self.num_sentences {
                return Err(format!("bad sentence span for {entity}"));
            }
        }
        Ok(())
    }
}

/// Serializes the edge map as a list, since JSON object keys must be strings.
mod edge_list {
    use super::{EdgeKey, EdgeStats};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    #[derive(Serialize, Deserialize)]
    struct Row {
        #[serde(flatten)]
        key: EdgeKey,
        #[serde(flatten)]
        stats: EdgeStats,
    }

    #[derive(Serialize)]
    struct RowRef<'a> {
        #[serde(flatten)]
        key: &'a EdgeKey,
        #[serde(flatten)]
        stats: &'a EdgeStats,
    }

    pub fn serialize<S: Serializer>(
        edges: &BTreeMap<EdgeKey, EdgeStats>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        s.collect_seq(edges.iter().map(|(key, stats)| RowRef { key, stats }))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<EdgeKey, EdgeStats>, D::Error> {
        let rows = Vec::<Row>::deserialize(d)?;
        let len = rows.len();
        let map: BTreeMap<_, _> = rows.into_iter().map(|r| (r.key, r.stats)).collect();
        if map.len() != len {
            return Err(serde::de::Error::custom("duplicate edge in document graph"));
        }
        Ok(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cooc(a: &str, b: &str, s: usize, c: f64) -> Statement {
        Statement {
            subject_id: a.into(),
            predicate: ASSOCIATED.into(),
            object_id: b.into(),
            sentence_idx: s,
            confidence: c,
            method: ExtractionMethod::Cooccurrence,
        }
    }

    fn mention(e: &str, s: usize) -> EntityMention {
        EntityMention {
            entity_id: e.into(),
            sentence_idx: s,
            char_span: 0..1,
            surface: e.into(),
        }
    }

    #[test]
    fn symmetric_keys_are_canonical() {
        assert_eq!(
            EdgeKey::new("b", ASSOCIATED, "a"),
            EdgeKey::new("a", ASSOCIATED, "b")
        );
        let directed = EdgeKey::new("b", "treats", "a");
        assert_eq!(directed.subject, "b");
    }

    #[test]
    fn aggregation_counts_and_max() {
        let mut imported = cooc("x", "y", 1, 0.9);
        imported.method = ExtractionMethod::Imported;
        let g = DocumentGraph::build(
            "d",
            "PubMed",
            4,
            vec![mention("x", 0), mention("x", 3), mention("y", 1)],
            &[cooc("x", "y", 0, 0.3), cooc("y", "x", 3, 0.3), imported],
        );
        assert_eq!(g.edges.len(), 1);
        let stats = &g.edges[&EdgeKey::new("x", ASSOCIATED, "y")];
        assert_eq!(stats.freq, 3);
        assert_eq!(stats.max_confidence, 0.9);
        assert_eq!(stats.method, ExtractionMethod::Imported);
        assert_eq!(g.entity_first_last["x"], (0, 3));
        assert_eq!(g.entity_first_last["y"], (0, 3));
        g.check_invariants().unwrap();
    }

    #[test]
    fn empty_graph() {
        let g = DocumentGraph::build("d", "s", 2, vec![mention("x", 1)], &[]);
        assert!(g.edges.is_empty());
        assert_eq!(g.num_statement_extractions, 0);
        g.check_invariants().unwrap();
    }

    #[test]
    fn json_round_trip() {
        let g = DocumentGraph::build(
            "d",
            "s",
            2,
            vec![mention("a", 0)],
            &[cooc("a", "b", 1, 0.3)],
        );
        let json = serde_json::to_string(&g).unwrap();
        let back: DocumentGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(g, back);
    }
}
