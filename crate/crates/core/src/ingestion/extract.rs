use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{EntityMention, ExtractionMethod, Statement, ASSOCIATED};

/// Confidence attached to every co-occurrence statement unless configured.
pub const DEFAULT_COOCCURRENCE_CONFIDENCE: f64 = 0.3;

/// One `associated` statement per unordered pair of distinct entities
/// mentioned in the same sentence. A pair co-occurring in k sentences
/// yields k statements. Endpoints are in canonical (lexicographic) order.
pub fn extract_cooccurrence_statements(
    mentions: &[EntityMention],
    confidence: f64,
) -> Vec<Statement> {
    let mut by_sentence: BTreeMap<usize, BTreeSet<&str>> = BTreeMap::new();
    for m in mentions {
        by_sentence
            .entry(m.sentence_idx)
            .or_default()
            .insert(m.entity_id.as_str());
    }

    let mut out = Vec::new();
    for (&sentence_idx, entities) in &by_sentence {
        let entities: Vec<&str> = entities.iter().copied().collect();
        for (i, a) in entities.iter().enumerate() {
            for b in &entities[i + 1..] {
                out.push(Statement {
                    subject_id: (*a).to_owned(),
                    predicate: ASSOCIATED.to_owned(),
                    object_id: (*b).to_owned(),
                    sentence_idx,
                    confidence,
                    method: ExtractionMethod::Cooccurrence,
                });
            }
        }
    }
    out
}
