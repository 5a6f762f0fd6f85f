//! Dictionary entity linking.
//!
//! Every lowercased synonym is a pattern in one Aho-Corasick automaton.
//! All (possibly overlapping) occurrences inside a sentence are collected,
//! occurrences that touch a letter or digit on either side are dropped, and
//! the survivors are selected greedily: longest first, then smallest entity
//! id, then leftmost. A selected occurrence blocks every overlapping one.

use std::collections::HashMap;

use aho_corasick::{AhoCorasick, MatchKind};

use super::segment::{DocumentText, Sentence};
use crate::graph::EntityMention;
use crate::vocabulary::Vocabulary;

pub struct EntityLinker {
    automaton: Option<AhoCorasick>,
    /// Entity ids sharing each pattern, smallest first.
    pattern_entities: Vec<Vec<String>>,
}

struct Candidate {
    /// Character offsets relative to the sentence.
    start: usize,
    end: usize,
    pattern: usize,
}

impl EntityLinker {
    pub fn new(vocab: &Vocabulary) -> Self {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut patterns: Vec<String> = Vec::new();
        let mut pattern_entities: Vec<Vec<String>> = Vec::new();
        for entity in vocab.entities() {
            for syn in &entity.synonyms {
                let lower = syn.to_lowercase();
                let slot = *index.entry(lower.clone()).or_insert_with(|| {
                    patterns.push(lower);
                    pattern_entities.push(Vec::new());
                    patterns.len() - 1
                });
                if !pattern_entities[slot].contains(&entity.id) {
                    pattern_entities[slot].push(entity.id.clone());
                }
            }
        }
        for ids in &mut pattern_entities {
            ids.sort();
        }
        let automaton = (!patterns.is_empty()).then(|| {
            AhoCorasick::builder()
                .match_kind(MatchKind::Standard)
                .build(&patterns)
                .expect("synonym automaton")
        });
        EntityLinker {
            automaton,
            pattern_entities,
        }
    }

    pub fn link(&self, doc: &DocumentText) -> Vec<EntityMention> {
        let mut out = Vec::new();
        if self.automaton.is_none() {
            return out;
        }
        for (si, sentence) in doc.sentences.iter().enumerate() {
            self.link_sentence(si, sentence, &mut out);
        }
        out
    }

    fn link_sentence(
        &self,
        sentence_idx: usize,
        sentence: &Sentence,
        out: &mut Vec<EntityMention>,
    ) {
        let Some(ac) = &self.automaton else { return };
        let original: Vec<char> = sentence.text.chars().collect();

        // Lowercasing may change byte lengths; remember the source character
        // of every lowercased byte.
        let mut lowered = String::with_capacity(sentence.text.len());
        let mut source_char: Vec<usize> = Vec::with_capacity(sentence.text.len());
        for (ci, c) in original.iter().enumerate() {
            for lc in c.to_lowercase() {
                lowered.push(lc);
                source_char.resize(lowered.len(), ci);
            }
        }

        let mut candidates: Vec<Candidate> = ac
            .find_overlapping_iter(&lowered)
            .filter_map(|m| {
                let start = source_char[m.start()];
                let end = source_char[m.end() - 1] + 1;
                let alnum = |i: usize| original.get(i).is_some_and(|c| c.is_alphanumeric());
                let left_ok = start == 0 || !(alnum(start - 1) && alnum(start));
                let right_ok = !(alnum(end) && alnum(end - 1));
                (left_ok && right_ok).then_some(Candidate {
                    start,
                    end,
                    pattern: m.pattern().as_usize(),
                })
            })
            .collect();

        candidates.sort_by(|a, b| {
            (b.end - b.start)
                .cmp(&(a.end - a.start))
                .then_with(|| {
                    self.pattern_entities[a.pattern][0].cmp(&self.pattern_entities[b.pattern][0])
                })
                .then(a.start.cmp(&b.start))
        });

        let mut taken = vec![false; original.len()];
        let mut selected: Vec<EntityMention> = Vec::new();
        for c in candidates {
            if taken[c.start..c.end].iter().any(|&t| t) {
                continue;
            }
            taken[c.start..c.end].iter_mut().for_each(|t| *t = true);
            selected.push(EntityMention {
                entity_id: self.pattern_entities[c.pattern][0].clone(),
                sentence_idx,
                char_span: sentence.chars.start + c.start..sentence.chars.start + c.end,
                surface: original[c.start..c.end].iter().collect(),
            });
        }
        selected.sort_by_key(|m| m.char_span.start);
        out.extend(selected);
    }
}
