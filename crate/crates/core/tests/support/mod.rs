//! Naive reference implementation and random test cases.
//!
//! The oracle only trusts sentence segmentation and entity linking. Keyword
//! translation, statement extraction, retrieval, scoring, ranking and top-k
//! selection are recomputed here by brute force from raw mentions.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use narrative_core::ingestion::link_entities;
use narrative_core::{Entity, EntityType, RawDocument, Vocabulary};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Edge = (String, String, String);

#[derive(Debug, Clone)]
pub struct OracleDoc {
    pub source: String,
    pub doc_id: String,
    pub date: Option<NaiveDate>,
    pub classes: Vec<String>,
    pub sentences: usize,
    /// (entity, sentence) per mention.
    pub mentions: Vec<(String, usize)>,
    /// One entry per extraction: (edge, sentence).
    pub statements: Vec<(Edge, usize)>,
    pub confidence: f64,
}

impl OracleDoc {
    pub fn has_entity(&self, id: &str) -> bool {
        self.mentions.iter().any(|(e, _)| e == id)
    }

    pub fn freq(&self, e: &Edge) -> usize {
        self.statements.iter().filter(|(k, _)| k == e).count()
    }

    fn span(&self, id: &str) -> (usize, usize) {
        let hits = self
            .mentions
            .iter()
            .filter(|(e, _)| e == id)
            .map(|&(_, s)| s)
            .chain(
                self.statements
                    .iter()
                    .filter(|(k, _)| k.0 == id || k.2 == id)
                    .map(|&(_, s)| s),
            );
        let (mut lo, mut hi) = (usize::MAX, 0);
        for s in hits {
            lo = lo.min(s);
            hi = hi.max(s);
        }
        (lo, hi)
    }
}

pub fn edge(a: &str, b: &str) -> Edge {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    (a.to_owned(), "associated".to_owned(), b.to_owned())
}

pub fn oracle_docs(vocab: &Vocabulary, raws: &[RawDocument], confidence: f64) -> Vec<OracleDoc> {
    let mut out: Vec<OracleDoc> = raws
        .iter()
        .map(|raw| {
            let sentences = raw.text().sentences.len();
            let mentions: Vec<(String, usize)> = link_entities(raw, vocab)
                .into_iter()
                .map(|m| (m.entity_id, m.sentence_idx))
                .collect();
            let mut statements = Vec::new();
            for s in 0..sentences {
                let ents: BTreeSet<&str> = mentions
                    .iter()
                    .filter(|m| m.1 == s)
                    .map(|m| m.0.as_str())
                    .collect();
                let ents: Vec<&str> = ents.into_iter().collect();
                for i in 0..ents.len() {
                    for j in i + 1..ents.len() {
                        statements.push((edge(ents[i], ents[j]), s));
                    }
                }
            }
            OracleDoc {
                source: raw.source.clone(),
                doc_id: raw.doc_id.clone(),
                date: raw.publication_date,
                classes: raw.classes.clone(),
                sentences,
                mentions,
                statements,
                confidence,
            }
        })
        .collect();
    out.sort_by(|a, b| (&a.source, &a.doc_id).cmp(&(&b.source, &b.doc_id)));
    out
}

/// Every entity with a synonym containing all whitespace terms, ignoring case.
pub fn translate(vocab: &Vocabulary, keyword: &str) -> BTreeSet<String> {
    let terms: Vec<String> = keyword.split_whitespace().map(str::to_lowercase).collect();
    if terms.is_empty() {
        return BTreeSet::new();
    }
    vocab
        .entities()
        .iter()
        .filter(|e| {
            e.synonyms.iter().any(|s| {
                let s = s.to_lowercase();
                terms.iter().all(|t| s.contains(t.as_str()))
            })
        })
        .map(|e| e.id.clone())
        .collect()
}

pub fn df(docs: &[OracleDoc], e: &Edge) -> usize {
    docs.iter().filter(|d| d.freq(e) > 0).count()
}

pub fn score(docs: &[OracleDoc], e: &Edge, d: &OracleDoc) -> f64 {
    let f = d.freq(e);
    if f == 0 {
        return 0.0;
    }
    let tf = f as f64 / d.statements.len() as f64;
    let idf = (1.0 + docs.len() as f64 / df(docs, e) as f64).ln();
    let cov = [&e.0, &e.2]
        .iter()
        .map(|id| {
            let (lo, hi) = d.span(id);
            (hi - lo + 1) as f64 / d.sentences as f64
        })
        .sum::<f64>()
        / 2.0;
    tf * idf * cov * d.confidence
}

#[derive(Debug, Clone, Default)]
pub struct OracleFilter {
    pub sources: Option<BTreeSet<String>>,
    pub classes: Option<BTreeSet<String>>,
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
}

impl OracleFilter {
    fn admits(&self, d: &OracleDoc) -> bool {
        if let Some(s) = &self.sources {
            if !s.contains(&d.source) {
                return false;
            }
        }
        if let Some(c) = &self.classes {
            if !d.classes.iter().any(|x| c.contains(x)) {
                return false;
            }
        }
        if self.from.is_some() || self.to.is_some() {
            let Some(date) = d.date else { return false };
            if self.from.is_some_and(|f| date < f) || self.to.is_some_and(|t| date > t) {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub searched: BTreeSet<String>,
    /// Positions into the sorted document list.
    pub retrieved: Vec<usize>,
    /// Every incident edge with its summed score, ranked.
    pub ranked: Vec<(Edge, f64)>,
    /// The selected edges, ranked.
    pub selected: Vec<(Edge, f64)>,
}

pub fn mine(
    vocab: &Vocabulary,
    docs: &[OracleDoc],
    keywords: &[&str],
    filter: &OracleFilter,
    top_k: usize,
) -> OracleResult {
    let sets: Vec<BTreeSet<String>> = keywords.iter().map(|k| translate(vocab, k)).collect();
    let searched: BTreeSet<String> = sets.iter().flatten().cloned().collect();
    let retrieved: Vec<usize> = (0..docs.len())
        .filter(|&i| {
            sets.iter()
                .all(|set| set.iter().any(|id| docs[i].has_entity(id)))
        })
        .filter(|&i| filter.admits(&docs[i]))
        .collect();

    let mut totals: BTreeMap<Edge, f64> = BTreeMap::new();
    for &i in &retrieved {
        let d = &docs[i];
        let present: BTreeSet<&Edge> = d.statements.iter().map(|(e, _)| e).collect();
        for e in present {
            if searched.contains(&e.0) || searched.contains(&e.2) {
                *totals.entry(e.clone()).or_insert(0.0) += score(docs, e, d);
            }
        }
    }
    let mut ranked: Vec<(Edge, f64)> = totals.into_iter().collect();
    // Stable sort over key-ordered input gives key order on ties.
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());

    let mut chosen: BTreeSet<Edge> = BTreeSet::new();
    for s in &searched {
        ranked
            .iter()
            .filter(|(e, _)| &e.0 == s || &e.2 == s)
            .take(top_k)
            .for_each(|(e, _)| {
                chosen.insert(e.clone());
            });
    }
    let selected = ranked
        .iter()
        .filter(|(e, _)| chosen.contains(e))
        .cloned()
        .collect();
    OracleResult {
        searched,
        retrieved,
        ranked,
        selected,
    }
}

const WORDS: [&str; 12] = [
    "alpha", "beta", "gamma", "delta", "kinase", "receptor", "syndrome", "factor", "omega", "zeta",
    "sigma", "theta",
];
const FILLER: [&str; 10] = [
    "the", "of", "and", "was", "in", "with", "study", "cells", "patients", "dose",
];

/// A random corpus case: vocabulary, documents and a translatable query.
#[derive(Debug, Clone)]
pub struct Case {
    pub vocab: Vocabulary,
    pub docs: Vec<RawDocument>,
    pub keywords: Vec<String>,
}

fn random_name(rng: &mut impl Rng) -> String {
    let words = rng.gen_range(1..=2);
    (0..words)
        .map(|_| *WORDS.choose(rng).unwrap())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn random_vocab(rng: &mut impl Rng, max_entities: usize) -> Vocabulary {
    let n = rng.gen_range(2..=max_entities);
    let entities = (0..n)
        .map(|i| {
            let preferred = random_name(rng);
            let synonyms: Vec<String> = (0..rng.gen_range(0..=2))
                .map(|_| random_name(rng))
                .collect();
            Entity::new(
                format!("E:{i:02}"),
                preferred,
                EntityType::ALL[rng.gen_range(0..EntityType::ALL.len())],
                synonyms,
            )
        })
        .collect();
    Vocabulary::from_entities(entities).unwrap()
}

pub fn random_case(
    rng: &mut impl Rng,
    max_docs: usize,
    max_entities: usize,
    max_sentences: usize,
) -> Case {
    let vocab = random_vocab(rng, max_entities);
    let n_docs = rng.gen_range(1..=max_docs);
    let docs = (0..n_docs)
        .map(|i| {
            let sentences = rng.gen_range(1..=max_sentences);
            let rendered: Vec<String> = (0..sentences)
                .map(|_| {
                    let mut words: Vec<String> = (0..rng.gen_range(1..5))
                        .map(|_| FILLER.choose(rng).unwrap().to_string())
                        .collect();
                    for _ in 0..rng.gen_range(0..=3) {
                        let e = vocab.entities().choose(rng).unwrap();
                        let s = e.synonyms.choose(rng).unwrap().clone();
                        let at = rng.gen_range(0..=words.len());
                        words.insert(at, s);
                    }
                    format!("{}.", words.join(" "))
                })
                .collect();
            RawDocument {
                doc_id: format!("{i}"),
                source: ["A", "B"][rng.gen_range(0..2)].to_owned(),
                title: rendered[0].clone(),
                body: rendered[1..].join(" "),
                publication_date: rng.gen_bool(0.8).then(|| {
                    NaiveDate::from_ymd_opt(
                        2000 + rng.gen_range(0..20),
                        1 + rng.gen_range(0..12),
                        1,
                    )
                    .unwrap()
                }),
                classes: ["X", "Y"]
                    .iter()
                    .filter(|_| rng.gen_bool(0.4))
                    .map(|c| c.to_string())
                    .collect(),
                annotations: None,
            }
        })
        .collect();
    let keywords = (0..rng.gen_range(1..=3))
        .map(|_| {
            let e = vocab.entities().choose(rng).unwrap();
            let syn = e.synonyms.choose(rng).unwrap();
            let word = syn.split_whitespace().collect::<Vec<_>>();
            let word = word.choose(rng).unwrap();
            // Sometimes a prefix, to hit several entities at once.
            let cut = rng.gen_range(3..=word.len());
            word[..cut].to_string()
        })
        .collect();
    Case {
        vocab,
        docs,
        keywords,
    }
}
