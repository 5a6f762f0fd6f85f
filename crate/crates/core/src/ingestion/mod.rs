//! Raw documents to per-document statement graphs.
//!
//! Pipeline per document: segment title and body into sentences, link
//! vocabulary synonyms, emit sentence co-occurrence statements, aggregate
//! into a [`DocumentGraph`]. Records carrying `annotations` skip linking and
//! extraction; their mentions and statements are taken verbatim and marked
//! [`ExtractionMethod::Imported`].

mod extract;
mod linker;
mod segment;

use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use extract::{extract_cooccurrence_statements, DEFAULT_COOCCURRENCE_CONFIDENCE};
pub use linker::EntityLinker;
pub use segment::{segment_sentences, DocumentText, Sentence};

use crate::graph::{DocumentGraph, EntityMention, ExtractionMethod, Statement};
use crate::store::{CorpusStore, DocumentMeta, StoredDocument};
use crate::vocabulary::Vocabulary;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("malformed corpus record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("duplicate document {source_name}/{doc_id}")]
    DuplicateDocument { source_name: String, doc_id: String },
    #[error("co-occurrence confidence must lie in (0, 1], got {0}")]
    InvalidConfidence(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    pub doc_id: String,
    pub source: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub body: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub publication_date: Option<NaiveDate>,
    #[serde(default)]
    pub classes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotations: Option<Annotations>,
}

/// Externally extracted mentions and statements.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Annotations {
    #[serde(default)]
    pub mentions: Vec<AnnotatedMention>,
    #[serde(default)]
    pub statements: Vec<AnnotatedStatement>,
}

/// Character offsets into the title + body text (title, newline, body).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnotatedMention {
    pub entity_id: String,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnotatedStatement {
    pub subject: String,
    pub predicate: String,
    pub object: String,
    pub sentence_idx: usize,
    pub confidence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IngestConfig {
    pub cooccurrence_confidence: f64,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            cooccurrence_confidence: DEFAULT_COOCCURRENCE_CONFIDENCE,
        }
    }
}

impl IngestConfig {
    pub fn validate(&self) -> Result<(), IngestError> {
        let c = self.cooccurrence_confidence;
        if c > 0.0 && c <= 1.0 {
            Ok(())
        } else {
            Err(IngestError::InvalidConfidence(c))
        }
    }
}

impl RawDocument {
    pub fn text(&self) -> DocumentText {
        DocumentText::new(&self.title, &self.body)
    }

    fn meta(&self) -> DocumentMeta {
        DocumentMeta {
            doc_id: self.doc_id.clone(),
            source: self.source.clone(),
            title: self.title.clone(),
            publication_date: self.publication_date,
            classes: self.classes.clone(),
        }
    }
}

/// Links a single document. Builds a fresh automaton; prefer
/// [`EntityLinker`] when processing many documents.
pub fn link_entities(doc: &RawDocument, vocab: &Vocabulary) -> Vec<EntityMention> {
    EntityLinker::new(vocab).link(&doc.text())
}

pub fn build_document_graph(
    doc: &RawDocument,
    mentions: Vec<EntityMention>,
    statements: &[Statement],
) -> DocumentGraph {
    let sentences = doc.text().sentences.len();
    DocumentGraph::build(&doc.doc_id, &doc.source, sentences, mentions, statements)
}

/// Runs the full pipeline on one document.
pub fn process_document(
    doc: &RawDocument,
    linker: &EntityLinker,
    vocab: &Vocabulary,
    config: &IngestConfig,
) -> Result<StoredDocument, String> {
    if doc.doc_id.trim().is_empty() {
        return Err("empty doc_id".into());
    }
    let text = doc.text();
    let (mentions, statements) = match &doc.annotations {
        None => {
            let mentions = linker.link(&text);
            let statements =
                extract_cooccurrence_statements(&mentions, config.cooccurrence_confidence);
            (mentions, statements)
        }
        Some(ann) => imported(ann, &text, vocab)?,
    };
    let graph = DocumentGraph::build(
        &doc.doc_id,
        &doc.source,
        text.sentences.len(),
        mentions,
        &statements,
    );
    Ok(StoredDocument {
        meta: doc.meta(),
        graph,
    })
}

fn imported(
    ann: &Annotations,
    text: &DocumentText,
    vocab: &Vocabulary,
) -> Result<(Vec<EntityMention>, Vec<Statement>), String> {
    let known = |id: &str| {
        vocab
            .get(id)
            .map(|_| ())
            .ok_or_else(|| format!("unknown entity {id}"))
    };
    let chars: Vec<char> = text.text.chars().collect();
    let mut mentions = Vec::with_capacity(ann.mentions.len());
    for m in &ann.mentions {
        known(&m.entity_id)?;
        if m.start >= m.end || m.end > chars.len() {
            return Err(format!("mention span {}..{} out of bounds", m.start, m.end));
        }
        let span = m.start..m.end;
        let sentence_idx = text.sentence_of(&span).ok_or_else(|| {
            format!(
                "mention span {}..{} crosses a sentence boundary",
                m.start, m.end
            )
        })?;
        mentions.push(EntityMention {
            entity_id: m.entity_id.clone(),
            sentence_idx,
            surface: chars[span.clone()].iter().collect(),
            char_span: span,
        });
    }
    mentions
        .sort_by(|a, b| (a.char_span.start, &a.entity_id).cmp(&(b.char_span.start, &b.entity_id)));

    let mut statements = Vec::with_capacity(ann.statements.len());
    for s in &ann.statements {
        known(&s.subject)?;
        known(&s.object)?;
        if s.subject == s.object {
            return Err(format!(
                "statement on {} has identical endpoints",
                s.subject
            ));
        }
        if s.predicate.trim().is_empty() {
            return Err("statement with empty predicate".into());
        }
        if !(s.confidence > 0.0 && s.confidence <= 1.0) {
            return Err(format!("confidence {} outside (0, 1]", s.confidence));
        }
        if s.sentence_idx >= text.sentences.len() {
            return Err(format!("sentence_idx {} out of range", s.sentence_idx));
        }
        let key = crate::graph::EdgeKey::new(&s.subject, &s.predicate, &s.object);
        statements.push(Statement {
            subject_id: key.subject,
            predicate: key.predicate,
            object_id: key.object,
            sentence_idx: s.sentence_idx,
            confidence: s.confidence,
            method: ExtractionMethod::Imported,
        });
    }
    Ok((mentions, statements))
}

/// Reads a line-delimited JSON corpus and ingests it.
pub fn ingest_corpus(
    path: impl AsRef<Path>,
    vocab: &Vocabulary,
    config: &IngestConfig,
) -> Result<CorpusStore, IngestError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => IngestError::FileNotFound(path.to_path_buf()),
        _ => IngestError::Io(e),
    })?;
    ingest_reader(BufReader::new(file), vocab, config)
}

pub fn ingest_reader(
    reader: impl BufRead,
    vocab: &Vocabulary,
    config: &IngestConfig,
) -> Result<CorpusStore, IngestError> {
    let mut docs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: RawDocument =
            serde_json::from_str(&line).map_err(|e| IngestError::MalformedRecord {
                line: i + 1,
                reason: e.to_string(),
            })?;
        docs.push((i + 1, doc));
    }
    ingest_numbered(docs, vocab, config)
}

/// Ingests in-memory documents; record numbers in errors are 1-based
/// positions in `docs`.
pub fn ingest_documents(
    docs: Vec<RawDocument>,
    vocab: &Vocabulary,
    config: &IngestConfig,
) -> Result<CorpusStore, IngestError> {
    ingest_numbered(
        docs.into_iter()
            .enumerate()
            .map(|(i, d)| (i + 1, d))
            .collect(),
        vocab,
        config,
    )
}

fn ingest_numbered(
    docs: Vec<(usize, RawDocument)>,
    vocab: &Vocabulary,
    config: &IngestConfig,
) -> Result<CorpusStore, IngestError> {
    config.validate()?;
    let mut seen = HashSet::with_capacity(docs.len());
    for (_, d) in &docs {
        if !seen.insert((d.source.as_str(), d.doc_id.as_str())) {
            return Err(IngestError::DuplicateDocument {
                source_name: d.source.clone(),
                doc_id: d.doc_id.clone(),
            });
        }
    }

    let linker = EntityLinker::new(vocab);
    let processed: Vec<Result<StoredDocument, IngestError>> = docs
        .par_iter()
        .map(|(line, d)| {
            process_document(d, &linker, vocab, config).map_err(|reason| {
                IngestError::MalformedRecord {
                    line: *line,
                    reason,
                }
            })
        })
        .collect();
    let stored = processed.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(CorpusStore::from_sorted_unique(stored))
}
