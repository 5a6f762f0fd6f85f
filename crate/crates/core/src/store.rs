//! Ingested corpus: document metadata plus one statement graph per document.
//!
//! Persisted as a directory holding `graphs.jsonl` (one document per line,
//! ordered by source then doc id) and `manifest.json` (format version and
//! corpus statistics).

use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::DocumentGraph;

pub const GRAPHS_FILE: &str = "graphs.jsonl";
pub const MANIFEST_FILE: &str = "manifest.json";
const STORE_FORMAT: &str = "narrative-corpus-store";
const STORE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("corpus store not found at {0}")]
    NotFound(String),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("corrupt corpus store: {0}")]
    Corrupt(String),
    #[error("duplicate document {source_name}/{doc_id}")]
    DuplicateDocument { source_name: String, doc_id: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentMeta {
    pub doc_id: String,
    pub source: String,
    pub title: String,
    pub publication_date: Option<NaiveDate>,
    pub classes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredDocument {
    pub meta: DocumentMeta,
    pub graph: DocumentGraph,
}

impl StoredDocument {
    fn sort_key(&self) -> (&str, &str) {
        (&self.meta.source, &self.meta.doc_id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoreManifest {
    pub format: String,
    pub version: u32,
    pub documents: usize,
    pub statement_extractions: usize,
    pub sources: Vec<String>,
    pub classes: Vec<String>,
}

/// Documents in ascending (source, doc_id) order. Position in this order is
/// the document's ordinal in the index built from the store.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorpusStore {
    docs: Vec<StoredDocument>,
}

impl CorpusStore {
    pub fn from_documents(mut docs: Vec<StoredDocument>) -> Result<Self, StoreError> {
        docs.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        if let Some(w) = docs.windows(2).find(|w| w[0].sort_key() == w[1].sort_key()) {
            return Err(StoreError::DuplicateDocument {
                source_name: w[0].meta.source.clone(),
                doc_id: w[0].meta.doc_id.clone(),
            });
        }
        Ok(CorpusStore { docs })
    }

    /// Callers guarantee uniqueness of (source, doc_id).
    pub(crate) fn from_sorted_unique(mut docs: Vec<StoredDocument>) -> Self {
        docs.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        CorpusStore { docs }
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn documents(&self) -> &[StoredDocument] {
        &self.docs
    }

    pub fn get(&self, position: usize) -> Option<&StoredDocument> {
        self.docs.get(position)
    }

    pub fn find(&self, source: &str, doc_id: &str) -> Option<&StoredDocument> {
        self.docs
            .binary_search_by(|d| d.sort_key().cmp(&(source, doc_id)))
            .ok()
            .map(|i| &self.docs[i])
    }

    pub fn total_statement_extractions(&self) -> usize {
        self.docs
            .iter()
            .map(|d| d.graph.num_statement_extractions)
            .sum()
    }

    pub fn manifest(&self) -> StoreManifest {
        let sources: BTreeSet<&str> = self.docs.iter().map(|d| d.meta.source.as_str()).collect();
        let classes: BTreeSet<&str> = self
            .docs
            .iter()
            .flat_map(|d| d.meta.classes.iter().map(String::as_str))
            .collect();
        StoreManifest {
            format: STORE_FORMAT.into(),
            version: STORE_VERSION,
            documents: self.docs.len(),
            statement_extractions: self.total_statement_extractions(),
            sources: sources.into_iter().map(str::to_owned).collect(),
            classes: classes.into_iter().map(str::to_owned).collect(),
        }
    }

    pub fn save(&self, dir: impl AsRef<Path>) -> Result<(), StoreError> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        let mut out = BufWriter::new(File::create(dir.join(GRAPHS_FILE))?);
        for doc in &self.docs {
            serde_json::to_writer(&mut out, doc).map_err(io::Error::from)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        let manifest = serde_json::to_string_pretty(&self.manifest()).map_err(io::Error::from)?;
        fs::write(dir.join(MANIFEST_FILE), manifest + "\n")?;
        Ok(())
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self, StoreError> {
        let dir = dir.as_ref();
        let manifest_path = dir.join(MANIFEST_FILE);
        if !manifest_path.exists() {
            return Err(StoreError::NotFound(dir.display().to_string()));
        }
        let manifest: StoreManifest = serde_json::from_slice(&fs::read(&manifest_path)?)
            .map_err(|e| StoreError::Corrupt(format!("manifest: {e}")))?;
        if manifest.format != STORE_FORMAT || manifest.version != STORE_VERSION {
            return Err(StoreError::Corrupt(format!(
                "unsupported store format {} v{}",
                manifest.format, manifest.version
            )));
        }

        let file = File::open(dir.join(GRAPHS_FILE))
            .map_err(|e| StoreError::Corrupt(format!("{GRAPHS_FILE}: {e}")))?;
        let mut docs = Vec::with_capacity(manifest.documents);
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            let doc: StoredDocument = serde_json::from_str(&line)
                .map_err(|e| StoreError::Corrupt(format!("{GRAPHS_FILE} line {}: {e}", i + 1)))?;
            if doc.meta.doc_id != doc.graph.doc_id || doc.meta.source != doc.graph.source {
                return Err(StoreError::Corrupt(format!(
                    "line {}: metadata/graph id mismatch",
                    i + 1
                )));
            }
            doc.graph
                .check_invariants()
                .map_err(|e| StoreError::Corrupt(format!("line {}: {e}", i + 1)))?;
            docs.push(doc);
        }
        if docs.windows(2).any(|w| w[0].sort_key() >= w[1].sort_key()) {
            return Err(StoreError::Corrupt(
                "documents out of order or duplicated".into(),
            ));
        }
        let store = CorpusStore { docs };
        if store.manifest() != manifest {
            return Err(StoreError::Corrupt("manifest does not match graphs".into()));
        }
        Ok(store)
    }
}
