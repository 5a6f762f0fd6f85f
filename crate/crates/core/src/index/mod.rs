//! Inverted entity → document index with edge document frequencies.
//!
//! Documents get dense ordinals in ascending (source, doc_id) order, which
//! matches the [`CorpusStore`] order; scoring loops work on ordinals and
//! the doc table maps them back to external ids.

mod codec;
mod filter;

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use codec::FORMAT_VERSION;
pub use filter::DocFilter;

use crate::graph::EdgeKey;
use crate::postings::{intersect_sorted, union_sorted};
use crate::store::CorpusStore;

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("no keywords given")]
    NoKeywords,
    #[error("invalid date range: {from} is after {to}")]
    InvalidDateRange { from: NaiveDate, to: NaiveDate },
    #[error("index file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("corrupt index: {0}")]
    CorruptIndex(String),
}

/// Dense document number, valid for one index/store pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DocOrdinal(pub u32);

impl DocOrdinal {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocEntry {
    pub source: String,
    pub doc_id: String,
    pub publication_date: Option<NaiveDate>,
    pub classes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct InvertedIndex {
    docs: Vec<DocEntry>,
    entity_ids: Vec<String>,
    postings: Vec<Vec<DocOrdinal>>,
    entity_lookup: HashMap<String, usize>,
    edge_df: HashMap<EdgeKey, u32>,
}

/// Document frequencies needed by idf.
pub trait EdgeFrequencies {
    fn total_docs(&self) -> u64;
    fn edge_df(&self, edge: &EdgeKey) -> u64;
}

impl EdgeFrequencies for InvertedIndex {
    fn total_docs(&self) -> u64 {
        self.docs.len() as u64
    }

    fn edge_df(&self, edge: &EdgeKey) -> u64 {
        self.edge_df.get(edge).copied().unwrap_or(0) as u64
    }
}

/// Builds the index. Entity presence is mention-level: an entity posts a
/// document if it occurs anywhere in that document's graph.
pub fn build_index(store: &CorpusStore) -> InvertedIndex {
    let mut postings: HashMap<&str, Vec<DocOrdinal>> = HashMap::new();
    let mut edge_df: HashMap<EdgeKey, u32> = HashMap::new();
    let mut docs = Vec::with_capacity(store.len());
    for (ord, doc) in store.documents().iter().enumerate() {
        let ord = DocOrdinal(ord as u32);
        for entity in doc.graph.entity_first_last.keys() {
            postings.entry(entity.as_str()).or_default().push(ord);
        }
        for key in doc.graph.edges.keys() {
            match edge_df.get_mut(key) {
                Some(df) => *df += 1,
                None => {
                    edge_df.insert(key.clone(), 1);
                }
            }
        }
        docs.push(DocEntry {
            source: doc.meta.source.clone(),
            doc_id: doc.meta.doc_id.clone(),
            publication_date: doc.meta.publication_date,
            classes: doc.meta.classes.clone(),
        });
    }

    let mut entries: Vec<(&str, Vec<DocOrdinal>)> = postings.into_iter().collect();
    entries.sort_unstable_by(|a, b| a.0.cmp(b.0));
    let (entity_ids, postings): (Vec<String>, Vec<Vec<DocOrdinal>>) = entries
        .into_iter()
        .map(|(id, list)| (id.to_owned(), list))
        .unzip();
    InvertedIndex::from_parts(docs, entity_ids, postings, edge_df)
        .expect("index built from a store is consistent")
}

/// Documents present in every list. Zero lists is an error rather than
/// "match all".
pub fn intersect(lists: &[Vec<DocOrdinal>]) -> Result<Vec<DocOrdinal>, IndexError> {
    if lists.is_empty() {
        return Err(IndexError::NoKeywords);
    }
    let refs: Vec<&[DocOrdinal]> = lists.iter().map(Vec::as_slice).collect();
    Ok(intersect_sorted(&refs))
}

impl InvertedIndex {
    fn from_parts(
        docs: Vec<DocEntry>,
        entity_ids: Vec<String>,
        postings: Vec<Vec<DocOrdinal>>,
        edge_df: HashMap<EdgeKey, u32>,
    ) -> Result<Self, String> {
        if entity_ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err("entity ids not strictly ascending".into());
        }
        if docs
            .windows(2)
            .any(|w| (&w[0].source, &w[0].doc_id) >= (&w[1].source, &w[1].doc_id))
        {
            return Err("doc table not strictly ascending".into());
        }
        if u32::try_from(docs.len()).is_err() {
            return Err("too many documents".into());
        }
        let entity_lookup = entity_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        Ok(InvertedIndex {
            docs,
            entity_ids,
            postings,
            entity_lookup,
            edge_df,
        })
    }

    pub fn total_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn doc(&self, ord: DocOrdinal) -> &DocEntry {
        &self.docs[ord.index()]
    }

    pub fn doc_table(&self) -> &[DocEntry] {
        &self.docs
    }

    pub fn ordinal_of(&self, source: &str, doc_id: &str) -> Option<DocOrdinal> {
        self.docs
            .binary_search_by(|d| (d.source.as_str(), d.doc_id.as_str()).cmp(&(source, doc_id)))
            .ok()
            .map(|i| DocOrdinal(i as u32))
    }

    /// Ascending ordinals of documents mentioning `entity`; empty if unknown.
    pub fn postings(&self, entity: &str) -> &[DocOrdinal] {
        self.entity_lookup
            .get(entity)
            .map_or(&[][..], |&i| self.postings[i].as_slice())
    }

    pub fn entity_ids(&self) -> &[String] {
        &self.entity_ids
    }

    pub fn edge_count(&self) -> usize {
        self.edge_df.len()
    }

    pub fn edge_document_frequencies(&self) -> impl Iterator<Item = (&EdgeKey, u32)> {
        self.edge_df.iter().map(|(k, &v)| (k, v))
    }

    /// Union of the postings of every given entity.
    pub fn docs_for_keyword<'a>(
        &self,
        entity_ids: impl IntoIterator<Item = &'a str>,
    ) -> Vec<DocOrdinal> {
        let lists: Vec<&[DocOrdinal]> = entity_ids.into_iter().map(|e| self.postings(e)).collect();
        union_sorted(&lists)
    }

    /// Keeps the documents accepted by `filter`, preserving order.
    pub fn apply_filter(
        &self,
        docs: &[DocOrdinal],
        filter: &DocFilter,
    ) -> Result<Vec<DocOrdinal>, IndexError> {
        filter.validate()?;
        if filter.is_unrestricted() {
            return Ok(docs.to_vec());
        }
        Ok(docs
            .iter()
            .copied()
            .filter(|&d| filter.matches(self.doc(d)))
            .collect())
    }

    pub fn sources(&self) -> BTreeSet<&str> {
        self.docs.iter().map(|d| d.source.as_str()).collect()
    }

    pub fn classes(&self) -> BTreeSet<&str> {
        self.docs
            .iter()
            .flat_map(|d| d.classes.iter().map(String::as_str))
            .collect()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        codec::encode(self)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, IndexError> {
        codec::decode(bytes)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), IndexError> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, IndexError> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| match e.kind() {
            io::ErrorKind::NotFound => IndexError::FileNotFound(path.to_path_buf()),
            _ => IndexError::Io(e),
        })?;
        Self::from_bytes(&bytes)
    }
}

pub fn save_index(ix: &InvertedIndex, path: impl AsRef<Path>) -> Result<(), IndexError> {
    ix.save(path)
}

pub fn load_index(path: impl AsRef<Path>) -> Result<InvertedIndex, IndexError> {
    InvertedIndex::load(path)
}
