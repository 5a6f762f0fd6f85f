//! Entity-centric exploratory search over biomedical literature.
//!
//! Documents are turned into small per-document statement graphs. A query
//! is a list of keywords; each keyword translates to vocabulary entities,
//! the documents mentioning entities of every keyword are retrieved, and
//! the edges touching a searched entity are scored and ranked into a
//! *narrative pattern* with provenance back to the supporting documents.
//!
//! ```no_run
//! use narrative_core::{build_index, ingest_corpus, load_vocabulary};
//! use narrative_core::{IngestConfig, PatternQuery, SearchContext};
//!
//! let vocab = load_vocabulary("vocab.jsonl")?;
//! let store = ingest_corpus("corpus.jsonl", &vocab, &IngestConfig::default())?;
//! let index = build_index(&store);
//! let ctx = SearchContext::new(vocab, index, store)?;
//! let pattern = ctx.mine_pattern(&PatternQuery::new(["metformin", "diabetes"]))?;
//! for e in &pattern.edges {
//!     println!("{} {:.4}", e.edge, e.fscore);
//! }
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod graph;
pub mod index;
pub mod ingestion;
pub mod pattern;
pub mod postings;
pub mod render;
pub mod scoring;
pub mod store;
#[cfg(feature = "synthetic")]
pub mod synthetic;
pub mod vocabulary;

pub use graph::{
    DocumentGraph, EdgeKey, EdgeStats, EntityMention, ExtractionMethod, Statement, ASSOCIATED,
};
pub use index::{
    build_index, intersect, load_index, save_index, DocEntry, DocFilter, DocOrdinal,
    EdgeFrequencies, IndexError, InvertedIndex,
};
pub use ingestion::{
    ingest_corpus, ingest_documents, ingest_reader, IngestConfig, IngestError, RawDocument,
};
pub use pattern::{
    NarrativePattern, PatternError, PatternNode, PatternQuery, SearchContext, DEFAULT_TOP_K,
};
pub use scoring::EdgeScore;
pub use store::{CorpusStore, DocumentMeta, StoreError, StoredDocument};
pub use vocabulary::{
    load_vocabulary, Entity, EntityType, Keyword, Suggestion, Vocabulary, VocabularyError,
};
