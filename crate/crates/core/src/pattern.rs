//! Narrative pattern mining.
//!
//! 1. Translate every keyword to its entity set (an untranslatable keyword
//!    is an error).
//! 2. Per keyword, union the postings of its entities.
//! 3. Intersect the per-keyword document sets, then apply the filter.
//! 4. In every retrieved document, score each edge that touches a searched
//!    entity and accumulate the scores per edge.
//! 5. Rank by score descending, ties by (subject, predicate, object).
//! 6. Each searched entity keeps its `top_k_per_concept` best incident
//!    edges; the pattern is the union of those selections in rank order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::graph::EdgeKey;
use crate::index::{intersect, DocFilter, DocOrdinal, IndexError, InvertedIndex};
use crate::scoring::{score, EdgeScore};
use crate::store::{CorpusStore, DocumentMeta};
use crate::vocabulary::{EntityType, Keyword, Suggestion, Vocabulary, VocabularyError};

pub const DEFAULT_TOP_K: usize = 5;
const SUGGESTIONS_ON_ERROR: usize = 5;

#[derive(Debug, Error)]
pub enum PatternError {
    #[error("no keywords given")]
    NoKeywords,
    #[error("empty keyword")]
    EmptyKeyword,
    #[error("keyword {keyword:?} matches no known entity")]
    UntranslatableKeyword {
        keyword: String,
        suggestions: Vec<Suggestion>,
    },
    #[error("invalid date range: {from} is after {to}")]
    InvalidDateRange {
        from: chrono::NaiveDate,
        to: chrono::NaiveDate,
    },
    #[error("top_k must be at least 1")]
    InvalidTopK,
    #[error("edge {0} has no supporting documents for this query")]
    UnknownEdge(EdgeKey),
    #[error("index and corpus store disagree: {0}")]
    Mismatch(String),
}

impl PatternError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            PatternError::NoKeywords => "NO_KEYWORDS",
            PatternError::UntranslatableKeyword { .. } => "UNTRANSLATABLE_KEYWORD",
            PatternError::InvalidDateRange { .. } => "INVALID_DATE_RANGE",
            PatternError::UnknownEdge(_) => "UNKNOWN_EDGE",
            PatternError::EmptyKeyword | PatternError::InvalidTopK => "INVALID_PARAMETER",
            PatternError::Mismatch(_) => "INTERNAL",
        }
    }
}

impl From<IndexError> for PatternError {
    fn from(e: IndexError) -> Self {
        match e {
            IndexError::NoKeywords => PatternError::NoKeywords,
            IndexError::InvalidDateRange { from, to } => {
                PatternError::InvalidDateRange { from, to }
            }
            other => PatternError::Mismatch(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternQuery {
    pub keywords: Vec<Keyword>,
    pub filter: DocFilter,
    /// `usize::MAX` disables the cap.
    pub top_k_per_concept: usize,
    /// Display hint for clients; does not affect mining.
    pub visible_types: Option<BTreeSet<EntityType>>,
}

impl PatternQuery {
    pub fn new<K: Into<Keyword>>(keywords: impl IntoIterator<Item = K>) -> Self {
        PatternQuery {
            keywords: keywords.into_iter().map(Into::into).collect(),
            filter: DocFilter::default(),
            top_k_per_concept: DEFAULT_TOP_K,
            visible_types: None,
        }
    }

    pub fn with_top_k(mut self, k: usize) -> Self {
        self.top_k_per_concept = k;
        self
    }

    pub fn with_filter(mut self, filter: DocFilter) -> Self {
        self.filter = filter;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternNode {
    pub id: String,
    pub entity_type: EntityType,
    pub name: String,
    pub is_searched: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NarrativePattern {
    pub searched_entities: BTreeSet<String>,
    /// Sorted by id.
    pub nodes: Vec<PatternNode>,
    /// Ranked: score descending, then edge key ascending.
    pub edges: Vec<EdgeScore>,
    /// Edges chosen on behalf of each searched entity, in rank order.
    pub selections: BTreeMap<String, Vec<EdgeKey>>,
    pub retrieved_doc_count: usize,
}

/// Documents matching a query, plus the translation that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Retrieval {
    pub keyword_entities: Vec<BTreeSet<String>>,
    pub searched_entities: BTreeSet<String>,
    pub docs: Vec<DocOrdinal>,
}

/// Score descending, then key ascending. Scores are finite and
/// non-negative, so `total_cmp` is the plain numeric order.
pub fn rank_order(a: &EdgeScore, b: &EdgeScore) -> Ordering {
    b.fscore
        .total_cmp(&a.fscore)
        .then_with(|| a.edge.cmp(&b.edge))
}

/// Keeps, for every searched entity, its first `k` incident edges in
/// `ranked`. Returns the kept positions and the per-entity selections.
pub fn select_top_k_per_concept(
    ranked: &[EdgeScore],
    searched: &BTreeSet<String>,
    k: usize,
) -> (Vec<usize>, BTreeMap<String, Vec<EdgeKey>>) {
    let mut selections: BTreeMap<String, Vec<EdgeKey>> = BTreeMap::new();
    let mut kept = Vec::new();
    for (i, e) in ranked.iter().enumerate() {
        let mut keep = false;
        let ends = [&e.edge.subject, &e.edge.object];
        for end in ends {
            if !searched.contains(end) {
                continue;
            }
            let chosen = selections.entry(end.clone()).or_default();
            if chosen.len() < k {
                chosen.push(e.edge.clone());
                keep = true;
            }
        }
        if keep {
            kept.push(i);
        }
    }
    (kept, selections)
}

/// Immutable vocabulary, index and store snapshot answering queries.
#[derive(Debug)]
pub struct SearchContext {
    vocab: Vocabulary,
    index: InvertedIndex,
    store: CorpusStore,
}

impl SearchContext {
    /// Fails unless the index was built from this store: ordinal `i` must
    /// name the same document in both.
    pub fn new(
        vocab: Vocabulary,
        index: InvertedIndex,
        store: CorpusStore,
    ) -> Result<Self, PatternError> {
        if index.total_docs() != store.len() {
            return Err(PatternError::Mismatch(format!(
                "index has {} documents, store has {}",
                index.total_docs(),
                store.len()
            )));
        }
        for (entry, doc) in index.doc_table().iter().zip(store.documents()) {
            if entry.source != doc.meta.source || entry.doc_id != doc.meta.doc_id {
                return Err(PatternError::Mismatch(format!(
                    "document {}/{} missing from store",
                    entry.source, entry.doc_id
                )));
            }
        }
        Ok(SearchContext {
            vocab,
            index,
            store,
        })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn index(&self) -> &InvertedIndex {
        &self.index
    }

    pub fn store(&self) -> &CorpusStore {
        &self.store
    }

    pub fn meta(&self, ord: DocOrdinal) -> &DocumentMeta {
        &self.store.documents()[ord.index()].meta
    }

    /// Steps 1–3: translation, per-keyword union, intersection, filter.
    pub fn retrieve(&self, q: &PatternQuery) -> Result<Retrieval, PatternError> {
        if q.keywords.is_empty() {
            return Err(PatternError::NoKeywords);
        }
        if q.top_k_per_concept == 0 {
            return Err(PatternError::InvalidTopK);
        }
        q.filter.validate()?;

        let mut keyword_entities = Vec::with_capacity(q.keywords.len());
        for kw in &q.keywords {
            let ids = self.vocab.translate_keyword(kw).map_err(|e| match e {
                VocabularyError::EmptyKeyword => PatternError::EmptyKeyword,
                other => PatternError::Mismatch(other.to_string()),
            })?;
            if ids.is_empty() {
                return Err(PatternError::UntranslatableKeyword {
                    keyword: kw.raw().to_owned(),
                    suggestions: self.vocab.nearest_suggestions(kw, SUGGESTIONS_ON_ERROR),
                });
            }
            keyword_entities.push(ids);
        }

        let per_keyword: Vec<Vec<DocOrdinal>> = keyword_entities
            .iter()
            .map(|ids| self.index.docs_for_keyword(ids.iter().map(String::as_str)))
            .collect();
        let docs = intersect(&per_keyword)?;
        let docs = self.index.apply_filter(&docs, &q.filter)?;
        let searched_entities = keyword_entities.iter().flatten().cloned().collect();
        Ok(Retrieval {
            keyword_entities,
            searched_entities,
            docs,
        })
    }

    pub fn mine_pattern(&self, q: &PatternQuery) -> Result<NarrativePattern, PatternError> {
        let r = self.retrieve(q)?;
        let searched: HashSet<&str> = r.searched_entities.iter().map(String::as_str).collect();

        let mut acc: HashMap<&EdgeKey, (f64, Vec<DocOrdinal>)> = HashMap::new();
        for &ord in &r.docs {
            let graph = &self.store.documents()[ord.index()].graph;
            for key in graph.edges.keys() {
                if !(searched.contains(key.subject.as_str())
                    || searched.contains(key.object.as_str()))
                {
                    continue;
                }
                let s = score(key, graph, &self.index);
                let slot = acc.entry(key).or_insert((0.0, Vec::new()));
                slot.0 += s;
                slot.1.push(ord);
            }
        }

        let mut ranked: Vec<EdgeScore> = acc
            .into_iter()
            .map(|(key, (fscore, supporting_docs))| EdgeScore {
                edge: key.clone(),
                fscore,
                supporting_docs,
            })
            .collect();
        ranked.sort_unstable_by(rank_order);

        let (kept, selections) =
            select_top_k_per_concept(&ranked, &r.searched_entities, q.top_k_per_concept);
        let mut keep = vec![false; ranked.len()];
        kept.into_iter().for_each(|i| keep[i] = true);
        let edges: Vec<EdgeScore> = ranked
            .into_iter()
            .zip(keep)
            .filter_map(|(e, k)| k.then_some(e))
            .collect();

        let mut node_ids: BTreeSet<&str> = r.searched_entities.iter().map(String::as_str).collect();
        for e in &edges {
            node_ids.insert(&e.edge.subject);
            node_ids.insert(&e.edge.object);
        }
        let nodes = node_ids
            .into_iter()
            .map(|id| {
                let (entity_type, name) = self
                    .vocab
                    .get(id)
                    .map_or((EntityType::Other, id.to_owned()), |e| {
                        (e.entity_type, e.preferred_name.clone())
                    });
                PatternNode {
                    id: id.to_owned(),
                    entity_type,
                    name,
                    is_searched: searched.contains(id),
                }
            })
            .collect();

        Ok(NarrativePattern {
            searched_entities: r.searched_entities,
            nodes,
            edges,
            selections,
            retrieved_doc_count: r.docs.len(),
        })
    }

    /// Documents supporting `edge` within the query's full retrieved set,
    /// by per-document score descending, then ordinal ascending.
    pub fn edge_documents(
        &self,
        edge: &EdgeKey,
        q: &PatternQuery,
    ) -> Result<Vec<(DocOrdinal, f64)>, PatternError> {
        let edge = EdgeKey::new(&edge.subject, &edge.predicate, &edge.object);
        let r = self.retrieve(q)?;
        if !(r.searched_entities.contains(&edge.subject)
            || r.searched_entities.contains(&edge.object))
        {
            return Err(PatternError::UnknownEdge(edge));
        }
        let mut hits: Vec<(DocOrdinal, f64)> = r
            .docs
            .iter()
            .filter_map(|&ord| {
                let s = score(
                    &edge,
                    &self.store.documents()[ord.index()].graph,
                    &self.index,
                );
                (s > 0.0).then_some((ord, s))
            })
            .collect();
        if hits.is_empty() {
            return Err(PatternError::UnknownEdge(edge));
        }
        hits.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        Ok(hits)
    }

    /// The retrieved documents, newest first; undated documents last; ties
    /// by (source, doc_id).
    pub fn result_documents(&self, q: &PatternQuery) -> Result<Vec<DocOrdinal>, PatternError> {
        let mut docs = self.retrieve(q)?.docs;
        docs.sort_by(|&a, &b| {
            let (da, db) = (self.meta(a).publication_date, self.meta(b).publication_date);
            match (da, db) {
                (Some(x), Some(y)) => y.cmp(&x),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => Ordering::Equal,
            }
            .then(a.cmp(&b))
        });
        Ok(docs)
    }
}
