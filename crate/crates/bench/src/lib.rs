//! Shared workloads for the benchmarks.

use narrative_core::synthetic::{generate, query_pairs, SyntheticConfig};
use narrative_core::{
    build_index, ingest_documents, DocOrdinal, IngestConfig, Keyword, RawDocument, SearchContext,
    Vocabulary,
};

pub struct Workload {
    pub ctx: SearchContext,
    pub queries: Vec<[String; 2]>,
}

pub fn corpus(documents: usize, entities: usize) -> (Vocabulary, Vec<RawDocument>) {
    let c = generate(&SyntheticConfig {
        documents,
        entities,
        ..SyntheticConfig::default()
    });
    (c.vocabulary, c.documents)
}

pub fn workload(documents: usize, entities: usize, queries: usize) -> Workload {
    let (vocab, docs) = corpus(documents, entities);
    let store =
        ingest_documents(docs, &vocab, &IngestConfig::default()).expect("synthetic corpus ingests");
    let index = build_index(&store);
    let queries = query_pairs(&vocab, queries, 3);
    let ctx = SearchContext::new(vocab, index, store).expect("index built from this store");
    Workload { ctx, queries }
}

/// Per-keyword document lists for a keyword list, as intersected by retrieval.
pub fn keyword_postings(ctx: &SearchContext, keywords: &[&str]) -> Vec<Vec<DocOrdinal>> {
    keywords
        .iter()
        .map(|k| {
            let ids = ctx
                .vocabulary()
                .translate_keyword(&Keyword::new(*k))
                .expect("non-empty keyword");
            ctx.index().docs_for_keyword(ids.iter().map(String::as_str))
        })
        .collect()
}

/// Preferred names of the `n` entities with the longest postings.
pub fn most_frequent(ctx: &SearchContext, n: usize) -> Vec<String> {
    let mut by_df: Vec<(usize, &str)> = ctx
        .vocabulary()
        .entities()
        .iter()
        .map(|e| (ctx.index().postings(&e.id).len(), e.preferred_name.as_str()))
        .collect();
    by_df.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(b.1)));
    by_df
        .into_iter()
        .take(n)
        .map(|(_, name)| name.to_owned())
        .collect()
}
