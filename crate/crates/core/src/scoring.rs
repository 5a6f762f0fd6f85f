//! Edge scores.
//!
//! `score(e, d) = tf-idf(e, d) · coverage(e, d) · confidence(e, d)` for an
//! edge present in document `d`, and exactly zero otherwise. The final score
//! of an edge sums `score` over the retrieved documents.
//!
//! Factor definitions:
//! - tf = freq(e, d) / extractions(d); idf = ln(1 + N / df(e)).
//! - coverage = mean over both endpoints of (last − first + 1) / sentences(d).
//! - confidence = best extraction confidence of `e` in `d`.
//!
//! Each factor is a separate function so it can be replaced on its own.

use thiserror::Error;

use crate::graph::{DocumentGraph, EdgeKey, EdgeStats};
use crate::index::{DocOrdinal, EdgeFrequencies};

#[derive(Debug, Error, PartialEq)]
pub enum ScoreError {
    #[error("edge {0} is not present in the document")]
    EdgeAbsent(EdgeKey),
}

/// Final score of one edge over a document set.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeScore {
    pub edge: EdgeKey,
    pub fscore: f64,
    /// Ascending ordinals of documents with a positive score.
    pub supporting_docs: Vec<DocOrdinal>,
}

fn stats<'g>(e: &EdgeKey, d: &'g DocumentGraph) -> Result<&'g EdgeStats, ScoreError> {
    d.edges
        .get(e)
        .ok_or_else(|| ScoreError::EdgeAbsent(e.clone()))
}

pub fn tf_idf(
    e: &EdgeKey,
    d: &DocumentGraph,
    freqs: &impl EdgeFrequencies,
) -> Result<f64, ScoreError> {
    let s = stats(e, d)?;
    Ok(tf_idf_value(
        s.freq,
        d.num_statement_extractions,
        freqs.total_docs(),
        freqs.edge_df(e),
    ))
}

/// `df` is floored at 1: an edge that is present somewhere has a document
/// frequency of at least one even if the statistics lag behind.
pub fn tf_idf_value(freq: u32, extractions: usize, total_docs: u64, df: u64) -> f64 {
    let tf = freq as f64 / extractions as f64;
    let idf = (1.0 + total_docs as f64 / df.max(1) as f64).ln();
    tf * idf
}

pub fn coverage(e: &EdgeKey, d: &DocumentGraph) -> Result<f64, ScoreError> {
    stats(e, d)?;
    let n = d.num_sentences.max(1) as f64;
    let span = |entity: &str| {
        d.entity_first_last
            .get(entity)
            .map_or(1.0 / n, |&(first, last)| (last - first + 1) as f64 / n)
    };
    Ok((span(&e.subject) + span(&e.object)) / 2.0)
}

pub fn confidence(e: &EdgeKey, d: &DocumentGraph) -> Result<f64, ScoreError> {
    Ok(stats(e, d)?.max_confidence)
}

/// Product of the three factors, or 0 when `e` is not in `d`.
pub fn score(e: &EdgeKey, d: &DocumentGraph, freqs: &impl EdgeFrequencies) -> f64 {
    if !d.edges.contains_key(e) {
        return 0.0;
    }
    // All three succeed once presence is established.
    tf_idf(e, d, freqs).unwrap() * coverage(e, d).unwrap() * confidence(e, d).unwrap()
}

/// Sums `score(e, d)` over `docs`, visiting them in ascending ordinal order
/// so the floating-point sum does not depend on the caller's ordering.
pub fn fscore<'g>(
    e: &EdgeKey,
    docs: impl IntoIterator<Item = (DocOrdinal, &'g DocumentGraph)>,
    freqs: &impl EdgeFrequencies,
) -> EdgeScore {
    let mut docs: Vec<(DocOrdinal, &DocumentGraph)> = docs.into_iter().collect();
    docs.sort_by_key(|(o, _)| *o);
    let mut total = 0.0;
    let mut supporting = Vec::new();
    for (ord, d) in docs {
        let s = score(e, d, freqs);
        if s > 0.0 {
            total += s;
            supporting.push(ord);
        }
    }
    EdgeScore {
        edge: e.clone(),
        fscore: total,
        supporting_docs: supporting,
    }
}
