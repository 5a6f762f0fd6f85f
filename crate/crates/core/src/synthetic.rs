//! Seeded synthetic vocabularies and corpora for load tests and benches.
//!
//! Entity names are pronounceable nonsense words, so they never collide
//! with the filler vocabulary. Entity popularity is log-uniform (roughly
//! Zipfian): a few entities appear in a large share of documents.

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingestion::RawDocument;
use crate::vocabulary::{Entity, EntityType, Vocabulary};

const ONSETS: [&str; 16] = [
    "b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "tr",
];
const NUCLEI: [&str; 8] = ["a", "e", "i", "o", "u", "ai", "ou", "y"];
const FILLER: [&str; 24] = [
    "the",
    "study",
    "reported",
    "effects",
    "of",
    "in",
    "with",
    "and",
    "was",
    "observed",
    "during",
    "treatment",
    "cohort",
    "analysis",
    "showed",
    "a",
    "significant",
    "change",
    "between",
    "groups",
    "after",
    "weeks",
    "baseline",
    "trial",
];
const SOURCES: [&str; 2] = ["PubMed", "PMC"];
const CLASSES: [&str; 4] = [
    "Clinical Study",
    "Review",
    "Case Report",
    "Pharmaceutical Technology",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticConfig {
    pub documents: usize,
    pub entities: usize,
    /// Sentences per document including the title, uniform in `[mean - 2, mean + 2]`.
    pub mean_sentences: usize,
    /// Mentions per document, uniform in `[mean - 4, mean + 4]`.
    pub mean_mentions: usize,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            documents: 1_000,
            entities: 2_000,
            mean_sentences: 5,
            mean_mentions: 8,
            seed: 7,
        }
    }
}

#[derive(Debug)]
pub struct SyntheticCorpus {
    pub vocabulary: Vocabulary,
    pub documents: Vec<RawDocument>,
    /// Mention count planned per document, parallel to `documents`.
    pub planned_mentions: Vec<usize>,
}

/// Unique word for entity `i`: base-128 digits mapped to syllables.
fn entity_word(mut i: usize) -> String {
    let mut word = String::new();
    loop {
        let d = i % 128;
        word.push_str(ONSETS[d % 16]);
        word.push_str(NUCLEI[d / 16]);
        i /= 128;
        if i == 0 {
            break;
        }
    }
    // A two-syllable minimum keeps names distinct from filler words.
    if word.chars().count() < 4 {
        word.push('x');
    }
    word
}

pub fn synthetic_vocabulary(entities: usize) -> Vocabulary {
    let list = (0..entities)
        .map(|i| {
            let name = format!("{}ine", entity_word(i));
            let alias = format!("{}ase", entity_word(i));
            Entity::new(
                format!("SYN:{i:07}"),
                name,
                EntityType::ALL[i % EntityType::ALL.len()],
                vec![alias],
            )
        })
        .collect();
    Vocabulary::from_entities(list).expect("generated entities are unique")
}

/// Log-uniform rank in `0..n`.
fn popular(rng: &mut impl Rng, n: usize) -> usize {
    let u: f64 = rng.gen();
    ((n as f64).powf(u) as usize).saturating_sub(1).min(n - 1)
}

pub fn generate(config: &SyntheticConfig) -> SyntheticCorpus {
    assert!(config.entities > 0, "need at least one entity");
    let vocabulary = synthetic_vocabulary(config.entities);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let epoch = NaiveDate::from_ymd_opt(2000, 1, 1).unwrap();

    let mut documents = Vec::with_capacity(config.documents);
    let mut planned_mentions = Vec::with_capacity(config.documents);
    for n in 0..config.documents {
        let sentences = rng
            .gen_range(config.mean_sentences.saturating_sub(2).max(1)..=config.mean_sentences + 2);
        let mentions =
            rng.gen_range(config.mean_mentions.saturating_sub(4)..=config.mean_mentions + 4);
        let mut slots: Vec<Vec<&str>> = vec![Vec::new(); sentences];
        for _ in 0..mentions {
            let e = &vocabulary.entities()[popular(&mut rng, config.entities)];
            let name = e.synonyms.choose(&mut rng).unwrap();
            slots[rng.gen_range(0..sentences)].push(name);
        }

        let mut rendered = Vec::with_capacity(sentences);
        for names in &slots {
            let mut words: Vec<&str> = (0..rng.gen_range(3..8))
                .map(|_| *FILLER.choose(&mut rng).unwrap())
                .collect();
            for name in names {
                let at = rng.gen_range(0..=words.len());
                words.insert(at, name);
            }
            let mut s = words.join(" ");
            if let Some(first) = s.get_mut(0..1) {
                first.make_ascii_uppercase();
            }
            s.push('.');
            rendered.push(s);
        }
        let title = rendered.remove(0);

        let dated = rng.gen_bool(0.9);
        let classes: Vec<String> = CLASSES
            .iter()
            .filter(|_| rng.gen_bool(0.3))
            .map(|c| c.to_string())
            .collect();
        documents.push(RawDocument {
            doc_id: format!("{}", 1_000_000 + n),
            source: SOURCES[n % SOURCES.len()].to_owned(),
            title,
            body: rendered.join(" "),
            publication_date: dated.then(|| epoch + chrono::Days::new(rng.gen_range(0..9000))),
            classes,
            annotations: None,
        });
        planned_mentions.push(mentions);
    }
    SyntheticCorpus {
        vocabulary,
        documents,
        planned_mentions,
    }
}

/// Keyword pairs drawn with the same popularity skew as the documents.
pub fn query_pairs(vocabulary: &Vocabulary, count: usize, seed: u64) -> Vec<[String; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = vocabulary.len();
    (0..count)
        .map(|_| {
            let a = popular(&mut rng, n);
            let mut b = popular(&mut rng, n);
            if n > 1 {
                while b == a {
                    b = popular(&mut rng, n);
                }
            }
            let name = |i: usize| vocabulary.entities()[i].preferred_name.clone();
            [name(a), name(b)]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingestion::{ingest_documents, IngestConfig};

    #[test]
    fn words_are_unique() {
        let words: std::collections::HashSet<String> = (0..20_000).map(entity_word).collect();
        assert_eq!(words.len(), 20_000);
    }

    #[test]
    fn generation_is_seeded() {
        let c = SyntheticConfig {
            documents: 50,
            entities: 100,
            ..Default::default()
        };
        let a = generate(&c);
        let b = generate(&c);
        assert_eq!(a.documents, b.documents);
        let other = generate(&SyntheticConfig { seed: 8, ..c });
        assert_ne!(a.documents, other.documents);
    }

    #[test]
    fn every_planned_mention_is_linked() {
        let c = SyntheticConfig {
            documents: 200,
            entities: 500,
            ..Default::default()
        };
        let corpus = generate(&c);
        let store = ingest_documents(
            corpus.documents.clone(),
            &corpus.vocabulary,
            &IngestConfig::default(),
        )
        .unwrap();
        for raw in &corpus.documents {
            let stored = store.find(&raw.source, &raw.doc_id).unwrap();
            let i = corpus
                .documents
                .iter()
                .position(|d| d.doc_id == raw.doc_id)
                .unwrap();
            assert_eq!(
                stored.graph.mentions.len(),
                corpus.planned_mentions[i],
                "{}",
                raw.doc_id
            );
        }
        let sentences: usize = store
            .documents()
            .iter()
            .map(|d| d.graph.num_sentences)
            .sum();
        let avg = sentences as f64 / store.len() as f64;
        assert!((4.5..5.5).contains(&avg), "average sentences {avg}");
    }
}
