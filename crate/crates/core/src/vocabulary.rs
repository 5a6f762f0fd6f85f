//! Entity vocabulary: typed concepts with synonym lists, keyword translation
//! and autocomplete suggestions.
//!
//! A keyword translates to every entity owning at least one synonym that
//! contains each of the keyword's whitespace-separated terms as a
//! case-insensitive substring. `"diabetes melli"` therefore reaches
//! "diabetes mellitus" and all of its subtypes. Lookups go through a
//! character-trigram index over lowercased synonyms; every candidate is
//! verified with a direct substring scan.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::postings::intersect_sorted;

#[derive(Debug, Error)]
pub enum VocabularyError {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("malformed vocabulary record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("duplicate entity id {0}")]
    DuplicateEntityId(String),
    #[error("keyword is empty")]
    EmptyKeyword,
}

/// Entity category. Each type owns one display color shared by every client.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntityType {
    Drug,
    Disease,
    Target,
    Species,
    Method,
    DosageForm,
    HealthStatus,
    Other,
}

impl EntityType {
    pub const ALL: [EntityType; 8] = [
        EntityType::Drug,
        EntityType::Disease,
        EntityType::Target,
        EntityType::Species,
        EntityType::Method,
        EntityType::DosageForm,
        EntityType::HealthStatus,
        EntityType::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityType::Drug => "Drug",
            EntityType::Disease => "Disease",
            EntityType::Target => "Target",
            EntityType::Species => "Species",
            EntityType::Method => "Method",
            EntityType::DosageForm => "DosageForm",
            EntityType::HealthStatus => "HealthStatus",
            EntityType::Other => "Other",
        }
    }

    /// Hex fill color used for nodes of this type.
    pub fn color(self) -> &'static str {
        match self {
            EntityType::Drug => "#d7191c",
            EntityType::Disease => "#2b83ba",
            EntityType::Target => "#fdae61",
            EntityType::Species => "#abdda4",
            EntityType::Method => "#984ea3",
            EntityType::DosageForm => "#ff7f00",
            EntityType::HealthStatus => "#66c2a5",
            EntityType::Other => "#999999",
        }
    }
}

impl fmt::Display for EntityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntityType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EntityType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown entity type {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub id: String,
    pub preferred_name: String,
    pub entity_type: EntityType,
    /// Always non-empty; contains `preferred_name`.
    pub synonyms: Vec<String>,
}

impl Entity {
    /// Builds an entity, inserting the preferred name into the synonym list
    /// when absent and dropping duplicate synonyms.
    pub fn new(
        id: impl Into<String>,
        preferred_name: impl Into<String>,
        entity_type: EntityType,
        synonyms: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        let preferred_name = preferred_name.into();
        let mut list = vec![preferred_name.clone()];
        for s in synonyms {
            let s = s.into();
            if !list.contains(&s) {
                list.push(s);
            }
        }
        Entity {
            id: id.into(),
            preferred_name,
            entity_type,
            synonyms: list,
        }
    }

    fn validate(&self) -> Result<(), String> {
        if self.id.trim().is_empty() {
            return Err("empty entity id".into());
        }
        if self.preferred_name.trim().is_empty() {
            return Err(format!("entity {} has an empty preferred_name", self.id));
        }
        if self.synonyms.iter().any(|s| s.trim().is_empty()) {
            return Err(format!("entity {} has an empty synonym", self.id));
        }
        if !self.synonyms.contains(&self.preferred_name) {
            return Err(format!(
                "entity {} lacks its preferred_name among synonyms",
                self.id
            ));
        }
        Ok(())
    }
}

/// A search string as typed by the user.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Keyword(String);

impl Keyword {
    pub fn new(raw: impl Into<String>) -> Self {
        Keyword(raw.into())
    }

    pub fn raw(&self) -> &str {
        &self.0
    }

    /// Lowercased whitespace-delimited terms.
    pub fn terms(&self) -> Vec<String> {
        query_terms(&self.0)
    }
}

impl fmt::Display for Keyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Keyword {
    fn from(s: &str) -> Self {
        Keyword::new(s)
    }
}

impl From<String> for Keyword {
    fn from(s: String) -> Self {
        Keyword(s)
    }
}

fn query_terms(raw: &str) -> Vec<String> {
    raw.to_lowercase()
        .split_whitespace()
        .map(str::to_owned)
        .collect()
}

/// One autocomplete hit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Suggestion {
    pub synonym: String,
    pub entity_id: String,
    pub entity_type: EntityType,
}

#[derive(Debug, Clone)]
struct SynonymEntry {
    lower: String,
    entity: u32,
    synonym: u32,
}

type Trigram = [char; 3];

#[derive(Debug, Clone, Default)]
pub struct Vocabulary {
    entities: Vec<Entity>,
    by_id: HashMap<String, u32>,
    synonyms: Vec<SynonymEntry>,
    trigrams: HashMap<Trigram, Vec<u32>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntityRecord {
    id: String,
    preferred_name: String,
    entity_type: EntityType,
    #[serde(default)]
    synonyms: Vec<String>,
}

/// Reads a line-delimited JSON vocabulary file.
pub fn load_vocabulary(path: impl AsRef<Path>) -> Result<Vocabulary, VocabularyError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => VocabularyError::FileNotFound(path.to_path_buf()),
        _ => VocabularyError::Io(e),
    })?;
    Vocabulary::from_reader(BufReader::new(file))
}

impl Vocabulary {
    pub fn from_reader(reader: impl BufRead) -> Result<Self, VocabularyError> {
        let mut entities = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: EntityRecord =
                serde_json::from_str(&line).map_err(|e| VocabularyError::MalformedRecord {
                    line: i + 1,
                    reason: e.to_string(),
                })?;
            let entity = Entity::new(rec.id, rec.preferred_name, rec.entity_type, rec.synonyms);
            entity
                .validate()
                .map_err(|reason| VocabularyError::MalformedRecord {
                    line: i + 1,
                    reason,
                })?;
            entities.push(entity);
        }
        Self::from_entities(entities)
    }

    pub fn from_entities(entities: Vec<Entity>) -> Result<Self, VocabularyError> {
        let mut vocab = Vocabulary::default();
        for (ei, entity) in entities.iter().enumerate() {
            entity
                .validate()
                .map_err(|reason| VocabularyError::MalformedRecord {
                    line: ei + 1,
                    reason,
                })?;
            if vocab.by_id.insert(entity.id.clone(), ei as u32).is_some() {
                return Err(VocabularyError::DuplicateEntityId(entity.id.clone()));
            }
            for (si, syn) in entity.synonyms.iter().enumerate() {
                let ordinal = vocab.synonyms.len() as u32;
                let lower = syn.to_lowercase();
                let chars: Vec<char> = lower.chars().collect();
                let mut grams: Vec<Trigram> =
                    chars.windows(3).map(|w| [w[0], w[1], w[2]]).collect();
                grams.sort_unstable();
                grams.dedup();
                for g in grams {
                    vocab.trigrams.entry(g).or_default().push(ordinal);
                }
                vocab.synonyms.push(SynonymEntry {
                    lower,
                    entity: ei as u32,
                    synonym: si as u32,
                });
            }
        }
        vocab.entities = entities;
        Ok(vocab)
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn get(&self, id: &str) -> Option<&Entity> {
        self.by_id.get(id).map(|&i| &self.entities[i as usize])
    }

    /// Ordinals of synonyms containing every term, ascending.
    fn matching_synonyms(&self, terms: &[String]) -> Vec<u32> {
        let mut gram_lists: Vec<&[u32]> = Vec::new();
        for term in terms {
            let chars: Vec<char> = term.chars().collect();
            for w in chars.windows(3) {
                match self.trigrams.get(&[w[0], w[1], w[2]]) {
                    Some(list) => gram_lists.push(list),
                    None => return Vec::new(),
                }
            }
        }
        let candidates: Vec<u32> = if gram_lists.is_empty() {
            (0..self.synonyms.len() as u32).collect()
        } else {
            intersect_sorted(&gram_lists)
        };
        candidates
            .into_iter()
            .filter(|&s| {
                let lower = &self.synonyms[s as usize].lower;
                terms.iter().all(|t| lower.contains(t.as_str()))
            })
            .collect()
    }

    /// Entity ids matching every term of `kw` in at least one synonym.
    pub fn translate_keyword(&self, kw: &Keyword) -> Result<BTreeSet<String>, VocabularyError> {
        let terms = kw.terms();
        if terms.is_empty() {
            return Err(VocabularyError::EmptyKeyword);
        }
        Ok(self
            .matching_synonyms(&terms)
            .into_iter()
            .map(|s| {
                self.entities[self.synonyms[s as usize].entity as usize]
                    .id
                    .clone()
            })
            .collect())
    }

    /// Autocomplete: matching synonyms ordered shortest first, then by
    /// synonym text, then by entity id.
    pub fn suggest(&self, partial: &str, limit: usize) -> Vec<Suggestion> {
        let terms = query_terms(partial);
        if terms.is_empty() || limit == 0 {
            return Vec::new();
        }
        let mut hits: Vec<(usize, &str, &str, EntityType)> = self
            .matching_synonyms(&terms)
            .into_iter()
            .map(|s| {
                let entry = &self.synonyms[s as usize];
                let entity = &self.entities[entry.entity as usize];
                let syn = entity.synonyms[entry.synonym as usize].as_str();
                (
                    syn.chars().count(),
                    syn,
                    entity.id.as_str(),
                    entity.entity_type,
                )
            })
            .collect();
        hits.sort_unstable_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
        hits.into_iter()
            .take(limit)
            .map(|(_, syn, id, ty)| Suggestion {
                synonym: syn.to_owned(),
                entity_id: id.to_owned(),
                entity_type: ty,
            })
            .collect()
    }

    /// Suggestions for a keyword that translated to nothing: the longest
    /// prefix of the keyword (at least three characters) that does match.
    pub fn nearest_suggestions(&self, kw: &Keyword, limit: usize) -> Vec<Suggestion> {
        let raw = kw.raw().trim();
        let bounds: Vec<usize> = raw
            .char_indices()
            .map(|(i, _)| i)
            .chain(std::iter::once(raw.len()))
            .collect();
        for &end in bounds.iter().rev() {
            let prefix = &raw[..end];
            if prefix.trim().chars().count() < 3 {
                break;
            }
            let hits = self.suggest(prefix, limit);
            if !hits.is_empty() {
                return hits;
            }
        }
        Vec::new()
    }
}
