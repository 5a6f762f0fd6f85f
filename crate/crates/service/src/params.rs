use std::collections::{BTreeSet, HashMap};

use chrono::NaiveDate;
use narrative_core::{DocFilter, EdgeKey, Keyword, PatternQuery, DEFAULT_TOP_K};

use crate::error::ApiError;

/// Raw query-string parameters. Values are parsed here rather than by an
/// extractor so that bad input yields a structured error.
pub(crate) struct Params(pub HashMap<String, String>);

/// Splits a `|`-separated list, dropping blank items.
fn split_list(raw: &str) -> impl Iterator<Item = &str> {
    raw.split('|').map(str::trim).filter(|s| !s.is_empty())
}

impl Params {
    fn get(&self, name: &str) -> Option<&str> {
        self.0
            .get(name)
            .map(String::as_str)
            .filter(|v| !v.trim().is_empty())
    }

    pub fn text(&self, name: &str) -> &str {
        self.0.get(name).map_or("", String::as_str)
    }

    pub fn required(&self, name: &str) -> Result<&str, ApiError> {
        self.get(name)
            .ok_or_else(|| ApiError::invalid_parameter(name, "", "required"))
    }

    pub fn usize_or(&self, name: &str, default: usize) -> Result<usize, ApiError> {
        match self.get(name) {
            None => Ok(default),
            Some(v) => v.trim().parse().map_err(|_| {
                ApiError::invalid_parameter(name, v, "expected a non-negative integer")
            }),
        }
    }

    fn date(&self, name: &str) -> Result<Option<NaiveDate>, ApiError> {
        self.get(name)
            .map(|v| {
                NaiveDate::parse_from_str(v.trim(), "%Y-%m-%d")
                    .map_err(|_| ApiError::invalid_parameter(name, v, "expected YYYY-MM-DD"))
            })
            .transpose()
    }

    fn set(&self, name: &str) -> Option<BTreeSet<String>> {
        let items: BTreeSet<String> = split_list(self.get(name)?).map(str::to_owned).collect();
        (!items.is_empty()).then_some(items)
    }

    pub fn keywords(&self) -> Vec<Keyword> {
        split_list(self.text("keywords"))
            .map(Keyword::new)
            .collect()
    }

    pub fn filter(&self) -> Result<DocFilter, ApiError> {
        Ok(DocFilter {
            sources: self.set("sources"),
            classes: self.set("classes"),
            from: self.date("from")?,
            to: self.date("to")?,
        })
    }

    pub fn query(&self) -> Result<PatternQuery, ApiError> {
        Ok(PatternQuery::new(self.keywords())
            .with_top_k(self.usize_or("top_k", DEFAULT_TOP_K)?)
            .with_filter(self.filter()?))
    }

    pub fn edge(&self) -> Result<EdgeKey, ApiError> {
        Ok(EdgeKey::new(
            self.required("subject")?,
            self.required("predicate")?,
            self.required("object")?,
        ))
    }
}
