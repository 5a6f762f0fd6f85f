use std::collections::BTreeSet;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::{DocEntry, IndexError};

/// Result refinement by collection, document class and publication date.
/// Absent dimensions match everything; the date bounds are inclusive and
/// exclude undated documents whenever either bound is set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocFilter {
    pub sources: Option<BTreeSet<String>>,
    pub classes: Option<BTreeSet<String>>,
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
}

impl DocFilter {
    pub fn validate(&self) -> Result<(), IndexError> {
        match (self.from, self.to) {
            (Some(from), Some(to)) if from > to => Err(IndexError::InvalidDateRange { from, to }),
            _ => Ok(()),
        }
    }

    pub fn is_unrestricted(&self) -> bool {
        self.sources.is_none() && self.classes.is_none() && self.from.is_none() && self.to.is_none()
    }

    pub fn matches(&self, doc: &DocEntry) -> bool {
        if let Some(sources) = &self.sources {
            if !sources.contains(&doc.source) {
                return false;
            }
        }
        if let Some(classes) = &self.classes {
            if !doc.classes.iter().any(|c| classes.contains(c)) {
                return false;
            }
        }
        if self.from.is_some() || self.to.is_some() {
            let Some(date) = doc.publication_date else {
                return false;
            };
            if self.from.is_some_and(|f| date < f) || self.to.is_some_and(|t| date > t) {
                return false;
            }
        }
        true
    }
}
