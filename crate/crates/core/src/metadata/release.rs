use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use super::MetadataError;

/// Facts about one release that do not live in the metadata files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReleaseContext {
    pub version_tag: String,
    /// Date of the release (DataCite `Created`).
    pub created_date: NaiveDate,
    /// Date of the archive upload (DataCite `Issued`).
    pub issued_date: NaiveDate,
    pub release_page_url: Option<String>,
    pub doi: Option<String>,
    pub previous_doi: Option<String>,
    pub concept_doi: Option<String>,
}

impl ReleaseContext {
    pub fn new(
        version_tag: impl Into<String>,
        created_date: NaiveDate,
        issued_date: NaiveDate,
    ) -> Result<Self, MetadataError> {
        let ctx = Self {
            version_tag: version_tag.into(),
            created_date,
            issued_date,
            release_page_url: None,
            doi: None,
            previous_doi: None,
            concept_doi: None,
        };
        ctx.check()?;
        Ok(ctx)
    }

    pub fn with_release_page(mut self, url: impl Into<String>) -> Self {
        self.release_page_url = Some(url.into());
        self
    }

    pub fn with_doi(mut self, doi: impl Into<String>) -> Self {
        self.doi = Some(doi.into());
        self
    }

    pub fn with_previous_doi(mut self, doi: impl Into<String>) -> Self {
        self.previous_doi = Some(doi.into());
        self
    }

    pub fn with_concept_doi(mut self, doi: impl Into<String>) -> Self {
        self.concept_doi = Some(doi.into());
        self
    }

    pub fn check(&self) -> Result<(), MetadataError> {
        if self.version_tag.trim().is_empty() {
            return Err(MetadataError::Release("version tag is empty".into()));
        }
        if self.created_date > self.issued_date {
            return Err(MetadataError::Release(format!(
                "release date {} is after issue date {}",
                self.created_date, self.issued_date
            )));
        }
        Ok(())
    }

    pub fn publication_year(&self) -> i32 {
        self.created_date.year()
    }
}
