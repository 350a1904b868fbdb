use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::yaml::{self, list, opt_nonblank, opt_text, text, text_list};
use super::{Loaded, MetadataError};
use crate::identifiers::{check_ror, is_absolute_url};
use crate::report::ValidationReport;
use crate::vocab;

/// Release-independent metadata as authored in `METADATA.yml`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectMetadata {
    #[serde(deserialize_with = "text")]
    pub title: String,
    #[serde(default, deserialize_with = "list")]
    pub additional_titles: Vec<AdditionalTitle>,
    #[serde(default, deserialize_with = "text_list")]
    pub keywords: Vec<String>,
    #[serde(default, deserialize_with = "text")]
    pub publisher: String,
    #[serde(default, deserialize_with = "list")]
    pub descriptions: Vec<Description>,
    #[serde(default, deserialize_with = "list")]
    pub subjects: Vec<SubjectEntry>,
    #[serde(default, deserialize_with = "text_list")]
    pub radar_subjects: Vec<String>,
    #[serde(default, deserialize_with = "text")]
    pub resource: String,
    #[serde(default, deserialize_with = "text")]
    pub resource_type: String,
    #[serde(default, deserialize_with = "list")]
    pub alternate_identifiers: Vec<AlternateIdentifier>,
    #[serde(default, deserialize_with = "list")]
    pub related_identifiers: Vec<RelatedIdentifier>,
    #[serde(default, deserialize_with = "opt_text", skip_serializing_if = "Option::is_none")]
    pub rights: Option<String>,
    #[serde(default, deserialize_with = "opt_text", skip_serializing_if = "Option::is_none")]
    pub rights_url: Option<String>,
    #[serde(default, deserialize_with = "opt_text", skip_serializing_if = "Option::is_none")]
    pub rights_holder: Option<String>,
    #[serde(default, deserialize_with = "list")]
    pub funding_references: Vec<FundingReference>,
    /// Keys this tool does not know about, carried through untouched.
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_yaml::Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditionalTitle {
    #[serde(deserialize_with = "text")]
    pub additional_title: String,
    #[serde(default, deserialize_with = "opt_text", skip_serializing_if = "Option::is_none")]
    pub additional_title_type: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Description {
    #[serde(deserialize_with = "text")]
    pub description: String,
    #[serde(deserialize_with = "text")]
    pub description_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubjectEntry {
    #[serde(deserialize_with = "text")]
    pub subject: String,
    #[serde(default, deserialize_with = "opt_text", skip_serializing_if = "Option::is_none")]
    pub value_uri: Option<String>,
    #[serde(default, deserialize_with = "opt_text", skip_serializing_if = "Option::is_none")]
    pub scheme_uri: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternateIdentifier {
    #[serde(deserialize_with = "text")]
    pub alternate_identifier: String,
    #[serde(deserialize_with = "text")]
    pub alternate_identifier_type: String,
}

/// A related identifier; Listing-style placeholders leave `related_identifier` empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatedIdentifier {
    #[serde(deserialize_with = "text")]
    pub relation_type: String,
    #[serde(default, deserialize_with = "opt_nonblank", skip_serializing_if = "Option::is_none")]
    pub related_identifier: Option<String>,
    #[serde(deserialize_with = "text")]
    pub related_identifier_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundingReference {
    #[serde(deserialize_with = "text")]
    pub name: String,
    #[serde(default, deserialize_with = "opt_text", skip_serializing_if = "Option::is_none")]
    pub ror: Option<String>,
    #[serde(default, deserialize_with = "opt_text", skip_serializing_if = "Option::is_none")]
    pub award_number: Option<String>,
    #[serde(default, deserialize_with = "opt_text", skip_serializing_if = "Option::is_none")]
    pub award_uri: Option<String>,
    #[serde(default, deserialize_with = "opt_text", skip_serializing_if = "Option::is_none")]
    pub award_title: Option<String>,
}

impl ProjectMetadata {
    /// Parses `METADATA.yml` content. `origin` is only used in error messages.
    pub fn from_yaml_str(origin: &Path, text: &str) -> Result<Loaded<Self>, MetadataError> {
        let value = yaml::parse_value(origin, text)?;
        Self::from_value(origin, value)
    }

    fn from_value(origin: &Path, value: serde_yaml::Value) -> Result<Loaded<Self>, MetadataError> {
        let meta: ProjectMetadata = yaml::from_value(origin, value)?;
        meta.check_fields(origin)?;
        let mut warnings = ValidationReport::new();
        for key in meta.extra.keys() {
            warnings.warning(key.clone(), "unknown key preserved");
        }
        for (i, rel) in meta.related_identifiers.iter().enumerate() {
            if rel.related_identifier.is_none() {
                warnings.warning(
                    format!("related_identifiers[{i}].related_identifier"),
                    format!("unfilled related identifier ({})", rel.relation_type),
                );
            }
        }
        Ok(Loaded {
            value: meta,
            warnings,
        })
    }

    pub fn to_yaml_string(&self) -> String {
        serde_yaml::to_string(self).expect("metadata serializes to YAML")
    }

    /// Load-time checks on URL-typed and vocabulary-typed keys.
    fn check_fields(&self, origin: &Path) -> Result<(), MetadataError> {
        let url = |field: String, value: &Option<String>| match value {
            Some(v) if !is_absolute_url(v) => Err(MetadataError::schema(
                origin,
                &field,
                format!("`{v}` is not an absolute URL"),
            )),
            _ => Ok(()),
        };
        let term = |field: String, value: &str, allowed: &[&str]| {
            if vocab::contains(allowed, value) {
                Ok(())
            } else {
                Err(MetadataError::schema(
                    origin,
                    &field,
                    format!(
                        "`{value}` is not in the controlled vocabulary ({})",
                        vocab::listing(allowed)
                    ),
                ))
            }
        };

        url("rights_url".into(), &self.rights_url)?;
        for (i, s) in self.subjects.iter().enumerate() {
            url(format!("subjects[{i}].value_uri"), &s.value_uri)?;
            url(format!("subjects[{i}].scheme_uri"), &s.scheme_uri)?;
        }
        for (i, f) in self.funding_references.iter().enumerate() {
            url(format!("funding_references[{i}].award_uri"), &f.award_uri)?;
            if let Some(ror) = &f.ror {
                check_ror(ror).map_err(|e| {
                    MetadataError::schema(origin, &format!("funding_references[{i}].ror"), e.to_string())
                })?;
            }
        }
        for (i, d) in self.descriptions.iter().enumerate() {
            term(
                format!("descriptions[{i}].description_type"),
                &d.description_type,
                vocab::DESCRIPTION_TYPES,
            )?;
        }
        for (i, r) in self.related_identifiers.iter().enumerate() {
            term(
                format!("related_identifiers[{i}].relation_type"),
                &r.relation_type,
                vocab::RELATION_TYPES,
            )?;
        }
        if !self.resource_type.is_empty() {
            term(
                "resource_type".into(),
                &self.resource_type,
                vocab::RESOURCE_TYPES_GENERAL,
            )?;
        }
        Ok(())
    }
}

/// Loads and checks a `METADATA.yml` file.
///
/// Keys outside the known set are kept in [`ProjectMetadata::extra`] and
/// reported as warnings, as are related identifiers left blank for the
/// release pipeline to fill in.
pub fn load_project_metadata(path: &Path) -> Result<Loaded<ProjectMetadata>, MetadataError> {
    let value = yaml::read_value(path)?;
    ProjectMetadata::from_value(path, value)
}
