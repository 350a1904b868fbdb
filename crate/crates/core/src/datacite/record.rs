use serde::Serialize;
use thiserror::Error;

use crate::metadata::{validate_metadata, ContributorsFile, PersonEntry, ProjectMetadata, ReleaseContext};
use crate::report::ValidationReport;

#[derive(Debug, Error)]
pub enum DataCiteError {
    #[error("metadata has validation errors:\n{0}")]
    Precondition(ValidationReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Identifier {
    pub value: String,
    pub identifier_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffiliationId {
    pub name: String,
    pub ror: Option<String>,
}

/// Name block shared by creators and contributors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NameEntry {
    pub name: String,
    pub given_name: Option<String>,
    pub family_name: Option<String>,
    pub orcid: Option<String>,
    pub affiliations: Vec<AffiliationId>,
}

impl From<&PersonEntry> for NameEntry {
    fn from(p: &PersonEntry) -> Self {
        Self {
            name: p.name.clone(),
            given_name: p.given_name.clone(),
            family_name: p.family_name.clone(),
            orcid: p.orcid.as_ref().map(|o| o.as_str().to_string()),
            affiliations: p
                .affiliations
                .iter()
                .map(|a| AffiliationId {
                    name: a.name.clone(),
                    ror: a.ror.clone(),
                })
                .collect(),
        }
    }
}

pub type CreatorEntry = NameEntry;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContributorEntry {
    pub contributor_type: String,
    #[serde(flatten)]
    pub name: NameEntry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TitleEntry {
    pub value: String,
    pub title_type: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubjectItem {
    pub value: String,
    pub scheme_uri: Option<String>,
    pub value_uri: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DateEntry {
    pub date_type: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResourceTypeEntry {
    pub value: String,
    pub general: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlternateIdentifierEntry {
    pub value: String,
    pub identifier_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelatedIdentifierEntry {
    pub value: String,
    pub identifier_type: String,
    pub relation_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RightsEntry {
    pub statement: String,
    pub uri: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescriptionEntry {
    pub value: String,
    pub description_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FundingEntry {
    pub funder_name: String,
    pub funder_ror: Option<String>,
    pub award_number: Option<String>,
    pub award_uri: Option<String>,
    pub award_title: Option<String>,
}

/// The selected DataCite 4.3 properties for one software release.
///
/// Size, Format and GeoLocation are never carried.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DataCiteRecord {
    pub identifier: Option<Identifier>,
    pub creators: Vec<CreatorEntry>,
    pub titles: Vec<TitleEntry>,
    pub publisher: String,
    pub publication_year: i32,
    pub subjects: Vec<SubjectItem>,
    pub contributors: Vec<ContributorEntry>,
    pub dates: Vec<DateEntry>,
    pub language: String,
    pub resource_type: ResourceTypeEntry,
    pub alternate_identifiers: Vec<AlternateIdentifierEntry>,
    pub related_identifiers: Vec<RelatedIdentifierEntry>,
    pub version: String,
    pub rights: Option<RightsEntry>,
    pub descriptions: Vec<DescriptionEntry>,
    pub funding_references: Vec<FundingEntry>,
}

pub const LANGUAGE: &str = "en-US";
pub const RESOURCE_TYPE_GENERAL: &str = "Software";

const NEW_VERSION_OF: &str = "IsNewVersionOf";
const VERSION_OF: &str = "IsVersionOf";

/// Merges placeholder relations from the metadata file with the DOIs known
/// for this release. Release DOIs win; entries left empty are dropped.
fn merge_related(meta: &ProjectMetadata, release: &ReleaseContext) -> Vec<RelatedIdentifierEntry> {
    let from_release = |relation: &str| match relation {
        NEW_VERSION_OF => release.previous_doi.clone(),
        VERSION_OF => release.concept_doi.clone(),
        _ => None,
    };

    let mut out = Vec::new();
    let mut filled = Vec::new();
    for rel in &meta.related_identifiers {
        let (value, kind) = match from_release(&rel.relation_type) {
            Some(doi) => {
                filled.push(rel.relation_type.as_str());
                (Some(doi), "DOI".to_string())
            }
            None => (rel.related_identifier.clone(), rel.related_identifier_type.clone()),
        };
        if let Some(value) = value.filter(|v| !v.trim().is_empty()) {
            out.push(RelatedIdentifierEntry {
                value,
                identifier_type: kind,
                relation_type: rel.relation_type.clone(),
            });
        }
    }
    for relation in [NEW_VERSION_OF, VERSION_OF] {
        if filled.contains(&relation) {
            continue;
        }
        if let Some(doi) = from_release(relation) {
            out.push(RelatedIdentifierEntry {
                value: doi,
                identifier_type: "DOI".into(),
                relation_type: relation.into(),
            });
        }
    }
    out
}

/// Builds the record for one release.
///
/// Fails when [`validate_metadata`] reports errors or the release context
/// is inconsistent. Warnings do not block.
pub fn build_record(
    meta: &ProjectMetadata,
    contribs: &ContributorsFile,
    release: &ReleaseContext,
) -> Result<DataCiteRecord, DataCiteError> {
    let mut report = validate_metadata(meta, contribs);
    if let Err(e) = release.check() {
        report.error("release", e.to_string());
    }
    if report.has_errors() {
        let errors = ValidationReport {
            findings: report.errors().cloned().collect(),
        };
        return Err(DataCiteError::Precondition(errors));
    }

    let mut titles = vec![TitleEntry {
        value: meta.title.clone(),
        title_type: None,
    }];
    titles.extend(meta.additional_titles.iter().map(|t| TitleEntry {
        value: t.additional_title.clone(),
        title_type: Some(
            t.additional_title_type
                .clone()
                .unwrap_or_else(|| "AlternativeTitle".into()),
        ),
    }));

    let mut alternate_identifiers: Vec<AlternateIdentifierEntry> = meta
        .alternate_identifiers
        .iter()
        .map(|a| AlternateIdentifierEntry {
            value: a.alternate_identifier.clone(),
            identifier_type: a.alternate_identifier_type.clone(),
        })
        .collect();
    if let Some(url) = &release.release_page_url {
        let entry = AlternateIdentifierEntry {
            value: url.clone(),
            identifier_type: "URL".into(),
        };
        if !alternate_identifiers.contains(&entry) {
            alternate_identifiers.push(entry);
        }
    }

    Ok(DataCiteRecord {
        identifier: release.doi.as_ref().map(|doi| Identifier {
            value: doi.clone(),
            identifier_type: "DOI".into(),
        }),
        creators: contribs.creators.iter().map(NameEntry::from).collect(),
        titles,
        publisher: meta.publisher.clone(),
        publication_year: release.publication_year(),
        subjects: meta
            .subjects
            .iter()
            .map(|s| SubjectItem {
                value: s.subject.clone(),
                scheme_uri: s.scheme_uri.clone(),
                value_uri: s.value_uri.clone(),
            })
            .collect(),
        contributors: contribs
            .contributors
            .iter()
            .map(|c| ContributorEntry {
                contributor_type: c.contributor_type.clone(),
                name: NameEntry::from(&c.person),
            })
            .collect(),
        dates: vec![
            DateEntry {
                date_type: "Created".into(),
                value: release.created_date.to_string(),
            },
            DateEntry {
                date_type: "Issued".into(),
                value: release.issued_date.to_string(),
            },
        ],
        language: LANGUAGE.into(),
        resource_type: ResourceTypeEntry {
            value: meta.resource.clone(),
            general: RESOURCE_TYPE_GENERAL.into(),
        },
        alternate_identifiers,
        related_identifiers: merge_related(meta, release),
        version: release.version_tag.clone(),
        rights: meta.rights.as_ref().map(|statement| RightsEntry {
            statement: statement.clone(),
            uri: meta.rights_url.clone(),
        }),
        descriptions: meta
            .descriptions
            .iter()
            .map(|d| DescriptionEntry {
                value: d.description.clone(),
                description_type: d.description_type.clone(),
            })
            .collect(),
        funding_references: meta
            .funding_references
            .iter()
            .map(|f| FundingEntry {
                funder_name: f.name.clone(),
                funder_ror: f.ror.clone(),
                award_number: f.award_number.clone(),
                award_uri: f.award_uri.clone(),
                award_title: f.award_title.clone(),
            })
            .collect(),
    })
}
