use std::path::Path;

use serde::{Deserialize, Serialize};

use super::yaml::{self, list, opt_nonblank, opt_text};
use super::{Loaded, MetadataError};
use crate::identifiers::{check_ror, Orcid};
use crate::report::ValidationReport;
use crate::vocab;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affiliation {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ror: Option<String>,
}

/// A creator or contributor. Entries without given and family names are
/// organizations (e.g. a hosting institution).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersonEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub given_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orcid: Option<Orcid>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub affiliations: Vec<Affiliation>,
}

impl PersonEntry {
    pub fn is_organization(&self) -> bool {
        self.given_name.is_none() && self.family_name.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contributor {
    #[serde(flatten)]
    pub person: PersonEntry,
    pub contributor_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContributorsFile {
    pub creators: Vec<PersonEntry>,
    #[serde(default)]
    pub contributors: Vec<Contributor>,
}

// On-disk shapes, before identifiers are checked and names derived.

#[derive(Deserialize)]
struct RawAffiliation {
    #[serde(deserialize_with = "yaml::text")]
    name: String,
    #[serde(default, deserialize_with = "opt_nonblank")]
    ror: Option<String>,
}

#[derive(Deserialize)]
struct RawPerson {
    #[serde(default, deserialize_with = "opt_nonblank")]
    name: Option<String>,
    #[serde(default, deserialize_with = "opt_nonblank")]
    given_name: Option<String>,
    #[serde(default, deserialize_with = "opt_nonblank")]
    family_name: Option<String>,
    #[serde(default, deserialize_with = "opt_nonblank")]
    orcid: Option<String>,
    #[serde(default, deserialize_with = "list")]
    affiliations: Vec<RawAffiliation>,
    #[serde(default, deserialize_with = "opt_text")]
    contributor_type: Option<String>,
}

#[derive(Deserialize)]
struct RawContributors {
    creators: Vec<RawPerson>,
    #[serde(default, deserialize_with = "list")]
    contributors: Vec<RawPerson>,
}

impl RawPerson {
    fn into_person(self, origin: &Path, at: &str) -> Result<(PersonEntry, Option<String>), MetadataError> {
        let name = match (self.name, &self.family_name, &self.given_name) {
            (Some(name), _, _) => name,
            (None, Some(family), Some(given)) => format!("{family}, {given}"),
            (None, Some(family), None) => family.clone(),
            (None, None, _) => {
                return Err(MetadataError::schema(
                    origin,
                    &format!("{at}.name"),
                    "a name or a family_name is required",
                ))
            }
        };
        let orcid = self
            .orcid
            .map(|raw| {
                Orcid::parse(&raw).map_err(|source| MetadataError::Identifier {
                    path: origin.to_path_buf(),
                    field: format!("{at}.orcid"),
                    source,
                })
            })
            .transpose()?;
        let mut affiliations = Vec::with_capacity(self.affiliations.len());
        for (i, aff) in self.affiliations.into_iter().enumerate() {
            if let Some(ror) = &aff.ror {
                check_ror(ror).map_err(|source| MetadataError::Identifier {
                    path: origin.to_path_buf(),
                    field: format!("{at}.affiliations[{i}].ror"),
                    source,
                })?;
            }
            affiliations.push(Affiliation {
                name: aff.name,
                ror: aff.ror,
            });
        }
        let person = PersonEntry {
            name,
            given_name: self.given_name,
            family_name: self.family_name,
            orcid,
            affiliations,
        };
        Ok((person, self.contributor_type))
    }
}

impl ContributorsFile {
    pub fn from_yaml_str(origin: &Path, text: &str) -> Result<Loaded<Self>, MetadataError> {
        let value = yaml::parse_value(origin, text)?;
        Self::from_value(origin, value)
    }

    fn from_value(origin: &Path, value: serde_yaml::Value) -> Result<Loaded<Self>, MetadataError> {
        let raw: RawContributors = yaml::from_value(origin, value)?;
        if raw.creators.is_empty() {
            return Err(MetadataError::schema(
                origin,
                "creators",
                "at least one creator is required",
            ));
        }
        let mut warnings = ValidationReport::new();
        let mut creators = Vec::with_capacity(raw.creators.len());
        for (i, person) in raw.creators.into_iter().enumerate() {
            let at = format!("creators[{i}]");
            let (person, ctype) = person.into_person(origin, &at)?;
            if ctype.is_some() {
                warnings.warning(format!("{at}.contributor_type"), "ignored on creators");
            }
            creators.push(person);
        }
        let mut contributors = Vec::with_capacity(raw.contributors.len());
        for (i, person) in raw.contributors.into_iter().enumerate() {
            let at = format!("contributors[{i}]");
            let (person, ctype) = person.into_person(origin, &at)?;
            let contributor_type = ctype.ok_or_else(|| {
                MetadataError::schema(origin, &format!("{at}.contributor_type"), "missing contributor_type")
            })?;
            if !vocab::contains(vocab::CONTRIBUTOR_TYPES, &contributor_type) {
                return Err(MetadataError::schema(
                    origin,
                    &format!("{at}.contributor_type"),
                    format!(
                        "`{contributor_type}` is not a DataCite contributorType; allowed: {}",
                        vocab::listing(vocab::CONTRIBUTOR_TYPES)
                    ),
                ));
            }
            contributors.push(Contributor {
                person,
                contributor_type,
            });
        }
        Ok(Loaded {
            value: ContributorsFile {
                creators,
                contributors,
            },
            warnings,
        })
    }
}

/// Loads `CONTRIBUTORS.yml`: top-level `creators` (mandatory, non-empty)
/// and `contributors` lists. ORCID iDs are checksum-verified and ROR ids
/// pattern- and checksum-verified.
pub fn load_contributors(path: &Path) -> Result<Loaded<ContributorsFile>, MetadataError> {
    let value = yaml::read_value(path)?;
    ContributorsFile::from_value(path, value)
}
