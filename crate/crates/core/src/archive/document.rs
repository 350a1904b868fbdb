use serde_json::{json, Map, Value};

use super::ArchiveError;
use crate::datacite::{check_mandatory, DataCiteRecord, NameEntry};
use crate::metadata::ProjectMetadata;

/// Schema tag carried in every deposit document.
pub const DOCUMENT_SCHEMA: &str = "relpub-archive-1";

const PROVENANCE: &str = "The Issued date records when the release was uploaded to the archive, \
not when the curator published it.";

fn name_json(name: &NameEntry) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("name".into(), json!(name.name));
    if let Some(given) = &name.given_name {
        out.insert("givenName".into(), json!(given));
    }
    if let Some(family) = &name.family_name {
        out.insert("familyName".into(), json!(family));
    }
    if let Some(orcid) = &name.orcid {
        out.insert(
            "nameIdentifier".into(),
            json!({ "value": orcid, "scheme": "ORCID", "schemeURI": "http://orcid.org" }),
        );
    }
    let affiliations: Vec<Value> = name
        .affiliations
        .iter()
        .map(|a| {
            let mut entry = Map::new();
            entry.insert("name".into(), json!(a.name));
            if let Some(ror) = &a.ror {
                entry.insert("identifier".into(), json!(ror));
                entry.insert("scheme".into(), json!("ROR"));
            }
            Value::Object(entry)
        })
        .collect();
    if !affiliations.is_empty() {
        out.insert("affiliations".into(), Value::Array(affiliations));
    }
    out
}

fn put_opt(map: &mut Map<String, Value>, key: &str, value: &Option<String>) {
    if let Some(v) = value {
        map.insert(key.into(), json!(v));
    }
}

/// Maps a record to the archive's JSON deposit document.
///
/// Carries every record property plus the archive subject list, keywords
/// and rights holder from the metadata file. Without an identifier the DOI
/// field is left out so the archive can mint one.
pub fn map_metadata(record: &DataCiteRecord, meta: &ProjectMetadata) -> Result<Value, ArchiveError> {
    let report = check_mandatory(record, false);
    if report.has_errors() {
        return Err(ArchiveError::Precondition(report.to_string()));
    }

    let mut doc = Map::new();
    doc.insert("schema".into(), json!(DOCUMENT_SCHEMA));
    if let Some(id) = &record.identifier {
        doc.insert("doi".into(), json!(id.value));
    }
    doc.insert(
        "titles".into(),
        record
            .titles
            .iter()
            .map(|t| {
                let mut m = Map::new();
                m.insert("title".into(), json!(t.value));
                put_opt(&mut m, "titleType", &t.title_type);
                Value::Object(m)
            })
            .collect(),
    );
    doc.insert(
        "creators".into(),
        record.creators.iter().map(|c| Value::Object(name_json(c))).collect(),
    );
    doc.insert(
        "contributors".into(),
        record
            .contributors
            .iter()
            .map(|c| {
                let mut m = name_json(&c.name);
                m.insert("contributorType".into(), json!(c.contributor_type));
                Value::Object(m)
            })
            .collect(),
    );
    doc.insert("publisher".into(), json!(record.publisher));
    doc.insert("publicationYear".into(), json!(record.publication_year));
    doc.insert(
        "subjects".into(),
        record
            .subjects
            .iter()
            .map(|s| {
                let mut m = Map::new();
                m.insert("subject".into(), json!(s.value));
                put_opt(&mut m, "schemeURI", &s.scheme_uri);
                put_opt(&mut m, "valueURI", &s.value_uri);
                Value::Object(m)
            })
            .collect(),
    );
    doc.insert("archiveSubjects".into(), json!(meta.radar_subjects));
    doc.insert("keywords".into(), json!(meta.keywords));
    doc.insert(
        "dates".into(),
        record
            .dates
            .iter()
            .map(|d| json!({ "date": d.value, "dateType": d.date_type }))
            .collect(),
    );
    doc.insert("language".into(), json!(record.language));
    doc.insert(
        "resourceType".into(),
        json!({ "value": record.resource_type.value, "resourceTypeGeneral": record.resource_type.general }),
    );
    doc.insert(
        "alternateIdentifiers".into(),
        record
            .alternate_identifiers
            .iter()
            .map(|a| json!({ "value": a.value, "type": a.identifier_type }))
            .collect(),
    );
    doc.insert(
        "relatedIdentifiers".into(),
        record
            .related_identifiers
            .iter()
            .map(|r| json!({ "value": r.value, "type": r.identifier_type, "relationType": r.relation_type }))
            .collect(),
    );
    doc.insert("version".into(), json!(record.version));
    if let Some(rights) = &record.rights {
        let mut m = Map::new();
        m.insert("rights".into(), json!(rights.statement));
        put_opt(&mut m, "rightsURI", &rights.uri);
        put_opt(&mut m, "rightsHolder", &meta.rights_holder);
        doc.insert("rights".into(), Value::Object(m));
    } else if let Some(holder) = &meta.rights_holder {
        doc.insert("rights".into(), json!({ "rightsHolder": holder }));
    }
    doc.insert(
        "descriptions".into(),
        record
            .descriptions
            .iter()
            .map(|d| json!({ "description": d.value, "descriptionType": d.description_type }))
            .collect(),
    );
    doc.insert(
        "fundingReferences".into(),
        record
            .funding_references
            .iter()
            .map(|f| {
                let mut m = Map::new();
                m.insert("funderName".into(), json!(f.funder_name));
                if let Some(ror) = &f.funder_ror {
                    m.insert("funderIdentifier".into(), json!({ "value": ror, "type": "ROR" }));
                }
                put_opt(&mut m, "awardNumber", &f.award_number);
                put_opt(&mut m, "awardURI", &f.award_uri);
                put_opt(&mut m, "awardTitle", &f.award_title);
                Value::Object(m)
            })
            .collect(),
    );
    doc.insert("provenance".into(), json!(PROVENANCE));
    Ok(Value::Object(doc))
}
