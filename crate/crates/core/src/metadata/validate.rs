use super::{ContributorsFile, PersonEntry, ProjectMetadata};
use crate::identifiers::{check_ror, is_absolute_url, Orcid};
use crate::report::ValidationReport;
use crate::vocab;

/// Checks every invariant of the two metadata documents.
///
/// Errors block record generation; warnings (unfilled related identifiers,
/// unknown keys, an overridden resource type) do not.
pub fn validate_metadata(meta: &ProjectMetadata, contribs: &ContributorsFile) -> ValidationReport {
    let mut report = ValidationReport::new();
    check_project(meta, &mut report);
    check_contributors(contribs, &mut report);
    report
}

fn check_url(report: &mut ValidationReport, path: String, value: &str) {
    if !is_absolute_url(value) {
        report.error(path, format!("`{value}` is not an absolute URL"));
    }
}

fn check_term(report: &mut ValidationReport, path: String, value: &str, allowed: &[&str]) {
    if !vocab::contains(allowed, value) {
        report.error(path, format!("`{value}` is not in the DataCite vocabulary"));
    }
}

fn check_project(meta: &ProjectMetadata, report: &mut ValidationReport) {
    if meta.title.trim().is_empty() {
        report.error("title", "title is empty");
    }
    if meta.publisher.trim().is_empty() {
        report.error("publisher", "publisher is empty");
    }
    if meta.resource.trim().is_empty() {
        report.error("resource", "resource type description is empty");
    }

    for (i, t) in meta.additional_titles.iter().enumerate() {
        if t.additional_title.trim().is_empty() {
            report.error(format!("additional_titles[{i}].additional_title"), "empty title");
        }
        if let Some(kind) = &t.additional_title_type {
            check_term(
                report,
                format!("additional_titles[{i}].additional_title_type"),
                kind,
                vocab::TITLE_TYPES,
            );
        }
    }

    for (i, d) in meta.descriptions.iter().enumerate() {
        if d.description.trim().is_empty() {
            report.error(format!("descriptions[{i}].description"), "empty description");
        }
        check_term(
            report,
            format!("descriptions[{i}].description_type"),
            &d.description_type,
            vocab::DESCRIPTION_TYPES,
        );
    }

    for (i, s) in meta.subjects.iter().enumerate() {
        if s.subject.trim().is_empty() {
            report.error(format!("subjects[{i}].subject"), "empty subject");
        }
        if let Some(v) = &s.value_uri {
            check_url(report, format!("subjects[{i}].value_uri"), v);
        }
        if let Some(v) = &s.scheme_uri {
            check_url(report, format!("subjects[{i}].scheme_uri"), v);
        }
        if let (Some(value), Some(scheme)) = (&s.value_uri, &s.scheme_uri) {
            if !value.starts_with(scheme.as_str()) {
                report.error(
                    format!("subjects[{i}].value_uri"),
                    format!("`{value}` is not under scheme `{scheme}`"),
                );
            }
        }
    }

    if meta.resource_type.is_empty() {
        report.warning("resource_type", "missing; Software is used");
    } else {
        check_term(
            report,
            "resource_type".into(),
            &meta.resource_type,
            vocab::RESOURCE_TYPES_GENERAL,
        );
        if meta.resource_type != "Software" && vocab::contains(vocab::RESOURCE_TYPES_GENERAL, &meta.resource_type) {
            report.warning(
                "resource_type",
                format!("`{}` is replaced by Software in the record", meta.resource_type),
            );
        }
    }

    for (i, a) in meta.alternate_identifiers.iter().enumerate() {
        if a.alternate_identifier.trim().is_empty() {
            report.error(
                format!("alternate_identifiers[{i}].alternate_identifier"),
                "empty identifier",
            );
        }
        if a.alternate_identifier_type.trim().is_empty() {
            report.error(
                format!("alternate_identifiers[{i}].alternate_identifier_type"),
                "empty identifier type",
            );
        }
    }

    for (i, r) in meta.related_identifiers.iter().enumerate() {
        check_term(
            report,
            format!("related_identifiers[{i}].relation_type"),
            &r.relation_type,
            vocab::RELATION_TYPES,
        );
        check_term(
            report,
            format!("related_identifiers[{i}].related_identifier_type"),
            &r.related_identifier_type,
            vocab::RELATED_IDENTIFIER_TYPES,
        );
        if r.related_identifier.is_none() {
            report.warning(
                format!("related_identifiers[{i}].related_identifier"),
                format!("unfilled related identifier ({})", r.relation_type),
            );
        }
    }

    if let Some(url) = &meta.rights_url {
        check_url(report, "rights_url".into(), url);
    }

    for (i, f) in meta.funding_references.iter().enumerate() {
        if f.name.trim().is_empty() {
            report.error(format!("funding_references[{i}].name"), "empty funder name");
        }
        if let Some(ror) = &f.ror {
            if let Err(e) = check_ror(ror) {
                report.error(format!("funding_references[{i}].ror"), e.to_string());
            }
        }
        if let Some(uri) = &f.award_uri {
            check_url(report, format!("funding_references[{i}].award_uri"), uri);
        }
    }

    for key in meta.extra.keys() {
        report.warning(key.clone(), "unknown key preserved");
    }
}

fn check_person(report: &mut ValidationReport, at: &str, person: &PersonEntry) {
    if person.name.trim().is_empty() {
        report.error(format!("{at}.name"), "empty name");
    }
    if let Some(orcid) = &person.orcid {
        if let Err(e) = Orcid::parse(orcid.as_str()) {
            report.error(format!("{at}.orcid"), e.to_string());
        }
    }
    for (i, aff) in person.affiliations.iter().enumerate() {
        if aff.name.trim().is_empty() {
            report.error(format!("{at}.affiliations[{i}].name"), "empty affiliation");
        }
        if let Some(ror) = &aff.ror {
            if let Err(e) = check_ror(ror) {
                report.error(format!("{at}.affiliations[{i}].ror"), e.to_string());
            }
        }
    }
}

fn check_contributors(contribs: &ContributorsFile, report: &mut ValidationReport) {
    if contribs.creators.is_empty() {
        report.error("creators", "at least one creator is required");
    }
    for (i, person) in contribs.creators.iter().enumerate() {
        check_person(report, &format!("creators[{i}]"), person);
    }
    for (i, c) in contribs.contributors.iter().enumerate() {
        let at = format!("contributors[{i}]");
        check_person(report, &at, &c.person);
        check_term(
            report,
            format!("{at}.contributor_type"),
            &c.contributor_type,
            vocab::CONTRIBUTOR_TYPES,
        );
    }
}
