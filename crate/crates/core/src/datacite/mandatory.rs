use super::DataCiteRecord;
use crate::identifiers::is_doi;
use crate::report::ValidationReport;

/// Reports each DataCite-mandatory property the record lacks. The
/// identifier is only required when `require_identifier` is set, since a
/// locally built BagPack precedes DOI registration.
pub fn check_mandatory(record: &DataCiteRecord, require_identifier: bool) -> ValidationReport {
    let mut report = ValidationReport::new();
    match &record.identifier {
        None if require_identifier => report.error("Identifier", "missing DOI"),
        Some(id) if !is_doi(&id.value) => {
            report.error("Identifier", format!("`{}` is not a DOI", id.value))
        }
        _ => {}
    }
    if record.creators.is_empty() || record.creators.iter().any(|c| c.name.trim().is_empty()) {
        report.error("Creator", "at least one named creator is required");
    }
    if record.titles.is_empty() || record.titles.iter().any(|t| t.value.trim().is_empty()) {
        report.error("Title", "a non-empty title is required");
    }
    if record.publisher.trim().is_empty() {
        report.error("Publisher", "publisher is empty");
    }
    if !(1000..=9999).contains(&record.publication_year) {
        report.error(
            "PublicationYear",
            format!("`{}` is not a four-digit year", record.publication_year),
        );
    }
    if record.resource_type.general.trim().is_empty() || record.resource_type.value.trim().is_empty() {
        report.error("ResourceType", "resource type is incomplete");
    }
    report
}
