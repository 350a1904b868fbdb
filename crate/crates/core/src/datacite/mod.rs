//! DataCite 4.3 records: construction from the metadata files and a release
//! context, mandatory-property checks, and XML rendering.

mod mandatory;
mod record;
mod xml;

pub use mandatory::check_mandatory;
pub use record::{
    build_record, AffiliationId, AlternateIdentifierEntry, CreatorEntry, DataCiteError,
    DataCiteRecord, DateEntry, DescriptionEntry, FundingEntry, Identifier, NameEntry,
    ContributorEntry, RelatedIdentifierEntry, ResourceTypeEntry, RightsEntry, SubjectItem,
    TitleEntry,
};
pub use xml::{render_xml, EMITTED_ELEMENTS};

/// File name of the rendered record in release assets and bags.
pub const DATACITE_FILE_NAME: &str = "datacite.xml";

pub const KERNEL_NAMESPACE: &str = "http://datacite.org/schema/kernel-4";
pub const SCHEMA_LOCATION: &str = "http://schema.datacite.org/meta/kernel-4.3/metadata.xsd";
