use super::{DataCiteRecord, NameEntry, KERNEL_NAMESPACE, SCHEMA_LOCATION};

const ORCID_SCHEME_URI: &str = "http://orcid.org";
const ROR_AFFILIATION_SCHEME_URI: &str = "http://ror.org";
const ROR_FUNDER_SCHEME_URI: &str = "https://ror.org";

/// Every element name the renderer can produce.
pub const EMITTED_ELEMENTS: &[&str] = &[
    "resource",
    "identifier",
    "creators",
    "creator",
    "creatorName",
    "givenName",
    "familyName",
    "nameIdentifier",
    "affiliation",
    "titles",
    "title",
    "publisher",
    "publicationYear",
    "subjects",
    "subject",
    "contributors",
    "contributor",
    "contributorName",
    "dates",
    "date",
    "language",
    "resourceType",
    "alternateIdentifiers",
    "alternateIdentifier",
    "relatedIdentifiers",
    "relatedIdentifier",
    "version",
    "rightsList",
    "rights",
    "descriptions",
    "description",
    "fundingReferences",
    "fundingReference",
    "funderName",
    "funderIdentifier",
    "awardNumber",
    "awardTitle",
];

struct Element {
    name: &'static str,
    attrs: Vec<(&'static str, String)>,
    content: Content,
}

enum Content {
    Text(String),
    Children(Vec<Element>),
}

impl Element {
    fn text(name: &'static str, value: impl Into<String>) -> Self {
        Self {
            name,
            attrs: Vec::new(),
            content: Content::Text(value.into()),
        }
    }

    fn parent(name: &'static str, children: Vec<Element>) -> Self {
        Self {
            name,
            attrs: Vec::new(),
            content: Content::Children(children),
        }
    }

    fn attr(mut self, key: &'static str, value: impl Into<String>) -> Self {
        self.attrs.push((key, value.into()));
        self
    }

    fn attr_opt(self, key: &'static str, value: &Option<String>) -> Self {
        match value {
            Some(v) => self.attr(key, v.clone()),
            None => self,
        }
    }

    fn write(&self, out: &mut String, depth: usize) {
        for _ in 0..depth {
            out.push_str("  ");
        }
        out.push('<');
        out.push_str(self.name);
        for (k, v) in &self.attrs {
            out.push(' ');
            out.push_str(k);
            out.push_str("=\"");
            escape_into(out, v, true);
            out.push('"');
        }
        match &self.content {
            Content::Text(t) => {
                out.push('>');
                escape_into(out, t, false);
                out.push_str("</");
                out.push_str(self.name);
                out.push_str(">\n");
            }
            Content::Children(children) if children.is_empty() => out.push_str("/>\n"),
            Content::Children(children) => {
                out.push_str(">\n");
                for child in children {
                    child.write(out, depth + 1);
                }
                for _ in 0..depth {
                    out.push_str("  ");
                }
                out.push_str("</");
                out.push_str(self.name);
                out.push_str(">\n");
            }
        }
    }
}

fn is_xml_char(c: char) -> bool {
    matches!(c, '\u{9}' | '\u{A}' | '\u{D}' | '\u{20}'..='\u{D7FF}' | '\u{E000}'..='\u{FFFD}' | '\u{10000}'..)
}

fn escape_into(out: &mut String, text: &str, attribute: bool) {
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' if attribute => out.push_str("&quot;"),
            '\t' if attribute => out.push_str("&#9;"),
            '\n' if attribute => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            c if is_xml_char(c) => out.push(c),
            _ => out.push('\u{FFFD}'),
        }
    }
}

fn name_children(
    name_element: &'static str,
    entry: &NameEntry,
) -> Vec<Element> {
    let mut children = vec![Element::text(name_element, &entry.name)];
    if let Some(given) = &entry.given_name {
        children.push(Element::text("givenName", given));
    }
    if let Some(family) = &entry.family_name {
        children.push(Element::text("familyName", family));
    }
    if let Some(orcid) = &entry.orcid {
        children.push(
            Element::text("nameIdentifier", orcid)
                .attr("nameIdentifierScheme", "ORCID")
                .attr("schemeURI", ORCID_SCHEME_URI),
        );
    }
    for aff in &entry.affiliations {
        let mut el = Element::text("affiliation", &aff.name);
        if let Some(ror) = &aff.ror {
            el = el
                .attr("affiliationIdentifier", ror)
                .attr("affiliationIdentifierScheme", "ROR")
                .attr("schemeURI", ROR_AFFILIATION_SCHEME_URI);
        }
        children.push(el);
    }
    children
}

fn build_tree(record: &DataCiteRecord) -> Element {
    let mut root = Vec::new();

    if let Some(id) = &record.identifier {
        root.push(Element::text("identifier", &id.value).attr("identifierType", &id.identifier_type));
    }

    root.push(Element::parent(
        "creators",
        record
            .creators
            .iter()
            .map(|c| Element::parent("creator", name_children("creatorName", c)))
            .collect(),
    ));

    root.push(Element::parent(
        "titles",
        record
            .titles
            .iter()
            .map(|t| Element::text("title", &t.value).attr_opt("titleType", &t.title_type))
            .collect(),
    ));

    root.push(Element::text("publisher", &record.publisher));
    root.push(Element::text(
        "publicationYear",
        format!("{:04}", record.publication_year),
    ));

    if !record.subjects.is_empty() {
        root.push(Element::parent(
            "subjects",
            record
                .subjects
                .iter()
                .map(|s| {
                    Element::text("subject", &s.value)
                        .attr_opt("schemeURI", &s.scheme_uri)
                        .attr_opt("valueURI", &s.value_uri)
                })
                .collect(),
        ));
    }

    if !record.contributors.is_empty() {
        root.push(Element::parent(
            "contributors",
            record
                .contributors
                .iter()
                .map(|c| {
                    Element::parent("contributor", name_children("contributorName", &c.name))
                        .attr("contributorType", &c.contributor_type)
                })
                .collect(),
        ));
    }

    if !record.dates.is_empty() {
        root.push(Element::parent(
            "dates",
            record
                .dates
                .iter()
                .map(|d| Element::text("date", &d.value).attr("dateType", &d.date_type))
                .collect(),
        ));
    }

    root.push(Element::text("language", &record.language));
    root.push(
        Element::text("resourceType", &record.resource_type.value)
            .attr("resourceTypeGeneral", &record.resource_type.general),
    );

    if !record.alternate_identifiers.is_empty() {
        root.push(Element::parent(
            "alternateIdentifiers",
            record
                .alternate_identifiers
                .iter()
                .map(|a| {
                    Element::text("alternateIdentifier", &a.value)
                        .attr("alternateIdentifierType", &a.identifier_type)
                })
                .collect(),
        ));
    }

    if !record.related_identifiers.is_empty() {
        root.push(Element::parent(
            "relatedIdentifiers",
            record
                .related_identifiers
                .iter()
                .map(|r| {
                    Element::text("relatedIdentifier", &r.value)
                        .attr("relatedIdentifierType", &r.identifier_type)
                        .attr("relationType", &r.relation_type)
                })
                .collect(),
        ));
    }

    root.push(Element::text("version", &record.version));

    if let Some(rights) = &record.rights {
        root.push(Element::parent(
            "rightsList",
            vec![Element::text("rights", &rights.statement).attr_opt("rightsURI", &rights.uri)],
        ));
    }

    if !record.descriptions.is_empty() {
        root.push(Element::parent(
            "descriptions",
            record
                .descriptions
                .iter()
                .map(|d| {
                    Element::text("description", &d.value)
                        .attr("descriptionType", &d.description_type)
                })
                .collect(),
        ));
    }

    if !record.funding_references.is_empty() {
        root.push(Element::parent(
            "fundingReferences",
            record
                .funding_references
                .iter()
                .map(|f| {
                    let mut children = vec![Element::text("funderName", &f.funder_name)];
                    if let Some(ror) = &f.funder_ror {
                        children.push(
                            Element::text("funderIdentifier", ror)
                                .attr("funderIdentifierType", "ROR")
                                .attr("schemeURI", ROR_FUNDER_SCHEME_URI),
                        );
                    }
                    if let Some(number) = &f.award_number {
                        children.push(
                            Element::text("awardNumber", number).attr_opt("awardURI", &f.award_uri),
                        );
                    }
                    if let Some(title) = &f.award_title {
                        children.push(Element::text("awardTitle", title));
                    }
                    Element::parent("fundingReference", children)
                })
                .collect(),
        ));
    }

    Element::parent("resource", root)
        .attr("xmlns", KERNEL_NAMESPACE)
        .attr("xmlns:xsi", "http://www.w3.org/2001/XMLSchema-instance")
        .attr(
            "xsi:schemaLocation",
            format!("{KERNEL_NAMESPACE} {SCHEMA_LOCATION}"),
        )
}

/// Renders the record as UTF-8 XML in the kernel-4 namespace, children in
/// schema sequence order, indented by two spaces, newline-terminated.
pub fn render_xml(record: &DataCiteRecord) -> Vec<u8> {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    build_tree(record).write(&mut out, 0);
    out.into_bytes()
}
