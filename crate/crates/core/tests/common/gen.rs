//! Proptest strategies for valid metadata documents and release contexts.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use proptest::prelude::*;
use proptest::sample::select;
use relpub_core::identifiers::Orcid;
use relpub_core::metadata::{
    AdditionalTitle, AlternateIdentifier, Affiliation, Contributor, ContributorsFile, Description,
    FundingReference, PersonEntry, ProjectMetadata, RelatedIdentifier, ReleaseContext, SubjectEntry,
};
use relpub_core::vocab;

use super::orcid_with_check_digit;

const RORS: &[&str] = &[
    "https://ror.org/04t3en479",
    "https://ror.org/018mejw64",
    "https://ror.org/05a28rw58",
];

/// Non-blank text including markup characters and non-ASCII letters.
pub fn text() -> impl Strategy<Value = String> {
    "[A-Za-z0-9&<>\"'éßł中][A-Za-z0-9 &<>\"'éßł中.,;:()/-]{0,24}"
}

fn url() -> impl Strategy<Value = String> {
    ("[a-z]{1,10}", "[a-z0-9]{0,8}").prop_map(|(host, path)| format!("https://{host}.example.org/{path}"))
}

fn orcid() -> impl Strategy<Value = Orcid> {
    "[0-9]{15}".prop_map(|base| Orcid::parse(&orcid_with_check_digit(&base)).expect("oracle ORCID parses"))
}

fn affiliation() -> impl Strategy<Value = Affiliation> {
    (text(), proptest::option::of(select(RORS))).prop_map(|(name, ror)| Affiliation {
        name,
        ror: ror.map(str::to_string),
    })
}

pub fn person() -> impl Strategy<Value = PersonEntry> {
    let individual = (
        "[A-Z][a-zé]{1,10}",
        "[A-Z][a-z]{1,10}",
        proptest::option::of(orcid()),
        prop::collection::vec(affiliation(), 0..3),
    )
        .prop_map(|(family, given, orcid, affiliations)| PersonEntry {
            name: format!("{family}, {given}"),
            given_name: Some(given),
            family_name: Some(family),
            orcid,
            affiliations,
        });
    let organization = text().prop_map(|name| PersonEntry {
        name,
        given_name: None,
        family_name: None,
        orcid: None,
        affiliations: vec![],
    });
    prop_oneof![4 => individual, 1 => organization]
}

fn contributor() -> impl Strategy<Value = Contributor> {
    (person(), select(vocab::CONTRIBUTOR_TYPES)).prop_map(|(person, kind)| Contributor {
        person,
        contributor_type: kind.to_string(),
    })
}

pub fn contributors() -> impl Strategy<Value = ContributorsFile> {
    (
        prop::collection::vec(person(), 1..5),
        prop::collection::vec(contributor(), 0..4),
    )
        .prop_map(|(creators, contributors)| ContributorsFile {
            creators,
            contributors,
        })
}

fn subject() -> impl Strategy<Value = SubjectEntry> {
    (text(), proptest::bool::ANY, "[0-9]{8}").prop_map(|(subject, with_uri, id)| {
        let scheme = "http://id.loc.gov/authorities/subjects";
        SubjectEntry {
            subject,
            value_uri: with_uri.then(|| format!("{scheme}/sh{id}")),
            scheme_uri: with_uri.then(|| scheme.to_string()),
        }
    })
}

fn funding() -> impl Strategy<Value = FundingReference> {
    (
        text(),
        proptest::option::of(select(RORS)),
        proptest::option::of("[0-9]{4,9}"),
        proptest::option::of(url()),
        proptest::option::of(text()),
    )
        .prop_map(|(name, ror, award_number, award_uri, award_title)| FundingReference {
            name,
            ror: ror.map(str::to_string),
            award_number,
            award_uri,
            award_title,
        })
}

fn related() -> impl Strategy<Value = RelatedIdentifier> {
    (
        select(vocab::RELATION_TYPES),
        select(vocab::RELATED_IDENTIFIER_TYPES),
        proptest::option::of("10\\.[0-9]{4,5}/[a-z0-9.]{1,12}"),
    )
        .prop_map(|(relation, kind, id)| RelatedIdentifier {
            relation_type: relation.to_string(),
            related_identifier: id,
            related_identifier_type: kind.to_string(),
        })
}

pub fn project() -> impl Strategy<Value = ProjectMetadata> {
    let head = (
        text(),
        prop::collection::vec(
            (text(), proptest::option::of(select(vocab::TITLE_TYPES))).prop_map(|(t, k)| AdditionalTitle {
                additional_title: t,
                additional_title_type: k.map(str::to_string),
            }),
            0..3,
        ),
        prop::collection::vec(text(), 0..5),
        text(),
        prop::collection::vec(
            (text(), select(vocab::DESCRIPTION_TYPES)).prop_map(|(d, k)| Description {
                description: d,
                description_type: k.to_string(),
            }),
            0..3,
        ),
        prop::collection::vec(subject(), 0..6),
    );
    let tail = (
        text(),
        prop_oneof![Just(String::new()), select(vocab::RESOURCE_TYPES_GENERAL).prop_map(str::to_string)],
        prop::collection::vec(
            (url(), "[A-Za-z]{2,6}").prop_map(|(id, kind)| AlternateIdentifier {
                alternate_identifier: id,
                alternate_identifier_type: kind,
            }),
            0..3,
        ),
        prop::collection::vec(related(), 0..4),
        proptest::option::of(text()),
        proptest::option::of(url()),
        proptest::option::of(text()),
        prop::collection::vec(funding(), 0..3),
    );
    (head, tail).prop_map(
        |(
            (title, additional_titles, keywords, publisher, descriptions, subjects),
            (resource, resource_type, alternate_identifiers, related_identifiers, rights, rights_url, rights_holder, funding_references),
        )| ProjectMetadata {
            title,
            additional_titles,
            keywords,
            publisher,
            descriptions,
            subjects,
            radar_subjects: vec![],
            resource,
            resource_type,
            alternate_identifiers,
            related_identifiers,
            rights,
            rights_url,
            rights_holder,
            funding_references,
            extra: BTreeMap::new(),
        },
    )
}

pub fn release() -> impl Strategy<Value = ReleaseContext> {
    (
        "v[0-9]{1,2}\\.[0-9]{1,2}(\\.[0-9])?",
        0i64..10_000,
        0i64..400,
        proptest::option::of("10\\.[0-9]{4,5}/[a-z0-9.]{1,12}"),
        proptest::option::of(url()),
        proptest::option::of("10\\.[0-9]{4,5}/[a-z0-9.]{1,12}"),
    )
        .prop_map(|(tag, offset, delay, doi, page, previous)| {
            let created = NaiveDate::from_ymd_opt(2000, 1, 1).unwrap() + chrono::Duration::days(offset);
            let issued = created + chrono::Duration::days(delay);
            let mut ctx = ReleaseContext::new(tag, created, issued).expect("ordered dates");
            if let Some(doi) = doi {
                ctx = ctx.with_doi(doi);
            }
            if let Some(page) = page {
                ctx = ctx.with_release_page(page);
            }
            if let Some(previous) = previous {
                ctx = ctx.with_previous_doi(previous);
            }
            ctx
        })
}
