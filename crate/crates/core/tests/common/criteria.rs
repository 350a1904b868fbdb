//! Checks shared by the per-module tests and the acceptance run. Each
//! panics on failure and returns a one-line summary on success.

use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, TestRunner};
use relpub_core::bagpack::{serialize_bag, validate_bag};
use relpub_core::datacite::{build_record, check_mandatory, render_xml};
use relpub_core::sync::{parse_bibtex, render_publications, sync_site, Publication};
use relpub_mock::{MockArchive, MockArchiveConfig};
use roxmltree::Document;
use sha2::{Digest, Sha256};

use super::lifecycle::{adapter, op, run_ops, small_assets, Harness};
use super::sites::{changed, page_body, site_copy, site_repo_fixture, tree_digest};
use super::xml::{child, children, text, NS};
use super::{bags, gen, listing_inputs, v50, xsd};

/// The fixture metadata renders the expected DataCite fields.
pub fn listing_golden() -> String {
    let started = Instant::now();
    let (meta, contribs) = listing_inputs();
    let record = build_record(&meta, &contribs, &v50()).unwrap();
    let xml = String::from_utf8(render_xml(&record)).unwrap();
    let elapsed = started.elapsed();

    let doc = Document::parse(&xml).unwrap();
    let root = doc.root_element();
    assert!(root.has_tag_name((NS, "resource")));

    let titles: Vec<_> = children(child(root, "titles"), "title").collect();
    assert_eq!(text(titles[0]), "openCARP");
    assert_eq!(titles[0].attribute("titleType"), None);
    assert_eq!(text(titles[1]), "Cardiac Electrophysiology Simulator");
    assert_eq!(titles[1].attribute("titleType"), Some("AlternativeTitle"));

    assert_eq!(text(child(root, "publisher")), "Karlsruhe Institute of Technology (KIT)");

    let subjects: Vec<_> = children(child(root, "subjects"), "subject").collect();
    assert_eq!(subjects.len(), 5);
    for s in &subjects {
        assert_eq!(s.attribute("schemeURI"), Some("http://id.loc.gov/authorities/subjects"));
    }
    assert!(subjects
        .iter()
        .any(|s| s.attribute("valueURI") == Some("http://id.loc.gov/authorities/subjects/sh85082124")));

    assert_eq!(text(child(root, "language")), "en-US");
    let rt = child(root, "resourceType");
    assert_eq!(rt.attribute("resourceTypeGeneral"), Some("Software"));
    assert_eq!(text(rt), "Simulation code");
    assert_eq!(text(child(root, "version")), "v5.0");
    assert_eq!(text(child(root, "publicationYear")), "2021");

    let rights = child(child(root, "rightsList"), "rights");
    assert_eq!(text(rights), "ACADEMIC PUBLIC LICENSE (openCARP, v1.0)");
    assert_eq!(rights.attribute("rightsURI"), Some("https://openCARP.org/download/license"));

    let funding = child(child(root, "fundingReferences"), "fundingReference");
    assert_eq!(text(child(funding, "funderName")), "Deutsche Forschungsgemeinschaft");
    let funder = child(funding, "funderIdentifier");
    assert_eq!(text(funder), "https://ror.org/018mejw64");
    assert_eq!(funder.attribute("funderIdentifierType"), Some("ROR"));
    assert_eq!(text(child(funding, "awardNumber")), "391128822");

    let dates: Vec<_> = children(child(root, "dates"), "date")
        .map(|d| (d.attribute("dateType").unwrap(), text(d)))
        .collect();
    assert_eq!(dates, [("Created", "2021-07-01"), ("Issued", "2021-07-05")]);

    let creators: Vec<_> = children(child(root, "creators"), "creator").collect();
    assert_eq!(creators.len(), 2);
    assert_eq!(text(child(creators[0], "creatorName")), "Carberry, Josiah");
    let orcid = child(creators[0], "nameIdentifier");
    assert_eq!(text(orcid), "0000-0002-1825-0097");
    assert_eq!(orcid.attribute("nameIdentifierScheme"), Some("ORCID"));

    // unfilled related identifiers are left out entirely
    assert!(children(root, "relatedIdentifiers").next().is_none());
    assert!(children(root, "identifier").next().is_none());
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    format!("all fields match, rendered in {elapsed:.2?}")
}

/// 50 generated metadata sets render to schema-valid XML.
pub fn generated_records_schema_valid() -> String {
    let strategy = (gen::project(), gen::contributors(), gen::release());
    let mut runner = TestRunner::deterministic();
    let dir = tempfile::tempdir().unwrap();
    let (mut strict, mut tolerant) = (Vec::new(), Vec::new());
    for i in 0..50 {
        let (meta, contribs, ctx) = strategy.new_tree(&mut runner).unwrap().current();
        let record = build_record(&meta, &contribs, &ctx).unwrap_or_else(|e| panic!("instance {i}: {e}"));
        assert!(check_mandatory(&record, false).is_empty(), "instance {i}");
        let path = dir.path().join(format!("instance-{i:02}.xml"));
        std::fs::write(&path, render_xml(&record)).unwrap();
        if record.identifier.is_some() {
            strict.push(path);
        } else {
            tolerant.push(path);
        }
    }
    assert!(!strict.is_empty() && !tolerant.is_empty());
    xsd::validate(&strict, false).unwrap_or_else(|e| panic!("{e}"));
    xsd::validate(&tolerant, true).unwrap_or_else(|e| panic!("{e}"));
    format!(
        "50 instances valid against {} ({} with DOI, {} without)",
        xsd::schema_path().file_name().unwrap().to_string_lossy(),
        strict.len(),
        tolerant.len()
    )
}

/// 200 random asset sets: clean validation, exact Payload-Oxum, and every
/// single-byte tamper found.
pub fn bag_round_trip() -> String {
    let started = Instant::now();
    let mut runner = TestRunner::new(Config {
        cases: 200,
        failure_persistence: None,
        ..Config::default()
    });
    let tampered = std::cell::Cell::new(0usize);
    let strategy = (bags::asset_specs(), any::<usize>(), any::<usize>());
    runner
        .run(&strategy, |(specs, pick, offset)| {
            let dir = tempfile::tempdir().unwrap();
            let assets = bags::write_assets(&dir.path().join("assets"), &specs);
            let root = dir.path().join("bag");
            let bag = bags::build(&assets, &root);

            let report = validate_bag(&root);
            prop_assert!(report.is_empty(), "{:?}", report);

            let recount = bags::recount_oxum(&root);
            prop_assert_eq!(bags::bag_info_value(&root, "Payload-Oxum"), Some(recount.clone()));
            prop_assert_eq!(bag.payload_oxum(), recount);

            if bags::tamper(&root, pick, offset).is_some() {
                tampered.set(tampered.get() + 1);
                prop_assert!(validate_bag(&root).has_errors(), "tampered byte went unnoticed");
            }
            Ok(())
        })
        .unwrap_or_else(|e| panic!("{e}"));
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    format!(
        "200 sets valid, Oxum exact, {}/{} tampers detected, {elapsed:.1?}",
        tampered.get(),
        tampered.get()
    )
}

fn sha256_file(path: &std::path::Path) -> String {
    hex::encode(Sha256::digest(std::fs::read(path).unwrap()))
}

/// Two builds of the reference bag serialize to identical tars.
pub fn deterministic_tar() -> String {
    let dir = tempfile::tempdir().unwrap();
    let assets = bags::reference_assets();
    let mut digests = Vec::new();
    for run in ["first", "second"] {
        let parent = dir.path().join(run);
        let root = parent.join("openCARP-v5.0");
        std::fs::create_dir_all(&parent).unwrap();
        bags::build(&assets, &root);
        // file timestamps differ between runs; the archive must not
        std::thread::sleep(Duration::from_millis(20));
        let tar = serialize_bag(&root, &parent.join("bag.tar")).unwrap();
        digests.push(sha256_file(&tar));
    }
    assert_eq!(digests[0], digests[1]);
    format!("sha256 {}", &digests[0][..16])
}

/// The reference bag passes the python `bagit` validator.
pub fn reference_bag_interop() -> String {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().join("openCARP-v5.0");
    bags::build(&bags::reference_assets(), &root);
    let out = bags::python_bagit_validate(&root).unwrap_or_else(|e| panic!("bagit rejected the bag:\n{e}"));
    assert!(out.contains("4 payload files"), "{out}");
    out.lines().last().unwrap_or_default().trim().to_string()
}

/// 1000 random client operation sequences never see publication without
/// review.
pub fn lifecycle_safety() -> String {
    let mock = MockArchive::with_config(MockArchiveConfig {
        auto_publish_after_polls: Some(3),
        ..MockArchiveConfig::default()
    });
    let dir = tempfile::tempdir().unwrap();
    let files = small_assets(dir.path(), 3);
    let h = Harness {
        adapter: adapter(&mock),
        mock,
        files,
        state: dir.path().join(".relpub-state.json"),
        _dir: dir,
    };
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    let case = std::cell::Cell::new(0usize);
    runner
        .run(&prop::collection::vec(op(), 1..16), |ops| {
            case.set(case.get() + 1);
            run_ops(&h, &ops, case.get()).map_err(TestCaseError::fail)
        })
        .unwrap_or_else(|e| panic!("{e}"));
    let datasets = h.mock.datasets();
    let published = datasets.iter().filter(|d| d.state == "published").count();
    assert!(published > 0, "the sequences never reached publication");
    format!(
        "{} sequences, {} datasets, {published} published, all via review",
        case.get(),
        datasets.len()
    )
}

/// The 12-page site syncs exactly its 3 tagged pages, once.
pub fn content_sync() -> String {
    let site = site_copy();
    let root = site.path();
    let before = tree_digest(root);
    assert_eq!(before.len(), 12);
    let originals: Vec<(std::path::PathBuf, String)> = before
        .keys()
        .map(|k| (k.clone(), std::fs::read_to_string(root.join(k)).unwrap()))
        .collect();

    let first = sync_site(root, "openCARP", &site_repo_fixture(), false).unwrap();
    assert!(first.is_clean(), "{:?}", first.errors);
    assert_eq!(first.updated.len(), 3);
    let after = tree_digest(root);
    assert_eq!(changed(&before, &after).len(), 3);
    for (rel, original) in &originals {
        let now = std::fs::read_to_string(root.join(rel)).unwrap();
        assert_eq!(page_body(&now), page_body(original), "body of {}", rel.display());
    }

    let second = sync_site(root, "openCARP", &site_repo_fixture(), false).unwrap();
    assert!(second.updated.is_empty());
    assert!(changed(&after, &tree_digest(root)).is_empty());

    let bib = std::fs::read_to_string(site_repo_fixture().join("publications.bib")).unwrap();
    let rendered = render_publications(&parse_bibtex(&bib).unwrap().entries);
    let expected: Vec<Publication> = serde_yaml::from_str(
        &std::fs::read_to_string(site_repo_fixture().join("expected-publications.yml")).unwrap(),
    )
    .unwrap();
    assert_eq!(rendered, expected);
    let years: Vec<Option<i32>> = rendered.iter().map(|p| p.year).collect();
    format!("3 of 12 pages updated, then 0; publications by year {years:?}")
}
