mod support;

use std::path::Path;

use relpub_mock::MockGitLabConfig;
use support::{fixtures, project, relpub, Mocks, TAG};

fn golden(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

#[test]
fn validate_exit_codes() {
    let dir = project();
    let ok = relpub(dir.path(), &["validate"], &[]);
    assert_eq!(ok.code, 0, "{}{}", ok.stdout, ok.stderr);
    assert!(ok.stdout.contains("0 error(s), 2 warning(s)"), "{}", ok.stdout);

    let meta = std::fs::read_to_string(dir.path().join("METADATA.yml")).unwrap();
    let without_title: String = meta.lines().filter(|l| !l.starts_with("title:")).map(|l| format!("{l}\n")).collect();
    std::fs::write(dir.path().join("NO-TITLE.yml"), without_title).unwrap();
    let findings = relpub(dir.path(), &["validate", "--metadata", "NO-TITLE.yml"], &[]);
    assert_eq!(findings.code, 1, "{}{}", findings.stdout, findings.stderr);
    assert!(findings.stderr.contains("title"), "{}", findings.stderr);

    let missing = relpub(dir.path(), &["validate", "--metadata", "does/not/exist.yml"], &[]);
    assert_eq!(missing.code, 2, "{}{}", missing.stdout, missing.stderr);
}

#[test]
fn validate_json_matches_golden_file() {
    let dir = project();
    let run = relpub(dir.path(), &["--format", "json", "validate"], &[]);
    assert_eq!(run.code, 0);
    let expected: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(golden("validate-fixture.json")).unwrap()).unwrap();
    assert_eq!(run.json(), expected);
    assert_eq!(run.stdout.trim_end().lines().last(), Some("}"), "a single JSON document");
}

#[test]
fn datacite_to_stdout_and_file() {
    let dir = project();
    let args = ["datacite", "--tag", TAG, "--created", "2021-07-01", "--issued", "2021-07-05"];
    let mut to_stdout = args.to_vec();
    to_stdout.extend(["--out", "-"]);
    let run = relpub(dir.path(), &to_stdout, &[]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.contains("<title>openCARP</title>"));
    assert!(run.stdout.contains("<version>v5.0</version>"));

    let run = relpub(dir.path(), &args, &[]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let written = std::fs::read_to_string(dir.path().join("release/datacite.xml")).unwrap();
    assert!(written.contains("<publicationYear>2021</publicationYear>"));

    let no_tag = relpub(dir.path(), &["datacite"], &[]);
    assert_eq!(no_tag.code, 2);
    let ci_tag = relpub(dir.path(), &["datacite", "--out", "-"], &[("CI_COMMIT_TAG", "v6.1")]);
    assert_eq!(ci_tag.code, 0, "{}", ci_tag.stderr);
    assert!(ci_tag.stdout.contains("<version>v6.1</version>"));
}

#[test]
fn bag_then_bag_validate() {
    let dir = project();
    let args = [
        "bag",
        "--tag",
        TAG,
        "--issued",
        "2021-07-05",
        "--contact-email",
        "releases@example.org",
    ];
    let run = relpub(dir.path(), &args, &[]);
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);
    let bag_dir = dir.path().join("release/openCARP-v5.0");
    let tar = dir.path().join("release/openCARP-v5.0.tar");
    assert!(bag_dir.join("bagit.txt").is_file());
    assert!(bag_dir.join("metadata/datacite.xml").is_file());
    let first = std::fs::read(&tar).unwrap();

    assert_eq!(relpub(dir.path(), &args, &[]).code, 0);
    assert_eq!(std::fs::read(&tar).unwrap(), first, "pinned dates give identical tars");

    for target in [&bag_dir, &tar] {
        let check = relpub(dir.path(), &["bag-validate", target.to_str().unwrap()], &[]);
        assert_eq!(check.code, 0, "{}{}", check.stdout, check.stderr);
    }

    std::fs::write(bag_dir.join("data/openCARP.deb"), b"tampered").unwrap();
    let check = relpub(dir.path(), &["--format", "json", "bag-validate", bag_dir.to_str().unwrap()], &[]);
    assert_eq!(check.code, 1);
    let doc = check.json();
    assert!(!doc["findings"].as_array().unwrap().is_empty());

    let nothing = relpub(dir.path(), &["bag-validate", "nope"], &[]);
    assert_eq!(nothing.code, 2);

    let no_email = relpub(dir.path(), &args[..5], &[]);
    assert_eq!(no_email.code, 2, "{}", no_email.stderr);
    assert!(no_email.stderr.contains("Contact-Email"));
}

#[test]
fn release_end_to_end_then_rerun() {
    let mocks = Mocks::start();
    let dir = project();
    let first = mocks.release(dir.path(), &["--format", "json"]);
    assert_eq!(first.code, 0, "{}{}", first.stdout, first.stderr);
    let doc = first.json();
    assert_eq!(doc["failed_step"], serde_json::Value::Null);
    let statuses: Vec<&str> = doc["steps"].as_array().unwrap().iter().map(|s| s["status"].as_str().unwrap()).collect();
    assert_eq!(statuses, ["done"; 7]);
    assert_eq!(doc["dataset_state"], "in_review");

    let state: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join(".relpub-state.json")).unwrap()).unwrap();
    assert!(state.to_string().contains(&format!("\"{}\"", doc["dataset_id"].as_str().unwrap())));

    mocks.gitlab.clear_requests();
    mocks.archive.clear_requests();
    let second = mocks.release(dir.path(), &["--format", "json"]);
    assert_eq!(second.code, 0, "{}{}", second.stdout, second.stderr);
    assert!(mocks.mutations().is_empty(), "{:?}", mocks.mutations());
    let doc = second.json();
    let statuses: Vec<&str> = doc["steps"].as_array().unwrap().iter().map(|s| s["status"].as_str().unwrap()).collect();
    assert_eq!(statuses, ["done", "unchanged", "unchanged", "done", "unchanged", "unchanged", "unchanged"]);
    assert_eq!(mocks.archive.datasets().len(), 1);
    assert_eq!(mocks.gitlab.releases().len(), 1);
}

#[test]
fn dry_run_sends_no_requests() {
    let mocks = Mocks::start();
    let dir = project();
    let run = mocks.release(dir.path(), &["--format", "json", "--dry-run"]);
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);
    assert!(mocks.gitlab.requests().is_empty());
    assert!(mocks.archive.requests().is_empty());
    let doc = run.json();
    let planned = doc["steps"].as_array().unwrap().iter().filter(|s| s["status"] == "planned").count();
    assert_eq!(planned, 5);
    assert!(dir.path().join("release/datacite.xml").is_file());
    assert!(!dir.path().join(".relpub-state.json").exists());

    let no_tokens = relpub(
        dir.path(),
        &mocks.release_args().iter().map(String::as_str).chain(["--dry-run"]).collect::<Vec<_>>(),
        &[],
    );
    assert_eq!(no_tokens.code, 0, "{}", no_tokens.stderr);
    assert!(mocks.gitlab.requests().is_empty() && mocks.archive.requests().is_empty());
}

#[test]
fn skip_leaves_jobs_out() {
    let mocks = Mocks::start();
    let dir = project();
    let run = mocks.release(dir.path(), &["--format", "json", "--skip", "archive,bag"]);
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);
    assert!(mocks.archive.requests().is_empty());
    assert_eq!(mocks.gitlab.releases().len(), 1);
    let skipped = run.json()["steps"].as_array().unwrap().iter().filter(|s| s["status"] == "skipped").count();
    assert_eq!(skipped, 4);
}

#[test]
fn remote_failures_map_to_exit_codes() {
    let mocks = Mocks::start();
    let dir = project();

    let bad = {
        let mut args = vec!["--format".to_string(), "json".to_string()];
        args.extend(mocks.release_args());
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        relpub(
            dir.path(),
            &args,
            &[("RELPUB_GITLAB_TOKEN", "expired-token"), ("RELPUB_ARCHIVE_TOKEN", "x")],
        )
    };
    assert_eq!(bad.code, 3, "{}{}", bad.stdout, bad.stderr);
    assert_eq!(bad.json()["failed_step"], 2);
    assert_eq!(bad.json()["error"]["kind"], "remote");

    let token = mocks.gitlab.token();
    let url = format!(
        "{}/api/v4/projects/1/packages/generic/openCARP/{TAG}/openCARP.deb",
        mocks.gitlab.base_url()
    );
    let agent: ureq::Agent = ureq::Agent::config_builder().http_status_as_error(false).build().into();
    let status = agent.put(&url).header("PRIVATE-TOKEN", &token).send(&b"other bytes"[..]).unwrap().status();
    assert_eq!(status.as_u16(), 201);

    let conflict = mocks.release(dir.path(), &["--format", "json"]);
    assert_eq!(conflict.code, 4, "{}{}", conflict.stdout, conflict.stderr);
    assert_eq!(conflict.json()["failed_step"], 2);
    assert!(mocks.gitlab.releases().is_empty());

    let overwritten = mocks.release(dir.path(), &["--format", "json", "--overwrite"]);
    assert_eq!(overwritten.code, 0, "{}{}", overwritten.stdout, overwritten.stderr);
}

#[test]
fn missing_tag_in_repository_fails_the_release_step() {
    let mocks = Mocks {
        gitlab: relpub_mock::MockGitLab::with_config(MockGitLabConfig {
            tags: vec![],
            ..MockGitLabConfig::default()
        }),
        archive: relpub_mock::MockArchive::start(),
    };
    let dir = project();
    let run = mocks.release(dir.path(), &["--format", "json"]);
    assert_eq!(run.code, 3, "{}{}", run.stdout, run.stderr);
    assert_eq!(run.json()["failed_step"], 3);
    assert!(mocks.archive.requests().is_empty());
}

#[test]
fn secrets_never_reach_the_output() {
    let mocks = Mocks::start();
    let dir = project();
    let secrets = [mocks.gitlab.token(), mocks.archive.token()];
    let mut runs = vec![
        mocks.release(dir.path(), &["-vv"]),
        mocks.release(dir.path(), &["-vv", "--format", "json"]),
    ];

    let wrong = "glpat-do-not-print-me";
    let mut args = vec!["-vv".to_string()];
    args.extend(mocks.release_args());
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let other = project();
    runs.push(relpub(
        other.path(),
        &args,
        &[("RELPUB_GITLAB_TOKEN", wrong), ("RELPUB_ARCHIVE_TOKEN", wrong)],
    ));
    assert_eq!(runs[0].code, 0, "{}", runs[0].stderr);
    assert_eq!(runs[2].code, 3);
    assert!(runs[0].stderr.contains("DEBUG") || runs[0].stderr.contains("INFO"), "{}", runs[0].stderr);

    for run in &runs {
        for secret in secrets.iter().map(String::as_str).chain([wrong]) {
            assert!(!run.stdout.contains(secret), "secret on stdout:\n{}", run.stdout);
            assert!(!run.stderr.contains(secret), "secret on stderr:\n{}", run.stderr);
        }
    }
}

#[test]
fn deposit_creates_then_resumes() {
    let mocks = Mocks::start();
    let dir = project();
    let base = mocks.archive.base_url();
    let token = mocks.archive.token();
    let args = ["--format", "json", "deposit", "--tag", TAG, "--archive-url", &base];
    let env = [("RELPUB_ARCHIVE_TOKEN", token.as_str())];

    let run = relpub(dir.path(), &args, &env);
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);
    assert_eq!(run.json()["dataset_state"], "in_review");
    let dataset = &mocks.archive.datasets()[0];
    assert_eq!(dataset.files.len(), 5);

    let again = relpub(dir.path(), &args, &env);
    assert_eq!(again.code, 0);
    assert_eq!(mocks.archive.datasets().len(), 1);

    let no_token = relpub(dir.path(), &args, &[]);
    assert_eq!(no_token.code, 2);
    assert!(no_token.json()["error"]["message"].as_str().unwrap().contains("RELPUB_ARCHIVE_TOKEN"));
}

#[test]
fn deposit_waits_for_the_doi() {
    let mocks = Mocks {
        gitlab: relpub_mock::MockGitLab::start(),
        archive: relpub_mock::MockArchive::with_config(relpub_mock::MockArchiveConfig {
            auto_publish_after_polls: Some(1),
            ..Default::default()
        }),
    };
    let dir = project();
    let base = mocks.archive.base_url();
    let token = mocks.archive.token();
    let run = relpub(
        dir.path(),
        &["--format", "json", "deposit", "--tag", TAG, "--archive-url", &base, "--wait-for-doi", "5"],
        &[("RELPUB_ARCHIVE_TOKEN", token.as_str())],
    );
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);
    assert!(run.stdout.contains("10.5072/test.1"), "{}", run.stdout);
}

#[test]
fn sync_command() {
    let site = tempfile::tempdir().unwrap();
    support::copy_tree(&fixtures().join("site"), site.path());
    let repo = fixtures().join("site-repo");
    let args = [
        "--format",
        "json",
        "sync",
        "--site",
        site.path().to_str().unwrap(),
        "--repo",
        repo.to_str().unwrap(),
        "--pipeline",
        "openCARP",
    ];
    let first = relpub(site.path(), &args, &[]);
    assert_eq!(first.code, 0, "{}{}", first.stdout, first.stderr);
    assert_eq!(first.json()["updated"].as_array().unwrap().len(), 3);
    let second = relpub(site.path(), &args, &[]);
    assert_eq!(second.json()["updated"].as_array().unwrap().len(), 0);
    assert_eq!(second.json()["unchanged"].as_array().unwrap().len(), 3);

    let no_site = relpub(site.path(), &["sync", "--pipeline", "openCARP"], &[]);
    assert_eq!(no_site.code, 2);
}

#[test]
fn config_file_supplies_defaults() {
    let mocks = Mocks::start();
    let dir = project();
    std::fs::write(
        dir.path().join("relpub.yml"),
        format!(
            "output_dir: out\ngitlab:\n  url: {}\n  project_id: 1\narchive:\n  url: {}\nbag:\n  contact_email: releases@example.org\n",
            mocks.gitlab.base_url(),
            mocks.archive.base_url()
        ),
    )
    .unwrap();
    let tokens = mocks.tokens();
    let env: Vec<(&str, &str)> = tokens.iter().map(|(k, v)| (*k, v.as_str())).collect();
    let mut env = env;
    env.push(("CI_COMMIT_TAG", TAG));
    let run = relpub(dir.path(), &["release"], &env);
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);
    assert!(dir.path().join("out/openCARP-v5.0.tar").is_file());

    std::fs::write(dir.path().join("relpub.yml"), "unknown_key: 1\n").unwrap();
    assert_eq!(relpub(dir.path(), &["validate"], &[]).code, 2);
}
