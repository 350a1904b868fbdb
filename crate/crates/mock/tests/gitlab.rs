mod common;

use common::call;
use relpub_mock::{MockGitLab, MockGitLabConfig, PASS};
use serde_json::json;
use sha2::{Digest, Sha256};

fn package_url(gitlab: &MockGitLab, file: &str) -> String {
    format!("{}/api/v4/projects/1/packages/generic/openCARP/5.0/{file}", gitlab.base_url())
}

#[test]
fn packages_round_trip() {
    let gitlab = MockGitLab::start();
    let token = gitlab.token();
    let auth = [("PRIVATE-TOKEN", token.as_str())];
    let url = package_url(&gitlab, "openCARP.deb");

    assert_eq!(call("GET", &url, &auth, vec![]).status, 404);
    assert_eq!(call("PUT", &url, &auth, b"deb bytes".to_vec()).status, 201);
    let got = call("GET", &url, &auth, vec![]);
    assert_eq!((got.status, got.body.as_slice()), (200, &b"deb bytes"[..]));

    let packages = gitlab.packages();
    assert_eq!(packages.len(), 1);
    assert_eq!(packages[0].file_name, "openCARP.deb");
    assert_eq!(packages[0].sha256, hex::encode(Sha256::digest(b"deb bytes")));
    assert_eq!(packages[0].size, 9);
    assert_eq!(gitlab.package_bytes("1", "openCARP", "5.0", "openCARP.deb").unwrap(), b"deb bytes");
}

#[test]
fn duplicate_packages_can_be_refused() {
    let gitlab = MockGitLab::with_config(MockGitLabConfig {
        allow_duplicate_packages: false,
        ..MockGitLabConfig::default()
    });
    let token = gitlab.token();
    let auth = [("PRIVATE-TOKEN", token.as_str())];
    let url = package_url(&gitlab, "a.txt");
    assert_eq!(call("PUT", &url, &auth, b"1".to_vec()).status, 201);
    assert_eq!(call("PUT", &url, &auth, b"2".to_vec()).status, 409);
    assert_eq!(gitlab.package_bytes("1", "openCARP", "5.0", "a.txt").unwrap(), b"1");
}

#[test]
fn credentials_and_projects_are_checked() {
    let gitlab = MockGitLab::start();
    let url = package_url(&gitlab, "a.txt");
    assert_eq!(call("PUT", &url, &[], b"x".to_vec()).status, 401);
    assert_eq!(call("PUT", &url, &[("PRIVATE-TOKEN", "wrong")], b"x".to_vec()).status, 401);
    let token = gitlab.token();
    let other = format!("{}/api/v4/projects/2/releases", gitlab.base_url());
    assert_eq!(call("GET", &other, &[("PRIVATE-TOKEN", token.as_str())], vec![]).status, 404);

    let log = gitlab.requests();
    assert_eq!(log.len(), 3);
    assert!(!log[0].authenticated);
    assert!(log[1].authenticated);
    assert!(log[0].is_mutating() && !log[2].is_mutating());
    assert!(gitlab.packages().is_empty());
}

#[test]
fn releases_need_an_existing_tag_and_are_created_once() {
    let gitlab = MockGitLab::start();
    let token = gitlab.token();
    let auth = [("PRIVATE-TOKEN", token.as_str()), ("Content-Type", "application/json")];
    let releases = format!("{}/api/v4/projects/1/releases", gitlab.base_url());
    let body = |tag: &str| {
        serde_json::to_vec(&json!({
            "tag_name": tag,
            "description": "notes",
            "assets": { "links": [
                { "name": "openCARP.deb", "url": "https://example.org/deb", "link_type": "package" },
                { "name": "manual", "url": "https://example.org/pdf" },
            ]},
        }))
        .unwrap()
    };

    assert_eq!(call("POST", &releases, &auth, body("v9.9")).status, 400);
    let created = call("POST", &releases, &auth, body("v5.0"));
    assert_eq!(created.status, 201);
    let stored = created.json();
    assert_eq!(stored["name"], "v5.0");
    assert_eq!(stored["assets"]["links"][0]["id"], 1);
    assert_eq!(stored["assets"]["links"][1]["link_type"], "other");
    assert_eq!(call("POST", &releases, &auth, body("v5.0")).status, 409);

    gitlab.add_tag("v9.9");
    assert_eq!(call("POST", &releases, &auth, body("v9.9")).status, 201);

    let one = call("GET", &format!("{releases}/v5.0"), &auth, vec![]);
    assert_eq!(one.json(), stored);
    assert_eq!(call("GET", &format!("{releases}/v1.0"), &auth, vec![]).status, 404);
    assert_eq!(call("GET", &releases, &auth, vec![]).json().as_array().unwrap().len(), 2);

    let all = gitlab.releases();
    assert_eq!(all.len(), 2);
    assert_eq!(all[0].tag_name(), "v5.0");
    assert_eq!(all[0].links().len(), 2);
}

#[test]
fn scripted_statuses_are_consumed_in_order() {
    let gitlab = MockGitLab::start();
    let token = gitlab.token();
    let auth = [("PRIVATE-TOKEN", token.as_str())];
    gitlab.script_status("PUT", "/api/v4/projects/1/packages/*", &[503, PASS, 500]);
    let url = package_url(&gitlab, "a.txt");

    let statuses: Vec<u16> = (0..4).map(|_| call("PUT", &url, &auth, b"x".to_vec()).status).collect();
    assert_eq!(statuses, [503, 201, 500, 201]);
    let injected: Vec<bool> = gitlab.requests().iter().map(|r| r.injected).collect();
    assert_eq!(injected, [true, false, true, false]);

    gitlab.clear_requests();
    assert!(gitlab.requests().is_empty());
}

#[test]
fn percent_encoded_paths_are_recorded_raw() {
    let gitlab = MockGitLab::start();
    let token = gitlab.token();
    let url = package_url(&gitlab, "my%20file.txt");
    assert_eq!(call("PUT", &url, &[("PRIVATE-TOKEN", token.as_str())], b"x".to_vec()).status, 201);
    assert!(gitlab.requests()[0].path.ends_with("/my%20file.txt"));
    assert_eq!(gitlab.packages()[0].file_name, "my file.txt");
}
