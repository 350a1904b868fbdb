#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use relpub_mock::{MockArchive, MockGitLab, RecordedRequest};

pub const TAG: &str = "v5.0";

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> serde_json::Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}):\n{}", self.stdout))
    }
}

/// Runs the binary in `cwd` with a cleared environment, so CI and
/// RELPUB variables of the host never leak in.
pub fn relpub(cwd: &Path, args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_relpub"));
    cmd.current_dir(cwd).args(args).env_clear();
    if let Some(path) = std::env::var_os("PATH") {
        cmd.env("PATH", path);
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("run relpub");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// A scratch project directory holding a copy of the release fixture.
pub fn project() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    copy_tree(&fixtures().join("release"), dir.path());
    dir
}

pub fn copy_tree(from: &Path, to: &Path) {
    for entry in walkdir::WalkDir::new(from) {
        let entry = entry.unwrap();
        let target = to.join(entry.path().strip_prefix(from).unwrap());
        if entry.file_type().is_dir() {
            std::fs::create_dir_all(&target).unwrap();
        } else {
            std::fs::copy(entry.path(), &target).unwrap();
        }
    }
}

pub struct Mocks {
    pub gitlab: MockGitLab,
    pub archive: MockArchive,
}

impl Mocks {
    pub fn start() -> Self {
        Self {
            gitlab: MockGitLab::start(),
            archive: MockArchive::start(),
        }
    }

    pub fn release_args(&self) -> Vec<String> {
        [
            "release",
            "--tag",
            TAG,
            "--gitlab-url",
            &self.gitlab.base_url(),
            "--gitlab-project",
            "1",
            "--archive-url",
            &self.archive.base_url(),
            "--contact-email",
            "releases@example.org",
            "--created",
            "2021-07-01",
            "--issued",
            "2021-07-05",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect()
    }

    pub fn tokens(&self) -> Vec<(&'static str, String)> {
        vec![
            ("RELPUB_GITLAB_TOKEN", self.gitlab.token()),
            ("RELPUB_ARCHIVE_TOKEN", self.archive.token()),
        ]
    }

    /// Runs `relpub release ... [extra...]` with both tokens set.
    pub fn release(&self, cwd: &Path, extra: &[&str]) -> Run {
        let mut args = self.release_args();
        args.extend(extra.iter().map(|s| s.to_string()));
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let tokens = self.tokens();
        let env: Vec<(&str, &str)> = tokens.iter().map(|(k, v)| (*k, v.as_str())).collect();
        relpub(cwd, &args, &env)
    }

    /// Mutating requests to either mock as `METHOD path`, in arrival order.
    pub fn mutations(&self) -> Vec<String> {
        let mut all: Vec<RecordedRequest> = self.gitlab.requests();
        all.extend(self.archive.requests());
        all.sort_by_key(|r| r.seq);
        all.into_iter()
            .filter(RecordedRequest::is_mutating)
            .map(|r| format!("{} {}", r.method, r.path))
            .collect()
    }
}
