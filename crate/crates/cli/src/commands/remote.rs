use std::path::PathBuf;

use relpub_core::archive::{self, AdapterKind, ArchiveAdapter, ArchiveTarget, STATE_FILE_NAME};
use relpub_core::gitlab::GitLabTarget;
use relpub_core::http::{HttpClient, Secret};

use crate::args::{ArchiveOptions, GitLabOptions};
use crate::config::{ci, first, token, Config};
use crate::error::CliError;

pub const GITLAB_TOKEN_VAR: &str = "RELPUB_GITLAB_TOKEN";
pub const ARCHIVE_TOKEN_VAR: &str = "RELPUB_ARCHIVE_TOKEN";

/// Connection settings; the token may be absent for a dry run.
pub struct GitLabSettings {
    pub target: GitLabTarget,
    pub has_token: bool,
}

pub fn gitlab_settings(opts: &GitLabOptions, cfg: &Config) -> Result<GitLabSettings, CliError> {
    let url = first([opts.gitlab_url.clone(), cfg.file.gitlab.url.clone(), ci("CI_API_V4_URL")])
        .ok_or_else(|| CliError::config("no GitLab URL: pass --gitlab-url or set RELPUB_GITLAB_URL"))?;
    let project = first([opts.gitlab_project.clone(), cfg.project_id(), ci("CI_PROJECT_ID")])
        .ok_or_else(|| CliError::config("no GitLab project: pass --gitlab-project or set RELPUB_GITLAB_PROJECT"))?;
    let secret = token(GITLAB_TOKEN_VAR);
    let has_token = secret.is_some();
    let target = GitLabTarget::new(url, project, Secret::new(secret.unwrap_or_default()))?;
    Ok(GitLabSettings { target, has_token })
}

pub fn require_gitlab_token(settings: &GitLabSettings) -> Result<(), CliError> {
    if settings.has_token {
        Ok(())
    } else {
        Err(CliError::config(format!("{GITLAB_TOKEN_VAR} is not set")))
    }
}

/// Release page URL for projects addressed by path.
pub fn derived_release_url(target: &GitLabTarget, tag: &str) -> Option<String> {
    if target.project_id.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    Some(format!("{}/{}/-/releases/{tag}", target.base_url, target.project_id))
}

pub struct ArchiveSettings {
    pub base_url: String,
    pub adapter: AdapterKind,
    pub token: Option<String>,
    pub state_file: PathBuf,
}

pub fn archive_settings(opts: &ArchiveOptions, cfg: &Config) -> Result<ArchiveSettings, CliError> {
    let base_url = first([opts.archive_url.clone(), cfg.file.archive.url.clone()])
        .ok_or_else(|| CliError::config("no archive URL: pass --archive-url or set RELPUB_ARCHIVE_URL"))?;
    relpub_core::http::check_base_url(&base_url).map_err(CliError::config)?;
    let state_file = first([opts.state_file.clone(), cfg.path(&cfg.file.archive.state_file)])
        .unwrap_or_else(|| STATE_FILE_NAME.into());
    Ok(ArchiveSettings {
        base_url,
        adapter: cfg.file.archive.adapter.unwrap_or_default(),
        token: token(ARCHIVE_TOKEN_VAR),
        state_file,
    })
}

pub fn archive_adapter(settings: &ArchiveSettings, client: HttpClient) -> Result<Box<dyn ArchiveAdapter>, CliError> {
    let token = settings
        .token
        .clone()
        .ok_or_else(|| CliError::config(format!("{ARCHIVE_TOKEN_VAR} is not set")))?;
    let target = ArchiveTarget::new(settings.base_url.clone(), Secret::new(token), settings.adapter)?;
    Ok(archive::connect(client, target)?)
}
