use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "relpub", version, about = "Publish, package and archive tagged software releases")]
pub struct Cli {
    /// Output style for results
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Configuration file (default: ./relpub.yml when present)
    #[arg(long, global = true, env = "RELPUB_CONFIG")]
    pub config: Option<PathBuf>,

    /// More log output on stderr (-v info, -vv debug)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check METADATA.yml and CONTRIBUTORS.yml
    Validate(ValidateArgs),
    /// Render datacite.xml for a release
    Datacite(DataciteArgs),
    /// Build a BagPack from the release assets and serialize it as tar
    Bag(BagArgs),
    /// Validate a bag directory or tar file
    BagValidate(BagValidateArgs),
    /// Deposit the release in the archive and submit it for review
    Deposit(DepositArgs),
    /// Copy repository files into tagged CMS pages
    Sync(SyncArgs),
    /// Run the full release pipeline
    Release(ReleaseArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Project metadata file
    #[arg(long, env = "RELPUB_METADATA")]
    pub metadata: Option<PathBuf>,
    /// Creators and contributors file
    #[arg(long, env = "RELPUB_CONTRIBUTORS")]
    pub contributors: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ContextArgs {
    /// Release tag (default: CI_COMMIT_TAG)
    #[arg(long, env = "RELPUB_TAG")]
    pub tag: Option<String>,
    /// Release date (default: CI_COMMIT_TIMESTAMP, else today)
    #[arg(long)]
    pub created: Option<NaiveDate>,
    /// Archive upload date (default: today)
    #[arg(long)]
    pub issued: Option<NaiveDate>,
    /// Public release page
    #[arg(long, env = "RELPUB_RELEASE_URL")]
    pub release_url: Option<String>,
    /// DOI of this release, when already known
    #[arg(long)]
    pub doi: Option<String>,
    /// DOI of the previous release
    #[arg(long)]
    pub previous_doi: Option<String>,
    /// DOI standing for all versions
    #[arg(long)]
    pub concept_doi: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct AssetArgs {
    /// Release asset list
    #[arg(long, env = "RELPUB_ASSETS")]
    pub assets: Option<PathBuf>,
    /// Directory for generated files
    #[arg(long, env = "RELPUB_OUTPUT_DIR")]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BagOptions {
    /// Bag-info Source-Organization (default: the metadata publisher)
    #[arg(long, env = "RELPUB_SOURCE_ORGANIZATION")]
    pub source_organization: Option<String>,
    /// Bag-info Contact-Email
    #[arg(long, env = "RELPUB_CONTACT_EMAIL")]
    pub contact_email: Option<String>,
    /// Bag-info Bagging-Date (default: the issue date)
    #[arg(long)]
    pub bagging_date: Option<NaiveDate>,
}

#[derive(Debug, Clone, Args)]
pub struct GitLabOptions {
    /// GitLab instance URL (default: CI_API_V4_URL)
    #[arg(long, env = "RELPUB_GITLAB_URL")]
    pub gitlab_url: Option<String>,
    /// Project id or path (default: CI_PROJECT_ID)
    #[arg(long, env = "RELPUB_GITLAB_PROJECT")]
    pub gitlab_project: Option<String>,
    /// Generic package name (default: the metadata title)
    #[arg(long, env = "RELPUB_PACKAGE_NAME")]
    pub package_name: Option<String>,
    /// Markdown file used as release description
    #[arg(long)]
    pub changelog: Option<PathBuf>,
    /// Replace package files whose content differs
    #[arg(long)]
    pub overwrite: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ArchiveOptions {
    /// Archive API base URL
    #[arg(long, env = "RELPUB_ARCHIVE_URL")]
    pub archive_url: Option<String>,
    /// Deposit state file (default: ./.relpub-state.json)
    #[arg(long, env = "RELPUB_STATE_FILE")]
    pub state_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub inputs: InputArgs,
}

#[derive(Debug, Args)]
pub struct DataciteArgs {
    #[command(flatten)]
    pub inputs: InputArgs,
    #[command(flatten)]
    pub context: ContextArgs,
    /// Output file, `-` for stdout (default: <output-dir>/datacite.xml)
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Directory for generated files
    #[arg(long, env = "RELPUB_OUTPUT_DIR")]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BagArgs {
    #[command(flatten)]
    pub inputs: InputArgs,
    #[command(flatten)]
    pub context: ContextArgs,
    #[command(flatten)]
    pub assets: AssetArgs,
    #[command(flatten)]
    pub bag: BagOptions,
    /// Package name used for the bag directory (default: the metadata title)
    #[arg(long, env = "RELPUB_PACKAGE_NAME")]
    pub package_name: Option<String>,
    /// Keep the bag directory only
    #[arg(long)]
    pub no_tar: bool,
}

#[derive(Debug, Args)]
pub struct BagValidateArgs {
    /// Bag directory or `.tar` file
    pub path: PathBuf,
    /// Check plain BagIt only, without the BagPack requirements
    #[arg(long)]
    pub bagit_only: bool,
}

#[derive(Debug, Args)]
pub struct DepositArgs {
    #[command(flatten)]
    pub inputs: InputArgs,
    #[command(flatten)]
    pub context: ContextArgs,
    #[command(flatten)]
    pub assets: AssetArgs,
    #[command(flatten)]
    pub archive: ArchiveOptions,
    /// Print the plan without contacting the archive
    #[arg(long)]
    pub dry_run: bool,
    /// After submitting, wait this many seconds for the curator's DOI
    #[arg(long, value_name = "SECONDS")]
    pub wait_for_doi: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SyncArgs {
    /// Checked-out CMS site
    #[arg(long, env = "RELPUB_SITE")]
    pub site: Option<PathBuf>,
    /// Checked-out source repository (default: .)
    #[arg(long, env = "RELPUB_REPO")]
    pub repo: Option<PathBuf>,
    /// Pipeline name pages opt in with
    #[arg(long, env = "RELPUB_PIPELINE")]
    pub pipeline: Option<String>,
    /// Report what would change without writing
    #[arg(long)]
    pub dry_run: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Job {
    /// Package uploads and the GitLab release
    Gitlab,
    /// BagPack build and serialization
    Bag,
    /// Archive deposit
    Archive,
}

#[derive(Debug, Args)]
pub struct ReleaseArgs {
    #[command(flatten)]
    pub inputs: InputArgs,
    #[command(flatten)]
    pub context: ContextArgs,
    #[command(flatten)]
    pub assets: AssetArgs,
    #[command(flatten)]
    pub bag: BagOptions,
    #[command(flatten)]
    pub gitlab: GitLabOptions,
    #[command(flatten)]
    pub archive: ArchiveOptions,
    /// Print the plan and run only local steps
    #[arg(long)]
    pub dry_run: bool,
    /// Jobs to leave out
    #[arg(long, value_enum, value_delimiter = ',')]
    pub skip: Vec<Job>,
}
