use serde::Serialize;

use crate::error::CliError;
use crate::output::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepStatus {
    Done,
    Unchanged,
    Planned,
    Skipped,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub index: usize,
    pub name: &'static str,
    pub status: StepStatus,
    pub detail: String,
}

/// Ordered step log of a pipeline run.
pub struct Steps {
    names: &'static [&'static str],
    records: Vec<StepRecord>,
}

impl Steps {
    pub fn new(names: &'static [&'static str]) -> Self {
        Self {
            names,
            records: Vec::new(),
        }
    }

    fn index_of(&self, name: &str) -> usize {
        self.names.iter().position(|n| *n == name).expect("known step") + 1
    }

    pub fn record(&mut self, name: &'static str, status: StepStatus, detail: impl Into<String>) {
        let index = self.index_of(name);
        let detail = detail.into();
        log::info!("[{index}/{}] {name}: {detail}", self.names.len());
        self.records.push(StepRecord {
            index,
            name,
            status,
            detail,
        });
    }

    /// Runs one step; a failure is recorded and returned with the step
    /// named in the message.
    pub fn run<T>(
        &mut self,
        name: &'static str,
        body: impl FnOnce() -> Result<(T, StepStatus, String), CliError>,
    ) -> Result<T, CliError> {
        match body() {
            Ok((value, status, detail)) => {
                self.record(name, status, detail);
                Ok(value)
            }
            Err(e) => {
                self.record(name, StepStatus::Failed, e.message.clone());
                let index = self.index_of(name);
                Err(CliError::new(e.exit, format!("step {index} ({name}) failed: {}", e.message)))
            }
        }
    }

    pub fn failed_step(&self) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.status == StepStatus::Failed)
            .map(|r| r.index)
    }

    pub fn finish(self, out: &mut Outcome) {
        let total = self.names.len();
        for r in &self.records {
            let status = serde_json::to_value(r.status).unwrap();
            out.line(format!(
                "[{}/{total}] {:<16} {:<9} {}",
                r.index,
                r.name,
                status.as_str().unwrap_or_default(),
                r.detail
            ));
        }
        out.field("failed_step", self.failed_step());
        out.field("steps", &self.records);
    }
}
