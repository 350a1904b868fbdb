use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::error::{CliError, Exit};

/// What a subcommand reports: text lines for people, fields for
/// `--format json`, and the exit code.
#[derive(Debug)]
pub struct Outcome {
    command: &'static str,
    exit: Exit,
    fields: Map<String, Value>,
    lines: Vec<String>,
    error: Option<CliError>,
}

impl Outcome {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            exit: Exit::Success,
            fields: Map::new(),
            lines: Vec::new(),
            error: None,
        }
    }

    pub fn field(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("outcome fields serialize");
        self.fields.insert(key.to_string(), value);
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn fail(&mut self, error: CliError) {
        self.exit = error.exit;
        self.error = Some(error);
    }

    /// Prints the outcome and returns the process exit code.
    pub fn emit(self, format: Format) -> u8 {
        match format {
            Format::Text => {
                for line in &self.lines {
                    println!("{line}");
                }
                if let Some(err) = &self.error {
                    eprintln!("error: {err}");
                }
            }
            Format::Json => {
                let mut doc = Map::new();
                doc.insert("command".into(), json!(self.command));
                doc.insert("ok".into(), json!(self.exit == Exit::Success));
                doc.insert("exit_code".into(), json!(self.exit.code()));
                doc.extend(self.fields);
                if let Some(err) = &self.error {
                    doc.insert(
                        "error".into(),
                        json!({ "kind": err.exit.kind(), "message": err.message }),
                    );
                }
                println!("{}", serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON output"));
            }
        }
        self.exit.code()
    }
}

/// Runs `body` and folds an early error into the outcome.
pub fn run(command: &'static str, body: impl FnOnce(&mut Outcome) -> Result<(), CliError>) -> Outcome {
    let mut outcome = Outcome::new(command);
    if let Err(e) = body(&mut outcome) {
        outcome.fail(e);
    }
    outcome
}
