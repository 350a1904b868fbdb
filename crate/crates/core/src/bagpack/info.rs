use chrono::NaiveDate;

/// Ordered `Label: value` entries of `bag-info.txt`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BagInfo {
    entries: Vec<(String, String)>,
}

pub const BAGGING_DATE: &str = "Bagging-Date";
pub const PAYLOAD_OXUM: &str = "Payload-Oxum";
pub const SOURCE_ORGANIZATION: &str = "Source-Organization";
pub const CONTACT_EMAIL: &str = "Contact-Email";
pub const EXTERNAL_IDENTIFIER: &str = "External-Identifier";

/// Labels a BagPack produced here always carries.
pub const REQUIRED_LABELS: &[&str] = &[BAGGING_DATE, PAYLOAD_OXUM, SOURCE_ORGANIZATION, CONTACT_EMAIL];

const FOLD_WIDTH: usize = 79;

impl BagInfo {
    pub fn new() -> Self {
        Self::default()
    }

    /// The standard label set. Payload-Oxum is filled in when the bag is built.
    pub fn standard(
        bagging_date: NaiveDate,
        source_organization: impl Into<String>,
        contact_email: impl Into<String>,
        external_identifier: Option<String>,
    ) -> Self {
        let mut info = Self::new();
        info.push(BAGGING_DATE, bagging_date.to_string());
        info.push(SOURCE_ORGANIZATION, source_organization);
        info.push(CONTACT_EMAIL, contact_email);
        if let Some(id) = external_identifier {
            info.push(EXTERNAL_IDENTIFIER, id);
        }
        info
    }

    pub fn push(&mut self, label: impl Into<String>, value: impl Into<String>) {
        self.entries.push((label.into(), value.into()));
    }

    /// Replaces the first entry with this label, or appends one.
    pub fn set(&mut self, label: &str, value: impl Into<String>) {
        let value = value.into();
        match self.entries.iter_mut().find(|(l, _)| l == label) {
            Some(entry) => entry.1 = value,
            None => self.entries.push((label.to_string(), value)),
        }
    }

    pub fn get(&self, label: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v.as_str())
    }

    pub fn get_all<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.entries
            .iter()
            .filter(move |(l, _)| l == label)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn bagging_date(&self) -> Option<NaiveDate> {
        self.get(BAGGING_DATE).and_then(|d| d.parse().ok())
    }

    /// Problems that make this unusable as a bag-info: labels or values
    /// that cannot be serialized, and an unparseable Bagging-Date.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (label, value) in &self.entries {
            if label.is_empty() || label.contains(':') || label.contains(char::is_whitespace) {
                out.push(format!("invalid label `{label}`"));
            }
            if value.contains(['\n', '\r']) {
                out.push(format!("value of `{label}` contains a line break"));
            }
        }
        if let Some(date) = self.get(BAGGING_DATE) {
            if date.parse::<NaiveDate>().is_err() {
                out.push(format!("Bagging-Date `{date}` is not an ISO date"));
            }
        }
        out
    }

    /// Serializes as `Label: value` lines. Values longer than a line are
    /// folded at spaces onto continuation lines starting with a space.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (label, value) in &self.entries {
            let mut line = format!("{label}: ");
            let mut line_len = line.chars().count();
            let mut first = true;
            for word in value.split(' ') {
                let word_len = word.chars().count();
                if !first {
                    if line_len + 1 + word_len > FOLD_WIDTH {
                        line.push_str("\n ");
                        line_len = 1;
                    } else {
                        line.push(' ');
                        line_len += 1;
                    }
                }
                line.push_str(word);
                line_len += word_len;
                first = false;
            }
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Parses `bag-info.txt`, joining continuation lines with a single space.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut info = Self::new();
        for (n, raw) in text.split('\n').enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.trim().is_empty() {
                continue;
            }
            if line.starts_with([' ', '\t']) {
                match info.entries.last_mut() {
                    Some((_, value)) => {
                        value.push(' ');
                        value.push_str(line.trim());
                    }
                    None => return Err(format!("line {}: continuation without a label", n + 1)),
                }
                continue;
            }
            match line.split_once(':') {
                Some((label, value)) if !label.trim().is_empty() => {
                    info.push(label.trim(), value.trim());
                }
                _ => return Err(format!("line {}: expected `Label: value`", n + 1)),
            }
        }
        Ok(info)
    }
}
