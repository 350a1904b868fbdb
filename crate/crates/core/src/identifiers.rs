//! Persistent identifier checks: ORCID iDs, ROR ids, DOIs and URLs.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentifierError {
    #[error("`{0}` is not a well-formed ORCID iD (expected dddd-dddd-dddd-dddX)")]
    OrcidFormat(String),
    #[error("`{0}` fails the ORCID MOD 11-2 check digit")]
    OrcidChecksum(String),
    #[error("`{0}` is not a ROR id of the form https://ror.org/0xxxxxxNN")]
    RorFormat(String),
    #[error("`{0}` fails the ROR checksum")]
    RorChecksum(String),
}

/// ISO 7064 MOD 11-2 check character over the 15 base digits of an ORCID iD.
pub fn orcid_check_digit(base_digits: &[u8]) -> char {
    let total = base_digits
        .iter()
        .fold(0u32, |acc, d| (acc + u32::from(*d)) * 2);
    let result = (12 - total % 11) % 11;
    if result == 10 {
        'X'
    } else {
        char::from_digit(result, 10).expect("digit below ten")
    }
}

/// An ORCID iD in its bare hyphenated form, e.g. `0000-0002-1825-0097`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orcid(String);

impl Orcid {
    /// Accepts the bare form or the `https://orcid.org/` URL form.
    pub fn parse(input: &str) -> Result<Self, IdentifierError> {
        let trimmed = input.trim();
        let bare = trimmed
            .strip_prefix("https://orcid.org/")
            .or_else(|| trimmed.strip_prefix("http://orcid.org/"))
            .unwrap_or(trimmed);
        let bytes = bare.as_bytes();
        let shape_ok = bytes.len() == 19
            && bytes.iter().enumerate().all(|(i, b)| match i {
                4 | 9 | 14 => *b == b'-',
                18 => b.is_ascii_digit() || *b == b'X',
                _ => b.is_ascii_digit(),
            });
        if !shape_ok {
            return Err(IdentifierError::OrcidFormat(input.to_string()));
        }
        let digits: Vec<u8> = bytes[..18]
            .iter()
            .filter(|b| b.is_ascii_digit())
            .map(|b| b - b'0')
            .collect();
        if orcid_check_digit(&digits) != char::from(bytes[18]) {
            return Err(IdentifierError::OrcidChecksum(input.to_string()));
        }
        Ok(Self(bare.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn url(&self) -> String {
        format!("https://orcid.org/{}", self.0)
    }
}

impl fmt::Display for Orcid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Orcid {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Orcid {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        Orcid::parse(&raw).map_err(serde::de::Error::custom)
    }
}

const CROCKFORD: &[u8] = b"0123456789abcdefghjkmnpqrstvwxyz";

/// Checks a ROR identifier URL such as `https://ror.org/018mejw64`,
/// including its two-digit MOD 97-10 checksum.
pub fn check_ror(url: &str) -> Result<(), IdentifierError> {
    let id = url
        .strip_prefix("https://ror.org/")
        .ok_or_else(|| IdentifierError::RorFormat(url.to_string()))?;
    let bytes = id.as_bytes();
    if bytes.len() != 9
        || bytes[0] != b'0'
        || !bytes[1..7].iter().all(|b| CROCKFORD.contains(b))
        || !bytes[7..].iter().all(u8::is_ascii_digit)
    {
        return Err(IdentifierError::RorFormat(url.to_string()));
    }
    let value = bytes[1..7].iter().fold(0u64, |acc, b| {
        let pos = CROCKFORD.iter().position(|c| c == b).expect("checked above") as u64;
        acc * 32 + pos
    });
    let expected = 98 - (value * 100) % 97;
    let given: u64 = id[7..].parse().expect("two ascii digits");
    if expected != given {
        return Err(IdentifierError::RorChecksum(url.to_string()));
    }
    Ok(())
}

/// True when `text` parses as an absolute URL with a host.
pub fn is_absolute_url(text: &str) -> bool {
    match url::Url::parse(text) {
        Ok(u) => u.has_host() && !text.chars().any(char::is_whitespace),
        Err(_) => false,
    }
}

/// DOI syntax as accepted by the DataCite kernel: `10.<prefix>/<suffix>`.
pub fn is_doi(text: &str) -> bool {
    match text.strip_prefix("10.") {
        Some(rest) => match rest.split_once('/') {
            Some((prefix, suffix)) => {
                !prefix.is_empty()
                    && !suffix.is_empty()
                    && !text.chars().any(char::is_whitespace)
            }
            None => false,
        },
        None => false,
    }
}
