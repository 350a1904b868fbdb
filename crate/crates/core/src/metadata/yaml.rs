use std::fmt;
use std::path::Path;

use serde::de::{self, DeserializeOwned, Visitor};
use serde::{Deserialize, Deserializer};

use super::MetadataError;

/// Reads a YAML file into a generic value. An empty document reads as an
/// empty mapping.
pub(crate) fn read_value(path: &Path) -> Result<serde_yaml::Value, MetadataError> {
    let text = std::fs::read_to_string(path).map_err(|source| MetadataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_value(path, &text)
}

pub(crate) fn parse_value(path: &Path, text: &str) -> Result<serde_yaml::Value, MetadataError> {
    let value: serde_yaml::Value =
        serde_yaml::from_str(text).map_err(|err| MetadataError::Parse {
            path: path.to_path_buf(),
            line: err.location().map(|l| l.line()).unwrap_or(0),
            message: err.to_string(),
        })?;
    Ok(match value {
        serde_yaml::Value::Null => serde_yaml::Value::Mapping(Default::default()),
        other => other,
    })
}

/// Deserializes with the failing key path attached to the error.
pub(crate) fn from_value<T: DeserializeOwned>(
    path: &Path,
    value: serde_yaml::Value,
) -> Result<T, MetadataError> {
    serde_path_to_error::deserialize(value).map_err(|err| {
        let inner = err.inner().to_string();
        let mut field = err.path().to_string();
        if field == "." {
            if let Some(name) = inner
                .strip_prefix("missing field `")
                .and_then(|rest| rest.split('`').next())
            {
                field = name.to_string();
            }
        }
        MetadataError::schema(path, &field, inner)
    })
}

/// A YAML scalar read as text: `391128822` and `"391128822"` are the same
/// award number.
struct Text(String);

impl<'de> Deserialize<'de> for Text {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct TextVisitor;

        impl Visitor<'_> for TextVisitor {
            type Value = Text;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a text scalar")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Text, E> {
                Ok(Text(v.to_string()))
            }

            fn visit_string<E: de::Error>(self, v: String) -> Result<Text, E> {
                Ok(Text(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Text, E> {
                Ok(Text(v.to_string()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Text, E> {
                Ok(Text(v.to_string()))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Text, E> {
                Ok(Text(v.to_string()))
            }

            fn visit_bool<E: de::Error>(self, v: bool) -> Result<Text, E> {
                Ok(Text(v.to_string()))
            }
        }

        deserializer.deserialize_any(TextVisitor)
    }
}

pub(crate) fn text<'de, D: Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    Text::deserialize(d).map(|t| t.0)
}

pub(crate) fn opt_text<'de, D: Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    Option::<Text>::deserialize(d).map(|t| t.map(|t| t.0))
}

/// Like [`opt_text`], but a missing value and a blank one are both `None`.
pub(crate) fn opt_nonblank<'de, D: Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    opt_text(d).map(|t| t.filter(|s| !s.trim().is_empty()))
}

pub(crate) fn text_list<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<String>, D::Error> {
    Option::<Vec<Text>>::deserialize(d)
        .map(|list| list.unwrap_or_default().into_iter().map(|t| t.0).collect())
}

/// A list key that may be present but empty (`key:` with no items).
pub(crate) fn list<'de, D, T>(d: D) -> Result<Vec<T>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    Option::<Vec<T>>::deserialize(d).map(Option::unwrap_or_default)
}
