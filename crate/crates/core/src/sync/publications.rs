use serde::{Deserialize, Serialize};

use super::bibtex::BibEntry;

/// One rendered list item for a publications page.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Publication {
    pub authors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub venue: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doi_url: Option<String>,
}

const VENUE_FIELDS: [&str; 5] = ["journal", "booktitle", "publisher", "school", "howpublished"];

/// Removes case-protection braces. Braces around a LaTeX special
/// character, as in `{\"u}`, and braces that delimit a command argument,
/// as in `\"{u}` or `\emph{x}`, are kept.
pub fn strip_protection(value: &str) -> String {
    let chars: Vec<char> = value.chars().collect();
    let mut out = String::with_capacity(value.len());
    let mut keep = Vec::new();
    for (i, &c) in chars.iter().enumerate() {
        match c {
            '{' => {
                let k = chars.get(i + 1) == Some(&'\\') || after_command(&chars[..i]);
                keep.push(k);
                if k {
                    out.push(c);
                }
            }
            '}' => {
                if keep.pop().unwrap_or(false) {
                    out.push(c);
                }
            }
            _ => out.push(c),
        }
    }
    out
}

fn after_command(before: &[char]) -> bool {
    let mut i = before.len();
    while i > 0 && before[i - 1].is_ascii_alphabetic() {
        i -= 1;
    }
    if i > 0 && before[i - 1] == '\\' {
        return true;
    }
    i == before.len() && i >= 2 && before[i - 2] == '\\' && !before[i - 1].is_alphanumeric()
}

/// Splits a BibTeX author list on ` and ` outside braces.
pub fn split_authors(value: &str) -> Vec<String> {
    let mut authors = Vec::new();
    let mut current = String::new();
    let mut depth = 0usize;
    for word in value.split(' ') {
        if depth == 0 && word.eq_ignore_ascii_case("and") {
            authors.push(std::mem::take(&mut current));
            continue;
        }
        for c in word.chars() {
            match c {
                '{' => depth += 1,
                '}' => depth = depth.saturating_sub(1),
                _ => {}
            }
        }
        if !current.is_empty() {
            current.push(' ');
        }
        current.push_str(word);
    }
    authors.push(current);
    authors
        .into_iter()
        .map(|a| strip_protection(a.trim()))
        .filter(|a| !a.is_empty())
        .collect()
}

fn parse_year(value: &str) -> Option<i32> {
    let digits: String = value.trim().chars().take_while(char::is_ascii_digit).collect();
    digits.parse().ok()
}

fn doi_url(doi: &str) -> String {
    let bare = doi
        .trim()
        .trim_start_matches("https://doi.org/")
        .trim_start_matches("http://doi.org/")
        .trim_start_matches("https://dx.doi.org/")
        .trim_start_matches("doi:");
    format!("https://doi.org/{bare}")
}

/// Renders entries newest first; entries of the same year keep file order
/// and entries without a year come last.
pub fn render_publications(entries: &[BibEntry]) -> Vec<Publication> {
    let mut items: Vec<Publication> = entries
        .iter()
        .map(|e| Publication {
            authors: e.get("author").map(split_authors).unwrap_or_default(),
            title: e.get("title").map(strip_protection),
            venue: VENUE_FIELDS
                .iter()
                .find_map(|f| e.get(f))
                .map(strip_protection),
            year: e.get("year").and_then(parse_year),
            doi_url: e.get("doi").filter(|d| !d.trim().is_empty()).map(doi_url),
        })
        .collect();
    items.sort_by_key(|p| std::cmp::Reverse(p.year.map_or(i64::MIN, i64::from)));
    items
}

#[cfg(test)]
mod tests {
    use super::*;
    use indexmap::IndexMap;

    fn entry(key: &str, fields: &[(&str, &str)]) -> BibEntry {
        BibEntry {
            entry_type: "article".into(),
            citekey: key.into(),
            fields: fields
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect::<IndexMap<_, _>>(),
        }
    }

    #[test]
    fn empty_list() {
        assert!(render_publications(&[]).is_empty());
    }

    #[test]
    fn newest_first_then_file_order() {
        let list = render_publications(&[
            entry("a", &[("year", "2019")]),
            entry("b", &[]),
            entry("c", &[("year", "2021")]),
            entry("d", &[("year", "2019")]),
        ]);
        let years: Vec<_> = list.iter().map(|p| p.year).collect();
        assert_eq!(years, vec![Some(2021), Some(2019), Some(2019), None]);
        assert_eq!(list[1].title, None);
    }

    #[test]
    fn protection_braces() {
        assert_eq!(strip_protection("The {openCARP} simulator"), "The openCARP simulator");
        assert_eq!(strip_protection(r#"M{\"u}ller"#), r#"M{\"u}ller"#);
        assert_eq!(strip_protection(r"{The {\'a} case}"), r"The {\'a} case");
        assert_eq!(strip_protection(r#"M\"{u}ller"#), r#"M\"{u}ller"#);
        assert_eq!(strip_protection(r"\emph{x} {Y}"), r"\emph{x} Y");
    }

    #[test]
    fn authors_split_outside_braces() {
        assert_eq!(
            split_authors("Plank, Gernot and {Smith and Sons} and Doe, J."),
            vec!["Plank, Gernot", "Smith and Sons", "Doe, J."]
        );
    }

    #[test]
    fn doi_urls_are_normalized() {
        assert_eq!(doi_url("10.1/x"), "https://doi.org/10.1/x");
        assert_eq!(doi_url("https://doi.org/10.1/x"), "https://doi.org/10.1/x");
    }
}
