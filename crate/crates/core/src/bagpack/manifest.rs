use crate::checksum::Algorithm;

/// Escapes the characters a manifest line cannot carry literally:
/// `%`, CR and LF.
pub fn encode_path(path: &str) -> String {
    let mut out = String::with_capacity(path.len());
    for c in path.chars() {
        match c {
            '%' => out.push_str("%25"),
            '\r' => out.push_str("%0D"),
            '\n' => out.push_str("%0A"),
            c => out.push(c),
        }
    }
    out
}

/// Inverse of [`encode_path`]. Other percent sequences are left as they are.
pub fn decode_path(path: &str) -> String {
    let mut out = String::with_capacity(path.len());
    let mut rest = path;
    while let Some(pos) = rest.find('%') {
        out.push_str(&rest[..pos]);
        let tail = &rest[pos..];
        let (replacement, skip) = match tail.get(..3) {
            Some(seq) if seq.eq_ignore_ascii_case("%25") => ('%', 3),
            Some(seq) if seq.eq_ignore_ascii_case("%0D") => ('\r', 3),
            Some(seq) if seq.eq_ignore_ascii_case("%0A") => ('\n', 3),
            _ => ('%', 1),
        };
        out.push(replacement);
        rest = &tail[skip..];
    }
    out.push_str(rest);
    out
}

pub(crate) fn manifest_name(algorithm: Algorithm) -> String {
    format!("manifest-{}.txt", algorithm.name())
}

pub(crate) fn tagmanifest_name(algorithm: Algorithm) -> String {
    format!("tagmanifest-{}.txt", algorithm.name())
}

/// Manifest text for `(path, digest)` pairs, sorted by path.
pub(crate) fn render(entries: &mut [(String, String)]) -> String {
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = String::new();
    for (path, digest) in entries.iter() {
        out.push_str(digest);
        out.push_str("  ");
        out.push_str(&encode_path(path));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ManifestLine {
    pub line: usize,
    pub digest: String,
    pub path: String,
    /// Set when the line is valid but not in the form this crate writes
    /// (separator other than two spaces, CRLF ending, uppercase hex).
    pub noncanonical: Option<&'static str>,
}

/// Parses manifest text. Returns the parsed lines and `(line, problem)`
/// pairs for lines that could not be parsed.
pub(crate) fn parse(text: &str, algorithm: Algorithm) -> (Vec<ManifestLine>, Vec<(usize, String)>) {
    let mut lines = Vec::new();
    let mut problems = Vec::new();
    let body = match text.strip_suffix('\n') {
        Some(body) => body,
        None if text.is_empty() => return (lines, problems),
        None => {
            problems.push((text.split('\n').count(), "missing final line feed".to_string()));
            text
        }
    };
    if body.is_empty() {
        problems.push((1, "empty line".to_string()));
        return (lines, problems);
    }
    for (i, raw) in body.split('\n').enumerate() {
        let n = i + 1;
        let (line, crlf) = match raw.strip_suffix('\r') {
            Some(l) => (l, true),
            None => (raw, false),
        };
        let Some(split) = line.find([' ', '\t']) else {
            problems.push((n, "expected `<digest> <path>`".to_string()));
            continue;
        };
        let digest = &line[..split];
        let after = &line[split..];
        let path = after.trim_start_matches([' ', '\t']);
        if path.is_empty() {
            problems.push((n, "missing path".to_string()));
            continue;
        }
        if digest.len() != algorithm.hex_len() || !digest.bytes().all(|b| b.is_ascii_hexdigit()) {
            problems.push((n, format!("`{digest}` is not a {} digest", algorithm.name())));
            continue;
        }
        let separator = &after[..after.len() - path.len()];
        let noncanonical = if separator != "  " {
            Some("separator is not two spaces")
        } else if crlf {
            Some("line ends with CR LF")
        } else if digest.bytes().any(|b| b.is_ascii_uppercase()) {
            Some("digest is not lowercase")
        } else {
            None
        };
        lines.push(ManifestLine {
            line: n,
            digest: digest.to_ascii_lowercase(),
            path: decode_path(path),
            noncanonical,
        });
    }
    (lines, problems)
}
