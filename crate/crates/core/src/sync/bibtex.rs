//! A BibTeX reader covering what publication lists need: entries,
//! `@string` macros, `#` concatenation and month abbreviations.
//! `@comment`, `@preamble` and unknown entry types are skipped with a
//! warning.

use std::collections::{HashMap, HashSet};
use std::fmt::Write;

use indexmap::IndexMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BibEntry {
    /// Lowercased, e.g. `article`.
    pub entry_type: String,
    pub citekey: String,
    /// Lowercased field names in file order. Values have their outer
    /// delimiters removed and whitespace runs collapsed.
    pub fields: IndexMap<String, String>,
}

impl BibEntry {
    pub fn get(&self, field: &str) -> Option<&str> {
        self.fields.get(field).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct BibError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bibliography {
    pub entries: Vec<BibEntry>,
    pub warnings: Vec<String>,
}

const ENTRY_TYPES: &[&str] = &[
    "article",
    "book",
    "booklet",
    "conference",
    "dataset",
    "inbook",
    "incollection",
    "inproceedings",
    "manual",
    "mastersthesis",
    "misc",
    "online",
    "phdthesis",
    "proceedings",
    "report",
    "software",
    "techreport",
    "thesis",
    "unpublished",
];

const MONTHS: [(&str, &str); 12] = [
    ("jan", "January"),
    ("feb", "February"),
    ("mar", "March"),
    ("apr", "April"),
    ("may", "May"),
    ("jun", "June"),
    ("jul", "July"),
    ("aug", "August"),
    ("sep", "September"),
    ("oct", "October"),
    ("nov", "November"),
    ("dec", "December"),
];

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    macros: HashMap<String, String>,
    warnings: &'a mut Vec<String>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
        }
        Some(c)
    }

    fn error<T>(&self, line: usize, message: impl Into<String>) -> Result<T, BibError> {
        Err(BibError {
            line,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn ident(&mut self) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() || "{}(),=#\"@".contains(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
        out
    }

    fn expect(&mut self, wanted: char) -> Result<(), BibError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == wanted => {
                self.bump();
                Ok(())
            }
            Some(c) => self.error(self.line, format!("expected `{wanted}`, found `{c}`")),
            None => self.error(self.line, format!("expected `{wanted}`, found end of file")),
        }
    }

    /// Reads up to the brace matching one already consumed at `open_line`.
    fn braced(&mut self, open_line: usize) -> Result<String, BibError> {
        let mut depth = 1usize;
        let mut out = String::new();
        while let Some(c) = self.bump() {
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(out);
                    }
                }
                _ => {}
            }
            out.push(c);
        }
        self.error(open_line, "unbalanced braces: `{` is never closed")
    }

    fn quoted(&mut self, open_line: usize) -> Result<String, BibError> {
        let mut depth = 0usize;
        let mut out = String::new();
        while let Some(c) = self.bump() {
            match c {
                '{' => depth += 1,
                '}' => {
                    if depth == 0 {
                        return self.error(self.line, "unbalanced braces: unexpected `}` in quoted value");
                    }
                    depth -= 1;
                }
                '"' if depth == 0 => return Ok(out),
                _ => {}
            }
            out.push(c);
        }
        self.error(open_line, "unterminated quoted value")
    }

    fn value(&mut self) -> Result<String, BibError> {
        let mut out = String::new();
        loop {
            self.skip_ws();
            let line = self.line;
            match self.peek() {
                Some('{') => {
                    self.bump();
                    out.push_str(&self.braced(line)?);
                }
                Some('"') => {
                    self.bump();
                    out.push_str(&self.quoted(line)?);
                }
                Some(c) if c.is_ascii_digit() => {
                    while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        out.push(self.bump().unwrap());
                    }
                }
                Some(_) => {
                    let name = self.ident();
                    if name.is_empty() {
                        return self.error(line, "expected a field value");
                    }
                    let key = name.to_lowercase();
                    if let Some(v) = self.macros.get(&key) {
                        out.push_str(v);
                    } else if let Some((_, month)) = MONTHS.iter().find(|(abbr, _)| *abbr == key) {
                        out.push_str(month);
                    } else {
                        self.warnings
                            .push(format!("line {line}: undefined macro `{name}` kept verbatim"));
                        out.push_str(&name);
                    }
                }
                None => return self.error(line, "expected a field value, found end of file"),
            }
            self.skip_ws();
            if self.peek() == Some('#') {
                self.bump();
            } else {
                return Ok(collapse_ws(&out));
            }
        }
    }

    /// Skips the body of an entry whose opening delimiter was consumed.
    fn skip_body(&mut self, close: char, open_line: usize) -> Result<(), BibError> {
        if close == '}' {
            self.braced(open_line).map(|_| ())
        } else {
            let mut depth = 0usize;
            while let Some(c) = self.bump() {
                match c {
                    '{' => depth += 1,
                    '}' if depth > 0 => depth -= 1,
                    ')' if depth == 0 => return Ok(()),
                    _ => {}
                }
            }
            self.error(open_line, "unbalanced parentheses: `(` is never closed")
        }
    }

    fn fields(&mut self, close: char, open_line: usize) -> Result<IndexMap<String, String>, BibError> {
        let mut fields = IndexMap::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c == close => {
                    self.bump();
                    return Ok(fields);
                }
                None => return self.error(open_line, "unbalanced braces: entry is never closed"),
                _ => {}
            }
            let line = self.line;
            let name = self.ident().to_lowercase();
            if name.is_empty() {
                return self.error(line, format!("expected a field name, found `{}`", self.peek().unwrap()));
            }
            self.expect('=')?;
            let value = self.value()?;
            if fields.insert(name.clone(), value).is_some() {
                self.warnings
                    .push(format!("line {line}: field `{name}` repeated, last value kept"));
            }
            self.skip_ws();
            match self.peek() {
                Some(',') => {
                    self.bump();
                }
                Some(c) if c == close => {}
                Some(c) => return self.error(self.line, format!("expected `,` or `{close}`, found `{c}`")),
                None => return self.error(open_line, "unbalanced braces: entry is never closed"),
            }
        }
    }
}

fn collapse_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Parses a BibTeX file into entries in file order.
pub fn parse_bibtex(text: &str) -> Result<Bibliography, BibError> {
    let mut warnings = Vec::new();
    let mut entries = Vec::new();
    let mut keys: HashSet<String> = HashSet::new();
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        macros: HashMap::new(),
        warnings: &mut warnings,
    };

    loop {
        while p.peek().is_some_and(|c| c != '@') {
            p.bump();
        }
        if p.bump().is_none() {
            break;
        }
        let at_line = p.line;
        p.skip_ws();
        let kind = p.ident().to_lowercase();
        p.skip_ws();
        let close = match p.peek() {
            Some('{') => '}',
            Some('(') => ')',
            _ => {
                p.warnings
                    .push(format!("line {at_line}: stray `@{kind}` ignored"));
                continue;
            }
        };
        p.bump();

        match kind.as_str() {
            "comment" | "preamble" => {
                p.warnings.push(format!("line {at_line}: @{kind} skipped"));
                p.skip_body(close, at_line)?;
            }
            "string" => {
                for (name, value) in p.fields(close, at_line)? {
                    p.macros.insert(name, value);
                }
            }
            t if ENTRY_TYPES.contains(&t) => {
                p.skip_ws();
                let mut citekey = String::new();
                while let Some(c) = p.peek() {
                    if c == ',' || c == close || c.is_whitespace() {
                        break;
                    }
                    citekey.push(c);
                    p.bump();
                }
                if citekey.is_empty() {
                    return p.error(at_line, format!("@{kind} entry has no citation key"));
                }
                p.skip_ws();
                let fields = match p.peek() {
                    Some(',') => {
                        p.bump();
                        p.fields(close, at_line)?
                    }
                    Some(c) if c == close => {
                        p.bump();
                        IndexMap::new()
                    }
                    _ => return p.error(p.line, format!("expected `,` after citation key `{citekey}`")),
                };
                if !keys.insert(citekey.clone()) {
                    return p.error(at_line, format!("duplicate citation key `{citekey}`"));
                }
                entries.push(BibEntry {
                    entry_type: kind,
                    citekey,
                    fields,
                });
            }
            _ => {
                p.warnings
                    .push(format!("line {at_line}: unknown entry type @{kind} skipped"));
                p.skip_body(close, at_line)?;
            }
        }
    }

    Ok(Bibliography { entries, warnings })
}

/// Writes entries back out with every value in braces.
pub fn to_bibtex(entries: &[BibEntry]) -> String {
    let mut out = String::new();
    for (i, entry) in entries.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "@{}{{{},", entry.entry_type, entry.citekey);
        for (name, value) in &entry.fields {
            let _ = writeln!(out, "  {name} = {{{value}}},");
        }
        out.push_str("}\n");
    }
    out
}
