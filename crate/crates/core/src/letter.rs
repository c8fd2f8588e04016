//! Letters, words and the canonical encoding used for structured tokens.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Token denoting the left endmarker.
pub const BEGIN: &str = "__begin__";
/// Token denoting the right endmarker.
pub const END: &str = "__end__";

/// A letter of an input or output alphabet.
///
/// Letters are arbitrary non-empty strings so that constructions can emit
/// structured alphabets (`(a,q)`, behavior-enriched letters, transition
/// sequences) without a separate alphabet mechanism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(Arc<str>);

/// A finite word.
pub type Word = Vec<Letter>;

impl Letter {
    pub fn new(token: impl AsRef<str>) -> Self {
        Letter(Arc::from(token.as_ref()))
    }

    pub fn begin() -> Self {
        Letter::new(BEGIN)
    }

    pub fn end() -> Self {
        Letter::new(END)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_begin(&self) -> bool {
        &*self.0 == BEGIN
    }

    pub fn is_end(&self) -> bool {
        &*self.0 == END
    }

    pub fn is_endmarker(&self) -> bool {
        self.is_begin() || self.is_end()
    }

    /// Structured letter made of several components, see [`tuple`].
    pub fn tuple<S: AsRef<str>>(parts: &[S]) -> Self {
        Letter::new(tuple(parts))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            BEGIN => f.write_str("⊢"),
            END => f.write_str("⊣"),
            s => f.write_str(s),
        }
    }
}

impl From<&str> for Letter {
    fn from(s: &str) -> Self {
        Letter::new(s)
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s.is_empty() {
            return Err(serde::de::Error::custom("empty letter"));
        }
        Ok(Letter::new(s))
    }
}

/// Splits a plain string into one letter per character.
pub fn word(s: &str) -> Word {
    s.chars().map(|c| Letter::new(c.to_string())).collect()
}

/// Parses a command-line word: whitespace-separated tokens when the text
/// contains whitespace, one letter per character otherwise.
pub fn parse_word(s: &str) -> Word {
    if s.chars().any(char::is_whitespace) {
        s.split_whitespace().map(Letter::new).collect()
    } else {
        word(s)
    }
}

/// Renders a word as text: plain concatenation when every letter is a
/// single character, space separated otherwise.
pub fn render(w: &[Letter]) -> String {
    if w.iter().all(|l| l.as_str().chars().count() == 1) {
        w.iter().map(|l| l.as_str()).collect()
    } else {
        w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
    }
}

/// Canonical tuple encoding `(c1,c2,...)`; commas, parentheses and
/// backslashes inside components are backslash-escaped so distinct tuples
/// never collide.
pub fn tuple<S: AsRef<str>>(parts: &[S]) -> String {
    let mut out = String::from("(");
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        escape_into(p.as_ref(), &mut out);
    }
    out.push(')');
    out
}

/// Canonical list encoding `[c1,c2,...]`, escaped like [`tuple`].
pub fn list<S: AsRef<str>>(parts: &[S]) -> String {
    let mut out = String::from("[");
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        escape_into(p.as_ref(), &mut out);
    }
    out.push(']');
    out
}

fn escape_into(s: &str, out: &mut String) {
    for c in s.chars() {
        if matches!(c, ',' | '(' | ')' | '[' | ']' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
}
