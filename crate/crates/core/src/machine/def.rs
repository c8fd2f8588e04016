use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::Polarity;
use crate::error::{Error, Result};
use crate::letter::Letter;

/// File representation of a transducer. Field order is alphabetical so the
/// serialized form has sorted keys.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransducerDef {
    pub r#final: String,
    pub initial: String,
    pub input_alphabet: Vec<Letter>,
    pub name: String,
    pub output_alphabet: Vec<Letter>,
    pub states: Vec<StateDef>,
    pub transitions: Vec<TransitionDef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDef {
    pub id: String,
    pub polarity: Polarity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDef {
    pub from: String,
    pub letter: Letter,
    pub output: Vec<Letter>,
    pub to: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn error(message: String) -> Self {
        Diagnostic { severity: Severity::Error, message }
    }

    fn warning(message: String) -> Self {
        Diagnostic { severity: Severity::Warning, message }
    }
}

/// Structural validation of a transducer file.
///
/// Dangling references and letters outside the alphabets are hard errors.
/// Backward initial or final states are reported as error diagnostics, and
/// departures from the endmarker convention (only `q_I` leaves on `⊢` among
/// forward states, only `q_F` is entered on `⊣`) as warnings, since some
/// constructions such as the letter multiplier deliberately violate it.
pub fn validate(def: &TransducerDef) -> Result<Vec<Diagnostic>> {
    let mut polarity = HashMap::new();
    for s in &def.states {
        if polarity.insert(s.id.as_str(), s.polarity).is_some() {
            return Err(Error::DuplicateState(s.id.clone()));
        }
    }
    for l in def.input_alphabet.iter().chain(&def.output_alphabet) {
        if l.is_endmarker() {
            return Err(Error::Invalid(format!("reserved token {:?} in alphabet", l.as_str())));
        }
    }
    let input: HashSet<&Letter> = def.input_alphabet.iter().collect();
    let output: HashSet<&Letter> = def.output_alphabet.iter().collect();
    let lookup = |id: &str| polarity.get(id).copied().ok_or_else(|| Error::UnknownState(id.to_string()));

    let mut diags = Vec::new();
    for (what, id) in [("initial", &def.initial), ("final", &def.r#final)] {
        if lookup(id)? == Polarity::Backward {
            diags.push(Diagnostic::error(format!("{what} state {id} is backward")));
        }
    }

    let mut seen = HashSet::new();
    for t in &def.transitions {
        let from = lookup(&t.from)?;
        lookup(&t.to)?;
        if !t.letter.is_endmarker() && !input.contains(&t.letter) {
            return Err(Error::LetterNotInAlphabet { letter: t.letter.as_str().into(), alphabet: "input" });
        }
        if let Some(o) = t.output.iter().find(|o| !output.contains(o)) {
            return Err(Error::LetterNotInAlphabet { letter: o.as_str().into(), alphabet: "output" });
        }
        if !seen.insert((t.from.as_str(), &t.letter, t.to.as_str())) {
            return Err(Error::DuplicateTransition(format!("({}, {}, {})", t.from, t.letter, t.to)));
        }
        if t.letter.is_begin() && from == Polarity::Forward && t.from != def.initial {
            diags.push(Diagnostic::warning(format!(
                "forward state {} other than the initial state reads ⊢",
                t.from
            )));
        }
        if t.letter.is_end() && lookup(&t.to)? == Polarity::Forward && t.to != def.r#final {
            diags.push(Diagnostic::warning(format!(
                "forward state {} other than the final state is entered on ⊣",
                t.to
            )));
        }
    }
    Ok(diags)
}
