//! Canonical JSON encoding of transducers and SSTs.

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::machine::{Transducer, TransducerDef};
use crate::sst::{Sst, SstDef};

fn from_json<T: DeserializeOwned>(bytes: &[u8]) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_data() {
            Error::Schema { path, message: inner.to_string() }
        } else {
            Error::MalformedJson(inner.to_string())
        }
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn schema(path: &str, e: Error) -> Error {
    Error::Schema { path: path.to_string(), message: e.to_string() }
}

/// Parses and validates a transducer file. Every structural problem is
/// reported as a schema violation with the offending section as path.
pub fn parse_transducer(bytes: &[u8]) -> Result<Transducer> {
    let def: TransducerDef = from_json(bytes)?;
    Transducer::from_def(&def).map_err(|e| {
        let path = match &e {
            Error::DuplicateState(_) => "states",
            Error::UnknownState(_) | Error::DuplicateTransition(_) => "transitions",
            Error::LetterNotInAlphabet { .. } => "transitions",
            _ => "$",
        };
        schema(path, e)
    })
}

/// Canonical form: sorted keys, states in declaration order, transitions
/// sorted by source, letter and target.
pub fn serialize_transducer(t: &Transducer) -> String {
    to_json(&t.to_def())
}

pub fn parse_sst(bytes: &[u8]) -> Result<Sst> {
    let def: SstDef = from_json(bytes)?;
    Sst::from_def(&def).map_err(|e| match e {
        Error::NotCopyless(_) | Error::NotDeterministic(_) => e,
        e => schema("$", e),
    })
}

pub fn serialize_sst(s: &Sst) -> String {
    to_json(&s.to_def())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixture_files_are_canonical() {
        for src in [
            fixtures::T1_JSON,
            fixtures::A1_JSON,
            fixtures::A2_JSON,
            fixtures::ID_JSON,
            fixtures::REL_JSON,
        ] {
            let t = parse_transducer(src.as_bytes()).unwrap();
            assert_eq!(serialize_transducer(&t), src);
        }
        let s = parse_sst(fixtures::PAL_SST_JSON.as_bytes()).unwrap();
        assert_eq!(serialize_sst(&s), fixtures::PAL_SST_JSON);
    }

    #[test]
    fn bad_polarity_is_schema_violation() {
        let src = fixtures::ID_JSON.replacen("\"+\"", "\"x\"", 1);
        match parse_transducer(src.as_bytes()) {
            Err(Error::Schema { path, .. }) => assert!(path.starts_with("states"), "{path}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_ids_and_unknown_keys() {
        let src = fixtures::ID_JSON.replacen("\"id\": \"x\"", "\"id\": \"qI\"", 1);
        assert!(matches!(parse_transducer(src.as_bytes()), Err(Error::Schema { .. })));
        let src = fixtures::ID_JSON.replacen("\"name\"", "\"extra\": 1,\n  \"name\"", 1);
        assert!(matches!(parse_transducer(src.as_bytes()), Err(Error::Schema { .. })));
        assert!(matches!(parse_transducer(b"{"), Err(Error::MalformedJson(_))));
    }
}
