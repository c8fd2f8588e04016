//! Small machines used throughout the tests, the acceptance suite and the
//! CLI examples. The JSON files under `fixtures/` are the canonical sources.

use crate::format::{parse_sst, parse_transducer};
use crate::letter::Letter;
use crate::machine::Transducer;
use crate::oneway::build_mirror;
use crate::sst::Sst;

pub const T1_JSON: &str = include_str!("../fixtures/t1.json");
pub const A1_JSON: &str = include_str!("../fixtures/a1.json");
pub const A2_JSON: &str = include_str!("../fixtures/a2.json");
pub const ID_JSON: &str = include_str!("../fixtures/id.json");
pub const REL_JSON: &str = include_str!("../fixtures/rel.json");
pub const PAL_SST_JSON: &str = include_str!("../fixtures/pal.sst.json");

fn load(src: &str) -> Transducer {
    parse_transducer(src.as_bytes()).expect("bundled fixture parses")
}

/// Co-deterministic, weakly branching 1FT whose outputs name the target state.
pub fn t1() -> Transducer {
    load(T1_JSON)
}

/// Deterministic one-way acceptor for words containing `aa`.
pub fn a1() -> Transducer {
    load(A1_JSON)
}

/// Reversible two-way acceptor for words containing `aa`.
pub fn a2() -> Transducer {
    load(A2_JSON)
}

/// Identity over `{a, b}`.
pub fn id() -> Transducer {
    load(ID_JSON)
}

/// Nondeterministic 2FT with two accepting runs on `ab`.
pub fn rel() -> Transducer {
    load(REL_JSON)
}

/// Copyless SST mapping `u` to `u · reverse(u)`.
pub fn pal() -> Sst {
    parse_sst(PAL_SST_JSON.as_bytes()).expect("bundled fixture parses")
}

pub fn mirror_ab() -> Transducer {
    build_mirror(&[Letter::new("a"), Letter::new("b")])
}

/// Every bundled transducer with its name.
pub fn all() -> Vec<(&'static str, Transducer)> {
    vec![("t1", t1()), ("a1", a1()), ("a2", a2()), ("id", id()), ("rel", rel()), ("mirror", mirror_ab())]
}
