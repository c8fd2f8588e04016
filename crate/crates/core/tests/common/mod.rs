//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use revxdt::letter::{Letter, Word};
use revxdt::machine::{end_to_end, Exit, Side, StateIdx, Transducer};
use revxdt::oracle::{outputs, relation, words};
use revxdt::tree_outline::{MarkedPair, Marker, TreeOutline};

/// Every `(target, output)` of the paths of the one-way machine `t` that
/// start in `p` and read exactly `u`.
pub fn one_way_paths(t: &Transducer, p: StateIdx, u: &[Letter]) -> BTreeSet<(StateIdx, Word)> {
    let mut current = BTreeSet::from([(p, Vec::new())]);
    for a in u {
        let Some(a) = t.letter_index(a) else {
            return BTreeSet::new();
        };
        let mut next = BTreeSet::new();
        for (q, out) in &current {
            for tr in t.outgoing_on(*q, a) {
                let mut o: Word = out.clone();
                o.extend(tr.output.iter().cloned());
                next.insert((tr.to, o));
            }
        }
        current = next;
    }
    current
}

/// Length of the longest prefix of `u` readable from `p`, by direct
/// enumeration of prefixes.
pub fn longest_prefix(t: &Transducer, p: StateIdx, u: &[Letter]) -> usize {
    (0..=u.len()).rev().find(|&k| !one_way_paths(t, p, &u[..k]).is_empty()).unwrap_or(0)
}

/// `{(u, w) : (u, v) ∈ R1, w ∈ T2(v)}` over inputs of length at most `max_len`.
pub fn composed_relation(t1: &Transducer, t2: &Transducer, max_len: usize) -> BTreeSet<(Word, Word)> {
    let mut out = BTreeSet::new();
    for (u, v) in relation(t1, max_len).pairs {
        for w in outputs(t2, &v).expect("outputs of the first machine are valid inputs") {
            out.insert((u.clone(), w));
        }
    }
    out
}

pub fn contains_aa(u: &[Letter]) -> bool {
    u.windows(2).any(|w| w[0].as_str() == "a" && w[1].as_str() == "a")
}

pub fn domain(t: &Transducer, max_len: usize) -> Vec<Word> {
    words(t.input_alphabet(), max_len).into_iter().filter(|u| !outputs(t, u).unwrap().is_empty()).collect()
}

fn state(to: &TreeOutline, p: StateIdx, mp: Marker, q: StateIdx, mq: Marker) -> StateIdx {
    to.state(MarkedPair::new(p, mp, q, mq)).expect("state exists")
}

fn expect_run(
    to: &TreeOutline,
    u: &[Letter],
    from: StateIdx,
    side: Side,
    target: StateIdx,
    what: &str,
) -> Result<(), String> {
    let tape = to.machine.encode(u);
    let e = end_to_end(&to.machine, &tape, from);
    if e.exit != Exit::Leaves(side, target) {
        return Err(format!("{what}: expected to leave in {}, got {:?}", to.machine.state_id(target), e.exit));
    }
    if !e.output.is_empty() {
        return Err(format!("{what}: produced {:?}", e.output));
    }
    Ok(())
}

/// The four output-free left-to-left runs of the outline on `u` between
/// marked pairs of `p` and `q`, when their length conditions hold. Returns
/// whether the premise applied.
pub fn seq_state(t: &Transducer, to: &TreeOutline, u: &[Letter], p: StateIdx, q: StateIdx) -> Result<bool, String> {
    use Marker::{Down, Up};
    let (lp, lq) = (longest_prefix(t, p, u), longest_prefix(t, q, u));
    if p == q || lp >= u.len() {
        return Ok(false);
    }
    let left = Side::Left;
    if lp <= lq {
        expect_run(to, u, state(to, p, Up, q, Down), left, state(to, p, Down, q, Down), "live run 1")?;
        expect_run(to, u, state(to, p, Down, q, Up), left, state(to, p, Up, q, Up), "dead run 1")?;
    }
    if lp < lq {
        expect_run(to, u, state(to, q, Down, p, Up), left, state(to, q, Down, p, Down), "live run 2")?;
        expect_run(to, u, state(to, q, Up, p, Down), left, state(to, q, Up, p, Up), "dead run 2")?;
    }
    Ok(true)
}

/// On the longest prefix `u'` of `u` readable from `p`, the outline crosses
/// from `(^p,_p)` to some `(^q,_q)` with the output of a run of `t` from `p`
/// to `q` over `u'`. Returns `false` without checking when two runs from
/// `p` read the whole of `u`: nothing then tells the branches apart.
pub fn acc_state(t: &Transducer, to: &TreeOutline, u: &[Letter], p: StateIdx) -> Result<bool, String> {
    use Marker::{Down, Up};
    let k = longest_prefix(t, p, u);
    let prefix = &u[..k];
    if k == u.len() && one_way_paths(t, p, u).len() > 1 {
        return Ok(false);
    }
    let tape = to.machine.encode(prefix);
    let e = end_to_end(&to.machine, &tape, state(to, p, Up, p, Down));
    let Exit::Leaves(Side::Right, s) = e.exit else {
        return Err(format!("no crossing run on {k} letters: {:?}", e.exit));
    };
    let runs = one_way_paths(t, p, prefix);
    let matched = runs.iter().any(|(q, out)| s == state(to, *q, Up, *q, Down) && *out == e.output);
    if matched {
        Ok(true)
    } else {
        Err(format!("left in {} with {:?}, runs of the machine: {runs:?}", to.machine.state_id(s), e.output))
    }
}

/// Word over `alphabet` choosing letters by `picks`, wrapped around.
pub fn pick_word(alphabet: &[Letter], picks: &[usize]) -> Word {
    picks.iter().map(|&i| alphabet[i % alphabet.len()].clone()).collect()
}
