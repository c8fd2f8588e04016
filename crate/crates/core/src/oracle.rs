//! Brute-force ground truth by enumeration of simple runs on short words.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::letter::{render, Letter, Word};
use crate::machine::{successors, Configuration, Run, StateIdx, Step, Tape, Transducer};

/// Longest word accepted by the enumerating functions unless overridden.
pub const DEFAULT_MAX_LEN: usize = 8;

/// All words over `alphabet` of length at most `max_len`, shortest first and
/// lexicographic within a length.
pub fn words(alphabet: &[Letter], max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for a in alphabet {
                let mut v: Word = w.clone();
                v.push(a.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

struct Search<'a> {
    t: &'a Transducer,
    tape: Tape,
    goal: Configuration,
    on_path: HashSet<Configuration>,
    steps: Vec<Step>,
}

impl Search<'_> {
    fn dfs(&mut self, c: Configuration, out: &mut impl FnMut(Run, bool)) {
        if c == self.goal {
            out(Run { steps: self.steps.clone(), end: c }, true);
            return;
        }
        let succ = successors(self.t, &self.tape, c);
        let mut extended = false;
        for (d, idx) in succ {
            if self.on_path.contains(&d) {
                continue;
            }
            extended = true;
            self.on_path.insert(d);
            self.steps.push(Step { from: c, transition: idx });
            self.dfs(d, out);
            self.steps.pop();
            self.on_path.remove(&d);
        }
        if !extended {
            out(Run { steps: self.steps.clone(), end: c }, false);
        }
    }
}

fn search(t: &Transducer, u: &[Letter], max_len: usize, mut out: impl FnMut(Run, bool)) -> Result<()> {
    if u.len() > max_len {
        return Err(Error::WordTooLong { len: u.len(), bound: max_len });
    }
    let tape = t.tape(u)?;
    let start = Configuration::new(t.initial(), 0);
    let mut s = Search {
        t,
        goal: Configuration::new(t.final_state(), tape.len()),
        tape,
        on_path: HashSet::from([start]),
        steps: Vec::new(),
    };
    s.dfs(start, &mut out);
    Ok(())
}

/// Every simple accepting run on `⊢u⊣`, in depth-first order.
pub fn enumerate_accepting_runs(t: &Transducer, u: &[Letter]) -> Result<Vec<Run>> {
    enumerate_accepting_runs_bounded(t, u, DEFAULT_MAX_LEN)
}

pub fn enumerate_accepting_runs_bounded(t: &Transducer, u: &[Letter], max_len: usize) -> Result<Vec<Run>> {
    let mut runs = Vec::new();
    search(t, u, max_len, |r, accepting| {
        if accepting {
            runs.push(r)
        }
    })?;
    Ok(runs)
}

/// Maximal simple runs from the initial configuration: the branches of the
/// run-tree. Each branch ends accepting, stuck, or about to repeat a
/// configuration.
pub fn initial_runs(t: &Transducer, u: &[Letter]) -> Result<Vec<(Run, bool)>> {
    let mut runs = Vec::new();
    search(t, u, DEFAULT_MAX_LEN, |r, accepting| runs.push((r, accepting)))?;
    Ok(runs)
}

/// Outputs of all simple accepting runs on `u`.
pub fn outputs(t: &Transducer, u: &[Letter]) -> Result<BTreeSet<Word>> {
    Ok(enumerate_accepting_runs_bounded(t, u, usize::MAX)?.iter().map(|r| r.output(t)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub max_len: usize,
    pub pairs: BTreeSet<(Word, Word)>,
}

impl Relation {
    pub fn domain(&self) -> BTreeSet<Word> {
        self.pairs.iter().map(|(u, _)| u.clone()).collect()
    }

    pub fn image(&self, u: &[Letter]) -> BTreeSet<Word> {
        self.pairs.iter().filter(|(v, _)| v == u).map(|(_, w)| w.clone()).collect()
    }
}

/// The pairs `(u, output)` realized by simple accepting runs, `|u| ≤ max_len`.
pub fn relation(t: &Transducer, max_len: usize) -> Relation {
    let mut pairs = BTreeSet::new();
    for u in words(t.input_alphabet(), max_len) {
        for v in outputs(t, &u).expect("words over the input alphabet are valid") {
            pairs.insert((u.clone(), v));
        }
    }
    Relation { max_len, pairs }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equal,
    Counterexample { word: Word, left: BTreeSet<Word>, right: BTreeSet<Word> },
}

impl Equivalence {
    pub fn is_equal(&self) -> bool {
        matches!(self, Equivalence::Equal)
    }
}

fn same_alphabets(a: &Transducer, b: &Transducer, outputs_too: bool) -> Result<()> {
    if a.input_alphabet() != b.input_alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "input alphabets {:?} and {:?}",
            a.input_alphabet(),
            b.input_alphabet()
        )));
    }
    if outputs_too && a.output_alphabet() != b.output_alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "output alphabets {:?} and {:?}",
            a.output_alphabet(),
            b.output_alphabet()
        )));
    }
    Ok(())
}

/// Compares the relations of two transducers on all words up to `max_len`,
/// reporting the shortest differing word.
pub fn check_equiv(a: &Transducer, b: &Transducer, max_len: usize) -> Result<Equivalence> {
    same_alphabets(a, b, true)?;
    check_equiv_unchecked(a, b, max_len)
}

/// [`check_equiv`] without the alphabet precondition; output alphabets of
/// intermediate constructions may be supersets of the original.
pub fn check_equiv_unchecked(a: &Transducer, b: &Transducer, max_len: usize) -> Result<Equivalence> {
    same_alphabets(a, b, false)?;
    for u in words(a.input_alphabet(), max_len) {
        let (left, right) = (outputs(a, &u)?, outputs(b, &u)?);
        if left != right {
            return Ok(Equivalence::Counterexample { word: u, left, right });
        }
    }
    Ok(Equivalence::Equal)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Uniformity {
    Ok,
    /// `chosen` is the output of the uniformizer (`None` if it rejects) and
    /// `allowed` the outputs of the relation on `word`.
    Counterexample { word: Word, chosen: Option<Word>, allowed: BTreeSet<Word> },
}

impl Uniformity {
    pub fn is_ok(&self) -> bool {
        matches!(self, Uniformity::Ok)
    }
}

/// Checks that `tu` has the same domain as `t` and that its graph is
/// included in the relation of `t`, on words up to `max_len`.
pub fn check_uniformizes(tu: &Transducer, t: &Transducer, max_len: usize) -> Result<Uniformity> {
    same_alphabets(tu, t, false)?;
    for u in words(t.input_alphabet(), max_len) {
        let chosen = outputs(tu, &u)?;
        if chosen.len() > 1 {
            return Err(Error::NotFunctional(render(&u)));
        }
        let chosen = chosen.into_iter().next();
        let allowed = outputs(t, &u)?;
        let ok = match &chosen {
            Some(v) => allowed.contains(v),
            None => allowed.is_empty(),
        };
        if !ok {
            return Ok(Uniformity::Counterexample { word: u, chosen, allowed });
        }
    }
    Ok(Uniformity::Ok)
}

/// Number of letters of `u` consumed by the longest run of the one-way
/// transducer `t` starting in `p` at the beginning of `u`.
pub fn longrun(t: &Transducer, u: &[Letter], p: StateIdx) -> Result<usize> {
    if !t.is_one_way() {
        return Err(Error::NotOneWay);
    }
    let mut current = BTreeSet::from([p]);
    for (i, a) in u.iter().enumerate() {
        let Some(a) = t.letter_index(a) else {
            return Ok(i);
        };
        let next: BTreeSet<StateIdx> =
            current.iter().flat_map(|&q| t.outgoing_on(q, a).iter().map(|tr| tr.to)).collect();
        if next.is_empty() {
            return Ok(i);
        }
        current = next;
    }
    Ok(u.len())
}

/// Length-lexicographic order on state sequences: shorter first, then
/// pointwise by declaration order.
pub fn cmp_lex(a: &[StateIdx], b: &[StateIdx]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Slices of `run` at every boundary of a word of endmarked length `len`.
pub fn slices(run: &Run, len: usize) -> Vec<Vec<StateIdx>> {
    let mut out = vec![Vec::new(); len + 1];
    for c in run.configurations() {
        out[c.pos].push(c.state);
    }
    out
}

fn cmp_sl(a: &[Vec<StateIdx>], b: &[Vec<StateIdx>]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| cmp_lex(x, y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// The accepting run whose slice sequence is least, comparing boundaries
/// from left to right.
pub fn minimal_run(t: &Transducer, u: &[Letter]) -> Result<Run> {
    let len = u.len() + 2;
    enumerate_accepting_runs(t, u)?
        .into_iter()
        .map(|r| (slices(&r, len), r))
        .min_by(|(a, _), (b, _)| cmp_sl(a, b))
        .map(|(_, r)| r)
        .ok_or_else(|| Error::WordNotAccepted(render(u)))
}
