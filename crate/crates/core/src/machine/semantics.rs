use std::collections::HashSet;

use super::{check_properties, LetterIdx, StateIdx, Transducer, Transition};
use crate::error::{Error, Result};
use crate::letter::{Letter, Word};

/// An endmarked word encoded as letter indices of one transducer. Letters
/// outside the transducer's alphabet become [`Tape::FOREIGN`], which no
/// transition reads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tape {
    pub letters: Vec<LetterIdx>,
}

impl Tape {
    pub const FOREIGN: LetterIdx = LetterIdx::MAX;

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Returns `⊢ u ⊣`.
pub fn wrap_input(u: &[Letter]) -> Result<Word> {
    if let Some(l) = u.iter().find(|l| l.is_endmarker()) {
        return Err(Error::ReservedTokenInInput(l.as_str().to_string()));
    }
    let mut w = Vec::with_capacity(u.len() + 2);
    w.push(Letter::begin());
    w.extend(u.iter().cloned());
    w.push(Letter::end());
    Ok(w)
}

/// A state together with a boundary position of the endmarked word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateIdx,
    pub pos: usize,
}

impl Configuration {
    pub fn new(state: StateIdx, pos: usize) -> Self {
        Configuration { state, pos }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub from: Configuration,
    /// Index into [`Transducer::transitions`].
    pub transition: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Run {
    pub steps: Vec<Step>,
    pub end: Configuration,
}

impl Run {
    pub fn configurations(&self) -> impl Iterator<Item = Configuration> + '_ {
        self.steps.iter().map(|s| s.from).chain(std::iter::once(self.end))
    }

    pub fn start(&self) -> Configuration {
        self.steps.first().map_or(self.end, |s| s.from)
    }

    pub fn output(&self, t: &Transducer) -> Word {
        self.steps
            .iter()
            .flat_map(|s| t.transitions()[s.transition].output.iter().cloned())
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::new();
        self.configurations().all(|c| seen.insert(c))
    }

    /// States visiting boundary `pos`, in temporal order.
    pub fn slice(&self, pos: usize) -> Vec<StateIdx> {
        self.configurations().filter(|c| c.pos == pos).map(|c| c.state).collect()
    }
}

impl Transducer {
    /// Wraps `u` with endmarkers and encodes it for this transducer.
    pub fn tape(&self, u: &[Letter]) -> Result<Tape> {
        let w = wrap_input(u)?;
        Ok(self.encode(&w))
    }

    /// Encodes a raw letter sequence without adding endmarkers.
    pub fn encode(&self, w: &[Letter]) -> Tape {
        Tape {
            letters: w.iter().map(|l| self.letter_index(l).unwrap_or(Tape::FOREIGN)).collect(),
        }
    }

    /// Letter read by state `q` at boundary `pos`, if any.
    pub fn read(&self, tape: &Tape, q: StateIdx, pos: usize) -> Option<LetterIdx> {
        if self.is_forward(q) {
            tape.letters.get(pos).copied()
        } else if pos > 0 {
            tape.letters.get(pos - 1).copied()
        } else {
            None
        }
    }

    /// Position reached by `t` when fired from boundary `pos`.
    pub fn target_pos(&self, t: &Transition, pos: usize) -> usize {
        match (self.is_forward(t.from), self.is_forward(t.to)) {
            (true, true) => pos + 1,
            (false, false) => pos - 1,
            _ => pos,
        }
    }
}

/// All successor configurations of `c`, with the index of the transition used.
pub fn successors(t: &Transducer, tape: &Tape, c: Configuration) -> Vec<(Configuration, usize)> {
    let Some(letter) = t.read(tape, c.state, c.pos) else {
        return Vec::new();
    };
    t.out_range(c.state, letter)
        .map(|idx| {
            let tr = &t.transitions()[idx];
            (Configuration::new(tr.to, t.target_pos(tr, c.pos)), idx)
        })
        .collect()
}

/// All predecessor configurations of `c`, obtained by inverting the four
/// movement rules.
pub fn predecessors(t: &Transducer, tape: &Tape, c: Configuration) -> Vec<(Configuration, usize)> {
    let letters = &tape.letters;
    let q = c.state;
    let letter = if t.is_forward(q) {
        if c.pos == 0 {
            return Vec::new();
        }
        letters[c.pos - 1]
    } else {
        match letters.get(c.pos) {
            Some(&l) => l,
            None => return Vec::new(),
        }
    };
    let mut out = Vec::new();
    for &i in &t.in_order[t.in_start[q]..t.in_start[q + 1]] {
        let tr = &t.transitions[i];
        if tr.letter != letter {
            continue;
        }
        let pos = match (t.is_forward(tr.from), t.is_forward(q)) {
            (true, true) => c.pos - 1,
            (false, false) => c.pos + 1,
            _ => c.pos,
        };
        out.push((Configuration::new(tr.from, pos), i));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Accepted { output: Word, run: Run },
    Rejected,
    Diverges,
}

/// Runs a deterministic transducer on `⊢u⊣`.
pub fn run_deterministic(t: &Transducer, u: &[Letter]) -> Result<Outcome> {
    let report = check_properties(t);
    if !report.deterministic {
        let w = report.deterministic_witness.map(|p| p.describe(t)).unwrap_or_default();
        return Err(Error::NotDeterministic(w));
    }
    let tape = t.tape(u)?;
    let goal = Configuration::new(t.final_state(), tape.len());
    let mut c = Configuration::new(t.initial(), 0);
    let mut seen = HashSet::new();
    let mut steps = Vec::new();
    loop {
        if c == goal {
            let run = Run { steps, end: c };
            return Ok(Outcome::Accepted { output: run.output(t), run });
        }
        if !seen.insert(c) {
            return Ok(Outcome::Diverges);
        }
        match successors(t, &tape, c).first() {
            Some(&(next, idx)) => {
                steps.push(Step { from: c, transition: idx });
                c = next;
            }
            None => return Ok(Outcome::Rejected),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exit {
    /// Left the fragment through the given side in the given state.
    Leaves(Side, StateIdx),
    /// Got stuck inside the fragment.
    Blocked,
    /// Repeated a local configuration.
    Loops,
}

/// Result of simulating a deterministic transducer inside a fragment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndToEnd {
    pub entry: StateIdx,
    pub exit: Exit,
    pub output: Word,
}

/// Simulates `t` on the fragment `v` from `entry`: forward states enter at
/// the left edge, backward states at the right edge. Forward states leave
/// at the right edge, backward states at the left edge. The first matching
/// transition is used, so the caller is responsible for determinism.
pub fn end_to_end(t: &Transducer, v: &Tape, entry: StateIdx) -> EndToEnd {
    let k = v.len();
    let mut c = Configuration::new(entry, if t.is_forward(entry) { 0 } else { k });
    let mut output = Vec::new();
    let mut seen = HashSet::new();
    let exit = loop {
        if t.is_forward(c.state) && c.pos == k {
            break Exit::Leaves(Side::Right, c.state);
        }
        if !t.is_forward(c.state) && c.pos == 0 {
            break Exit::Leaves(Side::Left, c.state);
        }
        if !seen.insert(c) {
            break Exit::Loops;
        }
        match successors(t, v, c).first() {
            Some(&(next, idx)) => {
                output.extend(t.transitions()[idx].output.iter().cloned());
                c = next;
            }
            None => break Exit::Blocked,
        }
    };
    EndToEnd { entry, exit, output }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::letter::word;

    #[test]
    fn wrap_examples() {
        assert_eq!(wrap_input(&word("ab")).unwrap().len(), 4);
        assert_eq!(wrap_input(&[]).unwrap(), vec![Letter::begin(), Letter::end()]);
        let bad = vec![Letter::new("a"), Letter::begin(), Letter::new("b")];
        assert!(matches!(wrap_input(&bad), Err(Error::ReservedTokenInInput(_))));
    }

    #[test]
    fn t1_successors_of_initial() {
        let t = fixtures::t1();
        let tape = t.tape(&word("ab")).unwrap();
        let mut succ: Vec<_> = successors(&t, &tape, Configuration::new(t.initial(), 0))
            .into_iter()
            .map(|(c, _)| (t.state_id(c.state).to_string(), c.pos))
            .collect();
        succ.sort();
        assert_eq!(succ, vec![("1".to_string(), 1), ("2".to_string(), 1)]);

        let zero = t.state_index("0").unwrap();
        let succ = successors(&t, &tape, Configuration::new(zero, 3));
        assert_eq!(succ.len(), 1);
        assert_eq!(succ[0].0, Configuration::new(t.final_state(), 4));
        assert!(successors(&t, &tape, Configuration::new(zero, 4)).is_empty());
    }

    #[test]
    fn predecessors_invert_successors() {
        let t = fixtures::a2();
        let tape = t.tape(&word("abaab")).unwrap();
        for q in 0..t.num_states() {
            for pos in 0..=tape.len() {
                let c = Configuration::new(q, pos);
                for (d, idx) in successors(&t, &tape, c) {
                    assert!(predecessors(&t, &tape, d).contains(&(c, idx)));
                }
            }
        }
    }

    #[test]
    fn deterministic_runs() {
        let a2 = fixtures::a2();
        assert!(matches!(run_deterministic(&a2, &word("baa")).unwrap(), Outcome::Accepted { ref output, .. } if output.is_empty()));
        assert_eq!(run_deterministic(&a2, &word("ab")).unwrap(), Outcome::Rejected);
        let id = fixtures::id();
        match run_deterministic(&id, &word("ab")).unwrap() {
            Outcome::Accepted { output, .. } => assert_eq!(output, word("ab")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(run_deterministic(&fixtures::t1(), &word("ab")), Err(Error::NotDeterministic(_))));
    }

    #[test]
    fn empty_fragment_is_identity() {
        let t = fixtures::mirror_ab();
        let v = t.encode(&[]);
        for q in 0..t.num_states() {
            let e = end_to_end(&t, &v, q);
            let side = if t.is_forward(q) { Side::Right } else { Side::Left };
            assert_eq!(e.exit, Exit::Leaves(side, q));
            assert!(e.output.is_empty());
        }
    }
}
