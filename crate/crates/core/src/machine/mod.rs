//! Two-way transducers: data model, execution semantics and property checks.

mod def;
mod properties;
mod semantics;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::letter::{Letter, Word};

pub use def::{validate, Diagnostic, Severity, StateDef, TransducerDef, TransitionDef};
pub use properties::{check_properties, trim, BranchingWitness, PropertyReport, TransitionPair};
pub use semantics::{
    end_to_end, predecessors, run_deterministic, successors, wrap_input, Configuration, EndToEnd,
    Exit, Outcome, Run, Side, Step, Tape,
};

pub type StateIdx = usize;
pub type LetterIdx = u32;

/// Index of the left endmarker in [`Transducer::letters`].
pub const BEGIN_IDX: LetterIdx = 0;
/// Index of the right endmarker in [`Transducer::letters`].
pub const END_IDX: LetterIdx = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "+")]
    Forward,
    #[serde(rename = "-")]
    Backward,
}

impl Polarity {
    pub fn is_forward(self) -> bool {
        self == Polarity::Forward
    }

    pub fn sign(self) -> char {
        match self {
            Polarity::Forward => '+',
            Polarity::Backward => '-',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct State {
    pub id: String,
    pub polarity: Polarity,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub from: StateIdx,
    pub letter: LetterIdx,
    pub to: StateIdx,
    pub output: Word,
}

/// A two-way finite-state transducer over an endmarked input alphabet.
///
/// States are stored in declaration order, which is also the total order
/// used by the constructions. Transitions are kept sorted by
/// `(from, letter, to)` so two transducers with the same transition set
/// compare equal.
#[derive(Clone)]
pub struct Transducer {
    name: String,
    input_alphabet: Vec<Letter>,
    output_alphabet: Vec<Letter>,
    states: Vec<State>,
    ids: HashMap<String, StateIdx>,
    initial: StateIdx,
    final_state: StateIdx,
    letters: Vec<Letter>,
    letter_ids: HashMap<Letter, LetterIdx>,
    transitions: Vec<Transition>,
    out_start: Vec<usize>,
    in_order: Vec<usize>,
    in_start: Vec<usize>,
}

impl PartialEq for Transducer {
    fn eq(&self, other: &Self) -> bool {
        self.input_alphabet == other.input_alphabet
            && self.output_alphabet == other.output_alphabet
            && self.states == other.states
            && self.initial == other.initial
            && self.final_state == other.final_state
            && self.transitions.len() == other.transitions.len()
            && self.transitions.iter().zip(&other.transitions).all(|(a, b)| {
                a.from == b.from
                    && a.to == b.to
                    && a.output == b.output
                    && self.letters[a.letter as usize] == other.letters[b.letter as usize]
            })
    }
}

impl Eq for Transducer {}

impl fmt::Debug for Transducer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Transducer")
            .field("name", &self.name)
            .field("states", &self.states.len())
            .field("transitions", &self.transitions.len())
            .finish()
    }
}

impl Transducer {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Input alphabet without endmarkers, sorted.
    pub fn input_alphabet(&self) -> &[Letter] {
        &self.input_alphabet
    }

    pub fn output_alphabet(&self) -> &[Letter] {
        &self.output_alphabet
    }

    /// Endmarked input alphabet: `⊢`, `⊣`, then the input letters.
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, idx: LetterIdx) -> &Letter {
        &self.letters[idx as usize]
    }

    pub fn letter_index(&self, l: &Letter) -> Option<LetterIdx> {
        self.letter_ids.get(l).copied()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, idx: StateIdx) -> &State {
        &self.states[idx]
    }

    pub fn state_id(&self, idx: StateIdx) -> &str {
        &self.states[idx].id
    }

    pub fn polarity(&self, idx: StateIdx) -> Polarity {
        self.states[idx].polarity
    }

    pub fn is_forward(&self, idx: StateIdx) -> bool {
        self.states[idx].polarity.is_forward()
    }

    pub fn state_index(&self, id: &str) -> Option<StateIdx> {
        self.ids.get(id).copied()
    }

    pub fn initial(&self) -> StateIdx {
        self.initial
    }

    pub fn final_state(&self) -> StateIdx {
        self.final_state
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Transitions leaving `state`, sorted by letter then target.
    pub fn outgoing(&self, state: StateIdx) -> &[Transition] {
        &self.transitions[self.out_start[state]..self.out_start[state + 1]]
    }

    pub fn outgoing_on(&self, state: StateIdx, letter: LetterIdx) -> &[Transition] {
        &self.transitions[self.out_range(state, letter)]
    }

    /// Indices of the transitions leaving `state`.
    pub fn out_range_all(&self, state: StateIdx) -> std::ops::Range<usize> {
        self.out_start[state]..self.out_start[state + 1]
    }

    /// Indices of the transitions entering `state`, sorted by letter.
    pub fn incoming_indices(&self, state: StateIdx) -> impl Iterator<Item = usize> + '_ {
        self.in_order[self.in_start[state]..self.in_start[state + 1]].iter().copied()
    }

    /// Indices of the transitions leaving `state` on `letter`.
    pub fn out_range(&self, state: StateIdx, letter: LetterIdx) -> std::ops::Range<usize> {
        let (s, e) = (self.out_start[state], self.out_start[state + 1]);
        let out = &self.transitions[s..e];
        let lo = out.partition_point(|t| t.letter < letter);
        let hi = out.partition_point(|t| t.letter <= letter);
        s + lo..s + hi
    }

    /// Transitions entering `state`, sorted by letter then source.
    pub fn incoming(&self, state: StateIdx) -> impl Iterator<Item = &Transition> {
        self.in_order[self.in_start[state]..self.in_start[state + 1]]
            .iter()
            .map(move |&i| &self.transitions[i])
    }

    pub fn incoming_on(&self, state: StateIdx, letter: LetterIdx) -> impl Iterator<Item = &Transition> {
        let slice = &self.in_order[self.in_start[state]..self.in_start[state + 1]];
        let lo = slice.partition_point(|&i| self.transitions[i].letter < letter);
        slice[lo..]
            .iter()
            .map(move |&i| &self.transitions[i])
            .take_while(move |t| t.letter == letter)
    }

    pub fn is_one_way(&self) -> bool {
        self.states.iter().all(|s| s.polarity.is_forward())
    }

    /// `(from, ⊢/⊣/letter, to)` rendered with state ids, for messages.
    pub fn describe(&self, t: &Transition) -> String {
        format!("({}, {}, {})", self.state_id(t.from), self.letter(t.letter), self.state_id(t.to))
    }

    /// Longest output of a single transition.
    pub fn max_production(&self) -> usize {
        self.transitions.iter().map(|t| t.output.len()).max().unwrap_or(0)
    }

    pub fn to_def(&self) -> TransducerDef {
        TransducerDef {
            r#final: self.state_id(self.final_state).to_string(),
            initial: self.state_id(self.initial).to_string(),
            input_alphabet: self.input_alphabet.clone(),
            name: self.name.clone(),
            output_alphabet: self.output_alphabet.clone(),
            states: self
                .states
                .iter()
                .map(|s| StateDef { id: s.id.clone(), polarity: s.polarity })
                .collect(),
            transitions: self
                .transitions
                .iter()
                .map(|t| TransitionDef {
                    from: self.state_id(t.from).to_string(),
                    letter: self.letter(t.letter).clone(),
                    output: t.output.clone(),
                    to: self.state_id(t.to).to_string(),
                })
                .collect(),
        }
    }

    /// Builds a transducer from its file representation; validation errors
    /// and error-severity diagnostics are rejected.
    pub fn from_def(def: &TransducerDef) -> Result<Self> {
        let diags = validate(def)?;
        if let Some(d) = diags.iter().find(|d| d.severity == Severity::Error) {
            return Err(Error::Invalid(d.message.clone()));
        }
        let mut b = TransducerBuilder::new(def.name.clone());
        b.input_letters(def.input_alphabet.iter().cloned());
        b.output_letters(def.output_alphabet.iter().cloned());
        for s in &def.states {
            b.state(s.id.clone(), s.polarity);
        }
        let idx = |id: &str| b.ids[id];
        let (init, fin) = (idx(&def.initial), idx(&def.r#final));
        let trans: Vec<_> = def
            .transitions
            .iter()
            .map(|t| (idx(&t.from), t.letter.clone(), idx(&t.to), t.output.clone()))
            .collect();
        b.initial(init).final_state(fin);
        for (f, l, t, o) in trans {
            b.transition(f, l, t, o);
        }
        b.build()
    }
}

/// Incremental construction of a [`Transducer`] over state indices.
#[derive(Clone, Debug, Default)]
pub struct TransducerBuilder {
    name: String,
    input: BTreeSet<Letter>,
    output: BTreeSet<Letter>,
    states: Vec<State>,
    ids: HashMap<String, StateIdx>,
    duplicate_ids: Vec<String>,
    initial: Option<StateIdx>,
    final_state: Option<StateIdx>,
    transitions: Vec<Transition>,
    pending_letters: Vec<Letter>,
    letter_ids: HashMap<Letter, LetterIdx>,
    infer_alphabets: bool,
}

impl TransducerBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        let mut b = TransducerBuilder { name: name.into(), ..Default::default() };
        b.intern(Letter::begin());
        b.intern(Letter::end());
        b
    }

    /// Letters used by transitions and outputs are added to the alphabets
    /// instead of being rejected.
    pub fn infer_alphabets(&mut self) -> &mut Self {
        self.infer_alphabets = true;
        self
    }

    pub fn input_letters(&mut self, letters: impl IntoIterator<Item = Letter>) -> &mut Self {
        self.input.extend(letters);
        self
    }

    pub fn output_letters(&mut self, letters: impl IntoIterator<Item = Letter>) -> &mut Self {
        self.output.extend(letters);
        self
    }

    /// Declares a state; declaration order is the state order.
    pub fn state(&mut self, id: impl Into<String>, polarity: Polarity) -> StateIdx {
        let id = id.into();
        let idx = self.states.len();
        if self.ids.insert(id.clone(), idx).is_some() {
            self.duplicate_ids.push(id.clone());
        }
        self.states.push(State { id, polarity });
        idx
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&mut self, s: StateIdx) -> &mut Self {
        self.initial = Some(s);
        self
    }

    pub fn final_state(&mut self, s: StateIdx) -> &mut Self {
        self.final_state = Some(s);
        self
    }

    fn intern(&mut self, l: Letter) -> LetterIdx {
        if let Some(&i) = self.letter_ids.get(&l) {
            return i;
        }
        let i = self.pending_letters.len() as LetterIdx;
        self.letter_ids.insert(l.clone(), i);
        self.pending_letters.push(l);
        i
    }

    pub fn transition(&mut self, from: StateIdx, letter: Letter, to: StateIdx, output: Word) -> &mut Self {
        let letter = self.intern(letter);
        self.transitions.push(Transition { from, letter, to, output });
        self
    }

    pub fn build(self) -> Result<Transducer> {
        let TransducerBuilder {
            name,
            mut input,
            mut output,
            states,
            ids,
            duplicate_ids,
            initial,
            final_state,
            mut transitions,
            pending_letters,
            letter_ids: _,
            infer_alphabets,
        } = self;
        if let Some(id) = duplicate_ids.into_iter().next() {
            return Err(Error::DuplicateState(id));
        }
        let initial = initial.ok_or_else(|| Error::Invalid("no initial state".into()))?;
        let final_state = final_state.ok_or_else(|| Error::Invalid("no final state".into()))?;
        for s in [initial, final_state] {
            if s >= states.len() {
                return Err(Error::UnknownState(format!("#{s}")));
            }
        }
        if !states[initial].polarity.is_forward() {
            return Err(Error::Invalid(format!("initial state {} is backward", states[initial].id)));
        }
        if !states[final_state].polarity.is_forward() {
            return Err(Error::Invalid(format!("final state {} is backward", states[final_state].id)));
        }
        if let Some(l) = input.iter().chain(output.iter()).find(|l| l.is_endmarker()) {
            return Err(Error::Invalid(format!("reserved token {:?} in alphabet", l.as_str())));
        }
        for t in &transitions {
            if t.from >= states.len() || t.to >= states.len() {
                return Err(Error::UnknownState(format!("#{}", t.from.max(t.to))));
            }
            let l = &pending_letters[t.letter as usize];
            if !l.is_endmarker() && !input.contains(l) {
                if infer_alphabets {
                    input.insert(l.clone());
                } else {
                    return Err(Error::LetterNotInAlphabet { letter: l.as_str().into(), alphabet: "input" });
                }
            }
            for o in &t.output {
                if !output.contains(o) {
                    if infer_alphabets && !o.is_endmarker() {
                        output.insert(o.clone());
                    } else {
                        return Err(Error::LetterNotInAlphabet {
                            letter: o.as_str().into(),
                            alphabet: "output",
                        });
                    }
                }
            }
        }

        // Final letter numbering: endmarkers, then the sorted input alphabet.
        let mut letters = vec![Letter::begin(), Letter::end()];
        letters.extend(input.iter().cloned());
        let letter_ids: HashMap<Letter, LetterIdx> =
            letters.iter().enumerate().map(|(i, l)| (l.clone(), i as LetterIdx)).collect();
        let remap: Vec<LetterIdx> = pending_letters.iter().map(|l| letter_ids[l]).collect();
        for t in &mut transitions {
            t.letter = remap[t.letter as usize];
        }
        transitions.sort();
        let mut seen = HashSet::new();
        for t in &transitions {
            if !seen.insert((t.from, t.letter, t.to)) {
                return Err(Error::DuplicateTransition(format!(
                    "({}, {}, {})",
                    states[t.from].id, letters[t.letter as usize], states[t.to].id
                )));
            }
        }

        let n = states.len();
        let mut out_start = vec![0usize; n + 1];
        for t in &transitions {
            out_start[t.from + 1] += 1;
        }
        for i in 0..n {
            out_start[i + 1] += out_start[i];
        }
        let mut in_order: Vec<usize> = (0..transitions.len()).collect();
        in_order.sort_by_key(|&i| {
            let t = &transitions[i];
            (t.to, t.letter, t.from)
        });
        let mut in_start = vec![0usize; n + 1];
        for t in &transitions {
            in_start[t.to + 1] += 1;
        }
        for i in 0..n {
            in_start[i + 1] += in_start[i];
        }

        Ok(Transducer {
            name,
            input_alphabet: input.into_iter().collect(),
            output_alphabet: output.into_iter().collect(),
            states,
            ids,
            initial,
            final_state,
            letters,
            letter_ids,
            transitions,
            out_start,
            in_order,
            in_start,
        })
    }
}
