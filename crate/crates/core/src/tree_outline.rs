//! Reversibilization of co-deterministic, weakly branching one-way
//! transducers by a depth-first walk around the run-tree.
//!
//! The constructed machine keeps two states of the original machine, each
//! marked as lying above (live) or below (dead) the branch it follows. At a
//! branching it first explores the branch that dies earliest, comes back to
//! the branching position and switches to the next branch. Because the
//! original machine is co-deterministic, every step can be undone, which
//! makes the walk reversible.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::letter::{tuple, Word};
use crate::machine::{check_properties, LetterIdx, Polarity, StateIdx, Transducer, TransducerBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Marker {
    /// Above the followed branch; the live component.
    Up,
    /// Below the followed branch; the dead component.
    Down,
}

impl Marker {
    fn prefix(self) -> char {
        match self {
            Marker::Up => '^',
            Marker::Down => '_',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedPair {
    pub upper: (StateIdx, Marker),
    pub lower: (StateIdx, Marker),
}

impl MarkedPair {
    pub fn new(p: StateIdx, mp: Marker, q: StateIdx, mq: Marker) -> Self {
        MarkedPair { upper: (p, mp), lower: (q, mq) }
    }

    /// Mixed markers move forward, equal markers backward. Pairs repeating
    /// the same marked state are not states at all.
    pub fn polarity(&self) -> Option<Polarity> {
        if self.upper.1 != self.lower.1 {
            Some(Polarity::Forward)
        } else if self.upper.0 != self.lower.0 {
            Some(Polarity::Backward)
        } else {
            None
        }
    }

    pub fn id(&self, t: &Transducer) -> String {
        let part = |(s, m): (StateIdx, Marker)| format!("{}{}", m.prefix(), t.state_id(s));
        tuple(&[part(self.upper), part(self.lower)])
    }
}

/// Rule family that generated a transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Fua,
    Fuw,
    Flw,
    Fla,
    Buw,
    Bua,
    Bla,
    Blw,
    Fualw,
    Fuwla,
    Bulw,
    Bula,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format!("{self:?}").to_lowercase())
    }
}

pub struct TreeOutline {
    pub machine: Transducer,
    /// Rule of each transition of `machine`, aligned with its transitions.
    pub rules: Vec<Rule>,
    index: HashMap<MarkedPair, StateIdx>,
}

impl TreeOutline {
    pub fn state(&self, pair: MarkedPair) -> Option<StateIdx> {
        self.index.get(&pair).copied()
    }
}

/// Checks the preconditions of [`tree_outline`].
pub fn check_preconditions(t: &Transducer) -> Result<()> {
    let r = check_properties(t);
    if !r.one_way {
        return Err(Error::Precondition("transducer is not one-way".into()));
    }
    if let Some(w) = r.codeterministic_witness {
        return Err(Error::Precondition(format!("not co-deterministic: {}", w.describe(t))));
    }
    if let Some(w) = r.branching_witnesses.first() {
        return Err(Error::Precondition(format!("not weakly branching {}", w.describe(t))));
    }
    Ok(())
}

/// Builds the reversible two-way transducer following the run-tree of `t`.
/// The result has `4m² − 2m` states for `m` states of `t`.
pub fn tree_outline(t: &Transducer) -> Result<Transducer> {
    Ok(tree_outline_tagged(t)?.machine)
}

pub fn tree_outline_tagged(t: &Transducer) -> Result<TreeOutline> {
    use Marker::{Down, Up};
    check_preconditions(t)?;
    let m = t.num_states();
    let mut b = TransducerBuilder::new(format!("tree_outline({})", t.name()));
    b.input_letters(t.input_alphabet().iter().cloned());
    b.output_letters(t.output_alphabet().iter().cloned());

    let mut index = HashMap::new();
    for p in 0..m {
        for q in 0..m {
            for (mp, mq) in [(Up, Down), (Down, Up), (Down, Down), (Up, Up)] {
                let pair = MarkedPair::new(p, mp, q, mq);
                if let Some(pol) = pair.polarity() {
                    index.insert(pair, b.state(pair.id(t), pol));
                }
            }
        }
    }
    let pair = |p, mp, q, mq| MarkedPair::new(p, mp, q, mq);
    b.initial(index[&pair(t.initial(), Up, t.initial(), Down)]);
    b.final_state(index[&pair(t.final_state(), Up, t.final_state(), Down)]);

    // (source, letter, target) -> (output, rule); identical triples from two
    // rule families are emitted once.
    let mut emitted: HashMap<(StateIdx, LetterIdx, StateIdx), (Word, Rule)> = HashMap::new();
    let mut order = Vec::new();
    let mut emit = |from: MarkedPair, a: LetterIdx, to: MarkedPair, out: Word, rule: Rule| {
        let (Some(&f), Some(&g)) = (index.get(&from), index.get(&to)) else {
            return;
        };
        emitted.entry((f, a, g)).or_insert_with(|| {
            order.push((f, a, g));
            (out, rule)
        });
    };

    for a in 0..t.letters().len() as LetterIdx {
        // ≺-extremal a-successors and the output of the transition reaching them.
        let succ: Vec<Option<(StateIdx, StateIdx)>> = (0..m)
            .map(|p| {
                let out = t.outgoing_on(p, a);
                Some((out.first()?.to, out.last()?.to))
            })
            .collect();
        let mu = |p: StateIdx, q: StateIdx| -> Word {
            t.outgoing_on(p, a).iter().find(|tr| tr.to == q).map(|tr| tr.output.clone()).unwrap_or_default()
        };
        for p in 0..m {
            for q in 0..m {
                match (succ[p], succ[q]) {
                    (None, _) => {
                        emit(pair(p, Up, q, Down), a, pair(p, Down, q, Down), vec![], Rule::Fua);
                        emit(pair(p, Down, q, Up), a, pair(p, Up, q, Up), vec![], Rule::Fuw);
                    }
                    (Some(_), None) => {
                        emit(pair(p, Up, q, Down), a, pair(p, Up, q, Up), vec![], Rule::Flw);
                        emit(pair(p, Down, q, Up), a, pair(p, Down, q, Down), vec![], Rule::Fla);
                    }
                    (Some((p_min, p_max)), Some((q_min, q_max))) => {
                        let out = if p == q && p_min == p_max { mu(p, p_min) } else { vec![] };
                        emit(pair(p, Up, q, Down), a, pair(p_max, Up, q_min, Down), out, Rule::Fualw);
                        emit(pair(p, Down, q, Up), a, pair(p_min, Down, q_max, Up), vec![], Rule::Fuwla);
                        emit(pair(p_min, Down, q_min, Down), a, pair(p, Down, q, Down), vec![], Rule::Bulw);
                        emit(pair(p_max, Up, q_max, Up), a, pair(p, Up, q, Up), vec![], Rule::Bula);
                    }
                }
                // Switching branches depends only on the branching component;
                // the other component is carried along whether or not it has
                // an a-successor.
                if let Some((p_min, p_max)) = succ[p].filter(|(lo, hi)| lo != hi) {
                    let out = if q == p_min { mu(p, p_min) } else { vec![] };
                    emit(pair(p_max, Down, q, Down), a, pair(p_min, Up, q, Down), out, Rule::Buw);
                    emit(pair(p_min, Up, q, Up), a, pair(p_max, Down, q, Up), vec![], Rule::Bua);
                }
                if let Some((q_min, q_max)) = succ[q].filter(|(lo, hi)| lo != hi) {
                    let out = if p == q_max { mu(q, q_max) } else { vec![] };
                    emit(pair(p, Up, q_min, Up), a, pair(p, Up, q_max, Down), out, Rule::Bla);
                    emit(pair(p, Down, q_max, Down), a, pair(p, Down, q_min, Up), vec![], Rule::Blw);
                }
            }
        }
    }

    let letters = t.letters().to_vec();
    for key in &order {
        let (f, a, g) = *key;
        b.transition(f, letters[a as usize].clone(), g, emitted[key].0.clone());
    }
    let machine = b.build()?;
    let rules = machine
        .transitions()
        .iter()
        .map(|tr| {
            let a = t.letter_index(machine.letter(tr.letter)).expect("same alphabet");
            emitted[&(tr.from, a, tr.to)].1
        })
        .collect();
    Ok(TreeOutline { machine, rules, index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::letter::word;
    use crate::machine::run_deterministic;
    use crate::machine::Outcome;
    use crate::oracle;

    #[test]
    fn t1_outline() {
        let t = fixtures::t1();
        let to = tree_outline_tagged(&t).unwrap();
        assert_eq!(to.machine.num_states(), 4 * 25 - 10);
        assert!(check_properties(&to.machine).reversible);
        let expected = oracle::outputs(&t, &word("ab")).unwrap();
        match run_deterministic(&to.machine, &word("ab")).unwrap() {
            Outcome::Accepted { output, .. } => assert_eq!(Some(&output), expected.iter().next()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_non_codeterministic() {
        assert!(matches!(tree_outline(&fixtures::a1()), Err(Error::Precondition(_))));
        assert!(matches!(tree_outline(&fixtures::a2()), Err(Error::Precondition(_))));
    }

    #[test]
    fn chain_machine_never_turns() {
        let t = fixtures::id();
        let to = tree_outline_tagged(&t).unwrap();
        let Outcome::Accepted { run, .. } = run_deterministic(&to.machine, &word("abba")).unwrap() else {
            panic!("identity accepts everything");
        };
        assert!(run.steps.iter().all(|s| to.rules[s.transition] == Rule::Fualw));
    }
}
