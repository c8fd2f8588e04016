use std::collections::VecDeque;

use serde_json::{json, Value};

use super::{LetterIdx, StateIdx, Transducer, TransducerBuilder};

/// Two transitions that jointly violate a property.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransitionPair {
    pub first: usize,
    pub second: usize,
}

impl TransitionPair {
    pub fn describe(&self, t: &Transducer) -> String {
        let tr = t.transitions();
        format!("{} vs {}", t.describe(&tr[self.first]), t.describe(&tr[self.second]))
    }
}

/// A letter on which the machine is not weakly branching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchingWitness {
    pub letter: LetterIdx,
    /// States with at least two successors on the letter.
    pub branching: Vec<StateIdx>,
}

impl BranchingWitness {
    pub fn describe(&self, t: &Transducer) -> String {
        let states: Vec<_> = self
            .branching
            .iter()
            .map(|&s| format!("{} ({} successors)", t.state_id(s), t.outgoing_on(s, self.letter).len()))
            .collect();
        format!("on {}: {}", t.letter(self.letter), states.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub deterministic: bool,
    pub deterministic_witness: Option<TransitionPair>,
    pub codeterministic: bool,
    pub codeterministic_witness: Option<TransitionPair>,
    pub weakly_branching: bool,
    pub branching_witnesses: Vec<BranchingWitness>,
    pub reversible: bool,
    pub one_way: bool,
}

impl PropertyReport {
    pub fn to_json(&self, t: &Transducer) -> Value {
        json!({
            "codeterministic": self.codeterministic,
            "codeterministic_witness": self.codeterministic_witness.map(|p| p.describe(t)),
            "deterministic": self.deterministic,
            "deterministic_witness": self.deterministic_witness.map(|p| p.describe(t)),
            "one_way": self.one_way,
            "reversible": self.reversible,
            "weakly_branching": self.weakly_branching,
            "weakly_branching_witnesses": self.branching_witnesses.iter().map(|w| w.describe(t)).collect::<Vec<_>>(),
        })
    }
}

/// Exhaustive scan for determinism, co-determinism and weak branching. Weak
/// branching is checked on every letter of the endmarked alphabet.
pub fn check_properties(t: &Transducer) -> PropertyReport {
    let trans = t.transitions();
    // Transitions are sorted by (from, letter, to): adjacent entries sharing
    // (from, letter) witness nondeterminism.
    let deterministic_witness = trans
        .windows(2)
        .position(|w| w[0].from == w[1].from && w[0].letter == w[1].letter)
        .map(|i| TransitionPair { first: i, second: i + 1 });

    let mut codeterministic_witness = None;
    'outer: for q in 0..t.num_states() {
        let ins = &t.in_order[t.in_start[q]..t.in_start[q + 1]];
        for w in ins.windows(2) {
            if trans[w[0]].letter == trans[w[1]].letter {
                codeterministic_witness = Some(TransitionPair { first: w[0], second: w[1] });
                break 'outer;
            }
        }
    }

    let mut branching_witnesses = Vec::new();
    for letter in 0..t.letters().len() as LetterIdx {
        let branching: Vec<StateIdx> =
            (0..t.num_states()).filter(|&s| t.outgoing_on(s, letter).len() >= 2).collect();
        let ok = match branching.as_slice() {
            [] => true,
            [s] => t.outgoing_on(*s, letter).len() == 2,
            _ => false,
        };
        if !ok {
            branching_witnesses.push(BranchingWitness { letter, branching });
        }
    }

    let deterministic = deterministic_witness.is_none();
    let codeterministic = codeterministic_witness.is_none();
    PropertyReport {
        deterministic,
        deterministic_witness,
        codeterministic,
        codeterministic_witness,
        weakly_branching: branching_witnesses.is_empty(),
        branching_witnesses,
        reversible: deterministic && codeterministic,
        one_way: t.is_one_way(),
    }
}

fn reach(n: usize, start: StateIdx, edges: impl Fn(StateIdx) -> Vec<StateIdx>) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for d in edges(s) {
            if !seen[d] {
                seen[d] = true;
                queue.push_back(d);
            }
        }
    }
    seen
}

/// Removes states that lie on no path from the initial to the final state of
/// the transition graph. Head movement is ignored, so this over-approximates
/// the useful configurations; deleting transitions never breaks determinism
/// or co-determinism.
pub fn trim(t: &Transducer) -> Transducer {
    let n = t.num_states();
    let fwd = reach(n, t.initial(), |s| t.outgoing(s).iter().map(|tr| tr.to).collect());
    let bwd = reach(n, t.final_state(), |s| t.incoming(s).map(|tr| tr.from).collect());
    let keep: Vec<bool> = (0..n)
        .map(|s| (fwd[s] && bwd[s]) || s == t.initial() || s == t.final_state())
        .collect();

    let mut b = TransducerBuilder::new(t.name());
    b.input_letters(t.input_alphabet().iter().cloned());
    b.output_letters(t.output_alphabet().iter().cloned());
    let mut map = vec![usize::MAX; n];
    for s in (0..n).filter(|&s| keep[s]) {
        map[s] = b.state(t.state_id(s), t.polarity(s));
    }
    b.initial(map[t.initial()]).final_state(map[t.final_state()]);
    for tr in t.transitions() {
        if keep[tr.from] && keep[tr.to] {
            b.transition(map[tr.from], t.letter(tr.letter).clone(), map[tr.to], tr.output.clone());
        }
    }
    b.build().expect("a sub-machine of a valid transducer is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::machine::Polarity;

    #[test]
    fn figure_fixtures() {
        let a1 = fixtures::a1();
        let r = check_properties(&a1);
        assert!(r.deterministic && !r.codeterministic);
        let w = r.codeterministic_witness.unwrap().describe(&a1);
        assert!(w.contains("b, 0)"), "{w}");

        assert!(check_properties(&fixtures::a2()).reversible);

        let r = check_properties(&fixtures::t1());
        assert!(r.codeterministic && r.weakly_branching && !r.deterministic && r.one_way);
    }

    #[test]
    fn trim_removes_isolated_state() {
        let id = fixtures::id();
        let mut def = id.to_def();
        def.states.push(crate::machine::StateDef { id: "lost".into(), polarity: Polarity::Backward });
        let padded = Transducer::from_def(&def).unwrap();
        assert_eq!(trim(&padded), id);
        assert_eq!(trim(&fixtures::t1()), fixtures::t1());
        assert_eq!(trim(&trim(&padded)), trim(&padded));
    }
}
