use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::letter::{list, tuple, Letter};
use crate::machine::{LetterIdx, Polarity, StateIdx, Transducer, TransducerBuilder, BEGIN_IDX, END_IDX};

/// What a suffix `w` of the endmarked input lets a run entering it from the
/// left do: come back out on the left (`ll`), or reach the final state at
/// the right end (`predfin`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Behavior {
    /// Pairs `(p, q)`, `p` forward and `q` backward, such that a run entering
    /// `w` in `p` leaves it to the left in `q`.
    pub ll: BTreeSet<(StateIdx, StateIdx)>,
    /// Forward states from which a run entering `w` reaches the final state.
    pub predfin: BTreeSet<StateIdx>,
}

impl Behavior {
    /// Behavior of the empty suffix.
    pub fn empty_suffix(t: &Transducer) -> Self {
        Behavior { ll: BTreeSet::new(), predfin: BTreeSet::from([t.final_state()]) }
    }

    /// Canonical text form used in state names and enriched letters.
    pub fn encode(&self, t: &Transducer) -> String {
        let ll: Vec<String> = self.ll.iter().map(|&(p, q)| tuple(&[t.state_id(p), t.state_id(q)])).collect();
        let pf: Vec<&str> = self.predfin.iter().map(|&p| t.state_id(p)).collect();
        tuple(&[list(&ll), list(&pf)])
    }
}

/// For each forward state entering the suffix, the backward states in which
/// it can come back to the boundary after any number of bounces on `a`.
fn closure(t: &Transducer, a: LetterIdx, ll: &BTreeSet<(StateIdx, StateIdx)>) -> Vec<BTreeSet<StateIdx>> {
    let mut exits: Vec<Vec<StateIdx>> = vec![Vec::new(); t.num_states()];
    for &(p, q) in ll {
        exits[p].push(q);
    }
    (0..t.num_states())
        .map(|p0| {
            let mut seen = BTreeSet::new();
            let mut queue: VecDeque<StateIdx> = exits[p0].iter().copied().collect();
            while let Some(q) = queue.pop_front() {
                if !seen.insert(q) {
                    continue;
                }
                for tr in t.outgoing_on(q, a) {
                    if t.is_forward(tr.to) {
                        queue.extend(exits[tr.to].iter().copied());
                    }
                }
            }
            seen
        })
        .collect()
}

/// Behavior of `a·w` from the letter `a` and the behavior of `w`.
pub fn behavior_step(t: &Transducer, a: LetterIdx, b: &Behavior) -> Behavior {
    let cl = closure(t, a, &b.ll);
    let mut next = Behavior::default();
    for p in (0..t.num_states()).filter(|&p| t.is_forward(p)) {
        for tr in t.outgoing_on(p, a) {
            if !t.is_forward(tr.to) {
                next.ll.insert((p, tr.to));
                continue;
            }
            if b.predfin.contains(&tr.to) {
                next.predfin.insert(p);
            }
            for &q in &cl[tr.to] {
                for back in t.outgoing_on(q, a) {
                    if !t.is_forward(back.to) {
                        next.ll.insert((p, back.to));
                    } else if b.predfin.contains(&back.to) {
                        next.predfin.insert(p);
                    }
                }
            }
        }
    }
    next
}

/// An output letter of the right oracle: an input letter together with the
/// behavior of the suffix following it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnrichedLetter {
    pub letter: Letter,
    /// Index of the base letter in the original transducer.
    pub base: LetterIdx,
    pub behavior: Behavior,
}

pub struct RightOracle {
    pub machine: Transducer,
    pub letters: Vec<EnrichedLetter>,
}

const INIT: &str = "init";

/// Co-deterministic one-way transducer that labels every letter of `⊢u⊣`
/// with the behavior of the suffix after it. Only behaviors of actual
/// suffixes are built, and `⊢` is only read when the whole input is
/// accepted.
pub fn build_right_oracle(t: &Transducer) -> RightOracle {
    let base_letters: Vec<LetterIdx> = (2..t.letters().len() as LetterIdx).collect();
    let final_beh = Behavior::empty_suffix(t);
    let end_beh = behavior_step(t, END_IDX, &final_beh);

    // Behaviors of the suffixes x⊣ for every word x, and the A-steps between them.
    let mut ids: BTreeMap<Behavior, usize> = BTreeMap::new();
    let mut behs = vec![end_beh.clone()];
    ids.insert(end_beh, 0);
    let mut steps = Vec::new();
    let mut i = 0;
    while i < behs.len() {
        for &a in &base_letters {
            let prev = behavior_step(t, a, &behs[i]);
            let j = *ids.entry(prev.clone()).or_insert_with(|| {
                behs.push(prev);
                behs.len() - 1
            });
            steps.push((j, a, i));
        }
        i += 1;
    }

    let mut b = TransducerBuilder::new(format!("right_oracle({})", t.name()));
    b.input_letters(t.input_alphabet().iter().cloned());
    let init = b.state(INIT, Polarity::Forward);
    let fin = b.state(final_beh.encode(t), Polarity::Forward);
    let states: Vec<StateIdx> = behs
        .iter()
        .map(|beh| if *beh == final_beh { fin } else { b.state(beh.encode(t), Polarity::Forward) })
        .collect();
    b.initial(init).final_state(fin);

    let mut letters: Vec<EnrichedLetter> = Vec::new();
    let mut letter_ids: HashMap<(LetterIdx, usize), usize> = HashMap::new();
    let mut enrich = |base: LetterIdx, suffix: Option<usize>| -> Letter {
        let key = (base, suffix.map_or(usize::MAX, |s| s));
        let k = *letter_ids.entry(key).or_insert_with(|| {
            let behavior = suffix.map_or_else(|| final_beh.clone(), |s| behs[s].clone());
            let letter = Letter::tuple(&[t.letter(base).as_str(), &behavior.encode(t)]);
            letters.push(EnrichedLetter { letter, base, behavior });
            letters.len() - 1
        });
        letters[k].letter.clone()
    };

    let mut transitions = Vec::new();
    for &(j, a, i) in &steps {
        transitions.push((states[j], t.letter(a).clone(), states[i], enrich(a, Some(i))));
    }
    transitions.push((states[0], Letter::end(), fin, enrich(END_IDX, None)));
    for (i, beh) in behs.iter().enumerate() {
        if behavior_step(t, BEGIN_IDX, beh).predfin.contains(&t.initial()) {
            transitions.push((init, Letter::begin(), states[i], enrich(BEGIN_IDX, Some(i))));
        }
    }
    for (from, a, to, out) in transitions {
        b.output_letters([out.clone()]);
        b.transition(from, a, to, vec![out]);
    }
    let machine = b.build().expect("right oracle is well formed");
    RightOracle { machine, letters }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::machine::check_properties;

    #[test]
    fn one_way_degenerates() {
        let t = fixtures::t1();
        let a = t.letter_index(&Letter::new("a")).unwrap();
        let b = Behavior { ll: BTreeSet::new(), predfin: BTreeSet::from([t.state_index("1").unwrap()]) };
        let next = behavior_step(&t, a, &b);
        assert!(next.ll.is_empty());
        assert_eq!(next.predfin, BTreeSet::from([t.state_index("1").unwrap()]));
    }

    #[test]
    fn end_step_on_a2() {
        let t = fixtures::a2();
        let beh = behavior_step(&t, END_IDX, &Behavior::empty_suffix(&t));
        assert_eq!(beh.predfin, BTreeSet::from([t.state_index("s2").unwrap()]));
    }

    #[test]
    fn oracle_is_codeterministic() {
        for (_, t) in fixtures::all() {
            let d = build_right_oracle(&t).machine;
            assert!(check_properties(&d).codeterministic, "{}", t.name());
            let bits = t.num_states().pow(2) + t.num_states();
            assert!(bits >= 63 || d.num_states() <= (1usize << bits) + 1);
        }
    }
}
