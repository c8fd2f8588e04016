use std::collections::{BTreeMap, HashMap, VecDeque};

use super::behavior::{Behavior, RightOracle};
use crate::letter::{list, tuple, Letter};
use crate::machine::{LetterIdx, StateIdx, Transducer, TransducerBuilder};

/// Transitions of the original machine reading one letter, in the order the
/// chosen run takes them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SliceLetter {
    pub transitions: Vec<usize>,
}

impl SliceLetter {
    pub fn encode(&self, t: &Transducer) -> Letter {
        let parts: Vec<String> = self
            .transitions
            .iter()
            .map(|&i| {
                let tr = &t.transitions()[i];
                tuple(&[t.state_id(tr.from), t.letter(tr.letter).as_str(), t.state_id(tr.to)])
            })
            .collect();
        Letter::new(list(&parts))
    }
}

/// Position of the interleaving walk: the next unread element of each slice.
#[derive(Clone, Copy)]
enum Side {
    Prev,
    Next,
}

struct Stitch<'a> {
    t: &'a Transducer,
    a: LetterIdx,
    prev: &'a [StateIdx],
    next: &'a [StateIdx],
    used: Vec<usize>,
}

impl Stitch<'_> {
    /// The element `(side, index)` has just been visited; `i` and `j` count
    /// the elements of `prev` and `next` visited so far.
    fn walk(&mut self, side: Side, i: usize, j: usize) -> bool {
        let (prev, next, t) = (self.prev, self.next, self.t);
        let done = i == prev.len() && j == next.len();
        match side {
            Side::Prev => {
                let p = prev[i - 1];
                if !t.is_forward(p) {
                    // Leaves to the left and comes back forward on this boundary.
                    return !done && i < prev.len() && t.is_forward(prev[i]) && self.walk(Side::Prev, i + 1, j);
                }
                self.cross(p, i, j)
            }
            Side::Next => {
                let p = next[j - 1];
                if t.is_forward(p) {
                    // Leaves to the right: comes back backward on this
                    // boundary, or the run ends here.
                    if done {
                        return true;
                    }
                    return j < next.len() && !t.is_forward(next[j]) && self.walk(Side::Next, i, j + 1);
                }
                self.cross(p, i, j)
            }
        }
    }

    /// `p` reads the letter; its target is the next element of `next` when
    /// forward and of `prev` when backward.
    fn cross(&mut self, p: StateIdx, i: usize, j: usize) -> bool {
        let range = self.t.out_range(p, self.a);
        for idx in range {
            let to = self.t.transitions()[idx].to;
            let (side, ok) = if self.t.is_forward(to) {
                (Side::Next, j < self.next.len() && self.next[j] == to)
            } else {
                (Side::Prev, i < self.prev.len() && self.prev[i] == to)
            };
            if !ok {
                continue;
            }
            self.used.push(idx);
            let (i2, j2) = match side {
                Side::Prev => (i + 1, j),
                Side::Next => (i, j + 1),
            };
            if self.walk(side, i2, j2) {
                return true;
            }
            self.used.pop();
        }
        false
    }
}

/// Interleaves `prev` (the slice before letter `a`) with `next` (the slice
/// after it) into one temporal order, returning the transitions reading `a`
/// in the order they are taken, or `None` if the slices cannot be stitched.
pub fn stitch(t: &Transducer, a: LetterIdx, prev: &[StateIdx], next: &[StateIdx]) -> Option<Vec<usize>> {
    if prev.is_empty() || next.is_empty() {
        return None;
    }
    let mut s = Stitch { t, a, prev, next, used: Vec::new() };
    s.walk(Side::Prev, 1, 0).then_some(s.used)
}

/// Whether `next` can be completed to an accepting run on a suffix with
/// behavior `beh`: each forward element but the last comes back as the
/// following backward element, and the last element reaches the final state.
pub fn is_valid(t: &Transducer, next: &[StateIdx], beh: &Behavior) -> bool {
    let Some(&last) = next.last() else {
        return false;
    };
    if !beh.predfin.contains(&last) {
        return false;
    }
    next.windows(2).all(|w| !t.is_forward(w[0]) || beh.ll.contains(&(w[0], w[1])))
}

/// Repeat-free state sequences of length at most `n`, shortest first and
/// lexicographic within a length.
fn candidates(n: usize) -> Vec<Vec<StateIdx>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<StateIdx>> = vec![Vec::new()];
    for _ in 0..n {
        let mut grown = Vec::new();
        for s in &layer {
            for q in 0..n {
                if !s.contains(&q) {
                    let mut v = s.clone();
                    v.push(q);
                    grown.push(v);
                }
            }
        }
        out.extend(grown.iter().cloned());
        layer = grown;
    }
    out
}

/// Least slice after letter `a` that stitches with `prev` and is valid for
/// the suffix behavior, together with the transitions reading `a`.
pub fn slice_update(
    t: &Transducer,
    prev: &[StateIdx],
    a: LetterIdx,
    beh: &Behavior,
) -> Option<(Vec<StateIdx>, Vec<usize>)> {
    slice_update_among(t, &candidates(t.num_states()), prev, a, beh)
}

fn slice_update_among(
    t: &Transducer,
    cands: &[Vec<StateIdx>],
    prev: &[StateIdx],
    a: LetterIdx,
    beh: &Behavior,
) -> Option<(Vec<StateIdx>, Vec<usize>)> {
    cands
        .iter()
        .filter(|c| is_valid(t, c, beh))
        .find_map(|c| stitch(t, a, prev, c).map(|used| (c.clone(), used)))
}

/// Sequence of minimal-run slices of `t` on `⊢u⊣` as computed by repeated
/// [`slice_update`] along the suffix behaviors, or `None` if some step has no
/// valid slice.
pub fn slice_sequence(t: &Transducer, u: &[Letter]) -> Option<Vec<Vec<StateIdx>>> {
    let tape = t.tape(u).ok()?;
    let mut behs = vec![Behavior::empty_suffix(t)];
    for &a in tape.letters.iter().rev() {
        let b = super::behavior::behavior_step(t, a, behs.last().expect("non-empty"));
        behs.push(b);
    }
    behs.reverse();
    let cands = candidates(t.num_states());
    let mut slices = vec![vec![t.initial()]];
    for (k, &a) in tape.letters.iter().enumerate() {
        let (next, _) = slice_update_among(t, &cands, slices.last().expect("non-empty"), a, &behs[k + 1])?;
        slices.push(next);
    }
    Some(slices)
}

pub struct Uniformizer {
    pub machine: Transducer,
    pub slice_letters: Vec<SliceLetter>,
}

fn slice_id(t: &Transducer, s: &[StateIdx]) -> String {
    let ids: Vec<&str> = s.iter().map(|&q| t.state_id(q)).collect();
    list(&ids)
}

/// Deterministic one-way transducer reading the right oracle's output and
/// emitting, for each letter, the transitions of the least accepting run
/// that read it. States are slices; only slices reachable from `[q_I]` are
/// built.
pub fn build_uniformizer(t: &Transducer, oracle: &RightOracle) -> Uniformizer {
    let cands = candidates(t.num_states());
    let mut b = TransducerBuilder::new(format!("uniformizer({})", t.name()));
    b.input_letters(oracle.letters.iter().map(|l| l.letter.clone()));
    let edge = b.state(slice_id(t, &[]), crate::machine::Polarity::Forward);
    b.initial(edge).final_state(edge);

    let start = vec![t.initial()];
    let mut ids: HashMap<Vec<StateIdx>, StateIdx> = HashMap::new();
    let first = b.state(slice_id(t, &start), crate::machine::Polarity::Forward);
    ids.insert(start.clone(), first);
    b.transition(edge, Letter::begin(), first, vec![]);

    let mut letter_ids: BTreeMap<Vec<usize>, Letter> = BTreeMap::new();
    let mut slice_letters = Vec::new();
    let mut queue = VecDeque::from([start]);
    while let Some(prev) = queue.pop_front() {
        let from = ids[&prev];
        if prev == [t.final_state()] {
            b.transition(from, Letter::end(), edge, vec![]);
        }
        for el in &oracle.letters {
            let Some((next, used)) = slice_update_among(t, &cands, &prev, el.base, &el.behavior) else {
                continue;
            };
            let out = letter_ids
                .entry(used.clone())
                .or_insert_with(|| {
                    let sl = SliceLetter { transitions: used };
                    let l = sl.encode(t);
                    slice_letters.push(sl);
                    l
                })
                .clone();
            let to = match ids.get(&next) {
                Some(&s) => s,
                None => {
                    let s = b.state(slice_id(t, &next), crate::machine::Polarity::Forward);
                    ids.insert(next.clone(), s);
                    queue.push_back(next);
                    s
                }
            };
            b.output_letters([out.clone()]);
            b.transition(from, el.letter.clone(), to, vec![out]);
        }
    }
    Uniformizer { machine: b.build().expect("uniformizer is well formed"), slice_letters }
}

/// Two-way transducer with the states of `t` that replays, over the slice
/// letters, the run they describe.
pub fn build_follower(t: &Transducer, slice_letters: &[SliceLetter]) -> Transducer {
    let mut b = TransducerBuilder::new(format!("follower({})", t.name()));
    b.output_letters(t.output_alphabet().iter().cloned());
    for s in t.states() {
        b.state(s.id.clone(), s.polarity);
    }
    b.initial(t.initial()).final_state(t.final_state());
    b.transition(t.initial(), Letter::begin(), t.initial(), vec![]);
    b.transition(t.final_state(), Letter::end(), t.final_state(), vec![]);
    for sl in slice_letters {
        let l = sl.encode(t);
        b.input_letters([l.clone()]);
        for &i in &sl.transitions {
            let tr = &t.transitions()[i];
            b.transition(tr.from, l.clone(), tr.to, tr.output.clone());
        }
    }
    b.build().expect("follower is well formed")
}
