//! Composition of reversible two-way transducers.
//!
//! A state `(q, p)` pairs a state of the first machine with a state of the
//! second. Each step fires one transition of the first machine together with
//! the end-to-end run of the second machine over that transition's output.
//! When `p` is forward the second machine enters the output from the left,
//! so the first machine moves along a transition leaving `q`; when `p` is
//! backward it enters from the right and the first machine rewinds along the
//! unique transition arriving in `q`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::letter::{tuple, Letter, Word};
use crate::machine::{
    check_properties, end_to_end, Exit, Polarity, Side, StateIdx, Transducer, TransducerBuilder, Transition,
};

/// Default cap on constructed state sets, overridable by `REVXDT_MAX_STATES`.
pub const DEFAULT_MAX_STATES: usize = 1_000_000;

pub fn max_states() -> usize {
    std::env::var("REVXDT_MAX_STATES")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_STATES)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RunKind {
    LeftToRight,
    LeftToLeft,
    RightToRight,
    RightToLeft,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndToEndRun {
    pub entry: StateIdx,
    pub exit: StateIdx,
    pub kind: RunKind,
    pub production: Word,
}

fn classify(t: &Transducer, entry: StateIdx, exit: Exit) -> Option<(StateIdx, RunKind)> {
    let Exit::Leaves(side, s) = exit else {
        return None;
    };
    let kind = match (t.is_forward(entry), side) {
        (true, Side::Right) => RunKind::LeftToRight,
        (true, Side::Left) => RunKind::LeftToLeft,
        (false, Side::Right) => RunKind::RightToRight,
        (false, Side::Left) => RunKind::RightToLeft,
    };
    Some((s, kind))
}

/// End-to-end runs of the deterministic transducer `t` over the fragment
/// `v`, one per entry state at most. Entries that block or loop inside `v`
/// have no run.
pub fn end_to_end_runs(t: &Transducer, v: &[Letter]) -> Result<Vec<EndToEndRun>> {
    if let Some(w) = check_properties(t).deterministic_witness {
        return Err(Error::NotDeterministic(w.describe(t)));
    }
    let tape = t.encode(v);
    Ok((0..t.num_states())
        .filter_map(|p| {
            let e = end_to_end(t, &tape, p);
            let (exit, kind) = classify(t, p, e.exit)?;
            Some(EndToEndRun { entry: p, exit, kind, production: e.output })
        })
        .collect())
}

fn check_inputs(t1: &Transducer, t2: &Transducer) -> Result<()> {
    if !check_properties(t1).reversible {
        return Err(Error::NotReversible { which: "first" });
    }
    if !check_properties(t2).reversible {
        return Err(Error::NotReversible { which: "second" });
    }
    let inputs: BTreeSet<&Letter> = t2.input_alphabet().iter().collect();
    if let Some(b) = t1.output_alphabet().iter().find(|b| !inputs.contains(b)) {
        return Err(Error::AlphabetMismatch(format!(
            "output letter {b} of {} is not an input letter of {}",
            t1.name(),
            t2.name()
        )));
    }
    Ok(())
}

/// Simulation of the second machine over the outputs of the first, shared
/// by the eager and the lazy construction.
/// Exit state, kind and output of the second machine's run over one output
/// word of the first, entered in a given state.
type Passage = Option<(StateIdx, RunKind, Word)>;

struct Product<'a> {
    t1: &'a Transducer,
    t2: &'a Transducer,
    cache: HashMap<(usize, StateIdx), Passage>,
}

impl<'a> Product<'a> {
    fn new(t1: &'a Transducer, t2: &'a Transducer) -> Self {
        Product { t1, t2, cache: HashMap::new() }
    }

    /// The output of transition `idx` as seen by the second machine: the
    /// outermost transitions of the first machine also carry the second
    /// machine's endmarkers.
    fn fragment(&self, tr: &Transition) -> Word {
        let t1 = self.t1;
        let letter = t1.letter(tr.letter);
        let mut v = Vec::with_capacity(tr.output.len() + 1);
        if letter.is_begin() && tr.from == t1.initial() {
            v.push(Letter::begin());
        }
        v.extend(tr.output.iter().cloned());
        if letter.is_end() && tr.to == t1.final_state() {
            v.push(Letter::end());
        }
        v
    }

    fn run(&mut self, idx: usize, p: StateIdx) -> Passage {
        if let Some(r) = self.cache.get(&(idx, p)) {
            return r.clone();
        }
        let tr = &self.t1.transitions()[idx];
        let tape = self.t2.encode(&self.fragment(tr));
        let e = end_to_end(self.t2, &tape, p);
        let r = classify(self.t2, p, e.exit).map(|(s, k)| (s, k, e.output));
        self.cache.insert((idx, p), r.clone());
        r
    }

    /// Transitions of the product leaving `(q, p)`, as
    /// `(letter index of t1, target pair, output)`.
    fn successors(&mut self, q: StateIdx, p: StateIdx) -> Vec<(u32, (StateIdx, StateIdx), Word)> {
        let t1 = self.t1;
        let mut out = Vec::new();
        if self.t2.is_forward(p) {
            for idx in t1.out_range_all(q) {
                let tr = &t1.transitions()[idx];
                if let Some((p2, kind, w)) = self.run(idx, p) {
                    let target = match kind {
                        RunKind::LeftToRight => (tr.to, p2),
                        RunKind::LeftToLeft => (q, p2),
                        _ => unreachable!("forward entries leave a fragment left-to-*"),
                    };
                    out.push((tr.letter, target, w));
                }
            }
        } else {
            for idx in t1.incoming_indices(q) {
                let tr = &t1.transitions()[idx];
                if let Some((p2, kind, w)) = self.run(idx, p) {
                    let target = match kind {
                        RunKind::RightToRight => (q, p2),
                        RunKind::RightToLeft => (tr.from, p2),
                        _ => unreachable!("backward entries leave a fragment right-to-*"),
                    };
                    out.push((tr.letter, target, w));
                }
            }
        }
        out
    }

    fn builder(&self) -> TransducerBuilder {
        let mut b = TransducerBuilder::new(format!("{};{}", self.t1.name(), self.t2.name()));
        b.input_letters(self.t1.input_alphabet().iter().cloned());
        b.output_letters(self.t2.output_alphabet().iter().cloned());
        b
    }

    fn declare(&self, b: &mut TransducerBuilder, q: StateIdx, p: StateIdx) -> StateIdx {
        let pol = if self.t1.polarity(q) == self.t2.polarity(p) { Polarity::Forward } else { Polarity::Backward };
        b.state(tuple(&[self.t1.state_id(q), self.t2.state_id(p)]), pol)
    }
}

/// Reversible transducer with `n1 · n2` states realizing `t2 ∘ t1`.
pub fn compose_reversible(t1: &Transducer, t2: &Transducer) -> Result<Transducer> {
    check_inputs(t1, t2)?;
    let (n1, n2) = (t1.num_states(), t2.num_states());
    let limit = max_states();
    if n1.saturating_mul(n2) > limit {
        return Err(Error::StateBudgetExceeded { limit });
    }
    let mut prod = Product::new(t1, t2);
    let mut b = prod.builder();
    for q in 0..n1 {
        for p in 0..n2 {
            prod.declare(&mut b, q, p);
        }
    }
    b.initial(t1.initial() * n2 + t2.initial());
    b.final_state(t1.final_state() * n2 + t2.final_state());
    for q in 0..n1 {
        for p in 0..n2 {
            for (a, (q2, p2), w) in prod.successors(q, p) {
                b.transition(q * n2 + p, t1.letter(a).clone(), q2 * n2 + p2, w);
            }
        }
    }
    b.build()
}

/// The trimmed composition, built lazily from the initial state so that
/// unreachable pairs are never materialized. Equal to
/// `trim(compose_reversible(t1, t2))`.
pub fn compose_trimmed(t1: &Transducer, t2: &Transducer) -> Result<Transducer> {
    compose_trimmed_with_limit(t1, t2, max_states())
}

pub fn compose_trimmed_with_limit(t1: &Transducer, t2: &Transducer, limit: usize) -> Result<Transducer> {
    check_inputs(t1, t2)?;
    let mut prod = Product::new(t1, t2);
    let init = (t1.initial(), t2.initial());
    let fin = (t1.final_state(), t2.final_state());
    let mut seen: HashMap<(StateIdx, StateIdx), usize> = HashMap::from([(init, 0)]);
    let mut nodes = vec![init];
    let mut edges: Vec<Vec<(u32, usize, Word)>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (q, p) = nodes[i];
        let mut out = Vec::new();
        for (a, target, w) in prod.successors(q, p) {
            let j = *seen.entry(target).or_insert_with(|| {
                nodes.push(target);
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            });
            out.push((a, j, w));
        }
        if edges.len() <= i {
            edges.resize_with(i + 1, Vec::new);
        }
        edges[i] = out;
        if nodes.len() > limit {
            return Err(Error::StateBudgetExceeded { limit });
        }
    }
    edges.resize_with(nodes.len(), Vec::new);
    if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(fin) {
        e.insert(nodes.len());
        nodes.push(fin);
        edges.push(Vec::new());
    }

    // Keep the nodes from which the final pair is reachable.
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (i, out) in edges.iter().enumerate() {
        for &(_, j, _) in out {
            rev[j].push(i);
        }
    }
    let mut useful = vec![false; nodes.len()];
    let mut stack = vec![seen[&fin]];
    useful[seen[&fin]] = true;
    while let Some(j) = stack.pop() {
        for &i in &rev[j] {
            if !useful[i] {
                useful[i] = true;
                stack.push(i);
            }
        }
    }
    useful[0] = true;

    let mut order: Vec<usize> = (0..nodes.len()).filter(|&i| useful[i]).collect();
    order.sort_by_key(|&i| nodes[i]);
    let mut b = prod.builder();
    let mut map = vec![usize::MAX; nodes.len()];
    for &i in &order {
        let (q, p) = nodes[i];
        map[i] = prod.declare(&mut b, q, p);
    }
    b.initial(map[0]).final_state(map[seen[&fin]]);
    for &i in &order {
        for (a, j, w) in &edges[i] {
            if useful[*j] {
                b.transition(map[i], t1.letter(*a).clone(), map[*j], w.clone());
            }
        }
    }
    b.build()
}
