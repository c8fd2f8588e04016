//! Seeded generators of small machines for property tests and the
//! acceptance suite.
//!
//! Every generated machine is normalized: state 0 is initial and only reads
//! `⊢`, the last state is final, has no outgoing transitions and is entered
//! only on `⊣`.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::letter::{Letter, Word};
use crate::machine::{Polarity, StateIdx, Transducer, TransducerBuilder};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The first `k` letters of `a, b, c, …`.
pub fn alphabet(k: usize) -> Vec<Letter> {
    (0..k).map(|i| Letter::new(((b'a' + i as u8) as char).to_string())).collect()
}

fn output(rng: &mut impl Rng, alphabet: &[Letter], max: usize) -> Word {
    let len = rng.gen_range(0..=max);
    (0..len).map(|_| alphabet.choose(rng).expect("non-empty alphabet").clone()).collect()
}

/// Which sources and targets a letter may connect in a normalized machine.
fn endpoints(m: usize, a: &Letter) -> (Vec<StateIdx>, Vec<StateIdx>) {
    let interior: Vec<StateIdx> = (1..m - 1).collect();
    if a.is_begin() {
        (vec![0], interior)
    } else if a.is_end() {
        (interior, vec![m - 1])
    } else {
        (interior.clone(), interior)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Shape {
    /// At most one successor per state and letter.
    Deterministic,
    /// At most one predecessor per state and letter.
    Codeterministic,
    /// Co-deterministic, and per letter a single state has two successors.
    WeaklyBranching,
}

fn one_way(rng: &mut impl Rng, m: usize, k: usize, shape: Shape, name: &str) -> Transducer {
    assert!(m >= 3, "need an interior state");
    let sigma = alphabet(k);
    let mut b = TransducerBuilder::new(name);
    b.input_letters(sigma.iter().cloned()).output_letters(sigma.iter().cloned());
    for i in 0..m {
        let id = match i {
            0 => "qI".to_string(),
            i if i == m - 1 => "qF".to_string(),
            i => format!("s{i}"),
        };
        b.state(id, Polarity::Forward);
    }
    b.initial(0).final_state(m - 1);
    let letters: Vec<Letter> = [Letter::begin(), Letter::end()].into_iter().chain(sigma.iter().cloned()).collect();
    for a in &letters {
        let (sources, mut targets) = endpoints(m, a);
        targets.shuffle(rng);
        let mut fanout = vec![0usize; m];
        let mut fanin = vec![0usize; m];
        let brancher = *sources.choose(rng).expect("non-empty");
        for &q in &targets {
            for &p in &sources {
                let cap = match shape {
                    Shape::Deterministic => 1,
                    Shape::Codeterministic => m,
                    Shape::WeaklyBranching => {
                        if p == brancher {
                            2
                        } else {
                            1
                        }
                    }
                };
                let in_cap = if shape == Shape::Deterministic { m } else { 1 };
                if fanout[p] < cap && fanin[q] < in_cap && rng.gen_bool(0.45) {
                    fanout[p] += 1;
                    fanin[q] += 1;
                    b.transition(p, a.clone(), q, output(rng, &sigma, 2));
                }
            }
        }
    }
    b.build().expect("generated machine is well formed")
}

/// Co-deterministic, weakly branching one-way transducer with `m` states
/// over `k` letters.
pub fn codet_weakly_branching_1ft(rng: &mut impl Rng, m: usize, k: usize) -> Transducer {
    one_way(rng, m, k, Shape::WeaklyBranching, "random_cwb")
}

pub fn codet_1ft(rng: &mut impl Rng, m: usize, k: usize) -> Transducer {
    one_way(rng, m, k, Shape::Codeterministic, "random_codet")
}

pub fn det_1ft(rng: &mut impl Rng, m: usize, k: usize) -> Transducer {
    one_way(rng, m, k, Shape::Deterministic, "random_det")
}

fn two_way_states(rng: &mut impl Rng, b: &mut TransducerBuilder, m: usize) {
    for i in 0..m {
        let pol = if i == 0 || i == m - 1 || rng.gen_bool(0.5) { Polarity::Forward } else { Polarity::Backward };
        let id = match i {
            0 => "qI".to_string(),
            i if i == m - 1 => "qF".to_string(),
            i => format!("s{i}"),
        };
        b.state(id, pol);
    }
    b.initial(0).final_state(m - 1);
}

/// Reversible two-way transducer: per letter, a random partial injection.
pub fn reversible_2ft(rng: &mut impl Rng, m: usize, k: usize) -> Transducer {
    assert!(m >= 3, "need an interior state");
    let sigma = alphabet(k);
    let mut b = TransducerBuilder::new("random_rev");
    b.input_letters(sigma.iter().cloned()).output_letters(sigma.iter().cloned());
    two_way_states(rng, &mut b, m);
    let letters: Vec<Letter> = [Letter::begin(), Letter::end()].into_iter().chain(sigma.iter().cloned()).collect();
    let interior: Vec<StateIdx> = (1..m - 1).collect();
    for a in &letters {
        let mut sources = interior.clone();
        let mut targets = interior.clone();
        if a.is_begin() {
            sources.push(0);
        }
        if a.is_end() {
            targets.push(m - 1);
        }
        sources.shuffle(rng);
        targets.shuffle(rng);
        for (&p, &q) in sources.iter().zip(&targets) {
            if rng.gen_bool(0.7) {
                b.transition(p, a.clone(), q, output(rng, &sigma, 2));
            }
        }
    }
    b.build().expect("generated machine is well formed")
}

/// Arbitrary small two-way transducer; each possible transition is present
/// with probability `density`.
pub fn nondeterministic_2ft(rng: &mut impl Rng, m: usize, k: usize, density: f64) -> Transducer {
    assert!(m >= 3, "need an interior state");
    let sigma = alphabet(k);
    let mut b = TransducerBuilder::new("random_2ft");
    b.input_letters(sigma.iter().cloned()).output_letters(sigma.iter().cloned());
    two_way_states(rng, &mut b, m);
    let letters: Vec<Letter> = [Letter::begin(), Letter::end()].into_iter().chain(sigma.iter().cloned()).collect();
    for a in &letters {
        for p in 0..m - 1 {
            if p == 0 && !a.is_begin() {
                continue;
            }
            for q in 1..m {
                if q == m - 1 && !a.is_end() {
                    continue;
                }
                if rng.gen_bool(density) {
                    b.transition(p, a.clone(), q, output(rng, &sigma, 1));
                }
            }
        }
    }
    b.build().expect("generated machine is well formed")
}
