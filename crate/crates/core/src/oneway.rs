//! Reversibilization of one-way transducers by composing the tree outline
//! with small reversible helper machines.

use crate::compose::compose_reversible;
use crate::error::{Error, Result};
use crate::letter::{tuple, Letter};
use crate::machine::{check_properties, Polarity, Transducer, TransducerBuilder};
use crate::tree_outline::tree_outline;

/// Name of the reset letter closing each block of [`build_mult`].
pub const RESET: &str = "r";

/// Letter `(a, q)` of the multiplied alphabet.
pub fn enriched(a: &Letter, state_id: &str) -> Letter {
    Letter::tuple(&[a.as_str(), state_id])
}

fn require_one_way(t: &Transducer) -> Result<()> {
    if t.is_one_way() {
        Ok(())
    } else {
        Err(Error::NotOneWay)
    }
}

/// Single-state machine replacing each letter `a` of `⊢u⊣` by the block
/// `(a,q1)…(a,qn) r`, states in declaration order.
pub fn build_mult(t: &Transducer) -> Transducer {
    let mut b = TransducerBuilder::new(format!("mult({})", t.name()));
    b.input_letters(t.input_alphabet().iter().cloned());
    let id = b.state("id", Polarity::Forward);
    b.initial(id).final_state(id);
    for a in t.letters() {
        let mut block: Vec<Letter> = t.states().iter().map(|s| enriched(a, &s.id)).collect();
        block.push(Letter::new(RESET));
        b.output_letters(block.iter().cloned());
        b.transition(id, a.clone(), id, block);
    }
    b.build().expect("mult is well formed")
}

/// Co-deterministic, weakly branching machine that reads the output of
/// [`build_mult`] and fires each transition of `t` on the copy of its letter
/// tagged with the target state. A flag records whether the transition of
/// the current block has been taken; the reset letter clears it.
pub fn build_desync(t: &Transducer) -> Result<Transducer> {
    require_one_way(t)?;
    if let Some(w) = check_properties(t).codeterministic_witness {
        return Err(Error::NotCodeterministic(w.describe(t)));
    }
    let n = t.num_states();
    let mut b = TransducerBuilder::new(format!("desync({})", t.name()));
    b.output_letters(t.output_alphabet().iter().cloned());
    let reset = Letter::new(RESET);
    let mut inputs = vec![reset.clone()];
    for a in t.letters() {
        inputs.extend(t.states().iter().map(|s| enriched(a, &s.id)));
    }
    b.input_letters(inputs);

    // State (p, f) has index 2p + f.
    for s in t.states() {
        b.state(tuple(&[s.id.as_str(), "0"]), Polarity::Forward);
        b.state(tuple(&[s.id.as_str(), "1"]), Polarity::Forward);
    }
    let (init, fin) = (2 * t.initial(), 2 * t.final_state());
    b.initial(init).final_state(fin);
    // The multiplied word is itself endmarked.
    b.transition(init, Letter::begin(), init, vec![]);
    b.transition(fin, Letter::end(), fin, vec![]);

    for a in t.letters() {
        for q in 0..n {
            let l = enriched(a, t.state_id(q));
            for p in 0..n {
                b.transition(2 * p, l.clone(), 2 * p, vec![]);
                if p != q {
                    b.transition(2 * p + 1, l.clone(), 2 * p + 1, vec![]);
                }
            }
        }
    }
    for tr in t.transitions() {
        let l = enriched(t.letter(tr.letter), t.state_id(tr.to));
        b.transition(2 * tr.from, l, 2 * tr.to + 1, tr.output.clone());
    }
    for p in 0..n {
        b.transition(2 * p + 1, reset.clone(), 2 * p, vec![]);
    }
    b.build()
}

/// Reversible two-way transducer equivalent to the co-deterministic one-way
/// transducer `t`, with `4(2n)² − 2(2n)` states.
pub fn codet1ft_to_reversible(t: &Transducer) -> Result<Transducer> {
    let desync = build_desync(t)?;
    let outline = tree_outline(&desync)?;
    Ok(compose_reversible(&build_mult(t), &outline)?.with_name(format!("codet_rev({})", t.name())))
}

fn swap_endmarker(l: &Letter) -> Letter {
    if l.is_begin() {
        Letter::end()
    } else if l.is_end() {
        Letter::begin()
    } else {
        l.clone()
    }
}

/// Reverses every transition, swaps initial and final states and the two
/// endmarkers, and reverses each output.
pub fn reverse_1ft(t: &Transducer) -> Result<Transducer> {
    require_one_way(t)?;
    let mut b = TransducerBuilder::new(format!("reverse({})", t.name()));
    b.input_letters(t.input_alphabet().iter().cloned());
    b.output_letters(t.output_alphabet().iter().cloned());
    for s in t.states() {
        b.state(s.id.clone(), s.polarity);
    }
    b.initial(t.final_state()).final_state(t.initial());
    for tr in t.transitions() {
        let out = tr.output.iter().rev().cloned().collect();
        b.transition(tr.to, swap_endmarker(t.letter(tr.letter)), tr.from, out);
    }
    b.build()
}

/// Three-state reversible transducer mapping `u` to its reversal: a
/// forward sweep to `⊣`, a backward sweep copying letters, and a forward
/// sweep back to `⊣`.
pub fn build_mirror(alphabet: &[Letter]) -> Transducer {
    let mut b = TransducerBuilder::new("mirror");
    b.input_letters(alphabet.iter().cloned());
    b.output_letters(alphabet.iter().cloned());
    let i = b.state("i", Polarity::Forward);
    let r = b.state("r", Polarity::Backward);
    let f = b.state("f", Polarity::Forward);
    b.initial(i).final_state(f);
    b.transition(i, Letter::begin(), i, vec![]);
    b.transition(i, Letter::end(), r, vec![]);
    b.transition(r, Letter::begin(), f, vec![]);
    b.transition(f, Letter::end(), f, vec![]);
    for a in alphabet {
        b.transition(i, a.clone(), i, vec![]);
        b.transition(r, a.clone(), r, vec![a.clone()]);
        b.transition(f, a.clone(), f, vec![]);
    }
    b.build().expect("mirror is well formed")
}

/// Reversible two-way transducer equivalent to the deterministic one-way
/// transducer `t`: mirror the input, run the reversed machine, mirror the
/// output. Has nine times the states of the co-deterministic pipeline.
pub fn det1ft_to_reversible(t: &Transducer) -> Result<Transducer> {
    require_one_way(t)?;
    if let Some(w) = check_properties(t).deterministic_witness {
        return Err(Error::NotDeterministic(w.describe(t)));
    }
    let rev = codet1ft_to_reversible(&reverse_1ft(t)?)?;
    let inner = compose_reversible(&rev, &build_mirror(t.output_alphabet()))?;
    Ok(compose_reversible(&build_mirror(t.input_alphabet()), &inner)?.with_name(format!("det_rev({})", t.name())))
}

/// Raw state count of [`codet1ft_to_reversible`] for `n` states.
pub fn codet_state_count(n: usize) -> usize {
    let m = 2 * n;
    4 * m * m - 2 * m
}

/// Raw state count of [`det1ft_to_reversible`] for `n` states.
pub fn det_state_count(n: usize) -> usize {
    9 * codet_state_count(n)
}

/// Picks the co-deterministic pipeline when it applies, the deterministic
/// one otherwise.
pub fn reversibilize(t: &Transducer) -> Result<Transducer> {
    require_one_way(t)?;
    let r = check_properties(t);
    if r.codeterministic {
        codet1ft_to_reversible(t)
    } else if r.deterministic {
        det1ft_to_reversible(t)
    } else {
        Err(Error::Precondition("one-way transducer is neither deterministic nor co-deterministic".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::letter::{render, word};
    use crate::oracle::{check_equiv, outputs, words};

    #[test]
    fn mult_blocks() {
        let t = fixtures::t1();
        let m = build_mult(&t);
        assert!(check_properties(&m).reversible);
        let out = outputs(&m, &word("b")).unwrap().into_iter().next().unwrap();
        assert_eq!(out.len(), 3 * (t.num_states() + 1));
        assert_eq!(out[0], Letter::new("(__begin__,0)"));
        assert_eq!(out[5], Letter::new(RESET));
        let empty = outputs(&m, &[]).unwrap().into_iter().next().unwrap();
        assert_eq!(empty.len(), 2 * (t.num_states() + 1));
    }

    #[test]
    fn desync_shape() {
        let t = fixtures::t1();
        let d = build_desync(&t).unwrap();
        assert_eq!(d.num_states(), 10);
        let r = check_properties(&d);
        assert!(r.codeterministic && r.weakly_branching);
        assert!(matches!(build_desync(&fixtures::a1()), Err(Error::NotCodeterministic(_))));
    }

    #[test]
    fn mirror_reverses() {
        let m = fixtures::mirror_ab();
        assert_eq!(m.num_states(), 3);
        assert!(check_properties(&m).reversible);
        for u in words(m.input_alphabet(), 4) {
            let rev: Vec<_> = u.iter().rev().cloned().collect();
            assert_eq!(outputs(&m, &u).unwrap().into_iter().collect::<Vec<_>>(), vec![rev]);
        }
    }

    #[test]
    fn reverse_is_involution() {
        let a1 = fixtures::a1();
        let r = reverse_1ft(&a1).unwrap();
        assert!(check_properties(&r).codeterministic);
        assert_eq!(reverse_1ft(&r).unwrap().with_name("a1"), a1);
    }

    #[test]
    fn codet_pipeline_on_t1() {
        let t = fixtures::t1();
        let r = codet1ft_to_reversible(&t).unwrap();
        assert_eq!(r.num_states(), codet_state_count(5));
        assert!(check_properties(&r).reversible);
        assert!(check_equiv(&t, &r, 4).unwrap().is_equal());
        assert!(outputs(&r, &[]).unwrap().is_empty());
        let ab = outputs(&r, &word("ab")).unwrap();
        assert_eq!(ab.iter().map(|w| render(w)).collect::<Vec<_>>(), ["1 1 0 qF"]);
    }
}
