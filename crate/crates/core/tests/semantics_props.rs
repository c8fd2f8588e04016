//! Invariants of configurations, runs, trimming and the brute-force oracle.

mod common;

use proptest::prelude::*;
use revxdt::letter::{Letter, Word};
use revxdt::machine::{check_properties, predecessors, successors, trim, wrap_input, Configuration, Transducer};
use revxdt::oracle::{check_equiv, enumerate_accepting_runs, minimal_run, relation, slices};
use revxdt::random;
use revxdt::format::serialize_transducer;

fn configurations(t: &Transducer, len: usize) -> impl Iterator<Item = Configuration> + '_ {
    (0..t.num_states()).flat_map(move |q| (0..=len).map(move |i| Configuration::new(q, i)))
}

fn nondeterministic(seed: u64) -> Transducer {
    let mut rng = random::rng(seed);
    let m = 3 + (seed % 2) as usize;
    random::nondeterministic_2ft(&mut rng, m, 2, 0.35)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moves_follow_polarities(seed in any::<u64>(), picks in prop::collection::vec(0usize..4, 0..5)) {
        let t = nondeterministic(seed);
        let u = common::pick_word(t.input_alphabet(), &picks);
        let w = wrap_input(&u).unwrap();
        let tape = t.encode(&w);
        for c in configurations(&t, w.len()) {
            for (d, idx) in successors(&t, &tape, c) {
                let tr = &t.transitions()[idx];
                let read = if t.is_forward(c.state) { &w[c.pos] } else { &w[c.pos - 1] };
                prop_assert_eq!(t.letter(tr.letter), read);
                let expected = match (t.is_forward(tr.from), t.is_forward(tr.to)) {
                    (true, true) => c.pos + 1,
                    (false, false) => c.pos - 1,
                    _ => c.pos,
                };
                prop_assert_eq!(d, Configuration::new(tr.to, expected));
            }
        }
    }

    #[test]
    fn reversible_configurations_have_one_neighbour(seed in any::<u64>(), picks in prop::collection::vec(0usize..4, 0..5)) {
        let mut rng = random::rng(seed);
        let t = random::reversible_2ft(&mut rng, 3 + (seed % 3) as usize, 2);
        prop_assert!(check_properties(&t).reversible);
        let u = common::pick_word(t.input_alphabet(), &picks);
        let tape = t.tape(&u).unwrap();
        for c in configurations(&t, tape.len()) {
            prop_assert!(successors(&t, &tape, c).len() <= 1);
            prop_assert!(predecessors(&t, &tape, c).len() <= 1);
        }
    }

    #[test]
    fn accepting_runs_replay_backwards(seed in any::<u64>(), picks in prop::collection::vec(0usize..4, 0..4)) {
        let t = nondeterministic(seed);
        let u = common::pick_word(t.input_alphabet(), &picks);
        let tape = t.tape(&u).unwrap();
        for run in enumerate_accepting_runs(&t, &u).unwrap() {
            prop_assert_eq!(run.start(), Configuration::new(t.initial(), 0));
            prop_assert_eq!(run.end, Configuration::new(t.final_state(), tape.len()));
            prop_assert!(run.is_simple());
            let mut later = run.end;
            for step in run.steps.iter().rev() {
                prop_assert!(predecessors(&t, &tape, later).contains(&(step.from, step.transition)));
                later = step.from;
            }
        }
    }

    #[test]
    fn trim_is_idempotent_and_keeps_the_relation(seed in any::<u64>()) {
        let t = nondeterministic(seed);
        let once = trim(&t);
        prop_assert_eq!(serialize_transducer(&trim(&once)), serialize_transducer(&once));
        prop_assert!(check_equiv(&t, &once, 3).unwrap().is_equal());
    }

    #[test]
    fn wrapping_adds_endmarkers(picks in prop::collection::vec(0usize..3, 0..6)) {
        let u = common::pick_word(&random::alphabet(3), &picks);
        let w = wrap_input(&u).unwrap();
        prop_assert_eq!(w.len(), u.len() + 2);
        prop_assert!(w[0].is_begin() && w[w.len() - 1].is_end());
        prop_assert_eq!(&w[1..w.len() - 1], &u[..]);
        let mut bad: Word = u.clone();
        bad.insert(picks.len() / 2, Letter::end());
        prop_assert!(wrap_input(&bad).is_err());
    }

    #[test]
    fn codeterministic_machines_have_one_run(seed in any::<u64>(), picks in prop::collection::vec(0usize..4, 0..5)) {
        let mut rng = random::rng(seed);
        let t = random::codet_1ft(&mut rng, 3 + (seed % 2) as usize, 2);
        let u = common::pick_word(t.input_alphabet(), &picks);
        prop_assert!(enumerate_accepting_runs(&t, &u).unwrap().len() <= 1);
    }

    #[test]
    fn least_run_slices_are_short(seed in any::<u64>(), picks in prop::collection::vec(0usize..4, 0..4)) {
        let t = nondeterministic(seed);
        let u = common::pick_word(t.input_alphabet(), &picks);
        if let Ok(run) = minimal_run(&t, &u) {
            for s in slices(&run, u.len() + 2) {
                prop_assert!(s.len() <= t.num_states());
            }
        }
    }

    #[test]
    fn relation_grows_with_length(seed in any::<u64>()) {
        let t = nondeterministic(seed);
        let short = relation(&t, 2).pairs;
        let long = relation(&t, 3).pairs;
        prop_assert!(short.is_subset(&long));
        prop_assert!(long.iter().filter(|(u, _)| u.len() <= 2).all(|p| short.contains(p)));
    }
}
