//! Substitution algebra and the reversible translation of copyless SSTs.

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use revxdt::letter::{Letter, Word};
use revxdt::machine::{run_deterministic, Outcome};
use revxdt::oracle::words;
use revxdt::random;
use revxdt::sst::{compose_substitutions, render_image, Sst, SstDef, SstTransitionDef, Substitution, Symbol};

const VARS: [&str; 2] = ["X", "Y"];

/// A random copyless substitution over `VARS` and letters `a`, `b`.
fn copyless(rng: &mut impl Rng) -> Substitution {
    let letters = random::alphabet(2);
    let mut images: BTreeMap<String, Vec<Symbol>> = VARS.iter().map(|v| (v.to_string(), Vec::new())).collect();
    let mut vars = VARS.to_vec();
    vars.shuffle(rng);
    for v in vars {
        if rng.gen_bool(0.8) {
            let x = VARS.choose(rng).unwrap();
            images.get_mut(*x).unwrap().push(Symbol::Var(v.to_string()));
        }
    }
    for img in images.values_mut() {
        for _ in 0..rng.gen_range(0..=2) {
            let at = rng.gen_range(0..=img.len());
            img.insert(at, Symbol::Out(letters.choose(rng).unwrap().clone()));
        }
    }
    Substitution { images }
}

/// Any substitution over `VARS`, copies allowed.
fn arbitrary(rng: &mut impl Rng) -> Substitution {
    let images = VARS
        .iter()
        .map(|x| {
            let img = (0..rng.gen_range(0..=3))
                .map(|_| match rng.gen_range(0..4) {
                    0 => Symbol::Var("X".into()),
                    1 => Symbol::Var("Y".into()),
                    2 => Symbol::Out(Letter::new("a")),
                    _ => Symbol::Out(Letter::new("b")),
                })
                .collect();
            (x.to_string(), img)
        })
        .collect();
    Substitution { images }
}

/// Three-state SST `qI -⊢-> q -a,b-> q -⊣-> qF` with random copyless updates.
fn random_sst(seed: u64) -> Sst {
    let mut rng = random::rng(seed);
    let tr = |from: &str, letter: Letter, to: &str, s: Substitution| SstTransitionDef {
        from: from.into(),
        letter,
        tau: s.images.iter().map(|(x, img)| (x.clone(), render_image(img))).collect(),
        to: to.into(),
    };
    let transitions = vec![
        tr("qI", Letter::begin(), "q", copyless(&mut rng)),
        tr("q", Letter::new("a"), "q", copyless(&mut rng)),
        tr("q", Letter::new("b"), "q", copyless(&mut rng)),
        tr("q", Letter::end(), "qF", copyless(&mut rng)),
    ];
    Sst::from_def(&SstDef {
        r#final: "qF".into(),
        final_variable: "X".into(),
        initial: "qI".into(),
        input_alphabet: random::alphabet(2),
        name: format!("sst{seed}"),
        output_alphabet: random::alphabet(2),
        states: vec!["qI".into(), "q".into(), "qF".into()],
        transitions,
        variables: VARS.iter().map(|v| v.to_string()).collect(),
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn composition_is_associative_with_identity(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (a, b, c) = (arbitrary(&mut rng), arbitrary(&mut rng), arbitrary(&mut rng));
        let left = compose_substitutions(&compose_substitutions(&a, &b).unwrap(), &c).unwrap();
        let right = compose_substitutions(&a, &compose_substitutions(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let id = Substitution::identity(&VARS);
        prop_assert_eq!(&compose_substitutions(&id, &a).unwrap(), &a);
        prop_assert_eq!(&compose_substitutions(&a, &id).unwrap(), &a);
    }

    #[test]
    fn copyless_is_closed_under_composition(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (a, b) = (copyless(&mut rng), copyless(&mut rng));
        prop_assert!(a.is_copyless() && b.is_copyless());
        prop_assert!(compose_substitutions(&a, &b).unwrap().is_copyless());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn reversible_translation_agrees_with_evaluation(seed in any::<u64>()) {
        let s = random_sst(seed);
        let r = revxdt::sst::sst_to_reversible(&s).unwrap();
        for u in words(&s.input_alphabet, 3) {
            let want: Word = revxdt::sst::eval_sst(&s, &u).unwrap();
            match run_deterministic(&r, &u).unwrap() {
                Outcome::Accepted { output, .. } => prop_assert_eq!(output, want),
                other => prop_assert!(false, "{:?} on {:?}", other, u),
            }
        }
    }
}
