//! Copyless streaming string transducers and their conversion to
//! reversible two-way transducers.
//!
//! The conversion strips the SST down to a deterministic one-way machine
//! emitting one substitution per letter, and composes its reversible form
//! with a navigator that walks the substitution sequence right to left to
//! expand the final variable.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::compose::compose_reversible;
use crate::error::{Error, Result};
use crate::letter::{Letter, Word};
use crate::machine::{Polarity, Transducer, TransducerBuilder};
use crate::oneway::{det1ft_to_reversible, det_state_count};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Var(String),
    Out(Letter),
}

/// Maps every variable to a word over variables and output letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution {
    pub images: BTreeMap<String, Vec<Symbol>>,
}

impl Substitution {
    pub fn identity<S: AsRef<str>>(vars: &[S]) -> Self {
        let images = vars.iter().map(|v| (v.as_ref().to_string(), vec![Symbol::Var(v.as_ref().to_string())])).collect();
        Substitution { images }
    }

    /// Maps every variable to the empty word.
    pub fn erase<S: AsRef<str>>(vars: &[S]) -> Self {
        Substitution { images: vars.iter().map(|v| (v.as_ref().to_string(), Vec::new())).collect() }
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.images.keys().map(String::as_str)
    }

    pub fn image(&self, var: &str) -> &[Symbol] {
        self.images.get(var).map_or(&[], Vec::as_slice)
    }

    /// Variable whose image mentions `var`, with the position of the mention.
    pub fn occurrence(&self, var: &str) -> Option<(&str, usize)> {
        self.images.iter().find_map(|(x, img)| {
            img.iter().position(|s| matches!(s, Symbol::Var(y) if y == var)).map(|i| (x.as_str(), i))
        })
    }

    /// A variable mentioned twice, if any.
    pub fn copy_witness(&self) -> Option<String> {
        let mut seen = BTreeSet::new();
        self.images.values().flatten().find_map(|s| match s {
            Symbol::Var(y) if !seen.insert(y.clone()) => Some(y.clone()),
            _ => None,
        })
    }

    pub fn is_copyless(&self) -> bool {
        self.copy_witness().is_none()
    }

    /// Letter naming this substitution in the navigator's alphabet.
    pub fn letter(&self) -> Letter {
        let map: BTreeMap<&str, String> = self.images.iter().map(|(k, v)| (k.as_str(), render_image(v))).collect();
        Letter::new(serde_json::to_string(&map).expect("string map serializes"))
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter().as_str())
    }
}

/// `s2 ∘ s1`: each variable maps to its `s1` image with every variable
/// replaced by its `s2` image.
pub fn compose_substitutions(s2: &Substitution, s1: &Substitution) -> Result<Substitution> {
    if !s1.variables().eq(s2.variables()) {
        return Err(Error::VariableSetMismatch);
    }
    let images = s1
        .images
        .iter()
        .map(|(x, img)| {
            let expanded = img
                .iter()
                .flat_map(|s| match s {
                    Symbol::Var(y) => s2.image(y).to_vec(),
                    out => vec![out.clone()],
                })
                .collect();
            (x.clone(), expanded)
        })
        .collect();
    Ok(Substitution { images })
}

/// Image text: `${X}` for variables, plain characters for letters.
pub fn render_image(img: &[Symbol]) -> String {
    img.iter()
        .map(|s| match s {
            Symbol::Var(v) => format!("${{{v}}}"),
            Symbol::Out(l) => l.as_str().to_string(),
        })
        .collect()
}

pub fn parse_image(s: &str) -> Result<Vec<Symbol>> {
    let mut out = Vec::new();
    let mut rest = s;
    while let Some(c) = rest.chars().next() {
        if let Some(tail) = rest.strip_prefix("${") {
            let end = tail.find('}').ok_or_else(|| Error::Invalid(format!("unterminated variable in {s:?}")))?;
            out.push(Symbol::Var(tail[..end].to_string()));
            rest = &tail[end + 1..];
        } else {
            out.push(Symbol::Out(Letter::new(c.to_string())));
            rest = &rest[c.len_utf8()..];
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SstTransitionDef {
    pub from: String,
    pub letter: Letter,
    /// Images of the updated variables; the others are left unchanged.
    pub tau: BTreeMap<String, String>,
    pub to: String,
}

/// File representation of an SST.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SstDef {
    #[serde(rename = "final")]
    pub r#final: String,
    pub final_variable: String,
    pub initial: String,
    pub input_alphabet: Vec<Letter>,
    pub name: String,
    pub output_alphabet: Vec<Letter>,
    pub states: Vec<String>,
    pub transitions: Vec<SstTransitionDef>,
    pub variables: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SstTransition {
    pub from: usize,
    pub letter: Letter,
    pub to: usize,
    pub tau: Substitution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sst {
    pub name: String,
    pub input_alphabet: Vec<Letter>,
    pub output_alphabet: Vec<Letter>,
    pub states: Vec<String>,
    pub initial: usize,
    pub final_state: usize,
    pub variables: Vec<String>,
    pub final_variable: String,
    pub transitions: Vec<SstTransition>,
}

impl Sst {
    /// Validates the definition: known states, letters and variables,
    /// single-character output letters, a deterministic automaton and
    /// copyless substitutions.
    pub fn from_def(def: &SstDef) -> Result<Self> {
        let state_ids: HashMap<&str, usize> = def.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if state_ids.len() != def.states.len() {
            let dup = def.states.iter().find(|s| def.states.iter().filter(|t| t == s).count() > 1);
            return Err(Error::DuplicateState(dup.cloned().unwrap_or_default()));
        }
        let state = |id: &str| state_ids.get(id).copied().ok_or_else(|| Error::UnknownState(id.to_string()));
        let vars: BTreeSet<&str> = def.variables.iter().map(String::as_str).collect();
        if vars.len() != def.variables.len() {
            return Err(Error::Invalid("duplicate variable".into()));
        }
        if !vars.contains(def.final_variable.as_str()) {
            return Err(Error::Invalid(format!("final variable {:?} is not declared", def.final_variable)));
        }
        if let Some(l) = def.output_alphabet.iter().find(|l| l.as_str().chars().count() != 1 || l.is_endmarker()) {
            return Err(Error::Invalid(format!("output letter {:?} is not a single character", l.as_str())));
        }
        let outputs: BTreeSet<&Letter> = def.output_alphabet.iter().collect();
        let inputs: BTreeSet<&Letter> = def.input_alphabet.iter().collect();

        let mut transitions = Vec::new();
        let mut seen = BTreeSet::new();
        for t in &def.transitions {
            let (from, to) = (state(&t.from)?, state(&t.to)?);
            if !t.letter.is_endmarker() && !inputs.contains(&t.letter) {
                return Err(Error::LetterNotInAlphabet { letter: t.letter.as_str().into(), alphabet: "input" });
            }
            if !seen.insert((from, t.letter.clone())) {
                return Err(Error::NotDeterministic(format!("two transitions from {} on {}", t.from, t.letter)));
            }
            let mut tau = Substitution::identity(&def.variables);
            for (x, img) in &t.tau {
                if !vars.contains(x.as_str()) {
                    return Err(Error::Invalid(format!("unknown variable {x:?}")));
                }
                let img = parse_image(img)?;
                for s in &img {
                    match s {
                        Symbol::Var(y) if !vars.contains(y.as_str()) => {
                            return Err(Error::Invalid(format!("unknown variable {y:?}")))
                        }
                        Symbol::Out(l) if !outputs.contains(l) => {
                            return Err(Error::LetterNotInAlphabet { letter: l.as_str().into(), alphabet: "output" })
                        }
                        _ => {}
                    }
                }
                tau.images.insert(x.clone(), img);
            }
            if let Some(y) = tau.copy_witness() {
                return Err(Error::NotCopyless(format!("{y} is used twice on {} --{}--> {}", t.from, t.letter, t.to)));
            }
            transitions.push(SstTransition { from, letter: t.letter.clone(), to, tau });
        }
        Ok(Sst {
            name: def.name.clone(),
            input_alphabet: inputs.into_iter().cloned().collect(),
            output_alphabet: outputs.into_iter().cloned().collect(),
            states: def.states.clone(),
            initial: state(&def.initial)?,
            final_state: state(&def.r#final)?,
            variables: def.variables.clone(),
            final_variable: def.final_variable.clone(),
            transitions,
        })
    }

    /// Canonical definition; identity images are omitted.
    pub fn to_def(&self) -> SstDef {
        SstDef {
            r#final: self.states[self.final_state].clone(),
            final_variable: self.final_variable.clone(),
            initial: self.states[self.initial].clone(),
            input_alphabet: self.input_alphabet.clone(),
            name: self.name.clone(),
            output_alphabet: self.output_alphabet.clone(),
            states: self.states.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| SstTransitionDef {
                    from: self.states[t.from].clone(),
                    letter: t.letter.clone(),
                    tau: t
                        .tau
                        .images
                        .iter()
                        .filter(|(x, img)| !matches!(img.as_slice(), [Symbol::Var(y)] if y == *x))
                        .map(|(x, img)| (x.clone(), render_image(img)))
                        .collect(),
                    to: self.states[t.to].clone(),
                })
                .collect(),
            variables: self.variables.clone(),
        }
    }

    fn step(&self, q: usize, a: &Letter) -> Option<&SstTransition> {
        self.transitions.iter().find(|t| t.from == q && &t.letter == a)
    }

    /// Substitutions along the run on `⊢u⊣`, or `None` if it is rejected.
    pub fn run(&self, u: &[Letter]) -> Option<Vec<&Substitution>> {
        let w = crate::machine::wrap_input(u).ok()?;
        let mut q = self.initial;
        let mut subs = Vec::with_capacity(w.len());
        for a in &w {
            let t = self.step(q, a)?;
            subs.push(&t.tau);
            q = t.to;
        }
        (q == self.final_state).then_some(subs)
    }
}

/// Copyless check over the transitions; returns a description of the first
/// offending transition.
pub fn check_copyless(s: &Sst) -> std::result::Result<(), String> {
    for t in &s.transitions {
        if let Some(y) = t.tau.copy_witness() {
            return Err(format!("{y} is used twice on {} --{}--> {}", s.states[t.from], t.letter, s.states[t.to]));
        }
    }
    Ok(())
}

/// Output of `s` on `u`, or `None` if `u` is rejected.
pub fn eval_sst(s: &Sst, u: &[Letter]) -> Option<Word> {
    let subs = s.run(u)?;
    let mut acc = Substitution::identity(&s.variables);
    for sub in subs {
        acc = compose_substitutions(&acc, sub).expect("same variables");
    }
    let erased = compose_substitutions(&Substitution::erase(&s.variables), &acc).expect("same variables");
    Some(
        erased
            .image(&s.final_variable)
            .iter()
            .map(|sym| match sym {
                Symbol::Out(l) => l.clone(),
                Symbol::Var(_) => unreachable!("variables are erased"),
            })
            .collect(),
    )
}

fn substitution_letters(s: &Sst) -> Vec<Letter> {
    let set: BTreeSet<Letter> = s.transitions.iter().map(|t| t.tau.letter()).collect();
    set.into_iter().collect()
}

/// Deterministic one-way transducer emitting the substitution of each
/// transition.
pub fn strip_sst(s: &Sst) -> Transducer {
    let mut b = TransducerBuilder::new(format!("strip({})", s.name));
    b.input_letters(s.input_alphabet.iter().cloned());
    b.output_letters(substitution_letters(s));
    for q in &s.states {
        b.state(q.clone(), Polarity::Forward);
    }
    b.initial(s.initial).final_state(s.final_state);
    for t in &s.transitions {
        b.transition(t.from, t.letter.clone(), t.to, vec![t.tau.letter()]);
    }
    b.build().expect("stripped SST is well formed")
}

/// Reversible two-way transducer reading a substitution sequence and
/// producing the value of the final variable. A backward state `X^i`
/// computes the value of `X` from the substitutions to its left; a forward
/// state `X^o` resumes the image that mentions `X` once it is done.
pub fn build_navigator(s: &Sst) -> Result<Transducer> {
    check_copyless(s).map_err(Error::NotCopyless)?;
    let mut b = TransducerBuilder::new(format!("navigator({})", s.name));
    let letters = substitution_letters(s);
    b.input_letters(letters.iter().cloned());
    b.output_letters(s.output_alphabet.iter().cloned());
    let init = b.state("init", Polarity::Forward);
    let fin = b.state("fin", Polarity::Forward);
    let mut vin = HashMap::new();
    let mut vout = HashMap::new();
    for x in &s.variables {
        vin.insert(x.as_str(), b.state(format!("{x}^i"), Polarity::Backward));
        vout.insert(x.as_str(), b.state(format!("{x}^o"), Polarity::Forward));
    }
    b.initial(init).final_state(fin);
    let o = s.final_variable.as_str();

    b.transition(init, Letter::begin(), init, vec![]);
    b.transition(init, Letter::end(), vin[o], vec![]);
    b.transition(vout[o], Letter::end(), fin, vec![]);
    for x in &s.variables {
        b.transition(vin[x.as_str()], Letter::begin(), vout[x.as_str()], vec![]);
    }

    let subs: BTreeMap<Letter, &Substitution> = s.transitions.iter().map(|t| (t.tau.letter(), &t.tau)).collect();
    for (l, sub) in subs {
        b.transition(init, l.clone(), init, vec![]);
        for (x, img) in &sub.images {
            // Letters between consecutive variables of the image, and the
            // variables themselves.
            let mut chunks: Vec<Word> = vec![Vec::new()];
            let mut vars: Vec<&str> = Vec::new();
            for sym in img {
                match sym {
                    Symbol::Out(a) => chunks.last_mut().expect("non-empty").push(a.clone()),
                    Symbol::Var(y) => {
                        vars.push(y);
                        chunks.push(Vec::new());
                    }
                }
            }
            let x = x.as_str();
            match vars.first() {
                None => b.transition(vin[x], l.clone(), vout[x], chunks[0].clone()),
                Some(y) => b.transition(vin[x], l.clone(), vin[y], chunks[0].clone()),
            };
            for (k, y) in vars.iter().enumerate() {
                match vars.get(k + 1) {
                    Some(z) => b.transition(vout[y], l.clone(), vin[z], chunks[k + 1].clone()),
                    None => b.transition(vout[y], l.clone(), vout[x], chunks[k + 1].clone()),
                };
            }
        }
    }
    b.build()
}

/// Reversible two-way transducer equivalent to the copyless SST `s`.
pub fn sst_to_reversible(s: &Sst) -> Result<Transducer> {
    let nav = build_navigator(s)?;
    let front = det1ft_to_reversible(&strip_sst(s))?;
    Ok(compose_reversible(&front, &nav)?.with_name(format!("sst_rev({})", s.name)))
}

/// Raw state count of [`sst_to_reversible`] for `m` variables and `n` states.
pub fn sst_state_count(m: usize, n: usize) -> usize {
    det_state_count(n) * (2 * m + 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::letter::{render, word};
    use crate::machine::check_properties;
    use crate::oracle::outputs;

    fn sub(pairs: &[(&str, &str)]) -> Substitution {
        Substitution { images: pairs.iter().map(|(x, i)| (x.to_string(), parse_image(i).unwrap())).collect() }
    }

    #[test]
    fn composition_by_hand() {
        let s1 = sub(&[("X", "${X}a")]);
        let s2 = sub(&[("X", "${X}b")]);
        assert_eq!(compose_substitutions(&s1, &s2).unwrap(), sub(&[("X", "${X}ab")]));
        let id = Substitution::identity(&["X"]);
        assert_eq!(compose_substitutions(&id, &s1).unwrap(), s1);
        assert_eq!(compose_substitutions(&s1, &id).unwrap(), s1);
        let s = sub(&[("X", "a${Y}b"), ("Y", "c")]);
        let e = compose_substitutions(&Substitution::erase(&["X", "Y"]), &s).unwrap();
        assert_eq!(render_image(e.image("X")), "ab");
        assert_eq!(compose_substitutions(&s, &s1), Err(Error::VariableSetMismatch));
    }

    #[test]
    fn copyless_witnesses() {
        assert_eq!(sub(&[("X", "${X}${X}")]).copy_witness(), Some("X".into()));
        assert_eq!(sub(&[("X", "${Y}"), ("Y", "a"), ("Z", "${Y}")]).copy_witness(), Some("Y".into()));
        assert!(check_copyless(&fixtures::pal()).is_ok());
    }

    #[test]
    fn pal_evaluates() {
        let s = fixtures::pal();
        assert_eq!(render(&eval_sst(&s, &word("ab")).unwrap()), "abba");
        assert_eq!(eval_sst(&s, &[]), Some(vec![]));
        assert_eq!(eval_sst(&s, &word("c")), None);
    }

    #[test]
    fn navigator_on_pal() {
        let s = fixtures::pal();
        let nav = build_navigator(&s).unwrap();
        assert_eq!(nav.num_states(), 2 * s.variables.len() + 2);
        assert!(check_properties(&nav).reversible);
        let strip = strip_sst(&s);
        let seq = outputs(&strip, &word("ab")).unwrap().into_iter().next().unwrap();
        let out = outputs(&nav, &seq).unwrap();
        assert_eq!(out.into_iter().map(|w| render(&w)).collect::<Vec<_>>(), ["abba"]);
    }

    #[test]
    fn def_round_trip() {
        let s = fixtures::pal();
        assert_eq!(Sst::from_def(&s.to_def()).unwrap(), s);
    }
}
