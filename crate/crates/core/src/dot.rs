//! Graphviz export of machines and run-trees.

use std::collections::HashMap;
use std::fmt::Write;

use crate::error::Result;
use crate::letter::{render, Letter};
use crate::machine::{Configuration, Transducer};
use crate::oracle::initial_runs;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// State graph: forward states as circles, backward states as boxes.
pub fn machine_dot(t: &Transducer) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(t.name())).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    for (i, s) in t.states().iter().enumerate() {
        let shape = if s.polarity.is_forward() { "circle" } else { "box" };
        let peripheries = if i == t.final_state() { 2 } else { 1 };
        writeln!(out, "  s{i} [label={}, shape={shape}, peripheries={peripheries}];", quote(&s.id)).unwrap();
    }
    writeln!(out, "  start [shape=point];").unwrap();
    writeln!(out, "  start -> s{};", t.initial()).unwrap();
    for tr in t.transitions() {
        let label = format!("{} / {}", t.letter(tr.letter), render(&tr.output));
        writeln!(out, "  s{} -> s{} [label={}];", tr.from, tr.to, quote(&label)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Run-tree on `⊢u⊣`: one node per run prefix, accepting leaves doubled.
pub fn run_tree_dot(t: &Transducer, u: &[Letter]) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(&format!("{} on {}", t.name(), render(u)))).unwrap();
    let mut nodes: HashMap<Vec<Configuration>, usize> = HashMap::new();
    for (run, accepting) in initial_runs(t, u)? {
        let configs: Vec<Configuration> = run.configurations().collect();
        let mut parent = None;
        for k in 1..=configs.len() {
            let path = &configs[..k];
            let n = match nodes.get(path) {
                Some(&n) => n,
                None => {
                    let n = nodes.len();
                    let c = path[k - 1];
                    let peripheries = if accepting && k == configs.len() { 2 } else { 1 };
                    let text = format!("{}@{}", t.state_id(c.state), c.pos);
                    writeln!(out, "  n{n} [label={}, peripheries={peripheries}];", quote(&text)).unwrap();
                    nodes.insert(path.to_vec(), n);
                    if let Some(p) = parent {
                        let tr = &t.transitions()[run.steps[k - 2].transition];
                        let text = format!("{} / {}", t.letter(tr.letter), render(&tr.output));
                        writeln!(out, "  n{p} -> n{n} [label={}];", quote(&text)).unwrap();
                    }
                    n
                }
            };
            parent = Some(n);
        }
    }
    out.push_str("}\n");
    Ok(out)
}
