//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::compose::{compose_reversible, compose_trimmed_with_limit, max_states};
use crate::dot::{machine_dot, run_tree_dot};
use crate::error::{Error, Result};
use crate::format::{parse_sst, parse_transducer, serialize_transducer};
use crate::letter::{parse_word, render};
use crate::machine::{check_properties, run_deterministic, trim, Outcome, Transducer};
use crate::oneway::{codet1ft_to_reversible, det1ft_to_reversible, reversibilize};
use crate::oracle::{check_equiv, check_uniformizes, outputs, Equivalence, Uniformity};
use crate::sst::{eval_sst, sst_to_reversible};
use crate::tree_outline::tree_outline_tagged;
use crate::uniformize::{stage, uniformize_with_limit, Stage};

#[derive(Parser, Debug)]
#[command(name = "revxdt", version, about = "Reversible two-way transducers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print determinism, co-determinism, weak branching and reversibility.
    Check { file: PathBuf },
    /// Run a transducer on a word and print its outputs.
    Run {
        file: PathBuf,
        #[arg(long)]
        input: String,
    },
    /// Compose two reversible transducers (first applied first).
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Build only the useful part of the product.
        #[arg(long)]
        trim: bool,
        #[arg(long)]
        max_states: Option<usize>,
    },
    /// Tree-outline construction for co-deterministic, weakly branching 1FTs.
    Treeoutline {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the rule family of every transition instead of the machine.
        #[arg(long)]
        emit_rule_tags: bool,
    },
    /// Reversible equivalent of a deterministic or co-deterministic 1FT.
    Reversibilize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// Reversible uniformizer of a two-way transducer.
    Uniformize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        max_states: Option<usize>,
        /// Emit an intermediate machine instead.
        #[arg(long, value_enum)]
        stage: Option<StageArg>,
    },
    /// Reversible transducer equivalent to a copyless SST.
    Sst2rev {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate an SST on a word.
    Ssteval {
        file: PathBuf,
        #[arg(long)]
        input: String,
    },
    /// Compare the relations of two transducers on all short words.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
    },
    /// Check that the first transducer uniformizes the second.
    Uniformcheck {
        candidate: PathBuf,
        relation: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Remove states on no accepting path.
    Trim {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// State and transition counts, raw and trimmed.
    Stats { file: PathBuf },
    /// Graphviz rendering of the machine, or of its run-tree on a word.
    Dot {
        file: PathBuf,
        #[arg(long)]
        run_tree: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Auto,
    Codet,
    Det,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StageArg {
    RightOracle,
    Uniformizer,
    Follower,
}

impl From<StageArg> for Stage {
    fn from(s: StageArg) -> Self {
        match s {
            StageArg::RightOracle => Stage::RightOracle,
            StageArg::Uniformizer => Stage::Uniformizer,
            StageArg::Follower => Stage::Follower,
        }
    }
}

/// Failure of a command: an error (exit 2) or a negative answer (exit 1).
enum Failure {
    Error(Error),
    Negative,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Transducer> {
    parse_transducer(&read(path)?)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Invalid(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| Error::Invalid(e.to_string())),
    }
}

fn say(out: &mut dyn Write, text: impl AsRef<str>) -> Result<()> {
    writeln!(out, "{}", text.as_ref()).map_err(|e| Error::Invalid(e.to_string()))
}

fn execute(cmd: Command, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match cmd {
        Command::Check { file } => {
            let t = load(&file)?;
            say(out, serde_json::to_string_pretty(&check_properties(&t).to_json(&t)).expect("json"))?;
        }
        Command::Run { file, input } => {
            let t = load(&file)?;
            let u = parse_word(&input);
            if check_properties(&t).deterministic {
                match run_deterministic(&t, &u)? {
                    Outcome::Accepted { output, .. } => say(out, render(&output))?,
                    Outcome::Rejected => {
                        say(out, "rejected")?;
                        return Err(Failure::Negative);
                    }
                    Outcome::Diverges => {
                        say(out, "diverges")?;
                        return Err(Failure::Negative);
                    }
                }
            } else {
                let outs = outputs(&t, &u)?;
                if outs.is_empty() {
                    say(out, "rejected")?;
                    return Err(Failure::Negative);
                }
                for w in outs {
                    say(out, render(&w))?;
                }
            }
        }
        Command::Compose { first, second, output, trim, max_states: limit } => {
            let (t1, t2) = (load(&first)?, load(&second)?);
            let c = if trim {
                compose_trimmed_with_limit(&t1, &t2, limit.unwrap_or_else(max_states))?
            } else {
                compose_reversible(&t1, &t2)?
            };
            emit(out, output.as_deref(), &serialize_transducer(&c))?;
        }
        Command::Treeoutline { file, output, emit_rule_tags } => {
            let t = load(&file)?;
            let to = tree_outline_tagged(&t)?;
            if emit_rule_tags {
                let tags: Vec<_> = to
                    .machine
                    .transitions()
                    .iter()
                    .zip(&to.rules)
                    .map(|(tr, rule)| {
                        json!({
                            "from": to.machine.state_id(tr.from),
                            "letter": to.machine.letter(tr.letter),
                            "rule": rule.to_string(),
                            "to": to.machine.state_id(tr.to),
                        })
                    })
                    .collect();
                let mut text = serde_json::to_string_pretty(&tags).expect("json");
                text.push('\n');
                emit(out, output.as_deref(), &text)?;
            } else {
                emit(out, output.as_deref(), &serialize_transducer(&to.machine))?;
            }
        }
        Command::Reversibilize { file, output, mode } => {
            let t = load(&file)?;
            let r = match mode {
                Mode::Auto => reversibilize(&t)?,
                Mode::Codet => codet1ft_to_reversible(&t)?,
                Mode::Det => det1ft_to_reversible(&t)?,
            };
            emit(out, output.as_deref(), &serialize_transducer(&r))?;
        }
        Command::Uniformize { file, output, max_states: limit, stage: which } => {
            let t = load(&file)?;
            let m = match which {
                Some(s) => stage(&t, s.into()),
                None => uniformize_with_limit(&t, limit.unwrap_or_else(max_states))?,
            };
            emit(out, output.as_deref(), &serialize_transducer(&m))?;
        }
        Command::Sst2rev { file, output } => {
            let s = parse_sst(&read(&file)?)?;
            emit(out, output.as_deref(), &serialize_transducer(&sst_to_reversible(&s)?))?;
        }
        Command::Ssteval { file, input } => {
            let s = parse_sst(&read(&file)?)?;
            match eval_sst(&s, &parse_word(&input)) {
                Some(w) => say(out, render(&w))?,
                None => {
                    say(out, "rejected")?;
                    return Err(Failure::Negative);
                }
            }
        }
        Command::Equiv { left, right, max_len } => match check_equiv(&load(&left)?, &load(&right)?, max_len)? {
            Equivalence::Equal => say(out, "equivalent")?,
            Equivalence::Counterexample { word, left, right } => {
                let show = |s: &std::collections::BTreeSet<crate::letter::Word>| {
                    s.iter().map(|w| format!("{:?}", render(w))).collect::<Vec<_>>().join(", ")
                };
                say(out, format!("counterexample {:?}: {{{}}} vs {{{}}}", render(&word), show(&left), show(&right)))?;
                return Err(Failure::Negative);
            }
        },
        Command::Uniformcheck { candidate, relation, max_len } => {
            match check_uniformizes(&load(&candidate)?, &load(&relation)?, max_len)? {
                Uniformity::Ok => say(out, "ok")?,
                Uniformity::Counterexample { word, chosen, allowed } => {
                    let chosen = chosen.as_deref().map(render);
                    let allowed: Vec<_> = allowed.iter().map(|w| render(w)).collect();
                    say(out, format!("counterexample {:?}: chose {chosen:?}, allowed {allowed:?}", render(&word)))?;
                    return Err(Failure::Negative);
                }
            }
        }
        Command::Trim { file, output } => {
            emit(out, output.as_deref(), &serialize_transducer(&trim(&load(&file)?)))?;
        }
        Command::Stats { file } => {
            let t = load(&file)?;
            let tr = trim(&t);
            let stats = json!({
                "states": t.num_states(),
                "transitions": t.transitions().len(),
                "trimmed_states": tr.num_states(),
                "trimmed_transitions": tr.transitions().len(),
            });
            say(out, serde_json::to_string_pretty(&stats).expect("json"))?;
        }
        Command::Dot { file, run_tree } => {
            let t = load(&file)?;
            let text = match run_tree {
                Some(u) => run_tree_dot(&t, &parse_word(&u))?,
                None => machine_dot(&t),
            };
            emit(out, None, &text)?;
        }
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command, returning the
/// exit code: 0 on success, 1 on a negative answer, 2 on errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Negative) => 1,
        Err(Failure::Error(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
