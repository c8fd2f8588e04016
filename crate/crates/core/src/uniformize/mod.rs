//! Uniformization of nondeterministic two-way transducers by reversible ones.
//!
//! A co-deterministic right oracle annotates each letter with what the
//! suffix after it allows. A deterministic machine reads that annotation and
//! picks, boundary after boundary, the least slice of an accepting run. The
//! follower then replays the chosen run. Each stage is made reversible and
//! the three are composed.

mod behavior;
mod slices;

pub use behavior::{behavior_step, build_right_oracle, Behavior, EnrichedLetter, RightOracle};
pub use slices::{
    build_follower, build_uniformizer, is_valid, slice_sequence, slice_update, stitch, SliceLetter, Uniformizer,
};

use crate::compose::{compose_trimmed_with_limit, max_states};
use crate::error::Result;
use crate::machine::{trim, Transducer};
use crate::oneway::{codet1ft_to_reversible, det1ft_to_reversible};

/// Intermediate machine of the pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    RightOracle,
    Uniformizer,
    Follower,
}

/// The three machines of the pipeline before reversibilization.
pub struct Stages {
    pub right_oracle: RightOracle,
    pub uniformizer: Uniformizer,
    pub follower: Transducer,
}

pub fn build_stages(t: &Transducer) -> Stages {
    let right_oracle = build_right_oracle(t);
    let uniformizer = build_uniformizer(t, &right_oracle);
    let follower = build_follower(t, &uniformizer.slice_letters);
    Stages { right_oracle, uniformizer, follower }
}

pub fn stage(t: &Transducer, which: Stage) -> Transducer {
    let s = build_stages(t);
    match which {
        Stage::RightOracle => s.right_oracle.machine,
        Stage::Uniformizer => s.uniformizer.machine,
        Stage::Follower => s.follower,
    }
}

/// Reversible transducer with the same domain as `t` whose output on each
/// input is the production of the least accepting run of `t`.
pub fn uniformize(t: &Transducer) -> Result<Transducer> {
    uniformize_with_limit(t, max_states())
}

pub fn uniformize_with_limit(t: &Transducer, limit: usize) -> Result<Transducer> {
    let s = build_stages(t);
    let oracle = codet1ft_to_reversible(&trim(&s.right_oracle.machine))?;
    let chooser = det1ft_to_reversible(&trim(&s.uniformizer.machine))?;
    let front = compose_trimmed_with_limit(&oracle, &chooser, limit)?;
    Ok(compose_trimmed_with_limit(&front, &s.follower, limit)?.with_name(format!("uniformize({})", t.name())))
}
