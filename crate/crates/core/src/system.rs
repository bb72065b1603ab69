//! The interface shared by ordinary and colored nets as step-firing systems.
//!
//! Step sequences, normal forms and enumeration are written once against
//! [`StepSystem`]; the ordinary net fires multisets of transitions, the colored
//! net fires multisets of bindings.

use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::multiset::Multiset;

/// Default cap on the number of nodes visited by any enumeration.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

pub trait StepSystem {
    type Action: Clone + Ord + Hash + fmt::Debug + fmt::Display;
    type State: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display;

    /// Every action of the system in canonical order.
    fn actions(&self) -> Vec<Self::Action>;

    fn check_state(&self, state: &Self::State) -> Result<()>;

    /// Whether the step's total consumption fits inside `state`.
    fn step_enabled(&self, state: &Self::State, step: &Multiset<Self::Action>) -> Result<bool>;

    fn step_fire(&self, state: &Self::State, step: &Multiset<Self::Action>) -> Result<Self::State>;

    /// Monoidal sum of two states.
    fn combine(&self, a: &Self::State, b: &Self::State) -> Result<Self::State>;

    /// Total number of tokens held by a state.
    fn token_count(&self, state: &Self::State) -> u64;
}

/// Counts visited nodes and fails once the limit is passed.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: usize,
    used: usize,
}

impl Budget {
    pub fn new(limit: usize) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn spend(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::ResourceLimit(self.limit))
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> usize {
        self.used
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_NODE_BUDGET)
    }
}

/// All non-empty steps of total multiplicity at most `max_size` enabled at
/// `state`, in canonical order (by size, then by element order).
pub fn enabled_steps<S: StepSystem>(sys: &S, state: &S::State, max_size: usize) -> Result<Vec<Multiset<S::Action>>> {
    let mut singles = Vec::new();
    for a in sys.actions() {
        if sys.step_enabled(state, &Multiset::singleton(a.clone(), 1))? {
            singles.push(a);
        }
    }
    let mut out = Vec::new();
    extend_steps(sys, state, &singles, 0, max_size, &Multiset::new(), &mut out)?;
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
    Ok(out)
}

fn extend_steps<S: StepSystem>(
    sys: &S,
    state: &S::State,
    singles: &[S::Action],
    from: usize,
    room: usize,
    current: &Multiset<S::Action>,
    out: &mut Vec<Multiset<S::Action>>,
) -> Result<()> {
    if room == 0 {
        return Ok(());
    }
    for (i, a) in singles.iter().enumerate().skip(from) {
        let mut next = current.clone();
        next.insert(a.clone(), 1)?;
        // enabledness is monotone, so a disabled step has no enabled extension
        if !sys.step_enabled(state, &next)? {
            continue;
        }
        out.push(next.clone());
        extend_steps(sys, state, singles, i, room - 1, &next, out)?;
    }
    Ok(())
}
