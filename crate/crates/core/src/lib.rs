//! Colored Petri nets as concrete data: multisets, ordinary and colored nets,
//! step-sequence semantics with a canonical normal form, the unfolding into
//! ordinary nets, and a bounded checker that unfolding preserves behavior.

pub mod cli;
pub mod colored;
pub mod error;
pub mod ids;
pub mod multiset;
pub mod netio;
pub mod petri;
pub mod report;
pub mod semantics;
pub mod system;
pub mod unfolding;

pub use error::{Error, Result};
