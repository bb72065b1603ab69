//! Identifier newtypes for the four element domains of a colored net.
//!
//! Places, transitions, colors and modes are all plain strings ordered
//! lexicographically, but they never mix: a multiset of places cannot be fed
//! where a multiset of colors is expected.

use std::borrow::Borrow;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Reserved separator used by the unfolding to pair a base identifier with a
/// color or mode.
pub const SEPARATOR: char = '⊙';

macro_rules! identifier {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                $name(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(s)
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

identifier!(
    /// A place of a net.
    Place
);
identifier!(
    /// A transition of a net.
    Transition
);
identifier!(
    /// A token color belonging to some place's color set.
    Color
);
identifier!(
    /// A mode (transition color) selecting one row of a transition's inscriptions.
    Mode
);

/// A transition fired in a particular mode.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Binding {
    pub transition: Transition,
    pub mode: Mode,
}

impl Binding {
    pub fn new(transition: impl Into<Transition>, mode: impl Into<Mode>) -> Self {
        Binding {
            transition: transition.into(),
            mode: mode.into(),
        }
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.transition, self.mode)
    }
}
