//! Validation reports shared by the net validator and the morphism checkers.

use std::fmt;

use serde::Serialize;

use crate::ids::{Mode, Place, Transition};

/// One report code per checked invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Code {
    DuplicateIdentifier,
    UndeclaredPlace,
    ArcMultiplicity,
    MissingColorSet,
    EmptyColorSet,
    UnknownColorSetOwner,
    MissingModeSet,
    EmptyModeSet,
    UnknownModeSetOwner,
    MissingInscription,
    ExtraInscription,
    InscriptionNotTotal,
    InscriptionUnknownMode,
    ColorOutsidePlace,
    MissingComponent,
    ComponentOutOfRange,
    BaseSquare,
    SpanSquare,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::DuplicateIdentifier => "duplicate-identifier",
            Code::UndeclaredPlace => "undeclared-place",
            Code::ArcMultiplicity => "arc-multiplicity",
            Code::MissingColorSet => "missing-color-set",
            Code::EmptyColorSet => "empty-color-set",
            Code::UnknownColorSetOwner => "unknown-color-set-owner",
            Code::MissingModeSet => "missing-mode-set",
            Code::EmptyModeSet => "empty-mode-set",
            Code::UnknownModeSetOwner => "unknown-mode-set-owner",
            Code::MissingInscription => "missing-inscription",
            Code::ExtraInscription => "extra-inscription",
            Code::InscriptionNotTotal => "inscription-not-total",
            Code::InscriptionUnknownMode => "inscription-unknown-mode",
            Code::ColorOutsidePlace => "color-outside-place",
            Code::MissingComponent => "missing-component",
            Code::ComponentOutOfRange => "component-out-of-range",
            Code::BaseSquare => "base-square",
            Code::SpanSquare => "span-square",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which leg of a transition a square check concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Source,
    Target,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Source => "source",
            Side::Target => "target",
        })
    }
}

/// A single report entry. The optional fields locate the violation; `detail`
/// is human-readable and, for square failures, carries expected/actual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub code: Code,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub place: Option<Place>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transition: Option<Transition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
    pub detail: String,
}

impl Issue {
    pub fn new(code: Code, detail: impl Into<String>) -> Self {
        Issue {
            code,
            place: None,
            transition: None,
            mode: None,
            side: None,
            expected: None,
            actual: None,
            detail: detail.into(),
        }
    }

    pub fn place(mut self, p: &Place) -> Self {
        self.place = Some(p.clone());
        self
    }

    pub fn transition(mut self, t: &Transition) -> Self {
        self.transition = Some(t.clone());
        self
    }

    pub fn mode(mut self, k: &Mode) -> Self {
        self.mode = Some(k.clone());
        self
    }

    pub fn side(mut self, side: Side) -> Self {
        self.side = Some(side);
        self
    }

    pub fn mismatch(mut self, expected: impl fmt::Display, actual: impl fmt::Display) -> Self {
        self.expected = Some(expected.to_string());
        self.actual = Some(actual.to_string());
        self
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.code)?;
        if let Some(p) = &self.place {
            write!(f, " place={p}")?;
        }
        if let Some(t) = &self.transition {
            write!(f, " transition={t}")?;
        }
        if let Some(k) = &self.mode {
            write!(f, " mode={k}")?;
        }
        if let Some(s) = &self.side {
            write!(f, " side={s}")?;
        }
        write!(f, ": {}", self.detail)?;
        if let (Some(e), Some(a)) = (&self.expected, &self.actual) {
            write!(f, " (expected {e}, actual {a})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub issues: Vec<Issue>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, issue: Issue) {
        self.issues.push(issue);
    }

    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn len(&self) -> usize {
        self.issues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn codes(&self) -> Vec<Code> {
        self.issues.iter().map(|i| i.code).collect()
    }

    pub fn extend(&mut self, other: Report) {
        self.issues.extend(other.issues);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}
