//! Text formats, the bundled fixtures and the random net generator.

mod document;
mod generate;
pub mod syntax;

pub use document::{
    emit_document, emit_morphism, parse_colored_marking, parse_document, parse_marking, parse_morphism,
    MorphismDocument, NetDocument,
};
pub use generate::{random_colored_marking, random_colored_net, GeneratorConfig};

use crate::colored::{ColoredMarking, ColoredPetriNet};

/// The vending machine: one `buy` transition whose modes pick a product and
/// the change to return for the coins consumed.
pub const VENDING: &str = include_str!("../../fixtures/vending.cpn");

/// The vending machine plus a `reuse` transition feeding change back in as
/// coins, so that some firings genuinely depend on earlier ones.
pub const VENDING_REUSE: &str = include_str!("../../fixtures/vending-reuse.cpn");

fn colored_fixture(text: &str) -> (ColoredPetriNet, ColoredMarking) {
    match parse_document(text).expect("bundled fixture parses") {
        NetDocument::Colored { net, marking } => (net, marking.unwrap_or_default()),
        NetDocument::Ordinary { .. } => unreachable!("bundled fixtures are colored"),
    }
}

/// The vending net with its marking `coins-in {25c: 3, 50c: 2}`.
pub fn vending() -> (ColoredPetriNet, ColoredMarking) {
    colored_fixture(VENDING)
}

pub fn vending_reuse() -> (ColoredPetriNet, ColoredMarking) {
    colored_fixture(VENDING_REUSE)
}
