//! Unfolding a colored net into an ordinary net whose places are
//! `(place, color)` pairs and whose transitions are `(transition, mode)`
//! pairs, together with the translations of markings, steps, sequences and
//! morphisms, and a bounded check that both sides have the same behavior.
//!
//! Pairs are encoded as `base⊙color`. The separator is rejected in colored-net
//! identifiers by the parser, so the encoding is injective and reversible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::colored::{
    colored_reachable, validate_colored_net, ColoredMarking, ColoredMorphism, ColoredPetriNet, ColoredStep,
};
use crate::error::{Error, Result};
use crate::ids::{Binding, Color, Mode, Place, Transition, SEPARATOR};
use crate::multiset::Multiset;
use crate::petri::{self, Marking, NetMorphism, PetriNet, Step};
use crate::semantics::{
    enumerate_step_sequences, foata_normalize, is_normal, ColoredSequence, FiringSequence, StepSequence,
};

pub fn unfolded_place(p: &Place, x: &Color) -> Place {
    Place::new(format!("{p}{SEPARATOR}{x}"))
}

pub fn unfolded_transition(t: &Transition, k: &Mode) -> Transition {
    Transition::new(format!("{t}{SEPARATOR}{k}"))
}

/// Splits an unfolded identifier back into its two components.
pub fn split_pair(id: &str) -> Option<(&str, &str)> {
    id.split_once(SEPARATOR)
}

/// The unfolded net. Fails with the validation report if `net` is malformed.
pub fn unfold_net(net: &ColoredPetriNet) -> Result<PetriNet> {
    let report = validate_colored_net(net);
    if !report.is_valid() {
        return Err(Error::ValidationFailed(report));
    }
    let places = net
        .place_colors
        .iter()
        .flat_map(|(p, colors)| colors.iter().map(move |x| unfolded_place(p, x)));
    let mut transitions = Vec::new();
    for b in net.bindings() {
        let (consumed, produced) = net.binding_effect(&b)?;
        transitions.push((
            unfolded_transition(&b.transition, &b.mode),
            marking_to_unfolded(net, &consumed)?,
            marking_to_unfolded(net, &produced)?,
        ));
    }
    PetriNet::new(places, transitions)
}

/// The net morphism between unfoldings induced by a colored morphism whose
/// color and mode maps send every generator to a single generator.
pub fn unfold_morphism(psi: &ColoredMorphism) -> Result<NetMorphism> {
    let mut out = NetMorphism::default();
    for (p, alpha) in &psi.alpha_places {
        let q = psi
            .base
            .places
            .get(p)
            .ok_or_else(|| Error::Domain(format!("{p} has no image under the morphism")))?;
        for x in alpha.domain() {
            let y = alpha.function_image(x).ok_or_else(|| {
                Error::NotFunctionLike(format!(
                    "color map of {p} sends {x} to {}",
                    alpha.get(x).expect("x is in the domain")
                ))
            })?;
            out.places.insert(unfolded_place(p, x), unfolded_place(q, y));
        }
    }
    for (t, alpha) in &psi.alpha_transitions {
        let u = psi
            .base
            .transitions
            .get(t)
            .ok_or_else(|| Error::Domain(format!("{t} has no image under the morphism")))?;
        for k in alpha.domain() {
            let k2 = alpha.function_image(k).ok_or_else(|| {
                Error::NotFunctionLike(format!(
                    "mode map of {t} sends {k} to {}",
                    alpha.get(k).expect("k is in the domain")
                ))
            })?;
            out.transitions
                .insert(unfolded_transition(t, k), unfolded_transition(u, k2));
        }
    }
    Ok(out)
}

/// Places each colored token `x` on `p` onto the unfolded place `(p, x)`.
pub fn marking_to_unfolded(net: &ColoredPetriNet, cm: &ColoredMarking) -> Result<Marking> {
    net.check_marking(cm)?;
    let mut out = Marking::new();
    for (p, colors) in cm.iter() {
        for (x, n) in colors.iter() {
            out.insert(unfolded_place(p, x), n)?;
        }
    }
    Ok(out)
}

/// Inverse of [`marking_to_unfolded`].
pub fn marking_from_unfolded(net: &ColoredPetriNet, m: &Marking) -> Result<ColoredMarking> {
    let mut out = ColoredMarking::new();
    for (pair, n) in m.iter() {
        let (p, x) =
            split_pair(pair.as_str()).ok_or_else(|| Error::Domain(format!("{pair} is not an unfolded place")))?;
        out.add_to(&Place::from(p), &Multiset::singleton(Color::from(x), n))?;
    }
    net.check_marking(&out)?;
    Ok(out)
}

pub fn step_to_unfolded(net: &ColoredPetriNet, step: &ColoredStep) -> Result<Step> {
    net.check_step(step)?;
    step.map_elements(|b| unfolded_transition(&b.transition, &b.mode))
}

pub fn step_from_unfolded(net: &ColoredPetriNet, step: &Step) -> Result<ColoredStep> {
    let mut out = ColoredStep::new();
    for (pair, n) in step.iter() {
        let (t, k) =
            split_pair(pair.as_str()).ok_or_else(|| Error::Domain(format!("{pair} is not an unfolded transition")))?;
        out.insert(Binding::new(t, k), n)?;
    }
    net.check_step(&out)?;
    Ok(out)
}

pub fn sequence_to_unfolded(net: &ColoredPetriNet, s: &ColoredSequence) -> Result<FiringSequence> {
    Ok(StepSequence::new(
        marking_to_unfolded(net, &s.source)?,
        s.layers
            .iter()
            .map(|l| step_to_unfolded(net, l))
            .collect::<Result<_>>()?,
    ))
}

pub fn sequence_from_unfolded(net: &ColoredPetriNet, s: &FiringSequence) -> Result<ColoredSequence> {
    Ok(StepSequence::new(
        marking_from_unfolded(net, &s.source)?,
        s.layers
            .iter()
            .map(|l| step_from_unfolded(net, l))
            .collect::<Result<_>>()?,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObjectCheck {
    pub colored_markings: usize,
    pub unfolded_markings: usize,
    pub bijective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LengthCount {
    pub length: usize,
    pub colored: usize,
    pub unfolded: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismCheck {
    pub per_length: Vec<LengthCount>,
    pub bijective: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CounterexampleKind {
    /// A reachable colored marking with no reachable unfolded counterpart.
    UnmatchedColoredMarking,
    UnmatchedUnfoldedMarking,
    /// A colored normal form that cannot be fired on the unfolded net.
    UntranslatableSequence,
    UnmatchedColoredSequence,
    UnmatchedUnfoldedSequence,
    /// Two colored normal forms with the same unfolded image.
    Collision,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub kind: CounterexampleKind,
    /// Number of layers, for sequence counterexamples.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    pub witness: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub object_check: ObjectCheck,
    pub morphism_check: MorphismCheck,
    pub counterexamples: Vec<Counterexample>,
}

impl IsoReport {
    pub fn holds(&self) -> bool {
        self.object_check.bijective && self.morphism_check.bijective && self.counterexamples.is_empty()
    }
}

impl fmt::Display for IsoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = &self.object_check;
        writeln!(
            f,
            "markings: colored {} unfolded {} bijective {}",
            o.colored_markings, o.unfolded_markings, o.bijective
        )?;
        for c in &self.morphism_check.per_length {
            writeln!(f, "length {}: colored {} unfolded {}", c.length, c.colored, c.unfolded)?;
        }
        writeln!(f, "sequences bijective {}", self.morphism_check.bijective)?;
        for c in &self.counterexamples {
            let kind = serde_json::to_value(c.kind).expect("enum serializes");
            let kind = kind.as_str().unwrap_or_default();
            match c.length {
                Some(n) => writeln!(f, "counterexample [{kind}] length {n}: {} ({})", c.witness, c.detail)?,
                None => writeln!(f, "counterexample [{kind}]: {} ({})", c.witness, c.detail)?,
            }
        }
        write!(
            f,
            "{}",
            if self.holds() {
                "isomorphism holds"
            } else {
                "isomorphism FAILS"
            }
        )
    }
}

/// Bounded check that the operational semantics of `net` and of its
/// unfolding agree, from `cm0`.
pub fn verify_unfolding_iso(
    net: &ColoredPetriNet,
    cm0: &ColoredMarking,
    max_len: usize,
    max_step_size: usize,
    token_bound: u64,
    node_budget: usize,
) -> Result<IsoReport> {
    let unfolded = unfold_net(net)?;
    verify_against(net, &unfolded, cm0, max_len, max_step_size, token_bound, node_budget)
}

/// Same as [`verify_unfolding_iso`], against a caller-supplied ordinary net in
/// place of the unfolding. Useful for falsification.
pub fn verify_against(
    net: &ColoredPetriNet,
    unfolded: &PetriNet,
    cm0: &ColoredMarking,
    max_len: usize,
    max_step_size: usize,
    token_bound: u64,
    node_budget: usize,
) -> Result<IsoReport> {
    let m0 = marking_to_unfolded(net, cm0)?;
    let mut counterexamples = Vec::new();

    // objects
    let colored_states = colored_reachable(net, cm0, token_bound, node_budget)?;
    let unfolded_states = petri::reachable(unfolded, &m0, token_bound, node_budget)?;
    let mut image = BTreeSet::new();
    let mut object_ok = true;
    for cm in &colored_states {
        let m = marking_to_unfolded(net, cm)?;
        if marking_from_unfolded(net, &m)? != *cm {
            object_ok = false;
        }
        if !image.insert(m.clone()) {
            object_ok = false;
        }
        if !unfolded_states.contains(&m) {
            counterexamples.push(Counterexample {
                kind: CounterexampleKind::UnmatchedColoredMarking,
                length: None,
                witness: cm.to_string(),
                detail: format!("translates to {m}, which is not reachable in the unfolding"),
            });
        }
    }
    for m in unfolded_states.difference(&image) {
        counterexamples.push(Counterexample {
            kind: CounterexampleKind::UnmatchedUnfoldedMarking,
            length: None,
            witness: m.to_string(),
            detail: "reachable in the unfolding but not the image of a reachable colored marking".into(),
        });
    }
    let object_check = ObjectCheck {
        colored_markings: colored_states.len(),
        unfolded_markings: unfolded_states.len(),
        bijective: object_ok && counterexamples.is_empty(),
    };
    let object_failures = counterexamples.len();

    // morphisms
    let colored_forms = enumerate_step_sequences(net, cm0, max_len, max_step_size, node_budget)?;
    let mut unfolded_forms = BTreeSet::new();
    for (steps, _) in petri::enumerate_firing_sequences(unfolded, &m0, max_len, max_step_size, node_budget)? {
        let s = StepSequence::new(m0.clone(), steps);
        if is_normal(unfolded, &s)? {
            unfolded_forms.insert(s);
        }
    }

    let mut images: BTreeMap<FiringSequence, ColoredSequence> = BTreeMap::new();
    for form in &colored_forms {
        let s = form.sequence();
        let translated = sequence_to_unfolded(net, s).and_then(|t| foata_normalize(unfolded, &t));
        let t = match translated {
            Ok(t) => t.into_sequence(),
            Err(e) => {
                counterexamples.push(Counterexample {
                    kind: CounterexampleKind::UntranslatableSequence,
                    length: Some(s.len()),
                    witness: format!("{s:?}"),
                    detail: e.to_string(),
                });
                continue;
            }
        };
        if !unfolded_forms.contains(&t) {
            counterexamples.push(Counterexample {
                kind: CounterexampleKind::UnmatchedColoredSequence,
                length: Some(s.len()),
                witness: format!("{s:?}"),
                detail: format!("image {t:?} is not a normal form of the unfolding within bounds"),
            });
        }
        if let Some(other) = images.insert(t.clone(), s.clone()) {
            counterexamples.push(Counterexample {
                kind: CounterexampleKind::Collision,
                length: Some(s.len()),
                witness: format!("{s:?}"),
                detail: format!("shares its image {t:?} with {other:?}"),
            });
        }
    }
    for u in unfolded_forms.iter().filter(|u| !images.contains_key(*u)) {
        counterexamples.push(Counterexample {
            kind: CounterexampleKind::UnmatchedUnfoldedSequence,
            length: Some(u.len()),
            witness: format!("{u:?}"),
            detail: "no colored normal form maps onto it".into(),
        });
    }

    let mut per_length: Vec<LengthCount> = (0..=max_len)
        .map(|length| LengthCount {
            length,
            colored: 0,
            unfolded: 0,
        })
        .collect();
    for f in &colored_forms {
        per_length[f.len()].colored += 1;
    }
    for u in &unfolded_forms {
        per_length[u.len()].unfolded += 1;
    }
    let morphism_check = MorphismCheck {
        bijective: counterexamples.len() == object_failures && per_length.iter().all(|c| c.colored == c.unfolded),
        per_length,
    };
    Ok(IsoReport {
        object_check,
        morphism_check,
        counterexamples,
    })
}
