//! Colored Petri nets: a set-like base net decorated with a color set per
//! place, a mode set per transition and, per arc, an inscription sending each
//! mode of the transition to a multiset of the place's colors.
//!
//! There are no guard predicates. A mode whose inscriptions can never be
//! satisfied is simply never enabled.

mod morphism;
mod validate;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ids::{Binding, Color, Mode, Place, Transition};
use crate::multiset::{GeneratorMap, Multiset};
use crate::petri::PetriNet;
use crate::system::{Budget, StepSystem};

pub use morphism::{check_colored_morphism, ColoredMorphism};
pub use validate::validate_colored_net;

pub type ColoredStep = Multiset<Binding>;
pub type Inscription = GeneratorMap<Mode, Color>;

/// Raw colored-net data. Nothing here is checked on construction; run
/// [`validate_colored_net`] (the parser always does) before relying on the
/// invariants.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ColoredPetriNet {
    pub base: PetriNet,
    pub place_colors: BTreeMap<Place, BTreeSet<Color>>,
    pub transition_modes: BTreeMap<Transition, BTreeSet<Mode>>,
    /// Inscriptions on arcs `p -> t`, keyed by `t` then `p`.
    pub inputs: BTreeMap<Transition, BTreeMap<Place, Inscription>>,
    /// Inscriptions on arcs `t -> p`, keyed by `t` then `p`.
    pub outputs: BTreeMap<Transition, BTreeMap<Place, Inscription>>,
}

impl ColoredPetriNet {
    pub fn colors(&self, p: &Place) -> Option<&BTreeSet<Color>> {
        self.place_colors.get(p)
    }

    pub fn modes(&self, t: &Transition) -> Option<&BTreeSet<Mode>> {
        self.transition_modes.get(t)
    }

    /// Every well-formed binding in canonical order.
    pub fn bindings(&self) -> Vec<Binding> {
        self.transition_modes
            .iter()
            .flat_map(|(t, modes)| modes.iter().map(move |k| Binding::new(t.clone(), k.clone())))
            .collect()
    }

    pub fn check_binding(&self, b: &Binding) -> Result<()> {
        match self.transition_modes.get(&b.transition) {
            Some(modes) if modes.contains(&b.mode) => Ok(()),
            _ => Err(Error::UnknownBinding(b.to_string())),
        }
    }

    pub fn check_marking(&self, cm: &ColoredMarking) -> Result<()> {
        for (p, colors) in cm.iter() {
            let declared = self
                .place_colors
                .get(p)
                .ok_or_else(|| Error::Domain(format!("{p} is not a declared place")))?;
            colors.check_domain(declared, &format!("color of place {p}"))?;
        }
        Ok(())
    }

    pub fn check_step(&self, step: &ColoredStep) -> Result<()> {
        step.support().try_for_each(|b| self.check_binding(b))
    }

    /// Tokens consumed and produced by firing `b` once.
    pub fn binding_effect(&self, b: &Binding) -> Result<(ColoredMarking, ColoredMarking)> {
        self.check_binding(b)?;
        let single = Multiset::singleton(b.mode.clone(), 1);
        let leg = |arcs: Option<&BTreeMap<Place, Inscription>>| -> Result<ColoredMarking> {
            let mut out = ColoredMarking::new();
            for (p, inscription) in arcs.into_iter().flatten() {
                out.add_to(p, &inscription.apply(&single)?)?;
            }
            Ok(out)
        };
        Ok((
            leg(self.inputs.get(&b.transition))?,
            leg(self.outputs.get(&b.transition))?,
        ))
    }

    /// Total consumption and production of a step.
    pub fn step_effect(&self, step: &ColoredStep) -> Result<(ColoredMarking, ColoredMarking)> {
        let mut consumed = ColoredMarking::new();
        let mut produced = ColoredMarking::new();
        for (b, n) in step.iter() {
            let (c, p) = self.binding_effect(b)?;
            consumed = consumed.checked_add(&c.checked_scale(n)?)?;
            produced = produced.checked_add(&p.checked_scale(n)?)?;
        }
        Ok((consumed, produced))
    }
}

/// One multiset of colors per place. Places holding no tokens are not stored,
/// so equal markings are structurally equal.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ColoredMarking {
    per_place: BTreeMap<Place, Multiset<Color>>,
}

impl ColoredMarking {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_places(places: impl IntoIterator<Item = (Place, Multiset<Color>)>) -> Result<Self> {
        let mut out = ColoredMarking::new();
        for (p, colors) in places {
            out.add_to(&p, &colors)?;
        }
        Ok(out)
    }

    pub fn get(&self, p: &Place) -> Multiset<Color> {
        self.per_place.get(p).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, &Multiset<Color>)> + '_ {
        self.per_place.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.per_place.is_empty()
    }

    pub fn token_count(&self) -> u64 {
        self.per_place
            .values()
            .fold(0u64, |acc, m| acc.saturating_add(m.size()))
    }

    pub fn add_to(&mut self, p: &Place, colors: &Multiset<Color>) -> Result<()> {
        if colors.is_empty() {
            return Ok(());
        }
        let slot = self.per_place.entry(p.clone()).or_default();
        *slot = slot.checked_add(colors)?;
        Ok(())
    }

    pub fn checked_add(&self, other: &ColoredMarking) -> Result<ColoredMarking> {
        let mut out = self.clone();
        for (p, colors) in other.iter() {
            out.add_to(p, colors)?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &ColoredMarking) -> Result<ColoredMarking> {
        if !other.is_sub_marking(self) {
            return Err(Error::NotSubMultiset {
                minuend: self.to_string(),
                subtrahend: other.to_string(),
            });
        }
        let mut per_place = self.per_place.clone();
        for (p, colors) in other.iter() {
            let left = per_place[p].checked_sub(colors)?;
            if left.is_empty() {
                per_place.remove(p);
            } else {
                per_place.insert(p.clone(), left);
            }
        }
        Ok(ColoredMarking { per_place })
    }

    pub fn checked_scale(&self, factor: u64) -> Result<ColoredMarking> {
        if factor == 0 {
            return Ok(ColoredMarking::new());
        }
        let per_place = self
            .per_place
            .iter()
            .map(|(p, m)| Ok((p.clone(), m.checked_scale(factor)?)))
            .collect::<Result<_>>()?;
        Ok(ColoredMarking { per_place })
    }

    /// Placewise pointwise order.
    pub fn is_sub_marking(&self, other: &ColoredMarking) -> bool {
        self.per_place
            .iter()
            .all(|(p, m)| other.per_place.get(p).is_some_and(|o| m.is_sub_multiset(o)))
    }

    /// Renders every place of `net`, including empty ones.
    pub fn display_full(&self, net: &ColoredPetriNet) -> String {
        let parts: Vec<String> = net
            .place_colors
            .keys()
            .map(|p| format!("{p}: {}", self.get(p)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for ColoredMarking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (p, m)) in self.per_place.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}: {m}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ColoredMarking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The consumed and produced markings of a single binding.
pub fn binding_effect(net: &ColoredPetriNet, b: &Binding) -> Result<(ColoredMarking, ColoredMarking)> {
    net.binding_effect(b)
}

pub fn colored_enabled(net: &ColoredPetriNet, cm: &ColoredMarking, step: &ColoredStep) -> Result<bool> {
    net.check_marking(cm)?;
    let (consumed, _) = net.step_effect(step)?;
    Ok(consumed.is_sub_marking(cm))
}

pub fn colored_fire(net: &ColoredPetriNet, cm: &ColoredMarking, step: &ColoredStep) -> Result<ColoredMarking> {
    net.check_marking(cm)?;
    let (consumed, produced) = net.step_effect(step)?;
    if !consumed.is_sub_marking(cm) {
        return Err(Error::NotEnabled {
            step: step.to_string(),
            marking: cm.to_string(),
        });
    }
    cm.checked_sub(&consumed)?.checked_add(&produced)
}

/// Breadth-first closure of `cm0` under single-binding firings, pruning
/// markings with more than `token_bound` tokens in total.
pub fn colored_reachable(
    net: &ColoredPetriNet,
    cm0: &ColoredMarking,
    token_bound: u64,
    node_budget: usize,
) -> Result<BTreeSet<ColoredMarking>> {
    net.check_marking(cm0)?;
    if cm0.token_count() > token_bound {
        return Err(Error::InvalidArgument(format!(
            "token bound {token_bound} is below the {} tokens of the initial marking",
            cm0.token_count()
        )));
    }
    let effects = net
        .bindings()
        .into_iter()
        .map(|b| net.binding_effect(&b))
        .collect::<Result<Vec<_>>>()?;
    let mut budget = Budget::new(node_budget);
    let mut seen = BTreeSet::from([cm0.clone()]);
    let mut queue = VecDeque::from([cm0.clone()]);
    while let Some(cm) = queue.pop_front() {
        budget.spend()?;
        for (consumed, produced) in &effects {
            if !consumed.is_sub_marking(&cm) {
                continue;
            }
            let next = cm.checked_sub(consumed)?.checked_add(produced)?;
            if next.token_count() <= token_bound && !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

impl StepSystem for ColoredPetriNet {
    type Action = Binding;
    type State = ColoredMarking;

    fn actions(&self) -> Vec<Binding> {
        self.bindings()
    }

    fn check_state(&self, state: &ColoredMarking) -> Result<()> {
        self.check_marking(state)
    }

    fn step_enabled(&self, state: &ColoredMarking, step: &ColoredStep) -> Result<bool> {
        colored_enabled(self, state, step)
    }

    fn step_fire(&self, state: &ColoredMarking, step: &ColoredStep) -> Result<ColoredMarking> {
        colored_fire(self, state, step)
    }

    fn combine(&self, a: &ColoredMarking, b: &ColoredMarking) -> Result<ColoredMarking> {
        self.check_marking(a)?;
        self.check_marking(b)?;
        a.checked_add(b)
    }

    fn token_count(&self, state: &ColoredMarking) -> u64 {
        state.token_count()
    }
}
