//! Morphisms of colored nets: a net morphism of the base nets plus, for every
//! place and transition, a generator map between color (mode) sets such that
//! each transition's input and output spans commute.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{ColoredMarking, ColoredPetriNet, ColoredStep};
use crate::error::{Error, Result};
use crate::ids::{Binding, Color, Mode, Place, Transition};
use crate::multiset::{GeneratorMap, Multiset};
use crate::petri::{check_net_morphism, NetMorphism};
use crate::report::{Code, Issue, Report, Side};

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ColoredMorphism {
    pub base: NetMorphism,
    pub alpha_places: BTreeMap<Place, GeneratorMap<Color, Color>>,
    pub alpha_transitions: BTreeMap<Transition, GeneratorMap<Mode, Mode>>,
}

impl ColoredMorphism {
    pub fn identity(net: &ColoredPetriNet) -> Self {
        ColoredMorphism {
            base: NetMorphism::identity(&net.base),
            alpha_places: net
                .place_colors
                .iter()
                .map(|(p, colors)| (p.clone(), GeneratorMap::identity(colors)))
                .collect(),
            alpha_transitions: net
                .transition_modes
                .iter()
                .map(|(t, modes)| (t.clone(), GeneratorMap::identity(modes)))
                .collect(),
        }
    }

    /// `next ∘ self`, composing each component separately.
    pub fn then(&self, next: &ColoredMorphism) -> Result<ColoredMorphism> {
        let base = self.base.then(&next.base)?;
        let mut alpha_places = BTreeMap::new();
        for (p, alpha) in &self.alpha_places {
            let q = self.place_image(p)?;
            let beta = next
                .alpha_places
                .get(q)
                .ok_or_else(|| Error::Domain(format!("second morphism has no color map for {q}")))?;
            alpha_places.insert(p.clone(), alpha.then(beta)?);
        }
        let mut alpha_transitions = BTreeMap::new();
        for (t, alpha) in &self.alpha_transitions {
            let u = self.transition_image(t)?;
            let beta = next
                .alpha_transitions
                .get(u)
                .ok_or_else(|| Error::Domain(format!("second morphism has no mode map for {u}")))?;
            alpha_transitions.insert(t.clone(), alpha.then(beta)?);
        }
        Ok(ColoredMorphism {
            base,
            alpha_places,
            alpha_transitions,
        })
    }

    fn place_image(&self, p: &Place) -> Result<&Place> {
        self.base
            .places
            .get(p)
            .ok_or_else(|| Error::Domain(format!("{p} has no image under the morphism")))
    }

    fn transition_image(&self, t: &Transition) -> Result<&Transition> {
        self.base
            .transitions
            .get(t)
            .ok_or_else(|| Error::Domain(format!("{t} has no image under the morphism")))
    }

    /// Applies the color maps placewise and reindexes along the place map.
    pub fn map_marking(&self, cm: &ColoredMarking) -> Result<ColoredMarking> {
        let mut out = ColoredMarking::new();
        for (p, colors) in cm.iter() {
            let alpha = self
                .alpha_places
                .get(p)
                .ok_or_else(|| Error::Domain(format!("no color map for {p}")))?;
            out.add_to(self.place_image(p)?, &alpha.apply(colors)?)?;
        }
        Ok(out)
    }

    /// Sends `(t, k)` to `(f(t), k')` for every `k'` in the mode image of `k`.
    pub fn map_step(&self, step: &ColoredStep) -> Result<ColoredStep> {
        let mut out = ColoredStep::new();
        for (b, n) in step.iter() {
            let u = self.transition_image(&b.transition)?;
            let alpha = self
                .alpha_transitions
                .get(&b.transition)
                .ok_or_else(|| Error::Domain(format!("no mode map for {}", b.transition)))?;
            let modes = alpha.apply(&Multiset::singleton(b.mode.clone(), 1))?;
            for (k, m) in modes.iter() {
                out.insert(
                    Binding::new(u.clone(), k.clone()),
                    m.checked_mul(n).ok_or(Error::Overflow)?,
                )?;
            }
        }
        Ok(out)
    }
}

/// Validates `psi` as a morphism `from -> to`.
///
/// Totality and range problems and base-square failures are reported first;
/// span squares are only checked once those are clean, since they are not
/// well-typed otherwise.
pub fn check_colored_morphism(from: &ColoredPetriNet, to: &ColoredPetriNet, psi: &ColoredMorphism) -> Report {
    let mut report = check_net_morphism(&from.base, &to.base, &psi.base);

    for (p, colors) in &from.place_colors {
        let Some(alpha) = psi.alpha_places.get(p) else {
            report.push(Issue::new(Code::MissingComponent, format!("place {p} has no color map")).place(p));
            continue;
        };
        for x in colors {
            if alpha.get(x).is_none() {
                report.push(
                    Issue::new(Code::MissingComponent, format!("color map of {p} has no value for {x}")).place(p),
                );
            }
        }
        for x in alpha.domain().filter(|x| !colors.contains(*x)) {
            report.push(
                Issue::new(
                    Code::ComponentOutOfRange,
                    format!("color map of {p} assigns undeclared color {x}"),
                )
                .place(p),
            );
        }
        let Some(target_colors) = psi.base.places.get(p).and_then(|q| to.place_colors.get(q)) else {
            continue;
        };
        for (x, image) in alpha.iter() {
            for y in image.support().filter(|y| !target_colors.contains(*y)) {
                report.push(
                    Issue::new(
                        Code::ComponentOutOfRange,
                        format!(
                            "color map of {p} sends {x} to {y}, not a color of {}",
                            psi.base.places[p]
                        ),
                    )
                    .place(p),
                );
            }
        }
    }

    for (t, modes) in &from.transition_modes {
        let Some(alpha) = psi.alpha_transitions.get(t) else {
            report.push(Issue::new(Code::MissingComponent, format!("transition {t} has no mode map")).transition(t));
            continue;
        };
        for k in modes {
            if alpha.get(k).is_none() {
                report.push(
                    Issue::new(Code::MissingComponent, format!("mode map of {t} has no value for {k}"))
                        .transition(t)
                        .mode(k),
                );
            }
        }
        for k in alpha.domain().filter(|k| !modes.contains(*k)) {
            report.push(
                Issue::new(
                    Code::ComponentOutOfRange,
                    format!("mode map of {t} assigns undeclared mode {k}"),
                )
                .transition(t)
                .mode(k),
            );
        }
        let Some(target_modes) = psi.base.transitions.get(t).and_then(|u| to.transition_modes.get(u)) else {
            continue;
        };
        for (k, image) in alpha.iter() {
            for k2 in image.support().filter(|k2| !target_modes.contains(*k2)) {
                report.push(
                    Issue::new(
                        Code::ComponentOutOfRange,
                        format!(
                            "mode map of {t} sends {k} to {k2}, not a mode of {}",
                            psi.base.transitions[t]
                        ),
                    )
                    .transition(t)
                    .mode(k),
                );
            }
        }
    }

    if !report.is_valid() {
        return report;
    }

    for (t, modes) in &from.transition_modes {
        for k in modes {
            let b = Binding::new(t.clone(), k.clone());
            let here = ColoredStep::singleton(b.clone(), 1);
            let squares = (|| -> Result<_> {
                let (consumed, produced) = from.binding_effect(&b)?;
                let (consumed_there, produced_there) = to.step_effect(&psi.map_step(&here)?)?;
                Ok([
                    (Side::Source, consumed_there, psi.map_marking(&consumed)?),
                    (Side::Target, produced_there, psi.map_marking(&produced)?),
                ])
            })();
            match squares {
                Ok(squares) => {
                    for (side, expected, actual) in squares {
                        if expected != actual {
                            report.push(
                                Issue::new(Code::SpanSquare, format!("{side} span square of {b} does not commute"))
                                    .transition(t)
                                    .mode(k)
                                    .side(side)
                                    .mismatch(&expected, &actual),
                            );
                        }
                    }
                }
                Err(e) => report.push(
                    Issue::new(
                        Code::SpanSquare,
                        format!("span squares of {b} cannot be evaluated: {e}"),
                    )
                    .transition(t)
                    .mode(k),
                ),
            }
        }
    }
    report
}
