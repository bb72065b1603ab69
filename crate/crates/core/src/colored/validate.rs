use std::collections::{BTreeMap, BTreeSet};

use super::{ColoredPetriNet, Inscription};
use crate::ids::{Place, Transition};
use crate::report::{Code, Issue, Report, Side};

/// Checks every structural invariant of a colored net. One issue is reported
/// per violation; an empty report means the net is well-formed.
pub fn validate_colored_net(net: &ColoredPetriNet) -> Report {
    let mut report = net.base.validate();
    let places = net.base.places();

    for p in places {
        match net.place_colors.get(p) {
            None => report.push(Issue::new(Code::MissingColorSet, format!("place {p} has no color set")).place(p)),
            Some(c) if c.is_empty() => {
                report.push(Issue::new(Code::EmptyColorSet, format!("place {p} has an empty color set")).place(p))
            }
            Some(_) => {}
        }
    }
    for p in net.place_colors.keys().filter(|p| !places.contains(*p)) {
        report.push(
            Issue::new(
                Code::UnknownColorSetOwner,
                format!("color set declared for undeclared place {p}"),
            )
            .place(p),
        );
    }

    for t in net.base.transition_ids() {
        match net.transition_modes.get(t) {
            None => {
                report.push(Issue::new(Code::MissingModeSet, format!("transition {t} has no mode set")).transition(t))
            }
            Some(m) if m.is_empty() => report
                .push(Issue::new(Code::EmptyModeSet, format!("transition {t} has an empty mode set")).transition(t)),
            Some(_) => {}
        }
    }
    for t in net.transition_modes.keys().filter(|t| !net.base.has_transition(t)) {
        report.push(
            Issue::new(
                Code::UnknownModeSetOwner,
                format!("mode set declared for undeclared transition {t}"),
            )
            .transition(t),
        );
    }

    for (t, arcs) in net.base.transitions() {
        for (side, leg) in [(Side::Source, &arcs.source), (Side::Target, &arcs.target)] {
            for (p, n) in leg.iter() {
                if n > 1 {
                    report.push(
                        Issue::new(
                            Code::ArcMultiplicity,
                            format!("{side} of {t} has coefficient {n} on {p}; colored base nets are set-like"),
                        )
                        .transition(t)
                        .place(p)
                        .side(side),
                    );
                }
            }
        }
    }

    check_arc_inscriptions(net, Side::Source, &net.inputs, &mut report);
    check_arc_inscriptions(net, Side::Target, &net.outputs, &mut report);
    report
}

fn check_arc_inscriptions(
    net: &ColoredPetriNet,
    side: Side,
    inscriptions: &BTreeMap<Transition, BTreeMap<Place, Inscription>>,
    report: &mut Report,
) {
    let empty = BTreeMap::new();
    let arc = |p: &Place, t: &Transition| match side {
        Side::Source => format!("({p}, {t})"),
        Side::Target => format!("({t}, {p})"),
    };

    for (t, arcs) in net.base.transitions() {
        let leg = match side {
            Side::Source => &arcs.source,
            Side::Target => &arcs.target,
        };
        let given = inscriptions.get(t).unwrap_or(&empty);
        for p in leg.support() {
            if !given.contains_key(p) {
                report.push(
                    Issue::new(
                        Code::MissingInscription,
                        format!("arc {} has no inscription", arc(p, t)),
                    )
                    .transition(t)
                    .place(p)
                    .side(side),
                );
            }
        }
    }

    for (t, per_place) in inscriptions {
        let leg: BTreeSet<&Place> = match net.base.arcs(t) {
            Some(a) => match side {
                Side::Source => a.source.support().collect(),
                Side::Target => a.target.support().collect(),
            },
            None => BTreeSet::new(),
        };
        for (p, inscription) in per_place {
            if !leg.contains(p) {
                report.push(
                    Issue::new(
                        Code::ExtraInscription,
                        format!("inscription on {}, which is not an arc", arc(p, t)),
                    )
                    .transition(t)
                    .place(p)
                    .side(side),
                );
                continue;
            }
            if let Some(modes) = net.transition_modes.get(t) {
                for k in modes {
                    if inscription.get(k).is_none() {
                        report.push(
                            Issue::new(
                                Code::InscriptionNotTotal,
                                format!("inscription on {} has no value for mode {k}", arc(p, t)),
                            )
                            .transition(t)
                            .place(p)
                            .mode(k)
                            .side(side),
                        );
                    }
                }
                for k in inscription.domain().filter(|k| !modes.contains(*k)) {
                    report.push(
                        Issue::new(
                            Code::InscriptionUnknownMode,
                            format!("inscription on {} assigns undeclared mode {k}", arc(p, t)),
                        )
                        .transition(t)
                        .place(p)
                        .mode(k)
                        .side(side),
                    );
                }
            }
            if let Some(colors) = net.place_colors.get(p) {
                for (k, image) in inscription.iter() {
                    for x in image.support().filter(|x| !colors.contains(*x)) {
                        report.push(
                            Issue::new(
                                Code::ColorOutsidePlace,
                                format!(
                                    "inscription on {} sends mode {k} to color {x}, not a color of {p}",
                                    arc(p, t)
                                ),
                            )
                            .transition(t)
                            .place(p)
                            .mode(k)
                            .side(side),
                        );
                    }
                }
            }
        }
    }
}
