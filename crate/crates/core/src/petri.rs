//! Ordinary place/transition nets: the token game, bounded enumeration and
//! net morphisms.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ids::{Place, Transition};
use crate::multiset::Multiset;
use crate::report::{Code, Issue, Report, Side};
use crate::system::{enabled_steps, Budget, StepSystem};

pub type Marking = Multiset<Place>;
pub type Step = Multiset<Transition>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arcs {
    pub source: Multiset<Place>,
    pub target: Multiset<Place>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PetriNet {
    places: BTreeSet<Place>,
    transitions: BTreeMap<Transition, Arcs>,
}

impl PetriNet {
    /// Builds a net, rejecting duplicate identifiers and arcs to undeclared
    /// places.
    pub fn new(
        places: impl IntoIterator<Item = Place>,
        transitions: impl IntoIterator<Item = (Transition, Multiset<Place>, Multiset<Place>)>,
    ) -> Result<Self> {
        let mut report = Report::new();
        let mut place_set = BTreeSet::new();
        for p in places {
            if !place_set.insert(p.clone()) {
                report.push(Issue::new(Code::DuplicateIdentifier, format!("place {p} declared twice")).place(&p));
            }
        }
        let mut map = BTreeMap::new();
        for (t, source, target) in transitions {
            if map.contains_key(&t) {
                report.push(
                    Issue::new(Code::DuplicateIdentifier, format!("transition {t} declared twice")).transition(&t),
                );
                continue;
            }
            map.insert(t, Arcs { source, target });
        }
        let net = PetriNet {
            places: place_set,
            transitions: map,
        };
        report.extend(net.validate());
        if report.is_valid() {
            Ok(net)
        } else {
            Err(Error::ValidationFailed(report))
        }
    }

    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        for (t, arcs) in &self.transitions {
            for (side, ms) in [(Side::Source, &arcs.source), (Side::Target, &arcs.target)] {
                for p in ms.support() {
                    if !self.places.contains(p) {
                        report.push(
                            Issue::new(
                                Code::UndeclaredPlace,
                                format!("transition {t} {side} mentions undeclared place {p}"),
                            )
                            .transition(t)
                            .place(p)
                            .side(side),
                        );
                    }
                }
            }
        }
        report
    }

    pub fn places(&self) -> &BTreeSet<Place> {
        &self.places
    }

    pub fn transitions(&self) -> impl Iterator<Item = (&Transition, &Arcs)> + '_ {
        self.transitions.iter()
    }

    pub fn transition_ids(&self) -> impl Iterator<Item = &Transition> + '_ {
        self.transitions.keys()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn arcs(&self, t: &Transition) -> Option<&Arcs> {
        self.transitions.get(t)
    }

    pub fn has_transition(&self, t: &Transition) -> bool {
        self.transitions.contains_key(t)
    }

    /// The same net with one transition removed.
    pub fn without_transition(&self, t: &Transition) -> PetriNet {
        let mut out = self.clone();
        out.transitions.remove(t);
        out
    }

    pub fn check_marking(&self, m: &Marking) -> Result<()> {
        m.check_domain(&self.places, "place")
    }

    pub fn check_step(&self, step: &Step) -> Result<()> {
        match step.support().find(|t| !self.transitions.contains_key(*t)) {
            Some(t) => Err(Error::Domain(format!("{t} is not a declared transition"))),
            None => Ok(()),
        }
    }

    /// `sum fires(t) * source(t)`.
    pub fn consumed(&self, step: &Step) -> Result<Marking> {
        self.weighted_sum(step, |a| &a.source)
    }

    /// `sum fires(t) * target(t)`.
    pub fn produced(&self, step: &Step) -> Result<Marking> {
        self.weighted_sum(step, |a| &a.target)
    }

    fn weighted_sum(&self, step: &Step, leg: impl Fn(&Arcs) -> &Multiset<Place>) -> Result<Marking> {
        let mut out = Marking::new();
        for (t, n) in step.iter() {
            let arcs = self
                .transitions
                .get(t)
                .ok_or_else(|| Error::Domain(format!("{t} is not a declared transition")))?;
            out = out.checked_add(&leg(arcs).checked_scale(n)?)?;
        }
        Ok(out)
    }
}

pub fn enabled(net: &PetriNet, m: &Marking, step: &Step) -> Result<bool> {
    net.check_marking(m)?;
    net.check_step(step)?;
    Ok(net.consumed(step)?.is_sub_multiset(m))
}

pub fn fire(net: &PetriNet, m: &Marking, step: &Step) -> Result<Marking> {
    if !enabled(net, m, step)? {
        return Err(Error::NotEnabled {
            step: step.to_string(),
            marking: m.to_string(),
        });
    }
    m.checked_sub(&net.consumed(step)?)?.checked_add(&net.produced(step)?)
}

impl StepSystem for PetriNet {
    type Action = Transition;
    type State = Marking;

    fn actions(&self) -> Vec<Transition> {
        self.transitions.keys().cloned().collect()
    }

    fn check_state(&self, state: &Marking) -> Result<()> {
        self.check_marking(state)
    }

    fn step_enabled(&self, state: &Marking, step: &Step) -> Result<bool> {
        enabled(self, state, step)
    }

    fn step_fire(&self, state: &Marking, step: &Step) -> Result<Marking> {
        fire(self, state, step)
    }

    fn combine(&self, a: &Marking, b: &Marking) -> Result<Marking> {
        self.check_marking(a)?;
        self.check_marking(b)?;
        a.checked_add(b)
    }

    fn token_count(&self, state: &Marking) -> u64 {
        state.size()
    }
}

/// All sequences of non-empty enabled steps with at most `max_len` steps, each
/// of total multiplicity at most `max_step_size`, together with the marking
/// they reach. The empty sequence is included.
pub fn enumerate_firing_sequences(
    net: &PetriNet,
    m0: &Marking,
    max_len: usize,
    max_step_size: usize,
    node_budget: usize,
) -> Result<Vec<(Vec<Step>, Marking)>> {
    net.check_marking(m0)?;
    let mut budget = Budget::new(node_budget);
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    walk(net, m0, max_len, max_step_size, &mut budget, &mut prefix, &mut out)?;
    out.sort_by_cached_key(|(seq, _)| seq.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    Ok(out)
}

fn walk(
    net: &PetriNet,
    m: &Marking,
    room: usize,
    max_step_size: usize,
    budget: &mut Budget,
    prefix: &mut Vec<Step>,
    out: &mut Vec<(Vec<Step>, Marking)>,
) -> Result<()> {
    budget.spend()?;
    out.push((prefix.clone(), m.clone()));
    if room == 0 {
        return Ok(());
    }
    for step in enabled_steps(net, m, max_step_size)? {
        let next = fire(net, m, &step)?;
        prefix.push(step);
        walk(net, &next, room - 1, max_step_size, budget, prefix, out)?;
        prefix.pop();
    }
    Ok(())
}

/// Breadth-first closure of `m0` under single-transition firings, pruning
/// markings holding more than `token_bound` tokens.
pub fn reachable(net: &PetriNet, m0: &Marking, token_bound: u64, node_budget: usize) -> Result<BTreeSet<Marking>> {
    net.check_marking(m0)?;
    if m0.size() > token_bound {
        return Err(Error::InvalidArgument(format!(
            "token bound {token_bound} is below the {} tokens of the initial marking",
            m0.size()
        )));
    }
    let mut budget = Budget::new(node_budget);
    let mut seen = BTreeSet::from([m0.clone()]);
    let mut queue = VecDeque::from([m0.clone()]);
    while let Some(m) = queue.pop_front() {
        budget.spend()?;
        for t in net.transitions.keys() {
            let step = Step::singleton(t.clone(), 1);
            if !enabled(net, &m, &step)? {
                continue;
            }
            let next = fire(net, &m, &step)?;
            if next.size() <= token_bound && !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// A morphism of nets: a function on transitions and a function on places.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct NetMorphism {
    pub transitions: BTreeMap<Transition, Transition>,
    pub places: BTreeMap<Place, Place>,
}

impl NetMorphism {
    pub fn identity(net: &PetriNet) -> Self {
        NetMorphism {
            transitions: net.transition_ids().map(|t| (t.clone(), t.clone())).collect(),
            places: net.places().iter().map(|p| (p.clone(), p.clone())).collect(),
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &NetMorphism) -> Result<NetMorphism> {
        let transitions = self
            .transitions
            .iter()
            .map(|(t, u)| {
                next.transitions
                    .get(u)
                    .map(|v| (t.clone(), v.clone()))
                    .ok_or_else(|| Error::Domain(format!("{u} has no image under the second morphism")))
            })
            .collect::<Result<_>>()?;
        let places = self
            .places
            .iter()
            .map(|(p, q)| {
                next.places
                    .get(q)
                    .map(|r| (p.clone(), r.clone()))
                    .ok_or_else(|| Error::Domain(format!("{q} has no image under the second morphism")))
            })
            .collect::<Result<_>>()?;
        Ok(NetMorphism { transitions, places })
    }

    pub fn map_marking(&self, m: &Marking) -> Result<Marking> {
        let mut out = Marking::new();
        for (p, n) in m.iter() {
            let q = self
                .places
                .get(p)
                .ok_or_else(|| Error::Domain(format!("{p} has no image under the morphism")))?;
            out.insert(q.clone(), n)?;
        }
        Ok(out)
    }

    pub fn map_step(&self, step: &Step) -> Result<Step> {
        let mut out = Step::new();
        for (t, n) in step.iter() {
            let u = self
                .transitions
                .get(t)
                .ok_or_else(|| Error::Domain(format!("{t} has no image under the morphism")))?;
            out.insert(u.clone(), n)?;
        }
        Ok(out)
    }
}

/// Checks that `phi` is total and that both squares commute for every
/// transition. An empty report means the morphism is valid.
pub fn check_net_morphism(from: &PetriNet, to: &PetriNet, phi: &NetMorphism) -> Report {
    let mut report = Report::new();
    for p in from.places() {
        match phi.places.get(p) {
            None => report.push(Issue::new(Code::MissingComponent, format!("place {p} has no image")).place(p)),
            Some(q) if !to.places().contains(q) => report.push(
                Issue::new(
                    Code::ComponentOutOfRange,
                    format!("place {p} maps to undeclared place {q}"),
                )
                .place(p),
            ),
            Some(_) => {}
        }
    }
    for t in from.transition_ids() {
        match phi.transitions.get(t) {
            None => {
                report.push(Issue::new(Code::MissingComponent, format!("transition {t} has no image")).transition(t))
            }
            Some(u) if !to.has_transition(u) => report.push(
                Issue::new(
                    Code::ComponentOutOfRange,
                    format!("transition {t} maps to undeclared transition {u}"),
                )
                .transition(t),
            ),
            Some(_) => {}
        }
    }
    if !report.is_valid() {
        return report;
    }
    for (t, arcs) in from.transitions() {
        let image = &to.transitions[&phi.transitions[t]];
        for (side, here, there) in [
            (Side::Source, &arcs.source, &image.source),
            (Side::Target, &arcs.target, &image.target),
        ] {
            // totality was checked above
            let actual = phi.map_marking(here).expect("place map is total");
            if &actual != there {
                report.push(
                    Issue::new(Code::BaseSquare, format!("{side} square of {t} does not commute"))
                        .transition(t)
                        .side(side)
                        .mismatch(there, &actual),
                );
            }
        }
    }
    report
}
