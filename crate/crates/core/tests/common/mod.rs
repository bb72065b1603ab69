//! Brute-force oracles and random fixtures shared by the integration tests.
//! Nothing here calls the library's normalizer or step enumeration; only the
//! single-step token game (`step_enabled`, `step_fire`) is trusted.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use cpnet::colored::{ColoredMarking, ColoredMorphism, ColoredPetriNet, Inscription};
use cpnet::ids::{Color, Mode, Place, Transition};
use cpnet::multiset::{GeneratorMap, Multiset};
use cpnet::petri::PetriNet;
use cpnet::semantics::StepSequence;
use cpnet::system::StepSystem;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Layers<A> = Vec<Multiset<A>>;

pub fn ms<K: Ord + Clone + From<&'static str>>(pairs: &[(&'static str, u64)]) -> Multiset<K> {
    Multiset::from_counts(pairs.iter().map(|&(k, n)| (K::from(k), n))).unwrap()
}

pub fn cm(pairs: &[(&'static str, &[(&'static str, u64)])]) -> ColoredMarking {
    ColoredMarking::from_places(pairs.iter().map(|&(p, colors)| (Place::from(p), ms(colors)))).unwrap()
}

/// Every multiset over `actions` with total size exactly `size`.
fn multisets_of_size<A: Ord + Clone>(actions: &[A], size: usize) -> Vec<Multiset<A>> {
    if size == 0 {
        return vec![Multiset::new()];
    }
    let Some((first, rest)) = actions.split_first() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for n in 0..=size {
        for mut tail in multisets_of_size(rest, size - n) {
            if n > 0 {
                tail.insert(first.clone(), n as u64).unwrap();
            }
            out.push(tail);
        }
    }
    out
}

/// Non-empty steps of size at most `max` enabled at `state`, by plain
/// generate-and-test.
pub fn brute_enabled<S: StepSystem>(sys: &S, state: &S::State, max: usize) -> Vec<Multiset<S::Action>> {
    let actions = sys.actions();
    (1..=max)
        .flat_map(|k| multisets_of_size(&actions, k))
        .filter(|step| sys.step_enabled(state, step).unwrap())
        .collect()
}

fn state_before<S: StepSystem>(sys: &S, source: &S::State, layers: &[Multiset<S::Action>], i: usize) -> S::State {
    let mut m = source.clone();
    for layer in &layers[..i] {
        m = sys.step_fire(&m, layer).unwrap();
    }
    m
}

/// Every non-empty proper sub-multiset of `m`.
pub fn proper_parts<A: Ord + Clone>(m: &Multiset<A>) -> Vec<Multiset<A>> {
    let mut parts = vec![Multiset::new()];
    for (a, n) in m.iter() {
        let mut next = Vec::new();
        for part in &parts {
            for k in 0..=n {
                let mut p = part.clone();
                if k > 0 {
                    p.insert(a.clone(), k).unwrap();
                }
                next.push(p);
            }
        }
        parts = next;
    }
    parts.retain(|p| !p.is_empty() && p != m);
    parts
}

/// The interchange class of a layering: closure under merging two adjacent
/// layers whose union is enabled where the first stands, and splitting a
/// layer into two consecutive non-empty layers. Empty layers are dropped.
pub fn rewrite_closure<S: StepSystem>(
    sys: &S,
    source: &S::State,
    layers: &[Multiset<S::Action>],
    limit: usize,
) -> HashSet<Layers<S::Action>> {
    let start: Layers<S::Action> = layers.iter().filter(|l| !l.is_empty()).cloned().collect();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        assert!(seen.len() <= limit, "rewrite closure exceeded {limit} layerings");
        let mut neighbours = Vec::new();
        for i in 0..cur.len() {
            for part in proper_parts(&cur[i]) {
                let rest = cur[i].checked_sub(&part).unwrap();
                let mut v = cur.clone();
                v.splice(i..=i, [part, rest]);
                neighbours.push(v);
            }
            if i + 1 < cur.len() {
                let union = cur[i].checked_add(&cur[i + 1]).unwrap();
                if sys.step_enabled(&state_before(sys, source, &cur, i), &union).unwrap() {
                    let mut v = cur.clone();
                    v.splice(i..=i + 1, [union]);
                    neighbours.push(v);
                }
            }
        }
        for v in neighbours {
            if seen.insert(v.clone()) {
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Every layering from `source` with between 1 and `max_layers` non-empty
/// layers and total content size at most `max_content`.
pub fn raw_layerings<S: StepSystem>(
    sys: &S,
    source: &S::State,
    max_layers: usize,
    max_content: usize,
) -> Vec<Layers<S::Action>> {
    fn go<S: StepSystem>(
        sys: &S,
        state: &S::State,
        room: usize,
        content: usize,
        prefix: &mut Layers<S::Action>,
        out: &mut Vec<Layers<S::Action>>,
    ) {
        if room == 0 || content == 0 {
            return;
        }
        for step in brute_enabled(sys, state, content) {
            let next = sys.step_fire(state, &step).unwrap();
            let size = step.size() as usize;
            prefix.push(step);
            out.push(prefix.clone());
            go(sys, &next, room - 1, content - size, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(sys, source, max_layers, max_content, &mut Vec::new(), &mut out);
    out
}

/// Partitions layerings into interchange classes, returning a class id per
/// layering and the number of classes.
pub fn classify<S: StepSystem>(
    sys: &S,
    source: &S::State,
    layerings: &[Layers<S::Action>],
) -> (HashMap<Layers<S::Action>, usize>, usize) {
    let mut class_of = HashMap::new();
    let mut classes = 0;
    for l in layerings {
        if class_of.contains_key(l) {
            continue;
        }
        for member in rewrite_closure(sys, source, l, 200_000) {
            class_of.insert(member, classes);
        }
        classes += 1;
    }
    class_of.retain(|k, _| layerings.contains(k));
    (class_of, classes)
}

/// A random walk of up to `max_len` layers, each a uniformly chosen enabled
/// step of size at most `max_step`.
pub fn random_layers<S: StepSystem>(
    sys: &S,
    source: &S::State,
    max_len: usize,
    max_step: usize,
    rng: &mut ChaCha8Rng,
) -> (Layers<S::Action>, S::State) {
    let len = rng.gen_range(0..=max_len);
    let mut m = source.clone();
    let mut layers = Vec::new();
    for _ in 0..len {
        let steps = brute_enabled(sys, &m, max_step);
        let Some(step) = steps.choose(rng) else { break };
        m = sys.step_fire(&m, step).unwrap();
        layers.push(step.clone());
    }
    (layers, m)
}

pub fn random_sequence<S: StepSystem>(
    sys: &S,
    source: &S::State,
    max_len: usize,
    max_step: usize,
    rng: &mut ChaCha8Rng,
) -> (StepSequence<S::State, S::Action>, S::State) {
    let (layers, target) = random_layers(sys, source, max_len, max_step, rng);
    (StepSequence::new(source.clone(), layers), target)
}

/// A net `K'` and a valid morphism `K -> K'`. Places and transitions are
/// renamed with `tag`, each place's colors are sent by a random function into
/// a fresh color set (possibly merging colors, possibly leaving some unused),
/// modes are renamed, and `K'`'s inscriptions are the images of `K`'s.
pub fn random_recoloring(net: &ColoredPetriNet, tag: &str, rng: &mut ChaCha8Rng) -> (ColoredPetriNet, ColoredMorphism) {
    let rp = |p: &Place| Place::new(format!("{p}.{tag}"));
    let rt = |t: &Transition| Transition::new(format!("{t}.{tag}"));
    let rk = |k: &Mode| Mode::new(format!("{k}.{tag}"));

    let mut psi = ColoredMorphism::default();
    let mut target = ColoredPetriNet::default();
    for (p, colors) in &net.place_colors {
        let n = rng.gen_range(1..=colors.len() + 1);
        let fresh: Vec<Color> = (0..n).map(|i| Color::new(format!("d{i}"))).collect();
        let mut alpha = GeneratorMap::new();
        for x in colors {
            alpha.assign(x.clone(), Multiset::singleton(fresh.choose(rng).unwrap().clone(), 1));
        }
        psi.base.places.insert(p.clone(), rp(p));
        psi.alpha_places.insert(p.clone(), alpha);
        target.place_colors.insert(rp(p), fresh.into_iter().collect());
    }
    let mut transitions = Vec::new();
    for (t, arcs) in net.base.transitions() {
        let modes = &net.transition_modes[t];
        psi.base.transitions.insert(t.clone(), rt(t));
        psi.alpha_transitions.insert(
            t.clone(),
            GeneratorMap::from_assignments(modes.iter().map(|k| (k.clone(), Multiset::singleton(rk(k), 1)))),
        );
        target
            .transition_modes
            .insert(rt(t), modes.iter().map(rk).collect::<BTreeSet<_>>());
        for (from, to) in [(&net.inputs, &mut target.inputs), (&net.outputs, &mut target.outputs)] {
            let Some(arcs) = from.get(t) else { continue };
            let mut mapped = BTreeMap::new();
            for (p, ins) in arcs {
                let alpha = &psi.alpha_places[p];
                let mut image = Inscription::new();
                for (k, colors) in ins.iter() {
                    image.assign(rk(k), alpha.apply(colors).unwrap());
                }
                mapped.insert(rp(p), image);
            }
            to.insert(rt(t), mapped);
        }
        transitions.push((
            rt(t),
            arcs.source.map_elements(rp).unwrap(),
            arcs.target.map_elements(rp).unwrap(),
        ));
    }
    target.base = PetriNet::new(target.place_colors.keys().cloned(), transitions).unwrap();
    (target, psi)
}
