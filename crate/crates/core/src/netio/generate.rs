//! Seeded random colored nets for property suites.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::colored::{ColoredMarking, ColoredPetriNet, Inscription};
use crate::error::{Error, Result};
use crate::ids::{Color, Mode, Place, Transition};
use crate::multiset::Multiset;
use crate::petri::PetriNet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub max_places: usize,
    pub max_transitions: usize,
    pub max_colors_per_place: usize,
    pub max_modes_per_transition: usize,
    pub max_inscription_size: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            max_places: 3,
            max_transitions: 3,
            max_colors_per_place: 3,
            max_modes_per_transition: 3,
            max_inscription_size: 2,
        }
    }
}

impl GeneratorConfig {
    pub fn with_seed(seed: u64) -> Self {
        GeneratorConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn check(&self) -> Result<()> {
        let bounds = [
            ("max-places", self.max_places as u64),
            ("max-transitions", self.max_transitions as u64),
            ("max-colors-per-place", self.max_colors_per_place as u64),
            ("max-modes-per-transition", self.max_modes_per_transition as u64),
            ("max-inscription-size", self.max_inscription_size),
        ];
        for (name, value) in bounds {
            if value == 0 {
                return Err(Error::InvalidArgument(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }
}

fn random_multiset<K: Ord + Clone>(rng: &mut ChaCha8Rng, pool: &[K], size: u64) -> Multiset<K> {
    let mut m = Multiset::new();
    for _ in 0..size {
        let k = pool[rng.gen_range(0..pool.len())].clone();
        m.insert(k, 1).expect("small counts");
    }
    m
}

/// Draws a valid colored net. Each place/transition pair is an input arc with
/// probability 1/2 and independently an output arc with probability 1/2; each
/// inscription image has a size uniform in `0..=max_inscription_size`, so both
/// dead and firing modes occur.
pub fn random_colored_net(cfg: &GeneratorConfig) -> Result<ColoredPetriNet> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n_places = rng.gen_range(1..=cfg.max_places);
    let n_transitions = rng.gen_range(1..=cfg.max_transitions);

    let mut place_colors = BTreeMap::new();
    let mut color_pools = Vec::new();
    for i in 0..n_places {
        let n = rng.gen_range(1..=cfg.max_colors_per_place);
        let pool: Vec<Color> = (0..n).map(|j| Color::new(format!("c{j}"))).collect();
        place_colors.insert(Place::new(format!("p{i}")), pool.iter().cloned().collect());
        color_pools.push(pool);
    }

    let mut transition_modes = BTreeMap::new();
    let mut inputs = BTreeMap::new();
    let mut outputs = BTreeMap::new();
    let mut transitions = Vec::new();
    for i in 0..n_transitions {
        let t = Transition::new(format!("t{i}"));
        let n = rng.gen_range(1..=cfg.max_modes_per_transition);
        let modes: BTreeSet<Mode> = (0..n).map(|j| Mode::new(format!("m{j}"))).collect();
        let mut source = Multiset::new();
        let mut target = Multiset::new();
        let mut ins: BTreeMap<Place, Inscription> = BTreeMap::new();
        let mut outs: BTreeMap<Place, Inscription> = BTreeMap::new();
        for (pi, pool) in color_pools.iter().enumerate() {
            let p = Place::new(format!("p{pi}"));
            for (arcs, map) in [(&mut source, &mut ins), (&mut target, &mut outs)] {
                if rng.gen_bool(0.5) {
                    arcs.insert(p.clone(), 1)?;
                    let mut inscription = Inscription::new();
                    for k in &modes {
                        let size = rng.gen_range(0..=cfg.max_inscription_size);
                        inscription.assign(k.clone(), random_multiset(&mut rng, pool, size));
                    }
                    map.insert(p.clone(), inscription);
                }
            }
        }
        if !ins.is_empty() {
            inputs.insert(t.clone(), ins);
        }
        if !outs.is_empty() {
            outputs.insert(t.clone(), outs);
        }
        transition_modes.insert(t.clone(), modes);
        transitions.push((t, source, target));
    }

    Ok(ColoredPetriNet {
        base: PetriNet::new(place_colors.keys().cloned(), transitions)?,
        place_colors,
        transition_modes,
        inputs,
        outputs,
    })
}

/// A random marking with at most `max_tokens` tokens in total.
pub fn random_colored_marking(net: &ColoredPetriNet, seed: u64, max_tokens: u64) -> ColoredMarking {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tokens = rng.gen_range(0..=max_tokens);
    let places: Vec<(&Place, Vec<Color>)> = net
        .place_colors
        .iter()
        .map(|(p, c)| (p, c.iter().cloned().collect()))
        .collect();
    let mut cm = ColoredMarking::new();
    if places.is_empty() {
        return cm;
    }
    for _ in 0..tokens {
        let (p, pool) = &places[rng.gen_range(0..places.len())];
        let x = pool[rng.gen_range(0..pool.len())].clone();
        cm.add_to(p, &Multiset::singleton(x, 1)).expect("small counts");
    }
    cm
}
