mod common;

use common::{random_layers, random_recoloring, random_sequence, rewrite_closure};
use cpnet::colored::{colored_enabled, colored_fire, ColoredPetriNet};
use cpnet::multiset::{GeneratorMap, Multiset};
use cpnet::netio::{
    emit_document, parse_document, random_colored_marking, random_colored_net, GeneratorConfig, NetDocument,
};
use cpnet::petri;
use cpnet::semantics::{foata_normalize, is_normal, map_sequence, seq_compose, seq_equal, seq_target, StepSequence};
use cpnet::system::StepSystem;
use cpnet::unfolding::{marking_from_unfolded, marking_to_unfolded, step_to_unfolded, unfold_morphism, unfold_net};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_multiset() -> impl Strategy<Value = Multiset<u8>> {
    prop::collection::btree_map(0u8..6, 0u64..5, 0..5).prop_map(|m| Multiset::from_counts(m).unwrap())
}

fn generator_map() -> impl Strategy<Value = GeneratorMap<u8, u8>> {
    prop::collection::vec(small_multiset(), 6)
        .prop_map(|images| GeneratorMap::from_assignments(images.into_iter().enumerate().map(|(i, m)| (i as u8, m))))
}

fn net_and_marking(seed: u64) -> (ColoredPetriNet, cpnet::colored::ColoredMarking) {
    let net = random_colored_net(&GeneratorConfig::with_seed(seed)).unwrap();
    let m = random_colored_marking(&net, seed.wrapping_add(1), 4);
    (net, m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn multiset_monoid_laws(a in small_multiset(), b in small_multiset(), c in small_multiset()) {
        prop_assert_eq!(a.checked_add(&b).unwrap(), b.checked_add(&a).unwrap());
        prop_assert_eq!(
            a.checked_add(&b).unwrap().checked_add(&c).unwrap(),
            a.checked_add(&b.checked_add(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.checked_add(&Multiset::new()).unwrap(), a.clone());
        let sum = a.checked_add(&b).unwrap();
        prop_assert_eq!(sum.checked_sub(&b).unwrap(), a.clone());
        prop_assert!(a.is_sub_multiset(&sum));
        prop_assert_eq!(sum.size(), a.size() + b.size());
    }

    #[test]
    fn apply_is_a_homomorphism(h in generator_map(), k in generator_map(), a in small_multiset(), b in small_multiset()) {
        let sum = a.checked_add(&b).unwrap();
        prop_assert_eq!(h.apply(&sum).unwrap(), h.apply(&a).unwrap().checked_add(&h.apply(&b).unwrap()).unwrap());
        prop_assert!(h.apply(&Multiset::new()).unwrap().is_empty());
        prop_assert_eq!(h.then(&k).unwrap().apply(&a).unwrap(), k.apply(&h.apply(&a).unwrap()).unwrap());
        let id = GeneratorMap::identity(h.domain());
        prop_assert_eq!(id.apply(&a).unwrap(), a);
    }

    #[test]
    fn firing_is_additive_and_monotone(seed in any::<u64>()) {
        let (net, m) = net_and_marking(seed);
        let u = unfold_net(&net).unwrap();
        let um = marking_to_unfolded(&net, &m).unwrap();
        let steps = cpnet::system::enabled_steps(&u, &um, 2).unwrap();
        for s in &steps {
            for (part, _) in s.iter() {
                let first = Multiset::singleton(part.clone(), 1);
                let rest = s.checked_sub(&first).unwrap();
                let whole = petri::fire(&u, &um, s).unwrap();
                prop_assert_eq!(&whole, &petri::fire(&u, &petri::fire(&u, &um, &first).unwrap(), &rest).unwrap());
                prop_assert_eq!(&whole, &petri::fire(&u, &petri::fire(&u, &um, &rest).unwrap(), &first).unwrap());
            }
            let bigger = um.checked_add(&um).unwrap();
            prop_assert!(petri::enabled(&u, &bigger, s).unwrap());
        }
    }

    #[test]
    fn normalization_invariants(seed in any::<u64>()) {
        let (net, m) = net_and_marking(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s, target) = random_sequence(&net, &m, 3, 2, &mut rng);
        let nf = foata_normalize(&net, &s).unwrap();
        prop_assert_eq!(nf.source(), &m);
        prop_assert_eq!(seq_target(&net, nf.sequence()).unwrap(), target);
        prop_assert_eq!(nf.sequence().content().unwrap(), s.content().unwrap());
        prop_assert!(nf.layers().iter().all(|l| !l.is_empty()));
        prop_assert_eq!(&foata_normalize(&net, nf.sequence()).unwrap(), &nf);
        prop_assert!(is_normal(&net, nf.sequence()).unwrap());
        prop_assert!(nf.len() <= s.layers.iter().filter(|l| !l.is_empty()).count());
    }

    #[test]
    fn normal_forms_are_greedy_earliest(seed in any::<u64>()) {
        let (net, m) = net_and_marking(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let (s, _) = random_sequence(&net, &m, 3, 2, &mut rng);
        let layers = foata_normalize(&net, &s).unwrap().into_sequence().layers;
        for i in 0..layers.len().saturating_sub(1) {
            for (b, _) in layers[i + 1].iter() {
                let one = Multiset::singleton(b.clone(), 1);
                let mut moved = layers.clone();
                moved[i] = moved[i].checked_add(&one).unwrap();
                moved[i + 1] = moved[i + 1].checked_sub(&one).unwrap();
                let candidate = StepSequence::new(m.clone(), moved);
                prop_assert!(seq_target(&net, &candidate).is_err(), "{} could move into layer {}", b, i + 1);
            }
        }
    }

    #[test]
    fn interchange_rewrites_preserve_equality(seed in any::<u64>()) {
        let (net, m) = net_and_marking(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (layers, _) = random_layers(&net, &m, 3, 2, &mut rng);
        let s = StepSequence::new(m.clone(), layers.clone());
        let mut neighbours: Vec<_> = rewrite_closure(&net, &m, &layers, 50_000).into_iter().collect();
        neighbours.sort();
        for other in neighbours.into_iter().take(20) {
            prop_assert!(seq_equal(&net, &s, &StepSequence::new(m.clone(), other)).unwrap());
        }
    }

    #[test]
    fn unfolding_round_trips_and_commutes(seed in any::<u64>()) {
        let (net, m) = net_and_marking(seed);
        let u = unfold_net(&net).unwrap();
        let um = marking_to_unfolded(&net, &m).unwrap();
        prop_assert_eq!(marking_from_unfolded(&net, &um).unwrap(), m.clone());
        let places: usize = net.place_colors.values().map(|c| c.len()).sum();
        let transitions: usize = net.transition_modes.values().map(|k| k.len()).sum();
        prop_assert_eq!((u.places().len(), u.transition_count()), (places, transitions));
        for b in net.bindings() {
            let step = Multiset::singleton(b, 1);
            let ustep = step_to_unfolded(&net, &step).unwrap();
            let enabled = colored_enabled(&net, &m, &step).unwrap();
            prop_assert_eq!(enabled, petri::enabled(&u, &um, &ustep).unwrap());
            if enabled {
                prop_assert_eq!(
                    marking_to_unfolded(&net, &colored_fire(&net, &m, &step).unwrap()).unwrap(),
                    petri::fire(&u, &um, &ustep).unwrap()
                );
            }
        }
    }

    #[test]
    fn morphisms_transport_firings(seed in any::<u64>()) {
        let (net, m) = net_and_marking(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (target, psi) = random_recoloring(&net, "x", &mut rng);
        prop_assert!(cpnet::colored::check_colored_morphism(&net, &target, &psi).is_valid());
        let (s, end) = random_sequence(&net, &m, 3, 2, &mut rng);
        let image = map_sequence(&psi, &s).unwrap();
        prop_assert_eq!(seq_target(&target, &image).unwrap(), psi.map_marking(&end).unwrap());
        let phi = unfold_morphism(&psi).unwrap();
        let un = unfold_net(&net).unwrap();
        let ut = unfold_net(&target).unwrap();
        prop_assert!(petri::check_net_morphism(&un, &ut, &phi).is_valid());
    }

    #[test]
    fn translation_respects_concatenation(seed in any::<u64>()) {
        let (net, m) = net_and_marking(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, psi) = random_recoloring(&net, "y", &mut rng);
        let (s1, mid) = random_sequence(&net, &m, 2, 2, &mut rng);
        let (s2, _) = random_sequence(&net, &mid, 2, 2, &mut rng);
        let whole = map_sequence(&psi, &seq_compose(&net, &s1, &s2).unwrap()).unwrap();
        let parts = [map_sequence(&psi, &s1).unwrap(), map_sequence(&psi, &s2).unwrap()];
        prop_assert_eq!(parts[0].layers.iter().chain(&parts[1].layers).cloned().collect::<Vec<_>>(), whole.layers);
        prop_assert_eq!(
            map_sequence(&psi, &StepSequence::identity(m.clone())).unwrap(),
            StepSequence::identity(psi.map_marking(&m).unwrap())
        );
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let (net, m) = net_and_marking(seed);
        let doc = NetDocument::Colored { net, marking: Some(m).filter(|m| !m.is_empty()) };
        let text = emit_document(&doc);
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(emit_document(&back), text);
    }
}

#[test]
fn token_counts_match_marking_sizes() {
    let (net, m) = net_and_marking(1);
    let total: u64 = m.iter().map(|(_, c)| c.size()).sum();
    assert_eq!(net.token_count(&m), total);
    assert!(m.iter().all(|(p, _)| net.place_colors.contains_key(p)));
}
