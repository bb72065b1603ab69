mod common;

use common::{cm, ms};
use cpnet::colored::{
    binding_effect, check_colored_morphism, colored_enabled, colored_fire, validate_colored_net, ColoredMarking,
    ColoredMorphism, ColoredStep,
};
use cpnet::ids::{Binding, Place, Transition};
use cpnet::multiset::Multiset;
use cpnet::netio::vending;
use cpnet::report::Code;
use cpnet::Error;

fn step(pairs: &[(&str, &str, u64)]) -> ColoredStep {
    Multiset::from_counts(pairs.iter().map(|&(t, k, n)| (Binding::new(t, k), n))).unwrap()
}

#[test]
fn vending_is_valid() {
    let (net, _) = vending();
    assert!(validate_colored_net(&net).is_valid());
    assert_eq!(net.bindings().len(), 7);
}

#[test]
fn binding_effects_follow_the_table() {
    let (net, _) = vending();
    let effect = |k: &str| binding_effect(&net, &Binding::new("buy", k)).unwrap();

    let (consumed, produced) = effect("a1");
    assert_eq!(consumed, cm(&[("coins-in", &[("25c", 1), ("50c", 1)])]));
    assert_eq!(produced, cm(&[("food", &[("apple", 1)])]));
    assert!(produced.get(&Place::from("change")).is_empty());

    let (consumed, produced) = effect("b2");
    assert_eq!(consumed, cm(&[("coins-in", &[("50c", 1)])]));
    assert_eq!(produced, cm(&[("food", &[("bar", 1)]), ("change", &[("25c", 1)])]));

    let (consumed, produced) = effect("e2");
    assert_eq!(consumed, cm(&[("coins-in", &[("50c", 1)])]));
    assert_eq!(produced, cm(&[("change", &[("50c", 1)])]));

    assert!(matches!(
        binding_effect(&net, &Binding::new("buy", "zz")),
        Err(Error::UnknownBinding(_))
    ));
}

#[test]
fn enabledness() {
    let (net, _) = vending();
    let three = cm(&[("coins-in", &[("25c", 3)])]);
    assert!(colored_enabled(&net, &three, &ColoredStep::new()).unwrap());
    assert!(colored_enabled(&net, &ColoredMarking::new(), &ColoredStep::new()).unwrap());
    assert!(colored_enabled(&net, &three, &step(&[("buy", "a3", 1)])).unwrap());
    assert!(!colored_enabled(&net, &three, &step(&[("buy", "a1", 1)])).unwrap());
    // steps consume collectively
    assert!(colored_enabled(&net, &three, &step(&[("buy", "b1", 2), ("buy", "e1", 1)])).unwrap());
    assert!(!colored_enabled(&net, &three, &step(&[("buy", "a3", 1), ("buy", "b1", 1)])).unwrap());
}

#[test]
fn firing() {
    let (net, _) = vending();
    let m = cm(&[("coins-in", &[("25c", 1), ("50c", 1)])]);
    assert_eq!(
        colored_fire(&net, &m, &step(&[("buy", "a1", 1)])).unwrap(),
        cm(&[("food", &[("apple", 1)])])
    );
    let m = cm(&[("coins-in", &[("50c", 2)])]);
    assert_eq!(
        colored_fire(&net, &m, &step(&[("buy", "a2", 1)])).unwrap(),
        cm(&[("food", &[("apple", 1)]), ("change", &[("50c", 1)])])
    );
    assert_eq!(colored_fire(&net, &m, &ColoredStep::new()).unwrap(), m);
    assert!(matches!(
        colored_fire(&net, &m, &step(&[("buy", "a3", 1)])),
        Err(Error::NotEnabled { .. })
    ));
}

#[test]
fn markings_outside_color_sets_are_rejected() {
    let (net, _) = vending();
    let bad = cm(&[("food", &[("25c", 1)])]);
    assert!(matches!(
        colored_enabled(&net, &bad, &ColoredStep::new()),
        Err(Error::Domain(_))
    ));
}

#[test]
fn validation_codes() {
    let (net, _) = vending();
    let buy = Transition::from("buy");
    let coins = Place::from("coins-in");

    let mut bad = net.clone();
    bad.inputs
        .get_mut(&buy)
        .unwrap()
        .get_mut(&coins)
        .unwrap()
        .assign("a1".into(), ms(&[("apple", 1)]));
    assert_eq!(validate_colored_net(&bad).codes(), vec![Code::ColorOutsidePlace]);

    let mut bad = net.clone();
    let arcs = bad.base.arcs(&buy).unwrap().clone();
    let mut source = arcs.source.clone();
    source.insert(coins.clone(), 1).unwrap();
    bad.base = cpnet::petri::PetriNet::new(
        bad.base.places().iter().cloned(),
        [(buy.clone(), source, arcs.target.clone())],
    )
    .unwrap();
    let report = validate_colored_net(&bad);
    assert_eq!(report.codes(), vec![Code::ArcMultiplicity]);
    assert_eq!(report.issues[0].transition, Some(buy.clone()));

    let mut bad = net.clone();
    bad.outputs.get_mut(&buy).unwrap().remove(&Place::from("food"));
    assert_eq!(validate_colored_net(&bad).codes(), vec![Code::MissingInscription]);

    let mut bad = net.clone();
    bad.inputs
        .get_mut(&buy)
        .unwrap()
        .insert(Place::from("food"), Default::default());
    assert_eq!(validate_colored_net(&bad).codes(), vec![Code::ExtraInscription]);

    let mut bad = net.clone();
    bad.transition_modes.get_mut(&buy).unwrap().insert("z9".into());
    assert_eq!(
        validate_colored_net(&bad).codes(),
        vec![
            Code::InscriptionNotTotal,
            Code::InscriptionNotTotal,
            Code::InscriptionNotTotal
        ]
    );

    let mut bad = net.clone();
    bad.place_colors.get_mut(&Place::from("food")).unwrap().clear();
    assert!(validate_colored_net(&bad).codes().contains(&Code::EmptyColorSet));

    let mut bad = net.clone();
    bad.transition_modes.clear();
    assert!(validate_colored_net(&bad).codes().contains(&Code::MissingModeSet));
}

#[test]
fn identity_morphism_is_valid_and_a_unit() {
    let (net, m) = vending();
    let id = ColoredMorphism::identity(&net);
    assert!(check_colored_morphism(&net, &net, &id).is_valid());
    assert_eq!(id.map_marking(&m).unwrap(), m);
    let s = step(&[("buy", "a1", 2), ("buy", "e2", 1)]);
    assert_eq!(id.map_step(&s).unwrap(), s);
}

#[test]
fn step_effect_is_additive() {
    let (net, _) = vending();
    let s1 = step(&[("buy", "a1", 1), ("buy", "b2", 2)]);
    let s2 = step(&[("buy", "e1", 1), ("buy", "a1", 1)]);
    let (c1, p1) = net.step_effect(&s1).unwrap();
    let (c2, p2) = net.step_effect(&s2).unwrap();
    let (c, p) = net.step_effect(&s1.checked_add(&s2).unwrap()).unwrap();
    assert_eq!(c, c1.checked_add(&c2).unwrap());
    assert_eq!(p, p1.checked_add(&p2).unwrap());
}
