//! Net and morphism documents: parsing with validation, and canonical
//! emission (sorted keys, fixed layout) such that `emit(parse(emit(d))) ==
//! emit(d)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::syntax::{error_at, parse_entries, parse_value, Fields, Node};
use crate::colored::{validate_colored_net, ColoredMarking, ColoredMorphism, ColoredPetriNet, Inscription};
use crate::error::{Error, Result};
use crate::ids::{Color, Mode, Place, Transition, SEPARATOR};
use crate::multiset::{GeneratorMap, Multiset};
use crate::petri::{Marking, NetMorphism, PetriNet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetDocument {
    Ordinary {
        net: PetriNet,
        marking: Option<Marking>,
    },
    Colored {
        net: ColoredPetriNet,
        marking: Option<ColoredMarking>,
    },
}

impl NetDocument {
    pub fn kind(&self) -> &'static str {
        match self {
            NetDocument::Ordinary { .. } => "ordinary",
            NetDocument::Colored { .. } => "colored",
        }
    }
}

/// A morphism file: base maps, plus color and mode maps for colored nets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismDocument {
    Ordinary(NetMorphism),
    Colored(ColoredMorphism),
}

pub fn parse_document(text: &str) -> Result<NetDocument> {
    let entries = parse_entries(text)?;
    let fields = Fields::from_entries(&entries, &["kind", "places", "transitions", "marking"])?;
    let kind = fields.require("kind")?;
    match kind.as_atom("a document kind")? {
        "ordinary" => parse_ordinary(&fields),
        "colored" => parse_colored(&fields),
        other => Err(error_at(
            &kind.pos,
            format!("unknown document kind `{other}`, expected `ordinary` or `colored`"),
        )),
    }
}

fn ident<T: From<String>>(node: &Node, what: &str, reserved: bool) -> Result<T> {
    let s = node.as_atom(what)?;
    if reserved && s.contains(SEPARATOR) {
        return Err(Error::ReservedSeparator(s.to_owned()));
    }
    Ok(T::from(s.to_owned()))
}

fn key_ident<T: From<String>>(name: &str, reserved: bool) -> Result<T> {
    if reserved && name.contains(SEPARATOR) {
        return Err(Error::ReservedSeparator(name.to_owned()));
    }
    Ok(T::from(name.to_owned()))
}

fn multiset<K: Ord + Clone + From<String>>(node: &Node, what: &str, reserved: bool) -> Result<Multiset<K>> {
    let mut m = Multiset::new();
    for (k, v) in node.as_map(what)? {
        m.insert(key_ident(&k.name, reserved)?, v.as_count()?)?;
    }
    Ok(m)
}

fn id_list<T: Ord + From<String>>(node: &Node, what: &str, reserved: bool) -> Result<BTreeSet<T>> {
    let mut out = BTreeSet::new();
    for item in node.as_list(what)? {
        if !out.insert(ident(item, what, reserved)?) {
            return Err(error_at(&item.pos, format!("duplicate entry in {what}")));
        }
    }
    Ok(out)
}

fn parse_ordinary(fields: &Fields) -> Result<NetDocument> {
    let mut places = Vec::new();
    if let Some(node) = fields.get("places") {
        for item in node.as_list("places")? {
            places.push(ident::<Place>(item, "a place identifier", false)?);
        }
    }
    let mut transitions = Vec::new();
    if let Some(node) = fields.get("transitions") {
        for item in node.as_list("transitions")? {
            let f = Fields::new(item, "a transition", &["id", "source", "target"])?;
            transitions.push((
                ident::<Transition>(f.require("id")?, "a transition identifier", false)?,
                f.get("source")
                    .map(|n| multiset(n, "source", false))
                    .transpose()?
                    .unwrap_or_default(),
                f.get("target")
                    .map(|n| multiset(n, "target", false))
                    .transpose()?
                    .unwrap_or_default(),
            ));
        }
    }
    let net = PetriNet::new(places, transitions)?;
    let marking = fields.get("marking").map(|n| parse_marking_node(&net, n)).transpose()?;
    Ok(NetDocument::Ordinary { net, marking })
}

fn parse_colored(fields: &Fields) -> Result<NetDocument> {
    let mut net = ColoredPetriNet::default();
    let mut places = Vec::new();
    if let Some(node) = fields.get("places") {
        for item in node.as_list("places")? {
            let f = Fields::new(item, "a place", &["id", "colors"])?;
            let p: Place = ident(f.require("id")?, "a place identifier", true)?;
            let colors = id_list::<Color>(f.require("colors")?, "colors", true)?;
            if net.place_colors.insert(p.clone(), colors).is_some() {
                return Err(error_at(&item.pos, format!("place {p} declared twice")));
            }
            places.push(p);
        }
    }
    let mut transitions = Vec::new();
    if let Some(node) = fields.get("transitions") {
        for item in node.as_list("transitions")? {
            let f = Fields::new(
                item,
                "a transition",
                &["id", "modes", "source", "target", "inscriptions"],
            )?;
            let t: Transition = ident(f.require("id")?, "a transition identifier", true)?;
            let modes = id_list::<Mode>(f.require("modes")?, "modes", true)?;
            if net.transition_modes.insert(t.clone(), modes).is_some() {
                return Err(error_at(&item.pos, format!("transition {t} declared twice")));
            }
            let source = f
                .get("source")
                .map(|n| multiset(n, "source", true))
                .transpose()?
                .unwrap_or_default();
            let target = f
                .get("target")
                .map(|n| multiset(n, "target", true))
                .transpose()?
                .unwrap_or_default();
            if let Some(ins) = f.get("inscriptions") {
                let g = Fields::new(ins, "inscriptions", &["in", "out"])?;
                for (key, side) in [("in", &mut net.inputs), ("out", &mut net.outputs)] {
                    if let Some(n) = g.get(key) {
                        let arcs = parse_arc_inscriptions(n)?;
                        if !arcs.is_empty() {
                            side.insert(t.clone(), arcs);
                        }
                    }
                }
            }
            transitions.push((t, source, target));
        }
    }
    net.base = PetriNet::new(places, transitions)?;
    let report = validate_colored_net(&net);
    if !report.is_valid() {
        return Err(Error::ValidationFailed(report));
    }
    let marking = fields
        .get("marking")
        .map(|n| parse_colored_marking_node(&net, n))
        .transpose()?;
    Ok(NetDocument::Colored { net, marking })
}

fn parse_arc_inscriptions(node: &Node) -> Result<BTreeMap<Place, Inscription>> {
    let mut out = BTreeMap::new();
    for (k, v) in node.as_map("arc inscriptions")? {
        out.insert(key_ident(&k.name, true)?, generator_map(v, "an inscription", true)?);
    }
    Ok(out)
}

fn generator_map<S, T>(node: &Node, what: &str, reserved: bool) -> Result<GeneratorMap<S, T>>
where
    S: Ord + Clone + std::fmt::Display + From<String>,
    T: Ord + Clone + std::fmt::Display + From<String>,
{
    let mut out = GeneratorMap::new();
    for (k, v) in node.as_map(what)? {
        out.assign(key_ident(&k.name, reserved)?, multiset(v, what, reserved)?);
    }
    Ok(out)
}

fn parse_marking_node(net: &PetriNet, node: &Node) -> Result<Marking> {
    let m = multiset(node, "a marking", false)?;
    net.check_marking(&m)?;
    Ok(m)
}

fn parse_colored_marking_node(net: &ColoredPetriNet, node: &Node) -> Result<ColoredMarking> {
    let mut cm = ColoredMarking::new();
    for (k, v) in node.as_map("a colored marking")? {
        cm.add_to(&Place::from(k.name.as_str()), &multiset(v, "a color multiset", false)?)?;
    }
    net.check_marking(&cm)?;
    Ok(cm)
}

/// Parses a marking such as `{p: 1, q: 2}` for an ordinary net.
pub fn parse_marking(net: &PetriNet, text: &str) -> Result<Marking> {
    parse_marking_node(net, &parse_value(text)?)
}

/// Parses a colored marking such as `{coins-in: {25c: 3}}`.
pub fn parse_colored_marking(net: &ColoredPetriNet, text: &str) -> Result<ColoredMarking> {
    parse_colored_marking_node(net, &parse_value(text)?)
}

pub fn parse_morphism(text: &str) -> Result<MorphismDocument> {
    let entries = parse_entries(text)?;
    let fields = Fields::from_entries(&entries, &["kind", "places", "transitions", "color-maps", "mode-maps"])?;
    let kind = fields.require("kind")?;
    if kind.as_atom("a document kind")? != "morphism" {
        return Err(error_at(&kind.pos, "expected `kind: morphism`"));
    }
    let mut base = NetMorphism::default();
    if let Some(n) = fields.get("places") {
        for (k, v) in n.as_map("the place map")? {
            base.places
                .insert(Place::from(k.name.as_str()), ident(v, "a place", false)?);
        }
    }
    if let Some(n) = fields.get("transitions") {
        for (k, v) in n.as_map("the transition map")? {
            base.transitions
                .insert(Transition::from(k.name.as_str()), ident(v, "a transition", false)?);
        }
    }
    let colors = fields.get("color-maps");
    let modes = fields.get("mode-maps");
    if colors.is_none() && modes.is_none() {
        return Ok(MorphismDocument::Ordinary(base));
    }
    let mut psi = ColoredMorphism {
        base,
        ..Default::default()
    };
    if let Some(n) = colors {
        for (k, v) in n.as_map("color maps")? {
            psi.alpha_places
                .insert(Place::from(k.name.as_str()), generator_map(v, "a color map", false)?);
        }
    }
    if let Some(n) = modes {
        for (k, v) in n.as_map("mode maps")? {
            psi.alpha_transitions.insert(
                Transition::from(k.name.as_str()),
                generator_map(v, "a mode map", false)?,
            );
        }
    }
    Ok(MorphismDocument::Colored(psi))
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn block(out: &mut String, key: &str, lines: &[String], indent: &str) {
    if lines.is_empty() {
        let _ = writeln!(out, "{indent}{key}: {{}}");
        return;
    }
    let _ = writeln!(out, "{indent}{key}: {{");
    for (i, line) in lines.iter().enumerate() {
        let comma = if i + 1 < lines.len() { "," } else { "" };
        let _ = writeln!(out, "{indent}  {line}{comma}");
    }
    let _ = write!(out, "{indent}}}");
}

/// Canonical text of a document.
pub fn emit_document(doc: &NetDocument) -> String {
    let mut out = String::new();
    match doc {
        NetDocument::Ordinary { net, marking } => {
            out.push_str("kind: ordinary\n");
            let _ = writeln!(out, "places: [{}]", join(net.places()));
            let rows: Vec<String> = net
                .transitions()
                .map(|(t, a)| format!("{{id: {t}, source: {}, target: {}}}", a.source, a.target))
                .collect();
            emit_list(&mut out, "transitions", &rows);
            if let Some(m) = marking {
                let _ = writeln!(out, "marking: {m}");
            }
        }
        NetDocument::Colored { net, marking } => {
            out.push_str("kind: colored\n");
            let rows: Vec<String> = net
                .place_colors
                .iter()
                .map(|(p, colors)| format!("{{id: {p}, colors: [{}]}}", join(colors)))
                .collect();
            emit_list(&mut out, "places", &rows);
            let rows: Vec<String> = net
                .base
                .transitions()
                .map(|(t, arcs)| {
                    let mut s = String::new();
                    let modes = net.transition_modes.get(t).map(join).unwrap_or_default();
                    let _ = writeln!(s, "{{");
                    let _ = writeln!(s, "    id: {t},");
                    let _ = writeln!(s, "    modes: [{modes}],");
                    let _ = writeln!(s, "    source: {},", arcs.source);
                    let _ = writeln!(s, "    target: {},", arcs.target);
                    let _ = writeln!(s, "    inscriptions: {{");
                    let arc_lines = |m: Option<&BTreeMap<Place, Inscription>>| -> Vec<String> {
                        m.into_iter().flatten().map(|(p, ins)| format!("{p}: {ins}")).collect()
                    };
                    block(&mut s, "in", &arc_lines(net.inputs.get(t)), "      ");
                    s.push_str(",\n");
                    block(&mut s, "out", &arc_lines(net.outputs.get(t)), "      ");
                    s.push('\n');
                    let _ = writeln!(s, "    }}");
                    s.push_str("  }");
                    s
                })
                .collect();
            emit_list(&mut out, "transitions", &rows);
            if let Some(m) = marking {
                let _ = writeln!(out, "marking: {m}");
            }
        }
    }
    out
}

fn emit_list(out: &mut String, key: &str, rows: &[String]) {
    if rows.is_empty() {
        let _ = writeln!(out, "{key}: []");
        return;
    }
    let _ = writeln!(out, "{key}: [");
    for (i, row) in rows.iter().enumerate() {
        let comma = if i + 1 < rows.len() { "," } else { "" };
        let _ = writeln!(out, "  {row}{comma}");
    }
    out.push_str("]\n");
}

pub fn emit_morphism(doc: &MorphismDocument) -> String {
    let mut out = String::from("kind: morphism\n");
    let base = match doc {
        MorphismDocument::Ordinary(b) => b,
        MorphismDocument::Colored(c) => &c.base,
    };
    let pairs = |m: Vec<(String, String)>| join(m.into_iter().map(|(a, b)| format!("{a}: {b}")));
    let _ = writeln!(
        out,
        "places: {{{}}}",
        pairs(
            base.places
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect()
        )
    );
    let _ = writeln!(
        out,
        "transitions: {{{}}}",
        pairs(
            base.transitions
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect()
        )
    );
    if let MorphismDocument::Colored(psi) = doc {
        let lines: Vec<String> = psi.alpha_places.iter().map(|(p, a)| format!("{p}: {a}")).collect();
        block(&mut out, "color-maps", &lines, "");
        out.push('\n');
        let lines: Vec<String> = psi.alpha_transitions.iter().map(|(t, a)| format!("{t}: {a}")).collect();
        block(&mut out, "mode-maps", &lines, "");
        out.push('\n');
    }
    out
}
