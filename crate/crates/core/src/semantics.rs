//! Step sequences as morphisms of the operational semantics.
//!
//! A step sequence starts at a marking and fires one multiset of actions per
//! layer. Each layer only needs its consumption to fit inside the current
//! marking; untouched tokens are carried along as an implicit identity.
//!
//! Two sequences denote the same morphism when they are connected by the
//! interchange rewrites: splitting a layer into two consecutive layers, or
//! merging two consecutive layers whose union is enabled. On linearizations
//! this is exactly swapping two adjacent actions that are jointly enabled at
//! that point. The normal form of a class is its least member under
//! [`cmp_layerings`]: fewest layers first, then layer by layer, larger layers
//! first and smaller contents first. Being least, it is greedy-earliest: no
//! single action can be pulled into an earlier layer.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::colored::{ColoredMarking, ColoredMorphism};
use crate::error::{Error, Result};
use crate::ids::{Binding, Place, Transition};
use crate::multiset::Multiset;
use crate::system::{enabled_steps, Budget, StepSystem};

/// Upper bound on the size of a single interchange class explored while
/// normalizing.
pub const WORD_CLASS_LIMIT: usize = 2_000_000;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StepSequence<M, A: Ord> {
    pub source: M,
    pub layers: Vec<Multiset<A>>,
}

pub type ColoredSequence = StepSequence<ColoredMarking, Binding>;
pub type FiringSequence = StepSequence<Multiset<Place>, Transition>;

impl<M, A: Ord + Clone> StepSequence<M, A> {
    pub fn new(source: M, layers: Vec<Multiset<A>>) -> Self {
        StepSequence { source, layers }
    }

    pub fn identity(source: M) -> Self {
        StepSequence {
            source,
            layers: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// Every action fired, with multiplicity.
    pub fn content(&self) -> Result<Multiset<A>> {
        self.layers
            .iter()
            .try_fold(Multiset::new(), |acc, layer| acc.checked_add(layer))
    }
}

impl<M: fmt::Display, A: Ord + fmt::Display> fmt::Display for StepSequence<M, A> {
    /// The source marking, then one line per layer.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "from {}", self.source)?;
        for layer in &self.layers {
            write!(f, "\n{layer}")?;
        }
        Ok(())
    }
}

impl<M: fmt::Display, A: Ord + fmt::Display> fmt::Debug for StepSequence<M, A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let layers: Vec<String> = self.layers.iter().map(|l| l.to_string()).collect();
        write!(f, "{} ; [{}]", self.source, layers.join(", "))
    }
}

/// A step sequence known to be the normal form of its interchange class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FoataForm<M, A: Ord>(StepSequence<M, A>);

impl<M, A: Ord + Clone> FoataForm<M, A> {
    pub fn sequence(&self) -> &StepSequence<M, A> {
        &self.0
    }

    pub fn into_sequence(self) -> StepSequence<M, A> {
        self.0
    }

    pub fn source(&self) -> &M {
        &self.0.source
    }

    pub fn layers(&self) -> &[Multiset<A>] {
        &self.0.layers
    }

    pub fn len(&self) -> usize {
        self.0.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.layers.is_empty()
    }
}

impl<M: fmt::Display, A: Ord + fmt::Display> fmt::Display for FoataForm<M, A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl<M: fmt::Display, A: Ord + fmt::Display> fmt::Debug for FoataForm<M, A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

type Seq<S> = StepSequence<<S as StepSystem>::State, <S as StepSystem>::Action>;
type Normal<S> = FoataForm<<S as StepSystem>::State, <S as StepSystem>::Action>;

/// The marking reached after firing every layer.
pub fn seq_target<S: StepSystem>(sys: &S, s: &Seq<S>) -> Result<S::State> {
    sys.check_state(&s.source)?;
    let mut m = s.source.clone();
    for (i, layer) in s.layers.iter().enumerate() {
        if !sys.step_enabled(&m, layer)? {
            return Err(Error::IllFormedSequence(format!(
                "layer {} ({layer}) is not enabled at {m}",
                i + 1
            )));
        }
        m = sys.step_fire(&m, layer)?;
    }
    Ok(m)
}

/// `second ∘ first`: concatenation of layers.
pub fn seq_compose<S: StepSystem>(sys: &S, first: &Seq<S>, second: &Seq<S>) -> Result<Seq<S>> {
    let mid = seq_target(sys, first)?;
    seq_target(sys, second)?;
    if mid != second.source {
        return Err(Error::NotComposable {
            end: mid.to_string(),
            start: second.source.to_string(),
        });
    }
    let mut layers = first.layers.clone();
    layers.extend(second.layers.iter().cloned());
    Ok(StepSequence::new(first.source.clone(), layers))
}

/// Monoidal product: sources add and layers are united pairwise, the shorter
/// sequence being padded with identities.
pub fn seq_parallel<S: StepSystem>(sys: &S, a: &Seq<S>, b: &Seq<S>) -> Result<Seq<S>> {
    seq_target(sys, a)?;
    seq_target(sys, b)?;
    let source = sys.combine(&a.source, &b.source)?;
    let empty = Multiset::new();
    let layers = (0..a.len().max(b.len()))
        .map(|i| {
            let x = a.layers.get(i).unwrap_or(&empty);
            let y = b.layers.get(i).unwrap_or(&empty);
            x.checked_add(y)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StepSequence::new(source, layers))
}

/// Total order on layers used to pick normal forms: larger layers first, then
/// smaller contents first.
pub fn cmp_layers<A: Ord + Clone>(a: &Multiset<A>, b: &Multiset<A>) -> Ordering {
    b.size().cmp(&a.size()).then_with(|| a.elements().cmp(b.elements()))
}

/// Total order on layerings: fewer layers first, then layerwise by
/// [`cmp_layers`].
pub fn cmp_layerings<A: Ord + Clone>(a: &[Multiset<A>], b: &[Multiset<A>]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        a.iter()
            .zip(b)
            .map(|(x, y)| cmp_layers(x, y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// The normal form of `s`'s interchange class.
pub fn foata_normalize<S: StepSystem>(sys: &S, s: &Seq<S>) -> Result<Normal<S>> {
    seq_target(sys, s)?;
    let content = s.content()?;
    let alphabet: Vec<S::Action> = content.support().cloned().collect();
    if alphabet.is_empty() {
        return Ok(FoataForm(StepSequence::identity(s.source.clone())));
    }
    let index = |a: &S::Action| alphabet.binary_search(a).expect("action in alphabet") as u16;
    let word: Vec<u16> = s.layers.iter().flat_map(|l| l.elements().map(index)).collect();

    let normalizer = Normalizer {
        sys,
        alphabet: &alphabet,
    };
    let words = normalizer.word_class(&s.source, word)?;
    let mut memo = HashMap::new();
    let best = normalizer.best_layering(&s.source, words, &mut memo)?;
    let layers = best.into_iter().map(|layer| normalizer.layer(&layer)).collect();
    Ok(FoataForm(StepSequence::new(s.source.clone(), layers)))
}

/// Whether `s` already is the normal form of its class.
pub fn is_normal<S: StepSystem>(sys: &S, s: &Seq<S>) -> Result<bool> {
    if s.layers.iter().any(|l| l.is_empty()) {
        return Ok(false);
    }
    Ok(foata_normalize(sys, s)?.layers() == s.layers.as_slice())
}

/// Equality of the morphisms denoted by two step sequences.
pub fn seq_equal<S: StepSystem>(sys: &S, a: &Seq<S>, b: &Seq<S>) -> Result<bool> {
    let na = foata_normalize(sys, a)?;
    let nb = foata_normalize(sys, b)?;
    Ok(na.source() == nb.source() && na.layers() == nb.layers())
}

/// Every normal form starting at `m0` with at most `max_len` layers of total
/// multiplicity at most `max_step_size` each, the identity included. Ordered
/// by length, then layer contents.
pub fn enumerate_step_sequences<S: StepSystem>(
    sys: &S,
    m0: &S::State,
    max_len: usize,
    max_step_size: usize,
    node_budget: usize,
) -> Result<Vec<Normal<S>>> {
    sys.check_state(m0)?;
    let mut budget = Budget::new(node_budget);
    budget.spend()?;
    let mut out = vec![FoataForm(StepSequence::identity(m0.clone()))];
    let mut layers = Vec::new();
    grow(sys, m0, m0, max_len, max_step_size, &mut budget, &mut layers, &mut out)?;
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.layers().cmp(b.layers())));
    Ok(out)
}

// Prefixes of normal forms are normal forms, so only normal prefixes are
// extended.
#[allow(clippy::too_many_arguments)]
fn grow<S: StepSystem>(
    sys: &S,
    m0: &S::State,
    current: &S::State,
    room: usize,
    max_step_size: usize,
    budget: &mut Budget,
    layers: &mut Vec<Multiset<S::Action>>,
    out: &mut Vec<Normal<S>>,
) -> Result<()> {
    if room == 0 {
        return Ok(());
    }
    for step in enabled_steps(sys, current, max_step_size)? {
        budget.spend()?;
        layers.push(step);
        let candidate = StepSequence::new(m0.clone(), layers.clone());
        if is_normal(sys, &candidate)? {
            let next = sys.step_fire(current, layers.last().expect("just pushed"))?;
            out.push(FoataForm(candidate));
            grow(sys, m0, &next, room - 1, max_step_size, budget, layers, out)?;
        }
        layers.pop();
    }
    Ok(())
}

/// Image of a colored step sequence under a colored-net morphism.
pub fn map_sequence(psi: &ColoredMorphism, s: &ColoredSequence) -> Result<ColoredSequence> {
    Ok(StepSequence::new(
        psi.map_marking(&s.source)?,
        s.layers.iter().map(|l| psi.map_step(l)).collect::<Result<_>>()?,
    ))
}

struct Normalizer<'a, S: StepSystem> {
    sys: &'a S,
    alphabet: &'a [S::Action],
}

impl<S: StepSystem> Normalizer<'_, S> {
    fn layer(&self, letters: &[u16]) -> Multiset<S::Action> {
        letters.iter().map(|&i| self.alphabet[i as usize].clone()).collect()
    }

    /// All linearizations reachable from `word` by swapping adjacent actions
    /// that are jointly enabled where they stand.
    fn word_class(&self, source: &S::State, word: Vec<u16>) -> Result<Vec<Vec<u16>>> {
        let mut seen: HashSet<Vec<u16>> = HashSet::from([word.clone()]);
        let mut queue = VecDeque::from([word]);
        let mut pair_cache: HashMap<(S::State, u16, u16), bool> = HashMap::new();
        while let Some(w) = queue.pop_front() {
            let mut m = source.clone();
            for i in 0..w.len() {
                if i + 1 < w.len() && w[i] != w[i + 1] {
                    let (x, y) = (w[i].min(w[i + 1]), w[i].max(w[i + 1]));
                    let key = (m.clone(), x, y);
                    let swappable = match pair_cache.get(&key) {
                        Some(&b) => b,
                        None => {
                            let b = self.sys.step_enabled(&m, &self.layer(&[x, y]))?;
                            pair_cache.insert(key, b);
                            b
                        }
                    };
                    if swappable {
                        let mut v = w.clone();
                        v.swap(i, i + 1);
                        if seen.insert(v.clone()) {
                            if seen.len() > WORD_CLASS_LIMIT {
                                return Err(Error::ResourceLimit(WORD_CLASS_LIMIT));
                            }
                            queue.push_back(v);
                        }
                    }
                }
                m = self.sys.step_fire(&m, &self.layer(&w[i..=i]))?;
            }
        }
        let mut words: Vec<Vec<u16>> = seen.into_iter().collect();
        words.sort();
        Ok(words)
    }

    /// Least layering (per [`cmp_layerings`]) of the given suffix set, all of
    /// whose words start at `state`.
    fn best_layering(
        &self,
        state: &S::State,
        suffixes: Vec<Vec<u16>>,
        memo: &mut HashMap<Vec<Vec<u16>>, Vec<Vec<u16>>>,
    ) -> Result<Vec<Vec<u16>>> {
        if suffixes.first().is_none_or(|w| w.is_empty()) {
            return Ok(Vec::new());
        }
        if let Some(hit) = memo.get(&suffixes) {
            return Ok(hit.clone());
        }
        let n = suffixes[0].len();
        let mut best: Option<Vec<Vec<u16>>> = None;
        for k in (1..=n).rev() {
            let mut groups: std::collections::BTreeMap<Vec<u16>, BTreeSet<Vec<u16>>> = Default::default();
            for w in &suffixes {
                let mut prefix = w[..k].to_vec();
                prefix.sort_unstable();
                groups.entry(prefix).or_default().insert(w[k..].to_vec());
            }
            for (prefix, rests) in groups {
                let step = self.layer(&prefix);
                if !self.sys.step_enabled(state, &step)? {
                    continue;
                }
                let next = self.sys.step_fire(state, &step)?;
                let mut candidate = vec![prefix];
                candidate.extend(self.best_layering(&next, rests.into_iter().collect(), memo)?);
                let better = match &best {
                    None => true,
                    Some(b) => self.cmp_index_layerings(&candidate, b).is_lt(),
                };
                if better {
                    best = Some(candidate);
                }
            }
        }
        let best = best.expect("a single action is always a valid first layer");
        memo.insert(suffixes, best.clone());
        Ok(best)
    }

    // Index order coincides with action order, so this agrees with
    // `cmp_layerings` on the decoded layers.
    fn cmp_index_layerings(&self, a: &[Vec<u16>], b: &[Vec<u16>]) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            a.iter()
                .zip(b)
                .map(|(x, y)| y.len().cmp(&x.len()).then_with(|| x.cmp(y)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}
