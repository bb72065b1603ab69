//! Finite multisets, i.e. elements of the free commutative monoid over a
//! totally ordered set of generators, and homomorphisms between such monoids
//! presented by their values on generators.

use std::collections::btree_map;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finitely supported map from elements to positive counts.
///
/// Zero counts are never stored, so structural equality is multiset equality
/// and iteration follows the element order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multiset<K: Ord> {
    counts: BTreeMap<K, u64>,
}

impl<K: Ord> Default for Multiset<K> {
    fn default() -> Self {
        Multiset {
            counts: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Multiset<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(element: K, count: u64) -> Self {
        let mut counts = BTreeMap::new();
        if count > 0 {
            counts.insert(element, count);
        }
        Multiset { counts }
    }

    /// Builds a multiset from `(element, count)` pairs. Repeated elements are
    /// summed and zero counts dropped.
    pub fn from_counts(pairs: impl IntoIterator<Item = (K, u64)>) -> Result<Self> {
        let mut m = Multiset::new();
        for (k, n) in pairs {
            m.insert(k, n)?;
        }
        Ok(m)
    }

    /// Adds `count` copies of `element` in place.
    pub fn insert(&mut self, element: K, count: u64) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        let slot = self.counts.entry(element).or_insert(0);
        *slot = slot.checked_add(count).ok_or(Error::Overflow)?;
        Ok(())
    }

    pub fn count(&self, element: &K) -> u64 {
        self.counts.get(element).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Number of distinct elements.
    pub fn support_len(&self) -> usize {
        self.counts.len()
    }

    /// Total multiplicity (saturating).
    pub fn size(&self) -> u64 {
        self.counts.values().fold(0u64, |acc, &n| acc.saturating_add(n))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, u64)> + '_ {
        self.counts.iter().map(|(k, &n)| (k, n))
    }

    pub fn support(&self) -> impl Iterator<Item = &K> + '_ {
        self.counts.keys()
    }

    /// Each element repeated according to its count, in element order.
    pub fn elements(&self) -> impl Iterator<Item = &K> + '_ {
        self.counts
            .iter()
            .flat_map(|(k, &n)| std::iter::repeat_n(k, n as usize))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (k, n) in other.iter() {
            out.insert(k.clone(), n)?;
        }
        Ok(out)
    }

    /// `self - other`, defined only when `other <= self`.
    pub fn checked_sub(&self, other: &Self) -> Result<Self>
    where
        K: fmt::Display,
    {
        if !other.is_sub_multiset(self) {
            return Err(Error::NotSubMultiset {
                minuend: self.to_string(),
                subtrahend: other.to_string(),
            });
        }
        let mut out = self.clone();
        for (k, n) in other.iter() {
            if let btree_map::Entry::Occupied(mut e) = out.counts.entry(k.clone()) {
                let left = *e.get() - n;
                if left == 0 {
                    e.remove();
                } else {
                    e.insert(left);
                }
            }
        }
        Ok(out)
    }

    pub fn checked_scale(&self, factor: u64) -> Result<Self> {
        if factor == 0 {
            return Ok(Multiset::new());
        }
        let counts = self
            .counts
            .iter()
            .map(|(k, &n)| n.checked_mul(factor).map(|m| (k.clone(), m)))
            .collect::<Option<BTreeMap<_, _>>>()
            .ok_or(Error::Overflow)?;
        Ok(Multiset { counts })
    }

    /// Pointwise order: every count of `self` is at most the count in `other`.
    pub fn is_sub_multiset(&self, other: &Self) -> bool {
        self.counts.iter().all(|(k, &n)| n <= other.count(k))
    }

    /// Checks that every element lies in `domain`.
    pub fn check_domain(&self, domain: &BTreeSet<K>, what: &str) -> Result<()>
    where
        K: fmt::Display,
    {
        match self.support().find(|k| !domain.contains(*k)) {
            Some(k) => Err(Error::Domain(format!("{k} is not a declared {what}"))),
            None => Ok(()),
        }
    }

    /// Relabels elements through `f`, summing counts that collide.
    pub fn map_elements<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> Result<Multiset<L>> {
        let mut out = Multiset::new();
        for (k, n) in self.iter() {
            out.insert(f(k), n)?;
        }
        Ok(out)
    }
}

impl<K: Ord + Clone> FromIterator<K> for Multiset<K> {
    /// Counts occurrences. Panics only if a count exceeds `u64::MAX`.
    fn from_iter<I: IntoIterator<Item = K>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for k in iter {
            m.insert(k, 1).expect("multiset count overflow");
        }
        m
    }
}

impl<K: Ord + fmt::Display> fmt::Display for Multiset<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, n)) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {n}")?;
        }
        f.write_str("}")
    }
}

impl<K: Ord + fmt::Display> fmt::Debug for Multiset<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A monoid homomorphism `N[S] -> N[T]` given by its value on each generator.
///
/// The declared source domain is the key set of the assignments.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeneratorMap<S: Ord, T: Ord> {
    assignments: BTreeMap<S, Multiset<T>>,
}

impl<S: Ord, T: Ord> Default for GeneratorMap<S, T> {
    fn default() -> Self {
        GeneratorMap {
            assignments: BTreeMap::new(),
        }
    }
}

impl<S, T> GeneratorMap<S, T>
where
    S: Ord + Clone + fmt::Display,
    T: Ord + Clone + fmt::Display,
{
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_assignments(pairs: impl IntoIterator<Item = (S, Multiset<T>)>) -> Self {
        GeneratorMap {
            assignments: pairs.into_iter().collect(),
        }
    }

    pub fn assign(&mut self, generator: S, image: Multiset<T>) {
        self.assignments.insert(generator, image);
    }

    pub fn get(&self, generator: &S) -> Option<&Multiset<T>> {
        self.assignments.get(generator)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&S, &Multiset<T>)> + '_ {
        self.assignments.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &S> + '_ {
        self.assignments.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// The free extension: `sum_e count(e) * h(e)`.
    pub fn apply(&self, input: &Multiset<S>) -> Result<Multiset<T>> {
        let mut out = Multiset::new();
        for (e, n) in input.iter() {
            let image = self
                .assignments
                .get(e)
                .ok_or_else(|| Error::Domain(format!("{e} is outside the source domain of the generator map")))?;
            for (t, m) in image.iter() {
                out.insert(t.clone(), m.checked_mul(n).ok_or(Error::Overflow)?)?;
            }
        }
        Ok(out)
    }

    /// `other ∘ self`, restricted to the generators of `self`.
    pub fn then<U>(&self, other: &GeneratorMap<T, U>) -> Result<GeneratorMap<S, U>>
    where
        U: Ord + Clone + fmt::Display,
    {
        let assignments = self
            .assignments
            .iter()
            .map(|(s, image)| Ok((s.clone(), other.apply(image)?)))
            .collect::<Result<_>>()?;
        Ok(GeneratorMap { assignments })
    }

    /// The unique target generator when the image of `generator` is a single
    /// element with count one.
    pub fn function_image(&self, generator: &S) -> Option<&T> {
        let image = self.assignments.get(generator)?;
        let mut it = image.iter();
        match (it.next(), it.next()) {
            (Some((t, 1)), None) => Some(t),
            _ => None,
        }
    }

    pub fn is_function_like(&self) -> bool {
        self.assignments.keys().all(|s| self.function_image(s).is_some())
    }
}

impl<S> GeneratorMap<S, S>
where
    S: Ord + Clone + fmt::Display,
{
    pub fn identity<'a>(domain: impl IntoIterator<Item = &'a S>) -> Self
    where
        S: 'a,
    {
        GeneratorMap {
            assignments: domain
                .into_iter()
                .map(|s| (s.clone(), Multiset::singleton(s.clone(), 1)))
                .collect(),
        }
    }
}

impl<S: Ord + fmt::Display, T: Ord + fmt::Display> fmt::Display for GeneratorMap<S, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (s, image)) in self.assignments.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}: {image}")?;
        }
        f.write_str("}")
    }
}

impl<S: Ord + fmt::Display, T: Ord + fmt::Display> fmt::Debug for GeneratorMap<S, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
