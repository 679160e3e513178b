//! Finite posets, their ancestral (upward-closed) subsets, and borders.
//!
//! Elements carry string labels; the order the labels were given in is the
//! canonical order used everywhere (coordinates, serialization, reports).
//! Internally elements are indices `0..n` into that order and subsets are
//! bitmasks.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Hard limit imposed by the bitmask representation (the 2^n subset walk
/// needs n to stay below the shift width anyway).
pub const MAX_ELEMENTS: usize = 63;

/// Default cap on the number of elements; ancestral-subset enumeration walks
/// all 2^n bitmasks, so this keeps construction honest about the cost.
pub const DEFAULT_ELEMENT_CAP: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("poset has {got} elements, cap is {cap}")]
    TooManyElements { got: usize, cap: usize },
    #[error("relation cycle through element `{0}`")]
    Cycle(String),
    #[error("subset {0} is not ancestral")]
    NotAncestral(String),
    #[error("shape classification needs at least 2 elements, got {0}")]
    TooSmall(usize),
}

/// A subset of poset elements, by canonical index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ElemSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        ElemSet(1 << i)
    }

    pub fn full(n: usize) -> Self {
        if n == 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElemSet(0);
        for i in iter {
            s.0 |= 1 << i;
        }
        s
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        ElemSet(self.0 | 1 << i)
    }

    pub fn union(self, o: Self) -> Self {
        ElemSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        ElemSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        ElemSet(self.0 & !o.0)
    }

    pub fn complement_in(self, n: usize) -> Self {
        Self::full(n).difference(self)
    }

    pub fn is_subset_of(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Member indices in ascending (canonical) order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// All subsets of this set, including the empty set and the set itself.
    pub fn subsets(self) -> impl Iterator<Item = ElemSet> {
        let mask = self.0;
        let mut cur = 0u64;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = ElemSet(cur);
            if cur == mask {
                done = true;
            } else {
                cur = (cur.wrapping_sub(mask)) & mask;
            }
            Some(out)
        })
    }

    /// Order by size, then lexicographically by ascending member list.
    /// This is the canonical order used for listing ancestral subsets.
    pub fn canonical_cmp(self, other: Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ElemSet{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// An upward-closed subset of a poset. Only obtainable through [`Poset`]
/// methods, which validate closure.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AncestralSet(ElemSet);

impl AncestralSet {
    pub fn set(self) -> ElemSet {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn len(self) -> usize {
        self.0.len()
    }

    pub fn is_empty(self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.0.iter()
    }
}

/// Detected global shape of a poset, with a witness bipartition where one
/// applies. `I₂` is the canonically smallest witness.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Shape {
    Chain,
    Antichain,
    /// No order relation between the two parts.
    DirectDecomposable(ElemSet, ElemSet),
    /// Every element of the first part lies below every element of the second.
    KroneckerDecomposable(ElemSet, ElemSet),
    General,
}

/// A finite strict partial order, stored transitively closed.
#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    /// above[i] = A(i) = { j | i ≺ j }
    above: Vec<ElemSet>,
}

impl Poset {
    /// Build from element labels and strict relations `(lo, hi)` meaning
    /// `lo ≺ hi`. Relations may be cover relations or any strict pairs; the
    /// transitive closure is computed here. Cycles are an error.
    pub fn new<S: AsRef<str>>(labels: &[S], relations: &[(S, S)]) -> Result<Self, PosetError> {
        Self::with_element_cap(labels, relations, DEFAULT_ELEMENT_CAP)
    }

    pub fn with_element_cap<S: AsRef<str>>(
        labels: &[S],
        relations: &[(S, S)],
        cap: usize,
    ) -> Result<Self, PosetError> {
        let cap = cap.min(MAX_ELEMENTS);
        if labels.len() > cap {
            return Err(PosetError::TooManyElements {
                got: labels.len(),
                cap,
            });
        }
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        let mut owned = Vec::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            let l = l.as_ref().to_string();
            if index.insert(l.clone(), i).is_some() {
                return Err(PosetError::DuplicateElement(l));
            }
            owned.push(l);
        }
        let mut above = vec![ElemSet::EMPTY; n];
        for (lo, hi) in relations {
            let lo = *index
                .get(lo.as_ref())
                .ok_or_else(|| PosetError::UnknownElement(lo.as_ref().to_string()))?;
            let hi = *index
                .get(hi.as_ref())
                .ok_or_else(|| PosetError::UnknownElement(hi.as_ref().to_string()))?;
            above[lo] = above[lo].with(hi);
        }
        // Transitive closure to a fixpoint; n is small.
        loop {
            let mut changed = false;
            for i in 0..n {
                let mut acc = above[i];
                for j in above[i].iter() {
                    acc = acc.union(above[j]);
                }
                if acc != above[i] {
                    above[i] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            if above[i].contains(i) {
                return Err(PosetError::Cycle(owned[i].clone()));
            }
        }
        Ok(Poset {
            labels: owned,
            index,
            above,
        })
    }

    /// A chain 1 ≺ 2 ≺ … ≺ s with labels "1".."s".
    pub fn chain(s: usize) -> Poset {
        let labels: Vec<String> = (1..=s).map(|i| i.to_string()).collect();
        let rels: Vec<(String, String)> = (1..s)
            .map(|i| (i.to_string(), (i + 1).to_string()))
            .collect();
        Poset::new(&labels, &rels).expect("chain is a valid poset")
    }

    /// An antichain on s elements with labels "1".."s".
    pub fn antichain(s: usize) -> Poset {
        let labels: Vec<String> = (1..=s).map(|i| i.to_string()).collect();
        Poset::new(&labels, &[]).expect("antichain is a valid poset")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, PosetError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| PosetError::UnknownElement(label.to_string()))
    }

    /// i ≺ j
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.above[i].contains(j)
    }

    /// A(i) = { j | i ≺ j }. Always ancestral.
    pub fn up_set_strict(&self, i: usize) -> ElemSet {
        self.above[i]
    }

    /// A[i] = A(i) ∪ {i}.
    pub fn up_set_closed(&self, i: usize) -> AncestralSet {
        AncestralSet(self.above[i].with(i))
    }

    pub fn is_ancestral(&self, s: ElemSet) -> bool {
        s.iter().all(|i| self.above[i].is_subset_of(s))
    }

    /// Validate a subset as ancestral.
    pub fn ancestral(&self, s: ElemSet) -> Result<AncestralSet, PosetError> {
        if self.is_ancestral(s) {
            Ok(AncestralSet(s))
        } else {
            Err(PosetError::NotAncestral(self.format_set(s)))
        }
    }

    pub fn empty_set(&self) -> AncestralSet {
        AncestralSet(ElemSet::EMPTY)
    }

    pub fn full_set(&self) -> AncestralSet {
        AncestralSet(ElemSet::full(self.len()))
    }

    /// All ancestral subsets, ∅ and I included, sorted by size then by
    /// ascending member list.
    pub fn ancestral_subsets(&self) -> Vec<AncestralSet> {
        let n = self.len();
        let mut out = Vec::new();
        for bits in 0..(1u64 << n) {
            let s = ElemSet(bits);
            if self.is_ancestral(s) {
                out.push(AncestralSet(s));
            }
        }
        out.sort_by(|a, b| a.0.canonical_cmp(b.0));
        out
    }

    /// Proper nonempty ancestral subsets in canonical order.
    pub fn proper_nonempty_ancestral_subsets(&self) -> Vec<AncestralSet> {
        self.ancestral_subsets()
            .into_iter()
            .filter(|j| !j.is_empty() && j.len() < self.len())
            .collect()
    }

    /// Maximal elements of an arbitrary subset.
    pub fn maximal_elements(&self, s: ElemSet) -> ElemSet {
        ElemSet::from_indices(s.iter().filter(|&i| self.above[i].intersection(s).is_empty()))
    }

    /// ∂J: the maximal elements of the complement of J. ∂I = ∅.
    pub fn border(&self, j: AncestralSet) -> ElemSet {
        self.maximal_elements(j.0.complement_in(self.len()))
    }

    /// J ∪ S for S ⊆ ∂J; such unions are always ancestral.
    pub fn union_with_border_part(&self, j: AncestralSet, s: ElemSet) -> AncestralSet {
        debug_assert!(s.is_subset_of(self.border(j)));
        debug_assert!(self.is_ancestral(j.0.union(s)));
        AncestralSet(j.0.union(s))
    }

    /// The induced sub-poset on `s`, keeping canonical label order.
    pub fn induced(&self, s: ElemSet) -> Poset {
        let members: Vec<usize> = s.iter().collect();
        let labels: Vec<String> = members.iter().map(|&i| self.labels[i].clone()).collect();
        let mut rels = Vec::new();
        for &i in &members {
            for &j in &members {
                if self.precedes(i, j) {
                    rels.push((self.labels[i].clone(), self.labels[j].clone()));
                }
            }
        }
        Poset::new(&labels, &rels).expect("induced order is valid")
    }

    pub fn is_chain(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| i == j || self.precedes(i, j) || self.precedes(j, i)))
    }

    pub fn is_antichain(&self) -> bool {
        self.above.iter().all(|a| a.is_empty())
    }

    /// Elements sorted bottom-up along a chain (only meaningful when
    /// [`is_chain`](Self::is_chain) holds): the bottom has the largest strict
    /// up-set.
    pub fn chain_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.above[i].len()));
        order
    }

    /// Detect chain / antichain / direct or Kronecker bipartition / general.
    ///
    /// When several witness bipartitions exist the one with canonically
    /// smallest I₂ is reported.
    pub fn classify_shape(&self) -> Result<Shape, PosetError> {
        let n = self.len();
        if n < 2 {
            return Err(PosetError::TooSmall(n));
        }
        if self.is_chain() {
            return Ok(Shape::Chain);
        }
        if self.is_antichain() {
            return Ok(Shape::Antichain);
        }
        // Direct product: a bipartition with no cross relations exists iff the
        // comparability graph is disconnected; I₂ ranges over unions of
        // connected components.
        let comps = self.comparability_components();
        if comps.len() > 1 {
            let mut best: Option<ElemSet> = None;
            for bits in 1..(1u64 << comps.len()) - 1 {
                let mut cand = ElemSet::EMPTY;
                for (c, comp) in comps.iter().enumerate() {
                    if bits >> c & 1 == 1 {
                        cand = cand.union(*comp);
                    }
                }
                if best.is_none_or(|b| cand.canonical_cmp(b).is_lt()) {
                    best = Some(cand);
                }
            }
            let i2 = best.expect("at least two components give a candidate");
            return Ok(Shape::DirectDecomposable(i2.complement_in(n), i2));
        }
        // Kronecker: I₂ such that every element outside lies below every
        // element inside.
        let mut best: Option<ElemSet> = None;
        for bits in 1..(1u64 << n) - 1 {
            let i2 = ElemSet(bits);
            let i1 = i2.complement_in(n);
            if i1.iter().all(|a| i2.is_subset_of(self.above[a]))
                && best.is_none_or(|b| i2.canonical_cmp(b).is_lt())
            {
                best = Some(i2);
            }
        }
        if let Some(i2) = best {
            return Ok(Shape::KroneckerDecomposable(i2.complement_in(n), i2));
        }
        Ok(Shape::General)
    }

    fn comparability_components(&self) -> Vec<ElemSet> {
        let n = self.len();
        let mut seen = ElemSet::EMPTY;
        let mut comps = Vec::new();
        for start in 0..n {
            if seen.contains(start) {
                continue;
            }
            let mut comp = ElemSet::singleton(start);
            let mut frontier = vec![start];
            while let Some(i) = frontier.pop() {
                for j in 0..n {
                    if !comp.contains(j) && (self.precedes(i, j) || self.precedes(j, i)) {
                        comp = comp.with(j);
                        frontier.push(j);
                    }
                }
            }
            seen = seen.union(comp);
            comps.push(comp);
        }
        comps
    }

    /// "{1,3}" with canonical labels; "{}" for the empty set.
    pub fn format_set(&self, s: ElemSet) -> String {
        let mut out = String::from("{");
        for (n, i) in s.iter().enumerate() {
            if n > 0 {
                out.push(',');
            }
            out.push_str(&self.labels[i]);
        }
        out.push('}');
        out
    }
}
