//! Generalised wreath product elements, their action on points, orbital
//! classification, orbital sizes, and exhaustive enumeration at tiny scale.
//!
//! An element is a tuple (f_i)_{i∈I} where f_i maps each tuple of Δ_{A(i)}
//! to a permutation of Δ_i; it moves a point coordinatewise, the permutation
//! applied at i being selected by the point's coordinates above i.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::block::Block;
use crate::poset::{AncestralSet, ElemSet};
use crate::structure::{BlockStructure, MixedRadix, Point};

/// Default cap on the number of enumerated group elements.
pub const DEFAULT_GROUP_CAP: u64 = 1_000_000;

/// Default cap on v for paths that materialize a block orbit.
pub const DEFAULT_POINT_CAP: u64 = 10_000;

/// Largest tuple space |Δ_{A(i)}| an element representation may index.
const MAX_TUPLE_SPACE: u64 = 1 << 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GwpError {
    #[error("permutation images {0:?} are not a bijection of 0..{1}")]
    NotAPermutation(Vec<u32>, u64),
    #[error("permutation degree {got} does not match alphabet size {expected} of element `{label}`")]
    DegreeMismatch {
        label: String,
        expected: u64,
        got: u64,
    },
    #[error("component group on `{label}` needs more than {cap} elements")]
    ComponentTooLarge { label: String, cap: u64 },
    #[error("tuple space over ancestors of `{label}` is too large to index")]
    TupleSpaceTooLarge { label: String },
    #[error("predicted group order exceeds cap {cap}")]
    GroupCapExceeded { cap: u64 },
    #[error("point set of size {v} exceeds cap {cap}")]
    PointCapExceeded { v: BigUint, cap: u64 },
}

/// A permutation of {0,…,n−1} in image notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Perm, GwpError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if (x as usize) >= n || seen[x as usize] {
                return Err(GwpError::NotAPermutation(images.clone(), n as u64));
            }
            seen[x as usize] = true;
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, x: u64) -> u64 {
        self.images[x as usize] as u64
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Perm { images }
    }
}

/// All permutations of {0,…,n−1} in lexicographic order of image vectors.
fn symmetric_elements(n: usize) -> Vec<Perm> {
    let mut cur: Vec<u32> = (0..n as u32).collect();
    let mut out = vec![Perm { images: cur.clone() }];
    // advance to the next lexicographic permutation until none is left
    while let Some(i) = (0..n.saturating_sub(1)).rfind(|&i| cur[i] < cur[i + 1]) {
        let j = (i + 1..n).rfind(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(Perm { images: cur.clone() });
    }
    out
}

fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

/// Closure of a generating set under composition, breadth-first; the result
/// is returned sorted so downstream enumeration is deterministic.
fn generated_elements(gens: &[Perm], n: usize, cap: u64) -> Option<Vec<Perm>> {
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut queue = VecDeque::new();
    let id = Perm::identity(n);
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        for h in gens {
            let gh = g.then(h);
            if seen.insert(gh.clone()) {
                if seen.len() as u64 > cap {
                    return None;
                }
                queue.push_back(gh);
            }
        }
    }
    let mut out: Vec<Perm> = seen.into_iter().collect();
    out.sort();
    Some(out)
}

fn orbit_count_on_points(elements: &[Perm], n: usize) -> usize {
    let mut seen = vec![false; n];
    let mut orbits = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        orbits += 1;
        for g in elements {
            seen[g.image(start as u64) as usize] = true;
        }
    }
    orbits
}

fn orbit_count_on_ordered_pairs(elements: &[Perm], n: usize) -> usize {
    let mut seen = vec![false; n * n];
    let mut orbits = 0;
    for a in 0..n {
        for b in 0..n {
            if a == b || seen[a * n + b] {
                continue;
            }
            orbits += 1;
            for g in elements {
                let (x, y) = (g.image(a as u64) as usize, g.image(b as u64) as usize);
                seen[x * n + y] = true;
            }
        }
    }
    orbits
}

#[derive(Clone, Debug)]
enum ComponentKind {
    Symmetric,
    Generated {
        elements: Vec<Perm>,
    },
}

/// One component group G_i ≤ Sym(Δ_i).
#[derive(Clone, Debug)]
pub struct ComponentGroup {
    degree: u64,
    kind: ComponentKind,
    order: BigUint,
    transitive: bool,
    two_transitive: bool,
}

impl ComponentGroup {
    fn symmetric(degree: u64) -> ComponentGroup {
        ComponentGroup {
            degree,
            kind: ComponentKind::Symmetric,
            order: factorial(degree),
            // S_e is 2-transitive for every e ≥ 2
            transitive: true,
            two_transitive: true,
        }
    }

    fn generated(label: &str, degree: u64, gens: Vec<Perm>, cap: u64) -> Result<ComponentGroup, GwpError> {
        for g in &gens {
            if g.degree() as u64 != degree {
                return Err(GwpError::DegreeMismatch {
                    label: label.to_string(),
                    expected: degree,
                    got: g.degree() as u64,
                });
            }
        }
        let n = degree as usize;
        let elements = generated_elements(&gens, n, cap).ok_or(GwpError::ComponentTooLarge {
            label: label.to_string(),
            cap,
        })?;
        let transitive = orbit_count_on_points(&elements, n) == 1;
        let two_transitive = transitive && orbit_count_on_ordered_pairs(&elements, n) == 1;
        Ok(ComponentGroup {
            degree,
            order: BigUint::from(elements.len()),
            kind: ComponentKind::Generated { elements },
            transitive,
            two_transitive,
        })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn is_transitive(&self) -> bool {
        self.transitive
    }

    pub fn is_two_transitive(&self) -> bool {
        self.two_transitive
    }

    /// Materialize all elements (deterministic order). The symmetric default
    /// is generated on demand; the cap keeps that honest.
    pub fn elements(&self, label: &str, cap: u64) -> Result<Vec<Perm>, GwpError> {
        if self.order > BigUint::from(cap) {
            return Err(GwpError::ComponentTooLarge {
                label: label.to_string(),
                cap,
            });
        }
        match &self.kind {
            ComponentKind::Symmetric => Ok(symmetric_elements(self.degree as usize)),
            ComponentKind::Generated { elements } => Ok(elements.clone()),
        }
    }
}

/// The per-element component groups of a generalised wreath product.
/// Defaults to the full symmetric group on every component.
#[derive(Clone, Debug)]
pub struct ComponentGroups {
    comps: Vec<ComponentGroup>,
}

impl ComponentGroups {
    pub fn symmetric(structure: &BlockStructure) -> ComponentGroups {
        ComponentGroups {
            comps: structure
                .sizes()
                .iter()
                .map(|&e| ComponentGroup::symmetric(e))
                .collect(),
        }
    }

    /// Per-element generator overrides; `None` keeps the symmetric default.
    pub fn with_generators(
        structure: &BlockStructure,
        overrides: Vec<Option<Vec<Perm>>>,
        closure_cap: u64,
    ) -> Result<ComponentGroups, GwpError> {
        assert_eq!(overrides.len(), structure.len());
        let mut comps = Vec::with_capacity(overrides.len());
        for (i, ov) in overrides.into_iter().enumerate() {
            let e = structure.size_of(i);
            comps.push(match ov {
                None => ComponentGroup::symmetric(e),
                Some(gens) => {
                    ComponentGroup::generated(structure.poset().label(i), e, gens, closure_cap)?
                }
            });
        }
        Ok(ComponentGroups { comps })
    }

    pub fn component(&self, i: usize) -> &ComponentGroup {
        &self.comps[i]
    }

    pub fn all_two_transitive(&self) -> bool {
        self.comps.iter().all(|c| c.two_transitive)
    }

    /// |F| = ∏ |G_i|^{|Δ_{A(i)}|}, exact. Only sensible at tiny scale; the
    /// exponents must fit in u64.
    pub fn predicted_order(&self, structure: &BlockStructure) -> BigUint {
        let mut acc = BigUint::one();
        for (i, comp) in self.comps.iter().enumerate() {
            let m = structure.product_over(structure.poset().up_set_strict(i));
            let m = u64::try_from(&m).expect("tuple space exponent fits u64");
            acc *= comp.order.pow(m as u32);
        }
        acc
    }

    /// |F| when it does not exceed `cap`, else None. Safe on structures of
    /// any size.
    pub fn predicted_order_capped(&self, structure: &BlockStructure, cap: u64) -> Option<u64> {
        let cap128 = cap as u128;
        let mut total: u128 = 1;
        for (i, comp) in self.comps.iter().enumerate() {
            if comp.order.is_one() {
                continue;
            }
            let order = u64::try_from(&comp.order).ok().filter(|&o| o <= cap)? as u128;
            // m_i factors of `order`; each multiplication at least doubles,
            // so bail long before m_i could overflow anything.
            let mut m: u128 = 1;
            for j in structure.poset().up_set_strict(i).iter() {
                m = m.checked_mul(structure.size_of(j) as u128)?;
                if m > 128 {
                    return None; // 2^128 worth of factors always busts the cap
                }
            }
            for _ in 0..m {
                total = total.checked_mul(order)?;
                if total > cap128 {
                    return None;
                }
            }
        }
        Some(total as u64)
    }
}

/// Mixed-radix index layout for the tuple spaces Δ_{A(i)}; shared by every
/// element acting on one structure.
#[derive(Debug)]
pub struct GwpLayout {
    structure: Arc<BlockStructure>,
    /// per element i: (members of A(i), place weights), last member fastest
    spaces: Vec<(Vec<usize>, Vec<u64>)>,
}

impl GwpLayout {
    pub fn new(structure: Arc<BlockStructure>) -> Result<GwpLayout, GwpError> {
        let mut spaces = Vec::with_capacity(structure.len());
        for i in 0..structure.len() {
            let members: Vec<usize> = structure.poset().up_set_strict(i).iter().collect();
            let mut weights = vec![1u64; members.len()];
            let mut acc: u64 = 1;
            for pos in (0..members.len()).rev() {
                weights[pos] = acc;
                acc = acc
                    .checked_mul(structure.size_of(members[pos]))
                    .filter(|&a| a <= MAX_TUPLE_SPACE)
                    .ok_or_else(|| GwpError::TupleSpaceTooLarge {
                        label: structure.poset().label(i).to_string(),
                    })?;
            }
            spaces.push((members, weights));
        }
        Ok(GwpLayout { structure, spaces })
    }

    pub fn structure(&self) -> &Arc<BlockStructure> {
        &self.structure
    }

    /// |Δ_{A(i)}|
    pub fn tuple_count(&self, i: usize) -> usize {
        let (members, _) = &self.spaces[i];
        members
            .iter()
            .map(|&j| self.structure.size_of(j) as usize)
            .product()
    }

    fn tuple_index(&self, i: usize, p: &Point) -> usize {
        let (members, weights) = &self.spaces[i];
        members
            .iter()
            .zip(weights)
            .map(|(&j, &w)| p.coord(j) * w)
            .sum::<u64>() as usize
    }

    /// δf: coordinate i of the image is f_i(δπ_{A(i)}) applied to δ_i.
    pub fn apply(&self, f: &GwpElement, p: &Point) -> Point {
        let coords = (0..self.structure.len())
            .map(|i| f.maps[i][self.tuple_index(i, p)].image(p.coord(i)))
            .collect();
        self.structure
            .point(coords)
            .expect("permutation images stay in range")
    }

    /// The permutation this element induces on all of P, as point images in
    /// odometer order. Tiny scale only (walks all of P).
    pub fn induced_point_images(&self, f: &GwpElement) -> Vec<Point> {
        self.structure.points().map(|p| self.apply(f, &p)).collect()
    }
}

/// An element (f_i)_{i∈I}: for each poset element, one permutation of Δ_i
/// per tuple of Δ_{A(i)} (indexed by the layout).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GwpElement {
    maps: Vec<Vec<Perm>>,
}

impl GwpElement {
    pub fn identity(layout: &GwpLayout) -> GwpElement {
        let maps = (0..layout.structure.len())
            .map(|i| {
                vec![
                    Perm::identity(layout.structure.size_of(i) as usize);
                    layout.tuple_count(i)
                ]
            })
            .collect();
        GwpElement { maps }
    }

    pub fn from_maps(layout: &GwpLayout, maps: Vec<Vec<Perm>>) -> Result<GwpElement, GwpError> {
        assert_eq!(maps.len(), layout.structure.len());
        for (i, m) in maps.iter().enumerate() {
            assert_eq!(m.len(), layout.tuple_count(i), "map size for component {i}");
            for perm in m {
                if perm.degree() as u64 != layout.structure.size_of(i) {
                    return Err(GwpError::DegreeMismatch {
                        label: layout.structure.poset().label(i).to_string(),
                        expected: layout.structure.size_of(i),
                        got: perm.degree() as u64,
                    });
                }
            }
        }
        Ok(GwpElement { maps })
    }

    /// Replace the map at component `i` by a constant permutation.
    pub fn with_constant_map(mut self, i: usize, perm: Perm) -> GwpElement {
        for slot in &mut self.maps[i] {
            *slot = perm.clone();
        }
        self
    }

    /// Replace one slot of the map at component `i`.
    pub fn with_map_entry(mut self, i: usize, tuple_index: usize, perm: Perm) -> GwpElement {
        self.maps[i][tuple_index] = perm;
        self
    }

    /// f_j = ι_j for all j in the given set; these elements form the kernel
    /// of the action on the partition C_J.
    pub fn is_identity_on(&self, set: ElemSet) -> bool {
        set.iter().all(|i| self.maps[i].iter().all(Perm::is_identity))
    }
}

/// All elements of F = ∏ G_i^{|Δ_{A(i)}|}, in deterministic odometer order.
/// Errors when the predicted order exceeds `cap`.
pub fn enumerate_group(
    layout: &GwpLayout,
    groups: &ComponentGroups,
    cap: u64,
) -> Result<Vec<GwpElement>, GwpError> {
    let structure = &layout.structure;
    let order = groups
        .predicted_order_capped(structure, cap)
        .ok_or(GwpError::GroupCapExceeded { cap })?;
    let mut comp_elems = Vec::with_capacity(structure.len());
    for i in 0..structure.len() {
        comp_elems.push(groups.component(i).elements(structure.poset().label(i), cap)?);
    }
    // one odometer slot per (component, tuple) pair
    let slots: Vec<usize> = (0..structure.len())
        .flat_map(|i| std::iter::repeat_n(i, layout.tuple_count(i)))
        .collect();
    let radices: Vec<u64> = slots.iter().map(|&i| comp_elems[i].len() as u64).collect();
    let mut out = Vec::with_capacity(order as usize);
    for choice in MixedRadix::new(radices) {
        let mut maps: Vec<Vec<Perm>> = (0..structure.len())
            .map(|i| Vec::with_capacity(layout.tuple_count(i)))
            .collect();
        for (slot, &c) in choice.iter().enumerate() {
            let i = slots[slot];
            maps[i].push(comp_elems[i][c as usize].clone());
        }
        out.push(GwpElement { maps });
    }
    debug_assert_eq!(out.len() as u64, order);
    Ok(out)
}

/// The eq-set of a pair: coordinates where the two points agree.
pub fn agreement_set(a: &Point, b: &Point) -> ElemSet {
    ElemSet::from_indices(
        a.coords()
            .iter()
            .zip(b.coords())
            .enumerate()
            .filter(|(_, (x, y))| x == y)
            .map(|(i, _)| i),
    )
}

/// The largest ancestral subset of an agreement set: ⋃ { A[i] | A[i] ⊆ eq }.
pub(crate) fn orbital_from_agreement(
    structure: &BlockStructure,
    eq: ElemSet,
) -> AncestralSet {
    let poset = structure.poset();
    let mut j = ElemSet::EMPTY;
    for i in eq.iter() {
        let closed = poset.up_set_closed(i).set();
        if closed.is_subset_of(eq) {
            j = j.union(closed);
        }
    }
    let j = poset.ancestral(j).expect("union of closed up-sets is ancestral");
    // re-check the defining condition: agreement exactly on J, disagreement
    // on all of ∂J
    assert!(j.set().is_subset_of(eq));
    assert!(poset.border(j).intersection(eq).is_empty());
    j
}

/// The unique ancestral J with (δ,ε) ∈ O_J: the pair agrees on J and differs
/// on all of ∂J. The diagonal pairs land in O_I.
pub fn orbital_of_pair(structure: &BlockStructure, a: &Point, b: &Point) -> AncestralSet {
    orbital_from_agreement(structure, agreement_set(a, b))
}

/// |O_J|, by the product form, cross-checked against the alternating-sum
/// form; |O_I| = v.
pub fn orbital_size(structure: &BlockStructure, j: AncestralSet) -> BigUint {
    let poset = structure.poset();
    let n = structure.len();
    let v = structure.point_count();
    if j.len() == n {
        return v;
    }
    let border = poset.border(j);
    let rest = j.set().union(border).complement_in(n);
    let mut product_form = v.clone();
    for i in border.iter() {
        product_form *= BigUint::from(structure.size_of(i) - 1);
    }
    product_form *= structure.product_over(rest);

    let mut alternating = BigInt::zero();
    for s in border.subsets() {
        let term = BigInt::from(structure.product_over(j.set().union(s).complement_in(n)));
        if s.len() % 2 == 0 {
            alternating += term;
        } else {
            alternating -= term;
        }
    }
    let alternating_form = BigInt::from(v) * alternating;
    assert!(!alternating_form.is_negative());
    assert_eq!(
        BigInt::from(product_form.clone()),
        alternating_form,
        "the two closed forms for |O_J| disagree"
    );
    product_form
}

/// ℬ = B^F as a set (not multiset) of distinct blocks, canonically sorted.
/// Errors when v exceeds `v_cap`.
pub fn orbit_of_block(
    layout: &GwpLayout,
    block: &Block,
    elements: &[GwpElement],
    v_cap: u64,
) -> Result<Vec<Block>, GwpError> {
    let v = layout.structure.point_count();
    if v > BigUint::from(v_cap) {
        return Err(GwpError::PointCapExceeded { v, cap: v_cap });
    }
    let mut images: BTreeSet<Vec<Point>> = BTreeSet::new();
    for f in elements {
        let mut pts: Vec<Point> = block.points().iter().map(|p| layout.apply(f, p)).collect();
        pts.sort();
        images.insert(pts);
    }
    Ok(images
        .into_iter()
        .map(|pts| {
            Block::new(Arc::clone(&layout.structure), pts)
                .expect("image of a valid block is valid")
        })
        .collect())
}

/// True iff every map in `fs` sends every C_J-class onto a C_J-class.
/// Walks all of P for each map; tiny scale only.
pub fn partition_invariant_under<F: Fn(&Point) -> Point>(
    structure: &BlockStructure,
    j: AncestralSet,
    fs: &[F],
) -> bool {
    for f in fs {
        let mut class_image: HashMap<Vec<u64>, Vec<u64>> = HashMap::new();
        for p in structure.points() {
            let from = structure.project(&p, j).coords().to_vec();
            let to = structure.project(&f(&p), j).coords().to_vec();
            if let Some(prev) = class_image.get(&from) {
                if *prev != to {
                    return false;
                }
            } else {
                class_image.insert(from, to);
            }
        }
    }
    true
}

/// Partition invariance for enumerated group elements.
pub fn verify_partition_invariance(
    layout: &GwpLayout,
    elements: &[GwpElement],
    j: AncestralSet,
) -> bool {
    let fs: Vec<_> = elements
        .iter()
        .map(|f| move |p: &Point| layout.apply(f, p))
        .collect();
    partition_invariant_under(&layout.structure, j, &fs)
}
