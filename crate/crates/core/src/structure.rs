//! The point set P = ∏ Δ_i over a poset, its projections π_J, and the
//! ancestral partitions C_J.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::poset::{AncestralSet, ElemSet, Poset};

/// Upper bound on how many points a partition materialization will touch.
pub const MAX_PARTITION_POINTS: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("expected {expected} alphabet sizes, got {got}")]
    SizeCountMismatch { expected: usize, got: usize },
    #[error("alphabet size for element `{label}` is {size}, must be at least 2")]
    SizeTooSmall { label: String, size: u64 },
    #[error("point has {got} coordinates, expected {expected}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("coordinate {value} out of range [0,{size}) for element `{label}`")]
    CoordinateRange {
        label: String,
        value: u64,
        size: u64,
    },
    #[error("partition of {classes} classes exceeds cap {cap}")]
    ClassCapExceeded { classes: BigUint, cap: u64 },
    #[error("point set of size {v} does not fit the materialization budget")]
    PointSetTooLarge { v: BigUint },
    #[error("block is empty")]
    EmptyBlock,
    #[error("duplicate point {0} in block")]
    DuplicatePoint(String),
}

/// A point δ ∈ P: one coordinate per poset element, in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<u64>,
}

impl Point {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> u64 {
        self.coords[i]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (n, c) in self.coords.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A tuple ν ∈ Δ_J: coordinates for exactly the members of an ancestral
/// support J, in canonical order. Δ_∅ is the unique empty tuple.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjectedTuple {
    support: AncestralSet,
    coords: Vec<u64>,
}

impl ProjectedTuple {
    pub fn support(&self) -> AncestralSet {
        self.support
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

/// Poset plus alphabet sizes e_i ≥ 2; owns P = ∏ Δ_i with Δ_i = {0,…,e_i−1}.
#[derive(Clone, Debug)]
pub struct BlockStructure {
    poset: Poset,
    sizes: Vec<u64>,
}

impl BlockStructure {
    pub fn new(poset: Poset, sizes: Vec<u64>) -> Result<Self, StructureError> {
        if sizes.len() != poset.len() {
            return Err(StructureError::SizeCountMismatch {
                expected: poset.len(),
                got: sizes.len(),
            });
        }
        for (i, &e) in sizes.iter().enumerate() {
            if e < 2 {
                return Err(StructureError::SizeTooSmall {
                    label: poset.label(i).to_string(),
                    size: e,
                });
            }
        }
        Ok(BlockStructure { poset, sizes })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn size_of(&self, i: usize) -> u64 {
        self.sizes[i]
    }

    /// ∏_{i ∈ s} e_i as an exact integer.
    pub fn product_over(&self, s: ElemSet) -> BigUint {
        let mut acc = BigUint::one();
        for i in s.iter() {
            acc *= BigUint::from(self.sizes[i]);
        }
        acc
    }

    /// v = |P| = ∏ e_i.
    pub fn point_count(&self) -> BigUint {
        self.product_over(ElemSet::full(self.len()))
    }

    /// v when it fits in u64 (the tiny-scale paths need this).
    pub fn point_count_u64(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for &e in &self.sizes {
            acc = acc.checked_mul(e)?;
        }
        Some(acc)
    }

    /// Class size c_J = ∏_{j ∈ Jᶜ} e_j.
    pub fn class_size(&self, j: AncestralSet) -> BigUint {
        self.product_over(j.set().complement_in(self.len()))
    }

    /// Class count d_J = ∏_{j ∈ J} e_j.
    pub fn class_count(&self, j: AncestralSet) -> BigUint {
        self.product_over(j.set())
    }

    /// Validate raw coordinates as a point of this structure.
    pub fn point(&self, coords: Vec<u64>) -> Result<Point, StructureError> {
        if coords.len() != self.len() {
            return Err(StructureError::CoordinateCount {
                expected: self.len(),
                got: coords.len(),
            });
        }
        for (i, &c) in coords.iter().enumerate() {
            if c >= self.sizes[i] {
                return Err(StructureError::CoordinateRange {
                    label: self.poset.label(i).to_string(),
                    value: c,
                    size: self.sizes[i],
                });
            }
        }
        Ok(Point { coords })
    }

    /// δ π_J: restrict coordinates to an ancestral support.
    pub fn project(&self, p: &Point, j: AncestralSet) -> ProjectedTuple {
        ProjectedTuple {
            support: j,
            coords: j.iter().map(|i| p.coords[i]).collect(),
        }
    }

    /// The induced map Δ_{J'} → Δ_J for J ⊆ J'.
    pub fn project_tuple(&self, t: &ProjectedTuple, j: AncestralSet) -> ProjectedTuple {
        debug_assert!(j.set().is_subset_of(t.support.set()));
        let members: Vec<usize> = t.support.iter().collect();
        let coords = j
            .iter()
            .map(|i| {
                let pos = members.binary_search(&i).expect("j is a subset of support");
                t.coords[pos]
            })
            .collect();
        ProjectedTuple { support: j, coords }
    }

    /// Assemble a tuple over an ancestral support from raw coordinates.
    pub fn tuple(&self, j: AncestralSet, coords: Vec<u64>) -> Result<ProjectedTuple, StructureError> {
        let members: Vec<usize> = j.iter().collect();
        if coords.len() != members.len() {
            return Err(StructureError::CoordinateCount {
                expected: members.len(),
                got: coords.len(),
            });
        }
        for (pos, &c) in coords.iter().enumerate() {
            let i = members[pos];
            if c >= self.sizes[i] {
                return Err(StructureError::CoordinateRange {
                    label: self.poset.label(i).to_string(),
                    value: c,
                    size: self.sizes[i],
                });
            }
        }
        Ok(ProjectedTuple { support: j, coords })
    }

    /// Iterate all of P in odometer order (last coordinate fastest). Lazy;
    /// walking it costs v steps.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        MixedRadix::new(self.sizes.clone()).map(|coords| Point { coords })
    }

    /// Materialize the partition C_J as (ν, class) pairs in Δ_J odometer
    /// order. Errors when the class count exceeds `class_cap` (callers fall
    /// back to the sparse χ path) or v does not fit in memory terms.
    pub fn partition_classes(
        &self,
        j: AncestralSet,
        class_cap: u64,
    ) -> Result<Vec<(ProjectedTuple, Vec<Point>)>, StructureError> {
        let d = self.class_count(j);
        if d > BigUint::from(class_cap) {
            return Err(StructureError::ClassCapExceeded {
                classes: d,
                cap: class_cap,
            });
        }
        if self
            .point_count_u64()
            .is_none_or(|v| v > MAX_PARTITION_POINTS)
        {
            return Err(StructureError::PointSetTooLarge {
                v: self.point_count(),
            });
        }
        let members: Vec<usize> = j.iter().collect();
        let rest: Vec<usize> = j.set().complement_in(self.len()).iter().collect();
        let mut out = Vec::new();
        for tuple_coords in MixedRadix::new(members.iter().map(|&i| self.sizes[i]).collect()) {
            let tuple = ProjectedTuple {
                support: j,
                coords: tuple_coords.clone(),
            };
            let mut class = Vec::new();
            for rest_coords in MixedRadix::new(rest.iter().map(|&i| self.sizes[i]).collect()) {
                let mut coords = vec![0u64; self.len()];
                for (pos, &i) in members.iter().enumerate() {
                    coords[i] = tuple_coords[pos];
                }
                for (pos, &i) in rest.iter().enumerate() {
                    coords[i] = rest_coords[pos];
                }
                class.push(Point { coords });
            }
            out.push((tuple, class));
        }
        Ok(out)
    }
}

/// Odometer over a product of ranges `0..radices[i]`, last index fastest.
/// An empty radix list yields the single empty tuple.
pub(crate) struct MixedRadix {
    radices: Vec<u64>,
    current: Vec<u64>,
    done: bool,
}

impl MixedRadix {
    pub(crate) fn new(radices: Vec<u64>) -> Self {
        let done = radices.contains(&0);
        MixedRadix {
            current: vec![0; radices.len()],
            radices,
            done,
        }
    }
}

impl Iterator for MixedRadix {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut pos = self.radices.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.current[pos] += 1;
            if self.current[pos] < self.radices[pos] {
                break;
            }
            self.current[pos] = 0;
        }
        Some(out)
    }
}
