//! Blocks (finite point sets) with their sparse array function χ_B and the
//! sum-of-squares statistic μ_B.
//!
//! χ_B is never computed by enumerating Δ_J: the block's points are grouped
//! by projected tuple, so at most k tuples are ever touched. Tuples that no
//! point hits count 0 without being materialized.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::poset::AncestralSet;
use crate::structure::{BlockStructure, Point, ProjectedTuple, StructureError};

/// Sparse counts of block points per projected tuple, for one support J.
pub type ProjectionCounts = HashMap<Vec<u64>, u64>;

#[derive(Default)]
struct BlockCache {
    counts: HashMap<AncestralSet, Arc<ProjectionCounts>>,
    mu: HashMap<AncestralSet, BigUint>,
}

/// A nonempty set of points of one structure. Cheap to share; the χ/μ caches
/// sit behind a lock so concurrent readers are fine.
pub struct Block {
    structure: Arc<BlockStructure>,
    points: Vec<Point>,
    cache: Mutex<BlockCache>,
}

impl Block {
    /// Sorts, validates and dedup-checks the points. The empty block is
    /// rejected; nothing downstream is defined for it.
    pub fn new(structure: Arc<BlockStructure>, points: Vec<Point>) -> Result<Self, StructureError> {
        if points.is_empty() {
            return Err(StructureError::EmptyBlock);
        }
        let mut points = points;
        for p in &points {
            // re-validate: points may come from another structure
            structure.point(p.coords().to_vec())?;
        }
        points.sort();
        for w in points.windows(2) {
            if w[0] == w[1] {
                return Err(StructureError::DuplicatePoint(format!("{:?}", w[0])));
            }
        }
        Ok(Block {
            structure,
            points,
            cache: Mutex::new(BlockCache::default()),
        })
    }

    pub fn from_coords(
        structure: Arc<BlockStructure>,
        coords: Vec<Vec<u64>>,
    ) -> Result<Self, StructureError> {
        let points = coords
            .into_iter()
            .map(|c| structure.point(c))
            .collect::<Result<Vec<_>, _>>()?;
        Block::new(structure, points)
    }

    pub fn structure(&self) -> &Arc<BlockStructure> {
        &self.structure
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn k(&self) -> u64 {
        self.points.len() as u64
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// The grouping of block points by δπ_J, computed once per support.
    pub fn projection_counts(&self, j: AncestralSet) -> Arc<ProjectionCounts> {
        let mut cache = self.cache.lock().unwrap();
        if let Some(c) = cache.counts.get(&j) {
            return Arc::clone(c);
        }
        let members: Vec<usize> = j.iter().collect();
        let mut counts: ProjectionCounts = HashMap::new();
        for p in &self.points {
            let key: Vec<u64> = members.iter().map(|&i| p.coord(i)).collect();
            *counts.entry(key).or_insert(0) += 1;
        }
        let counts = Arc::new(counts);
        cache.counts.insert(j, Arc::clone(&counts));
        counts
    }

    /// (ν)χ_B = |{ ε ∈ B | ε π_J = ν }|.
    pub fn chi(&self, tuple: &ProjectedTuple) -> u64 {
        self.projection_counts(tuple.support())
            .get(tuple.coords())
            .copied()
            .unwrap_or(0)
    }

    /// μ_B(J) = Σ_{ν ∈ Δ_J} ((ν)χ_B)².
    pub fn mu(&self, j: AncestralSet) -> BigUint {
        if let Some(m) = self.cache.lock().unwrap().mu.get(&j) {
            return m.clone();
        }
        let counts = self.projection_counts(j);
        let mut acc = BigUint::zero();
        for &c in counts.values() {
            acc += BigUint::from(c) * BigUint::from(c);
        }
        self.cache.lock().unwrap().mu.insert(j, acc.clone());
        acc
    }

    /// The image B^f under a point bijection, as a new block.
    pub fn map_points<F: Fn(&Point) -> Point>(&self, f: F) -> Result<Block, StructureError> {
        let images: Vec<Point> = self.points.iter().map(f).collect();
        Block::new(Arc::clone(&self.structure), images)
    }
}

impl Clone for Block {
    fn clone(&self) -> Self {
        // caches are recomputable; don't bother copying them
        Block {
            structure: Arc::clone(&self.structure),
            points: self.points.clone(),
            cache: Mutex::new(BlockCache::default()),
        }
    }
}

impl PartialEq for Block {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl Eq for Block {}

impl std::fmt::Debug for Block {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Block")
            .field("k", &self.points.len())
            .field("points", &self.points)
            .finish()
    }
}
