//! Seeded random posets, structures and blocks for property testing.
//! Deterministic by construction: pass the same ChaCha seed, get the same
//! instances.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::block::Block;
use crate::poset::Poset;
use crate::structure::{BlockStructure, Point};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random poset on `n` elements labeled "1".."n": pairs (i, j) with i < j
/// in a shuffled topological order are added with the given density, so the
/// result is always acyclic.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> Poset {
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut rels = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                rels.push((labels[order[a]].clone(), labels[order[b]].clone()));
            }
        }
    }
    Poset::new(&labels, &rels).expect("random topological pairs are acyclic")
}

pub fn random_structure<R: Rng>(
    rng: &mut R,
    max_elems: usize,
    max_size: u64,
) -> Arc<BlockStructure> {
    let n = rng.gen_range(2..=max_elems.max(2));
    let poset = random_poset(rng, n, 0.4);
    let sizes: Vec<u64> = (0..n).map(|_| rng.gen_range(2..=max_size.max(2))).collect();
    Arc::new(BlockStructure::new(poset, sizes).expect("random sizes are ≥ 2"))
}

/// Decode a flat index into a point, odometer convention.
fn decode_point(structure: &BlockStructure, mut index: u64) -> Point {
    let n = structure.len();
    let mut coords = vec![0u64; n];
    for i in (0..n).rev() {
        let e = structure.size_of(i);
        coords[i] = index % e;
        index /= e;
    }
    structure.point(coords).expect("decoded coordinates are in range")
}

/// A uniform random k-subset of P with k drawn uniformly from [2, v/2]
/// (clamped to at least 2). Needs v to fit in u64.
pub fn random_block<R: Rng>(rng: &mut R, structure: &Arc<BlockStructure>) -> Block {
    let v = structure
        .point_count_u64()
        .expect("random blocks are drawn at tiny scale");
    let k = rng.gen_range(2..=(v / 2).max(2));
    random_block_of_size(rng, structure, k)
}

pub fn random_block_of_size<R: Rng>(
    rng: &mut R,
    structure: &Arc<BlockStructure>,
    k: u64,
) -> Block {
    let v = structure
        .point_count_u64()
        .expect("random blocks are drawn at tiny scale");
    assert!(k >= 1 && k <= v);
    let mut chosen = std::collections::BTreeSet::new();
    while (chosen.len() as u64) < k {
        chosen.insert(rng.gen_range(0..v));
    }
    let points: Vec<Point> = chosen
        .into_iter()
        .map(|i| decode_point(structure, i))
        .collect();
    Block::new(Arc::clone(structure), points).expect("sampled points are distinct and valid")
}

/// Random chain structure with s ≤ `max_s` elements and sizes ≤ `max_size`.
pub fn random_chain_structure<R: Rng>(
    rng: &mut R,
    max_s: usize,
    max_size: u64,
) -> Arc<BlockStructure> {
    let s = rng.gen_range(2..=max_s.max(2));
    let sizes: Vec<u64> = (0..s).map(|_| rng.gen_range(2..=max_size.max(2))).collect();
    Arc::new(BlockStructure::new(Poset::chain(s), sizes).expect("chain sizes are ≥ 2"))
}

pub fn random_antichain_structure<R: Rng>(
    rng: &mut R,
    max_s: usize,
    max_size: u64,
) -> Arc<BlockStructure> {
    let s = rng.gen_range(2..=max_s.max(2));
    let sizes: Vec<u64> = (0..s).map(|_| rng.gen_range(2..=max_size.max(2))).collect();
    Arc::new(BlockStructure::new(Poset::antichain(s), sizes).expect("antichain sizes are ≥ 2"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let s1 = random_structure(&mut rng(7), 4, 5);
        let s2 = random_structure(&mut rng(7), 4, 5);
        assert_eq!(s1.sizes(), s2.sizes());
        assert_eq!(s1.poset().labels(), s2.poset().labels());
        let b1 = random_block(&mut rng(9), &s1);
        let b2 = random_block(&mut rng(9), &s2);
        assert_eq!(b1.points(), b2.points());
    }

    #[test]
    fn random_blocks_stay_in_bounds() {
        let mut r = rng(11);
        for _ in 0..50 {
            let s = random_structure(&mut r, 4, 4);
            let v = s.point_count_u64().unwrap();
            let b = random_block(&mut r, &s);
            assert!(b.k() >= 2 && b.k() <= (v / 2).max(2));
        }
    }

    #[test]
    fn random_posets_are_valid_and_varied() {
        let mut r = rng(13);
        let mut shapes = std::collections::BTreeSet::new();
        for _ in 0..40 {
            let p = random_poset(&mut r, 4, 0.4);
            assert_eq!(p.len(), 4);
            shapes.insert(p.ancestral_subsets().len());
        }
        assert!(shapes.len() > 1, "expected varied ancestral families");
    }
}
