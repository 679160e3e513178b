//! Structural invariants of posets, projections and the μ statistic on
//! randomized instances.

use gwdesign::poset::ElemSet;
use gwdesign::sample;
use num_bigint::BigUint;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ancestral_family_laws(seed in any::<u64>(), n in 2usize..=6) {
        let poset = sample::random_poset(&mut sample::rng(seed), n, 0.4);
        let subs = poset.ancestral_subsets();
        // closed under union and intersection
        for a in &subs {
            for b in &subs {
                prop_assert!(poset.is_ancestral(a.set().union(b.set())));
                prop_assert!(poset.is_ancestral(a.set().intersection(b.set())));
            }
        }
        for j in &subs {
            // any border part extends ancestrally
            let border = poset.border(*j);
            for s in border.subsets() {
                prop_assert!(poset.is_ancestral(j.set().union(s)));
            }
            // J = ⋃_{j∈J} A[j]
            let mut u = ElemSet::EMPTY;
            for i in j.iter() {
                u = u.union(poset.up_set_closed(i).set());
            }
            prop_assert_eq!(u, j.set());
        }
        // ∂I = ∅ and A(i), A[i] are ancestral
        prop_assert!(poset.border(poset.full_set()).is_empty());
        for i in 0..n {
            prop_assert!(poset.is_ancestral(poset.up_set_strict(i)));
        }
    }

    #[test]
    fn projection_composition_and_refinement(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let structure = sample::random_structure(&mut rng, 4, 4);
        let block = sample::random_block(&mut rng, &structure);
        let subs = structure.poset().ancestral_subsets();
        for &ja in &subs {
            for &jb in &subs {
                if !ja.set().is_subset_of(jb.set()) {
                    continue;
                }
                // π_{J'} then π_J equals π_J
                for p in block.points() {
                    let direct = structure.project(p, ja);
                    let via = structure.project_tuple(&structure.project(p, jb), ja);
                    prop_assert_eq!(direct, via);
                }
                // finer partitions cannot raise the sum of squares
                prop_assert!(block.mu(jb) <= block.mu(ja));
            }
        }
    }

    #[test]
    fn mu_bounds_and_chi_totals(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let structure = sample::random_structure(&mut rng, 4, 4);
        let block = sample::random_block(&mut rng, &structure);
        let k = BigUint::from(block.k());
        for j in structure.poset().ancestral_subsets() {
            let total: u64 = block.projection_counts(j).values().sum();
            prop_assert_eq!(total, block.k());
            let mu = block.mu(j);
            prop_assert!(mu >= k.clone() && mu <= &k * &k);
        }
        prop_assert_eq!(block.mu(structure.poset().full_set()), k.clone());
        prop_assert_eq!(block.mu(structure.poset().empty_set()), &k * &k);
    }
}
