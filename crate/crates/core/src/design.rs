//! The 2-design criterion: for every proper nonempty ancestral J,
//!
//!   Σ_{S⊆∂J} (−1)^{|S|} μ_B(J∪S)  =  k(k−1)/(v−1) · ∏_{i∈∂J}(e_i−1) · ∏_{j∈(J∪∂J)ᶜ} e_j
//!
//! All equality tests are cross-multiplied exact-integer comparisons; no
//! rationals or floats anywhere. Alongside the criterion live the
//! independent pair-count oracle, full tiny-scale enumeration, and the
//! chain/antichain specializations.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::block::Block;
use crate::gwp::{
    self, enumerate_group, orbit_of_block, ComponentGroups, GwpError, GwpLayout,
};
use crate::poset::{AncestralSet, ElemSet};
use crate::structure::Point;

#[derive(Debug, Error)]
pub enum DesignError {
    #[error("poset is not a chain")]
    NotAChain,
    #[error("poset is not an antichain")]
    NotAnAntichain,
    #[error("specialized checks need at least 2 elements")]
    TooSmall,
    #[error(transparent)]
    Gwp(#[from] GwpError),
}

/// One side-by-side comparison for a single ancestral subset. `holds` means
/// `lhs · rhs_denominator == rhs_numerator` (and lhs is nonnegative).
#[derive(Clone, Debug)]
pub struct CriterionVerdict {
    pub j: AncestralSet,
    pub border: ElemSet,
    pub lhs: BigInt,
    pub rhs_numerator: BigUint,
    pub rhs_denominator: BigUint,
    pub holds: bool,
}

impl CriterionVerdict {
    /// |lhs·den − num|, used by search tooling to rank near-misses.
    /// (The ranking metric itself is plumbing, not part of the criterion.)
    pub fn cross_multiplied_gap(&self) -> BigUint {
        let cross = &self.lhs * BigInt::from(self.rhs_denominator.clone());
        (cross - BigInt::from(self.rhs_numerator.clone()))
            .abs()
            .to_biguint()
            .expect("absolute value is nonnegative")
    }
}

/// Parameters found by materializing ℬ = B^F at tiny scale.
#[derive(Clone, Debug)]
pub struct EnumeratedDesign {
    pub group_order: u64,
    /// number of distinct blocks
    pub b: u64,
    /// blocks on each point, when constant
    pub r: Option<u64>,
    /// pair coverage, when constant over all point pairs
    pub lambda: Option<u64>,
    pub is_2_design: bool,
    pub agrees_with_criterion: bool,
}

/// Per-J verdicts plus overall judgement for one (structure, block) pair.
#[derive(Clone, Debug)]
pub struct DesignReport {
    pub v: BigUint,
    pub k: u64,
    /// every component group 2-transitive, which the criterion requires
    pub two_transitive_hypothesis: bool,
    /// proper nonempty ancestral subsets, canonical order
    pub verdicts: Vec<CriterionVerdict>,
    pub empty_verdict: Option<CriterionVerdict>,
    pub is_2_design: bool,
    pub enumeration: Option<EnumeratedDesign>,
}

impl DesignReport {
    pub fn all_verdicts_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
            && self.empty_verdict.as_ref().is_none_or(|v| v.holds)
    }
}

fn k_times_k_minus_1(k: u64) -> BigUint {
    BigUint::from(k) * BigUint::from(k - 1)
}

/// The criterion comparison for one ancestral subset (∅ allowed).
pub fn criterion_verdict(block: &Block, j: AncestralSet) -> CriterionVerdict {
    let structure = block.structure();
    let poset = structure.poset();
    let n = structure.len();
    let border = poset.border(j);

    let mut lhs = BigInt::zero();
    for s in border.subsets() {
        let js = poset.union_with_border_part(j, s);
        let term = BigInt::from(block.mu(js));
        if s.len() % 2 == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }

    let mut rhs_numerator = k_times_k_minus_1(block.k());
    for i in border.iter() {
        rhs_numerator *= BigUint::from(structure.size_of(i) - 1);
    }
    rhs_numerator *= structure.product_over(j.set().union(border).complement_in(n));
    let rhs_denominator = structure.point_count() - BigUint::one();

    let holds = !lhs.is_negative()
        && &lhs * BigInt::from(rhs_denominator.clone()) == BigInt::from(rhs_numerator.clone());
    CriterionVerdict {
        j,
        border,
        lhs,
        rhs_numerator,
        rhs_denominator,
        holds,
    }
}

/// Run the criterion over every proper nonempty ancestral subset; with
/// `with_empty`, also over J = ∅ (which the others imply).
pub fn check_criterion_opts(
    block: &Block,
    groups: Option<&ComponentGroups>,
    with_empty: bool,
) -> DesignReport {
    let structure = block.structure();
    let poset = structure.poset();
    let verdicts: Vec<CriterionVerdict> = poset
        .proper_nonempty_ancestral_subsets()
        .into_iter()
        .map(|j| criterion_verdict(block, j))
        .collect();
    let nonempty_all_hold = verdicts.iter().all(|v| v.holds);
    let empty_verdict = if with_empty {
        let ev = criterion_verdict(block, poset.empty_set());
        if nonempty_all_hold {
            assert!(ev.holds, "the nonempty verdicts must imply the empty one");
        }
        Some(ev)
    } else {
        None
    };
    // Every equation holds vacuously at k = 1 (both sides 0) but a single
    // orbit of 1-point blocks covers no pair, so k ≥ 2 is part of the verdict.
    let is_2_design = nonempty_all_hold && block.k() >= 2;
    DesignReport {
        v: structure.point_count(),
        k: block.k(),
        two_transitive_hypothesis: groups.is_none_or(|g| g.all_two_transitive()),
        verdicts,
        empty_verdict,
        is_2_design,
        enumeration: None,
    }
}

/// Criterion with the symmetric-group default on every component.
pub fn check_criterion(block: &Block) -> DesignReport {
    check_criterion_opts(block, None, false)
}

/// Criterion including the J = ∅ comparison.
pub fn check_criterion_with_empty(block: &Block) -> DesignReport {
    check_criterion_opts(block, None, true)
}

/// Ordered pairs of distinct block points, bucketed by their orbital. One
/// k² pass over B×B, classifying each pair by its coordinate-agreement set;
/// entirely independent of μ_B.
pub fn orbital_pair_counts(block: &Block) -> BTreeMap<AncestralSet, u64> {
    let structure = block.structure();
    let n = structure.len();
    let points = block.points();
    // Histogram agreement masks first (flat array keeps the k² loop free of
    // hashing), then resolve each seen mask to its orbital once. Orbitals
    // are self-paired, so unordered pairs are counted and doubled.
    let use_vec = n <= 16;
    let mut mask_hist: Vec<u64> = if use_vec { vec![0; 1usize << n] } else { Vec::new() };
    let mut mask_map: HashMap<u64, u64> = HashMap::new();
    for (ai, a) in points.iter().enumerate() {
        let ac = a.coords();
        for b in &points[ai + 1..] {
            let bc = b.coords();
            let mut mask = 0u64;
            for i in 0..n {
                mask |= ((ac[i] == bc[i]) as u64) << i;
            }
            if use_vec {
                mask_hist[mask as usize] += 2;
            } else {
                *mask_map.entry(mask).or_insert(0) += 2;
            }
        }
    }
    let mut histogram: HashMap<u64, u64> = HashMap::new();
    let mut bump = |mask: u64, count: u64| {
        if count > 0 {
            let j = gwp::orbital_from_agreement(structure, ElemSet::from_bits(mask));
            *histogram.entry(j.set().bits()).or_insert(0) += count;
        }
    };
    if use_vec {
        for (mask, &count) in mask_hist.iter().enumerate() {
            bump(mask as u64, count);
        }
    } else {
        for (&mask, &count) in &mask_map {
            bump(mask, count);
        }
    }
    let poset = structure.poset();
    let mut out = BTreeMap::new();
    for j in poset.ancestral_subsets() {
        if j.len() == n {
            continue;
        }
        out.insert(j, histogram.get(&j.set().bits()).copied().unwrap_or(0));
    }
    debug_assert_eq!(
        out.values().sum::<u64>(),
        block.k() * (block.k() - 1),
        "orbitals must partition the distinct pairs"
    );
    out
}

/// |(B×B) ∩ O_J| for one proper ancestral subset, by direct k² iteration.
pub fn pair_count_oracle(block: &Block, j: AncestralSet) -> u64 {
    orbital_pair_counts(block).get(&j).copied().unwrap_or(0)
}

/// Parameters of the orbit design from explicit group elements (reusable
/// when many blocks share one enumerated group).
pub fn design_parameters_with(
    layout: &GwpLayout,
    block: &Block,
    elements: &[gwp::GwpElement],
    v_cap: u64,
) -> Result<EnumeratedDesign, GwpError> {
    let structure = layout.structure();
    let blocks = orbit_of_block(layout, block, elements, v_cap)?;
    let b = blocks.len() as u64;
    let v = structure
        .point_count_u64()
        .expect("v fits u64 under the point cap");

    let mut replication: HashMap<&Point, u64> = HashMap::new();
    let mut coverage: HashMap<(&Point, &Point), u64> = HashMap::new();
    for blk in &blocks {
        let pts = blk.points();
        for p in pts {
            *replication.entry(p).or_insert(0) += 1;
        }
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[i + 1..] {
                *coverage.entry((p, q)).or_insert(0) += 1;
            }
        }
    }
    let r = if replication.len() as u64 == v {
        let first = *replication.values().next().unwrap();
        replication.values().all(|&c| c == first).then_some(first)
    } else {
        None // some point lies in no block
    };
    let total_pairs = v * (v - 1) / 2;
    let lambda = if coverage.is_empty() {
        Some(0) // k = 1: every pair covered zero times
    } else if coverage.len() as u64 == total_pairs {
        let first = *coverage.values().next().unwrap();
        coverage.values().all(|&c| c == first).then_some(first)
    } else {
        None // uncovered pairs coexist with covered ones
    };
    let is_2_design = lambda.is_some_and(|l| l >= 1);
    Ok(EnumeratedDesign {
        group_order: elements.len() as u64,
        b,
        r,
        lambda,
        is_2_design,
        agrees_with_criterion: false, // filled by the caller
    })
}

/// Materialize ℬ = B^F, count r and the pair coverage, and cross-check the
/// verdict against the criterion. The enumeration lands in the report.
pub fn enumerate_design(
    block: &Block,
    groups: &ComponentGroups,
    group_cap: u64,
    v_cap: u64,
) -> Result<DesignReport, DesignError> {
    let layout = GwpLayout::new(block.structure().clone())?;
    let elements = enumerate_group(&layout, groups, group_cap)?;
    let mut enumerated = design_parameters_with(&layout, block, &elements, v_cap)?;
    let mut report = check_criterion_opts(block, Some(groups), false);
    enumerated.agrees_with_criterion = enumerated.is_2_design == report.is_2_design;
    report.enumeration = Some(enumerated);
    Ok(report)
}

/// Antichain specialization: every subset is ancestral and the criterion
/// collapses to  μ_B(J) = k + k(k−1)/(v−1) · (∏_{i∈Jᶜ} e_i − 1).
pub fn check_antichain_specialized(block: &Block) -> Result<DesignReport, DesignError> {
    let structure = block.structure();
    let poset = structure.poset();
    if !poset.is_antichain() {
        return Err(DesignError::NotAnAntichain);
    }
    if poset.len() < 2 {
        return Err(DesignError::TooSmall);
    }
    let v = structure.point_count();
    let den = &v - BigUint::one();
    let kk1 = k_times_k_minus_1(block.k());
    let verdicts: Vec<CriterionVerdict> = poset
        .proper_nonempty_ancestral_subsets()
        .into_iter()
        .map(|j| {
            let c_j = structure.class_size(j);
            let lhs = BigInt::from(block.mu(j));
            let rhs_numerator =
                BigUint::from(block.k()) * &den + &kk1 * (c_j - BigUint::one());
            let holds = &lhs * BigInt::from(den.clone()) == BigInt::from(rhs_numerator.clone());
            CriterionVerdict {
                j,
                border: poset.border(j), // = Jᶜ on an antichain
                lhs,
                rhs_numerator,
                rhs_denominator: den.clone(),
                holds,
            }
        })
        .collect();
    let is_2_design = verdicts.iter().all(|c| c.holds) && block.k() >= 2;
    Ok(DesignReport {
        v,
        k: block.k(),
        two_transitive_hypothesis: true,
        verdicts,
        empty_verdict: None,
        is_2_design,
        enumeration: None,
    })
}

/// Chain specialization: with the chain written c₁ ≺ … ≺ c_s and
/// A[c_i] = {c_i,…,c_s}, the conditions are
///
///   Σ_{ν ∈ Δ_{A[c₂]}} χ(ν)(χ(ν) − 1)                         = ratio · (e_{c₁} − 1)
///   Σ_{ν ∈ Δ_{A[c_i]}} χ(ν)·(χ(νπ_{A[c_{i+1}]}) − χ(ν))      = ratio · (e_{c_i} − 1)·∏_{j<i} e_{c_j}
///
/// for i = 2..s, with A[c_{s+1}] read as ∅ (so χ of the projection is k).
pub fn check_chain_specialized(block: &Block) -> Result<DesignReport, DesignError> {
    let structure = block.structure();
    let poset = structure.poset();
    if !poset.is_chain() {
        return Err(DesignError::NotAChain);
    }
    let s = poset.len();
    if s < 2 {
        return Err(DesignError::TooSmall);
    }
    let chain = poset.chain_order(); // bottom-up
    let up_from = |i: usize| -> AncestralSet {
        // A[c_i] as an ancestral set
        poset.up_set_closed(chain[i])
    };
    let v = structure.point_count();
    let den = &v - BigUint::one();
    let kk1 = k_times_k_minus_1(block.k());
    let mut verdicts = Vec::new();
    let mut empty_verdict = None;

    // condition 1, reported against J = A[c₂]
    {
        let j = up_from(1);
        let counts = block.projection_counts(j);
        let mut lhs = BigInt::zero();
        for &c in counts.values() {
            lhs += BigInt::from(c) * BigInt::from(c - 1);
        }
        let rhs_numerator = &kk1 * BigUint::from(structure.size_of(chain[0]) - 1);
        let holds = &lhs * BigInt::from(den.clone()) == BigInt::from(rhs_numerator.clone());
        verdicts.push(CriterionVerdict {
            j,
            border: poset.border(j),
            lhs,
            rhs_numerator,
            rhs_denominator: den.clone(),
            holds,
        });
    }

    // conditions i = 2..s; the i-th is reported against J = A[c_{i+1}], the
    // last against J = ∅
    for i in 1..s {
        let outer = up_from(i); // A[c_i] with 1-based i matching the formula
        let inner = if i + 1 < s {
            Some(up_from(i + 1))
        } else {
            None // A[c_{s+1}] = ∅
        };
        let counts = block.projection_counts(outer);
        let mut lhs = BigInt::zero();
        for (coords, &c) in counts.iter() {
            let coarse = match inner {
                Some(inner_j) => {
                    let tuple = structure.tuple(outer, coords.clone()).unwrap();
                    block.chi(&structure.project_tuple(&tuple, inner_j))
                }
                None => block.k(),
            };
            lhs += BigInt::from(c) * (BigInt::from(coarse) - BigInt::from(c));
        }
        let mut rhs_numerator = &kk1 * BigUint::from(structure.size_of(chain[i]) - 1);
        for &lower in &chain[..i] {
            rhs_numerator *= BigUint::from(structure.size_of(lower));
        }
        let holds = &lhs * BigInt::from(den.clone()) == BigInt::from(rhs_numerator.clone());
        let (j, border) = match inner {
            Some(inner_j) => (inner_j, poset.border(inner_j)),
            None => (poset.empty_set(), poset.border(poset.empty_set())),
        };
        let verdict = CriterionVerdict {
            j,
            border,
            lhs,
            rhs_numerator,
            rhs_denominator: den.clone(),
            holds,
        };
        if inner.is_some() {
            verdicts.push(verdict);
        } else {
            empty_verdict = Some(verdict);
        }
    }
    verdicts.sort_by(|a, b| a.j.set().canonical_cmp(b.j.set()));
    let is_2_design = verdicts.iter().all(|c| c.holds)
        && empty_verdict.as_ref().is_none_or(|c| c.holds)
        && block.k() >= 2;
    Ok(DesignReport {
        v,
        k: block.k(),
        two_transitive_hypothesis: true,
        verdicts,
        empty_verdict,
        is_2_design,
        enumeration: None,
    })
}
