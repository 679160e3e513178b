//! Parametrized generators for the four explicit 2-design families: the
//! chain×grid poset (1≺3, 2 isolated), the V poset (1≺2, 1≺3), the inverted
//! V (1≺3, 2≺3), and the N poset (1≺3, 2≺3, 2≺4). Each family fixes
//!
//!   e₁ = p²+p+1, e₂ = p²−p+1, e₃ = p⁴−p²+1, (e₄ = p⁸−p⁴+1 for N)
//!
//! so v = q²+q+1 and k = q+1 with q = p⁴ (resp. p⁸), making the criterion
//! ratio k(k−1)/(v−1) equal to 1. The reference μ and orbit tables are
//! hard-coded closed-form polynomials in p, so they work as an
//! independent regression surface against the computed values.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::block::Block;
use crate::design::{check_criterion_opts, orbital_pair_counts, DesignReport};
use crate::gwp::orbital_size;
use crate::poset::{AncestralSet, ElemSet, Poset};
use crate::structure::BlockStructure;

/// Blocks are materialized point lists; beyond this they stop being a desk
/// computation.
pub const MAX_BLOCK_POINTS: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("unknown family `{0}` (expected chgrid, v, vinv or n)")]
    UnknownFamily(String),
    #[error("family parameter p must be at least 2, got {0}")]
    InvalidP(u64),
    #[error("p = {p} exceeds the desk-scale cap {cap} for family {family}")]
    ScaleCapExceeded { family: Family, p: u64, cap: u64 },
    #[error("family sizes overflow at p = {0}")]
    ScaleOverflow(u64),
    #[error("block of {k} points exceeds the materialization cap {cap}")]
    BlockTooLarge { k: u64, cap: u64 },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    ChGrid,
    V,
    VInv,
    N,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::ChGrid, Family::V, Family::VInv, Family::N];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::ChGrid => "chgrid",
            Family::V => "v",
            Family::VInv => "vinv",
            Family::N => "n",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Family, FamilyError> {
        match s {
            "chgrid" => Ok(Family::ChGrid),
            "v" => Ok(Family::V),
            "vinv" => Ok(Family::VInv),
            "n" => Ok(Family::N),
            other => Err(FamilyError::UnknownFamily(other.to_string())),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FamilySpec {
    pub family: Family,
    pub p: u64,
}

impl FamilySpec {
    pub fn new(family: Family, p: u64) -> Result<FamilySpec, FamilyError> {
        if p < 2 {
            return Err(FamilyError::InvalidP(p));
        }
        Ok(FamilySpec { family, p })
    }

    /// q = p⁴ for the three-element posets, p⁸ for N.
    pub fn q(&self) -> Result<u64, FamilyError> {
        let exp = if self.family == Family::N { 8 } else { 4 };
        self.p
            .checked_pow(exp)
            .ok_or(FamilyError::ScaleOverflow(self.p))
    }

    pub fn block_size(&self) -> Result<u64, FamilyError> {
        Ok(self.q()? + 1)
    }

    fn sizes(&self) -> Result<Vec<u64>, FamilyError> {
        let p = self.p;
        let overflow = || FamilyError::ScaleOverflow(p);
        let p2 = p.checked_mul(p).ok_or_else(overflow)?;
        let p4 = p2.checked_mul(p2).ok_or_else(overflow)?;
        let e1 = p2 + p + 1;
        let e2 = p2 - p + 1;
        let e3 = p4 - p2 + 1;
        match self.family {
            Family::N => {
                let p8 = p4.checked_mul(p4).ok_or_else(overflow)?;
                Ok(vec![e1, e2, e3, p8 - p4 + 1])
            }
            _ => Ok(vec![e1, e2, e3]),
        }
    }

    fn poset(&self) -> Poset {
        match self.family {
            Family::ChGrid => Poset::new(&["1", "2", "3"], &[("1", "3")]),
            Family::V => Poset::new(&["1", "2", "3"], &[("1", "2"), ("1", "3")]),
            Family::VInv => Poset::new(&["1", "2", "3"], &[("1", "3"), ("2", "3")]),
            Family::N => Poset::new(
                &["1", "2", "3", "4"],
                &[("1", "3"), ("2", "3"), ("2", "4")],
            ),
        }
        .expect("family posets are valid")
    }
}

pub fn build_structure(spec: &FamilySpec) -> Result<BlockStructure, FamilyError> {
    let sizes = spec.sizes()?;
    Ok(BlockStructure::new(spec.poset(), sizes).expect("family sizes are all ≥ 2"))
}

/// Named block parts: part label to the coordinate lists it contributes.
pub type BlockParts = Vec<(&'static str, Vec<Vec<u64>>)>;

/// The base block as named parts (B₁, B₂,₁, …), coordinates exactly as the
/// defining ranges state them.
pub fn build_block_parts(
    spec: &FamilySpec,
) -> Result<(Arc<BlockStructure>, BlockParts), FamilyError> {
    let k = spec.block_size()?;
    if k > MAX_BLOCK_POINTS {
        return Err(FamilyError::BlockTooLarge {
            k,
            cap: MAX_BLOCK_POINTS,
        });
    }
    let structure = Arc::new(build_structure(spec)?);
    let p = spec.p;
    let sizes = structure.sizes().to_vec();
    let (e2, e3) = (sizes[1], sizes[2]);
    let width = structure.len();
    let pad = move |coords: Vec<u64>| -> Vec<u64> {
        // three-coordinate parts of the N block live in the top wide row
        let mut c = coords;
        c.resize(width, 0);
        c
    };

    let b1: Vec<Vec<u64>> = (0..=p).map(|x| pad(vec![x, 0, 0])).collect();
    let b21: Vec<Vec<u64>> = (1..=p).map(|y| pad(vec![p + 1, y, 0])).collect();
    let b22: Vec<Vec<u64>> = (p + 2..=e2).map(|x| pad(vec![x, x - 1, 0])).collect();
    let striped_b3: Vec<Vec<u64>> = (1..=e2 - 1)
        .flat_map(|y| ((y - 1) * (p * p + p) + 1..=y * (p * p + p)).map(move |z| vec![0, y, z]))
        .map(pad)
        .collect();
    let column_b3: Vec<Vec<u64>> = (1..=e3 - 1).map(|z| pad(vec![0, 0, z])).collect();

    let mut parts: BlockParts = Vec::new();
    match spec.family {
        Family::ChGrid => {
            parts.push(("B1", b1));
            parts.push(("B2,1", b21));
            parts.push(("B2,2", b22));
            parts.push(("B3", striped_b3));
        }
        Family::V => {
            let b2: Vec<Vec<u64>> = (1..=e2 - 1).map(|y| pad(vec![0, y, 0])).collect();
            parts.push(("B1", b1));
            parts.push(("B2", b2));
            parts.push(("B3", striped_b3));
        }
        Family::VInv => {
            parts.push(("B1", b1));
            parts.push(("B2,1", b21));
            parts.push(("B2,2", b22));
            parts.push(("B3", column_b3));
        }
        Family::N => {
            parts.push(("B1", b1));
            parts.push(("B2,1", b21));
            parts.push(("B2,2", b22));
            parts.push(("B3", column_b3));
            let stride = p.pow(4) + p * p;
            let mut b41 = Vec::new();
            for x in 0..=2 * p - 1 {
                for z in 1..=e3 - 1 {
                    for t in x * p * p + 1..=(x + 1) * p * p {
                        b41.push(vec![x, 0, z, (z - 1) * stride + t]);
                    }
                }
            }
            let mut b42 = Vec::new();
            let row = p * p - p;
            for x in 2 * p..=p * p + p - 1 {
                for z in 1..=e3 - 1 {
                    let lo = 2 * p.pow(3) + (x - 2 * p) * row + 1;
                    for t in lo..lo + row {
                        b42.push(vec![x, 0, z, (z - 1) * stride + t]);
                    }
                }
            }
            parts.push(("B4,1", b41));
            parts.push(("B4,2", b42));
        }
    }
    Ok((structure, parts))
}

/// The base block B = ⋃ B_i, with |B| = q + 1 checked.
pub fn build_block(spec: &FamilySpec) -> Result<Block, FamilyError> {
    let (structure, parts) = build_block_parts(spec)?;
    let coords: Vec<Vec<u64>> = parts.into_iter().flat_map(|(_, c)| c).collect();
    let block = Block::from_coords(structure, coords)
        .expect("family block coordinates are valid and distinct");
    assert_eq!(block.k(), spec.block_size()?, "family block has size q+1");
    Ok(block)
}

fn anc(poset: &Poset, labels: &[&str]) -> AncestralSet {
    let set = ElemSet::from_indices(labels.iter().map(|l| poset.index_of(l).unwrap()));
    poset.ancestral(set).expect("tabulated subsets are ancestral")
}

fn pw(p: u64, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

/// The known closed-form μ_B(J) polynomials, evaluated at p.
pub fn reference_mu_table(spec: &FamilySpec) -> Result<Vec<(AncestralSet, BigUint)>, FamilyError> {
    let p = spec.p;
    if p < 2 {
        return Err(FamilyError::InvalidP(p));
    }
    let poset = spec.poset();
    let one = BigUint::one();
    let table: Vec<(&[&str], BigUint)> = match spec.family {
        Family::ChGrid => vec![
            (
                &["2"][..],
                // p⁶+p⁵+p⁴−p³+p+1
                pw(p, 6) + pw(p, 5) + pw(p, 4) - pw(p, 3) + pw(p, 1) + &one,
            ),
            (&["3"], pw(p, 4) * 2u32 + pw(p, 2) + &one),
            (&["2", "3"], pw(p, 4) + pw(p, 2) + pw(p, 1) + &one),
            (&["1", "3"], pw(p, 4) + pw(p, 2) - pw(p, 1) + &one),
        ],
        Family::V => vec![
            (&["2", "3"][..], pw(p, 4) + pw(p, 2) + pw(p, 1) + &one),
            (
                &["2"],
                // p + (p⁴−p+1)(p²+p+1)
                pw(p, 1) + (pw(p, 4) - pw(p, 1) + &one) * (pw(p, 2) + pw(p, 1) + &one),
            ),
            (&["3"], pw(p, 4) * 2u32 + pw(p, 2) + &one),
        ],
        Family::VInv => vec![
            (&["1", "3"][..], pw(p, 4) + pw(p, 2) - pw(p, 1) + &one),
            (&["2", "3"], pw(p, 4) + pw(p, 2) + pw(p, 1) + &one),
            (&["3"], pw(p, 4) * 2u32 + pw(p, 2) + &one),
        ],
        Family::N => {
            let e = spec.sizes()?;
            let (e1, e2, e4) = (
                BigUint::from(e[0]),
                BigUint::from(e[1]),
                BigUint::from(e[3]),
            );
            vec![
                (&["1", "3", "4"][..], pw(p, 8) + pw(p, 2) - pw(p, 1) + &one),
                (&["2", "3", "4"], pw(p, 8) + pw(p, 2) + pw(p, 1) + &one),
                (
                    &["1", "3"],
                    // e₄(e₂+1) + p⁴ − 1
                    &e4 * (&e2 + &one) + pw(p, 4) - &one,
                ),
                (&["3", "4"], pw(p, 8) + pw(p, 4) + pw(p, 2) + &one),
                (
                    &["3"],
                    // e₁e₂(e₄−1) + p⁸+p⁴+p²+1
                    &e1 * &e2 * (&e4 - &one) + pw(p, 8) + pw(p, 4) + pw(p, 2) + &one,
                ),
                (&["4"], pw(p, 8) * 2u32 + pw(p, 4) + &one),
            ]
        }
    };
    let mut rows: Vec<(AncestralSet, BigUint)> = table
        .into_iter()
        .map(|(labels, value)| (anc(&poset, labels), value))
        .collect();
    rows.sort_by(|a, b| a.0.set().canonical_cmp(b.0.set()));
    Ok(rows)
}

/// The known closed-form |O_J|/v values, evaluated at p.
pub fn reference_orbit_table(
    spec: &FamilySpec,
) -> Result<Vec<(AncestralSet, BigUint)>, FamilyError> {
    let poset = spec.poset();
    let e = spec.sizes()?;
    let em1 = |i: usize| BigUint::from(e[i] - 1);
    let ev = |i: usize| BigUint::from(e[i]);
    let table: Vec<(&[&str], BigUint)> = match spec.family {
        Family::ChGrid => vec![
            (&["2"][..], em1(2) * ev(0)),
            (&["3"], em1(0) * em1(1)),
            (&["2", "3"], em1(0)),
            (&["1", "3"], em1(1)),
        ],
        Family::V => vec![
            (&["2", "3"][..], em1(0)),
            (&["2"], em1(2) * ev(0)),
            (&["3"], em1(1) * ev(0)),
        ],
        Family::VInv => vec![
            (&["1", "3"][..], em1(1)),
            (&["2", "3"], em1(0)),
            (&["3"], em1(0) * em1(1)),
        ],
        Family::N => vec![
            (&["1", "3", "4"][..], em1(1)),
            (&["2", "3", "4"], em1(0)),
            (&["1", "3"], em1(3) * ev(1)),
            (&["3", "4"], em1(0) * em1(1)),
            (&["3"], em1(0) * em1(3) * ev(1)),
            (&["4"], em1(2) * ev(0) * ev(1)),
        ],
    };
    let mut rows: Vec<(AncestralSet, BigUint)> = table
        .into_iter()
        .map(|(labels, value)| (anc(&poset, labels), value))
        .collect();
    rows.sort_by(|a, b| a.0.set().canonical_cmp(b.0.set()));
    Ok(rows)
}

/// A computed-vs-reference comparison row.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub j: AncestralSet,
    pub computed: BigUint,
    pub reference: BigUint,
    pub matches: bool,
}

#[derive(Clone, Debug)]
pub struct FamilyVerification {
    pub spec: FamilySpec,
    pub structure: Arc<BlockStructure>,
    pub block_size_ok: bool,
    pub report: DesignReport,
    pub mu_rows: Vec<TableRow>,
    pub orbit_rows: Vec<TableRow>,
    /// None when the k² budget skipped the oracle
    pub pair_oracle_ok: Option<bool>,
}

impl FamilyVerification {
    /// Everything a run can check came out right.
    pub fn all_ok(&self) -> bool {
        self.block_size_ok
            && self.report.is_2_design
            && self.mu_rows.iter().all(|r| r.matches)
            && self.orbit_rows.iter().all(|r| r.matches)
            && self.pair_oracle_ok != Some(false)
    }

    /// Reference tables or the pair oracle disagreed with computation —
    /// an implementation bug, never expected.
    pub fn internal_mismatch(&self) -> bool {
        self.mu_rows.iter().any(|r| !r.matches)
            || self.orbit_rows.iter().any(|r| !r.matches)
            || self.pair_oracle_ok == Some(false)
            || !self.block_size_ok
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FamilyOptions {
    /// p cap for the three-element posets
    pub max_p_small: u64,
    /// p cap for the N poset
    pub max_p_n: u64,
    /// skip the k²-pair oracle when k² exceeds this
    pub pair_budget: Option<u64>,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions {
            max_p_small: 5,
            max_p_n: 3,
            pair_budget: None,
        }
    }
}

/// Build the family at p, run the full criterion (∅ included), compare the
/// computed μ and orbit values against the reference tables, and — budget
/// permitting — cross-check every per-J left side against the independent
/// pair-count oracle.
pub fn verify_family(
    spec: &FamilySpec,
    opts: &FamilyOptions,
) -> Result<FamilyVerification, FamilyError> {
    let cap = match spec.family {
        Family::N => opts.max_p_n,
        _ => opts.max_p_small,
    };
    if spec.p > cap {
        return Err(FamilyError::ScaleCapExceeded {
            family: spec.family,
            p: spec.p,
            cap,
        });
    }
    let block = build_block(spec)?;
    let structure = Arc::clone(block.structure());
    let block_size_ok = block.k() == spec.block_size()?;
    let report = check_criterion_opts(&block, None, true);

    let mu_rows: Vec<TableRow> = reference_mu_table(spec)?
        .into_iter()
        .map(|(j, reference)| {
            let computed = block.mu(j);
            let matches = computed == reference;
            TableRow {
                j,
                computed,
                reference,
                matches,
            }
        })
        .collect();

    let v = structure.point_count();
    let orbit_rows: Vec<TableRow> = reference_orbit_table(spec)?
        .into_iter()
        .map(|(j, reference)| {
            let computed = orbital_size(&structure, j) / &v;
            let matches = computed == reference;
            TableRow {
                j,
                computed,
                reference,
                matches,
            }
        })
        .collect();

    let run_oracle = match opts.pair_budget {
        None => true,
        Some(budget) => block
            .k()
            .checked_mul(block.k())
            .is_some_and(|kk| kk <= budget),
    };
    let pair_oracle_ok = if run_oracle {
        let counts = orbital_pair_counts(&block);
        let mut ok = true;
        for verdict in report.verdicts.iter().chain(report.empty_verdict.iter()) {
            let counted = counts.get(&verdict.j).copied().unwrap_or(0);
            if num_bigint::BigInt::from(counted) != verdict.lhs {
                ok = false;
            }
        }
        Some(ok)
    } else {
        None
    };

    Ok(FamilyVerification {
        spec: *spec,
        structure,
        block_size_ok,
        report,
        mu_rows,
        orbit_rows,
        pair_oracle_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_parsing_and_validation() {
        assert_eq!("chgrid".parse::<Family>().unwrap(), Family::ChGrid);
        assert_eq!("n".parse::<Family>().unwrap(), Family::N);
        assert!("x".parse::<Family>().is_err());
        assert_eq!(FamilySpec::new(Family::V, 1), Err(FamilyError::InvalidP(1)));
    }

    #[test]
    fn structure_sizes_at_p2() {
        let s = build_structure(&FamilySpec::new(Family::ChGrid, 2).unwrap()).unwrap();
        assert_eq!(s.sizes(), &[7, 3, 13]);
        assert_eq!(s.point_count(), BigUint::from(273u32));

        let n = build_structure(&FamilySpec::new(Family::N, 2).unwrap()).unwrap();
        assert_eq!(n.sizes(), &[7, 3, 13, 241]);
        assert_eq!(n.point_count(), BigUint::from(65793u32));
    }

    #[test]
    fn block_part_sizes_at_p2() {
        let spec = FamilySpec::new(Family::ChGrid, 2).unwrap();
        let (_, parts) = build_block_parts(&spec).unwrap();
        let size = |name: &str| {
            parts
                .iter()
                .filter(|(n, _)| n.starts_with(name))
                .map(|(_, c)| c.len())
                .sum::<usize>()
        };
        assert_eq!(size("B1"), 3);
        assert_eq!(size("B2"), 2);
        assert_eq!(size("B3"), 12);
        let block = build_block(&spec).unwrap();
        assert_eq!(block.k(), 17);

        let nspec = FamilySpec::new(Family::N, 2).unwrap();
        let (_, nparts) = build_block_parts(&nspec).unwrap();
        let nsize = |name: &str| {
            nparts
                .iter()
                .filter(|(n, _)| n.starts_with(name))
                .map(|(_, c)| c.len())
                .sum::<usize>()
        };
        assert_eq!(nsize("B4"), 240); // e₄ − 1
        assert_eq!(build_block(&nspec).unwrap().k(), 257);
    }

    #[test]
    fn parts_are_disjoint_and_sum_to_k() {
        for family in Family::ALL {
            for p in [2u64, 3] {
                let spec = FamilySpec::new(family, p).unwrap();
                let (structure, parts) = build_block_parts(&spec).unwrap();
                let mut all: Vec<Vec<u64>> = Vec::new();
                for (_, coords) in &parts {
                    all.extend(coords.iter().cloned());
                }
                let total = all.len();
                all.sort();
                all.dedup();
                assert_eq!(all.len(), total, "{family} p={p} parts overlap");
                assert_eq!(total as u64, spec.block_size().unwrap());
                for c in &all {
                    structure.point(c.clone()).unwrap();
                }
            }
        }
    }

    #[test]
    fn reference_mu_values_at_p2() {
        let spec = FamilySpec::new(Family::ChGrid, 2).unwrap();
        let table = reference_mu_table(&spec).unwrap();
        let poset = spec.poset();
        let at = |labels: &[&str]| {
            let j = anc(&poset, labels);
            table.iter().find(|(s, _)| *s == j).unwrap().1.clone()
        };
        assert_eq!(at(&["2"]), BigUint::from(107u32));
        assert_eq!(at(&["3"]), BigUint::from(37u32));
        assert_eq!(at(&["2", "3"]), BigUint::from(23u32));
        assert_eq!(at(&["1", "3"]), BigUint::from(19u32));

        let vspec = FamilySpec::new(Family::V, 2).unwrap();
        let vt = reference_mu_table(&vspec).unwrap();
        let vposet = vspec.poset();
        let j23 = anc(&vposet, &["2", "3"]);
        assert_eq!(
            vt.iter().find(|(s, _)| *s == j23).unwrap().1,
            BigUint::from(23u32)
        );

        let ispec = FamilySpec::new(Family::VInv, 2).unwrap();
        let it = reference_mu_table(&ispec).unwrap();
        let iposet = ispec.poset();
        let j13 = anc(&iposet, &["1", "3"]);
        assert_eq!(
            it.iter().find(|(s, _)| *s == j13).unwrap().1,
            BigUint::from(19u32)
        );

        let nspec = FamilySpec::new(Family::N, 2).unwrap();
        let nt = reference_mu_table(&nspec).unwrap();
        let nposet = nspec.poset();
        let expect: [(&[&str], u32); 6] = [
            (&["3"], 5317),
            (&["4"], 529),
            (&["1", "3"], 979),
            (&["3", "4"], 277),
            (&["1", "3", "4"], 259),
            (&["2", "3", "4"], 263),
        ];
        for (labels, value) in expect {
            let j = anc(&nposet, labels);
            assert_eq!(
                nt.iter().find(|(s, _)| *s == j).unwrap().1,
                BigUint::from(value),
                "N μ({labels:?})"
            );
        }
    }

    #[test]
    fn reference_orbit_values_at_p2() {
        let spec = FamilySpec::new(Family::ChGrid, 2).unwrap();
        let poset = spec.poset();
        let table = reference_orbit_table(&spec).unwrap();
        let j2 = anc(&poset, &["2"]);
        assert_eq!(
            table.iter().find(|(s, _)| *s == j2).unwrap().1,
            BigUint::from(84u32) // (e₃−1)e₁ = 12·7
        );

        let nspec = FamilySpec::new(Family::N, 2).unwrap();
        let ntable = reference_orbit_table(&nspec).unwrap();
        let nposet = nspec.poset();
        let j4 = anc(&nposet, &["4"]);
        assert_eq!(
            ntable.iter().find(|(s, _)| *s == j4).unwrap().1,
            BigUint::from(252u32) // p⁸ − p²
        );

        let vspec = FamilySpec::new(Family::V, 2).unwrap();
        let vtable = reference_orbit_table(&vspec).unwrap();
        let vposet = vspec.poset();
        let j23 = anc(&vposet, &["2", "3"]);
        assert_eq!(
            vtable.iter().find(|(s, _)| *s == j23).unwrap().1,
            BigUint::from(6u32) // e₁ − 1
        );
    }

    #[test]
    fn verify_family_chgrid_p2() {
        let spec = FamilySpec::new(Family::ChGrid, 2).unwrap();
        let out = verify_family(&spec, &FamilyOptions::default()).unwrap();
        assert!(out.all_ok());
        assert_eq!(out.report.verdicts.len(), 4);
        assert!(out.report.verdicts.iter().all(|c| c.holds));
        assert_eq!(out.pair_oracle_ok, Some(true));
    }

    #[test]
    fn verify_family_n_p2_reproduces_the_alternating_sum() {
        let spec = FamilySpec::new(Family::N, 2).unwrap();
        let out = verify_family(&spec, &FamilyOptions::default()).unwrap();
        assert!(out.all_ok());
        // J = {3}: 5317 − 979 − 277 + 259 = 4320 = (e₁−1)(e₄−1)e₂
        let poset = out.structure.poset();
        let j3 = poset
            .ancestral(ElemSet::singleton(poset.index_of("3").unwrap()))
            .unwrap();
        let verdict = out.report.verdicts.iter().find(|c| c.j == j3).unwrap();
        assert_eq!(verdict.lhs, num_bigint::BigInt::from(4320));
        assert!(verdict.holds);
    }

    #[test]
    fn verify_family_vinv_p3() {
        let spec = FamilySpec::new(Family::VInv, 3).unwrap();
        let out = verify_family(&spec, &FamilyOptions::default()).unwrap();
        assert!(out.all_ok());
        assert_eq!(out.structure.sizes(), &[13, 7, 73]);
        assert_eq!(out.report.k, 82);
    }

    #[test]
    fn scale_caps_and_budget() {
        let spec = FamilySpec::new(Family::N, 4).unwrap();
        assert!(matches!(
            verify_family(&spec, &FamilyOptions::default()),
            Err(FamilyError::ScaleCapExceeded { .. })
        ));
        // budget small enough to skip the oracle
        let spec = FamilySpec::new(Family::ChGrid, 2).unwrap();
        let out = verify_family(
            &spec,
            &FamilyOptions {
                pair_budget: Some(10),
                ..FamilyOptions::default()
            },
        )
        .unwrap();
        assert_eq!(out.pair_oracle_ok, None);
        assert!(out.all_ok());
    }

    #[test]
    fn n_block_top_row_matches_the_vinv_block() {
        // B₁ ∪ B₂ ∪ B₃ of the N family lies in the top wide row and equals
        // the inverted-V block coordinatewise.
        for p in [2u64, 3] {
            let nspec = FamilySpec::new(Family::N, p).unwrap();
            let (_, nparts) = build_block_parts(&nspec).unwrap();
            let mut top_row: Vec<Vec<u64>> = nparts
                .iter()
                .filter(|(name, _)| !name.starts_with("B4"))
                .flat_map(|(_, coords)| coords.iter().cloned())
                .map(|c| {
                    assert_eq!(c[3], 0);
                    c[..3].to_vec()
                })
                .collect();
            let ispec = FamilySpec::new(Family::VInv, p).unwrap();
            let (_, iparts) = build_block_parts(&ispec).unwrap();
            let mut vinv: Vec<Vec<u64>> =
                iparts.into_iter().flat_map(|(_, coords)| coords).collect();
            top_row.sort();
            vinv.sort();
            assert_eq!(top_row, vinv);
        }
    }
}
