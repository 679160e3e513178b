//! Exact verification of block-transitive, point-imprimitive 2-designs on
//! poset block structures under generalised wreath products.
//!
//! The point set is a product P = ∏ Δ_i over a finite poset; the ancestral
//! (upward-closed) subsets J induce the invariant partitions C_J. A base
//! block B generates the design ℬ = B^F under the generalised wreath product
//! F, and whether (P, ℬ) is a 2-design reduces to one exact integer identity
//! per proper nonempty ancestral subset. Everything here is integer-exact:
//! cross-multiplied comparisons, arbitrary precision where products can grow.

pub mod block;
pub mod design;
pub mod families;
pub mod gwp;
pub mod io;
pub mod poset;
pub mod report;
pub mod sample;
pub mod structure;

pub use block::Block;
pub use design::{
    check_antichain_specialized, check_chain_specialized, check_criterion,
    check_criterion_with_empty, enumerate_design, orbital_pair_counts, pair_count_oracle,
    CriterionVerdict, DesignReport, EnumeratedDesign,
};
pub use gwp::{
    enumerate_group, orbit_of_block, orbital_of_pair, orbital_size, verify_partition_invariance,
    ComponentGroups, GwpElement, GwpLayout, Perm,
};
pub use poset::{AncestralSet, ElemSet, Poset, Shape};
pub use structure::{BlockStructure, Point, ProjectedTuple};
