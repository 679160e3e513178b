//! Report rendering: aligned text tables and a machine JSON document
//! with the same numeric content. Integers are printed in full decimal
//! (JSON carries them as strings, so nothing is ever rounded); row order is
//! the canonical ancestral order, making output byte-stable.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::design::{CriterionVerdict, DesignReport, EnumeratedDesign};
use crate::families::FamilyVerification;
use crate::gwp::orbital_size;
use crate::poset::{AncestralSet, ElemSet, Poset};
use crate::structure::BlockStructure;

fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let mut emit = |cells: &[String]| {
        let line: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:<width$}", c, width = widths[i]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    emit(&headers.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    emit(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>());
    for row in rows {
        emit(row);
    }
    out
}

fn set_labels(poset: &Poset, s: ElemSet) -> Vec<Value> {
    s.iter().map(|i| Value::String(poset.label(i).to_string())).collect()
}

fn yesno(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn verdict_row(poset: &Poset, v: &CriterionVerdict) -> Vec<String> {
    vec![
        poset.format_set(v.j.set()),
        poset.format_set(v.border),
        v.lhs.to_string(),
        v.rhs_numerator.to_string(),
        v.rhs_denominator.to_string(),
        yesno(v.holds),
        v.cross_multiplied_gap().to_string(),
    ]
}

fn verdict_json(poset: &Poset, v: &CriterionVerdict) -> Value {
    json!({
        "j": set_labels(poset, v.j.set()),
        "border": set_labels(poset, v.border),
        "lhs": v.lhs.to_string(),
        "rhs_numerator": v.rhs_numerator.to_string(),
        "rhs_denominator": v.rhs_denominator.to_string(),
        "holds": v.holds,
        // |lhs·den − num|: near-miss ranking aid, not part of the criterion
        "rank_gap": v.cross_multiplied_gap().to_string(),
    })
}

fn enumeration_json(e: &EnumeratedDesign) -> Value {
    json!({
        "group_order": e.group_order.to_string(),
        "b": e.b.to_string(),
        "r": e.r.map(|r| r.to_string()),
        "lambda": e.lambda.map(|l| l.to_string()),
        "is_2_design": e.is_2_design,
        "agrees_with_criterion": e.agrees_with_criterion,
    })
}

/// All criterion verdicts, ∅ first when present.
fn ordered_verdicts(report: &DesignReport) -> Vec<&CriterionVerdict> {
    report
        .empty_verdict
        .iter()
        .chain(report.verdicts.iter())
        .collect()
}

pub fn check_table(report: &DesignReport, poset: &Poset) -> String {
    let mut out = format!(
        "v = {}  k = {}  ratio k(k-1)/(v-1) = {}/{}\n",
        report.v,
        report.k,
        BigUint::from(report.k) * BigUint::from(report.k.saturating_sub(1)),
        &report.v - 1u32,
    );
    if !report.two_transitive_hypothesis {
        out.push_str("warning: hypothesis unmet (a component group is not 2-transitive)\n");
    }
    let rows: Vec<Vec<String>> = ordered_verdicts(report)
        .iter()
        .map(|v| verdict_row(poset, v))
        .collect();
    out.push_str(&render_table(
        &["J", "border", "lhs", "rhs_num", "rhs_den", "holds", "rank_gap"],
        &rows,
    ));
    if let Some(e) = &report.enumeration {
        out.push_str(&format!(
            "|F| = {}  b = {}  r = {}  lambda = {}  enumerated 2-design: {}  agreement: {}\n",
            e.group_order,
            e.b,
            e.r.map_or_else(|| "nonconstant".into(), |r| r.to_string()),
            e.lambda.map_or_else(|| "nonconstant".into(), |l| l.to_string()),
            yesno(e.is_2_design),
            if e.agrees_with_criterion { "AGREE" } else { "DISAGREE" },
        ));
    }
    out.push_str(&format!("2-design: {}\n", yesno(report.is_2_design)));
    out
}

pub fn check_json(report: &DesignReport, poset: &Poset) -> Value {
    json!({
        "v": report.v.to_string(),
        "k": report.k.to_string(),
        "two_transitive_hypothesis": report.two_transitive_hypothesis,
        "verdicts": report.verdicts.iter().map(|v| verdict_json(poset, v)).collect::<Vec<_>>(),
        "empty_verdict": report.empty_verdict.as_ref().map(|v| verdict_json(poset, v)),
        "is_2_design": report.is_2_design,
        "enumeration": report.enumeration.as_ref().map(enumeration_json),
    })
}

pub fn family_table(fv: &FamilyVerification) -> String {
    let poset = fv.structure.poset();
    let sizes: Vec<String> = fv.structure.sizes().iter().map(u64::to_string).collect();
    let mut out = format!(
        "family {}  p = {}  e = ({})  v = {}  k = {}\n",
        fv.spec.family,
        fv.spec.p,
        sizes.join(","),
        fv.report.v,
        fv.report.k,
    );
    let mu_rows: Vec<Vec<String>> = fv
        .mu_rows
        .iter()
        .map(|r| {
            vec![
                poset.format_set(r.j.set()),
                r.computed.to_string(),
                r.reference.to_string(),
                if r.matches { "MATCH" } else { "MISMATCH" }.to_string(),
            ]
        })
        .collect();
    out.push_str(&render_table(&["J", "mu", "mu_ref", "mu_check"], &mu_rows));
    let orbit_rows: Vec<Vec<String>> = fv
        .orbit_rows
        .iter()
        .map(|r| {
            vec![
                poset.format_set(r.j.set()),
                r.computed.to_string(),
                r.reference.to_string(),
                if r.matches { "MATCH" } else { "MISMATCH" }.to_string(),
            ]
        })
        .collect();
    out.push_str(&render_table(
        &["J", "orbit/v", "orbit_ref", "orbit_check"],
        &orbit_rows,
    ));
    let rows: Vec<Vec<String>> = ordered_verdicts(&fv.report)
        .iter()
        .map(|v| verdict_row(poset, v))
        .collect();
    out.push_str(&render_table(
        &["J", "border", "lhs", "rhs_num", "rhs_den", "holds", "rank_gap"],
        &rows,
    ));
    out.push_str(&format!(
        "pair oracle: {}\n",
        match fv.pair_oracle_ok {
            Some(true) => "ok",
            Some(false) => "MISMATCH",
            None => "skipped (budget)",
        }
    ));
    out.push_str(&format!("2-design: {}\n", yesno(fv.report.is_2_design)));
    out
}

pub fn family_json(fv: &FamilyVerification) -> Value {
    let poset = fv.structure.poset();
    let table = |rows: &[crate::families::TableRow]| -> Vec<Value> {
        rows.iter()
            .map(|r| {
                json!({
                    "j": set_labels(poset, r.j.set()),
                    "computed": r.computed.to_string(),
                    "reference": r.reference.to_string(),
                    "match": r.matches,
                })
            })
            .collect()
    };
    json!({
        "family": fv.spec.family.as_str(),
        "p": fv.spec.p.to_string(),
        "sizes": fv.structure.sizes().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "block_size_ok": fv.block_size_ok,
        "mu": table(&fv.mu_rows),
        "orbits": table(&fv.orbit_rows),
        "criterion": check_json(&fv.report, poset),
        "pair_oracle": match fv.pair_oracle_ok {
            Some(true) => "ok",
            Some(false) => "mismatch",
            None => "skipped",
        },
        "all_ok": fv.all_ok(),
    })
}

/// Orbital sizes for every ancestral subset of a structure.
pub fn orbit_summary(structure: &BlockStructure) -> Vec<(AncestralSet, BigUint)> {
    structure
        .poset()
        .ancestral_subsets()
        .into_iter()
        .map(|j| (j, orbital_size(structure, j)))
        .collect()
}

pub fn orbits_table(structure: &BlockStructure) -> String {
    let poset = structure.poset();
    let v = structure.point_count();
    let summary = orbit_summary(structure);
    let total: BigUint = summary.iter().map(|(_, s)| s.clone()).sum();
    let rows: Vec<Vec<String>> = summary
        .iter()
        .map(|(j, size)| {
            vec![
                poset.format_set(j.set()),
                poset.format_set(poset.border(*j)),
                size.to_string(),
                (size / &v).to_string(),
            ]
        })
        .collect();
    let mut out = format!("v = {v}\n");
    out.push_str(&render_table(&["J", "border", "|O_J|", "|O_J|/v"], &rows));
    out.push_str(&format!("total = {total} (v^2 = {})\n", &v * &v));
    out
}

pub fn orbits_json(structure: &BlockStructure) -> Value {
    let poset = structure.poset();
    let v = structure.point_count();
    let summary = orbit_summary(structure);
    let total: BigUint = summary.iter().map(|(_, s)| s.clone()).sum();
    json!({
        "v": v.to_string(),
        "orbitals": summary.iter().map(|(j, size)| json!({
            "j": set_labels(poset, j.set()),
            "border": set_labels(poset, poset.border(*j)),
            "size": size.to_string(),
            "size_over_v": (size / &v).to_string(),
        })).collect::<Vec<_>>(),
        "total": total.to_string(),
        "v_squared": (&v * &v).to_string(),
    })
}

/// Pair-oracle versus alternating-sum comparison rows.
pub fn oracle_rows(
    report: &DesignReport,
    counts: &BTreeMap<AncestralSet, u64>,
) -> Vec<(AncestralSet, u64, num_bigint::BigInt, bool)> {
    ordered_verdicts(report)
        .into_iter()
        .map(|v| {
            let counted = counts.get(&v.j).copied().unwrap_or(0);
            let agree = num_bigint::BigInt::from(counted) == v.lhs;
            (v.j, counted, v.lhs.clone(), agree)
        })
        .collect()
}

pub fn oracle_table(
    report: &DesignReport,
    counts: &BTreeMap<AncestralSet, u64>,
    poset: &Poset,
) -> String {
    let rows: Vec<Vec<String>> = oracle_rows(report, counts)
        .into_iter()
        .map(|(j, counted, lhs, agree)| {
            vec![
                poset.format_set(j.set()),
                counted.to_string(),
                lhs.to_string(),
                if agree { "AGREE" } else { "DISAGREE" }.to_string(),
            ]
        })
        .collect();
    render_table(&["J", "pair_count", "alt_sum", "check"], &rows)
}

pub fn oracle_json(
    report: &DesignReport,
    counts: &BTreeMap<AncestralSet, u64>,
    poset: &Poset,
) -> Value {
    json!({
        "rows": oracle_rows(report, counts).into_iter().map(|(j, counted, lhs, agree)| json!({
            "j": set_labels(poset, j.set()),
            "pair_count": counted.to_string(),
            "alt_sum": lhs.to_string(),
            "agree": agree,
        })).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::Block;
    use crate::design::{check_criterion_with_empty, orbital_pair_counts};
    use crate::poset::Poset;
    use std::sync::Arc;

    fn demo() -> (Arc<BlockStructure>, Block) {
        let s = Arc::new(BlockStructure::new(Poset::chain(2), vec![2, 2]).unwrap());
        let b = Block::from_coords(
            Arc::clone(&s),
            vec![vec![0, 0], vec![1, 0], vec![0, 1]],
        )
        .unwrap();
        (s, b)
    }

    #[test]
    fn table_and_json_carry_the_same_numbers() {
        let (s, b) = demo();
        let report = check_criterion_with_empty(&b);
        let table = check_table(&report, s.poset());
        let js = check_json(&report, s.poset());
        for v in report.verdicts.iter().chain(report.empty_verdict.iter()) {
            assert!(table.contains(&v.lhs.to_string()));
            assert!(table.contains(&v.rhs_numerator.to_string()));
        }
        assert_eq!(js["v"], "4");
        assert_eq!(js["k"], "3");
        assert_eq!(js["verdicts"][0]["lhs"], "2");
        assert_eq!(js["empty_verdict"]["lhs"], "4");
        assert!(js["is_2_design"].as_bool().unwrap());
    }

    #[test]
    fn deterministic_rendering() {
        let (s, b) = demo();
        let r1 = check_table(&check_criterion_with_empty(&b), s.poset());
        let r2 = check_table(&check_criterion_with_empty(&b), s.poset());
        assert_eq!(r1, r2);
    }

    #[test]
    fn orbit_summary_totals_v_squared() {
        let (s, _) = demo();
        let out = orbits_table(&s);
        assert!(out.contains("total = 16 (v^2 = 16)"));
        let js = orbits_json(&s);
        assert_eq!(js["total"], js["v_squared"]);
    }

    #[test]
    fn oracle_rows_agree_on_a_design_block() {
        let (s, b) = demo();
        let report = check_criterion_with_empty(&b);
        let counts = orbital_pair_counts(&b);
        let rows = oracle_rows(&report, &counts);
        assert!(rows.iter().all(|(_, _, _, agree)| *agree));
        let table = oracle_table(&report, &counts, s.poset());
        assert!(table.contains("AGREE"));
        assert!(!table.contains("DISAGREE"));
    }
}
