//! File formats.
//!
//! Structure (poset + sizes), text form:
//!
//! ```text
//! # N-poset at p = 2
//! elements: 1 2 3 4
//! rel: 1 < 3
//! rel: 2 < 3
//! rel: 2 < 4
//! sizes: 7 3 13 241
//! ```
//!
//! or JSON: `{"elements": [1,2,3,4], "relations": [[1,3],[2,3],[2,4]],
//! "sizes": [7,3,13,241]}`. Element labels may be numbers or strings.
//!
//! Block files hold one point per line, comma-separated coordinates in
//! canonical element order (`0,1,2,3`), `#` comments allowed; or a JSON
//! array of coordinate arrays.
//!
//! Component-group generator files hold lines `perm <element>: 1 0 2` in
//! image notation (the image of 0, 1, 2, …); several lines per element
//! accumulate a generating set; absent elements default to the full
//! symmetric group.

use std::sync::Arc;

use serde_json::Value;
use thiserror::Error;

use crate::block::Block;
use crate::gwp::{ComponentGroups, GwpError, Perm};
use crate::poset::{Poset, PosetError};
use crate::structure::{BlockStructure, StructureError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `{0}:` section")]
    MissingSection(&'static str),
    #[error("duplicate `{0}:` section")]
    DuplicateSection(&'static str),
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Gwp(#[from] GwpError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn looks_like_json(text: &str) -> bool {
    matches!(text.trim_start().chars().next(), Some('{') | Some('['))
}

/// Meaningful lines with their 1-based numbers; comments and blanks dropped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

struct StructureParts {
    elements: Vec<String>,
    relations: Vec<(String, String)>,
    sizes: Option<Vec<u64>>,
}

fn parse_structure_text(text: &str) -> Result<StructureParts, ParseError> {
    let mut elements: Option<Vec<String>> = None;
    let mut relations = Vec::new();
    let mut sizes: Option<Vec<u64>> = None;
    for (lineno, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix("elements:") {
            if elements.is_some() {
                return Err(ParseError::DuplicateSection("elements"));
            }
            elements = Some(rest.split_whitespace().map(str::to_string).collect());
        } else if let Some(rest) = line.strip_prefix("rel:") {
            let mut halves = rest.split('<');
            let (Some(lo), Some(hi), None) = (halves.next(), halves.next(), halves.next()) else {
                return Err(syntax(lineno, format!("expected `rel: a < b`, got `{line}`")));
            };
            relations.push((lo.trim().to_string(), hi.trim().to_string()));
        } else if let Some(rest) = line.strip_prefix("sizes:") {
            if sizes.is_some() {
                return Err(ParseError::DuplicateSection("sizes"));
            }
            let parsed: Result<Vec<u64>, _> = rest
                .split_whitespace()
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|_| syntax(lineno, format!("bad size `{t}`")))
                })
                .collect();
            sizes = Some(parsed?);
        } else {
            return Err(syntax(lineno, format!("unrecognized line `{line}`")));
        }
    }
    let elements = elements.ok_or(ParseError::MissingSection("elements"))?;
    Ok(StructureParts {
        elements,
        relations,
        sizes,
    })
}

fn label_from_json(v: &Value) -> Result<String, ParseError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(ParseError::Json(format!(
            "element label must be a string or number, got {other}"
        ))),
    }
}

fn parse_structure_json(text: &str) -> Result<StructureParts, ParseError> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| ParseError::Json("expected a JSON object".into()))?;
    let elements = obj
        .get("elements")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError::Json("`elements` must be an array".into()))?
        .iter()
        .map(label_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let relations = match obj.get("relations") {
        None => Vec::new(),
        Some(v) => v
            .as_array()
            .ok_or_else(|| ParseError::Json("`relations` must be an array".into()))?
            .iter()
            .map(|pair| {
                let arr = pair
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| ParseError::Json("each relation must be a pair".into()))?;
                Ok((label_from_json(&arr[0])?, label_from_json(&arr[1])?))
            })
            .collect::<Result<Vec<_>, ParseError>>()?,
    };
    let sizes = match obj.get("sizes") {
        None => None,
        Some(v) => Some(
            v.as_array()
                .ok_or_else(|| ParseError::Json("`sizes` must be an array".into()))?
                .iter()
                .map(|n| {
                    n.as_u64()
                        .ok_or_else(|| ParseError::Json(format!("bad size {n}")))
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    Ok(StructureParts {
        elements,
        relations,
        sizes,
    })
}

fn structure_parts(text: &str) -> Result<StructureParts, ParseError> {
    if looks_like_json(text) {
        parse_structure_json(text)
    } else {
        parse_structure_text(text)
    }
}

/// Parse just the poset (sizes, if present, are ignored).
pub fn parse_poset(text: &str) -> Result<Poset, ParseError> {
    let parts = structure_parts(text)?;
    Ok(Poset::new(&parts.elements, &parts.relations)?)
}

/// Parse a full structure file: poset plus the `sizes:` line.
pub fn parse_structure(text: &str) -> Result<BlockStructure, ParseError> {
    let parts = structure_parts(text)?;
    let poset = Poset::new(&parts.elements, &parts.relations)?;
    let sizes = parts.sizes.ok_or(ParseError::MissingSection("sizes"))?;
    Ok(BlockStructure::new(poset, sizes)?)
}

/// Parse a block file against its structure.
pub fn parse_block(text: &str, structure: &Arc<BlockStructure>) -> Result<Block, ParseError> {
    let coords: Vec<Vec<u64>> = if looks_like_json(text) {
        let root: Value =
            serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        root.as_array()
            .ok_or_else(|| ParseError::Json("expected an array of coordinate arrays".into()))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| ParseError::Json("each point must be an array".into()))?
                    .iter()
                    .map(|n| {
                        n.as_u64()
                            .ok_or_else(|| ParseError::Json(format!("bad coordinate {n}")))
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>, _>>()?
    } else {
        content_lines(text)
            .map(|(lineno, line)| {
                line.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<u64>()
                            .map_err(|_| syntax(lineno, format!("bad coordinate `{t}`")))
                    })
                    .collect::<Result<Vec<u64>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    Ok(Block::from_coords(Arc::clone(structure), coords)?)
}

/// One point per line, comma-separated coordinates in canonical order.
pub fn emit_block(block: &Block) -> String {
    let mut out = String::new();
    for p in block.points() {
        let line: Vec<String> = p.coords().iter().map(u64::to_string).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Parse a component-group generator file. Returns one optional generating
/// set per poset element, in canonical order; `None` means the symmetric
/// default.
pub fn parse_generator_overrides(
    text: &str,
    structure: &BlockStructure,
) -> Result<Vec<Option<Vec<Perm>>>, ParseError> {
    let mut overrides: Vec<Option<Vec<Perm>>> = vec![None; structure.len()];
    for (lineno, line) in content_lines(text) {
        let Some(rest) = line.strip_prefix("perm") else {
            return Err(syntax(lineno, format!("expected `perm <element>: …`, got `{line}`")));
        };
        let Some((label, images)) = rest.split_once(':') else {
            return Err(syntax(lineno, "missing `:` after element label"));
        };
        let idx = structure.poset().index_of(label.trim())?;
        let images: Vec<u32> = images
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| syntax(lineno, format!("bad image `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if images.len() as u64 != structure.size_of(idx) {
            return Err(syntax(
                lineno,
                format!(
                    "permutation for element `{}` has {} images, alphabet size is {}",
                    label.trim(),
                    images.len(),
                    structure.size_of(idx)
                ),
            ));
        }
        overrides[idx].get_or_insert_with(Vec::new).push(Perm::from_images(images)?);
    }
    Ok(overrides)
}

/// Parse a generator file straight into component groups.
pub fn parse_component_groups(
    text: &str,
    structure: &BlockStructure,
    closure_cap: u64,
) -> Result<ComponentGroups, ParseError> {
    let overrides = parse_generator_overrides(text, structure)?;
    Ok(ComponentGroups::with_generators(
        structure,
        overrides,
        closure_cap,
    )?)
}
