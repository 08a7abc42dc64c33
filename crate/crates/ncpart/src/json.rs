//! Canonical JSON form for colored partitions.
//!
//! Object fields: "k", "l", "lambda", "gamma", "upper_colors",
//! "lower_colors", "blocks" (array of {"points": [["U"|"L", index], ...],
//! "color": name}). Element names resolve in the declared groups.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colored::{ColoredError, ColoredPartition};
use crate::group::{FiniteGroup, GroupError, PointGroup};
use crate::partition::{Block, PartitionError, PointRef, Row, TwoRowPartition};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("invalid partition: {0}")]
    InvalidPartition(#[from] PartitionError),
    #[error("invalid coloring: {}", coloring_detail(*.boundary_ok, *.gamma_ok))]
    InvalidColoring { boundary_ok: bool, gamma_ok: bool },
    #[error(transparent)]
    Colored(#[from] ColoredError),
}

fn coloring_detail(boundary_ok: bool, gamma_ok: bool) -> String {
    match (boundary_ok, gamma_ok) {
        (false, true) => "boundary condition fails".to_string(),
        (true, false) => "point-color condition fails".to_string(),
        _ => "boundary and point-color conditions fail".to_string(),
    }
}

#[derive(Serialize, Deserialize)]
struct WireBlock {
    points: Vec<(String, usize)>,
    color: String,
}

#[derive(Serialize, Deserialize)]
struct WirePartition {
    k: usize,
    l: usize,
    lambda: String,
    gamma: String,
    upper_colors: Vec<String>,
    lower_colors: Vec<String>,
    blocks: Vec<WireBlock>,
}

/// Single-line canonical form, convenient for line-oriented streams.
pub fn to_json_compact(cp: &ColoredPartition) -> String {
    let pretty = to_json(cp);
    let value: serde_json::Value = serde_json::from_str(&pretty).expect("own output parses");
    serde_json::to_string(&value).expect("serialization cannot fail")
}

pub fn to_json(cp: &ColoredPartition) -> String {
    let gamma = cp.gamma();
    let wire = WirePartition {
        k: cp.k(),
        l: cp.l(),
        lambda: cp.lambda().spec().to_string(),
        gamma: gamma.spec(),
        upper_colors: cp.upper_colors().iter().map(|g| gamma.display(g)).collect(),
        lower_colors: cp.lower_colors().iter().map(|g| gamma.display(g)).collect(),
        blocks: cp
            .partition()
            .blocks()
            .iter()
            .zip(cp.block_colors())
            .map(|(b, &c)| WireBlock {
                points: b
                    .points()
                    .iter()
                    .map(|p| {
                        (
                            match p.row {
                                Row::Upper => "U".to_string(),
                                Row::Lower => "L".to_string(),
                            },
                            p.index,
                        )
                    })
                    .collect(),
                color: cp.lambda().name(c).to_string(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&wire).expect("serialization cannot fail")
}

/// Parses and fully validates: partition shape, noncrossing, element names,
/// and both coloring conditions.
pub fn from_json_str(s: &str) -> Result<ColoredPartition, JsonError> {
    let (cp, boundary_ok, gamma_ok) = from_json_str_unchecked(s)?;
    if !boundary_ok || !gamma_ok {
        return Err(JsonError::InvalidColoring { boundary_ok, gamma_ok });
    }
    Ok(cp)
}

/// Parses without enforcing the coloring conditions; returns the partition
/// together with its validity flags.
pub fn from_json_str_unchecked(s: &str) -> Result<(ColoredPartition, bool, bool), JsonError> {
    let wire: WirePartition = serde_json::from_str(s).map_err(|e| JsonError::Parse(e.to_string()))?;
    let lambda = FiniteGroup::from_spec(&wire.lambda)?;
    let gamma = PointGroup::from_spec(&wire.gamma)?;
    let mut blocks = Vec::with_capacity(wire.blocks.len());
    let mut colors = Vec::with_capacity(wire.blocks.len());
    for wb in &wire.blocks {
        let mut pts = Vec::with_capacity(wb.points.len());
        for (row, idx) in &wb.points {
            let row = match row.as_str() {
                "U" => Row::Upper,
                "L" => Row::Lower,
                other => return Err(JsonError::Parse(format!("bad row tag `{other}`"))),
            };
            pts.push(PointRef { row, index: *idx });
        }
        blocks.push(Block::from_points(&pts));
        colors.push(lambda.by_name(&wb.color)?);
    }
    // keep block colors aligned with the canonical block order
    let mut paired: Vec<(Block, crate::group::LambdaElem)> = blocks.into_iter().zip(colors).collect();
    paired.sort_by(|a, b| {
        let key = |blk: &Block| match blk.min_upper() {
            Some(i) => (0, i),
            None => (1, blk.min_lower().unwrap_or(0)),
        };
        key(&a.0).cmp(&key(&b.0))
    });
    let (blocks, colors): (Vec<Block>, Vec<_>) = paired.into_iter().unzip();
    let part = TwoRowPartition::new(wire.k, wire.l, blocks)?;
    if wire.upper_colors.len() != wire.k || wire.lower_colors.len() != wire.l {
        return Err(JsonError::Parse("point color count mismatch".into()));
    }
    let upper = wire
        .upper_colors
        .iter()
        .map(|n| gamma.parse(n))
        .collect::<Result<Vec<_>, _>>()?;
    let lower = wire
        .lower_colors
        .iter()
        .map(|n| gamma.parse(n))
        .collect::<Result<Vec<_>, _>>()?;
    let cp = ColoredPartition::new(part, colors, upper, lower, lambda, gamma)?;
    let boundary_ok = cp.check_boundary_condition();
    let gamma_ok = cp.check_gamma_condition();
    Ok((cp, boundary_ok, gamma_ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colored::enumerate_colored_identity;
    use crate::operator::cup;

    #[test]
    fn cup_roundtrip() {
        let lambda = FiniteGroup::from_spec("Z2").unwrap();
        let gamma = PointGroup::from_spec("free:1").unwrap();
        let g = gamma.parse("a").unwrap();
        let c = cup(&g, &lambda, &gamma);
        let s = to_json(&c);
        let back = from_json_str(&s).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn parse_rejects_crossing() {
        let s = r#"{
            "k": 2, "l": 2, "lambda": "Z2", "gamma": "trivial",
            "upper_colors": ["e", "e"], "lower_colors": ["e", "e"],
            "blocks": [
                {"points": [["U", 1], ["L", 2]], "color": "e"},
                {"points": [["U", 2], ["L", 1]], "color": "e"}
            ]
        }"#;
        assert!(matches!(from_json_str(s), Err(JsonError::InvalidPartition(_))));
    }

    #[test]
    fn parse_rejects_bad_coloring() {
        let s = r#"{
            "k": 0, "l": 2, "lambda": "Z2", "gamma": "trivial",
            "upper_colors": [], "lower_colors": ["e", "e"],
            "blocks": [
                {"points": [["L", 1], ["L", 2]], "color": "a"}
            ]
        }"#;
        match from_json_str(s) {
            Err(JsonError::InvalidColoring { boundary_ok, gamma_ok }) => {
                assert!(!boundary_ok);
                assert!(gamma_ok);
            }
            other => panic!("expected InvalidColoring, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_unknown_name() {
        let s = r#"{
            "k": 0, "l": 1, "lambda": "Z2", "gamma": "trivial",
            "upper_colors": [], "lower_colors": ["e"],
            "blocks": [{"points": [["L", 1]], "color": "zz"}]
        }"#;
        assert!(matches!(from_json_str(s), Err(JsonError::Group(_))));
    }

    #[test]
    fn roundtrip_on_universe() {
        let lambda = FiniteGroup::from_spec("Z3").unwrap();
        let gamma = PointGroup::from_spec("free:1").unwrap();
        for cp in enumerate_colored_identity(2, 1, &lambda, &gamma).unwrap() {
            let s = to_json(&cp);
            let back = from_json_str(&s).unwrap();
            assert_eq!(back, cp);
        }
    }
}
