//! Partition operators: the 0/1 block-relation indicator and the exact
//! matrices it induces, plus horizontal tensor, reflection, left rotation
//! and the cup/cap builders.

use std::sync::Arc;

use thiserror::Error;

use crate::colored::{ColoredError, ColoredPartition};
use crate::group::{FiniteGroup, GammaElem, LambdaElem, PointGroup};
use crate::matrix::{decode_basis, MorphismMatrix};
use crate::partition::{Block, TwoRowPartition};

/// Default bound on |Λ|^max(k,l) for matrix realizations.
pub const DEFAULT_DIM_GUARD: usize = 4096;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OperatorError {
    #[error("length mismatch: expected {want}, got {got}")]
    LengthMismatch { want: usize, got: usize },
    #[error("size limit exceeded: {0}")]
    SizeLimitExceeded(String),
    #[error("partitions use different groups")]
    GroupMismatch,
    #[error(transparent)]
    Colored(#[from] ColoredError),
    #[error(transparent)]
    Partition(#[from] crate::partition::PartitionError),
}

/// One block relation in evaluation-ready form.
enum BlockRelation {
    /// prefix(s, max_lower) = prefix(r, max_upper) * t
    Through { max_upper: usize, max_lower: usize, t: LambdaElem },
    /// interval(s, lo..=hi) = t
    LowerSingle { lo: usize, hi: usize, t: LambdaElem },
    /// interval(r, lo..=hi) * t = 1
    UpperSingle { lo: usize, hi: usize, t: LambdaElem },
}

fn block_relations(cp: &ColoredPartition) -> Vec<BlockRelation> {
    cp.partition()
        .blocks()
        .iter()
        .zip(cp.block_colors())
        .map(|(b, &t)| {
            if b.is_through() {
                BlockRelation::Through {
                    max_upper: b.max_upper().unwrap(),
                    max_lower: b.max_lower().unwrap(),
                    t,
                }
            } else if b.is_lower_single() {
                BlockRelation::LowerSingle {
                    lo: b.min_lower().unwrap(),
                    hi: b.max_lower().unwrap(),
                    t,
                }
            } else {
                BlockRelation::UpperSingle {
                    lo: b.min_upper().unwrap(),
                    hi: b.max_upper().unwrap(),
                    t,
                }
            }
        })
        .collect()
}

fn prefixes(lambda: &FiniteGroup, xs: &[LambdaElem]) -> Vec<LambdaElem> {
    let mut out = Vec::with_capacity(xs.len() + 1);
    out.push(lambda.identity());
    for &x in xs {
        out.push(lambda.mul(*out.last().unwrap(), x));
    }
    out
}

/// δ indicator on Λ^k × Λ^l: products taken left to right, through blocks
/// compared on row prefixes, single-layer blocks on their interval.
pub fn delta_eval(
    cp: &ColoredPartition,
    r: &[LambdaElem],
    s: &[LambdaElem],
) -> Result<bool, OperatorError> {
    if r.len() != cp.k() {
        return Err(OperatorError::LengthMismatch { want: cp.k(), got: r.len() });
    }
    if s.len() != cp.l() {
        return Err(OperatorError::LengthMismatch { want: cp.l(), got: s.len() });
    }
    let lambda = cp.lambda();
    let rp = prefixes(lambda, r);
    let sp = prefixes(lambda, s);
    Ok(delta_with_prefixes(cp, lambda, &rp, &sp))
}

fn delta_with_prefixes(
    cp: &ColoredPartition,
    lambda: &FiniteGroup,
    rp: &[LambdaElem],
    sp: &[LambdaElem],
) -> bool {
    for rel in block_relations(cp) {
        let ok = match rel {
            BlockRelation::Through { max_upper, max_lower, t } => {
                sp[max_lower] == lambda.mul(rp[max_upper], t)
            }
            BlockRelation::LowerSingle { lo, hi, t } => {
                lambda.mul(lambda.inv(sp[lo - 1]), sp[hi]) == t
            }
            BlockRelation::UpperSingle { lo, hi, t } => {
                let interval = lambda.mul(lambda.inv(rp[lo - 1]), rp[hi]);
                lambda.is_identity(lambda.mul(interval, t))
            }
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Matrix of the operator induced by a colored partition: entry (s⃗, r⃗)
/// is δ(r⃗, s⃗), with the basis index convention of [`encode_basis`].
pub fn to_matrix(cp: &ColoredPartition) -> Result<MorphismMatrix, OperatorError> {
    to_matrix_with_guard(cp, DEFAULT_DIM_GUARD)
}

pub fn to_matrix_with_guard(cp: &ColoredPartition, guard: usize) -> Result<MorphismMatrix, OperatorError> {
    let order = cp.lambda().order();
    let (k, l) = (cp.k(), cp.l());
    let dim = order.checked_pow(k.max(l) as u32).filter(|&d| d <= guard);
    if dim.is_none() {
        return Err(OperatorError::SizeLimitExceeded(format!(
            "|Λ|^max(k,l) = {order}^{} exceeds guard {guard}",
            k.max(l)
        )));
    }
    let rows = order.pow(l as u32);
    let cols = order.pow(k as u32);
    let lambda = cp.lambda().clone();
    let mut m = MorphismMatrix::zero(rows, cols);
    for ridx in 0..cols {
        let r: Vec<LambdaElem> = decode_basis(ridx, k, order).into_iter().map(LambdaElem).collect();
        let rp = prefixes(&lambda, &r);
        for sidx in 0..rows {
            let s: Vec<LambdaElem> = decode_basis(sidx, l, order).into_iter().map(LambdaElem).collect();
            let sp = prefixes(&lambda, &s);
            if delta_with_prefixes(cp, &lambda, &rp, &sp) {
                m.set(sidx, ridx, 1);
            }
        }
    }
    Ok(m)
}

/// Horizontal concatenation: the right factor's points are shifted past the
/// left factor's rows, all colors kept.
pub fn tensor_partitions(
    p: &ColoredPartition,
    q: &ColoredPartition,
) -> Result<ColoredPartition, OperatorError> {
    if p.lambda() != q.lambda() || p.gamma() != q.gamma() {
        return Err(OperatorError::GroupMismatch);
    }
    let (k1, l1) = (p.k(), p.l());
    let mut blocks: Vec<Block> = p.partition().blocks().to_vec();
    let mut colors: Vec<LambdaElem> = p.block_colors().to_vec();
    for (b, &c) in q.partition().blocks().iter().zip(q.block_colors()) {
        blocks.push(Block::new(
            b.upper().iter().map(|&i| i + k1).collect(),
            b.lower().iter().map(|&j| j + l1).collect(),
        ));
        colors.push(c);
    }
    // canonical order permutes blocks; keep colors aligned by pairing first
    let mut paired: Vec<(Block, LambdaElem)> = blocks.into_iter().zip(colors).collect();
    paired.sort_by_key(|a| block_sort_key(&a.0));
    let (blocks, colors): (Vec<Block>, Vec<LambdaElem>) = paired.into_iter().unzip();
    let part = TwoRowPartition::new(k1 + q.k(), l1 + q.l(), blocks)?;
    let upper: Vec<GammaElem> = p.upper_colors().iter().chain(q.upper_colors()).cloned().collect();
    let lower: Vec<GammaElem> = p.lower_colors().iter().chain(q.lower_colors()).cloned().collect();
    Ok(ColoredPartition::new(part, colors, upper, lower, p.lambda().clone(), p.gamma().clone())?)
}

fn block_sort_key(b: &Block) -> (u8, usize) {
    match b.min_upper() {
        Some(i) => (0, i),
        None => (1, b.min_lower().unwrap()),
    }
}

/// Reflection across the horizontal axis: rows swapped, every block color
/// inverted, point colors swapped between rows.
pub fn adjoint_partition(p: &ColoredPartition) -> ColoredPartition {
    let lambda = p.lambda().clone();
    let mut paired: Vec<(Block, LambdaElem)> = p
        .partition()
        .blocks()
        .iter()
        .zip(p.block_colors())
        .map(|(b, &c)| (Block::new(b.lower().to_vec(), b.upper().to_vec()), lambda.inv(c)))
        .collect();
    paired.sort_by_key(|a| block_sort_key(&a.0));
    let (blocks, colors): (Vec<Block>, Vec<LambdaElem>) = paired.into_iter().unzip();
    let part = TwoRowPartition::new(p.l(), p.k(), blocks).expect("reflection preserves noncrossing");
    ColoredPartition::new(
        part,
        colors,
        p.lower_colors().to_vec(),
        p.upper_colors().to_vec(),
        lambda,
        p.gamma().clone(),
    )
    .expect("reflection preserves sizes")
}

/// Left rotation into a no-upper-point partition: point i of the result
/// corresponds to upper point k+1-i for i <= k and to lower point i-k
/// beyond; block colors unchanged, upper point colors reversed and
/// inverted.
pub fn left_rotate(p: &ColoredPartition) -> ColoredPartition {
    let k = p.k();
    let gamma = p.gamma().clone();
    let mut paired: Vec<(Block, LambdaElem)> = p
        .partition()
        .blocks()
        .iter()
        .zip(p.block_colors())
        .map(|(b, &c)| {
            let pts: Vec<usize> = b
                .upper()
                .iter()
                .map(|&u| k + 1 - u)
                .chain(b.lower().iter().map(|&v| k + v))
                .collect();
            (Block::new(Vec::new(), pts), c)
        })
        .collect();
    paired.sort_by_key(|a| block_sort_key(&a.0));
    let (blocks, colors): (Vec<Block>, Vec<LambdaElem>) = paired.into_iter().unzip();
    let part = TwoRowPartition::new(0, k + p.l(), blocks).expect("rotation preserves noncrossing");
    let mut lower_colors: Vec<GammaElem> = p
        .upper_colors()
        .iter()
        .rev()
        .map(|g| gamma.inv(g).expect("matching realization"))
        .collect();
    lower_colors.extend(p.lower_colors().iter().cloned());
    ColoredPartition::new(part, colors, Vec::new(), lower_colors, p.lambda().clone(), gamma)
        .expect("rotation preserves sizes")
}

/// Identity strand on one point color.
pub fn identity_strand(
    g: &GammaElem,
    lambda: &Arc<FiniteGroup>,
    gamma: &Arc<PointGroup>,
) -> ColoredPartition {
    let part = TwoRowPartition::new(1, 1, vec![Block::new(vec![1], vec![1])]).unwrap();
    ColoredPartition::new(
        part,
        vec![lambda.identity()],
        vec![g.clone()],
        vec![g.clone()],
        lambda.clone(),
        gamma.clone(),
    )
    .unwrap()
}

/// Identity on a tuple of point colors.
pub fn identity_partition(
    gs: &[GammaElem],
    lambda: &Arc<FiniteGroup>,
    gamma: &Arc<PointGroup>,
) -> ColoredPartition {
    let n = gs.len();
    let blocks = (1..=n).map(|i| Block::new(vec![i], vec![i])).collect();
    let part = TwoRowPartition::new(n, n, blocks).unwrap();
    ColoredPartition::new(
        part,
        vec![lambda.identity(); n],
        gs.to_vec(),
        gs.to_vec(),
        lambda.clone(),
        gamma.clone(),
    )
    .unwrap()
}

/// Nested one-block arcs on 2k lower points, each colored by the unit, with
/// point colors (g_1, ..., g_k, g_k^{-1}, ..., g_1^{-1}).
pub fn cup_k(
    gs: &[GammaElem],
    lambda: &Arc<FiniteGroup>,
    gamma: &Arc<PointGroup>,
) -> ColoredPartition {
    let k = gs.len();
    let blocks: Vec<Block> = (1..=k).map(|i| Block::new(Vec::new(), vec![i, 2 * k + 1 - i])).collect();
    let part = TwoRowPartition::new(0, 2 * k, blocks).unwrap();
    let mut lower: Vec<GammaElem> = gs.to_vec();
    lower.extend(gs.iter().rev().map(|g| gamma.inv(g).expect("matching realization")));
    ColoredPartition::new(
        part,
        vec![lambda.identity(); k],
        Vec::new(),
        lower,
        lambda.clone(),
        gamma.clone(),
    )
    .unwrap()
}

pub fn cup(g: &GammaElem, lambda: &Arc<FiniteGroup>, gamma: &Arc<PointGroup>) -> ColoredPartition {
    cup_k(std::slice::from_ref(g), lambda, gamma)
}

pub fn cap_k(
    gs: &[GammaElem],
    lambda: &Arc<FiniteGroup>,
    gamma: &Arc<PointGroup>,
) -> ColoredPartition {
    adjoint_partition(&cup_k(gs, lambda, gamma))
}

pub fn cap(g: &GammaElem, lambda: &Arc<FiniteGroup>, gamma: &Arc<PointGroup>) -> ColoredPartition {
    cap_k(std::slice::from_ref(g), lambda, gamma)
}
