//! Vertical composition of colored partitions.
//!
//! Gluing q below p induces connected components on the three point rows,
//! a system of interval constraints on the middle row, and a gain graph on
//! the middle cut vertices {0, ..., l}. The composite operator is zero
//! exactly when the constant part of that system is unbalanced; otherwise
//! it is |Λ|^(c-1) times the operator of the composed partition, where c
//! counts connected components of the gain graph.

use thiserror::Error;

use crate::colored::{ColoredError, ColoredPartition, relative_outer_boundary};
use crate::group::{FiniteGroup, LambdaElem};
use crate::matrix::{decode_basis, MorphismMatrix};
use crate::operator::{to_matrix, OperatorError};
use crate::partition::{Block, PartitionError, Row, TwoRowPartition};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComposeError {
    #[error("middle mismatch: {0}")]
    MiddleMismatch(String),
    #[error("partitions use different groups")]
    GroupMismatch,
    #[error("component does not meet the middle row")]
    TrivialComponent,
    #[error("entrance subsystem is unsolvable")]
    UnsolvableSubsystem,
    #[error("composite is zero")]
    ZeroComposite,
    #[error("constants unavailable for this component kind")]
    ConstantsUnavailable,
    #[error("length mismatch: expected {want}, got {got}")]
    LengthMismatch { want: usize, got: usize },
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Colored(#[from] ColoredError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Matrix(#[from] crate::matrix::MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    UpperHalf,
    LowerHalf,
    Through,
    Cycle,
    UpperTrivial,
    LowerTrivial,
}

/// One (p,q)-connected component of the glued three-row diagram.
#[derive(Debug, Clone)]
pub struct ComponentInfo {
    pub upper: Vec<usize>,
    pub middle: Vec<usize>,
    pub lower: Vec<usize>,
    pub kind: ComponentKind,
    /// Indices into p.blocks() of the blocks meeting this component.
    pub p_blocks: Vec<usize>,
    /// Indices into q.blocks() of the blocks meeting this component.
    pub q_blocks: Vec<usize>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The (p,q)-connected components, ordered by their smallest point in the
/// upper-middle-lower node order.
pub fn connected_components(
    p: &TwoRowPartition,
    q: &TwoRowPartition,
) -> Result<Vec<ComponentInfo>, ComposeError> {
    if p.l() != q.k() {
        return Err(ComposeError::MiddleMismatch(format!(
            "p has {} lower points, q has {} upper points",
            p.l(),
            q.k()
        )));
    }
    let (k, l, m) = (p.k(), p.l(), q.l());
    let upper_node = |i: usize| i - 1;
    let middle_node = |j: usize| k + j - 1;
    let lower_node = |j: usize| k + l + j - 1;
    let mut uf = UnionFind::new(k + l + m);
    for b in p.blocks() {
        let mut nodes: Vec<usize> = b.upper().iter().map(|&i| upper_node(i)).collect();
        nodes.extend(b.lower().iter().map(|&j| middle_node(j)));
        for w in nodes.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    for b in q.blocks() {
        let mut nodes: Vec<usize> = b.upper().iter().map(|&j| middle_node(j)).collect();
        nodes.extend(b.lower().iter().map(|&j| lower_node(j)));
        for w in nodes.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut by_root: std::collections::BTreeMap<usize, ComponentInfo> = Default::default();
    for node in 0..k + l + m {
        let root = uf.find(node);
        by_root.entry(root).or_insert_with(|| {
            roots.push(root);
            ComponentInfo {
                    upper: Vec::new(),
                    middle: Vec::new(),
                    lower: Vec::new(),
                    kind: ComponentKind::Cycle,
                    p_blocks: Vec::new(),
                    q_blocks: Vec::new(),
                }
        });
        let info = by_root.get_mut(&root).unwrap();
        if node < k {
            info.upper.push(node + 1);
        } else if node < k + l {
            info.middle.push(node - k + 1);
        } else {
            info.lower.push(node - k - l + 1);
        }
    }
    for (bi, b) in p.blocks().iter().enumerate() {
        let node = b
            .min_upper()
            .map(upper_node)
            .unwrap_or_else(|| middle_node(b.min_lower().unwrap()));
        let root = uf.find(node);
        by_root.get_mut(&root).unwrap().p_blocks.push(bi);
    }
    for (bi, b) in q.blocks().iter().enumerate() {
        let node = b
            .min_upper()
            .map(middle_node)
            .unwrap_or_else(|| lower_node(b.min_lower().unwrap()));
        let root = uf.find(node);
        by_root.get_mut(&root).unwrap().q_blocks.push(bi);
    }
    let mut out: Vec<ComponentInfo> = by_root.into_values().collect();
    for info in &mut out {
        info.kind = match (!info.upper.is_empty(), !info.middle.is_empty(), !info.lower.is_empty()) {
            (true, true, true) => ComponentKind::Through,
            (true, true, false) => ComponentKind::UpperHalf,
            (false, true, true) => ComponentKind::LowerHalf,
            (false, true, false) => ComponentKind::Cycle,
            (true, false, false) => ComponentKind::UpperTrivial,
            (false, false, true) => ComponentKind::LowerTrivial,
            // rows only connect through the middle
            (true, false, true) | (false, false, false) => unreachable!("impossible row pattern"),
        };
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntranceSide {
    Upper,
    Lower,
}

/// A maximal gap in a component's middle trace all of whose points are
/// free on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entrance {
    pub lo: usize,
    pub hi: usize,
    pub side: EntranceSide,
}

/// Entrances of a non-trivial component, in increasing middle coordinate.
///
/// A block's middle interval covers a gap either entirely or not at all
/// (its endpoints are component points), so each gap is classified by
/// which side leaves it uncovered.
pub fn component_entrances(
    comp: &ComponentInfo,
    p: &TwoRowPartition,
    q: &TwoRowPartition,
) -> Result<Vec<Entrance>, ComposeError> {
    if comp.middle.is_empty() {
        return Err(ComposeError::TrivialComponent);
    }
    let p_intervals: Vec<(usize, usize)> = comp
        .p_blocks
        .iter()
        .filter_map(|&i| {
            let b = &p.blocks()[i];
            Some((b.min_lower()?, b.max_lower()?))
        })
        .collect();
    let q_intervals: Vec<(usize, usize)> = comp
        .q_blocks
        .iter()
        .filter_map(|&i| {
            let b = &q.blocks()[i];
            Some((b.min_upper()?, b.max_upper()?))
        })
        .collect();
    let mut out = Vec::new();
    for w in comp.middle.windows(2) {
        let (lo, hi) = (w[0] + 1, w[1] - 1);
        if lo > hi {
            continue;
        }
        let covered_p = p_intervals.iter().any(|&(a, b)| a < lo && hi < b);
        let covered_q = q_intervals.iter().any(|&(a, b)| a < lo && hi < b);
        debug_assert!(covered_p || covered_q, "a gap inside a component is covered");
        match (covered_p, covered_q) {
            (true, true) => {}
            (false, _) => out.push(Entrance { lo, hi, side: EntranceSide::Upper }),
            (_, false) => out.push(Entrance { lo, hi, side: EntranceSide::Lower }),
        }
    }
    Ok(out)
}

/// One equation of the middle system: the interval product of the unknown
/// middle vector over [lo, hi] equals `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MiddleConstraint {
    pub lo: usize,
    pub hi: usize,
    pub target: LambdaElem,
}

/// Per-side data of a through block needed for the middle system.
#[derive(Debug, Clone, Copy)]
struct ThroughData {
    block: usize,
    mid_lo: usize,
    mid_hi: usize,
    outer_lo: usize,
    outer_hi: usize,
    /// own label
    label: LambdaElem,
    /// label of the left-adjacent through block, or identity
    left_label: LambdaElem,
    /// boundary product of the lower-row gap blocks (g for p, β for q)
    gap_lower: LambdaElem,
    /// boundary product of the upper-row gap blocks (α for p, b for q)
    gap_upper: LambdaElem,
}

/// Through blocks of one colored partition with their gap products,
/// ordered left to right along the middle trace. For p the middle row is
/// its lower row; for q it is its upper row.
fn through_data(cp: &ColoredPartition, middle_is_lower: bool) -> Vec<ThroughData> {
    let p = cp.partition();
    let lambda = cp.lambda();
    let mut through: Vec<usize> = (0..p.num_blocks()).filter(|&i| p.blocks()[i].is_through()).collect();
    let mid_range = |i: usize| {
        let b = &p.blocks()[i];
        if middle_is_lower {
            (b.min_lower().unwrap(), b.max_lower().unwrap())
        } else {
            (b.min_upper().unwrap(), b.max_upper().unwrap())
        }
    };
    let outer_range = |i: usize| {
        let b = &p.blocks()[i];
        if middle_is_lower {
            (b.min_upper().unwrap(), b.max_upper().unwrap())
        } else {
            (b.min_lower().unwrap(), b.max_lower().unwrap())
        }
    };
    through.sort_by_key(|&i| mid_range(i).0);
    let mut out = Vec::with_capacity(through.len());
    for (pos, &i) in through.iter().enumerate() {
        let (mid_lo, mid_hi) = mid_range(i);
        let (outer_lo, outer_hi) = outer_range(i);
        let (left_label, left_mid_max, left_outer_max) = if pos == 0 {
            (lambda.identity(), 0, 0)
        } else {
            let j = through[pos - 1];
            (cp.block_color(j), mid_range(j).1, outer_range(j).1)
        };
        // single-layer blocks strictly between the left-adjacent through
        // block and this one, on each row
        let (mid_row, outer_row) = if middle_is_lower {
            (Row::Lower, Row::Upper)
        } else {
            (Row::Upper, Row::Lower)
        };
        let row_max = |b: &Block, row: Row| match row {
            Row::Upper => b.max_upper().unwrap(),
            Row::Lower => b.max_lower().unwrap(),
        };
        let gap_mid: Vec<usize> = (0..p.num_blocks())
            .filter(|&j| {
                let b = &p.blocks()[j];
                b.single_row() == Some(mid_row) && {
                    let mx = row_max(b, mid_row);
                    left_mid_max < mx && mx < mid_lo
                }
            })
            .collect();
        let gap_outer: Vec<usize> = (0..p.num_blocks())
            .filter(|&j| {
                let b = &p.blocks()[j];
                b.single_row() == Some(outer_row) && {
                    let mx = row_max(b, outer_row);
                    left_outer_max < mx && mx < outer_lo
                }
            })
            .collect();
        let (_, gap_mid_prod) =
            relative_outer_boundary(p, &gap_mid, mid_row, cp.block_colors(), lambda).expect("same row by construction");
        let (_, gap_outer_prod) =
            relative_outer_boundary(p, &gap_outer, outer_row, cp.block_colors(), lambda).expect("same row by construction");
        // for p the middle row is the lower row, so the middle-gap product
        // is the lower boundary product g and the outer-gap product is α;
        // for q the roles swap to b and β
        let (gap_lower, gap_upper) = if middle_is_lower {
            (gap_mid_prod, gap_outer_prod)
        } else {
            (gap_outer_prod, gap_mid_prod)
        };
        out.push(ThroughData {
            block: i,
            mid_lo,
            mid_hi,
            outer_lo,
            outer_hi,
            label: cp.block_color(i),
            left_label,
            gap_lower,
            gap_upper,
        });
    }
    out
}

fn interval_prod(lambda: &FiniteGroup, xs: &[LambdaElem], lo: usize, hi: usize) -> LambdaElem {
    if lo > hi {
        return lambda.identity();
    }
    lambda.ordered_product(&xs[lo - 1..hi])
}

fn check_composable(p: &ColoredPartition, q: &ColoredPartition) -> Result<(), ComposeError> {
    if p.lambda() != q.lambda() || p.gamma() != q.gamma() {
        return Err(ComposeError::GroupMismatch);
    }
    if p.l() != q.k() {
        return Err(ComposeError::MiddleMismatch(format!(
            "sizes differ: {} vs {}",
            p.l(),
            q.k()
        )));
    }
    if p.lower_colors() != q.upper_colors() {
        return Err(ComposeError::MiddleMismatch("middle point colors differ".into()));
    }
    Ok(())
}

/// Constraints contributed by single-layer middle blocks only; their
/// targets do not depend on the outer-row vectors.
fn single_layer_constraints(p: &ColoredPartition, q: &ColoredPartition) -> Vec<MiddleConstraint> {
    let lambda = p.lambda();
    let mut out = Vec::new();
    for (i, b) in p.partition().blocks().iter().enumerate() {
        if b.is_lower_single() {
            out.push(MiddleConstraint {
                lo: b.min_lower().unwrap(),
                hi: b.max_lower().unwrap(),
                target: p.block_color(i),
            });
        }
    }
    for (i, b) in q.partition().blocks().iter().enumerate() {
        if b.is_upper_single() {
            out.push(MiddleConstraint {
                lo: b.min_upper().unwrap(),
                hi: b.max_upper().unwrap(),
                target: lambda.inv(q.block_color(i)),
            });
        }
    }
    out
}

/// The full middle system for given outer vectors: one constraint per
/// middle-touching block, with the four target shapes of the vertical
/// composition calculus.
pub fn middle_system(
    p: &ColoredPartition,
    q: &ColoredPartition,
    r: &[LambdaElem],
    d: &[LambdaElem],
) -> Result<Vec<MiddleConstraint>, ComposeError> {
    check_composable(p, q)?;
    if r.len() != p.k() {
        return Err(ComposeError::LengthMismatch { want: p.k(), got: r.len() });
    }
    if d.len() != q.l() {
        return Err(ComposeError::LengthMismatch { want: q.l(), got: d.len() });
    }
    let lambda = p.lambda();
    let mut out = single_layer_constraints(p, q);
    for td in through_data(p, true) {
        // g^{-1} (t')^{-1} α (∏ r over the block's upper interval) t
        let rprod = interval_prod(lambda, r, td.outer_lo, td.outer_hi);
        let mut target = lambda.inv(td.gap_lower);
        target = lambda.mul(target, lambda.inv(td.left_label));
        target = lambda.mul(target, td.gap_upper);
        target = lambda.mul(target, rprod);
        target = lambda.mul(target, td.label);
        out.push(MiddleConstraint { lo: td.mid_lo, hi: td.mid_hi, target });
    }
    for td in through_data(q, false) {
        // b^{-1} ι' β (∏ d over the block's lower interval) ι^{-1}
        let dprod = interval_prod(lambda, d, td.outer_lo, td.outer_hi);
        let mut target = lambda.inv(td.gap_upper);
        target = lambda.mul(target, td.left_label);
        target = lambda.mul(target, td.gap_lower);
        target = lambda.mul(target, dprod);
        target = lambda.mul(target, lambda.inv(td.label));
        out.push(MiddleConstraint { lo: td.mid_lo, hi: td.mid_hi, target });
    }
    Ok(out)
}

/// Gain graph on the cut vertices {0, ..., l}: one edge per constraint
/// from lo-1 to hi carrying the target as its forward gain.
#[derive(Debug, Clone)]
pub struct GainGraph {
    pub l: usize,
    pub edges: Vec<(usize, usize, LambdaElem)>,
    pub balanced: bool,
    pub component_count: usize,
    potential: Vec<LambdaElem>,
}

impl GainGraph {
    /// Normalized potential (each component rooted at its smallest vertex
    /// with the identity); only meaningful when balanced.
    pub fn potential(&self) -> Option<&[LambdaElem]> {
        self.balanced.then_some(self.potential.as_slice())
    }

    /// The middle vector read off the potential by prefix differences.
    pub fn solution(&self, lambda: &FiniteGroup) -> Option<Vec<LambdaElem>> {
        self.potential().map(|pi| {
            (1..=self.l)
                .map(|j| lambda.mul(lambda.inv(pi[j - 1]), pi[j]))
                .collect()
        })
    }
}

/// Builds the gain graph of a constraint family by spanning-tree potential
/// propagation with back-edge checking.
pub fn build_gain_graph(l: usize, constraints: &[MiddleConstraint], lambda: &FiniteGroup) -> GainGraph {
    let n = l + 1;
    let mut adj: Vec<Vec<(usize, LambdaElem)>> = vec![Vec::new(); n];
    let mut edges = Vec::with_capacity(constraints.len());
    for c in constraints {
        let (from, to) = (c.lo - 1, c.hi);
        adj[from].push((to, c.target));
        adj[to].push((from, lambda.inv(c.target)));
        edges.push((from, to, c.target));
    }
    let mut potential = vec![lambda.identity(); n];
    let mut seen = vec![false; n];
    let mut balanced = true;
    let mut component_count = 0;
    for root in 0..n {
        if seen[root] {
            continue;
        }
        component_count += 1;
        seen[root] = true;
        potential[root] = lambda.identity();
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &(w, gain) in &adj[v] {
                let expected = lambda.mul(potential[v], gain);
                if seen[w] {
                    if potential[w] != expected {
                        balanced = false;
                    }
                } else {
                    seen[w] = true;
                    potential[w] = expected;
                    stack.push(w);
                }
            }
        }
    }
    GainGraph { l, edges, balanced, component_count, potential }
}

/// Underlying-graph component count for the full middle edge family (all
/// middle-touching blocks of both partitions), isolated vertices included.
fn full_component_count(p: &TwoRowPartition, q: &TwoRowPartition) -> usize {
    let l = p.l();
    let mut uf = UnionFind::new(l + 1);
    let mut count = l + 1;
    let join = |uf: &mut UnionFind, a: usize, b: usize, count: &mut usize| {
        if uf.find(a) != uf.find(b) {
            uf.union(a, b);
            *count -= 1;
        }
    };
    for b in p.blocks() {
        if let (Some(lo), Some(hi)) = (b.min_lower(), b.max_lower()) {
            join(&mut uf, lo - 1, hi, &mut count);
        }
    }
    for b in q.blocks() {
        if let (Some(lo), Some(hi)) = (b.min_upper(), b.max_upper()) {
            join(&mut uf, lo - 1, hi, &mut count);
        }
    }
    count
}

/// The block relations of the pair that involve no middle variable: p's
/// upper single-layer blocks constrain r⃗ alone, q's lower single-layer
/// blocks constrain d⃗ alone.
fn outer_rows_admissible(
    p: &ColoredPartition,
    q: &ColoredPartition,
    r: &[LambdaElem],
    d: &[LambdaElem],
) -> bool {
    let lambda = p.lambda();
    for (i, b) in p.partition().blocks().iter().enumerate() {
        if b.is_upper_single() {
            let prod = interval_prod(lambda, r, b.min_upper().unwrap(), b.max_upper().unwrap());
            if !lambda.is_identity(lambda.mul(prod, p.block_color(i))) {
                return false;
            }
        }
    }
    for (i, b) in q.partition().blocks().iter().enumerate() {
        if b.is_lower_single() {
            let prod = interval_prod(lambda, d, b.min_lower().unwrap(), b.max_lower().unwrap());
            if prod != q.block_color(i) {
                return false;
            }
        }
    }
    true
}

/// Number of middle vectors satisfying both δ constraints for the given
/// outer vectors: 0 when the outer rows are inadmissible or the gain graph
/// is unbalanced, |Λ|^(c-1) otherwise.
pub fn count_middle_solutions(
    p: &ColoredPartition,
    q: &ColoredPartition,
    r: &[LambdaElem],
    d: &[LambdaElem],
) -> Result<u64, ComposeError> {
    let system = middle_system(p, q, r, d)?;
    if !outer_rows_admissible(p, q, r, d) {
        return Ok(0);
    }
    let graph = build_gain_graph(p.l(), &system, p.lambda());
    if !graph.balanced {
        return Ok(0);
    }
    Ok((p.lambda().order() as u64).pow((graph.component_count - 1) as u32))
}

/// The common interval product over an entrance across every solution of
/// its nested-block subsystem.
pub fn entrance_constant(
    entrance: &Entrance,
    comp: &ComponentInfo,
    p: &ColoredPartition,
    q: &ColoredPartition,
) -> Result<LambdaElem, ComposeError> {
    check_composable(p, q)?;
    let lambda = p.lambda();
    let l = p.l();
    // nested blocks: single-layer middle blocks strictly inside the middle
    // interval of some block of the component on the same side
    let p_nested: Vec<usize> = nested_blocks(p.partition(), &comp.p_blocks, true);
    let q_nested: Vec<usize> = nested_blocks(q.partition(), &comp.q_blocks, false);
    // connectivity closure from the entrance through shared middle points
    let mut marked_p: Vec<bool> = vec![false; p_nested.len()];
    let mut marked_q: Vec<bool> = vec![false; q_nested.len()];
    let in_entrance =
        |lo: usize, hi: usize| -> bool { lo.max(entrance.lo) <= hi.min(entrance.hi) };
    let p_range = |i: usize| {
        let b = &p.partition().blocks()[i];
        (b.min_lower().unwrap(), b.max_lower().unwrap())
    };
    let q_range = |i: usize| {
        let b = &q.partition().blocks()[i];
        (b.min_upper().unwrap(), b.max_upper().unwrap())
    };
    let mut changed = true;
    let mut point_hit = vec![false; l + 1]; // middle points reached (1-based)
    for x in entrance.lo..=entrance.hi {
        point_hit[x] = true;
    }
    while changed {
        changed = false;
        for (slot, &i) in p_nested.iter().enumerate() {
            if marked_p[slot] {
                continue;
            }
            let pts = p.partition().blocks()[i].lower();
            let (lo, hi) = p_range(i);
            if in_entrance(lo, hi) || pts.iter().any(|&x| point_hit[x]) {
                marked_p[slot] = true;
                for &x in pts {
                    point_hit[x] = true;
                }
                changed = true;
            }
        }
        for (slot, &i) in q_nested.iter().enumerate() {
            if marked_q[slot] {
                continue;
            }
            let pts = q.partition().blocks()[i].upper();
            let (lo, hi) = q_range(i);
            if in_entrance(lo, hi) || pts.iter().any(|&x| point_hit[x]) {
                marked_q[slot] = true;
                for &x in pts {
                    point_hit[x] = true;
                }
                changed = true;
            }
        }
    }
    let core_p: Vec<usize> = p_nested
        .iter()
        .zip(&marked_p)
        .filter_map(|(&i, &m)| m.then_some(i))
        .collect();
    let core_q: Vec<usize> = q_nested
        .iter()
        .zip(&marked_q)
        .filter_map(|(&i, &m)| m.then_some(i))
        .collect();
    // widen with blocks covered by a core block's span on the same side
    let mut sys_p = core_p.clone();
    for (i, b) in p.partition().blocks().iter().enumerate() {
        if b.is_lower_single() && !sys_p.contains(&i) {
            let (lo, hi) = (b.min_lower().unwrap(), b.max_lower().unwrap());
            if core_p.iter().any(|&j| {
                let (jlo, jhi) = p_range(j);
                jlo <= lo && hi <= jhi && j != i
            }) {
                sys_p.push(i);
            }
        }
    }
    let mut sys_q = core_q.clone();
    for (i, b) in q.partition().blocks().iter().enumerate() {
        if b.is_upper_single() && !sys_q.contains(&i) {
            let (lo, hi) = (b.min_upper().unwrap(), b.max_upper().unwrap());
            if core_q.iter().any(|&j| {
                let (jlo, jhi) = q_range(j);
                jlo <= lo && hi <= jhi && j != i
            }) {
                sys_q.push(i);
            }
        }
    }
    let mut constraints = Vec::new();
    for &i in &sys_p {
        let (lo, hi) = p_range(i);
        constraints.push(MiddleConstraint { lo, hi, target: p.block_color(i) });
    }
    for &i in &sys_q {
        let (lo, hi) = q_range(i);
        constraints.push(MiddleConstraint { lo, hi, target: lambda.inv(q.block_color(i)) });
    }
    let graph = build_gain_graph(l, &constraints, lambda);
    let Some(solution) = graph.solution(lambda) else {
        return Err(ComposeError::UnsolvableSubsystem);
    };
    Ok(interval_prod(lambda, &solution, entrance.lo, entrance.hi))
}

fn nested_blocks(part: &TwoRowPartition, comp_blocks: &[usize], middle_is_lower: bool) -> Vec<usize> {
    let range = |i: usize| {
        let b = &part.blocks()[i];
        if middle_is_lower {
            (b.min_lower(), b.max_lower())
        } else {
            (b.min_upper(), b.max_upper())
        }
    };
    (0..part.num_blocks())
        .filter(|&i| {
            let b = &part.blocks()[i];
            let single = if middle_is_lower { b.is_lower_single() } else { b.is_upper_single() };
            single
                && comp_blocks.iter().any(|&j| {
                    if j == i {
                        return false;
                    }
                    match (range(j), range(i)) {
                        ((Some(jlo), Some(jhi)), (Some(ilo), Some(ihi))) => jlo < ilo && ihi < jhi,
                        _ => false,
                    }
                })
        })
        .collect()
}

/// The constants entering a component's label, each a single Λ element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentConstants {
    UpperHalf {
        t: LambdaElem,
        t_prime: LambdaElem,
        g: LambdaElem,
        alpha: LambdaElem,
        f_c: LambdaElem,
    },
    LowerHalf {
        iota: LambdaElem,
        iota_prime: LambdaElem,
        b: LambdaElem,
        beta: LambdaElem,
        f_c: LambdaElem,
    },
    Through {
        t: LambdaElem,
        iota: LambdaElem,
        h: LambdaElem,
        mu: LambdaElem,
    },
    Trivial {
        label: LambdaElem,
    },
    Cycle,
}

/// Computes the constants of one component from an admissible middle
/// vector. Constancy over the admissible set makes the choice immaterial.
pub fn component_constants(
    p: &ColoredPartition,
    q: &ColoredPartition,
    comp: &ComponentInfo,
    middle: &[LambdaElem],
) -> Result<ComponentConstants, ComposeError> {
    let lambda = p.lambda();
    match comp.kind {
        ComponentKind::Cycle => Ok(ComponentConstants::Cycle),
        ComponentKind::UpperTrivial => {
            debug_assert_eq!(comp.p_blocks.len(), 1);
            Ok(ComponentConstants::Trivial { label: p.block_color(comp.p_blocks[0]) })
        }
        ComponentKind::LowerTrivial => {
            debug_assert_eq!(comp.q_blocks.len(), 1);
            Ok(ComponentConstants::Trivial { label: q.block_color(comp.q_blocks[0]) })
        }
        ComponentKind::UpperHalf => {
            let data = through_data(p, true);
            let mine: Vec<&ThroughData> =
                data.iter().filter(|td| comp.p_blocks.contains(&td.block)).collect();
            debug_assert!(!mine.is_empty(), "half component has a through block");
            let leftmost = mine.iter().min_by_key(|td| td.mid_lo).unwrap();
            let rightmost = mine.iter().max_by_key(|td| td.mid_hi).unwrap();
            let f_c = interval_prod(lambda, middle, leftmost.mid_lo, rightmost.mid_hi);
            Ok(ComponentConstants::UpperHalf {
                t: rightmost.label,
                t_prime: leftmost.left_label,
                g: leftmost.gap_lower,
                alpha: leftmost.gap_upper,
                f_c,
            })
        }
        ComponentKind::LowerHalf => {
            let data = through_data(q, false);
            let mine: Vec<&ThroughData> =
                data.iter().filter(|td| comp.q_blocks.contains(&td.block)).collect();
            debug_assert!(!mine.is_empty(), "half component has a through block");
            let leftmost = mine.iter().min_by_key(|td| td.mid_lo).unwrap();
            let rightmost = mine.iter().max_by_key(|td| td.mid_hi).unwrap();
            let f_c = interval_prod(lambda, middle, leftmost.mid_lo, rightmost.mid_hi);
            Ok(ComponentConstants::LowerHalf {
                iota: rightmost.label,
                iota_prime: leftmost.left_label,
                b: leftmost.gap_upper,
                beta: leftmost.gap_lower,
                f_c,
            })
        }
        ComponentKind::Through => {
            let pdata = through_data(p, true);
            let qdata = through_data(q, false);
            let pr = pdata
                .iter()
                .filter(|td| comp.p_blocks.contains(&td.block))
                .max_by_key(|td| td.mid_hi)
                .expect("through component meets p through blocks");
            let qr = qdata
                .iter()
                .filter(|td| comp.q_blocks.contains(&td.block))
                .max_by_key(|td| td.mid_hi)
                .expect("through component meets q through blocks");
            let mid_max = *comp.middle.last().unwrap();
            let h = interval_prod(lambda, middle, pr.mid_hi + 1, mid_max);
            let mu = interval_prod(lambda, middle, qr.mid_hi + 1, mid_max);
            Ok(ComponentConstants::Through { t: pr.label, iota: qr.label, h, mu })
        }
    }
}

/// The Λ-label of a no-cycle component from its constants.
pub fn component_label(
    constants: &ComponentConstants,
    lambda: &FiniteGroup,
) -> Result<LambdaElem, ComposeError> {
    match *constants {
        ComponentConstants::Cycle => Err(ComposeError::ConstantsUnavailable),
        ComponentConstants::Trivial { label } => Ok(label),
        ComponentConstants::UpperHalf { t, t_prime, g, alpha, f_c } => {
            // t f^{-1} g^{-1} (t')^{-1} α
            let mut x = lambda.mul(t, lambda.inv(f_c));
            x = lambda.mul(x, lambda.inv(g));
            x = lambda.mul(x, lambda.inv(t_prime));
            Ok(lambda.mul(x, alpha))
        }
        ComponentConstants::LowerHalf { iota, iota_prime, b, beta, f_c } => {
            // β^{-1} (ι')^{-1} b f ι
            let mut x = lambda.mul(lambda.inv(beta), lambda.inv(iota_prime));
            x = lambda.mul(x, b);
            x = lambda.mul(x, f_c);
            Ok(lambda.mul(x, iota))
        }
        ComponentConstants::Through { t, iota, h, mu } => {
            // t h μ^{-1} ι
            let mut x = lambda.mul(t, h);
            x = lambda.mul(x, lambda.inv(mu));
            Ok(lambda.mul(x, iota))
        }
    }
}

/// One middle vector admissible for some choice of outer vectors, obtained
/// by potential propagation on the single-layer constraints; None exactly
/// when the composite operator is zero.
pub fn admissible_middle(
    p: &ColoredPartition,
    q: &ColoredPartition,
) -> Result<Option<Vec<LambdaElem>>, ComposeError> {
    check_composable(p, q)?;
    let constants = single_layer_constraints(p, q);
    let graph = build_gain_graph(p.l(), &constants, p.lambda());
    Ok(graph.solution(p.lambda()))
}

/// Outcome of a vertical composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompositionResult {
    Zero,
    Nonzero {
        composed: ColoredPartition,
        /// c - 1, the exponent of |Λ| in the scalar.
        exponent: u32,
    },
}

impl CompositionResult {
    pub fn is_zero(&self) -> bool {
        matches!(self, CompositionResult::Zero)
    }
}

/// Vertical composition q after p.
pub fn compose(p: &ColoredPartition, q: &ColoredPartition) -> Result<CompositionResult, ComposeError> {
    check_composable(p, q)?;
    let lambda = p.lambda().clone();
    let constants = single_layer_constraints(p, q);
    let graph = build_gain_graph(p.l(), &constants, &lambda);
    let Some(middle) = graph.solution(&lambda) else {
        return Ok(CompositionResult::Zero);
    };
    let components = connected_components(p.partition(), q.partition())?;
    let mut blocks = Vec::new();
    let mut colors = Vec::new();
    for comp in &components {
        if comp.kind == ComponentKind::Cycle {
            continue;
        }
        let constants = component_constants(p, q, comp, &middle)?;
        let label = component_label(&constants, &lambda)?;
        blocks.push(Block::new(comp.upper.clone(), comp.lower.clone()));
        colors.push(label);
    }
    let mut paired: Vec<(Block, LambdaElem)> = blocks.into_iter().zip(colors).collect();
    paired.sort_by(|a, b| {
        let key = |blk: &Block| match blk.min_upper() {
            Some(i) => (0, i),
            None => (1, blk.min_lower().unwrap()),
        };
        key(&a.0).cmp(&key(&b.0))
    });
    let (blocks, colors): (Vec<Block>, Vec<LambdaElem>) = paired.into_iter().unzip();
    let part = TwoRowPartition::new(p.k(), q.l(), blocks)?;
    let composed = ColoredPartition::new(
        part,
        colors,
        p.upper_colors().to_vec(),
        q.lower_colors().to_vec(),
        lambda,
        p.gamma().clone(),
    )?;
    let c = full_component_count(p.partition(), q.partition());
    Ok(CompositionResult::Nonzero { composed, exponent: (c - 1) as u32 })
}

/// δ of the composed partition; errors on a zero composite.
pub fn delta_of_composite(
    p: &ColoredPartition,
    q: &ColoredPartition,
    r: &[LambdaElem],
    d: &[LambdaElem],
) -> Result<bool, ComposeError> {
    match compose(p, q)? {
        CompositionResult::Zero => Err(ComposeError::ZeroComposite),
        CompositionResult::Nonzero { composed, .. } => {
            Ok(crate::operator::delta_eval(&composed, r, d)?)
        }
    }
}

/// Independent oracle: the literal operator product, entry (d⃗, r⃗) being
/// the number of middle vectors satisfying both δ indicators.
pub fn brute_force_compose(
    p: &ColoredPartition,
    q: &ColoredPartition,
) -> Result<MorphismMatrix, ComposeError> {
    check_composable(p, q)?;
    let mq = to_matrix(q)?;
    let mp = to_matrix(p)?;
    Ok(mq.compose(&mp)?)
}

/// All middle vectors admissible for the given outer vectors, by direct
/// enumeration of Λ^l. Test oracle for the counting and constancy laws.
pub fn brute_force_middle_solutions(
    p: &ColoredPartition,
    q: &ColoredPartition,
    r: &[LambdaElem],
    d: &[LambdaElem],
) -> Result<Vec<Vec<LambdaElem>>, ComposeError> {
    check_composable(p, q)?;
    let lambda = p.lambda();
    let order = lambda.order();
    let l = p.l();
    let mut out = Vec::new();
    for idx in 0..order.pow(l as u32) {
        let s: Vec<LambdaElem> = decode_basis(idx, l, order).into_iter().map(LambdaElem).collect();
        if crate::operator::delta_eval(p, r, &s)? && crate::operator::delta_eval(q, &s, d)? {
            out.push(s);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colored::enumerate_colored_identity;
    use crate::group::{FiniteGroup, PointGroup};
    use crate::operator::{cap, cup, identity_strand, tensor_partitions};
    use num_rational::Rational64;
    use std::sync::Arc;

    fn setup(spec: &str) -> (Arc<FiniteGroup>, Arc<PointGroup>) {
        (
            FiniteGroup::from_spec(spec).unwrap(),
            PointGroup::from_spec("free:1").unwrap(),
        )
    }

    fn bare(k: usize, l: usize, blocks: &[(&[usize], &[usize])]) -> TwoRowPartition {
        TwoRowPartition::new(
            k,
            l,
            blocks.iter().map(|(u, lo)| Block::new(u.to_vec(), lo.to_vec())).collect(),
        )
        .unwrap()
    }

    fn colored(
        part: TwoRowPartition,
        colors: Vec<LambdaElem>,
        lambda: &Arc<FiniteGroup>,
        gamma: &Arc<PointGroup>,
    ) -> ColoredPartition {
        ColoredPartition::with_identity_gamma(part, colors, lambda.clone(), gamma.clone()).unwrap()
    }

    #[test]
    fn components_identity_pair() {
        let p = bare(1, 1, &[(&[1], &[1])]);
        let comps = connected_components(&p, &p).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].kind, ComponentKind::Through);
    }

    #[test]
    fn components_cycle() {
        let p = bare(0, 4, &[(&[], &[1, 4]), (&[], &[2, 3])]);
        let q = bare(4, 0, &[(&[1, 2], &[]), (&[3, 4], &[])]);
        let comps = connected_components(&p, &q).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].kind, ComponentKind::Cycle);
        assert_eq!(comps[0].middle, vec![1, 2, 3, 4]);
    }

    #[test]
    fn components_trivial_and_half() {
        // p: two singletons; q: identity strand
        let p = bare(1, 1, &[(&[1], &[]), (&[], &[1])]);
        let q = bare(1, 1, &[(&[1], &[1])]);
        let comps = connected_components(&p, &q).unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].kind, ComponentKind::UpperTrivial);
        assert_eq!(comps[0].upper, vec![1]);
        assert_eq!(comps[1].kind, ComponentKind::LowerHalf);
        assert_eq!(comps[1].middle, vec![1]);
        assert_eq!(comps[1].lower, vec![1]);
    }

    #[test]
    fn components_middle_size_mismatch() {
        let p = bare(0, 2, &[(&[], &[1, 2])]);
        let q = bare(1, 1, &[(&[1], &[1])]);
        assert!(matches!(
            connected_components(&p, &q),
            Err(ComposeError::MiddleMismatch(_))
        ));
    }

    #[test]
    fn entrance_interval_component_has_none() {
        let p = bare(0, 2, &[(&[], &[1, 2])]);
        let q = bare(2, 0, &[(&[1, 2], &[])]);
        let comps = connected_components(&p, &q).unwrap();
        let e = component_entrances(&comps[0], &p, &q).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn entrance_example_and_swap() {
        let p = bare(0, 4, &[(&[], &[1, 4]), (&[], &[2]), (&[], &[3])]);
        let q = bare(4, 0, &[(&[2, 3], &[]), (&[1], &[]), (&[4], &[])]);
        let comps = connected_components(&p, &q).unwrap();
        let outer = comps
            .iter()
            .find(|c| c.middle.contains(&1) && c.middle.contains(&4))
            .unwrap();
        let es = component_entrances(outer, &p, &q).unwrap();
        assert_eq!(es, vec![Entrance { lo: 2, hi: 3, side: EntranceSide::Lower }]);

        // swapping p and q flips the side
        let p2 = bare(0, 4, &[(&[], &[2, 3]), (&[], &[1]), (&[], &[4])]);
        let q2 = bare(4, 0, &[(&[1, 4], &[]), (&[2], &[]), (&[3], &[])]);
        let comps2 = connected_components(&p2, &q2).unwrap();
        let outer2 = comps2
            .iter()
            .find(|c| c.middle.contains(&1) && c.middle.contains(&4))
            .unwrap();
        let es2 = component_entrances(outer2, &p2, &q2).unwrap();
        assert_eq!(es2, vec![Entrance { lo: 2, hi: 3, side: EntranceSide::Upper }]);
    }

    #[test]
    fn entrance_rejects_trivial_component() {
        let p = bare(1, 1, &[(&[1], &[]), (&[], &[1])]);
        let q = bare(1, 1, &[(&[1], &[1])]);
        let comps = connected_components(&p, &q).unwrap();
        assert!(matches!(
            component_entrances(&comps[0], &p, &q),
            Err(ComposeError::TrivialComponent)
        ));
    }

    #[test]
    fn middle_system_two_singleton_constraints() {
        let (lambda, gamma) = setup("Z2");
        let a = LambdaElem(1);
        // p: upper singleton colored a (to satisfy the boundary with the
        // lower singleton also a); q mirrors it
        let p = colored(bare(1, 1, &[(&[1], &[]), (&[], &[1])]), vec![a, a], &lambda, &gamma);
        let q = colored(bare(1, 1, &[(&[1], &[]), (&[], &[1])]), vec![a, a], &lambda, &gamma);
        let sys = middle_system(&p, &q, &[LambdaElem(0)], &[LambdaElem(0)]).unwrap();
        // p's lower singleton: s1 = a; q's upper singleton: s1 = a^{-1} = a
        assert_eq!(sys.len(), 2);
        assert!(sys.iter().all(|c| c.lo == 1 && c.hi == 1 && c.target == a));
        // admissible outer vectors must satisfy the singleton rows: r1 = a, d1 = a
        assert_eq!(count_middle_solutions(&p, &q, &[a], &[a]).unwrap(), 1);
        assert_eq!(count_middle_solutions(&p, &q, &[LambdaElem(0)], &[a]).unwrap(), 0);
    }

    #[test]
    fn gain_graph_cap_cup() {
        let (lambda, gamma) = setup("Z2");
        let c = cup(&gamma.identity(), &lambda, &gamma);
        let cp = cap(&gamma.identity(), &lambda, &gamma);
        let sys = middle_system(&c, &cp, &[], &[]).unwrap();
        let graph = build_gain_graph(2, &sys, &lambda);
        assert_eq!(graph.edges.len(), 2);
        assert!(graph.edges.iter().all(|&(a, b, _)| (a, b) == (0, 2)));
        assert!(graph.balanced);
        assert_eq!(graph.component_count, 2);
    }

    #[test]
    fn gain_graph_zigzag() {
        let (lambda, gamma) = setup("Z2");
        let e = gamma.identity();
        let strand = identity_strand(&e, &lambda, &gamma);
        let p = tensor_partitions(&strand, &cup(&e, &lambda, &gamma)).unwrap();
        let q = tensor_partitions(&cap(&e, &lambda, &gamma), &strand).unwrap();
        let sys = middle_system(&p, &q, &[LambdaElem(0)], &[LambdaElem(0)]).unwrap();
        let graph = build_gain_graph(3, &sys, &lambda);
        let mut ends: Vec<(usize, usize)> = graph.edges.iter().map(|&(a, b, _)| (a, b)).collect();
        ends.sort_unstable();
        assert_eq!(ends, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(graph.component_count, 1);
        assert!(graph.balanced);
    }

    #[test]
    fn gain_graph_unbalanced() {
        let (lambda, gamma) = setup("Z2");
        let a = LambdaElem(1);
        let e = LambdaElem(0);
        // p's lower singleton wants s1 = a; q's upper singleton wants s1 = e
        let p = colored(bare(1, 1, &[(&[1], &[]), (&[], &[1])]), vec![a, a], &lambda, &gamma);
        let q = colored(bare(1, 1, &[(&[1], &[]), (&[], &[1])]), vec![e, e], &lambda, &gamma);
        let sys = middle_system(&p, &q, &[e], &[e]).unwrap();
        let graph = build_gain_graph(1, &sys, &lambda);
        assert!(!graph.balanced);
        assert_eq!(count_middle_solutions(&p, &q, &[e], &[e]).unwrap(), 0);
        assert_eq!(compose(&p, &q).unwrap(), CompositionResult::Zero);
    }

    #[test]
    fn count_middle_solutions_examples() {
        let (lambda, gamma) = setup("Z3");
        let e = gamma.identity();
        let c = cup(&e, &lambda, &gamma);
        let cp = cap(&e, &lambda, &gamma);
        assert_eq!(count_middle_solutions(&c, &cp, &[], &[]).unwrap(), 3);
        let strand = identity_strand(&e, &lambda, &gamma);
        assert_eq!(
            count_middle_solutions(&strand, &strand, &[LambdaElem(1)], &[LambdaElem(1)]).unwrap(),
            1
        );
        assert_eq!(
            count_middle_solutions(&strand, &strand, &[LambdaElem(1)], &[LambdaElem(2)]).unwrap(),
            0
        );
    }

    #[test]
    fn counts_match_brute_force() {
        let (lambda, gamma) = setup("Z2");
        let order = lambda.order();
        for (k, l, m) in [(0, 2, 0), (1, 1, 1), (1, 2, 1), (2, 2, 2)] {
            let ps = enumerate_colored_identity(k, l, &lambda, &gamma).unwrap();
            let qs = enumerate_colored_identity(l, m, &lambda, &gamma).unwrap();
            for p in &ps {
                for q in &qs {
                    for ridx in 0..order.pow(k as u32) {
                        let r: Vec<LambdaElem> =
                            decode_basis(ridx, k, order).into_iter().map(LambdaElem).collect();
                        for didx in 0..order.pow(m as u32) {
                            let d: Vec<LambdaElem> =
                                decode_basis(didx, m, order).into_iter().map(LambdaElem).collect();
                            let brute =
                                brute_force_middle_solutions(p, q, &r, &d).unwrap().len() as u64;
                            let fast = count_middle_solutions(p, q, &r, &d).unwrap();
                            assert_eq!(brute, fast, "counts differ");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn entrance_constant_from_singleton_colors() {
        let (lambda, gamma) = setup("Z3");
        let x2 = LambdaElem(1);
        let x3 = LambdaElem(2);
        // p: outer arc {1,4} colored e (boundary), singletons {2},{3} free
        let p = colored(
            bare(0, 4, &[(&[], &[1, 4]), (&[], &[2]), (&[], &[3])]),
            vec![LambdaElem(0), x2, x3],
            &lambda,
            &gamma,
        );
        // q: cap over all four points, arcs {1,2},{3,4} — entrance blocks come from p
        let q = colored(
            bare(4, 0, &[(&[2, 3], &[]), (&[1], &[]), (&[4], &[])]),
            vec![lambda.inv(lambda.mul(x2, x3)), LambdaElem(0), LambdaElem(0)],
            &lambda,
            &gamma,
        );
        let comps = connected_components(p.partition(), q.partition()).unwrap();
        let outer = comps
            .iter()
            .find(|c| c.middle.contains(&1) && c.middle.contains(&4))
            .unwrap();
        let es = component_entrances(outer, p.partition(), q.partition()).unwrap();
        assert_eq!(es.len(), 1);
        let h = entrance_constant(&es[0], outer, &p, &q).unwrap();
        assert_eq!(h, lambda.mul(x2, x3));
    }

    /// Mixed subsystem whose widened block family contains a three-edge
    /// cycle; the entrance sits right of the pocket and reaches it through
    /// two nested bridges of q.
    fn mixed_entrance_pair(
        q3_color: LambdaElem,
        lambda: &Arc<FiniteGroup>,
        gamma: &Arc<PointGroup>,
    ) -> (ColoredPartition, ColoredPartition) {
        let a = LambdaElem(1);
        let a2 = LambdaElem(2);
        let e = LambdaElem(0);
        // canonical block order sorts by min point
        let p = colored(
            bare(0, 9, &[(&[], &[1, 6]), (&[], &[2, 5]), (&[], &[3, 4]), (&[], &[7, 8]), (&[], &[9])]),
            vec![e, a, a2, a2, e],
            lambda,
            gamma,
        );
        let q = colored(
            bare(9, 0, &[(&[1, 9], &[]), (&[2, 8], &[]), (&[3], &[]), (&[4], &[]), (&[5, 7], &[]), (&[6], &[])]),
            vec![a, e, q3_color, e, e, e],
            lambda,
            gamma,
        );
        (p, q)
    }

    #[test]
    fn entrance_constant_mixed_subsystem() {
        let (lambda, gamma) = setup("Z3");
        // the subsystem cycle x3 = col(q3)^{-1}, x4 = e, x3 x4 = a2
        // balances exactly when col(q3) = a
        let (p, q) = mixed_entrance_pair(LambdaElem(1), &lambda, &gamma);
        let comps = connected_components(p.partition(), q.partition()).unwrap();
        let c = comps
            .iter()
            .find(|c| c.middle.contains(&1) && c.middle.contains(&6) && c.middle.contains(&9))
            .unwrap();
        let es = component_entrances(c, p.partition(), q.partition()).unwrap();
        assert_eq!(es, vec![Entrance { lo: 7, hi: 8, side: EntranceSide::Upper }]);
        let h = entrance_constant(&es[0], c, &p, &q).unwrap();
        // h = inverse of the color of p's block {2,5}
        assert_eq!(h, lambda.inv(LambdaElem(1)));

        // every brute-force admissible middle vector gives the same product
        let solutions = brute_force_middle_solutions(&p, &q, &[], &[]).unwrap();
        assert!(!solutions.is_empty());
        for s in &solutions {
            assert_eq!(lambda.ordered_product(&s[6..8]), h);
        }

        // breaking the cycle balance makes the subsystem unsolvable
        let (p_bad, q_bad) = mixed_entrance_pair(LambdaElem(0), &lambda, &gamma);
        let err = entrance_constant(&es[0], c, &p_bad, &q_bad);
        assert_eq!(err.unwrap_err(), ComposeError::UnsolvableSubsystem);
    }

    #[test]
    fn entrance_constant_single_consecutive_block() {
        let (lambda, gamma) = setup("Z3");
        let t = LambdaElem(2);
        let p = colored(
            bare(0, 4, &[(&[], &[1, 4]), (&[], &[2, 3])]),
            vec![LambdaElem(0), t],
            &lambda,
            &gamma,
        );
        let q = colored(
            bare(4, 0, &[(&[1], &[]), (&[2], &[]), (&[3], &[]), (&[4], &[])]),
            vec![LambdaElem(0), LambdaElem(1), lambda.inv(LambdaElem(1)), LambdaElem(0)],
            &lambda,
            &gamma,
        );
        let comps = connected_components(p.partition(), q.partition()).unwrap();
        let outer = comps
            .iter()
            .find(|c| c.middle.contains(&1) && c.middle.contains(&4))
            .unwrap();
        let es = component_entrances(outer, p.partition(), q.partition()).unwrap();
        assert_eq!(es, vec![Entrance { lo: 2, hi: 3, side: EntranceSide::Lower }]);
        // the single nested block {2,3} of p carries the whole product
        let h = entrance_constant(&es[0], outer, &p, &q).unwrap();
        assert_eq!(h, t);
    }

    #[test]
    fn compose_cap_after_cup() {
        let (lambda, gamma) = setup("Z2");
        let g = gamma.parse("a").unwrap();
        let c = cup(&g, &lambda, &gamma);
        let cp = cap(&g, &lambda, &gamma);
        match compose(&c, &cp).unwrap() {
            CompositionResult::Nonzero { composed, exponent } => {
                assert_eq!(composed.k(), 0);
                assert_eq!(composed.l(), 0);
                assert_eq!(composed.partition().num_blocks(), 0);
                assert_eq!(exponent, 1);
            }
            CompositionResult::Zero => panic!("cap∘cup is nonzero"),
        }
    }

    #[test]
    fn compose_zigzag_is_identity_strand() {
        let (lambda, gamma) = setup("Z3");
        let g = gamma.parse("a").unwrap();
        let ginv = gamma.inv(&g).unwrap();
        let strand = identity_strand(&g, &lambda, &gamma);
        let p = tensor_partitions(&strand, &cup(&ginv, &lambda, &gamma)).unwrap();
        let q = tensor_partitions(&cap(&g, &lambda, &gamma), &strand).unwrap();
        match compose(&p, &q).unwrap() {
            CompositionResult::Nonzero { composed, exponent } => {
                assert_eq!(exponent, 0);
                assert_eq!(composed, strand);
            }
            CompositionResult::Zero => panic!("zigzag is nonzero"),
        }
    }

    #[test]
    fn compose_identity_is_unit() {
        let (lambda, gamma) = setup("Z2");
        for (k, l) in [(1, 1), (2, 1), (2, 2), (0, 2)] {
            let id_left = crate::operator::identity_partition(
                &vec![gamma.identity(); k],
                &lambda,
                &gamma,
            );
            let id_right =
                crate::operator::identity_partition(&vec![gamma.identity(); l], &lambda, &gamma);
            for cp in enumerate_colored_identity(k, l, &lambda, &gamma).unwrap() {
                match compose(&id_left, &cp).unwrap() {
                    CompositionResult::Nonzero { composed, exponent } => {
                        assert_eq!(exponent, 0);
                        assert_eq!(composed, cp);
                    }
                    CompositionResult::Zero => panic!("identity composite is nonzero"),
                }
                match compose(&cp, &id_right).unwrap() {
                    CompositionResult::Nonzero { composed, exponent } => {
                        assert_eq!(exponent, 0);
                        assert_eq!(composed, cp);
                    }
                    CompositionResult::Zero => panic!("identity composite is nonzero"),
                }
            }
        }
    }

    #[test]
    fn master_law_small_universe() {
        let (lambda, gamma) = setup("Z2");
        for (k, l, m) in [(0, 2, 0), (1, 1, 1), (2, 2, 2), (0, 2, 2), (1, 2, 1)] {
            let ps = enumerate_colored_identity(k, l, &lambda, &gamma).unwrap();
            let qs = enumerate_colored_identity(l, m, &lambda, &gamma).unwrap();
            for p in &ps {
                for q in &qs {
                    let brute = brute_force_compose(p, q).unwrap();
                    match compose(p, q).unwrap() {
                        CompositionResult::Zero => {
                            assert!(brute.is_zero(), "engine says zero, oracle disagrees");
                        }
                        CompositionResult::Nonzero { composed, exponent } => {
                            assert!(composed.check_boundary_condition());
                            assert!(composed.check_gamma_condition());
                            let scalar =
                                Rational64::from_integer((lambda.order() as i64).pow(exponent));
                            let structural = to_matrix(&composed).unwrap().scale(scalar);
                            assert!(
                                brute.equal(&structural).unwrap(),
                                "master law fails for {p:?} ; {q:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn delta_of_composite_matches_existence() {
        let (lambda, gamma) = setup("Z2");
        let order = lambda.order();
        let (k, l, m) = (1, 2, 1);
        let ps = enumerate_colored_identity(k, l, &lambda, &gamma).unwrap();
        let qs = enumerate_colored_identity(l, m, &lambda, &gamma).unwrap();
        for p in &ps {
            for q in &qs {
                if compose(p, q).unwrap().is_zero() {
                    continue;
                }
                for ridx in 0..order.pow(k as u32) {
                    let r: Vec<LambdaElem> =
                        decode_basis(ridx, k, order).into_iter().map(LambdaElem).collect();
                    for didx in 0..order.pow(m as u32) {
                        let d: Vec<LambdaElem> =
                            decode_basis(didx, m, order).into_iter().map(LambdaElem).collect();
                        let exists = !brute_force_middle_solutions(p, q, &r, &d).unwrap().is_empty();
                        assert_eq!(delta_of_composite(p, q, &r, &d).unwrap(), exists);
                    }
                }
            }
        }
    }

    /// Middle edges of the pair tagged by side: true for p, false for q.
    fn middle_edges_with_side(p: &TwoRowPartition, q: &TwoRowPartition) -> Vec<(usize, usize, bool, (usize, usize))> {
        let mut out = Vec::new();
        for b in p.blocks() {
            if let (Some(lo), Some(hi)) = (b.min_lower(), b.max_lower()) {
                out.push((lo - 1, hi, true, (lo, hi)));
            }
        }
        for b in q.blocks() {
            if let (Some(lo), Some(hi)) = (b.min_upper(), b.max_upper()) {
                out.push((lo - 1, hi, false, (lo, hi)));
            }
        }
        out
    }

    /// All simple cycles of the underlying multigraph as edge subsets:
    /// nonempty, connected, every touched vertex of degree exactly two.
    fn simple_cycles(l: usize, edges: &[(usize, usize, bool, (usize, usize))]) -> Vec<Vec<usize>> {
        let ne = edges.len();
        let mut out = Vec::new();
        for mask in 1u32..(1 << ne) {
            let subset: Vec<usize> = (0..ne).filter(|i| mask & (1 << i) != 0).collect();
            let mut degree = vec![0usize; l + 1];
            for &i in &subset {
                degree[edges[i].0] += 1;
                degree[edges[i].1] += 1;
            }
            if degree.iter().any(|&d| d != 0 && d != 2) {
                continue;
            }
            // connectivity of the touched vertices through subset edges
            let mut uf = UnionFind::new(l + 1);
            for &i in &subset {
                uf.union(edges[i].0, edges[i].1);
            }
            let touched: Vec<usize> = (0..=l).filter(|&v| degree[v] > 0).collect();
            let root = uf.find(touched[0]);
            if touched.iter().all(|&v| uf.find(v) == root) {
                out.push(subset);
            }
        }
        out
    }

    #[test]
    fn crossing_parity_on_enumerated_cycles() {
        // for every simple cycle and every middle point, the number of
        // p-side plus q-side edges whose block interval covers the point
        // is even
        let mut cycles_seen = 0usize;
        for (k, l, m) in [(0usize, 2usize, 0usize), (0, 3, 0), (1, 3, 1), (0, 4, 0), (2, 2, 2)] {
            for p in TwoRowPartition::enumerate(k, l).unwrap() {
                for q in TwoRowPartition::enumerate(l, m).unwrap() {
                    let edges = middle_edges_with_side(&p, &q);
                    for cycle in simple_cycles(l, &edges) {
                        cycles_seen += 1;
                        for x in 1..=l {
                            let crossings = cycle
                                .iter()
                                .filter(|&&i| {
                                    let (_, _, _, (lo, hi)) = edges[i];
                                    lo <= x && x <= hi
                                })
                                .count();
                            assert_eq!(crossings % 2, 0, "odd crossing count at {x}");
                        }
                    }
                }
            }
        }
        assert!(cycles_seen > 0);
    }

    #[test]
    fn unique_outer_cycle_when_middle_connected() {
        // restricted to pairs with exactly one middle-touching component,
        // the underlying gain graph has a unique simple cycle formed by
        // the relative outer blocks of both middle partitions
        let mut instances = 0usize;
        for (k, l, m) in [(0usize, 2usize, 0usize), (0, 3, 0), (1, 3, 1), (0, 4, 0), (1, 2, 1)] {
            for p in TwoRowPartition::enumerate(k, l).unwrap() {
                for q in TwoRowPartition::enumerate(l, m).unwrap() {
                    let comps = connected_components(&p, &q).unwrap();
                    let middle_touching =
                        comps.iter().filter(|c| !c.middle.is_empty()).count();
                    if middle_touching != 1 {
                        continue;
                    }
                    instances += 1;
                    let edges = middle_edges_with_side(&p, &q);
                    let cycles = simple_cycles(l, &edges);
                    assert_eq!(cycles.len(), 1, "expected a unique simple cycle");
                    // outer blocks: maximal middle intervals within each side
                    let outer: Vec<usize> = (0..edges.len())
                        .filter(|&i| {
                            let (_, _, side, (lo, hi)) = edges[i];
                            !edges.iter().enumerate().any(|(j, &(_, _, oside, (olo, ohi)))| {
                                j != i && oside == side && olo <= lo && hi <= ohi && (olo, ohi) != (lo, hi)
                            })
                        })
                        .collect();
                    let mut cycle = cycles[0].clone();
                    cycle.sort_unstable();
                    let mut outer_sorted = outer;
                    outer_sorted.sort_unstable();
                    assert_eq!(cycle, outer_sorted, "cycle is not the outer blocks");
                }
            }
        }
        assert!(instances > 0);
    }

    #[test]
    fn compose_rejects_gamma_mismatch() {
        let (lambda, gamma) = setup("Z2");
        let g = gamma.parse("a").unwrap();
        let strand_e = identity_strand(&gamma.identity(), &lambda, &gamma);
        let strand_g = identity_strand(&g, &lambda, &gamma);
        assert!(matches!(
            compose(&strand_e, &strand_g),
            Err(ComposeError::MiddleMismatch(_))
        ));
    }
}
