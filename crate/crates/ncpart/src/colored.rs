//! Colored partitions: a Λ-label per block and a Γ-label per point,
//! with the boundary condition and the per-block point-color condition.

use std::sync::Arc;

use thiserror::Error;

use crate::group::{FiniteGroup, GammaElem, GroupError, LambdaElem, PointGroup};
use crate::partition::{PartitionError, Row, TwoRowPartition};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoredError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("color count {got} does not match block count {want}")]
    ColorCount { got: usize, want: usize },
    #[error("point color count mismatch on {row:?} row: got {got}, want {want}")]
    PointColorCount { row: Row, got: usize, want: usize },
    #[error("partitions use different groups")]
    GroupMismatch,
}

/// A two-row noncrossing partition with a Λ-color per block and a Γ-color
/// per point. Validity flags are computed on demand, not enforced at
/// construction: enumeration and the brute-force oracles need invalid
/// colorings too.
#[derive(Debug, Clone)]
pub struct ColoredPartition {
    partition: TwoRowPartition,
    block_colors: Vec<LambdaElem>,
    upper_colors: Vec<GammaElem>,
    lower_colors: Vec<GammaElem>,
    lambda: Arc<FiniteGroup>,
    gamma: Arc<PointGroup>,
}

impl PartialEq for ColoredPartition {
    fn eq(&self, other: &Self) -> bool {
        self.partition == other.partition
            && self.block_colors == other.block_colors
            && self.upper_colors == other.upper_colors
            && self.lower_colors == other.lower_colors
            && self.lambda == other.lambda
            && self.gamma == other.gamma
    }
}

impl Eq for ColoredPartition {}

impl ColoredPartition {
    pub fn new(
        partition: TwoRowPartition,
        block_colors: Vec<LambdaElem>,
        upper_colors: Vec<GammaElem>,
        lower_colors: Vec<GammaElem>,
        lambda: Arc<FiniteGroup>,
        gamma: Arc<PointGroup>,
    ) -> Result<Self, ColoredError> {
        if block_colors.len() != partition.num_blocks() {
            return Err(ColoredError::ColorCount {
                got: block_colors.len(),
                want: partition.num_blocks(),
            });
        }
        if upper_colors.len() != partition.k() {
            return Err(ColoredError::PointColorCount {
                row: Row::Upper,
                got: upper_colors.len(),
                want: partition.k(),
            });
        }
        if lower_colors.len() != partition.l() {
            return Err(ColoredError::PointColorCount {
                row: Row::Lower,
                got: lower_colors.len(),
                want: partition.l(),
            });
        }
        Ok(ColoredPartition {
            partition,
            block_colors,
            upper_colors,
            lower_colors,
            lambda,
            gamma,
        })
    }

    /// Convenience constructor with all point colors set to the identity.
    pub fn with_identity_gamma(
        partition: TwoRowPartition,
        block_colors: Vec<LambdaElem>,
        lambda: Arc<FiniteGroup>,
        gamma: Arc<PointGroup>,
    ) -> Result<Self, ColoredError> {
        let upper = vec![gamma.identity(); partition.k()];
        let lower = vec![gamma.identity(); partition.l()];
        ColoredPartition::new(partition, block_colors, upper, lower, lambda, gamma)
    }

    pub fn partition(&self) -> &TwoRowPartition {
        &self.partition
    }

    pub fn k(&self) -> usize {
        self.partition.k()
    }

    pub fn l(&self) -> usize {
        self.partition.l()
    }

    pub fn block_color(&self, idx: usize) -> LambdaElem {
        self.block_colors[idx]
    }

    pub fn block_colors(&self) -> &[LambdaElem] {
        &self.block_colors
    }

    pub fn upper_colors(&self) -> &[GammaElem] {
        &self.upper_colors
    }

    pub fn lower_colors(&self) -> &[GammaElem] {
        &self.lower_colors
    }

    pub fn lambda(&self) -> &Arc<FiniteGroup> {
        &self.lambda
    }

    pub fn gamma(&self) -> &Arc<PointGroup> {
        &self.gamma
    }

    /// The boundary condition: the ordered product of block colors over the
    /// boundary equals the identity.
    pub fn check_boundary_condition(&self) -> bool {
        let colors: Vec<LambdaElem> = self
            .partition
            .boundary()
            .iter()
            .map(|&i| self.block_colors[i])
            .collect();
        self.lambda.is_identity(self.lambda.ordered_product(&colors))
    }

    /// The per-block point-color condition: for every block the restricted
    /// product of upper colors equals that of lower colors, empty sides
    /// counting as the identity.
    pub fn check_gamma_condition(&self) -> bool {
        check_gamma_condition(&self.partition, &self.gamma, &self.upper_colors, &self.lower_colors)
            .unwrap_or(false)
    }

    pub fn is_valid(&self) -> bool {
        self.check_boundary_condition() && self.check_gamma_condition()
    }
}

/// Γ-condition on a bare partition with given point colors.
pub fn check_gamma_condition(
    p: &TwoRowPartition,
    gamma: &PointGroup,
    upper: &[GammaElem],
    lower: &[GammaElem],
) -> Result<bool, GroupError> {
    for b in p.blocks() {
        let up = gamma.restricted_product(upper, b.upper())?;
        let lo = gamma.restricted_product(lower, b.lower())?;
        if up != lo {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The ≺-ordered relative outer blocks of a same-row set of single-layer
/// blocks, together with the boundary product: for the upper row the
/// inverse of the product in decreasing-max order, for the lower row the
/// product in increasing-max order. Empty sets yield the identity.
pub fn relative_outer_boundary(
    p: &TwoRowPartition,
    block_indices: &[usize],
    direction: Row,
    colors: &[LambdaElem],
    lambda: &FiniteGroup,
) -> Result<(Vec<usize>, LambdaElem), PartitionError> {
    for &i in block_indices {
        if p.blocks()[i].single_row() != Some(direction) {
            return Err(PartitionError::MixedRows);
        }
    }
    let span = |i: usize| p.block_span(i).unwrap();
    let mut outer: Vec<usize> = block_indices
        .iter()
        .copied()
        .filter(|&i| {
            !block_indices
                .iter()
                .any(|&j| j != i && span(j).strictly_contains(&span(i)))
        })
        .collect();
    match direction {
        Row::Upper => outer.sort_by_key(|&i| std::cmp::Reverse(p.blocks()[i].max_upper().unwrap())),
        Row::Lower => outer.sort_by_key(|&i| p.blocks()[i].max_lower().unwrap()),
    }
    let product = lambda.ordered_product(&outer.iter().map(|&i| colors[i]).collect::<Vec<_>>());
    let value = match direction {
        Row::Upper => lambda.inv(product),
        Row::Lower => product,
    };
    Ok((outer, value))
}

/// All Λ-colorings of `p` satisfying the boundary condition: free choice on
/// every block except the ≺-last boundary block, whose label is solved from
/// the ordered boundary product. Count is |Λ|^(|p|-1).
pub fn enumerate_colorings(p: &TwoRowPartition, lambda: &Arc<FiniteGroup>) -> Vec<Vec<LambdaElem>> {
    let nb = p.num_blocks();
    if nb == 0 {
        return vec![Vec::new()];
    }
    let boundary = p.boundary();
    let solved = *boundary.last().expect("nonempty partition has nonempty boundary");
    let free: Vec<usize> = (0..nb).filter(|&i| i != solved).collect();
    let order = lambda.order();
    let mut out = Vec::with_capacity(order.pow((nb - 1) as u32));
    let mut counter = vec![0usize; free.len()];
    loop {
        let mut colors = vec![lambda.identity(); nb];
        for (slot, &i) in free.iter().enumerate() {
            colors[i] = LambdaElem(counter[slot]);
        }
        // boundary product with the solved slot set to identity equals
        // prefix * suffix; solve prefix * x * suffix = 1
        let prefix: Vec<LambdaElem> = boundary[..boundary.len() - 1].iter().map(|&i| colors[i]).collect();
        let t = lambda.inv(lambda.ordered_product(&prefix));
        colors[solved] = t;
        out.push(colors);
        // odometer over the free slots
        let mut done = true;
        for slot in (0..counter.len()).rev() {
            counter[slot] += 1;
            if counter[slot] < order {
                done = false;
                break;
            }
            counter[slot] = 0;
        }
        if counter.is_empty() || done {
            break;
        }
    }
    out
}

/// Every element of the bi-coloured set NC_Λ(g⃗, h⃗): the Γ-condition
/// filters partitions, the Λ-boundary condition filters colorings.
pub fn enumerate_colored(
    k: usize,
    l: usize,
    upper: &[GammaElem],
    lower: &[GammaElem],
    lambda: &Arc<FiniteGroup>,
    gamma: &Arc<PointGroup>,
) -> Result<Vec<ColoredPartition>, ColoredError> {
    let mut out = Vec::new();
    for p in TwoRowPartition::enumerate(k, l)? {
        if !check_gamma_condition(&p, gamma, upper, lower)? {
            continue;
        }
        for colors in enumerate_colorings(&p, lambda) {
            out.push(ColoredPartition::new(
                p.clone(),
                colors,
                upper.to_vec(),
                lower.to_vec(),
                lambda.clone(),
                gamma.clone(),
            )?);
        }
    }
    Ok(out)
}

/// Colored universe with all point colors equal to the identity; the
/// Γ-condition is then vacuous and the universe is as large as possible.
pub fn enumerate_colored_identity(
    k: usize,
    l: usize,
    lambda: &Arc<FiniteGroup>,
    gamma: &Arc<PointGroup>,
) -> Result<Vec<ColoredPartition>, ColoredError> {
    let upper = vec![gamma.identity(); k];
    let lower = vec![gamma.identity(); l];
    enumerate_colored(k, l, &upper, &lower, lambda, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Block;

    fn z(n: usize) -> Arc<FiniteGroup> {
        FiniteGroup::from_spec(&format!("Z{n}")).unwrap()
    }

    fn free1() -> Arc<PointGroup> {
        PointGroup::from_spec("free:1").unwrap()
    }

    fn part(k: usize, l: usize, blocks: &[(&[usize], &[usize])]) -> TwoRowPartition {
        TwoRowPartition::new(
            k,
            l,
            blocks.iter().map(|(u, lo)| Block::new(u.to_vec(), lo.to_vec())).collect(),
        )
        .unwrap()
    }

    #[test]
    fn singleton_boundary_forces_identity() {
        let lambda = z(2);
        let gamma = free1();
        let p = part(0, 2, &[(&[], &[1, 2])]);
        let ok = ColoredPartition::with_identity_gamma(p.clone(), vec![lambda.identity()], lambda.clone(), gamma.clone()).unwrap();
        assert!(ok.check_boundary_condition());
        let bad = ColoredPartition::with_identity_gamma(p, vec![LambdaElem(1)], lambda, gamma).unwrap();
        assert!(!bad.check_boundary_condition());
    }

    #[test]
    fn inner_block_is_unconstrained() {
        let lambda = z(2);
        let gamma = free1();
        let p = part(0, 4, &[(&[], &[1, 4]), (&[], &[2, 3])]);
        // canonical order puts {1,4} first
        let cp = ColoredPartition::with_identity_gamma(
            p,
            vec![lambda.identity(), LambdaElem(1)],
            lambda,
            gamma,
        )
        .unwrap();
        assert!(cp.check_boundary_condition());
    }

    #[test]
    fn two_singletons_boundary_over_z3() {
        let lambda = z(3);
        let gamma = free1();
        let p = part(1, 1, &[(&[1], &[]), (&[], &[1])]);
        let mut passing = 0;
        for tu in 0..3 {
            for tl in 0..3 {
                let cp = ColoredPartition::with_identity_gamma(
                    p.clone(),
                    vec![LambdaElem(tu), LambdaElem(tl)],
                    lambda.clone(),
                    gamma.clone(),
                )
                .unwrap();
                let expected = lambda.is_identity(lambda.mul(LambdaElem(tu), LambdaElem(tl)));
                assert_eq!(cp.check_boundary_condition(), expected);
                if expected {
                    passing += 1;
                }
            }
        }
        assert_eq!(passing, 3);
    }

    #[test]
    fn gamma_condition_through_block() {
        let gamma = free1();
        let p = part(1, 1, &[(&[1], &[1])]);
        let x = gamma.parse("a").unwrap();
        let y = gamma.parse("A").unwrap();
        assert!(check_gamma_condition(&p, &gamma, &[x.clone()], &[x.clone()]).unwrap());
        assert!(!check_gamma_condition(&p, &gamma, &[x], &[y]).unwrap());
    }

    #[test]
    fn gamma_condition_singleton_needs_identity() {
        let gamma = free1();
        let p = part(0, 1, &[(&[], &[1])]);
        assert!(check_gamma_condition(&p, &gamma, &[], &[gamma.identity()]).unwrap());
        let x = gamma.parse("a").unwrap();
        assert!(!check_gamma_condition(&p, &gamma, &[], &[x]).unwrap());
    }

    #[test]
    fn gamma_condition_reduced_word_equality() {
        let gamma = PointGroup::from_spec("free:2").unwrap();
        let p = part(2, 1, &[(&[1, 2], &[1])]);
        let x = gamma.parse("a").unwrap();
        let y = gamma.parse("b").unwrap();
        let xy = gamma.parse("ab").unwrap();
        assert!(check_gamma_condition(&p, &gamma, &[x, y], &[xy]).unwrap());
    }

    #[test]
    fn coloring_counts() {
        let g2 = z(2);
        let p1 = part(0, 2, &[(&[], &[1, 2])]);
        assert_eq!(enumerate_colorings(&p1, &g2).len(), 1);
        let p2 = part(0, 4, &[(&[], &[1, 4]), (&[], &[2, 3])]);
        assert_eq!(enumerate_colorings(&p2, &g2).len(), 2);
        let g3 = z(3);
        let p3 = part(1, 1, &[(&[1], &[]), (&[], &[1])]);
        assert_eq!(enumerate_colorings(&p3, &g3).len(), 3);
    }

    #[test]
    fn colorings_match_brute_force_filter() {
        for spec in ["Z2", "Z3"] {
            let lambda = FiniteGroup::from_spec(spec).unwrap();
            for (k, l) in [(0, 3), (1, 2), (2, 2), (1, 1)] {
                for p in TwoRowPartition::enumerate(k, l).unwrap() {
                    let fast: std::collections::HashSet<Vec<LambdaElem>> =
                        enumerate_colorings(&p, &lambda).into_iter().collect();
                    // brute force over all |Λ|^{|p|} colorings
                    let nb = p.num_blocks();
                    let order = lambda.order();
                    let mut slow = std::collections::HashSet::new();
                    let total = order.pow(nb as u32);
                    for code in 0..total {
                        let mut c = code;
                        let colors: Vec<LambdaElem> = (0..nb)
                            .map(|_| {
                                let e = LambdaElem(c % order);
                                c /= order;
                                e
                            })
                            .collect();
                        let bcolors: Vec<LambdaElem> =
                            p.boundary().iter().map(|&i| colors[i]).collect();
                        if lambda.is_identity(lambda.ordered_product(&bcolors)) {
                            slow.insert(colors);
                        }
                    }
                    assert_eq!(fast, slow, "coloring sets differ on {p:?}");
                    assert_eq!(
                        fast.len(),
                        order.pow(nb.saturating_sub(1) as u32),
                        "count law fails on {p:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn enumerate_colored_examples() {
        let lambda = z(2);
        let gamma = free1();
        // (0,1) with identity color: exactly one colored partition
        let one = enumerate_colored(0, 1, &[], &[gamma.identity()], &lambda, &gamma).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].is_valid());
        // (0,1) with a nontrivial point color: empty
        let x = gamma.parse("a").unwrap();
        let none = enumerate_colored(0, 1, &[], &[x], &lambda, &gamma).unwrap();
        assert!(none.is_empty());
        // (1,1) with identity colors: through + two singleton colorings
        let three = enumerate_colored(
            1,
            1,
            &[gamma.identity()],
            &[gamma.identity()],
            &lambda,
            &gamma,
        )
        .unwrap();
        assert_eq!(three.len(), 3);
        for cp in &three {
            assert!(cp.is_valid());
        }
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<ColoredPartition>();
        assert_send_sync::<FiniteGroup>();
        assert_send_sync::<PointGroup>();
        assert_send_sync::<TwoRowPartition>();
    }

    #[test]
    fn empty_partition_is_valid() {
        let lambda = z(2);
        let gamma = free1();
        let all = enumerate_colored(0, 0, &[], &[], &lambda, &gamma).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].is_valid());
    }

    #[test]
    fn relative_outer_examples() {
        let lambda = z(3);
        // empty set
        let p = part(0, 2, &[(&[], &[1, 2])]);
        let (blocks, t) =
            relative_outer_boundary(&p, &[], Row::Lower, &[lambda.identity()], &lambda).unwrap();
        assert!(blocks.is_empty());
        assert!(lambda.is_identity(t));

        // nested block removed, product is the outer color
        let p = part(0, 4, &[(&[], &[1, 4]), (&[], &[2, 3])]);
        let colors = vec![LambdaElem(1), LambdaElem(2)];
        let (blocks, t) = relative_outer_boundary(&p, &[0, 1], Row::Lower, &colors, &lambda).unwrap();
        assert_eq!(blocks, vec![0]);
        assert_eq!(t, LambdaElem(1));

        // upper: decreasing max order, then inverted
        let p = part(4, 0, &[(&[1, 2], &[]), (&[3, 4], &[])]);
        let colors = vec![LambdaElem(1), LambdaElem(2)];
        let (blocks, t) = relative_outer_boundary(&p, &[0, 1], Row::Upper, &colors, &lambda).unwrap();
        assert_eq!(blocks, vec![1, 0]);
        let expected = lambda.inv(lambda.mul(LambdaElem(2), LambdaElem(1)));
        assert_eq!(t, expected);
    }

    #[test]
    fn relative_outer_rejects_mixed_rows() {
        let lambda = z(2);
        let p = part(1, 1, &[(&[1], &[]), (&[], &[1])]);
        let err = relative_outer_boundary(&p, &[0, 1], Row::Upper, &[LambdaElem(0), LambdaElem(0)], &lambda);
        assert_eq!(err.unwrap_err(), PartitionError::MixedRows);
    }
}
