//! Morphism spaces: enumerated partition bases, exact Gram matrices and
//! dimensions via rank over the rationals.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::colored::{enumerate_colored, ColoredPartition};
use crate::compose::ComposeError;
use crate::group::{FiniteGroup, GammaElem, PointGroup};
use crate::operator::to_matrix;

/// A hom space presented by its spanning partition operators.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub source: Vec<GammaElem>,
    pub target: Vec<GammaElem>,
    pub basis_candidates: Vec<ColoredPartition>,
    /// gram[i][j] counts the coinciding unit entries of candidates i and j.
    pub gram: Vec<Vec<i64>>,
    pub dimension: usize,
}

/// Enumerates the colored partitions spanning Mor(g⃗, h⃗) and computes the
/// span's dimension as the exact rank of their Gram matrix. Candidates can
/// be linearly dependent, so the dimension is the rank, not the count.
pub fn hom_space(
    source: &[GammaElem],
    target: &[GammaElem],
    lambda: &Arc<FiniteGroup>,
    gamma: &Arc<PointGroup>,
) -> Result<HomSpace, ComposeError> {
    let candidates = enumerate_colored(source.len(), target.len(), source, target, lambda, gamma)?;
    let matrices: Vec<_> = candidates
        .iter()
        .map(to_matrix)
        .collect::<Result<Vec<_>, _>>()?;
    let n = matrices.len();
    let mut gram = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            // both are 0/1 matrices, so the trace pairing counts shared entries
            let mut count = 0i64;
            for (r, c, _) in matrices[i].iter() {
                if matrices[j].raw_entry(r, c) != 0 {
                    count += 1;
                }
            }
            gram[i][j] = count;
            gram[j][i] = count;
        }
    }
    let dimension = exact_rank(&gram);
    Ok(HomSpace {
        source: source.to_vec(),
        target: target.to_vec(),
        basis_candidates: candidates,
        gram,
        dimension,
    })
}

/// Rank of an integer matrix over the rationals by fraction-free Gaussian
/// elimination on arbitrary-precision integers.
pub fn exact_rank(m: &[Vec<i64>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut rank = 0;
    let mut prev_pivot = BigInt::from(1);
    for col in 0..cols {
        let pivot_row = (rank..rows).find(|&r| !a[r][col].is_zero());
        let Some(pr) = pivot_row else { continue };
        a.swap(rank, pr);
        let pivot = a[rank][col].clone();
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let num = &pivot * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = &num / &prev_pivot;
            }
            a[r][col] = BigInt::zero();
        }
        prev_pivot = pivot.abs();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
