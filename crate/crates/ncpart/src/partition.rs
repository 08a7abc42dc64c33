//! Two-row noncrossing partitions and their boundary structure.
//!
//! Points live on an upper row [k] and a lower row [l]. The noncrossing
//! test linearizes the points in the boundary cyclic order
//! u_k, ..., u_1, l_1, ..., l_l; a partition is noncrossing when no two
//! blocks alternate in that order. Spans, nesting, the boundary and its
//! strict total order all follow this convention.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("blocks do not partition the point set: {0}")]
    NotAPartition(String),
    #[error("partition has crossing blocks")]
    Crossing,
    #[error("size limit exceeded: {0}")]
    SizeLimitExceeded(String),
    #[error("block {0} is not in the partition")]
    BlockNotInPartition(usize),
    #[error("blocks lie on mixed rows")]
    MixedRows,
    #[error("row is empty")]
    EmptyRow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Row {
    Upper,
    Lower,
}

/// A point of the two-row diagram, 1-based within its row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointRef {
    pub row: Row,
    pub index: usize,
}

impl PointRef {
    pub fn upper(index: usize) -> Self {
        PointRef { row: Row::Upper, index }
    }

    pub fn lower(index: usize) -> Self {
        PointRef { row: Row::Lower, index }
    }
}

/// A block, stored as its sorted upper and lower traces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    upper: Vec<usize>,
    lower: Vec<usize>,
}

impl Block {
    pub fn new(mut upper: Vec<usize>, mut lower: Vec<usize>) -> Self {
        upper.sort_unstable();
        lower.sort_unstable();
        Block { upper, lower }
    }

    pub fn from_points(points: &[PointRef]) -> Self {
        let upper = points.iter().filter(|p| p.row == Row::Upper).map(|p| p.index).collect();
        let lower = points.iter().filter(|p| p.row == Row::Lower).map(|p| p.index).collect();
        Block::new(upper, lower)
    }

    pub fn upper(&self) -> &[usize] {
        &self.upper
    }

    pub fn lower(&self) -> &[usize] {
        &self.lower
    }

    pub fn points(&self) -> Vec<PointRef> {
        self.upper
            .iter()
            .map(|&i| PointRef::upper(i))
            .chain(self.lower.iter().map(|&j| PointRef::lower(j)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.upper.len() + self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper.is_empty() && self.lower.is_empty()
    }

    pub fn is_through(&self) -> bool {
        !self.upper.is_empty() && !self.lower.is_empty()
    }

    pub fn is_upper_single(&self) -> bool {
        !self.upper.is_empty() && self.lower.is_empty()
    }

    pub fn is_lower_single(&self) -> bool {
        self.upper.is_empty() && !self.lower.is_empty()
    }

    pub fn single_row(&self) -> Option<Row> {
        if self.is_upper_single() {
            Some(Row::Upper)
        } else if self.is_lower_single() {
            Some(Row::Lower)
        } else {
            None
        }
    }

    pub fn min_upper(&self) -> Option<usize> {
        self.upper.first().copied()
    }

    pub fn max_upper(&self) -> Option<usize> {
        self.upper.last().copied()
    }

    pub fn min_lower(&self) -> Option<usize> {
        self.lower.first().copied()
    }

    pub fn max_lower(&self) -> Option<usize> {
        self.lower.last().copied()
    }

    /// Smallest point in canonical order (upper points precede lower points).
    fn canonical_key(&self) -> (Row, usize) {
        match self.min_upper() {
            Some(i) => (Row::Upper, i),
            None => (Row::Lower, self.min_lower().unwrap()),
        }
    }
}

/// The span of a block: prefix-based for through blocks, interval-based
/// for single-layer blocks, as a pair of optional inclusive row ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub upper: Option<(usize, usize)>,
    pub lower: Option<(usize, usize)>,
}

impl Span {
    pub fn contains(&self, other: &Span) -> bool {
        fn range_contains(a: Option<(usize, usize)>, b: Option<(usize, usize)>) -> bool {
            match (a, b) {
                (_, None) => true,
                (None, Some(_)) => false,
                (Some((alo, ahi)), Some((blo, bhi))) => alo <= blo && bhi <= ahi,
            }
        }
        range_contains(self.upper, other.upper) && range_contains(self.lower, other.lower)
    }

    pub fn strictly_contains(&self, other: &Span) -> bool {
        self.contains(other) && self != other
    }
}

/// A two-row noncrossing partition in canonical form: blocks sorted by
/// (row of min point, min point), points sorted within blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoRowPartition {
    k: usize,
    l: usize,
    blocks: Vec<Block>,
}

impl TwoRowPartition {
    /// Validates that the blocks partition [k] ⊔ [l] and are noncrossing.
    pub fn new(k: usize, l: usize, blocks: Vec<Block>) -> Result<Self, PartitionError> {
        check_partitions(k, l, &blocks)?;
        if !noncrossing(k, &blocks) {
            return Err(PartitionError::Crossing);
        }
        Ok(Self::new_unchecked(k, l, blocks))
    }

    pub(crate) fn new_unchecked(k: usize, l: usize, mut blocks: Vec<Block>) -> Self {
        blocks.sort_by_key(|b| b.canonical_key());
        TwoRowPartition { k, l, blocks }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the block containing a point.
    pub fn block_of(&self, p: PointRef) -> Option<usize> {
        self.blocks.iter().position(|b| match p.row {
            Row::Upper => b.upper.contains(&p.index),
            Row::Lower => b.lower.contains(&p.index),
        })
    }

    pub fn block_span(&self, idx: usize) -> Result<Span, PartitionError> {
        let b = self.blocks.get(idx).ok_or(PartitionError::BlockNotInPartition(idx))?;
        Ok(span_of(b))
    }

    /// Whether block `b` is nested in block `c` in the sense of the
    /// single-layer nesting relation: strict containment of the row trace
    /// of `b` inside the corresponding row trace of `c`.
    pub fn is_nested_in(&self, b: usize, c: usize) -> bool {
        if b == c {
            return false;
        }
        let (bb, cb) = (&self.blocks[b], &self.blocks[c]);
        match bb.single_row() {
            Some(Row::Upper) => match (cb.min_upper(), cb.max_upper()) {
                (Some(clo), Some(chi)) => clo < bb.min_upper().unwrap() && bb.max_upper().unwrap() < chi,
                _ => false,
            },
            Some(Row::Lower) => match (cb.min_lower(), cb.max_lower()) {
                (Some(clo), Some(chi)) => clo < bb.min_lower().unwrap() && bb.max_lower().unwrap() < chi,
                _ => false,
            },
            None => false,
        }
    }

    /// Indices of the global-outer blocks, sorted by the boundary order:
    /// upper single-layer by decreasing max, then the through block,
    /// then lower single-layer by increasing max.
    pub fn boundary(&self) -> Vec<usize> {
        let spans: Vec<Span> = self.blocks.iter().map(span_of).collect();
        let mut outer: Vec<usize> = (0..self.blocks.len())
            .filter(|&i| {
                !spans
                    .iter()
                    .enumerate()
                    .any(|(j, s)| j != i && s.strictly_contains(&spans[i]))
            })
            .collect();
        outer.sort_by_key(|&i| boundary_key(&self.blocks[i]));
        outer
    }

    /// A consecutive block of the partition restricted to one row, with
    /// ties broken by smallest minimum.
    pub fn find_consecutive_block(&self, row: Row) -> Result<usize, PartitionError> {
        let row_size = match row {
            Row::Upper => self.k,
            Row::Lower => self.l,
        };
        if row_size == 0 {
            return Err(PartitionError::EmptyRow);
        }
        let mut best: Option<(usize, usize)> = None; // (min point, index)
        for (i, b) in self.blocks.iter().enumerate() {
            if b.single_row() != Some(row) {
                continue;
            }
            let pts = match row {
                Row::Upper => &b.upper,
                Row::Lower => &b.lower,
            };
            let consecutive = pts.last().unwrap() - pts.first().unwrap() + 1 == pts.len();
            if consecutive {
                let key = *pts.first().unwrap();
                if best.is_none_or(|(m, _)| key < m) {
                    best = Some((key, i));
                }
            }
        }
        // a full one-row noncrossing partition always has one
        best.map(|(_, i)| i).ok_or(PartitionError::EmptyRow)
    }

    /// All noncrossing partitions of [k] ⊔ [l]; |NC(k,l)| = Catalan(k+l).
    pub fn enumerate(k: usize, l: usize) -> Result<Vec<TwoRowPartition>, PartitionError> {
        let n = k + l;
        if n > 10 {
            return Err(PartitionError::SizeLimitExceeded(format!("k+l = {n} > 10")));
        }
        if n == 0 {
            return Ok(vec![TwoRowPartition::new_unchecked(0, 0, Vec::new())]);
        }
        let mut out = Vec::new();
        // restricted growth strings over the linearized point order
        let mut assign = vec![0usize; n];
        loop {
            let num_classes = assign.iter().max().unwrap() + 1;
            let mut classes: Vec<Vec<usize>> = vec![Vec::new(); num_classes];
            for (pos, &c) in assign.iter().enumerate() {
                classes[c].push(pos + 1);
            }
            if linear_noncrossing(&classes) {
                let blocks = classes
                    .iter()
                    .map(|cls| {
                        let pts: Vec<PointRef> = cls.iter().map(|&pos| unlinearize(k, pos)).collect();
                        Block::from_points(&pts)
                    })
                    .collect();
                out.push(TwoRowPartition::new_unchecked(k, l, blocks));
            }
            if !next_rgs(&mut assign) {
                break;
            }
        }
        out.sort_by(|a, b| a.blocks.cmp(&b.blocks));
        out.dedup();
        Ok(out)
    }
}

fn boundary_key(b: &Block) -> (u8, isize) {
    if b.is_upper_single() {
        (0, -(b.max_upper().unwrap() as isize))
    } else if b.is_through() {
        (1, 0)
    } else {
        (2, b.max_lower().unwrap() as isize)
    }
}

pub(crate) fn span_of(b: &Block) -> Span {
    if b.is_through() {
        Span {
            upper: Some((1, b.max_upper().unwrap())),
            lower: Some((1, b.max_lower().unwrap())),
        }
    } else if b.is_upper_single() {
        Span {
            upper: Some((b.min_upper().unwrap(), b.max_upper().unwrap())),
            lower: None,
        }
    } else {
        Span {
            upper: None,
            lower: Some((b.min_lower().unwrap(), b.max_lower().unwrap())),
        }
    }
}

fn check_partitions(k: usize, l: usize, blocks: &[Block]) -> Result<(), PartitionError> {
    let mut seen_u = vec![false; k];
    let mut seen_l = vec![false; l];
    for b in blocks {
        if b.is_empty() {
            return Err(PartitionError::NotAPartition("empty block".into()));
        }
        for &i in &b.upper {
            if i == 0 || i > k {
                return Err(PartitionError::NotAPartition(format!("upper point {i} out of range")));
            }
            if seen_u[i - 1] {
                return Err(PartitionError::NotAPartition(format!("upper point {i} repeated")));
            }
            seen_u[i - 1] = true;
        }
        for &j in &b.lower {
            if j == 0 || j > l {
                return Err(PartitionError::NotAPartition(format!("lower point {j} out of range")));
            }
            if seen_l[j - 1] {
                return Err(PartitionError::NotAPartition(format!("lower point {j} repeated")));
            }
            seen_l[j - 1] = true;
        }
    }
    if let Some(i) = seen_u.iter().position(|&s| !s) {
        return Err(PartitionError::NotAPartition(format!("upper point {} missing", i + 1)));
    }
    if let Some(j) = seen_l.iter().position(|&s| !s) {
        return Err(PartitionError::NotAPartition(format!("lower point {} missing", j + 1)));
    }
    Ok(())
}

/// Position of a point in the linear order u_k, ..., u_1, l_1, ..., l_l (1-based).
pub(crate) fn linearize(k: usize, p: PointRef) -> usize {
    match p.row {
        Row::Upper => k + 1 - p.index,
        Row::Lower => k + p.index,
    }
}

pub(crate) fn unlinearize(k: usize, pos: usize) -> PointRef {
    if pos <= k {
        PointRef::upper(k + 1 - pos)
    } else {
        PointRef::lower(pos - k)
    }
}

fn noncrossing(k: usize, blocks: &[Block]) -> bool {
    let classes: Vec<Vec<usize>> = blocks
        .iter()
        .map(|b| {
            let mut pos: Vec<usize> = b.points().iter().map(|&p| linearize(k, p)).collect();
            pos.sort_unstable();
            pos
        })
        .collect();
    linear_noncrossing(&classes)
}

/// Crossing test on linear positions: two blocks cross when their merged
/// position sequence alternates at least X Y X Y.
fn linear_noncrossing(classes: &[Vec<usize>]) -> bool {
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            let (a, b) = (&classes[i], &classes[j]);
            let mut merged: Vec<(usize, bool)> = a
                .iter()
                .map(|&p| (p, false))
                .chain(b.iter().map(|&p| (p, true)))
                .collect();
            merged.sort_unstable();
            let mut switches = 0;
            for w in merged.windows(2) {
                if w[0].1 != w[1].1 {
                    switches += 1;
                }
            }
            if switches >= 3 {
                return false;
            }
        }
    }
    true
}

/// Whether a block list is a noncrossing partition of [k] ⊔ [l].
pub fn is_noncrossing(k: usize, l: usize, blocks: &[Block]) -> Result<bool, PartitionError> {
    check_partitions(k, l, blocks)?;
    Ok(noncrossing(k, blocks))
}

fn next_rgs(a: &mut [usize]) -> bool {
    // successor in restricted-growth-string order
    let n = a.len();
    for i in (1..n).rev() {
        let max_prefix = *a[..i].iter().max().unwrap();
        if a[i] <= max_prefix {
            a[i] += 1;
            for x in a[i + 1..].iter_mut() {
                *x = 0;
            }
            return true;
        }
    }
    false
}

pub fn catalan(n: usize) -> u64 {
    let mut c: Vec<u64> = vec![0; n + 1];
    c[0] = 1;
    for i in 1..=n {
        for j in 0..i {
            c[i] += c[j] * c[i - 1 - j];
        }
    }
    c[n]
}
