//! Exact arithmetic for the finite block-color group and the point-color group.
//!
//! The block-color group is always finite and given by an explicit
//! multiplication table; the point-color group may additionally be a free
//! group (reduced words), the integers, or trivial. Both only ever need
//! products, inverses and equality tests, never enumeration of the
//! infinite realizations.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("unknown group spec `{0}`")]
    UnknownSpec(String),
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("element belongs to a different group instance")]
    MixedGroups,
    #[error("empty index set")]
    EmptyIndexSet,
    #[error("unknown element name `{0}`")]
    UnknownElementName(String),
}

/// Element of the finite block-color group, an index into its tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LambdaElem(pub usize);

/// A finite group given by a full multiplication table.
///
/// The identity is always index 0 and the table order fixes the basis
/// order everywhere downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    spec: String,
    order: usize,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
    names: Vec<String>,
}

impl FiniteGroup {
    /// Builds and validates a group from a table. Checks identity at index 0,
    /// two-sided inverses and full associativity (the order is at most 64 in
    /// every supported spec, so the cubic check is cheap).
    pub fn from_table(
        spec: &str,
        mult: Vec<Vec<usize>>,
        names: Vec<String>,
    ) -> Result<Self, GroupError> {
        let n = mult.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if names.len() != n {
            return Err(GroupError::InvalidTable("name count differs from order".into()));
        }
        for (i, row) in mult.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::InvalidTable(format!("row {i} has wrong length")));
            }
            for &v in row {
                if v >= n {
                    return Err(GroupError::InvalidTable(format!("entry {v} out of range")));
                }
            }
        }
        for x in 0..n {
            if mult[0][x] != x || mult[x][0] != x {
                return Err(GroupError::InvalidTable(format!(
                    "index 0 is not a two-sided identity at {x}"
                )));
            }
        }
        let mut inv = vec![usize::MAX; n];
        for x in 0..n {
            let mut found = None;
            for y in 0..n {
                if mult[x][y] == 0 && mult[y][x] == 0 {
                    found = Some(y);
                    break;
                }
            }
            match found {
                Some(y) => inv[x] = y,
                None => {
                    return Err(GroupError::InvalidTable(format!("no inverse for {x}")));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(GroupError::InvalidTable(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            spec: spec.to_string(),
            order: n,
            mult,
            inv,
            names,
        })
    }

    /// Parses a finite group spec: `Zn` (2 <= n <= 12), `Sn` (n <= 4),
    /// `trivial`, or `table:<path>`.
    pub fn from_spec(spec: &str) -> Result<Arc<Self>, GroupError> {
        let g = if spec == "trivial" {
            FiniteGroup::from_table(spec, vec![vec![0]], vec!["e".into()])?
        } else if let Some(n) = spec.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()) {
            if !(2..=12).contains(&n) {
                return Err(GroupError::UnknownSpec(spec.into()));
            }
            let mult = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
            let names = (0..n)
                .map(|i| match i {
                    0 => "e".to_string(),
                    1 => "a".to_string(),
                    _ => format!("a{i}"),
                })
                .collect();
            FiniteGroup::from_table(spec, mult, names)?
        } else if let Some(n) = spec.strip_prefix('S').and_then(|s| s.parse::<usize>().ok()) {
            if !(1..=4).contains(&n) {
                return Err(GroupError::UnknownSpec(spec.into()));
            }
            symmetric_group(spec, n)?
        } else if let Some(path) = spec.strip_prefix("table:") {
            let text = std::fs::read_to_string(path)
                .map_err(|e| GroupError::InvalidTable(format!("cannot read {path}: {e}")))?;
            table_from_text(spec, &text)?
        } else {
            return Err(GroupError::UnknownSpec(spec.into()));
        };
        Ok(Arc::new(g))
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> LambdaElem {
        LambdaElem(0)
    }

    pub fn mul(&self, a: LambdaElem, b: LambdaElem) -> LambdaElem {
        debug_assert!(a.0 < self.order && b.0 < self.order, "element from another group");
        LambdaElem(self.mult[a.0][b.0])
    }

    pub fn inv(&self, a: LambdaElem) -> LambdaElem {
        debug_assert!(a.0 < self.order, "element from another group");
        LambdaElem(self.inv[a.0])
    }

    pub fn is_identity(&self, a: LambdaElem) -> bool {
        a.0 == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = LambdaElem> {
        (0..self.order).map(LambdaElem)
    }

    pub fn name(&self, a: LambdaElem) -> &str {
        &self.names[a.0]
    }

    pub fn by_name(&self, name: &str) -> Result<LambdaElem, GroupError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(LambdaElem)
            .ok_or_else(|| GroupError::UnknownElementName(name.to_string()))
    }

    /// Left-to-right product of a sequence; empty product is the identity.
    pub fn ordered_product(&self, xs: &[LambdaElem]) -> LambdaElem {
        xs.iter().fold(self.identity(), |acc, &x| self.mul(acc, x))
    }

    /// Product over the consecutive interval [min A, max A] of a vector.
    pub fn interval_product(&self, xs: &[LambdaElem], indices: &[usize]) -> Result<LambdaElem, GroupError> {
        let (lo, hi) = index_range(indices)?;
        Ok(self.ordered_product(&xs[lo - 1..hi]))
    }

    /// Product over exactly the indices in A, in increasing order.
    pub fn restricted_product(&self, xs: &[LambdaElem], indices: &[usize]) -> Result<LambdaElem, GroupError> {
        if indices.is_empty() {
            return Err(GroupError::EmptyIndexSet);
        }
        let mut sorted: Vec<usize> = indices.to_vec();
        sorted.sort_unstable();
        Ok(self.ordered_product(&sorted.iter().map(|&i| xs[i - 1]).collect::<Vec<_>>()))
    }
}

fn index_range(indices: &[usize]) -> Result<(usize, usize), GroupError> {
    let lo = *indices.iter().min().ok_or(GroupError::EmptyIndexSet)?;
    let hi = *indices.iter().max().unwrap();
    Ok((lo, hi))
}

fn table_from_text(spec: &str, text: &str) -> Result<FiniteGroup, GroupError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| GroupError::InvalidTable("missing order line".into()))?
        .trim()
        .parse()
        .map_err(|_| GroupError::InvalidTable("bad order line".into()))?;
    if n == 0 || n > 64 {
        return Err(GroupError::InvalidTable(format!("order {n} out of range")));
    }
    let mut mult = Vec::with_capacity(n);
    for _ in 0..n {
        let row: Vec<usize> = lines
            .next()
            .ok_or_else(|| GroupError::InvalidTable("missing table row".into()))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| GroupError::InvalidTable(format!("bad entry `{t}`"))))
            .collect::<Result<_, _>>()?;
        mult.push(row);
    }
    let names = (0..n).map(|i| format!("g{i}")).collect();
    FiniteGroup::from_table(spec, mult, names)
}

/// Symmetric group on n letters, identity first, multiplication by
/// composition (s*t applies t first, then s).
fn symmetric_group(spec: &str, n: usize) -> Result<FiniteGroup, GroupError> {
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        perms.push(cur.clone());
        if !next_permutation(&mut cur) {
            break;
        }
    }
    // identity is already first in lexicographic order
    let order = perms.len();
    let compose = |s: &[usize], t: &[usize]| -> Vec<usize> { (0..n).map(|x| s[t[x]]).collect() };
    let mut mult = vec![vec![0usize; order]; order];
    for i in 0..order {
        for j in 0..order {
            let st = compose(&perms[i], &perms[j]);
            mult[i][j] = perms.iter().position(|p| *p == st).unwrap();
        }
    }
    let names = perms.iter().map(|p| cycle_notation(p)).collect();
    FiniteGroup::from_table(spec, mult, names)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn cycle_notation(p: &[usize]) -> String {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut x = start;
        loop {
            seen[x] = true;
            out.push_str(&(x + 1).to_string());
            x = p[x];
            if x == start {
                break;
            }
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// Element of the point-color group; the variant must match the
/// realization of the [`PointGroup`] it came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GammaElem {
    Finite(usize),
    /// Reduced word: nonzero letters, +g for generator g (1-based), -g for its inverse.
    Word(Vec<i8>),
    Int(i64),
    Trivial,
}

/// The point-color group in one of its supported realizations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointGroup {
    Finite(FiniteGroup),
    Free { rank: usize },
    Integers,
    Trivial,
}

impl PointGroup {
    /// Parses a point-group spec: everything [`FiniteGroup::from_spec`]
    /// accepts, plus `free:k` (k <= 3) and `Z`.
    pub fn from_spec(spec: &str) -> Result<Arc<Self>, GroupError> {
        if spec == "Z" {
            return Ok(Arc::new(PointGroup::Integers));
        }
        if spec == "trivial" {
            return Ok(Arc::new(PointGroup::Trivial));
        }
        if let Some(k) = spec.strip_prefix("free:").and_then(|s| s.parse::<usize>().ok()) {
            if !(1..=3).contains(&k) {
                return Err(GroupError::UnknownSpec(spec.into()));
            }
            return Ok(Arc::new(PointGroup::Free { rank: k }));
        }
        let fg = FiniteGroup::from_spec(spec)?;
        Ok(Arc::new(PointGroup::Finite((*fg).clone())))
    }

    pub fn spec(&self) -> String {
        match self {
            PointGroup::Finite(g) => g.spec().to_string(),
            PointGroup::Free { rank } => format!("free:{rank}"),
            PointGroup::Integers => "Z".to_string(),
            PointGroup::Trivial => "trivial".to_string(),
        }
    }

    pub fn identity(&self) -> GammaElem {
        match self {
            PointGroup::Finite(_) => GammaElem::Finite(0),
            PointGroup::Free { .. } => GammaElem::Word(Vec::new()),
            PointGroup::Integers => GammaElem::Int(0),
            PointGroup::Trivial => GammaElem::Trivial,
        }
    }

    pub fn is_identity(&self, a: &GammaElem) -> bool {
        *a == self.identity()
    }

    /// Composes two elements; free words are reduced eagerly.
    pub fn mul(&self, a: &GammaElem, b: &GammaElem) -> Result<GammaElem, GroupError> {
        match (self, a, b) {
            (PointGroup::Finite(g), GammaElem::Finite(x), GammaElem::Finite(y)) => {
                if *x >= g.order() || *y >= g.order() {
                    return Err(GroupError::MixedGroups);
                }
                Ok(GammaElem::Finite(g.mul(LambdaElem(*x), LambdaElem(*y)).0))
            }
            (PointGroup::Free { rank }, GammaElem::Word(u), GammaElem::Word(v)) => {
                if word_rank_ok(u, *rank) && word_rank_ok(v, *rank) {
                    let mut w = u.clone();
                    for &c in v {
                        if w.last().is_some_and(|&t| t == -c) {
                            w.pop();
                        } else {
                            w.push(c);
                        }
                    }
                    Ok(GammaElem::Word(w))
                } else {
                    Err(GroupError::MixedGroups)
                }
            }
            (PointGroup::Integers, GammaElem::Int(x), GammaElem::Int(y)) => Ok(GammaElem::Int(x + y)),
            (PointGroup::Trivial, GammaElem::Trivial, GammaElem::Trivial) => Ok(GammaElem::Trivial),
            _ => Err(GroupError::MixedGroups),
        }
    }

    pub fn inv(&self, a: &GammaElem) -> Result<GammaElem, GroupError> {
        match (self, a) {
            (PointGroup::Finite(g), GammaElem::Finite(x)) => {
                if *x >= g.order() {
                    return Err(GroupError::MixedGroups);
                }
                Ok(GammaElem::Finite(g.inv(LambdaElem(*x)).0))
            }
            (PointGroup::Free { rank }, GammaElem::Word(u)) => {
                if word_rank_ok(u, *rank) {
                    Ok(GammaElem::Word(u.iter().rev().map(|&c| -c).collect()))
                } else {
                    Err(GroupError::MixedGroups)
                }
            }
            (PointGroup::Integers, GammaElem::Int(x)) => Ok(GammaElem::Int(-x)),
            (PointGroup::Trivial, GammaElem::Trivial) => Ok(GammaElem::Trivial),
            _ => Err(GroupError::MixedGroups),
        }
    }

    pub fn ordered_product(&self, xs: &[GammaElem]) -> Result<GammaElem, GroupError> {
        let mut acc = self.identity();
        for x in xs {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// Product over exactly the 1-based indices in A, in increasing order;
    /// the empty set maps to the identity (the Γ-block condition needs this).
    pub fn restricted_product(&self, xs: &[GammaElem], indices: &[usize]) -> Result<GammaElem, GroupError> {
        let mut sorted: Vec<usize> = indices.to_vec();
        sorted.sort_unstable();
        let picked: Vec<GammaElem> = sorted.iter().map(|&i| xs[i - 1].clone()).collect();
        self.ordered_product(&picked)
    }

    /// Parses an element name. Finite realizations use table names; free
    /// words use `a`..`c` with uppercase for inverses (`1` or empty for the
    /// identity); integers are decimal.
    pub fn parse(&self, name: &str) -> Result<GammaElem, GroupError> {
        match self {
            PointGroup::Finite(g) => Ok(GammaElem::Finite(g.by_name(name)?.0)),
            PointGroup::Free { rank } => {
                if name == "1" || name.is_empty() || name == "e" {
                    return Ok(GammaElem::Word(Vec::new()));
                }
                let mut raw = Vec::new();
                for ch in name.chars() {
                    let (gen, sign) = if ch.is_ascii_lowercase() {
                        (ch as i8 - b'a' as i8 + 1, 1i8)
                    } else if ch.is_ascii_uppercase() {
                        (ch as i8 - b'A' as i8 + 1, -1i8)
                    } else {
                        return Err(GroupError::UnknownElementName(name.into()));
                    };
                    if gen as usize > *rank {
                        return Err(GroupError::UnknownElementName(name.into()));
                    }
                    raw.push(sign * gen);
                }
                let mut w: Vec<i8> = Vec::new();
                for c in raw {
                    if w.last().is_some_and(|&t| t == -c) {
                        w.pop();
                    } else {
                        w.push(c);
                    }
                }
                Ok(GammaElem::Word(w))
            }
            PointGroup::Integers => name
                .parse::<i64>()
                .map(GammaElem::Int)
                .map_err(|_| GroupError::UnknownElementName(name.into())),
            PointGroup::Trivial => {
                if name == "e" || name == "1" {
                    Ok(GammaElem::Trivial)
                } else {
                    Err(GroupError::UnknownElementName(name.into()))
                }
            }
        }
    }

    pub fn display(&self, a: &GammaElem) -> String {
        match (self, a) {
            (PointGroup::Finite(g), GammaElem::Finite(x)) => g.name(LambdaElem(*x)).to_string(),
            (PointGroup::Free { .. }, GammaElem::Word(w)) => {
                if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter()
                        .map(|&c| {
                            let ch = (b'a' + (c.unsigned_abs() - 1)) as char;
                            if c > 0 {
                                ch
                            } else {
                                ch.to_ascii_uppercase()
                            }
                        })
                        .collect()
                }
            }
            (PointGroup::Integers, GammaElem::Int(x)) => x.to_string(),
            (PointGroup::Trivial, GammaElem::Trivial) => "e".to_string(),
            _ => "?".to_string(),
        }
    }
}

fn word_rank_ok(w: &[i8], rank: usize) -> bool {
    w.iter().all(|&c| c != 0 && (c.unsigned_abs() as usize) <= rank)
}

impl fmt::Display for LambdaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
