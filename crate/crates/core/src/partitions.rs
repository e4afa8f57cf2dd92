//! Partitions, compositions and skew shapes.
//!
//! These are the index types everything else is built on: partitions label
//! irreducible representations and conjugacy classes of parabolic subgroups,
//! compositions carry tableau contents where positional zeros are meaningful.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Hard cap for `partitions_of`; desk-scale computations stay far below it.
pub const PARTITION_ENUM_CAP: u32 = 30;

/// A partition: weakly decreasing tuple of positive integers.
///
/// Trailing zeros are trimmed on construction, so the empty tuple is the
/// unique partition of 0.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

/// A tuple of non-negative integers. Unlike [`Partition`], zeros are kept and
/// the length is significant.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Composition {
    entries: Vec<u32>,
}

/// A skew shape `outer/inner` with `inner` contained in `outer` rowwise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SkewShape {
    outer: Partition,
    inner: Partition,
}

impl Partition {
    /// Builds a partition, trimming trailing zeros.
    ///
    /// Returns an error unless the entries are weakly decreasing.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidLabel(format!(
                "not weakly decreasing: {parts:?}"
            )));
        }
        Ok(Self::from_unsorted(parts))
    }

    /// Builds a partition from entries in any order (sorts descending, drops zeros).
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of (nonzero) rows.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// `|λ|`, the number of boxes.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Row length with zero padding beyond the last row.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// The dual (transposed) partition `λ*`.
    pub fn conjugate(&self) -> Partition {
        let cols = self.part(0) as usize;
        let mut dual = Vec::with_capacity(cols);
        for c in 0..cols {
            dual.push(self.parts.iter().filter(|&&p| p as usize > c).count() as u32);
        }
        Partition { parts: dual }
    }

    /// The partition viewed as a composition (its row lengths).
    pub fn to_composition(&self) -> Composition {
        Composition::new(self.parts.clone())
    }

    /// Entrywise sum with zero padding. The result of summing two partitions
    /// is again a partition.
    pub fn entrywise_sum(&self, other: &Partition) -> Partition {
        let n = self.rows().max(other.rows());
        Partition {
            parts: (0..n).map(|i| self.part(i) + other.part(i)).collect(),
        }
    }

    /// Entrywise difference; errors if any entry would go negative or the
    /// result is not weakly decreasing.
    pub fn entrywise_sub(&self, other: &Partition) -> Result<Partition> {
        let n = self.rows().max(other.rows());
        let mut parts = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (self.part(i), other.part(i));
            if b > a {
                return Err(Error::Inconsistent(format!(
                    "entrywise difference negative at row {i}: {self} - {other}"
                )));
            }
            parts.push(a - b);
        }
        Partition::new(parts)
    }

    /// `true` when `inner` fits inside `self` rowwise.
    pub fn contains(&self, inner: &Partition) -> bool {
        inner.rows() <= self.rows() && inner.parts.iter().enumerate().all(|(i, &p)| p <= self.part(i))
    }

    /// Lexicographic comparison after zero-padding the shorter operand.
    pub fn lex_compare(&self, other: &Partition) -> Ordering {
        lex_compare_slices(&self.parts, &other.parts)
    }

    /// Dominance order: `self` dominates `other` (both of equal size).
    pub fn dominates(&self, other: &Partition) -> bool {
        let mut a = 0u64;
        let mut b = 0u64;
        for i in 0..self.rows().max(other.rows()) {
            a += self.part(i) as u64;
            b += other.part(i) as u64;
            if a < b {
                return false;
            }
        }
        a == b
    }
}

impl Composition {
    pub fn new(entries: Vec<u32>) -> Self {
        Composition { entries }
    }

    pub fn empty() -> Self {
        Composition { entries: Vec::new() }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, i: usize) -> u32 {
        self.entries.get(i).copied().unwrap_or(0)
    }

    pub fn size(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// The concatenation `self ⊕ other`.
    pub fn concat(&self, other: &Composition) -> Composition {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Composition { entries }
    }

    /// Entrywise sum, padding the shorter tuple with zeros.
    pub fn entrywise_sum(&self, other: &Composition) -> Composition {
        let n = self.len().max(other.len());
        Composition {
            entries: (0..n).map(|i| self.entry(i) + other.entry(i)).collect(),
        }
    }

    /// `d(α)`: the index of the last nonzero entry, 0 for the all-zero tuple.
    pub fn effective_length(&self) -> usize {
        self.entries
            .iter()
            .rposition(|&e| e != 0)
            .map_or(0, |i| i + 1)
    }

    /// Lexicographic comparison after zero-padding the shorter operand.
    pub fn lex_compare(&self, other: &Composition) -> Ordering {
        lex_compare_slices(&self.entries, &other.entries)
    }

    /// The entries sorted descending, as a partition.
    pub fn sorted(&self) -> Partition {
        Partition::from_unsorted(self.entries.clone())
    }

    /// `true` if all entries are positive.
    pub fn all_positive(&self) -> bool {
        self.entries.iter().all(|&e| e > 0)
    }
}

fn lex_compare_slices(a: &[u32], b: &[u32]) -> Ordering {
    let n = a.len().max(b.len());
    for i in 0..n {
        let (x, y) = (
            a.get(i).copied().unwrap_or(0),
            b.get(i).copied().unwrap_or(0),
        );
        match x.cmp(&y) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_compare_slices(&self.parts, &other.parts)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Composition {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_compare_slices(&self.entries, &other.entries)
            .then_with(|| self.entries.len().cmp(&other.entries.len()))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl SkewShape {
    /// Builds `outer/inner`; errors unless `inner` fits inside `outer`.
    pub fn new(outer: Partition, inner: Partition) -> Result<Self> {
        if !outer.contains(&inner) {
            return Err(Error::InvalidLabel(format!(
                "inner {inner} does not fit inside outer {outer}"
            )));
        }
        Ok(SkewShape { outer, inner })
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    pub fn size(&self) -> u32 {
        self.outer.size() - self.inner.size()
    }
}

/// All partitions of `n`, sorted descending under lexicographic comparison.
pub fn partitions_of(n: u32) -> Result<Vec<Partition>> {
    if n > PARTITION_ENUM_CAP {
        return Err(Error::CapExceeded(format!(
            "partitions_of({n}) exceeds cap {PARTITION_ENUM_CAP}"
        )));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    // Descending lexicographic order falls out of always trying the largest
    // next part first.
    fn rec(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: current.clone(),
            });
            return;
        }
        let hi = remaining.min(max_part);
        for next in (1..=hi).rev() {
            current.push(next);
            rec(remaining - next, next, current, out);
            current.pop();
        }
    }
    rec(n, n, &mut current, &mut out);
    Ok(out)
}

/// All pairs of partitions `(λ, μ)` with `|λ| + |μ| = n`.
pub fn bipartitions_of(n: u32) -> Result<Vec<(Partition, Partition)>> {
    let mut out = Vec::new();
    for i in 0..=n {
        for lam in partitions_of(i)? {
            for mu in partitions_of(n - i)? {
                out.push((lam.clone(), mu));
            }
        }
    }
    Ok(out)
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_u32_list(body: &str, what: &str) -> Result<Vec<u32>> {
    let body = body.trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad {what} entry {tok:?}")))
        })
        .collect()
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses the `[2,1]` text form; `[]` is the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("partition must look like [2,1], got {s:?}")))?;
        Partition::new(parse_u32_list(body, "partition")?)
    }
}

impl FromStr for Composition {
    type Err = Error;

    /// Parses the `(2,0,1)` text form; `()` is the empty composition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("composition must look like (2,0,1), got {s:?}")))?;
        Ok(Composition::new(parse_u32_list(body, "composition")?))
    }
}

/// Parses the `[2,1]|[1]` text form of a bipartition.
pub fn parse_bipartition(s: &str) -> Result<(Partition, Partition)> {
    let (a, b) = s
        .split_once('|')
        .ok_or_else(|| Error::Parse(format!("bipartition must look like [2,1]|[1], got {s:?}")))?;
    Ok((a.parse()?, b.parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn c(entries: &[u32]) -> Composition {
        Composition::new(entries.to_vec())
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p(&[]).conjugate(), p(&[]));
        assert_eq!(p(&[3]).conjugate(), p(&[1, 1, 1]));
        assert_eq!(p(&[2, 1]).conjugate(), p(&[2, 1]));
        assert_eq!(p(&[4, 2, 1]).conjugate(), p(&[3, 2, 1, 1]));
    }

    #[test]
    fn lex_compare_examples() {
        assert_eq!(p(&[2, 1]).lex_compare(&p(&[2, 1])), Ordering::Equal);
        assert_eq!(p(&[3]).lex_compare(&p(&[2, 1])), Ordering::Greater);
        // [2] pads to [2,0] which is smaller than [2,1].
        assert_eq!(p(&[2, 1]).lex_compare(&p(&[2])), Ordering::Greater);
    }

    #[test]
    fn concat_examples() {
        assert_eq!(c(&[1, 0]).concat(&c(&[2])), c(&[1, 0, 2]));
        assert_eq!(c(&[]).concat(&c(&[3])), c(&[3]));
        assert_eq!(c(&[2, 1]).concat(&c(&[1, 1])), c(&[2, 1, 1, 1]));
    }

    #[test]
    fn entrywise_sum_examples() {
        assert_eq!(c(&[1, 1]).entrywise_sum(&c(&[2])), c(&[3, 1]));
        assert_eq!(c(&[]).entrywise_sum(&c(&[])), c(&[]));
        assert_eq!(c(&[0, 2]).entrywise_sum(&c(&[1, 0, 1])), c(&[1, 2, 1]));
    }

    #[test]
    fn effective_length_examples() {
        assert_eq!(c(&[2, 0, 1, 0, 0]).effective_length(), 3);
        assert_eq!(c(&[0, 0]).effective_length(), 0);
        assert_eq!(c(&[1, 1, 1]).effective_length(), 3);
    }

    #[test]
    fn partitions_of_examples() {
        assert_eq!(partitions_of(0).unwrap(), vec![p(&[])]);
        assert_eq!(
            partitions_of(3).unwrap(),
            vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]
        );
        assert_eq!(partitions_of(8).unwrap().len(), 22);
        assert!(partitions_of(PARTITION_ENUM_CAP + 1).is_err());
    }

    /// Independent recursive counter used as the enumeration oracle.
    fn count_partitions(n: u32, max: u32) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=n.min(max)).map(|k| count_partitions(n - k, k)).sum()
    }

    #[test]
    fn partitions_of_is_sorted_and_complete() {
        for n in 0..=12 {
            let list = partitions_of(n).unwrap();
            assert_eq!(list.len() as u64, count_partitions(n, n), "count at n={n}");
            for w in list.windows(2) {
                assert_eq!(w[0].lex_compare(&w[1]), Ordering::Greater);
            }
            for q in &list {
                assert_eq!(q.size(), n);
            }
        }
    }

    #[test]
    fn lex_compare_is_total_order() {
        // Antisymmetry and transitivity, exhaustively on partitions of n <= 8.
        for n in 0..=8 {
            let list = partitions_of(n).unwrap();
            for a in &list {
                for b in &list {
                    let ab = a.lex_compare(b);
                    assert_eq!(ab, b.lex_compare(a).reverse());
                    if ab == Ordering::Equal {
                        assert_eq!(a, b);
                    }
                    for z in &list {
                        if ab != Ordering::Greater && b.lex_compare(z) != Ordering::Greater {
                            assert_ne!(a.lex_compare(z), Ordering::Greater);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn skew_shape_containment() {
        assert!(SkewShape::new(p(&[3, 2]), p(&[2, 1])).is_ok());
        assert!(SkewShape::new(p(&[3, 2]), p(&[2, 2, 1])).is_err());
        assert!(SkewShape::new(p(&[2]), p(&[3])).is_err());
    }

    #[test]
    fn parse_round_trips() {
        for s in ["[]", "[3]", "[2,1]", "[5,5,2,1]"] {
            let q: Partition = s.parse().unwrap();
            assert_eq!(q.to_string(), s);
        }
        for s in ["()", "(2,0,1)", "(0,0)"] {
            let q: Composition = s.parse().unwrap();
            assert_eq!(q.to_string(), s);
        }
        let (a, b) = parse_bipartition("[2,1]|[1]").unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("[2,1]".into(), "[1]".into()));
        assert!("2,1".parse::<Partition>().is_err());
        assert!("[2,x]".parse::<Partition>().is_err());
        assert!("[1,2]".parse::<Partition>().is_err());
    }

    proptest! {
        #[test]
        fn conjugate_is_involutive(parts in proptest::collection::vec(0u32..7, 0..8)) {
            let q = Partition::from_unsorted(parts);
            prop_assert!(q.size() <= 56);
            prop_assert_eq!(q.conjugate().conjugate(), q.clone());
            prop_assert_eq!(q.conjugate().size(), q.size());
        }

        #[test]
        fn composition_display_round_trips(entries in proptest::collection::vec(0u32..9, 0..6)) {
            let comp = Composition::new(entries);
            let back: Composition = comp.to_string().parse().unwrap();
            prop_assert_eq!(back, comp);
        }
    }
}
