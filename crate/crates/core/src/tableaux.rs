//! Kostka numbers, Littlewood-Richardson coefficients and split-square
//! coefficients, all by exact enumeration or unitriangular inversion.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::{partitions_of, Composition, Partition, SkewShape};

/// Cap on `|λ|` for `split_square_coefficients`; the pair enumeration grows
/// quickly past desk scale.
pub const SPLIT_SQUARE_CAP: u32 = 8;

/// Which half of the square of a GL-module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SquareSign {
    /// Symmetric square.
    Plus,
    /// Exterior square.
    Minus,
}

/// Memo store for Kostka and Littlewood-Richardson coefficients.
///
/// Kostka keys are canonicalized by sorting the content descending, which is
/// sound by content-permutation invariance; `kostka_raw` is the uncached,
/// order-respecting computation used to test exactly that invariance.
#[derive(Default)]
pub struct CoefficientCache {
    kostka: RwLock<HashMap<(Partition, Partition), BigInt>>,
    lr: RwLock<HashMap<(Partition, Partition, Partition), BigInt>>,
}

impl CoefficientCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Dumps every memoized coefficient as `(key, value)` text pairs, for
    /// the optional persistent cache file. Keys look like
    /// `K|[2,1]|[1,1,1]` and `LR|[2,1]|[1,1]|[1]`.
    pub fn export(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for ((shape, content), v) in self.kostka.read().unwrap().iter() {
            out.push((format!("K|{shape}|{content}"), v.to_string()));
        }
        for ((lam, mu, nu), v) in self.lr.read().unwrap().iter() {
            out.push((format!("LR|{lam}|{mu}|{nu}"), v.to_string()));
        }
        out.sort();
        out
    }

    /// Loads one exported line back; unknown keys are rejected.
    pub fn import(&self, key: &str, value: &str) -> Result<()> {
        let value: BigInt = value
            .parse()
            .map_err(|_| Error::Parse(format!("bad cached value {value:?}")))?;
        let parts: Vec<&str> = key.split('|').collect();
        match parts.as_slice() {
            ["K", shape, content] => {
                let shape: Partition = shape.parse()?;
                let content: Partition = content.parse()?;
                self.kostka.write().unwrap().insert((shape, content), value);
                Ok(())
            }
            ["LR", lam, mu, nu] => {
                let lam: Partition = lam.parse()?;
                let mu: Partition = mu.parse()?;
                let nu: Partition = nu.parse()?;
                self.lr.write().unwrap().insert((lam, mu, nu), value);
                Ok(())
            }
            _ => Err(Error::Parse(format!("bad cache key {key:?}"))),
        }
    }

    /// `K_{shape,content}`: the number of semistandard tableaux of the given
    /// shape and content. Zero when sizes differ or no filling exists.
    pub fn kostka(&self, shape: &Partition, content: &Composition) -> BigInt {
        let key = (shape.clone(), content.sorted());
        if let Some(v) = self.kostka.read().unwrap().get(&key) {
            return v.clone();
        }
        let v = kostka_raw(shape, &key.1.to_composition());
        self.kostka.write().unwrap().insert(key, v.clone());
        v
    }

    /// `c^lam_{mu,nu}`, memoized.
    pub fn lr(&self, lam: &Partition, mu: &Partition, nu: &Partition) -> BigInt {
        let key = (lam.clone(), mu.clone(), nu.clone());
        if let Some(v) = self.lr.read().unwrap().get(&key) {
            return v.clone();
        }
        let v = lr_raw(lam, mu, nu);
        self.lr.write().unwrap().insert(key, v.clone());
        v
    }

    /// Coefficients of the symmetric (plus) or exterior (minus) square of the
    /// GL-module `V^lam` in the irreducible basis.
    ///
    /// Computed from first principles: enumerate unordered pairs of
    /// semistandard tableaux of shape `lam` (diagonal pairs count toward the
    /// symmetric square only), read off the weight multiplicity function,
    /// then peel highest weights using unitriangularity of the Kostka matrix.
    pub fn split_square_coefficients(
        &self,
        lam: &Partition,
        sign: SquareSign,
    ) -> Result<BTreeMap<Partition, BigInt>> {
        if lam.size() > SPLIT_SQUARE_CAP {
            return Err(Error::CapExceeded(format!(
                "split_square_coefficients({lam}) exceeds cap {SPLIT_SQUARE_CAP}"
            )));
        }
        if lam.is_empty() {
            // The square of the trivial module.
            let mut out = BTreeMap::new();
            if sign == SquareSign::Plus {
                out.insert(Partition::empty(), BigInt::one());
            }
            return Ok(out);
        }
        let letters = (2 * lam.rows()).max(1);
        let tableaux = enumerate_ssyt_weights(lam, letters);

        // Weight multiplicities of S^2 / Λ^2 at every weight vector.
        let mut sym: HashMap<Vec<u32>, BigInt> = HashMap::new();
        let mut alt: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (i, wi) in tableaux.iter().enumerate() {
            for (j, wj) in tableaux.iter().enumerate().skip(i) {
                let sum: Vec<u32> = wi.iter().zip(wj).map(|(a, b)| a + b).collect();
                *sym.entry(sum.clone()).or_default() += 1;
                if i != j {
                    *alt.entry(sum).or_default() += 1;
                }
            }
        }
        let weight_mult = match sign {
            SquareSign::Plus => sym,
            SquareSign::Minus => alt,
        };

        // Peel off highest weights: the lex-largest weight with nonzero
        // residual multiplicity is dominance-maximal, so its residual is the
        // coefficient of the corresponding irreducible.
        let targets: Vec<Partition> = partitions_of(2 * lam.size())?
            .into_iter()
            .filter(|nu| nu.rows() <= letters)
            .collect();
        let mut residual: BTreeMap<Partition, BigInt> = targets
            .iter()
            .map(|gamma| {
                let mut v: Vec<u32> = gamma.parts().to_vec();
                v.resize(letters, 0);
                (
                    gamma.clone(),
                    weight_mult.get(&v).cloned().unwrap_or_default(),
                )
            })
            .collect();
        let mut coeffs = BTreeMap::new();
        for nu in &targets {
            let c = residual.get(nu).cloned().unwrap_or_default();
            if c.is_zero() {
                continue;
            }
            if c < BigInt::zero() {
                return Err(Error::Inconsistent(format!(
                    "negative residual while peeling square of {lam} at {nu}"
                )));
            }
            for gamma in &targets {
                let k = self.kostka(nu, &gamma.to_composition());
                if !k.is_zero() {
                    *residual.get_mut(gamma).unwrap() -= &c * &k;
                }
            }
            coeffs.insert(nu.clone(), c);
        }
        if residual.values().any(|v| !v.is_zero()) {
            return Err(Error::Inconsistent(format!(
                "weight multiplicities of the square of {lam} did not resolve"
            )));
        }
        Ok(coeffs)
    }
}

/// Uncached Kostka number, processing the content in the order given.
///
/// Dynamic programming by horizontal strips: after reading the first `j`
/// content entries the state is the sub-shape filled by letters `1..=j`, and
/// each step extends it by a horizontal strip of the next entry's size.
pub fn kostka_raw(shape: &Partition, content: &Composition) -> BigInt {
    if content.size() != shape.size() {
        return BigInt::zero();
    }
    if shape.is_empty() {
        return BigInt::one();
    }
    let mut states: HashMap<Partition, BigInt> = HashMap::new();
    states.insert(Partition::empty(), BigInt::one());
    for &c in content.entries() {
        if c == 0 {
            continue;
        }
        let mut next: HashMap<Partition, BigInt> = HashMap::new();
        for (mu, count) in &states {
            for nu in horizontal_strip_extensions(mu, shape, c) {
                *next.entry(nu).or_default() += count;
            }
        }
        states = next;
        if states.is_empty() {
            return BigInt::zero();
        }
    }
    states.remove(shape).unwrap_or_default()
}

/// All `nu` with `mu ⊆ nu ⊆ bound` such that `nu/mu` is a horizontal strip
/// of `size` boxes (at most one added box per column).
fn horizontal_strip_extensions(mu: &Partition, bound: &Partition, size: u32) -> Vec<Partition> {
    let rows = bound.rows();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(rows);
    fn rec(
        row: usize,
        rows: usize,
        remaining: u32,
        mu: &Partition,
        bound: &Partition,
        current: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if row == rows {
            if remaining == 0 {
                let parts: Vec<u32> = current.iter().copied().take_while(|&p| p > 0).collect();
                out.push(Partition::new(parts).expect("strip extension is a partition"));
            }
            return;
        }
        // Row `row` may grow from mu_row up to bound_row, but to keep the
        // strip horizontal it must not pass the previous row's *old* length.
        let lo = mu.part(row);
        let hi = bound
            .part(row)
            .min(if row == 0 { u32::MAX } else { mu.part(row - 1) });
        // Also keep weakly decreasing rows against the previous new length.
        let hi = if row == 0 {
            hi
        } else {
            hi.min(current[row - 1])
        };
        if lo > hi {
            return;
        }
        for newlen in lo..=hi.min(lo + remaining) {
            current.push(newlen);
            rec(row + 1, rows, remaining - (newlen - lo), mu, bound, current, out);
            current.pop();
        }
    }
    rec(0, rows, size, mu, bound, &mut current, &mut out);
    out
}

/// Uncached Littlewood-Richardson coefficient `c^lam_{mu,nu}`.
///
/// Depth-first fill of the skew shape `lam/mu` in reverse reading order
/// (each row right to left, rows top to bottom) with content `nu`,
/// maintaining semistandardness and the lattice-word condition incrementally.
pub fn lr_raw(lam: &Partition, mu: &Partition, nu: &Partition) -> BigInt {
    if !lam.contains(mu) || lam.size() != mu.size() + nu.size() {
        return BigInt::zero();
    }
    let skew = SkewShape::new(lam.clone(), mu.clone()).expect("containment checked");
    if skew.size() == 0 {
        return if nu.is_empty() { BigInt::one() } else { BigInt::zero() };
    }
    // Boxes in reverse reading order.
    let mut boxes = Vec::new();
    for r in 0..lam.rows() {
        for c in (mu.part(r)..lam.part(r)).rev() {
            boxes.push((r, c as usize));
        }
    }
    let letters = nu.rows();
    let mut grid: HashMap<(usize, usize), u32> = HashMap::new();
    let mut counts = vec![0u32; letters];
    let mut total = BigInt::zero();

    fn rec(
        idx: usize,
        boxes: &[(usize, usize)],
        lam: &Partition,
        mu: &Partition,
        nu: &Partition,
        grid: &mut HashMap<(usize, usize), u32>,
        counts: &mut Vec<u32>,
        total: &mut BigInt,
    ) {
        if idx == boxes.len() {
            *total += 1;
            return;
        }
        let (r, c) = boxes[idx];
        // Row bound: weakly increasing to the right.
        let row_max = grid
            .get(&(r, c + 1))
            .copied()
            .unwrap_or(nu.rows() as u32);
        // Column bound: strictly increasing downward.
        let col_min = if r > 0 && (c as u32) >= mu.part(r - 1) && (c as u32) < lam.part(r - 1) {
            grid[&(r - 1, c)] + 1
        } else {
            1
        };
        for e in col_min..=row_max {
            let ei = (e - 1) as usize;
            if counts[ei] >= nu.part(ei) {
                continue;
            }
            // Lattice condition on the reverse reading word.
            if e > 1 && counts[ei - 1] <= counts[ei] {
                continue;
            }
            counts[ei] += 1;
            grid.insert((r, c), e);
            rec(idx + 1, boxes, lam, mu, nu, grid, counts, total);
            grid.remove(&(r, c));
            counts[ei] -= 1;
        }
    }
    rec(0, &boxes, lam, mu, nu, &mut grid, &mut counts, &mut total);
    total
}

/// Weight vectors of all semistandard tableaux of the given shape with
/// entries in `1..=letters`.
fn enumerate_ssyt_weights(shape: &Partition, letters: usize) -> Vec<Vec<u32>> {
    let rows = shape.rows();
    let mut filling: Vec<Vec<u32>> = (0..rows)
        .map(|r| vec![0; shape.part(r) as usize])
        .collect();
    let mut out = Vec::new();
    fn rec(
        r: usize,
        c: usize,
        shape: &Partition,
        letters: usize,
        filling: &mut Vec<Vec<u32>>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if r == shape.rows() {
            let mut weight = vec![0u32; letters];
            for row in filling.iter() {
                for &e in row {
                    weight[(e - 1) as usize] += 1;
                }
            }
            out.push(weight);
            return;
        }
        let (nr, nc) = if c + 1 < shape.part(r) as usize {
            (r, c + 1)
        } else {
            (r + 1, 0)
        };
        let lo = {
            let left = if c > 0 { filling[r][c - 1] } else { 1 };
            let up = if r > 0 && c < shape.part(r - 1) as usize {
                filling[r - 1][c] + 1
            } else {
                1
            };
            left.max(up)
        };
        for e in lo..=letters as u32 {
            filling[r][c] = e;
            rec(nr, nc, shape, letters, filling, out);
        }
        filling[r][c] = 0;
    }
    if rows == 0 {
        out.push(vec![0; letters]);
        return out;
    }
    rec(0, 0, shape, letters, &mut filling, &mut out);
    out
}
