//! Irreducible labels, sign multiplicities, branching and recovery for the
//! even-signed permutation group, the Weyl group of type D.
//!
//! Irreducibles are unordered pairs `V_{{λ,μ}}` (with `V_{{λ,λ}}` splitting
//! into two halves `V^±` when `n` is even) and parabolic subgroups come in
//! three kinds relative to the fork at the end of the diagram: untwisted
//! `S`-blocks (`Plus`), `S`-blocks whose last factor runs through `t_n`
//! instead of `t_{n-1}` (`Minus`), and blocks ending in a `D` factor (`Bar`).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::partitions::{bipartitions_of, partitions_of, Composition, Partition};
use crate::tableaux::{CoefficientCache, SquareSign};

/// A parabolic subgroup of `D_n` up to the standard labeling, with parts
/// sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParabolicD {
    /// `P^+_{(p_1,...,p_k),∅}`: untwisted `S`-blocks.
    Plus(Partition),
    /// `P^-_{(p_1,...,p_k),∅}`: the last block twisted through `t_n`.
    /// The smallest part is at least 2; a twisted block of size 1 is the
    /// untwisted label.
    Minus(Partition),
    /// `P̄_{(p_1,...,p_{k-1}),(d)}`: `S`-blocks plus a trailing `D_d`, `d >= 2`.
    Bar(Partition, u32),
}

impl ParabolicD {
    /// Canonicalizes: sorts parts, `Minus` with a part of size 1 becomes
    /// `Plus`, a `Bar` block of size 1 is absorbed as an `S_1` factor and a
    /// `Bar` block of size 0 drops.
    pub fn new_plus(parts: &Composition) -> Result<Self> {
        Ok(ParabolicD::Plus(positive_sorted(parts)?))
    }

    pub fn new_minus(parts: &Composition) -> Result<Self> {
        let sorted = positive_sorted(parts)?;
        if sorted.is_empty() || sorted.parts().last() == Some(&1) {
            Ok(ParabolicD::Plus(sorted))
        } else {
            Ok(ParabolicD::Minus(sorted))
        }
    }

    pub fn new_bar(parts: &Composition, d: u32) -> Result<Self> {
        let sorted = positive_sorted(parts)?;
        match d {
            0 => Ok(ParabolicD::Plus(sorted)),
            1 => {
                let mut with_one = sorted.parts().to_vec();
                with_one.push(1);
                Ok(ParabolicD::Plus(Partition::from_unsorted(with_one)))
            }
            _ => Ok(ParabolicD::Bar(sorted, d)),
        }
    }

    pub fn rank(&self) -> u32 {
        match self {
            ParabolicD::Plus(s) | ParabolicD::Minus(s) => s.size(),
            ParabolicD::Bar(s, d) => s.size() + d,
        }
    }
}

fn positive_sorted(parts: &Composition) -> Result<Partition> {
    if !parts.all_positive() {
        return Err(Error::InvalidLabel(format!(
            "parabolic parts must be positive: {parts}"
        )));
    }
    Ok(parts.sorted())
}

impl fmt::Display for ParabolicD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParabolicD::Plus(s) => write!(f, "+{}", s.to_composition()),
            ParabolicD::Minus(s) => write!(f, "-{}", s.to_composition()),
            ParabolicD::Bar(s, d) => write!(f, "{}|D({d})", s.to_composition()),
        }
    }
}

impl std::str::FromStr for ParabolicD {
    type Err = Error;

    /// Parses `+(2,1)`, `-(2,2)` and `(1)|D(2)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('+') {
            return ParabolicD::new_plus(&rest.parse()?);
        }
        if let Some(rest) = s.strip_prefix('-') {
            return ParabolicD::new_minus(&rest.parse()?);
        }
        if let Some((a, d)) = s.split_once("|D") {
            let d = d
                .strip_prefix('(')
                .and_then(|x| x.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("bad D block in {s:?}")))?;
            let d: u32 = d.parse().map_err(|_| Error::Parse(format!("bad D block in {s:?}")))?;
            return ParabolicD::new_bar(&a.parse()?, d);
        }
        Err(Error::Parse(format!(
            "parabolic must look like +(2,1), -(2,2) or (1)|D(2), got {s:?}"
        )))
    }
}

/// An irreducible (or, for equal pairs, reducible) representation label of
/// `D_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IrrepD {
    /// `V_{{λ,μ}}`; canonical order puts the lex-smaller dual first.
    /// Irreducible exactly when the partitions differ.
    NonSplit(Partition, Partition),
    /// `V^±_{{λ,λ}}` with `n = 2|λ|`; `true` is the plus half.
    Split(Partition, bool),
}

impl IrrepD {
    pub fn pair(a: Partition, b: Partition) -> Self {
        if a.conjugate().lex_compare(&b.conjugate()).is_le() {
            IrrepD::NonSplit(a, b)
        } else {
            IrrepD::NonSplit(b, a)
        }
    }

    pub fn rank(&self) -> u32 {
        match self {
            IrrepD::NonSplit(a, b) => a.size() + b.size(),
            IrrepD::Split(l, _) => 2 * l.size(),
        }
    }

    pub fn is_irreducible(&self) -> bool {
        match self {
            IrrepD::NonSplit(a, b) => a != b,
            IrrepD::Split(_, _) => true,
        }
    }

    /// The sign representation `V_{{[1^n],∅}}`.
    pub fn sign(n: u32) -> Self {
        IrrepD::pair(
            Partition::new(vec![1; n as usize]).expect("column shape"),
            Partition::empty(),
        )
    }

    /// The trivial representation `V_{{[n],∅}}`.
    pub fn trivial(n: u32) -> Self {
        IrrepD::pair(
            Partition::new(if n == 0 { vec![] } else { vec![n] }).expect("row shape"),
            Partition::empty(),
        )
    }
}

impl fmt::Display for IrrepD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepD::NonSplit(a, b) => write!(f, "{{{a},{b}}}"),
            IrrepD::Split(l, plus) => write!(f, "{l}{}", if *plus { "+" } else { "-" }),
        }
    }
}

impl std::str::FromStr for IrrepD {
    type Err = Error;

    /// Parses `{[2],[1]}` (unordered pair) and `[1,1]+` / `[1,1]-` (split).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix('{').and_then(|x| x.strip_suffix('}')) {
            let (a, b) = body
                .split_once("],")
                .ok_or_else(|| Error::Parse(format!("pair must look like {{[2],[1]}}, got {s:?}")))?;
            let first: Partition = format!("{a}]").parse()?;
            let second: Partition = b.parse()?;
            return Ok(IrrepD::pair(first, second));
        }
        if let Some(body) = s.strip_suffix('+') {
            return Ok(IrrepD::Split(body.parse()?, true));
        }
        if let Some(body) = s.strip_suffix('-') {
            return Ok(IrrepD::Split(body.parse()?, false));
        }
        Err(Error::Parse(format!(
            "irreducible must look like {{[2],[1]}} or [1,1]+, got {s:?}"
        )))
    }
}

/// SignMult vector of a `D_n`-representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignSignatureD {
    rank: u32,
    mult: BTreeMap<ParabolicD, BigInt>,
}

impl SignSignatureD {
    pub fn from_map(rank: u32, mult: BTreeMap<ParabolicD, BigInt>) -> Result<Self> {
        for (key, value) in &mult {
            if key.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank as usize,
                    got: key.rank() as usize,
                });
            }
            if value < &BigInt::zero() {
                return Err(Error::Inconsistent(format!(
                    "negative multiplicity at {key}"
                )));
            }
        }
        Ok(SignSignatureD { rank, mult })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn get(&self, parabolic: &ParabolicD) -> BigInt {
        self.mult.get(parabolic).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = &ParabolicD> {
        self.mult
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, _)| k)
    }

    pub fn entries(&self) -> Result<Vec<(ParabolicD, BigInt)>> {
        Ok(enumerate_parabolics_d(self.rank)?
            .into_iter()
            .map(|p| {
                let v = self.get(&p);
                (p, v)
            })
            .collect())
    }

    pub fn add(&self, other: &SignSignatureD) -> Result<SignSignatureD> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank as usize,
                got: other.rank as usize,
            });
        }
        let mut mult = self.mult.clone();
        for (k, v) in &other.mult {
            *mult.entry(k.clone()).or_default() += v;
        }
        Ok(SignSignatureD {
            rank: self.rank,
            mult,
        })
    }
}

/// Canonical parabolic labels of `D_n`: all `Plus`, the `Minus` labels with
/// every part at least 2, and the `Bar` labels with `d >= 2`, in a fixed
/// deterministic order.
pub fn enumerate_parabolics_d(n: u32) -> Result<Vec<ParabolicD>> {
    let mut out = Vec::new();
    for s in partitions_of(n)? {
        out.push(ParabolicD::Plus(s));
    }
    for s in partitions_of(n)? {
        if s.parts().last().is_none_or(|&p| p >= 2) && !s.is_empty() {
            out.push(ParabolicD::Minus(s));
        }
    }
    for d in (2..=n).rev() {
        for s in partitions_of(n - d)? {
            out.push(ParabolicD::Bar(s, d));
        }
    }
    Ok(out)
}

/// All irreducible labels of `D_n`.
pub fn irreps_d(n: u32) -> Result<Vec<IrrepD>> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (a, b) in bipartitions_of(n)? {
        if a == b {
            continue;
        }
        let v = IrrepD::pair(a, b);
        if seen.insert(v.clone()) {
            out.push(v);
        }
    }
    if n.is_multiple_of(2) {
        for l in partitions_of(n / 2)? {
            out.push(IrrepD::Split(l.clone(), true));
            out.push(IrrepD::Split(l, false));
        }
    }
    Ok(out)
}

/// The tuple of block sizes a parabolic feeds into the splitting sums.
fn parts_tuple(p: &ParabolicD) -> (Vec<u32>, bool) {
    // Returns the full tuple and whether the last position is a D block
    // (whose content must go entirely to one side).
    match p {
        ParabolicD::Plus(s) | ParabolicD::Minus(s) => (s.parts().to_vec(), false),
        ParabolicD::Bar(s, d) => {
            let mut t = s.parts().to_vec();
            t.push(*d);
            (t, true)
        }
    }
}

/// `Σ K_{x,α} K_{y,β}` over splittings `α+β` of `tuple`; with `last_joint`
/// the final position goes entirely to one side; with `diagonal_only` keeps
/// only `α = β`, with `off_diagonal` only `α != β` (halved by the caller).
fn splitting_sum(
    cache: &CoefficientCache,
    x: &Partition,
    y: &Partition,
    tuple: &[u32],
    last_joint: bool,
    filter: SplitFilter,
) -> BigInt {
    let mut total = BigInt::zero();
    let mut alpha = vec![0u32; tuple.len()];
    loop {
        let valid_last = !last_joint
            || tuple.is_empty()
            || alpha[tuple.len() - 1] == 0
            || alpha[tuple.len() - 1] == tuple[tuple.len() - 1];
        let beta: Vec<u32> = tuple.iter().zip(&alpha).map(|(&t, &a)| t - a).collect();
        let keep = match filter {
            SplitFilter::All => true,
            SplitFilter::Diagonal => alpha == beta,
            SplitFilter::OffDiagonal => alpha != beta,
        };
        if valid_last && keep {
            let k1 = cache.kostka(x, &Composition::new(alpha.clone()));
            if !k1.is_zero() {
                let k2 = cache.kostka(y, &Composition::new(beta));
                total += k1 * k2;
            }
        }
        let mut i = 0;
        loop {
            if i == alpha.len() {
                return total;
            }
            if alpha[i] < tuple[i] {
                alpha[i] += 1;
                break;
            }
            alpha[i] = 0;
            i += 1;
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SplitFilter {
    All,
    Diagonal,
    OffDiagonal,
}

/// Formula value for the (possibly reducible) pair module `V_{{lam,mu}}`:
/// the plain splitting sum, with the `D`-block content undivided.
pub fn sign_mult_d_pair(
    cache: &CoefficientCache,
    lam: &Partition,
    mu: &Partition,
    p: &ParabolicD,
) -> Result<BigInt> {
    if lam.size() + mu.size() != p.rank() {
        return Err(Error::RankMismatch {
            expected: p.rank() as usize,
            got: (lam.size() + mu.size()) as usize,
        });
    }
    let (tuple, last_joint) = parts_tuple(p);
    Ok(splitting_sum(
        cache,
        &lam.conjugate(),
        &mu.conjugate(),
        &tuple,
        last_joint,
        SplitFilter::All,
    ))
}

/// Multiplicity of the sign representation of `p` in the irreducible `v`.
pub fn sign_mult_d(cache: &CoefficientCache, v: &IrrepD, p: &ParabolicD) -> Result<BigInt> {
    if v.rank() != p.rank() {
        return Err(Error::RankMismatch {
            expected: p.rank() as usize,
            got: v.rank() as usize,
        });
    }
    match v {
        IrrepD::NonSplit(a, b) => {
            if a == b {
                return Err(Error::InvalidLabel(format!(
                    "V_{{{a},{b}}} is reducible; use the split labels or sign_mult_d_pair"
                )));
            }
            sign_mult_d_pair(cache, a, b, p)
        }
        IrrepD::Split(l, plus) => {
            let dual = l.conjugate();
            let (tuple, last_joint) = parts_tuple(p);
            let off = splitting_sum(cache, &dual, &dual, &tuple, last_joint, SplitFilter::OffDiagonal);
            let two: BigInt = BigInt::from(2);
            debug_assert!((&off % &two).is_zero());
            let half = off / two;
            // The diagonal term belongs to the matching sign: to `+` on
            // untwisted blocks, to `-` on the twisted ones, never to a Bar.
            let takes_diag = match p {
                ParabolicD::Plus(_) => *plus,
                ParabolicD::Minus(_) => !*plus,
                ParabolicD::Bar(_, _) => false,
            };
            if takes_diag {
                let diag =
                    splitting_sum(cache, &dual, &dual, &tuple, last_joint, SplitFilter::Diagonal);
                Ok(half + diag)
            } else {
                Ok(half)
            }
        }
    }
}

/// The full signMult vector over the canonical parabolics of `D_n`.
pub fn sign_signature_d(cache: &CoefficientCache, v: &IrrepD) -> Result<SignSignatureD> {
    let mut mult = BTreeMap::new();
    for p in enumerate_parabolics_d(v.rank())? {
        let m = sign_mult_d(cache, v, &p)?;
        mult.insert(p, m);
    }
    Ok(SignSignatureD {
        rank: v.rank(),
        mult,
    })
}

fn multiset_contains(sup: &Partition, sub: &[u32]) -> bool {
    let mut avail: BTreeMap<u32, i64> = BTreeMap::new();
    for &x in sup.parts() {
        *avail.entry(x).or_default() += 1;
    }
    for &x in sub {
        let e = avail.entry(x).or_default();
        *e -= 1;
        if *e < 0 {
            return false;
        }
    }
    true
}

/// Recovers the irreducible label from a sign signature (membership queries
/// only): greedy lex-max `S`-probes through the untwisted and twisted
/// labels decide split-versus-pair and the split sign; the `Bar` probes with
/// the f/d recursion recover the two dual partitions in the pair case.
pub fn recover_d(sig: &SignSignatureD) -> Result<IrrepD> {
    let n = sig.rank();
    let support: Vec<&ParabolicD> = sig.support().collect();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let plus_supported = |s: &Partition| -> bool {
        support
            .iter()
            .any(|p| matches!(p, ParabolicD::Plus(t) if t == s))
    };
    let minus_supported = |s: &Partition| -> bool {
        // A twisted label with a block of size 1 is the untwisted label.
        if s.parts().last() == Some(&1) {
            plus_supported(s)
        } else {
            support
                .iter()
                .any(|p| matches!(p, ParabolicD::Minus(t) if t == s))
        }
    };
    // Bar membership with the full A-multiset free beyond a containment
    // constraint; a D block of size 1 degenerates to an S_1 factor.
    let bar_probe_max_c = |prefix: &[u32]| -> u32 {
        let mut best = 0;
        for p in &support {
            match p {
                ParabolicD::Bar(t, d) if multiset_contains(t, prefix) => best = best.max(*d),
                ParabolicD::Plus(t) => {
                    let mut with_one = prefix.to_vec();
                    with_one.push(1);
                    if multiset_contains(t, &with_one) {
                        best = best.max(1);
                    }
                }
                _ => {}
            }
        }
        best
    };
    let bar_probe_max_part = |prefix: &[u32], d: u32| -> u32 {
        let mut best = 0;
        for p in &support {
            match p {
                ParabolicD::Bar(t, dd) if *dd == d => {
                    // Largest extra part available beyond the prefix.
                    let mut avail: BTreeMap<u32, i64> = BTreeMap::new();
                    for &x in t.parts() {
                        *avail.entry(x).or_default() += 1;
                    }
                    let mut ok = true;
                    for &x in prefix {
                        let e = avail.entry(x).or_default();
                        *e -= 1;
                        if *e < 0 {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        for (&x, &cnt) in avail.iter().rev() {
                            if cnt > 0 {
                                best = best.max(x);
                                break;
                            }
                        }
                    }
                }
                ParabolicD::Plus(t) if d == 1 => {
                    let mut with_one = prefix.to_vec();
                    with_one.push(1);
                    let mut avail: BTreeMap<u32, i64> = BTreeMap::new();
                    for &x in t.parts() {
                        *avail.entry(x).or_default() += 1;
                    }
                    let mut ok = true;
                    for &x in &with_one {
                        let e = avail.entry(x).or_default();
                        *e -= 1;
                        if *e < 0 {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        for (&x, &cnt) in avail.iter().rev() {
                            if cnt > 0 {
                                best = best.max(x);
                                break;
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        best
    };

    // Steps 1-2: lex-max untwisted and twisted pure-S labels.
    let alpha = partitions_of(n)?
        .into_iter()
        .find(|s| plus_supported(s))
        .ok_or_else(|| Error::Inconsistent("no untwisted S-label in support".into()))?;
    let beta = partitions_of(n)?
        .into_iter()
        .find(|s| minus_supported(s))
        .ok_or_else(|| Error::Inconsistent("no twisted S-label in support".into()))?;

    // Step 3: unequal maxima identify a split representation.
    if alpha != beta {
        let (winner, plus) = if alpha.lex_compare(&beta).is_gt() {
            (alpha, true)
        } else {
            (beta, false)
        };
        if winner.parts().iter().any(|&p| p % 2 != 0) {
            return Err(Error::Inconsistent(format!(
                "split probe {winner} has odd entries"
            )));
        }
        let half = Partition::new(winner.parts().iter().map(|&p| p / 2).collect())
            .expect("halving keeps monotonicity");
        return Ok(IrrepD::Split(half.conjugate(), plus));
    }

    // Step 4: find the first index where the two dual rows differ.
    let k = alpha.rows();
    let mut d_vals = vec![0u32; k];
    let mut split_index = None;
    for i in 0..k {
        let d = bar_probe_max_c(&alpha.parts()[..i]);
        d_vals[i] = d;
        if 2 * d > alpha.part(i) {
            split_index = Some(i);
            break;
        }
        if 2 * d < alpha.part(i) {
            return Err(Error::Inconsistent(format!(
                "Bar probe at row {i} returned {d}, below half of {}",
                alpha.part(i)
            )));
        }
    }
    let Some(s) = split_index else {
        return Err(Error::Inconsistent(
            "signature looks like a reducible equal pair".into(),
        ));
    };

    // Step 5: the f/d recursion fills in the remaining rows of the larger
    // dual partition.
    let d_s = d_vals[s];
    let mut prefix: Vec<u32> = alpha.parts()[..s].to_vec();
    for i in s + 1..k {
        let f = bar_probe_max_part(&prefix, d_s);
        let prev = d_vals[i - 1];
        let sum = f + prev;
        if sum < alpha.part(i - 1) {
            return Err(Error::Inconsistent(format!(
                "f/d recursion underflow at row {i}"
            )));
        }
        d_vals[i] = sum - alpha.part(i - 1);
        prefix.push(f);
    }

    let delta = Partition::new(d_vals.clone())
        .map_err(|_| Error::Inconsistent(format!("recovered rows {d_vals:?} not monotone")))?;
    let eps = alpha.entrywise_sub(&delta)?;
    Ok(IrrepD::pair(delta.conjugate(), eps.conjugate()))
}

/// Branching of the pair module `V_{{λ,μ}}` (equal pair allowed) to
/// `D_k x D_{n-k}`: unordered factor pairs with aggregated coefficients
/// `c^λ_{ν,ξ} c^μ_{σ,ζ}`.
pub fn branch_d_nonsplit(
    cache: &CoefficientCache,
    lam: &Partition,
    mu: &Partition,
    k: u32,
) -> Result<BTreeMap<(IrrepD, IrrepD), BigInt>> {
    let n = lam.size() + mu.size();
    if k > n {
        return Err(Error::SizeMismatch(format!("k = {k} out of range 0..={n}")));
    }
    let mut out: BTreeMap<(IrrepD, IrrepD), BigInt> = BTreeMap::new();
    for i in 0..=k {
        for nu in partitions_of(i)? {
            for sigma in partitions_of(k - i)? {
                for j in 0..=(n - k) {
                    for xi in partitions_of(j)? {
                        let c1 = cache.lr(lam, &nu, &xi);
                        if c1.is_zero() {
                            continue;
                        }
                        for zeta in partitions_of(n - k - j)? {
                            let c2 = cache.lr(mu, &sigma, &zeta);
                            if c2.is_zero() {
                                continue;
                            }
                            let left = IrrepD::pair(nu.clone(), sigma.clone());
                            let right = IrrepD::pair(xi.clone(), zeta);
                            *out.entry((left, right)).or_default() += &c1 * &c2;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Branching of a split module `V^±_{{λ,λ}}` to `D_k x D_{n-k}`.
///
/// For odd `k` the unordered pair terms with `ν > σ` appear once each; for
/// even `k` the pair terms keep `ν >= σ, (ν,ξ) != (σ,ζ)` and split ⊗ split
/// terms carry the binomial coefficients, with the parity of minus signs
/// among the three labels picking the larger binomial.
pub fn branch_d_split(
    cache: &CoefficientCache,
    lam: &Partition,
    plus: bool,
    k: u32,
) -> Result<BTreeMap<(IrrepD, IrrepD), BigInt>> {
    let n = 2 * lam.size();
    if k > n {
        return Err(Error::SizeMismatch(format!("k = {k} out of range 0..={n}")));
    }
    let mut out: BTreeMap<(IrrepD, IrrepD), BigInt> = BTreeMap::new();
    for i in 0..=k {
        for nu in partitions_of(i)? {
            for sigma in partitions_of(k - i)? {
                match nu.lex_compare(&sigma) {
                    std::cmp::Ordering::Less => continue,
                    std::cmp::Ordering::Equal if !k.is_multiple_of(2) => continue,
                    _ => {}
                }
                for j in 0..=(n - k) {
                    for xi in partitions_of(j)? {
                        let c1 = cache.lr(lam, &nu, &xi);
                        if c1.is_zero() {
                            continue;
                        }
                        for zeta in partitions_of(n - k - j)? {
                            if nu == sigma && xi == zeta {
                                continue;
                            }
                            let c2 = cache.lr(lam, &sigma, &zeta);
                            if c2.is_zero() {
                                continue;
                            }
                            let left = IrrepD::pair(nu.clone(), sigma.clone());
                            let right = IrrepD::pair(xi.clone(), zeta);
                            *out.entry((left, right)).or_default() += &c1 * &c2;
                        }
                    }
                }
            }
        }
    }
    if k.is_multiple_of(2) {
        // Split ⊗ split terms. An empty factor is the trivial module of the
        // trivial group D_0: it does not split, so only its plus label
        // exists and carries the honest pair label.
        for nu in partitions_of(k / 2)? {
            for xi in partitions_of((n - k) / 2)? {
                let c = cache.lr(lam, &nu, &xi);
                if c.is_zero() {
                    continue;
                }
                for s1 in [true, false] {
                    if nu.is_empty() && !s1 {
                        continue;
                    }
                    for s2 in [true, false] {
                        if xi.is_empty() && !s2 {
                            continue;
                        }
                        let minus_count = [plus, s1, s2].iter().filter(|&&b| !b).count();
                        let d = if minus_count % 2 == 0 {
                            // binom(c+1, 2)
                            (&c + 1u32) * &c / 2u32
                        } else {
                            // binom(c, 2)
                            (&c - 1u32) * &c / 2u32
                        };
                        if d.is_zero() {
                            continue;
                        }
                        let left = split_or_trivial(&nu, s1);
                        let right = split_or_trivial(&xi, s2);
                        *out.entry((left, right)).or_default() += d;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn split_or_trivial(lam: &Partition, plus: bool) -> IrrepD {
    if lam.is_empty() {
        IrrepD::pair(Partition::empty(), Partition::empty())
    } else {
        IrrepD::Split(lam.clone(), plus)
    }
}

/// Restriction of `V^±_{{λ,λ}}` to `S_n`: the coefficients of the symmetric
/// or exterior square of the GL-module `V^λ`.
pub fn branch_d_split_to_sn(
    cache: &CoefficientCache,
    lam: &Partition,
    plus: bool,
) -> Result<BTreeMap<Partition, BigInt>> {
    cache.split_square_coefficients(
        lam,
        if plus { SquareSign::Plus } else { SquareSign::Minus },
    )
}

/// `dim` of a label: a full pair module, or half of `V_{{λ,λ}}` for splits.
pub fn dim_d(v: &IrrepD) -> BigInt {
    match v {
        IrrepD::NonSplit(a, b) => crate::type_b::dim_b(&crate::type_b::IrrepB::new(
            a.clone(),
            b.clone(),
        )),
        IrrepD::Split(l, _) => {
            crate::type_b::dim_b(&crate::type_b::IrrepB::new(l.clone(), l.clone()))
                / BigInt::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn plus(parts: &[u32]) -> ParabolicD {
        ParabolicD::Plus(p(parts))
    }

    fn minus(parts: &[u32]) -> ParabolicD {
        ParabolicD::Minus(p(parts))
    }

    #[test]
    fn parabolic_normalization() {
        let c = Composition::new(vec![1, 2]);
        assert_eq!(ParabolicD::new_minus(&c).unwrap(), plus(&[2, 1]));
        assert_eq!(
            ParabolicD::new_minus(&Composition::new(vec![2, 2])).unwrap(),
            minus(&[2, 2])
        );
        assert_eq!(
            ParabolicD::new_bar(&Composition::new(vec![2]), 1).unwrap(),
            plus(&[2, 1])
        );
        assert_eq!(
            ParabolicD::new_bar(&Composition::new(vec![1]), 2).unwrap(),
            ParabolicD::Bar(p(&[1]), 2)
        );
    }

    #[test]
    fn enumerate_parabolics_d3() {
        // Plus: 3 partitions; Minus: only (3); Bar: D(2)+S_1 and D(3).
        let list = enumerate_parabolics_d(3).unwrap();
        assert_eq!(
            list,
            vec![
                plus(&[3]),
                plus(&[2, 1]),
                plus(&[1, 1, 1]),
                minus(&[3]),
                ParabolicD::Bar(p(&[]), 3),
                ParabolicD::Bar(p(&[1]), 2),
            ]
        );
    }

    #[test]
    fn sign_and_trivial_rows() {
        let cache = CoefficientCache::new();
        for n in [3u32, 4] {
            let sign = IrrepD::sign(n);
            for q in enumerate_parabolics_d(n).unwrap() {
                assert_eq!(sign_mult_d(&cache, &sign, &q).unwrap(), big(1), "sign over {q}");
            }
            let trivial = IrrepD::trivial(n);
            for q in enumerate_parabolics_d(n).unwrap() {
                let expected = if q == ParabolicD::Plus(p(&vec![1; n as usize])) {
                    1
                } else {
                    0
                };
                assert_eq!(
                    sign_mult_d(&cache, &trivial, &q).unwrap(),
                    big(expected),
                    "trivial over {q}"
                );
            }
        }
    }

    #[test]
    fn split_multiplicities_swap_at_d4() {
        let cache = CoefficientCache::new();
        let vp = IrrepD::Split(p(&[1, 1]), true);
        let vm = IrrepD::Split(p(&[1, 1]), false);
        // The P^+ and P^- values swap between the two halves.
        assert_eq!(sign_mult_d(&cache, &vp, &plus(&[4])).unwrap(), big(1));
        assert_eq!(sign_mult_d(&cache, &vp, &minus(&[4])).unwrap(), big(0));
        assert_eq!(sign_mult_d(&cache, &vm, &plus(&[4])).unwrap(), big(0));
        assert_eq!(sign_mult_d(&cache, &vm, &minus(&[4])).unwrap(), big(1));
        // Conjugation symmetry across all D_4..D_6 labels and parts.
        for n in [4u32, 6] {
            for l in partitions_of(n / 2).unwrap() {
                let vp = IrrepD::Split(l.clone(), true);
                let vm = IrrepD::Split(l.clone(), false);
                for s in partitions_of(n).unwrap() {
                    let pp = ParabolicD::Plus(s.clone());
                    let pm = ParabolicD::Minus(s.clone());
                    assert_eq!(
                        sign_mult_d(&cache, &vp, &pp).unwrap(),
                        sign_mult_d(&cache, &vm, &pm).unwrap()
                    );
                }
                for q in enumerate_parabolics_d(n).unwrap() {
                    if let ParabolicD::Bar(_, _) = q {
                        assert_eq!(
                            sign_mult_d(&cache, &vp, &q).unwrap(),
                            sign_mult_d(&cache, &vm, &q).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn reducible_pair_is_sum_of_halves() {
        let cache = CoefficientCache::new();
        for l in partitions_of(2).unwrap() {
            let vp = sign_signature_d(&cache, &IrrepD::Split(l.clone(), true)).unwrap();
            let vm = sign_signature_d(&cache, &IrrepD::Split(l.clone(), false)).unwrap();
            let total = vp.add(&vm).unwrap();
            for q in enumerate_parabolics_d(4).unwrap() {
                assert_eq!(
                    total.get(&q),
                    sign_mult_d_pair(&cache, &l, &l, &q).unwrap(),
                    "at {q}"
                );
            }
        }
    }

    #[test]
    fn signatures_distinct_d4() {
        let cache = CoefficientCache::new();
        let sigs: Vec<_> = irreps_d(4)
            .unwrap()
            .into_iter()
            .map(|v| sign_signature_d(&cache, &v).unwrap())
            .collect();
        assert_eq!(sigs.len(), 13);
        for i in 0..sigs.len() {
            for j in 0..i {
                assert_ne!(sigs[i], sigs[j]);
            }
        }
    }

    #[test]
    fn recover_round_trips_d4_d5() {
        let cache = CoefficientCache::new();
        for n in [4u32, 5] {
            for v in irreps_d(n).unwrap() {
                let sig = sign_signature_d(&cache, &v).unwrap();
                assert_eq!(recover_d(&sig).unwrap(), v, "round trip for {v}");
            }
        }
    }

    #[test]
    fn branch_nonsplit_examples() {
        let cache = CoefficientCache::new();
        // k = 0 restricts trivially.
        let b = branch_d_nonsplit(&cache, &p(&[2]), &p(&[1]), 0).unwrap();
        assert_eq!(
            b,
            BTreeMap::from([(
                (IrrepD::pair(p(&[]), p(&[])), IrrepD::pair(p(&[2]), p(&[1]))),
                big(1)
            )])
        );
        // Dimension conservation on V_{{[2],[1]}} of D_3 at k = 1.
        let b = branch_d_nonsplit(&cache, &p(&[2]), &p(&[1]), 1).unwrap();
        let total: BigInt = b.iter().map(|((l, r), m)| dim_d(l) * dim_d(r) * m).sum();
        assert_eq!(total, dim_d(&IrrepD::pair(p(&[2]), p(&[1]))));
    }

    #[test]
    fn branch_nonsplit_matches_b_branching() {
        // Forgetting order on branch_b_to_bb reproduces branch_d_nonsplit.
        use crate::type_b::{branch_b_to_bb, IrrepB};
        let cache = CoefficientCache::new();
        for n in 2..=5u32 {
            for (lam, mu) in crate::partitions::bipartitions_of(n).unwrap() {
                for k in 0..=n {
                    let d = branch_d_nonsplit(&cache, &lam, &mu, k).unwrap();
                    let mut folded: BTreeMap<(IrrepD, IrrepD), BigInt> = BTreeMap::new();
                    let b = branch_b_to_bb(&cache, &IrrepB::new(lam.clone(), mu.clone()), k)
                        .unwrap();
                    for ((l, r), m) in b {
                        let key = (IrrepD::pair(l.lam, l.mu), IrrepD::pair(r.lam, r.mu));
                        *folded.entry(key).or_default() += m;
                    }
                    assert_eq!(d, folded, "({lam},{mu}) at k={k}");
                }
            }
        }
    }

    #[test]
    fn branch_split_d4() {
        let cache = CoefficientCache::new();
        for l in partitions_of(2).unwrap() {
            let full_dim = dim_d(&IrrepD::Split(l.clone(), true));
            for k in 0..=4u32 {
                // Dimension conservation for both halves.
                for plus in [true, false] {
                    let b = branch_d_split(&cache, &l, plus, k).unwrap();
                    let total: BigInt =
                        b.iter().map(|((x, y), m)| dim_d(x) * dim_d(y) * m).sum();
                    assert_eq!(total, full_dim, "dims for {l}{plus} at k={k}");
                }
                // Plus + minus equals the reducible pair branching after
                // refining reducible pair factors into split halves.
                let mut sum: BTreeMap<(IrrepD, IrrepD), BigInt> = BTreeMap::new();
                for plus in [true, false] {
                    for (key, m) in branch_d_split(&cache, &l, plus, k).unwrap() {
                        *sum.entry(key).or_default() += m;
                    }
                }
                let mut refined: BTreeMap<(IrrepD, IrrepD), BigInt> = BTreeMap::new();
                for ((x, y), m) in branch_d_nonsplit(&cache, &l, &l, k).unwrap() {
                    let xs: Vec<IrrepD> = refine(&x);
                    let ys: Vec<IrrepD> = refine(&y);
                    for xe in &xs {
                        for ye in &ys {
                            *refined.entry((xe.clone(), ye.clone())).or_default() += &m;
                        }
                    }
                }
                assert_eq!(sum, refined, "plus+minus vs pair for {l} at k={k}");
            }
            // k = n is the identity restriction.
            let b = branch_d_split(&cache, &l, true, 4).unwrap();
            assert_eq!(
                b,
                BTreeMap::from([(
                    (IrrepD::Split(l.clone(), true), IrrepD::pair(p(&[]), p(&[]))),
                    big(1)
                )])
            );
        }
    }

    /// Expands a reducible equal pair into its two halves; the empty pair
    /// is the trivial module of D_0 and stays whole.
    fn refine(v: &IrrepD) -> Vec<IrrepD> {
        match v {
            IrrepD::NonSplit(a, b) if a == b && !a.is_empty() => vec![
                IrrepD::Split(a.clone(), true),
                IrrepD::Split(a.clone(), false),
            ],
            other => vec![other.clone()],
        }
    }

    #[test]
    fn split_to_sn_examples() {
        let cache = CoefficientCache::new();
        assert_eq!(
            branch_d_split_to_sn(&cache, &p(&[1]), true).unwrap(),
            BTreeMap::from([(p(&[2]), big(1))])
        );
        assert_eq!(
            branch_d_split_to_sn(&cache, &p(&[1]), false).unwrap(),
            BTreeMap::from([(p(&[1, 1]), big(1))])
        );
        // plus + minus = branching of the reducible pair to S_n.
        use crate::type_b::{branch_b_to_sn, IrrepB};
        for l in [p(&[2]), p(&[2, 1])] {
            let a = branch_d_split_to_sn(&cache, &l, true).unwrap();
            let b = branch_d_split_to_sn(&cache, &l, false).unwrap();
            let full = branch_b_to_sn(&cache, &IrrepB::new(l.clone(), l.clone())).unwrap();
            for nu in partitions_of(2 * l.size()).unwrap() {
                let lhs = a.get(&nu).cloned().unwrap_or_default()
                    + b.get(&nu).cloned().unwrap_or_default();
                assert_eq!(lhs, full.get(&nu).cloned().unwrap_or_default(), "at {nu}");
            }
        }
    }
}
