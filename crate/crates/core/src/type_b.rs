//! Irreducible labels, branching rules, sign multiplicities over generalized
//! parabolic subgroups, recovery and decomposition for the hyperoctahedral
//! group, the common Weyl group of types B and C.
//!
//! Irreducibles are ordered pairs of partitions `V_{λ,μ}` with
//! `|λ| + |μ| = n`; generalized parabolics are products of `S`-factors and
//! any number of `B`-factors. The central formula is the splitting sum
//! `Σ_{α+β} K_{λ*,α} K_{μ*,β}` over contents supported on the right factor
//! positions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::{bipartitions_of, partitions_of, Composition, Partition};
use crate::tableaux::CoefficientCache;

/// A generalized parabolic subgroup of `B_n` up to conjugacy:
/// `S_{a_1} x ... x S_{a_k} x B_{b_1} x ... x B_{b_l}` with both part lists
/// stored sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParabolicB {
    a_parts: Partition,
    b_parts: Partition,
}

impl ParabolicB {
    /// Canonicalizes arbitrary (positive) part lists by sorting.
    pub fn new(a_parts: &Composition, b_parts: &Composition) -> Result<Self> {
        if !a_parts.all_positive() || !b_parts.all_positive() {
            return Err(Error::InvalidLabel(format!(
                "parabolic parts must be positive: {a_parts}|{b_parts}"
            )));
        }
        Ok(ParabolicB {
            a_parts: a_parts.sorted(),
            b_parts: b_parts.sorted(),
        })
    }

    pub fn from_partitions(a_parts: Partition, b_parts: Partition) -> Self {
        ParabolicB { a_parts, b_parts }
    }

    pub fn a_parts(&self) -> &Partition {
        &self.a_parts
    }

    pub fn b_parts(&self) -> &Partition {
        &self.b_parts
    }

    pub fn rank(&self) -> u32 {
        self.a_parts.size() + self.b_parts.size()
    }

    /// Honest parabolic subgroups have at most one `B`-factor.
    pub fn is_generalized_only(&self) -> bool {
        self.b_parts.rows() >= 2
    }
}

impl fmt::Display for ParabolicB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}|{}",
            self.a_parts.to_composition(),
            self.b_parts.to_composition()
        )
    }
}

impl std::str::FromStr for ParabolicB {
    type Err = Error;

    /// Parses the `(2,1)|(1)` text form.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("parabolic must look like (2,1)|(1), got {s:?}")))?;
        ParabolicB::new(&a.parse()?, &b.parse()?)
    }
}

/// An irreducible representation `V_{λ,μ}` of `B_n`, `n = |λ| + |μ|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrrepB {
    pub lam: Partition,
    pub mu: Partition,
}

impl IrrepB {
    pub fn new(lam: Partition, mu: Partition) -> Self {
        IrrepB { lam, mu }
    }

    pub fn rank(&self) -> u32 {
        self.lam.size() + self.mu.size()
    }

    /// The sign representation `V_{∅,[1^n]}`.
    pub fn sign(n: u32) -> Self {
        IrrepB {
            lam: Partition::empty(),
            mu: Partition::new(vec![1; n as usize]).expect("column shape"),
        }
    }

    /// The trivial representation `V_{[n],∅}`.
    pub fn trivial(n: u32) -> Self {
        IrrepB {
            lam: Partition::new(if n == 0 { vec![] } else { vec![n] }).expect("row shape"),
            mu: Partition::empty(),
        }
    }
}

impl fmt::Display for IrrepB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.lam, self.mu)
    }
}

impl std::str::FromStr for IrrepB {
    type Err = Error;

    /// Parses the `[2,1]|[1]` text form.
    fn from_str(s: &str) -> Result<Self> {
        let (lam, mu) = crate::partitions::parse_bipartition(s)?;
        Ok(IrrepB::new(lam, mu))
    }
}

/// The signMult vector of a `B_n`-representation over canonical parabolics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignSignatureB {
    rank: u32,
    mult: BTreeMap<ParabolicB, BigInt>,
}

impl SignSignatureB {
    pub fn from_map(rank: u32, mult: BTreeMap<ParabolicB, BigInt>) -> Result<Self> {
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
        Ok(SignSignatureB { rank, mult })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Missing keys read as multiplicity zero.
    pub fn get(&self, parabolic: &ParabolicB) -> BigInt {
        self.mult.get(parabolic).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = &ParabolicB> {
        self.mult
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, _)| k)
    }

    /// Entries in the canonical enumeration order.
    pub fn entries(&self, generalized: bool) -> Result<Vec<(ParabolicB, BigInt)>> {
        Ok(enumerate_parabolics_b(self.rank, generalized)?
            .into_iter()
            .map(|p| {
                let v = self.get(&p);
                (p, v)
            })
            .collect())
    }

    pub fn add(&self, other: &SignSignatureB) -> Result<SignSignatureB> {
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
        Ok(SignSignatureB {
            rank: self.rank,
            mult,
        })
    }

    pub fn scale(&self, factor: &BigInt) -> SignSignatureB {
        SignSignatureB {
            rank: self.rank,
            mult: self
                .mult
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
        }
    }
}

/// All bipartitions of `n` in the recovery (triangularity) order: descending
/// under `(λ,μ) ≻ (ν,σ) iff μ* > σ* lex, or μ = σ and λ* > ν* lex`.
pub fn irrep_order_b(n: u32) -> Result<Vec<IrrepB>> {
    let mut pairs = bipartitions_of(n)?;
    pairs.sort_by(|(l1, m1), (l2, m2)| {
        m2.conjugate()
            .lex_compare(&m1.conjugate())
            .then_with(|| l2.conjugate().lex_compare(&l1.conjugate()))
    });
    Ok(pairs
        .into_iter()
        .map(|(lam, mu)| IrrepB::new(lam, mu))
        .collect())
}

/// The generalized parabolic attached to an irreducible pair: `P_{λ*,μ*}`.
pub fn pair_parabolic(v: &IrrepB) -> ParabolicB {
    ParabolicB::from_partitions(v.lam.conjugate(), v.mu.conjugate())
}

/// Canonical parabolic classes of `B_n` in the table order: descending by
/// the duals `(b_parts*, a_parts*)`. `generalized = false` keeps only honest
/// parabolics (at most one `B`-factor).
pub fn enumerate_parabolics_b(n: u32, generalized: bool) -> Result<Vec<ParabolicB>> {
    let mut out: Vec<ParabolicB> = bipartitions_of(n)?
        .into_iter()
        .map(|(a, b)| ParabolicB::from_partitions(a, b))
        .filter(|p| generalized || !p.is_generalized_only())
        .collect();
    out.sort_by(|p, q| {
        q.b_parts
            .conjugate()
            .lex_compare(&p.b_parts.conjugate())
            .then_with(|| q.a_parts.conjugate().lex_compare(&p.a_parts.conjugate()))
    });
    Ok(out)
}

/// Multiplicity of the sign representation of `p` in `V_{λ,μ}`:
/// `Σ K_{λ*,α} K_{μ*,β}` over splittings `α + β` of the parts tuple with
/// `α` supported on the `S`-factor positions.
pub fn sign_mult_b(cache: &CoefficientCache, v: &IrrepB, p: &ParabolicB) -> Result<BigInt> {
    if v.rank() != p.rank() {
        return Err(Error::RankMismatch {
            expected: v.rank() as usize,
            got: p.rank() as usize,
        });
    }
    let lam_dual = v.lam.conjugate();
    let mu_dual = v.mu.conjugate();
    let a = p.a_parts.parts();
    let mut total = BigInt::zero();
    // Iterate over every α with 0 <= α_i <= a_i on the S positions.
    let mut alpha = vec![0u32; a.len()];
    loop {
        let alpha_comp = Composition::new(alpha.clone());
        let k1 = cache.kostka(&lam_dual, &alpha_comp);
        if !k1.is_zero() {
            let beta: Vec<u32> = a.iter().zip(&alpha).map(|(&x, &y)| x - y).collect();
            let beta_full = Composition::new(beta).concat(&p.b_parts.to_composition());
            let k2 = cache.kostka(&mu_dual, &beta_full);
            total += k1 * k2;
        }
        // Odometer.
        let mut i = 0;
        loop {
            if i == alpha.len() {
                return Ok(total);
            }
            if alpha[i] < a[i] {
                alpha[i] += 1;
                break;
            }
            alpha[i] = 0;
            i += 1;
        }
    }
}

/// Branching of `V_{λ,μ}` to `B_k x B_{n-k}`: the multiset of factor pairs
/// with multiplicities `c^λ_{ν,ξ} c^μ_{σ,ζ}`.
pub fn branch_b_to_bb(
    cache: &CoefficientCache,
    v: &IrrepB,
    k: u32,
) -> Result<BTreeMap<(IrrepB, IrrepB), BigInt>> {
    let n = v.rank();
    if k > n {
        return Err(Error::SizeMismatch(format!("k = {k} out of range 0..={n}")));
    }
    let mut out = BTreeMap::new();
    for i in 0..=k {
        for nu in partitions_of(i)? {
            for sigma in partitions_of(k - i)? {
                for j in 0..=(n - k) {
                    for xi in partitions_of(j)? {
                        let c1 = cache.lr(&v.lam, &nu, &xi);
                        if c1.is_zero() {
                            continue;
                        }
                        for zeta in partitions_of(n - k - j)? {
                            let c2 = cache.lr(&v.mu, &sigma, &zeta);
                            if c2.is_zero() {
                                continue;
                            }
                            let left = IrrepB::new(nu.clone(), sigma.clone());
                            let right = IrrepB::new(xi.clone(), zeta);
                            *out.entry((left, right)).or_default() += &c1 * &c2;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Branching of `V_{λ,μ}` to `S_n`: `ν` with multiplicity `c^ν_{λ,μ}`.
pub fn branch_b_to_sn(cache: &CoefficientCache, v: &IrrepB) -> Result<BTreeMap<Partition, BigInt>> {
    let mut out = BTreeMap::new();
    for nu in partitions_of(v.rank())? {
        let c = cache.lr(&nu, &v.lam, &v.mu);
        if !c.is_zero() {
            out.insert(nu, c);
        }
    }
    Ok(out)
}

/// One tensor factor of a generalized-parabolic branching target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BFactor {
    /// An `S_a` factor carrying `V_ρ`.
    A(Partition),
    /// A `B_b` factor carrying `V_{ν,σ}`.
    B(IrrepB),
}

/// Multiplicity of the chained restriction `S_m -> S_{a_1} x ... x S_{a_k}`
/// onto `V_{ρ_1} ⊗ ... ⊗ V_{ρ_k}`.
fn sn_factor_mult(cache: &CoefficientCache, nu: &Partition, factors: &[Partition]) -> Result<BigInt> {
    match factors {
        [] => Ok(if nu.is_empty() { BigInt::one() } else { BigInt::zero() }),
        [last] => Ok(if nu == last { BigInt::one() } else { BigInt::zero() }),
        [first, rest @ ..] => {
            let remaining = nu.size() - first.size();
            let mut total = BigInt::zero();
            for xi in partitions_of(remaining)? {
                let c = cache.lr(nu, first, &xi);
                if !c.is_zero() {
                    total += c * sn_factor_mult(cache, &xi, rest)?;
                }
            }
            Ok(total)
        }
    }
}

/// Multiplicity of a given tensor product of factor irreducibles in the
/// restriction of `V_{λ,μ}` to the generalized parabolic `p`, computed by
/// iterated application of the two-factor branching rules.
///
/// `target` must match `p` factor for factor: `A` factors for the `S`-parts
/// in order, then `B` factors for the `B`-parts.
pub fn branch_b_generalized(
    cache: &CoefficientCache,
    v: &IrrepB,
    p: &ParabolicB,
    target: &[BFactor],
) -> Result<BigInt> {
    if v.rank() != p.rank() {
        return Err(Error::RankMismatch {
            expected: v.rank() as usize,
            got: p.rank() as usize,
        });
    }
    let a = p.a_parts.parts();
    let b = p.b_parts.parts();
    if target.len() != a.len() + b.len() {
        return Err(Error::SizeMismatch(format!(
            "target has {} factors, parabolic has {}",
            target.len(),
            a.len() + b.len()
        )));
    }
    let mut a_targets = Vec::new();
    let mut b_targets = Vec::new();
    for (i, f) in target.iter().enumerate() {
        match f {
            BFactor::A(rho) if i < a.len() => {
                if rho.size() != a[i] {
                    return Err(Error::SizeMismatch(format!(
                        "factor {i} must have size {}, got {rho}",
                        a[i]
                    )));
                }
                a_targets.push(rho.clone());
            }
            BFactor::B(w) if i >= a.len() => {
                if w.rank() != b[i - a.len()] {
                    return Err(Error::SizeMismatch(format!(
                        "factor {i} must have rank {}, got {w}",
                        b[i - a.len()]
                    )));
                }
                b_targets.push(w.clone());
            }
            _ => {
                return Err(Error::SizeMismatch(format!(
                    "factor {i} has the wrong kind for {p}"
                )));
            }
        }
    }

    // Peel B factors from the right via B_{m-b_j} x B_{b_j}.
    let mut current: BTreeMap<IrrepB, BigInt> = BTreeMap::from([(v.clone(), BigInt::one())]);
    for (w, &bj) in b_targets.iter().zip(b.iter()).rev() {
        let mut next: BTreeMap<IrrepB, BigInt> = BTreeMap::new();
        for (big, coeff) in &current {
            let m = big.rank();
            for (pair, c) in branch_b_to_bb(cache, big, m - bj)? {
                if &pair.1 == w {
                    *next.entry(pair.0).or_default() += coeff * &c;
                }
            }
        }
        current = next;
        if current.is_empty() {
            return Ok(BigInt::zero());
        }
    }

    // What remains is a B_m with m = Σ a_i; branch to S_m and then chain the
    // type A factors.
    let mut total = BigInt::zero();
    for (big, coeff) in &current {
        for (nu, c) in branch_b_to_sn(cache, big)? {
            let f = sn_factor_mult(cache, &nu, &a_targets)?;
            if !f.is_zero() {
                total += coeff * c * f;
            }
        }
    }
    Ok(total)
}

/// The full signMult vector of `V_{λ,μ}` over the canonical parabolics,
/// generalized or honest.
pub fn sign_signature_b(
    cache: &CoefficientCache,
    v: &IrrepB,
    generalized: bool,
) -> Result<SignSignatureB> {
    let mut mult = BTreeMap::new();
    for p in enumerate_parabolics_b(v.rank(), generalized)? {
        let m = sign_mult_b(cache, v, &p)?;
        mult.insert(p, m);
    }
    Ok(SignSignatureB {
        rank: v.rank(),
        mult,
    })
}

/// `true` when the multiset `sub` is contained in the multiset of parts of
/// `sup`.
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

/// Recovers the label of an irreducible from its sign signature over honest
/// parabolics (membership queries only; missing keys read as zero).
///
/// With `A = λ*` and `B = μ*`, the lex-largest pure-`S` parabolic in the
/// signature is `A + B`, and for each `i` the largest single `B`-part `c`
/// compatible with the prefix `(A+B)_1, ..., (A+B)_{i-1}` is `B_i`. The
/// label `(λ,μ)` is read back off by dualizing.
pub fn recover_b(sig: &SignSignatureB) -> Result<IrrepB> {
    let n = sig.rank();
    let support: Vec<&ParabolicB> = sig.support().collect();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    // Step 1: alpha = lex-max pure-S parabolic = A + B.
    let alpha = support
        .iter()
        .filter(|p| p.b_parts().is_empty())
        .map(|p| p.a_parts().clone())
        .max_by(|a, b| a.lex_compare(b))
        .ok_or_else(|| Error::Inconsistent("no pure-S parabolic in support".into()))?;
    if alpha.size() != n {
        return Err(Error::Inconsistent(format!(
            "lex-max supported parabolic {alpha} has the wrong rank"
        )));
    }
    // Step 2: B_i by prefix-constrained probes over one-B-part parabolics.
    let k = alpha.rows();
    let mut b_vals = Vec::with_capacity(k);
    for i in 0..k {
        let prefix = &alpha.parts()[..i];
        let c = support
            .iter()
            .filter(|p| p.b_parts().rows() == 1 && multiset_contains(p.a_parts(), prefix))
            .map(|p| p.b_parts().part(0))
            .max()
            .unwrap_or(0);
        b_vals.push(c);
    }
    let b_dual = Partition::new(b_vals.clone()).map_err(|_| {
        Error::Inconsistent(format!(
            "recovered B-probe values {b_vals:?} are not weakly decreasing"
        ))
    })?;
    let a_dual = alpha.entrywise_sub(&b_dual)?;
    Ok(IrrepB::new(a_dual.conjugate(), b_dual.conjugate()))
}

/// Decomposes a signMult vector over generalized parabolics into irreducible
/// multiplicities by forward substitution in the `≻`-descending order.
pub fn decompose_b(
    cache: &CoefficientCache,
    vec: &SignSignatureB,
) -> Result<BTreeMap<IrrepB, BigInt>> {
    let n = vec.rank();
    let order = irrep_order_b(n)?;
    let parabolics = enumerate_parabolics_b(n, true)?;
    let mut residual: BTreeMap<ParabolicB, BigInt> = parabolics
        .iter()
        .map(|p| {
            let v = vec.get(p);
            (p.clone(), v)
        })
        .collect();
    let mut out = BTreeMap::new();
    for pair in order {
        let probe = pair_parabolic(&pair);
        let m = residual.get(&probe).cloned().unwrap_or_default();
        if m.is_zero() {
            continue;
        }
        if m < BigInt::zero() {
            return Err(Error::Inconsistent(format!(
                "negative multiplicity {m} for {pair}: input is not in the non-negative cone"
            )));
        }
        for (p, r) in residual.iter_mut() {
            let s = sign_mult_b(cache, &pair, p)?;
            if !s.is_zero() {
                *r -= &m * &s;
            }
        }
        out.insert(pair, m);
    }
    if residual.values().any(|v| !v.is_zero()) {
        return Err(Error::Inconsistent(
            "signature is not an integer combination of irreducible signatures".into(),
        ));
    }
    Ok(out)
}

/// Labels and dimensions from the little-groups construction:
/// `dim V_{λ,μ} = binom(n,|λ|) f_λ f_μ`. A verification-only view cross
/// checked against the oracle's explicit modules in the tests.
pub fn wigner_mackey_labels(n: u32) -> Result<Vec<(IrrepB, BigInt)>> {
    let mut out = Vec::new();
    for (lam, mu) in bipartitions_of(n)? {
        let dim = binomial(n, lam.size())
            * crate::oracle::hook_length_dim(&lam)
            * crate::oracle::hook_length_dim(&mu);
        out.push((IrrepB::new(lam, mu), dim));
    }
    Ok(out)
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k.min(n - k) {
        num *= BigInt::from(n - j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

/// `dim V_{λ,μ}`.
pub fn dim_b(v: &IrrepB) -> BigInt {
    binomial(v.rank(), v.lam.size())
        * crate::oracle::hook_length_dim(&v.lam)
        * crate::oracle::hook_length_dim(&v.mu)
}
