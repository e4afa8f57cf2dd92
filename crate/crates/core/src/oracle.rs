//! Brute-force verification oracle.
//!
//! Builds explicit exact-rational matrix modules for the Weyl groups of
//! types A, B and D (symmetric, hyperoctahedral and even-signed permutation
//! groups), and computes sign multiplicities by character averaging:
//! `(1/|H|) Σ_{h∈H} det(h) χ(h)`. Everything here is deliberately
//! independent of the closed formulas in `type_a`/`type_b`/`type_d`; its only
//! shared dependency is the partition bookkeeping.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::ratmat::{rat, Rat, RatMat};

/// Cap on group and subgroup enumeration.
pub const GROUP_ENUM_CAP: usize = 1_000_000;

/// A signed permutation: `e_j -> signs[j] * e_{perm[j]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    perm: Vec<u8>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            perm: (0..n as u8).collect(),
            signs: vec![1; n],
        }
    }

    pub fn new(perm: Vec<u8>, signs: Vec<i8>) -> Self {
        debug_assert_eq!(perm.len(), signs.len());
        SignedPermutation { perm, signs }
    }

    /// Transposition of positions `i` and `j` (no sign flips).
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.perm.swap(i, j);
        p
    }

    /// Sign flip at position `i`.
    pub fn flip(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.signs[i] = -1;
        p
    }

    /// Swap of `i`, `j` with both signs negated; the reflection in `e_i + e_j`.
    pub fn negated_transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::transposition(n, i, j);
        p.signs[i] = -1;
        p.signs[j] = -1;
        p
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[u8] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        let n = self.n();
        let mut perm = vec![0u8; n];
        let mut signs = vec![1i8; n];
        for j in 0..n {
            let k = other.perm[j] as usize;
            perm[j] = self.perm[k];
            signs[j] = other.signs[j] * self.signs[k];
        }
        SignedPermutation { perm, signs }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let n = self.n();
        let mut perm = vec![0u8; n];
        let mut signs = vec![1i8; n];
        for j in 0..n {
            let k = self.perm[j] as usize;
            perm[k] = j as u8;
            signs[k] = self.signs[j];
        }
        SignedPermutation { perm, signs }
    }

    /// Determinant in the natural reflection representation; this realizes
    /// the sign character without reduced words.
    pub fn det(&self) -> i64 {
        let mut sign = self.signs.iter().map(|&s| s as i64).product::<i64>();
        let n = self.n();
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.perm[j] as usize;
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    pub fn minus_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s == -1).count()
    }

    /// Cycle type of the underlying permutation.
    pub fn cycle_type(&self) -> Partition {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u32;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.perm[j] as usize;
                len += 1;
            }
            cycles.push(len);
        }
        Partition::from_unsorted(cycles)
    }
}

/// Which Weyl group family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupTag {
    A,
    B,
    D,
}

/// A fully enumerated group with conjugacy class data and one word per
/// element in the simple generators.
pub struct GroupData {
    pub tag: GroupTag,
    pub n: usize,
    pub gens: Vec<SignedPermutation>,
    pub elements: Vec<SignedPermutation>,
    index: HashMap<SignedPermutation, usize>,
    pub words: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub class_reps: Vec<usize>,
    pub class_sizes: Vec<usize>,
}

impl GroupData {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn num_classes(&self) -> usize {
        self.class_reps.len()
    }

    pub fn index_of(&self, g: &SignedPermutation) -> Option<usize> {
        self.index.get(g).copied()
    }
}

/// Simple reflections for the given family and rank.
pub fn simple_generators(tag: GroupTag, n: usize) -> Vec<SignedPermutation> {
    let mut gens = Vec::new();
    for i in 0..n.saturating_sub(1) {
        gens.push(SignedPermutation::transposition(n, i, i + 1));
    }
    match tag {
        GroupTag::A => {}
        GroupTag::B => {
            if n >= 1 {
                gens.push(SignedPermutation::flip(n, n - 1));
            }
        }
        GroupTag::D => {
            if n >= 2 {
                gens.push(SignedPermutation::negated_transposition(n, n - 2, n - 1));
            }
        }
    }
    gens
}

/// Coxeter matrix of the family, indexed like [`simple_generators`].
pub fn coxeter_matrix(tag: GroupTag, n: usize) -> Vec<Vec<u32>> {
    let r = simple_generators(tag, n).len();
    let mut m = vec![vec![2u32; r]; r];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    let chain = match tag {
        GroupTag::A => r.saturating_sub(1),
        GroupTag::B => n.saturating_sub(2),
        GroupTag::D => n.saturating_sub(2),
    };
    for i in 0..chain {
        m[i][i + 1] = 3;
        m[i + 1][i] = 3;
    }
    match tag {
        GroupTag::A => {}
        GroupTag::B => {
            if n >= 2 {
                m[n - 2][n - 1] = 4;
                m[n - 1][n - 2] = 4;
            }
        }
        GroupTag::D => {
            if n >= 3 {
                // The fork: t_n is attached to t_{n-2}, not t_{n-1}.
                m[n - 2][n - 1] = 2;
                m[n - 1][n - 2] = 2;
                m[n - 3][n - 1] = 3;
                m[n - 1][n - 3] = 3;
            }
        }
    }
    m
}

fn expected_order(tag: GroupTag, n: usize) -> u128 {
    let fact: u128 = (1..=n as u128).product();
    match tag {
        GroupTag::A => fact,
        GroupTag::B => fact << n,
        GroupTag::D => {
            if n == 0 {
                1
            } else {
                fact << (n - 1)
            }
        }
    }
}

/// Enumerates all elements with conjugacy classes and per-element words.
pub fn enumerate_group(tag: GroupTag, n: usize) -> Result<GroupData> {
    let order = expected_order(tag, n);
    if order > GROUP_ENUM_CAP as u128 {
        return Err(Error::CapExceeded(format!(
            "group of order {order} exceeds enumeration cap {GROUP_ENUM_CAP}"
        )));
    }
    let gens = simple_generators(tag, n);
    let id = SignedPermutation::identity(n);
    let mut elements = vec![id.clone()];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut index = HashMap::new();
    index.insert(id, 0usize);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (gi, g) in gens.iter().enumerate() {
            let next = elements[i].compose(g);
            if !index.contains_key(&next) {
                let mut w = words[i].clone();
                w.push(gi);
                index.insert(next.clone(), elements.len());
                words.push(w);
                elements.push(next);
                queue.push_back(elements.len() - 1);
            }
        }
    }
    if elements.len() as u128 != order {
        return Err(Error::Inconsistent(format!(
            "enumerated {} elements, expected {order}",
            elements.len()
        )));
    }

    // Conjugacy classes as orbits of conjugation by the generators.
    let mut class_of = vec![usize::MAX; elements.len()];
    let mut class_reps = Vec::new();
    let mut class_sizes = Vec::new();
    for start in 0..elements.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let class_id = class_reps.len();
        let mut size = 1usize;
        class_of[start] = class_id;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let conj = g.compose(&elements[i]).compose(&g.inverse());
                let j = index[&conj];
                if class_of[j] == usize::MAX {
                    class_of[j] = class_id;
                    size += 1;
                    queue.push_back(j);
                }
            }
        }
        class_reps.push(start);
        class_sizes.push(size);
    }

    Ok(GroupData {
        tag,
        n,
        gens,
        elements,
        index,
        words,
        class_of,
        class_reps,
        class_sizes,
    })
}

/// An explicit matrix module: one exact rational matrix per simple generator.
pub struct ExplicitModule {
    pub label: String,
    pub gen_matrices: Vec<RatMat>,
}

impl ExplicitModule {
    pub fn dim(&self) -> usize {
        self.gen_matrices.first().map_or(1, RatMat::rows)
    }

    /// Matrix of the group element with the given word in the generators.
    pub fn matrix_of_word(&self, word: &[usize]) -> RatMat {
        let mut m = RatMat::identity(self.dim());
        for &g in word {
            m = &m * &self.gen_matrices[g];
        }
        m
    }

    /// Character value on every conjugacy class of `group`.
    pub fn character(&self, group: &GroupData) -> Vec<Rat> {
        group
            .class_reps
            .iter()
            .map(|&rep| self.matrix_of_word(&group.words[rep]).trace())
            .collect()
    }

    /// Checks the defining Coxeter relations on the generator matrices.
    pub fn validate(&self, coxeter: &[Vec<u32>]) -> Result<()> {
        let r = self.gen_matrices.len();
        if coxeter.len() != r {
            return Err(Error::RankMismatch {
                expected: coxeter.len(),
                got: r,
            });
        }
        for i in 0..r {
            if !self.gen_matrices[i].pow(2).is_identity() {
                return Err(Error::RelationViolated(format!(
                    "s_{}^2 != 1 in module {}",
                    i + 1,
                    self.label
                )));
            }
            for j in 0..i {
                let prod = &self.gen_matrices[i] * &self.gen_matrices[j];
                if !prod.pow(coxeter[i][j] as u64).is_identity() {
                    return Err(Error::RelationViolated(format!(
                        "(s_{} s_{})^{} != 1 in module {}",
                        i + 1,
                        j + 1,
                        coxeter[i][j],
                        self.label
                    )));
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Symmetric group: standard tableaux, Young's seminormal form,
// Murnaghan-Nakayama, hook lengths.
// ---------------------------------------------------------------------------

/// A standard tableau stored as row fillings with entries `1..=n`.
type StdTableau = Vec<Vec<u32>>;

fn standard_tableaux(lam: &Partition) -> Vec<StdTableau> {
    let n = lam.size();
    let rows = lam.rows();
    let mut out = Vec::new();
    let mut filling: StdTableau = (0..rows).map(|r| vec![0; lam.part(r) as usize]).collect();
    let mut row_fill = vec![0usize; rows];
    fn rec(
        next: u32,
        n: u32,
        lam: &Partition,
        filling: &mut StdTableau,
        row_fill: &mut Vec<usize>,
        out: &mut Vec<StdTableau>,
    ) {
        if next > n {
            out.push(filling.clone());
            return;
        }
        for r in 0..lam.rows() {
            let c = row_fill[r];
            if c >= lam.part(r) as usize {
                continue;
            }
            if r > 0 && row_fill[r - 1] <= c {
                continue;
            }
            filling[r][c] = next;
            row_fill[r] += 1;
            rec(next + 1, n, lam, filling, row_fill, out);
            row_fill[r] -= 1;
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    rec(1, n, lam, &mut filling, &mut row_fill, &mut out);
    out
}

fn position_of(t: &StdTableau, v: u32) -> (usize, usize) {
    for (r, row) in t.iter().enumerate() {
        for (c, &e) in row.iter().enumerate() {
            if e == v {
                return (r, c);
            }
        }
    }
    unreachable!("entry {v} not found")
}

/// Dimension of `V_lam` by the hook length formula.
pub fn hook_length_dim(lam: &Partition) -> BigInt {
    let n = lam.size();
    let dual = lam.conjugate();
    let mut num = BigInt::one();
    for k in 1..=n {
        num *= BigInt::from(k);
    }
    let mut den = BigInt::one();
    for r in 0..lam.rows() {
        for c in 0..lam.part(r) as usize {
            let hook = (lam.part(r) as usize - c) + (dual.part(c) as usize - r) - 1;
            den *= BigInt::from(hook);
        }
    }
    num / den
}

/// Irreducible character of `S_n` by the Murnaghan-Nakayama rule, evaluated
/// on the class of cycle type `rho`.
pub fn mn_character(lam: &Partition, rho: &Partition) -> BigInt {
    fn rec(
        lam: &Partition,
        rho: &[u32],
        memo: &mut HashMap<(Partition, Vec<u32>), BigInt>,
    ) -> BigInt {
        if rho.is_empty() {
            return if lam.is_empty() {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        }
        let key = (lam.clone(), rho.to_vec());
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let strip = rho[0];
        let rest = &rho[1..];
        let mut total = BigInt::zero();
        // Border strips via beta numbers b_i = lam_i + rows - 1 - i: subtract
        // the strip length from one b_i keeping all distinct; the height is
        // the number of betas passed over.
        let rows = lam.rows();
        let betas: Vec<i64> = (0..rows)
            .map(|i| lam.part(i) as i64 + (rows as i64 - 1 - i as i64))
            .collect();
        for i in 0..rows {
            let newb = betas[i] - strip as i64;
            if newb < 0 || betas.contains(&newb) {
                continue;
            }
            let height = betas.iter().filter(|&&b| newb < b && b < betas[i]).count();
            let mut new_betas = betas.clone();
            new_betas[i] = newb;
            new_betas.sort_unstable_by(|a, b| b.cmp(a));
            let parts: Vec<u32> = new_betas
                .iter()
                .enumerate()
                .map(|(j, &b)| (b - (rows as i64 - 1 - j as i64)) as u32)
                .collect();
            let smaller = Partition::new(parts).expect("beta numbers give a partition");
            let term = rec(&smaller, rest, memo);
            if height % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        memo.insert(key, total.clone());
        total
    }
    let mut memo = HashMap::new();
    rec(lam, rho.parts(), &mut memo)
}

/// Young's seminormal representation of `S_n` for the shape `lam`: exact
/// rational matrices for the adjacent transpositions, validated against the
/// Coxeter relations.
pub fn build_sn_irrep(lam: &Partition) -> Result<ExplicitModule> {
    const CAP: u32 = 8;
    if lam.size() > CAP {
        return Err(Error::CapExceeded(format!(
            "build_sn_irrep({lam}) exceeds cap {CAP}"
        )));
    }
    let n = lam.size() as usize;
    let tableaux = standard_tableaux(lam);
    let dim = tableaux.len();
    let index: HashMap<StdTableau, usize> = tableaux
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect();
    let mut gens = Vec::new();
    for i in 1..n as u32 {
        let mut m = RatMat::zero(dim, dim);
        for (ti, t) in tableaux.iter().enumerate() {
            let (ri, ci) = position_of(t, i);
            let (rj, cj) = position_of(t, i + 1);
            if ri == rj {
                m[(ti, ti)] = rat(1);
            } else if ci == cj {
                m[(ti, ti)] = rat(-1);
            } else {
                // Axial distance from i to i+1; the swapped tableau is
                // standard exactly in this case.
                let d = (cj as i64 - rj as i64) - (ci as i64 - ri as i64);
                let mut swapped = t.clone();
                swapped[ri][ci] = i + 1;
                swapped[rj][cj] = i;
                let tj = index[&swapped];
                let dr = rat(d);
                m[(ti, ti)] = dr.recip();
                // Seminormal convention: the tableau with i in the earlier
                // row sends weight 1 to its partner.
                if ri < rj {
                    m[(tj, ti)] = rat(1);
                } else {
                    m[(tj, ti)] = rat(1) - (&dr * &dr).recip();
                }
            }
        }
        gens.push(m);
    }
    let module = ExplicitModule {
        label: format!("S{n} V_{lam}"),
        gen_matrices: gens,
    };
    module.validate(&coxeter_matrix(GroupTag::A, n))?;
    Ok(module)
}

/// Word in adjacent transpositions for an arbitrary permutation.
fn permutation_word(perm: &[u8]) -> Vec<usize> {
    let mut p = perm.to_vec();
    let mut word = Vec::new();
    let n = p.len();
    // Bubble-sort p to the identity; the reversed swap sequence rebuilds it.
    loop {
        let mut swapped = false;
        for i in 0..n.saturating_sub(1) {
            if p[i] > p[i + 1] {
                p.swap(i, i + 1);
                word.push(i);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    word.reverse();
    word
}

// ---------------------------------------------------------------------------
// Hyperoctahedral group B_n: induced modules via the little groups method.
// ---------------------------------------------------------------------------

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// The order-preserving coset representative sending `{0..k-1}` to `s` and
/// the remaining positions to the complement, ascending.
fn coset_rep(n: usize, s: &[usize]) -> SignedPermutation {
    let mut perm = vec![0u8; n];
    let mut in_s = vec![false; n];
    for &i in s {
        in_s[i] = true;
    }
    for (j, &i) in s.iter().enumerate() {
        perm[j] = i as u8;
    }
    let mut j = s.len();
    for (i, &flag) in in_s.iter().enumerate() {
        if !flag {
            perm[j] = i as u8;
            j += 1;
        }
    }
    SignedPermutation::new(perm, vec![1; n])
}

/// Kronecker product.
fn kron(a: &RatMat, b: &RatMat) -> RatMat {
    let (ac, br, bc) = (a.cols(), b.rows(), b.cols());
    RatMat::from_fn(a.rows() * br, ac * bc, |r, c| {
        &a[(r / br, c / bc)] * &b[(r % br, c % bc)]
    })
}

/// `V_{lam,mu} = Ind_{B_i x B_{n-i}}^{B_n} (V_lam ⊗ V_mu ⊗ χ_i)` with
/// explicit matrices for the simple generators of `B_n`.
pub fn build_bn_irrep(lam: &Partition, mu: &Partition) -> Result<ExplicitModule> {
    const CAP: u32 = 6;
    let n = (lam.size() + mu.size()) as usize;
    if n as u32 > CAP {
        return Err(Error::CapExceeded(format!(
            "build_bn_irrep({lam},{mu}) exceeds cap {CAP}"
        )));
    }
    let i = lam.size() as usize;
    let rho_lam = build_sn_irrep(lam)?;
    let rho_mu = build_sn_irrep(mu)?;
    let block = rho_lam.dim() * rho_mu.dim();

    // rho_H on the subgroup B_i x B_{n-i}: chi_i makes the sign flips on the
    // last n-i coordinates act by -1.
    let h_matrix = |h: &SignedPermutation| -> RatMat {
        let chi: i64 = h.signs()[i..].iter().map(|&s| s as i64).product();
        let g1: Vec<u8> = h.perm()[..i].to_vec();
        let g2: Vec<u8> = h.perm()[i..].iter().map(|&x| x - i as u8).collect();
        let m1 = rho_lam.matrix_of_word(&permutation_word(&g1));
        let m2 = rho_mu.matrix_of_word(&permutation_word(&g2));
        kron(&m1, &m2).scale(&rat(chi))
    };

    let cosets = subsets_of_size(n, i);
    let reps: Vec<SignedPermutation> = cosets.iter().map(|s| coset_rep(n, s)).collect();
    let coset_index: HashMap<Vec<usize>, usize> = cosets
        .iter()
        .cloned()
        .enumerate()
        .map(|(j, s)| (s, j))
        .collect();
    let dim = cosets.len() * block;

    let mut gen_matrices = Vec::new();
    for g in simple_generators(GroupTag::B, n) {
        let mut m = RatMat::zero(dim, dim);
        for (j, x) in reps.iter().enumerate() {
            let z = g.compose(x);
            let mut target: Vec<usize> = z.perm()[..i].iter().map(|&v| v as usize).collect();
            target.sort_unstable();
            let jp = coset_index[&target];
            let h = reps[jp].inverse().compose(&z);
            let hm = h_matrix(&h);
            for r in 0..block {
                for c in 0..block {
                    if !hm[(r, c)].is_zero() {
                        m[(jp * block + r, j * block + c)] = hm[(r, c)].clone();
                    }
                }
            }
        }
        gen_matrices.push(m);
    }
    let module = ExplicitModule {
        label: format!("B{n} V_{{{lam},{mu}}}"),
        gen_matrices,
    };
    module.validate(&coxeter_matrix(GroupTag::B, n))?;
    Ok(module)
}

// ---------------------------------------------------------------------------
// Even-signed permutation group D_n.
// ---------------------------------------------------------------------------

/// Label of an irreducible `D_n` module for the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DnIrrepLabel {
    /// `V_{{lam,mu}}` with `lam != mu`.
    NonSplit(Partition, Partition),
    /// `V^±_{{lam,lam}}`, `n = 2|lam|`; `true` is the plus half.
    Split(Partition, bool),
}

/// Restriction of the `B_n` module `V_{lam,mu}` to `D_n` (irreducible when
/// `lam != mu`).
pub fn build_dn_nonsplit(lam: &Partition, mu: &Partition) -> Result<ExplicitModule> {
    const CAP: u32 = 6;
    let n = (lam.size() + mu.size()) as usize;
    if n as u32 > CAP || n < 2 {
        return Err(Error::CapExceeded(format!(
            "build_dn_nonsplit({lam},{mu}) needs 2 <= n <= {CAP}"
        )));
    }
    if lam == mu {
        return Err(Error::InvalidLabel(format!(
            "V_{{{lam},{mu}}} with equal parts is reducible over D_{n}"
        )));
    }
    let b = build_bn_irrep(lam, mu)?;
    // D_n generators: t_1..t_{n-1} as in B_n, plus t_n = s t_{n-1} s.
    let s = &b.gen_matrices[n - 1];
    let t_last = &b.gen_matrices[n - 2];
    let mut gen_matrices: Vec<RatMat> = b.gen_matrices[..n - 1].to_vec();
    gen_matrices.push(&(s * t_last) * s);
    let module = ExplicitModule {
        label: format!("D{n} V_{{{lam},{mu}}}"),
        gen_matrices,
    };
    module.validate(&coxeter_matrix(GroupTag::D, n))?;
    Ok(module)
}

/// The intertwiner between the two tensor slots of `V_lam ⊗ V_lam`: solves
/// `ρ(g) φ = φ ρ(g)` over the generators and normalizes the first nonzero
/// entry to 1. Schur forces a one-dimensional solution space, so φ comes out
/// as the identity; solving keeps that honest.
fn intertwiner(rho: &ExplicitModule) -> Result<RatMat> {
    let f = rho.dim();
    if rho.gen_matrices.is_empty() {
        return Ok(RatMat::identity(f));
    }
    let rows = rho.gen_matrices.len() * f * f;
    let mut system = RatMat::zero(rows, f * f);
    for (gi, g) in rho.gen_matrices.iter().enumerate() {
        for r in 0..f {
            for c in 0..f {
                let eq = gi * f * f + r * f + c;
                for k in 0..f {
                    // (g phi - phi g)_{rc} = 0.
                    let a = g[(r, k)].clone();
                    if !a.is_zero() {
                        system[(eq, k * f + c)] = &system[(eq, k * f + c)] + &a;
                    }
                    let b = g[(k, c)].clone();
                    if !b.is_zero() {
                        system[(eq, r * f + k)] = &system[(eq, r * f + k)] - &b;
                    }
                }
            }
        }
    }
    let null = system.null_space();
    if null.len() != 1 {
        return Err(Error::Inconsistent(format!(
            "commutant of {} has dimension {}, expected 1",
            rho.label,
            null.len()
        )));
    }
    let v = &null[0];
    let pivot = v
        .iter()
        .find(|x| !x.is_zero())
        .cloned()
        .ok_or_else(|| Error::Inconsistent("zero intertwiner".into()))?;
    Ok(RatMat::from_fn(f, f, |r, c| &v[r * f + c] / &pivot))
}

/// One split half of `V_{{lam,lam}}` over `D_n`, `n = 2|lam|`, induced from
/// the block-stabilizer subgroup `(Z_2 ⋉ (S_q x S_q)) ⋉ Z_2^{n-1}`.
///
/// `symmetric_cell` picks the span of `(id, v⊗w) + (σ, w̄⊗v̄)` (plus sign on
/// the block swap) versus the minus span; the representation-theoretic ±
/// label is assigned in [`build_dn_split_pair`].
fn build_dn_split_half(lam: &Partition, symmetric_cell: bool) -> Result<ExplicitModule> {
    const CAP: u32 = 6;
    let q = lam.size() as usize;
    let n = 2 * q;
    if n as u32 > CAP || q == 0 {
        return Err(Error::CapExceeded(format!(
            "build_dn_split({lam}) needs 1 <= |lam| <= {}",
            CAP / 2
        )));
    }
    let rho = build_sn_irrep(lam)?;
    let f = rho.dim();
    let phi = intertwiner(&rho)?;

    // With φ normalized, the basis e_{ab} = (id, a⊗b) ± (σ, φ⁻¹b ⊗ φa) makes
    // the swap action block-transposition with the chosen sign.
    let block = f * f;
    let swap_sign = if symmetric_cell { rat(1) } else { rat(-1) };
    let phi_ratio = |b2: usize, a2: usize, a1: usize, b1: usize| -> Rat {
        // Coefficient of e_{a2 b2} in σ·e_{a1 b1}: φ appears once inverted
        // and once direct, so only its scalar class cancels; with φ = c·I
        // this is the plain swap.
        if a2 == b1 && b2 == a1 {
            &phi[(a1, a1)] / &phi[(b1, b1)]
        } else {
            rat(0)
        }
    };
    let swap = RatMat::from_fn(block, block, |rc, cc| {
        let (a2, b2) = (rc / f, rc % f);
        let (a1, b1) = (cc / f, cc % f);
        &swap_sign * &phi_ratio(b2, a2, a1, b1)
    });

    let sigma: SignedPermutation = {
        let perm: Vec<u8> = (0..n).map(|j| ((j + q) % n) as u8).collect();
        SignedPermutation::new(perm, vec![1; n])
    };
    // rho of an element of Q: split off the chi character of the diagonal
    // part, then the permutation part acts through S_q x S_q, via sigma when
    // it swaps the blocks.
    let q_matrix = |h: &SignedPermutation| -> RatMat {
        let chi: i64 = h.signs()[q..].iter().map(|&s| s as i64).product();
        let p = SignedPermutation::new(h.perm().to_vec(), vec![1; n]);
        let preserves = h.perm()[..q].iter().all(|&v| (v as usize) < q);
        let w = if preserves { p } else { sigma.compose(&p) };
        let g1: Vec<u8> = w.perm()[..q].to_vec();
        let g2: Vec<u8> = w.perm()[q..].iter().map(|&x| x - q as u8).collect();
        let m1 = rho.matrix_of_word(&permutation_word(&g1));
        let m2 = rho.matrix_of_word(&permutation_word(&g2));
        let mut m = kron(&m1, &m2);
        if !preserves {
            m = &swap * &m;
        }
        m.scale(&rat(chi))
    };

    // Coset representatives: one q-subset per unordered {S, S^c} pair, the
    // side containing 0.
    let cosets: Vec<Vec<usize>> = subsets_of_size(n, q)
        .into_iter()
        .filter(|s| s.contains(&0))
        .collect();
    let coset_index: HashMap<Vec<usize>, usize> = cosets
        .iter()
        .cloned()
        .enumerate()
        .map(|(j, s)| (s, j))
        .collect();
    let reps: Vec<SignedPermutation> = cosets.iter().map(|s| coset_rep(n, s)).collect();
    let dim = cosets.len() * block;

    let mut gen_matrices = Vec::new();
    for g in simple_generators(GroupTag::D, n) {
        let mut m = RatMat::zero(dim, dim);
        for (j, x) in reps.iter().enumerate() {
            let z = g.compose(x);
            let mut target: Vec<usize> = z.perm()[..q].iter().map(|&v| v as usize).collect();
            target.sort_unstable();
            if !target.contains(&0) {
                target = (0..n).filter(|v| !target.contains(v)).collect();
            }
            let jp = coset_index[&target];
            let h = reps[jp].inverse().compose(&z);
            let hm = q_matrix(&h);
            for r in 0..block {
                for c in 0..block {
                    if !hm[(r, c)].is_zero() {
                        m[(jp * block + r, j * block + c)] = hm[(r, c)].clone();
                    }
                }
            }
        }
        gen_matrices.push(m);
    }
    let module = ExplicitModule {
        label: format!(
            "D{n} split {lam} ({})",
            if symmetric_cell { "sym" } else { "alt" }
        ),
        gen_matrices,
    };
    module.validate(&coxeter_matrix(GroupTag::D, n))?;
    Ok(module)
}

/// Both split halves of `V_{{lam,lam}}`, labeled so that `V^+` is the half
/// whose restriction to `P^+_{2λ*}` (the untwisted `S`-blocks of sizes
/// `2λ*`) contains the sign representation — the criterion that also drives
/// the recovery algorithm.
pub fn build_dn_split_pair(lam: &Partition) -> Result<(ExplicitModule, ExplicitModule)> {
    let n = 2 * lam.size() as usize;
    let a = build_dn_split_half(lam, true)?;
    let b = build_dn_split_half(lam, false)?;
    let group = enumerate_group(GroupTag::D, n)?;
    let probe_parts: Vec<u32> = lam.conjugate().parts().iter().map(|&x| 2 * x).collect();
    let gens = parabolic_d_reflections(n, DnParabolicKind::Plus, &probe_parts, 0)?;
    let subgroup = enumerate_subgroup(&group, &gens)?;
    let mult_a = sign_mult_over(&group, &a.character(&group), &subgroup)?;
    let mult_b = sign_mult_over(&group, &b.character(&group), &subgroup)?;
    if mult_a > mult_b {
        Ok((a, b))
    } else if mult_b > mult_a {
        Ok((b, a))
    } else {
        Err(Error::Inconsistent(format!(
            "split halves of {lam} are not separated by the P^+ probe"
        )))
    }
}

/// Builds any irreducible `D_n` module.
pub fn build_dn_irrep(label: &DnIrrepLabel) -> Result<ExplicitModule> {
    match label {
        DnIrrepLabel::NonSplit(lam, mu) => build_dn_nonsplit(lam, mu),
        DnIrrepLabel::Split(lam, plus) => {
            let (p, m) = build_dn_split_pair(lam)?;
            Ok(if *plus { p } else { m })
        }
    }
}

// ---------------------------------------------------------------------------
// Parabolic subgroup generator sets.
// ---------------------------------------------------------------------------

/// Reflections generating the generalized parabolic
/// `S_{a_1} x ... x S_{a_k} x B_{b_1} x ... x B_{b_l}` of `B_n` (or of `S_n`
/// when `b_parts` is empty), on consecutive blocks.
pub fn parabolic_b_reflections(
    n: usize,
    a_parts: &[u32],
    b_parts: &[u32],
) -> Result<Vec<SignedPermutation>> {
    let total: u32 = a_parts.iter().chain(b_parts).sum();
    if total as usize != n || a_parts.contains(&0) || b_parts.contains(&0) {
        return Err(Error::InvalidLabel(format!(
            "parabolic parts {a_parts:?}|{b_parts:?} do not fit rank {n}"
        )));
    }
    let mut gens = Vec::new();
    let mut offset = 0usize;
    for &p in a_parts {
        for j in 0..p as usize - 1 {
            gens.push(SignedPermutation::transposition(n, offset + j, offset + j + 1));
        }
        offset += p as usize;
    }
    for &p in b_parts {
        for j in 0..p as usize - 1 {
            gens.push(SignedPermutation::transposition(n, offset + j, offset + j + 1));
        }
        gens.push(SignedPermutation::flip(n, offset + p as usize - 1));
        offset += p as usize;
    }
    Ok(gens)
}

/// The three kinds of parabolic subgroups of `D_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DnParabolicKind {
    Plus,
    Minus,
    Bar,
}

/// Reflections generating a parabolic subgroup of `D_n`.
///
/// `Plus` and `Minus` take `a_parts` summing to `n`; the last block of
/// `Minus` is twisted through `t_n` and must have size at least 2. `Bar`
/// takes `a_parts` plus a trailing `D_{d_part}` block with `d_part >= 2`.
pub fn parabolic_d_reflections(
    n: usize,
    kind: DnParabolicKind,
    a_parts: &[u32],
    d_part: u32,
) -> Result<Vec<SignedPermutation>> {
    let total: u32 = a_parts.iter().sum::<u32>() + d_part;
    if total as usize != n || a_parts.contains(&0) {
        return Err(Error::InvalidLabel(format!(
            "parabolic parts {a_parts:?} + D{d_part} do not fit rank {n}"
        )));
    }
    match kind {
        DnParabolicKind::Plus | DnParabolicKind::Minus => {
            if d_part != 0 {
                return Err(Error::InvalidLabel("non-Bar parabolic with a D part".into()));
            }
            if kind == DnParabolicKind::Minus && a_parts.last().is_none_or(|&p| p < 2) {
                return Err(Error::InvalidLabel(
                    "Minus parabolic needs a last block of size >= 2".into(),
                ));
            }
        }
        DnParabolicKind::Bar => {
            if d_part < 2 {
                return Err(Error::InvalidLabel(format!(
                    "Bar parabolic needs a D block of size >= 2, got {d_part}"
                )));
            }
        }
    }
    let mut gens = Vec::new();
    let mut offset = 0usize;
    let blocks = a_parts.len();
    for (bi, &p) in a_parts.iter().enumerate() {
        let twisted = kind == DnParabolicKind::Minus && bi + 1 == blocks;
        let pairs = p as usize - 1;
        for j in 0..pairs {
            if twisted && j + 1 == pairs {
                // The last generator of the last block is t_n instead of
                // t_{n-1}: the reflection in e_{n-1} + e_n.
                gens.push(SignedPermutation::negated_transposition(
                    n,
                    offset + j,
                    offset + j + 1,
                ));
            } else {
                gens.push(SignedPermutation::transposition(n, offset + j, offset + j + 1));
            }
        }
        offset += p as usize;
    }
    if kind == DnParabolicKind::Bar {
        for j in 0..d_part as usize - 1 {
            gens.push(SignedPermutation::transposition(n, offset + j, offset + j + 1));
        }
        gens.push(SignedPermutation::negated_transposition(n, n - 2, n - 1));
    }
    Ok(gens)
}

// ---------------------------------------------------------------------------
// Averaging.
// ---------------------------------------------------------------------------

/// Enumerates the subgroup generated by `gens` inside an enumerated group;
/// returns element indices.
pub fn enumerate_subgroup(group: &GroupData, gens: &[SignedPermutation]) -> Result<Vec<usize>> {
    let id = SignedPermutation::identity(group.n);
    let start = group
        .index_of(&id)
        .ok_or_else(|| Error::Inconsistent("identity missing from group".into()))?;
    let mut seen = vec![false; group.order()];
    seen[start] = true;
    let mut members = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let next = group.elements[i].compose(g);
            let j = group
                .index_of(&next)
                .ok_or_else(|| Error::Inconsistent("subgroup generator leaves the group".into()))?;
            if !seen[j] {
                if members.len() >= GROUP_ENUM_CAP {
                    return Err(Error::CapExceeded("subgroup enumeration cap".into()));
                }
                seen[j] = true;
                members.push(j);
                queue.push_back(j);
            }
        }
    }
    Ok(members)
}

/// `(1/|H|) Σ_{h∈H} det(h) χ(h)` for a character given per conjugacy class
/// of the ambient group. Errors unless the average is a non-negative integer.
pub fn sign_mult_over(group: &GroupData, chars: &[Rat], subgroup: &[usize]) -> Result<BigInt> {
    let mut total = Rat::zero();
    for &i in subgroup {
        let value = &chars[group.class_of[i]];
        if group.elements[i].det() == 1 {
            total += value;
        } else {
            total -= value;
        }
    }
    let avg = total / rat(subgroup.len() as i64);
    if !avg.is_integer() || avg.is_negative() {
        return Err(Error::Inconsistent(format!(
            "sign multiplicity average {avg} is not a non-negative integer"
        )));
    }
    Ok(avg.to_integer())
}

/// Multiplicity of the sign representation of the subgroup generated by
/// `gens` in the module, by direct averaging.
pub fn oracle_sign_mult(
    group: &GroupData,
    module: &ExplicitModule,
    gens: &[SignedPermutation],
) -> Result<BigInt> {
    let subgroup = enumerate_subgroup(group, gens)?;
    sign_mult_over(group, &module.character(group), &subgroup)
}

/// Same, for a precomputed per-class character.
pub fn oracle_sign_mult_chars(
    group: &GroupData,
    chars: &[Rat],
    gens: &[SignedPermutation],
) -> Result<BigInt> {
    let subgroup = enumerate_subgroup(group, gens)?;
    sign_mult_over(group, chars, &subgroup)
}
