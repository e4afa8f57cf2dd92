//! Exceptional root systems, additively closed root subsystems, exact
//! character tables, and extended sign signatures.
//!
//! Roots live in simple-root coordinates with the symmetrized Cartan form,
//! so every reflection is an integer matrix and the whole Weyl group
//! enumerates exactly. The character table is computed by splitting the
//! class algebra over the rationals (Weyl group characters are integral, so
//! no modular arithmetic is needed), and irreducibles are labeled by
//! dimension and fake degree.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ratmat::{rat, Rat, RatMat};

/// Integer vector in simple-root coordinates.
pub type Root = Vec<i64>;
/// Integer matrix acting on root coordinates, stored row-major.
type Mat = Vec<i64>;

/// A crystallographic root system with its fully enumerated Weyl group.
pub struct RootSystem {
    pub name: &'static str,
    pub rank: usize,
    /// Symmetrized Cartan form: `(u,v) = u^T form v`.
    pub form: Vec<Vec<i64>>,
    pub roots: Vec<Root>,
    /// Weyl group elements as matrices on root coordinates.
    pub elements: Vec<Mat>,
    index: HashMap<Mat, usize>,
    pub class_of: Vec<usize>,
    pub class_reps: Vec<usize>,
    pub class_sizes: Vec<usize>,
    /// One word in the simple reflections per element.
    pub words: Vec<Vec<usize>>,
}

fn mat_mul(rank: usize, a: &Mat, b: &Mat) -> Mat {
    let mut out = vec![0i64; rank * rank];
    for r in 0..rank {
        for k in 0..rank {
            let v = a[r * rank + k];
            if v == 0 {
                continue;
            }
            for c in 0..rank {
                out[r * rank + c] += v * b[k * rank + c];
            }
        }
    }
    out
}

fn mat_apply(rank: usize, m: &Mat, v: &Root) -> Root {
    (0..rank)
        .map(|r| (0..rank).map(|c| m[r * rank + c] * v[c]).sum())
        .collect()
}

fn mat_identity(rank: usize) -> Mat {
    let mut m = vec![0i64; rank * rank];
    for i in 0..rank {
        m[i * rank + i] = 1;
    }
    m
}

fn det_i64(rank: usize, m: &Mat) -> i64 {
    // Fraction-free elimination on a copy scaled to rationals is overkill;
    // use the RatMat determinant.
    let rm = RatMat::from_fn(rank, rank, |r, c| rat(m[r * rank + c]));
    let d = rm.det();
    debug_assert!(d.is_integer());
    d.to_integer().try_into().unwrap_or_else(|_| {
        i64::try_from(d.to_integer() % BigInt::from(i64::MAX)).expect("small determinant")
    })
}

impl RootSystem {
    fn build(name: &'static str, form: Vec<Vec<i64>>) -> Result<Self> {
        let rank = form.len();
        let inner = |u: &Root, v: &Root| -> i64 {
            let mut s = 0;
            for i in 0..rank {
                for j in 0..rank {
                    s += u[i] * form[i][j] * v[j];
                }
            }
            s
        };
        // Simple reflections on root coordinates.
        let mut simples = Vec::new();
        for i in 0..rank {
            let mut m = mat_identity(rank);
            let alpha: Root = (0..rank).map(|j| i64::from(j == i)).collect();
            let norm = inner(&alpha, &alpha);
            for j in 0..rank {
                let e: Root = (0..rank).map(|c| i64::from(c == j)).collect();
                let c = 2 * inner(&alpha, &e) / norm;
                m[i * rank + j] -= c;
            }
            simples.push(m);
        }
        // Roots: orbit of the simple roots.
        let mut roots: Vec<Root> = Vec::new();
        let mut seen: HashSet<Root> = HashSet::new();
        let mut queue: VecDeque<Root> = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(j == i)).collect())
            .collect();
        for r in &queue {
            seen.insert(r.clone());
        }
        while let Some(r) = queue.pop_front() {
            roots.push(r.clone());
            for s in &simples {
                let img = mat_apply(rank, s, &r);
                if seen.insert(img.clone()) {
                    queue.push_back(img);
                }
            }
            let neg: Root = r.iter().map(|x| -x).collect();
            if seen.insert(neg.clone()) {
                queue.push_back(neg);
            }
        }
        roots.sort();

        // Full group enumeration with words.
        let id = mat_identity(rank);
        let mut elements = vec![id.clone()];
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut index = HashMap::new();
        index.insert(id, 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (gi, g) in simples.iter().enumerate() {
                let next = mat_mul(rank, &elements[i], g);
                if !index.contains_key(&next) {
                    let mut w = words[i].clone();
                    w.push(gi);
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                    words.push(w);
                    queue.push_back(elements.len() - 1);
                }
            }
        }

        // Conjugacy classes by generator-conjugation orbits.
        let mut class_of = vec![usize::MAX; elements.len()];
        let mut class_reps = Vec::new();
        let mut class_sizes = Vec::new();
        for start in 0..elements.len() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = class_reps.len();
            class_of[start] = id;
            let mut size = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for g in &simples {
                    // g = g^{-1} for simple reflections.
                    let conj = mat_mul(rank, &mat_mul(rank, g, &elements[i]), g);
                    let j = index[&conj];
                    if class_of[j] == usize::MAX {
                        class_of[j] = id;
                        size += 1;
                        queue.push_back(j);
                    }
                }
            }
            class_reps.push(start);
            class_sizes.push(size);
        }

        Ok(RootSystem {
            name,
            rank,
            form,
            roots,
            elements,
            index,
            class_of,
            class_reps,
            class_sizes,
            words,
        })
    }

    pub fn inner(&self, u: &Root, v: &Root) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += u[i] * self.form[i][j] * v[j];
            }
        }
        s
    }

    pub fn is_root(&self, v: &Root) -> bool {
        self.roots.binary_search(v).is_ok()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn num_classes(&self) -> usize {
        self.class_reps.len()
    }

    /// Reflection matrix for an arbitrary root.
    pub fn reflection(&self, gamma: &Root) -> Mat {
        let rank = self.rank;
        let norm = self.inner(gamma, gamma);
        let mut m = mat_identity(rank);
        for j in 0..rank {
            let e: Root = (0..rank).map(|c| i64::from(c == j)).collect();
            let c = 2 * self.inner(gamma, &e) / norm;
            for r in 0..rank {
                m[r * rank + j] -= c * gamma[r];
            }
        }
        m
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| i64::from(j == i)).collect())
            .collect()
    }

    /// The highest (long, dominant) root.
    pub fn highest_root(&self) -> Root {
        self.roots
            .iter()
            .max_by_key(|r| r.iter().sum::<i64>())
            .expect("nonempty root system")
            .clone()
    }

    fn positive_roots(&self) -> Vec<Root> {
        self.roots
            .iter()
            .filter(|r| r.iter().sum::<i64>() > 0)
            .cloned()
            .collect()
    }

    /// Short and long squared lengths (equal for simply laced systems).
    fn length_classes(&self) -> (i64, i64) {
        let mut norms: Vec<i64> = self.roots.iter().map(|r| self.inner(r, r)).collect();
        norms.sort_unstable();
        (norms[0], norms[norms.len() - 1])
    }
}

/// The G2 root system: 12 roots, group order 12.
pub fn build_g2() -> Result<RootSystem> {
    RootSystem::build("G2", vec![vec![2, -3], vec![-3, 6]])
}

/// The F4 root system: 48 roots, group order 1152.
pub fn build_f4() -> Result<RootSystem> {
    RootSystem::build(
        "F4",
        vec![
            vec![4, -2, 0, 0],
            vec![-2, 4, -2, 0],
            vec![0, -2, 2, -1],
            vec![0, 0, -1, 2],
        ],
    )
}

/// Whether a subsystem class is generated by simple-basis conjugates,
/// extended-diagram conjugates, or neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SubsystemCategory {
    Parabolic,
    PseudoParabolic,
    Neither,
}

/// One W-conjugacy class of additively closed root subsystems.
pub struct RootSubsystem {
    /// Canonical (sorted) representative root set.
    pub roots: Vec<Root>,
    pub label: String,
    pub category: SubsystemCategory,
    /// The full subgroup generated by the reflections, as element indices
    /// into the ambient Weyl group.
    pub subgroup: Vec<usize>,
}

/// Closes a symmetric root set under addition inside `rs`.
fn additive_closure(rs: &RootSystem, start: &[Root]) -> Vec<Root> {
    let mut set: HashSet<Root> = HashSet::new();
    for r in start {
        set.insert(r.clone());
        set.insert(r.iter().map(|x| -x).collect());
    }
    loop {
        let list: Vec<Root> = set.iter().cloned().collect();
        let mut grew = false;
        for i in 0..list.len() {
            for j in 0..i {
                let sum: Root = list[i].iter().zip(&list[j]).map(|(a, b)| a + b).collect();
                if rs.is_root(&sum) && !set.contains(&sum) {
                    set.insert(sum);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<Root> = set.into_iter().collect();
    out.sort();
    out
}

/// Is the (symmetric) set closed under its own reflections?
fn is_reflection_closed(rs: &RootSystem, set: &[Root]) -> bool {
    let lookup: HashSet<&Root> = set.iter().collect();
    for g in set {
        let m = rs.reflection(g);
        for r in set {
            let img = mat_apply(rs.rank, &m, r);
            if !lookup.contains(&img) {
                return false;
            }
        }
    }
    true
}

/// Closes a root set under reflections (the root set of the generated
/// reflection subgroup).
fn reflection_closure(rs: &RootSystem, start: &[Root]) -> Vec<Root> {
    let mut set: HashSet<Root> = HashSet::new();
    for r in start {
        set.insert(r.clone());
        set.insert(r.iter().map(|x| -x).collect());
    }
    loop {
        let list: Vec<Root> = set.iter().cloned().collect();
        let mut grew = false;
        for g in &list {
            let m = rs.reflection(g);
            for r in &list {
                let img = mat_apply(rs.rank, &m, r);
                if !set.contains(&img) {
                    set.insert(img);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<Root> = set.into_iter().collect();
    out.sort();
    out
}

fn conjugate_set(rs: &RootSystem, w: &Mat, set: &[Root]) -> Vec<Root> {
    let mut out: Vec<Root> = set.iter().map(|r| mat_apply(rs.rank, w, r)).collect();
    out.sort();
    out
}

/// A cheap conjugacy invariant: sorted norms plus the sorted multiset of
/// absolute pairwise inner products.
fn invariant(rs: &RootSystem, set: &[Root]) -> Vec<i64> {
    let mut v: Vec<i64> = set.iter().map(|r| rs.inner(r, r)).collect();
    v.sort_unstable();
    let mut pairs = Vec::new();
    for i in 0..set.len() {
        for j in 0..i {
            pairs.push(rs.inner(&set[i], &set[j]).abs());
        }
    }
    pairs.sort_unstable();
    v.push(-1);
    v.extend(pairs);
    v
}

fn are_conjugate(rs: &RootSystem, a: &[Root], b: &[Root]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    rs.elements.iter().any(|w| conjugate_set(rs, w, a) == b)
}

/// Classification label of one irreducible component.
fn component_label(rs: &RootSystem, comp: &[Root]) -> Result<(String, bool)> {
    // Returns the label and whether the component contains short roots.
    let (short, long) = rs.length_classes();
    let ratio = if short == long { 1 } else { long / short };
    let count = comp.len();
    let norms: Vec<i64> = comp.iter().map(|r| rs.inner(r, r)).collect();
    let n_short = norms.iter().filter(|&&n| n == short).count();
    let all_short = n_short == count && ratio != 1;
    let has_short = n_short > 0 && ratio != 1;
    let rank = {
        let m = RatMat::from_fn(count, rs.rank, |r, c| rat(comp[r][c]));
        m.rank()
    };
    let sup = |base: &str| -> String {
        if all_short {
            format!("{base}^{ratio}")
        } else {
            base.to_string()
        }
    };
    let label = match (rank, count) {
        (1, 2) => format!("{}_1", sup("A")),
        (2, 6) => format!("{}_2", sup("A")),
        (2, 8) => "B_2".to_string(),
        (2, 12) => "G_2".to_string(),
        (3, 12) => format!("{}_3", sup("A")),
        (3, 18) => {
            // B_3 has twelve long roots, C_3 six.
            if norms.iter().filter(|&&n| n == long).count() == 12 {
                "B_3".to_string()
            } else {
                "C_3".to_string()
            }
        }
        (4, 20) => format!("{}_4", sup("A")),
        (4, 24) => format!("{}_4", sup("D")),
        (4, 32) => "B_4".to_string(),
        (4, 48) => "F_4".to_string(),
        _ => {
            return Err(Error::Inconsistent(format!(
                "unrecognized component: rank {rank}, {count} roots"
            )))
        }
    };
    Ok((label, has_short))
}

/// Full classification label: components sorted with short-rooted parts
/// first, identical labels merged with a multiplicity prefix.
fn classify(rs: &RootSystem, set: &[Root]) -> Result<String> {
    if set.is_empty() {
        return Ok("0".to_string());
    }
    // Components under the non-orthogonality relation.
    let mut assigned = vec![usize::MAX; set.len()];
    let mut next = 0;
    for i in 0..set.len() {
        if assigned[i] != usize::MAX {
            continue;
        }
        assigned[i] = next;
        let mut queue = VecDeque::from([i]);
        while let Some(a) = queue.pop_front() {
            for b in 0..set.len() {
                if assigned[b] == usize::MAX && rs.inner(&set[a], &set[b]) != 0 {
                    assigned[b] = next;
                    queue.push_back(b);
                }
            }
        }
        next += 1;
    }
    let mut labels: Vec<(String, bool, usize)> = Vec::new();
    for comp_id in 0..next {
        let comp: Vec<Root> = set
            .iter()
            .zip(&assigned)
            .filter(|(_, &a)| a == comp_id)
            .map(|(r, _)| r.clone())
            .collect();
        let size = comp.len();
        let (label, has_short) = component_label(rs, &comp)?;
        labels.push((label, has_short, size));
    }
    // Short-rooted components first, then by size descending, then name.
    labels.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then(b.2.cmp(&a.2))
            .then(a.0.cmp(&b.0))
    });
    let mut merged: Vec<(String, usize)> = Vec::new();
    for (label, _, _) in labels {
        match merged.last_mut() {
            Some((l, c)) if *l == label => *c += 1,
            _ => merged.push((label, 1)),
        }
    }
    Ok(merged
        .into_iter()
        .map(|(l, c)| if c == 1 { l } else { format!("{c}{l}") })
        .collect::<Vec<_>>()
        .join("+"))
}

fn subgroup_of(rs: &RootSystem, set: &[Root]) -> Result<Vec<usize>> {
    let gens: Vec<usize> = set
        .iter()
        .map(|g| {
            rs.index
                .get(&rs.reflection(g))
                .copied()
                .ok_or_else(|| Error::Inconsistent("reflection missing from group".into()))
        })
        .collect::<Result<_>>()?;
    let mut seen = vec![false; rs.order()];
    seen[0] = true;
    let mut members = vec![0usize];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for &g in &gens {
            let next = mat_mul(rs.rank, &rs.elements[i], &rs.elements[g]);
            let j = rs.index[&next];
            if !seen[j] {
                seen[j] = true;
                members.push(j);
                queue.push_back(j);
            }
        }
    }
    Ok(members)
}

/// Enumerates every additively closed root subsystem up to W-conjugacy,
/// flagged parabolic / pseudo-parabolic / neither.
pub fn enumerate_closed_subsystems(rs: &RootSystem) -> Result<Vec<RootSubsystem>> {
    let positives = rs.positive_roots();
    // Distinct closures of subsets of positive roots of size <= rank.
    let mut closures: HashSet<Vec<Root>> = HashSet::new();
    let n = positives.len();
    let mut stack: Vec<usize> = Vec::new();
    fn subsets(
        start: usize,
        n: usize,
        max: usize,
        stack: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        f(stack);
        if stack.len() == max {
            return;
        }
        for i in start..n {
            stack.push(i);
            subsets(i + 1, n, max, stack, f);
            stack.pop();
        }
    }
    {
        let mut visit = |idx: &[usize]| {
            let set: Vec<Root> = idx.iter().map(|&i| positives[i].clone()).collect();
            let closed = additive_closure(rs, &set);
            if is_reflection_closed(rs, &closed) {
                closures.insert(closed);
            }
        };
        subsets(0, n, rs.rank, &mut stack, &mut visit);
    }

    // Group into conjugacy classes.
    let mut classes: Vec<(Vec<Root>, Vec<i64>)> = Vec::new();
    let mut sorted: Vec<Vec<Root>> = closures.into_iter().collect();
    sorted.sort();
    for set in sorted {
        let inv = invariant(rs, &set);
        let known = classes
            .iter()
            .any(|(rep, rinv)| *rinv == inv && are_conjugate(rs, &set, rep));
        if !known {
            classes.push((set, inv));
        }
    }

    // Parabolic and pseudo-parabolic reference classes.
    let simples = rs.simple_roots();
    let mut extended = simples.clone();
    extended.push(rs.highest_root().iter().map(|x| -x).collect());
    let reference = |basis: &[Root]| -> Vec<Vec<Root>> {
        let k = basis.len();
        let mut out = Vec::new();
        for bits in 0u32..(1 << k) {
            let sub: Vec<Root> = (0..k)
                .filter(|i| bits & (1 << i) != 0)
                .map(|i| basis[i].clone())
                .collect();
            out.push(reflection_closure(rs, &sub));
        }
        out
    };
    let parabolic_sets = reference(&simples);
    let pseudo_sets = reference(&extended);

    let mut out = Vec::new();
    for (set, inv) in classes {
        let matches = |candidates: &[Vec<Root>]| -> bool {
            candidates
                .iter()
                .any(|c| invariant(rs, c) == inv && are_conjugate(rs, &set, c))
        };
        let category = if matches(&parabolic_sets) {
            SubsystemCategory::Parabolic
        } else if matches(&pseudo_sets) {
            SubsystemCategory::PseudoParabolic
        } else {
            SubsystemCategory::Neither
        };
        let label = classify(rs, &set)?;
        let subgroup = subgroup_of(rs, &set)?;
        out.push(RootSubsystem {
            roots: set,
            label,
            category,
            subgroup,
        });
    }
    // Deterministic order: category, then subgroup size, then root count,
    // then label.
    out.sort_by(|a, b| {
        a.category
            .cmp(&b.category)
            .then(a.subgroup.len().cmp(&b.subgroup.len()))
            .then(a.roots.len().cmp(&b.roots.len()))
            .then(a.label.cmp(&b.label))
    });
    Ok(out)
}

/// An irreducible character with its φ-label data.
pub struct LabeledCharacter {
    /// φ_{dim, fake degree} with an optional prime decoration.
    pub label: String,
    pub dim: BigInt,
    pub b_invariant: usize,
    /// Value on each conjugacy class.
    pub values: Vec<BigInt>,
}

/// The exact character table, labeled `φ_{a,b}`; primes on equal `(a,b)`
/// pairs are fixed by the value at the short-root reflection class
/// (`φ'` has character `-1` at the long reflection, `φ''` at the short).
pub fn character_table(rs: &RootSystem) -> Result<Vec<LabeledCharacter>> {
    let k = rs.num_classes();
    // Structure constants: action of class sum j on class sums.
    let rep_of = |c: usize| &rs.elements[rs.class_reps[c]];
    let members: Vec<Vec<usize>> = {
        let mut m = vec![Vec::new(); k];
        for (i, &c) in rs.class_of.iter().enumerate() {
            m[c].push(i);
        }
        m
    };
    let inverse_index: Vec<usize> = (0..rs.order())
        .map(|i| {
            // Finite order: the inverse is the last power before the cycle
            // returns to the identity.
            let m = &rs.elements[i];
            let mut inv = mat_identity(rs.rank);
            let mut cur = m.clone();
            while cur != mat_identity(rs.rank) {
                inv = cur.clone();
                cur = mat_mul(rs.rank, &cur, m);
            }
            rs.index[&inv]
        })
        .collect();
    let mut class_mats: Vec<RatMat> = Vec::new();
    for j in 0..k {
        let mut m = RatMat::zero(k, k);
        for l in 0..k {
            // a_{jkl} = #{x in C_j : x^{-1} z in C_k} for z the class-l
            // representative.
            let mut counts = vec![0i64; k];
            for &x in &members[j] {
                let xi = inverse_index[x];
                let prod = mat_mul(rs.rank, &rs.elements[xi], rep_of(l));
                counts[rs.class_of[rs.index[&prod]]] += 1;
            }
            for (kk, &c) in counts.iter().enumerate() {
                if c != 0 {
                    m[(l, kk)] = rat(c);
                }
            }
        }
        class_mats.push(m);
    }

    // Split ℚ^k into common eigenvectors of the class-sum action.
    let mut subspaces: Vec<RatMat> = vec![RatMat::identity(k)];
    let starts = [1usize, 2, 3];
    let mut progress = true;
    while progress && subspaces.iter().any(|s| s.cols() > 1) {
        progress = false;
        for j in 0..k {
            let mut next_spaces = Vec::new();
            for s in &subspaces {
                let d = s.cols();
                if d == 1 {
                    next_spaces.push(s.clone());
                    continue;
                }
                let t = restrict(&class_mats[j], s)?;
                let bound = rs.class_sizes[j] as i64;
                let eigenvalues = integer_eigenvalues(&t, bound, &starts);
                if eigenvalues.len() <= 1 {
                    next_spaces.push(s.clone());
                    continue;
                }
                let mut recovered = 0;
                for lam in &eigenvalues {
                    let mut shifted = t.clone();
                    for i in 0..d {
                        shifted[(i, i)] = &shifted[(i, i)] - &rat(*lam);
                    }
                    let null = shifted.null_space();
                    if null.is_empty() {
                        continue;
                    }
                    recovered += null.len();
                    let basis = RatMat::from_fn(d, null.len(), |r, c| null[c][r].clone());
                    next_spaces.push(s * &basis);
                    progress = true;
                }
                if recovered < d {
                    // Eigenvalues missed by the probe vectors: project onto
                    // their joint complement (T is diagonalizable, so the
                    // image of the product of the found factors is the sum
                    // of the missing eigenspaces) and retry later.
                    let mut proj = RatMat::identity(d);
                    for lam in &eigenvalues {
                        let mut shifted = t.clone();
                        for i in 0..d {
                            shifted[(i, i)] = &shifted[(i, i)] - &rat(*lam);
                        }
                        proj = &proj * &shifted;
                    }
                    let image = column_space(&proj);
                    if image.cols() > 0 {
                        next_spaces.push(s * &image);
                    }
                }
            }
            subspaces = next_spaces;
        }
    }
    if subspaces.len() != k || subspaces.iter().any(|s| s.cols() != 1) {
        return Err(Error::Inconsistent(format!(
            "class algebra split into {} pieces, expected {k}",
            subspaces.len()
        )));
    }

    // Central characters from the one-dimensional pieces, then characters.
    let mut table = Vec::new();
    for s in &subspaces {
        let v: Vec<Rat> = (0..k).map(|r| s[(r, 0)].clone()).collect();
        let pivot = v
            .iter()
            .position(|x| !x.is_zero())
            .ok_or_else(|| Error::Inconsistent("zero eigenvector".into()))?;
        let mut omega = Vec::with_capacity(k);
        for m in &class_mats {
            let mv = m.mul_vec(&v);
            omega.push(&mv[pivot] / &v[pivot]);
        }
        // χ(1)^2 = |G| / Σ_j ω_j^2 / |C_j| (real characters).
        let mut denom = Rat::zero();
        for (j, w) in omega.iter().enumerate() {
            denom += w * w / rat(rs.class_sizes[j] as i64);
        }
        let dim_sq = rat(rs.order() as i64) / denom;
        let dim = int_sqrt(&dim_sq)?;
        let values: Vec<BigInt> = omega
            .iter()
            .enumerate()
            .map(|(j, w)| {
                let val = w * &(rat(0) + dim.clone()) / rat(rs.class_sizes[j] as i64);
                if !val.is_integer() {
                    return Err(Error::Inconsistent("non-integral character value".into()));
                }
                Ok(val.to_integer())
            })
            .collect::<Result<_>>()?;
        table.push((dim, values));
    }

    // Fake degrees: minimal symmetric-power degree containing the character.
    let b_invariants = fake_degrees(rs, &table)?;

    // Short and long reflection classes for prime disambiguation.
    let (short_norm, _) = rs.length_classes();
    let short_root = rs
        .roots
        .iter()
        .find(|r| rs.inner(r, r) == short_norm)
        .expect("roots exist")
        .clone();
    let short_class = rs.class_of[rs.index[&rs.reflection(&short_root)]];

    let mut by_key: BTreeMap<(BigInt, usize), Vec<usize>> = BTreeMap::new();
    for (i, ((dim, _), b)) in table.iter().zip(&b_invariants).enumerate() {
        by_key.entry((dim.clone(), *b)).or_default().push(i);
    }
    let mut labels = vec![String::new(); table.len()];
    for ((dim, b), mut idxs) in by_key {
        match idxs.len() {
            1 => labels[idxs[0]] = format!("phi_{{{dim},{b}}}"),
            2 => {
                // φ'' is the one with the smaller character value at the
                // short reflection class; reproduces the standard G2
                // assignment.
                idxs.sort_by_key(|&i| table[i].1[short_class].clone());
                labels[idxs[1]] = format!("phi_{{{dim},{b}}}'");
                labels[idxs[0]] = format!("phi_{{{dim},{b}}}''");
            }
            _ => {
                return Err(Error::Inconsistent(format!(
                    "more than two characters share (dim, b) = ({dim}, {b})"
                )))
            }
        }
    }

    let mut out: Vec<LabeledCharacter> = table
        .into_iter()
        .zip(b_invariants)
        .zip(labels)
        .map(|(((dim, values), b_invariant), label)| LabeledCharacter {
            label,
            dim,
            b_invariant,
            values,
        })
        .collect();
    out.sort_by_key(|a| (a.dim.clone(), a.b_invariant));
    Ok(out)
}

/// Restriction of `m` to the column space of `s`: solves `m s = s t`.
fn restrict(m: &RatMat, s: &RatMat) -> Result<RatMat> {
    let k = s.rows();
    let d = s.cols();
    let ms = m * s;
    // Solve the least-structured way: augment [s | ms] and eliminate.
    let mut aug = RatMat::zero(k, d + d);
    for r in 0..k {
        for c in 0..d {
            aug[(r, c)] = s[(r, c)].clone();
            aug[(r, d + c)] = ms[(r, c)].clone();
        }
    }
    // Row-reduce the first block.
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..d {
        let Some(p) = (row..k).find(|&r| !aug[(r, col)].is_zero()) else {
            return Err(Error::Inconsistent("subspace basis is singular".into()));
        };
        for c in 0..2 * d {
            let tmp = aug[(p, c)].clone();
            aug[(p, c)] = aug[(row, c)].clone();
            aug[(row, c)] = tmp;
        }
        let inv = aug[(row, col)].recip();
        for c in 0..2 * d {
            aug[(row, c)] = &aug[(row, c)] * &inv;
        }
        for r in 0..k {
            if r != row && !aug[(r, col)].is_zero() {
                let f = aug[(r, col)].clone();
                for c in 0..2 * d {
                    let v = &aug[(row, c)] * &f;
                    aug[(r, c)] = &aug[(r, c)] - &v;
                }
            }
        }
        pivots.push(row);
        row += 1;
    }
    // Consistency: rows beyond the pivots must vanish on the right block.
    for r in row..k {
        for c in 0..d {
            if !aug[(r, d + c)].is_zero() {
                return Err(Error::Inconsistent("subspace is not invariant".into()));
            }
        }
    }
    Ok(RatMat::from_fn(d, d, |r, c| aug[(r, d + c)].clone()))
}

/// Integer eigenvalues of a rational matrix known to be diagonalizable with
/// integer spectrum bounded by `bound`, probed through minimal polynomials
/// of a few start vectors.
fn integer_eigenvalues(t: &RatMat, bound: i64, starts: &[usize]) -> Vec<i64> {
    let d = t.rows();
    let mut found: Vec<i64> = Vec::new();
    for &seed in starts {
        let v0: Vec<Rat> = (0..d).map(|i| rat(((seed * (i + 1)) % 7 + 1) as i64)).collect();
        // Krylov: find the first linear dependency among v0, Tv0, ...
        let mut krylov: Vec<Vec<Rat>> = vec![v0.clone()];
        loop {
            let last = krylov.last().unwrap();
            let next = t.mul_vec(last);
            // Solve for dependency via elimination on the transpose.
            let rows = krylov.len();
            let mut m = RatMat::zero(d, rows + 1);
            for (c, vec) in krylov.iter().chain(std::iter::once(&next)).enumerate() {
                for r in 0..d {
                    m[(r, c)] = vec[r].clone();
                }
            }
            let null = m.null_space();
            if let Some(dep) = null.first() {
                // Polynomial from the dependency: Σ dep_i T^i v0 = 0.
                let coeffs: Vec<Rat> = dep.clone();
                for lam in -bound..=bound {
                    // Horner evaluation.
                    let mut acc = Rat::zero();
                    for c in coeffs.iter().rev() {
                        acc = acc * rat(lam) + c.clone();
                    }
                    if acc.is_zero() && !found.contains(&lam) {
                        found.push(lam);
                    }
                }
                break;
            }
            krylov.push(next);
            if krylov.len() > d {
                break;
            }
        }
        if found.len() == d {
            break;
        }
    }
    found.sort_unstable();
    found
}

fn column_space(m: &RatMat) -> RatMat {
    // Column-reduce to a basis of the column space.
    let t = m.transpose();
    let rows = t.rows();
    let cols = t.cols();
    let mut a = t.clone();
    let mut pivot_rows = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        for c in 0..cols {
            let tmp = a[(p, c)].clone();
            a[(p, c)] = a[(row, c)].clone();
            a[(row, c)] = tmp;
        }
        let inv = a[(row, col)].recip();
        for c in 0..cols {
            a[(row, c)] = &a[(row, c)] * &inv;
        }
        for r in 0..rows {
            if r != row && !a[(r, col)].is_zero() {
                let f = a[(r, col)].clone();
                for c in 0..cols {
                    let v = &a[(row, c)] * &f;
                    a[(r, c)] = &a[(r, c)] - &v;
                }
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    RatMat::from_fn(cols, row, |r, c| a[(c, r)].clone())
}

fn int_sqrt(x: &Rat) -> Result<BigInt> {
    if !x.is_integer() || x.is_negative() {
        return Err(Error::Inconsistent(format!("not a square: {x}")));
    }
    let n = x.to_integer();
    let r = n.sqrt();
    if &r * &r != n {
        return Err(Error::Inconsistent(format!("not a square: {n}")));
    }
    Ok(r)
}

/// Fake degrees: for each character, the minimal `d` with a nonzero inner
/// product against `S^d` of the reflection representation.
fn fake_degrees(rs: &RootSystem, table: &[(BigInt, Vec<BigInt>)]) -> Result<Vec<usize>> {
    let k = rs.num_classes();
    // Power sums p_m(g) = tr(g^m) per class, then complete homogeneous
    // symmetric functions of the eigenvalues by Newton's identity.
    let max_d = {
        // The largest fake degree is the number of positive roots.
        rs.roots.len() / 2
    };
    let mut h: Vec<Vec<Rat>> = vec![vec![Rat::zero(); max_d + 1]; k];
    for c in 0..k {
        let g = &rs.elements[rs.class_reps[c]];
        let mut powers: Vec<Rat> = Vec::with_capacity(max_d + 1);
        let mut cur = mat_identity(rs.rank);
        for _ in 0..=max_d {
            let tr: i64 = (0..rs.rank).map(|i| cur[i * rs.rank + i]).sum();
            powers.push(rat(tr));
            cur = mat_mul(rs.rank, &cur, g);
        }
        h[c][0] = rat(1);
        for d in 1..=max_d {
            let mut acc = Rat::zero();
            for m in 1..=d {
                acc += &powers[m] * &h[c][d - m];
            }
            h[c][d] = acc / rat(d as i64);
        }
    }
    let mut out = Vec::with_capacity(table.len());
    for (dim, values) in table {
        let mut b = None;
        for d in 0..=max_d {
            let mut inner = Rat::zero();
            for c in 0..k {
                inner += rat(rs.class_sizes[c] as i64)
                    * &h[c][d]
                    * (rat(0) + values[c].clone());
            }
            inner /= rat(rs.order() as i64);
            if inner.is_positive() {
                b = Some(d);
                break;
            }
        }
        out.push(b.ok_or_else(|| {
            Error::Inconsistent(format!(
                "character of dimension {dim} missing from the coinvariant algebra"
            ))
        })?);
    }
    Ok(out)
}

/// Multiplicity of the sign representation of each subsystem's reflection
/// subgroup in the given character: the averaging formula with the sign
/// realized as the reflection determinant.
pub fn extended_sign_signature(
    rs: &RootSystem,
    chi: &LabeledCharacter,
    subsystems: &[RootSubsystem],
) -> Result<Vec<BigInt>> {
    let dets: Vec<i64> = rs
        .elements
        .iter()
        .map(|m| det_i64(rs.rank, m))
        .collect();
    subsystems
        .iter()
        .map(|sub| {
            let mut total = Rat::zero();
            for &i in &sub.subgroup {
                let v = rat(0) + chi.values[rs.class_of[i]].clone();
                if dets[i] == 1 {
                    total += v;
                } else {
                    total -= v;
                }
            }
            let avg = total / rat(sub.subgroup.len() as i64);
            if !avg.is_integer() || avg.is_negative() {
                return Err(Error::Inconsistent(format!(
                    "sign multiplicity {avg} is not a non-negative integer"
                )));
            }
            Ok(avg.to_integer())
        })
        .collect()
}
