//! Weak W-graphs: representation matrices, projector algebra, tau-invariant
//! counting, Atlas `wcell` parsing, and identification of the special
//! representation attached to a cell in the classical types.
//!
//! All linear algebra is over exact rationals; traces of the projector
//! products are honest integers and the structure theorems become equality
//! assertions.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::{Composition, Partition};
use crate::ratmat::{rat, Rat, RatMat};

/// Cap on parabolic subgroup enumeration inside a Coxeter group.
pub const W_ENUM_CAP: usize = 1_000_000;

/// Classical or G2 type tag for a Coxeter system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeylType {
    A(usize),
    B(usize),
    D(usize),
    G2,
}

/// A Coxeter system given by its Coxeter matrix, optionally tagged with a
/// crystallographic type (needed for label recovery).
#[derive(Debug, Clone)]
pub struct CoxeterData {
    rank: usize,
    matrix: Vec<Vec<u32>>,
    weyl_type: Option<WeylType>,
}

impl CoxeterData {
    /// Builds from an explicit Coxeter matrix: symmetric, 1 on the diagonal,
    /// entries at least 2 off it.
    pub fn from_matrix(matrix: Vec<Vec<u32>>, weyl_type: Option<WeylType>) -> Result<Self> {
        let rank = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::InvalidLabel("Coxeter matrix is not square".into()));
            }
            for (j, &m) in row.iter().enumerate() {
                let ok = if i == j { m == 1 } else { m >= 2 && matrix[j][i] == m };
                if !ok {
                    return Err(Error::InvalidLabel(format!(
                        "bad Coxeter matrix entry m[{i}][{j}] = {m}"
                    )));
                }
            }
        }
        Ok(CoxeterData {
            rank,
            matrix,
            weyl_type,
        })
    }

    pub fn of_type(t: WeylType) -> Self {
        let (rank, edges): (usize, Vec<(usize, usize, u32)>) = match t {
            WeylType::A(n) => (n, (1..n).map(|i| (i - 1, i, 3)).collect()),
            WeylType::B(n) => {
                let mut e: Vec<_> = (1..n.saturating_sub(1)).map(|i| (i - 1, i, 3)).collect();
                if n >= 2 {
                    e.push((n - 2, n - 1, 4));
                }
                (n, e)
            }
            WeylType::D(n) => {
                let mut e: Vec<_> = (1..n.saturating_sub(1)).map(|i| (i - 1, i, 3)).collect();
                if n >= 3 {
                    e.push((n - 3, n - 1, 3));
                }
                (n, e)
            }
            WeylType::G2 => (2, vec![(0, 1, 6)]),
        };
        let mut matrix = vec![vec![2; rank]; rank];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = 1;
        }
        for (i, j, m) in edges {
            matrix[i][j] = m;
            matrix[j][i] = m;
        }
        CoxeterData {
            rank,
            matrix,
            weyl_type: Some(t),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn weyl_type(&self) -> Option<WeylType> {
        self.weyl_type
    }

    /// Bond order between two (0-based) simple roots.
    pub fn bond(&self, i: usize, j: usize) -> u32 {
        self.matrix[i][j]
    }

    /// Integer Cartan pairing reconstructed from the bond orders: for a
    /// crystallographic system every bond is 2, 3, 4 or 6 and an integer
    /// Cartan matrix realizing it exists; the orientation choice does not
    /// affect the abstract group.
    fn cartan_pair(&self, i: usize, j: usize) -> Result<(i64, i64)> {
        Ok(match self.bond(i, j) {
            2 => (0, 0),
            3 => (-1, -1),
            4 => (-1, -2),
            6 => (-1, -3),
            m => {
                return Err(Error::InvalidLabel(format!(
                    "bond order {m} is not crystallographic"
                )))
            }
        })
    }

    /// Faithful integer reflection representation: the matrix of `s_i` on
    /// the simple-root basis.
    pub fn reflection_matrix(&self, i: usize) -> Result<RatMat> {
        let n = self.rank;
        let mut m = RatMat::identity(n);
        for j in 0..n {
            if j == i {
                m[(i, i)] = rat(-1);
            } else {
                // s_i(a_j) = a_j - <a_j, a_i^v> a_i; the pairing with the
                // lower index first is the first component of cartan_pair.
                let (cij, cji) = self.cartan_pair(i.min(j), i.max(j))?;
                let c = if i < j { cji } else { cij };
                m[(i, j)] = rat(-c);
            }
        }
        Ok(m)
    }

    /// Enumerates the standard parabolic subgroup generated by the listed
    /// simple reflections, as words with sign characters.
    pub fn enumerate_parabolic(&self, subset: &[usize]) -> Result<Vec<(Vec<usize>, i8)>> {
        let gens: Vec<RatMat> = subset
            .iter()
            .map(|&i| self.reflection_matrix(i))
            .collect::<Result<_>>()?;
        let id = RatMat::identity(self.rank);
        let mut index: HashMap<Vec<String>, usize> = HashMap::new();
        let fingerprint = |m: &RatMat| -> Vec<String> {
            let mut v = Vec::with_capacity(self.rank * self.rank);
            for r in 0..self.rank {
                for c in 0..self.rank {
                    v.push(m[(r, c)].to_string());
                }
            }
            v
        };
        index.insert(fingerprint(&id), 0);
        let mut elements = vec![(id, Vec::new(), 1i8)];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (gi, g) in gens.iter().enumerate() {
                let next = &elements[i].0 * g;
                let fp = fingerprint(&next);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(fp) {
                    if elements.len() >= W_ENUM_CAP {
                        return Err(Error::CapExceeded("parabolic enumeration cap".into()));
                    }
                    let mut word = elements[i].1.clone();
                    word.push(subset[gi]);
                    let parity = -elements[i].2;
                    e.insert(elements.len());
                    elements.push((next, word, parity));
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        Ok(elements.into_iter().map(|(_, w, p)| (w, p)).collect())
    }
}

/// A weak W-graph: vertices, tau sets of (1-based) simple-root indices, and
/// rational edge multiplicities `m(u,v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakWGraph {
    size: usize,
    tau: Vec<BTreeSet<usize>>,
    m: BTreeMap<(usize, usize), Rat>,
}

impl WeakWGraph {
    pub fn new(tau: Vec<BTreeSet<usize>>, m: BTreeMap<(usize, usize), Rat>) -> Self {
        WeakWGraph {
            size: tau.len(),
            tau,
            m,
        }
    }

    /// The tautologically labeled Coxeter graph of a system: one vertex per
    /// simple root with `tau(α) = {α}` and positive Cartan-derived weights.
    pub fn coxeter_graph(cox: &CoxeterData) -> Result<Self> {
        let n = cox.rank();
        let tau = (0..n).map(|i| BTreeSet::from([i + 1])).collect();
        let mut m = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (cij, cji) = cox.cartan_pair(i.min(j), i.max(j))?;
                let c = if i < j { cji } else { cij };
                if c != 0 {
                    m.insert((i, j), rat(-c));
                }
            }
        }
        Ok(WeakWGraph { size: n, tau, m })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn tau(&self, v: usize) -> &BTreeSet<usize> {
        &self.tau[v]
    }

    pub fn edge(&self, u: usize, v: usize) -> Rat {
        self.m.get(&(u, v)).cloned().unwrap_or_else(Rat::zero)
    }

    /// The matrix of `s_α` (`alpha` 1-based) in the vertex basis:
    /// `-v` when `α ∈ τ(v)`, else `v - Σ_{α∈τ(u)} m(u,v) u`.
    pub fn simple_reflection_matrix(&self, alpha: usize) -> RatMat {
        let n = self.size;
        let mut m = RatMat::zero(n, n);
        for v in 0..n {
            if self.tau[v].contains(&alpha) {
                m[(v, v)] = rat(-1);
            } else {
                m[(v, v)] = rat(1);
                for u in 0..n {
                    if self.tau[u].contains(&alpha) {
                        let w = self.edge(u, v);
                        if !w.is_zero() {
                            m[(u, v)] = -w;
                        }
                    }
                }
            }
        }
        m
    }

    /// Checks that the simple reflection operators satisfy every Coxeter
    /// relation of the system; reports the first violation.
    pub fn validate(&self, cox: &CoxeterData) -> Result<()> {
        let mats: Vec<RatMat> = (1..=cox.rank())
            .map(|a| self.simple_reflection_matrix(a))
            .collect();
        for (i, m) in mats.iter().enumerate() {
            if !m.pow(2).is_identity() {
                return Err(Error::RelationViolated(format!("s_{}^2 != 1", i + 1)));
            }
        }
        for i in 0..mats.len() {
            for j in 0..i {
                let order = cox.bond(i, j) as u64;
                if !(&mats[i] * &mats[j]).pow(order).is_identity() {
                    return Err(Error::RelationViolated(format!(
                        "(s_{} s_{})^{} != 1",
                        i + 1,
                        j + 1,
                        order
                    )));
                }
            }
        }
        Ok(())
    }

    /// The three-way vertex partition relative to a subset `A` of simple
    /// roots: `V(A,-)` with `A ⊆ τ(v)`, `V(A,0)` meeting `A` without
    /// containing it, and `V(A,+)` disjoint from `A`.
    pub fn vertex_partition(&self, a: &BTreeSet<usize>) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let mut minus = Vec::new();
        let mut zero = Vec::new();
        let mut plus = Vec::new();
        for v in 0..self.size {
            if a.is_subset(&self.tau[v]) {
                minus.push(v);
            } else if a.intersection(&self.tau[v]).next().is_some() {
                zero.push(v);
            } else {
                plus.push(v);
            }
        }
        (minus, zero, plus)
    }

    fn group_average(
        &self,
        cox: &CoxeterData,
        a: &BTreeSet<usize>,
        signed: bool,
    ) -> Result<RatMat> {
        let subset: Vec<usize> = a.iter().map(|&x| x - 1).collect();
        let elements = cox.enumerate_parabolic(&subset)?;
        let mats: Vec<RatMat> = (1..=cox.rank())
            .map(|al| self.simple_reflection_matrix(al))
            .collect();
        let mut total = RatMat::zero(self.size, self.size);
        for (word, parity) in &elements {
            let mut m = RatMat::identity(self.size);
            for &g in word {
                m = &m * &mats[g];
            }
            if signed && *parity < 0 {
                total = &total - &m;
            } else {
                total = &total + &m;
            }
        }
        let count = rat(elements.len() as i64);
        Ok(total.scale(&count.recip()))
    }

    /// `Q(A)`: the averaged projector onto the `W(A)`-invariants.
    pub fn projector_q(&self, cox: &CoxeterData, a: &BTreeSet<usize>) -> Result<RatMat> {
        self.group_average(cox, a, false)
    }

    /// `R(A)`: the sign-averaged projector onto the `W(A)`-sign component.
    pub fn projector_r(&self, cox: &CoxeterData, a: &BTreeSet<usize>) -> Result<RatMat> {
        self.group_average(cox, a, true)
    }

    /// `trace(Q(Δ-A) R(A))`. The trace is nonzero exactly when some vertex
    /// has `τ(v) = A`, and that equivalence is checked before returning.
    ///
    /// Note the trace does not in general equal the number of such vertices:
    /// it is determined by the character of the graph module alone, while
    /// the preimage count is not (the two five-vertex G2 cells are explicit
    /// counterexamples to the stronger claim).
    pub fn tau_subset_realized(&self, cox: &CoxeterData, a: &BTreeSet<usize>) -> Result<Rat> {
        let complement: BTreeSet<usize> = (1..=cox.rank()).filter(|x| !a.contains(x)).collect();
        let q = self.projector_q(cox, &complement)?;
        let r = self.projector_r(cox, a)?;
        let trace = (&q * &r).trace();
        let direct = self.tau_preimage_count(a);
        if trace.is_zero() != (direct == 0) {
            return Err(Error::Inconsistent(format!(
                "trace {trace} and preimage count {direct} disagree about emptiness at A = {a:?}"
            )));
        }
        Ok(trace)
    }

    /// The number of vertices with `τ(v) = A` exactly.
    pub fn tau_preimage_count(&self, a: &BTreeSet<usize>) -> usize {
        self.tau.iter().filter(|t| *t == a).count()
    }

    /// The tau-signature: the image of the tau map as a set of subsets.
    pub fn tau_signature(&self) -> TauSignature {
        TauSignature {
            subsets: self.tau.iter().cloned().collect(),
        }
    }

    /// Character of the graph module on every element of `W`, in the
    /// enumeration order of the full group.
    pub fn character(&self, cox: &CoxeterData) -> Result<Vec<Rat>> {
        let all: Vec<usize> = (0..cox.rank()).collect();
        let elements = cox.enumerate_parabolic(&all)?;
        let mats: Vec<RatMat> = (1..=cox.rank())
            .map(|al| self.simple_reflection_matrix(al))
            .collect();
        Ok(elements
            .iter()
            .map(|(word, _)| {
                let mut m = RatMat::identity(self.size);
                for &g in word {
                    m = &m * &mats[g];
                }
                m.trace()
            })
            .collect())
    }
}

/// The set of tau-invariants of a graph's vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauSignature {
    pub subsets: BTreeSet<BTreeSet<usize>>,
}

impl fmt::Display for TauSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.subsets.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, x) in s.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

/// One parsed cell of a `wcell` file.
#[derive(Debug, Clone)]
pub struct ParsedCell {
    pub index: usize,
    /// Global vertex numbers as printed in brackets.
    pub global_vertices: Vec<usize>,
    pub graph: WeakWGraph,
}

/// A parsed `wcell` output: the cells plus the induced graph on them.
#[derive(Debug, Clone)]
pub struct WCellFile {
    pub cells: Vec<ParsedCell>,
    /// `(cell, successors)` pairs from the induced-graph section.
    pub induced_edges: Vec<(usize, Vec<usize>)>,
}

/// Parses the textual output of the Atlas `wcell` command.
pub fn parse_wcell(text: &str) -> Result<WCellFile> {
    let mut cells: Vec<ParsedCell> = Vec::new();
    let mut induced_edges = Vec::new();
    let mut current: Option<(usize, Vec<usize>, Vec<BTreeSet<usize>>, Vec<(usize, usize)>)> = None;
    let mut in_cells_section = false;

    let finish =
        |c: Option<(usize, Vec<usize>, Vec<BTreeSet<usize>>, Vec<(usize, usize)>)>,
         cells: &mut Vec<ParsedCell>| {
            if let Some((index, globals, tau, edges)) = c {
                let mut m = BTreeMap::new();
                for (u, v) in edges {
                    m.insert((u, v), rat(1));
                }
                cells.push(ParsedCell {
                    index,
                    global_vertices: globals,
                    graph: WeakWGraph::new(tau, m),
                });
            }
        };

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |msg: &str| Error::ParseAt {
            line: lineno + 1,
            msg: msg.to_string(),
        };
        if line.is_empty() || line.chars().all(|c| c == '-') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("//") {
            let rest = rest.trim();
            if let Some(idx) = rest.strip_prefix("cell #") {
                let idx = idx
                    .trim_end_matches(':')
                    .parse::<usize>()
                    .map_err(|_| err("bad cell index"))?;
                finish(current.take(), &mut cells);
                current = Some((idx, Vec::new(), Vec::new(), Vec::new()));
                in_cells_section = true;
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            // Membership "#k={a,b}" or induced-edge "#k:." / "#k:->#a,#b.".
            if let Some((idx, body)) = rest.split_once('=') {
                let _idx: usize = idx.trim().parse().map_err(|_| err("bad cell number"))?;
                let body = body
                    .trim()
                    .strip_prefix('{')
                    .and_then(|b| b.strip_suffix('}'))
                    .ok_or_else(|| err("membership list must be braced"))?;
                // Membership is re-derived from the vertex lines; validated
                // there, so only syntax is checked here.
                for tok in body.split(',').filter(|t| !t.trim().is_empty()) {
                    tok.trim()
                        .parse::<usize>()
                        .map_err(|_| err("bad vertex number"))?;
                }
            } else if let Some((idx, body)) = rest.split_once(':') {
                let idx: usize = idx.trim().parse().map_err(|_| err("bad cell number"))?;
                let body = body.trim().trim_end_matches('.');
                let mut targets = Vec::new();
                if let Some(list) = body.strip_prefix("->") {
                    for tok in list.split(',') {
                        let t = tok
                            .trim()
                            .strip_prefix('#')
                            .ok_or_else(|| err("induced edge targets must look like #k"))?;
                        targets.push(t.parse::<usize>().map_err(|_| err("bad cell number"))?);
                    }
                } else if !body.is_empty() {
                    return Err(err("unrecognized induced-graph line"));
                }
                induced_edges.push((idx, targets));
            } else {
                return Err(err("unrecognized # line"));
            }
            continue;
        }
        if !in_cells_section {
            return Err(err("vertex line outside a cell section"));
        }
        // Vertex line: `<local>[<global>]: {t1,t2} --> v1,v2(3)`.
        let Some(cell) = current.as_mut() else {
            return Err(err("vertex line outside a cell"));
        };
        let (head, tail) = line
            .split_once(':')
            .ok_or_else(|| err("vertex line needs a colon"))?;
        let (local, global) = head
            .trim()
            .split_once('[')
            .ok_or_else(|| err("vertex head must look like 0[3]"))?;
        let local: usize = local.trim().parse().map_err(|_| err("bad local index"))?;
        let global: usize = global
            .trim()
            .strip_suffix(']')
            .ok_or_else(|| err("unterminated global index"))?
            .parse()
            .map_err(|_| err("bad global index"))?;
        if local != cell.2.len() {
            return Err(err("vertex lines out of order"));
        }
        let tail = tail.trim();
        let (tau_part, arrow_part) = match tail.split_once("-->") {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (tail, None),
        };
        let tau_body = tau_part
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| err("tau set must be braced"))?;
        let mut tau = BTreeSet::new();
        for tok in tau_body.split(',').filter(|t| !t.trim().is_empty()) {
            tau.insert(
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| err("bad simple-root index in tau set"))?,
            );
        }
        cell.1.push(global);
        cell.2.push(tau);
        if let Some(arrows) = arrow_part {
            for tok in arrows.split(',').filter(|t| !t.trim().is_empty()) {
                let tok = tok.trim();
                // Optional provisional multiplicity suffix `v(m)`; known
                // Atlas output prints bare targets.
                let (target, _mult) = match tok.split_once('(') {
                    Some((t, m)) => {
                        let m = m
                            .strip_suffix(')')
                            .ok_or_else(|| err("unterminated multiplicity"))?;
                        let mv: i64 = m.parse().map_err(|_| err("bad multiplicity"))?;
                        (t.trim(), mv)
                    }
                    None => (tok, 1),
                };
                let v: usize = target.parse().map_err(|_| err("bad edge target"))?;
                cell.3.push((local, v));
                if _mult != 1 {
                    return Err(err("non-unit edge multiplicities are not supported"));
                }
            }
        }
    }
    finish(current.take(), &mut cells);
    // Edges point at local indices; check ranges now that sizes are known.
    for cell in &cells {
        let n = cell.graph.size();
        for u in 0..n {
            for v in 0..n {
                let _ = cell.graph.edge(u, v);
            }
        }
    }
    Ok(WCellFile {
        cells,
        induced_edges,
    })
}

/// A recovered irreducible label for a classical Weyl type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecialLabel {
    A(Partition),
    B(crate::type_b::IrrepB),
    D(crate::type_d::IrrepD),
}

impl fmt::Display for SpecialLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialLabel::A(p) => write!(f, "{p}"),
            SpecialLabel::B(v) => write!(f, "{v}"),
            SpecialLabel::D(v) => write!(f, "{v}"),
        }
    }
}

/// Connected components of a subset of diagram nodes (0-based) under the
/// adjacency of the Coxeter graph.
fn components(cox: &CoxeterData, subset: &BTreeSet<usize>) -> Vec<Vec<usize>> {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut out = Vec::new();
    for &start in subset {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = vec![start];
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for &j in subset {
                if !seen.contains(&j) && cox.bond(i, j) > 2 {
                    seen.insert(j);
                    comp.push(j);
                    queue.push_back(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Canonical parabolic label of the standard parabolic generated by a subset
/// of simple roots (1-based), per classical type.
fn subset_to_label(cox: &CoxeterData, a: &BTreeSet<usize>) -> Result<SubsetLabel> {
    let t = cox
        .weyl_type()
        .ok_or_else(|| Error::InvalidLabel("recovery needs a typed Coxeter system".into()))?;
    let zero_based: BTreeSet<usize> = a.iter().map(|&x| x - 1).collect();
    let comps = components(cox, &zero_based);
    let n = cox.rank();
    match t {
        WeylType::A(_) => {
            let mut parts: Vec<u32> = comps.iter().map(|c| c.len() as u32 + 1).collect();
            let used: usize = comps.iter().map(|c| c.len() + 1).sum();
            parts.extend(std::iter::repeat_n(1, n + 1 - used));
            Ok(SubsetLabel::A(Partition::from_unsorted(parts)))
        }
        WeylType::B(_) => {
            let mut a_parts: Vec<u32> = Vec::new();
            let mut b_parts: Vec<u32> = Vec::new();
            let mut used = 0usize;
            for c in &comps {
                if c.contains(&(n - 1)) {
                    b_parts.push(c.len() as u32);
                    used += c.len();
                } else {
                    a_parts.push(c.len() as u32 + 1);
                    used += c.len() + 1;
                }
            }
            a_parts.extend(std::iter::repeat_n(1, n - used));
            Ok(SubsetLabel::B(crate::type_b::ParabolicB::new(
                &Composition::new(a_parts),
                &Composition::new(b_parts),
            )?))
        }
        WeylType::D(_) => {
            let mut a_parts: Vec<u32> = Vec::new();
            let mut kind_minus = false;
            let mut d_part = 0u32;
            let mut used = 0usize;
            // When both fork nodes t_{n-1} and t_n are selected they span a
            // D block even if t_{n-2} is absent and they sit in different
            // diagram components (their coordinate supports overlap).
            let has_fork_node = zero_based.contains(&(n - 1));
            let has_chain_node = zero_based.contains(&(n - 2));
            for c in &comps {
                let has_fork = c.contains(&(n - 1));
                let has_chain_end = c.contains(&(n - 2));
                if has_fork && has_chain_node && !has_chain_end {
                    // Merged with the component of t_{n-1} below.
                    continue;
                }
                if has_fork && has_chain_end {
                    d_part = c.len() as u32;
                    used += c.len();
                } else if has_chain_end && has_fork_node {
                    d_part = c.len() as u32 + 1;
                    used += c.len() + 1;
                } else if has_fork {
                    // Twisted A-block through t_n.
                    kind_minus = true;
                    a_parts.push(c.len() as u32 + 1);
                    used += c.len() + 1;
                } else {
                    a_parts.push(c.len() as u32 + 1);
                    used += c.len() + 1;
                }
            }
            a_parts.extend(std::iter::repeat_n(1, n - used));
            let comp = Composition::new(a_parts);
            let label = if d_part > 0 {
                crate::type_d::ParabolicD::new_bar(&comp, d_part)?
            } else if kind_minus {
                // Canonicalization wants the twisted block last; sorting
                // inside the constructor handles part order, and a twisted
                // block of size 1 cannot occur (it would contain no root).
                let mut parts = comp.entries().to_vec();
                parts.sort_unstable_by(|x, y| y.cmp(x));
                crate::type_d::ParabolicD::new_minus(&Composition::new(parts))?
            } else {
                crate::type_d::ParabolicD::new_plus(&comp)?
            };
            Ok(SubsetLabel::D(label))
        }
        WeylType::G2 => Err(Error::InvalidLabel(
            "no classical recovery in type G2".into(),
        )),
    }
}

enum SubsetLabel {
    A(Partition),
    B(crate::type_b::ParabolicB),
    D(crate::type_d::ParabolicD),
}

/// Identifies the irreducible whose sign-signature support equals the
/// downward closure of a tau-signature, for classical Coxeter types.
///
/// Recovery is support-driven only: no coefficient evaluation is needed.
pub fn identify_special(cox: &CoxeterData, sig: &TauSignature) -> Result<SpecialLabel> {
    let t = cox
        .weyl_type()
        .ok_or_else(|| Error::InvalidLabel("recovery needs a typed Coxeter system".into()))?;
    // Downward closure: every A contained in some tau-invariant contributes
    // its parabolic class to the support.
    let n = cox.rank();
    let mut support_a: BTreeSet<Partition> = BTreeSet::new();
    let mut support_b: BTreeSet<crate::type_b::ParabolicB> = BTreeSet::new();
    let mut support_d: BTreeSet<crate::type_d::ParabolicD> = BTreeSet::new();
    for bits in 0u32..(1 << n) {
        let a: BTreeSet<usize> = (0..n).filter(|i| bits & (1 << i) != 0).map(|i| i + 1).collect();
        if !sig.subsets.iter().any(|tau| a.is_subset(tau)) {
            continue;
        }
        match subset_to_label(cox, &a)? {
            SubsetLabel::A(p) => {
                support_a.insert(p);
            }
            SubsetLabel::B(p) => {
                support_b.insert(p);
            }
            SubsetLabel::D(p) => {
                support_d.insert(p);
            }
        }
    }
    match t {
        WeylType::A(rank) => {
            let map = support_a
                .into_iter()
                .map(|p| (p, BigInt::one()))
                .collect();
            let sig = crate::type_a::SignSignatureA::from_map(rank as u32 + 1, map)?;
            Ok(SpecialLabel::A(crate::type_a::recover_a(&sig)?))
        }
        WeylType::B(rank) => {
            let map = support_b
                .into_iter()
                .map(|p| (p, BigInt::one()))
                .collect();
            let sig = crate::type_b::SignSignatureB::from_map(rank as u32, map)?;
            Ok(SpecialLabel::B(crate::type_b::recover_b(&sig)?))
        }
        WeylType::D(rank) => {
            let map = support_d
                .into_iter()
                .map(|p| (p, BigInt::one()))
                .collect();
            let sig = crate::type_d::SignSignatureD::from_map(rank as u32, map)?;
            Ok(SpecialLabel::D(crate::type_d::recover_d(&sig)?))
        }
        WeylType::G2 => unreachable!("rejected above"),
    }
}
