//! Recovery of irreducible labels from tau-signatures in the classical
//! types: the downward closure of a tau-signature is the sign-signature
//! support, so feeding the maximal supported simple-root subsets back
//! through the recovery must return the original label.

use std::collections::BTreeSet;

use num_traits::Zero;
use weylsig_core::partitions::{bipartitions_of, Partition};
use weylsig_core::tableaux::CoefficientCache;
use weylsig_core::type_b::{self, IrrepB};
use weylsig_core::type_d::{self, IrrepD};
use weylsig_core::wgraph::{identify_special, CoxeterData, SpecialLabel, TauSignature, WeylType};

/// Maximal elements of a set of subsets.
fn maximal(sets: Vec<BTreeSet<usize>>) -> BTreeSet<BTreeSet<usize>> {
    sets.iter()
        .filter(|a| !sets.iter().any(|b| *a != b && a.is_subset(b)))
        .cloned()
        .collect()
}

#[test]
fn recovers_b3_labels_from_subset_support() {
    let cache = CoefficientCache::new();
    let cox = CoxeterData::of_type(WeylType::B(3));
    let n = 3usize;
    for (lam, mu) in bipartitions_of(3).unwrap() {
        let v = IrrepB::new(lam, mu);
        let mut supported = Vec::new();
        for bits in 0u32..(1 << n) {
            let a: BTreeSet<usize> = (0..n)
                .filter(|i| bits & (1 << i) != 0)
                .map(|i| i + 1)
                .collect();
            // Component structure of the subset inside the B_3 diagram:
            // the block containing node 3 is the B-part.
            let label = subset_label_b(n, &a);
            if !type_b::sign_mult_b(&cache, &v, &label).unwrap().is_zero() {
                supported.push(a);
            }
        }
        let sig = TauSignature {
            subsets: maximal(supported),
        };
        assert_eq!(
            identify_special(&cox, &sig).unwrap(),
            SpecialLabel::B(v.clone()),
            "recovered {v}"
        );
    }
}

fn subset_label_b(n: usize, a: &BTreeSet<usize>) -> type_b::ParabolicB {
    use weylsig_core::partitions::Composition;
    let mut a_parts = Vec::new();
    let mut b_parts = Vec::new();
    let mut used = 0usize;
    let mut i = 1;
    while i <= n {
        if !a.contains(&i) {
            i += 1;
            continue;
        }
        let start = i;
        while i < n && a.contains(&(i + 1)) {
            i += 1;
        }
        let len = i - start + 1;
        if i == n {
            b_parts.push(len as u32);
            used += len;
        } else {
            a_parts.push(len as u32 + 1);
            used += len + 1;
        }
        i += 1;
    }
    a_parts.extend(std::iter::repeat_n(1, n - used));
    type_b::ParabolicB::new(&Composition::new(a_parts), &Composition::new(b_parts)).unwrap()
}

#[test]
fn recovers_d4_labels_from_subset_support() {
    let cache = CoefficientCache::new();
    let cox = CoxeterData::of_type(WeylType::D(4));
    let n = 4usize;
    for v in type_d::irreps_d(4).unwrap() {
        let mut supported = Vec::new();
        for bits in 0u32..(1 << n) {
            let a: BTreeSet<usize> = (0..n)
                .filter(|i| bits & (1 << i) != 0)
                .map(|i| i + 1)
                .collect();
            let label = subset_label_d(n, &a);
            if !type_d::sign_mult_d(&cache, &v, &label).unwrap().is_zero() {
                supported.push(a);
            }
        }
        let sig = TauSignature {
            subsets: maximal(supported),
        };
        assert_eq!(
            identify_special(&cox, &sig).unwrap(),
            SpecialLabel::D(v.clone()),
            "recovered {v}"
        );
    }
}

fn subset_label_d(n: usize, a: &BTreeSet<usize>) -> type_d::ParabolicD {
    use weylsig_core::partitions::Composition;
    // Adjacency of the D_n diagram: chain 1..n-1 plus the fork n—(n-2).
    let adj = |x: usize, y: usize| -> bool {
        let (lo, hi) = (x.min(y), x.max(y));
        (hi == lo + 1 && hi < n) || (hi == n && lo == n - 2)
    };
    let mut remaining: BTreeSet<usize> = a.clone();
    let mut a_parts = Vec::new();
    let mut minus = false;
    let mut d_part = 0u32;
    let mut used = 0usize;
    let both_fork_nodes = a.contains(&n) && a.contains(&(n - 1));
    while let Some(&start) = remaining.iter().next() {
        let mut comp = vec![start];
        remaining.remove(&start);
        let mut frontier = vec![start];
        while let Some(x) = frontier.pop() {
            let next: Vec<usize> = remaining.iter().copied().filter(|&y| adj(x, y)).collect();
            for y in next {
                remaining.remove(&y);
                comp.push(y);
                frontier.push(y);
            }
        }
        let has_fork = comp.contains(&n);
        let has_last_chain = comp.contains(&(n - 1));
        if has_fork && has_last_chain {
            d_part = comp.len() as u32;
            used += comp.len();
        } else if both_fork_nodes && has_fork {
            // Disconnected {t_n} merging with the t_{n-1} chain into a D
            // block on overlapping coordinates.
            continue;
        } else if both_fork_nodes && has_last_chain {
            d_part = comp.len() as u32 + 1;
            used += comp.len() + 1;
        } else if has_fork {
            minus = true;
            a_parts.push(comp.len() as u32 + 1);
            used += comp.len() + 1;
        } else {
            a_parts.push(comp.len() as u32 + 1);
            used += comp.len() + 1;
        }
    }
    a_parts.extend(std::iter::repeat_n(1, n - used));
    let comp = Composition::new(a_parts);
    if d_part > 0 {
        type_d::ParabolicD::new_bar(&comp, d_part).unwrap()
    } else if minus {
        let mut parts = comp.entries().to_vec();
        parts.sort_unstable_by(|x, y| y.cmp(x));
        type_d::ParabolicD::new_minus(&Composition::new(parts)).unwrap()
    } else {
        type_d::ParabolicD::new_plus(&comp).unwrap()
    }
}

#[test]
fn trivial_and_sign_signatures_by_type() {
    for (cox, trivial, sign) in [
        (
            CoxeterData::of_type(WeylType::A(3)),
            SpecialLabel::A(Partition::new(vec![4]).unwrap()),
            SpecialLabel::A(Partition::new(vec![1, 1, 1, 1]).unwrap()),
        ),
        (
            CoxeterData::of_type(WeylType::B(3)),
            SpecialLabel::B(IrrepB::trivial(3)),
            SpecialLabel::B(IrrepB::sign(3)),
        ),
        (
            CoxeterData::of_type(WeylType::D(4)),
            SpecialLabel::D(IrrepD::trivial(4)),
            SpecialLabel::D(IrrepD::sign(4)),
        ),
    ] {
        let rank = cox.rank();
        let empty_sig = TauSignature {
            subsets: BTreeSet::from([BTreeSet::new()]),
        };
        assert_eq!(identify_special(&cox, &empty_sig).unwrap(), trivial);
        let full: BTreeSet<usize> = (1..=rank).collect();
        let full_sig = TauSignature {
            subsets: BTreeSet::from([full]),
        };
        assert_eq!(identify_special(&cox, &full_sig).unwrap(), sign);
    }
}
