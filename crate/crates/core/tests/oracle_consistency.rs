//! Cross-validation of the closed branching formulas against the explicit
//! module oracle: restrictions of induced modules, tensoring by sign, and
//! the structural facts about D_n inside B_n.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use weylsig_core::oracle::{self, GroupTag, SignedPermutation};
use weylsig_core::partitions::{bipartitions_of, partitions_of, Partition};
use weylsig_core::ratmat::{rat, Rat};
use weylsig_core::tableaux::CoefficientCache;
use weylsig_core::type_b::{self, BFactor, IrrepB, ParabolicB};
use weylsig_core::type_d::{self, IrrepD};

fn p(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

/// Per-element character of a module over an enumerated group.
fn element_chars(group: &oracle::GroupData, module: &oracle::ExplicitModule) -> Vec<Rat> {
    let by_class = module.character(group);
    group.class_of.iter().map(|&c| by_class[c].clone()).collect()
}

/// Splits a block-diagonal signed permutation into its two blocks.
fn split_blocks(h: &SignedPermutation, k: usize) -> (SignedPermutation, SignedPermutation) {
    let left = SignedPermutation::new(
        h.perm()[..k].to_vec(),
        h.signs()[..k].to_vec(),
    );
    let right = SignedPermutation::new(
        h.perm()[k..].iter().map(|&x| x - k as u8).collect(),
        h.signs()[k..].to_vec(),
    );
    (left, right)
}

#[test]
fn branch_b_to_bb_matches_induced_module_restriction() {
    // The double-coset computation behind the branching rule, exercised the
    // oracle way: <Res_{B_k x B_{n-k}} V, W_l ⊗ W_r> by character averaging
    // equals the Littlewood-Richardson product coefficient.
    let cache = CoefficientCache::new();
    for n in 2..=4usize {
        let group = oracle::enumerate_group(GroupTag::B, n).unwrap();
        for k in 0..=n {
            let b_parts: Vec<u32> = [k as u32, (n - k) as u32]
                .into_iter()
                .filter(|&x| x > 0)
                .collect();
            let gens = oracle::parabolic_b_reflections(n, &[], &b_parts).unwrap();
            let subgroup = oracle::enumerate_subgroup(&group, &gens).unwrap();

            // Factor groups and their irreducible characters per element of
            // the subgroup.
            let left_group = oracle::enumerate_group(GroupTag::B, k).unwrap();
            let right_group = oracle::enumerate_group(GroupTag::B, n - k).unwrap();
            let factor_classes: Vec<(usize, usize)> = subgroup
                .iter()
                .map(|&i| {
                    let (l, r) = split_blocks(&group.elements[i], k);
                    (
                        left_group.class_of[left_group.index_of(&l).unwrap()],
                        right_group.class_of[right_group.index_of(&r).unwrap()],
                    )
                })
                .collect();

            let left_irreps = bipartitions_of(k as u32).unwrap();
            let right_irreps = bipartitions_of((n - k) as u32).unwrap();
            let left_chars: Vec<Vec<Rat>> = left_irreps
                .iter()
                .map(|(a, b)| oracle::build_bn_irrep(a, b).unwrap().character(&left_group))
                .collect();
            let right_chars: Vec<Vec<Rat>> = right_irreps
                .iter()
                .map(|(a, b)| oracle::build_bn_irrep(a, b).unwrap().character(&right_group))
                .collect();

            for (lam, mu) in bipartitions_of(n as u32).unwrap() {
                let v = IrrepB::new(lam.clone(), mu.clone());
                let module = oracle::build_bn_irrep(&lam, &mu).unwrap();
                let chars = element_chars(&group, &module);
                let expected = type_b::branch_b_to_bb(&cache, &v, k as u32).unwrap();
                for (li, (ll, lm)) in left_irreps.iter().enumerate() {
                    for (ri, (rl, rm)) in right_irreps.iter().enumerate() {
                        let mut total = Rat::zero();
                        for (pos, &i) in subgroup.iter().enumerate() {
                            let (lc, rc) = factor_classes[pos];
                            total += &chars[i] * &left_chars[li][lc] * &right_chars[ri][rc];
                        }
                        let pairing = total / rat(subgroup.len() as i64);
                        let key = (
                            IrrepB::new(ll.clone(), lm.clone()),
                            IrrepB::new(rl.clone(), rm.clone()),
                        );
                        let formula = expected.get(&key).cloned().unwrap_or_default();
                        assert!(pairing.is_integer());
                        assert_eq!(
                            pairing.to_integer(),
                            formula,
                            "branching of {v} at k={k} onto {}⊗{}",
                            key.0,
                            key.1
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn branch_generalized_matches_oracle() {
    // The chained closed form for generalized parabolics, checked against a
    // direct character pairing over B_1 x B_1 x B_1 and S_1 x B_2 in B_3.
    let cache = CoefficientCache::new();
    let n = 3usize;
    let group = oracle::enumerate_group(GroupTag::B, n).unwrap();

    // P = B_1 x B_1 x B_1: factors are characters of B_1 = {±1}.
    let gens = oracle::parabolic_b_reflections(n, &[], &[1, 1, 1]).unwrap();
    let subgroup = oracle::enumerate_subgroup(&group, &gens).unwrap();
    let pb = ParabolicB::new(
        &weylsig_core::partitions::Composition::new(vec![]),
        &weylsig_core::partitions::Composition::new(vec![1, 1, 1]),
    )
    .unwrap();
    let b1_labels = [IrrepB::trivial(1), IrrepB::sign(1)];
    for (lam, mu) in bipartitions_of(3).unwrap() {
        let v = IrrepB::new(lam.clone(), mu.clone());
        let module = oracle::build_bn_irrep(&lam, &mu).unwrap();
        let chars = element_chars(&group, &module);
        for f1 in &b1_labels {
            for f2 in &b1_labels {
                for f3 in &b1_labels {
                    let formula = type_b::branch_b_generalized(
                        &cache,
                        &v,
                        &pb,
                        &[
                            BFactor::B(f1.clone()),
                            BFactor::B(f2.clone()),
                            BFactor::B(f3.clone()),
                        ],
                    )
                    .unwrap();
                    let mut total = Rat::zero();
                    for &i in &subgroup {
                        let h = &group.elements[i];
                        let mut factor = Rat::zero() + rat(1);
                        for (slot, f) in [f1, f2, f3].into_iter().enumerate() {
                            // B_1 factor character: sign flips act by -1 on
                            // the sign label.
                            let s = h.signs()[slot];
                            let value = if *f == IrrepB::sign(1) && s == -1 {
                                rat(-1)
                            } else {
                                rat(1)
                            };
                            factor *= value;
                        }
                        total += factor * &chars[i];
                    }
                    let pairing = total / rat(subgroup.len() as i64);
                    assert!(pairing.is_integer());
                    assert_eq!(pairing.to_integer(), formula, "{v} onto {f1}⊗{f2}⊗{f3}");
                }
            }
        }
    }
}

#[test]
fn dn_nonsplit_character_is_b_restriction() {
    for n in 2..=4usize {
        let bg = oracle::enumerate_group(GroupTag::B, n).unwrap();
        let dg = oracle::enumerate_group(GroupTag::D, n).unwrap();
        for (lam, mu) in bipartitions_of(n as u32).unwrap() {
            if lam == mu {
                continue;
            }
            let bm = oracle::build_bn_irrep(&lam, &mu).unwrap();
            let dm = oracle::build_dn_nonsplit(&lam, &mu).unwrap();
            let bchars = bm.character(&bg);
            let dchars = dm.character(&dg);
            for &rep in &dg.class_reps {
                let g = &dg.elements[rep];
                let bclass = bg.class_of[bg.index_of(g).unwrap()];
                let dclass = dg.class_of[rep];
                assert_eq!(
                    bchars[bclass], dchars[dclass],
                    "character mismatch for {{{lam},{mu}}} in D_{n}"
                );
            }
        }
    }
}

#[test]
fn sign_restriction_uniqueness() {
    // Exactly V_{∅,π} and V_{π,∅} restrict to the D_n sign character.
    for n in 2..=4usize {
        let bg = oracle::enumerate_group(GroupTag::B, n).unwrap();
        let dg = oracle::enumerate_group(GroupTag::D, n).unwrap();
        let mut matches = Vec::new();
        for (lam, mu) in bipartitions_of(n as u32).unwrap() {
            let module = oracle::build_bn_irrep(&lam, &mu).unwrap();
            let chars = module.character(&bg);
            let is_sign = dg.class_reps.iter().all(|&rep| {
                let g = &dg.elements[rep];
                let c = bg.class_of[bg.index_of(g).unwrap()];
                chars[c] == rat(g.det())
            });
            if is_sign {
                matches.push(IrrepB::new(lam, mu));
            }
        }
        let pi = Partition::new(vec![1; n]).unwrap();
        matches.sort();
        let mut expected = vec![
            IrrepB::new(Partition::empty(), pi.clone()),
            IrrepB::new(pi, Partition::empty()),
        ];
        expected.sort();
        assert_eq!(matches, expected, "sign restrictions in D_{n}");
    }
}

#[test]
fn conjugate_module_swaps_split_halves() {
    // Conjugating by s = diag(1,..,1,-1) swaps V^+ and V^-.
    let n = 4usize;
    let dg = oracle::enumerate_group(GroupTag::D, n).unwrap();
    let s = SignedPermutation::flip(n, n - 1);
    for lam in partitions_of(2).unwrap() {
        let (plus, minus) = oracle::build_dn_split_pair(&lam).unwrap();
        let pchars = plus.character(&dg);
        let mchars = minus.character(&dg);
        for &rep in &dg.class_reps {
            let g = &dg.elements[rep];
            let conj = s.compose(g).compose(&s.inverse());
            let cclass = dg.class_of[dg.index_of(&conj).unwrap()];
            assert_eq!(
                pchars[dg.class_of[rep]], mchars[cclass],
                "s-conjugate of V^+ is V^- at {lam}"
            );
        }
    }
}

#[test]
fn tensor_by_sign_type_a() {
    // Multiplicity of sign in V_λ over P equals multiplicity of trivial in
    // V_{λ*} over P.
    for n in 1..=5u32 {
        let group = oracle::enumerate_group(GroupTag::A, n as usize).unwrap();
        for lam in partitions_of(n).unwrap() {
            let module = oracle::build_sn_irrep(&lam).unwrap();
            let dual = oracle::build_sn_irrep(&lam.conjugate()).unwrap();
            let chars = element_chars(&group, &module);
            let dual_chars = element_chars(&group, &dual);
            for parabolic in partitions_of(n).unwrap() {
                let gens =
                    oracle::parabolic_b_reflections(n as usize, parabolic.parts(), &[]).unwrap();
                let subgroup = oracle::enumerate_subgroup(&group, &gens).unwrap();
                let mut sign_mult = Rat::zero();
                let mut trivial_mult = Rat::zero();
                for &i in &subgroup {
                    let d = rat(group.elements[i].det());
                    sign_mult += &d * &chars[i];
                    trivial_mult += &dual_chars[i];
                }
                assert_eq!(
                    sign_mult, trivial_mult,
                    "tensor-by-sign at {lam} over {parabolic}"
                );
            }
        }
    }
}

#[test]
fn tensor_by_sign_type_d() {
    // χ(V_{{λ,μ}}) · det = χ(V_{{λ*,μ*}}) as class functions, and for n=4
    // the split halves keep their sign under tensoring.
    let n = 4usize;
    let dg = oracle::enumerate_group(GroupTag::D, n).unwrap();
    for (lam, mu) in bipartitions_of(4).unwrap() {
        if lam == mu {
            continue;
        }
        let a = oracle::build_dn_nonsplit(&lam, &mu).unwrap();
        let b = oracle::build_dn_nonsplit(&lam.conjugate(), &mu.conjugate())
            .or_else(|_| oracle::build_dn_nonsplit(&mu.conjugate(), &lam.conjugate()))
            .unwrap();
        let achars = element_chars(&dg, &a);
        let bchars = element_chars(&dg, &b);
        for i in 0..dg.order() {
            let d = rat(dg.elements[i].det());
            assert_eq!(&achars[i] * &d, bchars[i].clone(), "{{{lam},{mu}}}⊗sign");
        }
    }
    for lam in partitions_of(2).unwrap() {
        let (plus, _minus) = oracle::build_dn_split_pair(&lam).unwrap();
        let (dual_plus, _dual_minus) = oracle::build_dn_split_pair(&lam.conjugate()).unwrap();
        let achars = element_chars(&dg, &plus);
        let bchars = element_chars(&dg, &dual_plus);
        for i in 0..dg.order() {
            let d = rat(dg.elements[i].det());
            assert_eq!(&achars[i] * &d, bchars[i].clone(), "V^+_{{{lam}}}⊗sign");
        }
    }
}

#[test]
fn d2_and_d3_sanity() {
    let cache = CoefficientCache::new();
    // D_2 ≅ A_1 x A_1: the reducible V_{{[1],[1]}} decomposes into the two
    // mixed characters, giving hand-computable multiplicities.
    let frozen: [(&str, i64); 4] = [("+(1,1)", 2), ("+(2)", 1), ("-(2)", 1), ("()|D(2)", 0)];
    for (key, want) in frozen {
        let parabolic: type_d::ParabolicD = key.parse().unwrap();
        assert_eq!(
            type_d::sign_mult_d_pair(&cache, &p(&[1]), &p(&[1]), &parabolic).unwrap(),
            BigInt::from(want),
            "D_2 pair at {key}"
        );
    }

    // D_3 ≅ A_3 = S_4: same group order, and the multiset of irreducible
    // signature value-vectors matches the type A signatures of S_4.
    let d3 = oracle::enumerate_group(GroupTag::D, 3).unwrap();
    let s4 = oracle::enumerate_group(GroupTag::A, 4).unwrap();
    assert_eq!(d3.order(), s4.order());
    assert_eq!(d3.num_classes(), s4.num_classes());

    let mut d_sigs: Vec<Vec<BigInt>> = type_d::irreps_d(3)
        .unwrap()
        .into_iter()
        .map(|v| {
            let sig = type_d::sign_signature_d(&cache, &v).unwrap();
            // Drop the duplicated Minus((3)) column (conjugate to Plus((3))
            // for odd rank) so exactly one representative per conjugacy
            // class of parabolics remains.
            let mut vals: Vec<BigInt> = sig
                .entries()
                .unwrap()
                .into_iter()
                .filter(|(p, _)| !matches!(p, type_d::ParabolicD::Minus(_)))
                .map(|(_, m)| m)
                .collect();
            vals.sort();
            vals
        })
        .collect();
    let mut a_sigs: Vec<Vec<BigInt>> = partitions_of(4)
        .unwrap()
        .into_iter()
        .map(|lam| {
            let sig = weylsig_core::type_a::sign_signature_a(&cache, &lam).unwrap();
            let mut vals: Vec<BigInt> =
                sig.entries().unwrap().into_iter().map(|(_, m)| m).collect();
            vals.sort();
            vals
        })
        .collect();
    d_sigs.sort();
    a_sigs.sort();
    assert_eq!(d_sigs, a_sigs, "D_3 signatures biject with S_4 signatures");
}

#[test]
fn wgraph_sign_multiplicity_criterion() {
    // Cor: the sign multiplicity of W(A) on a graph module (trace of R(A))
    // is nonzero iff A ⊆ τ(v) for some vertex.
    use std::collections::BTreeSet;
    use weylsig_core::wgraph::{parse_wcell, CoxeterData, WeylType};
    let cox = CoxeterData::of_type(WeylType::G2);
    let text = include_str!("data/g2_wcell.txt");
    let parsed = parse_wcell(text).unwrap();
    for cell in &parsed.cells {
        for bits in 0u32..4 {
            let a: BTreeSet<usize> = (0..2)
                .filter(|i| bits & (1 << i) != 0)
                .map(|i| i + 1)
                .collect();
            let r = cell.graph.projector_r(&cox, &a).unwrap();
            let (minus, _, _) = cell.graph.vertex_partition(&a);
            assert_eq!(r.trace().is_zero(), minus.is_empty());
            assert_eq!(r.trace(), rat(minus.len() as i64));
        }
    }
}

#[test]
fn wigner_mackey_dims_match_explicit_modules() {
    for n in 1..=3u32 {
        for (v, dim) in type_b::wigner_mackey_labels(n).unwrap() {
            let module = oracle::build_bn_irrep(&v.lam, &v.mu).unwrap();
            assert_eq!(BigInt::from(module.dim()), dim, "dim of {v}");
        }
    }
}

#[test]
fn dn_trivial_module() {
    let m = oracle::build_dn_nonsplit(&p(&[3]), &p(&[])).unwrap();
    assert_eq!(m.dim(), 1);
    for g in &m.gen_matrices {
        assert_eq!(g[(0, 0)], rat(1));
    }
    let _ = BTreeMap::<IrrepD, BigInt>::new();
}
