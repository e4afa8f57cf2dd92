//! Sign multiplicities, sign signatures and label recovery for the symmetric
//! group, the Weyl group of type A.
//!
//! Everything reduces to Kostka numbers: the multiplicity of the sign
//! representation of the parabolic `S_{p_1} x ... x S_{p_k}` in `V_λ` is
//! `K_{λ*,(p_1,...,p_k)}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::partitions::{partitions_of, Composition, Partition};
use crate::tableaux::CoefficientCache;

/// A parabolic subgroup of `S_n`, given by its block sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParabolicA {
    parts: Composition,
}

impl ParabolicA {
    /// Builds from block sizes; every entry must be positive.
    pub fn new(parts: Composition) -> Result<Self> {
        if !parts.all_positive() {
            return Err(Error::InvalidLabel(format!(
                "parabolic parts must be positive: {parts}"
            )));
        }
        Ok(ParabolicA { parts })
    }

    pub fn parts(&self) -> &Composition {
        &self.parts
    }

    pub fn rank(&self) -> u32 {
        self.parts.size()
    }

    /// The conjugacy-class representative: parts sorted descending.
    pub fn canonical(&self) -> Partition {
        self.parts.sorted()
    }
}

/// The signMult vector of a representation of `S_n`: one multiplicity per
/// conjugacy class of parabolic subgroups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignSignatureA {
    rank: u32,
    mult: BTreeMap<Partition, BigInt>,
}

impl SignSignatureA {
    /// Builds from an explicit multiplicity map; keys must be partitions of
    /// `rank` and values non-negative. Missing keys mean multiplicity zero.
    pub fn from_map(rank: u32, mult: BTreeMap<Partition, BigInt>) -> Result<Self> {
        for (key, value) in &mult {
            if key.size() != rank {
                return Err(Error::InvalidLabel(format!(
                    "parabolic {key} is not a partition of {rank}"
                )));
            }
            if value < &BigInt::zero() {
                return Err(Error::Inconsistent(format!(
                    "negative multiplicity at {key}"
                )));
            }
        }
        Ok(SignSignatureA { rank, mult })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn get(&self, parabolic: &Partition) -> BigInt {
        self.mult.get(parabolic).cloned().unwrap_or_default()
    }

    /// The set view: parabolics with nonzero multiplicity.
    pub fn support(&self) -> impl Iterator<Item = &Partition> {
        self.mult
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, _)| k)
    }

    /// Entries in canonical enumeration order (see [`parabolic_order`]).
    pub fn entries(&self) -> Result<Vec<(Partition, BigInt)>> {
        Ok(parabolic_order(self.rank)?
            .into_iter()
            .map(|p| {
                let v = self.get(&p);
                (p, v)
            })
            .collect())
    }

    /// Pointwise sum of two signatures of equal rank.
    pub fn add(&self, other: &SignSignatureA) -> Result<SignSignatureA> {
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
        Ok(SignSignatureA {
            rank: self.rank,
            mult,
        })
    }

    pub fn scale(&self, factor: &BigInt) -> SignSignatureA {
        SignSignatureA {
            rank: self.rank,
            mult: self
                .mult
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
        }
    }
}

/// Multiplicity of the sign representation of `p` in `V_lam`:
/// `K_{lam*, parts}`.
pub fn sign_mult_a(cache: &CoefficientCache, lam: &Partition, p: &ParabolicA) -> Result<BigInt> {
    if lam.size() != p.rank() {
        return Err(Error::SizeMismatch(format!(
            "|{lam}| = {} but parabolic has rank {}",
            lam.size(),
            p.rank()
        )));
    }
    Ok(cache.kostka(&lam.conjugate(), p.parts()))
}

/// The irreducibles of `S_n` in the recovery order: duals ascending
/// lexicographically. Against the parabolic columns of [`parabolic_order`]
/// the multiplicity matrix is lower-unitriangular in this order.
pub fn irrep_order(n: u32) -> Result<Vec<Partition>> {
    let mut list = partitions_of(n)?;
    list.sort_by(|a, b| a.conjugate().lex_compare(&b.conjugate()));
    Ok(list)
}

/// Canonical parabolic classes of `S_n` in enumeration order: partitions of
/// `n` ascending lexicographically, i.e. the duals of [`irrep_order`].
pub fn parabolic_order(n: u32) -> Result<Vec<Partition>> {
    let mut list = partitions_of(n)?;
    list.sort();
    Ok(list)
}

/// The full signMult vector of `V_lam` over all parabolic classes.
pub fn sign_signature_a(cache: &CoefficientCache, lam: &Partition) -> Result<SignSignatureA> {
    let n = lam.size();
    let mut mult = BTreeMap::new();
    for p in partitions_of(n)? {
        let parabolic = ParabolicA::new(p.to_composition())?;
        let v = sign_mult_a(cache, lam, &parabolic)?;
        mult.insert(p, v);
    }
    Ok(SignSignatureA { rank: n, mult })
}

/// Recovers the partition labelling an irreducible from its sign signature:
/// the dual of the lexicographically largest supported parabolic.
pub fn recover_a(sig: &SignSignatureA) -> Result<Partition> {
    sig.support()
        .max_by(|a, b| a.lex_compare(b))
        .map(Partition::conjugate)
        .ok_or(Error::EmptySupport)
}

/// Decomposes the signMult vector of an arbitrary non-negative representation
/// into irreducible multiplicities by forward substitution in the recovery
/// order (duals descending), entirely in integers.
pub fn decompose_a(
    cache: &CoefficientCache,
    vec: &SignSignatureA,
) -> Result<BTreeMap<Partition, BigInt>> {
    let n = vec.rank();
    let mut residual: BTreeMap<Partition, BigInt> = partitions_of(n)?
        .into_iter()
        .map(|p| {
            let v = vec.get(&p);
            (p, v)
        })
        .collect();
    let mut order = irrep_order(n)?;
    order.reverse();
    let mut out = BTreeMap::new();
    for lam in order {
        let dual = lam.conjugate();
        let m = residual.get(&dual).cloned().unwrap_or_default();
        if m.is_zero() {
            continue;
        }
        if m < BigInt::zero() {
            return Err(Error::Inconsistent(format!(
                "negative multiplicity {m} for {lam}: input is not in the non-negative cone"
            )));
        }
        for (p, r) in residual.iter_mut() {
            let k = cache.kostka(&dual, &p.to_composition());
            if !k.is_zero() {
                *r -= &m * &k;
            }
        }
        out.insert(lam, m);
    }
    if residual.values().any(|v| !v.is_zero()) {
        return Err(Error::Inconsistent(
            "signature is not an integer combination of irreducible signatures".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn par(parts: &[u32]) -> ParabolicA {
        ParabolicA::new(Composition::new(parts.to_vec())).unwrap()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn sign_mult_examples() {
        let cache = CoefficientCache::new();
        for n in 1..=5u32 {
            let sign = Partition::new(vec![1; n as usize]).unwrap();
            assert_eq!(sign_mult_a(&cache, &sign, &par(&[n])).unwrap(), big(1));
            let trivial = Partition::new(vec![n]).unwrap();
            for q in partitions_of(n).unwrap() {
                let expect = if q.parts().iter().all(|&x| x == 1) { 1 } else { 0 };
                assert_eq!(
                    sign_mult_a(&cache, &trivial, &ParabolicA::new(q.to_composition()).unwrap())
                        .unwrap(),
                    big(expect)
                );
            }
        }
        assert_eq!(sign_mult_a(&cache, &p(&[2, 1]), &par(&[2, 1])).unwrap(), big(1));
        assert!(sign_mult_a(&cache, &p(&[2, 1]), &par(&[2])).is_err());
        assert!(ParabolicA::new(Composition::new(vec![2, 0, 1])).is_err());
    }

    #[test]
    fn sign_signature_examples() {
        let cache = CoefficientCache::new();
        let sig = sign_signature_a(&cache, &p(&[1, 1, 1])).unwrap();
        assert_eq!(sig.get(&p(&[3])), big(1));
        assert_eq!(sig.get(&p(&[2, 1])), big(1));
        assert_eq!(sig.get(&p(&[1, 1, 1])), big(1));

        let sig = sign_signature_a(&cache, &p(&[3])).unwrap();
        assert_eq!(sig.get(&p(&[1, 1, 1])), big(1));
        assert_eq!(sig.get(&p(&[2, 1])), big(0));
        assert_eq!(sig.get(&p(&[3])), big(0));

        let sig = sign_signature_a(&cache, &p(&[2, 1])).unwrap();
        assert_eq!(sig.get(&p(&[2, 1])), big(1));
        assert_eq!(sig.get(&p(&[1, 1, 1])), big(2));
        assert_eq!(sig.get(&p(&[3])), big(0));
    }

    #[test]
    fn recover_round_trips() {
        let cache = CoefficientCache::new();
        for lam in [p(&[3]), p(&[2, 1])] {
            let sig = sign_signature_a(&cache, &lam).unwrap();
            assert_eq!(recover_a(&sig).unwrap(), lam);
        }
        for lam in partitions_of(8).unwrap() {
            let sig = sign_signature_a(&cache, &lam).unwrap();
            assert_eq!(recover_a(&sig).unwrap(), lam);
        }
        let empty = SignSignatureA::from_map(3, BTreeMap::new()).unwrap();
        assert!(matches!(recover_a(&empty), Err(Error::EmptySupport)));
    }

    #[test]
    fn signatures_are_distinct() {
        let cache = CoefficientCache::new();
        for n in 1..=8u32 {
            let sigs: Vec<_> = partitions_of(n)
                .unwrap()
                .into_iter()
                .map(|lam| sign_signature_a(&cache, &lam).unwrap())
                .collect();
            for i in 0..sigs.len() {
                for j in 0..i {
                    assert_ne!(sigs[i], sigs[j]);
                }
            }
        }
    }

    #[test]
    fn triangularity_in_recovery_order() {
        // With irreps ordered by duals ascending and parabolic columns at the
        // duals themselves, the multiplicity matrix is lower-unitriangular.
        let cache = CoefficientCache::new();
        for n in 1..=8u32 {
            let order = irrep_order(n).unwrap();
            for (i, lam) in order.iter().enumerate() {
                for (j, mu) in order.iter().enumerate() {
                    let col = ParabolicA::new(mu.conjugate().to_composition()).unwrap();
                    let m = sign_mult_a(&cache, lam, &col).unwrap();
                    if j == i {
                        assert_eq!(m, big(1), "diagonal at {lam}");
                    } else if j > i {
                        assert_eq!(m, big(0), "above diagonal at ({lam}, {mu})");
                    }
                }
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let cache = CoefficientCache::new();
        let sig = sign_signature_a(&cache, &p(&[2, 1])).unwrap();
        assert_eq!(
            decompose_a(&cache, &sig).unwrap(),
            BTreeMap::from([(p(&[2, 1]), big(1))])
        );

        let sum = sign_signature_a(&cache, &p(&[3]))
            .unwrap()
            .add(&sign_signature_a(&cache, &p(&[1, 1, 1])).unwrap())
            .unwrap();
        assert_eq!(
            decompose_a(&cache, &sum).unwrap(),
            BTreeMap::from([(p(&[3]), big(1)), (p(&[1, 1, 1]), big(1))])
        );

        let doubled = sig.scale(&big(2));
        assert_eq!(
            decompose_a(&cache, &doubled).unwrap(),
            BTreeMap::from([(p(&[2, 1]), big(2))])
        );

        // A vector outside the cone errors out.
        let bad = SignSignatureA::from_map(3, BTreeMap::from([(p(&[3]), big(1))])).unwrap();
        assert!(decompose_a(&cache, &bad).is_err());
    }

    #[test]
    fn decompose_random_combinations() {
        let cache = CoefficientCache::new();
        // Small deterministic pseudo-random multiplicities.
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 4) as i64
        };
        for n in 2..=6u32 {
            let mut expected = BTreeMap::new();
            let mut total = SignSignatureA::from_map(n, BTreeMap::new()).unwrap();
            for lam in partitions_of(n).unwrap() {
                let m = next();
                if m == 0 {
                    continue;
                }
                expected.insert(lam.clone(), big(m));
                let sig = sign_signature_a(&cache, &lam).unwrap().scale(&big(m));
                total = total.add(&sig).unwrap();
            }
            assert_eq!(decompose_a(&cache, &total).unwrap(), expected);
        }
    }
}
