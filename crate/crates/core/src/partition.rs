//! Integer-partition combinatorics: enumeration, counting via the
//! pentagonal-number recurrence, p-cores and p-quotients through beta-sets,
//! and the multipartition count k(e,w).

use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Default cap on explicit partition enumeration.
pub const DEFAULT_ENUM_LIMIT: u64 = 60;

/// A partition: weakly decreasing list of positive parts. The empty list is
/// the unique partition of 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(Error::Domain(format!(
                    "parts not weakly decreasing: {:?}",
                    parts
                )));
            }
        }
        if parts.last().is_some_and(|&p| p == 0) {
            return Err(Error::Domain("zero part".into()));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// First-column hook lengths padded to `len` beads, strictly decreasing.
    pub fn beta_set(&self, len: usize) -> BetaSet {
        assert!(len >= self.parts.len(), "beta-set shorter than partition");
        let mut beads = Vec::with_capacity(len);
        for (i, &p) in self.parts.iter().enumerate() {
            beads.push(p as u64 + (len - 1 - i) as u64);
        }
        for i in self.parts.len()..len {
            beads.push((len - 1 - i) as u64);
        }
        BetaSet { beads }
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
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

/// Abacus encoding of a partition: strictly decreasing bead positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaSet {
    beads: Vec<u64>,
}

impl BetaSet {
    pub fn beads(&self) -> &[u64] {
        &self.beads
    }

    pub fn to_partition(&self) -> Partition {
        let len = self.beads.len();
        let mut parts: Vec<u32> = self
            .beads
            .iter()
            .enumerate()
            .map(|(i, &b)| (b - (len - 1 - i) as u64) as u32)
            .collect();
        parts.retain(|&p| p > 0);
        Partition { parts }
    }
}

/// Core/quotient decomposition of a partition modulo p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreQuotient {
    pub core: Partition,
    pub quotient: Vec<Partition>,
    pub p: u32,
}

/// All partitions of n in lexicographic largest-part-first order.
pub fn partitions_of(n: u64) -> Result<Vec<Partition>> {
    partitions_of_with_limit(n, DEFAULT_ENUM_LIMIT)
}

pub fn partitions_of_with_limit(n: u64, limit: u64) -> Result<Vec<Partition>> {
    if n > limit {
        return Err(Error::Resource(format!(
            "partition enumeration capped at n <= {limit}, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    enumerate(n as u32, n as u32, &mut stack, &mut out);
    Ok(out)
}

fn enumerate(n: u32, max: u32, stack: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if n == 0 {
        out.push(Partition {
            parts: stack.clone(),
        });
        return;
    }
    for k in (1..=n.min(max)).rev() {
        stack.push(k);
        enumerate(n - k, k, stack, out);
        stack.pop();
    }
}

static PARTITION_COUNTS: Lazy<Mutex<Vec<BigUint>>> =
    Lazy::new(|| Mutex::new(vec![BigUint::one()]));

/// p(n), the number of partitions of n, via the pentagonal-number recurrence.
/// The table is cached process-wide behind a mutex.
pub fn partition_count(n: u64) -> BigUint {
    let mut table = PARTITION_COUNTS.lock().unwrap();
    extend_partition_table(&mut table, n as usize);
    table[n as usize].clone()
}

/// The same recurrence run into a caller-owned table, with no shared cache.
pub fn partition_count_table(n: u64) -> Vec<BigUint> {
    let mut table = vec![BigUint::one()];
    extend_partition_table(&mut table, n as usize);
    table
}

fn extend_partition_table(table: &mut Vec<BigUint>, n: usize) {
    while table.len() <= n {
        let i = table.len() as i64;
        let mut acc_plus = BigUint::zero();
        let mut acc_minus = BigUint::zero();
        let mut k = 1i64;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > i {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let acc = if k % 2 == 1 {
                &mut acc_plus
            } else {
                &mut acc_minus
            };
            *acc += &table[(i - g1) as usize];
            if g2 <= i {
                *acc += &table[(i - g2) as usize];
            }
            k += 1;
        }
        // acc_plus >= acc_minus always: p(i) is non-negative.
        table.push(acc_plus - acc_minus);
    }
}

fn check_modulus(p: u32) -> Result<()> {
    if p < 2 {
        return Err(Error::Domain(format!("modulus p must be >= 2, got {p}")));
    }
    Ok(())
}

/// The p-core of a partition via the abacus: slide every bead down its
/// runner as far as it goes. The result is independent of removal order.
pub fn p_core(lambda: &Partition, p: u32) -> Result<Partition> {
    Ok(p_quotient(lambda, p)?.core)
}

/// (|lambda| - |core|)/p; the division is exact.
pub fn p_weight(lambda: &Partition, p: u32) -> Result<u64> {
    let core = p_core(lambda, p)?;
    let diff = lambda.size() - core.size();
    debug_assert_eq!(diff % p as u64, 0);
    Ok(diff / p as u64)
}

/// Core and p-quotient from the bead residue classes of a beta-set whose
/// length is the smallest multiple of p covering the partition.
pub fn p_quotient(lambda: &Partition, p: u32) -> Result<CoreQuotient> {
    check_modulus(p)?;
    let pu = p as usize;
    let len = lambda.parts.len().div_ceil(pu).max(1) * pu;
    let beta = lambda.beta_set(len);

    // Runner r holds the beads congruent to r mod p, at heights (b - r)/p.
    let mut runners: Vec<Vec<u64>> = vec![Vec::new(); pu];
    for &b in beta.beads() {
        runners[(b % p as u64) as usize].push(b / p as u64);
    }

    let mut quotient = Vec::with_capacity(pu);
    let mut core_beads = Vec::with_capacity(len);
    for (r, mut heights) in runners.into_iter().enumerate() {
        heights.sort_unstable_by(|a, b| b.cmp(a));
        let runner_len = heights.len();
        quotient.push(BetaSet { beads: heights }.to_partition());
        // Sliding the beads to the bottom of the runner gives the core.
        for i in 0..runner_len {
            core_beads.push((runner_len - 1 - i) as u64 * p as u64 + r as u64);
        }
    }
    core_beads.sort_unstable_by(|a, b| b.cmp(a));
    let core = BetaSet { beads: core_beads }.to_partition();

    debug_assert_eq!(
        lambda.size(),
        core.size() + p as u64 * quotient.iter().map(Partition::size).sum::<u64>()
    );
    Ok(CoreQuotient {
        core,
        quotient,
        p,
    })
}

/// k(e,w): the number of e-tuples of partitions with total size w, i.e. the
/// coefficient of x^w in prod_{i>=1} (1-x^i)^(-e). Computed by convolving
/// the e-colored part-size factors, polynomial in (e,w).
pub fn k_tuples(e: u64, w: u64) -> Result<BigUint> {
    if e == 0 {
        return if w == 0 {
            Ok(BigUint::one())
        } else {
            Err(Error::Domain("no 0-tuples of partitions of positive size".into()))
        };
    }
    let wu = w as usize;
    let mut dp = vec![BigUint::zero(); wu + 1];
    dp[0] = BigUint::one();
    for i in 1..=wu {
        // Multiply by (1-x^i)^(-e): coefficient of x^(i*m) is C(m+e-1, e-1).
        let mut next = vec![BigUint::zero(); wu + 1];
        let mut binom = BigUint::one();
        let mut m = 0u64;
        loop {
            let shift = i * m as usize;
            if shift > wu {
                break;
            }
            for n in shift..=wu {
                let term = &dp[n - shift] * &binom;
                next[n] += term;
            }
            // C(m+e, e-1) = C(m+e-1, e-1) * (m+e) / (m+1)
            binom = binom * BigUint::from(m + e) / BigUint::from(m + 1);
            m += 1;
        }
        dp = next;
    }
    Ok(dp[wu].clone())
}

/// Number of partitions of n whose p-core equals the p-core of the single-row
/// partition [n], i.e. [n mod p]; exhaustive enumeration.
pub fn count_principal_core_partitions(n: u64, p: u32) -> Result<BigUint> {
    check_modulus(p)?;
    let principal_core = if n % p as u64 == 0 {
        Partition::empty()
    } else {
        Partition::new(vec![(n % p as u64) as u32])?
    };
    let mut count: u64 = 0;
    for lambda in partitions_of(n)? {
        if p_core(&lambda, p)? == principal_core {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Diagram-level rim-hook removal, independent of the abacus route: for
    /// the cell (i,j) with hook length p, the rim hook is peeled off the
    /// border directly.
    fn remove_rim_hook(lambda: &Partition, p: u32) -> Vec<Partition> {
        let parts = lambda.parts();
        let mut results = Vec::new();
        let conj_len = |j: u32| parts.iter().filter(|&&x| x >= j).count();
        for i in 0..parts.len() {
            for j in 1..=parts[i] {
                let arm = parts[i] - j;
                let leg = conj_len(j) as u32 - (i as u32 + 1);
                if arm + leg + 1 != p {
                    continue;
                }
                let r = conj_len(j) - 1; // last row meeting column j
                let mut new_parts: Vec<u32> = Vec::new();
                new_parts.extend_from_slice(&parts[..i]);
                for k in i..r {
                    new_parts.push(parts[k + 1] - 1);
                }
                new_parts.push(j - 1);
                new_parts.extend_from_slice(&parts[r + 1..]);
                new_parts.retain(|&x| x > 0);
                results.push(Partition::new(new_parts).unwrap());
            }
        }
        results
    }

    /// Explore every maximal removal sequence; all must reach one core.
    fn brute_core(
        lambda: &Partition,
        p: u32,
        memo: &mut HashMap<Partition, Partition>,
    ) -> Partition {
        if let Some(c) = memo.get(lambda) {
            return c.clone();
        }
        let children = remove_rim_hook(lambda, p);
        let core = if children.is_empty() {
            lambda.clone()
        } else {
            let mut cores: Vec<Partition> = children
                .iter()
                .map(|c| brute_core(c, p, memo))
                .collect();
            cores.dedup();
            assert_eq!(cores.len(), 1, "removal order changed the {p}-core");
            cores.pop().unwrap()
        };
        memo.insert(lambda.clone(), core.clone());
        core
    }

    #[test]
    fn partitions_of_small() {
        assert_eq!(partitions_of(0).unwrap(), vec![Partition::empty()]);
        assert_eq!(
            partitions_of(4).unwrap(),
            vec![
                pt(&[4]),
                pt(&[3, 1]),
                pt(&[2, 2]),
                pt(&[2, 1, 1]),
                pt(&[1, 1, 1, 1])
            ]
        );
        assert_eq!(partitions_of(5).unwrap().len(), 7);
        assert!(matches!(
            partitions_of(61),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn partition_count_matches_enumeration() {
        for n in 0..=40u64 {
            assert_eq!(
                partition_count(n),
                BigUint::from(partitions_of(n).unwrap().len()),
                "p({n})"
            );
        }
    }

    #[test]
    fn partition_count_cold_cache_consistency() {
        let cold = partition_count_table(100);
        assert_eq!(partition_count(100), cold[100]);
        assert_eq!(cold[5], BigUint::from(7u32));
        assert_eq!(cold[0], BigUint::one());
    }

    #[test]
    fn p_core_examples() {
        assert_eq!(p_core(&pt(&[2, 2]), 2).unwrap(), Partition::empty());
        // (3,1,1) has hook lengths {5,2,2,1,1}: no 3-hook, so it is its own 3-core.
        assert_eq!(p_core(&pt(&[3, 1, 1]), 3).unwrap(), pt(&[3, 1, 1]));
        assert_eq!(p_core(&pt(&[4, 1]), 3).unwrap(), pt(&[1, 1]));
        for n in 1..=12u32 {
            for p in [2, 3, 5, 7] {
                let expect = if n % p == 0 {
                    Partition::empty()
                } else {
                    pt(&[n % p])
                };
                assert_eq!(p_core(&pt(&[n]), p).unwrap(), expect);
            }
        }
        assert!(matches!(p_core(&pt(&[3]), 1), Err(Error::Domain(_))));
    }

    #[test]
    fn p_core_agrees_with_all_removal_orders() {
        for p in [2u32, 3, 5, 7, 11] {
            let mut memo = HashMap::new();
            for n in 0..=14u64 {
                for lambda in partitions_of(n).unwrap() {
                    let expected = brute_core(&lambda, p, &mut memo);
                    assert_eq!(p_core(&lambda, p).unwrap(), expected, "{lambda} mod {p}");
                }
            }
        }
    }

    #[test]
    fn p_weight_examples() {
        assert_eq!(p_weight(&pt(&[2]), 3).unwrap(), 0);
        assert_eq!(p_weight(&pt(&[2, 2]), 2).unwrap(), 2);
        assert_eq!(p_weight(&pt(&[5]), 5).unwrap(), 1);
    }

    #[test]
    fn p_quotient_examples() {
        let cq = p_quotient(&Partition::empty(), 3).unwrap();
        assert_eq!(cq.core, Partition::empty());
        assert_eq!(cq.quotient.len(), 3);
        assert!(cq.quotient.iter().all(Partition::is_empty));

        let cq = p_quotient(&pt(&[2, 2]), 2).unwrap();
        assert_eq!(cq.core, Partition::empty());
        assert_eq!(cq.quotient.iter().map(Partition::size).sum::<u64>(), 2);

        let cq = p_quotient(&pt(&[5]), 5).unwrap();
        assert_eq!(cq.core, Partition::empty());
        let sizes: Vec<u64> = cq.quotient.iter().map(Partition::size).collect();
        assert_eq!(sizes.iter().sum::<u64>(), 1);
        assert!(cq.quotient.contains(&pt(&[1])));
    }

    #[test]
    fn size_identity_and_bijection() {
        for p in [2u32, 3, 5, 7] {
            for n in 0..=14u64 {
                let mut seen = HashMap::new();
                for lambda in partitions_of(n).unwrap() {
                    let cq = p_quotient(&lambda, p).unwrap();
                    let qsize: u64 = cq.quotient.iter().map(Partition::size).sum();
                    assert_eq!(lambda.size(), cq.core.size() + p as u64 * qsize);
                    if n <= 12 {
                        let key = (cq.core.clone(), cq.quotient.clone());
                        assert!(
                            seen.insert(key, lambda.clone()).is_none(),
                            "core/quotient collision at {lambda}"
                        );
                    }
                }
            }
        }
    }

    fn brute_k_tuples(e: u64, w: u64) -> BigUint {
        // Sum over compositions of w into e boxes of the product of p(w_i).
        fn rec(e: u64, w: u64) -> BigUint {
            if e == 0 {
                return if w == 0 { BigUint::one() } else { BigUint::zero() };
            }
            let mut acc = BigUint::zero();
            for first in 0..=w {
                acc += partition_count(first) * rec(e - 1, w - first);
            }
            acc
        }
        rec(e, w)
    }

    #[test]
    fn k_tuples_matches_brute_force() {
        for e in 1..=6u64 {
            for w in 0..=8u64 {
                assert_eq!(k_tuples(e, w).unwrap(), brute_k_tuples(e, w), "k({e},{w})");
            }
        }
        assert_eq!(k_tuples(0, 0).unwrap(), BigUint::one());
        assert!(k_tuples(0, 3).is_err());
    }

    #[test]
    fn k_tuples_paper_constants() {
        assert_eq!(k_tuples(11, 1).unwrap(), BigUint::from(11u32));
        assert_eq!(k_tuples(2, 2).unwrap(), BigUint::from(5u32));
        assert_eq!(k_tuples(2, 4).unwrap(), BigUint::from(20u32));
        for e in [1u64, 3, 9, 40] {
            assert_eq!(k_tuples(e, 0).unwrap(), BigUint::one());
        }
    }

    #[test]
    fn principal_core_counts() {
        assert_eq!(
            count_principal_core_partitions(11, 11).unwrap(),
            k_tuples(11, 1).unwrap()
        );
        // n < p: the principal block is the one containing [n].
        for n in 1..=6u64 {
            let c = count_principal_core_partitions(n, 7).unwrap();
            let by_hand = partitions_of(n)
                .unwrap()
                .iter()
                .filter(|l| p_core(l, 7).unwrap() == pt(&[n as u32]))
                .count();
            assert_eq!(c, BigUint::from(by_hand));
        }
    }

    proptest! {
        #[test]
        fn beta_set_round_trip(parts in proptest::collection::vec(1u32..12, 0..8), pad in 0usize..5) {
            let mut sorted = parts.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            let lambda = Partition::new(sorted).unwrap();
            let len = lambda.parts().len() + pad;
            if len > 0 {
                prop_assert_eq!(lambda.beta_set(len).to_partition(), lambda);
            }
        }

        #[test]
        fn quotient_size_identity(parts in proptest::collection::vec(1u32..10, 0..8), p in 2u32..8) {
            let mut sorted = parts.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            let lambda = Partition::new(sorted).unwrap();
            let cq = p_quotient(&lambda, p).unwrap();
            let qsize: u64 = cq.quotient.iter().map(Partition::size).sum();
            prop_assert_eq!(lambda.size(), cq.core.size() + p as u64 * qsize);
            // The core has no removable rim p-hook: its p-weight is 0.
            prop_assert_eq!(p_weight(&cq.core, p).unwrap(), 0);
        }
    }
}
