//! Brute-force verification oracles, independent of the chart machinery.
//!
//! Both oracles recompute invariants from first principles so the pipelines
//! can be checked against something that shares none of their code paths.

use crate::error::{Error, Result};
use crate::qspace::{frac, Rat};
use std::collections::BTreeMap;

const PRODUCT_BOUND: i64 = 100_000;
const GENERATOR_BOUND: i64 = 10_000;
const GAP_SCAN_BOUND: usize = 10_000_000;

/// Monodromy eigenvalue arguments of `x^p + y^q` (or `x^p + y^q + z^r`),
/// returned as a multiset of rationals in `[0, 1)`.
///
/// For two exponents these are `frac(i/p + j/q)` over `1 <= i < p`,
/// `1 <= j < q`; three exponents add the third index analogously.
pub fn oracle_quasihomogeneous(exponents: &[i64]) -> Result<BTreeMap<Rat, i64>> {
    if exponents.len() < 2 || exponents.len() > 3 {
        return Err(Error::validation("oracle expects two or three exponents"));
    }
    if exponents.iter().any(|&p| p < 2) {
        return Err(Error::validation("exponents must be at least 2"));
    }
    let product: i64 = exponents.iter().product();
    if product > PRODUCT_BOUND {
        return Err(Error::EnumerationBound {
            bound: PRODUCT_BOUND as u64,
        });
    }
    let mut multiset = BTreeMap::new();
    let mut add = |x: Rat| *multiset.entry(frac(x)).or_insert(0) += 1;
    match exponents {
        [p, q] => {
            for i in 1..*p {
                for j in 1..*q {
                    add(Rat::new(i, *p) + Rat::new(j, *q));
                }
            }
        }
        [p, q, r] => {
            for i in 1..*p {
                for j in 1..*q {
                    for l in 1..*r {
                        add(Rat::new(i, *p) + Rat::new(j, *q) + Rat::new(l, *r));
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(multiset)
}

/// Milnor number of an irreducible plane branch from its value semigroup:
/// twice the number of positive integers missed by the semigroup.
///
/// Gaps are counted by dynamic programming; the scan stops once a full run of
/// the smallest generator consecutive values is representable, after which
/// every larger value is too.
pub fn oracle_semigroup_mu(generators: &[i64]) -> Result<u64> {
    if generators.is_empty() {
        return Err(Error::validation("need at least one generator"));
    }
    if generators.iter().any(|&g| g < 1 || g > GENERATOR_BOUND) {
        return Err(Error::validation(format!(
            "generators must lie in 1..={GENERATOR_BOUND}"
        )));
    }
    let d = generators.iter().fold(0, |acc, &g| num::integer::gcd(acc, g));
    if d != 1 {
        return Err(Error::validation(format!(
            "generators have common factor {d}; the semigroup misses infinitely many values"
        )));
    }
    let g_min = *generators.iter().min().expect("nonempty") as usize;
    if g_min == 1 {
        return Ok(0);
    }
    let mut representable = vec![true];
    let mut gaps = 0u64;
    let mut run = 0usize;
    let mut n = 1usize;
    loop {
        if n > GAP_SCAN_BOUND {
            return Err(Error::EnumerationBound {
                bound: GAP_SCAN_BOUND as u64,
            });
        }
        let ok = generators
            .iter()
            .any(|&g| n >= g as usize && representable[n - g as usize]);
        representable.push(ok);
        if ok {
            run += 1;
            if run == g_min {
                return Ok(2 * gaps);
            }
        } else {
            run = 0;
            gaps += 1;
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qspace::rat;

    #[test]
    fn cusp_eigenvalues() {
        let m = oracle_quasihomogeneous(&[2, 3]).unwrap();
        assert_eq!(m, BTreeMap::from([(rat(1, 6), 1), (rat(5, 6), 1)]));
    }

    #[test]
    fn node_eigenvalue() {
        let m = oracle_quasihomogeneous(&[2, 2]).unwrap();
        assert_eq!(m, BTreeMap::from([(rat(0, 1), 1)]));
    }

    #[test]
    fn triple_eigenvalue() {
        let m = oracle_quasihomogeneous(&[2, 2, 2]).unwrap();
        assert_eq!(m, BTreeMap::from([(rat(1, 2), 1)]));
    }

    #[test]
    fn eigenvalue_count_is_the_milnor_number() {
        let m = oracle_quasihomogeneous(&[4, 6]).unwrap();
        let total: i64 = m.values().sum();
        assert_eq!(total, 15);
    }

    #[test]
    fn oracle_bounds() {
        assert!(oracle_quasihomogeneous(&[2]).is_err());
        assert!(oracle_quasihomogeneous(&[1, 5]).is_err());
        assert!(oracle_quasihomogeneous(&[1000, 1000]).is_err());
    }

    #[test]
    fn semigroup_gap_counts() {
        assert_eq!(oracle_semigroup_mu(&[2, 3]).unwrap(), 2);
        assert_eq!(oracle_semigroup_mu(&[6, 9, 19]).unwrap(), 42);
        assert_eq!(oracle_semigroup_mu(&[1]).unwrap(), 0);
        assert_eq!(oracle_semigroup_mu(&[4, 6, 9]).unwrap(), 2 * 6);
    }

    #[test]
    fn semigroup_validation() {
        assert!(oracle_semigroup_mu(&[]).is_err());
        assert!(oracle_semigroup_mu(&[2, 4]).is_err());
        assert!(oracle_semigroup_mu(&[0, 3]).is_err());
    }
}
