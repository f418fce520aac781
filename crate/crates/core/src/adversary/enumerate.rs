//! Brute-force solution sets of `target ≡ Σ x̃_i ξ_i (mod N)` at toy moduli,
//! and the lower bounds on their size.
//!
//! In the distributed setting every coefficient is paired with one unknown
//! per responding fleet, so the variables are `ξ_i^j` for each nonzero
//! position `i` and fleet `j`; tuples are laid out `i`-major.

use num_integer::Integer;
use serde::Serialize;

use crate::{Error, Result};

/// Largest tuple space that will be enumerated.
pub const ENUMERATION_BUDGET: u64 = 1 << 24;

/// Solution tuples are kept only for counts up to this size.
pub const MAX_STORED_TUPLES: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionSet {
    pub modulus: u64,
    pub target: u64,
    /// Nonzero coefficients, in input order.
    pub coefficients: Vec<u64>,
    pub fleets: usize,
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuples: Option<Vec<Vec<u64>>>,
}

impl SolutionSet {
    /// Number of unknowns per tuple.
    pub fn arity(&self) -> usize {
        self.coefficients.len() * self.fleets
    }

    /// Whether `tuple` satisfies the congruence.
    pub fn satisfies(&self, tuple: &[u64]) -> bool {
        if tuple.len() != self.arity() {
            return false;
        }
        let n = u128::from(self.modulus);
        let sum = tuple
            .chunks(self.fleets)
            .zip(&self.coefficients)
            .flat_map(|(xs, &c)| xs.iter().map(move |&x| u128::from(c) * u128::from(x) % n))
            .fold(0u128, |acc, v| (acc + v) % n);
        sum == u128::from(self.target)
    }
}

/// Exact `|Ξ|` for a single responder.
pub fn enumerate_solutions(n: u64, coefficients: &[u64], target: u64) -> Result<SolutionSet> {
    enumerate_solutions_distributed(n, coefficients, target, 1)
}

/// Exact `|Ξ|` when `fleets` responders each contribute an unknown per
/// coefficient. Zero coefficients are dropped before counting.
pub fn enumerate_solutions_distributed(
    n: u64,
    coefficients: &[u64],
    target: u64,
    fleets: usize,
) -> Result<SolutionSet> {
    if n < 2 {
        return Err(Error::InvalidModulus(format!("modulus {n} is below 2")));
    }
    if fleets == 0 {
        return Err(Error::Scenario(
            "at least one responding fleet is required".into(),
        ));
    }
    if target >= n || coefficients.iter().any(|&c| c >= n) {
        return Err(Error::CoefficientOverflow);
    }
    let nonzero: Vec<u64> = coefficients.iter().copied().filter(|&c| c != 0).collect();
    let arity = nonzero.len() * fleets;
    let space = u32::try_from(arity)
        .ok()
        .and_then(|a| n.checked_pow(a))
        .filter(|&s| s <= ENUMERATION_BUDGET)
        .ok_or_else(|| Error::EnumerationBudget {
            required: format!("{n}^{arity}"),
            budget: ENUMERATION_BUDGET,
        })?;

    let weights: Vec<u64> = nonzero
        .iter()
        .flat_map(|&c| std::iter::repeat(c).take(fleets))
        .collect();
    let mut digits = vec![0u64; arity];
    // Running Σ weight·digit mod n. Advancing a digit by one, including the
    // wrap from n−1 to 0, changes the sum by its weight modulo n.
    let mut sum = 0u64;
    let mut count = 0u64;
    let mut tuples = Some(Vec::new());
    for _ in 0..space {
        if sum == target {
            count += 1;
            if let Some(stored) = tuples.as_mut() {
                if count > MAX_STORED_TUPLES {
                    tuples = None;
                } else {
                    stored.push(digits.clone());
                }
            }
        }
        for (d, &w) in digits.iter_mut().zip(&weights) {
            sum = (sum + w) % n;
            *d += 1;
            if *d < n {
                break;
            }
            *d = 0;
        }
    }
    Ok(SolutionSet {
        modulus: n,
        target,
        coefficients: nonzero,
        fleets,
        count,
        tuples,
    })
}

/// Which lower bound applies to a coefficient vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Some nonzero coefficient is a unit: `m·(N−1)^{t−1}`.
    FreeVariable,
    /// No nonzero coefficient is a unit: `2m²·(N−1)^{t−2}`.
    BezoutSplit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub kind: BoundKind,
    pub value: u128,
}

/// `m·(N−1)^{t−1}` for `t ≥ 1`.
pub fn free_variable_bound(n: u64, t: u32, fleets: u64) -> Option<u128> {
    let base = u128::from(n.checked_sub(1)?);
    let pow = base.checked_pow(t.checked_sub(1)?)?;
    pow.checked_mul(u128::from(fleets))
}

/// `2m²·(N−1)^{t−2}` for `t ≥ 2`.
pub fn split_bound(n: u64, t: u32, fleets: u64) -> Option<u128> {
    let base = u128::from(n.checked_sub(1)?);
    let pow = base.checked_pow(t.checked_sub(2)?)?;
    let m = u128::from(fleets);
    pow.checked_mul(2 * m * m)
}

/// The bound matching the coefficients' gcd structure with `N`, or `None`
/// when `t` is too small for it to be stated.
pub fn applicable_bound(n: u64, coefficients: &[u64], fleets: u64) -> Option<Bound> {
    let nonzero: Vec<u64> = coefficients.iter().copied().filter(|&c| c != 0).collect();
    let t = u32::try_from(nonzero.len()).ok()?;
    if nonzero.iter().any(|c| c.gcd(&n) == 1) {
        free_variable_bound(n, t, fleets).map(|value| Bound {
            kind: BoundKind::FreeVariable,
            value,
        })
    } else {
        split_bound(n, t, fleets).map(|value| Bound {
            kind: BoundKind::BezoutSplit,
            value,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent count: dynamic programming over residues.
    fn residue_count(n: u64, weights: &[u64], target: u64) -> u64 {
        let mut ways = vec![0u64; n as usize];
        ways[0] = 1;
        for &w in weights {
            let mut next = vec![0u64; n as usize];
            for (r, &c) in ways.iter().enumerate() {
                for x in 0..n {
                    next[((r as u64 + w * x) % n) as usize] += c;
                }
            }
            ways = next;
        }
        ways[target as usize]
    }

    #[test]
    fn two_units_at_fifteen() {
        let s = enumerate_solutions(15, &[1, 1], 7).unwrap();
        assert_eq!(s.count, 15);
        assert_eq!(free_variable_bound(15, 2, 1), Some(14));
        let tuples = s.tuples.as_ref().unwrap();
        assert_eq!(tuples.len(), 15);
        assert!(tuples.iter().all(|t| s.satisfies(t)));
        assert!(!s.satisfies(&[0, 0]));
    }

    #[test]
    fn no_unit_coefficient_at_fifteen() {
        for target in 0..15 {
            let s = enumerate_solutions(15, &[3, 5], target).unwrap();
            // 3a + 5b hits every residue exactly once per 15 pairs.
            assert_eq!(s.count, 15);
            assert!(s.count >= split_bound(15, 2, 1).unwrap() as u64);
        }
    }

    #[test]
    fn three_coefficients_at_thirty_five() {
        let s = enumerate_solutions(35, &[1, 2, 3], 0).unwrap();
        assert_eq!(s.count, 1225);
        assert!(u128::from(s.count) >= free_variable_bound(35, 3, 1).unwrap());
        assert_eq!(s.tuples.unwrap().len(), 1225);
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let s = enumerate_solutions(15, &[0, 2, 0], 4).unwrap();
        assert_eq!(s.coefficients, vec![2]);
        assert_eq!(s.count, 1);
        assert_eq!(s.tuples.unwrap(), vec![vec![2]]);
    }

    #[test]
    fn distributed_counts() {
        let s = enumerate_solutions_distributed(15, &[7], 3, 2).unwrap();
        assert_eq!(s.count, 15);
        assert!(u128::from(s.count) >= free_variable_bound(15, 1, 2).unwrap());

        let s = enumerate_solutions_distributed(15, &[1, 6], 9, 2).unwrap();
        assert_eq!(s.arity(), 4);
        assert_eq!(s.count, residue_count(15, &[1, 1, 6, 6], 9));
        assert!(s.count >= 28);
        for t in s.tuples.unwrap().iter().take(50) {
            assert_eq!((t[0] + t[1] + 6 * t[2] + 6 * t[3]) % 15, 9);
        }
    }

    #[test]
    fn matches_residue_count() {
        for (n, coeffs) in [
            (15, vec![3, 6, 10]),
            (35, vec![5, 7, 14]),
            (21, vec![1, 3, 7, 9]),
            (15, vec![5, 10]),
        ] {
            for target in 0..n {
                let s = enumerate_solutions(n, &coeffs, target).unwrap();
                assert_eq!(
                    s.count,
                    residue_count(n, &coeffs, target),
                    "{n} {coeffs:?} {target}"
                );
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(enumerate_solutions(64, &[1, 1, 1, 1], 0).is_ok());
        assert!(matches!(
            enumerate_solutions(65, &[1, 1, 1, 1], 0),
            Err(Error::EnumerationBudget { .. })
        ));
        assert!(matches!(
            enumerate_solutions_distributed(15, &[1, 1, 1], 0, 3),
            Err(Error::EnumerationBudget { .. })
        ));
    }

    #[test]
    fn tuple_storage_cap() {
        let s = enumerate_solutions(64, &[1, 1, 1, 1], 0).unwrap();
        assert_eq!(s.count, 64 * 64 * 64);
        assert!(s.tuples.is_none());
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(enumerate_solutions(15, &[15], 0).is_err());
        assert!(enumerate_solutions(15, &[1], 15).is_err());
        assert!(enumerate_solutions(1, &[0], 0).is_err());
        assert!(enumerate_solutions_distributed(15, &[1], 0, 0).is_err());
    }

    #[test]
    fn bounds() {
        assert_eq!(free_variable_bound(15, 3, 1), Some(196));
        assert_eq!(split_bound(15, 3, 1), Some(28));
        assert_eq!(free_variable_bound(15, 2, 2), Some(28));
        assert_eq!(split_bound(15, 3, 2), Some(112));
        assert_eq!(free_variable_bound(15, 0, 1), None);
        assert_eq!(split_bound(15, 1, 1), None);
        assert_eq!(
            applicable_bound(15, &[3, 0, 5, 10], 1),
            Some(Bound {
                kind: BoundKind::BezoutSplit,
                value: 28
            })
        );
        assert_eq!(
            applicable_bound(15, &[3, 4], 1).map(|b| b.kind),
            Some(BoundKind::FreeVariable)
        );
    }
}
