//! Recognition and decomposition of ℓ-admissible conductors.

use crate::arith::{factorize, is_prime, Factorization};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConductorError {
    #[error("{0} is not an odd prime")]
    InvalidEll(u64),
    #[error("{c} is not a conductor of cyclic fields of degree {ell}")]
    Inadmissible { ell: u64, c: u64 },
    #[error("discriminant {c}^{exp} does not fit in 63 bits")]
    Overflow { c: u64, exp: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conductor {
    pub ell: u64,
    pub c: u64,
    /// Exponent of ℓ in c, either 0 or 2.
    pub e: u32,
    /// Ramified primes ascending; ℓ itself is recorded as ℓ².
    pub ramified_primes: Vec<u64>,
    pub t: usize,
    pub tau: usize,
}

impl Conductor {
    pub fn multiplicity(&self) -> u64 {
        (self.ell - 1).pow(self.t as u32 - 1)
    }
}

fn check_ell(ell: u64) -> Result<(), ConductorError> {
    if ell > 2 && is_prime(ell) {
        Ok(())
    } else {
        Err(ConductorError::InvalidEll(ell))
    }
}

/// Admissibility from a known factorization. `c = 1` is rejected.
pub fn is_admissible_factored(ell: u64, f: &Factorization) -> bool {
    !f.factors.is_empty()
        && f.factors.iter().all(|&(q, n)| (q % ell == 1 && n == 1) || (q == ell && n == 2))
}

pub fn is_admissible(ell: u64, c: u64) -> bool {
    c > 1 && check_ell(ell).is_ok() && is_admissible_factored(ell, &factorize(c))
}

pub fn decompose_factored(ell: u64, f: &Factorization) -> Result<Conductor, ConductorError> {
    check_ell(ell)?;
    if !is_admissible_factored(ell, f) {
        return Err(ConductorError::Inadmissible { ell, c: f.value });
    }
    let e = f.exponent_of(ell);
    let mut ramified_primes: Vec<u64> = f.factors.iter().map(|&(q, n)| q.pow(n)).collect();
    ramified_primes.sort_unstable();
    let t = ramified_primes.len();
    let tau = if e == 2 { t - 1 } else { t };
    Ok(Conductor { ell, c: f.value, e, ramified_primes, t, tau })
}

pub fn decompose(ell: u64, c: u64) -> Result<Conductor, ConductorError> {
    check_ell(ell)?;
    if c < 2 {
        return Err(ConductorError::Inadmissible { ell, c });
    }
    decompose_factored(ell, &factorize(c))
}

pub fn multiplicity(ell: u64, c: u64) -> Result<u64, ConductorError> {
    Ok(decompose(ell, c)?.multiplicity())
}

pub fn discriminant(ell: u64, c: u64) -> Result<u64, ConductorError> {
    decompose(ell, c)?;
    let exp = (ell - 1) as u32;
    c.checked_pow(exp)
        .filter(|&d| d <= i64::MAX as u64)
        .ok_or(ConductorError::Overflow { c, exp })
}

/// Number of primitive ambiguous ideals and of primitive ambiguous principal
/// ideals (including the trivial one) of a cyclic cubic field with t ramified primes.
pub fn ambiguous_counts(t: u32) -> (u64, u64) {
    (3u64.pow(t), 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(3, 7));
        assert!(!is_admissible(3, 21));
        assert!(is_admissible(5, 275));
        assert!(!is_admissible(3, 1));
        assert!(!is_admissible(3, 27));
        assert!(!is_admissible(4, 13));
    }

    #[test]
    fn decompose_examples() {
        let c = decompose(3, 63).unwrap();
        assert_eq!((c.e, c.ramified_primes.clone(), c.t, c.tau), (2, vec![7, 9], 2, 1));
        let c = decompose(3, 4711).unwrap();
        assert_eq!((c.e, c.ramified_primes.clone(), c.t), (0, vec![7, 673], 2));
        assert_eq!(decompose(3, 819).unwrap().ramified_primes, vec![7, 9, 13]);
        assert_eq!(decompose(3, 12), Err(ConductorError::Inadmissible { ell: 3, c: 12 }));
        assert_eq!(decompose(3, 1), Err(ConductorError::Inadmissible { ell: 3, c: 1 }));
    }

    #[test]
    fn multiplicity_and_discriminant() {
        assert_eq!(multiplicity(3, 7), Ok(1));
        assert_eq!(multiplicity(3, 819), Ok(4));
        assert_eq!(multiplicity(5, 8525), Ok(16));
        assert_eq!(discriminant(3, 7), Ok(49));
        assert_eq!(discriminant(3, 63), Ok(3969));
        assert_eq!(discriminant(5, 11), Ok(14641));
        let big = 11 * 31 * 41 * 61 * 71;
        assert!(matches!(discriminant(5, big), Err(ConductorError::Overflow { .. })));
    }

    #[test]
    fn ambiguous() {
        assert_eq!(ambiguous_counts(1), (3, 3));
        assert_eq!(ambiguous_counts(2), (9, 3));
        assert_eq!(ambiguous_counts(3), (27, 3));
    }

    // Digit-by-digit restatement of the filtering loop: strip each admissible
    // prime power by repeated division and see whether anything is left.
    fn admissible_oracle(ell: u64, c: u64) -> bool {
        if c < 2 {
            return false;
        }
        let mut rest = c;
        let mut q = 2;
        while q <= rest {
            let mut n = 0;
            while rest.is_multiple_of(q) {
                rest /= q;
                n += 1;
            }
            if n > 0 && !((q % ell == 1 && n == 1) || (q == ell && n == 2)) {
                return false;
            }
            q += 1;
        }
        true
    }

    #[test]
    fn oracle_below_ten_thousand() {
        for ell in [3, 5, 7] {
            for c in 1..10_000 {
                assert_eq!(is_admissible(ell, c), admissible_oracle(ell, c), "ell={ell} c={c}");
            }
        }
    }

    #[test]
    fn admissible_below_hundred() {
        let v: Vec<u64> = (1..100).filter(|&c| is_admissible(3, c)).collect();
        assert_eq!(v, vec![7, 9, 13, 19, 31, 37, 43, 61, 63, 67, 73, 79, 91, 97]);
    }

    proptest! {
        #[test]
        fn invariants_hold(c in 2u64..2_000_000, ell in prop::sample::select(vec![3u64, 5, 7])) {
            if let Ok(k) = decompose(ell, c) {
                let body: u64 = k.ramified_primes.iter().product();
                prop_assert_eq!(body, c);
                prop_assert_eq!(k.t, k.tau + if k.e == 2 { 1 } else { 0 });
                prop_assert!(k.ramified_primes.windows(2).all(|w| w[0] < w[1]));
                prop_assert_eq!(k.multiplicity(), (ell - 1).pow(k.t as u32 - 1));
            }
        }
    }
}
