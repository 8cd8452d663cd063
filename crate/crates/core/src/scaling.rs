//! Exact arithmetic of scaling factors and scaling groups.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_integer::{Integer, Roots};
use num_rational::Ratio;

use crate::error::{Error, Result};

/// A positive rational scaling factor in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScalingFactor(Ratio<u64>);

impl ScalingFactor {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::ZeroOrNegative);
        }
        Ok(ScalingFactor(Ratio::new(num, den)))
    }

    pub fn one() -> Self {
        ScalingFactor(Ratio::from_integer(1))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<u64> {
        self.0
    }

    /// Product, reducing crosswise first so that only the result can overflow.
    pub fn compose(self, other: ScalingFactor) -> Result<Self> {
        let g1 = self.numer().gcd(&other.denom());
        let g2 = other.numer().gcd(&self.denom());
        let num = (self.numer() / g1).checked_mul(other.numer() / g2).ok_or(Error::Overflow)?;
        let den = (self.denom() / g2).checked_mul(other.denom() / g1).ok_or(Error::Overflow)?;
        Ok(ScalingFactor(Ratio::new_raw(num, den)))
    }

    pub fn inverse(self) -> Self {
        ScalingFactor(Ratio::new_raw(self.denom(), self.numer()))
    }

    /// Scaling factor `i2 / i1` of the inclusion `Γ_1 -> Γ` composed with a
    /// quasi-inverse of `Γ_2 -> Γ`, for subgroups of indices `i1` and `i2`.
    pub fn index_ratio(i1: u64, i2: u64) -> Result<Self> {
        Self::new(i2, i1)
    }
}

impl fmt::Display for ScalingFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for ScalingFactor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(alloc::format!("{s:?} is not a positive rational p/q"));
        let (p, q) = s.split_once('/').unwrap_or((s, "1"));
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        Self::new(p, q)
    }
}

/// A multiplicative subgroup of the positive reals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ScalingGroup {
    Trivial,
    /// Rationals whose numerator and denominator only involve these primes.
    PrimeGenerated(Vec<u64>),
    /// All positive reals; only known symbolically.
    AllPositiveReals,
}

/// Result of a membership query. `symbolic` is set when the answer comes from
/// the [`ScalingGroup::AllPositiveReals`] marker rather than arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub symbolic: bool,
}

impl ScalingGroup {
    /// Validates and normalises a prime list.
    pub fn prime_generated(mut primes: Vec<u64>) -> Result<Self> {
        primes.sort_unstable();
        primes.dedup();
        if primes.is_empty() {
            return Err(Error::InvalidArgument("prime set must be nonempty".into()));
        }
        if let Some(p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::InvalidArgument(alloc::format!("{p} is not prime")));
        }
        Ok(ScalingGroup::PrimeGenerated(primes))
    }

    pub fn contains(&self, q: ScalingFactor) -> Membership {
        let member = match self {
            ScalingGroup::Trivial => q == ScalingFactor::one(),
            ScalingGroup::PrimeGenerated(ps) => {
                let covered = |n: u64| prime_factors(n).iter().all(|(p, _)| ps.contains(p));
                covered(q.numer()) && covered(q.denom())
            }
            ScalingGroup::AllPositiveReals => {
                return Membership {
                    member: true,
                    symbolic: true,
                }
            }
        };
        Membership {
            member,
            symbolic: false,
        }
    }
}

impl fmt::Display for ScalingGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalingGroup::Trivial => f.write_str("trivial"),
            ScalingGroup::AllPositiveReals => f.write_str("reals"),
            ScalingGroup::PrimeGenerated(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for ScalingGroup {
    type Err = Error;

    /// `trivial`, `reals`, or a comma list of primes.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "trivial" => Ok(ScalingGroup::Trivial),
            "reals" => Ok(ScalingGroup::AllPositiveReals),
            list => {
                let primes = list
                    .split(',')
                    .map(|p| {
                        p.trim()
                            .parse()
                            .map_err(|_| Error::Parse(alloc::format!("bad prime {p:?}")))
                    })
                    .collect::<Result<Vec<u64>>>()?;
                Self::prime_generated(primes)
            }
        }
    }
}

/// Named groups whose scaling group is all of the positive reals.
pub fn preset(name: &str) -> Option<ScalingGroup> {
    match name {
        "carnot" | "sol" | "bs" => Some(ScalingGroup::AllPositiveReals),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ends {
    OneEnded,
    TwoEnded,
}

/// Scaling group of `F wr H` with `|F| = n`: trivial over a one-ended base,
/// generated by the primes of `n` over a two-ended one.
pub fn lamplighter_sc(n: u64, base: Ends) -> Result<ScalingGroup> {
    if n < 2 {
        return Err(Error::BadModulus(n));
    }
    Ok(match base {
        Ends::OneEnded => ScalingGroup::Trivial,
        Ends::TwoEnded => ScalingGroup::PrimeGenerated(prime_factors(n).into_iter().map(|(p, _)| p).collect()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LampWitness {
    pub k: u64,
    pub r: u64,
    pub s: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LampVerdict {
    pub qi: bool,
    /// `n = k^r`, `m = k^s` with the largest common base `k`; present whenever
    /// a common base exists, whether or not the ratio lies in the group.
    pub witness: Option<LampWitness>,
    pub symbolic: bool,
}

/// Whether `F_n wr H` and `F_m wr H` are quasi-isometric for a one-ended
/// amenable base `H` with scaling group `sc_h`: iff `n = k^r`, `m = k^s` and
/// `r/s` lies in `sc_h`.
pub fn qi_lamplighter_predicate(n: u64, m: u64, sc_h: &ScalingGroup) -> Result<LampVerdict> {
    if n < 2 {
        return Err(Error::BadModulus(n));
    }
    if m < 2 {
        return Err(Error::BadModulus(m));
    }
    let (root_n, e_n) = primitive_root(n);
    let (root_m, e_m) = primitive_root(m);
    if root_n != root_m {
        return Ok(LampVerdict {
            qi: false,
            witness: None,
            symbolic: false,
        });
    }
    let g = e_n.gcd(&e_m);
    let (r, s) = (e_n / g, e_m / g);
    let k = root_n.pow(g as u32);
    let membership = sc_h.contains(ScalingFactor::new(r, s)?);
    Ok(LampVerdict {
        qi: membership.member,
        witness: Some(LampWitness { k, r, s }),
        symbolic: membership.symbolic,
    })
}

/// `n = root^e` with `e` maximal, by exact integer roots.
pub fn primitive_root(n: u64) -> (u64, u64) {
    if n < 4 {
        return (n, 1);
    }
    let max_e = 63 - n.leading_zeros() as u64;
    for e in (2..=max_e).rev() {
        let r = n.nth_root(e as u32);
        if r.checked_pow(e as u32) == Some(n) {
            return (r, e);
        }
    }
    (n, 1)
}

/// Prime factorization by trial division, primes increasing.
pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [(n, 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ScalingFactor {
        s.parse().unwrap()
    }

    #[test]
    fn factor_algebra() {
        assert_eq!(q("1/2").compose(q("1/3")).unwrap(), q("1/6"));
        assert_eq!(q("3/4").inverse(), q("4/3"));
        assert_eq!(ScalingFactor::index_ratio(2, 4).unwrap(), q("2"));
        assert_eq!(ScalingFactor::new(0, 1), Err(Error::ZeroOrNegative));
        assert_eq!(q("6/4"), q("3/2"));
    }

    #[test]
    fn lamplighter_groups() {
        assert_eq!(lamplighter_sc(12, Ends::TwoEnded).unwrap(), ScalingGroup::PrimeGenerated(alloc::vec![2, 3]));
        assert_eq!(lamplighter_sc(8, Ends::TwoEnded).unwrap(), ScalingGroup::PrimeGenerated(alloc::vec![2]));
        assert_eq!(lamplighter_sc(5, Ends::OneEnded).unwrap(), ScalingGroup::Trivial);
        assert_eq!(lamplighter_sc(1, Ends::OneEnded), Err(Error::BadModulus(1)));
    }

    #[test]
    fn membership() {
        let g = ScalingGroup::prime_generated(alloc::vec![3, 2]).unwrap();
        assert!(g.contains(q("9/8")).member);
        assert!(!ScalingGroup::prime_generated(alloc::vec![2]).unwrap().contains(q("3")).member);
        assert!(ScalingGroup::Trivial.contains(q("1")).member);
        let m = ScalingGroup::AllPositiveReals.contains(q("7/5"));
        assert!(m.member && m.symbolic);
        assert!(ScalingGroup::prime_generated(alloc::vec![4]).is_err());
    }

    #[test]
    fn lamplighter_predicate() {
        let v = qi_lamplighter_predicate(2, 4, &ScalingGroup::Trivial).unwrap();
        assert!(!v.qi);
        assert_eq!(v.witness, Some(LampWitness { k: 2, r: 1, s: 2 }));
        let v = qi_lamplighter_predicate(8, 8, &ScalingGroup::Trivial).unwrap();
        assert!(v.qi);
        assert_eq!(v.witness, Some(LampWitness { k: 8, r: 1, s: 1 }));
        let g = ScalingGroup::prime_generated(alloc::vec![2, 3]).unwrap();
        let v = qi_lamplighter_predicate(4, 8, &g).unwrap();
        assert!(v.qi);
        assert_eq!(v.witness, Some(LampWitness { k: 2, r: 2, s: 3 }));
        assert!(!qi_lamplighter_predicate(6, 12, &ScalingGroup::AllPositiveReals).unwrap().qi);
    }

    #[test]
    fn roots() {
        assert_eq!(primitive_root(64), (2, 6));
        assert_eq!(primitive_root(36), (6, 2));
        assert_eq!(primitive_root(12), (12, 1));
        assert_eq!(primitive_root(u64::MAX), (u64::MAX, 1));
        assert_eq!(prime_factors(360), alloc::vec![(2, 3), (3, 2), (5, 1)]);
    }
}
