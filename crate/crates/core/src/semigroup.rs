//! Numerical semigroups and the gap-count genus bound.

use crate::arith::{gcd_u64, is_prime};
use crate::error::{Error, Result};

pub const SIEVE_CAP: u64 = 10_000_000;

/// A cofinite submonoid `⟨a_1, ..., a_k⟩` of the nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericalSemigroup {
    generators: Vec<u64>,
    /// `via[m]`: index of a generator `a` with `m - a` a member, for members `m > 0` below the sieve limit
    via: Vec<Option<u32>>,
    gaps: Vec<u64>,
}

impl NumericalSemigroup {
    pub fn new(gens: &[u64]) -> Result<Self> {
        let mut g: Vec<u64> = gens.to_vec();
        g.sort_unstable();
        g.dedup();
        if g.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if g[0] == 0 {
            return Err(Error::InvalidArgument("generators must be positive".into()));
        }
        let d = g.iter().fold(0, |a, &b| gcd_u64(a, b));
        if d != 1 {
            return Err(Error::NotCofinite { gcd: d });
        }
        let (lo, hi) = (g[0], *g.last().unwrap());
        // Frobenius number < (lo - 1)(hi - 1)
        let limit = (lo - 1) * (hi - 1) + hi;
        if limit > SIEVE_CAP {
            return Err(Error::CapExceeded { what: "sieve length", size: limit as u128, cap: SIEVE_CAP as u128 });
        }
        let n = limit as usize + 1;
        let mut member = vec![false; n];
        let mut via = vec![None; n];
        member[0] = true;
        for m in 1..n {
            if let Some(i) = g.iter().position(|&a| a as usize <= m && member[m - a as usize]) {
                member[m] = true;
                via[m] = Some(i as u32);
            }
        }
        let gaps = (1..n).filter(|&m| !member[m]).map(|m| m as u64).collect();
        Ok(NumericalSemigroup { generators: g, via, gaps })
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn gaps(&self) -> &[u64] {
        &self.gaps
    }

    pub fn genus(&self) -> usize {
        self.gaps.len()
    }

    /// Largest gap, `-1` when there are none.
    pub fn frobenius(&self) -> i64 {
        self.gaps.last().map_or(-1, |&f| f as i64)
    }

    pub fn is_member(&self, m: u64) -> bool {
        match self.gaps.last() {
            Some(&f) if m <= f => self.gaps.binary_search(&m).is_err(),
            _ => true,
        }
    }

    /// Nonnegative coefficients `c` with `Σ c_i a_i = m`, or `None` for a gap.
    pub fn decompose(&self, m: u64) -> Option<Vec<u64>> {
        if !self.is_member(m) {
            return None;
        }
        let mut c = vec![0u64; self.generators.len()];
        let mut r = m as usize;
        let top = self.via.len() - 1;
        if r > top {
            // past the sieve everything is a member; step down by the least generator
            let lo = self.generators[0] as usize;
            let k = (r - top).div_ceil(lo);
            c[0] = k as u64;
            r -= k * lo;
        }
        while r > 0 {
            let i = self.via[r].expect("members below the limit have a predecessor") as usize;
            c[i] += 1;
            r -= self.generators[i] as usize;
        }
        Some(c)
    }
}

/// Every `m` in `[(a-1)(b-1), bound]` lies in `⟨a, b⟩`, and `ab - a - b` does not.
pub fn check_postage(a: u64, b: u64, bound: u64) -> Result<bool> {
    if a < 2 || b < 2 {
        return Err(Error::InvalidArgument("postage generators must be at least 2".into()));
    }
    if gcd_u64(a, b) != 1 {
        return Err(Error::HypothesisNotMet(format!("gcd({a}, {b}) = {} is not 1", gcd_u64(a, b))));
    }
    let s = NumericalSemigroup::new(&[a, b])?;
    let start = (a - 1) * (b - 1);
    Ok((start..=bound).all(|m| s.is_member(m)) && !s.is_member(start - 1))
}

/// `{2r - 1 : 2 ≤ r ≤ r_max, r mod p ∉ {0, 1, p - 1}}`.
pub fn admissible_odd_nongaps(p: u64, r_max: u64) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::OddPrimeRequired(p));
    }
    Ok((2..=r_max)
        .filter(|r| {
            let c = r % p;
            c != 0 && c != 1 && c != p - 1
        })
        .map(|r| 2 * r - 1)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exclusion {
    pub genus: u64,
    /// a nongap `m` with `1 ≤ m ≤ genus`, making `P` a Weierstrass point
    pub small_nongap: u64,
    /// size `p - 1` of the inertia orbit of `P`
    pub orbit: u64,
    pub max_weierstrass_points: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusBound {
    pub p: u64,
    pub nongaps: Vec<u64>,
    pub gaps: Vec<u64>,
    pub gap_bound: u64,
    pub exclusions: Vec<Exclusion>,
    pub bound: u64,
}

/// Genus bound from the odd nongaps, then the Weierstrass-point count.
pub fn genus_bound_pipeline(p: u64) -> Result<GenusBound> {
    if p < 5 {
        return Err(Error::InvalidArgument(format!("genus bound needs p >= 5, got {p}")));
    }
    let nongaps = admissible_odd_nongaps(p, p)?;
    let s = NumericalSemigroup::new(&nongaps)?;
    let gap_bound = s.genus() as u64;
    let mut g = gap_bound;
    let mut exclusions = Vec::new();
    loop {
        let small = (1..=g).find(|&m| s.is_member(m));
        let weier = g.saturating_pow(3).saturating_sub(g);
        match small {
            Some(m) if g > 0 && p - 1 > weier => {
                exclusions.push(Exclusion { genus: g, small_nongap: m, orbit: p - 1, max_weierstrass_points: weier });
                g -= 1;
            }
            _ => break,
        }
    }
    Ok(GenusBound { p, nongaps, gaps: s.gaps().to_vec(), gap_bound, exclusions, bound: g })
}

#[cfg(test)]
mod tests {
    use super::*;

    // membership by unbounded search over coefficient vectors
    fn brute_member(gens: &[u64], m: u64) -> bool {
        let mut reach = vec![false; m as usize + 1];
        reach[0] = true;
        for x in 1..=m as usize {
            reach[x] = gens.iter().any(|&a| a as usize <= x && reach[x - a as usize]);
        }
        reach[m as usize]
    }

    #[test]
    fn examples() {
        let s = NumericalSemigroup::new(&[3, 5]).unwrap();
        assert_eq!(s.gaps(), &[1, 2, 4, 7]);
        assert_eq!(s.frobenius(), 7);
        assert_eq!(s.genus(), 4);
        assert!(s.is_member(8) && !s.is_member(7) && s.is_member(0));
        let s = NumericalSemigroup::new(&[3, 5, 7]).unwrap();
        assert_eq!(s.gaps(), &[1, 2, 4]);
        let s = NumericalSemigroup::new(&[1]).unwrap();
        assert!(s.gaps().is_empty());
        assert_eq!(s.frobenius(), -1);
        assert_eq!(NumericalSemigroup::new(&[4, 6]).unwrap_err(), Error::NotCofinite { gcd: 2 });
        assert_eq!(NumericalSemigroup::new(&[]).unwrap_err(), Error::EmptyGenerators);
    }

    #[test]
    fn sieve_matches_search() {
        for gens in [vec![6, 10, 15], vec![4, 7], vec![5, 8, 9, 11], vec![11, 13]] {
            let s = NumericalSemigroup::new(&gens).unwrap();
            for m in 0..=300 {
                assert_eq!(s.is_member(m), brute_member(&gens, m), "{gens:?} {m}");
                match s.decompose(m) {
                    Some(c) => assert_eq!(c.iter().zip(s.generators()).map(|(x, a)| x * a).sum::<u64>(), m),
                    None => assert!(!s.is_member(m)),
                }
            }
        }
    }

    #[test]
    fn postage() {
        assert!(check_postage(3, 5, 100).unwrap());
        assert!(check_postage(2, 3, 50).unwrap());
        assert_eq!(NumericalSemigroup::new(&[2, 3]).unwrap().gaps(), &[1]);
        assert!(matches!(check_postage(2, 2, 10), Err(Error::HypothesisNotMet(_))));
    }

    #[test]
    fn odd_nongaps() {
        assert_eq!(admissible_odd_nongaps(5, 3).unwrap(), vec![3, 5]);
        assert_eq!(admissible_odd_nongaps(7, 4).unwrap(), vec![3, 5, 7]);
        assert_eq!(admissible_odd_nongaps(5, 4).unwrap(), vec![3, 5]);
    }

    #[test]
    fn genus_bounds() {
        assert_eq!(genus_bound_pipeline(5).unwrap().bound, 4);
        assert_eq!(genus_bound_pipeline(7).unwrap().bound, 3);
        let r = genus_bound_pipeline(29).unwrap();
        assert_eq!(r.bound, 2);
        assert_eq!(r.exclusions[0].genus, 3);
        assert_eq!(r.exclusions[0].max_weierstrass_points, 24);
        assert_eq!(genus_bound_pipeline(23).unwrap().bound, 3);
    }
}
