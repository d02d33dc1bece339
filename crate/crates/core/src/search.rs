//! Searches for unit solutions of `x^e + y^e ≡ 2 (mod m)` with `x^e, y^e ≢ 1`,
//! Hensel-lifted witnesses, and point counts on `x^e + y^e = 2z^e`.

use crate::arith::{crt, gcd_u64, is_prime, mod_inv, mod_pow};
use crate::error::{Error, Result};

/// `x, y` units mod `m` with `x^e + y^e ≡ 2` and neither power equal to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitSolution {
    pub m: u64,
    pub e: u64,
    pub x: u64,
    pub y: u64,
    pub xe: u64,
    pub ye: u64,
}

impl UnitSolution {
    /// Recomputes the certificate and checks every condition.
    pub fn new(m: u64, e: u64, x: u64, y: u64) -> Result<Self> {
        let (x, y) = (x % m, y % m);
        let s = UnitSolution { m, e, x, y, xe: mod_pow(x, e, m), ye: mod_pow(y, e, m) };
        if s.is_valid() {
            Ok(s)
        } else {
            Err(Error::InvalidArgument(format!("({x}, {y}) is not a unit solution mod {m} for e = {e}")))
        }
    }

    pub fn is_valid(&self) -> bool {
        let m = self.m;
        m >= 2
            && gcd_u64(self.x, m) == 1
            && gcd_u64(self.y, m) == 1
            && self.xe == mod_pow(self.x, self.e, m)
            && self.ye == mod_pow(self.y, self.e, m)
            && self.xe != 1 % m
            && self.ye != 1 % m
            && (self.xe + self.ye) % m == 2 % m
    }
}

fn power_table(m: u64, e: u64) -> Vec<Option<u64>> {
    (0..m).map(|x| (gcd_u64(x, m) == 1).then(|| mod_pow(x, e, m))).collect()
}

/// The lexicographically least solution, or `None`.
pub fn find_unit_solution(m: u64, e: u64) -> Result<Option<UnitSolution>> {
    if m < 2 || e < 1 {
        return Err(Error::InvalidArgument("need m >= 2 and e >= 1".into()));
    }
    let pw = power_table(m, e);
    // least preimage of each e-th power value
    let mut least = vec![None; m as usize];
    for (x, v) in pw.iter().enumerate() {
        if let Some(v) = *v {
            least[v as usize].get_or_insert(x as u64);
        }
    }
    for (x, v) in pw.iter().enumerate() {
        let Some(v) = *v else { continue };
        if v == 1 % m {
            continue;
        }
        let w = (m + 2 % m - v) % m;
        if w == 1 % m {
            continue;
        }
        if let Some(y) = least[w as usize] {
            return UnitSolution::new(m, e, x as u64, y).map(Some);
        }
    }
    Ok(None)
}

fn has_unit_solution(m: u64, pw: &[Option<u64>], seen: &mut [bool]) -> bool {
    seen.iter_mut().for_each(|s| *s = false);
    for v in pw.iter().flatten() {
        seen[*v as usize] = true;
    }
    pw.iter().flatten().any(|&v| {
        let w = (m + 2 % m - v) % m;
        v != 1 % m && w != 1 % m && seen[w as usize]
    })
}

/// Moduli up to `m_max` without a solution. Verified up to `m_max` only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalC {
    pub e: u64,
    pub m_max: u64,
    pub exceptions: Vec<u64>,
}

impl EmpiricalC {
    /// Largest exception: a lower bound for the constant, not its value.
    pub fn largest(&self) -> Option<u64> {
        self.exceptions.last().copied()
    }
}

pub fn empirical_c(e: u64, m_max: u64) -> Result<EmpiricalC> {
    if e < 1 {
        return Err(Error::InvalidArgument("need e >= 1".into()));
    }
    let mut seen = vec![false; m_max as usize + 1];
    let exceptions = (2..=m_max)
        .filter(|&m| !has_unit_solution(m, &power_table(m, e), &mut seen[..m as usize]))
        .collect();
    Ok(EmpiricalC { e, m_max, exceptions })
}

/// For `p > e`: `x^e = 1 + p^(k-1)`, `y^e = 1 - p^(k-1)` mod `p^k`, by
/// Newton iteration from the root 1. `None` when `p ≤ e`.
pub fn hensel_witness(p: u64, k: u32, e: u64) -> Result<Option<UnitSolution>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k < 2 || e < 1 {
        return Err(Error::InvalidArgument("need k >= 2 and e >= 1".into()));
    }
    if p <= e {
        return Ok(None);
    }
    let m = p
        .checked_pow(k)
        .filter(|&m| m < 1 << 62)
        .ok_or_else(|| Error::InvalidArgument(format!("{p}^{k} is too large")))?;
    let step = p.pow(k - 1);
    let lift = |a: u64| -> Option<u64> {
        let mut x = 1u64;
        for _ in 0..=k + 1 {
            let fx = (mod_pow(x, e, m) + m - a) % m;
            if fx == 0 {
                return Some(x);
            }
            let d = (e as u128 * mod_pow(x, e - 1, m) as u128 % m as u128) as u64;
            let inv = mod_inv(d, m)?;
            x = (x as u128 + m as u128 - (fx as u128 * inv as u128 % m as u128)) as u64 % m;
        }
        None
    };
    let x = lift(1 + step).ok_or(Error::LiftFailed { p, k, e })?;
    let y = lift(m + 1 - step).ok_or(Error::LiftFailed { p, k, e })?;
    UnitSolution::new(m, e, x, y).map(Some).map_err(|_| Error::LiftFailed { p, k, e })
}

/// Combines solutions modulo coprime `m1`, `m2` into one modulo `m1 m2`.
pub fn crt_combine(a: &UnitSolution, b: &UnitSolution) -> Result<UnitSolution> {
    if a.e != b.e {
        return Err(Error::InvalidArgument("exponents differ".into()));
    }
    if gcd_u64(a.m, b.m) != 1 {
        return Err(Error::InvalidArgument("moduli are not coprime".into()));
    }
    UnitSolution::new(a.m * b.m, a.e, crt(a.x, a.m, b.x, b.m), crt(a.y, a.m, b.y, b.m))
}

/// Projective points on `x^e + y^e = 2z^e` over `F_p`, with the Weil check
/// `|N - (p + 1)| ≤ 2g√p` for the smooth plane curve of genus
/// `g = (e - 1)(e - 2)/2` (a classical fact, not derived here).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCount {
    pub p: u64,
    pub e: u64,
    pub affine: u64,
    pub at_infinity: u64,
    pub n: u64,
    /// `N - (p + 1)`
    pub deviation: i64,
    pub weil_ok: bool,
}

impl PointCount {
    pub fn weil_bound(&self) -> f64 {
        plane_curve_factor(self.e) as f64 * (self.p as f64).sqrt()
    }
}

/// `2g = (e - 1)(e - 2)` for a smooth plane curve of degree `e`.
fn plane_curve_factor(e: u64) -> u64 {
    (e - 1) * e.saturating_sub(2)
}

fn check_curve_args(p: u64, e: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e < 1 || e > 10 || p > 100_000 {
        return Err(Error::InvalidArgument("need 1 <= e <= 10 and p <= 100000".into()));
    }
    if (2 * e) % p == 0 {
        return Err(Error::SingularCase { p, e });
    }
    Ok(())
}

/// `cnt[v] = #{x ∈ F_p : x^e = v}`
fn power_counts(p: u64, e: u64) -> Vec<u64> {
    let mut cnt = vec![0u64; p as usize];
    for x in 0..p {
        cnt[mod_pow(x, e, p) as usize] += 1;
    }
    cnt
}

pub fn count_curve_points(p: u64, e: u64) -> Result<PointCount> {
    check_curve_args(p, e)?;
    let cnt = power_counts(p, e);
    let affine: u64 = (0..p).map(|v| cnt[v as usize] * cnt[((2 + p - v) % p) as usize]).sum();
    // z = 0 forces y ≠ 0; scale y = 1, then x^e = -1
    let at_infinity = cnt[(p - 1) as usize];
    let n = affine + at_infinity;
    let deviation = n as i64 - (p as i64 + 1);
    let c = plane_curve_factor(e) as i128;
    let weil_ok = (deviation as i128).pow(2) <= c * c * p as i128;
    Ok(PointCount { p, e, affine, at_infinity, n, deviation, weil_ok })
}

/// Affine points with `x^e` or `y^e` in `{0, 1}`.
pub fn near_unit_points(p: u64, e: u64) -> Result<u64> {
    check_curve_args(p, e)?;
    let cnt = power_counts(p, e);
    Ok((0..p)
        .map(|v| {
            let w = (2 + p - v) % p;
            if v <= 1 || w <= 1 {
                cnt[v as usize] * cnt[w as usize]
            } else {
                0
            }
        })
        .sum())
}

/// The number of such points is at most `(e + 1)^2`.
pub fn near_units_bound_check(p: u64, e: u64) -> Result<bool> {
    Ok(near_unit_points(p, e)? <= (e + 1) * (e + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    // pair scan in lexicographic order
    fn brute(m: u64, e: u64) -> Option<(u64, u64)> {
        for x in 0..m {
            for y in 0..m {
                if gcd_u64(x, m) != 1 || gcd_u64(y, m) != 1 {
                    continue;
                }
                let (a, b) = (mod_pow(x, e, m), mod_pow(y, e, m));
                if a != 1 % m && b != 1 % m && (a + b) % m == 2 % m {
                    return Some((x, y));
                }
            }
        }
        None
    }

    #[test]
    fn unit_solution_examples() {
        let s = find_unit_solution(12, 1).unwrap().unwrap();
        assert_eq!((s.x, s.y), (7, 7));
        assert!(find_unit_solution(6, 1).unwrap().is_none());
        let s = find_unit_solution(41, 2).unwrap().unwrap();
        assert_eq!(s.x, 2);
        assert_eq!((s.xe, s.ye), (4, 39));
        let s = find_unit_solution(5, 1).unwrap().unwrap();
        assert_eq!((s.x, s.y), (3, 4));
    }

    #[test]
    fn matches_pair_scan() {
        for e in 1..=4 {
            for m in 2..=60 {
                let got = find_unit_solution(m, e).unwrap().map(|s| (s.x, s.y));
                assert_eq!(got, brute(m, e), "m={m} e={e}");
            }
        }
    }

    #[test]
    fn empirical() {
        let r = empirical_c(1, 200).unwrap();
        assert!(r.exceptions.contains(&6));
        for m in 2..=200 {
            assert_eq!(r.exceptions.contains(&m), brute(m, 1).is_none(), "m={m}");
        }
        let r = empirical_c(2, 100).unwrap();
        for m in 2..=100 {
            assert_eq!(r.exceptions.contains(&m), brute(m, 2).is_none(), "m={m}");
        }
    }

    #[test]
    fn hensel() {
        let s = hensel_witness(5, 2, 1).unwrap().unwrap();
        assert_eq!((s.x, s.y), (6, 21));
        let s = hensel_witness(5, 2, 3).unwrap().unwrap();
        assert_eq!(s.xe, 6);
        assert_eq!(s.ye, 21);
        assert_eq!(hensel_witness(3, 2, 3).unwrap(), None);
        for (p, k, e) in [(7, 3, 2), (11, 4, 5), (13, 2, 12), (101, 3, 6)] {
            let s = hensel_witness(p, k, e).unwrap().unwrap();
            assert!(s.is_valid());
            assert!(find_unit_solution(s.m, e).unwrap().is_some());
        }
    }

    #[test]
    fn crt() {
        let a = find_unit_solution(5, 1).unwrap().unwrap();
        let b = find_unit_solution(7, 1).unwrap().unwrap();
        let c = crt_combine(&a, &b).unwrap();
        assert_eq!(c.m, 35);
        assert!(c.is_valid());
        assert_eq!((c.x % 5, c.x % 7), (a.x, b.x));
    }

    #[test]
    fn point_counts() {
        let c = count_curve_points(7, 1).unwrap();
        assert_eq!((c.n, c.deviation), (8, 0));
        let c = count_curve_points(7, 2).unwrap();
        assert_eq!(c.n, 8);
        assert!(c.weil_ok);
        assert_eq!(count_curve_points(3, 3).unwrap_err(), Error::SingularCase { p: 3, e: 3 });
        // brute projective count for a small case
        let (p, e) = (13u64, 3u64);
        let mut n = 0;
        for x in 0..p {
            for y in 0..p {
                if (mod_pow(x, e, p) + mod_pow(y, e, p)) % p == 2 % p {
                    n += 1;
                }
            }
        }
        n += (0..p).filter(|&x| (mod_pow(x, e, p) + 1) % p == 0).count() as u64;
        assert_eq!(count_curve_points(p, e).unwrap().n, n);
    }

    #[test]
    fn near_units() {
        for p in [3, 5, 7, 101] {
            assert_eq!(near_unit_points(p, 1).unwrap(), 3);
        }
        assert!(near_unit_points(13, 2).unwrap() <= 9);
        assert!(near_units_bound_check(13, 2).unwrap());
    }
}
