//! Theorem oracles: each checks its hypotheses on a concrete instance,
//! refusing with `HypothesisNotMet` when one fails, then evaluates the
//! conclusion.

use crate::action::ActionGroup;
use crate::almost_fixed::is_almost_fixed_module;
use crate::arith::{gcd_u64, is_p_power};
use crate::error::{Error, Result};
use crate::group::{Endomorphism, FinAbGroup, ModuleElement, Subgroup};
use crate::inertia::{
    check_odd_prime, find_semistable_filtration, is_ordinary_good, verify_ordinary_semistable, CyclotomicContext,
    SemistableWitness,
};

fn unmet(what: impl Into<String>) -> Error {
    Error::HypothesisNotMet(what.into())
}

fn require_semistable(ctx: &CyclotomicContext, w: &SemistableWitness) -> Result<()> {
    verify_ordinary_semistable(ctx, &mut w.clone()).map_err(|e| unmet(format!("ordinary semistable: {e}")))
}

fn require_almost_unramified(ctx: &CyclotomicContext) -> Result<()> {
    match is_almost_fixed_module(ctx.group()).witness {
        None => Ok(()),
        Some((g, h)) => Err(unmet(format!("almost unramified: pair ({g}, {h}) violates it"))),
    }
}

fn require_p_adic(ctx: &CyclotomicContext) -> Result<()> {
    if ctx.is_p_adic() {
        Ok(())
    } else {
        Err(unmet("character is not trivial on prime-to-p roots of unity"))
    }
}

fn require_full(ctx: &CyclotomicContext) -> Result<()> {
    if ctx.is_full() {
        Ok(())
    } else {
        Err(unmet(format!("character is not onto (Z/{})^*", ctx.p_modulus())))
    }
}

/// Semistable, almost unramified, `p`-adic and full: the hypotheses shared by
/// the chiprop, tametheorem, splitting, splittingcor and stabilizer oracles.
pub fn require_standard(ctx: &CyclotomicContext, w: &SemistableWitness) -> Result<()> {
    require_semistable(ctx, w)?;
    require_almost_unramified(ctx)?;
    require_p_adic(ctx)?;
    require_full(ctx)
}

/// Semistable and almost unramified of order prime to `p`: the action is trivial.
pub fn oracle_triviallemma(ctx: &CyclotomicContext, w: &SemistableWitness) -> Result<bool> {
    if gcd_u64(ctx.parent().order(), ctx.p()) != 1 {
        return Err(unmet("module order is divisible by p"));
    }
    require_semistable(ctx, w)?;
    require_almost_unramified(ctx)?;
    require_p_adic(ctx)?;
    Ok(ctx.group().acts_trivially())
}

/// `I(∞)` acts trivially.
pub fn oracle_abelian(ctx: &CyclotomicContext, w: &SemistableWitness) -> Result<bool> {
    require_semistable(ctx, w)?;
    require_almost_unramified(ctx)?;
    require_p_adic(ctx)?;
    Ok(ctx.infinity_kernel().into_iter().all(|i| ctx.group().element(i).is_identity()))
}

/// `χ(g) + χ(h) ≡ 2` modulo `|M_p|` gives `(g + h - 2)M_p = 0`.
///
/// The congruence is read modulo `gcd(|M_p|, N)`, the precision at which
/// `χ` is known; the action on `M_p` only depends on `χ` to that precision.
pub fn oracle_chiprop(ctx: &CyclotomicContext, w: &SemistableWitness, g: usize, h: usize) -> Result<bool> {
    require_standard(ctx, w)?;
    let n = ctx.group().order();
    if g >= n || h >= n {
        return Err(Error::InvalidArgument(format!("element index out of range (group order {n})")));
    }
    let (mp, _) = ctx.parent().primary_decompose(ctx.p())?;
    if !chiprop_applies(ctx, &mp, g, h) {
        return Err(unmet("chi(g) + chi(h) is not 2 modulo |M_p|"));
    }
    Ok(chiprop_conclusion(ctx, &mp, g, h))
}

/// Whether `χ(g) + χ(h) ≡ 2` modulo `gcd(|M_p|, N)`.
pub fn chiprop_applies(ctx: &CyclotomicContext, mp: &Subgroup, g: usize, h: usize) -> bool {
    let q = gcd_u64(mp.order(), ctx.modulus());
    (ctx.chi(g) + ctx.chi(h)) % q == 2 % q
}

/// `(g + h - 2)M_p = 0`, without checking any hypothesis.
pub fn chiprop_conclusion(ctx: &CyclotomicContext, mp: &Subgroup, g: usize, h: usize) -> bool {
    let grp = ctx.group();
    grp.element(g).lin_comb(1, grp.element(h), 1).add_scalar(-2).kills(mp)
}

/// Part 1: `I(1)` acts trivially. Part 2 (`None` when `p = 3` or the module
/// is not ordinary good): the whole group acts trivially.
pub fn oracle_tametheorem(ctx: &CyclotomicContext, w: &SemistableWitness) -> Result<(bool, Option<bool>)> {
    require_standard(ctx, w)?;
    let g = ctx.group();
    let part1 = ctx.level_kernel(1).into_iter().all(|i| g.element(i).is_identity());
    let good = is_ordinary_good(ctx, &mut w.clone()).is_ok();
    let part2 = (ctx.p() >= 5 && good).then(|| g.acts_trivially());
    Ok((part1, part2))
}

/// `pM'_p = 0` and `M_p = M'_p ⊕ (M_p)^I`.
pub fn oracle_splitting(ctx: &CyclotomicContext, w: &SemistableWitness) -> Result<bool> {
    require_standard(ctx, w)?;
    let (mp, _) = ctx.parent().primary_decompose(ctx.p())?;
    let sub = w.m_prime.intersect(&mp);
    let fixed = ctx.group().fixed_subgroup().intersect(&mp);
    let killed = sub.basis().iter().all(|b| b.scale(ctx.p() as i64).is_zero());
    let direct = sub.intersect(&fixed).order() == 1 && sub.order() as u128 * fixed.order() as u128 == mp.order() as u128;
    Ok(killed && direct)
}

/// With `χ(g) ≡ -r mod p`: `(g + r)(g + g^{-1} - 2)M = 0`.
pub fn oracle_splittingcor(ctx: &CyclotomicContext, w: &SemistableWitness, g: usize, r: i64) -> Result<bool> {
    require_standard(ctx, w)?;
    let grp = ctx.group();
    if g >= grp.order() {
        return Err(Error::InvalidArgument(format!("element index out of range (group order {})", grp.order())));
    }
    let p = ctx.p() as i64;
    if (ctx.chi(g) as i64 + r).rem_euclid(p) != 0 {
        return Err(unmet("chi(g) is not -r mod p"));
    }
    Ok(splittingcor_conclusion(ctx, g, r))
}

/// `(g + r)(g + g^{-1} - 2) = 0`, without checking any hypothesis.
pub fn splittingcor_conclusion(ctx: &CyclotomicContext, g: usize, r: i64) -> bool {
    let grp = ctx.group();
    let e = grp.element(g);
    let inv = grp.element(grp.inverse(g));
    e.add_scalar(r).compose_unchecked(&e.lin_comb(1, inv, 1).add_scalar(-2)).is_zero()
}

/// For `M` generated by `P`: the stabilizer of `P` is `I(1)`.
pub fn oracle_stabilizer(ctx: &CyclotomicContext, p: &ModuleElement) -> Result<bool> {
    let g = ctx.group();
    if g.module_generated(p)? != Subgroup::whole(ctx.parent()) {
        return Err(unmet("module is not generated by P"));
    }
    let w = find_semistable_filtration(ctx).map_err(|e| unmet(format!("ordinary semistable: {e}")))?;
    require_standard(ctx, &w)?;
    if g.acts_trivially() {
        return Err(unmet("the action is trivial"));
    }
    Ok(g.stabilizer(p)? == ctx.level_kernel(1))
}

/// A `p`-group acting unipotently on a module of order prime to `p` acts trivially.
pub fn oracle_pro_p(g: &ActionGroup, p: u64) -> Result<bool> {
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !is_p_power(g.order() as u64, p) {
        return Err(unmet(format!("group order {} is not a power of {p}", g.order())));
    }
    if gcd_u64(g.parent().order(), p) != 1 {
        return Err(unmet("module order is divisible by p"));
    }
    for e in g.elements() {
        let u = e.add_scalar(-1);
        if !u.compose(&u)?.is_zero() {
            return Err(unmet("(g - 1)^2 is not zero"));
        }
    }
    Ok(g.acts_trivially())
}

/// All automorphisms `A ≠ 1` of `M` with `(A - 1)^2 = 0` and `A^p = 1`.
///
/// Writing `A = 1 + U`, these are the `U ≠ 0` with `U^2 = 0` and `pU = 0`
/// (then `A^p = 1 + pU`), so only entries of `U` killed by `p` are enumerated.
pub fn unipotent_order_p_actions(m: &FinAbGroup, p: u64, cap: u128) -> Result<Vec<Endomorphism>> {
    let d = m.invariant_factors();
    let k = d.len();
    // admissible U_ij: multiples of d_i / gcd(d_i, d_j) that are killed by p
    let steps: Vec<(u64, u64)> = (0..k * k)
        .map(|t| {
            let (i, j) = (t / k, t % k);
            let s = crate::arith::lcm_u64(d[i] / gcd_u64(d[i], d[j]), d[i] / gcd_u64(d[i], p));
            (s, d[i] / s)
        })
        .collect();
    let total: u128 = steps.iter().map(|&(_, c)| c as u128).product();
    if total > cap {
        return Err(Error::CapExceeded { what: "endomorphism ring", size: total, cap });
    }
    let mut out = Vec::new();
    let mut idx = vec![0u64; k * k];
    let mut u = vec![0u64; k * k];
    loop {
        for t in 0..k * k {
            u[t] = idx[t] * steps[t].0;
        }
        let square_zero = (0..k * k).all(|t| {
            let (i, j) = (t / k, t % k);
            (0..k).map(|l| u[i * k + l] as u128 * u[l * k + j] as u128).sum::<u128>() % d[i] as u128 == 0
        });
        if square_zero && u.iter().any(|&x| x != 0) {
            let rows: Vec<Vec<i64>> =
                (0..k).map(|i| (0..k).map(|j| u[i * k + j] as i64 + (i == j) as i64).collect()).collect();
            out.push(Endomorphism::new(m, rows)?);
        }
        let mut t = 0;
        loop {
            if t == k * k {
                return Ok(out);
            }
            idx[t] += 1;
            if idx[t] < steps[t].1 {
                break;
            }
            idx[t] = 0;
            t += 1;
        }
    }
}

/// `2(g - 1) = 0` and `(g - 1)^2 = 0` give `g^2 = 1`.
pub fn oracle_exceptional_identity(g: &ActionGroup, p: u64) -> Result<bool> {
    check_odd_prime(p)?;
    for e in g.elements() {
        let u = e.add_scalar(-1);
        if !u.scale(2).is_zero() || !u.compose(&u)?.is_zero() {
            return Err(unmet("2(g - 1) or (g - 1)^2 is not zero"));
        }
    }
    Ok(g.elements().iter().all(|e| e.compose_unchecked(e).is_identity()))
}
