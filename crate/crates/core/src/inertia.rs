//! A finite model of tame inertia: an action group carrying a cyclotomic
//! character, and the ordinary semistable / ordinary good predicates.

use std::collections::HashSet;

use crate::action::{ActionGroup, DEFAULT_CLOSURE_CAP};
use crate::arith::{euler_phi, is_prime, lcm_u64, split_p_part};
use crate::error::{Error, Result};
use crate::group::{Endomorphism, FinAbGroup, Subgroup};

pub const DEFAULT_MODULE_CAP: u64 = 10_000;

/// An action group whose elements carry values of `χ` in `(Z/N)^*`.
#[derive(Clone, Debug)]
pub struct CyclotomicContext {
    p: u64,
    modulus: u64,
    group: ActionGroup,
}

impl CyclotomicContext {
    /// Wraps a labeled group. The label modulus must be divisible by `p` and
    /// by the exponent of the module.
    pub fn new(p: u64, group: ActionGroup) -> Result<Self> {
        check_odd_prime(p)?;
        let modulus = group
            .labels()
            .ok_or_else(|| Error::InvalidArgument("action group carries no character".into()))?
            .modulus;
        if modulus % p != 0 || modulus % group.parent().exponent() != 0 {
            return Err(Error::InvalidArgument(format!(
                "character modulus {modulus} must be divisible by {p} and by the module exponent"
            )));
        }
        Ok(CyclotomicContext { p, modulus, group })
    }

    /// Closes `(gens[i], chi[i])` with `N = lcm(exponent(M), p)`.
    pub fn from_generators(p: u64, m: &FinAbGroup, gens: &[Endomorphism], chi: &[u64]) -> Result<Self> {
        Self::from_generators_with_cap(p, m, gens, chi, DEFAULT_CLOSURE_CAP)
    }

    pub fn from_generators_with_cap(
        p: u64,
        m: &FinAbGroup,
        gens: &[Endomorphism],
        chi: &[u64],
        cap: usize,
    ) -> Result<Self> {
        check_odd_prime(p)?;
        let n = lcm_u64(m.exponent(), p);
        let g = ActionGroup::close_labeled(m, gens, chi, n, cap)?;
        Self::new(p, g)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The `p`-part of the character modulus.
    pub fn p_modulus(&self) -> u64 {
        split_p_part(self.modulus, self.p).0
    }

    pub fn group(&self) -> &ActionGroup {
        &self.group
    }

    pub fn parent(&self) -> &FinAbGroup {
        self.group.parent()
    }

    pub fn chi(&self, i: usize) -> u64 {
        self.group.label(i).expect("context groups are labeled")
    }

    /// `I(n)`: elements with `χ ≡ 1 mod p^n` (read modulo the `p`-part of `N`).
    pub fn level_kernel(&self, n: u32) -> Vec<usize> {
        let q = self.p.checked_pow(n).map_or(self.p_modulus(), |pn| crate::arith::gcd_u64(pn, self.modulus));
        self.kernel_mod(q)
    }

    /// `I(∞)`, truncated to the kernel of `χ mod N`.
    pub fn infinity_kernel(&self) -> Vec<usize> {
        self.kernel_mod(self.modulus)
    }

    fn kernel_mod(&self, q: u64) -> Vec<usize> {
        (0..self.group.order()).filter(|&i| self.chi(i) % q == 1 % q).collect()
    }

    /// `χ` maps onto `(Z/N_p)^*`, the finite shadow of `χ : I → Z_p^*` being onto.
    pub fn is_full(&self) -> bool {
        let q = self.p_modulus();
        let image: HashSet<u64> = (0..self.group.order()).map(|i| self.chi(i) % q).collect();
        image.len() as u64 == euler_phi(q)
    }

    /// `χ ≡ 1` modulo the prime-to-`p` part of `N`: inertia fixes prime-to-`p` roots of unity.
    pub fn is_p_adic(&self) -> bool {
        let r = split_p_part(self.modulus, self.p).1;
        (0..self.group.order()).all(|i| self.chi(i) % r == 1 % r)
    }

    /// Exhaustive check that the labels multiply.
    pub fn is_homomorphism(&self) -> bool {
        let n = self.group.order();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let k = self.group.mul(i, j);
                (self.chi(i) as u128 * self.chi(j) as u128 % self.modulus as u128) as u64 == self.chi(k)
            })
        })
    }
}

pub(crate) fn check_odd_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::OddPrimeRequired(p));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SemistableChecks {
    pub stable: bool,
    pub cyclotomic_on_sub: bool,
    pub trivial_on_quotient: bool,
}

impl SemistableChecks {
    pub fn all(&self) -> bool {
        self.stable && self.cyclotomic_on_sub && self.trivial_on_quotient
    }
}

/// A candidate `M'` for the filtration `0 → M' → M → M'' → 0`.
#[derive(Clone, Debug)]
pub struct SemistableWitness {
    pub m_prime: Subgroup,
    pub checks: SemistableChecks,
}

impl SemistableWitness {
    /// An unchecked candidate; [`verify_ordinary_semistable`] fills in `checks`.
    pub fn new(m_prime: Subgroup) -> Self {
        SemistableWitness { m_prime, checks: SemistableChecks::default() }
    }
}

/// Checks the three filtration conditions, reporting the first offending element.
pub fn verify_ordinary_semistable(ctx: &CyclotomicContext, w: &mut SemistableWitness) -> Result<()> {
    let g = ctx.group();
    if w.m_prime.parent() != ctx.parent() {
        return Err(Error::ParentMismatch);
    }
    w.checks = SemistableChecks::default();
    let sub = w.m_prime.basis();
    for (i, e) in g.elements().iter().enumerate() {
        if !sub.iter().all(|b| w.m_prime.contains(&e.apply_unchecked(b))) {
            return Err(Error::NotStable { g: i });
        }
    }
    w.checks.stable = true;
    for (i, e) in g.elements().iter().enumerate() {
        let c = ctx.chi(i) as i64;
        if !sub.iter().all(|b| e.apply_unchecked(b) == b.scale(c)) {
            return Err(Error::NotCyclotomicOnSub { g: i });
        }
    }
    w.checks.cyclotomic_on_sub = true;
    let whole = ctx.parent().basis();
    for (i, e) in g.elements().iter().enumerate() {
        if !whole.iter().all(|b| w.m_prime.contains(&e.apply_unchecked(b).sub(b).expect("same parent"))) {
            return Err(Error::NotTrivialOnQuotient { g: i });
        }
    }
    w.checks.trivial_on_quotient = true;
    Ok(())
}

/// Boolean form of [`verify_ordinary_semistable`].
pub fn is_ordinary_semistable_with(ctx: &CyclotomicContext, m_prime: &Subgroup) -> bool {
    verify_ordinary_semistable(ctx, &mut SemistableWitness::new(m_prime.clone())).is_ok()
}

/// Finds the smallest valid `M'`, if any.
///
/// Any valid `M'` contains `L = Σ (g - 1)M` and lies inside
/// `H = {x : gx = χ(g)x for all g}`; conversely `L` itself is valid whenever
/// `L ⊆ H`. So a witness exists iff `L ⊆ H`, and `L` is the least one.
pub fn find_semistable_filtration(ctx: &CyclotomicContext) -> Result<SemistableWitness> {
    find_semistable_filtration_with_cap(ctx, DEFAULT_MODULE_CAP)
}

pub fn find_semistable_filtration_with_cap(ctx: &CyclotomicContext, cap: u64) -> Result<SemistableWitness> {
    let m = ctx.parent();
    if m.order() > cap {
        return Err(Error::CapExceeded { what: "module order", size: m.order() as u128, cap: cap as u128 });
    }
    let g = ctx.group();
    // (sh - 1) = s(h - 1) + (s - 1): L is the least generator-stable subgroup
    // containing the images of s - 1
    let gens: Vec<&Endomorphism> = g.generator_indices().iter().map(|&i| g.element(i)).collect();
    let mut lo = Subgroup::zero(m);
    for s in &gens {
        lo = lo.sum(&s.add_scalar(-1).image());
    }
    loop {
        let basis = lo.basis();
        let moved: Vec<_> =
            gens.iter().flat_map(|s| basis.iter().map(|b| s.apply_unchecked(b))).filter(|x| !lo.contains(x)).collect();
        if moved.is_empty() {
            break;
        }
        lo = lo.sum(&Subgroup::generated(m, &moved)?);
    }
    let twisted: Vec<Endomorphism> = g
        .generator_indices()
        .iter()
        .map(|&i| g.element(i).add_scalar(-(ctx.chi(i) as i64)))
        .collect();
    let hi = Subgroup::common_kernel(m, &twisted);
    if !lo.is_subgroup_of(&hi) {
        return Err(Error::NotFound);
    }
    let mut w = SemistableWitness::new(lo);
    verify_ordinary_semistable(ctx, &mut w)?;
    Ok(w)
}

/// Semistable, and trivial on the prime-to-`p` part.
pub fn is_ordinary_good(ctx: &CyclotomicContext, w: &mut SemistableWitness) -> Result<()> {
    verify_ordinary_semistable(ctx, w)?;
    let (_, nonp) = ctx.parent().primary_decompose(ctx.p())?;
    for (i, e) in ctx.group().elements().iter().enumerate() {
        if !e.add_scalar(-1).kills(&nonp) {
            return Err(Error::NonTrivialOnNonP { g: i });
        }
    }
    Ok(())
}
