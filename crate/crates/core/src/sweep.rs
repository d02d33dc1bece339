//! Universally quantified oracle runs over a list of instances.
//!
//! A sweep evaluates one oracle on every case drawn from the instances (an
//! instance with several element choices contributes one case per choice),
//! counting the cases whose hypotheses hold and the ones whose conclusion holds.

use std::fmt;
use std::str::FromStr;

use crate::action::ActionGroup;
use crate::almost_fixed::{check_conjugate_lemma, check_generators_lemma, check_square_lemma, is_almost_fixed_element};
use crate::arith::is_prime;
use crate::cohomology::{compute_h1, verify_sah, GROUP_CAP};
use crate::corpus::{
    cyclic_unit_corpus, exceptional_corpus, inertia_corpus, plane_corpus, pro_p_corpus, Built, Instance,
};
use crate::error::{Error, Result};
use crate::ffield::square_norm_criterion;
use crate::group::{Endomorphism, ModuleElement, Subgroup};
use crate::group::DEFAULT_ORDER_CAP;
use crate::inertia::{find_semistable_filtration_with_cap, CyclotomicContext, SemistableWitness};
use crate::oracles::{
    chiprop_applies, chiprop_conclusion, oracle_abelian, oracle_exceptional_identity, oracle_pro_p,
    oracle_splitting, oracle_tametheorem, oracle_triviallemma, require_standard, splittingcor_conclusion,
};

/// Largest `p^n` for the square/norm sweep.
pub const SQUARE_NORM_MAX: u64 = 3000;
/// Largest group order in the Sah sweep.
pub const SAH_MAX_GROUP: usize = 16;
/// Largest cyclic group in the `H^1` formula sweep.
pub const H1_CYCLIC_MAX_GROUP: usize = 12;
/// Largest module order in the cohomology sweeps.
pub const COHOMOLOGY_MAX_MODULE: u64 = 81;
/// Modules up to this order try every element as `P` in the stabilizer sweep;
/// larger ones try the basis and its sum.
pub const STABILIZER_ALL_ELEMENTS: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Oracle {
    Conjugate,
    Square,
    Generators,
    TrivialLemma,
    Abelian,
    ChiProp,
    TameTheorem,
    Splitting,
    SplittingCor,
    Stabilizer,
    ProP,
    ExceptionalIdentity,
    Sah,
    H1Cyclic,
    SquareNorm,
}

impl Oracle {
    pub const ALL: [Oracle; 15] = [
        Oracle::Conjugate,
        Oracle::Square,
        Oracle::Generators,
        Oracle::TrivialLemma,
        Oracle::Abelian,
        Oracle::ChiProp,
        Oracle::TameTheorem,
        Oracle::Splitting,
        Oracle::SplittingCor,
        Oracle::Stabilizer,
        Oracle::ProP,
        Oracle::ExceptionalIdentity,
        Oracle::Sah,
        Oracle::H1Cyclic,
        Oracle::SquareNorm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Oracle::Conjugate => "conjugate",
            Oracle::Square => "square",
            Oracle::Generators => "generators",
            Oracle::TrivialLemma => "triviallemma",
            Oracle::Abelian => "abelian",
            Oracle::ChiProp => "chiprop",
            Oracle::TameTheorem => "tametheorem",
            Oracle::Splitting => "splitting",
            Oracle::SplittingCor => "splittingcor",
            Oracle::Stabilizer => "stabilizer",
            Oracle::ProP => "pro-p",
            Oracle::ExceptionalIdentity => "exceptional-identity",
            Oracle::Sah => "sah",
            Oracle::H1Cyclic => "h1-cyclic",
            Oracle::SquareNorm => "square-norm",
        }
    }

    /// The instances this oracle runs on by default.
    pub fn default_corpus(self) -> Vec<Instance> {
        match self {
            Oracle::Conjugate | Oracle::Square | Oracle::Generators => {
                let mut v = cyclic_unit_corpus();
                v.extend(plane_corpus());
                v
            }
            Oracle::TrivialLemma
            | Oracle::Abelian
            | Oracle::ChiProp
            | Oracle::TameTheorem
            | Oracle::Splitting
            | Oracle::SplittingCor
            | Oracle::Stabilizer => inertia_corpus(),
            Oracle::ProP => pro_p_corpus(&[3, 5]).0,
            Oracle::ExceptionalIdentity => exceptional_corpus(),
            Oracle::Sah | Oracle::H1Cyclic => {
                let mut v: Vec<Instance> = inertia_corpus()
                    .into_iter()
                    .filter(|i| i.factors.iter().product::<u64>() <= COHOMOLOGY_MAX_MODULE)
                    .collect();
                v.extend(cyclic_unit_corpus().into_iter().filter(|i| i.factors[0] <= COHOMOLOGY_MAX_MODULE));
                v.extend(plane_corpus());
                v
            }
            Oracle::SquareNorm => Vec::new(),
        }
    }
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Oracle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Oracle::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown oracle {s:?}")))
    }
}

/// A case whose hypotheses held and whose conclusion failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub instance: String,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub oracle: String,
    pub instances: usize,
    pub hypothesis_met: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
    /// instances not evaluated because a cap was exceeded
    pub skipped: usize,
}

impl SweepSummary {
    fn new(oracle: Oracle) -> Self {
        SweepSummary { oracle: oracle.name().to_string(), ..Default::default() }
    }

    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Records one case: `None` when its hypotheses failed.
    fn record(&mut self, id: &str, outcome: Option<bool>, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if let Some(ok) = outcome {
            self.hypothesis_met += 1;
            if ok {
                self.passed += 1;
            } else {
                self.failures.push(Failure { instance: id.to_string(), witness: witness() });
            }
        }
    }

    fn record_result(&mut self, id: &str, r: Result<bool>, witness: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(id, Some(ok), witness),
            Err(Error::HypothesisNotMet(_)) => self.record(id, None, witness),
            Err(e) => self.record(id, Some(false), || format!("{}: {e}", witness())),
        }
    }
}

/// Caps applied when building instances for a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub order: u64,
    pub closure: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { order: DEFAULT_ORDER_CAP, closure: crate::action::DEFAULT_CLOSURE_CAP }
    }
}

/// Runs `oracle` over `instances`, sorted by identifier for determinism.
pub fn sweep(oracle: Oracle, instances: &[Instance]) -> SweepSummary {
    sweep_with_caps(oracle, instances, Caps::default())
}

pub fn sweep_with_caps(oracle: Oracle, instances: &[Instance], caps: Caps) -> SweepSummary {
    let mut sorted: Vec<&Instance> = instances.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let mut s = SweepSummary::new(oracle);
    if oracle == Oracle::SquareNorm {
        sweep_square_norm(&mut s);
        return s;
    }
    for inst in sorted {
        let built = match inst.build_with_cap(caps.order, caps.closure) {
            Ok(b) => b,
            Err(_) => {
                s.skipped += 1;
                continue;
            }
        };
        run_instance(oracle, inst, &built, caps, &mut s);
    }
    s
}

/// Runs `oracle` over its default corpus.
pub fn sweep_default(oracle: Oracle) -> SweepSummary {
    sweep(oracle, &oracle.default_corpus())
}

fn coords(x: &ModuleElement) -> String {
    format!("{:?}", x.coords())
}

fn run_instance(oracle: Oracle, inst: &Instance, b: &Built, caps: Caps, s: &mut SweepSummary) {
    let id = inst.id.as_str();
    let g = &b.group;
    match oracle {
        Oracle::Conjugate | Oracle::Square => {
            for p in b.module.elements() {
                let r = if oracle == Oracle::Conjugate { check_conjugate_lemma(g, &p) } else { check_square_lemma(g, &p) };
                s.record_result(id, r, || format!("P = {}", coords(&p)));
            }
        }
        Oracle::Generators => {
            let fixed: Vec<ModuleElement> = b
                .module
                .elements()
                .filter(|p| is_almost_fixed_element(g, p).map(|c| c.holds()).unwrap_or(false))
                .collect();
            for p in &fixed {
                s.record_result(id, check_generators_lemma(g, std::slice::from_ref(p)), || {
                    format!("generators [{}]", coords(p))
                });
            }
            s.record_result(id, check_generators_lemma(g, &fixed), || "all almost-fixed elements".into());
        }
        Oracle::ProP => {
            let p = inst.p.unwrap_or(3);
            s.record_result(id, oracle_pro_p(g, p), || format!("p = {p}"));
        }
        Oracle::ExceptionalIdentity => {
            let p = inst.p.unwrap_or(3);
            s.record_result(id, oracle_exceptional_identity(g, p), || format!("p = {p}"));
        }
        Oracle::Sah => sah_instance(id, b, caps, s),
        Oracle::H1Cyclic => h1_cyclic_instance(id, g, s),
        Oracle::SquareNorm => {}
        _ => {
            let Some(ctx) = &b.context else {
                s.record(id, None, String::new);
                return;
            };
            let w = match (&b.declared, find_semistable_filtration_with_cap(ctx, caps.order)) {
                (Some(w), _) => Some(w.clone()),
                (None, Ok(w)) => Some(w),
                (None, Err(Error::CapExceeded { .. })) => {
                    s.skipped += 1;
                    return;
                }
                (None, Err(_)) => None,
            };
            inertia_instance(oracle, id, ctx, w, s);
        }
    }
}

fn inertia_instance(oracle: Oracle, id: &str, ctx: &CyclotomicContext, w: Option<SemistableWitness>, s: &mut SweepSummary) {
    let Some(w) = w else {
        // no filtration: the semistable hypothesis fails for every case
        s.record(id, None, String::new);
        return;
    };
    let grp = ctx.group();
    match oracle {
        Oracle::TrivialLemma => s.record_result(id, oracle_triviallemma(ctx, &w), String::new),
        Oracle::Abelian => s.record_result(id, oracle_abelian(ctx, &w), String::new),
        Oracle::Splitting => s.record_result(id, oracle_splitting(ctx, &w), String::new),
        Oracle::TameTheorem => {
            let r = oracle_tametheorem(ctx, &w).map(|(a, b)| a && b.unwrap_or(true));
            s.record_result(id, r, String::new)
        }
        Oracle::ChiProp => {
            if require_standard(ctx, &w).is_err() {
                s.record(id, None, String::new);
                return;
            }
            let (mp, _) = ctx.parent().primary_decompose(ctx.p()).expect("p is prime");
            for gi in 0..grp.order() {
                for hi in 0..grp.order() {
                    if chiprop_applies(ctx, &mp, gi, hi) {
                        s.record(id, Some(chiprop_conclusion(ctx, &mp, gi, hi)), || format!("g = {gi}, h = {hi}"));
                    }
                }
            }
        }
        Oracle::SplittingCor => {
            if require_standard(ctx, &w).is_err() {
                s.record(id, None, String::new);
                return;
            }
            let p = ctx.p() as i64;
            for gi in 0..grp.order() {
                for r in 0..p {
                    if (ctx.chi(gi) as i64 + r).rem_euclid(p) == 0 {
                        s.record(id, Some(splittingcor_conclusion(ctx, gi, r)), || format!("g = {gi}, r = {r}"));
                    }
                }
            }
        }
        Oracle::Stabilizer => {
            if require_standard(ctx, &w).is_err() || grp.acts_trivially() {
                s.record(id, None, String::new);
                return;
            }
            let m = ctx.parent();
            let whole = Subgroup::whole(m);
            let candidates: Vec<ModuleElement> = if m.order() <= STABILIZER_ALL_ELEMENTS {
                m.elements().collect()
            } else {
                let mut v = m.basis();
                v.push(v.iter().fold(m.zero(), |a, b| a.add(b).expect("same parent")));
                v
            };
            let level1 = ctx.level_kernel(1);
            for p in candidates {
                let generates = grp.module_generated(&p).map(|n| n == whole).unwrap_or(false);
                let outcome = generates.then(|| grp.stabilizer(&p).map(|st| st == level1).unwrap_or(false));
                s.record(id, outcome, || format!("P = {}", coords(&p)));
            }
        }
        _ => unreachable!("not an inertia oracle"),
    }
}

/// A generator of `g` when the group is cyclic.
pub fn cyclic_generator(g: &ActionGroup) -> Option<usize> {
    let n = g.order();
    (0..n).find(|&i| {
        let mut k = 1;
        let mut x = i;
        while x != g.identity_index() {
            x = g.mul(i, x);
            k += 1;
        }
        k == n
    })
}

/// `ker(N) / (g - 1)M` for `G = ⟨g⟩` of order `n`, `N = 1 + g + ... + g^{n-1}`.
pub fn cyclic_h1_formula(g: &ActionGroup, gen: usize) -> Vec<u64> {
    let m = g.parent();
    let e = g.element(gen);
    let mut norm = Endomorphism::zero(m);
    let mut pw = Endomorphism::identity(m);
    for _ in 0..g.order() {
        norm = norm.add(&pw).expect("same parent");
        pw = pw.compose(e).expect("same parent");
    }
    norm.kernel().relative_invariants(&e.add_scalar(-1).image()).expect("image lies in the kernel of the norm")
}

fn h1_cyclic_instance(id: &str, g: &ActionGroup, s: &mut SweepSummary) {
    if g.order() > H1_CYCLIC_MAX_GROUP || g.parent().order() > COHOMOLOGY_MAX_MODULE {
        s.record(id, None, String::new);
        return;
    }
    let Some(gen) = cyclic_generator(g) else {
        s.record(id, None, String::new);
        return;
    };
    match compute_h1(g) {
        Ok(space) => {
            let expect = cyclic_h1_formula(g, gen);
            let got = space.h1_invariants().to_vec();
            s.record(id, Some(got == expect), || format!("computed {got:?}, formula {expect:?}"));
        }
        Err(e) => s.record(id, Some(false), || format!("{e}")),
    }
}

fn sah_instance(id: &str, b: &Built, caps: Caps, s: &mut SweepSummary) {
    let g = &b.group;
    if g.order() <= SAH_MAX_GROUP && g.parent().order() <= COHOMOLOGY_MAX_MODULE && g.is_abelian() {
        match compute_h1(g) {
            Ok(space) => {
                for c in 0..g.order() {
                    s.record_result(id, verify_sah(&space, c), || format!("g = {c}"));
                }
            }
            Err(e) => s.record(id, Some(false), || format!("{e}")),
        }
    } else {
        s.record(id, None, String::new);
    }
    if let Some(ctx) = &b.context {
        sah_cyclotomic(id, ctx, caps, s);
    }
}

/// For a standard instance with a central `g`, `χ(g) ≡ 2 mod p`: the group acting
/// on `M'_p` through `χ` has `H^1 = 0`.
fn sah_cyclotomic(id: &str, ctx: &CyclotomicContext, caps: Caps, s: &mut SweepSummary) {
    let Ok(w) = find_semistable_filtration_with_cap(ctx, caps.order) else { return };
    if require_standard(ctx, &w).is_err() {
        return;
    }
    let grp = ctx.group();
    let p = ctx.p();
    let Some(c) = (0..grp.order()).find(|&i| ctx.chi(i) % p == 2 % p && grp.is_central(i)) else { return };
    let Ok((mp, _)) = ctx.parent().primary_decompose(p) else { return };
    let sub = w.m_prime.intersect(&mp);
    if sub.order() == 1 {
        return;
    }
    let module = sub.as_group();
    let gens: Vec<Endomorphism> =
        grp.generator_indices().iter().map(|&i| Endomorphism::scalar(&module, ctx.chi(i) as i64)).collect();
    let chis: Vec<u64> = grp.generator_indices().iter().map(|&i| ctx.chi(i)).collect();
    let Ok(image) = ActionGroup::close_labeled(&module, &gens, &chis, ctx.modulus(), GROUP_CAP) else {
        s.skipped += 1;
        return;
    };
    match compute_h1(&image) {
        Ok(space) => s.record(id, Some(space.h1_invariants().is_empty()), || {
            format!("H^1(M'_p) = {:?} with chi(g) = {}", space.h1_invariants(), ctx.chi(c))
        }),
        Err(_) => s.skipped += 1,
    }
}

fn sweep_square_norm(s: &mut SweepSummary) {
    for p in (3..=SQUARE_NORM_MAX).filter(|&p| is_prime(p)) {
        let mut q = p;
        let mut n = 1;
        while q <= SQUARE_NORM_MAX {
            let id = format!("F_{p}^{n}");
            s.record_result(&id, square_norm_criterion(p, n), || format!("p = {p}, n = {n}"));
            q *= p;
            n += 1;
        }
    }
}

/// Whether every case in `s` with met hypotheses is counted consistently.
pub fn summary_is_consistent(s: &SweepSummary) -> bool {
    s.passed <= s.hypothesis_met && s.hypothesis_met <= s.instances && s.passed + s.failures.len() == s.hypothesis_met
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for o in Oracle::ALL {
            assert_eq!(o.name().parse::<Oracle>().unwrap(), o);
        }
        assert!("nope".parse::<Oracle>().is_err());
    }

    #[test]
    fn cyclic_generator_found() {
        let g = ActionGroup::unit_group(9);
        let gen = cyclic_generator(&g).unwrap();
        assert_eq!(g.element(gen).pow(3).is_identity(), false);
        assert!(cyclic_generator(&ActionGroup::unit_group(8)).is_none());
    }

    #[test]
    fn sah_on_cyclotomic_part() {
        // Z/3 with γ = -1 and χ(γ) = 2: the two central elements, then M'_3 = M
        let inst = Instance {
            id: "z3-neg".into(),
            factors: vec![3],
            generators: vec![vec![vec![2]]],
            chi: Some(crate::corpus::Character { modulus: 3, values: vec![2] }),
            p: Some(3),
            m_prime: None,
        };
        let s = sweep(Oracle::Sah, &[inst]);
        assert_eq!((s.instances, s.hypothesis_met, s.passed), (3, 3, 3));
    }

    #[test]
    fn small_sweeps() {
        for o in [Oracle::Conjugate, Oracle::Square, Oracle::Generators] {
            let s = sweep(o, &cyclic_unit_corpus()[..20]);
            assert!(s.all_passed(), "{s:?}");
            assert!(s.hypothesis_met > 0);
            assert!(summary_is_consistent(&s));
        }
        let s = sweep_default(Oracle::ExceptionalIdentity);
        assert!(s.all_passed() && s.hypothesis_met > 0, "{s:?}");
    }
}
