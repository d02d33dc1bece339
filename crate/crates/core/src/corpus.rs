//! Instance descriptions and the default enumerated corpus.
//!
//! Instances are given in a diagonal presentation `Z/d_1 ⊕ ... ⊕ Z/d_k`;
//! [`Instance::build`] normalizes them and closes the action.

use crate::action::{ActionGroup, DEFAULT_CLOSURE_CAP};
use crate::arith::{crt, gcd_u64, lcm_u64, mod_pow, primitive_root_p2, split_p_part, units};
use crate::error::{Error, Result};
use crate::group::{Endomorphism, FinAbGroup, Presentation, Subgroup};
use crate::inertia::{CyclotomicContext, SemistableWitness};
use crate::oracles::unipotent_order_p_actions;

/// Primes of the default inertia corpus.
pub const CORPUS_PRIMES: [u64; 3] = [3, 5, 7];
/// Largest exponent `a` in the `Z/p^a` summands.
pub const CORPUS_MAX_EXPONENT: u32 = 2;
/// Largest cyclic module for unit-multiplication instances.
pub const CORPUS_MAX_CYCLIC: u64 = 100;
/// Largest prime for the 2-dimensional `F_p` instances.
pub const CORPUS_MAX_PLANE_PRIME: u64 = 7;
/// Largest order of a cyclic action on `F_p^2`.
pub const CORPUS_MAX_PLANE_ORDER: usize = 8;
/// Largest module for the unipotent pro-p instances.
pub const CORPUS_MAX_PRO_P_MODULE: u64 = 100;
/// Cap on `|End(M)|` when enumerating unipotent automorphisms.
pub const CORPUS_END_CAP: u128 = 1 << 24;

/// `χ` values for the generators, modulo `modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub modulus: u64,
    pub values: Vec<u64>,
}

/// A module `⊕ Z/factors[i]` with an action given by generator matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub id: String,
    pub factors: Vec<u64>,
    pub generators: Vec<Vec<Vec<i64>>>,
    pub chi: Option<Character>,
    pub p: Option<u64>,
    /// generators of a declared `M'`, in diagonal coordinates
    pub m_prime: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug)]
pub struct Built {
    pub module: FinAbGroup,
    pub presentation: Presentation,
    pub group: ActionGroup,
    pub context: Option<CyclotomicContext>,
    pub declared: Option<SemistableWitness>,
}

impl Instance {
    pub fn build(&self) -> Result<Built> {
        self.build_with_cap(crate::group::DEFAULT_ORDER_CAP, DEFAULT_CLOSURE_CAP)
    }

    /// Builds with explicit caps on the module order and the group order.
    pub fn build_with_cap(&self, order_cap: u64, closure_cap: usize) -> Result<Built> {
        let factors: Vec<i64> = self.factors.iter().map(|&d| d as i64).collect();
        let (module, presentation) = FinAbGroup::from_diagonal_with_cap(&factors, order_cap)?;
        let gens = self
            .generators
            .iter()
            .map(|g| presentation.transport(g))
            .collect::<Result<Vec<Endomorphism>>>()?;
        let (group, context) = match self.p {
            None => {
                if self.chi.is_some() {
                    return Err(Error::InvalidArgument("a character needs a prime p".into()));
                }
                (ActionGroup::close_generators(&module, &gens, closure_cap)?, None)
            }
            Some(p) => {
                let chi = match &self.chi {
                    Some(c) => c.clone(),
                    None => Character { modulus: lcm_u64(module.exponent(), p), values: vec![1; gens.len()] },
                };
                let g = ActionGroup::close_labeled(&module, &gens, &chi.values, chi.modulus, closure_cap)?;
                let ctx = CyclotomicContext::new(p, g.clone())?;
                (g, Some(ctx))
            }
        };
        let declared = match &self.m_prime {
            None => None,
            Some(v) => {
                let elems = v.iter().map(|x| presentation.to_chain(x)).collect::<Result<Vec<_>>>()?;
                Some(SemistableWitness::new(Subgroup::generated(&module, &elems)?))
            }
        };
        Ok(Built { module, presentation, group, context, declared })
    }
}

fn block_diag(blocks: &[&[Vec<i64>]]) -> Vec<Vec<i64>> {
    let n: usize = blocks.iter().map(|b| b.len()).sum();
    let mut out = vec![vec![0; n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                out[off + i][off + j] = x;
            }
        }
        off += b.len();
    }
    out
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

/// A module of order prime to `p` with one nontrivial automorphism, or `None`
/// for the trivial action.
struct CoprimeFactor {
    name: &'static str,
    factors: Vec<u64>,
    action: Option<Vec<Vec<i64>>>,
}

fn coprime_factors(p: u64) -> Vec<CoprimeFactor> {
    let all = vec![
        CoprimeFactor { name: "2", factors: vec![2], action: None },
        CoprimeFactor { name: "4neg", factors: vec![4], action: Some(vec![vec![-1]]) },
        CoprimeFactor { name: "3neg", factors: vec![3], action: Some(vec![vec![-1]]) },
        CoprimeFactor { name: "5x2", factors: vec![5], action: Some(vec![vec![2]]) },
        CoprimeFactor { name: "7neg", factors: vec![7], action: Some(vec![vec![-1]]) },
        CoprimeFactor { name: "22uni", factors: vec![2, 2], action: Some(vec![vec![1, 1], vec![0, 1]]) },
        CoprimeFactor { name: "24uni", factors: vec![2, 4], action: Some(vec![vec![1, 0], vec![2, 1]]) },
        CoprimeFactor { name: "33uni", factors: vec![3, 3], action: Some(vec![vec![1, 1], vec![0, 1]]) },
    ];
    all.into_iter().filter(|c| c.factors.iter().all(|&d| d % p != 0)).collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ChiKind {
    Full,
    NotFull,
    NotPAdic,
}

/// The default inertia corpus: `M_p = Z/p^a ⊕ Z/p^b` with `γ = [[χ(γ), c], [0, 1]]`,
/// an optional `τ = [[1, s], [0, 1]]` with `χ(τ) = 1`, and an optional coprime summand
/// on which `γ` or `τ` may act.
///
/// Without a coprime summand every admissible `c` is used; with one, `c` runs over
/// `{0, s}` where `s` is the least admissible nonzero entry.
pub fn inertia_corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    for p in CORPUS_PRIMES {
        inertia_for_prime(p, &mut out);
        coprime_cyclic_for_prime(p, &mut out);
    }
    out
}

fn inertia_for_prime(p: u64, out: &mut Vec<Instance>) {
    let pk = |k: u32| p.pow(k);
    for a in 0..=CORPUS_MAX_EXPONENT {
        for b in 0..=CORPUS_MAX_EXPONENT {
            let mut mp_factors = Vec::new();
            if a > 0 {
                mp_factors.push(pk(a));
            }
            if b > 0 {
                mp_factors.push(pk(b));
            }
            let two = a > 0 && b > 0;
            // admissible upper-right entries are multiples of p^a / gcd(p^a, p^b)
            let step = if two { pk(a) / gcd_u64(pk(a), pk(b)) } else { 0 };
            let c_all: Vec<u64> = if two { (0..pk(a)).step_by(step as usize).collect() } else { vec![0] };
            let mut cofactors: Vec<Option<CoprimeFactor>> = vec![None];
            cofactors.extend(coprime_factors(p).into_iter().map(Some));
            for cf in &cofactors {
                let cs: Vec<u64> = match cf {
                    None => c_all.clone(),
                    Some(_) => c_all.iter().copied().take(2).collect(),
                };
                let mut factors = mp_factors.clone();
                if let Some(cf) = cf {
                    factors.extend(&cf.factors);
                }
                if factors.is_empty() {
                    continue;
                }
                let exp = factors.iter().fold(1, |e, &d| lcm_u64(e, d));
                let n = lcm_u64(exp, p);
                let (np, r) = split_p_part(n, p);
                let root = primitive_root_p2(p) % np;
                for kind in [ChiKind::Full, ChiKind::NotFull, ChiKind::NotPAdic] {
                    let (gp, gr) = match kind {
                        ChiKind::Full => (root, 1 % r),
                        ChiKind::NotFull => (mod_pow(root, 2, np), 1 % r),
                        ChiKind::NotPAdic => {
                            if r <= 2 {
                                continue;
                            }
                            (root, r - 1)
                        }
                    };
                    let chi_g = crt(gp, np, gr, r);
                    let kname = match kind {
                        ChiKind::Full => "full",
                        ChiKind::NotFull => "nonfull",
                        ChiKind::NotPAdic => "nonpadic",
                    };
                    let cname = cf.as_ref().map_or("none", |c| c.name);
                    // the p-block of γ: trivial, or triangular with each c
                    let mut gamma_blocks: Vec<(String, Vec<Vec<i64>>)> =
                        vec![("id".into(), identity(mp_factors.len()))];
                    for &c in &cs {
                        let block = if two {
                            vec![vec![chi_g as i64, c as i64], vec![0, 1]]
                        } else if a > 0 {
                            vec![vec![chi_g as i64]]
                        } else if b > 0 {
                            vec![vec![1]]
                        } else {
                            vec![]
                        };
                        gamma_blocks.push((format!("c{c}"), block));
                        if !two {
                            break;
                        }
                    }
                    for (gname, gblock) in &gamma_blocks {
                        let taus: Vec<Option<u64>> = if two { vec![None, Some(step)] } else { vec![None] };
                        for tau in taus {
                            let places: &[&str] = match (cf, tau) {
                                (Some(CoprimeFactor { action: Some(_), .. }), Some(_)) => &["triv", "gamma", "tau"],
                                (Some(CoprimeFactor { action: Some(_), .. }), None) => &["triv", "gamma"],
                                _ => &["triv"],
                            };
                            for &place in places {
                                let cdim = cf.as_ref().map_or(0, |c| c.factors.len());
                                let cid = identity(cdim);
                                let cact = cf.as_ref().and_then(|c| c.action.clone()).unwrap_or_else(|| cid.clone());
                                let gc = if place == "gamma" { &cact } else { &cid };
                                let mut gens = vec![block_diag(&[gblock, gc])];
                                let mut chi = vec![chi_g];
                                if let Some(s) = tau {
                                    let tc = if place == "tau" { &cact } else { &cid };
                                    let tb = vec![vec![1, s as i64], vec![0, 1]];
                                    gens.push(block_diag(&[&tb, tc]));
                                    chi.push(1);
                                }
                                let tname = tau.map_or("none".to_string(), |s| format!("t{s}"));
                                out.push(Instance {
                                    id: format!("p{p}-a{a}b{b}-{kname}-{gname}-{tname}-{cname}-{place}"),
                                    factors: factors.clone(),
                                    generators: gens,
                                    chi: Some(Character { modulus: n, values: chi }),
                                    p: Some(p),
                                    m_prime: None,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
}

/// `Z/n` for `n < 50` prime to `p`, multiplied by each unit `u`, with `χ`
/// either `p`-adic or equal to `u` on the prime-to-`p` part.
fn coprime_cyclic_for_prime(p: u64, out: &mut Vec<Instance>) {
    for n in 2..50u64 {
        if n % p == 0 {
            continue;
        }
        let modulus = n * p;
        let root = primitive_root_p2(p) % p;
        for u in units(n) {
            for (kname, r) in [("padic", 1 % n), ("twisted", u)] {
                out.push(Instance {
                    id: format!("p{p}-cyc{n}-u{u}-{kname}"),
                    factors: vec![n],
                    generators: vec![vec![vec![u as i64]]],
                    chi: Some(Character { modulus, values: vec![crt(root, p, r, n)] }),
                    p: Some(p),
                    m_prime: None,
                });
            }
        }
    }
}

/// `Z/n` for `2 ≤ n ≤ CORPUS_MAX_CYCLIC` under the full unit group.
pub fn cyclic_unit_corpus() -> Vec<Instance> {
    (2..=CORPUS_MAX_CYCLIC)
        .map(|n| Instance {
            id: format!("cyc{n}-units"),
            factors: vec![n],
            generators: units(n).into_iter().filter(|&u| u != 1).map(|u| vec![vec![u as i64]]).collect(),
            chi: None,
            p: None,
            m_prime: None,
        })
        .collect()
}

/// `F_p^2` for `p ≤ CORPUS_MAX_PLANE_PRIME` under each `A ∈ GL_2(F_p)` of order at most
/// `CORPUS_MAX_PLANE_ORDER`.
pub fn plane_corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7].into_iter().filter(|&p| p <= CORPUS_MAX_PLANE_PRIME) {
        let q = p as i64;
        for t in 0..q.pow(4) {
            let m = [t % q, t / q % q, t / (q * q) % q, t / (q * q * q)];
            if (m[0] * m[3] - m[1] * m[2]).rem_euclid(q) == 0 {
                continue;
            }
            if matrix_order_mod(&m, q, CORPUS_MAX_PLANE_ORDER).is_none() {
                continue;
            }
            out.push(Instance {
                id: format!("plane{p}-{}-{}-{}-{}", m[0], m[1], m[2], m[3]),
                factors: vec![p, p],
                generators: vec![vec![vec![m[0], m[1]], vec![m[2], m[3]]]],
                chi: None,
                p: None,
                m_prime: None,
            });
        }
    }
    out
}

fn matrix_order_mod(m: &[i64; 4], q: i64, max: usize) -> Option<usize> {
    let mul = |a: [i64; 4], b: [i64; 4]| {
        [
            (a[0] * b[0] + a[1] * b[2]) % q,
            (a[0] * b[1] + a[1] * b[3]) % q,
            (a[2] * b[0] + a[3] * b[2]) % q,
            (a[2] * b[1] + a[3] * b[3]) % q,
        ]
    };
    let mut x = *m;
    for k in 1..=max {
        if x == [1, 0, 0, 1] {
            return Some(k);
        }
        x = mul(x, *m);
    }
    None
}

/// The diagonal factor lists of all abelian groups of order `2 ≤ n ≤ max` in
/// invariant-factor form.
pub fn abelian_groups_up_to(max: u64) -> Vec<Vec<u64>> {
    fn chains(n: u64, first: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 1 {
            out.push(acc.clone());
            return;
        }
        // next factor d is a multiple of the previous one and divides what is left
        for d in (2..=n).filter(|d| n % d == 0 && d % first == 0) {
            let rest = n / d;
            // remaining factors are multiples of d, so rest must be 1 or divisible by d
            if rest == 1 || rest % d == 0 {
                acc.push(d);
                chains(rest, d, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    for n in 2..=max {
        chains(n, 1, &mut Vec::new(), &mut out);
    }
    out
}

/// For each prime `p` in `primes`: every module of order at most
/// [`CORPUS_MAX_PRO_P_MODULE`] and prime to `p`, with the trivial action and with
/// each unipotent automorphism of prime order `q ≤ 7`.
///
/// Returns the instances and the number of (module, `q`) pairs skipped because
/// `|End(M)|` exceeded [`CORPUS_END_CAP`].
pub fn pro_p_corpus(primes: &[u64]) -> (Vec<Instance>, usize) {
    let mut out = Vec::new();
    let mut skipped = 0;
    for f in abelian_groups_up_to(CORPUS_MAX_PRO_P_MODULE) {
        let order: u64 = f.iter().product();
        let ff: Vec<i64> = f.iter().map(|&d| d as i64).collect();
        let m = FinAbGroup::new(&ff).expect("chain factors");
        let name = f.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x");
        let mut actions: Vec<(u64, Vec<Vec<Vec<i64>>>)> = Vec::new();
        for q in [2u64, 3, 5, 7] {
            match unipotent_order_p_actions(&m, q, CORPUS_END_CAP) {
                Ok(acts) => actions.push((
                    q,
                    acts.iter().map(|a| a.matrix().iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()).collect(),
                )),
                Err(Error::CapExceeded { .. }) => skipped += 1,
                Err(e) => panic!("unexpected error enumerating unipotents: {e}"),
            }
        }
        for &p in primes.iter().filter(|&&p| order % p != 0) {
            let inst = |id: String, generators| Instance { id, factors: f.clone(), generators, chi: None, p: Some(p), m_prime: None };
            out.push(inst(format!("prop{p}-{name}-trivial"), vec![]));
            for (q, acts) in &actions {
                for (i, a) in acts.iter().enumerate() {
                    out.push(inst(format!("prop{p}-{name}-q{q}-{i}"), vec![a.clone()]));
                }
            }
        }
    }
    (out, skipped)
}

/// Modules `(Z/2)^k ⊕ Z/d` with `d` odd: every unipotent of order 2 on the
/// 2-part (identity elsewhere), and multiplication by `-1` on the odd part.
pub fn exceptional_corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    for k in 1..=3usize {
        let two = FinAbGroup::new(&vec![2; k]).expect("elementary abelian");
        let unis = unipotent_order_p_actions(&two, 2, CORPUS_END_CAP).expect("small endomorphism ring");
        for d in [1u64, 3, 5, 9] {
            let mut factors = vec![2; k];
            if d > 1 {
                factors.push(d);
            }
            let odd = if d > 1 { identity(1) } else { identity(0) };
            for (i, u) in unis.iter().enumerate() {
                let ub: Vec<Vec<i64>> = u.matrix().iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
                out.push(Instance {
                    id: format!("exc-2^{k}-d{d}-u{i}"),
                    factors: factors.clone(),
                    generators: vec![block_diag(&[&ub, &odd])],
                    chi: None,
                    p: None,
                    m_prime: None,
                });
            }
            if d > 1 {
                out.push(Instance {
                    id: format!("exc-2^{k}-d{d}-neg"),
                    factors: factors.clone(),
                    generators: vec![block_diag(&[&identity(k), &[vec![-1]]])],
                    chi: None,
                    p: None,
                    m_prime: None,
                });
            }
        }
    }
    out
}
