//! Almost-fixed elements and modules.
//!
//! `P` is almost fixed under `G` when `(g + h - 2)P = 0` forces `(g - 1)P = 0`
//! and `(h - 1)P = 0`. Every check below reduces to comparing the values of
//! `g - 1` on a generating set: a violating pair is `(g, h)` with
//! `(g - 1) = -(h - 1) ≠ 0` there.

use std::collections::HashMap;

use crate::action::ActionGroup;
use crate::arith::gcd_u64;
use crate::error::{Error, Result};
use crate::group::{ModuleElement, Subgroup};

/// Outcome of an almost-fixed test. `witness` holds element indices `(g, h)`
/// of the first violating pair in the group's element order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostFixedCheck {
    pub witness: Option<(usize, usize)>,
}

impl AlmostFixedCheck {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

fn first_violation(g: &ActionGroup, span: &[ModuleElement]) -> Option<(usize, usize)> {
    let keys: Vec<Vec<ModuleElement>> = g
        .elements()
        .iter()
        .map(|e| span.iter().map(|x| e.apply_unchecked(x).add_unchecked(&x.neg())).collect())
        .collect();
    let mut first: HashMap<&Vec<ModuleElement>, usize> = HashMap::new();
    for (i, k) in keys.iter().enumerate() {
        first.entry(k).or_insert(i);
    }
    keys.iter().enumerate().find_map(|(i, k)| {
        if k.iter().all(|x| x.is_zero()) {
            return None;
        }
        let neg: Vec<ModuleElement> = k.iter().map(|x| x.neg()).collect();
        first.get(&neg).map(|&j| (i, j))
    })
}

pub fn is_almost_fixed_element(g: &ActionGroup, p: &ModuleElement) -> Result<AlmostFixedCheck> {
    if p.parent() != g.parent() {
        return Err(Error::ParentMismatch);
    }
    Ok(AlmostFixedCheck { witness: first_violation(g, std::slice::from_ref(p)) })
}

/// Module-level test on the whole acted-on group, as a matrix identity.
pub fn is_almost_fixed_module(g: &ActionGroup) -> AlmostFixedCheck {
    AlmostFixedCheck { witness: first_violation(g, &g.parent().basis()) }
}

/// Module-level test for the action restricted to a stable subgroup.
pub fn is_almost_fixed_submodule(g: &ActionGroup, s: &Subgroup) -> Result<AlmostFixedCheck> {
    if s.parent() != g.parent() {
        return Err(Error::ParentMismatch);
    }
    if !g.is_stable(s) {
        return Err(Error::HypothesisNotMet("subgroup is not stable under the action".into()));
    }
    Ok(AlmostFixedCheck { witness: first_violation(g, &s.basis()) })
}

fn require_almost_fixed(g: &ActionGroup, p: &ModuleElement) -> Result<()> {
    if !is_almost_fixed_element(g, p)?.holds() {
        return Err(Error::HypothesisNotMet(format!("{:?} is not almost fixed", p.coords())));
    }
    Ok(())
}

/// Every conjugate `σP` of an almost-fixed `P` is almost fixed.
pub fn check_conjugate_lemma(g: &ActionGroup, p: &ModuleElement) -> Result<bool> {
    require_almost_fixed(g, p)?;
    for s in g.orbit(p)? {
        if !is_almost_fixed_element(g, &s)?.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For almost-fixed `P`, `(g - 1)^2 P = 0` forces `(g - 1)P = 0`.
pub fn check_square_lemma(g: &ActionGroup, p: &ModuleElement) -> Result<bool> {
    require_almost_fixed(g, p)?;
    Ok(g.elements().iter().all(|e| {
        let u = e.add_scalar(-1);
        let up = u.apply_unchecked(p);
        !u.apply_unchecked(&up).is_zero() || up.is_zero()
    }))
}

/// The module generated by almost-fixed elements is almost fixed.
pub fn check_generators_lemma(g: &ActionGroup, gens: &[ModuleElement]) -> Result<bool> {
    for (i, p) in gens.iter().enumerate() {
        if p.parent() != g.parent() {
            return Err(Error::ParentMismatch);
        }
        if !is_almost_fixed_element(g, p)?.holds() {
            return Err(Error::HypothesisNotMet(format!(
                "generator {i} {:?} is not almost fixed",
                p.coords()
            )));
        }
    }
    let n = g.module_generated_by(gens)?;
    Ok(is_almost_fixed_submodule(g, &n)?.holds())
}

/// Whether the generator of `Z/m` is almost fixed under all of `(Z/m)^*`.
///
/// Equivalent to: no unit `u ≢ 1` has `2 - u` a unit.
pub fn unit_generator_almost_fixed(m: u64) -> bool {
    if m <= 2 {
        return true;
    }
    !(2..m).any(|u| gcd_u64(u, m) == 1 && gcd_u64((m + 2 - u) % m, m) == 1)
}

/// All `m ≤ m_max` whose full unit action leaves the generator almost fixed.
pub fn almost_rational_roots_of_unity(m_max: u64) -> Vec<u64> {
    (1..=m_max).filter(|&m| unit_generator_almost_fixed(m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Endomorphism, FinAbGroup};

    fn rot5() -> ActionGroup {
        let m = FinAbGroup::new(&[5, 5]).unwrap();
        let a = Endomorphism::new(&m, vec![vec![0, 1], vec![-1, 0]]).unwrap();
        ActionGroup::close_generators(&m, &[a], 100).unwrap()
    }

    fn one(g: &ActionGroup) -> ModuleElement {
        g.parent().element(&[1]).unwrap()
    }

    // literal pair scan
    fn brute_element(g: &ActionGroup, p: &ModuleElement) -> Option<(usize, usize)> {
        let n = g.order();
        for i in 0..n {
            for j in 0..n {
                let gp = g.element(i).apply(p).unwrap();
                let hp = g.element(j).apply(p).unwrap();
                let s = gp.add(&hp).unwrap().sub(&p.scale(2)).unwrap();
                if s.is_zero() && !(gp == *p && hp == *p) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    #[test]
    fn element_examples() {
        let u6 = ActionGroup::unit_group(6);
        assert!(is_almost_fixed_element(&u6, &one(&u6)).unwrap().holds());

        let u5 = ActionGroup::unit_group(5);
        let c = is_almost_fixed_element(&u5, &one(&u5)).unwrap();
        let (g, h) = c.witness.unwrap();
        assert_eq!((u5.element(g).matrix()[0][0], u5.element(h).matrix()[0][0]), (3, 4));

        let r = rot5();
        let p = r.parent().element(&[2, 1]).unwrap();
        let c = is_almost_fixed_element(&r, &p).unwrap();
        assert_eq!(c.witness, Some((1, 2)));
        let a = r.element(1).clone();
        assert_eq!(r.element(2), &a.pow(2));
    }

    #[test]
    fn element_matches_brute_force() {
        for m in 1..=40 {
            let g = ActionGroup::unit_group(m);
            for p in g.parent().elements() {
                let fast = is_almost_fixed_element(&g, &p).unwrap().witness;
                assert_eq!(fast, brute_element(&g, &p), "m={m} p={:?}", p.coords());
            }
        }
        let r = rot5();
        for p in r.parent().elements() {
            assert_eq!(is_almost_fixed_element(&r, &p).unwrap().witness, brute_element(&r, &p));
        }
    }

    #[test]
    fn module_examples() {
        let r = rot5();
        assert!(is_almost_fixed_module(&r).holds());
        // module true but element false
        let p = r.parent().element(&[2, 1]).unwrap();
        assert!(!is_almost_fixed_element(&r, &p).unwrap().holds());

        let m = FinAbGroup::new(&[4, 9]).unwrap();
        assert!(is_almost_fixed_module(&ActionGroup::trivial(&m)).holds());

        let u5 = ActionGroup::unit_group(5);
        let c = is_almost_fixed_module(&u5);
        let (g, h) = c.witness.unwrap();
        assert_eq!((u5.element(g).matrix()[0][0], u5.element(h).matrix()[0][0]), (3, 4));
    }

    #[test]
    fn module_matches_matrix_scan() {
        let r = rot5();
        let n = r.order();
        let mut brute = None;
        'outer: for i in 0..n {
            for j in 0..n {
                let s = r.element(i).add(r.element(j)).unwrap().add_scalar(-2);
                if s.is_zero() && !(r.element(i).is_identity() && r.element(j).is_identity()) {
                    brute = Some((i, j));
                    break 'outer;
                }
            }
        }
        assert_eq!(is_almost_fixed_module(&r).witness, brute);
    }

    #[test]
    fn lemma_checks() {
        let u6 = ActionGroup::unit_group(6);
        assert!(check_conjugate_lemma(&u6, &one(&u6)).unwrap());
        assert_eq!(u6.orbit(&one(&u6)).unwrap().len(), 2);
        assert!(check_square_lemma(&u6, &one(&u6)).unwrap());
        assert!(check_generators_lemma(&u6, &[one(&u6)]).unwrap());
        assert!(check_generators_lemma(&u6, &[u6.parent().zero()]).unwrap());

        let u7 = ActionGroup::unit_group(7);
        let z = u7.parent().zero();
        assert!(check_conjugate_lemma(&u7, &z).unwrap());
        assert!(check_square_lemma(&u7, &z).unwrap());

        let m = FinAbGroup::new(&[3, 5]).unwrap();
        let t = ActionGroup::trivial(&m);
        for p in m.elements() {
            assert!(check_conjugate_lemma(&t, &p).unwrap());
            assert!(check_square_lemma(&t, &p).unwrap());
        }

        let r = rot5();
        let p = r.parent().element(&[2, 1]).unwrap();
        assert!(matches!(check_generators_lemma(&r, &[p.clone()]), Err(Error::HypothesisNotMet(_))));
        assert!(matches!(check_conjugate_lemma(&r, &p), Err(Error::HypothesisNotMet(_))));
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(almost_rational_roots_of_unity(20), vec![1, 2, 3, 6]);
        assert!(unit_generator_almost_fixed(6));
        let u4 = ActionGroup::unit_group(4);
        let c = is_almost_fixed_element(&u4, &one(&u4)).unwrap();
        let (g, h) = c.witness.unwrap();
        assert_eq!((u4.element(g).matrix()[0][0], u4.element(h).matrix()[0][0]), (3, 3));
        // fast criterion agrees with the group computation
        for m in 1..=60 {
            let g = ActionGroup::unit_group(m);
            let gen = if m == 1 { g.parent().zero() } else { one(&g) };
            assert_eq!(
                is_almost_fixed_element(&g, &gen).unwrap().holds(),
                unit_generator_almost_fixed(m),
                "m={m}"
            );
        }
    }
}
