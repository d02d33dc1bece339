//! First cohomology `H^1(G, M)` by integer linear algebra.
//!
//! A cocycle is determined by its values on the generators: along the
//! closure's spanning tree `f(s x) = f(s) + s f(x)`. The unknowns are those
//! values, and the cocycle identity is imposed for every pair `(s, x)` with
//! `s` a generator and `x` arbitrary; the set of left factors for which the
//! identity holds is closed under products, so this covers all of `G × G`.

use crate::action::ActionGroup;
use crate::error::{Error, Result};
use crate::group::{Endomorphism, FinAbGroup, ModuleElement};
use crate::lattice::{Congruence, IVec, ModLattice};

pub const GROUP_CAP: usize = 64;
pub const MODULE_CAP: u64 = 10_000;

/// `Z^1`, `B^1` and `H^1 = Z^1 / B^1` for one action.
#[derive(Clone, Debug)]
pub struct CocycleSpace {
    group: ActionGroup,
    /// `f(g) = Σ_s expand[g][s] f(s)`
    expand: Vec<Vec<Endomorphism>>,
    cocycles: ModLattice,
    coboundaries: ModLattice,
    relations: ModLattice,
    h1: Vec<u64>,
}

pub fn compute_h1(g: &ActionGroup) -> Result<CocycleSpace> {
    let m = g.parent();
    if g.order() > GROUP_CAP {
        return Err(Error::CapExceeded { what: "group order", size: g.order() as u128, cap: GROUP_CAP as u128 });
    }
    if m.order() > MODULE_CAP {
        return Err(Error::CapExceeded { what: "module order", size: m.order() as u128, cap: MODULE_CAP as u128 });
    }
    let gens = g.generator_indices();
    let (ns, k) = (gens.len(), m.rank());
    let dim = ns * k;
    let e = m.exponent() as i128;
    let d = m.invariant_factors();

    let mut expand: Vec<Vec<Endomorphism>> = vec![vec![Endomorphism::zero(m); ns]; g.order()];
    for (y, node) in g.spanning_tree().iter().enumerate() {
        if let Some((x, s)) = *node {
            let act = g.element(gens[s]);
            let row: Vec<Endomorphism> = (0..ns)
                .map(|t| {
                    let c = act.compose_unchecked(&expand[x][t]);
                    if t == s {
                        c.add_scalar(1)
                    } else {
                        c
                    }
                })
                .collect();
            expand[y] = row;
        }
    }

    let relation_rows: Vec<IVec> = (0..dim)
        .map(|r| {
            let mut v = vec![0; dim];
            v[r] = d[r % k] as i128;
            v
        })
        .collect();
    let relations = ModLattice::new(dim, e, &relation_rows);

    let mut cons = Vec::new();
    for x in 0..g.order() {
        for (s, &gs) in gens.iter().enumerate() {
            let sx = g.mul(gs, x);
            let act = g.element(gs);
            // f(sx) - f(s) - s f(x) = Σ_t K_t f(t)
            let ks: Vec<Endomorphism> = (0..ns)
                .map(|t| {
                    let c = expand[sx][t].lin_comb(1, &act.compose_unchecked(&expand[x][t]), -1);
                    if t == s {
                        c.add_scalar(-1)
                    } else {
                        c
                    }
                })
                .collect();
            for i in 0..k {
                let terms: Vec<(usize, i128)> = (0..ns)
                    .flat_map(|t| (0..k).map(move |j| (t, j)))
                    .filter_map(|(t, j)| {
                        let c = ks[t].matrix()[i][j] as i128;
                        (c != 0).then_some((t * k + j, c))
                    })
                    .collect();
                if !terms.is_empty() {
                    cons.push(Congruence { terms, modulus: d[i] as i128 });
                }
            }
        }
    }
    let cocycles = ModLattice::full(dim, e).restrict(cons.iter());

    // coboundary of e_j, tagged by j
    let mut tagged: Vec<(IVec, IVec)> = (0..k)
        .map(|j| {
            let ej = m.basis()[j].clone();
            let mut v = Vec::with_capacity(dim);
            for &gs in gens {
                let img = g.element(gs).apply_unchecked(&ej).add_unchecked(&ej.neg());
                v.extend(img.coords().iter().map(|&c| c as i128));
            }
            let mut tag = vec![0; k];
            tag[j] = 1;
            (v, tag)
        })
        .collect();
    tagged.extend(relation_rows.iter().map(|r| (r.clone(), vec![0; k])));
    let coboundaries = ModLattice::with_tags(dim, e, &tagged, e);

    let h1 = if dim == 0 {
        Vec::new()
    } else {
        cocycles.relative_invariants(&coboundaries).into_iter().map(|x| x as u64).collect()
    };
    Ok(CocycleSpace { group: g.clone(), expand, cocycles, coboundaries, relations, h1 })
}

fn invariants_between(outer: &ModLattice, inner: &ModLattice) -> Vec<u64> {
    if outer.dim() == 0 {
        return Vec::new();
    }
    outer.relative_invariants(inner).into_iter().map(|x| x as u64).collect()
}

fn order_of(inv: &[u64]) -> Option<u128> {
    inv.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
}

impl CocycleSpace {
    pub fn group(&self) -> &ActionGroup {
        &self.group
    }

    pub fn module(&self) -> &FinAbGroup {
        self.group.parent()
    }

    /// Invariant factors of `H^1`.
    pub fn h1_invariants(&self) -> &[u64] {
        &self.h1
    }

    pub fn h1_order(&self) -> Option<u128> {
        order_of(&self.h1)
    }

    pub fn z1_invariants(&self) -> Vec<u64> {
        invariants_between(&self.cocycles, &self.relations)
    }

    pub fn b1_invariants(&self) -> Vec<u64> {
        invariants_between(&self.coboundaries, &self.relations)
    }

    pub fn z1_order(&self) -> Option<u128> {
        order_of(&self.z1_invariants())
    }

    pub fn b1_order(&self) -> Option<u128> {
        order_of(&self.b1_invariants())
    }

    fn values_on_generators(&self, v: &[i128]) -> Vec<ModuleElement> {
        let m = self.module();
        v.chunks(m.rank().max(1))
            .take(self.group.generator_indices().len())
            .map(|c| m.element_unchecked(c.iter().copied()))
            .collect()
    }

    /// The full cocycle `g ↦ f(g)` from its values on the generators.
    pub fn extend(&self, on_gens: &[ModuleElement]) -> Vec<ModuleElement> {
        let m = self.module();
        self.expand
            .iter()
            .map(|row| {
                row.iter().zip(on_gens).fold(m.zero(), |acc, (c, x)| acc.add_unchecked(&c.apply_unchecked(x)))
            })
            .collect()
    }

    /// A generating set of `Z^1`, each given on all group elements.
    pub fn cocycle_basis(&self) -> Vec<Vec<ModuleElement>> {
        if self.module().rank() == 0 {
            return Vec::new();
        }
        self.cocycles
            .rows()
            .iter()
            .map(|r| self.extend(&self.values_on_generators(r)))
            .filter(|f| f.iter().any(|x| !x.is_zero()))
            .collect()
    }

    /// `g ↦ g m - m`.
    pub fn coboundary(&self, m: &ModuleElement) -> Vec<ModuleElement> {
        self.group.elements().iter().map(|g| g.apply_unchecked(m).add_unchecked(&m.neg())).collect()
    }

    /// Some `m` with `f = g ↦ g m - m`, if `f` (given on all elements) is a coboundary.
    pub fn coboundary_witness(&self, f: &[ModuleElement]) -> Option<ModuleElement> {
        let m = self.module();
        if m.rank() == 0 {
            return Some(m.zero());
        }
        let v: IVec = self
            .group
            .generator_indices()
            .iter()
            .flat_map(|&s| f[s].coords().iter().map(|&c| c as i128).collect::<Vec<_>>())
            .collect();
        let (rest, tag) = self.coboundaries.reduce(&v);
        if rest.iter().any(|&x| x != 0) {
            return None;
        }
        let w = m.element_unchecked(tag);
        (self.coboundary(&w) == f).then_some(w)
    }

    /// Literal check of `f(gh) = f(g) + g f(h)` on all pairs.
    pub fn is_cocycle(&self, f: &[ModuleElement]) -> bool {
        let g = &self.group;
        (0..g.order()).all(|a| {
            (0..g.order()).all(|b| f[g.mul(a, b)] == f[a].add_unchecked(&g.element(a).apply_unchecked(&f[b])))
        })
    }
}

/// For central `g`, `(g - 1)` kills `H^1`: every `(g - 1)f` is a coboundary.
/// When `g - 1` is invertible on `M`, additionally checks `H^1 = 0`.
pub fn verify_sah(space: &CocycleSpace, g: usize) -> Result<bool> {
    let grp = space.group();
    if g >= grp.order() {
        return Err(Error::InvalidArgument(format!("element index out of range (group order {})", grp.order())));
    }
    if !grp.is_central(g) {
        return Err(Error::NotCentral(g));
    }
    let u = grp.element(g).add_scalar(-1);
    let killed = space.cocycle_basis().iter().all(|f| {
        let twisted: Vec<ModuleElement> = f.iter().map(|x| u.apply_unchecked(x)).collect();
        space.coboundary_witness(&twisted).is_some()
    });
    let vanishing = !u.is_invertible() || space.h1_invariants().is_empty();
    Ok(killed && vanishing)
}
