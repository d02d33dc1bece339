//! Finite groups of automorphisms acting on a [`FinAbGroup`], stored by full
//! enumeration.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::arith::{gcd_u64, units};
use crate::error::{Error, Result};
use crate::group::{Endomorphism, FinAbGroup, ModuleElement, Subgroup};

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// Values of a character `G -> (Z/N)^*`, one per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labels {
    pub modulus: u64,
    pub values: Vec<u64>,
}

/// A finite group acting on `parent`.
///
/// When a character is attached, elements are pairs (matrix, character value):
/// two group elements may act by the same matrix yet differ in their label.
#[derive(Clone, Debug)]
pub struct ActionGroup {
    parent: FinAbGroup,
    elements: Vec<Endomorphism>,
    labels: Option<Labels>,
    generator_indices: Vec<usize>,
    inverse: Vec<usize>,
    tree: Vec<Option<(usize, usize)>>,
    index: HashMap<(Endomorphism, u64), usize>,
}

impl ActionGroup {
    /// Closure of `gens` under composition, breadth-first from the identity.
    pub fn close_generators(parent: &FinAbGroup, gens: &[Endomorphism], cap: usize) -> Result<Self> {
        Self::close(parent, gens, None, cap)
    }

    /// Closure of the pairs `(gens[i], chi[i] mod modulus)`.
    pub fn close_labeled(
        parent: &FinAbGroup,
        gens: &[Endomorphism],
        chi: &[u64],
        modulus: u64,
        cap: usize,
    ) -> Result<Self> {
        if chi.len() != gens.len() {
            return Err(Error::DimensionMismatch { expected: gens.len(), found: chi.len() });
        }
        if modulus == 0 {
            return Err(Error::InvalidArgument("character modulus must be positive".into()));
        }
        for &c in chi {
            if gcd_u64(c % modulus, modulus) != 1 && modulus > 1 {
                return Err(Error::InvalidArgument(format!("character value {c} is not a unit mod {modulus}")));
            }
        }
        Self::close(parent, gens, Some((chi, modulus)), cap)
    }

    fn close(parent: &FinAbGroup, gens: &[Endomorphism], chi: Option<(&[u64], u64)>, cap: usize) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if g.parent() != parent {
                return Err(Error::ParentMismatch);
            }
            if !g.is_invertible() {
                return Err(Error::NonInvertibleGenerator(i));
            }
        }
        let modulus = chi.map_or(1, |c| c.1);
        let gen_label = |i: usize| chi.map_or(0, |c| c.0[i] % modulus);
        let id = Endomorphism::identity(parent);
        let id_label = 1 % modulus;
        let mut elements = vec![id.clone()];
        let mut values = vec![id_label];
        let mut index = HashMap::new();
        index.insert((id, id_label), 0usize);
        // (parent element, generator) that first produced each element
        let mut tree: Vec<Option<(usize, usize)>> = vec![None];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (gi, g) in gens.iter().enumerate() {
                let y = g.compose_unchecked(&elements[x]);
                let lab = ((gen_label(gi) as u128 * values[x] as u128) % modulus as u128) as u64;
                let key = (y, lab);
                if !index.contains_key(&key) {
                    if elements.len() >= cap {
                        return Err(Error::ClosureCapExceeded { cap });
                    }
                    let idx = elements.len();
                    elements.push(key.0.clone());
                    values.push(lab);
                    index.insert(key, idx);
                    tree.push(Some((x, gi)));
                    queue.push_back(idx);
                }
            }
        }
        let generator_indices = gens
            .iter()
            .enumerate()
            .map(|(gi, g)| index[&(g.clone(), gen_label(gi))])
            .collect::<Vec<_>>();
        let mut grp = ActionGroup {
            parent: parent.clone(),
            elements,
            labels: chi.map(|_| Labels { modulus, values }),
            generator_indices,
            inverse: Vec::new(),
            tree: Vec::new(),
            index,
        };
        // inverse of generators by powering, then along the BFS tree
        let gen_inv: Vec<usize> = grp
            .generator_indices
            .iter()
            .map(|&g| {
                let mut prev = 0;
                let mut cur = g;
                while cur != 0 {
                    prev = cur;
                    cur = grp.mul(g, cur);
                }
                prev
            })
            .collect();
        let mut inverse = vec![0usize; grp.elements.len()];
        for (y, node) in tree.iter().enumerate() {
            if let Some((x, gi)) = *node {
                // y = g x  =>  y^{-1} = x^{-1} g^{-1}
                inverse[y] = grp.mul(inverse[x], gen_inv[gi]);
            }
        }
        grp.inverse = inverse;
        grp.tree = tree;
        Ok(grp)
    }

    /// The trivial group acting on `parent`.
    pub fn trivial(parent: &FinAbGroup) -> Self {
        Self::close_generators(parent, &[], 1).expect("trivial group always closes")
    }

    /// `(Z/m)^*` acting on `Z/m` by multiplication, generated by all units in ascending order.
    pub fn unit_group(m: u64) -> Self {
        let parent = FinAbGroup::cyclic(m);
        if m <= 2 {
            return Self::trivial(&parent);
        }
        let gens: Vec<Endomorphism> = units(m).into_iter().map(|u| Endomorphism::scalar(&parent, u as i64)).collect();
        Self::close_generators(&parent, &gens, usize::MAX).expect("units act invertibly")
    }

    pub fn parent(&self) -> &FinAbGroup {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Endomorphism] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Endomorphism {
        &self.elements[i]
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn label(&self, i: usize) -> Option<u64> {
        self.labels.as_ref().map(|l| l.values[i])
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    /// For each element `y` other than the identity, the pair `(x, k)` with
    /// `y = gens[k] ∘ x` through which the closure first reached it.
    pub fn spanning_tree(&self) -> &[Option<(usize, usize)>] {
        &self.tree
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// Index of `elements[i] ∘ elements[j]`.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        let m = self.elements[i].compose_unchecked(&self.elements[j]);
        let lab = match &self.labels {
            Some(l) => ((l.values[i] as u128 * l.values[j] as u128) % l.modulus as u128) as u64,
            None => 0,
        };
        *self.index.get(&(m, lab)).expect("group is closed under composition")
    }

    pub fn is_central(&self, i: usize) -> bool {
        (0..self.order()).all(|j| self.mul(i, j) == self.mul(j, i))
    }

    pub fn is_abelian(&self) -> bool {
        self.generator_indices
            .iter()
            .all(|&a| self.generator_indices.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Whether every element acts as the identity on the module.
    pub fn acts_trivially(&self) -> bool {
        self.elements.iter().all(|e| e.is_identity())
    }

    /// Exhaustive check of closure, identity and inverses.
    pub fn verify_group_axioms(&self) -> bool {
        let n = self.order();
        self.elements[0].is_identity()
            && (0..n).all(|i| self.mul(i, self.inverse[i]) == 0 && self.mul(self.inverse[i], i) == 0)
            && (0..n).all(|i| (0..n).all(|j| {
                let m = self.elements[i].compose_unchecked(&self.elements[j]);
                self.index.keys().any(|(e, _)| *e == m)
            }))
    }

    pub fn orbit(&self, p: &ModuleElement) -> Result<Vec<ModuleElement>> {
        if p.parent() != &self.parent {
            return Err(Error::ParentMismatch);
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for g in &self.elements {
            let q = g.apply_unchecked(p);
            if seen.insert(q.clone()) {
                out.push(q);
            }
        }
        Ok(out)
    }

    /// Indices of the elements fixing `p`.
    pub fn stabilizer(&self, p: &ModuleElement) -> Result<Vec<usize>> {
        if p.parent() != &self.parent {
            return Err(Error::ParentMismatch);
        }
        Ok((0..self.order()).filter(|&i| self.elements[i].apply_unchecked(p) == *p).collect())
    }

    /// The `Z[G]`-submodule generated by `p`.
    pub fn module_generated(&self, p: &ModuleElement) -> Result<Subgroup> {
        let orbit = self.orbit(p)?;
        Subgroup::generated(&self.parent, &orbit)
    }

    /// The `Z[G]`-submodule generated by several elements.
    pub fn module_generated_by(&self, gens: &[ModuleElement]) -> Result<Subgroup> {
        let mut all = Vec::new();
        for g in gens {
            all.extend(self.orbit(g)?);
        }
        Subgroup::generated(&self.parent, &all)
    }

    /// `M^G`, the kernel of the stacked maps `g - 1` over the generators.
    pub fn fixed_subgroup(&self) -> Subgroup {
        let maps: Vec<Endomorphism> = self
            .generator_indices
            .iter()
            .map(|&i| self.elements[i].add_scalar(-1))
            .collect();
        Subgroup::common_kernel(&self.parent, &maps)
    }

    /// Whether `s` is stable under every element.
    pub fn is_stable(&self, s: &Subgroup) -> bool {
        let basis = s.basis();
        self.generator_indices
            .iter()
            .all(|&g| basis.iter().all(|b| s.contains(&self.elements[g].apply_unchecked(b))))
    }
}
