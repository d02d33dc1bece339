//! Finite abelian groups in invariant-factor form, their elements,
//! endomorphisms, subgroups and quotients.

use std::fmt;
use std::sync::Arc;

use crate::arith::{gcd_u64, split_p_part};
use crate::error::{Error, Result};
use crate::lattice::{smith_with_transform, Congruence, IVec, ModLattice};

/// Default bound on group orders handled by the crate.
pub const DEFAULT_ORDER_CAP: u64 = 1_000_000;

/// `Z/d_1 ⊕ … ⊕ Z/d_k` with `d_1 | d_2 | … | d_k`, each `d_i ≥ 2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    factors: Arc<[u64]>,
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAbGroup{:?}", &self.factors[..])
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Identification of `⊕ Z/f_i` (arbitrary diagonal presentation) with its
/// invariant-factor form.
#[derive(Clone, Debug)]
pub struct Presentation {
    chain: FinAbGroup,
    diagonal: Vec<u64>,
    smith: Vec<i128>,
    v: Vec<IVec>,
    v_inv: Vec<IVec>,
}

impl FinAbGroup {
    /// Normalizes `factors` into invariant-factor form; see [`FinAbGroup::with_cap`].
    pub fn new(factors: &[i64]) -> Result<Self> {
        Self::with_cap(factors, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(factors: &[i64], cap: u64) -> Result<Self> {
        Ok(Self::from_diagonal_with_cap(factors, cap)?.0)
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: Arc::from(Vec::new()) }
    }

    /// `Z/n`; `n = 1` gives the trivial group.
    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1);
        if n == 1 {
            Self::trivial()
        } else {
            FinAbGroup { factors: Arc::from(vec![n]) }
        }
    }

    pub fn from_diagonal(factors: &[i64]) -> Result<(Self, Presentation)> {
        Self::from_diagonal_with_cap(factors, DEFAULT_ORDER_CAP)
    }

    pub fn from_diagonal_with_cap(factors: &[i64], cap: u64) -> Result<(Self, Presentation)> {
        if let Some(&bad) = factors.iter().find(|&&d| d <= 1) {
            return Err(Error::InvalidFactor(bad));
        }
        let order = factors
            .iter()
            .try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
            .unwrap_or(u128::MAX);
        if order > cap as u128 {
            return Err(Error::CapExceeded { what: "group order", size: order, cap: cap as u128 });
        }
        let n = factors.len();
        let rows: Vec<IVec> = (0..n)
            .map(|i| {
                let mut r = vec![0i128; n];
                r[i] = factors[i] as i128;
                r
            })
            .collect();
        let is_chain = factors.windows(2).all(|w| w[1] % w[0] == 0);
        let (smith, v, v_inv) = if is_chain {
            let ident: Vec<IVec> = (0..n)
                .map(|i| {
                    let mut r = vec![0i128; n];
                    r[i] = 1;
                    r
                })
                .collect();
            (factors.iter().map(|&d| d as i128).collect(), ident.clone(), ident)
        } else {
            let s = smith_with_transform(&rows, n);
            (s.diagonal, s.v, s.v_inv)
        };
        let chain: Vec<u64> = smith.iter().filter(|&&s| s != 1).map(|&s| s as u64).collect();
        let group = FinAbGroup { factors: Arc::from(chain) };
        let pres = Presentation {
            chain: group.clone(),
            diagonal: factors.iter().map(|&d| d as u64).collect(),
            smith,
            v,
            v_inv,
        };
        Ok((group, pres))
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn zero(&self) -> ModuleElement {
        ModuleElement { group: self.clone(), coords: vec![0; self.rank()] }
    }

    /// Element with the given coordinates, each reduced mod its factor.
    pub fn element(&self, coords: &[i64]) -> Result<ModuleElement> {
        if coords.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: coords.len() });
        }
        Ok(self.element_unchecked(coords.iter().map(|&c| c as i128)))
    }

    pub(crate) fn element_unchecked(&self, coords: impl IntoIterator<Item = i128>) -> ModuleElement {
        let coords = coords
            .into_iter()
            .zip(self.factors.iter())
            .map(|(c, &d)| c.rem_euclid(d as i128) as u64)
            .collect();
        ModuleElement { group: self.clone(), coords }
    }

    pub fn basis(&self) -> Vec<ModuleElement> {
        (0..self.rank())
            .map(|i| {
                let mut c = vec![0u64; self.rank()];
                c[i] = 1;
                ModuleElement { group: self.clone(), coords: c }
            })
            .collect()
    }

    /// All elements in mixed-radix order (first coordinate fastest).
    pub fn elements(&self) -> impl Iterator<Item = ModuleElement> + '_ {
        let total = self.order();
        (0..total).map(move |mut idx| {
            let coords = self
                .factors
                .iter()
                .map(|&d| {
                    let c = idx % d;
                    idx /= d;
                    c
                })
                .collect();
            ModuleElement { group: self.clone(), coords }
        })
    }

    pub(crate) fn relation_rows(&self) -> Vec<IVec> {
        let k = self.rank();
        (0..k)
            .map(|i| {
                let mut r = vec![0i128; k];
                r[i] = self.factors[i] as i128;
                r
            })
            .collect()
    }

    pub(crate) fn relation_lattice(&self) -> ModLattice {
        ModLattice::new(self.rank(), self.exponent() as i128, &self.relation_rows())
    }

    /// Decomposition `M = M_p ⊕ M_{non-p}` into characteristic subgroups.
    pub fn primary_decompose(&self, p: u64) -> Result<(Subgroup, Subgroup)> {
        if !crate::arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let (pp, rest) = split_p_part(self.exponent(), p);
        let basis = self.basis();
        let mp: Vec<ModuleElement> = basis.iter().map(|b| b.scale(rest as i64)).collect();
        let mn: Vec<ModuleElement> = basis.iter().map(|b| b.scale(pp as i64)).collect();
        Ok((Subgroup::generated(self, &mp)?, Subgroup::generated(self, &mn)?))
    }
}

impl Presentation {
    pub fn group(&self) -> &FinAbGroup {
        &self.chain
    }

    pub fn diagonal(&self) -> &[u64] {
        &self.diagonal
    }

    /// Maps coordinates in the diagonal presentation to an element of the chain form.
    pub fn to_chain(&self, x: &[i64]) -> Result<ModuleElement> {
        let n = self.diagonal.len();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        let y: IVec = (0..n).map(|j| (0..n).map(|i| x[i] as i128 * self.v[i][j]).sum()).collect();
        let coords = y
            .iter()
            .zip(self.smith.iter())
            .filter(|(_, &s)| s != 1)
            .map(|(&c, _)| c);
        Ok(self.chain.element_unchecked(coords))
    }

    /// Inverse of [`Presentation::to_chain`], reduced mod the diagonal factors.
    pub fn from_chain(&self, m: &ModuleElement) -> Vec<u64> {
        let n = self.diagonal.len();
        let skip = self.smith.iter().filter(|&&s| s == 1).count();
        let mut y = vec![0i128; n];
        for (i, &c) in m.coords.iter().enumerate() {
            y[skip + i] = c as i128;
        }
        (0..n)
            .map(|j| {
                let s: i128 = (0..n).map(|i| y[i] * self.v_inv[i][j]).sum();
                s.rem_euclid(self.diagonal[j] as i128) as u64
            })
            .collect()
    }

    /// Transports a matrix acting on column vectors in the diagonal presentation.
    pub fn transport(&self, matrix: &[Vec<i64>]) -> Result<Endomorphism> {
        let n = self.diagonal.len();
        check_square(matrix, n)?;
        for i in 0..n {
            for j in 0..n {
                let (di, dj) = (self.diagonal[i], self.diagonal[j]);
                let need = di / gcd_u64(di, dj);
                if (matrix[i][j] as i128).rem_euclid(need as i128) != 0 {
                    return Err(Error::NotWellDefined { row: i, col: j });
                }
            }
        }
        let k = self.chain.rank();
        let mut cols = Vec::with_capacity(k);
        for b in self.chain.basis() {
            let x = self.from_chain(&b);
            let bx: Vec<i64> = (0..n)
                .map(|i| {
                    let s: i128 = (0..n).map(|j| matrix[i][j] as i128 * x[j] as i128).sum();
                    s.rem_euclid(self.diagonal[i] as i128) as i64
                })
                .collect();
            cols.push(self.to_chain(&bx)?);
        }
        let m: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| cols[j].coords[i] as i64).collect()).collect();
        Endomorphism::new(&self.chain, m)
    }
}

fn check_square(matrix: &[Vec<i64>], n: usize) -> Result<()> {
    if matrix.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: matrix.len() });
    }
    for row in matrix {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
    }
    Ok(())
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModuleElement {
    group: FinAbGroup,
    coords: Vec<u64>,
}

impl fmt::Debug for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl ModuleElement {
    pub fn parent(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub(crate) fn as_ivec(&self) -> IVec {
        self.coords.iter().map(|&c| c as i128).collect()
    }

    fn same_parent(&self, other: &ModuleElement) -> Result<()> {
        if self.group != other.group {
            Err(Error::ParentMismatch)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &ModuleElement) -> Result<ModuleElement> {
        self.same_parent(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &ModuleElement) -> Result<ModuleElement> {
        self.same_parent(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub(crate) fn add_unchecked(&self, other: &ModuleElement) -> ModuleElement {
        let coords = self
            .coords
            .iter()
            .zip(other.coords.iter())
            .zip(self.group.factors.iter())
            .map(|((a, b), d)| (a + b) % d)
            .collect();
        ModuleElement { group: self.group.clone(), coords }
    }

    pub fn neg(&self) -> ModuleElement {
        let coords = self.coords.iter().zip(self.group.factors.iter()).map(|(a, d)| (d - a) % d).collect();
        ModuleElement { group: self.group.clone(), coords }
    }

    pub fn scale(&self, n: i64) -> ModuleElement {
        let coords = self
            .coords
            .iter()
            .zip(self.group.factors.iter())
            .map(|(&a, &d)| ((a as i128 * n as i128).rem_euclid(d as i128)) as u64)
            .collect();
        ModuleElement { group: self.group.clone(), coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn order(&self) -> u64 {
        self.coords
            .iter()
            .zip(self.group.factors.iter())
            .fold(1, |acc, (&c, &d)| crate::arith::lcm_u64(acc, d / gcd_u64(c, d)))
    }
}

/// An endomorphism of `⊕ Z/d_i`; entry `(i, j)` is the `i`-th coordinate of the image of `e_j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    group: FinAbGroup,
    matrix: Vec<Vec<u64>>,
}

impl fmt::Debug for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.matrix)
    }
}

impl Endomorphism {
    /// Validates well-definedness: `d_i / gcd(d_i, d_j)` must divide `A_ij`.
    pub fn new(group: &FinAbGroup, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let k = group.rank();
        check_square(&matrix, k)?;
        let d = &group.factors;
        let mut out = vec![vec![0u64; k]; k];
        for i in 0..k {
            for j in 0..k {
                let need = d[i] / gcd_u64(d[i], d[j]);
                let a = (matrix[i][j] as i128).rem_euclid(d[i] as i128);
                if a % need as i128 != 0 {
                    return Err(Error::NotWellDefined { row: i, col: j });
                }
                out[i][j] = a as u64;
            }
        }
        Ok(Endomorphism { group: group.clone(), matrix: out })
    }

    pub fn identity(group: &FinAbGroup) -> Self {
        Self::scalar(group, 1)
    }

    pub fn zero(group: &FinAbGroup) -> Self {
        Self::scalar(group, 0)
    }

    pub fn scalar(group: &FinAbGroup, n: i64) -> Self {
        let k = group.rank();
        let matrix = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { (n as i128).rem_euclid(group.factors[i] as i128) as u64 } else { 0 })
                    .collect()
            })
            .collect();
        Endomorphism { group: group.clone(), matrix }
    }

    pub fn parent(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn apply(&self, x: &ModuleElement) -> Result<ModuleElement> {
        if x.group != self.group {
            return Err(Error::ParentMismatch);
        }
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &ModuleElement) -> ModuleElement {
        let d = &self.group.factors;
        let coords = (0..d.len())
            .map(|i| {
                let s: u128 = self.matrix[i].iter().zip(x.coords.iter()).map(|(&a, &c)| a as u128 * c as u128).sum();
                (s % d[i] as u128) as u64
            })
            .collect();
        ModuleElement { group: self.group.clone(), coords }
    }

    fn check(&self, other: &Endomorphism) -> Result<()> {
        if self.group != other.group {
            Err(Error::ParentMismatch)
        } else {
            Ok(())
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        self.check(other)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Endomorphism) -> Endomorphism {
        let d = &self.group.factors;
        let k = d.len();
        let matrix = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let s: u128 = (0..k).map(|l| self.matrix[i][l] as u128 * other.matrix[l][j] as u128).sum();
                        (s % d[i] as u128) as u64
                    })
                    .collect()
            })
            .collect();
        Endomorphism { group: self.group.clone(), matrix }
    }

    pub fn add(&self, other: &Endomorphism) -> Result<Endomorphism> {
        self.check(other)?;
        Ok(self.lin_comb(1, other, 1))
    }

    pub fn sub(&self, other: &Endomorphism) -> Result<Endomorphism> {
        self.check(other)?;
        Ok(self.lin_comb(1, other, -1))
    }

    /// `a*self + b*other`.
    pub(crate) fn lin_comb(&self, a: i64, other: &Endomorphism, b: i64) -> Endomorphism {
        let d = &self.group.factors;
        let matrix = self
            .matrix
            .iter()
            .zip(other.matrix.iter())
            .enumerate()
            .map(|(i, (r, s))| {
                r.iter()
                    .zip(s.iter())
                    .map(|(&x, &y)| {
                        ((a as i128 * x as i128 + b as i128 * y as i128).rem_euclid(d[i] as i128)) as u64
                    })
                    .collect()
            })
            .collect();
        Endomorphism { group: self.group.clone(), matrix }
    }

    pub fn scale(&self, n: i64) -> Endomorphism {
        self.lin_comb(n, &Endomorphism::zero(&self.group), 0)
    }

    /// `self + n` (adding `n` times the identity).
    pub fn add_scalar(&self, n: i64) -> Endomorphism {
        self.lin_comb(1, &Endomorphism::identity(&self.group), n)
    }

    pub fn pow(&self, mut e: u64) -> Endomorphism {
        let mut acc = Endomorphism::identity(&self.group);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    pub fn is_identity(&self) -> bool {
        *self == Endomorphism::identity(&self.group)
    }

    /// Image of `e_j`.
    pub fn column(&self, j: usize) -> ModuleElement {
        let coords = self.matrix.iter().map(|r| r[j]).collect();
        ModuleElement { group: self.group.clone(), coords }
    }

    /// Congruences describing `ker self` on coordinate vectors.
    pub(crate) fn kernel_congruences(&self) -> Vec<Congruence> {
        self.matrix
            .iter()
            .zip(self.group.factors.iter())
            .map(|(row, &d)| Congruence {
                terms: row.iter().enumerate().filter(|(_, &a)| a != 0).map(|(j, &a)| (j, a as i128)).collect(),
                modulus: d as i128,
            })
            .collect()
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::common_kernel(&self.group, std::slice::from_ref(self))
    }

    pub fn image(&self) -> Subgroup {
        let cols: Vec<ModuleElement> = (0..self.group.rank()).map(|j| self.column(j)).collect();
        Subgroup::generated_unchecked(&self.group, cols)
    }

    pub fn is_invertible(&self) -> bool {
        self.kernel().order() == 1
    }

    /// Whether `self` kills every element of `s`.
    pub fn kills(&self, s: &Subgroup) -> bool {
        s.basis().iter().all(|b| self.apply_unchecked(b).is_zero())
    }
}

/// A subgroup, stored as the lattice `span(generators) + D ⊆ Z^k` in Hermite form.
#[derive(Clone, Debug)]
pub struct Subgroup {
    group: FinAbGroup,
    generators: Vec<ModuleElement>,
    lattice: ModLattice,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.lattice == other.lattice
    }
}
impl Eq for Subgroup {}

impl Subgroup {
    pub fn generated(group: &FinAbGroup, gens: &[ModuleElement]) -> Result<Subgroup> {
        if gens.iter().any(|g| &g.group != group) {
            return Err(Error::ParentMismatch);
        }
        Ok(Self::generated_unchecked(group, gens.to_vec()))
    }

    pub(crate) fn generated_unchecked(group: &FinAbGroup, gens: Vec<ModuleElement>) -> Subgroup {
        let mut rows: Vec<IVec> = gens.iter().map(|g| g.as_ivec()).collect();
        rows.extend(group.relation_rows());
        let lattice = ModLattice::new(group.rank(), group.exponent() as i128, &rows);
        Subgroup { group: group.clone(), generators: gens, lattice }
    }

    fn from_lattice(group: &FinAbGroup, lattice: ModLattice) -> Subgroup {
        let mut s = Subgroup { group: group.clone(), generators: Vec::new(), lattice };
        s.generators = s.basis();
        s
    }

    pub fn whole(group: &FinAbGroup) -> Subgroup {
        Self::generated_unchecked(group, group.basis())
    }

    pub fn zero(group: &FinAbGroup) -> Subgroup {
        Self::generated_unchecked(group, Vec::new())
    }

    /// `{x : f(x) = 0 for every f in maps}`.
    pub fn common_kernel(group: &FinAbGroup, maps: &[Endomorphism]) -> Subgroup {
        let cons: Vec<Congruence> = maps.iter().flat_map(|f| f.kernel_congruences()).collect();
        let lattice = ModLattice::full(group.rank(), group.exponent() as i128).restrict(cons.iter());
        Self::from_lattice(group, lattice)
    }

    pub fn parent(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn generators(&self) -> &[ModuleElement] {
        &self.generators
    }

    /// Canonical echelon basis: nonzero Hermite rows reduced into the group.
    pub fn basis(&self) -> Vec<ModuleElement> {
        self.lattice
            .rows()
            .iter()
            .map(|r| self.group.element_unchecked(r.iter().copied()))
            .filter(|e| !e.is_zero())
            .collect()
    }

    pub fn order(&self) -> u64 {
        let idx = self.lattice.index().expect("subgroup index fits");
        (self.group.order() as u128 / idx) as u64
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        self.lattice
            .relative_invariants(&self.group.relation_lattice())
            .into_iter()
            .map(|d| d as u64)
            .collect()
    }

    /// Abstract isomorphism type as a [`FinAbGroup`].
    pub fn as_group(&self) -> FinAbGroup {
        FinAbGroup { factors: Arc::from(self.invariant_factors()) }
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors().last().copied().unwrap_or(1)
    }

    pub fn contains(&self, x: &ModuleElement) -> bool {
        x.group == self.group && self.lattice.contains(&x.as_ivec())
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.group == other.group && self.lattice.is_sublattice_of(&other.lattice)
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Self::from_lattice(&self.group, self.lattice.intersect(&other.lattice))
    }

    pub fn sum(&self, other: &Subgroup) -> Subgroup {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Self::generated_unchecked(&self.group, gens)
    }

    /// Exhaustive element list (intended for small groups).
    pub fn elements(&self) -> Vec<ModuleElement> {
        self.group.elements().filter(|x| self.lattice.contains(&x.as_ivec())).collect()
    }

    /// Coset representative of `x` modulo this subgroup.
    pub fn reduce(&self, x: &ModuleElement) -> ModuleElement {
        let (r, _) = self.lattice.reduce(&x.as_ivec());
        self.group.element_unchecked(r)
    }

    /// Invariant factors of `self / inner`; `inner` must be contained in `self`.
    pub fn relative_invariants(&self, inner: &Subgroup) -> Result<Vec<u64>> {
        if self.group != inner.group {
            return Err(Error::ParentMismatch);
        }
        if !inner.is_subgroup_of(self) {
            return Err(Error::InvalidArgument("inner subgroup is not contained in the outer one".into()));
        }
        Ok(self.lattice.relative_invariants(&inner.lattice).into_iter().map(|d| d as u64).collect())
    }
}

/// `M / S` with its projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    source: FinAbGroup,
    target: FinAbGroup,
    smith: Vec<i128>,
    v: Vec<IVec>,
}

impl Quotient {
    pub fn new(s: &Subgroup) -> Quotient {
        let k = s.group.rank();
        let snf = smith_with_transform(s.lattice.rows(), k);
        let factors: Vec<u64> = snf.diagonal.iter().filter(|&&d| d != 1).map(|&d| d as u64).collect();
        Quotient {
            source: s.group.clone(),
            target: FinAbGroup { factors: Arc::from(factors) },
            smith: snf.diagonal,
            v: snf.v,
        }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn project(&self, x: &ModuleElement) -> Result<ModuleElement> {
        if x.group != self.source {
            return Err(Error::ParentMismatch);
        }
        let k = self.source.rank();
        let coords = (0..k)
            .filter(|&j| self.smith[j] != 1)
            .map(|j| (0..k).map(|i| x.coords[i] as i128 * self.v[i][j]).sum::<i128>());
        Ok(self.target.element_unchecked(coords))
    }
}

pub fn quotient(s: &Subgroup) -> Quotient {
    Quotient::new(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[i64]) -> FinAbGroup {
        FinAbGroup::new(f).unwrap()
    }

    /// Isomorphism-type oracle: counts of elements of each order.
    fn order_profile(m: &FinAbGroup) -> Vec<(u64, usize)> {
        let mut map = std::collections::BTreeMap::new();
        for x in m.elements() {
            *map.entry(x.order()).or_insert(0) += 1;
        }
        map.into_iter().collect()
    }

    #[test]
    fn make_group_examples() {
        assert_eq!(g(&[4, 3]).invariant_factors(), &[12]);
        assert_eq!(g(&[2, 4]).invariant_factors(), &[2, 4]);
        let m = g(&[6, 4]);
        assert_eq!(m.invariant_factors(), &[2, 12]);
        assert_eq!(m.order(), 24);
        // Exhaustive isomorphism check against the direct product Z/6 x Z/4.
        let mut direct = std::collections::BTreeMap::new();
        for a in 0..6u64 {
            for b in 0..4u64 {
                let o = crate::arith::lcm_u64(6 / gcd_u64(a, 6), 4 / gcd_u64(b, 4));
                *direct.entry(o).or_insert(0usize) += 1;
            }
        }
        assert_eq!(order_profile(&m), direct.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn make_group_errors_and_trivial() {
        assert_eq!(FinAbGroup::new(&[1, 3]), Err(Error::InvalidFactor(1)));
        assert_eq!(FinAbGroup::new(&[0]), Err(Error::InvalidFactor(0)));
        let t = g(&[]);
        assert!(t.is_trivial());
        assert_eq!((t.order(), t.exponent()), (1, 1));
        assert!(matches!(FinAbGroup::with_cap(&[1000, 1001], 1000), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn normalization_is_idempotent() {
        for f in [vec![6i64, 4], vec![2, 3, 5], vec![9, 6, 4], vec![8]] {
            let m = g(&f);
            let again: Vec<i64> = m.invariant_factors().iter().map(|&d| d as i64).collect();
            assert_eq!(g(&again), m);
        }
    }

    #[test]
    fn arithmetic_examples() {
        let m = g(&[4, 4]);
        let a = m.element(&[2, 1]).unwrap();
        let b = m.element(&[3, 3]).unwrap();
        assert_eq!(a.add(&b).unwrap().coords(), &[1, 0]);
        assert!(a.scale(0).is_zero());
        let other = g(&[4]);
        assert_eq!(a.add(&other.zero()), Err(Error::ParentMismatch));

        let m5 = g(&[5, 5]);
        let rot = Endomorphism::new(&m5, vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let v = m5.element(&[2, 1]).unwrap();
        assert_eq!(rot.apply(&v).unwrap().coords(), &[1, 3]);
    }

    #[test]
    fn well_definedness() {
        let m = g(&[2, 4]);
        // e_1 (order 4) -> 1*e_0 is fine; e_0 (order 2) -> 1*e_1 is not.
        assert!(Endomorphism::new(&m, vec![vec![1, 1], vec![0, 1]]).is_ok());
        assert_eq!(
            Endomorphism::new(&m, vec![vec![1, 0], vec![1, 1]]),
            Err(Error::NotWellDefined { row: 1, col: 0 })
        );
        assert!(Endomorphism::new(&m, vec![vec![1, 0], vec![2, 1]]).is_ok());
    }

    #[test]
    fn primary_decomposition_examples() {
        let z12 = g(&[12]);
        let (m3, m_non3) = z12.primary_decompose(3).unwrap();
        assert_eq!(m3.invariant_factors(), vec![3]);
        assert!(m3.contains(&z12.element(&[4]).unwrap()));
        assert_eq!(m_non3.invariant_factors(), vec![4]);
        assert!(m_non3.contains(&z12.element(&[3]).unwrap()));

        let m = g(&[5, 5]);
        let (a, b) = m.primary_decompose(5).unwrap();
        assert_eq!((a.order(), b.order()), (25, 1));

        let m = g(&[2, 12]);
        let (a, b) = m.primary_decompose(2).unwrap();
        assert_eq!(a.invariant_factors(), vec![2, 4]);
        assert_eq!(b.invariant_factors(), vec![3]);
        // exhaustive: M_2 is exactly the elements of 2-power order
        for x in m.elements() {
            assert_eq!(a.contains(&x), crate::arith::is_p_power(x.order(), 2));
            assert_eq!(b.contains(&x), x.order() % 2 == 1);
        }
        assert_eq!(m.primary_decompose(4).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn subgroup_and_quotient_examples() {
        let z12 = g(&[12]);
        let s = Subgroup::generated(&z12, &[z12.element(&[4]).unwrap()]).unwrap();
        assert_eq!(s.order(), 3);
        let q = quotient(&s);
        assert_eq!(q.group().invariant_factors(), &[4]);
        assert!(q.project(&z12.element(&[4]).unwrap()).unwrap().is_zero());
        assert!(!q.project(&z12.element(&[3]).unwrap()).unwrap().is_zero());

        let m = g(&[5, 5]);
        let s = Subgroup::generated(&m, &m.basis()).unwrap();
        assert_eq!(s, Subgroup::whole(&m));
        assert!(quotient(&s).group().is_trivial());
    }

    #[test]
    fn subgroup_canonical_form_matches_span() {
        let m = g(&[2, 4, 12]);
        let gens = vec![m.element(&[1, 2, 3]).unwrap(), m.element(&[0, 1, 6]).unwrap()];
        let s = Subgroup::generated(&m, &gens).unwrap();
        // exhaustive span by closure under addition
        let mut span = std::collections::HashSet::new();
        span.insert(m.zero());
        let mut stack = vec![m.zero()];
        while let Some(x) = stack.pop() {
            for g in &gens {
                let y = x.add(g).unwrap();
                if span.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        assert_eq!(span.len() as u64, s.order());
        for x in m.elements() {
            assert_eq!(span.contains(&x), s.contains(&x));
        }
        let from_basis = Subgroup::generated(&m, &s.basis()).unwrap();
        assert_eq!(from_basis, s);
        let prod: u64 = s.invariant_factors().iter().product();
        assert_eq!(prod, s.order());
    }

    #[test]
    fn intersection_is_exact() {
        let m = g(&[6, 12]);
        let a = Subgroup::generated(&m, &[m.element(&[2, 3]).unwrap()]).unwrap();
        let b = Subgroup::generated(&m, &[m.element(&[0, 2]).unwrap(), m.element(&[3, 0]).unwrap()]).unwrap();
        let c = a.intersect(&b);
        for x in m.elements() {
            assert_eq!(c.contains(&x), a.contains(&x) && b.contains(&x));
        }
    }

    #[test]
    fn presentation_transport() {
        let (m, pres) = FinAbGroup::from_diagonal(&[5, 3]).unwrap();
        assert_eq!(m.invariant_factors(), &[15]);
        // multiplication by 2 on Z/5, identity on Z/3
        let f = pres.transport(&[vec![2, 0], vec![0, 1]]).unwrap();
        for a in 0..5i64 {
            for b in 0..3i64 {
                let x = pres.to_chain(&[a, b]).unwrap();
                let y = pres.to_chain(&[2 * a, b]).unwrap();
                assert_eq!(f.apply(&x).unwrap(), y);
                assert_eq!(pres.from_chain(&x), vec![a as u64, b as u64]);
            }
        }
    }

    #[test]
    fn kernel_and_fixed() {
        let m = g(&[5, 5]);
        let rot = Endomorphism::new(&m, vec![vec![0, 1], vec![-1, 0]]).unwrap();
        assert!(rot.is_invertible());
        let fixed = Subgroup::common_kernel(&m, &[rot.add_scalar(-1)]);
        assert_eq!(fixed.order(), 1);
        let proj = Endomorphism::new(&m, vec![vec![1, 0], vec![0, 0]]).unwrap();
        assert_eq!(proj.kernel().order(), 5);
        assert!(!proj.is_invertible());
    }
}
