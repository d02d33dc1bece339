//! Integer lattices `L` with `e * Z^n ⊆ L ⊆ Z^n`.
//!
//! Every subgroup of a finite abelian group `Z^n / D` (with `D` diagonal) is
//! the image of such a lattice, and so is the kernel of every homomorphism out
//! of it. Keeping the lattice in row-style Hermite normal form modulo `e`
//! bounds all intermediate entries by `e` and gives a canonical basis.

use crate::arith::{ext_gcd, gcd};

pub type IVec = Vec<i128>;

/// A sparse congruence `sum(c_j * x_j) ≡ 0 (mod modulus)`.
#[derive(Clone, Debug)]
pub struct Congruence {
    pub terms: Vec<(usize, i128)>,
    pub modulus: i128,
}

#[derive(Clone, Debug)]
struct Row {
    v: IVec,
    tag: IVec,
}

fn reduce_row(row: &mut Row, from: usize, e: i128, tag_mod: i128) {
    for x in row.v[from..].iter_mut() {
        *x = x.rem_euclid(e);
    }
    if tag_mod > 0 {
        for x in row.tag.iter_mut() {
            *x = x.rem_euclid(tag_mod);
        }
    }
}

/// `(a, b) <- (s*a + t*b, -(y/g)*a + (x/g)*b)` where `x = a[col]`, `y = b[col]`.
fn combine(a: &mut Row, b: &mut Row, col: usize) {
    let (x, y) = (a.v[col], b.v[col]);
    let (g, s, t) = ext_gcd(x, y);
    let (xg, yg) = (x / g, y / g);
    for (p, q) in a.v.iter_mut().zip(b.v.iter_mut()) {
        let (u, w) = (*p, *q);
        *p = s * u + t * w;
        *q = -yg * u + xg * w;
    }
    for (p, q) in a.tag.iter_mut().zip(b.tag.iter_mut()) {
        let (u, w) = (*p, *q);
        *p = s * u + t * w;
        *q = -yg * u + xg * w;
    }
}

fn hermite_mod(gens: Vec<Row>, n: usize, e: i128, tag_width: usize, tag_mod: i128) -> Vec<Row> {
    let mut pool: Vec<Row> = gens
        .into_iter()
        .map(|mut r| {
            reduce_row(&mut r, 0, e, tag_mod);
            r
        })
        .filter(|r| r.v.iter().any(|&x| x != 0))
        .collect();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut pivot = Row { v: vec![0; n], tag: vec![0; tag_width] };
        pivot.v[j] = e;
        for row in pool.iter_mut() {
            if row.v[j] != 0 {
                combine(&mut pivot, row, j);
                reduce_row(&mut pivot, j + 1, e, tag_mod);
                reduce_row(row, j + 1, e, tag_mod);
            }
        }
        debug_assert!(pivot.v[j] > 0);
        pool.retain(|r| r.v.iter().any(|&x| x != 0));
        out.push(pivot);
    }
    for j in 0..n {
        let (head, tail) = out.split_at_mut(j);
        let pj = &tail[0];
        let d = pj.v[j];
        for row in head.iter_mut() {
            let q = row.v[j].div_euclid(d);
            if q != 0 {
                for (x, y) in row.v.iter_mut().zip(pj.v.iter()) {
                    *x -= q * y;
                }
                for (x, y) in row.tag.iter_mut().zip(pj.tag.iter()) {
                    *x -= q * y;
                }
                if tag_mod > 0 {
                    for x in row.tag.iter_mut() {
                        *x = x.rem_euclid(tag_mod);
                    }
                }
            }
        }
    }
    out
}

/// A full-rank lattice containing `modulus * Z^n`, in canonical Hermite form.
///
/// Rows may carry a *tag*: a vector recording which combination of the
/// original generators produced them (reduced mod `tag_modulus`). Tags of the
/// implicit `modulus * e_j` generators are zero.
#[derive(Clone, Debug)]
pub struct ModLattice {
    dim: usize,
    modulus: i128,
    rows: Vec<IVec>,
    tags: Vec<IVec>,
    tag_modulus: i128,
}

impl PartialEq for ModLattice {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.modulus == other.modulus && self.rows == other.rows
    }
}
impl Eq for ModLattice {}

impl ModLattice {
    pub fn new(dim: usize, modulus: i128, gens: &[IVec]) -> Self {
        let rows = gens.iter().map(|g| Row { v: g.clone(), tag: Vec::new() }).collect();
        Self::from_rows(dim, modulus, rows, 0, 0)
    }

    pub fn with_tags(dim: usize, modulus: i128, gens: &[(IVec, IVec)], tag_modulus: i128) -> Self {
        let width = gens.first().map_or(0, |g| g.1.len());
        let rows = gens.iter().map(|(v, t)| Row { v: v.clone(), tag: t.clone() }).collect();
        Self::from_rows(dim, modulus, rows, width, tag_modulus)
    }

    /// The whole of `Z^n`.
    pub fn full(dim: usize, modulus: i128) -> Self {
        let gens: Vec<IVec> = (0..dim)
            .map(|i| {
                let mut v = vec![0; dim];
                v[i] = 1;
                v
            })
            .collect();
        Self::new(dim, modulus, &gens)
    }

    fn from_rows(dim: usize, modulus: i128, rows: Vec<Row>, width: usize, tag_modulus: i128) -> Self {
        assert!(modulus >= 1, "lattice modulus must be positive");
        for r in &rows {
            assert_eq!(r.v.len(), dim, "generator length mismatch");
        }
        let h = hermite_mod(rows, dim, modulus, width, tag_modulus);
        let (rows, tags) = h.into_iter().map(|r| (r.v, r.tag)).unzip();
        ModLattice { dim, modulus, rows, tags, tag_modulus }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> i128 {
        self.modulus
    }

    pub fn rows(&self) -> &[IVec] {
        &self.rows
    }

    pub fn tags(&self) -> &[IVec] {
        &self.tags
    }

    pub fn diagonal(&self) -> Vec<i128> {
        (0..self.dim).map(|j| self.rows[j][j]).collect()
    }

    /// `[Z^n : L]`, or `None` on overflow.
    pub fn index(&self) -> Option<u128> {
        self.diagonal().iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
    }

    /// Canonical coset representative of `v` modulo `L`, and the tag of `v - rep`.
    pub fn reduce(&self, v: &[i128]) -> (IVec, IVec) {
        let mut r: IVec = v.to_vec();
        let width = self.tags.first().map_or(0, |t| t.len());
        let mut tag = vec![0i128; width];
        for j in 0..self.dim {
            let q = r[j].div_euclid(self.rows[j][j]);
            if q != 0 {
                for (x, y) in r.iter_mut().zip(self.rows[j].iter()) {
                    *x -= q * y;
                }
                for (x, y) in tag.iter_mut().zip(self.tags[j].iter()) {
                    *x += q * y;
                }
            }
        }
        if self.tag_modulus > 0 {
            for x in tag.iter_mut() {
                *x = x.rem_euclid(self.tag_modulus);
            }
        }
        (r, tag)
    }

    pub fn contains(&self, v: &[i128]) -> bool {
        self.reduce(v).0.iter().all(|&x| x == 0)
    }

    pub fn is_sublattice_of(&self, other: &ModLattice) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    /// Sublattice `{x in L : every congruence holds at x}`.
    ///
    /// Each congruence must vanish on `modulus * Z^n`.
    pub fn restrict<'a>(&self, constraints: impl IntoIterator<Item = &'a Congruence>) -> ModLattice {
        let width = self.tags.first().map_or(0, |t| t.len());
        let mut rows: Vec<Row> = self
            .rows
            .iter()
            .zip(self.tags.iter())
            .map(|(v, t)| Row { v: v.clone(), tag: t.clone() })
            .collect();
        for c in constraints {
            let b = c.modulus;
            if b == 1 {
                continue;
            }
            let mut vals: Vec<i128> = rows
                .iter()
                .map(|r| c.terms.iter().map(|&(j, a)| a * r.v[j]).sum::<i128>().rem_euclid(b))
                .collect();
            if vals.iter().all(|&x| x == 0) {
                continue;
            }
            loop {
                let (imin, vmin) = vals
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .min_by_key(|(_, &x)| x)
                    .map(|(i, &x)| (i, x))
                    .expect("some value is nonzero");
                let mut done = true;
                for s in 0..rows.len() {
                    if s == imin || vals[s] == 0 {
                        continue;
                    }
                    let q = vals[s] / vmin;
                    vals[s] -= q * vmin;
                    let (src_v, src_t) = (rows[imin].v.clone(), rows[imin].tag.clone());
                    for (x, y) in rows[s].v.iter_mut().zip(src_v.iter()) {
                        *x -= q * y;
                    }
                    for (x, y) in rows[s].tag.iter_mut().zip(src_t.iter()) {
                        *x -= q * y;
                    }
                    if vals[s] != 0 {
                        done = false;
                    }
                }
                if done {
                    let mult = b / gcd(vmin, b);
                    for x in rows[imin].v.iter_mut() {
                        *x *= mult;
                    }
                    for x in rows[imin].tag.iter_mut() {
                        *x *= mult;
                    }
                    break;
                }
            }
            rows = hermite_mod(rows, self.dim, self.modulus, width, self.tag_modulus);
        }
        let (rows, tags) = rows.into_iter().map(|r| (r.v, r.tag)).unzip();
        ModLattice { dim: self.dim, modulus: self.modulus, rows, tags, tag_modulus: self.tag_modulus }
    }

    /// Congruences cutting out this lattice: `x in L` iff `(x V)_i ≡ 0 mod s_i`.
    pub fn congruences(&self) -> Vec<Congruence> {
        let snf = smith_with_transform(&self.rows, self.dim);
        let mut out = Vec::new();
        for (i, &s) in snf.diagonal.iter().enumerate() {
            if s == 1 {
                continue;
            }
            let terms = (0..self.dim)
                .filter_map(|r| {
                    let a = snf.v[r][i].rem_euclid(s);
                    (a != 0).then_some((r, a))
                })
                .collect();
            out.push(Congruence { terms, modulus: s });
        }
        out
    }

    pub fn intersect(&self, other: &ModLattice) -> ModLattice {
        assert_eq!(self.dim, other.dim);
        self.restrict(other.congruences().iter())
    }

    pub fn sum(&self, other: &ModLattice) -> ModLattice {
        let gens: Vec<IVec> = self.rows.iter().chain(other.rows.iter()).cloned().collect();
        ModLattice::new(self.dim, self.modulus.max(other.modulus), &gens)
    }

    /// Coordinates of `v` (assumed in `L`) with respect to the Hermite basis, mod `modulus`.
    pub fn coordinates(&self, v: &[i128]) -> Option<IVec> {
        let mut r: IVec = v.to_vec();
        let mut coords = vec![0i128; self.dim];
        for j in 0..self.dim {
            let d = self.rows[j][j];
            if r[j].rem_euclid(d) != 0 {
                return None;
            }
            let q = (r[j] / d).rem_euclid(self.modulus);
            coords[j] = q;
            for (x, y) in r.iter_mut().zip(self.rows[j].iter()) {
                *x -= q * y;
            }
        }
        Some(coords)
    }

    /// Invariant factors of `Z^n / L`, excluding 1s, as a divisibility chain.
    pub fn quotient_invariants(&self) -> Vec<i128> {
        invariant_factors_mod(&self.rows, self.dim, self.modulus)
    }

    /// Invariant factors of `self / inner`.
    ///
    /// Requires `inner ⊆ self` and `e * self ⊆ inner` where `e = self.modulus`.
    pub fn relative_invariants(&self, inner: &ModLattice) -> Vec<i128> {
        let coords: Vec<IVec> = inner
            .rows
            .iter()
            .map(|r| self.coordinates(r).expect("inner lattice must lie in outer lattice"))
            .collect();
        invariant_factors_mod(&coords, self.dim, self.modulus)
    }
}

/// Invariant factors (excluding 1s) of `Z^n / (span(gens) + e Z^n)`.
pub fn invariant_factors_mod(gens: &[IVec], n: usize, e: i128) -> Vec<i128> {
    let mut pool: Vec<IVec> = gens
        .iter()
        .map(|g| g.iter().map(|x| x.rem_euclid(e)).collect::<IVec>())
        .filter(|g: &IVec| g.iter().any(|&x| x != 0))
        .collect();
    let mut out = Vec::with_capacity(n);
    for t in 0..n {
        let mut et = vec![0; n];
        et[t] = e;
        pool.push(et);
        let pivot = loop {
            // Column t: gather the gcd into a single pivot row.
            let mut prow: Option<usize> = None;
            for i in 0..pool.len() {
                if pool[i][t] == 0 {
                    continue;
                }
                match prow {
                    None => prow = Some(i),
                    Some(p) => {
                        let (x, y) = (pool[p][t], pool[i][t]);
                        let (g, s, u) = ext_gcd(x, y);
                        let (xg, yg) = (x / g, y / g);
                        for c in t..n {
                            let (a, b) = (pool[p][c], pool[i][c]);
                            pool[p][c] = (s * a + u * b).rem_euclid(e);
                            pool[i][c] = (-yg * a + xg * b).rem_euclid(e);
                        }
                        if pool[p][t] == 0 {
                            // gcd was e itself; keep the row carrying e
                            pool[p][t] = e;
                        }
                    }
                }
            }
            // column t vanishes mod e (column operations can zero it): the
            // factor in this direction is e itself
            let Some(p) = prow else { break e };
            let mut prow_vec = pool.swap_remove(p);
            let g = prow_vec[t];
            // Row t: clear by column operations; other rows are zero in column t.
            let mut extra = false;
            for c in (t + 1)..n {
                let y = prow_vec[c];
                if y == 0 {
                    continue;
                }
                if y % g == 0 {
                    prow_vec[c] = 0;
                    continue;
                }
                let (g2, s, u) = ext_gcd(prow_vec[t], y);
                let (xg, yg) = (prow_vec[t] / g2, y / g2);
                for row in pool.iter_mut().chain(std::iter::once(&mut prow_vec)) {
                    let (a, b) = (row[t], row[c]);
                    row[t] = (s * a + u * b).rem_euclid(e);
                    row[c] = (-yg * a + xg * b).rem_euclid(e);
                }
                extra = true;
            }
            if extra {
                pool.push(prow_vec);
                continue;
            }
            let gg = prow_vec[t];
            let bad = pool.iter().position(|r| r[(t + 1)..].iter().any(|&x| x % gg != 0));
            if let Some(i) = bad {
                let add = pool[i].clone();
                for (x, y) in prow_vec.iter_mut().zip(add.iter()) {
                    *x = (*x + y).rem_euclid(e);
                }
                pool.push(prow_vec);
                continue;
            }
            break gg;
        };
        pool.retain(|r| r.iter().any(|&x| x != 0));
        out.push(gcd(pivot, e));
    }
    out.into_iter().filter(|&d| d != 1).collect()
}

/// Smith form `A V = U^{-1} S` with column transform `v` and its inverse.
#[derive(Clone, Debug)]
pub struct SmithTransform {
    /// Diagonal entries (length `n`), a divisibility chain, zeros last.
    pub diagonal: Vec<i128>,
    pub v: Vec<IVec>,
    pub v_inv: Vec<IVec>,
}

/// Smith normal form of the lattice spanned by `rows` (any number of rows, `n` columns),
/// tracking the unimodular column transform. Intended for small `n`.
pub fn smith_with_transform(rows: &[IVec], n: usize) -> SmithTransform {
    let mut a: Vec<IVec> = rows.to_vec();
    let ident = |n: usize| -> Vec<IVec> {
        (0..n)
            .map(|i| {
                let mut r = vec![0; n];
                r[i] = 1;
                r
            })
            .collect()
    };
    let mut v = ident(n);
    let mut v_inv = ident(n);
    // new col_t = c[0][0] col_t + c[1][0] col_j ; new col_j = c[0][1] col_t + c[1][1] col_j
    let col_op = |a: &mut Vec<IVec>, v: &mut Vec<IVec>, v_inv: &mut Vec<IVec>, t: usize, j: usize, c: [[i128; 2]; 2]| {
        for row in a.iter_mut().chain(v.iter_mut()) {
            let (x, y) = (row[t], row[j]);
            row[t] = c[0][0] * x + c[1][0] * y;
            row[j] = c[0][1] * x + c[1][1] * y;
        }
        let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
        debug_assert!(det == 1 || det == -1);
        let inv = [[c[1][1] * det, -c[0][1] * det], [-c[1][0] * det, c[0][0] * det]];
        let (rt, rj) = (v_inv[t].clone(), v_inv[j].clone());
        for k in 0..n {
            v_inv[t][k] = inv[0][0] * rt[k] + inv[0][1] * rj[k];
            v_inv[j][k] = inv[1][0] * rt[k] + inv[1][1] * rj[k];
        }
    };
    let mut diagonal = vec![0i128; n];
    let m = a.len();
    for t in 0..n.min(m) {
        loop {
            let mut best: Option<(usize, usize, i128)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.map_or(true, |b| x.abs() < b.2) {
                        best = Some((i, j, x.abs()));
                    }
                }
            }
            let Some((bi, bj, _)) = best else {
                return SmithTransform { diagonal, v, v_inv };
            };
            a.swap(t, bi);
            if bj != t {
                col_op(&mut a, &mut v, &mut v_inv, t, bj, [[0, 1], [1, 0]]);
            }
            if a[t][t] < 0 {
                for x in a[t].iter_mut() {
                    *x = -*x;
                }
            }
            let p = a[t][t];
            for i in (t + 1)..m {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    let rt = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(rt.iter()) {
                        *x -= q * y;
                    }
                }
            }
            for j in (t + 1)..n {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    col_op(&mut a, &mut v, &mut v_inv, t, j, [[1, -q], [0, 1]]);
                }
            }
            let dirty = (t + 1..m).any(|i| a[i][t] != 0) || (t + 1..n).any(|j| a[t][j] != 0);
            if dirty {
                continue;
            }
            let bad = (t + 1..m).find(|&i| a[i][(t + 1)..].iter().any(|&x| x % p != 0));
            if let Some(i) = bad {
                let ri = a[i].clone();
                for (x, y) in a[t].iter_mut().zip(ri.iter()) {
                    *x += y;
                }
                continue;
            }
            diagonal[t] = p;
            break;
        }
    }
    SmithTransform { diagonal, v, v_inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det_index_brute(gens: &[IVec], n: usize, e: i128) -> usize {
        // Size of Z^n / (span + e Z^n) by exhaustive span in (Z/e)^n.
        let mut seen = std::collections::HashSet::new();
        let zero: IVec = vec![0; n];
        seen.insert(zero.clone());
        let mut frontier = vec![zero];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y: IVec = x.iter().zip(g).map(|(a, b)| (a + b).rem_euclid(e)).collect();
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        (e as usize).pow(n as u32) / seen.len()
    }

    #[test]
    fn hermite_is_canonical() {
        let a = ModLattice::new(2, 12, &[vec![4, 6], vec![2, 3]]);
        let b = ModLattice::new(2, 12, &[vec![2, 3]]);
        assert_eq!(a, b);
        assert_eq!(a.rows(), &[vec![2, 3], vec![0, 6]]);
        assert_eq!(a.index(), Some(12));
    }

    #[test]
    fn quotient_invariants_match_brute_force() {
        let cases: Vec<(Vec<IVec>, usize, i128)> = vec![
            (vec![vec![6, 0], vec![0, 4]], 2, 12),
            (vec![vec![2, 4, 0], vec![0, 3, 3]], 3, 6),
            (vec![vec![3, 1]], 2, 9),
            (vec![], 2, 5),
        ];
        for (g, n, e) in cases {
            let l = ModLattice::new(n, e, &g);
            let inv = l.quotient_invariants();
            let prod: i128 = inv.iter().product();
            assert_eq!(prod as usize, det_index_brute(&g, n, e));
            assert!(inv.windows(2).all(|w| w[1] % w[0] == 0));
        }
        assert_eq!(ModLattice::new(2, 12, &[vec![6, 0], vec![0, 4]]).quotient_invariants(), vec![2, 12]);
    }

    #[test]
    fn restrict_gives_kernel() {
        // x ≡ 0 mod 3 and x + y ≡ 0 mod 2 inside Z^2, with 6 Z^2 present.
        let full = ModLattice::full(2, 6);
        let k = full.restrict(
            [
                Congruence { terms: vec![(0, 1)], modulus: 3 },
                Congruence { terms: vec![(0, 1), (1, 1)], modulus: 2 },
            ]
            .iter(),
        );
        for x in 0..6i128 {
            for y in 0..6i128 {
                let expected = x % 3 == 0 && (x + y) % 2 == 0;
                assert_eq!(k.contains(&[x, y]), expected, "({x},{y})");
            }
        }
    }

    #[test]
    fn congruences_round_trip() {
        let l = ModLattice::new(2, 12, &[vec![2, 3], vec![4, 0]]);
        let back = ModLattice::full(2, 12).restrict(l.congruences().iter());
        assert_eq!(l, back);
    }

    #[test]
    fn smith_transform_diagonalizes() {
        let rows = vec![vec![6, 0], vec![0, 4]];
        let s = smith_with_transform(&rows, 2);
        assert_eq!(s.diagonal, vec![2, 12]);
        // v * v_inv = I
        for i in 0..2 {
            for j in 0..2 {
                let x: i128 = (0..2).map(|k| s.v[i][k] * s.v_inv[k][j]).sum();
                assert_eq!(x, (i == j) as i128);
            }
        }
    }

    #[test]
    fn tags_track_combinations() {
        let l = ModLattice::with_tags(2, 10, &[(vec![2, 0], vec![1, 0]), (vec![0, 5], vec![0, 1])], 10);
        let (rem, tag) = l.reduce(&[4, 5]);
        assert_eq!(rem, vec![0, 0]);
        let recon: IVec = (0..2).map(|c| 2 * tag[0] * (c == 0) as i128 + 5 * tag[1] * (c == 1) as i128).collect();
        assert_eq!(recon[0].rem_euclid(10), 4);
        assert_eq!(recon[1].rem_euclid(10), 5);
    }
}
