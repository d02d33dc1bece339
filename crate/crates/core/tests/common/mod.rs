#![allow(dead_code)]

use std::collections::HashSet;

use galmod::{ActionGroup, Endomorphism, FinAbGroup, ModuleElement, Subgroup};
use rand::Rng;

/// A diagonal factor list with product at most `max_order`.
pub fn random_factors(rng: &mut impl Rng, max_order: u64) -> Vec<i64> {
    loop {
        let k = rng.gen_range(1..=3);
        let f: Vec<i64> = (0..k).map(|_| rng.gen_range(2..=12)).collect();
        if f.iter().product::<i64>() as u64 <= max_order {
            return f;
        }
    }
}

pub fn random_element(rng: &mut impl Rng, m: &FinAbGroup) -> ModuleElement {
    let c: Vec<i64> = m.invariant_factors().iter().map(|&d| rng.gen_range(0..d) as i64).collect();
    m.element(&c).unwrap()
}

/// A uniformly random well-defined endomorphism in invariant-factor coordinates.
pub fn random_endomorphism(rng: &mut impl Rng, m: &FinAbGroup) -> Endomorphism {
    let d = m.invariant_factors();
    let k = d.len();
    let rows = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let step = d[i] / gcd(d[i], d[j]);
                    (rng.gen_range(0..d[i] / step) * step) as i64
                })
                .collect()
        })
        .collect();
    Endomorphism::new(m, rows).unwrap()
}

pub fn random_automorphism(rng: &mut impl Rng, m: &FinAbGroup) -> Endomorphism {
    for _ in 0..64 {
        let e = random_endomorphism(rng, m);
        if e.is_invertible() {
            return e;
        }
    }
    Endomorphism::scalar(m, -1)
}

/// A group generated by one or two random automorphisms, if the closure is small.
pub fn random_action(rng: &mut impl Rng, m: &FinAbGroup, cap: usize) -> Option<ActionGroup> {
    let n = rng.gen_range(1..=2);
    let gens: Vec<Endomorphism> = (0..n).map(|_| random_automorphism(rng, m)).collect();
    ActionGroup::close_generators(m, &gens, cap).ok()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn key(s: &Subgroup) -> Vec<Vec<u64>> {
    let mut v: Vec<Vec<u64>> = s.elements().iter().map(|x| x.coords().to_vec()).collect();
    v.sort();
    v
}

/// Every subgroup of `m`, as sums of cyclic subgroups.
pub fn all_subgroups(m: &FinAbGroup) -> Vec<Subgroup> {
    let mut cyclic: Vec<Subgroup> = Vec::new();
    let mut seen = HashSet::new();
    for x in m.elements() {
        let c = Subgroup::generated(m, &[x]).unwrap();
        if seen.insert(key(&c)) {
            cyclic.push(c);
        }
    }
    let mut all = vec![Subgroup::zero(m)];
    let mut seen: HashSet<Vec<Vec<u64>>> = all.iter().map(key).collect();
    let mut frontier = all.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for c in &cyclic {
                let t = s.sum(c);
                if seen.insert(key(&t)) {
                    next.push(t.clone());
                    all.push(t);
                }
            }
        }
        frontier = next;
    }
    all
}
