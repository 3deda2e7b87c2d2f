//! Small finite-group toolkit over element indices.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::{Error, Rational, Result};

/// A finite group with elements labelled `0..order()`.
pub trait FiniteGroup: Sync {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
    fn generators(&self) -> Vec<usize>;

    fn pow(&self, a: usize, k: u64) -> usize {
        let mut result = self.identity();
        let mut base = a;
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    fn element_order(&self, a: usize) -> u64 {
        let id = self.identity();
        let mut x = a;
        let mut k = 1;
        while x != id {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassData {
    pub class_of: Vec<u32>,
    pub reps: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl ClassData {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn class(&self, a: usize) -> usize {
        self.class_of[a] as usize
    }

    pub fn members(&self, c: usize) -> Vec<usize> {
        self.class_of.iter().enumerate().filter(|(_, &k)| k as usize == c).map(|(i, _)| i).collect()
    }
}

/// Conjugacy classes as orbits under conjugation by the generators.
pub fn conjugacy_classes<G: FiniteGroup + ?Sized>(g: &G) -> ClassData {
    let n = g.order();
    let gens = g.generators();
    let ginv: Vec<usize> = gens.iter().map(|&x| g.inv(x)).collect();
    let mut class_of = vec![u32::MAX; n];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    let mut order: Vec<usize> = (0..n).collect();
    let id = g.identity();
    order.swap(0, id);
    for start in order {
        if class_of[start] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(start);
        class_of[start] = c;
        let mut size = 1;
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            for (s, si) in gens.iter().zip(&ginv) {
                let y = g.mul(g.mul(*s, x), *si);
                if class_of[y] == u32::MAX {
                    class_of[y] = c;
                    size += 1;
                    queue.push_back(y);
                }
            }
        }
        sizes.push(size);
    }
    ClassData { class_of, reps, sizes }
}

pub fn exponent<G: FiniteGroup + ?Sized>(g: &G, classes: &ClassData) -> u64 {
    classes.reps.iter().fold(1u64, |acc, &r| acc.lcm(&g.element_order(r)))
}

/// Sorted subgroup generated by `gens`.
pub fn subgroup_closure<G: FiniteGroup + ?Sized>(g: &G, gens: &[usize]) -> Vec<usize> {
    let mut seen = BTreeSet::new();
    let id = g.identity();
    seen.insert(id);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

pub fn is_subgroup<G: FiniteGroup + ?Sized>(g: &G, set: &[usize]) -> bool {
    let members: BTreeSet<usize> = set.iter().copied().collect();
    members.contains(&g.identity())
        && set.iter().all(|&a| members.contains(&g.inv(a)) && set.iter().all(|&b| members.contains(&g.mul(a, b))))
}

/// `|[a] ∩ B|` for every class.
pub fn intersection_counts(classes: &ClassData, subset: &[usize]) -> Vec<usize> {
    let mut out = vec![0; classes.len()];
    for &b in subset {
        out[classes.class(b)] += 1;
    }
    out
}

/// Permutation character of `A` on `A/B`, one value per class.
pub fn perm_character(order: usize, classes: &ClassData, subgroup: &[usize]) -> Result<Vec<u64>> {
    let counts = intersection_counts(classes, subgroup);
    classes
        .sizes
        .iter()
        .zip(&counts)
        .map(|(&size, &hit)| {
            let num = (order / size) as u128 * hit as u128;
            let den = subgroup.len() as u128;
            if num % den != 0 {
                return Err(Error::Logic(format!("permutation character {}/{} is not integral", num, den)));
            }
            Ok((num / den) as u64)
        })
        .collect()
}

/// `class_of(a^k)` for every class representative.
pub fn power_map<G: FiniteGroup + ?Sized>(g: &G, classes: &ClassData, k: u64) -> Vec<usize> {
    classes.reps.iter().map(|&r| classes.class(g.pow(r, k))).collect()
}

pub fn mobius(n: u64) -> i64 {
    if n == 0 {
        return 0;
    }
    let mut m = n;
    let mut sign = 1;
    let mut f = 2;
    while f * f <= m {
        if m % f == 0 {
            m /= f;
            if m % f == 0 {
                return 0;
            }
            sign = -sign;
        }
        f += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `A(m) = (1/m) sum_{d | m} mu(m/d) chi(d)` for `m = 1..=m_max`.
pub fn mobius_inversion(chi: impl Fn(u64) -> Rational, m_max: u64) -> Vec<(u64, Rational)> {
    (1..=m_max)
        .map(|m| {
            let s = divisors(m)
                .into_iter()
                .fold(Rational::from_integer(0), |acc, d| acc + chi(d) * Rational::from_integer(mobius(m / d) as i128));
            (m, s / Rational::from_integer(m as i128))
        })
        .collect()
}

/// Permutation group on `0..degree`, fully enumerated.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    elements: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    gens: Vec<usize>,
    inv_table: Vec<u32>,
}

impl PermGroup {
    pub fn from_generators(degree: usize, gens: &[Vec<u32>], cap: usize) -> Result<Self> {
        for g in gens {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| (x as usize) >= degree || std::mem::replace(&mut seen[x as usize], true)) {
                return Err(Error::Parse(format!("{:?} is not a permutation of 0..{}", g, degree)));
            }
        }
        let id: Vec<u32> = (0..degree as u32).collect();
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut i = 0;
        while i < elements.len() {
            for g in gens {
                let y = compose(&elements[i], g);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(Error::Resource(format!("group order exceeds cap {}", cap)));
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
            i += 1;
        }
        let n = elements.len();
        let mut inv_table = vec![0u32; n];
        for a in 0..n {
            let mut inv = vec![0u32; degree];
            for (i, &x) in elements[a].iter().enumerate() {
                inv[x as usize] = i as u32;
            }
            inv_table[a] = index[&inv] as u32;
        }
        let gens = gens.iter().map(|g| index[g]).collect();
        Ok(PermGroup { degree, elements, index, gens, inv_table })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn element(&self, a: usize) -> &[u32] {
        &self.elements[a]
    }

    pub fn index_of(&self, perm: &[u32]) -> Option<usize> {
        self.index.get(perm).copied()
    }

    /// Stabilizer of a point.
    pub fn stabilizer(&self, point: u32) -> Vec<usize> {
        (0..self.elements.len()).filter(|&a| self.elements[a][point as usize] == point).collect()
    }

    /// Setwise stabilizer of a set of points.
    pub fn set_stabilizer(&self, points: &[u32]) -> Vec<usize> {
        let set: BTreeSet<u32> = points.iter().copied().collect();
        (0..self.elements.len())
            .filter(|&a| points.iter().all(|&p| set.contains(&self.elements[a][p as usize])))
            .collect()
    }
}

/// `(a * b)(x) = b(a(x))`: apply `a` first.
fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().map(|&x| b[x as usize]).collect()
}

impl FiniteGroup for PermGroup {
    fn order(&self) -> usize {
        self.elements.len()
    }
    fn identity(&self) -> usize {
        0
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&compose(&self.elements[a], &self.elements[b])]
    }
    fn inv(&self, a: usize) -> usize {
        self.inv_table[a] as usize
    }
    fn generators(&self) -> Vec<usize> {
        self.gens.clone()
    }
}

/// Group given by an explicit multiplication table.
#[derive(Clone, Debug)]
pub struct CayleyTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    gens: Vec<usize>,
}

impl CayleyTable {
    pub fn new(table: Vec<Vec<usize>>, cap: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Parse("empty multiplication table".into()));
        }
        if n > cap {
            return Err(Error::Resource(format!("table of order {} exceeds cap {}", n, cap)));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::Parse("multiplication table is not square or has entries out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::Parse("table has no identity".into()))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| table[a][b] == identity)
                .ok_or_else(|| Error::Parse(format!("element {} has no inverse", a)))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::Parse(format!("table is not associative at ({}, {}, {})", a, b, c)));
                    }
                }
            }
        }
        let mut t = CayleyTable { table, identity, inverse, gens: Vec::new() };
        t.gens = greedy_generators(&t);
        Ok(t)
    }
}

fn greedy_generators<G: FiniteGroup>(g: &G) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = vec![g.identity()];
    for a in 0..g.order() {
        if span.binary_search(&a).is_err() {
            gens.push(a);
            span = subgroup_closure(g, &gens);
        }
    }
    gens
}

impl FiniteGroup for CayleyTable {
    fn order(&self) -> usize {
        self.table.len()
    }
    fn identity(&self) -> usize {
        self.identity
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
    fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
    fn generators(&self) -> Vec<usize> {
        self.gens.clone()
    }
}

/// All subgroups, found by joining cyclic subgroups until no new ones appear.
pub fn all_subgroups<G: FiniteGroup + ?Sized>(g: &G) -> Vec<Vec<usize>> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut cyclic: std::collections::BTreeMap<Vec<usize>, usize> = std::collections::BTreeMap::new();
    for a in 0..g.order() {
        cyclic.entry(subgroup_closure(g, &[a])).or_insert(a);
    }
    let cyclic_gens: Vec<usize> = cyclic.values().copied().collect();
    let mut frontier: Vec<Vec<usize>> = cyclic.into_keys().collect();
    found.extend(frontier.iter().cloned());
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for h in &frontier {
            for &c in &cyclic_gens {
                if h.binary_search(&c).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(c);
                let k = subgroup_closure(g, &gens);
                if found.insert(k.clone()) {
                    next.push(k);
                }
            }
        }
        frontier = next;
    }
    found.into_iter().collect()
}

/// Symmetric group on `k` points.
pub fn symmetric_group(k: usize) -> Result<PermGroup> {
    let mut cycle: Vec<u32> = (1..k as u32).collect();
    cycle.push(0);
    let mut swap: Vec<u32> = (0..k as u32).collect();
    if k > 1 {
        swap.swap(0, 1);
    }
    PermGroup::from_generators(k, &[cycle, swap], 100_000)
}

/// `GL(3, 2)` acting on the seven nonzero vectors of `F_2^3`.
pub fn gl32() -> Result<PermGroup> {
    // point v in 1..=7 is stored as v - 1
    let act = |m: [[u8; 3]; 3]| -> Vec<u32> {
        (1u8..=7)
            .map(|v| {
                let bits = [v & 1, (v >> 1) & 1, (v >> 2) & 1];
                let mut w = 0u8;
                for (r, row) in m.iter().enumerate() {
                    let s = row.iter().zip(&bits).map(|(a, b)| a * b).sum::<u8>() % 2;
                    w |= s << r;
                }
                (w - 1) as u32
            })
            .collect()
    };
    let a = act([[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
    let b = act([[0, 0, 1], [1, 0, 0], [0, 1, 0]]);
    let c = act([[1, 0, 0], [0, 1, 1], [0, 0, 1]]);
    PermGroup::from_generators(7, &[a, b, c], 100_000)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_values() {
        let expect = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(mobius(i as u64 + 1), e);
        }
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        for n in 1..60u64 {
            let s: i64 = divisors(n).into_iter().map(mobius).sum();
            assert_eq!(s, i64::from(n == 1));
        }
    }

    #[test]
    fn s4_classes() {
        let g = symmetric_group(4).unwrap();
        assert_eq!(g.order(), 24);
        let c = conjugacy_classes(&g);
        let mut sizes = c.sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3, 6, 6, 8]);
        assert_eq!(exponent(&g, &c), 12);
        assert_eq!(all_subgroups(&g).len(), 30);
    }

    #[test]
    fn gl32_structure() {
        let g = gl32().unwrap();
        assert_eq!(g.order(), 168);
        let c = conjugacy_classes(&g);
        let mut sizes = c.sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![1, 21, 24, 24, 42, 56]);
        assert_eq!(all_subgroups(&g).len(), 179);
    }

    #[test]
    fn cayley_from_perm_group() {
        let g = symmetric_group(3).unwrap();
        let table: Vec<Vec<usize>> = (0..6).map(|a| (0..6).map(|b| g.mul(a, b)).collect()).collect();
        let t = CayleyTable::new(table, 100).unwrap();
        assert_eq!(conjugacy_classes(&t).len(), 3);
        let mut bad = (0..3).map(|a| (0..3).map(|b| (a + b) % 3).collect::<Vec<_>>()).collect::<Vec<_>>();
        bad[1][1] = 1;
        assert!(CayleyTable::new(bad, 100).is_err());
    }

    #[test]
    fn perm_character_is_fixed_point_count() {
        let g = symmetric_group(4).unwrap();
        let c = conjugacy_classes(&g);
        let h = g.stabilizer(0);
        let chi = perm_character(g.order(), &c, &h).unwrap();
        for a in 0..g.order() {
            let fixed = g.element(a).iter().enumerate().filter(|(i, &x)| *i as u32 == x).count() as u64;
            assert_eq!(chi[c.class(a)], fixed);
        }
    }

    #[test]
    fn inversion_of_constant() {
        let a = mobius_inversion(|_| Rational::from_integer(5), 6);
        assert_eq!(a[0].1, Rational::from_integer(5));
        assert!(a[1..].iter().all(|(_, v)| *v == Rational::from_integer(0)));
    }
}
