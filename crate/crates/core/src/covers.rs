//! `PSL_2` over `Z/p^2` and `Z[i]/p^2`, the congruence kernel `V_q`, the subgroups
//! `B_1`, `B_2`, permutation characters and splitting types.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::groups::{conjugacy_classes, divisors, mobius, ClassData, FiniteGroup};
use crate::{Error, Rational, Result};

/// Default cap on the enumerated group order.
pub const DEFAULT_GROUP_CAP: u64 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingKind {
    Rational,
    Gaussian,
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RingKind::Rational => "rational",
            RingKind::Gaussian => "gaussian",
        })
    }
}

impl std::str::FromStr for RingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rational" | "z" => Ok(RingKind::Rational),
            "gaussian" | "zi" => Ok(RingKind::Gaussian),
            _ => Err(Error::Parse(format!("unknown ring {}", s))),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `a + b i` with residues modulo `p^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingElem {
    pub a: u64,
    pub b: u64,
}

/// Element of the residue field `F_q`, stored as `a + b i` modulo `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fq {
    pub a: u64,
    pub b: u64,
}

impl Fq {
    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{}", a),
            (0, 1) => write!(f, "i"),
            (0, b) => write!(f, "{}i", b),
            (a, 1) => write!(f, "{}+i", a),
            (a, b) => write!(f, "{}+{}i", a, b),
        }
    }
}

/// Trace-zero matrix `[[x, y], [z, -x]]` over `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SlElem {
    pub x: Fq,
    pub y: Fq,
    pub z: Fq,
}

impl SlElem {
    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }
}

impl fmt::Display for SlElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, -{}]]", self.x, self.y, self.z, self.x)
    }
}

pub type Mat2 = [RingElem; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ring {
    pub p: u64,
    pub kind: RingKind,
}

impl Ring {
    pub fn new(p: u64, kind: RingKind) -> Result<Self> {
        if p % 2 == 0 || !is_prime(p) {
            return Err(Error::Domain(format!("p = {} must be an odd prime", p)));
        }
        if kind == RingKind::Gaussian && p % 4 != 3 {
            return Err(Error::Domain(format!("p = {} is not inert in Z[i] (need p = 3 mod 4)", p)));
        }
        Ok(Ring { p, kind })
    }

    pub fn modulus(&self) -> u64 {
        self.p * self.p
    }

    /// `q = |F_q|`.
    pub fn q(&self) -> u64 {
        match self.kind {
            RingKind::Rational => self.p,
            RingKind::Gaussian => self.p * self.p,
        }
    }

    /// Number of ring elements.
    pub fn size(&self) -> u64 {
        self.q() * self.q()
    }

    /// `|PSL_2(R)| = |R|^3 (1 - 1/q^2) / 2`.
    pub fn psl_order(&self) -> u128 {
        let q = self.q() as u128;
        q.pow(3) * q * (q * q - 1) / 2
    }

    pub fn elem(&self, a: i64, b: i64) -> RingElem {
        let n = self.modulus() as i64;
        let b = if self.kind == RingKind::Rational { 0 } else { b };
        RingElem { a: a.rem_euclid(n) as u64, b: b.rem_euclid(n) as u64 }
    }

    pub fn add(&self, x: RingElem, y: RingElem) -> RingElem {
        let n = self.modulus();
        RingElem { a: (x.a + y.a) % n, b: (x.b + y.b) % n }
    }

    pub fn neg(&self, x: RingElem) -> RingElem {
        let n = self.modulus();
        RingElem { a: (n - x.a) % n, b: (n - x.b) % n }
    }

    pub fn mul(&self, x: RingElem, y: RingElem) -> RingElem {
        let n = self.modulus();
        let re = (x.a * y.a + (n - x.b) * y.b) % n;
        let im = (x.a * y.b + x.b * y.a) % n;
        RingElem { a: re, b: im }
    }

    pub fn is_unit(&self, x: RingElem) -> bool {
        x.a % self.p != 0 || x.b % self.p != 0
    }

    pub fn inverse(&self, x: RingElem) -> Option<RingElem> {
        if !self.is_unit(x) {
            return None;
        }
        let n = self.modulus();
        let norm = (x.a * x.a + x.b * x.b) % n;
        let ninv = mod_inverse(norm, n)?;
        let conj = RingElem { a: x.a, b: (n - x.b) % n };
        Some(self.mul(conj, RingElem { a: ninv, b: 0 }))
    }

    fn elem_code(&self, x: RingElem) -> u64 {
        x.a + self.modulus() * x.b
    }

    fn elem_decode(&self, c: u64) -> RingElem {
        RingElem { a: c % self.modulus(), b: c / self.modulus() }
    }

    pub fn mat_mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        let m = |i: usize, j: usize| {
            self.add(self.mul(x[2 * i], y[j]), self.mul(x[2 * i + 1], y[2 + j]))
        };
        [m(0, 0), m(0, 1), m(1, 0), m(1, 1)]
    }

    pub fn mat_neg(&self, x: &Mat2) -> Mat2 {
        [self.neg(x[0]), self.neg(x[1]), self.neg(x[2]), self.neg(x[3])]
    }

    pub fn det(&self, x: &Mat2) -> RingElem {
        self.add(self.mul(x[0], x[3]), self.neg(self.mul(x[1], x[2])))
    }

    pub fn identity(&self) -> Mat2 {
        let (o, z) = (self.elem(1, 0), self.elem(0, 0));
        [o, z, z, o]
    }

    fn mat_code(&self, x: &Mat2) -> u64 {
        let r = self.size();
        x.iter().rev().fold(0u64, |acc, e| acc * r + self.elem_code(*e))
    }

    /// Code of the class of `x` in `PSL_2`.
    pub fn canonical_code(&self, x: &Mat2) -> u64 {
        self.mat_code(x).min(self.mat_code(&self.mat_neg(x)))
    }

    pub fn decode(&self, code: u64) -> Mat2 {
        let r = self.size();
        let mut c = code;
        let mut out = [RingElem { a: 0, b: 0 }; 4];
        for slot in out.iter_mut() {
            *slot = self.elem_decode(c % r);
            c /= r;
        }
        out
    }

    fn fq_reduce(&self, x: RingElem) -> Fq {
        Fq { a: x.a % self.p, b: x.b % self.p }
    }

    pub fn fq_mul(&self, x: Fq, y: Fq) -> Fq {
        let p = self.p;
        Fq { a: (x.a * y.a + (p - x.b) * y.b) % p, b: (x.a * y.b + x.b * y.a) % p }
    }

    pub fn fq_add(&self, x: Fq, y: Fq) -> Fq {
        Fq { a: (x.a + y.a) % self.p, b: (x.b + y.b) % self.p }
    }

    pub fn fq_neg(&self, x: Fq) -> Fq {
        Fq { a: (self.p - x.a) % self.p, b: (self.p - x.b) % self.p }
    }

    fn fq_pow(&self, x: Fq, mut e: u64) -> Fq {
        let mut base = x;
        let mut acc = Fq { a: 1, b: 0 };
        while e > 0 {
            if e & 1 == 1 {
                acc = self.fq_mul(acc, base);
            }
            base = self.fq_mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Euler criterion in `F_q^*`.
    pub fn is_square_fq(&self, x: Fq) -> bool {
        !x.is_zero() && self.fq_pow(x, (self.q() - 1) / 2) == Fq { a: 1, b: 0 }
    }

    /// Euler criterion in `F_p^*`; false off `F_p`.
    pub fn is_square_fp(&self, x: Fq) -> bool {
        x.b == 0 && x.a != 0 && mod_pow(x.a, (self.p - 1) / 2, self.p) == 1
    }

    /// `Q = -det X`.
    pub fn q_param(&self, x: &SlElem) -> Fq {
        self.fq_add(self.fq_mul(x.x, x.x), self.fq_mul(x.y, x.z))
    }

    pub fn classify_x(&self, x: &SlElem) -> FrobType {
        if x.is_zero() {
            return FrobType::Trivial;
        }
        let q = self.q_param(x);
        if q.is_zero() {
            // det[v, Xv] up to squares, with v = e1 or e2
            let c = if !(x.x.is_zero() && x.z.is_zero()) { x.z } else { self.fq_neg(x.y) };
            return if self.is_square_fq(c) { FrobType::Nilpotent } else { FrobType::NilpotentTwisted };
        }
        if q.b != 0 {
            FrobType::Irregular
        } else if self.is_square_fp(q) {
            FrobType::Quadratic
        } else {
            FrobType::NonQuadratic
        }
    }

    /// Splits `m = s (I + p X)` with `s = ±1`, when `m` lies in `V_q`.
    pub fn x_param(&self, m: &Mat2) -> Option<SlElem> {
        let p = self.p;
        let s: i64 = match m[0].a % p {
            1 => 1,
            r if r == p - 1 => -1,
            _ => return None,
        };
        let sm = if s == 1 { *m } else { self.mat_neg(m) };
        let id = self.identity();
        let mut x = [Fq { a: 0, b: 0 }; 4];
        for k in 0..4 {
            let d = self.add(sm[k], self.neg(id[k]));
            if d.a % p != 0 || d.b % p != 0 {
                return None;
            }
            x[k] = Fq { a: d.a / p, b: d.b / p };
        }
        if self.fq_add(x[0], x[3]) != (Fq { a: 0, b: 0 }) {
            return None;
        }
        Some(SlElem { x: x[0], y: x[1], z: x[2] })
    }

    /// `I + p X`.
    pub fn from_x(&self, x: &SlElem) -> Mat2 {
        let p = self.p as i64;
        let lift = |f: Fq| self.elem(p * f.a as i64, p * f.b as i64);
        let one = self.elem(1, 0);
        let mx = self.fq_neg(x.x);
        [self.add(one, lift(x.x)), lift(x.y), lift(x.z), self.add(one, lift(mx))]
    }

    fn is_scalar_mod_p(&self, m: &Mat2) -> bool {
        let r = |e: RingElem| self.fq_reduce(e);
        r(m[1]).is_zero() && r(m[2]).is_zero() && r(m[0]) == r(m[3]) && {
            let d = r(m[0]);
            d == Fq { a: 1, b: 0 } || d == Fq { a: self.p - 1, b: 0 }
        }
    }

    pub fn all_sl(&self) -> Vec<SlElem> {
        let field: Vec<Fq> = match self.kind {
            RingKind::Rational => (0..self.p).map(|a| Fq { a, b: 0 }).collect(),
            RingKind::Gaussian => (0..self.p).flat_map(|a| (0..self.p).map(move |b| Fq { a, b })).collect(),
        };
        let mut out = Vec::with_capacity(field.len().pow(3));
        for &x in &field {
            for &y in &field {
                for &z in &field {
                    out.push(SlElem { x, y, z });
                }
            }
        }
        out
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m as i64, (a % m) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    (r == 1).then(|| t.rem_euclid(m as i64) as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrobType {
    Trivial,
    Nilpotent,
    /// Nilpotent with `det[v, Xv]` a non-square in `F_q`.
    NilpotentTwisted,
    Irregular,
    Quadratic,
    NonQuadratic,
}

impl FrobType {
    pub const ALL: [FrobType; 6] = [
        FrobType::Trivial,
        FrobType::Nilpotent,
        FrobType::NilpotentTwisted,
        FrobType::Irregular,
        FrobType::Quadratic,
        FrobType::NonQuadratic,
    ];

    pub fn short(&self) -> &'static str {
        match self {
            FrobType::Trivial => "tr",
            FrobType::Nilpotent => "ni",
            FrobType::NilpotentTwisted => "ni2",
            FrobType::Irregular => "ir",
            FrobType::Quadratic => "qr",
            FrobType::NonQuadratic => "nq",
        }
    }
}

impl fmt::Display for FrobType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrobType::Trivial => "trivial",
            FrobType::Nilpotent => "nilpotent",
            FrobType::NilpotentTwisted => "nilpotent-twisted",
            FrobType::Irregular => "irregular",
            FrobType::Quadratic => "quadratic",
            FrobType::NonQuadratic => "non-quadratic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubgroupId {
    B1,
    B2,
}

impl SubgroupId {
    pub const BOTH: [SubgroupId; 2] = [SubgroupId::B1, SubgroupId::B2];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusDatum {
    /// Index in the enumerated group, when there is one.
    pub sigma: Option<usize>,
    pub d0: u64,
    pub order: u64,
    pub x0: SlElem,
    pub type_tag: FrobType,
}

/// Fully enumerated `PSL_2(R)` with `V_q`, `B_1`, `B_2` marked.
#[derive(Clone, Debug)]
pub struct GroupTable {
    ring: Ring,
    elements: Vec<u64>,
    identity: usize,
    gens: Vec<usize>,
    classes: ClassData,
    vq: Vec<usize>,
    b1: Vec<usize>,
    b2: Vec<usize>,
    chi: [Vec<u64>; 2],
}

pub fn build_group(p: u64, kind: RingKind) -> Result<GroupTable> {
    build_group_with_cap(p, kind, DEFAULT_GROUP_CAP)
}

pub fn build_group_with_cap(p: u64, kind: RingKind, cap: u64) -> Result<GroupTable> {
    let ring = Ring::new(p, kind)?;
    let predicted = ring.psl_order();
    if predicted > cap as u128 {
        return Err(Error::Resource(format!("|PSL_2| = {} exceeds cap {}", predicted, cap)));
    }
    let one = ring.elem(1, 0);
    let zero = ring.elem(0, 0);
    let mut gen_mats = vec![[one, one, zero, one], [one, zero, one, one]];
    if kind == RingKind::Gaussian {
        let i = ring.elem(0, 1);
        gen_mats.push([one, i, zero, one]);
        gen_mats.push([one, zero, i, one]);
    }
    let id = ring.identity();
    let mut seen: HashSet<u64> = HashSet::with_capacity(predicted as usize);
    seen.insert(ring.canonical_code(&id));
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gen_mats {
            let y = ring.mat_mul(&x, g);
            if seen.insert(ring.canonical_code(&y)) {
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<u64> = seen.into_iter().collect();
    elements.sort_unstable();
    if elements.len() as u128 != predicted {
        return Err(Error::Logic(format!("enumerated {} elements, expected {}", elements.len(), predicted)));
    }
    let lookup = |m: &Mat2| elements.binary_search(&ring.canonical_code(m)).ok();
    let identity = lookup(&id).ok_or_else(|| Error::Logic("identity missing".into()))?;
    let gens = gen_mats.iter().map(|g| lookup(g).unwrap()).collect();

    let mut table = GroupTable {
        ring,
        elements,
        identity,
        gens,
        classes: ClassData { class_of: vec![], reps: vec![], sizes: vec![] },
        vq: vec![],
        b1: vec![],
        b2: vec![],
        chi: [vec![], vec![]],
    };
    for a in 0..table.elements.len() {
        let m = table.matrix(a);
        if ring.det(&m) != one {
            return Err(Error::Logic(format!("element {} has determinant {:?}", a, ring.det(&m))));
        }
        if table.mul(a, table.inv(a)) != identity {
            return Err(Error::Logic(format!("element {} has no inverse in the table", a)));
        }
        if let Some(x) = ring.x_param(&m) {
            table.vq.push(a);
            let in_fp = [x.x, x.y, x.z].iter().all(|f| f.b == 0);
            if in_fp {
                table.b1.push(a);
                if x.z == ring.fq_neg(x.y) {
                    table.b2.push(a);
                }
            }
        }
    }
    table.check_subgroups()?;
    table.classes = conjugacy_classes(&table);
    let total: usize = table.classes.sizes.iter().sum();
    if total != table.order() || table.classes.sizes.iter().any(|s| table.order() % s != 0) {
        return Err(Error::Logic("class equation fails".into()));
    }
    let c0 = crate::groups::perm_character(table.order(), &table.classes, &table.b1)?;
    let c1 = crate::groups::perm_character(table.order(), &table.classes, &table.b2)?;
    table.chi = [c0, c1];
    Ok(table)
}

impl GroupTable {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn matrix(&self, a: usize) -> Mat2 {
        self.ring.decode(self.elements[a])
    }

    pub fn index_of(&self, m: &Mat2) -> Option<usize> {
        self.elements.binary_search(&self.ring.canonical_code(m)).ok()
    }

    pub fn classes(&self) -> &ClassData {
        &self.classes
    }

    pub fn vq(&self) -> &[usize] {
        &self.vq
    }

    pub fn b1(&self) -> &[usize] {
        &self.b1
    }

    pub fn b2(&self) -> &[usize] {
        &self.b2
    }

    pub fn subgroup(&self, b: SubgroupId) -> &[usize] {
        match b {
            SubgroupId::B1 => &self.b1,
            SubgroupId::B2 => &self.b2,
        }
    }

    pub fn index(&self, b: SubgroupId) -> u64 {
        (self.order() / self.subgroup(b).len()) as u64
    }

    /// Permutation character per class.
    pub fn chi_table(&self, b: SubgroupId) -> &[u64] {
        &self.chi[b as usize]
    }

    fn check_subgroups(&self) -> Result<()> {
        let (p, q) = (self.ring.p as usize, self.ring.q() as usize);
        if self.vq.len() != q.pow(3) || self.b1.len() != p.pow(3) || self.b2.len() != p.pow(2) {
            return Err(Error::Logic(format!(
                "subgroup sizes |V_q| = {}, |B1| = {}, |B2| = {}",
                self.vq.len(),
                self.b1.len(),
                self.b2.len()
            )));
        }
        let xs: HashSet<SlElem> = self.vq.iter().map(|&a| self.ring.x_param(&self.matrix(a)).unwrap()).collect();
        if xs.len() != self.vq.len() {
            return Err(Error::Logic("X -> I + pX is not injective".into()));
        }
        for (name, set) in [("V_q", &self.vq), ("B1", &self.b1), ("B2", &self.b2)] {
            if !set.iter().all(|&a| set.binary_search(&self.inv(a)).is_ok()) {
                return Err(Error::Logic(format!("{} is not closed under inverses", name)));
            }
        }
        let vq_gens: Vec<usize> = self
            .vq
            .iter()
            .copied()
            .filter(|&a| {
                let x = self.ring.x_param(&self.matrix(a)).unwrap();
                [x.x, x.y, x.z].iter().filter(|f| !f.is_zero()).count() == 1
            })
            .collect();
        for &a in &vq_gens {
            for &b in &vq_gens {
                let ab = self.mul(a, b);
                if ab != self.mul(b, a) || self.vq.binary_search(&ab).is_err() {
                    return Err(Error::Logic("V_q is not an abelian subgroup".into()));
                }
            }
            for &g in &self.gens {
                if self.vq.binary_search(&self.conjugate(g, a)).is_err() {
                    return Err(Error::Logic("V_q is not normal".into()));
                }
            }
        }
        Ok(())
    }

    pub fn classify_frobenius(&self, sigma: usize) -> FrobeniusDatum {
        let mut x = sigma;
        let mut d0 = 1;
        while self.vq.binary_search(&x).is_err() {
            x = self.mul(x, sigma);
            d0 += 1;
        }
        let x0 = self.ring.x_param(&self.matrix(x)).expect("element of V_q");
        let type_tag = self.ring.classify_x(&x0);
        let order = if x0.is_zero() { d0 } else { d0 * self.ring.p };
        FrobeniusDatum { sigma: Some(sigma), d0, order, x0, type_tag }
    }

    /// `|Z_A(a)| |[a] ∩ B| / |B|`.
    pub fn chi_perm(&self, b: SubgroupId, a: usize) -> u64 {
        self.chi_table(b)[self.classes.class(a)]
    }

    /// Number of cosets `gB` fixed by `a`, counted directly.
    pub fn fixed_coset_count(&self, b: SubgroupId, a: usize) -> u64 {
        let set = self.subgroup(b);
        let hits = (0..self.order()).filter(|&g| set.binary_search(&self.conjugate(self.inv(g), a)).is_ok()).count();
        (hits / set.len()) as u64
    }

    /// Splitting type of an element by Mobius inversion of actual character values.
    pub fn splitting_of_element(&self, b: SubgroupId, sigma: usize) -> Result<BTreeMap<u64, Rational>> {
        let order = self.element_order(sigma);
        let mut chi = BTreeMap::new();
        let mut x = sigma;
        for d in 1..=order {
            chi.insert(d, Rational::from_integer(self.chi_perm(b, x) as i128));
            x = self.mul(x, sigma);
        }
        splitting_type(&chi, order)
    }

    /// Element of `A` of a given type with `d0 = 1`.
    pub fn representative(&self, tag: FrobType) -> Option<usize> {
        self.vq.iter().copied().find(|&a| self.ring.classify_x(&self.ring.x_param(&self.matrix(a)).unwrap()) == tag)
    }

    /// Fraction of `A` in each type.
    pub fn type_masses(&self) -> BTreeMap<FrobType, Rational> {
        let mut out = BTreeMap::new();
        let n = self.order() as i128;
        for (c, &r) in self.classes.reps.iter().enumerate() {
            let tag = self.classify_frobenius(r).type_tag;
            *out.entry(tag).or_insert_with(|| Rational::from_integer(0)) += Rational::new(self.classes.sizes[c] as i128, n);
        }
        out
    }
}

impl FiniteGroup for GroupTable {
    fn order(&self) -> usize {
        self.elements.len()
    }
    fn identity(&self) -> usize {
        self.identity
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        let m = self.ring.mat_mul(&self.matrix(a), &self.matrix(b));
        self.index_of(&m).expect("closed under multiplication")
    }
    fn inv(&self, a: usize) -> usize {
        let m = self.matrix(a);
        let r = &self.ring;
        self.index_of(&[m[3], r.neg(m[1]), r.neg(m[2]), m[0]]).expect("closed under inverses")
    }
    fn generators(&self) -> Vec<usize> {
        self.gens.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VqClassRow {
    pub class: usize,
    pub representative: String,
    pub type_tag: FrobType,
    pub size: usize,
    pub expected_size: u64,
    pub matches: bool,
}

/// Closed-form size of the class of `X` in `V_q`.
pub fn expected_vq_class_size(ring: &Ring, x: &SlElem) -> u64 {
    let q = ring.q();
    if x.is_zero() {
        return 1;
    }
    let qp = ring.q_param(x);
    if qp.is_zero() {
        (q * q - 1) / 2
    } else if ring.is_square_fq(qp) {
        q * (q + 1)
    } else {
        q * (q - 1)
    }
}

pub fn vq_classes(g: &GroupTable) -> Vec<VqClassRow> {
    let mut seen = BTreeMap::new();
    for &a in g.vq() {
        let c = g.classes().class(a);
        seen.entry(c).or_insert(a);
    }
    seen.into_iter()
        .map(|(c, a)| {
            let x = g.ring.x_param(&g.matrix(a)).unwrap();
            let expected = expected_vq_class_size(&g.ring, &x);
            let size = g.classes().sizes[c];
            VqClassRow {
                class: c,
                representative: x.to_string(),
                type_tag: g.ring.classify_x(&x),
                size,
                expected_size: expected,
                matches: size as u64 == expected,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionRow {
    pub class: usize,
    pub type_tag: FrobType,
    pub class_size: usize,
    pub count: usize,
    pub lemma_value: u64,
    pub matches: bool,
}

/// The intersection sizes stated for `V_p` and `R^perp`, keyed by type.
pub fn lemma_intersection(ring: &Ring, b: SubgroupId, tag: FrobType) -> u64 {
    let p = ring.p;
    match (b, tag) {
        (_, FrobType::Trivial) => 1,
        (_, FrobType::Irregular) => 0,
        (SubgroupId::B1, FrobType::Quadratic) => p * (p + 1),
        (SubgroupId::B1, FrobType::NonQuadratic) => p * (p - 1),
        (SubgroupId::B1, FrobType::Nilpotent | FrobType::NilpotentTwisted) => (p * p - 1) / 2,
        (SubgroupId::B2, _) => p - 1,
    }
}

pub fn intersection_counts(g: &GroupTable, b: SubgroupId) -> Vec<IntersectionRow> {
    let counts = crate::groups::intersection_counts(g.classes(), g.subgroup(b));
    vq_classes(g)
        .into_iter()
        .map(|row| {
            let lemma = lemma_intersection(&g.ring, b, row.type_tag);
            IntersectionRow {
                class: row.class,
                type_tag: row.type_tag,
                class_size: row.size,
                count: counts[row.class],
                lemma_value: lemma,
                matches: counts[row.class] as u64 == lemma,
            }
        })
        .collect()
}

pub fn gassmann_check(classes: &ClassData, b1: &[usize], b2: &[usize]) -> bool {
    crate::groups::intersection_counts(classes, b1) == crate::groups::intersection_counts(classes, b2)
}

pub fn lmnr_check(classes: &ClassData, b1: &[usize], b2: &[usize]) -> bool {
    let c1 = crate::groups::intersection_counts(classes, b1);
    let c2 = crate::groups::intersection_counts(classes, b2);
    c1.iter().zip(&c2).all(|(x, y)| (*x == 0) == (*y == 0))
}

/// `A(m) = (1/m) sum_{d|m} mu(m/d) chi(d)` for `m <= m_max`, asserted to be nonnegative integers.
pub fn splitting_type(chi_values: &BTreeMap<u64, Rational>, m_max: u64) -> Result<BTreeMap<u64, Rational>> {
    let mut out = BTreeMap::new();
    for m in 1..=m_max {
        let mut s = Rational::from_integer(0);
        for d in divisors(m) {
            let c = chi_values
                .get(&d)
                .ok_or_else(|| Error::Domain(format!("character value at power {} is missing", d)))?;
            s += *c * Rational::from_integer(mobius(m / d) as i128);
        }
        let a = s / Rational::from_integer(m as i128);
        if !a.is_integer() || a < Rational::from_integer(0) {
            return Err(Error::NonIntegralSplitting(format!("A({}) = {}", m, a)));
        }
        out.insert(m, a);
    }
    Ok(out)
}

/// Splitting at every divisor `m` of `n`; cycle lengths of an element divide its order.
pub fn splitting_type_divisors(chi_values: &BTreeMap<u64, Rational>, n: u64) -> Result<BTreeMap<u64, Rational>> {
    let mut out = BTreeMap::new();
    for m in divisors(n) {
        let mut s = Rational::from_integer(0);
        for d in divisors(m) {
            let c = chi_values
                .get(&d)
                .ok_or_else(|| Error::Domain(format!("character value at power {} is missing", d)))?;
            s += *c * Rational::from_integer(mobius(m / d) as i128);
        }
        let a = s / Rational::from_integer(m as i128);
        if !a.is_integer() || a < Rational::from_integer(0) {
            return Err(Error::NonIntegralSplitting(format!("A({}) = {}", m, a)));
        }
        out.insert(m, a);
    }
    Ok(out)
}

/// Source of Frobenius data and character values, enumerated or closed-form.
pub trait SplittingModel: Sync {
    fn ring(&self) -> Ring;
    fn index(&self, b: SubgroupId) -> u64;
    /// `chi_B(sigma^{d0})` for a Frobenius of the given type.
    fn chi_of_type(&self, tag: FrobType, b: SubgroupId) -> u64;
    /// `chi_B(sigma^d)`.
    fn chi_power(&self, datum: &FrobeniusDatum, b: SubgroupId, d: u64) -> u64;
    /// Uniformly distributed element of `A`, classified.
    fn sample(&self, rng: &mut dyn RngCore) -> FrobeniusDatum;
    fn label(&self) -> String;

    /// `n = [A : B_1]`.
    fn n(&self) -> u64 {
        self.index(SubgroupId::B1)
    }
}

impl SplittingModel for GroupTable {
    fn ring(&self) -> Ring {
        self.ring
    }
    fn index(&self, b: SubgroupId) -> u64 {
        GroupTable::index(self, b)
    }
    fn chi_of_type(&self, tag: FrobType, b: SubgroupId) -> u64 {
        self.representative(tag).map(|a| self.chi_perm(b, a)).unwrap_or(0)
    }
    fn chi_power(&self, datum: &FrobeniusDatum, b: SubgroupId, d: u64) -> u64 {
        match datum.sigma {
            Some(s) => self.chi_perm(b, self.pow(s, d)),
            None => ClosedFormModel { ring: self.ring }.chi_power(datum, b, d),
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> FrobeniusDatum {
        let a = rng.random_range(0..self.order());
        self.classify_frobenius(a)
    }
    fn label(&self) -> String {
        format!("enumerated PSL_2 over {} ring, p = {}", self.ring.kind, self.ring.p)
    }
}

/// Character values from the class-size and intersection formulas, with
/// Frobenius data sampled from uniformly random `SL_2(R)` matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosedFormModel {
    pub ring: Ring,
}

impl ClosedFormModel {
    pub fn new(p: u64, kind: RingKind) -> Result<Self> {
        Ok(ClosedFormModel { ring: Ring::new(p, kind)? })
    }

    fn class_size(&self, tag: FrobType) -> u64 {
        let (p, q) = (self.ring.p, self.ring.q());
        match (self.ring.kind, tag) {
            (_, FrobType::Trivial) => 1,
            (_, FrobType::Nilpotent | FrobType::NilpotentTwisted) => (q * q - 1) / 2,
            (RingKind::Gaussian, FrobType::Quadratic | FrobType::NonQuadratic) => q * (q + 1),
            (RingKind::Gaussian, FrobType::Irregular) => q * q,
            (RingKind::Rational, FrobType::Quadratic) => p * (p + 1),
            (RingKind::Rational, FrobType::NonQuadratic) => p * (p - 1),
            (RingKind::Rational, FrobType::Irregular) => 1,
        }
    }

    fn hits(&self, tag: FrobType, b: SubgroupId) -> u64 {
        let p = self.ring.p;
        match (self.ring.kind, b, tag) {
            (_, _, FrobType::Trivial) => 1,
            (_, _, FrobType::Irregular) => 0,
            (RingKind::Gaussian, _, FrobType::NilpotentTwisted) => 0,
            (RingKind::Gaussian, SubgroupId::B1, FrobType::Nilpotent) => p * p - 1,
            (RingKind::Gaussian, SubgroupId::B2, FrobType::Nilpotent) => 2 * (p - 1),
            (RingKind::Rational, SubgroupId::B1, t) => self.class_size(t),
            (_, SubgroupId::B1, FrobType::Quadratic) => p * (p + 1),
            (_, SubgroupId::B1, FrobType::NonQuadratic) => p * (p - 1),
            (_, SubgroupId::B2, _) => p - 1,
        }
    }

    /// Type of `k X` given the type of `X`, for `k` prime to `p`.
    fn scaled_type(&self, tag: FrobType, k: u64) -> FrobType {
        let p = self.ring.p;
        let k_square = mod_pow(k % p, (p - 1) / 2, p) == 1;
        match (self.ring.kind, tag) {
            (RingKind::Rational, FrobType::Nilpotent) if !k_square => FrobType::NilpotentTwisted,
            (RingKind::Rational, FrobType::NilpotentTwisted) if !k_square => FrobType::Nilpotent,
            _ => tag,
        }
    }

    /// Uniform element of `SL_2(R)`: a unimodular first column, then a uniform completion.
    pub fn sample_matrix(&self, rng: &mut dyn RngCore) -> Mat2 {
        let r = &self.ring;
        let n = r.modulus() as i64;
        let draw = |rng: &mut dyn RngCore| r.elem(rng.random_range(0..n), rng.random_range(0..n));
        loop {
            let a = draw(rng);
            let c = draw(rng);
            if let Some(ai) = r.inverse(a) {
                let b = draw(rng);
                let d = r.mul(r.add(r.elem(1, 0), r.mul(b, c)), ai);
                return [a, b, c, d];
            }
            if let Some(ci) = r.inverse(c) {
                let d = draw(rng);
                let b = r.mul(r.add(r.mul(a, d), r.elem(-1, 0)), ci);
                return [a, b, c, d];
            }
        }
    }

    pub fn classify_matrix(&self, m: &Mat2) -> FrobeniusDatum {
        let r = &self.ring;
        let mut x = *m;
        let mut d0 = 1;
        while !r.is_scalar_mod_p(&x) {
            x = r.mat_mul(&x, m);
            d0 += 1;
        }
        let x0 = r.x_param(&x).expect("scalar modulo p");
        let type_tag = r.classify_x(&x0);
        let order = if x0.is_zero() { d0 } else { d0 * r.p };
        FrobeniusDatum { sigma: None, d0, order, x0, type_tag }
    }
}

impl SplittingModel for ClosedFormModel {
    fn ring(&self) -> Ring {
        self.ring
    }
    fn index(&self, b: SubgroupId) -> u64 {
        let p = self.ring.p as u128;
        let sub = match b {
            SubgroupId::B1 => p.pow(3),
            SubgroupId::B2 => p.pow(2),
        };
        (self.ring.psl_order() / sub) as u64
    }
    fn chi_of_type(&self, tag: FrobType, b: SubgroupId) -> u64 {
        let num = self.index(b) as u128 * self.hits(tag, b) as u128;
        (num / self.class_size(tag) as u128) as u64
    }
    fn chi_power(&self, datum: &FrobeniusDatum, b: SubgroupId, d: u64) -> u64 {
        if d % datum.d0 != 0 {
            return 0;
        }
        let k = d / datum.d0;
        if datum.type_tag == FrobType::Trivial || k % self.ring.p == 0 {
            return self.index(b);
        }
        self.chi_of_type(self.scaled_type(datum.type_tag, k), b)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> FrobeniusDatum {
        let m = self.sample_matrix(rng);
        self.classify_matrix(&m)
    }
    fn label(&self) -> String {
        format!("closed-form model over {} ring, p = {}", self.ring.kind, self.ring.p)
    }
}

/// Splitting of a datum by Mobius inversion of `chi_B(sigma^d)`, `d` up to the order.
pub fn splitting_from_model(model: &dyn SplittingModel, datum: &FrobeniusDatum, b: SubgroupId) -> Result<BTreeMap<u64, Rational>> {
    let chi: BTreeMap<u64, Rational> = divisors(datum.order)
        .into_iter()
        .map(|d| (d, Rational::from_integer(model.chi_power(datum, b, d) as i128)))
        .collect();
    splitting_type_divisors(&chi, datum.order)
}

/// `A(d0) = chi/d0` and `A(p d0) = (idx - chi)/(p d0)`; `A(d0) = idx/d0` when `sigma^{d0} = 1`.
pub fn lemma_splitting(model: &dyn SplittingModel, datum: &FrobeniusDatum, b: SubgroupId) -> BTreeMap<u64, Rational> {
    let idx = model.index(b) as i128;
    let d0 = datum.d0 as i128;
    let mut out = BTreeMap::new();
    if datum.type_tag == FrobType::Trivial {
        out.insert(datum.d0, Rational::new(idx, d0));
        return out;
    }
    let chi = model.chi_of_type(datum.type_tag, b) as i128;
    let p = model.ring().p as i128;
    out.insert(datum.d0, Rational::new(chi, d0));
    out.insert(datum.d0 * model.ring().p, Rational::new(idx - chi, p * d0));
    out
}

fn nonzero(map: &BTreeMap<u64, Rational>) -> BTreeMap<u64, Rational> {
    map.iter().filter(|(_, v)| **v != Rational::from_integer(0)).map(|(k, v)| (*k, *v)).collect()
}

pub fn conservation_holds(split: &BTreeMap<u64, Rational>, index: u64) -> bool {
    let total = split.iter().fold(Rational::from_integer(0), |acc, (m, a)| acc + *a * Rational::from_integer(*m as i128));
    total == Rational::from_integer(index as i128)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub elements_checked: usize,
    pub lemma_failures: Vec<String>,
    pub conservation_failures: Vec<String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.lemma_failures.is_empty() && self.conservation_failures.is_empty()
    }
}

/// Checks the closed-form splitting and conservation for every element of `V_q`
/// and every class representative of `A`.
pub fn verify_splitting_lemma(g: &GroupTable) -> Result<LemmaReport> {
    let mut report = LemmaReport::default();
    let mut targets: Vec<usize> = g.vq().to_vec();
    targets.extend(g.classes().reps.iter().copied());
    for a in targets {
        let datum = g.classify_frobenius(a);
        report.elements_checked += 1;
        for b in SubgroupId::BOTH {
            let actual = splitting_from_model(g, &datum, b)?;
            let direct = g.splitting_of_element(b, a)?;
            if nonzero(&actual) != nonzero(&direct) {
                return Err(Error::Logic(format!("power-character shortcut disagrees for element {}", a)));
            }
            if nonzero(&actual) != nonzero(&lemma_splitting(g, &datum, b)) {
                report.lemma_failures.push(format!("{:?} element {} type {} d0 {}", b, a, datum.type_tag, datum.d0));
            }
            if !conservation_holds(&actual, g.index(b)) {
                report.conservation_failures.push(format!("{:?} element {}", b, a));
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeRow {
    pub type_tag: FrobType,
    pub chi: [u64; 2],
    /// Coefficient of `(n/d0) delta_{d,d0}`, per subgroup.
    pub coeff_d0: [Rational; 2],
    /// Coefficient of `(n/d0) delta_{d,p d0}`, per subgroup.
    pub coeff_pd0: [Rational; 2],
    pub printed_d0: Option<[Rational; 2]>,
    pub printed_pd0: Option<[Rational; 2]>,
    pub matches_printed: Option<[bool; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingTable {
    pub p: u64,
    pub ring: RingKind,
    pub order: u128,
    pub index: [u64; 2],
    pub n: u64,
    /// Stated only for the gaussian ring.
    pub n_printed_formula: Option<u64>,
    pub n_matches_printed: Option<bool>,
    pub rows: Vec<TypeRow>,
    pub mismatches: Vec<String>,
}

fn r(a: i128, b: i128) -> Rational {
    Rational::new(a, b)
}

/// Printed coefficients of `(n/d0)`: `(B1 at d0, B1 at p d0, B2 at d0, B2 at p d0)`.
pub fn printed_coefficients(p: u64, tag: FrobType) -> [Rational; 4] {
    let p = p as i128;
    let (p2, p3, p4) = (p * p, p * p * p, p * p * p * p);
    match tag {
        FrobType::Trivial => [r(1, 1), r(0, 1), r(p, 1), r(0, 1)],
        FrobType::Irregular => [r(0, 1), r(1, p), r(0, 1), r(1, 1)],
        FrobType::Quadratic => [r(p + 1, p3 + p), r(p3 - 1, p4 + p2), r(p - 1, p3 + p), r(p4 + p2 - p + 1, p4 + p2)],
        FrobType::NonQuadratic => [r(p - 1, p3 + p), r(p3 + 1, p4 + p2), r(p - 1, p3 + p), r(p4 + p2 - p + 1, p4 + p2)],
        FrobType::Nilpotent | FrobType::NilpotentTwisted => {
            [r(p2 - 1, p4 - 1), r(p3 - p, p4 - 1), r(p3 - p, p4 - 1), r(p4 - 2 * p + 1, p4 - 1)]
        }
    }
}

/// The stated index formula `p^4 (p^2 - 1) / 2`.
pub fn printed_n(p: u64) -> u64 {
    p.pow(4) * (p * p - 1) / 2
}

pub fn splitting_table(model: &dyn SplittingModel) -> SplittingTable {
    let ring = model.ring();
    let p = ring.p;
    let n = model.n();
    let idx = [model.index(SubgroupId::B1), model.index(SubgroupId::B2)];
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for tag in FrobType::ALL {
        if ring.kind == RingKind::Rational && tag == FrobType::Irregular {
            continue;
        }
        let chi = [model.chi_of_type(tag, SubgroupId::B1), model.chi_of_type(tag, SubgroupId::B2)];
        let coeff_d0 = [0, 1].map(|j| r(chi[j] as i128, n as i128));
        let coeff_pd0 = [0, 1].map(|j| r((idx[j] - chi[j]) as i128, (p * n) as i128));
        let (printed_d0, printed_pd0, matches) = if ring.kind == RingKind::Gaussian {
            let pc = printed_coefficients(p, tag);
            let pd0 = [pc[0], pc[2]];
            let ppd0 = [pc[1], pc[3]];
            let m = [0, 1].map(|j| pd0[j] == coeff_d0[j] && ppd0[j] == coeff_pd0[j]);
            for (j, ok) in m.iter().enumerate() {
                if !ok {
                    mismatches.push(format!(
                        "B{} {}: computed ({}, {}), printed ({}, {})",
                        j + 1,
                        tag,
                        coeff_d0[j],
                        coeff_pd0[j],
                        pd0[j],
                        ppd0[j]
                    ));
                }
            }
            (Some(pd0), Some(ppd0), Some(m))
        } else {
            (None, None, None)
        };
        rows.push(TypeRow { type_tag: tag, chi, coeff_d0, coeff_pd0, printed_d0, printed_pd0, matches_printed: matches });
    }
    let n_printed = (ring.kind == RingKind::Gaussian).then(|| printed_n(p));
    if let Some(n_printed) = n_printed.filter(|&v| v != n) {
        mismatches.push(format!("n = [A:B1] = {}, printed formula gives {}", n, n_printed));
    }
    SplittingTable {
        p,
        ring: ring.kind,
        order: ring.psl_order(),
        index: idx,
        n,
        n_printed_formula: n_printed,
        n_matches_printed: n_printed.map(|v| v == n),
        rows,
        mismatches,
    }
}

/// Per-type coefficients `(c_I, c~_I)` of `pi_I` and `pi~_I` in the cumulative difference,
/// where `pi_I` weights a record by `n/d0` and `pi~_I` by `n/(p d0)`.
pub fn difference_coefficients(model: &dyn SplittingModel) -> BTreeMap<FrobType, (Rational, Rational)> {
    let n = model.n() as i128;
    let idx1 = model.index(SubgroupId::B1) as i128;
    let idx2 = model.index(SubgroupId::B2) as i128;
    FrobType::ALL
        .iter()
        .map(|&tag| {
            let c1 = model.chi_of_type(tag, SubgroupId::B1) as i128;
            let c2 = model.chi_of_type(tag, SubgroupId::B2) as i128;
            let c = r(c2 - c1, n);
            let ct = if tag == FrobType::Trivial { r(0, 1) } else { r((idx2 - c2) - (idx1 - c1), n) };
            (tag, (c, ct))
        })
        .collect()
}

/// The stated coefficients of the cumulative difference, same layout as [`difference_coefficients`].
pub fn printed_difference_coefficients(p: u64) -> BTreeMap<FrobType, (Rational, Rational)> {
    let p = p as i128;
    let (p2, p3, p4) = (p * p, p * p * p, p * p * p * p);
    let ni = (r(p3 - p2 - p + 1, p4 - 1), r(p4 - p3 - p + 1, p4 - 1));
    BTreeMap::from([
        (FrobType::Trivial, (r(p - 1, 1), r(0, 1))),
        (FrobType::Quadratic, (r(-2, p3 + p), r(p4 - p3 + p2 - p + 2, p4 + p2))),
        (FrobType::NonQuadratic, (r(0, 1), r(p4 - p3 + p2 - p, p4 + p2))),
        (FrobType::Irregular, (r(0, 1), r(p - 1, p))),
        (FrobType::Nilpotent, ni),
        (FrobType::NilpotentTwisted, ni),
    ])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub p: u64,
    pub ring: RingKind,
    pub order: usize,
    pub class_count: usize,
    pub size_histogram: BTreeMap<usize, usize>,
    pub subgroup_orders: BTreeMap<String, usize>,
}

pub fn census(g: &GroupTable) -> Census {
    let mut hist = BTreeMap::new();
    for &s in &g.classes().sizes {
        *hist.entry(s).or_insert(0) += 1;
    }
    Census {
        p: g.ring.p,
        ring: g.ring.kind,
        order: g.order(),
        class_count: g.classes().len(),
        size_histogram: hist,
        subgroup_orders: BTreeMap::from([
            ("V_q".to_string(), g.vq().len()),
            ("B1".to_string(), g.b1().len()),
            ("B2".to_string(), g.b2().len()),
        ]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::OnceLock;

    fn g3() -> &'static GroupTable {
        static G: OnceLock<GroupTable> = OnceLock::new();
        G.get_or_init(|| build_group(3, RingKind::Gaussian).unwrap())
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(build_group(2, RingKind::Rational), Err(Error::Domain(_))));
        assert!(matches!(build_group(5, RingKind::Gaussian), Err(Error::Domain(_))));
        assert!(matches!(build_group(9, RingKind::Rational), Err(Error::Domain(_))));
        assert!(matches!(build_group(7, RingKind::Gaussian), Err(Error::Resource(_))));
    }

    #[test]
    fn rational_orders() {
        let g = build_group(3, RingKind::Rational).unwrap();
        assert_eq!(g.order(), 324);
        let g5 = build_group(5, RingKind::Rational).unwrap();
        assert_eq!(g5.order(), 125 * 5 * 24 / 2);
    }

    #[test]
    fn gaussian_three() {
        let g = g3();
        assert_eq!(g.order(), 262_440);
        assert_eq!((g.vq().len(), g.b1().len(), g.b2().len()), (729, 27, 9));
        assert!(vq_classes(g).iter().all(|r| r.matches));
        let sizes: BTreeMap<FrobType, Vec<usize>> = vq_classes(g).into_iter().fold(BTreeMap::new(), |mut m, r| {
            m.entry(r.type_tag).or_insert_with(Vec::new).push(r.size);
            m
        });
        assert_eq!(sizes[&FrobType::Nilpotent], vec![40]);
        assert_eq!(sizes[&FrobType::NilpotentTwisted], vec![40]);
        assert!(sizes[&FrobType::Quadratic].iter().all(|&s| s == 90));
    }

    #[test]
    fn intersections_against_closed_form() {
        let g = g3();
        let model = ClosedFormModel::new(3, RingKind::Gaussian).unwrap();
        for b in SubgroupId::BOTH {
            for row in intersection_counts(g, b) {
                assert_eq!(row.count as u64, model.hits(row.type_tag, b), "{:?} {:?}", b, row.type_tag);
            }
            for tag in FrobType::ALL {
                assert_eq!(g.chi_of_type(tag, b), model.chi_of_type(tag, b), "{:?} {:?}", b, tag);
            }
        }
        let b1 = intersection_counts(g, SubgroupId::B1);
        assert!(b1.iter().any(|r| r.type_tag == FrobType::Quadratic && r.count == 12));
        assert!(b1.iter().filter(|r| r.type_tag == FrobType::Irregular).all(|r| r.count == 0));
        let b2 = intersection_counts(g, SubgroupId::B2);
        assert!(b2.iter().filter(|r| r.type_tag == FrobType::NonQuadratic).all(|r| r.count == 2));
    }

    #[test]
    fn chi_matches_fixed_cosets() {
        let g = build_group(3, RingKind::Rational).unwrap();
        for a in 0..g.order() {
            for b in SubgroupId::BOTH {
                assert_eq!(g.chi_perm(b, a), g.fixed_coset_count(b, a));
            }
        }
        let g = g3();
        let a = g.representative(FrobType::Quadratic).unwrap();
        assert_eq!(g.chi_perm(SubgroupId::B1, a), g.fixed_coset_count(SubgroupId::B1, a));
        assert_eq!(g.chi_perm(SubgroupId::B1, g.identity()), g.index(SubgroupId::B1));
    }

    #[test]
    fn gassmann_and_lmnr() {
        let g = g3();
        assert!(!gassmann_check(g.classes(), g.b1(), g.b2()));
        assert!(lmnr_check(g.classes(), g.b1(), g.b2()));
        assert!(gassmann_check(g.classes(), g.b1(), g.b1()));
    }

    #[test]
    fn splitting_lemma_rational() {
        for p in [3, 5] {
            let g = build_group(p, RingKind::Rational).unwrap();
            let rep = verify_splitting_lemma(&g).unwrap();
            assert!(rep.passed(), "{:?}", rep);
        }
    }

    #[test]
    fn splitting_type_errors() {
        let chi = BTreeMap::from([(1, Rational::from_integer(3)), (2, Rational::from_integer(0))]);
        assert!(matches!(splitting_type(&chi, 2), Err(Error::NonIntegralSplitting(_))));
        let chi = BTreeMap::from([(1, Rational::from_integer(4))]);
        assert!(splitting_type(&chi, 2).is_err());
    }

    #[test]
    fn table_at_three() {
        let t = splitting_table(g3());
        assert_eq!(t.n, 9720);
        assert_eq!(t.n_matches_printed, Some(false));
        let row = |tag| t.rows.iter().find(|r| r.type_tag == tag).unwrap().clone();
        assert_eq!(row(FrobType::Trivial).coeff_d0, [r(1, 1), r(3, 1)]);
        let q = row(FrobType::Quadratic);
        assert_eq!(q.coeff_d0[1] - q.coeff_d0[0], r(-2, 30));
        assert_eq!(q.matches_printed, Some([true, true]));
        assert_eq!(row(FrobType::Nilpotent).matches_printed, Some([false, false]));
        let dc = difference_coefficients(g3());
        assert_eq!(dc[&FrobType::Trivial].0, r(2, 1));
        assert_eq!(dc[&FrobType::Quadratic].0, r(-1, 15));
    }

    #[test]
    fn closed_form_sampler_matches_enumeration() {
        let model = ClosedFormModel::new(3, RingKind::Gaussian).unwrap();
        let g = g3();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let m = model.sample_matrix(&mut rng);
            assert_eq!(model.ring.det(&m), model.ring.elem(1, 0));
            let a = g.index_of(&m).unwrap();
            let exact = g.classify_frobenius(a);
            let approx = model.classify_matrix(&m);
            assert_eq!((exact.d0, exact.type_tag, exact.order), (approx.d0, approx.type_tag, approx.order));
            for b in SubgroupId::BOTH {
                for d in 1..=exact.order {
                    assert_eq!(g.chi_power(&exact, b, d), model.chi_power(&approx, b, d));
                }
            }
        }
    }

    #[test]
    fn power_independence() {
        let g = g3();
        for tag in [FrobType::Quadratic, FrobType::NonQuadratic, FrobType::Nilpotent, FrobType::Irregular] {
            let a = g.representative(tag).unwrap();
            for k in [1, 2] {
                let ak = g.pow(a, k);
                assert_eq!(g.classify_frobenius(ak).type_tag, tag);
                for b in SubgroupId::BOTH {
                    assert_eq!(g.chi_perm(b, ak), g.chi_perm(b, a));
                }
            }
        }
    }
}
