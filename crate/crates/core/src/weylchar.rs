//! Weyl groups of types B and D, exact characters, and the combinatorics of N and S.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, IntPoly, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupType {
    /// `SO(2m+1)` and `Spin(2m+1)`.
    B,
    /// `SO(2m)`.
    D,
}

/// Torus variable names `y1..ym`.
pub fn torus_vars(m: usize) -> Vec<String> {
    (1..=m).map(|j| format!("y{}", j)).collect()
}

fn var_refs(v: &[String]) -> Vec<&str> {
    v.iter().map(|s| s.as_str()).collect()
}

/// Highest weight stored with doubled coordinates `2 a_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    group_type: GroupType,
    doubled: Vec<i32>,
}

impl Weight {
    pub fn new(group_type: GroupType, doubled: Vec<i32>) -> Result<Self> {
        if doubled.is_empty() {
            return Err(Error::Domain("weights need rank at least one".into()));
        }
        let parity = doubled[0].rem_euclid(2);
        if doubled.iter().any(|x| x.rem_euclid(2) != parity) {
            return Err(Error::Domain(format!("coordinates {:?} do not differ by integers", doubled)));
        }
        Ok(Weight { group_type, doubled })
    }

    pub fn from_coords(group_type: GroupType, coords: &[Ratio<i64>]) -> Result<Self> {
        let doubled = coords
            .iter()
            .map(|c| {
                let d = c * Ratio::from_integer(2);
                if d.is_integer() {
                    Ok(d.to_integer() as i32)
                } else {
                    Err(Error::Domain(format!("coordinate {} is not a half-integer", c)))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(group_type, doubled)
    }

    /// Weight with integer coordinates `a`.
    pub fn integral(group_type: GroupType, a: &[i32]) -> Self {
        Weight { group_type, doubled: a.iter().map(|x| 2 * x).collect() }
    }

    /// `e_1 + ... + e_q` in rank `m`.
    pub fn fundamental(group_type: GroupType, m: usize, q: usize) -> Self {
        let a: Vec<i32> = (0..m).map(|j| i32::from(j < q)).collect();
        Self::integral(group_type, &a)
    }

    pub fn group_type(&self) -> GroupType {
        self.group_type
    }

    pub fn rank(&self) -> usize {
        self.doubled.len()
    }

    pub fn doubled(&self) -> &[i32] {
        &self.doubled
    }

    pub fn coords(&self) -> Vec<Ratio<i64>> {
        self.doubled.iter().map(|&d| Ratio::new(d as i64, 2)).collect()
    }

    /// True when the representation factors through the orthogonal group.
    pub fn is_integral(&self) -> bool {
        self.doubled[0] % 2 == 0
    }

    pub fn is_dominant(&self) -> bool {
        let a = &self.doubled;
        let m = a.len();
        let chain = |upto: usize| (1..upto).all(|i| a[i - 1] >= a[i]);
        match self.group_type {
            GroupType::B => chain(m) && a[m - 1] >= 0,
            GroupType::D => m == 1 || (chain(m - 1) && a[m - 2] >= a[m - 1].abs()),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .doubled
            .iter()
            .map(|&d| if d % 2 == 0 { (d / 2).to_string() } else { format!("{}/2", d) })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Signed permutation `e_i -> signs[i] e_{perm[i]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylGroupElement {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
    pub sign: i8,
}

impl WeylGroupElement {
    pub fn apply(&self, v: &[i32]) -> Vec<i32> {
        let mut out = vec![0; v.len()];
        for (i, &x) in v.iter().enumerate() {
            out[self.perm[i]] = self.signs[i] as i32 * x;
        }
        out
    }

    /// Determinant of the signed permutation matrix.
    pub fn matrix_det(&self) -> i8 {
        let m = self.perm.len();
        let mut mat = vec![vec![0i64; m]; m];
        for i in 0..m {
            mat[self.perm[i]][i] = self.signs[i] as i64;
        }
        integer_det(mat) as i8
    }
}

fn integer_det(mut a: Vec<Vec<i64>>) -> i64 {
    let n = a.len();
    let mut det = 1i64;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r][c] != 0) else { return 0 };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            if a[r][c] != 0 {
                let f = a[r][c] / a[c][c];
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    det
}

fn perm_parity(p: &[usize]) -> i8 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 { 1 } else { -1 }
}

pub fn weyl_group(group_type: GroupType, m: usize) -> Vec<WeylGroupElement> {
    let mut out = Vec::new();
    for perm in (0..m).permutations(m) {
        let pp = perm_parity(&perm);
        for mask in 0u32..(1 << m) {
            let signs: Vec<i8> = (0..m).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let flips = mask.count_ones();
            if group_type == GroupType::D && flips % 2 == 1 {
                continue;
            }
            let sign = if flips % 2 == 0 { pp } else { -pp };
            out.push(WeylGroupElement { perm: perm.clone(), signs, sign });
        }
    }
    out
}

/// Half the sum of positive roots, doubled.
pub fn delta_doubled(group_type: GroupType, m: usize) -> Vec<i32> {
    (1..=m)
        .map(|j| match group_type {
            GroupType::D => 2 * (m - j) as i32,
            GroupType::B => 2 * (m - j) as i32 + 1,
        })
        .collect()
}

/// Positive roots, doubled: `e_i +- e_j` (i < j), plus `e_i` for type B.
pub fn positive_roots_doubled(group_type: GroupType, m: usize) -> Vec<Vec<i32>> {
    let mut roots = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for s in [1, -1] {
                let mut r = vec![0; m];
                r[i] = 2;
                r[j] = 2 * s;
                roots.push(r);
            }
        }
        if group_type == GroupType::B {
            let mut r = vec![0; m];
            r[i] = 2;
            roots.push(r);
        }
    }
    roots
}

fn mono(vars: &[&str], e: Vec<i32>) -> IntPoly {
    IntPoly::from_terms(vars, [(e, BigInt::one())])
}

/// Alternating sum `sum_w sgn(w) y^{w(v)}`.
pub fn alternating_sum(group_type: GroupType, m: usize, v: &[i32]) -> IntPoly {
    let vars = torus_vars(m);
    let vr = var_refs(&vars);
    let terms = weyl_group(group_type, m)
        .into_iter()
        .map(|w| (w.apply(v), BigInt::from(w.sign)))
        .collect::<Vec<_>>();
    IntPoly::from_terms(&vr, terms)
}

/// Denominator in product form `y^delta prod_{alpha > 0} (1 - y^{-alpha})`.
pub fn weyl_denominator(group_type: GroupType, m: usize) -> IntPoly {
    let vars = torus_vars(m);
    let vr = var_refs(&vars);
    let mut acc = mono(&vr, delta_doubled(group_type, m));
    for a in positive_roots_doubled(group_type, m) {
        let neg: Vec<i32> = a.iter().map(|x| -x).collect();
        acc = acc.mul_ref(&(IntPoly::one() - mono(&vr, neg)));
    }
    acc
}

pub fn weyl_character(group_type: GroupType, m: usize, lam: &Weight) -> Result<IntPoly> {
    if lam.rank() != m {
        return Err(Error::Domain(format!("weight {} has rank {} not {}", lam, lam.rank(), m)));
    }
    if lam.group_type() != group_type || !lam.is_dominant() {
        return Err(Error::Domain(format!("weight {} is not dominant for {:?}{}", lam, group_type, m)));
    }
    let vars = torus_vars(m);
    let vr = var_refs(&vars);
    let shifted: Vec<i32> =
        lam.doubled().iter().zip(delta_doubled(group_type, m)).map(|(a, d)| a + d).collect();
    let mut q = alternating_sum(group_type, m, &shifted).exact_div(&mono(&vr, delta_doubled(group_type, m)))?;
    for a in positive_roots_doubled(group_type, m) {
        let neg: Vec<i32> = a.iter().map(|x| -x).collect();
        q = q.exact_div(&(IntPoly::one() - mono(&vr, neg)))?;
    }
    Ok(q)
}

/// Applies a Weyl group element to the torus variables of a polynomial.
pub fn act(w: &WeylGroupElement, f: &IntPoly) -> Result<IntPoly> {
    let m = w.perm.len();
    let vars = torus_vars(m);
    let vr = var_refs(&vars);
    let terms = torus_terms(f, m)?;
    Ok(IntPoly::from_terms(&vr, terms.into_iter().map(|(e, c)| (w.apply(&e), c))))
}

/// Terms of `f` with exponents aligned to `y1..ym`; other variables are rejected.
pub fn torus_terms(f: &IntPoly, m: usize) -> Result<Vec<(Vec<i32>, BigInt)>> {
    let vars = torus_vars(m);
    let pos: Vec<usize> = f
        .vars()
        .iter()
        .map(|v| {
            vars.iter()
                .position(|u| u == v)
                .ok_or_else(|| Error::Domain(format!("variable {} is not a torus variable of rank {}", v, m)))
        })
        .collect::<Result<_>>()?;
    Ok(f.terms()
        .map(|(e, c)| {
            let mut k = vec![0; m];
            for (i, &p) in pos.iter().enumerate() {
                k[p] = e[i];
            }
            (k, c.clone())
        })
        .collect())
}

/// Memoized characters, safe to share across threads.
#[derive(Default)]
pub struct CharacterCache {
    map: Mutex<HashMap<(GroupType, Vec<i32>), IntPoly>>,
}

impl CharacterCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn character(&self, lam: &Weight) -> Result<IntPoly> {
        let key = (lam.group_type(), lam.doubled().to_vec());
        if let Some(p) = self.map.lock().unwrap().get(&key) {
            return Ok(p.clone());
        }
        let p = weyl_character(lam.group_type(), lam.rank(), lam)?;
        self.map.lock().unwrap().insert(key, p.clone());
        Ok(p)
    }

    /// `chi_{sigma_q}` on `SO(2m)`; for `q = m` the sum of both half-spin-type pieces.
    pub fn sigma(&self, m: usize, q: usize) -> Result<IntPoly> {
        if q > m {
            return Err(Error::Domain(format!("sigma_{} undefined in rank {}", q, m)));
        }
        let plus = Weight::fundamental(GroupType::D, m, q);
        if q < m || m == 0 {
            return self.character(&plus);
        }
        let mut minus = plus.doubled().to_vec();
        minus[m - 1] = -minus[m - 1];
        let minus = Weight::new(GroupType::D, minus)?;
        Ok(self.character(&plus)?.add_ref(&self.character(&minus)?))
    }

    /// `chi_{tau_q}` on `SO(2m+1)`.
    pub fn tau(&self, m: usize, q: usize) -> Result<IntPoly> {
        if q > m {
            return Err(Error::Domain(format!("tau_{} undefined in rank {}", q, m)));
        }
        self.character(&Weight::fundamental(GroupType::B, m, q))
    }
}

/// Splits a Weyl-invariant polynomial into irreducible characters by peeling leading terms.
pub fn decompose(group_type: GroupType, m: usize, f: &IntPoly, cache: &CharacterCache) -> Result<Vec<(Weight, BigInt)>> {
    let mut rest = f.clone();
    let mut out = Vec::new();
    while !rest.is_zero() {
        let terms = torus_terms(&rest, m)?;
        let (e, c) = terms.iter().max_by(|a, b| a.0.cmp(&b.0)).cloned().unwrap();
        let lam = Weight::new(group_type, e)?;
        if !lam.is_dominant() {
            return Err(Error::Domain(format!("leading weight {} is not dominant; input not Weyl-invariant", lam)));
        }
        let chi = cache.character(&lam)?;
        rest = rest.sub_ref(&chi.scale(&c));
        out.push((lam, c));
    }
    Ok(out)
}

/// Dimension of a character: its value at the identity.
pub fn dimension(chi: &IntPoly) -> BigInt {
    chi.sum_coefficients()
}

/// Restriction identity `tau_k | SO(2m) = sigma_k + sigma_{k-1}`.
pub fn branch_check_km(m: usize, k: usize) -> bool {
    branch_check_km_with(m, k, &CharacterCache::new()).unwrap_or(false)
}

pub fn branch_check_km_with(m: usize, k: usize, cache: &CharacterCache) -> Result<bool> {
    if k > m || m == 0 {
        return Err(Error::Domain(format!("need 0 <= k <= m, got k={} m={}", k, m)));
    }
    let lhs = cache.tau(m, k)?;
    let rhs = if k == 0 { cache.sigma(m, 0)? } else { cache.sigma(m, k)?.add_ref(&cache.sigma(m, k - 1)?) };
    Ok(lhs == rhs)
}

fn count_gapped(lo: i64, hi: i64, k: i64) -> u64 {
    if k == 0 {
        return 1;
    }
    (lo..=hi).map(|j| count_gapped(j + 2, hi, k - 1)).sum()
}

/// Number of `k`-tuples in `{1..n-1}` with consecutive gaps at least two, by enumeration.
pub fn n0_comb(n: i64, k: i64) -> Result<u64> {
    if k < 0 || n < 0 {
        return Err(Error::Domain(format!("N0({}, {}) needs nonnegative arguments", n, k)));
    }
    Ok(count_gapped(1, n - 1, k))
}

pub fn n_comb(n: i64, k: i64) -> Result<u64> {
    if k < 0 || 2 * k > n {
        return Err(Error::Domain(format!("N({}, {}) needs 0 <= 2k <= n", n, k)));
    }
    if k == 0 {
        return Ok(1);
    }
    Ok(n0_comb(n, k)? + n0_comb(n - 2, k - 1)?)
}

/// Table of `N(n, k)` values consulted by the identity checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NTable {
    values: HashMap<(i64, i64), u64>,
    n_max: i64,
}

impl NTable {
    pub fn new(n_max: i64) -> Result<Self> {
        let mut values = HashMap::new();
        for n in 0..=n_max {
            for k in 0..=n / 2 {
                values.insert((n, k), n_comb(n, k)?);
            }
        }
        Ok(NTable { values, n_max })
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn get(&self, n: i64, k: i64) -> Result<u64> {
        self.values
            .get(&(n, k))
            .copied()
            .ok_or_else(|| Error::Domain(format!("N({}, {}) outside table", n, k)))
    }

    /// Overwrites one entry; used to exercise failure paths.
    pub fn corrupt(&mut self, n: i64, k: i64, value: u64) {
        self.values.insert((n, k), value);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn push(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(IdentityCheck { name: name.into(), passed });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect()
    }

    pub fn extend(&mut self, other: IdentityReport) {
        self.checks.extend(other.checks);
    }
}

/// `c_s`: `t^{2s} + t^{-2s}` for `s > 0` and `1` for `s = 0`.
pub fn cosh_basis(s: i32) -> IntPoly {
    if s == 0 {
        return IntPoly::one();
    }
    IntPoly::monomial(BigInt::one(), &[("t", 2 * s)]) + IntPoly::monomial(BigInt::one(), &[("t", -2 * s)])
}

/// `2 cosh(l) = t^2 + t^{-2}`.
pub fn two_cosh() -> IntPoly {
    cosh_basis(1)
}

pub fn verify_n_recursion(n_max: i64) -> IdentityReport {
    match NTable::new(n_max) {
        Ok(table) => verify_n_recursion_with(&table, n_max),
        Err(_) => {
            let mut r = IdentityReport::default();
            r.push(format!("N table up to {}", n_max), false);
            r
        }
    }
}

pub fn verify_n_recursion_with(table: &NTable, n_max: i64) -> IdentityReport {
    let mut report = IdentityReport::default();
    let get = |n: i64, k: i64| table.get(n, k).ok();
    for n in 0..=n_max {
        for k in 0..=n / 2 {
            let direct = n_comb(n, k).ok();
            report.push(format!("N({},{}) matches enumeration", n, k), direct.is_some() && direct == get(n, k));
        }
    }
    for n in 3..=n_max {
        for k in 1..=(n - 1) / 2 {
            let ok = match (get(n, k), get(n - 1, k), get(n - 2, k - 1)) {
                (Some(a), Some(b), Some(c)) => a == b + c,
                _ => false,
            };
            report.push(format!("N({},{}) = N({},{}) + N({},{})", n, k, n - 1, k, n - 2, k - 1), ok);
        }
    }
    for k in 1..=n_max / 2 {
        report.push(format!("N({},{}) = 2", 2 * k, k), get(2 * k, k) == Some(2));
    }
    for k in 1..=n_max {
        let mut lhs = IntPoly::zero();
        let mut ok = true;
        for j in 0..=k / 2 {
            match get(k, j) {
                Some(v) => {
                    let term = two_cosh().pow((k - 2 * j) as u32).scale(&BigInt::from(v));
                    lhs = if j % 2 == 0 { lhs.add_ref(&term) } else { lhs.sub_ref(&term) };
                }
                None => ok = false,
            }
        }
        report.push(format!("cosh multiple-angle identity k={}", k), ok && lhs == cosh_basis(k as i32));
    }
    report
}

/// Elementary symmetric sum over `j_1 < ... < j_k` of `prod 2cos(theta_{j_i})`.
pub fn s_poly(m: usize, k: usize) -> IntPoly {
    let vars = torus_vars(m);
    let cos2: Vec<IntPoly> = vars
        .iter()
        .map(|v| IntPoly::monomial(BigInt::one(), &[(v, 2)]) + IntPoly::monomial(BigInt::one(), &[(v, -2)]))
        .collect();
    (0..m)
        .combinations(k)
        .map(|idx| idx.iter().fold(IntPoly::one(), |acc, &i| acc.mul_ref(&cos2[i])))
        .fold(IntPoly::zero(), |a, b| a.add_ref(&b))
}

/// `2cosh(l) - 2cos(theta_j)` in `t` and `y_j`.
pub fn cosh_minus_cos(var: &str) -> IntPoly {
    two_cosh() - IntPoly::monomial(BigInt::one(), &[(var, 2)]) - IntPoly::monomial(BigInt::one(), &[(var, -2)])
}

/// Product expansion `prod_j (2cosh l - 2cos theta_j) = sum_k (-1)^k (2cosh l)^{m-k} S_{m,k}`.
pub fn verify_smk_product(m: usize) -> bool {
    let lhs = torus_vars(m).iter().fold(IntPoly::one(), |acc, v| acc.mul_ref(&cosh_minus_cos(v)));
    let rhs = (0..=m).fold(IntPoly::zero(), |acc, k| {
        let term = two_cosh().pow((m - k) as u32).mul_ref(&s_poly(m, k));
        if k % 2 == 0 { acc.add_ref(&term) } else { acc.sub_ref(&term) }
    });
    lhs == rhs
}

pub fn verify_smk_decomposition(m: usize, k: usize) -> bool {
    let Ok(table) = NTable::new(2 * m as i64 + 2) else { return false };
    verify_smk_decomposition_with(m, k, &table, &CharacterCache::new()).unwrap_or(false)
}

pub fn verify_smk_decomposition_with(m: usize, k: usize, table: &NTable, cache: &CharacterCache) -> Result<bool> {
    if k > m {
        return Err(Error::Domain(format!("need 0 <= k <= m, got k={} m={}", k, m)));
    }
    let lhs = s_poly(m, k);
    let mut rhs = IntPoly::zero();
    for j in 0..=k / 2 {
        let n = table.get((m + 2 * j - k) as i64, j as i64)?;
        // SO(0) is trivial
        let chi = if m == 0 { IntPoly::one() } else { cache.sigma(m, k - 2 * j)? };
        let term = chi.scale(&BigInt::from(n));
        rhs = if j % 2 == 0 { rhs.add_ref(&term) } else { rhs.sub_ref(&term) };
    }
    Ok(lhs == rhs)
}

/// Runs every character identity for ranks up to `max_rank` in parallel.
pub fn character_suite(max_rank: usize, table: &NTable, cache: &CharacterCache) -> IdentityReport {
    let mut report = IdentityReport::default();
    let smk: Vec<(usize, usize, bool)> = (1..=max_rank)
        .flat_map(|m| (0..=m).map(move |k| (m, k)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(m, k)| (m, k, verify_smk_decomposition_with(m, k, table, cache).unwrap_or(false)))
        .collect();
    for (m, k, ok) in smk {
        report.push(format!("S_{{{},{}}} decomposition", m, k), ok);
    }
    for m in 1..=max_rank {
        report.push(format!("S product expansion m={}", m), verify_smk_product(m));
        for k in 0..=m {
            report.push(
                format!("tau_{} restriction to SO({})", k, 2 * m),
                branch_check_km_with(m, k, cache).unwrap_or(false),
            );
        }
    }
    report
}

/// Checks that a polynomial is fixed by every element of the Weyl group.
pub fn is_weyl_invariant(group_type: GroupType, m: usize, f: &IntPoly) -> bool {
    weyl_group(group_type, m).iter().all(|w| act(w, f).map(|g| &g == f).unwrap_or(false))
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Sign helper for alternating sums.
pub fn alt_sign(q: usize) -> BigInt {
    if q % 2 == 0 { BigInt::one() } else { -BigInt::one() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn y(j: usize, e: i32) -> IntPoly {
        IntPoly::monomial(BigInt::one(), &[(&format!("y{}", j), e)])
    }

    #[test]
    fn group_orders() {
        assert_eq!(weyl_group(GroupType::B, 2).len(), 8);
        assert_eq!(weyl_group(GroupType::D, 3).len(), 24);
        assert_eq!(weyl_group(GroupType::B, 4).len(), 384);
        assert_eq!(weyl_group(GroupType::D, 4).len(), 192);
        assert_eq!(weyl_group(GroupType::D, 1).len(), 1);
    }

    #[test]
    fn signs_agree_with_determinants() {
        for gt in [GroupType::B, GroupType::D] {
            for m in 1..=4 {
                for w in weyl_group(gt, m) {
                    assert_eq!(w.sign, w.matrix_det());
                    if gt == GroupType::D {
                        assert_eq!(w.signs.iter().map(|&s| s as i32).product::<i32>(), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn d2_elements_and_signs() {
        let w = weyl_group(GroupType::D, 2);
        let mut seen: Vec<(Vec<usize>, Vec<i8>, i8)> = w.iter().map(|e| (e.perm.clone(), e.signs.clone(), e.sign)).collect();
        seen.sort();
        let mut expected = vec![
            (vec![0, 1], vec![1, 1], 1),
            (vec![0, 1], vec![-1, -1], 1),
            (vec![1, 0], vec![1, 1], -1),
            (vec![1, 0], vec![-1, -1], -1),
        ];
        expected.sort();
        assert_eq!(seen, expected);
    }

    #[test]
    fn denominator_identity() {
        for gt in [GroupType::B, GroupType::D] {
            for m in 1..=4 {
                assert_eq!(weyl_denominator(gt, m), alternating_sum(gt, m, &delta_doubled(gt, m)));
            }
        }
    }

    #[test]
    fn d2_vector_character_by_brute_force() {
        let lam = Weight::integral(GroupType::D, &[1, 0]);
        let chi = weyl_character(GroupType::D, 2, &lam).unwrap();
        let expected = y(1, 2) + y(1, -2) + y(2, 2) + y(2, -2);
        assert_eq!(chi, expected);
        let num = alternating_sum(GroupType::D, 2, &[4, 0]);
        let den = alternating_sum(GroupType::D, 2, &[2, 0]);
        assert_eq!(num.exact_div(&den).unwrap(), expected);
    }

    #[test]
    fn trivial_character() {
        for m in 1..=4 {
            let lam = Weight::fundamental(GroupType::D, m, 0);
            assert_eq!(weyl_character(GroupType::D, m, &lam).unwrap(), IntPoly::one());
        }
    }

    #[test]
    fn spin7_spin_representation() {
        let lam = Weight::new(GroupType::B, vec![1, 1, 1]).unwrap();
        assert!(!lam.is_integral());
        let chi = weyl_character(GroupType::B, 3, &lam).unwrap();
        assert_eq!(chi.len(), 8);
        assert_eq!(dimension(&chi), BigInt::from(8));
        assert_eq!(lam.to_string(), "(1/2,1/2,1/2)");
    }

    #[test]
    fn dimensions_match_binomials() {
        let cache = CharacterCache::new();
        for m in 1..=4usize {
            for q in 0..=m {
                assert_eq!(dimension(&cache.tau(m, q).unwrap()), binomial(2 * m as u64 + 1, q as u64));
                if q < m {
                    assert_eq!(dimension(&cache.sigma(m, q).unwrap()), binomial(2 * m as u64, q as u64));
                }
            }
            assert_eq!(dimension(&cache.sigma(m, m).unwrap()), binomial(2 * m as u64, m as u64));
        }
    }

    #[test]
    fn weyl_dimension_formula_oracle() {
        // prod_{alpha>0} <lam+delta, alpha> / <delta, alpha>
        let cache = CharacterCache::new();
        for (gt, m, lam) in [
            (GroupType::B, 3, vec![3, 1, 1]),
            (GroupType::B, 3, vec![4, 0, 0]),
            (GroupType::B, 3, vec![2, 2, 0]),
            (GroupType::D, 3, vec![2, 2, -2]),
            (GroupType::D, 4, vec![4, 2, 0, 0]),
        ] {
            let w = Weight::new(gt, lam.clone()).unwrap();
            let d = delta_doubled(gt, m);
            let mut num = Ratio::from_integer(BigInt::one());
            for a in positive_roots_doubled(gt, m) {
                let ip = |v: &[i32]| v.iter().zip(&a).map(|(x, y)| (x * y) as i64).sum::<i64>();
                let shifted: Vec<i32> = lam.iter().zip(&d).map(|(x, y)| x + y).collect();
                num = num * Ratio::new(BigInt::from(ip(&shifted)), BigInt::from(ip(&d)));
            }
            assert_eq!(Ratio::from_integer(dimension(&cache.character(&w).unwrap())), num);
        }
    }

    #[test]
    fn dominance_rules() {
        assert!(Weight::integral(GroupType::D, &[1, 1, -1]).is_dominant());
        assert!(!Weight::integral(GroupType::B, &[1, 1, -1]).is_dominant());
        assert!(!Weight::integral(GroupType::D, &[0, 1]).is_dominant());
        assert!(Weight::integral(GroupType::D, &[-1]).is_dominant());
        assert!(Weight::new(GroupType::B, vec![1, 2]).is_err());
        assert!(weyl_character(GroupType::B, 2, &Weight::integral(GroupType::B, &[0, 1])).is_err());
    }

    #[test]
    fn invariance_under_weyl_group() {
        let cache = CharacterCache::new();
        for gt in [GroupType::B, GroupType::D] {
            for m in 1..=4 {
                for q in 0..=m {
                    let lam = Weight::fundamental(gt, m, q);
                    let chi = cache.character(&lam).unwrap();
                    assert!(is_weyl_invariant(gt, m, &chi), "{:?}{} q={}", gt, m, q);
                }
            }
        }
        let chi = cache.character(&Weight::integral(GroupType::D, &[2, 1, 0])).unwrap();
        assert!(is_weyl_invariant(GroupType::D, 3, &chi));
    }

    #[test]
    fn branching_identities() {
        assert!(branch_check_km(2, 1));
        assert!(branch_check_km(3, 3));
        assert!(branch_check_km(2, 0));
        for m in 1..=4 {
            for k in 0..=m {
                assert!(branch_check_km(m, k));
            }
        }
    }

    #[test]
    fn n_values() {
        assert_eq!(n_comb(3, 1).unwrap(), 3);
        assert_eq!(n_comb(4, 2).unwrap(), 2);
        assert_eq!(n_comb(7, 0).unwrap(), 1);
        assert_eq!(n_comb(2, 1).unwrap(), 2);
        assert!(n0_comb(3, -1).is_err());
        assert!(n_comb(3, -1).is_err());
        for k in 1..=6 {
            assert_eq!(n_comb(2 * k, k).unwrap(), 2);
        }
        for n in 2..=12 {
            assert_eq!(n_comb(n, 1).unwrap(), n as u64);
        }
    }

    #[test]
    fn n0_closed_form_oracle() {
        for n in 0..=14i64 {
            for k in 0..=n / 2 {
                assert_eq!(BigInt::from(n0_comb(n, k).unwrap()), binomial((n - k) as u64, k as u64));
            }
        }
    }

    #[test]
    fn n_recursion_report() {
        let r = verify_n_recursion(12);
        assert!(r.all_passed(), "{:?}", r.failures());
        let k2 = two_cosh().pow(2) - IntPoly::from_int(2);
        assert_eq!(k2, cosh_basis(2));
    }

    #[test]
    fn corrupted_table_is_named() {
        let mut t = NTable::new(12).unwrap();
        t.corrupt(6, 2, 99);
        let r = verify_n_recursion_with(&t, 12);
        assert!(!r.all_passed());
        assert!(r.failures().iter().any(|f| f.contains("N(6,2)")));
    }

    #[test]
    fn s_poly_small_cases() {
        assert_eq!(s_poly(3, 0), IntPoly::one());
        assert_eq!(s_poly(2, 1), y(1, 2) + y(1, -2) + y(2, 2) + y(2, -2));
        for m in 1..=6 {
            assert!(verify_smk_product(m));
        }
    }

    #[test]
    fn smk_decomposition_small() {
        assert!(verify_smk_decomposition(2, 1));
        assert!(verify_smk_decomposition(2, 2));
        for m in 1..=4 {
            assert!(verify_smk_decomposition(m, 0));
            for k in 0..=m {
                assert!(verify_smk_decomposition(m, k), "m={} k={}", m, k);
            }
        }
    }

    #[test]
    fn decomposition_round_trip() {
        let cache = CharacterCache::new();
        let a = cache.tau(3, 1).unwrap();
        let prod = a.mul_ref(&a);
        let parts = decompose(GroupType::B, 3, &prod, &cache).unwrap();
        let mut rebuilt = IntPoly::zero();
        for (w, c) in &parts {
            rebuilt = rebuilt.add_ref(&cache.character(w).unwrap().scale(c));
        }
        assert_eq!(rebuilt, prod);
        assert_eq!(parts.len(), 3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn s_poly_is_signed_permutation_symmetric(m in 1usize..4, k in 0usize..4, idx in 0usize..48) {
            prop_assume!(k <= m);
            let f = s_poly(m, k);
            let group = weyl_group(GroupType::B, m);
            let w = &group[idx % group.len()];
            prop_assert_eq!(act(w, &f).unwrap(), f);
        }

        #[test]
        fn n0_matches_binomial(n in 0i64..15, k in 0i64..8) {
            prop_assume!(2 * k <= n);
            prop_assert_eq!(BigInt::from(n0_comb(n, k).unwrap()), binomial((n - k) as u64, k as u64));
        }
    }
}
