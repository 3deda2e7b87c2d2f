//! Multivariate Laurent polynomials and formal character sums.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Scalar coefficients accepted by [`LaurentPoly`].
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// `Some(q)` with `q * rhs == self`, or `None` when no such `q` exists.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn is_negative(&self) -> bool;
}

macro_rules! int_coefficient {
    ($($t:ty),+) => {$(
        impl Coefficient for $t {
            fn div_exact(&self, rhs: &Self) -> Option<Self> {
                if *rhs == 0 {
                    return None;
                }
                let (q, r) = self.div_rem(rhs);
                (r == 0).then_some(q)
            }
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn is_negative(&self) -> bool {
                *self < 0
            }
        }
    )+};
}
int_coefficient!(i32, i64, i128);

macro_rules! float_coefficient {
    ($($t:ty),+) => {$(
        impl Coefficient for $t {
            fn div_exact(&self, rhs: &Self) -> Option<Self> {
                (*rhs != 0.0).then(|| *self / *rhs)
            }
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn is_negative(&self) -> bool {
                *self < 0.0
            }
        }
    )+};
}
float_coefficient!(f32, f64);

impl Coefficient for BigInt {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        r.is_zero().then_some(q)
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Coefficient for BigRational {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        (!rhs.is_zero()).then(|| self / rhs)
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Coefficient for Ratio<i64> {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        (!rhs.is_zero()).then(|| self / rhs)
    }
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
    fn is_negative(&self) -> bool {
        *self.numer() < 0
    }
}

fn var_key(name: &str) -> (String, u64, String) {
    let digits = name.len() - name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (head, tail) = name.split_at(name.len() - digits);
    let idx = tail.parse::<u64>().unwrap_or(0);
    (head.to_string(), idx, name.to_string())
}

fn sort_vars(vars: &mut [String]) {
    vars.sort_by_key(|v| var_key(v));
}

/// Exact multivariate Laurent polynomial in canonical form.
///
/// Variables are kept sorted (alphabetic prefix, then numeric suffix) and
/// pruned when unused, so structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly<C> {
    vars: Vec<String>,
    terms: BTreeMap<Vec<i32>, C>,
}

impl<C: Coefficient> Default for LaurentPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        LaurentPoly { vars: Vec::new(), terms }
    }

    pub fn from_int(v: i64) -> Self {
        Self::constant(C::from_i64(v))
    }

    /// A single variable with exponent one.
    pub fn var(name: &str) -> Self {
        Self::monomial(C::one(), &[(name, 1)])
    }

    /// `c * prod name^exp`.
    pub fn monomial(c: C, powers: &[(&str, i32)]) -> Self {
        let vars: Vec<&str> = powers.iter().map(|(n, _)| *n).collect();
        let exps: Vec<i32> = powers.iter().map(|(_, e)| *e).collect();
        Self::from_terms(&vars, [(exps, c)])
    }

    /// Builds a polynomial from exponent vectors aligned with `vars`; duplicate exponents are summed.
    pub fn from_terms<I>(vars: &[&str], terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i32>, C)>,
    {
        let mut sorted: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        sort_vars(&mut sorted);
        sorted.dedup();
        assert_eq!(sorted.len(), vars.len(), "duplicate variable names");
        let perm: Vec<usize> = sorted
            .iter()
            .map(|s| vars.iter().position(|v| v == s).unwrap())
            .collect();
        let mut map: BTreeMap<Vec<i32>, C> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length mismatch");
            let key: Vec<i32> = perm.iter().map(|&i| e[i]).collect();
            accumulate(&mut map, key, c);
        }
        LaurentPoly { vars: sorted, terms: map }.normalized()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as (exponent vector aligned with [`Self::vars`], coefficient), in increasing lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, powers: &[(&str, i32)]) -> C {
        let mut key = vec![0; self.vars.len()];
        for (name, e) in powers {
            match self.vars.iter().position(|v| v == name) {
                Some(i) => key[i] = *e,
                None if *e == 0 => {}
                None => return C::zero(),
            }
        }
        self.terms.get(&key).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&[])
    }

    fn normalized(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.keys().any(|e| e[i] != 0))
            .collect();
        if used.iter().all(|&u| u) {
            return self;
        }
        let keep: Vec<usize> = (0..self.vars.len()).filter(|&i| used[i]).collect();
        let vars = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = self
            .terms
            .into_iter()
            .map(|(e, c)| (keep.iter().map(|&i| e[i]).collect(), c))
            .collect();
        LaurentPoly { vars, terms }
    }

    /// Re-expresses the term map over a sorted superset of the variables.
    fn aligned(&self, universe: &[String]) -> BTreeMap<Vec<i32>, C> {
        if universe == self.vars.as_slice() {
            return self.terms.clone();
        }
        let pos: Vec<usize> = self
            .vars
            .iter()
            .map(|v| universe.iter().position(|u| u == v).expect("variable not in universe"))
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut key = vec![0; universe.len()];
                for (i, &p) in pos.iter().enumerate() {
                    key[p] = e[i];
                }
                (key, c.clone())
            })
            .collect()
    }

    fn union_vars(&self, other: &Self) -> Vec<String> {
        if self.vars == other.vars {
            return self.vars.clone();
        }
        let set: BTreeSet<&String> = self.vars.iter().chain(other.vars.iter()).collect();
        let mut v: Vec<String> = set.into_iter().cloned().collect();
        sort_vars(&mut v);
        v
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let universe = self.union_vars(other);
        let mut terms = self.aligned(&universe);
        for (e, c) in other.aligned(&universe) {
            accumulate(&mut terms, e, c);
        }
        LaurentPoly { vars: universe, terms }.normalized()
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let universe = self.union_vars(other);
        let a = self.aligned(&universe);
        let b = other.aligned(&universe);
        let mut terms: BTreeMap<Vec<i32>, C> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                accumulate(&mut terms, e, ca.clone() * cb.clone());
            }
        }
        LaurentPoly { vars: universe, terms }.normalized()
    }

    pub fn scale(&self, c: &C) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x.clone() * c.clone())).collect(),
        }
        .normalized()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Exact quotient `num / den`, or `NotDivisible` when none exists.
    ///
    /// Both operands are shifted to ordinary polynomials and divided by
    /// leading-term elimination in lexicographic order.
    pub fn exact_div(&self, den: &Self) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("division by the zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let universe = self.union_vars(den);
        let n = universe.len();
        let mut rem = self.aligned(&universe);
        let d = den.aligned(&universe);
        let nmin = min_exponents(rem.keys(), n);
        let dmin = min_exponents(d.keys(), n);
        rem = rem.into_iter().map(|(e, c)| (sub_vec(&e, &nmin), c)).collect();
        let d: Vec<(Vec<i32>, C)> = d.into_iter().map(|(e, c)| (sub_vec(&e, &dmin), c)).collect();
        let (dl_e, dl_c) = d.last().cloned().expect("nonzero divisor");
        let mut quotient: BTreeMap<Vec<i32>, C> = BTreeMap::new();
        while let Some((e, c)) = rem.last_key_value() {
            let qe = sub_vec(e, &dl_e);
            if qe.iter().any(|&x| x < 0) {
                return Err(Error::NotDivisible(format!(
                    "leading monomial {:?} not divisible by {:?}",
                    e, dl_e
                )));
            }
            let qc = c.div_exact(&dl_c).ok_or_else(|| {
                Error::NotDivisible(format!("coefficient {} not divisible by {}", c, dl_c))
            })?;
            for (de, dc) in &d {
                let key: Vec<i32> = qe.iter().zip(de).map(|(x, y)| x + y).collect();
                accumulate(&mut rem, key, -(qc.clone() * dc.clone()));
            }
            quotient.insert(qe, qc);
        }
        let shift = sub_vec(&nmin, &dmin);
        let terms = quotient
            .into_iter()
            .map(|(e, c)| (e.iter().zip(&shift).map(|(x, y)| x + y).collect(), c))
            .collect();
        Ok(LaurentPoly { vars: universe, terms }.normalized())
    }

    /// Multiplies every exponent of `name` by `factor` (for instance `t -> t^2`).
    pub fn scale_exponent(&self, name: &str, factor: i32) -> Self {
        let Some(i) = self.vars.iter().position(|v| v == name) else {
            return self.clone();
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut k = e.clone();
            k[i] *= factor;
            accumulate(&mut terms, k, c.clone());
        }
        LaurentPoly { vars: self.vars.clone(), terms }.normalized()
    }

    /// Substitutes each listed variable by a monomial `prod target^exp`.
    pub fn substitute_monomials(&self, subs: &[(&str, Vec<(&str, i32)>)]) -> Self {
        let mut names: Vec<String> = self.vars.clone();
        for (_, image) in subs {
            for (v, _) in image {
                if !names.iter().any(|n| n == v) {
                    names.push(v.to_string());
                }
            }
        }
        sort_vars(&mut names);
        let images: Vec<Vec<i32>> = self
            .vars
            .iter()
            .map(|v| {
                let mut img = vec![0; names.len()];
                match subs.iter().find(|(s, _)| s == v) {
                    Some((_, image)) => {
                        for (w, e) in image {
                            img[names.iter().position(|n| n == w).unwrap()] += e;
                        }
                    }
                    None => img[names.iter().position(|n| n == v).unwrap()] = 1,
                }
                img
            })
            .collect();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut key = vec![0; names.len()];
            for (i, &x) in e.iter().enumerate() {
                for (k, &y) in images[i].iter().enumerate() {
                    key[k] += x * y;
                }
            }
            accumulate(&mut terms, key, c.clone());
        }
        LaurentPoly { vars: names, terms }.normalized()
    }

    /// Sets each listed variable to one.
    pub fn eval_at_one(&self, names: &[&str]) -> Self {
        let subs: Vec<(&str, Vec<(&str, i32)>)> = names.iter().map(|n| (*n, Vec::new())).collect();
        self.substitute_monomials(&subs)
    }

    /// Sum of all coefficients, i.e. the value at every variable equal to one.
    pub fn sum_coefficients(&self) -> C {
        self.terms.values().cloned().fold(C::zero(), |a, b| a + b)
    }

    /// Groups terms by the exponent of `name`; the values no longer contain `name`.
    pub fn collect_by(&self, name: &str) -> BTreeMap<i32, Self> {
        let mut out: BTreeMap<i32, Self> = BTreeMap::new();
        let Some(i) = self.vars.iter().position(|v| v == name) else {
            if !self.is_zero() {
                out.insert(0, self.clone());
            }
            return out;
        };
        let rest: Vec<String> = self.vars.iter().filter(|v| *v != name).cloned().collect();
        let mut buckets: BTreeMap<i32, BTreeMap<Vec<i32>, C>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut k = e.clone();
            let d = k.remove(i);
            buckets.entry(d).or_default().insert(k, c.clone());
        }
        for (d, terms) in buckets {
            out.insert(d, LaurentPoly { vars: rest.clone(), terms }.normalized());
        }
        out
    }

    /// Evaluates at complex points; variables missing from `point` are an error.
    pub fn eval<F: Float>(&self, point: &[(&str, Complex<F>)]) -> Result<Complex<F>> {
        let vals: Vec<Complex<F>> = self
            .vars
            .iter()
            .map(|v| {
                point
                    .iter()
                    .find(|(n, _)| n == v)
                    .map(|(_, z)| *z)
                    .ok_or_else(|| Error::Domain(format!("no value for variable {}", v)))
            })
            .collect::<Result<_>>()?;
        let mut acc = Complex::new(F::zero(), F::zero());
        for (e, c) in &self.terms {
            let mut term = Complex::new(F::from(c.to_f64()).unwrap(), F::zero());
            for (z, &k) in vals.iter().zip(e) {
                term = term * z.powi(k);
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), f(c))).collect(),
        }
        .normalized()
    }

    /// Largest term under the lexicographic order of the variable list.
    pub fn leading_term(&self) -> Option<(&Vec<i32>, &C)> {
        self.terms.last_key_value()
    }

    /// Canonical rendering: monomials in decreasing lex order with explicit signs.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(e)
                .filter(|(_, &k)| k != 0)
                .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{}^{}", v, k) })
                .collect();
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&format!("{}*", mag));
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl<C: Coefficient> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn accumulate<C: Coefficient>(map: &mut BTreeMap<Vec<i32>, C>, key: Vec<i32>, c: C) {
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Occupied(mut o) => {
            let v = o.get().clone() + c;
            if v.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = v;
            }
        }
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
    }
}

fn min_exponents<'a>(keys: impl Iterator<Item = &'a Vec<i32>>, n: usize) -> Vec<i32> {
    let mut m = vec![i32::MAX; n];
    for e in keys {
        for (a, &b) in m.iter_mut().zip(e) {
            *a = (*a).min(b);
        }
    }
    m
}

fn sub_vec(a: &[i32], b: &[i32]) -> Vec<i32> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl<C: Coefficient> $tr for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $m(self, rhs: Self) -> Self {
                self.$imp(&rhs)
            }
        }
        impl<'a, C: Coefficient> $tr<&'a LaurentPoly<C>> for &'a LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $m(self, rhs: &'a LaurentPoly<C>) -> LaurentPoly<C> {
                self.$imp(rhs)
            }
        }
    };
}
forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl<C: Coefficient> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl<C: Coefficient> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        self.neg_ref()
    }
}

pub fn poly_add<C: Coefficient>(a: &LaurentPoly<C>, b: &LaurentPoly<C>) -> LaurentPoly<C> {
    a.add_ref(b)
}

pub fn poly_mul<C: Coefficient>(a: &LaurentPoly<C>, b: &LaurentPoly<C>) -> LaurentPoly<C> {
    a.mul_ref(b)
}

pub fn poly_neg<C: Coefficient>(a: &LaurentPoly<C>) -> LaurentPoly<C> {
    a.neg_ref()
}

pub fn poly_exact_div<C: Coefficient>(
    num: &LaurentPoly<C>,
    den: &LaurentPoly<C>,
) -> Result<LaurentPoly<C>> {
    num.exact_div(den)
}

/// A formal character tag: a sorted tensor product of opaque atoms; the empty product is trivial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CharSymbol(Vec<String>);

impl CharSymbol {
    pub fn trivial() -> Self {
        CharSymbol(Vec::new())
    }

    /// `"1"` parses to the trivial symbol; `"a⊗b"` to a two-atom product.
    pub fn new(label: &str) -> Self {
        if label == "1" || label.is_empty() {
            return Self::trivial();
        }
        let mut atoms: Vec<String> = label.split('⊗').map(|s| s.to_string()).collect();
        atoms.sort();
        CharSymbol(atoms)
    }

    pub fn atoms(&self) -> &[String] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut atoms: Vec<String> = self.0.iter().chain(other.0.iter()).cloned().collect();
        atoms.sort();
        CharSymbol(atoms)
    }
}

impl fmt::Display for CharSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&self.0.join("⊗"))
        }
    }
}

/// Finite sum of formal character symbols with Laurent polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalCharSum<C> {
    terms: BTreeMap<CharSymbol, LaurentPoly<C>>,
}

impl<C: Coefficient> Default for FormalCharSum<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> FormalCharSum<C> {
    pub fn zero() -> Self {
        FormalCharSum { terms: BTreeMap::new() }
    }

    pub fn single(coeff: LaurentPoly<C>, symbol: CharSymbol) -> Self {
        let mut s = Self::zero();
        s.add_term(coeff, symbol);
        s
    }

    pub fn add_term(&mut self, coeff: LaurentPoly<C>, symbol: CharSymbol) {
        let merged = match self.terms.remove(&symbol) {
            Some(old) => old.add_ref(&coeff),
            None => coeff,
        };
        if !merged.is_zero() {
            self.terms.insert(symbol, merged);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CharSymbol, &LaurentPoly<C>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, symbol: &CharSymbol) -> LaurentPoly<C> {
        self.terms.get(symbol).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(c.clone(), s.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        FormalCharSum { terms: self.terms.iter().map(|(s, c)| (s.clone(), c.neg_ref())).collect() }
    }

    pub fn scale(&self, p: &LaurentPoly<C>) -> Self {
        let mut out = Self::zero();
        for (s, c) in &self.terms {
            out.add_term(c.mul_ref(p), s.clone());
        }
        out
    }

    /// Product in which symbols multiply as tensor products.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (sa, ca) in &self.terms {
            for (sb, cb) in &other.terms {
                out.add_term(ca.mul_ref(cb), sa.tensor(sb));
            }
        }
        out
    }

    /// Replaces every atom by a polynomial and sums.
    pub fn evaluate(&self, dict: &BTreeMap<String, LaurentPoly<C>>) -> Result<LaurentPoly<C>> {
        let mut acc = LaurentPoly::zero();
        for (s, c) in &self.terms {
            let mut v = c.clone();
            for a in s.atoms() {
                let p = dict
                    .get(a)
                    .ok_or_else(|| Error::Domain(format!("no value for character symbol {}", a)))?;
                v = v.mul_ref(p);
            }
            acc = acc.add_ref(&v);
        }
        Ok(acc)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(s, c)| format!("({})·{}", c.render(), s))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<C: Coefficient> fmt::Display for FormalCharSum<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Builds a canonical sum from signed parts, merging like symbols.
pub fn formal_combine<C: Coefficient>(parts: &[(i32, LaurentPoly<C>, CharSymbol)]) -> FormalCharSum<C> {
    let mut out = FormalCharSum::zero();
    for (sign, coeff, sym) in parts {
        let c = if *sign < 0 { coeff.neg_ref() } else { coeff.clone() };
        out.add_term(c, sym.clone());
    }
    out
}
