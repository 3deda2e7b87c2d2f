//! Rank-one group descriptors, determinant class functions, and the
//! character expansion of the Weyl discriminant.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{Float, One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::weylchar::{cosh_basis, decompose, torus_vars, two_cosh, CharacterCache, GroupType, Weight};
use crate::{CharSymbol, Error, IntCharSum, IntPoly, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// `SO_0(n+1, 1)`.
    SO,
    /// `SU(n+1, 1)`.
    SU,
    /// `Sp(n, 1)`.
    Sp,
    FII,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::SO => "SO",
            Family::SU => "SU",
            Family::Sp => "Sp",
            Family::FII => "FII",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "so" => Ok(Family::SO),
            "su" => Ok(Family::SU),
            "sp" => Ok(Family::Sp),
            "fii" | "f2" | "f4" => Ok(Family::FII),
            _ => Err(Error::Parse(format!("unknown family {}", s))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiKind {
    One,
    SinhHalf,
    Sinh,
}

/// Polynomial form of the weight function: `1`, `2sinh(l/2)` or `2sinh(l)`.
pub fn psi_poly(kind: PsiKind) -> IntPoly {
    let one = BigInt::one();
    match kind {
        PsiKind::One => IntPoly::one(),
        PsiKind::SinhHalf => IntPoly::var("t") - IntPoly::monomial(one, &[("t", -1)]),
        PsiKind::Sinh => IntPoly::monomial(one.clone(), &[("t", 2)]) - IntPoly::monomial(one, &[("t", -2)]),
    }
}

pub fn psi_value<F: Float>(kind: PsiKind, ell: F) -> F {
    let two = F::one() + F::one();
    match kind {
        PsiKind::One => F::one(),
        PsiKind::SinhHalf => two * (ell / two).sinh(),
        PsiKind::Sinh => two * ell.sinh(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneDescriptor {
    pub family: Family,
    pub n: usize,
    pub n1: usize,
    pub n2: usize,
    /// `2 rho`.
    pub rho_doubled: i64,
    /// `2 alpha_0`.
    pub alpha0_doubled: i64,
    pub m_steps: usize,
    pub psi_kind: PsiKind,
}

impl RankOneDescriptor {
    pub fn rho(&self) -> Ratio<i64> {
        Ratio::new(self.rho_doubled, 2)
    }

    pub fn alpha0(&self) -> Ratio<i64> {
        Ratio::new(self.alpha0_doubled, 2)
    }

    pub fn label(&self) -> String {
        match self.family {
            Family::SO => format!("SO0({},1)", self.n + 1),
            Family::SU => format!("SU({},1)", self.n + 1),
            Family::Sp => format!("Sp({},1)", self.n),
            Family::FII => "FII".into(),
        }
    }

    fn check(&self) -> Result<()> {
        let ok = self.rho_doubled == (self.n1 + 2 * self.n2) as i64
            && self.rho_doubled - self.alpha0_doubled == 2 * self.m_steps as i64
            && self.alpha0_doubled >= 0;
        if ok {
            Ok(())
        } else {
            Err(Error::Logic(format!("inconsistent descriptor {:?}", self)))
        }
    }
}

pub fn descriptor(family: Family, n: usize) -> Result<RankOneDescriptor> {
    let d = match family {
        Family::SO => {
            if n < 2 {
                return Err(Error::Domain(format!("SO0(n+1,1) needs n >= 2, got {}", n)));
            }
            let odd = n % 2 == 1;
            RankOneDescriptor {
                family,
                n,
                n1: n,
                n2: 0,
                rho_doubled: n as i64,
                alpha0_doubled: i64::from(odd),
                m_steps: n / 2,
                psi_kind: if odd { PsiKind::SinhHalf } else { PsiKind::One },
            }
        }
        Family::SU => {
            if n < 2 {
                return Err(Error::Domain(format!("SU(n+1,1) needs n >= 2, got {}", n)));
            }
            RankOneDescriptor {
                family,
                n,
                n1: 2 * n,
                n2: 1,
                rho_doubled: 2 * (n as i64 + 1),
                alpha0_doubled: 2,
                m_steps: n,
                psi_kind: PsiKind::Sinh,
            }
        }
        Family::Sp => {
            if n < 2 {
                return Err(Error::Domain(format!("Sp(n,1) needs n >= 2, got {}", n)));
            }
            RankOneDescriptor {
                family,
                n,
                n1: 4 * (n - 1),
                n2: 3,
                rho_doubled: 2 * (2 * n as i64 + 1),
                alpha0_doubled: 2,
                m_steps: 2 * n,
                psi_kind: PsiKind::Sinh,
            }
        }
        Family::FII => RankOneDescriptor {
            family,
            n: 0,
            n1: 8,
            n2: 7,
            rho_doubled: 22,
            alpha0_doubled: 2,
            m_steps: 10,
            psi_kind: PsiKind::Sinh,
        },
    };
    d.check()?;
    Ok(d)
}

fn t_pow(e: i32) -> IntPoly {
    IntPoly::monomial(BigInt::one(), &[("t", e)])
}

fn y_pow(var: &str, e: i32) -> IntPoly {
    IntPoly::monomial(BigInt::one(), &[(var, e)])
}

/// `F_n = |det(t^{-1} I - t u)|` on the maximal torus of `SO(n)`.
pub fn f_det(n: usize) -> IntPoly {
    let m = n / 2;
    let mut acc = IntPoly::one();
    for v in torus_vars(m) {
        acc = acc.mul_ref(&(two_cosh() - y_pow(&v, 2) - y_pow(&v, -2)));
    }
    if n % 2 == 1 {
        acc = acc.mul_ref(&psi_poly(PsiKind::SinhHalf));
    }
    acc
}

/// `sum_{k=-r}^{r} t^{2k}`.
fn geometric_block(r: i32) -> IntPoly {
    (-r..=r).fold(IntPoly::zero(), |acc, k| acc.add_ref(&t_pow(2 * k)))
}

/// `sum_q (-1)^q c_{m-q} [sym(q)]`.
pub fn f_even_expansion(m: usize, sym: impl Fn(usize) -> CharSymbol) -> IntCharSum {
    let mut out = IntCharSum::zero();
    for q in 0..=m {
        let c = cosh_basis((m - q) as i32);
        out.add_term(if q % 2 == 0 { c } else { c.neg_ref() }, sym(q));
    }
    out
}

/// `F_{2m+1} / 2sinh(l/2) = sum_q (-1)^q (sum_{k=q-m}^{m-q} t^{2k}) [sym(q)]`.
pub fn f_odd_reduced_expansion(m: usize, sym: impl Fn(usize) -> CharSymbol) -> IntCharSum {
    let mut out = IntCharSum::zero();
    for q in 0..=m {
        let c = geometric_block((m - q) as i32);
        out.add_term(if q % 2 == 0 { c } else { c.neg_ref() }, sym(q));
    }
    out
}

fn indexed(prefix: &str, q: usize) -> CharSymbol {
    if q == 0 {
        CharSymbol::trivial()
    } else {
        CharSymbol::new(&format!("{}{}", prefix, q))
    }
}

fn indexed_suffix(prefix: &str, q: usize, suffix: &str) -> CharSymbol {
    if q == 0 {
        CharSymbol::trivial()
    } else {
        CharSymbol::new(&format!("{}{}{}", prefix, q, suffix))
    }
}

pub fn verify_f_expansion(n: usize) -> bool {
    verify_f_expansion_with(n, &CharacterCache::new()).unwrap_or(false)
}

pub fn verify_f_expansion_with(n: usize, cache: &CharacterCache) -> Result<bool> {
    if n < 2 {
        return Err(Error::Domain(format!("F_n expansion needs n >= 2, got {}", n)));
    }
    let m = n / 2;
    let mut dict = BTreeMap::new();
    let rhs = if n % 2 == 0 {
        for q in 1..=m {
            dict.insert(format!("σ_{}", q), cache.sigma(m, q)?);
        }
        f_even_expansion(m, |q| indexed("σ_", q)).evaluate(&dict)?
    } else {
        for q in 1..=m {
            dict.insert(format!("τ_{}", q), cache.tau(m, q)?);
        }
        f_odd_reduced_expansion(m, |q| indexed("τ_", q)).evaluate(&dict)?.mul_ref(&psi_poly(PsiKind::SinhHalf))
    };
    Ok(rhs == f_det(n))
}

/// Per-q virtual representations, each a formal sum with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaTable {
    pub entries: Vec<IntCharSum>,
}

impl EtaTable {
    pub fn m(&self) -> usize {
        self.entries.len() - 1
    }

    /// `sum_q (-1)^q c_{m-q} eta_q` as a formal sum with coefficients in `t`.
    pub fn recompose(&self) -> IntCharSum {
        let m = self.m();
        let mut out = IntCharSum::zero();
        for (q, eta) in self.entries.iter().enumerate() {
            let c = cosh_basis((m - q) as i32);
            let c = if q % 2 == 0 { c } else { c.neg_ref() };
            out = out.add(&eta.scale(&c));
        }
        out
    }

    pub fn render(&self) -> Vec<String> {
        self.entries.iter().map(render_virtual).collect()
    }
}

/// Renders a formal sum whose coefficients are integer constants.
pub fn render_virtual(s: &IntCharSum) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    let mut parts: Vec<(CharSymbol, BigInt)> = s.terms().map(|(k, c)| (k.clone(), c.constant_term())).collect();
    parts.sort_by_key(|(k, _)| k.atoms().len());
    for (i, (sym, c)) in parts.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if sym.is_trivial() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&sym.to_string());
        } else {
            out.push_str(&format!("{}{}", mag, sym));
        }
    }
    out
}

fn constant_sum(parts: &[(i64, CharSymbol)]) -> IntCharSum {
    let mut s = IntCharSum::zero();
    for (c, sym) in parts {
        s.add_term(IntPoly::from_int(*c), sym.clone());
    }
    s
}

/// Coefficients of a symmetric polynomial in `t` in the basis `c_s`.
pub fn cosh_coefficients(p: &IntPoly) -> Result<BTreeMap<usize, BigInt>> {
    if p.vars().iter().any(|v| v != "t") {
        return Err(Error::Domain(format!("coefficient {} is not a polynomial in t", p)));
    }
    let mut out = BTreeMap::new();
    for (e, c) in p.terms() {
        let k = e.first().copied().unwrap_or(0);
        if k % 2 != 0 {
            return Err(Error::Domain(format!("odd power t^{} in {}", k, p)));
        }
        let s = (k.abs() / 2) as usize;
        if p.coeff(&[("t", -k)]) != *c {
            return Err(Error::Domain(format!("{} is not symmetric under t -> 1/t", p)));
        }
        out.insert(s, c.clone());
    }
    Ok(out)
}

/// Reads off `eta_q` from `sum_q (-1)^q c_{m-q} eta_q`.
pub fn regroup(expansion: &IntCharSum, m: usize) -> Result<EtaTable> {
    let mut entries = vec![IntCharSum::zero(); m + 1];
    for (sym, coeff) in expansion.terms() {
        for (s, c) in cosh_coefficients(coeff)? {
            if s > m {
                return Err(Error::Domain(format!("shift {} exceeds m = {}", s, m)));
            }
            let q = m - s;
            let c = if q % 2 == 0 { c } else { -c };
            entries[q].add_term(IntPoly::constant(c), sym.clone());
        }
    }
    Ok(EtaTable { entries })
}

fn sp_sigma(q: usize) -> CharSymbol {
    indexed("σ̃_", q)
}

fn sp_tau1() -> CharSymbol {
    CharSymbol::new("τ̃_1")
}

fn sp_sigma_tau(q: usize) -> CharSymbol {
    sp_sigma(q).tensor(&sp_tau1())
}

/// Symbolic product `F_{4(n-1)}(l) * F_3(2l) / 2sinh(l)` for `Sp(n,1)`.
pub fn sp_product_expansion(n: usize) -> IntCharSum {
    let mp = 2 * n - 2;
    let f1 = f_even_expansion(mp, sp_sigma);
    let mut f2 = IntCharSum::zero();
    for (sym, c) in f_odd_reduced_expansion(1, |q| indexed("τ̃_", q)).terms() {
        f2.add_term(c.scale_exponent("t", 2), sym.clone());
    }
    f1.tensor(&f2)
}

/// The printed case list for `Sp(n,1)`; `None` where a row needs an index below zero.
pub fn sp_printed_eta(m: usize) -> Vec<Option<IntCharSum>> {
    let s = |q: i64| -> Option<CharSymbol> { (q >= 0).then(|| sp_sigma(q as usize)) };
    let st = |q: i64| -> Option<CharSymbol> { (q >= 0).then(|| sp_sigma_tau(q as usize)) };
    let mi = m as i64;
    (0..=mi)
        .map(|q| {
            let parts: Option<Vec<(i64, CharSymbol)>> = if q == 0 {
                Some(vec![(1, CharSymbol::trivial())])
            } else if q == 1 {
                s(1).map(|a| vec![(1, a)])
            } else if q == mi {
                Some(vec![(1, s(mi - 4)?), (1, s(mi - 2)?), (-1, st(mi - 2)?)])
            } else if q == mi - 1 {
                Some(vec![(2, s(mi - 3)?), (1, s(mi - 5)?), (-1, st(mi - 3)?)])
            } else if q < 4 {
                Some(vec![(1, s(q)?), (1, s(q - 2)?), (-1, st(q - 2)?)])
            } else {
                Some(vec![(1, s(q)?), (1, s(q - 2)?), (1, s(q - 4)?), (-1, st(q - 2)?)])
            };
            parts.map(|p| constant_sum(&p))
        })
        .collect()
}

fn spin_symbol(w: &Weight) -> CharSymbol {
    if w.doubled().iter().all(|&x| x == 0) {
        CharSymbol::trivial()
    } else {
        CharSymbol::new(&format!("χ{}", w))
    }
}

fn spin7(doubled: [i32; 3]) -> Weight {
    Weight::new(GroupType::B, doubled.to_vec()).expect("valid Spin(7) weight")
}

/// `F_8` on the spin representation: `prod_{s in {+-1}^3} (t^{-1} - t y^s)`.
pub fn fii_spin_factor() -> IntPoly {
    let mut acc = IntPoly::one();
    for mask in 0..8u32 {
        let e: Vec<i32> = (0..3).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        let mut powers = vec![("t", 1)];
        let names = torus_vars(3);
        for (i, name) in names.iter().enumerate() {
            powers.push((name.as_str(), e[i]));
        }
        let term = t_pow(-1) - IntPoly::monomial(BigInt::one(), &powers);
        acc = acc.mul_ref(&term);
    }
    acc
}

/// Decomposes the spin factor by powers of `t` into `Spin(7)` characters.
pub fn fii_spin_expansion(cache: &CharacterCache) -> Result<IntCharSum> {
    let mut out = IntCharSum::zero();
    for (k, coeff) in fii_spin_factor().collect_by("t") {
        for (w, c) in decompose(GroupType::B, 3, &coeff, cache)? {
            out.add_term(t_pow(k).scale(&c), spin_symbol(&w));
        }
    }
    Ok(out)
}

/// The printed `Spin(7)` combination for the spin factor, taken verbatim.
pub fn fii_printed_spin_expansion() -> IntCharSum {
    let lam = spin_symbol(&spin7([1, 1, 1]));
    let lam_e1 = spin_symbol(&spin7([3, 1, 1]));
    let e1 = spin_symbol(&spin7([2, 0, 0]));
    let e12 = spin_symbol(&spin7([2, 2, 0]));
    let e123 = spin_symbol(&spin7([2, 2, 2]));
    let two_e1 = spin_symbol(&spin7([4, 0, 0]));
    let one = CharSymbol::trivial();
    let c = cosh_basis;
    let mut s = IntCharSum::zero();
    s.add_term(c(4), one.clone());
    s.add_term(c(3).neg_ref(), lam.clone());
    for sym in [&e12, &e1, &one] {
        s.add_term(c(2), sym.clone());
    }
    for sym in [&lam, &lam_e1] {
        s.add_term(c(1).neg_ref(), sym.clone());
    }
    for sym in [&two_e1, &e123, &e12, &e1, &one] {
        s.add_term(IntPoly::from_int(2), sym.clone());
    }
    s
}

fn fii_tau(q: usize) -> CharSymbol {
    indexed_suffix("τ_", q, "∘ι₂")
}

/// `F_7(2l) / 2sinh(l)` on the vector representation.
pub fn fii_vector_expansion() -> IntCharSum {
    let mut out = IntCharSum::zero();
    for (sym, c) in f_odd_reduced_expansion(3, fii_tau).terms() {
        out.add_term(c.scale_exponent("t", 2), sym.clone());
    }
    out
}

/// Atom dictionary for evaluating `FII` symbols on the `Spin(7)` torus.
pub fn fii_dictionary(expansion: &IntCharSum, cache: &CharacterCache) -> Result<BTreeMap<String, IntPoly>> {
    let mut dict = BTreeMap::new();
    for q in 1..=3 {
        dict.insert(format!("τ_{}∘ι₂", q), cache.tau(3, q)?);
    }
    for (sym, _) in expansion.terms() {
        for atom in sym.atoms() {
            if let Some(inner) = atom.strip_prefix('χ') {
                let w = parse_weight(GroupType::B, inner)?;
                dict.insert(atom.clone(), cache.character(&w)?);
            }
        }
    }
    Ok(dict)
}

fn parse_weight(gt: GroupType, s: &str) -> Result<Weight> {
    let inner = s.trim_start_matches('(').trim_end_matches(')');
    let coords = inner
        .split(',')
        .map(|p| {
            let p = p.trim();
            match p.split_once('/') {
                Some((a, b)) => Ok(Ratio::new(parse_i64(a)?, parse_i64(b)?)),
                None => Ok(Ratio::from_integer(parse_i64(p)?)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Weight::from_coords(gt, &coords)
}

fn parse_i64(s: &str) -> Result<i64> {
    s.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{}: {}", s, e)))
}

/// True when the printed spin-factor combination equals the actual spin factor.
pub fn verify_fii_printed_expansion(cache: &CharacterCache) -> Result<bool> {
    let printed = fii_printed_spin_expansion();
    let dict = fii_dictionary(&printed, cache)?;
    Ok(printed.evaluate(&dict)? == fii_spin_factor())
}

/// Symbolic expansion of `D / psi` whose regrouping gives the `eta` table.
pub fn reduced_expansion(desc: &RankOneDescriptor, cache: &CharacterCache) -> Result<IntCharSum> {
    let m = desc.m_steps;
    Ok(match desc.family {
        Family::SO if desc.n % 2 == 0 => f_even_expansion(m, |q| indexed("σ_", q)),
        Family::SO => {
            // eta_q = sum_{k <= q} (-1)^{q-k} tau_k restricts to sigma_q.
            let mut out = IntCharSum::zero();
            for q in 0..=m {
                let c = cosh_basis((m - q) as i32);
                let c = if q % 2 == 0 { c } else { c.neg_ref() };
                for k in 0..=q {
                    let ck = if (q - k) % 2 == 0 { c.clone() } else { c.neg_ref() };
                    out.add_term(ck, indexed("τ_", k));
                }
            }
            out
        }
        Family::SU => f_even_expansion(m, |q| indexed_suffix("σ_", q, "∘ι₁")),
        Family::Sp => sp_product_expansion(desc.n),
        Family::FII => fii_spin_expansion(cache)?.tensor(&fii_vector_expansion()),
    })
}

pub fn eta_table(desc: &RankOneDescriptor) -> Result<EtaTable> {
    eta_table_with(desc, &CharacterCache::new())
}

pub fn eta_table_with(desc: &RankOneDescriptor, cache: &CharacterCache) -> Result<EtaTable> {
    let table = regroup(&reduced_expansion(desc, cache)?, desc.m_steps)?;
    let trivial = constant_sum(&[(1, CharSymbol::trivial())]);
    if table.entries[0] != trivial {
        return Err(Error::Logic(format!("eta_0 is {} instead of trivial", render_virtual(&table.entries[0]))));
    }
    Ok(table)
}

/// Polynomial in `t` and torus variables for `D(gamma)`, built from eigenvalue factors.
pub fn discriminant_poly(desc: &RankOneDescriptor) -> Result<IntPoly> {
    match desc.family {
        Family::SO => Ok(f_det(desc.n)),
        Family::SU => {
            let mut acc = psi_poly(PsiKind::Sinh);
            for v in torus_vars(desc.n) {
                let z = IntPoly::monomial(BigInt::one(), &[(v.as_str(), 2), ("w", -2)]);
                let zi = IntPoly::monomial(BigInt::one(), &[(v.as_str(), -2), ("w", 2)]);
                acc = acc.mul_ref(&(two_cosh() - z - zi));
            }
            Ok(acc)
        }
        Family::FII => {
            let mut vec_part = psi_poly(PsiKind::Sinh);
            for v in torus_vars(3) {
                vec_part = vec_part.mul_ref(&(cosh_basis(2) - y_pow(&v, 2) - y_pow(&v, -2)));
            }
            Ok(fii_spin_factor().mul_ref(&vec_part))
        }
        Family::Sp => Err(Error::Domain("Sp(n,1) has no torus model; use the formal identity".into())),
    }
}

fn dictionary(desc: &RankOneDescriptor, expansion: &IntCharSum, cache: &CharacterCache) -> Result<BTreeMap<String, IntPoly>> {
    let m = desc.m_steps;
    let mut dict = BTreeMap::new();
    match desc.family {
        Family::SO if desc.n % 2 == 0 => {
            for q in 1..=m {
                dict.insert(format!("σ_{}", q), cache.sigma(m, q)?);
            }
        }
        Family::SO => {
            for q in 1..=m {
                dict.insert(format!("τ_{}", q), cache.tau(m, q)?);
            }
        }
        Family::SU => {
            for q in 1..=m {
                let chi = cache.sigma(m, q)?;
                let names = torus_vars(m);
                let subs: Vec<(&str, Vec<(&str, i32)>)> =
                    names.iter().map(|v| (v.as_str(), vec![(v.as_str(), 1), ("w", -1)])).collect();
                dict.insert(format!("σ_{}∘ι₁", q), chi.substitute_monomials(&subs));
            }
        }
        Family::FII => dict = fii_dictionary(expansion, cache)?,
        Family::Sp => return Err(Error::Domain("Sp(n,1) symbols are formal".into())),
    }
    Ok(dict)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaDiscrepancy {
    pub q: usize,
    pub printed: Option<String>,
    pub derived: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceCoefficient {
    pub q: usize,
    pub shift: usize,
    pub sign: i8,
    pub eta: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantReport {
    pub family: Family,
    pub label: String,
    pub n: usize,
    pub rho: String,
    pub alpha0: String,
    pub m: usize,
    pub psi: PsiKind,
    pub eta_table: Vec<String>,
    pub trace_coefficients: Vec<TraceCoefficient>,
    pub verified: bool,
    pub warnings: Vec<String>,
    pub discrepancies: Vec<EtaDiscrepancy>,
}

pub fn trace_coefficients(desc: &RankOneDescriptor) -> Result<Vec<TraceCoefficient>> {
    Ok(trace_coefficients_from(desc, &eta_table(desc)?))
}

fn trace_coefficients_from(desc: &RankOneDescriptor, table: &EtaTable) -> Vec<TraceCoefficient> {
    let m = desc.m_steps;
    table
        .entries
        .iter()
        .enumerate()
        .map(|(q, eta)| TraceCoefficient {
            q,
            shift: m - q,
            sign: if q % 2 == 0 { 1 } else { -1 },
            eta: render_virtual(eta),
        })
        .collect()
}

/// Compares the derived `Sp(n,1)` table with the printed case list.
pub fn sp_discrepancies(desc: &RankOneDescriptor, table: &EtaTable) -> (Vec<EtaDiscrepancy>, Vec<String>) {
    let m = desc.m_steps;
    let mut warnings = Vec::new();
    if m < 6 {
        warnings.push(format!(
            "Sp({},1): printed case list needs m >= 6 (m = {}); table derived by symbolic regrouping",
            desc.n, m
        ));
    }
    let printed = sp_printed_eta(m);
    let mut out = Vec::new();
    for (q, derived) in table.entries.iter().enumerate() {
        let p = if m < 6 { None } else { printed[q].clone() };
        if p.as_ref() != Some(derived) {
            out.push(EtaDiscrepancy { q, printed: p.as_ref().map(render_virtual), derived: render_virtual(derived) });
        }
    }
    (out, warnings)
}

pub fn verify_discriminant_expansion(desc: &RankOneDescriptor) -> Result<DiscriminantReport> {
    verify_discriminant_expansion_with(desc, &CharacterCache::new())
}

pub fn verify_discriminant_expansion_with(desc: &RankOneDescriptor, cache: &CharacterCache) -> Result<DiscriminantReport> {
    let expansion = reduced_expansion(desc, cache)?;
    let table = regroup(&expansion, desc.m_steps)?;
    let eta0_ok = table.entries[0] == constant_sum(&[(1, CharSymbol::trivial())]);
    let recomposed = table.recompose();
    let mut warnings = Vec::new();
    let mut discrepancies = Vec::new();
    let identity = match desc.family {
        Family::Sp => {
            let (d, w) = sp_discrepancies(desc, &table);
            discrepancies = d;
            warnings = w;
            recomposed == expansion
        }
        _ => {
            let dict = dictionary(desc, &expansion, cache)?;
            let rhs = recomposed.evaluate(&dict)?.mul_ref(&psi_poly(desc.psi_kind));
            let lhs = discriminant_poly(desc)?;
            if desc.family == Family::FII && !verify_fii_printed_expansion(cache)? {
                warnings.push("FII: printed Spin(7) combination for the spin factor does not reproduce F_8".into());
            }
            rhs == lhs
        }
    };
    Ok(DiscriminantReport {
        family: desc.family,
        label: desc.label(),
        n: desc.n,
        rho: desc.rho().to_string(),
        alpha0: desc.alpha0().to_string(),
        m: desc.m_steps,
        psi: desc.psi_kind,
        eta_table: table.render(),
        trace_coefficients: trace_coefficients_from(desc, &table),
        verified: identity && eta0_ok,
        warnings,
        discrepancies,
    })
}

/// One test point for the unitary adjoint oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuSample {
    pub thetas: Vec<f64>,
    pub phi: f64,
    pub ell: Ratio<i64>,
}

fn ratio_f64(r: &Ratio<i64>) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Samples satisfying `x^2 det(u) = 1` with `l` in `(0, 3]`.
pub fn su_random_samples(n: usize, count: usize, seed: u64) -> Vec<SuSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let thetas: Vec<f64> = (0..n).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
            let branch = if rng.random_bool(0.5) { std::f64::consts::PI } else { 0.0 };
            let phi = -thetas.iter().sum::<f64>() / 2.0 + branch;
            let ell = Ratio::new(rng.random_range(1..=3000i64), 1000);
            SuSample { thetas, phi, ell }
        })
        .collect()
}

/// `e^{rho l} |det(Ad((m a_l)^{-1}) - I)|` on `n = n_1 + n_2` from explicit matrices.
pub fn su_adjoint_discriminant(n: usize, s: &SuSample) -> Result<f64> {
    if s.thetas.len() != n {
        return Err(Error::Domain(format!("expected {} angles, got {}", n, s.thetas.len())));
    }
    let total = 2.0 * s.phi + s.thetas.iter().sum::<f64>();
    let defect = Complex::from_polar(1.0, total) - Complex::new(1.0, 0.0);
    if defect.norm() > 1e-9 {
        return Err(Error::Domain("torus point violates x^2 det(u) = 1".into()));
    }
    let ell = ratio_f64(&s.ell);
    let size = n + 2;
    let c0 = Complex::new(0.0, 0.0);
    let mut minv = DMatrix::<Complex<f64>>::from_element(size, size, c0);
    let mut mmat = minv.clone();
    for (j, th) in s.thetas.iter().enumerate() {
        mmat[(j, j)] = Complex::from_polar(1.0, *th);
        minv[(j, j)] = Complex::from_polar(1.0, -*th);
    }
    for j in [n, n + 1] {
        mmat[(j, j)] = Complex::from_polar(1.0, s.phi);
        minv[(j, j)] = Complex::from_polar(1.0, -s.phi);
    }
    let (ch, sh) = (ell.cosh(), ell.sinh());
    let mut a = DMatrix::<Complex<f64>>::identity(size, size);
    let mut ainv = a.clone();
    a[(n, n)] = Complex::new(ch, 0.0);
    a[(n + 1, n + 1)] = Complex::new(ch, 0.0);
    a[(n, n + 1)] = Complex::new(-sh, 0.0);
    a[(n + 1, n)] = Complex::new(-sh, 0.0);
    ainv[(n, n)] = Complex::new(ch, 0.0);
    ainv[(n + 1, n + 1)] = Complex::new(ch, 0.0);
    ainv[(n, n + 1)] = Complex::new(sh, 0.0);
    ainv[(n + 1, n)] = Complex::new(sh, 0.0);
    let g = &mmat * &a;
    let ginv = &ainv * &minv;

    let x_v = |v: &[Complex<f64>]| {
        let mut x = DMatrix::<Complex<f64>>::from_element(size, size, c0);
        for j in 0..n {
            x[(j, n)] = v[j];
            x[(j, n + 1)] = v[j];
            x[(n, j)] = -v[j].conj();
            x[(n + 1, j)] = v[j].conj();
        }
        x
    };
    let y_d = |d: Complex<f64>| {
        let mut y = DMatrix::<Complex<f64>>::from_element(size, size, c0);
        y[(n, n)] = d;
        y[(n, n + 1)] = d;
        y[(n + 1, n)] = -d;
        y[(n + 1, n + 1)] = -d;
        y
    };
    let mut basis = Vec::new();
    for j in 0..n {
        for unit in [Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)] {
            let mut v = vec![c0; n];
            v[j] = unit;
            basis.push(x_v(&v));
        }
    }
    basis.push(y_d(Complex::new(0.0, 1.0)));
    let dim = 2 * n + 1;
    let mut ad = DMatrix::<f64>::zeros(dim, dim);
    for (col, b) in basis.iter().enumerate() {
        let img = &ginv * b * &g;
        let mut coords = vec![0.0; dim];
        for j in 0..n {
            coords[2 * j] = img[(j, n)].re;
            coords[2 * j + 1] = img[(j, n)].im;
        }
        coords[2 * n] = img[(n, n + 1)].im;
        let mut recon = y_d(Complex::new(0.0, coords[2 * n]));
        let v: Vec<Complex<f64>> = (0..n).map(|j| Complex::new(coords[2 * j], coords[2 * j + 1])).collect();
        recon += x_v(&v);
        let resid = (&img - &recon).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if resid > 1e-9 * img.iter().map(|z| z.norm()).fold(1.0, f64::max) {
            return Err(Error::Logic(format!("adjoint image leaves the nilradical (residual {:e})", resid)));
        }
        for (row, v) in coords.into_iter().enumerate() {
            ad[(row, col)] = v;
        }
    }
    let det = (ad - DMatrix::<f64>::identity(dim, dim)).determinant();
    let rho = (n + 1) as f64;
    Ok((rho * ell).exp() * det.abs())
}

/// Factored form `F_{2n}(l, iota_1(m)) * 2sinh(l)` evaluated from the exact polynomial.
pub fn su_factored_discriminant(n: usize, s: &SuSample) -> Result<f64> {
    let desc = descriptor(Family::SU, n)?;
    let poly = discriminant_poly(&desc)?;
    let ell = ratio_f64(&s.ell);
    let names = torus_vars(n);
    let mut point: Vec<(&str, Complex<f64>)> = vec![("t", Complex::new((ell / 2.0).exp(), 0.0))];
    for (name, th) in names.iter().zip(&s.thetas) {
        point.push((name.as_str(), Complex::from_polar(1.0, th / 2.0)));
    }
    point.push(("w", Complex::from_polar(1.0, s.phi / 2.0)));
    Ok(poly.eval(&point)?.re)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuOracleReport {
    pub n: usize,
    pub samples: usize,
    pub max_relative_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn verify_cor_discriminant_su(n: usize, samples: &[SuSample]) -> Result<SuOracleReport> {
    if !(2..=4).contains(&n) {
        return Err(Error::Domain(format!("SU oracle supports 2 <= n <= 4, got {}", n)));
    }
    let tolerance = 1e-9;
    let mut worst: f64 = 0.0;
    for s in samples {
        let raw = su_adjoint_discriminant(n, s)?;
        let fac = su_factored_discriminant(n, s)?;
        let scale = raw.abs().max(fac.abs());
        let err = if scale < 1e-300 { 0.0 } else { (raw - fac).abs() / scale };
        worst = worst.max(err);
    }
    Ok(SuOracleReport { n, samples: samples.len(), max_relative_error: worst, tolerance, passed: worst <= tolerance })
}

/// `D(gamma)` from the factored form at real `l` and torus angles.
///
/// Angles: `SO`: `floor(n/2)` values; `SU`: `n` values then `phi`; `FII`: three `Spin(7)` angles.
pub fn discriminant_value<F: Float>(desc: &RankOneDescriptor, ell: F, angles: &[F]) -> Result<F> {
    let two = F::one() + F::one();
    let cc = |l: F, th: F| two * l.cosh() - two * th.cos();
    let want = match desc.family {
        Family::SO => desc.n / 2,
        Family::SU => desc.n + 1,
        Family::FII => 3,
        Family::Sp => return Err(Error::Domain("Sp(n,1) has no torus model".into())),
    };
    if angles.len() != want {
        return Err(Error::Domain(format!("expected {} angles, got {}", want, angles.len())));
    }
    Ok(match desc.family {
        Family::SO => angles.iter().fold(psi_value(desc.psi_kind, ell), |acc, &th| acc * cc(ell, th)),
        Family::SU => {
            let phi = angles[desc.n];
            angles[..desc.n].iter().fold(psi_value(PsiKind::Sinh, ell), |acc, &th| acc * cc(ell, th - phi))
        }
        Family::FII => {
            let mut spin = Complex::new(F::one(), F::zero());
            let half = F::one() / two;
            for mask in 0..8u32 {
                let mut phase = F::zero();
                for (i, &th) in angles.iter().enumerate() {
                    phase = if mask >> i & 1 == 1 { phase - th * half } else { phase + th * half };
                }
                let z = Complex::new(phase.cos(), phase.sin()).scale((ell * half).exp());
                spin = spin * (Complex::new((-ell * half).exp(), F::zero()) - z);
            }
            let vector = angles.iter().fold(psi_value(PsiKind::Sinh, ell), |acc, &th| acc * cc(two * ell, th));
            spin.re * vector
        }
        Family::Sp => unreachable!(),
    })
}

/// Evaluates a torus polynomial in `y_j = e^{i theta_j / 2}` (and `w = e^{i phi / 2}` for `SU`).
pub fn eval_character<F: Float>(desc: &RankOneDescriptor, chi: &IntPoly, angles: &[F]) -> Result<Complex<F>> {
    let two = F::one() + F::one();
    let names: Vec<String> = match desc.family {
        Family::SU => {
            let mut v = torus_vars(desc.n);
            v.push("w".into());
            v
        }
        Family::SO => torus_vars(desc.n / 2),
        Family::FII => torus_vars(3),
        Family::Sp => return Err(Error::Domain("Sp(n,1) has no torus model".into())),
    };
    let point: Vec<(&str, Complex<F>)> = names
        .iter()
        .zip(angles)
        .map(|(n, &a)| (n.as_str(), Complex::new((a / two).cos(), (a / two).sin())))
        .collect();
    chi.eval(&point)
}

/// One geodesic's contribution `l conj(chi_sigma(m)) / (2 j D(gamma))`, real part.
pub fn sigma_length_term<F: Float>(
    desc: &RankOneDescriptor,
    ell: F,
    j: u32,
    angles: &[F],
    chi: &IntPoly,
) -> Result<F> {
    if !(ell > F::zero()) {
        return Err(Error::Domain("length must be positive".into()));
    }
    if j == 0 {
        return Err(Error::Domain("primitivity index must be at least one".into()));
    }
    let d = discriminant_value(desc, ell, angles)?;
    let x = eval_character(desc, chi, angles)?.conj();
    let two = F::one() + F::one();
    Ok(ell * x.re / (two * F::from(j).unwrap() * d))
}

/// Raw `|det(t^{-1} I - t u)|` for a block-rotation matrix, used as an oracle.
pub fn raw_orthogonal_determinant(n: usize, ell: f64, thetas: &[f64]) -> f64 {
    let mut u = DMatrix::<f64>::identity(n, n);
    for (j, th) in thetas.iter().enumerate() {
        let (c, s) = (th.cos(), th.sin());
        u[(2 * j, 2 * j)] = c;
        u[(2 * j, 2 * j + 1)] = s;
        u[(2 * j + 1, 2 * j)] = -s;
        u[(2 * j + 1, 2 * j + 1)] = c;
    }
    let mat = DMatrix::<f64>::identity(n, n) * (-ell / 2.0).exp() - u * (ell / 2.0).exp();
    mat.determinant().abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn descriptors() {
        let su = descriptor(Family::SU, 3).unwrap();
        assert_eq!((su.rho(), su.m_steps), (Ratio::from_integer(4), 3));
        let sp = descriptor(Family::Sp, 3).unwrap();
        assert_eq!((sp.rho(), sp.m_steps, sp.n1, sp.n2), (Ratio::from_integer(7), 6, 8, 3));
        let f = descriptor(Family::FII, 0).unwrap();
        assert_eq!((f.rho(), f.m_steps, f.psi_kind), (Ratio::from_integer(11), 10, PsiKind::Sinh));
        let so = descriptor(Family::SO, 3).unwrap();
        assert_eq!((so.rho(), so.alpha0(), so.m_steps), (Ratio::new(3, 2), Ratio::new(1, 2), 1));
        assert!(descriptor(Family::SO, 1).is_err());
        assert!(descriptor(Family::Sp, 1).is_err());
    }

    #[test]
    fn f_det_small_cases() {
        let f2 = f_det(2);
        let expected = IntPoly::monomial(1.into(), &[("t", 2)]) + IntPoly::monomial(1.into(), &[("t", -2)])
            - IntPoly::monomial(1.into(), &[("y1", 2)])
            - IntPoly::monomial(1.into(), &[("y1", -2)]);
        assert_eq!(f2, expected);
        for m in 1..=4 {
            let at_zero = f_det(2 * m).eval_at_one(&torus_vars(m).iter().map(|s| s.as_str()).collect::<Vec<_>>());
            assert_eq!(at_zero, psi_poly(PsiKind::SinhHalf).pow(2 * m as u32));
        }
        let f3 = f_det(3);
        assert_eq!(f3, psi_poly(PsiKind::SinhHalf).mul_ref(&f2));
    }

    #[test]
    fn f_expansions_small() {
        for n in 2..=7 {
            assert!(verify_f_expansion(n), "n={}", n);
        }
    }

    #[test]
    fn f_det_even_is_class_function() {
        let f = f_det(6);
        let flipped = f.substitute_monomials(&[("y2", vec![("y2", -1)])]);
        assert_eq!(f, flipped);
        let swapped = f.substitute_monomials(&[("y1", vec![("y3", 1)]), ("y3", vec![("y1", 1)])]);
        assert_eq!(f, swapped);
    }

    #[test]
    fn so_and_su_identities() {
        for n in 2..=6 {
            let r = verify_discriminant_expansion(&descriptor(Family::SO, n).unwrap()).unwrap();
            assert!(r.verified, "SO n={}", n);
        }
        for n in 2..=3 {
            let r = verify_discriminant_expansion(&descriptor(Family::SU, n).unwrap()).unwrap();
            assert!(r.verified, "SU n={}", n);
        }
    }

    #[test]
    fn so_eta_tables() {
        let d = descriptor(Family::SO, 4).unwrap();
        let t = eta_table(&d).unwrap();
        assert_eq!(t.render(), vec!["1", "σ_1", "σ_2"]);
        let d = descriptor(Family::SO, 5).unwrap();
        let t = eta_table(&d).unwrap();
        assert_eq!(t.render(), vec!["1", "-1 + τ_1", "1 - τ_1 + τ_2"]);
    }

    #[test]
    fn trace_coefficients_so31() {
        let d = descriptor(Family::SO, 2).unwrap();
        let tc = trace_coefficients(&d).unwrap();
        assert_eq!(tc.len(), 2);
        assert_eq!((tc[0].q, tc[0].shift, tc[0].sign, tc[0].eta.as_str()), (0, 1, 1, "1"));
        assert_eq!((tc[1].q, tc[1].shift, tc[1].sign, tc[1].eta.as_str()), (1, 0, -1, "σ_1"));
    }

    #[test]
    fn sp_tables() {
        let d = descriptor(Family::Sp, 3).unwrap();
        let t = eta_table(&d).unwrap();
        assert_eq!(render_virtual(&t.entries[1]), "σ̃_1");
        let r = verify_discriminant_expansion(&d).unwrap();
        assert!(r.verified);
        let printed = sp_printed_eta(6);
        for q in 0..6 {
            assert_eq!(printed[q].as_ref(), Some(&t.entries[q]), "row {}", q);
        }
        assert_eq!(r.discrepancies.len(), 1);
        assert_eq!(r.discrepancies[0].q, 6);
        let r2 = verify_discriminant_expansion(&descriptor(Family::Sp, 2).unwrap()).unwrap();
        assert!(r2.verified);
        assert!(!r2.warnings.is_empty());
    }

    #[test]
    fn fii_spin_expansion_matches_independent_count() {
        let cache = CharacterCache::new();
        let e = fii_spin_expansion(&cache).unwrap();
        // t^0 coefficient: the 70 four-element subsets of spin weights
        let dict = fii_dictionary(&e, &cache).unwrap();
        let at_identity: BigInt = e
            .terms()
            .map(|(s, c)| {
                let v = s.atoms().iter().fold(BigInt::one(), |acc, a| acc * dict[a].sum_coefficients());
                c.coeff(&[("t", 0)]) * v
            })
            .sum();
        assert_eq!(at_identity, BigInt::from(70));
        assert!(!verify_fii_printed_expansion(&cache).unwrap());
    }

    #[test]
    fn fii_identity() {
        let r = verify_discriminant_expansion(&descriptor(Family::FII, 0).unwrap()).unwrap();
        assert!(r.verified);
        assert_eq!(r.eta_table.len(), 11);
        assert_eq!(r.eta_table[0], "1");
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn f_expansions_large() {
        for n in 8..=11 {
            assert!(verify_f_expansion(n), "n={}", n);
        }
    }

    #[test]
    fn su_oracle_identity_and_limit() {
        let s = SuSample { thetas: vec![0.0, 0.0], phi: 0.0, ell: Ratio::from_integer(1) };
        let raw = su_adjoint_discriminant(2, &s).unwrap();
        let expected = (2.0 * 0.5f64.sinh()).powi(4) * 2.0 * 1f64.sinh();
        assert!((raw - expected).abs() / expected < 1e-12, "{} vs {} fac {}", raw, expected, su_factored_discriminant(2, &s).unwrap());
        let tiny = SuSample { thetas: vec![0.0, 0.0], phi: 0.0, ell: Ratio::new(1, 1_000_000) };
        assert!(su_adjoint_discriminant(2, &tiny).unwrap() < 1e-12);
        assert!(su_factored_discriminant(2, &tiny).unwrap() < 1e-12);
        let bad = SuSample { thetas: vec![0.3, 0.0], phi: 0.0, ell: Ratio::from_integer(1) };
        assert!(matches!(su_adjoint_discriminant(2, &bad), Err(Error::Domain(_))));
    }

    #[test]
    fn su_oracle_random() {
        let r = verify_cor_discriminant_su(2, &su_random_samples(2, 20, 7)).unwrap();
        assert!(r.passed, "{:?}", r);
    }

    #[test]
    fn sigma_length_terms() {
        let d = descriptor(Family::SO, 2).unwrap();
        let pi = std::f64::consts::PI;
        let v = sigma_length_term(&d, 1.0, 1, &[pi], &IntPoly::one()).unwrap();
        let oracle = 1.0 / (2.0 * raw_orthogonal_determinant(2, 1.0, &[pi]));
        assert!((v - oracle).abs() < 1e-12);
        let v2 = sigma_length_term(&d, 1.0, 2, &[pi], &IntPoly::one()).unwrap();
        assert!((v2 - v / 2.0).abs() < 1e-15);
        assert!(sigma_length_term(&d, 0.0, 1, &[pi], &IntPoly::one()).is_err());
        let sp = descriptor(Family::Sp, 2).unwrap();
        assert!(sigma_length_term(&sp, 1.0, 1, &[], &IntPoly::one()).is_err());
        let v32 = sigma_length_term::<f32>(&d, 1.0, 1, &[std::f32::consts::PI], &IntPoly::one()).unwrap();
        assert!((v32 as f64 - oracle).abs() < 1e-5);
    }

    #[test]
    fn discriminant_value_matches_polynomial() {
        let cases = [
            (descriptor(Family::SO, 5).unwrap(), vec![0.4, -1.2]),
            (descriptor(Family::SU, 2).unwrap(), vec![0.4, 1.0, -0.7]),
            (descriptor(Family::FII, 0).unwrap(), vec![0.4, 1.0, -2.2]),
        ];
        for (d, angles) in cases {
            let p = discriminant_poly(&d).unwrap();
            let mut point: Vec<(String, Complex<f64>)> = vec![("t".into(), Complex::new(0.35f64.exp(), 0.0))];
            let names: Vec<String> = match d.family {
                Family::SU => {
                    let mut v = torus_vars(d.n);
                    v.push("w".into());
                    v
                }
                Family::FII => torus_vars(3),
                _ => torus_vars(d.n / 2),
            };
            for (n, a) in names.iter().zip(&angles) {
                point.push((n.clone(), Complex::from_polar(1.0, a / 2.0)));
            }
            let pr: Vec<(&str, Complex<f64>)> = point.iter().map(|(n, z)| (n.as_str(), *z)).collect();
            let a = p.eval(&pr).unwrap().re;
            let b = discriminant_value(&d, 0.7, &angles).unwrap();
            assert!((a - b).abs() < 1e-9 * a.abs().max(1.0), "{:?}: {} vs {}", d.family, a, b);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]
        #[test]
        fn discriminant_positive(ell in 0.01f64..4.0, a in -3.2f64..3.2, b in -3.2f64..3.2, c in -3.2f64..3.2) {
            for (d, angles) in [
                (descriptor(Family::SO, 6).unwrap(), vec![a, b, c]),
                (descriptor(Family::SO, 7).unwrap(), vec![a, b, c]),
                (descriptor(Family::SU, 2).unwrap(), vec![a, b, c]),
                (descriptor(Family::FII, 0).unwrap(), vec![a, b, c]),
            ] {
                prop_assert!(discriminant_value(&d, ell, &angles).unwrap() > 0.0);
            }
        }
    }
}
