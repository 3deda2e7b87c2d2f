//! Synthetic primitive length spectra, cover multiplicities and the cumulative
//! difference between two covers.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covers::{
    difference_coefficients, printed_difference_coefficients, splitting_from_model, FrobType, FrobeniusDatum, RingKind,
    SplittingModel, SubgroupId,
};
use crate::{Error, Rational, Result, SCHEMA_VERSION};

/// Lengths are stored as integer ticks so that `d * l` is exact.
pub const TICKS_PER_UNIT: f64 = 4_294_967_296.0;

/// `li(2)`.
pub const LI2: f64 = 1.045_163_780_117_492_7;

/// Default cap on the number of generated records.
pub const DEFAULT_RECORD_CAP: u64 = 3_000_000;

#[allow(clippy::too_many_arguments)]
fn simpson_step(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64, m: f64, fm: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature with an absolute tolerance.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, fa, b, fb, m, fm, whole, tol, 50)
}

/// `int_{u0}^{u1} e^s / s ds`.
fn exp_over_u(u0: f64, u1: f64) -> f64 {
    let scale = u0.exp().max(u1.exp()) / u0.min(u1);
    adaptive_simpson(|s| s.exp() / s, u0, u1, 1e-13 * scale.max(1.0) * (u1 - u0).abs().max(1e-300))
}

/// Logarithmic integral for `x > 2`.
pub fn li(x: f64) -> Result<f64> {
    if !(x > 2.0) || !x.is_finite() {
        return Err(Error::Domain(format!("li needs x > 2, got {}", x)));
    }
    let (u0, u1) = (2f64.ln(), x.ln());
    let pieces = ((u1 - u0).ceil() as usize).max(1);
    let h = (u1 - u0) / pieces as f64;
    let tail: f64 = (0..pieces).map(|k| exp_over_u(u0 + k as f64 * h, u0 + (k + 1) as f64 * h)).sum();
    Ok(LI2 + tail)
}

/// Incremental inverse of `li` along an increasing sequence of targets.
#[derive(Clone, Debug)]
pub struct LiInverter {
    u: f64,
    value: f64,
}

impl Default for LiInverter {
    fn default() -> Self {
        LiInverter { u: 2f64.ln(), value: LI2 }
    }
}

impl LiInverter {
    /// Returns `ln x` with `li(x) = v`.
    pub fn advance(&mut self, v: f64) -> f64 {
        for _ in 0..100 {
            let err = v - self.value;
            if err.abs() <= 1e-12 * v.abs().max(1.0) {
                break;
            }
            let step = (err * self.u / self.u.exp()).clamp(-0.5, 1.0);
            let next = (self.u + step).max(0.5);
            self.value += exp_over_u(self.u, next);
            self.u = next;
        }
        self.u
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Enumerated,
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub p: u64,
    pub ring: RingKind,
    pub model: ModelKind,
    pub t_max: f64,
    pub seed: u64,
    pub rho: f64,
    /// Probability that a record reuses the previous length.
    pub collision_rate: f64,
    pub slack: f64,
    pub record_cap: u64,
}

impl SimConfig {
    pub fn new(p: u64, t_max: f64, seed: u64) -> Self {
        SimConfig {
            p,
            ring: RingKind::Gaussian,
            model: ModelKind::Enumerated,
            t_max,
            seed,
            rho: 1.0,
            collision_rate: 0.0,
            slack: 1.25,
            record_cap: DEFAULT_RECORD_CAP,
        }
    }

    pub fn t_ticks(&self) -> u64 {
        (self.t_max * TICKS_PER_UNIT).floor() as u64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveClassRecord {
    pub id: u64,
    pub ticks: u64,
    pub frobenius: FrobeniusDatum,
}

impl PrimitiveClassRecord {
    pub fn length(&self) -> f64 {
        self.ticks as f64 / TICKS_PER_UNIT
    }
}

/// Records with `l <= T`, counts tracking `li(e^{2 rho T}) - li(2)`.
pub fn generate(model: &dyn SplittingModel, cfg: &SimConfig) -> Result<Vec<PrimitiveClassRecord>> {
    if !(cfg.t_max > 0.0) || !cfg.t_max.is_finite() {
        return Err(Error::Domain(format!("T must be positive, got {}", cfg.t_max)));
    }
    if !(cfg.rho > 0.0) || !(0.0..=1.0).contains(&cfg.collision_rate) {
        return Err(Error::Domain("rho must be positive and the collision rate in [0, 1]".into()));
    }
    let x_max = (2.0 * cfg.rho * cfg.t_max).exp();
    let expected = if x_max > 2.0 { li(x_max)? - LI2 } else { 0.0 };
    if expected > cfg.record_cap as f64 {
        return Err(Error::Resource(format!("about {:.0} records exceed the cap {}", expected, cfg.record_cap)));
    }
    let t_ticks = cfg.t_ticks();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut inv = LiInverter::default();
    let mut out: Vec<PrimitiveClassRecord> = Vec::new();
    for k in 0u64.. {
        let u: f64 = rng.random();
        let v = LI2 + k as f64 + u;
        let ell = inv.advance(v) / (2.0 * cfg.rho);
        let mut ticks = (ell * TICKS_PER_UNIT).round() as u64;
        let collide = cfg.collision_rate > 0.0 && rng.random_bool(cfg.collision_rate);
        if let Some(prev) = out.last() {
            if collide {
                ticks = prev.ticks;
            } else if ticks <= prev.ticks {
                ticks = prev.ticks + 1;
            }
        }
        if ticks > t_ticks {
            break;
        }
        let frobenius = model.sample(&mut rng);
        out.push(PrimitiveClassRecord { id: k, ticks, frobenius });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityTable {
    pub subgroup: SubgroupId,
    pub p: u64,
    /// Length in ticks to multiplicity.
    pub entries: BTreeMap<u64, i128>,
}

impl MultiplicityTable {
    pub fn get(&self, ticks: u64) -> i128 {
        self.entries.get(&ticks).copied().unwrap_or(0)
    }

    /// Multiplies every entry, for linearity checks.
    pub fn scaled(&self, k: i128) -> Self {
        MultiplicityTable { subgroup: self.subgroup, p: self.p, entries: self.entries.iter().map(|(l, m)| (*l, m * k)).collect() }
    }
}

fn merge(mut a: BTreeMap<u64, i128>, b: BTreeMap<u64, i128>) -> BTreeMap<u64, i128> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// `m(l) = sum_d sum_{l_p = l/d} A_B(p, d)`, each splitting found by Mobius inversion.
pub fn multiplicities(records: &[PrimitiveClassRecord], model: &dyn SplittingModel, b: SubgroupId) -> Result<MultiplicityTable> {
    let entries = records
        .par_iter()
        .map(|r| -> Result<BTreeMap<u64, i128>> {
            let split = splitting_from_model(model, &r.frobenius, b)?;
            let mut m = BTreeMap::new();
            for (d, a) in split {
                if a != Rational::from_integer(0) {
                    *m.entry(r.ticks * d).or_insert(0) += a.to_integer();
                }
            }
            Ok(m)
        })
        .try_reduce(BTreeMap::new, |a, b| Ok(merge(a, b)))?;
    Ok(MultiplicityTable { subgroup: b, p: model.ring().p, entries })
}

/// `sum_{l <= T} |m_A(l) - m_B(l)|`.
pub fn d_length(a: &MultiplicityTable, b: &MultiplicityTable, t_ticks: u64) -> u128 {
    let mut keys: Vec<u64> = a.entries.keys().chain(b.entries.keys()).copied().filter(|&k| k <= t_ticks).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter().map(|k| (a.get(k) - b.get(k)).unsigned_abs()).sum()
}

/// `sum_{l <= T} (m_2(l) - m_1(l))` straight from the tables.
pub fn brute_difference(t1: &MultiplicityTable, t2: &MultiplicityTable, t_ticks: u64) -> i128 {
    t2.entries.range(..=t_ticks).map(|(_, v)| v).sum::<i128>() - t1.entries.range(..=t_ticks).map(|(_, v)| v).sum::<i128>()
}

/// `(pi_I(T), pi~_I(T))` per type.
pub fn pi_counters(records: &[PrimitiveClassRecord], model: &dyn SplittingModel, t_ticks: u64) -> BTreeMap<FrobType, (Rational, Rational)> {
    let n = model.n() as i128;
    let p = model.ring().p;
    let mut out: BTreeMap<FrobType, (Rational, Rational)> =
        FrobType::ALL.iter().map(|&t| (t, (Rational::from_integer(0), Rational::from_integer(0)))).collect();
    for r in records {
        let f = &r.frobenius;
        let e = out.get_mut(&f.type_tag).unwrap();
        if r.ticks * f.d0 <= t_ticks {
            e.0 += Rational::new(n, f.d0 as i128);
        }
        if f.type_tag != FrobType::Trivial && r.ticks * f.d0 * p <= t_ticks {
            e.1 += Rational::new(n, (p * f.d0) as i128);
        }
    }
    out
}

/// `sum_I c_I pi_I(T) + c~_I pi~_I(T)`.
pub fn diff_closed_form(records: &[PrimitiveClassRecord], model: &dyn SplittingModel, t_ticks: u64) -> Rational {
    let coeffs = difference_coefficients(model);
    pi_counters(records, model, t_ticks)
        .into_iter()
        .fold(Rational::from_integer(0), |acc, (tag, (pi, pit))| acc + coeffs[&tag].0 * pi + coeffs[&tag].1 * pit)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityChecks {
    pub events_checked: usize,
    pub diff_exact: bool,
    pub first_mismatch_ticks: Option<u64>,
    pub piqr_exact: bool,
    pub triangle: bool,
    pub same_length_sets: bool,
}

impl IdentityChecks {
    pub fn all_passed(&self) -> bool {
        self.diff_exact && self.piqr_exact && self.triangle && self.same_length_sets
    }
}

/// Sweeps every length event up to `T`, comparing the closed form with the tables.
pub fn check_identities(
    records: &[PrimitiveClassRecord],
    model: &dyn SplittingModel,
    t1: &MultiplicityTable,
    t2: &MultiplicityTable,
    t_ticks: u64,
) -> IdentityChecks {
    let coeffs = difference_coefficients(model);
    let n = model.n() as i128;
    let p = model.ring().p;
    // (ticks, type, tilde, weight)
    let mut contrib: Vec<(u64, FrobType, bool, Rational)> = Vec::new();
    for r in records {
        let f = &r.frobenius;
        contrib.push((r.ticks * f.d0, f.type_tag, false, Rational::new(n, f.d0 as i128)));
        if f.type_tag != FrobType::Trivial {
            contrib.push((r.ticks * f.d0 * p, f.type_tag, true, Rational::new(n, (p * f.d0) as i128)));
        }
    }
    contrib.retain(|c| c.0 <= t_ticks);
    contrib.sort_by_key(|c| c.0);
    let mut events: Vec<u64> = contrib.iter().map(|c| c.0).collect();
    events.extend(t1.entries.keys().chain(t2.entries.keys()).copied().filter(|&k| k <= t_ticks));
    events.sort_unstable();
    events.dedup();

    let zero = Rational::from_integer(0);
    let mut pi: BTreeMap<(FrobType, bool), Rational> = BTreeMap::new();
    let mut ci = 0;
    let mut brute: i128 = 0;
    let mut dl: u128 = 0;
    let mut checks = IdentityChecks {
        events_checked: 0,
        diff_exact: true,
        first_mismatch_ticks: None,
        piqr_exact: true,
        triangle: true,
        same_length_sets: true,
    };
    for &e in &events {
        while ci < contrib.len() && contrib[ci].0 <= e {
            let (_, tag, tilde, w) = contrib[ci];
            *pi.entry((tag, tilde)).or_insert(zero) += w;
            ci += 1;
        }
        let (m1, m2) = (t1.get(e), t2.get(e));
        brute += m2 - m1;
        dl += (m2 - m1).unsigned_abs();
        if (m1 > 0) != (m2 > 0) {
            checks.same_length_sets = false;
        }
        let term = |tag: FrobType, tilde: bool| {
            let c = if tilde { coeffs[&tag].1 } else { coeffs[&tag].0 };
            c * pi.get(&(tag, tilde)).copied().unwrap_or(zero)
        };
        let closed = FrobType::ALL.iter().fold(zero, |acc, &t| acc + term(t, false) + term(t, true));
        let brute_r = Rational::from_integer(brute);
        if closed != brute_r {
            checks.diff_exact = false;
            checks.first_mismatch_ticks.get_or_insert(e);
        }
        let others = FrobType::ALL
            .iter()
            .fold(zero, |acc, &t| acc + term(t, true) + if t == FrobType::Quadratic { zero } else { term(t, false) });
        if -term(FrobType::Quadratic, false) != others - brute_r {
            checks.piqr_exact = false;
        }
        if brute.unsigned_abs() > dl {
            checks.triangle = false;
        }
        checks.events_checked += 1;
    }
    checks
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientComparison {
    pub type_tag: FrobType,
    pub computed: String,
    pub computed_tilde: String,
    pub printed: String,
    pub printed_tilde: String,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub config: SimConfig,
    pub model: String,
    pub n: u64,
    pub record_count: u64,
    pub t_ticks: u64,
    pub li: f64,
    pub count_ratio: f64,
    pub d_l: String,
    pub ratio: f64,
    pub bound: f64,
    pub bound_with_slack: f64,
    pub bound_passed: bool,
    pub identity_checks: IdentityChecks,
    pub type_counts: BTreeMap<String, u64>,
    pub d0_histogram: BTreeMap<u64, u64>,
    pub coefficients: Vec<CoefficientComparison>,
}

impl RunManifest {
    /// Exact identities and the slack bound both hold.
    pub fn passed(&self) -> bool {
        self.identity_checks.all_passed() && self.bound_passed
    }
}

pub struct DensityRun {
    pub manifest: RunManifest,
    pub records: Vec<PrimitiveClassRecord>,
    pub table_b1: MultiplicityTable,
    pub table_b2: MultiplicityTable,
}

pub fn density_report(model: &dyn SplittingModel, cfg: &SimConfig) -> Result<DensityRun> {
    let records = generate(model, cfg)?;
    let t = cfg.t_ticks();
    let t1 = multiplicities(&records, model, SubgroupId::B1)?;
    let t2 = multiplicities(&records, model, SubgroupId::B2)?;
    let checks = check_identities(&records, model, &t1, &t2, t);
    let dl = d_length(&t1, &t2, t);
    let li_t = li((2.0 * cfg.rho * cfg.t_max).exp())?;
    let ratio = dl as f64 / li_t;
    let bound = 4.0 / (cfg.p as f64 + 1.0);
    let mut type_counts = BTreeMap::new();
    let mut d0_histogram = BTreeMap::new();
    for r in &records {
        *type_counts.entry(r.frobenius.type_tag.to_string()).or_insert(0) += 1;
        *d0_histogram.entry(r.frobenius.d0).or_insert(0) += 1;
    }
    let computed = difference_coefficients(model);
    let printed = printed_difference_coefficients(cfg.p);
    let coefficients = FrobType::ALL
        .iter()
        .map(|t| {
            let (c, ct) = computed[t];
            let (pc, pct) = printed[t];
            CoefficientComparison {
                type_tag: *t,
                computed: c.to_string(),
                computed_tilde: ct.to_string(),
                printed: pc.to_string(),
                printed_tilde: pct.to_string(),
                matches: c == pc && ct == pct,
            }
        })
        .collect();
    let manifest = RunManifest {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        model: model.label(),
        n: model.n(),
        record_count: records.len() as u64,
        t_ticks: t,
        li: li_t,
        count_ratio: records.len() as f64 / li_t,
        d_l: dl.to_string(),
        ratio,
        bound,
        bound_with_slack: bound * cfg.slack,
        bound_passed: ratio <= bound * cfg.slack,
        identity_checks: checks,
        type_counts,
        d0_histogram,
        coefficients,
    };
    Ok(DensityRun { manifest, records, table_b1: t1, table_b2: t2 })
}

/// `(length, m_1, m_2)` over the union support up to `T`.
pub fn table_rows(t1: &MultiplicityTable, t2: &MultiplicityTable, t_ticks: u64) -> Vec<(f64, i128, i128)> {
    let mut keys: Vec<u64> = t1.entries.keys().chain(t2.entries.keys()).copied().filter(|&k| k <= t_ticks).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter().map(|k| (k as f64 / TICKS_PER_UNIT, t1.get(k), t2.get(k))).collect()
}
