//! Bad sets for pairs of subgroups, their class densities and the degree-one reduction.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covers::GroupTable;
use crate::groups::{
    all_subgroups, conjugacy_classes, divisors, exponent, gl32, intersection_counts, is_subgroup, mobius, perm_character,
    subgroup_closure, symmetric_group, CayleyTable, ClassData, FiniteGroup, PermGroup,
};
use crate::{Error, Rational, Result, SCHEMA_VERSION};

/// Largest group accepted from a file.
pub const DEFAULT_ORDER_CAP: usize = 10_000;

/// A group with its classes and, per element, the classes of all its powers.
pub struct GroupData<'g> {
    group: &'g dyn FiniteGroup,
    classes: ClassData,
    exponent: u64,
    /// `signatures[sig_of[a]][k]` is the class of `a^k`.
    sig_of: Vec<u32>,
    signatures: Vec<Vec<u32>>,
    /// Conjugation by each generator, as an element permutation.
    conj: Vec<Vec<u32>>,
}

impl<'g> GroupData<'g> {
    pub fn new(group: &'g dyn FiniteGroup) -> Self {
        let classes = conjugacy_classes(group);
        Self::with_classes(group, classes)
    }

    pub fn with_classes(group: &'g dyn FiniteGroup, classes: ClassData) -> Self {
        let n = group.order();
        let id = group.identity();
        let raw: Vec<Vec<u32>> = (0..n)
            .into_par_iter()
            .map(|a| {
                let mut seq = vec![classes.class(id) as u32];
                let mut x = a;
                while x != id {
                    seq.push(classes.class(x) as u32);
                    x = group.mul(x, a);
                }
                seq
            })
            .collect();
        let mut lookup: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut signatures = Vec::new();
        let sig_of = raw
            .into_iter()
            .map(|s| {
                *lookup.entry(s.clone()).or_insert_with(|| {
                    signatures.push(s);
                    (signatures.len() - 1) as u32
                })
            })
            .collect();
        let conj = group
            .generators()
            .into_iter()
            .map(|g| (0..n).into_par_iter().map(|a| group.conjugate(g, a) as u32).collect())
            .collect();
        let exponent = exponent(group, &classes);
        GroupData { group, classes, exponent, sig_of, signatures, conj }
    }

    pub fn group(&self) -> &dyn FiniteGroup {
        self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn classes(&self) -> &ClassData {
        &self.classes
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Class of `a^k`.
    pub fn power_class(&self, a: usize, k: u64) -> usize {
        let s = &self.signatures[self.sig_of[a] as usize];
        s[(k % s.len() as u64) as usize] as usize
    }

    /// True when membership in `set` is invariant under conjugation.
    pub fn is_conjugation_closed(&self, set: &[bool]) -> bool {
        self.conj.iter().all(|c| (0..set.len()).all(|a| set[a] == set[c[a] as usize]))
    }
}

/// `(A, B_1, B_2)` with the permutation characters of both subgroups.
pub struct GroupTriple<'d, 'g> {
    data: &'d GroupData<'g>,
    pub label: String,
    b1: Vec<usize>,
    b2: Vec<usize>,
    chi1: Vec<u64>,
    chi2: Vec<u64>,
}

impl<'d, 'g> GroupTriple<'d, 'g> {
    pub fn new(data: &'d GroupData<'g>, label: impl Into<String>, b1: Vec<usize>, b2: Vec<usize>) -> Result<Self> {
        for (name, b) in [("B1", &b1), ("B2", &b2)] {
            if !is_subgroup(data.group, b) {
                return Err(Error::Domain(format!("{} is not a subgroup", name)));
            }
        }
        let chi1 = perm_character(data.order(), &data.classes, &b1)?;
        let chi2 = perm_character(data.order(), &data.classes, &b2)?;
        Ok(GroupTriple { data, label: label.into(), b1, b2, chi1, chi2 })
    }

    pub fn data(&self) -> &GroupData<'g> {
        self.data
    }

    pub fn indices(&self) -> (u64, u64) {
        (self.chi1[self.data.classes.class(self.data.group.identity())], self.chi2[self.data.classes.class(self.data.group.identity())])
    }

    pub fn chi(&self) -> (&[u64], &[u64]) {
        (&self.chi1, &self.chi2)
    }

    fn inverted(&self, chi: &[u64], sig: &[u32], d: u64) -> i128 {
        divisors(d)
            .into_iter()
            .map(|m| mobius(d / m) as i128 * chi[sig[(m % sig.len() as u64) as usize] as usize] as i128)
            .sum()
    }

    fn bad_signatures(&self, d: u64) -> Vec<bool> {
        self.data
            .signatures
            .iter()
            .map(|s| self.inverted(&self.chi1, s, d) != self.inverted(&self.chi2, s, d))
            .collect()
    }

    fn bad_mask(&self, d: u64) -> Vec<bool> {
        let bad = self.bad_signatures(d);
        self.data.sig_of.iter().map(|&s| bad[s as usize]).collect()
    }

    /// Sorted `S_bad(d)`; a set that is not a union of classes is reported as a logic error.
    pub fn s_bad(&self, d: u64) -> Result<Vec<usize>> {
        if d == 0 {
            return Err(Error::Domain("d must be at least 1".into()));
        }
        let mask = self.bad_mask(d);
        if !self.data.is_conjugation_closed(&mask) {
            return Err(Error::Logic(format!("S_bad({}) is not closed under conjugation", d)));
        }
        Ok(mask.iter().enumerate().filter(|(_, &b)| b).map(|(a, _)| a).collect())
    }

    pub fn gassmann(&self) -> bool {
        intersection_counts(&self.data.classes, &self.b1)
            .iter()
            .zip(intersection_counts(&self.data.classes, &self.b2))
            .all(|(&x, y)| x == y)
    }

    pub fn lmnr(&self) -> bool {
        intersection_counts(&self.data.classes, &self.b1)
            .iter()
            .zip(intersection_counts(&self.data.classes, &self.b2))
            .all(|(&x, y)| (x == 0) == (y == 0))
    }

    pub fn density_check(&self, d: u64) -> Result<DensityCheck> {
        let s = self.s_bad(d)?;
        let order = self.data.order() as i128;
        let density = Rational::new(s.len() as i128, order);
        let min_class_size = s.iter().map(|&a| self.data.classes.sizes[self.data.classes.class(a)]).min();
        let verdict = if s.is_empty() { Verdict::Empty } else { Verdict::Positive };
        let lower_bound = Rational::new(min_class_size.unwrap_or(0) as i128, order);
        if verdict == Verdict::Positive && (density < Rational::new(1, order) || density < lower_bound) {
            return Err(Error::Logic(format!("S_bad({}) has density {} below 1/|A|", d, density)));
        }
        Ok(DensityCheck { d, size: s.len(), density: density.to_string(), verdict, min_class_size, lower_bound: lower_bound.to_string() })
    }

    /// `S_bad(1)` empty forces `S_bad(d)` empty for `d` up to the exponent.
    pub fn degree_one_reduction(&self) -> Result<bool> {
        if self.bad_signatures(1).iter().any(|&b| b) {
            return Ok(true);
        }
        if self.chi1 != self.chi2 {
            return Err(Error::Logic("S_bad(1) is empty but the permutation characters differ".into()));
        }
        for d in 2..=self.data.exponent {
            if self.bad_signatures(d).iter().any(|&b| b) {
                return Err(Error::Logic(format!("S_bad(1) is empty but S_bad({}) is not", d)));
            }
        }
        Ok(true)
    }

    /// `chi_B(a)` against a direct count of cosets fixed by `a`, for every element.
    pub fn verify_class_function(&self) -> bool {
        let g = self.data.group;
        [(&self.b1, &self.chi1), (&self.b2, &self.chi2)].iter().all(|(b, chi)| {
            let mut member = vec![false; g.order()];
            for &x in b.iter() {
                member[x] = true;
            }
            (0..g.order()).into_par_iter().all(|a| {
                let fixed = (0..g.order()).filter(|&x| member[g.mul(g.mul(g.inv(x), a), x)]).count();
                fixed % b.len() == 0 && (fixed / b.len()) as u64 == chi[self.data.classes.class(a)]
            })
        })
    }

    pub fn report(&self) -> Result<TripleReport> {
        let (i1, i2) = self.indices();
        let mut s_bad_sizes = BTreeMap::new();
        let mut densities = BTreeMap::new();
        for d in 1..=self.data.exponent {
            let c = self.density_check(d)?;
            s_bad_sizes.insert(d, c.size);
            densities.insert(d, c.density);
        }
        let s1_empty = s_bad_sizes[&1] == 0;
        let gassmann = self.gassmann();
        Ok(TripleReport {
            schema_version: SCHEMA_VERSION,
            label: self.label.clone(),
            order: self.data.order(),
            index_b1: i1,
            index_b2: i2,
            exponent: self.data.exponent,
            gassmann,
            lmnr: self.lmnr(),
            s_bad_sizes,
            densities,
            degree_one_reduction: self.degree_one_reduction()?,
            s_bad_one_matches_gassmann: s1_empty == gassmann,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Empty,
    Positive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityCheck {
    pub d: u64,
    pub size: usize,
    pub density: String,
    pub verdict: Verdict,
    pub min_class_size: Option<usize>,
    pub lower_bound: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleReport {
    pub schema_version: u32,
    pub label: String,
    pub order: usize,
    pub index_b1: u64,
    pub index_b2: u64,
    pub exponent: u64,
    pub gassmann: bool,
    pub lmnr: bool,
    pub s_bad_sizes: BTreeMap<u64, usize>,
    pub densities: BTreeMap<u64, String>,
    pub degree_one_reduction: bool,
    pub s_bad_one_matches_gassmann: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub label: String,
    pub order: usize,
    pub exponent: u64,
    pub subgroups: usize,
    pub pairs: usize,
    pub gassmann_pairs: usize,
    pub lmnr_pairs: usize,
    /// Gassmann pairs whose subgroups are distinct.
    pub nontrivial_gassmann_pairs: usize,
    pub nonempty_s_bad_sets: usize,
    pub failures: Vec<String>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every ordered pair of subgroups `B_1 <= B_2` in enumeration order.
pub fn scan_subgroup_pairs(data: &GroupData<'_>, label: &str) -> ScanReport {
    let subs = all_subgroups(data.group);
    let pairs: Vec<(usize, usize)> = (0..subs.len()).flat_map(|i| (i..subs.len()).map(move |j| (i, j))).collect();
    let results: Vec<(bool, bool, bool, usize, Vec<String>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let name = format!("{} pair ({}, {})", label, i, j);
            let triple = match GroupTriple::new(data, name.clone(), subs[i].clone(), subs[j].clone()) {
                Ok(t) => t,
                Err(e) => return (false, false, false, 0, vec![format!("{}: {}", name, e)]),
            };
            let mut failures = Vec::new();
            let mut nonempty = 0;
            for d in 1..=data.exponent {
                match triple.density_check(d) {
                    Ok(c) if c.verdict == Verdict::Positive => nonempty += 1,
                    Ok(_) => {}
                    Err(e) => failures.push(format!("{}: {}", name, e)),
                }
            }
            if let Err(e) = triple.degree_one_reduction() {
                failures.push(format!("{}: {}", name, e));
            }
            let g = triple.gassmann();
            if g != triple.bad_signatures(1).iter().all(|&b| !b) {
                failures.push(format!("{}: S_bad(1) emptiness disagrees with the Gassmann condition", name));
            }
            (g, triple.lmnr(), g && i != j, nonempty, failures)
        })
        .collect();
    ScanReport {
        label: label.to_string(),
        order: data.order(),
        exponent: data.exponent,
        subgroups: subs.len(),
        pairs: pairs.len(),
        gassmann_pairs: results.iter().filter(|r| r.0).count(),
        lmnr_pairs: results.iter().filter(|r| r.1).count(),
        nontrivial_gassmann_pairs: results.iter().filter(|r| r.2).count(),
        nonempty_s_bad_sets: results.iter().map(|r| r.3).sum(),
        failures: results.into_iter().flat_map(|r| r.4).collect(),
    }
}

/// `GL(3, 2)` with the stabilizer of a point and of a line of the Fano plane.
pub fn gl32_triple_subgroups(g: &PermGroup) -> (Vec<usize>, Vec<usize>) {
    (g.stabilizer(0), g.set_stabilizer(&[0, 1, 2]))
}

pub fn builtin_s4() -> Result<PermGroup> {
    symmetric_group(4)
}

pub fn builtin_gl32() -> Result<PermGroup> {
    gl32()
}

/// Group data for an enumerated `PSL_2` table, reusing its classes.
pub fn psl_group_data(table: &GroupTable) -> GroupData<'_> {
    GroupData::with_classes(table, table.classes().clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupSpec {
    /// Permutations for a permutation group, element indices for a table.
    #[serde(default)]
    pub generators: Vec<serde_json::Value>,
    #[serde(default)]
    pub stabilizer: Option<u32>,
    #[serde(default)]
    pub set_stabilizer: Option<Vec<u32>>,
}

/// Group file: either `degree` and permutation `generators`, or a multiplication `table`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub degree: Option<usize>,
    #[serde(default)]
    pub generators: Option<Vec<Vec<u32>>>,
    #[serde(default)]
    pub table: Option<Vec<Vec<usize>>>,
    pub b1: SubgroupSpec,
    pub b2: SubgroupSpec,
}

pub enum LoadedGroup {
    Perm(PermGroup),
    Table(CayleyTable),
}

impl LoadedGroup {
    pub fn as_dyn(&self) -> &dyn FiniteGroup {
        match self {
            LoadedGroup::Perm(g) => g,
            LoadedGroup::Table(g) => g,
        }
    }
}

pub struct LoadedTriple {
    pub label: String,
    pub group: LoadedGroup,
    pub b1: Vec<usize>,
    pub b2: Vec<usize>,
}

fn resolve_subgroup(group: &LoadedGroup, spec: &SubgroupSpec, name: &str) -> Result<Vec<usize>> {
    let parse = |msg: String| Error::Parse(format!("{}: {}", name, msg));
    let chosen = [!spec.generators.is_empty(), spec.stabilizer.is_some(), spec.set_stabilizer.is_some()];
    if chosen.iter().filter(|&&c| c).count() > 1 {
        return Err(parse("give exactly one of generators, stabilizer, set_stabilizer".into()));
    }
    match group {
        LoadedGroup::Perm(g) => {
            if let Some(p) = spec.stabilizer {
                if p as usize >= g.degree() {
                    return Err(parse(format!("point {} out of range", p)));
                }
                return Ok(g.stabilizer(p));
            }
            if let Some(points) = &spec.set_stabilizer {
                if points.iter().any(|&p| p as usize >= g.degree()) {
                    return Err(parse("point out of range".into()));
                }
                return Ok(g.set_stabilizer(points));
            }
            let gens = spec
                .generators
                .iter()
                .map(|v| {
                    let perm: Vec<u32> = serde_json::from_value(v.clone()).map_err(|e| parse(e.to_string()))?;
                    g.index_of(&perm).ok_or_else(|| parse(format!("{:?} is not in the group", perm)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(subgroup_closure(g, &gens))
        }
        LoadedGroup::Table(g) => {
            if spec.stabilizer.is_some() || spec.set_stabilizer.is_some() {
                return Err(parse("stabilizers need a permutation group".into()));
            }
            let gens = spec
                .generators
                .iter()
                .map(|v| {
                    let a: usize = serde_json::from_value(v.clone()).map_err(|e| parse(e.to_string()))?;
                    if a >= g.order() {
                        return Err(parse(format!("element {} out of range", a)));
                    }
                    Ok(a)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(subgroup_closure(g, &gens))
        }
    }
}

pub fn parse_group_file(text: &str, cap: usize) -> Result<LoadedTriple> {
    let file: GroupFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let group = match (&file.table, &file.generators) {
        (Some(t), None) => {
            if t.len() > cap {
                return Err(Error::Resource(format!("table of order {} exceeds the cap {}", t.len(), cap)));
            }
            LoadedGroup::Table(CayleyTable::new(t.clone(), cap)?)
        }
        (None, Some(gens)) => {
            let degree = file.degree.ok_or_else(|| Error::Parse("permutation generators need a degree".into()))?;
            LoadedGroup::Perm(PermGroup::from_generators(degree, gens, cap)?)
        }
        _ => return Err(Error::Parse("give exactly one of table or generators".into())),
    };
    let b1 = resolve_subgroup(&group, &file.b1, "b1")?;
    let b2 = resolve_subgroup(&group, &file.b2, "b2")?;
    Ok(LoadedTriple { label: file.label.unwrap_or_else(|| "file".into()), group, b1, b2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_subgroups_have_empty_bad_sets() {
        let g = builtin_s4().unwrap();
        let data = GroupData::new(&g);
        let b = g.stabilizer(0);
        let t = GroupTriple::new(&data, "s4", b.clone(), b).unwrap();
        assert_eq!(data.exponent(), 12);
        for d in 1..=12 {
            assert!(t.s_bad(d).unwrap().is_empty());
        }
        assert!(t.degree_one_reduction().unwrap());
        assert!(t.verify_class_function());
    }

    #[test]
    fn different_indices_put_identity_in_bad_set() {
        let g = builtin_s4().unwrap();
        let data = GroupData::new(&g);
        let t = GroupTriple::new(&data, "s4", g.stabilizer(0), vec![g.identity()]).unwrap();
        assert!(t.s_bad(1).unwrap().contains(&g.identity()));
        let c = t.density_check(1).unwrap();
        assert_eq!(c.verdict, Verdict::Positive);
        assert!(t.report().unwrap().degree_one_reduction);
    }

    #[test]
    fn point_and_line_stabilizers_are_gassmann() {
        let g = builtin_gl32().unwrap();
        let data = GroupData::new(&g);
        let (p, l) = gl32_triple_subgroups(&g);
        assert_eq!((p.len(), l.len()), (24, 24));
        assert_ne!(p, l);
        let t = GroupTriple::new(&data, "gl32", p, l).unwrap();
        assert!(t.gassmann() && t.lmnr());
        assert!(t.verify_class_function());
        let report = t.report().unwrap();
        assert!(report.s_bad_sizes.values().all(|&s| s == 0));
        assert!(report.degree_one_reduction && report.s_bad_one_matches_gassmann);
    }

    #[test]
    fn bad_set_is_brute_force_chi_difference() {
        let g = builtin_s4().unwrap();
        let data = GroupData::new(&g);
        let b1 = g.stabilizer(0);
        let b2 = g.set_stabilizer(&[0, 1]);
        let t = GroupTriple::new(&data, "s4", b1.clone(), b2.clone()).unwrap();
        let fixed = |b: &[usize], a: usize| {
            (0..g.order()).filter(|&x| b.contains(&g.mul(g.mul(g.inv(x), a), x))).count() as i64 / b.len() as i64
        };
        for d in 1..=12u64 {
            let expected: Vec<usize> = (0..g.order())
                .filter(|&a| {
                    let s = |b: &[usize]| {
                        divisors(d).into_iter().map(|m| mobius(d / m) * fixed(b, g.pow(a, m))).sum::<i64>()
                    };
                    s(&b1) != s(&b2)
                })
                .collect();
            assert_eq!(t.s_bad(d).unwrap(), expected, "d = {}", d);
        }
    }

    #[test]
    fn scans_pass() {
        let s4 = builtin_s4().unwrap();
        let r = scan_subgroup_pairs(&GroupData::new(&s4), "S4");
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.subgroups, 30);
        let gl = builtin_gl32().unwrap();
        let r = scan_subgroup_pairs(&GroupData::new(&gl), "GL(3,2)");
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.nontrivial_gassmann_pairs > 0);
    }

    #[test]
    fn group_files() {
        let text = r#"{"label": "s3", "degree": 3, "generators": [[1,2,0],[1,0,2]], "b1": {"stabilizer": 0}, "b2": {"generators": [[0,2,1]]}}"#;
        let t = parse_group_file(text, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(t.group.as_dyn().order(), 6);
        assert_eq!(t.b1, t.b2);
        let table = r#"{"table": [[0,1],[1,0]], "b1": {"generators": [1]}, "b2": {}}"#;
        let t = parse_group_file(table, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!((t.b1.len(), t.b2.len()), (2, 1));
        for bad in [
            "{",
            r#"{"table": [[0,1],[0,1]], "b1": {}, "b2": {}}"#,
            r#"{"degree": 3, "generators": [[0,0,1]], "b1": {}, "b2": {}}"#,
            r#"{"table": [[0]], "degree": 1, "generators": [[0]], "b1": {}, "b2": {}}"#,
        ] {
            assert!(matches!(parse_group_file(bad, DEFAULT_ORDER_CAP), Err(Error::Parse(_))), "{}", bad);
        }
        let big = r#"{"degree": 5, "generators": [[1,2,3,4,0],[1,0,2,3,4]], "b1": {}, "b2": {}}"#;
        assert!(matches!(parse_group_file(big, 100), Err(Error::Resource(_))));
    }
}
