//! Acceptance criteria, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;

use lengthspec::arithfields::{self, GroupData, GroupTriple};
use lengthspec::covers::{self, build_group, splitting_from_model, FrobType, GroupTable, RingKind, SplittingModel, SubgroupId};
use lengthspec::discriminant::{self, Family};
use lengthspec::groups::FiniteGroup;
use lengthspec::lengthsim::{self, SimConfig};
use lengthspec::weylchar::{self, CharacterCache, NTable};

struct Outcome {
    passed: bool,
    detail: String,
}

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn character_suite() -> Outcome {
    let cache = CharacterCache::new();
    let f_fail: Vec<usize> = (2..=11).filter(|&n| !discriminant::verify_f_expansion_with(n, &cache).unwrap_or(false)).collect();
    let table = NTable::new(14).expect("N table");
    let pairs: Vec<(usize, usize)> = (0..=6).flat_map(|m| (0..=m).map(move |k| (m, k))).collect();
    let smk_fail: Vec<(usize, usize)> = pairs
        .into_par_iter()
        .filter(|&(m, k)| !weylchar::verify_smk_decomposition_with(m, k, &table, &cache).unwrap_or(false))
        .collect();
    let n_report = weylchar::verify_n_recursion(12);
    let passed = f_fail.is_empty() && smk_fail.is_empty() && n_report.all_passed();
    outcome(
        passed,
        format!(
            "F_n failures {:?}, S_mk failures {:?}, N recursion failures {:?}",
            f_fail,
            smk_fail,
            n_report.failures()
        ),
    )
}

fn discriminant_identities() -> Outcome {
    let cache = CharacterCache::new();
    let mut targets: Vec<(Family, usize)> = (2..=8).map(|n| (Family::SO, n)).collect();
    targets.extend((2..=4).map(|n| (Family::SU, n)));
    targets.extend((2..=4).map(|n| (Family::Sp, n)));
    targets.push((Family::FII, 0));
    let mut failed = Vec::new();
    let mut sp_discrepancies = 0;
    for (f, n) in targets {
        let desc = discriminant::descriptor(f, n).expect("descriptor");
        let r = discriminant::verify_discriminant_expansion_with(&desc, &cache).expect("expansion");
        if !r.verified {
            failed.push(r.label.clone());
        }
        if f == Family::Sp {
            sp_discrepancies += r.discrepancies.len();
        }
    }
    outcome(
        failed.is_empty(),
        format!("failed identities {:?}; Sp case-list discrepancies reported: {}", failed, sp_discrepancies),
    )
}

fn fii_printed_combination() -> Outcome {
    let cache = CharacterCache::new();
    let ok = discriminant::verify_fii_printed_expansion(&cache).expect("FII");
    let show = |s: &lengthspec::IntCharSum| match discriminant::regroup(s, 4) {
        Ok(t) => t.render().join(" | "),
        Err(e) => e.to_string(),
    };
    let derived = discriminant::fii_spin_expansion(&cache).expect("FII spin");
    outcome(
        ok,
        format!(
            "eta rows stated [{}] vs derived [{}]",
            show(&discriminant::fii_printed_spin_expansion()),
            show(&derived)
        ),
    )
}

fn su_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut passed = true;
    for n in [2, 3] {
        let r = discriminant::verify_cor_discriminant_su(n, &discriminant::su_random_samples(n, 100, 2024)).expect("oracle");
        passed &= r.passed && r.samples == 100;
        worst = worst.max(r.max_relative_error);
    }
    outcome(passed, format!("max relative error {:.3e} (tolerance 1e-9)", worst))
}

fn vq_class_sizes(g: &GroupTable) -> Outcome {
    let q = 9usize;
    let allowed = [1, q * (q + 1), q * (q - 1), (q * q - 1) / 2];
    let rows = covers::vq_classes(g);
    let passed = rows.iter().all(|r| r.matches && allowed.contains(&r.size));
    let sizes: std::collections::BTreeSet<usize> = rows.iter().map(|r| r.size).collect();
    outcome(passed, format!("{} classes in V_q, sizes {:?}", rows.len(), sizes))
}

fn intersection_lemma(g: &GroupTable) -> Outcome {
    let mut bad = Vec::new();
    for b in SubgroupId::BOTH {
        for r in covers::intersection_counts(g, b) {
            if !r.matches {
                bad.push(format!("{:?} {} counted {} stated {}", b, r.type_tag, r.count, r.lemma_value));
            }
        }
    }
    bad.sort();
    bad.dedup();
    outcome(bad.is_empty(), format!("mismatching rows: {:?}", bad))
}

fn gassmann_lmnr(g: &GroupTable) -> Outcome {
    let gassmann = covers::gassmann_check(g.classes(), g.b1(), g.b2());
    let lmnr = covers::lmnr_check(g.classes(), g.b1(), g.b2());
    outcome(!gassmann && lmnr, format!("gassmann {}, lmnr {}", gassmann, lmnr))
}

fn splitting_lemma(g: &GroupTable) -> Outcome {
    match covers::verify_splitting_lemma(g) {
        Ok(r) => outcome(
            r.lemma_failures.is_empty() && r.elements_checked >= g.vq().len(),
            format!("{} elements checked, {} failures", r.elements_checked, r.lemma_failures.len()),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn printed_tables(g: &GroupTable) -> Outcome {
    let t = covers::splitting_table(g);
    outcome(
        t.mismatches.is_empty() && t.n_matches_printed == Some(true),
        format!("n computed {} vs formula {:?}; mismatches {:?}", t.n, t.n_printed_formula, t.mismatches),
    )
}

fn conservation(g: &GroupTable) -> Outcome {
    let mut checked = 0usize;
    let mut failures = Vec::new();
    let mut check = |model: &dyn SplittingModel, datum: &covers::FrobeniusDatum, label: &str| {
        for b in SubgroupId::BOTH {
            checked += 1;
            match splitting_from_model(model, datum, b) {
                Ok(s) if covers::conservation_holds(&s, model.index(b)) => {}
                Ok(_) => failures.push(format!("{} {:?} {}", label, b, datum.type_tag)),
                Err(e) => failures.push(format!("{} {:?}: {}", label, b, e)),
            }
        }
    };
    for &a in g.vq().iter().chain(&g.classes().reps) {
        check(g, &g.classify_frobenius(a), "p=3 gaussian");
    }
    for p in [3, 5, 7] {
        let r = build_group(p, RingKind::Rational).expect("rational group");
        for &a in &r.classes().reps {
            check(&r, &r.classify_frobenius(a), &format!("p={} rational", p));
        }
    }
    let records = lengthsim::generate(g, &SimConfig::new(3, 6.0, 5)).expect("records");
    for rec in &records {
        check(g, &rec.frobenius, "simulated");
    }
    outcome(failures.is_empty(), format!("{} (Frobenius, subgroup) pairs, failures {:?}", checked, failures))
}

fn laboratory(g: &GroupTable) -> Outcome {
    let cfg = SimConfig::new(3, 7.0, 42);
    let mut collide = cfg.clone();
    collide.collision_rate = 0.05;
    let mut details = Vec::new();
    let mut passed = true;
    for c in [&cfg, &collide] {
        let run = lengthsim::density_report(g, c).expect("run");
        let m = &run.manifest;
        let ids = &m.identity_checks;
        let records_ok = (10_000..=100_000).contains(&m.record_count);
        passed &= records_ok && ids.diff_exact && ids.same_length_sets && ids.piqr_exact && ids.triangle && m.bound_passed;
        details.push(format!(
            "collisions {}: {} records, {} events, diff {}, sets {}, ratio {:.4} <= {:.4}, piqr {}",
            c.collision_rate,
            m.record_count,
            ids.events_checked,
            ids.diff_exact,
            ids.same_length_sets,
            m.ratio,
            m.bound_with_slack,
            ids.piqr_exact
        ));
    }
    outcome(passed, details.join("; "))
}

fn perlis(g: &GroupTable) -> Outcome {
    let mut details = Vec::new();
    let mut passed = true;
    for (name, group) in [("S4", arithfields::builtin_s4().unwrap()), ("GL(3,2)", arithfields::builtin_gl32().unwrap())] {
        assert!(group.order() <= 500);
        let data = GroupData::new(&group);
        let scan = arithfields::scan_subgroup_pairs(&data, name);
        passed &= scan.passed();
        details.push(format!("{}: {} pairs, {} failures", name, scan.pairs, scan.failures.len()));
    }
    let data = arithfields::psl_group_data(g);
    let triple = GroupTriple::new(&data, "PSL_2 p=3", g.b1().to_vec(), g.b2().to_vec()).expect("triple");
    match triple.report() {
        Ok(r) => {
            passed &= r.degree_one_reduction && r.s_bad_one_matches_gassmann;
            details.push(format!("PSL_2 triple: d up to {}, reduction {}", r.exponent, r.degree_one_reduction));
        }
        Err(e) => {
            passed = false;
            details.push(format!("PSL_2 triple: {}", e));
        }
    }
    outcome(passed, details.join("; "))
}

fn determinism(g: &GroupTable) -> Outcome {
    let mut cfg = SimConfig::new(3, 6.5, 42);
    cfg.collision_rate = 0.05;
    let a = serde_json::to_string_pretty(&lengthsim::density_report(g, &cfg).unwrap().manifest).unwrap();
    let b = serde_json::to_string_pretty(&lengthsim::density_report(g, &cfg).unwrap().manifest).unwrap();
    outcome(a == b, format!("{} bytes, identical {}", a.len(), a == b))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let g = build_group(3, RingKind::Gaussian).expect("PSL_2 over Z[i]/9");
    assert_eq!(g.representative(FrobType::Trivial), Some(g.identity()));
    let criteria: Vec<(&str, Check<'_>)> = vec![
        ("1 character expansions", Box::new(character_suite)),
        ("2a discriminant identities", Box::new(discriminant_identities)),
        ("2b FII stated Spin(7) combination verbatim", Box::new(fii_printed_combination)),
        ("3 SU adjoint oracle", Box::new(su_oracle)),
        ("4a V_q class sizes", Box::new(|| vq_class_sizes(&g))),
        ("4b intersection counts against the stated lemma", Box::new(|| intersection_lemma(&g))),
        ("4c gassmann false, lmnr true", Box::new(|| gassmann_lmnr(&g))),
        ("4d splitting closed forms on all of V_q", Box::new(|| splitting_lemma(&g))),
        ("4e stated splitting tables and n", Box::new(|| printed_tables(&g))),
        ("5 splitting conservation", Box::new(|| conservation(&g))),
        ("6 length-spectrum laboratory", Box::new(|| laboratory(&g))),
        ("7 Perlis suite", Box::new(|| perlis(&g))),
        ("8 determinism", Box::new(|| determinism(&g))),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let t = Instant::now();
        let o = check();
        if !o.passed {
            failed += 1;
        }
        println!(
            "{} criterion {} [{:.1}s]: {}",
            if o.passed { "PASS" } else { "FAIL" },
            name,
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("{} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
