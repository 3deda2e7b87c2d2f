use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use lengthspec::arithfields::{self, GroupData, GroupTriple};
use lengthspec::covers::{self, ClosedFormModel, RingKind, SplittingModel, SubgroupId};
use lengthspec::discriminant::{self, Family};
use lengthspec::lengthsim::{self, ModelKind, SimConfig};
use lengthspec::weylchar::{self, CharacterCache, NTable};
use lengthspec::SCHEMA_VERSION;

const HARD_GROUP_CAP: u64 = 50_000_000;
const HARD_RECORD_CAP: u64 = 20_000_000;
const HARD_ORDER_CAP: usize = 100_000;

#[derive(Parser, Debug)]
#[command(name = "lengthspec", version, about = "Exact identity checks and length-spectrum simulations")]
struct Cli {
    /// Report format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ModelChoice {
    Auto,
    Enumerated,
    ClosedForm,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Builtin {
    Psl,
    Gl32,
    S4,
    Same,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Character expansions, S_{m,k} decompositions and the N recursion.
    VerifyCharacters {
        #[arg(long, default_value_t = 6)]
        max_rank: usize,
        /// Overwrite one N table entry, given as n,k,value.
        #[arg(long, hide = true)]
        corrupt_n: Option<String>,
    },
    /// Discriminant expansions per rank-one family.
    VerifyDiscriminant {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// PSL_2 census, intersection counts and splitting tables.
    Splitting {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value = "gaussian")]
        ring: String,
        #[arg(long, env = "LENGTHSPEC_GROUP_CAP", default_value_t = covers::DEFAULT_GROUP_CAP)]
        group_cap: u64,
        /// Write the splitting table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Exit 1 when a stated table disagrees with the computed one.
        #[arg(long)]
        strict: bool,
    },
    /// Seeded length-spectrum run for the two covers.
    Simulate {
        #[arg(long)]
        p: u64,
        #[arg(long = "T", alias = "t")]
        t: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "gaussian")]
        ring: String,
        #[arg(long, value_enum, default_value_t = ModelChoice::Auto)]
        model: ModelChoice,
        /// Share lengths between consecutive records at this rate.
        #[arg(long, num_args = 0..=1, default_missing_value = "0.05", default_value_t = 0.0)]
        collisions: f64,
        #[arg(long, default_value_t = 1.25)]
        slack: f64,
        #[arg(long, env = "LENGTHSPEC_RECORD_CAP", default_value_t = lengthsim::DEFAULT_RECORD_CAP)]
        record_cap: u64,
        #[arg(long, env = "LENGTHSPEC_GROUP_CAP", default_value_t = covers::DEFAULT_GROUP_CAP)]
        group_cap: u64,
        /// Write (length, m1, m2) rows as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Bad sets and the degree-one reduction for a subgroup pair.
    Gassmann {
        #[arg(long, value_enum, default_value_t = Builtin::Psl, conflicts_with = "file")]
        builtin: Builtin,
        /// JSON group file.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Also scan every subgroup pair of the group.
        #[arg(long)]
        scan: bool,
        #[arg(long, env = "LENGTHSPEC_ORDER_CAP", default_value_t = arithfields::DEFAULT_ORDER_CAP)]
        order_cap: usize,
    },
}

struct Outcome {
    report: Value,
    text: String,
    passed: bool,
}

fn ring_kind(s: &str) -> anyhow::Result<RingKind> {
    Ok(s.parse::<RingKind>()?)
}

fn check_cap<T: PartialOrd + std::fmt::Display>(name: &str, value: T, hard: T) -> anyhow::Result<()> {
    if value > hard {
        return Err(lengthspec::Error::Resource(format!("{} {} is above the hard limit {}", name, value, hard)).into());
    }
    Ok(())
}

fn envelope(command: &str, config: Value, passed: bool, result: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "passed": passed,
        "result": result,
    })
}

fn verify_characters(max_rank: usize, corrupt: Option<&str>) -> anyhow::Result<Outcome> {
    if max_rank == 0 || max_rank > 7 {
        return Err(lengthspec::Error::Domain(format!("max rank must be in 1..=7, got {}", max_rank)).into());
    }
    let n_max = 2 * max_rank as i64;
    let mut table = NTable::new(n_max + 1)?;
    if let Some(spec) = corrupt {
        let parts: Vec<i64> = spec
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|e| lengthspec::Error::Parse(format!("corrupt-n: {}", e)))?;
        if parts.len() != 3 || parts[2] < 0 {
            return Err(lengthspec::Error::Parse("corrupt-n takes n,k,value".into()).into());
        }
        table.corrupt(parts[0], parts[1], parts[2] as u64);
    }
    let cache = CharacterCache::new();
    let mut report = weylchar::IdentityReport::default();
    for n in 2..=(2 * max_rank - 1) {
        report.push(format!("F_{} expansion", n), discriminant::verify_f_expansion_with(n, &cache).unwrap_or(false));
    }
    report.extend(weylchar::character_suite(max_rank, &table, &cache));
    report.extend(weylchar::verify_n_recursion_with(&table, n_max));
    let passed = report.all_passed();
    let failures = report.failures();
    let text = format!(
        "{} identities checked, {} failed{}\n",
        report.checks.len(),
        failures.len(),
        failures.iter().map(|f| format!("\n  FAILED {}", f)).collect::<String>()
    );
    let config = json!({ "max_rank": max_rank, "corrupt_n": corrupt });
    let result = json!({ "checks": report.checks, "failures": failures });
    Ok(Outcome { report: envelope("verify-characters", config, passed, result), text, passed })
}

fn verify_discriminant(family: Option<&str>, n: Option<usize>, samples: usize, seed: u64) -> anyhow::Result<Outcome> {
    let targets: Vec<(Family, usize)> = match (family, n) {
        (None, None) => {
            let mut t: Vec<(Family, usize)> = (2..=8).map(|n| (Family::SO, n)).collect();
            t.extend((2..=4).map(|n| (Family::SU, n)));
            t.extend((2..=4).map(|n| (Family::Sp, n)));
            t.push((Family::FII, 0));
            t
        }
        (None, Some(_)) => bail!(lengthspec::Error::Parse("--n needs --family".into())),
        (Some(f), n) => {
            let f: Family = f.parse()?;
            match (f, n) {
                (Family::FII, _) => vec![(f, 0)],
                (_, Some(n)) => vec![(f, n)],
                (Family::SO, None) => (2..=8).map(|n| (f, n)).collect(),
                (_, None) => (2..=4).map(|n| (f, n)).collect(),
            }
        }
    };
    let cache = CharacterCache::new();
    let mut reports = Vec::new();
    let mut text = String::new();
    let mut passed = true;
    for (f, n) in &targets {
        let desc = discriminant::descriptor(*f, *n)?;
        let r = discriminant::verify_discriminant_expansion_with(&desc, &cache)?;
        passed &= r.verified;
        text.push_str(&format!("{}: {}\n", r.label, if r.verified { "verified" } else { "FAILED" }));
        for (q, eta) in r.eta_table.iter().enumerate() {
            text.push_str(&format!("  eta_{} = {}\n", q, eta));
        }
        for w in &r.warnings {
            text.push_str(&format!("  warning: {}\n", w));
        }
        for d in &r.discrepancies {
            text.push_str(&format!(
                "  q = {}: stated {} derived {}\n",
                d.q,
                d.printed.as_deref().unwrap_or("(none)"),
                d.derived
            ));
        }
        reports.push(r);
    }
    let mut oracle = Vec::new();
    for &(f, n) in &targets {
        if f == Family::SU && (2..=4).contains(&n) && samples > 0 {
            let r = discriminant::verify_cor_discriminant_su(n, &discriminant::su_random_samples(n, samples, seed))?;
            passed &= r.passed;
            text.push_str(&format!("SU({},1) adjoint oracle: max relative error {:.3e}\n", n + 1, r.max_relative_error));
            oracle.push(r);
        }
    }
    if family.is_some_and(|f| f.eq_ignore_ascii_case("fii")) {
        let spin = discriminant::fii_spin_expansion(&cache)?;
        text.push_str(&format!("Spin(7) expansion of the spin factor: {}\n", discriminant::render_virtual(&spin)));
    }
    let config = json!({ "family": family, "n": n, "samples": samples, "seed": seed });
    let result = json!({ "families": reports, "su_oracle": oracle });
    Ok(Outcome { report: envelope("verify-discriminant", config, passed, result), text, passed })
}

fn write_csv<P: AsRef<Path>>(path: P, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path.as_ref()).with_context(|| format!("cannot write {}", path.as_ref().display()))?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

fn splitting(p: u64, ring: &str, group_cap: u64, csv_path: Option<&Path>, strict: bool) -> anyhow::Result<Outcome> {
    check_cap("group cap", group_cap, HARD_GROUP_CAP)?;
    let kind = ring_kind(ring)?;
    let g = covers::build_group_with_cap(p, kind, group_cap)?;
    let census = covers::census(&g);
    let vq = covers::vq_classes(&g);
    let inter: BTreeMap<String, Vec<covers::IntersectionRow>> =
        SubgroupId::BOTH.iter().map(|&b| (format!("{:?}", b), covers::intersection_counts(&g, b))).collect();
    let gassmann = covers::gassmann_check(g.classes(), g.b1(), g.b2());
    let lmnr = covers::lmnr_check(g.classes(), g.b1(), g.b2());
    let lemma = covers::verify_splitting_lemma(&g)?;
    let table = covers::splitting_table(&g);
    let vq_ok = vq.iter().all(|r| r.matches);
    let inter_mismatches: Vec<String> = inter
        .iter()
        .flat_map(|(b, rows)| {
            rows.iter()
                .filter(|r| !r.matches)
                .map(move |r| format!("{} {}: counted {}, stated {}", b, r.type_tag, r.count, r.lemma_value))
        })
        .collect();
    let mut stated_mismatches = inter_mismatches.clone();
    stated_mismatches.extend(table.mismatches.iter().cloned());
    let derived_ok = vq_ok && lemma.passed() && lmnr;
    let passed = derived_ok && (!strict || stated_mismatches.is_empty());
    if let Some(path) = csv_path {
        let rows = table.rows.iter().map(|r| {
            vec![
                r.type_tag.to_string(),
                r.chi[0].to_string(),
                r.chi[1].to_string(),
                r.coeff_d0[0].to_string(),
                r.coeff_pd0[0].to_string(),
                r.coeff_d0[1].to_string(),
                r.coeff_pd0[1].to_string(),
            ]
        });
        write_csv(path, &["type", "chi_b1", "chi_b2", "b1_d0", "b1_pd0", "b2_d0", "b2_pd0"], rows)?;
    }
    let mut text = format!(
        "PSL_2 over {} ring, p = {}: order {}, {} classes\nV_q class sizes {}\nsplitting closed forms on {} elements: {}\ngassmann {}, lmnr {}\nn = {}{}\n",
        kind,
        p,
        census.order,
        census.class_count,
        if vq_ok { "match" } else { "MISMATCH" },
        lemma.elements_checked,
        if lemma.passed() { "hold" } else { "FAIL" },
        gassmann,
        lmnr,
        table.n,
        table.n_printed_formula.map(|v| format!(" (stated formula {})", v)).unwrap_or_default()
    );
    for m in &stated_mismatches {
        text.push_str(&format!("  differs from stated value: {}\n", m));
    }
    let config = json!({ "p": p, "ring": kind, "group_cap": group_cap, "strict": strict });
    let result = json!({
        "census": census,
        "vq_classes": vq,
        "intersections": inter,
        "gassmann": gassmann,
        "lmnr": lmnr,
        "splitting_lemma": lemma,
        "splitting_table": table,
        "stated_mismatches": stated_mismatches,
    });
    Ok(Outcome { report: envelope("splitting", config, passed, result), text, passed })
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    p: u64,
    t: f64,
    seed: u64,
    ring: &str,
    model: ModelChoice,
    collisions: f64,
    slack: f64,
    record_cap: u64,
    group_cap: u64,
    csv_path: Option<&Path>,
) -> anyhow::Result<Outcome> {
    check_cap("record cap", record_cap, HARD_RECORD_CAP)?;
    check_cap("group cap", group_cap, HARD_GROUP_CAP)?;
    let kind = ring_kind(ring)?;
    let ring_obj = covers::Ring::new(p, kind)?;
    let enumerate = match model {
        ModelChoice::Enumerated => true,
        ModelChoice::ClosedForm => false,
        ModelChoice::Auto => ring_obj.psl_order() <= group_cap as u128,
    };
    let mut cfg = SimConfig::new(p, t, seed);
    cfg.ring = kind;
    cfg.collision_rate = collisions;
    cfg.slack = slack;
    cfg.record_cap = record_cap;
    cfg.model = if enumerate { ModelKind::Enumerated } else { ModelKind::ClosedForm };
    let table;
    let closed;
    let m: &dyn SplittingModel = if enumerate {
        table = covers::build_group_with_cap(p, kind, group_cap)?;
        &table
    } else {
        closed = ClosedFormModel::new(p, kind)?;
        &closed
    };
    let run = lengthsim::density_report(m, &cfg)?;
    let man = &run.manifest;
    if let Some(path) = csv_path {
        let rows = lengthsim::table_rows(&run.table_b1, &run.table_b2, cfg.t_ticks())
            .into_iter()
            .map(|(l, a, b)| vec![format!("{:.12}", l), a.to_string(), b.to_string()]);
        write_csv(path, &["length", "m1", "m2"], rows)?;
    }
    let passed = man.passed();
    let ids = &man.identity_checks;
    let text = format!(
        "{} records up to T = {} ({})\nD_L = {}, Li = {:.6e}, ratio {:.6} vs bound {:.6} x {} -> {}\nidentities: difference {}, piqr {}, triangle {}, same length sets {}\n",
        man.record_count,
        t,
        man.model,
        man.d_l,
        man.li,
        man.ratio,
        man.bound,
        slack,
        if man.bound_passed { "ok" } else { "EXCEEDED" },
        ids.diff_exact,
        ids.piqr_exact,
        ids.triangle,
        ids.same_length_sets
    );
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "simulate",
        "passed": passed,
        "manifest": man,
    });
    Ok(Outcome { report, text, passed })
}

fn gassmann(builtin: Builtin, file: Option<&Path>, scan: bool, order_cap: usize) -> anyhow::Result<Outcome> {
    check_cap("order cap", order_cap, HARD_ORDER_CAP)?;
    let psl;
    let perm;
    let loaded;
    let (data, b1, b2, label) = if let Some(path) = file {
        let text = fs::read_to_string(path)
            .map_err(|e| lengthspec::Error::Parse(format!("cannot read {}: {}", path.display(), e)))?;
        loaded = arithfields::parse_group_file(&text, order_cap)?;
        (GroupData::new(loaded.group.as_dyn()), loaded.b1.clone(), loaded.b2.clone(), loaded.label.clone())
    } else {
        match builtin {
            Builtin::Psl => {
                psl = covers::build_group(3, RingKind::Gaussian)?;
                let (b1, b2) = (psl.b1().to_vec(), psl.b2().to_vec());
                (arithfields::psl_group_data(&psl), b1, b2, "PSL_2 over Z[i]/9, p = 3".to_string())
            }
            Builtin::Gl32 => {
                perm = arithfields::builtin_gl32()?;
                let (b1, b2) = arithfields::gl32_triple_subgroups(&perm);
                (GroupData::new(&perm), b1, b2, "GL(3,2), point and line stabilizers".to_string())
            }
            Builtin::S4 => {
                perm = arithfields::builtin_s4()?;
                let (b1, b2) = (perm.stabilizer(0), perm.set_stabilizer(&[0, 1]));
                (GroupData::new(&perm), b1, b2, "S4, point and pair stabilizers".to_string())
            }
            Builtin::Same => {
                perm = arithfields::builtin_s4()?;
                let b = perm.stabilizer(0);
                (GroupData::new(&perm), b.clone(), b, "S4, identical subgroups".to_string())
            }
        }
    };
    let triple = GroupTriple::new(&data, label, b1, b2)?;
    let report = triple.report()?;
    let scan_report = scan.then(|| arithfields::scan_subgroup_pairs(&data, &report.label));
    let passed = report.degree_one_reduction && report.s_bad_one_matches_gassmann && scan_report.as_ref().is_none_or(|s| s.passed());
    let nonempty: Vec<String> =
        report.s_bad_sizes.iter().filter(|(_, &s)| s > 0).map(|(d, s)| format!("d={}:{}", d, s)).collect();
    let mut text = format!(
        "{}: |A| = {}, indices {} and {}, exponent {}\ngassmann {}, lmnr {}, degree-one reduction {}\nnonempty bad sets: {}\n",
        report.label,
        report.order,
        report.index_b1,
        report.index_b2,
        report.exponent,
        report.gassmann,
        report.lmnr,
        report.degree_one_reduction,
        if nonempty.is_empty() { "none".to_string() } else { nonempty.join(" ") }
    );
    if let Some(s) = &scan_report {
        text.push_str(&format!(
            "scan: {} subgroups, {} pairs, {} gassmann ({} with distinct subgroups), {} failures\n",
            s.subgroups,
            s.pairs,
            s.gassmann_pairs,
            s.nontrivial_gassmann_pairs,
            s.failures.len()
        ));
    }
    let config = json!({
        "builtin": if file.is_some() { None } else { Some(builtin) },
        "file": file.map(|f| f.display().to_string()),
        "scan": scan,
        "order_cap": order_cap,
    });
    let result = json!({ "triple": report, "scan": scan_report });
    Ok(Outcome { report: envelope("gassmann", config, passed, result), text, passed })
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::VerifyCharacters { max_rank, corrupt_n } => verify_characters(*max_rank, corrupt_n.as_deref()),
        Command::VerifyDiscriminant { family, n, samples, seed } => verify_discriminant(family.as_deref(), *n, *samples, *seed),
        Command::Splitting { p, ring, group_cap, csv, strict } => splitting(*p, ring, *group_cap, csv.as_deref(), *strict),
        Command::Simulate { p, t, seed, ring, model, collisions, slack, record_cap, group_cap, csv } => {
            simulate(*p, *t, *seed, ring, *model, *collisions, *slack, *record_cap, *group_cap, csv.as_deref())
        }
        Command::Gassmann { builtin, file, scan, order_cap } => gassmann(*builtin, file.as_deref(), *scan, *order_cap),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<lengthspec::Error>() {
        Some(e) if e.is_input_error() => 2,
        Some(_) => 1,
        None => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let json = serde_json::to_string_pretty(&outcome.report).expect("reports serialize");
            if let Some(path) = &cli.output {
                if let Err(e) = fs::write(path, format!("{}\n", json)) {
                    eprintln!("error: cannot write {}: {}", path.display(), e);
                    return ExitCode::from(2);
                }
            }
            let mut out = std::io::stdout().lock();
            let _ = match cli.format {
                Format::Json => writeln!(out, "{}", json),
                Format::Text => write!(out, "{}", outcome.text),
            };
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(exit_code(&e))
        }
    }
}
