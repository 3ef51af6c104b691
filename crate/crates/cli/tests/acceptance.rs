//! End-to-end acceptance run over the four reference configurations.
//!
//! Each configuration runs the full verification suite twice per
//! transversal (the coordinate subspace and its image under the boost
//! `A(ln 2)`), and every criterion prints one PASS/FAIL line.

use std::path::Path;

use bruckloop_cli::config::SuiteConfig;
use bruckloop_cli::suite::{run_suite, without_timing, PropertyResult, SuiteReport};

const BOOST_LN2: &str = "boost:0.6931471805599453";

struct Reference {
    name: &'static str,
    n: usize,
    p1: usize,
    p2: usize,
    field: &'static str,
    dimension: usize,
}

const REFERENCES: [Reference; 4] = [
    Reference {
        name: "C1",
        n: 3,
        p1: 2,
        p2: 1,
        field: "real",
        dimension: 3,
    },
    Reference {
        name: "C2",
        n: 3,
        p1: 2,
        p2: 1,
        field: "complex",
        dimension: 6,
    },
    Reference {
        name: "C3",
        n: 4,
        p1: 2,
        p2: 2,
        field: "real",
        dimension: 6,
    },
    Reference {
        name: "C4",
        n: 4,
        p1: 3,
        p2: 1,
        field: "real",
        dimension: 4,
    },
];

fn config(r: &Reference, wtilde: &str) -> SuiteConfig {
    SuiteConfig {
        n: r.n,
        p1: r.p1,
        p2: r.p2,
        field: r.field.into(),
        carrier: 1,
        wtilde: wtilde.into(),
        seed: 1,
        ..SuiteConfig::default()
    }
}

fn run(cfg: &SuiteConfig) -> SuiteReport {
    let v = cfg
        .validate(Path::new("."))
        .expect("reference configuration is valid");
    run_suite(&v).expect("suite runs")
}

struct Run {
    label: String,
    expected_dimension: usize,
    boosted: bool,
    report: SuiteReport,
}

fn property<'a>(report: &'a SuiteReport, name: &str) -> &'a PropertyResult {
    report
        .properties
        .iter()
        .find(|p| p.property == name)
        .unwrap_or_else(|| panic!("report lacks `{name}`"))
}

/// Checks the named properties against the stated bound and sample count.
fn properties_hold(runs: &[Run], names: &[(&str, usize, f64)], notes: &mut Vec<String>) -> bool {
    let mut ok = true;
    for run in runs {
        for &(name, samples, bound) in names {
            let p = property(&run.report, name);
            let residual = p.max_residual.unwrap_or(f64::INFINITY);
            let good = p.pass && p.samples >= samples && p.tolerance <= bound && residual <= bound;
            if !good {
                notes.push(format!(
                    "{} {name}: residual {residual:e}, samples {}, error {:?}",
                    run.label, p.samples, p.error
                ));
            }
            ok &= good;
        }
    }
    ok
}

fn worst(runs: &[Run], name: &str) -> f64 {
    runs.iter()
        .map(|r| {
            property(&r.report, name)
                .max_residual
                .unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max)
}

fn line(k: usize, title: &str, ok: bool, detail: String) -> bool {
    println!(
        "criterion {k:>2} {}: {title} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn main() {
    let mut runs = Vec::new();
    for r in &REFERENCES {
        for (tag, wtilde) in [("W2", "standard"), ("A(ln2)W2", BOOST_LN2)] {
            runs.push(Run {
                label: format!("{} {tag}", r.name),
                expected_dimension: r.dimension,
                boosted: wtilde != "standard",
                report: run(&config(r, wtilde)),
            });
        }
    }

    let mut results = Vec::new();
    let mut notes = Vec::new();

    let closure = properties_hold(&runs, &[("sigma_closure", 1000, 1e-9)], &mut notes);
    let slowest = runs
        .iter()
        .map(|r| property(&r.report, "sigma_closure").seconds)
        .fold(0.0, f64::max);
    results.push(line(
        1,
        "matrix-loop closure",
        closure && slowest < 10.0,
        format!(
            "worst {:e}, slowest {slowest:.2} s",
            worst(&runs, "sigma_closure")
        ),
    ));

    let bruck = properties_hold(
        &runs,
        &[("bol", 1000, 1e-8), ("automorphic_inverse", 1000, 1e-8)],
        &mut notes,
    );
    results.push(line(
        2,
        "Bol and automorphic inverse identities",
        bruck,
        format!(
            "bol {:e}, aip {:e}",
            worst(&runs, "bol"),
            worst(&runs, "automorphic_inverse")
        ),
    ));

    let conj = properties_hold(&runs, &[("conjugation_closure", 500, 1e-9)], &mut notes);
    results.push(line(
        3,
        "closure under conjugation",
        conj,
        format!("worst {:e}", worst(&runs, "conjugation_closure")),
    ));

    let factor = properties_hold(
        &runs,
        &[
            ("factorization_factors", 500, 1e-8),
            ("factorization_reconstruction", 500, 1e-10),
        ],
        &mut notes,
    );
    results.push(line(
        4,
        "polar factorization",
        factor,
        format!(
            "factors {:e}, reconstruction {:e}",
            worst(&runs, "factorization_factors"),
            worst(&runs, "factorization_reconstruction")
        ),
    ));

    let boost = properties_hold(&runs, &[("coaxial_boost", 1, 1e-10)], &mut notes);
    results.push(line(
        5,
        "coaxial boost oracle",
        boost,
        format!("worst {:e}", worst(&runs, "coaxial_boost")),
    ));

    let sharp = properties_hold(
        &runs,
        &[
            ("sharp_transitivity", 200, 1e-8),
            ("sharp_transitivity_stability", 200, 1e-6),
        ],
        &mut notes,
    );
    results.push(line(
        6,
        "sharp transitivity",
        sharp,
        format!(
            "residual {:e}, stability {:e}",
            worst(&runs, "sharp_transitivity"),
            worst(&runs, "sharp_transitivity_stability")
        ),
    ));

    let ext = properties_hold(
        &runs,
        &[
            ("extension_loop_axioms", 500, 1e-8),
            ("extension_left_translation", 200, 1e-8),
            ("infinity_compatibility", 500, 1e-9),
        ],
        &mut notes,
    );
    results.push(line(
        7,
        "extension loop axioms",
        ext,
        format!(
            "axioms {:e}, compatibility {:e}",
            worst(&runs, "extension_loop_axioms"),
            worst(&runs, "infinity_compatibility")
        ),
    ));

    let mut dims = Vec::new();
    let mut dim_ok = true;
    for run in &runs {
        let d = &run.report.dimension;
        let good = d.pass
            && d.estimated == Some(run.expected_dimension)
            && d.points == 20
            && d.failed * 10 <= d.points;
        if !good {
            notes.push(format!("{} dimension: {d:?}", run.label));
        }
        dim_ok &= good;
        dims.push(format!("{}={:?}", run.label, d.estimated));
    }
    results.push(line(8, "orbit dimension", dim_ok, dims.join(", ")));

    let mut witness_ok = true;
    let mut displacements = Vec::new();
    for run in runs.iter().filter(|r| r.boosted) {
        let found = run.report.witness.as_ref().filter(|w| {
            w.found
                && w.sample.is_some_and(|s| s <= 100)
                && w.displacement.is_some_and(|d| d > 1e-3)
        });
        match found {
            Some(w) => displacements.push(format!("{}={:.3}", run.label, w.displacement.unwrap())),
            None => {
                notes.push(format!("{} witness: {:?}", run.label, run.report.witness));
                witness_ok = false;
            }
        }
    }
    results.push(line(
        9,
        "non-isomorphism witness",
        witness_ok,
        displacements.join(", "),
    ));

    let mut identical = true;
    for r in [&REFERENCES[0], &REFERENCES[1]] {
        let cfg = config(r, BOOST_LN2);
        let a = serde_json::to_string_pretty(&without_timing(
            &serde_json::to_value(run(&cfg)).unwrap(),
        ))
        .unwrap();
        let b = serde_json::to_string_pretty(&without_timing(
            &serde_json::to_value(run(&cfg)).unwrap(),
        ))
        .unwrap();
        if a != b {
            notes.push(format!("{} reports differ", r.name));
            identical = false;
        }
    }
    results.push(line(
        10,
        "deterministic reports",
        identical,
        "C1 and C2, boosted transversal".into(),
    ));

    for n in &notes {
        println!("  {n}");
    }
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(k, _)| k + 1)
        .collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
