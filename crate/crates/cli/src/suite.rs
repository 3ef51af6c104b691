//! The verification suite behind `verify`.
//!
//! Every property draws from its own stream, forked from the configured
//! seed by the property name, so results do not depend on which other
//! properties run or in which order. Properties run on scoped threads and
//! the report lists them sorted by name.

use std::time::Instant;

use bruckloop::affine::subspace_distance;
use bruckloop::extension::{
    dimension_rank_check, expected_dimension, nonisomorphism_witness, ExtensionConfig,
    ExtensionLoop,
};
use bruckloop::forms::boost;
use bruckloop::loops::{
    check_aip, check_bol, check_left_a, check_loop_axioms, check_two_sided_inverses,
    IdentityReport, Loop,
};
use bruckloop::properties::{
    check_conjugation_closure, check_factorization, check_infinity_compatibility,
    check_left_translation, check_sharp_transitivity, check_sigma_closure, check_transversality,
};
use bruckloop::{Complex64, Error, Field, Matrix, MatrixLoop, SampleStream, Scalar};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{SuiteConfig, Validated};
use crate::json::element_to_json;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub property: String,
    pub samples: usize,
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    /// Informational properties never affect the overall verdict.
    pub required: bool,
    pub error: Option<String>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionResult {
    pub expected: usize,
    pub estimated: Option<usize>,
    pub points: usize,
    pub ranks: Vec<usize>,
    pub min_gap: Option<f64>,
    pub failed: usize,
    pub pass: bool,
    pub error: Option<String>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessResult {
    pub budget: usize,
    pub threshold: f64,
    pub found: bool,
    pub sample: Option<usize>,
    pub displacement: Option<f64>,
    pub g: Option<Value>,
    pub error: Option<String>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub properties: Vec<PropertyResult>,
    pub dimension: DimensionResult,
    /// Present when the transversal differs from the coordinate subspace.
    pub witness: Option<WitnessResult>,
    pub pass: bool,
    pub total_seconds: f64,
}

/// FNV-1a, used to key property streams by name.
fn label(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Stream of the named property.
pub fn stream_for(seed: u64, name: &str) -> SampleStream {
    SampleStream::new(seed).fork(label(name))
}

type Outcome = Result<Vec<IdentityReport>, Error>;

struct Task<'a> {
    /// Names of the reports the task produces, in order.
    names: &'static [&'static str],
    required: bool,
    samples: usize,
    tolerances: Vec<f64>,
    run: Box<dyn FnOnce(&mut SampleStream) -> Outcome + Send + 'a>,
}

fn task<'a>(
    names: &'static [&'static str],
    required: bool,
    samples: usize,
    tolerances: Vec<f64>,
    run: impl FnOnce(&mut SampleStream) -> Outcome + Send + 'a,
) -> Task<'a> {
    Task {
        names,
        required,
        samples,
        tolerances,
        run: Box::new(run),
    }
}

fn one(r: Result<IdentityReport, Error>) -> Outcome {
    r.map(|r| vec![r])
}

fn two(r: Result<(IdentityReport, IdentityReport), Error>) -> Outcome {
    r.map(|(a, b)| vec![a, b])
}

/// Automorphic-inverse measurement that reports disagreeing one-sided
/// inverses as a residual instead of an error.
fn measured_aip<L: Loop>(l: &L, s: &mut SampleStream, count: usize, tol: f64) -> Outcome {
    match check_aip(l, s, count, tol) {
        Err(Error::InversesDisagree { distance }) => Ok(vec![IdentityReport::new(
            "automorphic_inverse",
            count,
            distance,
            tol,
        )]),
        r => one(r),
    }
}

/// `A(ln 2)∘A(ln 2)` against the boost with `cosh = 2.125`, `sinh = 1.875`.
fn coaxial_boost<T: Scalar>(l: &MatrixLoop<T>, tol: f64) -> Result<IdentityReport, Error> {
    let a = boost::<T>(&l.form, std::f64::consts::LN_2);
    let got = l.mul(&a, &a)?;
    let mut expected = Matrix::<T>::identity(l.form.n);
    let (p, q) = (l.form.p1 - 1, l.form.p1);
    expected[(p, p)] = T::from_real(2.125);
    expected[(q, q)] = T::from_real(2.125);
    expected[(p, q)] = T::from_real(1.875);
    expected[(q, p)] = T::from_real(1.875);
    let err = (got.matrix() - &expected).max_abs();
    Ok(IdentityReport::new("coaxial_boost", 1, err, tol))
}

fn tasks<'a, T: Scalar>(
    cfg: &'a SuiteConfig,
    ml: &'a MatrixLoop<T>,
    el: &'a ExtensionLoop<T>,
) -> Vec<Task<'a>> {
    let n = &cfg.samples;
    let t = &cfg.tolerance;
    vec![
        task(
            &["sigma_closure"],
            true,
            n.closure,
            vec![t.closure],
            move |s| one(check_sigma_closure(ml, s, n.closure, t.closure)),
        ),
        task(
            &["loop_axioms"],
            true,
            n.closure,
            vec![t.identities],
            move |s| one(check_loop_axioms(ml, s, n.closure, t.identities)),
        ),
        task(&["bol"], true, n.bol, vec![t.identities], move |s| {
            one(check_bol(ml, s, n.bol, t.identities))
        }),
        task(
            &["automorphic_inverse"],
            true,
            n.aip,
            vec![t.identities],
            move |s| one(check_aip(ml, s, n.aip, t.identities)),
        ),
        task(&["left_a"], false, n.left_a, vec![t.identities], move |s| {
            one(check_left_a(ml, s, n.left_a, t.identities))
        }),
        task(
            &["conjugation_closure"],
            true,
            n.conjugation,
            vec![t.conjugation],
            move |s| {
                one(check_conjugation_closure(
                    ml,
                    s,
                    n.conjugation,
                    t.conjugation,
                ))
            },
        ),
        task(
            &["factorization_factors", "factorization_reconstruction"],
            true,
            n.factorization,
            vec![t.factors, t.reconstruction],
            move |s| {
                two(check_factorization(
                    ml,
                    s,
                    n.factorization,
                    t.factors,
                    t.reconstruction,
                ))
            },
        ),
        task(
            &["coaxial_boost"],
            true,
            1,
            vec![t.boost_oracle],
            move |_| one(coaxial_boost(ml, t.boost_oracle)),
        ),
        task(
            &["transversality"],
            true,
            n.transversality,
            vec![t.transversality],
            move |s| {
                one(check_transversality(
                    &el.cfg,
                    s,
                    n.transversality,
                    t.transversality,
                ))
            },
        ),
        task(
            &["extension_loop_axioms"],
            true,
            n.extension_axioms,
            vec![t.extension],
            move |s| one(check_loop_axioms(el, s, n.extension_axioms, t.extension)),
        ),
        task(
            &["extension_left_translation"],
            true,
            n.left_translation,
            vec![t.extension],
            move |s| {
                one(check_left_translation(
                    el,
                    s,
                    n.left_translation,
                    t.extension,
                ))
            },
        ),
        task(
            &["infinity_compatibility"],
            true,
            n.compatibility,
            vec![t.compatibility],
            move |s| {
                one(check_infinity_compatibility(
                    el,
                    s,
                    n.compatibility,
                    t.compatibility,
                ))
            },
        ),
        task(
            &["sharp_transitivity", "sharp_transitivity_stability"],
            true,
            n.sharp_transitivity,
            vec![t.extension, t.stability],
            move |s| {
                two(check_sharp_transitivity(
                    el,
                    s,
                    n.sharp_transitivity,
                    t.extension,
                    t.stability,
                ))
            },
        ),
        task(
            &["extension_two_sided_inverses"],
            false,
            n.extension_identities,
            vec![t.extension],
            move |s| {
                one(check_two_sided_inverses(
                    el,
                    s,
                    n.extension_identities,
                    t.extension,
                ))
            },
        ),
        task(
            &["extension_bol"],
            false,
            n.extension_identities,
            vec![t.extension],
            move |s| one(check_bol(el, s, n.extension_identities, t.extension)),
        ),
        task(
            &["extension_automorphic_inverse"],
            false,
            n.extension_identities,
            vec![t.extension],
            move |s| measured_aip(el, s, n.extension_identities, t.extension),
        ),
    ]
}

fn finish(
    task_names: &[&str],
    required: bool,
    samples: usize,
    tols: &[f64],
    outcome: Outcome,
    seconds: f64,
) -> Vec<PropertyResult> {
    match outcome {
        Ok(reports) => reports
            .iter()
            .zip(task_names)
            .map(|(r, name)| PropertyResult {
                property: (*name).to_string(),
                samples: r.samples,
                max_residual: r.max_residual.is_finite().then_some(r.max_residual),
                tolerance: r.tolerance,
                pass: r.pass,
                required,
                error: None,
                seconds,
            })
            .collect(),
        Err(e) => task_names
            .iter()
            .zip(tols)
            .map(|(name, &tolerance)| PropertyResult {
                property: (*name).to_string(),
                samples,
                max_residual: None,
                tolerance,
                pass: false,
                required,
                error: Some(e.to_string()),
                seconds,
            })
            .collect(),
    }
}

fn run_dimension<T: Scalar>(v: &Validated, cfg: &ExtensionConfig<T>) -> DimensionResult {
    let start = Instant::now();
    let points = v.config.samples.dimension_points;
    let expected = expected_dimension(&v.form, v.carrier, T::FIELD);
    let mut stream = stream_for(v.config.seed, "dimension");
    let r = dimension_rank_check(cfg, &mut stream, points);
    let seconds = start.elapsed().as_secs_f64();
    match r {
        Ok(est) => DimensionResult {
            expected,
            estimated: Some(est.rank),
            points,
            min_gap: est.gaps.iter().copied().reduce(f64::min),
            ranks: est.ranks,
            failed: est.failed,
            pass: est.rank == expected,
            error: None,
            seconds,
        },
        Err(e) => DimensionResult {
            expected,
            estimated: None,
            points,
            ranks: Vec::new(),
            min_gap: None,
            failed: 0,
            pass: false,
            error: Some(e.to_string()),
            seconds,
        },
    }
}

/// Whether the transversal differs from the coordinate subspace `Wⱼ`.
pub fn transversal_moved<T: Scalar>(cfg: &ExtensionConfig<T>) -> bool {
    let standard = cfg.carrier().complement().subspace::<T>(cfg.form());
    subspace_distance(&standard, cfg.wtilde()).map_or(true, |d| d > cfg.tolerance().abs)
}

fn run_witness<T: Scalar>(v: &Validated, cfg: &ExtensionConfig<T>) -> Option<WitnessResult> {
    if !transversal_moved(cfg) {
        return None;
    }
    let start = Instant::now();
    let budget = v.config.samples.witness_budget;
    let threshold = v.config.tolerance.witness_threshold;
    let mut stream = stream_for(v.config.seed, "witness");
    let r = nonisomorphism_witness(cfg, &mut stream, budget, threshold);
    let seconds = start.elapsed().as_secs_f64();
    Some(match r {
        Ok(w) => WitnessResult {
            budget,
            threshold,
            found: true,
            sample: Some(w.sample),
            displacement: Some(w.displacement),
            g: Some(element_to_json(w.g.matrix(), w.g.form())),
            error: None,
            seconds,
        },
        Err(e) => WitnessResult {
            budget,
            threshold,
            found: false,
            sample: None,
            displacement: None,
            g: None,
            error: Some(e.to_string()),
            seconds,
        },
    })
}

fn run_typed<T: Scalar>(v: &Validated) -> Result<SuiteReport, CliError> {
    let start = Instant::now();
    let ext_cfg = v.extension::<T>()?;
    let ml = ext_cfg.matrix_loop();
    let el = ExtensionLoop::new(ext_cfg.clone());
    let seed = v.config.seed;

    let (mut properties, dimension, witness) = std::thread::scope(|scope| {
        let handles: Vec<_> = tasks(&v.config, &ml, &el)
            .into_iter()
            .map(|t| {
                scope.spawn(move || {
                    let begun = Instant::now();
                    let mut stream = stream_for(seed, t.names[0]);
                    let outcome = (t.run)(&mut stream);
                    let secs = begun.elapsed().as_secs_f64();
                    finish(t.names, t.required, t.samples, &t.tolerances, outcome, secs)
                })
            })
            .collect();
        let dim = scope.spawn(|| run_dimension(v, &ext_cfg));
        let wit = scope.spawn(|| run_witness(v, &ext_cfg));
        let props: Vec<PropertyResult> = handles
            .into_iter()
            .flat_map(|h| h.join().expect("property thread panicked"))
            .collect();
        (
            props,
            dim.join().expect("dimension thread panicked"),
            wit.join().expect("witness thread panicked"),
        )
    });
    properties.sort_by(|a, b| a.property.cmp(&b.property));

    let pass = properties.iter().all(|p| p.pass || !p.required)
        && dimension.pass
        && witness.as_ref().is_none_or(|w| w.found);
    Ok(SuiteReport {
        config: v.config.clone(),
        properties,
        dimension,
        witness,
        pass,
        total_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs the full suite for a validated configuration.
pub fn run_suite(v: &Validated) -> Result<SuiteReport, CliError> {
    match v.field {
        Field::Real => run_typed::<f64>(v),
        Field::Complex => run_typed::<Complex64>(v),
    }
}

/// Report JSON with every timing field removed.
pub fn without_timing(report: &Value) -> Value {
    match report {
        Value::Object(map) => Value::Object(
            map.iter()
                .filter(|(k, _)| !matches!(k.as_str(), "seconds" | "total_seconds"))
                .map(|(k, v)| (k.clone(), without_timing(v)))
                .collect(),
        ),
        Value::Array(items) => Value::Array(items.iter().map(without_timing).collect()),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_differ() {
        assert_ne!(label("bol"), label("automorphic_inverse"));
        assert_eq!(label(""), 0xcbf2_9ce4_8422_2325);
    }

    #[test]
    fn timing_is_stripped_everywhere() {
        let v = serde_json::json!({"a": 1, "seconds": 2.0, "b": [{"seconds": 1, "c": 3}], "total_seconds": 4});
        assert_eq!(
            without_timing(&v),
            serde_json::json!({"a": 1, "b": [{"c": 3}]})
        );
    }
}
