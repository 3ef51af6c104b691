//! Subcommand implementations. Each returns the text for standard output
//! together with the exit code.

use std::path::{Path, PathBuf};

use bruckloop::extension::{ext_mul, nonisomorphism_witness, ExtensionConfig, ExtensionLoop};
use bruckloop::forms::{membership_residual, polar_factorize, validation_threshold, GroupTarget};
use bruckloop::loops::Loop;
use bruckloop::{Complex64, Field, Matrix, MatrixLoop, SampleStream, Scalar, SignatureForm};
use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use crate::config::{SuiteConfig, Validated};
use crate::json::{
    element_header, element_to_json, extension_element_from_json, extension_element_to_json,
    membership_to_json, raw_element_from_json,
};
use crate::suite::run_suite;
use crate::{text, CliError, EXIT_FAIL, EXIT_PASS};

/// Flags shared by every subcommand; they override the configuration file.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// Suite configuration (JSON); omitted fields take their defaults.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Sample count for every property (for `sample`: number of elements).
    #[arg(long, value_name = "N")]
    pub samples: Option<usize>,
    /// Absolute numerical tolerance of the decompositions.
    #[arg(long, value_name = "X")]
    pub tol: Option<f64>,
    #[arg(long, value_name = "real|complex")]
    pub field: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p1: Option<usize>,
    #[arg(long)]
    pub p2: Option<usize>,
    /// Index of the carried coordinate subspace (1 or 2).
    #[arg(long, value_name = "I")]
    pub carrier: Option<u8>,
    /// `standard`, `boost:T` or `file:PATH`.
    #[arg(long, value_name = "SPEC")]
    pub wtilde: Option<String>,
    /// Entry bound of sampled generator blocks.
    #[arg(long, value_name = "X")]
    pub radius: Option<f64>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LoopKind {
    Matrix,
    Extension,
}

impl ConfigArgs {
    /// Loads the configuration file (if any), applies the flags and
    /// validates the result.
    pub fn resolve(&self) -> Result<Validated, CliError> {
        let (mut cfg, base_dir) = match &self.config {
            Some(path) => (
                SuiteConfig::load(path)?,
                path.parent().map(Path::to_path_buf).unwrap_or_default(),
            ),
            None => (SuiteConfig::default(), PathBuf::new()),
        };
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.samples {
            cfg.samples.set_all(v);
        }
        if let Some(v) = self.tol {
            cfg.tolerance.abs = v;
        }
        if let Some(v) = &self.field {
            cfg.field = v.clone();
        }
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = self.p1 {
            cfg.p1 = v;
        }
        if let Some(v) = self.p2 {
            cfg.p2 = v;
        }
        if let Some(v) = self.carrier {
            cfg.carrier = v;
        }
        if let Some(v) = &self.wtilde {
            cfg.wtilde = v.clone();
        }
        if let Some(v) = self.radius {
            cfg.radius = v;
        }
        if let Some(v) = &self.out {
            cfg.out = Some(v.display().to_string());
        }
        let base = if base_dir.as_os_str().is_empty() {
            PathBuf::from(".")
        } else {
            base_dir
        };
        cfg.validate(&base)
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Runs the suite; the report goes to `out` when configured and to standard
/// output otherwise.
pub fn verify(args: &ConfigArgs) -> Result<(String, i32), CliError> {
    let v = args.resolve()?;
    let report = run_suite(&v)?;
    let body = pretty(&serde_json::to_value(&report).expect("report serializes"));
    let code = if report.pass { EXIT_PASS } else { EXIT_FAIL };
    match &v.config.out {
        Some(path) => {
            std::fs::write(path, &body)?;
            Ok((summary(&report), code))
        }
        None => Ok((body, code)),
    }
}

fn summary(report: &crate::SuiteReport) -> String {
    let mut out = String::new();
    for p in &report.properties {
        let verdict = match (p.pass, p.required) {
            (true, _) => "pass",
            (false, true) => "FAIL",
            (false, false) => "info",
        };
        let residual = p
            .max_residual
            .map_or("-".to_string(), |r| format!("{r:.3e}"));
        out.push_str(&format!("{verdict:4} {:32} {residual}\n", p.property));
    }
    let d = &report.dimension;
    let estimated = d.estimated.map_or("-".to_string(), |r| r.to_string());
    out.push_str(&format!(
        "{:4} {:32} {estimated} (expected {})\n",
        if d.pass { "pass" } else { "FAIL" },
        "dimension",
        d.expected
    ));
    if let Some(w) = &report.witness {
        let moved = w.displacement.map_or("-".to_string(), |x| format!("{x:.3e}"));
        out.push_str(&format!(
            "{:4} {:32} {moved}\n",
            if w.found { "pass" } else { "FAIL" },
            "witness",
        ));
    }
    out.push_str(if report.pass {
        "overall: pass\n"
    } else {
        "overall: FAIL\n"
    });
    out
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// A matrix element read from JSON or from the text format; text files take
/// the form from the flags.
enum RawElement {
    Json(Value),
    Text(String),
}

impl RawElement {
    fn load(path: &Path) -> Result<Self, CliError> {
        let body = read(path)?;
        if body.trim_start().starts_with('{') {
            serde_json::from_str(&body)
                .map(RawElement::Json)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
        } else {
            Ok(RawElement::Text(body))
        }
    }

    fn field(&self) -> Result<Field, CliError> {
        match self {
            RawElement::Json(v) => element_header(v)?.field(),
            RawElement::Text(t) => text::header_field(t),
        }
    }

    fn decode<T: Scalar>(
        &self,
        fallback: &SignatureForm,
    ) -> Result<(Matrix<T>, SignatureForm), CliError> {
        match self {
            RawElement::Json(v) => raw_element_from_json(v),
            RawElement::Text(t) => {
                let m = text::parse_matrix::<T>(t)?;
                if m.rows() != fallback.n || m.cols() != fallback.n {
                    return Err(CliError::Parse(format!(
                        "matrix is {}×{}, form needs {}×{}",
                        m.rows(),
                        m.cols(),
                        fallback.n,
                        fallback.n
                    )));
                }
                Ok((m, *fallback))
            }
        }
    }
}

fn sigma_report<T: Scalar>(
    m: &Matrix<T>,
    form: &SignatureForm,
    v: &Validated,
) -> Result<Value, CliError> {
    let threshold = validation_threshold(m, &v.tol);
    Ok(membership_to_json(&membership_residual(
        m,
        GroupTarget::Sigma,
        form,
        threshold,
    )?))
}

fn mul_matrix<T: Scalar>(
    lhs: &RawElement,
    rhs: &RawElement,
    v: &Validated,
) -> Result<Value, CliError> {
    let (a, fa) = lhs.decode::<T>(&v.form)?;
    let (b, fb) = rhs.decode::<T>(&v.form)?;
    if fa != fb {
        return Err(CliError::Parse("operands use different forms".into()));
    }
    let a = bruckloop::SigmaElement::new(a, fa, &v.tol)?;
    let b = bruckloop::SigmaElement::new(b, fb, &v.tol)?;
    let l = MatrixLoop::<T>::new(fa, v.tol);
    let c = l.mul(&a, &b)?;
    let mut out = element_to_json(c.matrix(), &fa);
    out["diagnostics"] = sigma_report(c.matrix(), &fa, v)?;
    Ok(out)
}

fn mul_extension<T: Scalar>(lhs: &Value, rhs: &Value, v: &Validated) -> Result<Value, CliError> {
    let cfg: ExtensionConfig<T> = v.extension()?;
    let a = extension_element_from_json(lhs, &cfg)?;
    let b = extension_element_from_json(rhs, &cfg)?;
    let c = ext_mul(&a, &b, &cfg)?;
    let mut out = extension_element_to_json(&c);
    out["diagnostics"] = json!({
        "rho": sigma_report(c.rho.matrix(), cfg.form(), v)?,
        "w_offset": cfg.wtilde().distance_to_point(&c.w),
    });
    Ok(out)
}

fn load_json(path: &Path) -> Result<Value, CliError> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Product of two elements of the matrix loop or of the extension loop.
pub fn mul(
    lhs: &Path,
    rhs: &Path,
    kind: LoopKind,
    args: &ConfigArgs,
) -> Result<(String, i32), CliError> {
    let v = args.resolve()?;
    let out = match kind {
        LoopKind::Matrix => {
            let (a, b) = (RawElement::load(lhs)?, RawElement::load(rhs)?);
            let field = a.field()?;
            if b.field()? != field {
                return Err(CliError::Parse("operands use different fields".into()));
            }
            match field {
                Field::Real => mul_matrix::<f64>(&a, &b, &v)?,
                Field::Complex => mul_matrix::<Complex64>(&a, &b, &v)?,
            }
        }
        LoopKind::Extension => {
            let (a, b) = (load_json(lhs)?, load_json(rhs)?);
            match v.field {
                Field::Real => mul_extension::<f64>(&a, &b, &v)?,
                Field::Complex => mul_extension::<Complex64>(&a, &b, &v)?,
            }
        }
    };
    Ok((pretty(&out), EXIT_PASS))
}

fn factor_typed<T: Scalar>(raw: &RawElement, v: &Validated) -> Result<Value, CliError> {
    let (s, form) = raw.decode::<T>(&v.form)?;
    let (s1, c) = polar_factorize(&s, &form, &v.tol)?;
    let back = s1.matrix() * c.matrix();
    let residual = (&back - &s).frobenius_norm() / s.frobenius_norm();
    Ok(json!({
        "s1": element_to_json(s1.matrix(), &form),
        "c": element_to_json(c.matrix(), &form),
        "reconstruction_residual": residual,
    }))
}

/// Factorization `S = S₁·C`.
pub fn factor(path: &Path, args: &ConfigArgs) -> Result<(String, i32), CliError> {
    let v = args.resolve()?;
    let raw = RawElement::load(path)?;
    let out = match raw.field()? {
        Field::Real => factor_typed::<f64>(&raw, &v)?,
        Field::Complex => factor_typed::<Complex64>(&raw, &v)?,
    };
    Ok((pretty(&out), EXIT_PASS))
}

fn witness_typed<T: Scalar>(v: &Validated) -> Result<(Value, i32), CliError> {
    let cfg: ExtensionConfig<T> = v.extension()?;
    if !crate::suite::transversal_moved(&cfg) {
        return Err(CliError::Config(
            "the transversal equals the coordinate subspace, which Φ stabilizes; choose another --wtilde".into(),
        ));
    }
    let mut stream = crate::suite::stream_for(v.config.seed, "witness");
    let found = nonisomorphism_witness(
        &cfg,
        &mut stream,
        v.config.samples.witness_budget,
        v.config.tolerance.witness_threshold,
    );
    match found {
        Ok(w) => Ok((
            json!({
                "g": element_to_json(w.g.matrix(), w.g.form()),
                "displacement": w.displacement,
                "sample": w.sample,
            }),
            EXIT_PASS,
        )),
        Err(e @ bruckloop::Error::WitnessNotFound { .. }) => {
            Ok((json!({ "error": e.to_string() }), EXIT_FAIL))
        }
        Err(e) => Err(e.into()),
    }
}

/// Searches for a Φ element moving the transversal.
pub fn witness(args: &ConfigArgs) -> Result<(String, i32), CliError> {
    let v = args.resolve()?;
    let (out, code) = match v.field {
        Field::Real => witness_typed::<f64>(&v)?,
        Field::Complex => witness_typed::<Complex64>(&v)?,
    };
    Ok((pretty(&out), code))
}

fn sample_typed<T: Scalar>(
    v: &Validated,
    count: usize,
    kind: LoopKind,
) -> Result<String, CliError> {
    let mut stream = SampleStream::new(v.config.seed);
    let mut out = String::new();
    match kind {
        LoopKind::Matrix => {
            let l = MatrixLoop::<T>::new(v.form, v.tol).with_radius(v.config.radius);
            for _ in 0..count {
                let e = l.sample(&mut stream)?;
                out.push_str(&element_to_json(e.matrix(), &v.form).to_string());
                out.push('\n');
            }
        }
        LoopKind::Extension => {
            let l = ExtensionLoop::new(v.extension::<T>()?);
            for _ in 0..count {
                let e = l.sample(&mut stream)?;
                out.push_str(&extension_element_to_json(&e).to_string());
                out.push('\n');
            }
        }
    }
    Ok(out)
}

/// `count` sampled elements, one JSON document per line.
pub fn sample(args: &ConfigArgs, kind: LoopKind) -> Result<(String, i32), CliError> {
    let v = args.resolve()?;
    let count = args.samples.unwrap_or(1);
    let out = match v.field {
        Field::Real => sample_typed::<f64>(&v, count, kind)?,
        Field::Complex => sample_typed::<Complex64>(&v, count, kind)?,
    };
    Ok((out, EXIT_PASS))
}
