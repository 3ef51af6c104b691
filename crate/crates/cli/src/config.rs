//! Suite configuration: a JSON document whose omitted fields take the
//! defaults below. The fully populated configuration is echoed into every
//! report, so a report alone is enough to reproduce its run.

use std::path::{Path, PathBuf};

use bruckloop::extension::{Carrier, ExtensionConfig};
use bruckloop::{Field, Scalar, SignatureForm, Tolerance};
use serde::{Deserialize, Serialize};

use crate::json::subspace_from_json;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleCounts {
    pub closure: usize,
    pub bol: usize,
    pub aip: usize,
    pub left_a: usize,
    pub conjugation: usize,
    pub factorization: usize,
    pub transversality: usize,
    pub extension_axioms: usize,
    pub left_translation: usize,
    pub compatibility: usize,
    pub sharp_transitivity: usize,
    /// Bol and automorphic-inverse measurements on the extension loop.
    pub extension_identities: usize,
    pub dimension_points: usize,
    pub witness_budget: usize,
}

impl Default for SampleCounts {
    fn default() -> Self {
        Self {
            closure: 1000,
            bol: 1000,
            aip: 1000,
            left_a: 200,
            conjugation: 500,
            factorization: 500,
            transversality: 200,
            extension_axioms: 500,
            left_translation: 200,
            compatibility: 500,
            sharp_transitivity: 200,
            extension_identities: 200,
            dimension_points: 20,
            witness_budget: 100,
        }
    }
}

impl SampleCounts {
    /// Sets every per-property count; the dimension points and the witness
    /// budget keep their values.
    pub fn set_all(&mut self, n: usize) {
        let keep = (self.dimension_points, self.witness_budget);
        *self = Self {
            closure: n,
            bol: n,
            aip: n,
            left_a: n,
            conjugation: n,
            factorization: n,
            transversality: n,
            extension_axioms: n,
            left_translation: n,
            compatibility: n,
            sharp_transitivity: n,
            extension_identities: n,
            dimension_points: keep.0,
            witness_budget: keep.1,
        };
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Absolute numerical tolerance of the decompositions.
    pub abs: f64,
    pub rel: f64,
    pub jacobi_stop: f64,
    pub closure: f64,
    pub identities: f64,
    pub conjugation: f64,
    pub factors: f64,
    pub reconstruction: f64,
    pub boost_oracle: f64,
    pub transversality: f64,
    pub extension: f64,
    pub compatibility: f64,
    pub stability: f64,
    pub witness_threshold: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let base = Tolerance::default();
        Self {
            abs: base.abs,
            rel: base.rel,
            jacobi_stop: base.jacobi_stop,
            closure: 1e-9,
            identities: 1e-8,
            conjugation: 1e-9,
            factors: 1e-8,
            reconstruction: 1e-10,
            boost_oracle: 1e-10,
            transversality: 1e-9,
            extension: 1e-8,
            compatibility: 1e-9,
            stability: 1e-6,
            witness_threshold: bruckloop::extension::WITNESS_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteConfig {
    pub n: usize,
    pub p1: usize,
    pub p2: usize,
    pub field: String,
    /// Index `i` of the carried coordinate subspace `Wᵢ`.
    pub carrier: u8,
    /// `standard`, `boost:T` or `file:PATH`.
    pub wtilde: String,
    pub seed: u64,
    /// Entry bound of the sampled generator blocks.
    pub radius: f64,
    pub samples: SampleCounts,
    pub tolerance: Tolerances,
    pub out: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            n: 3,
            p1: 2,
            p2: 1,
            field: "real".into(),
            carrier: 1,
            wtilde: "standard".into(),
            seed: 1,
            radius: bruckloop::matrix_loop::DEFAULT_RADIUS,
            samples: SampleCounts::default(),
            tolerance: Tolerances::default(),
            out: None,
        }
    }
}

/// How the transversal `W̃ⱼ` is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum WtildeSpec {
    /// `W̃ⱼ = Wⱼ`.
    Standard,
    /// `W̃ⱼ = A(t)(Wⱼ)`.
    Boost(f64),
    /// Subspace JSON read from a file.
    File(PathBuf),
}

impl WtildeSpec {
    pub fn parse(s: &str, base_dir: &Path) -> Result<Self, CliError> {
        if s == "standard" {
            return Ok(WtildeSpec::Standard);
        }
        if let Some(t) = s.strip_prefix("boost:") {
            let t: f64 = t
                .parse()
                .map_err(|_| CliError::Config(format!("bad boost rapidity in `{s}`")))?;
            if !t.is_finite() {
                return Err(CliError::Config("boost rapidity must be finite".into()));
            }
            return Ok(WtildeSpec::Boost(t));
        }
        if let Some(p) = s.strip_prefix("file:") {
            return Ok(WtildeSpec::File(base_dir.join(p)));
        }
        Err(CliError::Config(format!(
            "wtilde must be `standard`, `boost:T` or `file:PATH`, got `{s}`"
        )))
    }
}

/// A configuration whose parameters have been checked.
#[derive(Debug, Clone, PartialEq)]
pub struct Validated {
    pub config: SuiteConfig,
    pub form: SignatureForm,
    pub field: Field,
    pub carrier: Carrier,
    pub wtilde: WtildeSpec,
    pub tol: Tolerance,
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks every parameter; relative `file:` paths resolve against
    /// `base_dir`.
    pub fn validate(&self, base_dir: &Path) -> Result<Validated, CliError> {
        let form = SignatureForm::new(self.n, self.p1, self.p2)
            .map_err(|e| CliError::Config(e.to_string()))?;
        let field: Field = self
            .field
            .parse()
            .map_err(|_| CliError::Config(format!("unknown field `{}`", self.field)))?;
        let carrier =
            Carrier::from_index(self.carrier).map_err(|e| CliError::Config(e.to_string()))?;
        let wtilde = WtildeSpec::parse(&self.wtilde, base_dir)?;
        let t = &self.tolerance;
        let tol = Tolerance::new(t.abs, t.rel, t.jacobi_stop)
            .map_err(|e| CliError::Config(e.to_string()))?;
        if !(self.radius >= 0.0) || !self.radius.is_finite() {
            return Err(CliError::Config(
                "radius must be a finite non-negative number".into(),
            ));
        }
        let property_tols = [
            t.closure,
            t.identities,
            t.conjugation,
            t.factors,
            t.reconstruction,
            t.boost_oracle,
            t.transversality,
            t.extension,
            t.compatibility,
            t.stability,
            t.witness_threshold,
        ];
        if property_tols.iter().any(|&x| !(x >= 0.0)) {
            return Err(CliError::Config(
                "property tolerances must be non-negative".into(),
            ));
        }
        Ok(Validated {
            config: self.clone(),
            form,
            field,
            carrier,
            wtilde,
            tol,
        })
    }
}

impl Validated {
    /// Builds the extension configuration, including its transversality
    /// scan. Failures here are configuration errors.
    pub fn extension<T: Scalar>(&self) -> Result<ExtensionConfig<T>, CliError> {
        let radius = self.config.radius;
        let built = match &self.wtilde {
            WtildeSpec::Standard => {
                ExtensionConfig::standard(self.form, self.carrier, self.tol, radius)
            }
            WtildeSpec::Boost(t) => {
                ExtensionConfig::boosted(self.form, self.carrier, *t, self.tol, radius)
            }
            WtildeSpec::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                let value: serde_json::Value = serde_json::from_str(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                let sub = subspace_from_json::<T>(&value, &self.tol)
                    .map_err(|e| CliError::Config(e.to_string()))?;
                ExtensionConfig::new(self.form, self.carrier, sub, self.tol, radius)
            }
        };
        built.map_err(|e| CliError::Config(e.to_string()))
    }
}
