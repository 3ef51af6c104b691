//! JSON encodings of forms, group elements, subspaces and extension
//! elements.
//!
//! Real entries are plain numbers and complex entries are `[re, im]` pairs.
//! A group element is `{"form": {"n", "p1", "p2", "field"}, "matrix": [[…]]}`,
//! a subspace is `{"base": […], "frame": [[…]]}` with the frame given row by
//! row, and an extension element is `{"w": […], "rho": <group element>}`.

use bruckloop::affine::AffineSubspace;
use bruckloop::extension::ExtensionElement;
use bruckloop::forms::MembershipReport;
use bruckloop::loops::IdentityReport;
use bruckloop::{Field, Matrix, Scalar, SigmaElement, SignatureForm, Tolerance};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::CliError;

fn bad(what: &str) -> CliError {
    CliError::Parse(format!("malformed {what}"))
}

pub fn scalar_to_json<T: Scalar>(x: T) -> Value {
    match T::FIELD {
        Field::Real => json!(x.re()),
        Field::Complex => json!([x.re(), x.im()]),
    }
}

pub fn scalar_from_json<T: Scalar>(v: &Value) -> Result<T, CliError> {
    match (T::FIELD, v) {
        (Field::Real, Value::Number(n)) => {
            Ok(T::from_real(n.as_f64().ok_or_else(|| bad("number"))?))
        }
        (Field::Complex, Value::Array(pair)) if pair.len() == 2 => {
            let re = pair[0].as_f64().ok_or_else(|| bad("complex entry"))?;
            let im = pair[1].as_f64().ok_or_else(|| bad("complex entry"))?;
            Ok(T::from_parts(re, im))
        }
        (Field::Complex, Value::Number(n)) => {
            Ok(T::from_real(n.as_f64().ok_or_else(|| bad("number"))?))
        }
        _ => Err(bad("matrix entry")),
    }
}

pub fn vector_to_json<T: Scalar>(v: &[T]) -> Value {
    Value::Array(v.iter().map(|&x| scalar_to_json(x)).collect())
}

pub fn vector_from_json<T: Scalar>(v: &Value) -> Result<Vec<T>, CliError> {
    v.as_array()
        .ok_or_else(|| bad("vector"))?
        .iter()
        .map(scalar_from_json)
        .collect()
}

pub fn matrix_to_json<T: Scalar>(m: &Matrix<T>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| scalar_to_json(m[(i, j)])).collect()))
            .collect(),
    )
}

/// Parses a list of rows; `cols_hint` is used when there are no rows.
pub fn matrix_from_json<T: Scalar>(v: &Value, cols_hint: usize) -> Result<Matrix<T>, CliError> {
    let rows = v.as_array().ok_or_else(|| bad("matrix"))?;
    let parsed: Vec<Vec<T>> = rows
        .iter()
        .map(vector_from_json)
        .collect::<Result<_, _>>()?;
    let cols = parsed.first().map_or(cols_hint, Vec::len);
    if parsed.iter().any(|r| r.len() != cols) {
        return Err(bad("matrix (ragged rows)"));
    }
    let data = parsed.into_iter().flatten().collect();
    Matrix::new(rows.len(), cols, data).map_err(CliError::Compute)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormJson {
    pub n: usize,
    pub p1: usize,
    pub p2: usize,
    pub field: String,
}

impl FormJson {
    pub fn new(form: &SignatureForm, field: Field) -> Self {
        Self {
            n: form.n,
            p1: form.p1,
            p2: form.p2,
            field: field.name().to_string(),
        }
    }

    pub fn form(&self) -> Result<SignatureForm, CliError> {
        SignatureForm::new(self.n, self.p1, self.p2).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn field(&self) -> Result<Field, CliError> {
        self.field
            .parse()
            .map_err(|_| CliError::Parse(format!("unknown field `{}`", self.field)))
    }
}

pub fn element_to_json<T: Scalar>(m: &Matrix<T>, form: &SignatureForm) -> Value {
    json!({
        "form": FormJson::new(form, T::FIELD),
        "matrix": matrix_to_json(m),
    })
}

/// The form and field declared by an element document.
pub fn element_header(v: &Value) -> Result<FormJson, CliError> {
    serde_json::from_value(
        v.get("form")
            .cloned()
            .ok_or_else(|| bad("element (no form)"))?,
    )
    .map_err(|e| CliError::Parse(e.to_string()))
}

/// Matrix and form of an element document, without membership checks.
pub fn raw_element_from_json<T: Scalar>(v: &Value) -> Result<(Matrix<T>, SignatureForm), CliError> {
    let header = element_header(v)?;
    if header.field()? != T::FIELD {
        return Err(CliError::Parse(format!(
            "element is over {}, expected {}",
            header.field,
            T::FIELD.name()
        )));
    }
    let form = header.form()?;
    let m = matrix_from_json(
        v.get("matrix").ok_or_else(|| bad("element (no matrix)"))?,
        form.n,
    )?;
    if m.rows() != form.n || m.cols() != form.n {
        return Err(CliError::Parse(format!(
            "matrix is {}×{}, form needs {}×{}",
            m.rows(),
            m.cols(),
            form.n,
            form.n
        )));
    }
    Ok((m, form))
}

pub fn sigma_from_json<T: Scalar>(v: &Value, tol: &Tolerance) -> Result<SigmaElement<T>, CliError> {
    let (m, form) = raw_element_from_json(v)?;
    SigmaElement::new(m, form, tol).map_err(CliError::Compute)
}

pub fn subspace_to_json<T: Scalar>(s: &AffineSubspace<T>) -> Value {
    json!({
        "base": vector_to_json(s.base()),
        "frame": matrix_to_json(s.frame()),
    })
}

pub fn subspace_from_json<T: Scalar>(
    v: &Value,
    tol: &Tolerance,
) -> Result<AffineSubspace<T>, CliError> {
    let base: Vec<T> = vector_from_json(v.get("base").ok_or_else(|| bad("subspace (no base)"))?)?;
    let frame = matrix_from_json(v.get("frame").ok_or_else(|| bad("subspace (no frame)"))?, 0)?;
    let frame = if frame.rows() == 0 {
        Matrix::zeros(base.len(), 0)
    } else {
        frame
    };
    AffineSubspace::new(base, frame, tol).map_err(CliError::Compute)
}

pub fn extension_element_to_json<T: Scalar>(e: &ExtensionElement<T>) -> Value {
    json!({
        "w": vector_to_json(&e.w),
        "rho": element_to_json(e.rho.matrix(), e.rho.form()),
    })
}

pub fn extension_element_from_json<T: Scalar>(
    v: &Value,
    cfg: &bruckloop::extension::ExtensionConfig<T>,
) -> Result<ExtensionElement<T>, CliError> {
    let w = vector_from_json(v.get("w").ok_or_else(|| bad("extension element (no w)"))?)?;
    let rho = sigma_from_json(
        v.get("rho")
            .ok_or_else(|| bad("extension element (no rho)"))?,
        cfg.tolerance(),
    )?;
    ExtensionElement::new(w, rho, cfg).map_err(CliError::Compute)
}

/// `{"target", "pass", "conditions": {name: residual}}`.
pub fn membership_to_json(r: &MembershipReport) -> Value {
    let conditions: serde_json::Map<String, Value> = r
        .conditions
        .iter()
        .map(|c| (c.name.to_string(), finite_or_null(c.residual)))
        .collect();
    json!({
        "target": format!("{:?}", r.target).to_lowercase(),
        "pass": r.pass,
        "conditions": conditions,
    })
}

/// JSON numbers cannot hold NaN or infinities; those become `null`.
pub fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Serializable mirror of [`IdentityReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReportJson {
    pub property: String,
    pub samples: usize,
    /// `null` when the residual is not finite.
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

impl From<&IdentityReport> for IdentityReportJson {
    fn from(r: &IdentityReport) -> Self {
        Self {
            property: r.property.clone(),
            samples: r.samples,
            max_residual: r.max_residual.is_finite().then_some(r.max_residual),
            tolerance: r.tolerance,
            pass: r.pass,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use bruckloop::Complex64;

    #[test]
    fn complex_entries_are_pairs() {
        let m = Matrix::new(
            1,
            2,
            vec![Complex64::new(1.0, -2.0), Complex64::new(0.5, 0.0)],
        )
        .unwrap();
        assert_eq!(matrix_to_json(&m), json!([[[1.0, -2.0], [0.5, 0.0]]]));
        assert_eq!(
            matrix_from_json::<Complex64>(&matrix_to_json(&m), 0).unwrap(),
            m
        );
    }

    #[test]
    fn element_round_trip() {
        let form = SignatureForm::new(3, 2, 1).unwrap();
        let a = bruckloop::forms::boost::<f64>(&form, 0.3);
        let v = element_to_json(a.matrix(), &form);
        assert_eq!(
            v["form"],
            json!({"n": 3, "p1": 2, "p2": 1, "field": "real"})
        );
        let back = sigma_from_json::<f64>(&v, &Tolerance::default()).unwrap();
        assert_eq!(back, a);
        assert!(sigma_from_json::<Complex64>(&v, &Tolerance::default()).is_err());
    }

    #[test]
    fn subspace_round_trip() {
        let s = AffineSubspace::<f64>::coordinate(3, 2, 1);
        let v = subspace_to_json(&s);
        assert_eq!(
            v,
            json!({"base": [0.0, 0.0, 0.0], "frame": [[0.0], [0.0], [1.0]]})
        );
        assert_eq!(
            subspace_from_json::<f64>(&v, &Tolerance::default()).unwrap(),
            s
        );
        let point = json!({"base": [1.0, 2.0], "frame": [[], []]});
        assert_eq!(
            subspace_from_json::<f64>(&point, &Tolerance::default())
                .unwrap()
                .dim(),
            0
        );
    }

    #[test]
    fn report_mirror_hides_infinity() {
        let r = IdentityReport::new("bol", 3, f64::INFINITY, 1e-8);
        let j = IdentityReportJson::from(&r);
        assert_eq!(j.max_residual, None);
        assert!(!j.pass);
    }
}
