//! Loop interface and residual checkers for the loop axioms and the Bol,
//! automorphic-inverse and left-A identities.
//!
//! Every checker draws its samples from the concrete loop, folds the
//! per-sample residual distances with `max`, and compares the result with
//! a single tolerance. Results are deterministic in `(stream, count, tol)`.

use alloc::string::{String, ToString};

use crate::rng::SampleStream;
use crate::Error;

/// A loop: binary operation with two-sided identity and unique divisions.
pub trait Loop {
    type Element: Clone;

    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Result<Self::Element, Error>;

    /// `a\b`: the `x` with `a∘x = b`.
    fn left_divide(&self, a: &Self::Element, b: &Self::Element) -> Result<Self::Element, Error>;

    /// `b/a`: the `x` with `x∘a = b`.
    fn right_divide(&self, b: &Self::Element, a: &Self::Element) -> Result<Self::Element, Error>;

    fn identity(&self) -> Self::Element;

    /// Non-negative, symmetric, zero on equal elements.
    fn distance(&self, a: &Self::Element, b: &Self::Element) -> f64;

    fn sample(&self, _stream: &mut SampleStream) -> Result<Self::Element, Error> {
        Err(Error::SamplerUnavailable)
    }

    /// Two-sided inverse `x⁻¹ := e/x`.
    fn inverse(&self, x: &Self::Element) -> Result<Self::Element, Error> {
        self.right_divide(&self.identity(), x)
    }
}

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub property: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(property: &str, samples: usize, max_residual: f64, tolerance: f64) -> Self {
        Self {
            property: property.to_string(),
            samples,
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
        }
    }
}

/// `max` that treats NaN as +∞, so a broken sample can never hide.
pub fn fold_max(acc: f64, r: f64) -> f64 {
    if r.is_nan() {
        f64::INFINITY
    } else {
        acc.max(r)
    }
}

fn run<L: Loop>(
    l: &L,
    property: &str,
    stream: &mut SampleStream,
    count: usize,
    tol: f64,
    mut per_sample: impl FnMut(&L, &mut SampleStream) -> Result<f64, Error>,
) -> Result<IdentityReport, Error> {
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        worst = fold_max(worst, per_sample(l, stream)?);
    }
    Ok(IdentityReport::new(property, count, worst, tol))
}

/// `e∘x = x`, `x∘e = x`, `a∘(a\b) = b` and `(b/a)∘a = b`.
pub fn check_loop_axioms<L: Loop>(
    l: &L,
    stream: &mut SampleStream,
    count: usize,
    tol: f64,
) -> Result<IdentityReport, Error> {
    let e = l.identity();
    run(l, "loop_axioms", stream, count, tol, |l, s| {
        let a = l.sample(s)?;
        let b = l.sample(s)?;
        let r1 = l.distance(&l.mul(&e, &a)?, &a);
        let r2 = l.distance(&l.mul(&a, &e)?, &a);
        let x = l.left_divide(&a, &b)?;
        let r3 = l.distance(&l.mul(&a, &x)?, &b);
        let y = l.right_divide(&b, &a)?;
        let r4 = l.distance(&l.mul(&y, &a)?, &b);
        Ok([r1, r2, r3, r4].into_iter().fold(0.0, fold_max))
    })
}

/// Left Bol identity `x∘(y∘(x∘z)) = (x∘(y∘x))∘z`.
pub fn check_bol<L: Loop>(
    l: &L,
    stream: &mut SampleStream,
    count: usize,
    tol: f64,
) -> Result<IdentityReport, Error> {
    run(l, "bol", stream, count, tol, |l, s| {
        let (x, y, z) = (l.sample(s)?, l.sample(s)?, l.sample(s)?);
        let lhs = l.mul(&x, &l.mul(&y, &l.mul(&x, &z)?)?)?;
        let rhs = l.mul(&l.mul(&x, &l.mul(&y, &x)?)?, &z)?;
        Ok(l.distance(&lhs, &rhs))
    })
}

/// `e/x = x\e` on sampled `x`.
pub fn check_two_sided_inverses<L: Loop>(
    l: &L,
    stream: &mut SampleStream,
    count: usize,
    tol: f64,
) -> Result<IdentityReport, Error> {
    let e = l.identity();
    run(l, "two_sided_inverses", stream, count, tol, |l, s| {
        let x = l.sample(s)?;
        Ok(l.distance(&l.right_divide(&e, &x)?, &l.left_divide(&x, &e)?))
    })
}

fn checked_inverse<L: Loop>(l: &L, x: &L::Element, tol: f64) -> Result<L::Element, Error> {
    let e = l.identity();
    let right = l.right_divide(&e, x)?;
    let left = l.left_divide(x, &e)?;
    let distance = l.distance(&right, &left);
    if !(distance <= tol) {
        return Err(Error::InversesDisagree { distance });
    }
    Ok(right)
}

/// Automorphic inverse property `(x∘y)⁻¹ = x⁻¹∘y⁻¹`.
pub fn check_aip<L: Loop>(
    l: &L,
    stream: &mut SampleStream,
    count: usize,
    tol: f64,
) -> Result<IdentityReport, Error> {
    run(l, "automorphic_inverse", stream, count, tol, |l, s| {
        let (x, y) = (l.sample(s)?, l.sample(s)?);
        let lhs = checked_inverse(l, &l.mul(&x, &y)?, tol)?;
        let rhs = l.mul(&checked_inverse(l, &x, tol)?, &checked_inverse(l, &y, tol)?)?;
        Ok(l.distance(&lhs, &rhs))
    })
}

/// `λ_{x,y}(w) = (x∘y)\(x∘(y∘w))`.
pub fn inner_map<L: Loop>(
    l: &L,
    x: &L::Element,
    y: &L::Element,
    w: &L::Element,
) -> Result<L::Element, Error> {
    l.left_divide(&l.mul(x, y)?, &l.mul(x, &l.mul(y, w)?)?)
}

/// Left A-loop identity `λ_{x,y}(u∘v) = λ_{x,y}(u)∘λ_{x,y}(v)`.
pub fn check_left_a<L: Loop>(
    l: &L,
    stream: &mut SampleStream,
    count: usize,
    tol: f64,
) -> Result<IdentityReport, Error> {
    run(l, "left_a", stream, count, tol, |l, s| {
        let (x, y) = (l.sample(s)?, l.sample(s)?);
        let (u, v) = (l.sample(s)?, l.sample(s)?);
        let lhs = inner_map(l, &x, &y, &l.mul(&u, &v)?)?;
        let rhs = l.mul(&inner_map(l, &x, &y, &u)?, &inner_map(l, &x, &y, &v)?)?;
        Ok(l.distance(&lhs, &rhs))
    })
}
