//! The Bruck loop on Σ with `A∘B = √(A·B²·A)`.
//!
//! `A·B = S₁·C` with `S₁ = √(A·B·B̄ᵗ·Āᵗ) = √(A·B²·A) ∈ Σ`, so the product is
//! the Σ-factor of the ordinary matrix product. Divisions have closed forms:
//! `A\C = √(A⁻¹·C²·A⁻¹)` and `B/A = A⁻¹·(A∘B)·A⁻¹`, the latter being the
//! positive solution of `X·A²·X = B²`.

use core::marker::PhantomData;

use crate::forms::{sample_sigma, SigmaElement, SignatureForm};
use crate::loops::Loop;
use crate::matrix::{product, Matrix};
use crate::rng::SampleStream;
use crate::scalar::Scalar;
use crate::spectral::{spectral_map, SpectralFn, Tolerance};
use crate::Error;

/// Default sampling radius for the exponential chart.
pub const DEFAULT_RADIUS: f64 = 0.75;

/// The loop on Σ over the field `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixLoop<T> {
    pub form: SignatureForm,
    pub tol: Tolerance,
    /// Entry bound for sampled generator blocks.
    pub radius: f64,
    field: PhantomData<T>,
}

impl<T: Scalar> MatrixLoop<T> {
    pub fn new(form: SignatureForm, tol: Tolerance) -> Self {
        Self {
            form,
            tol,
            radius: DEFAULT_RADIUS,
            field: PhantomData,
        }
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    fn check_forms(&self, elems: &[&SigmaElement<T>]) -> Result<(), Error> {
        for e in elems {
            if *e.form() != self.form {
                return Err(Error::DimensionMismatch {
                    expected: self.form.n,
                    found: e.form().n,
                });
            }
        }
        Ok(())
    }

    fn sqrt(&self, m: &Matrix<T>) -> Result<SigmaElement<T>, Error> {
        let root = spectral_map(&m.hermitian_part(), SpectralFn::Sqrt, &self.tol)?;
        Ok(SigmaElement::trusted(root, self.form))
    }

    /// `√(A·B·B·A)`, multiplied left to right.
    pub fn product(
        &self,
        a: &SigmaElement<T>,
        b: &SigmaElement<T>,
    ) -> Result<SigmaElement<T>, Error> {
        self.check_forms(&[a, b])?;
        let (a, b) = (a.matrix(), b.matrix());
        self.sqrt(&product(&[a, b, b, a]))
    }

    /// Matrix inverse, which stays in Σ.
    pub fn invert(&self, a: &SigmaElement<T>) -> Result<SigmaElement<T>, Error> {
        self.check_forms(&[a])?;
        let inv = spectral_map(a.matrix(), SpectralFn::Inverse, &self.tol)?;
        Ok(SigmaElement::trusted(inv, self.form))
    }

    pub fn divide_left(
        &self,
        a: &SigmaElement<T>,
        c: &SigmaElement<T>,
    ) -> Result<SigmaElement<T>, Error> {
        self.check_forms(&[a, c])?;
        let ai = self.invert(a)?;
        let (ai, c) = (ai.matrix(), c.matrix());
        self.sqrt(&product(&[ai, c, c, ai]))
    }

    pub fn divide_right(
        &self,
        b: &SigmaElement<T>,
        a: &SigmaElement<T>,
    ) -> Result<SigmaElement<T>, Error> {
        self.check_forms(&[a, b])?;
        let ai = self.invert(a)?;
        let ab = self.product(a, b)?;
        let x = product(&[ai.matrix(), ab.matrix(), ai.matrix()]).hermitian_part();
        Ok(SigmaElement::trusted(x, self.form))
    }
}

impl<T: Scalar> Loop for MatrixLoop<T> {
    type Element = SigmaElement<T>;

    fn mul(&self, a: &SigmaElement<T>, b: &SigmaElement<T>) -> Result<SigmaElement<T>, Error> {
        self.product(a, b)
    }

    fn left_divide(
        &self,
        a: &SigmaElement<T>,
        b: &SigmaElement<T>,
    ) -> Result<SigmaElement<T>, Error> {
        self.divide_left(a, b)
    }

    fn right_divide(
        &self,
        b: &SigmaElement<T>,
        a: &SigmaElement<T>,
    ) -> Result<SigmaElement<T>, Error> {
        self.divide_right(b, a)
    }

    fn identity(&self) -> SigmaElement<T> {
        SigmaElement::identity(self.form)
    }

    fn distance(&self, a: &SigmaElement<T>, b: &SigmaElement<T>) -> f64 {
        a.matrix().relative_distance(b.matrix())
    }

    fn sample(&self, stream: &mut SampleStream) -> Result<SigmaElement<T>, Error> {
        sample_sigma(&self.form, stream, self.radius, &self.tol)
    }

    fn inverse(&self, x: &SigmaElement<T>) -> Result<SigmaElement<T>, Error> {
        self.invert(x)
    }
}
