//! The indefinite form `J = diag(1,…,1,−1,…,−1)`, its isometry group, the
//! positive J-isometries Σ and the block-unitary stabilizer Φ.
//!
//! Σ is sampled through the exponential map. For hermitian `H`,
//! `exp(H)` is hermitian and positive definite, and `exp(H)` preserves `J`
//! iff `J·H·J = −H`, i.e. `HJ + JH = 0`. Writing `H` in `(p1, p2)` blocks, this
//! says the diagonal blocks vanish, so `H = [[0, X], [X̄ᵗ, 0]]` for an
//! arbitrary `p1 × p2` block `X`. Since `tr H = 0`, `det exp(H) = 1`.

use alloc::vec::Vec;

use crate::matrix::{product, Matrix};
use crate::rng::SampleStream;
use crate::scalar::Scalar;
use crate::spectral::{self, eig_hermitian, expm, spectral_map, SpectralFn, Tolerance};
use crate::Error;

/// Signature form `J_(p1,p2)` on `Fⁿ`, with `p1 ≥ p2 ≥ 1` and `n ≥ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignatureForm {
    pub n: usize,
    pub p1: usize,
    pub p2: usize,
}

impl SignatureForm {
    pub fn new(n: usize, p1: usize, p2: usize) -> Result<Self, Error> {
        if p1 + p2 != n || p1 < p2 || p2 < 1 || n < 3 {
            return Err(Error::InvalidForm { n, p1, p2 });
        }
        Ok(Self { n, p1, p2 })
    }

    /// `+1` on the first `p1` coordinates, `−1` on the rest.
    pub fn sign(&self, i: usize) -> f64 {
        if i < self.p1 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn matrix<T: Scalar>(&self) -> Matrix<T> {
        let d: Vec<f64> = (0..self.n).map(|i| self.sign(i)).collect();
        Matrix::from_diag(&d)
    }

    /// `ūᵗ·J·v`.
    pub fn inner<T: Scalar>(&self, u: &[T], v: &[T]) -> T {
        let mut s = T::zero();
        for (i, (a, b)) in u.iter().zip(v).enumerate() {
            s += (a.conj() * *b).scale(self.sign(i));
        }
        s
    }

    /// `J·M·J`, computed by sign flips.
    pub fn conjugate<T: Scalar>(&self, m: &Matrix<T>) -> Matrix<T> {
        Matrix::from_fn(m.rows(), m.cols(), |i, j| {
            m[(i, j)].scale(self.sign(i) * self.sign(j))
        })
    }

    /// `J·M` (row sign flips).
    pub fn apply<T: Scalar>(&self, m: &Matrix<T>) -> Matrix<T> {
        Matrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].scale(self.sign(i)))
    }

    /// Block-off-diagonal hermitian generator `[[0, X], [X̄ᵗ, 0]]`.
    pub fn generator<T: Scalar>(&self, x: &Matrix<T>) -> Result<Matrix<T>, Error> {
        if x.rows() != self.p1 || x.cols() != self.p2 {
            return Err(Error::DimensionMismatch {
                expected: self.p1 * self.p2,
                found: x.rows() * x.cols(),
            });
        }
        let p1 = self.p1;
        Ok(Matrix::from_fn(self.n, self.n, |i, j| {
            match (i < p1, j < p1) {
                (true, false) => x[(i, j - p1)],
                (false, true) => x[(j, i - p1)].conj(),
                _ => T::zero(),
            }
        }))
    }
}

/// Which set a membership test targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupTarget {
    /// `U_p2(n, F)`: isometries of the form.
    Isometry,
    /// Σ: positive definite hermitian isometries.
    Sigma,
    /// Φ: block-diagonal unitary matrices of determinant one.
    Phi,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub name: &'static str,
    pub residual: f64,
    pub pass: bool,
}

/// Per-condition residuals of a membership test.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub target: GroupTarget,
    pub conditions: Vec<Condition>,
    pub pass: bool,
}

impl MembershipReport {
    pub fn max_residual(&self) -> f64 {
        self.conditions
            .iter()
            .map(|c| {
                if c.residual.is_nan() {
                    f64::INFINITY
                } else {
                    c.residual
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.conditions
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.residual)
    }
}

fn isometry_residual<T: Scalar>(a: &Matrix<T>, form: &SignatureForm) -> f64 {
    let j = form.matrix::<T>();
    (&product(&[&a.adjoint(), &j, a]) - &j).frobenius_norm()
}

fn det_residual<T: Scalar>(a: &Matrix<T>) -> f64 {
    (a.det() - T::one()).abs()
}

/// Residual of every defining condition of `target`.
///
/// Conditions pass when their residual is at most `threshold`; positive
/// definiteness additionally requires the smallest eigenvalue of the
/// hermitian part to be strictly positive (its residual is `max(0, −λ_min)`).
pub fn membership_residual<T: Scalar>(
    a: &Matrix<T>,
    target: GroupTarget,
    form: &SignatureForm,
    threshold: f64,
) -> Result<MembershipReport, Error> {
    if a.rows() != form.n || a.cols() != form.n {
        return Err(Error::DimensionMismatch {
            expected: form.n,
            found: if a.rows() != form.n {
                a.rows()
            } else {
                a.cols()
            },
        });
    }
    let within = |r: f64| r <= threshold;
    let mut conditions = Vec::new();
    match target {
        GroupTarget::Isometry => {
            let r = isometry_residual(a, form);
            conditions.push(Condition {
                name: "isometry",
                residual: r,
                pass: within(r),
            });
        }
        GroupTarget::Sigma => {
            let h = a.hermitian_residual();
            conditions.push(Condition {
                name: "hermitian",
                residual: h,
                pass: within(h),
            });
            let loose = Tolerance {
                abs: f64::INFINITY,
                rel: f64::INFINITY,
                ..Tolerance::default()
            };
            let min = eig_hermitian(&a.hermitian_part(), &loose)
                .map(|e| e.min_eigenvalue())
                .unwrap_or(f64::NAN);
            conditions.push(Condition {
                name: "positive_definite",
                residual: if min > 0.0 { 0.0 } else { -min },
                pass: min > 0.0,
            });
            let r = isometry_residual(a, form);
            conditions.push(Condition {
                name: "isometry",
                residual: r,
                pass: within(r),
            });
            let d = det_residual(a);
            conditions.push(Condition {
                name: "determinant",
                residual: d,
                pass: within(d),
            });
        }
        GroupTarget::Phi => {
            let (n, p1) = (form.n, form.p1);
            let upper = a.block(0, p1, p1, n - p1).frobenius_norm();
            let lower = a.block(p1, 0, n - p1, p1).frobenius_norm();
            let off = libm::hypot(upper, lower);
            conditions.push(Condition {
                name: "block_diagonal",
                residual: off,
                pass: within(off),
            });
            let u = (&(a * &a.adjoint()) - &Matrix::identity(n)).frobenius_norm();
            conditions.push(Condition {
                name: "unitary",
                residual: u,
                pass: within(u),
            });
            let d = det_residual(a);
            conditions.push(Condition {
                name: "determinant",
                residual: d,
                pass: within(d),
            });
        }
    }
    let pass = conditions.iter().all(|c| c.pass);
    Ok(MembershipReport {
        target,
        conditions,
        pass,
    })
}

/// Acceptance threshold used when wrapping an externally supplied matrix:
/// `τ_abs` scaled by `max(1, ‖A‖_F)²`, since the isometry residual is
/// quadratic in the entries.
pub fn validation_threshold<T: Scalar>(a: &Matrix<T>, tol: &Tolerance) -> f64 {
    let s = a.frobenius_norm().max(1.0);
    tol.abs * s * s
}

/// An element of Σ: a positive definite hermitian matrix of determinant
/// one preserving the form.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaElement<T> {
    matrix: Matrix<T>,
    form: SignatureForm,
}

impl<T: Scalar> SigmaElement<T> {
    /// Validates `matrix` against all four defining conditions.
    pub fn new(matrix: Matrix<T>, form: SignatureForm, tol: &Tolerance) -> Result<Self, Error> {
        let threshold = validation_threshold(&matrix, tol);
        let report = membership_residual(&matrix, GroupTarget::Sigma, &form, threshold)?;
        if !report.pass {
            return Err(Error::NotInGroup {
                residual: report.max_residual(),
            });
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
            form,
        })
    }

    /// Wraps an operation output without re-validating it.
    pub(crate) fn trusted(matrix: Matrix<T>, form: SignatureForm) -> Self {
        Self { matrix, form }
    }

    pub fn identity(form: SignatureForm) -> Self {
        Self::trusted(Matrix::identity(form.n), form)
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    pub fn form(&self) -> &SignatureForm {
        &self.form
    }

    /// Membership residuals against Σ at `threshold`.
    pub fn membership(&self, threshold: f64) -> MembershipReport {
        membership_residual(&self.matrix, GroupTarget::Sigma, &self.form, threshold)
            .expect("element dimension matches its form")
    }
}

/// An element of Φ = (U(p1) × U(p2)) ∩ SU.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiElement<T> {
    matrix: Matrix<T>,
    form: SignatureForm,
}

impl<T: Scalar> PhiElement<T> {
    pub fn new(matrix: Matrix<T>, form: SignatureForm, tol: &Tolerance) -> Result<Self, Error> {
        let report = membership_residual(&matrix, GroupTarget::Phi, &form, tol.abs)?;
        if !report.pass {
            return Err(Error::NotInGroup {
                residual: report.max_residual(),
            });
        }
        Ok(Self { matrix, form })
    }

    pub(crate) fn trusted(matrix: Matrix<T>, form: SignatureForm) -> Self {
        Self { matrix, form }
    }

    pub fn identity(form: SignatureForm) -> Self {
        Self::trusted(Matrix::identity(form.n), form)
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn form(&self) -> &SignatureForm {
        &self.form
    }

    /// `B⁻¹ = B̄ᵗ`.
    pub fn inverse(&self) -> Self {
        Self::trusted(self.matrix.adjoint(), self.form)
    }

    pub fn membership(&self, threshold: f64) -> MembershipReport {
        membership_residual(&self.matrix, GroupTarget::Phi, &self.form, threshold)
            .expect("element dimension matches its form")
    }
}

/// `exp([[0, X], [X̄ᵗ, 0]])`.
pub fn sigma_from_block<T: Scalar>(
    form: &SignatureForm,
    x: &Matrix<T>,
    tol: &Tolerance,
) -> Result<SigmaElement<T>, Error> {
    let h = form.generator(x)?;
    let m = spectral_map(&h, SpectralFn::Exp, tol)?;
    Ok(SigmaElement::trusted(m, *form))
}

/// Draws `X` with entries uniform in `[−radius, radius]` (real and
/// imaginary parts independently) and returns `exp([[0, X], [X̄ᵗ, 0]])`.
pub fn sample_sigma<T: Scalar>(
    form: &SignatureForm,
    stream: &mut SampleStream,
    radius: f64,
    tol: &Tolerance,
) -> Result<SigmaElement<T>, Error> {
    if !(radius >= 0.0) {
        return Err(Error::Precondition("sampling radius must be non-negative"));
    }
    let x = Matrix::from_fn(form.p1, form.p2, |_, _| stream.scalar::<T>(radius));
    sigma_from_block(form, &x, tol)
}

/// Hyperbolic boost by rapidity `t` in the plane of the last positive and
/// the first negative coordinate.
pub fn boost<T: Scalar>(form: &SignatureForm, t: f64) -> SigmaElement<T> {
    let (a, b) = (form.p1 - 1, form.p1);
    let mut m = Matrix::identity(form.n);
    let (c, s) = (libm::cosh(t), libm::sinh(t));
    m[(a, a)] = T::from_real(c);
    m[(b, b)] = T::from_real(c);
    m[(a, b)] = T::from_real(s);
    m[(b, a)] = T::from_real(s);
    SigmaElement::trusted(m, *form)
}

/// Rotation by `theta` in the coordinate plane `(a, b)` (both within one
/// sign block of the form).
pub fn rotation<T: Scalar>(
    form: &SignatureForm,
    a: usize,
    b: usize,
    theta: f64,
) -> Result<PhiElement<T>, Error> {
    if a == b || a >= form.n || b >= form.n || (a < form.p1) != (b < form.p1) {
        return Err(Error::Precondition(
            "rotation plane must lie in one sign block",
        ));
    }
    let mut m = Matrix::identity(form.n);
    let (c, s) = (libm::cos(theta), libm::sin(theta));
    m[(a, a)] = T::from_real(c);
    m[(b, b)] = T::from_real(c);
    m[(a, b)] = T::from_real(-s);
    m[(b, a)] = T::from_real(s);
    Ok(PhiElement::trusted(m, *form))
}

/// Exponential of a random block-diagonal anti-hermitian generator with
/// entries uniform in `[−1, 1]`; over ℂ the trace is removed so that the
/// determinant is one.
pub fn sample_phi<T: Scalar>(form: &SignatureForm, stream: &mut SampleStream) -> PhiElement<T> {
    let n = form.n;
    let mut k = Matrix::<T>::zeros(n, n);
    for (start, len) in [(0, form.p1), (form.p1, form.p2)] {
        for a in start..start + len {
            if T::FIELD == crate::Field::Complex {
                k[(a, a)] = T::from_parts(0.0, stream.uniform(-1.0, 1.0));
            }
            for b in a + 1..start + len {
                let x = stream.scalar::<T>(1.0);
                k[(a, b)] = x;
                k[(b, a)] = -x.conj();
            }
        }
    }
    let shift = k.trace().scale(1.0 / n as f64);
    for i in 0..n {
        k[(i, i)] -= shift;
    }
    PhiElement::trusted(expm(&k), *form)
}

/// Unique factorization `S = S₁·C` with `S₁ ∈ Σ` and `C ∈ Φ`:
/// `S₁ = √(S·S̄ᵗ)` and `C = S₁⁻¹·S`.
pub fn polar_factorize<T: Scalar>(
    s: &Matrix<T>,
    form: &SignatureForm,
    tol: &Tolerance,
) -> Result<(SigmaElement<T>, PhiElement<T>), Error> {
    let threshold = validation_threshold(s, tol);
    let report = membership_residual(s, GroupTarget::Isometry, form, threshold)?;
    let det = det_residual(s);
    if !report.pass || !(det <= threshold) {
        return Err(Error::NotInGroup {
            residual: report.max_residual().max(det),
        });
    }
    let gram = (s * &s.adjoint()).hermitian_part();
    let eig = eig_hermitian(&gram, tol)?;
    spectral::check_positive(&eig, tol)?;
    let root = eig.apply(libm::sqrt);
    let root_inv = eig.apply(|l| 1.0 / libm::sqrt(l));
    let c = &root_inv * s;
    Ok((
        SigmaElement::trusted(root, *form),
        PhiElement::trusted(c, *form),
    ))
}

/// `B⁻¹·A·B` with `B⁻¹ = B̄ᵗ`.
pub fn conjugate_by_phi<T: Scalar>(
    a: &SigmaElement<T>,
    b: &PhiElement<T>,
) -> Result<SigmaElement<T>, Error> {
    if a.form != b.form {
        return Err(Error::DimensionMismatch {
            expected: a.form.n,
            found: b.form.n,
        });
    }
    let m = product(&[&b.matrix.adjoint(), &a.matrix, &b.matrix]).hermitian_part();
    Ok(SigmaElement::trusted(m, a.form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c1() -> SignatureForm {
        SignatureForm::new(3, 2, 1).unwrap()
    }

    fn boost_ln2() -> Matrix<f64> {
        Matrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.25, 0.75], &[0.0, 0.75, 1.25]])
    }

    #[test]
    fn form_validation() {
        assert!(SignatureForm::new(3, 2, 1).is_ok());
        assert!(SignatureForm::new(3, 1, 2).is_err());
        assert!(SignatureForm::new(2, 1, 1).is_err());
        assert!(SignatureForm::new(4, 4, 0).is_err());
        assert!(SignatureForm::new(4, 2, 1).is_err());
    }

    #[test]
    fn identity_is_in_sigma() {
        let r = membership_residual(&Matrix::<f64>::identity(3), GroupTarget::Sigma, &c1(), 1e-9)
            .unwrap();
        assert!(r.pass);
        assert_eq!(r.max_residual(), 0.0);
    }

    #[test]
    fn boost_ln2_is_in_sigma() {
        let r = membership_residual(&boost_ln2(), GroupTarget::Sigma, &c1(), 1e-9).unwrap();
        assert!(r.pass, "{r:?}");
        let b: SigmaElement<f64> = boost(&c1(), core::f64::consts::LN_2);
        assert!(b.matrix().relative_distance(&boost_ln2()) < 1e-15);
    }

    #[test]
    fn diagonal_is_not_an_isometry() {
        let a = Matrix::<f64>::from_diag(&[2.0, 1.0, 0.5]);
        let r = membership_residual(&a, GroupTarget::Sigma, &c1(), 1e-9).unwrap();
        assert!(!r.pass);
        // ‖diag(4, 1, −¼) − diag(1, 1, −1)‖_F = ‖(3, 0, ¾)‖
        let expected = libm::sqrt(9.0 + 0.5625);
        assert!((r.residual("isometry").unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn membership_dimension_mismatch() {
        let r = membership_residual(&Matrix::<f64>::identity(4), GroupTarget::Sigma, &c1(), 1e-9);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn zero_radius_sample_is_identity() {
        let mut s = SampleStream::new(1);
        let a: SigmaElement<f64> = sample_sigma(&c1(), &mut s, 0.0, &Tolerance::default()).unwrap();
        assert_eq!(a.matrix(), &Matrix::identity(3));
    }

    #[test]
    fn exponential_of_hyperbolic_generator() {
        let t = 0.4;
        let x = Matrix::<f64>::from_real_rows(&[&[0.0], &[t]]);
        let a = sigma_from_block(&c1(), &x, &Tolerance::default()).unwrap();
        let b: SigmaElement<f64> = boost(&c1(), t);
        assert!(a.matrix().relative_distance(b.matrix()) < 1e-14);
    }

    #[test]
    fn zero_generator_phi_is_identity() {
        // C1 over ℝ: the p2 block is 1×1 and carries no generator; zero
        // draws for the p1 block would give the identity, which the
        // rotation helper reproduces at angle zero.
        let r: PhiElement<f64> = rotation(&c1(), 0, 1, 0.0).unwrap();
        assert_eq!(r.matrix(), &Matrix::identity(3));
    }

    #[test]
    fn rotation_is_in_phi() {
        let r: PhiElement<f64> = rotation(&c1(), 0, 1, 0.7).unwrap();
        assert!(r.membership(1e-12).pass);
        assert!((r.matrix().det() - 1.0).abs() < 1e-15);
        assert!(rotation::<f64>(&c1(), 1, 2, 0.1).is_err());
    }

    #[test]
    fn polar_of_boost_times_rotation() {
        let f = c1();
        let a: SigmaElement<f64> = boost(&f, core::f64::consts::LN_2);
        let r: PhiElement<f64> = rotation(&f, 0, 1, core::f64::consts::FRAC_PI_6).unwrap();
        let s = a.matrix() * r.matrix();
        let (s1, c) = polar_factorize(&s, &f, &Tolerance::default()).unwrap();
        assert!(s1.matrix().relative_distance(a.matrix()) < 1e-14);
        assert!(c.matrix().relative_distance(r.matrix()) < 1e-14);
    }

    #[test]
    fn polar_of_sigma_element() {
        let f = c1();
        let a: SigmaElement<f64> = boost(&f, 0.3);
        let (s1, c) = polar_factorize(a.matrix(), &f, &Tolerance::default()).unwrap();
        assert!(s1.matrix().relative_distance(a.matrix()) < 1e-14);
        assert!(c.matrix().relative_distance(&Matrix::identity(3)) < 1e-14);
        let (s1, c) =
            polar_factorize(&Matrix::<f64>::identity(3), &f, &Tolerance::default()).unwrap();
        assert_eq!(s1.matrix(), &Matrix::identity(3));
        assert_eq!(c.matrix(), &Matrix::identity(3));
    }

    #[test]
    fn polar_rejects_non_isometry() {
        let a = Matrix::<f64>::from_diag(&[2.0, 1.0, 0.5]);
        assert!(matches!(
            polar_factorize(&a, &c1(), &Tolerance::default()),
            Err(Error::NotInGroup { .. })
        ));
    }

    #[test]
    fn conjugation_moves_boost_plane() {
        let f = c1();
        let t = 0.5;
        let a: SigmaElement<f64> = boost(&f, t);
        let b: PhiElement<f64> = rotation(&f, 0, 1, core::f64::consts::FRAC_PI_2).unwrap();
        let moved = conjugate_by_phi(&a, &b).unwrap();
        let (c, s) = (libm::cosh(t), libm::sinh(t));
        let expected =
            Matrix::<f64>::from_real_rows(&[&[c, 0.0, s], &[0.0, 1.0, 0.0], &[s, 0.0, c]]);
        assert!(moved.matrix().relative_distance(&expected) < 1e-15);
        let unchanged = conjugate_by_phi(&a, &PhiElement::identity(f)).unwrap();
        assert_eq!(unchanged.matrix(), a.matrix());
    }

    #[test]
    fn complex_samples_are_members() {
        let f = c1();
        let tol = Tolerance::default();
        let mut s = SampleStream::new(3);
        for _ in 0..20 {
            let a: SigmaElement<Complex64> = sample_sigma(&f, &mut s, 0.75, &tol).unwrap();
            assert!(a.membership(1e-9).pass);
            let b: PhiElement<Complex64> = sample_phi(&f, &mut s);
            assert!(b.membership(1e-9).pass, "{:?}", b.membership(1e-9));
        }
    }
}
