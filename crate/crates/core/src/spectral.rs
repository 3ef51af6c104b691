//! Spectral calculus for hermitian matrices: cyclic Jacobi eigensolver,
//! functions of hermitian matrices, one-sided Jacobi SVD and Gram–Schmidt.

use alloc::vec::Vec;

use crate::forms::SignatureForm;
use crate::matrix::{dot, norm, Matrix};
use crate::scalar::Scalar;
use crate::Error;

/// Sweep budget for the Jacobi eigensolver.
pub const MAX_SWEEPS: usize = 30;

/// Numerical tolerances shared by every routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Absolute threshold (positivity, pivots, intersections).
    pub abs: f64,
    /// Relative threshold (hermiticity, reconstructions).
    pub rel: f64,
    /// Off-diagonal mass, relative to `‖A‖_F`, at which Jacobi stops.
    pub jacobi_stop: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-9,
            rel: 1e-7,
            jacobi_stop: 1e-13,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64, jacobi_stop: f64) -> Result<Self, Error> {
        let t = Self {
            abs,
            rel,
            jacobi_stop,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(self.abs) && ok(self.rel) && ok(self.jacobi_stop) {
            Ok(())
        } else {
            Err(Error::InvalidTolerance)
        }
    }
}

/// `A = Q·diag(λ)·Q̄ᵗ` with eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition<T> {
    pub eigenvalues: Vec<f64>,
    pub eigenbasis: Matrix<T>,
}

impl<T: Scalar> SpectralDecomposition<T> {
    /// `Q·diag(f(λ))·Q̄ᵗ`, re-symmetrized.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Matrix<T> {
        let q = &self.eigenbasis;
        let n = q.rows();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut s = T::zero();
                for (k, &w) in fl.iter().enumerate() {
                    s += (q[(i, k)] * q[(j, k)].conj()).scale(w);
                }
                out[(i, j)] = s;
            }
        }
        out.hermitian_part()
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        self.apply(|l| l)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::INFINITY)
    }
}

/// Unitary 2×2 rotation `G` acting on coordinates `(p, q)` that
/// diagonalizes the hermitian block `[[app, c], [c̄, aqq]]` under `Ḡᵗ·X·G`.
///
/// Returned as `(g_pp, g_pq, g_qp, g_qq)`.
fn jacobi_rotation<T: Scalar>(app: f64, aqq: f64, c: T) -> (T, T, T, T) {
    let r = c.abs();
    let phase_conj = c.phase().conj();
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        let s = if theta > 0.0 { 1.0 } else { -1.0 };
        s / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0))
    };
    let cs = 1.0 / libm::sqrt(t * t + 1.0);
    let sn = t * cs;
    (
        T::from_real(cs),
        T::from_real(sn),
        phase_conj.scale(-sn),
        phase_conj.scale(cs),
    )
}

/// `M ← M·G` on columns `p`, `q`.
fn rotate_columns<T: Scalar>(m: &mut Matrix<T>, p: usize, q: usize, g: (T, T, T, T)) {
    let (gpp, gpq, gqp, gqq) = g;
    for i in 0..m.rows() {
        let (mp, mq) = (m[(i, p)], m[(i, q)]);
        m[(i, p)] = mp * gpp + mq * gqp;
        m[(i, q)] = mp * gpq + mq * gqq;
    }
}

/// `M ← Ḡᵗ·M` on rows `p`, `q`.
fn rotate_rows<T: Scalar>(m: &mut Matrix<T>, p: usize, q: usize, g: (T, T, T, T)) {
    let (gpp, gpq, gqp, gqq) = g;
    for j in 0..m.cols() {
        let (mp, mq) = (m[(p, j)], m[(q, j)]);
        m[(p, j)] = gpp.conj() * mp + gqp.conj() * mq;
        m[(q, j)] = gpq.conj() * mp + gqq.conj() * mq;
    }
}

fn off_diagonal_norm<T: Scalar>(a: &Matrix<T>) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].abs_sq();
            }
        }
    }
    libm::sqrt(s)
}

/// Eigendecomposition of a hermitian matrix by cyclic Jacobi rotations.
pub fn eig_hermitian<T: Scalar>(
    a: &Matrix<T>,
    tol: &Tolerance,
) -> Result<SpectralDecomposition<T>, Error> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let residual = a.hermitian_residual();
    if !(residual <= tol.abs + tol.rel * a.frobenius_norm()) {
        return Err(Error::NotHermitian { residual });
    }
    let n = a.rows();
    let mut d = a.hermitian_part();
    let mut q = Matrix::identity(n);
    let scale = d.frobenius_norm();
    let mut sweep = 0;
    while off_diagonal_norm(&d) > tol.jacobi_stop * scale {
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
        for p in 0..n {
            for r in p + 1..n {
                let c = d[(p, r)];
                if c.abs_sq() == 0.0 {
                    continue;
                }
                let g = jacobi_rotation(d[(p, p)].re(), d[(r, r)].re(), c);
                rotate_columns(&mut d, p, r, g);
                rotate_rows(&mut d, p, r, g);
                d[(p, r)] = T::zero();
                d[(r, p)] = T::zero();
                d[(p, p)] = T::from_real(d[(p, p)].re());
                d[(r, r)] = T::from_real(d[(r, r)].re());
                rotate_columns(&mut q, p, r, g);
            }
        }
        sweep += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[(i, i)].re().total_cmp(&d[(j, j)].re()));
    let eigenvalues = order.iter().map(|&i| d[(i, i)].re()).collect();
    let eigenbasis = Matrix::from_fn(n, n, |i, k| q[(i, order[k])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenbasis,
    })
}

/// Scalar functions lifted to hermitian matrices through the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralFn {
    Sqrt,
    Square,
    Inverse,
    InverseSqrt,
    Exp,
    Log,
}

impl SpectralFn {
    pub fn needs_positivity(self) -> bool {
        matches!(
            self,
            SpectralFn::Sqrt | SpectralFn::Inverse | SpectralFn::InverseSqrt | SpectralFn::Log
        )
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            SpectralFn::Sqrt => libm::sqrt(x),
            SpectralFn::Square => x * x,
            SpectralFn::Inverse => 1.0 / x,
            SpectralFn::InverseSqrt => 1.0 / libm::sqrt(x),
            SpectralFn::Exp => libm::exp(x),
            SpectralFn::Log => libm::log(x),
        }
    }
}

/// `f(A)` for hermitian `A`; the output is exactly hermitian.
pub fn spectral_map<T: Scalar>(
    a: &Matrix<T>,
    f: SpectralFn,
    tol: &Tolerance,
) -> Result<Matrix<T>, Error> {
    let eig = eig_hermitian(a, tol)?;
    if f.needs_positivity() {
        check_positive(&eig, tol)?;
    }
    Ok(eig.apply(|l| f.eval(l)))
}

pub(crate) fn check_positive<T: Scalar>(
    eig: &SpectralDecomposition<T>,
    tol: &Tolerance,
) -> Result<(), Error> {
    let min = eig.min_eigenvalue();
    if min > tol.abs {
        Ok(())
    } else {
        Err(Error::NotPositiveDefinite {
            min_eigenvalue: min,
        })
    }
}

/// Thin singular value decomposition `M = U·diag(σ)·V̄ᵗ`, σ descending.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub singular_values: Vec<f64>,
    /// `m × k`; columns belonging to zero singular values are zero.
    pub u: Matrix<T>,
    /// `k × k` unitary.
    pub v: Matrix<T>,
}

/// One-sided (Hestenes) Jacobi SVD of an `m × k` matrix.
pub fn svd<T: Scalar>(m: &Matrix<T>) -> Result<Svd<T>, Error> {
    const MAX_SVD_SWEEPS: usize = 60;
    let k = m.cols();
    let mut u = m.clone();
    let mut v = Matrix::identity(k);
    let mut converged = false;
    for _ in 0..MAX_SVD_SWEEPS {
        let mut rotated = false;
        for i in 0..k {
            for j in i + 1..k {
                let ci = u.column(i);
                let cj = u.column(j);
                let alpha = dot(&ci, &ci).re();
                let beta = dot(&cj, &cj).re();
                let gamma = dot(&ci, &cj);
                if gamma.abs() <= 1e-15 * libm::sqrt(alpha * beta) || gamma.abs_sq() == 0.0 {
                    continue;
                }
                rotated = true;
                let g = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut u, i, j, g);
                rotate_columns(&mut v, i, j, g);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: MAX_SVD_SWEEPS,
        });
    }
    let norms: Vec<f64> = (0..k).map(|j| norm(&u.column(j))).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let rows = m.rows();
    let u_sorted = Matrix::from_fn(rows, k, |i, c| {
        let s = norms[order[c]];
        if s > 0.0 {
            u[(i, order[c])].scale(1.0 / s)
        } else {
            T::zero()
        }
    });
    let v_sorted = Matrix::from_fn(k, k, |i, c| v[(i, order[c])]);
    Ok(Svd {
        singular_values,
        u: u_sorted,
        v: v_sorted,
    })
}

/// Gram–Schmidt with column pivoting.
///
/// Without a form the output columns are orthonormal for the standard
/// hermitian product. With a form the output satisfies `v̄ᵢᵗJvⱼ = ±δᵢⱼ`.
/// Columns come out in pivot order (largest remaining norm first).
pub fn orthonormalize<T: Scalar>(
    v: &Matrix<T>,
    form: Option<&SignatureForm>,
    tol: &Tolerance,
) -> Result<Matrix<T>, Error> {
    let standard = pivoted_gram_schmidt(v, tol.abs)?;
    if standard.cols() < v.cols() {
        return Err(Error::RankDeficient);
    }
    match form {
        None => Ok(standard),
        Some(form) => {
            if form.n != v.rows() {
                return Err(Error::DimensionMismatch {
                    expected: form.n,
                    found: v.rows(),
                });
            }
            form_gram_schmidt(v, form, tol)
        }
    }
}

/// Orthonormal basis of the column span; columns whose residual falls
/// below `rel · (largest column norm)` are dropped.
pub fn span_basis<T: Scalar>(v: &Matrix<T>, rel: f64) -> Matrix<T> {
    pivoted_gram_schmidt(v, rel).unwrap_or_else(|_| Matrix::zeros(v.rows(), 0))
}

/// Keeps the earliest index among equal maxima.
fn first_max(best: (usize, f64), cand: (usize, f64)) -> (usize, f64) {
    if cand.1 > best.1 {
        cand
    } else {
        best
    }
}

fn pivoted_gram_schmidt<T: Scalar>(v: &Matrix<T>, rel: f64) -> Result<Matrix<T>, Error> {
    let n = v.rows();
    let mut work = v.columns();
    let scale = work.iter().map(|c| norm(c)).fold(0.0, f64::max);
    let mut basis: Vec<Vec<T>> = Vec::new();
    if scale == 0.0 {
        return Ok(Matrix::zeros(n, 0));
    }
    while !work.is_empty() {
        let (idx, best) = work
            .iter()
            .enumerate()
            .map(|(i, c)| (i, norm(c)))
            .fold((0, f64::NEG_INFINITY), first_max);
        if best <= rel * scale {
            break;
        }
        let mut u = work.remove(idx);
        // second pass against the accepted basis
        for b in &basis {
            let c = dot(b, &u);
            for (x, y) in u.iter_mut().zip(b) {
                *x -= c * *y;
            }
        }
        let nu = norm(&u);
        for x in u.iter_mut() {
            *x = x.scale(1.0 / nu);
        }
        for _ in 0..2 {
            for w in work.iter_mut() {
                let c = dot(&u, w);
                for (x, y) in w.iter_mut().zip(&u) {
                    *x -= c * *y;
                }
            }
        }
        basis.push(u);
    }
    Ok(Matrix::from_columns(n, &basis))
}

fn form_gram_schmidt<T: Scalar>(
    v: &Matrix<T>,
    form: &SignatureForm,
    tol: &Tolerance,
) -> Result<Matrix<T>, Error> {
    let n = v.rows();
    let mut work = v.columns();
    let mut basis: Vec<(Vec<T>, f64)> = Vec::new();
    while !work.is_empty() {
        let (idx, eta) = work
            .iter()
            .enumerate()
            .map(|(i, c)| {
                (
                    i,
                    form.inner(c, c).re() / (norm(c) * norm(c)).max(f64::MIN_POSITIVE),
                )
            })
            .fold((0, f64::NAN), |best, (i, e)| {
                if best.1.is_nan() || libm::fabs(e) > libm::fabs(best.1) {
                    (i, e)
                } else {
                    best
                }
            });
        if libm::fabs(eta) < tol.abs {
            return Err(Error::IsotropicPivot { norm: eta });
        }
        let mut u = work.remove(idx);
        for (b, sign) in &basis {
            let c = form.inner(b, &u).scale(*sign);
            for (x, y) in u.iter_mut().zip(b) {
                *x -= c * *y;
            }
        }
        let eta = form.inner(&u, &u).re();
        if libm::fabs(eta) < tol.abs * norm(&u) * norm(&u) {
            return Err(Error::IsotropicPivot { norm: eta });
        }
        let sign = if eta > 0.0 { 1.0 } else { -1.0 };
        let k = 1.0 / libm::sqrt(libm::fabs(eta));
        for x in u.iter_mut() {
            *x = x.scale(k);
        }
        for _ in 0..2 {
            for w in work.iter_mut() {
                let c = form.inner(&u, w).scale(sign);
                for (x, y) in w.iter_mut().zip(&u) {
                    *x -= c * *y;
                }
            }
        }
        basis.push((u, sign));
    }
    let cols: Vec<Vec<T>> = basis.into_iter().map(|(u, _)| u).collect();
    Ok(Matrix::from_columns(n, &cols))
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `q`.
pub fn orthogonal_complement<T: Scalar>(q: &Matrix<T>) -> Matrix<T> {
    let n = q.rows();
    let mut basis: Vec<Vec<T>> = q.columns();
    let k = basis.len();
    let mut candidates: Vec<Vec<T>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|r| if r == i { T::one() } else { T::zero() })
                .collect()
        })
        .collect();
    for _ in 0..2 {
        for b in &basis {
            for w in candidates.iter_mut() {
                let c = dot(b, w);
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= c * *y;
                }
            }
        }
    }
    while basis.len() < n {
        let (idx, _) = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (i, norm(c)))
            .fold((0, f64::NEG_INFINITY), first_max);
        let mut u = candidates.remove(idx);
        for b in &basis {
            let c = dot(b, &u);
            for (x, y) in u.iter_mut().zip(b) {
                *x -= c * *y;
            }
        }
        let nu = norm(&u);
        for x in u.iter_mut() {
            *x = x.scale(1.0 / nu);
        }
        for w in candidates.iter_mut() {
            let c = dot(&u, w);
            for (x, y) in w.iter_mut().zip(&u) {
                *x -= c * *y;
            }
        }
        basis.push(u);
    }
    Matrix::from_columns(n, &basis[k..])
}

/// Exponential of an arbitrary square matrix by scaling and squaring
/// with a truncated Taylor series.
pub fn expm<T: Scalar>(a: &Matrix<T>) -> Matrix<T> {
    assert!(a.is_square());
    let n = a.rows();
    let nrm = a.frobenius_norm();
    let mut squarings = 0;
    let mut s = 1.0;
    while nrm * s > 0.25 {
        s *= 0.5;
        squarings += 1;
    }
    let x = a.scale(s);
    let mut term = Matrix::identity(n);
    let mut sum = Matrix::identity(n);
    for k in 1..=18 {
        term = (&term * &x).scale(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_complex::Complex64;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn identity_spectrum() {
        let e = eig_hermitian(&Matrix::<f64>::identity(3), &tol()).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
        assert_eq!(e.eigenbasis, Matrix::identity(3));
    }

    #[test]
    fn two_by_two_spectrum() {
        // roots of λ² − 4λ + 3
        let a = Matrix::<f64>::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let e = eig_hermitian(&a, &tol()).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 3.0).abs() < 1e-14);
        assert!(e.reconstruct().relative_distance(&a) < 1e-14);
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let a = Matrix::<f64>::from_diag(&[4.0, 1.0, 0.25]);
        let e = eig_hermitian(&a, &tol()).unwrap();
        assert_eq!(e.eigenvalues, vec![0.25, 1.0, 4.0]);
    }

    #[test]
    fn complex_hermitian_spectrum() {
        // [[2, i], [−i, 2]] has eigenvalues 1 and 3
        let i = Complex64::new(0.0, 1.0);
        let two = Complex64::new(2.0, 0.0);
        let a = Matrix::new(2, 2, vec![two, i, -i, two]).unwrap();
        let e = eig_hermitian(&a, &tol()).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 3.0).abs() < 1e-14);
        assert!(e.reconstruct().relative_distance(&a) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = Matrix::<f64>::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(
            eig_hermitian(&a, &tol()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn sqrt_examples() {
        let s = spectral_map(&Matrix::<f64>::identity(3), SpectralFn::Sqrt, &tol()).unwrap();
        assert_eq!(s, Matrix::identity(3));
        let a = Matrix::<f64>::from_diag(&[4.0, 1.0, 0.25]);
        let s = spectral_map(&a, SpectralFn::Sqrt, &tol()).unwrap();
        assert_eq!(s, Matrix::from_diag(&[2.0, 1.0, 0.5]));
    }

    #[test]
    fn sqrt_of_squared_boost() {
        let a = Matrix::<f64>::from_real_rows(&[
            &[1.0, 0.0, 0.0],
            &[0.0, 1.25, 0.75],
            &[0.0, 0.75, 1.25],
        ]);
        let sq = &a * &a;
        let back = spectral_map(&sq, SpectralFn::Sqrt, &tol()).unwrap();
        assert!(back.relative_distance(&a) < 1e-14);
    }

    #[test]
    fn sqrt_needs_positivity() {
        let a = Matrix::<f64>::from_diag(&[1.0, -1.0]);
        assert!(matches!(
            spectral_map(&a, SpectralFn::Sqrt, &tol()),
            Err(Error::NotPositiveDefinite { .. })
        ));
        // exp has no positivity requirement
        assert!(spectral_map(&a, SpectralFn::Exp, &tol()).is_ok());
    }

    #[test]
    fn orthonormalize_examples() {
        let t = tol();
        let e = Matrix::<f64>::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(orthonormalize(&e, None, &t).unwrap(), e);

        let v = Matrix::<f64>::from_real_rows(&[&[2.0, 1.0], &[0.0, 1.0], &[0.0, 0.0]]);
        let q = orthonormalize(&v, None, &t).unwrap();
        assert!(q.relative_distance(&e) < 1e-15);

        let form = SignatureForm::new(3, 2, 1).unwrap();
        let v = Matrix::<f64>::from_real_rows(&[&[0.0], &[0.0], &[2.0]]);
        let q = orthonormalize(&v, Some(&form), &t).unwrap();
        assert_eq!(q.column(0), vec![0.0, 0.0, 1.0]);
        assert_eq!(form.inner(&q.column(0), &q.column(0)), -1.0);
    }

    #[test]
    fn orthonormalize_errors() {
        let t = tol();
        let v = Matrix::<f64>::from_real_rows(&[&[1.0, 2.0], &[1.0, 2.0], &[0.0, 0.0]]);
        assert_eq!(orthonormalize(&v, None, &t), Err(Error::RankDeficient));
        let form = SignatureForm::new(3, 2, 1).unwrap();
        let light = Matrix::<f64>::from_real_rows(&[&[1.0], &[0.0], &[1.0]]);
        assert!(matches!(
            orthonormalize(&light, Some(&form), &t),
            Err(Error::IsotropicPivot { .. })
        ));
    }

    #[test]
    fn svd_reconstructs_wide_and_tall() {
        let m = Matrix::<f64>::from_real_rows(&[&[1.0, 2.0, 0.0], &[0.0, 1.0, 1.0]]);
        let s = svd(&m).unwrap();
        assert_eq!(s.singular_values.len(), 3);
        assert!(s.singular_values[2].abs() < 1e-15);
        let sig = Matrix::from_diag(&s.singular_values);
        let back = &(&s.u * &sig) * &s.v.adjoint();
        assert!(back.relative_distance(&m) < 1e-14);
    }

    #[test]
    fn complement_is_orthonormal() {
        let q = Matrix::<Complex64>::from_columns(
            3,
            &[vec![
                Complex64::new(0.6, 0.0),
                Complex64::new(0.0, 0.8),
                Complex64::new(0.0, 0.0),
            ]],
        );
        let c = orthogonal_complement(&q);
        let full = q.hstack(&c);
        let g = &full.adjoint() * &full;
        assert!(g.relative_distance(&Matrix::identity(3)) < 1e-15);
    }

    #[test]
    fn expm_rotation() {
        let th = 0.3;
        let k = Matrix::<f64>::from_real_rows(&[&[0.0, -th], &[th, 0.0]]);
        let r = expm(&k);
        assert!((r[(0, 0)] - libm::cos(th)).abs() < 1e-15);
        assert!((r[(1, 0)] - libm::sin(th)).abs() < 1e-15);
    }
}
