//! Affine subspaces of `Fⁿ`, their directions at infinity, intersections and
//! images under affinities.
//!
//! A subspace is stored canonically: an orthonormal direction frame and the
//! minimum-norm point as base. Rank decisions in [`meet`] use singular
//! values against `1e-8·σ_max`; the least-squares residual that decides
//! between "intersecting" and "disjoint" must fall outside the ambiguity band
//! `[τ_abs, 10·τ_abs]`, otherwise the meet reports [`Error::IllConditioned`].

use alloc::vec::Vec;

use crate::matrix::{add_vec, dot, norm, solve_linear, sub_vec, Matrix};
use crate::scalar::Scalar;
use crate::spectral::{orthonormalize, span_basis, svd, Tolerance};
use crate::Error;

/// Relative singular-value threshold for rank decisions.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// Deviation from orthonormality (and from base ⟂ frame) below which a
/// subspace is taken to be canonical already and left bit-for-bit unchanged.
const CANONICAL_SLACK: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct AffineSubspace<T> {
    base: Vec<T>,
    frame: Matrix<T>,
}

fn is_orthonormal<T: Scalar>(frame: &Matrix<T>) -> bool {
    let g = &frame.adjoint() * frame;
    let k = g.rows();
    (0..k).all(|i| {
        (0..k).all(|j| {
            let target = if i == j { T::one() } else { T::zero() };
            (g[(i, j)] - target).abs() <= CANONICAL_SLACK
        })
    })
}

impl<T: Scalar> AffineSubspace<T> {
    /// Subspace `base + span(directions)`, canonicalized.
    pub fn new(base: Vec<T>, directions: Matrix<T>, tol: &Tolerance) -> Result<Self, Error> {
        if base.len() != directions.rows() {
            return Err(Error::DimensionMismatch {
                expected: directions.rows(),
                found: base.len(),
            });
        }
        let frame = if is_orthonormal(&directions) {
            directions
        } else {
            orthonormalize(&directions, None, tol)?
        };
        let coeffs = frame.adjoint().mat_vec(&base);
        let base = if norm(&coeffs) <= CANONICAL_SLACK * norm(&base) {
            base
        } else {
            sub_vec(&base, &frame.mat_vec(&coeffs))
        };
        Ok(Self { base, frame })
    }

    /// Linear subspace spanned by `directions`.
    pub fn through_origin(directions: Matrix<T>, tol: &Tolerance) -> Result<Self, Error> {
        let n = directions.rows();
        Self::new(alloc::vec![T::zero(); n], directions, tol)
    }

    pub fn point(p: Vec<T>) -> Self {
        let n = p.len();
        Self {
            base: p,
            frame: Matrix::zeros(n, 0),
        }
    }

    /// Span of the standard basis vectors `e_start … e_{start+len−1}`.
    pub fn coordinate(n: usize, start: usize, len: usize) -> Self {
        let frame = Matrix::from_fn(
            n,
            len,
            |i, j| {
                if i == start + j {
                    T::one()
                } else {
                    T::zero()
                }
            },
        );
        Self {
            base: alloc::vec![T::zero(); n],
            frame,
        }
    }

    /// Re-runs canonicalization; a fixed point on canonical input.
    pub fn canonical(&self, tol: &Tolerance) -> Result<Self, Error> {
        Self::new(self.base.clone(), self.frame.clone(), tol)
    }

    pub fn base(&self) -> &[T] {
        &self.base
    }

    pub fn frame(&self) -> &Matrix<T> {
        &self.frame
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    /// F-dimension of the subspace.
    pub fn dim(&self) -> usize {
        self.frame.cols()
    }

    pub fn projector(&self) -> Matrix<T> {
        &self.frame * &self.frame.adjoint()
    }

    /// Euclidean distance from `p` to the subspace.
    pub fn distance_to_point(&self, p: &[T]) -> f64 {
        let d = sub_vec(p, &self.base);
        let c = self.frame.adjoint().mat_vec(&d);
        norm(&sub_vec(&d, &self.frame.mat_vec(&c)))
    }

    pub fn passes_through_origin(&self, tol: &Tolerance) -> bool {
        norm(&self.base) <= tol.abs
    }
}

/// Linear subspace of directions: the trace of an affine subspace on the
/// hyperplane at infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct InfinityDirection<T> {
    frame: Matrix<T>,
}

impl<T: Scalar> InfinityDirection<T> {
    pub fn new(directions: Matrix<T>, tol: &Tolerance) -> Result<Self, Error> {
        let frame = if is_orthonormal(&directions) {
            directions
        } else {
            orthonormalize(&directions, None, tol)?
        };
        Ok(Self { frame })
    }

    pub fn frame(&self) -> &Matrix<T> {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.cols()
    }

    pub fn projector(&self) -> Matrix<T> {
        &self.frame * &self.frame.adjoint()
    }
}

pub fn at_infinity<T: Scalar>(s: &AffineSubspace<T>) -> InfinityDirection<T> {
    InfinityDirection {
        frame: s.frame.clone(),
    }
}

/// `w ∨ Z`: the subspace through `w` with direction `Z`.
pub fn join_point_direction<T: Scalar>(
    w: &[T],
    z: &InfinityDirection<T>,
    tol: &Tolerance,
) -> Result<AffineSubspace<T>, Error> {
    AffineSubspace::new(w.to_vec(), z.frame.clone(), tol)
}

/// Affinity `x ↦ L·x + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Affinity<T> {
    pub translation: Vec<T>,
    pub linear: Matrix<T>,
}

impl<T: Scalar> Affinity<T> {
    pub fn identity(n: usize) -> Self {
        Self {
            translation: alloc::vec![T::zero(); n],
            linear: Matrix::identity(n),
        }
    }

    pub fn translation(t: Vec<T>) -> Self {
        let n = t.len();
        Self {
            translation: t,
            linear: Matrix::identity(n),
        }
    }

    pub fn linear(m: Matrix<T>) -> Self {
        Self {
            translation: alloc::vec![T::zero(); m.rows()],
            linear: m,
        }
    }

    /// `x ↦ L·x + t`.
    pub fn new(translation: Vec<T>, linear: Matrix<T>) -> Self {
        Self {
            translation,
            linear,
        }
    }

    pub fn apply_point(&self, x: &[T]) -> Vec<T> {
        add_vec(&self.linear.mat_vec(x), &self.translation)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            translation: self.apply_point(&other.translation),
            linear: &self.linear * &other.linear,
        }
    }

    pub fn inverse(&self, tol: &Tolerance) -> Result<Self, Error> {
        let n = self.linear.rows();
        let inv = solve_linear(&self.linear, &Matrix::identity(n), tol)?;
        let t = inv.mat_vec(&self.translation);
        Ok(Self {
            translation: t.iter().map(|&x| -x).collect(),
            linear: inv,
        })
    }
}

/// Image of a subspace under an affinity.
pub fn apply<T: Scalar>(
    g: &Affinity<T>,
    s: &AffineSubspace<T>,
    tol: &Tolerance,
) -> Result<AffineSubspace<T>, Error> {
    AffineSubspace::new(g.apply_point(&s.base), &g.linear * &s.frame, tol)
}

/// Intersection of two affine subspaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Meet<T> {
    Empty,
    Subspace(AffineSubspace<T>),
}

impl<T: Scalar> Meet<T> {
    /// The intersection point, if the meet is a single point.
    pub fn single_point(&self) -> Option<&[T]> {
        match self {
            Meet::Subspace(s) if s.dim() == 0 => Some(s.base()),
            _ => None,
        }
    }
}

/// Meet together with the conditioning of the joint system
/// (`σ_min / σ_max` of `[F₁ | −F₂]`, zero when rank deficient).
#[derive(Debug, Clone, PartialEq)]
pub struct MeetDetail<T> {
    pub meet: Meet<T>,
    pub margin: f64,
}

pub fn meet<T: Scalar>(
    s1: &AffineSubspace<T>,
    s2: &AffineSubspace<T>,
    tol: &Tolerance,
) -> Result<Meet<T>, Error> {
    meet_detailed(s1, s2, tol).map(|d| d.meet)
}

pub fn meet_detailed<T: Scalar>(
    s1: &AffineSubspace<T>,
    s2: &AffineSubspace<T>,
    tol: &Tolerance,
) -> Result<MeetDetail<T>, Error> {
    let n = s1.ambient_dim();
    if s2.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s2.ambient_dim(),
        });
    }
    let (k1, k2) = (s1.dim(), s2.dim());
    let d = sub_vec(&s2.base, &s1.base);
    let m = s1.frame.hstack(&s2.frame.scale(-1.0));
    let k = k1 + k2;

    let (x, null, margin) = if k == 0 {
        (Vec::new(), Vec::new(), 1.0)
    } else {
        let dec = svd(&m)?;
        let smax = dec.singular_values[0];
        let thr = RANK_THRESHOLD * smax;
        let rank = dec.singular_values.iter().filter(|&&s| s > thr).count();
        let mut x = alloc::vec![T::zero(); k];
        for l in 0..rank {
            let c = dot(&dec.u.column(l), &d).scale(1.0 / dec.singular_values[l]);
            for (xi, vi) in x.iter_mut().zip(dec.v.column(l)) {
                *xi += vi * c;
            }
        }
        let null: Vec<Vec<T>> = (rank..k).map(|l| dec.v.column(l)).collect();
        let margin = if rank == k && smax > 0.0 {
            dec.singular_values[k - 1] / smax
        } else {
            0.0
        };
        (x, null, margin)
    };

    let residual = if k == 0 {
        norm(&d)
    } else {
        norm(&sub_vec(&m.mat_vec(&x), &d))
    };
    if residual > 10.0 * tol.abs {
        return Ok(MeetDetail {
            meet: Meet::Empty,
            margin,
        });
    }
    if residual >= tol.abs {
        return Err(Error::IllConditioned { residual });
    }
    let point = add_vec(&s1.base, &s1.frame.mat_vec(&x[..k1.min(x.len())]));
    let directions: Vec<Vec<T>> = null.iter().map(|v| s1.frame.mat_vec(&v[..k1])).collect();
    let dirs = span_basis(&Matrix::from_columns(n, &directions), RANK_THRESHOLD);
    let sub = AffineSubspace::new(point, dirs, tol)?;
    Ok(MeetDetail {
        meet: Meet::Subspace(sub),
        margin,
    })
}

/// `‖P₁ − P₂‖_F + ‖b₁ − b₂‖` for canonical subspaces of equal dimension,
/// where `Pᵢ` projects onto the directions and `bᵢ` is the minimum-norm point.
///
/// Canonical base points already lie in the normal spaces, so the gap term
/// measures the offset normal to the directions; when the directions agree
/// it is exactly the offset along the common normal space.
pub fn subspace_distance<T: Scalar>(
    s1: &AffineSubspace<T>,
    s2: &AffineSubspace<T>,
) -> Result<f64, Error> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch {
            expected: s1.dim(),
            found: s2.dim(),
        });
    }
    if s1.ambient_dim() != s2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: s1.ambient_dim(),
            found: s2.ambient_dim(),
        });
    }
    let proj = (&s1.projector() - &s2.projector()).frobenius_norm();
    Ok(proj + norm(&sub_vec(&s1.base, &s2.base)))
}

/// Result of a transversality scan.
#[derive(Debug, Clone, PartialEq)]
pub struct TransversalityReport {
    pub samples: usize,
    /// Smallest `σ_min/σ_max` of the joint intersection systems.
    pub worst_margin: f64,
}

/// Checks that `W` meets `ρ(U)` in exactly one point for every supplied `ρ`.
pub fn transversality_check<'a, T: Scalar>(
    w: &AffineSubspace<T>,
    rhos: impl IntoIterator<Item = &'a Matrix<T>>,
    u: &AffineSubspace<T>,
    tol: &Tolerance,
) -> Result<TransversalityReport, Error> {
    if w.dim() + u.dim() != w.ambient_dim() {
        return Err(Error::Precondition(
            "transversal and carrier dimensions must add up to n",
        ));
    }
    let mut worst = f64::INFINITY;
    let mut samples = 0;
    for (idx, rho) in rhos.into_iter().enumerate() {
        let image = apply(&Affinity::linear(rho.clone()), u, tol)?;
        let detail = match meet_detailed(w, &image, tol) {
            Ok(d) => d,
            Err(Error::IllConditioned { .. }) => {
                return Err(Error::TransversalityViolated { sample: idx })
            }
            Err(e) => return Err(e),
        };
        if detail.meet.single_point().is_none() {
            return Err(Error::TransversalityViolated { sample: idx });
        }
        worst = worst.min(detail.margin);
        samples += 1;
    }
    Ok(TransversalityReport {
        samples,
        worst_margin: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn e(n: usize, i: usize) -> Vec<f64> {
        (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect()
    }

    fn line(base: Vec<f64>, dir: Vec<f64>) -> AffineSubspace<f64> {
        let n = dir.len();
        AffineSubspace::new(base, Matrix::from_columns(n, &[dir]), &tol()).unwrap()
    }

    #[test]
    fn infinity_ignores_base() {
        let plane = AffineSubspace::<f64>::coordinate(3, 0, 2);
        let shifted = AffineSubspace::new(e(3, 2), plane.frame().clone(), &tol()).unwrap();
        assert_eq!(at_infinity(&plane), at_infinity(&shifted));
        assert_eq!(at_infinity(&plane).frame(), plane.frame());
    }

    #[test]
    fn boost_image_direction() {
        let (c, s) = (1.25, 0.75);
        let a = Matrix::<f64>::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, c, s], &[0.0, s, c]]);
        let plane = AffineSubspace::<f64>::coordinate(3, 0, 2);
        let img = apply(&Affinity::linear(a), &plane, &tol()).unwrap();
        let h = libm::sqrt(c * c + s * s);
        let expected = Matrix::from_columns(3, &[e(3, 0), vec![0.0, c / h, s / h]]);
        let p = &expected * &expected.adjoint();
        assert!((&at_infinity(&img).projector() - &p).frobenius_norm() < 1e-15);
    }

    #[test]
    fn meet_plane_and_axis() {
        let plane = AffineSubspace::<f64>::coordinate(3, 0, 2);
        let axis = AffineSubspace::<f64>::coordinate(3, 2, 1);
        let m = meet(&plane, &axis, &tol()).unwrap();
        assert_eq!(m.single_point().unwrap(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn parallel_lines_do_not_meet() {
        let a = line(vec![0.0; 3], e(3, 0));
        let b = line(e(3, 1), e(3, 0));
        assert_eq!(meet(&a, &b, &tol()).unwrap(), Meet::Empty);
    }

    #[test]
    fn coincident_lines_meet_in_a_line() {
        let a = line(vec![0.0; 3], e(3, 0));
        let b = line(vec![5.0, 0.0, 0.0], vec![-2.0, 0.0, 0.0]);
        match meet(&a, &b, &tol()).unwrap() {
            Meet::Subspace(s) => assert!(subspace_distance(&s, &a).unwrap() < 1e-15),
            Meet::Empty => panic!("expected a line"),
        }
    }

    #[test]
    fn ambiguous_gap_is_reported() {
        let a = line(vec![0.0; 3], e(3, 0));
        let b = line(vec![0.0, 5e-9, 0.0], e(3, 0));
        assert!(matches!(
            meet(&a, &b, &tol()),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn join_round_trip() {
        let z = InfinityDirection::new(Matrix::from_columns(3, &[e(3, 0)]), &tol()).unwrap();
        let axis = join_point_direction(&[0.0; 3], &z, &tol()).unwrap();
        assert_eq!(axis, line(vec![0.0; 3], e(3, 0)));
        let w = [0.3, -1.0, 2.0];
        let s = join_point_direction(&w, &z, &tol()).unwrap();
        assert_eq!(at_infinity(&s), z);
        assert!(s.distance_to_point(&w) < 1e-15);
    }

    #[test]
    fn distance_examples() {
        let a = line(vec![0.0; 3], e(3, 0));
        let b = line(vec![0.0; 3], e(3, 1));
        assert_eq!(subspace_distance(&a, &a).unwrap(), 0.0);
        assert!((subspace_distance(&a, &b).unwrap() - libm::sqrt(2.0)).abs() < 1e-15);
        let c = line(e(3, 1), e(3, 0));
        assert!((subspace_distance(&a, &c).unwrap() - 1.0).abs() < 1e-15);
        let plane = AffineSubspace::<f64>::coordinate(3, 0, 2);
        assert!(matches!(
            subspace_distance(&a, &plane),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn translation_keeps_direction() {
        let plane = AffineSubspace::<f64>::coordinate(3, 0, 2);
        let moved = apply(&Affinity::translation(vec![1.0, 2.0, 3.0]), &plane, &tol()).unwrap();
        assert_eq!(at_infinity(&moved), at_infinity(&plane));
        assert_eq!(moved.base(), &[0.0, 0.0, 3.0]);
        let same = apply(&Affinity::identity(3), &plane, &tol()).unwrap();
        assert_eq!(same, plane);
    }

    #[test]
    fn transversality_dimension_precondition() {
        let w1 = AffineSubspace::<f64>::coordinate(3, 0, 2);
        let id = Matrix::identity(3);
        assert!(matches!(
            transversality_check(&w1, [&id], &w1, &tol()),
            Err(Error::Precondition(_))
        ));
        let w2 = AffineSubspace::<f64>::coordinate(3, 2, 1);
        let r = transversality_check(&w2, [&id], &w1, &tol()).unwrap();
        assert_eq!(r.samples, 1);
        assert!((r.worst_margin - 1.0).abs() < 1e-15);
    }

    #[test]
    fn transversality_violation() {
        let w1 = AffineSubspace::<f64>::coordinate(3, 0, 2);
        let inside = line(vec![0.0; 3], vec![1.0, 1.0, 0.0]);
        let id = Matrix::identity(3);
        assert_eq!(
            transversality_check(&inside, [&id], &w1, &tol()),
            Err(Error::TransversalityViolated { sample: 0 })
        );
    }
}
