//! Sampled property checks beyond the loop identities: closure of Σ under
//! the loop product and under Φ-conjugation, the polar factorization round
//! trip, transversality and the geometric properties of the extension loop.
//!
//! Each check reports the worst per-sample residual against one tolerance,
//! like the checkers in [`crate::loops`].

use alloc::vec::Vec;

use crate::affine::{apply, at_infinity, subspace_distance, AffineSubspace, Affinity};
use crate::extension::{
    as_affinity, ext_mul, lift_from_infinity, realize, solve_translation, ExtensionConfig,
    ExtensionLoop,
};
use crate::forms::{
    conjugate_by_phi, polar_factorize, sample_phi, sample_sigma, GroupTarget, MembershipReport,
};
use crate::loops::{fold_max, IdentityReport, Loop};
use crate::matrix::{norm, sub_vec, Matrix};
use crate::matrix_loop::MatrixLoop;
use crate::rng::SampleStream;
use crate::scalar::Scalar;
use crate::Error;

/// Worst residual of a Σ membership test; a failed positivity test counts
/// as infinite, since its residual alone can be zero.
fn sigma_residual(report: &MembershipReport) -> f64 {
    let definite = report
        .conditions
        .iter()
        .find(|c| c.name == "positive_definite")
        .is_some_and(|c| c.pass);
    if definite {
        report.max_residual()
    } else {
        f64::INFINITY
    }
}

/// Σ membership of `a∘b` for sampled `a`, `b`.
pub fn check_sigma_closure<T: Scalar>(
    l: &MatrixLoop<T>,
    stream: &mut SampleStream,
    count: usize,
    tol: f64,
) -> Result<IdentityReport, Error> {
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let (a, b) = (l.sample(stream)?, l.sample(stream)?);
        let prod = l.mul(&a, &b)?;
        let report =
            crate::forms::membership_residual(prod.matrix(), GroupTarget::Sigma, &l.form, tol)?;
        worst = fold_max(worst, sigma_residual(&report));
    }
    Ok(IdentityReport::new("sigma_closure", count, worst, tol))
}

/// Σ membership of `B⁻¹·A·B` for sampled `A ∈ Σ`, `B ∈ Φ`.
pub fn check_conjugation_closure<T: Scalar>(
    l: &MatrixLoop<T>,
    stream: &mut SampleStream,
    count: usize,
    tol: f64,
) -> Result<IdentityReport, Error> {
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let a = l.sample(stream)?;
        let b = sample_phi::<T>(&l.form, stream);
        let c = conjugate_by_phi(&a, &b)?;
        let report =
            crate::forms::membership_residual(c.matrix(), GroupTarget::Sigma, &l.form, tol)?;
        worst = fold_max(worst, sigma_residual(&report));
    }
    Ok(IdentityReport::new(
        "conjugation_closure",
        count,
        worst,
        tol,
    ))
}

/// Factorizes `S = S₁·C` built from sampled factors. Returns the largest
/// componentwise factor error (against `factor_tol`) and the largest
/// relative reconstruction error `‖S₁C − S‖_F / ‖S‖_F` (against
/// `reconstruction_tol`).
pub fn check_factorization<T: Scalar>(
    l: &MatrixLoop<T>,
    stream: &mut SampleStream,
    count: usize,
    factor_tol: f64,
    reconstruction_tol: f64,
) -> Result<(IdentityReport, IdentityReport), Error> {
    let mut factors: f64 = 0.0;
    let mut rebuilt: f64 = 0.0;
    for _ in 0..count {
        let s1 = sample_sigma::<T>(&l.form, stream, l.radius, &l.tol)?;
        let c = sample_phi::<T>(&l.form, stream);
        let s = s1.matrix() * c.matrix();
        let (f1, fc) = polar_factorize(&s, &l.form, &l.tol)?;
        let err = (f1.matrix() - s1.matrix())
            .max_abs()
            .max((fc.matrix() - c.matrix()).max_abs());
        factors = fold_max(factors, err);
        let back = f1.matrix() * fc.matrix();
        rebuilt = fold_max(rebuilt, (&back - &s).frobenius_norm() / s.frobenius_norm());
    }
    Ok((
        IdentityReport::new("factorization_factors", count, factors, factor_tol),
        IdentityReport::new(
            "factorization_reconstruction",
            count,
            rebuilt,
            reconstruction_tol,
        ),
    ))
}

/// Scans sampled `ρ ∈ Σ` and checks that `ρ(Wᵢ)` meets the transversal in
/// a single point; the residual is the distance of that point from both
/// subspaces.
pub fn check_transversality<T: Scalar>(
    cfg: &ExtensionConfig<T>,
    stream: &mut SampleStream,
    count: usize,
    tol: f64,
) -> Result<IdentityReport, Error> {
    let carrier = cfg.carrier_subspace();
    let mut worst: f64 = 0.0;
    for sample in 0..count {
        let rho = sample_sigma::<T>(cfg.form(), stream, cfg.radius(), cfg.tolerance())?;
        let image = apply(
            &Affinity::linear(rho.into_matrix()),
            &carrier,
            cfg.tolerance(),
        )?;
        let p = cfg
            .meet_transversal(&image)
            .map_err(|_| Error::TransversalityViolated { sample })?;
        let r = image
            .distance_to_point(&p)
            .max(cfg.wtilde().distance_to_point(&p));
        worst = fold_max(worst, r);
    }
    Ok(IdentityReport::new("transversality", count, worst, tol))
}

/// `realize(a∘b)` against the image of `realize(b)` under `x ↦ ρ_a·x + w_a`.
pub fn check_left_translation<T: Scalar>(
    l: &ExtensionLoop<T>,
    stream: &mut SampleStream,
    count: usize,
    tol: f64,
) -> Result<IdentityReport, Error> {
    let cfg = &l.cfg;
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let (a, b) = (l.sample(stream)?, l.sample(stream)?);
        let prod = realize(&ext_mul(&a, &b, cfg)?, cfg)?;
        let direct = apply(&as_affinity(&a), &realize(&b, cfg)?, cfg.tolerance())?;
        worst = fold_max(worst, subspace_distance(&prod, &direct)?);
    }
    Ok(IdentityReport::new(
        "extension_left_translation",
        count,
        worst,
        tol,
    ))
}

/// The direction at infinity of `a∘b`, lifted back to Σ, against the
/// matrix-loop product `ρ_a∘ρ_b`.
pub fn check_infinity_compatibility<T: Scalar>(
    l: &ExtensionLoop<T>,
    stream: &mut SampleStream,
    count: usize,
    tol: f64,
) -> Result<IdentityReport, Error> {
    let cfg = &l.cfg;
    let ml = cfg.matrix_loop();
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let (a, b) = (l.sample(stream)?, l.sample(stream)?);
        let prod = realize(&ext_mul(&a, &b, cfg)?, cfg)?;
        let lifted = lift_from_infinity(&at_infinity(&prod), cfg)?;
        let expected = ml.mul(&a.rho, &b.rho)?;
        worst = fold_max(worst, lifted.matrix().relative_distance(expected.matrix()));
    }
    Ok(IdentityReport::new(
        "infinity_compatibility",
        count,
        worst,
        tol,
    ))
}

/// Same subspace, described by another base point and a mixed, slightly
/// perturbed frame.
fn perturbed_representative<T: Scalar>(
    s: &AffineSubspace<T>,
    stream: &mut SampleStream,
    eps: f64,
    cfg: &ExtensionConfig<T>,
) -> Result<AffineSubspace<T>, Error> {
    let n = s.ambient_dim();
    let k = s.dim();
    let shift: Vec<T> = (0..k).map(|_| stream.scalar::<T>(1.0)).collect();
    let mut base = crate::matrix::add_vec(s.base(), &s.frame().mat_vec(&shift));
    for x in base.iter_mut() {
        *x += stream.scalar::<T>(eps);
    }
    let mix = Matrix::from_fn(k, k, |i, j| {
        let d = if i == j { T::one() } else { T::zero() };
        d + stream.scalar::<T>(0.3)
    });
    let mut frame = s.frame() * &mix;
    for i in 0..n {
        for j in 0..k {
            frame[(i, j)] += stream.scalar::<T>(eps);
        }
    }
    AffineSubspace::new(base, frame, cfg.tolerance())
}

/// Size of the perturbation applied to representatives in
/// [`check_sharp_transitivity`].
pub const REPRESENTATIVE_PERTURBATION: f64 = 1e-10;

/// For sampled orbit subspaces `D₁`, `D₂`: the solved affinity maps `D₁`
/// onto `D₂` (first report, against `tol`), and solving again from
/// perturbed representatives moves `(t, ρ)` by little (second report,
/// against `stability_tol`).
pub fn check_sharp_transitivity<T: Scalar>(
    l: &ExtensionLoop<T>,
    stream: &mut SampleStream,
    count: usize,
    tol: f64,
    stability_tol: f64,
) -> Result<(IdentityReport, IdentityReport), Error> {
    let cfg = &l.cfg;
    let mut mapped: f64 = 0.0;
    let mut drift: f64 = 0.0;
    for _ in 0..count {
        let d1 = realize(&l.sample(stream)?, cfg)?;
        let d2 = realize(&l.sample(stream)?, cfg)?;
        let x = solve_translation(&d1, &d2, cfg)?;
        let image = apply(&as_affinity(&x), &d1, cfg.tolerance())?;
        mapped = fold_max(mapped, subspace_distance(&image, &d2)?);

        let p1 = perturbed_representative(&d1, stream, REPRESENTATIVE_PERTURBATION, cfg)?;
        let p2 = perturbed_representative(&d2, stream, REPRESENTATIVE_PERTURBATION, cfg)?;
        let y = solve_translation(&p1, &p2, cfg)?;
        let moved = norm(&sub_vec(&x.w, &y.w)) + (x.rho.matrix() - y.rho.matrix()).frobenius_norm();
        drift = fold_max(drift, moved);
    }
    Ok((
        IdentityReport::new("sharp_transitivity", count, mapped, tol),
        IdentityReport::new("sharp_transitivity_stability", count, drift, stability_tol),
    ))
}
