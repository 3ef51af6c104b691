//! The loop of affine subspaces `τ·ρ(Wᵢ)` obtained by extending the matrix
//! loop with translations along a transversal subspace `W̃ⱼ`.
//!
//! An element is stored as a pair `(w, ρ)` with `w ∈ W̃ⱼ` and `ρ ∈ Σ`, and
//! realizes the subspace `w + ρ(Wᵢ)`. Because `W̃ⱼ` and `ρ(Wᵢ)` both pass
//! through the origin and meet only there, `w` is exactly the intersection
//! of the realized subspace with `W̃ⱼ`, and `ρ` is the unique element of Σ
//! sending `Wᵢ` to the realized direction at infinity.
//!
//! Multiplication translates the right factor by the affinity `x ↦ ρ₁x + w₁`
//! and reads the result back in these coordinates:
//!
//! ```text
//! ρ₃ = ρ₁ ∘ ρ₂                       (matrix loop)
//! w₃ = w₁ + ρ₁(w₂ + ρ₂(Wᵢ)) ∩ W̃ⱼ
//! ```
//!
//! The lift from a direction at infinity back to Σ completes a
//! `J`-orthonormal basis of the direction to an isometry `M` of determinant
//! one and keeps the Σ-factor of `M = S₁·C`. Rescaling a complementary
//! column by a unit scalar only changes `C`, and `C` stabilizes `Wᵢ`, so
//! the lift does not depend on the completion chosen.

use alloc::vec::Vec;

use crate::affine::{
    apply, at_infinity, meet, subspace_distance, transversality_check, AffineSubspace, Affinity,
    InfinityDirection, TransversalityReport,
};
use crate::forms::{boost, polar_factorize, sample_phi, sample_sigma, PhiElement, SigmaElement};
use crate::loops::Loop;
use crate::matrix::{add_vec, sub_vec, Matrix};
use crate::matrix_loop::MatrixLoop;
use crate::rng::SampleStream;
use crate::scalar::{Field, Scalar};
use crate::spectral::{orthogonal_complement, orthonormalize, svd, Tolerance};
use crate::{Error, SignatureForm};

/// Number of Σ samples used to validate a transversal at configuration time.
pub const TRANSVERSALITY_SAMPLES: usize = 64;

const TRANSVERSALITY_SEED: u64 = 0x7472_616e_7376;

/// Which coordinate subspace carries the loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Carrier {
    /// `W₁ = span(e₁ … e_{p1})`, positive for the form.
    Positive,
    /// `W₂ = span(e_{p1+1} … eₙ)`, negative for the form.
    Negative,
}

impl Carrier {
    pub fn from_index(i: u8) -> Result<Self, Error> {
        match i {
            1 => Ok(Carrier::Positive),
            2 => Ok(Carrier::Negative),
            _ => Err(Error::Precondition("carrier index must be 1 or 2")),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Carrier::Positive => 1,
            Carrier::Negative => 2,
        }
    }

    pub fn complement(self) -> Self {
        match self {
            Carrier::Positive => Carrier::Negative,
            Carrier::Negative => Carrier::Positive,
        }
    }

    /// `(first coordinate, dimension)` of the coordinate subspace.
    pub fn coordinates(self, form: &SignatureForm) -> (usize, usize) {
        match self {
            Carrier::Positive => (0, form.p1),
            Carrier::Negative => (form.p1, form.p2),
        }
    }

    pub fn subspace<T: Scalar>(self, form: &SignatureForm) -> AffineSubspace<T> {
        let (start, len) = self.coordinates(form);
        AffineSubspace::coordinate(form.n, start, len)
    }

    fn sign(self) -> f64 {
        match self {
            Carrier::Positive => 1.0,
            Carrier::Negative => -1.0,
        }
    }
}

/// Validated configuration of an extension loop.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionConfig<T> {
    form: SignatureForm,
    carrier: Carrier,
    wtilde: AffineSubspace<T>,
    tol: Tolerance,
    radius: f64,
    transversality: TransversalityReport,
}

impl<T: Scalar> ExtensionConfig<T> {
    /// Checks that `wtilde` passes through the origin, has the complementary
    /// dimension and meets `ρ(Wᵢ)` in one point for sampled `ρ ∈ Σ`.
    pub fn new(
        form: SignatureForm,
        carrier: Carrier,
        wtilde: AffineSubspace<T>,
        tol: Tolerance,
        radius: f64,
    ) -> Result<Self, Error> {
        tol.validate()?;
        if wtilde.ambient_dim() != form.n {
            return Err(Error::DimensionMismatch {
                expected: form.n,
                found: wtilde.ambient_dim(),
            });
        }
        let (_, pj) = carrier.complement().coordinates(&form);
        if wtilde.dim() != pj {
            return Err(Error::DimensionMismatch {
                expected: pj,
                found: wtilde.dim(),
            });
        }
        if !wtilde.passes_through_origin(&tol) {
            return Err(Error::Precondition(
                "transversal must pass through the origin",
            ));
        }
        let mut stream = SampleStream::new(TRANSVERSALITY_SEED);
        let mut rhos = Vec::with_capacity(TRANSVERSALITY_SAMPLES + 1);
        rhos.push(Matrix::identity(form.n));
        for _ in 0..TRANSVERSALITY_SAMPLES {
            rhos.push(sample_sigma::<T>(&form, &mut stream, radius, &tol)?.into_matrix());
        }
        let transversality =
            transversality_check(&wtilde, rhos.iter(), &carrier.subspace(&form), &tol)?;
        Ok(Self {
            form,
            carrier,
            wtilde,
            tol,
            radius,
            transversality,
        })
    }

    /// `W̃ⱼ = Wⱼ`.
    pub fn standard(
        form: SignatureForm,
        carrier: Carrier,
        tol: Tolerance,
        radius: f64,
    ) -> Result<Self, Error> {
        let wtilde = carrier.complement().subspace(&form);
        Self::new(form, carrier, wtilde, tol, radius)
    }

    /// `W̃ⱼ = A(t)(Wⱼ)` for the boost `A(t)`.
    pub fn boosted(
        form: SignatureForm,
        carrier: Carrier,
        t: f64,
        tol: Tolerance,
        radius: f64,
    ) -> Result<Self, Error> {
        let a = boost::<T>(&form, t).into_matrix();
        let wtilde = apply(
            &Affinity::linear(a),
            &carrier.complement().subspace(&form),
            &tol,
        )?;
        Self::new(form, carrier, wtilde, tol, radius)
    }

    pub fn form(&self) -> &SignatureForm {
        &self.form
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn wtilde(&self) -> &AffineSubspace<T> {
        &self.wtilde
    }

    pub fn tolerance(&self) -> &Tolerance {
        &self.tol
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Outcome of the configuration-time transversality scan.
    pub fn transversality(&self) -> &TransversalityReport {
        &self.transversality
    }

    /// `Wᵢ` as an affine subspace through the origin.
    pub fn carrier_subspace(&self) -> AffineSubspace<T> {
        self.carrier.subspace(&self.form)
    }

    pub fn matrix_loop(&self) -> MatrixLoop<T> {
        MatrixLoop::new(self.form, self.tol).with_radius(self.radius)
    }

    /// `S ∩ W̃ⱼ`, which must be a single point.
    pub fn meet_transversal(&self, s: &AffineSubspace<T>) -> Result<Vec<T>, Error> {
        match meet(s, &self.wtilde, &self.tol) {
            Ok(m) => m
                .single_point()
                .map(<[T]>::to_vec)
                .ok_or(Error::TransversalityViolated { sample: 0 }),
            Err(Error::IllConditioned { .. }) => Err(Error::TransversalityViolated { sample: 0 }),
            Err(e) => Err(e),
        }
    }
}

/// A point of the extension loop: translation part `w ∈ W̃ⱼ` and the Σ-lift
/// of the direction at infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionElement<T> {
    pub w: Vec<T>,
    pub rho: SigmaElement<T>,
}

impl<T: Scalar> ExtensionElement<T> {
    /// Validates `w ∈ W̃ⱼ` and the form of `rho`.
    pub fn new(w: Vec<T>, rho: SigmaElement<T>, cfg: &ExtensionConfig<T>) -> Result<Self, Error> {
        if w.len() != cfg.form.n {
            return Err(Error::DimensionMismatch {
                expected: cfg.form.n,
                found: w.len(),
            });
        }
        if *rho.form() != cfg.form {
            return Err(Error::DimensionMismatch {
                expected: cfg.form.n,
                found: rho.form().n,
            });
        }
        let off = cfg.wtilde.distance_to_point(&w);
        if !(off <= cfg.tol.abs * (1.0 + crate::matrix::norm(&w))) {
            return Err(Error::Precondition(
                "translation part must lie in the transversal",
            ));
        }
        Ok(Self { w, rho })
    }

    pub fn identity(form: SignatureForm) -> Self {
        Self {
            w: alloc::vec![T::zero(); form.n],
            rho: SigmaElement::identity(form),
        }
    }
}

/// The subspace `w + ρ(Wᵢ)`.
pub fn realize<T: Scalar>(
    e: &ExtensionElement<T>,
    cfg: &ExtensionConfig<T>,
) -> Result<AffineSubspace<T>, Error> {
    let frame = cfg.carrier_subspace().frame().clone();
    AffineSubspace::new(e.w.clone(), e.rho.matrix() * &frame, &cfg.tol)
}

/// Coordinates of an orbit subspace: its point on `W̃ⱼ` and the lift of its
/// direction at infinity.
pub fn omega<T: Scalar>(
    s: &AffineSubspace<T>,
    cfg: &ExtensionConfig<T>,
) -> Result<ExtensionElement<T>, Error> {
    let rho = lift_from_infinity(&at_infinity(s), cfg)?;
    let w = cfg.meet_transversal(s)?;
    Ok(ExtensionElement { w, rho })
}

/// The unique `ρ ∈ Σ` with `ρ(Wᵢ)` having direction `Z`.
pub fn lift_from_infinity<T: Scalar>(
    z: &InfinityDirection<T>,
    cfg: &ExtensionConfig<T>,
) -> Result<SigmaElement<T>, Error> {
    let form = &cfg.form;
    let n = form.n;
    let (_, pi) = cfg.carrier.coordinates(form);
    if z.frame().rows() != n || z.dim() != pi {
        return Err(Error::NotInOrbit);
    }
    let want = cfg.carrier.sign();
    let j_orthonormal = |v: &Matrix<T>, sign: f64| -> Result<Matrix<T>, Error> {
        let q = match orthonormalize(v, Some(form), &cfg.tol) {
            Ok(q) => q,
            Err(Error::IsotropicPivot { .. }) | Err(Error::RankDeficient) => {
                return Err(Error::NotInOrbit)
            }
            Err(e) => return Err(e),
        };
        for c in q.columns() {
            if form.inner(&c, &c).re() * sign <= 0.0 {
                return Err(Error::NotInOrbit);
            }
        }
        Ok(q)
    };
    let basis = j_orthonormal(z.frame(), want)?;
    // J-orthogonal complement of Z = orthogonal complement of J·Z
    let jz = orthonormalize(&form.apply(&basis), None, &cfg.tol)?;
    let comp = j_orthonormal(&orthogonal_complement(&jz), -want)?;

    let mut m = match cfg.carrier {
        Carrier::Positive => basis.hstack(&comp),
        Carrier::Negative => comp.hstack(&basis),
    };
    let fix = m.det().phase().conj();
    let col = match cfg.carrier {
        Carrier::Positive => n - 1,
        Carrier::Negative => 0,
    };
    let scaled: Vec<T> = m.column(col).into_iter().map(|x| x * fix).collect();
    m.set_column(col, &scaled);
    polar_factorize(&m, form, &cfg.tol).map(|(s1, _)| s1)
}

/// `(w₁, ρ₁) ∘ (w₂, ρ₂)`.
pub fn ext_mul<T: Scalar>(
    a: &ExtensionElement<T>,
    b: &ExtensionElement<T>,
    cfg: &ExtensionConfig<T>,
) -> Result<ExtensionElement<T>, Error> {
    let rho = cfg.matrix_loop().product(&a.rho, &b.rho)?;
    let moved = apply(
        &Affinity::linear(a.rho.matrix().clone()),
        &realize(b, cfg)?,
        &cfg.tol,
    )?;
    let w = add_vec(&a.w, &cfg.meet_transversal(&moved)?);
    Ok(ExtensionElement { w, rho })
}

/// `a\b`: the `x` with `a ∘ x = b`.
pub fn ext_left_divide<T: Scalar>(
    a: &ExtensionElement<T>,
    b: &ExtensionElement<T>,
    cfg: &ExtensionConfig<T>,
) -> Result<ExtensionElement<T>, Error> {
    let ml = cfg.matrix_loop();
    let rho = ml.divide_left(&a.rho, &b.rho)?;
    let inv = ml.invert(&a.rho)?.into_matrix();
    let back = Affinity::linear(inv);
    let shifted = Affinity::translation(a.w.iter().map(|&x| -x).collect());
    let pulled = apply(&back.compose(&shifted), &realize(b, cfg)?, &cfg.tol)?;
    let w = cfg.meet_transversal(&pulled)?;
    Ok(ExtensionElement { w, rho })
}

/// The affinity `x ↦ ρx + t` with `t ∈ W̃ⱼ` and `ρ ∈ Σ` that maps `d1` onto
/// `d2`, both in the orbit of `Wᵢ`.
pub fn solve_translation<T: Scalar>(
    d1: &AffineSubspace<T>,
    d2: &AffineSubspace<T>,
    cfg: &ExtensionConfig<T>,
) -> Result<ExtensionElement<T>, Error> {
    let rho1 = lift_from_infinity(&at_infinity(d1), cfg)?;
    let rho2 = lift_from_infinity(&at_infinity(d2), cfg)?;
    let rho = cfg.matrix_loop().divide_right(&rho2, &rho1)?;
    let target = cfg.meet_transversal(d2)?;
    let moved = apply(&Affinity::linear(rho.matrix().clone()), d1, &cfg.tol)?;
    let t = sub_vec(&target, &cfg.meet_transversal(&moved)?);
    Ok(ExtensionElement { w: t, rho })
}

/// `e` read as the affinity `x ↦ ρx + w`.
pub fn as_affinity<T: Scalar>(e: &ExtensionElement<T>) -> Affinity<T> {
    Affinity::new(e.w.clone(), e.rho.matrix().clone())
}

/// The extension loop as a [`Loop`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionLoop<T> {
    pub cfg: ExtensionConfig<T>,
}

impl<T: Scalar> ExtensionLoop<T> {
    pub fn new(cfg: ExtensionConfig<T>) -> Self {
        Self { cfg }
    }
}

impl<T: Scalar> Loop for ExtensionLoop<T> {
    type Element = ExtensionElement<T>;

    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Result<Self::Element, Error> {
        ext_mul(a, b, &self.cfg)
    }

    fn left_divide(&self, a: &Self::Element, b: &Self::Element) -> Result<Self::Element, Error> {
        ext_left_divide(a, b, &self.cfg)
    }

    fn right_divide(&self, b: &Self::Element, a: &Self::Element) -> Result<Self::Element, Error> {
        solve_translation(&realize(a, &self.cfg)?, &realize(b, &self.cfg)?, &self.cfg)
    }

    fn identity(&self) -> Self::Element {
        ExtensionElement::identity(self.cfg.form)
    }

    fn distance(&self, a: &Self::Element, b: &Self::Element) -> f64 {
        let pair = realize(a, &self.cfg)
            .and_then(|ra| realize(b, &self.cfg).and_then(|rb| subspace_distance(&ra, &rb)));
        pair.unwrap_or(f64::INFINITY)
    }

    /// `w` with coordinates uniform in `[−1, 1]` on the canonical basis of
    /// `W̃ⱼ`, and `ρ` from the Σ sampler.
    fn sample(&self, stream: &mut SampleStream) -> Result<Self::Element, Error> {
        let frame = self.cfg.wtilde.frame();
        let coeffs: Vec<T> = (0..frame.cols()).map(|_| stream.scalar::<T>(1.0)).collect();
        let w = frame.mat_vec(&coeffs);
        let rho = sample_sigma(&self.cfg.form, stream, self.cfg.radius, &self.cfg.tol)?;
        Ok(ExtensionElement { w, rho })
    }
}

/// A Φ element moving the transversal.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<T> {
    pub g: PhiElement<T>,
    pub displacement: f64,
    /// 1-based index of the successful sample.
    pub sample: usize,
}

/// Default number of Φ samples tried by [`nonisomorphism_witness`].
pub const WITNESS_BUDGET: usize = 100;
/// Displacement a witness must exceed.
pub const WITNESS_THRESHOLD: f64 = 1e-3;

/// Searches sampled `g ∈ Φ` for one with `d(g(W̃ⱼ), W̃ⱼ) > threshold`.
/// Such a `g` conjugates translations along `W̃ⱼ` to translations along the
/// different subspace `g(W̃ⱼ)`.
pub fn nonisomorphism_witness<T: Scalar>(
    cfg: &ExtensionConfig<T>,
    stream: &mut SampleStream,
    budget: usize,
    threshold: f64,
) -> Result<Witness<T>, Error> {
    let standard = cfg.carrier.complement().subspace::<T>(&cfg.form);
    if subspace_distance(&standard, &cfg.wtilde)? <= cfg.tol.abs {
        return Err(Error::Precondition(
            "transversal coincides with the coordinate subspace, which Φ stabilizes",
        ));
    }
    for sample in 1..=budget {
        let g = sample_phi::<T>(&cfg.form, stream);
        let displacement = phi_displacement(&g, cfg)?;
        if displacement > threshold {
            return Ok(Witness {
                g,
                displacement,
                sample,
            });
        }
    }
    Err(Error::WitnessNotFound { budget })
}

/// `d(g(W̃ⱼ), W̃ⱼ)`.
pub fn phi_displacement<T: Scalar>(
    g: &PhiElement<T>,
    cfg: &ExtensionConfig<T>,
) -> Result<f64, Error> {
    let image = apply(&Affinity::linear(g.matrix().clone()), &cfg.wtilde, &cfg.tol)?;
    subspace_distance(&image, &cfg.wtilde)
}

/// `ε·(pⱼ + p₁p₂)` with `ε` the real dimension of the field.
pub fn expected_dimension(form: &SignatureForm, carrier: Carrier, field: Field) -> usize {
    let (_, pj) = carrier.complement().coordinates(form);
    field.real_dim() * (pj + form.p1 * form.p2)
}

/// Finite-difference step of the rank check.
pub const RANK_STEP: f64 = 1e-5;
/// Singular values below this fraction of the largest are discarded.
pub const RANK_CUTOFF: f64 = 1e-6;
/// Minimal relative gap between the last kept and first discarded value.
pub const RANK_GAP: f64 = 1e-4;

/// Outcome of the numerical dimension estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct RankEstimate {
    /// Most frequent rank among the points with a clear gap.
    pub rank: usize,
    pub ranks: Vec<usize>,
    /// `(σ_r − σ_{r+1}) / σ₀` at each point.
    pub gaps: Vec<f64>,
    /// Points whose gap fell below [`RANK_GAP`].
    pub failed: usize,
}

/// Real basis of the Lie algebra of the isometry group: `J·A` for `A`
/// running over a real basis of the anti-hermitian matrices.
fn isometry_algebra<T: Scalar>(form: &SignatureForm) -> Vec<Matrix<T>> {
    let n = form.n;
    let mut out = Vec::new();
    let unit = |a: usize, b: usize, x: T, y: T| {
        let mut m = Matrix::<T>::zeros(n, n);
        m[(a, b)] = x;
        m[(b, a)] = y;
        form.apply(&m)
    };
    for a in 0..n {
        for b in a + 1..n {
            out.push(unit(a, b, T::one(), -T::one()));
            if T::FIELD == Field::Complex {
                let i = T::from_parts(0.0, 1.0);
                out.push(unit(a, b, i, i));
            }
        }
        if T::FIELD == Field::Complex {
            let mut m = Matrix::<T>::zeros(n, n);
            m[(a, a)] = T::from_parts(0.0, 1.0);
            out.push(form.apply(&m));
        }
    }
    out
}

fn embed<T: Scalar>(s: &AffineSubspace<T>) -> Vec<f64> {
    let p = s.projector();
    let mut v = Vec::new();
    for x in p.as_slice().iter().chain(s.base()) {
        v.push(x.re());
        if T::FIELD == Field::Complex {
            v.push(x.im());
        }
    }
    v
}

/// Estimates the real dimension of the orbit of `Wᵢ` under the affine
/// isometries `x ↦ g·x + t`.
///
/// At each sampled base point the orbit map is differentiated by central
/// differences in all translation and Lie-algebra directions. This over
/// parametrizes the orbit, so the Jacobian rank equals the orbit dimension
/// rather than being capped by the parameter count. Subspaces are embedded
/// as (projector, minimum-norm base point) in real coordinates.
pub fn dimension_rank_check<T: Scalar>(
    cfg: &ExtensionConfig<T>,
    stream: &mut SampleStream,
    points: usize,
) -> Result<RankEstimate, Error> {
    let form = cfg.form;
    let n = form.n;
    let algebra = isometry_algebra::<T>(&form);
    let mut translations: Vec<Vec<T>> = Vec::new();
    for a in 0..n {
        let mut e = alloc::vec![T::zero(); n];
        e[a] = T::one();
        translations.push(e.clone());
        if T::FIELD == Field::Complex {
            e[a] = T::from_parts(0.0, 1.0);
            translations.push(e);
        }
    }
    let carrier = cfg.carrier_subspace();
    let lp = ExtensionLoop::new(cfg.clone());
    let mut ranks = Vec::with_capacity(points);
    let mut gaps = Vec::with_capacity(points);
    let mut failed = 0;
    for _ in 0..points {
        let base = lp.sample(stream)?;
        let g0 = as_affinity(&base);
        let at = |dt: Option<(&[T], f64)>, dk: Option<(&Matrix<T>, f64)>| {
            let local = match dk {
                Some((k, h)) => crate::spectral::expm(&k.scale(h)),
                None => Matrix::identity(n),
            };
            let mut g = g0.compose(&Affinity::linear(local));
            if let Some((t, h)) = dt {
                for (x, y) in g.translation.iter_mut().zip(t) {
                    *x += y.scale(h);
                }
            }
            apply(&g, &carrier, &cfg.tol).map(|s| embed(&s))
        };
        let mut columns: Vec<Vec<f64>> = Vec::new();
        for t in &translations {
            let plus = at(Some((t, RANK_STEP)), None)?;
            let minus = at(Some((t, -RANK_STEP)), None)?;
            columns.push(central(&plus, &minus));
        }
        for k in &algebra {
            let plus = at(None, Some((k, RANK_STEP)))?;
            let minus = at(None, Some((k, -RANK_STEP)))?;
            columns.push(central(&plus, &minus));
        }
        let rows = columns[0].len();
        let jac = Matrix::<f64>::from_columns(rows, &columns);
        let sv = svd(&jac)?.singular_values;
        let top = sv[0];
        if !(top > 0.0) {
            return Err(Error::Precondition("orbit map has a vanishing derivative"));
        }
        let rank = sv.iter().filter(|&&s| s > RANK_CUTOFF * top).count();
        let next = sv.get(rank).copied().unwrap_or(0.0);
        let gap = (sv[rank - 1] - next) / top;
        if !(gap >= RANK_GAP) {
            failed += 1;
        }
        ranks.push(rank);
        gaps.push(gap);
    }
    if failed * 10 > points {
        return Err(Error::RankAmbiguous { failed, points });
    }
    let mut counts: Vec<(usize, usize)> = Vec::new();
    for (&r, &g) in ranks.iter().zip(&gaps) {
        if g < RANK_GAP {
            continue;
        }
        match counts.iter_mut().find(|(v, _)| *v == r) {
            Some((_, c)) => *c += 1,
            None => counts.push((r, 1)),
        }
    }
    let rank = counts
        .iter()
        .fold(
            (0, 0),
            |best, &(r, c)| if c > best.1 { (r, c) } else { best },
        )
        .0;
    Ok(RankEstimate {
        rank,
        ranks,
        gaps,
        failed,
    })
}

fn central(plus: &[f64], minus: &[f64]) -> Vec<f64> {
    plus.iter()
        .zip(minus)
        .map(|(p, m)| (p - m) / (2.0 * RANK_STEP))
        .collect()
}
