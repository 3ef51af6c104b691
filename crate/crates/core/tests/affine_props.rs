use bruckloop::affine::{apply, meet, subspace_distance, AffineSubspace, Affinity, Meet};
use bruckloop::forms::sample_sigma;
use bruckloop::matrix::{norm, sub_vec};
use bruckloop::{Complex64, Matrix, SampleStream, Scalar, SignatureForm, Tolerance};
use proptest::prelude::*;

fn random_subspace<T: Scalar>(n: usize, k: usize, s: &mut SampleStream) -> AffineSubspace<T> {
    let base: Vec<T> = (0..n).map(|_| s.scalar::<T>(2.0)).collect();
    let frame = Matrix::from_fn(n, k, |_, _| s.scalar::<T>(1.0));
    AffineSubspace::new(base, frame, &Tolerance::default()).unwrap()
}

fn random_affinity<T: Scalar>(n: usize, s: &mut SampleStream) -> Affinity<T> {
    let t: Vec<T> = (0..n).map(|_| s.scalar::<T>(1.0)).collect();
    let mut m = Matrix::from_fn(n, n, |_, _| s.scalar::<T>(0.4));
    for i in 0..n {
        m[(i, i)] += T::one();
    }
    Affinity::new(t, m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonicalization_is_idempotent(seed in any::<u64>(), k in 0usize..4) {
        let tol = Tolerance::default();
        let mut s = SampleStream::new(seed);
        let a = random_subspace::<Complex64>(4, k, &mut s);
        let again = a.canonical(&tol).unwrap();
        prop_assert_eq!(&again, &a);
        prop_assert_eq!(again.canonical(&tol).unwrap(), again);
    }

    #[test]
    fn distance_is_a_pseudometric(seed in any::<u64>(), k in 0usize..3) {
        let mut s = SampleStream::new(seed);
        let a = random_subspace::<f64>(4, k, &mut s);
        let b = random_subspace::<f64>(4, k, &mut s);
        let c = random_subspace::<f64>(4, k, &mut s);
        let ab = subspace_distance(&a, &b).unwrap();
        prop_assert_eq!(ab, subspace_distance(&b, &a).unwrap());
        prop_assert!(subspace_distance(&a, &a).unwrap() == 0.0);
        let via = ab + subspace_distance(&b, &c).unwrap();
        prop_assert!(subspace_distance(&a, &c).unwrap() <= via + 1e-12);
    }

    #[test]
    fn apply_respects_meet(seed in any::<u64>()) {
        let tol = Tolerance::default();
        let mut s = SampleStream::new(seed);
        let a = random_subspace::<f64>(4, 2, &mut s);
        let b = random_subspace::<f64>(4, 2, &mut s);
        let g = random_affinity::<f64>(4, &mut s);
        let before = meet(&a, &b, &tol).unwrap();
        let p = before.single_point().unwrap();
        let moved = meet(&apply(&g, &a, &tol).unwrap(), &apply(&g, &b, &tol).unwrap(), &tol).unwrap();
        let q = moved.single_point().unwrap();
        prop_assert!(norm(&sub_vec(&g.apply_point(p), q)) <= 1e-9);
    }

    #[test]
    fn apply_composes(seed in any::<u64>()) {
        let tol = Tolerance::default();
        let mut s = SampleStream::new(seed);
        let a = random_subspace::<Complex64>(3, 1, &mut s);
        let g = random_affinity::<Complex64>(3, &mut s);
        let h = random_affinity::<Complex64>(3, &mut s);
        let two_steps = apply(&g, &apply(&h, &a, &tol).unwrap(), &tol).unwrap();
        let one_step = apply(&g.compose(&h), &a, &tol).unwrap();
        prop_assert!(subspace_distance(&two_steps, &one_step).unwrap() <= 1e-9);
    }

    #[test]
    fn sigma_images_meet_boosted_transversal_once(seed in any::<u64>()) {
        let tol = Tolerance::default();
        let form = SignatureForm::new(3, 2, 1).unwrap();
        let boost = bruckloop::forms::boost::<f64>(&form, 0.69).into_matrix();
        let w2 = AffineSubspace::<f64>::coordinate(3, 2, 1);
        let wt = apply(&Affinity::linear(boost), &w2, &tol).unwrap();
        let rho = sample_sigma::<f64>(&form, &mut SampleStream::new(seed), 1.0, &tol).unwrap();
        let img = apply(&Affinity::linear(rho.into_matrix()), &AffineSubspace::coordinate(3, 0, 2), &tol).unwrap();
        match meet(&wt, &img, &tol).unwrap() {
            Meet::Subspace(p) => prop_assert_eq!(p.dim(), 0),
            Meet::Empty => prop_assert!(false, "empty meet"),
        }
    }
}

#[test]
fn affinity_inverse_round_trip() {
    let tol = Tolerance::default();
    let mut s = SampleStream::new(3);
    let g = random_affinity::<f64>(4, &mut s);
    let id = g.compose(&g.inverse(&tol).unwrap());
    assert!(id.linear.relative_distance(&Matrix::identity(4)) < 1e-12);
    assert!(norm(&id.translation) < 1e-12);
}
