use bruckloop::matrix::Matrix;
use bruckloop::spectral::{eig_hermitian, spectral_map, SpectralFn};
use bruckloop::{Complex64, SampleStream, Scalar, Tolerance};
use proptest::prelude::*;

fn random_hermitian<T: Scalar>(n: usize, seed: u64) -> Matrix<T> {
    let mut s = SampleStream::new(seed);
    let m = Matrix::from_fn(n, n, |_, _| s.scalar::<T>(1.0));
    (&m + &m.adjoint()).scale(0.5)
}

/// `B·B̄ᵗ + δI`, comfortably positive definite.
fn random_positive<T: Scalar>(n: usize, seed: u64) -> Matrix<T> {
    let mut s = SampleStream::new(seed);
    let b = Matrix::from_fn(n, n, |_, _| s.scalar::<T>(1.0));
    let mut m = (&b * &b.adjoint()).hermitian_part();
    for i in 0..n {
        m[(i, i)] += T::from_real(0.5);
    }
    m
}

fn reconstruction<T: Scalar>(a: &Matrix<T>) -> f64 {
    let eig = eig_hermitian(a, &Tolerance::default()).unwrap();
    assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    (&eig.reconstruct() - a).frobenius_norm() / a.frobenius_norm().max(1.0)
}

#[test]
fn eigen_reconstruction_on_200_matrices() {
    let mut worst: f64 = 0.0;
    for seed in 0..100 {
        let n = 2 + (seed as usize % 5);
        worst = worst.max(reconstruction(&random_hermitian::<f64>(n, seed)));
        worst = worst.max(reconstruction(&random_hermitian::<Complex64>(n, seed)));
    }
    assert!(worst <= 1e-10, "worst reconstruction {worst:e}");
}

#[test]
fn eigenbasis_is_unitary() {
    let a = random_hermitian::<Complex64>(6, 11);
    let eig = eig_hermitian(&a, &Tolerance::default()).unwrap();
    let g = &eig.eigenbasis.adjoint() * &eig.eigenbasis;
    assert!((&g - &Matrix::identity(6)).frobenius_norm() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sqrt_undoes_square(seed in any::<u64>(), n in 2usize..6) {
        let tol = Tolerance::default();
        let a = random_positive::<Complex64>(n, seed);
        let sq = spectral_map(&a, SpectralFn::Square, &tol).unwrap();
        let back = spectral_map(&sq, SpectralFn::Sqrt, &tol).unwrap();
        prop_assert!(back.relative_distance(&a) <= 1e-9);
    }

    #[test]
    fn exp_undoes_log(seed in any::<u64>(), n in 2usize..6) {
        let tol = Tolerance::default();
        let a = random_positive::<f64>(n, seed);
        let log = spectral_map(&a, SpectralFn::Log, &tol).unwrap();
        let back = spectral_map(&log, SpectralFn::Exp, &tol).unwrap();
        prop_assert!(back.relative_distance(&a) <= 1e-9);
    }

    #[test]
    fn inverse_sqrt_squares_to_inverse(seed in any::<u64>(), n in 2usize..6) {
        let tol = Tolerance::default();
        let a = random_positive::<f64>(n, seed);
        let r = spectral_map(&a, SpectralFn::InverseSqrt, &tol).unwrap();
        let prod = &(&r * &r) * &a;
        prop_assert!(prod.relative_distance(&Matrix::identity(n)) <= 1e-9);
    }
}
