use bruckloop::extension::{omega, realize, Carrier, ExtensionConfig, ExtensionLoop};
use bruckloop::forms::{
    conjugate_by_phi, membership_residual, polar_factorize, sample_phi, GroupTarget,
};
use bruckloop::loops::{check_aip, check_bol, check_loop_axioms, Loop};
use bruckloop::matrix::{norm, sub_vec};
use bruckloop::{Complex64, MatrixLoop, SampleStream, Scalar, SignatureForm, Tolerance};
use proptest::prelude::*;

fn forms() -> impl Strategy<Value = SignatureForm> {
    prop_oneof![
        Just(SignatureForm::new(3, 2, 1).unwrap()),
        Just(SignatureForm::new(4, 2, 2).unwrap()),
        Just(SignatureForm::new(4, 3, 1).unwrap()),
        Just(SignatureForm::new(5, 3, 2).unwrap()),
    ]
}

fn in_sigma<T: Scalar>(m: &bruckloop::Matrix<T>, form: &SignatureForm) -> bool {
    membership_residual(m, GroupTarget::Sigma, form, 1e-9)
        .unwrap()
        .pass
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_stays_in_sigma(form in forms(), seed in any::<u64>()) {
        let l = MatrixLoop::<Complex64>::new(form, Tolerance::default());
        let mut s = SampleStream::new(seed);
        let (a, b) = (l.sample(&mut s).unwrap(), l.sample(&mut s).unwrap());
        prop_assert!(in_sigma(l.mul(&a, &b).unwrap().matrix(), &form));
    }

    #[test]
    fn bol_and_aip_hold(form in forms(), seed in any::<u64>()) {
        let l = MatrixLoop::<f64>::new(form, Tolerance::default());
        let mut s = SampleStream::new(seed);
        prop_assert!(check_bol(&l, &mut s, 3, 1e-8).unwrap().pass);
        prop_assert!(check_aip(&l, &mut s, 3, 1e-8).unwrap().pass);
    }

    #[test]
    fn conjugation_is_equivariant(form in forms(), seed in any::<u64>()) {
        // B⁻¹(A∘C)B = (B⁻¹AB)∘(B⁻¹CB)
        let l = MatrixLoop::<Complex64>::new(form, Tolerance::default());
        let mut s = SampleStream::new(seed);
        let (a, c) = (l.sample(&mut s).unwrap(), l.sample(&mut s).unwrap());
        let b = sample_phi::<Complex64>(&form, &mut s);
        let lhs = conjugate_by_phi(&l.mul(&a, &c).unwrap(), &b).unwrap();
        let rhs = l
            .mul(&conjugate_by_phi(&a, &b).unwrap(), &conjugate_by_phi(&c, &b).unwrap())
            .unwrap();
        prop_assert!(lhs.matrix().relative_distance(rhs.matrix()) <= 1e-9);
        prop_assert!(in_sigma(lhs.matrix(), &form));
    }

    #[test]
    fn factorization_round_trip(form in forms(), seed in any::<u64>()) {
        let tol = Tolerance::default();
        let l = MatrixLoop::<Complex64>::new(form, tol);
        let mut s = SampleStream::new(seed);
        let s1 = l.sample(&mut s).unwrap();
        let c = sample_phi::<Complex64>(&form, &mut s);
        let m = s1.matrix() * c.matrix();
        let (f1, fc) = polar_factorize(&m, &form, &tol).unwrap();
        prop_assert!((f1.matrix() - s1.matrix()).max_abs() <= 1e-8);
        prop_assert!((fc.matrix() - c.matrix()).max_abs() <= 1e-8);
    }

    #[test]
    fn omega_inverts_realize(seed in any::<u64>(), boosted in any::<bool>()) {
        let form = SignatureForm::new(4, 2, 2).unwrap();
        let tol = Tolerance::default();
        let cfg = if boosted {
            ExtensionConfig::<f64>::boosted(form, Carrier::Positive, 0.7, tol, 0.75)
        } else {
            ExtensionConfig::<f64>::standard(form, Carrier::Positive, tol, 0.75)
        }
        .unwrap();
        let l = ExtensionLoop::new(cfg.clone());
        let e = l.sample(&mut SampleStream::new(seed)).unwrap();
        let back = omega(&realize(&e, &cfg).unwrap(), &cfg).unwrap();
        prop_assert!(norm(&sub_vec(&back.w, &e.w)) <= 1e-8);
        prop_assert!(back.rho.matrix().relative_distance(e.rho.matrix()) <= 1e-8);
    }
}

#[test]
fn extension_axioms_over_complex() {
    let form = SignatureForm::new(3, 2, 1).unwrap();
    let cfg =
        ExtensionConfig::<Complex64>::standard(form, Carrier::Positive, Tolerance::default(), 0.75)
            .unwrap();
    let r = check_loop_axioms(
        &ExtensionLoop::new(cfg),
        &mut SampleStream::new(1),
        50,
        1e-8,
    )
    .unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn reports_are_deterministic() {
    let form = SignatureForm::new(3, 2, 1).unwrap();
    let l = MatrixLoop::<f64>::new(form, Tolerance::default());
    let a = check_bol(&l, &mut SampleStream::new(7), 20, 1e-8).unwrap();
    let b = check_bol(&l, &mut SampleStream::new(7), 20, 1e-8).unwrap();
    assert_eq!(a.max_residual.to_bits(), b.max_residual.to_bits());
}
