use gadc_core::channels::{coherent_information, QuantumChannel};
use gadc_core::mathcore::{
    cmi, eigvalsh, entropy, entropy_vn, identity, ket, max_abs_diff, partial_trace, random_density,
    random_unitary, relative_entropy, tensor, tensor_all, ComplexMatrix,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn conj(u: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    u * m * u.adjoint()
}

/// Stinespring channel d_in → d_out from a random unitary on in ⊗ env.
fn random_channel(seed: u64, d: usize, env: usize) -> QuantumChannel {
    let mut r = rng(seed);
    let u = random_unitary(d * env, &mut r);
    let env0 = tensor(&identity(d), &ket(env, 0));
    let kraus = (0..env)
        .map(|k| tensor(&identity(d), &ket(env, k).adjoint()) * &u * &env0)
        .collect();
    QuantumChannel::new(d, d, kraus).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_unitarily_invariant(seed in any::<u64>(), d in 2usize..6) {
        let mut r = rng(seed);
        let rho = random_density(d, &mut r);
        let u = random_unitary(d, &mut r);
        let a = entropy_vn(&rho).unwrap();
        let b = entropy_vn(&conj(&u, &rho)).unwrap();
        prop_assert!((a - b).abs() <= 1e-10);
        prop_assert!(a >= -1e-12 && a <= (d as f64).log2() + 1e-12);
    }

    #[test]
    fn relative_entropy_nonnegative(seed in any::<u64>(), d in 2usize..5) {
        let mut r = rng(seed);
        let rho = random_density(d, &mut r);
        let sigma = random_density(d, &mut r);
        let v = relative_entropy(&rho, &sigma).unwrap();
        prop_assert!(v >= -1e-10);
        prop_assert!(v > 1e-8 || max_abs_diff(&rho, &sigma) <= 1e-4);
        prop_assert!(relative_entropy(&rho, &rho).unwrap().abs() <= 1e-9);
    }

    #[test]
    fn partial_trace_inverts_tensor(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let mut r = rng(seed);
        let a = random_density(da, &mut r);
        let b = random_density(db, &mut r);
        let ab = tensor(&a, &b);
        prop_assert!(max_abs_diff(&partial_trace(&ab, &[da, db], &[0]).unwrap(), &a) <= 1e-12);
        prop_assert!(max_abs_diff(&partial_trace(&ab, &[da, db], &[1]).unwrap(), &b) <= 1e-12);
    }

    #[test]
    fn cmi_local_unitary_invariant_and_nonnegative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_density(8, &mut r);
        let dims = [2, 2, 2];
        let base = cmi(&rho, &dims, &[0], &[1], &[2]).unwrap();
        prop_assert!(base >= -1e-10);
        let us: Vec<ComplexMatrix> = (0..3).map(|_| random_unitary(2, &mut r)).collect();
        let u = tensor_all(&[&us[0], &us[1], &us[2]]);
        let rotated = cmi(&conj(&u, &rho), &dims, &[0], &[1], &[2]).unwrap();
        prop_assert!((base - rotated).abs() <= 1e-9);
    }

    #[test]
    fn random_channels_are_valid(seed in any::<u64>(), env in 1usize..4) {
        let ch = random_channel(seed, 2, env);
        prop_assert!(ch.tp_residual() <= 1e-10);
        let spec = eigvalsh(&ch.choi_gamma());
        prop_assert!(spec.iter().all(|&l| l >= -1e-10));
    }

    #[test]
    fn compose_is_associative(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (a, b, c) = (random_channel(s1, 2, 2), random_channel(s2, 2, 3), random_channel(s3, 2, 2));
        let left = QuantumChannel::compose(&QuantumChannel::compose(&c, &b).unwrap(), &a).unwrap();
        let right = QuantumChannel::compose(&c, &QuantumChannel::compose(&b, &a).unwrap()).unwrap();
        prop_assert!(left.choi().distance(&right.choi()) <= 1e-10);
    }

    #[test]
    fn coherent_info_matches_isometry(seed in any::<u64>(), env in 2usize..4) {
        let ch = random_channel(seed, 2, env);
        let rho = random_density(2, &mut rng(seed ^ 0x5a5a));
        let v = ch.isometric_extension();
        let out = conj(&v, &rho);
        let k = ch.kraus().len();
        let hb = entropy(&partial_trace(&out, &[2, k], &[0]).unwrap());
        let he = entropy(&partial_trace(&out, &[2, k], &[1]).unwrap());
        prop_assert!((coherent_information(&ch, &rho).unwrap() - (hb - he)).abs() <= 1e-9);
    }
}
