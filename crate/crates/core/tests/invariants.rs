use oja_regret::experts::{run_mw, LossVector, MwConfig, MwState};
use oja_regret::linalg::{
    eigendecompose, random_symmetric, random_unit_vector, spectral_norm, CommutingFamily,
    SymmetricMatrix,
};
use oja_regret::oja::{oja_step, psi_trace, run_oja, OjaConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn family_members_commute(seed in any::<u64>(), n in 1usize..8, len in 1usize..6) {
        let fam = CommutingFamily::<f64>::random(n, len, &mut rng(seed)).unwrap();
        let mats = fam.materialize_all().unwrap();
        for a in &mats {
            prop_assert!(spectral_norm(a) <= 1.0 + 1e-10);
            for b in &mats {
                prop_assert!(a.commutator_norm(b).unwrap() <= 1e-12);
            }
        }
    }

    #[test]
    fn eigendecomposition_recovers_family_spectrum(seed in any::<u64>(), n in 1usize..10) {
        let fam = CommutingFamily::<f64>::random(n, 1, &mut rng(seed)).unwrap();
        let eig = eigendecompose(&fam.materialize(0).unwrap()).unwrap();
        let mut expected = fam.eigenvalues(0).to_vec();
        expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (got, want) in eig.values.iter().zip(&expected) {
            prop_assert!((got - want).abs() <= 1e-12);
        }
        prop_assert!(eig.basis.orthonormality_defect() <= 1e-12);
    }

    #[test]
    fn spectral_norm_is_absolutely_homogeneous(seed in any::<u64>(), n in 1usize..8, c in -4.0f64..4.0) {
        let a = random_symmetric::<f64, _>(n, &mut rng(seed)).unwrap();
        let lhs = spectral_norm(&a.scaled(c));
        let rhs = c.abs() * spectral_norm(&a);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
    }

    #[test]
    fn oja_step_keeps_unit_norm_and_tracks_magnitude(seed in any::<u64>(), n in 1usize..8, mu in 0.0f64..0.99) {
        let mut r = rng(seed);
        let fam = CommutingFamily::<f64>::random(n, 1, &mut r).unwrap();
        let a = fam.materialize(0).unwrap();
        let s0 = oja_regret::oja::OjaState::initial(random_unit_vector(n, &mut r).unwrap());
        let cfg = OjaConfig::new(mu).unwrap();
        let s1 = oja_step(&s0, &a, &cfg).unwrap();
        let z = s0.direction().as_slice();
        let az = a.matvec(z).unwrap();
        let y: Vec<f64> = z.iter().zip(&az).map(|(zi, ai)| zi + mu * ai).collect();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((s1.log_magnitude() - norm.ln()).abs() <= 1e-12);
        let unit = s1.direction().as_slice().iter().map(|v| v * v).sum::<f64>();
        prop_assert!((unit - 1.0).abs() <= 1e-12);
        prop_assert_eq!(s1.round(), 1);
    }

    #[test]
    fn overlaps_stay_on_the_simplex(seed in any::<u64>(), n in 1usize..8, len in 1usize..40, mu in 0.0f64..0.9) {
        let mut r = rng(seed);
        let fam = CommutingFamily::<f64>::random(n, len, &mut r).unwrap();
        let states = run_oja(&fam.materialize_all().unwrap(), &OjaConfig::new(mu).unwrap(),
            random_unit_vector(n, &mut r).unwrap()).unwrap();
        for row in psi_trace(&states, fam.basis()).unwrap().rows {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
            prop_assert!(row.iter().all(|&p| p >= 0.0));
        }
    }

    #[test]
    fn mw_weights_stay_positive(
        weights in prop::collection::vec(1e-3f64..1e3, 1..6),
        eta in 0.0f64..=0.5,
        seed in any::<u64>(),
        len in 0usize..60,
    ) {
        use rand::Rng;
        let n = weights.len();
        let mut r = rng(seed);
        let losses: Vec<_> = (0..len)
            .map(|_| LossVector::new((0..n).map(|_| r.random_range(-1.0..=1.0)).collect()).unwrap())
            .collect();
        let cfg = MwConfig::new(eta, n).unwrap();
        let traj = run_mw(MwState::new(weights).unwrap(), &losses, &cfg).unwrap();
        for (state, _) in &traj {
            prop_assert!(state.weights().iter().all(|&w| w > 0.0));
        }
    }
}

#[test]
fn identity_plus_matches_explicit_sum() {
    let a = random_symmetric::<f64, _>(5, &mut rng(1)).unwrap();
    let b = SymmetricMatrix::identity(5).add(&a.scaled(0.3)).unwrap();
    assert_eq!(a.identity_plus(0.3), b);
}

#[test]
fn f32_family_round_trip() {
    let fam = CommutingFamily::<f32>::random(4, 3, &mut rng(2)).unwrap();
    let a = fam.materialize(1).unwrap();
    let v = fam.basis().column(0);
    assert!(a.eigen_residual(v).unwrap() < 1e-5);
}
