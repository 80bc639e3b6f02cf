mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use aor_core::belief::{
    batch_log_likelihood, BeliefVector, DirichletTable, EncodedState, EncoderKind,
};
use aor_core::env::{gen_synthetic, ActionSet, Boundary, EpisodeState, SyntheticConfig};
use aor_core::net::CostTerms;

use common::*;

fn simplex(len: usize) -> impl Strategy<Value = BeliefVector> {
    prop::collection::vec(0.01f64..10.0, len).prop_map(|w| BeliefVector::from_weights(w).unwrap())
}

fn assert_simplex(p: &[f64]) {
    let sum: f64 = p.iter().sum();
    assert!((sum - 1.0).abs() <= 1e-9, "sum {sum}");
    assert!(p.iter().all(|v| *v >= 0.0 && v.is_finite()), "{p:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn naive_bayes_is_order_independent(
        beliefs in prop::collection::vec(simplex(4), 1..8),
        rotate in 0usize..8,
    ) {
        let mut a = EncodedState::new(EncoderKind::NaiveBayes, 4, 3);
        for b in &beliefs {
            a.nb_fuse(b).unwrap();
        }
        let mut shuffled = beliefs.clone();
        shuffled.rotate_left(rotate % beliefs.len());
        shuffled.reverse();
        let mut b = EncodedState::new(EncoderKind::NaiveBayes, 4, 3);
        for v in &shuffled {
            b.nb_fuse(v).unwrap();
        }
        for (x, y) in a.posterior_block().iter().zip(b.posterior_block()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn dirichlet_fusion_is_order_independent(
        seed in any::<u64>(),
        moves in prop::collection::vec((simplex(3), 0usize..4), 1..6),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut table = DirichletTable::uniform(3, 4).unwrap();
        for o in 0..3 {
            for a in 0..4 {
                let alpha: Vec<f64> = normal_vec(3, 1.0, &mut rng).iter().map(|z| z.exp()).collect();
                table.set_alpha(o, a, &alpha).unwrap();
            }
        }
        let fuse = |order: &[(BeliefVector, usize)]| {
            let mut s = EncodedState::new(EncoderKind::Dirichlet, 3, 4);
            for (b, a) in order {
                s.dirichlet_fuse(b, *a, &table).unwrap();
            }
            s.posterior_block()
        };
        let forward = fuse(&moves);
        let mut reversed = moves.clone();
        reversed.reverse();
        for (x, y) in forward.iter().zip(fuse(&reversed)) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn fused_states_stay_on_the_simplex(
        kind in prop_oneof![Just(EncoderKind::NaiveBayes), Just(EncoderKind::Dirichlet)],
        moves in prop::collection::vec((simplex(5), 0usize..3), 0..10),
        first in simplex(5),
    ) {
        let table = DirichletTable::uniform(5, 3).unwrap();
        let mut s = EncodedState::new(kind, 5, 3);
        s.fuse_initial(&first, Some(&table)).unwrap();
        for (b, a) in &moves {
            s.fuse(b, *a, Some(&table)).unwrap();
        }
        assert_simplex(s.label_posterior().as_slice());
        let block = s.posterior_block();
        prop_assert_eq!(block.len(), 15);
        match kind {
            EncoderKind::NaiveBayes => {
                assert_simplex(&block[..5]);
                prop_assert!(block[5..].iter().all(|v| *v == 0.0));
            }
            EncoderKind::Dirichlet => {
                for col in block.chunks(5) {
                    assert_simplex(col);
                }
            }
        }
    }

    #[test]
    fn fit_step_does_not_lower_the_likelihood(
        seed in any::<u64>(),
        n in 1usize..10,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let truth: Vec<f64> = (0..4).map(|_| rng.random_range(0.5..5.0)).collect();
        let samples: Vec<BeliefVector> = (0..n).map(|_| draw_dirichlet(&truth, &mut rng)).collect();
        let start: Vec<f64> = normal_vec(4, 0.5, &mut rng).iter().map(|z| z.exp()).collect();
        let mut table = DirichletTable::uniform(4, 1).unwrap();
        table.set_alpha(0, 0, &start).unwrap();
        let before = batch_log_likelihood(&samples, table.alpha(0, 0)).unwrap();
        table.fit_step(0, 0, &samples, 1e-3).unwrap();
        let after = batch_log_likelihood(&samples, table.alpha(0, 0)).unwrap();
        prop_assert!(after >= before - 1e-9 * before.abs().max(1.0), "{before} -> {after}");
    }

    #[test]
    fn softmax_is_shift_invariant(
        logits in prop::collection::vec(-30.0f64..30.0, 2..10),
        shift in -500.0f64..500.0,
    ) {
        let a = BeliefVector::softmax(&logits);
        let shifted: Vec<f64> = logits.iter().map(|l| l + shift).collect();
        let b = BeliefVector::softmax(&shifted);
        assert_simplex(a.as_slice());
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn classifier_output_is_a_distribution(seed in any::<u64>(), scale in 0.1f64..100.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec(&mut rng);
        let params = random_params(&spec, &mut rng);
        let x = normal_vec(spec.input_dim, scale, &mut rng);
        let (belief, features) = params.classify(&x).unwrap();
        assert_simplex(belief.as_slice());
        prop_assert_eq!(features.len(), spec.feature_dim);
        prop_assert!(features.iter().all(|f| *f >= 0.0));
    }

    #[test]
    fn steps_stay_on_recorded_poses(
        seed in any::<u64>(),
        wrap in any::<bool>(),
        actions_taken in prop::collection::vec(0usize..10, 1..12),
    ) {
        let config = SyntheticConfig {
            num_classes: 2,
            num_bins: 64,
            feature_dim: 2,
            tracks_per_object: 1,
            ambiguity: Vec::new(),
            ..SyntheticConfig::default()
        };
        let full = gen_synthetic(&config, seed).unwrap();
        // Drop every third pose so snapping is exercised.
        let sparse = aor_core::env::TrackDataset::new(
            2,
            64,
            2,
            full.tracks()
                .iter()
                .map(|t| {
                    let mut t = t.clone();
                    t.poses.retain(|b, _| b % 3 != 1);
                    t
                })
                .collect(),
        )
        .unwrap();
        let boundary = if wrap { Boundary::Wrap } else { Boundary::Clamp };
        let actions = ActionSet::rotations(64, boundary).unwrap();
        let (mut env, _) = EpisodeState::reset(&sparse, 1, 0).unwrap();
        let mut seen = BTreeSet::from([0]);
        for a in actions_taken {
            let expect = env.resolve(a, &actions, &sparse);
            let obs = env.step(a, &actions, &sparse);
            prop_assert_eq!(obs.len(), 2);
            prop_assert_eq!(env.pose_bin, expect);
            prop_assert!(env.pose_bin < 64 && env.pose_bin % 3 != 1);
            seen.insert(env.pose_bin);
        }
        prop_assert_eq!(&env.visited, &seen);
    }
}

#[test]
fn toy_network_gradient_matches_finite_differences() {
    // 4 classes, 2 actions, both latest-block layouts.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for latest in [
        aor_core::net::LatestBlock::Features,
        aor_core::net::LatestBlock::Belief,
    ] {
        let spec = aor_core::net::NetworkSpec {
            input_dim: 3,
            hidden_dims: vec![5],
            feature_dim: 4,
            num_classes: 4,
            num_actions: 2,
            q_hidden_dims: vec![3],
            latest_block: latest,
            dropout: 0.0,
        };
        let params = random_params(&spec, &mut rng);
        let owned = random_batch(&spec, 3, &mut rng);
        let batch: Vec<_> = owned.iter().map(OwnedSample::view).collect();
        let (grads, _) = params
            .gradients::<ChaCha8Rng>(&batch, CostTerms::TOTAL, None)
            .unwrap();
        let fd = fd_network_grad(&params, &batch, CostTerms::TOTAL, 1e-6);
        let err = max_rel_err(&grads.flat(), &fd);
        assert!(err < 1e-4, "{latest:?}: relative error {err}");
    }
}
