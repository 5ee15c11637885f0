//! Library results checked against independently written references and
//! statistical bounds.

mod common;

use std::f64::consts::TAU;

use common::*;
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;
use risbeam::channel::{
    array_response, generate_channel, sample_trajectory, ArrayGeometry, ChannelRealization, Pulse, RayPath,
    ScenarioConfig,
};
use risbeam::dataset::{build_history_samples, encode_features, normalize_targets};
use risbeam::harness::measure_temporal_correlation;
use risbeam::mlp::{init_model, loss, predict_beam, train, Examples, MlpArchitecture, TrainConfig};
use risbeam::ris::{
    build_dft_codebook, cascade, exhaustive_search, first_argmax, sampled_channel, select_active_elements, Codebook,
    LinkBudget, RateVector,
};
use risbeam::seed;

fn scenario(dims: [usize; 3], paths: usize, k: usize, step: f64) -> ScenarioConfig {
    ScenarioConfig {
        geometry: ArrayGeometry::new(dims, 0.5).unwrap(),
        num_paths: paths,
        num_subcarriers: k,
        num_taps: 4,
        sample_period: 1e-8,
        path_loss: 1.0,
        pulse: Pulse::Sinc,
        trajectory_step: step,
    }
}

#[test]
fn array_response_matches_phase_formula() {
    let mut rng = seed::rng(10);
    for _ in 0..25 {
        let g = ArrayGeometry::new(
            [rng.random_range(1..4), rng.random_range(1..5), rng.random_range(1..5)],
            rng.random_range(0.2..1.0),
        )
        .unwrap();
        let (az, el) = (rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
        let got = array_response(&g, az, el);
        let want = steering(&g, az, el);
        assert!(max_rel_err(got.iter(), want.iter()) < 1e-12);
    }
}

#[test]
fn two_ray_channel_matches_double_sum() {
    let cfg = scenario([1, 3, 4], 2, 8, 0.0);
    let mut rng = seed::rng(0);
    let rays: Vec<RayPath> = (0..2)
        .map(|_| RayPath {
            azimuth: rng.random_range(0.0..TAU),
            elevation: rng.random_range(0.0..TAU),
            gain: random_complex(&mut rng),
            delay: rng.random_range(0.0..cfg.tap_window()),
        })
        .collect();
    let h = generate_channel(&cfg, &rays, 8).unwrap();
    let want = channel_double_sum(&cfg, &rays, 8);
    assert!(max_rel_err(h.iter(), want.iter()) < 1e-12);
}

#[test]
fn cascade_matches_entrywise_loop() {
    let mut rng = seed::rng(11);
    let h_t = random_matrix(&mut rng, 4, 3);
    let h_r = random_matrix(&mut rng, 4, 3);
    let c = cascade(&ChannelRealization::new(h_t.clone(), h_r.clone()).unwrap()).unwrap();
    for m in 0..4 {
        for k in 0..3 {
            assert!((c[(m, k)] - h_t[(m, k)] * h_r[(m, k)]).norm() <= 1e-15);
        }
    }
}

#[test]
fn small_exhaustive_search_matches_brute_force() {
    let mut rng = seed::rng(0);
    let c = random_matrix(&mut rng, 4, 2);
    let beams: Vec<Vec<Complex64>> = (0..8).map(|_| random_phases(&mut rng, 4)).collect();
    let codebook = Codebook::new(Array2::from_shape_fn((4, 8), |(m, n)| beams[n][m])).unwrap();
    let budget = LinkBudget::from_snr(2.5, 2).unwrap();
    let got = exhaustive_search(&c, &codebook, &budget).unwrap();
    let (best, rates) = search(&c, &beams, 2.5);
    assert_eq!(got.best_index, best);
    for (a, b) in got.rates.iter().zip(&rates) {
        assert!((a - b).abs() <= 1e-12 * b.abs());
    }
}

#[test]
fn planar_codebook_gram_is_scaled_identity() {
    let cb = build_dft_codebook(&ArrayGeometry::upa(1, 4, 4).unwrap(), 16).unwrap();
    let v = cb.vectors();
    for a in 0..16 {
        for b in 0..16 {
            let g: Complex64 = (0..16).map(|m| v[(m, a)].conj() * v[(m, b)]).sum();
            let want = if a == b { 16.0 } else { 0.0 };
            assert!((g - Complex64::new(want, 0.0)).norm() < 1e-10, "({a},{b}) = {g}");
        }
    }
}

#[test]
fn active_element_frequencies_within_binomial_bound() {
    let (m, m_bar, trials) = (1024usize, 8usize, 1000usize);
    let mut counts = vec![0usize; m];
    for s in 0..trials as u64 {
        for &i in select_active_elements(m, m_bar, s).unwrap().indices() {
            counts[i] += 1;
        }
    }
    let p = m_bar as f64 / m as f64;
    let mean = trials as f64 * p;
    let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
    // Each index is a Binomial(1000, 8/1024) count. With 1024 of them a few
    // 3σ excursions are expected by chance, so bound the number rather than
    // demand none, and cap any single deviation at 5σ.
    let beyond_3 = counts
        .iter()
        .filter(|&&c| (c as f64 - mean).abs() > 3.0 * sigma)
        .count();
    let worst = counts
        .iter()
        .map(|&c| (c as f64 - mean).abs() / sigma)
        .fold(0.0, f64::max);
    assert!(beyond_3 <= 10, "{beyond_3} indices outside 3σ");
    assert!(worst < 5.0, "worst deviation {worst:.2}σ");
    assert_eq!(counts.iter().sum::<usize>(), trials * m_bar);
}

#[test]
fn sampled_channel_matches_gather_then_multiply() {
    let mut rng = seed::rng(12);
    let (h_t, h_r) = (random_matrix(&mut rng, 16, 5), random_matrix(&mut rng, 16, 5));
    let realization = ChannelRealization::new(h_t.clone(), h_r.clone()).unwrap();
    let sel = select_active_elements(16, 6, 99).unwrap();
    let got = sampled_channel(&sel, &realization).unwrap();
    for (row, &m) in sel.indices().iter().enumerate() {
        for k in 0..5 {
            let want = h_t[(m, k)] * h_r[(m, k)];
            assert!((got.h_bar[(row, k)] - want).norm() <= 1e-15);
        }
    }
}

#[test]
fn normalized_targets_keep_the_argmax() {
    let mut rng = seed::rng(13);
    for _ in 0..100 {
        let len = rng.random_range(1..50);
        let rates: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..20.0)).collect();
        let rv = RateVector::from_rates(rates).unwrap();
        let t = normalize_targets(&rv);
        let (idx, top) = first_argmax(t.as_slice().unwrap()).unwrap();
        assert_eq!(idx, rv.best_index);
        assert!((top - 1.0).abs() < 1e-15);
        assert!(t.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }
}

#[test]
fn loss_matches_straight_line_recomputation() {
    let arch = MlpArchitecture::new(vec![5, 7, 6, 4], 0.0).unwrap();
    let model = init_model(&arch, 5).unwrap();
    let mut rng = seed::rng(14);
    let pred = Array1::from_shape_fn(4, |_| rng.random_range(-1.0..1.0));
    let target = Array1::from_shape_fn(4, |_| rng.random_range(-1.0..1.0));
    let l2 = 0.03;
    let mse: f64 = pred
        .iter()
        .zip(&target)
        .map(|(p, t): (&f64, &f64)| (p - t) * (p - t))
        .sum::<f64>()
        / 4.0;
    let mut sq = 0.0;
    for w in model.weights() {
        for v in w.iter() {
            sq += v * v;
        }
    }
    let want = mse + l2 * sq / 2.0;
    let got = loss(pred.view(), target.view(), &model, l2).unwrap();
    assert!((got - want).abs() <= 1e-14 * want.abs());
}

#[test]
fn memorized_samples_predict_oracle_beams() {
    let cfg = scenario([1, 4, 4], 1, 8, 0.4);
    let seq = sample_trajectory(&cfg, 10, 21).unwrap();
    let codebook = build_dft_codebook(&cfg.geometry, 16).unwrap();
    let budget = LinkBudget::new(1.0, 1.0, 8).unwrap();
    let sel = select_active_elements(16, 4, 3).unwrap();
    let mut feats = Vec::new();
    let mut rates = Vec::new();
    for r in seq.realizations() {
        feats.push(encode_features(&sampled_channel(&sel, r).unwrap(), 8).unwrap());
        rates.push(exhaustive_search(&cascade(r).unwrap(), &codebook, &budget).unwrap());
    }
    let samples = build_history_samples(&feats, &rates, 1).unwrap();
    assert_eq!(samples.len(), 10);
    let arch = MlpArchitecture::new(vec![64, 64, 64, 16], 0.0).unwrap();
    let tc = TrainConfig {
        max_epochs: 400,
        batch_size: 10,
        l2_coefficient: 0.0,
        initial_lr: 0.05,
        lr_drop_period_epochs: 1000,
        lr_drop_factor: 0.5,
        momentum: 0.9,
        seed: 4,
    };
    let (model, report) = train(
        init_model(&arch, 8).unwrap(),
        &Examples::from_samples(&samples).unwrap(),
        None,
        &tc,
    )
    .unwrap();
    assert!(
        *report.train_loss.last().unwrap() < 1e-4,
        "final loss {:?}",
        report.train_loss.last()
    );
    let hits = samples
        .iter()
        .filter(|s| predict_beam(&model, s.input(), &codebook).unwrap().0 == s.best_index)
        .count();
    assert!(hits >= 9, "{hits}/10 memorized");
}

#[test]
fn slow_drift_correlates_more_than_fast_drift() {
    let codebook = build_dft_codebook(&ArrayGeometry::upa(1, 8, 8).unwrap(), 64).unwrap();
    let budget = LinkBudget::new(1.0, 1.0, 16).unwrap();
    for s in 0..5 {
        let corr = |step: f64| {
            let seq = sample_trajectory(&scenario([1, 8, 8], 1, 16, step), 100, s).unwrap();
            measure_temporal_correlation(&seq, &codebook, &budget, 1).unwrap().value
        };
        let (slow, fast) = (corr(0.01), corr(1.0));
        assert!(slow > fast, "seed {s}: {slow} vs {fast}");
    }
}

#[test]
fn scaled_targets_leave_decisions_unchanged() {
    let mut rng = seed::rng(15);
    let w = Array2::from_shape_fn((4, 3), |_| rng.random_range(-1.0..1.0));
    let x = Array2::from_shape_fn((30, 4), |_| rng.random_range(-1.0..1.0));
    let y = x.dot(&w);
    let arch = MlpArchitecture::new(vec![4, 32, 32, 3], 0.0).unwrap();
    let tc = TrainConfig {
        max_epochs: 400,
        batch_size: 10,
        l2_coefficient: 0.0,
        initial_lr: 0.01,
        lr_drop_period_epochs: 150,
        lr_drop_factor: 0.5,
        momentum: 0.9,
        seed: 2,
    };
    let fit = |targets: Array2<f64>| {
        let ex = Examples::new(x.clone(), targets).unwrap();
        train(init_model(&arch, 6).unwrap(), &ex, None, &tc).unwrap().0
    };
    let base = fit(y.clone());
    let scaled = fit(y.mapv(|v| 2.5 * v));
    let decisions = |m: &risbeam::mlp::MlpModel| -> Vec<usize> {
        let p = m.predict_batch(x.view()).unwrap();
        p.rows()
            .into_iter()
            .map(|r| first_argmax(r.as_slice().unwrap()).unwrap().0)
            .collect()
    };
    let truth: Vec<usize> = y
        .rows()
        .into_iter()
        .map(|r| first_argmax(r.as_slice().unwrap()).unwrap().0)
        .collect();
    assert_eq!(decisions(&base), truth);
    assert_eq!(decisions(&scaled), truth);
}
