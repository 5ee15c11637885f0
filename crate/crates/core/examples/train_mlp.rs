//! Trains the beam predictor for one master seed, prints the loss curve,
//! round-trips the checkpoint and predicts a beam for a held-out sample.
//!
//! cargo run --release --example train_mlp

use risbeam::harness::{prepare_data, run_arm, ExperimentConfig};
use risbeam::mlp::{decode_model, encode_model, predict_beam};

fn main() -> risbeam::Result<()> {
    let config = ExperimentConfig::desk_scale();
    let seed = 2;
    let data = prepare_data(&config, seed)?;
    let arm = run_arm(&config, &data, config.t_s, 400, seed)?;

    println!("epoch      lr   train_loss   test_loss");
    let r = &arm.report;
    for e in (0..r.epochs()).step_by(10).chain([r.epochs() - 1]) {
        println!(
            "{e:>5}  {:.5}  {:.6}  {:.6}",
            r.learning_rate[e], r.train_loss[e], r.test_loss[e]
        );
    }
    println!(
        "ratio {:.4}, top-1 {:.3} on {} test samples",
        arm.summary.ratio,
        arm.summary.top1_accuracy,
        arm.test.len()
    );

    let bytes = encode_model(&arm.model);
    let model = decode_model(&bytes)?;
    println!(
        "checkpoint: {} bytes, {} parameters",
        bytes.len(),
        model.num_parameters()
    );
    let sample = &arm.test[0];
    let (beam, psi) = predict_beam(&model, sample.input(), &data.codebook)?;
    println!(
        "sample {:?}: predicted beam {beam} (oracle {}), |psi| = {}",
        sample.origin,
        sample.best_index,
        psi.len()
    );
    Ok(())
}
