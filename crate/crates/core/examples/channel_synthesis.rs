//! Builds a wideband geometric channel from explicit rays, then draws a
//! drifting trajectory and reports how much consecutive blocks differ.
//!
//! cargo run --release --example channel_synthesis

use num_complex::Complex64;
use risbeam::channel::{
    array_response, generate_channel, sample_trajectory, ArrayGeometry, Pulse, RayPath, ScenarioConfig,
};

fn main() -> risbeam::Result<()> {
    let config = ScenarioConfig {
        geometry: ArrayGeometry::upa(1, 8, 8)?,
        num_paths: 2,
        num_subcarriers: 32,
        num_taps: 8,
        sample_period: 1e-8,
        path_loss: 1.0,
        pulse: Pulse::Sinc,
        trajectory_step: 0.02,
    };

    let a = array_response(&config.geometry, 0.3, 0.1);
    println!(
        "steering vector: {} entries, |a|^2 = {:.1}",
        a.len(),
        a.iter().map(|v| v.norm_sqr()).sum::<f64>()
    );

    let rays = [
        RayPath {
            azimuth: 0.3,
            elevation: 0.1,
            gain: Complex64::new(0.8, 0.1),
            delay: 1.5e-8,
        },
        RayPath {
            azimuth: 2.1,
            elevation: 0.4,
            gain: Complex64::new(-0.2, 0.3),
            delay: 4.2e-8,
        },
    ];
    let h = generate_channel(&config, &rays, config.num_subcarriers)?;
    println!("channel matrix {:?}", h.dim());
    for k in [0, 8, 16, 24] {
        let power: f64 = h.column(k).iter().map(|v| v.norm_sqr()).sum();
        println!("  subcarrier {k:>2}: ||h_k||^2 = {power:.2}");
    }

    let seq = sample_trajectory(&config, 50, 7)?;
    let blocks = seq.realizations();
    let mean_change: f64 = blocks
        .windows(2)
        .map(|w| {
            let d = (w[1].h_r() - w[0].h_r()).iter().map(|v| v.norm_sqr()).sum::<f64>();
            let n = w[0].h_r().iter().map(|v| v.norm_sqr()).sum::<f64>();
            (d / n).sqrt()
        })
        .sum::<f64>()
        / (blocks.len() - 1) as f64;
    println!(
        "trajectory of {} blocks, mean relative change per block {mean_change:.3}",
        seq.len()
    );
    Ok(())
}
