//! Exhaustive codebook search on one channel block: the DFT codebook, the
//! rate of every beam, and how far a random beam falls short.
//!
//! cargo run --release --example codebook_search

use risbeam::channel::{sample_trajectory, ArrayGeometry, Pulse, ScenarioConfig};
use risbeam::ris::{achievable_rate, build_dft_codebook, cascade, exhaustive_search, LinkBudget};

fn main() -> risbeam::Result<()> {
    let config = ScenarioConfig {
        geometry: ArrayGeometry::upa(1, 8, 8)?,
        num_paths: 1,
        num_subcarriers: 32,
        num_taps: 8,
        sample_period: 1e-8,
        path_loss: 1.0,
        pulse: Pulse::Sinc,
        trajectory_step: 0.0,
    };
    let codebook = build_dft_codebook(&config.geometry, 64)?;
    let budget = LinkBudget::new(1.0, 1.0, config.num_subcarriers)?;
    println!(
        "codebook: {} beams over {} elements, SNR {:.4}",
        codebook.size(),
        codebook.num_elements(),
        budget.snr()
    );

    let seq = sample_trajectory(&config, 1, 11)?;
    let c = cascade(&seq.realizations()[0])?;
    let rates = exhaustive_search(&c, &codebook, &budget)?;
    println!("best beam {} at {:.3} bit/s/Hz", rates.best_index, rates.best_rate);

    let mut order: Vec<usize> = (0..rates.len()).collect();
    order.sort_by(|&a, &b| rates.rates[b].total_cmp(&rates.rates[a]));
    println!("top five:");
    for &n in &order[..5] {
        println!("  beam {n:>2}: {:.3}", rates.rates[n]);
    }
    let mean = rates.rates.iter().sum::<f64>() / rates.len() as f64;
    println!(
        "mean over all beams {mean:.3} ({:.1}% of optimal)",
        100.0 * mean / rates.best_rate
    );

    let again = achievable_rate(&c, codebook.beam(rates.best_index), &budget)?;
    assert_eq!(again, rates.best_rate);
    Ok(())
}
