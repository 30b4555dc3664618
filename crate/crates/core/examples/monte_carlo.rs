//! Sample matrices, count real eigenvalues and compare with the exact law.

use eginoe::genmatrix::build;
use eginoe::montecarlo::{moment_summary, run, SamplerConfig};
use eginoe::probabilities::distribution;
use eginoe::spectrum::{eigendecompose, trace_power};

fn main() -> eginoe::Result<()> {
    let (big_n, tau) = (8, 0.5);
    let mut cfg = SamplerConfig::new(big_n, tau, 50_000, 42);
    cfg.workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let counts = run(&cfg)?;

    let s = eigendecompose(&build(big_n / 2, tau)?)?;
    let d = distribution(&s)?;
    println!("N = {big_n}, tau = {tau}, {} samples", counts.samples);
    for k in 0..=big_n / 2 {
        let p = d.prob(k);
        let se = (p * (1.0 - p) / counts.samples as f64).sqrt();
        let f = counts.frequency(2 * k);
        println!("  k = {}: empirical {f:.5}  exact {p:.5}  z = {:+.2}", 2 * k, (f - p) / se);
    }

    let t1 = trace_power(&s, 1);
    let m = moment_summary(&counts, 2.0 * t1, 4.0 * (t1 - trace_power(&s, 2)));
    println!(
        "mean {:.4} (exact {:.4}), variance {:.4} (exact {:.4})",
        m.empirical_mean, m.exact_mean, m.empirical_variance, m.exact_variance
    );
    println!("{}", serde_json::to_string(&counts).expect("histogram serializes"));
    Ok(())
}
