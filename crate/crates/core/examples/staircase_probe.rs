//! Mean-radius staircase of the random model with spike and monotonicity
//! diagnostics: `cargo run --release --example staircase_probe -- 200 20 independent`.
use pslab_core::experiments::{staircase_run_with, SamplePairing};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let samples: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(10);
    let pairing = match args.get(3).map(String::as_str) {
        Some("common") => SamplePairing::Common,
        _ => SamplePairing::Independent,
    };
    let t = std::time::Instant::now();
    let s = staircase_run_with(n, 0.01, samples, 2024, pairing, None).unwrap();
    println!("elapsed {:?}", t.elapsed());
    for m in 1..n {
        println!("{m} R={:.6} se={:.2e} dR={:+.3e} se_dR={:.2e}", s.r_at(m), s.r_stderr[m - 1], s.dr[m - 1], s.dr_stderr[m - 1]);
    }
    println!("spikes {:?}", s.spikes());
    println!("violations(2se) {:?}", s.monotonicity_violations(2.0));
}
