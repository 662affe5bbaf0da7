use std::time::Instant;

use pslab_core::linalg::eigenvalues;
use pslab_core::model::{build_random_perturbed, RandomMatrixSpec};
use pslab_core::scalar::c64;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let reps = 10;
    let mut total = std::time::Duration::ZERO;
    let mut acc = 0.0;
    for s in 0..reps {
        let a = build_random_perturbed::<f64>(&RandomMatrixSpec { n, m: 1, delta: c64(0.01, 0.0), seed: s }).unwrap();
        let t = Instant::now();
        let ev = eigenvalues(&a).unwrap().values;
        total += t.elapsed();
        acc += ev.iter().map(|z| z.norm()).sum::<f64>() / n as f64;
    }
    println!("n={n}: {:?} per solve, mean radius {:.4}", total / reps as u32, acc / reps as f64);
}
