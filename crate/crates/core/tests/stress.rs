//! The acceptance suite over many seeds. Slow; run with `--ignored`.

use factorum::selftest::run_all;

#[test]
#[ignore]
fn many_seeds() {
    let seeds: u64 = std::env::var("STRESS_SEEDS").ok().and_then(|s| s.parse().ok()).unwrap_or(50);
    let mut bad = Vec::new();
    for seed in 1..=seeds {
        for r in run_all(seed) {
            if !r.passed {
                println!("seed {seed}: {}", r.line());
                bad.push((seed, r.id));
            }
        }
    }
    assert!(bad.is_empty(), "{bad:?}");
}
