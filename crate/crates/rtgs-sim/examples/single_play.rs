//! One play at a single delay cost: watch the banks explore, switch to
//! informed decisions, and settle into an equilibrium.
//!
//!     cargo run --release --example single_play [kappa] [seed]

use rtgs_sim::{run_play, PlayConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let kappa: f64 = args.next().map(|s| s.parse().expect("kappa")).unwrap_or(512.0);
    let seed: u64 = args.next().map(|s| s.parse().expect("seed")).unwrap_or(1);

    let mut config = PlayConfig::default();
    config.costs.kappa = kappa;
    config.seed = seed;

    let started = std::time::Instant::now();
    let result = run_play(&config).expect("valid config");
    let elapsed = started.elapsed();

    println!("kappa = {kappa}, seed = {seed}");
    println!("converged: {} after {} days ({elapsed:.2?})", result.converged, result.days_run);
    println!("final profile: {:?}", result.final_profile);
    println!("total liquidity: {}", result.final_profile.iter().sum::<u64>());

    // Total liquidity every 100 days shows the exploration-to-informed jump.
    println!("\n   day  total_liquidity  mean_delay");
    for day in (0..result.days_run).step_by(100).chain([result.days_run - 1]) {
        println!(
            "  {day:>5} {:>12} {:>15.3}",
            result.total_liquidity_trajectory[day], result.mean_delay_trajectory[day]
        );
    }
}
