//! Scratch: converged-outcome distribution at one kappa (temporary).
use rayon::prelude::*;
use rtgs_sim::rng::derive_seed;
use rtgs_sim::{run_play, PlayConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let kappa: f64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(0.5);
    let plays: usize = args.next().map(|s| s.parse().unwrap()).unwrap_or(10);
    let results: Vec<(u64, bool, usize, u64)> = (0..plays as u64)
        .into_par_iter()
        .map(|j| {
            let mut config = PlayConfig::default();
            config.costs.kappa = kappa;
            config.seed = derive_seed(1, &[0, j]);
            let r = run_play(&config).unwrap();
            (j, r.converged, r.days_run, r.final_profile.iter().sum::<u64>())
        })
        .collect();
    let mut totals: Vec<u64> = Vec::new();
    for (j, conv, days, total) in &results {
        println!("play {j}: converged={conv} days={days} total={total}");
        if *conv { totals.push(*total); }
    }
    let mean = totals.iter().sum::<u64>() as f64 / totals.len().max(1) as f64;
    println!("kappa={kappa}: {}/{plays} converged, mean total {mean:.1}", totals.len());
}
