//! Scratch probe: desk-scale demand curve (temporary).

use rtgs_sim::{run_sweep, PlayConfig};

fn main() {
    let plays: usize = std::env::args().nth(1).map(|s| s.parse().unwrap()).unwrap_or(5);
    let config = PlayConfig::default();
    let kappas = [0.125, 0.5, 2.0, 8.0, 32.0, 128.0, 512.0];
    let started = std::time::Instant::now();
    let sweep = run_sweep(&config, &kappas, plays).unwrap();
    println!("sweep took {:.1?}", started.elapsed());
    println!("kappa   n_conv  mean_liq   min    max   mean_payoff  mean_delay");
    for point in &sweep.points {
        match &point.aggregate {
            Some(a) => println!(
                "{:<7} {:<7} {:<9.1} {:<6} {:<6} {:<12.2} {:.4}",
                point.kappa,
                a.n_converged,
                a.mean_total_liquidity,
                a.min_total_liquidity,
                a.max_total_liquidity,
                a.mean_payoff,
                a.mean_delay
            ),
            None => println!("{:<7} 0 plays converged", point.kappa),
        }
        let days: Vec<usize> = point.plays.iter().map(|p| p.days_run).collect();
        println!("        days_run: {days:?}");
    }
}
