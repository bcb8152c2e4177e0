//! Scratch: deviation costs under the own-arrival engine (temporary).
use rtgs_sim::settlement::CostParams;
use rtgs_sim::{run_fixed_profile, Scenario};

fn main() {
    let kappa: f64 = std::env::args().nth(1).map(|s| s.parse().unwrap()).unwrap_or(0.125);
    let n = 15usize;
    let days = 200;
    let costs = CostParams { lambda: 1.0, kappa, throughput_penalty: 0.0, throughput_threshold: 1000.0, day_length: 10_000.0 };
    println!("kappa={kappa}: bank0 mean cost at level a, others symmetric at o");
    print!("  o\\a |"); for a in [0u64,2,4,8,12,20,32,48] { print!(" {a:>7}"); } println!();
    for o in [0u64, 2, 4, 8, 16, 32, 48] {
        print!(" {o:>4} |");
        for a in [0u64, 2, 4, 8, 12, 20, 32, 48] {
            let mut profile = vec![o; n];
            profile[0] = a;
            let stats = run_fixed_profile(&profile, days, &costs, Scenario::Base, 42).unwrap();
            print!(" {:>7.2}", -stats.mean_payoff_per_bank[0]);
        }
        println!();
    }
}
