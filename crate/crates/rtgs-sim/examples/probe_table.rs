//! Scratch probe: true expected cost of deviating from a symmetric profile
//! (temporary).

use rtgs_sim::settlement::CostParams;
use rtgs_sim::{run_fixed_profile, Scenario};

fn main() {
    let mut args = std::env::args().skip(1);
    let kappa: f64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(0.125);
    let days: usize = args.next().map(|s| s.parse().unwrap()).unwrap_or(100);
    let n = 15usize;
    let costs = CostParams {
        lambda: 1.0,
        kappa,
        throughput_penalty: 0.0,
        throughput_threshold: 1000.0,
        day_length: 10_000.0,
    };
    let others = [0u64, 2, 4, 6, 8];
    let deviations = [0u64, 2, 4, 6, 8, 12, 16, 24, 40];
    println!("kappa={kappa}: mean cost of bank 0 at level a while others hold o");
    print!("  o\\a |");
    for a in deviations {
        print!(" {a:>8}");
    }
    println!();
    for o in others {
        print!("  {o:>3} |");
        for a in deviations {
            let mut profile = vec![o; n];
            profile[0] = a;
            let stats = run_fixed_profile(&profile, days, &costs, Scenario::Base, 42).unwrap();
            print!(" {:>8.2}", -stats.mean_payoff_per_bank[0]);
        }
        println!();
    }
}
