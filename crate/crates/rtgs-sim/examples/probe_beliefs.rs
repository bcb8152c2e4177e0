//! Scratch: inspect converged beliefs (temporary).
use rtgs_sim::learning::{bin_of_others_average, BeliefState};
use rtgs_sim::rng::{purpose, stream_rng};
use rtgs_sim::settlement::{run_day, sample_instructions, Scenario};
use rtgs_sim::PlayConfig;

fn main() {
    let mut args = std::env::args().skip(1);
    let kappa: f64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(0.125);
    let seed: u64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(11);
    let days: usize = args.next().map(|s| s.parse().unwrap()).unwrap_or(4500);

    let mut config = PlayConfig::default();
    config.costs.kappa = kappa;
    config.seed = seed;
    config.max_days = days;

    let n = config.n_banks;
    let levels = config.grid.len();
    let mut beliefs: Vec<BeliefState> =
        (0..n).map(|_| BeliefState::new(levels, config.exploration_days as u32)).collect();
    let mut last_actions = vec![0u64; n];
    for day in 0..config.max_days {
        let day_tag = day as u64;
        let idx: Vec<usize> = (0..n)
            .map(|bank| {
                let mut rng = stream_rng(config.seed, &[day_tag, purpose::ACTION, bank as u64]);
                beliefs[bank].choose_action(&mut rng)
            })
            .collect();
        let actions: Vec<u64> = idx.iter().map(|&i| config.grid.level(i)).collect();
        let mut inst_rng = stream_rng(config.seed, &[day_tag, purpose::INSTRUCTIONS]);
        let instructions = sample_instructions(&mut inst_rng, n, config.costs.day_length).unwrap();
        let outcome = run_day(&actions, &instructions, &config.costs, Scenario::Base, None).unwrap();
        for bank in 0..n {
            let bin = bin_of_others_average(&actions, bank, &config.grid);
            beliefs[bank].update(idx[bank], bin, outcome.payoff[bank]).unwrap();
        }
        last_actions = actions;
    }
    println!("final actions: {last_actions:?}");
    let b = &beliefs[0];
    println!("bank0: days={} modal_bin={}", b.days_observed(), b.modal_bin());
    println!("p(bin0)={:.3} p(bin1)={:.3} p(bin2)={:.3}", b.probability(0), b.probability(1), b.probability(2));
    println!("  a | E(a)      f(a,b0) [count]   f(a,b1) [count]   f(a,b2) [count]");
    for a in 0..12 {
        let e = b.expected_payoff(a);
        print!("{:>3} | {:>8.2}", a * 2, e);
        for bin in 0..3 {
            match b.estimate(a, bin) {
                Some(f) => print!("  {:>8.2} [{:>4}]", f, b.count(a, bin)),
                None => print!("      none [   0]"),
            }
        }
        println!();
    }
}
