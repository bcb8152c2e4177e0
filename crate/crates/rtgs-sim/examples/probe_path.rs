//! Scratch probe: day-by-day path around the exploration/informed handover
//! (temporary).

use rtgs_sim::learning::{bin_of_others_average, BeliefState};
use rtgs_sim::rng::{purpose, stream_rng};
use rtgs_sim::settlement::{run_day, sample_instructions, Scenario};
use rtgs_sim::PlayConfig;

fn main() {
    let mut args = std::env::args().skip(1);
    let kappa: f64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(0.125);
    let seed: u64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(1);
    let until: usize = args.next().map(|s| s.parse().unwrap()).unwrap_or(700);

    let mut config = PlayConfig::default();
    config.costs.kappa = kappa;
    config.seed = seed;
    config.max_days = until;

    let n = config.n_banks;
    let levels = config.grid.len();
    let mut beliefs: Vec<BeliefState> =
        (0..n).map(|_| BeliefState::new(levels, config.exploration_days as u32)).collect();

    for day in 0..config.max_days {
        let day_tag = day as u64;
        let mut action_indices = vec![0usize; n];
        let mut forced_count = 0;
        for bank in 0..n {
            let before = beliefs[bank].clone();
            let mut rng = stream_rng(config.seed, &[day_tag, purpose::ACTION, bank as u64]);
            let choice = beliefs[bank].choose_action(&mut rng);
            // Forced exploration mutated the attempt set without touching
            // the exploration counter.
            if before.exploration_remaining() == beliefs[bank].exploration_remaining()
                && before != beliefs[bank]
            {
                forced_count += 1;
            }
            action_indices[bank] = choice;
        }
        let actions: Vec<u64> = action_indices.iter().map(|&i| config.grid.level(i)).collect();
        let mut inst_rng = stream_rng(config.seed, &[day_tag, purpose::INSTRUCTIONS]);
        let instructions = sample_instructions(&mut inst_rng, n, config.costs.day_length).unwrap();
        let outcome =
            run_day(&actions, &instructions, &config.costs, Scenario::Base, None).unwrap();
        for bank in 0..n {
            let bin = bin_of_others_average(&actions, bank, &config.grid);
            beliefs[bank].update(action_indices[bank], bin, outcome.payoff[bank]).unwrap();
        }
        if day >= config.exploration_days.saturating_sub(2) {
            let total: u64 = actions.iter().sum();
            let zeros = actions.iter().filter(|&&a| a == 0).count();
            let mean_cost = -outcome.payoff.iter().sum::<f64>() / n as f64;
            let e0 = beliefs[0].expected_payoff(0);
            let e1 = beliefs[0].expected_payoff(1);
            let e2 = beliefs[0].expected_payoff(2);
            println!(
                "day {day:>4} total {total:>4} zeros {zeros:>2} forced {forced_count:>2} mean_cost {mean_cost:>7.2} | bank0 E(0)={e0:.2} E(2)={e1:.2} E(4)={e2:.2}"
            );
        }
    }
}
