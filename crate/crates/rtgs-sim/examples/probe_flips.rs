//! Scratch probe: classify why banks change actions day over day
//! (temporary, not part of the deliverable).

use rtgs_sim::learning::{bin_of_others_average, BeliefState};
use rtgs_sim::rng::{purpose, stream_rng};
use rtgs_sim::settlement::{run_day, sample_instructions, Scenario};
use rtgs_sim::PlayConfig;

fn main() {
    let mut args = std::env::args().skip(1);
    let kappa: f64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(0.125);
    let seed: u64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(1);
    let max_days: usize = args.next().map(|s| s.parse().unwrap()).unwrap_or(2000);

    let mut config = PlayConfig::default();
    config.costs.kappa = kappa;
    config.seed = seed;
    config.max_days = max_days;

    let n = config.n_banks;
    let levels = config.grid.len();
    let mut beliefs: Vec<BeliefState> =
        (0..n).map(|_| BeliefState::new(levels, config.exploration_days as u32)).collect();

    let mut prev_actions: Vec<usize> = vec![0; n];
    let mut forced_flips = 0usize;
    let mut argmax_flips = 0usize;
    let mut modal_changes = 0usize;
    let mut prev_modal: Vec<usize> = vec![0; n];
    let mut gap_sum = 0.0;
    let mut gap_count = 0usize;

    for day in 0..config.max_days {
        let day_tag = day as u64;
        let mut action_indices = vec![0usize; n];
        for bank in 0..n {
            // Replicate the choice taxonomy before actually choosing.
            let exploring = beliefs[bank].exploration_remaining() > 0;
            let modal = beliefs[bank].modal_bin();
            let forced = (0..levels).any(|a| beliefs[bank].count(a, modal) == 0);
            let mut rng = stream_rng(config.seed, &[day_tag, purpose::ACTION, bank as u64]);
            let choice = beliefs[bank].choose_action(&mut rng);
            action_indices[bank] = choice;
            if day > config.exploration_days {
                if modal != prev_modal[bank] {
                    modal_changes += 1;
                }
                prev_modal[bank] = modal;
                if !exploring && choice != prev_actions[bank] {
                    if forced {
                        forced_flips += 1;
                    } else {
                        argmax_flips += 1;
                        let e_new = beliefs[bank].expected_payoff(choice);
                        let e_old = beliefs[bank].expected_payoff(prev_actions[bank]);
                        gap_sum += e_new - e_old;
                        gap_count += 1;
                    }
                }
            }
            prev_actions[bank] = choice;
        }
        let actions: Vec<u64> =
            action_indices.iter().map(|&i| config.grid.level(i)).collect();
        let mut inst_rng = stream_rng(config.seed, &[day_tag, purpose::INSTRUCTIONS]);
        let instructions = sample_instructions(&mut inst_rng, n, config.costs.day_length).unwrap();
        let outcome =
            run_day(&actions, &instructions, &config.costs, Scenario::Base, None).unwrap();
        for bank in 0..n {
            let bin = bin_of_others_average(&actions, bank, &config.grid);
            beliefs[bank].update(action_indices[bank], bin, outcome.payoff[bank]).unwrap();
        }
    }
    println!(
        "kappa={kappa}: forced flips={forced_flips}, argmax flips={argmax_flips}, modal-bin changes={modal_changes}, mean argmax gap={:.4}",
        gap_sum / gap_count.max(1) as f64
    );
}
