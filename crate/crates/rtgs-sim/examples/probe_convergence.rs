//! Scratch probe: flip statistics of a play (temporary, not part of the
//! deliverable).

use rtgs_sim::{run_play, PlayConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let kappa: f64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(512.0);
    let seed: u64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(1);

    let mut config = PlayConfig::default();
    config.costs.kappa = kappa;
    config.seed = seed;

    let result = run_play(&config).unwrap();
    println!("kappa={kappa} seed={seed} converged={} days={}", result.converged, result.days_run);

    let profiles = &result.profile_trajectory;
    let mut quiet = 0usize;
    let mut longest_quiet = 0usize;
    let mut flip_days = 0usize;
    let mut flips_total = 0usize;
    let start = config.exploration_days.min(profiles.len());
    for day in start.max(1)..profiles.len() {
        let flips = profiles[day]
            .iter()
            .zip(&profiles[day - 1])
            .filter(|(a, b)| a != b)
            .count();
        if flips == 0 {
            quiet += 1;
            longest_quiet = longest_quiet.max(quiet);
        } else {
            quiet = 0;
            flip_days += 1;
            flips_total += flips;
        }
    }
    let informed_days = profiles.len().saturating_sub(start);
    println!(
        "informed days={informed_days} flip-days={flip_days} ({}%) total flips={flips_total} longest quiet streak={longest_quiet}",
        100 * flip_days / informed_days.max(1)
    );
    // Last 500 days only.
    let tail_start = profiles.len().saturating_sub(500);
    let mut tail_flip_days = 0;
    for day in tail_start.max(1)..profiles.len() {
        if profiles[day] != profiles[day - 1] {
            tail_flip_days += 1;
        }
    }
    println!("last 500 days: {tail_flip_days} flip-days");
}
