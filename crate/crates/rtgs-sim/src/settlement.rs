//! One continuous-time settlement day.
//!
//! Payment instructions arrive over `[0, T]` as a Poisson process with rate 1
//! per time unit; each instructs its sender to pay one unit of value to a
//! receiver. Banks act at their own instruction arrivals: the new instruction
//! joins the bank's FIFO queue, and the queue then drains from the front for
//! as long as the bank holds liquidity. Settling transfers one unit to the
//! receiver, who can spend it from its next arrival onward — so a credit
//! released by one settlement frees the receiver's queue a little later,
//! and chains of such releases propagate payments through the system.
//! Liquidity therefore recycles at a finite rate (roughly one hop per
//! inter-arrival time), which is what makes thinly funded systems congest:
//! a handful of circulating units cannot keep pace with the payment flow.
//!
//! Costs per bank and day:
//!
//! - liquidity: `lambda * a_i` for the `a_i` units committed at day start,
//! - delay: `kappa * sum((settle - arrival) / T)` over the bank's sent
//!   payments, with anything still queued at `T` charged as if settled at `T`
//!   (balances do not move for those),
//! - throughput penalty (throughput scenario only): a flat charge per sent
//!   payment whose delay exceeds the threshold.
//!
//! The stage payoff is the negated cost total. The incident scenario gates
//! one bank from sending — but not receiving — before `T/2`; its queue is
//! then processed normally.
//!
//! `run_day` consumes no randomness: identical inputs produce a bit-identical
//! [`DayOutcome`].

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Scenario selector for a settlement day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// Liquidity and delay costs only.
    Base,
    /// Base costs plus a flat penalty per payment settled later than the
    /// throughput threshold.
    Throughput,
    /// One randomly chosen bank cannot send payments before `T/2`.
    Incident,
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Scenario::Base => "base",
            Scenario::Throughput => "throughput",
            Scenario::Incident => "incident",
        };
        f.write_str(s)
    }
}

/// One unit-value payment order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaymentInstruction {
    /// Paying bank, `0..n_banks`.
    pub sender: usize,
    /// Receiving bank, `0..n_banks`; never equal to `sender`.
    pub receiver: usize,
    /// Arrival time in day units, `0 <= arrival_time <= T`.
    pub arrival_time: f64,
}

/// Cost model for a settlement day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    /// Liquidity cost per committed unit per day; must be positive.
    pub lambda: f64,
    /// Daily delay cost rate; a payment delayed the whole day costs `kappa`.
    pub kappa: f64,
    /// Flat charge per late payment under the throughput scenario.
    pub throughput_penalty: f64,
    /// Delay above which a payment counts as late, in day units.
    pub throughput_threshold: f64,
    /// Day length `T`; also the expected number of instructions per day.
    pub day_length: f64,
}

impl CostParams {
    /// Checks the cost fields against their documented domains. The
    /// throughput threshold is only constrained when the scenario uses it.
    pub fn validate(&self, scenario: Scenario) -> Result<()> {
        let finite = [
            ("lambda", self.lambda),
            ("kappa", self.kappa),
            ("throughput_penalty", self.throughput_penalty),
            ("throughput_threshold", self.throughput_threshold),
            ("day_length", self.day_length),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(SimError::InvalidConfig(format!("{name}: must be finite, got {v}")));
            }
        }
        if self.lambda <= 0.0 {
            return Err(SimError::InvalidConfig(format!(
                "lambda: must be > 0, got {}",
                self.lambda
            )));
        }
        if self.kappa < 0.0 {
            return Err(SimError::InvalidConfig(format!("kappa: must be >= 0, got {}", self.kappa)));
        }
        if self.day_length <= 0.0 {
            return Err(SimError::InvalidConfig(format!(
                "day_length: must be > 0, got {}",
                self.day_length
            )));
        }
        if self.throughput_penalty < 0.0 {
            return Err(SimError::InvalidConfig(format!(
                "throughput_penalty: must be >= 0, got {}",
                self.throughput_penalty
            )));
        }
        if scenario == Scenario::Throughput
            && !(self.throughput_threshold > 0.0 && self.throughput_threshold <= self.day_length)
        {
            return Err(SimError::InvalidConfig(format!(
                "throughput_threshold: must lie in (0, day_length], got {}",
                self.throughput_threshold
            )));
        }
        Ok(())
    }
}

/// Per-bank realized costs and settlement statistics for one day.
///
/// Invariants (checked by the test suite):
/// `payoff[i] == -(liquidity_cost[i] + delay_cost[i] + penalty_cost[i])`
/// exactly, balances are conserved, and every settled send has a matching
/// settled receive.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DayOutcome {
    /// `lambda * a_i`.
    pub liquidity_cost: Vec<f64>,
    /// `kappa * total_delay_fraction[i]`.
    pub delay_cost: Vec<f64>,
    /// Throughput penalties; all zero outside the throughput scenario.
    pub penalty_cost: Vec<f64>,
    /// Stage payoff, the negated cost total.
    pub payoff: Vec<f64>,
    /// Instructions that arrived with this bank as sender (settled or not).
    pub sent_count: Vec<u32>,
    /// Payments actually credited to this bank.
    pub received_count: Vec<u32>,
    /// This bank's sent payments that settled (moved balances) by `T`.
    pub settled_count: Vec<u32>,
    /// Sum of `(settle - arrival) / T` over the bank's sent payments;
    /// unsettled payments contribute `(T - arrival) / T`.
    pub total_delay_fraction: Vec<f64>,
    /// Liquidity held at day end. Sums to the total committed at day start.
    pub end_balance: Vec<u64>,
}

/// Event kinds recorded by [`run_day_traced`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    /// An instruction arrived and was queued by its sender.
    Arrival,
    /// A payment settled: one unit moved from sender to receiver.
    Settle,
    /// A payment was still queued at `T` and charged without settling.
    Expire,
}

impl std::fmt::Display for TraceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TraceKind::Arrival => "arrival",
            TraceKind::Settle => "settle",
            TraceKind::Expire => "expire",
        };
        f.write_str(s)
    }
}

/// One line of the settlement debug trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEvent {
    pub time: f64,
    pub kind: TraceKind,
    pub sender: usize,
    pub receiver: usize,
}

/// Draws one day of payment instructions.
///
/// Inter-arrival times are exponential with rate 1 per day unit, so the
/// expected instruction count equals `day_length`. Senders are uniform over
/// the banks, receivers uniform over the remaining banks. The returned
/// sequence is sorted by arrival time.
///
/// The draw order per instruction is pinned (inter-arrival, sender,
/// receiver) so seeded traces stay stable.
pub fn sample_instructions<R: Rng>(
    rng: &mut R,
    n_banks: usize,
    day_length: f64,
) -> Result<Vec<PaymentInstruction>> {
    if n_banks < 2 {
        return Err(SimError::InvalidConfig(format!("n_banks: must be >= 2, got {n_banks}")));
    }
    if !(day_length >= 0.0) {
        return Err(SimError::InvalidConfig(format!(
            "day_length: must be >= 0, got {day_length}"
        )));
    }
    let mut out = Vec::with_capacity(day_length as usize + 1);
    let mut t = 0.0_f64;
    loop {
        // Inverse-CDF exponential: u in [0,1) so 1-u in (0,1] and ln is finite.
        let u: f64 = rng.gen();
        t += -(1.0 - u).ln();
        if t > day_length {
            break;
        }
        let sender = rng.gen_range(0..n_banks);
        let r = rng.gen_range(0..n_banks - 1);
        let receiver = if r >= sender { r + 1 } else { r };
        out.push(PaymentInstruction { sender, receiver, arrival_time: t });
    }
    Ok(out)
}

/// Uniformly selects the bank hit by an operational incident.
///
/// `n_banks` must be at least 1.
pub fn select_incident_victim<R: Rng>(rng: &mut R, n_banks: usize) -> usize {
    rng.gen_range(0..n_banks)
}

struct BankDayState {
    /// Available liquidity `l_i(t)`; starts at the bank's action and never
    /// goes negative (payments settle only while at least one unit is held).
    liquidity: u64,
    /// Pending sent payments in arrival order.
    queue: VecDeque<QueuedPayment>,
    /// The bank may not settle before this time. 0 for everyone except the
    /// incident victim, whose gate lifts at `T/2`.
    gated_until: f64,
}

#[derive(Clone, Copy)]
struct QueuedPayment {
    arrival: f64,
    receiver: u32,
}

struct Accumulators {
    delay_sum: Vec<f64>,
    sent: Vec<u32>,
    received: Vec<u32>,
    settled: Vec<u32>,
    penalized: Vec<u32>,
}

/// Executes one settlement day. See the module docs for the rules.
///
/// Preconditions: `instructions` sorted by arrival time with valid bank
/// indices, and `victim` present iff the scenario is `Incident`. Violations
/// return [`SimError::ContractViolation`] / [`SimError::InvalidConfig`]
/// rather than panicking.
pub fn run_day(
    actions: &[u64],
    instructions: &[PaymentInstruction],
    costs: &CostParams,
    scenario: Scenario,
    victim: Option<usize>,
) -> Result<DayOutcome> {
    run_day_impl(actions, instructions, costs, scenario, victim, None)
}

/// As [`run_day`], additionally recording every arrival, settlement and
/// end-of-day expiry as a [`TraceEvent`] stream for golden-file tests.
pub fn run_day_traced(
    actions: &[u64],
    instructions: &[PaymentInstruction],
    costs: &CostParams,
    scenario: Scenario,
    victim: Option<usize>,
) -> Result<(DayOutcome, Vec<TraceEvent>)> {
    let mut trace = Vec::new();
    let outcome = run_day_impl(actions, instructions, costs, scenario, victim, Some(&mut trace))?;
    Ok((outcome, trace))
}

fn run_day_impl(
    actions: &[u64],
    instructions: &[PaymentInstruction],
    costs: &CostParams,
    scenario: Scenario,
    victim: Option<usize>,
    mut trace: Option<&mut Vec<TraceEvent>>,
) -> Result<DayOutcome> {
    let n = actions.len();
    if n == 0 {
        return Err(SimError::InvalidConfig("actions: must name at least one bank".into()));
    }
    costs.validate(scenario)?;
    let victim = match (scenario, victim) {
        (Scenario::Incident, Some(v)) if v < n => Some(v),
        (Scenario::Incident, Some(v)) => {
            return Err(SimError::ContractViolation(format!(
                "victim: index {v} out of range for {n} banks"
            )))
        }
        (Scenario::Incident, None) => {
            return Err(SimError::ContractViolation(
                "victim: required under the incident scenario".into(),
            ))
        }
        (_, Some(_)) => {
            return Err(SimError::ContractViolation(
                "victim: only meaningful under the incident scenario".into(),
            ))
        }
        (_, None) => None,
    };
    let t_end = costs.day_length;
    let mut prev = 0.0_f64;
    for (k, ins) in instructions.iter().enumerate() {
        if ins.arrival_time < prev {
            return Err(SimError::ContractViolation(format!(
                "instructions: not sorted by arrival_time at index {k}"
            )));
        }
        prev = ins.arrival_time;
        if ins.arrival_time > t_end {
            return Err(SimError::ContractViolation(format!(
                "instructions: arrival_time {} past day end {t_end} at index {k}",
                ins.arrival_time
            )));
        }
        if ins.sender >= n || ins.receiver >= n || ins.sender == ins.receiver {
            return Err(SimError::ContractViolation(format!(
                "instructions: bad sender/receiver pair ({}, {}) at index {k}",
                ins.sender, ins.receiver
            )));
        }
    }

    let gate_time = t_end / 2.0;
    let mut banks: Vec<BankDayState> = actions
        .iter()
        .enumerate()
        .map(|(i, &a)| BankDayState {
            liquidity: a,
            queue: VecDeque::new(),
            gated_until: if victim == Some(i) { gate_time } else { 0.0 },
        })
        .collect();
    let mut acc = Accumulators {
        delay_sum: vec![0.0; n],
        sent: vec![0; n],
        received: vec![0; n],
        settled: vec![0; n],
        penalized: vec![0; n],
    };

    // The victim's accumulated queue gets processed once when its gate
    // lifts; afterwards it drains at its own arrivals like everyone else.
    let mut gate_open = victim.is_none();

    for ins in instructions {
        let now = ins.arrival_time;
        if !gate_open && now >= gate_time {
            gate_open = true;
            drain(victim.unwrap(), gate_time, &mut banks, &mut acc, costs, scenario, &mut trace);
        }
        acc.sent[ins.sender] += 1;
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(TraceEvent {
                time: now,
                kind: TraceKind::Arrival,
                sender: ins.sender,
                receiver: ins.receiver,
            });
        }
        banks[ins.sender]
            .queue
            .push_back(QueuedPayment { arrival: now, receiver: ins.receiver as u32 });
        if now >= banks[ins.sender].gated_until {
            drain(ins.sender, now, &mut banks, &mut acc, costs, scenario, &mut trace);
        }
    }

    // Gate lifts even when no instruction arrives after T/2.
    if !gate_open {
        drain(victim.unwrap(), gate_time, &mut banks, &mut acc, costs, scenario, &mut trace);
    }

    // Anything still queued is charged as if settled at T; balances stay put.
    for b in 0..n {
        while let Some(p) = banks[b].queue.pop_front() {
            let delay = t_end - p.arrival;
            acc.delay_sum[b] += delay;
            if scenario == Scenario::Throughput && delay > costs.throughput_threshold {
                acc.penalized[b] += 1;
            }
            if let Some(tr) = trace.as_deref_mut() {
                tr.push(TraceEvent {
                    time: t_end,
                    kind: TraceKind::Expire,
                    sender: b,
                    receiver: p.receiver as usize,
                });
            }
        }
    }

    let mut out = DayOutcome::default();
    for i in 0..n {
        let liquidity_cost = costs.lambda * actions[i] as f64;
        let delay_fraction = acc.delay_sum[i] / t_end;
        let delay_cost = costs.kappa * delay_fraction;
        let penalty_cost = acc.penalized[i] as f64 * costs.throughput_penalty;
        out.liquidity_cost.push(liquidity_cost);
        out.delay_cost.push(delay_cost);
        out.penalty_cost.push(penalty_cost);
        out.payoff.push(-(liquidity_cost + delay_cost + penalty_cost));
        out.sent_count.push(acc.sent[i]);
        out.received_count.push(acc.received[i]);
        out.settled_count.push(acc.settled[i]);
        out.total_delay_fraction.push(delay_fraction);
        out.end_balance.push(banks[i].liquidity);
    }
    Ok(out)
}

/// Drains one bank's queue at time `now`: settles from the front, oldest
/// first, while the bank holds liquidity. Credits land in the receivers'
/// balances and become usable at their own later drains; they do not
/// trigger processing here.
fn drain(
    bank: usize,
    now: f64,
    banks: &mut [BankDayState],
    acc: &mut Accumulators,
    costs: &CostParams,
    scenario: Scenario,
    trace: &mut Option<&mut Vec<TraceEvent>>,
) {
    while banks[bank].liquidity >= 1 {
        let Some(p) = banks[bank].queue.pop_front() else { break };
        let r = p.receiver as usize;
        banks[bank].liquidity -= 1;
        banks[r].liquidity += 1;
        let delay = now - p.arrival;
        acc.delay_sum[bank] += delay;
        acc.settled[bank] += 1;
        acc.received[r] += 1;
        if scenario == Scenario::Throughput && delay > costs.throughput_threshold {
            acc.penalized[bank] += 1;
        }
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(TraceEvent { time: now, kind: TraceKind::Settle, sender: bank, receiver: r });
        }
    }
    // After a drain the bank is either dry or has nothing left to send.
    debug_assert!(banks[bank].liquidity == 0 || banks[bank].queue.is_empty());
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;

    fn base_costs(kappa: f64, day_length: f64) -> CostParams {
        CostParams {
            lambda: 1.0,
            kappa,
            throughput_penalty: 0.0,
            throughput_threshold: day_length / 10.0,
            day_length,
        }
    }

    fn ins(sender: usize, receiver: usize, arrival_time: f64) -> PaymentInstruction {
        PaymentInstruction { sender, receiver, arrival_time }
    }

    #[test]
    fn zero_length_day_yields_no_instructions() {
        let mut rng = rng_from(1);
        let got = sample_instructions(&mut rng, 15, 0.0).unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn rejects_single_bank_sampling() {
        let mut rng = rng_from(1);
        assert!(matches!(
            sample_instructions(&mut rng, 1, 100.0),
            Err(SimError::InvalidConfig(_))
        ));
    }

    #[test]
    fn instruction_count_matches_poisson_mean() {
        // Mean over 1000 seeded days of a T=1000 day, tolerance 3*sqrt(T).
        let t = 1000.0;
        let mut total = 0usize;
        for seed in 0..1000u64 {
            let mut rng = rng_from(seed);
            total += sample_instructions(&mut rng, 2, t).unwrap().len();
        }
        let mean = total as f64 / 1000.0;
        assert!(
            (mean - t).abs() <= 3.0 * t.sqrt(),
            "mean instruction count {mean} too far from {t}"
        );
    }

    #[test]
    fn instructions_sorted_and_well_formed() {
        let mut rng = rng_from(7);
        let got = sample_instructions(&mut rng, 5, 500.0).unwrap();
        let mut prev = 0.0;
        for i in &got {
            assert!(i.arrival_time >= prev && i.arrival_time <= 500.0);
            assert!(i.sender < 5 && i.receiver < 5 && i.sender != i.receiver);
            prev = i.arrival_time;
        }
    }

    #[test]
    fn sender_frequencies_pass_chi_square() {
        // Aggregate sender counts over 100 seeded T=10^4 days, 1% level.
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        let n = 15usize;
        let mut counts = vec![0u64; n];
        for seed in 0..100u64 {
            let mut rng = rng_from(seed);
            for i in sample_instructions(&mut rng, n, 10_000.0).unwrap() {
                counts[i.sender] += 1;
            }
        }
        let total: u64 = counts.iter().sum();
        let expected = total as f64 / n as f64;
        let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        let critical = ChiSquared::new((n - 1) as f64).unwrap().inverse_cdf(0.99);
        assert!(stat < critical, "chi-square {stat} >= {critical}");
    }

    #[test]
    fn victim_selection_is_uniform_and_deterministic() {
        assert_eq!(select_incident_victim(&mut rng_from(3), 1), 0);

        let mut counts = vec![0u32; 15];
        let mut rng = rng_from(11);
        let draws = 10_000;
        for _ in 0..draws {
            counts[select_incident_victim(&mut rng, 15)] += 1;
        }
        let p = 1.0 / 15.0;
        let bound = 3.0 * (p * (1.0 - p) / draws as f64).sqrt();
        for &c in &counts {
            let freq = c as f64 / draws as f64;
            assert!((freq - p).abs() <= bound, "frequency {freq} outside {p} +- {bound}");
        }

        let a = select_incident_victim(&mut rng_from(42), 15);
        let b = select_incident_victim(&mut rng_from(42), 15);
        assert_eq!(a, b);
    }

    #[test]
    fn abundance_means_zero_delays() {
        let mut rng = rng_from(5);
        let instructions = sample_instructions(&mut rng, 3, 200.0).unwrap();
        let cover = instructions.len() as u64;
        let actions = vec![cover, cover, cover];
        let out = run_day(&actions, &instructions, &base_costs(8.0, 200.0), Scenario::Base, None)
            .unwrap();
        for i in 0..3 {
            assert_eq!(out.total_delay_fraction[i], 0.0);
            assert_eq!(out.payoff[i], -(actions[i] as f64));
            assert_eq!(out.settled_count[i], out.sent_count[i]);
        }
    }

    #[test]
    fn free_delays_cost_only_liquidity() {
        let mut rng = rng_from(6);
        let instructions = sample_instructions(&mut rng, 3, 200.0).unwrap();
        let actions = vec![4, 0, 2];
        let out = run_day(&actions, &instructions, &base_costs(0.0, 200.0), Scenario::Base, None)
            .unwrap();
        for i in 0..3 {
            assert_eq!(out.payoff[i], -(actions[i] as f64));
        }
    }

    #[test]
    fn zero_liquidity_deadlock_charges_delays_to_day_end() {
        // Hand-traced: nothing ever settles, both payments expire at T.
        let instructions = [ins(0, 1, 100.0), ins(1, 0, 400.0)];
        let out =
            run_day(&[0, 0], &instructions, &base_costs(8.0, 1000.0), Scenario::Base, None).unwrap();
        assert_eq!(out.payoff[0], -(8.0 * ((1000.0 - 100.0) / 1000.0)));
        assert_eq!(out.payoff[1], -(8.0 * ((1000.0 - 400.0) / 1000.0)));
        assert_eq!(out.settled_count, vec![0, 0]);
        assert_eq!(out.end_balance, vec![0, 0]);
    }

    #[test]
    fn cascade_release_settles_on_arrival() {
        // Hand-traced: bank 0's unit flows to bank 1, which reuses it at t=400.
        let instructions = [ins(0, 1, 100.0), ins(1, 0, 400.0)];
        let out =
            run_day(&[2, 0], &instructions, &base_costs(8.0, 1000.0), Scenario::Base, None).unwrap();
        assert_eq!(out.payoff[0], -2.0);
        assert_eq!(out.payoff[1], 0.0);
        assert_eq!(out.total_delay_fraction, vec![0.0, 0.0]);
        assert_eq!(out.settled_count, vec![1, 1]);
        assert_eq!(out.end_balance, vec![2, 0]);
    }

    #[test]
    fn unsorted_instructions_are_rejected() {
        let instructions = [ins(0, 1, 400.0), ins(1, 0, 100.0)];
        let err = run_day(&[1, 1], &instructions, &base_costs(1.0, 1000.0), Scenario::Base, None)
            .unwrap_err();
        assert!(matches!(err, SimError::ContractViolation(_)));
    }

    #[test]
    fn victim_argument_must_match_scenario() {
        let costs = base_costs(1.0, 100.0);
        assert!(run_day(&[1, 1], &[], &costs, Scenario::Incident, None).is_err());
        assert!(run_day(&[1, 1], &[], &costs, Scenario::Base, Some(0)).is_err());
        assert!(run_day(&[1, 1], &[], &costs, Scenario::Incident, Some(5)).is_err());
        assert!(run_day(&[1, 1], &[], &costs, Scenario::Incident, Some(1)).is_ok());
    }

    #[test]
    fn deterministic_outcomes() {
        let mut rng = rng_from(9);
        let instructions = sample_instructions(&mut rng, 4, 300.0).unwrap();
        let actions = [3, 0, 1, 2];
        let costs = base_costs(2.0, 300.0);
        let a = run_day(&actions, &instructions, &costs, Scenario::Base, None).unwrap();
        let b = run_day(&actions, &instructions, &costs, Scenario::Base, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn conservation_on_random_days() {
        for seed in 0..50u64 {
            let mut rng = rng_from(seed);
            let n = 2 + (seed as usize % 4);
            let instructions = sample_instructions(&mut rng, n, 150.0).unwrap();
            let actions: Vec<u64> = (0..n).map(|i| (seed + i as u64) % 4).collect();
            let out =
                run_day(&actions, &instructions, &base_costs(3.0, 150.0), Scenario::Base, None)
                    .unwrap();
            let committed: u64 = actions.iter().sum();
            let end: u64 = out.end_balance.iter().sum();
            assert_eq!(committed, end, "balance conservation broke at seed {seed}");
            let settled: u32 = out.settled_count.iter().sum();
            let received: u32 = out.received_count.iter().sum();
            assert_eq!(settled, received);
            for i in 0..n {
                assert_eq!(
                    out.payoff[i],
                    -(out.liquidity_cost[i] + out.delay_cost[i] + out.penalty_cost[i])
                );
            }
        }
    }

    #[test]
    fn fifo_settle_order_per_sender() {
        for seed in 0..20u64 {
            let mut rng = rng_from(seed);
            let n = 3;
            let instructions = sample_instructions(&mut rng, n, 120.0).unwrap();
            let actions = vec![1, 2, 0];
            let (_, trace) = run_day_traced(
                &actions,
                &instructions,
                &base_costs(1.0, 120.0),
                Scenario::Base,
                None,
            )
            .unwrap();
            let mut last_settle = vec![0.0_f64; n];
            for ev in trace.iter().filter(|e| e.kind == TraceKind::Settle) {
                assert!(ev.time >= last_settle[ev.sender]);
                last_settle[ev.sender] = ev.time;
            }
        }
    }

    #[test]
    fn more_liquidity_never_increases_delays() {
        // Weak monotonicity on fixed instruction sequences, N <= 5.
        for seed in 0..10u64 {
            let mut rng = rng_from(seed);
            let n = 4;
            let instructions = sample_instructions(&mut rng, n, 200.0).unwrap();
            let costs = base_costs(4.0, 200.0);
            let base_actions = vec![2, 1, 0, 3];
            let base =
                run_day(&base_actions, &instructions, &costs, Scenario::Base, None).unwrap();
            for bumped in 0..n {
                let mut actions = base_actions.clone();
                actions[bumped] += 2;
                let out = run_day(&actions, &instructions, &costs, Scenario::Base, None).unwrap();
                for i in 0..n {
                    assert!(
                        out.total_delay_fraction[i] <= base.total_delay_fraction[i] + 1e-12,
                        "seed {seed}: bumping bank {bumped} raised bank {i}'s delays"
                    );
                }
            }
        }
    }

    #[test]
    fn throughput_penalty_is_flat_per_late_payment() {
        let costs = CostParams {
            lambda: 1.0,
            kappa: 1.0,
            throughput_penalty: 64.0,
            throughput_threshold: 100.0,
            day_length: 1000.0,
        };
        // Bank 0 holds nothing. Its t=150 payment waits for the credit from
        // bank 1 (t=600) and settles at bank 0's next arrival, t=700, 550
        // late. The t=700 payment expires at T, 300 late. Two penalties.
        let instructions = [ins(0, 1, 150.0), ins(1, 0, 600.0), ins(0, 1, 700.0)];
        let out = run_day(&[0, 2], &instructions, &costs, Scenario::Throughput, None).unwrap();
        assert_eq!(out.penalty_cost[0], 128.0);
        assert_eq!(out.penalty_cost[1], 0.0);
        assert_eq!(out.settled_count, vec![1, 1]);
        assert_eq!(out.total_delay_fraction[0], (550.0 + 300.0) / 1000.0);

        // Same day under the base scenario: no penalties at all.
        let base = run_day(&[0, 2], &instructions, &costs, Scenario::Base, None).unwrap();
        assert_eq!(base.penalty_cost, vec![0.0, 0.0]);
        assert_eq!(base.delay_cost[0], (550.0 + 300.0) / 1000.0);
    }

    #[test]
    fn incident_victim_sends_nothing_before_half_day() {
        // Victim 0 queues its t=100 payment until the gate lifts at t=500;
        // its t=200 receipt still credits the balance immediately.
        let instructions = [ins(0, 1, 100.0), ins(1, 0, 200.0)];
        let (out, trace) = run_day_traced(
            &[1, 1],
            &instructions,
            &base_costs(1.0, 1000.0),
            Scenario::Incident,
            Some(0),
        )
        .unwrap();
        for ev in trace.iter().filter(|e| e.kind == TraceKind::Settle && e.sender == 0) {
            assert!(ev.time >= 500.0, "victim settled at {} before the gate", ev.time);
        }
        // Receipt before T/2 credited the victim.
        assert_eq!(out.received_count[0], 1);
        // The queued payment settles exactly when the gate lifts.
        assert_eq!(out.total_delay_fraction[0], (500.0 - 100.0) / 1000.0);
        assert_eq!(out.settled_count, vec![1, 1]);
    }

    #[test]
    fn incident_gate_lifts_even_without_later_arrivals() {
        let instructions = [ins(0, 1, 100.0)];
        let out = run_day(
            &[1, 0],
            &instructions,
            &base_costs(1.0, 1000.0),
            Scenario::Incident,
            Some(0),
        )
        .unwrap();
        assert_eq!(out.settled_count[0], 1);
        assert_eq!(out.total_delay_fraction[0], (500.0 - 100.0) / 1000.0);
    }

    #[test]
    fn trace_matches_hand_audit() {
        let instructions = [ins(0, 1, 10.0), ins(1, 2, 20.0), ins(2, 0, 30.0)];
        let (_, trace) = run_day_traced(
            &[1, 0, 0],
            &instructions,
            &base_costs(1.0, 100.0),
            Scenario::Base,
            None,
        )
        .unwrap();
        let expected = vec![
            TraceEvent { time: 10.0, kind: TraceKind::Arrival, sender: 0, receiver: 1 },
            TraceEvent { time: 10.0, kind: TraceKind::Settle, sender: 0, receiver: 1 },
            TraceEvent { time: 20.0, kind: TraceKind::Arrival, sender: 1, receiver: 2 },
            TraceEvent { time: 20.0, kind: TraceKind::Settle, sender: 1, receiver: 2 },
            TraceEvent { time: 30.0, kind: TraceKind::Arrival, sender: 2, receiver: 0 },
            TraceEvent { time: 30.0, kind: TraceKind::Settle, sender: 2, receiver: 0 },
        ];
        assert_eq!(trace, expected);
    }
}
