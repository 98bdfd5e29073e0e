//! Winning probabilities when some votes are only known through a
//! distribution, individual manipulation under that uncertainty, and
//! coalition manipulation of the randomized cup.
//!
//! Each voter's marginal is either degenerate (one known order) or uniform
//! over all `m!` orders. Voters in a correlation group always cast the same
//! order. A candidate "wins" an outcome only when it is the sole member of
//! the winner set, so tied outcomes count against it.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ballots::{
    checked_total, parse_weight, ManipulationInstance, Mode, Profile, Protocol, VoteOrder, Weight, WeightedVote,
};
use crate::error::{Error, Result};
use crate::manipulate::search::{self, Space, StatKind};
use crate::manipulate::{Decision, ManipulationAnswer, SearchConfig};
use crate::protocols::{cup, CupSchedule, Rule, MAX_RANDOMIZED_CUP};
use crate::scalar::{parse_probability, Probability};

/// Largest number of joint outcomes `evaluate_exact` will enumerate.
pub const MAX_EXACT_OUTCOMES: u64 = 10_000_000;

/// Largest field for the randomized-cup coalition search.
pub const MAX_UICCWM_CANDIDATES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Marginal {
    Fixed(VoteOrder),
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UncertainVoter {
    pub weight: Weight,
    pub marginal: Marginal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteDistribution {
    voters: Vec<UncertainVoter>,
    groups: Vec<Vec<usize>>,
}

impl VoteDistribution {
    /// `groups` must be disjoint, in range, and each group's voters must share
    /// weight and marginal.
    pub fn new(voters: Vec<UncertainVoter>, groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut owner = vec![None; voters.len()];
        for (g, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::InvalidInstance("empty correlation group".into()));
            }
            for &v in group {
                let slot = owner.get_mut(v).ok_or_else(|| {
                    Error::InvalidInstance(format!("correlation names voter {v}, which does not exist"))
                })?;
                if slot.replace(g).is_some() {
                    return Err(Error::InvalidInstance(format!(
                        "voter {v} is in two correlation groups"
                    )));
                }
                if voters[v] != voters[group[0]] {
                    return Err(Error::InvalidInstance(
                        "correlated voters must share weight and marginal".into(),
                    ));
                }
            }
        }
        checked_total(voters.iter().map(|v| v.weight))?;
        Ok(VoteDistribution { voters, groups })
    }

    pub fn voters(&self) -> &[UncertainVoter] {
        &self.voters
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn total_weight(&self) -> Weight {
        self.voters.iter().map(|v| v.weight).sum()
    }

    /// Splits voters into the fixed votes and the independent uniform draws,
    /// each draw carrying the combined weight of the voters that share it.
    fn units(&self) -> (Vec<WeightedVote>, Vec<Weight>) {
        let mut group_of = vec![None; self.voters.len()];
        for (g, group) in self.groups.iter().enumerate() {
            for &v in group {
                group_of[v] = Some(g);
            }
        }
        let mut fixed = Vec::new();
        let mut draws = Vec::new();
        let mut group_draw: HashMap<usize, usize> = HashMap::new();
        for (v, voter) in self.voters.iter().enumerate() {
            match &voter.marginal {
                Marginal::Fixed(order) => fixed.push(WeightedVote::new(order.clone(), voter.weight)),
                Marginal::Uniform => match group_of[v] {
                    None => draws.push(voter.weight),
                    Some(g) => match group_draw.get(&g) {
                        Some(&d) => draws[d] += voter.weight,
                        None => {
                            group_draw.insert(g, draws.len());
                            draws.push(voter.weight);
                        }
                    },
                },
            }
        }
        (fixed, draws)
    }

    /// Number of independent uniform draws.
    pub fn independent_draws(&self) -> usize {
        self.units().1.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UncertainEvaluationInstance {
    candidates: Profile,
    distribution: VoteDistribution,
    rule: Rule,
    target: usize,
    threshold: BigRational,
}

impl UncertainEvaluationInstance {
    /// `candidates` supplies the labels; its fixed votes are ignored.
    pub fn new(
        candidates: &Profile,
        distribution: VoteDistribution,
        rule: Rule,
        target: usize,
        threshold: BigRational,
    ) -> Result<Self> {
        let candidates = Profile::new(candidates.labels(), Vec::new())?;
        let m = candidates.m();
        if target >= m {
            return Err(Error::InvalidInstance(format!("target {target} out of range")));
        }
        if threshold < BigRational::zero() || threshold > BigRational::from_integer(1.into()) {
            return Err(Error::InvalidInstance("threshold must lie in [0, 1]".into()));
        }
        for voter in distribution.voters() {
            if let Marginal::Fixed(order) = &voter.marginal {
                if order.len() != m {
                    return Err(Error::NotAPermutation { m });
                }
            }
        }
        if let Rule::Cup(schedule) = &rule {
            if schedule.m() != m {
                return Err(Error::InvalidSchedule("schedule does not cover the candidates".into()));
            }
        }
        Ok(UncertainEvaluationInstance {
            candidates,
            distribution,
            rule,
            target,
            threshold,
        })
    }

    pub fn candidates(&self) -> &Profile {
        &self.candidates
    }

    pub fn distribution(&self) -> &VoteDistribution {
        &self.distribution
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn threshold(&self) -> &BigRational {
        &self.threshold
    }

    pub fn with_distribution(&self, distribution: VoteDistribution) -> Result<Self> {
        UncertainEvaluationInstance::new(
            &self.candidates,
            distribution,
            self.rule.clone(),
            self.target,
            self.threshold.clone(),
        )
    }
}

/// An evaluation instance plus one manipulative voter who is not part of
/// any correlation group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UncertainManipulationInstance {
    pub evaluation: UncertainEvaluationInstance,
    pub manipulator_weight: Weight,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation<P> {
    pub probability: P,
    /// Joint outcomes (equally likely) in which the target is the sole winner.
    pub favourable: u64,
    pub outcomes: u64,
    /// `probability > threshold`, decided exactly.
    pub exceeds_threshold: bool,
}

fn exceeds(favourable: u64, outcomes: u64, threshold: &BigRational) -> bool {
    BigInt::from(favourable) * threshold.denom() > threshold.numer() * BigInt::from(outcomes)
}

fn factorial(m: usize) -> u64 {
    (1..=m as u64).product()
}

/// Exact winning probability by enumerating every joint outcome of the
/// independent uniform draws. Outcomes that aggregate to the same weight per
/// vote type are evaluated once.
pub fn evaluate_exact<P: Probability>(instance: &UncertainEvaluationInstance) -> Result<Evaluation<P>> {
    evaluate_with_extra(instance, &[])
}

fn evaluate_with_extra<P: Probability>(
    instance: &UncertainEvaluationInstance,
    extra_fixed: &[WeightedVote],
) -> Result<Evaluation<P>> {
    let m = instance.candidates.m();
    let (mut fixed, draws) = instance.distribution.units();
    fixed.extend_from_slice(extra_fixed);
    let types = VoteOrder::all(m);
    let per_draw = types.len() as u64;
    let outcomes = (0..draws.len())
        .try_fold(1u64, |acc, _| {
            acc.checked_mul(per_draw).filter(|&n| n <= MAX_EXACT_OUTCOMES)
        })
        .ok_or(Error::LimitExceeded {
            what: "number of joint outcomes (use Monte Carlo sampling instead)",
            actual: (per_draw as f64).powi(draws.len() as i32).min(u64::MAX as f64) as u64,
            limit: MAX_EXACT_OUTCOMES,
        })?;
    let profile = Profile::new(instance.candidates.labels(), fixed)?;
    profile.total_with(&[])?;
    checked_total(std::iter::once(profile.fixed_weight()).chain(draws.iter().copied()))?;

    // Distribution of the per-type weight vector, one draw at a time.
    let mut layer: HashMap<Vec<Weight>, u64> = HashMap::from([(vec![0; types.len()], 1)]);
    for &w in &draws {
        let mut next: HashMap<Vec<Weight>, u64> = HashMap::with_capacity(layer.len() * types.len());
        for (agg, count) in &layer {
            for t in 0..types.len() {
                let mut a = agg.clone();
                a[t] += w;
                *next.entry(a).or_default() += count;
            }
        }
        layer = next;
    }

    let mut favourable = 0;
    for (agg, count) in &layer {
        let extra: Vec<WeightedVote> = agg
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0)
            .map(|(t, &w)| WeightedVote::new(types[t].clone(), w))
            .collect();
        if instance.rule.winners(&profile, &extra)?.is_only(instance.target) {
            favourable += count;
        }
    }
    Ok(Evaluation {
        probability: P::ratio(favourable, outcomes),
        favourable,
        outcomes,
        exceeds_threshold: exceeds(favourable, outcomes, &instance.threshold),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    /// 95% Wilson score interval.
    pub lower: f64,
    pub upper: f64,
    pub wins: u64,
    pub samples: u64,
}

const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `wins` successes out of `n`.
pub fn wilson_interval(wins: u64, n: u64) -> (f64, f64) {
    let n = n as f64;
    let phat = wins as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Seeded sampling estimate. An instance without uniform draws is
/// deterministic and gets a zero-width interval.
pub fn evaluate_montecarlo(
    instance: &UncertainEvaluationInstance,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::InvalidInstance("at least one sample is required".into()));
    }
    let m = instance.candidates.m();
    let (fixed, draws) = instance.distribution.units();
    let profile = Profile::new(instance.candidates.labels(), fixed)?;
    checked_total(std::iter::once(profile.fixed_weight()).chain(draws.iter().copied()))?;
    let types = VoteOrder::all(m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut wins = 0;
    let mut extra: Vec<WeightedVote> = Vec::with_capacity(draws.len());
    for _ in 0..samples {
        extra.clear();
        for &w in &draws {
            extra.push(WeightedVote::new(types[rng.gen_range(0..types.len())].clone(), w));
        }
        if instance.rule.winners(&profile, &extra)?.is_only(instance.target) {
            wins += 1;
        }
    }
    let estimate = wins as f64 / samples as f64;
    let (lower, upper) = if draws.is_empty() {
        (estimate, estimate)
    } else {
        wilson_interval(wins, samples)
    };
    Ok(MonteCarloEstimate {
        estimate,
        lower,
        upper,
        wins,
        samples,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndividualManipulation<P> {
    pub best_vote: VoteOrder,
    pub evaluation: Evaluation<P>,
}

/// Tries every order for the manipulator and keeps the best; equal
/// probabilities keep the lexicographically smaller order.
pub fn solve_uvcimw<P: Probability>(instance: &UncertainManipulationInstance) -> Result<IndividualManipulation<P>> {
    let m = instance.evaluation.candidates.m();
    let mut best: Option<(VoteOrder, Evaluation<P>)> = None;
    for order in VoteOrder::all(m) {
        let vote = WeightedVote::new(order.clone(), instance.manipulator_weight);
        let eval = evaluate_with_extra::<P>(&instance.evaluation, &[vote])?;
        if best.as_ref().is_none_or(|(_, b)| eval.favourable > b.favourable) {
            best = Some((order, eval));
        }
    }
    let (best_vote, evaluation) = best.expect("at least one order");
    Ok(IndividualManipulation { best_vote, evaluation })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomizedCupManipulation {
    pub answer: ManipulationAnswer,
    /// Probability reached by the witness on yes, otherwise the best found.
    pub probability: BigRational,
}

/// Coalition manipulation when the cup schedule is drawn uniformly after
/// voting: searches coalition vote assignments for one that makes the
/// target's unambiguous winning probability exceed `threshold`.
pub fn solve_uiccwm_randomized_cup(
    instance: &ManipulationInstance,
    threshold: &BigRational,
    config: &SearchConfig,
) -> Result<RandomizedCupManipulation> {
    if instance.mode() != Mode::Constructive {
        return Err(Error::InvalidInstance("expected a constructive instance".into()));
    }
    let profile = instance.profile();
    let m = profile.m();
    if m > MAX_UICCWM_CANDIDATES.min(MAX_RANDOMIZED_CUP) {
        return Err(Error::LimitExceeded {
            what: "randomized cup manipulation candidate count",
            actual: m as u64,
            limit: MAX_UICCWM_CANDIDATES as u64,
        });
    }
    let p = instance.target();
    let space = Space::new(m, StatKind::Pairwise, VoteOrder::all(m));
    let base = crate::ballots::pairwise_matrix(profile, &[])?;
    let assignments = factorial(m);
    let mut best = 0u64;
    let outcome = search::search(&space, instance.coalition_weights(), config.node_budget, |stat| {
        let matrix = base.plus_cells(stat)?;
        let dist: cup::CupDistribution<f64> = cup::distribution_from_matrix(&matrix);
        let wins = dist.counts[p];
        best = best.max(wins);
        Ok(exceeds(wins, assignments, threshold))
    })?;
    let (answer, probability) = match outcome.assignment {
        Some(chosen) => {
            let witness: Vec<VoteOrder> = chosen.iter().map(|&t| space.types[t].clone()).collect();
            let extra = instance.coalition_votes(&witness);
            let dist = cup::randomized_cup_distribution::<BigRational>(profile, &extra)?;
            (
                ManipulationAnswer {
                    decision: Decision::Yes,
                    witness: Some(witness),
                    nodes_expanded: outcome.nodes,
                },
                dist.probabilities[p].clone(),
            )
        }
        None => (
            ManipulationAnswer {
                decision: if outcome.exhausted {
                    Decision::Exhausted
                } else {
                    Decision::No
                },
                witness: None,
                nodes_expanded: outcome.nodes,
            },
            BigRational::ratio(best, assignments),
        ),
    };
    Ok(RandomizedCupManipulation { answer, probability })
}

/// A parsed distribution document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionFile {
    pub instance: UncertainEvaluationInstance,
    pub manipulator: Option<Weight>,
}

impl DistributionFile {
    pub fn manipulation(&self) -> Option<UncertainManipulationInstance> {
        self.manipulator.map(|w| UncertainManipulationInstance {
            evaluation: self.instance.clone(),
            manipulator_weight: w,
        })
    }
}

/// Parses the distribution format:
///
/// ```text
/// protocol: borda
/// candidates: a b p
/// target: p
/// threshold: 1/3          # optional, default 0
/// voter: 1 fixed a > b > p
/// voter: 10 uniform
/// correlate: 0 1          # 0-based voter indices
/// manipulator: 0          # optional
/// ```
pub fn parse_distribution(text: &str) -> Result<DistributionFile> {
    let mut protocol = None;
    let mut labels: Option<Vec<String>> = None;
    let mut schedule_text = None;
    let mut target_label = None;
    let mut threshold = BigRational::zero();
    let mut raw_voters: Vec<(usize, Weight, Option<String>)> = Vec::new();
    let mut groups = Vec::new();
    let mut manipulator = None;

    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let step: Result<()> = (|| {
            let (key, value) = content
                .split_once(':')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::Syntax(format!("expected `key: value`, got `{content}`")))?;
            match key {
                "protocol" => protocol = Some(value.parse::<Protocol>()?),
                "candidates" => labels = Some(value.split_whitespace().map(String::from).collect()),
                "schedule" => schedule_text = Some(value.to_string()),
                "target" => {
                    let label = value.strip_prefix("constructive").unwrap_or(value).trim();
                    if value.starts_with("destructive") {
                        return Err(Error::Unsupported(
                            "distribution files take a constructive target".into(),
                        ));
                    }
                    target_label = Some(label.to_string());
                }
                "threshold" => threshold = parse_probability(value)?,
                "voter" => {
                    let mut parts = value.splitn(3, char::is_whitespace);
                    let weight = parse_weight(parts.next().unwrap_or(""))?;
                    match (parts.next(), parts.next()) {
                        (Some("uniform"), None) => raw_voters.push((n, weight, None)),
                        (Some("fixed"), Some(order)) => raw_voters.push((n, weight, Some(order.to_string()))),
                        _ => {
                            return Err(Error::Syntax(
                                "expected `voter: <weight> uniform` or `voter: <weight> fixed a > b > ...`".into(),
                            ))
                        }
                    }
                }
                "correlate" => {
                    let group = value
                        .split_whitespace()
                        .map(|t| {
                            t.parse::<usize>()
                                .map_err(|_| Error::Syntax(format!("bad voter index `{t}`")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    groups.push(group);
                }
                "manipulator" => {
                    if manipulator.replace(parse_weight(value)?).is_some() {
                        return Err(Error::Syntax("only one manipulator is allowed".into()));
                    }
                }
                other => return Err(Error::Syntax(format!("unknown key `{other}`"))),
            }
            Ok(())
        })();
        step.map_err(|e| e.at_line(n))?;
    }

    let labels = labels.ok_or_else(|| Error::Syntax("missing `candidates:` line".into()))?;
    let candidates = Profile::new(labels, Vec::new())?;
    let schedule = schedule_text.map(|s| CupSchedule::parse(&s, &candidates)).transpose()?;
    let protocol = protocol.ok_or_else(|| Error::Syntax("missing `protocol:` line".into()))?;
    let rule = Rule::from_protocol(protocol, schedule)?;
    let target = match target_label {
        Some(l) => candidates.index_of(&l)?,
        None => candidates.index_of("p").unwrap_or(candidates.m() - 1),
    };
    let voters = raw_voters
        .into_iter()
        .map(|(n, weight, order)| {
            let marginal = match order {
                None => Marginal::Uniform,
                Some(text) => Marginal::Fixed(candidates.parse_order(&text).map_err(|e| e.at_line(n))?),
            };
            Ok(UncertainVoter { weight, marginal })
        })
        .collect::<Result<Vec<_>>>()?;
    let distribution = VoteDistribution::new(voters, groups)?;
    let instance = UncertainEvaluationInstance::new(&candidates, distribution, rule, target, threshold)?;
    if let Some(w) = manipulator {
        checked_total([instance.distribution.total_weight(), w])?;
    }
    Ok(DistributionFile { instance, manipulator })
}

pub fn serialize_distribution(file: &DistributionFile) -> String {
    let inst = &file.instance;
    let labels = inst.candidates.labels();
    let mut out = String::new();
    writeln!(out, "protocol: {}", inst.rule.protocol()).unwrap();
    writeln!(out, "candidates: {}", labels.join(" ")).unwrap();
    if let Rule::Cup(schedule) = &inst.rule {
        writeln!(out, "schedule: {}", schedule.render(&labels)).unwrap();
    }
    writeln!(out, "target: {}", labels[inst.target]).unwrap();
    writeln!(out, "threshold: {}", inst.threshold).unwrap();
    for voter in inst.distribution.voters() {
        match &voter.marginal {
            Marginal::Uniform => writeln!(out, "voter: {} uniform", voter.weight).unwrap(),
            Marginal::Fixed(order) => {
                let ranking: Vec<&str> = order.ranking().iter().map(|&c| labels[c].as_str()).collect();
                writeln!(out, "voter: {} fixed {}", voter.weight, ranking.join(" > ")).unwrap();
            }
        }
    }
    for group in inst.distribution.groups() {
        let ids: Vec<String> = group.iter().map(|v| v.to_string()).collect();
        writeln!(out, "correlate: {}", ids.join(" ")).unwrap();
    }
    if let Some(w) = file.manipulator {
        writeln!(out, "manipulator: {w}").unwrap();
    }
    out
}
