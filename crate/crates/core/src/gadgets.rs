//! PARTITION instances, the reductions that turn them into manipulation
//! instances, the lifts into the uncertain setting, and a harness that
//! checks reduction answers against a subset-sum oracle.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ballots::{checked_total, ManipulationInstance, Mode, Profile, Protocol, VoteOrder, Weight, WeightedVote};
use crate::error::{Error, Result};
use crate::manipulate::{solve_ccwm_exact, solve_dcwm_via_ccwm, Decision, ManipulationAnswer, SearchConfig};
use crate::protocols::Rule;
use crate::uncertain::{
    Marginal, UncertainEvaluationInstance, UncertainManipulationInstance, UncertainVoter, VoteDistribution,
};

/// Largest item sum the subset-sum table will take.
pub const MAX_PARTITION_SUM: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionInstance {
    items: Vec<u64>,
}

impl PartitionInstance {
    pub fn new(items: Vec<u64>) -> Result<Self> {
        if items.contains(&0) {
            return Err(Error::InvalidInstance("partition items must be positive".into()));
        }
        let total = items
            .iter()
            .try_fold(0u64, |acc, &k| acc.checked_add(k))
            .ok_or(Error::Overflow)?;
        if total > MAX_PARTITION_SUM {
            return Err(Error::LimitExceeded {
                what: "partition item sum",
                actual: total,
                limit: MAX_PARTITION_SUM,
            });
        }
        Ok(PartitionInstance { items })
    }

    pub fn items(&self) -> &[u64] {
        &self.items
    }

    pub fn total(&self) -> u64 {
        self.items.iter().sum()
    }

    /// `K`, when the total is even.
    pub fn half(&self) -> Option<u64> {
        let total = self.total();
        total.is_multiple_of(2).then_some(total / 2)
    }
}

impl FromStr for PartitionInstance {
    type Err = Error;

    /// Comma-separated items, e.g. `1,1,4`.
    fn from_str(s: &str) -> Result<Self> {
        let items = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<u64>()
                    .map_err(|_| Error::Syntax(format!("bad partition item `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        PartitionInstance::new(items)
    }
}

impl fmt::Display for PartitionInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.items.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionAnswer {
    /// Indices of items summing to `K`, when one exists.
    pub witness: Option<Vec<usize>>,
}

impl PartitionAnswer {
    pub fn exists(&self) -> bool {
        self.witness.is_some()
    }
}

/// Subset-sum reachability over `0..=K`, with the witness rebuilt from the
/// item that first reached each sum.
pub fn partition_oracle(instance: &PartitionInstance) -> PartitionAnswer {
    let Some(half) = instance.half() else {
        return PartitionAnswer { witness: None };
    };
    let half = half as usize;
    // reached_by[s] = item that first made sum s reachable; usize::MAX marks sum 0.
    let mut reached_by: Vec<Option<usize>> = vec![None; half + 1];
    reached_by[0] = Some(usize::MAX);
    for (i, &k) in instance.items.iter().enumerate() {
        let k = k as usize;
        if k > half {
            continue;
        }
        for s in (k..=half).rev() {
            if reached_by[s].is_none() && reached_by[s - k].is_some() {
                reached_by[s] = Some(i);
            }
        }
    }
    if reached_by[half].is_none() {
        return PartitionAnswer { witness: None };
    }
    let mut witness = Vec::new();
    let mut s = half;
    while s > 0 {
        let i = reached_by[s].expect("reachable sums have a parent");
        witness.push(i);
        s -= instance.items[i] as usize;
    }
    witness.reverse();
    PartitionAnswer { witness: Some(witness) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    BordaCcwm,
    CopelandCcwm,
    MaximinCcwm,
    StvCcwm,
    /// The STV constructive gadget extended to a destructive one.
    StvDcwm,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [
        Theorem::BordaCcwm,
        Theorem::CopelandCcwm,
        Theorem::MaximinCcwm,
        Theorem::StvCcwm,
        Theorem::StvDcwm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::BordaCcwm => "borda-ccwm",
            Theorem::CopelandCcwm => "copeland-ccwm",
            Theorem::MaximinCcwm => "maximin-ccwm",
            Theorem::StvCcwm => "stv-ccwm",
            Theorem::StvDcwm => "stv-dcwm",
        }
    }

    pub fn protocol(self) -> Protocol {
        match self {
            Theorem::BordaCcwm => Protocol::Borda,
            Theorem::CopelandCcwm => Protocol::Copeland,
            Theorem::MaximinCcwm => Protocol::Maximin,
            Theorem::StvCcwm | Theorem::StvDcwm => Protocol::Stv,
        }
    }

    pub fn rule(self) -> Rule {
        match self {
            Theorem::BordaCcwm => Rule::Borda,
            Theorem::CopelandCcwm => Rule::Copeland,
            Theorem::MaximinCcwm => Rule::Maximin,
            Theorem::StvCcwm | Theorem::StvDcwm => Rule::Stv,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Syntax(format!("unknown theorem family `{s}`")))
    }
}

fn block(profile_labels: &[&str], ranking: &[&str], weight: Weight) -> WeightedVote {
    let ranking = ranking
        .iter()
        .map(|l| profile_labels.iter().position(|c| c == l).expect("gadget label"))
        .collect();
    WeightedVote::new(
        VoteOrder::new(ranking, profile_labels.len()).expect("gadget order"),
        weight,
    )
}

/// Builds the manipulation instance for `theorem` from a PARTITION instance
/// with `K = total / 2`. Each block of identical fixed votes is one weighted
/// vote.
pub fn build_gadget(theorem: Theorem, partition: &PartitionInstance) -> Result<ManipulationInstance> {
    let k = partition
        .half()
        .ok_or_else(|| Error::InvalidInstance("partition total must be even".into()))?;
    if k == 0 {
        return Err(Error::InvalidInstance("partition total must be positive".into()));
    }
    let scaled = |factor: u64| -> Result<Vec<Weight>> {
        partition
            .items()
            .iter()
            .map(|&x| x.checked_mul(factor).ok_or(Error::Overflow))
            .collect()
    };
    let (labels, votes, coalition): (&[&str], Vec<WeightedVote>, Vec<Weight>) = match theorem {
        Theorem::BordaCcwm => {
            let l: &[&str] = &["a", "b", "p"];
            (
                l,
                vec![
                    block(l, &["a", "b", "p"], 6 * k - 1),
                    block(l, &["b", "a", "p"], 6 * k - 1),
                ],
                scaled(6)?,
            )
        }
        Theorem::CopelandCcwm => {
            let l: &[&str] = &["a", "b", "c", "p"];
            (
                l,
                vec![
                    block(l, &["p", "a", "b", "c"], 2 * k + 2),
                    block(l, &["c", "p", "b", "a"], 2 * k + 2),
                    block(l, &["a", "b", "c", "p"], k + 1),
                    block(l, &["b", "a", "c", "p"], k + 1),
                ],
                scaled(1)?,
            )
        }
        Theorem::MaximinCcwm => {
            let l: &[&str] = &["a", "b", "c", "p"];
            (
                l,
                vec![
                    block(l, &["a", "b", "c", "p"], 7 * k - 1),
                    block(l, &["b", "c", "a", "p"], 7 * k - 1),
                    block(l, &["c", "a", "b", "p"], 4 * k - 1),
                    block(l, &["p", "c", "a", "b"], 5 * k),
                ],
                scaled(2)?,
            )
        }
        Theorem::StvCcwm | Theorem::StvDcwm => {
            let l: &[&str] = &["a", "b", "p"];
            (
                l,
                vec![
                    block(l, &["b", "p", "a"], 6 * k - 1),
                    block(l, &["a", "b", "p"], 4 * k),
                    block(l, &["p", "a", "b"], 4 * k),
                ],
                scaled(2)?,
            )
        }
    };
    let profile = Profile::new(labels.iter().copied(), votes)?;
    let p = profile.index_of("p")?;
    let ccwm = ManipulationInstance::new(profile, coalition, Mode::Constructive, p)?;
    match theorem {
        Theorem::StvDcwm => build_stv_destructive(&ccwm),
        _ => Ok(ccwm),
    }
}

/// Extends a three-candidate STV constructive instance over `{a, b, p}` with
/// a hated candidate `h` whose elimination hinges on the same coalition.
pub fn build_stv_destructive(ccwm: &ManipulationInstance) -> Result<ManipulationInstance> {
    let profile = ccwm.profile();
    if profile.m() != 3 || ccwm.mode() != Mode::Constructive {
        return Err(Error::InvalidInstance(
            "expected a constructive instance over exactly three candidates".into(),
        ));
    }
    if profile.index_of("h").is_ok() {
        return Err(Error::InvalidInstance("candidate label `h` is already taken".into()));
    }
    let p = ccwm.target();
    let mut others = (0..3).filter(|&c| c != p);
    let (a, b) = (others.next().unwrap(), others.next().unwrap());
    let h = 3;
    let w = ccwm.total_weight();
    let order = |r: [usize; 4]| VoteOrder::new(r.to_vec(), 4).expect("permutation");

    let mut votes: Vec<WeightedVote> = profile
        .fixed_votes()
        .iter()
        .map(|v| {
            let mut r = v.order.ranking().to_vec();
            r.push(h);
            WeightedVote::new(VoteOrder::new(r, 4).expect("permutation"), v.weight)
        })
        .collect();
    for r in [
        [a, b, p, h],
        [a, p, b, h],
        [b, a, p, h],
        [b, p, a, h],
        [p, h, a, b],
        [p, h, a, b],
    ] {
        votes.push(WeightedVote::new(order(r), 1));
    }
    let heavy = w.checked_add(5).ok_or(Error::Overflow)?;
    votes.push(WeightedVote::new(order([h, a, b, p]), heavy));

    let mut labels = profile.labels();
    labels.push("h".into());
    let extended = Profile::new(labels, votes)?;
    ManipulationInstance::new(extended, ccwm.coalition_weights().to_vec(), Mode::Destructive, h)
}

/// Fixed votes become degenerate voters (one per weighted vote), colluders
/// become uniform voters of the same weight, and the threshold is zero.
pub fn lift_to_uncertain(ccwm: &ManipulationInstance, rule: &Rule) -> Result<UncertainEvaluationInstance> {
    if ccwm.mode() != Mode::Constructive {
        return Err(Error::InvalidInstance("expected a constructive instance".into()));
    }
    let profile = ccwm.profile();
    let voters = profile
        .fixed_votes()
        .iter()
        .map(|v| UncertainVoter {
            weight: v.weight,
            marginal: Marginal::Fixed(v.order.clone()),
        })
        .chain(ccwm.coalition_weights().iter().map(|&weight| UncertainVoter {
            weight,
            marginal: Marginal::Uniform,
        }))
        .collect();
    let distribution = VoteDistribution::new(voters, Vec::new())?;
    UncertainEvaluationInstance::new(profile, distribution, rule.clone(), ccwm.target(), BigRational::zero())
}

pub fn add_null_manipulator(instance: &UncertainEvaluationInstance) -> UncertainManipulationInstance {
    UncertainManipulationInstance {
        evaluation: instance.clone(),
        manipulator_weight: 0,
    }
}

/// Replaces every weight-`k` voter with `k` unit voters drawing together.
/// Existing correlation groups are merged with their members' copies.
pub fn unweight_with_correlation(instance: &UncertainEvaluationInstance) -> Result<UncertainEvaluationInstance> {
    let dist = instance.distribution();
    let mut voters = Vec::new();
    let mut copies: Vec<Vec<usize>> = Vec::with_capacity(dist.voters().len());
    for voter in dist.voters() {
        if voter.weight == 0 {
            return Err(Error::InvalidInstance(
                "a weight-0 voter has no unweighted counterpart".into(),
            ));
        }
        let len = usize::try_from(voter.weight).map_err(|_| Error::Overflow)?;
        let start = voters.len();
        voters.extend(std::iter::repeat_n(
            UncertainVoter {
                weight: 1,
                marginal: voter.marginal.clone(),
            },
            len,
        ));
        copies.push((start..voters.len()).collect());
    }
    let mut in_group = vec![false; copies.len()];
    let mut groups = Vec::new();
    for group in dist.groups() {
        let merged: Vec<usize> = group.iter().flat_map(|&v| copies[v].iter().copied()).collect();
        for &v in group {
            in_group[v] = true;
        }
        if merged.len() > 1 {
            groups.push(merged);
        }
    }
    for (v, c) in copies.into_iter().enumerate() {
        if !in_group[v] && c.len() > 1 {
            groups.push(c);
        }
    }
    groups.sort();
    instance.with_distribution(VoteDistribution::new(voters, groups)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub trials: usize,
    pub min_items: usize,
    pub max_items: usize,
    pub max_value: u64,
    pub seed: u64,
    pub search: SearchConfig,
}

impl VerifyConfig {
    pub fn new(trials: usize, max_items: usize, max_value: u64, seed: u64) -> Self {
        VerifyConfig {
            trials,
            min_items: 1,
            max_items,
            max_value,
            seed,
            search: SearchConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: usize,
    pub partition: PartitionInstance,
    pub oracle: bool,
    pub solver: Decision,
    pub nodes_expanded: u64,
}

impl TrialRecord {
    /// An exhausted solver never agrees.
    pub fn agree(&self) -> bool {
        match self.solver {
            Decision::Yes => self.oracle,
            Decision::No => !self.oracle,
            Decision::Exhausted => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub theorem: Theorem,
    pub trials: Vec<TrialRecord>,
}

impl EquivalenceReport {
    pub fn agreement_rate(&self) -> f64 {
        if self.trials.is_empty() {
            return 1.0;
        }
        self.trials.iter().filter(|t| t.agree()).count() as f64 / self.trials.len() as f64
    }

    pub fn exhausted(&self) -> usize {
        self.trials.iter().filter(|t| t.solver == Decision::Exhausted).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,items,oracle,solver,agree,nodes_expanded\n");
        for t in &self.trials {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                t.trial,
                t.partition,
                if t.oracle { "yes" } else { "no" },
                t.solver,
                t.agree(),
                t.nodes_expanded
            ));
        }
        out
    }
}

/// Draws item count and values uniformly, then redraws the last item until
/// the total is even.
pub fn sample_partition(rng: &mut impl Rng, min_items: usize, max_items: usize, max_value: u64) -> PartitionInstance {
    let n = rng.gen_range(min_items..=max_items);
    let mut items: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=max_value)).collect();
    while items.iter().sum::<u64>() % 2 == 1 {
        let last = items.len() - 1;
        items[last] = rng.gen_range(1..=max_value);
    }
    PartitionInstance::new(items).expect("sampled within bounds")
}

/// Runs the gadget's manipulation solver.
pub fn solve_gadget(
    theorem: Theorem,
    instance: &ManipulationInstance,
    config: &SearchConfig,
) -> Result<ManipulationAnswer> {
    match theorem {
        Theorem::StvDcwm => solve_dcwm_via_ccwm(instance, &Rule::Stv, config),
        other => solve_ccwm_exact(instance, &other.rule(), config),
    }
}

pub fn verify_theorem(theorem: Theorem, config: &VerifyConfig) -> Result<EquivalenceReport> {
    if config.min_items == 0 || config.min_items > config.max_items {
        return Err(Error::InvalidInstance(
            "item bounds must satisfy 1 <= min <= max".into(),
        ));
    }
    if config.max_value < 2 {
        return Err(Error::InvalidInstance("max value must be at least 2".into()));
    }
    checked_total(std::iter::repeat_n(config.max_value, config.max_items))?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let partitions: Vec<PartitionInstance> = (0..config.trials)
        .map(|_| sample_partition(&mut rng, config.min_items, config.max_items, config.max_value))
        .collect();
    let trials = partitions
        .into_par_iter()
        .enumerate()
        .map(|(trial, partition)| {
            let oracle = partition_oracle(&partition).exists();
            let instance = build_gadget(theorem, &partition)?;
            let answer = solve_gadget(theorem, &instance, &config.search)?;
            Ok(TrialRecord {
                trial,
                partition,
                oracle,
                solver: answer.decision,
                nodes_expanded: answer.nodes_expanded,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EquivalenceReport { theorem, trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{score_table, ScoreProtocol};
    use crate::uncertain::evaluate_exact;
    use proptest::prelude::*;

    fn part(items: &[u64]) -> PartitionInstance {
        PartitionInstance::new(items.to_vec()).unwrap()
    }

    fn brute_force(items: &[u64]) -> bool {
        let total: u64 = items.iter().sum();
        total.is_multiple_of(2)
            && (0u32..1 << items.len()).any(|mask| {
                items
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &k)| k)
                    .sum::<u64>()
                    * 2
                    == total
            })
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(partition_oracle(&part(&[1, 1])).witness, Some(vec![0]));
        assert!(!partition_oracle(&part(&[1, 1, 4])).exists());
        let w = partition_oracle(&part(&[3, 1, 2])).witness.unwrap();
        assert_eq!(w.iter().map(|&i| [3, 1, 2][i]).sum::<u64>(), 3);
        assert!(!partition_oracle(&part(&[1, 2])).exists());
    }

    #[test]
    fn partition_bounds() {
        assert!(PartitionInstance::new(vec![0, 2]).is_err());
        assert!(matches!(
            PartitionInstance::new(vec![600_000, 600_000]),
            Err(Error::LimitExceeded { .. })
        ));
        assert_eq!("1, 1,4".parse::<PartitionInstance>().unwrap(), part(&[1, 1, 4]));
        assert!("1,x".parse::<PartitionInstance>().is_err());
    }

    proptest! {
        #[test]
        fn oracle_matches_enumeration(items in prop::collection::vec(1u64..30, 1..=12)) {
            let answer = partition_oracle(&part(&items));
            prop_assert_eq!(answer.exists(), brute_force(&items));
            if let Some(w) = answer.witness {
                let mut sorted = w.clone();
                sorted.dedup();
                prop_assert_eq!(sorted.len(), w.len());
                prop_assert_eq!(w.iter().map(|&i| items[i]).sum::<u64>() * 2, items.iter().sum::<u64>());
            }
        }

        #[test]
        fn borda_gadget_identities(k in 1u64..40) {
            let inst = build_gadget(Theorem::BordaCcwm, &part(&[k, k])).unwrap();
            let s_only = score_table(ScoreProtocol::Borda, inst.profile(), &[]).unwrap();
            prop_assert_eq!(s_only.0.clone(), vec![18 * k as i64 - 3, 18 * k as i64 - 3, 0]);
            let p = inst.profile();
            let witness = [p.parse_order("p > a > b").unwrap(), p.parse_order("p > b > a").unwrap()];
            let votes = inst.coalition_votes(&witness);
            let kk = k as i64;
            let scores = score_table(ScoreProtocol::Borda, p, &votes).unwrap();
            prop_assert_eq!(scores.0, vec![24 * kk - 3, 24 * kk - 3, 24 * kk]);
        }
    }

    #[test]
    fn gadget_multiplicities() {
        let borda = build_gadget(Theorem::BordaCcwm, &part(&[1, 1])).unwrap();
        let w: Vec<Weight> = borda.profile().fixed_votes().iter().map(|v| v.weight).collect();
        assert_eq!(w, vec![5, 5]);
        assert_eq!(borda.coalition_weights(), &[6, 6]);

        let maximin = build_gadget(Theorem::MaximinCcwm, &part(&[1, 1])).unwrap();
        let labels = maximin.profile().labels();
        let rendered: Vec<String> = maximin
            .profile()
            .fixed_votes()
            .iter()
            .map(|v| format!("{}x{}", v.order.display(&labels), v.weight))
            .collect();
        assert_eq!(rendered, ["(a,b,c,p)x6", "(b,c,a,p)x6", "(c,a,b,p)x3", "(p,c,a,b)x5"]);
        assert_eq!(maximin.coalition_weights(), &[2, 2]);

        let stv = build_gadget(Theorem::StvCcwm, &part(&[1, 1])).unwrap();
        let w: Vec<Weight> = stv.profile().fixed_votes().iter().map(|v| v.weight).collect();
        assert_eq!(w, vec![5, 4, 4]);
        assert_eq!(stv.coalition_weights(), &[2, 2]);

        let copeland = build_gadget(Theorem::CopelandCcwm, &part(&[1, 1])).unwrap();
        let w: Vec<Weight> = copeland.profile().fixed_votes().iter().map(|v| v.weight).collect();
        assert_eq!(w, vec![4, 4, 2, 2]);
        assert_eq!(copeland.coalition_weights(), &[1, 1]);

        assert!(build_gadget(Theorem::BordaCcwm, &part(&[1, 2])).is_err());
    }

    #[test]
    fn stv_destructive_shape() {
        let ccwm = build_gadget(Theorem::StvCcwm, &part(&[1, 1])).unwrap();
        let dcwm = build_stv_destructive(&ccwm).unwrap();
        assert_eq!(dcwm.profile().labels(), ["a", "b", "p", "h"]);
        assert_eq!((dcwm.mode(), dcwm.target()), (Mode::Destructive, 3));
        let last = dcwm.profile().fixed_votes().last().unwrap();
        assert_eq!(last.weight, 22);
        assert_eq!(dcwm.profile().fixed_votes().len(), 3 + 6 + 1);
        assert!(build_stv_destructive(&dcwm).is_err());
        let four = build_gadget(Theorem::MaximinCcwm, &part(&[1, 1])).unwrap();
        assert!(build_stv_destructive(&four).is_err());
    }

    #[test]
    fn small_gadgets_agree_with_oracle() {
        for theorem in Theorem::ALL {
            for items in [&[1u64, 1][..], &[1, 1, 4], &[2, 2]] {
                let partition = part(items);
                let inst = build_gadget(theorem, &partition);
                let Ok(inst) = inst else {
                    continue;
                };
                let answer = solve_gadget(theorem, &inst, &SearchConfig::default()).unwrap();
                assert_eq!(
                    answer.is_yes(),
                    partition_oracle(&partition).exists(),
                    "{theorem} {items:?}"
                );
            }
        }
    }

    #[test]
    fn lift_and_unweight() {
        let ccwm = build_gadget(Theorem::BordaCcwm, &part(&[1, 1])).unwrap();
        let lifted = lift_to_uncertain(&ccwm, &Rule::Borda).unwrap();
        assert_eq!(lifted.distribution().total_weight(), ccwm.total_weight());
        assert_eq!(lifted.distribution().independent_draws(), 2);
        let p: BigRational = evaluate_exact(&lifted).unwrap().probability;
        assert!(p > BigRational::zero());

        let unit = unweight_with_correlation(&lifted).unwrap();
        assert_eq!(unit.distribution().independent_draws(), 2);
        assert!(unit.distribution().voters().iter().all(|v| v.weight == 1));
        assert_eq!(evaluate_exact::<BigRational>(&unit).unwrap().probability, p);

        let again = unweight_with_correlation(&unit).unwrap();
        assert_eq!(again, unit);

        let null = add_null_manipulator(&lifted);
        assert_eq!(null.manipulator_weight, 0);
    }

    #[test]
    fn unweight_rejects_zero_weight() {
        let profile = Profile::new(["a", "p"], vec![]).unwrap();
        let ccwm = ManipulationInstance::new(profile, vec![0], Mode::Constructive, 1).unwrap();
        let lifted = lift_to_uncertain(&ccwm, &Rule::Borda).unwrap();
        assert!(unweight_with_correlation(&lifted).is_err());
    }

    #[test]
    fn verify_is_deterministic() {
        let config = VerifyConfig::new(6, 4, 6, 7);
        let a = verify_theorem(Theorem::BordaCcwm, &config).unwrap();
        let b = verify_theorem(Theorem::BordaCcwm, &config).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.agreement_rate(), 1.0);
        assert!(a
            .to_csv()
            .starts_with("trial,items,oracle,solver,agree,nodes_expanded\n"));
        assert!(a.trials.iter().all(|t| t.partition.total() % 2 == 0));
    }
}
