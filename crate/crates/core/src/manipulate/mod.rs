//! Coalitional manipulation solvers.
//!
//! Every solver uses the adversarial success criterion: a constructive
//! manipulation succeeds only if the preferred candidate is the sole member
//! of the winner set, and a destructive one succeeds if the hated candidate
//! is not in it at all.

mod cup;
pub(crate) mod search;

use std::fmt;

use num_integer::binomial;

pub use cup::{solve_cup_ccwm, CupManipulation, NodePotentialWinners};

use crate::ballots::{ManipulationInstance, Mode, VoteOrder, WeightedVote};
use crate::error::{Error, Result};
use crate::protocols::{score_winners, Rule, ScoreProtocol, WinnerSet};

use search::{LeafEvaluator, Space, StatKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Yes,
    No,
    /// The node budget ran out before the search could decide.
    Exhausted,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Yes => "yes",
            Decision::No => "no",
            Decision::Exhausted => "exhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationAnswer {
    pub decision: Decision,
    /// One order per coalition voter, aligned with the instance's
    /// `coalition_weights`. Present exactly when the decision is yes.
    pub witness: Option<Vec<VoteOrder>>,
    pub nodes_expanded: u64,
}

impl ManipulationAnswer {
    fn no(nodes_expanded: u64) -> Self {
        ManipulationAnswer {
            decision: Decision::No,
            witness: None,
            nodes_expanded,
        }
    }

    fn yes(witness: Vec<VoteOrder>, nodes_expanded: u64) -> Self {
        ManipulationAnswer {
            decision: Decision::Yes,
            witness: Some(witness),
            nodes_expanded,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.decision == Decision::Yes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub node_budget: u64,
    /// For Borda, Copeland and Maximin, only consider coalition votes that
    /// rank the preferred candidate first. Raising it never lowers its own
    /// score or raises anyone else's, so this loses no solutions.
    pub prune_dominated: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: 20_000_000,
            prune_dominated: true,
        }
    }
}

/// Whether `winners` meets the instance's goal.
pub fn goal_met(instance: &ManipulationInstance, winners: &WinnerSet) -> bool {
    match instance.mode() {
        Mode::Constructive => winners.is_only(instance.target()),
        Mode::Destructive => !winners.contains(instance.target()),
    }
}

/// Re-runs winner determination with the witness appended and checks the goal.
pub fn verify_witness(instance: &ManipulationInstance, rule: &Rule, witness: &[VoteOrder]) -> Result<bool> {
    if witness.len() != instance.coalition_weights().len() {
        return Err(Error::InvalidInstance(format!(
            "witness has {} votes for {} coalition voters",
            witness.len(),
            instance.coalition_weights().len()
        )));
    }
    let extra = instance.coalition_votes(witness);
    Ok(goal_met(instance, &rule.winners(instance.profile(), &extra)?))
}

pub const MAX_UNWEIGHTED_CANDIDATES: usize = 5;

/// Vectors of `len` nonnegative integers summing to `total`, in ascending
/// lexicographic order, starting from `[0, .., 0, total]`.
#[derive(Debug, Clone)]
pub struct MultiplicityVectors {
    next: Option<Vec<u64>>,
}

impl MultiplicityVectors {
    pub fn new(len: usize, total: u64) -> Self {
        let next = match len {
            0 => (total == 0).then(Vec::new),
            _ => {
                let mut v = vec![0; len];
                v[len - 1] = total;
                Some(v)
            }
        };
        MultiplicityVectors { next }
    }

    /// `C(total + len - 1, len - 1)`.
    pub fn count(len: usize, total: u64) -> u128 {
        if len == 0 {
            return u128::from(total == 0);
        }
        binomial(total as u128 + len as u128 - 1, len as u128 - 1)
    }
}

impl Iterator for MultiplicityVectors {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let current = self.next.take()?;
        let len = current.len();
        let mut succ = current.clone();
        let mut suffix = 0;
        for j in (0..len.saturating_sub(1)).rev() {
            suffix += succ[j + 1];
            if suffix > 0 {
                succ[j] += 1;
                for x in &mut succ[j + 1..] {
                    *x = 0;
                }
                succ[len - 1] = suffix - 1;
                self.next = Some(succ);
                break;
            }
        }
        Some(current)
    }
}

/// Unweighted coalitions: only the multiplicity of each vote type matters,
/// so every multiplicity vector is evaluated in turn.
pub fn solve_unweighted_coalition(instance: &ManipulationInstance, rule: &Rule) -> Result<ManipulationAnswer> {
    let m = instance.profile().m();
    if m > MAX_UNWEIGHTED_CANDIDATES {
        return Err(Error::Unsupported(format!(
            "unweighted enumeration is limited to {MAX_UNWEIGHTED_CANDIDATES} candidates; \
             use the weighted exact solver for {m}"
        )));
    }
    if instance.coalition_weights().iter().any(|&w| w != 1) {
        return Err(Error::InvalidInstance(
            "unweighted enumeration needs every coalition weight to be 1".into(),
        ));
    }
    let types = VoteOrder::all(m);
    let n = instance.coalition_weights().len() as u64;
    let mut evaluated = 0u64;
    for multiplicities in MultiplicityVectors::new(types.len(), n) {
        evaluated += 1;
        let extra: Vec<WeightedVote> = types
            .iter()
            .zip(&multiplicities)
            .filter(|(_, &k)| k > 0)
            .map(|(t, &k)| WeightedVote::new(t.clone(), k))
            .collect();
        if goal_met(instance, &rule.winners(instance.profile(), &extra)?) {
            let witness = types
                .iter()
                .zip(&multiplicities)
                .flat_map(|(t, &k)| std::iter::repeat_n(t.clone(), k as usize))
                .collect();
            return Ok(ManipulationAnswer::yes(witness, evaluated));
        }
    }
    Ok(ManipulationAnswer::no(evaluated))
}

/// Exact constructive weighted manipulation by memoised depth-first search.
pub fn solve_ccwm_exact(
    instance: &ManipulationInstance,
    rule: &Rule,
    config: &SearchConfig,
) -> Result<ManipulationAnswer> {
    if instance.mode() != Mode::Constructive {
        return Err(Error::InvalidInstance(
            "the exact solver decides constructive instances".into(),
        ));
    }
    let profile = instance.profile();
    let m = profile.m();
    let p = instance.target();
    let mut types = VoteOrder::all(m);
    if config.prune_dominated && rule.score_protocol().is_some() {
        types.retain(|t| t.top() == Some(p));
    }
    let kind = StatKind::for_rule(rule);
    let space = Space::new(m, kind, types);
    let leaf = LeafEvaluator::new(rule, profile, kind)?;
    let outcome = search::search(&space, instance.coalition_weights(), config.node_budget, |stat| {
        Ok(leaf.winners(&space, stat)?.is_only(p))
    })?;
    Ok(match outcome.assignment {
        Some(types_chosen) => {
            let witness = types_chosen.iter().map(|&t| space.types[t].clone()).collect();
            ManipulationAnswer::yes(witness, outcome.nodes)
        }
        None if outcome.exhausted => ManipulationAnswer {
            decision: Decision::Exhausted,
            witness: None,
            nodes_expanded: outcome.nodes,
        },
        None => ManipulationAnswer::no(outcome.nodes),
    })
}

/// The uniform coalition vote `(a, others in declaration order, h)`.
pub fn monotone_vote(m: usize, top: usize, bottom: usize) -> VoteOrder {
    let mut ranking = vec![top];
    ranking.extend((0..m).filter(|&c| c != top && c != bottom));
    ranking.push(bottom);
    VoteOrder::new(ranking, m).expect("top and bottom are distinct candidates")
}

/// Destructive manipulation for monotone score protocols: try each
/// candidate `a` other than `h` on top of every coalition vote, with `h` at
/// the bottom.
pub fn solve_dcwm_monotone(instance: &ManipulationInstance, protocol: ScoreProtocol) -> Result<ManipulationAnswer> {
    if instance.mode() != Mode::Destructive {
        return Err(Error::InvalidInstance("expected a destructive instance".into()));
    }
    let profile = instance.profile();
    let (m, h) = (profile.m(), instance.target());
    let mut tried = 0;
    for a in (0..m).filter(|&a| a != h) {
        tried += 1;
        let vote = monotone_vote(m, a, h);
        let witness = vec![vote; instance.coalition_weights().len()];
        let (_, winners) = score_winners(protocol, profile, &instance.coalition_votes(&witness))?;
        if !winners.contains(h) {
            return Ok(ManipulationAnswer::yes(witness, tried));
        }
    }
    Ok(ManipulationAnswer::no(tried))
}

/// Destructive manipulation by solving the constructive problem for every
/// other candidate. A yes here means some other candidate can be made the
/// sole winner, which is sufficient for `h` to lose but not necessary when
/// `h` can only be beaten into a tie.
pub fn solve_dcwm_via_ccwm(
    instance: &ManipulationInstance,
    rule: &Rule,
    config: &SearchConfig,
) -> Result<ManipulationAnswer> {
    if instance.mode() != Mode::Destructive {
        return Err(Error::InvalidInstance("expected a destructive instance".into()));
    }
    let h = instance.target();
    let mut nodes = 0;
    let mut exhausted = false;
    for p in (0..instance.profile().m()).filter(|&p| p != h) {
        let sub = instance.with_target(Mode::Constructive, p)?;
        let answer = solve_ccwm_exact(&sub, rule, config)?;
        nodes += answer.nodes_expanded;
        match answer.decision {
            Decision::Yes => {
                return Ok(ManipulationAnswer {
                    nodes_expanded: nodes,
                    ..answer
                })
            }
            Decision::Exhausted => exhausted = true,
            Decision::No => {}
        }
    }
    Ok(ManipulationAnswer {
        decision: if exhausted { Decision::Exhausted } else { Decision::No },
        witness: None,
        nodes_expanded: nodes,
    })
}
