//! Winner determination.
//!
//! Ties are never broken by a hidden rule. Every function returns the set of
//! candidates that win under at least one resolution of every tie that comes
//! up during evaluation, so "wins against adversarial tie-breaking" is the
//! check `winners.is_only(c)` and "can win" is `winners.contains(c)`.

pub(crate) mod cup;
pub(crate) mod stv;

use std::fmt;

use itertools::Itertools;

pub use cup::{randomized_cup_distribution, Bracket, CupDistribution, CupSchedule, MAX_RANDOMIZED_CUP};

use crate::ballots::{pairwise_matrix, PairwiseMatrix, Profile, Protocol, Weight, WeightedVote};
use crate::error::{Error, Result};

/// Candidates that win under some resolution of ties. Never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WinnerSet(Vec<usize>);

impl WinnerSet {
    /// Builds from any collection of indices; duplicates are dropped.
    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        debug_assert!(!v.is_empty());
        WinnerSet(v)
    }

    pub(crate) fn from_mask(mask: u32) -> Self {
        WinnerSet((0..32).filter(|c| mask & (1 << c) != 0).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, c: usize) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    /// True when `c` wins however ties are resolved.
    pub fn is_only(&self, c: usize) -> bool {
        self.0 == [c]
    }

    pub fn single(&self) -> Option<usize> {
        match self.0.as_slice() {
            [c] => Some(*c),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self, profile: &Profile) -> String {
        self.0.iter().map(|&c| profile.label(c)).join(" ")
    }
}

/// One exact integer score per candidate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScoreTable(pub Vec<i64>);

impl ScoreTable {
    pub fn get(&self, c: usize) -> i64 {
        self.0[c]
    }

    pub fn winners(&self) -> WinnerSet {
        let best = self.0.iter().copied().max().expect("at least one candidate");
        WinnerSet::from_indices(self.0.iter().positions(|&s| s == best))
    }

    /// `p=48 a=45 b=45`: highest score first, declaration order among equals.
    pub fn render(&self, profile: &Profile) -> String {
        (0..self.0.len())
            .sorted_by_key(|&c| (std::cmp::Reverse(self.0[c]), c))
            .map(|c| format!("{}={}", profile.label(c), self.0[c]))
            .join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScoreProtocol {
    Borda,
    Copeland,
    Maximin,
}

impl ScoreProtocol {
    pub fn protocol(self) -> Protocol {
        match self {
            ScoreProtocol::Borda => Protocol::Borda,
            ScoreProtocol::Copeland => Protocol::Copeland,
            ScoreProtocol::Maximin => Protocol::Maximin,
        }
    }
}

impl TryFrom<Protocol> for ScoreProtocol {
    type Error = Error;

    fn try_from(p: Protocol) -> Result<Self> {
        match p {
            Protocol::Borda => Ok(ScoreProtocol::Borda),
            Protocol::Copeland => Ok(ScoreProtocol::Copeland),
            Protocol::Maximin => Ok(ScoreProtocol::Maximin),
            other => Err(Error::Unsupported(format!("{other} is not a score protocol"))),
        }
    }
}

/// Borda, Copeland or Maximin scores and their argmax.
pub fn score_winners(
    protocol: ScoreProtocol,
    profile: &Profile,
    extra_votes: &[WeightedVote],
) -> Result<(ScoreTable, WinnerSet)> {
    let table = score_table(protocol, profile, extra_votes)?;
    let winners = table.winners();
    Ok((table, winners))
}

pub fn score_table(protocol: ScoreProtocol, profile: &Profile, extra_votes: &[WeightedVote]) -> Result<ScoreTable> {
    let m = profile.m();
    Ok(match protocol {
        ScoreProtocol::Borda => {
            profile.total_with(extra_votes)?;
            let votes = profile.fixed_votes().iter().chain(extra_votes);
            ScoreTable(borda_scores(m, votes.map(|v| (v.order.ranking(), v.weight)))?)
        }
        ScoreProtocol::Copeland => ScoreTable(copeland_scores(&pairwise_matrix(profile, extra_votes)?)),
        ScoreProtocol::Maximin => ScoreTable(maximin_scores(&pairwise_matrix(profile, extra_votes)?)),
    })
}

pub(crate) fn borda_scores<'a>(m: usize, votes: impl IntoIterator<Item = (&'a [usize], Weight)>) -> Result<Vec<i64>> {
    let mut scores = vec![0i64; m];
    for (ranking, weight) in votes {
        for (rank, &c) in ranking.iter().enumerate() {
            let points = weight
                .checked_mul((m - 1 - rank) as Weight)
                .and_then(|p| i64::try_from(p).ok())
                .ok_or(Error::Overflow)?;
            scores[c] = scores[c].checked_add(points).ok_or(Error::Overflow)?;
        }
    }
    Ok(scores)
}

/// Pairwise wins minus pairwise losses; draws count for neither side.
pub(crate) fn copeland_scores(matrix: &PairwiseMatrix) -> Vec<i64> {
    let m = matrix.m();
    (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i)
                .map(|j| match matrix.get(i, j).cmp(&matrix.get(j, i)) {
                    std::cmp::Ordering::Greater => 1,
                    std::cmp::Ordering::Less => -1,
                    std::cmp::Ordering::Equal => 0,
                })
                .sum()
        })
        .collect()
}

/// Worst pairwise support. A lone candidate scores 0.
pub(crate) fn maximin_scores(matrix: &PairwiseMatrix) -> Vec<i64> {
    let m = matrix.m();
    (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i)
                .map(|j| matrix.get(i, j) as i64)
                .min()
                .unwrap_or(0)
        })
        .collect()
}

/// STV with every minimum-score candidate explored as the one to drop.
pub fn stv_winners(profile: &Profile, extra_votes: &[WeightedVote]) -> Result<WinnerSet> {
    profile.total_with(extra_votes)?;
    let votes: Vec<(&[usize], Weight)> = profile
        .fixed_votes()
        .iter()
        .chain(extra_votes)
        .map(|v| (v.order.ranking(), v.weight))
        .collect();
    Ok(stv::winners(profile.m(), &votes))
}

/// Evaluates the knockout tree bottom-up; a pairwise tie lets either side
/// advance.
pub fn cup_winners(profile: &Profile, extra_votes: &[WeightedVote], schedule: &CupSchedule) -> Result<WinnerSet> {
    if schedule.m() != profile.m() {
        return Err(Error::InvalidSchedule(format!(
            "schedule has {} leaves but the election has {} candidates",
            schedule.m(),
            profile.m()
        )));
    }
    let matrix = pairwise_matrix(profile, extra_votes)?;
    Ok(schedule.winners(&matrix))
}

/// A deterministic winner-determination rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Borda,
    Copeland,
    Maximin,
    Stv,
    Cup(CupSchedule),
}

impl Rule {
    /// Randomized cup has no single winner set and is rejected.
    pub fn from_protocol(protocol: Protocol, schedule: Option<CupSchedule>) -> Result<Rule> {
        match (protocol, schedule) {
            (Protocol::Borda, None) => Ok(Rule::Borda),
            (Protocol::Copeland, None) => Ok(Rule::Copeland),
            (Protocol::Maximin, None) => Ok(Rule::Maximin),
            (Protocol::Stv, None) => Ok(Rule::Stv),
            (Protocol::Cup, Some(s)) => Ok(Rule::Cup(s)),
            (Protocol::Cup, None) => Err(Error::InvalidSchedule("cup needs a schedule".into())),
            (Protocol::RandomizedCup, _) => Err(Error::Unsupported(
                "randomized-cup has a winner distribution, not a winner set".into(),
            )),
            (p, Some(_)) => Err(Error::InvalidSchedule(format!("{p} does not take a schedule"))),
        }
    }

    pub fn protocol(&self) -> Protocol {
        match self {
            Rule::Borda => Protocol::Borda,
            Rule::Copeland => Protocol::Copeland,
            Rule::Maximin => Protocol::Maximin,
            Rule::Stv => Protocol::Stv,
            Rule::Cup(_) => Protocol::Cup,
        }
    }

    pub fn score_protocol(&self) -> Option<ScoreProtocol> {
        ScoreProtocol::try_from(self.protocol()).ok()
    }

    pub fn winners(&self, profile: &Profile, extra_votes: &[WeightedVote]) -> Result<WinnerSet> {
        match self {
            Rule::Borda => Ok(score_winners(ScoreProtocol::Borda, profile, extra_votes)?.1),
            Rule::Copeland => Ok(score_winners(ScoreProtocol::Copeland, profile, extra_votes)?.1),
            Rule::Maximin => Ok(score_winners(ScoreProtocol::Maximin, profile, extra_votes)?.1),
            Rule::Stv => stv_winners(profile, extra_votes),
            Rule::Cup(schedule) => cup_winners(profile, extra_votes, schedule),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.protocol().fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballots::VoteOrder;

    fn vote(m: usize, r: &[usize], w: Weight) -> WeightedVote {
        WeightedVote::new(VoteOrder::new(r.to_vec(), m).unwrap(), w)
    }

    fn cycle() -> Profile {
        Profile::new(
            ["a", "b", "c"],
            vec![vote(3, &[0, 1, 2], 1), vote(3, &[1, 2, 0], 1), vote(3, &[2, 0, 1], 1)],
        )
        .unwrap()
    }

    #[test]
    fn borda_gadget_witness_scores() {
        // a b p, K = 2: eleven of each S vote, coalition halves {1,1} | {2}.
        let profile = Profile::new(
            ["a", "b", "p"],
            vec![
                vote(3, &[0, 1, 2], 11),
                vote(3, &[1, 0, 2], 11),
                vote(3, &[2, 0, 1], 6),
                vote(3, &[2, 0, 1], 6),
                vote(3, &[2, 1, 0], 12),
            ],
        )
        .unwrap();
        let (scores, winners) = score_winners(ScoreProtocol::Borda, &profile, &[]).unwrap();
        assert_eq!(scores.0, vec![45, 45, 48]);
        assert!(winners.is_only(2));
        assert_eq!(scores.render(&profile), "p=48 a=45 b=45");
    }

    #[test]
    fn copeland_cycle_is_a_three_way_tie() {
        let (scores, winners) = score_winners(ScoreProtocol::Copeland, &cycle(), &[]).unwrap();
        assert_eq!(scores.0, vec![0, 0, 0]);
        assert_eq!(winners.members(), &[0, 1, 2]);
    }

    #[test]
    fn maximin_gadget_witness_scores() {
        // a b c p, K = 1, coalition halves vote (p,a,b,c) and (p,b,c,a) at weight 2.
        let profile = Profile::new(
            ["a", "b", "c", "p"],
            vec![
                vote(4, &[0, 1, 2, 3], 6),
                vote(4, &[1, 2, 0, 3], 6),
                vote(4, &[2, 0, 1, 3], 3),
                vote(4, &[3, 2, 0, 1], 5),
            ],
        )
        .unwrap();
        let extra = [vote(4, &[3, 0, 1, 2], 2), vote(4, &[3, 1, 2, 0], 2)];
        let (scores, winners) = score_winners(ScoreProtocol::Maximin, &profile, &extra).unwrap();
        assert_eq!(scores.0, vec![8, 8, 8, 9]);
        assert!(winners.is_only(3));
    }

    #[test]
    fn stv_gadget_round_one() {
        // a b p, K = 1.
        let profile = Profile::new(
            ["a", "b", "p"],
            vec![vote(3, &[1, 2, 0], 5), vote(3, &[0, 1, 2], 4), vote(3, &[2, 0, 1], 4)],
        )
        .unwrap();
        let extra = [vote(3, &[0, 2, 1], 2), vote(3, &[2, 0, 1], 2)];
        let votes: Vec<_> = profile
            .fixed_votes()
            .iter()
            .chain(&extra)
            .map(|v| (v.order.ranking(), v.weight))
            .collect();
        assert_eq!(stv::plurality(3, &votes, 0b111), vec![6, 5, 6]);
        assert!(stv_winners(&profile, &extra).unwrap().is_only(2));
    }

    #[test]
    fn stv_degenerate_and_tied() {
        let one = Profile::new(["x"], vec![]).unwrap();
        assert!(stv_winners(&one, &[]).unwrap().is_only(0));
        let two = Profile::new(["x", "y"], vec![vote(2, &[0, 1], 3), vote(2, &[1, 0], 3)]).unwrap();
        assert_eq!(stv_winners(&two, &[]).unwrap().members(), &[0, 1]);
    }

    #[test]
    fn cup_on_weighted_cycle() {
        // a beats b, b beats c, c beats a, each 2-1.
        let profile = cycle();
        let schedule = CupSchedule::parse("((b c) a)", &profile).unwrap();
        assert!(cup_winners(&profile, &[], &schedule).unwrap().is_only(0));
    }

    #[test]
    fn cup_tie_branches() {
        let profile = Profile::new(["x", "y"], vec![vote(2, &[0, 1], 1), vote(2, &[1, 0], 1)]).unwrap();
        let schedule = CupSchedule::parse("(x y)", &profile).unwrap();
        assert_eq!(cup_winners(&profile, &[], &schedule).unwrap().members(), &[0, 1]);
    }

    #[test]
    fn cup_rejects_mismatched_schedule() {
        let profile = cycle();
        let schedule = CupSchedule::canonical(&[0, 1]).unwrap();
        assert!(cup_winners(&profile, &[], &schedule).is_err());
    }

    #[test]
    fn rule_from_protocol() {
        assert_eq!(Rule::from_protocol(Protocol::Stv, None).unwrap(), Rule::Stv);
        assert!(Rule::from_protocol(Protocol::Cup, None).is_err());
        assert!(Rule::from_protocol(Protocol::RandomizedCup, None).is_err());
    }
}
