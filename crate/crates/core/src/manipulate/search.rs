//! Depth-first search over coalition vote assignments.
//!
//! Voters are assigned vote types heaviest first. The state after `d` voters
//! is summarised by a statistic that the rule's outcome depends on
//! additively: per-type weight totals in general, or the coalition's Borda
//! points or pairwise counts when the rule only looks at those. Two partial
//! assignments with the same depth and statistic have identical futures, so
//! failed states are remembered and never re-expanded. Colluders of equal
//! weight are interchangeable, so consecutive ones take non-decreasing type
//! indices.

use std::collections::{BTreeMap, HashSet};

use crate::ballots::{PairwiseMatrix, Profile, VoteOrder, Weight};
use crate::error::{Error, Result};
use crate::protocols::{borda_scores, copeland_scores, maximin_scores, stv, Rule, ScoreTable, WinnerSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum StatKind {
    /// Borda points per candidate.
    Scores,
    /// Row-major `m * m` pairwise counts.
    Pairwise,
    /// Weight per vote type.
    TypeWeights,
}

impl StatKind {
    pub(crate) fn for_rule(rule: &Rule) -> StatKind {
        match rule {
            Rule::Borda => StatKind::Scores,
            Rule::Copeland | Rule::Maximin | Rule::Cup(_) => StatKind::Pairwise,
            Rule::Stv => StatKind::TypeWeights,
        }
    }
}

/// The vote types a coalition voter may cast and their unit contributions.
pub(crate) struct Space {
    pub(crate) m: usize,
    pub(crate) kind: StatKind,
    pub(crate) types: Vec<VoteOrder>,
    deltas: Vec<Vec<Weight>>,
}

impl Space {
    pub(crate) fn new(m: usize, kind: StatKind, types: Vec<VoteOrder>) -> Space {
        let deltas = types
            .iter()
            .enumerate()
            .map(|(t, order)| match kind {
                StatKind::Scores => {
                    let mut d = vec![0; m];
                    for (rank, &c) in order.ranking().iter().enumerate() {
                        d[c] = (m - 1 - rank) as Weight;
                    }
                    d
                }
                StatKind::Pairwise => {
                    let mut d = vec![0; m * m];
                    let r = order.ranking();
                    for (k, &hi) in r.iter().enumerate() {
                        for &lo in &r[k + 1..] {
                            d[hi * m + lo] = 1;
                        }
                    }
                    d
                }
                StatKind::TypeWeights => {
                    let mut d = vec![0; types.len()];
                    d[t] = 1;
                    d
                }
            })
            .collect();
        Space { m, kind, types, deltas }
    }

    pub(crate) fn stat_len(&self) -> usize {
        match self.kind {
            StatKind::Scores => self.m,
            StatKind::Pairwise => self.m * self.m,
            StatKind::TypeWeights => self.types.len(),
        }
    }

    fn add(&self, stat: &[Weight], t: usize, weight: Weight) -> Result<Vec<Weight>> {
        stat.iter()
            .zip(&self.deltas[t])
            .map(|(&s, &d)| {
                d.checked_mul(weight)
                    .and_then(|x| x.checked_add(s))
                    .ok_or(Error::Overflow)
            })
            .collect()
    }
}

/// Failed states remembered before the memo stops growing.
const MEMO_CAPACITY: usize = 2_000_000;

pub(crate) struct Outcome {
    /// Type index chosen for each coalition voter, in the caller's order.
    pub(crate) assignment: Option<Vec<usize>>,
    pub(crate) exhausted: bool,
    pub(crate) nodes: u64,
}

enum Step {
    Found,
    Failed,
    OutOfBudget,
}

struct Dfs<'a, F> {
    space: &'a Space,
    order: Vec<(usize, Weight)>,
    budget: u64,
    nodes: u64,
    failed: HashSet<Vec<Weight>>,
    path: Vec<usize>,
    accept: F,
}

impl<F: FnMut(&[Weight]) -> Result<bool>> Dfs<'_, F> {
    /// Smallest type the voter at `depth` may take.
    fn lower_bound(&self, depth: usize) -> usize {
        match depth.checked_sub(1) {
            Some(prev) if depth < self.order.len() && self.order[prev].1 == self.order[depth].1 => self.path[prev],
            _ => 0,
        }
    }

    fn visit(&mut self, stat: Vec<Weight>) -> Result<Step> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Ok(Step::OutOfBudget);
        }
        let depth = self.path.len();
        let lower = self.lower_bound(depth);
        let mut key = stat;
        key.extend([depth as Weight, lower as Weight]);
        if self.failed.contains(&key) {
            return Ok(Step::Failed);
        }
        key.truncate(key.len() - 2);
        let stat = key;

        if depth == self.order.len() {
            if (self.accept)(&stat)? {
                return Ok(Step::Found);
            }
        } else {
            let weight = self.order[depth].1;
            for t in lower..self.space.types.len() {
                let next = self.space.add(&stat, t, weight)?;
                self.path.push(t);
                match self.visit(next)? {
                    Step::Failed => {
                        self.path.pop();
                    }
                    done => return Ok(done),
                }
            }
        }
        if self.failed.len() < MEMO_CAPACITY {
            let mut key = stat;
            key.extend([depth as Weight, lower as Weight]);
            self.failed.insert(key);
        }
        Ok(Step::Failed)
    }
}

/// Finds the first assignment (lexicographic over voters sorted by
/// descending weight, then by index) whose statistic `accept`s.
pub(crate) fn search<F>(space: &Space, weights: &[Weight], budget: u64, accept: F) -> Result<Outcome>
where
    F: FnMut(&[Weight]) -> Result<bool>,
{
    let mut order: Vec<(usize, Weight)> = weights.iter().copied().enumerate().collect();
    order.sort_by_key(|&(i, w)| (std::cmp::Reverse(w), i));
    let mut dfs = Dfs {
        space,
        order,
        budget,
        nodes: 0,
        failed: HashSet::new(),
        path: Vec::new(),
        accept,
    };
    let step = dfs.visit(vec![0; space.stat_len()])?;
    let assignment = match step {
        Step::Found => {
            let mut out = vec![0; weights.len()];
            for (&(voter, _), &t) in dfs.order.iter().zip(&dfs.path) {
                out[voter] = t;
            }
            Some(out)
        }
        _ => None,
    };
    Ok(Outcome {
        assignment,
        exhausted: matches!(step, Step::OutOfBudget),
        nodes: dfs.nodes,
    })
}

enum Base {
    Scores(Vec<i64>),
    Matrix(PairwiseMatrix),
    Votes(Vec<(Vec<usize>, Weight)>),
}

/// Computes a rule's winner set from the fixed votes plus a coalition
/// statistic.
pub(crate) struct LeafEvaluator<'a> {
    rule: &'a Rule,
    base: Base,
}

impl<'a> LeafEvaluator<'a> {
    pub(crate) fn new(rule: &'a Rule, profile: &Profile, kind: StatKind) -> Result<Self> {
        let fixed = profile.fixed_votes();
        let base = match kind {
            StatKind::Scores => Base::Scores(borda_scores(
                profile.m(),
                fixed.iter().map(|v| (v.order.ranking(), v.weight)),
            )?),
            StatKind::Pairwise => Base::Matrix(PairwiseMatrix::from_votes(profile.m(), fixed)?),
            StatKind::TypeWeights => {
                let mut grouped: BTreeMap<&[usize], Weight> = BTreeMap::new();
                for v in fixed.iter().filter(|v| v.weight > 0) {
                    *grouped.entry(v.order.ranking()).or_default() += v.weight;
                }
                Base::Votes(grouped.into_iter().map(|(r, w)| (r.to_vec(), w)).collect())
            }
        };
        Ok(LeafEvaluator { rule, base })
    }

    pub(crate) fn winners(&self, space: &Space, stat: &[Weight]) -> Result<WinnerSet> {
        match &self.base {
            Base::Scores(base) => {
                let scores = base
                    .iter()
                    .zip(stat)
                    .map(|(&b, &s)| {
                        i64::try_from(s)
                            .ok()
                            .and_then(|s| s.checked_add(b))
                            .ok_or(Error::Overflow)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ScoreTable(scores).winners())
            }
            Base::Matrix(base) => {
                let matrix = base.plus_cells(stat)?;
                Ok(match self.rule {
                    Rule::Copeland => ScoreTable(copeland_scores(&matrix)).winners(),
                    Rule::Maximin => ScoreTable(maximin_scores(&matrix)).winners(),
                    Rule::Cup(schedule) => schedule.winners(&matrix),
                    _ => unreachable!("pairwise statistic used for {}", self.rule),
                })
            }
            Base::Votes(base) => {
                let votes: Vec<(&[usize], Weight)> = base
                    .iter()
                    .map(|(r, w)| (r.as_slice(), *w))
                    .chain(
                        stat.iter()
                            .enumerate()
                            .filter(|(_, &w)| w > 0)
                            .map(|(t, &w)| (space.types[t].ranking(), w)),
                    )
                    .collect();
                Ok(stv::winners(space.m, &votes))
            }
        }
    }
}
