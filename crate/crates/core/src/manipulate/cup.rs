//! Constructive manipulation of a cup with a known schedule.
//!
//! A candidate can come out of a subtree exactly when it can come out of its
//! own child subtree and strictly beat, with the whole coalition behind it,
//! someone who can come out of the sibling. The coalition then ranks every
//! candidate of the winner's half above the other half, recursively.

use crate::ballots::{pairwise_matrix, ManipulationInstance, Mode, PairwiseMatrix, VoteOrder, Weight};
use crate::error::{Error, Result};
use crate::protocols::{cup_winners, Bracket, CupSchedule, WinnerSet};

use super::{Decision, ManipulationAnswer};

/// Potential winners of one subtree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodePotentialWinners {
    /// Leaves of the subtree, left to right.
    pub leaves: Vec<usize>,
    /// Ascending candidate indices; may be empty.
    pub potential_winners: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CupManipulation {
    pub answer: ManipulationAnswer,
    /// Every node of the schedule in post-order; the root is last.
    pub nodes: Vec<NodePotentialWinners>,
}

struct Node {
    winners: u32,
    children: Option<Box<(Node, Node)>>,
}

struct Analysis<'a> {
    fixed: &'a PairwiseMatrix,
    coalition: Weight,
    report: Vec<NodePotentialWinners>,
}

impl Analysis<'_> {
    fn strictly_beats(&self, c: usize, h: usize) -> bool {
        // Fixed weights and the coalition total are range-checked, so the sum
        // fits in a u64.
        self.fixed.get(c, h) + self.coalition > self.fixed.get(h, c)
    }

    fn analyse(&mut self, bracket: &Bracket) -> Node {
        let node = match bracket {
            Bracket::Leaf(c) => Node {
                winners: 1 << c,
                children: None,
            },
            Bracket::Match(l, r) => {
                let left = self.analyse(l);
                let right = self.analyse(r);
                let mut winners = 0;
                for (own, other) in [(&left, &right), (&right, &left)] {
                    for c in bits(own.winners) {
                        if bits(other.winners).any(|h| self.strictly_beats(c, h)) {
                            winners |= 1 << c;
                        }
                    }
                }
                Node {
                    winners,
                    children: Some(Box::new((left, right))),
                }
            }
        };
        self.report.push(NodePotentialWinners {
            leaves: bracket.leaves(),
            potential_winners: bits(node.winners).collect(),
        });
        node
    }

    /// Ranking of the subtree's candidates that carries `c` through it.
    fn ranking_for(&self, node: &Node, c: usize, out: &mut Vec<usize>) {
        match &node.children {
            None => out.push(c),
            Some(children) => {
                let (left, right) = (&children.0, &children.1);
                let (own, other) = if left.winners & (1 << c) != 0 {
                    (left, right)
                } else {
                    (right, left)
                };
                let h = bits(other.winners)
                    .find(|&h| self.strictly_beats(c, h))
                    .expect("c is a potential winner of this node");
                self.ranking_for(own, c, out);
                self.ranking_for(other, h, out);
            }
        }
    }
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |c| mask & (1 << c) != 0)
}

pub fn solve_cup_ccwm(instance: &ManipulationInstance, schedule: &CupSchedule) -> Result<CupManipulation> {
    if instance.mode() != Mode::Constructive {
        return Err(Error::InvalidInstance(
            "the cup algorithm decides constructive instances".into(),
        ));
    }
    let profile = instance.profile();
    if schedule.m() != profile.m() {
        return Err(Error::InvalidSchedule("schedule does not cover the candidates".into()));
    }
    let fixed = pairwise_matrix(profile, &[])?;
    let mut analysis = Analysis {
        fixed: &fixed,
        coalition: instance.coalition_weight(),
        report: Vec::new(),
    };
    let root = analysis.analyse(schedule.root());
    let p = instance.target();
    let nodes_expanded = analysis.report.len() as u64;
    let answer = if root.winners & (1 << p) != 0 {
        let mut ranking = Vec::with_capacity(profile.m());
        analysis.ranking_for(&root, p, &mut ranking);
        let vote = VoteOrder::new(ranking, profile.m())?;
        let witness = vec![vote; instance.coalition_weights().len()];
        debug_assert!(is_sole_winner(instance, schedule, &witness, p));
        ManipulationAnswer {
            decision: Decision::Yes,
            witness: Some(witness),
            nodes_expanded,
        }
    } else {
        ManipulationAnswer {
            decision: Decision::No,
            witness: None,
            nodes_expanded,
        }
    };
    Ok(CupManipulation {
        answer,
        nodes: analysis.report,
    })
}

fn is_sole_winner(instance: &ManipulationInstance, schedule: &CupSchedule, witness: &[VoteOrder], p: usize) -> bool {
    cup_winners(instance.profile(), &instance.coalition_votes(witness), schedule)
        .map(|w: WinnerSet| w.is_only(p))
        .unwrap_or(false)
}
