use std::fmt;

use itertools::Itertools;

use crate::ballots::{pairwise_matrix, PairwiseMatrix, Profile, WeightedVote};
use crate::error::{Error, Result};
use crate::scalar::Probability;

use super::WinnerSet;

/// Largest field for which all `m!` leaf assignments are enumerated.
pub const MAX_RANDOMIZED_CUP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bracket {
    Leaf(usize),
    Match(Box<Bracket>, Box<Bracket>),
}

impl Bracket {
    /// Splits `s` leaves into `ceil(s/2)` on the left and `floor(s/2)` on the
    /// right, recursively, and fills them left to right.
    pub fn canonical(leaves: &[usize]) -> Bracket {
        match leaves {
            [only] => Bracket::Leaf(*only),
            _ => {
                let (l, r) = leaves.split_at(leaves.len().div_ceil(2));
                Bracket::Match(Box::new(Bracket::canonical(l)), Box::new(Bracket::canonical(r)))
            }
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Bracket::Leaf(c) => out.push(*c),
            Bracket::Match(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    fn leaf_count(&self) -> usize {
        match self {
            Bracket::Leaf(_) => 1,
            Bracket::Match(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    fn is_balanced(&self) -> bool {
        match self {
            Bracket::Leaf(_) => true,
            Bracket::Match(l, r) => {
                let (a, b) = (l.leaf_count(), r.leaf_count());
                a.abs_diff(b) <= 1 && l.is_balanced() && r.is_balanced()
            }
        }
    }

    /// Bitmask of the candidates that can come out of this subtree.
    pub(crate) fn winner_mask(&self, matrix: &PairwiseMatrix) -> u32 {
        match self {
            Bracket::Leaf(c) => 1 << c,
            Bracket::Match(l, r) => {
                let (lw, rw) = (l.winner_mask(matrix), r.winner_mask(matrix));
                let mut out = 0;
                for x in bits(lw) {
                    for y in bits(rw) {
                        let (xy, yx) = (matrix.get(x, y), matrix.get(y, x));
                        if xy >= yx {
                            out |= 1 << x;
                        }
                        if yx >= xy {
                            out |= 1 << y;
                        }
                    }
                }
                out
            }
        }
    }

    fn render(&self, labels: &[String], out: &mut String) {
        match self {
            Bracket::Leaf(c) => out.push_str(&labels[*c]),
            Bracket::Match(l, r) => {
                out.push('(');
                l.render(labels, out);
                out.push(' ');
                r.render(labels, out);
                out.push(')');
            }
        }
    }
}

pub(crate) fn bits(mask: u32) -> impl Iterator<Item = usize> + Clone {
    (0..32).filter(move |c| mask & (1 << c) != 0)
}

/// A balanced knockout tree with every candidate on exactly one leaf.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CupSchedule {
    root: Bracket,
    m: usize,
}

impl CupSchedule {
    pub fn new(root: Bracket) -> Result<Self> {
        let leaves = root.leaves();
        let m = leaves.len();
        let mut seen = vec![false; m];
        for &c in &leaves {
            if c >= m || std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidSchedule(
                    "every candidate must appear on exactly one leaf".into(),
                ));
            }
        }
        if !root.is_balanced() {
            return Err(Error::InvalidSchedule("tree is not balanced".into()));
        }
        Ok(CupSchedule { root, m })
    }

    /// The canonical tree with `leaves` assigned left to right.
    pub fn canonical(leaves: &[usize]) -> Result<Self> {
        if leaves.is_empty() {
            return Err(Error::InvalidSchedule("no candidates".into()));
        }
        CupSchedule::new(Bracket::canonical(leaves))
    }

    /// Parses nested pairs such as `((a b) (c p))` against the profile's labels.
    pub fn parse(text: &str, profile: &Profile) -> Result<Self> {
        let spaced = text.replace('(', " ( ").replace(')', " ) ");
        let mut tokens = spaced.split_whitespace().peekable();
        let root = parse_node(&mut tokens, profile)?;
        if let Some(extra) = tokens.next() {
            return Err(Error::InvalidSchedule(format!("unexpected `{extra}` after schedule")));
        }
        let schedule = CupSchedule::new(root)?;
        if schedule.m != profile.m() {
            return Err(Error::InvalidSchedule(format!(
                "schedule names {} of the {} candidates",
                schedule.m,
                profile.m()
            )));
        }
        Ok(schedule)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn root(&self) -> &Bracket {
        &self.root
    }

    pub fn leaves(&self) -> Vec<usize> {
        self.root.leaves()
    }

    pub fn winners(&self, matrix: &PairwiseMatrix) -> WinnerSet {
        WinnerSet::from_mask(self.root.winner_mask(matrix))
    }

    pub fn render(&self, labels: &[String]) -> String {
        let mut out = String::new();
        self.root.render(labels, &mut out);
        out
    }
}

fn parse_node<'a>(
    tokens: &mut std::iter::Peekable<impl Iterator<Item = &'a str>>,
    profile: &Profile,
) -> Result<Bracket> {
    match tokens.next() {
        None => Err(Error::InvalidSchedule("unexpected end of schedule".into())),
        Some("(") => {
            let left = parse_node(tokens, profile)?;
            let right = parse_node(tokens, profile)?;
            match tokens.next() {
                Some(")") => Ok(Bracket::Match(Box::new(left), Box::new(right))),
                _ => Err(Error::InvalidSchedule(
                    "each node must pair exactly two subtrees".into(),
                )),
            }
        }
        Some(")") => Err(Error::InvalidSchedule("unbalanced `)`".into())),
        Some(label) => Ok(Bracket::Leaf(profile.index_of(label)?)),
    }
}

impl fmt::Display for CupSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (0..self.m).map(|c| c.to_string()).collect();
        f.write_str(&self.render(&labels))
    }
}

/// Winner distribution of the cup when the leaf assignment is drawn
/// uniformly from all `m!` permutations of the canonical tree.
#[derive(Debug, Clone, PartialEq)]
pub struct CupDistribution<P> {
    /// Probability that each candidate is the unambiguous winner.
    pub probabilities: Vec<P>,
    /// Mass of assignments whose winner set has more than one member.
    pub ambiguous: P,
    pub counts: Vec<u64>,
    pub ambiguous_count: u64,
    pub assignments: u64,
}

impl<P: Probability> CupDistribution<P> {
    pub fn total(&self) -> P {
        self.probabilities
            .iter()
            .cloned()
            .fold(self.ambiguous.clone(), |acc, p| acc + p)
    }
}

pub fn randomized_cup_distribution<P: Probability>(
    profile: &Profile,
    extra_votes: &[WeightedVote],
) -> Result<CupDistribution<P>> {
    let m = profile.m();
    if m > MAX_RANDOMIZED_CUP {
        return Err(Error::LimitExceeded {
            what: "randomized cup candidate count",
            actual: m as u64,
            limit: MAX_RANDOMIZED_CUP as u64,
        });
    }
    let matrix = pairwise_matrix(profile, extra_votes)?;
    Ok(distribution_from_matrix(&matrix))
}

pub(crate) fn distribution_from_matrix<P: Probability>(matrix: &PairwiseMatrix) -> CupDistribution<P> {
    let m = matrix.m();
    let mut counts = vec![0u64; m];
    let mut ambiguous_count = 0u64;
    let mut assignments = 0u64;
    for leaves in (0..m).permutations(m) {
        assignments += 1;
        let mask = Bracket::canonical(&leaves).winner_mask(matrix);
        if mask.count_ones() == 1 {
            counts[mask.trailing_zeros() as usize] += 1;
        } else {
            ambiguous_count += 1;
        }
    }
    CupDistribution {
        probabilities: counts.iter().map(|&c| P::ratio(c, assignments)).collect(),
        ambiguous: P::ratio(ambiguous_count, assignments),
        counts,
        ambiguous_count,
        assignments,
    }
}
