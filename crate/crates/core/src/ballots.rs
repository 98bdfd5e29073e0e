//! Candidates, weighted votes, profiles, the election file format, and the
//! pairwise-preference matrix.
//!
//! A vote of weight `k` counts exactly like `k` identical unit votes; every
//! routine in the crate sums weights instead of expanding them.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::protocols::CupSchedule;

pub type Weight = u64;

/// Largest admissible weight, and largest admissible sum of weights in one
/// election.
pub const MAX_WEIGHT: Weight = i64::MAX as Weight;

pub const MAX_CANDIDATES: usize = 26;
pub const MAX_LABEL_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Candidate {
    pub index: usize,
    pub label: String,
}

/// A strict total order over candidate indices, most preferred first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VoteOrder(Vec<usize>);

impl VoteOrder {
    pub fn new(ranking: Vec<usize>, m: usize) -> Result<Self> {
        if ranking.len() != m {
            return Err(Error::NotAPermutation { m });
        }
        let mut seen = vec![false; m];
        for &c in &ranking {
            if c >= m || std::mem::replace(&mut seen[c], true) {
                return Err(Error::NotAPermutation { m });
            }
        }
        Ok(VoteOrder(ranking))
    }

    /// All `m!` orders, lexicographic in the index sequence.
    pub fn all(m: usize) -> Vec<VoteOrder> {
        (0..m).permutations(m).map(VoteOrder).collect()
    }

    pub fn ranking(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top(&self) -> Option<usize> {
        self.0.first().copied()
    }

    /// `positions()[c]` is the rank of candidate `c` (0 = top).
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (rank, &c) in self.0.iter().enumerate() {
            pos[c] = rank;
        }
        pos
    }

    pub fn prefers(&self, a: usize, b: usize) -> bool {
        for &c in &self.0 {
            if c == a {
                return true;
            }
            if c == b {
                return false;
            }
        }
        false
    }

    /// Moves `candidate` up by `steps` places (saturating at the top). No
    /// other pair changes relative order.
    pub fn promote(&self, candidate: usize, steps: usize) -> VoteOrder {
        let mut ranking = self.0.clone();
        if let Some(at) = ranking.iter().position(|&c| c == candidate) {
            let to = at.saturating_sub(steps);
            ranking[to..=at].rotate_right(1);
        }
        VoteOrder(ranking)
    }

    /// Renders as `(a,b,p)`.
    pub fn display<'a>(&'a self, labels: &'a [String]) -> impl fmt::Display + 'a {
        DisplayOrder { order: self, labels }
    }
}

struct DisplayOrder<'a> {
    order: &'a VoteOrder,
    labels: &'a [String],
}

impl fmt::Display for DisplayOrder<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.order.0.iter().map(|&c| &self.labels[c]).join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedVote {
    pub order: VoteOrder,
    pub weight: Weight,
}

impl WeightedVote {
    pub fn new(order: VoteOrder, weight: Weight) -> Self {
        WeightedVote { order, weight }
    }
}

/// Sums weights, failing on overflow past [`MAX_WEIGHT`].
pub fn checked_total<I: IntoIterator<Item = Weight>>(weights: I) -> Result<Weight> {
    weights
        .into_iter()
        .try_fold(0 as Weight, |acc, w| acc.checked_add(w))
        .filter(|&t| t <= MAX_WEIGHT)
        .ok_or(Error::Overflow)
}

/// Candidates plus the fixed (already cast) weighted votes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    candidates: Vec<Candidate>,
    fixed_votes: Vec<WeightedVote>,
}

impl Profile {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>, fixed_votes: Vec<WeightedVote>) -> Result<Self> {
        let mut candidates: Vec<Candidate> = Vec::new();
        for (index, label) in labels.into_iter().enumerate() {
            let label = label.into();
            validate_label(&label)?;
            if candidates.iter().any(|c| c.label == label) {
                return Err(Error::DuplicateLabel(label));
            }
            candidates.push(Candidate { index, label });
        }
        if candidates.is_empty() {
            return Err(Error::InvalidInstance(
                "an election needs at least one candidate".into(),
            ));
        }
        if candidates.len() > MAX_CANDIDATES {
            return Err(Error::LimitExceeded {
                what: "candidate count",
                actual: candidates.len() as u64,
                limit: MAX_CANDIDATES as u64,
            });
        }
        let m = candidates.len();
        for vote in &fixed_votes {
            if vote.order.len() != m {
                return Err(Error::NotAPermutation { m });
            }
        }
        checked_total(fixed_votes.iter().map(|v| v.weight))?;
        Ok(Profile {
            candidates,
            fixed_votes,
        })
    }

    pub fn m(&self) -> usize {
        self.candidates.len()
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn labels(&self) -> Vec<String> {
        self.candidates.iter().map(|c| c.label.clone()).collect()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.candidates[index].label
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.candidates
            .iter()
            .position(|c| c.label == label)
            .ok_or_else(|| Error::UnknownCandidate(label.to_string()))
    }

    pub fn fixed_votes(&self) -> &[WeightedVote] {
        &self.fixed_votes
    }

    pub fn fixed_weight(&self) -> Weight {
        // Checked at construction.
        self.fixed_votes.iter().map(|v| v.weight).sum()
    }

    /// Parses `a > b > c` against this profile's labels.
    pub fn parse_order(&self, text: &str) -> Result<VoteOrder> {
        let ranking = text
            .split('>')
            .map(|l| self.index_of(l.trim()))
            .collect::<Result<Vec<_>>>()?;
        VoteOrder::new(ranking, self.m())
    }

    /// Checks that the combined weight of the fixed votes and `extra` stays
    /// within range and that every extra vote ranks this candidate set.
    pub fn total_with(&self, extra: &[WeightedVote]) -> Result<Weight> {
        for vote in extra {
            if vote.order.len() != self.m() {
                return Err(Error::NotAPermutation { m: self.m() });
            }
        }
        checked_total(self.fixed_votes.iter().chain(extra).map(|v| v.weight))
    }
}

fn validate_label(label: &str) -> Result<()> {
    if label.is_empty() || label.len() > MAX_LABEL_LEN || !label.bytes().all(|b| b.is_ascii_alphanumeric()) {
        return Err(Error::InvalidLabel(label.to_string()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Constructive,
    Destructive,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Constructive => "constructive",
            Mode::Destructive => "destructive",
        })
    }
}

/// A profile, the weights of the still-open coalition votes, and what the
/// coalition wants: `target` is the preferred candidate when constructive and
/// the hated one when destructive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationInstance {
    profile: Profile,
    coalition_weights: Vec<Weight>,
    mode: Mode,
    target: usize,
}

impl ManipulationInstance {
    pub fn new(profile: Profile, coalition_weights: Vec<Weight>, mode: Mode, target: usize) -> Result<Self> {
        if target >= profile.m() {
            return Err(Error::InvalidInstance(format!(
                "target index {target} out of range for {} candidates",
                profile.m()
            )));
        }
        checked_total(std::iter::once(profile.fixed_weight()).chain(coalition_weights.iter().copied()))?;
        Ok(ManipulationInstance {
            profile,
            coalition_weights,
            mode,
            target,
        })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn coalition_weights(&self) -> &[Weight] {
        &self.coalition_weights
    }

    pub fn coalition_weight(&self) -> Weight {
        self.coalition_weights.iter().sum()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Fixed plus coalition weight.
    pub fn total_weight(&self) -> Weight {
        self.profile.fixed_weight() + self.coalition_weight()
    }

    pub fn with_target(&self, mode: Mode, target: usize) -> Result<Self> {
        ManipulationInstance::new(self.profile.clone(), self.coalition_weights.clone(), mode, target)
    }

    /// Pairs each coalition weight with a cast order.
    pub fn coalition_votes(&self, orders: &[VoteOrder]) -> Vec<WeightedVote> {
        self.coalition_weights
            .iter()
            .zip(orders)
            .map(|(&w, o)| WeightedVote::new(o.clone(), w))
            .collect()
    }
}

/// `(i, j)` holds the total weight of votes ranking `i` above `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairwiseMatrix {
    m: usize,
    cells: Vec<Weight>,
}

impl PairwiseMatrix {
    pub fn zeros(m: usize) -> Self {
        PairwiseMatrix {
            m,
            cells: vec![0; m * m],
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> Weight {
        self.cells[i * self.m + j]
    }

    /// Adds `extra` (row-major, `m * m` entries) cell by cell.
    pub(crate) fn plus_cells(&self, extra: &[Weight]) -> Result<PairwiseMatrix> {
        debug_assert_eq!(extra.len(), self.cells.len());
        let cells = self
            .cells
            .iter()
            .zip(extra)
            .map(|(a, b)| a.checked_add(*b).filter(|&v| v <= MAX_WEIGHT).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(PairwiseMatrix { m: self.m, cells })
    }

    pub fn add_vote(&mut self, order: &VoteOrder, weight: Weight) -> Result<()> {
        let ranking = order.ranking();
        for (k, &hi) in ranking.iter().enumerate() {
            for &lo in &ranking[k + 1..] {
                let cell = &mut self.cells[hi * self.m + lo];
                *cell = cell
                    .checked_add(weight)
                    .filter(|&v| v <= MAX_WEIGHT)
                    .ok_or(Error::Overflow)?;
            }
        }
        Ok(())
    }

    pub fn from_votes<'a>(m: usize, votes: impl IntoIterator<Item = &'a WeightedVote>) -> Result<Self> {
        let mut matrix = PairwiseMatrix::zeros(m);
        for vote in votes {
            matrix.add_vote(&vote.order, vote.weight)?;
        }
        Ok(matrix)
    }

    /// Entry-wise sum; both sides must have the same size.
    pub fn plus(&self, other: &PairwiseMatrix) -> Result<PairwiseMatrix> {
        debug_assert_eq!(self.m, other.m);
        self.plus_cells(&other.cells)
    }

    /// `i` is preferred to `j` by strictly more weight than the reverse.
    pub fn beats(&self, i: usize, j: usize) -> bool {
        self.get(i, j) > self.get(j, i)
    }

    /// Candidate with a strict pairwise majority over every other, if any.
    pub fn condorcet_winner(&self) -> Option<usize> {
        (0..self.m).find(|&i| (0..self.m).all(|j| j == i || self.beats(i, j)))
    }
}

/// Pairwise matrix over the fixed votes plus `extra_votes`.
pub fn pairwise_matrix(profile: &Profile, extra_votes: &[WeightedVote]) -> Result<PairwiseMatrix> {
    profile.total_with(extra_votes)?;
    PairwiseMatrix::from_votes(profile.m(), profile.fixed_votes().iter().chain(extra_votes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Protocol {
    Borda,
    Copeland,
    Maximin,
    Stv,
    Cup,
    RandomizedCup,
}

impl Protocol {
    pub const ALL: [Protocol; 6] = [
        Protocol::Borda,
        Protocol::Copeland,
        Protocol::Maximin,
        Protocol::Stv,
        Protocol::Cup,
        Protocol::RandomizedCup,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Borda => "borda",
            Protocol::Copeland => "copeland",
            Protocol::Maximin => "maximin",
            Protocol::Stv => "stv",
            Protocol::Cup => "cup",
            Protocol::RandomizedCup => "randomized-cup",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownProtocol(s.to_string()))
    }
}

/// One parsed election document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElectionFile {
    pub protocol: Option<Protocol>,
    pub schedule: Option<CupSchedule>,
    pub instance: ManipulationInstance,
}

/// Parses the line-oriented election format:
///
/// ```text
/// protocol: borda|copeland|maximin|stv|cup|randomized-cup
/// candidates: a b p
/// schedule: ((a b) p)          # cup only
/// fixed: 5 : b > p > a
/// coalition: 2
/// target: constructive p       # optional
/// ```
///
/// Without a `target:` line the instance is constructive for the candidate
/// labelled `p`, or for the last declared candidate if there is none.
pub fn parse_election(text: &str) -> Result<ElectionFile> {
    let lines: Vec<(usize, &str, &str)> = text
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("").trim();
            (!content.is_empty()).then_some((i + 1, content))
        })
        .map(|(n, content)| match content.split_once(':') {
            Some((key, rest)) => Ok((n, key.trim(), rest.trim())),
            None => Err(Error::Syntax(format!("expected `key: value`, got `{content}`")).at_line(n)),
        })
        .collect::<Result<_>>()?;

    let mut candidate_lines = lines.iter().filter(|(_, k, _)| *k == "candidates");
    let (cand_line, _, cand_text) = candidate_lines
        .next()
        .ok_or_else(|| Error::Syntax("missing `candidates:` line".into()))?;
    if let Some((n, _, _)) = candidate_lines.next() {
        return Err(Error::Syntax("more than one `candidates:` line".into()).at_line(*n));
    }
    let labels: Vec<&str> = cand_text.split_whitespace().collect();
    let skeleton = Profile::new(labels.iter().copied(), Vec::new()).map_err(|e| e.at_line(*cand_line))?;

    let mut protocol = None;
    let mut schedule_text = None;
    let mut fixed = Vec::new();
    let mut coalition = Vec::new();
    let mut target = None;
    for &(n, key, value) in &lines {
        let parsed: Result<()> = (|| {
            match key {
                "candidates" => {}
                "protocol" => {
                    if protocol.replace(value.parse::<Protocol>()?).is_some() {
                        return Err(Error::Syntax("duplicate `protocol:` line".into()));
                    }
                }
                "schedule" => {
                    if schedule_text.replace((n, value)).is_some() {
                        return Err(Error::Syntax("duplicate `schedule:` line".into()));
                    }
                }
                "fixed" => {
                    let (weight, order) = value
                        .split_once(':')
                        .ok_or_else(|| Error::Syntax("expected `fixed: <weight> : a > b > ...`".into()))?;
                    let weight = parse_weight(weight.trim())?;
                    fixed.push(WeightedVote::new(skeleton.parse_order(order)?, weight));
                }
                "coalition" => coalition.push(parse_weight(value)?),
                "target" => {
                    let (mode, label) = value
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| Error::Syntax("expected `target: constructive|destructive <label>`".into()))?;
                    let mode = match mode {
                        "constructive" => Mode::Constructive,
                        "destructive" => Mode::Destructive,
                        other => return Err(Error::Syntax(format!("unknown mode `{other}`"))),
                    };
                    if target.replace((mode, skeleton.index_of(label.trim())?)).is_some() {
                        return Err(Error::Syntax("duplicate `target:` line".into()));
                    }
                }
                other => return Err(Error::Syntax(format!("unknown key `{other}`"))),
            }
            Ok(())
        })();
        parsed.map_err(|e| e.at_line(n))?;
    }

    let schedule = match (protocol, schedule_text) {
        (Some(Protocol::Cup), None) => {
            return Err(Error::InvalidSchedule(
                "protocol `cup` requires a `schedule:` line".into(),
            ))
        }
        (Some(Protocol::Cup), Some((n, text))) | (None, Some((n, text))) => {
            Some(CupSchedule::parse(text, &skeleton).map_err(|e| e.at_line(n))?)
        }
        (Some(p), Some((n, _))) => {
            return Err(Error::InvalidSchedule(format!("`schedule:` is only valid for cup, not {p}")).at_line(n))
        }
        (_, None) => None,
    };

    let profile = Profile::new(labels, fixed)?;
    let (mode, target) = target.unwrap_or_else(|| {
        let p = profile.index_of("p").unwrap_or(profile.m() - 1);
        (Mode::Constructive, p)
    });
    let instance = ManipulationInstance::new(profile, coalition, mode, target)?;
    Ok(ElectionFile {
        protocol,
        schedule,
        instance,
    })
}

pub(crate) fn parse_weight(text: &str) -> Result<Weight> {
    if let Some(rest) = text.strip_prefix('-') {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::NegativeWeight(text.to_string()));
        }
    }
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::InvalidWeight(text.to_string()));
    }
    text.parse::<Weight>()
        .ok()
        .filter(|&w| w <= MAX_WEIGHT)
        .ok_or(Error::Overflow)
}

/// Writes an election document that [`parse_election`] reads back to the same
/// value. The `target:` line is always written.
pub fn serialize_election(file: &ElectionFile) -> String {
    use std::fmt::Write;

    let instance = &file.instance;
    let profile = instance.profile();
    let labels = profile.labels();
    let mut out = String::new();
    if let Some(protocol) = file.protocol {
        writeln!(out, "protocol: {protocol}").unwrap();
    }
    writeln!(out, "candidates: {}", labels.join(" ")).unwrap();
    if let Some(schedule) = &file.schedule {
        writeln!(out, "schedule: {}", schedule.render(&labels)).unwrap();
    }
    for vote in profile.fixed_votes() {
        let order = vote.order.ranking().iter().map(|&c| labels[c].as_str()).join(" > ");
        writeln!(out, "fixed: {} : {}", vote.weight, order).unwrap();
    }
    for w in instance.coalition_weights() {
        writeln!(out, "coalition: {w}").unwrap();
    }
    writeln!(out, "target: {} {}", instance.mode(), labels[instance.target()]).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(m: usize, r: &[usize]) -> VoteOrder {
        VoteOrder::new(r.to_vec(), m).unwrap()
    }

    #[test]
    fn parses_minimal_document() {
        let file = parse_election("candidates: a b p\nfixed: 5 : b > p > a\ncoalition: 2\n").unwrap();
        let inst = &file.instance;
        assert_eq!(inst.profile().m(), 3);
        assert_eq!(
            inst.profile().fixed_votes(),
            &[WeightedVote::new(order(3, &[1, 2, 0]), 5)]
        );
        assert_eq!(inst.coalition_weights(), &[2]);
        assert_eq!(inst.target(), 2);
        assert_eq!(inst.mode(), Mode::Constructive);
        assert_eq!(file.protocol, None);
    }

    #[test]
    fn rejects_non_permutation() {
        let err = parse_election("candidates: a b\nfixed: 1 : a > a > b\n").unwrap_err();
        assert_eq!(err.root(), &Error::NotAPermutation { m: 2 });
        let err = parse_election("candidates: a b c\nfixed: 1 : a > b\n").unwrap_err();
        assert_eq!(err.root(), &Error::NotAPermutation { m: 3 });
    }

    #[test]
    fn rejects_bad_weights() {
        let err = parse_election("candidates: a b\nfixed: -3 : a > b\n").unwrap_err();
        assert_eq!(err.root(), &Error::NegativeWeight("-3".into()));
        let err = parse_election("candidates: a b\ncoalition: 1.5\n").unwrap_err();
        assert!(matches!(err.root(), Error::InvalidWeight(_)));
        let err = parse_election("candidates: a b\ncoalition: 3/2\n").unwrap_err();
        assert!(matches!(err.root(), Error::InvalidWeight(_)));
        let err = parse_election("candidates: a b\ncoalition: 9223372036854775808\n").unwrap_err();
        assert_eq!(err.root(), &Error::Overflow);
        let big = "fixed: 9223372036854775807 : a > b\ncoalition: 1\n";
        let err = parse_election(&format!("candidates: a b\n{big}")).unwrap_err();
        assert_eq!(err.root(), &Error::Overflow);
    }

    #[test]
    fn rejects_label_and_protocol_errors() {
        let err = parse_election("candidates: a b a\n").unwrap_err();
        assert_eq!(err.root(), &Error::DuplicateLabel("a".into()));
        let err = parse_election("protocol: plurality\ncandidates: a b\n").unwrap_err();
        assert_eq!(err.root(), &Error::UnknownProtocol("plurality".into()));
        let err = parse_election("candidates: a toolonglabel\n").unwrap_err();
        assert!(matches!(err.root(), Error::InvalidLabel(_)));
    }

    #[test]
    fn schedule_must_match_protocol() {
        let err = parse_election("protocol: cup\ncandidates: a b\n").unwrap_err();
        assert!(matches!(err.root(), Error::InvalidSchedule(_)));
        let err = parse_election("protocol: borda\ncandidates: a b\nschedule: (a b)\n").unwrap_err();
        assert!(matches!(err.root(), Error::InvalidSchedule(_)));
        let err = parse_election("protocol: randomized-cup\ncandidates: a b\nschedule: (a b)\n").unwrap_err();
        assert!(matches!(err.root(), Error::InvalidSchedule(_)));
        let ok = parse_election("protocol: cup\ncandidates: a b c p\nschedule: ((a b) (c p))\n").unwrap();
        assert_eq!(ok.schedule.unwrap().leaves(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn comments_and_targets() {
        let text = "# header\nprotocol: stv # trailing\ncandidates: h a\ntarget: destructive h\n";
        let file = parse_election(text).unwrap();
        assert_eq!(file.protocol, Some(Protocol::Stv));
        assert_eq!(file.instance.mode(), Mode::Destructive);
        assert_eq!(file.instance.target(), 0);
    }

    #[test]
    fn serialization_edge_cases() {
        let text = "protocol: borda\ncandidates: a b\nfixed: 0 : b > a\ntarget: constructive a\n";
        let file = parse_election(text).unwrap();
        let out = serialize_election(&file);
        assert!(!out.contains("coalition:"));
        assert!(out.contains("fixed: 0 : b > a"));
        assert_eq!(parse_election(&out).unwrap(), file);
    }

    #[test]
    fn pairwise_counts() {
        let profile = Profile::new(
            ["a", "b", "c"],
            vec![
                WeightedVote::new(order(3, &[0, 1, 2]), 2),
                WeightedVote::new(order(3, &[2, 1, 0]), 1),
            ],
        )
        .unwrap();
        let m = pairwise_matrix(&profile, &[]).unwrap();
        assert_eq!((m.get(0, 1), m.get(1, 0), m.get(1, 2), m.get(2, 1)), (2, 1, 2, 1));
        assert_eq!(m.get(0, 0), 0);

        let empty = Profile::new(["a", "b", "c"], vec![]).unwrap();
        assert_eq!(pairwise_matrix(&empty, &[]).unwrap(), PairwiseMatrix::zeros(3));
    }

    #[test]
    fn weight_split_gives_same_matrix() {
        let o = order(3, &[1, 0, 2]);
        let heavy = Profile::new(["a", "b", "c"], vec![WeightedVote::new(o.clone(), 4)]).unwrap();
        let split = Profile::new(["a", "b", "c"], vec![WeightedVote::new(o, 1); 4]).unwrap();
        assert_eq!(
            pairwise_matrix(&heavy, &[]).unwrap(),
            pairwise_matrix(&split, &[]).unwrap()
        );
    }

    #[test]
    fn promote_keeps_other_pairs() {
        let o = order(4, &[0, 1, 2, 3]);
        assert_eq!(o.promote(3, 2).ranking(), &[0, 3, 1, 2]);
        assert_eq!(o.promote(2, 9).ranking(), &[2, 0, 1, 3]);
        assert_eq!(o.promote(0, 1), o);
    }

    #[test]
    fn all_orders_are_lexicographic() {
        let all = VoteOrder::all(3);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[5].ranking(), &[2, 1, 0]);
    }
}
