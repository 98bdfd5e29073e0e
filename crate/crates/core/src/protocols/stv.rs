use std::collections::HashMap;

use crate::ballots::Weight;

use super::WinnerSet;

/// Remaining candidates are a bitmask; `MAX_CANDIDATES` keeps it in a `u32`.
pub(crate) fn winners(m: usize, votes: &[(&[usize], Weight)]) -> WinnerSet {
    let all = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    let mut memo = HashMap::new();
    WinnerSet::from_mask(eliminate(m, votes, all, &mut memo))
}

/// Weight whose highest remaining choice is each candidate. Sums stay below
/// the election total, which the callers have already range-checked.
pub(crate) fn plurality(m: usize, votes: &[(&[usize], Weight)], remaining: u32) -> Vec<Weight> {
    let mut tally = vec![0; m];
    for (ranking, weight) in votes {
        if let Some(&top) = ranking.iter().find(|&&c| remaining & (1 << c) != 0) {
            tally[top] += weight;
        }
    }
    tally
}

fn eliminate(m: usize, votes: &[(&[usize], Weight)], remaining: u32, memo: &mut HashMap<u32, u32>) -> u32 {
    if remaining.count_ones() <= 1 {
        return remaining;
    }
    if let Some(&hit) = memo.get(&remaining) {
        return hit;
    }
    let tally = plurality(m, votes, remaining);
    let alive = (0..m).filter(|&c| remaining & (1 << c) != 0);
    let lowest = alive.clone().map(|c| tally[c]).min().unwrap_or(0);
    let mut result = 0;
    for c in alive.filter(|&c| tally[c] == lowest) {
        result |= eliminate(m, votes, remaining & !(1 << c), memo);
    }
    memo.insert(remaining, result);
    result
}
