//! Lazy greedy covering of a weighted point set by candidate balls.
//!
//! Each round takes the ball capturing the most uncovered mass, ties going
//! to the lowest center index. Stale gains are upper bounds (coverage only
//! shrinks what is left), so a popped candidate whose refreshed gain still
//! beats the next stale entry is the true maximizer: the result equals the
//! plain greedy choice sequence.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::numeric::CompensatedSum;

/// Slack when comparing covered mass against the target `1 - δ`.
const MASS_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Candidate {
    gain: f64,
    center: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain.total_cmp(&other.gain).then_with(|| other.center.cmp(&self.center))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Returns the chosen centers, in order. `members(c, sink)` must call `sink`
/// once for every weighted point in the ball centered at `c`.
pub(crate) fn greedy_cover<F>(n_centers: usize, weights: &[f64], target: f64, members: F) -> Vec<usize>
where
    F: Fn(usize, &mut dyn FnMut(usize)) + Sync,
{
    let gain_of = |c: usize, covered: &[bool]| {
        let mut acc = CompensatedSum::default();
        members(c, &mut |j| {
            if !covered[j] {
                acc.add(weights[j]);
            }
        });
        acc.value()
    };
    let mut covered = vec![false; weights.len()];
    let initial: Vec<Candidate> =
        (0..n_centers).into_par_iter().map(|c| Candidate { gain: gain_of(c, &covered), center: c }).collect();
    let mut heap: BinaryHeap<Candidate> = initial.into_iter().filter(|c| c.gain > 0.0).collect();
    let mut chosen = Vec::new();
    let mut mass = CompensatedSum::default();
    while mass.value() < target - MASS_SLACK {
        let Some(top) = heap.pop() else { break };
        let fresh = Candidate { gain: gain_of(top.center, &covered), center: top.center };
        if fresh.gain <= 0.0 {
            continue;
        }
        if heap.peek().is_none_or(|next| fresh >= *next) {
            members(fresh.center, &mut |j| covered[j] = true);
            mass.add(fresh.gain);
            chosen.push(fresh.center);
        } else {
            heap.push(fresh);
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain greedy, recomputing every gain each round.
    fn naive(sets: &[Vec<usize>], weights: &[f64], target: f64) -> Vec<usize> {
        let mut covered = vec![false; weights.len()];
        let mut chosen = Vec::new();
        let mut mass = CompensatedSum::default();
        while mass.value() < target - MASS_SLACK {
            let mut best: Option<(f64, usize)> = None;
            for (c, s) in sets.iter().enumerate() {
                let mut acc = CompensatedSum::default();
                s.iter().filter(|&&j| !covered[j]).for_each(|&j| acc.add(weights[j]));
                let g = acc.value();
                if g > 0.0 && best.is_none_or(|(bg, _)| g > bg) {
                    best = Some((g, c));
                }
            }
            let Some((g, c)) = best else { break };
            for &j in &sets[c] {
                covered[j] = true;
            }
            mass.add(g);
            chosen.push(c);
        }
        chosen
    }

    #[test]
    fn lazy_matches_naive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.gen_range(3..25);
            // both implementations sum gains in set order
            let raw: Vec<u32> = (0..n).map(|_| rng.gen_range(1..5)).collect();
            let total: u32 = raw.iter().sum();
            let weights: Vec<f64> = raw.iter().map(|&r| r as f64 / total as f64).collect();
            let sets: Vec<Vec<usize>> = (0..n)
                .map(|c| {
                    let mut s: Vec<usize> = (0..n).filter(|&j| j == c || rng.gen_bool(0.2)).collect();
                    s.sort();
                    s
                })
                .collect();
            let target = rng.gen_range(0.3..1.0);
            let lazy = greedy_cover(n, &weights, target, |c, sink| sets[c].iter().for_each(|&j| sink(j)));
            assert_eq!(lazy, naive(&sets, &weights, target));
        }
    }
}
