//! Kendall's tau-b in O(n log n) (Knight's merge-sort method).

use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::classes::RankTable;
use crate::error::{Error, Result};

fn pairs(t: u64) -> u64 {
    t * t.saturating_sub(1) / 2
}

/// Sorts `v` and returns the number of strict inversions it contained.
fn count_inversions(v: &mut [f64], buf: &mut Vec<f64>) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = count_inversions(&mut v[..mid], buf) + count_inversions(&mut v[mid..], buf);
    buf.clear();
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if v[j].total_cmp(&v[i]) == Ordering::Less {
            swaps += (mid - i) as u64;
            buf.push(v[j]);
            j += 1;
        } else {
            buf.push(v[i]);
            i += 1;
        }
    }
    buf.extend_from_slice(&v[i..mid]);
    buf.extend_from_slice(&v[j..n]);
    v.copy_from_slice(buf);
    swaps
}

/// Sum of t(t-1)/2 over runs of equal adjacent values.
fn tied_pairs<T: PartialEq>(sorted: &[T]) -> u64 {
    let mut total = 0;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += pairs(run);
            run = 1;
        }
    }
    total + pairs(run)
}

/// Tie-corrected Kendall rank correlation between paired observations.
pub fn tau_b(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Config(format!(
            "tau_b needs paired samples, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::TooFewPairs(n));
    }

    let mut joint: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    joint.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let xs: Vec<f64> = joint.iter().map(|p| p.0).collect();
    let ties_x = tied_pairs(&xs);
    let ties_xy = tied_pairs(&joint);

    let mut ys: Vec<f64> = joint.iter().map(|p| p.1).collect();
    let discordant = count_inversions(&mut ys, &mut Vec::with_capacity(n));
    let ties_y = tied_pairs(&ys);

    let total = pairs(n as u64);
    let left = (total - ties_x) as f64;
    let right = (total - ties_y) as f64;
    if left == 0.0 || right == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    let numerator =
        total as f64 - ties_x as f64 - ties_y as f64 + ties_xy as f64 - 2.0 * discordant as f64;
    let denominator = if left == right { left } else { (left * right).sqrt() };
    Ok((numerator / denominator).clamp(-1.0, 1.0))
}

/// Tau-b between two class rankings, paired by class id on their average ranks.
pub fn kendall_tau(a: &RankTable, b: &RankTable) -> Result<f64> {
    let ids_a: BTreeSet<&str> = a.entries.iter().map(|e| e.class_id.as_str()).collect();
    let ids_b: BTreeSet<&str> = b.entries.iter().map(|e| e.class_id.as_str()).collect();
    if ids_a != ids_b {
        let diff = ids_a
            .symmetric_difference(&ids_b)
            .map(|s| s.to_string())
            .collect();
        return Err(Error::MismatchedClassSets(diff));
    }
    let mut ra: Vec<(&str, f64)> = a.entries.iter().map(|e| (e.class_id.as_str(), e.rank)).collect();
    let mut rb: Vec<(&str, f64)> = b.entries.iter().map(|e| (e.class_id.as_str(), e.rank)).collect();
    ra.sort_by(|p, q| p.0.cmp(q.0));
    rb.sort_by(|p, q| p.0.cmp(q.0));
    let x: Vec<f64> = ra.iter().map(|p| p.1).collect();
    let y: Vec<f64> = rb.iter().map(|p| p.1).collect();
    tau_b(&x, &y)
}
