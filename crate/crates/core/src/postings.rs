//! Sorted-list set operations shared by the document index and the
//! vocabulary's trigram index.
//!
//! All inputs must be strictly ascending. Outputs are strictly ascending.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

/// Intersects any number of ascending lists.
///
/// Lists are processed smallest-first so the running candidate set only
/// shrinks; each step is a two-way merge that gallops through the longer
/// list when the sizes are skewed. Returns an empty list for zero inputs;
/// callers that must distinguish "no lists" from "no matches" check first.
pub fn intersect_sorted<T: Ord + Copy>(lists: &[&[T]]) -> Vec<T> {
    if lists.is_empty() {
        return Vec::new();
    }
    let mut order: Vec<&[T]> = lists.to_vec();
    order.sort_by_key(|l| l.len());

    let mut acc: Vec<T> = order[0].to_vec();
    for other in &order[1..] {
        if acc.is_empty() {
            break;
        }
        acc = intersect_two(&acc, other);
    }
    acc
}

/// Merge-intersects `small` into `large`, switching to exponential search
/// over `large` when it is much longer than `small`.
fn intersect_two<T: Ord + Copy>(small: &[T], large: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(small.len().min(large.len()));
    if small.len() * 16 < large.len() {
        let mut base = 0usize;
        for &x in small {
            base += gallop(&large[base..], x);
            if base >= large.len() {
                break;
            }
            if large[base] == x {
                out.push(x);
                base += 1;
            }
        }
        return out;
    }

    let (mut i, mut j) = (0usize, 0usize);
    while i < small.len() && j < large.len() {
        match small[i].cmp(&large[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(small[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Index of the first element `>= target`, found by doubling then binary search.
fn gallop<T: Ord>(list: &[T], target: T) -> usize {
    let mut hi = 1usize;
    while hi < list.len() && list[hi - 1] < target {
        hi *= 2;
    }
    let lo = hi / 2;
    let hi = hi.min(list.len());
    lo + list[lo..hi].partition_point(|x| *x < target)
}

/// Unions any number of ascending lists with a heap-driven k-way merge,
/// dropping duplicates.
pub fn union_sorted<T: Ord + Copy>(lists: &[&[T]]) -> Vec<T> {
    match lists.len() {
        0 => return Vec::new(),
        1 => return lists[0].to_vec(),
        _ => {}
    }
    let total: usize = lists.iter().map(|l| l.len()).sum();
    let mut out = Vec::with_capacity(total);
    let mut heap: BinaryHeap<Reverse<(T, usize, usize)>> = lists
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(li, l)| Reverse((l[0], li, 0)))
        .collect();

    while let Some(Reverse((value, li, pos))) = heap.pop() {
        if out.last() != Some(&value) {
            out.push(value);
        }
        if let Some(&next) = lists[li].get(pos + 1) {
            heap.push(Reverse((next, li, pos + 1)));
        }
    }
    out
}
