//! Brute-force ground truth for small rounds.
//!
//! Nothing here calls into the counting engine; the two are meant to be
//! checked against each other.

use std::collections::BTreeMap;

use crate::bigcount::BigCount;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::types::{ContingencyTable, TrafficProfile};

/// Counts distinct ways to fill each receiver with a multiset of sender
/// labels, using label `j` exactly `s_j` times.
pub fn brute_force_count(profile: &TrafficProfile, budget: &Budget) -> Result<BigCount> {
    let n = profile.n();
    if n > budget.oracle_count_n {
        return Err(Error::budget("oracle message count", n, budget.oracle_count_n as u64));
    }
    let mut stock: Vec<u32> = profile.senders().parts().to_vec();
    let receivers = profile.receivers().parts();
    let mut found = 0u64;
    fill_receiver(receivers, 0, 0, 0, &mut stock, &mut found);
    Ok(BigCount::from(found))
}

/// Picks labels for receiver `recv` in non-decreasing order (so each
/// multiset is produced once), then moves on to the next receiver.
fn fill_receiver(receivers: &[u32], recv: usize, placed: u32, min_label: usize, stock: &mut [u32], found: &mut u64) {
    if recv == receivers.len() {
        if stock.iter().all(|&s| s == 0) {
            *found += 1;
        }
        return;
    }
    if placed == receivers[recv] {
        fill_receiver(receivers, recv + 1, 0, 0, stock, found);
        return;
    }
    for label in min_label..stock.len() {
        if stock[label] > 0 {
            stock[label] -= 1;
            fill_receiver(receivers, recv, placed + 1, label, stock, found);
            stock[label] += 1;
        }
    }
}

/// Enumerates all `n!` pairings of individual sent and received messages,
/// groups them by the sender-by-receiver table they induce, and returns each
/// table with the size of its group, in row-major lexicographic order.
pub fn brute_force_classes(profile: &TrafficProfile, budget: &Budget) -> Result<Vec<(ContingencyTable, BigCount)>> {
    let n = profile.n();
    if n > budget.oracle_classes_n {
        return Err(Error::budget("oracle matching size", n, budget.oracle_classes_n as u64));
    }
    let owner = |parts: &[u32]| -> Vec<usize> {
        parts
            .iter()
            .enumerate()
            .flat_map(|(u, &c)| std::iter::repeat_n(u, c as usize))
            .collect()
    };
    let sender_of = owner(profile.senders().parts());
    let receiver_of = owner(profile.receivers().parts());
    let k = profile.senders().len();
    let l = profile.receivers().len();

    let mut classes: BTreeMap<Vec<Vec<u32>>, u64> = BTreeMap::new();
    let mut perm: Vec<usize> = (0..n as usize).collect();
    for_each_permutation(&mut perm, &mut |p| {
        let mut t = vec![vec![0u32; l]; k];
        for (sent, &recv) in p.iter().enumerate() {
            t[sender_of[sent]][receiver_of[recv]] += 1;
        }
        *classes.entry(t).or_insert(0) += 1;
    });

    classes
        .into_iter()
        .map(|(entries, size)| {
            let t = ContingencyTable::with_margins(entries, profile.senders().parts(), profile.receivers().parts())?;
            Ok((t, BigCount::from(size)))
        })
        .collect()
}

/// Heap's algorithm.
fn for_each_permutation(items: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    let n = items.len();
    let mut c = vec![0usize; n];
    visit(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            visit(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(s: &[u32], r: &[u32]) -> TrafficProfile {
        TrafficProfile::from_parts(s, r).unwrap()
    }

    #[test]
    fn counts_by_hand() {
        let b = Budget::default();
        let c = |s: &[u32], r: &[u32]| brute_force_count(&profile(s, r), &b).unwrap().to_u64().unwrap();
        assert_eq!(c(&[3, 3, 2], &[5, 3]), 9);
        assert_eq!(c(&[1, 1], &[1, 1]), 2);
        assert_eq!(c(&[2, 2], &[2, 2]), 3);
    }

    #[test]
    fn heap_visits_every_permutation_once() {
        let mut items: Vec<usize> = (0..5).collect();
        let mut seen = std::collections::HashSet::new();
        for_each_permutation(&mut items, &mut |p| {
            assert!(seen.insert(p.to_vec()));
        });
        assert_eq!(seen.len(), 120);
    }

    #[test]
    fn classes_of_the_two_sender_example() {
        let b = Budget::default();
        let classes = brute_force_classes(&profile(&[2, 3], &[2, 2, 1]), &b).unwrap();
        let mut sizes: Vec<u64> = classes.iter().map(|(_, c)| c.to_u64().unwrap()).collect();
        assert_eq!(sizes.iter().sum::<u64>(), 120);
        sizes.sort_unstable();
        assert_eq!(sizes, vec![12, 12, 24, 24, 48]);
    }

    #[test]
    fn trivial_classes() {
        let b = Budget::default();
        let classes = brute_force_classes(&profile(&[1, 1], &[1, 1]), &b).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|(_, c)| c.is_one()));

        let classes = brute_force_classes(&profile(&[2], &[2]), &b).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].1, BigCount::from(2u64));
    }

    #[test]
    fn oracle_limits() {
        let b = Budget::default();
        let big = TrafficProfile::from_parts(&[1; 11], &[11]).unwrap();
        assert!(matches!(brute_force_count(&big, &b), Err(Error::SizeBudgetExceeded { .. })));
        let nine = TrafficProfile::from_parts(&[1; 9], &[9]).unwrap();
        assert!(matches!(brute_force_classes(&nine, &b), Err(Error::SizeBudgetExceeded { .. })));
    }
}
