//! Integer partitions and the sender/receiver pairs built from them.

use crate::bigcount::BigCount;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::types::{Partition, TrafficProfile};

/// Partition function `p(n)` via Euler's pentagonal-number recurrence.
pub fn partition_count(n: u32) -> BigCount {
    let n = n as usize;
    let mut p: Vec<BigCount> = vec![BigCount::one()];
    for m in 1..=n {
        // Alternating signs kept as two non-negative sums.
        let mut plus = BigCount::zero();
        let mut minus = BigCount::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let target = if k % 2 == 1 { &mut plus } else { &mut minus };
            *target += &p[m - g1];
            if g2 <= m {
                *target += &p[m - g2];
            }
        }
        p.push(BigCount::from(plus.as_biguint() - minus.as_biguint()));
    }
    p.swap_remove(n)
}

fn check_budget(n: u32, budget: &Budget) -> Result<u64> {
    let count = partition_count(n);
    match count.to_u64() {
        Some(c) if c <= budget.partitions => Ok(c),
        _ => Err(Error::budget("partitions", count, budget.partitions)),
    }
}

/// All partitions of `n` in reverse-lexicographic order, starting at `(n)`
/// and ending at `(1, ..., 1)`.
pub fn partitions_of(n: u32, budget: &Budget) -> Result<Vec<Partition>> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let expected = check_budget(n, budget)?;
    let mut out = Vec::with_capacity(expected as usize);
    let mut current = vec![n];
    loop {
        out.push(Partition::from_canonical(current.clone()));
        // Rightmost part larger than 1.
        let Some(pos) = current.iter().rposition(|&x| x > 1) else {
            break;
        };
        let ones = (current.len() - pos - 1) as u32;
        let head = current[pos] - 1;
        current.truncate(pos);
        current.push(head);
        let mut rest = ones + 1;
        while rest > 0 {
            let part = head.min(rest);
            current.push(part);
            rest -= part;
        }
    }
    debug_assert_eq!(out.len() as u64, expected);
    Ok(out)
}

/// Every unordered {sender, receiver} pair of partitions of `n`, once each.
/// Pair `(i, j)` with `i <= j` in [`partitions_of`] order becomes senders
/// `i`, receivers `j`.
pub fn profile_pairs(n: u32, budget: &Budget) -> Result<Vec<TrafficProfile>> {
    let parts = partitions_of(n, budget)?;
    let pairs = parts.len() as u64 * (parts.len() as u64 + 1) / 2;
    if pairs > budget.partitions {
        return Err(Error::budget("profile pairs", pairs, budget.partitions));
    }
    let mut out = Vec::with_capacity(pairs as usize);
    for (i, s) in parts.iter().enumerate() {
        for r in &parts[i..] {
            out.push(TrafficProfile::new(s.clone(), r.clone())?);
        }
    }
    Ok(out)
}
