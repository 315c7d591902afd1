//! Counting engine.
//!
//! The number of traffic assignments for senders `s` and receivers `r` is the
//! coefficient of `x1^s1 ... xk^sk` in `h_r1(x) ... h_rl(x)`, which is also
//! the number of non-negative integer matrices whose rows sum to `s` and whose
//! columns sum to `r`. [`count_assignments`] computes it directly with a
//! dynamic program over remaining sender capacities; [`homogeneous`] and
//! [`poly_multiply`] keep the literal polynomial construction around as an
//! independent cross-check for small inputs.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::bigcount::BigCount;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::types::{ContingencyTable, TrafficProfile};

/// Polynomial in `k` variables stored as exponent vector -> coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, BigCount>,
}

impl MonomialPoly {
    /// The constant polynomial `1` in `vars` variables.
    pub fn one(vars: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; vars], BigCount::one());
        MonomialPoly { vars, terms }
    }

    /// Builds a polynomial from explicit terms; zero coefficients are dropped.
    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigCount)>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != vars {
                return Err(Error::VariableCountMismatch(vars, exps.len()));
            }
            if !c.is_zero() {
                *out.entry(exps).or_insert_with(BigCount::zero) += c;
            }
        }
        Ok(MonomialPoly { vars, terms: out })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigCount)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Coefficient of the monomial with the given exponents (zero if absent).
    pub fn coefficient(&self, exps: &[u32]) -> BigCount {
        self.terms.get(exps).cloned().unwrap_or_else(BigCount::zero)
    }
}

/// `h_m(x_1..x_k)`: every monomial of total degree `m`, coefficient 1.
pub fn homogeneous(m: u32, k: usize, budget: &Budget) -> Result<MonomialPoly> {
    assert!(k >= 1, "homogeneous needs at least one variable");
    let size = BigCount::binomial(m as u64 + k as u64 - 1, k as u64 - 1);
    if size > BigCount::from(budget.poly_terms) {
        return Err(Error::budget("homogeneous polynomial terms", size, budget.poly_terms));
    }
    let mut terms = BTreeMap::new();
    let mut exps = vec![0u32; k];
    compositions(m, 0, &mut exps, &mut |e| {
        terms.insert(e.to_vec(), BigCount::one());
    });
    Ok(MonomialPoly { vars: k, terms })
}

fn compositions(rem: u32, idx: usize, exps: &mut [u32], emit: &mut impl FnMut(&[u32])) {
    if idx + 1 == exps.len() {
        exps[idx] = rem;
        emit(exps);
        return;
    }
    for v in (0..=rem).rev() {
        exps[idx] = v;
        compositions(rem - v, idx + 1, exps, emit);
    }
}

/// Distributive product with like terms collected.
pub fn poly_multiply(a: &MonomialPoly, b: &MonomialPoly, budget: &Budget) -> Result<MonomialPoly> {
    if a.vars != b.vars {
        return Err(Error::VariableCountMismatch(a.vars, b.vars));
    }
    let mut terms: BTreeMap<Vec<u32>, BigCount> = BTreeMap::new();
    for (ea, ca) in &a.terms {
        for (eb, cb) in &b.terms {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *terms.entry(e).or_insert_with(BigCount::zero) += ca * cb;
            if terms.len() as u64 > budget.poly_terms {
                return Err(Error::budget("polynomial product terms", terms.len(), budget.poly_terms));
            }
        }
    }
    Ok(MonomialPoly { vars: a.vars, terms })
}

/// Literal route: expand `h_r1 ... h_rl` in `k` variables and read off the
/// coefficient of `x^s`. Only practical for small inputs.
pub fn count_by_expansion(profile: &TrafficProfile, budget: &Budget) -> Result<BigCount> {
    let k = profile.senders().len();
    let mut acc = MonomialPoly::one(k);
    for &r in profile.receivers().parts() {
        acc = poly_multiply(&acc, &homogeneous(r, k, budget)?, budget)?;
    }
    Ok(acc.coefficient(profile.senders().parts()))
}

/// Number of sender-to-receiver volume assignments consistent with the
/// profile. Exact for any size; memory grows with the number of distinct
/// capacity multisets, see [`try_count_assignments`] for a bounded variant.
pub fn count_assignments(profile: &TrafficProfile) -> BigCount {
    try_count_assignments(profile, u64::MAX).expect("unbounded count cannot exceed its budget")
}

/// [`count_assignments`] with a cap on the number of DP states per layer.
pub fn try_count_assignments(profile: &TrafficProfile, max_states: u64) -> Result<BigCount> {
    let columns = profile.receivers().parts();
    let mut layer: HashMap<Vec<u32>, BigUint> = HashMap::new();
    layer.insert(profile.senders().parts().to_vec(), BigUint::one());

    // The last column is forced: whatever capacity is left goes to it.
    for &col in &columns[..columns.len() - 1] {
        let mut next: HashMap<Vec<u32>, BigUint> = HashMap::new();
        for (caps, ways) in &layer {
            let groups = run_lengths(caps);
            let mut new_caps = Vec::with_capacity(caps.len());
            spread(&groups, 0, col, BigUint::one(), &mut new_caps, &mut |state, weight| {
                let mut key = state.to_vec();
                key.sort_unstable_by(|a, b| b.cmp(a));
                while key.last() == Some(&0) {
                    key.pop();
                }
                *next.entry(key).or_insert_with(BigUint::zero) += weight * ways;
            });
            if next.len() as u64 > max_states {
                return Err(Error::budget("counting states", next.len(), max_states));
            }
        }
        layer = next;
    }
    Ok(BigCount::from(layer.into_values().fold(BigUint::zero(), |a, b| a + b)))
}

/// `(capacity, multiplicity)` runs of a non-increasing list.
fn run_lengths(caps: &[u32]) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::new();
    for &c in caps {
        match out.last_mut() {
            Some((v, m)) if *v == c => *m += 1,
            _ => out.push((c, 1)),
        }
    }
    out
}

/// Enumerates the ways to take `rem` messages from the capacity groups,
/// up to permutation of senders with equal capacity. Each outcome is
/// weighted by the number of sender-level choices it stands for.
fn spread(
    groups: &[(u32, u32)],
    g: usize,
    rem: u32,
    weight: BigUint,
    new_caps: &mut Vec<u32>,
    emit: &mut impl FnMut(&[u32], &BigUint),
) {
    if g == groups.len() {
        if rem == 0 {
            emit(new_caps, &weight);
        }
        return;
    }
    // Remaining capacity must be able to absorb what is left.
    let reachable: u64 = groups[g..].iter().map(|&(c, m)| c as u64 * m as u64).sum();
    if (rem as u64) > reachable {
        return;
    }
    let (cap, mult) = groups[g];
    let top = cap.min(rem);
    let mark = new_caps.len();
    within_group(groups, g, cap, top, mult, rem, weight, new_caps, emit);
    new_caps.truncate(mark);
}

/// Chooses how many senders of the current group give `amount`, for
/// `amount = top, top-1, ..., 1`; the rest of the group gives nothing.
#[allow(clippy::too_many_arguments)]
fn within_group(
    groups: &[(u32, u32)],
    g: usize,
    cap: u32,
    amount: u32,
    left: u32,
    rem: u32,
    weight: BigUint,
    new_caps: &mut Vec<u32>,
    emit: &mut impl FnMut(&[u32], &BigUint),
) {
    if amount == 0 {
        let mark = new_caps.len();
        new_caps.extend(std::iter::repeat_n(cap, left as usize));
        spread(groups, g + 1, rem, weight, new_caps, emit);
        new_caps.truncate(mark);
        return;
    }
    let most = left.min(rem / amount);
    for take in 0..=most {
        let w = if take == 0 {
            weight.clone()
        } else {
            &weight * BigCount::binomial(left as u64, take as u64).as_biguint()
        };
        let mark = new_caps.len();
        new_caps.extend(std::iter::repeat_n(cap - amount, take as usize));
        within_group(groups, g, cap, amount - 1, left - take, rem - take * amount, w, new_caps, emit);
        new_caps.truncate(mark);
    }
}

/// Every sender-by-receiver table with the profile's margins, each once, in
/// row-major lexicographic order.
pub fn enumerate_tables(profile: &TrafficProfile, budget: &Budget) -> Result<Vec<ContingencyTable>> {
    let rows = profile.senders().parts();
    let cols = profile.receivers().parts();
    let mut walker = TableWalker {
        rows,
        cols,
        entries: vec![vec![0; cols.len()]; rows.len()],
        col_rem: cols.to_vec(),
        out: Vec::new(),
        limit: budget.tables,
    };
    let rows_after: u32 = rows[1..].iter().sum();
    walker.fill(0, 0, rows[0], rows_after)?;
    Ok(walker.out)
}

struct TableWalker<'a> {
    rows: &'a [u32],
    cols: &'a [u32],
    entries: Vec<Vec<u32>>,
    col_rem: Vec<u32>,
    out: Vec<ContingencyTable>,
    limit: u64,
}

impl TableWalker<'_> {
    fn fill(&mut self, j: usize, i: usize, row_rem: u32, rows_after: u32) -> Result<()> {
        if i == self.cols.len() {
            debug_assert_eq!(row_rem, 0);
            if j + 1 == self.rows.len() {
                if self.out.len() as u64 >= self.limit {
                    return Err(Error::budget("contingency tables", format!("more than {}", self.limit), self.limit));
                }
                self.out.push(ContingencyTable::from_parts_unchecked(
                    self.entries.clone(),
                    self.rows.to_vec(),
                    self.cols.to_vec(),
                ));
                return Ok(());
            }
            let next = self.rows[j + 1];
            return self.fill(j + 1, 0, next, rows_after - next);
        }
        let cols_after: u32 = self.col_rem[i + 1..].iter().sum();
        let lo = row_rem
            .saturating_sub(cols_after)
            .max(self.col_rem[i].saturating_sub(rows_after));
        let hi = row_rem.min(self.col_rem[i]);
        for v in lo..=hi {
            self.entries[j][i] = v;
            self.col_rem[i] -= v;
            let res = self.fill(j, i + 1, row_rem - v, rows_after);
            self.col_rem[i] += v;
            res?;
        }
        self.entries[j][i] = 0;
        Ok(())
    }
}
