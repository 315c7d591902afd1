//! Degrees of anonymity: the count-based degree, Edman's permanent degree,
//! Gierlichs' class-entropy degree, and the Serjantov-Danezis / Diaz entropy
//! metrics.
//!
//! Ratio metrics use natural logs internally; the base cancels. Entropy
//! metrics are in bits.

use crate::bigcount::BigCount;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::symfunc::{count_assignments, enumerate_tables};
use crate::types::{AnonymityReport, ContingencyTable, TrafficProfile};

/// Tolerance on `sum(p) = 1` for entropy inputs.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// Hard ceiling on permanent size; beyond this the 128-bit accumulator in
/// the subset sum could overflow.
pub const PERMANENT_MAX_N: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    E,
    Two,
    Ten,
}

impl LogBase {
    pub fn log(self, x: &BigCount) -> f64 {
        let ln = x.ln();
        match self {
            LogBase::E => ln,
            LogBase::Two => ln / std::f64::consts::LN_2,
            LogBase::Ten => ln / std::f64::consts::LN_10,
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" => Ok(LogBase::E),
            "2" => Ok(LogBase::Two),
            "10" => Ok(LogBase::Ten),
            other => Err(Error::parse(None, format!("log base must be e, 2 or 10, got {other:?}"))),
        }
    }
}

/// `log(count) / log(n!)` in the given base; 0 when `n <= 1`.
pub fn count_degree(count: &BigCount, n: u32, base: LogBase) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    base.log(count) / base.log(&BigCount::factorial(n as u64))
}

/// Count-based degree of anonymity of a round.
pub fn deg_anonymity(profile: &TrafficProfile) -> f64 {
    count_degree(&count_assignments(profile), profile.n(), LogBase::E)
}

/// Square 0-1 matrix: rows are sent messages, columns received messages.
/// Each row is stored as a column bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityMatrix {
    n: usize,
    rows: Vec<u64>,
}

impl CompatibilityMatrix {
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > 64 {
            return Err(Error::InvalidMatrix(format!("dimension {n} outside 1..=64")));
        }
        let mut masks = Vec::with_capacity(n);
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidMatrix("matrix must be square".into()));
            }
            let mut mask = 0u64;
            for (j, &a) in row.iter().enumerate() {
                match a {
                    0 => {}
                    1 => mask |= 1 << j,
                    other => return Err(Error::InvalidMatrix(format!("entry {other} is not 0 or 1"))),
                }
            }
            masks.push(mask);
        }
        Ok(CompatibilityMatrix { n, rows: masks })
    }

    /// Complete bipartite compatibility.
    pub fn all_ones(n: usize) -> Self {
        assert!((1..=64).contains(&n));
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        CompatibilityMatrix { n, rows: vec![full; n] }
    }

    pub fn identity(n: usize) -> Self {
        assert!((1..=64).contains(&n));
        CompatibilityMatrix {
            n,
            rows: (0..n).map(|i| 1u64 << i).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }
}

/// Exact permanent by inclusion-exclusion over column subsets.
pub fn permanent(m: &CompatibilityMatrix, budget: &Budget, exec: Execution) -> Result<BigCount> {
    let n = m.n;
    let limit = budget.permanent_n.min(PERMANENT_MAX_N);
    if n > limit {
        return Err(Error::budget("permanent dimension", n, limit as u64));
    }
    // per(A) = (-1)^n * sum over S of (-1)^|S| * prod_i |row_i & S|
    let subsets: u64 = 1 << n;
    let chunk_bits = n.saturating_sub(10);
    let chunks = 1usize << chunk_bits;
    let per_chunk = subsets >> chunk_bits;
    let partial = exec.map_range(chunks, |c| {
        let start = c as u64 * per_chunk;
        let mut acc: i128 = 0;
        for s in start..start + per_chunk {
            let mut prod: i128 = 1;
            for &row in &m.rows {
                prod *= (row & s).count_ones() as i128;
                if prod == 0 {
                    break;
                }
            }
            if (n as u32 - s.count_ones()).is_multiple_of(2) {
                acc += prod;
            } else {
                acc -= prod;
            }
        }
        acc
    });
    let total: i128 = partial.into_iter().sum();
    debug_assert!(total >= 0);
    Ok(BigCount::from(total as u128))
}

/// Edman et al.'s degree `log(per A) / log(n!)`, 0 for `n = 1`.
pub fn edman_degree(m: &CompatibilityMatrix, budget: &Budget, exec: Execution) -> Result<f64> {
    let per = permanent(m, budget, exec)?;
    if per.is_zero() {
        return Err(Error::NoMatching);
    }
    Ok(count_degree(&per, m.n as u32, LogBase::E))
}

/// Number of message-level matchings that induce the table: the product of
/// each sender's multinomial split times each receiver's internal orderings.
pub fn class_cardinality(t: &ContingencyTable) -> BigCount {
    let splits: BigCount = t
        .entries()
        .iter()
        .map(|row| BigCount::multinomial(&row.iter().map(|&x| x as u64).collect::<Vec<_>>()))
        .product();
    let orderings: BigCount = t.col_sums().iter().map(|&r| BigCount::factorial(r as u64)).product();
    splits * orderings
}

/// Gierlichs et al.'s degree over equivalence classes of perfect matchings,
/// for complete bipartite compatibility (so `per(A) = n!`).
pub fn gierlichs_degree(profile: &TrafficProfile, budget: &Budget) -> Result<f64> {
    let n = profile.n();
    if n <= 1 {
        return Ok(0.0);
    }
    let tables = enumerate_tables(profile, budget)?;
    let ln_total = BigCount::factorial(n as u64).ln();
    let entropy: f64 = tables
        .iter()
        .map(|t| {
            let ln_p = class_cardinality(t).ln() - ln_total;
            -ln_p.exp() * ln_p
        })
        .sum();
    Ok((entropy / ln_total).max(0.0))
}

fn check_distribution(probabilities: &[f64]) -> Result<()> {
    if probabilities.is_empty() {
        return Err(Error::NotADistribution("no probabilities".into()));
    }
    if let Some(bad) = probabilities.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::NotADistribution(format!("invalid probability {bad}")));
    }
    let sum: f64 = probabilities.iter().sum();
    if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(Error::NotADistribution(format!("probabilities sum to {sum}")));
    }
    Ok(())
}

/// Serjantov-Danezis effective anonymity set size, in bits.
pub fn sd_entropy(probabilities: &[f64]) -> Result<f64> {
    check_distribution(probabilities)?;
    let h: f64 = probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    Ok(h.max(0.0))
}

/// Diaz et al.'s entropy normalized by `log2(n)`.
pub fn diaz_degree(probabilities: &[f64]) -> Result<f64> {
    check_distribution(probabilities)?;
    if probabilities.len() < 2 {
        return Err(Error::DegenerateSystem(probabilities.len()));
    }
    Ok(sd_entropy(probabilities)? / (probabilities.len() as f64).log2())
}

/// Knobs for [`full_report`].
#[derive(Debug, Clone, Default)]
pub struct ReportConfig {
    pub budget: Budget,
    /// Per-user probabilities for the entropy metrics; uniform over senders
    /// when absent.
    pub distribution: Option<Vec<f64>>,
    pub exec: Execution,
}

/// Every metric for one profile. Metrics that cannot be computed are left
/// empty with a note rather than reported as 0.
pub fn full_report(profile: &TrafficProfile, config: &ReportConfig) -> AnonymityReport {
    let n = profile.n();
    let mut notes = Vec::new();

    let (count, gierlichs) = config.exec.join(
        || count_assignments(profile),
        || gierlichs_degree(profile, &config.budget),
    );
    let deg_a = count_degree(&count, n, LogBase::E);

    let gierlichs_deg = match gierlichs {
        Ok(d) => Some(d),
        Err(e) => {
            notes.push(format!("gierlichs: {e}"));
            None
        }
    };

    let edman_deg = if n as usize > config.budget.permanent_n.min(PERMANENT_MAX_N) {
        notes.push(format!("edman: matrix of size {n} exceeds the permanent limit"));
        None
    } else {
        match edman_degree(&CompatibilityMatrix::all_ones(n as usize), &config.budget, config.exec) {
            Ok(d) => Some(d),
            Err(e) => {
                notes.push(format!("edman: {e}"));
                None
            }
        }
    };

    let users = profile.senders().len();
    let distribution = config
        .distribution
        .clone()
        .unwrap_or_else(|| vec![1.0 / users as f64; users]);
    let (sd, diaz) = match sd_entropy(&distribution) {
        Ok(h) if distribution.len() == 1 => {
            notes.push("diaz: single candidate user, normalized entropy taken as 0".into());
            (Some(h), Some(0.0))
        }
        Ok(h) => (Some(h), diaz_degree(&distribution).ok()),
        Err(e) => {
            notes.push(format!("entropy: {e}"));
            (None, None)
        }
    };

    AnonymityReport {
        n,
        count,
        deg_a,
        edman_deg,
        gierlichs_deg,
        sd_entropy: sd,
        diaz_deg: diaz,
        notes,
    }
}
