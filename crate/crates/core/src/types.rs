//! Domain values shared by the counting engine, the metrics and the CLI.
//!
//! Everything here is an immutable value once built; only the constructors
//! check invariants.

use std::collections::BTreeMap;
use std::fmt;

use crate::bigcount::BigCount;
use crate::error::{Error, Result};

/// Multiset of positive integers, stored non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
    n: u32,
}

/// Sorts a list of message counts into canonical (non-increasing) form.
pub fn canonicalize(counts: &[i64]) -> Result<Partition> {
    if counts.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut parts = Vec::with_capacity(counts.len());
    for &c in counts {
        if c < 1 {
            return Err(Error::NonPositiveEntry(c));
        }
        let c = u32::try_from(c).map_err(|_| Error::budget("message count", c, u32::MAX as u64))?;
        parts.push(c);
    }
    Partition::from_parts(parts)
}

impl Partition {
    /// Builds a partition from parts in any order.
    pub fn from_parts(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyInput);
        }
        if parts.contains(&0) {
            return Err(Error::NonPositiveEntry(0));
        }
        let total: u64 = parts.iter().map(|&p| p as u64).sum();
        let n = u32::try_from(total).map_err(|_| Error::budget("message total", total, u32::MAX as u64))?;
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts, n })
    }

    /// `(1, 1, ..., 1)` with `n` ones.
    pub fn singletons(n: u32) -> Self {
        assert!(n >= 1);
        Partition {
            parts: vec![1; n as usize],
            n,
        }
    }

    /// `(big, 1, ..., 1)` with `ones` trailing ones.
    pub fn head_and_ones(big: u32, ones: u32) -> Self {
        let mut parts = vec![big];
        parts.extend(std::iter::repeat_n(1, ones as usize));
        Partition::from_parts(parts).expect("positive parts")
    }

    /// Wraps parts already known to be canonical.
    pub(crate) fn from_canonical(parts: Vec<u32>) -> Self {
        debug_assert!(!parts.is_empty() && parts.windows(2).all(|w| w[0] >= w[1]) && parts[parts.len() - 1] >= 1);
        let n = parts.iter().sum();
        Partition { parts, n }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of parts (users).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_singletons(&self) -> bool {
        self.parts[0] == 1
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::notation::render_partition(self))
    }
}

/// Sender and receiver message volumes of one mix round.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrafficProfile {
    senders: Partition,
    receivers: Partition,
}

impl TrafficProfile {
    pub fn new(senders: Partition, receivers: Partition) -> Result<Self> {
        if senders.n() != receivers.n() {
            return Err(Error::UnbalancedRound {
                round: String::new(),
                sent: senders.n() as u64,
                received: receivers.n() as u64,
            });
        }
        Ok(TrafficProfile { senders, receivers })
    }

    /// Convenience constructor from raw part lists.
    pub fn from_parts(senders: &[u32], receivers: &[u32]) -> Result<Self> {
        Self::new(
            Partition::from_parts(senders.to_vec())?,
            Partition::from_parts(receivers.to_vec())?,
        )
    }

    pub fn senders(&self) -> &Partition {
        &self.senders
    }

    pub fn receivers(&self) -> &Partition {
        &self.receivers
    }

    pub fn n(&self) -> u32 {
        self.senders.n()
    }

    /// Same round seen from the other side of the mix.
    pub fn transposed(&self) -> Self {
        TrafficProfile {
            senders: self.receivers.clone(),
            receivers: self.senders.clone(),
        }
    }
}

impl fmt::Display for TrafficProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.senders, self.receivers)
    }
}

impl std::str::FromStr for TrafficProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::notation::parse_profile(s)
    }
}

/// Non-negative integer matrix; row `j` is sender `j`, column `i` receiver `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContingencyTable {
    entries: Vec<Vec<u32>>,
    row_sums: Vec<u32>,
    col_sums: Vec<u32>,
}

impl ContingencyTable {
    /// Builds a table and derives its margins. Rows must be non-empty and
    /// of equal length.
    pub fn new(entries: Vec<Vec<u32>>) -> Result<Self> {
        let width = entries.first().map(Vec::len).unwrap_or(0);
        if width == 0 || entries.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidMatrix("table must be a non-empty rectangle".into()));
        }
        let row_sums = entries.iter().map(|r| r.iter().sum()).collect();
        let col_sums = (0..width).map(|i| entries.iter().map(|r| r[i]).sum()).collect();
        Ok(ContingencyTable {
            entries,
            row_sums,
            col_sums,
        })
    }

    /// Builds a table and checks it against the expected margins.
    pub fn with_margins(entries: Vec<Vec<u32>>, rows: &[u32], cols: &[u32]) -> Result<Self> {
        let t = Self::new(entries)?;
        if t.row_sums != rows || t.col_sums != cols {
            return Err(Error::InvalidMatrix(format!(
                "margins {:?}/{:?} do not match {:?}/{:?}",
                t.row_sums, t.col_sums, rows, cols
            )));
        }
        Ok(t)
    }

    pub(crate) fn from_parts_unchecked(entries: Vec<Vec<u32>>, row_sums: Vec<u32>, col_sums: Vec<u32>) -> Self {
        ContingencyTable {
            entries,
            row_sums,
            col_sums,
        }
    }

    pub fn entries(&self) -> &[Vec<u32>] {
        &self.entries
    }

    pub fn get(&self, sender: usize, receiver: usize) -> u32 {
        self.entries[sender][receiver]
    }

    pub fn row_sums(&self) -> &[u32] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[u32] {
        &self.col_sums
    }

    pub fn n(&self) -> u32 {
        self.row_sums.iter().sum()
    }
}

impl fmt::Display for ContingencyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (j, row) in self.entries.iter().enumerate() {
            if j > 0 {
                f.write_str(" / ")?;
            }
            let cells: Vec<String> = row.iter().map(u32::to_string).collect();
            f.write_str(&cells.join(" "))?;
        }
        f.write_str("]")
    }
}

/// Raw per-user traffic seen in one mix round.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoundObservation {
    pub round_id: String,
    pub sends: BTreeMap<String, u64>,
    pub receives: BTreeMap<String, u64>,
}

/// Drops user identities and keeps the sorted volumes.
pub fn profile_from_observation(obs: &RoundObservation) -> Result<TrafficProfile> {
    let sent: u64 = obs.sends.values().sum();
    let received: u64 = obs.receives.values().sum();
    if sent != received {
        return Err(Error::UnbalancedRound {
            round: obs.round_id.clone(),
            sent,
            received,
        });
    }
    let to_parts = |m: &BTreeMap<String, u64>| -> Vec<i64> {
        m.values().filter(|&&c| c > 0).map(|&c| c.min(i64::MAX as u64) as i64).collect()
    };
    let senders = canonicalize(&to_parts(&obs.sends))?;
    let receivers = canonicalize(&to_parts(&obs.receives))?;
    TrafficProfile::new(senders, receivers)
}

/// All metric values computed for one profile. Metrics that could not be
/// evaluated are `None` and the reason is kept in `notes`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnonymityReport {
    pub n: u32,
    pub count: BigCount,
    pub deg_a: f64,
    pub edman_deg: Option<f64>,
    pub gierlichs_deg: Option<f64>,
    pub sd_entropy: Option<f64>,
    pub diaz_deg: Option<f64>,
    pub notes: Vec<String>,
}
