//! Text notation for partitions and profiles: `"3,3,2;5,3"`, with `1^6`
//! run-length shorthand for repeated parts.

use crate::error::{Error, Result};
use crate::types::{Partition, TrafficProfile};

/// Runs at least this long are written as `v^len`.
pub const RUN_LENGTH_THRESHOLD: usize = 5;

pub fn parse_partition(s: &str) -> Result<Partition> {
    let mut counts = Vec::new();
    for item in s.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(Error::parse(None, format!("empty entry in {s:?}")));
        }
        let (value, repeat) = match item.split_once('^') {
            Some((v, r)) => (v.trim(), parse_int(r.trim(), item)?),
            None => (item, 1),
        };
        let value = parse_int(value, item)?;
        if repeat < 1 {
            return Err(Error::parse(None, format!("repeat count must be positive in {item:?}")));
        }
        if repeat > u32::MAX as i64 {
            return Err(Error::parse(None, format!("repeat count too large in {item:?}")));
        }
        counts.extend(std::iter::repeat_n(value, repeat as usize));
    }
    crate::types::canonicalize(&counts).map_err(|e| match e {
        Error::SizeBudgetExceeded { .. } => e,
        other => Error::parse(None, other.to_string()),
    })
}

fn parse_int(s: &str, ctx: &str) -> Result<i64> {
    s.parse::<i64>()
        .map_err(|_| Error::parse(None, format!("not an integer: {s:?} in {ctx:?}")))
}

/// Parses `senders;receivers`.
pub fn parse_profile(s: &str) -> Result<TrafficProfile> {
    let (senders, receivers) = s
        .split_once(';')
        .ok_or_else(|| Error::parse(None, format!("expected SENDERS;RECEIVERS, got {s:?}")))?;
    if receivers.contains(';') {
        return Err(Error::parse(None, format!("more than one ';' in {s:?}")));
    }
    let senders = parse_partition(senders)?;
    let receivers = parse_partition(receivers)?;
    if senders.n() != receivers.n() {
        return Err(Error::parse(
            None,
            format!("senders total {} but receivers total {}", senders.n(), receivers.n()),
        ));
    }
    TrafficProfile::new(senders, receivers)
}

pub fn render_partition(p: &Partition) -> String {
    let parts = p.parts();
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < parts.len() {
        let mut j = i;
        while j < parts.len() && parts[j] == parts[i] {
            j += 1;
        }
        let run = j - i;
        if run >= RUN_LENGTH_THRESHOLD {
            out.push(format!("{}^{}", parts[i], run));
        } else {
            out.extend(std::iter::repeat_n(parts[i].to_string(), run));
        }
        i = j;
    }
    out.join(",")
}

pub fn render_profile(p: &TrafficProfile) -> String {
    format!("{};{}", render_partition(p.senders()), render_partition(p.receivers()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_and_shorthand() {
        let p = parse_profile("3,3,2;5,3").unwrap();
        assert_eq!(p.senders().parts(), &[3, 3, 2]);
        assert_eq!(p.receivers().parts(), &[5, 3]);

        let p = parse_profile("5,1^6; 1^6,5").unwrap();
        assert_eq!(p.senders().parts(), &[5, 1, 1, 1, 1, 1, 1]);
        assert_eq!(p.senders(), p.receivers());
    }

    #[test]
    fn renders_canonical_with_runs() {
        let p = parse_profile("1,1,1,2,2;1,1,2,3").unwrap();
        assert_eq!(render_profile(&p), "2,2,1,1,1;3,2,1,1");
        assert_eq!(render_profile(&parse_profile("1^7;7").unwrap()), "1^7;7");
        assert_eq!(render_partition(&Partition::head_and_ones(10, 6)), "10,1^6");
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "3,3,2", "3,,2;8", "a;1", "0;0", "2;1,2", "1;1;1", "1^0;1", "-1;1"] {
            let err = parse_profile(bad).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{bad:?}: {err}");
        }
    }
}
