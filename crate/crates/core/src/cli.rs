//! Command implementations behind the `mixcount` binary. Each command
//! returns data or text; the binary only parses arguments, prints and maps
//! errors to exit codes.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::bigcount::BigCount;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::metrics::{class_cardinality, count_degree, full_report, LogBase, ReportConfig};
use crate::notation::{parse_profile, render_partition};
use crate::partitions::{partitions_of, profile_pairs};
use crate::symfunc::{enumerate_tables, try_count_assignments};
use crate::types::{profile_from_observation, AnonymityReport, ContingencyTable, Partition, RoundObservation, TrafficProfile};

/// Shared command settings.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub budget: Budget,
    pub precision: usize,
    pub log_base: LogBase,
    pub exec: Execution,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            budget: Budget::default(),
            precision: 3,
            log_base: LogBase::E,
            exec: Execution::default(),
        }
    }
}

impl Settings {
    fn fmt(&self, x: f64) -> String {
        format!("{:.*}", self.precision, x)
    }
}

/// A rectangular CSV payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    fn new(header: &[&str]) -> Self {
        Csv {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_string_lossy(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    /// Parses CSV text written by [`Csv::write_to`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers()?.iter().map(str::to_string).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Csv { header, rows })
    }
}

/// `count`: exact count and degree for one profile spec.
pub fn cmd_count(spec: &str, settings: &Settings) -> Result<String> {
    let profile = parse_profile(spec)?;
    let count = try_count_assignments(&profile, settings.budget.dp_states)?;
    let deg = count_degree(&count, profile.n(), LogBase::E);
    Ok(format!("count={} deg={}", count, settings.fmt(deg)))
}

/// One row of the exhaustive pair table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub profile: TrafficProfile,
    pub count: BigCount,
    pub deg: f64,
}

fn evaluate(profiles: &[TrafficProfile], settings: &Settings) -> Result<Vec<TableRow>> {
    settings
        .exec
        .map(profiles, |p| {
            let count = try_count_assignments(p, settings.budget.dp_states)?;
            let deg = count_degree(&count, p.n(), LogBase::E);
            Ok(TableRow {
                profile: p.clone(),
                count,
                deg,
            })
        })
        .into_iter()
        .collect()
}

/// All unordered partition pairs of `n` with their counts and degrees.
pub fn table_rows(n: u32, settings: &Settings) -> Result<Vec<TableRow>> {
    evaluate(&profile_pairs(n, &settings.budget)?, settings)
}

/// `table`: CSV with columns `senders,receivers,count,deg`.
pub fn cmd_table(n: u32, settings: &Settings) -> Result<Csv> {
    let mut csv = Csv::new(&["senders", "receivers", "count", "deg"]);
    for row in table_rows(n, settings)? {
        csv.rows.push(vec![
            render_partition(row.profile.senders()),
            render_partition(row.profile.receivers()),
            row.count.to_string(),
            settings.fmt(row.deg),
        ]);
    }
    Ok(csv)
}

/// Equivalence classes of one profile with their sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassListing {
    pub profile: TrafficProfile,
    pub classes: Vec<(ContingencyTable, BigCount)>,
    pub total: BigCount,
    pub degree: f64,
}

pub fn class_listing(spec: &str, settings: &Settings) -> Result<ClassListing> {
    let profile = parse_profile(spec)?;
    let tables = enumerate_tables(&profile, &settings.budget)?;
    let classes: Vec<(ContingencyTable, BigCount)> = settings.exec.map(&tables, |t| (t.clone(), class_cardinality(t)));
    let total: BigCount = classes.iter().map(|(_, c)| c).sum();
    let n = profile.n();
    let degree = if n <= 1 {
        0.0
    } else {
        let ln_total = total.ln();
        let h: f64 = classes
            .iter()
            .map(|(_, c)| {
                let ln_p = c.ln() - ln_total;
                -ln_p.exp() * ln_p
            })
            .sum();
        (h / BigCount::factorial(n as u64).ln()).max(0.0)
    };
    Ok(ClassListing {
        profile,
        classes,
        total,
        degree,
    })
}

/// `classes`: one line per class, then the summary.
pub fn cmd_classes(spec: &str, settings: &Settings) -> Result<String> {
    let listing = class_listing(spec, settings)?;
    let ln_total = listing.total.ln();
    let mut out = String::new();
    for (i, (table, size)) in listing.classes.iter().enumerate() {
        let p = (size.ln() - ln_total).exp();
        out.push_str(&format!(
            "class {} table={} cardinality={} p={:.6}\n",
            i + 1,
            table,
            size,
            p
        ));
    }
    out.push_str(&format!("classes={}\n", listing.classes.len()));
    out.push_str(&format!("sum={}\n", listing.total));
    out.push_str(&format!("d*={}\n", settings.fmt(listing.degree)));
    Ok(out)
}

/// `compare`: every metric for one profile.
pub fn cmd_compare(spec: &str, settings: &Settings) -> Result<String> {
    let profile = parse_profile(spec)?;
    let config = ReportConfig {
        budget: settings.budget,
        distribution: None,
        exec: settings.exec,
    };
    let report = full_report(&profile, &config);
    let base = match settings.log_base {
        LogBase::E => "e",
        LogBase::Two => "2",
        LogBase::Ten => "10",
    };
    let opt = |v: Option<f64>| v.map(|x| settings.fmt(x)).unwrap_or_else(|| "absent".into());
    let mut out = format!("profile={profile}\nn={}\ncount={}\n", report.n, report.count);
    out.push_str(&format!(
        "log_count={} (base {base})\nlog_n_factorial={} (base {base})\n",
        settings.fmt(settings.log_base.log(&report.count)),
        settings.fmt(settings.log_base.log(&BigCount::factorial(report.n as u64))),
    ));
    out.push_str(&format!("deg_a={}\n", settings.fmt(report.deg_a)));
    out.push_str(&format!("edman={}\n", opt(report.edman_deg)));
    out.push_str(&format!("gierlichs={}\n", opt(report.gierlichs_deg)));
    out.push_str(&format!("sd_entropy={}\n", opt(report.sd_entropy)));
    out.push_str(&format!("diaz={}\n", opt(report.diaz_deg)));
    for note in &report.notes {
        out.push_str(&format!("note: {note}\n"));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fig1,
    Fig2,
    Fig5,
    Fig6,
    Saturation,
    Ranking,
}

impl std::str::FromStr for Experiment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "fig1" => Experiment::Fig1,
            "fig2" => Experiment::Fig2,
            "fig5" => Experiment::Fig5,
            "fig6" => Experiment::Fig6,
            "saturation" => Experiment::Saturation,
            "ranking" => Experiment::Ranking,
            other => return Err(Error::UnknownExperiment(other.to_string())),
        })
    }
}

fn mirrored(big: u32, ones: u32) -> TrafficProfile {
    let p = Partition::head_and_ones(big, ones);
    TrafficProfile::new(p.clone(), p).expect("balanced by construction")
}

/// `experiment`: the x/y series behind each figure and table of the
/// data-analysis section.
pub fn cmd_experiment(which: Experiment, settings: &Settings) -> Result<Csv> {
    let fmt = |x: f64| settings.fmt(x);
    Ok(match which {
        Experiment::Fig1 => {
            // 15 messages to 15 receivers; Alice sends `a`, the others one each.
            let profiles: Vec<TrafficProfile> = (1..=15)
                .map(|a| TrafficProfile::new(Partition::head_and_ones(a, 15 - a), Partition::singletons(15)))
                .collect::<Result<_>>()?;
            let mut csv = Csv::new(&["a", "deg"]);
            for (a, row) in (1..).zip(evaluate(&profiles, settings)?) {
                csv.rows.push(vec![a.to_string(), fmt(row.deg)]);
            }
            csv
        }
        Experiment::Fig2 => {
            // Alice plus six one-message senders; one receiver per message.
            let profiles: Vec<TrafficProfile> = (1..=13)
                .map(|a| TrafficProfile::new(Partition::head_and_ones(a, 6), Partition::singletons(a + 6)))
                .collect::<Result<_>>()?;
            let mut csv = Csv::new(&["a", "deg"]);
            for (a, row) in (1..).zip(evaluate(&profiles, settings)?) {
                csv.rows.push(vec![a.to_string(), fmt(row.deg)]);
            }
            csv
        }
        Experiment::Fig5 => {
            // k = 9p + 1 messages: Alice sends p, Bob receives p, everyone else one.
            let profiles: Vec<TrafficProfile> = (1..=9).map(|p| mirrored(p, 8 * p + 1)).collect();
            let mut csv = Csv::new(&["p", "deg"]);
            for (p, row) in (1..).zip(evaluate(&profiles, settings)?) {
                csv.rows.push(vec![p.to_string(), fmt(row.deg)]);
            }
            csv
        }
        Experiment::Fig6 => {
            let mut rows = table_rows(7, settings)?;
            rows.sort_by(|a, b| b.deg.total_cmp(&a.deg));
            let mut csv = Csv::new(&["rank", "deg", "senders", "receivers"]);
            for (rank, row) in (1..).zip(rows) {
                csv.rows.push(vec![
                    rank.to_string(),
                    fmt(row.deg),
                    render_partition(row.profile.senders()),
                    render_partition(row.profile.receivers()),
                ]);
            }
            csv
        }
        Experiment::Saturation => {
            let profiles: Vec<TrafficProfile> = (1..=10).map(|m| mirrored(m, 6)).collect();
            let mut csv = Csv::new(&["m", "count", "deg"]);
            for (m, row) in (1..).zip(evaluate(&profiles, settings)?) {
                csv.rows.push(vec![m.to_string(), row.count.to_string(), fmt(row.deg)]);
            }
            csv
        }
        Experiment::Ranking => {
            let profiles: Vec<TrafficProfile> = partitions_of(7, &settings.budget)?
                .into_iter()
                .map(|s| TrafficProfile::new(s, Partition::singletons(7)))
                .collect::<Result<_>>()?;
            let mut rows = evaluate(&profiles, settings)?;
            rows.sort_by(|a, b| b.count.cmp(&a.count));
            let mut csv = Csv::new(&["rank", "senders", "count", "deg"]);
            for (rank, row) in (1..).zip(rows) {
                csv.rows.push(vec![
                    rank.to_string(),
                    render_partition(row.profile.senders()),
                    row.count.to_string(),
                    fmt(row.deg),
                ]);
            }
            csv
        }
    })
}

/// Reads a `round,role,user,count` log into per-round observations, in
/// order of first appearance. Zero-count rows are skipped; repeated
/// (round, role, user) rows are summed.
pub fn read_observations<R: Read>(input: R) -> Result<Vec<RoundObservation>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(input);
    let mut rounds: Vec<RoundObservation> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(i + 1);
        if i == 0 {
            let header: Vec<&str> = record.iter().collect();
            if header != ["round", "role", "user", "count"] {
                return Err(Error::parse(Some(line), format!("expected header round,role,user,count, got {header:?}")));
            }
            continue;
        }
        if record.len() != 4 {
            return Err(Error::parse(Some(line), format!("expected 4 fields, got {}", record.len())));
        }
        let round = &record[0];
        if round.is_empty() {
            return Err(Error::parse(Some(line), "empty round id"));
        }
        let count: u64 = record[3]
            .parse()
            .map_err(|_| Error::parse(Some(line), format!("count {:?} is not a non-negative integer", &record[3])))?;
        let slot = *index.entry(round.to_string()).or_insert_with(|| {
            rounds.push(RoundObservation {
                round_id: round.to_string(),
                ..Default::default()
            });
            rounds.len() - 1
        });
        let obs = &mut rounds[slot];
        let side = match &record[1] {
            "send" => &mut obs.sends,
            "recv" => &mut obs.receives,
            other => return Err(Error::parse(Some(line), format!("role must be send or recv, got {other:?}"))),
        };
        if count > 0 {
            *side.entry(record[2].to_string()).or_insert(0) += count;
        }
    }
    Ok(rounds)
}

/// Report for every round (or only `round`, when given).
pub fn ingest<R: Read>(input: R, round: Option<&str>, settings: &Settings) -> Result<Vec<(String, TrafficProfile, AnonymityReport)>> {
    let observations: Vec<RoundObservation> = read_observations(input)?
        .into_iter()
        .filter(|o| round.is_none_or(|r| r == o.round_id))
        .collect();
    let profiles = observations
        .iter()
        .map(|o| Ok((o.round_id.clone(), profile_from_observation(o)?)))
        .collect::<Result<Vec<_>>>()?;
    let config = ReportConfig {
        budget: settings.budget,
        distribution: None,
        exec: Execution::Sequential,
    };
    Ok(settings.exec.map(&profiles, |(id, p)| (id.clone(), p.clone(), full_report(p, &config))))
}

pub fn ingest_csv(reports: &[(String, TrafficProfile, AnonymityReport)], settings: &Settings) -> Csv {
    let mut csv = Csv::new(&[
        "round", "senders", "receivers", "n", "count", "deg", "edman", "gierlichs", "sd_entropy", "diaz",
    ]);
    let opt = |v: Option<f64>| v.map(|x| settings.fmt(x)).unwrap_or_default();
    for (id, p, r) in reports {
        csv.rows.push(vec![
            id.clone(),
            render_partition(p.senders()),
            render_partition(p.receivers()),
            r.n.to_string(),
            r.count.to_string(),
            settings.fmt(r.deg_a),
            opt(r.edman_deg),
            opt(r.gierlichs_deg),
            opt(r.sd_entropy),
            opt(r.diaz_deg),
        ]);
    }
    csv
}

pub fn ingest_lines(reports: &[(String, TrafficProfile, AnonymityReport)], settings: &Settings) -> String {
    let opt = |v: Option<f64>| v.map(|x| settings.fmt(x)).unwrap_or_else(|| "absent".into());
    reports
        .iter()
        .map(|(id, p, r)| {
            format!(
                "round={id} profile={p} count={} deg={} edman={} gierlichs={} sd_entropy={} diaz={}\n",
                r.count,
                settings.fmt(r.deg_a),
                opt(r.edman_deg),
                opt(r.gierlichs_deg),
                opt(r.sd_entropy),
                opt(r.diaz_deg),
            )
        })
        .collect()
}
