//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the per-criterion lines are
//! always printed; exits non-zero if any criterion fails.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use mixcount::cli::{cmd_experiment, cmd_table, Csv, Experiment, Settings};
use mixcount::metrics::count_degree;
use mixcount::notation::parse_partition;
use mixcount::partitions::partitions_of;
use mixcount::{
    brute_force_classes, brute_force_count, class_cardinality, count_assignments, count_by_expansion, deg_anonymity,
    edman_degree, enumerate_tables, permanent, BigCount, Budget, CompatibilityMatrix, Execution, LogBase, Partition,
    TrafficProfile,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn profile(s: &[u32], r: &[u32]) -> TrafficProfile {
    TrafficProfile::from_parts(s, r).unwrap()
}

fn within_time(start: Instant, limit: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    if spent > limit {
        Err(format!("took {spent:?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

/// Every ordered (senders, receivers) pair of partitions of `n`.
fn crossed_pairs(n: u32) -> Vec<TrafficProfile> {
    let parts = partitions_of(n, &Budget::default()).unwrap();
    let mut out = Vec::new();
    for s in &parts {
        for r in &parts {
            out.push(TrafficProfile::new(s.clone(), r.clone()).unwrap());
        }
    }
    out
}

fn random_partition(rng: &mut StdRng, n: u32) -> Partition {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let p = rng.gen_range(1..=left);
        parts.push(p);
        left -= p;
    }
    Partition::from_parts(parts).unwrap()
}

fn naive_permanent(rows: &[Vec<u8>]) -> u64 {
    fn go(rows: &[Vec<u8>], row: usize, used: &mut Vec<bool>) -> u64 {
        if row == rows.len() {
            return 1;
        }
        let mut total = 0;
        for col in 0..rows.len() {
            if !used[col] && rows[row][col] == 1 {
                used[col] = true;
                total += go(rows, row + 1, used);
                used[col] = false;
            }
        }
        total
    }
    go(rows, 0, &mut vec![false; rows.len()])
}

// 1. Worked example.
fn worked_example() -> Outcome {
    let start = Instant::now();
    let p = profile(&[3, 3, 2], &[5, 3]);
    let count = count_assignments(&p);
    let deg = deg_anonymity(&p);
    within_time(start, Duration::from_secs(1))?;
    ensure!(count == BigCount::from(9u64), "count {count} != 9");
    ensure!((deg - 0.207).abs() <= 0.0005, "deg {deg} not within 0.0005 of 0.207");
    Ok(format!("count=9 deg={deg:.4}"))
}

// 2. Reference n = 7 table.
fn reference_table() -> Outcome {
    // Reference row (2,2,3; 3,4) lists 3. It is the one row allowed to
    // differ, and is settled by the brute-force oracle.
    const ANNOTATED: (&str, &str) = ("2,2,3", "3,4");
    // Reference row (1,1,1,2,2; 1,1,1,3) has receivers summing to 6. It sits
    // where (1,1,1,2,2; 1,1,1,1,3), the only pair otherwise absent, belongs.
    const TRANSCRIPTION_REPAIR: ((&str, &str), &str) = (("1,1,1,2,2", "1,1,1,3"), "1,1,1,1,3");

    let full = Settings {
        precision: 12,
        ..Settings::default()
    };
    let start = Instant::now();
    let generated = cmd_table(7, &full).map_err(|e| e.to_string())?;
    within_time(start, Duration::from_secs(10))?;
    ensure!(generated.rows.len() == 120, "{} rows, expected 120", generated.rows.len());

    let generated = Csv::parse(&generated.to_string_lossy()).map_err(|e| e.to_string())?;
    // Unordered pair key; the reference lists each pair once in either order.
    let key = |s: &str, r: &str| -> Result<String, String> {
        let s = parse_partition(s).map_err(|e| e.to_string())?;
        let r = parse_partition(r).map_err(|e| e.to_string())?;
        ensure!(s.n() == 7 && r.n() == 7, "pair {s};{r} does not have 7 messages on both sides");
        let (a, b) = if s >= r { (s, r) } else { (r, s) };
        Ok(format!("{a:?};{b:?}", a = a.parts(), b = b.parts()))
    };
    let mut ours: HashMap<String, (String, f64)> = HashMap::new();
    for r in &generated.rows {
        ours.insert(key(&r[0], &r[1])?, (r[2].clone(), r[3].parse::<f64>().unwrap()));
    }
    ensure!(ours.len() == 120, "generated table has duplicate pairs");

    let reference = Csv::parse(include_str!("fixtures/n7_reference_table.csv")).map_err(|e| e.to_string())?;
    ensure!(reference.rows.len() == 120, "reference has {} rows", reference.rows.len());

    let annotated_key = key(ANNOTATED.0, ANNOTATED.1)?;
    let mut failures = Vec::new();
    let mut annotated = String::new();
    let mut seen = std::collections::HashSet::new();
    for row in &reference.rows {
        let (s, mut r) = (row[0].as_str(), row[1].as_str());
        if (s, r) == TRANSCRIPTION_REPAIR.0 {
            r = TRANSCRIPTION_REPAIR.1;
        }
        let k = key(s, r)?;
        ensure!(seen.insert(k.clone()), "reference lists {k} twice");
        let Some((count, deg)) = ours.get(&k) else {
            failures.push(format!("{s};{r}: missing from generated table"));
            continue;
        };
        let ref_deg: f64 = row[3].parse().unwrap();
        if k == annotated_key {
            let p: TrafficProfile = format!("{s};{r}").parse().unwrap();
            let oracle = brute_force_count(&p, &Budget::default()).unwrap();
            if count != &oracle.to_string() {
                failures.push(format!("{s};{r}: engine {count} disagrees with oracle {oracle}"));
            }
            annotated = format!("{s};{r} reference {} vs oracle {oracle}", row[2]);
            continue;
        }
        if count != &row[2] {
            let p: TrafficProfile = format!("{s};{r}").parse().unwrap();
            let oracle = brute_force_count(&p, &Budget::default()).unwrap();
            failures.push(format!("{s};{r}: count {count} != reference {} (oracle {oracle})", row[2]));
        } else if (deg - ref_deg).abs() > 0.001 {
            failures.push(format!(
                "{s};{r}: deg {deg:.4} vs reference {ref_deg} (count {count} agrees; ln {count}/ln 5040 = {deg:.4})"
            ));
        }
    }
    ensure!(failures.is_empty(), "{} mismatches: {} | annotated exception {annotated}", failures.len(), failures.join("; "));
    Ok(format!("120/120 rows, annotated exception {annotated}"))
}

// 3. Two-sender class example.
fn class_example() -> Outcome {
    let start = Instant::now();
    let tables = enumerate_tables(&profile(&[2, 3], &[2, 2, 1]), &Budget::default()).map_err(|e| e.to_string())?;
    let mut sizes: Vec<u64> = tables.iter().map(|t| class_cardinality(t).to_u64().unwrap()).collect();
    within_time(start, Duration::from_secs(1))?;
    ensure!(tables.len() == 5, "{} tables", tables.len());
    let sum: u64 = sizes.iter().sum();
    sizes.sort_unstable();
    ensure!(sizes == vec![12, 12, 24, 24, 48], "cardinalities {sizes:?}");
    ensure!(sum == 120, "sum {sum}");
    Ok("5 classes {12,48,24,12,24}, sum 120".into())
}

// 4. Saturation table.
fn saturation() -> Outcome {
    let counts = [5040u64, 10440, 12840, 13290, 13326, 13327, 13327, 13327, 13327, 13327];
    let degs = [1.0, 0.873, 0.739, 0.629, 0.543, 0.475, 0.421, 0.377, 0.340, 0.310];
    for m in 1..=10u32 {
        let head = Partition::head_and_ones(m, 6);
        let p = TrafficProfile::new(head.clone(), head).unwrap();
        let c = count_assignments(&p);
        let d = deg_anonymity(&p);
        let i = m as usize - 1;
        ensure!(c == BigCount::from(counts[i]), "m={m}: count {c} != {}", counts[i]);
        ensure!((d - degs[i]).abs() <= 0.001, "m={m}: deg {d:.4} vs {}", degs[i]);
    }
    Ok("m=1..10 counts and degrees match".into())
}

// 5. Oracle equivalence for n <= 8.
fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let budget = Budget::default();
    let profiles: Vec<TrafficProfile> = (1..=8).flat_map(crossed_pairs).collect();
    let results = Execution::Parallel.map(&profiles, |p| -> Result<bool, String> {
        let dp = count_assignments(p);
        let brute = brute_force_count(p, &budget).map_err(|e| e.to_string())?;
        let tables = enumerate_tables(p, &budget).map_err(|e| e.to_string())?.len();
        ensure!(dp == brute, "{p}: dp {dp} vs brute force {brute}");
        ensure!(BigCount::from(tables as u64) == dp, "{p}: {tables} tables vs count {dp}");
        if p.senders().len() <= 4 {
            let exp = count_by_expansion(p, &budget).map_err(|e| e.to_string())?;
            ensure!(exp == dp, "{p}: expansion {exp} vs dp {dp}");
            return Ok(true);
        }
        Ok(false)
    });
    let mut expanded = 0;
    for r in results {
        expanded += r? as usize;
    }
    within_time(start, Duration::from_secs(120))?;
    Ok(format!("{} profiles agree ({expanded} also by expansion)", profiles.len()))
}

// 6. Cardinality law for n <= 7.
fn cardinality_law() -> Outcome {
    let budget = Budget::default();
    let profiles: Vec<TrafficProfile> = (1..=7).flat_map(crossed_pairs).collect();
    let results = Execution::Parallel.map(&profiles, |p| -> Result<(), String> {
        let tables = enumerate_tables(p, &budget).map_err(|e| e.to_string())?;
        let sizes: Vec<BigCount> = tables.iter().map(class_cardinality).collect();
        let total: BigCount = sizes.iter().sum();
        ensure!(total == BigCount::factorial(p.n() as u64), "{p}: sum {total} != n!");
        let brute = brute_force_classes(p, &budget).map_err(|e| e.to_string())?;
        ensure!(brute.len() == tables.len(), "{p}: {} brute classes vs {} tables", brute.len(), tables.len());
        for ((bt, bc), (t, c)) in brute.iter().zip(tables.iter().zip(&sizes)) {
            ensure!(bt == t, "{p}: table order/content differs: {bt} vs {t}");
            ensure!(bc == c, "{p}: class {t} brute {bc} vs formula {c}");
        }
        Ok(())
    });
    results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(format!("{} profiles: sums equal n!, classes match brute force", profiles.len()))
}

// 7. Closed forms and the coalescing rule.
fn closed_forms() -> Outcome {
    for n in 1..=12u32 {
        let p = TrafficProfile::new(Partition::singletons(n), Partition::singletons(n)).unwrap();
        ensure!(count_assignments(&p) == BigCount::factorial(n as u64), "1^{n};1^{n} != {n}!");
    }
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let mut coalesced = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=15u32);
        let s = random_partition(&mut rng, n);
        let ones = Partition::singletons(n);
        let c = count_assignments(&TrafficProfile::new(s.clone(), ones.clone()).unwrap());
        let denom: BigCount = s.parts().iter().map(|&x| BigCount::factorial(x as u64)).product();
        let expected = BigCount::factorial(n as u64).exact_div(&denom);
        ensure!(c == expected, "{s};1^{n}: {c} != n!/prod s_i! = {expected}");

        // Merge a one-message sender into another sender of k messages.
        let parts = s.parts();
        if let Some(one) = parts.iter().rposition(|&x| x == 1) {
            if let Some(other) = (0..parts.len()).find(|&i| i != one) {
                let k = parts[other];
                let mut merged: Vec<u32> = parts.to_vec();
                merged[other] = k + 1;
                merged.remove(one);
                let merged = Partition::from_parts(merged).unwrap();
                let after = count_assignments(&TrafficProfile::new(merged.clone(), ones).unwrap());
                ensure!(
                    after * BigCount::from(k as u64 + 1) == c,
                    "coalescing {{1,{k}}} in {s} to {merged} did not divide by {}",
                    k + 1
                );
                coalesced += 1;
            }
        }
    }
    Ok(format!("n! for n<=12, multinomial law on 200 partitions, {coalesced} coalescing checks"))
}

// 8. Permanent.
fn permanent_checks() -> Outcome {
    let budget = Budget::default();
    for n in 1..=12usize {
        let per = permanent(&CompatibilityMatrix::all_ones(n), &budget, Execution::Parallel).map_err(|e| e.to_string())?;
        ensure!(per == BigCount::factorial(n as u64), "per(J_{n}) = {per}");
    }
    let mut rng = StdRng::seed_from_u64(0x9e7_0008);
    for _ in 0..100 {
        let n = rng.gen_range(1..=7usize);
        let rows: Vec<Vec<u8>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..=1u8)).collect()).collect();
        let m = CompatibilityMatrix::from_rows(&rows).unwrap();
        let fast = permanent(&m, &budget, Execution::Sequential).map_err(|e| e.to_string())?;
        let slow = naive_permanent(&rows);
        ensure!(fast == BigCount::from(slow), "{rows:?}: ryser {fast} vs naive {slow}");
    }
    let d = edman_degree(&CompatibilityMatrix::all_ones(8), &budget, Execution::Sequential).map_err(|e| e.to_string())?;
    ensure!(d == 1.0, "edman(J_8) = {d}");
    Ok("per(J_n)=n! for n<=12, 100 random matrices agree, edman(J_8)=1".into())
}

// 9. Symmetry.
fn symmetry() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5_1009);
    let cases: Vec<TrafficProfile> = (0..500)
        .map(|_| {
            let n = rng.gen_range(1..=20u32);
            TrafficProfile::new(random_partition(&mut rng, n), random_partition(&mut rng, n)).unwrap()
        })
        .collect();
    let bad: Vec<String> = Execution::Parallel
        .map(&cases, |p| {
            let a = count_assignments(p);
            let b = count_assignments(&p.transposed());
            (a != b).then(|| format!("{p}: {a} vs {b}"))
        })
        .into_iter()
        .flatten()
        .collect();
    ensure!(bad.is_empty(), "{}", bad.join("; "));
    Ok("500 random profiles with n<=20".into())
}

// 10. Figure series.
fn figures() -> Outcome {
    let settings = Settings {
        precision: 12,
        ..Settings::default()
    };
    let series = |e: Experiment| -> Result<Vec<f64>, String> {
        let csv = cmd_experiment(e, &settings).map_err(|e| e.to_string())?;
        let csv = Csv::parse(&csv.to_string_lossy()).map_err(|e| e.to_string())?;
        let col = csv.header.iter().position(|h| h == "deg").ok_or("no deg column")?;
        Ok(csv.rows.iter().map(|r| r[col].parse().unwrap()).collect())
    };
    let lengths = [
        (Experiment::Fig1, 15),
        (Experiment::Fig2, 13),
        (Experiment::Fig5, 9),
        (Experiment::Fig6, 120),
        (Experiment::Saturation, 10),
        (Experiment::Ranking, 15),
    ];
    for (e, len) in lengths {
        let got = series(e)?.len();
        ensure!(got == len, "{e:?}: {got} rows, expected {len}");
    }
    for e in [Experiment::Fig1, Experiment::Fig2] {
        let ys = series(e)?;
        ensure!(ys[0] == 1.0, "{e:?} starts at {}", ys[0]);
        ensure!(ys.windows(2).all(|w| w[1] < w[0]), "{e:?} not strictly decreasing: {ys:?}");
    }
    let fig1 = series(Experiment::Fig1)?;
    ensure!(fig1[14] == 0.0, "fig1 a=15 gives {}", fig1[14]);
    let fig6 = series(Experiment::Fig6)?;
    ensure!(fig6[0] == 1.0 && fig6[119] == 0.0, "fig6 endpoints {} and {}", fig6[0], fig6[119]);
    ensure!(fig6.windows(2).all(|w| w[1] <= w[0]), "fig6 not sorted");
    Ok("lengths 15/13/9/120/10/15, fig1 and fig2 strictly decreasing, fig6 spans 1..0".into())
}

fn main() {
    // Keep the log-base choice honest while we are here.
    let c = BigCount::from(148u64);
    assert!((count_degree(&c, 7, LogBase::Two) - count_degree(&c, 7, LogBase::Ten)).abs() < 1e-12);

    let criteria: [Criterion; 10] = [
        ("AC1 worked example count=9 deg=0.207", worked_example),
        ("AC2 n=7 reference table", reference_table),
        ("AC3 equivalence classes of (2,3;2,2,1)", class_example),
        ("AC4 saturation table", saturation),
        ("AC5 oracle equivalence n<=8", oracle_equivalence),
        ("AC6 cardinality law n<=7", cardinality_law),
        ("AC7 closed forms and coalescing", closed_forms),
        ("AC8 permanent", permanent_checks),
        ("AC9 symmetry", symmetry),
        ("AC10 figure series", figures),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let spent = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  {name} ({spent:.2?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name} ({spent:.2?}): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
