//! Acceptance criteria, one line per criterion. Every check is exact modulo `p^N`.

use std::time::{Duration, Instant};

use coleman::suites::{criterion, CRITERIA};

const SEED: u64 = 20_240_601;
const BUDGET: u64 = 10_000_000;

/// Wall-clock ceilings per criterion, where one is stated.
fn time_limit(index: usize) -> Option<Duration> {
    match index {
        1 => Some(Duration::from_secs(1)),
        2 => Some(Duration::from_secs(10)),
        4 => Some(Duration::from_secs(5)),
        5 => Some(Duration::from_secs(30)),
        _ => None,
    }
}

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for (k, title) in CRITERIA.iter().enumerate() {
        let index = k + 1;
        let start = Instant::now();
        let outcome = criterion(index, SEED, BUDGET);
        let elapsed = start.elapsed();
        let slow = time_limit(index).is_some_and(|limit| elapsed > limit);
        let line = match &outcome {
            Ok(rep) if rep.ok() && !slow => format!("PASS  {index:>2} {title}: {} checks, {} ms", rep.checked, elapsed.as_millis()),
            Ok(rep) if rep.ok() => format!(
                "FAIL  {index:>2} {title}: {} checks but {} ms over the limit",
                rep.checked,
                elapsed.as_millis()
            ),
            Ok(rep) => format!(
                "FAIL  {index:>2} {title}: {} of {} checks failed; first: {:?}",
                rep.failures.len(),
                rep.checked,
                rep.failures[0]
            ),
            Err(e) => format!("FAIL  {index:>2} {title}: error {e}"),
        };
        println!("{line}");
        if line.starts_with("FAIL") {
            failed.push(index);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
