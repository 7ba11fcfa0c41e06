//! One PASS/FAIL line per acceptance criterion.
//!
//! Runs the full tier by default; set `P2GROUPS_TIER=fast` to skip the
//! exhaustive `S_9` scans. Criterion 8 is red by design: its parameter
//! grid includes `n = p = 3`, outside the coprimality the uniqueness
//! argument needs, and the counterexamples are printed on its line. Any
//! other FAIL, or a PASS on criterion 8, makes the process exit nonzero.

use p2groups::verify::{run_criterion, Tier, CRITERIA};

const KNOWN_RED: [u8; 1] = [8];

fn main() {
    let tier = match std::env::var("P2GROUPS_TIER").as_deref() {
        Ok("fast") => Tier::Fast,
        _ => Tier::Slow,
    };
    let seed = std::env::var("P2GROUPS_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(2024);
    println!("acceptance tier={tier:?} seed={seed}");
    let mut failed = Vec::new();
    let mut unexpected = Vec::new();
    for (id, _) in CRITERIA {
        let report = run_criterion(id, tier, seed).expect("known criterion");
        println!("{report}");
        if !report.pass {
            failed.push(id);
        }
        if report.pass == KNOWN_RED.contains(&id) {
            unexpected.push(id);
        }
    }
    println!("{} of {} criteria pass", CRITERIA.len() - failed.len(), CRITERIA.len());
    if !failed.is_empty() {
        println!("failing: {failed:?} (documented red: {KNOWN_RED:?})");
    }
    if !unexpected.is_empty() {
        println!("unexpected verdicts: {unexpected:?}");
        std::process::exit(1);
    }
}
