//! Run the seeded bound suite and print one line per entry.

use std::time::Instant;

use epirisk::properties::{run_suite, Suite, SuiteConfig};

fn main() -> epirisk::Result<()> {
    let start = Instant::now();
    let report = run_suite(Suite::All, SuiteConfig::default())?;
    for e in &report.entries {
        println!(
            "{:<34} {:<12} satisfied={} max_violation={:.1e} checked={} skipped={}",
            e.bound_id,
            e.package.as_deref().unwrap_or("-"),
            e.satisfied,
            e.max_violation,
            e.frames_checked,
            e.frames_skipped
        );
    }
    println!("all satisfied: {} in {:?}", report.all_satisfied(), start.elapsed());
    Ok(())
}
