//! Runs every scripted reproduction and prints one line per check, the same
//! content as `ua repro <id>`.
//!
//!     cargo run --release --example repro

use ua::repro::{run, REPRO_IDS};
use ua::SearchBudget;

fn main() -> ua::Result<()> {
    let budget = SearchBudget::default();
    let mut failed = 0;
    for (id, title) in REPRO_IDS {
        let report = run(id, 0, &budget)?;
        println!("{id}: {title}");
        for c in &report.checks {
            println!("  [{}] {}", if c.passed { "ok" } else { "FAILED" }, c.name);
            failed += usize::from(!c.passed);
        }
    }
    println!("{failed} failed checks");
    std::process::exit(i32::from(failed > 0));
}
