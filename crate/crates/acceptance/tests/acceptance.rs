//! One line per acceptance criterion; exits nonzero if any
//! non-informational criterion fails.

use nilform_cli::verify::{read_table, run_suite, VerifyOptions};

fn main() {
    let table = std::env::var("NILFORM_TABLE").ok().map(|p| read_table(&p).expect("knot table"));
    let results = run_suite(&VerifyOptions { table, lift_seed: None });
    let mut failing = Vec::new();
    for r in &results {
        println!("{}", r.line());
        for c in r.checks.iter().filter(|c| !c.ok) {
            println!("    {}: {}", c.label, c.detail);
        }
        if r.counts_as_failure() {
            failing.push(r.id.clone());
        }
    }
    println!("acceptance: {} criteria, {} failing", results.len(), failing.len());
    if !failing.is_empty() {
        println!("failing criteria: {}", failing.join(", "));
        std::process::exit(1);
    }
}
