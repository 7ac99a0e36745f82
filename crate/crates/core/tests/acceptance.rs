//! Acceptance battery: runs every suite check at full scale and prints
//! one pass/fail line per criterion.

use pantsgraph::suite::{run_suite, SuiteConfig};

#[test]
fn acceptance_battery() {
    let config = SuiteConfig::default();
    let records = run_suite(&config).expect("suite construction");
    let mut all_pass = true;
    for record in &records {
        let status = if record.pass { "PASS" } else { "FAIL" };
        println!("{status} {} {}", record.check, record.details);
        all_pass &= record.pass;
    }
    assert!(all_pass, "acceptance criteria failed; see the lines above");
}

#[test]
fn acceptance_is_reproducible() {
    let config = SuiteConfig {
        pairs: 200,
        triples: 200,
        gap_pairs: 10,
        path_fixtures: 3,
        windowed_pairs: 10,
        coherence_probes: 10,
        continuity_fixtures: 3,
        ..SuiteConfig::default()
    };
    let a = serde_json::to_string(&run_suite(&config).unwrap()).unwrap();
    let b = serde_json::to_string(&run_suite(&config).unwrap()).unwrap();
    assert_eq!(a, b, "suite output must be byte-identical for a fixed seed");
}
