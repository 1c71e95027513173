use nesy_core::selftest::{run_filtered, Scope};

#[test]
fn all_selftest_suites_pass() {
    let results = run_filtered(Scope::All, 7, |_| true);
    for s in &results {
        println!("{s}");
    }
    assert!(results.iter().all(|s| s.passed()));
}
