use derham::suites::{run_suite, SuiteParams};

const CRITERIA: [(&str, &str); 10] = [
    ("1", "zernike"),
    ("2", "qbasis"),
    ("3", "lu"),
    ("4", "lemma10"),
    ("5", "lemma11"),
    ("6", "gradient"),
    ("7", "curl"),
    ("8", "boundary"),
    ("9", "cylinder"),
    ("10", "complexes"),
];

#[test]
fn acceptance_criteria() {
    let params = SuiteParams::default();
    let mut failed = Vec::new();
    for (id, suite) in CRITERIA {
        let report = run_suite(suite, &params).expect("known suite").expect("suite runs");
        for check in &report.checks {
            println!("    {check}");
        }
        let tag = if report.passed() { "PASS" } else { "FAIL" };
        println!("{tag} criterion {id} ({suite})");
        if !report.passed() {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
