use nilcons_core::verify::{run_suite, VerifyOptions};

#[test]
fn default_suite_passes() {
    let report = run_suite(VerifyOptions::default());
    print!("{}", report.to_text());
    if std::env::var("SUITE_JSON").is_ok() {
        println!("{}", report.to_json());
    }
    assert!(report.all_passed);
}
