//! Full verification suite, one line of output per criterion.

use tasep::report;

#[test]
fn acceptance_criteria() {
    let results = report::run_all(false);
    let mut all_pass = true;
    for r in &results {
        println!("{}", r.line());
        all_pass &= r.passed;
    }
    assert!(all_pass, "at least one acceptance criterion failed");
}
