#[path = "common/conformance.rs"]
mod conformance;

#[test]
fn conformance_suite() {
    assert!(conformance::CASES.len() >= 40);
    let failures: Vec<String> = conformance::CASES
        .iter()
        .filter_map(|c| conformance::run_case(c).err())
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
