//! The stemmer must reproduce the bundled reference vocabulary exactly.
//! `tests/fixtures/porter_pairs.tsv` is generated by
//! `tools/gen_porter_fixture.py`, an independent implementation of the
//! same algorithm; the two are required to agree on every word.

use rumorgraph::textprep::porter_stem;

#[test]
fn matches_reference_vocabulary_exactly() {
    let fixture = include_str!("fixtures/porter_pairs.tsv");
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for (lineno, line) in fixture.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let (word, expected) = line
            .split_once('\t')
            .unwrap_or_else(|| panic!("malformed fixture line {}", lineno + 1));
        let got = porter_stem(word);
        if got != expected {
            failures.push(format!("{word}: expected {expected}, got {got}"));
        }
        checked += 1;
    }
    assert!(checked > 6000, "fixture unexpectedly small: {checked} pairs");
    assert!(
        failures.is_empty(),
        "{} of {} words mismatched:\n{}",
        failures.len(),
        checked,
        failures.join("\n")
    );
}
