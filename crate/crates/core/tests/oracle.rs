//! Registry records against the naive reference evaluator.

mod common;

use common::check_against_oracle;
use nahm_forge::registry::registry;
use rand::seq::SliceRandom;
use rand::SeedableRng;

const ORDER: i64 = 20;

#[test]
fn twenty_random_records_match_the_oracle() {
    let mut recs = registry();
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    recs.shuffle(&mut rng);
    for rec in recs.iter().take(20) {
        check_against_oracle(rec, ORDER).unwrap();
    }
}

#[test]
fn constant_term_records_match_the_oracle() {
    for id in ["ex4-1-ct", "ex4-2-ct", "ex4-3-ct-split"] {
        check_against_oracle(&nahm_forge::registry::find(id).unwrap(), ORDER).unwrap();
    }
}

#[test]
fn parameter_records_match_the_oracle() {
    for id in ["thm-new-exam1-param", "thm-new-exam2-param", "li-wang", "cao-wang"] {
        check_against_oracle(&nahm_forge::registry::find(id).unwrap(), ORDER).unwrap();
    }
}

#[test]
fn oracle_knows_rogers_ramanujan() {
    let rec = nahm_forge::registry::find("rr-1").unwrap();
    let [(o, _), _] = common::oracle_sides(&rec, 8);
    let c: Vec<String> = o.0.values().map(|x| x.to_string()).collect();
    assert_eq!(c, ["1", "1", "1", "1", "2", "2", "3", "3"]);
}
