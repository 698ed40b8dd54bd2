//! Cross-checks between registry records and the engine's building blocks.

use nahm_forge::expr::{jprod, scaled, Expr};
use nahm_forge::nahm::{nahm_sum, rank_two_examples};
use nahm_forge::rat::{int, r64};
use nahm_forge::recognize::{extract_profile, half_grid, hunt, RecognizeConfig};
use nahm_forge::registry::{find, registry, Sides, Status};

fn j(t: &[(i64, i64, i32)]) -> Expr {
    Expr::Prod(jprod(t))
}

fn cj(c: i64, delta: i64, t: &[(i64, i64, i32)]) -> Expr {
    scaled(jprod(t), c, int(delta))
}

#[test]
fn parity_halves_add_up_to_the_full_sum() {
    let n = int(60);
    for ex in rank_two_examples() {
        for q in ex.quadruples() {
            let full = nahm_sum(&q, &[], n).unwrap();
            for i in 0..2 {
                let mut m0 = vec![None, None];
                let mut m1 = vec![None, None];
                m0[i] = Some(0);
                m1[i] = Some(1);
                let split = nahm_sum(&q, &m0, n).unwrap().add(&nahm_sum(&q, &m1, n).unwrap());
                assert!(split.eq_to_order(&full, n).unwrap().is_equal(), "example {} coordinate {i}", ex.number);
            }
        }
    }
}

/// Example 4, b = (0,0): put the 2-dissection of 1/J_1^4 into the first
/// expression; its even and odd parts are the two terms of the dissected form.
#[test]
fn j1_four_substitution_reproduces_the_dissected_form() {
    let n = int(100);
    let inv_j1_four = find("dissection-j1-four").unwrap();
    let Sides::Q(_, dissected) = inv_j1_four.sides else { panic!() };
    let rest = j(&[(0, 2, 6), (0, 28, 3), (0, 4, -2), (4, 28, -1), (6, 28, -1), (8, 28, -1)]);
    let second = cj(-2, 1, &[(0, 4, 2), (4, 28, 1), (5, 14, 1), (0, 1, -2), (0, 2, -1), (0, 28, -1)]);
    let substituted = dissected * rest + second;

    let ex4 = find("ex4-1-a").unwrap();
    let Sides::Q(_, first) = ex4.sides else { panic!() };
    let s = substituted.eval(n).unwrap();
    assert!(s.eq_to_order(&first.eval(n).unwrap(), n).unwrap().is_equal());

    let even = j(&[(0, 4, 5), (0, 28, 1), (6, 56, 1), (16, 56, 1), (22, 56, 1), (0, 2, -4), (0, 8, -2), (0, 56, -3)]);
    let odd = cj(2, 1, &[(0, 4, 1), (0, 8, 1), (0, 56, 3), (2, 4, -1), (4, 8, -1), (4, 56, -1), (16, 56, -1), (24, 56, -1)]);
    assert!(s.even_part().unwrap().eq_to_order(&even.eval(n).unwrap(), n).unwrap().is_equal());
    assert!(s.odd_part().unwrap().eq_to_order(&odd.eval(n).unwrap(), n).unwrap().is_equal());
}

/// Every plain product side with integral exponents survives
/// profile extraction and rebuilding to order 120.
#[test]
fn product_sides_roundtrip_through_profiles() {
    let n = int(120);
    let mut checked = 0;
    for rec in registry() {
        let Sides::Q(_, Expr::Prod(spec)) = &rec.sides else { continue };
        let s = spec.eval(n).unwrap();
        let Ok(p) = extract_profile(&s, usize::MAX - 1) else { continue };
        assert!(p.is_pure());
        let back = p.rebuild();
        assert!(back.eq_to_order(&s, n).unwrap().is_equal(), "{}", rec.id);
        checked += 1;
    }
    assert!(checked >= 20, "only {checked} product sides");
}

#[test]
fn far_grid_point_is_not_a_hit() {
    let a = vec![vec![int(2), int(1)], vec![int(2), int(2)]];
    let hits = hunt(&a, &[1, 2], &[vec![int(10), int(10)]], int(120), &RecognizeConfig::default()).unwrap();
    assert!(hits.is_empty());
}

#[test]
fn hunt_grid_has_sixty_three_points() {
    let g = half_grid(-4..=4, -2..=4);
    assert_eq!(g.len(), 63);
    assert!(g.contains(&vec![r64(-3, 2), int(2)]));
}

#[test]
fn every_conjecture_is_verified_not_proved() {
    let recs: Vec<_> = registry().into_iter().filter(|r| r.status == Status::Conjecture).collect();
    assert!(recs.len() >= 8);
    for r in recs {
        let rep = nahm_forge::registry::verify_record(&r, 40).unwrap();
        assert_eq!(serde_json::to_value(&rep).unwrap()["result"], "conjecture_pass", "{}", r.id);
    }
}

#[test]
fn typo_repair_is_documented() {
    let r = find("t1-1-5").unwrap();
    assert!(r.note.as_deref().is_some_and(|n| !n.is_empty()));
}
