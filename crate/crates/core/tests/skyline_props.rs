mod common;

use gdrst_core::skyline::{dominates, skyline_of, CostVector, Dim, Schema, Sense};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn schema(d: usize) -> Schema {
    (0..d).map(|i| Dim::new(format!("d{i}"), Sense::Minimize)).collect()
}

fn random_vectors(rng: &mut common::TestRng, n: usize, d: usize, levels: i32) -> Vec<CostVector<f64>> {
    let s = schema(d);
    (0..n)
        .map(|i| {
            let values = (0..d).map(|_| rng.gen_range(0..levels) as f64).collect();
            let mut v = CostVector::new(format!("o{i:04}"), s.clone(), values);
            v.unreachable = rng.gen_bool(0.05);
            v
        })
        .collect()
}

/// Quadratic reference: a reachable vector is in the skyline exactly when no
/// other reachable vector dominates it.
fn naive_skyline(vs: &[CostVector<f64>]) -> Vec<String> {
    let live: Vec<_> = vs.iter().filter(|v| !v.unreachable).collect();
    let mut out: Vec<String> =
        live.iter().filter(|v| !live.iter().any(|w| dominates(w, v).unwrap())).map(|v| v.owner.clone()).collect();
    out.sort();
    out
}

fn owners(vs: &[CostVector<f64>]) -> Vec<String> {
    vs.iter().map(|v| v.owner.clone()).collect()
}

#[test]
fn dominance_is_a_strict_partial_order_on_ten_thousand_triples() {
    let mut rng = common::rng(31);
    for _ in 0..10_000 {
        let d = rng.gen_range(1..=5);
        let levels = rng.gen_range(2..5);
        let vs = random_vectors(&mut rng, 3, d, levels);
        let [a, b, c] = [&vs[0], &vs[1], &vs[2]].map(|v| CostVector { unreachable: false, ..v.clone() });
        assert!(!dominates(&a, &a).unwrap());
        if dominates(&a, &b).unwrap() {
            assert!(!dominates(&b, &a).unwrap());
            if dominates(&b, &c).unwrap() {
                assert!(dominates(&a, &c).unwrap());
            }
        }
    }
}

#[test]
fn skyline_is_complete_and_sound_up_to_five_hundred_vectors() {
    let mut rng = common::rng(32);
    for case in 0..400 {
        let n = if case % 20 == 0 { 500 } else { rng.gen_range(0..=200) };
        let d = rng.gen_range(1..=5);
        let levels = [3, 10, 1000][case % 3];
        let vs = random_vectors(&mut rng, n, d, levels);
        let sky = skyline_of(vs.clone());
        assert_eq!(owners(&sky), naive_skyline(&vs), "case {case}");
        for m in &sky {
            let original = vs.iter().find(|v| v.owner == m.owner).unwrap();
            assert_eq!(m.values, original.values);
        }
    }
}

#[test]
fn skyline_ignores_input_order() {
    let mut rng = common::rng(33);
    for _ in 0..200 {
        let mut vs = random_vectors(&mut rng, 80, 3, 6);
        let before = skyline_of(vs.clone());
        vs.shuffle(&mut rng);
        assert_eq!(skyline_of(vs), before);
    }
}

#[test]
fn positive_scaling_per_dimension_keeps_membership() {
    let mut rng = common::rng(34);
    for _ in 0..300 {
        let d = rng.gen_range(1..=4);
        let vs = random_vectors(&mut rng, 100, d, 8);
        let factors: Vec<f64> = (0..d).map(|_| [0.5, 2.0, 3.0, 10.0, 0.25][rng.gen_range(0..5)]).collect();
        let scaled: Vec<_> = vs
            .iter()
            .map(|v| {
                let mut w = v.clone();
                for (x, f) in w.values.iter_mut().zip(&factors) {
                    *x *= f;
                }
                w
            })
            .collect();
        assert_eq!(owners(&skyline_of(vs)), owners(&skyline_of(scaled)));
    }
}

#[test]
fn maximize_dimensions_compare_on_negated_values() {
    let s: Schema = vec![Dim::new("time:origin", Sense::Minimize), Dim::new("rating", Sense::Maximize)].into();
    let a = CostVector::new("a", s.clone(), vec![10.0, -5.0]);
    let b = CostVector::new("b", s.clone(), vec![10.0, -3.0]);
    assert!(dominates(&a, &b).unwrap());
    assert_eq!(a.natural(1), 5.0);
    assert_eq!(owners(&skyline_of(vec![a, b])), ["a"]);
}

proptest! {
    #[test]
    fn skyline_members_are_mutually_non_dominating(
        raw in prop::collection::vec(prop::collection::vec(0u8..6, 3), 0..60)
    ) {
        let s = schema(3);
        let vs: Vec<_> = raw
            .iter()
            .enumerate()
            .map(|(i, r)| CostVector::new(format!("p{i:03}"), s.clone(), r.iter().map(|&x| x as f64).collect()))
            .collect();
        let sky = skyline_of(vs.clone());
        for a in &sky {
            for b in &sky {
                prop_assert!(!dominates(a, b).unwrap());
            }
        }
        for v in &vs {
            let kept = sky.iter().any(|m| m.owner == v.owner);
            let dominated = sky.iter().any(|m| dominates(m, v).unwrap());
            prop_assert!(kept != dominated);
        }
    }
}
