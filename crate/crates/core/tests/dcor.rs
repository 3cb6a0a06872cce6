mod common;

use journet_core::dcor::{dcor, double_center, perm_test, Centering, PermTestConfig};
use journet_core::dissim::{dissim_from_incidence, EmptyPolicy};
use journet_core::BipartiteIncidence;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn centered_rows_and_columns_sum_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let m = common::random_dissim(5, &mut rng);
        let c = double_center(&m).unwrap();
        let literal = common::literal_center(&common::to_rows(&m));
        for (k, literal_row) in literal.iter().enumerate() {
            let row: f64 = (0..5).map(|l| c.get(k, l)).sum();
            let col: f64 = (0..5).map(|l| c.get(l, k)).sum();
            assert!(row.abs() < 1e-12 && col.abs() < 1e-12);
            for (l, &x) in literal_row.iter().enumerate() {
                assert!((c.get(k, l) - x).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn dcor_matches_literal_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let a = common::random_dissim(5, &mut rng);
        let b = common::random_dissim(5, &mut rng);
        let s = dcor(&a, &b).unwrap();
        let (dcov2, va, vb, rd) = common::literal_dcor(&common::to_rows(&a), &common::to_rows(&b));
        assert!((s.dcov2 - dcov2).abs() < 1e-12);
        assert!((s.dvar2_a - va).abs() < 1e-12);
        assert!((s.dvar2_b - vb).abs() < 1e-12);
        assert!((s.rd - rd).abs() < 1e-12);
        assert!((s.sqrt_rd * s.sqrt_rd - s.rd).abs() < 1e-15);
    }
}

#[test]
fn dcor_is_symmetric_and_relabeling_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 3..10 {
        let a = common::random_dissim(n, &mut rng);
        let b = common::random_dissim(n, &mut rng);
        let ab = dcor(&a, &b).unwrap();
        let ba = dcor(&b, &a).unwrap();
        assert_eq!((ab.dcov2, ab.rd), (ba.dcov2, ba.rd));
        assert_eq!((ab.dvar2_a, ab.dvar2_b), (ba.dvar2_b, ba.dvar2_a));
        let order = common::shuffled(n, &mut rng);
        let pa = a.permuted(&order).unwrap();
        let pb = b.permuted(&order).unwrap();
        assert!((dcor(&pa, &pb).unwrap().rd - ab.rd).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&ab.rd));
        assert_eq!(dcor(&a, &a).unwrap().rd, 1.0);
    }
}

#[test]
fn monte_carlo_p_agrees_with_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let r = 20_000u64;
    for trial in 0..6 {
        let a = common::random_dissim(5, &mut rng);
        let b = common::random_dissim(5, &mut rng);
        let exact = common::exact_perm_p(&common::to_rows(&a), &common::to_rows(&b));
        let cfg = PermTestConfig {
            n_permutations: r,
            seed: 100 + trial,
            ..Default::default()
        };
        let mc = perm_test(&a, &b, &cfg).unwrap();
        let se = (exact * (1.0 - exact) / r as f64)
            .sqrt()
            .max(1.0 / r as f64);
        assert!(
            (mc.p_value - exact).abs() <= 3.0 * se,
            "trial {trial}: exact {exact}, monte carlo {}",
            mc.p_value
        );
    }
}

#[test]
fn worker_count_does_not_change_the_result() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let a = common::random_dissim(12, &mut rng);
    let b = common::random_dissim(12, &mut rng);
    let run = |workers| {
        perm_test(
            &a,
            &b,
            &PermTestConfig {
                n_permutations: 5_000,
                seed: 42,
                centering: Centering::Classical,
                workers: Some(workers),
            },
        )
        .unwrap()
    };
    let one = run(1);
    assert_eq!(one, run(8));
    assert_eq!(one, run(3));
}

#[test]
fn unbiased_centering_runs_and_stays_in_range() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = common::random_dissim(8, &mut rng);
    let b = common::random_dissim(8, &mut rng);
    let cfg = PermTestConfig {
        n_permutations: 999,
        seed: 1,
        centering: Centering::Unbiased,
        workers: None,
    };
    let r = perm_test(&a, &b, &cfg).unwrap();
    assert!((0.0..=1.0).contains(&r.rd));
    assert_eq!(r.centering, Centering::Unbiased);
}

fn random_incidence(rng: &mut impl Rng, journals: usize, entities: usize) -> BipartiteIncidence {
    let mut pairs = Vec::new();
    for j in 0..journals {
        pairs.push((format!("J{j}"), Some(format!("own{j}"))));
        for e in 0..entities {
            if rng.gen_bool(0.3) {
                pairs.push((format!("J{j}"), Some(format!("e{e}"))));
            }
        }
    }
    BipartiteIncidence::from_pairs(pairs)
}

/// Under independence the p-values should look uniform: one-sample
/// Kolmogorov–Smirnov distance below the 1% critical value.
#[test]
fn null_p_values_are_roughly_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let trials = 200;
    let mut ps: Vec<f64> = (0..trials)
        .map(|t| {
            let a =
                dissim_from_incidence(&random_incidence(&mut rng, 10, 12), EmptyPolicy::Maximal)
                    .unwrap();
            let b =
                dissim_from_incidence(&random_incidence(&mut rng, 10, 12), EmptyPolicy::Maximal)
                    .unwrap();
            let cfg = PermTestConfig {
                n_permutations: 199,
                seed: t,
                ..Default::default()
            };
            perm_test(&a, &b, &cfg).unwrap().p_value
        })
        .collect();
    ps.sort_by(f64::total_cmp);
    let n = ps.len() as f64;
    let d = ps
        .iter()
        .enumerate()
        .map(|(i, &p)| (p - i as f64 / n).abs().max(((i + 1) as f64 / n - p).abs()))
        .fold(0.0, f64::max);
    assert!(d < 1.63 / n.sqrt(), "KS distance {d}");
}
