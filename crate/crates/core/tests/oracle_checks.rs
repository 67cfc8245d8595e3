mod common;

use common::subsets;
use ordered_ramsey::bounds::{loose_value, midlevel_size, online_bounds};
use ordered_ramsey::game::{BuilderMode, GameParams};
use ordered_ramsey::oracle::{
    exact_online_value, offline_force_check, online_value_series, stabilization_point,
    verify_witness, Coloring, ForceOutcome, SolverOptions,
};
use ordered_ramsey::painters::offline_witness;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGET: u64 = 1 << 32;

fn params(k: usize, l: usize, targets: &[usize]) -> GameParams {
    GameParams::new(k, l, targets.to_vec(), BuilderMode::FreeInsertion).unwrap()
}

/// Any increasing vertex sequence whose ℓ-loose edges all share color `c`
/// and number `m_c`.
fn has_mono_path_brute(p: &GameParams, n: usize, color: &dyn Fn(&[usize]) -> usize) -> bool {
    let (k, l) = (p.k(), p.l());
    (0..p.t()).any(|c| {
        let m = p.target(c);
        let r = k + l * (m - 1);
        subsets(n, r).iter().any(|seq| {
            (0..m).all(|i| color(&seq[i * l..i * l + k]) == c)
        })
    })
}

fn coloring_from_bits(p: &GameParams, n: usize, bits: u64) -> Coloring {
    let t = p.t() as u64;
    let mut code = bits;
    let edges = subsets(n, p.k())
        .into_iter()
        .map(|e| {
            let c = (code % t) as usize;
            code /= t;
            (e, c)
        })
        .collect();
    Coloring::new(p.clone(), n, edges).unwrap()
}

#[test]
fn witness_dp_matches_brute_force_on_all_small_graph_colorings() {
    for targets in [[2, 2], [3, 3], [2, 3]] {
        let p = params(2, 1, &targets);
        for n in 2..=6 {
            let total = 1u64 << (n * (n - 1) / 2);
            for bits in 0..total {
                let col = coloring_from_bits(&p, n, bits);
                let brute = has_mono_path_brute(&p, n, &|e| col.color_of(e).unwrap());
                assert_eq!(verify_witness(&col), !brute, "targets {targets:?} n={n} bits={bits}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn witness_dp_matches_brute_force_on_hypergraphs(
        shape in prop::sample::select(vec![(3usize, 1usize), (3, 2), (3, 3), (4, 2), (2, 2)]),
        m in 2usize..=3,
        n in 4usize..=8,
        seed in any::<u64>(),
    ) {
        let p = params(shape.0, shape.1, &[m, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges = subsets(n, p.k()).into_iter().map(|e| (e, rng.gen_range(0..2))).collect();
        let col = Coloring::new(p.clone(), n, edges).unwrap();
        let brute = has_mono_path_brute(&p, n, &|e| col.color_of(e).unwrap());
        prop_assert_eq!(verify_witness(&col), !brute);
    }
}

#[test]
fn monochromatic_coloring_fails() {
    for (k, l, m) in [(2, 1, 3), (3, 1, 2), (3, 2, 2)] {
        let p = params(k, l, &[m, m]);
        let r = k + l * (m - 1);
        let edges = subsets(r, k).into_iter().map(|e| (e, 0)).collect();
        assert!(!verify_witness(&Coloring::new(p, r, edges).unwrap()));
    }
}

fn expect_threshold(k: usize, l: usize, targets: &[usize]) {
    let p = params(k, l, targets);
    let v = loose_value(k, l, targets).unwrap().value as usize;
    assert!(
        offline_force_check(&p, v, BUDGET).unwrap().is_forced(),
        "{k},{l},{targets:?}: n = {v} should force"
    );
    match offline_force_check(&p, v - 1, BUDGET).unwrap() {
        ForceOutcome::Avoidable(c) => assert!(verify_witness(&c)),
        other => panic!("{k},{l},{targets:?}: n = {} gave {other:?}", v - 1),
    }
    let w = offline_witness(&p, v - 1).unwrap();
    assert!(verify_witness(&w), "{k},{l},{targets:?}: painter witness on {} vertices", v - 1);
    assert!(offline_witness(&p, v).is_err());
}

#[test]
fn offline_thresholds_match_the_formula() {
    expect_threshold(2, 1, &[2, 2]);
    expect_threshold(2, 1, &[3, 3]);
    expect_threshold(2, 1, &[2, 3]);
    expect_threshold(2, 1, &[2, 2, 2]);
    expect_threshold(3, 1, &[2, 2]);
    expect_threshold(2, 2, &[2, 2]);
    expect_threshold(3, 2, &[2, 2]);
    expect_threshold(3, 3, &[2, 2]);
}

#[test]
fn witness_sizes() {
    let p = params(2, 1, &[2, 2]);
    let w = offline_witness(&p, 4).unwrap();
    assert_eq!(w.edges().len(), 6);
    let p = params(3, 1, &[2, 2]);
    assert!(verify_witness(&offline_witness(&p, 6).unwrap()));
}

#[test]
fn memo_does_not_change_values() {
    let cases: &[(usize, usize, &[usize], usize)] = &[
        (2, 1, &[2, 2], 3),
        (2, 1, &[2, 2], 4),
        (2, 1, &[2, 2], 5),
        (2, 1, &[1, 3], 4),
        (2, 1, &[2, 3], 4),
        (3, 1, &[2, 2], 4),
        (2, 2, &[2, 2], 6),
    ];
    for &(k, l, targets, n) in cases {
        let p = params(k, l, targets);
        let a = exact_online_value(&p, n, 8, SolverOptions::default()).unwrap();
        let b = exact_online_value(
            &p,
            n,
            8,
            SolverOptions {
                memo: false,
                parallel: false,
            },
        )
        .unwrap();
        assert_eq!(a.value, b.value, "{k},{l},{targets:?} n={n}");
    }
}

#[test]
fn graph_value_settles_and_respects_bounds() {
    let p = params(2, 1, &[2, 2]);
    let series = online_value_series(&p, 3..=6, 16, SolverOptions::default()).unwrap();
    let values: Vec<_> = series.iter().map(|v| v.value).collect();
    assert_eq!(values, vec![None, Some(4), Some(4), Some(4)]);
    assert_eq!(stabilization_point(&series), Some(4));
    let report = online_bounds(2, 1, &[2, 2]).unwrap();
    assert!(report.brackets(4));
    // The middle-level painter alone already survives ⌈|B|/2⌉ rounds.
    assert!(4 >= midlevel_size(&[2, 2]).size.div_ceil(2));
}

#[test]
fn matching_values() {
    // Two disjoint edges of one color: Builder needs |Q_1| + 1 intervals.
    let p = params(2, 2, &[2, 2]);
    assert_eq!(exact_online_value(&p, 6, 6, SolverOptions::default()).unwrap().value, Some(3));
}

#[test]
fn values_never_grow_with_the_budget() {
    for targets in [[2, 2], [1, 3]] {
        let p = params(2, 1, &targets);
        let series = online_value_series(&p, 2..=5, 10, SolverOptions::default()).unwrap();
        for w in series.windows(2) {
            match (w[0].value, w[1].value) {
                (Some(a), Some(b)) => assert!(b <= a),
                (Some(_), None) => panic!("a larger budget lost a win"),
                _ => {}
            }
        }
    }
}
