use cgl_core::agent::{choose_next, navigate, perceive, train, wired_matrix};
use cgl_core::graph::{generate_lattice, generate_path, generate_random_connected, generate_watts_strogatz};
use cgl_core::harness::{max_abs_diff, oracle_walk, run_trials, TrialBatch};
use cgl_core::matrix::Representation;
use cgl_core::{
    cell_update, recurse, AgentConfig, CoincidentMatrix, FloorMode, Normalization, Plasticity, StateVector,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A random matrix: a connected graph with random conductances, possibly a
/// reward and a penalty, and (when `gaps`) some edges dropped so nodes can
/// end up isolated.
fn matrix(n: usize, seed: u64, weights: &[f64], gaps: bool, normalization: Normalization) -> CoincidentMatrix {
    let g = generate_random_connected(n, n / 2, seed).unwrap();
    let mut c = CoincidentMatrix::new(n, Plasticity::default()).unwrap();
    c.set_normalization(normalization);
    for (k, (u, v)) in g.edges().enumerate() {
        let w = weights[k % weights.len()];
        if gaps && k % 3 == 0 {
            continue;
        }
        c.set_conductance(u, v, w).unwrap();
    }
    if seed.is_multiple_of(2) {
        c.wire_reward(1 + (seed as usize % n), 3.0).unwrap();
    }
    if seed.is_multiple_of(3) {
        c.wire_penalty(1 + (seed as usize / 3 % n), 2, 0.5).unwrap();
    }
    c
}

fn input(values: &[f64], m: usize) -> StateVector {
    StateVector::new((0..m).map(|i| values[i % values.len()]).collect()).unwrap()
}

fn norm_strategy() -> impl Strategy<Value = Normalization> {
    prop_oneof![Just(Normalization::Weighted), Just(Normalization::Count)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cell_update_conserves_and_stays_nonnegative(
        n in 2usize..40,
        seed in any::<u64>(),
        weights in prop::collection::vec(0.01f64..5.0, 1..8),
        xs in prop::collection::vec(0.0f64..3.0, 1..8),
        gaps in any::<bool>(),
    ) {
        let c = matrix(n, seed, &weights, gaps, Normalization::Weighted);
        let x = input(&xs, c.size());
        let y = cell_update(&x, &c).unwrap();
        prop_assert!((y.sum() - x.sum()).abs() <= 1e-9 * x.sum().max(1.0));
        prop_assert!(y.as_slice().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn cell_update_is_linear(
        n in 2usize..30,
        seed in any::<u64>(),
        weights in prop::collection::vec(0.01f64..5.0, 1..6),
        a in prop::collection::vec(0.0f64..3.0, 1..6),
        b in prop::collection::vec(0.0f64..3.0, 1..6),
        alpha in 0.0f64..4.0,
        norm in norm_strategy(),
    ) {
        let c = matrix(n, seed, &weights, false, norm);
        let (xa, xb) = (input(&a, c.size()), input(&b, c.size()));
        let mixed = StateVector::new(
            xa.as_slice().iter().zip(xb.as_slice()).map(|(p, q)| alpha * p + q).collect(),
        ).unwrap();
        let (ya, yb, ym) = (cell_update(&xa, &c).unwrap(), cell_update(&xb, &c).unwrap(), cell_update(&mixed, &c).unwrap());
        let expected: Vec<f64> = ya.as_slice().iter().zip(yb.as_slice()).map(|(p, q)| alpha * p + q).collect();
        prop_assert!(max_abs_diff(ym.as_slice(), &expected) <= 1e-9);
    }

    #[test]
    fn recurse_matches_oracle(
        n in 2usize..30,
        seed in any::<u64>(),
        weights in prop::collection::vec(0.01f64..5.0, 1..6),
        xs in prop::collection::vec(0.0f64..2.0, 1..6),
        r in 0usize..=8,
        gaps in any::<bool>(),
        norm in norm_strategy(),
    ) {
        let c = matrix(n, seed, &weights, gaps, norm);
        let x = input(&xs, c.size());
        let fast = recurse(&x, &StateVector::zeros(c.size()), &c, r, 0.0).unwrap();
        let slow = oracle_walk(&c, &x, r).unwrap();
        prop_assert!(max_abs_diff(fast.as_slice(), slow.as_slice()) <= 1e-9);
    }

    #[test]
    fn path_center_input_gives_a_palindrome(half in 1usize..15, r in 0usize..10) {
        let n = 2 * half + 1;
        let env = generate_path(n).unwrap();
        let c = CoincidentMatrix::from_environment(&env, Plasticity::default()).unwrap();
        let x = StateVector::indicator(n, half + 1).unwrap();
        let y = recurse(&x, &StateVector::zeros(n), &c, r, 0.0).unwrap();
        for i in 0..n {
            prop_assert!((y.as_slice()[i] - y.as_slice()[n - 1 - i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn coincidence_keeps_symmetry_and_floor(
        n in 3usize..25,
        seed in any::<u64>(),
        rounds in 1usize..12,
        d in 0.05f64..0.95,
        b in 0.0f64..0.5,
        literal in any::<bool>(),
    ) {
        let env = generate_random_connected(n, n, seed).unwrap();
        let floor_mode = if literal { FloorMode::Literal } else { FloorMode::Clamp };
        let p = Plasticity { deinforcement: d, floor: b, floor_mode };
        let mut c = CoincidentMatrix::new(n, p).unwrap();
        for k in 0..rounds {
            let v = 1 + (seed as usize + 7 * k) % n;
            let percept = perceive(&env, v, cgl_core::PerceptionMode::Star).unwrap();
            let before = c.clone();
            let x = StateVector::indicator_set(n, &percept.active).unwrap();
            c.apply_coincidence(&x, &percept.pairs).unwrap();
            for (i, j, w) in c.entries() {
                prop_assert_eq!(c.get(j, i), w);
                let old = before.get(i, j);
                if old > 0.0 && old != w {
                    // Only edges above the floor are de-inforced; clamping keeps them there.
                    prop_assert!(old > b);
                    prop_assert!(w < old);
                    if !literal {
                        prop_assert!(w >= b);
                    }
                }
            }
            // Only pairs touching v may change.
            for (i, j, w) in before.entries() {
                if i != v && j != v {
                    prop_assert_eq!(c.get(i, j), w);
                }
            }
        }
    }

    #[test]
    fn choose_next_ignores_positive_scaling(
        n in 2usize..30,
        seed in any::<u64>(),
        xs in prop::collection::vec(0.0f64..1.0, 1..10),
        scale in 0.01f64..100.0,
    ) {
        let env = generate_random_connected(n, n, seed).unwrap();
        let x = input(&xs, n);
        let scaled = StateVector::new(x.as_slice().iter().map(|v| v * scale).collect()).unwrap();
        let v = 1 + seed as usize % n;
        let a = choose_next(&x, &env, v, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = choose_next(&scaled, &env, v, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn dense_and_sparse_agree_bit_for_bit(
        n in 2usize..30,
        seed in any::<u64>(),
        weights in prop::collection::vec(0.01f64..5.0, 1..6),
        xs in prop::collection::vec(0.0f64..2.0, 1..6),
        r in 0usize..8,
        norm in norm_strategy(),
    ) {
        let c = matrix(n, seed, &weights, seed % 5 == 0, norm);
        let x = input(&xs, c.size());
        let zeros = StateVector::zeros(c.size());
        let dense = recurse(&x, &zeros, &c.converted(Representation::Dense), r, 0.0).unwrap();
        let sparse = recurse(&x, &zeros, &c.converted(Representation::Sparse), r, 0.0).unwrap();
        prop_assert_eq!(dense.as_slice(), sparse.as_slice());
    }

    #[test]
    fn watts_strogatz_is_simple_and_connected(n in 10usize..80, half_k in 1usize..4, beta in 0.0f64..=1.0, seed in any::<u64>()) {
        let k = 2 * half_k;
        let g = generate_watts_strogatz(n, k, beta, seed).unwrap();
        prop_assert!(g.validate().is_ok());
        prop_assert!(g.is_connected());
        prop_assert_eq!(g.edge_count(), n * k / 2);
        for (u, v) in g.edges() {
            prop_assert!(u != v);
        }
        prop_assert_eq!(g, generate_watts_strogatz(n, k, beta, seed).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn agent_moves_along_edges_and_never_onto_auxiliaries(
        rows in 3usize..7,
        cols in 3usize..7,
        seed in any::<u64>(),
        recursions in 1usize..8,
        start_pick in any::<usize>(),
        target_pick in any::<usize>(),
    ) {
        let env = generate_lattice(rows, cols).unwrap();
        let n = rows * cols;
        let (start, target) = (1 + start_pick % n, 1 + target_pick % n);
        let cfg = AgentConfig { seed, recursions, ..AgentConfig::default() };
        let wired = wired_matrix(&env, &cfg, &[(target, 3.0)], &[(1 + (target + 1) % n, 2, 0.5)]).unwrap();
        let trained = train(&env, &wired, &cfg).unwrap();
        let run = navigate(&env, &trained, start, target, &cfg).unwrap();
        for w in run.path.windows(2) {
            prop_assert!(w[0] == w[1] || env.has_edge(w[0], w[1]));
        }
        prop_assert!(run.path.iter().all(|&v| v <= n));
        prop_assert_eq!(run, navigate(&env, &trained, start, target, &cfg).unwrap());
    }

    #[test]
    fn training_touches_only_perceived_pairs(rows in 2usize..7, cols in 2usize..7, plastic in any::<bool>()) {
        let env = generate_lattice(rows, cols).unwrap();
        let cfg = AgentConfig { training_plasticity: plastic, ..AgentConfig::default() };
        let wired = wired_matrix(&env, &cfg, &[(rows * cols, 3.0)], &[]).unwrap();
        let trained = train(&env, &wired, &cfg).unwrap();
        let n = env.node_count();
        for (i, j, w) in trained.entries() {
            if i <= n && j <= n {
                prop_assert!(env.has_edge(i, j));
                prop_assert!(w > 0.0 && w <= 1.0);
            } else {
                prop_assert_eq!(w, wired.get(i, j));
            }
        }
    }
}

#[test]
fn trial_rows_ignore_worker_count() {
    let batch = TrialBatch {
        env: "ws:30,4,0.5".parse().unwrap(),
        reward_weight: 3.0,
        pair_count: 25,
        seed: 11,
        agent: AgentConfig::default(),
    };
    let one = run_trials(&batch, 1).unwrap();
    let four = run_trials(&batch, 4).unwrap();
    assert_eq!(one, four);
}
