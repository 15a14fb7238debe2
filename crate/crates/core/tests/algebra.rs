//! Star-power dual-route checks, closure against a naive fixpoint oracle,
//! and Taylor system verification.

use std::collections::BTreeSet;

use looplab::algebra::{
    find_taylor_system, is_compatible, loop_oracle, star_power_eval, star_power_eval_folded,
    subpower_closure, OpTable, Relation, StarSubstitution,
};
use looplab::digraph::Digraph;
use looplab::rng::SplitMix64;
use proptest::prelude::*;

fn random_op(arity: usize, domain: usize, seed: u64) -> OpTable {
    let mut rng = SplitMix64::new(seed);
    OpTable::from_fn(arity, domain, |_| rng.below(domain as u64) as usize).unwrap()
}

#[test]
fn star_routes_agree_exhaustively_for_small_depths() {
    let ops = vec![
        OpTable::min_chain(2).unwrap(),
        OpTable::projection(0, 2, 2).unwrap(),
        OpTable::projection(1, 2, 2).unwrap(),
        random_op(2, 3, 0xA11CE),
    ];
    for t in &ops {
        let m = t.domain();
        for depth in 0..=2usize {
            let leaves = 2usize.pow(depth as u32);
            for assignment in 0..m.pow(leaves as u32) {
                let mut values = Vec::with_capacity(leaves);
                let mut a = assignment;
                for _ in 0..leaves {
                    values.push(a % m);
                    a /= m;
                }
                let f = StarSubstitution::new(depth, 2, values).unwrap();
                assert_eq!(
                    star_power_eval(t, &f).unwrap(),
                    star_power_eval_folded(t, &f).unwrap(),
                    "op {t:?} depth {depth} assignment {assignment}"
                );
            }
        }
    }
}

/// Naive closure oracle: recompute the full image set until no growth.
fn naive_closure(ops: &[OpTable], generators: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
    let mut set: BTreeSet<Vec<usize>> = generators.iter().cloned().collect();
    let arity = generators.first().map_or(0, |g| g.len());
    loop {
        let snapshot: Vec<Vec<usize>> = set.iter().cloned().collect();
        let before = set.len();
        for op in ops {
            let n = op.arity();
            let mut pick = vec![0usize; n];
            loop {
                let image: Vec<usize> = (0..arity)
                    .map(|c| {
                        let args: Vec<usize> = pick.iter().map(|&i| snapshot[i][c]).collect();
                        op.apply(&args)
                    })
                    .collect();
                set.insert(image);
                let mut done = true;
                for j in (0..n).rev() {
                    pick[j] += 1;
                    if pick[j] < snapshot.len() {
                        done = false;
                        break;
                    }
                    pick[j] = 0;
                }
                if done {
                    break;
                }
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

#[test]
fn closure_matches_naive_fixpoint() {
    let mut rng = SplitMix64::new(42);
    for case in 0..40u64 {
        let domain = 2 + (case % 3) as usize;
        let op = random_op(2, domain, rng.next_u64());
        let gen_count = 1 + (rng.below(3) as usize);
        let arity = 2 + (rng.below(2) as usize);
        let generators: Vec<Vec<usize>> = (0..gen_count)
            .map(|_| (0..arity).map(|_| rng.below(domain as u64) as usize).collect())
            .collect();
        let fast = subpower_closure(std::slice::from_ref(&op), &generators, true, 1_000_000)
            .unwrap();
        let slow = naive_closure(std::slice::from_ref(&op), &generators);
        let fast_set: BTreeSet<Vec<usize>> = fast.tuples().iter().cloned().collect();
        assert_eq!(fast_set, slow, "case {case}");
        // derivations replay
        let arena = fast.derivations().unwrap();
        let gens: Vec<Vec<usize>> = fast.tuples()[..fast.generator_count()].to_vec();
        for (i, tuple) in fast.tuples().iter().enumerate() {
            assert_eq!(
                &arena.eval_tuple(i, std::slice::from_ref(&op), &gens),
                tuple
            );
        }
    }
}

#[test]
fn compatible_operation_keeps_oracle_closure_at_the_edge_set() {
    // min is compatible with the full relation; the oracle then only scans
    // edges and finds the loop iff one is present
    let min = OpTable::min_chain(3).unwrap();
    let mut edges = Vec::new();
    for u in 0..3 {
        for v in 0..3 {
            edges.push((u, v));
        }
    }
    let g = Digraph::directed(3, &edges).unwrap();
    assert!(is_compatible(&min, &Relation::from_digraph(&g)).unwrap());
    let w = loop_oracle(&min, &g, 100_000).unwrap().unwrap();
    assert_eq!(w.vertex, 0);

    let loopless: Vec<(usize, usize)> = edges.into_iter().filter(|(u, v)| u != v).collect();
    let g = Digraph::directed(3, &loopless).unwrap();
    assert!(!is_compatible(&min, &Relation::from_digraph(&g)).unwrap());
}

#[test]
fn taylor_systems_reverify_through_the_equation_checker() {
    use looplab::doubleloop::{check_local_satisfaction, taylor_system_equations, TermOp};
    let cases = [
        OpTable::majority3().unwrap(),
        OpTable::minority3().unwrap(),
        OpTable::min_chain(2).unwrap(),
    ];
    for t in cases {
        let x_set: Vec<usize> = (0..t.domain()).collect();
        let sys = find_taylor_system(&t, &x_set, true).unwrap().unwrap();
        let eqs = taylor_system_equations(&sys);
        assert_eq!(eqs.len(), t.arity() + 1);
        assert!(check_local_satisfaction(
            std::slice::from_ref(&t),
            &[TermOp::Basic(0)],
            &eqs,
            &x_set
        )
        .unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn star_routes_agree_on_random_substitutions(
        seed in 0u64..1000,
        depth in 0usize..5,
    ) {
        let t = random_op(2, 3, seed);
        let mut rng = SplitMix64::new(seed ^ 0xDEAD);
        let f = StarSubstitution::random(depth, 2, 3, &mut rng).unwrap();
        prop_assert_eq!(
            star_power_eval(&t, &f).unwrap(),
            star_power_eval_folded(&t, &f).unwrap()
        );
    }

    #[test]
    fn closing_a_closed_set_is_the_identity(seed in 0u64..500) {
        let mut rng = SplitMix64::new(seed);
        let op = random_op(2, 3, rng.next_u64());
        let generators: Vec<Vec<usize>> = (0..2)
            .map(|_| (0..2).map(|_| rng.below(3) as usize).collect())
            .collect();
        let once = subpower_closure(std::slice::from_ref(&op), &generators, false, 100_000).unwrap();
        let twice = subpower_closure(std::slice::from_ref(&op), once.tuples(), false, 100_000).unwrap();
        let a: BTreeSet<Vec<usize>> = once.tuples().iter().cloned().collect();
        let b: BTreeSet<Vec<usize>> = twice.tuples().iter().cloned().collect();
        prop_assert_eq!(a, b);
    }
}
