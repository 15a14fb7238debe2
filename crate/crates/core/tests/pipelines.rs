//! Cross-module pipeline checks: oracle agreement, the compatible-digraph
//! loop sweep, double-loop invariants, and star-power path soundness.

use looplab::algebra::{
    find_taylor_system, is_compatible, loop_oracle, star_power_eval, OpTable, Relation,
};
use looplab::construction::{AlphaMatrix, ReducedOverrides};
use looplab::digraph::{algebraic_length_one, is_strongly_connected, Digraph};
use looplab::doubleloop::{
    extract_double_loop_term, find_double_loop, generate_q, local_free_algebra,
};
use looplab::loopfinder::{
    extract_loop, prepare_instance, sample_dichotomy, verify_dichotomy_exhaustive,
    InstanceOptions,
};
use looplab::strongloop::{
    closure_path_args, coordinate_digraph, strong_loop_pipeline, transitive_closure,
    walk_substitution,
};

fn all_digraphs(m: usize) -> impl Iterator<Item = Digraph> {
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|u| (0..m).map(move |v| (u, v)))
        .collect();
    (0u32..1 << pairs.len()).map(move |mask| {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Digraph::directed(m, &edges).unwrap()
    })
}

#[test]
fn compatible_strongly_connected_length_one_digraphs_have_loops() {
    // min-chain on 3 elements: every compatible strongly connected digraph
    // with algebraic length 1 must carry a loop, and the oracle finds it
    let min = OpTable::min_chain(3).unwrap();
    let mut checked = 0usize;
    for g in all_digraphs(3) {
        if g.edge_count() == 0 || !is_strongly_connected(&g) {
            continue;
        }
        if !is_compatible(&min, &Relation::from_digraph(&g)).unwrap() {
            continue;
        }
        if !algebraic_length_one(&g).unwrap() {
            continue;
        }
        checked += 1;
        let witness = loop_oracle(&min, &g, 100_000).unwrap();
        assert!(witness.is_some(), "no loop found for {g:?}");
        // compatibility means the closure stays at the edge set: the loop is
        // a real edge
        let v = witness.unwrap().vertex;
        assert!(g.has_edge(v, v));
    }
    assert!(checked > 0, "the sweep must cover some instances");
}

#[test]
fn sampling_is_deterministic_over_repeated_runs() {
    let mut edges = Vec::new();
    for u in 0..3 {
        for v in 0..3 {
            if u != v {
                edges.push((u, v));
            }
        }
    }
    let g = Digraph::directed(3, &edges).unwrap();
    let opts = InstanceOptions {
        require_compatible: false,
        ..Default::default()
    };
    let build = || {
        prepare_instance(
            g.clone(),
            OpTable::min_chain(3).unwrap(),
            AlphaMatrix::new(vec![vec![1, 0], vec![1, 2]]).unwrap(),
            &opts,
        )
        .unwrap()
    };
    let a = sample_dichotomy(&build(), 1000, 7).unwrap();
    let b = sample_dichotomy(&build(), 1000, 7).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    let c = sample_dichotomy(&build(), 1000, 8).unwrap();
    assert_ne!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&c).unwrap()
    );
}

#[test]
fn reduced_extraction_agrees_with_the_oracle_when_clean() {
    // complete graph with all loops: min-compatible, every hypothesis holds
    let mut edges = Vec::new();
    for u in 0..3 {
        for v in 0..3 {
            edges.push((u, v));
        }
    }
    let g = Digraph::directed(3, &edges).unwrap();
    let min = OpTable::min_chain(3).unwrap();
    let alpha = AlphaMatrix::new(vec![vec![1, 0], vec![1, 2]]).unwrap();
    let opts = InstanceOptions {
        reduced: Some(ReducedOverrides {
            window: 3,
            right: 5,
            left: 5,
        }),
        ..Default::default()
    };
    let inst = prepare_instance(g.clone(), min.clone(), alpha, &opts).unwrap();
    let report = verify_dichotomy_exhaustive(&inst).unwrap();
    if report.stats.violations == 0 {
        let extraction = extract_loop(&inst).unwrap();
        assert!(g.has_edge(extraction.vertex, extraction.vertex));
        let oracle = loop_oracle(&min, &g, 100_000).unwrap().unwrap();
        assert!(g.has_edge(oracle.vertex, oracle.vertex));
    } else {
        // violations must be reproducible
        let again = verify_dichotomy_exhaustive(&inst).unwrap();
        assert_eq!(report.violating_words, again.violating_words);
    }
}

#[test]
fn double_loop_pipeline_over_the_builtin_suite() {
    // idempotent Taylor algebras must yield a double loop; the projection
    // algebra must not
    for (name, op) in [
        ("majority3", OpTable::majority3().unwrap()),
        ("minority3", OpTable::minority3().unwrap()),
        ("min-chain", OpTable::min_chain(2).unwrap()),
    ] {
        let x_set = vec![0usize, 1];
        assert!(
            find_taylor_system(&op, &x_set, true).unwrap().is_some(),
            "{name} should be Taylor on {{0, 1}}"
        );
        let free = local_free_algebra(std::slice::from_ref(&op), &x_set, 1_000_000).unwrap();
        let q = generate_q(&free, std::slice::from_ref(&op), 1_000_000).unwrap();
        let dl = find_double_loop(&q).unwrap_or_else(|| panic!("{name}: no double loop"));
        let term = extract_double_loop_term(&free, &q, &dl, std::slice::from_ref(&op)).unwrap();
        assert!(term.verified, "{name}: {:?}", term.equations);
    }

    let proj = OpTable::projection(1, 3, 2).unwrap();
    let free = local_free_algebra(std::slice::from_ref(&proj), &[0, 1], 1_000_000).unwrap();
    let q = generate_q(&free, std::slice::from_ref(&proj), 1_000_000).unwrap();
    assert!(find_double_loop(&q).is_none());
}

#[test]
fn e_absorption_quadruples_land_in_q() {
    // one coordinate agrees, all others differ: applying the operation to
    // such argument columns stays inside Q
    let op = OpTable::majority3().unwrap();
    let x_set = vec![0usize, 1];
    let free = local_free_algebra(std::slice::from_ref(&op), &x_set, 1_000_000).unwrap();
    let q = generate_q(&free, std::slice::from_ref(&op), 1_000_000).unwrap();
    let sys = find_taylor_system(&op, &x_set, true).unwrap().unwrap();
    let lifted = &q.lifted_ops()[0];
    let (x, y) = (free.x(), free.y());
    let quads: std::collections::HashSet<Vec<usize>> = q.quads().iter().cloned().collect();

    for i in 0..op.arity() {
        let row = &sys.rows[i];
        // a-side: arbitrary at coordinate i, disagreeing elsewhere
        for &a_at_i in &[x, y] {
            let mut a = vec![0usize; op.arity()];
            let mut a_prime = vec![0usize; op.arity()];
            for j in 0..op.arity() {
                if j == i {
                    a[j] = a_at_i;
                    a_prime[j] = a_at_i;
                } else {
                    a[j] = x;
                    a_prime[j] = y;
                }
            }
            let b: Vec<usize> = row.left.iter().map(|s| s.pick(x, y)).collect();
            let b_prime: Vec<usize> = row.right.iter().map(|s| s.pick(x, y)).collect();
            let quad = vec![
                lifted.apply(&a),
                lifted.apply(&a_prime),
                lifted.apply(&b),
                lifted.apply(&b_prime),
            ];
            assert!(quads.contains(&quad), "row {i}: {quad:?} missing from Q");
        }
    }
}

#[test]
fn closure_edges_have_star_power_witnesses() {
    // every transitive-closure edge of P(t, i) is realized by a substitution
    // fixing the all-i leaf to the source
    for op in [
        OpTable::min_chain(3).unwrap(),
        OpTable::majority3().unwrap(),
        OpTable::minority3().unwrap(),
    ] {
        for i in 0..op.arity() {
            let closure = transitive_closure(&coordinate_digraph(&op, i).unwrap().graph);
            for (u, v) in closure.edges() {
                let args = closure_path_args(&op, i, u, v).unwrap().unwrap();
                if args.len() > 6 {
                    continue;
                }
                let f = walk_substitution(&op, i, &args).unwrap();
                assert_eq!(f.value_at(&vec![i as u8; f.depth()]), u);
                assert_eq!(star_power_eval(&op, &f).unwrap(), v);
            }
        }
    }
}

#[test]
fn strong_pipeline_sweeps_min_compatible_digraphs() {
    // all semilattice-compatible strongly connected digraphs of algebraic
    // length 1 on up to 4 vertices carry a loop, with oracle agreement
    for m in 3..=4usize {
        let min = OpTable::min_chain(m).unwrap();
        let mut eligible = 0usize;
        for g in all_digraphs(m) {
            if g.edge_count() == 0
                || !is_strongly_connected(&g)
                || !is_compatible(&min, &Relation::from_digraph(&g)).unwrap()
                || !algebraic_length_one(&g).unwrap()
            {
                continue;
            }
            eligible += 1;
            let report = strong_loop_pipeline(&min, &g, 100_000).unwrap();
            let v = report.loop_vertex.expect("theorem guarantees a loop");
            assert!(g.has_edge(v, v));
            assert_eq!(report.loop_vertex, report.oracle_loop.map(|_| v));
            assert!(report.witnesses.is_some());
        }
        assert!(eligible > 0, "sweep on {m} vertices matched nothing");
    }
}

#[test]
fn extraction_edge_assertion_fires_on_loopless_instances() {
    // relaxing compatibility lets a loopless instance through; the exhaustive
    // dichotomy is clean, the star-power identity still holds by idempotency,
    // and the final edge assertion is what reports the failure
    let mut edges = Vec::new();
    for u in 0..3 {
        for v in 0..3 {
            if u != v {
                edges.push((u, v));
            }
        }
    }
    let g = Digraph::directed(3, &edges).unwrap();
    let opts = InstanceOptions {
        reduced: Some(ReducedOverrides {
            window: 3,
            right: 4,
            left: 4,
        }),
        require_compatible: false,
        ..Default::default()
    };
    let inst = prepare_instance(
        g,
        OpTable::min_chain(3).unwrap(),
        AlphaMatrix::new(vec![vec![1, 0], vec![1, 2]]).unwrap(),
        &opts,
    )
    .unwrap();
    assert_eq!(
        verify_dichotomy_exhaustive(&inst).unwrap().stats.violations,
        0
    );
    let err = extract_loop(&inst).unwrap_err();
    let message = err.to_string();
    assert!(message.contains("not an edge"), "unexpected diagnostic: {message}");
}
