//! Coordinate digraphs `P(t, i)`, their transitive closures, fan-in
//! witnesses, and the strong loop pipeline.
//!
//! `P(t, i)` has an edge `x_i -> t(x_0, ..., x_{n-1})` for every argument
//! tuple; for idempotent `t` it is reflexive. An edge in its transitive
//! closure corresponds to a star-power evaluation pinning the target from
//! the source ([`walk_substitution`] builds the witnessing substitution).

use serde::Serialize;

use crate::algebra::closure::loop_oracle;
use crate::algebra::op::{is_compatible, is_idempotent, OpTable, Relation};
use crate::algebra::star::StarSubstitution;
use crate::algebra::taylor::TaylorSystem;
use crate::bits::BitMatrix;
use crate::digraph::{
    algebraic_length_one, is_strongly_connected, relational_power, uniform_walk_constant, Digraph,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct CoordinateDigraph {
    pub coordinate: usize,
    pub graph: Digraph,
}

/// The digraph `P(t, i)` on the domain, by exhaustive enumeration of the
/// `m^n` argument tuples.
pub fn coordinate_digraph(t: &OpTable, coordinate: usize) -> Result<CoordinateDigraph> {
    let n = t.arity();
    if coordinate >= n {
        return Err(Error::InvalidParams(format!(
            "coordinate {coordinate} out of range for arity {n}"
        )));
    }
    let m = t.domain();
    let mut adj = BitMatrix::zeros(m);
    let mut args = vec![0usize; n];
    loop {
        adj.set(args[coordinate], t.apply(&args));
        let mut done = true;
        for j in (0..n).rev() {
            args[j] += 1;
            if args[j] < m {
                done = false;
                break;
            }
            args[j] = 0;
        }
        if done {
            break;
        }
    }
    Ok(CoordinateDigraph {
        coordinate,
        graph: Digraph::from_matrix(adj, false),
    })
}

/// Transitive closure: `u -> v` iff a walk of length at least 1 exists.
pub fn transitive_closure(g: &Digraph) -> Digraph {
    let mut closure = g.adjacency().clone();
    loop {
        let next = closure.union(&closure.mul(g.adjacency()));
        if next == closure {
            break;
        }
        closure = next;
    }
    Digraph::from_matrix(closure, false)
}

/// For each coordinate, the lexicographically first edge of `g` that also
/// lies in the transitive closure of `P(t, i)`; `None` when some coordinate
/// has no common edge.
pub fn strong_witnesses(t: &OpTable, g: &Digraph) -> Result<Option<Vec<(usize, usize)>>> {
    if t.domain() != g.vertex_count() {
        return Err(Error::DomainMismatch {
            expected: g.vertex_count(),
            found: t.domain(),
        });
    }
    let edges = g.edges();
    let mut out = Vec::with_capacity(t.arity());
    for i in 0..t.arity() {
        let closure = transitive_closure(&coordinate_digraph(t, i)?.graph);
        match edges.iter().find(|&&(u, v)| closure.has_edge(u, v)) {
            Some(&e) => out.push(e),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

fn fanin_with_closure(closure: &Digraph, x_set: &[usize]) -> Option<usize> {
    let m = closure.vertex_count();
    if m == 0 {
        return None;
    }
    let mut sorted = x_set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let Some((&first, rest)) = sorted.split_first() else {
        return Some(0); // any vertex serves the empty set
    };
    // base of the induction: reflexivity serves a singleton for idempotent
    // operations; otherwise any closure successor does
    let mut b = if closure.has_edge(first, first) {
        first
    } else {
        (0..m).find(|&w| closure.has_edge(first, w))?
    };
    for &x in rest {
        b = (0..m).find(|&w| closure.has_edge(b, w) && closure.has_edge(x, w))?;
    }
    // direct re-check; transitivity of the closure makes this a no-op
    if sorted.iter().any(|&x| !closure.has_edge(x, b)) {
        return None;
    }
    Some(b)
}

/// A vertex `b` with a closure edge `x -> b` for every `x` in `X`, built by
/// iterated merging through the pairwise fan-in hypothesis; `None` when the
/// hypothesis fails along the way.
pub fn fanin_vertex(t: &OpTable, coordinate: usize, x_set: &[usize]) -> Result<Option<usize>> {
    if let Some(&bad) = x_set.iter().find(|&&v| v >= t.domain()) {
        return Err(Error::DomainMismatch {
            expected: t.domain(),
            found: bad,
        });
    }
    let closure = transitive_closure(&coordinate_digraph(t, coordinate)?.graph);
    Ok(fanin_with_closure(&closure, x_set))
}

/// Evaluate both sides of Taylor row `i` with `x := u`, `y := v`; the row
/// holding on the full domain makes the two sides equal, and the common
/// value has `P(t, i)`-edges from both `u` and `v`.
pub fn taylor_corollary_witness(
    t: &OpTable,
    system: &TaylorSystem,
    coordinate: usize,
    u: usize,
    v: usize,
) -> Result<usize> {
    let row = system
        .rows
        .get(coordinate)
        .ok_or_else(|| Error::InvalidParams(format!("system has no row {coordinate}")))?;
    let left: Vec<usize> = row.left.iter().map(|s| s.pick(u, v)).collect();
    let right: Vec<usize> = row.right.iter().map(|s| s.pick(u, v)).collect();
    let w_left = t.apply(&left);
    let w_right = t.apply(&right);
    if w_left != w_right {
        return Err(Error::Inconsistency(format!(
            "Taylor row {coordinate} violated at (u, v) = ({u}, {v}): {w_left} != {w_right}"
        )));
    }
    Ok(w_left)
}

/// The substitution witnessing a closure edge: given the argument tuples of
/// a `P(t, i)`-walk `w_0 -> ... -> w_k` (tuple `j` maps `w_j` to `w_{j+1}`,
/// with `args[j][i] = w_j`), build `f` of depth `k` with
/// `f([i, ..., i]) = w_0` and `t*k(f) = w_k`.
///
/// Leaves outside the all-`i` spine are constant on each subtree, so
/// idempotency collapses them to the walk's argument entries.
pub fn walk_substitution(
    t: &OpTable,
    coordinate: usize,
    walk_args: &[Vec<usize>],
) -> Result<StarSubstitution> {
    let n = t.arity();
    if coordinate >= n {
        return Err(Error::InvalidParams(format!(
            "coordinate {coordinate} out of range for arity {n}"
        )));
    }
    for (j, args) in walk_args.iter().enumerate() {
        if args.len() != n {
            return Err(Error::InvalidParams(format!(
                "walk step {j} has {} arguments, expected {n}",
                args.len()
            )));
        }
    }
    let depth = walk_args.len();
    if depth == 0 {
        return Err(Error::InvalidParams("walk must have at least one step".into()));
    }
    let start = walk_args[0][coordinate];
    StarSubstitution::from_fn(depth, n, |word| {
        match word.iter().position(|&l| l as usize != coordinate) {
            None => start,
            Some(p) => walk_args[depth - 1 - p][word[p] as usize],
        }
    })
}

/// Argument tuples along the lexicographically-first shortest `P(t, i)`-walk
/// from `u` to `v`: step `j` is the lexicographically first tuple with
/// `args[i] = w_j` and `t(args) = w_{j+1}`.
pub fn closure_path_args(
    t: &OpTable,
    coordinate: usize,
    from: usize,
    to: usize,
) -> Result<Option<Vec<Vec<usize>>>> {
    let p = coordinate_digraph(t, coordinate)?.graph;
    let m = p.vertex_count();
    // BFS distances toward `to`
    let mut dist = vec![usize::MAX; m];
    dist[to] = 0;
    let mut queue = std::collections::VecDeque::from([to]);
    while let Some(w) = queue.pop_front() {
        for u in 0..m {
            if p.has_edge(u, w) && dist[u] == usize::MAX {
                dist[u] = dist[w] + 1;
                queue.push_back(u);
            }
        }
    }
    let mut path_args = Vec::new();
    let mut cur = from;
    if from == to {
        // a closure edge (u, u) needs a closed walk of length >= 1: take the
        // smallest successor closest to the target
        let first = (0..m)
            .filter(|&w| p.has_edge(from, w) && dist[w] != usize::MAX)
            .min_by_key(|&w| (dist[w], w));
        let Some(w) = first else {
            return Ok(None);
        };
        path_args.push(first_args(t, coordinate, from, w).expect("edge has a witness"));
        cur = w;
    } else if dist[from] == usize::MAX {
        return Ok(None);
    }
    while cur != to {
        let next = (0..m)
            .find(|&w| p.has_edge(cur, w) && dist[w] != usize::MAX && dist[w] + 1 == dist[cur])
            .expect("distance decreases along some edge");
        path_args.push(first_args(t, coordinate, cur, next).expect("edge has a witness"));
        cur = next;
    }
    Ok(Some(path_args))
}

/// Lexicographically first argument tuple with `args[i] = from` and
/// `t(args) = to`.
fn first_args(t: &OpTable, coordinate: usize, from: usize, to: usize) -> Option<Vec<usize>> {
    let n = t.arity();
    let m = t.domain();
    let mut args = vec![0usize; n];
    args[coordinate] = from;
    loop {
        if t.apply(&args) == to {
            return Some(args);
        }
        let mut done = true;
        for j in (0..n).rev() {
            if j == coordinate {
                continue;
            }
            args[j] += 1;
            if args[j] < m {
                done = false;
                break;
            }
            args[j] = 0;
        }
        if done {
            return None;
        }
    }
}

#[derive(Debug, Serialize)]
pub struct StrongLoopReport {
    pub loop_vertex: Option<usize>,
    pub witnesses: Option<Vec<(usize, usize)>>,
    /// The largest length with no closed walk, computed only on the
    /// (unreachable for valid inputs) no-loop branch.
    pub k: Option<usize>,
    pub oracle_loop: Option<usize>,
}

/// The strong loop pipeline. Hypotheses: `t` idempotent, the pairwise
/// fan-in property for every coordinate, and `g` strongly connected,
/// compatible, of algebraic length 1. Under these the digraph must carry a
/// loop; the no-loop branch assembles the power instance that demonstrates
/// the contradiction and fails hard after the oracle confirms consistency.
pub fn strong_loop_pipeline(
    t: &OpTable,
    g: &Digraph,
    closure_budget: usize,
) -> Result<StrongLoopReport> {
    if !is_idempotent(t) {
        return Err(Error::Hypothesis {
            name: "idempotency",
            detail: "operation is not idempotent".into(),
        });
    }
    if t.domain() != g.vertex_count() {
        return Err(Error::DomainMismatch {
            expected: g.vertex_count(),
            found: t.domain(),
        });
    }
    let m = t.domain();
    for i in 0..t.arity() {
        let closure = transitive_closure(&coordinate_digraph(t, i)?.graph);
        for u in 0..m {
            for v in 0..m {
                if fanin_with_closure(&closure, &[u, v]).is_none() {
                    return Err(Error::Hypothesis {
                        name: "fan-in",
                        detail: format!(
                            "coordinate {i}: no common closure successor for the pair ({u}, {v})"
                        ),
                    });
                }
            }
        }
    }
    if !is_compatible(t, &Relation::from_digraph(g))? {
        return Err(Error::Hypothesis {
            name: "compatibility",
            detail: "operation is not compatible with the digraph".into(),
        });
    }
    if !is_strongly_connected(g) {
        return Err(Error::Hypothesis {
            name: "strong connectivity",
            detail: "digraph is not strongly connected".into(),
        });
    }
    if !algebraic_length_one(g)? {
        return Err(Error::Hypothesis {
            name: "algebraic length",
            detail: "digraph maps onto a directed cycle of length > 1".into(),
        });
    }

    let oracle_loop = loop_oracle(t, g, closure_budget)?.map(|w| w.vertex);
    if let Some(v) = g.first_loop() {
        return Ok(StrongLoopReport {
            loop_vertex: Some(v),
            witnesses: strong_witnesses(t, g)?,
            k: None,
            oracle_loop,
        });
    }

    // No loop: the theorem says this cannot happen. Assemble the instance
    // that exhibits the contradiction, then fail hard.
    let uniform = uniform_walk_constant(g)?;
    let lengths = crate::digraph::cycle_lengths(g, uniform);
    let k = (1..=uniform)
        .rev()
        .find(|l| !lengths.contains(l))
        .expect("length 1 has no closed walk in a loopless digraph");
    let power = relational_power(g, k)?;
    let mut witnesses = Vec::with_capacity(t.arity());
    for i in 0..t.arity() {
        let b = fanin_vertex(t, i, &(0..m).collect::<Vec<_>>())?
            .expect("fan-in hypothesis was verified above");
        let a = (0..m)
            .find(|&a| power.has_edge(a, b))
            .expect("strongly connected power has in-edges everywhere");
        witnesses.push((a, b));
    }
    if oracle_loop.is_some() {
        return Err(Error::Inconsistency(format!(
            "digraph has no loop edge but the closure oracle derived one; \
             compatibility checking is broken (witnesses {witnesses:?})"
        )));
    }
    Err(Error::Inconsistency(format!(
        "all hypotheses hold, the digraph has no loop, and the oracle agrees: \
         the {k}-th power instance with witnesses {witnesses:?} contradicts the \
         loop theorem, which indicates a checker bug"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_digraph_examples() {
        // idempotent => reflexive
        let maj = OpTable::majority3().unwrap();
        for i in 0..3 {
            let p = coordinate_digraph(&maj, i).unwrap().graph;
            for v in 0..2 {
                assert!(p.has_edge(v, v));
            }
        }

        // first projection: exactly the diagonal
        let proj = OpTable::projection(0, 2, 3).unwrap();
        let p = coordinate_digraph(&proj, 0).unwrap().graph;
        assert_eq!(p.edges(), vec![(0, 0), (1, 1), (2, 2)]);

        // min at coordinate 0: x -> y for all y <= x
        let min = OpTable::min_chain(3).unwrap();
        let p = coordinate_digraph(&min, 0).unwrap().graph;
        assert_eq!(
            p.edges(),
            vec![(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]
        );
    }

    #[test]
    fn transitive_closure_examples() {
        let path = Digraph::directed(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            transitive_closure(&path).edges(),
            vec![(0, 1), (0, 2), (1, 2)]
        );

        let c2 = Digraph::directed(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(
            transitive_closure(&c2).edges(),
            vec![(0, 0), (0, 1), (1, 0), (1, 1)]
        );
    }

    #[test]
    fn strong_witness_examples() {
        // loop at v qualifies for every coordinate
        let maj = OpTable::majority3().unwrap();
        let g = Digraph::directed(2, &[(1, 1), (0, 1)]).unwrap();
        let ws = strong_witnesses(&maj, &g).unwrap().unwrap();
        assert_eq!(ws.len(), 3);

        // min decreases along coordinate 0
        let min = OpTable::min_chain(2).unwrap();
        let g = Digraph::directed(2, &[(0, 1), (1, 0)]).unwrap();
        let ws = strong_witnesses(&min, &g).unwrap().unwrap();
        assert_eq!(ws[0], (1, 0));

        // projection at the other coordinate has only the diagonal closure
        let proj1 = OpTable::projection(1, 2, 2).unwrap();
        let g = Digraph::directed(2, &[(0, 1)]).unwrap();
        assert!(strong_witnesses(&proj1, &g).unwrap().is_none());
    }

    #[test]
    fn fanin_examples() {
        let min = OpTable::min_chain(3).unwrap();
        assert_eq!(fanin_vertex(&min, 0, &[]).unwrap(), Some(0));
        assert_eq!(fanin_vertex(&min, 0, &[2]).unwrap(), Some(2));
        assert_eq!(fanin_vertex(&min, 0, &[0, 1, 2]).unwrap(), Some(0));

        let maj = OpTable::majority3().unwrap();
        assert_eq!(fanin_vertex(&maj, 0, &[1]).unwrap(), Some(1));
    }

    #[test]
    fn corollary_witness_examples() {
        let maj = OpTable::majority3().unwrap();
        let sys = crate::algebra::taylor::find_taylor_system(&maj, &[0, 1], true)
            .unwrap()
            .unwrap();
        for i in 0..3 {
            for u in 0..2 {
                for v in 0..2 {
                    let w = taylor_corollary_witness(&maj, &sys, i, u, v).unwrap();
                    // the witness has P(t, i)-edges from both u and v
                    let p = coordinate_digraph(&maj, i).unwrap().graph;
                    assert!(p.has_edge(u, w));
                    assert!(p.has_edge(v, w));
                }
            }
        }
    }

    #[test]
    fn walk_substitution_witnesses_closure_edges() {
        use crate::algebra::star::{star_power_eval, DEFAULT_LEAF_BUDGET};
        let min = OpTable::min_chain(3).unwrap();
        for i in 0..2 {
            let closure = transitive_closure(&coordinate_digraph(&min, i).unwrap().graph);
            for (u, v) in closure.edges() {
                let args = closure_path_args(&min, i, u, v).unwrap().unwrap();
                if (min.arity() as u64).pow(args.len() as u32) > DEFAULT_LEAF_BUDGET {
                    continue;
                }
                let f = walk_substitution(&min, i, &args).unwrap();
                assert_eq!(f.value_at(&vec![i as u8; f.depth()]), u);
                assert_eq!(star_power_eval(&min, &f).unwrap(), v);
            }
        }
    }

    #[test]
    fn pipeline_reports_loops() {
        let min = OpTable::min_chain(3).unwrap();
        // strongly connected, compatible with min, algebraic length 1:
        // the down-set closure of edges with a loop at 0
        let g = Digraph::directed(3, &[(0, 0), (0, 1), (1, 0), (1, 2), (2, 0), (0, 2), (2, 1), (1, 1), (2, 2)])
            .unwrap();
        let report = strong_loop_pipeline(&min, &g, 100_000).unwrap();
        assert_eq!(report.loop_vertex, Some(0));
        assert!(report.oracle_loop.is_some());
        assert!(report.witnesses.is_some());
        assert_eq!(report.k, None);
    }

    #[test]
    fn pipeline_rejects_directed_three_cycle() {
        let min = OpTable::min_chain(3).unwrap();
        let g = Digraph::directed(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let err = strong_loop_pipeline(&min, &g, 100_000);
        assert!(matches!(err, Err(Error::Hypothesis { .. })));
    }

    #[test]
    fn pipeline_rejects_projection_fanin() {
        let proj = OpTable::projection(0, 2, 2).unwrap();
        let g = Digraph::directed(2, &[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let err = strong_loop_pipeline(&proj, &g, 100_000);
        assert!(matches!(
            err,
            Err(Error::Hypothesis { name: "fan-in", .. })
        ));
    }
}
