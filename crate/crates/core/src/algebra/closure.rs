//! Subpower closure: the least set of tuples containing the generators and
//! closed under coordinatewise application of the given operations.
//!
//! The closure runs a semi-naive worklist: each round combines previously
//! known tuples, requiring at least one argument from the newest frontier,
//! and iterates argument indices lexicographically. Discovery order is
//! therefore deterministic, and with tracking enabled every tuple carries
//! the first (shallowest-round) derivation that produced it.

use std::collections::HashMap;

use crate::algebra::op::OpTable;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::term::{TermArena, TermNode};

pub const DEFAULT_CLOSURE_BUDGET: usize = 10_000_000;

pub struct Closure {
    arity: usize,
    domain: usize,
    tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    generator_count: usize,
    derivations: Option<TermArena>,
}

impl Closure {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Tuples in discovery order: generators first, then round by round.
    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.index.contains_key(tuple)
    }

    pub fn position(&self, tuple: &[usize]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    /// Derivation arena; node `i` derives tuple `i`.
    pub fn derivations(&self) -> Option<&TermArena> {
        self.derivations.as_ref()
    }
}

pub fn subpower_closure(
    ops: &[OpTable],
    generators: &[Vec<usize>],
    track: bool,
    max_tuples: usize,
) -> Result<Closure> {
    if ops.is_empty() {
        return Err(Error::InvalidParams("closure needs at least one operation".into()));
    }
    let domain = ops[0].domain();
    for op in ops {
        if op.domain() != domain {
            return Err(Error::DomainMismatch {
                expected: domain,
                found: op.domain(),
            });
        }
    }
    let arity = generators.first().map_or(0, |t| t.len());
    for t in generators {
        if t.len() != arity {
            return Err(Error::InvalidRelation(format!(
                "generator {t:?} has arity {}, expected {arity}",
                t.len()
            )));
        }
        if let Some(&bad) = t.iter().find(|&&v| v >= domain) {
            return Err(Error::InvalidRelation(format!(
                "generator entry {bad} outside domain [0, {domain})"
            )));
        }
    }

    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut arena = track.then(TermArena::new);
    for g in generators {
        if !index.contains_key(g) {
            index.insert(g.clone(), tuples.len());
            if let Some(a) = arena.as_mut() {
                a.push(TermNode::Gen(tuples.len()));
            }
            tuples.push(g.clone());
        }
    }
    let generator_count = tuples.len();

    if generator_count == 0 {
        return Ok(Closure {
            arity,
            domain,
            tuples,
            index,
            generator_count,
            derivations: arena,
        });
    }

    let mut frontier_lo = 0usize;
    loop {
        let known = tuples.len();
        let mut produced = false;
        for (op_idx, op) in ops.iter().enumerate() {
            let n = op.arity();
            let mut pick = vec![0usize; n];
            let mut args = vec![0usize; n];
            let mut image = vec![0usize; arity];
            'combos: loop {
                if pick.iter().any(|&i| i >= frontier_lo) {
                    for c in 0..arity {
                        for j in 0..n {
                            args[j] = tuples[pick[j]][c];
                        }
                        image[c] = op.apply(&args);
                    }
                    if !index.contains_key(&image) {
                        if tuples.len() >= max_tuples {
                            return Err(Error::BudgetExceeded {
                                what: "closure tuples",
                                needed: tuples.len() as u64 + 1,
                                budget: max_tuples as u64,
                            });
                        }
                        index.insert(image.clone(), tuples.len());
                        if let Some(a) = arena.as_mut() {
                            a.push(TermNode::App {
                                op: op_idx,
                                args: pick.clone(),
                            });
                        }
                        tuples.push(image.clone());
                        produced = true;
                    }
                }
                // lexicographic odometer over [0, known)^n
                let mut done = true;
                for j in (0..n).rev() {
                    pick[j] += 1;
                    if pick[j] < known {
                        done = false;
                        break;
                    }
                    pick[j] = 0;
                }
                if done {
                    break 'combos;
                }
            }
        }
        if !produced {
            break;
        }
        frontier_lo = known;
    }

    Ok(Closure {
        arity,
        domain,
        tuples,
        index,
        generator_count,
        derivations: arena,
    })
}

/// A loop found by closing a digraph's edge set under an operation.
pub struct LoopWitness {
    pub vertex: usize,
    pub arena: TermArena,
    pub root: usize,
}

/// Close the edge set of `g` under `t` and return the first diagonal pair
/// together with its derivation. When `t` is compatible with `g` the closure
/// is the edge set itself, so this reduces to scanning for loops.
pub fn loop_oracle(t: &OpTable, g: &Digraph, max_tuples: usize) -> Result<Option<LoopWitness>> {
    if t.domain() != g.vertex_count() {
        return Err(Error::DomainMismatch {
            expected: g.vertex_count(),
            found: t.domain(),
        });
    }
    let generators: Vec<Vec<usize>> = g.edges().into_iter().map(|(u, v)| vec![u, v]).collect();
    let closure = subpower_closure(std::slice::from_ref(t), &generators, true, max_tuples)?;
    for (i, tuple) in closure.tuples().iter().enumerate() {
        if tuple[0] == tuple[1] {
            return Ok(Some(LoopWitness {
                vertex: tuple[0],
                arena: closure.derivations().unwrap().clone(),
                root: i,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_generators_stay_fixed() {
        let min = OpTable::min_chain(2).unwrap();
        let gens = vec![vec![0, 0], vec![1, 1]];
        let c = subpower_closure(&[min], &gens, false, 1000).unwrap();
        assert_eq!(c.tuples(), gens.as_slice());
    }

    #[test]
    fn min_closure_adds_the_lower_diagonal() {
        // enumerating min over all pairs of generators: the only new tuple
        // is (0, 0); a first coordinate of 1 would need both arguments to
        // start with 1
        let min = OpTable::min_chain(2).unwrap();
        let gens = vec![vec![0, 1], vec![1, 0]];
        let c = subpower_closure(&[min.clone()], &gens, true, 1000).unwrap();
        let mut tuples = c.tuples().to_vec();
        tuples.sort();
        assert_eq!(tuples, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        // every derivation re-evaluates to its tuple
        let arena = c.derivations().unwrap();
        for (i, tuple) in c.tuples().iter().enumerate() {
            let gens_slice: Vec<Vec<usize>> = c.tuples()[..c.generator_count()].to_vec();
            assert_eq!(
                arena.eval_tuple(i, std::slice::from_ref(&min), &gens_slice),
                *tuple
            );
        }
    }

    #[test]
    fn singleton_generator_under_idempotent_op_stays_singleton() {
        let maj = OpTable::majority3().unwrap();
        let c = subpower_closure(&[maj], &[vec![1, 0]], false, 1000).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn closure_is_idempotent() {
        let min = OpTable::min_chain(3).unwrap();
        let gens = vec![vec![0, 2], vec![2, 1], vec![1, 1]];
        let c1 = subpower_closure(&[min.clone()], &gens, false, 1000).unwrap();
        let c2 = subpower_closure(&[min], c1.tuples(), false, 1000).unwrap();
        let mut a = c1.tuples().to_vec();
        let mut b = c2.tuples().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn oracle_finds_generator_loops_immediately() {
        let min = OpTable::min_chain(3).unwrap();
        let g = crate::digraph::Digraph::directed(3, &[(0, 2), (1, 1), (2, 0)]).unwrap();
        let w = loop_oracle(&min, &g, 1000).unwrap().unwrap();
        assert_eq!(w.vertex, 1);
        assert!(matches!(w.arena.node(w.root), TermNode::Gen(_)));
    }

    #[test]
    fn oracle_on_min_chain_two_cycle() {
        let min = OpTable::min_chain(2).unwrap();
        let g = crate::digraph::Digraph::directed(2, &[(0, 1), (1, 0)]).unwrap();
        let w = loop_oracle(&min, &g, 1000).unwrap().unwrap();
        assert_eq!(w.vertex, 0);
        assert!(matches!(w.arena.node(w.root), TermNode::App { .. }));
    }

    #[test]
    fn oracle_finds_nothing_for_projection_on_symmetric_loopless() {
        let proj = OpTable::projection(0, 3, 3).unwrap();
        let g = crate::digraph::Digraph::directed(
            3,
            &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)],
        )
        .unwrap();
        assert!(loop_oracle(&proj, &g, 1000).unwrap().is_none());
    }

    #[test]
    fn budget_reports_diagnostic() {
        // binary successor-mod table generates lots of tuples
        let succ = OpTable::from_fn(2, 5, |a| (a[0] + a[1] + 1) % 5).unwrap();
        let gens = vec![vec![0, 1], vec![1, 3]];
        let err = subpower_closure(&[succ], &gens, false, 3);
        assert!(matches!(err, Err(Error::BudgetExceeded { .. })));
    }
}
