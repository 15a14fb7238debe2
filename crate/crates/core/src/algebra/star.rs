//! Star powers of an operation and their substitutions.
//!
//! The `k`-th star power of an `n`-ary operation `t` is the `n^k`-ary
//! operation obtained by composing `t` with itself in a complete depth-`k`
//! tree. Variables are indexed by words over `[0, n)` of length `k`, the
//! leftmost letter naming the outermost branch.
//!
//! Two recursive decompositions evaluate a substitution `f`:
//!
//! * outer: `t*k(f) = t(t*(k-1)(f_0), ..., t*(k-1)(f_{n-1}))` with
//!   `f_i(x) = f([i] + x)` — implemented as a depth-first walk;
//! * inner: `t*k(f) = t*(k-1)(f')` with
//!   `f'(x) = t(f(x + [0]), ..., f(x + [n-1]))` — implemented by folding the
//!   last letter of the table layer by layer.
//!
//! The two routes must agree everywhere; the test suites exercise exactly
//! that equality.

use crate::algebra::op::OpTable;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::words::letters_from_index;

/// A total assignment of domain elements to the `n^k` variables of a star
/// power, stored in word-rank order (leftmost letter most significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarSubstitution {
    depth: usize,
    alphabet: usize,
    values: Vec<usize>,
}

pub const DEFAULT_LEAF_BUDGET: u64 = 1 << 24;

fn leaf_count(alphabet: usize, depth: usize, budget: u64) -> Result<u64> {
    let needed = (alphabet as u64)
        .checked_pow(depth as u32)
        .ok_or(Error::BudgetExceeded {
            what: "star-power leaves",
            needed: u64::MAX,
            budget,
        })?;
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "star-power leaves",
            needed,
            budget,
        });
    }
    Ok(needed)
}

impl StarSubstitution {
    pub fn new(depth: usize, alphabet: usize, values: Vec<usize>) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidParams("alphabet must be nonempty".into()));
        }
        let expected = leaf_count(alphabet, depth, DEFAULT_LEAF_BUDGET)?;
        if values.len() as u64 != expected {
            return Err(Error::InvalidParams(format!(
                "substitution has {} values, expected {expected}",
                values.len()
            )));
        }
        Ok(StarSubstitution {
            depth,
            alphabet,
            values,
        })
    }

    pub fn from_fn(
        depth: usize,
        alphabet: usize,
        mut f: impl FnMut(&[u8]) -> usize,
    ) -> Result<Self> {
        let count = leaf_count(alphabet, depth, DEFAULT_LEAF_BUDGET)? as usize;
        let values = (0..count)
            .map(|i| f(&letters_from_index(i, depth, alphabet)))
            .collect();
        StarSubstitution::new(depth, alphabet, values)
    }

    pub fn constant(depth: usize, alphabet: usize, value: usize) -> Result<Self> {
        let count = leaf_count(alphabet, depth, DEFAULT_LEAF_BUDGET)? as usize;
        StarSubstitution::new(depth, alphabet, vec![value; count])
    }

    pub fn random(depth: usize, alphabet: usize, domain: usize, rng: &mut SplitMix64) -> Result<Self> {
        let count = leaf_count(alphabet, depth, DEFAULT_LEAF_BUDGET)? as usize;
        StarSubstitution::new(
            depth,
            alphabet,
            (0..count).map(|_| rng.below(domain as u64) as usize).collect(),
        )
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value_at(&self, word: &[u8]) -> usize {
        debug_assert_eq!(word.len(), self.depth);
        let mut idx = 0usize;
        for &l in word {
            idx = idx * self.alphabet + l as usize;
        }
        self.values[idx]
    }
}

fn check_substitution(t: &OpTable, f: &StarSubstitution) -> Result<()> {
    if f.alphabet != t.arity() {
        return Err(Error::InvalidParams(format!(
            "substitution alphabet {} differs from operation arity {}",
            f.alphabet,
            t.arity()
        )));
    }
    if let Some(&bad) = f.values.iter().find(|&&v| v >= t.domain()) {
        return Err(Error::DomainMismatch {
            expected: t.domain(),
            found: bad,
        });
    }
    Ok(())
}

/// Evaluate `t*depth` on leaf values supplied by rank, depth-first, without
/// materializing the substitution. `leaf(r)` receives the rank of the leaf
/// word (leftmost letter most significant).
pub fn star_power_eval_with(
    t: &OpTable,
    depth: usize,
    leaf: &mut dyn FnMut(usize) -> usize,
    budget: u64,
) -> Result<usize> {
    leaf_count(t.arity(), depth, budget)?;
    fn rec(t: &OpTable, depth: usize, prefix: usize, leaf: &mut dyn FnMut(usize) -> usize) -> usize {
        if depth == 0 {
            return leaf(prefix);
        }
        let n = t.arity();
        let mut args = Vec::with_capacity(n);
        for letter in 0..n {
            args.push(rec(t, depth - 1, prefix * n + letter, leaf));
        }
        t.apply(&args)
    }
    Ok(rec(t, depth, 0, leaf))
}

/// Value of `t*k(f)` by the outer decomposition.
pub fn star_power_eval(t: &OpTable, f: &StarSubstitution) -> Result<usize> {
    check_substitution(t, f)?;
    star_power_eval_with(t, f.depth, &mut |r| f.values[r], DEFAULT_LEAF_BUDGET)
}

/// Value of `t*k(f)` by the inner decomposition: repeatedly collapse the
/// last letter, `f'(x) = t(f(x + [0]), ..., f(x + [n-1]))`.
pub fn star_power_eval_folded(t: &OpTable, f: &StarSubstitution) -> Result<usize> {
    check_substitution(t, f)?;
    let n = t.arity();
    let mut layer = f.values.clone();
    for _ in 0..f.depth {
        layer = layer.chunks(n).map(|chunk| t.apply(chunk)).collect();
    }
    debug_assert_eq!(layer.len(), 1);
    Ok(layer[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_zero_is_the_single_value() {
        let min = OpTable::min_chain(2).unwrap();
        let f = StarSubstitution::new(0, 2, vec![1]).unwrap();
        assert_eq!(star_power_eval(&min, &f).unwrap(), 1);
        assert_eq!(star_power_eval_folded(&min, &f).unwrap(), 1);
    }

    #[test]
    fn depth_one_unrolls_once() {
        let min = OpTable::min_chain(3).unwrap();
        let f = StarSubstitution::new(1, 2, vec![2, 1]).unwrap();
        assert_eq!(star_power_eval(&min, &f).unwrap(), 1);
        assert_eq!(star_power_eval_folded(&min, &f).unwrap(), 1);
    }

    #[test]
    fn constant_substitution_of_idempotent_is_constant() {
        let maj = OpTable::majority3().unwrap();
        for depth in 0..4 {
            let f = StarSubstitution::constant(depth, 3, 1).unwrap();
            assert_eq!(star_power_eval(&maj, &f).unwrap(), 1);
            assert_eq!(star_power_eval_folded(&maj, &f).unwrap(), 1);
        }
    }

    #[test]
    fn leftmost_letter_is_outermost() {
        // t = first projection: t*2(f) = f([0, 0]).
        let proj0 = OpTable::projection(0, 2, 3).unwrap();
        let f = StarSubstitution::new(2, 2, vec![2, 0, 1, 1]).unwrap();
        assert_eq!(star_power_eval(&proj0, &f).unwrap(), 2);
        // t = second projection: t*2(f) = f([1, 1]).
        let proj1 = OpTable::projection(1, 2, 3).unwrap();
        assert_eq!(star_power_eval(&proj1, &f).unwrap(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let min = OpTable::min_chain(2).unwrap();
        let err = star_power_eval_with(&min, 40, &mut |_| 0, 1 << 20);
        assert!(matches!(err, Err(Error::BudgetExceeded { .. })));
    }
}
