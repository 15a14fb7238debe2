//! Total finite operations stored as explicit value tables, plus relations
//! and the compatibility check.
//!
//! Argument-tuple indexing convention, fixed crate-wide: tables are indexed
//! lexicographically by argument tuples with the *leftmost argument most
//! significant*, i.e. `index(a_0, ..., a_{n-1}) = ((a_0 * m + a_1) * m + ...)
//! + a_{n-1}` over domain size `m`. Star substitutions use the same
//! convention with the leftmost letter outermost.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTable {
    arity: usize,
    domain: usize,
    table: Vec<usize>,
}

impl std::fmt::Debug for OpTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "OpTable(arity={}, domain={})", self.arity, self.domain)
    }
}

impl OpTable {
    pub fn new(arity: usize, domain: usize, table: Vec<usize>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidOp("arity must be at least 1".into()));
        }
        if domain == 0 {
            return Err(Error::InvalidOp("domain must be nonempty".into()));
        }
        let expected = domain
            .checked_pow(arity as u32)
            .ok_or_else(|| Error::InvalidOp("table size overflows".into()))?;
        if table.len() != expected {
            return Err(Error::InvalidOp(format!(
                "table has {} entries, expected {}^{} = {}",
                table.len(),
                domain,
                arity,
                expected
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= domain) {
            return Err(Error::InvalidOp(format!(
                "table value {bad} outside domain [0, {domain})"
            )));
        }
        Ok(OpTable {
            arity,
            domain,
            table,
        })
    }

    pub fn from_fn(
        arity: usize,
        domain: usize,
        mut f: impl FnMut(&[usize]) -> usize,
    ) -> Result<Self> {
        let size = domain
            .checked_pow(arity as u32)
            .ok_or_else(|| Error::InvalidOp("table size overflows".into()))?;
        let mut args = vec![0usize; arity];
        let mut table = Vec::with_capacity(size);
        for _ in 0..size {
            table.push(f(&args));
            // odometer, rightmost fastest
            for j in (0..arity).rev() {
                args[j] += 1;
                if args[j] < domain {
                    break;
                }
                args[j] = 0;
            }
        }
        OpTable::new(arity, domain, table)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        let mut idx = 0usize;
        for &a in args {
            debug_assert!(a < self.domain);
            idx = idx * self.domain + a;
        }
        self.table[idx]
    }

    /// Named built-ins: `projection:i:n[:m]`, `min-chain[:m]`, `majority3`,
    /// `minority3`. Domains default to 2.
    pub fn builtin(name: &str) -> Result<OpTable> {
        let parts: Vec<&str> = name.split(':').collect();
        match parts.as_slice() {
            ["majority3"] => OpTable::majority3(),
            ["minority3"] => OpTable::minority3(),
            ["min-chain"] => OpTable::min_chain(2),
            ["min-chain", m] => {
                let m: usize = m
                    .parse()
                    .map_err(|_| Error::UnknownBuiltin(name.to_string()))?;
                OpTable::min_chain(m)
            }
            ["projection", i, n] | ["projection", i, n, _] => {
                let i: usize = i
                    .parse()
                    .map_err(|_| Error::UnknownBuiltin(name.to_string()))?;
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::UnknownBuiltin(name.to_string()))?;
                let m: usize = if parts.len() == 4 {
                    parts[3]
                        .parse()
                        .map_err(|_| Error::UnknownBuiltin(name.to_string()))?
                } else {
                    2
                };
                OpTable::projection(i, n, m)
            }
            _ => Err(Error::UnknownBuiltin(name.to_string())),
        }
    }

    pub fn projection(coord: usize, arity: usize, domain: usize) -> Result<OpTable> {
        if coord >= arity {
            return Err(Error::InvalidOp(format!(
                "projection coordinate {coord} out of range for arity {arity}"
            )));
        }
        OpTable::from_fn(arity, domain, |args| args[coord])
    }

    /// Binary minimum on the chain `0 < 1 < ... < m-1`.
    pub fn min_chain(domain: usize) -> Result<OpTable> {
        OpTable::from_fn(2, domain, |args| args[0].min(args[1]))
    }

    pub fn majority3() -> Result<OpTable> {
        OpTable::from_fn(3, 2, |args| {
            if args[0] + args[1] + args[2] >= 2 {
                1
            } else {
                0
            }
        })
    }

    pub fn minority3() -> Result<OpTable> {
        OpTable::from_fn(3, 2, |args| args[0] ^ args[1] ^ args[2])
    }
}

pub fn is_idempotent(t: &OpTable) -> bool {
    (0..t.domain()).all(|x| t.apply(&vec![x; t.arity()]) == x)
}

/// A finite relation of fixed arity, stored as a deduplicated tuple list in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    arity: usize,
    domain: usize,
    tuples: Vec<Vec<usize>>,
    set: HashSet<Vec<usize>>,
}

impl Relation {
    pub fn new(arity: usize, domain: usize, tuples: Vec<Vec<usize>>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidRelation("arity must be at least 1".into()));
        }
        for t in &tuples {
            if t.len() != arity {
                return Err(Error::InvalidRelation(format!(
                    "tuple {t:?} has arity {}, expected {arity}",
                    t.len()
                )));
            }
            if let Some(&bad) = t.iter().find(|&&v| v >= domain) {
                return Err(Error::InvalidRelation(format!(
                    "tuple entry {bad} outside domain [0, {domain})"
                )));
            }
        }
        let mut tuples = tuples;
        tuples.sort();
        tuples.dedup();
        let set = tuples.iter().cloned().collect();
        Ok(Relation {
            arity,
            domain,
            tuples,
            set,
        })
    }

    pub fn from_digraph(g: &crate::digraph::Digraph) -> Relation {
        let tuples = g.edges().into_iter().map(|(u, v)| vec![u, v]).collect();
        Relation::new(2, g.vertex_count(), tuples).expect("edges are in range")
    }

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

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.set.contains(tuple)
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }
}

/// Is every coordinatewise image of relation tuples under `t` again in the
/// relation?
pub fn is_compatible(t: &OpTable, r: &Relation) -> Result<bool> {
    if t.domain() != r.domain() {
        return Err(Error::DomainMismatch {
            expected: r.domain(),
            found: t.domain(),
        });
    }
    let n = t.arity();
    let rows = r.tuples();
    if rows.is_empty() {
        return Ok(true);
    }
    let mut pick = vec![0usize; n];
    let mut args = vec![0usize; n];
    let mut image = vec![0usize; r.arity()];
    loop {
        for c in 0..r.arity() {
            for j in 0..n {
                args[j] = rows[pick[j]][c];
            }
            image[c] = t.apply(&args);
        }
        if !r.contains(&image) {
            return Ok(false);
        }
        let mut done = true;
        for j in (0..n).rev() {
            pick[j] += 1;
            if pick[j] < rows.len() {
                done = false;
                break;
            }
            pick[j] = 0;
        }
        if done {
            return Ok(true);
        }
    }
}
