//! The priority/value classification of windows.
//!
//! Every word `w` of window length `W` gets a priority `pi(w)` and a value
//! `nu(w)` (a vertex), by the following disjoint classification:
//!
//! 1. constant `[i, ..., i]`: priority `0`, value `alpha[i][i]`;
//! 2. shortest period `k` in `[2, K)`: priority `R`, and the values around a
//!    shift class trace a fixed `k`-cycle walk of the digraph;
//! 3. `w[..W-1]` constant but `w` not: priority `R`;
//! 4. everything else: a negative priority, injectively assigned.
//!
//! Classes for item 2 are orbits of the periodicity-preserving shift
//! `w -> w[1..] + [w[W - k]]`, anchored at the lexicographically least
//! member; when `k` divides `W` this is exactly the cyclic rotation
//! `w[i..] + w[..i]`. Values on items 3 and 4 are never pinned down by the
//! dichotomy, so they default to `alpha[w[0]][w[0]]`.

use serde::Serialize;

use crate::algebra::op::OpTable;
use crate::digraph::{deterministic_walk, Digraph, WalkTable};
use crate::error::{Error, Result};
use crate::words::{letters_from_index, letters_shortest_period};

use super::params::ConstructionParams;

/// The `n x n` matrix of distinguished vertices `alpha[i][j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaMatrix {
    n: usize,
    entries: Vec<usize>,
}

impl AlphaMatrix {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidParams("alpha matrix must be nonempty".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::InvalidParams(format!(
                    "alpha matrix is not square: row of length {} in a {n}-row matrix",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        Ok(AlphaMatrix { n, entries })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.n + j]
    }

    pub fn check_vertices(&self, vertex_count: usize) -> Result<()> {
        if let Some(&bad) = self.entries.iter().find(|&&v| v >= vertex_count) {
            return Err(Error::InvalidParams(format!(
                "alpha entry {bad} is not a vertex of the {vertex_count}-vertex digraph"
            )));
        }
        Ok(())
    }

    /// The edge condition: for every `i` there must be an edge from
    /// `alpha[i][i]` to `t(alpha[i][0], ..., alpha[i][n-1])`.
    pub fn verify_edges(&self, g: &Digraph, t: &OpTable) -> Result<()> {
        if t.arity() != self.n {
            return Err(Error::InvalidParams(format!(
                "alpha matrix is {}x{} but the operation has arity {}",
                self.n,
                self.n,
                t.arity()
            )));
        }
        self.check_vertices(g.vertex_count())?;
        for i in 0..self.n {
            let row: Vec<usize> = (0..self.n).map(|j| self.get(i, j)).collect();
            let target = t.apply(&row);
            if !g.has_edge(self.get(i, i), target) {
                return Err(Error::Hypothesis {
                    name: "alpha",
                    detail: format!(
                        "no edge from alpha[{i}][{i}] = {} to t(alpha[{i}][..]) = {target}",
                        self.get(i, i)
                    ),
                });
            }
        }
        Ok(())
    }
}

/// One orbit of period-`k` windows under the periodicity-preserving shift,
/// with its assigned cycle walk.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodClass {
    pub period: usize,
    pub anchor: Vec<u8>,
    /// Window ranks in shift order; `members[i]` is the anchor shifted `i`
    /// times.
    pub members: Vec<usize>,
    /// The `k`-cycle walk `[v_0, ..., v_k]` traced by the class values.
    pub cycle: Vec<usize>,
}

pub struct PriorityValueTable {
    window: usize,
    alphabet: usize,
    priorities: Vec<i64>,
    values: Vec<usize>,
    classes: Vec<PeriodClass>,
}

impl PriorityValueTable {
    pub fn window(&self) -> usize {
        self.window
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn entry_count(&self) -> usize {
        self.priorities.len()
    }

    #[inline]
    pub fn priority_by_rank(&self, rank: usize) -> i64 {
        self.priorities[rank]
    }

    #[inline]
    pub fn value_by_rank(&self, rank: usize) -> usize {
        self.values[rank]
    }

    pub fn priority(&self, window: &[u8]) -> i64 {
        self.priorities[rank_of(window, self.alphabet)]
    }

    pub fn value(&self, window: &[u8]) -> usize {
        self.values[rank_of(window, self.alphabet)]
    }

    pub fn classes(&self) -> &[PeriodClass] {
        &self.classes
    }

    /// Fault-injection hook for the validators' negative controls: overwrite
    /// a single table entry. A tampered table must make the dichotomy or
    /// shift-lemma checkers report violations.
    pub fn override_entry(&mut self, rank: usize, priority: i64, value: usize) {
        self.priorities[rank] = priority;
        self.values[rank] = value;
    }
}

#[inline]
fn rank_of(window: &[u8], alphabet: usize) -> usize {
    let mut idx = 0usize;
    for &l in window {
        idx = idx * alphabet + l as usize;
    }
    idx
}

/// The periodicity-preserving shift on period-`k` windows:
/// `w -> w[1..] + [w[W - k]]`.
fn period_shift(w: &[u8], k: usize) -> Vec<u8> {
    let mut out = w[1..].to_vec();
    out.push(w[w.len() - k]);
    out
}

const TABLE_BUDGET: u64 = 1 << 24;

/// Build the table for a digraph that contains `k`-cycle walks for every
/// `k` in `[2, K)`.
pub fn build_priority_value(
    g: &Digraph,
    params: &ConstructionParams,
    alpha: &AlphaMatrix,
    walks: &WalkTable,
) -> Result<PriorityValueTable> {
    let n = params.alphabet;
    let w_len = params.window;
    let r = params.right as i64;
    if alpha.size() != n {
        return Err(Error::InvalidParams(format!(
            "alpha matrix is {}x{} but the alphabet has size {n}",
            alpha.size(),
            alpha.size()
        )));
    }
    alpha.check_vertices(g.vertex_count())?;
    let count = (n as u64).checked_pow(w_len as u32).ok_or(Error::BudgetExceeded {
        what: "priority table entries",
        needed: u64::MAX,
        budget: TABLE_BUDGET,
    })?;
    if count > TABLE_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "priority table entries",
            needed: count,
            budget: TABLE_BUDGET,
        });
    }
    let count = count as usize;

    let mut priorities = vec![0i64; count];
    let mut values = vec![0usize; count];
    let mut classified = vec![false; count];
    let mut classes = Vec::new();

    // item 1: constant windows
    for letter in 0..n {
        let word = vec![letter as u8; w_len];
        let idx = rank_of(&word, n);
        priorities[idx] = 0;
        values[idx] = alpha.get(letter, letter);
        classified[idx] = true;
    }

    // item 2: windows with shortest period k in [2, K), grouped into shift
    // orbits; ascending scan makes the first member of each orbit its
    // lexicographically least element.
    for k in 2..params.walk_min {
        if k > w_len {
            break;
        }
        let cycle_start = walks.powers()[k]
            .first_diagonal_one()
            .ok_or(Error::MissingCycle { length: k })?;
        let cycle = deterministic_walk(g.adjacency(), walks.powers(), cycle_start, cycle_start, k)
            .expect("diagonal of the k-th power is set");
        for idx in 0..count {
            if classified[idx] {
                continue;
            }
            let word = letters_from_index(idx, w_len, n);
            if letters_shortest_period(&word) != k {
                continue;
            }
            let mut members = Vec::with_capacity(k);
            let mut cur = word.clone();
            for step in 0..k {
                let cur_idx = rank_of(&cur, n);
                debug_assert!(!classified[cur_idx]);
                priorities[cur_idx] = r;
                values[cur_idx] = cycle[step];
                classified[cur_idx] = true;
                members.push(cur_idx);
                cur = period_shift(&cur, k);
            }
            debug_assert_eq!(cur, word, "shift orbit must close after k steps");
            classes.push(PeriodClass {
                period: k,
                anchor: word,
                members,
                cycle: cycle.clone(),
            });
        }
    }

    // items 3 and 4
    let mut next_negative = -1i64;
    for idx in 0..count {
        if classified[idx] {
            continue;
        }
        let word = letters_from_index(idx, w_len, n);
        let head_constant = word[..w_len - 1].iter().all(|&l| l == word[0]);
        if head_constant {
            priorities[idx] = r;
        } else {
            priorities[idx] = next_negative;
            next_negative -= 1;
        }
        values[idx] = alpha.get(word[0] as usize, word[0] as usize);
        classified[idx] = true;
    }

    Ok(PriorityValueTable {
        window: w_len,
        alphabet: n,
        priorities,
        values,
        classes,
    })
}
