//! Taylor and quasi-Taylor systems.
//!
//! A Taylor system for an `n`-ary symbol is one equation per coordinate
//! `i`: the left side has `x` at coordinate `i`, the right side has `y` at
//! coordinate `i`, and every other coordinate is filled with `x` or `y`
//! freely — plus idempotency, which the quasi variant drops. The finder
//! searches all `2^(2(n-1))` fillings per row for one that holds on every
//! pair from the test set `X`.

use serde::Serialize;

use crate::algebra::op::OpTable;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VarSym {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
}

impl VarSym {
    pub fn pick(self, x: usize, y: usize) -> usize {
        match self {
            VarSym::X => x,
            VarSym::Y => y,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaylorRow {
    pub left: Vec<VarSym>,
    pub right: Vec<VarSym>,
}

impl TaylorRow {
    /// Does `t(left) = t(right)` hold for every `(x, y)` in `X^2`?
    pub fn holds(&self, t: &OpTable, x_set: &[usize]) -> bool {
        let mut left_args = vec![0usize; t.arity()];
        let mut right_args = vec![0usize; t.arity()];
        for &xv in x_set {
            for &yv in x_set {
                for (slot, sym) in left_args.iter_mut().zip(&self.left) {
                    *slot = sym.pick(xv, yv);
                }
                for (slot, sym) in right_args.iter_mut().zip(&self.right) {
                    *slot = sym.pick(xv, yv);
                }
                if t.apply(&left_args) != t.apply(&right_args) {
                    return false;
                }
            }
        }
        true
    }
}

/// One row per coordinate; row `i` has `x` at coordinate `i` on the left and
/// `y` at coordinate `i` on the right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaylorSystem {
    pub rows: Vec<TaylorRow>,
    pub idempotent_required: bool,
}

impl TaylorSystem {
    pub fn arity(&self) -> usize {
        self.rows.len()
    }

    /// Re-verify every equation of the system (including idempotency when
    /// required) over `X`.
    pub fn holds(&self, t: &OpTable, x_set: &[usize]) -> bool {
        if self.idempotent_required {
            let ok = x_set.iter().all(|&x| t.apply(&vec![x; t.arity()]) == x);
            if !ok {
                return false;
            }
        }
        self.rows.iter().all(|row| row.holds(t, x_set))
    }
}

fn fill_row(arity: usize, coord: usize, fixed: VarSym, mask: u32) -> Vec<VarSym> {
    let mut row = Vec::with_capacity(arity);
    let mut bit = 0;
    for j in 0..arity {
        if j == coord {
            row.push(fixed);
        } else {
            row.push(if (mask >> bit) & 1 == 0 {
                VarSym::X
            } else {
                VarSym::Y
            });
            bit += 1;
        }
    }
    row
}

/// Search for a Taylor (or quasi-Taylor) system that `t` satisfies locally
/// on `X`. Question-mark fillings are enumerated lexicographically (left
/// side outer, `x` before `y`), so the returned system is deterministic.
pub fn find_taylor_system(
    t: &OpTable,
    x_set: &[usize],
    require_idempotent: bool,
) -> Result<Option<TaylorSystem>> {
    if x_set.is_empty() {
        return Err(Error::InvalidParams("X must be nonempty".into()));
    }
    if let Some(&bad) = x_set.iter().find(|&&v| v >= t.domain()) {
        return Err(Error::DomainMismatch {
            expected: t.domain(),
            found: bad,
        });
    }
    let n = t.arity();
    if require_idempotent {
        let idem_on_x = x_set.iter().all(|&x| t.apply(&vec![x; n]) == x);
        if !idem_on_x {
            return Ok(None);
        }
    }
    let free = n - 1;
    let combos = 1u32 << free;
    let mut rows = Vec::with_capacity(n);
    for coord in 0..n {
        let mut found = None;
        'search: for left_mask in 0..combos {
            for right_mask in 0..combos {
                let row = TaylorRow {
                    left: fill_row(n, coord, VarSym::X, left_mask),
                    right: fill_row(n, coord, VarSym::Y, right_mask),
                };
                if row.holds(t, x_set) {
                    found = Some(row);
                    break 'search;
                }
            }
        }
        match found {
            Some(row) => rows.push(row),
            None => return Ok(None),
        }
    }
    Ok(Some(TaylorSystem {
        rows,
        idempotent_required: require_idempotent,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_has_no_system() {
        let proj = OpTable::projection(0, 3, 2).unwrap();
        assert!(find_taylor_system(&proj, &[0, 1], true).unwrap().is_none());
        assert!(find_taylor_system(&proj, &[0, 1], false).unwrap().is_none());
    }

    #[test]
    fn majority_has_a_system() {
        let maj = OpTable::majority3().unwrap();
        let sys = find_taylor_system(&maj, &[0, 1], true).unwrap().unwrap();
        assert_eq!(sys.arity(), 3);
        assert!(sys.holds(&maj, &[0, 1]));
        for (i, row) in sys.rows.iter().enumerate() {
            assert_eq!(row.left[i], VarSym::X);
            assert_eq!(row.right[i], VarSym::Y);
        }
    }

    #[test]
    fn minority_has_a_system() {
        let minr = OpTable::minority3().unwrap();
        let sys = find_taylor_system(&minr, &[0, 1], true).unwrap().unwrap();
        assert!(sys.holds(&minr, &[0, 1]));
    }

    #[test]
    fn min_chain_has_a_system_on_full_domain() {
        let min = OpTable::min_chain(4).unwrap();
        let dom: Vec<usize> = (0..4).collect();
        let sys = find_taylor_system(&min, &dom, true).unwrap().unwrap();
        assert!(sys.holds(&min, &dom));
    }

    #[test]
    fn non_idempotent_fails_when_required() {
        let const0 = OpTable::from_fn(2, 2, |_| 0).unwrap();
        assert!(find_taylor_system(&const0, &[0, 1], true).unwrap().is_none());
        // quasi variant may still succeed: t(x, ?) = t(y, ?) with constant op
        assert!(find_taylor_system(&const0, &[0, 1], false)
            .unwrap()
            .is_some());
    }

    #[test]
    fn singleton_x_is_trivially_taylor_for_idempotent_ops() {
        let maj = OpTable::majority3().unwrap();
        let sys = find_taylor_system(&maj, &[1], true).unwrap().unwrap();
        assert!(sys.holds(&maj, &[1]));
    }
}
