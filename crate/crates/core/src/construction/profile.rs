//! Per-word position profiles: priorities, values, and local maxima.
//!
//! For a word `x` of length `N`, position `p` in `[0, N - W]` carries the
//! priority and value of the window `x[p..p+W]`, with two exceptions when
//! the window is constant:
//!
//! * priority: with `q` the right-most position such that `x[p..q+W]` is
//!   constant, `pi_x(p) = min(q - p, R - 1)` instead of `0`;
//! * value: if `1 <= p <= L`, `x[p-1..p-1+W+R]` is constant with letter `i`
//!   and `x[p-1+W+R] = j`, then `nu_x(p) = alpha[i][j]` instead of
//!   `alpha[i][i]`.
//!
//! A position is a local maximum when its priority is `R`, or when it lies
//! in `[K-1, N-W-K+1]` and its priority dominates every position within
//! distance `< K`.

use crate::words::Word;

use super::params::ConstructionParams;
use super::table::{AlphaMatrix, PriorityValueTable};

#[derive(Clone, Debug)]
pub struct WordProfile {
    pub priorities: Vec<i64>,
    pub values: Vec<usize>,
    pub local_max: Vec<bool>,
    /// `run_end[p]` is the first index `e > p` with `x[e] != x[p]`, or `N`.
    pub run_end: Vec<usize>,
}

pub(crate) fn run_ends(x: &[u8]) -> Vec<usize> {
    let n = x.len();
    let mut out = vec![0usize; n];
    if n == 0 {
        return out;
    }
    out[n - 1] = n;
    for p in (0..n - 1).rev() {
        out[p] = if x[p + 1] == x[p] { out[p + 1] } else { p + 1 };
    }
    out
}

/// Compute the full profile of `x` in one pass; the rolling window rank
/// avoids re-ranking each window from scratch.
pub fn word_profile(
    x: &[u8],
    table: &PriorityValueTable,
    params: &ConstructionParams,
    alpha: &AlphaMatrix,
) -> WordProfile {
    let n = params.alphabet;
    let w = params.window;
    let total = params.len;
    debug_assert_eq!(x.len(), total);
    let positions = params.positions();
    let r = params.right as i64;
    let k = params.walk_min;

    let run_end = run_ends(x);
    let mut priorities = Vec::with_capacity(positions);
    let mut values = Vec::with_capacity(positions);

    let high = n.pow((w - 1) as u32);
    let mut rank: usize = 0;
    for &l in &x[..w] {
        rank = rank * n + l as usize;
    }

    for p in 0..positions {
        let window_constant = run_end[p] >= p + w;
        let priority = if window_constant {
            // q = right-most position with x[p..q+W] constant
            let q = run_end[p] - w;
            ((q - p) as i64).min(r - 1)
        } else {
            table.priority_by_rank(rank)
        };
        priorities.push(priority);

        let mut value = table.value_by_rank(rank);
        if window_constant && p >= 1 && p <= params.left && run_end[p - 1] >= p - 1 + w + params.right
        {
            let i = x[p - 1] as usize;
            let j = x[p - 1 + w + params.right] as usize;
            value = alpha.get(i, j);
        }
        values.push(value);

        if p + w < total {
            rank = (rank - x[p] as usize * high) * n + x[p + w] as usize;
        }
    }

    // local maxima: priority R, or in-range domination of the K-neighborhood
    let mut local_max = vec![false; positions];
    for p in 0..positions {
        if priorities[p] == r {
            local_max[p] = true;
            continue;
        }
        if p + 1 < k || p + k > positions {
            continue;
        }
        let lo = p.saturating_sub(k - 1);
        let hi = (p + k - 1).min(positions - 1);
        local_max[p] = (lo..=hi).all(|q| priorities[p] >= priorities[q]);
    }

    WordProfile {
        priorities,
        values,
        local_max,
        run_end,
    }
}

fn check_position(x: &Word, p: usize, params: &ConstructionParams) {
    assert_eq!(x.len(), params.len, "word length must be N");
    assert_eq!(x.alphabet(), params.alphabet, "alphabet must match");
    assert!(p + params.window <= params.len, "position out of range");
}

/// Priority of position `p` in `x`, including the constant-window
/// redefinition.
pub fn position_priority(
    x: &Word,
    p: usize,
    table: &PriorityValueTable,
    params: &ConstructionParams,
) -> i64 {
    check_position(x, p, params);
    let xs = x.letters();
    let w = params.window;
    let window = &xs[p..p + w];
    if window.iter().all(|&l| l == window[0]) {
        let mut e = p + w;
        while e < params.len && xs[e] == window[0] {
            e += 1;
        }
        let q = e - w;
        ((q - p) as i64).min(params.right as i64 - 1)
    } else {
        table.priority(window)
    }
}

/// Value of position `p` in `x`, including the exceptional `alpha[i][j]`
/// redefinition for long constant runs.
pub fn position_value(
    x: &Word,
    p: usize,
    table: &PriorityValueTable,
    params: &ConstructionParams,
    alpha: &AlphaMatrix,
) -> usize {
    check_position(x, p, params);
    let xs = x.letters();
    let w = params.window;
    if p >= 1 && p <= params.left {
        let start = p - 1;
        let stop = start + w + params.right;
        debug_assert!(stop < params.len);
        if xs[start..stop].iter().all(|&l| l == xs[start]) {
            return alpha.get(xs[start] as usize, xs[stop] as usize);
        }
    }
    table.value(&xs[p..p + w])
}

/// Is `p` a local maximum of `x`?
pub fn is_local_max(
    x: &Word,
    p: usize,
    table: &PriorityValueTable,
    params: &ConstructionParams,
) -> bool {
    check_position(x, p, params);
    let r = params.right as i64;
    let k = params.walk_min;
    let positions = params.positions();
    let here = position_priority(x, p, table, params);
    if here == r {
        return true;
    }
    if p + 1 < k || p + k > positions {
        return false;
    }
    let lo = p.saturating_sub(k - 1);
    let hi = (p + k - 1).min(positions - 1);
    (lo..=hi).all(|q| here >= position_priority(x, q, table, params))
}
