//! Mechanical validators: the dichotomy and the three shift lemmas.
//!
//! Violations are data, not exceptions — at full parameters the checks must
//! come back clean, while reduced parameters turn them into falsifiable
//! experiments whose counterexamples these reports enumerate.

use serde::Serialize;

use crate::words::Word;

use super::Context;

/// Outcome of the dichotomy check on one word.
///
/// Case 1: some letter `i` has `f(x) = alpha[i][i]` and
/// `f(x[1..] + [j]) = alpha[i][j]` for every `j`. Case 2: every letter `i`
/// yields an edge `f(x) -> f(x[1..] + [i])`. A word that satisfies neither
/// is a violation; `failures` then names the offending letters or the
/// structural diagnostics hit during evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct DichotomyReport {
    pub word: Vec<u8>,
    /// Letters `i` witnessing case 1.
    pub case1: Vec<u8>,
    /// Does case 2 hold (all successor edges present)?
    pub case2: bool,
    pub failures: Vec<String>,
}

impl DichotomyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && (!self.case1.is_empty() || self.case2)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftViolation {
    pub lemma: &'static str,
    pub position: usize,
    pub detail: String,
}

/// Violations of the value-shift, priority-shift, and local-max-shift
/// lemmas for one word and one appended letter.
#[derive(Clone, Debug, Serialize)]
pub struct ShiftReport {
    pub word: Vec<u8>,
    pub letter: u8,
    pub violations: Vec<ShiftViolation>,
}

impl ShiftReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub(super) fn check_dichotomy(ctx: &Context, x: &Word) -> DichotomyReport {
    let n = ctx.params().alphabet;
    let mut failures = Vec::new();
    let fx = match ctx.eval_f(x) {
        Ok(v) => Some(v),
        Err(e) => {
            failures.push(format!("f(x): {e}"));
            None
        }
    };
    let mut successors = Vec::with_capacity(n);
    for j in 0..n {
        let y = x.shift_append(j as u8).expect("letter in range");
        match ctx.eval_f(&y) {
            Ok(v) => successors.push(Some(v)),
            Err(e) => {
                failures.push(format!("f(x[1..] + [{j}]): {e}"));
                successors.push(None);
            }
        }
    }

    let mut case1 = Vec::new();
    let mut case2 = false;
    if let Some(fx) = fx {
        if successors.iter().all(|s| s.is_some()) {
            let succ: Vec<usize> = successors.iter().map(|s| s.unwrap()).collect();
            for i in 0..n {
                let alpha = ctx.alpha();
                if fx == alpha.get(i, i) && (0..n).all(|j| succ[j] == alpha.get(i, j)) {
                    case1.push(i as u8);
                }
            }
            case2 = true;
            for (i, &s) in succ.iter().enumerate() {
                if !ctx.graph().has_edge(fx, s) {
                    case2 = false;
                    if case1.is_empty() {
                        failures.push(format!("no edge f(x) = {fx} -> f(x[1..] + [{i}]) = {s}"));
                    }
                }
            }
        }
    }

    DichotomyReport {
        word: x.letters().to_vec(),
        case1,
        case2,
        failures,
    }
}

pub(super) fn check_shift_lemmas(ctx: &Context, x: &Word, letter: u8) -> ShiftReport {
    let params = ctx.params();
    let n_total = params.len;
    let k = params.walk_min;
    let l = params.left;
    let r = params.right as i64;
    let positions = params.positions();

    let y = x.shift_append(letter).expect("letter in range");
    let px = ctx.profile_of(x.letters());
    let py = ctx.profile_of(y.letters());
    let x_tail_constant = px.run_end[l] == n_total;

    let mut violations = Vec::new();

    // value-shift: nu_x(p) = nu_y(p-1) for p in [2, N - W], unless
    // x[L..] is constant and p = L + 1.
    for p in 2..positions {
        let exempt = p == l + 1 && x_tail_constant;
        if !exempt && px.values[p] != py.values[p - 1] {
            violations.push(ShiftViolation {
                lemma: "value-shift",
                position: p,
                detail: format!("nu_x({p}) = {} != nu_y({}) = {}", px.values[p], p - 1, py.values[p - 1]),
            });
        }
    }

    // priority-shift: pi_y(p-1) = pi_x(p) + 1 in [0, R) exactly when
    // p > L + 1 and y[p-1..] is constant; otherwise equality.
    for p in 1..positions {
        let raises = p > l + 1 && py.run_end[p - 1] == n_total;
        if raises {
            let expected = px.priorities[p] + 1;
            if py.priorities[p - 1] != expected || expected < 0 || expected >= r {
                violations.push(ShiftViolation {
                    lemma: "priority-shift",
                    position: p,
                    detail: format!(
                        "expected pi_y({}) = pi_x({p}) + 1 = {expected} in [0, {r}), found {}",
                        p - 1,
                        py.priorities[p - 1]
                    ),
                });
            }
        } else if py.priorities[p - 1] != px.priorities[p] {
            violations.push(ShiftViolation {
                lemma: "priority-shift",
                position: p,
                detail: format!(
                    "pi_x({p}) = {} != pi_y({}) = {}",
                    px.priorities[p],
                    p - 1,
                    py.priorities[p - 1]
                ),
            });
        }
    }

    // local-max-shift, p in [K, N - W]: forward direction, then the
    // converse with its interval clause.
    for p in k..positions {
        if px.local_max[p] && !py.local_max[p - 1] {
            violations.push(ShiftViolation {
                lemma: "local-max-shift",
                position: p,
                detail: format!("{p} is a local max in x but {} is not in y", p - 1),
            });
        }
        if py.local_max[p - 1] && !px.local_max[p] {
            let interval_ok =
                p >= l + 2 && (l + 1..p).any(|q| px.local_max[q]);
            if !interval_ok {
                violations.push(ShiftViolation {
                    lemma: "local-max-shift",
                    position: p,
                    detail: format!(
                        "{} is a local max in y, {p} is not in x, and no local max in x lies in [{}, {})",
                        p - 1,
                        l + 1,
                        p
                    ),
                });
            }
        }
    }

    ShiftReport {
        word: x.letters().to_vec(),
        letter,
        violations,
    }
}
