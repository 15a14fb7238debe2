//! Length parameters of the substitution construction.
//!
//! Words fed to the substitution have length `N = L + W + R` (left part,
//! window, right part). At full parameters everything is derived from the
//! alphabet size `n` and the uniform walk constant `K`:
//!
//! * `W = 3K - 3` — window length,
//! * `M = 2(K - 1) n^W + (K - 1)` — interval length that guarantees a local
//!   maximum inside any non-constant stretch,
//! * `R = M + K - 1` — right part length, also the top priority value,
//! * `L = R + K - 2` — left part length, the distinguished window position.
//!
//! Reduced mode lets callers shrink `(W, R, L)` below the formulas to make
//! `n^N` small enough for exhaustive verification; only `N = L + W + R`,
//! `W >= 1`, `R >= 1` and `L >= K - 1` are enforced there, and the lemma
//! validators turn into falsifiable experiments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionParams {
    /// Alphabet size `n` (the operation arity).
    pub alphabet: usize,
    /// Uniform walk constant `K`.
    pub walk_min: usize,
    /// Window length `W`.
    pub window: usize,
    /// Local-maximum search margin `M`.
    pub margin: usize,
    /// Right part length `R`; also the top priority value.
    pub right: usize,
    /// Left part length `L`; the window of interest starts here.
    pub left: usize,
    /// Total word length `N = L + W + R`.
    pub len: usize,
    /// True when `(W, M, R, L)` all match the full-parameter formulas.
    pub full: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedOverrides {
    pub window: usize,
    pub right: usize,
    pub left: usize,
}

fn formula(n: usize, k: usize) -> Result<(usize, usize, usize, usize)> {
    let w = 3 * k - 3;
    let pow = n
        .checked_pow(w as u32)
        .ok_or_else(|| Error::InvalidParams(format!("n^W overflows for n={n}, W={w}")))?;
    let m = 2 * (k - 1) * pow + (k - 1);
    let r = m + k - 1;
    let l = r + k - 2;
    Ok((w, m, r, l))
}

/// Full parameters from the alphabet size and walk constant.
pub fn make_params(n: usize, k: usize) -> Result<ConstructionParams> {
    if n == 0 {
        return Err(Error::InvalidParams("alphabet size must be at least 1".into()));
    }
    if k < 2 {
        return Err(Error::InvalidParams(
            "walk constant K must be at least 2".into(),
        ));
    }
    let (w, m, r, l) = formula(n, k)?;
    Ok(ConstructionParams {
        alphabet: n,
        walk_min: k,
        window: w,
        margin: m,
        right: r,
        left: l,
        len: l + w + r,
        full: true,
    })
}

/// Reduced parameters: caller-supplied `(W, R, L)` with `N = L + W + R`.
pub fn make_params_reduced(n: usize, k: usize, o: &ReducedOverrides) -> Result<ConstructionParams> {
    if n == 0 {
        return Err(Error::InvalidParams("alphabet size must be at least 1".into()));
    }
    if k < 2 {
        return Err(Error::InvalidParams(
            "walk constant K must be at least 2".into(),
        ));
    }
    if o.window == 0 || o.right == 0 {
        return Err(Error::InvalidParams("reduced W and R must be at least 1".into()));
    }
    if o.left + 1 < k {
        return Err(Error::InvalidParams(format!(
            "reduced L = {} is below K - 1 = {}",
            o.left,
            k - 1
        )));
    }
    let (fw, fm, fr, fl) = formula(n, k)?;
    let full = o.window == fw && o.right == fr && o.left == fl;
    Ok(ConstructionParams {
        alphabet: n,
        walk_min: k,
        window: o.window,
        margin: fm,
        right: o.right,
        left: o.left,
        len: o.left + o.window + o.right,
        full,
    })
}

impl ConstructionParams {
    /// Number of window positions, `N - W + 1`.
    pub fn positions(&self) -> usize {
        self.len - self.window + 1
    }
}
