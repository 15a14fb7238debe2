//! End-to-end loop pipelines.
//!
//! [`prepare_instance`] checks the hypotheses (idempotency, compatibility,
//! strong connectivity plus closed walks of every length from two, and the
//! alpha edges) and assembles a construction context. On top of it:
//!
//! * [`verify_dichotomy_exhaustive`] runs the dichotomy check on all `n^N`
//!   words — feasible in reduced-parameter mode;
//! * [`extract_loop`] evaluates the two star-power substitutions of depth
//!   `N + 1` and returns the loop vertex they pin down;
//! * [`sample_dichotomy`] drives the dichotomy and shift-lemma validators
//!   over seeded samples at full parameters, over-weighting the boundary
//!   word families that uniform sampling would almost never hit;
//! * [`main_theorem_pipeline`] adds the odd-girth reduction branch for
//!   undirected inputs and always cross-checks against the closure oracle.

use serde::Serialize;

use crate::algebra::closure::{loop_oracle, DEFAULT_CLOSURE_BUDGET};
use crate::algebra::op::{is_compatible, is_idempotent, OpTable, Relation};
use crate::algebra::star::{star_power_eval_with, DEFAULT_LEAF_BUDGET};
use crate::construction::{
    make_params, make_params_reduced, AlphaMatrix, Context, ReducedOverrides,
};
use crate::digraph::{cycle_lengths, is_strongly_connected, odd_girth_reduce, Digraph};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::words::Word;

#[derive(Clone, Copy, Debug)]
pub struct InstanceOptions {
    pub reduced: Option<ReducedOverrides>,
    /// Demand compatibility of the operation with the digraph. The
    /// dichotomy itself never consumes the operation beyond its arity, so
    /// the sampling entry point may relax this hypothesis; the extraction
    /// pipeline must not.
    pub require_compatible: bool,
    pub closure_budget: usize,
    pub star_budget: u64,
}

impl Default for InstanceOptions {
    fn default() -> Self {
        InstanceOptions {
            reduced: None,
            require_compatible: true,
            closure_budget: DEFAULT_CLOSURE_BUDGET,
            star_budget: DEFAULT_LEAF_BUDGET,
        }
    }
}

pub struct Instance {
    op: OpTable,
    ctx: Context,
    compatible: bool,
    options: InstanceOptions,
}

impl Instance {
    pub fn op(&self) -> &OpTable {
        &self.op
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn compatible(&self) -> bool {
        self.compatible
    }

    pub fn options(&self) -> &InstanceOptions {
        &self.options
    }
}

/// Check the four hypotheses and build the construction context. Each
/// failure carries its own name: `idempotency`, `compatibility`,
/// `strong connectivity` / `cycle lengths`, and `alpha`.
pub fn prepare_instance(
    g: Digraph,
    t: OpTable,
    alpha: AlphaMatrix,
    options: &InstanceOptions,
) -> Result<Instance> {
    if !is_idempotent(&t) {
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
    let compatible = is_compatible(&t, &Relation::from_digraph(&g))?;
    if options.require_compatible && !compatible {
        return Err(Error::Hypothesis {
            name: "compatibility",
            detail: "operation is not compatible with the digraph".into(),
        });
    }
    if !is_strongly_connected(&g) {
        return Err(Error::Hypothesis {
            name: "strong connectivity",
            detail: "digraph is not strongly connected".into(),
        });
    }
    let uniform = crate::digraph::uniform_walk_constant(&g).map_err(|e| match e {
        Error::Hypothesis { detail, .. } => Error::Hypothesis {
            name: "cycle lengths",
            detail,
        },
        other => other,
    })?;
    let walk_min = uniform.max(2);
    // closed walks of every length >= walk_min exist; the remaining lengths
    // [2, walk_min) must be present explicitly
    if walk_min > 2 {
        let have = cycle_lengths(&g, walk_min - 1);
        for l in 2..walk_min {
            if !have.contains(&l) {
                return Err(Error::Hypothesis {
                    name: "cycle lengths",
                    detail: format!("no closed walk of length {l}"),
                });
            }
        }
    }
    alpha.verify_edges(&g, &t)?;

    let params = match &options.reduced {
        None => make_params(t.arity(), walk_min)?,
        Some(o) => make_params_reduced(t.arity(), walk_min, o)?,
    };
    let ctx = Context::build(g, alpha, params)?;
    Ok(Instance {
        op: t,
        ctx,
        compatible,
        options: *options,
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DichotomyStats {
    pub checked: u64,
    /// Words where case 1 holds (some witness letter exists).
    pub case1: u64,
    /// Words where case 2 holds but case 1 does not.
    pub case2_only: u64,
    pub violations: u64,
}

#[derive(Debug, Serialize)]
pub struct ExhaustiveReport {
    pub stats: DichotomyStats,
    pub violating_words: Vec<Vec<u8>>,
}

fn word_space(n: usize, len: usize, budget: u64) -> Result<u64> {
    let total = (n as u64)
        .checked_pow(len as u32)
        .ok_or(Error::BudgetExceeded {
            what: "exhaustive words",
            needed: u64::MAX,
            budget,
        })?;
    if total > budget {
        return Err(Error::BudgetExceeded {
            what: "exhaustive words",
            needed: total,
            budget,
        });
    }
    Ok(total)
}

struct ExhaustiveScan {
    stats: DichotomyStats,
    violating_words: Vec<Vec<u8>>,
    f_values: Vec<usize>,
    clean: bool,
}

const F_UNDEFINED: usize = usize::MAX;

/// Evaluate `f` on every word once, then check the dichotomy per word by
/// rank arithmetic: the successors of the word of rank `r` have ranks
/// `(r mod n^(N-1)) * n + j`.
fn exhaustive_scan(inst: &Instance) -> Result<ExhaustiveScan> {
    let params = inst.context().params();
    let n = params.alphabet;
    let total = word_space(n, params.len, inst.options.star_budget)? as usize;
    let ctx = inst.context();
    let alpha = ctx.alpha();

    let mut f_values = vec![F_UNDEFINED; total];
    for rank in 0..total {
        let word = Word::from_index(rank, params.len, n);
        if let Ok(v) = ctx.eval_f_letters(word.letters()) {
            f_values[rank] = v;
        }
    }

    let tail_mod = total / n;
    let mut stats = DichotomyStats::default();
    let mut violating_words = Vec::new();
    for rank in 0..total {
        stats.checked += 1;
        let fx = f_values[rank];
        let succ_base = (rank % tail_mod) * n;
        let mut ok = false;
        if fx != F_UNDEFINED && (0..n).all(|j| f_values[succ_base + j] != F_UNDEFINED) {
            let case1 = (0..n).any(|i| {
                fx == alpha.get(i, i)
                    && (0..n).all(|j| f_values[succ_base + j] == alpha.get(i, j))
            });
            let case2 = (0..n).all(|j| ctx.graph().has_edge(fx, f_values[succ_base + j]));
            if case1 {
                stats.case1 += 1;
                ok = true;
            } else if case2 {
                stats.case2_only += 1;
                ok = true;
            }
        }
        if !ok {
            stats.violations += 1;
            violating_words.push(Word::from_index(rank, params.len, n).letters().to_vec());
        }
    }
    let clean = stats.violations == 0;
    Ok(ExhaustiveScan {
        stats,
        violating_words,
        f_values,
        clean,
    })
}

/// Run the dichotomy check on all `n^N` words.
pub fn verify_dichotomy_exhaustive(inst: &Instance) -> Result<ExhaustiveReport> {
    let scan = exhaustive_scan(inst)?;
    Ok(ExhaustiveReport {
        stats: scan.stats,
        violating_words: scan.violating_words,
    })
}

#[derive(Debug, Serialize)]
pub struct LoopExtraction {
    pub vertex: usize,
    /// The two star-power values; equal by idempotency.
    pub star_values: [usize; 2],
    pub leaves: u64,
}

/// Extract the loop vertex by evaluating `t*(N+1)` on the substitutions
/// `f_0(x) = f(x[..N])` and `f_1(x) = f(x[1..])`.
///
/// Requires a clean exhaustive dichotomy; the identity `t*(N+1)(f_0) =
/// t*(N+1)(f_1)` and the edge between the two values are asserted and any
/// failure surfaces as an inconsistency diagnostic.
pub fn extract_loop(inst: &Instance) -> Result<LoopExtraction> {
    let scan = exhaustive_scan(inst)?;
    if !scan.clean {
        return Err(Error::Inconsistency(format!(
            "dichotomy has {} violating words; extraction is only meaningful after a clean pass",
            scan.stats.violations
        )));
    }
    let params = inst.context().params();
    let n = params.alphabet;
    let t = inst.op();
    let total = scan.f_values.len();
    let leaves = word_space(n, params.len + 1, inst.options.star_budget)?;

    // leaf rank arithmetic: a leaf word z of length N+1 has
    // z[..N] = rank / n and z[1..] = rank mod n^N
    let f_values = &scan.f_values;
    let a = star_power_eval_with(
        t,
        params.len + 1,
        &mut |rank| f_values[rank / n],
        inst.options.star_budget,
    )?;
    let b = star_power_eval_with(
        t,
        params.len + 1,
        &mut |rank| f_values[rank % total],
        inst.options.star_budget,
    )?;
    if a != b {
        return Err(Error::Inconsistency(format!(
            "star-power identity failed: t*(N+1)(f_0) = {a} but t*(N+1)(f_1) = {b}"
        )));
    }
    if !inst.context().graph().has_edge(a, b) {
        return Err(Error::Inconsistency(format!(
            "star-power values agree on {a} but ({a}, {b}) is not an edge"
        )));
    }
    Ok(LoopExtraction {
        vertex: a,
        star_values: [a, b],
        leaves,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleViolation {
    pub index: u64,
    pub word: Vec<u8>,
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct SampleReport {
    pub seed: u64,
    pub samples: u64,
    pub dichotomy: DichotomyStats,
    pub shift_checked: u64,
    pub shift_violations: u64,
    pub violations: Vec<SampleViolation>,
}

impl SampleReport {
    pub fn ok(&self) -> bool {
        self.dichotomy.violations == 0 && self.shift_violations == 0
    }
}

/// Deterministic sample word for `(seed, index)`.
///
/// Half the indices draw from boundary families (constant tails, constant
/// blocks at the exceptional offset, periodic windows for `K > 2`, and
/// near-constant words); the rest are uniform. Uniform words alone would
/// almost never exercise case 1.
pub fn sample_word(params: &crate::construction::ConstructionParams, seed: u64, index: u64) -> Vec<u8> {
    let n = params.alphabet;
    let total = params.len;
    let l = params.left;
    let k = params.walk_min;
    let mut rng = SplitMix64::stream(seed, index);
    let uniform = |rng: &mut SplitMix64, out: &mut Vec<u8>| {
        for slot in out.iter_mut() {
            *slot = rng.letter(n);
        }
    };
    let mut word = vec![0u8; total];
    match index % 8 {
        0 => {
            // constant tail: case-1 family
            uniform(&mut rng, &mut word);
            let letter = rng.letter(n);
            let start = l.saturating_sub(rng.below(5) as usize);
            for slot in word.iter_mut().skip(start) {
                *slot = letter;
            }
        }
        1 => {
            // constant block of the exceptional length W + R, then a fresh letter
            uniform(&mut rng, &mut word);
            let letter = rng.letter(n);
            let start = rng.below(l.max(1) as u64) as usize;
            let block = params.window + params.right + rng.below(3) as usize;
            let stop = (start + block).min(total);
            for slot in word.iter_mut().take(stop).skip(start) {
                *slot = letter;
            }
            if stop < total {
                word[stop] = rng.letter(n);
            }
        }
        2 if k > 2 && n > 1 => {
            // periodic stretch around the window of interest
            uniform(&mut rng, &mut word);
            let period = 2 + rng.below((k - 2) as u64) as usize;
            let mut pattern: Vec<u8> = (0..period).map(|_| rng.letter(n)).collect();
            if pattern.iter().all(|&p| p == pattern[0]) {
                pattern[period - 1] = (pattern[period - 1] + 1) % n as u8;
            }
            let start = l.saturating_sub(2 * k).max(0);
            let stop = (l + params.window + 2 * k).min(total);
            for p in start..stop {
                word[p] = pattern[(p - start) % period];
            }
        }
        2 | 3 => {
            // near-constant word with a few defects
            let letter = rng.letter(n);
            for slot in word.iter_mut() {
                *slot = letter;
            }
            let defects = rng.below(4);
            for _ in 0..defects {
                let p = rng.below(total as u64) as usize;
                word[p] = rng.letter(n);
            }
        }
        _ => uniform(&mut rng, &mut word),
    }
    word
}

/// Run the dichotomy and shift-lemma validators on seeded samples.
/// Deterministic in `(seed, samples, context)`.
pub fn sample_dichotomy(inst: &Instance, samples: u64, seed: u64) -> Result<SampleReport> {
    let params = *inst.context().params();
    let n = params.alphabet;
    let ctx = inst.context();
    let mut report = SampleReport {
        seed,
        samples,
        dichotomy: DichotomyStats::default(),
        shift_checked: 0,
        shift_violations: 0,
        violations: Vec::new(),
    };
    for index in 0..samples {
        let letters = sample_word(&params, seed, index);
        let word = Word::new(letters, n)?;
        let dich = ctx.check_dichotomy(&word)?;
        report.dichotomy.checked += 1;
        if dich.ok() {
            if dich.case1.is_empty() {
                report.dichotomy.case2_only += 1;
            } else {
                report.dichotomy.case1 += 1;
            }
        } else {
            report.dichotomy.violations += 1;
            report.violations.push(SampleViolation {
                index,
                word: dich.word.clone(),
                kind: "dichotomy".into(),
                detail: dich.failures.join("; "),
            });
        }
        for letter in 0..n {
            let shift = ctx.check_shift_lemmas(&word, letter as u8)?;
            report.shift_checked += 1;
            if !shift.ok() {
                report.shift_violations += 1;
                for v in &shift.violations {
                    report.violations.push(SampleViolation {
                        index,
                        word: word.letters().to_vec(),
                        kind: v.lemma.into(),
                        detail: format!("letter {letter}, position {}: {}", v.position, v.detail),
                    });
                }
            }
        }
    }
    Ok(report)
}

/// The report emitted by the `sample` and `extract-loop` pipelines.
#[derive(Debug, Serialize)]
pub struct LoopReport {
    pub mode: String,
    pub compatible: bool,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub dichotomy: DichotomyStats,
    pub shift_checked: Option<u64>,
    pub shift_violations: Option<u64>,
    /// Present only after a clean exhaustive dichotomy plus star-power
    /// extraction.
    pub loop_vertex: Option<usize>,
    pub star_values: Option<[usize; 2]>,
    /// Loop found by the closure oracle, when one was requested.
    pub oracle_loop: Option<usize>,
    /// Odd girth, when the undirected reduction branch ran.
    pub odd_girth: Option<usize>,
    pub violating_words: Option<Vec<Vec<u8>>>,
}

/// The full pipeline: hypothesis checks (with the odd-girth reduction for
/// undirected inputs lacking short cycle walks), dichotomy sampling, and the
/// closure-oracle cross-check. Oracle disagreement with the loop conclusion
/// is a hard failure.
pub fn main_theorem_pipeline(
    g: Digraph,
    t: OpTable,
    alpha: AlphaMatrix,
    options: &InstanceOptions,
    samples: u64,
    seed: u64,
) -> Result<LoopReport> {
    let (target, odd_girth) = match prepare_instance(g.clone(), t.clone(), alpha.clone(), options) {
        Ok(inst) => (inst, None),
        Err(Error::Hypothesis {
            name: name @ ("cycle lengths" | "strong connectivity"),
            detail,
        }) if g.is_undirected() => {
            let (l, reduced) = odd_girth_reduce(&g)?;
            if reduced.has_loop() {
                // a loop in g^(l-2) is a closed (l-2)-walk; with l minimal this
                // cannot happen for loop-free g, but guard anyway
                return Err(Error::Inconsistency(format!(
                    "odd-girth power has a loop although the input was loop-free \
                     (original failure: {name}: {detail})"
                )));
            }
            let inst = prepare_instance(reduced, t.clone(), alpha.clone(), options)?;
            (inst, Some(l))
        }
        Err(e) => return Err(e),
    };

    let sample = sample_dichotomy(&target, samples, seed)?;
    let oracle = loop_oracle(&t, target.context().graph(), options.closure_budget)?;
    let oracle_loop = oracle.map(|w| w.vertex);
    if oracle_loop.is_none() {
        return Err(Error::Inconsistency(
            "hypotheses hold but the closure oracle found no loop".into(),
        ));
    }
    Ok(LoopReport {
        mode: "full-sampled".into(),
        compatible: target.compatible(),
        seed: Some(seed),
        samples: Some(samples),
        dichotomy: sample.dichotomy,
        shift_checked: Some(sample.shift_checked),
        shift_violations: Some(sample.shift_violations),
        loop_vertex: None,
        star_values: None,
        oracle_loop,
        odd_girth,
        violating_words: None,
    })
}
