//! The substitution construction.
//!
//! A [`Context`] bundles a digraph, an alpha matrix, length parameters, the
//! priority/value table, and a deterministic walk table. It evaluates the
//! substitution `f` on words of length `N`: if the distinguished position
//! `L` is a local maximum the value is `nu_x(L)`; otherwise `f` reads the
//! fixed walk between the values at the nearest local maxima around `L`.
//!
//! [`Context::check_dichotomy`] and [`Context::check_shift_lemmas`] turn the
//! supporting lemmas into runtime checks; see [`checks`].

pub mod checks;
pub mod params;
pub mod profile;
pub mod table;

pub use checks::{DichotomyReport, ShiftReport, ShiftViolation};
pub use params::{make_params, make_params_reduced, ConstructionParams, ReducedOverrides};
pub use profile::{is_local_max, position_priority, position_value, word_profile, WordProfile};
pub use table::{build_priority_value, AlphaMatrix, PeriodClass, PriorityValueTable};

use serde::Serialize;

use crate::digraph::{build_walk_table, Digraph, WalkTable};
use crate::error::{Error, Result};
use crate::words::{letters_from_index, Word};

pub struct Context {
    graph: Digraph,
    alpha: AlphaMatrix,
    params: ConstructionParams,
    table: PriorityValueTable,
    walks: WalkTable,
}

impl Context {
    /// Validate the graph-side requirements and assemble the context: the
    /// digraph must support walks of every length `>= K` (its uniform walk
    /// constant is at most `K`) and contain `k`-cycle walks for every `k`
    /// in `[2, K)`.
    pub fn build(graph: Digraph, alpha: AlphaMatrix, params: ConstructionParams) -> Result<Self> {
        if graph.vertex_count() == 0 {
            return Err(Error::InvalidGraph("empty digraph".into()));
        }
        if alpha.size() != params.alphabet {
            return Err(Error::InvalidParams(format!(
                "alpha matrix size {} does not match alphabet size {}",
                alpha.size(),
                params.alphabet
            )));
        }
        alpha.check_vertices(graph.vertex_count())?;
        let k_max = (params.left + params.right).max(params.walk_min);
        let walks = build_walk_table(&graph, k_max)?;
        if walks.min_length() > params.walk_min {
            return Err(Error::Hypothesis {
                name: "walk constant",
                detail: format!(
                    "parameters assume K = {} but the digraph only guarantees walks from {}",
                    params.walk_min,
                    walks.min_length()
                ),
            });
        }
        let table = build_priority_value(&graph, &params, &alpha, &walks)?;
        Ok(Context {
            graph,
            alpha,
            params,
            table,
            walks,
        })
    }

    /// Assemble a context from already-built parts, validating dimensions
    /// only. This is the hook the negative-control tests use to inject
    /// tampered tables.
    pub fn from_parts(
        graph: Digraph,
        alpha: AlphaMatrix,
        params: ConstructionParams,
        table: PriorityValueTable,
        walks: WalkTable,
    ) -> Result<Self> {
        if table.window() != params.window || table.alphabet() != params.alphabet {
            return Err(Error::InvalidParams(
                "priority table does not match the parameters".into(),
            ));
        }
        alpha.check_vertices(graph.vertex_count())?;
        Ok(Context {
            graph,
            alpha,
            params,
            table,
            walks,
        })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn alpha(&self) -> &AlphaMatrix {
        &self.alpha
    }

    pub fn params(&self) -> &ConstructionParams {
        &self.params
    }

    pub fn table(&self) -> &PriorityValueTable {
        &self.table
    }

    pub fn walks(&self) -> &WalkTable {
        &self.walks
    }

    pub(crate) fn profile_of(&self, letters: &[u8]) -> WordProfile {
        word_profile(letters, &self.table, &self.params, &self.alpha)
    }

    fn validate_word(&self, x: &Word) -> Result<()> {
        if x.len() != self.params.len {
            return Err(Error::InvalidParams(format!(
                "word length {} differs from N = {}",
                x.len(),
                self.params.len
            )));
        }
        if x.alphabet() != self.params.alphabet {
            return Err(Error::AlphabetMismatch {
                left: x.alphabet(),
                right: self.params.alphabet,
            });
        }
        Ok(())
    }

    /// Evaluate the substitution on a word of length `N`.
    ///
    /// The structural diagnostics (`local-max-bracketing` when no local
    /// maximum exists on one side of `L`, `walk-separation` when the
    /// bracketing maxima are closer than `K`) can only fire at reduced
    /// parameters.
    pub fn eval_f(&self, x: &Word) -> Result<usize> {
        self.validate_word(x)?;
        self.eval_f_letters(x.letters())
    }

    pub(crate) fn eval_f_letters(&self, xs: &[u8]) -> Result<usize> {
        let profile = self.profile_of(xs);
        self.eval_f_profiled(xs, &profile)
    }

    pub(crate) fn eval_f_profiled(&self, xs: &[u8], profile: &WordProfile) -> Result<usize> {
        let l = self.params.left;
        if profile.local_max[l] {
            return Ok(profile.values[l]);
        }
        let p = (0..l).rev().find(|&p| profile.local_max[p]).ok_or_else(|| {
            Error::CorollaryViolated {
                name: "local-max-bracketing",
                word: xs.to_vec(),
                detail: format!("no local maximum at or before L = {l}"),
            }
        })?;
        let q = (l + 1..profile.local_max.len())
            .find(|&q| profile.local_max[q])
            .ok_or_else(|| Error::CorollaryViolated {
                name: "local-max-bracketing",
                word: xs.to_vec(),
                detail: format!("no local maximum after L = {l}"),
            })?;
        if q - p < self.params.walk_min {
            return Err(Error::CorollaryViolated {
                name: "walk-separation",
                word: xs.to_vec(),
                detail: format!(
                    "bracketing local maxima {p} < L < {q} are {} apart, below K = {}",
                    q - p,
                    self.params.walk_min
                ),
            });
        }
        let walk = self.walks.walk(profile.values[p], profile.values[q], q - p)?;
        Ok(walk[l - p])
    }

    pub fn check_dichotomy(&self, x: &Word) -> Result<DichotomyReport> {
        self.validate_word(x)?;
        Ok(checks::check_dichotomy(self, x))
    }

    pub fn check_shift_lemmas(&self, x: &Word, letter: u8) -> Result<ShiftReport> {
        self.validate_word(x)?;
        if letter as usize >= self.params.alphabet {
            return Err(Error::LetterOutOfRange {
                letter: letter as usize,
                alphabet: self.params.alphabet,
            });
        }
        Ok(checks::check_shift_lemmas(self, x, letter))
    }

    /// The table dump used by the CLI: one entry per window word.
    pub fn table_dump(&self) -> Vec<TableEntry> {
        let n = self.params.alphabet;
        let w = self.params.window;
        (0..self.table.entry_count())
            .map(|rank| TableEntry {
                word: letters_from_index(rank, w, n),
                priority: self.table.priority_by_rank(rank),
                value: self.table.value_by_rank(rank),
            })
            .collect()
    }
}

#[derive(Debug, Serialize)]
pub struct TableEntry {
    pub word: Vec<u8>,
    pub priority: i64,
    pub value: usize,
}
