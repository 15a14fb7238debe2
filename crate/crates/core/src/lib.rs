//! Workbench for loop lemmata on finite digraphs and finite idempotent
//! operations.
//!
//! The crate is organized around a handful of small combinatorial theories
//! that together drive the loop-extraction pipelines:
//!
//! * [`words`] — finite words over `[0, n)` with slicing and periodicity
//!   queries, including the Fine–Wilf periodicity oracle.
//! * [`digraph`] — finite digraphs with boolean relational powers, the
//!   uniform walk constant, deterministic walk tables, and the finite-core
//!   and odd-girth reductions.
//! * [`algebra`] — finite operation tables, star powers with their two
//!   recursive decompositions, subpower closure with derivation tracking,
//!   and the Taylor-system finder.
//! * [`construction`] — the priority/value classification of windows that
//!   defines the substitution `f`, together with mechanical validators for
//!   the dichotomy and the shift lemmas.
//! * [`loopfinder`] — end-to-end pipelines: exhaustive or sampled dichotomy
//!   verification and reduced-mode loop extraction through star powers.
//! * [`doubleloop`] — the local free algebra on two generators, the
//!   12-generator quadruple relation, and double-loop term extraction.
//! * [`strongloop`] — the coordinate digraphs `P(t, i)`, their transitive
//!   closures, fan-in witnesses, and the strong loop pipeline.
//!
//! Everything is deterministic: closures iterate in lexicographic order,
//! walks break ties toward the smallest successor, and all randomness flows
//! from a single seed through the counter-based generator in [`rng`].

pub mod algebra;
pub mod bits;
pub mod construction;
pub mod digraph;
pub mod doubleloop;
pub mod error;
pub mod io;
pub mod loopfinder;
pub mod rng;
pub mod strongloop;
pub mod term;
pub mod words;

pub use error::{Error, Result};

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}
